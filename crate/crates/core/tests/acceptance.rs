//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//!     cargo test --release --test acceptance

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chow_orbits::cli::presets::{preset, PRESETS};
use chow_orbits::cli::run_args;
use chow_orbits::cli::scenario::parse_scenario;
use chow_orbits::cohomology::{
    fiber_integrate, project_pullback, pullback, Factor, LinearSubstitution, Multivector,
};
use chow_orbits::divisor_model::{
    endo_pullback, sample, split_antisym, split_antisym_via_formula, sym_antisym_projectors,
    translate_pullback, HermClass, ModelSpec, Pic0Class, PicClass, Point,
};
use chow_orbits::fourier::{check_inversion, exp_class, poincare_class};
use chow_orbits::matrix::QuadMatrix;
use chow_orbits::orbit::{default_max_rounds, orbit_span, step3_pipeline, SymCycle};
use chow_orbits::scalars::{int, Rational};
use chow_orbits::semigroup::{
    affine_pullback, normalize, random_word, word_pullback, GeneratorSet, Letter, Word,
};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fourier_inversion() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for g in 1..=3 {
        let r = check_inversion(g).map_err(|e| e.to_string())?;
        ensure(r.entries.len() == 1 << (2 * g), || {
            format!("g={g}: wrong basis size")
        })?;
        if let Some(e) = r.failures().next() {
            return Err(format!(
                "g={g}: {} maps to {}, expected {}",
                e.basis, e.image, e.expected
            ));
        }
        checked += r.entries.len();
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:.1?}"))?;
    Ok(format!("g = 1, 2, 3: {checked} basis classes exact in {t:.1?}"))
}

fn pic0_only(spec: &ModelSpec, d: &PicClass) -> PicClass {
    let f = spec.field();
    PicClass::new(
        HermClass::new(QuadMatrix::zeros(f, spec.g(), spec.g())).unwrap(),
        d.alg0.clone(),
    )
    .unwrap()
}

fn lemma_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut counterexample = None;
    for _ in 0..100 {
        let spec = sample::spec(&mut rng);
        let f = spec.field();
        let d = sample::class(&mut rng, &spec, 4);
        for n in -5..=5 {
            let img = endo_pullback(&spec.multiplication(n), &d).unwrap();
            ensure(
                img.ns.matrix() == &d.ns.matrix().scale(&f.from_int(n * n)),
                || format!("[{n}]^* on N"),
            )?;
            ensure(
                img.alg0.matrix() == &d.alg0.matrix().scale(&f.from_int(n)),
                || format!("[{n}]^* on c"),
            )?;
        }
        let (a, b) = (sample::endo(&mut rng, &spec, 3), sample::endo(&mut rng, &spec, 3));
        let sum = a.add(&b).unwrap();
        let d0 = pic0_only(&spec, &d);
        let lhs = endo_pullback(&sum, &d0).unwrap();
        let rhs = endo_pullback(&a, &d0)
            .unwrap()
            .add(&endo_pullback(&b, &d0).unwrap())
            .unwrap();
        ensure(lhs == rhs, || "additivity fails on an N = 0 class".into())?;
        if counterexample.is_none() && !d.ns.matrix().is_zero() {
            let lhs = endo_pullback(&sum, &d).unwrap();
            let rhs = endo_pullback(&a, &d)
                .unwrap()
                .add(&endo_pullback(&b, &d).unwrap())
                .unwrap();
            if lhs != rhs {
                counterexample = Some(format!("g={} d={}", spec.g(), spec.d()));
            }
        }
        let pt = sample::point(&mut rng, &spec, 3);
        ensure(translate_pullback(&pt, &d0).unwrap() == d0, || {
            "t_a^* moved a Pic0 class".into()
        })?;
    }
    let ce = counterexample.ok_or("no additivity counterexample found for N != 0")?;
    Ok(format!(
        "1100 multiplication checks, additivity on Pic0, counterexample at {ce}"
    ))
}

fn splitting_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let spec = sample::spec(&mut rng);
        let d = sample::class(&mut rng, &spec, 4);
        let (p, m) = sym_antisym_projectors(&d);
        ensure(p.add(&m).unwrap() == d, || "p+ + p- != id".into())?;
        ensure(sym_antisym_projectors(&p).0 == p, || "p+ not idempotent".into())?;
        ensure(sym_antisym_projectors(&m).1 == m, || "p- not idempotent".into())?;
        ensure(sym_antisym_projectors(&p).1.is_zero(), || "p- p+ != 0".into())?;
        let phi = split_antisym_via_formula(&d).unwrap();
        ensure(phi.ns.matrix().is_zero() && phi.alg0 == split_antisym(&d), || {
            "formula disagrees with stored c".into()
        })?;
        let f = sample::endo(&mut rng, &spec, 3);
        let (fp, fm) = sym_antisym_projectors(&endo_pullback(&f, &d).unwrap());
        ensure(fp == endo_pullback(&f, &p).unwrap(), || {
            "f^* does not commute with p+".into()
        })?;
        ensure(fm == endo_pullback(&f, &m).unwrap(), || {
            "f^* does not commute with p-".into()
        })?;
    }
    Ok("100 random classes and endomorphisms".into())
}

fn mixed_generators(rng: &mut ChaCha8Rng, spec: ModelSpec) -> GeneratorSet {
    let endos = (0..2).map(|_| sample::endo(rng, &spec, 2)).collect();
    let points = (0..2).map(|_| sample::point(rng, &spec, 3)).collect();
    GeneratorSet::new(spec, endos, points).unwrap()
}

fn step2_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut letters = 0;
    for _ in 0..100 {
        let spec = sample::spec(&mut rng);
        let gens = mixed_generators(&mut rng, spec);
        let d = sample::class(&mut rng, &spec, 3);
        let w = random_word(&mut rng, &gens, 8);
        letters += w.len();
        let direct = word_pullback(&w, &gens, &d).unwrap();
        let normal = affine_pullback(&normalize(&w, &gens).unwrap(), &d).unwrap();
        ensure(direct == normal, || format!("word {w} disagrees"))?;

        // pure translations: c ↦ c + Σ l_i N a_i
        let tw = Word::new(
            (0..rng.gen_range(1..=8))
                .map(|_| Letter::Translation {
                    index: rng.gen_range(0..2),
                    power: rng.gen_range(-3..=3),
                })
                .collect(),
        );
        let mut c = d.alg0.matrix().clone();
        for l in &tw.letters {
            if let Letter::Translation { index, power } = *l {
                let na = d.ns.matrix().mul(gens.points()[index].matrix()).unwrap();
                c = c.add(&na.scale(&spec.field().from_int(power))).unwrap();
            }
        }
        let got = word_pullback(&tw, &gens, &d).unwrap();
        ensure(got.ns == d.ns && got.alg0.matrix() == &c, || {
            format!("translation word {tw}")
        })?;
    }
    Ok(format!(
        "100 mixed words ({letters} letters) and 100 translation words"
    ))
}

/// Gaussian elimination on coordinate vectors, independent of the orbit module.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = &rows[i][c] / &pivot;
                for j in 0..cols {
                    let v = &rows[r][j] * &k;
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

fn enumerated_dimension(gens: &GeneratorSet, d: &PicClass, max_len: usize) -> usize {
    let spec = gens.spec();
    let alphabet: Vec<Letter> = (0..gens.endos().len())
        .map(|index| Letter::Endo { index, power: 1 })
        .chain((0..gens.points().len()).map(|index| Letter::Translation { index, power: 1 }))
        .collect();
    let mut layer = vec![Word::default()];
    let mut vectors = vec![spec.coords(d)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &alphabet {
                let mut v = w.letters.clone();
                v.push(*l);
                let w = Word::new(v);
                vectors.push(spec.coords(&word_pullback(&w, gens, d).unwrap()));
                next.push(w);
            }
        }
        layer = next;
    }
    rank(vectors)
}

fn g1_class(n: i64, c: i64) -> (ModelSpec, PicClass) {
    let spec = ModelSpec::new(1, 0, 1).unwrap();
    let f = spec.field();
    let d = PicClass::new(
        HermClass::new(QuadMatrix::scalar(f, 1, f.from_int(n))).unwrap(),
        Pic0Class::new(QuadMatrix::scalar(f, 1, f.from_int(c))),
    )
    .unwrap();
    (spec, d)
}

fn orbit_finiteness() -> Outcome {
    let mut summary = Vec::new();
    for name in PRESETS {
        let s = preset(name).map_err(|e| e.to_string())?;
        let gens = s.generator_set().map_err(|e| e.to_string())?;
        let x = s.sym_cycle().map_err(|e| e.to_string())?;
        let r = orbit_span(&gens, &x, default_max_rounds(&x)).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.dimension as u128 <= r.ambient_dimension, || {
            format!("{name}: exceeds ambient")
        })?;
        ensure(r.is_invariant_under(&gens.letters()).unwrap(), || {
            format!("{name}: basis not invariant")
        })?;
        summary.push(format!("{name}={}", r.dimension));
    }

    let (spec, d) = g1_class(1, 0);
    let one = Point(QuadMatrix::scalar(spec.field(), 1, spec.field().one()));
    let gens = GeneratorSet::new(spec, vec![], vec![one.clone()]).unwrap();
    let r = orbit_span(&gens, &SymCycle::from_class(&spec, &d, 1).unwrap(), 10).map_err(|e| e.to_string())?;
    let oracle = enumerated_dimension(&gens, &d, 6);
    ensure(r.dimension == 2 && oracle == 2, || {
        format!("t_1 on (1,0): {} vs oracle {oracle}", r.dimension)
    })?;

    let (_, d) = g1_class(0, 1);
    let gens = GeneratorSet::new(spec, vec![spec.multiplication(2)], vec![one]).unwrap();
    let r = orbit_span(&gens, &SymCycle::from_class(&spec, &d, 1).unwrap(), 10).map_err(|e| e.to_string())?;
    let oracle = enumerated_dimension(&gens, &d, 6);
    ensure(r.dimension == 1 && oracle == 1, || {
        format!("[2], t_1 on (0,1): {} vs oracle {oracle}", r.dimension)
    })?;
    ensure(r.is_invariant_under(&gens.letters()).unwrap(), || {
        "g=1 basis not invariant".into()
    })?;

    Ok(format!(
        "presets {}; g=1 scenarios 2 and 1 match enumeration",
        summary.join(" ")
    ))
}

fn random_subst(
    rng: &mut ChaCha8Rng,
    ground: &std::sync::Arc<chow_orbits::cohomology::GroundSpace>,
) -> LinearSubstitution {
    let n = ground.dim();
    let m = (0..n)
        .map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect())
        .collect();
    LinearSubstitution::new(ground, m).unwrap()
}

fn random_mv(
    rng: &mut ChaCha8Rng,
    ground: &std::sync::Arc<chow_orbits::cohomology::GroundSpace>,
    terms: usize,
) -> Multivector {
    let basis = Multivector::basis(ground);
    (0..terms).fold(Multivector::zero(ground), |acc, _| {
        let b = &basis[rng.gen_range(0..basis.len())];
        &acc + &b.scale(&int(rng.gen_range(-3..=3)))
    })
}

fn step3_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for g in 1..=2 {
        let ctx = poincare_class(g).map_err(|e| e.to_string())?;
        let p = ctx.product();
        for _ in 0..50 {
            let f = random_subst(&mut rng, ctx.a());
            let lift = LinearSubstitution::product(&f, &LinearSubstitution::identity(ctx.dual()), p).unwrap();
            let u = random_mv(&mut rng, p, 6);
            // base change: f^* p1_* = p1_* (f × Id)^*
            let lhs = pullback(&f, &fiber_integrate(Factor::Second, &u).unwrap()).unwrap();
            let rhs = fiber_integrate(Factor::Second, &pullback(&lift, &u).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("base change fails at g={g}"))?;
            // projection formula: p1_*(p1^*α ∧ u) = α ∧ p1_*(u)
            let alpha = random_mv(&mut rng, ctx.a(), 3);
            let pa = project_pullback(Factor::First, &alpha, p).unwrap();
            let lhs = fiber_integrate(Factor::Second, &pa.wedge(&u).unwrap()).unwrap();
            let rhs = alpha
                .wedge(&fiber_integrate(Factor::Second, &u).unwrap())
                .unwrap();
            ensure(lhs == rhs, || format!("projection formula fails at g={g}"))?;
            // (f × Id)^*(p2^*η ∧ exp l) = p2^*η ∧ exp((f × Id)^* l)
            let eta = random_mv(&mut rng, ctx.dual(), 3);
            let eta_p = project_pullback(Factor::Second, &eta, p).unwrap();
            let lhs = pullback(&lift, &eta_p.wedge(ctx.exp_l()).unwrap()).unwrap();
            let moved = pullback(&lift, ctx.l()).unwrap();
            let rhs = eta_p.wedge(&exp_class(&moved, p.dim()).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("exp identity fails at g={g}"))?;
        }
    }
    Ok("base change, projection formula and exp identity, 50 random f at g = 1, 2".into())
}

fn step3_pipeline_bounds() -> Outcome {
    let mut cases: Vec<(String, GeneratorSet)> = Vec::new();
    let g1 = ModelSpec::new(1, 0, 1).unwrap();
    cases.push((
        "g1-identity".into(),
        GeneratorSet::new(g1, vec![g1.identity_endo()], vec![]).unwrap(),
    ));
    cases.push((
        "g1-doubling".into(),
        GeneratorSet::new(g1, vec![g1.multiplication(2)], vec![]).unwrap(),
    ));
    for name in PRESETS {
        cases.push((name.to_string(), preset(name).unwrap().generator_set().unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g2 = ModelSpec::new(2, 0, 1).unwrap();
    cases.push(("g2-random".into(), mixed_generators(&mut rng, g2)));
    let mut summary = Vec::new();
    for (name, gens) in &cases {
        let r = step3_pipeline(gens).map_err(|e| format!("{name}: {e}"))?;
        let g = gens.spec().g();
        ensure(r.powers.len() == 2 * g, || {
            format!("{name}: expected {} powers", 2 * g)
        })?;
        ensure(r.within_bounds(), || format!("{name}: power span exceeds bound"))?;
        if name.starts_with("g1-") {
            ensure(r.orbit.dimension == 1, || format!("{name}: expected dimension 1"))?;
        }
        let dims: Vec<String> = r
            .powers
            .iter()
            .map(|p| format!("{}<={}", p.dimension, p.bound))
            .collect();
        summary.push(format!("{name}: {} [{}]", r.orbit.dimension, dims.join(" ")));
    }
    Ok(summary.join("; "))
}

fn cli_round_trip() -> Outcome {
    for name in PRESETS {
        let s = preset(name).map_err(|e| e.to_string())?;
        let text = s.to_json_string();
        let again = parse_scenario(text.as_bytes()).map_err(|e| e.to_string())?;
        ensure(again == s, || format!("{name}: round trip changed the scenario"))?;
        ensure(again.to_json_string() == text, || {
            format!("{name}: serialization not stable")
        })?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("t1.json");
    std::fs::write(&path, preset("cor-translation").unwrap().to_json_string()).map_err(|e| e.to_string())?;
    let path = path.to_str().unwrap();
    let runs: Vec<_> = (0..2)
        .map(|_| run_args(["chow", "--json", "orbit-span", path]))
        .collect();
    ensure(runs[0].code == 0, || {
        format!("orbit-span exit {}: {}", runs[0].code, runs[0].stderr)
    })?;
    ensure(runs[0].stdout == runs[1].stdout, || {
        "reports differ between runs".into()
    })?;
    ensure(runs[0].stdout.contains("\"dimension\": 2"), || {
        "t_1 scenario should report dimension 2".into()
    })?;
    let bin = std::process::Command::new(env!("CARGO_BIN_EXE_chow"))
        .args(["--json", "orbit-span", path])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(bin.stdout == runs[0].stdout.as_bytes(), || {
        "binary output differs from library run".into()
    })?;
    Ok(format!(
        "{} presets round trip; identical reports across 3 runs",
        PRESETS.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Fourier-Mukai inversion", fourier_inversion),
        ("lemma suite", lemma_suite),
        ("splitting suite", splitting_suite),
        ("word normal form oracle", step2_oracle),
        ("orbit finiteness", orbit_finiteness),
        ("product identities", step3_identities),
        ("Poincare class pipeline", step3_pipeline_bounds),
        ("CLI round trip and determinism", cli_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name} ({t:.1?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name} ({t:.1?}): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
