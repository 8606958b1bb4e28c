//! Divisor classes on E^g: pullbacks along [n], translations and
//! endomorphisms, and the symmetric/antisymmetric splitting.
//!
//!     cargo run --example pic_splitting

use chow_orbits::divisor_model::{
    endo_pullback, minus_one_pullback, sample, split_antisym, sym_antisym_projectors, translate_pullback,
    ModelSpec, Pic0Class,
};
use chow_orbits::scalars::int;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = ModelSpec::new(2, 1, 1).unwrap();
    let d = sample::class(&mut rng, &spec, 3);
    println!(
        "model: E^{} with End(E) ⊗ Q = Q(sqrt(-{})), rank {}",
        spec.g(),
        spec.d(),
        spec.rho()
    );
    println!(
        "D = (N, c) with\n  N = {}\n  c = {}",
        d.ns.matrix(),
        d.alg0.matrix()
    );

    for n in [-2, 3] {
        let img = endo_pullback(&spec.multiplication(n), &d).unwrap();
        let expect_ns = d.ns.matrix().scale(&spec.field().from_int(n * n));
        assert_eq!(img.ns.matrix(), &expect_ns);
        assert_eq!(
            img.alg0,
            Pic0Class::new(d.alg0.matrix().scale(&spec.field().from_int(n)))
        );
        println!("[{n}]^*D = (({n})^2 N, ({n}) c)");
    }

    let a = sample::point(&mut rng, &spec, 2);
    let t = translate_pullback(&a, &d).unwrap();
    println!("t_a^*D with a = {}:\n  c -> {}", a.matrix(), t.alg0.matrix());

    let (sym, anti) = sym_antisym_projectors(&d);
    println!(
        "symmetric part:     N = {}, c = {}",
        sym.ns.matrix(),
        sym.alg0.matrix()
    );
    println!(
        "antisymmetric part: N = {}, c = {}",
        anti.ns.matrix(),
        anti.alg0.matrix()
    );
    assert_eq!(minus_one_pullback(&anti), anti.scale(&int(-1)));
    assert_eq!(split_antisym(&d), d.alg0);
}
