//! Orbit spans of cycles under affine semigroups.
//!
//! Cycles live in the free truncated symmetric algebra on the Picard model
//! (see [`SymCycle`]). Because the real Chow ring satisfies more relations
//! than this model, every span computed here is an upper bound for the span
//! of the corresponding classes in `CH(A)_Q`.

mod echelon;
mod modular;
mod sym;

pub use echelon::EchelonBasis;
pub use sym::{sym_pullback, Monomial, PicLinearMap, SymCycle};

use modular::{Columns, ModMaps, ModularEchelon};

use std::collections::{BTreeSet, HashMap};

use num::One;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::divisor_model::{ns_lift, Endo, HermClass, ModelError, ModelSpec, Point};
use crate::matrix::QuadMatrix;
use crate::scalars::Rational;
use crate::semigroup::{normalize, random_word, AffineEndo, GeneratorSet, SemigroupError, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("cycle and generators belong to different models")]
    ModelMismatch,
    #[error("variable index {index} out of range (model has {n_vars} coordinates)")]
    VariableOutOfRange { index: usize, n_vars: usize },
    #[error("the orbit of the zero cycle is not defined")]
    ZeroCycle,
    #[error("max_rounds must be at least 1")]
    InvalidRounds,
    #[error("not converged after {rounds} rounds (span dimension so far {dimension})")]
    NotConverged { rounds: usize, dimension: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// Result of a closure run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub dimension: usize,
    /// Reduced echelon basis, sorted by pivot monomial.
    pub basis: Vec<SymCycle>,
    pub generators_applied: usize,
    pub rounds: usize,
    /// Dimension of the graded pieces of the ambient space that `x` touches.
    pub ambient_dimension: u128,
}

impl OrbitReport {
    pub fn echelon(&self) -> EchelonBasis {
        let mut e = EchelonBasis::new();
        for v in &self.basis {
            e.insert(v);
        }
        e
    }

    pub fn contains(&self, v: &SymCycle) -> bool {
        self.echelon().contains(v)
    }

    /// Applies every letter to every basis vector and checks nothing escapes.
    pub fn is_invariant_under(&self, letters: &[AffineEndo]) -> Result<bool, OrbitError> {
        let Some(first) = self.basis.first() else {
            return Ok(true);
        };
        let e = self.echelon();
        for h in letters {
            let map = PicLinearMap::from_affine(first.spec(), h)?;
            for v in &self.basis {
                if !e.contains(&map.apply(v)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `C(n + k - 1, k)`: monomials of size `k` in `n` variables.
pub fn multiset_count(n: u128, k: u32) -> u128 {
    if k == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n + i - 1) / i;
    }
    acc
}

/// Sum of `C(n + k - 1, k)` over the degrees present in `x`.
pub fn ambient_dimension(x: &SymCycle) -> u128 {
    x.degrees()
        .into_iter()
        .map(|k| multiset_count(x.n_vars() as u128, k as u32))
        .sum()
}

/// A round budget that always suffices: each round but the last adds a vector.
pub fn default_max_rounds(x: &SymCycle) -> usize {
    usize::try_from(ambient_dimension(x)).unwrap_or(usize::MAX - 1) + 1
}

/// Span of the orbit of `x` under the semigroup generated by `gens`.
pub fn orbit_span(gens: &GeneratorSet, x: &SymCycle, max_rounds: usize) -> Result<OrbitReport, OrbitError> {
    if gens.spec() != x.spec() {
        return Err(OrbitError::ModelMismatch);
    }
    orbit_span_letters(&gens.letters(), x, max_rounds)
}

/// Images of `vs` under each map, computed in parallel and returned in
/// vector-then-map order.
fn images(maps: &[PicLinearMap], cache: &mut Cache, vs: &[SymCycle]) -> Vec<SymCycle> {
    let missing: Vec<Monomial> = vs
        .iter()
        .flat_map(|v| v.terms().map(|(m, _)| m))
        .filter(|m| !cache.contains_key(*m))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let expansions: Vec<_> = missing
        .par_iter()
        .map(|m| maps.iter().map(|map| map.expand(m)).collect::<Vec<_>>())
        .collect();
    cache.extend(missing.into_iter().zip(expansions));
    let cache = &*cache;
    vs.par_iter()
        .flat_map_iter(|v| (0..maps.len()).map(move |k| sym::apply_expanded(v, |m| &cache[m][k])))
        .collect()
}

/// All monomials of degree `k` in `n` variables, in increasing order.
fn monomials_of_degree(n: usize, k: usize) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u32>| {
                let start = m.last().copied().unwrap_or(0);
                (start..n as u32).map(move |i| {
                    let mut m = m.clone();
                    m.push(i);
                    m
                })
            })
            .collect();
    }
    let mut out: Vec<Monomial> = out.into_iter().map(Monomial::new).collect();
    out.sort();
    out
}

type Cache = HashMap<Monomial, Vec<Vec<(Monomial, Rational)>>>;

/// Closure computed mod `p` and lifted to `Q`. Returns `None` when the lift
/// cannot be confirmed, in which case the exact closure must run instead.
///
/// A lifted span that contains `x` and is invariant under every letter
/// contains the closure, and its dimension is at most the true one, so the
/// two agree.
fn closure_modular(
    maps: &[PicLinearMap],
    cache: &mut Cache,
    x: &SymCycle,
    max_rounds: usize,
) -> Result<Option<OrbitReport>, OrbitError> {
    let ambient = ambient_dimension(x);
    let Some(mut mod_maps) = ModMaps::new(maps) else {
        return Ok(None);
    };
    let mut cols = Columns::default();
    let mut echelon = ModularEchelon::default();
    let components = x.homogeneous_components();
    let mut worklist = Vec::new();
    for c in &components {
        let Some(v) = cols.vector(c) else {
            return Ok(None);
        };
        if echelon.insert(&cols, &v) {
            worklist.push(v);
        }
    }
    let mut rounds = 0;
    let mut applied = 0;
    while !worklist.is_empty() && (echelon.dimension() as u128) < ambient {
        if rounds == max_rounds {
            return Err(OrbitError::NotConverged {
                rounds,
                dimension: echelon.dimension(),
            });
        }
        rounds += 1;
        let mut next = Vec::new();
        for img in mod_maps.images(&mut cols, &worklist) {
            if echelon.dimension() as u128 == ambient {
                break;
            }
            applied += 1;
            if echelon.insert(&cols, &img) {
                next.push(img);
            }
        }
        worklist = next;
    }
    let basis = if echelon.dimension() as u128 == ambient {
        let rows = x
            .degrees()
            .into_iter()
            .flat_map(|k| monomials_of_degree(x.n_vars(), k))
            .map(|m| SymCycle::from_terms(x.spec(), x.degree_cap(), [(m, Rational::one())]))
            .collect::<Result<Vec<_>, _>>()?;
        EchelonBasis::from_reduced_rows(rows)
    } else {
        let Some(basis) = echelon.lift(&cols, x.spec(), x.degree_cap()) else {
            return Ok(None);
        };
        if !components.iter().all(|c| basis.contains(c)) {
            return Ok(None);
        }
        if !images(maps, cache, &basis.rows())
            .iter()
            .all(|v| basis.contains(v))
        {
            return Ok(None);
        }
        basis
    };
    Ok(Some(OrbitReport {
        dimension: basis.dimension(),
        basis: basis.rows(),
        generators_applied: applied,
        rounds,
        ambient_dimension: ambient,
    }))
}

/// Closure with every vector reduced exactly over `Q`.
fn closure_exact(
    maps: &[PicLinearMap],
    cache: &mut Cache,
    x: &SymCycle,
    max_rounds: usize,
) -> Result<OrbitReport, OrbitError> {
    let ambient = ambient_dimension(x);
    let mut basis = EchelonBasis::new();
    let mut worklist: Vec<SymCycle> = x
        .homogeneous_components()
        .iter()
        .filter_map(|c| basis.insert_reduced(c))
        .collect();
    let mut rounds = 0;
    let mut applied = 0;
    while !worklist.is_empty() && (basis.dimension() as u128) < ambient {
        if rounds == max_rounds {
            return Err(OrbitError::NotConverged {
                rounds,
                dimension: basis.dimension(),
            });
        }
        rounds += 1;
        let mut next = Vec::new();
        for img in images(maps, cache, &worklist) {
            if basis.dimension() as u128 == ambient {
                break;
            }
            applied += 1;
            next.extend(basis.insert_reduced(&img));
        }
        worklist = next;
    }
    Ok(OrbitReport {
        dimension: basis.dimension(),
        basis: basis.rows(),
        generators_applied: applied,
        rounds,
        ambient_dimension: ambient,
    })
}

/// Closure under an arbitrary list of affine letters, which may be empty.
///
/// The homogeneous components of `x` seed the worklist. Each round applies
/// every letter to the vectors found independent in the previous round.
/// Independence is first tested modulo a large prime; the resulting span is
/// lifted to `Q` and checked exactly for containing every selected vector
/// and for invariance under every letter. If any check fails the closure is
/// recomputed with exact arithmetic throughout.
pub fn orbit_span_letters(
    letters: &[AffineEndo],
    x: &SymCycle,
    max_rounds: usize,
) -> Result<OrbitReport, OrbitError> {
    if max_rounds == 0 {
        return Err(OrbitError::InvalidRounds);
    }
    if x.is_zero() {
        return Err(OrbitError::ZeroCycle);
    }
    let maps = letters
        .iter()
        .map(|h| PicLinearMap::from_affine(x.spec(), h))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cache = Cache::new();
    match closure_modular(&maps, &mut cache, x, max_rounds)? {
        Some(report) => Ok(report),
        None => closure_exact(&maps, &mut cache, x, max_rounds),
    }
}

/// Outcome of checking random words against a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessCertificate {
    pub words_checked: usize,
    /// Words whose image escaped the span, as text.
    pub failures: Vec<String>,
}

impl SoundnessCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples `n_words` words of length at most `max_len` and checks that each
/// image of `x` lies in the reported span.
pub fn certify<R: Rng + ?Sized>(
    rng: &mut R,
    gens: &GeneratorSet,
    x: &SymCycle,
    report: &OrbitReport,
    n_words: usize,
    max_len: usize,
) -> Result<SoundnessCertificate, OrbitError> {
    let e = report.echelon();
    let mut failures = Vec::new();
    for _ in 0..n_words {
        let w: Word = random_word(rng, gens, max_len);
        let image = sym_pullback(&normalize(&w, gens)?, x)?;
        if !e.contains(&image) {
            failures.push(w.to_string());
        }
    }
    Ok(SoundnessCertificate {
        words_checked: n_words,
        failures,
    })
}

/// Span data for one power of the Poincaré class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSpan {
    pub n: usize,
    /// `C(dim V_l + n - 1, n)`.
    pub bound: u128,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step3Report {
    /// The product model `B = A × Â`.
    pub product: ModelSpec,
    pub poincare: SymCycle,
    /// Lifted generators `(f × Id) ∘ t_{(−a, 0)}`.
    pub lifted: Vec<AffineEndo>,
    pub orbit: OrbitReport,
    pub powers: Vec<PowerSpan>,
}

impl Step3Report {
    pub fn within_bounds(&self) -> bool {
        self.powers.iter().all(|p| p.dimension as u128 <= p.bound)
    }
}

/// Options for [`step3_pipeline_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Step3Options {
    /// Highest power of `l` whose orbit span is computed (default `2g`).
    pub max_power: Option<usize>,
    /// Degree cap on the product (default `2g`, its dimension).
    pub degree: Option<usize>,
}

/// The Poincaré divisor on `A × Â ≅ E^{2g}`: Hermitian form `[[0, I], [I, 0]]`.
pub fn poincare_divisor(spec: &ModelSpec) -> Result<(ModelSpec, HermClass), OrbitError> {
    let g = spec.g();
    let product = spec.with_g(2 * g)?;
    let field = spec.field();
    let n = QuadMatrix::from_fn(field, 2 * g, 2 * g, |i, j| {
        if i + g == j || j + g == i {
            field.one()
        } else {
            field.zero()
        }
    });
    Ok((product, HermClass::new(n)?))
}

/// Lifts the generators of `H` to `A × Â`: an endomorphism `f` becomes
/// `f × Id`, a translation by `a` becomes the translation by `(−a, 0)`.
pub fn lift_generators(gens: &GeneratorSet) -> Result<(ModelSpec, Vec<AffineEndo>), OrbitError> {
    let spec = gens.spec();
    let g = spec.g();
    let product = spec.with_g(2 * g)?;
    let field = spec.field();
    let id = QuadMatrix::identity(field, g);
    let mut out = Vec::new();
    for f in gens.endos() {
        out.push(AffineEndo::from_endo(
            &product,
            Endo(QuadMatrix::block_diag(f.matrix(), &id).map_err(ModelError::from)?),
        ));
    }
    for a in gens.points() {
        let zero = QuadMatrix::zeros(field, g, spec.rho());
        let shift = QuadMatrix::vstack(&a.matrix().neg(), &zero).map_err(ModelError::from)?;
        out.push(AffineEndo::translation(&product, Point(shift)));
    }
    Ok((product, out))
}

pub fn step3_pipeline(gens: &GeneratorSet) -> Result<Step3Report, OrbitError> {
    step3_pipeline_with(gens, Step3Options::default())
}

/// Orbit span of the Poincaré class under the lifted semigroup, together with
/// the spans of its powers `l^n` and the bounds `dim Sym^n(V_l)`.
pub fn step3_pipeline_with(gens: &GeneratorSet, opts: Step3Options) -> Result<Step3Report, OrbitError> {
    let (product, n_p) = poincare_divisor(gens.spec())?;
    let (_, lifted) = lift_generators(gens)?;
    let cap = opts.degree.unwrap_or(product.g());
    let l = SymCycle::from_class(&product, &ns_lift(&n_p, product.rho()), cap)?;
    let orbit = orbit_span_letters(&lifted, &l, default_max_rounds(&l))?;
    let top = opts.max_power.unwrap_or(product.g()).min(cap);
    let mut powers = Vec::new();
    for n in 1..=top {
        let ln = l.pow(n as u32);
        let bound = multiset_count(orbit.dimension as u128, n as u32);
        let dimension = if ln.is_zero() {
            0
        } else {
            orbit_span_letters(&lifted, &ln, default_max_rounds(&ln))?.dimension
        };
        powers.push(PowerSpan { n, bound, dimension });
    }
    Ok(Step3Report {
        product,
        poincare: l,
        lifted,
        orbit,
        powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor_model::{Pic0Class, PicClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g1() -> ModelSpec {
        ModelSpec::new(1, 0, 1).unwrap()
    }

    fn class(spec: &ModelSpec, n: i64, c: i64) -> PicClass {
        let field = spec.field();
        PicClass::new(
            HermClass::new(QuadMatrix::scalar(field, 1, field.from_int(n))).unwrap(),
            Pic0Class::new(QuadMatrix::scalar(field, 1, field.from_int(c))),
        )
        .unwrap()
    }

    fn point(spec: &ModelSpec, a: i64) -> Point {
        Point(QuadMatrix::scalar(spec.field(), 1, spec.field().from_int(a)))
    }

    #[test]
    fn multiplication_keeps_pure_ns_class_on_a_line() {
        let spec = ModelSpec::new(2, 1, 1).unwrap();
        let n =
            crate::divisor_model::sample::hermitian(&mut ChaCha8Rng::seed_from_u64(3), spec.field(), 2, 3);
        let x = SymCycle::from_class(&spec, &ns_lift(&n, 1), 2).unwrap();
        let gens = GeneratorSet::new(spec, vec![spec.multiplication(3)], vec![]).unwrap();
        let r = orbit_span(&gens, &x, 10).unwrap();
        assert_eq!(r.dimension, 1);
    }

    #[test]
    fn translation_orbit_is_two_dimensional() {
        let spec = g1();
        let gens = GeneratorSet::new(spec, vec![], vec![point(&spec, 1)]).unwrap();
        let x = SymCycle::from_class(&spec, &class(&spec, 1, 0), 1).unwrap();
        let r = orbit_span(&gens, &x, 10).unwrap();
        assert_eq!(r.dimension, 2);
        let expect: Vec<SymCycle> = [(1, 0), (0, 1)]
            .iter()
            .map(|&(n, c)| SymCycle::from_class(&spec, &class(&spec, n, c), 1).unwrap())
            .collect();
        assert_eq!(r.basis, expect);

        // independent enumeration: all words t^k for k ≤ 6 give (1, k)
        let mut e = EchelonBasis::new();
        for k in 0..=6 {
            e.insert(&SymCycle::from_class(&spec, &class(&spec, 1, k), 1).unwrap());
        }
        assert_eq!(e.dimension(), 2);
        assert_eq!(e.rows(), expect);
    }

    #[test]
    fn antisymmetric_class_stays_on_a_line() {
        let spec = g1();
        let gens = GeneratorSet::new(spec, vec![spec.multiplication(2)], vec![point(&spec, 1)]).unwrap();
        let x = SymCycle::from_class(&spec, &class(&spec, 0, 1), 1).unwrap();
        let r = orbit_span(&gens, &x, 10).unwrap();
        assert_eq!(r.dimension, 1);
        assert!(r.is_invariant_under(&gens.letters()).unwrap());
    }

    #[test]
    fn empty_letters_give_component_count() {
        let spec = g1();
        let d = SymCycle::from_class(&spec, &class(&spec, 1, 2), 2).unwrap();
        let x = d.add(&d.pow(2)).unwrap();
        let r = orbit_span_letters(&[], &x, 1).unwrap();
        assert_eq!(r.dimension, 2);
        assert_eq!(r.rounds, 1);
        assert_eq!(r.generators_applied, 0);
    }

    #[test]
    fn not_converged_is_reported() {
        let spec = g1();
        let gens = GeneratorSet::new(spec, vec![], vec![point(&spec, 1)]).unwrap();
        let x = SymCycle::from_class(&spec, &class(&spec, 1, 0), 2)
            .unwrap()
            .pow(2);
        assert!(matches!(
            orbit_span(&gens, &x, 1),
            Err(OrbitError::NotConverged { rounds: 1, .. })
        ));
        assert_eq!(orbit_span(&gens, &x, 2).unwrap().dimension, 3);
        assert_eq!(orbit_span(&gens, &x, 0), Err(OrbitError::InvalidRounds));
        let zero = SymCycle::zero(&spec, 1);
        assert_eq!(orbit_span(&gens, &zero, 3), Err(OrbitError::ZeroCycle));
    }

    #[test]
    fn soundness_and_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = ModelSpec::new(2, 0, 1).unwrap();
        let f = crate::divisor_model::sample::endo(&mut rng, &spec, 2);
        let a = crate::divisor_model::sample::point(&mut rng, &spec, 2);
        let gens = GeneratorSet::new(spec, vec![f], vec![a]).unwrap();
        let d =
            SymCycle::from_class(&spec, &crate::divisor_model::sample::class(&mut rng, &spec, 2), 2).unwrap();
        let x = d.add(&d.pow(2)).unwrap();
        let r = orbit_span(&gens, &x, default_max_rounds(&x)).unwrap();
        assert!(r.dimension as u128 <= r.ambient_dimension);
        assert!(r.contains(&x));
        assert!(r.is_invariant_under(&gens.letters()).unwrap());
        for v in &r.basis {
            assert!(v.is_homogeneous());
            assert!(x.degrees().contains(&v.degrees()[0]));
        }
        let cert = certify(&mut rng, &gens, &x, &r, 20, 8).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures);
    }

    #[test]
    fn binomials() {
        assert_eq!(multiset_count(3, 2), 6);
        assert_eq!(multiset_count(1, 4), 1);
        assert_eq!(multiset_count(0, 0), 1);
        assert_eq!(multiset_count(0, 2), 0);
        assert_eq!(multiset_count(5, 3), 35);
    }

    #[test]
    fn step3_identity_and_doubling() {
        let spec = g1();
        for f in [spec.identity_endo(), spec.multiplication(2)] {
            let gens = GeneratorSet::new(spec, vec![f], vec![]).unwrap();
            let rep = step3_pipeline(&gens).unwrap();
            assert_eq!(rep.product.g(), 2);
            assert_eq!(rep.orbit.dimension, 1);
            assert_eq!(rep.powers.len(), 2);
            assert!(rep.within_bounds());
            assert!(rep.powers.iter().all(|p| p.dimension == 1));
        }
    }

    #[test]
    fn step3_translation_lift() {
        let spec = g1();
        let gens = GeneratorSet::new(spec, vec![], vec![point(&spec, 1)]).unwrap();
        let rep = step3_pipeline(&gens).unwrap();
        // t_{(-1,0)}^* l = l + (N_P (-1, 0)) in Pic⁰
        assert_eq!(rep.orbit.dimension, 2);
        assert!(rep.within_bounds());
        assert_eq!(rep.powers[1].bound, 3);
    }
}
