//! Orbit spans under small semigroups, including the built-in scenarios.
//!
//!     cargo run --release --example orbit_closure

use chow_orbits::cli::presets::{preset, PRESETS};
use chow_orbits::divisor_model::{ModelSpec, Point};
use chow_orbits::matrix::QuadMatrix;
use chow_orbits::orbit::{certify, default_max_rounds, orbit_span, SymCycle};
use chow_orbits::semigroup::GeneratorSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    // one translation on an elliptic curve: {D, t^*D, (t^*)^2 D, ...} spans {(1,0), (0,1)}
    let spec = ModelSpec::new(1, 0, 1).unwrap();
    let one = QuadMatrix::scalar(spec.field(), 1, spec.field().one());
    let gens = GeneratorSet::new(spec, vec![], vec![Point(one)]).unwrap();
    let d = SymCycle::from_class(&spec, &spec.basis_class(0), 1).unwrap();
    let r = orbit_span(&gens, &d, 10).unwrap();
    println!("orbit of {d} under t_1: dimension {}", r.dimension);
    for v in &r.basis {
        println!("  {v}");
    }
    println!();

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for name in PRESETS {
        let s = preset(name).unwrap();
        let gens = s.generator_set().unwrap();
        for power in [1, 2] {
            let x = s.sym_cycle().unwrap().pow(power);
            if x.is_zero() {
                continue;
            }
            let r = orbit_span(&gens, &x, default_max_rounds(&x)).unwrap();
            let cert = certify(&mut rng, &gens, &x, &r, 20, 8).unwrap();
            println!(
                "{name:<17} D^{power}: dimension {:>3} of {:>3}, {} rounds, {}/{} random words inside",
                r.dimension,
                r.ambient_dimension,
                r.rounds,
                cert.words_checked - cert.failures.len(),
                cert.words_checked
            );
        }
    }
}
