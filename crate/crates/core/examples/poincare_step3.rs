//! The Poincaré class on A × Â under lifted generators, with the spans of its
//! powers against the symmetric-power bound.
//!
//!     cargo run --release --example poincare_step3

use chow_orbits::cli::presets::preset;
use chow_orbits::orbit::step3_pipeline;

fn main() {
    for name in [
        "cor-translation",
        "semidirect",
        "cor-number-field",
        "fg-translations",
        "cor-endo",
        "endo-only",
    ] {
        let gens = preset(name).unwrap().generator_set().unwrap();
        let r = step3_pipeline(&gens).unwrap();
        println!(
            "{name}: A = E^{}, orbit of l has dimension {}",
            gens.spec().g(),
            r.orbit.dimension
        );
        for p in &r.powers {
            println!("    l^{}: {:>4} <= {}", p.n, p.dimension, p.bound);
        }
        assert!(r.within_bounds());
    }
}
