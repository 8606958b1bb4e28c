//! The Fourier transform on a one-dimensional model, class by class.
//!
//!     cargo run --example fourier_transform

use chow_orbits::cli::expr::{format_class, parse_class};
use chow_orbits::fourier::{dual_fourier, fourier, poincare_class};

fn main() {
    let ctx = poincare_class(1).unwrap();
    println!("l      = {}", format_class(ctx.l()));
    println!("exp(l) = {}", format_class(ctx.exp_l()));
    println!();

    for src in ["1", "e1", "e2", "e1^e2", "3 + e1 - 1/2 e1^e2"] {
        let alpha = parse_class(src, ctx.a()).unwrap();
        let image = fourier(&ctx, &alpha).unwrap();
        let back = dual_fourier(&ctx, &image).unwrap();
        println!("F({src}) = {}", format_class(&image));
        println!("   F^F({src}) = {}", format_class(&back));
    }

    // the transform exchanges degree k with degree 2g - k
    let ctx = poincare_class(2).unwrap();
    let alpha = parse_class("e1^e3 + 2 e2^e4", ctx.a()).unwrap();
    let image = fourier(&ctx, &alpha).unwrap();
    println!();
    println!("g = 2: F(e1^e3 + 2 e2^e4) = {}", format_class(&image));
    println!("       degrees {:?}", image.degrees());
}
