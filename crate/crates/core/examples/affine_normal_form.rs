//! Words over endomorphisms and translations, rewritten as x ↦ F(x) + c.
//!
//!     cargo run --example affine_normal_form

use chow_orbits::divisor_model::{Endo, HermClass, ModelSpec, Pic0Class, PicClass, Point};
use chow_orbits::matrix::QuadMatrix;
use chow_orbits::semigroup::{affine_pullback, normalize, word_pullback, GeneratorSet, Word};

fn main() {
    let spec = ModelSpec::new(2, 0, 1).unwrap();
    let f = spec.field();
    let m = |rows: &[&[i64]]| {
        QuadMatrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    };
    let gens = GeneratorSet::new(
        spec,
        vec![Endo(m(&[&[1, 1], &[0, 1]])), spec.multiplication(2)],
        vec![Point(m(&[&[1], &[0]])), Point(m(&[&[0], &[1]]))],
    )
    .unwrap();
    let d = PicClass::new(
        HermClass::new(m(&[&[2, 1], &[1, 1]])).unwrap(),
        Pic0Class::new(m(&[&[0], &[0]])),
    )
    .unwrap();

    for text in ["t1^3", "e1 t2", "e2 t1 e1 t2^-1", "t1 t2 t1^-1 e1^2"] {
        let w = Word::parse(text).unwrap();
        let h = normalize(&w, &gens).unwrap();
        println!("{text:<18} F = {}  c = {}", h.linear.matrix(), h.shift.matrix());
        match h.to_shifted_endo().unwrap() {
            Some((_, b)) => println!("{:<18} = f ∘ t_b with b = {}", "", b.matrix()),
            None => println!("{:<18} c is not in the image of F", ""),
        }
        let direct = word_pullback(&w, &gens, &d).unwrap();
        assert_eq!(direct, affine_pullback(&h, &d).unwrap());
        println!("{:<18} pullback of D: c = {}", "", direct.alg0.matrix());
    }
}
