//! Built-in scenarios for the standard families of semigroups with
//! property AA, plus one scenario per corollary.
//!
//! | name               | model (g, d, ρ) | generators                                 |
//! |--------------------|-----------------|--------------------------------------------|
//! | `endo-only`        | (2, 1, 1)       | spanning endomorphisms, no translations    |
//! | `fg-translations`  | (2, 0, 2)       | two translations                           |
//! | `semidirect`       | (1, 2, 1)       | spanning endomorphisms and one translation |
//! | `number-field`     | (2, 1, 1)       | spanning endomorphisms and a basis of `M^g`|
//! | `cor-translation`  | (1, 0, 1)       | one translation                            |
//! | `cor-endo`         | (2, 0, 1)       | spanning endomorphisms                     |
//! | `cor-number-field` | (1, 1, 1)       | spanning endomorphisms and a basis of `M`  |
//!
//! "Spanning endomorphisms" is the set `{E, 2E, E + E'}` over a `Q`-basis of
//! `Mat_g(O)`. For a divisor class `D`, `f^*D` is a polynomial of degree at
//! most 2 in the entries of `f`, and these generators recover all its
//! coefficients, so on degree-one cycles the orbit span equals the span under
//! the whole monoid `End₀(A)`.

use super::scenario::{CycleInput, ErrorCode, Generator, InputError, Scenario, ScenarioOptions};
use crate::divisor_model::{Endo, HermClass, ModelSpec, Pic0Class, PicClass, Point};
use crate::matrix::QuadMatrix;
use crate::scalars::{int, QuadField, QuadScalar};

pub const PRESETS: &[&str] = &[
    "endo-only",
    "fg-translations",
    "semidirect",
    "number-field",
    "cor-translation",
    "cor-endo",
    "cor-number-field",
];

/// A `Q`-basis of `Mat_g(O)`: matrix units times `1` and `ω`.
pub fn endo_basis(spec: &ModelSpec) -> Vec<Endo> {
    let f = spec.field();
    let g = spec.g();
    let mut out = Vec::new();
    for unit in f.rational_basis() {
        for i in 0..g {
            for j in 0..g {
                out.push(Endo(QuadMatrix::from_fn(f, g, g, |r, c| {
                    if (r, c) == (i, j) {
                        unit.clone()
                    } else {
                        f.zero()
                    }
                })));
            }
        }
    }
    out
}

/// `{E, 2E} ∪ {E + E'}` over [`endo_basis`].
pub fn spanning_endos(spec: &ModelSpec) -> Vec<Endo> {
    let basis = endo_basis(spec);
    let mut out = Vec::new();
    for e in &basis {
        out.push(e.clone());
        out.push(Endo(e.matrix().scale(&spec.field().from_int(2))));
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            out.push(a.add(b).expect("same shape"));
        }
    }
    out
}

/// A `Z`-basis of `M^g` for `M = O^ρ`: one unit entry (`1` or `ω`) per point.
pub fn point_basis(spec: &ModelSpec) -> Vec<Point> {
    let f = spec.field();
    let mut out = Vec::new();
    for unit in f.rational_basis() {
        for i in 0..spec.g() {
            for k in 0..spec.rho() {
                out.push(Point(QuadMatrix::from_fn(f, spec.g(), spec.rho(), |r, c| {
                    if (r, c) == (i, k) {
                        unit.clone()
                    } else {
                        f.zero()
                    }
                })));
            }
        }
    }
    out
}

fn s(f: QuadField, re: i64, im: i64) -> QuadScalar {
    f.element(int(re), int(im))
        .expect("imaginary parts only for d > 0")
}

fn mat(f: QuadField, rows: &[&[(i64, i64)]]) -> QuadMatrix {
    QuadMatrix::from_rows(
        f,
        rows.iter()
            .map(|r| r.iter().map(|&(a, b)| s(f, a, b)).collect())
            .collect(),
    )
    .expect("rectangular")
}

fn class(spec: &ModelSpec, ns: &[&[(i64, i64)]], pic0: &[&[(i64, i64)]]) -> PicClass {
    let f = spec.field();
    PicClass::new(
        HermClass::new(mat(f, ns)).expect("hermitian"),
        Pic0Class::new(mat(f, pic0)),
    )
    .expect("consistent field")
}

fn scenario(model: ModelSpec, class: PicClass, endos: Vec<Endo>, points: Vec<Point>) -> Scenario {
    let mut generators: Vec<Generator> = endos.into_iter().map(Generator::Endo).collect();
    generators.extend(points.into_iter().map(Generator::Translation));
    Scenario {
        model,
        cycle: Some(CycleInput::Class { class, power: 1 }),
        generators,
        options: ScenarioOptions::default(),
    }
}

pub fn preset(name: &str) -> Result<Scenario, InputError> {
    let spec = |g, d, rho| ModelSpec::new(g, d, rho).expect("valid preset model");
    Ok(match name {
        "endo-only" => {
            let m = spec(2, 1, 1);
            let d = class(
                &m,
                &[&[(2, 0), (1, 1)], &[(1, -1), (3, 0)]],
                &[&[(1, 0)], &[(0, 1)]],
            );
            scenario(m, d, spanning_endos(&m), vec![])
        }
        "fg-translations" => {
            let m = spec(2, 0, 2);
            let f = m.field();
            let d = class(
                &m,
                &[&[(1, 0), (2, 0)], &[(2, 0), (-1, 0)]],
                &[&[(0, 0), (1, 0)], &[(1, 0), (0, 0)]],
            );
            let a1 = Point(mat(f, &[&[(1, 0), (0, 0)], &[(2, 0), (1, 0)]]));
            let a2 = Point(mat(f, &[&[(0, 0), (3, 0)], &[(-1, 0), (0, 0)]]));
            scenario(m, d, vec![], vec![a1, a2])
        }
        "semidirect" => {
            let m = spec(1, 2, 1);
            let d = class(&m, &[&[(3, 0)]], &[&[(1, 1)]]);
            let a = Point(mat(m.field(), &[&[(1, 1)]]));
            scenario(m, d, spanning_endos(&m), vec![a])
        }
        "number-field" => {
            let m = spec(2, 1, 1);
            let d = class(
                &m,
                &[&[(1, 0), (0, 1)], &[(0, -1), (2, 0)]],
                &[&[(0, 0)], &[(1, 0)]],
            );
            scenario(m, d, spanning_endos(&m), point_basis(&m))
        }
        "cor-translation" => {
            let m = spec(1, 0, 1);
            let d = class(&m, &[&[(1, 0)]], &[&[(0, 0)]]);
            let x = Point(mat(m.field(), &[&[(1, 0)]]));
            scenario(m, d, vec![], vec![x])
        }
        "cor-endo" => {
            let m = spec(2, 0, 1);
            let d = class(
                &m,
                &[&[(1, 0), (1, 0)], &[(1, 0), (2, 0)]],
                &[&[(1, 0)], &[(-2, 0)]],
            );
            scenario(m, d, spanning_endos(&m), vec![])
        }
        "cor-number-field" => {
            let m = spec(1, 1, 1);
            let d = class(&m, &[&[(2, 0)]], &[&[(1, -1)]]);
            scenario(m, d, spanning_endos(&m), point_basis(&m))
        }
        other => {
            return Err(InputError::new(
                ErrorCode::UnknownPreset,
                format!("unknown preset {other:?} (available: {})", PRESETS.join(", ")),
            ))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::scenario::parse_scenario;

    #[test]
    fn presets_are_valid_and_round_trip() {
        for name in PRESETS {
            let s = preset(name).unwrap();
            s.generator_set().unwrap();
            s.sym_cycle().unwrap();
            let again = parse_scenario(s.to_json_string().as_bytes()).unwrap();
            assert_eq!(again, s, "{name}");
        }
        assert_eq!(preset("nope").unwrap_err().code, ErrorCode::UnknownPreset);
    }

    #[test]
    fn generator_counts() {
        let m = ModelSpec::new(2, 1, 1).unwrap();
        assert_eq!(endo_basis(&m).len(), 8);
        assert_eq!(spanning_endos(&m).len(), 8 + 8 + 28);
        assert_eq!(point_basis(&m).len(), 4);
        let q = ModelSpec::new(1, 0, 1).unwrap();
        assert_eq!(spanning_endos(&q).len(), 2);
    }
}
