//! Exact reduced row echelon form over `Q` for sparse cycles.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::sym::{Monomial, SymCycle};
use crate::scalars::Rational;

/// Rows in reduced echelon form. Each row has coefficient 1 at its pivot (its
/// smallest monomial) and no other row mentions that monomial.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    rows: Vec<SymCycle>,
    pivots: BTreeMap<Monomial, usize>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` modulo the span.
    pub fn reduce(&self, v: &SymCycle) -> SymCycle {
        let hits: Vec<(usize, Rational)> = v
            .terms()
            .filter_map(|(m, c)| self.pivots.get(m).map(|&r| (r, c.clone())))
            .collect();
        let mut out = v.clone();
        for (r, c) in hits {
            out.sub_scaled(&c, &self.rows[r]);
        }
        out
    }

    pub fn contains(&self, v: &SymCycle) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SymCycle) -> bool {
        self.insert_reduced(v).is_some()
    }

    /// Adds `v` to the span and returns its normalized remainder, the new
    /// row as inserted, or `None` if `v` was already in the span.
    pub fn insert_reduced(&mut self, v: &SymCycle) -> Option<SymCycle> {
        let r = self.reduce(v);
        let (pivot, lead) = r.leading()?;
        let pivot = pivot.clone();
        let r = r.scale(&(Rational::one() / lead));
        for row in &mut self.rows {
            if let Some(c) = row.coefficient(&pivot).cloned() {
                if !c.is_zero() {
                    row.sub_scaled(&c, &r);
                }
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(r.clone());
        Some(r)
    }

    /// Wraps rows already in reduced echelon form, each with leading
    /// coefficient 1 and no row mentioning another's pivot.
    pub(crate) fn from_reduced_rows(rows: Vec<SymCycle>) -> Self {
        let pivots = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.leading().expect("nonzero row").0.clone(), i))
            .collect();
        Self { rows, pivots }
    }

    /// The rows sorted by pivot.
    pub fn rows(&self) -> Vec<SymCycle> {
        self.pivots.values().map(|&r| self.rows[r].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor_model::ModelSpec;
    use crate::scalars::int;

    fn cycle(spec: &ModelSpec, coeffs: &[i64]) -> SymCycle {
        SymCycle::from_terms(
            spec,
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Monomial::new(vec![i as u32]), int(c))),
        )
        .unwrap()
    }

    #[test]
    fn rank_and_membership() {
        let spec = ModelSpec::new(2, 0, 1).unwrap();
        let mut e = EchelonBasis::new();
        assert!(e.insert(&cycle(&spec, &[1, 2, 0, 0, 1])));
        assert!(e.insert(&cycle(&spec, &[2, 4, 1, 0, 0])));
        assert!(!e.insert(&cycle(&spec, &[3, 6, 1, 0, 1])));
        assert!(!e.insert(&cycle(&spec, &[0, 0, 0, 0, 0])));
        assert_eq!(e.dimension(), 2);
        assert!(e.contains(&cycle(&spec, &[0, 0, 1, 0, -2])));
        assert!(!e.contains(&cycle(&spec, &[0, 0, 0, 1, 0])));
        for row in e.rows() {
            let (_, lead) = row.leading().unwrap();
            assert!(lead.is_one());
        }
    }
}
