//! Orbit closure modulo the prime `p = 2^61 - 1`.
//!
//! Vectors independent mod `p` are independent over `Q`, so the rank found
//! here never exceeds the true rank. The reduced echelon form is lifted back
//! to `Q` by rational reconstruction; callers check the lift exactly.

use std::collections::{BTreeMap, HashMap};

use num::bigint::Sign;
use num::{BigInt, ToPrimitive};
use rayon::prelude::*;

use super::echelon::EchelonBasis;
use super::sym::{Monomial, PicLinearMap, SymCycle};
use crate::divisor_model::ModelSpec;
use crate::scalars::Rational;

pub(crate) const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn inv_mod(mut a: u64) -> u64 {
    let mut e = P - 2;
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn int_mod(n: &BigInt) -> u64 {
    let r = (n % BigInt::from(P)).to_i64().expect("residue fits");
    if n.sign() == Sign::Minus && r != 0 {
        (r + P as i64) as u64
    } else {
        r as u64
    }
}

/// Image of a rational mod `p`, if its denominator is a unit.
pub(crate) fn rational_mod(q: &Rational) -> Option<u64> {
    let d = int_mod(q.denom());
    (d != 0).then(|| mul_mod(int_mod(q.numer()), inv_mod(d)))
}

/// The fraction `r/s` with `|r|, s < sqrt(p/2)` congruent to `u`, if any.
pub(crate) fn reconstruct(u: u64) -> Option<Rational> {
    let bound = ((P / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (P as i128, u as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if s1 == 0 || s1.abs() >= bound {
        return None;
    }
    Some(Rational::new(BigInt::from(r1), BigInt::from(s1)))
}

/// Sparse vector over `F_p`, indexed by interned monomials.
pub(crate) type ModVec = Vec<(u32, u64)>;

/// Interns monomials as dense column indices.
#[derive(Debug, Default)]
pub(crate) struct Columns {
    index: HashMap<Monomial, u32>,
    monomials: Vec<Monomial>,
}

impl Columns {
    pub fn intern(&mut self, m: &Monomial) -> u32 {
        if let Some(&i) = self.index.get(m) {
            return i;
        }
        let i = self.monomials.len() as u32;
        self.index.insert(m.clone(), i);
        self.monomials.push(m.clone());
        i
    }

    pub fn monomial(&self, i: u32) -> &Monomial {
        &self.monomials[i as usize]
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn vector(&mut self, v: &SymCycle) -> Option<ModVec> {
        let mut out = Vec::with_capacity(v.len());
        for (m, c) in v.terms() {
            let c = rational_mod(c)?;
            if c != 0 {
                out.push((self.intern(m), c));
            }
        }
        Some(out)
    }
}

/// A [`PicLinearMap`] reduced mod `p`, with expansions of monomials cached
/// by column.
pub(crate) struct ModMaps {
    columns: Vec<Vec<Vec<(u32, u64)>>>,
    cache: Vec<Option<Vec<ModVec>>>,
}

impl ModMaps {
    pub fn new(maps: &[PicLinearMap]) -> Option<Self> {
        let columns = maps
            .iter()
            .map(|map| {
                map.columns()
                    .iter()
                    .map(|col| {
                        col.iter()
                            .map(|(j, a)| rational_mod(a).map(|a| (*j, a)))
                            .collect()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            columns,
            cache: Vec::new(),
        })
    }

    fn expand(&self, k: usize, m: &Monomial) -> BTreeMap<Monomial, u64> {
        let mut partial = BTreeMap::from([(Monomial::one(), 1u64)]);
        for &i in m.indices() {
            let mut next: BTreeMap<Monomial, u64> = BTreeMap::new();
            for (pm, &pc) in &partial {
                for &(j, a) in &self.columns[k][i as usize] {
                    let e = next.entry(pm.times(j)).or_insert(0);
                    *e = add_mod(*e, mul_mod(pc, a));
                }
            }
            next.retain(|_, v| *v != 0);
            partial = next;
        }
        partial
    }

    /// Images of `vs` under each map, in vector-then-map order.
    pub fn images(&mut self, cols: &mut Columns, vs: &[ModVec]) -> Vec<ModVec> {
        let mut missing: Vec<u32> = vs
            .iter()
            .flat_map(|v| v.iter().map(|&(c, _)| c))
            .filter(|&c| !matches!(self.cache.get(c as usize), Some(Some(_))))
            .collect();
        missing.sort_unstable();
        missing.dedup();
        let expanded: Vec<Vec<BTreeMap<Monomial, u64>>> = missing
            .par_iter()
            .map(|&c| {
                (0..self.columns.len())
                    .map(|k| self.expand(k, cols.monomial(c)))
                    .collect()
            })
            .collect();
        for (c, per_map) in missing.into_iter().zip(expanded) {
            let per_map = per_map
                .into_iter()
                .map(|e| e.into_iter().map(|(m, a)| (cols.intern(&m), a)).collect())
                .collect();
            if self.cache.len() <= c as usize {
                self.cache.resize(c as usize + 1, None);
            }
            self.cache[c as usize] = Some(per_map);
        }
        let cache = &self.cache;
        vs.par_iter()
            .flat_map_iter(|v| {
                (0..self.columns.len()).map(move |k| {
                    let mut acc: HashMap<u32, u64> = HashMap::new();
                    for &(c, x) in v {
                        for &(d, a) in &cache[c as usize].as_ref().expect("expanded")[k] {
                            let e = acc.entry(d).or_insert(0);
                            *e = add_mod(*e, mul_mod(x, a));
                        }
                    }
                    let mut out: ModVec = acc.into_iter().filter(|&(_, a)| a != 0).collect();
                    out.sort_unstable();
                    out
                })
            })
            .collect()
    }
}

/// Row echelon form over `F_p`. Each row is monic at its pivot, the smallest
/// monomial it mentions, and no row mentions the pivot of an earlier row.
#[derive(Debug, Default)]
pub(crate) struct ModularEchelon {
    rows: Vec<ModVec>,
    /// Pivot monomial to (column, row).
    pivots: BTreeMap<Monomial, (u32, usize)>,
    acc: Vec<u64>,
}

impl ModularEchelon {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` and keeps it if nonzero; returns whether the rank grew.
    pub fn insert(&mut self, cols: &Columns, v: &ModVec) -> bool {
        self.acc.resize(cols.len(), 0);
        let mut touched: Vec<u32> = Vec::with_capacity(v.len());
        for &(c, x) in v {
            self.acc[c as usize] = x;
            touched.push(c);
        }
        for &(pc, r) in self.pivots.values() {
            let c = self.acc[pc as usize];
            if c == 0 {
                continue;
            }
            for &(d, a) in &self.rows[r] {
                let e = &mut self.acc[d as usize];
                if *e == 0 {
                    touched.push(d);
                }
                *e = add_mod(*e, P - mul_mod(c, a));
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut row: ModVec = Vec::new();
        for c in touched {
            let x = std::mem::take(&mut self.acc[c as usize]);
            if x != 0 {
                row.push((c, x));
            }
        }
        let Some(&(pivot, lead)) = row
            .iter()
            .min_by(|a, b| cols.monomial(a.0).cmp(cols.monomial(b.0)))
        else {
            return false;
        };
        let inv = inv_mod(lead);
        for e in &mut row {
            e.1 = mul_mod(e.1, inv);
        }
        self.pivots
            .insert(cols.monomial(pivot).clone(), (pivot, self.rows.len()));
        self.rows.push(row);
        true
    }

    /// Lifts the reduced echelon form to `Q` by rational reconstruction.
    pub fn lift(&self, cols: &Columns, spec: &ModelSpec, degree_cap: usize) -> Option<EchelonBasis> {
        let mut rows: Vec<(u32, BTreeMap<u32, u64>)> = self
            .pivots
            .values()
            .map(|&(c, r)| (c, self.rows[r].iter().copied().collect()))
            .collect();
        for i in (0..rows.len()).rev() {
            let (pivot, row) = rows[i].clone();
            for (_, other) in rows[..i].iter_mut() {
                let Some(c) = other.get(&pivot).copied() else {
                    continue;
                };
                for (&d, &a) in &row {
                    let e = other.entry(d).or_insert(0);
                    *e = add_mod(*e, P - mul_mod(c, a));
                    if *e == 0 {
                        other.remove(&d);
                    }
                }
            }
        }
        let lifted = rows
            .into_iter()
            .map(|(_, row)| {
                let terms = row
                    .into_iter()
                    .map(|(d, a)| reconstruct(a).map(|q| (cols.monomial(d).clone(), q)))
                    .collect::<Option<Vec<_>>>()?;
                SymCycle::from_terms(spec, degree_cap, terms).ok()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(EchelonBasis::from_reduced_rows(lifted))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn rank_matches_exact_echelon() {
        let spec = ModelSpec::new(2, 0, 1).unwrap();
        let mut cols = Columns::default();
        let mut e = ModularEchelon::default();
        let mut exact = EchelonBasis::new();
        for coeffs in [
            [1, 2, 0, 0, 1],
            [2, 4, 1, 0, 0],
            [3, 6, 1, 0, 1],
            [-1, -2, 0, 0, -1],
            [0, 0, 0, 0, 0],
        ] {
            let v = cycle(&spec, &coeffs);
            let m = cols.vector(&v).unwrap();
            assert_eq!(e.insert(&cols, &m), exact.insert(&v), "{coeffs:?}");
        }
        assert_eq!(e.dimension(), 2);
        assert_eq!(e.lift(&cols, &spec, 1).unwrap().rows(), exact.rows());
        let huge = SymCycle::from_terms(
            &spec,
            1,
            [(Monomial::new(vec![0]), Rational::new(1.into(), P.into()))],
        )
        .unwrap();
        assert_eq!(cols.vector(&huge), None);
    }

    #[test]
    fn reconstruction() {
        for (n, d) in [(3i64, 7i64), (-5, 12), (0, 1), (1_000_003, 999_983)] {
            let q = Rational::new(n.into(), d.into());
            assert_eq!(reconstruct(rational_mod(&q).unwrap()), Some(q));
        }
    }
}
