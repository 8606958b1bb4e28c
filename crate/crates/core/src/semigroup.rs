//! Words over endomorphism and translation generators, and their affine
//! normal form.
//!
//! Every endomorphism of `A` is `x ↦ F(x) + c`, i.e. `t_c ∘ F` with `F` a
//! group endomorphism. [`AffineEndo`] stores that pair; the relation
//! `F ∘ t_b = t_{F(b)} ∘ F` rewrites any word into it.
//!
//! A [`Word`] is written outermost-first:
//!
//! ```text
//! "e1 t2^3"  =  f_1 ∘ t_{a_2}^3        x ↦ f_1(x + 3·a_2)
//! pullback:  (f_1 ∘ t_{a_2}^3)^* = (t_{a_2}^*)^3 ∘ f_1^*
//! ```
//!
//! so on points the rightmost letter acts first, and in a pullback the
//! leftmost letter's pullback is applied first.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::divisor_model::{endo_pullback, translate_pullback, Endo, ModelError, ModelSpec, PicClass, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("word syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("no {kind} generator with index {index} (have {available})")]
    InvalidIndex {
        kind: &'static str,
        index: usize,
        available: usize,
    },
    #[error("endomorphism letters need a positive exponent, got {0}")]
    NonPositiveEndoExponent(i64),
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The declared generators: group endomorphisms and the translation points
/// `a_1..a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    spec: ModelSpec,
    endos: Vec<Endo>,
    points: Vec<Point>,
}

impl GeneratorSet {
    pub fn new(spec: ModelSpec, endos: Vec<Endo>, points: Vec<Point>) -> Result<Self, SemigroupError> {
        if endos.is_empty() && points.is_empty() {
            return Err(SemigroupError::EmptyGenerators);
        }
        for f in &endos {
            spec.check_endo(f)?;
        }
        for a in &points {
            spec.check_point(a)?;
        }
        Ok(GeneratorSet { spec, endos, points })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn endos(&self) -> &[Endo] {
        &self.endos
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Every generator as a one-letter affine map: endomorphisms first, then
    /// translations, each in declaration order.
    pub fn letters(&self) -> Vec<AffineEndo> {
        let endos = self
            .endos
            .iter()
            .map(|f| AffineEndo::from_endo(&self.spec, f.clone()));
        let points = self
            .points
            .iter()
            .map(|a| AffineEndo::translation(&self.spec, a.clone()));
        endos.chain(points).collect()
    }

    fn endo(&self, index: usize) -> Result<&Endo, SemigroupError> {
        self.endos.get(index).ok_or(SemigroupError::InvalidIndex {
            kind: "endomorphism",
            index: index + 1,
            available: self.endos.len(),
        })
    }

    fn point(&self, index: usize) -> Result<&Point, SemigroupError> {
        self.points.get(index).ok_or(SemigroupError::InvalidIndex {
            kind: "translation",
            index: index + 1,
            available: self.points.len(),
        })
    }

    /// Checks every letter of `w` against this set.
    pub fn validate(&self, w: &Word) -> Result<(), SemigroupError> {
        for letter in &w.letters {
            match *letter {
                Letter::Endo { index, power } => {
                    self.endo(index)?;
                    if power == 0 {
                        return Err(SemigroupError::NonPositiveEndoExponent(0));
                    }
                }
                Letter::Translation { index, .. } => {
                    self.point(index)?;
                }
            }
        }
        Ok(())
    }
}

/// One letter of a word. Indices are 0-based here and 1-based in text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Endo { index: usize, power: u32 },
    Translation { index: usize, power: i64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Parses whitespace-separated letters `e<i>[^k]` and `t<i>[^k]`, with
    /// 1-based generator indices.
    pub fn parse(text: &str) -> Result<Word, SemigroupError> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in text.split_whitespace() {
            let start = text[offset..].find(token).expect("token comes from text") + offset;
            offset = start + token.len();
            letters.push(parse_letter(token, start + 1)?);
        }
        Ok(Word { letters })
    }
}

fn parse_letter(token: &str, column: usize) -> Result<Letter, SemigroupError> {
    let syntax = |message: String| SemigroupError::Syntax { column, message };
    let mut chars = token.chars();
    let kind = chars.next().expect("tokens are nonempty");
    let rest = chars.as_str();
    let (index, power) = match rest.split_once('^') {
        Some((i, p)) => (i, Some(p)),
        None => (rest, None),
    };
    let index: usize = index
        .parse()
        .map_err(|_| syntax(format!("bad generator index in {token:?}")))?;
    if index == 0 {
        return Err(syntax("generator indices start at 1".into()));
    }
    let power: i64 = match power {
        Some(p) => p
            .parse()
            .map_err(|_| syntax(format!("bad exponent in {token:?}")))?,
        None => 1,
    };
    match kind {
        'e' => {
            if power <= 0 {
                return Err(SemigroupError::NonPositiveEndoExponent(power));
            }
            let power = u32::try_from(power).map_err(|_| syntax("exponent too large".into()))?;
            Ok(Letter::Endo {
                index: index - 1,
                power,
            })
        }
        't' => Ok(Letter::Translation {
            index: index - 1,
            power,
        }),
        other => Err(syntax(format!(
            "unknown letter kind {other:?}, expected 'e' or 't'"
        ))),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match *l {
                Letter::Endo { index, power: 1 } => format!("e{}", index + 1),
                Letter::Endo { index, power } => format!("e{}^{}", index + 1, power),
                Letter::Translation { index, power: 1 } => format!("t{}", index + 1),
                Letter::Translation { index, power } => format!("t{}^{}", index + 1, power),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The map `x ↦ F(x) + c`, i.e. `t_c ∘ F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineEndo {
    pub linear: Endo,
    pub shift: Point,
}

impl AffineEndo {
    pub fn identity(spec: &ModelSpec) -> Self {
        AffineEndo {
            linear: spec.identity_endo(),
            shift: spec.zero_point(),
        }
    }

    pub fn from_endo(spec: &ModelSpec, f: Endo) -> Self {
        AffineEndo {
            linear: f,
            shift: spec.zero_point(),
        }
    }

    pub fn translation(spec: &ModelSpec, a: Point) -> Self {
        AffineEndo {
            linear: spec.identity_endo(),
            shift: a,
        }
    }

    /// `f ∘ t_b = t_{f(b)} ∘ f`.
    pub fn from_shifted_endo(f: Endo, b: &Point) -> Result<Self, ModelError> {
        let shift = f.apply(b)?;
        Ok(AffineEndo { linear: f, shift })
    }

    /// Writes `self` as `f ∘ t_b`, which needs some `b` with `F(b) = c`;
    /// `None` when `c` is not in the image of `F`.
    pub fn to_shifted_endo(&self) -> Result<Option<(Endo, Point)>, ModelError> {
        let b = self.linear.matrix().solve(self.shift.matrix())?;
        Ok(b.map(|b| (self.linear.clone(), Point(b))))
    }

    /// `self ∘ inner = (F₁F₂, F₁c₂ + c₁)`.
    pub fn compose(&self, inner: &AffineEndo) -> Result<AffineEndo, ModelError> {
        Ok(AffineEndo {
            linear: self.linear.compose(&inner.linear)?,
            shift: self.linear.apply(&inner.shift)?.add(&self.shift)?,
        })
    }

    /// Image of a point.
    pub fn apply(&self, x: &Point) -> Result<Point, ModelError> {
        self.linear.apply(x)?.add(&self.shift)
    }
}

/// Composes a word into a single affine pair.
pub fn normalize(w: &Word, gens: &GeneratorSet) -> Result<AffineEndo, SemigroupError> {
    gens.validate(w)?;
    let spec = gens.spec();
    let mut acc = AffineEndo::identity(spec);
    for letter in &w.letters {
        let step = match *letter {
            Letter::Endo { index, power } => AffineEndo::from_endo(
                spec,
                Endo(gens.endo(index)?.matrix().pow(power).map_err(ModelError::from)?),
            ),
            Letter::Translation { index, power } => {
                AffineEndo::translation(spec, gens.point(index)?.scale_int(power))
            }
        };
        acc = acc.compose(&step)?;
    }
    Ok(acc)
}

/// `(t_c ∘ F)^* = F^* ∘ t_c^*`; closed form `(F†NF, F†c_D + F†N·c)`.
pub fn affine_pullback(h: &AffineEndo, d: &PicClass) -> Result<PicClass, ModelError> {
    endo_pullback(&h.linear, &translate_pullback(&h.shift, d)?)
}

/// Pullback along a word, one letter power at a time; the reference that
/// [`normalize`] is checked against.
pub fn word_pullback(w: &Word, gens: &GeneratorSet, d: &PicClass) -> Result<PicClass, SemigroupError> {
    gens.validate(w)?;
    let mut out = d.clone();
    for letter in &w.letters {
        match *letter {
            Letter::Endo { index, power } => {
                let f = gens.endo(index)?;
                for _ in 0..power {
                    out = endo_pullback(f, &out)?;
                }
            }
            Letter::Translation { index, power } => {
                let a = gens.point(index)?;
                let step = if power < 0 { a.neg() } else { a.clone() };
                for _ in 0..power.unsigned_abs() {
                    out = translate_pullback(&step, &out)?;
                }
            }
        }
    }
    Ok(out)
}

/// The finite set of points over which every word has the form
/// `f ∘ t_{a_n}^{l_n} ∘ … ∘ t_{a_1}^{l_1}`: the declared translation points.
///
/// Any word over the generators normalizes to `t_c ∘ F` with `c` an integer
/// combination of `F`-images of these points, so the generated semigroup sits
/// inside `T₀ ⋊ G₀` with `T₀` generated by them.
pub fn aa_witness(gens: &GeneratorSet) -> Vec<Point> {
    gens.points.clone()
}

/// A random word of length `0..=max_len`: endomorphism powers `1..=2`,
/// translation exponents `−3..=3`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, gens: &GeneratorSet, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let n_endo = gens.endos.len();
    let total = n_endo + gens.points.len();
    let letters = (0..len)
        .map(|_| {
            let k = rng.gen_range(0..total);
            if k < n_endo {
                Letter::Endo {
                    index: k,
                    power: rng.gen_range(1..=2),
                }
            } else {
                Letter::Translation {
                    index: k - n_endo,
                    power: rng.gen_range(-3..=3),
                }
            }
        })
        .collect();
    Word { letters }
}
