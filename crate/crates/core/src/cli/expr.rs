//! A small expression language for exterior classes, e.g. `2 e1^e3 - 1/2 f2 + 3`.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := rational? atom ('^' atom)*  |  rational
//! atom     := 'e' INT | 'f' INT
//! rational := INT ('/' INT)?
//! ```
//!
//! The first term may carry a leading sign. Atoms are looked up by label in
//! the target ground space.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, One, Zero};

use crate::cohomology::{GroundSpace, Multivector};
use crate::scalars::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Atom(char, usize),
    Plus,
    Minus,
    Slash,
    Caret,
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ExprError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let err = |message: String| ExprError {
            line: l,
            column: col,
            message,
        };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            column += 1;
            out.push(Lexed {
                tok,
                line: l,
                column: col,
            });
            continue;
        }
        let mut digits = String::new();
        let kind = if c == 'e' || c == 'f' {
            chars.next();
            column += 1;
            Some(c)
        } else if c.is_ascii_digit() {
            None
        } else {
            return Err(err(format!("unexpected character {c:?}")));
        };
        while let Some(&d) = chars.peek() {
            if !d.is_ascii_digit() {
                break;
            }
            digits.push(d);
            chars.next();
            column += 1;
        }
        let tok = match kind {
            Some(k) => {
                let i: usize = digits
                    .parse()
                    .map_err(|_| err(format!("expected an index after '{k}'")))?;
                Tok::Atom(k, i)
            }
            None => Tok::Int(digits.parse().expect("nonempty digit run")),
        };
        out.push(Lexed {
            tok,
            line: l,
            column: col,
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    ground: &'a Arc<GroundSpace>,
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        let (line, column) = self.here();
        ExprError {
            line,
            column,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Multivector, ExprError> {
        let mut acc = Multivector::zero(self.ground);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -Rational::one()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(&sign);
            match self.peek() {
                None => return Ok(acc),
                Some(Tok::Plus) => sign = Rational::one(),
                Some(Tok::Minus) => sign = -Rational::one(),
                Some(_) => return Err(self.error("expected '+' or '-'")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Multivector, ExprError> {
        let coeff = match self.peek() {
            Some(Tok::Int(_)) => Some(self.rational()?),
            _ => None,
        };
        let mut mv = match (self.peek(), &coeff) {
            (Some(Tok::Atom(..)), _) => self.atom()?,
            (_, Some(_)) => return Ok(Multivector::scalar(self.ground, coeff.expect("checked"))),
            _ => return Err(self.error("expected a coefficient or a generator like e1")),
        };
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let next = self.atom()?;
            mv = mv.wedge(&next).expect("same ground");
        }
        Ok(match coeff {
            Some(c) => mv.scale(&c),
            None => mv,
        })
    }

    fn rational(&mut self) -> Result<Rational, ExprError> {
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Err(self.error("expected an integer"));
        };
        self.pos += 1;
        if self.peek() != Some(&Tok::Slash) {
            return Ok(Rational::from_integer(n));
        }
        self.pos += 1;
        let Some(Tok::Int(d)) = self.peek().cloned() else {
            return Err(self.error("expected a denominator"));
        };
        if d.is_zero() {
            return Err(self.error("zero denominator"));
        }
        self.pos += 1;
        Ok(Rational::new(n, d))
    }

    fn atom(&mut self) -> Result<Multivector, ExprError> {
        let Some(Tok::Atom(k, i)) = self.peek().cloned() else {
            return Err(self.error("expected a generator like e1"));
        };
        let label = format!("{k}{i}");
        let idx = self.ground.index_of(&label).ok_or_else(|| {
            self.error(format!(
                "unknown generator {label} (available: {})",
                self.ground.labels().join(", ")
            ))
        })?;
        self.pos += 1;
        Ok(Multivector::generator(self.ground, idx).expect("index from ground"))
    }
}

/// Parses `src` into a class on `ground`.
pub fn parse_class(src: &str, ground: &Arc<GroundSpace>) -> Result<Multivector, ExprError> {
    let toks = lex(src)?;
    let last_line = src.lines().count().max(1);
    let last_col = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        ground,
        end: (last_line, last_col),
    };
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    p.expr()
}

/// Prints a class in the same grammar, so that parsing the output gives the
/// class back.
pub fn format_class(u: &Multivector) -> String {
    let labels = u.ground().labels();
    let mut out = String::new();
    for (k, (blade, c)) in u.terms().enumerate() {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let names: Vec<&str> = blade.indices().into_iter().map(|i| labels[i].as_str()).collect();
        let coeff = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("{}/{}", mag.numer(), mag.denom())
        };
        if names.is_empty() {
            out.push_str(&coeff);
        } else {
            if !mag.is_one() {
                out.push_str(&coeff);
                out.push(' ');
            }
            out.push_str(&names.join("^"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
