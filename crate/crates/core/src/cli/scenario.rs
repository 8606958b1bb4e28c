//! Scenario documents: a model, a cycle, generators and options, as JSON.
//!
//! ```json
//! {
//!   "model": {"g": 1, "d": 0, "rho": 1},
//!   "cycle": {"ns": [[[1,1,0,1]]], "pic0": [[[0,1,0,1]]]},
//!   "generators": [{"type": "translation", "point": [[[1,1,0,1]]]}],
//!   "options": {"max_rounds": 10, "seed": 7}
//! }
//! ```
//!
//! A scalar `re + im·ω` is the four integers `[re_num, re_den, im_num, im_den]`.
//! Integers outside the `i64` range are written as decimal strings.

use std::fmt;

use num::{BigInt, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::divisor_model::{Endo, HermClass, ModelError, ModelSpec, Pic0Class, PicClass, Point};
use crate::matrix::QuadMatrix;
use crate::orbit::{Monomial, SymCycle};
use crate::scalars::{QuadField, QuadScalar, Rational, ScalarError};
use crate::semigroup::{GeneratorSet, SemigroupError, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    Io,
    Schema,
    NonHermitian,
    DMismatch,
    NotSquareFree,
    Shape,
    InvalidModel,
    BadGeneratorIndex,
    Syntax,
    UnknownPreset,
    Unsupported,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Io => "io",
            ErrorCode::Schema => "schema",
            ErrorCode::NonHermitian => "non-hermitian",
            ErrorCode::DMismatch => "d-mismatch",
            ErrorCode::NotSquareFree => "not-square-free",
            ErrorCode::Shape => "shape",
            ErrorCode::InvalidModel => "invalid-model",
            ErrorCode::BadGeneratorIndex => "bad-generator-index",
            ErrorCode::Syntax => "syntax",
            ErrorCode::UnknownPreset => "unknown-preset",
            ErrorCode::Unsupported => "unsupported",
        }
    }
}

/// An input error with a stable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub code: ErrorCode,
    pub message: String,
}

impl InputError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        InputError {
            code,
            message: message.into(),
        }
    }

    fn schema(path: &str, message: impl fmt::Display) -> Self {
        Self::new(ErrorCode::Schema, format!("{path}: {message}"))
    }

    fn at(path: &str, e: ModelError) -> Self {
        let code = match &e {
            ModelError::NotHermitian => ErrorCode::NonHermitian,
            ModelError::Shape { .. } | ModelError::Coordinates { .. } | ModelError::Matrix(_) => {
                ErrorCode::Shape
            }
            ModelError::Scalar(ScalarError::NotSquareFree(_)) => ErrorCode::NotSquareFree,
            ModelError::Scalar(ScalarError::DiscriminantMismatch { .. })
            | ModelError::Scalar(ScalarError::ImaginaryInRationalField) => ErrorCode::DMismatch,
            ModelError::Scalar(_) => ErrorCode::Schema,
            ModelError::InvalidSpec(_) => ErrorCode::InvalidModel,
        };
        Self::new(code, format!("{path}: {e}"))
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code.as_str(), self.message)
    }
}

impl std::error::Error for InputError {}

impl From<SemigroupError> for InputError {
    fn from(e: SemigroupError) -> Self {
        let code = match &e {
            SemigroupError::Syntax { .. } | SemigroupError::NonPositiveEndoExponent(_) => ErrorCode::Syntax,
            SemigroupError::InvalidIndex { .. } => ErrorCode::BadGeneratorIndex,
            SemigroupError::EmptyGenerators => ErrorCode::Schema,
            SemigroupError::Model(m) => return InputError::at("generators", m.clone()),
        };
        InputError::new(code, e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Endo(Endo),
    Translation(Point),
}

/// The cycle of a scenario: a divisor class raised to a power, or explicit
/// monomials in the Picard coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleInput {
    Class { class: PicClass, power: u32 },
    Terms(Vec<(Monomial, Rational)>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioOptions {
    pub degree: Option<usize>,
    pub max_rounds: Option<usize>,
    pub seed: Option<u64>,
    pub word: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub model: ModelSpec,
    pub cycle: Option<CycleInput>,
    pub generators: Vec<Generator>,
    pub options: ScenarioOptions,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

impl Scenario {
    pub fn seed(&self) -> u64 {
        self.options.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn degree_cap(&self) -> usize {
        self.options
            .degree
            .unwrap_or_else(|| SymCycle::default_cap(&self.model))
    }

    pub fn generator_set(&self) -> Result<GeneratorSet, InputError> {
        let mut endos = Vec::new();
        let mut points = Vec::new();
        for g in &self.generators {
            match g {
                Generator::Endo(f) => endos.push(f.clone()),
                Generator::Translation(a) => points.push(a.clone()),
            }
        }
        if endos.is_empty() && points.is_empty() {
            return Err(InputError::new(
                ErrorCode::Schema,
                "generators: at least one generator is required",
            ));
        }
        Ok(GeneratorSet::new(self.model, endos, points)?)
    }

    /// The word from `options.word`, or `override_word` when given, checked
    /// against the generators.
    pub fn word(&self, override_word: Option<&str>) -> Result<Word, InputError> {
        let text = override_word.or(self.options.word.as_deref()).ok_or_else(|| {
            InputError::new(ErrorCode::Schema, "no word given (use --word or options.word)")
        })?;
        let w = Word::parse(text)?;
        self.generator_set()?.validate(&w)?;
        Ok(w)
    }

    pub fn class(&self) -> Result<&PicClass, InputError> {
        match &self.cycle {
            Some(CycleInput::Class { class, .. }) => Ok(class),
            Some(CycleInput::Terms(_)) => Err(InputError::new(
                ErrorCode::Unsupported,
                "this command needs a divisor class, not explicit terms",
            )),
            None => Err(InputError::new(ErrorCode::Schema, "cycle: missing")),
        }
    }

    pub fn sym_cycle(&self) -> Result<SymCycle, InputError> {
        let cap = self.degree_cap();
        let err = |e: crate::orbit::OrbitError| InputError::new(ErrorCode::Shape, format!("cycle: {e}"));
        match &self.cycle {
            Some(CycleInput::Class { class, power }) => Ok(SymCycle::from_class(&self.model, class, cap)
                .map_err(err)?
                .pow(*power)),
            Some(CycleInput::Terms(terms)) => {
                SymCycle::from_terms(&self.model, cap, terms.iter().cloned()).map_err(err)
            }
            None => Err(InputError::new(ErrorCode::Schema, "cycle: missing")),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert(
            "model".into(),
            json!({"g": self.model.g(), "d": self.model.d(), "rho": self.model.rho()}),
        );
        if let Some(cycle) = &self.cycle {
            doc.insert("cycle".into(), cycle_to_json(cycle));
        }
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| match g {
                Generator::Endo(f) => json!({"type": "endo", "matrix": matrix_to_json(f.matrix())}),
                Generator::Translation(a) => {
                    json!({"type": "translation", "point": matrix_to_json(a.matrix())})
                }
            })
            .collect();
        doc.insert("generators".into(), Value::Array(gens));
        let mut opts = Map::new();
        if let Some(d) = self.options.degree {
            opts.insert("degree".into(), json!(d));
        }
        if let Some(r) = self.options.max_rounds {
            opts.insert("max_rounds".into(), json!(r));
        }
        if let Some(s) = self.options.seed {
            opts.insert("seed".into(), json!(s));
        }
        if let Some(w) = &self.options.word {
            opts.insert("word".into(), json!(w));
        }
        doc.insert("options".into(), Value::Object(opts));
        Value::Object(doc)
    }

    pub fn to_json_string(&self) -> String {
        to_pretty(&self.to_json())
    }
}

pub fn parse_scenario(bytes: &[u8]) -> Result<Scenario, InputError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| InputError::new(ErrorCode::Schema, format!("not UTF-8: {e}")))?;
    let value: Value = serde_json::from_str(text).map_err(|e| {
        InputError::new(
            ErrorCode::Schema,
            format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()),
        )
    })?;
    scenario_from_json(&value)
}

pub fn scenario_from_json(value: &Value) -> Result<Scenario, InputError> {
    let doc = object(value, "$")?;
    check_keys(doc, "$", &["model", "cycle", "generators", "options"])?;

    let model_v = object(field(doc, "$", "model")?, "model")?;
    check_keys(model_v, "model", &["g", "d", "rho"])?;
    let g = uint(field(model_v, "model", "g")?, "model.g")?;
    let d = uint(field(model_v, "model", "d")?, "model.d")?;
    let rho = uint(field(model_v, "model", "rho")?, "model.rho")?;
    let model = ModelSpec::new(g as usize, d, rho as usize).map_err(|e| InputError::at("model", e))?;
    let f = model.field();

    let cycle = match doc.get("cycle") {
        None | Some(Value::Null) => None,
        Some(c) => Some(parse_cycle(c, &model)?),
    };

    let mut generators = Vec::new();
    if let Some(list) = doc.get("generators") {
        let list = list
            .as_array()
            .ok_or_else(|| InputError::schema("generators", "expected an array"))?;
        for (i, item) in list.iter().enumerate() {
            let path = format!("generators[{i}]");
            let obj = object(item, &path)?;
            let kind = field(obj, &path, "type")?
                .as_str()
                .ok_or_else(|| InputError::schema(&path, "type must be a string"))?;
            match kind {
                "endo" => {
                    check_keys(obj, &path, &["type", "matrix"])?;
                    let m = matrix(field(obj, &path, "matrix")?, f, &format!("{path}.matrix"))?;
                    let e = Endo(m);
                    model.check_endo(&e).map_err(|err| InputError::at(&path, err))?;
                    generators.push(Generator::Endo(e));
                }
                "translation" => {
                    check_keys(obj, &path, &["type", "point"])?;
                    let m = matrix(field(obj, &path, "point")?, f, &format!("{path}.point"))?;
                    let a = Point(m);
                    model.check_point(&a).map_err(|err| InputError::at(&path, err))?;
                    generators.push(Generator::Translation(a));
                }
                other => {
                    return Err(InputError::schema(
                        &path,
                        format!("unknown generator type {other:?} (expected \"endo\" or \"translation\")"),
                    ))
                }
            }
        }
    }

    let mut options = ScenarioOptions::default();
    if let Some(o) = doc.get("options") {
        let o = object(o, "options")?;
        check_keys(o, "options", &["degree", "max_rounds", "seed", "word"])?;
        if let Some(v) = o.get("degree") {
            options.degree = Some(uint(v, "options.degree")? as usize);
        }
        if let Some(v) = o.get("max_rounds") {
            let r = uint(v, "options.max_rounds")? as usize;
            if r == 0 {
                return Err(InputError::schema("options.max_rounds", "must be at least 1"));
            }
            options.max_rounds = Some(r);
        }
        if let Some(v) = o.get("seed") {
            options.seed = Some(uint(v, "options.seed")?);
        }
        if let Some(v) = o.get("word") {
            let w = v
                .as_str()
                .ok_or_else(|| InputError::schema("options.word", "expected a string"))?;
            options.word = Some(w.to_string());
        }
    }

    let scenario = Scenario {
        model,
        cycle,
        generators,
        options,
    };
    if scenario.options.word.is_some() {
        scenario.word(None)?;
    }
    Ok(scenario)
}

fn parse_cycle(value: &Value, model: &ModelSpec) -> Result<CycleInput, InputError> {
    let obj = object(value, "cycle")?;
    let f = model.field();
    if let Some(terms) = obj.get("terms") {
        check_keys(obj, "cycle", &["terms"])?;
        let terms = terms
            .as_array()
            .ok_or_else(|| InputError::schema("cycle.terms", "expected an array"))?;
        let mut out = Vec::new();
        for (i, t) in terms.iter().enumerate() {
            let path = format!("cycle.terms[{i}]");
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| InputError::schema(&path, "expected [[indices...], [num, den]]"))?;
            let indices = pair[0]
                .as_array()
                .ok_or_else(|| InputError::schema(&path, "monomial must be an array of indices"))?
                .iter()
                .map(|v| {
                    let i = uint(v, &path)?;
                    if i as usize >= model.pic_dim() {
                        return Err(InputError::new(
                            ErrorCode::Shape,
                            format!(
                                "{path}: coordinate {i} out of range (model has {})",
                                model.pic_dim()
                            ),
                        ));
                    }
                    Ok(i as u32)
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.push((Monomial::new(indices), rational_pair(&pair[1], &path)?));
        }
        return Ok(CycleInput::Terms(out));
    }
    check_keys(obj, "cycle", &["ns", "pic0", "power"])?;
    let ns = matrix(field(obj, "cycle", "ns")?, f, "cycle.ns")?;
    let pic0 = matrix(field(obj, "cycle", "pic0")?, f, "cycle.pic0")?;
    let power = match obj.get("power") {
        Some(v) => {
            let p = uint(v, "cycle.power")?;
            if p == 0 {
                return Err(InputError::schema("cycle.power", "must be at least 1"));
            }
            u32::try_from(p).map_err(|_| InputError::schema("cycle.power", "too large"))?
        }
        None => 1,
    };
    let ns = HermClass::new(ns).map_err(|e| InputError::at("cycle.ns", e))?;
    let class = PicClass::new(ns, Pic0Class::new(pic0)).map_err(|e| InputError::at("cycle", e))?;
    model
        .check_class(&class)
        .map_err(|e| InputError::at("cycle", e))?;
    Ok(CycleInput::Class { class, power })
}

fn cycle_to_json(c: &CycleInput) -> Value {
    match c {
        CycleInput::Class { class, power } => {
            let mut m = Map::new();
            m.insert("ns".into(), matrix_to_json(class.ns.matrix()));
            m.insert("pic0".into(), matrix_to_json(class.alg0.matrix()));
            if *power != 1 {
                m.insert("power".into(), json!(power));
            }
            Value::Object(m)
        }
        CycleInput::Terms(terms) => {
            let list: Vec<Value> = terms
                .iter()
                .map(|(m, c)| json!([m.indices(), [int_to_json(c.numer()), int_to_json(c.denom())]]))
                .collect();
            json!({ "terms": list })
        }
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, InputError> {
    v.as_object()
        .ok_or_else(|| InputError::schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, InputError> {
    obj.get(key)
        .ok_or_else(|| InputError::schema(path, format!("missing key {key:?}")))
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), InputError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(InputError::schema(path, format!("unknown key {k:?}"))),
        None => Ok(()),
    }
}

fn uint(v: &Value, path: &str) -> Result<u64, InputError> {
    v.as_u64()
        .ok_or_else(|| InputError::schema(path, "expected a non-negative integer"))
}

fn integer(v: &Value, path: &str) -> Result<BigInt, InputError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| InputError::schema(path, format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| InputError::schema(path, format!("{s:?} is not an integer"))),
        _ => Err(InputError::schema(path, "expected an integer")),
    }
}

fn ratio(num: &Value, den: &Value, path: &str) -> Result<Rational, InputError> {
    let n = integer(num, path)?;
    let d = integer(den, path)?;
    if d.is_zero() {
        return Err(InputError::schema(path, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

fn rational_pair(v: &Value, path: &str) -> Result<Rational, InputError> {
    match v.as_array().map(Vec::as_slice) {
        Some([n, d]) => ratio(n, d, path),
        _ => Err(InputError::schema(path, "expected a rational [num, den]")),
    }
}

fn scalar(v: &Value, f: QuadField, path: &str) -> Result<QuadScalar, InputError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b, c, d]) => {
            let re = ratio(a, b, path)?;
            let im = ratio(c, d, path)?;
            f.element(re, im).map_err(|e| InputError::at(path, e.into()))
        }
        _ => Err(InputError::schema(
            path,
            "expected a scalar [re_num, re_den, im_num, im_den]",
        )),
    }
}

fn matrix(v: &Value, f: QuadField, path: &str) -> Result<QuadMatrix, InputError> {
    let rows = v
        .as_array()
        .ok_or_else(|| InputError::schema(path, "expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| InputError::schema(&format!("{path}[{i}]"), "expected an array of scalars"))?;
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| scalar(x, f, &format!("{path}[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    QuadMatrix::from_rows(f, out).map_err(|e| InputError::new(ErrorCode::Shape, format!("{path}: {e}")))
}

/// Pretty JSON with arrays of plain values kept on one line, so scalars and
/// monomials read as `[1, 2, 0, 1]`.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_pretty(v, 0, &mut out);
    out
}

fn write_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items
                .iter()
                .map(|x| serde_json::to_string(x).expect("values serialize"))
                .collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) if !items.is_empty() => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_pretty(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push_str(": ");
                write_pretty(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("values serialize")),
    }
}

pub(crate) fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

pub(crate) fn scalar_to_json(s: &QuadScalar) -> Value {
    json!([
        int_to_json(s.re().numer()),
        int_to_json(s.re().denom()),
        int_to_json(s.im().numer()),
        int_to_json(s.im().denom())
    ])
}

pub(crate) fn matrix_to_json(m: &QuadMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(scalar_to_json).collect()))
            .collect(),
    )
}
