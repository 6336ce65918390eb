//! JSON input documents, the entry expression grammar, and report output.
//!
//! A document looks like
//!
//! ```json
//! {"ring": "Q[s]", "n": 4, "r": 1,
//!  "entries": [["t^5", "t^6", "(s)*t^4 + t^8", "t^9"]],
//!  "dinit": 16, "dmax": 4096, "points": ["generic", "s=0"]}
//! ```
//!
//! with either `"field"` (`Q`, `GF(p)`, `Q(s)`) for a single parameterization
//! or `"ring"` (`Z`, `Q[s]`) for a family. Entries are sums of terms
//! `coeff`, `coeff*t^k` or `t^k`, where `coeff` is an integer, a fraction
//! `a/b`, or a parenthesized polynomial in `s` optionally divided by another
//! one: `(s^2 - 1)/(s + 2)`. Explicit `*` is required.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffield::{
    fmt_rational, FieldDescriptor, FieldError, QPoly, RationalFunction, RingDescriptor,
    RingElement, Scalar, SpecPoint,
};
use crate::engine::{DeltaCertificate, Outcome, Undecided};
use crate::family::{
    FamilyError, FamilyParameterization, FamilyPolynomial, RowOutcome, ScanReport,
};
use crate::param::{ParamError, Parameterization, ValidityReport};
use crate::series::Polynomial;

const MAX_T_DEGREE: usize = 1 << 20;
const MAX_S_DEGREE: u32 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "syntax error in entry (branch {branch}, variable {var}) at column {column}: {message}"
    )]
    Syntax {
        branch: usize,
        var: usize,
        column: usize,
        message: String,
    },
    #[error("entry (branch {branch}, variable {var}) has a nonzero constant term")]
    ConstantTerm { branch: usize, var: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("document error: {0}")]
    Schema(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Engine options carried by a document.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DocOptions {
    pub d_init: Option<usize>,
    pub d_max: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Param {
        param: Parameterization,
        options: DocOptions,
    },
    Family {
        family: FamilyParameterization,
        options: DocOptions,
        points: Option<Vec<SpecPoint>>,
    },
}

impl Document {
    pub fn options(&self) -> DocOptions {
        match self {
            Document::Param { options, .. } | Document::Family { options, .. } => *options,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ring: Option<String>,
    n: usize,
    r: usize,
    entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dinit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<String>>,
}

pub fn parse_field(tag: &str) -> Result<FieldDescriptor, IoError> {
    let t: String = tag.chars().filter(|c| !c.is_whitespace()).collect();
    match t.as_str() {
        "Q" => Ok(FieldDescriptor::Rationals),
        "Q(s)" => Ok(FieldDescriptor::RationalFunctions),
        _ => {
            let digits = t
                .strip_prefix("GF(")
                .and_then(|x| x.strip_suffix(')'))
                .or_else(|| t.strip_prefix("F_"))
                .ok_or_else(|| IoError::Schema(format!("unknown field '{tag}'")))?;
            let p: u64 = digits
                .parse()
                .map_err(|_| IoError::Schema(format!("bad prime in field '{tag}'")))?;
            Ok(FieldDescriptor::prime(p)?)
        }
    }
}

pub fn parse_ring(tag: &str) -> Result<RingDescriptor, IoError> {
    let t: String = tag.chars().filter(|c| !c.is_whitespace()).collect();
    match t.as_str() {
        "Z" => Ok(RingDescriptor::Integers),
        "Q[s]" => Ok(RingDescriptor::PolynomialsOverQ),
        _ => Err(IoError::Schema(format!("unknown ring '{tag}'"))),
    }
}

fn json_error(e: serde_json::Error) -> IoError {
    IoError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(json_error)?;
    if raw.entries.len() != raw.r || raw.entries.iter().any(|row| row.len() != raw.n) {
        return Err(IoError::Shape(format!(
            "expected {} rows of {} entries, found row lengths {:?}",
            raw.r,
            raw.n,
            raw.entries.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    if raw.n == 0 || raw.r == 0 {
        return Err(IoError::Shape("n and r must be at least 1".into()));
    }
    let options = DocOptions {
        d_init: raw.dinit,
        d_max: raw.dmax,
    };
    match (&raw.field, &raw.ring) {
        (Some(f), None) => {
            if raw.points.is_some() {
                return Err(IoError::Schema(
                    "'points' only applies to family documents".into(),
                ));
            }
            let field = parse_field(f)?;
            let mut entries = Vec::with_capacity(raw.r);
            for (j, row) in raw.entries.iter().enumerate() {
                let mut parsed = Vec::with_capacity(raw.n);
                for (i, text) in row.iter().enumerate() {
                    parsed.push(parse_field_entry(text, field, j, i)?);
                }
                entries.push(parsed);
            }
            let param = Parameterization::new(field, raw.n, raw.r, entries)?;
            Ok(Document::Param { param, options })
        }
        (None, Some(rg)) => {
            let ring = parse_ring(rg)?;
            let mut entries = Vec::with_capacity(raw.r);
            for (j, row) in raw.entries.iter().enumerate() {
                let mut parsed = Vec::with_capacity(raw.n);
                for (i, text) in row.iter().enumerate() {
                    parsed.push(parse_ring_entry(text, ring, j, i)?);
                }
                entries.push(parsed);
            }
            let family = FamilyParameterization::new(ring, raw.n, raw.r, entries)?;
            let points = raw
                .points
                .as_ref()
                .map(|ps| {
                    ps.iter()
                        .map(|p| SpecPoint::parse(p, ring))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            Ok(Document::Family {
                family,
                options,
                points,
            })
        }
        _ => Err(IoError::Schema(
            "exactly one of 'field' and 'ring' must be given".into(),
        )),
    }
}

/// Canonical JSON text of a document (single line, fixed key order).
pub fn serialize_document(doc: &Document) -> String {
    serde_json::to_string(&raw_document(doc)).expect("serializable")
}

/// The document as a JSON value, used to echo a family in scan reports.
pub fn document_value(doc: &Document) -> serde_json::Value {
    serde_json::to_value(raw_document(doc)).expect("serializable")
}

fn raw_document(doc: &Document) -> RawDocument {
    match doc {
        Document::Param { param, options } => RawDocument {
            field: Some(param.field().to_string()),
            ring: None,
            n: param.vars(),
            r: param.branches(),
            entries: param
                .entries()
                .iter()
                .map(|row| row.iter().map(format_t_polynomial).collect())
                .collect(),
            dinit: options.d_init,
            dmax: options.d_max,
            points: None,
        },
        Document::Family {
            family,
            options,
            points,
        } => RawDocument {
            field: None,
            ring: Some(family.ring().to_string()),
            n: family.vars(),
            r: family.branches(),
            entries: family
                .entries()
                .iter()
                .map(|row| row.iter().map(format_family_polynomial).collect())
                .collect(),
            dinit: options.d_init,
            dmax: options.d_max,
            points: points
                .as_ref()
                .map(|ps| ps.iter().map(ToString::to_string).collect()),
        },
    }
}

// ---------------------------------------------------------------------------
// Entry grammar

struct EntryParser<'a> {
    chars: Vec<char>,
    pos: usize,
    branch: usize,
    var: usize,
    _src: &'a str,
}

type Terms = Vec<(usize, RationalFunction)>;

impl<'a> EntryParser<'a> {
    fn new(src: &'a str, branch: usize, var: usize) -> Self {
        EntryParser {
            chars: src.chars().collect(),
            pos: 0,
            branch,
            var,
            _src: src,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, IoError> {
        Err(IoError::Syntax {
            branch: self.branch,
            var: self.var,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), IoError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn uint(&mut self) -> Result<BigInt, IoError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn small_uint(&mut self, limit: usize) -> Result<usize, IoError> {
        let v = self.uint()?;
        match usize::try_from(&v) {
            Ok(x) if x <= limit => Ok(x),
            _ => self.err(format!("exponent above {limit}")),
        }
    }

    /// integer or `a/b`
    fn number(&mut self) -> Result<BigRational, IoError> {
        let num = self.uint()?;
        if self.peek() == Some('/') && self.chars.get(self.pos + 1).is_some_and(|c| !c.eq(&'(')) {
            // a digit may follow after whitespace
            let save = self.pos;
            self.pos += 1;
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let den = self.uint()?;
                if den.is_zero() {
                    return self.err("zero denominator");
                }
                return Ok(BigRational::new(num, den));
            }
            self.pos = save;
        }
        Ok(BigRational::from_integer(num))
    }

    fn entry(&mut self) -> Result<Terms, IoError> {
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let mut terms = Vec::new();
        let mut negative = self.leading_sign();
        loop {
            let (deg, c) = self.term()?;
            terms.push((deg, if negative { c.neg() } else { c }));
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(c) => return self.err(format!("unexpected '{c}'")),
            }
        }
        Ok(terms)
    }

    fn leading_sign(&mut self) -> bool {
        if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        }
    }

    fn term(&mut self) -> Result<(usize, RationalFunction), IoError> {
        match self.peek() {
            Some('t') => Ok((self.tpow()?, RationalFunction::one())),
            Some(_) => {
                let c = self.coeff()?;
                if self.eat('*') {
                    if self.peek() != Some('t') {
                        return self.err("expected 't' after '*'");
                    }
                    Ok((self.tpow()?, c))
                } else {
                    Ok((0, c))
                }
            }
            None => self.err("expected a term"),
        }
    }

    fn tpow(&mut self) -> Result<usize, IoError> {
        self.expect('t')?;
        if self.eat('^') {
            self.small_uint(MAX_T_DEGREE)
        } else {
            Ok(1)
        }
    }

    fn coeff(&mut self) -> Result<RationalFunction, IoError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(RationalFunction::constant(self.number()?)),
            Some('(') => {
                self.pos += 1;
                let num = self.spoly()?;
                self.expect(')')?;
                let save = self.pos;
                if self.eat('/') {
                    if self.eat('(') {
                        let den = self.spoly()?;
                        self.expect(')')?;
                        if den.is_zero() {
                            return self.err("zero denominator");
                        }
                        return Ok(RationalFunction::new(num, den));
                    }
                    self.pos = save;
                    return self.err("expected '(' after '/'");
                }
                Ok(RationalFunction::from_poly(num))
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("expected a coefficient"),
        }
    }

    fn spoly(&mut self) -> Result<QPoly, IoError> {
        let mut acc = QPoly::zero();
        let mut negative = self.leading_sign();
        loop {
            let t = self.sterm()?;
            acc = if negative { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn sterm(&mut self) -> Result<QPoly, IoError> {
        let mut acc = self.sfactor()?;
        while self.eat('*') {
            acc = acc.mul(&self.sfactor()?);
        }
        Ok(acc)
    }

    fn sfactor(&mut self) -> Result<QPoly, IoError> {
        let base = match self.peek() {
            Some(c) if c.is_ascii_digit() => QPoly::constant(self.number()?),
            Some('s') => {
                self.pos += 1;
                QPoly::var()
            }
            Some('(') => {
                self.pos += 1;
                let p = self.spoly()?;
                self.expect(')')?;
                p
            }
            Some('t') => return self.err("'t' cannot appear inside a coefficient"),
            Some(c) => return self.err(format!("unexpected '{c}'")),
            None => return self.err("unexpected end of expression"),
        };
        if self.eat('^') {
            let e = self.small_uint(MAX_S_DEGREE as usize)?;
            Ok(base.pow(e as u32))
        } else {
            Ok(base)
        }
    }
}

fn parse_terms(text: &str, branch: usize, var: usize) -> Result<Terms, IoError> {
    EntryParser::new(text, branch, var).entry()
}

fn constant_of(c: &RationalFunction) -> Option<BigRational> {
    if c.denom().is_one() {
        c.numer().as_constant()
    } else {
        None
    }
}

fn to_scalar(c: &RationalFunction, field: FieldDescriptor) -> Result<Scalar, String> {
    match field {
        FieldDescriptor::RationalFunctions => Ok(Scalar::Function(c.clone())),
        _ => {
            let q = constant_of(c).ok_or_else(|| format!("coefficient '{c}' involves s"))?;
            field.from_rational(&q).map_err(|e| e.to_string())
        }
    }
}

fn to_ring_element(c: &RationalFunction, ring: RingDescriptor) -> Result<RingElement, String> {
    if !c.denom().is_one() {
        return Err(format!("coefficient '{c}' is not a polynomial"));
    }
    match ring {
        RingDescriptor::PolynomialsOverQ => Ok(RingElement::Polynomial(c.numer().clone())),
        RingDescriptor::Integers => {
            let q = c
                .numer()
                .as_constant()
                .ok_or_else(|| format!("coefficient '{c}' involves s"))?;
            if !q.denom().is_one() {
                return Err(format!(
                    "coefficient '{}' is not an integer",
                    fmt_rational(&q)
                ));
            }
            Ok(RingElement::Integer(q.numer().clone()))
        }
    }
}

/// Parses one entry over a field.
pub fn parse_field_entry(
    text: &str,
    field: FieldDescriptor,
    branch: usize,
    var: usize,
) -> Result<Polynomial, IoError> {
    let terms = parse_terms(text, branch, var)?;
    let mut converted = Vec::with_capacity(terms.len());
    for (d, c) in terms {
        let s = to_scalar(&c, field).map_err(|message| IoError::Syntax {
            branch,
            var,
            column: 1,
            message,
        })?;
        converted.push((d, s));
    }
    let p = Polynomial::from_terms(field, converted).expect("uniform field");
    if !p.coeff(0).is_zero() {
        return Err(IoError::ConstantTerm { branch, var });
    }
    Ok(p)
}

/// Parses one entry over a base ring.
pub fn parse_ring_entry(
    text: &str,
    ring: RingDescriptor,
    branch: usize,
    var: usize,
) -> Result<FamilyPolynomial, IoError> {
    let terms = parse_terms(text, branch, var)?;
    let mut coeffs: Vec<RingElement> = Vec::new();
    for (d, c) in terms {
        let e = to_ring_element(&c, ring).map_err(|message| IoError::Syntax {
            branch,
            var,
            column: 1,
            message,
        })?;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, ring.zero());
        }
        coeffs[d] = coeffs[d].checked_add(&e)?;
    }
    let p = FamilyPolynomial::new(ring, coeffs)?;
    if !p.coeff(0).is_zero() {
        return Err(IoError::ConstantTerm { branch, var });
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Formatting

/// How a coefficient prints inside a sum.
enum Coef {
    /// A signed rational constant.
    Constant(BigRational),
    /// A parenthesized expression; always joined with `+`.
    Expr(String),
}

fn coef_of_function(f: &RationalFunction) -> Coef {
    match constant_of(f) {
        Some(q) => Coef::Constant(q),
        None => {
            if f.denom().is_one() {
                Coef::Expr(format!("({})", f.numer()))
            } else {
                Coef::Expr(format!("({})/({})", f.numer(), f.denom()))
            }
        }
    }
}

fn coef_of_scalar(c: &Scalar) -> Coef {
    match c {
        Scalar::Rational(q) => Coef::Constant(q.clone()),
        Scalar::Modular(v, _) => Coef::Constant(BigRational::from_integer(BigInt::from(*v))),
        Scalar::Function(f) => coef_of_function(f),
    }
}

fn coef_of_ring(c: &RingElement) -> Coef {
    match c {
        RingElement::Integer(v) => Coef::Constant(BigRational::from_integer(v.clone())),
        RingElement::Polynomial(p) => match p.as_constant() {
            Some(q) => Coef::Constant(q),
            None => Coef::Expr(format!("({p})")),
        },
    }
}

fn format_terms(terms: impl Iterator<Item = (usize, Coef)>) -> String {
    let mut out = String::new();
    for (d, c) in terms {
        let mono = match d {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{d}"),
        };
        let (negative, body) = match c {
            Coef::Constant(q) => {
                let abs = q.abs();
                let body = if mono.is_empty() {
                    fmt_rational(&abs)
                } else if abs.is_one() {
                    mono.clone()
                } else {
                    format!("{}*{mono}", fmt_rational(&abs))
                };
                (q.is_negative(), body)
            }
            Coef::Expr(e) => {
                let body = if mono.is_empty() {
                    e
                } else {
                    format!("{e}*{mono}")
                };
                (false, body)
            }
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical entry text, lowest degree first: `t^2 - 3/4*t^5`, `(s)*t^4 + t^8`.
pub fn format_t_polynomial(p: &Polynomial) -> String {
    format_terms(p.terms().map(|(d, c)| (d, coef_of_scalar(c))))
}

pub fn format_family_polynomial(p: &FamilyPolynomial) -> String {
    format_terms(
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (d, coef_of_ring(c))),
    )
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

#[derive(Serialize)]
struct SemigroupJson<'a> {
    gaps: &'a [usize],
    generators: &'a [usize],
    frobenius: i64,
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    delta: usize,
    cond_exp: &'a [usize],
    cond_total: usize,
    gorenstein: bool,
    det_bound_max: usize,
    det_bound_delta: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    semigroup: Option<SemigroupJson<'a>>,
    certified: bool,
    #[serde(rename = "D_used")]
    d_used: usize,
}

#[derive(Serialize)]
struct UndecidedJson<'a> {
    certified: bool,
    delta_lower_bound: usize,
    #[serde(rename = "D_max")]
    d_max: usize,
    gcd_evidence: &'a [u64],
    note: &'a str,
}

fn certificate_value(c: &DeltaCertificate) -> serde_json::Value {
    serde_json::to_value(CertificateJson {
        delta: c.delta,
        cond_exp: &c.cond_exp,
        cond_total: c.cond_total,
        gorenstein: c.gorenstein,
        det_bound_max: c.det_bound_max,
        det_bound_delta: c.det_bound_delta,
        semigroup: c.semigroup.as_ref().map(|s| SemigroupJson {
            gaps: &s.gaps,
            generators: &s.generators,
            frobenius: s.frobenius,
        }),
        certified: true,
        d_used: c.d_used,
    })
    .expect("serializable")
}

fn undecided_value(u: &Undecided) -> serde_json::Value {
    serde_json::to_value(UndecidedJson {
        certified: false,
        delta_lower_bound: u.delta_bounded,
        d_max: u.d_max,
        gcd_evidence: &u.gcd_evidence,
        note: &u.note,
    })
    .expect("serializable")
}

pub fn outcome_value(outcome: &Outcome) -> serde_json::Value {
    match outcome {
        Outcome::Certified(c) => certificate_value(c),
        Outcome::Undecided(u) => undecided_value(u),
    }
}

#[derive(Serialize)]
struct ValidityJson {
    valid: bool,
    /// 1-based branch numbers
    zero_branches: Vec<usize>,
    duplicate_branches: Vec<[usize; 2]>,
}

fn validity_json(v: &ValidityReport) -> ValidityJson {
    ValidityJson {
        valid: v.valid,
        zero_branches: v
            .branch_nonzero
            .iter()
            .enumerate()
            .filter(|(_, &nz)| !nz)
            .map(|(j, _)| j + 1)
            .collect(),
        duplicate_branches: v
            .duplicate_branches
            .iter()
            .map(|&(a, b)| [a + 1, b + 1])
            .collect(),
    }
}

pub fn validity_value(v: &ValidityReport) -> serde_json::Value {
    serde_json::to_value(validity_json(v)).expect("serializable")
}

#[derive(Serialize)]
struct RowJson {
    point: String,
    valid: bool,
    validity: ValidityJson,
    outcome: &'static str,
    result: serde_json::Value,
}

#[derive(Serialize)]
struct FailureJson {
    point: String,
    reason: String,
}

#[derive(Serialize)]
struct AuditJson {
    pass: bool,
    generic_certified: bool,
    jumping_points: Vec<String>,
    violations: Vec<String>,
    failures: Vec<FailureJson>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ScanJson {
    family: serde_json::Value,
    rows: Vec<RowJson>,
    audit: AuditJson,
}

/// JSON form of a scan. Wall times are left out so that identical inputs
/// give identical bytes.
pub fn scan_value(report: &ScanReport, options: DocOptions) -> serde_json::Value {
    let family = document_value(&Document::Family {
        family: report.family.clone(),
        options,
        points: Some(report.rows.iter().map(|r| r.point.clone()).collect()),
    });
    let rows = report
        .rows
        .iter()
        .map(|row| {
            let (outcome, result) = match &row.outcome {
                RowOutcome::Certified(c) => ("certified", certificate_value(c)),
                RowOutcome::Undecided(u) => ("undecided", undecided_value(u)),
                RowOutcome::InvalidAtPoint => ("invalid", serde_json::Value::Null),
            };
            RowJson {
                point: row.point.to_string(),
                valid: row.validity.valid,
                validity: validity_json(&row.validity),
                outcome,
                result,
            }
        })
        .collect();
    let a = &report.audit;
    let audit = AuditJson {
        pass: a.pass,
        generic_certified: a.generic_certified,
        jumping_points: a.jumping_points.iter().map(ToString::to_string).collect(),
        violations: a.violations.iter().map(ToString::to_string).collect(),
        failures: a
            .failures
            .iter()
            .map(|(p, reason)| FailureJson {
                point: p.to_string(),
                reason: reason.clone(),
            })
            .collect(),
        notes: a.notes.clone(),
    };
    serde_json::to_value(ScanJson {
        family,
        rows,
        audit,
    })
    .expect("serializable")
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders a single-parameterization result.
pub fn emit_outcome(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => outcome_value(outcome).to_string(),
        Format::Human => {
            let mut s = String::new();
            match outcome {
                Outcome::Certified(c) => {
                    let _ = writeln!(s, "{:<16}certified", "status");
                    let _ = writeln!(s, "{:<16}{}", "delta", c.delta);
                    let _ = writeln!(s, "{:<16}{}", "conductor", c.cond_total);
                    let _ = writeln!(s, "{:<16}{}", "exponents", join(&c.cond_exp));
                    let _ = writeln!(
                        s,
                        "{:<16}{}",
                        "gorenstein",
                        if c.gorenstein { "yes" } else { "no" }
                    );
                    let _ = writeln!(s, "{:<16}{}", "det. bound", c.det_bound_max);
                    let _ = writeln!(s, "{:<16}{}", "det. bound (d)", c.det_bound_delta);
                    if let Some(sg) = &c.semigroup {
                        let _ = writeln!(s, "{:<16}{{{}}}", "gaps", join(&sg.gaps));
                        let _ = writeln!(s, "{:<16}<{}>", "generators", join(&sg.generators));
                        let _ = writeln!(s, "{:<16}{}", "frobenius", sg.frobenius);
                    }
                    let _ = writeln!(s, "{:<16}{}", "precision", c.d_used);
                }
                Outcome::Undecided(u) => {
                    let _ = writeln!(s, "{:<16}undecided", "status");
                    let _ = writeln!(s, "{:<16}{}", "delta >=", u.delta_bounded);
                    let _ = writeln!(s, "{:<16}{}", "precision", u.d_max);
                    let ev: Vec<usize> = u.gcd_evidence.iter().map(|&g| g as usize).collect();
                    let _ = writeln!(s, "{:<16}{}", "gcd evidence", join(&ev));
                    let _ = writeln!(s, "{:<16}{}", "note", u.note);
                }
            }
            s
        }
    }
}

/// Renders a scan report; the human table includes wall times.
pub fn emit_scan(report: &ScanReport, options: DocOptions, format: Format) -> String {
    match format {
        Format::Json => scan_value(report, options).to_string(),
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<12} {:<6} {:<10} {:>6} {:>6} {:<12} {:>6} {:>10}",
                "point", "valid", "outcome", "delta", "cond", "exponents", "D", "time"
            );
            for row in &report.rows {
                let (outcome, delta, cond, exps, d) = match &row.outcome {
                    RowOutcome::Certified(c) => (
                        "certified",
                        c.delta.to_string(),
                        c.cond_total.to_string(),
                        join(&c.cond_exp),
                        c.d_used.to_string(),
                    ),
                    RowOutcome::Undecided(u) => (
                        "undecided",
                        format!(">={}", u.delta_bounded),
                        "-".into(),
                        "-".into(),
                        u.d_max.to_string(),
                    ),
                    RowOutcome::InvalidAtPoint => {
                        ("invalid", "-".into(), "-".into(), "-".into(), "-".into())
                    }
                };
                let _ = writeln!(
                    s,
                    "{:<12} {:<6} {:<10} {:>6} {:>6} {:<12} {:>6} {:>8.1}ms",
                    row.point.to_string(),
                    if row.validity.valid { "yes" } else { "no" },
                    outcome,
                    delta,
                    cond,
                    exps,
                    d,
                    row.wall_time.as_secs_f64() * 1e3
                );
            }
            let a = &report.audit;
            let _ = writeln!(s);
            let _ = writeln!(s, "audit: {}", if a.pass { "PASS" } else { "FAIL" });
            let jp: Vec<String> = a.jumping_points.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "jumping points: [{}]", jp.join(", "));
            for (p, reason) in &a.failures {
                let _ = writeln!(s, "failure: {p} ({reason})");
            }
            for note in &a.notes {
                let _ = writeln!(s, "note: {note}");
            }
            s
        }
    }
}
