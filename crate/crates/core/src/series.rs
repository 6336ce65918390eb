//! Truncated power series in `t`, polynomials in `t`, and branch vectors.
//!
//! A [`TruncatedSeries`] carries its precision `D` explicitly and is known
//! modulo `t^(D+1)`. Mixing precisions is an error; nothing is re-truncated
//! behind the caller's back.

use std::fmt;

use thiserror::Error;

use crate::coeffield::{FieldDescriptor, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch {
        left: FieldDescriptor,
        right: FieldDescriptor,
    },
    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },
    #[error("branch vectors need at least one branch")]
    NoBranches,
}

/// Order of a truncated series: the first nonzero position, or
/// `AbovePrecision` when every known coefficient vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderValue {
    Finite(usize),
    AbovePrecision,
}

/// A polynomial in `t` over a field: dense, constant term first, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldDescriptor,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    /// Builds a polynomial, dropping trailing zeros. Coefficients must lie
    /// in `field`.
    pub fn new(field: FieldDescriptor, mut coeffs: Vec<Scalar>) -> Result<Self, SeriesError> {
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(SeriesError::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Ok(Polynomial { field, coeffs })
    }

    pub fn zero(field: FieldDescriptor) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    /// `c * t^deg`.
    pub fn monomial(c: Scalar, deg: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Polynomial::new(field, coeffs).expect("single field")
    }

    /// Sum of `c * t^d` over the given terms; repeated degrees accumulate.
    pub fn from_terms(
        field: FieldDescriptor,
        terms: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> Result<Self, SeriesError> {
        let mut coeffs: Vec<Scalar> = Vec::new();
        for (d, c) in terms {
            if c.field() != field {
                return Err(SeriesError::FieldMismatch {
                    left: field,
                    right: c.field(),
                });
            }
            if coeffs.len() <= d {
                coeffs.resize(d + 1, field.zero());
            }
            coeffs[d] = &coeffs[d] + &c;
        }
        Polynomial::new(field, coeffs)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, deg: usize) -> Scalar {
        self.coeffs
            .get(deg)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Drops every monomial of degree above `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let keep = self.coeffs.len().min(n + 1);
        Polynomial::new(self.field, self.coeffs[..keep].to_vec()).expect("same field")
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        check_fields(self.field, other.field)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Polynomial::new(self.field, coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self, SeriesError> {
        check_fields(self.field, c.field())?;
        Polynomial::new(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Full product, no truncation.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        check_fields(self.field, other.field)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.field));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.field, out)
    }

    /// `self(inner(t))` truncated at degree `precision`.
    pub fn compose(&self, inner: &Polynomial, precision: usize) -> Result<Self, SeriesError> {
        check_fields(self.field, inner.field)?;
        let inner_s = from_polynomial(inner, precision);
        let mut acc = TruncatedSeries::zero(self.field, precision);
        // Horner in the truncated ring.
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(&inner_s);
            acc.coeffs[0] = &acc.coeffs[0] + c;
        }
        Ok(acc.to_polynomial())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::format_t_polynomial(self))
    }
}

fn check_fields(a: FieldDescriptor, b: FieldDescriptor) -> Result<(), SeriesError> {
    if a == b {
        Ok(())
    } else {
        Err(SeriesError::FieldMismatch { left: a, right: b })
    }
}

/// A power series known modulo `t^(D+1)`; `coeffs.len() == D + 1` always.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    field: FieldDescriptor,
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn zero(field: FieldDescriptor, precision: usize) -> Self {
        TruncatedSeries {
            field,
            coeffs: vec![field.zero(); precision + 1],
        }
    }

    pub fn one(field: FieldDescriptor, precision: usize) -> Self {
        let mut s = Self::zero(field, precision);
        s.coeffs[0] = field.one();
        s
    }

    /// Builds a series from exactly `D + 1` coefficients.
    pub fn from_coeffs(field: FieldDescriptor, coeffs: Vec<Scalar>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::IndexOutOfRange {
                what: "a series needs at least one coefficient".into(),
            });
        }
        check_all(field, &coeffs)?;
        Ok(TruncatedSeries { field, coeffs })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &Scalar {
        &self.coeffs[m]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn order(&self) -> OrderValue {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(m) => OrderValue::Finite(m),
            None => OrderValue::AbovePrecision,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        Ok(TruncatedSeries {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self, SeriesError> {
        check_fields(self.field, c.field())?;
        Ok(TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Truncated product; the caller guarantees matching shape.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.precision();
        let mut out = vec![self.field.zero(); d + 1];
        let rhs: Vec<(usize, &Scalar)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                if i + j > d {
                    break;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        TruncatedSeries {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.clone()).expect("same field")
    }

    fn check_shape(&self, other: &Self) -> Result<(), SeriesError> {
        check_fields(self.field, other.field)?;
        if self.precision() != other.precision() {
            return Err(SeriesError::PrecisionMismatch {
                left: self.precision(),
                right: other.precision(),
            });
        }
        Ok(())
    }
}

fn check_all(field: FieldDescriptor, coeffs: &[Scalar]) -> Result<(), SeriesError> {
    match coeffs.iter().find(|c| c.field() != field) {
        Some(c) => Err(SeriesError::FieldMismatch {
            left: field,
            right: c.field(),
        }),
        None => Ok(()),
    }
}

/// Coefficients of `p` up to degree `precision`; higher terms are dropped.
pub fn from_polynomial(p: &Polynomial, precision: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(p.field(), precision);
    for (d, c) in p.terms() {
        if d > precision {
            break;
        }
        s.coeffs[d] = c.clone();
    }
    s
}

/// An element of `k[[t_1]] + ... + k[[t_r]]` modulo `(t_1,...,t_r)^(D+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BranchVector {
    branches: Vec<TruncatedSeries>,
}

impl BranchVector {
    pub fn new(branches: Vec<TruncatedSeries>) -> Result<Self, SeriesError> {
        let first = branches.first().ok_or(SeriesError::NoBranches)?;
        for b in &branches[1..] {
            first.check_shape(b)?;
        }
        Ok(BranchVector { branches })
    }

    pub fn zero(field: FieldDescriptor, branches: usize, precision: usize) -> Self {
        BranchVector {
            branches: vec![TruncatedSeries::zero(field, precision); branches.max(1)],
        }
    }

    pub fn branches(&self) -> &[TruncatedSeries] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn precision(&self) -> usize {
        self.branches[0].precision()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.branches[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().all(TruncatedSeries::is_zero)
    }

    /// Coefficient at position `m * r + j` of the (degree, branch) order.
    pub fn flatten(&self) -> Vec<Scalar> {
        let r = self.branches.len();
        let len = r * (self.precision() + 1);
        (0..len)
            .map(|pos| self.branches[pos % r].coeffs[pos / r].clone())
            .collect()
    }

    pub(crate) fn from_flat(field: FieldDescriptor, r: usize, flat: &[Scalar]) -> Self {
        let d = flat.len() / r - 1;
        let branches = (0..r)
            .map(|j| TruncatedSeries {
                field,
                coeffs: (0..=d).map(|m| flat[m * r + j].clone()).collect(),
            })
            .collect();
        BranchVector { branches }
    }
}

/// `e_j * t^m`: branch `j` (0-based) equals `t^m`, every other branch is zero.
pub fn unit_vector(
    j: usize,
    m: usize,
    r: usize,
    precision: usize,
    field: FieldDescriptor,
) -> Result<BranchVector, SeriesError> {
    if r == 0 {
        return Err(SeriesError::NoBranches);
    }
    if j >= r {
        return Err(SeriesError::IndexOutOfRange {
            what: format!("branch {j} of {r}"),
        });
    }
    if m > precision {
        return Err(SeriesError::IndexOutOfRange {
            what: format!("exponent {m} above precision {precision}"),
        });
    }
    let mut v = BranchVector::zero(field, r, precision);
    v.branches[j].coeffs[m] = field.one();
    Ok(v)
}
