//! Exact coefficient fields (Q, F_p, Q(s)) and base rings (Z, Q[s]).
//!
//! Every value is kept in a canonical form, so structural equality is
//! mathematical equality. Arithmetic between values of different fields is
//! an error for the checked entry points ([`arith`], [`invert`]) and a panic
//! for the operator impls, which callers only use after a shape check.

mod prime;
mod qpoly;
mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use prime::{is_prime, Prime, PRIME_LIMIT};
pub use qpoly::QPoly;
pub use ratfunc::RationalFunction;

pub(crate) use qpoly::fmt_rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch {
        left: FieldDescriptor,
        right: FieldDescriptor,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} exceeds 2^61")]
    PrimeTooLarge(u64),
    #[error("point {point} is incompatible with {ring}")]
    IncompatiblePoint { point: String, ring: RingDescriptor },
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },
    #[error("{value} cannot be represented in {target}")]
    NotRepresentable { value: String, target: String },
}

/// The coefficient field of a parameterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField(Prime),
    /// Q(s).
    RationalFunctions,
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Prime::new(p).map(FieldDescriptor::PrimeField)
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldDescriptor::Rationals => Scalar::Rational(BigRational::zero()),
            FieldDescriptor::PrimeField(p) => Scalar::Modular(0, p),
            FieldDescriptor::RationalFunctions => Scalar::Function(RationalFunction::zero()),
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldDescriptor::Rationals => Scalar::Rational(BigRational::one()),
            FieldDescriptor::PrimeField(p) => Scalar::Modular(1 % p.get(), p),
            FieldDescriptor::RationalFunctions => Scalar::Function(RationalFunction::one()),
        }
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            FieldDescriptor::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldDescriptor::PrimeField(p) => Scalar::Modular(reduce_bigint(v, p), p),
            FieldDescriptor::RationalFunctions => Scalar::Function(RationalFunction::constant(
                BigRational::from_integer(v.clone()),
            )),
        }
    }

    /// Maps a rational constant into the field; fails in F_p when the
    /// denominator vanishes mod p.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar, FieldError> {
        match self {
            FieldDescriptor::Rationals => Ok(Scalar::Rational(q.clone())),
            FieldDescriptor::RationalFunctions => {
                Ok(Scalar::Function(RationalFunction::constant(q.clone())))
            }
            FieldDescriptor::PrimeField(p) => {
                let den = reduce_bigint(q.denom(), p);
                if den == 0 {
                    return Err(FieldError::NotRepresentable {
                        value: fmt_rational(q),
                        target: self.to_string(),
                    });
                }
                let num = reduce_bigint(q.numer(), p);
                Ok(Scalar::Modular(p.mul(num, p.inv(den)), p))
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldDescriptor::PrimeField(p) => p.get(),
            _ => 0,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::PrimeField(p) => write!(f, "GF({p})"),
            FieldDescriptor::RationalFunctions => write!(f, "Q(s)"),
        }
    }
}

fn reduce_bigint(v: &BigInt, p: Prime) -> u64 {
    let m = BigInt::from(p.get());
    v.mod_floor(&m).to_u64().expect("residue fits in u64")
}

/// An element of one of the coefficient fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    /// Residue in `[0, p)`.
    Modular(u64, Prime),
    Function(RationalFunction),
}

impl Scalar {
    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Rational(_) => FieldDescriptor::Rationals,
            Scalar::Modular(_, p) => FieldDescriptor::PrimeField(*p),
            Scalar::Function(_) => FieldDescriptor::RationalFunctions,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(v, _) => *v == 0,
            Scalar::Function(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular(v, _) => *v == 1,
            Scalar::Function(f) => f.is_one(),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular(a, p), Scalar::Modular(b, q)) if p == q => {
                Scalar::Modular(p.add(*a, *b), *p)
            }
            (Scalar::Function(a), Scalar::Function(b)) => Scalar::Function(a.add(b)),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Modular(a, p), Scalar::Modular(b, q)) if p == q => {
                Scalar::Modular(p.sub(*a, *b), *p)
            }
            (Scalar::Function(a), Scalar::Function(b)) => Scalar::Function(a.sub(b)),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular(a, p), Scalar::Modular(b, q)) if p == q => {
                Scalar::Modular(p.mul(*a, *b), *p)
            }
            (Scalar::Function(a), Scalar::Function(b)) => Scalar::Function(a.mul(b)),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular(v, p) => Scalar::Modular(p.inv(*v), *p),
            Scalar::Function(f) => Scalar::Function(f.inv().expect("nonzero")),
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn mismatch(&self, other: &Scalar) -> FieldError {
        FieldError::FieldMismatch {
            left: self.field(),
            right: other.field(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", fmt_rational(q)),
            Scalar::Modular(v, _) => write!(f, "{v}"),
            Scalar::Function(r) => write!(f, "{r}"),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Modular(v, p) => Scalar::Modular(p.neg(*v), *p),
            Scalar::Function(f) => Scalar::Function(f.neg()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked field arithmetic.
pub fn arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

pub fn invert(a: &Scalar) -> Result<Scalar, FieldError> {
    a.inv()
}

/// The base ring of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    /// Q[s].
    PolynomialsOverQ,
}

impl RingDescriptor {
    pub fn zero(self) -> RingElement {
        match self {
            RingDescriptor::Integers => RingElement::Integer(BigInt::zero()),
            RingDescriptor::PolynomialsOverQ => RingElement::Polynomial(QPoly::zero()),
        }
    }

    /// Fraction field, the residue field of the generic point.
    pub fn fraction_field(self) -> FieldDescriptor {
        match self {
            RingDescriptor::Integers => FieldDescriptor::Rationals,
            RingDescriptor::PolynomialsOverQ => FieldDescriptor::RationalFunctions,
        }
    }

    pub fn generic_point(self) -> SpecPoint {
        match self {
            RingDescriptor::Integers => SpecPoint::GenericZ,
            RingDescriptor::PolynomialsOverQ => SpecPoint::GenericS,
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::PolynomialsOverQ => write!(f, "Q[s]"),
        }
    }
}

/// An element of Z or Q[s].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElement {
    Integer(BigInt),
    Polynomial(QPoly),
}

impl RingElement {
    pub fn ring(&self) -> RingDescriptor {
        match self {
            RingElement::Integer(_) => RingDescriptor::Integers,
            RingElement::Polynomial(_) => RingDescriptor::PolynomialsOverQ,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Integer(v) => v.is_zero(),
            RingElement::Polynomial(p) => p.is_zero(),
        }
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement, FieldError> {
        match (self, other) {
            (RingElement::Integer(a), RingElement::Integer(b)) => Ok(RingElement::Integer(a + b)),
            (RingElement::Polynomial(a), RingElement::Polynomial(b)) => {
                Ok(RingElement::Polynomial(a.add(b)))
            }
            _ => Err(FieldError::RingMismatch {
                left: self.ring(),
                right: other.ring(),
            }),
        }
    }

    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement, FieldError> {
        match (self, other) {
            (RingElement::Integer(a), RingElement::Integer(b)) => Ok(RingElement::Integer(a * b)),
            (RingElement::Polynomial(a), RingElement::Polynomial(b)) => {
                Ok(RingElement::Polynomial(a.mul(b)))
            }
            _ => Err(FieldError::RingMismatch {
                left: self.ring(),
                right: other.ring(),
            }),
        }
    }

    pub fn neg(&self) -> RingElement {
        match self {
            RingElement::Integer(a) => RingElement::Integer(-a),
            RingElement::Polynomial(p) => RingElement::Polynomial(p.neg()),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Integer(v) => write!(f, "{v}"),
            RingElement::Polynomial(p) => write!(f, "{p}"),
        }
    }
}

/// A point of Spec A for A = Q[s] or A = Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpecPoint {
    /// The maximal ideal `<s - lambda>` of Q[s].
    Lambda(BigRational),
    /// `<0>` in Q[s]; residue field Q(s).
    GenericS,
    /// `<p>` in Z; residue field F_p.
    PrimeP(Prime),
    /// `<0>` in Z; residue field Q.
    GenericZ,
}

impl SpecPoint {
    pub fn ring(&self) -> RingDescriptor {
        match self {
            SpecPoint::Lambda(_) | SpecPoint::GenericS => RingDescriptor::PolynomialsOverQ,
            SpecPoint::PrimeP(_) | SpecPoint::GenericZ => RingDescriptor::Integers,
        }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, SpecPoint::GenericS | SpecPoint::GenericZ)
    }

    pub fn residue_field(&self) -> FieldDescriptor {
        match self {
            SpecPoint::Lambda(_) | SpecPoint::GenericZ => FieldDescriptor::Rationals,
            SpecPoint::GenericS => FieldDescriptor::RationalFunctions,
            SpecPoint::PrimeP(p) => FieldDescriptor::PrimeField(*p),
        }
    }

    /// Parses `s=<rational>`, `p=<prime>` or `generic` for the given ring.
    pub fn parse(text: &str, ring: RingDescriptor) -> Result<SpecPoint, FieldError> {
        let t = text.trim();
        let incompatible = || FieldError::IncompatiblePoint {
            point: t.to_string(),
            ring,
        };
        if t == "generic" {
            return Ok(ring.generic_point());
        }
        let (key, value) = t.split_once('=').ok_or_else(incompatible)?;
        match (key.trim(), ring) {
            ("s", RingDescriptor::PolynomialsOverQ) => {
                let q: BigRational = value.trim().parse().map_err(|_| incompatible())?;
                Ok(SpecPoint::Lambda(q))
            }
            ("p", RingDescriptor::Integers) => {
                let p: u64 = value.trim().parse().map_err(|_| incompatible())?;
                Ok(SpecPoint::PrimeP(Prime::new(p)?))
            }
            _ => Err(incompatible()),
        }
    }
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecPoint::Lambda(q) => write!(f, "s={}", fmt_rational(q)),
            SpecPoint::PrimeP(p) => write!(f, "p={p}"),
            SpecPoint::GenericS | SpecPoint::GenericZ => write!(f, "generic"),
        }
    }
}

/// Maps a base-ring element to the residue field of `point`.
pub fn residue_map(x: &RingElement, point: &SpecPoint) -> Result<Scalar, FieldError> {
    match (x, point) {
        (RingElement::Polynomial(p), SpecPoint::Lambda(l)) => Ok(Scalar::Rational(p.eval(l))),
        (RingElement::Polynomial(p), SpecPoint::GenericS) => {
            Ok(Scalar::Function(RationalFunction::from_poly(p.clone())))
        }
        (RingElement::Integer(v), SpecPoint::PrimeP(p)) => {
            Ok(FieldDescriptor::PrimeField(*p).from_bigint(v))
        }
        (RingElement::Integer(v), SpecPoint::GenericZ) => {
            Ok(Scalar::Rational(BigRational::from_integer(v.clone())))
        }
        _ => Err(FieldError::IncompatiblePoint {
            point: point.to_string(),
            ring: x.ring(),
        }),
    }
}
