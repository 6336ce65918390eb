//! Elements of the rational function field Q(s) in canonical form.

use std::fmt;

use num_rational::BigRational;

use super::qpoly::QPoly;

/// A reduced quotient `num / den` of polynomials over Q.
///
/// `den` is monic and coprime to `num`; zero is `0 / 1`. Two values are
/// equal iff their representations are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: QPoly,
    den: QPoly,
}

impl RationalFunction {
    /// Builds and normalizes `num / den`. Panics if `den` is zero.
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in Q(s)");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.leading().expect("nonzero").clone();
        if !num_traits::One::is_one(&lead) {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RationalFunction {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(QPoly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den && self.den.is_one() {
            return Self::reduced(self.num.add(&other.num), QPoly::one());
        }
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            // coprime denominators: the sum is already reduced
            return Self::reduced(
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            );
        }
        let d1 = self.den.div_rem(&g).0;
        let d2 = other.den.div_rem(&g).0;
        let t = self.num.mul(&d2).add(&other.num.mul(&d1));
        if t.is_zero() {
            return Self::zero();
        }
        let h = t.gcd(&g);
        let (t, g) = if h.is_one() {
            (t, g)
        } else {
            (t.div_rem(&h).0, g.div_rem(&h).0)
        };
        Self::reduced(t, g.mul(&d1).mul(&d2))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        Self::reduced(n1.mul(&n2), d1.mul(&d2))
    }

    /// Wraps a pair already known to be coprime with monic denominator.
    fn reduced(num: QPoly, den: QPoly) -> Self {
        debug_assert!(den.leading().is_some_and(num_traits::One::is_one));
        if num.is_zero() {
            return Self::zero();
        }
        RationalFunction { num, den }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }
}

/// Divides `a` and the monic `b` by their monic gcd.
fn cancel(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    if b.is_one() {
        return (a.clone(), b.clone());
    }
    let g = a.gcd(b);
    if g.is_one() {
        (a.clone(), b.clone())
    } else {
        (a.div_rem(&g).0, b.div_rem(&g).0)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
