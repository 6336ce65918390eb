//! Families of parameterizations over `A = Z` or `A = Q[s]`, their
//! specializations at points of `Spec A`, and the semicontinuity audit of a
//! scan: at every special point `delta` must be at least the generic value.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::coeffield::{
    is_prime, residue_map, FieldError, Prime, RingDescriptor, RingElement, SpecPoint,
};
use crate::engine::{delta_certified, EngineError, EngineOptions, Outcome};
use crate::param::{ParamError, Parameterization, ValidityReport};
use crate::series::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("entry (branch {branch}, variable {var}) has a nonzero constant term")]
    ConstantTerm { branch: usize, var: usize },
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: String, found: String },
    #[error("scan needs at least one point")]
    NoPoints,
    #[error("no generic point among the scanned rows")]
    NoGenericRow,
}

/// A polynomial in `t` with coefficients in the base ring; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyPolynomial {
    ring: RingDescriptor,
    coeffs: Vec<RingElement>,
}

impl FamilyPolynomial {
    pub fn new(ring: RingDescriptor, mut coeffs: Vec<RingElement>) -> Result<Self, FieldError> {
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(FieldError::RingMismatch {
                left: ring,
                right: bad.ring(),
            });
        }
        while coeffs.last().is_some_and(RingElement::is_zero) {
            coeffs.pop();
        }
        Ok(FamilyPolynomial { ring, coeffs })
    }

    pub fn zero(ring: RingDescriptor) -> Self {
        FamilyPolynomial {
            ring,
            coeffs: Vec::new(),
        }
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn coeff(&self, deg: usize) -> RingElement {
        self.coeffs
            .get(deg)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn truncate(&self, n: usize) -> Self {
        let keep = self.coeffs.len().min(n + 1);
        FamilyPolynomial::new(self.ring, self.coeffs[..keep].to_vec()).expect("same ring")
    }

    /// Image in `k(p)[t]`; terms whose coefficient dies are dropped.
    pub fn specialize(&self, point: &SpecPoint) -> Result<Polynomial, FieldError> {
        let field = point.residue_field();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| residue_map(c, point))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(field, coeffs).expect("residue field is uniform"))
    }
}

/// `x_i -> phi_A(x_i) in t_j A[t_j]` on each branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParameterization {
    ring: RingDescriptor,
    n: usize,
    r: usize,
    entries: Vec<Vec<FamilyPolynomial>>,
}

impl FamilyParameterization {
    pub fn new(
        ring: RingDescriptor,
        n: usize,
        r: usize,
        entries: Vec<Vec<FamilyPolynomial>>,
    ) -> Result<Self, FamilyError> {
        if n == 0 || r == 0 || entries.len() != r || entries.iter().any(|row| row.len() != n) {
            return Err(FamilyError::Shape {
                expected: format!("{r} x {n} (n, r >= 1)"),
                found: format!("{} rows", entries.len()),
            });
        }
        for (j, row) in entries.iter().enumerate() {
            for (i, p) in row.iter().enumerate() {
                if p.ring() != ring {
                    return Err(FieldError::RingMismatch {
                        left: ring,
                        right: p.ring(),
                    }
                    .into());
                }
                if !p.coeff(0).is_zero() {
                    return Err(FamilyError::ConstantTerm { branch: j, var: i });
                }
            }
        }
        Ok(FamilyParameterization {
            ring,
            n,
            r,
            entries,
        })
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn branches(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> &[Vec<FamilyPolynomial>] {
        &self.entries
    }

    /// Coefficient-wise truncation at degree `n`.
    pub fn truncate(&self, n: usize) -> FamilyParameterization {
        FamilyParameterization {
            ring: self.ring,
            n: self.n,
            r: self.r,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|p| p.truncate(n)).collect())
                .collect(),
        }
    }
}

/// The parameterization `phi_p` over the residue field `k(p)`.
pub fn specialize(
    fam: &FamilyParameterization,
    point: &SpecPoint,
) -> Result<Parameterization, FamilyError> {
    if point.ring() != fam.ring {
        return Err(FieldError::IncompatiblePoint {
            point: point.to_string(),
            ring: fam.ring,
        }
        .into());
    }
    let entries = fam
        .entries
        .iter()
        .map(|row| row.iter().map(|p| p.specialize(point)).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(Parameterization::new(
        point.residue_field(),
        fam.n,
        fam.r,
        entries,
    )?)
}

/// Deterministic sample: the generic point first, then `s = 0, 1, -1, 2,
/// -2, ...` over Q[s] or `p = 2, 3, 5, 7, ...` over Z.
pub fn default_points(ring: RingDescriptor, count: usize) -> Vec<SpecPoint> {
    let mut points = vec![ring.generic_point()];
    match ring {
        RingDescriptor::PolynomialsOverQ => {
            let mut k: i64 = 0;
            while points.len() < count {
                let lambda = if k == 0 {
                    0
                } else if k % 2 == 1 {
                    (k + 1) / 2
                } else {
                    -k / 2
                };
                points.push(SpecPoint::Lambda(BigRational::from_integer(BigInt::from(
                    lambda,
                ))));
                k += 1;
            }
        }
        RingDescriptor::Integers => {
            let mut p = 2u64;
            while points.len() < count {
                if is_prime(p) {
                    points.push(SpecPoint::PrimeP(Prime::new(p).expect("prime")));
                }
                p += 1;
            }
        }
    }
    points.truncate(count.max(1));
    points
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOutcome {
    Certified(crate::engine::DeltaCertificate),
    Undecided(crate::engine::Undecided),
    /// The specialization fails the (*) condition.
    InvalidAtPoint,
}

impl RowOutcome {
    pub fn delta(&self) -> Option<usize> {
        match self {
            RowOutcome::Certified(c) => Some(c.delta),
            _ => None,
        }
    }

    pub fn cond_total(&self) -> Option<usize> {
        match self {
            RowOutcome::Certified(c) => Some(c.cond_total),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub point: SpecPoint,
    pub validity: ValidityReport,
    pub outcome: RowOutcome,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditFindings {
    /// No certified special point has `delta` below the generic value.
    pub pass: bool,
    /// Whether the generic row carries a certificate. When it does not, the
    /// comparison uses its bounded value, a lower bound for delta.
    pub generic_certified: bool,
    /// Special points with `delta` below the generic value. Always empty
    /// unless something is broken.
    pub violations: Vec<SpecPoint>,
    /// Special points with `delta` above the generic value.
    pub jumping_points: Vec<SpecPoint>,
    /// Rows that were invalid or undecided, with the reason.
    pub failures: Vec<(SpecPoint, String)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub family: FamilyParameterization,
    pub rows: Vec<ScanRow>,
    pub audit: AuditFindings,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub engine: EngineOptions,
    /// Evaluate rows on the rayon pool.
    pub parallel: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            engine: EngineOptions::default(),
            parallel: true,
        }
    }
}

fn scan_row(
    fam: &FamilyParameterization,
    point: &SpecPoint,
    opts: &EngineOptions,
) -> Result<ScanRow, FamilyError> {
    let start = Instant::now();
    let phi = specialize(fam, point)?;
    let validity = phi.validate();
    let outcome = if validity.valid {
        match delta_certified(&phi, opts)? {
            Outcome::Certified(c) => RowOutcome::Certified(c),
            Outcome::Undecided(u) => RowOutcome::Undecided(u),
        }
    } else {
        RowOutcome::InvalidAtPoint
    };
    Ok(ScanRow {
        point: point.clone(),
        validity,
        outcome,
        wall_time: start.elapsed(),
    })
}

/// Certifies every specialization and audits the result. Rows come back in
/// the order of `points` whether or not they were computed in parallel.
pub fn scan(
    fam: &FamilyParameterization,
    points: &[SpecPoint],
    opts: &ScanOptions,
) -> Result<ScanReport, FamilyError> {
    if points.is_empty() {
        return Err(FamilyError::NoPoints);
    }
    if let Some(bad) = points.iter().find(|p| p.ring() != fam.ring) {
        return Err(FieldError::IncompatiblePoint {
            point: bad.to_string(),
            ring: fam.ring,
        }
        .into());
    }
    if !points.iter().any(SpecPoint::is_generic) {
        return Err(FamilyError::NoGenericRow);
    }
    opts.engine.validate()?;
    let rows: Vec<ScanRow> = if opts.parallel {
        points
            .par_iter()
            .map(|p| scan_row(fam, p, &opts.engine))
            .collect::<Result<_, _>>()?
    } else {
        points
            .iter()
            .map(|p| scan_row(fam, p, &opts.engine))
            .collect::<Result<_, _>>()?
    };
    let audit = audit_semicontinuity(&rows)?;
    Ok(ScanReport {
        family: fam.clone(),
        rows,
        audit,
    })
}

/// Checks `delta(generic) <= delta(p)` for every certified special row.
pub fn audit_semicontinuity(rows: &[ScanRow]) -> Result<AuditFindings, FamilyError> {
    let generic = rows
        .iter()
        .find(|r| r.point.is_generic())
        .ok_or(FamilyError::NoGenericRow)?;
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    let (generic_delta, generic_cond, generic_certified) = match &generic.outcome {
        RowOutcome::Certified(c) => (Some(c.delta), Some(c.cond_total), true),
        RowOutcome::Undecided(u) => {
            notes.push(format!(
                "no certificate at the generic point; comparing against its bounded value {} \
                 (a lower bound for delta)",
                u.delta_bounded
            ));
            failures.push((generic.point.clone(), "undecided".to_string()));
            (Some(u.delta_bounded), None, false)
        }
        RowOutcome::InvalidAtPoint => {
            notes.push("generic specialization is invalid; nothing to compare".to_string());
            failures.push((generic.point.clone(), "invalid".to_string()));
            (None, None, false)
        }
    };

    let mut violations = Vec::new();
    let mut jumping_points = Vec::new();
    for row in rows.iter().filter(|r| !r.point.is_generic()) {
        match &row.outcome {
            RowOutcome::Certified(c) => {
                if let Some(g) = generic_delta {
                    if c.delta < g {
                        violations.push(row.point.clone());
                    } else if c.delta > g && generic_certified {
                        jumping_points.push(row.point.clone());
                    }
                }
                if let Some(gc) = generic_cond {
                    if c.cond_total < gc {
                        notes.push(format!(
                            "conductor at {} is {} but {} at the generic point: \
                             the conductor is not upper semicontinuous",
                            row.point, c.cond_total, gc
                        ));
                    }
                }
            }
            RowOutcome::Undecided(_) => failures.push((row.point.clone(), "undecided".into())),
            RowOutcome::InvalidAtPoint => failures.push((row.point.clone(), "invalid".into())),
        }
    }
    if !violations.is_empty() {
        notes.push(
            "delta at a special point is below the generic value; this contradicts \
             semicontinuity and indicates an implementation bug"
                .to_string(),
        );
    }
    Ok(AuditFindings {
        pass: violations.is_empty(),
        generic_certified,
        violations,
        jumping_points,
        failures,
        notes,
    })
}

impl fmt::Display for FamilyPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::format_family_polynomial(self))
    }
}
