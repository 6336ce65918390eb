//! Polynomial parameterizations `x_i -> (phi_1^i(t_1), ..., phi_r^i(t_r))`
//! over an exact field, with validation and the equivalence moves used to
//! check invariance of the computed data.

use thiserror::Error;

use crate::coeffield::{FieldDescriptor, Scalar};
use crate::series::{Polynomial, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: String, found: String },
    #[error("entry (branch {branch}, variable {var}) has a nonzero constant term")]
    ConstantTerm { branch: usize, var: usize },
    #[error("entry (branch {branch}, variable {var}) is over {found}, expected {expected}")]
    FieldMismatch {
        branch: usize,
        var: usize,
        expected: FieldDescriptor,
        found: FieldDescriptor,
    },
    #[error("substitution must have zero constant term and a nonzero linear term")]
    InvalidSubstitution,
    #[error("source change matrix is singular")]
    SingularMatrix,
    #[error("working precision {d_work} is below the entry degree {degree}")]
    InsufficientPrecision { d_work: usize, degree: usize },
    #[error("branch index {0} out of range")]
    BranchOutOfRange(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `n` source variables, `r` branches; `entries[j][i]` is the image of
/// `x_i` on branch `j` and never has a constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Parameterization {
    field: FieldDescriptor,
    n: usize,
    r: usize,
    entries: Vec<Vec<Polynomial>>,
}

/// Outcome of the syntactic form of the (*) condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    /// `branch_nonzero[j]`: some entry on branch `j` is nonzero.
    pub branch_nonzero: Vec<bool>,
    /// Pairs `(j, j')`, `j < j'`, whose entry tuples coincide.
    pub duplicate_branches: Vec<(usize, usize)>,
    pub valid: bool,
}

impl Parameterization {
    pub fn new(
        field: FieldDescriptor,
        n: usize,
        r: usize,
        entries: Vec<Vec<Polynomial>>,
    ) -> Result<Self, ParamError> {
        if n == 0 || r == 0 || entries.len() != r || entries.iter().any(|row| row.len() != n) {
            return Err(ParamError::Shape {
                expected: format!("{r} x {n} (n, r >= 1)"),
                found: format!(
                    "{} rows of lengths {:?}",
                    entries.len(),
                    entries.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            });
        }
        for (j, row) in entries.iter().enumerate() {
            for (i, p) in row.iter().enumerate() {
                if p.field() != field {
                    return Err(ParamError::FieldMismatch {
                        branch: j,
                        var: i,
                        expected: field,
                        found: p.field(),
                    });
                }
                if !p.coeff(0).is_zero() {
                    return Err(ParamError::ConstantTerm { branch: j, var: i });
                }
            }
        }
        Ok(Parameterization {
            field,
            n,
            r,
            entries,
        })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Number of source variables.
    pub fn vars(&self) -> usize {
        self.n
    }

    /// Number of branches.
    pub fn branches(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    pub fn entry(&self, branch: usize, var: usize) -> &Polynomial {
        &self.entries[branch][var]
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> ValidityReport {
        let branch_nonzero: Vec<bool> = self
            .entries
            .iter()
            .map(|row| row.iter().any(|p| !p.is_zero()))
            .collect();
        let mut duplicate_branches = Vec::new();
        for a in 0..self.r {
            for b in a + 1..self.r {
                if self.entries[a] == self.entries[b] {
                    duplicate_branches.push((a, b));
                }
            }
        }
        let valid = branch_nonzero.iter().all(|&x| x) && duplicate_branches.is_empty();
        ValidityReport {
            branch_nonzero,
            duplicate_branches,
            valid,
        }
    }

    /// Keeps monomials of degree `<= n` in every entry. The result may fail
    /// [`validate`](Self::validate).
    pub fn truncate(&self, n: usize) -> Parameterization {
        Parameterization {
            field: self.field,
            n: self.n,
            r: self.r,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|p| p.truncate(n)).collect())
                .collect(),
        }
    }

    /// The single-branch parameterization of branch `j`.
    pub fn branch(&self, j: usize) -> Result<Parameterization, ParamError> {
        let row = self.entries.get(j).ok_or(ParamError::BranchOutOfRange(j))?;
        Ok(Parameterization {
            field: self.field,
            n: self.n,
            r: 1,
            entries: vec![row.clone()],
        })
    }

    /// Substitutes `t -> tau(t)` on branch `j`, truncating at `d_work`.
    pub fn reparameterize_target(
        &self,
        j: usize,
        tau: &Polynomial,
        d_work: usize,
    ) -> Result<Parameterization, ParamError> {
        if j >= self.r {
            return Err(ParamError::BranchOutOfRange(j));
        }
        if tau.field() != self.field || !tau.coeff(0).is_zero() || tau.coeff(1).is_zero() {
            return Err(ParamError::InvalidSubstitution);
        }
        let degree = self.max_degree();
        if d_work < degree {
            return Err(ParamError::InsufficientPrecision { d_work, degree });
        }
        let mut entries = self.entries.clone();
        for p in entries[j].iter_mut() {
            *p = p.compose(tau, d_work)?;
        }
        Parameterization::new(self.field, self.n, self.r, entries)
    }

    /// Applies the linear automorphism `x_i -> sum_k m[i][k] x_k` of the
    /// source: the new image of `x_i` is `sum_k m[i][k] * phi(x_k)`.
    pub fn linear_source_change(&self, m: &[Vec<Scalar>]) -> Result<Parameterization, ParamError> {
        if m.len() != self.n || m.iter().any(|row| row.len() != self.n) {
            return Err(ParamError::Shape {
                expected: format!("{0} x {0} matrix", self.n),
                found: format!("{} rows", m.len()),
            });
        }
        if let Some(bad) = m.iter().flatten().find(|c| c.field() != self.field) {
            return Err(ParamError::FieldMismatch {
                branch: 0,
                var: 0,
                expected: self.field,
                found: bad.field(),
            });
        }
        if determinant(m, self.field).is_zero() {
            return Err(ParamError::SingularMatrix);
        }
        let mut entries = Vec::with_capacity(self.r);
        for row in &self.entries {
            let mut new_row = Vec::with_capacity(self.n);
            for mi in m {
                let mut acc = Polynomial::zero(self.field);
                for (k, c) in mi.iter().enumerate() {
                    if !c.is_zero() {
                        acc = acc.add(&row[k].scale(c)?)?;
                    }
                }
                new_row.push(acc);
            }
            entries.push(new_row);
        }
        Parameterization::new(self.field, self.n, self.r, entries)
    }
}

/// Exact determinant by Gaussian elimination over the field.
pub fn determinant(m: &[Vec<Scalar>], field: FieldDescriptor) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return field.zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -&det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][col..n].iter_mut().zip(&upper[col][col..n]) {
                *x = &*x - &(&f * y);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn poly(terms: &[(usize, i64)]) -> Polynomial {
        Polynomial::from_terms(q(), terms.iter().map(|&(d, c)| (d, q().from_i64(c)))).unwrap()
    }

    fn mono(deg: usize) -> Polynomial {
        poly(&[(deg, 1)])
    }

    fn cusp() -> Parameterization {
        Parameterization::new(q(), 2, 1, vec![vec![mono(2), mono(3)]]).unwrap()
    }

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&c| q().from_i64(c)).collect())
            .collect()
    }

    #[test]
    fn cusp_is_valid() {
        assert!(cusp().validate().valid);
    }

    #[test]
    fn zero_branch_is_flagged() {
        let p = Parameterization::new(
            q(),
            2,
            2,
            vec![
                vec![mono(1), Polynomial::zero(q())],
                vec![Polynomial::zero(q()); 2],
            ],
        )
        .unwrap();
        let rep = p.validate();
        assert!(!rep.valid);
        assert_eq!(rep.branch_nonzero, vec![true, false]);
        assert!(rep.duplicate_branches.is_empty());
    }

    #[test]
    fn duplicate_branches_are_flagged() {
        let row = vec![mono(2), mono(3)];
        let p = Parameterization::new(q(), 2, 2, vec![row.clone(), row]).unwrap();
        let rep = p.validate();
        assert!(!rep.valid);
        assert_eq!(rep.duplicate_branches, vec![(0, 1)]);
    }

    #[test]
    fn constant_terms_rejected() {
        let e = Parameterization::new(q(), 1, 1, vec![vec![poly(&[(0, 1), (2, 1)])]]);
        assert_eq!(e, Err(ParamError::ConstantTerm { branch: 0, var: 0 }));
    }

    #[test]
    fn truncation() {
        let p = Parameterization::new(q(), 2, 1, vec![vec![mono(2), poly(&[(3, 1), (50, 1)])]])
            .unwrap();
        assert_eq!(p.truncate(3), cusp());

        let t = cusp().truncate(2);
        assert_eq!(t.entry(0, 0), &mono(2));
        assert!(t.entry(0, 1).is_zero());
        // still has a nonzero entry, so (*) holds syntactically
        assert!(t.validate().valid);

        let gone = cusp().truncate(1);
        assert!(!gone.validate().valid);
    }

    #[test]
    fn target_reparameterization() {
        let id = cusp().reparameterize_target(0, &mono(1), 5).unwrap();
        assert_eq!(id, cusp());

        let tau = poly(&[(1, 1), (2, 1)]);
        let moved = cusp().reparameterize_target(0, &tau, 8).unwrap();
        assert_eq!(moved.entry(0, 0), &poly(&[(2, 1), (3, 2), (4, 1)]));
        assert_eq!(moved.entry(0, 1), &poly(&[(3, 1), (4, 3), (5, 3), (6, 1)]));

        let t3 = Parameterization::new(q(), 1, 1, vec![vec![mono(3)]]).unwrap();
        let scaled = t3.reparameterize_target(0, &poly(&[(1, 2)]), 3).unwrap();
        assert_eq!(scaled.entry(0, 0), &poly(&[(3, 8)]));

        assert_eq!(
            cusp().reparameterize_target(0, &mono(2), 8),
            Err(ParamError::InvalidSubstitution)
        );
        assert!(matches!(
            cusp().reparameterize_target(0, &mono(1), 2),
            Err(ParamError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn linear_source_changes() {
        let id = int_matrix(&[&[1, 0], &[0, 1]]);
        assert_eq!(cusp().linear_source_change(&id).unwrap(), cusp());

        let swap = int_matrix(&[&[0, 1], &[1, 0]]);
        let s = cusp().linear_source_change(&swap).unwrap();
        assert_eq!(s.entry(0, 0), &mono(3));
        assert_eq!(s.entry(0, 1), &mono(2));

        let shear = int_matrix(&[&[1, 0], &[1, 1]]);
        let sh = cusp().linear_source_change(&shear).unwrap();
        assert_eq!(sh.entry(0, 0), &mono(2));
        assert_eq!(sh.entry(0, 1), &poly(&[(2, 1), (3, 1)]));

        let singular = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            cusp().linear_source_change(&singular),
            Err(ParamError::SingularMatrix)
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(
            determinant(&int_matrix(&[&[0, 1], &[1, 0]]), q()),
            q().from_i64(-1)
        );
        assert_eq!(
            determinant(&int_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]), q()),
            q().from_i64(18)
        );
    }
}
