//! Certificate-free reference computations for cross-checking the engine.
//!
//! Nothing here touches the engine's reduction path: monomial images are
//! expanded with their own loops and the rank is computed with pivots at the
//! *last* nonzero coordinate. Only the field arithmetic is shared. Speed is
//! not a goal.

use crate::coeffield::{FieldDescriptor, Scalar};
use crate::engine::EngineError;
use crate::param::Parameterization;

/// `r(D+1) - rank` of the truncated monomial images at precision `D`.
pub fn brute_delta(phi: &Parameterization, precision: usize) -> Result<usize, EngineError> {
    let report = phi.validate();
    if !report.valid {
        return Err(EngineError::InvalidParameterization(report));
    }
    let r = phi.branches();
    let width = precision + 1;
    let field = phi.field();

    // Dense coefficient arrays, one per (variable, branch).
    let vars: Vec<Vec<Vec<Scalar>>> = (0..phi.vars())
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut c = vec![field.zero(); width];
                    for (d, v) in phi.entry(j, i).terms() {
                        if d < width {
                            c[d] = v.clone();
                        }
                    }
                    c
                })
                .collect()
        })
        .collect();

    let mut rank = ReverseRank::new(field, r * width);
    let mut one = vec![vec![field.zero(); width]; r];
    for b in one.iter_mut() {
        b[0] = field.one();
    }
    expand(&vars, 0, one, width, &mut rank);
    Ok(r * width - rank.rank)
}

/// Adds the image of every monomial in variables `>= first` times `cur`.
fn expand(
    vars: &[Vec<Vec<Scalar>>],
    first: usize,
    cur: Vec<Vec<Scalar>>,
    width: usize,
    rank: &mut ReverseRank,
) {
    // Branch-major layout: coordinate j * width + m.
    let flat: Vec<Scalar> = cur.iter().flatten().cloned().collect();
    rank.add(flat);
    for (k, var) in vars.iter().enumerate().skip(first) {
        let next: Vec<Vec<Scalar>> = cur
            .iter()
            .zip(var)
            .map(|(a, b)| naive_product(a, b, width))
            .collect();
        if next.iter().flatten().all(Scalar::is_zero) {
            continue;
        }
        expand(vars, k, next, width, rank);
    }
}

fn naive_product(a: &[Scalar], b: &[Scalar], width: usize) -> Vec<Scalar> {
    let field = a[0].field();
    let mut out = vec![field.zero(); width];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut acc = field.zero();
        for i in 0..=m {
            if !a[i].is_zero() && !b[m - i].is_zero() {
                acc = &acc + &(&a[i] * &b[m - i]);
            }
        }
        *slot = acc;
    }
    out
}

/// Incremental rank with pivots at the highest nonzero coordinate.
struct ReverseRank {
    rows: Vec<Option<Vec<Scalar>>>,
    rank: usize,
}

impl ReverseRank {
    fn new(_field: FieldDescriptor, dim: usize) -> Self {
        ReverseRank {
            rows: vec![None; dim],
            rank: 0,
        }
    }

    fn add(&mut self, mut v: Vec<Scalar>) {
        for pos in (0..v.len()).rev() {
            if v[pos].is_zero() {
                continue;
            }
            match &self.rows[pos] {
                Some(row) => {
                    let f = &v[pos] * &row[pos].inv().expect("pivot");
                    for k in 0..=pos {
                        if !row[k].is_zero() {
                            v[k] = &v[k] - &(&f * &row[k]);
                        }
                    }
                }
                None => {
                    self.rows[pos] = Some(v);
                    self.rank += 1;
                    return;
                }
            }
        }
    }
}

/// Dynamic-programming sieve of a numerical semigroup on `[0, bound]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveResult {
    pub bound: usize,
    pub membership: Vec<bool>,
    pub gaps: Vec<usize>,
    /// Start of the first run of `min(generators)` consecutive members, if
    /// such a run fits below the bound.
    pub conductor: Option<usize>,
}

pub fn sieve_semigroup(generators: &[usize], bound: usize) -> SieveResult {
    let mut membership = vec![false; bound + 1];
    membership[0] = true;
    for v in 1..=bound {
        membership[v] = generators
            .iter()
            .any(|&g| g > 0 && g <= v && membership[v - g]);
    }
    let min_gen = generators
        .iter()
        .copied()
        .filter(|&g| g > 0)
        .min()
        .unwrap_or(1);
    let mut conductor = None;
    let mut run = 0;
    for (v, &member) in membership.iter().enumerate().take(bound + 1) {
        if member {
            run += 1;
            if run == min_gen {
                conductor = Some(v + 1 - min_gen);
                break;
            }
        } else {
            run = 0;
        }
    }
    let limit = conductor.unwrap_or(bound + 1);
    let gaps = (0..limit).filter(|&v| !membership[v]).collect();
    SieveResult {
        bound,
        membership,
        gaps,
        conductor,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Polynomial;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn monomials(exps: &[usize]) -> Parameterization {
        let row = exps
            .iter()
            .map(|&e| Polynomial::monomial(q().one(), e))
            .collect();
        Parameterization::new(q(), exps.len(), 1, vec![row]).unwrap()
    }

    #[test]
    fn brute_values() {
        assert_eq!(brute_delta(&monomials(&[2, 3]), 10).unwrap(), 1);
        assert_eq!(brute_delta(&monomials(&[5, 6, 8, 9]), 20).unwrap(), 5);
        assert_eq!(brute_delta(&monomials(&[3]), 30).unwrap(), 20);
    }

    #[test]
    fn sieve_values() {
        let s = sieve_semigroup(&[2, 3], 20);
        assert_eq!(s.gaps, vec![1]);
        assert_eq!(s.conductor, Some(2));

        let s = sieve_semigroup(&[5, 6, 8, 9], 100);
        assert_eq!(s.gaps, vec![1, 2, 3, 4, 7]);
        assert_eq!(s.conductor, Some(8));

        let s = sieve_semigroup(&[4, 6, 13], 200);
        assert_eq!(s.gaps, vec![1, 2, 3, 5, 7, 9, 11, 15]);
        assert_eq!(s.conductor, Some(16));
    }

    #[test]
    fn sieve_is_additively_closed() {
        let s = sieve_semigroup(&[4, 6, 13], 120);
        for a in 0..=120 {
            for b in 0..=120 - a {
                if s.membership[a] && s.membership[b] {
                    assert!(s.membership[a + b]);
                }
            }
        }
    }

    #[test]
    fn non_primitive_has_no_conductor() {
        let s = sieve_semigroup(&[4, 6], 60);
        assert_eq!(s.conductor, None);
    }
}
