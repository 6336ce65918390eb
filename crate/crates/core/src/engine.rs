//! Certified delta invariants and conductors.
//!
//! For a parameterization `phi: k[[x]] -> R~ = k[[t_1]] + ... + k[[t_r]]` the
//! engine works in `R~ / m~^(D+1)`, a space of dimension `r(D+1)` whose
//! coordinates are ordered by `(m, j)`: degree first, then branch. The image
//! `V_D` of `phi(P)` there is spanned by the truncated monomials
//! `phi(x^a)`, `|a| <= D`, since every entry has positive order on every
//! branch. Echelon reduction in the `(m, j)` order gives
//!
//! * `delta_D = r(D+1) - rank V_D = dim R~ / (phi(P) + m~^(D+1))`, which is
//!   non-decreasing in `D` and bounded by `delta`;
//! * for each branch `j` the window `a_j`: the least `a` with
//!   `e_j t^m in V_D` for every `a <= m <= D`.
//!
//! # Tail certificate
//!
//! If every branch has a window and `D >= 2 a_j - 1`, then `delta = delta_D`
//! and `a_j` is the conductor exponent `c_j`. Proof sketch:
//!
//! 1. For `a_j <= m <= D` pick `g_m in phi(P)` with `g_m = e_j t^m` modulo
//!    `m~^(D+1)`. A product of `k` such lifts with exponents summing to `M`
//!    has branch `j` equal to `t^M` plus terms of order `> M`, and every
//!    other branch of order `>= k(D+1) > M` as long as `M <= kD`.
//! 2. Because the window `[a_j, D]` has length `>= a_j`, every `M > D` is a
//!    sum of `k >= 2` window exponents with `M <= kD`. So for each `M > D`
//!    and each `j`, `phi(P)` holds an element of exact order `M` on branch
//!    `j` and order `> M` on all other branches.
//! 3. Any `f in m~^(D+1)` is then a convergent sum of such elements,
//!    eliminating the lowest `(m, j)` term at each step; `phi(P)` is closed,
//!    so `m~^(D+1) subset phi(P)` and `delta = delta_D`.
//! 4. Hence `e_j t^m in phi(P)` for all `m >= a_j`, so
//!    `t_j^(a_j) k[[t_j]]` lies in the conductor and `c_j <= a_j`; and
//!    `e_j t^(a_j - 1)` is not in `V_D`, hence not in `phi(P)`, so
//!    `c_j >= a_j`.
//!
//! If no certificate fires up to the precision budget the result is
//! [`Undecided`]: either `phi` is not primitive (`delta` infinite) or the
//! budget is too small. The per-branch gcd of attained orders is reported as
//! evidence only.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::coeffield::{FieldDescriptor, Scalar};
use crate::param::{ParamError, Parameterization, ValidityReport};
use crate::series::{from_polynomial, BranchVector, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid parameterization: {0:?}")]
    InvalidParameterization(ValidityReport),
    #[error("mixed shapes: {0}")]
    MixedShapes(String),
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("semigroup data needs a single branch")]
    MultiBranch,
    #[error("missing certificate: {0}")]
    MissingCertificate(String),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Precision schedule for [`delta_certified`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub d_init: usize,
    pub d_max: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            d_init: 16,
            d_max: 4096,
        }
    }
}

impl EngineOptions {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.d_init == 0 || self.d_init > self.d_max {
            return Err(EngineError::InvalidOptions(format!(
                "need 1 <= dinit <= dmax, got dinit={} dmax={}",
                self.d_init, self.d_max
            )));
        }
        Ok(())
    }
}

/// A basis row: nonzero entries by position, the first being the pivot 1.
#[derive(Clone, Debug)]
struct Row {
    entries: Vec<(usize, Scalar)>,
}

impl Row {
    fn get(&self, pos: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&pos, |(k, _)| *k)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// `self - c * other`, merging the sorted supports.
    fn sub_scaled(&mut self, c: &Scalar, other: &Row) {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i == j => {
                    let (i, x) = a.next().expect("peeked");
                    let (_, y) = b.next().expect("peeked");
                    let v = &x - &(c * y);
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                }
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().expect("peeked")),
                (_, Some(_)) => {
                    let (j, y) = b.next().expect("peeked");
                    out.push((*j, -&(c * y)));
                }
                (Some(_), None) => out.push(a.next().expect("peeked")),
                (None, None) => break,
            }
        }
        self.entries = out;
    }
}

/// Reduced row echelon basis of a subspace of `R~ / m~^(D+1)`.
///
/// Pivots are the first nonzero coordinates in `(m, j)` order, each pivot
/// entry is 1, and every row vanishes at every other row's pivot.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: FieldDescriptor,
    branches: usize,
    precision: usize,
    /// `slots[pos]` holds the row whose pivot is `pos`.
    slots: Vec<Option<Row>>,
    rank: usize,
    /// Every unit vector at a position `>= tail` is in the span.
    tail: usize,
}

/// Result of reducing a vector against an [`EchelonBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    InSpan,
    Remainder(BranchVector),
}

impl EchelonBasis {
    pub fn new(field: FieldDescriptor, branches: usize, precision: usize) -> Self {
        let len = branches * (precision + 1);
        EchelonBasis {
            field,
            branches,
            precision,
            slots: vec![None; len],
            rank: 0,
            tail: len,
        }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Dimension of the ambient space, `r(D+1)`.
    pub fn ambient_dim(&self) -> usize {
        self.slots.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Pivots as `(m, j)` pairs, strictly increasing.
    pub fn pivot_positions(&self) -> Vec<(usize, usize)> {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(pos, _)| (pos / self.branches, pos % self.branches))
            .collect()
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> Vec<BranchVector> {
        self.slots
            .iter()
            .flatten()
            .map(|row| {
                let mut dense = vec![self.field.zero(); self.slots.len()];
                for (k, c) in &row.entries {
                    dense[*k] = c.clone();
                }
                BranchVector::from_flat(self.field, self.branches, &dense)
            })
            .collect()
    }

    /// Adds a vector to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &BranchVector) -> Result<bool, EngineError> {
        self.check_shape(v)?;
        let sparse = v
            .flatten()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(self.insert_sparse(sparse))
    }

    pub fn member(&self, v: &BranchVector) -> Result<Membership, EngineError> {
        self.check_shape(v)?;
        let mut flat = v.flatten();
        self.reduce(&mut flat);
        if flat.iter().all(Scalar::is_zero) {
            Ok(Membership::InSpan)
        } else {
            Ok(Membership::Remainder(BranchVector::from_flat(
                self.field,
                self.branches,
                &flat,
            )))
        }
    }

    /// Whether `e_j t^m` lies in the span.
    ///
    /// In reduced echelon form this holds iff there is a pivot at `(m, j)`
    /// and its row is the unit vector itself: reducing `e_j t^m` leaves the
    /// non-pivot tail of that row, which nothing else can cancel.
    pub fn contains_unit(&self, m: usize, j: usize) -> bool {
        match &self.slots[m * self.branches + j] {
            Some(row) => row.entries.len() == 1,
            None => false,
        }
    }

    fn check_shape(&self, v: &BranchVector) -> Result<(), EngineError> {
        if v.field() != self.field
            || v.branch_count() != self.branches
            || v.precision() != self.precision
        {
            return Err(EngineError::MixedShapes(format!(
                "basis is {} x {} over {}, vector is {} x {} over {}",
                self.branches,
                self.precision,
                self.field,
                v.branch_count(),
                v.precision(),
                v.field()
            )));
        }
        Ok(())
    }

    fn reduce(&self, v: &mut [Scalar]) {
        for pos in 0..v.len() {
            if v[pos].is_zero() {
                continue;
            }
            if let Some(row) = &self.slots[pos] {
                let c = v[pos].clone();
                for (k, x) in &row.entries {
                    let t = &c * x;
                    v[*k] = &v[*k] - &t;
                }
            }
        }
    }

    /// Inserts a vector given by its nonzero coordinates.
    fn insert_sparse(&mut self, mut v: BTreeMap<usize, Scalar>) -> bool {
        if self.rank == self.slots.len() {
            return false;
        }
        // Reduce in increasing position order; each pivot row only touches
        // larger positions, so popping the smallest key is safe.
        let mut rest: Vec<(usize, Scalar)> = Vec::new();
        while let Some((pos, c)) = v.pop_first() {
            if c.is_zero() {
                continue;
            }
            match &self.slots[pos] {
                Some(row) => {
                    for (k, x) in &row.entries[1..] {
                        let t = &c * x;
                        match v.entry(*k) {
                            Entry::Vacant(e) => {
                                e.insert(-&t);
                            }
                            Entry::Occupied(mut e) => {
                                let x = e.get() - &t;
                                *e.get_mut() = x;
                            }
                        }
                    }
                }
                None => rest.push((pos, c)),
            }
        }
        let Some((p, lead)) = rest.first().cloned() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let new_row = Row {
            entries: rest
                .into_iter()
                .map(|(k, c)| (k, if inv.is_one() { c } else { &c * &inv }))
                .collect(),
        };
        // Clear column p in the rows above; only rows with a smaller pivot
        // can be nonzero there.
        for slot in self.slots[..p].iter_mut() {
            let Some(row) = slot else { continue };
            let Some(c) = row.get(p).cloned() else {
                continue;
            };
            row.sub_scaled(&c, &new_row);
        }
        self.slots[p] = Some(new_row);
        self.rank += 1;
        // Unit rows stay unit: clearing never touches a row without
        // non-pivot entries. So the tail only grows downwards.
        while self.tail > 0
            && self.slots[self.tail - 1]
                .as_ref()
                .is_some_and(|row| row.entries.len() == 1)
        {
            self.tail -= 1;
        }
        true
    }
}

/// Echelon basis of the span of `vectors`.
pub fn echelonize(vectors: &[BranchVector]) -> Result<EchelonBasis, EngineError> {
    let first = vectors
        .first()
        .ok_or_else(|| EngineError::MixedShapes("no vectors to echelonize".into()))?;
    let mut basis = EchelonBasis::new(first.field(), first.branch_count(), first.precision());
    for v in vectors {
        basis.insert(v)?;
    }
    Ok(basis)
}

fn require_valid(phi: &Parameterization) -> Result<(), EngineError> {
    let report = phi.validate();
    if report.valid {
        Ok(())
    } else {
        Err(EngineError::InvalidParameterization(report))
    }
}

/// Per-variable truncated images, skipping variables that vanish on every
/// branch.
fn generators(phi: &Parameterization, precision: usize) -> Vec<Vec<TruncatedSeries>> {
    (0..phi.vars())
        .filter(|&i| (0..phi.branches()).any(|j| !phi.entry(j, i).is_zero()))
        .map(|i| {
            (0..phi.branches())
                .map(|j| from_polynomial(phi.entry(j, i), precision))
                .collect()
        })
        .collect()
}

/// Truncations at `D` of `phi(x^a)` for every `|a| <= D`, including the
/// constant `a = 0`, over the variables that are not identically zero.
pub fn monomial_images(
    phi: &Parameterization,
    precision: usize,
) -> Result<Vec<BranchVector>, EngineError> {
    require_valid(phi)?;
    let gens = generators(phi, precision);
    let one: Vec<TruncatedSeries> = (0..phi.branches())
        .map(|_| TruncatedSeries::one(phi.field(), precision))
        .collect();
    let mut out = Vec::new();
    // (first variable allowed, remaining degree budget, product)
    let mut stack = vec![(0usize, precision, one)];
    while let Some((start, budget, cur)) = stack.pop() {
        if budget > 0 {
            for (k, g) in gens.iter().enumerate().skip(start) {
                let next = mul_branches(&cur, g);
                stack.push((k, budget - 1, next));
            }
        }
        out.push(BranchVector::new(cur).expect("uniform shape"));
    }
    Ok(out)
}

fn mul_branches(a: &[TruncatedSeries], b: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    a.iter().zip(b).map(|(x, y)| x.mul_unchecked(y)).collect()
}

/// Nonzero coefficients `(degree, c)` of a truncated series, by degree.
type Sparse = Vec<(usize, Scalar)>;

fn sparse_mul(a: &Sparse, b: &Sparse, precision: usize) -> Sparse {
    if let ([(i, x)], [(j, y)]) = (a.as_slice(), b.as_slice()) {
        return if i + j <= precision {
            vec![(i + j, x * y)]
        } else {
            Vec::new()
        };
    }
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            if i + j > precision {
                break;
            }
            let t = x * y;
            match acc.entry(i + j) {
                Entry::Vacant(e) => {
                    e.insert(t);
                }
                Entry::Occupied(mut e) => {
                    let s = e.get() + &t;
                    *e.get_mut() = s;
                }
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A pending monomial image in [`image_basis`].
struct Node {
    /// Smallest flat position in the support.
    order: usize,
    seq: usize,
    /// First variable that may still be multiplied in.
    start: usize,
    product: Vec<Sparse>,
}

impl Node {
    fn new(seq: usize, start: usize, product: Vec<Sparse>) -> Option<Self> {
        let r = product.len();
        let order = product
            .iter()
            .enumerate()
            .filter_map(|(j, s)| s.first().map(|(m, _)| m * r + j))
            .min()?;
        Some(Node {
            order,
            seq,
            start,
            product,
        })
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        (self.order, self.seq) == (other.order, other.seq)
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // reversed: the heap pops the lowest order first
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (other.order, other.seq).cmp(&(self.order, self.seq))
    }
}

/// Streams the monomial images into a fresh basis, lowest order first.
///
/// Two prunings keep the span equal to that of [`monomial_images`]: a
/// monomial whose truncated image vanishes is dropped, and so is one whose
/// image starts at or after the basis tail, since it is then a combination of
/// unit vectors already in the span. In both cases every multiple has the
/// same property, so the whole subtree is skipped.
fn image_basis(phi: &Parameterization, precision: usize) -> EchelonBasis {
    let r = phi.branches();
    let gens: Vec<Vec<Sparse>> = generators(phi, precision)
        .iter()
        .map(|g| {
            g.iter()
                .map(|s| {
                    s.coeffs()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(m, c)| (m, c.clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut basis = EchelonBasis::new(phi.field(), r, precision);
    let mut seq = 0;
    let mut heap = std::collections::BinaryHeap::new();
    heap.extend(Node::new(seq, 0, vec![vec![(0, phi.field().one())]; r]));
    while let Some(node) = heap.pop() {
        if node.order >= basis.tail {
            continue;
        }
        let flat: BTreeMap<usize, Scalar> = node
            .product
            .iter()
            .enumerate()
            .flat_map(|(j, s)| s.iter().map(move |(m, c)| (m * r + j, c.clone())))
            .collect();
        basis.insert_sparse(flat);
        if basis.rank() == basis.ambient_dim() {
            break;
        }
        for (k, g) in gens.iter().enumerate().skip(node.start) {
            let next: Vec<Sparse> = node
                .product
                .iter()
                .zip(g)
                .map(|(a, b)| sparse_mul(a, b, precision))
                .collect();
            seq += 1;
            if let Some(child) = Node::new(seq, k, next) {
                if child.order < basis.tail {
                    heap.push(child);
                }
            }
        }
    }
    basis
}

/// Echelon basis of `V_D`.
pub fn image_echelon(
    phi: &Parameterization,
    precision: usize,
) -> Result<EchelonBasis, EngineError> {
    require_valid(phi)?;
    if precision == 0 {
        return Err(EngineError::InvalidOptions("precision must be >= 1".into()));
    }
    Ok(image_basis(phi, precision))
}

/// Finite-precision data at one precision `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedReport {
    pub precision: usize,
    pub rank: usize,
    /// `r(D+1) - rank V_D`.
    pub delta_bounded: usize,
    /// `windows[j] = Some(a_j)`, or `None` when `e_j t^D` is not in `V_D`.
    pub windows: Vec<Option<usize>>,
    /// `member_orders[j]`: all `m <= D` with `e_j t^m in V_D`.
    pub member_orders: Vec<Vec<usize>>,
    /// Single branch only: attained orders, i.e. the value semigroup
    /// intersected with `[0, D]`.
    pub attained_orders: Option<Vec<usize>>,
}

impl BoundedReport {
    fn from_basis(basis: &EchelonBasis) -> Self {
        let r = basis.branches();
        let d = basis.precision();
        let member_orders: Vec<Vec<usize>> = (0..r)
            .map(|j| (0..=d).filter(|&m| basis.contains_unit(m, j)).collect())
            .collect();
        let windows = (0..r)
            .map(|j| {
                if !basis.contains_unit(d, j) {
                    return None;
                }
                let mut a = d;
                while a > 0 && basis.contains_unit(a - 1, j) {
                    a -= 1;
                }
                Some(a)
            })
            .collect();
        let attained_orders = (r == 1).then(|| {
            basis
                .pivot_positions()
                .into_iter()
                .map(|(m, _)| m)
                .collect()
        });
        BoundedReport {
            precision: d,
            rank: basis.rank(),
            delta_bounded: basis.ambient_dim() - basis.rank(),
            windows,
            member_orders,
            attained_orders,
        }
    }

    /// Windows, if the tail certificate fires at this precision.
    pub fn certified_windows(&self) -> Option<Vec<usize>> {
        let windows: Option<Vec<usize>> = self.windows.iter().copied().collect();
        windows.filter(|w| w.iter().all(|&a| 2 * a <= self.precision + 1))
    }
}

pub fn delta_bounded(
    phi: &Parameterization,
    precision: usize,
) -> Result<BoundedReport, EngineError> {
    let basis = image_echelon(phi, precision)?;
    Ok(BoundedReport::from_basis(&basis))
}

/// Gaps, minimal generators and Frobenius number of a value semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    pub gaps: Vec<usize>,
    pub generators: Vec<usize>,
    /// Largest gap; -1 when there are no gaps.
    pub frobenius: i64,
}

impl Semigroup {
    /// From the conductor `c` and the semigroup elements below it.
    pub fn from_conductor(conductor: usize, elements_below: &[usize]) -> Semigroup {
        let bound = 2 * conductor + 1;
        let mut member = vec![false; bound + 1];
        for &g in elements_below.iter().filter(|&&g| g < conductor) {
            member[g] = true;
        }
        member[0] = true;
        for flag in member.iter_mut().skip(conductor) {
            *flag = true;
        }
        let gaps: Vec<usize> = (0..conductor).filter(|&g| !member[g]).collect();
        let nonzero: Vec<usize> = (1..=bound).filter(|&g| member[g]).collect();
        let generators = nonzero
            .iter()
            .copied()
            .filter(|&g| !nonzero.iter().any(|&a| a < g && member[g - a]))
            .collect();
        Semigroup {
            frobenius: conductor as i64 - 1,
            gaps,
            generators,
        }
    }
}

/// Certified invariants of a primitive parameterization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCertificate {
    pub delta: usize,
    /// Conductor exponents `c_j` per branch.
    pub cond_exp: Vec<usize>,
    /// `c = sum c_j`.
    pub cond_total: usize,
    /// Precision at which the tail certificate fired.
    pub d_used: usize,
    pub gorenstein: bool,
    /// Single-branch only.
    pub semigroup: Option<Semigroup>,
    pub det_bound_max: usize,
    pub det_bound_delta: usize,
}

/// No certificate within the precision budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undecided {
    pub d_max: usize,
    /// `delta_D` at `d_max`, a lower bound for delta.
    pub delta_bounded: usize,
    /// Per branch: gcd of the attained orders of that branch at `d_max`.
    pub gcd_evidence: Vec<u64>,
    pub note: String,
}

pub const UNDECIDED_NOTE: &str = "no certificate at budget: delta may be infinite \
(parameterization not primitive) or the precision budget is too small";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Certified(DeltaCertificate),
    Undecided(Undecided),
}

impl Outcome {
    pub fn certificate(&self) -> Option<&DeltaCertificate> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::Undecided(_) => None,
        }
    }
}

/// Iterative deepening `D = d_init, 2 d_init, ...` capped at `d_max` until
/// the tail certificate fires.
pub fn delta_certified(
    phi: &Parameterization,
    opts: &EngineOptions,
) -> Result<Outcome, EngineError> {
    opts.validate()?;
    require_valid(phi)?;
    let mut d = opts.d_init;
    loop {
        let report = delta_bounded(phi, d)?;
        if let Some(windows) = report.certified_windows() {
            return Ok(Outcome::Certified(certificate_from(&report, windows)));
        }
        if d >= opts.d_max {
            return Ok(Outcome::Undecided(undecided_from(phi, &report)?));
        }
        d = (d * 2).min(opts.d_max);
    }
}

fn certificate_from(report: &BoundedReport, windows: Vec<usize>) -> DeltaCertificate {
    let delta = report.delta_bounded;
    let cond_total: usize = windows.iter().sum();
    let semigroup = report
        .attained_orders
        .as_ref()
        .map(|orders| Semigroup::from_conductor(windows[0], orders));
    let bounds = bounds_for(delta, &windows);
    DeltaCertificate {
        delta,
        cond_total,
        d_used: report.precision,
        gorenstein: cond_total == 2 * delta,
        semigroup,
        det_bound_max: bounds.max_conductor,
        det_bound_delta: bounds.delta,
        cond_exp: windows,
    }
}

fn undecided_from(
    phi: &Parameterization,
    report: &BoundedReport,
) -> Result<Undecided, EngineError> {
    let gcd_evidence = match &report.attained_orders {
        Some(orders) => vec![gcd_all(orders)],
        None => (0..phi.branches())
            .map(|j| {
                let single = delta_bounded(&phi.branch(j)?, report.precision)?;
                Ok(gcd_all(single.attained_orders.as_deref().unwrap_or(&[])))
            })
            .collect::<Result<_, EngineError>>()?,
    };
    Ok(Undecided {
        d_max: report.precision,
        delta_bounded: report.delta_bounded,
        gcd_evidence,
        note: UNDECIDED_NOTE.to_string(),
    })
}

fn gcd_all(orders: &[usize]) -> u64 {
    orders.iter().fold(0u64, |g, &m| g.gcd(&(m as u64)))
}

/// Value semigroup data; single-branch certificates only.
pub fn semigroup(cert: &DeltaCertificate) -> Result<Semigroup, EngineError> {
    cert.semigroup.clone().ok_or(EngineError::MultiBranch)
}

pub fn gorenstein(cert: &DeltaCertificate) -> bool {
    cert.cond_total == 2 * cert.delta
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterminacyBounds {
    /// `max(1, 2 max c_j - 1)`.
    pub max_conductor: usize,
    /// `max(1, 4 delta - 1)`.
    pub delta: usize,
}

fn bounds_for(delta: usize, cond_exp: &[usize]) -> DeterminacyBounds {
    let cmax = cond_exp.iter().copied().max().unwrap_or(0);
    DeterminacyBounds {
        max_conductor: (2 * cmax).saturating_sub(1).max(1),
        delta: (4 * delta).saturating_sub(1).max(1),
    }
}

/// Orders beyond which terms of the entries can be dropped without
/// changing the singularity.
pub fn determinacy_bound(cert: &DeltaCertificate) -> DeterminacyBounds {
    bounds_for(cert.delta, &cert.cond_exp)
}

/// `delta(phi) - sum_j delta(phi_j)`: the codimension contributed by gluing
/// the branches together.
pub fn gluing_codim(total: &Outcome, branches: &[Outcome]) -> Result<usize, EngineError> {
    if branches.len() < 2 {
        return Err(EngineError::MissingCertificate(
            "gluing needs at least two branch certificates".into(),
        ));
    }
    let total = total
        .certificate()
        .ok_or_else(|| EngineError::MissingCertificate("whole curve".into()))?;
    let mut sum = 0;
    for (j, b) in branches.iter().enumerate() {
        let cert = b
            .certificate()
            .ok_or_else(|| EngineError::MissingCertificate(format!("branch {}", j + 1)))?;
        sum += cert.delta;
    }
    Ok(total.delta - sum)
}

/// Certifies `phi` and each of its branches, then returns the gluing
/// codimension.
pub fn gluing_codim_of(phi: &Parameterization, opts: &EngineOptions) -> Result<usize, EngineError> {
    let total = delta_certified(phi, opts)?;
    let branches = (0..phi.branches())
        .map(|j| delta_certified(&phi.branch(j)?, opts))
        .collect::<Result<Vec<_>, _>>()?;
    gluing_codim(&total, &branches)
}
