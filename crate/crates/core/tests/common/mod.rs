#![allow(dead_code)]

use curvedelta::engine::{delta_certified, DeltaCertificate, EngineOptions, Outcome};
use curvedelta::{
    parse_document, Document, FamilyParameterization, FieldDescriptor, Parameterization, Polynomial,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn param(text: &str) -> Parameterization {
    match parse_document(text).expect("valid document") {
        Document::Param { param, .. } => param,
        Document::Family { .. } => panic!("expected a parameterization"),
    }
}

pub fn family(text: &str) -> FamilyParameterization {
    match parse_document(text).expect("valid document") {
        Document::Family { family, .. } => family,
        Document::Param { .. } => panic!("expected a family"),
    }
}

/// Single-branch monomial curve over Q.
pub fn monomial_curve(exps: &[usize]) -> Parameterization {
    let q = FieldDescriptor::Rationals;
    let row = exps
        .iter()
        .map(|&e| Polynomial::monomial(q.one(), e))
        .collect();
    Parameterization::new(q, exps.len(), 1, vec![row]).unwrap()
}

pub fn certify(phi: &Parameterization) -> DeltaCertificate {
    match delta_certified(phi, &EngineOptions::default()).unwrap() {
        Outcome::Certified(c) => c,
        Outcome::Undecided(u) => panic!("undecided: {u:?}"),
    }
}

pub struct Instance {
    pub phi: Parameterization,
    pub cert: DeltaCertificate,
    /// `Some(exponents)` for single-branch monomial curves.
    pub monomial: Option<Vec<usize>>,
}

pub const RANDOM_OPTS: EngineOptions = EngineOptions {
    d_init: 16,
    d_max: 128,
};

fn random_entry(rng: &mut ChaCha8Rng, field: FieldDescriptor) -> Polynomial {
    let min = rng.gen_range(1..=4);
    let degrees: Vec<usize> = (min..=8)
        .filter(|&d| d == min || rng.gen_bool(0.3))
        .collect();
    let mut terms = Vec::with_capacity(degrees.len());
    for d in degrees {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3i64..=3);
        }
        terms.push((d, field.from_i64(c)));
    }
    Polynomial::from_terms(field, terms).unwrap()
}

fn random_instance(rng: &mut ChaCha8Rng) -> (Parameterization, Option<Vec<usize>>) {
    let n = rng.gen_range(1..=3);
    if rng.gen_bool(0.3) {
        let mut exps: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
        exps.sort_unstable();
        exps.dedup();
        return (monomial_curve(&exps), Some(exps));
    }
    let field = if rng.gen_bool(0.8) {
        FieldDescriptor::Rationals
    } else {
        FieldDescriptor::prime(7).unwrap()
    };
    let r = rng.gen_range(1..=2);
    let entries = (0..r)
        .map(|_| (0..n).map(|_| random_entry(rng, field)).collect())
        .collect();
    (Parameterization::new(field, n, r, entries).unwrap(), None)
}

/// Deterministic random instances (n <= 3, r <= 2, degree <= 8,
/// coefficients in [-3, 3]) that certify within [`RANDOM_OPTS`].
pub fn random_certified(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100 * count, "too few certifying instances");
        let (phi, monomial) = random_instance(&mut rng);
        if !phi.validate().valid {
            continue;
        }
        if let Outcome::Certified(cert) = delta_certified(&phi, &RANDOM_OPTS).unwrap() {
            out.push(Instance {
                phi,
                cert,
                monomial,
            });
        }
    }
    out
}
