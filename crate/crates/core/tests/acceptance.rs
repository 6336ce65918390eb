//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use common::{certify, family, monomial_curve, param, random_certified, Instance, RANDOM_OPTS};
use curvedelta::engine::{
    delta_bounded, delta_certified, determinacy_bound, gluing_codim_of, EngineError, EngineOptions,
    Outcome,
};
use curvedelta::family::{scan, ScanOptions, ScanReport};
use curvedelta::oracle::{brute_delta, sieve_semigroup};
use curvedelta::{FieldDescriptor, Parameterization, Polynomial, Scalar, SpecPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// delta over GF(2) of `(t^4, t^6 + t^7)`, pinned by the brute-force oracle.
const GF2_DELTA: usize = 9;

fn scan_at(fam_text: &str, points: &[&str]) -> Result<ScanReport, String> {
    let fam = family(fam_text);
    let pts: Vec<SpecPoint> = points
        .iter()
        .map(|p| SpecPoint::parse(p, fam.ring()).unwrap())
        .collect();
    scan(&fam, &pts, &ScanOptions::default()).map_err(|e| e.to_string())
}

fn deltas(report: &ScanReport) -> Vec<Option<usize>> {
    report.rows.iter().map(|r| r.outcome.delta()).collect()
}

fn conductors(report: &ScanReport) -> Vec<Option<usize>> {
    report.rows.iter().map(|r| r.outcome.cond_total()).collect()
}

fn criterion_1() -> Check {
    let report = scan_at(
        r#"{"ring":"Q[s]","n":4,"r":1,"entries":[["t^5","t^6","(s)*t^4 + t^8","t^9"]]}"#,
        &["generic", "s=0", "s=1", "s=-2"],
    )?;
    let d = deltas(&report);
    let c = conductors(&report);
    ensure!(d == [Some(4), Some(5), Some(4), Some(4)], "delta {d:?}");
    ensure!(c == [Some(8); 4], "conductor {c:?}");
    ensure!(report.audit.pass, "audit failed");
    let jumps: Vec<String> = report
        .audit
        .jumping_points
        .iter()
        .map(ToString::to_string)
        .collect();
    ensure!(jumps == ["s=0"], "jumping points {jumps:?}");
    Ok(())
}

fn criterion_2() -> Check {
    let report = scan_at(
        r#"{"ring":"Q[s]","n":4,"r":1,"entries":[["t^5","t^6","(s)*t^7 + t^8","t^9"]]}"#,
        &["generic", "s=0", "s=1"],
    )?;
    let d = deltas(&report);
    let c = conductors(&report);
    ensure!(d == [Some(5); 3], "delta {d:?}");
    ensure!(c == [Some(9), Some(8), Some(9)], "conductor {c:?}");
    ensure!(report.audit.pass, "audit failed");
    ensure!(
        report
            .audit
            .notes
            .iter()
            .any(|n| n.contains("conductor") && n.contains("s=0")),
        "no conductor note: {:?}",
        report.audit.notes
    );
    Ok(())
}

fn criterion_3() -> Check {
    for c in 2..=6usize {
        let exps: Vec<usize> = (c..2 * c).collect();
        let phi = monomial_curve(&exps);
        let cert = certify(&phi);
        ensure!(
            cert.delta == c - 1 && cert.cond_total == c,
            "c={c}: {cert:?}"
        );

        let short = phi.truncate(2 * c - 2);
        match delta_certified(&short, &EngineOptions::default()).map_err(|e| e.to_string())? {
            Outcome::Certified(s) => {
                ensure!(
                    s.delta == c,
                    "c={c}: truncation at 2c-2 gives delta {}",
                    s.delta
                )
            }
            Outcome::Undecided(_) => {}
        }

        let kept = certify(&phi.truncate(2 * c - 1));
        ensure!(
            kept.delta == cert.delta
                && kept.cond_total == cert.cond_total
                && kept.semigroup.as_ref().map(|s| &s.gaps)
                    == cert.semigroup.as_ref().map(|s| &s.gaps),
            "c={c}: truncation at 2c-1 changed the certificate"
        );
    }
    Ok(())
}

fn criterion_4() -> Check {
    let cusp = monomial_curve(&[2, 3]);
    let at2 = cusp.truncate(2);
    let decided = at2.validate().valid
        && matches!(
            delta_certified(&at2, &EngineOptions::default()),
            Ok(Outcome::Certified(_))
        );
    ensure!(!decided, "truncation at 2 still certifies");
    let at3 = certify(&cusp.truncate(3));
    ensure!(
        at3.delta == 1 && at3.cond_total == 2,
        "truncation at 3: {at3:?}"
    );
    Ok(())
}

fn criterion_5() -> Check {
    let text = r#"{"ring":"Z","n":2,"r":1,"entries":[["t^4","t^6 + t^7"]]}"#;
    let report = scan_at(text, &["generic", "p=2", "p=3", "p=5"])?;
    let d = deltas(&report);
    ensure!(
        d == [Some(8), Some(GF2_DELTA), Some(8), Some(8)],
        "delta {d:?}"
    );
    ensure!(GF2_DELTA > 8, "GF(2) value not above the generic one");

    let gf2 = param(r#"{"field":"GF(2)","n":2,"r":1,"entries":[["t^4","t^6 + t^7"]]}"#);
    let cert = certify(&gf2);
    let brute = brute_delta(&gf2, 2 * cert.cond_total + 5).map_err(|e| e.to_string())?;
    ensure!(brute == GF2_DELTA, "oracle over GF(2) gives {brute}");

    ensure!(report.audit.pass, "audit failed");
    let jumps: Vec<String> = report
        .audit
        .jumping_points
        .iter()
        .map(ToString::to_string)
        .collect();
    ensure!(jumps == ["p=2"], "jumping points {jumps:?}");
    Ok(())
}

fn criterion_6(instances: &[Instance]) -> Check {
    ensure!(instances.len() >= 20, "only {} instances", instances.len());
    let mut monomial = 0;
    for inst in instances {
        let c = inst.cert.cond_total;
        let brute = brute_delta(&inst.phi, 2 * c + 5).map_err(|e| e.to_string())?;
        ensure!(
            brute == inst.cert.delta,
            "engine {} vs oracle {brute} on {:?}",
            inst.cert.delta,
            inst.phi
        );
        if let Some(exps) = &inst.monomial {
            monomial += 1;
            let sieve = sieve_semigroup(exps, 2 * c + 5);
            let gaps = &inst.cert.semigroup.as_ref().ok_or("no semigroup")?.gaps;
            ensure!(
                &sieve.gaps == gaps,
                "gaps {gaps:?} vs sieve {:?}",
                sieve.gaps
            );
            ensure!(
                sieve.conductor == Some(c),
                "sieve conductor {:?} vs {c}",
                sieve.conductor
            );
        }
    }
    ensure!(monomial > 0, "no monomial instances");
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng, field: FieldDescriptor, n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| field.from_i64(rng.gen_range(-2..=2)))
                .collect()
        })
        .collect()
}

fn random_tau(rng: &mut ChaCha8Rng, field: FieldDescriptor) -> Polynomial {
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-2i64..=2);
    }
    let terms = vec![
        (1, field.from_i64(lead)),
        (2, field.from_i64(rng.gen_range(-2..=2))),
        (3, field.from_i64(rng.gen_range(-2..=2))),
    ];
    Polynomial::from_terms(field, terms).unwrap()
}

fn same_invariants(a: &Parameterization, b: &Parameterization, what: &str) -> Check {
    let ca = delta_certified(a, &RANDOM_OPTS).map_err(|e| e.to_string())?;
    let cb = delta_certified(b, &RANDOM_OPTS).map_err(|e| e.to_string())?;
    let (Some(ca), Some(cb)) = (ca.certificate(), cb.certificate()) else {
        return Err(format!("{what}: lost the certificate"));
    };
    ensure!(
        ca.delta == cb.delta
            && ca.cond_exp == cb.cond_exp
            && ca.semigroup.as_ref().map(|s| &s.gaps) == cb.semigroup.as_ref().map(|s| &s.gaps),
        "{what} changed the invariants: {ca:?} vs {cb:?}"
    );
    Ok(())
}

fn criterion_7(instances: &[Instance]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut plane = 0;
    let mut glued = 0;
    for inst in instances {
        let (phi, cert) = (&inst.phi, &inst.cert);
        let (d, c) = (cert.delta, cert.cond_total);
        ensure!(d <= c && c <= 2 * d, "delta {d}, conductor {c}");
        ensure!(cert.gorenstein == (c == 2 * d), "Gorenstein flag {cert:?}");
        if phi.vars() == 2 {
            plane += 1;
            ensure!(cert.gorenstein, "plane curve not Gorenstein: {phi:?}");
        }

        let mut last = 0;
        for precision in 1..=2 * c + 5 {
            let v = delta_bounded(phi, precision)
                .map_err(|e| e.to_string())?
                .delta_bounded;
            ensure!(v >= last, "delta_D drops at D={precision}");
            last = v;
        }

        let field = phi.field();
        let moved = loop {
            match phi.linear_source_change(&random_matrix(&mut rng, field, phi.vars())) {
                Ok(p) => break p,
                Err(curvedelta::ParamError::SingularMatrix) => continue,
                Err(e) => return Err(e.to_string()),
            }
        };
        same_invariants(phi, &moved, "linear source change")?;

        let d_work = determinacy_bound(cert).max_conductor.max(phi.max_degree());
        for j in 0..phi.branches() {
            let tau = random_tau(&mut rng, field);
            let re = phi
                .reparameterize_target(j, &tau, d_work)
                .map_err(|e| e.to_string())?;
            same_invariants(phi, &re, "reparameterization")?;
        }

        if phi.branches() >= 2 {
            glued += 1;
            let g = gluing_codim_of(phi, &RANDOM_OPTS).map_err(|e| e.to_string())?;
            ensure!(g + 1 >= phi.branches(), "gluing codimension {g}");
        }
    }
    ensure!(plane > 0 && glued > 0, "no plane or multi-branch instances");

    let node = param(r#"{"field":"Q","n":2,"r":2,"entries":[["t","0"],["0","t"]]}"#);
    let g = gluing_codim_of(&node, &EngineOptions::default()).map_err(|e| e.to_string())?;
    ensure!(g == 1, "node gluing codimension {g}");
    Ok(())
}

fn criterion_8() -> Check {
    for k in 2..=4usize {
        let phi = monomial_curve(&[k]);
        match delta_certified(&phi, &EngineOptions::default()).map_err(|e| e.to_string())? {
            Outcome::Undecided(u) => {
                ensure!(
                    u.gcd_evidence == [k as u64],
                    "t^{k}: evidence {:?}",
                    u.gcd_evidence
                )
            }
            Outcome::Certified(_) => return Err(format!("t^{k} certified")),
        }
    }

    let zero = param(r#"{"field":"Q","n":2,"r":2,"entries":[["t^2","t^3"],["0","0"]]}"#);
    match delta_certified(&zero, &EngineOptions::default()) {
        Err(EngineError::InvalidParameterization(v)) => ensure!(
            !v.valid && v.branch_nonzero == [true, false] && v.duplicate_branches.is_empty(),
            "zero branch flags {v:?}"
        ),
        other => return Err(format!("zero branch accepted: {other:?}")),
    }

    let dup = param(r#"{"field":"Q","n":2,"r":2,"entries":[["t^2","t^3"],["t^2","t^3"]]}"#);
    match delta_certified(&dup, &EngineOptions::default()) {
        Err(EngineError::InvalidParameterization(v)) => ensure!(
            !v.valid && v.branch_nonzero == [true, true] && v.duplicate_branches == [(0, 1)],
            "duplicate branch flags {v:?}"
        ),
        other => return Err(format!("duplicate branch accepted: {other:?}")),
    }
    Ok(())
}

fn main() {
    let instances = random_certified(2024, 24);
    let count = |f: &dyn Fn(&Instance) -> bool| instances.iter().filter(|i| f(i)).count();
    println!(
        "random instances: {} ({} monomial, {} two-branch, {} plane, {} over GF(7), max conductor {})",
        instances.len(),
        count(&|i| i.monomial.is_some()),
        count(&|i| i.phi.branches() == 2),
        count(&|i| i.phi.vars() == 2),
        count(&|i| i.phi.field() != FieldDescriptor::Rationals),
        instances.iter().map(|i| i.cert.cond_total).max().unwrap_or(0)
    );
    type Criterion<'a> = Box<dyn Fn() -> Check + 'a>;
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "family s*t^4: deltas, conductors, audit",
            Box::new(criterion_1),
        ),
        (
            "family s*t^7: deltas, conductor jump note, audit",
            Box::new(criterion_2),
        ),
        (
            "(t^c..t^2c-1): certificate and truncation",
            Box::new(criterion_3),
        ),
        ("cusp truncation", Box::new(criterion_4)),
        ("integer family (t^4, t^6+t^7) mod p", Box::new(criterion_5)),
        (
            "random instances agree with the oracle",
            Box::new(|| criterion_6(&instances)),
        ),
        (
            "invariants on random instances",
            Box::new(|| criterion_7(&instances)),
        ),
        ("undecided and rejected inputs", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS criterion {}: {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
