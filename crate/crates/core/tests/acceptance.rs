//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits non-zero when a criterion fails that is not listed in
//! `KNOWN_FAILURES`; those are reported as FAIL with the reason.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sturmjsr::jsr::product_value;
use sturmjsr::*;

type Check = std::result::Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

/// Criteria whose statement is mathematically false, with the reason.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    12,
    "rho is not invariant under diagonal similarity: (2,1;1,1) has rho = (1+sqrt5)/2, its conjugate by diag(2,1) has rho = 1/sqrt5",
)];

fn q(n: i64, d: i64) -> Surd {
    Surd::from_ints(n, d)
}

fn paper_pair() -> MatrixPair<Surd> {
    MatrixPair::new(
        Matrix2::from_ratios([(5, 8), (3, 112), (7, 8), (15, 16)]),
        Matrix2::from_ratios([(15, 16), (1, 1), (1, 128), (7, 8)]),
    )
}

fn d2() -> MatrixPair<Surd> {
    d2_pair(q(1, 4), q(3, 2)).expect("positive entries")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn paper_example() -> Check {
    let p = paper_pair();
    let e0 = matrix::real_eigenvalues(&p.a0).ok_or("complex eigenvalues")?;
    let e1 = matrix::real_eigenvalues(&p.a1).ok_or("complex eigenvalues")?;
    ensure(e0 == (q(1, 1), q(9, 16)), || {
        format!("eigenvalues of A0: {} {}", e0.0, e0.1)
    })?;
    ensure(e1 == (q(1, 1), q(13, 16)), || {
        format!("eigenvalues of A1: {} {}", e1.0, e1.1)
    })?;
    let gap = p.a0.mul(&p.a1).trace() - q(9, 16) - q(13, 16);
    ensure(gap == q(12995, 14336), || format!("trace gap {gap}"))?;
    ensure(in_class_d(&p).in_d, || "pair not in D".into())?;
    Ok(format!("eigenvalues exact, trace gap {gap}, in D"))
}

fn perron_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 1000 {
        let m = Matrix2::new(
            rng.gen_range(0.01..10.0),
            rng.gen_range(0.01..10.0),
            rng.gen_range(0.01..10.0),
            rng.gen_range(0.01..10.0),
        );
        if m.det() <= 1e-9 || m.alpha().abs() <= 1e-9 {
            continue;
        }
        n += 1;
        let data = projective_data(&m).map_err(err)?;
        let p = data.fixed_point;
        let derivative = m.det() / (data.alpha * p + m.b + m.d).powi(2);
        let r = spectral_radius(&m).map_err(err)?;
        let rel = (r - (m.det() / derivative).sqrt()).abs() / r;
        worst = worst.max(rel);
    }
    ensure(worst <= 1e-10, || format!("relative error {worst:e}"))?;
    Ok(format!("1000 matrices, worst relative error {worst:.1e}"))
}

fn ergodic_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for pair in [paper_pair(), d2()] {
        let pf = pair.to_f64();
        for t in [0.5, 1.0, 3.0] {
            let sys = InducedSystem::new(&pf, t).map_err(err)?;
            for _ in 0..200 {
                let len = rng.gen_range(1..=8);
                let w = BinaryWord::new((0..len).map(|_| rng.gen_range(0..2u8)));
                let lhs = ergodic_average_f(&sys, &w).map_err(err)?;
                let rhs = product_value(&pf, &t, &w).map_err(err)?;
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("deviation {worst:e}"))?;
    Ok(format!("1200 words, worst deviation {worst:.1e}"))
}

fn threshold_values() -> Check {
    let p = paper_pair();
    let th = thresholds(&p).map_err(err)?;
    ensure(th.t0 == q(24, 77) && th.t1 == q(61, 8), || {
        format!("t0 = {}, t1 = {}", th.t0, th.t1)
    })?;
    let e0 = delta_extremal_ratio(&p, 0).map_err(err)?;
    let e1 = delta_extremal_ratio(&p, 1).map_err(err)?;
    ensure(e0 == q(77, 30) && e1 == q(32, 305), || {
        format!("exp(Delta) = {e0}, {e1}")
    })?;
    let ratio = q(3, 2) / q(15, 8);
    ensure(th.t0 == ratio.clone() / e0 && th.t1 == ratio / e1, || {
        "closed forms disagree".into()
    })?;
    Ok("t0 = 24/77, t1 = 61/8, exp(Delta) = 77/30, 32/305".into())
}

fn series_convergence() -> Check {
    let cfg = TransferSeriesConfig::default();
    let mut worst: f64 = 0.0;
    for pair in [paper_pair(), d2()] {
        let sys = InducedSystem::new(&pair, 1.0).map_err(err)?;
        for (i, c) in [(0usize, 0.0), (1, 1.0)] {
            worst = worst.max((delta_numeric(&sys, c, &cfg).map_err(err)? - delta_extremal(&sys, i)).abs());
            for k in 0..20 {
                let z = k as f64 / 19.0;
                worst = worst.max((phi_series(&sys, c, z, &cfg).map_err(err)? - phi_extremal(&sys, i, z)).abs());
            }
        }
    }
    ensure(worst <= 1e-8, || format!("deviation {worst:e}"))?;
    Ok(format!("worst deviation {worst:.1e}"))
}

fn domination_regimes() -> Check {
    let p = paper_pair();
    for (t, word, value) in [(0.25, "0", 0.0), (8.0, "1", 8.0f64.ln())] {
        let est = jsr_lower_bruteforce(&p, t, 12).map_err(err)?;
        ensure(
            est.argmax_word.to_string() == word && (est.lower - value).abs() <= 1e-12,
            || format!("t = {t}: {} with {}", est.argmax_word, est.lower),
        )?;
    }
    Ok("t = 1/4 -> \"0\" (log 1), t = 8 -> \"1\" (log 8)".into())
}

const INTERIOR_T: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn sturmian_optimality() -> Check {
    let p = paper_pair();
    let mut found = Vec::new();
    for t in INTERIOR_T {
        let est = jsr_lower_bruteforce(&p, t, 12).map_err(err)?;
        let (param, _) = sturmian_restricted_max(&p, t, 50).map_err(err)?;
        ensure(is_balanced(&est.argmax_word), || {
            format!("t = {t}: {} is not balanced", est.argmax_word)
        })?;
        ensure(est.argmax_parameter == Some(param), || {
            format!("t = {t}: brute force {:?} vs Sturmian {param}", est.argmax_parameter)
        })?;
        found.push(format!("{t}:{param}"));
    }
    Ok(format!("balanced maximizers {}", found.join(" ")))
}

fn certificates() -> Check {
    let p = paper_pair();
    let cfg = TransferSeriesConfig::default();
    let mut worst_flat: f64 = 0.0;
    let mut least_margin = f64::INFINITY;
    for t in INTERIOR_T {
        let report = certify(&p.to_f64(), &t, 256, &cfg).map_err(err)?;
        let (_, value) = sturmian_restricted_max(&p, t, 50).map_err(err)?;
        ensure(report.verdict == Verdict::Certified && report.monotone_ok, || {
            format!("t = {t}: {report:?}")
        })?;
        ensure(report.flatness <= 1e-6 && report.exterior_margin > 0.0, || {
            format!("t = {t}: {report:?}")
        })?;
        ensure((report.constant_value - value).abs() <= 2e-6, || {
            format!("t = {t}: constant {} vs Sturmian value {value}", report.constant_value)
        })?;
        worst_flat = worst_flat.max(report.flatness);
        least_margin = least_margin.min(report.exterior_margin);
    }
    Ok(format!(
        "4 certified, flatness <= {worst_flat:.1e}, margin >= {least_margin:.1e}"
    ))
}

fn staircase() -> Check {
    let p = paper_pair();
    let th = thresholds(&p).map_err(err)?.to_f64();
    let scan = staircase_scan(&p, th.t0 / 2.0, 2.0 * th.t1, 200, 40).map_err(err)?;
    ensure(scan.windows(2).all(|w| w[0].parameter <= w[1].parameter), || {
        "scan not monotone".into()
    })?;
    ensure(scan[0].parameter == RationalParameter::ZERO, || {
        format!("first {}", scan[0].parameter)
    })?;
    ensure(scan[199].parameter == RationalParameter::ONE, || {
        format!("last {}", scan[199].parameter)
    })?;
    let half = RationalParameter::new(1, 2).map_err(err)?;
    let plateau = plateau_bounds(&p, half, 1e-6, 50).map_err(err)?;
    let width = plateau.t_hi - plateau.t_lo;
    ensure(width > 1e-4, || format!("1/2-plateau width {width:e}"))?;
    let golden = (3.0 - 5.0f64.sqrt()) / 2.0;
    let mut widths = Vec::new();
    for max_den in [10, 20, 40] {
        let rep = counterexample_search(&p, golden, 1e-10, max_den).map_err(err)?;
        widths.push(rep.t_bracket.1 - rep.t_bracket.0);
    }
    ensure(widths[0] > widths[1] && widths[1] > widths[2], || {
        format!("t-bracket widths {widths:?}")
    })?;
    Ok(format!(
        "monotone 0/1 -> 1/1, 1/2-plateau width {width:.3e}, widths {:.2e} > {:.2e} > {:.2e}",
        widths[0], widths[1], widths[2]
    ))
}

fn word_combinatorics() -> Check {
    for (p, qd, expected) in [
        (1, 2, "01"),
        (1, 3, "001"),
        (2, 5, "00101"),
        (3, 8, "00100101"),
        (5, 13, "0010010100101"),
    ] {
        let w = mechanical_word(RationalParameter::new(p, qd).map_err(err)?);
        ensure(w.to_string() == expected, || format!("{p}/{qd} -> {w}"))?;
    }
    Ok("01 001 00101 00100101 0010010100101".into())
}

fn scaling_law() -> Check {
    let p = paper_pair();
    let base = thresholds(&p).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let t = q(rng.gen_range(1..1000), rng.gen_range(1..1000));
        let scaled = thresholds(&scale_pair(&p, &t).map_err(err)?).map_err(err)?;
        ensure(
            scaled.t0 * t.clone() == base.t0 && scaled.t1 * t.clone() == base.t1,
            || format!("t = {t}"),
        )?;
    }
    Ok("20 random rational scalings, exact".into())
}

fn classifier_smoke() -> Check {
    let p = paper_pair();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let t = q(rng.gen_range(1..1000), rng.gen_range(1..100));
        ensure(in_class_d(&scale_pair(&p, &t).map_err(err)?).in_d, || {
            format!("scaled by {t} leaves D")
        })?;
    }
    let mut worst: f64 = 0.0;
    for pair in [paper_pair(), d2()] {
        for (x, y) in [(2, 1), (1, 3), (5, 2)] {
            let diag = Matrix2::new(q(x, 1), q(0, 1), q(0, 1), q(y, 1));
            let conj = similarity_transform(&pair, &diag, &q(1, 1), &q(1, 1)).map_err(err)?;
            for i in 0..2 {
                let before = projective_data(&pair.get(i).to_f64()).map_err(err)?.rho;
                let after = projective_data(&conj.get(i).to_f64()).map_err(err)?.rho;
                worst = worst.max((before - after).abs());
            }
        }
    }
    ensure(worst <= 1e-9, || {
        format!("D stable under scaling; rho moves by up to {worst:.3} under diagonal similarity")
    })?;
    Ok("D stable under scaling, rho invariant under diagonal similarity".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "paper example", paper_example),
        (2, "Perron identity", perron_identity),
        (3, "ergodic-average identity", ergodic_identity),
        (4, "thresholds", threshold_values),
        (5, "transfer-series convergence", series_convergence),
        (6, "domination regimes", domination_regimes),
        (7, "Sturmian optimality", sturmian_optimality),
        (8, "certificate", certificates),
        (9, "devil's staircase", staircase),
        (10, "word combinatorics", word_combinatorics),
        (11, "scaling law", scaling_law),
        (12, "classifier smoke", classifier_smoke),
    ];
    let mut unexpected = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
                match known {
                    Some((_, why)) => println!("FAIL {id:>2} {name}: {detail} (known: {why}) [{secs:.2}s]"),
                    None => {
                        unexpected += 1;
                        println!("FAIL {id:>2} {name}: {detail} [{secs:.2}s]");
                    }
                }
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
