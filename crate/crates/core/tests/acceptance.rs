//! Acceptance suite: one PASS/FAIL line per criterion on stdout.
//!
//! Lines are written straight to the stdout handle so they show up without
//! `--nocapture`.

use std::io::Write;
use std::time::Instant;

use landau_coulomb::bounds::{
    gamma_ratio_check, lieb_yau_row_suite, random_form_sweep, BoundConstants,
};
use landau_coulomb::coulomb::{
    build_block, v0_element, verify_lemma2, verify_lemma_pre, BlockCache,
};
use landau_coulomb::quadrature::Oracle;
use landau_coulomb::special::{gautschi_default_grid, gautschi_sweep};
use landau_coulomb::spectral::assemble_cached;
use landau_coulomb::trial::{fit_channel, fit_log_slope, trial_energies, trial_sequence, Channel};

const SEED: u64 = 20_240_417;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn critical_constant() -> Outcome {
    let c = BoundConstants::<f64>::compute().unwrap();
    let rounded = format!("{:.4}", c.zc);
    let identity = (c.zc * (c.c0 + c.c1) - 4.0).abs();
    outcome(
        rounded == "0.3780" && identity <= 1e-12,
        format!(
            "Zc = {:.10} (4 d.p. {rounded}), |Zc(C0+C1) - 4| = {identity:.2e}",
            c.zc
        ),
    )
}

fn oracle_agreement() -> Outcome {
    let mut oracle = Oracle::<f64>::new();
    let (mut worst, mut count) = (0.0f64, 0usize);
    for m in -5i64..=5 {
        oracle.prepare(m, 20).unwrap();
        for n in 0..=20 {
            for n2 in 0..=20 {
                let closed = v0_element::<f64>(m, n, n2).unwrap();
                let quad = oracle.coulomb_element(m, n, n2).unwrap();
                worst = worst.max((closed - quad).abs() / closed.abs());
                count += 1;
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("{count} elements, worst relative difference {worst:.2e}"),
    )
}

fn lemma_suites() -> Outcome {
    let cache = BlockCache::<f64>::new();
    let pre = verify_lemma_pre(&cache, -20..=20, 40).unwrap();
    let two = verify_lemma2(&cache, -20..=20, 40).unwrap();
    outcome(
        pre.passed() && two.passed(),
        format!(
            "lemma-pre {} checks / {} failures, lemma2 {} checks / {} failures",
            pre.checks, pre.failures, two.checks, two.failures
        ),
    )
}

fn gautschi() -> Outcome {
    let (xs, ss) = gautschi_default_grid();
    let sweep = gautschi_sweep(&xs, &ss).unwrap();
    let ratios = gamma_ratio_check::<f64>(10_000).unwrap();
    outcome(
        sweep.passed() && ratios.passed(),
        format!(
            "grid {} checks / {} failures / {} at equality endpoints, ratio bounds {} checks / {} failures",
            sweep.checks, sweep.failures, sweep.inconclusive, ratios.checks, ratios.failures
        ),
    )
}

fn lieb_yau() -> Outcome {
    let rows = lieb_yau_row_suite::<f64>(512, 4096).unwrap();
    let zc = BoundConstants::<f64>::compute().unwrap().zc;
    let block = build_block::<f64>(0, 256).unwrap();
    let forms = random_form_sweep(&block, 1000, SEED, Some(zc)).unwrap();
    outcome(
        rows.passed() && forms.passed(),
        format!(
            "row sums {} checks / {} failures (worst margin {:.3e}), random forms {} checks / {} failures (seed {SEED})",
            rows.checks, rows.failures, rows.worst_margin, forms.checks, forms.failures
        ),
    )
}

fn subcritical_positivity() -> Outcome {
    let zc = BoundConstants::<f64>::compute().unwrap().zc;
    let cache = BlockCache::<f64>::new();
    let mut lowest = f64::INFINITY;
    let mut at = (0.0, 0);
    for n_max in [64usize, 128, 256, 512] {
        for z in [0.1, 0.2, 0.3, 0.37, zc] {
            let e = assemble_cached(&cache, 0, z, n_max)
                .unwrap()
                .lowest_eigenvalues(1)
                .unwrap()[0];
            if e < lowest {
                lowest = e;
                at = (z, n_max);
            }
        }
    }
    outcome(
        lowest >= -1e-9,
        format!(
            "smallest lowest eigenvalue {lowest:.6e} at Z = {:.6}, n_max = {}",
            at.0, at.1
        ),
    )
}

fn sector_minimality() -> Outcome {
    let cache = BlockCache::<f64>::new();
    let values: Vec<(i64, f64)> = (-5i64..=5)
        .map(|m| {
            (
                m,
                assemble_cached(&cache, m, 0.3, 128)
                    .unwrap()
                    .lowest_eigenvalues(1)
                    .unwrap()[0],
            )
        })
        .collect();
    let (arg, min) =
        values.iter().copied().fold(
            (0, f64::INFINITY),
            |acc, (m, e)| if e < acc.1 { (m, e) } else { acc },
        );
    let next = values
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|(_, e)| *e)
        .fold(f64::INFINITY, f64::min);
    outcome(
        arg == 0,
        format!("minimum {min:.10} at m = {arg}, next lowest {next:.10}"),
    )
}

fn divergence_and_sharpness() -> (Outcome, Outcome) {
    let c = BoundConstants::<f64>::compute().unwrap();
    let records: Vec<_> = [100usize, 1_000, 10_000, 20_000]
        .into_iter()
        .map(|n| trial_energies::<f64>(n).unwrap())
        .collect();

    let mut pass = true;
    let mut parts = Vec::new();
    for (label, z) in [("0", 0.0), ("Zc", c.zc), ("2Zc", 2.0 * c.zc)] {
        let fit = fit_log_slope(&records, z).unwrap();
        let expected = 2.0 * (1.0 - z / c.zc);
        pass &= (fit.slope - expected).abs() <= 0.1;
        parts.push(format!("Z={label}: {:.4} (want {expected:.4})", fit.slope));
    }
    let divergence = outcome(pass, parts.join(", "));

    let v0 = fit_channel(&records, Channel::V0).unwrap();
    let v1 = fit_channel(&records, Channel::V1).unwrap();
    let r0 = (v0.slope / c.c0 - 1.0).abs();
    let r1 = (v1.slope / c.c1 - 1.0).abs();
    let sharpness = outcome(
        r0 <= 0.03 && r1 <= 0.03,
        format!(
            "v0 slope {:.4} vs C0 {:.4} ({:.2}%), v1 slope {:.4} vs C1 {:.4} ({:.2}%)",
            v0.slope,
            c.c0,
            100.0 * r0,
            v1.slope,
            c.c1,
            100.0 * r1
        ),
    );
    (divergence, sharpness)
}

fn trial_consistency() -> Outcome {
    let block = build_block::<f64>(0, 128).unwrap();
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in (1..=128).filter(|n| n % 7 == 1 || *n == 128) {
        let a = trial_sequence::<f64>(n);
        let r = trial_energies::<f64>(n).unwrap();
        let pairs = [
            (r.v0_energy, block.v0.quadratic_form(&a)),
            (r.v1_energy, block.v1.quadratic_form(&a)),
            (
                r.kinetic,
                a.iter().zip(&block.kinetic).map(|(x, t)| t * x * x).sum(),
            ),
        ];
        for (fast, dense) in pairs {
            worst = worst.max((fast - dense).abs() / dense.abs());
        }
        count += 1;
    }
    outcome(
        worst <= 1e-10,
        format!("{count} cutoffs up to 128, worst relative difference {worst:.2e}"),
    )
}

#[test]
fn acceptance() {
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |id: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        results.push((id, name, o, start.elapsed().as_secs_f64()));
        let (id, name, o, secs) = results.last().unwrap();
        emit(&format!(
            "{} {id:>2} {name}: {} [{secs:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        ));
    };
    run(1, "critical constant", &critical_constant);
    run(2, "closed form vs quadrature oracle", &oracle_agreement);
    run(3, "lemma suites", &lemma_suites);
    run(4, "Gautschi grid and ratio bounds", &gautschi);
    run(5, "row-sum and quadratic-form bounds", &lieb_yau);
    run(6, "subcritical positivity", &subcritical_positivity);
    run(7, "sector minimality", &sector_minimality);
    let start = Instant::now();
    let (divergence, sharpness) = divergence_and_sharpness();
    let shared = start.elapsed().as_secs_f64();
    run(8, "divergence law", &|| {
        outcome(divergence.pass, divergence.detail.clone())
    });
    run(9, "sharpness of the constants", &|| {
        outcome(sharpness.pass, sharpness.detail.clone())
    });
    run(10, "trial energies vs dense forms", &trial_consistency);
    emit(&format!("(trial energies for 8 and 9 took {shared:.1}s)"));

    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    emit(&format!(
        "acceptance: {}/{} criteria pass",
        results.len() - failed.len(),
        results.len()
    ));
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
