use std::collections::BTreeMap;

use landau_coulomb::bounds::{self, BoundConstants};
use landau_coulomb::coulomb::{self, BlockCache};
use landau_coulomb::quadrature::Oracle;
use landau_coulomb::report::{Relation, VerificationReport};
use landau_coulomb::special::{gautschi_default_grid, gautschi_sweep};
use landau_coulomb::trial::{self, TrialEnergyRecord};
use landau_coulomb::{spectral, Error};
use serde_json::{json, Value};

use crate::args::{ElementsArgs, ScanArgs, SpectrumArgs, Suite, TrialArgs, VerifyArgs};
use crate::table::Table;

/// What a command produced. `failure` is set when the output was written but
/// the run still has to exit nonzero.
pub struct Run {
    pub table: Table,
    pub config: Value,
    pub meta: BTreeMap<String, Value>,
    pub failure: Option<String>,
}

impl Run {
    fn new(table: Table, config: Value) -> Self {
        Self {
            table,
            config,
            meta: BTreeMap::new(),
            failure: None,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Domain { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

type CmdResult = Result<Run, CliError>;

fn check_coupling(z: f64) -> Result<(), CliError> {
    if !z.is_finite() || z < 0.0 {
        return Err(CliError::Usage(format!("Z = {z} must be finite and >= 0")));
    }
    Ok(())
}

pub fn zc() -> CmdResult {
    let c = BoundConstants::<f64>::compute()?;
    let mut table = Table::new(vec!["c0", "c1", "zc"]);
    table.push(vec![c.c0.into(), c.c1.into(), c.zc.into()]);
    Ok(Run::new(table, json!({})))
}

pub fn elements(a: &ElementsArgs) -> CmdResult {
    let block = coulomb::build_block::<f64>(a.m, a.nmax)?;
    let mut table = Table::new(vec!["m", "n", "n_prime", "kinetic", "v0", "v1"]);
    for n in 0..block.order() {
        for n2 in 0..block.order() {
            let t = if n == n2 { block.kinetic[n] } else { 0.0 };
            table.push(vec![
                a.m.into(),
                n.into(),
                n2.into(),
                t.into(),
                block.v0[(n, n2)].into(),
                block.v1[(n, n2)].into(),
            ]);
        }
    }
    Ok(Run::new(table, json!({ "m": a.m, "nmax": a.nmax })))
}

fn eigen_columns() -> Table {
    Table::new(vec!["m", "n_max", "Z", "index", "eigenvalue"])
}

pub fn spectrum(a: &SpectrumArgs) -> CmdResult {
    check_coupling(a.z)?;
    let values = spectral::assemble::<f64>(a.m, a.z, a.nmax)?.lowest_eigenvalues(a.k)?;
    let mut table = eigen_columns();
    for (i, e) in values.into_iter().enumerate() {
        table.push(vec![
            a.m.into(),
            a.nmax.into(),
            a.z.into(),
            i.into(),
            e.into(),
        ]);
    }
    Ok(Run::new(
        table,
        json!({ "m": a.m, "Z": a.z, "nmax": a.nmax, "k": a.k }),
    ))
}

fn coupling_grid(a: &ScanArgs) -> Result<Vec<f64>, CliError> {
    let zs = if !a.z.is_empty() {
        a.z.clone()
    } else if let (Some(lo), Some(hi)) = (a.z_min, a.z_max) {
        if a.z_steps == 0 {
            return Err(CliError::Usage("--Z-steps must be at least 1".into()));
        }
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(CliError::Usage(format!(
                "--Z-min {lo} exceeds --Z-max {hi}"
            )));
        }
        if a.z_steps == 1 {
            vec![lo]
        } else {
            let step = (hi - lo) / (a.z_steps - 1) as f64;
            (0..a.z_steps)
                .map(|i| {
                    if i + 1 == a.z_steps {
                        hi
                    } else {
                        lo + step * i as f64
                    }
                })
                .collect()
        }
    } else {
        return Err(CliError::Usage("give --Z or --Z-min and --Z-max".into()));
    };
    for &z in &zs {
        check_coupling(z)?;
    }
    Ok(zs)
}

pub fn scan(a: &ScanArgs) -> CmdResult {
    let zs = coupling_grid(a)?;
    if a.m.is_empty() || a.nmax.is_empty() {
        return Err(CliError::Usage(
            "--m and --nmax need at least one value".into(),
        ));
    }
    let cache = BlockCache::<f64>::new();
    let outcome = spectral::scan(&cache, &zs, &a.m, &a.nmax, a.k);
    let mut table = eigen_columns();
    for r in &outcome.records {
        for (i, &e) in r.lowest_eigenvalues.iter().enumerate() {
            table.push(vec![
                r.m.into(),
                r.n_max.into(),
                r.z.into(),
                i.into(),
                e.into(),
            ]);
        }
    }
    let config = json!({ "m": a.m, "Z": zs, "nmax": a.nmax, "k": a.k });
    let mut run = Run::new(table, config);
    if !outcome.is_complete() {
        for f in &outcome.failures {
            eprintln!("cell m={} n_max={} Z={}: {}", f.m, f.n_max, f.z, f.error);
        }
        run.failure = Some(format!("{} scan cells failed", outcome.failures.len()));
    }
    run.meta
        .insert("failed_cells".into(), Value::from(outcome.failures.len()));
    Ok(run)
}

fn oracle_report(max_m: i64, n_max: usize) -> Result<Vec<VerificationReport>, CliError> {
    let mut oracle = Oracle::<f64>::new();
    let mut elements = VerificationReport::new("oracle-elements");
    let mut gram = VerificationReport::new("oracle-orthonormality");
    for m in -max_m..=max_m {
        oracle.prepare(m, n_max)?;
        for n in 0..=n_max {
            for n2 in 0..=n_max {
                let closed = coulomb::v0_element::<f64>(m, n, n2)?;
                let quad = oracle.coulomb_element(m, n, n2)?;
                elements.check(
                    || format!("m={m} n={n} n'={n2} relative difference"),
                    (closed - quad).abs() / closed.abs(),
                    1e-10,
                    Relation::LessEq,
                    0.0,
                );
                let delta = if n == n2 { 1.0 } else { 0.0 };
                gram.check(
                    || format!("m={m} n={n} n'={n2} overlap"),
                    (oracle.overlap(m, n, n2)? - delta).abs(),
                    1e-10,
                    Relation::LessEq,
                    0.0,
                );
            }
        }
    }
    Ok(vec![elements, gram])
}

fn run_suite(suite: Suite, a: &VerifyArgs) -> Result<Vec<VerificationReport>, CliError> {
    let seed = a.output.seed;
    Ok(match suite {
        Suite::LemmaPre | Suite::Lemma2 => {
            let m = i64::from(a.m.unwrap_or(20));
            let n_max = a.nmax.unwrap_or(40);
            let cache = BlockCache::<f64>::new();
            let report = if suite == Suite::LemmaPre {
                coulomb::verify_lemma_pre(&cache, -m..=m, n_max)?
            } else {
                coulomb::verify_lemma2(&cache, -m..=m, n_max)?
            };
            vec![report]
        }
        Suite::Gautschi => {
            let (xs, ss) = gautschi_default_grid();
            vec![gautschi_sweep(&xs, &ss)?]
        }
        Suite::LiebYau => {
            let truncation = a.nmax.unwrap_or(bounds::DEFAULT_ROW_TRUNCATION);
            let rows = bounds::DEFAULT_ROW_LIMIT.min(truncation);
            let support = bounds::DEFAULT_SEQUENCE_NMAX.min(truncation);
            let zc = BoundConstants::<f64>::compute()?.zc;
            let block = coulomb::build_block::<f64>(0, support)?;
            vec![
                bounds::lieb_yau_row_suite::<f64>(rows, truncation)?,
                bounds::random_form_sweep(&block, a.k, seed, Some(zc))?,
                bounds::gamma_ratio_check::<f64>(10_000)?,
            ]
        }
        Suite::Oracle => oracle_report(i64::from(a.m.unwrap_or(5)), a.nmax.unwrap_or(20))?,
    })
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let suite = a.suite();
    let reports = run_suite(suite, a)?;
    let mut table = Table::new(vec![
        "suite",
        "checks",
        "failures",
        "inconclusive",
        "worst_margin",
        "worst_relative_margin",
        "worst_case",
        "verdict",
    ]);
    let mut failed = 0;
    for r in &reports {
        eprintln!("{r}");
        if !r.passed() {
            failed += 1;
        }
        table.push(vec![
            r.suite.as_str().into(),
            r.checks.into(),
            r.failures.into(),
            r.inconclusive.into(),
            r.worst_margin.into(),
            r.worst_relative_margin.into(),
            r.worst_case.clone().unwrap_or_default().into(),
            format!("{:?}", r.verdict()).to_lowercase().into(),
        ]);
    }
    let name = suite_name(suite);
    let config = json!({ "suite": name, "m": a.m, "nmax": a.nmax, "k": a.k });
    let mut run = Run::new(table, config);
    if failed > 0 {
        run.failure = Some(format!(
            "{failed} of {} reports in suite {name} failed",
            reports.len()
        ));
    }
    Ok(run)
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::LemmaPre => "lemma-pre",
        Suite::Lemma2 => "lemma2",
        Suite::Gautschi => "gautschi",
        Suite::LiebYau => "lieb-yau",
        Suite::Oracle => "oracle",
    }
}

pub fn trial(a: &TrialArgs) -> CmdResult {
    check_coupling(a.z)?;
    let cutoffs = trial::default_cutoffs(a.n_max);
    let records = cutoffs
        .iter()
        .map(|&n| trial::trial_energies::<f64>(n))
        .collect::<Result<Vec<TrialEnergyRecord<f64>>, _>>()?;
    let mut table = Table::new(vec!["N", "kinetic", "v0_energy", "v1_energy", "total"]);
    for r in &records {
        table.push(vec![
            r.cutoff.into(),
            r.kinetic.into(),
            r.v0_energy.into(),
            r.v1_energy.into(),
            r.total(a.z).into(),
        ]);
    }
    let mut run = Run::new(
        table,
        json!({ "Z": a.z, "Nmax": a.n_max, "cutoffs": cutoffs }),
    );
    let zc = BoundConstants::<f64>::compute()?.zc;
    let expected = 2.0 * (1.0 - a.z / zc);
    run.meta
        .insert("expected_slope".into(), Value::from(expected));
    match trial::fit_log_slope(&records, a.z) {
        Ok(fit) => {
            eprintln!(
                "slope {:.6} (expected {expected:.6}), plain linear fit {:.6}, {} points",
                fit.slope, fit.linear_slope, fit.points
            );
            run.meta.insert(
                "fit".into(),
                serde_json::to_value(fit).unwrap_or(Value::Null),
            );
            run.meta.insert("slope".into(), Value::from(fit.slope));
        }
        Err(e) => run.failure = Some(format!("slope fit unavailable: {e}")),
    }
    Ok(run)
}
