use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{parse_instance, ConfigFile};
use super::{io_failure, write_json, Common, Failure, EXIT_FAIL, EXIT_OK, VERSION};
use crate::adversary::ProblemInstance;
use crate::bruteforce::{verify_in, CheckId, DiscrepancyReport, InstanceContext, Tolerances};

/// Instances of the default sweep.
pub const DEFAULT_INSTANCES: [(usize, usize, usize); 8] = [
    (6, 1, 2),
    (7, 1, 2),
    (8, 2, 3),
    (9, 2, 3),
    (10, 2, 3),
    (10, 3, 4),
    (12, 2, 4),
    (12, 3, 4),
];
pub const DEFAULT_TS: [f64; 3] = [1.0, 2.0, 3.0];

#[derive(Debug, Args)]
pub(crate) struct VerifyArgs {
    /// Instance n,k,k' (repeatable) [default: the built-in sweep]
    #[arg(long = "instance", value_name = "N,K,K'")]
    instances: Vec<String>,
    /// Schedule cutoff (repeatable) [default: 1 2 3]
    #[arg(long = "t", value_name = "REAL")]
    ts: Vec<f64>,
    /// Ψ-power exponent for PSI_POWER (repeatable) [default: ⌊t/2⌋]
    #[arg(long = "ell", value_name = "N")]
    ells: Vec<usize>,
    /// Check id to run (repeatable) [default: all]
    #[arg(long = "check", value_name = "ID")]
    checks: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
struct SweepConfig {
    #[serde(serialize_with = "instances_as_strings")]
    instances: Vec<(usize, usize, usize)>,
    ts: Vec<f64>,
    /// Empty means ℓ = ⌊t/2⌋.
    ells: Vec<usize>,
    checks: Vec<CheckId>,
    #[serde(flatten)]
    common: Common,
}

fn instances_as_strings<S: serde::Serializer>(v: &[(usize, usize, usize)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(n, k, kp)| format!("{n},{k},{kp}")))
}

impl SweepConfig {
    fn resolve(args: &VerifyArgs, common: &Common, mut file: ConfigFile) -> Result<Self, Failure> {
        let instance_strings = if args.instances.is_empty() {
            file.take_list("instance")
        } else {
            file.take_list("instance");
            args.instances.clone()
        };
        let instances = if instance_strings.is_empty() {
            DEFAULT_INSTANCES.to_vec()
        } else {
            instance_strings.iter().map(|s| parse_instance(s)).collect::<Result<_, _>>()?
        };
        let file_ts: Vec<f64> = file.take_parsed_list("t")?;
        let ts = match (args.ts.is_empty(), file_ts.is_empty()) {
            (false, _) => args.ts.clone(),
            (true, false) => file_ts,
            (true, true) => DEFAULT_TS.to_vec(),
        };
        let file_ells: Vec<usize> = file.take_parsed_list("ell")?;
        let ells = if args.ells.is_empty() { file_ells } else { args.ells.clone() };
        let check_strings = if args.checks.is_empty() {
            file.take_list("check")
        } else {
            file.take_list("check");
            args.checks.clone()
        };
        let checks = if check_strings.is_empty() {
            CheckId::ALL.to_vec()
        } else {
            check_strings
                .iter()
                .map(|s| CheckId::parse(s).ok_or_else(|| Failure::usage(format!("unknown check id `{s}`"))))
                .collect::<Result<_, _>>()?
        };
        file.finish()?;
        Ok(Self {
            instances,
            ts,
            ells,
            checks,
            common: common.clone(),
        })
    }

    /// (check, t, ℓ) triples for one instance. Checks other than PSI_POWER
    /// ignore ℓ and run once per t with ℓ = ⌊t/2⌋.
    fn work_items(&self) -> Vec<(CheckId, f64, usize)> {
        let mut items = Vec::new();
        for &check in &self.checks {
            for &t in &self.ts {
                let default = (t / 2.0).floor() as usize;
                if check == CheckId::PsiPower && !self.ells.is_empty() {
                    for &ell in self.ells.iter().filter(|&&l| 2.0 * l as f64 <= t) {
                        items.push((check, t, ell));
                    }
                } else {
                    items.push((check, t, default));
                }
            }
        }
        items
    }
}

#[derive(Debug, Serialize)]
struct CsvRow {
    check_id: &'static str,
    n: usize,
    k: usize,
    k_prime: usize,
    t: f64,
    ell: usize,
    closed_form: f64,
    brute_force: f64,
    discrepancy: f64,
    pass: bool,
    millis: u128,
}

#[derive(Debug, Serialize)]
struct CheckInfo {
    id: CheckId,
    statement: &'static str,
    tolerance: f64,
}

#[derive(Debug, Serialize)]
struct VerifyReport<'a> {
    version: &'static str,
    command: &'static str,
    config: &'a SweepConfig,
    checks: Vec<CheckInfo>,
    rows: usize,
    passed: usize,
    failed: usize,
    all_pass: bool,
    failures: Vec<&'a DiscrepancyReport>,
}

fn sort_key(r: &DiscrepancyReport) -> (CheckId, usize, usize, usize, u64, usize) {
    (r.check, r.n, r.k, r.k_prime, r.t.to_bits(), r.ell)
}

pub(crate) fn cmd_verify(args: &VerifyArgs, common: &Common, file: ConfigFile) -> Result<i32, Failure> {
    let cfg = SweepConfig::resolve(args, common, file)?;
    let tol = Tolerances {
        norm: cfg.common.tol_norm,
        exact: cfg.common.tol_exact,
    };
    let instances: Vec<ProblemInstance> = cfg
        .instances
        .iter()
        .map(|&(n, k, kp)| ProblemInstance::new(n, k, kp))
        .collect::<Result<_, _>>()?;
    for &t in &cfg.ts {
        crate::adversary::gamma_schedule(t, 1)?;
    }
    let items = cfg.work_items();
    let pool = cfg.common.pool()?;
    let mut reports: Vec<DiscrepancyReport> = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| -> Result<Vec<DiscrepancyReport>, Failure> {
                let ctx = InstanceContext::new(*inst)?;
                items
                    .par_iter()
                    .map(|&(check, t, ell)| verify_in(&ctx, check, t, ell, &tol).map_err(Failure::from))
                    .collect()
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|v| v.into_iter().flatten().collect())
    })?;
    reports.sort_by_key(sort_key);
    if !cfg.common.timing {
        for r in &mut reports {
            r.millis = 0;
        }
    }

    cfg.common.create_out_dir()?;
    let csv_path = cfg.common.out.join("verify.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| io_failure(&format!("cannot write {}", csv_path.display()), e))?;
    for r in &reports {
        w.serialize(CsvRow {
            check_id: r.check.as_str(),
            n: r.n,
            k: r.k,
            k_prime: r.k_prime,
            t: r.t,
            ell: r.ell,
            closed_form: r.closed_form,
            brute_force: r.brute_force,
            discrepancy: r.discrepancy,
            pass: r.pass,
            millis: r.millis,
        })
        .map_err(|e| io_failure("cannot write CSV row", e))?;
    }
    w.flush().map_err(|e| io_failure("cannot flush CSV", e))?;

    let failures: Vec<&DiscrepancyReport> = reports.iter().filter(|r| !r.pass).collect();
    let report = VerifyReport {
        version: VERSION,
        command: "verify",
        config: &cfg,
        checks: cfg
            .checks
            .iter()
            .map(|&c| CheckInfo {
                id: c,
                statement: c.statement(),
                tolerance: tol.for_check(c),
            })
            .collect(),
        rows: reports.len(),
        passed: reports.len() - failures.len(),
        failed: failures.len(),
        all_pass: failures.is_empty(),
        failures,
    };
    write_json(&cfg.common.out.join("verify.json"), &report)?;
    super::emit(format!(
        "{} of {} checks passed; results in {}",
        report.passed,
        report.rows,
        cfg.common.out.display()
    ));
    Ok(if report.all_pass { EXIT_OK } else { EXIT_FAIL })
}
