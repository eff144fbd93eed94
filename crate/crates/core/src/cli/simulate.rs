use clap::Args;
use serde::Serialize;

use super::config::ConfigFile;
use super::{io_failure, write_json, Common, Failure, EXIT_OK, VERSION};
use crate::simulate::{aggregate, run_trials, Aggregate, Hypotheses, Procedure, ReflectionCharge, SimParams};

#[derive(Debug, Args)]
pub(crate) struct SimulateArgs {
    /// coupon, collision, overlap, qcount, subset, sample-count or bootstrap
    procedure: Option<String>,
    /// Universe size [default: 1024]
    #[arg(long = "n", value_name = "N")]
    n: Option<usize>,
    /// Smaller hypothesis size
    #[arg(long = "k", value_name = "N")]
    k: Option<usize>,
    /// Relative gap; (1+ε)k must be an integer
    #[arg(long = "eps", value_name = "REAL")]
    eps: Option<f64>,
    /// Number of trials
    #[arg(long, value_name = "N")]
    trials: Option<u64>,
    /// Sample budget, sample count or copy count for the classical tests
    #[arg(long, value_name = "N")]
    budget: Option<usize>,
    /// Known-subset size for `subset` [default: max(1, k/4)]
    #[arg(long = "ell", value_name = "N")]
    ell: Option<usize>,
    /// Oracle charged for reflections in qcount/subset: reflection or membership
    #[arg(long, value_name = "ORACLE")]
    charge: Option<String>,
    /// Majority vote over this many runs per trial [default: 1]
    #[arg(long, value_name = "N")]
    repeats: Option<usize>,
    /// Retries per amplification stage for `bootstrap` [default: 3]
    #[arg(long, value_name = "N")]
    retries: Option<usize>,
}

#[derive(Debug, Serialize)]
struct TrialRow {
    index: u64,
    hidden_size: usize,
    decision: &'static str,
    correct: bool,
    aborted: bool,
    in_regime: bool,
    copies: u64,
    state_generation: u64,
    reflections: u64,
    membership: u64,
}

#[derive(Debug, Serialize)]
struct EffectiveParams {
    procedure: Procedure,
    n: usize,
    k: usize,
    k_prime: usize,
    eps: f64,
    trials: u64,
    seed: u64,
    budget: Option<usize>,
    ell: Option<usize>,
    charge: ReflectionCharge,
    repeats: usize,
    retries: usize,
    jobs: Option<usize>,
}

#[derive(Debug, Serialize)]
struct SimulateReport<'a> {
    version: &'static str,
    command: &'static str,
    config: EffectiveParams,
    aggregate: &'a Aggregate,
}

fn parse_charge(s: &str) -> Result<ReflectionCharge, Failure> {
    match s {
        "reflection" => Ok(ReflectionCharge::Reflection),
        "membership" => Ok(ReflectionCharge::Membership),
        _ => Err(Failure::usage(format!("unknown charge `{s}` (reflection or membership)"))),
    }
}

pub(crate) fn cmd_simulate(args: &SimulateArgs, common: &Common, mut file: ConfigFile) -> Result<i32, Failure> {
    fn pick<T: std::str::FromStr>(flag: Option<T>, file: &mut ConfigFile, key: &str) -> Result<Option<T>, Failure> {
        match flag {
            Some(v) => {
                file.take_list(key);
                Ok(Some(v))
            }
            None => file.take_parsed(key),
        }
    }
    let procedure_name = pick(args.procedure.clone(), &mut file, "procedure")?
        .ok_or_else(|| Failure::usage("simulate needs a procedure"))?;
    let procedure =
        Procedure::parse(&procedure_name).ok_or_else(|| Failure::usage(format!("unknown procedure `{procedure_name}`")))?;
    let n = pick(args.n, &mut file, "n")?.unwrap_or(1024);
    let k = pick(args.k, &mut file, "k")?.ok_or_else(|| Failure::usage("simulate needs --k"))?;
    let eps = pick(args.eps, &mut file, "eps")?.ok_or_else(|| Failure::usage("simulate needs --eps"))?;
    let trials = pick(args.trials, &mut file, "trials")?.ok_or_else(|| Failure::usage("simulate needs --trials"))?;
    let budget = pick(args.budget, &mut file, "budget")?;
    let ell = pick(args.ell, &mut file, "ell")?;
    let charge = pick(args.charge.clone(), &mut file, "charge")?
        .map(|s| parse_charge(&s))
        .transpose()?
        .unwrap_or(ReflectionCharge::Reflection);
    let repeats = pick(args.repeats, &mut file, "repeats")?.unwrap_or(1);
    let retries = pick(args.retries, &mut file, "retries")?.unwrap_or(crate::simulate::DEFAULT_STAGE_RETRIES);
    file.finish()?;
    if trials == 0 {
        return Err(Failure::usage("trials must be at least 1"));
    }
    let hyp = Hypotheses::new(k, eps)?;
    let params = SimParams {
        n,
        k,
        eps,
        budget,
        ell,
        charge,
        repeats,
        retries,
    };

    let pool = common.pool()?;
    let records = pool.install(|| run_trials(procedure, &params, trials, common.seed))?;
    let agg = aggregate(&records, k);

    common.create_out_dir()?;
    let csv_path = common.out.join("trials.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| io_failure(&format!("cannot write {}", csv_path.display()), e))?;
    for r in &records {
        let o = &r.outcome;
        w.serialize(TrialRow {
            index: r.index,
            hidden_size: r.hidden_size,
            decision: o.decision.as_str(),
            correct: o.correct,
            aborted: o.aborted,
            in_regime: o.in_regime,
            copies: o.tally.copies,
            state_generation: o.tally.state_generation,
            reflections: o.tally.reflections,
            membership: o.tally.membership,
        })
        .map_err(|e| io_failure("cannot write CSV row", e))?;
    }
    w.flush().map_err(|e| io_failure("cannot flush CSV", e))?;

    let report = SimulateReport {
        version: VERSION,
        command: "simulate",
        config: EffectiveParams {
            procedure,
            n,
            k,
            k_prime: hyp.k_prime,
            eps,
            trials,
            seed: common.seed,
            budget: params.effective_budget(procedure),
            ell: (procedure == Procedure::Subset).then(|| params.effective_ell()),
            charge,
            repeats,
            retries,
            jobs: common.jobs,
        },
        aggregate: &agg,
    };
    write_json(&common.out.join("aggregate.json"), &report)?;
    super::emit(format!(
        "{}: success rate {:.4} ± {:.4} over {} trials; results in {}",
        procedure.as_str(),
        agg.success_rate,
        agg.std_error,
        agg.trials,
        common.out.display()
    ));
    Ok(EXIT_OK)
}
