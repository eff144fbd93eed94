use clap::Args;

use super::config::ConfigFile;
use super::{io_failure, Common, Failure, EXIT_OK};
use crate::adversary::theorem_tradeoff;

#[derive(Debug, Args)]
pub(crate) struct BoundsArgs {
    /// Universe size (reals such as 1e6 are accepted)
    #[arg(long = "n", value_name = "REAL")]
    n: Option<f64>,
    /// Smaller hypothesis size
    #[arg(long = "k", value_name = "REAL")]
    k: Option<f64>,
    /// Relative gap, k' = (1+ε)k
    #[arg(long = "eps", value_name = "REAL")]
    eps: Option<f64>,
    /// Copies ℓ of the input state held up front [default: 0]
    #[arg(long = "ell", value_name = "REAL")]
    ell: Option<f64>,
    /// Second copy parameter ℓ′, entering the reflection branch and t [default: 0]
    #[arg(long = "ell-prime", value_name = "REAL")]
    ell_prime: Option<f64>,
}

pub(crate) fn cmd_bounds(args: &BoundsArgs, common: &Common, mut file: ConfigFile) -> Result<i32, Failure> {
    let mut get = |flag: Option<f64>, key: &str| -> Result<Option<f64>, Failure> {
        Ok(match flag {
            Some(v) => {
                file.take_list(key);
                Some(v)
            }
            None => file.take_parsed(key)?,
        })
    };
    let n = get(args.n, "n")?;
    let k = get(args.k, "k")?;
    let eps = get(args.eps, "eps")?;
    let ell = get(args.ell, "ell")?.unwrap_or(0.0);
    let ell_prime = get(args.ell_prime, "ell-prime")?.unwrap_or(0.0);
    file.finish()?;
    let (Some(n), Some(k), Some(eps)) = (n, k, eps) else {
        return Err(Failure::usage("bounds needs --n, --k and --eps"));
    };
    let report = theorem_tradeoff(n, k, eps, ell, ell_prime, common.cprime, common.feasibility_threshold)?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| io_failure("cannot encode JSON", e))?;
    super::emit(text);
    Ok(EXIT_OK)
}
