//! Success-rate sweeps over random hypergraphs.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use rp2hunt_core::builder::{find_rp2, SearchConfig, SearchError};
use rp2hunt_core::generators::random_hypergraph;
use rp2hunt_core::rng::derive_seed;

use crate::error::CliError;

pub const CSV_HEADER: &str = "n,m,trials,successes,mean_time_ms,seed";

const TAG_GRAPH: u64 = 0x6772;
const TAG_SEARCH: u64 = 0x7372;

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub ns: Vec<usize>,
    pub coeffs: Vec<f64>,
    pub exponent: f64,
    pub trials: usize,
    pub seed: u64,
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("invalid {what} `{t}`"))))
        .collect()
}

impl Sweep {
    pub fn parse(ns: &str, coeffs: &str, exponent: f64, trials: usize, seed: u64) -> Result<Self, CliError> {
        let ns: Vec<usize> = list(ns, "vertex count")?;
        let coeffs: Vec<f64> = list(coeffs, "coefficient")?;
        if ns.iter().any(|&n| n < 3) || coeffs.iter().any(|&c| !(c.is_finite() && c > 0.0)) || !exponent.is_finite() {
            return Err(CliError::Usage("vertex counts must be >= 3 and coefficients positive".into()));
        }
        Ok(Sweep { ns, coeffs, exponent, trials, seed })
    }
}

/// `ceil(coeff * n^exponent)`, capped at the number of triples.
pub fn edge_count(n: usize, coeff: f64, exponent: f64) -> usize {
    let max = n * (n - 1) * (n - 2) / 6;
    ((coeff * (n as f64).powf(exponent)).ceil() as usize).min(max)
}

/// Runs every `(n, coeff)` cell and returns the CSV text. With zero trials no cells run.
pub fn run_sweep(sweep: &Sweep, base: &SearchConfig) -> Result<String, CliError> {
    let mut csv = format!("{CSV_HEADER}\n");
    if sweep.trials == 0 {
        return Ok(csv);
    }
    for (cell, (&n, &coeff)) in sweep
        .ns
        .iter()
        .flat_map(|n| sweep.coeffs.iter().map(move |c| (n, c)))
        .enumerate()
    {
        let m = edge_count(n, coeff, sweep.exponent);
        let runs = (0..sweep.trials)
            .into_par_iter()
            .map(|t| {
                let index = (cell as u64) << 32 | t as u64;
                let h = random_hypergraph(n, m, derive_seed(sweep.seed, TAG_GRAPH, index))?;
                let config = base.clone().with_seed(derive_seed(sweep.seed, TAG_SEARCH, index));
                let start = Instant::now();
                let found = match find_rp2(&h, &config) {
                    Ok(_) => true,
                    Err(SearchError::NotFound(_)) => false,
                    Err(SearchError::Build(e)) => return Err(CliError::from(e)),
                };
                Ok((found, start.elapsed().as_secs_f64() * 1e3))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let successes = runs.iter().filter(|r| r.0).count();
        let mean = runs.iter().map(|r| r.1).sum::<f64>() / runs.len() as f64;
        let _ = writeln!(csv, "{n},{m},{},{successes},{mean:.3},{}", sweep.trials, sweep.seed);
        eprintln!("n={n} m={m}: {successes}/{} ({mean:.1} ms mean)", sweep.trials);
    }
    Ok(csv)
}
