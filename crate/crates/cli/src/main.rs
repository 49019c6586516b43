mod config;
mod error;
mod experiment;
mod record;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use rp2hunt_core::admissibility::{admissible_mc, estimate_admissibility, AdmissibilityParams, EstimateMode};
use rp2hunt_core::builder::{find_rp2, find_sphere, verify_certificate, SearchConfig, SearchError};
use rp2hunt_core::generators::{fixture, random_hypergraph};
use rp2hunt_core::hypergraph::{Graph, Hypergraph3, Vertex};
use rp2hunt_core::io::{parse_graph, parse_hypergraph, serialize_hypergraph};
use rp2hunt_core::surface::{classify, Complex2};

use crate::config::parse_config;
use crate::error::CliError;
use crate::record::{sha256_hex, Outcome, RunRecord};

#[derive(Parser, Debug)]
#[command(name = "rp2hunt", version, about = "Find triangulated projective planes in 3-uniform hypergraphs")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the complex formed by all hyperedges of a file.
    Classify { file: PathBuf },
    /// Search for a projective plane and print its certificate.
    FindRp2 {
        file: PathBuf,
        /// Flat `key = value` config file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Start from the strict constants.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        retry_budget: Option<usize>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Append a run record to this file (CSV if it ends in `.csv`, JSON lines otherwise).
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Search for a double-pyramid sphere.
    FindSphere {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of vertex pairs to try.
        #[arg(long, default_value_t = usize::MAX)]
        budget: usize,
    },
    /// Probability that k disjoint paths survive random vertex sampling.
    Admissibility {
        /// Graph file, or a hypergraph file together with --link.
        file: PathBuf,
        /// Endpoints as `x,y`.
        #[arg(long)]
        edge: String,
        /// Use the link of `u` (or the common link of `u,u2`) of a hypergraph file.
        #[arg(long)]
        link: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        exact_limit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a named fixture, or `random` with --n and --m, as a hypergraph file.
    Gen {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep random hypergraphs with m = coeff * n^exponent edges and count successes.
    Experiment {
        /// Comma-separated vertex counts, e.g. `12,16,20`.
        #[arg(long, default_value = "12,16,20")]
        n_range: String,
        #[arg(long, default_value_t = 2.5)]
        density_exponent: f64,
        /// Comma-separated coefficients.
        #[arg(long, default_value = "1")]
        coeff: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        retry_budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Auto,
    Exact,
    Mc,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_hypergraph(path: &Path) -> Result<(Hypergraph3, String), CliError> {
    let text = read(path)?;
    let h = parse_hypergraph(&text).map_err(|source| CliError::Parse {
        origin: path.display().to_string(),
        source,
    })?;
    Ok((h, sha256_hex(text.as_bytes())))
}

fn vertex_list(s: &str, what: &str) -> Result<Vec<Vertex>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<Vertex>().map_err(|_| CliError::Usage(format!("invalid {what} `{s}`"))))
        .collect()
}

fn print_json(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn cmd_classify(file: &Path) -> Result<ExitCode, CliError> {
    let (h, _) = load_hypergraph(file)?;
    let report = classify(&Complex2::from_hypergraph(&h));
    print_json(&report.to_json());
    eprintln!("{}: {}", file.display(), report.verdict);
    Ok(ExitCode::SUCCESS)
}

/// Config from an optional file; `strict` selects the strict base under any file overrides.
fn search_config(path: Option<&Path>, strict: bool) -> Result<SearchConfig, CliError> {
    match path {
        Some(p) => parse_config(&read(p)?, &p.display().to_string(), strict),
        None => parse_config("", "", strict),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_find_rp2(
    file: &Path,
    config: Option<&Path>,
    seed: Option<u64>,
    strict: bool,
    retry_budget: Option<usize>,
    json: Option<&Path>,
    record: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let (h, digest) = load_hypergraph(file)?;
    let mut config = search_config(config, strict)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(b) = retry_budget {
        config.retry_budget = b;
    }
    let start = Instant::now();
    let result = find_rp2(&h, &config);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let (outcome, counters, code, failure) = match result {
        Ok(cert) => {
            let check = verify_certificate(&h, &cert);
            if check.ok {
                let text = cert.to_json();
                match json {
                    Some(p) => write(p, &(text + "\n"))?,
                    None => print_json(&text),
                }
                eprintln!(
                    "found RP2 with {} facets after {} attempts ({wall_time_ms:.1} ms)",
                    cert.facets.facet_count(),
                    cert.audit.counters.attempts
                );
                (Outcome::Ok, Some(cert.audit.counters), ExitCode::SUCCESS, None)
            } else {
                let e = CliError::Usage(format!("certificate failed verification: {:?}", check.failures));
                (Outcome::Error, Some(cert.audit.counters), ExitCode::from(2), Some(e))
            }
        }
        Err(SearchError::NotFound(nf)) => {
            print_json(&serde_json::to_string_pretty(&nf).expect("serializes"));
            eprintln!("not found at stage {:?}: {}", nf.stage, nf.detail);
            (Outcome::NotFound, Some(nf.counters), ExitCode::from(1), None)
        }
        Err(SearchError::Build(e)) => (Outcome::Error, None, ExitCode::from(2), Some(e.into())),
    };
    if let Some(p) = record {
        let rec = RunRecord {
            command: "find-rp2".into(),
            input_digest: digest,
            config: Some(config),
            outcome,
            wall_time_ms,
            counters,
        };
        append_record(p, &rec)?;
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(code),
    }
}

/// Appends a record: a CSV row (header first for a new file) when the path ends in `.csv`, a JSON line otherwise.
fn append_record(path: &Path, rec: &RunRecord) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let csv = path.extension().is_some_and(|e| e == "csv");
    let fresh = !path.exists();
    let mut f = fs::OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    let mut text = String::new();
    if csv && fresh {
        text.push_str(RunRecord::CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&if csv { rec.to_csv_row() } else { rec.to_json() });
    text.push('\n');
    f.write_all(text.as_bytes()).map_err(io)
}

fn cmd_find_sphere(file: &Path, seed: u64, budget: usize) -> Result<ExitCode, CliError> {
    let (h, _) = load_hypergraph(file)?;
    match find_sphere(&h, budget, seed) {
        Ok(cert) => {
            print_json(&serde_json::to_string_pretty(&cert).expect("serializes"));
            eprintln!("found sphere with {} facets over apexes {} {}", cert.facets.facet_count(), cert.u, cert.u1);
            Ok(ExitCode::SUCCESS)
        }
        Err(SearchError::NotFound(nf)) => {
            print_json(&serde_json::to_string_pretty(&nf).expect("serializes"));
            eprintln!("not found: {}", nf.detail);
            Ok(ExitCode::from(1))
        }
        Err(SearchError::Build(e)) => Err(e.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_admissibility(
    file: &Path,
    edge: &str,
    link: Option<&str>,
    params: AdmissibilityParams,
    mode: Mode,
    seed: u64,
) -> Result<ExitCode, CliError> {
    let text = read(file)?;
    let origin = file.display().to_string();
    let g: Graph = match link {
        None => parse_graph(&text).map_err(|source| CliError::Parse { origin, source })?,
        Some(apexes) => {
            let h = parse_hypergraph(&text).map_err(|source| CliError::Parse { origin, source })?;
            match vertex_list(apexes, "link")?.as_slice() {
                [u] => h.link_graph(*u)?,
                [u, u2] => h.pair_link(*u, *u2)?,
                _ => return Err(CliError::Usage("--link takes one or two vertices".into())),
            }
        }
    };
    let [x, y] = vertex_list(edge, "edge")?[..] else {
        return Err(CliError::Usage("--edge takes exactly two vertices".into()));
    };
    let est = match mode {
        Mode::Mc => admissible_mc(&g, x, y, &params, seed)?,
        Mode::Auto => estimate_admissibility(&g, x, y, &params, seed)?,
        Mode::Exact => {
            let est = estimate_admissibility(&g, x, y, &params, seed)?;
            if est.mode != EstimateMode::Exact {
                return Err(CliError::Usage(format!(
                    "too many relevant vertices for exact mode (limit {})",
                    params.exact_limit
                )));
            }
            est
        }
    };
    print_json(&serde_json::to_string_pretty(&est).expect("serializes"));
    eprintln!("p_hat = {:.6} ({:?})", est.p_hat, est.verdict);
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(name: &str, n: Option<usize>, m: Option<usize>, seed: u64, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let h = if name == "random" {
        let (Some(n), Some(m)) = (n, m) else {
            return Err(CliError::Usage("`gen random` needs --n and --m".into()));
        };
        random_hypergraph(n, m, seed)?
    } else {
        fixture(name)?.facets.to_hypergraph()
    };
    let text = serialize_hypergraph(&h);
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    eprintln!("{name}: {} vertices, {} hyperedges", h.n(), h.edge_count());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Classify { file } => cmd_classify(&file),
        Command::FindRp2 { file, config, seed, strict, retry_budget, json, record } => cmd_find_rp2(
            &file,
            config.as_deref(),
            seed,
            strict,
            retry_budget,
            json.as_deref(),
            record.as_deref(),
        ),
        Command::FindSphere { file, seed, budget } => cmd_find_sphere(&file, seed, budget),
        Command::Admissibility { file, edge, link, p, epsilon, k, mode, samples, exact_limit, seed } => {
            let params = AdmissibilityParams::new(p, epsilon, k, 1)?
                .with_mc_samples(samples)
                .with_exact_limit(exact_limit);
            cmd_admissibility(&file, &edge, link.as_deref(), params, mode, seed)
        }
        Command::Gen { name, n, m, seed, out } => cmd_gen(&name, n, m, seed, out.as_deref()),
        Command::Experiment { n_range, density_exponent, coeff, trials, seed, config, retry_budget, out } => {
            let mut base = search_config(config.as_deref(), false)?;
            if let Some(b) = retry_budget {
                base.retry_budget = b;
            }
            let sweep = experiment::Sweep::parse(&n_range, &coeff, density_exponent, trials, seed)?;
            let csv = experiment::run_sweep(&sweep, &base)?;
            match out {
                Some(p) => write(&p, &csv)?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = std::panic::catch_unwind(|| {
        let threads = cli.threads;
        let go = move || run(cli);
        match threads {
            Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(CliError::from)?.install(go),
            None => go(),
        }
    });
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
