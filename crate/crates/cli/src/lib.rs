//! Command-line front end: configuration, command dispatch and JSON reports.

pub mod commands;
pub mod config;
pub mod report;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use config::{BackendConfig, ExperimentConfig};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "opgraph", version, about = "Adjacency graphs on conjugacy classes of self-adjoint operators")]
pub struct Cli {
    /// JSON experiment config; flags given on the command line override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `gf` (finite field GF(q²)) or `qi` (Gaussian rationals).
    #[arg(long, global = true)]
    pub backend: Option<String>,
    /// Characteristic of the finite backend.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// The fixed field is GF(p^exponent).
    #[arg(long, global = true)]
    pub exponent: Option<u32>,
    /// Order of the fixed field, as an alternative to `--p`/`--exponent`.
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Comma-separated eigenvalues, parsed by the backend.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigma: Option<Vec<String>>,
    /// Comma-separated eigenspace dimensions.
    #[arg(long, global = true, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write a Graphviz rendering here, for commands that build a graph.
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
    /// Worker threads; defaults to `OPGRAPH_THREADS` or the core count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count (and optionally list) every flag of a class over a finite backend.
    Enumerate {
        #[arg(long)]
        dump: bool,
    },
    /// Evaluate both adjacency notions on a pair of flags read from JSON.
    Adjacency {
        #[arg(long)]
        pair_file: PathBuf,
    },
    /// Components of typed subgraphs against fibers and eigenspace blocks.
    Components {
        /// `ij`, `ibar` or `global`.
        #[arg(long = "type")]
        kind: Option<String>,
        /// Two 1-based positions for `ij`.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
        /// A 1-based position for `ibar`.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Automorphism group of a class graph or a named fixture graph.
    Automorphisms {
        /// petersen, cube, prism, k4, c5, complete, cycle, path, star or johnson.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Also build the subgroup induced by isometries, field
        /// automorphisms and slot permutations.
        #[arg(long)]
        compare_induced: bool,
        #[arg(long)]
        generators_out: Option<PathBuf>,
    },
    /// Check one of the structural statements on a class.
    VerifyLemma {
        /// a1a2-equiv, lift, swap, obstruction or johnson-tau.
        lemma: String,
        /// 1-based positions: i,j,t for obstruction; i,j,i',j' for swap.
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
        /// Contraction pair for lift.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
        /// Random samples for a1a2-equiv over an infinite backend.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Search for a pair with (A1) but not (A2) and certify it.
    Counterexample {
        /// Maximum number of random attempts.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        seconds: Option<f64>,
        #[arg(long)]
        height: Option<u32>,
        #[arg(long)]
        certificate_out: Option<PathBuf>,
    },
    /// Run the command stored in a config file.
    Run { file: PathBuf },
}

fn prime_power(q: u32) -> Result<(u32, u32)> {
    let p = (2..=q).find(|p| q % p == 0).context("q must be at least 2")?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        bail!("{q} is not a prime power");
    }
    Ok((p, e))
}

impl Cli {
    /// The effective config: file (if any), then command-line overrides.
    pub fn experiment(&self) -> Result<(ExperimentConfig, Outputs)> {
        let file = match &self.command {
            Command::Run { file } => Some(file.as_path()),
            _ => self.config.as_deref(),
        };
        let mut cfg = match file {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let (mut p, mut exponent) = match &cfg.backend {
            BackendConfig::Gf { p, exponent, .. } => (*p, *exponent),
            BackendConfig::Qi => (3, 1),
        };
        if let Some(q) = self.q {
            (p, exponent) = prime_power(q)?;
        }
        p = self.p.unwrap_or(p);
        exponent = self.exponent.unwrap_or(exponent);
        let field_flags = self.p.is_some() || self.exponent.is_some() || self.q.is_some();
        match self.backend.as_deref() {
            Some("qi") => cfg.backend = BackendConfig::Qi,
            Some("gf") => cfg.backend = BackendConfig::Gf { p, exponent, modulus: None },
            Some(other) => bail!("unknown backend {other:?}; expected gf or qi"),
            None if field_flags => cfg.backend = BackendConfig::Gf { p, exponent, modulus: None },
            None => {}
        }
        if let Some(s) = &self.sigma {
            cfg.signature.sigma = s.clone();
        }
        if let Some(d) = &self.dims {
            cfg.signature.dims = d.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        let mut outputs = Outputs { out: self.out.clone(), dot: self.dot.clone(), ..Default::default() };
        let o = &mut cfg.options;
        let command = match &self.command {
            Command::Enumerate { dump } => {
                o.dump |= dump;
                "enumerate"
            }
            Command::Adjacency { pair_file } => {
                o.pair_file = Some(pair_file.display().to_string());
                cfg.base_dir = None;
                "adjacency"
            }
            Command::Components { kind, pair, index } => {
                o.component_type = kind.clone().or(o.component_type.take());
                o.pair = pair.clone().or(o.pair.take());
                o.index = index.or(o.index);
                "components"
            }
            Command::Automorphisms { fixture, n, compare_induced, generators_out } => {
                o.fixture = fixture.clone().or(o.fixture.take());
                o.n = n.or(o.n);
                o.compare_induced |= compare_induced;
                outputs.generators = generators_out.clone();
                "automorphisms"
            }
            Command::VerifyLemma { lemma, indices, pair, samples } => {
                o.lemma = Some(lemma.clone());
                o.indices = indices.clone().or(o.indices.take());
                o.pair = pair.clone().or(o.pair.take());
                o.samples = samples.or(o.samples);
                "verify-lemma"
            }
            Command::Counterexample { budget, seconds, height, certificate_out } => {
                cfg.budget.max_attempts = budget.unwrap_or(cfg.budget.max_attempts);
                cfg.budget.max_seconds = seconds.unwrap_or(cfg.budget.max_seconds);
                cfg.budget.height = height.unwrap_or(cfg.budget.height);
                outputs.certificate = certificate_out.clone();
                "counterexample"
            }
            Command::Run { .. } => {
                let command = cfg.command.clone().context("the config does not name a command")?;
                cfg.command = Some(command);
                return Ok((cfg, outputs));
            }
        };
        cfg.command = Some(command.into());
        Ok((cfg, outputs))
    }
}

/// Where to write the report and its side artifacts.
#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub out: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub generators: Option<PathBuf>,
    pub certificate: Option<PathBuf>,
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

impl Outputs {
    pub fn write(&self, report: &Report) -> Result<String> {
        let text = serde_json::to_string_pretty(&report.to_json())?;
        if let Some(p) = &self.out {
            write(p, &text)?;
        }
        if let (Some(p), Some(dot)) = (&self.dot, &report.dot) {
            write(p, dot)?;
        }
        for (key, path) in [("generators", &self.generators), ("certificate", &self.certificate)] {
            if let (Some(p), Some(v)) = (path, report.attachments.get(key)) {
                write(p, &serde_json::to_string_pretty(v)?)?;
            }
        }
        Ok(text)
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("OPGRAPH_THREADS") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("OPGRAPH_THREADS={v:?}"))?)),
        Err(_) => Ok(None),
    }
}

/// Parse arguments, run, print the report. Returns the exit code: 0 when
/// every check passed, 2 when a check failed, 1 on usage or runtime errors.
pub fn main_with_args<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    if let Some(n) = thread_count(cli.threads)? {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (cfg, outputs) = cli.experiment()?;
    let report = commands::execute(&cfg)?;
    println!("{}", outputs.write(&report)?);
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {}", c.name);
    }
    Ok(report.exit_code())
}
