use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use toric_bott::bott::{evaluate_components, EvalOptions};
use toric_bott::equivariant_k::ext1_table;
use toric_bott::fixed_loci::{
    assemble_components_with, EnumerationOptions, FixedComponent, Orientation,
};
use toric_bott::serial::{
    component_json, contribution_json, read_components, virtual_table_json, write_components,
};
use toric_bott::verify::{verify, Status, VerifyOptions};
use toric_bott::{Error, Gamma};

/// Exact torus-localization calculator for the correlation constants a_k.
#[derive(Parser)]
#[command(name = "toric-bott", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a_k by summing fixed-component residues.
    Compute {
        #[command(flatten)]
        run: RunArgs,
        /// Print one JSON line per component residue.
        #[arg(long)]
        dump_contributions: bool,
    },
    /// List every fixed component.
    Enumerate {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the structural checks.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the Ext¹ table of every component as JSON lines.
    DumpExt {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    k: Option<i64>,
    /// One-parameter subgroup as G1,G2; default is the first generic (1,q).
    #[arg(long, value_parser = parse_gamma, allow_hyphen_values = true)]
    gamma: Option<Gamma>,
    /// Threshold seed S1,S2 placed before normalization.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,0")]
    seed: (i64, i64),
    /// Negate the weights of V and Λ²V.
    #[arg(long)]
    reflect: bool,
    /// Worker threads; overrides RAYON_NUM_THREADS.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long, value_enum, default_value_t = Emit::Table)]
    emit: Emit,
    /// Directory holding enumerated components, keyed by k, seed and orientation.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Read components from an enumerate --emit json file instead of enumerating.
    #[arg(long, conflicts_with = "cache")]
    from_cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Table,
    Json,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or("expected two integers separated by a comma")?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn parse_gamma(s: &str) -> Result<Gamma, String> {
    let (a, b) = parse_pair(s)?;
    Gamma::new(a, b).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_precondition() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn precondition(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl RunArgs {
    fn orientation(&self) -> Orientation {
        Orientation::from_reflect_flag(self.reflect)
    }

    fn enumeration(&self) -> EnumerationOptions {
        EnumerationOptions { seed: self.seed }
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            gamma: self.gamma,
            orientation: self.orientation(),
            enumeration: self.enumeration(),
        }
    }

    fn cache_file(&self, dir: &Path, k: i64) -> PathBuf {
        let orient = if self.reflect {
            "reflected"
        } else {
            "standard"
        };
        dir.join(format!(
            "k{k}_seed{}_{}_{orient}.jsonl",
            self.seed.0, self.seed.1
        ))
    }

    /// `k` and its components, from a cache file, the cache directory, or a fresh enumeration.
    fn components(&self) -> Result<(i64, Vec<FixedComponent>), Failure> {
        if let Some(path) = &self.from_cache {
            let comps = read_components(BufReader::new(File::open(path)?))?;
            let k = match (comps.first(), self.k) {
                (Some(c), Some(k)) if c.k() != k => {
                    return Err(precondition(format!(
                        "{} holds k = {}, not {k}",
                        path.display(),
                        c.k()
                    )))
                }
                (Some(c), _) => c.k(),
                (None, Some(k)) => k,
                (None, None) => {
                    return Err(precondition(format!(
                        "{} holds no components",
                        path.display()
                    )))
                }
            };
            if comps.iter().any(|c| c.k() != k) {
                return Err(precondition(format!(
                    "{} mixes several values of k",
                    path.display()
                )));
            }
            return Ok((k, comps));
        }
        let k = self
            .k
            .ok_or_else(|| precondition("--k is required unless --from-cache is given"))?;
        if k < 1 {
            return Err(Error::Precondition(format!("k must be at least 1, got {k}")).into());
        }
        if let Some(dir) = &self.cache {
            let file = self.cache_file(dir, k);
            if file.exists() {
                return Ok((k, read_components(BufReader::new(File::open(&file)?))?));
            }
            let comps = assemble_components_with(k, self.enumeration())?;
            std::fs::create_dir_all(dir)?;
            let mut w = BufWriter::new(File::create(&file)?);
            write_components(&mut w, &comps)?;
            w.flush()?;
            return Ok((k, comps));
        }
        Ok((k, assemble_components_with(k, self.enumeration())?))
    }
}

#[derive(Serialize)]
struct ComputeRecord {
    k: i64,
    a_k: String,
    components: usize,
    gamma: Gamma,
}

fn compute(run: &RunArgs, dump: bool, out: &mut impl Write) -> Result<(), Failure> {
    let (k, comps) = run.components()?;
    let eval = evaluate_components(k, &comps, &run.eval_options())?;
    if let Some(w) = &eval.warning {
        eprintln!("warning: {w}");
    }
    if dump {
        for c in &eval.contributions {
            writeln!(out, "{}", contribution_json(c.id, &c.value))?;
        }
    }
    match run.emit {
        Emit::Table => writeln!(out, "a_{k} = {}", eval.value)?,
        Emit::Json => {
            let record = ComputeRecord {
                k,
                a_k: eval.value.to_string(),
                components: eval.components,
                gamma: eval.gamma,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string(&record).expect("record serializes")
            )?
        }
    }
    Ok(())
}

fn enumerate(run: &RunArgs, out: &mut impl Write) -> Result<(), Failure> {
    let (_, comps) = run.components()?;
    match run.emit {
        Emit::Json => write_components(&mut *out, &comps)?,
        Emit::Table => {
            for (id, c) in comps.iter().enumerate() {
                writeln!(out, "{id}\t{c}")?;
            }
            let euler: u64 = comps.iter().map(|c| 1u64 << c.n_factors()).sum();
            writeln!(out, "components: {}, sum of 2^N: {euler}", comps.len())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    name: &'a str,
    status: &'static str,
    detail: &'a str,
}

fn run_verify(run: &RunArgs, out: &mut impl Write) -> Result<(), Failure> {
    if run.from_cache.is_some() || run.cache.is_some() {
        return Err(precondition(
            "verify always enumerates; drop --cache/--from-cache",
        ));
    }
    let k = run.k.ok_or_else(|| precondition("--k is required"))?;
    let mut opts = VerifyOptions::for_k(k);
    opts.enumeration = run.enumeration();
    opts.orientation = run.orientation();
    let report = verify(k, &opts)?;
    match run.emit {
        Emit::Table => write!(out, "{report}")?,
        Emit::Json => {
            for c in &report.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Info => "info",
                };
                let rec = CheckRecord {
                    name: &c.name,
                    status,
                    detail: &c.detail,
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&rec).expect("record serializes")
                )?;
            }
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: 3,
            message: "verification failed".into(),
        })
    }
}

fn dump_ext(run: &RunArgs, out: &mut impl Write) -> Result<(), Failure> {
    let (_, comps) = run.components()?;
    for (id, c) in comps.iter().enumerate() {
        let ext = ext1_table(c, run.orientation())?;
        let component: serde_json::Value =
            serde_json::from_str(&component_json(c)).expect("component JSON is valid");
        let line =
            serde_json::json!({"id": id, "component": component, "ext": virtual_table_json(&ext)});
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (Command::Compute { run, .. }
    | Command::Enumerate { run }
    | Command::Verify { run }
    | Command::DumpExt { run }) = &cli.command;
    if let Some(jobs) = run.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .map_err(|e| precondition(e.to_string()))?;
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match &cli.command {
        Command::Compute {
            run,
            dump_contributions,
        } => compute(run, *dump_contributions, &mut out),
        Command::Enumerate { run } => enumerate(run, &mut out),
        Command::Verify { run } => run_verify(run, &mut out),
        Command::DumpExt { run } => dump_ext(run, &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
