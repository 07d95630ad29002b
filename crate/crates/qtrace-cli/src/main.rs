//! Command-line front end: run the analysis pipeline, the invariant suite,
//! or the anti-symmetric normal form on a matrix file.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qtrace_core::lattice::{antisym_normal_form, IntMat};
use qtrace_core::report::{analyze, AnalyzeOptions};
use qtrace_core::surface::{builtin, SurfaceSpec};
use qtrace_core::verify::{run_suite, SuiteOptions};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "qtrace",
    about = "Exact quantum-trace matrices, centers and PI-degrees of triangulated surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: classify, build matrices, centers, rank, normal form
    Analyze(AnalyzeArgs),
    /// Run the invariant suite; exit code 0 iff everything passes
    Verify(VerifyArgs),
    /// Anti-symmetric normal form of a matrix given as a JSON array
    NormalForm(NormalFormArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Surface spec file, or a builtin name (T3, S4, P5, A11)
    #[arg(long)]
    surface: String,
    /// Subdivision parameter (n >= 2)
    #[arg(long, default_value_t = 2)]
    n: u64,
    /// Order m'' of the square of the quantum parameter
    #[arg(long, default_value_t = 3)]
    order: u64,
    /// Use the boundary-fan triangulation and reduced matrices
    #[arg(long)]
    reduced: bool,
    /// Write the full JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Grid sweep, e.g. "n=2,3;order=3,5,9,15" (overrides --n/--order)
    #[arg(long)]
    grid: Option<String>,
    /// Seed recorded in reports and used by randomized property tests
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    surface: String,
    /// n values to check
    #[arg(long, value_delimiter = ',', default_value = "2")]
    n: Vec<u64>,
    /// Root orders m'' to check
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "3,5")]
    orders: Vec<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct NormalFormArgs {
    /// JSON file holding an anti-symmetric integer matrix as rows
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn load_surface(arg: &str) -> Result<SurfaceSpec> {
    if let Some(spec) = builtin(arg) {
        return Ok(spec);
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    Ok(SurfaceSpec::from_json(&text)?)
}

fn max_dim_from_env() -> usize {
    std::env::var("QTRACE_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(2000)
}

fn parse_grid(grid: &str) -> Result<(Vec<u64>, Vec<u64>)> {
    let mut ns = Vec::new();
    let mut orders = Vec::new();
    for part in grid.split(';') {
        let (key, vals) = part
            .split_once('=')
            .with_context(|| format!("grid part `{part}` is not key=v1,v2"))?;
        let parsed: Vec<u64> = vals
            .split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .with_context(|| format!("grid value `{v}`"))
            })
            .collect::<Result<_>>()?;
        match key.trim() {
            "n" => ns = parsed,
            "order" => orders = parsed,
            other => bail!("unknown grid key `{other}`"),
        }
    }
    if ns.is_empty() || orders.is_empty() {
        bail!("grid must set both n and order");
    }
    Ok((ns, orders))
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let spec = load_surface(&args.surface)?;
    let max_dim = max_dim_from_env();
    let cells: Vec<(u64, u64)> = match &args.grid {
        Some(grid) => {
            let (ns, orders) = parse_grid(grid)?;
            ns.iter()
                .flat_map(|&n| orders.iter().map(move |&o| (n, o)))
                .collect()
        }
        None => vec![(args.n, args.order)],
    };
    let reports: Vec<_> = cells
        .par_iter()
        .map(|&(n, order)| {
            let opts = AnalyzeOptions {
                n,
                order,
                reduced: args.reduced,
                max_dim,
                seed: args.seed,
            };
            analyze(&spec, &opts)
        })
        .collect::<std::result::Result<_, _>>()?;
    for rep in &reports {
        println!("{}", rep.summary());
    }
    if let Some(path) = &args.json {
        let body = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            serde_json::to_string_pretty(
                &reports
                    .iter()
                    .map(|r| serde_json::from_str::<serde_json::Value>(&r.to_json()))
                    .collect::<std::result::Result<Vec<_>, _>>()?,
            )?
        };
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    if reports.iter().any(|r| !r.all_checks_pass) {
        bail!("some checks failed");
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let spec = load_surface(&args.surface)?;
    let opts = SuiteOptions {
        n_values: args.n.clone(),
        orders: args.orders.clone(),
        seed: args.seed,
        max_dim: max_dim_from_env(),
    };
    let rep = run_suite(&spec, &opts)?;
    let mut pass = 0;
    let mut fail = 0;
    let mut skip = 0;
    for chk in &rep.checks {
        match chk.status {
            qtrace_core::verify::CheckStatus::Pass => pass += 1,
            qtrace_core::verify::CheckStatus::Fail => {
                fail += 1;
                println!(
                    "FAIL {} (n={:?}, order={:?}) {}",
                    chk.id, chk.n, chk.order, chk.detail
                );
            }
            qtrace_core::verify::CheckStatus::Skipped => {
                skip += 1;
                println!(
                    "skip {} (n={:?}, order={:?}): {}",
                    chk.id, chk.n, chk.order, chk.detail
                );
            }
        }
    }
    println!(
        "{}: {pass} passed, {fail} failed, {skip} skipped",
        rep.surface
    );
    if let Some(path) = &args.json {
        std::fs::write(path, rep.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if fail > 0 {
        bail!("{fail} checks failed");
    }
    Ok(())
}

fn cmd_normal_form(args: &NormalFormArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.matrix)
        .with_context(|| format!("reading {}", args.matrix.display()))?;
    let rows: Vec<Vec<i64>> = serde_json::from_str(&text).context("matrix JSON")?;
    let rows128: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let m = IntMat::from_rows(&rows128);
    let nf = antisym_normal_form(&m)?;
    let verified = nf.verify(&m);
    println!(
        "invariants h = {:?} (odd parts {:?}), zero rows = {}, verified: {verified}",
        nf.invariants,
        nf.invariants
            .iter()
            .map(|&h| qtrace_core::lattice::odd_part(h))
            .collect::<Vec<_>>(),
        nf.zero_rows
    );
    if let Some(path) = &args.json {
        let body = serde_json::json!({
            "schema": 1,
            "invariants": nf.invariants.iter().map(|&x| x as i64).collect::<Vec<i64>>(),
            "odd_parts": nf.invariants.iter()
                .map(|&h| qtrace_core::lattice::odd_part(h) as i64).collect::<Vec<i64>>(),
            "zero_rows": nf.zero_rows,
            "x": nf.x.to_json_rows(),
            "block": nf.block.to_json_rows(),
            "verified": verified,
        });
        std::fs::write(path, serde_json::to_string_pretty(&body)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if !verified {
        bail!("normal form failed verification");
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Verify(args) => cmd_verify(args),
        Command::NormalForm(args) => cmd_normal_form(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
