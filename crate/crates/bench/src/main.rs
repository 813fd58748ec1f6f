use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use qlin_core::dataprep::PreprocessOrder;
use qlin_core::hhl::{SignMode, SpectrumEstimate};
use qlin_core::qsvm::Reduction;
use qlinbench::config::{parse_densities, parse_dims, parse_shots, DatasetName, ExperimentConfig, Suite};
use qlinbench::report::{emit_reports, Format, ALL_FORMATS};

#[derive(Parser)]
#[command(name = "qlinbench", version, about = "HHL and quantum-kernel SVM benchmarks")]
struct Cli {
    /// JSON experiment config; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: QLINBENCH_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HHL suites.
    Hhl(HhlArgs),
    /// Run the QSVM suites.
    Qsvm(QsvmArgs),
    /// Run the configured suites from the config file.
    All(CommonArgs),
    /// Check the built-in fixtures.
    Verify {
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output formats (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    formats: Vec<Format>,
}

#[derive(Args)]
struct HhlArgs {
    /// Matrix sizes, e.g. 2,4,8.
    #[arg(long, value_parser = parse_dims)]
    dims: Option<std::vec::Vec<usize>>,
    /// Densities as start:stop:step or a list.
    #[arg(long, value_parser = parse_densities)]
    densities: Option<std::vec::Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Clock qubits (the minimum when --max-clock is set).
    #[arg(long)]
    clock: Option<usize>,
    /// Upper bound for condition-driven clock sizing; 0 turns sizing off.
    #[arg(long)]
    max_clock: Option<usize>,
    /// unsigned, signed or twos-complement.
    #[arg(long)]
    mode: Option<SignMode>,
    #[arg(long, value_parser = parse_estimate)]
    estimate: Option<SpectrumEstimate>,
    #[arg(long)]
    shots: Option<u64>,
    /// Restrict to one or more HHL suites.
    #[arg(long, value_enum, value_delimiter = ',')]
    suite: Vec<Suite>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct QsvmArgs {
    #[arg(long, value_enum, value_delimiter = ',')]
    dataset: Vec<DatasetName>,
    /// Shot counts as a list or lo:hi (powers of two).
    #[arg(long, value_parser = parse_shots)]
    shots: Option<std::vec::Vec<u64>>,
    /// Replicates per dataset.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    gamma_inv: Option<f64>,
    #[arg(long, value_parser = parse_reduction)]
    reduction: Option<Reduction>,
    #[arg(long, value_parser = parse_preprocess)]
    preprocess: Option<PreprocessOrder>,
    #[arg(long, value_enum, value_delimiter = ',')]
    suite: Vec<Suite>,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

fn parse_estimate(s: &str) -> Result<SpectrumEstimate, String> {
    match s {
        "exact" => Ok(SpectrumEstimate::Exact),
        "gershgorin" => Ok(SpectrumEstimate::Gershgorin),
        _ => Err(format!("expected exact or gershgorin, got {s:?}")),
    }
}

fn parse_reduction(s: &str) -> Result<Reduction, String> {
    match s {
        "one-vs-rest" => Ok(Reduction::OneVsRest),
        "all-pairs" => Ok(Reduction::AllPairs),
        _ => Err(format!("expected one-vs-rest or all-pairs, got {s:?}")),
    }
}

fn parse_preprocess(s: &str) -> Result<PreprocessOrder, String> {
    match s {
        "standardize-then-pca" => Ok(PreprocessOrder::StandardizeThenPca),
        "pca-then-standardize" => Ok(PreprocessOrder::PcaThenStandardize),
        _ => Err(format!("expected standardize-then-pca or pca-then-standardize, got {s:?}")),
    }
}

fn apply_common(cfg: &mut ExperimentConfig, c: &CommonArgs) {
    if let Some(s) = c.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = &c.out {
        cfg.out_dir = o.clone();
    }
}

fn restrict(cfg: &mut ExperimentConfig, chosen: &[Suite], hhl: bool) -> anyhow::Result<()> {
    if chosen.is_empty() {
        cfg.suites.retain(|s| s.is_hhl() == hhl);
        if cfg.suites.is_empty() {
            cfg.suites = if hhl {
                vec![Suite::HhlDiag, Suite::HhlDensity]
            } else {
                vec![Suite::QsvmShots, Suite::QsvmFinal]
            };
        }
    } else {
        if let Some(s) = chosen.iter().find(|s| s.is_hhl() != hhl) {
            anyhow::bail!("suite {} does not belong to this command", s.as_str());
        }
        cfg.suites = chosen.to_vec();
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_json_file(p)?,
        None => ExperimentConfig::default(),
    };
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    let formats = match cli.command {
        Command::Verify { data_dir } => {
            let dir = data_dir.unwrap_or(cfg.data_dir);
            let checks = qlinbench::verify::run_checks(&dir);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            if failed > 0 {
                anyhow::bail!("{failed} fixture checks failed");
            }
            return Ok(());
        }
        Command::Hhl(a) => {
            restrict(&mut cfg, &a.suite, true)?;
            apply_common(&mut cfg, &a.common);
            if let Some(v) = a.dims {
                cfg.dims = v;
            }
            if let Some(v) = a.densities {
                cfg.densities = v;
            }
            if let Some(v) = a.trials {
                cfg.trials_per_cell = v;
            }
            if let Some(v) = a.clock {
                cfg.hhl.n_clock = v;
            }
            if let Some(v) = a.max_clock {
                cfg.hhl.max_clock = (v > 0).then_some(v);
            }
            if let Some(v) = a.mode {
                cfg.hhl.mode = v;
            }
            if let Some(v) = a.estimate {
                cfg.hhl.estimate = v;
            }
            if let Some(v) = a.shots {
                cfg.hhl.shots = v;
            }
            a.common.formats
        }
        Command::Qsvm(a) => {
            restrict(&mut cfg, &a.suite, false)?;
            apply_common(&mut cfg, &a.common);
            if !a.dataset.is_empty() {
                cfg.datasets = a.dataset;
            }
            if let Some(v) = a.shots {
                cfg.shots_list = v;
            }
            if let Some(v) = a.seeds {
                cfg.seeds = v;
            }
            if let Some(v) = a.gamma_inv {
                cfg.gamma_inv = v;
            }
            if let Some(v) = a.reduction {
                cfg.reduction = v;
            }
            if let Some(v) = a.preprocess {
                cfg.preprocess = v;
            }
            if let Some(v) = a.data_dir {
                cfg.data_dir = v;
            }
            a.common.formats
        }
        Command::All(c) => {
            apply_common(&mut cfg, &c);
            c.formats
        }
    };
    let formats = if formats.is_empty() { ALL_FORMATS.to_vec() } else { formats };
    let report = qlinbench::run(&cfg)?;
    let errors = report.hhl_rows.iter().filter(|r| !r.is_ok()).count()
        + report.qsvm_rows.iter().filter(|r| r.metrics.is_none()).count();
    let written = emit_reports(&report, &cfg.out_dir, &formats)
        .with_context(|| format!("writing reports to {}", cfg.out_dir.display()))?;
    for p in &written {
        println!("wrote {}", p.display());
    }
    println!(
        "{} HHL rows, {} QSVM rows, {errors} error rows",
        report.hhl_rows.len(),
        report.qsvm_rows.len()
    );
    for f in &report.qsvm_final {
        println!(
            "{} {} {}{}: mean accuracy {}",
            f.dataset.as_str(),
            f.eval_set.as_str(),
            f.method.as_str(),
            f.shots.map(|s| format!(" @{s} shots")).unwrap_or_default(),
            f.mean_accuracy.map(|a| format!("{a:.4}")).unwrap_or_else(|| "NA".into())
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
