use clap::{Parser, Subcommand};
use relnav_core::error::HarnessError;
use relnav_core::harness::{
    from_jsonl, generate_scenes, load_scenes, render_csv, render_line, render_table, run_ablation, run_config,
    write_report, write_scenes, AblationAxis, RunConfig,
};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "relnav", version, about = "Relation-guided object-goal navigation in a grid world")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one scene file per configured seed.
    GenScenes {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a batch and write results.jsonl and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Directory of scene files; generated from the seeds when omitted.
        #[arg(long)]
        scenes: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the metrics of a finished run directory.
    Eval {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Run one ablation axis on the configured seeds.
    Ablate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        axis: String,
        #[arg(long)]
        scenes: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
    /// Replay an episode trace file as text.
    Trace {
        #[arg(long)]
        episode: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn eval(run_dir: &Path, csv: bool) -> Result<(), HarnessError> {
    let path = run_dir.join("summary.json");
    let summary: serde_json::Value = serde_json::from_str(&read(&path)?).map_err(|e| HarnessError::json(&path, e))?;
    let m = &summary["metrics"];
    let field = |k: &str| m[k].as_f64().unwrap_or(f64::NAN);
    let steps_success = m["avg_steps_success"].as_f64();
    if csv {
        println!("n,sr,spl,avg_steps,avg_steps_success");
        println!(
            "{},{:.6},{:.6},{:.3},{}",
            m["n"],
            field("sr"),
            field("spl"),
            field("avg_steps"),
            steps_success.map_or(String::new(), |v| format!("{v:.3}"))
        );
    } else {
        println!("{:>6} {:>6} {:>6} {:>9} {:>13}", "n", "SR", "SPL", "steps", "steps_success");
        println!(
            "{:>6} {:>6.3} {:>6.3} {:>9.1} {:>13}",
            m["n"].to_string(),
            field("sr"),
            field("spl"),
            field("avg_steps"),
            steps_success.map_or("-".to_owned(), |v| format!("{v:.1}"))
        );
        println!("config {}", summary["config_hash"].as_str().unwrap_or("?"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::GenScenes { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let scenes = generate_scenes(&cfg, &cfg.prior_graph()?)?;
            let paths = write_scenes(&scenes, &out)?;
            println!("wrote {} scenes to {}", paths.len(), out.display());
        }
        Command::Run { config, scenes, out } => {
            let cfg = RunConfig::load(&config)?;
            let report = run_config(&cfg, scenes.as_deref())?;
            write_report(&report, &out)?;
            println!(
                "n={} SR={:.3} SPL={:.3} -> {}",
                report.metrics.n,
                report.metrics.sr,
                report.metrics.spl,
                out.display()
            );
        }
        Command::Eval { results, csv } => eval(&results, csv)?,
        Command::Ablate {
            config,
            axis,
            scenes,
            csv,
        } => {
            let axis: AblationAxis = axis.parse()?;
            let cfg = RunConfig::load(&config)?;
            let prior = cfg.prior_graph()?;
            let scenes = match scenes {
                Some(d) => load_scenes(&d)?,
                None => generate_scenes(&cfg, &prior)?,
            };
            let rows = run_ablation(&cfg, axis, &scenes, &prior)?;
            print!("{}", if csv { render_csv(&rows) } else { render_table(&rows) });
        }
        Command::Trace { episode } => {
            let records = from_jsonl(&read(&episode)?).map_err(|e| HarnessError::json(&episode, e))?;
            let mut out = std::io::stdout().lock();
            for r in &records {
                if writeln!(out, "{}", render_line(r)).is_err() {
                    break;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
