use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use qcond::{exit_code, parse, render_all, run, summary, Options, CASEBOOK};

/// Checks Lie and Q-conditional symmetries of PDEs described in a script.
///
/// With no script and no `--casebook`, runs the built-in casebook.
#[derive(Parser, Debug)]
#[command(name = "qcond", version)]
struct Cli {
    /// Script files to run, in order.
    scripts: Vec<PathBuf>,
    /// Run a casebook file.
    #[arg(long, value_name = "PATH")]
    casebook: Option<PathBuf>,
    /// Write one JSON record per directive to this file.
    #[arg(long, value_name = "PATH")]
    emit_summary: Option<PathBuf>,
    /// Consequence-closure cap for Lie checks (default: twice the equation order).
    #[arg(long, value_name = "K")]
    max_order: Option<usize>,
    /// Seed for randomized casebook checks.
    #[arg(long, value_name = "N", default_value_t = 1)]
    seed: u64,
    /// Run directives concurrently; output order is unchanged.
    #[arg(long)]
    parallel: bool,
    /// Print the parsed scripts in canonical form instead of running them.
    #[arg(long)]
    print: bool,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qcond: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    let mut sources: Vec<(String, String)> = Vec::new();
    for p in cli.casebook.iter().chain(&cli.scripts) {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        sources.push((p.display().to_string(), text));
    }
    if sources.is_empty() {
        sources.push(("<casebook>".into(), CASEBOOK.to_string()));
    }
    let opts = Options { seed: cli.seed, max_order: cli.max_order, parallel: cli.parallel };
    let mut all = Vec::new();
    for (name, text) in &sources {
        let script = parse(text).with_context(|| name.clone())?;
        if cli.print {
            print!("{}", qcond::print::script(&script));
            continue;
        }
        if sources.len() > 1 {
            println!("## {name}");
        }
        let outcomes = run(&script, &opts);
        print!("{}", render_all(&outcomes));
        all.extend(outcomes);
    }
    if let Some(path) = &cli.emit_summary {
        std::fs::write(path, summary(&all)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if cli.print { 0 } else { exit_code(&all) })
}
