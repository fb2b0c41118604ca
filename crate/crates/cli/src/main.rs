mod backends;
mod commands;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use backends::{BackendArgs, Backends};
use commands::*;

/// Batch front end: JSON Lines in, JSON Lines out, a JSON summary on stderr.
#[derive(Parser, Debug)]
#[command(name = "tailor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads; output order does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    backends: BackendArgs,
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile frames into control-coded prompts with their targets.
    Compile(CompileArgs),
    /// Apply an op program to compiled prompts.
    Perturb(PerturbArgs),
    /// Positive and negative training examples per frame.
    GenData(GenDataArgs),
    /// Run a named perturbation recipe.
    Recipe(RecipeArgs),
    /// Closeness, controllability and fluency of generations.
    Eval(EvalArgs),
    /// Keep the lowest-perplexity fraction of candidates.
    Filter(FilterArgs),
}

fn run(cli: &Cli) -> anyhow::Result<io::Summary> {
    if cli.jobs == 0 {
        anyhow::bail!("--jobs must be at least 1");
    }
    let ctx = Ctx {
        backends: Backends::from_args(&cli.backends)?,
        pool: rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build()?,
    };
    match &cli.command {
        Command::Compile(a) => compile_cmd(&ctx, a),
        Command::Perturb(a) => perturb_cmd(&ctx, a),
        Command::GenData(a) => gen_data_cmd(&ctx, a),
        Command::Recipe(a) => recipe_cmd(&ctx, a),
        Command::Eval(a) => eval_cmd(&ctx, a),
        Command::Filter(a) => filter_cmd(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(summary) => {
            eprintln!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            ExitCode::from(if summary.failed > 0 { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
            ExitCode::from(2)
        }
    }
}
