use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use topotrans::system::BUILTINS;
use topotrans_cli::{parse_config, run, Format, DEFAULT_PLAN, EXIT_CONFIG};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Tsv,
    Pretty,
}

/// Checks transitivity properties of dynamical systems described in a plan file.
#[derive(Parser, Debug)]
#[command(name = "topotrans", version)]
struct Args {
    /// Plan file; the built-in zoo plan when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run the implication audit even if the plan does not ask for it.
    #[arg(long)]
    audit: bool,
    #[arg(long, value_enum, default_value = "tsv")]
    format: FormatArg,
    /// Worker threads; the report does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Print the built-in system names and exit.
    #[arg(long)]
    list_builtins: bool,
}

fn main() -> ExitCode {
    // clap exits with 2 on bad arguments, which is reserved for audit violations
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG as u8) } else { ExitCode::SUCCESS };
        }
    };
    if args.list_builtins {
        for (name, about) in BUILTINS {
            println!("{name}\t{about}");
        }
        return ExitCode::SUCCESS;
    }
    let text = match &args.config {
        None => DEFAULT_PLAN.to_string(),
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        },
    };
    let plan = match parse_config(&text) {
        Ok(p) => p,
        Err(errs) => {
            for e in errs {
                eprintln!("{e}");
            }
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let format = match args.format {
        FormatArg::Tsv => Format::Tsv,
        FormatArg::Pretty => Format::Pretty,
    };
    let report = run(&plan, args.jobs as usize, args.audit);
    print!("{}", report.render(format));
    ExitCode::from(report.exit_code() as u8)
}
