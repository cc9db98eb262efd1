use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lefschetz::catalog::{chain_preset, render_table};
use lefschetz::checks::{closure_check, rotation_experiment, substitute_separating};
use lefschetz::dsl::{parse_with, render, ParseOptions};
use lefschetz::report::{summary, to_json, trace_table};
use lefschetz::{compute, compute_signature, Base, Error, GenusContext};

#[derive(Parser)]
#[command(name = "lefsig", version, about = "Signatures of Lefschetz fibrations from monodromy words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute σ, e and the derived invariants of a fibration.
    Compute {
        /// Input document; standard input when omitted or `-`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Print the per-handle table.
        #[arg(long)]
        trace: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Print every check, and run the rotation experiment.
        #[arg(long)]
        checks: bool,
        /// Accept negative twists (experimental).
        #[arg(long)]
        achiral: bool,
    },
    /// Print the built-in curves for a genus as curve lines.
    Catalog {
        #[arg(long, allow_negative_numbers = true)]
        genus: i64,
    },
    /// Replace a separating twist of a genus-2 word by (c1 c2)^6.
    Substitute {
        #[arg(long)]
        input: Option<PathBuf>,
        /// 1-based position of the separating twist.
        #[arg(long)]
        position: usize,
        /// Where to write the new document; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn read_input(path: Option<&Path>) -> Result<String, Error> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = fs::read_to_string(p).map_err(|e| Error::Validation(format!("cannot read {}: {e}", p.display())))?
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Validation(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn cmd_compute(
    input: Option<&Path>,
    trace: bool,
    json: bool,
    checks: bool,
    achiral: bool,
) -> Result<String, Error> {
    let spec = parse_with(&read_input(input)?, ParseOptions { achiral })?;
    let mut report = compute(&spec)?;
    if checks {
        report.checks.insert("rotation".into(), rotation_experiment(&spec)?);
    }
    if json {
        return Ok(to_json(&report));
    }
    let mut out = String::new();
    if trace {
        out.push_str(&trace_table(&report));
        out.push('\n');
    }
    if !checks {
        report.checks.clear();
    }
    out.push_str(&summary(&report));
    Ok(out)
}

fn cmd_catalog(genus: i64) -> Result<String, Error> {
    let g = usize::try_from(genus)
        .ok()
        .filter(|&g| g >= 1)
        .ok_or_else(|| Error::Validation(format!("genus must be at least 1, got {genus}")))?;
    let ctx = GenusContext::new(g)?;
    let mut out = format!("# chain curves for genus {g}; coefficients in the order a1 b1 a2 b2 ...\ngenus {g}\n");
    out.push_str(&render_table(&chain_preset(ctx)));
    if g == 3 {
        out.push_str("# d8 and d9 are not built in: add curve lines for them before using them in a word\n");
    }
    Ok(out)
}

fn cmd_substitute(input: Option<&Path>, position: usize, output: Option<&Path>) -> Result<String, Error> {
    let spec = parse_with(&read_input(input)?, ParseOptions::default())?;
    let replaced = substitute_separating(&spec, position)?;
    let before = compute_signature(&spec)?;
    let after = compute_signature(&replaced)?;
    let mut notes = format!(
        "# sigma {} -> {} (delta {})\n# e {} -> {} (delta {})\n",
        before.sigma,
        after.sigma,
        after.sigma - before.sigma,
        before.euler,
        after.euler,
        after.euler - before.euler
    );
    if spec.base() != Base::Sphere || !closure_check(&spec)? {
        notes.push_str("# input is not a closed word over S2; delta sigma = -7 is only guaranteed there\n");
    }
    let document = render(&replaced);
    match output {
        Some(path) => {
            fs::write(path, &document).map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?;
            Ok(notes)
        }
        None => Ok(format!("{notes}{document}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute {
            input,
            trace,
            json,
            checks,
            achiral,
        } => cmd_compute(input.as_deref(), *trace, *json, *checks, *achiral),
        Command::Catalog { genus } => cmd_catalog(*genus),
        Command::Substitute {
            input,
            position,
            output,
        } => cmd_substitute(input.as_deref(), *position, output.as_deref()),
    };
    match result {
        Ok(text) => {
            let _ = io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
