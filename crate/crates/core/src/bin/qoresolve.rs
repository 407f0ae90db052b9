use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qoresolve::cli::{
    check_spec, parse_binomial, parse_input, parse_pair_list, run, suggested_step_cap, write_outputs, CliError,
    InputSource, Mode, OutputKind, RunSpec, DEFAULT_STEP_CAP,
};
use qoresolve::driver::PathSelector;

/// Resolve quasi-ordinary surface singularities by characteristic pairs.
#[derive(Parser, Debug)]
#[command(name = "qoresolve", version)]
struct Args {
    /// JSON configuration document.
    #[arg(long, conflicts_with_all = ["binomial", "pairs"])]
    input: Option<PathBuf>,
    /// Binomial z^m + x^a y^b given as `m,a,b`.
    #[arg(long, conflicts_with = "pairs")]
    binomial: Option<String>,
    /// Characteristic pairs `l1/d,m1/d;l2/d,m2/d`; needs --m.
    #[arg(long, requires = "m")]
    pairs: Option<String>,
    /// Multiplicity for --pairs.
    #[arg(long)]
    m: Option<u32>,
    /// Comma-separated outputs: trace, json, dot.
    #[arg(long, value_delimiter = ',')]
    emit: Vec<String>,
    /// Directory for output files; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Maximum number of blow-ups.
    #[arg(long)]
    step_cap: Option<usize>,
    /// Cross-check every chart move against direct substitution.
    #[arg(long, conflicts_with = "invariant_only")]
    validate: bool,
    /// Print the invariant and center of the start state only.
    #[arg(long)]
    invariant_only: bool,
    /// Which branches to trace: leftmost, all, or a chart list like `x,y,y`.
    #[arg(long)]
    path: Option<String>,
}

fn build_spec(args: &Args) -> Result<RunSpec, CliError> {
    let mut spec = if let Some(file) = &args.input {
        let text = std::fs::read_to_string(file)?;
        parse_input(&text)?
    } else {
        let (input, warnings) = if let Some(b) = &args.binomial {
            (InputSource::Binomial(parse_binomial(b)?), Vec::new())
        } else if let Some(p) = &args.pairs {
            qoresolve::cli::pairs_input(args.m.unwrap_or_default(), parse_pair_list(p)?)?
        } else {
            return Err(CliError::Input("give --input, --binomial or --pairs".into()));
        };
        RunSpec {
            input,
            mode: Mode::Resolve,
            outputs: vec![OutputKind::Trace],
            step_cap: DEFAULT_STEP_CAP,
            path: PathSelector::Leftmost,
            warnings,
        }
    };
    if args.validate {
        spec.mode = Mode::Validate;
    }
    if args.invariant_only {
        spec.mode = Mode::InvariantOnly;
    }
    if !args.emit.is_empty() {
        spec.outputs = args.emit.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(CliError::Input)?;
    }
    if let Some(cap) = args.step_cap {
        spec.step_cap = cap;
    } else if args.input.is_none() {
        spec.step_cap = suggested_step_cap(&spec.input);
    }
    if let Some(p) = &args.path {
        spec.path = p.parse().map_err(CliError::Input)?;
    }
    check_spec(&spec)?;
    Ok(spec)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = build_spec(&args).and_then(|spec| {
        for w in &spec.warnings {
            eprintln!("warning: {w}");
        }
        let out = run(&spec)?;
        emit(&out, args.out.as_deref())?;
        out.into_result().map(|_| ())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(out: &qoresolve::cli::RunOutput, dir: Option<&std::path::Path>) -> Result<(), CliError> {
    match dir {
        Some(d) => write_outputs(out, d),
        None => {
            let mut stdout = std::io::stdout().lock();
            for (_, body) in &out.files {
                stdout.write_all(body.as_bytes())?;
            }
            Ok(())
        }
    }
}
