use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use heisen::classify::{classify_heisenberg, confirm_single_orbits};
use heisen::form::FormSpace;
use heisen::heisenberg::{verify_weyl_relations, weyl_operators};
use heisen::io::{from_json_stream, to_json, ClassificationFile, DecompositionFile, FormFile, VerificationFile, WeylReportFile};
use heisen::reduction::{half, symplectic_reduce, verify_decomposition};
use heisen::{Error, FiniteAbelianGroup, HeisenbergGroup, Limits};

/// Alternating forms, symplectic reduction and Heisenberg groups over finite
/// abelian groups.
///
/// Groups are written `Z/4 x Z/2`. Exhaustive work is bounded by the
/// HEISEN_MAX_ORDER environment variable (default 1000000).
#[derive(Parser)]
#[command(name = "heisen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Does the group carry a non-degenerate alternating form?
    Check { group: String },
    /// Print every alternating form on the group, one JSON document per line.
    Enumerate {
        group: String,
        #[arg(long)]
        nondegenerate: bool,
    },
    /// Reduce form files to decompositions (`-` reads stdin).
    Reduce { forms: PathBuf },
    /// Check decompositions against the forms they claim to reduce.
    Verify { forms: PathBuf, decompositions: PathBuf },
    /// Build the Heisenberg group of a non-degenerate form and summarize it.
    Construct { forms: PathBuf },
    /// List the phase spaces of order n² carrying a Heisenberg group.
    Classify {
        #[arg(long)]
        order: u64,
        /// Also confirm that every phase space has a single orbit of forms.
        #[arg(long)]
        orbits: bool,
    },
    /// Build translation and modulation operators on L²(A) and check their relations.
    Weyl {
        group: String,
        #[arg(long, default_value_t = heisen::heisenberg::DEFAULT_MAX_DIM)]
        max_dim: usize,
    },
}

enum Failure {
    Input(String),
    Internal(String),
    /// stdout went away, e.g. piped into `head`
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Input(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_forms(path: &Path) -> Result<Vec<FormFile>, Failure> {
    from_json_stream(&read_input(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_group(literal: &str) -> Result<FiniteAbelianGroup, Failure> {
    Ok(literal.parse()?)
}

fn with_position(index: usize, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("document {}: {m}", index + 1)),
        Failure::Internal(m) => Failure::Internal(format!("document {}: {m}", index + 1)),
        Failure::Closed => Failure::Closed,
    }
}

/// Returns whether the answer was affirmative.
fn run(command: Command, out: &mut impl Write) -> Result<bool, Failure> {
    let limits = Limits::from_env();
    match command {
        Command::Check { group } => {
            let k = parse_group(&group)?;
            match half(&k) {
                Some(a) => {
                    writeln!(out, "yes: invariant factors pair up, {k} = A x dual(A) with A = {a}")?;
                    Ok(true)
                }
                None => {
                    writeln!(out, "no: invariant factors do not pair up")?;
                    Ok(false)
                }
            }
        }
        Command::Enumerate { group, nondegenerate } => {
            let k = parse_group(&group)?;
            for e in FormSpace::new(&k).iter(&limits)? {
                if !nondegenerate || e.is_nondegenerate() {
                    writeln!(out, "{}", to_json(&FormFile::from_form(&e)))?;
                }
            }
            Ok(true)
        }
        Command::Reduce { forms } => {
            for (idx, file) in read_forms(&forms)?.iter().enumerate() {
                let e = file.to_form().map_err(|e| with_position(idx, e))?;
                let d = symplectic_reduce(&e, &limits).map_err(|e| with_position(idx, e))?;
                writeln!(out, "{}", to_json(&DecompositionFile::from_decomposition(&d)))?;
            }
            Ok(true)
        }
        Command::Verify { forms, decompositions } => {
            let forms = read_forms(&forms)?;
            let decs: Vec<DecompositionFile> = from_json_stream(&read_input(&decompositions)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", decompositions.display())))?;
            if forms.len() != decs.len() {
                return Err(Failure::Input(format!("{} forms but {} decompositions", forms.len(), decs.len())));
            }
            let mut all_valid = true;
            for (idx, (f, d)) in forms.iter().zip(&decs).enumerate() {
                let e = f.to_form().map_err(|e| with_position(idx, e))?;
                let d = d.to_decomposition().map_err(|e| with_position(idx, e))?;
                let v = verify_decomposition(&e, &d, &limits).map_err(|e| with_position(idx, e))?;
                all_valid &= v.is_valid();
                writeln!(out, "{}", to_json(&VerificationFile::from(&v)))?;
            }
            Ok(all_valid)
        }
        Command::Construct { forms } => {
            for (idx, file) in read_forms(&forms)?.iter().enumerate() {
                let e = file.to_form().map_err(|e| with_position(idx, e))?;
                let g = HeisenbergGroup::from_form(&e, &limits).map_err(|e| with_position(idx, e))?;
                writeln!(out, "{}", to_json(&g.summary(&limits)?))?;
            }
            Ok(true)
        }
        Command::Classify { order, orbits } => {
            if order == 0 {
                return Err(Failure::Input("order must be at least 1".into()));
            }
            let record = classify_heisenberg(order)?;
            if orbits {
                confirm_single_orbits(&record, &limits)?;
            }
            writeln!(out, "{}", to_json(&ClassificationFile::from_record(&record)))?;
            Ok(true)
        }
        Command::Weyl { group, max_dim } => {
            let a = parse_group(&group)?;
            let report = verify_weyl_relations(&weyl_operators(&a, max_dim)?);
            writeln!(out, "{}", to_json(&WeylReportFile::from_report(&a, &report)))?;
            Ok(report.is_ok())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let result = result.and_then(|ok| out.flush().map(|_| ok).map_err(Failure::from));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
