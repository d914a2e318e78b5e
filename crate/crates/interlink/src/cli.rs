//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 infeasible instance
//! (`synthesize`), 3 not structurally controllable (`verify`), 64 usage
//! error, 65 malformed or invalid document.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use interlink_core::oracle::{brute_force_minimum, random_spec, GenParams};
use interlink_core::{
    apply_interconnections, build_digraph, is_structurally_controllable, synthesize, CompositeSpec,
    Error, Links, SynthesisReport,
};

use crate::dot::export_dot;
use crate::io::{self, DocumentError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_NOT_CONTROLLABLE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

/// Minimum interconnection synthesis for composite structured systems.
///
/// Documents are JSON with 1-based indices. INPUT defaults to stdin.
#[derive(Debug, Parser)]
#[command(name = "interlink", version)]
struct Cli {
    /// Write the result to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a smallest interconnection set and print the report.
    Synthesize { input: Option<PathBuf> },
    /// Check structural controllability, optionally with interconnections added.
    Verify {
        input: Option<PathBuf>,
        /// Report document or bare list of [[target], [source]] links.
        #[arg(long)]
        links: Option<PathBuf>,
    },
    /// Print the inaccessible components, the matching deficiency and the lower bound.
    Analyze { input: Option<PathBuf> },
    /// Exhaustive search for the smallest interconnection set of size at most CAP.
    Oracle {
        input: Option<PathBuf>,
        #[arg(long)]
        cap: usize,
    },
    /// Print a random instance.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ns: usize,
        /// Probability of each template star.
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Probability of each input star.
        #[arg(long, default_value_t = 0.2)]
        input_density: f64,
    },
    /// Print the composite digraph in DOT format.
    ExportDot {
        input: Option<PathBuf>,
        /// Report whose interconnections are added and drawn in red.
        #[arg(long)]
        highlight: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Io(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Data(_) => EXIT_DATA,
            Self::Io(_) | Self::Internal(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Data(m) | Self::Io(m) | Self::Internal(m) => m,
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Self::Data(e.to_string())
    }
}

fn read_text(path: Option<&Path>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

struct Session<'a> {
    stdin: &'a mut dyn Read,
    stderr: &'a mut dyn Write,
}

impl Session<'_> {
    fn instance(&mut self, path: Option<&Path>) -> Result<CompositeSpec, Failure> {
        let text = read_text(path, self.stdin)?;
        let parsed = io::parse_instance_with_warnings(&text)?;
        for w in &parsed.warnings {
            let _ = writeln!(self.stderr, "warning: {w}");
        }
        Ok(parsed.spec)
    }

    fn document(&mut self, path: &Path) -> Result<String, Failure> {
        read_text(Some(path), self.stdin)
    }
}

/// Output text and exit code of one command.
fn execute(command: Command, session: &mut Session<'_>) -> Result<(String, u8), Failure> {
    match command {
        Command::Synthesize { input } => {
            let spec = session.instance(input.as_deref())?;
            match synthesize(&spec) {
                Ok(report) => Ok((io::emit_report(&report), EXIT_OK)),
                Err(Error::Infeasible(why)) => {
                    let _ = writeln!(session.stderr, "infeasible: {why}");
                    Ok((io::emit_report(&SynthesisReport::infeasible(&spec)), EXIT_INFEASIBLE))
                }
                Err(e) => Err(Failure::Internal(e.to_string())),
            }
        }
        Command::Verify { input, links } => {
            let spec = session.instance(input.as_deref())?;
            let links = match links {
                Some(p) => io::parse_links(&session.document(&p)?)?,
                None => Vec::new(),
            };
            let a = apply_interconnections(&spec, &links).map_err(|e| Failure::Data(e.to_string()))?;
            let verdict =
                is_structurally_controllable(&a, spec.b()).map_err(|e| Failure::Internal(e.to_string()))?;
            let code = if verdict.controllable { EXIT_OK } else { EXIT_NOT_CONTROLLABLE };
            Ok((io::emit_verdict(&verdict, spec.n_s()), code))
        }
        Command::Analyze { input } => {
            let spec = session.instance(input.as_deref())?;
            Ok((io::emit_analysis(&spec), EXIT_OK))
        }
        Command::Oracle { input, cap } => {
            let spec = session.instance(input.as_deref())?;
            if spec.n_t() > 64 || spec.n_t() + spec.m() > 128 {
                return Err(Failure::Usage(format!(
                    "oracle handles at most 64 states and 128 states plus inputs, got {} and {}",
                    spec.n_t(),
                    spec.n_t() + spec.m()
                )));
            }
            let result = brute_force_minimum(&spec, cap);
            Ok((io::emit_oracle(cap, result.as_ref()), EXIT_OK))
        }
        Command::Gen { k, ns, density, seed, m, input_density } => {
            let params = GenParams { k, n_s: ns, m, edge_density: density, input_density, seed };
            let spec = random_spec(&params).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok((io::emit_instance(&spec), EXIT_OK))
        }
        Command::ExportDot { input, highlight } => {
            let spec = session.instance(input.as_deref())?;
            let links = match highlight {
                Some(p) => Some(io::parse_links(&session.document(&p)?)?),
                None => None,
            };
            let graph = match &links {
                Some(l) => build_digraph(&spec, Links::Explicit(l)),
                None => build_digraph(&spec, Links::None),
            }
            .map_err(|e| Failure::Data(e.to_string()))?;
            Ok((export_dot(&graph, links.as_deref()), EXIT_OK))
        }
    }
}

/// Runs one invocation; `argv` includes the program name.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    let mut session = Session { stdin, stderr };
    let (text, code) = match execute(cli.command, &mut session) {
        Ok(done) => done,
        Err(f) => {
            let _ = writeln!(session.stderr, "error: {}", f.message());
            return f.code();
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("stdout: {e}")),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(session.stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}
