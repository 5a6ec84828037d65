use ccj::suite::{construct, verify, Bounds, FixtureDoc, Suite, Target};
use ccj::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Builds C-systems and J-structures from finite universe fixtures and
/// checks their laws by enumeration.
#[derive(Parser)]
#[command(name = "ccj", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run check suites on a fixture.
    Verify {
        fixture: PathBuf,
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Dump a constructed structure as canonical tables.
    Construct {
        fixture: PathBuf,
        /// cc, j-universe, j-cc, derive-j or h-of.
        target: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Length bound for C-system enumeration.
    #[arg(long)]
    bound: Option<usize>,
    /// Length bound for IdxT, rf and J enumeration.
    #[arg(long)]
    j2_bound: Option<usize>,
    /// Size bound for lifting enumeration.
    #[arg(long)]
    lifting_bound: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Reseeds the chooser of every universe.
    #[arg(long)]
    skew: Option<u64>,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "json")]
    Structured,
}

impl Common {
    fn bounds(&self) -> Bounds {
        Bounds {
            bound: self.bound,
            j2_bound: self.j2_bound,
            lifting_bound: self.lifting_bound,
        }
    }

    fn emit(&self, text: String) -> Result<(), Failure> {
        match &self.out {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

enum Failure {
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn load(path: &Path, skew: Option<u64>) -> Result<FixtureDoc, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut doc = FixtureDoc::parse(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    if skew.is_some() {
        doc.options.skew = skew;
    }
    Ok(doc)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.cmd {
        Cmd::Verify {
            fixture,
            suite,
            common,
        } => {
            let doc = load(&fixture, common.skew)?;
            let suites = Suite::parse(&suite)?;
            let rep = verify(&doc, &suites, &common.bounds())?;
            let text = match common.format {
                Format::Text => rep.render_text(),
                Format::Structured => rep.to_json() + "\n",
            };
            common.emit(text)?;
            let failing = rep.failing_ids();
            if !failing.is_empty() {
                eprintln!("failed: {}", failing.join(", "));
            }
            Ok(failing.is_empty())
        }
        Cmd::Construct {
            fixture,
            target,
            common,
        } => {
            let doc = load(&fixture, common.skew)?;
            let out = construct(&doc, Target::parse(&target)?, &common.bounds())?;
            let text = match common.format {
                Format::Text => out.render_text(),
                Format::Structured => out.to_json() + "\n",
            };
            common.emit(text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::Spec(_) => 2,
                Error::Capacity { .. } | Error::Bound(_) => 3,
                _ => 1,
            })
        }
    }
}
