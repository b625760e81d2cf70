use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nijenhuis_cli::{commands, Exit};

/// Torsion, adapted frames and associated algebras of almost complex
/// structures in dimension 4.
#[derive(Parser)]
#[command(name = "nijenhuis", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full analysis of a spec file.
    Analyze {
        spec: PathBuf,
        /// Analysis point `r,r,r,r` (default: the spec's point, else the origin).
        #[arg(long)]
        point: Option<String>,
        /// Write the machine report here (`-` for stdout instead of the text report).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Associated algebra and its catalog tag.
    Classify { spec: PathBuf },
    /// Both adapted frames at a point.
    Frames {
        spec: PathBuf,
        #[arg(long)]
        point: Option<String>,
    },
    /// Closedness of the fundamental form for G = a(X*X + JX*JX) + c(T*T + JT*JT).
    KaehlerCheck {
        spec: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        c: String,
    },
    /// Symbolic residual and clause sampling for a built-in family.
    FamilyCheck { name: String },
    /// Check every entry of a corpus directory.
    VerifyCorpus {
        dir: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Ok };
            return ExitCode::from(code.code() as u8);
        }
    };
    let result = match &cli.cmd {
        Cmd::Analyze { spec, point, json } => commands::analyze(spec, point.as_deref(), json.as_deref()),
        Cmd::Classify { spec } => commands::classify(spec),
        Cmd::Frames { spec, point } => commands::frames(spec, point.as_deref()),
        Cmd::KaehlerCheck { spec, a, c } => commands::kaehler_check(spec, a, c),
        Cmd::FamilyCheck { name } => commands::family_check(name),
        Cmd::VerifyCorpus { dir, jobs } => commands::verify_corpus(dir, *jobs),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.exit.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit().code() as u8)
        }
    }
}
