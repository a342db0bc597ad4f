//! Command-line front end. [`run`] parses arguments and dispatches to the
//! `cmd_*` functions, which write to injected streams and return exit codes:
//! 0 on success, 1 for usage, I/O or parse errors, 2 when the input is
//! well-formed but mathematically rejected.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::fibration::Direction;
use crate::homology::{HomologyClass, DEFAULT_BFS_CAP};
use crate::planner::{
    dl3_model, flexibility_witness, genus2_chain_model, genus2_chain_system, plan_closed_embedding,
    plan_weinstein_embedding, torus22_model, verify, EmbeddingCertificate, PlanOptions, TargetModel,
};
use crate::Error;

pub use format::{parse_fibration, FibrationFile, LoadError, LoadedFibration, SystemSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lefschetz", version, about = "Exact homology-level calculus for Lefschetz fibrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Closed fibration over the sphere into a product with a pencil.
    Closed,
    /// Disk-base fibration with one-boundary fibers into DL(-3) x D^2.
    Weinstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Torus22,
    Dl3,
    Genus2Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirArg {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that every vanishing cycle is essential and primitive.
    Validate { path: PathBuf },
    /// Produce an embedding certificate.
    Plan {
        path: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        out: PathBuf,
        /// Prime for the flexibility witness; repeatable.
        #[arg(long = "prime")]
        primes: Vec<u64>,
        /// Reference class for the closed target, e.g. "0,1,0,0".
        #[arg(long, value_parser = parse_class, allow_hyphen_values = true)]
        reference: Option<HomologyClass>,
        #[arg(long, default_value_t = DEFAULT_BFS_CAP)]
        cap: usize,
    },
    /// Re-check a certificate from its contents alone.
    Verify { path: PathBuf },
    /// Write a builtin fibration.
    Models {
        #[arg(value_enum)]
        name: Model,
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order of the target's conjugatable twists modulo primes.
    Spcheck {
        path: PathBuf,
        #[arg(long = "prime")]
        primes: Vec<u64>,
        #[arg(long, value_enum)]
        target: Option<Target>,
        #[arg(long, default_value_t = DEFAULT_BFS_CAP)]
        cap: usize,
    },
    /// Apply an elementary Hurwitz move at positions (index, index+1).
    Hurwitz {
        path: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(long = "dir", value_enum)]
        dir: DirArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_class(s: &str) -> Result<HomologyClass, String> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<num_bigint::BigInt>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    HomologyClass::new(coords).map_err(|e| e.to_string())
}

/// Parse `args` (program name first) and run the selected command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    match cli.command {
        Command::Validate { path } => cmd_validate(&path, out, err),
        Command::Plan { path, target, out: cert, primes, reference, cap } => {
            let mut opts = PlanOptions { bfs_cap: cap, reference, ..PlanOptions::default() };
            if !primes.is_empty() {
                opts.primes = primes;
            }
            cmd_plan(&path, target, &cert, &opts, out, err)
        }
        Command::Verify { path } => cmd_verify(&path, out, err),
        Command::Models { name, genus, out: dest } => cmd_models(name, genus, dest.as_deref(), out, err),
        Command::Spcheck { path, primes, target, cap } => {
            let primes = if primes.is_empty() { vec![2] } else { primes };
            cmd_spcheck(&path, &primes, target, cap, out, err)
        }
        Command::Hurwitz { path, index, dir, out: dest } => {
            let dir = match dir {
                DirArg::Left => Direction::Left,
                DirArg::Right => Direction::Right,
            };
            cmd_hurwitz(&path, index, dir, dest.as_deref(), out, err)
        }
    }
}

fn read(path: &Path, err: &mut dyn Write) -> Option<String> {
    match std::fs::read_to_string(path) {
        Ok(s) => Some(s),
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            None
        }
    }
}

fn load(path: &Path, err: &mut dyn Write) -> Option<LoadedFibration> {
    let text = read(path, err)?;
    match parse_fibration(&text) {
        Ok(l) => Some(l),
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            None
        }
    }
}

fn write_file(path: &Path, contents: &str, err: &mut dyn Write) -> bool {
    match std::fs::write(path, contents) {
        Ok(()) => true,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            false
        }
    }
}

fn rejected(e: &Error, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error[{}]: {e}", e.code());
    EXIT_REJECTED
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(loaded) = load(path, err) else { return EXIT_INPUT };
    let lf = &loaded.data;
    let report = lf.validate();
    let _ = writeln!(
        out,
        "{}: {} cycles over the {}, fiber {}, euler characteristic {}",
        if lf.label().is_empty() { "fibration" } else { lf.label() },
        lf.cycles().len(),
        lf.base(),
        lf.fiber(),
        lf.euler_characteristic()
    );
    let _ = write!(out, "{report}");
    if report.accepted() {
        EXIT_OK
    } else {
        for f in &report.failures {
            let _ = writeln!(err, "rejected: cycle {} (`{}`) is {}", f.index, f.name, f.reason);
        }
        if let crate::fibration::Closure::Defect(_) = report.closure {
            let _ = writeln!(err, "rejected: total monodromy over the sphere is not the identity");
        }
        EXIT_REJECTED
    }
}

pub fn cmd_plan(
    path: &Path,
    target: Target,
    cert_path: &Path,
    opts: &PlanOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(loaded) = load(path, err) else { return EXIT_INPUT };
    let planned = match target {
        Target::Closed => plan_closed_embedding(&loaded.data, opts),
        Target::Weinstein => {
            if opts.reference.is_some() {
                let _ = writeln!(err, "error: --reference applies to the closed target only");
                return EXIT_INPUT;
            }
            plan_weinstein_embedding(&loaded.data, &loaded.words, opts)
        }
    };
    let cert = match planned {
        Ok(c) => c,
        Err(e) => return rejected(&e, err),
    };
    if !write_file(cert_path, &cert.to_json(), err) {
        return EXIT_INPUT;
    }
    if let Some(w) = &cert.global.genus.warning {
        let _ = writeln!(err, "warning: {w}");
    }
    let _ = writeln!(
        out,
        "wrote {} certificate with {} entries to {}",
        cert.target.kind,
        cert.per_cycle.len(),
        cert_path.display()
    );
    let _ = write!(out, "{}", cert.global.flexibility);
    EXIT_OK
}

pub fn cmd_verify(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(text) = read(path, err) else { return EXIT_INPUT };
    let cert = match EmbeddingCertificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", path.display(), LoadError::from(e));
            return EXIT_INPUT;
        }
    };
    let report = verify(&cert);
    if report.ok() {
        let _ = writeln!(out, "ok: {} entries verified ({} target)", report.checked, cert.target.kind);
        EXIT_OK
    } else {
        for f in &report.failures {
            let _ = writeln!(err, "failed: {f}");
        }
        EXIT_REJECTED
    }
}

pub fn cmd_models(
    model: Model,
    genus: Option<u32>,
    dest: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let file = match model {
        Model::Torus22 => {
            FibrationFile::from_data(&torus22_model(), Some(SystemSpec::Builtin("torus".into())), Vec::new())
        }
        Model::Genus2Chain => FibrationFile::from_data(
            &genus2_chain_model(),
            Some(format::declare_system(&genus2_chain_system())),
            Vec::new(),
        ),
        Model::Dl3 => {
            let Some(g) = genus else {
                let _ = writeln!(err, "error: the dl3 model needs --genus");
                return EXIT_INPUT;
            };
            match dl3_model(g) {
                Ok(lf) => FibrationFile::from_data(&lf, Some(SystemSpec::Builtin("humphries".into())), Vec::new()),
                Err(e) => return rejected(&e, err),
            }
        }
    };
    if genus.is_some() && model != Model::Dl3 {
        let _ = writeln!(err, "error: --genus applies to the dl3 model only");
        return EXIT_INPUT;
    }
    emit(&file.to_json(), dest, out, err)
}

fn emit(json: &str, dest: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dest {
        Some(p) => {
            if write_file(p, json, err) {
                EXIT_OK
            } else {
                EXIT_INPUT
            }
        }
        None => match out.write_all(json.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_INPUT
            }
        },
    }
}

pub fn cmd_spcheck(
    path: &Path,
    primes: &[u64],
    target: Option<Target>,
    cap: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(loaded) = load(path, err) else { return EXIT_INPUT };
    let fiber = loaded.data.fiber();
    let target = target.unwrap_or(if fiber.boundary_components == 0 { Target::Closed } else { Target::Weinstein });
    let model = match target {
        Target::Closed if fiber.boundary_components == 0 => TargetModel::closed_pencil(fiber.genus),
        Target::Weinstein if fiber.boundary_components == 1 => TargetModel::weinstein_dl3(fiber.genus),
        _ => Err(Error::WrongFiber(format!("fiber {fiber} does not match the {target:?} target"))),
    };
    let report = match model.and_then(|m| flexibility_witness(&m, primes, cap)) {
        Ok(r) => r,
        Err(e) => return rejected(&e, err),
    };
    let _ = write!(out, "{report}");
    if report.all_full() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

pub fn cmd_hurwitz(
    path: &Path,
    index: usize,
    dir: Direction,
    dest: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(loaded) = load(path, err) else { return EXIT_INPUT };
    let moved = match loaded.data.hurwitz_move(index, dir) {
        Ok(lf) => lf,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            return EXIT_INPUT;
        }
    };
    let file = FibrationFile::from_data(&moved, loaded.file.system.clone(), loaded.file.words.clone());
    emit(&file.to_json(), dest, out, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("lefschetz").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&[]).0, EXIT_INPUT);
        assert_eq!(run_args(&["bogus"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["plan", "x.json"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn reference_parses() {
        assert_eq!(parse_class("0, 1,-2,0").unwrap(), HomologyClass::from_i64s(&[0, 1, -2, 0]).unwrap());
        assert!(parse_class("1,0,0").is_err());
        assert!(parse_class("1,x").is_err());
    }

    #[test]
    fn models_to_stdout() {
        let (code, out, _) = run_args(&["models", "torus22"]);
        assert_eq!(code, EXIT_OK);
        let l = parse_fibration(&out).unwrap();
        assert_eq!(l.data, torus22_model());

        assert_eq!(run_args(&["models", "dl3"]).0, EXIT_INPUT);
        let (code, _, err) = run_args(&["models", "dl3", "--genus", "1"]);
        assert_eq!(code, EXIT_REJECTED);
        assert!(err.contains("unsupported-genus"));
        assert_eq!(run_args(&["models", "torus22", "--genus", "3"]).0, EXIT_INPUT);
    }
}
