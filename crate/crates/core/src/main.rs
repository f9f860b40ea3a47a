use clap::{Args, Parser, Subcommand};
use planar_emulator::assemble::{Emulator, EmulatorJson};
use planar_emulator::bench::{run_bench, write_csv, BenchSpec};
use planar_emulator::generate::{generate, InstanceSpec, Kind};
use planar_emulator::instance::{instance_to_json, parse_instance};
use planar_emulator::oneface::{emulator_from_targets, TargetsJson};
use planar_emulator::pipeline::{build, Artifact, BuildConfig};
use planar_emulator::verify::verify_emulator;
use planar_emulator::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "emulator", version, about = "Exact planar emulators for terminals on few faces")]
struct Cli {
    /// One JSON object per log event on stderr.
    #[arg(long, global = true)]
    json_logs: bool,
    /// Log filter, e.g. `info` or `planar_emulator=debug`.
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Io {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Runs every stage and writes the emulator.
    Build {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        audit_every: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        lp_cap: Option<u64>,
        /// Also write build statistics here.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Instance to artifact with the simplified arrangement.
    Preprocess {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Critical paths and their pairing.
    Critical {
        #[command(flatten)]
        io: Io,
    },
    /// Initial arrangement plus bad-pair elimination.
    Skeleton {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        audit_every: u64,
    },
    /// Solves the skeleton LP and stores the weighted skeleton.
    Weights {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        lp_cap: Option<u64>,
        /// Where to write the certificate if the LP is infeasible.
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// Adds the one-face parts to an artifact, or with `--targets` builds a
    /// single quarter-grid emulator.
    Oneface {
        #[arg(long = "in", required_unless_present = "targets", conflicts_with = "targets")]
        input: Option<PathBuf>,
        #[arg(long)]
        targets: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Artifact to emulator.
    Glue {
        #[command(flatten)]
        io: Io,
    },
    /// Compares terminal distances; exits 1 on any mismatch.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        emulator: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Builds, verifies and sizes every instance of a spec; writes CSV.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes a generated instance.
    Gen {
        /// Instance spec JSON; overrides the flags below.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "grid-ring")]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        f: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum KindArg {
    GridRing,
    RandomPlanar,
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: malformed JSON: {e}", path.display())))
}

fn write<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

fn stage(io: &Io, f: impl FnOnce(&mut Artifact) -> Result<()>) -> Result<ExitCode> {
    let mut a: Artifact = read(&io.input)?;
    f(&mut a)?;
    write(&io.out, &a)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Build { io, seed, audit_every, lp_cap, stats } => {
            let inst = parse_instance(&std::fs::read_to_string(&io.input)?)?;
            let cfg = BuildConfig { seed, audit_every: audit_every as usize, lp_cap: lp_cap.map(|c| c as usize) };
            let built = build(&inst, &cfg)?;
            write(&io.out, &built.emulator.to_json())?;
            if let Some(p) = stats {
                write(&p, &built.stats)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Preprocess { io, seed } => {
            let inst = parse_instance(&std::fs::read_to_string(&io.input)?)?;
            let mut a = Artifact::new(&inst, seed);
            a.preprocess()?;
            write(&io.out, &a)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Critical { io } => stage(&io, |a| a.critical()),
        Cmd::Skeleton { io, audit_every } => stage(&io, |a| a.skeleton(audit_every as usize)),
        Cmd::Weights { io, lp_cap, emit_certificate } => stage(&io, |a| {
            let r = a.weights(lp_cap.map(|c| c as usize));
            if let (Err(Error::Infeasible(cert)), Some(p)) = (&r, &emit_certificate) {
                write(p, cert.as_ref())?;
            }
            r
        }),
        Cmd::Oneface { input: Some(input), out, .. } => stage(&Io { input, out }, |a| a.oneface()),
        Cmd::Oneface { targets, out, .. } => {
            let t: TargetsJson = read(&targets.expect("clap requires --in or --targets"))?;
            write(&out, &emulator_from_targets(&t)?.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Glue { io } => {
            let mut a: Artifact = read(&io.input)?;
            a.glue()?;
            write(&io.out, a.emulator.as_ref().expect("glue sets the emulator"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { instance, emulator, report } => {
            let inst = parse_instance(&std::fs::read_to_string(&instance)?)?;
            let h: EmulatorJson = read(&emulator)?;
            let rep = verify_emulator(&inst, &Emulator::from_json(&h)?)?;
            if let Some(p) = report {
                write(&p, &rep)?;
            }
            let bad = rep.mismatches();
            println!(
                "{} pairs, {} mismatched, planar: {}, |V(G)| = {}, |V(H)| = {}",
                rep.pairs.len(),
                bad.len(),
                rep.planar,
                rep.n_g,
                rep.n_h
            );
            Ok(if rep.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Bench { spec, out } => {
            let spec: BenchSpec = read(&spec)?;
            let rows = run_bench(&spec.instances())?;
            write_csv(&rows, std::fs::File::create(&out)?)?;
            Ok(if rows.iter().all(|r| r.exact) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Gen { spec, kind, f, k, seed, out } => {
            let spec = match spec {
                Some(p) => read(&p)?,
                None => {
                    let kind = match kind {
                        KindArg::GridRing => Kind::GridRing,
                        KindArg::RandomPlanar => Kind::RandomPlanar,
                    };
                    InstanceSpec::new(kind, f, k, seed)
                }
            };
            write(&out, &instance_to_json(&generate(&spec)?))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn init_logs(json: bool, filter: &str) {
    let mut b = env_logger::Builder::new();
    b.parse_filters(filter);
    if json {
        b.format(|buf, r| {
            let event = serde_json::json!({
                "ts": buf.timestamp().to_string(),
                "level": r.level().as_str(),
                "target": r.target(),
                "msg": r.args().to_string(),
            });
            writeln!(buf, "{event}")
        });
    }
    b.init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logs(cli.json_logs, &cli.log_level);
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            let mut body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            if let Error::Infeasible(cert) = &e {
                body["certificate"] = serde_json::to_value(cert.as_ref()).unwrap_or_default();
            }
            eprintln!("{body}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
