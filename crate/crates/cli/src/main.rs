use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use facepair::analysis::{analyze, contract, AnalysisError, AnalysisReport, ContractStrategy};
use facepair::complex::FacePairingScheme;
use facepair::fuzz::run_campaign;
use facepair::gallery::{gen_lens, gen_platonic_space, gen_random, gen_trivial_sphere, PlatonicKind, Solid};
use facepair::quotient::gamma_graph;

#[derive(Parser)]
#[command(name = "fq", version, about = "Analyze polyhedra with faces identified in pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report of a scheme file.
    Analyze {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Write a gallery scheme as JSON.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Contract the quotient along the non-flat tree or listed edges and
    /// report the result.
    Contract {
        path: PathBuf,
        /// Comma-separated quotient edge ids to contract one at a time.
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Export the graph of non-flat edges in DOT format.
    Gamma {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random gluings of a solid, checked against the structural claims.
    Fuzz {
        #[arg(long, value_parser = parse_solid)]
        base: Solid,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for summary.json, runs.csv and violating schemes.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Lens {
        q: usize,
        p: usize,
    },
    TrivialSphere {
        n: usize,
    },
    Platonic {
        #[arg(value_parser = parse_space)]
        space: PlatonicKind,
    },
    Random {
        #[arg(long, value_parser = parse_solid)]
        base: Solid,
        #[arg(long)]
        seed: u64,
    },
}

fn parse_solid(s: &str) -> Result<Solid, String> {
    s.parse().map_err(|e: facepair::gallery::GalleryError| e.to_string())
}

fn parse_space(s: &str) -> Result<PlatonicKind, String> {
    s.parse().map_err(|e: facepair::gallery::GalleryError| e.to_string())
}

enum Failure {
    /// Bad input: unreadable scheme, invalid scheme, bad parameters.
    Input(String),
    /// An internal consistency check failed.
    Internal(String),
    Io(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Postcondition(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn deterministic() -> bool {
    std::env::var("FQ_DETERMINISTIC").is_ok_and(|v| v == "1")
}

fn read_scheme(path: &Path) -> Result<FacePairingScheme, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    FacePairingScheme::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { path, out, format } => {
            let report = analyze(&read_scheme(&path)?)?;
            emit(out.as_deref(), &render(&report, format))
        }
        Command::Gen { kind, out } => {
            let scheme = match kind {
                GenKind::Lens { q, p } => gen_lens(q, p),
                GenKind::TrivialSphere { n } => gen_trivial_sphere(n),
                GenKind::Platonic { space } => Ok(gen_platonic_space(space)),
                GenKind::Random { base, seed } => gen_random(base, seed),
            }
            .map_err(|e| Failure::Input(e.to_string()))?;
            emit(out.as_deref(), &(scheme.to_json() + "\n"))
        }
        Command::Contract { path, edges, out, format } => {
            let strategy = edges.map_or(ContractStrategy::GammaTree, ContractStrategy::Edges);
            let report = contract(&read_scheme(&path)?, &strategy)?;
            emit(out.as_deref(), &render(&report, format))
        }
        Command::Gamma { path, out } => {
            let scheme = read_scheme(&path)?;
            let validation = facepair::validate(&scheme);
            if !validation.is_valid() {
                return Err(Failure::Input(format!("invalid scheme: {}", validation.errors.join("; "))));
            }
            emit(out.as_deref(), &gamma_graph(&scheme).to_dot())
        }
        Command::Fuzz { base, count, seed, out, format } => {
            let outcome = run_campaign(base, seed, count, !deterministic());
            if let Some(dir) = &out {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                fs::write(dir.join("summary.json"), outcome.summary_json()).context("writing summary.json")?;
                fs::write(dir.join("runs.csv"), outcome.runs_csv()).context("writing runs.csv")?;
                for (v, scheme) in &outcome.witnesses {
                    let name = format!("violation_{}_{}_{}.json", v.kind.name(), base.name(), v.seed);
                    fs::write(dir.join(&name), scheme.to_json() + "\n").with_context(|| format!("writing {name}"))?;
                }
            }
            let s = &outcome.summary;
            let text = match format {
                Format::Json => outcome.summary_json(),
                Format::Text => {
                    let counts: Vec<String> = s.violation_counts.iter().map(|(k, n)| format!("{k}={n}")).collect();
                    format!(
                        "{} seeds {}..{} on {}: {} manifolds ({} flat), euler characteristics {:?}, violations: {}\n",
                        s.count,
                        s.seed0,
                        s.seed0 + s.count - 1,
                        base.name(),
                        s.manifolds,
                        s.flat_manifolds,
                        s.euler_histogram,
                        counts.join(" ")
                    )
                }
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("fq: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("fq: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("fq: {e:#}");
            ExitCode::from(1)
        }
    }
}
