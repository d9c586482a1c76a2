use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use stellar_core::group::{degree_upper_bound, PermutationAction};
use stellar_core::invariants::workflow::{classify_flat_quotient, h1, sphere_workflow};
use stellar_core::lens::{lens_structure, LensParams};
use stellar_core::manifold::check_manifold;
use stellar_core::moves::{
    collapse_greedy, prism, prism_via_subdivision, subdivide, weld, MoveSequence, DEFAULT_BUDGET,
};
use stellar_core::quotient::{quotient_complex, StellarStructure};
use stellar_core::structure::{build_structure, BuildOptions};
use stellar_core::{Complex, Simplex, Vertex};

const BUDGET_ENV: &str = "STELLAR_BUDGET";

#[derive(Parser)]
#[command(name = "stellar", version, about = "Stellar moves, stellar structures and their invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Euler characteristic of a complex.
    Chi { input: PathBuf },
    /// Mod-2 boundary of a complex.
    Boundary { input: PathBuf },
    /// Stellar subdivision of a face at a fresh vertex.
    Subdivide {
        input: PathBuf,
        #[arg(long, value_parser = parse_simplex)]
        simplex: Simplex,
        /// Defaults to one more than the largest label.
        #[arg(long)]
        vertex: Option<Vertex>,
    },
    /// Stellar weld, the inverse of a subdivision.
    Weld {
        input: PathBuf,
        #[arg(long, value_parser = parse_simplex)]
        simplex: Simplex,
        #[arg(long)]
        vertex: Vertex,
    },
    /// Apply a JSON array of moves.
    Apply { input: PathBuf, moves: PathBuf },
    /// Combinatorial prism K × I.
    Prism {
        input: PathBuf,
        /// Build it from subdivisions of a cone instead.
        #[arg(long)]
        via_subdivision: bool,
    },
    /// Check that every vertex link is a ball or a sphere.
    Check {
        input: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Build a stellar structure a★(S/≃) for a connected manifold.
    Structure {
        input: PathBuf,
        /// Write the move trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        budget: Option<usize>,
        /// Try this many randomly perturbed inputs and keep the smallest degree.
        #[arg(long)]
        search: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degree string of a closed structure.
    Degree { input: PathBuf },
    /// Graph of the edges of order > 2.
    Gamma {
        input: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Lens shell ℓ(q,p) as a structure.
    Lens {
        q: u32,
        p: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First integer homology of the quotient.
    H1 { input: PathBuf },
    /// Surface classification of the quotient.
    Classify { input: PathBuf },
    /// Structure, degree, homology and collapse evidence for a closed manifold.
    SphereCheck {
        input: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Greedy collapse through free faces.
    Collapse { input: PathBuf },
}

enum Failure {
    /// Unreadable or malformed input.
    Parse(String),
    Domain(stellar_core::Error),
}

impl From<stellar_core::Error> for Failure {
    fn from(e: stellar_core::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn parse_simplex(s: &str) -> std::result::Result<Simplex, String> {
    let trimmed = s.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| e.to_string());
    }
    let vs = trimmed
        .split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Vertex>().map_err(|e| format!("{t}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Simplex::new(vs).map_err(|e| e.to_string())
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
    }
}

fn read<T: DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn budget(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(BUDGET_ENV).ok()?.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Chi { input } => {
            let k: Complex = read(&input)?;
            Ok(json!({ "chi": k.euler_characteristic() }))
        }
        Command::Boundary { input } => {
            let k: Complex = read(&input)?;
            Ok(to_value(&k.boundary()?))
        }
        Command::Subdivide { input, simplex, vertex } => {
            let k: Complex = read(&input)?;
            let v = vertex.unwrap_or(k.max_label() + 1);
            Ok(to_value(&subdivide(&k, &simplex, v)?))
        }
        Command::Weld { input, simplex, vertex } => {
            let k: Complex = read(&input)?;
            Ok(to_value(&weld(&k, &simplex, vertex)?))
        }
        Command::Apply { input, moves } => {
            let k: Complex = read(&input)?;
            let seq: MoveSequence = read(&moves)?;
            Ok(to_value(&seq.apply(&k)?))
        }
        Command::Prism { input, via_subdivision } => {
            let k: Complex = read(&input)?;
            let p = if via_subdivision { prism_via_subdivision(&k)? } else { prism(&k)? };
            Ok(to_value(&p))
        }
        Command::Check { input, budget: b } => {
            let k: Complex = read(&input)?;
            Ok(to_value(&check_manifold(&k, budget(b))?))
        }
        Command::Structure { input, trace, budget: b, search, seed } => {
            let m: Complex = read(&input)?;
            let b = budget(b);
            let opts = BuildOptions { budget: b, manifold_budget: b, ..BuildOptions::default() };
            let (s, tr) = build_structure(&m, &opts)?;
            if let Some(path) = trace {
                write_file(&path, &(serde_json::to_string(&tr).expect("serializable") + "\n"))?;
            }
            match search {
                Some(rounds) if s.is_closed() => Ok(to_value(&degree_upper_bound(&m, rounds, seed, &opts)?.1)),
                _ => Ok(to_value(&s)),
            }
        }
        Command::Degree { input } => {
            let s: StellarStructure = read(&input)?;
            let action = PermutationAction::new(&s)?;
            let degree = action.degree()?;
            Ok(json!({ "degree": degree, "flat": degree.is_flat() }))
        }
        Command::Gamma { input, dot } => {
            let s: StellarStructure = read(&input)?;
            let g = PermutationAction::new(&s)?.gamma_graph()?;
            if let Some(path) = dot {
                write_file(&path, &g.to_dot())?;
            }
            let mut v = to_value(&g);
            v["has_circuit"] = json!(g.has_circuit());
            v["single_cycle"] = json!(g.is_single_cycle());
            Ok(v)
        }
        Command::Lens { q, p, out } => {
            let s = lens_structure(LensParams::new(q, p)?)?;
            let v = to_value(&s);
            match out {
                Some(path) => {
                    write_file(&path, &(v.to_string() + "\n"))?;
                    Ok(json!({ "written": path.display().to_string() }))
                }
                None => Ok(v),
            }
        }
        Command::H1 { input } => {
            let s: StellarStructure = read(&input)?;
            let h = h1(&quotient_complex(&s)?);
            let mut v = to_value(&h);
            v["group"] = json!(h.to_string());
            Ok(v)
        }
        Command::Classify { input } => {
            let s: StellarStructure = read(&input)?;
            let action = PermutationAction::new(&s)?;
            let flat = s.is_closed() && action.is_flat()?;
            let mut class = classify_flat_quotient(action.quotient());
            if !flat {
                class.diagnostics.push("structure is not flat".into());
            }
            let mut v = to_value(&class);
            v["flat"] = json!(flat);
            Ok(v)
        }
        Command::SphereCheck { input, budget: b } => {
            let m: Complex = read(&input)?;
            Ok(to_value(&sphere_workflow(&m, budget(b))?))
        }
        Command::Collapse { input } => {
            let k: Complex = read(&input)?;
            let residue = collapse_greedy(&k);
            let collapsible = residue.len() == 1 && residue.dim() == Some(0);
            Ok(json!({ "collapsible": collapsible, "residue": residue }))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (code, kind, message) = match run(cli.command) {
        Ok(v) => {
            let mut out = io::stdout().lock();
            let _ = writeln!(out, "{v}");
            return ExitCode::SUCCESS;
        }
        Err(Failure::Parse(msg)) => (2, "parse", msg),
        Err(Failure::Domain(e)) => (1, e.kind(), e.to_string()),
    };
    eprintln!("{}", json!({ "error": message, "kind": kind }));
    ExitCode::from(code)
}
