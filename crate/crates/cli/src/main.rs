use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use finsub::constructions::MAP_NAMES;
use finsub::homology::induced_map;
use finsub::homology::ring::Coefficients;
use finsub::space::BUILTIN_NAMES;
use finsub::sset::cell_cap;
use finsub::verify::{run_suite, Construction, Recipe, SpaceRef, CONSTRUCTION_NAMES};
use finsub::Error;

#[derive(Parser)]
#[command(name = "finsub", version, about = "Homology of symmetric products and finite subset spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in spaces, surfaces, constructions and map names.
    Spaces,
    /// Integral or mod-p homology of a construction.
    Homology {
        /// `builtin:<name>`, `surface:<name>` or a path to a JSON file.
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "space")]
        construction: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// `z` for the integers, `f<p>` or `<p>` for a prime field.
        #[arg(long, default_value = "z")]
        coeff: String,
        /// Highest simplicial level to build.
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Matrix of a named map on integral homology.
    Map {
        #[arg(long)]
        name: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        degree: usize,
        /// Defaults to the construction that carries the map.
        #[arg(long)]
        construction: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run a verification suite: `paper`, `stretch`, `all`, `selftest` or
    /// a case id glob.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_space(s: &str) -> Result<SpaceRef> {
    if s.starts_with("builtin:") || s.starts_with("surface:") {
        return Ok(SpaceRef::parse(s)?);
    }
    let path = Path::new(s);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SpaceRef::from_json(&text)?)
}

fn parse_coeff(s: &str) -> Result<Coefficients> {
    let s = s.to_ascii_lowercase();
    if s == "z" {
        return Ok(Coefficients::Integers);
    }
    let digits = s.strip_prefix('f').unwrap_or(&s);
    let p: u64 = digits.parse().with_context(|| format!("bad coefficients `{s}`"))?;
    Ok(Coefficients::Mod(p))
}

fn recipe(space: &str, construction: Construction, n: usize, truncation: Option<usize>) -> Result<Recipe> {
    Ok(Recipe {
        space: parse_space(space)?,
        construction,
        n,
        coeff: Coefficients::Integers,
        truncation,
    })
}

fn spaces() {
    println!("built-in spaces (builtin:<name>):");
    for name in BUILTIN_NAMES {
        println!("  {name}");
    }
    println!("surfaces (surface:<name>, sp only):");
    for name in ["sphere", "torus", "rp2", "genus<g>", "nonorientable<k>"] {
        println!("  {name}");
    }
    println!("constructions: {}", CONSTRUCTION_NAMES.join(", "));
    println!("maps: {}", MAP_NAMES.join(", "));
}

fn homology_command(
    space: &str,
    construction: &str,
    n: usize,
    coeff: &str,
    truncation: Option<usize>,
    emit: Emit,
) -> Result<()> {
    let mut r = recipe(space, construction.parse()?, n, truncation)?;
    r.coeff = parse_coeff(coeff)?;
    let computed = r.homology(cell_cap()).map_err(|e| match e {
        Error::CellCap { .. } => anyhow!("{e}; lower --truncation or raise FINSUB_CELL_CAP"),
        e => e.into(),
    })?;
    match emit {
        Emit::Json => {
            let certified: Vec<_> = computed.groups.iter().take_while(|g| g.reliable).collect();
            println!("{}", serde_json::to_string_pretty(&certified)?);
        }
        Emit::Table => {
            println!("{r}");
            if !computed.cells.is_empty() {
                println!("cells per level: {:?}", computed.cells);
            }
            for g in &computed.groups {
                let note = if g.reliable { "" } else { "  (truncated, not certified)" };
                let group = match r.coeff {
                    Coefficients::Integers => g.to_string(),
                    Coefficients::Mod(p) => match g.betti {
                        0 => "0".to_string(),
                        1 => format!("F{p}"),
                        b => format!("F{p}^{b}"),
                    },
                };
                println!("  H_{:<2} = {group}{note}", g.dim);
            }
        }
    }
    Ok(())
}

fn carrier(name: &str) -> Result<(Construction, usize)> {
    Ok(match name {
        "q" | "j_n" | "diag" => (Construction::Sp, 2),
        "pi" | "j" | "j_x0" | "incl_sub" => (Construction::Sub, 3),
        "incl_fat" => (Construction::Fat, 2),
        "alpha" => (Construction::Based3, 3),
        "proj" => (Construction::BarSub, 2),
        _ => bail!("unknown map `{name}` (expected one of {})", MAP_NAMES.join(", ")),
    })
}

fn map_command(name: &str, space: &str, degree: usize, construction: Option<&str>, n: Option<usize>) -> Result<()> {
    let (default_construction, default_n) = carrier(name)?;
    let construction = match construction {
        Some(c) => c.parse()?,
        None => default_construction,
    };
    let r = recipe(space, construction, n.unwrap_or(default_n), Some(degree + 1))?;
    let built = r.build_with(cell_cap(), true)?;
    let m = induced_map(built.map(name)?, degree)?;
    let mut out = m.to_json();
    out["map"] = json!(name);
    out["recipe"] = json!(r.to_string());
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn verify_command(suite: &str, jobs: usize, emit: Emit) -> Result<bool> {
    let report = run_suite(suite, jobs)?;
    match emit {
        Emit::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Emit::Table => print!("{}", report.table()),
    }
    Ok(report.success)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spaces => spaces(),
        Command::Homology {
            space,
            construction,
            n,
            coeff,
            truncation,
            emit,
        } => homology_command(&space, &construction, n, &coeff, truncation, emit)?,
        Command::Map {
            name,
            space,
            degree,
            construction,
            n,
        } => map_command(&name, &space, degree, construction.as_deref(), n)?,
        Command::Verify { suite, jobs, emit } => return verify_command(&suite, jobs, emit),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
