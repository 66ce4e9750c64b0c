use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dwsurgery::complexes::{builtin, mapping_torus, mcg_matrix, DeltaComplex};
use dwsurgery::model::Model;
use dwsurgery::report::{data2d_report, data3d_report, verify_report, Report};
use dwsurgery::statesum::{gsd, partition_function, partition_with_charge_lines, ChargeLine};
use dwsurgery::surgery_verify::verify_model;
use dwsurgery::Error;

#[derive(Parser, Debug)]
#[command(name = "dwsurgery", version, about = "Exact Dijkgraaf-Witten data and quantum-surgery checks")]
struct Cli {
    /// Worker threads for parallel sweeps (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest group order accepted (overrides DWSURGERY_GROUP_CAP).
    #[arg(long, global = true)]
    group_cap: Option<usize>,
    /// Largest state-sum enumeration accepted (overrides DWSURGERY_ENUM_CAP).
    #[arg(long, global = true)]
    enum_cap: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a triangulation file.
    Build {
        /// Builtin complex name (S1, S2, T3, S2xS1, ...).
        #[arg(long)]
        complex: String,
        /// Take the mapping torus of this generator (Sxy, Txy, Sxyz, id) on the complex, which must be a torus.
        #[arg(long)]
        mapping_torus: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Labels, S, T, N and Borromean table of a 2+1D model.
    Compute2d(ComputeArgs),
    /// Fusion, S^xyz, T^xy and link data of a 3+1D model.
    Compute3d(ComputeArgs),
    /// Partition function of a complex, optionally with charge lines.
    Statesum {
        #[arg(long)]
        model: PathBuf,
        /// Builtin name or path to a triangulation file.
        #[arg(long)]
        complex: String,
        /// Charge-line file: one `charge : edge± edge± ...` per line.
        #[arg(long)]
        lines: Option<PathBuf>,
        #[arg(long)]
        approx: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ground-state degeneracy Z(Y x S1).
    Gsd {
        #[arg(long)]
        model: PathBuf,
        /// Spatial manifold Y, a builtin complex name.
        #[arg(long)]
        space: String,
    },
    /// Run the surgery checks on a model.
    Verify {
        #[arg(long)]
        model: PathBuf,
        /// Report only this check.
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[arg(long)]
    model: PathBuf,
    /// Add a float column next to every exact value.
    #[arg(long)]
    approx: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Verification,
    Core(Error),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Core(Error::CapExceeded { .. }) => 3,
            Failure::Core(
                Error::Parse(_) | Error::UnknownName(_) | Error::Io(_) | Error::Degree(_) | Error::Construction(_),
            ) => 2,
            Failure::Core(_) => 1,
            Failure::Other(_) => 2,
        }
    }
}

fn load_model(path: &Path) -> Result<Model, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Other(anyhow::anyhow!("cannot read model {}: {e}", path.display())))?;
    Ok(Model::from_toml(&text)?)
}

fn load_complex(name: &str) -> Result<DeltaComplex, Failure> {
    if Path::new(name).is_file() {
        return Ok(DeltaComplex::load(&std::fs::read_to_string(name)?)?);
    }
    Ok(builtin(name)?)
}

fn parse_lines(text: &str) -> Result<Vec<ChargeLine>, Failure> {
    let bad = |l: &str| Failure::Core(Error::Parse(format!("bad charge line `{l}`")));
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (charge, path) = line.split_once(':').ok_or_else(|| bad(line))?;
        let charge = charge.trim().parse().map_err(|_| bad(line))?;
        let path = path
            .split_whitespace()
            .map(|t| {
                let (e, s) = t.split_at(t.len() - 1);
                let sign = match s {
                    "+" => 1,
                    "-" => -1,
                    _ => return Err(bad(line)),
                };
                Ok((e.parse().map_err(|_| bad(line))?, sign))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(ChargeLine { path, charge });
    }
    Ok(out)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Build { complex, mapping_torus: gen, out } => {
            let mut c = builtin(&complex)?;
            if let Some(gen) = gen {
                let name = format!("{complex}_{gen}");
                c = mapping_torus(&c, &mcg_matrix(&gen, c.dim())?)?.with_name(&name);
            }
            let v = c.validate();
            if !v.ok {
                return Err(Error::Construction(v.problems.join("; ")).into());
            }
            emit(&c.to_text(), out.as_deref())
        }
        Command::Compute2d(a) => emit(&data2d_report(&load_model(&a.model)?, a.approx)?, a.out.as_deref()),
        Command::Compute3d(a) => emit(&data3d_report(&load_model(&a.model)?, a.approx)?, a.out.as_deref()),
        Command::Statesum { model, complex, lines, approx, out } => {
            let m = load_model(&model)?;
            let c = load_complex(&complex)?;
            let z = match lines {
                Some(p) => partition_with_charge_lines(&c, &m, &parse_lines(&std::fs::read_to_string(p)?)?)?,
                None => partition_function(&c, &m)?,
            };
            let mut r = Report::new("statesum", &m, approx);
            r.section("statesum");
            r.text("complex", c.name());
            r.cyc("Z", &z);
            emit(&r.render(), out.as_deref())
        }
        Command::Gsd { model, space } => {
            println!("{}", gsd(&space, &load_model(&model)?)?);
            Ok(())
        }
        Command::Verify { model, check, out } => {
            let m = load_model(&model)?;
            let rep = verify_model(&m, check.as_deref())?;
            emit(&verify_report(&rep, &m), out.as_deref())?;
            if rep.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.group_cap == Some(0) || cli.enum_cap == Some(0) || cli.threads == Some(0) {
        eprintln!("error: caps and thread counts must be positive");
        return ExitCode::from(2);
    }
    // caps are read from the environment by the core crate
    if let Some(c) = cli.group_cap {
        std::env::set_var("DWSURGERY_GROUP_CAP", c.to_string());
    }
    if let Some(c) = cli.enum_cap {
        std::env::set_var("DWSURGERY_ENUM_CAP", c.to_string());
    }
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verification => eprintln!("verification failed"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Other(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
