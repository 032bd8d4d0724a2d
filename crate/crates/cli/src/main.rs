//! `lpbounds` command-line front end.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lpbounds::Error;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser, Serialize)]
#[command(name = "lpbounds", version, about = "Linear programming bounds for packings, codes and energies")]
pub struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (table and five-point only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Polynomial degree of auxiliary functions (or the degree cap for design checks).
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// LP sample grid size.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Tolerance: Poisson agreement, or the gradient tolerance of `minimize`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Lattice constructions and invariants.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Integer relation search by LLL.
    Relation(RelationArgs),
    /// Check Poisson summation on a lattice.
    Poisson(PoissonArgs),
    /// Optimize or verify an LP bound.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Exact kissing bound in dimension 8 or 24.
    Kissing(DimensionArgs),
    /// Density bounds next to the best known lattices.
    Table(TableArgs),
    /// Local energy minimization on the sphere.
    Minimize(MinimizeArgs),
    /// Five points on S^2 under Riesz potentials.
    FivePoint(FivePointArgs),
    /// Greedy saturated packing in a cubic torus.
    Saturate(SaturateArgs),
    /// Spherical design strength of a code.
    Design(CodeSource),
    /// Spherical code inspection.
    #[command(subcommand)]
    Code(CodeCommand),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeCommand {
    /// Dimension, covolume, Gram determinant and parity.
    Info(LatticeSource),
    /// Shortest nonzero vectors.
    Svp(SvpArgs),
    /// Packing density.
    Density(LatticeSource),
    /// Dual lattice.
    Dual(LatticeSource),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCommand {
    /// Code-size bound for a minimal angle.
    Code(CodeBoundArgs),
    /// Energy bound for N points.
    Energy(EnergyBoundArgs),
    /// Sphere packing density bound in R^n.
    Euclid(EuclidArgs),
    /// Bound from the convolution of two half-radius balls.
    Trivial(DimensionArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeCommand {
    /// Size, minimal angle, distance distribution, design strength.
    Info(CodeInfoArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeSource {
    /// Built-in lattice: zN, dN, aN, e6, e7, e8, leech.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub name: Option<String>,
    /// Basis file, one row per line.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SvpArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeSource,
    /// Count all vectors with squared norm up to this bound.
    #[arg(long)]
    pub bound: Option<f64>,
    /// Include the vectors in the output.
    #[arg(long)]
    pub vectors: bool,
    /// Enumeration nodes before giving up.
    #[arg(long, default_value_t = 1_000_000_000)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct RelationArgs {
    /// Search among powers 1, x, ..., x^degree of this number.
    #[arg(long, conflicts_with = "values", required_unless_present = "values")]
    pub alpha: Option<String>,
    /// Comma-separated numbers to relate.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<String>>,
    /// Scale applied to the numbers before rounding.
    #[arg(long, default_value = "1e20")]
    pub scale: String,
    /// Largest number of digits accepted in a coefficient.
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PoissonArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeSource,
    /// Width w of the Gaussian exp(-pi w |x|^2).
    #[arg(long, default_value_t = 1.0, conflicts_with = "function")]
    pub width: f64,
    /// Radial function JSON file instead of a Gaussian.
    #[arg(long)]
    pub function: Option<PathBuf>,
    /// Also check the two-translate periodic sum for this shift.
    #[arg(long, value_delimiter = ',')]
    pub shift: Option<Vec<f64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct DimensionArgs {
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CodeBoundArgs {
    #[arg(long, required_unless_present = "cert")]
    pub n: Option<usize>,
    /// Minimal angle in degrees.
    #[arg(long, conflicts_with = "cos")]
    pub angle: Option<f64>,
    /// Cosine of the minimal angle.
    #[arg(long)]
    pub cos: Option<f64>,
    /// Verify this certificate instead of optimizing.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Also write the certificate here.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EnergyBoundArgs {
    #[arg(long, required_unless_present = "cert")]
    pub n: Option<usize>,
    /// Number of points.
    #[arg(long)]
    pub count: usize,
    /// coulomb, riesz:S or gaussian:C.
    #[arg(long, default_value = "coulomb")]
    pub potential: String,
    /// Verify this certificate instead of optimizing.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Also write the certificate here.
    #[arg(long)]
    pub save: Option<PathBuf>,
    /// Compare against a code file and report sharpness.
    #[arg(long)]
    pub code: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EuclidArgs {
    #[arg(long, required_unless_present = "function")]
    pub n: Option<usize>,
    /// Verify this radial function instead of optimizing.
    #[arg(long)]
    pub function: Option<PathBuf>,
    /// Also write the radial function here.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8")]
    pub dims: Vec<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct MinimizeArgs {
    #[arg(long)]
    pub n: usize,
    /// Number of points.
    #[arg(long)]
    pub count: usize,
    /// coulomb, riesz:S or gaussian:C.
    #[arg(long, default_value = "coulomb")]
    pub potential: String,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 20000)]
    pub max_iterations: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct FivePointArgs {
    /// Comma-separated Riesz exponents.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,6,8,10,12,14,16,18,20,25,30")]
    pub s: Vec<f64>,
    /// Bracket searched for the exponent where the winner changes.
    #[arg(long, value_delimiter = ',', default_value = "1,30", num_args = 1)]
    pub bracket: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SaturateArgs {
    #[arg(long)]
    pub n: usize,
    /// Torus edge length (balls have radius 1).
    #[arg(long)]
    pub edge: f64,
    /// Failed random insertions before switching to the grid pass.
    #[arg(long, default_value_t = 5000)]
    pub patience: usize,
    /// Largest free radius beyond 2 tolerated by the final probe.
    #[arg(long, default_value_t = 0.05)]
    pub slack: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CodeSource {
    /// Built-in code, e.g. icosahedron, e8, leech, simplex:N:COUNT, polygon:COUNT.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub name: Option<String>,
    /// Point file, one point per line.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CodeInfoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub code: CodeSource,
    /// Also report the energy under this potential.
    #[arg(long)]
    pub potential: Option<String>,
}

/// Failures of a command, mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or inputs (exit 2).
    Input(String),
    /// A certificate or identity failed to check (exit 3).
    Verification(String),
    /// A budget was exhausted (exit 4).
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Verification(_) => 3,
            Self::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Input(m) | Self::Verification(m) | Self::Resource(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::UnknownName(_) | Error::Capability(_) => Self::Input(msg),
            Error::InvalidCertificate { .. } | Error::InvalidFunction { .. } | Error::Lp(_) => Self::Verification(msg),
            Error::Resource { .. } | Error::Precision(_) => Self::Resource(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Input(e.to_string())
    }
}

/// What a command produced.
pub enum Output {
    /// A JSON object; `passed = false` means a check failed after the result was computed.
    Json { value: Value, passed: bool },
    /// Tabular data, written as CSV or as a JSON array of rows.
    Table { header: &'static str, rows: Vec<String>, json: Value },
}

#[derive(Serialize)]
struct RunManifest<'a> {
    subcommand: String,
    params: &'a Cli,
    seed: u64,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

fn subcommand_name(c: &Command) -> String {
    let name = match c {
        Command::Lattice(l) => match l {
            LatticeCommand::Info(_) => "lattice info",
            LatticeCommand::Svp(_) => "lattice svp",
            LatticeCommand::Density(_) => "lattice density",
            LatticeCommand::Dual(_) => "lattice dual",
        },
        Command::Relation(_) => "relation",
        Command::Poisson(_) => "poisson",
        Command::Bound(b) => match b {
            BoundCommand::Code(_) => "bound code",
            BoundCommand::Energy(_) => "bound energy",
            BoundCommand::Euclid(_) => "bound euclid",
            BoundCommand::Trivial(_) => "bound trivial",
        },
        Command::Kissing(_) => "kissing",
        Command::Table(_) => "table",
        Command::Minimize(_) => "minimize",
        Command::FivePoint(_) => "five-point",
        Command::Saturate(_) => "saturate",
        Command::Design(_) => "design",
        Command::Code(CodeCommand::Info(_)) => "code info",
    };
    name.to_string()
}

fn render(cli: &Cli, out: Output, manifest: &RunManifest) -> Result<(String, bool), Failure> {
    let manifest = serde_json::to_value(manifest).expect("manifest serializes");
    let (mut value, passed) = match out {
        Output::Table { header, rows, .. } if cli.csv => {
            let mut s = String::from(header);
            s.push('\n');
            for r in rows {
                s.push_str(&r);
                s.push('\n');
            }
            return Ok((s, true));
        }
        Output::Table { json, .. } => (json, true),
        Output::Json { .. } if cli.csv => {
            return Err(Failure::Input(format!(
                "--csv is only available for table and five-point, not {}",
                subcommand_name(&cli.command)
            )))
        }
        Output::Json { value, passed } => (value, passed),
    };
    match value.as_object_mut() {
        Some(obj) => {
            obj.insert("manifest".into(), manifest);
        }
        None => value = json!({ "result": value, "manifest": manifest }),
    }
    let mut s = serde_json::to_string_pretty(&value).expect("output serializes");
    s.push('\n');
    Ok((s, passed))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Input("--threads must be at least 1".into()));
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let start = Instant::now();
    let output = commands::dispatch(cli)?;
    let mut manifest = RunManifest {
        subcommand: subcommand_name(&cli.command),
        params: cli,
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: None,
    };
    let (text, passed) = render(cli, output, &manifest)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    manifest.wall_time_s = Some(start.elapsed().as_secs_f64());
    eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes"));
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification("check failed; see the output".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
