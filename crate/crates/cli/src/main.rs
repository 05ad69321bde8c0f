use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wrapcycle::pipeline::{
    circle_sample, compute_barcode, export, load_points, reconstruct, sphere_sample, verify_theorems, InputFormat,
    IntervalRecord, RGrid, ReconstructOptions,
};
use wrapcycle::{Error, Field, PointCloud};

#[derive(Parser)]
#[command(
    name = "wrapcycle",
    version,
    about = "Surface and loop reconstruction from Delaunay persistence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct the most persistent feature and export meshes and reports.
    Reconstruct {
        #[command(flatten)]
        input: InputArgs,
        /// Homology dimension; defaults to one less than the ambient dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Output directory.
        #[arg(long, env = "WRAPCYCLE_OUT", default_value = "wrapcycle-out")]
        out: PathBuf,
    },
    /// Check Wrap containment of minimal cycles and reduced columns.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// `auto` for every radius value, or comma-separated radii.
        #[arg(long, default_value = "auto", value_parser = parse_grid)]
        r_grid: RGrid,
    },
    /// Print the barcode as JSON.
    Barcode {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print a built-in sample as XYZ.
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
        /// Number of points (sphere only).
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Circle,
    Sphere,
}

#[derive(Args)]
struct InputArgs {
    /// Point file (XYZ, CSV or OFF).
    path: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<InputFormat>,
    /// Prime modulus of the coefficient field.
    #[arg(long, default_value_t = 2, value_parser = parse_field)]
    field: u32,
    /// Apply the deterministic symbolic perturbation.
    #[arg(long)]
    perturb: bool,
}

impl InputArgs {
    fn load(&self) -> Result<PointCloud, Error> {
        let fmt = self.format.unwrap_or_else(|| InputFormat::from_path(&self.path));
        load_points(&self.path, fmt)
    }

    fn field(&self) -> Field {
        Field::new(self.field).expect("validated by the parser")
    }
}

fn parse_format(s: &str) -> Result<InputFormat, String> {
    s.parse().map_err(|_| format!("expected xyz, csv or off, got {s:?}"))
}

fn parse_field(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    Field::new(p).map(|_| p).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<RGrid, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(RGrid::Auto);
    }
    s.split(',')
        .map(|t| match t.trim().parse::<f64>() {
            Ok(r) if r.is_finite() && r >= 0.0 => Ok(r),
            _ => Err(format!("{t:?} is not a non-negative radius")),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RGrid::Radii)
}

const EXIT_DATA: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_internal() { EXIT_INTERNAL } else { EXIT_DATA })
}

fn print_json<T: serde::Serialize + ?Sized>(v: &T) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn run_reconstruct(input: &InputArgs, dim: Option<usize>, out: &Path) -> Result<(), Error> {
    let cloud = input.load()?;
    let opts = ReconstructOptions {
        dim,
        field: input.field(),
        perturb: input.perturb,
    };
    let rec = reconstruct(&cloud, &opts)?;
    export(&rec, out)?;
    let iv = &rec.report.interval;
    println!(
        "dim {} interval [{}, {}) ratio {:.4}: {} cycle simplices, wrap has {} simplices",
        iv.interval.dim,
        iv.interval.birth,
        iv.interval.death.unwrap_or(f64::INFINITY),
        iv.ratio,
        rec.report.cycle.len(),
        rec.report.wrap_at_birth.simplices.len(),
    );
    if let Some(w) = rec.report.watertight {
        println!("watertight: {w}");
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn run_verify(input: &InputArgs, grid: &RGrid) -> Result<bool, Error> {
    let report = verify_theorems(&input.load()?, grid, input.field(), input.perturb)?;
    print_json(&report)?;
    let total = report.total();
    eprintln!("{} checks passed, {} failed", total.passed, total.failed);
    Ok(report.is_success())
}

fn run_barcode(input: &InputArgs) -> Result<(), Error> {
    let bars = compute_barcode(&input.load()?, input.field(), input.perturb)?;
    let records: Vec<IntervalRecord> = bars.iter().map(IntervalRecord::from).collect();
    print_json(&records)
}

fn run_sample(kind: SampleKind, n: usize, seed: u64) -> Result<(), Error> {
    let cloud = match kind {
        SampleKind::Circle => circle_sample()?,
        SampleKind::Sphere => sphere_sample(n, seed)?,
    };
    let mut out = std::io::stdout().lock();
    for i in 0..cloud.len() {
        let coords: Vec<String> = cloud.input_point(i).iter().map(f64::to_string).collect();
        writeln!(out, "{}", coords.join(" "))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    let result = match &cli.command {
        Command::Reconstruct { input, dim, out } => run_reconstruct(input, *dim, out),
        Command::Verify { input, r_grid } => match run_verify(input, r_grid) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(EXIT_INTERNAL),
            Err(e) => Err(e),
        },
        Command::Barcode { input } => run_barcode(input),
        Command::Sample { kind, n, seed } => run_sample(*kind, *n, *seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
