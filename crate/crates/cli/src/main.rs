use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use geosmooth::geometry::{point2, AdaptiveParams, Triangle};
use geosmooth::io::{
    generate, parse_seed, read_mesh, write_mesh, GeneratorKind, GeneratorSpec, MeshFormat,
};
use geosmooth::mesh::{detect_boundary, validate, Mesh, OrientationReference};
use geosmooth::ode::{compare_discrete_continuous, is_convergent, spectrum, write_comparison_csv};
use geosmooth::quality::{mesh_quality, QualityReport};
use geosmooth::smooth::{smart_laplace, smooth, Guard, SmootherConfig};
use geosmooth::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(
    name = "geosmooth",
    version,
    about = "Mesh smoothing by geometric element transformation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smooth a mesh and write the result.
    Smooth(SmoothArgs),
    /// Report element quality of a mesh.
    Quality {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write a generated test mesh.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 10)]
        resolution: usize,
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
        /// Decimal or 0x-prefixed hexadecimal.
        #[arg(long, default_value = "0")]
        seed: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write discrete iterates next to the continuous model as CSV.
    OdeCompare {
        /// x0,y0,x1,y1,x2,y2
        #[arg(long, allow_hyphen_values = true)]
        triangle: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Model time per discrete step.
        #[arg(long, default_value_t = 1.0)]
        time_scale: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the eigenvalues of the continuous model for given gains.
    Spectrum {
        #[arg(long)]
        alpha0: f64,
        #[arg(long)]
        alpha1: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SmootherKind {
    Getme,
    GetmeAdaptive,
    SmartLaplace,
}

#[derive(Clone, Copy, ValueEnum)]
enum GuardArg {
    Reset,
    None,
}

#[derive(clap::Args)]
struct SmoothArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "getme")]
    smoother: SmootherKind,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    inner: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    error_bound: Option<f64>,
    #[arg(long, value_enum, default_value = "reset")]
    guard: GuardArg,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Fix the topological boundary even if the file marks no vertex.
    #[arg(long)]
    detect_boundary: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) | Error::InvalidSpec(_) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Smooth(args) => run_smooth(args),
        Command::Quality { input, report } => {
            let m = read_mesh(&input)?;
            let r = mesh_quality(&m);
            print_summary("quality", &r);
            let bad = validate(&m, &OrientationReference::positive(&m));
            if !bad.is_empty() {
                println!("inverted or degenerate elements: {}", bad.len());
            }
            if let Some(path) = report {
                std::fs::write(path, r.to_json())?;
            }
            Ok(0)
        }
        Command::Generate {
            kind,
            resolution,
            jitter,
            seed,
            out,
        } => {
            let spec = GeneratorSpec::new(
                kind.parse::<GeneratorKind>()?,
                resolution,
                jitter,
                parse_seed(&seed)?,
            );
            let m = generate(&spec)?;
            write_mesh(&m, &out, MeshFormat::from_path(&out)?)?;
            println!(
                "{}: {} vertices, {} elements",
                spec.kind,
                m.num_vertices(),
                m.num_elements()
            );
            Ok(0)
        }
        Command::OdeCompare {
            triangle,
            steps,
            time_scale,
            out,
        } => {
            let t = parse_triangle(&triangle)?;
            let rows = compare_discrete_continuous(&t, steps, time_scale)?;
            write_comparison_csv(&rows, BufWriter::new(File::create(out)?))?;
            Ok(0)
        }
        Command::Spectrum { alpha0, alpha1 } => {
            let s = spectrum(alpha0, alpha1)?;
            println!("lambda0 = {}", s.lambda0);
            if s.discriminant >= 0.0 {
                println!("lambda1,2 = {} ± {}i", s.lambda12_real, s.lambda12_imag);
            } else {
                let d = 3f64.sqrt() * (-s.discriminant).sqrt() / 6.0;
                println!(
                    "lambda1,2 = {}, {}",
                    s.lambda12_real + d,
                    s.lambda12_real - d
                );
            }
            println!("real part = {}", s.lambda12_real);
            println!(
                "{}",
                if is_convergent(alpha0, alpha1) {
                    "convergent"
                } else {
                    "not convergent"
                }
            );
            Ok(0)
        }
    }
}

fn run_smooth(args: SmoothArgs) -> Result<u8, Error> {
    let mut m = read_mesh(&args.input)?;
    if args.detect_boundary {
        m.set_boundary(detect_boundary(&m)?)?;
    }
    let t = m.element_type();
    let mut cfg = match args.smoother {
        SmootherKind::GetmeAdaptive => SmootherConfig::adaptive(t),
        _ => SmootherConfig::standard(t),
    };
    if args.alpha0.is_some() || args.alpha1.is_some() {
        cfg.params = AdaptiveParams::new(
            args.alpha0.unwrap_or(cfg.params.alpha0()),
            args.alpha1.unwrap_or(cfg.params.alpha1()),
        )?;
    }
    if let Some(n) = args.inner {
        cfg.inner_iterations = n;
    }
    if let Some(n) = args.max_iter {
        cfg.max_iterations = n;
    }
    if let Some(e) = args.error_bound {
        cfg.error_bound = e;
    }
    cfg.guard = match args.guard {
        GuardArg::Reset => Guard::ResetElement,
        GuardArg::None => Guard::None,
    };
    let before = mesh_quality(&m);
    let result = match args.smoother {
        SmootherKind::SmartLaplace => smart_laplace(&m, &cfg)?,
        _ => smooth(&m, &cfg)?,
    };
    write_mesh(&result.mesh, &args.out, MeshFormat::from_path(&args.out)?)?;
    if let Some(path) = &args.report {
        std::fs::write(path, result.report.to_json())?;
    }
    print_summary("input", &before);
    print_summary("output", &result.report);
    println!(
        "iterations: {}, guard resets: {}",
        result.iterations_run,
        result.total_guard_resets()
    );
    Ok(report_invalid(&result.mesh, &args.out))
}

fn report_invalid(m: &Mesh, out: &Path) -> u8 {
    let bad = validate(m, &OrientationReference::positive(m));
    if bad.is_empty() {
        return 0;
    }
    eprintln!(
        "warning: {} inverted or degenerate elements in {}",
        bad.len(),
        out.display()
    );
    EXIT_INVALID
}

fn print_summary(label: &str, r: &QualityReport) {
    println!("{label}: mean {:.6}, min {:.6}", r.mean, r.min);
}

fn parse_triangle(s: &str) -> Result<Triangle, Error> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidParams(format!("cannot parse triangle `{s}`")))?;
    if v.len() != 6 || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParams(
            "triangle needs six finite coordinates".into(),
        ));
    }
    let t = Triangle::new(point2(v[0], v[1]), point2(v[2], v[3]), point2(v[4], v[5]));
    if t.is_degenerate() {
        return Err(Error::InvalidParams("triangle is degenerate".into()));
    }
    Ok(t)
}
