use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use reinhardt_core::hadamard::{DEFAULT_DEGREE, DEFAULT_EPSILON};
use reinhardt_core::oracle::DEFAULT_MARGIN;
use reinhardt_core::{
    agreement_grid, c_hat, classify, convex_closure_value, decompose_elementary, decompose_simple,
    default_radius, estimate_domain, mainthm_series, probe, slice_radius, support_value, Axis,
    Direction, Domain, GridF64, Samples, Series, Window,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

mod error;

use error::{CliError, Context};

#[derive(Parser)]
#[command(
    name = "reinhardt",
    version,
    about = "Convergence domains of multivariate power series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify absolute convergence at a non-negative point by block growth
    Probe {
        series: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        point: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u64,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
    /// Membership estimate on a grid of log-points, as CSV
    Domain {
        series: PathBuf,
        /// `lo:hi:count`, once for every axis or once for all of them
        #[arg(long, required = true, allow_hyphen_values = true)]
        grid: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u64,
        #[arg(long, alias = "margin", default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Sample the direction functional c_hat
    Cfunc {
        series: PathBuf,
        /// JSON array of simplex directions
        #[arg(long, conflicts_with = "grid_t", required_unless_present = "grid_t")]
        directions: Option<PathBuf>,
        /// Use the uniform lattice with this many subdivisions
        #[arg(long)]
        grid_t: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u64,
        /// Window radius; defaults to max(0.02, 2N/sqrt(K))
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Support value of an H-domain in one direction
    Support {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        direction: Vec<f64>,
    },
    /// Convex closure of sampled values in one direction
    Envelope {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        direction: Vec<f64>,
    },
    /// Build a series whose domain of convergence is the given H-domain
    Construct {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        directions: PathBuf,
        #[arg(long)]
        per_row: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split a series into elementary rows or simple wedge summands
    Decompose {
        series: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Estimate the domain from the coefficients instead of reading one
        #[arg(long, conflicts_with = "domain")]
        estimate_domain: bool,
        #[arg(long)]
        directions: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u64,
        /// Window radius used by --estimate-domain
        #[arg(long)]
        delta: Option<f64>,
        /// Put the constant term into the first row
        #[arg(long)]
        absorb_constant: bool,
    },
    /// Cauchy-Hadamard radius of the one-variable slice through a point
    SliceRadius {
        series: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        point: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u64,
    },
    /// Compare the estimator with the brute-force probe on a grid
    Check {
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "-1:1:11")]
        grid: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Elementary,
    Simple,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, flag: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{flag} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{flag} {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(format!("--out {}: {e}", path.display())))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn check_positive(flag: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "{flag} must be positive, got {value}"
        )))
    }
}

fn check_degree(degree: u64) -> Result<(), CliError> {
    if degree == 0 {
        return Err(CliError::input("--degree must be positive".into()));
    }
    Ok(())
}

fn direction(flag: &str, coords: &[f64]) -> Result<Direction, CliError> {
    Direction::new(coords.to_vec()).map_err(|e| CliError::input(format!("{flag}: {e}")))
}

fn directions_file(path: &Path) -> Result<Vec<Direction>, CliError> {
    read_json(path, "--directions")
}

fn extended(x: f64) -> Value {
    if x == f64::INFINITY {
        json!("inf")
    } else if x == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!(x)
    }
}

fn parse_grid(specs: &[String], dimension: usize) -> Result<GridF64, CliError> {
    let axes = specs
        .iter()
        .map(|spec| {
            let parts: Vec<&str> = spec.split(':').collect();
            let bad = || CliError::input(format!("--grid {spec}: expected lo:hi:count"));
            let [lo, hi, count] = parts[..] else {
                return Err(bad());
            };
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            Axis::new(lo, hi, count).map_err(|e| CliError::input(format!("--grid {spec}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let axes = match axes.len() {
        1 => vec![axes[0]; dimension],
        n if n == dimension => axes,
        n => {
            return Err(CliError::input(format!(
                "--grid: {n} axes given for a {dimension}-dimensional series"
            )))
        }
    };
    GridF64::new(axes).map_err(|e| CliError::input(format!("--grid: {e}")))
}

fn grid_label(grid: &GridF64) -> String {
    grid.axes()
        .iter()
        .map(|a| format!("{}:{}:{}", a.lo, a.hi, a.count))
        .collect::<Vec<_>>()
        .join(",")
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Probe {
            series,
            point,
            degree,
            margin,
        } => {
            let s: Series = read_json(&series, "series")?;
            let v = probe(&s, &point, degree, margin).context("--point / --degree / --margin")?;
            Ok(pretty(&json!({
                "degree": degree,
                "margin": margin,
                "point": point,
                "class": v.class,
                "tail_ratio": v.tail_ratio,
                "partial": extended(v.partial),
            })))
        }
        Command::Domain {
            series,
            grid,
            degree,
            epsilon,
        } => {
            check_degree(degree)?;
            check_positive("--epsilon", epsilon)?;
            let s: Series = read_json(&series, "series")?;
            let grid = parse_grid(&grid, s.dimension())?;
            let mut out = String::new();
            writeln!(out, "# series={}", s.label()).unwrap();
            writeln!(out, "# degree={degree}").unwrap();
            writeln!(out, "# epsilon={epsilon}").unwrap();
            writeln!(out, "# grid={}", grid_label(&grid)).unwrap();
            let names: Vec<String> = (1..=s.dimension()).map(|i| format!("s{i}")).collect();
            writeln!(out, "{},class,psi_hat", names.join(",")).unwrap();
            for p in grid.points() {
                let v = classify(&s, &p, degree, epsilon).context("--grid")?;
                let coords: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                let class = serde_json::to_value(v.class).unwrap();
                writeln!(
                    out,
                    "{},{},{}",
                    coords.join(","),
                    class.as_str().unwrap(),
                    v.value
                )
                .unwrap();
            }
            Ok(out)
        }
        Command::Cfunc {
            series,
            directions,
            grid_t,
            degree,
            delta,
        } => {
            check_degree(degree)?;
            let s: Series = read_json(&series, "series")?;
            let dirs = match (directions, grid_t) {
                (Some(path), _) => directions_file(&path)?,
                (None, Some(m)) if m > 0 => Direction::lattice(s.dimension(), m),
                _ => return Err(CliError::input("--grid-t must be positive".into())),
            };
            let radius = delta.unwrap_or_else(|| default_radius(s.dimension(), degree));
            let mut values = Vec::with_capacity(dirs.len());
            for a in &dirs {
                let window = Window::tail(a.clone(), radius, degree).context("--delta")?;
                values.push(c_hat(&s, &window).context("--directions")?);
            }
            let samples = Samples::new(dirs, values).context("--directions")?;
            let mut v = serde_json::to_value(&samples).unwrap();
            v["degree"] = json!(degree);
            v["delta"] = json!(radius);
            Ok(pretty(&v))
        }
        Command::Support {
            domain,
            direction: a,
        } => {
            let d: Domain = read_json(&domain, "--domain")?;
            let alpha = direction("--direction", &a)?;
            let h = support_value(&d, &alpha).context("--direction")?;
            Ok(pretty(&extended(h)))
        }
        Command::Envelope {
            samples,
            direction: a,
        } => {
            let f: Samples = read_json(&samples, "--samples")?;
            let alpha = direction("--direction", &a)?;
            let v = convex_closure_value(&f, &alpha).context("--direction")?;
            Ok(pretty(&extended(v)))
        }
        Command::Construct {
            domain,
            directions,
            per_row,
            out,
        } => {
            if per_row == 0 {
                return Err(CliError::input("--per-row must be positive".into()));
            }
            let d: Domain = read_json(&domain, "--domain")?;
            let dirs = directions_file(&directions)?;
            let s = mainthm_series(&d, &dirs, per_row).context("--domain / --directions")?;
            write_file(&out, &pretty(&s))?;
            Ok(pretty(&json!({
                "rows": dirs.len(),
                "per_row": per_row,
                "dimension": s.dimension(),
            })))
        }
        Command::Decompose {
            series,
            mode,
            domain,
            estimate_domain: estimate,
            directions,
            out,
            degree,
            delta,
            absorb_constant,
        } => {
            check_degree(degree)?;
            let s: Series = read_json(&series, "series")?;
            let dirs = directions_file(&directions)?;
            fs::create_dir_all(&out)
                .map_err(|e| CliError::io(format!("--out {}: {e}", out.display())))?;
            let manifest = match mode {
                Mode::Elementary => elementary(&s, &dirs, degree, absorb_constant, &out)?,
                Mode::Simple => {
                    let d = match (domain, estimate) {
                        (Some(path), _) => read_json(&path, "--domain")?,
                        (None, true) => {
                            let radius =
                                delta.unwrap_or_else(|| default_radius(s.dimension(), degree));
                            estimate_domain(&s, &dirs, degree, radius)
                                .context("--estimate-domain")?
                        }
                        (None, false) => {
                            return Err(CliError::input(
                                "--mode simple needs --domain or --estimate-domain".into(),
                            ))
                        }
                    };
                    simple(&s, &d, &dirs, degree, &out)?
                }
            };
            let text = pretty(&manifest);
            write_file(&out.join("manifest.json"), &text)?;
            Ok(text)
        }
        Command::SliceRadius {
            series,
            point,
            degree,
        } => {
            check_degree(degree)?;
            let s: Series = read_json(&series, "series")?;
            let r = slice_radius(&s, &point, degree).context("--point")?;
            Ok(pretty(&json!({
                "degree": degree,
                "point": point,
                "radius": extended(r),
            })))
        }
        Command::Check {
            series,
            grid,
            degree,
            epsilon,
            margin,
        } => {
            check_positive("--epsilon", epsilon)?;
            let s: Series = read_json(&series, "series")?;
            let grid = parse_grid(&grid, s.dimension())?;
            let report = agreement_grid(&s, &grid, degree, epsilon, margin)
                .context("--degree / --margin")?;
            let mut v = serde_json::to_value(&report).unwrap();
            v["grid"] = json!(grid_label(&grid));
            Ok(pretty(&v))
        }
    }
}

fn elementary(
    s: &Series,
    dirs: &[Direction],
    degree: u64,
    absorb: bool,
    out: &Path,
) -> Result<Value, CliError> {
    let mut d = decompose_elementary(s, dirs, degree).context("--directions")?;
    let exact = d.partition_is_exact(s).context("--directions")?;
    if absorb {
        d.absorb_constant().context("--absorb-constant")?;
    }
    let mut rows = Vec::new();
    for (i, row) in d.rows.iter().enumerate() {
        let file = format!("g_{:03}.json", i + 1);
        write_file(&out.join(&file), &pretty(&row.series))?;
        rows.push(json!({
            "file": file,
            "direction": row.direction,
            "growth": extended(row.growth),
            "offset": row.halfspace.as_ref().map(|h| h.offset),
            "mean_direction": row.mean_direction,
        }));
    }
    Ok(json!({
        "mode": "elementary",
        "degree": degree,
        "constant": d.constant,
        "absorb_constant": absorb,
        "indices": d.assignment.len(),
        "rows": rows,
        "exact": exact,
    }))
}

fn simple(
    s: &Series,
    domain: &Domain,
    dirs: &[Direction],
    degree: u64,
    out: &Path,
) -> Result<Value, CliError> {
    let d = decompose_simple(s, domain, dirs, degree).context("--domain / --directions")?;
    let exact = d.elementary.partition_is_exact(s).context("--directions")?;
    let probe_point = vec![0.5; s.dimension()];
    let telescoping = d.telescoping_error(&probe_point).context("--directions")?;
    let mut parts = Vec::new();
    for (i, part) in d.parts.iter().enumerate() {
        let file = format!("sigma_{:03}.json", i + 1);
        write_file(&out.join(&file), &pretty(&part.series))?;
        parts.push(json!({
            "file": file,
            "direction": part.supporting.normal,
            "offset": part.supporting.offset,
            "wedge": part.wedge,
        }));
    }
    Ok(json!({
        "mode": "simple",
        "degree": degree,
        "domain": domain,
        "constant": d.elementary.constant,
        "rows": parts,
        "exact": exact,
        "telescoping_error": telescoping,
        "telescoping_point": probe_point,
    }))
}
