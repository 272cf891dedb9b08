use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use kleinteich::error::Error;
use kleinteich::families::{
    build_four_punctured, build_genus_two_with, validate, C3Source, TeichCoordinate,
};
use kleinteich::group::{orbit_samples, parse_complex, points_to_csv, points_to_svg};
use kleinteich::involution::{
    sigma_star_alpha, sigma_star_alpha_closed, sigma_star_tau, sigma_star_tau_closed,
};
use kleinteich::locus::{
    locus_four_punctured, locus_genus_two_system, member, sample_locus, GenusTwoSystem,
};
use kleinteich::moebius::SpherePoint;
use kleinteich::signatures::{signature_report, RamValue, Signature};

/// Verification and exploration tools for two explicit Kleinian group
/// families, the induced anticonformal involution on their Teichmüller
/// coordinates, and Klein-orbifold signature arithmetic.
#[derive(Parser)]
#[command(name = "kleinteich", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Documented cap on orbit word length; keeps runtime bounded.
const MAX_WORD_LEN_CAP: usize = 14;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Four,
    Genus2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SystemFlag {
    Section4,
    Intro,
}

impl From<SystemFlag> for GenusTwoSystem {
    fn from(s: SystemFlag) -> Self {
        match s {
            SystemFlag::Section4 => GenusTwoSystem::Section4,
            SystemFlag::Intro => GenusTwoSystem::Intro,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum C3Flag {
    Printed,
    Corrected,
}

impl From<C3Flag> for C3Source {
    fn from(s: C3Flag) -> Self {
        match s {
            C3Flag::Printed => C3Source::Printed,
            C3Flag::Corrected => C3Source::Corrected,
        }
    }
}

#[derive(Args)]
struct CoordArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// α as "re,im" (four-punctured kind)
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// τ1 τ2 τ3, each "re,im" (genus-two kind)
    #[arg(long, num_args = 3, allow_hyphen_values = true)]
    tau: Option<Vec<String>>,
}

impl CoordArgs {
    fn coordinate(&self) -> Result<TeichCoordinate, Error> {
        match self.kind {
            Kind::Four => {
                let a = self.alpha.as_deref().ok_or_else(|| {
                    Error::OutOfRange("--kind four needs --alpha re,im".to_string())
                })?;
                Ok(TeichCoordinate::alpha(parse_complex(a)?))
            }
            Kind::Genus2 => {
                let t = self.tau.as_deref().ok_or_else(|| {
                    Error::OutOfRange(
                        "--kind genus2 needs --tau re,im re,im re,im".to_string(),
                    )
                })?;
                let vals: Result<Vec<Complex64>, Error> =
                    t.iter().map(|s| parse_complex(s)).collect();
                let vals = vals?;
                Ok(TeichCoordinate::tau(vals[0], vals[1], vals[2]))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a family and run its structural checks.
    Verify {
        #[command(flatten)]
        coord: CoordArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Which C3 transcription to use for genus-two families.
        #[arg(long, value_enum, default_value = "corrected")]
        c3: C3Flag,
    },
    /// Evaluate σ* by the conjugation pipeline and the closed form.
    Sigma {
        #[command(flatten)]
        coord: CoordArgs,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        mu: String,
    },
    /// Fixed-locus operations.
    Locus {
        #[command(subcommand)]
        action: LocusAction,
    },
    /// Sample a group orbit as a limit-set approximation (CSV or SVG).
    Limitset {
        #[command(flatten)]
        coord: CoordArgs,
        #[arg(long, default_value_t = 8)]
        max_word_len: usize,
        /// Output file; .svg extension selects SVG, anything else CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = -3.0)]
        xmin: f64,
        #[arg(long, default_value_t = 3.0)]
        xmax: f64,
        #[arg(long, default_value_t = -3.0)]
        ymin: f64,
        #[arg(long, default_value_t = 3.0)]
        ymax: f64,
    },
    /// Klein-orbifold signature arithmetic.
    Signature {
        #[arg(long)]
        genus: u32,
        #[arg(long, conflicts_with = "nonorientable")]
        orientable: bool,
        #[arg(long)]
        nonorientable: bool,
        /// Comma-separated ramification values (integers >= 2 or "inf").
        #[arg(long, default_value = "")]
        ram: String,
    },
}

#[derive(Subcommand)]
enum LocusAction {
    /// Sample points on the locus (exact by construction).
    Sample {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "section4")]
        system: SystemFlag,
        #[arg(short = 'n', long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
    },
    /// Check one coordinate for membership and σ*-fixedness.
    Check {
        #[command(flatten)]
        coord: CoordArgs,
        #[arg(long, value_enum, default_value = "section4")]
        system: SystemFlag,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { coord, tol, c3 } => {
            if tol <= 0.0 {
                return Err(Error::OutOfRange("--tol must be positive".to_string()));
            }
            let x = coord.coordinate()?;
            let fam = match coord.kind {
                Kind::Four => build_four_punctured(x.values[0])?,
                Kind::Genus2 => build_genus_two_with(
                    (x.values[0], x.values[1], x.values[2]),
                    c3.into(),
                )?,
            };
            let report = validate(&fam, tol);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(report.pass)
        }
        Command::Sigma { coord, mu } => {
            let mu = parse_complex(&mu)?;
            let x = coord.coordinate()?;
            match coord.kind {
                Kind::Four => {
                    let alpha = x.values[0];
                    let pipeline = sigma_star_alpha(alpha, mu)?;
                    let closed = sigma_star_alpha_closed(alpha);
                    let max_dev = (pipeline - closed).norm();
                    let report = json!({
                        "input": complex_json(alpha),
                        "mu": complex_json(mu),
                        "pipeline_result": complex_json(pipeline),
                        "closed_form": complex_json(closed),
                        "max_dev": max_dev,
                    });
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    Ok(max_dev < 1e-8)
                }
                Kind::Genus2 => {
                    let tau = x;
                    let pipeline = sigma_star_tau(&tau, mu)?;
                    let closed = sigma_star_tau_closed(&tau);
                    let max_dev = pipeline
                        .values
                        .iter()
                        .zip(closed.values.iter())
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    let report = json!({
                        "input": tau.values.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
                        "mu": complex_json(mu),
                        "pipeline_result": pipeline.values.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
                        "closed_form": closed.values.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
                        "max_dev": max_dev,
                        "note": "the concluding printed locus system {Re t2 = 0, Re t1 = 1 - Re t3, Im t1 = Im t3} is the fixed set of this action; the introductory variant differs (see locus --system intro)",
                    });
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    Ok(max_dev < 1e-8)
                }
            }
        }
        Command::Locus { action } => run_locus(action),
        Command::Limitset {
            coord,
            max_word_len,
            out,
            xmin,
            xmax,
            ymin,
            ymax,
        } => {
            if max_word_len > MAX_WORD_LEN_CAP {
                return Err(Error::OutOfRange(format!(
                    "--max-word-len capped at {MAX_WORD_LEN_CAP}"
                )));
            }
            if xmin >= xmax || ymin >= ymax {
                return Err(Error::OutOfRange("empty viewport".to_string()));
            }
            let x = coord.coordinate()?;
            let fam = match coord.kind {
                Kind::Four => build_four_punctured(x.values[0])?,
                Kind::Genus2 => build_genus_two_with(
                    (x.values[0], x.values[1], x.values[2]),
                    C3Source::Corrected,
                )?,
            };
            let seed_point = SpherePoint::finite(Complex64::new(0.0, 1.0));
            let points = orbit_samples(&fam.table, &seed_point, max_word_len)?;
            eprintln!("{} orbit points at word length {max_word_len}", points.len());
            let svg = out
                .as_ref()
                .map(|p| p.extension().map(|e| e == "svg").unwrap_or(false))
                .unwrap_or(false);
            let payload = if svg {
                points_to_svg(&points, (xmin, ymin, xmax, ymax), 800)
            } else {
                points_to_csv(&points)
            };
            match out {
                Some(path) => std::fs::write(&path, payload).map_err(|e| {
                    Error::OutOfRange(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{payload}"),
            }
            Ok(true)
        }
        Command::Signature {
            genus,
            orientable,
            nonorientable,
            ram,
        } => {
            if orientable == nonorientable {
                return Err(Error::OutOfRange(
                    "pass exactly one of --orientable / --nonorientable".to_string(),
                ));
            }
            let ram_values: Result<Vec<RamValue>, Error> = ram
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(RamValue::parse)
                .collect();
            let s = Signature::new(genus, orientable, ram_values?)?;
            let report = signature_report(&s);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(true)
        }
    }
}

fn run_locus(action: LocusAction) -> Result<bool, Error> {
    match action {
        LocusAction::Sample {
            kind,
            system,
            count,
            seed,
            out,
            format,
        } => {
            let sys = match kind {
                Kind::Four => locus_four_punctured(),
                Kind::Genus2 => locus_genus_two_system(system.into()),
            };
            let pts = sample_locus(&sys, count, seed)?;
            let payload = if format == "json" {
                let rows: Vec<Vec<[f64; 2]>> = pts
                    .iter()
                    .map(|p| p.values.iter().map(|z| [z.re, z.im]).collect())
                    .collect();
                serde_json::to_string_pretty(&rows).unwrap() + "\n"
            } else {
                let mut csv = String::new();
                let n = pts.first().map(|p| p.values.len()).unwrap_or(match kind {
                    Kind::Four => 1,
                    Kind::Genus2 => 3,
                });
                let header: Vec<String> = (1..=n)
                    .flat_map(|i| [format!("re{i}"), format!("im{i}")])
                    .collect();
                csv.push_str(&header.join(","));
                csv.push('\n');
                for p in &pts {
                    let row: Vec<String> = p
                        .values
                        .iter()
                        .flat_map(|z| [z.re.to_string(), z.im.to_string()])
                        .collect();
                    csv.push_str(&row.join(","));
                    csv.push('\n');
                }
                csv
            };
            match out {
                Some(path) => std::fs::write(&path, payload).map_err(|e| {
                    Error::OutOfRange(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{payload}"),
            }
            Ok(true)
        }
        LocusAction::Check {
            coord,
            system,
            tol,
        } => {
            let x = coord.coordinate()?;
            let sys = match coord.kind {
                Kind::Four => locus_four_punctured(),
                Kind::Genus2 => locus_genus_two_system(system.into()),
            };
            let is_member = member(&sys, &x, tol)?;
            let mu = Complex64::new(0.0, 0.0);
            let (fixed, dev) = match coord.kind {
                Kind::Four => {
                    let alpha = x.values[0];
                    let dev = (sigma_star_alpha_closed(alpha) - alpha).norm();
                    (dev <= tol, dev)
                }
                Kind::Genus2 => {
                    let closed = sigma_star_tau_closed(&x);
                    let pipeline = sigma_star_tau(&x, mu)?;
                    let dev = x
                        .values
                        .iter()
                        .zip(closed.values.iter())
                        .map(|(a, b)| (a - b).norm())
                        .chain(
                            x.values
                                .iter()
                                .zip(pipeline.values.iter())
                                .map(|(a, b)| (a - b).norm()),
                        )
                        .fold(0.0, f64::max);
                    (dev <= tol.max(1e-8), dev)
                }
            };
            let report = json!({
                "coordinate": x.values.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
                "member": is_member,
                "sigma_fixed": fixed,
                "sigma_deviation": dev,
                "tol": tol,
                "agree": is_member == fixed,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(is_member == fixed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
