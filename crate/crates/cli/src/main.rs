use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncb_core::constraints::{check_dec, decay_audit, SampleSet, DEC_TOL};
use ncb_core::datasets::{read_descriptor, DatasetDescriptor, DatasetFile, Example};
use ncb_core::envelope::{AuditPayload, MassPayload, ReportEnvelope};
use ncb_core::geometry::domain::Model;
use ncb_core::mass::{einstein_energy_crosscheck, energy_momentum, mass_inequality_report, MassConfig};
use ncb_core::verify::{run_suite, Suite, SuiteOptions, SuiteReport};
use ncb_core::Error;

const EXIT_PASS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "ncb", version, about = "Energy conditions, mass invariants and spinor identities for initial data with a noncompact boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coords {
    Polar,
    Ball,
}

#[derive(clap::Args)]
struct DatasetArgs {
    /// Dataset file, bare descriptor, or the name of a built-in example.
    dataset: String,
    /// Dimension used when DATASET names a built-in example.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Chart for hyperbolic data.
    #[arg(long, value_enum)]
    model_coords: Option<Coords>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the canonical dataset file of an example.
    Generate {
        /// Example name.
        example: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        mass: Option<f64>,
        /// Comma separated components.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        momentum: Option<Vec<f64>>,
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        center: Option<Vec<f64>>,
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        decay: Option<f64>,
        /// Grid header for custom-grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, value_enum)]
        model_coords: Option<Coords>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample the energy conditions and audit the decay of a dataset.
    Audit {
        #[command(flatten)]
        data: DatasetArgs,
        /// Half-width of the sampling box.
        #[arg(long = "box")]
        extent: Option<f64>,
        /// Samples per axis.
        #[arg(long, default_value_t = 9)]
        per_axis: usize,
        /// Radii of the decay audit.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = DEC_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute energy, momentum and their invariants.
    Mass {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Polar and azimuthal quadrature orders, e.g. 48,96.
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        step: Option<f64>,
        /// Energy-condition tolerance used for the inequality report.
        #[arg(long, default_value_t = DEC_TOL)]
        tol: f64,
        /// Also evaluate the energy from the Einstein tensor (flat data).
        #[arg(long)]
        einstein: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the convergence table here as well.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an identity verification suite (or `all`).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// First step of convergence rows; the second is half of it.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Convergence(_) | Error::Stencil { .. } | Error::SingularMetric { .. } | Error::Eval { .. } | Error::DegenerateLapse { .. } => {
                EXIT_NUMERICAL
            }
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn ball_radius(r: f64) -> f64 {
    r / (1.0 + (1.0 + r * r).sqrt())
}

fn apply_coords(desc: &mut DatasetDescriptor, coords: Option<Coords>) -> Result<(), Failure> {
    match (coords, desc.model) {
        (None, _) => Ok(()),
        (Some(_), Model::Flat) => Err(usage("--model-coords applies to hyperbolic data only")),
        (Some(Coords::Polar), Model::HyperbolicBall) | (Some(Coords::Ball), Model::HyperbolicPolar) => {
            if desc.model == Model::HyperbolicPolar {
                desc.model = Model::HyperbolicBall;
                desc.r0 = ball_radius(desc.r0);
            } else {
                let rho = desc.r0;
                desc.model = Model::HyperbolicPolar;
                desc.r0 = 2.0 * rho / (1.0 - rho * rho);
            }
            desc.validate()?;
            Ok(())
        }
        _ => Ok(()),
    }
}

fn load(args: &DatasetArgs) -> Result<(DatasetDescriptor, Option<PathBuf>), Failure> {
    let path = Path::new(&args.dataset);
    let (mut desc, base) = if path.exists() {
        let d = read_descriptor(path)?;
        (d, path.parent().map(Path::to_path_buf))
    } else if let Some(ex) = Example::from_name(&args.dataset) {
        if ex == Example::CustomGrid {
            return Err(usage("custom-grid needs a dataset file; run `ncb generate custom-grid --grid HEADER` first"));
        }
        (DatasetDescriptor::example(ex, args.n), None)
    } else {
        return Err(usage(format!("{} is neither a readable file nor a built-in example", args.dataset)));
    };
    apply_coords(&mut desc, args.model_coords)?;
    desc.validate()?;
    Ok((desc, base))
}

fn parse_example(name: &str) -> Result<Example, Failure> {
    Example::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = Example::ALL.iter().map(|e| e.name()).collect();
        usage(format!("unknown example {name:?}; expected one of {}", names.join(", ")))
    })
}

fn mass_config(radii: &Option<Vec<f64>>, orders: &Option<Vec<usize>>, window: Option<usize>, step: Option<f64>) -> Result<MassConfig, Failure> {
    let mut cfg = MassConfig::default();
    if let Some(r) = radii {
        cfg = cfg.with_radii(r.clone());
    }
    if let Some(o) = orders {
        match o.as_slice() {
            [p, a] if *p >= 2 && *a >= 2 => cfg = cfg.with_orders(*p, *a),
            _ => return Err(usage("--orders takes two values POLAR,AZIMUTH, each at least 2")),
        }
    }
    if let Some(w) = window {
        if w < 2 {
            return Err(usage("--window must be at least 2"));
        }
        cfg.window = w;
    }
    check_step(step)?;
    cfg.step = step;
    Ok(cfg)
}

fn check_step(step: Option<f64>) -> Result<(), Failure> {
    match step {
        Some(s) if !(s > 0.0 && s.is_finite()) => Err(usage(format!("--step must be positive, got {s}"))),
        _ => Ok(()),
    }
}

fn cmd_generate(cmd: Command) -> Result<u8, Failure> {
    let Command::Generate { example, n, mass, momentum, amplitude, center, width, seed, r0, decay, grid, model_coords, output } = cmd else {
        unreachable!()
    };
    let ex = parse_example(&example)?;
    let mut desc = DatasetDescriptor::example(ex, n);
    let p = &mut desc.params;
    p.mass = mass.or(p.mass);
    p.momentum = momentum.or(p.momentum.take());
    p.amplitude = amplitude.or(p.amplitude);
    p.center = center.or(p.center.take());
    p.width = width.or(p.width);
    p.seed = seed.or(p.seed);
    if let Some(r) = r0 {
        desc.r0 = r;
    }
    if let Some(d) = decay {
        desc.decay = d;
    }
    desc.grid_file = grid;
    apply_coords(&mut desc, model_coords)?;
    let file = DatasetFile::new(desc)?;
    emit(&output, &file.to_json())?;
    Ok(EXIT_PASS)
}

fn flags(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().filter(|(_, v)| !v.is_null()).map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn cmd_audit(cmd: Command) -> Result<u8, Failure> {
    let Command::Audit { data, extent, per_axis, radii, step, tol, format, output } = cmd else { unreachable!() };
    let start = Instant::now();
    let (desc, base) = load(&data)?;
    check_step(step)?;
    if !(tol >= 0.0) {
        return Err(usage("--tol must be non-negative"));
    }
    let dataset = desc.build_in(base.as_deref())?;
    let extent = extent.unwrap_or(if desc.model == Model::HyperbolicBall { 0.95 } else { 8.0 });
    let samples = SampleSet::shell(&dataset.domain, extent, per_axis)?;
    let dec = check_dec(&dataset, &samples, tol, step)?;
    let radii = radii.unwrap_or_else(|| MassConfig::default().radii);
    let decay = decay_audit(&dataset, &radii, step)?;
    let pass = dec.pass && decay.pass;
    let code = if pass { EXIT_PASS } else { EXIT_VIOLATION };
    let text = match format {
        Format::Csv => audit_csv(&dec, &decay),
        Format::Json => {
            let f = flags(&[
                ("box", json!(extent)),
                ("per_axis", json!(per_axis)),
                ("radii", json!(radii)),
                ("step", json!(step)),
                ("tol", json!(tol)),
            ]);
            let payload = AuditPayload { interior_samples: samples.interior.len(), boundary_samples: samples.boundary.len(), dec, decay };
            ReportEnvelope::new("audit", Some(desc), f, payload, pass, code as i32).with_elapsed(start.elapsed().as_secs_f64()).to_json()
        }
    };
    emit(&output, &text)?;
    Ok(code)
}

fn audit_csv(dec: &ncb_core::constraints::DecReport, decay: &ncb_core::constraints::DecayReport) -> String {
    let mut out = String::from("condition,worst_margin,worst_point,samples,pass\n");
    for (name, m) in [("interior", &dec.interior), ("tangential", &dec.tangential), ("normal", &dec.normal)] {
        let pt: Vec<String> = m.worst_point.iter().map(|x| format!("{x:.17e}")).collect();
        let _ = writeln!(out, "{name},{:.17e},{},{},{}", m.worst_margin, pt.join(" "), m.samples, m.pass);
    }
    out.push_str("\nr,weighted_sup,bulk_integral,boundary_integral\n");
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
    for row in &decay.rows {
        let _ = writeln!(out, "{:.17e},{:.17e},{},{}", row.r, row.weighted_sup, opt(row.bulk_integral), opt(row.boundary_integral));
    }
    out
}

fn cmd_mass(cmd: Command) -> Result<u8, Failure> {
    let Command::Mass { data, radii, orders, window, step, tol, einstein, format, csv, output } = cmd else { unreachable!() };
    let start = Instant::now();
    let (desc, base) = load(&data)?;
    let cfg = mass_config(&radii, &orders, window, step)?;
    let dataset = desc.build_in(base.as_deref())?;
    let report = energy_momentum(&dataset, &cfg)?;
    let extent = if desc.model == Model::HyperbolicBall { 0.95 } else { 8.0 };
    let samples = SampleSet::shell(&dataset.domain, extent, 9)?;
    let dec = check_dec(&dataset, &samples, tol, step)?;
    let inequality = mass_inequality_report(&report, &dec);
    let einstein = if einstein { Some(einstein_energy_crosscheck(&dataset, &cfg)?) } else { None };
    let table = report.to_csv();
    if let Some(path) = &csv {
        std::fs::write(path, &table).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let pass = !inequality.hypotheses_hold || inequality.inequality_holds;
    let code = if pass { EXIT_PASS } else { EXIT_VIOLATION };
    let text = match format {
        Format::Csv => table,
        Format::Json => {
            let f = flags(&[
                ("radii", json!(cfg.radii)),
                ("orders", json!([cfg.polar, cfg.azimuth])),
                ("window", json!(cfg.window)),
                ("step", json!(step)),
                ("tol", json!(tol)),
                ("einstein", json!(einstein.is_some())),
            ]);
            let payload = MassPayload { report, inequality, einstein };
            ReportEnvelope::new("mass", Some(desc), f, payload, pass, code as i32).with_elapsed(start.elapsed().as_secs_f64()).to_json()
        }
    };
    emit(&output, &text)?;
    Ok(code)
}

fn verify_csv(reports: &[SuiteReport]) -> String {
    let mut out = String::from("suite,identity,sample,residual,residual_half,observed_order,tolerance,pass\n");
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_default();
    let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
    for r in reports {
        for row in &r.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.6e},{},{},{:.1e},{}",
                r.suite.name(),
                quote(&row.identity),
                quote(&row.sample),
                row.residual,
                opt(row.residual_half),
                opt(row.observed_order),
                row.tolerance,
                row.pass
            );
        }
    }
    out
}

fn cmd_verify(cmd: Command) -> Result<u8, Failure> {
    let Command::Verify { suite, seed, step, format, output } = cmd else { unreachable!() };
    let start = Instant::now();
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_name(&suite).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            usage(format!("unknown suite {suite:?}; expected all or one of {}", names.join(", ")))
        })?]
    };
    check_step(Some(step))?;
    let opts = SuiteOptions { seed, step, ..SuiteOptions::default() };
    let reports: Vec<SuiteReport> = suites.iter().map(|s| run_suite(*s, &opts)).collect::<Result<_, _>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let code = if pass { EXIT_PASS } else { EXIT_VIOLATION };
    let text = match format {
        Format::Csv => verify_csv(&reports),
        Format::Json => {
            let f = flags(&[("suite", json!(suite)), ("seed", json!(seed)), ("step", json!(step))]);
            ReportEnvelope::new("verify", None, f, reports, pass, code as i32).with_elapsed(start.elapsed().as_secs_f64()).to_json()
        }
    };
    emit(&output, &text)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        c @ Command::Generate { .. } => cmd_generate(c),
        c @ Command::Audit { .. } => cmd_audit(c),
        c @ Command::Mass { .. } => cmd_mass(c),
        c @ Command::Verify { .. } => cmd_verify(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ncb: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
