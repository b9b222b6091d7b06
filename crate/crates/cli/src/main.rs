mod io;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use danzer::epsnet::{build_net, validate_net, NetSource};
use danzer::lattice::{
    build_basis, build_field, covering_profile, enumerate_lattice, flow_grid, hit_box_lattice, norm_product,
    shortest_vector_under_flow, DiagonalFlowVector, LatticeBasis, Preset,
};
use danzer::vdc::{self, GUARANTEED_VOLUME};
use danzer::verifier::{growth_count, largest_empty_box, largest_empty_box_exact};
use danzer::{AlignedBox, DyadicRational, Error, Point, Window, TOLERANCE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "danzer", version, about = "Generate and verify align-Danzer point sets")]
struct Cli {
    /// Worker threads for enumeration and verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Record wall-clock time in JSON reports; off by default so output is reproducible.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the points of the dyadic set in a window as CSV.
    GenVdc(GenVdc),
    /// Write the points of a polynomial lattice in a window as CSV.
    GenLattice(GenLattice),
    /// Find a point of a construction inside a box.
    Hit(Hit),
    /// Report the largest empty box among points read from CSV.
    Verify(Verify),
    /// Count points in growing windows.
    Growth(Growth),
    /// Build and validate an eps-net for aligned boxes in the unit square.
    Epsnet(Epsnet),
    /// Probe a polynomial lattice: norm integrality, flowed shortest vectors, covering threshold.
    Admissibility(Admissibility),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Vdc,
    Lattice,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GrowthSource {
    /// Signed set in [-T,T]^2.
    Vdc,
    /// Positive-quadrant set in [0,T]^2.
    VdcPositive,
    /// Lattice points in [-T,T]^d.
    Lattice,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Quadratic,
    Cubic,
    Quartic,
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Integer coefficients, leading first: `1,0,-2` is x^2 - 2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "preset")]
    poly: Option<Vec<i64>>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Scale the basis to covolume one.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Also write an SVG scatter plot.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 8.0)]
    px_per_unit: f64,
}

#[derive(Args, Debug)]
struct GenVdc {
    /// Lower corner then upper corner: x0 y0 x1 y1.
    #[arg(long, num_args = 4, allow_negative_numbers = true, required = true)]
    window: Vec<f64>,
    /// Enumerate the signed set instead of the positive quadrant.
    #[arg(long)]
    signed: bool,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write `<out>.exact.csv` with mantissa/exponent pairs.
    #[arg(long, requires = "out")]
    exact: bool,
    #[command(flatten)]
    plot: PlotArgs,
}

#[derive(Args, Debug)]
struct GenLattice {
    #[command(flatten)]
    poly: PolyArgs,
    /// Lower corner then upper corner, 2d values.
    #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
    window: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    plot: PlotArgs,
}

#[derive(Args, Debug)]
struct Hit {
    #[arg(long, value_enum)]
    construction: Construction,
    /// Lower corner then upper corner.
    #[arg(long = "box", num_args = 1.., allow_negative_numbers = true, required = true)]
    bounds: Vec<f64>,
    #[command(flatten)]
    poly: PolyArgs,
}

#[derive(Args, Debug)]
struct Verify {
    /// CSV of points; a sibling `.exact.csv` is preferred when present.
    #[arg(long)]
    points: PathBuf,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
    window: Vec<f64>,
    /// Names the source; `vdc` implies the guaranteed threshold 64.
    #[arg(long, value_enum)]
    construction: Option<Construction>,
    /// Volume above which an empty box counts as a counterexample.
    #[arg(long)]
    threshold: Option<f64>,
    /// Ignore the exact sidecar.
    #[arg(long)]
    no_exact: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Growth {
    #[arg(long, value_enum)]
    construction: GrowthSource,
    /// Window sizes, comma separated.
    #[arg(long = "t", value_delimiter = ',', required = true)]
    ts: Vec<f64>,
    #[command(flatten)]
    poly: PolyArgs,
}

#[derive(Args, Debug)]
struct FlowArgs {
    /// Sup-norm bound of the flow grid.
    #[arg(long, default_value_t = 3.0)]
    flow_bound: f64,
    #[arg(long, default_value_t = 0.25)]
    flow_step: f64,
    /// Covering-radius samples per flow.
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct Epsnet {
    #[arg(long, value_enum)]
    source: Construction,
    #[arg(long, allow_negative_numbers = true)]
    eps: f64,
    #[command(flatten)]
    poly: PolyArgs,
    #[command(flatten)]
    flow: FlowArgs,
    /// CSV destination for the net points.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Admissibility {
    #[command(flatten)]
    poly: PolyArgs,
    /// Random flows to probe.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Half side of the cube used for the norm check; defaults by degree.
    #[arg(long)]
    window_half: Option<f64>,
    /// Skip the covering-radius threshold.
    #[arg(long)]
    no_threshold: bool,
    #[command(flatten)]
    flow: FlowArgs,
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Module(Error),
    Input(String),
    /// The report has been written; the run contradicts a proven guarantee.
    Falsified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::InputError> for Failure {
    fn from(e: io::InputError) -> Self {
        Failure::Input(e.0)
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    timing: bool,
    start: Instant,
}

impl Ctx {
    fn runtime_ms(&self) -> Value {
        if self.timing {
            json!(self.start.elapsed().as_millis() as u64)
        } else {
            Value::Null
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error[E_USAGE]: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool already configured: {e}");
        }
    }
    let ctx = Ctx {
        timing: cli.timing,
        start: Instant::now(),
    };
    let outcome = match cli.command {
        Command::GenVdc(a) => gen_vdc(a),
        Command::GenLattice(a) => gen_lattice(a),
        Command::Hit(a) => hit(a),
        Command::Verify(a) => verify(a, &ctx),
        Command::Growth(a) => growth(a),
        Command::Epsnet(a) => epsnet(a, &ctx),
        Command::Admissibility(a) => admissibility(a, &ctx),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error[E_USAGE]: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error[E_INPUT]: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Module(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
        Err(Failure::Falsified(m)) => {
            eprintln!("GUARANTEE FALSIFIED: {m}");
            ExitCode::from(2)
        }
    }
}

fn emit(report: &Value, path: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(report).expect("json values serialize") + "\n";
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn split_corners(values: &[f64], what: &str) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    if values.is_empty() || values.len() % 2 != 0 {
        return Err(Failure::Usage(format!(
            "{what} needs an even number of values (lower corner then upper corner), got {}",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Failure::Usage(format!("{what} value {v} is not finite")));
    }
    let d = values.len() / 2;
    Ok((values[..d].to_vec(), values[d..].to_vec()))
}

fn exact(v: f64) -> DyadicRational {
    DyadicRational::from_f64(v).expect("finite values checked")
}

fn dyadic_window(lo: &[f64], hi: &[f64]) -> Result<Window<DyadicRational>, Failure> {
    Ok(Window::new(lo.iter().map(|&v| exact(v)).collect(), hi.iter().map(|&v| exact(v)).collect())?)
}

fn window_json<T: danzer::Scalar>(w: &Window<T>) -> Value {
    json!({
        "lower": w.lower().coords().iter().map(|c| c.to_f64()).collect::<Vec<_>>(),
        "upper": w.upper().coords().iter().map(|c| c.to_f64()).collect::<Vec<_>>(),
    })
}

fn exact_strings(p: &Point<DyadicRational>) -> Vec<String> {
    p.coords().iter().map(|c| c.to_decimal_string()).collect()
}

fn sort_dyadic(points: &mut [Point<DyadicRational>]) {
    points.sort_by(|a, b| a.coords().cmp(b.coords()));
}

fn preset_of(p: PresetArg) -> Preset {
    match p {
        PresetArg::Quadratic => Preset::Quadratic,
        PresetArg::Cubic => Preset::Cubic,
        PresetArg::Quartic => Preset::Quartic,
    }
}

/// The polynomial from `--poly`/`--preset`, or the preset of the given
/// degree when neither is set.
fn coefficients(a: &PolyArgs, default_degree: Option<usize>) -> Result<Vec<i64>, Failure> {
    if let Some(c) = &a.poly {
        return Ok(c.clone());
    }
    if let Some(p) = a.preset {
        return Ok(preset_of(p).coefficients().to_vec());
    }
    let d = default_degree.unwrap_or(2);
    Preset::for_degree(d)
        .map(|p| p.coefficients().to_vec())
        .ok_or_else(|| Failure::Usage(format!("no built-in polynomial of degree {d}; pass --poly")))
}

fn lattice_from(a: &PolyArgs, default_degree: Option<usize>) -> Result<(Vec<i64>, LatticeBasis), Failure> {
    let coeffs = coefficients(a, default_degree)?;
    let field = build_field(&coeffs)?;
    Ok((coeffs, build_basis(&field, a.normalize)))
}

fn write_svg(plot: &PlotArgs, points: &[Point<f64>], w: &Window<f64>) -> Outcome {
    if let Some(path) = &plot.svg {
        fs::write(path, svg::emit_svg(points, w, plot.px_per_unit)?)?;
    }
    Ok(())
}

fn write_csv(out: Option<&Path>, dim: usize, points: &[Point<f64>]) -> Outcome {
    match out {
        Some(p) => io::write_points(fs::File::create(p)?, dim, points)?,
        None => io::write_points(std::io::stdout().lock(), dim, points)?,
    }
    Ok(())
}

fn gen_vdc(a: GenVdc) -> Outcome {
    let (lo, hi) = split_corners(&a.window, "--window")?;
    let w = dyadic_window(&lo, &hi)?;
    let mut points: Vec<Point<DyadicRational>> = if a.signed {
        vdc::enumerate(&w)?.into_iter().map(|v| v.point).collect()
    } else {
        vdc::enumerate_positive(&w)?.into_iter().map(|(_, p)| p).collect()
    };
    sort_dyadic(&mut points);
    log::info!("enumerated {} points", points.len());
    let approx: Vec<Point<f64>> = points.iter().map(|p| p.to_f64()).collect();
    write_csv(a.out.as_deref(), 2, &approx)?;
    let mut exact_out = None;
    if a.exact {
        let out = a.out.as_ref().expect("clap enforces --out");
        let path = io::sidecar_path(out);
        io::write_exact(&path, 2, &points)?;
        exact_out = Some(path);
    }
    let fw = Window::new(lo, hi)?;
    write_svg(&a.plot, &approx, &fw)?;
    if let Some(out) = &a.out {
        emit(
            &json!({
                "schema_version": SCHEMA_VERSION,
                "command": "gen-vdc",
                "construction": if a.signed { "vdc" } else { "vdc-positive" },
                "window": window_json(&w),
                "point_count": points.len(),
                "out": out.display().to_string(),
                "exact_out": exact_out.map(|p| p.display().to_string()),
                "svg": a.plot.svg.as_ref().map(|p| p.display().to_string()),
            }),
            None,
        )?;
    }
    Ok(())
}

fn gen_lattice(a: GenLattice) -> Outcome {
    let (lo, hi) = split_corners(&a.window, "--window")?;
    let (coeffs, basis) = lattice_from(&a.poly, Some(lo.len()))?;
    if basis.dim() != lo.len() {
        return Err(Failure::Usage(format!(
            "--window has {} coordinates per corner but the polynomial has degree {}",
            lo.len(),
            basis.dim()
        )));
    }
    let w = Window::new(lo, hi)?;
    let points: Vec<Point<f64>> = enumerate_lattice(&basis, &w)?.iter().map(|p| p.point.to_f64()).collect();
    log::info!("enumerated {} lattice points", points.len());
    write_csv(a.out.as_deref(), basis.dim(), &points)?;
    if basis.dim() == 2 {
        write_svg(&a.plot, &points, &w)?;
    } else if a.plot.svg.is_some() {
        return Err(Failure::Module(Error::DimensionMismatch {
            expected: 2,
            found: basis.dim(),
        }));
    }
    if let Some(out) = &a.out {
        emit(
            &json!({
                "schema_version": SCHEMA_VERSION,
                "command": "gen-lattice",
                "polynomial": coeffs,
                "normalized": a.poly.normalize,
                "covolume": f64::from(basis.covolume()),
                "window": window_json(&w),
                "point_count": points.len(),
                "out": out.display().to_string(),
                "tolerance": TOLERANCE,
            }),
            None,
        )?;
    }
    Ok(())
}

fn hit(a: Hit) -> Outcome {
    let (lo, hi) = split_corners(&a.bounds, "--box")?;
    match a.construction {
        Construction::Vdc => {
            if lo.len() != 2 {
                return Err(Failure::Usage("--box for vdc takes 4 values: x0 y0 x1 y1".into()));
            }
            let r = AlignedBox::from_bounds(lo.iter().map(|&v| exact(v)).collect(), hi.iter().map(|&v| exact(v)).collect())?;
            let h = vdc::hit_box(&r)?;
            if !r.contains(&h.point)? {
                return Err(Failure::Falsified(format!("{:?} is outside the box", h.point)));
            }
            emit(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "hit",
                    "construction": "vdc",
                    "box": { "lower": lo, "upper": hi },
                    "volume": r.volume().to_f64(),
                    "point": h.point.to_f64().coords(),
                    "point_exact": exact_strings(&h.point),
                    "signs": h.signs.iter().map(|s| s.symbol().to_string()).collect::<Vec<_>>(),
                    "sequence": h.sequence.support().collect::<Vec<_>>(),
                    "split": h.split,
                }),
                None,
            )
        }
        Construction::Lattice => {
            let (coeffs, basis) = lattice_from(&a.poly, Some(lo.len()))?;
            if basis.dim() != lo.len() {
                return Err(Failure::Usage(format!(
                    "--box has {} coordinates per corner but the polynomial has degree {}",
                    lo.len(),
                    basis.dim()
                )));
            }
            let r = AlignedBox::from_bounds(lo.clone(), hi.clone())?;
            let found = hit_box_lattice(&basis, &r)?;
            emit(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "hit",
                    "construction": "lattice",
                    "polynomial": coeffs,
                    "box": { "lower": lo, "upper": hi },
                    "volume": r.volume(),
                    "found": found.is_some(),
                    "point": found.as_ref().map(|p| p.point.to_f64().coords().to_vec()),
                    "coefficients": found.as_ref().map(|p| p.coeffs.clone()),
                    "tolerance": TOLERANCE,
                }),
                None,
            )
        }
    }
}

fn verify(a: Verify, ctx: &Ctx) -> Outcome {
    let (lo, hi) = split_corners(&a.window, "--window")?;
    let d = lo.len();
    let threshold = match (a.threshold, a.construction) {
        (Some(t), _) => Some(t),
        (None, Some(Construction::Vdc)) => Some(GUARANTEED_VOLUME as f64),
        _ => None,
    };
    let sidecar = io::sidecar_path(&a.points);
    let use_exact = !a.no_exact && sidecar.exists();
    let (count, lower, upper, volume, volume_exact, falsified) = if use_exact {
        let points = io::read_exact(&sidecar, d)?;
        let w = dyadic_window(&lo, &hi)?;
        let r = largest_empty_box_exact(&points, &w)?;
        let falsified = threshold.is_some_and(|t| r.volume > exact(t));
        (
            points.len(),
            r.empty_box.lower().to_f64().coords().to_vec(),
            r.empty_box.upper().to_f64().coords().to_vec(),
            r.volume.to_f64(),
            Some(r.volume.to_decimal_string()),
            falsified,
        )
    } else {
        let points = io::read_points(&a.points, d)?;
        let w = Window::new(lo.clone(), hi.clone())?;
        let r = largest_empty_box(&points, &w)?;
        let falsified = threshold.is_some_and(|t| r.volume > t);
        (
            points.len(),
            r.empty_box.lower().coords().to_vec(),
            r.empty_box.upper().coords().to_vec(),
            r.volume,
            None,
            falsified,
        )
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "construction": a.construction.map(|c| match c { Construction::Vdc => "vdc", Construction::Lattice => "lattice" }),
        "window": { "lower": lo, "upper": hi },
        "point_count": count,
        "exact": use_exact,
        "max_empty_box": {
            "lower": lower,
            "upper": upper,
            "volume": volume,
            "volume_exact": volume_exact,
        },
        "threshold": threshold,
        "falsified": falsified,
        "runtime_ms": ctx.runtime_ms(),
    });
    emit(&report, a.report.as_deref())?;
    if falsified {
        return Err(Failure::Falsified(format!(
            "empty box of volume {volume} exceeds the threshold {}",
            threshold.unwrap_or_default()
        )));
    }
    Ok(())
}

fn growth(a: Growth) -> Outcome {
    if let Some(t) = a.ts.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Failure::Usage(format!("--t value {t} must be positive")));
    }
    let (rows, dim, label, extra) = match a.construction {
        GrowthSource::VdcPositive => (
            growth_count(2, &a.ts, |t| {
                Ok(vdc::enumerate_positive(&Window::cube(2, DyadicRational::zero(), exact(t))?)?.len())
            })?,
            2,
            "vdc-positive",
            Value::Null,
        ),
        GrowthSource::Vdc => (
            growth_count(2, &a.ts, |t| Ok(vdc::enumerate(&Window::cube(2, exact(-t), exact(t))?)?.len()))?,
            2,
            "vdc",
            Value::Null,
        ),
        GrowthSource::Lattice => {
            let (coeffs, basis) = lattice_from(&a.poly, None)?;
            let d = basis.dim();
            let rows = growth_count(d, &a.ts, |t| Ok(enumerate_lattice(&basis, &Window::cube(d, -t, t)?)?.len()))?;
            let extra = json!({
                "polynomial": coeffs,
                "covolume": f64::from(basis.covolume()),
                "expected_ratio": 2f64.powi(d as i32) / f64::from(basis.covolume()),
            });
            (rows, d, "lattice", extra)
        }
    };
    emit(
        &json!({
            "schema_version": SCHEMA_VERSION,
            "command": "growth",
            "construction": label,
            "dim": dim,
            "lattice": extra,
            "rows": rows.iter().map(|r| json!({ "t": r.t, "count": r.count, "ratio": r.ratio })).collect::<Vec<_>>(),
        }),
        None,
    )
}

fn epsnet(a: Epsnet, ctx: &Ctx) -> Outcome {
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(Failure::Usage(format!("--eps {} must lie in (0, 1)", a.eps)));
    }
    let (source, lattice_info) = match a.source {
        Construction::Vdc => (NetSource::Vdc, Value::Null),
        Construction::Lattice => {
            let (coeffs, basis) = lattice_from(&a.poly, None)?;
            let grid = flow_grid(basis.dim(), a.flow.flow_bound, a.flow.flow_step)?;
            let profile = covering_profile(&basis, &grid, a.flow.samples, a.flow.seed)?;
            let info = json!({
                "polynomial": coeffs,
                "covolume": f64::from(basis.covolume()),
                "flow_bound": a.flow.flow_bound,
                "flow_step": a.flow.flow_step,
                "samples": a.flow.samples,
                "seed": a.flow.seed,
                "covering_radius_estimate": profile.max_radius,
            });
            (
                NetSource::Lattice {
                    basis,
                    threshold: profile.threshold,
                },
                info,
            )
        }
    };
    let net = build_net(&source, a.eps)?;
    let v = validate_net(&net)?;
    if let Some(out) = &a.out {
        io::write_points(fs::File::create(out)?, net.dim(), &net.points)?;
    }
    let guaranteed = matches!(source, NetSource::Vdc);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "epsnet",
        "source": net.source,
        "eps": net.eps,
        "dim": net.dim(),
        "side": net.side,
        "side_exact": net.side_exact.as_ref().map(|s| s.to_decimal_string()),
        "threshold": net.threshold,
        "threshold_kind": if guaranteed { "guaranteed" } else { "empirical" },
        "offset": net.offset,
        "point_count": net.points.len(),
        "claimed_constant": net.claimed_constant(),
        "lattice": lattice_info,
        "validation": {
            "valid": v.valid,
            "max_empty_volume": v.max_empty_volume,
            "margin": v.margin,
            "empty_box": { "lower": v.empty_lower, "upper": v.empty_upper },
            "unscaled_volume": v.unscaled_volume,
            "paths_agree": v.paths_agree,
        },
        "out": a.out.as_ref().map(|p| p.display().to_string()),
        "runtime_ms": ctx.runtime_ms(),
    });
    emit(&report, a.report.as_deref())?;
    if guaranteed && !v.valid {
        return Err(Failure::Falsified(format!(
            "net for eps {} misses a box of volume {}",
            a.eps, v.max_empty_volume
        )));
    }
    Ok(())
}

fn random_flow(rng: &mut ChaCha8Rng, d: usize, bound: f64) -> DiagonalFlowVector {
    loop {
        let free: Vec<f64> = (0..d - 1).map(|_| rng.gen_range(-bound..=bound)).collect();
        if free.iter().sum::<f64>().abs() <= bound {
            return DiagonalFlowVector::from_free(&free).expect("trace zero by construction");
        }
    }
}

fn admissibility(a: Admissibility, ctx: &Ctx) -> Outcome {
    let coeffs = coefficients(&a.poly, None)?;
    let field = build_field(&coeffs)?;
    let basis = build_basis(&field, a.poly.normalize);
    let d = basis.dim();

    // norm integrality holds for the unscaled embedding
    let raw = build_basis(&field, false);
    let half = a.window_half.unwrap_or(match d {
        2 => 20.0,
        3 => 6.0,
        _ => 4.0,
    });
    let pts = enumerate_lattice(&raw, &Window::cube(d, -half, half)?)?;
    let mut min_norm = f64::INFINITY;
    let mut max_dev: f64 = 0.0;
    let mut nonzero = 0usize;
    for lp in pts.iter().filter(|p| p.coeffs.iter().any(|&c| c != 0)) {
        nonzero += 1;
        let n = f64::from(norm_product(&lp.point));
        min_norm = min_norm.min(n);
        max_dev = max_dev.max((n - n.round()).abs());
    }
    let norms_ok = nonzero == 0 || (max_dev <= TOLERANCE && min_norm >= 1.0 - TOLERANCE);

    let mut rng = ChaCha8Rng::seed_from_u64(a.flow.seed);
    let mut min_len = f64::INFINITY;
    let mut worst_t = vec![0.0; d];
    for _ in 0..a.trials {
        let t = random_flow(&mut rng, d, a.flow.flow_bound);
        let len = shortest_vector_under_flow(&raw, &t)?;
        if len < min_len {
            min_len = len;
            worst_t = t.t().to_vec();
        }
    }
    let probe_ok = a.trials == 0 || min_len >= 1.0 - 1e-6;

    let mut anti_t = vec![0.0; d];
    anti_t[0] = 1.5;
    anti_t[1] = -1.5;
    let anti = shortest_vector_under_flow(&LatticeBasis::identity(d)?, &DiagonalFlowVector::new(anti_t.clone())?)?;

    let covering = if a.no_threshold {
        Value::Null
    } else {
        let grid = flow_grid(d, a.flow.flow_bound, a.flow.flow_step)?;
        let profile = covering_profile(&basis, &grid, a.flow.samples, a.flow.seed)?;
        json!({
            "flow_bound": a.flow.flow_bound,
            "flow_step": a.flow.flow_step,
            "flows": grid.len(),
            "samples": a.flow.samples,
            "covering_radius_estimate": profile.max_radius,
            "empirical_threshold": profile.threshold,
        })
    };

    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "admissibility",
        "field": {
            "polynomial": coeffs,
            "degree": d,
            "roots": field.roots().iter().map(|&r| f64::from(r)).collect::<Vec<_>>(),
            "irreducible": field.irreducible(),
        },
        "normalized": a.poly.normalize,
        "covolume": f64::from(basis.covolume()),
        "unscaled_covolume": f64::from(basis.unscaled_covolume()),
        "norm_check": {
            "window_half": half,
            "nonzero_points": nonzero,
            "min_norm_product": if nonzero > 0 { json!(min_norm) } else { Value::Null },
            "max_integer_deviation": max_dev,
            "passed": norms_ok,
        },
        "flow_probe": {
            "trials": a.trials,
            "flow_bound": a.flow.flow_bound,
            "seed": a.flow.seed,
            "min_shortest_vector": if a.trials > 0 { json!(min_len) } else { Value::Null },
            "worst_flow": worst_t,
            "passed": probe_ok,
        },
        "anti_example": {
            "basis": "identity",
            "flow": anti_t,
            "shortest_vector": anti,
            "fails_probe": anti < 1.0,
        },
        "covering": covering,
        "tolerance": TOLERANCE,
        "runtime_ms": ctx.runtime_ms(),
    });
    emit(&report, a.report.as_deref())?;
    if !norms_ok || !probe_ok {
        return Err(Failure::Falsified(format!(
            "norm check passed: {norms_ok}, flow probe passed: {probe_ok} (min {min_len})"
        )));
    }
    Ok(())
}
