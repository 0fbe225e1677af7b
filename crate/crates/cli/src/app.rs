//! Subcommands of the `selfaffine` binary.
//!
//! [`run`] writes artifacts and reports to the given streams and returns the
//! process exit code: 0 when every asserted check passes, 1 when a check
//! fails, 2 on malformed input. Input errors are reported on the error
//! stream as a single JSON object `{"error": {"kind": …, "message": …}}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};

use selfaffine_core::affine::ContractionRoute;
use selfaffine_core::attractor::{chaos_game, PointCloud};
use selfaffine_core::classify::{self, Verdict, DEFAULT_ORDER};
use selfaffine_core::compactness::{self, DecayReport};
use selfaffine_core::linalg::Matrix;
use selfaffine_core::moment::{self, MomentCurveSpec};
use selfaffine_core::paraboloid::{self, ParaboloidSpec};
use selfaffine_core::poly::{self, MultiPoly};
use selfaffine_core::rational::{self, Rational};
use selfaffine_core::scaling::{self, ScalingCertificate};
use selfaffine_core::{AffineMap, IteratedFunctionSystem, SeriesVec};

use crate::formats::{self, CurveMeta, FormatError, NumberMode, SvgOptions};
use crate::report::{Report, ReportFormat};

#[derive(Debug, Parser)]
#[command(name = "selfaffine", version, about = "Exact self-affine sets on curves and surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the IFS whose attractor is an arc of the moment curve.
    BuildMoment(BuildMomentArgs),
    /// Build an IFS on the paraboloid from one-dimensional base maps.
    Paraboloid(ParaboloidArgs),
    /// Sample an attractor with the chaos game (CSV or SVG).
    Chaos(ChaosArgs),
    /// Draw a point-cloud CSV as an SVG scatter plot.
    Render(RenderArgs),
    /// Re-check a stored IFS against the curve recorded in its metadata.
    Verify(VerifyArgs),
    /// Check whether maps are scaling factors of a polynomial.
    Scaling(ScalingArgs),
    /// Classify a curve germ fixed by a contraction.
    Classify(ClassifyArgs),
    /// Pullback sequence, span rank and zero-set diameter decay.
    CompactnessDemo(CompactnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Artifact destination; without it the artifact goes to standard
    /// output and the report to standard error.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct BuildMomentArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    /// Contraction ratio; defaults to the largest power of 1/2 within the bound.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Comma-separated anchors; defaults to the uniform grid.
    #[arg(long, allow_hyphen_values = true)]
    pub anchors: Option<String>,
    /// Exact invariance samples per map.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ParaboloidArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Base map `c,d` for `x ↦ c·x + d`; repeat for every map.
    #[arg(long = "map", required = true, allow_hyphen_values = true, value_name = "C,D")]
    pub maps: Vec<String>,
    /// Chaos-game points for the surface residual check.
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ChaosArgs {
    /// IFS JSON; decimal entries are accepted here.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub points: usize,
    #[arg(long, default_value_t = 100)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Coordinates (1-based) drawn on the horizontal and vertical axes.
    #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [1, 2])]
    pub project: Vec<usize>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Point-cloud CSV.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [1, 2])]
    pub project: Vec<usize>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// IFS JSON with curve metadata.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Exact samples per map.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Polynomial, e.g. `x2 - x1`.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// IFS JSON holding the candidate maps.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Word length for the fixed-point check when every map is a scaling factor.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Germ JSON.
    #[arg(long, value_name = "PATH")]
    pub germ: PathBuf,
    /// IFS JSON whose first map fixes the base point of the germ.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// JSON matrix (rows of rational strings) whose first column is the
    /// tangent; defaults to the tangent completed by standard basis vectors.
    #[arg(long, value_name = "PATH")]
    pub basis: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub t1: String,
    /// Truncate the germ to this order.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct CompactnessArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// IFS JSON with a single contraction.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Length m of the pullback sequence.
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    /// Number of zero-set samples.
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Half-width of the box searched for zeros of non-spherical polynomials.
    #[arg(long = "box", default_value_t = 2.0)]
    pub half_width: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

/// Failure modes of a subcommand.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("{0}")]
    Core(#[from] selfaffine_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Format(e) => e.kind(),
            CliError::Core(_) => "value",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }

    /// The machine-readable form written to standard error.
    pub fn to_json(&self) -> String {
        serde_json::json!({"error": {"kind": self.kind(), "message": self.to_string()}}).to_string()
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Runs a parsed command line. Artifacts and reports go to `stdout` (or to
/// `--output`), input errors to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::BuildMoment(a) => build_moment(&a, stdout, stderr),
        Command::Paraboloid(a) => build_paraboloid(&a, stdout, stderr),
        Command::Chaos(a) => chaos(&a, stdout),
        Command::Render(a) => render(&a, stdout),
        Command::Verify(a) => verify(&a, stdout),
        Command::Scaling(a) => scaling_cmd(&a, stdout),
        Command::Classify(a) => classify_cmd(&a, stdout),
        Command::CompactnessDemo(a) => compactness_demo(&a, stdout),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            EXIT_INPUT
        }
    }
}

fn exact(s: &str) -> CliResult<Rational> {
    Ok(rational::parse(s).map_err(FormatError::from)?)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_to(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(stream: &mut dyn Write, contents: &[u8]) -> CliResult<()> {
    stream.write_all(contents).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn report_format(f: FormatArg) -> CliResult<ReportFormat> {
    match f {
        FormatArg::Text => Ok(ReportFormat::Text),
        FormatArg::Csv => Ok(ReportFormat::Csv),
        FormatArg::Json => Ok(ReportFormat::Json),
        FormatArg::Svg => Err(CliError::Usage("svg is only available for point clouds".into())),
    }
}

/// Writes the artifact and the report per [`OutputArgs`].
fn deliver(
    out: &OutputArgs,
    artifact: &str,
    report: &Report,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<bool> {
    let rendered = report.render(report_format(out.format)?);
    match &out.output {
        Some(path) => {
            write_to(path, artifact.as_bytes())?;
            emit(stdout, rendered.as_bytes())?;
        }
        None => {
            emit(stdout, artifact.as_bytes())?;
            emit(stderr, rendered.as_bytes())?;
        }
    }
    Ok(report.passed())
}

fn contraction_lines(report: &mut Report, maps: &[AffineMap]) {
    let mut worst_norm: f64 = 0.0;
    let mut row_sum_failures = Vec::new();
    for (i, f) in maps.iter().enumerate() {
        let cert = f.is_contractive();
        worst_norm = worst_norm.max(cert.numeric_norm);
        if !cert.routes.contains(&ContractionRoute::RowSum) {
            row_sum_failures.push(i);
        }
    }
    let n = maps.first().map_or(0, AffineMap::dim);
    report.check(
        "row-sum",
        row_sum_failures.is_empty(),
        if row_sum_failures.is_empty() {
            format!("all {} maps have max row sum s with {n}·s² < 1", maps.len())
        } else {
            format!("maps without the row-sum certificate: {row_sum_failures:?}")
        },
    );
    report.check(
        "spectral-norm",
        worst_norm < 1.0,
        format!("all norms < 1 (largest {worst_norm:.12})"),
    );
}

fn build_moment(a: &BuildMomentArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<bool> {
    let spec = MomentCurveSpec::new(a.dim, exact(&a.c)?, exact(&a.d)?)?;
    let bound = moment::lambda_bound(&spec);
    let lambda = match &a.lambda {
        Some(s) => exact(s)?,
        None => moment::default_lambda(&spec),
    };
    let anchors = match &a.anchors {
        Some(list) => list.split(',').map(exact).collect::<CliResult<Vec<_>>>()?,
        None => moment::choose_anchors(&spec, &lambda)?,
    };
    let recipe = moment::build_moment_ifs(&spec, &lambda, &anchors)?;

    let mut report = Report::new(format!(
        "moment curve n = {} on [{}, {}]",
        a.dim,
        rational::to_string(spec.c()),
        rational::to_string(spec.d())
    ));
    report.info(format!("printed bound {:.12}", moment::printed_bound_f64(&spec)));
    report.check(
        "lambda-bound",
        lambda <= bound,
        format!(
            "lambda = {} within rational bound {}",
            rational::to_string(&lambda),
            rational::to_string(&bound)
        ),
    );
    report.info(format!("maps: {}", recipe.ifs.len()));
    report.check("tiling", true, "images of [c, d] cover [c, d] without gaps");
    contraction_lines(&mut report, recipe.ifs.maps());
    let samples = moment::random_parameters(&spec, a.points, a.seed);
    let inv = recipe.verify_invariance(&samples);
    invariance_lines(&mut report, &inv);

    let meta = CurveMeta::moment(a.dim, spec.c(), spec.d(), &lambda, &recipe.anchors);
    let json = formats::write_ifs(recipe.ifs.maps(), Some(meta))?;
    deliver(&a.out, &json, &report, stdout, stderr)
}

fn invariance_lines(report: &mut Report, inv: &moment::InvarianceReport) {
    report.check(
        "invariance",
        inv.passed(),
        format!("f_i(η(t)) = η(λ(t − c) + t_i): {} checks, {} violations", inv.checks, inv.violations.len()),
    );
    if let Some(v) = inv.violations.first() {
        let show = |xs: &[Rational]| xs.iter().map(rational::to_string).collect::<Vec<_>>().join(", ");
        report.info(format!(
            "counterexample: map {} at t = {}: image ({}) expected ({})",
            v.map,
            rational::to_string(&v.t),
            show(&v.image),
            show(&v.expected)
        ));
    }
}

fn parse_base_map(s: &str) -> CliResult<(Rational, Rational)> {
    let (c, d) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("base map {s:?} must be written c,d")))?;
    Ok((exact(c)?, exact(d)?))
}

fn build_paraboloid(a: &ParaboloidArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<bool> {
    let base = a.maps.iter().map(|s| parse_base_map(s)).collect::<CliResult<Vec<_>>>()?;
    let spec = ParaboloidSpec::new(a.dim, exact(&a.a)?, exact(&a.b)?, base)?;
    if a.tolerance <= 0.0 {
        return Err(CliError::Usage("tolerance must be positive".into()));
    }
    let ifs = paraboloid::build_paraboloid_ifs(&spec)?;
    let p = poly::paraboloid(a.dim);

    let mut report = Report::new(format!(
        "paraboloid n = {} over [{}, {}]",
        a.dim,
        rational::to_string(spec.a()),
        rational::to_string(spec.b())
    ));
    report.info(format!("surface: {p} = 0"));
    report.info("last translation entry is (n − 1)·d_i², the value the identity below requires");
    for (i, ((c, d), f)) in spec.base_maps().iter().zip(ifs.maps()).enumerate() {
        let id = paraboloid::conjugation_identity(f, c, d)?;
        report.check(
            "conjugation",
            id.holds(),
            format!(
                "map {i}: f∘η = η∘(x ↦ {}·x + {}) term for term",
                rational::to_string(c),
                rational::to_string(d)
            ),
        );
        if d.is_zero() {
            let k = scaling::scaling_constant(&p, f)?;
            report.check(
                "scaling-factor",
                k.as_ref() == Some(&(c * c)),
                format!("map {i}: P∘f = c²·P with c² = {}", rational::to_string(&(c * c))),
            );
        }
    }
    contraction_lines(&mut report, ifs.maps());
    if a.points > 0 {
        let cloud = chaos_game(&ifs, a.points + 100, 100, a.seed)?;
        let residual = paraboloid::surface_residual(&p, &cloud)?;
        report.check(
            "surface-residual",
            residual <= a.tolerance,
            format!("max |P| over {} chaos-game points: {residual:.3e}", cloud.len()),
        );
    }
    let meta = CurveMeta::paraboloid(a.dim, spec.a(), spec.b(), spec.base_maps());
    let json = formats::write_ifs(ifs.maps(), Some(meta))?;
    deliver(&a.out, &json, &report, stdout, stderr)
}

fn projection(project: &[usize]) -> CliResult<(usize, usize)> {
    match project {
        [i, j] if *i >= 1 && *j >= 1 => Ok((i - 1, j - 1)),
        _ => Err(CliError::Usage("--project takes two 1-based coordinates".into())),
    }
}

fn write_cloud(
    cloud: &PointCloud,
    format: FormatArg,
    project: &[usize],
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let bytes = match format {
        FormatArg::Csv => {
            let mut buf = Vec::new();
            formats::write_csv(cloud, &mut buf)?;
            buf
        }
        FormatArg::Svg => {
            let opts = SvgOptions {
                project: projection(project)?,
                ..SvgOptions::default()
            };
            formats::write_svg(cloud, &opts)?.into_bytes()
        }
        other => {
            return Err(CliError::Usage(format!(
                "point clouds are written as csv or svg, not {other:?}"
            )))
        }
    };
    match output {
        Some(p) => write_to(p, &bytes),
        None => emit(stdout, &bytes),
    }
}

fn chaos(a: &ChaosArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    if a.points == 0 {
        return Err(CliError::Usage("--points must be positive".into()));
    }
    let parsed = formats::parse_ifs(&read(&a.input)?, NumberMode::Lenient)?;
    let ifs = IteratedFunctionSystem::new(parsed.maps)?;
    let cloud = chaos_game(&ifs, a.points + a.burn_in, a.burn_in, a.seed)?;
    write_cloud(&cloud, a.format, &a.project, a.output.as_deref(), stdout)?;
    Ok(true)
}

fn render(a: &RenderArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let cloud = formats::read_csv(read(&a.input)?.as_bytes())?;
    write_cloud(&cloud, FormatArg::Svg, &a.project, a.output.as_deref(), stdout)?;
    Ok(true)
}

fn verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let parsed = formats::parse_ifs(&read(&a.input)?, NumberMode::Exact)?;
    let meta = parsed
        .meta
        .ok_or_else(|| CliError::Usage("the IFS file carries no curve metadata".into()))?;
    let maps = parsed.maps;
    let mut report;
    match meta {
        CurveMeta::Moment { n, c, d, lambda, anchors } => {
            let spec = MomentCurveSpec::new(n, exact(&c)?, exact(&d)?)?;
            let lambda = exact(&lambda)?;
            let anchors = anchors.iter().map(|s| exact(s)).collect::<CliResult<Vec<_>>>()?;
            report = Report::new(format!("verify moment curve n = {n} on [{c}, {d}]"));
            report.check(
                "lambda-bound",
                lambda.is_positive() && lambda <= moment::lambda_bound(&spec),
                format!("lambda = {}", rational::to_string(&lambda)),
            );
            report.check(
                "tiling",
                moment::check_tiling(&spec, &lambda, &anchors).is_ok(),
                "images of [c, d] cover [c, d] without gaps",
            );
            report.check(
                "map-count",
                maps.len() == anchors.len(),
                format!("{} maps for {} anchors", maps.len(), anchors.len()),
            );
            contraction_lines(&mut report, &maps);
            let samples = moment::random_parameters(&spec, a.points, a.seed);
            let inv = moment::verify_moment_invariance(&spec, &lambda, &anchors, &maps, &samples);
            invariance_lines(&mut report, &inv);
        }
        CurveMeta::Paraboloid { n, a: lo, b: hi, base_maps } => {
            let base = base_maps
                .iter()
                .map(|[c, d]| Ok((exact(c)?, exact(d)?)))
                .collect::<CliResult<Vec<_>>>()?;
            let spec = ParaboloidSpec::new(n, exact(&lo)?, exact(&hi)?, base)?;
            report = Report::new(format!("verify paraboloid n = {n} over [{lo}, {hi}]"));
            report.check(
                "map-count",
                maps.len() == spec.base_maps().len(),
                format!("{} maps for {} base maps", maps.len(), spec.base_maps().len()),
            );
            for (i, ((c, d), f)) in spec.base_maps().iter().zip(&maps).enumerate() {
                let holds = f.dim() == n && paraboloid::conjugation_identity(f, c, d)?.holds();
                report.check("conjugation", holds, format!("map {i}: f∘η = η∘(c·x + d) term for term"));
            }
            contraction_lines(&mut report, &maps);
        }
    }
    emit(stdout, report.render(report_format(a.format)?).as_bytes())?;
    Ok(report.passed())
}

fn scaling_cmd(a: &ScalingArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let parsed = formats::parse_ifs(&read(&a.input)?, NumberMode::Exact)?;
    let dim = parsed.maps[0].dim();
    let p = formats::parse_polynomial(&a.poly, Some(dim))?;
    let mut report = Report::new(format!("scaling factors of {p}"));
    let mut certificates = Vec::new();
    for (i, f) in parsed.maps.iter().enumerate() {
        match ScalingCertificate::new(&p, f) {
            Ok(Some(cert)) => {
                report.check(
                    "scaling-factor",
                    true,
                    format!("map {i}: P∘f = C·P with C = {}", rational::to_string(&cert.constant)),
                );
                certificates.push(cert);
            }
            Ok(None) => {
                report.check("scaling-factor", false, format!("map {i}: P∘f is not a multiple of P"));
            }
            Err(e @ (selfaffine_core::Error::Singular | selfaffine_core::Error::NotContractive)) => {
                report.check("scaling-factor", false, format!("map {i}: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if certificates.len() == parsed.maps.len() {
        let fixed: Vec<Vec<Rational>> = parsed
            .maps
            .iter()
            .map(AffineMap::fixed_point)
            .collect::<Result<_, _>>()?;
        let distinct = fixed.iter().any(|x| x != &fixed[0]);
        if parsed.maps.len() >= 2 {
            report.check(
                "self-affine-pair",
                distinct,
                "two scaling factors with distinct fixed points",
            );
        }
        let surface = scaling::verify_fixed_points_on_surface(&p, &parsed.maps, a.depth)?;
        report.check(
            "fixed-points-on-surface",
            surface.passed(),
            format!(
                "{} words up to length {}: P(x_w) = 0 and |C_w| < 1 ({} violations)",
                surface.words_checked,
                surface.depth,
                surface.violations.len()
            ),
        );
    }
    emit(stdout, report.render(report_format(a.format)?).as_bytes())?;
    Ok(report.passed())
}

/// `[γ′(t0) | e_k …]`, skipping the standard vector at the tangent's
/// largest entry so the columns stay independent.
fn default_basis(tangent: &[Rational]) -> CliResult<Matrix> {
    let n = tangent.len();
    let pivot = (0..n)
        .max_by(|&i, &j| tangent[i].abs().cmp(&tangent[j].abs()).then(j.cmp(&i)))
        .filter(|&i| !tangent[i].is_zero())
        .ok_or_else(|| CliError::Usage("the germ has zero tangent".into()))?;
    let mut cols: Vec<Vec<Rational>> = vec![tangent.to_vec()];
    for k in (0..n).filter(|&k| k != pivot) {
        let mut e = vec![Rational::zero(); n];
        e[k] = rational::int(1);
        cols.push(e);
    }
    let rows = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    Ok(Matrix::from_rows(rows)?)
}

fn classify_cmd(a: &ClassifyArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let mut germ = formats::parse_germ(&read(&a.germ)?)?;
    if let Some(order) = a.order {
        if order == 0 || order > germ.order() {
            return Err(CliError::Usage(format!(
                "--order must be between 1 and the germ order {}",
                germ.order()
            )));
        }
        let coords: Vec<Vec<Rational>> = germ
            .series
            .coords()
            .iter()
            .map(|s| s.coeffs()[..=order].to_vec())
            .collect();
        germ.series = SeriesVec::from_coefficients(order, &coords)?;
    }
    let parsed = formats::parse_ifs(&read(&a.input)?, NumberMode::Exact)?;
    let f = &parsed.maps[0];
    if f.dim() != germ.dim() {
        return Err(CliError::Usage(format!(
            "map dimension {} differs from germ dimension {}",
            f.dim(),
            germ.dim()
        )));
    }
    let j = match &a.basis {
        Some(path) => {
            let rows: Vec<Vec<String>> = serde_json::from_str(&read(path)?).map_err(FormatError::from)?;
            formats::parse_matrix(&rows, NumberMode::Exact)?
        }
        None => default_basis(&germ.tangent())?,
    };
    let t1 = exact(&a.t1)?;
    let result = classify::classify_curve(&germ, f.matrix(), &j, &t1)?;

    let mut report = Report::new(format!("classify germ of order {} in dimension {}", germ.order(), germ.dim()));
    let base = germ.base_point();
    report.check(
        "fixed-point",
        f.apply(&base)? == base,
        "the map fixes the base point γ(t0)",
    );
    if germ.order() < DEFAULT_ORDER {
        report.info(format!("truncation order {} (default {DEFAULT_ORDER})", germ.order()));
    }
    report.info(format!("λ = {}", rational::to_string(&result.lambda)));
    for stage in &result.stages {
        report.info(format!("{}: {} | {}", stage.name, stage.identity, stage.detail));
    }
    let detail = match &result.verdict {
        Verdict::MomentImage { profile } => format!("profile {profile:?}"),
        Verdict::ExponentGap {
            profile,
            row,
            missing_degree,
        } => format!("profile {profile:?}; row {row}: missing monomial t^{missing_degree}"),
        Verdict::ConjugationFails { reason } => reason.clone(),
        Verdict::HyperplaneDegenerate { coordinate } => format!("coordinate {coordinate}"),
    };
    report.info(format!("verdict: {} ({detail})", result.verdict.label()));
    emit(stdout, report.render(report_format(a.format)?).as_bytes())?;
    Ok(report.passed())
}

fn compactness_demo(a: &CompactnessArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let parsed = formats::parse_ifs(&read(&a.input)?, NumberMode::Exact)?;
    if parsed.maps.len() != 1 {
        return Err(CliError::Usage(format!(
            "compactness-demo takes exactly one map, found {}",
            parsed.maps.len()
        )));
    }
    if a.points == 0 {
        return Err(CliError::Usage("--points must be positive".into()));
    }
    let f = &parsed.maps[0];
    let p = formats::parse_polynomial(&a.poly, Some(f.dim()))?;
    let seq = compactness::pullback_sequence(&p, f, a.depth)?;
    let samples = if f.dim() >= 2 && p == poly::unit_sphere(f.dim()) {
        compactness::to_cloud(f.dim(), &compactness::unit_sphere_samples(f.dim(), a.points)?)?
    } else {
        if a.half_width.is_nan() || a.half_width <= 0.0 {
            return Err(CliError::Usage("--box must be positive".into()));
        }
        compactness::bisection_zero_samples(&p, -a.half_width, a.half_width, a.points, a.seed)?
    };
    let decay = compactness::diameter_decay_report(&seq, &samples)?;
    let text = match a.format {
        FormatArg::Csv => decay_csv(&decay),
        format => {
            let report = decay_report(&p, &decay);
            match report_format(format)? {
                ReportFormat::Text => decay_table(&decay) + &report.render(ReportFormat::Text),
                other => report.render(other),
            }
        }
    };
    emit(stdout, text.as_bytes())?;
    Ok(decay.passed())
}

fn decay_csv(decay: &DecayReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["j", "rank_so_far", "sampled_diameter", "diameter_bound", "max_residual"]);
    for r in &decay.rows {
        let _ = w.write_record([
            r.j.to_string(),
            r.rank_so_far.to_string(),
            format!("{:.16e}", r.sampled_diameter),
            format!("{:.16e}", r.diameter_bound),
            format!("{:.16e}", r.max_residual),
        ]);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn decay_table(decay: &DecayReport) -> String {
    let mut s = format!("{:>4} {:>6} {:>22} {:>22} {:>12}\n", "j", "rank", "sampled diameter", "bound", "residual");
    for r in &decay.rows {
        s += &format!(
            "{:>4} {:>6} {:>22.15} {:>22.15} {:>12.3e}\n",
            r.j, r.rank_so_far, r.sampled_diameter, r.diameter_bound, r.max_residual
        );
    }
    s
}

fn decay_report(p: &MultiPoly, decay: &DecayReport) -> Report {
    let mut report = Report::new(format!("pullbacks of {p}"));
    report.check(
        "span-rank",
        decay.span.rank as u128 <= decay.span.cap,
        format!(
            "rank {} with basis {:?}, at most {} monomials",
            decay.span.rank, decay.span.basis, decay.span.cap
        ),
    );
    report.check(
        "pullback-zeros",
        decay.rows.iter().all(|r| r.max_residual <= r.residual_tolerance),
        "P_j vanishes on f^j(samples) for every j",
    );
    report.check(
        "diameter-decay",
        decay.rows.iter().all(|r| r.sampled_diameter <= r.diameter_bound),
        format!("sampled diameters within ‖M‖^j · diameter, ‖M‖ = {:.12}", decay.operator_norm),
    );
    report.check("diameter-monotone", decay.monotone, "sampled diameters never grow once below the start");
    for w in &decay.witnesses {
        let combo = decay
            .span
            .basis
            .iter()
            .zip(&w.coefficients)
            .map(|(k, c)| format!("{}·P_{k}", rational::to_string(c)))
            .collect::<Vec<_>>()
            .join(" + ");
        report.check(
            "dependency-witness",
            w.passed(),
            format!(
                "P_{} = {combo} (exact; {} sampled points in the basis intersection)",
                w.j, w.intersection_points
            ),
        );
    }
    report.info(decay.conclusion);
    report
}
