use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use dampdet::determinant::{
    determinant_report, zeta_assembled, zeta_direct, DeterminantReport, SpectrumSource,
};
use dampdet::general::enumerate_general;
use dampdet::rational::RationalSpectrum;
use dampdet::sweep::{run_sweep, SweepSpec};
use dampdet::verify::run_checks;
use dampdet::{BranchCut, CutSide, EigenvalueRecord, Error, RationalSplit, StringConfig};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_AGREEMENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "dampdet",
    version,
    about = "Eigenvalues and spectral determinant of a string with point damping"
)]
struct Cli {
    /// Log progress and warnings at info level.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List eigenvalues with |Im| up to a bound.
    Eig(EigArgs),
    /// Determinant report as JSON.
    Det(DetArgs),
    /// Spectral zeta function at one point.
    Zeta(ZetaArgs),
    /// Determinant along a grid of real damping values, as CSV.
    Sweep(SweepArgs),
    /// Run the built-in consistency checks.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// String length.
    #[arg(long = "L", default_value_t = 1.0)]
    length: f64,
    /// Damping position in (0, L).
    #[arg(long)]
    a: Option<f64>,
    /// Rational split a = p L0, L - a = q L0.
    #[arg(long, requires = "q")]
    p: Option<u32>,
    #[arg(long, requires = "p")]
    q: Option<u32>,
    /// Damping strength as "re" or "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Accept a float position as rational when a continued-fraction
    /// approximant with this denominator bound reproduces it.
    #[arg(long)]
    max_denominator: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rational,
    General,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cut {
    Neg,
    Pos,
}

impl From<Cut> for BranchCut {
    fn from(c: Cut) -> Self {
        match c {
            Cut::Neg => BranchCut::new(CutSide::NegAxis),
            Cut::Pos => BranchCut::new(CutSide::PosAxis),
        }
    }
}

#[derive(Args)]
struct EigArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 20.0)]
    im_bound: f64,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct DetArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, value_enum, default_value_t = Cut::Neg)]
    cut: Cut,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZetaMode {
    Direct,
    Assembled,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Point s as "re" or "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Complex64,
    #[arg(long, value_enum, default_value_t = Cut::Neg)]
    cut: Cut,
    #[arg(long, value_enum, default_value_t = ZetaMode::Assembled)]
    mode: ZetaMode,
    /// Eigenvalue cutoff for the direct sum.
    #[arg(long, default_value_t = 1e4)]
    im_bound: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// Standard panel: a, b (negative-axis cut) or c, d (positive-axis cut);
    /// a and c use a = L/3, b and d use a = L/2.
    #[arg(long, value_parser = ["a", "b", "c", "d"], conflicts_with_all = ["alpha_start", "alpha_end", "step", "length", "a", "p", "q", "cut"])]
    preset: Option<String>,
    #[arg(long = "L", default_value_t = 1.0)]
    length: f64,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, requires = "q")]
    p: Option<u32>,
    #[arg(long, requires = "p")]
    q: Option<u32>,
    #[arg(long)]
    max_denominator: Option<u32>,
    #[arg(long, value_enum)]
    cut: Option<Cut>,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    alpha_start: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    alpha_end: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, default_value_t = 1e-3)]
    exclude_radius: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run only these checks (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("'{s}': {e}"));
    let value = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err("expected \"re\" or \"re,im\"".into()),
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err("value must be finite".into())
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

type CmdResult = Result<ExitCode, Failure>;

/// Resolve position flags into a configuration and, when the position is
/// known to be rational, its split.
fn resolve_position(
    length: f64,
    a: Option<f64>,
    pq: Option<(u32, u32)>,
    max_den: Option<u32>,
) -> Result<(f64, Option<RationalSplit>), Failure> {
    match (a, pq) {
        (_, Some((p, q))) => {
            let split = RationalSplit::new(length, p, q)?;
            let position = length * f64::from(p) / f64::from(p + q);
            if let Some(a) = a {
                if (a - position).abs() > 1e-12 * length {
                    return Err(Failure::Usage(format!(
                        "--a {a} contradicts --p {p} --q {q}"
                    )));
                }
            }
            Ok((position, Some(split)))
        }
        (Some(a), None) => {
            let split = match max_den {
                Some(d) => {
                    let s = RationalSplit::from_position(length, a, d);
                    if s.is_none() {
                        log::warn!("no fraction with denominator <= {d} reproduces a = {a}");
                    }
                    s
                }
                None => None,
            };
            Ok((a, split))
        }
        (None, None) => Err(Failure::Usage("give either --a or --p and --q".into())),
    }
}

fn resolve(args: &ConfigArgs) -> Result<(StringConfig, Option<RationalSplit>), Failure> {
    let (position, split) = resolve_position(
        args.length,
        args.a,
        args.p.zip(args.q),
        args.max_denominator,
    )?;
    let cfg = StringConfig::new(args.length, position, args.alpha)?;
    Ok((cfg, split))
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn opt_pair(z: Option<Complex64>) -> Value {
    z.map_or(Value::Null, pair)
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit_json(value: &Value) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

fn cmd_eig(args: &EigArgs) -> CmdResult {
    let (cfg, split) = resolve(&args.config)?;
    if !(args.im_bound > 0.0 && args.im_bound.is_finite()) {
        return Err(Failure::Usage("--im-bound must be positive".into()));
    }
    let use_rational = match args.mode {
        Mode::Rational if split.is_none() => {
            return Err(Failure::Usage(
                "rational mode needs --p/--q or --max-denominator".into(),
            ))
        }
        Mode::Rational => true,
        Mode::General => false,
        Mode::Auto => split.is_some(),
    };
    let (records, bound): (Vec<EigenvalueRecord>, _) = match split.filter(|_| use_rational) {
        Some(split) => (
            RationalSpectrum::solve(&split, cfg.alpha)?.eigenvalues(args.im_bound)?,
            None,
        ),
        None => {
            let (r, b) = enumerate_general(&cfg, args.im_bound)?;
            (r, Some(b))
        }
    };
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["re", "im", "family", "k", "j", "multiplicity", "residual"])?;
            for r in &records {
                w.write_record([
                    sci(r.value.re),
                    sci(r.value.im),
                    r.family.tag().to_string(),
                    r.family.k().map_or(String::new(), |k| k.to_string()),
                    r.family.j().to_string(),
                    r.multiplicity.to_string(),
                    sci(r.residual),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "re": r.value.re,
                        "im": r.value.im,
                        "family": r.family.tag(),
                        "k": r.family.k(),
                        "j": r.family.j(),
                        "multiplicity": r.multiplicity,
                        "residual": r.residual,
                    })
                })
                .collect();
            let localization = bound.map_or(
                Value::Null,
                |b| json!({ "c1": b.c1, "c2": b.c2, "spacing": b.spacing }),
            );
            emit_json(&json!({
                "mode": if use_rational { "rational" } else { "general" },
                "im_bound": args.im_bound,
                "localization": localization,
                "eigenvalues": rows,
            }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_json(cfg: &StringConfig, split: Option<&RationalSplit>, r: &DeterminantReport) -> Value {
    // Report p and q in the orientation of the flags, not the normalized one.
    let pq = split.map(|s| if s.swapped { (s.q, s.p) } else { (s.p, s.q) });
    json!({
        "config": {
            "L": cfg.length,
            "a": cfg.position,
            "alpha": pair(cfg.alpha),
            "p": pq.map(|v| v.0),
            "q": pq.map(|v| v.1),
        },
        "cut": r.cut.side.name(),
        "regime": r.regime.name(),
        "closed": pair(r.closed),
        "from_roots": opt_pair(r.from_roots),
        "zeta_path": opt_pair(r.zeta_path),
        "zeta_prime": opt_pair(r.zeta_prime),
        "branch_integer_m": r.branch_integer,
        "agreement": r.agreement,
    })
}

fn cmd_det(args: &DetArgs) -> CmdResult {
    let (cfg, split) = resolve(&args.config)?;
    if split.is_none() {
        eprintln!("note: position not given as a rational split; only the closed form is reported");
    }
    let report = determinant_report(&cfg, args.cut.into(), split.as_ref())?;
    emit_json(&report_json(&cfg, split.as_ref(), &report))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_zeta(args: &ZetaArgs) -> CmdResult {
    let (cfg, split) = resolve(&args.config)?;
    let cut: BranchCut = args.cut.into();
    let out = match args.mode {
        ZetaMode::Assembled => {
            let split = split.ok_or_else(|| {
                Failure::Usage("assembled mode needs a rational split (--p/--q)".into())
            })?;
            let spectrum = RationalSpectrum::solve(&split, cfg.alpha)?;
            let value = zeta_assembled(&spectrum.mus, &split, args.s, cut)?;
            json!({ "mode": "assembled", "s": pair(args.s), "cut": cut.side.name(), "value": pair(value) })
        }
        ZetaMode::Direct => {
            let source = match split {
                Some(split) => SpectrumSource::Rational {
                    split,
                    alpha: cfg.alpha,
                },
                None => SpectrumSource::General(cfg),
            };
            let est = zeta_direct(&source, args.s, cut, args.im_bound)?;
            json!({
                "mode": "direct",
                "s": pair(args.s),
                "cut": cut.side.name(),
                "im_bound": args.im_bound,
                "value": pair(est.value),
                "partial_sum": pair(est.partial),
                "tail": pair(est.tail),
                "tail_bar": est.tail_bar,
                "eigenvalue_count": est.count,
            })
        }
    };
    emit_json(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, Failure> {
    if let Some(name) = &args.preset {
        let mut spec = SweepSpec::preset(name)
            .ok_or_else(|| Failure::Usage(format!("unknown preset '{name}'")))?;
        spec.exclude_radius = args.exclude_radius;
        return Ok(spec);
    }
    let (position, split) = resolve_position(
        args.length,
        args.a,
        args.p.zip(args.q),
        args.max_denominator,
    )?;
    let spec = SweepSpec {
        alpha_start: args.alpha_start,
        alpha_end: args.alpha_end,
        step: args.step,
        exclude_radius: args.exclude_radius,
        cut: args.cut.unwrap_or(Cut::Neg).into(),
        length: args.length,
        position,
        split,
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(spec)
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let spec = sweep_spec(args)?;
    let rows = run_sweep(&spec)?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record([
        "alpha",
        "det_closed_re",
        "det_closed_im",
        "det_numeric_re",
        "det_numeric_im",
        "note",
        "error",
    ])?;
    let parts =
        |z: Option<Complex64>| z.map_or([String::new(), String::new()], |z| [sci(z.re), sci(z.im)]);
    for row in &rows {
        let [cre, cim] = parts(row.closed);
        let [nre, nim] = parts(row.numeric);
        w.write_record([
            sci(row.alpha),
            cre,
            cim,
            nre,
            nim,
            row.kind.name().to_string(),
            row.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let results = run_checks(args.seed, &args.only).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = io::stdout().lock();
    for r in &results {
        writeln!(
            out,
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        )?;
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name)
        .collect();
    if failed.is_empty() {
        writeln!(out, "all checks passed")?;
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(EXIT_VERIFY))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            log::LevelFilter::Info
        } else {
            log::LevelFilter::Warn
        })
        .init();
    let result = match &cli.command {
        Command::Eig(a) => cmd_eig(a),
        Command::Det(a) => cmd_det(a),
        Command::Zeta(a) => cmd_zeta(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Agreement { .. } => EXIT_AGREEMENT,
                ref e if e.is_solver_failure() => EXIT_SOLVER,
                _ => EXIT_USAGE,
            })
        }
    }
}
