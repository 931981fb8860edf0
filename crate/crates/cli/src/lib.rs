//! Command-line front end: parse a [`RunConfig`], dispatch to the core
//! library, write JSON-lines.
//!
//! Exit codes: 0 on success, 1 for invalid input, 2 for numeric failures
//! (including verification suites that do not pass).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use vahlen_core::eisenstein::{eval_hecke_extrapolated, eval_series, fourier_coefficient, SeriesKind, DEFAULT_LADDER};
use vahlen_core::kernels::{
    hecke_kernel_extrapolated, hyper_kernels_pointwise, kernel_series, HyperSeriesKind, KernelKind,
};
use vahlen_core::modular::{enumerate_cosets, CosetTable, EnumerationBound, GroupParams};
use vahlen_core::verify::{residual_suite, ResidualTarget, SuiteConfig};
use vahlen_core::VectorPoint;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] vahlen_core::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_validation() => 2,
            CliError::VerifyFailed(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Full invocation: a subcommand plus the shared flags.
#[derive(Debug, Clone, Parser)]
#[command(name = "vahlen", version, about = "Clifford-analytic automorphic series on upper half-space")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Ambient dimension n.
    #[arg(long, global = true, default_value_t = 3)]
    pub n: usize,
    /// Number of translation generators p.
    #[arg(long, global = true, default_value_t = 1)]
    pub p: usize,
    /// Level N of the congruence subgroup.
    #[arg(long = "N", global = true, default_value_t = 3)]
    pub level: u64,
    /// Order k for k-genic, hypergenic and hyperbolic harmonic objects.
    #[arg(long, global = true)]
    pub k: Option<f64>,
    /// Maximal generator-word length of the coset enumeration.
    #[arg(long = "level-L", global = true, default_value_t = 12)]
    pub word_len: usize,
    /// Row-norm cutoff; defaults to the radius up to which the table is complete.
    #[arg(long = "row-R", global = true)]
    pub row_r: Option<f64>,
    #[arg(long = "lattice-radius", global = true, default_value_t = 0.0)]
    pub lattice_radius: f64,
    /// Comma-separated decreasing s values for extrapolation to s = 0.
    #[arg(long = "s-ladder", global = true, value_delimiter = ',')]
    pub s_ladder: Option<Vec<f64>>,
    /// JSON-lines of points: `[x...]` or `{"x": [...], "y": [...]}`.
    #[arg(long = "points-file", global = true)]
    pub points_file: Option<PathBuf>,
    /// Product grid, one comma-separated entry per coordinate: `c` or `lo:hi:count`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for cached coset tables, keyed by a hash of the enumeration request.
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Enumerate coset representatives and write the table as JSON-lines.
    Enumerate,
    /// Evaluate an Eisenstein-type series at points.
    Eval {
        #[arg(long, value_enum, default_value_t = SeriesName::Monogenic)]
        series: SeriesName,
        /// Point as comma-separated coordinates; repeatable.
        #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append, allow_hyphen_values = true)]
        x: Vec<f64>,
        /// Real exponent of the Hecke factor.
        #[arg(long)]
        s: Option<f64>,
    },
    /// Evaluate a kernel series at point pairs, or over a grid in x.
    Kernel {
        #[arg(long, value_enum, default_value_t = KernelName::Cauchy)]
        kernel: KernelName,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Option<Vec<f64>>,
        #[arg(long)]
        s: Option<f64>,
    },
    /// Closed-form Fourier coefficient of the Hecke series.
    Fourier {
        #[arg(long = "x-n")]
        x_n: f64,
        /// Frequency vector, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        g: Vec<f64>,
        #[arg(long)]
        s: f64,
        #[arg(long = "s-im", default_value_t = 0.0)]
        s_im: f64,
    },
    /// Run a residual suite and write one record per check.
    Verify {
        /// monogenicity, k-genicity, hypergenicity, automorphy, asymmetry or limit-at-infinity
        #[arg(long, value_parser = parse_target)]
        suite: ResidualTarget,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesName {
    Monogenic,
    Kgenic,
    Hecke,
    Hypergenic,
    HyperbolicHarmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelName {
    Cauchy,
    Kgenic,
    Hecke,
    A,
    B,
    E,
    F,
    H,
    /// `p, q, H, E, F` at a single pair, no series.
    Pointwise,
}

fn parse_target(s: &str) -> Result<ResidualTarget, String> {
    s.parse().map_err(|e: vahlen_core::Error| e.to_string())
}

impl Common {
    pub fn params(&self) -> CliResult<GroupParams> {
        Ok(GroupParams::new(self.n, self.p, self.level)?)
    }

    fn require_k(&self) -> CliResult<f64> {
        self.k.ok_or_else(|| CliError::Invalid("this command needs --k".into()))
    }

    fn integer_k(&self) -> CliResult<usize> {
        let k = self.require_k()?;
        if k < 1.0 || k.fract() != 0.0 {
            return Err(CliError::Invalid(format!("--k must be a positive integer here, got {k}")));
        }
        Ok(k as usize)
    }
}

/// A point `x` and, for kernels, its partner `y`.
type PointPair = (Vec<f64>, Option<Vec<f64>>);

/// Points of `--points-file` and `--grid`, plus an explicit list.
fn collect_points(common: &Common, explicit: Vec<Vec<f64>>) -> CliResult<Vec<PointPair>> {
    let mut out: Vec<(Vec<f64>, Option<Vec<f64>>)> = explicit.into_iter().map(|x| (x, None)).collect();
    if let Some(path) = &common.points_file {
        out.extend(read_points_file(path)?);
    }
    if let Some(spec) = &common.grid {
        out.extend(parse_grid(spec)?.into_iter().map(|x| (x, None)));
    }
    for (x, y) in &out {
        for v in std::iter::once(x).chain(y.iter()) {
            if v.len() != common.n {
                return Err(CliError::Invalid(format!("point {v:?} does not have n = {} coordinates", common.n)));
            }
        }
    }
    Ok(out)
}

fn read_points_file(path: &Path) -> CliResult<Vec<PointPair>> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Line {
        Bare(Vec<f64>),
        Pair { x: Vec<f64>, y: Option<Vec<f64>> },
    }
    let f = File::open(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(&line)
            .map_err(|e| CliError::Invalid(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(match parsed {
            Line::Bare(x) => (x, None),
            Line::Pair { x, y } => (x, y),
        });
    }
    Ok(out)
}

/// `c` or `lo:hi:count` per coordinate, combined as a product grid with
/// the last coordinate varying fastest.
pub fn parse_grid(spec: &str) -> CliResult<Vec<Vec<f64>>> {
    let bad = |m: String| CliError::Invalid(format!("grid '{spec}': {m}"));
    let mut axes = Vec::new();
    for part in spec.split(',') {
        let fields: Vec<&str> = part.split(':').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("'{s}' is not a number")));
        match fields.as_slice() {
            [c] => axes.push(vec![num(c)?]),
            [lo, hi, count] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let m: usize = count.parse().map_err(|_| bad(format!("'{count}' is not a count")))?;
                if m == 0 {
                    return Err(bad("a range needs at least one point".into()));
                }
                let axis = if m == 1 {
                    vec![lo]
                } else {
                    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
                };
                axes.push(axis);
            }
            _ => return Err(bad(format!("entry '{part}' is neither c nor lo:hi:count"))),
        }
    }
    let mut out = vec![Vec::new()];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    if out.len() > 1_000_000 {
        return Err(bad(format!("{} points is too many", out.len())));
    }
    Ok(out)
}

fn cache_key(params: &GroupParams, bound: &EnumerationBound) -> CliResult<String> {
    let descr = serde_json::to_vec(&json!({
        "params": params,
        "bound": bound,
        "version": env!("CARGO_PKG_VERSION"),
    }))?;
    Ok(hex::encode(Sha256::digest(&descr)))
}

/// Enumerate, or load from the cache when one is configured.
pub fn load_table(common: &Common) -> CliResult<CosetTable> {
    let params = common.params()?;
    let bound = EnumerationBound::words(common.word_len);
    let Some(dir) = &common.cache_dir else {
        return Ok(enumerate_cosets(&params, &bound)?);
    };
    let path = dir.join(format!("{}.jsonl", cache_key(&params, &bound)?));
    if path.exists() {
        let t = CosetTable::read_jsonl(BufReader::new(File::open(&path)?))?;
        if t.params == params && t.bound == bound {
            return Ok(t);
        }
    }
    let t = enumerate_cosets(&params, &bound)?;
    std::fs::create_dir_all(dir)?;
    // write then rename so a concurrent reader never sees half a file
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        t.write_jsonl(&mut w)?;
        w.flush()?;
    }
    std::fs::rename(&tmp, &path)?;
    Ok(t)
}

fn cutoff(common: &Common, table: &CosetTable) -> f64 {
    common.row_r.unwrap_or(table.complete_up_to_r)
}

fn ladder(common: &Common) -> Vec<f64> {
    common.s_ladder.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec())
}

fn write_line<T: Serialize>(out: &mut dyn Write, v: &T) -> CliResult<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn series_kind(name: SeriesName, common: &Common, s: Option<f64>) -> CliResult<Option<SeriesKind>> {
    Ok(Some(match name {
        SeriesName::Monogenic => SeriesKind::Monogenic,
        SeriesName::Kgenic => SeriesKind::KGenic {
            k: common.integer_k()? as i32,
        },
        SeriesName::Hecke => match s {
            Some(s) => SeriesKind::Hecke { s },
            None => return Ok(None),
        },
        SeriesName::Hypergenic => SeriesKind::Hypergenic { k: common.require_k()? },
        SeriesName::HyperbolicHarmonic => SeriesKind::HyperbolicHarmonic { k: common.require_k()? },
    }))
}

fn run_eval(common: &Common, series: SeriesName, xs: &[f64], s: Option<f64>, out: &mut dyn Write) -> CliResult<()> {
    let params = common.params()?;
    let explicit: Vec<Vec<f64>> = if xs.is_empty() {
        Vec::new()
    } else if !xs.len().is_multiple_of(common.n) {
        return Err(CliError::Invalid(format!("--x values must come in groups of n = {}", common.n)));
    } else {
        xs.chunks(common.n).map(<[f64]>::to_vec).collect()
    };
    let points = collect_points(common, explicit)?;
    if points.is_empty() {
        return Err(CliError::Invalid("no points: give --x, --points-file or --grid".into()));
    }
    let kind = series_kind(series, common, s)?;
    if kind.is_none() && common.s_ladder.is_none() {
        return Err(CliError::Invalid("the Hecke series needs --s or --s-ladder".into()));
    }
    let table = load_table(common)?;
    let r = cutoff(common, &table);
    let name = series.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    for (x, _) in points {
        let xp = VectorPoint::new(x);
        let line = match kind {
            Some(kind) => {
                let v = eval_series(kind, &params, &xp, &table, r)?;
                json!({
                    "series": name, "params": params, "x": xp.coords, "truncation": v.truncation,
                    "value": v.value, "terms_used": v.terms_used, "tail_estimate": v.tail_estimate,
                })
            }
            None => {
                let e = eval_hecke_extrapolated(&params, &xp, &ladder(common), &table, r)?;
                json!({
                    "series": name, "params": params, "x": xp.coords, "truncation": e.value.truncation,
                    "s_ladder": ladder(common), "value": e.value.value, "terms_used": e.value.terms_used,
                    "tail_estimate": e.value.tail_estimate, "extrapolation_error": e.extrapolation_error,
                })
            }
        };
        write_line(out, &line)?;
    }
    Ok(())
}

fn run_kernel(
    common: &Common,
    kernel: KernelName,
    x: Option<Vec<f64>>,
    y: Option<Vec<f64>>,
    s: Option<f64>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let params = common.params()?;
    let explicit: Vec<Vec<f64>> = x.into_iter().collect();
    let mut pairs = collect_points(common, explicit)?;
    if let Some(y) = &y {
        if y.len() != common.n {
            return Err(CliError::Invalid(format!("--y must have n = {} coordinates", common.n)));
        }
    }
    for (_, py) in pairs.iter_mut() {
        if py.is_none() {
            *py = y.clone();
        }
    }
    if pairs.is_empty() {
        return Err(CliError::Invalid("no points: give --x, --points-file or --grid".into()));
    }
    if pairs.iter().any(|(_, y)| y.is_none()) {
        return Err(CliError::Invalid("every x needs a second point: give --y".into()));
    }
    let kind = match kernel {
        KernelName::Cauchy => Some(KernelKind::Cauchy),
        KernelName::Kgenic => Some(KernelKind::KGenic { k: common.integer_k()? }),
        KernelName::Hecke => s.map(|s| KernelKind::Hecke { s }),
        KernelName::A => Some(KernelKind::Hyper(HyperSeriesKind::A)),
        KernelName::B => Some(KernelKind::Hyper(HyperSeriesKind::B)),
        KernelName::E => Some(KernelKind::Hyper(HyperSeriesKind::E2n)),
        KernelName::F => Some(KernelKind::Hyper(HyperSeriesKind::F2n)),
        KernelName::H => Some(KernelKind::Hyper(HyperSeriesKind::HSeries)),
        KernelName::Pointwise => None,
    };
    if kernel == KernelName::Pointwise {
        for (x, y) in pairs {
            let (xp, yp) = (VectorPoint::new(x), VectorPoint::new(y.unwrap_or_default()));
            let k = hyper_kernels_pointwise(&xp, &yp, common.n)?;
            write_line(out, &json!({"x": xp.coords, "y": yp.coords, "value": k}))?;
        }
        return Ok(());
    }
    if kernel == KernelName::Hecke && s.is_none() && common.s_ladder.is_none() {
        return Err(CliError::Invalid("the Hecke kernel needs --s or --s-ladder".into()));
    }
    let table = load_table(common)?;
    let r = cutoff(common, &table);
    for (x, y) in pairs {
        let (xp, yp) = (VectorPoint::new(x), VectorPoint::new(y.unwrap_or_default()));
        let line = match kind {
            Some(kind) => {
                let v = kernel_series(kind, &params, &xp, &yp, &table, r, common.lattice_radius)?;
                json!({
                    "x": xp.coords, "y": yp.coords, "value": v.value, "terms_used": v.terms_used,
                    "tail_estimate": v.tail_estimate, "truncation": v.truncation,
                    "min_orbit_distance": v.min_orbit_distance,
                })
            }
            None => {
                let e = hecke_kernel_extrapolated(&params, &xp, &yp, &ladder(common), &table, r, common.lattice_radius)?;
                json!({
                    "x": xp.coords, "y": yp.coords, "value": e.value.value, "terms_used": e.value.terms_used,
                    "tail_estimate": e.value.tail_estimate, "truncation": e.value.truncation,
                    "extrapolation_error": e.extrapolation_error,
                })
            }
        };
        write_line(out, &line)?;
    }
    Ok(())
}

fn run_verify(common: &Common, suite: ResidualTarget, samples: usize, seed: u64, out: &mut dyn Write) -> CliResult<()> {
    let params = common.params()?;
    let table = load_table(common)?;
    let mut cfg = SuiteConfig::new(params, cutoff(common, &table), common.lattice_radius);
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.k = common.k;
    let report = residual_suite(suite, &table, &cfg)?;
    for rec in &report.records {
        write_line(out, rec)?;
    }
    write_line(
        out,
        &json!({"summary": suite.name(), "params": params, "truncation": report.truncation, "pass": report.pass}),
    )?;
    if report.pass {
        Ok(())
    } else {
        let failed = report.records.iter().filter(|r| !r.pass).count();
        Err(CliError::VerifyFailed(format!("{failed} of {} checks of {} failed", report.records.len(), suite.name())))
    }
}

fn dispatch(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let common = &config.common;
    match &config.command {
        Command::Enumerate => {
            let table = load_table(common)?;
            table.write_jsonl(&mut *out)?;
            Ok(())
        }
        Command::Eval { series, x, s } => run_eval(common, *series, x, *s, out),
        Command::Kernel { kernel, x, y, s } => run_kernel(common, *kernel, x.clone(), y.clone(), *s, out),
        Command::Fourier { x_n, g, s, s_im } => {
            let v = fourier_coefficient(*x_n, g, Complex64::new(*s, *s_im), common.n)?;
            write_line(out, &json!({"n": common.n, "x_n": x_n, "g": g, "s": [s, s_im], "value": [v.re, v.im]}))
        }
        Command::Verify { suite, samples, seed } => run_verify(common, *suite, *samples, *seed, out),
    }
}

/// Execute `config`, writing to `--out` or to `stdout`.
pub fn run(config: &RunConfig, stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    let body = |out: &mut (dyn Write + Send)| -> CliResult<()> {
        match &config.common.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                dispatch(config, &mut w)?;
                w.flush()?;
                Ok(())
            }
            None => dispatch(config, out),
        }
    };
    match config.common.threads {
        Some(0) => Err(CliError::Invalid("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
            pool.install(|| body(stdout))
        }
        None => body(stdout),
    }
}

/// Parse `args`, run, report errors on `stderr`; returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&config, stdout) {
        Ok(()) => 0,
        // a closed downstream pipe is not an error of ours
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_a_product() {
        let g = parse_grid("0:1:3,5,-1:1:2").unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![0.0, 5.0, -1.0]);
        assert_eq!(g[5], vec![1.0, 5.0, 1.0]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Invalid("x".into()).exit_code(), 1);
        assert_eq!(CliError::Core(vahlen_core::Error::Domain("x".into())).exit_code(), 1);
        assert_eq!(CliError::Core(vahlen_core::Error::NonConvergence("x".into())).exit_code(), 2);
        assert_eq!(CliError::VerifyFailed("x".into()).exit_code(), 2);
    }

    #[test]
    fn cache_key_depends_on_request() {
        let p = GroupParams::new(3, 1, 4).unwrap();
        let a = cache_key(&p, &EnumerationBound::words(10)).unwrap();
        let b = cache_key(&p, &EnumerationBound::words(11)).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }
}
