use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndspec::{Peak, Plane};

#[derive(Debug, Parser)]
#[command(name = "ndspec", version, about = "Sequential multidimensional spectral estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a correlation file from a spectral composition.
    Gen(GenArgs),
    /// Estimate the power spectrum of a correlation file on a grid.
    Estimate(EstimateArgs),
    /// Tabulate analytic operation counts over a sweep of uniform grids.
    Cost(CostArgs),
    /// Compare a spectrum against the correlation it was estimated from.
    Match(MatchArgs),
    /// Cut a 2D slice out of a spectrum by fixing all other axes.
    Slice(SliceArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Per-dimension correlation orders, e.g. `3,3,3`.
    #[arg(long, value_parser = parse_positive, value_delimiter = ',', required = true)]
    pub gamma: Vec<usize>,
    /// Point mass `f0,f1,...:power` (repeatable).
    #[arg(long = "peak", value_parser = parse_peak)]
    pub peaks: Vec<Peak>,
    /// Spectral plane `axis:f:power` (repeatable).
    #[arg(long = "plane", value_parser = parse_plane)]
    pub planes: Vec<Plane>,
    /// White noise variance.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Add the mirror component at -f for every peak and plane.
    #[arg(long)]
    pub symmetrize: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Sequential,
    Capon,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Correlation file (`ndcorr 1` format).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Grid point counts per dimension, e.g. `10,10,10`.
    #[arg(long, value_parser = parse_positive, value_delimiter = ',', required = true)]
    pub grid: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Method::Sequential)]
    pub method: Method,
    /// Diagonal loading: adds ridge * c(0) * I before inversion.
    #[arg(long, default_value_t = 0.0, value_parser = parse_non_negative)]
    pub ridge: f64,
    /// Cross-check the first stage against an explicit walking permutation.
    #[arg(long)]
    pub check_walking: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub min: usize,
    pub max: usize,
    pub step: usize,
}

impl Sweep {
    pub fn values(&self) -> impl Iterator<Item = usize> {
        (self.min..=self.max).step_by(self.step)
    }
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Correlation orders: one value for every dimension, or one per dimension.
    #[arg(long, value_parser = parse_positive, value_delimiter = ',', required = true)]
    pub gamma: Vec<usize>,
    /// Number of dimensions (defaults to the length of `--gamma`).
    #[arg(long)]
    pub dims: Option<usize>,
    /// Uniform grid counts `cmin:cmax:step`.
    #[arg(long, value_parser = parse_sweep, required = true)]
    pub grid_sweep: Sweep,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Spectrum CSV produced by `estimate`.
    #[arg(long, short)]
    pub spectrum: PathBuf,
    /// The correlation file the spectrum was estimated from.
    #[arg(long, short)]
    pub correlation: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    /// Spectrum CSV produced by `estimate`.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Fix `axis=index` (repeatable); exactly two axes must stay free.
    #[arg(long = "fix", value_parser = parse_fix)]
    pub fixes: Vec<(usize, usize)>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x < 0.0 {
        return Err(format!("`{s}` must be >= 0"));
    }
    Ok(x)
}

pub fn parse_positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

pub fn parse_peak(s: &str) -> Result<Peak, String> {
    let (freqs, power) = s.split_once(':').ok_or_else(|| format!("`{s}`: expected `f0,f1,...:power`"))?;
    let freq = freqs.split(',').map(parse_f64).collect::<Result<Vec<_>, _>>()?;
    Ok(Peak {
        freq,
        power: parse_f64(power)?,
    })
}

pub fn parse_plane(s: &str) -> Result<Plane, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("`{s}`: expected `axis:f:power`"));
    }
    Ok(Plane {
        axis: parts[0].trim().parse().map_err(|_| format!("`{}` is not an axis index", parts[0]))?,
        freq: parse_f64(parts[1])?,
        power: parse_f64(parts[2])?,
    })
}

pub fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("`{s}`: expected `cmin:cmax:step`"));
    }
    let num = |p: &str| p.trim().parse::<usize>().map_err(|_| format!("`{p}` is not a non-negative integer"));
    let sweep = Sweep {
        min: num(parts[0])?,
        max: num(parts[1])?,
        step: num(parts[2])?,
    };
    if sweep.step == 0 {
        return Err("sweep step must be >= 1".into());
    }
    if sweep.min == 0 || sweep.min > sweep.max {
        return Err(format!("`{s}`: need 1 <= cmin <= cmax"));
    }
    Ok(sweep)
}

pub fn parse_fix(s: &str) -> Result<(usize, usize), String> {
    let (axis, index) = s.split_once('=').ok_or_else(|| format!("`{s}`: expected `axis=index`"))?;
    let num = |p: &str| p.trim().parse::<usize>().map_err(|_| format!("`{p}` is not a non-negative integer"));
    Ok((num(axis)?, num(index)?))
}
