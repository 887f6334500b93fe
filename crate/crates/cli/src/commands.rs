use std::fs;
use std::path::Path;

use ndspec::{
    assemble, capon_spectrum, correlation_match, cost_report, invert_pd, read_ndcorr, synth_correlation, write_ndcorr,
    CorrelationSignal, DimSpec, Nesting, SequentialEstimator, SpectralComposition, SpectralGridSpec,
};

use crate::args::{CostArgs, EstimateArgs, GenArgs, MatchArgs, Method, SliceArgs};
use crate::csv;
use crate::error::CliError;

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_correlation(path: &Path) -> Result<CorrelationSignal, CliError> {
    read_ndcorr(&read_file(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn gen(args: &GenArgs) -> Result<String, CliError> {
    let mut comp = SpectralComposition {
        peaks: args.peaks.clone(),
        planes: args.planes.clone(),
        noise_var: args.noise,
    };
    comp.validate(args.gamma.len()).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.symmetrize {
        comp = comp.symmetrized();
    }
    let c = synth_correlation(&comp, &args.gamma).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(write_ndcorr(&c))
}

pub fn estimate(args: &EstimateArgs) -> Result<String, CliError> {
    let mut c = load_correlation(&args.input)?;
    if args.grid.len() != c.d() {
        return Err(CliError::Usage(format!(
            "--grid has {} entries but the correlation is {}-dimensional",
            args.grid.len(),
            c.d()
        )));
    }
    if args.ridge > 0.0 {
        c = c.with_diagonal_loading(args.ridge);
    }
    let grid = SpectralGridSpec::new(args.grid.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let spectrum = match args.method {
        Method::Sequential => SequentialEstimator::new()
            .cross_check_walking(args.check_walking)
            .estimate(&c, &grid)?,
        Method::Capon => {
            let r = assemble(&c, &Nesting::identity(c.d()))?;
            let r_inv = invert_pd(r.matrix()).map_err(|e| e.with_context("correlation matrix"))?;
            capon_spectrum(&r_inv, c.spec(), &grid)?
        }
    };
    Ok(csv::write_spectrum(&spectrum))
}

pub fn cost(args: &CostArgs) -> Result<String, CliError> {
    let dims = args.dims.unwrap_or(args.gamma.len());
    let gamma = match (args.gamma.len(), dims) {
        (_, 0) => return Err(CliError::Usage("--dims must be >= 1".into())),
        (1, d) => vec![args.gamma[0]; d],
        (n, d) if n == d => args.gamma.clone(),
        (n, d) => {
            return Err(CliError::Usage(format!("--gamma has {n} entries but --dims is {d}")));
        }
    };
    let spec = DimSpec::new(gamma).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = String::from("C,sequential_ops,capon_ops\n");
    for c in args.grid_sweep.values() {
        let grid = SpectralGridSpec::uniform(dims, c).map_err(|e| CliError::Usage(e.to_string()))?;
        let report = cost_report(&spec, &grid)?;
        out.push_str(&format!(
            "{c},{},{}\n",
            csv::fmt_count(report.sequential_total),
            csv::fmt_count(report.capon_total)
        ));
    }
    Ok(out)
}

pub fn matching(args: &MatchArgs) -> Result<String, CliError> {
    let spectrum = csv::read_spectrum(&read_file(&args.spectrum)?)?;
    let c = load_correlation(&args.correlation)?;
    if spectrum.grid().d() != c.d() {
        return Err(CliError::Io(format!(
            "spectrum is {}-dimensional but the correlation is {}-dimensional",
            spectrum.grid().d(),
            c.d()
        )));
    }
    let report = correlation_match(&spectrum, &c)?;
    if report.aliasing_warning {
        eprintln!(
            "warning: grid {:?} is coarser than 2*gamma-1 for gamma {:?}; reconstructed lags alias",
            spectrum.grid().counts(),
            c.gamma()
        );
    }
    Ok(csv::write_match(&report, c.d()))
}

pub fn slice(args: &SliceArgs) -> Result<String, CliError> {
    let spectrum = csv::read_spectrum(&read_file(&args.input)?)?;
    let grid = spectrum.grid();
    let mut fixed = vec![None; grid.d()];
    for &(axis, index) in &args.fixes {
        if axis >= grid.d() {
            return Err(CliError::Usage(format!("--fix axis {axis} exceeds dimension {}", grid.d())));
        }
        if index >= grid.counts()[axis] {
            return Err(CliError::Usage(format!(
                "--fix index {index} out of range for axis {axis} with {} points",
                grid.counts()[axis]
            )));
        }
        if fixed[axis].replace(index).is_some() {
            return Err(CliError::Usage(format!("axis {axis} fixed twice")));
        }
    }
    let free = fixed.iter().filter(|f| f.is_none()).count();
    if free != 2 {
        return Err(CliError::Usage(format!("slice needs exactly 2 free axes, found {free}")));
    }
    Ok(csv::write_slice(&spectrum, &fixed))
}
