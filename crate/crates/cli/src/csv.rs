//! CSV schemas emitted and read by the CLI. All rows follow flat grid order
//! (dimension 0 fastest) and floats use the shortest round-trip decimal.

use std::fmt::Write as _;

use ndspec::correlation::fmt_float;
use ndspec::{MatchReport, SpectralGridSpec, SpectrumEstimate};

use crate::error::CliError;

pub fn write_spectrum(s: &SpectrumEstimate) -> String {
    let grid = s.grid();
    let mut out = String::new();
    for dim in 0..grid.d() {
        let _ = write!(out, "f_{dim},");
    }
    out.push_str("power\n");
    for (pos, p) in s.power().iter().enumerate() {
        for (dim, m) in grid.multi(pos).into_iter().enumerate() {
            let _ = write!(out, "{},", fmt_float(grid.frequency(dim, m)));
        }
        let _ = writeln!(out, "{}", fmt_float(*p));
    }
    out
}

pub fn read_spectrum(text: &str) -> Result<SpectrumEstimate, CliError> {
    let bad = |line: usize, msg: &str| CliError::Io(format!("spectrum CSV line {}: {msg}", line + 1));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad(0, "empty file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let d = cols.len().saturating_sub(1);
    let expected: Vec<String> = (0..d).map(|i| format!("f_{i}")).chain(["power".to_string()]).collect();
    if d == 0 || cols != expected {
        return Err(bad(0, "expected header `f_0,...,f_{d-1},power`"));
    }
    let mut freqs: Vec<Vec<f64>> = Vec::new();
    let mut power = Vec::new();
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != d + 1 {
            return Err(bad(n, &format!("expected {} fields", d + 1)));
        }
        let vals = fields
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad(n, "non-numeric field"))?;
        power.push(vals[d]);
        freqs.push(vals[..d].to_vec());
    }
    // Grid counts are recovered from the number of distinct frequencies.
    let counts: Vec<usize> = (0..d)
        .map(|dim| {
            let mut col: Vec<f64> = freqs.iter().map(|f| f[dim]).collect();
            col.sort_by(f64::total_cmp);
            col.dedup();
            col.len()
        })
        .collect();
    let grid = SpectralGridSpec::new(counts).map_err(|e| CliError::Io(e.to_string()))?;
    if grid.len() != power.len() {
        return Err(CliError::Io(format!(
            "spectrum CSV has {} rows, expected {} for grid {:?}",
            power.len(),
            grid.len(),
            grid.counts()
        )));
    }
    for (pos, f) in freqs.iter().enumerate() {
        let multi = grid.multi(pos);
        if multi.iter().enumerate().any(|(dim, &m)| f[dim] != grid.frequency(dim, m)) {
            return Err(CliError::Io(format!("spectrum CSV row {} is out of grid order", pos + 2)));
        }
    }
    SpectrumEstimate::new(grid, power).map_err(|e| CliError::Io(format!("spectrum CSV: {e}")))
}

pub fn write_match(report: &MatchReport, d: usize) -> String {
    let mut out = String::new();
    for dim in 0..d {
        let _ = write!(out, "t_{dim},");
    }
    out.push_str("r_re,r_im,rhat_re,rhat_im,rel_err,mode\n");
    for lag in &report.per_lag {
        for t in &lag.lag {
            let _ = write!(out, "{t},");
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(lag.original.re),
            fmt_float(lag.original.im),
            fmt_float(lag.reconstructed.re),
            fmt_float(lag.reconstructed.im),
            fmt_float(lag.error),
            lag.mode.label()
        );
    }
    out
}

/// Integral counts print without a fractional part; half-integers keep it.
pub fn fmt_count(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e21 {
        format!("{x:.0}")
    } else {
        fmt_float(x)
    }
}

/// Matrix-form slice: one line per index of the first free axis.
pub fn write_slice(s: &SpectrumEstimate, fixed: &[Option<usize>]) -> String {
    let grid = s.grid();
    let free: Vec<usize> = (0..grid.d()).filter(|&a| fixed[a].is_none()).collect();
    let (ra, ca) = (free[0], free[1]);
    let mut multi: Vec<usize> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
    let mut out = String::new();
    for r in 0..grid.counts()[ra] {
        multi[ra] = r;
        let row: Vec<String> = (0..grid.counts()[ca])
            .map(|c| {
                multi[ca] = c;
                fmt_float(s.at(&multi))
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
