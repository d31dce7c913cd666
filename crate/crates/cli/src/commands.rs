//! The `eval`, `sweep` and `classify` commands.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use zeno_core::oracle::OracleConfig;
use zeno_core::{
    predict_limit_with, scaled_zeno_product, Exponent, RegimePrediction, SpectralMeasure,
    ZenoParams,
};

use crate::{CliError, CliResult};

pub const CSV_HEADER: [&str; 7] = ["alpha", "tau", "N", "p", "log_p", "predicted", "regime"];

/// `"1/2"` and `"3"` are exact, `"0.5"` is approximate.
pub fn parse_alpha(s: &str) -> CliResult<Exponent> {
    s.parse()
        .map_err(|_| CliError::Schema(format!("cannot parse alpha {s:?}")))
}

pub fn parse_alpha_list(s: &str) -> CliResult<Vec<Exponent>> {
    let list = s
        .split(',')
        .map(|a| parse_alpha(a.trim()))
        .collect::<CliResult<Vec<_>>>()?;
    if list.is_empty() {
        return Err(CliError::Schema("alpha list is empty".into()));
    }
    Ok(list)
}

/// `a:b:n`, `n` evenly spaced points from `a` to `b` inclusive.
pub fn parse_tau_grid(s: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Schema(format!("tau grid {s:?} is not of the form a:b:n"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    match n {
        0 => Err(CliError::Schema("tau grid is empty".into())),
        1 => Ok(vec![a]),
        _ => Ok((0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect()),
    }
}

pub fn parse_n_schedule(s: &str) -> CliResult<Vec<u64>> {
    s.split(',')
        .map(|n| {
            n.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Schema(format!("bad measurement count {n:?}")))
        })
        .collect()
}

/// 17 significant digits, enough to round-trip a double.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// One evaluation of `p_{N,α}(τ)` together with the predicted limit.
#[derive(Debug, Clone, Serialize)]
pub struct EvalRecord {
    pub alpha: Exponent,
    pub tau: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub hbar: f64,
    pub p: f64,
    /// `null` when `p` is exactly zero.
    pub log_p: f64,
    pub prediction: RegimePrediction,
}

pub fn cmd_eval(
    measure: &SpectralMeasure,
    alpha: Exponent,
    tau: f64,
    n: u64,
    hbar: f64,
    config: &OracleConfig,
) -> CliResult<EvalRecord> {
    let params = ZenoParams::new(n, alpha, tau, hbar)?;
    let lp = scaled_zeno_product(measure, &params)?;
    Ok(EvalRecord {
        alpha,
        tau,
        n,
        hbar,
        p: lp.p(),
        log_p: lp.log_p(),
        prediction: predict_limit_with(measure, alpha, tau, hbar, config),
    })
}

pub fn cmd_classify(
    measure: &SpectralMeasure,
    alpha: Exponent,
    tau: f64,
    hbar: f64,
    config: &OracleConfig,
) -> CliResult<RegimePrediction> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(CliError::Schema(format!("hbar = {hbar} must be > 0")));
    }
    if !tau.is_finite() {
        return Err(CliError::Schema(format!("tau = {tau} is not finite")));
    }
    Ok(predict_limit_with(measure, alpha, tau, hbar, config))
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub measure: SpectralMeasure,
    pub alphas: Vec<Exponent>,
    pub taus: Vec<f64>,
    pub schedule: Vec<u64>,
    pub hbar: f64,
    pub config: OracleConfig,
}

impl SweepSpec {
    pub fn check(&self) -> CliResult<()> {
        if self.alphas.is_empty() || self.taus.is_empty() || self.schedule.is_empty() {
            return Err(CliError::Schema("sweep grids must be non-empty".into()));
        }
        if self.schedule.windows(2).any(|w| w[0] >= w[1]) || self.schedule[0] == 0 {
            return Err(CliError::Schema(
                "N schedule must be positive and strictly increasing".into(),
            ));
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(CliError::Schema(format!(
                "hbar = {} must be > 0",
                self.hbar
            )));
        }
        if self.taus.iter().any(|t| !t.is_finite()) {
            return Err(CliError::Schema("tau grid has non-finite entries".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub alpha: Exponent,
    pub tau: f64,
    pub n: u64,
    pub p: f64,
    pub log_p: f64,
    pub predicted: Option<f64>,
    pub regime: &'static str,
}

impl SweepRecord {
    fn csv_row(&self) -> [String; 7] {
        [
            self.alpha.to_string(),
            format_float(self.tau),
            self.n.to_string(),
            format_float(self.p),
            format_float(self.log_p),
            self.predicted.map(format_float).unwrap_or_default(),
            self.regime.to_string(),
        ]
    }
}

/// All records, alpha-major, then tau, then N.
pub fn sweep_records(spec: &SweepSpec) -> CliResult<Vec<SweepRecord>> {
    spec.check()?;
    let mut cells = Vec::with_capacity(spec.alphas.len() * spec.taus.len());
    for &alpha in &spec.alphas {
        for &tau in &spec.taus {
            cells.push((alpha, tau));
        }
    }
    let rows = cells
        .par_iter()
        .map(|&(alpha, tau)| {
            let prediction = predict_limit_with(&spec.measure, alpha, tau, spec.hbar, &spec.config);
            spec.schedule
                .iter()
                .map(|&n| {
                    let params = ZenoParams::new(n, alpha, tau, spec.hbar)?;
                    let lp = scaled_zeno_product(&spec.measure, &params)?;
                    Ok(SweepRecord {
                        alpha,
                        tau,
                        n,
                        p: lp.p(),
                        log_p: lp.log_p(),
                        predicted: prediction.limit,
                        regime: prediction.regime.tag(),
                    })
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the sweep and writes the CSV to `path`. The file only appears once
/// every row has been computed and written.
pub fn cmd_sweep(spec: &SweepSpec, path: &Path) -> CliResult<usize> {
    let records = sweep_records(spec)?;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_csv(&records, tmp.as_file_mut())?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(records.len())
}
