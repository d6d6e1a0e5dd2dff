//! Tabular results and their on-disk forms.
//!
//! The CSV schema is fixed: `sweep_param,sweep_value,metric,mean,stderr,n`,
//! floats rendered with 17 significant digits so tables round-trip exactly.
//! A JSON sidecar carries the experiment spec, its hash, the master seed,
//! and the code version.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::ExperimentSpec;

/// Render a float with 17 significant digits (shortest exact form is not
/// used so files are byte-stable across writer versions).
pub fn format_float(value: f64) -> String {
    format!("{value:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub sweep_param: String,
    pub sweep_value: String,
    pub metric: String,
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn push(
        &mut self,
        sweep_param: &str,
        sweep_value: impl ToString,
        metric: &str,
        mean: f64,
        stderr: f64,
        n: usize,
    ) {
        self.rows.push(ResultRow {
            sweep_param: sweep_param.to_string(),
            sweep_value: sweep_value.to_string(),
            metric: metric.to_string(),
            mean,
            stderr,
            n,
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("sweep_param,sweep_value,metric,mean,stderr,n\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.sweep_param,
                row.sweep_value,
                row.metric,
                format_float(row.mean),
                format_float(row.stderr),
                row.n
            ));
        }
        out
    }
}

/// Sample mean and standard error (sample SD over sqrt(n)); a singleton
/// has zero standard error.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    assert!(n > 0, "empty ensemble");
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

/// Provenance JSON written next to each CSV: the full spec, a SHA-256 of
/// its serialized form, the master seed, and the crate version.
pub fn sidecar_json(spec: &ExperimentSpec) -> Result<String> {
    let spec_json = serde_json::to_value(spec)
        .map_err(|e| Error::InvalidArgument(format!("spec serialization failed: {e}")))?;
    let canonical = serde_json::to_string(&spec_json)
        .map_err(|e| Error::InvalidArgument(format!("spec serialization failed: {e}")))?;
    let hash = hex_digest(canonical.as_bytes());
    let sidecar = serde_json::json!({
        "spec": spec_json,
        "spec_hash": hash,
        "master_seed": spec.master_seed,
        "code_version": env!("CARGO_PKG_VERSION"),
    });
    serde_json::to_string_pretty(&sidecar)
        .map_err(|e| Error::InvalidArgument(format!("sidecar serialization failed: {e}")))
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
