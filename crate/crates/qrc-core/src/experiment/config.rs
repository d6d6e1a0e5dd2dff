//! Flat key-value experiment configs.
//!
//! One `key = value` pair per line, `#` starts a comment, keys mirror the
//! [`ExperimentSpec`] fields. Unknown keys are errors, so typos cannot
//! silently fall back to defaults. Lists take comma-separated values; the
//! size sweep pairs up as `N:weight,N:weight,...`; the ansatz is `haar` or
//! `he:<layers>`.

use crate::error::{Error, Result};
use crate::esn::GridOrder;

use super::{AnsatzKind, ExperimentSpec, SignalKind, TaskKind};

pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected `key = value`", line_no + 1))
        })?;
        apply_key(&mut spec, key.trim(), value.trim())
            .map_err(|e| Error::InvalidConfig(format!("line {}: {e}", line_no + 1)))?;
    }
    spec.validate()?;
    Ok(spec)
}

/// Parse the ansatz notation shared by config files and the CLI flag:
/// `haar` or `he:<layers>`.
pub fn parse_ansatz(value: &str) -> Result<AnsatzKind> {
    match value {
        "haar" => Ok(AnsatzKind::Haar),
        other => match other.strip_prefix("he:") {
            Some(layers) => Ok(AnsatzKind::HardwareEfficient {
                layers: parse_num(layers, "ansatz layers")?,
            }),
            None => Err(Error::InvalidConfig(format!(
                "ansatz must be `haar` or `he:<layers>`, got `{other}`"
            ))),
        },
    }
}

fn apply_key(spec: &mut ExperimentSpec, key: &str, value: &str) -> Result<()> {
    match key {
        "task" => {
            spec.task = match value {
                "stm" => TaskKind::Stm,
                "predict" => TaskKind::Predict,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "task must be stm or predict, got `{other}`"
                    )))
                }
            }
        }
        "signal" => {
            spec.signal = match value {
                "random" => SignalKind::Random,
                "cosine" => SignalKind::Cosine,
                "mackey_glass" => SignalKind::MackeyGlass,
                "ising" => SignalKind::Ising,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "signal must be random, cosine, mackey_glass, or ising, got `{other}`"
                    )))
                }
            }
        }
        "n_qubits" => spec.n_qubits = parse_num(value, key)?,
        "input_weight" => spec.input_weight = parse_num(value, key)?,
        "feedback_weight" => spec.feedback_weight = parse_num(value, key)?,
        "feedback_weight_sweep" => spec.feedback_weight_sweep = parse_list(value, key)?,
        "ansatz" => spec.ansatz = parse_ansatz(value)?,
        "extra_feedback_delay" => spec.extra_feedback_delay = Some(parse_num(value, key)?),
        "measurement_shots" => spec.measurement_shots = Some(parse_num(value, key)?),
        "shots_sweep" => spec.shots_sweep = parse_list(value, key)?,
        "ensemble" => spec.ensemble = parse_num(value, key)?,
        "washout" => spec.split.washout = parse_num(value, key)?,
        "train_len" => spec.split.train_len = parse_num(value, key)?,
        "test_len" => spec.split.test_len = parse_num(value, key)?,
        "max_delay" => spec.max_delay = parse_num(value, key)?,
        "max_horizon" => spec.max_horizon = parse_num(value, key)?,
        "master_seed" => spec.master_seed = parse_num(value, key)?,
        "shared_inputs" => spec.shared_inputs = parse_bool(value, key)?,
        "cosine_freq" => spec.cosine_freq = parse_num(value, key)?,
        "mg_drive" => spec.mg.drive = parse_num(value, key)?,
        "mg_exponent" => spec.mg.exponent = parse_num(value, key)?,
        "mg_decay" => spec.mg.decay = parse_num(value, key)?,
        "mg_delay" => spec.mg.delay = parse_num(value, key)?,
        "mg_step" => spec.mg.step = parse_num(value, key)?,
        "mg_burn_in" => spec.mg.burn_in = parse_num(value, key)?,
        "ising_spins" => spec.ising.spins = parse_num(value, key)?,
        "ising_coupling" => spec.ising.coupling = parse_num(value, key)?,
        "ising_transverse_field" => spec.ising.transverse_field = parse_num(value, key)?,
        "ising_longitudinal_field" => spec.ising.longitudinal_field = parse_num(value, key)?,
        "ising_step" => spec.ising.step = parse_num(value, key)?,
        "ising_site" => spec.ising.site = parse_num(value, key)?,
        "esn_nodes" => spec.esn_nodes = parse_list(value, key)?,
        "esn_spectral_radii" => spec.esn_grid.spectral_radii = parse_list(value, key)?,
        "esn_leak_rates" => spec.esn_grid.leak_rates = parse_list(value, key)?,
        "esn_ridge" => spec.esn_grid.ridge = parse_num(value, key)?,
        "esn_ensemble" => spec.esn_ensemble = parse_num(value, key)?,
        "esn_grid_order" => {
            spec.esn_grid_order = match value {
                "mean_then_min" => GridOrder::MeanThenMin,
                "min_then_mean" => GridOrder::MinThenMean,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "esn_grid_order must be mean_then_min or min_then_mean, got `{other}`"
                    )))
                }
            }
        }
        "size_sweep" => {
            spec.size_sweep = value
                .split(',')
                .map(|pair| {
                    let (n, fb) = pair.trim().split_once(':').ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "size_sweep entries look like `N:weight`, got `{pair}`"
                        ))
                    })?;
                    Ok((parse_num(n, "size_sweep N")?, parse_num(fb, "size_sweep weight")?))
                })
                .collect::<Result<_>>()?
        }
        other => {
            return Err(Error::InvalidConfig(format!("unknown key `{other}`")));
        }
    }
    Ok(())
}

fn parse_num<T: std::str::FromStr>(value: &str, key: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("cannot parse `{value}` for {key}")))
}

fn parse_bool(value: &str, key: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::InvalidConfig(format!(
            "{key} must be true or false, got `{other}`"
        ))),
    }
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|item| parse_num(item, key))
        .collect()
}
