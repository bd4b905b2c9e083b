//! Run configuration shared by every CLI subcommand.
//!
//! A config is a JSON document whose keys mirror the command-line flags.
//! Accessors resolve and validate one aspect each; a rejected value is
//! reported under the name of its config key.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{QuadratureScheme, DEFAULT_PRECISION, DEFAULT_QUADRATURE_POINTS};
use crate::channel::ChannelModel;
use crate::codec::{CodeParams, HashId, DEFAULT_BIT_CAP, DEFAULT_D_MIN, DEFAULT_SPINE_WIDTH};
use crate::error::{Result, SpinalError};
use crate::montecarlo::{validate_grid, StopRule};

/// Most points a grid expression may expand to.
pub const MAX_GRID_POINTS: usize = 100_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = SpinalError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(SpinalError::param(
                "format",
                format!("expected csv or json, got {other:?}"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub k: u32,
    pub v: u32,
    pub c: u32,
    #[serde(rename = "L")]
    pub passes: usize,
    pub d_min: f64,
    pub hash_id: String,
    pub channel: Vec<String>,
    /// Nakagami shape used whenever `channel` names nakagami.
    pub m: f64,
    /// SNR points in dB. `inf` denotes the noiseless limit.
    pub gamma_grid: Vec<f64>,
    /// Fixed trial count, or the trial cap when `target_errors` is set.
    pub trials: Option<u64>,
    pub target_errors: Option<u64>,
    pub seed: u64,
    pub quadrature_n: Vec<usize>,
    pub x: f64,
    pub bit_cap: usize,
    /// Message for `roundtrip`, as a bit string. Random when absent.
    pub message: Option<String>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 8,
            k: 4,
            v: DEFAULT_SPINE_WIDTH,
            c: 8,
            passes: 1,
            d_min: DEFAULT_D_MIN,
            hash_id: HashId::default().name().to_string(),
            channel: vec!["awgn".to_string()],
            m: 1.5,
            gamma_grid: vec![0.0, 10.0, 20.0, 30.0, 40.0, 50.0],
            trials: None,
            target_errors: None,
            seed: 1,
            quadrature_n: vec![DEFAULT_QUADRATURE_POINTS],
            x: DEFAULT_PRECISION,
            bit_cap: DEFAULT_BIT_CAP,
            message: None,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn hash(&self) -> Result<HashId> {
        self.hash_id.parse()
    }

    pub fn code_params(&self) -> Result<CodeParams> {
        CodeParams::with_all(self.n, self.k, self.v, self.c, self.passes, self.d_min, self.hash()?)
    }

    pub fn channels(&self) -> Result<Vec<ChannelModel>> {
        if self.channel.is_empty() {
            return Err(SpinalError::param("channel", "at least one channel is required"));
        }
        self.channel
            .iter()
            .map(|name| ChannelModel::from_name(name, self.m))
            .collect()
    }

    /// The single channel for commands that do not take a list.
    pub fn single_channel(&self) -> Result<ChannelModel> {
        match self.channels()?.as_slice() {
            [one] => Ok(*one),
            many => Err(SpinalError::param(
                "channel",
                format!("this command takes exactly one channel, got {}", many.len()),
            )),
        }
    }

    pub fn grid(&self) -> Result<&[f64]> {
        validate_grid(&self.gamma_grid)?;
        Ok(&self.gamma_grid)
    }

    pub fn stop_rule(&self) -> Result<StopRule> {
        let rule = match (self.trials, self.target_errors) {
            (Some(trials), None) => StopRule::Fixed { trials },
            (cap, Some(errors)) => StopRule::TargetErrors {
                errors,
                max_trials: cap.unwrap_or(1_000_000),
            },
            (None, None) => StopRule::default(),
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn schemes(&self) -> Result<Vec<QuadratureScheme>> {
        if self.quadrature_n.is_empty() {
            return Err(SpinalError::param("quadrature_N", "at least one value is required"));
        }
        self.quadrature_n
            .iter()
            .map(|&n| QuadratureScheme::uniform(n))
            .collect()
    }

    pub fn precision(&self) -> Result<f64> {
        if !(self.x > 0.0 && self.x < 4.0) {
            return Err(SpinalError::param(
                "x",
                format!("must satisfy 0 < x < 4, got {}", self.x),
            ));
        }
        Ok(self.x)
    }
}

/// Parses an SNR grid such as `0,5,10`, `0:2.5:20` (inclusive range) or a
/// mix of both like `0:10:40,45,inf`.
pub fn parse_gamma_grid(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(SpinalError::param("gamma_grid", "empty entry"));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_number(single)?),
            [start, step, stop] => {
                let (start, step, stop) = (parse_number(start)?, parse_number(step)?, parse_number(stop)?);
                if !(start.is_finite() && step.is_finite() && stop.is_finite()) || step <= 0.0 || stop < start {
                    return Err(SpinalError::param(
                        "gamma_grid",
                        format!("range {item:?} needs finite start <= stop and step > 0"),
                    ));
                }
                let count = ((stop - start) / step + 1e-9).floor() + 1.0;
                if count > (MAX_GRID_POINTS - out.len()) as f64 {
                    return Err(SpinalError::param(
                        "gamma_grid",
                        format!("more than {MAX_GRID_POINTS} points"),
                    ));
                }
                out.extend((0..count as usize).map(|i| start + i as f64 * step));
            }
            _ => {
                return Err(SpinalError::param(
                    "gamma_grid",
                    format!("{item:?} is neither a number nor start:step:stop"),
                ))
            }
        }
        if out.len() > MAX_GRID_POINTS {
            return Err(SpinalError::param(
                "gamma_grid",
                format!("more than {MAX_GRID_POINTS} points"),
            ));
        }
    }
    validate_grid(&out)?;
    Ok(out)
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| SpinalError::param("gamma_grid", format!("{s:?} is not a number")))
}

/// Parses a comma-separated list, e.g. for `--quadrature-N 1,64`.
pub fn parse_list<T: FromStr>(text: &str, field: &'static str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| SpinalError::param(field, format!("{s:?} is not valid")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_gamma_grid("0,5,10").unwrap(), vec![0.0, 5.0, 10.0]);
        assert_eq!(parse_gamma_grid("0:2.5:10").unwrap(), vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        let g = parse_gamma_grid("0:10:20, 35, inf").unwrap();
        assert_eq!(g.len(), 5);
        assert!(g[4].is_infinite());
        assert_eq!(parse_gamma_grid("0:0.1:0.3").unwrap().len(), 4);
    }

    #[test]
    fn grid_errors_name_the_field() {
        for bad in ["10,5", "", "a", "0:0:5", "5:1:0", "1:2", "0:1e-9:1e9", "1,,2"] {
            let e = parse_gamma_grid(bad).unwrap_err();
            assert!(e.to_string().contains("gamma_grid"), "{bad}: {e}");
        }
    }

    #[test]
    fn json_defaults_and_unknown_keys() {
        let cfg = RunConfig::from_json(r#"{"n": 12, "L": 2, "channel": ["awgn", "rayleigh"]}"#).unwrap();
        assert_eq!(cfg.n, 12);
        assert_eq!(cfg.passes, 2);
        assert_eq!(cfg.channels().unwrap().len(), 2);
        assert!(cfg.single_channel().is_err());
        assert!(RunConfig::from_json(r#"{"nn": 1}"#).is_err());
    }

    #[test]
    fn stop_rules() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.stop_rule().unwrap(), StopRule::default());
        cfg.trials = Some(500);
        assert_eq!(cfg.stop_rule().unwrap(), StopRule::Fixed { trials: 500 });
        cfg.target_errors = Some(20);
        assert_eq!(
            cfg.stop_rule().unwrap(),
            StopRule::TargetErrors {
                errors: 20,
                max_trials: 500
            }
        );
        cfg.trials = Some(0);
        assert!(cfg.stop_rule().is_err());
    }

    #[test]
    fn bad_values_name_fields() {
        let cfg = RunConfig {
            hash_id: "sha1".into(),
            ..Default::default()
        };
        assert!(cfg.code_params().unwrap_err().to_string().contains("registered"));
        let cfg = RunConfig {
            x: 5.0,
            ..Default::default()
        };
        assert!(cfg.precision().unwrap_err().to_string().contains("x"));
        let cfg = RunConfig {
            channel: vec!["nakagami".into()],
            m: 0.1,
            ..Default::default()
        };
        assert!(cfg.channels().unwrap_err().to_string().contains("m"));
        let cfg = RunConfig {
            quadrature_n: vec![0],
            ..Default::default()
        };
        assert!(cfg.schemes().unwrap_err().to_string().contains("quadrature_N"));
    }
}
