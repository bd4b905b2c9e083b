use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use spinal_core::config::{parse_gamma_grid, parse_list, OutputFormat, RunConfig};

use crate::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "spinal",
    version,
    about = "Spinal code encoder, ML decoder, bounds and BLER simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// BLER upper bound over an SNR grid, one column per quadrature size.
    Bound(Overrides),
    /// High-SNR error floor of the bound.
    Floor(Overrides),
    /// SNR threshold above which the per-pass collision factor drops below x.
    Threshold(Overrides),
    /// Monte Carlo BLER sweep joined with bound, floor and threshold.
    Sweep(Overrides),
    /// Encode one message, pass it through the channel and decode it.
    Roundtrip(Overrides),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bound(_) => "bound",
            Command::Floor(_) => "floor",
            Command::Threshold(_) => "threshold",
            Command::Sweep(_) => "sweep",
            Command::Roundtrip(_) => "roundtrip",
        }
    }

    pub fn overrides(&self) -> &Overrides {
        match self {
            Command::Bound(o)
            | Command::Floor(o)
            | Command::Threshold(o)
            | Command::Sweep(o)
            | Command::Roundtrip(o) => o,
        }
    }
}

/// Flags shared by every subcommand. Each one overrides the matching key of
/// the `--config` file, which in turn overrides the built-in defaults.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Message length in bits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Bits per segment.
    #[arg(long)]
    pub k: Option<u32>,
    /// Spine value width in bits.
    #[arg(long)]
    pub v: Option<u32>,
    /// Bits per QAM symbol (even).
    #[arg(long)]
    pub c: Option<u32>,
    /// Number of passes.
    #[arg(long = "L")]
    pub passes: Option<usize>,
    /// Minimum constellation distance.
    #[arg(long = "dmin")]
    pub d_min: Option<f64>,
    /// Hash function name.
    #[arg(long = "hash-id")]
    pub hash_id: Option<String>,
    /// Comma-separated channels: awgn, rayleigh, nakagami.
    #[arg(long)]
    pub channel: Option<String>,
    /// Nakagami shape parameter.
    #[arg(long)]
    pub m: Option<f64>,
    /// SNR grid in dB, e.g. `0,5,10`, `0:2.5:20` or `40,inf`.
    #[arg(long = "snr-grid", allow_hyphen_values = true)]
    pub snr_grid: Option<String>,
    /// Trials per grid point (or the trial cap with --target-errors).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Stop each grid point after this many block errors.
    #[arg(long = "target-errors")]
    pub target_errors: Option<u64>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated quadrature sizes.
    #[arg(long = "quadrature-N")]
    pub quadrature_n: Option<String>,
    /// Threshold precision, 0 < x < 4.
    #[arg(long)]
    pub x: Option<f64>,
    /// Largest n the exhaustive decoder accepts.
    #[arg(long = "bit-cap")]
    pub bit_cap: Option<usize>,
    /// Message bits for roundtrip, e.g. `1011_0010`.
    #[arg(long)]
    pub message: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long)]
    pub format: Option<OutputFormat>,
}

impl Overrides {
    /// Layers defaults, the config file and command-line flags.
    pub fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
                RunConfig::from_json(&text)
                    .map_err(|e| Failure::config(format!("invalid config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(value) = &self.$field { cfg.$target = value.clone(); })*
            };
        }
        set!(n => n, k => k, v => v, c => c, passes => passes, d_min => d_min, hash_id => hash_id,
             m => m, seed => seed, x => x, bit_cap => bit_cap, format => format);
        if let Some(channel) = &self.channel {
            cfg.channel = parse_list(channel, "channel")?;
        }
        if let Some(grid) = &self.snr_grid {
            cfg.gamma_grid = parse_gamma_grid(grid)?;
        }
        if let Some(quadrature) = &self.quadrature_n {
            cfg.quadrature_n = parse_list(quadrature, "quadrature_N")?;
        }
        if self.trials.is_some() {
            cfg.trials = self.trials;
        }
        if self.target_errors.is_some() {
            cfg.target_errors = self.target_errors;
        }
        if self.message.is_some() {
            cfg.message = self.message.clone();
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        Ok(cfg)
    }
}
