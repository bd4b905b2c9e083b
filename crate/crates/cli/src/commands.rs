use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spinal_core::analysis::{bler_upper_bound, error_floor_for, snr_threshold};
use spinal_core::channel::{sigma_from_snr, transmit};
use spinal_core::codec::{Message, MlDecoder};
use spinal_core::config::{OutputFormat, RunConfig};
use spinal_core::montecarlo::{sweep, SweepPlan, SweepRow};
use spinal_core::report::{self, Cell, Provenance, Table};

use crate::args::{Cli, Command};
use crate::Failure;

/// Stream tag for the roundtrip demo, kept apart from simulation trial streams.
const ROUNDTRIP_STREAM: u64 = 0x0052_5452_4950;

pub fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.command.overrides().resolve()?;
    let provenance = Provenance::new(cli.command.name(), &cfg);
    match &cli.command {
        Command::Bound(_) => emit_table(&bound_table(&cfg)?, &cfg, &provenance),
        Command::Floor(_) => floor(&cfg, &provenance),
        Command::Threshold(_) => emit_table(&threshold_table(&cfg)?, &cfg, &provenance),
        Command::Sweep(_) => run_sweep(&cfg, &provenance),
        Command::Roundtrip(_) => roundtrip(&cfg, &provenance),
    }
}

fn bound_table(cfg: &RunConfig) -> Result<Table, Failure> {
    let params = cfg.code_params()?;
    let channels = cfg.channels()?;
    let grid = cfg.grid()?;
    let schemes = cfg.schemes()?;
    let floor = error_floor_for(params.n(), params.k(), params.c(), params.passes())?.p_ef;

    let mut columns = vec!["channel".to_string(), "gamma_db".into(), "sigma2".into()];
    columns.extend(schemes.iter().map(|s| format!("bound_N{}", s.len())));
    columns.push("floor".into());
    let mut table = Table::new(columns);
    for model in &channels {
        for &gamma_db in grid {
            let noise = sigma_from_snr(gamma_db, params.c(), params.d_min())?;
            let mut row: Vec<Cell> = vec![model.to_string().into(), gamma_db.into(), noise.sigma2.into()];
            for scheme in &schemes {
                row.push(bler_upper_bound(&params, noise.sigma2, model, scheme)?.p_e_upper.into());
            }
            row.push(floor.into());
            table.push(row);
        }
    }
    Ok(table)
}

fn floor(cfg: &RunConfig, provenance: &Provenance) -> Result<(), Failure> {
    let result = error_floor_for(cfg.n, cfg.k, cfg.c, cfg.passes)?;
    let mut table = Table::new(["n", "k", "c", "L", "floor"]);
    table.push(vec![
        cfg.n.into(),
        cfg.k.into(),
        cfg.c.into(),
        cfg.passes.into(),
        result.p_ef.into(),
    ]);
    eprintln!(
        "error floor (n={}, k={}, c={}, L={}): {}",
        cfg.n,
        cfg.k,
        cfg.c,
        cfg.passes,
        significant(result.p_ef, 6)
    );
    emit_table(&table, cfg, provenance)
}

fn threshold_table(cfg: &RunConfig) -> Result<Table, Failure> {
    let x = cfg.precision()?;
    let mut table = Table::new(["channel", "m", "c", "x", "gamma_th_linear", "gamma_th_db"]);
    for model in cfg.channels()? {
        let th = snr_threshold(&model, cfg.c, x)?;
        table.push(vec![
            model.name().into(),
            model.shape().into(),
            cfg.c.into(),
            x.into(),
            th.gamma_th_linear.into(),
            th.gamma_th_db.into(),
        ]);
    }
    Ok(table)
}

fn run_sweep(cfg: &RunConfig, provenance: &Provenance) -> Result<(), Failure> {
    let params = cfg.code_params()?;
    let model = cfg.single_channel()?;
    let grid = cfg.grid()?;
    let scheme = match cfg.schemes()?.as_slice() {
        [one] => one.clone(),
        many => {
            return Err(Failure::config(format!(
                "quadrature_N: sweep takes exactly one quadrature size, got {}",
                many.len()
            )))
        }
    };
    let plan = SweepPlan {
        stop: cfg.stop_rule()?,
        bit_cap: cfg.bit_cap,
        scheme,
        x: cfg.precision()?,
        ..SweepPlan::new(params, model, grid.to_vec(), cfg.seed)
    };
    let records = sweep(&plan)?;
    let rows: Vec<SweepRow> = records.iter().map(SweepRow::from).collect();
    emit(cfg, provenance, |out, format| match format {
        OutputFormat::Csv => report::write_csv(&rows, out),
        OutputFormat::Json => report::write_json(&records, provenance, out),
    })
}

#[derive(Serialize)]
struct RoundtripReport {
    provenance: Provenance,
    gamma_db: f64,
    sigma2: f64,
    sent: String,
    decoded: String,
    success: bool,
    spine_sent: Vec<String>,
    spine_decoded: Vec<String>,
    segment_costs: Vec<f64>,
    cost: f64,
    nodes_visited: u64,
}

fn roundtrip(cfg: &RunConfig, provenance: &Provenance) -> Result<(), Failure> {
    let params = cfg.code_params()?;
    let model = cfg.single_channel()?;
    let gamma_db = *cfg
        .grid()?
        .first()
        .ok_or_else(|| Failure::config("gamma_grid: roundtrip needs one SNR point"))?;
    let noise = sigma_from_snr(gamma_db, params.c(), params.d_min())?;
    let decoder = MlDecoder::new(params)?.with_bit_cap(cfg.bit_cap);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ROUNDTRIP_STREAM);
    let sent = match &cfg.message {
        Some(text) => text.parse::<Message>()?,
        None => Message::random(params.n(), &mut rng),
    };
    let spine_sent = spinal_core::codec::spine_chain(&sent, &params)?;
    let symbols = decoder.code().encode(&sent)?;
    let obs = transmit(&symbols, &model, &noise, &mut rng)?;
    let decoded = decoder.decode(&obs)?;

    let hex = |s: &[spinal_core::codec::SpineValue]| -> Vec<String> {
        let digits = (params.v() as usize).div_ceil(4);
        s.iter().map(|v| format!("0x{:0digits$x}", v.0)).collect()
    };
    let report = RoundtripReport {
        provenance: provenance.clone(),
        gamma_db,
        sigma2: noise.sigma2,
        sent: sent.to_string(),
        decoded: decoded.message.to_string(),
        success: decoded.message == sent,
        spine_sent: hex(&spine_sent),
        spine_decoded: hex(&decoded.spine),
        segment_costs: decoded.segment_costs.clone(),
        cost: decoded.cost,
        nodes_visited: decoded.nodes_visited,
    };
    emit(cfg, provenance, |mut out, format| match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            Ok(())
        }
        OutputFormat::Csv => write_roundtrip_text(&report, &model.to_string(), out),
    })
}

fn write_roundtrip_text(r: &RoundtripReport, channel: &str, mut out: impl Write) -> spinal_core::Result<()> {
    writeln!(
        out,
        "channel: {channel}  gamma_db: {}  sigma2: {:?}",
        r.gamma_db, r.sigma2
    )?;
    writeln!(
        out,
        "hash_id: {}  seed: {}",
        r.provenance.hash_id, r.provenance.master_seed
    )?;
    writeln!(out, "sent:    {}", r.sent)?;
    writeln!(out, "decoded: {}", r.decoded)?;
    writeln!(out, "spine values ({}):", r.spine_sent.len())?;
    for (i, (s, d)) in r.spine_sent.iter().zip(&r.spine_decoded).enumerate() {
        writeln!(out, "  s_{:<3} {s}  decoded {d}", i + 1)?;
    }
    writeln!(out, "per-segment cost:")?;
    let mut running = 0.0;
    for (i, c) in r.segment_costs.iter().enumerate() {
        running += c;
        writeln!(out, "  segment {:<3} {c:<24?} cumulative {running:?}", i + 1)?;
    }
    writeln!(out, "nodes visited: {}", r.nodes_visited)?;
    writeln!(out, "decoded == sent: {}", r.success)?;
    Ok(())
}

fn emit_table(table: &Table, cfg: &RunConfig, provenance: &Provenance) -> Result<(), Failure> {
    emit(cfg, provenance, |out, format| match format {
        OutputFormat::Csv => table.write_csv(out),
        OutputFormat::Json => table.write_json(provenance, out),
    })
}

/// Writes to `--out` or stdout. CSV has a fixed body, so its provenance
/// goes to a `<out>.meta.json` sidecar (or stderr when writing to stdout).
fn emit<F>(cfg: &RunConfig, provenance: &Provenance, write: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write, OutputFormat) -> spinal_core::Result<()>,
{
    let json_meta = || serde_json::to_string(provenance).map_err(|e| Failure::runtime(e.to_string()));
    match &cfg.out {
        Some(path) => {
            let mut file = BufWriter::new(create(path)?);
            write(&mut file, cfg.format)?;
            file.flush()?;
            if cfg.format == OutputFormat::Csv {
                let meta = sidecar_path(path);
                let mut file = BufWriter::new(create(&meta)?);
                writeln!(file, "{}", json_meta()?)?;
                file.flush()?;
            }
        }
        None => {
            if cfg.format == OutputFormat::Csv {
                eprintln!("# provenance: {}", json_meta()?);
            }
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock, cfg.format)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Formats `value` with `digits` significant digits, dropping trailing zeros.
fn significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    if !(-5..16).contains(&magnitude) {
        return format!("{:.*e}", digits - 1, value);
    }
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let text = format!("{value:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(0.031_074_285_507_202_15, 6), "0.0310743");
        assert_eq!(significant(1.0, 6), "1");
        assert_eq!(significant(123_456.7, 6), "123457");
        assert_eq!(significant(1.5e-9, 3), "1.50e-9");
    }

    #[test]
    fn sidecar_appends_suffix() {
        assert_eq!(
            sidecar_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.csv.meta.json")
        );
    }
}
