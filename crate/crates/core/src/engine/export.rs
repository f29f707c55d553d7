//! CSV hand-off files. All writers emit a header row and a fixed column order.

use std::io::Write;

use super::{RunMetrics, SlotTrace, SweepCell};
use crate::network::NodeId;

pub const SUMMARY_HEADER: [&str; 11] = [
    "run_id",
    "strategy",
    "seed",
    "T",
    "station",
    "avg_occupancy",
    "max_occupancy",
    "stable",
    "extreme_gap",
    "unserviceable_count",
    "overflow_arrivals",
];

/// One row per station followed by a global row whose station column is `ALL`.
pub fn write_summary_csv<W: Write>(out: W, run_id: &str, m: &RunMetrics) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    let (strategy, seed, horizon) = (m.strategy.to_string(), m.seed.to_string(), m.horizon.to_string());
    for s in &m.stations {
        w.write_record([
            run_id,
            &strategy,
            &seed,
            &horizon,
            s.station.as_str(),
            &format!("{:.6}", s.avg_occupancy),
            &s.max_occupancy.to_string(),
            if s.stability.is_stable() { "1" } else { "0" },
            "",
            "",
            "",
        ])?;
    }
    w.write_record([
        run_id,
        &strategy,
        &seed,
        &horizon,
        "ALL",
        "",
        "",
        "",
        &m.extreme_gap.to_string(),
        &m.unserviceable.to_string(),
        &m.overflow_arrivals.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

/// One row per cell and station. Unstable cells report zero occupancy.
pub fn write_sweep_csv<W: Write>(out: W, cells: &[SweepCell]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "lambda",
        "mu",
        "strategy",
        "station",
        "max_occupancy_over_seeds",
        "unstable_any_seed",
    ])?;
    for c in cells {
        let (lambda, mu, strategy) = (c.lambda.to_string(), c.mu.to_string(), c.strategy.to_string());
        let flag = if c.unstable_any_seed { "1" } else { "0" };
        for (station, max) in c.stations.iter().zip(c.exported_max()) {
            w.write_record([&lambda, &mu, &strategy, station.as_str(), &max.to_string(), flag])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Occupancy trace downsampled to slots `1, 1 + k, 1 + 2k, ...`.
pub struct TraceCsv<W: Write> {
    writer: csv::Writer<W>,
    every: u64,
    stations: Vec<NodeId>,
}

impl<W: Write> TraceCsv<W> {
    pub fn new(out: W, every: u64, stations: Vec<NodeId>) -> csv::Result<Self> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["t", "station", "occupancy"])?;
        Ok(TraceCsv {
            writer,
            every: every.max(1),
            stations,
        })
    }

    pub fn record(&mut self, trace: &SlotTrace) -> csv::Result<()> {
        if !(trace.slot - 1).is_multiple_of(self.every) {
            return Ok(());
        }
        let t = trace.slot.to_string();
        for (station, u) in self.stations.iter().zip(&trace.occupancy) {
            self.writer
                .write_record([t.as_str(), station.as_str(), &u.to_string()])?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> csv::Result<W> {
        self.writer.flush()?;
        self.writer.into_inner().map_err(|e| e.into_error().into())
    }
}
