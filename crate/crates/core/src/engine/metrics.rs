use crate::network::NodeId;
use crate::strategy::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityReport {
    pub verdict: Stability,
    /// Horizon too short for the drift test; the verdict is `Stable` by convention.
    pub low_confidence: bool,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.verdict == Stability::Stable
    }
}

/// Drift test parameters. A series is unstable when the mean of its last
/// window is at least `ratio` times the mean of its first window and at
/// least `floor` vehicles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityThresholds {
    pub ratio: f64,
    pub floor: f64,
    pub window_fraction: f64,
    pub min_horizon: u64,
}

impl Default for StabilityThresholds {
    fn default() -> Self {
        StabilityThresholds {
            ratio: 2.0,
            floor: 10.0,
            window_fraction: 0.1,
            min_horizon: 1000,
        }
    }
}

impl StabilityThresholds {
    fn window(&self, horizon: u64) -> u64 {
        ((horizon as f64 * self.window_fraction).floor() as u64).clamp(1, horizon.max(1))
    }

    fn judge(&self, horizon: u64, first_sum: u64, last_sum: u64) -> StabilityReport {
        if horizon < self.min_horizon {
            return StabilityReport {
                verdict: Stability::Stable,
                low_confidence: true,
            };
        }
        let w = self.window(horizon) as f64;
        let (first, last) = (first_sum as f64 / w, last_sum as f64 / w);
        let verdict = if last >= self.ratio * first && last >= self.floor {
            Stability::Unstable
        } else {
            Stability::Stable
        };
        StabilityReport {
            verdict,
            low_confidence: false,
        }
    }
}

/// Drift test over a full occupancy series `U^1..U^T`.
pub fn stability_check(series: &[u32], thresholds: &StabilityThresholds) -> StabilityReport {
    let horizon = series.len() as u64;
    let w = thresholds.window(horizon) as usize;
    let sum = |s: &[u32]| s.iter().map(|&u| u64::from(u)).sum::<u64>();
    let (first, last) = if series.is_empty() {
        (0, 0)
    } else {
        (sum(&series[..w]), sum(&series[series.len() - w..]))
    };
    thresholds.judge(horizon, first, last)
}

/// Streaming form of [`stability_check`] for a known horizon.
#[derive(Debug, Clone)]
pub(crate) struct StabilityWindows {
    horizon: u64,
    window: u64,
    first_sum: u64,
    last_sum: u64,
}

impl StabilityWindows {
    pub(crate) fn new(horizon: u64, thresholds: &StabilityThresholds) -> Self {
        StabilityWindows {
            horizon,
            window: thresholds.window(horizon),
            first_sum: 0,
            last_sum: 0,
        }
    }

    pub(crate) fn record(&mut self, t: u64, u: u32) {
        if t <= self.window {
            self.first_sum += u64::from(u);
        }
        if t > self.horizon - self.window {
            self.last_sum += u64::from(u);
        }
    }

    pub(crate) fn report(&self, thresholds: &StabilityThresholds) -> StabilityReport {
        thresholds.judge(self.horizon, self.first_sum, self.last_sum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationMetrics {
    pub station: NodeId,
    /// Mean of `U^t` over the slots run.
    pub avg_occupancy: f64,
    pub max_occupancy: u32,
    pub initial_occupancy: u32,
    pub final_occupancy: u32,
    pub landed_arrivals: u64,
    /// Departure draws that actually removed an EV.
    pub effective_departures: u64,
    pub stability: StabilityReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub strategy: Strategy,
    pub seed: u64,
    pub horizon: u64,
    pub stations: Vec<StationMetrics>,
    /// Largest minus smallest per-station maximum occupancy.
    pub extreme_gap: u32,
    pub unserviceable: u64,
    pub total_requests: u64,
    pub total_effective_departures: u64,
    pub overflow_arrivals: u64,
}

impl RunMetrics {
    /// `U^T = phi + landed - effective departures` at every station.
    pub fn ledger_balanced(&self) -> bool {
        self.stations.iter().all(|s| {
            u64::from(s.final_occupancy) + s.effective_departures
                == u64::from(s.initial_occupancy) + s.landed_arrivals
        })
    }

    pub fn stable_count(&self) -> usize {
        self.stations.iter().filter(|s| s.stability.is_stable()).count()
    }

    pub fn all_stable(&self) -> bool {
        self.stable_count() == self.stations.len()
    }

    pub fn max_occupancy(&self) -> u32 {
        self.stations.iter().map(|s| s.max_occupancy).max().unwrap_or(0)
    }

    pub fn station(&self, id: &str) -> Option<&StationMetrics> {
        self.stations.iter().find(|s| s.station.as_str() == id)
    }
}
