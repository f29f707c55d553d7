//! Slotted-time simulation loop.
//!
//! Each slot runs in a fixed order: occupancy update from the arrivals
//! landing now and the departure drawn in the previous slot, link snapshot,
//! request generation, decisions in ascending origin order, and finally the
//! departure draw that the next slot consumes.

mod export;
mod metrics;
mod sweep;

use std::collections::VecDeque;

use thiserror::Error;

use crate::network::{LinkSnapshot, NodeId, NodeIdx, RouteTree};
use crate::scenario::{Scenario, UnserviceablePolicy};
use crate::stochastic::{
    generate_requests_into, sample_departures_into, sample_link_snapshot_into, ChargingRequest, TieBreaker,
};
use crate::strategy::{choose_station, guide, Decision, DecisionContext, GuidanceDecision, Strategy};

pub use export::{write_summary_csv, write_sweep_csv, TraceCsv};
pub use metrics::{
    stability_check, RunMetrics, Stability, StabilityReport, StabilityThresholds, StationMetrics,
};
pub use sweep::{sweep, sweep_run_seed, SweepCell, SweepConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("slot {slot}: request at node {origin} has no reachable station")]
    HaltUnserviceable { slot: u64, origin: NodeId },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

/// `max{prev + arrivals - departed, 0}`.
pub fn occupancy_update(prev: u32, arrivals: u32, departed: bool) -> u32 {
    (prev + arrivals).saturating_sub(departed as u32)
}

/// Where a scheduled arrival ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrivalSchedule {
    Pending(u64),
    /// Lands after the horizon and never enters occupancy.
    Overflow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationState {
    pub station: NodeIdx,
    pub occupancy: u32,
    /// `pending[i]` EVs land at slot `pending_base + i`.
    pending: VecDeque<u32>,
    pending_base: u64,
}

impl StationState {
    pub fn new(station: NodeIdx, occupancy: u32) -> Self {
        StationState {
            station,
            occupancy,
            pending: VecDeque::new(),
            pending_base: 1,
        }
    }

    pub fn pending_at(&self, slot: u64) -> u32 {
        slot.checked_sub(self.pending_base)
            .and_then(|i| self.pending.get(i as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Booked arrivals as `(landing slot, count)`, earliest first.
    pub fn pending(&self) -> Vec<(u64, u32)> {
        (self.pending_base..)
            .zip(self.pending.iter().copied())
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Books the EV for slot `request slot + travel slots`.
    pub fn schedule_arrival(&mut self, decision: &GuidanceDecision, horizon: u64) -> ArrivalSchedule {
        self.book(decision.request.slot, decision.travel_slots, horizon)
    }

    fn book(&mut self, request_slot: u64, travel_slots: u32, horizon: u64) -> ArrivalSchedule {
        debug_assert!(travel_slots >= 1);
        let landing = request_slot + u64::from(travel_slots);
        if landing > horizon {
            return ArrivalSchedule::Overflow;
        }
        let i = (landing - self.pending_base) as usize;
        if self.pending.len() <= i {
            self.pending.resize(i + 1, 0);
        }
        self.pending[i] += 1;
        ArrivalSchedule::Pending(landing)
    }

    /// Removes and returns the arrivals landing at `slot`. Slots must be
    /// taken in increasing order.
    fn take_arrivals(&mut self, slot: u64) -> u32 {
        let mut landed = 0;
        while self.pending_base <= slot {
            landed = self.pending.pop_front().unwrap_or(0);
            self.pending_base += 1;
        }
        landed
    }
}

/// What happened in one slot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SlotTrace {
    pub slot: u64,
    /// Occupancy per station ordinal after the update.
    pub occupancy: Vec<u32>,
    /// EVs that landed at each station this slot.
    pub arrivals: Vec<u32>,
    pub requests: Vec<ChargingRequest>,
    /// One entry per request, in request order.
    pub decisions: Vec<Decision>,
    /// Departure draws of this slot, applied at the next update.
    pub departures: Vec<bool>,
}

#[derive(Debug, Clone, Default)]
struct Counters {
    total_requests: u64,
    unserviceable: u64,
    overflow: u64,
    landed: Vec<u64>,
    effective_departures: Vec<u64>,
    occupancy_sum: Vec<u64>,
    occupancy_max: Vec<u32>,
    stability: Vec<metrics::StabilityWindows>,
}

/// A single sequential run.
pub struct Simulation<'a> {
    scenario: &'a Scenario,
    strategy: Strategy,
    slot: u64,
    stations: Vec<StationState>,
    last_departures: Vec<bool>,
    counters: Counters,
    tree: RouteTree,
    snapshot: LinkSnapshot,
    requests: Vec<ChargingRequest>,
    occupancy: Vec<u32>,
    landed_now: Vec<u32>,
    options: RunOptions,
}

impl<'a> Simulation<'a> {
    pub fn new(scenario: &'a Scenario, strategy: Strategy, options: &RunOptions) -> Self {
        let network = scenario.network();
        let n = network.stations().len();
        let stations = network
            .stations()
            .iter()
            .zip(scenario.initial_occupancy())
            .map(|(&s, &phi)| StationState::new(s, phi))
            .collect();
        let horizon = scenario.horizon();
        Simulation {
            scenario,
            strategy,
            slot: 0,
            stations,
            last_departures: vec![false; n],
            counters: Counters {
                landed: vec![0; n],
                effective_departures: vec![0; n],
                occupancy_sum: vec![0; n],
                occupancy_max: vec![0; n],
                stability: vec![metrics::StabilityWindows::new(horizon, &options.thresholds); n],
                ..Counters::default()
            },
            tree: RouteTree::new(),
            snapshot: LinkSnapshot::from_parts_unchecked(0, Vec::new(), Vec::new()),
            requests: Vec::new(),
            occupancy: vec![0; n],
            landed_now: vec![0; n],
            options: *options,
        }
    }

    /// Last completed slot, 0 before the first step.
    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn is_finished(&self) -> bool {
        self.slot >= self.scenario.horizon()
    }

    pub fn stations(&self) -> &[StationState] {
        &self.stations
    }

    /// Advances one slot and returns its trace, or `None` past the horizon.
    pub fn step(&mut self) -> Result<Option<SlotTrace>, EngineError> {
        if self.is_finished() {
            return Ok(None);
        }
        let mut trace = SlotTrace::default();
        self.advance(Some(&mut trace))?;
        Ok(Some(trace))
    }

    fn advance(&mut self, trace: Option<&mut SlotTrace>) -> Result<(), EngineError> {
        let t = self.slot + 1;
        let scenario = self.scenario;
        let network = scenario.network();
        let seed = scenario.seed();
        let horizon = scenario.horizon();

        // occupancy update; slot 1 keeps the initial occupancy
        self.landed_now.fill(0);
        if t > 1 {
            for (ord, st) in self.stations.iter_mut().enumerate() {
                let arrivals = st.take_arrivals(t);
                let prev = st.occupancy;
                st.occupancy = occupancy_update(prev, arrivals, self.last_departures[ord]);
                self.counters.landed[ord] += u64::from(arrivals);
                self.counters.effective_departures[ord] += u64::from(prev + arrivals - st.occupancy);
                self.landed_now[ord] = arrivals;
            }
        }
        for (u, st) in self.occupancy.iter_mut().zip(&self.stations) {
            *u = st.occupancy;
        }

        // link snapshot and new requests
        sample_link_snapshot_into(network, seed, t, &mut self.snapshot);
        generate_requests_into(scenario, seed, t, &mut self.requests);
        self.counters.total_requests += self.requests.len() as u64;

        // decisions against the post-update occupancy
        let mut decisions = Vec::new();
        let snapshot = &self.snapshot;
        for req in &self.requests {
            // stations costlier than the remaining energy are unreachable anyway
            self.tree.solve_stations(
                network,
                req.origin,
                req.remaining_energy_kwh,
                |l| snapshot.energy_kwh(l),
                |l| snapshot.travel_slots(l),
            );
            let ctx = DecisionContext {
                network,
                request: req,
                routes: &self.tree,
                static_distances: scenario.static_distances(),
                occupancy: &self.occupancy,
            };
            let tie = TieBreaker::new(seed, req.origin.0 as u64, t);
            match choose_station(self.strategy, &ctx, &tie) {
                Some(station) => {
                    let ord = network
                        .station_ordinal(station)
                        .expect("decision targets a station");
                    let travel = self.tree.travel_slots_to(station).expect("station is reachable");
                    if self.stations[ord].book(t, travel, horizon) == ArrivalSchedule::Overflow {
                        self.counters.overflow += 1;
                    }
                    if trace.is_some() {
                        decisions.push(Decision::Guided(guide(&ctx, station)));
                    }
                }
                None => {
                    match scenario.unserviceable_policy() {
                        UnserviceablePolicy::DropAndLog => {
                            self.counters.unserviceable += 1;
                            log::debug!(
                                "slot {t}: dropping unserviceable request at node {}",
                                network.id(req.origin)
                            );
                        }
                        UnserviceablePolicy::HaltWithError => {
                            return Err(EngineError::HaltUnserviceable {
                                slot: t,
                                origin: network.id(req.origin).clone(),
                            });
                        }
                    }
                    if trace.is_some() {
                        decisions.push(Decision::Unserviceable(*req));
                    }
                }
            }
        }

        // departures for the next update
        sample_departures_into(scenario, seed, t, &mut self.last_departures);

        for (ord, &u) in self.occupancy.iter().enumerate() {
            self.counters.occupancy_sum[ord] += u64::from(u);
            self.counters.occupancy_max[ord] = self.counters.occupancy_max[ord].max(u);
            self.counters.stability[ord].record(t, u);
        }
        self.slot = t;

        // trace
        if let Some(trace) = trace {
            *trace = SlotTrace {
                slot: t,
                occupancy: self.occupancy.clone(),
                arrivals: self.landed_now.clone(),
                requests: self.requests.clone(),
                decisions,
                departures: self.last_departures.clone(),
            };
        }
        Ok(())
    }

    /// Metrics over the slots run so far. Stability windows refer to the
    /// full horizon, so the verdicts are only meaningful once finished.
    pub fn metrics(&self) -> RunMetrics {
        let thresholds = &self.options.thresholds;
        let network = self.scenario.network();
        let slots = self.slot.max(1);
        let stations: Vec<StationMetrics> = self
            .stations
            .iter()
            .enumerate()
            .map(|(ord, st)| StationMetrics {
                station: network.id(st.station).clone(),
                avg_occupancy: self.counters.occupancy_sum[ord] as f64 / slots as f64,
                max_occupancy: self.counters.occupancy_max[ord],
                initial_occupancy: self.scenario.initial_occupancy()[ord],
                final_occupancy: st.occupancy,
                landed_arrivals: self.counters.landed[ord],
                effective_departures: self.counters.effective_departures[ord],
                stability: self.counters.stability[ord].report(thresholds),
            })
            .collect();
        let extreme_gap = stations.iter().map(|s| s.max_occupancy).max().unwrap_or(0)
            - stations.iter().map(|s| s.max_occupancy).min().unwrap_or(0);
        RunMetrics {
            strategy: self.strategy,
            seed: self.scenario.seed(),
            horizon: self.slot,
            total_effective_departures: stations.iter().map(|s| s.effective_departures).sum(),
            stations,
            extreme_gap,
            unserviceable: self.counters.unserviceable,
            total_requests: self.counters.total_requests,
            overflow_arrivals: self.counters.overflow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub thresholds: StabilityThresholds,
}

/// Runs slots `1..=T` and returns the metrics.
pub fn run(scenario: &Scenario, strategy: Strategy, options: &RunOptions) -> Result<RunMetrics, EngineError> {
    let mut sim = Simulation::new(scenario, strategy, options);
    while !sim.is_finished() {
        sim.advance(None)?;
    }
    Ok(finish(&sim))
}

/// Like [`run`], handing every slot's trace to `observer`.
pub fn run_traced(
    scenario: &Scenario,
    strategy: Strategy,
    options: &RunOptions,
    mut observer: impl FnMut(&SlotTrace),
) -> Result<RunMetrics, EngineError> {
    let mut sim = Simulation::new(scenario, strategy, options);
    while let Some(trace) = sim.step()? {
        observer(&trace);
    }
    Ok(finish(&sim))
}

fn finish(sim: &Simulation<'_>) -> RunMetrics {
    let m = sim.metrics();
    assert!(m.ledger_balanced(), "occupancy ledger out of balance");
    m
}
