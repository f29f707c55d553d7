//! Per-request station selection: reachability filter, then either the
//! shortest-driving-distance rule (SDD) or the charging-station-balance
//! rule (CSB).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::network::{NodeIdx, RoadNetwork, RouteTree, StaticDistances};
use crate::stochastic::{ChargingRequest, TieBreaker};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Shortest static distance from the station to the request's destination.
    Sdd,
    /// Fewest EVs currently at the station.
    Csb,
}

impl Strategy {
    pub fn token(self) -> &'static str {
        match self {
            Strategy::Sdd => "sdd",
            Strategy::Csb => "csb",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown strategy {0:?}, expected sdd or csb")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sdd" => Ok(Strategy::Sdd),
            "csb" => Ok(Strategy::Csb),
            other => Err(UnknownStrategy(other.to_owned())),
        }
    }
}

/// Everything a rule may look at when placing one request.
#[derive(Debug, Clone, Copy)]
pub struct DecisionContext<'a> {
    pub network: &'a RoadNetwork,
    pub request: &'a ChargingRequest,
    /// Minimum-energy tree from the request origin under the request slot's snapshot.
    pub routes: &'a RouteTree,
    pub static_distances: &'a StaticDistances,
    /// Occupancy per station ordinal after this slot's update.
    pub occupancy: &'a [u32],
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuidanceDecision {
    pub request: ChargingRequest,
    pub station: NodeIdx,
    pub route: Vec<NodeIdx>,
    pub travel_slots: u32,
    pub energy_kwh: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Guided(GuidanceDecision),
    Unserviceable(ChargingRequest),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no reachable station has a path to the destination")]
pub struct NoFeasibleStation;

/// A station selection rule over a nonempty reachable set.
pub trait SelectionRule {
    fn select(
        &self,
        ctx: &DecisionContext<'_>,
        reachable: &[NodeIdx],
        tie: &TieBreaker,
    ) -> Result<NodeIdx, NoFeasibleStation>;
}

pub struct ShortestDrivingDistance;
pub struct StationBalance;

impl SelectionRule for ShortestDrivingDistance {
    fn select(
        &self,
        ctx: &DecisionContext<'_>,
        reachable: &[NodeIdx],
        tie: &TieBreaker,
    ) -> Result<NodeIdx, NoFeasibleStation> {
        select_sdd(ctx, reachable, tie)
    }
}

impl SelectionRule for StationBalance {
    fn select(
        &self,
        ctx: &DecisionContext<'_>,
        reachable: &[NodeIdx],
        tie: &TieBreaker,
    ) -> Result<NodeIdx, NoFeasibleStation> {
        Ok(select_csb(ctx, reachable, tie))
    }
}

impl Strategy {
    pub fn rule(self) -> &'static dyn SelectionRule {
        match self {
            Strategy::Sdd => &ShortestDrivingDistance,
            Strategy::Csb => &StationBalance,
        }
    }
}

/// Stations whose minimum route energy does not exceed the remaining energy.
pub fn reachable_stations(
    network: &RoadNetwork,
    request: &ChargingRequest,
    routes: &RouteTree,
) -> Vec<NodeIdx> {
    reachable_iter(network, request, routes).collect()
}

fn reachable_iter<'a>(
    network: &'a RoadNetwork,
    request: &'a ChargingRequest,
    routes: &'a RouteTree,
) -> impl Iterator<Item = NodeIdx> + Clone + 'a {
    network.stations().iter().copied().filter(move |&s| {
        s != request.origin
            && routes
                .cost_to(s)
                .is_some_and(|e| request.remaining_energy_kwh >= e)
    })
}

/// Minimizes `key` over `candidates`, breaking ties at random. Equivalent to
/// collecting the minimizers and calling [`TieBreaker::choose`], without the
/// allocation.
fn argmin_by<K: PartialOrd + Copy>(
    candidates: impl Iterator<Item = NodeIdx> + Clone,
    tie: &TieBreaker,
    key: impl Fn(NodeIdx) -> Option<K>,
) -> Option<NodeIdx> {
    let mut best: Option<K> = None;
    let mut count = 0usize;
    for s in candidates.clone() {
        let Some(k) = key(s) else { continue };
        match best {
            Some(b) if k > b => {}
            Some(b) if k == b => count += 1,
            _ => {
                best = Some(k);
                count = 1;
            }
        }
    }
    let best = best?;
    let pick = tie.index(count);
    candidates
        .filter(|&s| key(s).is_some_and(|k| k == best))
        .nth(pick)
}

/// Reachable station closest (static length) to the destination.
pub fn select_sdd(
    ctx: &DecisionContext<'_>,
    reachable: &[NodeIdx],
    tie: &TieBreaker,
) -> Result<NodeIdx, NoFeasibleStation> {
    sdd_over(ctx, reachable.iter().copied(), tie).ok_or(NoFeasibleStation)
}

fn sdd_over(
    ctx: &DecisionContext<'_>,
    candidates: impl Iterator<Item = NodeIdx> + Clone,
    tie: &TieBreaker,
) -> Option<NodeIdx> {
    let dest = ctx.request.destination;
    argmin_by(candidates, tie, |s| {
        ctx.static_distances.get(ctx.network, s, dest)
    })
}

/// Reachable station with the fewest EVs.
///
/// # Panics
///
/// Panics if `reachable` is empty.
pub fn select_csb(ctx: &DecisionContext<'_>, reachable: &[NodeIdx], tie: &TieBreaker) -> NodeIdx {
    csb_over(ctx, reachable.iter().copied(), tie).expect("csb needs a nonempty reachable set")
}

fn csb_over(
    ctx: &DecisionContext<'_>,
    candidates: impl Iterator<Item = NodeIdx> + Clone,
    tie: &TieBreaker,
) -> Option<NodeIdx> {
    argmin_by(candidates, tie, |s| {
        ctx.network.station_ordinal(s).map(|ord| ctx.occupancy[ord])
    })
}

/// The station a request is guided to, `None` when it is unserviceable.
/// Same outcome as [`decide`] without building the route.
pub fn choose_station(strategy: Strategy, ctx: &DecisionContext<'_>, tie: &TieBreaker) -> Option<NodeIdx> {
    let reachable = reachable_iter(ctx.network, ctx.request, ctx.routes);
    match strategy {
        Strategy::Sdd => sdd_over(ctx, reachable, tie),
        Strategy::Csb => csb_over(ctx, reachable, tie),
    }
}

/// Places one request. Pure: identical inputs give identical outputs.
pub fn decide(strategy: Strategy, ctx: &DecisionContext<'_>, tie: &TieBreaker) -> Decision {
    let reachable = reachable_stations(ctx.network, ctx.request, ctx.routes);
    if reachable.is_empty() {
        return Decision::Unserviceable(*ctx.request);
    }
    match strategy.rule().select(ctx, &reachable, tie) {
        Ok(station) => Decision::Guided(guide(ctx, station)),
        Err(NoFeasibleStation) => Decision::Unserviceable(*ctx.request),
    }
}

/// Builds the decision that sends the request to `station` along its tree route.
///
/// # Panics
///
/// Panics if `station` has no route in `ctx.routes`.
pub fn guide(ctx: &DecisionContext<'_>, station: NodeIdx) -> GuidanceDecision {
    let route = ctx
        .routes
        .route_to(station)
        .expect("reachable station has a route");
    GuidanceDecision {
        request: *ctx.request,
        station,
        route: route.path,
        travel_slots: route.travel_slots,
        energy_kwh: route.energy_kwh,
    }
}
