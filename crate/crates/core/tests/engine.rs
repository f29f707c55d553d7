//! Engine runs replayed from their own traces.

use std::collections::HashMap;

use evguide::engine::{run, run_traced, RunOptions, SlotTrace};
use evguide::network::{LinkDecl, NodeDecl, NodeKind, RealRange};
use evguide::scenario::{builtin_sioux_falls, Scenario, ScenarioSpec, UnserviceablePolicy};
use evguide::stochastic::sample_link_snapshot;
use evguide::strategy::{Decision, Strategy};
use proptest::prelude::*;

fn traces(sc: &Scenario, strategy: Strategy) -> Vec<SlotTrace> {
    let mut out = Vec::new();
    run_traced(sc, strategy, &RunOptions::default(), |t| out.push(t.clone())).unwrap();
    out
}

/// Rebuilds every occupancy series from the decision and departure ledger
/// alone, without looking at the engine's own occupancy.
fn replay(sc: &Scenario, traces: &[SlotTrace]) -> Vec<Vec<u32>> {
    let net = sc.network();
    let horizon = sc.horizon();
    let mut landing: HashMap<(usize, u64), u32> = HashMap::new();
    for tr in traces {
        for d in &tr.decisions {
            if let Decision::Guided(g) = d {
                let at = g.request.slot + u64::from(g.travel_slots);
                if at <= horizon {
                    *landing
                        .entry((net.station_ordinal(g.station).unwrap(), at))
                        .or_default() += 1;
                }
            }
        }
    }
    let mut series = vec![Vec::with_capacity(traces.len()); net.stations().len()];
    for (j, s) in series.iter_mut().enumerate() {
        let mut u = i64::from(sc.initial_occupancy()[j]);
        s.push(u as u32);
        for t in 2..=horizon {
            let arrivals = i64::from(landing.get(&(j, t)).copied().unwrap_or(0));
            let left = i64::from(traces[t as usize - 2].departures[j]);
            u = (u + arrivals - left).max(0);
            s.push(u as u32);
        }
    }
    series
}

fn check_run(sc: &Scenario, strategy: Strategy) {
    let trs = traces(sc, strategy);
    assert_eq!(trs.len() as u64, sc.horizon());
    let expected = replay(sc, &trs);
    for (j, s) in expected.iter().enumerate() {
        let got: Vec<u32> = trs.iter().map(|t| t.occupancy[j]).collect();
        assert_eq!(&got, s, "station ordinal {j}");
    }
}

#[test]
fn occupancy_matches_ledger_replay() {
    for seed in 0..6 {
        let sc = Scenario::new(builtin_sioux_falls())
            .unwrap()
            .with_horizon(3_000)
            .with_seed(seed);
        check_run(&sc, Strategy::Sdd);
        check_run(&sc, Strategy::Csb);
    }
}

#[test]
fn decisions_are_feasible_and_routes_consistent() {
    let sc = Scenario::new(builtin_sioux_falls())
        .unwrap()
        .with_horizon(3_000)
        .with_seed(5);
    let net = sc.network();
    for strategy in [Strategy::Sdd, Strategy::Csb] {
        for tr in traces(&sc, strategy) {
            assert_eq!(tr.decisions.len(), tr.requests.len());
            let snap = sample_link_snapshot(net, sc.seed(), tr.slot);
            for (d, r) in tr.decisions.iter().zip(&tr.requests) {
                let Decision::Guided(g) = d else { continue };
                assert_eq!(&g.request, r);
                assert!(g.energy_kwh <= r.remaining_energy_kwh);
                assert_eq!(net.node(g.station).kind, NodeKind::Station);
                assert_eq!(g.route.first(), Some(&r.origin));
                assert_eq!(g.route.last(), Some(&g.station));
                let (mut e, mut tau) = (0.0, 0);
                for w in g.route.windows(2) {
                    let l = net.link_between(w[0], w[1]).expect("route follows links");
                    e += snap.energy_kwh(l);
                    tau += snap.travel_slots(l);
                }
                assert_eq!(e, g.energy_kwh);
                assert_eq!(tau, g.travel_slots);
            }
        }
    }
}

#[test]
fn strategies_see_identical_randomness() {
    let sc = Scenario::new(builtin_sioux_falls())
        .unwrap()
        .with_horizon(2_000)
        .with_seed(12);
    let a = traces(&sc, Strategy::Sdd);
    let b = traces(&sc, Strategy::Csb);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.requests, y.requests);
        assert_eq!(x.departures, y.departures);
    }
}

#[test]
fn requests_are_conserved() {
    let sc = Scenario::new(builtin_sioux_falls())
        .unwrap()
        .with_horizon(5_000)
        .with_seed(2);
    for strategy in [Strategy::Sdd, Strategy::Csb] {
        let trs = traces(&sc, strategy);
        let guided = trs
            .iter()
            .flat_map(|t| &t.decisions)
            .filter(|d| matches!(d, Decision::Guided(_)))
            .count() as u64;
        let m = run(&sc, strategy, &RunOptions::default()).unwrap();
        let landed: u64 = m.stations.iter().map(|s| s.landed_arrivals).sum();
        assert_eq!(m.total_requests, guided + m.unserviceable);
        assert_eq!(guided, landed + m.overflow_arrivals);
        assert!(m.ledger_balanced());
    }
}

/// One normal node and one station; occupancy is then driven by demand and
/// service alone.
fn single_station(lambda: f64, mu: f64, horizon: u64, seed: u64) -> Scenario {
    Scenario::new(ScenarioSpec {
        nodes: vec![
            NodeDecl::new("1", NodeKind::Normal),
            NodeDecl::new("2", NodeKind::Normal),
            NodeDecl::new("CS1", NodeKind::Station),
        ],
        links: vec![
            LinkDecl::new("1", "CS1", 3.0, (1, 3), (1.0, 2.0)),
            LinkDecl::new("2", "CS1", 3.0, (1, 2), (1.0, 2.0)),
            LinkDecl::new("CS1", "2", 3.0, (1, 1), (1.0, 2.0)),
        ],
        request_prob: [("1".into(), lambda), ("2".into(), lambda)].into(),
        departure_prob: [("CS1".into(), mu)].into(),
        initial_occupancy: [("CS1".into(), 0)].into(),
        request_energy_kwh: RealRange { lo: 5.0, hi: 6.0 },
        horizon,
        seed,
        unserviceable_policy: UnserviceablePolicy::DropAndLog,
    })
    .unwrap()
}

fn occupancy(sc: &Scenario) -> Vec<u32> {
    traces(sc, Strategy::Csb).iter().map(|t| t.occupancy[0]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// More demand never lowers occupancy; more service never raises it.
    #[test]
    fn load_is_monotone(seed in any::<u64>(), l1 in 0.0f64..1.0, dl in 0.0f64..0.5, m1 in 0.0f64..1.0, dm in 0.0f64..0.5) {
        let l2 = (l1 + dl).min(1.0);
        let m2 = (m1 + dm).min(1.0);
        let base = occupancy(&single_station(l1, m1, 400, seed));
        let busier = occupancy(&single_station(l2, m1, 400, seed));
        let faster = occupancy(&single_station(l1, m2, 400, seed));
        prop_assert!(base.iter().zip(&busier).all(|(a, b)| a <= b));
        prop_assert!(base.iter().zip(&faster).all(|(a, b)| a >= b));
    }
}
