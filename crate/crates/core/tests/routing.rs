//! Routing checked against brute force: every simple path is enumerated and
//! the cheapest one (lexicographically smallest node sequence on exact ties)
//! must match the label-setting search.

use evguide::network::{
    build_network, min_energy_routes, route_tree, static_distances_to_destinations, LinkDecl, LinkIdx,
    LinkSnapshot, NodeDecl, NodeIdx, NodeKind, RoadNetwork, RouteTree,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Case {
    net: RoadNetwork,
    snap: LinkSnapshot,
}

/// Random digraph with at most `max_nodes` nodes. With `integral` energies
/// equal-cost paths are common, which exercises the tie rule.
fn random_case(rng: &mut StdRng, max_nodes: usize, integral: bool) -> Case {
    loop {
        let n = rng.random_range(2..=max_nodes);
        let stations = rng.random_range(1..n);
        let ids: Vec<String> = (0..n)
            .map(|i| {
                if i < stations {
                    format!("CS{i}")
                } else {
                    format!("{i}")
                }
            })
            .collect();
        let nodes: Vec<NodeDecl> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let kind = if i < stations {
                    NodeKind::Station
                } else {
                    NodeKind::Normal
                };
                NodeDecl::new(id.clone(), kind)
            })
            .collect();
        let density = rng.random_range(0.2..0.8);
        let mut links = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && rng.random_bool(density) {
                    let hi_t = rng.random_range(1..4);
                    links.push(LinkDecl::new(
                        ids[a].clone(),
                        ids[b].clone(),
                        rng.random_range(1.0..10.0),
                        (1, hi_t),
                        (0.5, 12.0),
                    ));
                }
            }
        }
        let Ok(net) = build_network(&nodes, &links) else {
            continue;
        };
        let travel = net
            .links()
            .iter()
            .map(|l| rng.random_range(l.time_slots.lo..=l.time_slots.hi))
            .collect();
        let energy = net
            .links()
            .iter()
            .map(|_| {
                if integral {
                    f64::from(rng.random_range(1u32..=4))
                } else {
                    rng.random_range(0.5..=6.0)
                }
            })
            .collect();
        let snap = LinkSnapshot::new(&net, 1, travel, energy).unwrap();
        return Case { net, snap };
    }
}

/// Best simple path to every node as `(energy, travel, path)`.
fn brute_force(case: &Case, origin: NodeIdx) -> Vec<Option<(f64, u32, Vec<NodeIdx>)>> {
    fn walk(
        case: &Case,
        path: &mut Vec<NodeIdx>,
        energy: f64,
        travel: u32,
        best: &mut Vec<Option<(f64, u32, Vec<NodeIdx>)>>,
    ) {
        let here = *path.last().unwrap();
        let better = match &best[here.0] {
            None => true,
            Some((e, _, p)) => energy < *e || (energy == *e && path.as_slice() < p.as_slice()),
        };
        if better {
            best[here.0] = Some((energy, travel, path.clone()));
        }
        for &l in case.net.outgoing(here) {
            let to = case.net.links()[l.0].to;
            if path.contains(&to) {
                continue;
            }
            path.push(to);
            walk(
                case,
                path,
                energy + case.snap.energy_kwh(l),
                travel + case.snap.travel_slots(l),
                best,
            );
            path.pop();
        }
    }
    let mut best = vec![None; case.net.node_count()];
    walk(case, &mut vec![origin], 0.0, 0, &mut best);
    best
}

fn check_against_oracle(case: &Case) {
    for o in 0..case.net.node_count() {
        let origin = NodeIdx(o);
        let oracle = brute_force(case, origin);
        let tree = route_tree(&case.net, &case.snap, origin);
        for (v, expected) in oracle.iter().enumerate() {
            let v = NodeIdx(v);
            match expected {
                None => assert_eq!(tree.cost_to(v), None),
                Some((e, tau, path)) => {
                    let got = tree.cost_to(v).expect("reachable node");
                    assert!((got - e).abs() <= 1e-9, "energy {got} vs {e}");
                    assert_eq!(tree.path_to(v).as_ref(), Some(path));
                    assert_eq!(tree.travel_slots_to(v), Some(*tau));
                }
            }
        }
        let routes = min_energy_routes(&case.net, &case.snap, origin);
        for (&s, r) in &routes {
            let (e, tau, path) = oracle[s.0].as_ref().unwrap();
            assert_eq!(r.station, s);
            assert!((r.energy_kwh - e).abs() <= 1e-9);
            assert_eq!(r.travel_slots, *tau);
            assert_eq!(&r.path, path);
        }
        let expected_stations = case
            .net
            .stations()
            .iter()
            .filter(|&&s| s != origin && oracle[s.0].is_some())
            .count();
        assert_eq!(routes.len(), expected_stations);
    }
}

#[test]
fn matches_exhaustive_enumeration_on_random_graphs() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for i in 0..1000 {
        // every other graph uses integer energies to force ties
        let case = random_case(&mut rng, 8, i % 2 == 0);
        check_against_oracle(&case);
    }
}

#[test]
fn bounded_search_agrees_within_the_bound() {
    let mut rng = StdRng::seed_from_u64(77);
    let mut bounded = RouteTree::new();
    for i in 0..300 {
        let case = random_case(&mut rng, 8, i % 2 == 0);
        let bound = rng.random_range(0.0..12.0);
        for o in 0..case.net.node_count() {
            let full = route_tree(&case.net, &case.snap, NodeIdx(o));
            bounded.solve_stations(
                &case.net,
                NodeIdx(o),
                bound,
                |l| case.snap.energy_kwh(l),
                |l| case.snap.travel_slots(l),
            );
            for &s in case.net.stations() {
                let within = full.cost_to(s).filter(|&c| c <= bound);
                assert_eq!(bounded.cost_to(s), within);
                if within.is_some() {
                    assert_eq!(bounded.path_to(s), full.path_to(s));
                    assert_eq!(bounded.travel_slots_to(s), full.travel_slots_to(s));
                }
            }
        }
    }
}

/// Plain Bellman-Ford relaxation, for graphs too large to enumerate.
fn bellman_ford(net: &RoadNetwork, weight: impl Fn(LinkIdx) -> f64, origin: NodeIdx) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; net.node_count()];
    d[origin.0] = 0.0;
    for _ in 0..net.node_count() {
        for (i, l) in net.links().iter().enumerate() {
            let c = d[l.from.0] + weight(LinkIdx(i));
            if c < d[l.to.0] {
                d[l.to.0] = c;
            }
        }
    }
    d
}

#[test]
fn large_graphs_match_relaxation_costs() {
    let mut rng = StdRng::seed_from_u64(3);
    let n = 400;
    let ids: Vec<String> = (0..n)
        .map(|i| {
            if i % 10 == 0 {
                format!("CS{i}")
            } else {
                format!("{i}")
            }
        })
        .collect();
    let nodes: Vec<NodeDecl> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            NodeDecl::new(
                id.clone(),
                if i % 10 == 0 {
                    NodeKind::Station
                } else {
                    NodeKind::Normal
                },
            )
        })
        .collect();
    let mut links = Vec::new();
    for a in 0..n {
        // a ring keeps every station reachable
        links.push(LinkDecl::new(
            ids[a].clone(),
            ids[(a + 1) % n].clone(),
            1.0,
            (1, 1),
            (1.0, 5.0),
        ));
        for _ in 0..3 {
            let b = rng.random_range(0..n);
            if b != a
                && b != (a + 1) % n
                && !links
                    .iter()
                    .any(|l: &LinkDecl| l.from.as_str() == ids[a] && l.to.as_str() == ids[b])
            {
                links.push(LinkDecl::new(
                    ids[a].clone(),
                    ids[b].clone(),
                    1.0,
                    (1, 1),
                    (1.0, 5.0),
                ));
            }
        }
    }
    let net = build_network(&nodes, &links).unwrap();
    let energy: Vec<f64> = net.links().iter().map(|_| rng.random_range(1.0..=5.0)).collect();
    let snap = LinkSnapshot::new(&net, 1, vec![1; net.link_count()], energy).unwrap();
    for o in [0, 17, 255, 399] {
        let tree = route_tree(&net, &snap, NodeIdx(o));
        let d = bellman_ford(&net, |l| snap.energy_kwh(l), NodeIdx(o));
        for (v, &dv) in d.iter().enumerate() {
            let got = tree.cost_to(NodeIdx(v)).unwrap();
            assert!((got - dv).abs() <= 1e-9);
        }
    }
}

#[test]
fn subpaths_of_optimal_routes_are_optimal() {
    let mut rng = StdRng::seed_from_u64(11);
    for i in 0..200 {
        let case = random_case(&mut rng, 8, i % 2 == 0);
        for o in 0..case.net.node_count() {
            let tree = route_tree(&case.net, &case.snap, NodeIdx(o));
            for v in 0..case.net.node_count() {
                let Some(path) = tree.path_to(NodeIdx(v)) else {
                    continue;
                };
                for (k, &mid) in path.iter().enumerate() {
                    assert_eq!(tree.path_to(mid).unwrap(), path[..=k].to_vec());
                }
            }
        }
    }
}

#[test]
fn static_distances_match_relaxation() {
    let mut rng = StdRng::seed_from_u64(21);
    for i in 0..200 {
        let case = random_case(&mut rng, 8, i % 2 == 0);
        let dist = static_distances_to_destinations(&case.net);
        for &s in case.net.stations() {
            let d = bellman_ford(&case.net, |l| case.net.links()[l.0].length_km, s);
            for (v, &dv) in d.iter().enumerate() {
                let got = dist.get(&case.net, s, NodeIdx(v));
                if dv.is_finite() {
                    assert!((got.unwrap() - dv).abs() <= 1e-9);
                } else {
                    assert_eq!(got, None);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Raising one link's energy never lowers any minimum route energy.
    #[test]
    fn costs_are_monotone_in_link_energy(seed in any::<u64>(), bump in 0.0f64..5.0, pick in any::<prop::sample::Index>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let case = random_case(&mut rng, 8, false);
        let l = pick.index(case.net.link_count());
        let mut energy: Vec<f64> = (0..case.net.link_count()).map(|i| case.snap.energy_kwh(LinkIdx(i))).collect();
        energy[l] += bump;
        let travel: Vec<u32> = (0..case.net.link_count()).map(|i| case.snap.travel_slots(LinkIdx(i))).collect();
        let raised = LinkSnapshot::new(&case.net, 1, travel, energy).unwrap();
        for o in 0..case.net.node_count() {
            let before = route_tree(&case.net, &case.snap, NodeIdx(o));
            let after = route_tree(&case.net, &raised, NodeIdx(o));
            for v in 0..case.net.node_count() {
                let (b, a) = (before.cost_to(NodeIdx(v)), after.cost_to(NodeIdx(v)));
                prop_assert_eq!(b.is_some(), a.is_some());
                if let (Some(b), Some(a)) = (b, a) {
                    prop_assert!(a >= b - 1e-12);
                }
            }
        }
    }
}
