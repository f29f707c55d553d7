//! The built-in scenario against the raw tables in `fixtures/`.

use std::collections::BTreeMap;
use std::path::Path;

use evguide::network::NodeKind;
use evguide::scenario::{builtin_sioux_falls, ScenarioSpec};

fn fixture(name: &str) -> Vec<(String, String)> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (k, v) = l.split_once('\t').expect("tab separated");
            (k.trim().to_owned(), v.trim().to_owned())
        })
        .collect()
}

fn pair(v: &str) -> (f64, f64) {
    let (a, b) = v
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split_once(',')
        .expect("[lo,hi]");
    (a.trim().parse().unwrap(), b.trim().parse().unwrap())
}

fn link_key(k: &str) -> (String, String) {
    let (a, b) = k.split_once('-').expect("from-to");
    (a.to_owned(), b.to_owned())
}

fn links_by_key(spec: &ScenarioSpec) -> BTreeMap<(String, String), &evguide::network::LinkDecl> {
    spec.links
        .iter()
        .map(|l| ((l.from.as_str().to_owned(), l.to.as_str().to_owned()), l))
        .collect()
}

#[test]
fn departure_probabilities_match_table() {
    let spec = builtin_sioux_falls();
    let rows = fixture("departure_prob.tsv");
    assert_eq!(rows.len(), 8);
    assert_eq!(spec.departure_prob.len(), 8);
    for (k, v) in rows {
        let id = k.replace(' ', "");
        assert_eq!(
            spec.departure_prob[&id.as_str().into()],
            v.parse::<f64>().unwrap(),
            "{id}"
        );
    }
}

#[test]
fn request_probabilities_match_table() {
    let spec = builtin_sioux_falls();
    let rows = fixture("request_prob.tsv");
    assert_eq!(rows.len(), 16);
    assert_eq!(spec.request_prob.len(), 16);
    for (k, v) in rows {
        assert_eq!(
            spec.request_prob[&k.as_str().into()],
            v.parse::<f64>().unwrap(),
            "{k}"
        );
    }
}

#[test]
fn link_tables_match_every_cell() {
    let spec = builtin_sioux_falls();
    let links = links_by_key(&spec);
    let energy = fixture("link_energy.tsv");
    let time = fixture("link_time.tsv");
    let length = fixture("link_length.tsv");
    for table in [&energy, &time, &length] {
        assert_eq!(table.len(), 76);
        let keys: std::collections::BTreeSet<_> = table.iter().map(|(k, _)| link_key(k)).collect();
        assert_eq!(keys.len(), 76, "duplicate rows");
        assert!(keys.iter().eq(links.keys()), "link sets differ");
    }
    for (k, v) in &energy {
        let l = links[&link_key(k)];
        assert_eq!((l.energy_kwh.lo, l.energy_kwh.hi), pair(v), "energy {k}");
    }
    for (k, v) in &time {
        let l = links[&link_key(k)];
        let (lo, hi) = pair(v);
        assert_eq!(
            (f64::from(l.time_slots.lo), f64::from(l.time_slots.hi)),
            (lo, hi),
            "time {k}"
        );
    }
    for (k, v) in &length {
        assert_eq!(
            links[&link_key(k)].length_km,
            v.parse::<f64>().unwrap(),
            "length {k}"
        );
    }
}

#[test]
fn network_shape_and_defaults() {
    let spec = builtin_sioux_falls();
    let net = spec.validate().unwrap();
    assert_eq!(net.node_count(), 24);
    assert_eq!(net.link_count(), 76);
    assert_eq!(net.stations().len(), 8);
    assert_eq!(net.normals().len(), 16);
    for i in 1..=8 {
        let idx = net.index_of(&format!("CS{i}").as_str().into()).unwrap();
        assert_eq!(net.node(idx).kind, NodeKind::Station);
    }
    for i in 1..=16 {
        let idx = net.index_of(&i.to_string().as_str().into()).unwrap();
        assert_eq!(net.node(idx).kind, NodeKind::Normal);
    }
    assert!(spec.initial_occupancy.values().all(|&u| u == 0));
    assert_eq!(
        (spec.request_energy_kwh.lo, spec.request_energy_kwh.hi),
        (7.2, 16.8)
    );
    let cs8 = net.index_of(&"CS8".into()).unwrap();
    let n12 = net.index_of(&"12".into()).unwrap();
    let l = net.link_between(cs8, n12).unwrap();
    assert!(net.links()[l.0].length_km <= 10.0);
}
