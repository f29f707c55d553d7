//! Scenario files: JSON schema, validation, canonical emission and the
//! bundled Sioux Falls example.

mod sioux_falls;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{
    build_network, static_distances_to_destinations, LinkDecl, NetworkError, NodeDecl, NodeId, NodeKind,
    RealRange, RoadNetwork, StaticDistances,
};

pub const SCHEMA_VERSION: u32 = 1;

/// What to do with a request that has no reachable station.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnserviceablePolicy {
    #[default]
    DropAndLog,
    HaltWithError,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("validation error at {path}: {reason}")]
    Validation { path: String, reason: String },
}

impl ScenarioError {
    pub fn path(&self) -> &str {
        match self {
            ScenarioError::Schema { path, .. } | ScenarioError::Validation { path, .. } => path,
        }
    }

    fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        ScenarioError::Validation {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

/// A complete, validated scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub nodes: Vec<NodeDecl>,
    pub links: Vec<LinkDecl>,
    pub request_prob: BTreeMap<NodeId, f64>,
    pub departure_prob: BTreeMap<NodeId, f64>,
    pub initial_occupancy: BTreeMap<NodeId, u32>,
    pub request_energy_kwh: RealRange,
    pub horizon: u64,
    pub seed: u64,
    pub unserviceable_policy: UnserviceablePolicy,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    schema_version: u32,
    nodes: Vec<NodeDoc>,
    links: Vec<LinkDoc>,
    request_prob: BTreeMap<String, f64>,
    departure_prob: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_occupancy: Option<BTreeMap<String, u32>>,
    request_energy_kwh: [f64; 2],
    horizon: u64,
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unserviceable_policy: Option<UnserviceablePolicy>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    kind: NodeKind,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    from: String,
    to: String,
    length_km: f64,
    time_slots: [u32; 2],
    energy_kwh: [f64; 2],
}

/// Parses and validates a scenario JSON document.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(|e| ScenarioError::Schema {
        path: e.path().to_string(),
        reason: e.inner().to_string(),
    })?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ScenarioError::invalid(
            "schema_version",
            format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                doc.schema_version
            ),
        ));
    }
    let keyed = |m: BTreeMap<String, f64>| m.into_iter().map(|(k, v)| (NodeId::new(k), v)).collect();
    let spec = ScenarioSpec {
        nodes: doc
            .nodes
            .into_iter()
            .map(|n| NodeDecl::new(n.id, n.kind))
            .collect(),
        links: doc
            .links
            .into_iter()
            .map(|l| {
                LinkDecl::new(
                    l.from,
                    l.to,
                    l.length_km,
                    (l.time_slots[0], l.time_slots[1]),
                    (l.energy_kwh[0], l.energy_kwh[1]),
                )
            })
            .collect(),
        request_prob: keyed(doc.request_prob),
        departure_prob: keyed(doc.departure_prob),
        initial_occupancy: doc
            .initial_occupancy
            .unwrap_or_default()
            .into_iter()
            .map(|(k, v)| (NodeId::new(k), v))
            .collect(),
        request_energy_kwh: RealRange {
            lo: doc.request_energy_kwh[0],
            hi: doc.request_energy_kwh[1],
        },
        horizon: doc.horizon,
        seed: doc.seed,
        unserviceable_policy: doc.unserviceable_policy.unwrap_or_default(),
    };
    spec.into_validated()
}

/// Canonical JSON: sorted keys, two-space indentation, integral reals
/// written without a fractional part, trailing newline.
pub fn emit_scenario(spec: &ScenarioSpec) -> String {
    let doc = ScenarioDoc {
        schema_version: SCHEMA_VERSION,
        nodes: spec
            .nodes
            .iter()
            .map(|n| NodeDoc {
                id: n.id.to_string(),
                kind: n.kind,
            })
            .collect(),
        links: spec
            .links
            .iter()
            .map(|l| LinkDoc {
                from: l.from.to_string(),
                to: l.to.to_string(),
                length_km: l.length_km,
                time_slots: [l.time_slots.lo, l.time_slots.hi],
                energy_kwh: [l.energy_kwh.lo, l.energy_kwh.hi],
            })
            .collect(),
        request_prob: string_keys(&spec.request_prob),
        departure_prob: string_keys(&spec.departure_prob),
        initial_occupancy: Some(
            spec.initial_occupancy
                .iter()
                .map(|(k, &v)| (k.to_string(), v))
                .collect(),
        ),
        request_energy_kwh: [spec.request_energy_kwh.lo, spec.request_energy_kwh.hi],
        horizon: spec.horizon,
        seed: spec.seed,
        unserviceable_policy: Some(spec.unserviceable_policy),
    };
    let mut value = serde_json::to_value(&doc).expect("scenario document serializes");
    canonicalize_numbers(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("json value serializes");
    text.push('\n');
    text
}

fn string_keys(m: &BTreeMap<NodeId, f64>) -> BTreeMap<String, f64> {
    m.iter().map(|(k, &v)| (k.to_string(), v)).collect()
}

fn canonicalize_numbers(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            let f = n.as_f64().unwrap_or_default();
            if f.fract() == 0.0 && f.abs() < 9.0e15 {
                *v = Value::from(f as i64);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize_numbers),
        Value::Object(map) => map.values_mut().for_each(canonicalize_numbers),
        _ => {}
    }
}

impl ScenarioSpec {
    /// Checks every invariant. Returns the built network on success.
    pub fn validate(&self) -> Result<RoadNetwork, ScenarioError> {
        let network = build_network(&self.nodes, &self.links).map_err(network_error)?;

        check_prob_map(&network, "request_prob", &self.request_prob, NodeKind::Normal)?;
        check_prob_map(
            &network,
            "departure_prob",
            &self.departure_prob,
            NodeKind::Station,
        )?;
        for id in self.initial_occupancy.keys() {
            if network.index_of(id).map(|i| network.node(i).kind) != Some(NodeKind::Station) {
                return Err(ScenarioError::invalid(
                    format!("initial_occupancy.\"{id}\""),
                    "not a station node",
                ));
            }
        }
        let e = self.request_energy_kwh;
        if !(e.lo > 0.0 && e.lo <= e.hi && e.hi.is_finite()) {
            return Err(ScenarioError::invalid(
                "request_energy_kwh",
                "range must satisfy 0 < lo <= hi",
            ));
        }
        if self.horizon < 1 {
            return Err(ScenarioError::invalid("horizon", "must be at least 1"));
        }
        Ok(network)
    }

    fn into_validated(mut self) -> Result<Self, ScenarioError> {
        let network = self.validate()?;
        for &s in network.stations() {
            self.initial_occupancy.entry(network.id(s).clone()).or_insert(0);
        }
        Ok(self)
    }
}

fn network_error(e: NetworkError) -> ScenarioError {
    let path = match e {
        NetworkError::DuplicateNode(_) | NetworkError::MissingNodeKind => "nodes",
        NetworkError::StationUnreachableFrom(_)
        | NetworkError::DuplicateLink(..)
        | NetworkError::DanglingEndpoint { .. }
        | NetworkError::InvalidLink { .. } => "links",
    };
    ScenarioError::invalid(path, e.to_string())
}

fn check_prob_map(
    network: &RoadNetwork,
    field: &str,
    map: &BTreeMap<NodeId, f64>,
    kind: NodeKind,
) -> Result<(), ScenarioError> {
    for (id, &p) in map {
        let path = format!("{field}.\"{id}\"");
        match network.index_of(id) {
            Some(i) if network.node(i).kind == kind => {}
            Some(_) => return Err(ScenarioError::invalid(path, format!("node is not {kind:?}"))),
            None => return Err(ScenarioError::invalid(path, "unknown node")),
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(ScenarioError::invalid(
                path,
                format!("probability {p} outside [0, 1]"),
            ));
        }
    }
    let expected = match kind {
        NodeKind::Normal => network.normals(),
        NodeKind::Station => network.stations(),
    };
    if let Some(&missing) = expected.iter().find(|&&n| !map.contains_key(network.id(n))) {
        return Err(ScenarioError::invalid(
            format!("{field}.\"{}\"", network.id(missing)),
            "missing probability",
        ));
    }
    Ok(())
}

/// The Sioux Falls example scenario with its tabulated parameters, empty
/// stations at start and a horizon of 10^6 slots.
pub fn builtin_sioux_falls() -> ScenarioSpec {
    let mut nodes: Vec<NodeDecl> = sioux_falls::REQUEST_PROB
        .iter()
        .map(|(id, _)| NodeDecl::new(*id, NodeKind::Normal))
        .collect();
    nodes.extend(
        sioux_falls::DEPARTURE_PROB
            .iter()
            .map(|(id, _)| NodeDecl::new(*id, NodeKind::Station)),
    );
    let links = sioux_falls::LINKS
        .iter()
        .map(|&(from, to, len, time, energy)| LinkDecl::new(from, to, len, time, energy))
        .collect();
    let (e_lo, e_hi) = sioux_falls::REQUEST_ENERGY_KWH;
    ScenarioSpec {
        nodes,
        links,
        request_prob: sioux_falls::REQUEST_PROB
            .iter()
            .map(|&(id, p)| (id.into(), p))
            .collect(),
        departure_prob: sioux_falls::DEPARTURE_PROB
            .iter()
            .map(|&(id, p)| (id.into(), p))
            .collect(),
        initial_occupancy: sioux_falls::DEPARTURE_PROB
            .iter()
            .map(|&(id, _)| (id.into(), 0))
            .collect(),
        request_energy_kwh: RealRange { lo: e_lo, hi: e_hi },
        horizon: 1_000_000,
        seed: 1,
        unserviceable_policy: UnserviceablePolicy::DropAndLog,
    }
}

/// Resolves `builtin:<name>` tokens.
pub fn builtin(name: &str) -> Option<ScenarioSpec> {
    match name {
        "sioux-falls" => Some(builtin_sioux_falls()),
        _ => None,
    }
}

/// A scenario ready for simulation: validated network, static distances and
/// per-node parameters in dense order.
///
/// Rate overrides and horizon/seed changes apply here and leave the
/// underlying [`ScenarioSpec`] untouched.
#[derive(Debug, Clone)]
pub struct Scenario {
    spec: ScenarioSpec,
    network: RoadNetwork,
    distances: StaticDistances,
    request_prob: Vec<f64>,
    departure_prob: Vec<f64>,
    initial_occupancy: Vec<u32>,
    horizon: u64,
    seed: u64,
}

impl Scenario {
    pub fn new(spec: ScenarioSpec) -> Result<Self, ScenarioError> {
        let network = spec.validate()?;
        let distances = static_distances_to_destinations(&network);
        let request_prob = network
            .normals()
            .iter()
            .map(|&n| spec.request_prob[network.id(n)])
            .collect();
        let departure_prob = network
            .stations()
            .iter()
            .map(|&s| spec.departure_prob[network.id(s)])
            .collect();
        let initial_occupancy = network
            .stations()
            .iter()
            .map(|&s| spec.initial_occupancy.get(network.id(s)).copied().unwrap_or(0))
            .collect();
        Ok(Scenario {
            horizon: spec.horizon,
            seed: spec.seed,
            spec,
            network,
            distances,
            request_prob,
            departure_prob,
            initial_occupancy,
        })
    }

    /// Same scenario with every request probability set to `lambda` and every
    /// departure probability set to `mu`.
    pub fn with_uniform_rates(&self, lambda: f64, mu: f64) -> Self {
        let mut s = self.clone();
        s.request_prob.iter_mut().for_each(|p| *p = lambda);
        s.departure_prob.iter_mut().for_each(|p| *p = mu);
        s
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn network(&self) -> &RoadNetwork {
        &self.network
    }

    pub fn static_distances(&self) -> &StaticDistances {
        &self.distances
    }

    pub fn request_prob_by_ordinal(&self, normal_ordinal: usize) -> f64 {
        self.request_prob[normal_ordinal]
    }

    pub fn departure_prob_by_ordinal(&self, station_ordinal: usize) -> f64 {
        self.departure_prob[station_ordinal]
    }

    pub fn initial_occupancy(&self) -> &[u32] {
        &self.initial_occupancy
    }

    pub fn request_energy_kwh(&self) -> RealRange {
        self.spec.request_energy_kwh
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn unserviceable_policy(&self) -> UnserviceablePolicy {
        self.spec.unserviceable_policy
    }
}
