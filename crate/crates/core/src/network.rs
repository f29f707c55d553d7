//! Directed road network with normal and charging-station nodes, per-slot
//! minimum-energy routing and static station-to-destination distances.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// External node identifier.
///
/// Identifiers order naturally: runs of ASCII digits compare by numeric
/// value, so `"2" < "10"` and `"CS2" < "CS10"`. Node indices inside a
/// [`RoadNetwork`] follow this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (na, nb) = (trim_zeros(&a[..da]), trim_zeros(&b[..db]));
                let ord = na
                    .len()
                    .cmp(&nb.len())
                    .then_with(|| na.cmp(nb))
                    .then_with(|| da.cmp(&db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let first = digits.iter().position(|&c| c != b'0').unwrap_or(digits.len());
    &digits[first..]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Normal,
    Station,
}

/// Dense node index. Index order equals [`NodeId`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeIdx(pub usize);

/// Dense link index. Links are ordered by `(from, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkIdx(pub usize);

/// Closed integer range of per-link travel time, in slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRange {
    pub lo: u32,
    pub hi: u32,
}

/// Closed real range, used for energies in kWh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRange {
    pub lo: f64,
    pub hi: f64,
}

impl RealRange {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl SlotRange {
    pub fn contains(&self, x: u32) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeDecl {
    pub id: NodeId,
    pub kind: NodeKind,
}

impl NodeDecl {
    pub fn new(id: impl Into<String>, kind: NodeKind) -> Self {
        NodeDecl {
            id: NodeId::new(id),
            kind,
        }
    }
}

/// A link as declared by a scenario, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkDecl {
    pub from: NodeId,
    pub to: NodeId,
    pub length_km: f64,
    pub time_slots: SlotRange,
    pub energy_kwh: RealRange,
}

impl LinkDecl {
    pub fn new(
        from: impl Into<String>,
        to: impl Into<String>,
        length_km: f64,
        time_slots: (u32, u32),
        energy_kwh: (f64, f64),
    ) -> Self {
        LinkDecl {
            from: NodeId::new(from),
            to: NodeId::new(to),
            length_km,
            time_slots: SlotRange {
                lo: time_slots.0,
                hi: time_slots.1,
            },
            energy_kwh: RealRange {
                lo: energy_kwh.0,
                hi: energy_kwh.1,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub from: NodeIdx,
    pub to: NodeIdx,
    pub length_km: f64,
    pub time_slots: SlotRange,
    pub energy_kwh: RealRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("duplicate link {0} -> {1}")]
    DuplicateLink(NodeId, NodeId),
    #[error("link {from} -> {to} references unknown node {missing}")]
    DanglingEndpoint {
        from: NodeId,
        to: NodeId,
        missing: NodeId,
    },
    #[error("invalid link {from} -> {to}: {reason}")]
    InvalidLink {
        from: NodeId,
        to: NodeId,
        reason: String,
    },
    #[error("network needs at least one normal node and one station")]
    MissingNodeKind,
    #[error("no charging station is reachable from node {0}")]
    StationUnreachableFrom(NodeId),
}

/// Validated, immutable road network.
#[derive(Debug, Clone)]
pub struct RoadNetwork {
    nodes: Vec<Node>,
    links: Vec<Link>,
    /// CSR adjacency: outgoing links of node `v` are `out_links[out_start[v]..out_start[v + 1]]`.
    out_start: Vec<usize>,
    out_links: Vec<LinkIdx>,
    stations: Vec<NodeIdx>,
    normals: Vec<NodeIdx>,
    station_ordinal: Vec<Option<usize>>,
    normal_ordinal: Vec<Option<usize>>,
    by_id: HashMap<NodeId, NodeIdx>,
}

/// Validates node and link declarations and builds the adjacency index.
pub fn build_network(nodes: &[NodeDecl], links: &[LinkDecl]) -> Result<RoadNetwork, NetworkError> {
    let mut sorted: Vec<&NodeDecl> = nodes.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    for pair in sorted.windows(2) {
        if pair[0].id == pair[1].id {
            return Err(NetworkError::DuplicateNode(pair[0].id.clone()));
        }
    }
    let nodes: Vec<Node> = sorted
        .into_iter()
        .map(|d| Node {
            id: d.id.clone(),
            kind: d.kind,
        })
        .collect();
    let by_id: HashMap<NodeId, NodeIdx> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.clone(), NodeIdx(i)))
        .collect();

    let mut built = Vec::with_capacity(links.len());
    for decl in links {
        let lookup = |id: &NodeId| {
            by_id
                .get(id)
                .copied()
                .ok_or_else(|| NetworkError::DanglingEndpoint {
                    from: decl.from.clone(),
                    to: decl.to.clone(),
                    missing: id.clone(),
                })
        };
        let (from, to) = (lookup(&decl.from)?, lookup(&decl.to)?);
        let invalid = |reason: &str| NetworkError::InvalidLink {
            from: decl.from.clone(),
            to: decl.to.clone(),
            reason: reason.to_owned(),
        };
        if from == to {
            return Err(invalid("self loop"));
        }
        if !(decl.length_km > 0.0 && decl.length_km.is_finite()) {
            return Err(invalid("length must be positive"));
        }
        if decl.time_slots.lo < 1 || decl.time_slots.lo > decl.time_slots.hi {
            return Err(invalid("time range must satisfy 1 <= lo <= hi"));
        }
        let e = decl.energy_kwh;
        if !(e.lo > 0.0 && e.lo <= e.hi && e.hi.is_finite()) {
            return Err(invalid("energy range must satisfy 0 < lo <= hi"));
        }
        built.push(Link {
            from,
            to,
            length_km: decl.length_km,
            time_slots: decl.time_slots,
            energy_kwh: decl.energy_kwh,
        });
    }
    built.sort_by_key(|l| (l.from, l.to));
    for pair in built.windows(2) {
        if (pair[0].from, pair[0].to) == (pair[1].from, pair[1].to) {
            return Err(NetworkError::DuplicateLink(
                nodes[pair[0].from.0].id.clone(),
                nodes[pair[0].to.0].id.clone(),
            ));
        }
    }

    let mut out_start = vec![0usize; nodes.len() + 1];
    for l in &built {
        out_start[l.from.0 + 1] += 1;
    }
    for v in 0..nodes.len() {
        out_start[v + 1] += out_start[v];
    }
    // links are sorted by `from`, so the CSR payload is just 0..len
    let out_links = (0..built.len()).map(LinkIdx).collect();

    let mut stations = Vec::new();
    let mut normals = Vec::new();
    let mut station_ordinal = vec![None; nodes.len()];
    let mut normal_ordinal = vec![None; nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        match n.kind {
            NodeKind::Station => {
                station_ordinal[i] = Some(stations.len());
                stations.push(NodeIdx(i));
            }
            NodeKind::Normal => {
                normal_ordinal[i] = Some(normals.len());
                normals.push(NodeIdx(i));
            }
        }
    }
    if stations.is_empty() || normals.is_empty() {
        return Err(NetworkError::MissingNodeKind);
    }

    let network = RoadNetwork {
        nodes,
        links: built,
        out_start,
        out_links,
        stations,
        normals,
        station_ordinal,
        normal_ordinal,
        by_id,
    };
    network.check_station_coverage()?;
    Ok(network)
}

impl RoadNetwork {
    // Reverse search from all stations over incoming links.
    fn check_station_coverage(&self) -> Result<(), NetworkError> {
        let mut incoming: Vec<Vec<NodeIdx>> = vec![Vec::new(); self.nodes.len()];
        for l in &self.links {
            incoming[l.to.0].push(l.from);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<NodeIdx> = self.stations.clone();
        for s in &self.stations {
            seen[s.0] = true;
        }
        while let Some(v) = stack.pop() {
            for &u in &incoming[v.0] {
                if !seen[u.0] {
                    seen[u.0] = true;
                    stack.push(u);
                }
            }
        }
        match self.normals.iter().find(|n| !seen[n.0]) {
            Some(n) => Err(NetworkError::StationUnreachableFrom(self.nodes[n.0].id.clone())),
            None => Ok(()),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node(&self, idx: NodeIdx) -> &Node {
        &self.nodes[idx.0]
    }

    pub fn id(&self, idx: NodeIdx) -> &NodeId {
        &self.nodes[idx.0].id
    }

    pub fn index_of(&self, id: &NodeId) -> Option<NodeIdx> {
        self.by_id.get(id).copied()
    }

    pub fn link_between(&self, from: NodeIdx, to: NodeIdx) -> Option<LinkIdx> {
        self.outgoing(from)
            .iter()
            .copied()
            .find(|&l| self.links[l.0].to == to)
    }

    pub fn outgoing(&self, node: NodeIdx) -> &[LinkIdx] {
        &self.out_links[self.out_start[node.0]..self.out_start[node.0 + 1]]
    }

    /// Station nodes in id order.
    pub fn stations(&self) -> &[NodeIdx] {
        &self.stations
    }

    /// Normal nodes in id order.
    pub fn normals(&self) -> &[NodeIdx] {
        &self.normals
    }

    pub fn station_ordinal(&self, node: NodeIdx) -> Option<usize> {
        self.station_ordinal[node.0]
    }

    pub fn normal_ordinal(&self, node: NodeIdx) -> Option<usize> {
        self.normal_ordinal[node.0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SnapshotError {
    #[error("snapshot has {got} entries, network has {expected} links")]
    WrongLength { expected: usize, got: usize },
    #[error("link {0} value outside its declared range")]
    OutOfRange(usize),
}

/// Travel time and energy of every link, frozen for one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSnapshot {
    slot: u64,
    travel_slots: Vec<u32>,
    energy_kwh: Vec<f64>,
}

impl LinkSnapshot {
    /// Builds a snapshot, checking that every value lies within its link's range.
    pub fn new(
        network: &RoadNetwork,
        slot: u64,
        travel_slots: Vec<u32>,
        energy_kwh: Vec<f64>,
    ) -> Result<Self, SnapshotError> {
        let expected = network.link_count();
        for got in [travel_slots.len(), energy_kwh.len()] {
            if got != expected {
                return Err(SnapshotError::WrongLength { expected, got });
            }
        }
        for (i, link) in network.links().iter().enumerate() {
            if !link.time_slots.contains(travel_slots[i]) || !link.energy_kwh.contains(energy_kwh[i]) {
                return Err(SnapshotError::OutOfRange(i));
            }
        }
        Ok(LinkSnapshot {
            slot,
            travel_slots,
            energy_kwh,
        })
    }

    pub(crate) fn from_parts_unchecked(slot: u64, travel_slots: Vec<u32>, energy_kwh: Vec<f64>) -> Self {
        LinkSnapshot {
            slot,
            travel_slots,
            energy_kwh,
        }
    }

    pub(crate) fn reset(&mut self, slot: u64) -> (&mut Vec<u32>, &mut Vec<f64>) {
        self.slot = slot;
        self.travel_slots.clear();
        self.energy_kwh.clear();
        (&mut self.travel_slots, &mut self.energy_kwh)
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn travel_slots(&self, link: LinkIdx) -> u32 {
        self.travel_slots[link.0]
    }

    pub fn energy_kwh(&self, link: LinkIdx) -> f64 {
        self.energy_kwh[link.0]
    }
}

/// Minimum-energy route from an origin to one station.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteResult {
    pub station: NodeIdx,
    pub energy_kwh: f64,
    pub travel_slots: u32,
    pub path: Vec<NodeIdx>,
}

/// Shortest-path tree of one label-setting search.
///
/// Among equal-cost paths the one with the lexicographically smallest node
/// sequence wins, so the tree is fully deterministic.
#[derive(Debug, Clone, Default)]
pub struct RouteTree {
    origin: Option<NodeIdx>,
    cost: Vec<f64>,
    travel: Vec<u32>,
    pred: Vec<Option<NodeIdx>>,
    settled: Vec<bool>,
    open: Vec<NodeIdx>,
    heap: BinaryHeap<HeapEntry>,
}

const SCAN_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    cost: f64,
    node: NodeIdx,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl RouteTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Recomputes the tree in place, reusing buffers.
    pub fn solve(
        &mut self,
        network: &RoadNetwork,
        origin: NodeIdx,
        weight: impl Fn(LinkIdx) -> f64,
        time: impl Fn(LinkIdx) -> u32,
    ) {
        self.solve_bounded(network, origin, f64::INFINITY, weight, time)
    }

    /// Like [`RouteTree::solve`], but nodes costlier than `bound` are left
    /// unsettled and report no route. Every node within the bound gets the
    /// same cost and path as an unbounded search.
    pub fn solve_bounded(
        &mut self,
        network: &RoadNetwork,
        origin: NodeIdx,
        bound: f64,
        weight: impl Fn(LinkIdx) -> f64,
        time: impl Fn(LinkIdx) -> u32,
    ) {
        self.search(network, origin, bound, false, weight, time)
    }

    /// Like [`RouteTree::solve_bounded`], but stops as soon as every station
    /// is settled. Only station entries (and the paths leading to them) are
    /// complete afterwards.
    pub fn solve_stations(
        &mut self,
        network: &RoadNetwork,
        origin: NodeIdx,
        bound: f64,
        weight: impl Fn(LinkIdx) -> f64,
        time: impl Fn(LinkIdx) -> u32,
    ) {
        self.search(network, origin, bound, true, weight, time)
    }

    fn search(
        &mut self,
        network: &RoadNetwork,
        origin: NodeIdx,
        bound: f64,
        stations_only: bool,
        weight: impl Fn(LinkIdx) -> f64,
        time: impl Fn(LinkIdx) -> u32,
    ) {
        let n = network.node_count();
        self.origin = Some(origin);
        self.cost.clear();
        self.cost.resize(n, f64::INFINITY);
        self.travel.clear();
        self.travel.resize(n, 0);
        self.pred.clear();
        self.pred.resize(n, None);
        self.settled.clear();
        self.settled.resize(n, false);
        self.heap.clear();
        // small graphs: scanning the open frontier beats a heap
        let scan = n <= SCAN_LIMIT;
        self.open.clear();
        let mut stations_left = network.stations().len();

        self.cost[origin.0] = 0.0;
        if scan {
            self.open.push(origin);
        } else {
            self.heap.push(HeapEntry {
                cost: 0.0,
                node: origin,
            });
        }
        loop {
            let next = if scan { self.scan_min() } else { self.heap_min() };
            let Some((node, cost)) = next else { break };
            if cost > bound {
                break;
            }
            self.settled[node.0] = true;
            if network.station_ordinal[node.0].is_some() {
                stations_left -= 1;
                if stations_only && stations_left == 0 {
                    break;
                }
            }
            for &l in network.outgoing(node) {
                let to = network.links[l.0].to;
                if self.settled[to.0] {
                    continue;
                }
                let candidate = cost + weight(l);
                if candidate > bound {
                    continue;
                }
                let current = self.cost[to.0];
                let better =
                    candidate < current || (candidate == current && self.extension_precedes(node, to));
                if better {
                    if scan && self.cost[to.0] == f64::INFINITY {
                        self.open.push(to);
                    }
                    self.cost[to.0] = candidate;
                    self.travel[to.0] = self.travel[node.0] + time(l);
                    self.pred[to.0] = Some(node);
                    if !scan {
                        self.heap.push(HeapEntry {
                            cost: candidate,
                            node: to,
                        });
                    }
                }
            }
        }
    }

    /// Removes the cheapest open node, lowest index first on ties.
    fn scan_min(&mut self) -> Option<(NodeIdx, f64)> {
        let mut best = 0;
        for i in 1..self.open.len() {
            let (a, b) = (self.open[i], self.open[best]);
            let (ca, cb) = (self.cost[a.0], self.cost[b.0]);
            if ca < cb || (ca == cb && a < b) {
                best = i;
            }
        }
        if self.open.is_empty() {
            return None;
        }
        let node = self.open.swap_remove(best);
        Some((node, self.cost[node.0]))
    }

    fn heap_min(&mut self) -> Option<(NodeIdx, f64)> {
        while let Some(HeapEntry { cost, node }) = self.heap.pop() {
            if !self.settled[node.0] && cost <= self.cost[node.0] {
                return Some((node, cost));
            }
        }
        None
    }

    /// Is `path(via) + [target]` lexicographically below the current `path(target)`?
    fn extension_precedes(&self, via: NodeIdx, target: NodeIdx) -> bool {
        if self.pred[target.0].is_none() {
            return false;
        }
        let mut candidate = self.path_unchecked(via);
        candidate.push(target);
        candidate < self.path_unchecked(target)
    }

    fn path_unchecked(&self, node: NodeIdx) -> Vec<NodeIdx> {
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.pred[cur.0] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn origin(&self) -> Option<NodeIdx> {
        self.origin
    }

    /// Total weight to `node`, `None` when unreachable (or beyond the bound).
    pub fn cost_to(&self, node: NodeIdx) -> Option<f64> {
        self.settled
            .get(node.0)
            .is_some_and(|&s| s)
            .then(|| self.cost[node.0])
    }

    pub fn travel_slots_to(&self, node: NodeIdx) -> Option<u32> {
        self.cost_to(node).map(|_| self.travel[node.0])
    }

    pub fn path_to(&self, node: NodeIdx) -> Option<Vec<NodeIdx>> {
        self.cost_to(node).map(|_| self.path_unchecked(node))
    }

    pub fn route_to(&self, station: NodeIdx) -> Option<RouteResult> {
        if Some(station) == self.origin {
            return None;
        }
        Some(RouteResult {
            station,
            energy_kwh: self.cost_to(station)?,
            travel_slots: self.travel[station.0],
            path: self.path_unchecked(station),
        })
    }

    /// Routes to every reachable station other than the origin.
    pub fn station_routes(&self, network: &RoadNetwork) -> BTreeMap<NodeIdx, RouteResult> {
        network
            .stations()
            .iter()
            .filter_map(|&s| self.route_to(s).map(|r| (s, r)))
            .collect()
    }
}

/// Minimum-energy routes from `origin` to every reachable station under
/// `snapshot`. Travel time is measured along the same minimum-energy path.
pub fn min_energy_routes(
    network: &RoadNetwork,
    snapshot: &LinkSnapshot,
    origin: NodeIdx,
) -> BTreeMap<NodeIdx, RouteResult> {
    route_tree(network, snapshot, origin).station_routes(network)
}

pub fn route_tree(network: &RoadNetwork, snapshot: &LinkSnapshot, origin: NodeIdx) -> RouteTree {
    let mut tree = RouteTree::new();
    tree.solve(
        network,
        origin,
        |l| snapshot.energy_kwh(l),
        |l| snapshot.travel_slots(l),
    );
    tree
}

/// Static shortest path lengths from every station to every node, in km.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticDistances {
    node_count: usize,
    // row per station ordinal
    km: Vec<f64>,
}

impl StaticDistances {
    pub fn get(&self, network: &RoadNetwork, station: NodeIdx, dest: NodeIdx) -> Option<f64> {
        let ord = network.station_ordinal(station)?;
        self.by_ordinal(ord, dest)
    }

    pub fn by_ordinal(&self, station_ordinal: usize, dest: NodeIdx) -> Option<f64> {
        let d = self.km[station_ordinal * self.node_count + dest.0];
        d.is_finite().then_some(d)
    }

    /// `(station, normal node) -> km` for every connected pair.
    pub fn to_map(&self, network: &RoadNetwork) -> BTreeMap<(NodeIdx, NodeIdx), f64> {
        let mut map = BTreeMap::new();
        for (ord, &s) in network.stations().iter().enumerate() {
            for &d in network.normals() {
                if let Some(km) = self.by_ordinal(ord, d) {
                    map.insert((s, d), km);
                }
            }
        }
        map
    }
}

pub fn static_distances_to_destinations(network: &RoadNetwork) -> StaticDistances {
    let n = network.node_count();
    let mut km = Vec::with_capacity(n * network.stations().len());
    let mut tree = RouteTree::new();
    for &s in network.stations() {
        tree.solve(network, s, |l| network.links[l.0].length_km, |_| 0);
        km.extend((0..n).map(|v| tree.cost_to(NodeIdx(v)).unwrap_or(f64::INFINITY)));
    }
    StaticDistances { node_count: n, km }
}
