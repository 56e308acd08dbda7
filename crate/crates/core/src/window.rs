//! Finite windows: the ball of radius `R` around a basepoint, materialized by
//! breadth-first search over a graph oracle.
//!
//! Everything that depends only on the adjacency of `B_{R-1}` is exact. The
//! vertices at distance exactly `R` form the frontier; anything touching them
//! is horizon-relative. When the search exhausts the graph (no frontier vertex
//! has a neighbor outside the window) the window is *closed* and its frontier
//! is empty.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{fnv1a, GraphSpec, VertexKey, FNV_OFFSET};
use crate::set::VertexSet;

/// Index of a vertex inside one window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    pub fn new(index: usize) -> Self {
        VertexId(u32::try_from(index).expect("window index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of an edge inside one window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(u32);

impl EdgeId {
    pub fn new(index: usize) -> Self {
        EdgeId(u32::try_from(index).expect("edge index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An undirected edge, endpoints ordered by key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub a: VertexKey,
    pub b: VertexKey,
}

impl Edge {
    pub fn new(x: VertexKey, y: VertexKey) -> Self {
        if x <= y {
            Edge { a: x, b: y }
        } else {
            Edge { a: y, b: x }
        }
    }
}

/// Resource caps for materialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub vertex_cap: usize,
    pub degree_bound: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { vertex_cap: 1_000_000, degree_bound: 64 }
    }
}

/// Result of a neighborhood computation inside a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub members: VertexSet,
    /// The result meets the frontier, so vertices beyond the window may be missing.
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct Window {
    spec: GraphSpec,
    basepoint: VertexKey,
    radius: u32,
    keys: Vec<VertexKey>,
    dist: Vec<u32>,
    index: BTreeMap<VertexKey, VertexId>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<(VertexId, VertexId)>,
    frontier: VertexSet,
    closed: bool,
    fingerprint: u64,
}

fn checked_neighbors(spec: &GraphSpec, v: &VertexKey, limits: &Limits) -> Result<Vec<VertexKey>> {
    let ns = spec.neighbors(v)?;
    if ns.len() > limits.degree_bound {
        return Err(Error::DegreeOverflow { key: v.as_str().into(), degree: ns.len(), bound: limits.degree_bound });
    }
    Ok(ns)
}

impl Window {
    /// Breadth-first closure of `basepoint` to `radius` with default limits.
    pub fn materialize(spec: &GraphSpec, basepoint: &str, radius: u32) -> Result<Self> {
        Self::materialize_with(spec, basepoint, radius, Limits::default())
    }

    pub fn materialize_with(spec: &GraphSpec, basepoint: &str, radius: u32, limits: Limits) -> Result<Self> {
        let base = spec.canonicalize(basepoint)?;
        let mut seen: BTreeSet<VertexKey> = BTreeSet::new();
        seen.insert(base.clone());
        let mut layers: Vec<Vec<VertexKey>> = alloc::vec![alloc::vec![base.clone()]];
        // neighbor lists in the same order as the concatenated layers
        let mut lists: Vec<Vec<VertexKey>> = Vec::new();
        for _ in 0..radius {
            let mut next = BTreeSet::new();
            for v in layers.last().unwrap() {
                let ns = checked_neighbors(spec, v, &limits)?;
                for n in &ns {
                    if !seen.contains(n) {
                        next.insert(n.clone());
                    }
                }
                lists.push(ns);
            }
            if next.is_empty() {
                break;
            }
            if seen.len() + next.len() > limits.vertex_cap {
                return Err(Error::BudgetExceeded { cap: limits.vertex_cap });
            }
            seen.extend(next.iter().cloned());
            layers.push(next.into_iter().collect());
        }
        drop(seen);

        let mut keys = Vec::with_capacity(lists.len());
        let mut dist = Vec::with_capacity(lists.len());
        for (d, layer) in layers.into_iter().enumerate() {
            for k in layer {
                keys.push(k);
                dist.push(d as u32);
            }
        }
        let index: BTreeMap<VertexKey, VertexId> =
            keys.iter().enumerate().map(|(i, k)| (k.clone(), VertexId::new(i))).collect();

        // Outermost layer: either the true sphere of radius R, or the last
        // layer of an exhausted graph.
        let mut closed = true;
        for v in &keys[lists.len()..] {
            let ns = checked_neighbors(spec, v, &limits)?;
            if ns.iter().any(|n| !index.contains_key(n)) {
                closed = false;
            }
            lists.push(ns);
        }
        if (dist.last().copied().unwrap_or(0)) < radius {
            closed = true;
        }

        let mut pairs = Vec::new();
        for (u, ns) in lists.iter().enumerate() {
            let u = VertexId::new(u);
            for n in ns {
                if let Some(&v) = index.get(n) {
                    pairs.push(if u < v { (u, v) } else { (v, u) });
                }
            }
        }
        drop(lists);
        pairs.sort_unstable();
        pairs.dedup();
        let edges = pairs;
        let mut adj = alloc::vec![Vec::new(); keys.len()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u.index()].push((v, EdgeId::new(i)));
            adj[v.index()].push((u, EdgeId::new(i)));
        }
        for list in &mut adj {
            list.sort();
        }

        let ident = spec.ident();
        let mut fingerprint = fnv1a(ident.bytes().chain([0]), FNV_OFFSET);
        fingerprint = fnv1a(base.as_str().bytes().chain([0]), fingerprint);
        fingerprint = fnv1a(radius.to_le_bytes(), fingerprint);

        let mut frontier = VertexSet::empty(fingerprint, keys.len());
        if !closed {
            for (i, &d) in dist.iter().enumerate() {
                if d == radius {
                    frontier.insert(VertexId::new(i));
                }
            }
        }

        Ok(Window {
            spec: spec.clone(),
            basepoint: base,
            radius,
            keys,
            dist,
            index,
            adj,
            edges,
            frontier,
            closed,
            fingerprint,
        })
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn basepoint(&self) -> &VertexKey {
        &self.basepoint
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// True when the whole connected graph of the basepoint fits in the window.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.keys.len()).map(VertexId::new)
    }

    pub fn key(&self, v: VertexId) -> &VertexKey {
        &self.keys[v.index()]
    }

    pub fn distance(&self, v: VertexId) -> u32 {
        self.dist[v.index()]
    }

    /// Looks up a key after canonicalizing it.
    pub fn id(&self, key: &str) -> Option<VertexId> {
        let k = self.spec.canonicalize(key).ok()?;
        self.index.get(&k).copied()
    }

    pub(crate) fn id_of(&self, key: &VertexKey) -> Option<VertexId> {
        self.index.get(key).copied()
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e.index()]
    }

    pub fn edge_keys(&self, e: EdgeId) -> Edge {
        let (u, v) = self.edge(e);
        Edge::new(self.key(u).clone(), self.key(v).clone())
    }

    /// All edges with their ids, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().enumerate().map(|(i, &(u, v))| (EdgeId::new(i), u, v))
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let list = &self.adj[u.index()];
        list.binary_search_by(|(w, _)| w.cmp(&v)).ok().map(|i| list[i].1)
    }

    pub fn frontier(&self) -> &VertexSet {
        &self.frontier
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.fingerprint, self.keys.len())
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.fingerprint, self.keys.len())
    }

    /// `B_r`: vertices at distance at most `r` from the basepoint.
    pub fn ball_around_base(&self, r: u32) -> VertexSet {
        self.set_where(|v| self.distance(v) <= r)
    }

    pub fn set_where(&self, mut pred: impl FnMut(VertexId) -> bool) -> VertexSet {
        let mut s = self.empty_set();
        for v in self.vertices() {
            if pred(v) {
                s.insert(v);
            }
        }
        s
    }

    /// Builds a set from keys; every key must name a window vertex.
    pub fn set_from_keys<I, S>(&self, keys: I) -> Result<VertexSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut s = self.empty_set();
        for k in keys {
            let k = k.as_ref();
            s.insert(self.id(k).ok_or_else(|| Error::InvalidKey(k.into()))?);
        }
        Ok(s)
    }

    /// Members of `set` as keys, sorted by key.
    pub fn keys_of(&self, set: &VertexSet) -> Vec<VertexKey> {
        let mut out: Vec<VertexKey> = set.iter().map(|v| self.key(v).clone()).collect();
        out.sort();
        out
    }

    pub fn owns(&self, set: &VertexSet) -> Result<()> {
        if set.window_id() != self.fingerprint || set.universe() != self.keys.len() {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    /// `A^{≤n}`: vertices reachable from `a` by at most `n` window edges.
    pub fn ball(&self, a: &VertexSet, n: u32) -> Result<Neighborhood> {
        self.owns(a)?;
        let mut members = a.clone();
        let mut layer: Vec<VertexId> = a.iter().collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for &u in &layer {
                for &(v, _) in self.neighbors(u) {
                    if members.insert(v) {
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        let truncated = !members.is_disjoint(&self.frontier)?;
        Ok(Neighborhood { members, truncated })
    }

    /// Like [`Window::ball`] but fails with `HorizonEscape` when truncated.
    pub fn ball_exact(&self, a: &VertexSet, n: u32) -> Result<VertexSet> {
        let nb = self.ball(a, n)?;
        if nb.truncated {
            return Err(Error::HorizonEscape);
        }
        Ok(nb.members)
    }
}
