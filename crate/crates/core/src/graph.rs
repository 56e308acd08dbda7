//! Lazily generated locally finite graphs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, FreeProduct, Group};

/// Canonical textual identifier of a vertex. Equal keys denote equal vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexKey(String);

impl VertexKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for VertexKey {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn valid_plain_key(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

/// An explicit finite graph, typically read from an adjacency file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteGraph {
    adjacency: BTreeMap<VertexKey, BTreeSet<VertexKey>>,
}

impl FiniteGraph {
    /// Builds an undirected graph from key pairs. Self-loops are dropped;
    /// their endpoint is still registered as a vertex.
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut g = FiniteGraph::default();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            for k in [a, b] {
                if !valid_plain_key(k) {
                    return Err(Error::InvalidKey(k.to_string()));
                }
            }
            let ka = VertexKey(a.to_string());
            let kb = VertexKey(b.to_string());
            g.adjacency.entry(ka.clone()).or_default();
            g.adjacency.entry(kb.clone()).or_default();
            if ka != kb {
                g.adjacency.get_mut(&ka).unwrap().insert(kb.clone());
                g.adjacency.get_mut(&kb).unwrap().insert(ka);
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexKey> {
        self.adjacency.keys()
    }

    /// Each undirected edge once, with the smaller key first.
    pub fn edges(&self) -> impl Iterator<Item = (&VertexKey, &VertexKey)> {
        self.adjacency
            .iter()
            .flat_map(|(a, ns)| ns.iter().filter(move |b| a < *b).map(move |b| (a, b)))
    }
}

/// Neighbor function supplied by the caller. Returns `None` for keys that are
/// not vertices of the graph.
pub type NeighborFn = dyn Fn(&str) -> Option<Vec<String>> + Send + Sync;

/// A graph given by an arbitrary deterministic neighbor oracle.
#[derive(Clone)]
pub struct AdjacencyOracle {
    name: String,
    neighbors: Arc<NeighborFn>,
}

impl AdjacencyOracle {
    pub fn new(name: impl Into<String>, f: impl Fn(&str) -> Option<Vec<String>> + Send + Sync + 'static) -> Self {
        AdjacencyOracle { name: name.into(), neighbors: Arc::new(f) }
    }
}

impl fmt::Debug for AdjacencyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdjacencyOracle").field("name", &self.name).finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum GraphKind {
    Line,
    Grid2d,
    FreeGroup(usize),
    FreeProduct(u32, u32),
    RegularTree(usize),
    FiniteFile(FiniteGraph),
    AdjacencyOracle(AdjacencyOracle),
}

/// A catalog graph together with its neighbor oracle.
#[derive(Clone, Debug)]
pub struct GraphSpec {
    kind: GraphKind,
    group: Option<Group>,
}

impl GraphSpec {
    pub fn new(kind: GraphKind) -> Result<Self> {
        let group = match &kind {
            GraphKind::Line => Some(Group::Integers),
            GraphKind::Grid2d => Some(Group::Lattice),
            GraphKind::FreeGroup(k) => Some(Group::FreeProduct(FreeProduct::free_group(*k)?)),
            GraphKind::FreeProduct(p, q) => Some(Group::FreeProduct(FreeProduct::cyclic_pair(*p, *q)?)),
            GraphKind::RegularTree(d) => Some(Group::FreeProduct(FreeProduct::involutions(*d)?)),
            GraphKind::FiniteFile(_) | GraphKind::AdjacencyOracle(_) => None,
        };
        Ok(GraphSpec { kind, group })
    }

    pub fn line() -> Self {
        Self::new(GraphKind::Line).unwrap()
    }

    pub fn grid2d() -> Self {
        Self::new(GraphKind::Grid2d).unwrap()
    }

    pub fn free_group(rank: usize) -> Result<Self> {
        Self::new(GraphKind::FreeGroup(rank))
    }

    pub fn free_product(p: u32, q: u32) -> Result<Self> {
        Self::new(GraphKind::FreeProduct(p, q))
    }

    pub fn regular_tree(degree: usize) -> Result<Self> {
        Self::new(GraphKind::RegularTree(degree))
    }

    pub fn finite(graph: FiniteGraph) -> Self {
        Self::new(GraphKind::FiniteFile(graph)).unwrap()
    }

    pub fn oracle(oracle: AdjacencyOracle) -> Self {
        Self::new(GraphKind::AdjacencyOracle(oracle)).unwrap()
    }

    /// Parses a catalog identifier: `line`, `grid2d`, `free-group:K`,
    /// `free-product:P,Q`, `regular-tree:D` (parenthesized forms such as
    /// `free-group(2)` are accepted too), and `dihedral` for `free-product:2,2`.
    pub fn parse_catalog(text: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("unknown catalog graph {text:?}"));
        let (name, params) = match text.find([':', '(']) {
            Some(i) => {
                let rest = &text[i + 1..];
                let rest = if text.as_bytes()[i] == b'(' { rest.strip_suffix(')').ok_or_else(bad)? } else { rest };
                (&text[..i], rest)
            }
            None => (text, ""),
        };
        let nums = || -> Result<Vec<u32>> {
            params.split(',').map(|p| p.trim().parse::<u32>().map_err(|_| bad())).collect()
        };
        match (name, params.is_empty()) {
            ("line", true) => Ok(Self::line()),
            ("grid2d", true) => Ok(Self::grid2d()),
            ("dihedral", true) => Self::free_product(2, 2),
            ("free-group", false) => match nums()?[..] {
                [k] => Self::free_group(k as usize),
                _ => Err(bad()),
            },
            ("free-product", false) => match nums()?[..] {
                [p, q] => Self::free_product(p, q),
                _ => Err(bad()),
            },
            ("regular-tree", false) => match nums()?[..] {
                [d] => Self::regular_tree(d as usize),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    /// The group when this is a Cayley kind.
    pub fn group(&self) -> Option<&Group> {
        self.group.as_ref()
    }

    pub fn is_cayley(&self) -> bool {
        self.group.is_some()
    }

    /// Stable catalog identifier, e.g. `free-group(2)`.
    pub fn ident(&self) -> String {
        match &self.kind {
            GraphKind::Line => "line".into(),
            GraphKind::Grid2d => "grid2d".into(),
            GraphKind::FreeGroup(k) => format!("free-group({k})"),
            GraphKind::FreeProduct(p, q) => format!("free-product({p},{q})"),
            GraphKind::RegularTree(d) => format!("regular-tree({d})"),
            GraphKind::FiniteFile(g) => {
                format!("finite-file({}v,{}e,{:016x})", g.vertex_count(), g.edge_count(), finite_digest(g))
            }
            GraphKind::AdjacencyOracle(o) => format!("adjacency-oracle({})", o.name),
        }
    }

    /// Generator labels of a Cayley kind, closed under inversion.
    pub fn generators(&self) -> Vec<String> {
        self.group
            .as_ref()
            .map(|g| g.generators().into_iter().map(|(l, _)| l).collect())
            .unwrap_or_default()
    }

    /// Default basepoint: the identity for groups, the smallest key for finite graphs.
    pub fn default_basepoint(&self) -> Option<VertexKey> {
        match (&self.group, &self.kind) {
            (Some(g), _) => Some(VertexKey(g.format(&g.identity()))),
            (None, GraphKind::FiniteFile(f)) => f.vertices().next().cloned(),
            _ => None,
        }
    }

    pub fn canonicalize(&self, key: &str) -> Result<VertexKey> {
        match (&self.group, &self.kind) {
            (Some(g), _) => Ok(VertexKey(g.format(&g.parse_key(key)?))),
            (None, GraphKind::FiniteFile(f)) => {
                let k = VertexKey(key.to_string());
                if f.adjacency.contains_key(&k) {
                    Ok(k)
                } else {
                    Err(Error::InvalidKey(key.to_string()))
                }
            }
            (None, GraphKind::AdjacencyOracle(o)) => {
                if valid_plain_key(key) && (o.neighbors)(key).is_some() {
                    Ok(VertexKey(key.to_string()))
                } else {
                    Err(Error::InvalidKey(key.to_string()))
                }
            }
            _ => unreachable!(),
        }
    }

    /// Neighbors of `v` in generator order (Cayley kinds) or key order,
    /// without duplicates and without `v` itself.
    pub fn neighbors(&self, v: &VertexKey) -> Result<Vec<VertexKey>> {
        let mut out: Vec<VertexKey> = match (&self.group, &self.kind) {
            (Some(g), _) => {
                let x = g.parse_key(v.as_str())?;
                g.generators().iter().map(|(_, f)| VertexKey(g.format(&g.mul(&x, f)))).collect()
            }
            (None, GraphKind::FiniteFile(f)) => f
                .adjacency
                .get(v)
                .ok_or_else(|| Error::InvalidKey(v.0.clone()))?
                .iter()
                .cloned()
                .collect(),
            (None, GraphKind::AdjacencyOracle(o)) => {
                let raw = (o.neighbors)(v.as_str()).ok_or_else(|| Error::InvalidKey(v.0.clone()))?;
                let mut ks = Vec::with_capacity(raw.len());
                for k in raw {
                    if !valid_plain_key(&k) {
                        return Err(Error::InvalidKey(k));
                    }
                    ks.push(VertexKey(k));
                }
                ks.sort();
                ks
            }
            _ => unreachable!(),
        };
        let mut seen = BTreeSet::new();
        out.retain(|k| k != v && seen.insert(k.clone()));
        Ok(out)
    }

    /// Parses a group word and returns its element; Cayley kinds only.
    pub fn parse_element(&self, word: &str) -> Result<Element> {
        self.group.as_ref().ok_or(Error::NotCayley)?.parse_word(word)
    }

    pub(crate) fn key_of(&self, el: &Element) -> VertexKey {
        VertexKey(self.group.as_ref().expect("cayley kind").format(el))
    }
}

/// FNV-1a, used for window fingerprints and finite-graph digests.
pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>, seed: u64) -> u64 {
    let mut h = seed;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub(crate) const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;

fn finite_digest(g: &FiniteGraph) -> u64 {
    let mut h = FNV_OFFSET;
    for (a, b) in g.edges() {
        h = fnv1a(a.as_str().bytes().chain(*b" ").chain(b.as_str().bytes()).chain(*b"\n"), h);
    }
    for v in g.vertices() {
        h = fnv1a(v.as_str().bytes().chain(*b"\n"), h);
    }
    h
}
