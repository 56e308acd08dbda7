//! Components of `Γ ∖ M`, the inverse system they form over the exhaustion
//! `M_r` (edges meeting the ball `B_r`), and finite-depth end threads.
//!
//! A component is *unbounded* at window scale when it meets the frontier.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{GraphSpec, VertexKey};
use crate::set::VertexSet;
use crate::window::{EdgeId, VertexId, Window};

/// A finite set of window edges and its vertex support `p(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalSet {
    radius: Option<u32>,
    window: u64,
    edges: Vec<EdgeId>,
    mask: Vec<bool>,
    support: VertexSet,
}

impl RemovalSet {
    /// Removal set from explicit window edges.
    pub fn from_edges(w: &Window, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut mask = vec![false; w.edge_count()];
        for e in edges {
            *mask.get_mut(e.index()).ok_or_else(|| Error::Precondition("edge outside window".into()))? = true;
        }
        Ok(Self::from_mask(w, None, mask))
    }

    /// Removal set from key pairs; each pair must be a window edge.
    pub fn from_edge_keys<S: AsRef<str>>(w: &Window, pairs: &[(S, S)]) -> Result<Self> {
        let mut ids = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = w.id(a).ok_or_else(|| Error::InvalidKey(a.into()))?;
            let v = w.id(b).ok_or_else(|| Error::InvalidKey(b.into()))?;
            ids.push(w.edge_between(u, v).ok_or_else(|| Error::Precondition(alloc::format!("{a} {b} is not an edge")))?);
        }
        Self::from_edges(w, ids)
    }

    fn from_mask(w: &Window, radius: Option<u32>, mask: Vec<bool>) -> Self {
        let mut edges = Vec::new();
        let mut support = w.empty_set();
        for (e, u, v) in w.edges() {
            if mask[e.index()] {
                edges.push(e);
                support.insert(u);
                support.insert(v);
            }
        }
        RemovalSet { radius, window: w.fingerprint(), edges, mask, support }
    }

    /// `M_r` without the radius precondition.
    pub(crate) fn canonical_unchecked(w: &Window, r: u32) -> Self {
        let mut mask = vec![false; w.edge_count()];
        for (e, u, v) in w.edges() {
            if w.distance(u) <= r || w.distance(v) <= r {
                mask[e.index()] = true;
            }
        }
        Self::from_mask(w, Some(r), mask)
    }

    pub fn radius(&self) -> Option<u32> {
        self.radius
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.mask.get(e.index()).copied().unwrap_or(false)
    }

    /// `p(M)`: endpoints of removed edges.
    pub fn support(&self) -> &VertexSet {
        &self.support
    }

    pub fn is_subset(&self, other: &RemovalSet) -> bool {
        self.window == other.window && self.edges.iter().all(|&e| other.contains(e))
    }

    pub fn union(&self, w: &Window, other: &RemovalSet) -> Result<RemovalSet> {
        if self.window != other.window || self.window != w.fingerprint() {
            return Err(Error::WindowMismatch);
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect();
        Ok(Self::from_mask(w, None, mask))
    }
}

/// `M_r`: all window edges with an endpoint in `B_r`. Requires `r ≤ R - 2`
/// and `B_r` strictly smaller than the window.
pub fn removal_set(w: &Window, r: u32) -> Result<RemovalSet> {
    let too_large = Error::RadiusTooLarge { radius: r, horizon: w.radius() };
    if r + 2 > w.radius() || w.vertices().all(|v| w.distance(v) <= r) {
        return Err(too_large);
    }
    Ok(RemovalSet::canonical_unchecked(w, r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Smallest member key.
    pub id: VertexKey,
    pub vertices: VertexSet,
    pub frontier_touching: bool,
}

impl Component {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// `π₀(Γ ∖ M)` inside a window; components are sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    removal: RemovalSet,
    components: Vec<Component>,
    labels: Vec<u32>,
}

impl ComponentPartition {
    pub fn removal(&self) -> &RemovalSet {
        &self.removal
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn unbounded_count(&self) -> usize {
        self.components.iter().filter(|c| c.frontier_touching).count()
    }

    /// Index of the component containing `v`.
    pub fn component_of(&self, v: VertexId) -> usize {
        self.labels[v.index()] as usize
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.components.binary_search_by(|c| c.id.as_str().cmp(id)).ok()
    }

    /// Whether `u` and `v` are joined by a path avoiding the removal set.
    pub fn same_component(&self, u: VertexId, v: VertexId) -> bool {
        self.labels[u.index()] == self.labels[v.index()]
    }
}

/// Connected components of the window graph minus `M`.
pub fn components(w: &Window, m: &RemovalSet) -> Result<ComponentPartition> {
    if m.window != w.fingerprint() {
        return Err(Error::WindowMismatch);
    }
    const UNSEEN: u32 = u32::MAX;
    let mut raw = vec![UNSEEN; w.len()];
    let mut groups: Vec<Vec<VertexId>> = Vec::new();
    let mut queue = VecDeque::new();
    for s in w.vertices() {
        if raw[s.index()] != UNSEEN {
            continue;
        }
        let label = groups.len() as u32;
        raw[s.index()] = label;
        queue.push_back(s);
        let mut members = Vec::new();
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for &(v, e) in w.neighbors(u) {
                if !m.contains(e) && raw[v.index()] == UNSEEN {
                    raw[v.index()] = label;
                    queue.push_back(v);
                }
            }
        }
        groups.push(members);
    }

    let mut built: Vec<(Component, u32)> = groups
        .into_iter()
        .enumerate()
        .map(|(i, members)| {
            let mut vertices = w.empty_set();
            let mut id = w.key(members[0]);
            for &v in &members {
                vertices.insert(v);
                if w.key(v) < id {
                    id = w.key(v);
                }
            }
            let frontier_touching = members.iter().any(|&v| w.frontier().contains(v));
            (Component { id: id.clone(), vertices, frontier_touching }, i as u32)
        })
        .collect();
    built.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let mut relabel = vec![0u32; built.len()];
    for (new, (_, old)) in built.iter().enumerate() {
        relabel[*old as usize] = new as u32;
    }
    let labels = raw.into_iter().map(|l| relabel[l as usize]).collect();
    Ok(ComponentPartition {
        removal: m.clone(),
        components: built.into_iter().map(|(c, _)| c).collect(),
        labels,
    })
}

/// The map `ι_{M,N}` from components of `Γ ∖ N` to components of `Γ ∖ M`
/// for `M ⊆ N`, stored as indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionMap {
    map: Vec<usize>,
}

impl RestrictionMap {
    pub fn apply(&self, finer: usize) -> usize {
        self.map[finer]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ inner`, where `inner` maps into the domain of `self`.
    pub fn compose(&self, inner: &RestrictionMap) -> RestrictionMap {
        RestrictionMap { map: inner.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// `ι_{M,N}`: sends each component of `finer` (removal `N`) to the component
/// of `coarser` (removal `M`) containing it. Requires `M ⊆ N`.
pub fn restriction_map(finer: &ComponentPartition, coarser: &ComponentPartition) -> Result<RestrictionMap> {
    if finer.labels.len() != coarser.labels.len() || finer.removal.window != coarser.removal.window {
        return Err(Error::WindowMismatch);
    }
    if !coarser.removal.is_subset(&finer.removal) {
        return Err(Error::NotNested);
    }
    let mut map = Vec::with_capacity(finer.components.len());
    for c in &finer.components {
        let mut targets = c.vertices.iter().map(|v| coarser.component_of(v));
        let t = targets.next().expect("components are nonempty");
        if targets.any(|u| u != t) {
            return Err(Error::NotNested);
        }
        map.push(t);
    }
    Ok(RestrictionMap { map })
}

/// A compatible choice of unbounded components of `Γ ∖ M_r` for `r = 0..=depth`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndThread {
    /// Component ids, indexed by radius.
    pub choices: Vec<VertexKey>,
    indices: Vec<usize>,
}

impl EndThread {
    pub fn depth(&self) -> u32 {
        self.choices.len() as u32 - 1
    }

    /// Id of the deepest choice; identifies the thread among threads of equal depth.
    pub fn id(&self) -> &VertexKey {
        self.choices.last().expect("threads are nonempty")
    }

    /// Component index chosen at radius `r`.
    pub fn index_at(&self, r: u32) -> usize {
        self.indices[r as usize]
    }

    /// The first `d + 1` choices.
    pub fn truncate(&self, d: u32) -> EndThread {
        let n = d as usize + 1;
        EndThread { choices: self.choices[..n].to_vec(), indices: self.indices[..n].to_vec() }
    }
}

impl fmt::Display for EndThread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.choices.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Partitions for `M_0 ⊆ M_1 ⊆ ... ⊆ M_depth` in one window with the maps between them.
#[derive(Clone, Debug)]
pub struct EndSystem {
    window: Window,
    partitions: Vec<ComponentPartition>,
    up: Vec<RestrictionMap>,
}

impl EndSystem {
    /// Requires `depth ≤ R - 2`.
    pub fn new(window: Window, depth: u32) -> Result<Self> {
        if depth + 2 > window.radius() {
            return Err(Error::RadiusTooLarge { radius: depth, horizon: window.radius() });
        }
        let mut partitions = Vec::with_capacity(depth as usize + 1);
        for r in 0..=depth {
            partitions.push(components(&window, &RemovalSet::canonical_unchecked(&window, r))?);
        }
        let up = partitions
            .windows(2)
            .map(|p| restriction_map(&p[1], &p[0]))
            .collect::<Result<Vec<_>>>()?;
        Ok(EndSystem { window, partitions, up })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn depth(&self) -> u32 {
        self.partitions.len() as u32 - 1
    }

    pub fn partition(&self, r: u32) -> &ComponentPartition {
        &self.partitions[r as usize]
    }

    /// `ι_{M_r, M_{r+1}}`.
    pub fn step_map(&self, r: u32) -> &RestrictionMap {
        &self.up[r as usize]
    }

    /// The component chosen by `t` at radius `r`.
    pub fn component(&self, t: &EndThread, r: u32) -> &Component {
        &self.partitions[r as usize].components[t.index_at(r)]
    }

    fn thread_from_top(&self, d: u32, top: usize) -> EndThread {
        let mut indices = vec![0; d as usize + 1];
        indices[d as usize] = top;
        for r in (0..d).rev() {
            indices[r as usize] = self.up[r as usize].apply(indices[r as usize + 1]);
        }
        let choices = indices
            .iter()
            .enumerate()
            .map(|(r, &i)| self.partitions[r].components[i].id.clone())
            .collect();
        EndThread { choices, indices }
    }

    /// All threads of depth `d ≤ self.depth()`, ordered by top component id.
    pub fn threads_at(&self, d: u32) -> Vec<EndThread> {
        assert!(d <= self.depth());
        self.partitions[d as usize]
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.frontier_touching)
            .map(|(i, _)| self.thread_from_top(d, i))
            .collect()
    }

    pub fn threads(&self) -> Vec<EndThread> {
        self.threads_at(self.depth())
    }

    /// The depth-`d` thread whose top component has the given id.
    pub fn thread_by_id(&self, d: u32, id: &str) -> Option<EndThread> {
        let i = self.partitions.get(d as usize)?.find(id)?;
        self.partitions[d as usize].components[i]
            .frontier_touching
            .then(|| self.thread_from_top(d, i))
    }

    /// Thread of components containing `v`, if they are all unbounded.
    pub fn thread_through(&self, v: VertexId, d: u32) -> Option<EndThread> {
        let top = self.partitions.get(d as usize)?.component_of(v);
        let t = self.thread_from_top(d, top);
        (0..=d).all(|r| self.component(&t, r).frontier_touching).then_some(t)
    }

    /// Whether the index sequence of `t` is compatible with the step maps and
    /// every choice is unbounded.
    pub fn is_valid(&self, t: &EndThread) -> bool {
        let d = t.depth();
        if d > self.depth() || t.indices.len() != t.choices.len() {
            return false;
        }
        (0..=d).all(|r| {
            let c = self.partitions[r as usize].components.get(t.index_at(r));
            c.is_some_and(|c| c.frontier_touching && c.id == t.choices[r as usize])
        }) && (0..d).all(|r| self.up[r as usize].apply(t.index_at(r + 1)) == t.index_at(r))
    }
}

/// Depth-`d` end threads of a window, ordered by top component id.
pub fn end_threads(w: &Window, d: u32) -> Result<Vec<EndThread>> {
    if d + 2 > w.radius() {
        return Err(Error::RadiusTooLarge { radius: d, horizon: w.radius() });
    }
    if w.frontier().is_empty() {
        return Ok(Vec::new());
    }
    Ok(EndSystem::new(w.clone(), d)?.threads())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Counts constant at 0, 1 or 2.
    Ends(usize),
    /// Counts strictly increasing; the last count is a lower bound.
    Growing { lower_bound: usize },
    /// Neither pattern; the last count is a lower bound.
    Indeterminate { lower_bound: usize },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Ends(n) => write!(f, "{n}"),
            Classification::Growing { .. } => f.write_str("growing"),
            Classification::Indeterminate { .. } => f.write_str("indeterminate"),
        }
    }
}

pub fn classify(counts: &[usize]) -> Classification {
    let last = counts.last().copied().unwrap_or(0);
    if counts.iter().all(|&c| c == last) && last <= 2 {
        Classification::Ends(last)
    } else if counts.len() >= 2 && counts.windows(2).all(|p| p[0] < p[1]) {
        Classification::Growing { lower_bound: last }
    } else {
        Classification::Indeterminate { lower_bound: last }
    }
}

/// Unbounded-component counts of `Γ ∖ M_r` per radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndCountReport {
    pub graph: String,
    pub basepoint: VertexKey,
    pub radii: Vec<u32>,
    pub unbounded_counts: Vec<usize>,
    pub classification: Classification,
    pub horizon: u32,
    /// Per radius: the count is the same with horizon `R - 1`.
    pub stable: Vec<bool>,
    pub exact: bool,
}

fn unbounded_counts(w: &Window, r_max: u32) -> Result<Vec<usize>> {
    (0..=r_max)
        .map(|r| {
            if w.frontier().is_empty() {
                return Ok(0);
            }
            Ok(components(w, &RemovalSet::canonical_unchecked(w, r))?.unbounded_count())
        })
        .collect()
}

/// Counts for `r = 0..=r_max` at the given horizon. A count is exact when the
/// window of radius `horizon - 1` reproduces it.
pub fn end_count_report(spec: &GraphSpec, basepoint: &str, r_max: u32, horizon: u32) -> Result<EndCountReport> {
    end_count_report_with(spec, basepoint, r_max, horizon, crate::window::Limits::default())
}

pub fn end_count_report_with(
    spec: &GraphSpec,
    basepoint: &str,
    r_max: u32,
    horizon: u32,
    limits: crate::window::Limits,
) -> Result<EndCountReport> {
    if r_max + 2 > horizon {
        return Err(Error::RadiusTooLarge { radius: r_max, horizon });
    }
    let w = Window::materialize_with(spec, basepoint, horizon, limits)?;
    let counts = unbounded_counts(&w, r_max)?;
    let collar = Window::materialize_with(spec, basepoint, horizon - 1, limits)?;
    let reach = (horizon - 1).saturating_sub(2).min(r_max);
    let inner = if horizon >= 3 { unbounded_counts(&collar, reach)? } else { Vec::new() };
    let stable: Vec<bool> = (0..=r_max as usize).map(|r| inner.get(r) == Some(&counts[r])).collect();
    Ok(EndCountReport {
        graph: spec.ident(),
        basepoint: w.basepoint().clone(),
        radii: (0..=r_max).collect(),
        classification: classify(&counts),
        exact: stable.iter().all(|&s| s),
        unbounded_counts: counts,
        horizon,
        stable,
    })
}

/// Outcome of checking the component lemma for one removal set with
/// `K = B_k` and `L = K^{≤1} ∖ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub k_radius: u32,
    /// `p(M)^{≤1} ⊆ K`, the lemma's hypothesis.
    pub hypothesis: bool,
    /// Every component meets `p(M)^{≤1}`.
    pub meets_collar: bool,
    /// Every component disjoint from `L` lies inside `K`.
    pub inner_inside_k: bool,
    /// Number of components meeting `L`.
    pub l_meeting: usize,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.hypothesis && self.meets_collar && self.inner_inside_k
    }
}

/// Checks the component lemma for `partition` with `K = B_k`. Requires
/// `k + 1 < R` so that `L` is interior.
pub fn component_lemma(w: &Window, partition: &ComponentPartition, k: u32) -> Result<LemmaReport> {
    if k + 2 > w.radius() {
        return Err(Error::RadiusTooLarge { radius: k, horizon: w.radius() });
    }
    let collar = w.ball(partition.removal().support(), 1)?.members;
    let kset = w.ball_around_base(k);
    let lset = w.set_where(|v| w.distance(v) == k + 1);
    let hypothesis = collar.is_subset(&kset)?;
    let mut meets_collar = true;
    let mut inner_inside_k = true;
    let mut l_meeting = 0;
    for c in partition.components() {
        meets_collar &= !c.vertices.is_disjoint(&collar)?;
        if c.vertices.is_disjoint(&lset)? {
            inner_inside_k &= c.vertices.is_subset(&kset)?;
        } else {
            l_meeting += 1;
        }
    }
    Ok(LemmaReport { k_radius: k, hypothesis, meets_collar, inner_inside_k, l_meeting })
}
