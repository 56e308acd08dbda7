//! The visibility uniformity and the filter side of ends.
//!
//! `v_M` relates two vertices when a path avoiding `M` joins them, so it is
//! represented by the component partition of `Γ ∖ M`. Filters are never
//! materialized: an end thread supplies the base sets, and membership of a
//! set `A` with bounded boundary is decided by the component of `Γ ∖ ∂A`
//! the thread selects.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::{gamma_boundary, in_u_gamma};
use crate::ends::{components, ComponentPartition, EndSystem, EndThread, RemovalSet};
use crate::error::{Error, Result};
use crate::set::VertexSet;
use crate::window::{VertexId, Window};

/// The entourage `v_M`, stored as the partition `π₀(Γ ∖ M)`.
#[derive(Clone, Debug)]
pub struct Entourage {
    partition: ComponentPartition,
    window: u64,
}

impl Entourage {
    pub fn new(w: &Window, m: &RemovalSet) -> Result<Self> {
        Ok(Entourage { partition: components(w, m)?, window: w.fingerprint() })
    }

    pub fn from_partition(w: &Window, partition: ComponentPartition) -> Self {
        Entourage { partition, window: w.fingerprint() }
    }

    pub fn partition(&self) -> &ComponentPartition {
        &self.partition
    }

    pub fn related(&self, g: VertexId, h: VertexId) -> bool {
        self.partition.same_component(g, h)
    }

    /// `A` is `v_M`-small iff it lies in a single component. `∅` is small.
    pub fn is_small(&self, a: &VertexSet) -> Result<bool> {
        if a.window_id() != self.window {
            return Err(Error::WindowMismatch);
        }
        let mut members = a.iter();
        let Some(first) = members.next() else {
            return Ok(true);
        };
        let c = self.partition.component_of(first);
        Ok(members.all(|v| self.partition.component_of(v) == c))
    }
}

pub fn is_small(e: &Entourage, a: &VertexSet) -> Result<bool> {
    e.is_small(a)
}

/// Smallest radius `r` with `(g, h) ∉ v_{M_r}`, for distinct `g`, `h` with
/// `r ≤ R - 2`.
pub fn separating_radius(w: &Window, g: VertexId, h: VertexId) -> Option<u32> {
    if g == h {
        return None;
    }
    let r = w.distance(g).min(w.distance(h));
    (r + 2 <= w.radius()).then_some(r)
}

/// Base of the minimal Cauchy filter of a thread: its chosen components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterBase {
    pub thread: EndThread,
    /// Indexed by radius.
    pub sets: Vec<VertexSet>,
}

pub fn thread_to_filter_base(system: &EndSystem, t: &EndThread) -> FilterBase {
    let sets = (0..=t.depth()).map(|r| system.component(t, r).vertices.clone()).collect();
    FilterBase { thread: t.clone(), sets }
}

/// First radius at which two threads choose different (hence disjoint) components.
pub fn separation_radius(a: &EndThread, b: &EndThread) -> Option<u32> {
    let d = a.depth().min(b.depth());
    (0..=d).find(|&r| a.index_at(r) != b.index_at(r))
}

/// A set of the algebra prepared for repeated membership queries: the
/// partition of `Γ ∖ ∂A` and, per component, whether it lies inside `A`.
#[derive(Clone, Debug)]
pub struct PreparedSet {
    set: VertexSet,
    /// Smallest `r` with `∂A ⊆ M_r`.
    needed: u32,
    labels: ComponentPartition,
    inside: Vec<bool>,
    bounded: bool,
}

impl PreparedSet {
    pub fn new(w: &Window, a: &VertexSet) -> Result<Self> {
        if !in_u_gamma(w, a)?.is_yes() {
            return Err(Error::NotInAlgebra);
        }
        let boundary = gamma_boundary(w, a)?;
        let needed = boundary
            .edges
            .iter()
            .map(|&e| {
                let (u, v) = w.edge(e);
                w.distance(u).min(w.distance(v))
            })
            .max()
            .unwrap_or(0);
        let labels = components(w, &RemovalSet::from_edges(w, boundary.edges.iter().copied())?)?;
        let inside = labels
            .components()
            .iter()
            .map(|c| c.vertices.is_subset(a))
            .collect::<Result<Vec<_>>>()?;
        let bounded = avoids_frontier(&labels, &inside);
        Ok(PreparedSet { set: a.clone(), needed, labels, inside, bounded })
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    /// Radius the thread must reach to resolve `∂A`.
    pub fn needed_depth(&self) -> u32 {
        self.needed
    }

    /// The set avoids the frontier.
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// The prepared complement, sharing the partition of `Γ ∖ ∂A`.
    pub fn complement(&self) -> PreparedSet {
        let inside: Vec<bool> = self.inside.iter().map(|b| !b).collect();
        PreparedSet {
            set: self.set.complement(),
            needed: self.needed,
            bounded: avoids_frontier(&self.labels, &inside),
            labels: self.labels.clone(),
            inside,
        }
    }

    /// `A ∈ ℱ_t`: the component of `Γ ∖ ∂A` containing the thread's
    /// component at radius `needed` lies in `A`.
    pub fn contains(&self, system: &EndSystem, t: &EndThread) -> Result<bool> {
        if t.depth() < self.needed {
            return Err(Error::Unresolvable { depth: t.depth(), needed: self.needed });
        }
        let chosen = system.component(t, self.needed);
        let rep = chosen.vertices.first().expect("components are nonempty");
        Ok(self.inside[self.labels.component_of(rep)])
    }
}

// `A` is a union of components of `Γ ∖ ∂A`, so it avoids the frontier iff
// every component inside it does.
fn avoids_frontier(labels: &ComponentPartition, inside: &[bool]) -> bool {
    labels.components().iter().zip(inside).all(|(c, &i)| !i || !c.frontier_touching)
}

/// Whether `A` belongs to the unbounded ultrafilter of `t`.
pub fn membership(system: &EndSystem, t: &EndThread, a: &VertexSet) -> Result<bool> {
    PreparedSet::new(system.window(), a)?.contains(system, t)
}

/// Pass/fail per axiom for one thread over a finite family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub thread: EndThread,
    /// The whole window is a member.
    pub f0: bool,
    /// Members' intersections present in the family are members.
    pub f1: bool,
    /// Family supersets of members are members.
    pub f2: bool,
    /// Exactly one of `A` and its complement is a member.
    pub u: bool,
    /// No member avoids the frontier.
    pub nb: bool,
    /// Membership verdict per family set, in family order.
    pub memberships: Vec<bool>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.f0 && self.f1 && self.f2 && self.u && self.nb
    }
}

/// A finite family prepared once and checked against many threads.
#[derive(Clone, Debug)]
pub struct PreparedFamily {
    whole: PreparedSet,
    sets: Vec<PreparedSet>,
    complements: Vec<PreparedSet>,
    /// `(i, j, k)` with `A_i ∩ A_j = A_k`, `i < j`.
    intersections: Vec<(usize, usize, usize)>,
    /// `(i, j)` with `A_i ⊆ A_j`, `i ≠ j`.
    inclusions: Vec<(usize, usize)>,
}

impl PreparedFamily {
    /// Every member must have a bounded boundary within the window.
    pub fn new(w: &Window, family: &[VertexSet]) -> Result<Self> {
        let sets = family.iter().map(|a| PreparedSet::new(w, a)).collect::<Result<Vec<_>>>()?;
        let complements = sets.iter().map(PreparedSet::complement).collect();
        let index: BTreeMap<&VertexSet, usize> = family.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut intersections = Vec::new();
        let mut inclusions = Vec::new();
        for i in 0..family.len() {
            for j in 0..family.len() {
                if i == j {
                    continue;
                }
                if family[i].is_subset(&family[j])? {
                    inclusions.push((i, j));
                }
                if i < j {
                    if let Some(&k) = index.get(&family[i].intersection(&family[j])?) {
                        intersections.push((i, j, k));
                    }
                }
            }
        }
        Ok(PreparedFamily { whole: PreparedSet::new(w, &w.full_set())?, sets, complements, intersections, inclusions })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> &PreparedSet {
        &self.sets[i]
    }

    pub fn check(&self, system: &EndSystem, t: &EndThread) -> Result<AxiomReport> {
        let memberships = self.sets.iter().map(|s| s.contains(system, t)).collect::<Result<Vec<_>>>()?;
        let f0 = self.whole.contains(system, t)?;
        let f1 = self
            .intersections
            .iter()
            .all(|&(i, j, k)| !(memberships[i] && memberships[j]) || memberships[k]);
        let f2 = self.inclusions.iter().all(|&(i, j)| !memberships[i] || memberships[j]);
        let mut u = true;
        for (m, c) in memberships.iter().zip(&self.complements) {
            u &= *m != c.contains(system, t)?;
        }
        let nb = memberships.iter().zip(&self.sets).all(|(m, s)| !m || !s.is_bounded());
        Ok(AxiomReport { thread: t.clone(), f0, f1, f2, u, nb, memberships })
    }
}

/// Checks the unbounded-ultrafilter axioms for the filter of `t` over `family`.
pub fn ultrafilter_check(system: &EndSystem, t: &EndThread, family: &[VertexSet]) -> Result<AxiomReport> {
    PreparedFamily::new(system.window(), family)?.check(system, t)
}

/// Rebuilds a depth-`d` thread from a membership oracle on components:
/// `member(r, i)` answers whether component `i` of `Γ ∖ M_r` is in the filter.
/// Exactly one component per radius must be a member.
pub fn reconstruct_thread(
    system: &EndSystem,
    d: u32,
    mut member: impl FnMut(u32, usize) -> Result<bool>,
) -> Result<EndThread> {
    let mut chosen = vec![0usize; d as usize + 1];
    for r in 0..=d {
        let mut hits = Vec::new();
        for i in 0..system.partition(r).len() {
            if member(r, i)? {
                hits.push(i);
            }
        }
        match hits[..] {
            [i] => chosen[r as usize] = i,
            _ => return Err(Error::Inconclusive(alloc::format!("{} member components at radius {r}", hits.len()))),
        }
    }
    let top = &system.partition(d).components()[chosen[d as usize]].id;
    let t = system
        .thread_by_id(d, top.as_str())
        .ok_or_else(|| Error::Inconclusive("member component is bounded".into()))?;
    if (0..=d).any(|r| t.index_at(r) != chosen[r as usize]) {
        return Err(Error::Inconclusive("member components are not nested".into()));
    }
    Ok(t)
}

/// The thread inducing an assignment on the unbounded components of
/// `Γ ∖ M_d` (one flag per component, in partition order). A consistent
/// assignment selects exactly one component.
pub fn thread_inducing(system: &EndSystem, d: u32, members: &[bool]) -> Option<EndThread> {
    let p = system.partition(d);
    let unbounded: Vec<usize> = (0..p.len()).filter(|&i| p.components()[i].frontier_touching).collect();
    if members.len() != unbounded.len() {
        return None;
    }
    let mut picked = unbounded.iter().zip(members).filter(|(_, &m)| m).map(|(&i, _)| i);
    let i = picked.next()?;
    if picked.next().is_some() {
        return None;
    }
    system.thread_by_id(d, p.components()[i].id.as_str())
}
