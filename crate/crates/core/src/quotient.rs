//! Collapsing components of finite graphs, equivariant quotients of the
//! finite-depth end set, and their pullbacks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::{act_on_end, GroupWord};
use crate::ends::EndSystem;
use crate::error::{Error, Result};
use crate::graph::VertexKey;

fn check_permutation(perm: &[usize], n: usize, what: &str) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!("{what} has length {}, expected {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || core::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{what} is not a bijection of 0..{n}")));
        }
    }
    Ok(())
}

/// Components of a finite graph collapsed to points, with the induced action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collapse {
    /// Members of each class, ascending; classes ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    /// Vertex to class.
    pub projection: Vec<usize>,
    /// One permutation of the classes per input permutation.
    pub induced: Vec<Vec<usize>>,
}

/// Collapses the components of the graph on `0..n` with the given edges.
/// Every permutation must be an automorphism; the quotient has no edges.
pub fn collapse_components(n: usize, edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Result<Collapse> {
    let mut adj = vec![Vec::new(); n];
    let mut edge_set = BTreeSet::new();
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::Precondition(format!("edge {u}-{v} outside 0..{n}")));
        }
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
            edge_set.insert((u.min(v), u.max(v)));
        }
    }
    for (i, p) in perms.iter().enumerate() {
        check_permutation(p, n, &format!("permutation {i}"))?;
        // a bijection mapping edges into edges of a finite graph maps them onto
        if edge_set.iter().any(|&(u, v)| !edge_set.contains(&(p[u].min(p[v]), p[u].max(p[v])))) {
            return Err(Error::NotAutomorphism { index: i });
        }
    }
    let mut projection = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for s in 0..n {
        if projection[s] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = vec![s];
        projection[s] = c;
        let mut i = 0;
        while i < members.len() {
            for &v in &adj[members[i]] {
                if projection[v] == usize::MAX {
                    projection[v] = c;
                    members.push(v);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        classes.push(members);
    }
    let induced = perms
        .iter()
        .map(|p| classes.iter().map(|m| projection[p[m[0]]]).collect())
        .collect();
    Ok(Collapse { classes, projection, induced })
}

/// A partition of the depth-`d` end threads with the permutation of classes
/// induced by each tracked group word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPartition {
    /// Thread ids.
    pub domain: Vec<VertexKey>,
    /// Thread index to class; classes are numbered by first appearance.
    pub class_of: Vec<usize>,
    pub actions: BTreeMap<String, Vec<usize>>,
}

impl QuotientPartition {
    /// Validates and renumbers. `class_of` may use any labels.
    pub fn new(domain: Vec<VertexKey>, class_of: &[usize], actions: BTreeMap<String, Vec<usize>>) -> Result<Self> {
        if class_of.len() != domain.len() {
            return Err(Error::Precondition("every thread needs a class".into()));
        }
        let mut relabel = BTreeMap::new();
        let class_of: Vec<usize> = class_of
            .iter()
            .map(|&c| {
                let next = relabel.len();
                *relabel.entry(c).or_insert(next)
            })
            .collect();
        let k = relabel.len();
        let mut normalized = BTreeMap::new();
        for (word, perm) in actions {
            let mut renamed = vec![0; k];
            for (&old, &new) in &relabel {
                let target = *perm.get(old).ok_or_else(|| Error::InvalidPermutation(format!("{word} misses class {old}")))?;
                renamed[new] = *relabel
                    .get(&target)
                    .ok_or_else(|| Error::InvalidPermutation(format!("{word} maps to unknown class {target}")))?;
            }
            check_permutation(&renamed, k, &word)?;
            normalized.insert(word, renamed);
        }
        Ok(QuotientPartition { domain, class_of, actions: normalized })
    }

    /// The quotient of the depth-`d` threads of `system` by `class_of`, with
    /// actions computed on threads. A word `g` sends a class to the classes
    /// of `g·t'` over all extensions `t'` of its members to depth `d + |g|`;
    /// `NotEquivariant` unless this is a single class and the result is a
    /// permutation.
    pub fn induced(system: &EndSystem, d: u32, class_of: &[usize], words: &[GroupWord]) -> Result<Self> {
        let threads = system.threads_at(d);
        if class_of.len() != threads.len() {
            return Err(Error::Precondition(format!("{} threads but {} labels", threads.len(), class_of.len())));
        }
        let labels: BTreeSet<usize> = class_of.iter().copied().collect();
        let mut actions = BTreeMap::new();
        for g in words {
            let deep = d + g.length();
            if deep > system.depth() {
                return Err(Error::DepthInsufficient { depth: system.depth(), needed: deep });
            }
            let mut perm = BTreeMap::new();
            for ext in system.threads_at(deep) {
                let c = class_of[threads.iter().position(|t| *t == ext.truncate(d)).expect("restriction of a thread")];
                let image = act_on_end(system, g, &ext, d)?;
                let j = class_of[threads.iter().position(|s| *s == image).expect("threads of one system")];
                if *perm.entry(c).or_insert(j) != j {
                    return Err(Error::NotEquivariant(g.word.clone()));
                }
            }
            let images: BTreeSet<usize> = perm.values().copied().collect();
            if perm.len() != labels.len() || images.len() != labels.len() {
                return Err(Error::NotEquivariant(g.word.clone()));
            }
            let table = (0..=labels.last().copied().unwrap_or(0)).map(|c| perm.get(&c).copied().unwrap_or(c)).collect();
            actions.insert(g.word.clone(), table);
        }
        let domain = threads.iter().map(|t| t.id().clone()).collect();
        Self::new(domain, class_of, actions)
    }

    /// The partition into singletons.
    pub fn discrete(domain: Vec<VertexKey>, thread_actions: BTreeMap<String, Vec<usize>>) -> Result<Self> {
        let ids: Vec<usize> = (0..domain.len()).collect();
        Self::new(domain, &ids, thread_actions)
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    /// Thread indices per class.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (t, &c) in self.class_of.iter().enumerate() {
            out[c].push(t);
        }
        out
    }

    /// Every class of `self` lies inside a class of `other`; returns that map.
    pub fn map_onto(&self, other: &QuotientPartition) -> Option<Vec<usize>> {
        if self.domain != other.domain {
            return None;
        }
        let mut map = vec![None; self.class_count()];
        for (&a, &b) in self.class_of.iter().zip(&other.class_of) {
            if *map[a].get_or_insert(b) != b {
                return None;
            }
        }
        map.into_iter().collect()
    }
}

/// Realized pairs of classes of two quotients with the two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub quotient: QuotientPartition,
    /// `(class in A, class in B)` per pullback class.
    pub pairs: Vec<(usize, usize)>,
    pub to_a: Vec<usize>,
    pub to_b: Vec<usize>,
    /// Number of pairs before restricting to realized ones.
    pub possible_pairs: usize,
}

/// Fibers of `t ↦ (class_A(t), class_B(t))`. Both quotients must share the
/// domain and the tracked words.
pub fn pullback(qa: &QuotientPartition, qb: &QuotientPartition) -> Result<Pullback> {
    if qa.domain != qb.domain || !qa.actions.keys().eq(qb.actions.keys()) {
        return Err(Error::DomainMismatch);
    }
    let mut index = BTreeMap::new();
    let mut pairs = Vec::new();
    let class_of: Vec<usize> = qa
        .class_of
        .iter()
        .zip(&qb.class_of)
        .map(|(&a, &b)| {
            *index.entry((a, b)).or_insert_with(|| {
                pairs.push((a, b));
                pairs.len() - 1
            })
        })
        .collect();
    let mut actions = BTreeMap::new();
    for (word, sa) in &qa.actions {
        let sb = &qb.actions[word];
        let perm = pairs
            .iter()
            .map(|&(a, b)| index.get(&(sa[a], sb[b])).copied().ok_or_else(|| Error::NotEquivariant(word.clone())))
            .collect::<Result<Vec<_>>>()?;
        actions.insert(word.clone(), perm);
    }
    let quotient = QuotientPartition::new(qa.domain.clone(), &class_of, actions)?;
    Ok(Pullback {
        to_a: pairs.iter().map(|p| p.0).collect(),
        to_b: pairs.iter().map(|p| p.1).collect(),
        pairs,
        possible_pairs: qa.class_count() * qb.class_count(),
        quotient,
    })
}

impl Pullback {
    /// Projections commute with every tracked action.
    pub fn projections_equivariant(&self, qa: &QuotientPartition, qb: &QuotientPartition) -> bool {
        self.quotient.actions.iter().all(|(word, s)| {
            (0..s.len()).all(|c| {
                self.to_a[s[c]] == qa.actions[word][self.to_a[c]] && self.to_b[s[c]] == qb.actions[word][self.to_b[c]]
            })
        })
    }

    /// Checks that a quotient mapping onto both factors factors through the
    /// pullback.
    pub fn certify(&self, qa: &QuotientPartition, qb: &QuotientPartition, other: &QuotientPartition) -> UniversalityCertificate {
        let onto_a = other.map_onto(qa);
        let onto_b = other.map_onto(qb);
        let factor = other.map_onto(&self.quotient);
        let commutes = match (&onto_a, &onto_b, &factor) {
            (Some(fa), Some(fb), Some(f)) => (0..f.len()).all(|c| self.to_a[f[c]] == fa[c] && self.to_b[f[c]] == fb[c]),
            _ => false,
        };
        UniversalityCertificate { maps_onto_a: onto_a.is_some(), maps_onto_b: onto_b.is_some(), factor, commutes }
    }
}

/// Outcome of testing the pullback against a third quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalityCertificate {
    pub maps_onto_a: bool,
    pub maps_onto_b: bool,
    /// Class map into the pullback, when one exists.
    pub factor: Option<Vec<usize>>,
    pub commutes: bool,
}

impl UniversalityCertificate {
    /// Either the third quotient does not map onto both factors, or it
    /// factors through the pullback compatibly.
    pub fn holds(&self) -> bool {
        !(self.maps_onto_a && self.maps_onto_b) || (self.factor.is_some() && self.commutes)
    }
}
