//! Left translations on windows, sets and end threads, and finite-depth
//! probes of convergence dynamics.
//!
//! A translate `g·x` may fall outside the window. Its component in
//! `Γ ∖ M_r` is then found by walking a geodesic back toward the basepoint.
//! Distances along that walk only decrease, so it never enters `B_r` before
//! reaching the window, and the walk stays inside one component.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ends::EndSystem;
use crate::ends::EndThread;
use crate::error::{Error, Result};
use crate::graph::{GraphSpec, VertexKey};
use crate::group::{Element, Group};
use crate::set::VertexSet;
use crate::window::{VertexId, Window};

/// A group element with the word it was written as.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupWord {
    pub word: String,
    pub normal_form: VertexKey,
    element: Element,
    length: u32,
}

impl GroupWord {
    pub fn parse(spec: &GraphSpec, word: &str) -> Result<Self> {
        let group = spec.group().ok_or(Error::NotCayley)?;
        let element = group.parse_word(word.trim())?;
        Ok(Self::from_element(spec, word.trim().into(), element))
    }

    fn from_element(spec: &GraphSpec, word: String, element: Element) -> Self {
        let group = spec.group().expect("cayley kind");
        let length = group.length(&element) as u32;
        GroupWord { word, normal_form: spec.key_of(&element), element, length }
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    /// Word length of the normal form.
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn inverse(&self, spec: &GraphSpec) -> GroupWord {
        let group = spec.group().expect("cayley kind");
        let inv = group.inverse(&self.element);
        let word = group.format(&inv);
        Self::from_element(spec, word, inv)
    }

    pub fn compose(&self, spec: &GraphSpec, other: &GroupWord) -> GroupWord {
        let group = spec.group().expect("cayley kind");
        let el = group.mul(&self.element, &other.element);
        Self::from_element(spec, format!("{}{}", self.word, other.word), el)
    }
}

/// Locates elements of the group relative to one window.
struct Locator<'a> {
    w: &'a Window,
    group: &'a Group,
    base_inv: Element,
    gens: Vec<Element>,
}

impl<'a> Locator<'a> {
    fn new(w: &'a Window) -> Result<Self> {
        let group = w.spec().group().ok_or(Error::NotCayley)?;
        let base = group.parse_key(w.basepoint().as_str())?;
        let gens = group.generators().into_iter().map(|(_, g)| g).collect();
        Ok(Locator { w, group, base_inv: group.inverse(&base), gens })
    }

    fn distance(&self, y: &Element) -> u64 {
        self.group.length(&self.group.mul(&self.base_inv, y))
    }

    fn vertex(&self, v: VertexId) -> Result<Element> {
        self.group.parse_key(self.w.key(v).as_str())
    }

    /// The window vertex reached from `y` by a geodesic toward the basepoint;
    /// `y` itself when it is in the window.
    fn project(&self, y: &Element) -> VertexId {
        let mut y = y.clone();
        let mut d = self.distance(&y);
        loop {
            if d <= self.w.radius() as u64 {
                if let Some(v) = self.w.id_of(&self.w.spec().key_of(&y)) {
                    return v;
                }
            }
            // every element other than the basepoint has a neighbor one step closer
            let next = self
                .gens
                .iter()
                .map(|f| self.group.mul(&y, f))
                .find(|z| self.distance(z) < d)
                .expect("word metric has descending neighbors");
            y = next;
            d -= 1;
        }
    }
}

/// `g·A`. Fails with `HorizonEscape` if an image leaves the window.
pub fn act_on_set(w: &Window, g: &GroupWord, a: &VertexSet) -> Result<VertexSet> {
    w.owns(a)?;
    let loc = Locator::new(w)?;
    let mut out = w.empty_set();
    for v in a.iter() {
        let key = w.spec().key_of(&loc.group.mul(&g.element, &loc.vertex(v)?));
        out.insert(w.id_of(&key).ok_or(Error::HorizonEscape)?);
    }
    Ok(out)
}

/// Counts pairs at distance one or two whose adjacency changes under
/// `x ↦ g·x`, among pairs whose images stay in the window. Zero for an
/// automorphism.
pub fn automorphism_violations(w: &Window, g: &GroupWord) -> Result<usize> {
    let loc = Locator::new(w)?;
    let image = |v: VertexId| -> Result<Option<VertexId>> {
        let key = w.spec().key_of(&loc.group.mul(&g.element, &loc.vertex(v)?));
        Ok(w.id_of(&key))
    };
    let mut bad = 0;
    for (_, u, v) in w.edges() {
        if let (Some(x), Some(y)) = (image(u)?, image(v)?) {
            bad += usize::from(w.edge_between(x, y).is_none());
        }
    }
    // images of non-adjacent pairs at distance two must stay non-adjacent
    for u in w.vertices() {
        for &(m, _) in w.neighbors(u) {
            for &(v, _) in w.neighbors(m) {
                if v <= u || w.edge_between(u, v).is_some() {
                    continue;
                }
                if let (Some(x), Some(y)) = (image(u)?, image(v)?) {
                    bad += usize::from(w.edge_between(x, y).is_some());
                }
            }
        }
    }
    Ok(bad)
}

/// Index of the component of `Γ ∖ M_r` containing `g·x` for every `x` in
/// `points`; `DepthInsufficient` if the window cannot tell them apart.
fn image_component(
    system: &EndSystem,
    loc: &Locator<'_>,
    g: &GroupWord,
    r: u32,
    points: impl Iterator<Item = VertexId>,
    needed: u32,
) -> Result<usize> {
    let p = system.partition(r);
    let mut found = None;
    for x in points {
        let y = loc.project(&loc.group.mul(&g.element, &loc.vertex(x)?));
        let c = p.component_of(y);
        if *found.get_or_insert(c) != c {
            return Err(Error::DepthInsufficient { depth: system.depth(), needed });
        }
    }
    found.ok_or(Error::DepthInsufficient { depth: system.depth(), needed })
}

/// `g·t` at depth `d`: at each radius `r ≤ d`, the component of `Γ ∖ M_r`
/// containing `g·𝒞(M_{r+|g|}, t)`. Requires `t.depth() ≥ d + |g|`.
pub fn act_on_end(system: &EndSystem, g: &GroupWord, t: &EndThread, d: u32) -> Result<EndThread> {
    let needed = d + g.length;
    if t.depth() < needed || system.depth() < needed {
        return Err(Error::DepthInsufficient { depth: t.depth().min(system.depth()), needed });
    }
    let loc = Locator::new(system.window())?;
    let mut chosen = Vec::with_capacity(d as usize + 1);
    for r in 0..=d {
        let source = &system.component(t, r + g.length).vertices;
        chosen.push(image_component(system, &loc, g, r, source.iter(), needed)?);
    }
    let top = &system.partition(d).components()[chosen[d as usize]];
    let image = system
        .thread_by_id(d, top.id.as_str())
        .ok_or(Error::DepthInsufficient { depth: t.depth(), needed })?;
    if (0..=d).any(|r| image.index_at(r) != chosen[r as usize]) {
        return Err(Error::DepthInsufficient { depth: t.depth(), needed });
    }
    Ok(image)
}

/// Outcome of a convergence probe at depth `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub depth: u32,
    /// Window radius the probe ran in.
    pub horizon: u32,
    /// Normal forms of the sequence.
    pub sequence: Vec<VertexKey>,
    /// All depth-`d` threads.
    pub classes: Vec<EndThread>,
    pub lambda: EndThread,
    pub mu: EndThread,
    /// Indices into `classes` of the columns of the table (every class but `mu`).
    pub columns: Vec<usize>,
    /// `collapse_table[n][j]`: `g_n` maps all of column `j` into `lambda`.
    pub collapse_table: Vec<Vec<bool>>,
    /// First 1-based `n₀` after which every row is all true.
    pub verified_from: Option<usize>,
}

impl ProbeReport {
    pub fn collapse_verified(&self) -> bool {
        self.verified_from.is_some()
    }
}

/// One frontier vertex from each component of `Γ ∖ M_r` that reaches the
/// frontier, found by flooding over vertices farther than `r`.
fn frontier_representatives(w: &Window, r: u32) -> Vec<VertexId> {
    let mut seen = vec![false; w.len()];
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for x in w.frontier().iter() {
        if seen[x.index()] {
            continue;
        }
        seen[x.index()] = true;
        reps.push(x);
        stack.push(x);
        while let Some(u) = stack.pop() {
            for &(v, _) in w.neighbors(u) {
                if w.distance(v) > r && !seen[v.index()] {
                    seen[v.index()] = true;
                    stack.push(v);
                }
            }
        }
    }
    reps
}

/// Checks the collapsing behaviour of a sequence of group elements on the
/// depth-`d` classes of ends. The sequence must have strictly increasing
/// word lengths. `λ` and `μ` are read off the last two elements and their
/// inverses. For each `g_n` a class is checked on every component of
/// `Γ ∖ M_{d+|g_n|}` inside it, which covers all of its extensions.
pub fn dynamics_probe(spec: &GraphSpec, basepoint: &str, seq: &[GroupWord], d: u32, horizon: u32) -> Result<ProbeReport> {
    if seq.len() < 2 {
        return Err(Error::Precondition("a probe needs at least two elements".into()));
    }
    for pair in seq.windows(2) {
        if pair[0].normal_form == pair[1].normal_form {
            return Err(Error::Precondition(format!("repeated element {}", pair[1].normal_form)));
        }
        if pair[0].length >= pair[1].length {
            return Err(Error::Precondition("word lengths must increase strictly".into()));
        }
    }
    if seq[seq.len() - 2].length <= d {
        return Err(Error::Precondition(format!("elements must be longer than the depth {d}")));
    }
    let longest = seq.iter().map(|g| g.length).max().unwrap_or(0);
    let radius = horizon.max(d + 2).max(d + longest + 1);
    let w = Window::materialize(spec, basepoint, radius)?;
    let system = EndSystem::new(w, d)?;
    let w = system.window();
    let loc = Locator::new(w)?;
    let classes = system.threads_at(d);
    let p = system.partition(d);

    let class_of = |el: &Element| -> Result<usize> {
        let c = p.component_of(loc.project(el));
        classes
            .iter()
            .position(|t| t.index_at(d) == c)
            .ok_or_else(|| Error::Inconclusive(format!("{} lies in a bounded component", w.spec().key_of(el))))
    };
    let settle = |els: [&Element; 2], what: &str| -> Result<usize> {
        let (a, b) = (class_of(els[0])?, class_of(els[1])?);
        if a != b {
            return Err(Error::Inconclusive(format!("{what} does not stabilize")));
        }
        Ok(a)
    };
    let n = seq.len();
    let lambda = settle([&seq[n - 2].element, &seq[n - 1].element], "attracting end")?;
    let inverses = [loc.group.inverse(&seq[n - 2].element), loc.group.inverse(&seq[n - 1].element)];
    let mu = settle([&inverses[0], &inverses[1]], "repelling end")?;

    let columns: Vec<usize> = (0..classes.len()).filter(|&i| i != mu).collect();
    let lambda_index = classes[lambda].index_at(d);
    let mut collapse_table = Vec::with_capacity(n);
    for g in seq {
        // g carries each component of Γ ∖ M_{d+|g|} into one depth-d class,
        // so a single frontier point per component decides it
        let mut row = vec![true; columns.len()];
        for x in frontier_representatives(w, d + g.length) {
            let Some(j) = columns.iter().position(|&j| classes[j].index_at(d) == p.component_of(x)) else {
                continue;
            };
            if row[j] {
                let y = loc.project(&loc.group.mul(&g.element, &loc.vertex(x)?));
                row[j] = p.component_of(y) == lambda_index;
            }
        }
        collapse_table.push(row);
    }
    let verified_from = (0..n)
        .find(|&i| collapse_table[i..].iter().all(|row| row.iter().all(|&b| b)))
        .map(|i| i + 1);
    Ok(ProbeReport {
        depth: d,
        horizon: radius,
        sequence: seq.iter().map(|g| g.normal_form.clone()).collect(),
        lambda: classes[lambda].clone(),
        mu: classes[mu].clone(),
        classes,
        columns,
        collapse_table,
        verified_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(spec: &GraphSpec, ws: &[&str]) -> Vec<GroupWord> {
        ws.iter().map(|w| GroupWord::parse(spec, w).unwrap()).collect()
    }

    #[test]
    fn translating_sets() {
        let spec = GraphSpec::line();
        let w = Window::materialize(&spec, "0", 5).unwrap();
        let a = w.set_from_keys(["0", "1"]).unwrap();
        let g = GroupWord::parse(&spec, "+2").unwrap();
        assert_eq!(act_on_set(&w, &g, &a).unwrap(), w.set_from_keys(["2", "3"]).unwrap());
        assert_eq!(act_on_set(&w, &GroupWord::parse(&spec, "e").unwrap(), &a).unwrap(), a);
        let far = GroupWord::parse(&spec, "+5").unwrap();
        assert_eq!(act_on_set(&w, &far, &a), Err(Error::HorizonEscape));

        let spec = GraphSpec::free_group(2).unwrap();
        let w = Window::materialize(&spec, "e", 3).unwrap();
        let a = w.set_from_keys(["e", "b"]).unwrap();
        let g = GroupWord::parse(&spec, "a").unwrap();
        assert_eq!(act_on_set(&w, &g, &a).unwrap(), w.set_from_keys(["a", "ab"]).unwrap());
        assert_eq!(automorphism_violations(&w, &g).unwrap(), 0);
    }

    #[test]
    fn group_words() {
        let spec = GraphSpec::free_group(2).unwrap();
        let g = GroupWord::parse(&spec, "abA").unwrap();
        assert_eq!(g.length(), 3);
        assert_eq!(g.inverse(&spec).normal_form.as_str(), "aBA");
        assert_eq!(g.compose(&spec, &g.inverse(&spec)).normal_form.as_str(), "e");
    }

    #[test]
    fn ends_of_the_free_group_move() {
        let spec = GraphSpec::free_group(2).unwrap();
        let sys = EndSystem::new(Window::materialize(&spec, "e", 5).unwrap(), 3).unwrap();
        let w = sys.window();
        let b_end = sys.thread_through(w.id("bbbbb").unwrap(), 3).unwrap();
        let a = GroupWord::parse(&spec, "a").unwrap();
        let img = act_on_end(&sys, &a, &b_end, 0).unwrap();
        assert_eq!(img.id().as_str(), "a");
        let a_end = sys.thread_through(w.id("aaaaa").unwrap(), 3).unwrap();
        let a_inv = GroupWord::parse(&spec, "A").unwrap();
        assert_eq!(act_on_end(&sys, &a_inv, &a_end, 2).unwrap(), a_end.truncate(2));
        assert_eq!(
            act_on_end(&sys, &a, &b_end, 3),
            Err(Error::DepthInsufficient { depth: 3, needed: 4 })
        );
    }

    #[test]
    fn line_ends_are_fixed() {
        let spec = GraphSpec::line();
        let sys = EndSystem::new(Window::materialize(&spec, "0", 12).unwrap(), 8).unwrap();
        let plus = sys.thread_through(sys.window().id("12").unwrap(), 8).unwrap();
        let g = GroupWord::parse(&spec, "+5").unwrap();
        assert_eq!(act_on_end(&sys, &g, &plus, 3).unwrap(), plus.truncate(3));
    }

    #[test]
    fn powers_of_a_collapse() {
        let spec = GraphSpec::free_group(2).unwrap();
        let seq = words(&spec, &["a", "aa", "aaa", "aaaa", "aaaaa"]);
        let rep = dynamics_probe(&spec, "e", &seq, 0, 2).unwrap();
        assert_eq!(rep.lambda.id().as_str(), "a");
        assert_eq!(rep.mu.id().as_str(), "A");
        assert_eq!(rep.columns.len(), 3);
        assert!(rep.verified_from.is_some_and(|n| n <= 2));
    }

    #[test]
    fn powers_of_ab_collapse() {
        let spec = GraphSpec::free_group(2).unwrap();
        let seq = words(&spec, &["ab", "abab", "ababab", "abababab"]);
        let rep = dynamics_probe(&spec, "e", &seq, 0, 2).unwrap();
        assert_eq!(rep.lambda.id().as_str(), "a");
        assert_eq!(rep.mu.id().as_str(), "B");
        assert!(rep.verified_from.is_some_and(|n| n <= 2));
        let inv: Vec<_> = seq.iter().map(|g| g.inverse(&spec)).collect();
        let back = dynamics_probe(&spec, "e", &inv, 0, 2).unwrap();
        assert_eq!((back.lambda, back.mu), (rep.mu, rep.lambda));
    }

    #[test]
    fn translations_of_the_line() {
        let spec = GraphSpec::line();
        let seq = words(&spec, &["+1", "+2", "+3", "+4", "+5", "+6"]);
        let rep = dynamics_probe(&spec, "0", &seq, 1, 4).unwrap();
        assert_eq!(rep.columns, [1]);
        assert_eq!(rep.classes[rep.columns[0]], rep.lambda);
        assert_eq!(rep.verified_from, Some(1));
    }

    #[test]
    fn probe_preconditions() {
        let spec = GraphSpec::free_group(2).unwrap();
        let bad = words(&spec, &["aa", "bb"]);
        assert!(matches!(dynamics_probe(&spec, "e", &bad, 0, 2), Err(Error::Precondition(_))));
        let wobbly = words(&spec, &["a", "bb", "aaa", "bbbb"]);
        assert!(matches!(dynamics_probe(&spec, "e", &wobbly, 0, 2), Err(Error::Inconclusive(_))));
    }
}
