//! Edge boundaries and the Boolean algebra of sets with bounded boundary.
//!
//! At window scale "bounded" means "avoids the frontier". Every verdict here
//! is therefore relative to the horizon of the window it was computed in.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{GraphSpec, VertexKey};
use crate::set::VertexSet;
use crate::window::{EdgeId, Window};

/// The edge boundary `∂A` of a vertex set and its vertex support `|∂A|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaBoundary {
    /// Window edges with exactly one endpoint in `A`, in id order.
    pub edges: Vec<EdgeId>,
    pub support: VertexSet,
    /// The support avoids the frontier.
    pub bounded_within_window: bool,
}

pub fn gamma_boundary(w: &Window, a: &VertexSet) -> Result<GammaBoundary> {
    w.owns(a)?;
    let mut edges = Vec::new();
    let mut support = w.empty_set();
    for (e, u, v) in w.edges() {
        if a.contains(u) != a.contains(v) {
            edges.push(e);
            support.insert(u);
            support.insert(v);
        }
    }
    let bounded_within_window = support.is_disjoint(w.frontier())?;
    Ok(GammaBoundary { edges, support, bounded_within_window })
}

pub fn symmetric_difference(a: &VertexSet, b: &VertexSet) -> Result<VertexSet> {
    a.symmetric_difference(b)
}

/// Evidence that a boundary keeps growing with the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthCertificate {
    pub radii: Vec<u32>,
    pub support_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No(GrowthCertificate),
    HorizonUnknown,
}

/// Verdict on membership in the bounded-boundary algebra; the witness is the
/// boundary support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraVerdict {
    pub membership: Membership,
    pub witness: VertexSet,
}

impl AlgebraVerdict {
    pub fn is_yes(&self) -> bool {
        self.membership == Membership::Yes
    }
}

/// `yes` when the boundary support avoids the frontier, `horizon-unknown`
/// otherwise. A single window never answers `no`; see [`in_u_gamma_by_growth`].
pub fn in_u_gamma(w: &Window, a: &VertexSet) -> Result<AlgebraVerdict> {
    let b = gamma_boundary(w, a)?;
    let membership = if b.bounded_within_window { Membership::Yes } else { Membership::HorizonUnknown };
    Ok(AlgebraVerdict { membership, witness: b.support })
}

/// Evaluates a set given by a predicate over several horizons. Answers `no`
/// when, at every radius, the support reaches the frontier and its size grows
/// strictly; answers `yes` when the largest window already sees a bounded
/// support. The returned witness belongs to the window of the largest radius.
pub fn in_u_gamma_by_growth(
    spec: &GraphSpec,
    basepoint: &str,
    radii: &[u32],
    member: impl Fn(&VertexKey) -> bool,
) -> Result<(Window, AlgebraVerdict)> {
    let mut radii = radii.to_vec();
    radii.sort_unstable();
    radii.dedup();
    if radii.is_empty() {
        return Err(Error::Precondition("at least one radius is required".into()));
    }
    let mut sizes = Vec::new();
    let mut all_touch = true;
    let mut last = None;
    for &r in &radii {
        let w = Window::materialize(spec, basepoint, r)?;
        let a = w.set_where(|v| member(w.key(v)));
        let verdict = in_u_gamma(&w, &a)?;
        all_touch &= !verdict.is_yes();
        sizes.push(verdict.witness.len());
        last = Some((w, verdict));
    }
    let (w, mut verdict) = last.unwrap();
    let growing = sizes.len() >= 3 && sizes.windows(2).all(|p| p[0] < p[1]);
    if all_touch && growing {
        verdict.membership = Membership::No(GrowthCertificate { radii, support_sizes: sizes });
    }
    Ok((w, verdict))
}

/// Result of comparing `A` with its right translate `A·g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceVerdict {
    /// `A + A·g` stays away from the rim of the comparison region.
    pub bounded: bool,
    /// `A + A·g` inside the comparison region.
    pub witness: VertexSet,
    /// Comparison region radius `R - |g|` (the whole window when closed).
    pub region_radius: u32,
}

/// Right translate `A·g = {a·g}`. Fails with `HorizonEscape` if an image
/// leaves the window.
pub fn right_translate(w: &Window, a: &VertexSet, g: &str) -> Result<VertexSet> {
    w.owns(a)?;
    let group = w.spec().group().ok_or(Error::NotCayley)?;
    let el = group.parse_word(g)?;
    let mut out = w.empty_set();
    for v in a.iter() {
        let x = group.parse_key(w.key(v).as_str())?;
        let key = w.spec().key_of(&group.mul(&x, &el));
        out.insert(w.id_of(&key).ok_or(Error::HorizonEscape)?);
    }
    Ok(out)
}

/// `A·F` for the generating set with the identity adjoined, computed by right
/// multiplication (Cayley kinds) or as `A^{≤1}` otherwise.
pub fn translate_by_generators(w: &Window, a: &VertexSet) -> Result<VertexSet> {
    let Some(group) = w.spec().group() else {
        return Ok(w.ball(a, 1)?.members);
    };
    let mut out = a.clone();
    for (label, _) in group.generators() {
        out = out.union(&right_translate(w, a, &label)?)?;
    }
    Ok(out)
}

/// Checks whether `A + A·g` is bounded. Only points `x` with
/// `d(x) ≤ R - |g|` are compared, since for them `x·g⁻¹` is in the window.
pub fn almost_invariance_check(w: &Window, a: &VertexSet, g: &str) -> Result<InvarianceVerdict> {
    w.owns(a)?;
    let group = w.spec().group().ok_or(Error::NotCayley)?;
    let el = group.parse_word(g)?;
    let len = group.length(&el);
    if len > w.radius() as u64 {
        return Err(Error::HorizonEscape);
    }
    let inv = group.inverse(&el);
    let region = if w.is_closed() { w.radius() } else { w.radius() - len as u32 };
    let mut witness = w.empty_set();
    let mut bounded = true;
    for x in w.vertices() {
        if w.distance(x) > region {
            continue;
        }
        let xe = group.parse_key(w.key(x).as_str())?;
        let key = w.spec().key_of(&group.mul(&xe, &inv));
        let y = w.id_of(&key).ok_or(Error::HorizonEscape)?;
        if a.contains(x) != a.contains(y) {
            witness.insert(x);
            if !w.is_closed() && w.distance(x) == region {
                bounded = false;
            }
        }
    }
    Ok(InvarianceVerdict { bounded, witness, region_radius: region })
}

/// Conjunction of [`almost_invariance_check`] over a finite list of words.
pub fn almost_invariance_all(w: &Window, a: &VertexSet, words: &[&str]) -> Result<Vec<InvarianceVerdict>> {
    words.iter().map(|g| almost_invariance_check(w, a, g)).collect()
}
