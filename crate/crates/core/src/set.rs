//! Vertex sets over a materialized window, stored as bitsets.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::window::VertexId;

/// A subset of the vertices of one window. Iteration follows window order,
/// which is sorted by (distance, key).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    window: u64,
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub(crate) fn empty(window: u64, universe: usize) -> Self {
        VertexSet { window, universe, words: vec![0; universe.div_ceil(64)] }
    }

    pub(crate) fn full(window: u64, universe: usize) -> Self {
        let mut s = Self::empty(window, universe);
        for i in 0..universe {
            s.words[i / 64] |= 1 << (i % 64);
        }
        s
    }

    /// Fingerprint of the owning window.
    pub fn window_id(&self) -> u64 {
        self.window
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let i = v.index();
        assert!(i < self.universe, "vertex outside window");
        let fresh = self.words[i / 64] & (1 << (i % 64)) == 0;
        self.words[i / 64] |= 1 << (i % 64);
        fresh
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let i = v.index();
        let present = self.contains(v);
        if present {
            self.words[i / 64] &= !(1 << (i % 64));
        }
        present
    }

    pub fn contains(&self, v: VertexId) -> bool {
        let i = v.index();
        i < self.universe && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(VertexId::new(wi * 64 + bit))
            })
        })
    }

    pub fn first(&self) -> Option<VertexId> {
        self.iter().next()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.window != other.window || self.universe != other.universe {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check(other)?;
        Ok(VertexSet {
            window: self.window,
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & !b)
    }

    /// `(A ∖ B) ∪ (B ∖ A)`, the sum of the Boolean algebra.
    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a ^ b)
    }

    /// Complement within the window.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        let tail = self.universe % 64;
        if tail != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.index())).finish()
    }
}
