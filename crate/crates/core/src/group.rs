//! Normal-form machines for the finitely generated groups in the catalog.
//!
//! Three families are covered: the integers, the lattice ℤ², and free
//! products of cyclic groups (which include free groups, the infinite
//! dihedral group and the groups whose Cayley graphs are regular trees).
//! Every element has exactly one textual key, so key equality is group
//! equality.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;

/// Letters used for free-product factors. `e` is reserved for the identity.
const LETTERS: &[u8] = b"abcdfghijklmnopqrstuvwxyz";

/// Order of a cyclic factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    fn normalize(self, exp: i64) -> i64 {
        match self {
            Order::Infinite => exp,
            Order::Finite(n) => exp.rem_euclid(n as i64),
        }
    }

    fn syllable_length(self, exp: i64) -> u64 {
        match self {
            Order::Infinite => exp.unsigned_abs(),
            Order::Finite(n) => {
                let e = exp.rem_euclid(n as i64) as u64;
                e.min(n as u64 - e)
            }
        }
    }
}

/// A maximal power of one generator inside a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub factor: usize,
    pub exp: i64,
}

/// Free product of cyclic groups `C_1 * ... * C_k` with one letter per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeProduct {
    letters: Vec<char>,
    orders: Vec<Order>,
}

impl FreeProduct {
    pub fn new(letters: Vec<char>, orders: Vec<Order>) -> Result<Self, Error> {
        if letters.len() != orders.len() || letters.is_empty() {
            return Err(Error::InvalidSpec("free product needs one letter per factor".into()));
        }
        for (i, l) in letters.iter().enumerate() {
            if !l.is_ascii_lowercase() || *l == 'e' || letters[..i].contains(l) {
                return Err(Error::InvalidSpec(format!("bad generator letter {l:?}")));
            }
        }
        if orders.iter().any(|o| matches!(o, Order::Finite(n) if *n < 2)) {
            return Err(Error::InvalidSpec("finite factors need order at least 2".into()));
        }
        Ok(FreeProduct { letters, orders })
    }

    /// Free group of rank `k` on `a, b, c, d, f, ...`.
    pub fn free_group(rank: usize) -> Result<Self, Error> {
        if rank == 0 || rank > LETTERS.len() {
            return Err(Error::InvalidSpec(format!("free group rank {rank} out of range")));
        }
        Self::new(
            LETTERS[..rank].iter().map(|&b| b as char).collect(),
            alloc::vec![Order::Infinite; rank],
        )
    }

    /// `Z/p * Z/q` on letters `s` and `t`.
    pub fn cyclic_pair(p: u32, q: u32) -> Result<Self, Error> {
        Self::new(alloc::vec!['s', 't'], alloc::vec![Order::Finite(p), Order::Finite(q)])
    }

    /// Free product of `d` copies of `Z/2`; its Cayley graph is the `d`-regular tree.
    pub fn involutions(degree: usize) -> Result<Self, Error> {
        if degree == 0 || degree > LETTERS.len() {
            return Err(Error::InvalidSpec(format!("tree degree {degree} out of range")));
        }
        Self::new(
            LETTERS[..degree].iter().map(|&b| b as char).collect(),
            alloc::vec![Order::Finite(2); degree],
        )
    }

    fn factor_of(&self, c: char) -> Option<(usize, i64)> {
        if let Some(i) = self.letters.iter().position(|&l| l == c) {
            return Some((i, 1));
        }
        let lower = c.to_ascii_lowercase();
        if c.is_ascii_uppercase() {
            if let Some(i) = self.letters.iter().position(|&l| l == lower) {
                return Some((i, -1));
            }
        }
        None
    }

    /// Appends one syllable to a reduced word, keeping it reduced.
    fn push(&self, word: &mut Vec<Syllable>, mut s: Syllable) {
        s.exp = self.orders[s.factor].normalize(s.exp);
        if s.exp == 0 {
            return;
        }
        if let Some(last) = word.last_mut() {
            if last.factor == s.factor {
                let e = self.orders[s.factor].normalize(last.exp + s.exp);
                if e == 0 {
                    word.pop();
                } else {
                    last.exp = e;
                }
                return;
            }
        }
        word.push(s);
    }

    fn mul(&self, x: &[Syllable], y: &[Syllable]) -> Vec<Syllable> {
        let mut out = x.to_vec();
        for &s in y {
            self.push(&mut out, s);
        }
        out
    }

    fn inverse(&self, x: &[Syllable]) -> Vec<Syllable> {
        let mut out = Vec::with_capacity(x.len());
        for s in x.iter().rev() {
            self.push(&mut out, Syllable { factor: s.factor, exp: -s.exp });
        }
        out
    }

    fn length(&self, x: &[Syllable]) -> u64 {
        x.iter().map(|s| self.orders[s.factor].syllable_length(s.exp)).sum()
    }

    fn format(&self, x: &[Syllable]) -> String {
        if x.is_empty() {
            return "e".to_string();
        }
        let mut out = String::new();
        for s in x {
            let l = self.letters[s.factor];
            let c = if s.exp < 0 { l.to_ascii_uppercase() } else { l };
            for _ in 0..s.exp.unsigned_abs() {
                out.push(c);
            }
        }
        out
    }

    /// Parses a word over the letters. Accepts uppercase inverses, `⁻¹` and
    /// `^k` / `^-k` suffixes, and `e`, `1` or the empty string for the identity.
    fn parse(&self, text: &str) -> Result<Vec<Syllable>, Error> {
        let bad = || Error::InvalidKey(text.to_string());
        if text.is_empty() || text == "e" || text == "1" {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let (factor, mut exp) = self.factor_of(chars[i]).ok_or_else(bad)?;
            i += 1;
            if chars.get(i) == Some(&'⁻') && chars.get(i + 1) == Some(&'¹') {
                exp = -exp;
                i += 2;
            } else if chars.get(i) == Some(&'^') {
                i += 1;
                let start = i;
                if chars.get(i) == Some(&'-') {
                    i += 1;
                }
                while chars.get(i).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                }
                let num: String = chars[start..i].iter().collect();
                let k: i64 = num.parse().map_err(|_| bad())?;
                exp = exp.checked_mul(k).ok_or_else(bad)?;
            }
            self.push(&mut word, Syllable { factor, exp });
        }
        Ok(word)
    }

    fn generators(&self) -> Vec<(String, Vec<Syllable>)> {
        let mut out = Vec::new();
        for (i, (&l, &o)) in self.letters.iter().zip(&self.orders).enumerate() {
            out.push((l.to_string(), alloc::vec![Syllable { factor: i, exp: 1 }]));
            if o != Order::Finite(2) {
                let inv = self.inverse(&[Syllable { factor: i, exp: 1 }]);
                out.push((l.to_ascii_uppercase().to_string(), inv));
            }
        }
        out
    }
}

/// A group element in one of the supported normal forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Int(i64),
    Pair(i64, i64),
    Word(Vec<Syllable>),
}

/// The group behind a Cayley-kind graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// ℤ with generators `t = +1`, `T = -1`.
    Integers,
    /// ℤ² with generators `x`, `X`, `y`, `Y`.
    Lattice,
    FreeProduct(FreeProduct),
}

fn parse_int(text: &str) -> Option<i64> {
    let t = text.strip_prefix('+').unwrap_or(text);
    if t.is_empty() || t.starts_with('+') {
        return None;
    }
    t.parse().ok()
}

fn parse_pair(text: &str) -> Option<(i64, i64)> {
    let inner = text.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((parse_int(a)?, parse_int(b)?))
}

/// Parses a word over single-letter abelian generators with optional `^k`.
fn parse_abelian(text: &str, letters: &[(char, usize, i64)], dims: usize) -> Option<[i64; 2]> {
    let chars: Vec<char> = text.chars().collect();
    let mut acc = [0i64; 2];
    let mut i = 0;
    while i < chars.len() {
        let &(_, axis, sign) = letters.iter().find(|(c, _, _)| *c == chars[i])?;
        i += 1;
        let mut k = 1i64;
        if chars.get(i) == Some(&'^') {
            i += 1;
            let start = i;
            if chars.get(i) == Some(&'-') {
                i += 1;
            }
            while chars.get(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            k = chars[start..i].iter().collect::<String>().parse().ok()?;
        }
        if axis >= dims {
            return None;
        }
        acc[axis] = acc[axis].checked_add(sign.checked_mul(k)?)?;
    }
    Some(acc)
}

const LINE_LETTERS: &[(char, usize, i64)] = &[('t', 0, 1), ('T', 0, -1)];
const GRID_LETTERS: &[(char, usize, i64)] = &[('x', 0, 1), ('X', 0, -1), ('y', 1, 1), ('Y', 1, -1)];

impl Group {
    pub fn identity(&self) -> Element {
        match self {
            Group::Integers => Element::Int(0),
            Group::Lattice => Element::Pair(0, 0),
            Group::FreeProduct(_) => Element::Word(Vec::new()),
        }
    }

    /// Parses a canonical vertex key (non-reduced words are reduced).
    pub fn parse_key(&self, key: &str) -> Result<Element, Error> {
        let bad = || Error::InvalidKey(key.to_string());
        match self {
            Group::Integers => parse_int(key).map(Element::Int).ok_or_else(bad),
            Group::Lattice => parse_pair(key).map(|(x, y)| Element::Pair(x, y)).ok_or_else(bad),
            Group::FreeProduct(fp) => fp.parse(key).map(Element::Word),
        }
    }

    /// Parses a group word: either a key or a product of generator labels.
    pub fn parse_word(&self, text: &str) -> Result<Element, Error> {
        if let Ok(el) = self.parse_key(text) {
            return Ok(el);
        }
        let bad = || Error::InvalidKey(text.to_string());
        match self {
            Group::Integers => {
                if text.is_empty() || text == "e" {
                    return Ok(Element::Int(0));
                }
                parse_abelian(text, LINE_LETTERS, 1).map(|a| Element::Int(a[0])).ok_or_else(bad)
            }
            Group::Lattice => {
                if text.is_empty() || text == "e" {
                    return Ok(Element::Pair(0, 0));
                }
                parse_abelian(text, GRID_LETTERS, 2)
                    .map(|a| Element::Pair(a[0], a[1]))
                    .ok_or_else(bad)
            }
            Group::FreeProduct(_) => Err(bad()),
        }
    }

    pub fn format(&self, el: &Element) -> String {
        match (self, el) {
            (Group::Integers, Element::Int(n)) => n.to_string(),
            (Group::Lattice, Element::Pair(x, y)) => format!("({x},{y})"),
            (Group::FreeProduct(fp), Element::Word(w)) => fp.format(w),
            _ => unreachable!("element from another group"),
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        match (self, x, y) {
            (Group::Integers, Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (Group::Lattice, Element::Pair(a, b), Element::Pair(c, d)) => Element::Pair(a + c, b + d),
            (Group::FreeProduct(fp), Element::Word(a), Element::Word(b)) => Element::Word(fp.mul(a, b)),
            _ => unreachable!("element from another group"),
        }
    }

    pub fn inverse(&self, x: &Element) -> Element {
        match (self, x) {
            (Group::Integers, Element::Int(a)) => Element::Int(-a),
            (Group::Lattice, Element::Pair(a, b)) => Element::Pair(-a, -b),
            (Group::FreeProduct(fp), Element::Word(a)) => Element::Word(fp.inverse(a)),
            _ => unreachable!("element from another group"),
        }
    }

    /// Word length with respect to the symmetric generating set.
    pub fn length(&self, x: &Element) -> u64 {
        match (self, x) {
            (Group::Integers, Element::Int(a)) => a.unsigned_abs(),
            (Group::Lattice, Element::Pair(a, b)) => a.unsigned_abs() + b.unsigned_abs(),
            (Group::FreeProduct(fp), Element::Word(a)) => fp.length(a),
            _ => unreachable!("element from another group"),
        }
    }

    /// Symmetric generating set without the identity, as `(label, element)`.
    pub fn generators(&self) -> Vec<(String, Element)> {
        match self {
            Group::Integers => alloc::vec![("t".into(), Element::Int(1)), ("T".into(), Element::Int(-1))],
            Group::Lattice => alloc::vec![
                ("x".into(), Element::Pair(1, 0)),
                ("X".into(), Element::Pair(-1, 0)),
                ("y".into(), Element::Pair(0, 1)),
                ("Y".into(), Element::Pair(0, -1)),
            ],
            Group::FreeProduct(fp) => fp
                .generators()
                .into_iter()
                .map(|(l, w)| (l, Element::Word(w)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Group {
        Group::FreeProduct(FreeProduct::free_group(2).unwrap())
    }

    #[test]
    fn free_group_reduction() {
        let g = f2();
        let x = g.parse_word("abBA").unwrap();
        assert_eq!(g.format(&x), "e");
        let y = g.parse_word("ab⁻¹").unwrap();
        assert_eq!(g.format(&y), "aB");
        let z = g.parse_word("a^3b^-2").unwrap();
        assert_eq!(g.format(&z), "aaaBB");
        assert_eq!(g.length(&z), 5);
    }

    #[test]
    fn free_group_inverse_and_product() {
        let g = f2();
        let x = g.parse_word("abAb").unwrap();
        let inv = g.inverse(&x);
        assert_eq!(g.format(&inv), "BaBA");
        assert_eq!(g.mul(&x, &inv), g.identity());
    }

    #[test]
    fn finite_factors_wrap() {
        let g = Group::FreeProduct(FreeProduct::cyclic_pair(2, 3).unwrap());
        let x = g.parse_word("ss").unwrap();
        assert_eq!(g.format(&x), "e");
        let t_inv = g.parse_word("T").unwrap();
        assert_eq!(g.format(&t_inv), "tt");
        assert_eq!(g.length(&t_inv), 1);
        let labels: Vec<_> = g.generators().into_iter().map(|(l, _)| l).collect();
        assert_eq!(labels, ["s", "t", "T"]);
    }

    #[test]
    fn abelian_words() {
        assert_eq!(Group::Integers.parse_word("+5").unwrap(), Element::Int(5));
        assert_eq!(Group::Integers.parse_word("t^3T").unwrap(), Element::Int(2));
        assert_eq!(Group::Lattice.parse_word("xxY").unwrap(), Element::Pair(2, -1));
        assert_eq!(Group::Lattice.parse_word("(1,0)").unwrap(), Element::Pair(1, 0));
        assert!(Group::Lattice.parse_key("(1,0").is_err());
        assert!(Group::Integers.parse_key("++1").is_err());
    }

    #[test]
    fn rejects_unknown_letters() {
        assert!(matches!(f2().parse_key("ac"), Err(Error::InvalidKey(_))));
    }
}
