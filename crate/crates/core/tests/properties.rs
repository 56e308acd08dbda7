use std::collections::BTreeMap;

use endscope_core::boundary::{gamma_boundary, translate_by_generators};
use endscope_core::dynamics::{act_on_end, act_on_set, automorphism_violations, GroupWord};
use endscope_core::ends::{components, removal_set, EndSystem, RemovalSet};
use endscope_core::quotient::collapse_components;
use endscope_core::uniformity::{membership, Entourage, PreparedFamily, PreparedSet};
use endscope_core::{EdgeId, GraphSpec, VertexId, VertexSet, Window};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn window(name: &str, radius: u32) -> Window {
    let s = GraphSpec::parse_catalog(name).unwrap();
    Window::materialize(&s, s.default_basepoint().unwrap().as_str(), radius).unwrap()
}

fn random_inner_set(w: &Window, rng: &mut ChaCha8Rng, within: u32) -> VertexSet {
    let p = rng.gen_range(0.1..0.9);
    w.set_where(|v| w.distance(v) <= within && rng.gen_bool(p))
}

#[test]
fn boundary_is_sandwiched_by_translates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, r) in [("line", 12), ("grid2d", 8), ("free-group:2", 5), ("dihedral", 12), ("free-product:2,3", 7), ("regular-tree:3", 6)] {
        let w = window(name, r);
        for _ in 0..60 {
            let a = random_inner_set(&w, &mut rng, r - 2);
            let support = gamma_boundary(&w, &a).unwrap().support;
            let af = translate_by_generators(&w, &a).unwrap();
            let sum = a.symmetric_difference(&af).unwrap();
            assert!(sum.is_subset(&support).unwrap(), "{name}");
            assert!(support.is_subset(&translate_by_generators(&w, &sum).unwrap()).unwrap(), "{name}");
            let b = random_inner_set(&w, &mut rng, r - 2);
            let meet = gamma_boundary(&w, &a.intersection(&b).unwrap()).unwrap().support;
            let joined = support.union(&gamma_boundary(&w, &b).unwrap().support).unwrap();
            assert!(meet.is_subset(&joined).unwrap(), "{name}");
        }
    }
}

/// Reachability avoiding the removed edges, one BFS per vertex.
fn relation_matrix(w: &Window, m: &RemovalSet) -> Vec<Vec<bool>> {
    let n = w.len();
    let mut rel = vec![vec![false; n]; n];
    for s in 0..n {
        let mut stack = vec![s];
        rel[s][s] = true;
        while let Some(x) = stack.pop() {
            for &(y, e) in w.neighbors(VertexId::new(x)) {
                if !m.contains(e) && !rel[s][y.index()] {
                    rel[s][y.index()] = true;
                    stack.push(y.index());
                }
            }
        }
    }
    rel
}

#[test]
fn entourages_are_equivalences() {
    for (name, r) in [("line", 8), ("grid2d", 6), ("free-group:2", 5), ("regular-tree:3", 6)] {
        let w = window(name, r);
        for k in 0..=3 {
            let m = removal_set(&w, k).unwrap();
            let e = Entourage::new(&w, &m).unwrap();
            let rel = relation_matrix(&w, &m);
            let n = w.len();
            for i in 0..n {
                assert!(rel[i][i]);
                for j in 0..n {
                    assert_eq!(rel[i][j], e.related(VertexId::new(i), VertexId::new(j)), "{name}");
                    assert_eq!(rel[i][j], rel[j][i]);
                }
            }
            // v ∘ v = v, with rows packed into bit words
            let rows: Vec<Vec<u64>> = rel
                .iter()
                .map(|row| {
                    let mut bits = vec![0u64; n.div_ceil(64)];
                    for (j, _) in row.iter().enumerate().filter(|(_, &b)| b) {
                        bits[j / 64] |= 1 << (j % 64);
                    }
                    bits
                })
                .collect();
            for i in 0..n {
                let mut composed = vec![0u64; rows[i].len()];
                for x in (0..n).filter(|&x| rel[i][x]) {
                    composed.iter_mut().zip(&rows[x]).for_each(|(c, r)| *c |= r);
                }
                assert_eq!(composed, rows[i], "{name}");
            }
        }
    }
}

#[test]
fn larger_removals_give_finer_entourages() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = window("grid2d", 6);
    let inner: Vec<EdgeId> = w.edges().filter(|&(_, u, v)| w.distance(u).max(w.distance(v)) <= 4).map(|(e, _, _)| e).collect();
    for _ in 0..100 {
        let pick = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(0..12);
            RemovalSet::from_edges(&w, inner.choose_multiple(rng, k).copied()).unwrap()
        };
        let (m, n) = (pick(&mut rng), pick(&mut rng));
        let both = m.union(&w, &n).unwrap();
        let (pm, pn, pb) = (components(&w, &m).unwrap(), components(&w, &n).unwrap(), components(&w, &both).unwrap());
        for u in w.vertices() {
            for v in w.vertices() {
                if pb.same_component(u, v) {
                    assert!(pm.same_component(u, v) && pn.same_component(u, v));
                }
            }
        }
    }
}

#[test]
fn membership_agrees_with_containment() {
    // once ∂A ⊆ M_d, the depth-d component lies entirely in A or in its complement
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["line", "grid2d", "free-group:2"] {
        let w = window(name, 7);
        let sys = EndSystem::new(w, 5).unwrap();
        let w = sys.window();
        let threads = sys.threads();
        for _ in 0..40 {
            let a = random_inner_set(w, &mut rng, 4);
            let (pa, pc) = (PreparedSet::new(w, &a).unwrap(), PreparedSet::new(w, &a.complement()).unwrap());
            for t in &threads {
                let deep = &sys.component(t, 5).vertices;
                let inside = deep.is_subset(&a).unwrap();
                assert!(inside || deep.is_disjoint(&a).unwrap());
                assert_eq!(pa.contains(&sys, t).unwrap(), inside, "{name}");
                assert_eq!(pc.contains(&sys, t).unwrap(), !inside);
            }
            assert_eq!(membership(&sys, &threads[0], &a).unwrap(), pa.contains(&sys, &threads[0]).unwrap());
        }
    }
}

#[test]
fn ultrafilter_axioms_on_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let w = window("free-group:2", 6);
    let sys = EndSystem::new(w, 3).unwrap();
    let w = sys.window();
    let mut family: Vec<VertexSet> = (0..10).map(|_| random_inner_set(w, &mut rng, 2)).collect();
    let extra: Vec<VertexSet> = family.iter().map(|a| a.complement()).collect();
    family.extend(extra);
    family.push(family[0].intersection(&family[1]).unwrap());
    family.push(family[11].intersection(&family[12]).unwrap());
    let prepared = PreparedFamily::new(w, &family).unwrap();
    for t in sys.threads() {
        let rep = prepared.check(&sys, &t).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }
}

#[test]
fn action_on_ends_composes_and_commutes_with_restriction() {
    let spec = GraphSpec::free_group(2).unwrap();
    let sys = EndSystem::new(Window::materialize(&spec, "e", 6).unwrap(), 4).unwrap();
    let g = GroupWord::parse(&spec, "a").unwrap();
    let h = GroupWord::parse(&spec, "B").unwrap();
    let gh = g.compose(&spec, &h);
    for t in sys.threads() {
        let direct = act_on_end(&sys, &gh, &t, 1).unwrap();
        let step = act_on_end(&sys, &g, &act_on_end(&sys, &h, &t, 2).unwrap(), 1).unwrap();
        assert_eq!(direct, step);
        let high = act_on_end(&sys, &g, &t, 3).unwrap();
        assert_eq!(high.truncate(1), act_on_end(&sys, &g, &t.truncate(2), 1).unwrap());
    }
}

#[test]
fn translations_are_automorphisms() {
    for (name, word) in [("grid2d", "xxY"), ("free-group:2", "aB"), ("dihedral", "st"), ("free-product:2,3", "st")] {
        let w = window(name, 5);
        let g = GroupWord::parse(w.spec(), word).unwrap();
        assert_eq!(automorphism_violations(&w, &g).unwrap(), 0, "{name}");
        let ball = w.ball_around_base(2);
        let moved = act_on_set(&w, &g, &ball).unwrap();
        assert_eq!(moved.len(), ball.len());
        assert_eq!(act_on_set(&w, &g.inverse(w.spec()), &moved).unwrap(), ball);
    }
}

/// A random graph together with automorphisms: disjoint copies of a few
/// small motifs, so permuting equal copies and rotating cycles are symmetries.
fn random_symmetric_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let motif_len: usize = rng.gen_range(1..5);
    let cycle = motif_len >= 3 && rng.gen_bool(0.5);
    let copies = rng.gen_range(1..6);
    let n = motif_len * copies;
    let mut edges = Vec::new();
    for c in 0..copies {
        let base = c * motif_len;
        for i in 0..motif_len.saturating_sub(1) {
            edges.push((base + i, base + i + 1));
        }
        if cycle {
            edges.push((base + motif_len - 1, base));
        }
    }
    let mut perms = Vec::new();
    for _ in 0..rng.gen_range(1..4) {
        let mut order: Vec<usize> = (0..copies).collect();
        order.shuffle(rng);
        let reverse = rng.gen_bool(0.5);
        perms.push(
            (0..n)
                .map(|v| {
                    let (c, i) = (v / motif_len, v % motif_len);
                    let j = if reverse { motif_len - 1 - i } else { i };
                    order[c] * motif_len + j
                })
                .collect(),
        );
    }
    // relabel vertices so classes are not contiguous
    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(rng);
    let edges = edges.into_iter().map(|(u, v)| (relabel[u], relabel[v])).collect();
    let perms = perms
        .into_iter()
        .map(|p: Vec<usize>| {
            let mut q = vec![0; n];
            for v in 0..n {
                q[relabel[v]] = relabel[p[v]];
            }
            q
        })
        .collect();
    (n, edges, perms)
}

#[test]
fn collapse_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let (n, edges, perms) = random_symmetric_graph(&mut rng);
        let c = collapse_components(n, &edges, &perms).unwrap();
        for (p, q) in perms.iter().zip(&c.induced) {
            for v in 0..n {
                assert_eq!(c.projection[p[v]], q[c.projection[v]]);
            }
        }
        let sizes: BTreeMap<usize, usize> = c.classes.iter().fold(BTreeMap::new(), |mut m, cl| {
            *m.entry(cl.len()).or_default() += 1;
            m
        });
        assert_eq!(sizes.values().sum::<usize>(), c.classes.len());
    }
}

proptest! {
    #[test]
    fn balls_compose(r in 0u32..3, s in 0u32..3, seed in any::<u64>()) {
        let w = window("free-product:2,3", 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_inner_set(&w, &mut rng, 2);
        let twice = w.ball(&w.ball(&a, r).unwrap().members, s).unwrap().members;
        prop_assert_eq!(twice, w.ball(&a, r + s).unwrap().members);
    }
}
