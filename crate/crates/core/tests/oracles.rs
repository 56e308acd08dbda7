// Brute-force references for windows and component partitions. They use only
// key-level neighbor queries and hash maps, never the window's own indices.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use endscope_core::ends::{components, removal_set, restriction_map, EndSystem};
use endscope_core::{GraphSpec, Window};

const CATALOG: &[&str] = &["line", "grid2d", "free-group:2", "dihedral", "free-product:2,3", "regular-tree:3"];

fn spec(name: &str) -> GraphSpec {
    GraphSpec::parse_catalog(name).unwrap()
}

/// Distances from the basepoint by plain BFS.
fn bfs_ball(spec: &GraphSpec, base: &str, radius: u32) -> HashMap<String, u32> {
    let base = spec.canonicalize(base).unwrap();
    let mut dist = HashMap::from([(base.as_str().to_string(), 0)]);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.as_str()];
        if d == radius {
            continue;
        }
        for n in spec.neighbors(&v).unwrap() {
            if !dist.contains_key(n.as_str()) {
                dist.insert(n.as_str().to_string(), d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

/// Components of the ball minus the edges meeting `B_r`, as key sets with a
/// flag for reaching distance `R`.
fn flood_fill(spec: &GraphSpec, dist: &HashMap<String, u32>, r: u32, radius: u32) -> BTreeSet<(BTreeSet<String>, bool)> {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut out = BTreeSet::new();
    let mut keys: Vec<&String> = dist.keys().collect();
    keys.sort();
    for start in keys {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = BTreeSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(v) = stack.pop() {
            if dist[&v] <= r {
                continue;
            }
            let key = spec.canonicalize(&v).unwrap();
            for n in spec.neighbors(&key).unwrap() {
                let n = n.as_str();
                let Some(&dn) = dist.get(n) else { continue };
                if dn <= r {
                    continue;
                }
                if seen.insert(dist.get_key_value(n).unwrap().0) {
                    comp.insert(n.to_string());
                    stack.push(n.to_string());
                }
            }
        }
        let touches = comp.iter().any(|k| dist[k] == radius);
        out.insert((comp, touches));
    }
    out
}

fn engine_partition(w: &Window, r: u32) -> BTreeSet<(BTreeSet<String>, bool)> {
    let p = components(w, &removal_set(w, r).unwrap()).unwrap();
    p.components()
        .iter()
        .map(|c| {
            let keys = w.keys_of(&c.vertices).into_iter().map(|k| k.as_str().to_string()).collect();
            (keys, c.frontier_touching)
        })
        .collect()
}

#[test]
fn windows_match_bfs() {
    for (name, radius) in [("line", 9), ("grid2d", 9), ("free-group:2", 6), ("dihedral", 9), ("free-product:2,3", 8), ("regular-tree:3", 7)] {
        let s = spec(name);
        let base = s.default_basepoint().unwrap();
        let w = Window::materialize(&s, base.as_str(), radius).unwrap();
        let dist = bfs_ball(&s, base.as_str(), radius);
        assert_eq!(w.len(), dist.len(), "{name}");
        for v in w.vertices() {
            assert_eq!(dist[w.key(v).as_str()], w.distance(v), "{name} {}", w.key(v));
            // neighbor relation is symmetric
            for &(u, _) in w.neighbors(v) {
                assert!(w.neighbors(u).iter().any(|&(x, _)| x == v));
            }
        }
    }
}

#[test]
fn ball_sizes() {
    // closed forms: 2R+1, 2R²+2R+1, 2·3^R - 1, 3·2^R - 2
    for r in 1..=6u32 {
        let size = |name: &str| Window::materialize(&spec(name), spec(name).default_basepoint().unwrap().as_str(), r).unwrap().len();
        assert_eq!(size("line"), 2 * r as usize + 1);
        assert_eq!(size("dihedral"), 2 * r as usize + 1);
        assert_eq!(size("grid2d"), (2 * r * r + 2 * r + 1) as usize);
        assert_eq!(size("free-group:2"), 2 * 3usize.pow(r) - 1);
        assert_eq!(size("regular-tree:3"), 3 * 2usize.pow(r) - 2);
    }
}

#[test]
fn components_match_flood_fill() {
    for (name, radius) in [("line", 10), ("grid2d", 12), ("free-group:2", 8), ("dihedral", 10), ("free-product:2,3", 10), ("regular-tree:3", 10)] {
        let s = spec(name);
        let base = s.default_basepoint().unwrap();
        let w = Window::materialize(&s, base.as_str(), radius).unwrap();
        assert!(w.len() <= 20_000);
        let dist = bfs_ball(&s, base.as_str(), radius);
        for r in 0..=3 {
            assert_eq!(engine_partition(&w, r), flood_fill(&s, &dist, r, radius), "{name} r={r}");
        }
    }
}

#[test]
fn free_group_counts_are_frozen() {
    // flood-fill values: 4·3^r unbounded components of Γ ∖ M_r
    let s = spec("free-group:2");
    let dist = bfs_ball(&s, "e", 8);
    let counts: Vec<usize> = (0..=3).map(|r| flood_fill(&s, &dist, r, 8).iter().filter(|c| c.1).count()).collect();
    assert_eq!(counts, [4, 12, 36, 108]);
    let grid = spec("grid2d");
    let dist = bfs_ball(&grid, "(0,0)", 8);
    let counts: Vec<usize> = (0..=3).map(|r| flood_fill(&grid, &dist, r, 8).iter().filter(|c| c.1).count()).collect();
    assert_eq!(counts, [1, 1, 1, 1]);
}

#[test]
fn restriction_maps_are_functorial() {
    for name in CATALOG {
        let s = spec(name);
        let w = Window::materialize(&s, s.default_basepoint().unwrap().as_str(), 6).unwrap();
        let parts: Vec<_> = (0..=3).map(|r| components(&w, &removal_set(&w, r).unwrap()).unwrap()).collect();
        for a in 0..=3 {
            assert!(restriction_map(&parts[a], &parts[a]).unwrap().is_identity());
            for b in a..=3 {
                for c in b..=3 {
                    let direct = restriction_map(&parts[c], &parts[a]).unwrap();
                    let via = restriction_map(&parts[b], &parts[a]).unwrap().compose(&restriction_map(&parts[c], &parts[b]).unwrap());
                    assert_eq!(direct, via, "{name} {a} {b} {c}");
                }
            }
        }
        let sys = EndSystem::new(w, 3).unwrap();
        for t in sys.threads() {
            assert!(sys.is_valid(&t));
            for d in 0..3 {
                let short = t.truncate(d);
                assert!(sys.is_valid(&short));
                assert!(sys.threads_at(d).contains(&short), "{name}");
            }
        }
    }
}

#[test]
fn thread_ids_name_their_components() {
    let s = spec("free-group:2");
    let w = Window::materialize(&s, "e", 6).unwrap();
    let sys = EndSystem::new(w, 2).unwrap();
    let ids: BTreeMap<String, usize> = sys.threads().iter().map(|t| (t.id().as_str().to_string(), t.depth() as usize)).collect();
    assert_eq!(ids.len(), 36);
    // each depth-2 unbounded component is a subtree rooted at a reduced word of length 3
    assert!(ids.keys().all(|k| k.len() == 3));
}
