//! Reference implementations used to check library output. They work on
//! plain boolean matrices and share no code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, VecDeque};

use flipkit::graph::ExtDist;
use flipkit::Graph;

pub type Adj = Vec<Vec<bool>>;

/// `None` is an infinite distance.
pub type Dist = Option<u32>;

pub fn adj(g: &Graph) -> Adj {
    let n = g.n();
    (0..n).map(|u| (0..n).map(|v| u != v && g.has_edge(u, v)).collect()).collect()
}

pub fn from_mask(n: usize, mask: u64) -> Adj {
    let mut a = vec![vec![false; n]; n];
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                a[u][v] = true;
                a[v][u] = true;
            }
            bit += 1;
        }
    }
    a
}

pub fn to_graph(a: &Adj) -> Graph {
    let n = a.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if a[u][v] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complement(a: &Adj) -> Adj {
    let n = a.len();
    (0..n).map(|u| (0..n).map(|v| u != v && !a[u][v]).collect()).collect()
}

pub fn bfs(a: &Adj, s: usize) -> Vec<Dist> {
    let mut d = vec![None; a.len()];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in 0..a.len() {
            if a[u][v] && d[v].is_none() {
                d[v] = Some(d[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    d
}

pub fn apsp(a: &Adj) -> Vec<Vec<Dist>> {
    (0..a.len()).map(|s| bfs(a, s)).collect()
}

/// Largest distance; `None` if disconnected.
pub fn diameter(a: &Adj) -> Dist {
    let mut best = 0;
    for row in apsp(a) {
        for d in row {
            best = best.max(d?);
        }
    }
    Some(best)
}

pub fn leq(a: Dist, b: Dist) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

pub fn dmax(a: Dist, b: Dist) -> Dist {
    if leq(a, b) {
        b
    } else {
        a
    }
}

pub fn dadd(a: Dist, b: Dist) -> Dist {
    Some(a? + b?)
}

pub fn ext(d: ExtDist) -> Dist {
    d.finite()
}

pub fn ext_matrix(m: &[Vec<ExtDist>]) -> Vec<Vec<Dist>> {
    m.iter().map(|r| r.iter().map(|&d| ext(d)).collect()).collect()
}

/// Complements adjacency between parts `i` and `j` whenever `flip(i, j)`.
pub fn flip(a: &Adj, labels: &[usize], flip: impl Fn(usize, usize) -> bool) -> Adj {
    let n = a.len();
    let mut out = a.clone();
    for u in 0..n {
        for v in 0..n {
            if u != v && flip(labels[u].min(labels[v]), labels[u].max(labels[v])) {
                out[u][v] = !a[u][v];
            }
        }
    }
    out
}

/// Every flip over a labelling with `k` labels.
pub fn all_flips(a: &Adj, labels: &[usize], k: usize) -> Vec<Adj> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            flip(a, labels, |i, j| {
                pairs.iter().position(|&p| p == (i, j)).is_some_and(|b| mask >> b & 1 == 1)
            })
        })
        .collect()
}

/// The flip distance: the maximum distance over every flip.
pub fn dist_p(a: &Adj, labels: &[usize], k: usize) -> Vec<Vec<Dist>> {
    let n = a.len();
    let mut out = vec![vec![Some(0); n]; n];
    for h in all_flips(a, labels, k) {
        let d = apsp(&h);
        for u in 0..n {
            for v in 0..n {
                out[u][v] = dmax(out[u][v], d[u][v]);
            }
        }
    }
    out
}

/// Relabels to `0..k` by first occurrence; returns the labels and `k`.
pub fn canonical(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = BTreeMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

/// Labels of the partition defined by `s`: members of `s` alone, others
/// grouped by their adjacency to `s`.
pub fn definable_labels(a: &Adj, s: &[usize]) -> (Vec<usize>, usize) {
    let n = a.len();
    let mut key: BTreeMap<(usize, Vec<bool>), usize> = BTreeMap::new();
    let raw: Vec<usize> = (0..n)
        .map(|v| {
            let k = match s.iter().position(|&x| x == v) {
                Some(i) => (i + 1, vec![]),
                None => (0, s.iter().map(|&x| a[v][x]).collect()),
            };
            let next = key.len();
            *key.entry(k).or_insert(next)
        })
        .collect();
    canonical(&raw)
}

/// Parts as sorted vertex lists, sorted.
pub fn parts_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &l) in labels.iter().enumerate() {
        m.entry(l).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = m.into_values().collect();
    out.sort();
    out
}

pub fn sorted_parts(parts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.sort_unstable();
            p
        })
        .collect();
    out.sort();
    out
}

pub fn ball(a: &Adj, v: usize, r: u32) -> Vec<bool> {
    bfs(a, v).iter().map(|d| d.is_some_and(|d| d <= r)).collect()
}

pub fn ball_of_set(a: &Adj, src: &[usize], r: u32) -> Vec<bool> {
    let mut out = vec![false; a.len()];
    for &s in src {
        for (o, b) in out.iter_mut().zip(ball(a, s, r)) {
            *o |= b;
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `π(k)` for every `k ≤ n`: the most distinct neighbourhood traces on a
/// `k`-set.
pub fn shatter_table(a: &Adj) -> Vec<u64> {
    let n = a.len();
    let mut best = vec![0; n + 1];
    for mask in 0u32..1 << n {
        let mut traces: Vec<u32> = (0..n)
            .map(|v| (0..n).filter(|&x| mask >> x & 1 == 1 && a[v][x]).fold(0, |t, x| t | 1 << x))
            .collect();
        traces.sort_unstable();
        traces.dedup();
        let k = mask.count_ones() as usize;
        best[k] = best[k].max(traces.len() as u64);
    }
    best
}
