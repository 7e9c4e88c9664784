//! Deterministic graph generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path edges in range")
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::domain(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn clique(n: usize) -> Graph {
    Graph::complete(n)
}

/// Star with centre 0 and `n - 1` leaves.
pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::from_edges(n, &edges).expect("star edges in range")
}

/// `rows × cols` grid, vertex `(i, j)` numbered `i * cols + j`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = i * cols + j;
            if j + 1 < cols {
                edges.push((v, v + 1));
            }
            if i + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges).expect("grid edges in range")
}

pub fn hypercube(d: u32) -> Result<Graph> {
    if d > 12 {
        return Err(Error::domain(format!("hypercube dimension {d} too large (max 12)")));
    }
    let n = 1usize << d;
    let edges: Vec<_> = (0..n)
        .flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b))))
        .filter(|(u, v)| u < v)
        .collect();
    Graph::from_edges(n, &edges)
}

/// Erdős–Rényi `G(n, p)` drawn from a ChaCha8 stream seeded by `seed`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gnp_with(n, p, &mut rng)
}

pub fn gnp_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("edge probability {p} outside [0, 1]")));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.set_edge(u, v, true);
            }
        }
    }
    Ok(g)
}

/// Half-graph: `a_i = i - 1` and `b_j = n + j - 1`, with `a_i b_j` an edge
/// iff `i ≤ j`.
pub fn halfgraph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|i| (i..n).map(move |j| (i, n + j))).collect();
    Graph::from_edges(2 * n, &edges).expect("half-graph edges in range")
}

/// A random partition of `0..n` into at most `k` labels.
pub fn random_labels<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..k.max(1))).collect()
}

/// An RNG for the `index`-th instance of a sweep seeded by `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_examples() {
        assert_eq!(path(5).edge_count(), 4);
        assert_eq!(cycle(5).unwrap().edge_count(), 5);
        assert_eq!(star(5).degree(0), 4);
        assert_eq!(grid(3, 4).edge_count(), 17);
        assert_eq!(hypercube(3).unwrap().edge_count(), 12);
        let h = halfgraph(2);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 2), (0, 3), (1, 3)]);
        assert_eq!(gnp(8, 0.5, 1).unwrap(), gnp(8, 0.5, 1).unwrap());
        assert!(gnp(3, 1.5, 0).is_err());
        assert_eq!(gnp(6, 1.0, 9).unwrap(), clique(6));
    }
}
