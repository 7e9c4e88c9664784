//! Flip metrics: `dist_P`, `dist_S` and `dist_F`, computed exactly by
//! enumerating flips.
//!
//! `dist_P(u, v)` is the largest distance between `u` and `v` over all
//! `P`-flips, `dist_S` is `dist_{P_S}`, and a family `F` takes the pointwise
//! maximum over its members. Balls are the matching intersections of flip
//! balls.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::flip::{check_part_cap, definable_partition, Flipper, Partition};
use crate::graph::{ExtDist, Graph, VertexSet};
use crate::par;

/// A family of vertex sets, optionally `t`-uniform.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    sets: Vec<Vec<usize>>,
    uniform_size: Option<usize>,
}

impl SetFamily {
    /// Normalises each member (sorted, no repeats). The family is recorded
    /// as `t`-uniform when it is nonempty and all members have size `t`.
    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        let sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let uniform_size = match sets.first() {
            Some(first) if sets.iter().all(|s| s.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        SetFamily { sets, uniform_size }
    }

    /// A family that must be `t`-uniform.
    pub fn uniform(t: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut f = SetFamily::new(sets);
        if let Some(s) = f.sets.iter().find(|s| s.len() != t) {
            return Err(Error::domain(format!("set {s:?} has size {}, expected {t}", s.len())));
        }
        f.uniform_size = Some(t);
        Ok(f)
    }

    pub fn empty() -> Self {
        SetFamily { sets: Vec::new(), uniform_size: None }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn uniform_size(&self) -> Option<usize> {
        self.uniform_size
    }

    /// `∪F` as a vertex set over `0..n`.
    pub fn union(&self, n: usize) -> VertexSet {
        let mut u = FixedBitSet::with_capacity(n);
        self.sets.iter().flatten().filter(|&&v| v < n).for_each(|&v| u.insert(v));
        u
    }
}

/// Exact flip-metric queries over one graph.
#[derive(Clone, Copy, Debug)]
pub struct FlipMetric<'g> {
    graph: &'g Graph,
    max_parts: usize,
}

fn elementwise_max(mut a: Vec<Vec<ExtDist>>, b: Vec<Vec<ExtDist>>) -> Vec<Vec<ExtDist>> {
    if a.is_empty() {
        return b;
    }
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x = (*x).max(y);
        }
    }
    a
}

impl<'g> FlipMetric<'g> {
    pub fn new(graph: &'g Graph, max_parts: usize) -> Self {
        FlipMetric { graph, max_parts }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    fn definable(&self, s: &[usize]) -> Result<Partition> {
        let p = definable_partition(self.graph, s)?;
        if check_part_cap(p.len(), self.max_parts).is_err() {
            return Err(Error::CapExceeded {
                what: "number of parts of P_S (use a smaller defining set)",
                value: p.len(),
                cap: self.max_parts,
                flag: "--max-parts / FLIPKIT_MAX_PARTS",
            });
        }
        Ok(p)
    }

    /// `dist_P(u, v)`.
    pub fn dist_partition(&self, p: &Partition, u: usize, v: usize) -> Result<ExtDist> {
        self.graph.check_vertex(u)?;
        self.graph.check_vertex(v)?;
        let flipper = Flipper::new(self.graph, p)?;
        check_part_cap(p.len(), self.max_parts)?;
        if u == v {
            return Ok(ExtDist::ZERO);
        }
        Ok(par::fold_range(
            flipper.spec_count(),
            || ExtDist::ZERO,
            |acc, i| acc.max(flipper.apply_index(i).distances_from(u)[v]),
            ExtDist::max,
        ))
    }

    /// The full `dist_P` matrix: one BFS per (flip, source), folded by max.
    pub fn all_pairs_partition(&self, p: &Partition) -> Result<Vec<Vec<ExtDist>>> {
        let flipper = Flipper::new(self.graph, p)?;
        check_part_cap(p.len(), self.max_parts)?;
        Ok(par::fold_range(
            flipper.spec_count(),
            Vec::new,
            |acc, i| elementwise_max(acc, flipper.apply_index(i).all_pairs()),
            elementwise_max,
        ))
    }

    /// `Ball^r_P(v)`: the intersection of `Ball^r_H(v)` over all `P`-flips `H`.
    pub fn ball_partition(&self, p: &Partition, v: usize, r: u32) -> Result<VertexSet> {
        self.graph.check_vertex(v)?;
        let flipper = Flipper::new(self.graph, p)?;
        check_part_cap(p.len(), self.max_parts)?;
        let mut src = FixedBitSet::with_capacity(self.graph.n());
        src.insert(v);
        let all = self.graph.all_vertices();
        Ok(par::fold_range(
            flipper.spec_count(),
            || all.clone(),
            |mut acc, i| {
                acc.intersect_with(&flipper.apply_index(i).ball_of_set(&src, r));
                acc
            },
            |mut a, b| {
                a.intersect_with(&b);
                a
            },
        ))
    }

    /// `dist_S(u, v) = dist_{P_S}(u, v)`.
    pub fn dist_definable(&self, s: &[usize], u: usize, v: usize) -> Result<ExtDist> {
        let p = self.definable(s)?;
        self.dist_partition(&p, u, v)
    }

    pub fn all_pairs_definable(&self, s: &[usize]) -> Result<Vec<Vec<ExtDist>>> {
        let p = self.definable(s)?;
        self.all_pairs_partition(&p)
    }

    pub fn ball_definable(&self, s: &[usize], v: usize, r: u32) -> Result<VertexSet> {
        let p = self.definable(s)?;
        self.ball_partition(&p, v, r)
    }

    /// Members of `f`, with the empty family standing for `{∅}`.
    fn members(f: &SetFamily) -> Vec<&[usize]> {
        if f.is_empty() {
            vec![&[]]
        } else {
            f.sets().iter().map(Vec::as_slice).collect()
        }
    }

    /// `dist_F(u, v) = max_{S ∈ F} dist_S(u, v)`.
    pub fn dist_family(&self, f: &SetFamily, u: usize, v: usize) -> Result<ExtDist> {
        let mut best = ExtDist::ZERO;
        for s in Self::members(f) {
            best = best.max(self.dist_definable(s, u, v)?);
            if best == ExtDist::Inf {
                break;
            }
        }
        Ok(best)
    }

    pub fn all_pairs_family(&self, f: &SetFamily) -> Result<Vec<Vec<ExtDist>>> {
        let mut acc = Vec::new();
        for s in Self::members(f) {
            acc = elementwise_max(acc, self.all_pairs_definable(s)?);
        }
        Ok(acc)
    }

    /// `Ball^r_F(v) = ∩_{S ∈ F} Ball^r_S(v)`.
    pub fn ball_family(&self, f: &SetFamily, v: usize, r: u32) -> Result<VertexSet> {
        let mut acc = self.graph.all_vertices();
        for s in Self::members(f) {
            acc.intersect_with(&self.ball_definable(s, v, r)?);
        }
        Ok(acc)
    }

    /// `Ball^r_F(A) = ∪_{v ∈ A} Ball^r_F(v)`.
    pub fn ball_family_of_set(&self, f: &SetFamily, a: &VertexSet, r: u32) -> Result<VertexSet> {
        let partitions = Self::members(f)
            .into_iter()
            .map(|s| self.definable(s))
            .collect::<Result<Vec<_>>>()?;
        let sources: Vec<usize> = a.ones().collect();
        let balls = par::map(&sources, |&v| -> Result<VertexSet> {
            let mut acc = self.graph.all_vertices();
            for p in &partitions {
                acc.intersect_with(&self.ball_partition(p, v, r)?);
            }
            Ok(acc)
        });
        let mut out = FixedBitSet::with_capacity(self.graph.n());
        for b in balls {
            out.union_with(&b?);
        }
        Ok(out)
    }
}
