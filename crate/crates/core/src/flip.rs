//! Partitions, flip specs and the flips they define.
//!
//! A `P`-flip is fully described by a graph on the parts of `P` with loops
//! allowed: the pair `{i, j}` is present iff adjacency between part `i` and
//! part `j` is complemented. [`FlipSpec`] stores exactly that pair set over
//! the canonical part order of a [`Partition`].

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::HARD_MAX_PARTS;

/// A partition of `0..n` into nonempty parts.
///
/// Canonical form: every part is sorted, parts are ordered by their minimum
/// vertex. Two partitions are equal iff they have the same parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
    label: Vec<usize>,
}

impl Partition {
    /// Validates and canonicalises a list of parts.
    pub fn from_parts(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::domain(format!("part {i} is empty")));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::domain(format!("vertex {v} out of range for n = {n}")));
                }
                if label[v] != usize::MAX {
                    return Err(Error::domain(format!("vertex {v} appears in two parts")));
                }
                label[v] = i;
            }
        }
        if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::domain(format!("vertex {v} is not covered by the partition")));
        }
        Ok(Partition::from_labels(&label))
    }

    /// Builds the partition whose parts are the classes of equal labels.
    pub fn from_labels<L: Ord + Clone>(labels: &[L]) -> Self {
        // First occurrence order equals ordering by minimum vertex.
        let mut index: BTreeMap<L, usize> = BTreeMap::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut label = Vec::with_capacity(labels.len());
        for (v, l) in labels.iter().enumerate() {
            let next = parts.len();
            let i = *index.entry(l.clone()).or_insert(next);
            if i == next {
                parts.push(Vec::new());
            }
            parts[i].push(v);
            label.push(i);
        }
        Partition { parts, label }
    }

    /// The one-part partition `{V}` (no parts when `n = 0`).
    pub fn trivial(n: usize) -> Self {
        Partition::from_labels(&vec![0u8; n])
    }

    pub fn singletons(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.label.len()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    /// Index of the part containing `v`.
    pub fn part_of(&self, v: usize) -> usize {
        self.label[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.label
    }

    pub fn masks(&self) -> Vec<VertexSet> {
        self.parts
            .iter()
            .map(|p| {
                let mut m = FixedBitSet::with_capacity(self.n());
                p.iter().for_each(|&v| m.insert(v));
                m
            })
            .collect()
    }

    /// `true` iff every part of `self` lies inside a part of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n() == coarser.n()
            && self
                .parts
                .iter()
                .all(|p| p.iter().all(|&v| coarser.part_of(v) == coarser.part_of(p[0])))
    }

    /// The coarsest common refinement: parts are the nonempty pairwise
    /// intersections of parts of `self` and `other`.
    pub fn refine(&self, other: &Partition) -> Result<Partition> {
        if self.n() != other.n() {
            return Err(Error::domain(format!(
                "partitions of different universes ({} vs {})",
                self.n(),
                other.n()
            )));
        }
        let labels: Vec<(usize, usize)> = (0..self.n()).map(|v| (self.part_of(v), other.part_of(v))).collect();
        Ok(Partition::from_labels(&labels))
    }
}

/// Number of unordered part pairs, loops included: `p(p+1)/2`.
pub fn pair_count(parts: usize) -> usize {
    parts * (parts + 1) / 2
}

/// The canonical pair order `(0,0), (0,1), .., (0,p-1), (1,1), ..`.
pub fn pair_order(parts: usize) -> Vec<(usize, usize)> {
    (0..parts).flat_map(|i| (i..parts).map(move |j| (i, j))).collect()
}

/// The set of part pairs whose adjacency a flip complements.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct FlipSpec {
    pairs: BTreeSet<(usize, usize)>,
}

impl FlipSpec {
    pub fn identity() -> Self {
        FlipSpec::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        FlipSpec {
            pairs: pairs.into_iter().map(|(i, j)| (i.min(j), i.max(j))).collect(),
        }
    }

    /// The flip spec whose membership bits, read in canonical pair order, form
    /// the binary number `index`.
    pub fn from_index(parts: usize, index: u64) -> Self {
        FlipSpec {
            pairs: pair_order(parts)
                .into_iter()
                .enumerate()
                .filter(|(b, _)| index >> b & 1 == 1)
                .map(|(_, p)| p)
                .collect(),
        }
    }

    /// Inverse of [`FlipSpec::from_index`].
    pub fn index(&self, parts: usize) -> u64 {
        pair_order(parts)
            .into_iter()
            .enumerate()
            .filter(|(_, p)| self.pairs.contains(p))
            .fold(0, |acc, (b, _)| acc | 1 << b)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i.min(j), i.max(j)))
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.pairs.insert((i.min(j), i.max(j)));
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Applying `self` then `other` equals applying their symmetric
    /// difference.
    pub fn compose(&self, other: &FlipSpec) -> FlipSpec {
        FlipSpec {
            pairs: self.pairs.symmetric_difference(&other.pairs).copied().collect(),
        }
    }

    pub fn validate(&self, parts: usize) -> Result<()> {
        match self.pairs.iter().find(|&&(_, j)| j >= parts) {
            Some(&(i, j)) => Err(Error::domain(format!("pair ({i},{j}) refers to a part >= {parts}"))),
            None => Ok(()),
        }
    }
}

/// Precomputed part masks for applying many specs over one partition.
#[derive(Clone, Debug)]
pub struct Flipper<'g> {
    graph: &'g Graph,
    partition: &'g Partition,
    masks: Vec<VertexSet>,
}

impl<'g> Flipper<'g> {
    pub fn new(graph: &'g Graph, partition: &'g Partition) -> Result<Self> {
        if partition.n() != graph.n() {
            return Err(Error::domain(format!(
                "partition covers {} vertices, graph has {}",
                partition.n(),
                graph.n()
            )));
        }
        Ok(Flipper {
            graph,
            partition,
            masks: partition.masks(),
        })
    }

    pub fn parts(&self) -> usize {
        self.partition.len()
    }

    /// Number of distinct specs, `2^(p(p+1)/2)`.
    pub fn spec_count(&self) -> u64 {
        1u64 << pair_count(self.parts())
    }

    /// Applies the flip spec with the given counter index.
    pub fn apply_index(&self, index: u64) -> Graph {
        let p = self.parts();
        let mut toggles = vec![FixedBitSet::with_capacity(self.graph.n()); p];
        let mut bit = 0;
        for i in 0..p {
            for j in i..p {
                if index >> bit & 1 == 1 {
                    toggles[i].union_with(&self.masks[j]);
                    if i != j {
                        toggles[j].union_with(&self.masks[i]);
                    }
                }
                bit += 1;
            }
        }
        self.apply_toggles(&toggles)
    }

    pub fn apply(&self, spec: &FlipSpec) -> Result<Graph> {
        spec.validate(self.parts())?;
        let mut toggles = vec![FixedBitSet::with_capacity(self.graph.n()); self.parts()];
        for (i, j) in spec.pairs() {
            toggles[i].union_with(&self.masks[j]);
            if i != j {
                toggles[j].union_with(&self.masks[i]);
            }
        }
        Ok(self.apply_toggles(&toggles))
    }

    fn apply_toggles(&self, toggles: &[FixedBitSet]) -> Graph {
        let mut out = self.graph.clone();
        for u in 0..self.graph.n() {
            let t = &toggles[self.partition.part_of(u)];
            if !t.is_clear() {
                out.xor_row(u, t);
            }
        }
        out
    }
}

/// The `P`-flip of `g` described by `spec`: for `u` in part `i` and `v` in
/// part `j`, `u ≠ v`, adjacency is complemented iff `{i, j} ∈ spec`.
pub fn apply_flip(g: &Graph, p: &Partition, spec: &FlipSpec) -> Result<Graph> {
    Flipper::new(g, p)?.apply(spec)
}

/// `P_S`: a singleton for each `s ∈ S`, and the remaining vertices grouped by
/// their neighbourhood in `S`. Empty classes are dropped.
pub fn definable_partition(g: &Graph, s: &[usize]) -> Result<Partition> {
    let mut in_s = FixedBitSet::with_capacity(g.n());
    for &v in s {
        g.check_vertex(v)?;
        in_s.insert(v);
    }
    // Label: (0, v) for members of S, (1, trace) for the others.
    let labels: Vec<(u8, Vec<usize>)> = (0..g.n())
        .map(|v| {
            if in_s.contains(v) {
                (0, vec![v])
            } else {
                (1, g.neighbors(v).intersection(&in_s).collect())
            }
        })
        .collect();
    Ok(Partition::from_labels(&labels))
}

pub(crate) fn check_part_cap(parts: usize, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_MAX_PARTS);
    if parts > cap {
        Err(Error::CapExceeded {
            what: "number of parts",
            value: parts,
            cap,
            flag: "--max-parts / FLIPKIT_MAX_PARTS",
        })
    } else {
        Ok(())
    }
}

/// Streams every `P`-flip of `g` exactly once, as binary counters over the
/// canonical pair order.
pub fn enumerate_flips<'g>(
    g: &'g Graph,
    p: &'g Partition,
    max_parts: usize,
) -> Result<impl Iterator<Item = (FlipSpec, Graph)> + 'g> {
    check_part_cap(p.len(), max_parts)?;
    let flipper = Flipper::new(g, p)?;
    let parts = p.len();
    Ok((0..flipper.spec_count()).map(move |i| (FlipSpec::from_index(parts, i), flipper.apply_index(i))))
}

/// All partitions of `0..n` into exactly `k` parts, in lexicographic order of
/// their restricted growth strings.
pub fn partitions_with_parts(n: usize, k: usize) -> Vec<Partition> {
    fn go(pos: usize, used: usize, n: usize, k: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if pos == n {
            if used == k {
                out.push(Partition::from_labels(rgs));
            }
            return;
        }
        // Not enough positions left to open the missing blocks.
        if k - used > n - pos {
            return;
        }
        for b in 0..=used.min(k - 1) {
            rgs.push(b);
            go(pos + 1, used.max(b + 1), n, k, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Partition::trivial(0));
        }
        return out;
    }
    if k > n {
        return out;
    }
    go(0, 0, n, k, &mut Vec::with_capacity(n), &mut out);
    out
}
