//! Converting a partition metric into the distance of one concrete flip.
//!
//! Given `G` and a partition `P`, [`convert`] builds a refinement `P'` and a
//! `P'`-flip `G'` whose every edge `uv` satisfies `dist_P(u, v) ≤ 6`
//! (`≤ 3` inside a part), so that `Ball^r_{G'}(v) ⊆ Ball^{6r}_P(v)`.
//!
//! Per part `X`, adjacency inside `X` is complemented when the complement of
//! `G[X]` has diameter above 3. Per pair of parts, the bipartite graph
//! `G[X,Y]` is split by [`bipartite_flip`] into at most two pieces per side,
//! each block of which is flipped when its own diameter is at most 6.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flip::{apply_flip, definable_partition, pair_order, FlipSpec, Partition};
use crate::graph::{members, vertex_set, Bipartite, ExtDist, Graph};
use crate::par;

/// Diameter threshold inside a part.
pub const PART_DIAMETER: u32 = 3;
/// Diameter threshold for bipartite blocks.
pub const BLOCK_DIAMETER: u32 = 6;
/// Stretch of the definable-flip emulation check.
pub const EMULATION_STRETCH: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The structural case of a bipartite graph `B = (U, V, E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum BipartiteCase {
    /// `B` or its bipartite complement is connected.
    ConnectedOrComplement,
    /// `B` is the disjoint union of the bicliques `(U1, V1)` and `(U2, V2)`;
    /// the first one contains the lowest vertex.
    TwoBicliques {
        first: (Vec<usize>, Vec<usize>),
        second: (Vec<usize>, Vec<usize>),
    },
    /// On `side`, `v_minus` is isolated and `v_plus` is adjacent to the whole
    /// other side; `chosen` is the lowest vertex of the other side, if any.
    IsolatedAndDominating {
        side: Side,
        v_minus: usize,
        v_plus: usize,
        chosen: Option<usize>,
    },
}

impl BipartiteCase {
    pub fn tag(&self) -> &'static str {
        match self {
            BipartiteCase::ConnectedOrComplement => "connected_or_complement",
            BipartiteCase::TwoBicliques { .. } => "two_bicliques",
            BipartiteCase::IsolatedAndDominating { .. } => "isolated_and_dominating",
        }
    }

    /// Renames every vertex through `table`.
    pub fn relabel(&self, table: &[usize]) -> BipartiteCase {
        let map = |xs: &Vec<usize>| xs.iter().map(|&x| table[x]).collect::<Vec<_>>();
        match self {
            BipartiteCase::ConnectedOrComplement => BipartiteCase::ConnectedOrComplement,
            BipartiteCase::TwoBicliques { first, second } => BipartiteCase::TwoBicliques {
                first: (map(&first.0), map(&first.1)),
                second: (map(&second.0), map(&second.1)),
            },
            BipartiteCase::IsolatedAndDominating {
                side,
                v_minus,
                v_plus,
                chosen,
            } => BipartiteCase::IsolatedAndDominating {
                side: *side,
                v_minus: table[*v_minus],
                v_plus: table[*v_plus],
                chosen: chosen.map(|c| table[c]),
            },
        }
    }
}

fn components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        let comp: Vec<usize> = g
            .distances_from(s)
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_finite())
            .map(|(v, _)| v)
            .collect();
        comp.iter().for_each(|&v| seen[v] = true);
        out.push(comp);
    }
    out
}

/// Classifies `b`; connected inputs (or connected complements) give the
/// trivial case.
pub fn classify_bipartite(b: &Bipartite) -> Result<BipartiteCase> {
    if b.is_connected() || b.complement().is_connected() {
        return Ok(BipartiteCase::ConnectedOrComplement);
    }
    classify_degenerate(b)
}

/// Classifies a bipartite graph where both `b` and its bipartite complement
/// are disconnected. Errors if that precondition fails, or if neither case
/// applies (which would contradict the classification).
pub fn classify_degenerate(b: &Bipartite) -> Result<BipartiteCase> {
    if b.is_connected() || b.complement().is_connected() {
        return Err(Error::domain("bipartite graph or its complement is connected"));
    }
    if let Some(v_minus) = b.isolated().next() {
        let side_of = |v: usize| b.is_left(v);
        let same: Vec<usize> = (0..b.n()).filter(|&v| side_of(v) == side_of(v_minus)).collect();
        let other: Vec<usize> = (0..b.n()).filter(|&v| side_of(v) != side_of(v_minus)).collect();
        let v_plus = same
            .iter()
            .copied()
            .find(|&v| v != v_minus && other.iter().all(|&o| b.graph().has_edge(v, o)))
            .ok_or_else(|| {
                Error::domain(format!("isolated vertex {v_minus} but no vertex on its side dominates the other side"))
            })?;
        return Ok(BipartiteCase::IsolatedAndDominating {
            side: if side_of(v_minus) { Side::Left } else { Side::Right },
            v_minus,
            v_plus,
            chosen: other.first().copied(),
        });
    }
    let comps = components(b.graph());
    let split = |c: &Vec<usize>| -> (Vec<usize>, Vec<usize>) { c.iter().partition(|&&v| b.is_left(v)) };
    if comps.len() == 2 {
        let first = split(&comps[0]);
        let second = split(&comps[1]);
        let is_biclique =
            |(l, r): &(Vec<usize>, Vec<usize>)| l.iter().all(|&u| r.iter().all(|&v| b.graph().has_edge(u, v)));
        if is_biclique(&first) && is_biclique(&second) {
            return Ok(BipartiteCase::TwoBicliques { first, second });
        }
    }
    Err(Error::domain(format!(
        "degenerate bipartite graph with {} components fits no case",
        comps.len()
    )))
}

/// Output of [`bipartite_flip`]. Vertex ids are those of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteFlip {
    /// `(U1, U2)`; `U2` may be empty.
    pub left_split: (Vec<usize>, Vec<usize>),
    /// `(V1, V2)`; `V2` may be empty.
    pub right_split: (Vec<usize>, Vec<usize>),
    /// Flipped blocks `(i, j)` standing for `(U_{i+1}, V_{j+1})`.
    pub flipped_blocks: Vec<(usize, usize)>,
    pub flipped: Bipartite,
    pub case: BipartiteCase,
}

/// Splits each side of `b` into at most two pieces and flips every block
/// whose diameter is at most 6, so that every edge of the result joins
/// vertices at distance at most 6 in both `b` and its bipartite complement.
pub fn bipartite_flip(b: &Bipartite) -> Result<BipartiteFlip> {
    let left = b.left();
    let right = b.right();
    let case = classify_bipartite(b)?;
    let (left_split, right_split) = match &case {
        BipartiteCase::ConnectedOrComplement => ((left.clone(), vec![]), (right.clone(), vec![])),
        BipartiteCase::TwoBicliques { first, second } => {
            ((first.0.clone(), second.0.clone()), (first.1.clone(), second.1.clone()))
        }
        BipartiteCase::IsolatedAndDominating { side, chosen, .. } => {
            // Split the side holding v⁻/v⁺ by the neighbourhood of `chosen`.
            let split_side = |own: &Vec<usize>| -> (Vec<usize>, Vec<usize>) {
                match chosen {
                    Some(c) => own.iter().partition(|&&v| b.graph().has_edge(*c, v)),
                    None => (own.clone(), vec![]),
                }
            };
            match side {
                Side::Right => ((left.clone(), vec![]), split_side(&right)),
                Side::Left => (split_side(&left), (right.clone(), vec![])),
            }
        }
    };
    let us = [&left_split.0, &left_split.1];
    let vs = [&right_split.0, &right_split.1];
    let mut flipped = b.graph().clone();
    let mut flipped_blocks = Vec::new();
    for (i, ui) in us.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate() {
            if ui.is_empty() || vj.is_empty() {
                continue;
            }
            let (block, _) = b.restrict(ui, vj)?;
            if block.diameter()?.within(BLOCK_DIAMETER) {
                let a = vertex_set(b.n(), ui)?;
                let c = vertex_set(b.n(), vj)?;
                flipped = flipped.flip_sets(&a, &c);
                flipped_blocks.push((i, j));
            } else if !block.complement().diameter()?.within(BLOCK_DIAMETER) {
                return Err(Error::domain(format!(
                    "block ({i},{j}) and its complement both have diameter above {BLOCK_DIAMETER}"
                )));
            }
        }
    }
    Ok(BipartiteFlip {
        left_split,
        right_split,
        flipped_blocks,
        flipped: Bipartite::new(flipped, b.left_mask().clone())?,
        case,
    })
}

/// The decision taken for one part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartDecision {
    pub part: usize,
    pub complement_diameter: String,
    pub flipped: bool,
}

/// The decision taken for one pair of parts, in original vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairDecision {
    pub parts: (usize, usize),
    pub case: BipartiteCase,
    pub first_split: (Vec<usize>, Vec<usize>),
    pub second_split: (Vec<usize>, Vec<usize>),
    pub flipped_blocks: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct ConversionResult {
    /// `P'`, refining the input partition and every pair split.
    pub refined: Partition,
    /// `G'`, a `P'`-flip of the input.
    pub flipped: Graph,
    /// The flip spec over `refined` that reproduces `flipped`.
    pub spec: FlipSpec,
    pub parts: Vec<PartDecision>,
    pub pairs: Vec<PairDecision>,
}

/// Builds `(P', G')` from `(G, P)`.
pub fn convert(g: &Graph, p: &Partition) -> Result<ConversionResult> {
    if p.n() != g.n() {
        return Err(Error::domain(format!("partition covers {} vertices, graph has {}", p.n(), g.n())));
    }
    let mut flipped = g.clone();
    let mut parts = Vec::with_capacity(p.len());
    for (x, part) in p.parts().iter().enumerate() {
        let (gx, _) = g.induced(part)?;
        let cd = gx.complement().diameter()?;
        let flip = !cd.within(PART_DIAMETER);
        if flip {
            if !gx.diameter()?.within(PART_DIAMETER) {
                return Err(Error::domain(format!("part {x} and its complement both have diameter above 3")));
            }
            let m = vertex_set(g.n(), part)?;
            flipped = flipped.flip_sets(&m, &m);
        }
        parts.push(PartDecision {
            part: x,
            complement_diameter: cd.to_string(),
            flipped: flip,
        });
    }

    let pair_list: Vec<(usize, usize)> = pair_order(p.len()).into_iter().filter(|(i, j)| i != j).collect();
    let results = par::map(&pair_list, |&(x, y)| -> Result<PairDecision> {
        let (b, table) = g.bipartite_induced(p.part(x), p.part(y))?;
        let bf = bipartite_flip(&b)?;
        let map = |xs: &Vec<usize>| xs.iter().map(|&v| table[v]).collect::<Vec<_>>();
        Ok(PairDecision {
            parts: (x, y),
            case: bf.case.relabel(&table),
            first_split: (map(&bf.left_split.0), map(&bf.left_split.1)),
            second_split: (map(&bf.right_split.0), map(&bf.right_split.1)),
            flipped_blocks: bf.flipped_blocks,
        })
    });
    let pairs = results.into_iter().collect::<Result<Vec<_>>>()?;

    // Per vertex: its part, then which piece it falls in for every other part.
    let mut signature: Vec<Vec<usize>> = (0..g.n()).map(|v| vec![p.part_of(v)]).collect();
    for pair in &pairs {
        let sides = [&pair.first_split, &pair.second_split];
        for split in sides {
            split.1.iter().for_each(|&v| signature[v].push(pair.parts.0 * p.len() + pair.parts.1 + 1));
        }
        let pieces = |s: &(Vec<usize>, Vec<usize>), k: usize| if k == 0 { s.0.clone() } else { s.1.clone() };
        for &(i, j) in &pair.flipped_blocks {
            let a = vertex_set(g.n(), &pieces(&pair.first_split, i))?;
            let c = vertex_set(g.n(), &pieces(&pair.second_split, j))?;
            flipped = flipped.flip_sets(&a, &c);
        }
    }
    let refined = Partition::from_labels(&signature);
    let spec = recover_spec(g, &flipped, &refined)?;
    Ok(ConversionResult {
        refined,
        flipped,
        spec,
        parts,
        pairs,
    })
}

/// Reads off the flip spec over `p` turning `g` into `h`, and checks that
/// replaying it reproduces `h`.
pub fn recover_spec(g: &Graph, h: &Graph, p: &Partition) -> Result<FlipSpec> {
    let mut spec = FlipSpec::identity();
    for (i, j) in pair_order(p.len()) {
        let (a, b) = (p.part(i), p.part(j));
        let pick = if i == j {
            (a.len() >= 2).then(|| (a[0], a[1]))
        } else {
            Some((a[0], b[0]))
        };
        if let Some((u, v)) = pick {
            if g.has_edge(u, v) != h.has_edge(u, v) {
                spec.insert(i, j);
            }
        }
    }
    if apply_flip(g, p, &spec)? != *h {
        return Err(Error::domain("graph is not a flip over the given partition"));
    }
    Ok(spec)
}

/// A definable flip emulating a given flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmulationWitness {
    pub set: Vec<usize>,
    pub partition: Partition,
    pub spec: FlipSpec,
    pub graph: Graph,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmulationStats {
    pub sets_tried: u64,
    pub largest_size_tried: usize,
}

#[derive(Clone, Debug)]
pub struct EmulationOutcome {
    pub witness: Option<EmulationWitness>,
    pub stats: EmulationStats,
}

/// `true` iff `Ball^r_{inner}(v) ⊆ Ball^{stretch·r}_{outer}(v)` for all `v`
/// and all `1 ≤ r ≤ r_max`, checked ball by ball.
pub fn balls_contained(inner: &Graph, outer: &Graph, stretch: u32, r_max: u32) -> bool {
    (0..inner.n()).all(|v| {
        (1..=r_max).all(|r| {
            let a = inner.ball(v, r).expect("vertex in range");
            let b = outer.ball(v, stretch * r).expect("vertex in range");
            a.is_subset(&b)
        })
    })
}

/// Searches for the smallest `S` (lexicographic among equal sizes, `|S| ≤
/// s_max`) and an `S`-definable flip `G''` of `g` with
/// `Ball^r_{G''}(v) ⊆ Ball^{5r}_{G'}(v)` for every `v` and `r ≤ r_max`.
///
/// For `r_max ≥ 1` the containment for all radii is equivalent to every edge
/// of `G''` joining vertices at distance at most 5 in `G'`. That condition
/// splits over part pairs of `P_S`, so every `P_S`-flip is covered by one
/// keep-or-complement decision per pair; the least spec index is taken.
pub fn search_definable_emulation(g: &Graph, gprime: &Graph, r_max: u32, s_max: usize) -> Result<EmulationOutcome> {
    if g.n() != gprime.n() {
        return Err(Error::domain("graphs have different vertex counts"));
    }
    let n = g.n();
    let mut stats = EmulationStats::default();
    if r_max == 0 {
        stats.sets_tried = 1;
        let partition = Partition::trivial(n);
        return Ok(EmulationOutcome {
            witness: Some(EmulationWitness {
                set: vec![],
                partition,
                spec: FlipSpec::identity(),
                graph: g.clone(),
            }),
            stats,
        });
    }
    let dist = gprime.all_pairs();
    let allowed = |u: usize, v: usize| dist[u][v].within(EMULATION_STRETCH);
    for size in 0..=s_max.min(n) {
        stats.largest_size_tried = size;
        let mut set: Vec<usize> = (0..size).collect();
        loop {
            stats.sets_tried += 1;
            let partition = definable_partition(g, &set)?;
            if let Some(spec) = block_choice(g, &partition, &allowed) {
                let graph = apply_flip(g, &partition, &spec)?;
                return Ok(EmulationOutcome {
                    witness: Some(EmulationWitness {
                        set,
                        partition,
                        spec,
                        graph,
                    }),
                    stats,
                });
            }
            if size == 0 || !crate::vc::next_combination(&mut set, n) {
                break;
            }
        }
    }
    Ok(EmulationOutcome { witness: None, stats })
}

/// Per part pair: keep the block if all its edges are allowed, else
/// complement it if all its non-edges are allowed, else fail.
fn block_choice(g: &Graph, p: &Partition, allowed: &impl Fn(usize, usize) -> bool) -> Option<FlipSpec> {
    let mut spec = FlipSpec::identity();
    for (i, j) in pair_order(p.len()) {
        let mut keep_ok = true;
        let mut flip_ok = true;
        for &u in p.part(i) {
            for &v in p.part(j) {
                if u == v || (i == j && v < u) {
                    continue;
                }
                if !allowed(u, v) {
                    if g.has_edge(u, v) {
                        keep_ok = false;
                    } else {
                        flip_ok = false;
                    }
                }
            }
        }
        if keep_ok {
            continue;
        }
        if !flip_ok {
            return None;
        }
        spec.insert(i, j);
    }
    Some(spec)
}

/// Result of composing [`convert`] with [`search_definable_emulation`].
#[derive(Clone, Debug)]
pub struct DefinableConversion {
    pub conversion: ConversionResult,
    pub emulation: EmulationOutcome,
}

/// Converts `(g, p)` to a concrete flip, then searches a definable flip
/// emulating it. Only witness validity is checked; no bound on `|S|` is
/// asserted.
pub fn definable_conversion(g: &Graph, p: &Partition, r_max: u32, s_max: usize) -> Result<DefinableConversion> {
    let conversion = convert(g, p)?;
    let emulation = search_definable_emulation(g, &conversion.flipped, r_max, s_max)?;
    Ok(DefinableConversion { conversion, emulation })
}

/// The largest `dist_P(u, v) / dist_{G'}(u, v)` over pairs with finite,
/// nonzero `dist_{G'}`; `None` if some such pair has infinite `dist_P`.
pub fn max_stretch(dist_p: &[Vec<ExtDist>], flipped: &Graph) -> Option<f64> {
    let mut worst: f64 = 0.0;
    for (u, row) in flipped.all_pairs().iter().enumerate() {
        for (v, d) in row.iter().enumerate() {
            if let ExtDist::Finite(dg) = *d {
                if dg == 0 {
                    continue;
                }
                match dist_p[u][v] {
                    ExtDist::Finite(dp) => worst = worst.max(f64::from(dp) / f64::from(dg)),
                    ExtDist::Inf => return None,
                }
            }
        }
    }
    Some(worst)
}

/// Members of each part of `p` as a list of vertex lists (for reports).
pub fn describe_partition(p: &Partition) -> Vec<Vec<usize>> {
    p.parts().to_vec()
}

#[doc(hidden)]
pub fn set_members(n: usize, vs: &[usize]) -> Vec<usize> {
    members(&vertex_set(n, vs).expect("in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FlipMetric;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn classify_examples() {
        // K_{2,2} + K_{1,1}: left {0,1,2}, right {0,1,2}
        let two = Bipartite::from_sides(3, 3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(classify_bipartite(&two).unwrap().tag(), "two_bicliques");
        // v⁻ = right 0 isolated, v⁺ = right 1 dominating, right 2 mixed
        let iso = Bipartite::from_sides(3, 3, &[(0, 1), (1, 1), (2, 1), (0, 2)]).unwrap();
        match classify_bipartite(&iso).unwrap() {
            BipartiteCase::IsolatedAndDominating {
                side,
                v_minus,
                v_plus,
                chosen,
            } => {
                assert_eq!(side, Side::Right);
                assert_eq!((v_minus, v_plus, chosen), (3, 4, Some(0)));
            }
            other => panic!("unexpected {other:?}"),
        }
        let edge = Bipartite::from_sides(1, 1, &[(0, 0)]).unwrap();
        assert_eq!(classify_bipartite(&edge).unwrap(), BipartiteCase::ConnectedOrComplement);
        assert!(classify_degenerate(&edge).is_err());
    }

    #[test]
    fn bipartite_flip_cases() {
        let edge = Bipartite::from_sides(1, 1, &[(0, 0)]).unwrap();
        let bf = bipartite_flip(&edge).unwrap();
        assert_eq!(bf.flipped_blocks, vec![(0, 0)]);
        assert_eq!(bf.flipped.graph().edge_count(), 0);

        let two = Bipartite::from_sides(3, 3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]).unwrap();
        let bf = bipartite_flip(&two).unwrap();
        assert_eq!(bf.left_split, (vec![0, 1], vec![2]));
        assert_eq!(bf.right_split, (vec![3, 4], vec![5]));

        let iso = Bipartite::from_sides(3, 3, &[(0, 1), (1, 1), (2, 1), (0, 2)]).unwrap();
        let bf = bipartite_flip(&iso).unwrap();
        assert_eq!(bf.left_split, (vec![0, 1, 2], vec![]));
        // V1 = N(left 0) = {right 1, right 2}
        assert_eq!(bf.right_split, (vec![4, 5], vec![3]));
    }

    #[test]
    fn convert_k4_and_p5() {
        let k4 = Graph::complete(4);
        let res = convert(&k4, &Partition::trivial(4)).unwrap();
        assert_eq!(res.flipped, Graph::empty(4));
        assert!(res.parts[0].flipped);

        let p5 = path(5);
        let res = convert(&p5, &Partition::trivial(5)).unwrap();
        assert_eq!(res.flipped, p5);
        assert_eq!(res.refined, Partition::trivial(5));
        let m = FlipMetric::new(&p5, 4);
        for (u, v) in p5.edges() {
            assert!(m.dist_partition(&Partition::trivial(5), u, v).unwrap().within(2));
        }
    }

    #[test]
    fn convert_singletons_keeps_graph() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = Partition::singletons(4);
        let res = convert(&g, &p).unwrap();
        // every 1x1 block with an edge has diameter 1 and gets flipped
        assert_eq!(res.refined, p);
        let m = FlipMetric::new(&g, 4);
        let d = m.all_pairs_partition(&p).unwrap();
        for (u, v) in res.flipped.edges() {
            assert!(d[u][v].within(6));
        }
    }

    #[test]
    fn emulation_trivial_cases() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let out = search_definable_emulation(&g, &g, 2, 3).unwrap();
        let w = out.witness.unwrap();
        assert!(w.set.is_empty());
        assert_eq!(w.graph, g);

        let k4 = Graph::complete(4);
        let out = search_definable_emulation(&k4, &k4.complement(), 2, 3).unwrap();
        let w = out.witness.unwrap();
        assert!(w.set.is_empty());
        assert_eq!(w.graph, k4.complement());
        assert!(balls_contained(&w.graph, &k4.complement(), EMULATION_STRETCH, 2));
    }
}
