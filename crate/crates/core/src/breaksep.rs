//! Sunflowers, flip-breakability and flip-separability searches, the
//! separable-to-breakable transformation, and the small-balls orchestrator.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flip::{check_part_cap, definable_partition, partitions_with_parts, Flipper, FlipSpec, Partition};
use crate::graph::{members, vertex_set, Graph, VertexSet};
use crate::metric::{FlipMetric, SetFamily};
use crate::par;
use crate::vc::next_combination;
use crate::weights::{Eps, WeightFn};
use crate::DEFAULT_MAX_PARTS;

/// Default cap on the vertex count for searches over all partitions.
pub const DEFAULT_PARTITION_VERTEX_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerResult {
    pub subfamily: SetFamily,
    pub core: Vec<usize>,
}

/// Greedy Erdős–Rado extraction of a sunflower with `m` petals.
///
/// Takes a maximal disjoint subfamily in input order; if it is too small,
/// recurses into the sets through the most frequent element (trying less
/// frequent ones on failure). Always succeeds when the family has more than
/// `t!·(m-1)^t` distinct members.
pub fn sunflower_extract(f: &SetFamily, m: usize) -> Result<Option<SunflowerResult>> {
    if !f.is_empty() && f.uniform_size().is_none() {
        return Err(Error::domain("sunflower extraction needs a uniform family"));
    }
    let mut distinct: Vec<Vec<usize>> = Vec::with_capacity(f.len());
    for s in f.sets() {
        if !distinct.contains(s) {
            distinct.push(s.clone());
        }
    }
    Ok(sunflower_rec(&distinct, m).map(|(sets, core)| SunflowerResult {
        subfamily: SetFamily::new(sets),
        core,
    }))
}

fn sunflower_rec(sets: &[Vec<usize>], m: usize) -> Option<(Vec<Vec<usize>>, Vec<usize>)> {
    if m == 0 {
        return Some((vec![], vec![]));
    }
    let mut used: Vec<usize> = Vec::new();
    let mut chosen = Vec::new();
    for s in sets {
        if s.iter().all(|x| !used.contains(x)) {
            used.extend_from_slice(s);
            chosen.push(s.clone());
            if chosen.len() == m {
                return Some((chosen, vec![]));
            }
        }
    }
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for s in sets {
        for &x in s {
            *freq.entry(x).or_default() += 1;
        }
    }
    let mut order: Vec<(usize, usize)> = freq.into_iter().filter(|&(_, c)| c >= m).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for (x, _) in order {
        let through: Vec<Vec<usize>> = sets
            .iter()
            .filter(|s| s.contains(&x))
            .map(|s| s.iter().copied().filter(|&y| y != x).collect())
            .collect();
        if let Some((petals, mut core)) = sunflower_rec(&through, m) {
            let sets = petals
                .into_iter()
                .map(|mut p| {
                    p.push(x);
                    p.sort_unstable();
                    p
                })
                .collect();
            core.push(x);
            core.sort_unstable();
            return Some((sets, core));
        }
    }
    None
}

/// `true` iff every pair of distinct members intersects exactly in `core`.
pub fn is_sunflower(sets: &[Vec<usize>], core: &[usize]) -> bool {
    sets.iter().enumerate().all(|(i, a)| {
        sets[i + 1..].iter().all(|b| {
            let common: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
            common == core
        })
    })
}

/// Two vertex sets with disjoint `r`-balls in a flip of the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakWitness {
    /// The defining set when the flip is definable.
    pub set: Option<Vec<usize>>,
    pub partition: Partition,
    pub spec: FlipSpec,
    pub flipped: Graph,
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BreakBudget {
    /// Largest defining set tried.
    pub s_max: usize,
    /// Partitions with more parts are skipped (definable mode) or never
    /// generated (raw mode).
    pub part_cap: usize,
    /// Search nodes allowed per flip when picking `A1`.
    pub max_nodes: u64,
    /// Search partition flips of `V` instead of definable flips.
    pub raw_partitions: bool,
    /// Vertex cap for raw mode.
    pub max_vertices: usize,
}

impl Default for BreakBudget {
    fn default() -> Self {
        BreakBudget {
            s_max: 1,
            part_cap: DEFAULT_MAX_PARTS,
            max_nodes: 100_000,
            raw_partitions: false,
            max_vertices: DEFAULT_PARTITION_VERTEX_CAP,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BreakStats {
    pub sets_tried: u64,
    pub sets_skipped: u64,
    /// Flips considered in search order, up to and including the witness.
    pub flips_considered: u64,
}

#[derive(Clone, Debug)]
pub struct BreakOutcome {
    pub witness: Option<BreakWitness>,
    pub stats: BreakStats,
}

/// Single-set breakability: `A1, A2 ⊆ W`.
pub fn breakability_search(g: &Graph, w: &[usize], r: u32, m: usize, budget: &BreakBudget) -> Result<BreakOutcome> {
    breakability_search2(g, w, w, r, m, budget, false)
}

/// Two-set breakability: `A1 ⊆ W1`, `A2 ⊆ W2`, each of size at least `m`,
/// with disjoint `r`-balls in a flip of `g`. Definable flips are tried by
/// defining set (size, then lexicographic), then by spec index; the first
/// success in that order is returned. With `extend`, both sets are grown to
/// the largest compatible pair containing the minimal witness.
pub fn breakability_search2(
    g: &Graph,
    w1: &[usize],
    w2: &[usize],
    r: u32,
    m: usize,
    budget: &BreakBudget,
    extend: bool,
) -> Result<BreakOutcome> {
    let n = g.n();
    vertex_set(n, w1)?;
    vertex_set(n, w2)?;
    let w1 = sorted(w1);
    let w2 = sorted(w2);
    let mut stats = BreakStats::default();
    if m == 0 {
        stats.sets_tried = 1;
        stats.flips_considered = 1;
        return Ok(BreakOutcome {
            witness: Some(BreakWitness {
                set: Some(vec![]),
                partition: Partition::trivial(n),
                spec: FlipSpec::identity(),
                flipped: g.clone(),
                a1: vec![],
                a2: vec![],
            }),
            stats,
        });
    }
    let try_partition = |p: &Partition, stats: &mut BreakStats| -> Option<(FlipSpec, Graph, Vec<usize>, Vec<usize>)> {
        let flipper = Flipper::new(g, p).expect("partition matches graph");
        let count = flipper.spec_count();
        let hit = par::find_map_first_range(count, |idx| {
            let h = flipper.apply_index(idx);
            find_sets(&h, &w1, &w2, r, m, budget.max_nodes, extend).map(|(a1, a2)| (idx, h, a1, a2))
        });
        match hit {
            Some((idx, h, a1, a2)) => {
                stats.flips_considered += idx + 1;
                Some((FlipSpec::from_index(p.len(), idx), h, a1, a2))
            }
            None => {
                stats.flips_considered += count;
                None
            }
        }
    };

    if budget.raw_partitions {
        if n > budget.max_vertices {
            return Err(Error::CapExceeded {
                what: "vertex count",
                value: n,
                cap: budget.max_vertices,
                flag: "--max-vertices",
            });
        }
        check_part_cap(budget.part_cap, budget.part_cap)?;
        for k in 1..=budget.part_cap.min(n) {
            for p in partitions_with_parts(n, k) {
                stats.sets_tried += 1;
                if let Some((spec, flipped, a1, a2)) = try_partition(&p, &mut stats) {
                    let witness = BreakWitness {
                        set: None,
                        partition: p,
                        spec,
                        flipped,
                        a1,
                        a2,
                    };
                    verify_break_witness(g, &witness, &w1, &w2, r, m)?;
                    return Ok(BreakOutcome {
                        witness: Some(witness),
                        stats,
                    });
                }
            }
        }
        return Ok(BreakOutcome { witness: None, stats });
    }

    for size in 0..=budget.s_max.min(n) {
        let mut set: Vec<usize> = (0..size).collect();
        loop {
            let p = definable_partition(g, &set)?;
            if p.len() > budget.part_cap.min(crate::HARD_MAX_PARTS) {
                stats.sets_skipped += 1;
            } else {
                stats.sets_tried += 1;
                if let Some((spec, flipped, a1, a2)) = try_partition(&p, &mut stats) {
                    let witness = BreakWitness {
                        set: Some(set),
                        partition: p,
                        spec,
                        flipped,
                        a1,
                        a2,
                    };
                    verify_break_witness(g, &witness, &w1, &w2, r, m)?;
                    return Ok(BreakOutcome {
                        witness: Some(witness),
                        stats,
                    });
                }
            }
            if size == 0 || !next_combination(&mut set, n) {
                break;
            }
        }
    }
    Ok(BreakOutcome { witness: None, stats })
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Looks for `A1 ⊆ w1` of size `m` such that at least `m` vertices of `w2`
/// have `r`-balls in `h` disjoint from `Ball^r(A1)`. Tries whole components
/// of the "balls meet" relation first, then a depth-first search over
/// `m`-subsets of `w1` bounded by `max_nodes`.
fn find_sets(
    h: &Graph,
    w1: &[usize],
    w2: &[usize],
    r: u32,
    m: usize,
    max_nodes: u64,
    extend: bool,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if w1.len() < m || w2.len() < m {
        return None;
    }
    let n = h.n();
    let mut balls: Vec<Option<VertexSet>> = vec![None; n];
    for &v in w1.iter().chain(w2) {
        if balls[v].is_none() {
            balls[v] = Some(h.ball(v, r).expect("vertex in range"));
        }
    }
    let ball = |v: usize| balls[v].as_ref().expect("ball computed");
    let free_in_w2 = |covered: &VertexSet| -> Vec<usize> {
        w2.iter().copied().filter(|&v| ball(v).is_disjoint(covered)).collect()
    };
    let finish = |a1: Vec<usize>| -> (Vec<usize>, Vec<usize>) {
        let mut covered = FixedBitSet::with_capacity(n);
        a1.iter().for_each(|&v| covered.union_with(ball(v)));
        let a2_all = free_in_w2(&covered);
        if !extend {
            return (a1, a2_all[..m].to_vec());
        }
        let mut covered2 = FixedBitSet::with_capacity(n);
        a2_all.iter().for_each(|&v| covered2.union_with(ball(v)));
        let a1_all = w1.iter().copied().filter(|&v| ball(v).is_disjoint(&covered2)).collect();
        (a1_all, a2_all)
    };

    // Components of the "balls meet" relation on w1 ∪ w2.
    let pool = sorted(&[w1, w2].concat());
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for &s in &pool {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = ncomp;
        while let Some(x) = stack.pop() {
            for &y in &pool {
                if comp[y] == usize::MAX && !ball(x).is_disjoint(ball(y)) {
                    comp[y] = ncomp;
                    stack.push(y);
                }
            }
        }
        ncomp += 1;
    }
    if ncomp > 1 {
        let mut a1 = Vec::new();
        for c in 0..ncomp {
            a1.extend(w1.iter().copied().filter(|&v| comp[v] == c));
            if a1.len() >= m {
                a1.truncate(m);
                break;
            }
        }
        let mut covered = FixedBitSet::with_capacity(n);
        a1.iter().for_each(|&v| covered.union_with(ball(v)));
        if a1.len() == m && free_in_w2(&covered).len() >= m {
            return Some(finish(a1));
        }
    }

    let mut nodes = 0u64;
    let mut chosen = Vec::with_capacity(m);
    let ctx = Dfs {
        balls: &balls,
        w1,
        w2,
        m,
        max_nodes,
    };
    if ctx.run(0, &mut chosen, &FixedBitSet::with_capacity(n), &mut nodes) {
        Some(finish(chosen))
    } else {
        None
    }
}

struct Dfs<'a> {
    balls: &'a [Option<VertexSet>],
    w1: &'a [usize],
    w2: &'a [usize],
    m: usize,
    max_nodes: u64,
}

impl Dfs<'_> {
    fn ball(&self, v: usize) -> &VertexSet {
        self.balls[v].as_ref().expect("ball computed")
    }

    /// Extends `chosen` from `w1[start..]` while at least `m` vertices of
    /// `w2` stay clear of the covered region.
    fn run(&self, start: usize, chosen: &mut Vec<usize>, covered: &VertexSet, nodes: &mut u64) -> bool {
        if chosen.len() == self.m {
            return true;
        }
        for idx in start..self.w1.len() {
            if self.w1.len() - idx < self.m - chosen.len() {
                return false;
            }
            *nodes += 1;
            if *nodes > self.max_nodes {
                return false;
            }
            let v = self.w1[idx];
            let mut next = covered.clone();
            next.union_with(self.ball(v));
            if self.w2.iter().filter(|&&x| self.ball(x).is_disjoint(&next)).count() < self.m {
                continue;
            }
            chosen.push(v);
            if self.run(idx + 1, chosen, &next, nodes) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Checks every claim a witness makes: the flip is what it says, the sets
/// are disjoint subsets of their pools of size at least `m`, and their
/// `r`-balls in the flipped graph are disjoint.
pub fn verify_break_witness(g: &Graph, wit: &BreakWitness, w1: &[usize], w2: &[usize], r: u32, m: usize) -> Result<()> {
    let fail = |msg: String| Err(Error::domain(format!("invalid witness: {msg}")));
    if let Some(s) = &wit.set {
        if definable_partition(g, s)? != wit.partition {
            return fail("partition does not match the defining set".into());
        }
    }
    if crate::flip::apply_flip(g, &wit.partition, &wit.spec)? != wit.flipped {
        return fail("flipped graph does not match its flip spec".into());
    }
    if wit.a1.len() < m || wit.a2.len() < m {
        return fail(format!("sizes {} and {} below {m}", wit.a1.len(), wit.a2.len()));
    }
    if let Some(v) = wit.a1.iter().find(|v| !w1.contains(v)) {
        return fail(format!("vertex {v} of A1 outside its pool"));
    }
    if let Some(v) = wit.a2.iter().find(|v| !w2.contains(v)) {
        return fail(format!("vertex {v} of A2 outside its pool"));
    }
    let s1 = vertex_set(g.n(), &wit.a1)?;
    let s2 = vertex_set(g.n(), &wit.a2)?;
    if !s1.is_disjoint(&s2) {
        return fail("A1 and A2 intersect".into());
    }
    let b1 = wit.flipped.ball_of_set(&s1, r);
    let b2 = wit.flipped.ball_of_set(&s2, r);
    if !b1.is_disjoint(&b2) {
        return fail(format!("balls meet at {:?}", members(&b1.intersection(&b2).collect())));
    }
    Ok(())
}

/// A flip passing the separability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub partition: Partition,
    pub spec: FlipSpec,
    pub flipped: Graph,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SepStats {
    pub partitions_considered: u64,
    pub flips_considered: u64,
}

#[derive(Clone, Debug)]
pub struct SepOutcome {
    pub separation: Option<Separation>,
    pub stats: SepStats,
}

/// `true` iff every vertex of weight at most `ε·w(V)` has an `r`-ball in `h`
/// of weight at most `ε·w(V)`.
pub fn is_separating(h: &Graph, w: &WeightFn, r: u32, eps: Eps) -> bool {
    (0..h.n()).all(|v| !w.is_small(v, eps) || w.within(w.of_set(&h.ball(v, r).expect("vertex in range")), eps))
}

/// Tries every partition of `V` into `k = 1, 2, …, k_max` parts (restricted
/// growth strings in lexicographic order) and every spec over it; returns the
/// first flip passing [`is_separating`].
pub fn separability_search(
    g: &Graph,
    w: &WeightFn,
    r: u32,
    eps: Eps,
    k_max: usize,
    max_parts: usize,
    max_vertices: usize,
) -> Result<SepOutcome> {
    let n = g.n();
    if w.n() != n {
        return Err(Error::domain(format!("{} weights for {n} vertices", w.n())));
    }
    if n > max_vertices {
        return Err(Error::CapExceeded {
            what: "vertex count",
            value: n,
            cap: max_vertices,
            flag: "--max-vertices",
        });
    }
    check_part_cap(k_max, max_parts)?;
    let mut stats = SepStats::default();
    if n == 0 {
        return Ok(SepOutcome {
            separation: Some(Separation {
                partition: Partition::trivial(0),
                spec: FlipSpec::identity(),
                flipped: g.clone(),
            }),
            stats,
        });
    }
    for k in 1..=k_max.min(n) {
        let parts = partitions_with_parts(n, k);
        let specs = 1u64 << crate::flip::pair_count(k);
        let hit = par::find_map_first_range(parts.len() as u64, |pi| {
            let flipper = Flipper::new(g, &parts[pi as usize]).expect("partition matches graph");
            (0..specs).find_map(|idx| {
                let h = flipper.apply_index(idx);
                is_separating(&h, w, r, eps).then_some((pi as usize, idx, h))
            })
        });
        match hit {
            Some((pos, idx, flipped)) => {
                stats.partitions_considered += pos as u64 + 1;
                stats.flips_considered += pos as u64 * specs + idx + 1;
                return Ok(SepOutcome {
                    separation: Some(Separation {
                        partition: parts[pos].clone(),
                        spec: FlipSpec::from_index(k, idx),
                        flipped,
                    }),
                    stats,
                });
            }
            None => {
                stats.partitions_considered += parts.len() as u64;
                stats.flips_considered += parts.len() as u64 * specs;
            }
        }
    }
    Ok(SepOutcome { separation: None, stats })
}

/// Greedy maximal subset of `w` (ascending) whose members are pairwise at
/// distance more than `d` in `h`.
pub fn greedy_scattered(h: &Graph, w: &[usize], d: u32) -> Vec<usize> {
    let mut covered = FixedBitSet::with_capacity(h.n());
    let mut out = Vec::new();
    for v in sorted(w) {
        if !covered.contains(v) {
            covered.union_with(&h.ball(v, d).expect("vertex in range"));
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum SepBreakCase {
    /// Some vertex sees at least `2m` members of `W` within `2r`.
    DenseBall { center: usize },
    /// A greedy `2r`-scattered subset of `W` has at least `2m` members.
    Scattered,
}

#[derive(Clone, Debug)]
pub struct SepBreak {
    pub witness: BreakWitness,
    pub case: SepBreakCase,
    pub m: usize,
}

/// Turns a flip `h` whose `4r`-balls hold at most half of `W` into two
/// subsets of `W` of size `m` (where `|W| = 4m²`) with disjoint `r`-balls.
pub fn break_from_sep(g: &Graph, w: &[usize], r: u32, h: (&Partition, &FlipSpec)) -> Result<SepBreak> {
    let n = g.n();
    let wset = vertex_set(n, w)?;
    let w = members(&wset);
    let size = w.len();
    let m = (0..=size).find(|m| 4 * m * m >= size).unwrap_or(0);
    if 4 * m * m != size {
        return Err(Error::domain(format!("|W| = {size} is not of the form 4m²")));
    }
    let (partition, spec) = h;
    let flipped = crate::flip::apply_flip(g, partition, spec)?;
    let mk = |a1: Vec<usize>, a2: Vec<usize>| BreakWitness {
        set: None,
        partition: partition.clone(),
        spec: spec.clone(),
        flipped: flipped.clone(),
        a1,
        a2,
    };
    if m == 0 {
        return Ok(SepBreak {
            witness: mk(vec![], vec![]),
            case: SepBreakCase::Scattered,
            m,
        });
    }
    let hits = |v: usize, rad: u32| -> VertexSet {
        let mut b = flipped.ball(v, rad).expect("vertex in range");
        b.intersect_with(&wset);
        b
    };
    let far_balls: Vec<VertexSet> = (0..n).map(|v| hits(v, 4 * r)).collect();
    if let Some(v) = (0..n).find(|&v| 2 * far_balls[v].count_ones(..) > size) {
        return Err(Error::domain(format!(
            "vertex {v} has {} of the {size} vertices of W within distance {}",
            far_balls[v].count_ones(..),
            4 * r
        )));
    }
    let dense = (0..n).find_map(|v| {
        let near = hits(v, 2 * r);
        (near.count_ones(..) >= 2 * m).then_some((v, near))
    });
    let (witness, case) = match dense {
        Some((v, near)) => {
            let a2 = w.iter().copied().filter(|&x| !far_balls[v].contains(x)).collect();
            (mk(members(&near), a2), SepBreakCase::DenseBall { center: v })
        }
        None => {
            let scattered = greedy_scattered(&flipped, &w, 2 * r);
            if scattered.len() < 2 * m {
                return Err(Error::domain(format!(
                    "scattered set has {} < {} vertices and no dense ball exists",
                    scattered.len(),
                    2 * m
                )));
            }
            (mk(scattered[..m].to_vec(), scattered[m..2 * m].to_vec()), SepBreakCase::Scattered)
        }
    };
    verify_break_witness(g, &witness, &w, &w, r, m)?;
    Ok(SepBreak { witness, case, m })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrchestratorStep {
    pub q: usize,
    pub q2: usize,
    pub i: usize,
    pub j: usize,
    /// The defining set found, or `None` if the step failed.
    pub set: Option<Vec<usize>>,
    pub sizes: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallBalls {
    pub fprime: SetFamily,
    pub y: SetFamily,
    pub core: Vec<usize>,
    /// Petal groups after all restrictions.
    pub groups: Vec<Vec<Vec<usize>>>,
    pub group_weights: Vec<f64>,
    pub selected: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrchestratorOutcome {
    pub result: Option<SmallBalls>,
    pub steps: Vec<OrchestratorStep>,
    pub failure: Option<String>,
}

impl OrchestratorOutcome {
    fn fail(steps: Vec<OrchestratorStep>, why: String) -> Self {
        OrchestratorOutcome {
            result: None,
            steps,
            failure: Some(why),
        }
    }
}

/// Finds `F' ⊆ f` with at least `m` members and a family `𝒴` of `t`-sets
/// such that `w(Ball^r_𝒴(S − ∪𝒴)) ≤ ε·w(V)` for every `S ∈ F'`.
///
/// A sunflower is extracted, its petals are split into `⌈1/ε⌉` contiguous
/// groups, and every pair of groups is pulled apart coordinate by coordinate
/// with two-set breakability. The group whose ball is lightest is returned,
/// with the core added back. The final inequality is rechecked exactly.
pub fn small_balls_orchestrate(
    g: &Graph,
    w: &WeightFn,
    f: &SetFamily,
    r: u32,
    eps: Eps,
    m: usize,
    budget: &BreakBudget,
) -> Result<OrchestratorOutcome> {
    let n = g.n();
    if w.n() != n {
        return Err(Error::domain(format!("{} weights for {n} vertices", w.n())));
    }
    let t = f
        .uniform_size()
        .ok_or_else(|| Error::domain("small-balls search needs a nonempty uniform family"))?;
    if budget.raw_partitions {
        return Err(Error::domain("small-balls search needs definable flips"));
    }
    if budget.s_max > t {
        return Err(Error::domain(format!("s_max = {} exceeds the set size t = {t}", budget.s_max)));
    }
    if t > n {
        return Err(Error::domain(format!("set size {t} exceeds n = {n}")));
    }
    for s in f.sets() {
        vertex_set(n, s)?;
    }
    let p = eps.ceil_inverse()? as usize;
    let m = m.max(1);
    let mut sunflower = None;
    for size in (p * m..=f.len()).rev() {
        if let Some(sf) = sunflower_extract(f, size)? {
            sunflower = Some(sf);
            break;
        }
    }
    let Some(sunflower) = sunflower else {
        return Ok(OrchestratorOutcome::fail(
            vec![],
            format!("no sunflower with {} petals", p * m),
        ));
    };
    let core = sunflower.core.clone();
    let petals: Vec<Vec<usize>> = sunflower
        .subfamily
        .sets()
        .iter()
        .map(|s| s.iter().copied().filter(|x| !core.contains(x)).collect())
        .collect();
    let per = petals.len() / p;
    let mut groups: Vec<Vec<Vec<usize>>> = (0..p).map(|q| petals[q * per..(q + 1) * per].to_vec()).collect();
    let tp = t - core.len();

    let mut steps = Vec::new();
    let mut ysets: Vec<Vec<usize>> = Vec::new();
    for q in 0..p {
        for q2 in q + 1..p {
            for i in 0..tp {
                for j in 0..tp {
                    let w1: Vec<usize> = groups[q].iter().map(|s| s[i]).collect();
                    let w2: Vec<usize> = groups[q2].iter().map(|s| s[j]).collect();
                    let out = breakability_search2(g, &w1, &w2, r, m, budget, true)?;
                    let Some(wit) = out.witness else {
                        steps.push(OrchestratorStep {
                            q,
                            q2,
                            i,
                            j,
                            set: None,
                            sizes: (groups[q].len(), groups[q2].len()),
                        });
                        return Ok(OrchestratorOutcome::fail(
                            steps,
                            format!("breakability failed at groups ({q},{q2}) coordinates ({i},{j})"),
                        ));
                    };
                    groups[q].retain(|s| wit.a1.contains(&s[i]));
                    groups[q2].retain(|s| wit.a2.contains(&s[j]));
                    let set = wit.set.expect("definable witness");
                    steps.push(OrchestratorStep {
                        q,
                        q2,
                        i,
                        j,
                        set: Some(set.clone()),
                        sizes: (groups[q].len(), groups[q2].len()),
                    });
                    ysets.push(set);
                }
            }
        }
    }

    let used = f.union(n);
    let pad = |s: &[usize]| -> Vec<usize> {
        let mut s = s.to_vec();
        let fresh = (0..n).filter(|v| !used.contains(*v));
        let any = 0..n;
        for v in fresh.chain(any) {
            if s.len() >= t {
                break;
            }
            if !s.contains(&v) {
                s.push(v);
            }
        }
        s.sort_unstable();
        s
    };
    let mut yfam = vec![pad(&core)];
    yfam.extend(ysets.iter().map(|s| pad(s)));
    let y = SetFamily::uniform(t, yfam)?;

    let metric = FlipMetric::new(g, budget.part_cap);
    let mut group_weights = Vec::with_capacity(p);
    for grp in &groups {
        let mut union = FixedBitSet::with_capacity(n);
        grp.iter().flatten().for_each(|&v| union.insert(v));
        group_weights.push(w.of_set(&metric.ball_family_of_set(&y, &union, r)?));
    }
    let selected = (0..p)
        .min_by(|&a, &b| group_weights[a].total_cmp(&group_weights[b]).then(a.cmp(&b)))
        .expect("at least one group");
    let fprime = SetFamily::uniform(
        t,
        groups[selected]
            .iter()
            .map(|s| s.iter().chain(&core).copied().collect())
            .collect(),
    )?;
    if fprime.len() < m {
        return Ok(OrchestratorOutcome::fail(steps, format!("selected group has {} < {m} sets", fprime.len())));
    }
    let yunion = y.union(n);
    for s in fprime.sets() {
        let mut rest = FixedBitSet::with_capacity(n);
        s.iter().filter(|v| !yunion.contains(**v)).for_each(|&v| rest.insert(v));
        let weight = w.of_set(&metric.ball_family_of_set(&y, &rest, r)?);
        if !w.within(weight, eps) {
            return Ok(OrchestratorOutcome::fail(
                steps,
                format!("set {s:?} has ball weight {weight} above the threshold"),
            ));
        }
    }
    Ok(OrchestratorOutcome {
        result: Some(SmallBalls {
            fprime,
            y,
            core,
            groups,
            group_weights,
            selected,
        }),
        steps,
        failure: None,
    })
}
