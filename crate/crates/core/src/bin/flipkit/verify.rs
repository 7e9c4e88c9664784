//! Property sweeps behind `flipkit verify`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use rand::Rng;
use serde_json::{json, Value};

use flipkit::conversion::{bipartite_flip, classify_degenerate, convert, BipartiteCase, Side};
use flipkit::flip::{apply_flip, definable_partition, partitions_with_parts, FlipSpec};
use flipkit::generate::{gnp_with, instance_rng, random_labels};
use flipkit::graph::members;
use flipkit::metric::FlipMetric;
use flipkit::vc::{is_shattered, sauer_shelah_bound, shatter_table, vc_dimension};
use flipkit::{par, Bipartite, Error, ExtDist, Graph, Partition, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    DiamComplement,
    BipartiteTrichotomy,
    BipartiteClassification,
    Conversion,
    Aggregation,
    SauerShelah,
    MetricAxioms,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::DiamComplement => "diam-complement",
            Lemma::BipartiteTrichotomy => "bipartite-trichotomy",
            Lemma::BipartiteClassification => "bipartite-classification",
            Lemma::Conversion => "conversion",
            Lemma::Aggregation => "aggregation",
            Lemma::SauerShelah => "sauer-shelah",
            Lemma::MetricAxioms => "metric-axioms",
        }
    }

    /// Largest `n` accepted in exhaustive mode.
    fn exhaustive_cap(self) -> usize {
        match self {
            Lemma::DiamComplement | Lemma::SauerShelah => 6,
            Lemma::BipartiteTrichotomy | Lemma::BipartiteClassification => 3,
            Lemma::Conversion => 5,
            Lemma::Aggregation | Lemma::MetricAxioms => 4,
        }
    }

    fn random_cap(self) -> usize {
        match self {
            Lemma::DiamComplement => 16,
            Lemma::BipartiteTrichotomy | Lemma::BipartiteClassification => 8,
            Lemma::Conversion | Lemma::MetricAxioms => 10,
            Lemma::Aggregation => 6,
            Lemma::SauerShelah => 12,
        }
    }

    fn default_random_n(self) -> usize {
        match self {
            Lemma::BipartiteTrichotomy | Lemma::BipartiteClassification => 4,
            Lemma::Aggregation => 5,
            Lemma::SauerShelah => 12,
            _ => 8,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Mode {
    Exhaustive(usize),
    Random { count: u64, n: Option<usize>, seed: u64 },
}

/// Per-instance tallies, merged by summing counters and taking maxima.
#[derive(Clone, Debug, Default)]
struct Tally {
    counters: BTreeMap<&'static str, u64>,
    max_ratio: Option<f64>,
}

impl Tally {
    fn one(key: &'static str) -> Self {
        let mut t = Tally::default();
        t.counters.insert(key, 1);
        t
    }

    fn bump(&mut self, key: &'static str) {
        *self.counters.entry(key).or_default() += 1;
    }

    fn merge(&mut self, other: Tally) {
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
        self.max_ratio = match (self.max_ratio, other.max_ratio) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

type Check = std::result::Result<Tally, Value>;

pub struct SweepResult {
    pub checked: u64,
    pub counters: BTreeMap<String, u64>,
    pub max_ratio: Option<f64>,
    /// Each instance's largest ratio, in instance order.
    pub ratios: Vec<f64>,
    pub counterexample: Option<Value>,
}

fn refuse(value: usize, cap: usize) -> Error {
    Error::CapExceeded {
        what: "verification size",
        value,
        cap,
        flag: "--exhaustive / --n",
    }
}

pub fn run(lemma: Lemma, mode: Mode, max_parts: usize) -> Result<SweepResult> {
    // Partitions have up to 3 parts; the refinement check adds one more.
    let needed = match lemma {
        Lemma::Conversion => 3,
        Lemma::MetricAxioms => 4,
        _ => 0,
    };
    if needed > max_parts {
        return Err(Error::CapExceeded {
            what: "parts needed by this sweep",
            value: needed,
            cap: max_parts,
            flag: "--max-parts / FLIPKIT_MAX_PARTS",
        });
    }
    let results: Vec<Check> = match mode {
        Mode::Exhaustive(n) => {
            if n > lemma.exhaustive_cap() {
                return Err(refuse(n, lemma.exhaustive_cap()));
            }
            exhaustive(lemma, n, max_parts)
        }
        Mode::Random { count, n, seed } => {
            let n = n.unwrap_or(lemma.default_random_n());
            if n > lemma.random_cap() {
                return Err(refuse(n, lemma.random_cap()));
            }
            par::map_range(count, |i| {
                let mut rng = instance_rng(seed, i);
                random_instance(lemma, n, &mut rng, max_parts)
            })
        }
    };
    let checked = results.len() as u64;
    let mut total = Tally::default();
    let mut counterexample = None;
    let mut ratios = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => {
                ratios.extend(t.max_ratio);
                total.merge(t);
            }
            Err(cex) => {
                counterexample = Some(json!({ "instance": i, "data": cex }));
                break;
            }
        }
    }
    Ok(SweepResult {
        checked,
        counters: total.counters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        max_ratio: total.max_ratio,
        ratios,
        counterexample,
    })
}

fn exhaustive(lemma: Lemma, n: usize, max_parts: usize) -> Vec<Check> {
    let graphs = 1u64 << (n * n.saturating_sub(1) / 2);
    match lemma {
        Lemma::DiamComplement => par::map_range(graphs, |m| diam_complement(&Graph::from_pair_mask(n, m))),
        Lemma::SauerShelah => par::map_range(graphs, |m| sauer_shelah(&Graph::from_pair_mask(n, m))),
        Lemma::BipartiteTrichotomy | Lemma::BipartiteClassification => {
            let mut shapes = Vec::new();
            for nl in 1..=n {
                for nr in 1..=n {
                    shapes.extend((0..1u64 << (nl * nr)).map(|mask| (nl, nr, mask)));
                }
            }
            par::map(&shapes, |&(nl, nr, mask)| {
                let b = bipartite_from_mask(nl, nr, mask);
                if lemma == Lemma::BipartiteTrichotomy {
                    trichotomy(&b)
                } else {
                    classification(&b)
                }
            })
        }
        Lemma::Aggregation => par::map_range(graphs, |m| {
            // Every pair of singletons as S and T.
            let g = Graph::from_pair_mask(n, m);
            let mut t = Tally::default();
            for s in 0..n {
                for u in s..n {
                    t.merge(aggregation(&g, &[s], &[u])?);
                }
            }
            Ok(t)
        }),
        Lemma::Conversion | Lemma::MetricAxioms => {
            let parts: Vec<Partition> = (1..=3.min(n)).flat_map(|k| partitions_with_parts(n, k)).collect();
            let per = parts.len() as u64;
            par::map_range(graphs * per, |i| {
                let g = Graph::from_pair_mask(n, i / per);
                let p = &parts[(i % per) as usize];
                if lemma == Lemma::Conversion {
                    conversion(&g, p, max_parts)
                } else {
                    metric_axioms(&g, p, None, max_parts)
                }
            })
        }
    }
}

fn random_instance<R: Rng>(lemma: Lemma, n: usize, rng: &mut R, max_parts: usize) -> Check {
    let density: f64 = rng.gen_range(0.1..0.9);
    match lemma {
        Lemma::DiamComplement => diam_complement(&gnp_with(n, density, rng).expect("valid density")),
        Lemma::SauerShelah => {
            let size = rng.gen_range(1..=n);
            sauer_shelah(&gnp_with(size, density, rng).expect("valid density"))
        }
        Lemma::BipartiteTrichotomy | Lemma::BipartiteClassification => {
            let nl = rng.gen_range(1..=n);
            let nr = rng.gen_range(1..=n);
            let edges: Vec<(usize, usize)> = (0..nl)
                .flat_map(|u| (0..nr).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(density))
                .collect();
            let b = Bipartite::from_sides(nl, nr, &edges).expect("edges in range");
            if lemma == Lemma::BipartiteTrichotomy {
                trichotomy(&b)
            } else {
                classification(&b)
            }
        }
        Lemma::Conversion | Lemma::MetricAxioms => {
            let size = rng.gen_range(1..=n);
            let g = gnp_with(size, density, rng).expect("valid density");
            let k = rng.gen_range(1..=3);
            let p = Partition::from_labels(&random_labels(size, k, rng));
            if lemma == Lemma::Conversion {
                conversion(&g, &p, max_parts)
            } else {
                let split = rng.gen_range(0..p.len());
                metric_axioms(&g, &p, Some((split, rng.gen())), max_parts)
            }
        }
        Lemma::Aggregation => {
            let size = rng.gen_range(2..=n);
            let g = gnp_with(size, density, rng).expect("valid density");
            let pick = |rng: &mut R| -> Vec<usize> {
                let k = rng.gen_range(0..=1);
                (0..k).map(|_| rng.gen_range(0..size)).collect()
            };
            let s = pick(rng);
            let t = pick(rng);
            aggregation(&g, &s, &t)
        }
    }
}

fn graph_json(g: &Graph) -> Value {
    json!({ "n": g.n(), "edges": g.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>() })
}

fn bipartite_from_mask(nl: usize, nr: usize, mask: u64) -> Bipartite {
    let edges: Vec<(usize, usize)> = (0..nl * nr)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b / nr, b % nr))
        .collect();
    Bipartite::from_sides(nl, nr, &edges).expect("edges in range")
}

fn bipartite_json(b: &Bipartite) -> Value {
    json!({ "left": b.left(), "graph": graph_json(b.graph()) })
}

fn diam_complement(g: &Graph) -> Check {
    let d = g.diameter().expect("nonempty");
    let dc = g.complement().diameter().expect("nonempty");
    if d.within(3) || dc.within(3) {
        Ok(Tally::one(if d.within(3) { "graph_diameter_le_3" } else { "complement_diameter_le_3" }))
    } else {
        Err(json!({ "graph": graph_json(g), "diameter": d.to_string(), "complement_diameter": dc.to_string() }))
    }
}

fn trichotomy(b: &Bipartite) -> Check {
    let d = b.diameter().expect("nonempty");
    let c = b.complement();
    let dc = c.diameter().expect("nonempty");
    if d.within(6) || dc.within(6) {
        Ok(Tally::one("diameter_le_6"))
    } else if !b.is_connected() && !c.is_connected() {
        Ok(Tally::one("both_disconnected"))
    } else {
        Err(json!({ "bipartite": bipartite_json(b), "diameter": d.to_string(), "complement_diameter": dc.to_string() }))
    }
}

/// Checks the returned case against the structure of `b`, independently of
/// how it was found.
fn case_holds(b: &Bipartite, case: &BipartiteCase) -> bool {
    let g = b.graph();
    match case {
        BipartiteCase::ConnectedOrComplement => b.is_connected() || b.complement().is_connected(),
        BipartiteCase::TwoBicliques { first, second } => {
            let mut all: Vec<usize> = [&first.0, &first.1, &second.0, &second.1].into_iter().flatten().copied().collect();
            all.sort_unstable();
            let sides_ok = first.0.iter().chain(&second.0).all(|&v| b.is_left(v))
                && first.1.iter().chain(&second.1).all(|&v| !b.is_left(v));
            let nonempty = [&first.0, &first.1, &second.0, &second.1].iter().all(|s| !s.is_empty());
            let complete = |l: &[usize], r: &[usize]| l.iter().all(|&u| r.iter().all(|&v| g.has_edge(u, v)));
            let none = |l: &[usize], r: &[usize]| l.iter().all(|&u| r.iter().all(|&v| !g.has_edge(u, v)));
            all == (0..b.n()).collect::<Vec<_>>()
                && sides_ok
                && nonempty
                && complete(&first.0, &first.1)
                && complete(&second.0, &second.1)
                && none(&first.0, &second.1)
                && none(&second.0, &first.1)
        }
        BipartiteCase::IsolatedAndDominating { side, v_minus, v_plus, .. } => {
            let on_side = |v: usize| b.is_left(v) == (*side == Side::Left);
            let other: Vec<usize> = (0..b.n()).filter(|&v| !on_side(v)).collect();
            on_side(*v_minus)
                && on_side(*v_plus)
                && g.degree(*v_minus) == 0
                && other.iter().all(|&o| g.has_edge(*v_plus, o))
        }
    }
}

fn classification(b: &Bipartite) -> Check {
    let mut tally = Tally::default();
    let degenerate = !b.is_connected() && !b.complement().is_connected();
    if degenerate {
        match classify_degenerate(b) {
            Ok(case) if case_holds(b, &case) => tally.bump(match case {
                BipartiteCase::TwoBicliques { .. } => "two_bicliques",
                _ => "isolated_and_dominating",
            }),
            Ok(case) => return Err(json!({ "bipartite": bipartite_json(b), "unverified_case": case })),
            Err(e) => return Err(json!({ "bipartite": bipartite_json(b), "error": e.to_string() })),
        }
    } else {
        tally.bump("connected_or_complement");
    }
    let bf = match bipartite_flip(b) {
        Ok(bf) => bf,
        Err(e) => return Err(json!({ "bipartite": bipartite_json(b), "error": e.to_string() })),
    };
    let db = b.graph().all_pairs();
    let dc = b.complement().graph().all_pairs();
    for (u, v) in bf.flipped.graph().edges() {
        if !db[u][v].within(6) || !dc[u][v].within(6) {
            return Err(json!({
                "bipartite": bipartite_json(b),
                "edge": [u, v],
                "distance": db[u][v].to_string(),
                "complement_distance": dc[u][v].to_string(),
            }));
        }
    }
    // Either U2 = ∅ or U1 = N(v) for some v on the other side; same for V.
    let form = |split: &(Vec<usize>, Vec<usize>), other: Vec<usize>| {
        split.1.is_empty()
            || other.iter().any(|&v| {
                let mut nb = members(b.graph().neighbors(v));
                nb.sort_unstable();
                nb == split.0
            })
    };
    if !form(&bf.left_split, b.right()) || !form(&bf.right_split, b.left()) {
        return Err(json!({ "bipartite": bipartite_json(b), "bad_split": [bf.left_split, bf.right_split] }));
    }
    tally.bump("flips_checked");
    Ok(tally)
}

fn conversion(g: &Graph, p: &Partition, max_parts: usize) -> Check {
    let cex = |why: &str, extra: Value| {
        json!({ "graph": graph_json(g), "partition": p.parts(), "violation": why, "detail": extra })
    };
    let res = convert(g, p).map_err(|e| cex("conversion failed", json!(e.to_string())))?;
    if !res.refined.refines(p) {
        return Err(cex("refined partition does not refine the input", json!(res.refined.parts())));
    }
    let bound = p.len() << p.len();
    if res.refined.len() > bound {
        return Err(cex("too many refined parts", json!(res.refined.len())));
    }
    if apply_flip(g, &res.refined, &res.spec).ok().as_ref() != Some(&res.flipped) {
        return Err(cex("spec replay differs", Value::Null));
    }
    let metric = FlipMetric::new(g, max_parts);
    let dp = metric
        .all_pairs_partition(p)
        .map_err(|e| cex("metric failed", json!(e.to_string())))?;
    let dg = res.flipped.all_pairs();
    let mut worst: f64 = 0.0;
    for u in 0..g.n() {
        for v in 0..g.n() {
            let ExtDist::Finite(d) = dg[u][v] else { continue };
            if dp[u][v] > ExtDist::Finite(6 * d) {
                return Err(cex("dist_P exceeds 6 dist_G'", json!({ "u": u, "v": v, "dist_p": dp[u][v].to_string(), "dist_flip": d })));
            }
            if d > 0 {
                if let ExtDist::Finite(x) = dp[u][v] {
                    worst = worst.max(f64::from(x) / f64::from(d));
                }
            }
        }
    }
    for (u, v) in res.flipped.edges() {
        let cap = if p.part_of(u) == p.part_of(v) { 3 } else { 6 };
        if !dp[u][v].within(cap) {
            return Err(cex("edge certificate", json!({ "u": u, "v": v, "dist_p": dp[u][v].to_string() })));
        }
    }
    let mut t = Tally::one("instances");
    *t.counters.entry("refined_parts").or_default() += res.refined.len() as u64;
    t.max_ratio = Some(worst);
    Ok(t)
}

fn metric_axioms(g: &Graph, p: &Partition, split: Option<(usize, u64)>, max_parts: usize) -> Check {
    let metric = FlipMetric::new(g, max_parts);
    let cex = |why: &str, extra: Value| {
        json!({ "graph": graph_json(g), "partition": p.parts(), "violation": why, "detail": extra })
    };
    let d = metric
        .all_pairs_partition(p)
        .map_err(|e| cex("metric failed", json!(e.to_string())))?;
    let n = g.n();
    for u in 0..n {
        if d[u][u] != ExtDist::ZERO {
            return Err(cex("nonzero self distance", json!(u)));
        }
        for v in 0..n {
            if d[u][v] != d[v][u] {
                return Err(cex("asymmetric", json!([u, v])));
            }
            if u != v && d[u][v] < ExtDist::Finite(2) {
                return Err(cex("distance below 2", json!([u, v])));
            }
            for w in 0..n {
                if d[u][w] > d[u][v] + d[v][w] {
                    return Err(cex("triangle inequality", json!([u, v, w])));
                }
            }
        }
    }
    // A refinement: split one part by a bit mask over its members.
    let parts = p.parts();
    let (which, bits) = split.unwrap_or((0, 0b01));
    let finer: Vec<usize> = (0..n)
        .map(|v| {
            let part = p.part_of(v);
            let pos = parts[part].iter().position(|&x| x == v).expect("member");
            if part == which % parts.len().max(1) && bits >> (pos % 64) & 1 == 1 {
                parts.len()
            } else {
                part
            }
        })
        .collect();
    let finer = Partition::from_labels(&finer);
    let df = metric
        .all_pairs_partition(&finer)
        .map_err(|e| cex("metric failed", json!(e.to_string())))?;
    for u in 0..n {
        for v in 0..n {
            if df[u][v] < d[u][v] {
                return Err(cex("refinement decreased a distance", json!({ "u": u, "v": v, "finer": finer.parts() })));
            }
        }
    }
    // Flip algebra on the flip spec with every pair flipped.
    let full = FlipSpec::from_index(p.len(), (1u64 << flipkit::flip::pair_count(p.len())) - 1);
    let once = apply_flip(g, p, &full).map_err(|e| cex("flip failed", json!(e.to_string())))?;
    if apply_flip(&once, p, &full).ok().as_ref() != Some(g) {
        return Err(cex("flip is not an involution", Value::Null));
    }
    Ok(Tally::one("instances"))
}

fn aggregation(g: &Graph, s: &[usize], t: &[usize]) -> Check {
    const CAP: usize = 6;
    let mut st: Vec<usize> = s.iter().chain(t).copied().collect();
    st.sort_unstable();
    st.dedup();
    let parts = definable_partition(g, &st).expect("vertices in range").len();
    if parts > CAP {
        return Ok(Tally::one("skipped_over_cap"));
    }
    let metric = FlipMetric::new(g, CAP);
    let cex = |why: String| json!({ "graph": graph_json(g), "s": s, "t": t, "violation": why });
    let ds = metric.all_pairs_definable(s).map_err(|e| cex(e.to_string()))?;
    let dt = metric.all_pairs_definable(t).map_err(|e| cex(e.to_string()))?;
    let dst = metric.all_pairs_definable(&st).map_err(|e| cex(e.to_string()))?;
    for u in 0..g.n() {
        for v in 0..g.n() {
            if dst[u][v] < ds[u][v].max(dt[u][v]) {
                return Err(cex(format!("pair ({u},{v})")));
            }
        }
    }
    Ok(Tally::one("instances"))
}

fn sauer_shelah(g: &Graph) -> Check {
    let report = vc_dimension(g, 16).map_err(|e| json!(e.to_string()))?;
    let d = report.vcdim as u64;
    if !is_shattered(g, &report.witness) {
        return Err(json!({ "graph": graph_json(g), "violation": "witness not shattered" }));
    }
    let table = shatter_table(g, g.n());
    for (k, &pi) in table.iter().enumerate() {
        if pi > sauer_shelah_bound(k as u64, d) || (k < 64 && pi > 1u64 << k) {
            return Err(json!({ "graph": graph_json(g), "k": k, "pi": pi, "vcdim": d }));
        }
    }
    let mut t = Tally::one("graphs");
    *t.counters.entry("table_entries").or_default() += table.len() as u64;
    Ok(t)
}
