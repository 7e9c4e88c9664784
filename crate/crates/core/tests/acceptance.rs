//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails. Library output is checked against the
//! reference implementations in `common`.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use flipkit::breaksep::{
    break_from_sep, separability_search, small_balls_orchestrate, sunflower_extract, BreakBudget, BreakWitness,
};
use flipkit::conversion::{classify_bipartite, convert, search_definable_emulation, BipartiteCase, Side};
use flipkit::flip::{apply_flip, definable_partition};
use flipkit::generate::{grid, instance_rng, path, random_labels};
use flipkit::graph::Bipartite;
use flipkit::metric::{FlipMetric, SetFamily};
use flipkit::vc::vc_dimension;
use flipkit::{Eps, FlipSpec, Graph, Partition, WeightFn};

const SEED: u64 = 0x5eed;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn run(id: u32, name: &str, limit: Option<Duration>, f: fn() -> Verdict) -> bool {
    let start = Instant::now();
    let v = std::panic::catch_unwind(f).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(ToString::to_string))
            .unwrap_or_default();
        verdict(false, format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let pass = v.pass && in_time;
    let limit_note = limit.map(|l| format!(" (limit {:.0} s)", l.as_secs_f64())).unwrap_or_default();
    println!(
        "criterion {id:>2} {name}: {}: {}; {:.2} s{limit_note}",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64()
    );
    pass
}

fn main() {
    let results = [
        run(1, "diameter dichotomy", Some(Duration::from_secs(10)), diameter_dichotomy),
        run(2, "bipartite trichotomy", Some(Duration::from_secs(5)), bipartite_trichotomy),
        run(3, "conversion guarantee", Some(Duration::from_secs(60)), conversion_guarantee),
        run(4, "flip-metric properties", None, metric_properties),
        run(5, "Sauer-Shelah", None, sauer_shelah),
        run(6, "separation to breakability", None, sep_to_break),
        run(7, "sunflower extraction", None, sunflowers),
        run(8, "definable emulation witnesses", None, emulation_witnesses),
        run(9, "small-balls orchestrator", None, small_balls),
        run(10, "CLI determinism", None, cli_determinism),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

fn diameter_dichotomy() -> Verdict {
    let mut graphs = 0u64;
    let mut violations = 0u64;
    let mut mismatches = 0u64;
    for n in 1..=6usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0..1u64 << pairs {
            let g = Graph::from_pair_mask(n, mask);
            let a = from_mask(n, mask);
            let (d, dc) = (g.diameter().unwrap(), g.complement().diameter().unwrap());
            let (od, odc) = (diameter(&a), diameter(&complement(&a)));
            if ext(d) != od || ext(dc) != odc {
                mismatches += 1;
            }
            if !leq(od, Some(3)) && !leq(odc, Some(3)) {
                violations += 1;
            }
            graphs += 1;
        }
    }
    verdict(
        violations == 0 && mismatches == 0,
        format!("{graphs} graphs on n <= 6, {violations} violations, {mismatches} diameter mismatches"),
    )
}

/// Independent check that a degenerate case description holds in `b`.
fn case_holds(b: &Bipartite, a: &Adj, case: &BipartiteCase) -> bool {
    let n = b.n();
    match case {
        BipartiteCase::ConnectedOrComplement => false,
        BipartiteCase::IsolatedAndDominating {
            side,
            v_minus,
            v_plus,
            chosen,
        } => {
            let on_side = |v: usize| b.is_left(v) == (*side == Side::Left);
            let other: Vec<usize> = (0..n).filter(|&v| !on_side(v)).collect();
            on_side(*v_minus)
                && on_side(*v_plus)
                && v_minus != v_plus
                && other.iter().all(|&o| !a[*v_minus][o] && a[*v_plus][o])
                && *chosen == other.first().copied()
        }
        BipartiteCase::TwoBicliques { first, second } => {
            let mut all: Vec<usize> = [&first.0, &first.1, &second.0, &second.1].into_iter().flatten().copied().collect();
            all.sort_unstable();
            let covers = all == (0..n).collect::<Vec<_>>();
            let sides_ok = first.0.iter().chain(&second.0).all(|&v| b.is_left(v))
                && first.1.iter().chain(&second.1).all(|&v| !b.is_left(v));
            let nonempty = [&first.0, &first.1, &second.0, &second.1].iter().all(|s| !s.is_empty());
            let complete = |(l, r): &(Vec<usize>, Vec<usize>)| l.iter().all(|&u| r.iter().all(|&v| a[u][v]));
            let c1: Vec<usize> = first.0.iter().chain(&first.1).copied().collect();
            let c2: Vec<usize> = second.0.iter().chain(&second.1).copied().collect();
            let separate = c1.iter().all(|&u| c2.iter().all(|&v| !a[u][v]));
            covers && sides_ok && nonempty && complete(first) && complete(second) && separate
        }
    }
}

fn bipartite_trichotomy() -> Verdict {
    let mut graphs = 0u64;
    let mut degenerate = 0u64;
    let mut bad = Vec::new();
    for nl in 1..=3usize {
        for nr in 1..=3usize {
            let cells: Vec<(usize, usize)> = (0..nl).flat_map(|i| (0..nr).map(move |j| (i, j))).collect();
            for mask in 0..1u32 << cells.len() {
                let edges: Vec<_> = cells.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
                let b = Bipartite::from_sides(nl, nr, &edges).unwrap();
                let a = adj(b.graph());
                let n = nl + nr;
                let bc: Adj = (0..n)
                    .map(|u| (0..n).map(|v| (u < nl) != (v < nl) && !a[u][v]).collect())
                    .collect();
                let connected = diameter(&a).is_some();
                let co_connected = diameter(&bc).is_some();
                graphs += 1;
                let res = classify_bipartite(&b);
                let ok = match res {
                    Ok(BipartiteCase::ConnectedOrComplement) => connected || co_connected,
                    Ok(ref case) => {
                        degenerate += 1;
                        !connected && !co_connected && case_holds(&b, &a, case)
                    }
                    Err(_) => false,
                };
                if !ok && bad.len() < 3 {
                    bad.push(format!("({nl},{nr}) mask {mask}: {res:?}"));
                }
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{graphs} bipartite graphs with sides <= 3, {degenerate} degenerate and verified, violations: {bad:?}"
        ),
    )
}

/// `true` iff `h` is a flip of `g` over `labels`: every block is either
/// untouched or fully complemented.
fn is_flip_over(g: &Adj, h: &Adj, labels: &[usize]) -> bool {
    let n = g.len();
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut state: Vec<Vec<Option<bool>>> = vec![vec![None; k]; k];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let (i, j) = (labels[u].min(labels[v]), labels[u].max(labels[v]));
            let flipped = g[u][v] != h[u][v];
            match state[i][j] {
                None => state[i][j] = Some(flipped),
                Some(f) if f != flipped => return false,
                _ => {}
            }
        }
    }
    true
}

fn conversion_guarantee() -> Verdict {
    let instances = 240u64;
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    let mut largest_refinement = 0;
    for i in 0..instances {
        let mut rng = instance_rng(SEED, i);
        let n = rng.gen_range(2..=10);
        let k = rng.gen_range(1..=3);
        let g = flipkit::generate::gnp_with(n, rng.gen_range(0.1..0.9), &mut rng).unwrap();
        let p = Partition::from_labels(&random_labels(n, k, &mut rng));
        let res = convert(&g, &p).unwrap();
        let a = adj(&g);
        let (labels, kk) = canonical(p.labels());
        let dp = dist_p(&a, &labels, kk);
        let gp = adj(&res.flipped);
        let dg = apsp(&gp);
        let mut ok = true;
        for u in 0..n {
            for v in 0..n {
                let bound = dg[u][v].map(|d| 6 * d);
                ok &= leq(dp[u][v], bound);
                if let (Some(x), Some(y)) = (dp[u][v], dg[u][v]) {
                    if y > 0 {
                        worst = worst.max(f64::from(x) / f64::from(y));
                    }
                }
            }
        }
        let refined = res.refined.labels();
        let refines = (0..n).all(|u| (0..n).all(|v| refined[u] != refined[v] || labels[u] == labels[v]));
        let size_ok = res.refined.len() <= kk << kk;
        largest_refinement = largest_refinement.max(res.refined.len());
        let is_flip = is_flip_over(&a, &gp, refined);
        if !(ok && refines && size_ok && is_flip) && violations.len() < 3 {
            violations.push(format!(
                "instance {i}: stretch ok {ok}, refines {refines}, size ok {size_ok}, flip {is_flip}"
            ));
        }
    }
    verdict(
        violations.is_empty(),
        format!(
            "{instances} instances (n <= 10, |P| <= 3), worst dist_P/dist_G' = {worst:.2} (bound 6), \
             largest |P'| = {largest_refinement}, violations: {violations:?}"
        ),
    )
}

fn metric_axioms_hold(d: &[Vec<Dist>]) -> bool {
    let n = d.len();
    (0..n).all(|u| {
        d[u][u] == Some(0)
            && (0..n).all(|v| {
                d[u][v] == d[v][u]
                    && (u == v || leq(Some(2), d[u][v]))
                    && (0..n).all(|w| leq(d[u][w], dadd(d[u][v], d[v][w])))
            })
    })
}

fn dominates(big: &[Vec<Dist>], small: &[Vec<Dist>]) -> bool {
    big.iter().zip(small).all(|(rb, rs)| rb.iter().zip(rs).all(|(&b, &s)| leq(s, b)))
}

fn metric_properties() -> Verdict {
    let instances = 120u64;
    let mut failures = Vec::new();
    let mut refinements = 0;
    for i in 0..instances {
        let mut rng = instance_rng(SEED + 4, i);
        let n = rng.gen_range(2..=10);
        let k = rng.gen_range(1..=3);
        let g = flipkit::generate::gnp_with(n, rng.gen_range(0.1..0.9), &mut rng).unwrap();
        let metric = FlipMetric::new(&g, 4);
        let p = Partition::from_labels(&random_labels(n, k, &mut rng));
        let d = ext_matrix(&metric.all_pairs_partition(&p).unwrap());
        let a = adj(&g);
        let (labels, kk) = canonical(p.labels());
        let oracle = dist_p(&a, &labels, kk);
        let mut ok = d == oracle && metric_axioms_hold(&d);
        // Split the first part with at least two vertices.
        if let Some(part) = p.parts().iter().position(|q| q.len() >= 2) {
            let mut fine = labels.clone();
            let members = p.part(part);
            let cut = rng.gen_range(1..members.len());
            for &v in &members[cut..] {
                fine[v] = kk;
            }
            let fine_d = ext_matrix(&metric.all_pairs_partition(&Partition::from_labels(&fine)).unwrap());
            ok &= dominates(&fine_d, &d) && fine_d == dist_p(&a, &fine, kk + 1);
            refinements += 1;
        }
        if !ok && failures.len() < 3 {
            failures.push(format!("partition instance {i}"));
        }
    }

    // Aggregation: draw S, T until P_{S ∪ T} has at most 4 parts.
    let mut aggregations = 0u64;
    let mut draws = 0u64;
    while aggregations < instances && draws < 100_000 {
        let mut rng = instance_rng(SEED + 40, draws);
        draws += 1;
        let n = rng.gen_range(2..=10);
        let g = flipkit::generate::gnp_with(n, rng.gen_range(0.1..0.9), &mut rng).unwrap();
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
            let size = rng.gen_range(0..=2usize.min(n));
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(rng);
            let mut s = all[..size].to_vec();
            s.sort_unstable();
            s
        };
        let s = pick(&mut rng);
        let t = pick(&mut rng);
        let st: Vec<usize> = s.iter().chain(&t).copied().collect::<BTreeSet<_>>().into_iter().collect();
        let a = adj(&g);
        let (lab, k) = definable_labels(&a, &st);
        if k > 4 {
            continue;
        }
        aggregations += 1;
        let metric = FlipMetric::new(&g, 4);
        let ds = ext_matrix(&metric.all_pairs_definable(&s).unwrap());
        let dt = ext_matrix(&metric.all_pairs_definable(&t).unwrap());
        let dst = ext_matrix(&metric.all_pairs_definable(&st).unwrap());
        let fam = ext_matrix(&metric.all_pairs_family(&SetFamily::new(vec![s.clone(), t.clone()])).unwrap());
        let max_st: Vec<Vec<Dist>> = ds
            .iter()
            .zip(&dt)
            .map(|(rs, rt)| rs.iter().zip(rt).map(|(&x, &y)| dmax(x, y)).collect())
            .collect();
        let ok = dst == dist_p(&a, &lab, k) && dominates(&dst, &max_st) && fam == max_st;
        if !ok && failures.len() < 3 {
            failures.push(format!("aggregation draw {}", draws - 1));
        }
    }
    let enough = aggregations == instances;
    verdict(
        failures.is_empty() && enough,
        format!(
            "{instances} partition instances (n <= 10, |P| <= 3) matched the reference and satisfied \
             identity, symmetry, >= 2, triangle; {refinements} refinements monotone; \
             {aggregations} aggregation instances; failures: {failures:?}"
        ),
    )
}

fn sauer_shelah() -> Verdict {
    let instances = 110u64;
    let mut failures = Vec::new();
    let mut max_dim = 0;
    for i in 0..instances {
        let mut rng = instance_rng(SEED + 5, i);
        let n = rng.gen_range(1..=12);
        let g = flipkit::generate::gnp_with(n, rng.gen_range(0.05..0.95), &mut rng).unwrap();
        let a = adj(&g);
        let oracle = common::shatter_table(&a);
        let lib = flipkit::vc::shatter_table(&g, n);
        let report = vc_dimension(&g, 16).unwrap();
        let d = (0..=n).filter(|&k| oracle[k] == 1 << k).max().unwrap();
        max_dim = max_dim.max(d);
        let bound = |k: usize| (0..=d as u64).map(|j| binomial(k as u64, j)).sum::<u64>();
        let ok = lib == oracle && report.vcdim == d && (0..=n).all(|k| oracle[k] <= bound(k));
        if !ok && failures.len() < 3 {
            failures.push(format!("graph {i}: table {lib:?}, reference {oracle:?}"));
        }
    }
    verdict(
        failures.is_empty(),
        format!("{instances} graphs (n <= 12), largest VC-dimension {max_dim}, failures: {failures:?}"),
    )
}

/// Re-checks a breakability witness from scratch.
fn witness_valid(g: &Graph, wit: &BreakWitness, w: &[usize], r: u32, m: usize) -> bool {
    let a = adj(g);
    let labels = wit.partition.labels();
    let h = flip(&a, labels, |i, j| wit.spec.contains(i, j));
    if h != adj(&wit.flipped) {
        return false;
    }
    let in_w = |xs: &[usize]| xs.iter().all(|x| w.contains(x));
    let distinct = |xs: &[usize]| xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
    let disjoint = wit.a1.iter().all(|x| !wit.a2.contains(x));
    let b1 = ball_of_set(&h, &wit.a1, r);
    let b2 = ball_of_set(&h, &wit.a2, r);
    let balls_apart = b1.iter().zip(&b2).all(|(x, y)| !(x & y));
    wit.a1.len() >= m
        && wit.a2.len() >= m
        && distinct(&wit.a1)
        && distinct(&wit.a2)
        && in_w(&wit.a1)
        && in_w(&wit.a2)
        && disjoint
        && balls_apart
}

/// Disjoint random blocks of at most 8 vertices, optionally complemented,
/// then optionally flipped over a random 2-part partition.
fn planted(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Graph {
    let mut a = vec![vec![false; n]; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut start = 0;
    while start < n {
        let len = rng.gen_range(1..=8).min(n - start);
        let block = &order[start..start + len];
        for (x, &u) in block.iter().enumerate() {
            for &v in &block[x + 1..] {
                let e = rng.gen_bool(0.5);
                a[u][v] = e;
                a[v][u] = e;
            }
        }
        start += len;
    }
    if rng.gen_bool(0.5) {
        a = complement(&a);
    }
    if rng.gen_bool(0.3) {
        let labels = random_labels(n, 2, rng);
        let pairs: Vec<bool> = (0..3).map(|_| rng.gen_bool(0.5)).collect();
        a = flip(&a, &labels, |i, j| pairs[i + j]);
    }
    to_graph(&a)
}

fn sep_to_break() -> Verdict {
    let per_setting = 50u64;
    let mut searches = 0;
    let mut found = 0;
    let mut invalid = Vec::new();
    let half = Eps::new(1, 2).unwrap();
    for m in [1usize, 2] {
        for r in [1u32, 2] {
            for i in 0..per_setting {
                let mut rng = instance_rng(SEED + 6, (m as u64 * 10 + r as u64) * 1000 + i);
                let (g, w) = if m == 1 {
                    let n = rng.gen_range(4..=10);
                    let g = flipkit::generate::gnp_with(n, rng.gen_range(0.1..0.9), &mut rng).unwrap();
                    let mut all: Vec<usize> = (0..n).collect();
                    all.shuffle(&mut rng);
                    let mut w = all[..4].to_vec();
                    w.sort_unstable();
                    (g, w)
                } else {
                    (planted(&mut rng, 16), (0..16).collect())
                };
                let weights = WeightFn::indicator(g.n(), &w).unwrap();
                let out = separability_search(&g, &weights, 4 * r, half, 2, 4, 16).unwrap();
                searches += 1;
                let Some(sep) = out.separation else { continue };
                found += 1;
                // The separation itself, from scratch.
                let h = flip(&adj(&g), sep.partition.labels(), |a, b| sep.spec.contains(a, b));
                let sep_ok = (0..g.n()).all(|v| {
                    let hits = ball(&h, v, 4 * r).iter().enumerate().filter(|&(x, &b)| b && w.contains(&x)).count();
                    2 * hits <= w.len()
                });
                let brk = break_from_sep(&g, &w, r, (&sep.partition, &sep.spec));
                let ok = sep_ok && brk.as_ref().is_ok_and(|b| b.m == m && witness_valid(&g, &b.witness, &w, r, m));
                if !ok && invalid.len() < 3 {
                    invalid.push(format!("m={m} r={r} graph {i}: {:?}", brk.err()));
                }
            }
        }
    }
    verdict(
        invalid.is_empty() && found > 0,
        format!(
            "{searches} searches (m in {{1,2}}, r in {{1,2}}), {found} separations, \
             {found} witnesses re-verified, invalid: {invalid:?}"
        ),
    )
}

fn sunflowers() -> Verdict {
    let mut instances = 0u64;
    let mut failures = Vec::new();
    for t in 1..=3usize {
        for m in 1..=3usize {
            for i in 0..12u64 {
                let mut rng = instance_rng(SEED + 7, (t * 10 + m) as u64 * 100 + i);
                let fact: usize = (1..=t).product();
                let need = fact * (m - 1).pow(t as u32) + 1;
                let ground = (t + 7).max(2 * t + 2);
                let target = need + rng.gen_range(0..4);
                let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
                while family.len() < target {
                    let mut all: Vec<usize> = (0..ground).collect();
                    all.shuffle(&mut rng);
                    let mut s = all[..t].to_vec();
                    s.sort_unstable();
                    family.insert(s);
                }
                let mut sets: Vec<Vec<usize>> = family.into_iter().collect();
                sets.shuffle(&mut rng);
                let f = SetFamily::uniform(t, sets.clone()).unwrap();
                instances += 1;
                let ok = match sunflower_extract(&f, m).unwrap() {
                    None => false,
                    Some(sf) => {
                        let sub = sf.subfamily.sets();
                        let mut core = sf.core.clone();
                        core.sort_unstable();
                        let members = sub.iter().all(|s| sets.iter().any(|x| x.iter().collect::<BTreeSet<_>>() == s.iter().collect()));
                        let distinct = sub.iter().collect::<BTreeSet<_>>().len() == sub.len();
                        let pairwise = (0..sub.len()).all(|x| {
                            (x + 1..sub.len()).all(|y| {
                                let mut c: Vec<usize> = sub[x].iter().filter(|v| sub[y].contains(v)).copied().collect();
                                c.sort_unstable();
                                c == core
                            })
                        });
                        sub.len() == m && members && distinct && pairwise
                    }
                };
                if !ok && failures.len() < 3 {
                    failures.push(format!("t={t} m={m} family {i}"));
                }
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!("{instances} uniform families (t <= 3, m <= 3) at the size threshold, failures: {failures:?}"),
    )
}

fn emulation_witnesses() -> Verdict {
    let instances = 40u64;
    let mut found = 0;
    let mut sets_tried = 0;
    let mut largest = 0;
    let mut failures = Vec::new();
    for i in 0..instances {
        let mut rng = instance_rng(SEED + 8, i);
        let n = rng.gen_range(2..=7);
        let g = flipkit::generate::gnp_with(n, rng.gen_range(0.1..0.9), &mut rng).unwrap();
        let p = Partition::from_labels(&random_labels(n, 2, &mut rng));
        let spec = FlipSpec::from_index(p.len(), rng.gen_range(0..1u64 << (p.len() * (p.len() + 1) / 2)));
        let gprime = apply_flip(&g, &p, &spec).unwrap();
        let r_max = rng.gen_range(1..=2);
        let out = search_definable_emulation(&g, &gprime, r_max, n).unwrap();
        sets_tried += out.stats.sets_tried;
        let Some(wit) = out.witness else { continue };
        found += 1;
        largest = largest.max(wit.set.len());
        let a = adj(&g);
        let (lab, _) = definable_labels(&a, &wit.set);
        let same_partition = parts_of(&lab) == sorted_parts(wit.partition.parts())
            && definable_partition(&g, &wit.set).unwrap() == wit.partition;
        let h = flip(&a, wit.partition.labels(), |x, y| wit.spec.contains(x, y));
        let gp = adj(&gprime);
        let contained = (0..n).all(|v| {
            (1..=r_max).all(|r| {
                let inner = ball(&h, v, r);
                let outer = ball(&gp, v, 5 * r);
                inner.iter().zip(&outer).all(|(&x, &y)| !x || y)
            })
        });
        if !(same_partition && h == adj(&wit.graph) && contained) && failures.len() < 3 {
            failures.push(format!("pair {i}"));
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{instances} (graph, 2-flip) pairs (n <= 7, r <= 2): {found} witnesses found and re-verified, \
             {sets_tried} defining sets tried, largest |S| = {largest}; failures: {failures:?}"
        ),
    )
}

fn small_balls() -> Verdict {
    let budget = BreakBudget {
        s_max: 1,
        ..BreakBudget::default()
    };
    let cases: Vec<(&str, Graph, u32, Eps, usize)> = vec![
        ("path 40", path(40), 1, Eps::new(1, 2).unwrap(), 2),
        ("path 30", path(30), 2, Eps::new(1, 3).unwrap(), 2),
        ("grid 5x8", grid(5, 8), 1, Eps::new(1, 2).unwrap(), 2),
        ("grid 6x6", grid(6, 6), 1, Eps::new(1, 3).unwrap(), 1),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, g, r, eps, m) in cases {
        let n = g.n();
        let f = SetFamily::uniform(1, (0..n).map(|v| vec![v]).collect()).unwrap();
        let w = WeightFn::uniform(n);
        let out = small_balls_orchestrate(&g, &w, &f, r, eps, m, &budget).unwrap();
        let Some(res) = out.result else {
            ok = false;
            lines.push(format!("{name}: no result ({:?})", out.failure));
            continue;
        };
        // Ball^r_Y(A) is the union over a ∈ A of the intersection over
        // S ∈ Y and every P_S-flip of the r-ball of a.
        let a = adj(&g);
        let flips: Vec<Adj> = res
            .y
            .sets()
            .iter()
            .flat_map(|s| {
                let (lab, k) = definable_labels(&a, s);
                all_flips(&a, &lab, k)
            })
            .collect();
        let yunion: BTreeSet<usize> = res.y.sets().iter().flatten().copied().collect();
        let mut worst = 0usize;
        for s in res.fprime.sets() {
            let mut covered = vec![false; n];
            for &v in s.iter().filter(|v| !yunion.contains(v)) {
                let mut inter = vec![true; n];
                for h in &flips {
                    for (x, b) in inter.iter_mut().zip(ball(h, v, r)) {
                        *x &= b;
                    }
                }
                for (c, x) in covered.iter_mut().zip(inter) {
                    *c |= x;
                }
            }
            worst = worst.max(covered.iter().filter(|&&c| c).count());
        }
        let bound_ok = (worst as u64) * eps.den() <= eps.num() * n as u64;
        ok &= bound_ok && res.fprime.len() >= m;
        lines.push(format!(
            "{name}: |F'| = {}, |Y| = {}, largest ball {worst} of {n} (eps {}/{})",
            res.fprime.len(),
            res.y.len(),
            eps.num(),
            eps.den()
        ));
    }
    verdict(ok, lines.join("; "))
}

fn flipkit_bin() -> &'static str {
    env!("CARGO_BIN_EXE_flipkit")
}

fn run_cli(args: &[&str], report: &Path) -> (Vec<u8>, Vec<u8>, Option<i32>) {
    let _ = std::fs::remove_file(report);
    let out = Command::new(flipkit_bin())
        .args(args)
        .arg("--seed")
        .arg("7")
        .arg("--report")
        .arg(report)
        .env_remove("FLIPKIT_MAX_PARTS")
        .output()
        .expect("binary runs");
    (out.stdout, std::fs::read(report).unwrap_or_default(), out.status.code())
}

fn cli_determinism() -> Verdict {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cli");
    std::fs::create_dir_all(&dir).unwrap();
    let file = |name: &str, content: &str| -> String {
        let p = dir.join(name);
        std::fs::write(&p, content).unwrap();
        p.to_string_lossy().into_owned()
    };
    let graph = file("g.txt", &flipkit::io::write_graph(&flipkit::generate::gnp(9, 0.4, 3).unwrap()));
    let p10 = file("p10.txt", &flipkit::io::write_graph(&path(10)));
    let part = file("part.txt", "0 0\n1 0\n2 1\n3 1\n4 2\n5 2\n6 0\n7 1\n8 2\n");
    let w4 = file("w4.txt", "0 2 5 8\n");
    let wall = file("wall.txt", "0 1 2 3 4 5 6 7 8 9\n");
    let weights = file("weights.txt", "0 1\n1 2\n2 1\n3 1\n");
    let family = file("family.txt", "0\n3\n");
    let bip = file("b.txt", "5 3\nU: 0 1\n0 2\n1 3\n1 4\n");
    let report_json = dir.join("r0.json").to_string_lossy().into_owned();
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "gnp", "12", "0.3"],
        vec!["gen", "grid", "3", "4"],
        vec!["gen", "halfgraph", "4"],
        vec!["diam", &graph],
        vec!["diam", "--bipartite", &bip],
        vec!["vcdim", &graph],
        vec!["dist", &graph, "--partition", &part, "--all-pairs"],
        vec!["dist", &graph, "--set", "4", "0", "5"],
        vec!["dist", &graph, "--family", &family, "--all-pairs"],
        vec!["convert", &graph, "--partition", &part, "--check", "--definable"],
        vec!["break", &p10, "--W", &wall, "-r", "1", "-m", "2", "--s-max", "1"],
        vec!["separate", &graph, "--weights", &weights, "-r", "1", "--eps", "1/2", "--k-max", "2"],
        vec!["sep2break", &graph, "--W", &w4, "-r", "1", "-m", "1"],
        vec!["verify", "conversion", "--random", "20", "--n", "7"],
        vec!["verify", "diam-complement", "--exhaustive", "4"],
        vec!["export", &graph, "--format", "dot", "--partition", &part],
        vec!["export", &report_json, "--format", "report-csv"],
    ];
    // The report-csv export reads a report written by an earlier command.
    run_cli(&["diam", &graph], Path::new(&report_json));
    let mut differing = Vec::new();
    let mut errors = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let report = dir.join(format!("report{i}.json"));
        let first = run_cli(args, &report);
        let second = run_cli(args, &report);
        if first != second {
            differing.push(args.join(" "));
        }
        if first.2 == Some(2) || first.1.is_empty() {
            errors.push(args[0].to_string());
        }
    }
    verdict(
        differing.is_empty() && errors.is_empty(),
        format!(
            "{} invocations run twice with --seed 7, byte-identical stdout and reports; \
             differing: {differing:?}, errors: {errors:?}",
            commands.len()
        ),
    )
}
