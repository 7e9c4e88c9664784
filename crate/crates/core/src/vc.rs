//! Exact VC-dimension and shatter function of the open-neighbourhood set
//! system `{N(v) : v ∈ V}`.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

/// Default cap on the subset size `n` accepted by [`shatter_function`].
pub const DEFAULT_SHATTER_CAP: usize = 5;
/// Default cap on the vertex count accepted by [`vc_dimension`].
pub const DEFAULT_VC_VERTEX_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShatterReport {
    pub vcdim: usize,
    /// `traces_by_size[n] = π_G(n)` for every computed `n`.
    pub traces_by_size: Vec<u64>,
    /// A shattered set of size `vcdim`.
    pub witness: Vec<usize>,
}

/// `C(n, k)` as `u64`, saturating.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The Sauer–Shelah bound `Σ_{i=0}^{d} C(n, i)`.
pub fn sauer_shelah_bound(n: u64, d: u64) -> u64 {
    (0..=d).fold(0u64, |acc, i| acc.saturating_add(binomial(n, i)))
}

/// Number of distinct traces `N(v) ∩ A` over all `v`.
pub fn trace_count(g: &Graph, a: &[usize]) -> u64 {
    let mut seen = FixedBitSet::with_capacity(1 << a.len());
    for v in 0..g.n() {
        let row = g.neighbors(v);
        let code = a
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &x)| acc | (usize::from(row.contains(x)) << i));
        seen.insert(code);
    }
    seen.count_ones(..) as u64
}

/// Lexicographic successor of a `k`-combination of `0..n`.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Best trace count over all `k`-subsets, with the first subset reaching it.
/// Work is split by the first element of the subset.
fn best_subset(g: &Graph, k: usize) -> (u64, Vec<usize>) {
    let n = g.n();
    if k == 0 {
        return (u64::from(n > 0), Vec::new());
    }
    let per_first = par::map_range(n as u64, |first| {
        let first = first as usize;
        if first + k > n {
            return (0, Vec::new());
        }
        let mut best = (0u64, Vec::new());
        let mut rest: Vec<usize> = (first + 1..first + k).collect();
        loop {
            let mut a = Vec::with_capacity(k);
            a.push(first);
            a.extend_from_slice(&rest);
            let c = trace_count(g, &a);
            if c > best.0 {
                best = (c, a);
                if best.0 == 1 << k {
                    break;
                }
            }
            if rest.is_empty() || !next_combination_above(&mut rest, first + 1, n) {
                break;
            }
        }
        best
    });
    per_first
        .into_iter()
        .fold((0, Vec::new()), |acc, x| if x.0 > acc.0 { x } else { acc })
}

/// Successor of a combination drawn from `lo..n`.
fn next_combination_above(c: &mut [usize], lo: usize, n: usize) -> bool {
    c.iter_mut().for_each(|x| *x -= lo);
    let more = next_combination(c, n - lo);
    c.iter_mut().for_each(|x| *x += lo);
    more
}

/// `π_G(k) = max_{|A| = k} |{N(v) ∩ A : v ∈ V}|`.
pub fn shatter_function(g: &Graph, k: usize, cap: usize) -> Result<u64> {
    if k > g.n() {
        return Err(Error::domain(format!("subset size {k} exceeds n = {}", g.n())));
    }
    if k > cap {
        return Err(Error::CapExceeded {
            what: "subset size",
            value: k,
            cap,
            flag: "--max-n",
        });
    }
    Ok(best_subset(g, k).0)
}

/// `π_G(k)` for `k = 0..=max_k` (clamped to `n`).
pub fn shatter_table(g: &Graph, max_k: usize) -> Vec<u64> {
    (0..=max_k.min(g.n())).map(|k| best_subset(g, k).0).collect()
}

/// Exact VC-dimension: the largest `k` with `π_G(k) = 2^k`. The search stops
/// at the first `k` that is not shattered, since subsets of shattered sets
/// are shattered.
pub fn vc_dimension(g: &Graph, vertex_cap: usize) -> Result<ShatterReport> {
    if g.n() > vertex_cap {
        return Err(Error::CapExceeded {
            what: "vertex count",
            value: g.n(),
            cap: vertex_cap,
            flag: "--max-vertices",
        });
    }
    let mut traces = Vec::new();
    let mut witness = Vec::new();
    let mut vcdim = 0;
    for k in 0..=g.n() {
        let (count, set) = best_subset(g, k);
        traces.push(count);
        if count == 1 << k {
            vcdim = k;
            witness = set;
        } else {
            break;
        }
    }
    Ok(ShatterReport {
        vcdim,
        traces_by_size: traces,
        witness,
    })
}

/// `true` iff every subset of `a` is realised as a trace.
pub fn is_shattered(g: &Graph, a: &[usize]) -> bool {
    a.len() < 64 && trace_count(g, a) == 1 << a.len()
}
