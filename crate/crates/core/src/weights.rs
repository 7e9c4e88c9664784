//! Vertex weights and the `ε` threshold they are compared against.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// Absolute tolerance for comparisons involving non-integral weights.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// A nonnegative rational threshold `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Eps {
    num: u64,
    den: u64,
}

impl Eps {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("epsilon with zero denominator"));
        }
        let g = gcd(num, den);
        Ok(Eps { num: num / g, den: den / g })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌈1/ε⌉`, the number of disjoint balls needed so that one of them
    /// carries at most an `ε` share of the weight.
    pub fn ceil_inverse(self) -> Result<u64> {
        if self.num == 0 {
            return Err(Error::domain("epsilon must be positive"));
        }
        Ok(self.den.div_ceil(self.num))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl FromStr for Eps {
    type Err = Error;

    /// Accepts `a/b` or a plain decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            msg: format!("invalid epsilon {s:?}"),
        };
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            return Eps::new(a, b);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Eps::new(int * den + frac, den)
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Nonnegative weights per vertex with a cached total.
///
/// When every weight is a (small) integer, threshold comparisons are exact;
/// otherwise they allow [`REAL_TOLERANCE`].
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFn {
    weights: Vec<f64>,
    total: f64,
    integral: bool,
}

impl WeightFn {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((v, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::domain(format!("weight of vertex {v} is {w}, expected a finite value >= 0")));
        }
        let integral = weights.iter().all(|w| w.fract() == 0.0 && *w < 2f64.powi(52));
        let total = weights.iter().sum();
        Ok(WeightFn { weights, total, integral })
    }

    pub fn uniform(n: usize) -> Self {
        WeightFn::new(vec![1.0; n]).expect("unit weights are valid")
    }

    /// Weight 1 on `set`, 0 elsewhere.
    pub fn indicator(n: usize, set: &[usize]) -> Result<Self> {
        let mut w = vec![0.0; n];
        for &v in set {
            if v >= n {
                return Err(Error::domain(format!("vertex {v} out of range for n = {n}")));
            }
            w[v] = 1.0;
        }
        WeightFn::new(w)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn of_set(&self, set: &VertexSet) -> f64 {
        set.ones().map(|v| self.weights[v]).sum()
    }

    /// `amount ≤ ε · w(V)`.
    pub fn within(&self, amount: f64, eps: Eps) -> bool {
        if self.integral && amount.fract() == 0.0 {
            (amount as u128) * u128::from(eps.den) <= u128::from(eps.num) * (self.total as u128)
        } else {
            amount <= eps.as_f64() * self.total + REAL_TOLERANCE
        }
    }

    /// `w(v) ≤ ε · w(V)`: the vertices the separability condition constrains.
    pub fn is_small(&self, v: usize, eps: Eps) -> bool {
        self.within(self.weights[v], eps)
    }

    /// No vertex is heavier than `ε · w(V)`.
    pub fn is_balanced(&self, eps: Eps) -> bool {
        (0..self.n()).all(|v| self.is_small(v, eps))
    }
}
