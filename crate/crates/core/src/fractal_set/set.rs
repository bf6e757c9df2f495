use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_div, floor, pow2, qi, qmax, qmin, to_f64, Q};

use super::generator::FractalGenerator;

/// Closed interval [lo, hi]; a point when lo == hi.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn len(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sort and merge overlapping or touching closed intervals.
pub(crate) fn merge(mut v: Vec<Interval>) -> Vec<Interval> {
    v.sort();
    let mut out: Vec<Interval> = Vec::with_capacity(v.len());
    for iv in v {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// A compact subset of [1,2] given as a finite union of disjoint closed
/// intervals (points allowed), sorted by left endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalSet {
    intervals: Vec<Interval>,
    generator: FractalGenerator,
}

impl FractalSet {
    pub fn from_generator(generator: FractalGenerator) -> Result<Self> {
        generator.validate()?;
        let intervals = merge(generator.raw_intervals());
        Ok(FractalSet { intervals, generator })
    }

    pub fn parse(expr: &str) -> Result<Self> {
        Self::from_generator(FractalGenerator::parse(expr)?)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn generator(&self) -> &FractalGenerator {
        &self.generator
    }

    pub fn depth(&self) -> u32 {
        self.generator.depth()
    }

    pub fn resolution(&self) -> Option<Q> {
        self.generator.resolution()
    }

    pub fn min(&self) -> &Q {
        &self.intervals[0].lo
    }

    pub fn max(&self) -> &Q {
        &self.intervals[self.intervals.len() - 1].hi
    }

    pub fn contains(&self, x: &Q) -> bool {
        let i = self.intervals.partition_point(|iv| iv.hi < *x);
        i < self.intervals.len() && self.intervals[i].lo <= *x
    }

    /// Point of E nearest to `x` (ties go left).
    pub fn nearest(&self, x: &Q) -> Q {
        let i = self.intervals.partition_point(|iv| iv.hi < *x);
        if i < self.intervals.len() && self.intervals[i].lo <= *x {
            return x.clone();
        }
        let right = self.intervals.get(i).map(|iv| iv.lo.clone());
        let left = if i > 0 { Some(self.intervals[i - 1].hi.clone()) } else { None };
        match (left, right) {
            (Some(l), Some(r)) => {
                if x - &l <= &r - x {
                    l
                } else {
                    r
                }
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => unreachable!("sets are non-empty"),
        }
    }

    /// Smallest point of E that is ≥ x.
    pub fn next_point_at_or_after(&self, x: &Q) -> Option<Q> {
        let i = self.intervals.partition_point(|iv| iv.hi < *x);
        self.intervals.get(i).map(|iv| qmax(&iv.lo, x))
    }

    /// Greedy covering number N(E, δ) by closed intervals of length δ.
    pub fn covering_number(&self, delta: &Q) -> Result<u64> {
        check_delta(delta)?;
        Ok(greedy_cover(&self.intervals, None, delta))
    }

    /// N(E ∩ I, δ); requires |I| ≥ δ.
    pub fn local_covering_number(&self, window: &Interval, delta: &Q) -> Result<u64> {
        check_delta(delta)?;
        if window.lo > window.hi {
            return Err(Error::InvalidWindow(format!("{window} is empty")));
        }
        if window.len() < *delta {
            return Err(Error::InvalidWindow(format!("|{window}| is below δ = {delta}")));
        }
        Ok(greedy_cover(&self.intervals, Some(window), delta))
    }

    /// Number of half-open dyadic cells [m2^j, (m+1)2^j) meeting E; the
    /// cell whose closure ends at 2 is taken closed on the right.
    pub fn binary_covering_number(&self, j: i64) -> Result<u64> {
        if j > 0 {
            return Err(Error::InvalidScale(format!("dyadic exponent j = {j} must be ≤ 0")));
        }
        let width = pow2(j);
        let two = qi(2);
        let last_cell: BigInt = floor(&(&two / &width)) - BigInt::from(1);
        let cell = |x: &Q| -> BigInt {
            if *x == two {
                last_cell.clone()
            } else {
                floor(&(x / &width))
            }
        };
        let mut count = BigInt::zero();
        let mut last: Option<BigInt> = None;
        for iv in &self.intervals {
            let a = cell(&iv.lo);
            let b = cell(&iv.hi);
            let start = match &last {
                Some(l) if *l >= a => l + 1,
                _ => a,
            };
            if b >= start {
                count += &b - &start + 1;
            }
            last = Some(match last {
                Some(l) if l > b => l,
                _ => b,
            });
        }
        Ok(count.to_u64().unwrap_or(u64::MAX))
    }

    /// |W_n| with W_n = {r ≥ 0 : dist(r, E) ≤ 2^{-n+1}}.
    pub fn neighborhood_measure(&self, n: i64) -> Q {
        let rho = pow2(1 - n);
        let dilated: Vec<Interval> = self
            .intervals
            .iter()
            .map(|iv| Interval::new(qmax(&(&iv.lo - &rho), &Q::zero()), &iv.hi + &rho))
            .collect();
        merge(dilated).iter().map(|iv| iv.len()).sum()
    }

    /// |D_n| = |W_n \ W_{n+1}|.
    pub fn annulus_measure(&self, n: i64) -> Q {
        self.neighborhood_measure(n) - self.neighborhood_measure(n + 1)
    }

    /// δ^β N(E, δ).
    pub fn minkowski_characteristic(&self, beta: f64, delta: &Q) -> Result<f64> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::param("beta", format!("{beta} not in [0,1]")));
        }
        check_unit_delta(delta)?;
        let n = self.covering_number(delta)? as f64;
        Ok(to_f64(delta).powf(beta) * n)
    }

    /// sup over windows I with δ ≤ |I| ≤ 1 of (δ/|I|)^γ N(E ∩ I, δ).
    /// Window lengths are dyadic and windows start at the anchors of
    /// [`FractalSet::window_anchors`].
    pub fn assouad_characteristic(&self, gamma: f64, delta: &Q) -> Result<f64> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::param("gamma", format!("{gamma} not in [0,1]")));
        }
        check_unit_delta(delta)?;
        let d = to_f64(delta);
        let mut best = 0.0f64;
        let mut j = 0i64;
        loop {
            let len = pow2(-j);
            if len < *delta {
                break;
            }
            let count = self.max_window_count(&len, delta);
            best = best.max((d / to_f64(&len)).powf(gamma) * count as f64);
            j += 1;
        }
        Ok(best)
    }

    /// Anchors for windows of length `len`: the leftmost point of E, then
    /// repeatedly the first point of E at distance ≥ len/2 from the last
    /// anchor. Every window of length `len` meeting E lies in the union of
    /// two consecutive anchored windows.
    pub fn window_anchors(&self, len: &Q) -> Vec<Q> {
        let half = len / qi(2);
        let mut out = vec![self.min().clone()];
        loop {
            let target = out.last().unwrap() + &half;
            match self.next_point_at_or_after(&target) {
                Some(a) => out.push(a),
                None => return out,
            }
        }
    }

    /// max over anchored windows I of length `len` of N(E ∩ I, δ).
    pub fn max_window_count(&self, len: &Q, delta: &Q) -> u64 {
        self.window_anchors(len)
            .into_iter()
            .map(|a| {
                let w = Interval::new(a.clone(), a + len);
                greedy_cover(&self.intervals, Some(&w), delta)
            })
            .max()
            .unwrap_or(0)
    }

    /// Greedy maximal set of points of E with mutual distance ≥ δ.
    pub fn separated_points(&self, delta: &Q) -> Vec<Q> {
        self.separated_points_in(delta, None)
    }

    pub fn separated_points_in(&self, delta: &Q, window: Option<&Interval>) -> Vec<Q> {
        let (lo, hi) = match window {
            Some(w) => (w.lo.clone(), w.hi.clone()),
            None => (self.min().clone(), self.max().clone()),
        };
        let mut out = Vec::new();
        let mut next = self.next_point_at_or_after(&lo);
        while let Some(p) = next {
            if p > hi {
                break;
            }
            next = self.next_point_at_or_after(&(&p + delta));
            out.push(p);
        }
        out
    }

    /// Points of E on a grid of the given spacing: every isolated point,
    /// and lo, lo+h, …, hi inside each non-degenerate interval.
    pub fn grid_points(&self, spacing: &Q) -> Vec<Q> {
        let mut out = Vec::new();
        for iv in &self.intervals {
            out.push(iv.lo.clone());
            if iv.is_point() {
                continue;
            }
            let steps = ceil_div(&iv.len(), spacing).to_u64().unwrap_or(1).max(1);
            let h = iv.len() / qi(steps as i64);
            for k in 1..steps {
                out.push(&iv.lo + &h * qi(k as i64));
            }
            out.push(iv.hi.clone());
        }
        out
    }

    /// Interval of E that contains x, if any.
    pub fn component_of(&self, x: &Q) -> Option<&Interval> {
        let i = self.intervals.partition_point(|iv| iv.hi < *x);
        self.intervals.get(i).filter(|iv| iv.lo <= *x)
    }
}

fn check_delta(delta: &Q) -> Result<()> {
    if *delta <= Q::zero() {
        return Err(Error::InvalidScale(format!("δ = {delta} must be positive")));
    }
    Ok(())
}

fn check_unit_delta(delta: &Q) -> Result<()> {
    check_delta(delta)?;
    if *delta >= qi(1) {
        return Err(Error::InvalidScale(format!("δ = {delta} must be below 1")));
    }
    Ok(())
}

/// Left-to-right greedy cover of (E ∩ window) by closed intervals of
/// length δ, skipping fully covered components by binary search.
fn greedy_cover(ivs: &[Interval], window: Option<&Interval>, delta: &Q) -> u64 {
    let (start, stop) = match window {
        Some(w) => (
            ivs.partition_point(|iv| iv.hi < w.lo),
            ivs.partition_point(|iv| iv.lo <= w.hi),
        ),
        None => (0, ivs.len()),
    };
    let clip = |iv: &Interval| -> (Q, Q) {
        match window {
            Some(w) => (qmax(&iv.lo, &w.lo), qmin(&iv.hi, &w.hi)),
            None => (iv.lo.clone(), iv.hi.clone()),
        }
    };
    let mut count = BigInt::zero();
    let mut end: Option<Q> = None;
    let mut i = start;
    while i < stop {
        let (a, b) = clip(&ivs[i]);
        match &end {
            Some(e) if a <= *e => {
                if b > *e {
                    let k = ceil_div(&(&b - e), delta);
                    let new_end = e + delta * Q::from_integer(k.clone());
                    count += k;
                    end = Some(new_end);
                }
            }
            _ => {
                let k = ceil_div(&(&b - &a), delta).max(BigInt::from(1));
                end = Some(&a + delta * Q::from_integer(k.clone()));
                count += k;
            }
        }
        let e = end.as_ref().unwrap();
        let jump = i + 1 + ivs[i + 1..stop].partition_point(|iv| iv.hi <= *e);
        i = jump;
    }
    count.to_u64().unwrap_or(u64::MAX)
}
