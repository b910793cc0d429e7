//! Exact Lebesgue measure for finite interval unions, the Diophantine
//! overlap estimates, and Chung-Erdos lower bounds for layer unions.
//!
//! E(delta, n) denotes the union of open intervals (m/n - delta, m/n + delta)
//! over the residues m coprime to n. Products of these 1-d unions are the
//! cell families whose (d-1)-dimensional measures drive the covering lower
//! bounds; by the product structure, every d-dimensional quantity here is a
//! (d-1)-th power of a 1-d sweep, so all results stay exact rationals.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::covering::{layer_denominators, DyadicScale};
use crate::error::{Error, Result};
use crate::exact::{ratio_pow, ratio_u};
use crate::number_theory::coprime_residues;
use crate::sets::SetSpec;

/// Sorted union of disjoint open intervals with exact rational endpoints.
/// Touching intervals stay separate (the shared endpoint has measure zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalUnion {
    intervals: Vec<(BigRational, BigRational)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    /// Sorts, drops degenerate intervals and merges overlapping ones.
    pub fn from_intervals(mut intervals: Vec<(BigRational, BigRational)>) -> Self {
        intervals.retain(|(l, r)| l < r);
        intervals.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BigRational, BigRational)> = Vec::with_capacity(intervals.len());
        for (l, r) in intervals {
            match merged.last_mut() {
                Some(last) if l < last.1 => {
                    if r > last.1 {
                        last.1 = r;
                    }
                }
                _ => merged.push((l, r)),
            }
        }
        Self { intervals: merged }
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        let mut total = BigRational::zero();
        for (l, r) in &self.intervals {
            total += r - l;
        }
        total
    }

    /// Intersection by a two-pointer walk over the sorted interval lists.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (al, ar) = &self.intervals[i];
            let (bl, br) = &other.intervals[j];
            let lo = al.max(bl);
            let hi = ar.min(br);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if ar < br {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { intervals: out }
    }

    pub fn clip(&self, lo: &BigRational, hi: &BigRational) -> Self {
        let clipped = self
            .intervals
            .iter()
            .filter_map(|(l, r)| {
                let a = l.max(lo).clone();
                let b = r.min(hi).clone();
                (a < b).then_some((a, b))
            })
            .collect();
        Self { intervals: clipped }
    }
}

/// The product family E^{(d-1)}(delta, n): cubes of half-width delta around
/// the coprime rational tuples with denominator n. Products distribute over
/// unions, so its (d-1)-measure is the (d-1)-th power of the 1-d measure.
#[derive(Clone, Debug)]
pub struct CellFamily {
    pub n: u64,
    pub delta: BigRational,
}

impl CellFamily {
    pub fn new(n: u64, delta: BigRational) -> Self {
        Self { n, delta }
    }

    /// The 1-d interval union underlying every axis of the product.
    pub fn intervals(&self, clip: bool) -> Result<IntervalUnion> {
        approx_intervals(self.n, &self.delta, clip)
    }

    /// Exact (d-1)-dimensional measure of the family inside the unit cube.
    pub fn measure(&self, d: u32) -> Result<BigRational> {
        Ok(ratio_pow(&self.intervals(true)?.measure(), d - 1))
    }
}

/// Measure of the union of several families, by a single sweep.
pub fn union_measure(families: &[IntervalUnion]) -> BigRational {
    let all: Vec<_> = families
        .iter()
        .flat_map(|f| f.intervals.iter().cloned())
        .collect();
    IntervalUnion::from_intervals(all).measure()
}

/// E(delta, n): intervals of half-width delta around the coprime fractions
/// m/n, merged where they overlap and optionally clipped to [0,1].
pub fn approx_intervals(n: u64, delta: &BigRational, clip: bool) -> Result<IntervalUnion> {
    if n < 2 {
        return Err(Error::Domain(format!("approx intervals need n >= 2, got {n}")));
    }
    if !delta.is_positive() {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let intervals = coprime_residues(n)
        .into_iter()
        .map(|m| {
            let center = ratio_u(m, n);
            (&center - delta, &center + delta)
        })
        .collect();
    let union = IntervalUnion::from_intervals(intervals);
    Ok(if clip {
        union.clip(&BigRational::zero(), &BigRational::one())
    } else {
        union
    })
}

/// Exact overlap L_1(E(delta, q) ∩ E(delta, k)) for distinct denominators,
/// both families clipped to [0,1].
pub fn pair_intersection_measure_1d(q: u64, k: u64, delta: &BigRational) -> Result<BigRational> {
    if q == k {
        return Err(Error::Domain("overlap estimate needs distinct denominators".into()));
    }
    let eq = approx_intervals(q, delta, true)?;
    let ek = approx_intervals(k, delta, true)?;
    Ok(eq.intersect(&ek).measure())
}

/// (d-1)-dimensional overlap of the product families: the (d-1)-th power of
/// the 1-d overlap, by the product structure of the cells.
pub fn pair_intersection_measure(
    q: u64,
    k: u64,
    delta: &BigRational,
    d: u32,
) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    Ok(ratio_pow(&pair_intersection_measure_1d(q, k, delta)?, d - 1))
}

/// The overlap ceiling (4 q k delta^2)^{d-1} for distinct denominators.
pub fn duffin_schaeffer_bound(q: u64, k: u64, delta: &BigRational, d: u32) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(4u32))
        * BigRational::from_integer(BigInt::from(q))
        * BigRational::from_integer(BigInt::from(k))
        * delta
        * delta;
    ratio_pow(&base, d - 1)
}

/// (sum mu(A_i))^2 / (sum_kl mu(A_k ∩ A_l)): a lower bound for the union
/// measure of finitely many events. The matrix must be symmetric, match the
/// singles on its diagonal, and be consistent (pairs bounded by singles).
pub fn chung_erdos_bound(
    singles: &[BigRational],
    pairs: &[Vec<BigRational>],
) -> Result<BigRational> {
    let n = singles.len();
    if n == 0 {
        return Err(Error::Domain("need at least one event".into()));
    }
    if pairs.len() != n || pairs.iter().any(|row| row.len() != n) {
        return Err(Error::Domain(format!("pair matrix must be {n}x{n}")));
    }
    if singles.iter().any(|s| s.is_negative()) {
        return Err(Error::Domain("event measures must be nonnegative".into()));
    }
    if singles.iter().all(|s| s.is_zero()) {
        return Err(Error::Domain("at least one event must have positive measure".into()));
    }
    for i in 0..n {
        if pairs[i][i] != singles[i] {
            return Err(Error::Domain(format!("diagonal entry {i} must equal its event measure")));
        }
        for j in 0..n {
            if pairs[i][j] != pairs[j][i] {
                return Err(Error::Domain(format!("pair matrix not symmetric at ({i},{j})")));
            }
            if pairs[i][j].is_negative() || pairs[i][j] > singles[i] || pairs[i][j] > singles[j] {
                return Err(Error::Domain(format!(
                    "pair measure at ({i},{j}) inconsistent with event measures"
                )));
            }
        }
    }
    let top: BigRational = singles.iter().sum();
    let bottom: BigRational = pairs.iter().flatten().sum();
    Ok(&top * &top / bottom)
}

/// Measures attached to one horizontal layer: the sum of the family measures
/// and the full pairwise-intersection sum (diagonal included).
#[derive(Clone, Debug)]
pub struct LayerMeasures {
    pub k: u64,
    pub denom_lo: u64,
    pub denom_hi: u64,
    pub sum: BigRational,
    pub pair_sum: BigRational,
}

fn layer_families(
    spec: &SetSpec,
    scale: DyadicScale,
    k: u64,
) -> Result<Vec<IntervalUnion>> {
    let (lo, hi) = layer_denominators(spec, scale, k);
    let delta = scale.delta();
    let mut families = Vec::new();
    for n in lo + 1..=hi.max(lo) {
        if n >= 2 {
            families.push(approx_intervals(n, &delta, true)?);
        }
    }
    Ok(families)
}

pub fn layer_measures(spec: &SetSpec, scale: DyadicScale, k: u64) -> Result<LayerMeasures> {
    let (lo, hi) = layer_denominators(spec, scale, k);
    let families = layer_families(spec, scale, k)?;
    let e = spec.d() - 1;
    let singles: Vec<BigRational> = families.iter().map(|f| ratio_pow(&f.measure(), e)).collect();
    let sum: BigRational = singles.iter().sum();
    let mut pair_sum: BigRational = singles.iter().sum();
    for i in 0..families.len() {
        for j in i + 1..families.len() {
            let overlap = families[i].intersect(&families[j]).measure();
            pair_sum += ratio_pow(&overlap, e) * BigRational::from_integer(BigInt::from(2));
        }
    }
    Ok(LayerMeasures { k, denom_lo: lo, denom_hi: hi, sum, pair_sum })
}

/// Sum over the layer's denominators n of the (d-1)-measure of E(delta, n).
pub fn layer_sum_measure(spec: &SetSpec, scale: DyadicScale, k: u64) -> Result<BigRational> {
    Ok(layer_measures(spec, scale, k)?.sum)
}

/// Double sum of pairwise intersection measures over the layer, diagonal
/// included.
pub fn layer_pair_sum(spec: &SetSpec, scale: DyadicScale, k: u64) -> Result<BigRational> {
    Ok(layer_measures(spec, scale, k)?.pair_sum)
}

/// Certified lower bound sum^2 / pair_sum on the measure of the layer's
/// E-union. Dividing by delta^{d-1} floors the layer cover count up to the
/// mesh comparability constant.
pub fn chung_erdos_layer_floor(
    spec: &SetSpec,
    scale: DyadicScale,
    k: u64,
) -> Result<BigRational> {
    let m = layer_measures(spec, scale, k)?;
    if m.sum.is_zero() {
        return Err(Error::Domain(format!("layer {k} carries no mass at this scale")));
    }
    Ok(&m.sum * &m.sum / m.pair_sum)
}

/// Exact sweep-line measure of the layer's E-union. The sweep is
/// one-dimensional, so this is only available for d = 2; higher dimensions
/// go through cover counts instead.
pub fn layer_union_measure(spec: &SetSpec, scale: DyadicScale, k: u64) -> Result<BigRational> {
    if spec.d() != 2 {
        return Err(Error::Domain(
            "exact union measure is computed by interval sweep, d = 2 only".into(),
        ));
    }
    Ok(union_measure(&layer_families(spec, scale, k)?))
}
