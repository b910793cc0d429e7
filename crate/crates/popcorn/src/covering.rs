//! Exact dyadic-mesh covers: cell indexing, cover counts, horizontal layers
//! and localized counts.
//!
//! Cells are half-open cubes [i*delta, (i+1)*delta) with the top cell closed,
//! so every point lands in exactly one cell and all indices are integer
//! computations. The base hyperplane is covered analytically by a full row of
//! cells at height index 0; that row also absorbs every point whose height is
//! below delta, which is what makes the enumeration cutoff finite. Layer k
//! collects the graph points with height in [k*delta, (k+1)*delta), i.e. the
//! denominators n with l(k+1) < n <= l(k).

use std::collections::HashSet;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, dyadic, nth_root_floor, pow2};
use crate::number_theory::{gcd, ResidueSieve};
use crate::sets::{
    enumerate_points_in_range, predicted_point_count_range, PointStream, RationalPoint, SetSpec,
    Variant,
};

/// Mesh scale delta = 2^{-level} with level >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicScale {
    level: u32,
}

impl DyadicScale {
    pub fn new(level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Domain("scale level must be at least 1".into()));
        }
        if level > 60 {
            return Err(Error::Resource(format!("scale level {level} too fine")));
        }
        Ok(Self { level })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn delta(&self) -> BigRational {
        dyadic(self.level)
    }
}

/// Mesh cell of one point: spatial indices first, height index last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellIndex(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub level: u32,
    pub total: u64,
    pub base_cells: u64,
    pub popcorn_cells: u64,
}

impl CoverReport {
    pub const CSV_HEADER: &'static str = "j,delta,total,base_cells,popcorn_cells";

    pub fn csv_row(&self) -> String {
        format!(
            "{},1/{},{},{},{}",
            self.level,
            1u128 << self.level,
            self.total,
            self.base_cells,
            self.popcorn_cells
        )
    }
}

/// Admissible band of layer indices at one scale, for a margin epsilon.
#[derive(Clone, Debug)]
pub struct KRange {
    pub epsilon: BigRational,
    pub k_min: u64,
    pub k_max: u64,
}

/// floor(2^j * q^{-t}): the height row of a point with denominator q.
pub fn height_row(spec: &SetSpec, level: u32, q: u64) -> u64 {
    let (a, b) = spec.t_parts();
    let num = pow2(level as u64 * b as u64);
    let den = BigUint::from(q).pow(a);
    nth_root_floor(&(num / den), b).to_u64().expect("height row fits u64")
}

/// Largest q with q^{-t} >= 2^{-level}; all larger denominators sit below the
/// mesh scale and are absorbed by the base row.
pub fn max_denominator(spec: &SetSpec, scale: DyadicScale) -> Result<u64> {
    let (a, b) = spec.t_parts();
    nth_root_floor(&pow2(scale.level() as u64 * b as u64), a)
        .to_u64()
        .ok_or_else(|| Error::Resource("denominator bound overflows u64".into()))
}

/// Mesh cell of a point, exact. A coordinate equal to 1 clamps into the last
/// cell; enumerated points never reach it, but localized corners can.
pub fn cell_of(spec: &SetSpec, point: &RationalPoint, scale: DyadicScale) -> CellIndex {
    let j = scale.level();
    let q = point.denominator as u128;
    let top = (1u64 << j) - 1;
    let mut coords: Vec<u64> = point
        .numerators
        .iter()
        .map(|&p| ((((p as u128) << j) / q) as u64).min(top))
        .collect();
    coords.push(height_row(spec, j, point.denominator));
    CellIndex(coords)
}

fn insert_tuples(spatial: &[u64], width: usize, tail: Option<u64>, j: u32, set: &mut HashSet<u128>) {
    match width {
        1 => match tail {
            Some(h) => {
                for &s in spatial {
                    set.insert(((s as u128) << j) | h as u128);
                }
            }
            None => {
                for &s in spatial {
                    set.insert(s as u128);
                }
            }
        },
        2 => {
            for &s1 in spatial {
                let prefix = (s1 as u128) << j;
                match tail {
                    Some(h) => {
                        for &s2 in spatial {
                            set.insert(((prefix | s2 as u128) << j) | h as u128);
                        }
                    }
                    None => {
                        for &s2 in spatial {
                            set.insert(prefix | s2 as u128);
                        }
                    }
                }
            }
        }
        _ => recurse_tuples(spatial, width, 0, tail, j, set),
    }
}

fn recurse_tuples(
    spatial: &[u64],
    depth: usize,
    acc: u128,
    tail: Option<u64>,
    j: u32,
    set: &mut HashSet<u128>,
) {
    if depth == 0 {
        let key = match tail {
            Some(h) => (acc << j) | h as u128,
            None => acc,
        };
        set.insert(key);
        return;
    }
    for &s in spatial {
        recurse_tuples(spatial, depth - 1, (acc << j) | s as u128, tail, j, set);
    }
}

/// Distinct mesh cells occupied by points with denominators in [q_lo, q_hi].
/// With `with_height` unset, only the d-1 spatial axes are distinguished.
/// Partitioned over denominator ranges; the set union is associative, so the
/// result does not depend on the partitioning.
fn occupied_cells_len(
    spec: &SetSpec,
    scale: DyadicScale,
    q_lo: u64,
    q_hi: u64,
    with_height: bool,
) -> Result<u64> {
    let lo = q_lo.max(2);
    if q_hi < lo {
        return Ok(0);
    }
    let j = scale.level();
    let width = (spec.d() - 1) as usize;
    let axes = width + usize::from(with_height);
    if axes as u64 * j as u64 > 120 {
        return Err(Error::Resource(format!(
            "cell keys need {} bits, more than the 120 available",
            axes as u64 * j as u64
        )));
    }
    let sieve = ResidueSieve::new(q_hi);
    let chunk: u64 = 512;
    let starts: Vec<u64> = (lo..=q_hi).step_by(chunk as usize).collect();
    let sets: Vec<HashSet<u128>> = starts
        .par_iter()
        .map(|&start| {
            let end = q_hi.min(start + chunk - 1);
            let mut mark: Vec<bool> = Vec::new();
            let mut residues: Vec<u64> = Vec::new();
            let mut spatial: Vec<u64> = Vec::new();
            let mut cells: HashSet<u128> = HashSet::new();
            for q in start..=end {
                match spec.variant() {
                    Variant::Graph => sieve.coprime_residues_into(q, &mut mark, &mut residues),
                    Variant::Full => {
                        residues.clear();
                        residues.extend(1..q);
                    }
                }
                spatial.clear();
                spatial.extend(residues.iter().map(|&m| (((m as u128) << j) / q as u128) as u64));
                let tail = with_height.then(|| height_row(spec, j, q));
                insert_tuples(&spatial, width, tail, j, &mut cells);
            }
            cells
        })
        .collect();
    let mut iter = sets.into_iter();
    let mut union = iter.next().unwrap_or_default();
    for s in iter {
        union.extend(s);
    }
    Ok(union.len() as u64)
}

/// Grid cover count at one scale. The total is the full base row (covering
/// the hyperplane and everything of height below delta) plus the distinct
/// cells hit by points of height at least delta. Errors with the exact
/// predicted point count when enumeration would exceed `cap`.
pub fn cover_count(spec: &SetSpec, scale: DyadicScale, cap: u64) -> Result<CoverReport> {
    let d = spec.d();
    let j = scale.level();
    let spatial_bits = (d as u64 - 1) * j as u64;
    if spatial_bits >= 63 {
        return Err(Error::Resource(format!(
            "base row of 2^{spatial_bits} cells overflows u64"
        )));
    }
    let q_star = max_denominator(spec, scale)?;
    let popcorn_cells = if q_star >= 2 {
        let predicted = predicted_point_count_range(spec, 2, q_star)?;
        if predicted > BigUint::from(cap) {
            return Err(Error::Resource(format!(
                "{predicted} points predicted at level {j}, cap is {cap}"
            )));
        }
        occupied_cells_len(spec, scale, 2, q_star, true)?
    } else {
        0
    };
    let base_cells = 1u64 << spatial_bits;
    let total = base_cells
        .checked_add(popcorn_cells)
        .ok_or_else(|| Error::Resource("cover count overflows u64".into()))?;
    Ok(CoverReport { level: j, total, base_cells, popcorn_cells })
}

/// l_t(k, delta) = floor((1/(k*delta))^{1/t}): the largest denominator whose
/// height still reaches k*delta.
pub fn layer_bound_index(spec: &SetSpec, scale: DyadicScale, k: u64) -> u64 {
    assert!(k >= 1, "layer index starts at 1");
    let (a, b) = spec.t_parts();
    let num = pow2(scale.level() as u64 * b as u64);
    let den = BigUint::from(k).pow(b);
    nth_root_floor(&(num / den), a)
        .to_u64()
        .expect("layer bound fits u64")
}

/// Denominator range (lo, hi] of layer k; empty when hi <= lo.
pub fn layer_denominators(spec: &SetSpec, scale: DyadicScale, k: u64) -> (u64, u64) {
    (
        layer_bound_index(spec, scale, k + 1),
        layer_bound_index(spec, scale, k),
    )
}

/// Graph points whose heights fall in [k*delta, (k+1)*delta).
pub fn layer_points(spec: &SetSpec, scale: DyadicScale, k: u64, cap: u64) -> Result<PointStream> {
    if spec.variant() != Variant::Graph {
        return Err(Error::Domain("layers are defined for the graph variant".into()));
    }
    let (lo, hi) = layer_denominators(spec, scale, k);
    enumerate_points_in_range(spec, lo + 1, hi, cap)
}

/// Number of distinct spatial cells (d-1 indices) occupied by layer k.
pub fn layer_cover_count(spec: &SetSpec, scale: DyadicScale, k: u64, cap: u64) -> Result<u64> {
    if spec.variant() != Variant::Graph {
        return Err(Error::Domain("layers are defined for the graph variant".into()));
    }
    let (lo, hi) = layer_denominators(spec, scale, k);
    if hi <= lo {
        return Ok(0);
    }
    let predicted = predicted_point_count_range(spec, lo + 1, hi)?;
    if predicted > BigUint::from(cap) {
        return Err(Error::Resource(format!(
            "{predicted} layer points predicted, cap is {cap}"
        )));
    }
    occupied_cells_len(spec, scale, lo + 1, hi, false)
}

/// Margin cap below which the admissible layer band is guaranteed once the
/// scale is fine enough. Positive exactly in the subcritical regime.
pub fn lemma_epsilon_cap(spec: &SetSpec) -> Result<BigRational> {
    if !spec.is_subcritical() {
        return Err(Error::Domain("admissible layer bands require t < d/(d-1)".into()));
    }
    let t = spec.t();
    let d = BigRational::from_integer(BigInt::from(spec.d()));
    let high = &d * &t / (&t + &d); // dt/(t+d)
    let low = &t / (&t + BigRational::one()); // t/(t+1)
    let a1 = &high - &low;
    let a2 = BigRational::one() - &high;
    let min = if a1 < a2 { a1 } else { a2 };
    Ok(min / BigRational::from_integer(BigInt::from(16)))
}

/// The band [k_min, k_max] of layer indices with k_min = floor(delta^{dt/(t+d)-1-eps})
/// and k_max = floor(delta^{t/(t+1)-1+eps}). Before returning, verifies that
/// every k in the band sees at least one denominator and that all its
/// denominators stay strictly below 1/delta; failures indicate the scale is
/// not yet fine enough and are reported as verification errors.
pub fn admissible_k_range(
    spec: &SetSpec,
    scale: DyadicScale,
    epsilon: &BigRational,
) -> Result<KRange> {
    let cap = lemma_epsilon_cap(spec)?;
    if !epsilon.is_positive() || epsilon >= &cap {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, {cap}), got {epsilon}"
        )));
    }
    let t = spec.t();
    let d = BigRational::from_integer(BigInt::from(spec.d()));
    let one = BigRational::one();
    // delta^{x} = 2^{-j*x}, so k_min = floor(2^{j*(1 + eps - dt/(t+d))})
    let low_exp = &one + epsilon - &d * &t / (&t + &d);
    let high_exp = &one - epsilon - &t / (&t + &one);
    let j = scale.level();
    let k_min = exact::floor_pow2_rational(j, &low_exp)?
        .to_u64()
        .ok_or_else(|| Error::Resource("k_min overflows u64".into()))?
        .max(1);
    let k_max = exact::floor_pow2_rational(j, &high_exp)?
        .to_u64()
        .ok_or_else(|| Error::Resource("k_max overflows u64".into()))?;
    if k_min > k_max {
        return Err(Error::Verification(format!(
            "admissible band empty at level {j}: k_min={k_min} > k_max={k_max}"
        )));
    }
    let mut violations = Vec::new();
    let mut upper = layer_bound_index(spec, scale, k_min);
    if upper >= 1u64 << j {
        violations.push(format!("k={k_min}: denominators reach {upper} >= 2^{j}"));
    }
    for k in k_min..=k_max {
        let lower = layer_bound_index(spec, scale, k + 1);
        if lower >= upper {
            violations.push(format!("k={k}: no denominator in ({lower}, {upper}]"));
        }
        upper = lower;
    }
    if violations.is_empty() {
        Ok(KRange { epsilon: epsilon.clone(), k_min, k_max })
    } else {
        Err(Error::Verification(format!(
            "scale 2^-{j} too coarse for the admissible band: {}",
            violations.join("; ")
        )))
    }
}

/// Largest q with q^{-t} >= h, for a positive rational h.
fn max_q_with_height_at_least(h: &BigRational, a: u32, b: u32) -> Result<u64> {
    debug_assert!(h.is_positive());
    let num = h.numer().magnitude().pow(b);
    let den = h.denom().magnitude().pow(b);
    nth_root_floor(&(den / num), a)
        .to_u64()
        .ok_or_else(|| Error::Resource("denominator bound overflows u64".into()))
}

/// Smallest q >= 1 with q^{-t} <= h.
fn min_q_with_height_at_most(h: &BigRational, a: u32, b: u32) -> Result<u64> {
    debug_assert!(h.is_positive());
    if h >= &BigRational::one() {
        return Ok(1);
    }
    let num = h.numer().magnitude().pow(b);
    let den = h.denom().magnitude().pow(b);
    let mut q = nth_root_floor(&(&den / &num), a);
    // the floor root may undershoot the rational root by at most one
    while q.pow(a) * &num < den {
        q += 1u32;
    }
    q.to_u64()
        .ok_or_else(|| Error::Resource("denominator bound overflows u64".into()))
}

/// Height row of a point with denominator q inside the local mesh anchored at
/// `base`: the largest i in [0, cells) with base + i*r <= q^{-t}.
fn local_height_row(
    spec: &SetSpec,
    q: u64,
    base: &BigRational,
    r: &BigRational,
    cells: u64,
) -> u64 {
    let mut lo = 0u64;
    let mut hi = cells - 1;
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        let threshold = base + r * BigRational::from_integer(BigInt::from(mid));
        if spec.cmp_height(q, &threshold) != std::cmp::Ordering::Less {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Number of r-mesh cells, anchored at `corner`, meeting the set inside the
/// closed cube prod_i [x_i, x_i + R], where R = 2^{-outer}, r = 2^{-inner}.
/// The count splits by height: when the cube touches height zero, a slab of
/// cells at height row 0 covers the hyperplane together with every point
/// below r; all remaining points are enumerated individually. With the corner
/// at the origin and R = 1 this reproduces [`cover_count`] totals.
pub fn localized_cover_count(
    spec: &SetSpec,
    corner: &[BigRational],
    outer: u32,
    inner: u32,
    cap: u64,
) -> Result<u64> {
    let d = spec.d() as usize;
    if corner.len() != d {
        return Err(Error::Domain(format!("corner needs {d} coordinates")));
    }
    if inner < outer {
        return Err(Error::Domain("inner scale must be at least as fine as outer".into()));
    }
    if inner > 60 {
        return Err(Error::Resource(format!("mesh level {inner} too fine")));
    }
    for x in corner {
        if x.is_negative() || x > &BigRational::one() {
            return Err(Error::Domain(format!("corner coordinate {x} outside [0,1]")));
        }
    }
    let bits = inner - outer;
    if (d as u64) * bits as u64 > 120 {
        return Err(Error::Resource("cell keys exceed 120 bits".into()));
    }
    let cells_per_axis = 1u64 << bits;
    let r = dyadic(inner);
    let big_r = dyadic(outer);
    let corner_height = &corner[d - 1];

    // slab of height-row-0 cells when the cube contains part of the hyperplane
    let mut slab: u64 = 0;
    if corner_height.is_zero() {
        let mut prod: u128 = 1;
        for x in &corner[..d - 1] {
            let avail = (BigRational::one() - x) / &r;
            let n = exact::floor_u64(&avail)?.saturating_add(1).min(cells_per_axis);
            prod = prod
                .checked_mul(n as u128)
                .ok_or_else(|| Error::Resource("slab cell count overflows".into()))?;
        }
        slab = u64::try_from(prod)
            .map_err(|_| Error::Resource("slab cell count overflows u64".into()))?;
    }

    // points with height inside the cube (and at least r when the slab
    // already accounts for everything below it)
    let h_min = if corner_height.is_zero() { r.clone() } else { corner_height.clone() };
    let h_max = corner_height + &big_r;
    let (a, b) = spec.t_parts();
    let q_hi = max_q_with_height_at_least(&h_min, a, b)?;
    let q_lo = min_q_with_height_at_most(&h_max, a, b)?.max(2);

    let mut cells: HashSet<u128> = HashSet::new();
    if q_lo <= q_hi {
        if q_hi - q_lo > 50_000_000 {
            return Err(Error::Resource(format!(
                "denominator band [{q_lo}, {q_hi}] too wide"
            )));
        }
        let mut processed: u64 = 0;
        let mut axis_rows: Vec<Vec<u64>> = Vec::with_capacity(d - 1);
        for q in q_lo..=q_hi {
            let q_ratio = BigRational::from_integer(BigInt::from(q));
            axis_rows.clear();
            let mut empty = false;
            for x in &corner[..d - 1] {
                let m_lo = exact::ceil_u64(&(x * &q_ratio))?.max(1);
                let m_hi = exact::floor_u64(&((x + &big_r) * &q_ratio))?.min(q - 1);
                let mut rows = Vec::new();
                for m in m_lo..=m_hi {
                    if spec.variant() == Variant::Full || gcd(m, q) == 1 {
                        let offset = (exact::ratio_u(m, q) - x) / &r;
                        rows.push(exact::floor_u64(&offset)?.min(cells_per_axis - 1));
                    }
                }
                if rows.is_empty() {
                    empty = true;
                    break;
                }
                axis_rows.push(rows);
            }
            if empty {
                continue;
            }
            let tuple_count: u128 = axis_rows.iter().map(|r| r.len() as u128).product();
            processed = processed.saturating_add(tuple_count.min(u64::MAX as u128) as u64);
            if processed > cap {
                return Err(Error::Resource(format!(
                    "more than {cap} points in the localized window"
                )));
            }
            let h = local_height_row(spec, q, corner_height, &r, cells_per_axis);
            // odometer over the per-axis row lists
            let mut idx = vec![0usize; d - 1];
            loop {
                let mut key: u128 = 0;
                for (axis, rows) in axis_rows.iter().enumerate() {
                    key = (key << bits) | rows[idx[axis]] as u128;
                }
                key = (key << bits) | h as u128;
                cells.insert(key);
                let mut pos = d - 1;
                loop {
                    if pos == 0 {
                        idx.clear();
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < axis_rows[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.is_empty() {
                    break;
                }
            }
        }
    }
    slab.checked_add(cells.len() as u64)
        .ok_or_else(|| Error::Resource("localized count overflows u64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio_int, ratio_u};
    use crate::sets::enumerate_points;
    use proptest::prelude::*;

    fn spec(t_num: u64, t_den: u64, d: u32, variant: Variant) -> SetSpec {
        SetSpec::new(t_num, t_den, d, variant).unwrap()
    }

    fn scale(level: u32) -> DyadicScale {
        DyadicScale::new(level).unwrap()
    }

    /// Independent cell oracle: exact comparisons i^b * q^a <= 2^{jb} spelled
    /// out directly on big integers, plus rational spatial floors.
    fn cell_oracle(s: &SetSpec, p: &RationalPoint, j: u32) -> Vec<u64> {
        let (a, b) = s.t_parts();
        let mut coords: Vec<u64> = p
            .numerators
            .iter()
            .map(|&m| {
                let v = ratio_u(m, p.denominator) * ratio_int(1 << j);
                v.floor().to_integer().to_u64().unwrap()
            })
            .collect();
        let mut i = 0u64;
        loop {
            let next = BigUint::from(i + 1).pow(b) * BigUint::from(p.denominator).pow(a);
            if next > pow2(j as u64 * b as u64) {
                break;
            }
            i += 1;
        }
        coords.push(i);
        coords
    }

    /// Brute-force cover oracle over a naive enumeration.
    fn cover_oracle(s: &SetSpec, j: u32) -> (u64, u64) {
        let mut cells: std::collections::HashSet<Vec<u64>> = Default::default();
        let q_star = max_denominator(s, scale(j)).unwrap();
        if q_star >= 2 {
            for p in enumerate_points(s, q_star, u64::MAX).unwrap() {
                cells.insert(cell_oracle(s, &p, j));
            }
        }
        let base = 1u64 << ((s.d() as u64 - 1) * j as u64);
        (base, cells.len() as u64)
    }

    #[test]
    fn cell_examples() {
        let s = spec(1, 1, 2, Variant::Graph);
        // (1/2, 1/2) at j=2 sits in cell (2, 2)
        let p = RationalPoint { denominator: 2, numerators: vec![1] };
        assert_eq!(cell_of(&s, &p, scale(2)).0, vec![2, 2]);
        // (1/4, 1/4) at j=2: boundary point goes into the upper cell
        let p = RationalPoint { denominator: 4, numerators: vec![1] };
        assert_eq!(cell_of(&s, &p, scale(2)).0, vec![1, 1]);
    }

    #[test]
    fn cells_match_oracle() {
        for (tn, td, d) in [(1u64, 1u64, 2u32), (1, 2, 2), (2, 1, 2), (1, 1, 3), (2, 3, 3)] {
            let s = spec(tn, td, d, Variant::Graph);
            for j in 1..=4 {
                for p in enumerate_points(&s, 20, u64::MAX).unwrap() {
                    assert_eq!(cell_of(&s, &p, scale(j)).0, cell_oracle(&s, &p, j));
                }
            }
        }
    }

    #[test]
    fn cover_example_j2() {
        let s = spec(1, 1, 2, Variant::Graph);
        let report = cover_count(&s, scale(2), u64::MAX).unwrap();
        assert_eq!(report.base_cells, 4);
        assert_eq!(report.popcorn_cells, 4);
        assert_eq!(report.total, 8);
    }

    #[test]
    fn base_row_at_j1() {
        for d in [2u32, 3, 4] {
            let s = spec(1, 1, d, Variant::Graph);
            let report = cover_count(&s, scale(1), u64::MAX).unwrap();
            assert_eq!(report.base_cells, 1 << (d - 1));
        }
    }

    #[test]
    fn cover_matches_brute_force() {
        for (tn, td, d) in [(1u64, 1u64, 2u32), (1, 2, 2), (2, 1, 2), (1, 1, 3)] {
            for variant in [Variant::Graph, Variant::Full] {
                let s = spec(tn, td, d, variant);
                let j_max = if td > 1 { 3 } else { 5 };
                for j in 1..=j_max {
                    let (base, popcorn) = cover_oracle(&s, j);
                    let report = cover_count(&s, scale(j), u64::MAX).unwrap();
                    assert_eq!(report.base_cells, base, "{tn}/{td} d={d} {variant} j={j}");
                    assert_eq!(report.popcorn_cells, popcorn, "{tn}/{td} d={d} {variant} j={j}");
                    assert_eq!(report.total, base + popcorn);
                }
            }
        }
    }

    #[test]
    fn cover_totals_monotone_in_level() {
        let s = spec(1, 1, 2, Variant::Graph);
        let mut prev = 0;
        for j in 1..=8 {
            let total = cover_count(&s, scale(j), u64::MAX).unwrap().total;
            assert!(total >= prev, "total dropped at j={j}");
            prev = total;
        }
    }

    #[test]
    fn mesh_translation_stability() {
        // shifting the mesh origin by delta/2 changes the count by at most 2^d
        let s = spec(1, 1, 2, Variant::Graph);
        for j in 2..=6 {
            let report = cover_count(&s, scale(j), u64::MAX).unwrap();
            let delta = dyadic(j);
            let half = &delta / ratio_int(2);
            let mut shifted: std::collections::HashSet<(u64, u64)> = Default::default();
            let q_star = max_denominator(&s, scale(j)).unwrap();
            for p in enumerate_points(&s, q_star, u64::MAX).unwrap() {
                let x = ratio_u(p.numerators[0], p.denominator);
                let sx = ((x + &half) / &delta).floor().to_integer().to_u64().unwrap();
                // shifted height row: largest i with i*delta - delta/2 <= q^{-t}
                let mut i = 0u64;
                while s.cmp_height(
                    p.denominator,
                    &(&delta * ratio_int((i + 1) as i64) - &half),
                ) != std::cmp::Ordering::Less
                {
                    i += 1;
                }
                shifted.insert((sx, i));
            }
            // shifted base row covers [0,1] with 2^j + 1 cells and absorbs heights < delta/2
            let shifted_total = (1u64 << j) + 1 + shifted.len() as u64;
            let ratio = shifted_total as f64 / report.total as f64;
            assert!(ratio < 4.0 && ratio > 0.25, "j={j} ratio={ratio}");
        }
    }

    #[test]
    fn layer_bound_examples() {
        // t=1, delta=1/8, k=1 -> 8
        let s = spec(1, 1, 2, Variant::Graph);
        assert_eq!(layer_bound_index(&s, scale(3), 1), 8);
        // t=1/2, delta=1/8, k=2 -> floor(4^2) = 16
        let s = spec(1, 2, 2, Variant::Graph);
        assert_eq!(layer_bound_index(&s, scale(3), 2), 16);
        // t=2, delta=1/16, k=3 -> floor(sqrt(16/3)) = 2
        let s = spec(2, 1, 2, Variant::Graph);
        assert_eq!(layer_bound_index(&s, scale(4), 3), 2);
    }

    #[test]
    fn layer_points_example() {
        // t=1, d=2, delta=1/8, k=1: denominators in (4, 8]
        let s = spec(1, 1, 2, Variant::Graph);
        let qs: std::collections::BTreeSet<u64> = layer_points(&s, scale(3), 1, u64::MAX)
            .unwrap()
            .map(|p| p.denominator)
            .collect();
        assert_eq!(qs, [5u64, 6, 7, 8].into_iter().collect());
        // layers demand the graph variant
        let f = spec(1, 1, 2, Variant::Full);
        assert!(layer_points(&f, scale(3), 1, u64::MAX).is_err());
    }

    #[test]
    fn empty_layer_is_empty_not_an_error() {
        let s = spec(1, 1, 2, Variant::Graph);
        // find a k with equal bounds
        let sc = scale(4);
        let mut found = false;
        for k in 1..=16 {
            let (lo, hi) = layer_denominators(&s, sc, k);
            if lo >= hi {
                assert_eq!(layer_points(&s, sc, k, u64::MAX).unwrap().count(), 0);
                assert_eq!(layer_cover_count(&s, sc, k, u64::MAX).unwrap(), 0);
                found = true;
                break;
            }
        }
        assert!(found, "no degenerate layer in range");
    }

    #[test]
    fn layer_partition_covers_all_points() {
        // every point with height >= delta lies in exactly one layer
        for (tn, td) in [(1u64, 1u64), (1, 2), (2, 3)] {
            let s = spec(tn, td, 2, Variant::Graph);
            let sc = scale(6);
            let q_star = max_denominator(&s, sc).unwrap();
            let total = enumerate_points(&s, q_star, u64::MAX).unwrap().count();
            let mut by_layers = 0usize;
            let mut k = 1u64;
            loop {
                let (lo, hi) = layer_denominators(&s, sc, k);
                if hi < 2 {
                    break;
                }
                by_layers += layer_points(&s, sc, k, u64::MAX).unwrap().count();
                k += 1;
                if lo < 2 && hi < 2 {
                    break;
                }
            }
            assert_eq!(total, by_layers, "t={tn}/{td}");
        }
    }

    #[test]
    fn admissible_range_example() {
        let s = spec(1, 1, 2, Variant::Graph);
        // cap is (1/16) * min(2/3 - 1/2, 1/3) = 1/96
        assert_eq!(lemma_epsilon_cap(&s).unwrap(), ratio_u(1, 96));
        let eps = ratio_u(1, 128);
        let kr = admissible_k_range(&s, scale(8), &eps).unwrap();
        assert_eq!((kr.k_min, kr.k_max), (6, 15));
        // oversized epsilon rejected
        assert!(matches!(
            admissible_k_range(&s, scale(8), &ratio_u(1, 32)),
            Err(Error::Domain(_))
        ));
        // collapsed regime has no band
        let c = spec(2, 1, 2, Variant::Graph);
        assert!(lemma_epsilon_cap(&c).is_err());
    }

    #[test]
    fn scale_and_corner_validation() {
        assert!(DyadicScale::new(0).is_err());
        assert!(DyadicScale::new(1).is_ok());
        let s = spec(1, 1, 2, Variant::Graph);
        // wrong arity, out-of-range coordinate, inverted scales
        assert!(localized_cover_count(&s, &[ratio_int(0)], 2, 4, u64::MAX).is_err());
        let outside = vec![ratio_u(3, 2), ratio_int(0)];
        assert!(localized_cover_count(&s, &outside, 2, 4, u64::MAX).is_err());
        let origin = vec![ratio_int(0), ratio_int(0)];
        assert!(localized_cover_count(&s, &origin, 4, 2, u64::MAX).is_err());
    }

    #[test]
    fn coarse_scales_fail_band_verification() {
        // at delta = 1/2 the band's denominators reach 1/delta, which the
        // runtime verification must flag as a too-coarse scale
        let s = spec(1, 1, 2, Variant::Graph);
        match admissible_k_range(&s, scale(1), &ratio_u(1, 128)) {
            Err(Error::Verification(msg)) => assert!(msg.contains("too coarse"), "{msg}"),
            other => panic!("expected a verification error, got {other:?}"),
        }
    }

    #[test]
    fn clamp_rule_for_unit_coordinate() {
        // a coordinate equal to 1 lands in the last cell
        let s = spec(1, 1, 2, Variant::Graph);
        let p = RationalPoint { denominator: 2, numerators: vec![2] };
        assert_eq!(cell_of(&s, &p, scale(3)).0[0], 7);
    }

    #[test]
    fn admissible_range_at_deep_scales() {
        // the exponent arithmetic stays exact at fine scales:
        // k_min = floor(2^{20*(1/3 + 1/128)}) means k_min^96 <= 2^655 < (k_min+1)^96,
        // and k_max = floor(2^{20*(1/2 - 1/128)}) means k_max^128 <= 2^1260 < (k_max+1)^128
        let s = spec(1, 1, 2, Variant::Graph);
        let kr = admissible_k_range(&s, scale(20), &ratio_u(1, 128)).unwrap();
        assert!(kr.k_min < kr.k_max);
        let low = BigUint::from(kr.k_min);
        assert!(low.pow(96) <= pow2(655));
        assert!((low + 1u32).pow(96) > pow2(655));
        let high = BigUint::from(kr.k_max);
        assert!(high.pow(128) <= pow2(1260));
        assert!((high + 1u32).pow(128) > pow2(1260));
    }

    #[test]
    fn admissible_range_verifies_denominator_gaps() {
        let s = spec(1, 1, 2, Variant::Graph);
        let eps = ratio_u(1, 128);
        for j in [4u32, 6, 8, 10, 12] {
            let kr = admissible_k_range(&s, scale(j), &eps).unwrap();
            for k in kr.k_min..=kr.k_max {
                let (lo, hi) = layer_denominators(&s, scale(j), k);
                assert!(hi > lo, "j={j} k={k} empty");
                assert!(hi < 1 << j, "j={j} k={k} denominator too large");
            }
        }
    }

    #[test]
    fn localized_single_cell_when_scales_match() {
        let s = spec(3, 1, 2, Variant::Full);
        // cube at the origin always meets the hyperplane
        let origin = vec![ratio_int(0), ratio_int(0)];
        assert_eq!(localized_cover_count(&s, &origin, 3, 3, u64::MAX).unwrap(), 1);
        // a cube strictly above the set's heights contains nothing
        let high = vec![ratio_int(0), ratio_u(3, 4)];
        assert_eq!(localized_cover_count(&s, &high, 3, 3, u64::MAX).unwrap(), 0);
        // a cube holding exactly the point (1/2, 1/8)
        let hit = vec![ratio_u(1, 2), ratio_u(1, 8)];
        assert_eq!(localized_cover_count(&s, &hit, 3, 3, u64::MAX).unwrap(), 1);
    }

    #[test]
    fn localized_full_cube_matches_cover_count() {
        for (tn, td, d, variant) in [
            (1u64, 1u64, 2u32, Variant::Graph),
            (1, 1, 2, Variant::Full),
            (1, 2, 2, Variant::Graph),
            (1, 1, 3, Variant::Graph),
        ] {
            let s = spec(tn, td, d, variant);
            let j_max = if td > 1 { 4 } else { 6 };
            for j in 1..=j_max {
                let origin = vec![ratio_int(0); d as usize];
                let localized = localized_cover_count(&s, &origin, 0, j, u64::MAX).unwrap();
                let report = cover_count(&s, scale(j), u64::MAX).unwrap();
                assert_eq!(localized, report.total, "t={tn}/{td} d={d} {variant} j={j}");
            }
        }
    }

    #[test]
    fn localized_interior_window() {
        // windows away from the hyperplane count only point cells
        let s = spec(1, 1, 2, Variant::Graph);
        // cube [1/2, 3/4] x [1/2, 3/4] contains (1/2, 1/2) on its corner and
        // (2/3, ...) heights: 2/3 has height 1/3 < 1/2, so only q=2 remains
        let corner = vec![ratio_u(1, 2), ratio_u(1, 2)];
        let n = localized_cover_count(&s, &corner, 2, 4, u64::MAX).unwrap();
        assert_eq!(n, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn layer_heights_lie_in_their_band(k in 1u64..10, j in 3u32..6,
                                           t_pick in 0usize..3) {
            let (tn, td) = [(1u64, 1u64), (1, 2), (2, 3)][t_pick];
            let s = spec(tn, td, 2, Variant::Graph);
            let sc = scale(j);
            let delta = sc.delta();
            for p in layer_points(&s, sc, k, u64::MAX).unwrap() {
                let lower = &delta * ratio_int(k as i64);
                let upper = &delta * ratio_int((k + 1) as i64);
                // k*delta <= q^{-t} < (k+1)*delta, exactly
                prop_assert!(s.cmp_height(p.denominator, &lower) != std::cmp::Ordering::Less);
                prop_assert!(s.cmp_height(p.denominator, &upper) == std::cmp::Ordering::Less);
            }
        }
    }
}
