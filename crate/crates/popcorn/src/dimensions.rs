//! Closed-form dimension values, the general interpolation bounds, the
//! two-scale cover construction, and empirical estimators (box-count slope
//! fitting and localized Assouad probes).
//!
//! In the subcritical regime t < d/(d-1) the sets have Hausdorff dimension
//! d-1, box dimension d^2/(d+t), Assouad dimension d, and intermediate
//! dimensions that stay at d-1 up to theta = (d-1)t/d and then follow
//! d^2 theta / (d theta + t). For t >= d/(d-1) every one of these collapses
//! to d-1. All formula operations work on exact rationals so that identity
//! checks need no tolerance.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::covering::{height_row, localized_cover_count, DyadicScale};
use crate::error::{Error, Result};
use crate::exact::{self, ratio_u};
use crate::number_theory::TotientTable;
use crate::sets::{enumerate_points, SetSpec, Variant};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn d_ratio(spec: &SetSpec) -> BigRational {
    big(spec.d() as i64)
}

/// Always d-1: the sets are countable unions of points over a hyperplane.
pub fn hausdorff_dim(spec: &SetSpec) -> BigRational {
    big(spec.d() as i64 - 1)
}

/// d^2/(d+t) below the critical exponent, d-1 at and above it.
pub fn box_dim_formula(spec: &SetSpec) -> BigRational {
    if spec.is_subcritical() {
        let d = d_ratio(spec);
        &d * &d / (&d + spec.t())
    } else {
        hausdorff_dim(spec)
    }
}

/// d below the critical exponent, d-1 at and above it.
pub fn assouad_dim_formula(spec: &SetSpec) -> BigRational {
    if spec.is_subcritical() {
        d_ratio(spec)
    } else {
        hausdorff_dim(spec)
    }
}

/// The phase transition (d-1)t/d where the intermediate dimensions leave d-1.
pub fn phase_transition(spec: &SetSpec) -> BigRational {
    big(spec.d() as i64 - 1) * spec.t() / d_ratio(spec)
}

/// Intermediate dimension at theta in [0,1]. Continuous across the phase
/// transition; constant d-1 everywhere in the collapsed regime.
pub fn intermediate_dim_formula(spec: &SetSpec, theta: &BigRational) -> Result<BigRational> {
    if theta.is_negative() || theta > &BigRational::one() {
        return Err(Error::Domain(format!("theta must lie in [0,1], got {theta}")));
    }
    if !spec.is_subcritical() {
        return Ok(hausdorff_dim(spec));
    }
    if theta <= &phase_transition(spec) {
        return Ok(hausdorff_dim(spec));
    }
    let d = d_ratio(spec);
    Ok(&d * &d * theta / (&d * theta + spec.t()))
}

/// Upper bound for dim_phi from dim_theta and the Assouad dimension:
/// dim_theta + dim_theta (dim_A - dim_theta) (phi - theta)
///             / ((phi - theta) dim_theta + theta dim_A).
pub fn general_upper_bound(
    dim_theta: &BigRational,
    theta: &BigRational,
    phi: &BigRational,
    dim_a: &BigRational,
) -> Result<BigRational> {
    if !theta.is_positive() {
        return Err(Error::Domain("the upper bound needs theta > 0".into()));
    }
    if phi < theta || phi > &BigRational::one() {
        return Err(Error::Domain(format!("need 0 < theta <= phi <= 1, got {theta}, {phi}")));
    }
    let gap = phi - theta;
    let denom = &gap * dim_theta + theta * dim_a;
    if denom.is_zero() {
        return Err(Error::Domain("degenerate bound denominator".into()));
    }
    Ok(dim_theta + dim_theta * (dim_a - dim_theta) * gap / denom)
}

/// Lower bound theta dim_A dim_B / (dim_A - (1-theta) dim_B) for the
/// intermediate dimension at theta.
pub fn general_lower_bound(
    box_dim: &BigRational,
    theta: &BigRational,
    dim_a: &BigRational,
) -> Result<BigRational> {
    if !theta.is_positive() || theta > &BigRational::one() {
        return Err(Error::Domain(format!("theta must lie in (0,1], got {theta}")));
    }
    if !box_dim.is_positive() || box_dim > dim_a {
        return Err(Error::Domain("need 0 < box dimension <= Assouad dimension".into()));
    }
    let denom = dim_a - (BigRational::one() - theta) * box_dim;
    if denom.is_zero() {
        return Err(Error::Domain("vanishing bound denominator".into()));
    }
    Ok(theta * dim_a * box_dim / denom)
}

/// Ceiling ((d-1) t2 + t1) / (d t2) on the Holder exponent of a surjection
/// from the t2-set onto the t1-set, attained at theta = (d-1) t2 / d.
pub fn holder_exponent_bound(d: u32, t1: &BigRational, t2: &BigRational) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    let d_r = big(d as i64);
    let critical = &d_r / (&d_r - BigRational::one());
    if !t1.is_positive() || t1 >= t2 || t2 > &critical {
        return Err(Error::Domain(format!(
            "need 0 < t1 < t2 <= {critical}, got t1={t1}, t2={t2}"
        )));
    }
    Ok(((&d_r - BigRational::one()) * t2 + t1) / (&d_r * t2))
}

/// The theta achieving the Holder bound: the largest theta at which the
/// t2-set still has intermediate dimension d-1.
pub fn holder_theta_star(d: u32, t2: &BigRational) -> BigRational {
    (big(d as i64) - BigRational::one()) * t2 / big(d as i64)
}

/// Closed-form dimension report with a theta profile.
#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub t: BigRational,
    pub d: u32,
    pub variant: Variant,
    pub subcritical: bool,
    pub hausdorff: BigRational,
    pub box_dim: BigRational,
    pub assouad: BigRational,
    pub phase_transition: BigRational,
    pub profile: Vec<(BigRational, BigRational)>,
}

/// Evaluates every closed form on a uniform theta grid with `grid` + 1 nodes.
pub fn dimension_report(spec: &SetSpec, grid: u32) -> Result<DimensionReport> {
    let mut profile = Vec::with_capacity(grid as usize + 1);
    for i in 0..=grid {
        let theta = ratio_u(i as u64, grid as u64);
        let dim = intermediate_dim_formula(spec, &theta)?;
        profile.push((theta, dim));
    }
    Ok(DimensionReport {
        t: spec.t(),
        d: spec.d(),
        variant: spec.variant(),
        subcritical: spec.is_subcritical(),
        hausdorff: hausdorff_dim(spec),
        box_dim: box_dim_formula(spec),
        assouad: assouad_dim_formula(spec),
        phase_transition: phase_transition(spec),
        profile,
    })
}

/// Least-squares fit of log2(count) against the scale level.
#[derive(Clone, Debug)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Slope of the final pair alone; less biased by coarse scales.
    pub two_point_slope: f64,
    pub max_abs_residual: f64,
}

pub fn fit_box_dimension(counts: &[(u32, u64)]) -> Result<SlopeFit> {
    if counts.len() < 3 {
        return Err(Error::Domain(format!(
            "slope fit needs at least 3 scales, got {}",
            counts.len()
        )));
    }
    if counts.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::Domain("scale levels must be strictly increasing".into()));
    }
    if counts.iter().any(|&(_, n)| n == 0) {
        return Err(Error::Domain("cover counts must be positive".into()));
    }
    let xs: Vec<f64> = counts.iter().map(|&(j, _)| j as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, n)| (n as f64).log2()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let var: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = cov / var;
    let intercept = mean_y - slope * mean_x;
    let max_abs_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    let last = counts.len() - 1;
    let two_point_slope = (ys[last] - ys[last - 1]) / (xs[last] - xs[last - 1]);
    Ok(SlopeFit { slope, intercept, two_point_slope, max_abs_residual })
}

/// A two-scale cover and its s-cost. The set splits at height 2^{-split_level}
/// (the dyadic snap of delta^{dt/(d theta + t)}): everything below is covered
/// by delta-mesh cells, every point above gets its own cube of side
/// 2^{-fine_level} (the dyadic snap of delta^{1/theta}).
#[derive(Clone, Debug)]
pub struct CoverCost {
    pub theta: BigRational,
    pub level: u32,
    pub s: f64,
    pub cost: f64,
    pub split_level: u32,
    pub fine_level: u32,
    pub slab_cells: u128,
    pub point_count: u128,
}

fn two_scale_counts(spec: &SetSpec, theta: &BigRational, scale: DyadicScale) -> Result<(u32, u32, u128, u128)> {
    if !spec.is_subcritical() {
        return Err(Error::Domain("two-scale covers need t < d/(d-1)".into()));
    }
    if theta > &BigRational::one() || theta <= &phase_transition(spec) {
        return Err(Error::Domain(format!(
            "theta must lie in ({}, 1], got {theta}",
            phase_transition(spec)
        )));
    }
    let j = scale.level();
    let d = spec.d();
    let t = spec.t();
    let d_r = d_ratio(spec);
    // split exponent dt/(d theta + t), in (dt/(d+t), 1)
    let split_exp = &d_r * &t / (&d_r * theta + &t);
    let je = &split_exp * big(j as i64);
    let split_level = exact::floor_u64(&(&je + ratio_u(1, 2)))? as u32; // nearest dyadic
    let fine = (big(j as i64) / theta).ceil().to_integer();
    let fine_level = fine
        .to_u32()
        .ok_or_else(|| Error::Resource("fine scale level overflows".into()))?;
    let slab_bits = (d as u64 - 1) * j as u64 + (j - split_level.min(j)) as u64;
    if slab_bits >= 127 {
        return Err(Error::Resource("slab cell count overflows u128".into()));
    }
    let slab_cells: u128 = 1u128 << slab_bits;
    // points with height strictly above 2^{-split_level}: q^a < 2^{split_level * b}
    let (a, b) = spec.t_parts();
    let bound = exact::pow2(split_level as u64 * b as u64) - 1u32;
    let q_top = exact::nth_root_floor(&bound, a)
        .to_u64()
        .ok_or_else(|| Error::Resource("point bound overflows u64".into()))?;
    let e = d - 1;
    let mut point_count: u128 = 0;
    if q_top >= 2 {
        match spec.variant() {
            Variant::Graph => {
                let table = TotientTable::build(q_top)?;
                for q in 2..=q_top {
                    point_count = point_count
                        .checked_add((table.phi(q) as u128).pow(e))
                        .ok_or_else(|| Error::Resource("point count overflows u128".into()))?;
                }
            }
            Variant::Full => {
                for q in 2..=q_top {
                    point_count = point_count
                        .checked_add(((q - 1) as u128).pow(e))
                        .ok_or_else(|| Error::Resource("point count overflows u128".into()))?;
                }
            }
        }
    }
    Ok((split_level.min(j), fine_level, slab_cells, point_count))
}

/// Cost sum |U_i|^s of the two-scale cover, with |U_i| the cube side length.
pub fn two_scale_cover_cost(
    spec: &SetSpec,
    theta: &BigRational,
    scale: DyadicScale,
    s: f64,
) -> Result<CoverCost> {
    let (split_level, fine_level, slab_cells, point_count) =
        two_scale_counts(spec, theta, scale)?;
    let j = scale.level();
    let cost = slab_cells as f64 * (-(j as f64) * s).exp2()
        + point_count as f64 * (-(fine_level as f64) * s).exp2();
    Ok(CoverCost {
        theta: theta.clone(),
        level: j,
        s,
        cost,
        split_level,
        fine_level,
        slab_cells,
        point_count,
    })
}

/// The exponent where the two-scale cover cost crosses 1, by bisection to
/// 1e-3. The cost is strictly decreasing in s, so the root is unique.
pub fn critical_exponent(spec: &SetSpec, theta: &BigRational, scale: DyadicScale) -> Result<f64> {
    let (split_level, fine_level, slab_cells, point_count) =
        two_scale_counts(spec, theta, scale)?;
    let j = scale.level();
    let cost = |s: f64| {
        slab_cells as f64 * (-(j as f64) * s).exp2()
            + point_count as f64 * (-(fine_level as f64) * s).exp2()
    };
    let _ = split_level;
    let mut lo = 0.0f64;
    let mut hi = spec.d() as f64;
    let (c_lo, c_hi) = (cost(lo), cost(hi));
    if c_lo < 1.0 || c_hi >= 1.0 {
        return Err(Error::Verification(format!(
            "cost does not bracket 1 on [0, {hi}]: cost(0)={c_lo}, cost({hi})={c_hi}"
        )));
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if cost(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Worst observed localized scaling exponent over sampled windows.
#[derive(Clone, Debug)]
pub struct AssouadProbeReport {
    pub max_ratio: f64,
    pub probes: usize,
    pub outer_level: u32,
    pub ratio_levels: Vec<u32>,
}

/// Samples window corners from the enumerated points (plus the origin),
/// snaps each corner height down onto the finest mesh, and reports the
/// maximum of log2(N_r) / log2(R/r) over all windows and scale ladders.
pub fn assouad_probe_max(
    spec: &SetSpec,
    outer_level: u32,
    ratio_levels: &[u32],
    probes: usize,
    sample_q_max: u64,
    seed: u64,
    cap: u64,
) -> Result<AssouadProbeReport> {
    if ratio_levels.is_empty() || ratio_levels.contains(&0) {
        return Err(Error::Domain("need positive scale ratios".into()));
    }
    let finest = outer_level + ratio_levels.iter().max().unwrap();
    let d = spec.d() as usize;
    let points: Vec<_> = enumerate_points(spec, sample_q_max, cap)?.collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corners: Vec<Vec<BigRational>> = Vec::with_capacity(probes);
    corners.push(vec![BigRational::zero(); d]);
    while corners.len() < probes && !points.is_empty() {
        let p = &points[rng.gen_range(0..points.len())];
        let mut corner: Vec<BigRational> = p
            .numerators
            .iter()
            .map(|&m| ratio_u(m, p.denominator))
            .collect();
        // snap the height onto the finest mesh so the corner stays rational
        let row = height_row(spec, finest, p.denominator);
        corner.push(ratio_u(row, 1) * exact::dyadic(finest));
        corners.push(corner);
    }
    let mut max_ratio = f64::NEG_INFINITY;
    for corner in &corners {
        for &rho in ratio_levels {
            let n = localized_cover_count(spec, corner, outer_level, outer_level + rho, cap)?;
            if n == 0 {
                continue;
            }
            let ratio = (n as f64).log2() / rho as f64;
            if ratio > max_ratio {
                max_ratio = ratio;
            }
        }
    }
    Ok(AssouadProbeReport {
        max_ratio,
        probes: corners.len(),
        outer_level,
        ratio_levels: ratio_levels.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio_int, ratio_u};
    use proptest::prelude::*;

    fn spec(t_num: u64, t_den: u64, d: u32) -> SetSpec {
        SetSpec::new(t_num, t_den, d, Variant::Graph).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let s = spec(1, 1, 2);
        assert_eq!(hausdorff_dim(&s), ratio_int(1));
        assert_eq!(box_dim_formula(&s), ratio_u(4, 3));
        assert_eq!(assouad_dim_formula(&s), ratio_int(2));
        assert_eq!(hausdorff_dim(&spec(1, 1, 3)), ratio_int(2));
        // collapsed regime, boundary included
        let c = spec(2, 1, 2);
        assert_eq!(box_dim_formula(&c), ratio_int(1));
        assert_eq!(assouad_dim_formula(&c), ratio_int(1));
        let c3 = spec(3, 2, 3);
        assert_eq!(assouad_dim_formula(&c3), ratio_int(2));
        // t -> 0 stays below the ambient dimension
        let tiny = spec(1, 1000, 2);
        assert_eq!(box_dim_formula(&tiny), ratio_u(4000, 2001));
        assert!(box_dim_formula(&tiny) < ratio_int(2));
    }

    #[test]
    fn intermediate_profile_values() {
        let s = spec(1, 1, 2);
        assert_eq!(phase_transition(&s), ratio_u(1, 2));
        for (th, want) in [
            (ratio_int(0), ratio_int(1)),
            (ratio_u(1, 4), ratio_int(1)),
            (ratio_u(1, 2), ratio_int(1)),
            (ratio_u(3, 4), ratio_u(6, 5)),
            (ratio_int(1), ratio_u(4, 3)),
        ] {
            assert_eq!(intermediate_dim_formula(&s, &th).unwrap(), want, "theta={th}");
        }
        assert!(intermediate_dim_formula(&s, &ratio_u(5, 4)).is_err());
        assert!(intermediate_dim_formula(&s, &(-ratio_u(1, 4))).is_err());
        // collapsed regime is flat
        let c = spec(2, 1, 2);
        for i in 0..=10 {
            assert_eq!(
                intermediate_dim_formula(&c, &ratio_u(i, 10)).unwrap(),
                ratio_int(1)
            );
        }
    }

    #[test]
    fn transition_is_continuous() {
        for (tn, td, d) in [(1u64, 1u64, 2u32), (1, 2, 2), (1, 1, 3), (2, 3, 4)] {
            let s = spec(tn, td, d);
            let star = phase_transition(&s);
            let from_formula = {
                let d_r = big(d as i64);
                &d_r * &d_r * &star / (&d_r * &star + s.t())
            };
            assert_eq!(from_formula, hausdorff_dim(&s), "branches must agree at the transition");
        }
    }

    #[test]
    fn upper_bound_examples() {
        // degenerate interval returns the input dimension
        let v = general_upper_bound(&ratio_u(6, 5), &ratio_u(3, 4), &ratio_u(3, 4), &ratio_int(2)).unwrap();
        assert_eq!(v, ratio_u(6, 5));
        // dim_A equal to dim_theta gives a zero numerator
        let v = general_upper_bound(&ratio_u(3, 2), &ratio_u(1, 2), &ratio_int(1), &ratio_u(3, 2)).unwrap();
        assert_eq!(v, ratio_u(3, 2));
        // seeded at the popcorn transition the bound lands exactly on 4/3
        let v = general_upper_bound(&ratio_int(1), &ratio_u(1, 2), &ratio_int(1), &ratio_int(2)).unwrap();
        assert_eq!(v, ratio_u(4, 3));
        assert!(general_upper_bound(&ratio_int(1), &ratio_int(0), &ratio_int(1), &ratio_int(2)).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        // theta = 1 returns the box dimension
        let v = general_lower_bound(&ratio_u(4, 3), &ratio_int(1), &ratio_int(2)).unwrap();
        assert_eq!(v, ratio_u(4, 3));
        // sharpness at theta = 3/4 for the popcorn graph
        let v = general_lower_bound(&ratio_u(4, 3), &ratio_u(3, 4), &ratio_int(2)).unwrap();
        assert_eq!(v, ratio_u(6, 5));
        // box = Assouad pins the value
        let v = general_lower_bound(&ratio_u(3, 2), &ratio_u(1, 3), &ratio_u(3, 2)).unwrap();
        assert_eq!(v, ratio_u(3, 2));
    }

    #[test]
    fn sharpness_identities_on_a_grid() {
        for (tn, td, d) in [(1u64, 1u64, 2u32), (1, 1, 3), (1, 2, 2)] {
            let s = spec(tn, td, d);
            let star = phase_transition(&s);
            let box_dim = box_dim_formula(&s);
            let dim_a = assouad_dim_formula(&s);
            for i in 0..=50u64 {
                let theta = &star + (BigRational::one() - &star) * ratio_u(i, 50);
                if theta.is_zero() {
                    continue;
                }
                let formula = intermediate_dim_formula(&s, &theta).unwrap();
                let lower = general_lower_bound(&box_dim, &theta, &dim_a).unwrap();
                assert_eq!(lower, formula, "lower bound at theta={theta}");
                if theta > star {
                    let upper =
                        general_upper_bound(&hausdorff_dim(&s), &star, &theta, &dim_a).unwrap();
                    assert_eq!(upper, formula, "upper bound at theta={theta}");
                }
            }
        }
    }

    #[test]
    fn profile_concave_after_transition() {
        let s = spec(1, 1, 2);
        let report = dimension_report(&s, 100).unwrap();
        let after: Vec<&BigRational> = report
            .profile
            .iter()
            .filter(|(th, _)| th > &report.phase_transition)
            .map(|(_, v)| v)
            .collect();
        for w in after.windows(3) {
            let second_diff = w[2] - w[1] - (w[1] - w[0]);
            assert!(second_diff <= BigRational::zero());
        }
        // chain ordering along the full grid
        for (_, v) in &report.profile {
            assert!(&report.hausdorff <= v && v <= &report.box_dim);
        }
        assert!(report.box_dim <= report.assouad);
    }

    #[test]
    fn holder_bound_examples() {
        // d=2, t1=0.3, t2=1 -> 13/20
        let b = holder_exponent_bound(2, &ratio_u(3, 10), &ratio_int(1)).unwrap();
        assert_eq!(b, ratio_u(13, 20));
        assert_eq!(holder_theta_star(2, &ratio_int(1)), ratio_u(1, 2));
        // d=3, t1=1, t2=3/2 -> 8/9
        let b = holder_exponent_bound(3, &ratio_int(1), &ratio_u(3, 2)).unwrap();
        assert_eq!(b, ratio_u(8, 9));
        // equal exponents rejected; near-equal tends to 1
        assert!(holder_exponent_bound(2, &ratio_int(1), &ratio_int(1)).is_err());
        let near = holder_exponent_bound(2, &ratio_u(999_999, 1_000_000), &ratio_int(1)).unwrap();
        assert!(BigRational::one() - &near < ratio_u(1, 1_000_000));
        assert!(near < BigRational::one());
    }

    #[test]
    fn holder_bound_is_the_grid_minimum_of_the_ratio() {
        let d = 2u32;
        let (t1, t2) = (ratio_u(3, 10), ratio_int(1));
        let s1 = SetSpec::from_ratio(&t1, d, Variant::Graph).unwrap();
        let s2 = SetSpec::from_ratio(&t2, d, Variant::Graph).unwrap();
        let bound = holder_exponent_bound(d, &t1, &t2).unwrap();
        let star = holder_theta_star(d, &t2);
        let mut best: Option<BigRational> = None;
        for i in 0..=100u64 {
            let theta = ratio_u(i, 100);
            let top = intermediate_dim_formula(&s2, &theta).unwrap();
            let bottom = intermediate_dim_formula(&s1, &theta).unwrap();
            let ratio = top / bottom;
            best = Some(match best {
                Some(b) if b <= ratio => b,
                _ => ratio,
            });
        }
        // theta* = 1/2 lies on the grid, so the grid minimum is the bound
        assert_eq!(best.unwrap(), bound);
        assert_eq!(star, ratio_u(1, 2));
    }

    #[test]
    fn slope_fit_on_synthetic_data() {
        // N = 2^{1.5 j} on even levels, so every count is an exact power of two
        let counts: Vec<(u32, u64)> = (1..=5).map(|i| (2 * i, 1u64 << (3 * i))).collect();
        let fit = fit_box_dimension(&counts).unwrap();
        assert!((fit.slope - 1.5).abs() < 1e-6, "slope {}", fit.slope);
        // constant data has slope zero
        let flat: Vec<(u32, u64)> = (1..=5).map(|j| (j, 7)).collect();
        assert!(fit_box_dimension(&flat).unwrap().slope.abs() < 1e-12);
        assert!(fit_box_dimension(&flat[..2]).is_err());
        assert!(fit_box_dimension(&[(1, 1), (1, 2), (3, 4)]).is_err());
    }

    #[test]
    fn cover_cost_shape() {
        let s = spec(1, 1, 2);
        let theta = ratio_u(3, 4);
        let sc = DyadicScale::new(10).unwrap();
        // s = 0 counts the cover sets
        let c0 = two_scale_cover_cost(&s, &theta, sc, 0.0).unwrap();
        assert_eq!(c0.cost, (c0.slab_cells + c0.point_count) as f64);
        // strictly decreasing in s
        let c1 = two_scale_cover_cost(&s, &theta, sc, 1.0).unwrap();
        let c2 = two_scale_cover_cost(&s, &theta, sc, 1.3).unwrap();
        assert!(c0.cost > c1.cost && c1.cost > c2.cost);
        // the split must stay inside the admissible theta band
        assert!(two_scale_cover_cost(&s, &ratio_u(1, 2), sc, 1.0).is_err());
        assert!(two_scale_cover_cost(&s, &ratio_u(1, 4), sc, 1.0).is_err());
        // collapsed regime rejected
        let c = SetSpec::new(2, 1, 2, Variant::Graph).unwrap();
        assert!(two_scale_cover_cost(&c, &theta, sc, 1.0).is_err());
    }

    #[test]
    fn critical_exponent_consistency() {
        let s = spec(1, 1, 2);
        // theta = 1 degenerates to a single-scale cover, whose root tracks
        // log2(total)/j
        let sc = DyadicScale::new(12).unwrap();
        let root = critical_exponent(&s, &ratio_int(1), sc).unwrap();
        let report = crate::covering::cover_count(&s, sc, u64::MAX).unwrap();
        let single_scale = (report.total as f64).log2() / 12.0;
        assert!((root - single_scale).abs() < 0.25, "root {root} vs {single_scale}");
        // never drops below d-1: the slab alone forces that much cost
        for th in [ratio_u(3, 5), ratio_u(3, 4), ratio_u(9, 10), ratio_int(1)] {
            let root = critical_exponent(&s, &th, sc).unwrap();
            assert!(root > 0.95, "theta={th} root={root}");
        }
    }

    #[test]
    fn assouad_probes_stay_flat_in_the_collapsed_regime() {
        let s = SetSpec::new(3, 1, 2, Variant::Full).unwrap();
        let report = assouad_probe_max(&s, 3, &[4], 16, 16, 7, u64::MAX).unwrap();
        assert!(report.max_ratio <= 1.1, "ratio {}", report.max_ratio);
        assert!(report.max_ratio > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dimension_chain_holds(tn in 1u64..8, td in 1u64..8, d in 2u32..5, i in 0u64..=20) {
            let s = spec(tn, td, d);
            let theta = ratio_u(i, 20);
            let h = hausdorff_dim(&s);
            let mid = intermediate_dim_formula(&s, &theta).unwrap();
            let bx = box_dim_formula(&s);
            let asd = assouad_dim_formula(&s);
            prop_assert!(h <= mid);
            prop_assert!(mid <= bx);
            prop_assert!(bx <= asd);
            prop_assert!(asd <= big(d as i64));
        }
    }
}
