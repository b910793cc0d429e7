//! The popcorn pyramid sets: parameterisation, pointwise evaluation and
//! streaming enumeration of the rational points.
//!
//! A point of the full set has the form (p_1/q, ..., p_{d-1}/q, q^{-t}) with
//! 1 <= p_i <= q-1; the graph variant additionally requires gcd(p_i, q) = 1
//! for every coordinate. The base hyperplane [0,1]^{d-1} x {0} belongs to
//! both sets but is never enumerated; covering routines account for it
//! analytically.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, cmp_recip_pow};
use crate::number_theory::{coprime_residues, gcd, TotientTable};

/// Default ceiling on predicted enumeration size.
pub const DEFAULT_POINT_CAP: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Coprime numerators only: the graph of the pyramid function.
    Graph,
    /// Every numerator tuple over a shared denominator.
    Full,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(Variant::Graph),
            "full" => Ok(Variant::Full),
            other => Err(Error::Parse(format!("unknown variant '{other}', expected graph|full"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Graph => "graph",
            Variant::Full => "full",
        })
    }
}

/// Which set to work with: the exponent t = a/b (in lowest terms), the
/// ambient dimension d >= 2, and the graph/full variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSpec {
    t_num: u32,
    t_den: u32,
    d: u32,
    variant: Variant,
}

impl SetSpec {
    pub fn new(t_num: u64, t_den: u64, d: u32, variant: Variant) -> Result<Self> {
        if t_num == 0 || t_den == 0 {
            return Err(Error::Domain("t must be a positive rational".into()));
        }
        if d < 2 {
            return Err(Error::Domain(format!("d must be at least 2, got {d}")));
        }
        let g = gcd(t_num, t_den);
        let (n, m) = (t_num / g, t_den / g);
        if n > u32::MAX as u64 || m > u32::MAX as u64 {
            return Err(Error::Domain(format!("t = {t_num}/{t_den} is too large")));
        }
        Ok(Self { t_num: n as u32, t_den: m as u32, d, variant })
    }

    pub fn from_ratio(t: &BigRational, d: u32, variant: Variant) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        let num = t
            .numer()
            .to_u64()
            .ok_or_else(|| Error::Domain("t numerator too large".into()))?;
        let den = t
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Domain("t denominator too large".into()))?;
        Self::new(num, den, d, variant)
    }

    pub fn t(&self) -> BigRational {
        exact::ratio_u(self.t_num as u64, self.t_den as u64)
    }

    /// (numerator, denominator) of t in lowest terms.
    pub fn t_parts(&self) -> (u32, u32) {
        (self.t_num, self.t_den)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Self { variant, ..self.clone() }
    }

    /// True when t < d/(d-1), the regime with full Assouad dimension.
    pub fn is_subcritical(&self) -> bool {
        (self.t_num as u64) * (self.d as u64 - 1) < (self.t_den as u64) * self.d as u64
    }

    /// Ordering of the height q^{-t} against a rational threshold, exact.
    pub fn cmp_height(&self, q: u64, rhs: &BigRational) -> Ordering {
        cmp_recip_pow(q, self.t_num, self.t_den, rhs)
    }

    pub fn height_f64(&self, q: u64) -> f64 {
        (q as f64).powf(-(self.t_num as f64) / self.t_den as f64)
    }
}

/// A rational point of the set: numerators over a shared denominator, with
/// implied height denominator^{-t}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub denominator: u64,
    pub numerators: Vec<u64>,
}

/// Exact value of the pyramid function at a rational input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Height {
    Zero,
    /// q^{-t} for the recorded denominator.
    Reciprocal { denominator: u64 },
}

impl Height {
    pub fn is_zero(&self) -> bool {
        matches!(self, Height::Zero)
    }

    pub fn value_f64(&self, spec: &SetSpec) -> f64 {
        match self {
            Height::Zero => 0.0,
            Height::Reciprocal { denominator } => spec.height_f64(*denominator),
        }
    }
}

/// Evaluates the pyramid function at a tuple of d-1 rationals in [0,1].
/// Nonzero exactly when every coordinate, in lowest terms, shares one
/// denominator q >= 2; reduction makes the coprimality condition automatic.
pub fn evaluate(spec: &SetSpec, coords: &[BigRational]) -> Result<Height> {
    let want = (spec.d() - 1) as usize;
    if coords.len() != want {
        return Err(Error::Domain(format!(
            "expected {want} coordinates, got {}",
            coords.len()
        )));
    }
    let mut shared_q: Option<u64> = None;
    for x in coords {
        if x.is_negative() || x > &BigRational::one() {
            return Err(Error::Domain(format!("coordinate {x} outside [0,1]")));
        }
        if x.denom().is_one() {
            // 0 and 1 are not of the form p/q with 1 <= p <= q-1
            return Ok(Height::Zero);
        }
        let q = x
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("denominator of {x} exceeds u64")))?;
        match shared_q {
            None => shared_q = Some(q),
            Some(prev) if prev != q => return Ok(Height::Zero),
            Some(_) => {}
        }
    }
    Ok(match shared_q {
        Some(q) => Height::Reciprocal { denominator: q },
        None => Height::Zero,
    })
}

/// Exact number of points with denominator in [q_lo, q_hi]:
/// sum of phi(q)^{d-1} for the graph variant, (q-1)^{d-1} for the full one.
pub fn predicted_point_count_range(spec: &SetSpec, q_lo: u64, q_hi: u64) -> Result<BigUint> {
    let lo = q_lo.max(2);
    if q_hi < lo {
        return Ok(BigUint::zero());
    }
    let e = spec.d() - 1;
    let mut sum = BigUint::zero();
    match spec.variant() {
        Variant::Full => {
            for q in lo..=q_hi {
                sum += BigUint::from(q - 1).pow(e);
            }
        }
        Variant::Graph => {
            let table = TotientTable::build(q_hi)?;
            for q in lo..=q_hi {
                sum += BigUint::from(table.phi(q)).pow(e);
            }
        }
    }
    Ok(sum)
}

pub fn predicted_point_count(spec: &SetSpec, q_max: u64) -> Result<BigUint> {
    predicted_point_count_range(spec, 2, q_max)
}

/// Streaming enumerator over denominators in a range, ordered by denominator
/// and then lexicographically by numerators. Memory use is O(q) for the
/// current denominator's residue list; the stream itself is never
/// materialized.
#[derive(Debug)]
pub struct PointStream {
    variant: Variant,
    width: usize,
    q: u64,
    q_hi: u64,
    residues: Vec<u64>,
    odo: Vec<usize>,
}

impl PointStream {
    fn new(spec: &SetSpec, q_lo: u64, q_hi: u64) -> Self {
        let mut stream = Self {
            variant: spec.variant(),
            width: (spec.d() - 1) as usize,
            q: q_lo.max(2),
            q_hi,
            residues: Vec::new(),
            odo: Vec::new(),
        };
        if stream.q <= stream.q_hi {
            stream.load();
        }
        stream
    }

    fn load(&mut self) {
        self.residues = match self.variant {
            Variant::Graph => coprime_residues(self.q),
            Variant::Full => (1..self.q).collect(),
        };
        self.odo = vec![0; self.width];
    }
}

impl Iterator for PointStream {
    type Item = RationalPoint;

    fn next(&mut self) -> Option<RationalPoint> {
        if self.q > self.q_hi {
            return None;
        }
        let point = RationalPoint {
            denominator: self.q,
            numerators: self.odo.iter().map(|&i| self.residues[i]).collect(),
        };
        let mut pos = self.width;
        loop {
            if pos == 0 {
                self.q += 1;
                if self.q <= self.q_hi {
                    self.load();
                }
                break;
            }
            pos -= 1;
            self.odo[pos] += 1;
            if self.odo[pos] < self.residues.len() {
                break;
            }
            self.odo[pos] = 0;
        }
        Some(point)
    }
}

/// Every point with 2 <= q <= q_max, exactly once. Fails with the exact
/// predicted count when it would exceed `cap`.
pub fn enumerate_points(spec: &SetSpec, q_max: u64, cap: u64) -> Result<PointStream> {
    enumerate_points_in_range(spec, 2, q_max, cap)
}

pub fn enumerate_points_in_range(
    spec: &SetSpec,
    q_lo: u64,
    q_hi: u64,
    cap: u64,
) -> Result<PointStream> {
    let predicted = predicted_point_count_range(spec, q_lo, q_hi)?;
    if predicted > BigUint::from(cap) {
        return Err(Error::Resource(format!(
            "enumeration would yield {predicted} points, cap is {cap}"
        )));
    }
    Ok(PointStream::new(spec, q_lo, q_hi))
}

/// Point dump format: one line per point, `q p_1 ... p_{d-1}`.
pub fn write_point_dump<W: Write>(
    points: impl Iterator<Item = RationalPoint>,
    out: &mut W,
) -> std::io::Result<()> {
    for p in points {
        write!(out, "{}", p.denominator)?;
        for m in &p.numerators {
            write!(out, " {m}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio_int, ratio_u};
    use proptest::prelude::*;

    fn spec(t_num: u64, t_den: u64, d: u32, variant: Variant) -> SetSpec {
        SetSpec::new(t_num, t_den, d, variant).unwrap()
    }

    /// Naive nested-loop oracle for the point count.
    fn count_brute(variant: Variant, d: u32, q_max: u64) -> u64 {
        let mut count = 0u64;
        for q in 2..=q_max {
            let per_axis = match variant {
                Variant::Graph => (1..q).filter(|&m| gcd(m, q) == 1).count() as u64,
                Variant::Full => q - 1,
            };
            count += per_axis.pow(d - 1);
        }
        count
    }

    #[test]
    fn spec_validation_and_regimes() {
        assert!(SetSpec::new(0, 1, 2, Variant::Graph).is_err());
        assert!(SetSpec::new(1, 0, 2, Variant::Graph).is_err());
        assert!(SetSpec::new(1, 1, 1, Variant::Graph).is_err());
        let s = spec(2, 4, 2, Variant::Graph);
        assert_eq!(s.t_parts(), (1, 2));
        assert!(spec(1, 1, 2, Variant::Graph).is_subcritical()); // 1 < 2
        assert!(!spec(2, 1, 2, Variant::Graph).is_subcritical()); // 2 >= 2, boundary
        assert!(!spec(3, 1, 2, Variant::Graph).is_subcritical());
        assert!(spec(1, 1, 3, Variant::Graph).is_subcritical()); // 1 < 3/2
        assert!(!spec(3, 2, 3, Variant::Graph).is_subcritical()); // boundary 3/2
    }

    #[test]
    fn evaluate_examples() {
        // mixed denominators vanish
        let s3 = spec(1, 1, 3, Variant::Graph);
        let v = evaluate(&s3, &[ratio_u(1, 2), ratio_u(1, 3)]).unwrap();
        assert!(v.is_zero());
        // the 1-d popcorn function at 1/2
        let s2 = spec(1, 1, 2, Variant::Graph);
        assert_eq!(
            evaluate(&s2, &[ratio_u(1, 2)]).unwrap(),
            Height::Reciprocal { denominator: 2 }
        );
        // integers are zeros
        assert!(evaluate(&s2, &[ratio_int(0)]).unwrap().is_zero());
        assert!(evaluate(&s2, &[ratio_int(1)]).unwrap().is_zero());
        // unreduced representations reduce before the shared-denominator test
        let v = evaluate(&s3, &[ratio_u(1, 2), ratio_u(2, 4)]).unwrap();
        assert_eq!(v, Height::Reciprocal { denominator: 2 });
        // out of range
        assert!(evaluate(&s2, &[ratio_u(3, 2)]).is_err());
        assert!(evaluate(&s2, &[-ratio_u(1, 2)]).is_err());
        assert!(evaluate(&s2, &[ratio_u(1, 2), ratio_u(1, 2)]).is_err());
    }

    #[test]
    fn enumerate_graph_d2() {
        let s = spec(1, 1, 2, Variant::Graph);
        let pts: Vec<_> = enumerate_points(&s, 4, 1000).unwrap().collect();
        let expect = [(2, vec![1]), (3, vec![1]), (3, vec![2]), (4, vec![1]), (4, vec![3])];
        assert_eq!(pts.len(), 5);
        for (p, (q, nums)) in pts.iter().zip(expect.iter()) {
            assert_eq!(p.denominator, *q);
            assert_eq!(&p.numerators, nums);
        }
    }

    #[test]
    fn enumerate_counts() {
        // graph, d=3, q<=3: phi(2)^2 + phi(3)^2 = 5
        let s = spec(1, 1, 3, Variant::Graph);
        assert_eq!(enumerate_points(&s, 3, 1000).unwrap().count(), 5);
        // full, d=2, q<=3: 1 + 2 = 3
        let s = spec(1, 1, 2, Variant::Full);
        assert_eq!(enumerate_points(&s, 3, 1000).unwrap().count(), 3);
    }

    #[test]
    fn full_keeps_equal_locations_with_distinct_denominators() {
        let s = spec(1, 1, 2, Variant::Full);
        let pts: Vec<_> = enumerate_points(&s, 4, 1000).unwrap().collect();
        // 1/2 from q=2 and 2/4 from q=4 are distinct points (heights differ)
        assert!(pts.iter().any(|p| p.denominator == 2 && p.numerators == [1]));
        assert!(pts.iter().any(|p| p.denominator == 4 && p.numerators == [2]));
    }

    #[test]
    fn cap_reports_exact_predicted_count() {
        let s = spec(1, 1, 2, Variant::Graph);
        let err = enumerate_points(&s, 100, 10).unwrap_err();
        let predicted = predicted_point_count(&s, 100).unwrap();
        match err {
            Error::Resource(msg) => assert!(msg.contains(&predicted.to_string())),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn evaluate_recovers_enumerated_heights() {
        for d in [2u32, 3] {
            let s = spec(1, 2, d, Variant::Graph);
            for p in enumerate_points(&s, 30, 100_000).unwrap() {
                let coords: Vec<_> = p
                    .numerators
                    .iter()
                    .map(|&m| ratio_u(m, p.denominator))
                    .collect();
                assert_eq!(
                    evaluate(&s, &coords).unwrap(),
                    Height::Reciprocal { denominator: p.denominator }
                );
            }
        }
    }

    #[test]
    fn dump_format() {
        let s = spec(1, 1, 3, Variant::Graph);
        let mut buf = Vec::new();
        write_point_dump(enumerate_points(&s, 3, 100).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "2 1 1\n3 1 1\n3 1 2\n3 2 1\n3 2 2\n");
    }

    proptest! {
        #[test]
        fn stream_count_matches_oracle(q_max in 2u64..80, d in 2u32..4,
                                       graph in proptest::bool::ANY) {
            let variant = if graph { Variant::Graph } else { Variant::Full };
            let s = spec(1, 1, d, variant);
            let streamed = enumerate_points(&s, q_max, u64::MAX).unwrap().count() as u64;
            prop_assert_eq!(streamed, count_brute(variant, d, q_max));
            let predicted = predicted_point_count(&s, q_max).unwrap();
            prop_assert_eq!(predicted.to_string(), streamed.to_string());
        }

        #[test]
        fn graph_points_appear_in_full_stream(q_max in 2u64..40) {
            let g = spec(1, 1, 2, Variant::Graph);
            let f = spec(1, 1, 2, Variant::Full);
            let full: std::collections::HashSet<_> =
                enumerate_points(&f, q_max, u64::MAX).unwrap().collect();
            for p in enumerate_points(&g, q_max, u64::MAX).unwrap() {
                prop_assert!(full.contains(&p));
            }
        }
    }

    #[test]
    fn stream_counts_at_thousand() {
        let s = spec(1, 1, 2, Variant::Graph);
        let streamed = enumerate_points(&s, 1000, u64::MAX).unwrap().count() as u64;
        assert_eq!(streamed, count_brute(Variant::Graph, 2, 1000));
    }
}
