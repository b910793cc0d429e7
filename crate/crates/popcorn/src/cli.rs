//! Reproducible experiment commands behind the `popcorn` binary: closed-form
//! reports, cover-count sweeps, estimators and verification suites, all with
//! deterministic CSV/JSON output.

use std::fmt::Write as _;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::covering::{
    admissible_k_range, cover_count, layer_cover_count, layer_denominators, lemma_epsilon_cap,
    CoverReport, DyadicScale,
};
use crate::dimensions::{
    assouad_dim_formula, assouad_probe_max, box_dim_formula, critical_exponent, dimension_report,
    fit_box_dimension, holder_exponent_bound, holder_theta_star, intermediate_dim_formula,
};
use crate::error::{Error, Result};
use crate::exact::{ratio_f64, ratio_u};
use crate::measure::{
    approx_intervals, chung_erdos_layer_floor, duffin_schaeffer_bound,
    layer_union_measure, pair_intersection_measure,
};
use crate::number_theory::{totient, TotientTable};
use crate::sets::{SetSpec, Variant, DEFAULT_POINT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One experiment's configuration; every number that steers a computation is
/// either an integer or an exact rational, so outputs are byte-deterministic.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub t: BigRational,
    pub d: u32,
    pub variant: Variant,
    pub j_min: u32,
    pub j_max: u32,
    pub theta: Option<BigRational>,
    pub epsilon: Option<BigRational>,
    pub t1: Option<BigRational>,
    pub t2: Option<BigRational>,
    pub format: OutputFormat,
    pub seed: u64,
    pub max_points: u64,
    pub probes: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t: BigRational::one(),
            d: 2,
            variant: Variant::Graph,
            j_min: 4,
            j_max: 10,
            theta: None,
            epsilon: None,
            t1: None,
            t2: None,
            format: OutputFormat::Json,
            seed: 0,
            max_points: DEFAULT_POINT_CAP,
            probes: 64,
        }
    }
}

impl RunConfig {
    pub fn spec(&self) -> Result<SetSpec> {
        if self.j_min > self.j_max {
            return Err(Error::Parse(format!(
                "j range is empty: {} > {}",
                self.j_min, self.j_max
            )));
        }
        SetSpec::from_ratio(&self.t, self.d, self.variant)
    }

    /// The margin used for admissible bands: the configured epsilon, or half
    /// the cap when none was given.
    fn epsilon_for(&self, spec: &SetSpec) -> Result<BigRational> {
        match &self.epsilon {
            Some(e) => Ok(e.clone()),
            None => Ok(lemma_epsilon_cap(spec)? / BigRational::from_integer(BigInt::from(2))),
        }
    }
}

fn rat(r: &BigRational) -> String {
    r.to_string()
}

/// Closed-form dimension report over a 101-node theta grid.
pub fn cmd_formula(config: &RunConfig) -> Result<String> {
    let spec = config.spec()?;
    let report = dimension_report(&spec, 100)?;
    match config.format {
        OutputFormat::Json => {
            let profile: Vec<serde_json::Value> = report
                .profile
                .iter()
                .map(|(th, v)| json!([rat(th), rat(v)]))
                .collect();
            let value = json!({
                "t": rat(&report.t),
                "d": report.d,
                "variant": report.variant.to_string(),
                "regime": if report.subcritical { "subcritical" } else { "collapsed" },
                "hausdorff": rat(&report.hausdorff),
                "box": rat(&report.box_dim),
                "box_decimal": ratio_f64(&report.box_dim),
                "assouad": rat(&report.assouad),
                "assouad_decimal": ratio_f64(&report.assouad),
                "phase_transition": rat(&report.phase_transition),
                "profile": profile,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("static schema")))
        }
        OutputFormat::Csv => {
            let mut out = String::from("quantity,theta,exact,decimal\n");
            let _ = writeln!(out, "hausdorff,,{},{}", rat(&report.hausdorff), ratio_f64(&report.hausdorff));
            let _ = writeln!(out, "box,,{},{}", rat(&report.box_dim), ratio_f64(&report.box_dim));
            let _ = writeln!(out, "assouad,,{},{}", rat(&report.assouad), ratio_f64(&report.assouad));
            for (th, v) in &report.profile {
                let _ = writeln!(out, "profile,{},{},{}", rat(th), rat(v), ratio_f64(v));
            }
            Ok(out)
        }
    }
}

/// Cover counts for every level in the configured range.
pub fn cmd_count(config: &RunConfig) -> Result<String> {
    let spec = config.spec()?;
    let mut reports = Vec::new();
    for j in config.j_min..=config.j_max {
        reports.push(cover_count(&spec, DyadicScale::new(j)?, config.max_points)?);
    }
    match config.format {
        OutputFormat::Csv => {
            let mut out = String::from(CoverReport::CSV_HEADER);
            out.push('\n');
            for r in &reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "j": r.level,
                        "delta": format!("1/{}", 1u128 << r.level),
                        "total": r.total,
                        "base_cells": r.base_cells,
                        "popcorn_cells": r.popcorn_cells,
                    })
                })
                .collect();
            Ok(format!("{}\n", serde_json::to_string_pretty(&rows).expect("static schema")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateTarget {
    Box,
    Intermediate,
    Assouad,
}

/// Runs the estimator for one dimension notion and reports it next to the
/// closed-form value.
pub fn cmd_estimate(config: &RunConfig, target: EstimateTarget) -> Result<String> {
    let spec = config.spec()?;
    let value = match target {
        EstimateTarget::Box => {
            let mut counts = Vec::new();
            for j in config.j_min..=config.j_max {
                let report = cover_count(&spec, DyadicScale::new(j)?, config.max_points)?;
                counts.push((j, report.total));
            }
            let fit = fit_box_dimension(&counts)?;
            let formula = box_dim_formula(&spec);
            json!({
                "target": "box",
                "estimate": fit.slope,
                "two_point_slope": fit.two_point_slope,
                "max_abs_residual": fit.max_abs_residual,
                "formula_value": rat(&formula),
                "formula_decimal": ratio_f64(&formula),
                "gap": (fit.slope - ratio_f64(&formula)).abs(),
                "counts": counts.iter().map(|&(j, n)| json!([j, n])).collect::<Vec<_>>(),
            })
        }
        EstimateTarget::Intermediate => {
            let theta = config
                .theta
                .clone()
                .ok_or_else(|| Error::Parse("--theta is required for the intermediate estimate".into()))?;
            let root = critical_exponent(&spec, &theta, DyadicScale::new(config.j_max)?)?;
            let formula = intermediate_dim_formula(&spec, &theta)?;
            json!({
                "target": "intermediate",
                "theta": rat(&theta),
                "estimate": root,
                "formula_value": rat(&formula),
                "formula_decimal": ratio_f64(&formula),
                "gap": (root - ratio_f64(&formula)).abs(),
                "j": config.j_max,
            })
        }
        EstimateTarget::Assouad => {
            let report = assouad_probe_max(
                &spec,
                3,
                &[4, 6],
                config.probes as usize,
                16,
                config.seed,
                config.max_points,
            )?;
            let formula = assouad_dim_formula(&spec);
            json!({
                "target": "assouad",
                "estimate": report.max_ratio,
                "formula_value": rat(&formula),
                "formula_decimal": ratio_f64(&formula),
                "gap": (report.max_ratio - ratio_f64(&formula)).abs(),
                "probes": report.probes,
                "outer_level": report.outer_level,
                "ratio_levels": report.ratio_levels,
                "seed": config.seed,
            })
        }
    };
    match config.format {
        OutputFormat::Json => {
            Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("static schema")))
        }
        OutputFormat::Csv => {
            let mut out = String::from("key,value\n");
            if let serde_json::Value::Object(map) = &value {
                for (k, v) in map {
                    let _ = writeln!(out, "{k},{v}");
                }
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifySuite {
    DuffinSchaeffer,
    ChungErdos,
    Totient,
    Epsilon,
    Layers,
}

/// Outcome of a verification suite: printable lines plus a failure count.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub failures: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs one inequality suite exhaustively over its documented grid.
pub fn cmd_verify(config: &RunConfig, suite: VerifySuite) -> Result<VerifyReport> {
    match suite {
        VerifySuite::DuffinSchaeffer => verify_duffin_schaeffer(config),
        VerifySuite::ChungErdos => verify_chung_erdos(config),
        VerifySuite::Totient => verify_totient(config),
        VerifySuite::Epsilon => verify_epsilon(config),
        VerifySuite::Layers => verify_layers(config),
    }
}

/// Pairwise overlap bound over 2 <= q < k <= 200 and delta in {2^-4..2^-12},
/// exactly; then the d = 3 product bound on a seeded sample.
fn verify_duffin_schaeffer(config: &RunConfig) -> Result<VerifyReport> {
    let mut lines = Vec::new();
    let mut failures = 0usize;
    let q_max = 200u64;
    for e in 4u32..=12 {
        let delta = ratio_u(1, 1u64 << e);
        let unions: Vec<_> = (0..=q_max)
            .map(|q| {
                if q >= 2 {
                    approx_intervals(q, &delta, true).ok()
                } else {
                    None
                }
            })
            .collect();
        let bad: Vec<(u64, u64)> = (2..=q_max)
            .into_par_iter()
            .flat_map_iter(|q| {
                let unions = &unions;
                let delta = delta.clone();
                (q + 1..=q_max).filter_map(move |k| {
                    let overlap = unions[q as usize]
                        .as_ref()
                        .unwrap()
                        .intersect(unions[k as usize].as_ref().unwrap())
                        .measure();
                    (overlap > duffin_schaeffer_bound(q, k, &delta, 2)).then_some((q, k))
                })
            })
            .collect();
        let pairs = (q_max - 1) * (q_max - 2) / 2;
        if bad.is_empty() {
            lines.push(format!("duffin-schaeffer 1d delta=2^-{e}: {pairs} pairs, all within 4qk*delta^2"));
        } else {
            failures += bad.len();
            for (q, k) in bad.iter().take(10) {
                lines.push(format!("duffin-schaeffer 1d delta=2^-{e}: VIOLATION at q={q} k={k}"));
            }
        }
    }
    // d = 3 product bound on a seeded sample
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut sampled = 0usize;
    let mut bad3 = 0usize;
    while sampled < 1000 {
        let q = rng.gen_range(2..=q_max);
        let k = rng.gen_range(2..=q_max);
        if q == k {
            continue;
        }
        let e = rng.gen_range(4u32..=12);
        let delta = ratio_u(1, 1u64 << e);
        let overlap = pair_intersection_measure(q, k, &delta, 3)?;
        if overlap > duffin_schaeffer_bound(q, k, &delta, 3) {
            bad3 += 1;
            lines.push(format!("duffin-schaeffer d=3: VIOLATION at q={q} k={k} delta=2^-{e}"));
        }
        sampled += 1;
    }
    failures += bad3;
    if bad3 == 0 {
        lines.push("duffin-schaeffer d=3: 1000 seeded pairs within 4^2 (qk*delta^2)^2".into());
    }
    Ok(VerifyReport { lines, failures })
}

/// Layer floors stay below exact union measures for every admissible k.
fn verify_chung_erdos(config: &RunConfig) -> Result<VerifyReport> {
    let spec = config.spec()?.with_variant(Variant::Graph);
    if spec.d() != 2 {
        return Err(Error::Domain("the chung-erdos suite sweeps intervals, use --d 2".into()));
    }
    let epsilon = config.epsilon_for(&spec)?;
    let mut lines = Vec::new();
    let mut failures = 0usize;
    for j in [8u32, 10] {
        let scale = DyadicScale::new(j)?;
        let band = admissible_k_range(&spec, scale, &epsilon)?;
        for k in band.k_min..=band.k_max {
            let floor = chung_erdos_layer_floor(&spec, scale, k)?;
            let union = layer_union_measure(&spec, scale, k)?;
            if floor <= union {
                lines.push(format!("chung-erdos j={j} k={k}: floor {} <= union {}", floor, union));
            } else {
                failures += 1;
                lines.push(format!("chung-erdos j={j} k={k}: VIOLATION floor {} > union {}", floor, union));
            }
        }
    }
    Ok(VerifyReport { lines, failures })
}

/// Sieve/direct agreement on a seeded sample plus the growth-ratio floor.
fn verify_totient(config: &RunConfig) -> Result<VerifyReport> {
    let limit = 1_000_000u64;
    let table = TotientTable::build(limit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut lines = Vec::new();
    let mut failures = 0usize;
    let mut mismatches = 0usize;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=limit);
        if table.phi(n) != totient(n)? {
            mismatches += 1;
            lines.push(format!("totient: sieve and direct value disagree at n={n}"));
        }
    }
    failures += mismatches;
    if mismatches == 0 {
        lines.push("totient: sieve agrees with direct evaluation on 1000 seeded samples".into());
    }
    let (argmin, min) = table.min_growth_ratio();
    if min > 0.0 {
        lines.push(format!(
            "totient: growth ratio phi(n) lnln(n)/n over [3, 10^6] has positive floor {min:.6} at n={argmin}"
        ));
    } else {
        failures += 1;
        lines.push(format!("totient: VIOLATION nonpositive growth ratio {min} at n={argmin}"));
    }
    Ok(VerifyReport { lines, failures })
}

/// Admissible-band checks across the configured scale range; reports the
/// first level at which both band properties verify.
fn verify_epsilon(config: &RunConfig) -> Result<VerifyReport> {
    let spec = config.spec()?;
    let cap = lemma_epsilon_cap(&spec)?;
    let epsilon = config.epsilon_for(&spec)?;
    if !epsilon.is_positive() || epsilon >= cap {
        return Err(Error::Domain(format!(
            "epsilon {epsilon} is outside (0, {cap}), the admissible-margin cap for these parameters"
        )));
    }
    let mut lines = Vec::new();
    let mut failures = 0usize;
    let mut first_pass = None;
    for j in config.j_min..=config.j_max {
        match admissible_k_range(&spec, DyadicScale::new(j)?, &epsilon) {
            Ok(band) => {
                if first_pass.is_none() {
                    first_pass = Some(j);
                }
                lines.push(format!(
                    "epsilon j={j}: band [{}, {}] verified (every k sees a denominator, all below 2^{j})",
                    band.k_min, band.k_max
                ));
            }
            Err(Error::Verification(msg)) => {
                failures += 1;
                lines.push(format!("epsilon j={j}: FAIL {msg}"));
            }
            Err(other) => return Err(other),
        }
    }
    match first_pass {
        Some(j) => lines.push(format!("epsilon: smallest verified level j={j}")),
        None => lines.push("epsilon: no level in range verified".into()),
    }
    Ok(VerifyReport { lines, failures })
}

/// Two-path counting: popcorn cells at each scale equal the sum of per-layer
/// spatial counts, since layer k pins the height row to k.
fn verify_layers(config: &RunConfig) -> Result<VerifyReport> {
    let mut lines = Vec::new();
    let mut failures = 0usize;
    let cases: [(u64, u64, u32, u32); 4] = [(1, 1, 2, 8), (1, 1, 3, 6), (1, 2, 2, 4), (1, 2, 3, 3)];
    for (tn, td, d, j_hi) in cases {
        let spec = SetSpec::new(tn, td, d, Variant::Graph)?;
        for j in 2..=j_hi {
            let scale = DyadicScale::new(j)?;
            let report = cover_count(&spec, scale, config.max_points)?;
            let mut recount = 0u64;
            let mut k = 1u64;
            loop {
                let (lo, hi) = layer_denominators(&spec, scale, k);
                if hi < 2 {
                    break;
                }
                if hi > lo {
                    recount += layer_cover_count(&spec, scale, k, config.max_points)?;
                }
                k += 1;
            }
            if recount == report.popcorn_cells {
                lines.push(format!(
                    "layers t={tn}/{td} d={d} j={j}: layer recount {recount} matches popcorn cells"
                ));
            } else {
                failures += 1;
                lines.push(format!(
                    "layers t={tn}/{td} d={d} j={j}: VIOLATION recount {recount} != popcorn {}",
                    report.popcorn_cells
                ));
            }
        }
    }
    Ok(VerifyReport { lines, failures })
}

/// Holder distortion bound plus the full dimension-ratio curve.
pub fn cmd_holder(config: &RunConfig) -> Result<String> {
    let t1 = config
        .t1
        .clone()
        .ok_or_else(|| Error::Parse("--t1 is required".into()))?;
    let t2 = config
        .t2
        .clone()
        .ok_or_else(|| Error::Parse("--t2 is required".into()))?;
    let bound = holder_exponent_bound(config.d, &t1, &t2)?;
    let star = holder_theta_star(config.d, &t2);
    let s1 = SetSpec::from_ratio(&t1, config.d, config.variant)?;
    let s2 = SetSpec::from_ratio(&t2, config.d, config.variant)?;
    // 101-node grid, with theta* inserted so the minimum is on the curve
    let mut thetas: Vec<BigRational> = (0..=100u64).map(|i| ratio_u(i, 100)).collect();
    if !thetas.contains(&star) {
        thetas.push(star.clone());
        thetas.sort();
    }
    let mut curve = Vec::new();
    for theta in &thetas {
        let top = intermediate_dim_formula(&s2, theta)?;
        let bottom = intermediate_dim_formula(&s1, theta)?;
        let ratio = &top / &bottom;
        curve.push((theta.clone(), top, bottom, ratio));
    }
    match config.format {
        OutputFormat::Json => {
            let value = json!({
                "d": config.d,
                "t1": rat(&t1),
                "t2": rat(&t2),
                "alpha_bound": rat(&bound),
                "alpha_bound_decimal": ratio_f64(&bound),
                "theta_star": rat(&star),
                "theta_star_decimal": ratio_f64(&star),
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("static schema")))
        }
        OutputFormat::Csv => {
            let mut out = String::from("theta,dim_t2,dim_t1,ratio\n");
            for (theta, top, bottom, ratio) in &curve {
                let _ = writeln!(out, "{},{},{},{}", rat(theta), rat(top), rat(bottom), rat(ratio));
            }
            Ok(out)
        }
    }
}
