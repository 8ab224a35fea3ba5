//! The experiment kinds.

use std::collections::BTreeMap;
use std::fmt::Display;

use hyplab::boundary::{
    cover_mass_exact, joint_endpoints, joint_xn, joint_yn, measure_zero_test, BoundarySet, BoundaryStats,
};
use hyplab::halfspace::{
    closure_projection_check, gp_lower_bound_over, make_nested, nested_disjointness, projection_bound_over,
    BoundaryProxy, Halfspace,
};
use hyplab::heegaard::growth_experiment;
use hyplab::hyp::{npp_path, triangle_slimness};
use hyplab::isometry::{pivot_chain, translation_length_limit, Classification, IsometryBackend};
use hyplab::rng::{derive_seed, sample_stream};
use hyplab::spaces::farey::{bfs_gate, farey_distance, FareyGraph};
use hyplab::spaces::genus2::Genus2;
use hyplab::stats::summarize;
use hyplab::walk::{
    convolution_exact, distance_chain_speed, drift_estimate, halfspace_hit_prob, mu_n_halfspace_decay,
    mu_n_halfspace_decay_sampled, DecayTable, WalkSpec,
};
use hyplab::{ConstantTable, FreeTree, GroupElement, HyperbolicSpace, LabError, Rational, Result, Word};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Backend, ExperimentConfig, Kind};

/// Largest n for which μ⁽ⁿ⁾ is convolved exactly.
const EXACT_DECAY_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub holds: bool,
    /// "exhaustive", "exact", "sampled" or "search-bounded".
    pub evidence: &'static str,
    pub detail: String,
}

fn invariant(name: &str, holds: bool, evidence: &'static str, detail: impl Into<String>) -> Invariant {
    Invariant {
        name: name.into(),
        holds,
        evidence,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub invariants: Vec<Invariant>,
    pub constants: Option<ConstantTable>,
    pub certificates: BTreeMap<String, BTreeMap<String, u64>>,
    pub walk: Option<String>,
}

fn f(x: f64) -> String {
    format!("{x}")
}

fn opt<T: Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    match (cfg.kind, cfg.backend) {
        (Kind::MetricProps, Backend::Tree) => {
            let t = cfg.tree()?;
            metric_props(&t, cfg)
        }
        (Kind::MetricProps, Backend::Farey) => metric_props(&cfg.farey()?, cfg),
        (Kind::HalfspaceProps, Backend::Tree) => {
            let t = cfg.tree()?;
            let spec = (!cfg.n.is_empty()).then(|| cfg.tree_walk(&t)).transpose()?;
            halfspace_props(&t, cfg, spec, true)
        }
        (Kind::HalfspaceProps, Backend::Farey) => {
            let spec = (!cfg.n.is_empty()).then(|| cfg.farey_walk()).transpose()?;
            halfspace_props(&cfg.farey()?, cfg, spec, false)
        }
        (Kind::Drift, Backend::Tree) => {
            let t = cfg.tree()?;
            let spec = cfg.tree_walk(&t)?;
            let oracle = distance_chain_speed(&t, &spec, 4);
            drift(&t, &spec, cfg, oracle)
        }
        (Kind::Drift, Backend::Farey) => drift(&cfg.farey()?, &cfg.farey_walk()?, cfg, None),
        (Kind::TranslationGrowth, Backend::Tree) => {
            let t = cfg.tree()?;
            translation_growth(&t, &cfg.tree_walk(&t)?, cfg)
        }
        (Kind::TranslationGrowth, Backend::Farey) => translation_growth(&cfg.farey()?, &cfg.farey_walk()?, cfg),
        (Kind::Independence, Backend::Tree) => {
            let t = cfg.tree()?;
            independence(&t, &cfg.tree_walk(&t)?, cfg)
        }
        (Kind::Independence, Backend::Farey) => independence(&cfg.farey()?, &cfg.farey_walk()?, cfg),
        (Kind::MeasureZero, Backend::Tree) => measure_zero(&cfg.tree()?, cfg),
        (Kind::SplittingGrowth, Backend::Genus2) => {
            let custom = cfg.genus2()?;
            splitting_growth(custom.as_ref().unwrap_or(Genus2::standard()), cfg)
        }
        (Kind::FareyVerify, Backend::Farey) => farey_verify(&cfg.farey()?, cfg),
        (k, b) => Err(LabError::rejected(format!("{} does not run on {b:?}", k.name()))),
    }
}

fn metric_props<S: HyperbolicSpace>(space: &S, cfg: &ExperimentConfig) -> Result<Outcome> {
    let table = cfg.constant_table(space.delta())?;
    let samples = cfg.samples();
    let radius = cfg.radius.unwrap_or(8);
    struct Sample {
        axiom_violations: u64,
        geodesic_violations: u64,
        slimness: u64,
        npp: Option<u64>,
    }
    let per: Vec<Sample> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(cfg.seed, i);
            let p = (0..4).map(|_| space.random_point(&mut rng, radius)).collect::<Result<Vec<_>>>()?;
            let (a, b, c) = (&p[0], &p[1], &p[2]);
            let d = |x: &S::Point, y: &S::Point| space.distance(x, y);
            let axiom_violations = [
                d(a, b) != d(b, a),
                d(a, a) != 0,
                (a != b) != (d(a, b) > 0),
                d(a, c) > d(a, b) + d(b, c),
            ]
            .iter()
            .filter(|&&v| v)
            .count() as u64;
            let g = space.geodesic(a, b)?;
            let steps_ok = g.points().windows(2).all(|w| d(&w[0], &w[1]) == 1);
            let geodesic_violations = u64::from(g.len() as u64 != d(a, b) || !steps_ok);
            let slimness = triangle_slimness(space, a, b, c)?;
            let seg = space.geodesic(&p[2], &p[3])?;
            let path = npp_path(space, a, b, &seg)?;
            Ok(Sample {
                axiom_violations,
                geodesic_violations,
                slimness,
                npp: path.bound_holds.map(|_| path.defect),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let axioms: u64 = per.iter().map(|s| s.axiom_violations).sum();
    let geo: u64 = per.iter().map(|s| s.geodesic_violations).sum();
    let slim = per.iter().map(|s| s.slimness).max().unwrap_or(0);
    let npp_eligible = per.iter().filter(|s| s.npp.is_some()).count();
    let npp_worst = per.iter().filter_map(|s| s.npp).max();
    let npp_bound = Rational::from_integer(24) * space.delta();
    let slim_ok = Rational::from_integer(slim as i64) <= space.delta();
    let npp_ok = npp_worst.is_none_or(|w| Rational::from_integer(w as i64) <= npp_bound);
    let n = samples.to_string();
    let rows = vec![
        vec!["metric-axioms".into(), n.clone(), n.clone(), axioms.to_string(), "0".into(), (axioms == 0).to_string()],
        vec!["geodesic-length".into(), n.clone(), n.clone(), geo.to_string(), "0".into(), (geo == 0).to_string()],
        vec!["triangle-slimness".into(), n.clone(), n.clone(), slim.to_string(), space.delta().to_string(), slim_ok.to_string()],
        vec![
            "npp-path-defect".into(),
            n,
            npp_eligible.to_string(),
            opt(npp_worst),
            npp_bound.to_string(),
            npp_ok.to_string(),
        ],
    ];
    Ok(Outcome {
        header: vec!["check", "instances", "eligible", "worst", "bound", "holds"],
        rows,
        invariants: vec![
            invariant("metric-axioms", axioms == 0, "sampled", format!("{axioms} violations")),
            invariant("geodesic-length", geo == 0, "sampled", format!("{geo} violations")),
            invariant("triangle-slimness", slim_ok, "sampled", format!("worst {slim} vs δ = {}", space.delta())),
            invariant(
                "npp-path-defect",
                npp_ok,
                "sampled",
                format!("{npp_eligible} eligible, worst {npp_worst:?} vs 24δ = {npp_bound}"),
            ),
        ],
        constants: Some(table),
        ..Outcome::default()
    })
}

fn halfspace_props<S: BoundaryProxy>(
    space: &S,
    cfg: &ExperimentConfig,
    spec: Option<WalkSpec<S::Element>>,
    exact_decay: bool,
) -> Result<Outcome>
where
    S::Point: Display,
    S::Element: Display,
{
    let table = cfg.constant_table(space.delta())?;
    let one = space.basepoint();
    let points = space.ball(&one, cfg.radius.unwrap_or(8))?;
    let anchors: Vec<S::Point> = space
        .ball(&one, cfg.anchor_radius.unwrap_or(2))?
        .into_iter()
        .filter(|x| *x != one)
        .collect();
    let depth = cfg.depth.unwrap_or(8).min(space.max_cylinder_depth());
    let nest_k = table.k6.ceil().to_integer().max(1) as u64;
    let gp_floor = Rational::from_integer(35) * table.delta;
    let mut rows = Vec::new();
    let mut fails: BTreeMap<&str, usize> = BTreeMap::new();
    let mut claimed: BTreeMap<&str, usize> = BTreeMap::new();
    for x in &anchors {
        let d = space.distance(&one, x);
        let h = Halfspace::new(one.clone(), x.clone());
        let half = projection_bound_over(space, &h, &points)?;
        let closure = closure_projection_check(space, x, &points, depth, &table)?;
        *claimed.entry("projection").or_default() += 1;
        *claimed.entry("closure-projection").or_default() += 1;
        *fails.entry("projection").or_default() += usize::from(!half.holds);
        *fails.entry("closure-projection").or_default() += usize::from(!closure.holds);
        let nested = if d > nest_k {
            let check = nested_disjointness(space, &make_nested(space, x, nest_k)?, &points, &table);
            *claimed.entry("nested").or_default() += usize::from(check.claimed);
            *fails.entry("nested").or_default() += usize::from(!check.holds());
            Some(check)
        } else {
            None
        };
        let gp = if Rational::from_integer(d as i64) >= gp_floor {
            let check = gp_lower_bound_over(space, x, &points, &table)?;
            *claimed.entry("gromov-product").or_default() += 1;
            *fails.entry("gromov-product").or_default() += usize::from(!check.holds);
            Some(check)
        } else {
            None
        };
        rows.push(vec![
            x.to_string(),
            d.to_string(),
            half.checked.to_string(),
            opt(half.observed),
            half.bound.to_string(),
            opt(closure.observed),
            closure.bound.to_string(),
            nested.as_ref().map(|_| nest_k.to_string()).unwrap_or_default(),
            opt(nested.as_ref().map(|c| c.claimed)),
            opt(nested.as_ref().map(|c| c.disjoint)),
            opt(gp.as_ref().and_then(|c| c.observed)),
            opt(gp.as_ref().map(|c| c.bound)),
        ]);
    }
    let mut header = vec![
        "anchor",
        "distance",
        "inside",
        "projection_excess",
        "projection_bound",
        "closure_excess",
        "closure_bound",
        "nested_k",
        "nested_claimed",
        "nested_disjoint",
        "gp_min",
        "gp_bound",
    ];
    let mut invariants: Vec<Invariant> = ["projection", "closure-projection", "nested", "gromov-product"]
        .iter()
        .map(|&name| {
            let c = claimed.get(name).copied().unwrap_or(0);
            let bad = fails.get(name).copied().unwrap_or(0);
            invariant(
                name,
                bad == 0,
                "exhaustive",
                format!("{c} claimed instances over {} points, {bad} failures", points.len()),
            )
        })
        .collect();
    let mut walk = None;
    if let Some(spec) = spec {
        let n = *cfg.n.last().expect("walk only built with an n grid");
        let decay: DecayTable = if exact_decay && n <= EXACT_DECAY_MAX_N {
            mu_n_halfspace_decay(space, &convolution_exact(&spec, n)?, &anchors)?
        } else {
            mu_n_halfspace_decay_sampled(space, &spec, n, &anchors, cfg.samples())?
        };
        header.push("mu_n_mass");
        for (row, d) in rows.iter_mut().zip(&decay.rows) {
            row.push(f(d.mass_f64));
        }
        let evidence = if exact_decay && n <= EXACT_DECAY_MAX_N { "exact" } else { "sampled" };
        invariants.push(invariant(
            "halfspace-mass-decays",
            decay.slope_negative(),
            evidence,
            match &decay.fit {
                Some(fit) => format!("n = {n}: log-mass slope {} (R² {})", fit.slope, fit.r2),
                None => format!("n = {n}: too few positive masses to fit"),
            },
        ));
        walk = Some(spec.to_string());
    }
    Ok(Outcome {
        header,
        rows,
        invariants,
        constants: Some(table),
        walk,
        ..Outcome::default()
    })
}

fn drift<S: HyperbolicSpace>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    cfg: &ExperimentConfig,
    oracle: Option<Rational>,
) -> Result<Outcome>
where
    S::Element: Display,
{
    let mut rows = Vec::new();
    let mut last = None;
    for n in cfg.n_grid() {
        let s = drift_estimate(space, spec, n, cfg.samples())?;
        rows.push(vec![n.to_string(), f(s.mean), f(s.sd), f(s.ci95.0), f(s.ci95.1)]);
        last = Some((n, s));
    }
    let (n, s) = last.expect("n grid is non-empty");
    let mut invariants = vec![invariant(
        "linear-progress",
        s.ci95.0 > 0.0,
        "sampled",
        format!("n = {n}: 95% CI ({}, {})", s.ci95.0, s.ci95.1),
    )];
    if let Some(ell) = oracle {
        let tol = cfg.epsilon.unwrap_or(0.01);
        invariants.push(invariant(
            "drift-matches-distance-chain",
            (s.mean - to_f64(ell)).abs() <= tol,
            "sampled",
            format!("n = {n}: mean {} vs exact {ell} (tolerance {tol})", s.mean),
        ));
    }
    Ok(Outcome {
        header: vec!["n", "mean", "stddev", "ci_lo", "ci_hi"],
        rows,
        invariants,
        constants: Some(cfg.constant_table(space.delta())?),
        walk: Some(spec.to_string()),
        ..Outcome::default()
    })
}

fn translation_growth<S: IsometryBackend>(space: &S, spec: &WalkSpec<S::Element>, cfg: &ExperimentConfig) -> Result<Outcome>
where
    S::Element: Display,
{
    let eps = cfg.epsilon.unwrap_or(0.05);
    let need = cfg.fraction.unwrap_or(0.95);
    let one = space.basepoint();
    let mut rows = Vec::new();
    let mut above_displacement = 0u64;
    let mut last = (0, 0.0);
    for n in cfg.n_grid() {
        let per: Vec<(f64, Option<f64>)> = (0..cfg.samples())
            .into_par_iter()
            .map(|i| {
                let w = spec.position(i, n);
                let d = space.distance(&one, &space.act(&w, &one)) as f64;
                let tau = space.translation_length_exact(&w).ok().map(to_f64);
                (d, tau)
            })
            .collect();
        let nf = n as f64;
        let ell = per.iter().map(|p| p.0).sum::<f64>() / (per.len() as f64 * nf);
        let taus: Vec<f64> = per.iter().filter_map(|p| p.1.map(|t| t / nf)).collect();
        above_displacement += per.iter().filter(|p| p.1.is_some_and(|t| t > p.0)).count() as u64;
        let within = taus.iter().filter(|t| (*t - ell).abs() <= eps).count() as f64 / per.len() as f64;
        let s = summarize(&taus).ok();
        rows.push(vec![
            n.to_string(),
            f(ell),
            opt(s.as_ref().map(|s| s.mean)),
            opt(s.as_ref().map(|s| s.sd)),
            f(within),
            (per.len() - taus.len()).to_string(),
        ]);
        last = (n, within);
    }
    Ok(Outcome {
        header: vec!["n", "ell_hat", "tau_over_n_mean", "tau_over_n_stddev", "fraction_within_epsilon", "unresolved"],
        rows,
        invariants: vec![
            invariant(
                "translation-at-most-displacement",
                above_displacement == 0,
                "sampled",
                format!("{above_displacement} samples with τ(w) > d(1, w·1)"),
            ),
            invariant(
                "translation-concentrates",
                last.1 >= need,
                "sampled",
                format!("n = {}: fraction {} within ε = {eps} of ℓ̂ (need {need})", last.0, last.1),
            ),
        ],
        constants: Some(cfg.constant_table(space.delta())?),
        walk: Some(spec.to_string()),
        ..Outcome::default()
    })
}

fn independence<S: BoundaryStats>(space: &S, spec: &WalkSpec<S::Element>, cfg: &ExperimentConfig) -> Result<Outcome>
where
    S::Element: Display,
{
    let depth = cfg.depth.unwrap_or(1);
    let samples = cfg.samples();
    let mut rows = Vec::new();
    let mut last = None;
    for n in cfg.n_grid() {
        let x = joint_xn(space, spec, n, samples, depth)?;
        let y = joint_yn(space, &spec.clone().with_seed(derive_seed(cfg.seed, 1)), n, samples, depth)?;
        let e = joint_endpoints(space, &spec.clone().with_seed(derive_seed(cfg.seed, 2)), n, samples, depth)?;
        let hit = halfspace_hit_prob(space, &spec.clone().with_seed(derive_seed(cfg.seed, 3)), n, samples)?;
        let tv = (x.tv_to_product(), y.tv_to_product(), e.tv_to_product());
        rows.push(vec![
            n.to_string(),
            f(tv.0),
            f(tv.1),
            f(tv.2),
            f(e.eligible_fraction),
            x.skipped.to_string(),
            f(hit.forward),
            f(hit.reflected),
        ]);
        last = Some((n, tv, e.eligible_fraction));
    }
    let (n, tv, hyp) = last.expect("n grid is non-empty");
    Ok(Outcome {
        header: vec![
            "n",
            "tv_xn",
            "tv_yn_floor",
            "tv_endpoints",
            "hyperbolic_fraction",
            "skipped",
            "hit_forward",
            "hit_reflected",
        ],
        rows,
        invariants: vec![
            invariant(
                "directions-within-noise-floor",
                tv.0 <= 2.0 * tv.1,
                "sampled",
                format!("n = {n}: TV {} vs floor {}", tv.0, tv.1),
            ),
            invariant(
                "endpoints-within-noise-floor",
                tv.2 <= 2.0 * tv.1 && hyp >= 0.99,
                "sampled",
                format!("n = {n}: TV {} vs floor {}, hyperbolic fraction {hyp}", tv.2, tv.1),
            ),
        ],
        constants: Some(cfg.constant_table(space.delta())?),
        walk: Some(spec.to_string()),
        ..Outcome::default()
    })
}

fn avoid_letters(space: &FreeTree, s: &str) -> Result<Vec<i8>> {
    let w: Word = s.parse()?;
    space.check(&w)?;
    let mut out: Vec<i8> = w.letters().iter().flat_map(|&l| [l.abs(), -l.abs()]).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn measure_zero(space: &FreeTree, cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = cfg.tree_walk(space)?;
    let depth = cfg.depth.unwrap_or(5);
    let n = *cfg.n_grid().last().expect("n grid is non-empty");
    let set = BoundarySet::AvoidLetters(avoid_letters(space, cfg.avoid.as_deref().unwrap_or("a"))?);
    let report = measure_zero_test(space, &spec, &set, n, cfg.samples(), depth)?;
    let exact = cfg.is_uniform_preset();
    let mut worst_z: f64 = 0.0;
    let mut rows = Vec::new();
    for &(k, freq, seen) in &report.frequencies {
        let (mass, z) = if exact {
            let m = to_f64(cover_mass_exact(space, &set, k)?);
            let sigma = (m * (1.0 - m) / seen.max(1) as f64).sqrt();
            let z = if sigma > 0.0 { (freq - m).abs() / sigma } else { f64::from(u8::from(freq != m)) * f64::INFINITY };
            worst_z = worst_z.max(z);
            (Some(m), Some(z))
        } else {
            (None, None)
        };
        rows.push(vec![k.to_string(), f(freq), seen.to_string(), opt(mass.map(f)), opt(z.map(f))]);
    }
    let mut invariants = vec![invariant(
        "cover-frequency-non-increasing",
        report.non_increasing,
        "sampled",
        format!("depths 1..={depth} at n = {n}"),
    )];
    if exact {
        invariants.push(invariant(
            "cover-frequency-matches-harmonic",
            worst_z <= 4.0,
            "sampled",
            format!("worst deviation {worst_z}σ from the exact cover mass"),
        ));
    }
    Ok(Outcome {
        header: vec!["k", "frequency", "samples", "exact_mass", "z"],
        rows,
        invariants,
        constants: Some(cfg.constant_table(space.delta())?),
        walk: Some(spec.to_string()),
        ..Outcome::default()
    })
}

fn splitting_growth(space: &Genus2, cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = cfg.genus2_walk()?;
    let ns = cfg.n_grid();
    let report = growth_experiment(
        space,
        &spec,
        &ns,
        cfg.samples(),
        cfg.disc_bound.unwrap_or(1),
        cfg.search_bound.unwrap_or(hyplab::heegaard::DEFAULT_SEARCH_BOUND),
    )?;
    let mut certificates = BTreeMap::new();
    let rows = report
        .rows
        .iter()
        .map(|r| {
            certificates.insert(format!("n={}", r.n), r.lower_histogram.clone());
            let hist: Vec<String> = r.lower_histogram.iter().map(|(k, v)| format!("{k}={v}")).collect();
            vec![
                r.n.to_string(),
                r.samples.to_string(),
                f(r.mean_upper),
                r.max_upper.to_string(),
                f(r.mean_log_min_intersection),
                r.consistent.to_string(),
                hist.join(" "),
            ]
        })
        .collect();
    let total: u64 = report.rows.iter().map(|r| r.samples).sum();
    let consistent: u64 = report.rows.iter().map(|r| r.consistent).sum();
    let mut invariants = vec![invariant(
        "lower-at-most-upper",
        report.all_consistent(),
        "exact",
        format!("{consistent}/{total} intervals consistent"),
    )];
    if cfg.walk.as_deref() == Some("meridian-twists") {
        let zero = report
            .rows
            .iter()
            .all(|r| r.max_upper == 0 && r.lower_histogram.keys().all(|k| k == "0:exact"));
        invariants.push(invariant("handlebody-walk-stays-at-zero", zero, "exact", "every interval is [0, 0]"));
    } else if ns.len() >= 3 {
        let (holds, detail) = match &report.log_intersection_fit {
            Some(fit) => (
                fit.slope_ci95.0 > 0.0,
                format!("slope {} with 95% CI ({}, {})", fit.slope, fit.slope_ci95.0, fit.slope_ci95.1),
            ),
            None => (false, "no fit".to_string()),
        };
        invariants.push(invariant("log-intersection-grows", holds, "search-bounded", detail));
    }
    Ok(Outcome {
        header: vec![
            "n",
            "samples",
            "mean_upper",
            "max_upper",
            "mean_log_min_intersection",
            "consistent",
            "lower_certificates",
        ],
        rows,
        invariants,
        constants: cfg.delta.as_deref().map(|d| cfg.constant_table(crate::config::parse_rational(d)?)).transpose()?,
        certificates,
        walk: Some(spec.to_string()),
    })
}

fn farey_verify(space: &FareyGraph, cfg: &ExperimentConfig) -> Result<Outcome> {
    let gate = bfs_gate(-1, 2, cfg.max_denominator.unwrap_or(50))?;
    let spec = cfg.farey_walk()?;
    let n = *cfg.n_grid().last().expect("n grid is non-empty");
    let radius = cfg.radius.unwrap_or(8);
    let samples = cfg.samples();
    let results: Vec<(bool, Option<bool>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let g = spec.position(i, n);
            let mut rng = sample_stream(derive_seed(cfg.seed, 1), i);
            let a = space.random_point(&mut rng, radius)?;
            let b = space.random_point(&mut rng, radius)?;
            let invariant = farey_distance(&g.act(&a), &g.act(&b)) == farey_distance(&a, &b);
            // exact translation length against the orbit of its minimizing pivot
            let h = spec.position(i, 8);
            let tau = if space.classify(&h) == Classification::Hyperbolic {
                translation_check(space, &h)
            } else {
                None
            };
            Ok((invariant, tau))
        })
        .collect::<Result<Vec<_>>>()?;
    let broken = results.iter().filter(|r| !r.0).count();
    let tau_checked = results.iter().filter(|r| r.1.is_some()).count();
    let tau_bad = results.iter().filter(|r| r.1 == Some(false)).count();
    let rows = vec![
        vec!["bfs-gate".into(), gate.pairs.to_string(), gate.mismatches.to_string()],
        vec!["sl2-invariance".into(), samples.to_string(), broken.to_string()],
        vec!["translation-vs-orbit-limit".into(), tau_checked.to_string(), tau_bad.to_string()],
    ];
    Ok(Outcome {
        header: vec!["check", "instances", "mismatches"],
        rows,
        invariants: vec![
            invariant(
                "bfs-gate",
                gate.mismatches == 0,
                "exhaustive",
                match &gate.first_mismatch {
                    None => format!("{} vertices, {} pairs agree", gate.vertices, gate.pairs),
                    Some((u, v, a, b)) => format!("d({u}, {v}): ladder {a}, BFS {b}"),
                },
            ),
            invariant("sl2-invariance", broken == 0, "sampled", format!("{broken}/{samples} pairs changed distance")),
            invariant(
                "translation-vs-orbit-limit",
                tau_bad == 0,
                "sampled",
                format!("{tau_bad}/{tau_checked} hyperbolic elements with d(v, g⁶⁴v) ≠ 64τ or d(1, g⁶⁴·1)/64 < τ"),
            ),
        ],
        constants: Some(cfg.constant_table(space.delta())?),
        walk: Some(spec.to_string()),
        ..Outcome::default()
    })
}

/// `Some(true)` when the pivot v minimizing d(v, gv) = τ satisfies
/// d(v, g⁶⁴v) = 64τ and the orbit limit at 64 is at least τ; `None` when the
/// axis is too long to resolve.
fn translation_check(space: &FareyGraph, g: &hyplab::spaces::farey::Sl2) -> Option<bool> {
    let tau = space.translation_length_exact(g).ok()?;
    let chain = pivot_chain(g).ok()?;
    let v = chain.iter().min_by_key(|v| farey_distance(v, &g.act(v)))?;
    let g64 = g.pow(64);
    let limit = translation_length_limit(space, g, 64).ok()?;
    let along = Rational::from_integer(farey_distance(v, &g64.act(v)) as i64);
    Some(along == Rational::from_integer(64) * tau && limit.estimate >= tau)
}

/// Recomputes the derived constants from δ, k_qg and the fellow-travel
/// constant and compares them with the table.
pub fn constant_table_check(t: &ConstantTable) -> Invariant {
    let r = Rational::from_integer;
    let d = t.delta;
    let k5 = r(18) * d;
    let k6 = r(3) * k5 + d;
    let k = r(18) * d + k5;
    let expected = [
        ("K3", t.k3, r(24) * d + r(1)),
        ("K5", t.k5, k5),
        ("K6", t.k6, k6),
        ("K7", t.k7, r(19) * d),
        ("K8", t.k8, k6 + r(2) * (k + k5 + r(6) * t.fellow + r(36) * d)),
        ("K9", t.k9, r(60) * d),
        ("K10", t.k10, r(30) * t.fellow + r(48) * d),
    ];
    let bad: Vec<String> = expected
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(name, got, want)| format!("{name} = {got}, expected {want}"))
        .collect();
    invariant(
        "constant-table-formulas",
        bad.is_empty(),
        "exact",
        if bad.is_empty() { format!("δ = {d}") } else { bad.join("; ") },
    )
}
