//! Empirical boundary measures: harmonic measure on cylinders, the joint
//! laws of (w_n, w_n⁻¹), (w_n, w_{2n}⁻¹w_n) and (λ⁺, λ⁻), independence
//! distances and measure-zero proxies.
//!
//! The direction of w_n stands in for its limit point: the depth-k prefix of
//! the reduced word on the tree, the depth-k Stern–Brocot interval of w_n·0
//! on the Farey graph.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::group::GroupElement;
use crate::halfspace::BoundaryProxy;
use crate::hyp::{HyperbolicSpace, Rational};
use crate::isometry::{Classification, IsometryBackend};
use crate::spaces::farey::{cylinder_of_surd, cylinder_of_vertex, FareyCylinder, FareyGraph, Sl2};
use crate::spaces::tree::{FreeTree, Word};
use crate::walk::WalkSpec;

/// A subset of the boundary given by a finite description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundarySet {
    Full,
    Empty,
    /// Tree rays using none of the listed letters.
    AvoidLetters(Vec<i8>),
    /// A union of cylinders, by name.
    Union(Vec<String>),
}

pub trait BoundaryStats: IsometryBackend {
    /// The depth-`depth` cylinder in the direction of g·1, or `None` when g·1
    /// is too close to 1 to have one.
    fn direction(&self, g: &Self::Element, depth: usize) -> Result<Option<Self::Cylinder>>;
    /// The cylinder of λ⁺(g) or λ⁻(g), or `None` unless g is hyperbolic.
    fn fixed_point_cylinder(&self, g: &Self::Element, attracting: bool, depth: usize) -> Result<Option<Self::Cylinder>>;
    /// g⁻¹C as a single cylinder, or `None` when it is not one.
    fn pullback(&self, g: &Self::Element, c: &Self::Cylinder) -> Result<Option<Self::Cylinder>>;
    /// Whether `c` belongs to the depth-|c| cylinder cover of `x`.
    fn in_cover(&self, x: &BoundarySet, c: &Self::Cylinder) -> Result<bool>;
}

impl BoundaryStats for FreeTree {
    fn direction(&self, g: &Word, depth: usize) -> Result<Option<Word>> {
        Ok((g.len() >= depth).then(|| g.prefix(depth)))
    }

    fn fixed_point_cylinder(&self, g: &Word, attracting: bool, depth: usize) -> Result<Option<Word>> {
        if g.is_empty() {
            return Ok(None);
        }
        let (u, c) = g.cyclic_decomposition();
        let c = if attracting { c } else { c.inverse() };
        let mut ray = u;
        while ray.len() < depth {
            ray.mul_assign(&c);
        }
        Ok(Some(ray.prefix(depth)))
    }

    fn pullback(&self, g: &Word, c: &Word) -> Result<Option<Word>> {
        // only the front of g⁻¹c reduces, so the image stays a cylinder
        // as long as c is not swallowed
        if c.len() <= g.len() {
            return Ok(None);
        }
        Ok(Some(g.inverse().mul(c)))
    }

    fn in_cover(&self, x: &BoundarySet, c: &Word) -> Result<bool> {
        Ok(match x {
            BoundarySet::Full => true,
            BoundarySet::Empty => false,
            BoundarySet::AvoidLetters(ls) => c.letters().iter().all(|l| !ls.contains(l)),
            BoundarySet::Union(names) => {
                let s = c.to_string();
                names.iter().any(|n| s.starts_with(n.as_str()))
            }
        })
    }
}

impl BoundaryStats for FareyGraph {
    fn direction(&self, g: &Sl2, depth: usize) -> Result<Option<FareyCylinder>> {
        let v = g.act(&self.basepoint());
        if v.is_infinity() {
            return Ok(None);
        }
        cylinder_of_vertex(&v, depth).map(Some)
    }

    fn fixed_point_cylinder(&self, g: &Sl2, attracting: bool, depth: usize) -> Result<Option<FareyCylinder>> {
        let x = if attracting { g.attracting_fixed_point() } else { g.repelling_fixed_point() };
        x.map(|x| cylinder_of_surd(&x, depth)).transpose()
    }

    fn pullback(&self, _g: &Sl2, _c: &FareyCylinder) -> Result<Option<FareyCylinder>> {
        Err(LabError::unsupported("farey", "cylinder pullback"))
    }

    fn in_cover(&self, x: &BoundarySet, c: &FareyCylinder) -> Result<bool> {
        match x {
            BoundarySet::Full => Ok(true),
            BoundarySet::Empty => Ok(false),
            BoundarySet::AvoidLetters(_) => Err(LabError::rejected("letter constraints are not decidable on Farey cylinders")),
            BoundarySet::Union(names) => Ok(names.iter().any(|n| c.code().starts_with(n.as_str()))),
        }
    }
}

/// Counts of samples per cylinder at a fixed depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalMeasure<C: Ord> {
    pub depth: usize,
    pub counts: BTreeMap<C, u64>,
    /// Samples that landed in some cylinder.
    pub total: u64,
    /// Samples without a direction at this depth.
    pub skipped: u64,
    pub provenance: String,
}

impl<C: Ord + Clone> EmpiricalMeasure<C> {
    pub fn frequency(&self, c: &C) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(c).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// ν̂ of a cylinder of depth at most `self.depth`.
    pub fn mass<S: BoundaryProxy<Cylinder = C>>(&self, space: &S, c: &C) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let hits: u64 = self
            .counts
            .iter()
            .filter(|(d, _)| space.is_sub_cylinder(c, d))
            .map(|(_, n)| n)
            .sum();
        hits as f64 / self.total as f64
    }
}

fn tally<C: Ord + Clone + Send>(items: Vec<Option<C>>) -> (BTreeMap<C, u64>, u64, u64) {
    let mut counts = BTreeMap::new();
    let mut skipped = 0;
    for c in items {
        match c {
            Some(c) => *counts.entry(c).or_insert(0) += 1,
            None => skipped += 1,
        }
    }
    let total = counts.values().sum();
    (counts, total, skipped)
}

fn provenance<G: GroupElement>(spec: &WalkSpec<G>, n: usize) -> String {
    let steps: Vec<String> = spec.steps().iter().map(|(g, w)| format!("{g:?}:{w}")).collect();
    format!("{}{{{}}} seed={} n={n}", spec.backend, steps.join(", "), spec.seed)
}

/// Distribution of the direction of w_n.
pub fn harmonic_estimate<S: BoundaryStats>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    n: usize,
    samples: u64,
    depth: usize,
) -> Result<EmpiricalMeasure<S::Cylinder>> {
    let dirs = (0..samples)
        .into_par_iter()
        .map(|i| space.direction(&spec.position(i, n), depth))
        .collect::<Result<Vec<_>>>()?;
    let (counts, total, skipped) = tally(dirs);
    Ok(EmpiricalMeasure {
        depth,
        counts,
        total,
        skipped,
        provenance: provenance(spec, n),
    })
}

/// max over cylinders C of |ν̂(C) − Σ_g μ(g) ν̂(g⁻¹C)|, over the cylinders
/// of depth `em.depth − max|g|` (so every g⁻¹C is resolved by `em`).
pub fn stationarity_residual(em: &EmpiricalMeasure<Word>, space: &FreeTree, spec: &WalkSpec<Word>) -> Result<f64> {
    if em.total == 0 {
        return Err(LabError::rejected("empty measure"));
    }
    let reach = spec.steps().iter().map(|(g, _)| g.len()).max().unwrap_or(0);
    let depth = em.depth.checked_sub(reach).filter(|&d| d > reach).ok_or_else(|| {
        LabError::rejected(format!("depth {} is too shallow for generators of length {reach}", em.depth))
    })?;
    let cyls = space.cylinders(depth)?;
    let mut worst: f64 = 0.0;
    for c in &cyls {
        let mut pushed = 0.0;
        for (g, w) in spec.steps() {
            let back = space.pullback(g, c)?.ok_or_else(|| LabError::rejected("pullback left the cylinder algebra"))?;
            pushed += rational_f64(w) * em.mass(space, &back);
        }
        worst = worst.max((em.mass(space, c) - pushed).abs());
    }
    Ok(worst)
}

fn rational_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact first-passage probabilities F(s) = P(the walk ever visits s) for
/// the uniform nearest-neighbour walk on the free group of rank r:
/// F solves (2r−1)F² − 2rF + 1 = 0, whose transient root is 1/(2r−1).
pub fn first_passage_uniform(rank: u8) -> Rational {
    Rational::new(1, 2 * rank as i64 - 1)
}

/// Exact harmonic measure of a tree cylinder under the uniform walk:
/// the walk must pass through each proper prefix, then from the last one
/// end up beyond the final letter, which happens with probability
/// F(1 − F)/(1 − F²).
pub fn harmonic_cylinder_exact(space: &FreeTree, c: &Word) -> Result<Rational> {
    space.check(c)?;
    if c.is_empty() {
        return Ok(Rational::from_integer(1));
    }
    let f = first_passage_uniform(space.rank());
    let one = Rational::from_integer(1);
    let last = f * (one - f) / (one - f * f);
    let mut m = last;
    for _ in 1..c.len() {
        m *= f;
    }
    Ok(m)
}

/// Counts over pairs of cylinders.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDistribution<C: Ord> {
    pub depth: usize,
    pub counts: BTreeMap<(C, C), u64>,
    pub left: BTreeMap<C, u64>,
    pub right: BTreeMap<C, u64>,
    pub total: u64,
    pub skipped: u64,
    /// Fraction of samples eligible for the pair (hyperbolic for endpoints).
    pub eligible_fraction: f64,
}

impl<C: Ord + Clone> JointDistribution<C> {
    fn from_pairs(depth: usize, pairs: Vec<Option<(C, C)>>, eligible: u64, samples: u64) -> Self {
        let mut counts = BTreeMap::new();
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        let mut skipped = 0;
        for p in pairs {
            match p {
                Some((a, b)) => {
                    *left.entry(a.clone()).or_insert(0) += 1;
                    *right.entry(b.clone()).or_insert(0) += 1;
                    *counts.entry((a, b)).or_insert(0) += 1;
                }
                None => skipped += 1,
            }
        }
        JointDistribution {
            depth,
            total: counts.values().sum(),
            counts,
            left,
            right,
            skipped,
            eligible_fraction: if samples == 0 { 0.0 } else { eligible as f64 / samples as f64 },
        }
    }

    /// Total variation between the joint law and the product of its marginals.
    pub fn tv_to_product(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let t = self.total as f64;
        let mut sum = 0.0;
        for (a, na) in &self.left {
            for (b, nb) in &self.right {
                let joint = self.counts.get(&(a.clone(), b.clone())).copied().unwrap_or(0) as f64 / t;
                sum += (joint - (*na as f64 / t) * (*nb as f64 / t)).abs();
            }
        }
        sum / 2.0
    }

    /// Pearson χ² of the joint counts against the product of marginals.
    pub fn chi_square(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let t = self.total as f64;
        let mut sum = 0.0;
        for (a, na) in &self.left {
            for (b, nb) in &self.right {
                let expected = *na as f64 * *nb as f64 / t;
                let observed = self.counts.get(&(a.clone(), b.clone())).copied().unwrap_or(0) as f64;
                sum += (observed - expected).powi(2) / expected;
            }
        }
        sum
    }
}

fn check_joint(n: usize, depth: usize) -> Result<()> {
    if depth == 0 || n < 2 * depth {
        return Err(LabError::rejected(format!("need depth ≥ 1 and n ≥ 2·depth, got n = {n}, depth = {depth}")));
    }
    Ok(())
}

/// Joint law of the directions of w_n and w_n⁻¹.
pub fn joint_xn<S: BoundaryStats>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    n: usize,
    samples: u64,
    depth: usize,
) -> Result<JointDistribution<S::Cylinder>> {
    check_joint(n, depth)?;
    let pairs = (0..samples)
        .into_par_iter()
        .map(|i| {
            let w = spec.position(i, n);
            Ok(space.direction(&w, depth)?.zip(space.direction(&w.inverse(), depth)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JointDistribution::from_pairs(depth, pairs, samples, samples))
}

/// Joint law of the directions of w_n and w_{2n}⁻¹w_n, which are
/// independent by construction.
pub fn joint_yn<S: BoundaryStats>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    n: usize,
    samples: u64,
    depth: usize,
) -> Result<JointDistribution<S::Cylinder>> {
    check_joint(n, depth)?;
    let pairs = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut mid = S::Element::identity();
            let end = spec.walk(i, 2 * n, |k, w| {
                if k == n {
                    mid = w.clone();
                }
            });
            let back = end.inverse().mul(&mid);
            Ok(space.direction(&mid, depth)?.zip(space.direction(&back, depth)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JointDistribution::from_pairs(depth, pairs, samples, samples))
}

/// Joint law of the fixed points (λ⁺(w_n), λ⁻(w_n)) over hyperbolic samples.
pub fn joint_endpoints<S: BoundaryStats>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    n: usize,
    samples: u64,
    depth: usize,
) -> Result<JointDistribution<S::Cylinder>> {
    check_joint(n, depth)?;
    let pairs = (0..samples)
        .into_par_iter()
        .map(|i| {
            let w = spec.position(i, n);
            if space.classify(&w) != Classification::Hyperbolic {
                return Ok((false, None));
            }
            let pair = space
                .fixed_point_cylinder(&w, true, depth)?
                .zip(space.fixed_point_cylinder(&w, false, depth)?);
            Ok((true, pair))
        })
        .collect::<Result<Vec<_>>>()?;
    let eligible = pairs.iter().filter(|p| p.0).count() as u64;
    let pairs = pairs.into_iter().filter(|p| p.0).map(|p| p.1).collect();
    let mut out = JointDistribution::from_pairs(depth, pairs, eligible, samples);
    out.eligible_fraction = eligible as f64 / samples.max(1) as f64;
    Ok(out)
}

/// Frequencies of the depth-k direction of w_n lying in the cylinder cover
/// of X, for k = 1..=depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureZeroReport {
    pub set: BoundarySet,
    pub n: usize,
    pub samples: u64,
    /// (k, frequency, samples with a depth-k direction)
    pub frequencies: Vec<(usize, f64, u64)>,
    pub non_increasing: bool,
    pub strictly_decreasing: bool,
}

pub fn measure_zero_test<S: BoundaryStats>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    x: &BoundarySet,
    n: usize,
    samples: u64,
    depth: usize,
) -> Result<MeasureZeroReport> {
    if depth == 0 {
        return Err(LabError::rejected("depth must be at least 1"));
    }
    space.in_cover(x, &space.cylinders(1)?[0])?;
    let per_sample = (0..samples)
        .into_par_iter()
        .map(|i| {
            let w = spec.position(i, n);
            (1..=depth)
                .map(|k| space.direction(&w, k)?.map(|c| space.in_cover(x, &c)).transpose())
                .collect::<Result<Vec<Option<bool>>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let frequencies: Vec<(usize, f64, u64)> = (0..depth)
        .map(|k| {
            let seen: Vec<bool> = per_sample.iter().filter_map(|s| s[k]).collect();
            let hits = seen.iter().filter(|&&b| b).count();
            let f = if seen.is_empty() { 0.0 } else { hits as f64 / seen.len() as f64 };
            (k + 1, f, seen.len() as u64)
        })
        .collect();
    Ok(MeasureZeroReport {
        set: x.clone(),
        n,
        samples,
        non_increasing: frequencies.windows(2).all(|w| w[1].1 <= w[0].1),
        strictly_decreasing: frequencies.windows(2).all(|w| w[1].1 < w[0].1),
        frequencies,
    })
}

/// Depth-k cover mass of a tree boundary set under the exact harmonic measure.
pub fn cover_mass_exact(space: &FreeTree, x: &BoundarySet, depth: usize) -> Result<Rational> {
    let mut total = Rational::from_integer(0);
    for c in space.cylinders(depth)? {
        if space.in_cover(x, &c)? {
            total += harmonic_cylinder_exact(space, &c)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::binomial_sigma;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn exact_harmonic_masses() {
        let t = FreeTree::new(2).unwrap();
        assert_eq!(harmonic_cylinder_exact(&t, &w("a")).unwrap(), Rational::new(1, 4));
        assert_eq!(harmonic_cylinder_exact(&t, &w("ab")).unwrap(), Rational::new(1, 12));
        for d in 1..=5 {
            let total: Rational = t.sphere(d).iter().map(|c| harmonic_cylinder_exact(&t, c).unwrap()).sum();
            assert_eq!(total, Rational::from_integer(1));
        }
        let t3 = FreeTree::new(3).unwrap();
        assert_eq!(harmonic_cylinder_exact(&t3, &w("cA")).unwrap(), Rational::new(1, 30));
    }

    #[test]
    fn harmonic_estimates() {
        let t = FreeTree::new(2).unwrap();
        let spec = WalkSpec::f2_uniform(11);
        let em = harmonic_estimate(&t, &spec, 60, 40_000, 2).unwrap();
        for c in t.sphere(1) {
            assert!((em.mass(&t, &c) - 0.25).abs() <= 4.0 * binomial_sigma(0.25, em.total));
        }
        let p = 1.0 / 12.0;
        assert!((em.frequency(&w("ab")) - p).abs() <= 4.0 * binomial_sigma(p, em.total));
        let ray = harmonic_estimate(&t, &WalkSpec::f2_ray(0), 5, 10, 3).unwrap();
        assert_eq!(ray.counts.len(), 1);
        assert_eq!(ray.frequency(&w("aaa")), 1.0);
    }

    #[test]
    fn stationarity() {
        let t = FreeTree::new(2).unwrap();
        let spec = WalkSpec::f2_uniform(5);
        let em = harmonic_estimate(&t, &spec, 60, 40_000, 3).unwrap();
        assert!(stationarity_residual(&em, &t, &spec).unwrap() <= 0.02);
        let ray = WalkSpec::f2_ray(0);
        let exact = harmonic_estimate(&t, &ray, 8, 4, 3).unwrap();
        assert_eq!(stationarity_residual(&exact, &t, &ray).unwrap(), 0.0);
        let empty = EmpiricalMeasure {
            depth: 3,
            counts: BTreeMap::new(),
            total: 0,
            skipped: 0,
            provenance: String::new(),
        };
        assert!(stationarity_residual(&empty, &t, &spec).is_err());
        let shallow = harmonic_estimate(&t, &spec, 10, 10, 1).unwrap();
        assert!(stationarity_residual(&shallow, &t, &spec).is_err());
    }

    #[test]
    fn joint_laws() {
        let t = FreeTree::new(2).unwrap();
        let ray = WalkSpec::f2_ray(0);
        let x = joint_xn(&t, &ray, 6, 20, 1).unwrap();
        assert_eq!(x.counts.len(), 1);
        assert_eq!(x.counts.get(&(w("a"), w("A"))), Some(&20));
        assert_eq!(x.tv_to_product(), 0.0);
        assert_eq!(joint_yn(&t, &ray, 6, 20, 1).unwrap().counts.len(), 1);
        let e = joint_endpoints(&t, &ray, 6, 20, 1).unwrap();
        assert_eq!(e.counts.get(&(w("a"), w("A"))), Some(&20));
        assert_eq!(e.eligible_fraction, 1.0);
        assert!(joint_xn(&t, &ray, 3, 20, 2).is_err());

        let u = WalkSpec::f2_uniform(2);
        let x = joint_xn(&t, &u, 50, 20_000, 1).unwrap();
        let y = joint_yn(&t, &u, 50, 20_000, 1).unwrap();
        assert!(x.tv_to_product() < 0.05 && y.tv_to_product() < 0.05);
        assert!((0.0..=1.0).contains(&x.tv_to_product()));
        let e = joint_endpoints(&t, &u, 50, 5_000, 1).unwrap();
        assert!(e.eligible_fraction >= 0.99);
    }

    #[test]
    fn measure_zero_proxy() {
        let t = FreeTree::new(2).unwrap();
        let u = WalkSpec::f2_uniform(9);
        let x = BoundarySet::AvoidLetters(vec![1, -1]);
        let r = measure_zero_test(&t, &u, &x, 40, 30_000, 4).unwrap();
        assert!(r.strictly_decreasing);
        for (k, f, m) in &r.frequencies {
            let p = 0.5 * (1.0f64 / 3.0).powi(*k as i32 - 1);
            assert!((f - p).abs() <= 4.0 * binomial_sigma(p, *m), "k={k}");
            assert_eq!(cover_mass_exact(&t, &x, *k).unwrap(), Rational::new(1, 2) * Rational::new(1, 3).pow(*k as i32 - 1));
        }
        let full = measure_zero_test(&t, &u, &BoundarySet::Full, 20, 100, 3).unwrap();
        assert!(full.frequencies.iter().all(|f| f.1 == 1.0));
        let empty = measure_zero_test(&t, &u, &BoundarySet::Empty, 20, 100, 3).unwrap();
        assert!(empty.frequencies.iter().all(|f| f.1 == 0.0));
        let f = FareyGraph::default();
        assert!(measure_zero_test(&f, &WalkSpec::sl2_uniform(0), &x, 10, 10, 2).is_err());
    }

    #[test]
    fn farey_directions() {
        let f = FareyGraph::default();
        let spec = WalkSpec::sl2_uniform(4);
        let em = harmonic_estimate(&f, &spec, 30, 2_000, 2).unwrap();
        assert_eq!(em.total + em.skipped, 2_000);
        assert!(f.pullback(&Sl2::identity(), &FareyCylinder::roots()[0]).is_err());
        let e = joint_endpoints(&f, &spec, 30, 500, 2).unwrap();
        assert!(e.eligible_fraction > 0.5);
    }
}
