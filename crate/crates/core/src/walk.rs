//! Random walks driven by finitely supported measures: sampling, exact
//! convolution powers, reflection, drift and halfspace statistics.

use std::collections::HashMap;
use std::fmt::{self, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::group::GroupElement;
use crate::halfspace::Halfspace;
use crate::hyp::{HyperbolicSpace, Rational};
use crate::rng::sample_stream;
use crate::spaces::farey::Sl2;
use crate::spaces::genus2::MappingClass;
use crate::spaces::tree::{FreeTree, Word};
use crate::stats::{linear_fit, summarize, LinearFit, Summary};

/// Largest exact convolution power computed by default.
pub const DEFAULT_CONVOLUTION_BOUND: usize = 12;

/// Evidence that the support of μ generates a non-elementary group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NonElementary {
    /// Two independent hyperbolic elements in the generated group.
    Witness(String, String),
    /// User-supplied measure; not checked.
    Unverified,
}

/// A finitely supported probability measure μ on a group.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkSpec<G> {
    pub backend: String,
    steps: Vec<(G, Rational)>,
    pub seed: u64,
    pub non_elementary: NonElementary,
    denominator: i64,
    cumulative: Vec<i64>,
}

impl<G: GroupElement> WalkSpec<G> {
    pub fn new(backend: impl Into<String>, steps: Vec<(G, Rational)>, seed: u64) -> Result<Self> {
        if steps.is_empty() {
            return Err(LabError::rejected("empty generator list"));
        }
        if let Some((g, w)) = steps.iter().find(|(_, w)| *w <= Rational::from_integer(0)) {
            return Err(LabError::rejected(format!("weight {w} of {g:?} is not positive")));
        }
        let total: Rational = steps.iter().map(|(_, w)| *w).sum();
        if total != Rational::from_integer(1) {
            return Err(LabError::rejected(format!("weights sum to {total}, not 1")));
        }
        let denominator = steps.iter().fold(1i64, |acc, (_, w)| acc.lcm(w.denom()));
        let mut acc = 0;
        let cumulative = steps
            .iter()
            .map(|(_, w)| {
                acc += w.numer() * (denominator / w.denom());
                acc
            })
            .collect();
        Ok(WalkSpec {
            backend: backend.into(),
            steps,
            seed,
            non_elementary: NonElementary::Unverified,
            denominator,
            cumulative,
        })
    }

    pub fn with_witness(mut self, g: impl Into<String>, h: impl Into<String>) -> Self {
        self.non_elementary = NonElementary::Witness(g.into(), h.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn steps(&self) -> &[(G, Rational)] {
        &self.steps
    }

    /// μ̃(g) = μ(g⁻¹).
    pub fn reflect(&self) -> Self {
        let steps = self.steps.iter().map(|(g, w)| (g.inverse(), *w)).collect();
        let mut out = WalkSpec::new(self.backend.clone(), steps, self.seed).expect("weights unchanged");
        out.non_elementary = self.non_elementary.clone();
        out
    }

    /// Draws one increment.
    pub fn step(&self, rng: &mut ChaCha8Rng) -> &G {
        let u = rng.gen_range(0..self.denominator);
        let i = self.cumulative.partition_point(|&c| c <= u);
        &self.steps[i].0
    }

    /// Runs the walk of sample `index` for `n` steps, calling `visit(k, w_k)`
    /// after each step.
    pub fn walk(&self, index: u64, n: usize, mut visit: impl FnMut(usize, &G)) -> G {
        let mut rng = sample_stream(self.seed, index);
        let mut w = G::identity();
        for k in 1..=n {
            w.mul_assign(self.step(&mut rng));
            visit(k, &w);
        }
        w
    }

    pub fn position(&self, index: u64, n: usize) -> G {
        self.walk(index, n, |_, _| {})
    }
}

impl WalkSpec<Word> {
    /// Uniform measure on a, A, b, B.
    pub fn f2_uniform(seed: u64) -> Self {
        uniform("f2", ["a", "A", "b", "B"].map(|s| s.parse().unwrap()).to_vec(), seed).with_witness("a", "b")
    }

    /// {a: ½, b: ¼, B: ¼}.
    pub fn f2_asymmetric(seed: u64) -> Self {
        let steps = vec![
            ("a".parse().unwrap(), Rational::new(1, 2)),
            ("b".parse().unwrap(), Rational::new(1, 4)),
            ("B".parse().unwrap(), Rational::new(1, 4)),
        ];
        WalkSpec::new("f2", steps, seed).unwrap().with_witness("a", "bab")
    }

    /// The deterministic walk {a: 1}.
    pub fn f2_ray(seed: u64) -> Self {
        WalkSpec::new("f2", vec![("a".parse().unwrap(), Rational::from_integer(1))], seed).unwrap()
    }
}

impl WalkSpec<Sl2> {
    /// Uniform on T^{±1}, U^{±1} with T = [[1,1],[0,1]], U = [[1,0],[1,1]].
    pub fn sl2_uniform(seed: u64) -> Self {
        let t = Sl2::new(1, 1, 0, 1).unwrap();
        let u = Sl2::new(1, 0, 1, 1).unwrap();
        uniform("farey", vec![t.clone(), t.inverse(), u.clone(), u.inverse()], seed)
            .with_witness("[[2,1],[1,1]]", "[[1,1],[1,2]]")
    }
}

impl WalkSpec<MappingClass> {
    /// Uniform on the five chain twists and their inverses.
    pub fn humphries_uniform(seed: u64) -> Self {
        let gens = (1..=5).flat_map(|i| [i, -i]).map(|l| MappingClass::new([l]).unwrap()).collect();
        uniform("genus2", gens, seed).with_witness("1 -2 3 -4 5", "5 -4 3 -2 1")
    }

    /// Uniform on twists about the meridians c₁, c₃, c₅ and their inverses.
    pub fn meridian_twists(seed: u64) -> Self {
        let gens = [1, 3, 5].into_iter().flat_map(|i| [i, -i]).map(|l| MappingClass::new([l]).unwrap()).collect();
        uniform("genus2", gens, seed)
    }
}

fn uniform<G: GroupElement>(backend: &str, gens: Vec<G>, seed: u64) -> WalkSpec<G> {
    let w = Rational::new(1, gens.len() as i64);
    WalkSpec::new(backend, gens.into_iter().map(|g| (g, w)).collect(), seed).unwrap()
}

impl<G: GroupElement + Display> Display for WalkSpec<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|(g, w)| format!("{g}:{w}")).collect();
        write!(f, "{}{{{}}}", self.backend, parts.join(", "))
    }
}

/// A sample path w₀ = 1, w_k = w_{k−1}·a_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePath<G> {
    pub increments: Vec<G>,
    pub positions: Vec<G>,
}

impl<G: GroupElement> SamplePath<G> {
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn end(&self) -> &G {
        self.positions.last().expect("w₀ is always present")
    }
}

pub fn sample_path<G: GroupElement>(spec: &WalkSpec<G>, n: usize) -> SamplePath<G> {
    sample_path_indexed(spec, n, 0)
}

pub fn sample_path_indexed<G: GroupElement>(spec: &WalkSpec<G>, n: usize, index: u64) -> SamplePath<G> {
    let mut rng = sample_stream(spec.seed, index);
    let mut increments = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n + 1);
    positions.push(G::identity());
    for _ in 0..n {
        let a = spec.step(&mut rng).clone();
        positions.push(positions.last().unwrap().mul(&a));
        increments.push(a);
    }
    SamplePath { increments, positions }
}

/// μ⁽ⁿ⁾ with masses kept as integer counts over a common denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution<G: GroupElement> {
    pub n: usize,
    denominator: u128,
    counts: HashMap<G, u128>,
}

impl<G: GroupElement> ExactDistribution<G> {
    pub fn point_mass() -> Self {
        ExactDistribution {
            n: 0,
            denominator: 1,
            counts: HashMap::from([(G::identity(), 1)]),
        }
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn support(&self) -> impl Iterator<Item = &G> {
        self.counts.keys()
    }

    pub fn prob(&self, g: &G) -> BigRational {
        self.ratio(self.counts.get(g).copied().unwrap_or(0))
    }

    pub fn total(&self) -> BigRational {
        self.ratio(self.counts.values().sum())
    }

    /// μ⁽ⁿ⁾ of the set of elements satisfying `pred`.
    pub fn mass_where(&self, pred: impl Fn(&G) -> bool + Sync) -> BigRational
    where
        G: Sync,
    {
        let c: u128 = self.counts.par_iter().filter(|(g, _)| pred(g)).map(|(_, c)| *c).sum();
        self.ratio(c)
    }

    fn ratio(&self, c: u128) -> BigRational {
        BigRational::new(BigInt::from(c), BigInt::from(self.denominator))
    }

    /// The convolution self * other: the law of g·h with g, h independent.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let denominator = self
            .denominator
            .checked_mul(other.denominator)
            .ok_or_else(|| LabError::rejected("denominator overflow"))?;
        let mut counts = HashMap::new();
        for (g, a) in &self.counts {
            for (h, b) in &other.counts {
                *counts.entry(g.mul(h)).or_insert(0) += a * b;
            }
        }
        Ok(ExactDistribution {
            n: self.n + other.n,
            denominator,
            counts,
        })
    }
}

pub fn convolution_exact<G: GroupElement>(spec: &WalkSpec<G>, n: usize) -> Result<ExactDistribution<G>> {
    convolution_exact_bounded(spec, n, DEFAULT_CONVOLUTION_BOUND)
}

pub fn convolution_exact_bounded<G: GroupElement>(
    spec: &WalkSpec<G>,
    n: usize,
    bound: usize,
) -> Result<ExactDistribution<G>> {
    if n > bound {
        return Err(LabError::rejected(format!("exact convolution limited to n ≤ {bound}, asked for {n}")));
    }
    let d = spec.denominator as u128;
    let weights: Vec<(G, u128)> = spec
        .steps
        .iter()
        .map(|(g, w)| (g.clone(), (w.numer() * (spec.denominator / w.denom())) as u128))
        .collect();
    let mut dist = ExactDistribution::<G>::point_mass();
    for _ in 0..n {
        let denominator = dist
            .denominator
            .checked_mul(d)
            .ok_or_else(|| LabError::rejected("denominator overflow"))?;
        let mut counts = HashMap::with_capacity(dist.counts.len() * 3);
        for (g, c) in &dist.counts {
            for (s, w) in &weights {
                *counts.entry(g.mul(s)).or_insert(0) += c * w;
            }
        }
        dist = ExactDistribution {
            n: dist.n + 1,
            denominator,
            counts,
        };
    }
    Ok(dist)
}

/// Statistics of d(1, w_n)/n over independent samples.
pub fn drift_estimate<S: HyperbolicSpace>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    n: usize,
    samples: u64,
) -> Result<Summary> {
    if n == 0 || samples < 2 {
        return Err(LabError::rejected("drift needs n ≥ 1 and at least two samples"));
    }
    let one = space.basepoint();
    let rates: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let w = spec.position(i, n);
            space.distance(&one, &space.act(&w, &one)) as f64 / n as f64
        })
        .collect();
    summarize(&rates)
}

/// Empirical P(w_{2n} ∈ H(1, w_n)) and P(w_{2n}⁻¹ ∈ H(1, w_{2n}⁻¹w_n)).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HitProbability {
    pub n: usize,
    pub samples: u64,
    pub forward: f64,
    pub reflected: f64,
}

pub fn halfspace_hit_prob<S: HyperbolicSpace>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    n: usize,
    samples: u64,
) -> Result<HitProbability> {
    if samples == 0 {
        return Err(LabError::rejected("no samples"));
    }
    let one = space.basepoint();
    let (fwd, refl) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut mid = S::Element::identity();
            let end = spec.walk(i, 2 * n, |k, w| {
                if k == n {
                    mid = w.clone();
                }
            });
            let orbit = |g: &S::Element| space.act(g, &one);
            let forward = Halfspace::new(one.clone(), orbit(&mid)).contains(space, &orbit(&end));
            let back = end.inverse();
            let reflected = Halfspace::new(one.clone(), orbit(&back.mul(&mid))).contains(space, &orbit(&back));
            (forward as u64, reflected as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(HitProbability {
        n,
        samples,
        forward: fwd as f64 / samples as f64,
        reflected: refl as f64 / samples as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub r: u64,
    pub anchor: String,
    #[serde(serialize_with = "ser_ratio")]
    pub mass: BigRational,
    pub mass_f64: f64,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// μ⁽ⁿ⁾(H(1, x_r)) against r = d(1, x_r), with a fit of log mass on r.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayTable {
    pub n: usize,
    pub rows: Vec<DecayRow>,
    pub fit: Option<LinearFit>,
    pub strictly_decreasing: bool,
}

impl DecayTable {
    pub fn slope_negative(&self) -> bool {
        self.fit.as_ref().is_some_and(|f| f.slope < 0.0)
    }
}

pub fn mu_n_halfspace_decay<S: HyperbolicSpace>(
    space: &S,
    dist: &ExactDistribution<S::Element>,
    anchors: &[S::Point],
) -> Result<DecayTable> {
    let one = space.basepoint();
    let rows = anchors
        .iter()
        .map(|x| {
            let h = Halfspace::new(one.clone(), x.clone());
            let mass = dist.mass_where(|g| h.contains(space, &space.act(g, &one)));
            Ok(DecayRow {
                r: space.distance(&one, x),
                anchor: format!("{x:?}"),
                mass_f64: ratio_to_f64(&mass),
                mass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    decay_table(dist.n, rows)
}

/// Monte Carlo version of [`mu_n_halfspace_decay`].
pub fn mu_n_halfspace_decay_sampled<S: HyperbolicSpace>(
    space: &S,
    spec: &WalkSpec<S::Element>,
    n: usize,
    anchors: &[S::Point],
    samples: u64,
) -> Result<DecayTable> {
    let one = space.basepoint();
    let ends: Vec<S::Point> = (0..samples)
        .into_par_iter()
        .map(|i| space.act(&spec.position(i, n), &one))
        .collect();
    let rows = anchors
        .iter()
        .map(|x| {
            let h = Halfspace::new(one.clone(), x.clone());
            let hits = ends.par_iter().filter(|z| h.contains(space, z)).count();
            let mass = BigRational::new(BigInt::from(hits), BigInt::from(samples.max(1)));
            DecayRow {
                r: space.distance(&one, x),
                anchor: format!("{x:?}"),
                mass_f64: ratio_to_f64(&mass),
                mass,
            }
        })
        .collect();
    decay_table(n, rows)
}

fn decay_table(n: usize, rows: Vec<DecayRow>) -> Result<DecayTable> {
    let positive: Vec<&DecayRow> = rows.iter().filter(|r| r.mass_f64 > 0.0).collect();
    let fit = if positive.len() >= 2 {
        let xs: Vec<f64> = positive.iter().map(|r| r.r as f64).collect();
        let ys: Vec<f64> = positive.iter().map(|r| r.mass_f64.ln()).collect();
        linear_fit(&xs, &ys).ok()
    } else {
        None
    };
    let strictly_decreasing = rows.windows(2).all(|w| w[1].mass < w[0].mass);
    Ok(DecayTable {
        n,
        rows,
        fit,
        strictly_decreasing,
    })
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact drift of the uniform walk on the free group of the given rank:
/// the distance-from-origin chain steps up with probability (2r−1)/2r away
/// from the origin, so the speed is (r−1)/r.
pub fn free_group_drift(rank: u8) -> Rational {
    Rational::new(rank as i64 - 1, rank as i64)
}

/// Speed of a tree walk read off its distance chain: the expected change
/// of |w| under one step, which must be the same from every nonempty word
/// of length up to `max_len` for the chain to be homogeneous. Returns `None`
/// when it is not.
pub fn distance_chain_speed(space: &FreeTree, spec: &WalkSpec<Word>, max_len: usize) -> Option<Rational> {
    let mut speed = None;
    for len in 1..=max_len {
        for w in space.sphere(len) {
            let mut e = Rational::from_integer(0);
            for (s, p) in spec.steps() {
                e += *p * Rational::from_integer(w.mul(s).len() as i64 - len as i64);
            }
            match speed {
                None => speed = Some(e),
                Some(v) if v != e => return None,
                _ => {}
            }
        }
    }
    speed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::tree::FreeTree;
    use num_traits::{One, Zero};

    fn br(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn spec_validation() {
        let a: Word = "a".parse().unwrap();
        assert!(WalkSpec::<Word>::new("f2", vec![], 0).is_err());
        assert!(WalkSpec::new("f2", vec![(a.clone(), Rational::new(1, 2))], 0).is_err());
        assert!(WalkSpec::new("f2", vec![(a.clone(), Rational::from_integer(2)), (a, Rational::from_integer(-1))], 0).is_err());
        assert_eq!(WalkSpec::f2_uniform(0).non_elementary, NonElementary::Witness("a".into(), "b".into()));
    }

    #[test]
    fn reflection() {
        let u = WalkSpec::f2_uniform(1);
        let r = u.reflect();
        let mut got: Vec<String> = r.steps().iter().map(|(g, _)| g.to_string()).collect();
        got.sort();
        assert_eq!(got, ["A", "B", "a", "b"]);
        assert_eq!(WalkSpec::f2_ray(0).reflect().to_string(), "f2{A:1}");
        assert_eq!(WalkSpec::f2_asymmetric(0).reflect().to_string(), "f2{A:1/2, B:1/4, b:1/4}");
        assert_eq!(WalkSpec::f2_asymmetric(3).reflect().reflect(), WalkSpec::f2_asymmetric(3));
    }

    #[test]
    fn paths_are_deterministic() {
        let spec = WalkSpec::f2_uniform(42);
        let p = sample_path(&spec, 0);
        assert_eq!(p.positions, vec![Word::empty()]);
        assert_eq!(sample_path(&spec, 50), sample_path(&spec, 50));
        let q = sample_path(&spec, 50);
        for k in 1..=50 {
            assert_eq!(q.positions[k], q.positions[k - 1].mul(&q.increments[k - 1]));
        }
        assert_eq!(*q.end(), spec.position(0, 50));
        assert_ne!(sample_path_indexed(&spec, 50, 1), q);
    }

    #[test]
    fn small_convolutions() {
        let spec = WalkSpec::f2_uniform(0);
        let d0 = convolution_exact(&spec, 0).unwrap();
        assert_eq!(d0.prob(&Word::empty()), BigRational::one());
        let d1 = convolution_exact(&spec, 1).unwrap();
        for g in ["a", "A", "b", "B"] {
            assert_eq!(d1.prob(&g.parse().unwrap()), br(1, 4));
        }
        let d2 = convolution_exact(&spec, 2).unwrap();
        assert_eq!(d2.prob(&Word::empty()), br(1, 4));
        assert_eq!(d2.total(), BigRational::one());
        assert!(convolution_exact(&spec, 13).is_err());
    }

    #[test]
    fn chapman_kolmogorov() {
        let spec = WalkSpec::f2_asymmetric(0);
        for (m, n) in [(1, 2), (3, 4), (2, 6)] {
            let lhs = convolution_exact(&spec, m + n).unwrap();
            let rhs = convolution_exact(&spec, m).unwrap().convolve(&convolution_exact(&spec, n).unwrap()).unwrap();
            assert_eq!(lhs.support_size(), rhs.support_size());
            for g in lhs.support() {
                assert_eq!(lhs.prob(g), rhs.prob(g));
            }
        }
    }

    #[test]
    fn empirical_frequency_matches_exact() {
        let spec = WalkSpec::f2_uniform(7);
        let n = 6;
        let exact = convolution_exact(&spec, n).unwrap();
        let p = ratio_to_f64(&exact.mass_where(|g| g.len() <= 2));
        let samples = 20_000u64;
        let hits = (0..samples).filter(|&i| spec.position(i, n).len() <= 2).count();
        let sigma = crate::stats::binomial_sigma(p, samples);
        assert!((hits as f64 / samples as f64 - p).abs() <= 4.0 * sigma);
    }

    #[test]
    fn drift_of_simple_walks() {
        let t = FreeTree::new(2).unwrap();
        let ray = drift_estimate(&t, &WalkSpec::f2_ray(0), 17, 10).unwrap();
        assert_eq!(ray.mean, 1.0);
        let one = drift_estimate(&t, &WalkSpec::f2_uniform(0), 1, 10).unwrap();
        assert_eq!(one.mean, 1.0);
        let u = drift_estimate(&t, &WalkSpec::f2_uniform(3), 400, 500).unwrap();
        assert!((u.mean - 0.5).abs() < 0.02);
        assert_eq!(free_group_drift(2), Rational::new(1, 2));
        assert!(drift_estimate(&t, &WalkSpec::f2_uniform(3), 0, 500).is_err());
    }

    #[test]
    fn drift_is_symmetric_under_swapping_generators() {
        let t = FreeTree::new(2).unwrap();
        let gens = |order: [&str; 4]| {
            let steps = order.iter().map(|s| (s.parse().unwrap(), Rational::new(1, 4))).collect();
            WalkSpec::new("f2", steps, 5).unwrap()
        };
        let x = drift_estimate(&t, &gens(["a", "A", "b", "B"]), 50, 200).unwrap();
        let y = drift_estimate(&t, &gens(["b", "B", "a", "A"]), 50, 200).unwrap();
        assert_eq!(x.mean, y.mean);
    }

    #[test]
    fn hitting_probabilities() {
        let t = FreeTree::new(2).unwrap();
        let ray = halfspace_hit_prob(&t, &WalkSpec::f2_ray(0), 9, 5).unwrap();
        assert_eq!((ray.forward, ray.reflected), (1.0, 1.0));
        let zero = halfspace_hit_prob(&t, &WalkSpec::f2_uniform(0), 0, 5).unwrap();
        assert_eq!(zero.forward, 1.0);
        let u = halfspace_hit_prob(&t, &WalkSpec::f2_uniform(1), 50, 2000).unwrap();
        assert!(u.forward > 0.9 && u.reflected > 0.9);
    }

    #[test]
    fn decay_tables() {
        let t = FreeTree::new(2).unwrap();
        let ray = convolution_exact(&WalkSpec::f2_ray(0), 8).unwrap();
        let anchors: Vec<Word> = (1..=4).map(|k| "a".repeat(k).parse().unwrap()).collect();
        let table = mu_n_halfspace_decay(&t, &ray, &anchors).unwrap();
        assert!(table.rows.iter().all(|r| r.mass == BigRational::one()));
        let empty = mu_n_halfspace_decay(&t, &ray, &[]).unwrap();
        assert!(empty.rows.is_empty() && empty.fit.is_none());
        let u = convolution_exact(&WalkSpec::f2_uniform(0), 8).unwrap();
        let table = mu_n_halfspace_decay(&t, &u, &anchors).unwrap();
        assert!(table.slope_negative());
        assert!(table.rows.iter().all(|r| r.mass > BigRational::zero()));
    }

    #[test]
    fn distance_chain_speeds() {
        let t = FreeTree::new(2).unwrap();
        assert_eq!(distance_chain_speed(&t, &WalkSpec::f2_uniform(0), 4), Some(free_group_drift(2)));
        assert_eq!(distance_chain_speed(&t, &WalkSpec::f2_ray(0), 4), None);
    }
}
