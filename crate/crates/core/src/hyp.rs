//! Pointed δ-hyperbolic spaces with exact distances, and the coarse-geometry
//! toolkit built on them: Gromov products, nearest point projections,
//! projection paths, quasigeodesic checks and a slim-triangle δ estimator.

use std::fmt::Debug;
use std::hash::Hash;

use num_rational::Ratio;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::group::GroupElement;
use crate::rng::sample_stream;

pub type Rational = Ratio<i64>;

/// A pointed geodesic metric space with an isometric group action.
pub trait HyperbolicSpace: Sync {
    type Point: Clone + Eq + Hash + Ord + Debug + Send + Sync;
    type Element: GroupElement;

    fn name(&self) -> &'static str;
    /// Hyperbolicity constant δ used for every bound on this backend.
    fn delta(&self) -> Rational;
    /// The basepoint `1`.
    fn basepoint(&self) -> Self::Point;
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> u64;
    fn geodesic(&self, a: &Self::Point, b: &Self::Point) -> Result<Geodesic<Self::Point>>;
    fn act(&self, g: &Self::Element, p: &Self::Point) -> Self::Point;
    /// Finite enumeration of the points within `radius` of `center`.
    fn ball(&self, center: &Self::Point, radius: u64) -> Result<Vec<Self::Point>>;
    fn random_point(&self, rng: &mut ChaCha8Rng, radius: u64) -> Result<Self::Point>;

    /// `g · 1`.
    fn orbit_point(&self, g: &Self::Element) -> Self::Point {
        self.act(g, &self.basepoint())
    }
}

/// A discrete geodesic: consecutive points at distance one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesic<P> {
    points: Vec<P>,
}

impl<P: Clone> Geodesic<P> {
    /// Wraps points produced by a backend oracle.
    pub(crate) fn from_points_unchecked(points: Vec<P>) -> Self {
        debug_assert!(!points.is_empty());
        Geodesic { points }
    }

    /// Validates unit steps and that the length realises the endpoint distance.
    pub fn from_points<S>(space: &S, points: Vec<P>) -> Result<Self>
    where
        S: HyperbolicSpace<Point = P>,
    {
        if points.is_empty() {
            return Err(LabError::rejected("empty geodesic"));
        }
        for w in points.windows(2) {
            if space.distance(&w[0], &w[1]) != 1 {
                return Err(LabError::rejected("geodesic step of length != 1"));
            }
        }
        let ends = space.distance(&points[0], &points[points.len() - 1]);
        if ends as usize != points.len() - 1 {
            return Err(LabError::rejected("path length exceeds endpoint distance"));
        }
        Ok(Geodesic { points })
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn start(&self) -> &P {
        &self.points[0]
    }

    pub fn end(&self) -> &P {
        &self.points[self.points.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() == 1
    }

    /// The sub-path between two indices, in the given order.
    pub fn segment(&self, i: usize, j: usize) -> Vec<P> {
        if i <= j {
            self.points[i..=j].to_vec()
        } else {
            self.points[j..=i].iter().rev().cloned().collect()
        }
    }

    pub fn reversed(&self) -> Self {
        Geodesic {
            points: self.points.iter().rev().cloned().collect(),
        }
    }
}

/// The coarse constants that appear in the halfspace and isometry bounds,
/// all expressed through δ and two configured inputs: the quasigeodesic
/// constant `k_qg` and the quasigeodesic fellow-travel constant `fellow`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantTable {
    pub delta: Rational,
    pub k3: Rational,
    pub k5: Rational,
    pub k6: Rational,
    pub k7: Rational,
    pub k8: Rational,
    pub k9: Rational,
    pub k10: Rational,
    pub k_qg: Rational,
    pub fellow: Rational,
}

impl ConstantTable {
    pub fn new(delta: Rational, k_qg: Rational, fellow: Rational) -> Result<Self> {
        let zero = Rational::from_integer(0);
        if delta < zero || k_qg < zero || fellow < zero {
            return Err(LabError::rejected("constants must be non-negative"));
        }
        let d = delta;
        let int = Rational::from_integer;
        // a (1, 24δ)-quasigeodesic without repeated points is a (24δ+1)-quasigeodesic
        let k3 = int(24) * d + int(1);
        let k5 = int(18) * d;
        let k6 = int(3) * k5 + d;
        let k7 = int(19) * d;
        // K8 = K6 + 2(K + K5 + 6L + 36δ) with K = 18δ + K5
        let k = int(18) * d + k5;
        let k8 = k6 + int(2) * (k + k5 + int(6) * fellow + int(36) * d);
        let k9 = int(60) * d;
        let k10 = int(30) * fellow + int(48) * d;
        Ok(ConstantTable {
            delta,
            k3,
            k5,
            k6,
            k7,
            k8,
            k9,
            k10,
            k_qg,
            fellow,
        })
    }

    pub fn for_space<S: HyperbolicSpace>(space: &S, k_qg: Rational, fellow: Rational) -> Result<Self> {
        Self::new(space.delta(), k_qg, fellow)
    }
}

/// `(a|b)_base = ½(d(base,a) + d(base,b) − d(a,b))`, exact with denominator 2.
pub fn gromov_product<S: HyperbolicSpace>(
    space: &S,
    a: &S::Point,
    b: &S::Point,
    base: &S::Point,
) -> Rational {
    let s = space.distance(base, a) + space.distance(base, b) - space.distance(a, b);
    Rational::new(s as i64, 2)
}

/// Closest point to `z` on `g`, ties broken by the smallest index.
/// Returns `(index, distance)`.
pub fn nearest_point_projection<S: HyperbolicSpace>(
    space: &S,
    z: &S::Point,
    g: &[S::Point],
) -> Result<(usize, u64)> {
    let mut best: Option<(usize, u64)> = None;
    for (i, p) in g.iter().enumerate() {
        let d = space.distance(z, p);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
            if d == 0 {
                break;
            }
        }
    }
    best.ok_or_else(|| LabError::rejected("projection onto an empty path"))
}

/// Distance from `z` to a finite path.
pub fn distance_to_path<S: HyperbolicSpace>(space: &S, z: &S::Point, path: &[S::Point]) -> Result<u64> {
    nearest_point_projection(space, z, path).map(|(_, d)| d)
}

/// A nearest point projection path `[a,p] ∪ [p,q] ∪ [q,b]`.
#[derive(Clone, Debug)]
pub struct NppPath<P> {
    pub points: Vec<P>,
    pub p_index: usize,
    pub q_index: usize,
    /// `d(a,p) + d(p,q) + d(q,b) − d(a,b)`.
    pub defect: u64,
    /// `Some(defect ≤ 24δ)` when `d(p,q) > 14δ`, `None` otherwise.
    pub bound_holds: Option<bool>,
}

pub fn npp_path<S: HyperbolicSpace>(
    space: &S,
    a: &S::Point,
    b: &S::Point,
    g: &Geodesic<S::Point>,
) -> Result<NppPath<S::Point>> {
    let (pi, _) = nearest_point_projection(space, a, g.points())?;
    let (qi, _) = nearest_point_projection(space, b, g.points())?;
    let p = &g.points()[pi];
    let q = &g.points()[qi];
    let mut points = space.geodesic(a, p)?.points().to_vec();
    points.extend(g.segment(pi, qi).into_iter().skip(1));
    points.extend(space.geodesic(q, b)?.points().iter().skip(1).cloned());
    let length = space.distance(a, p) + space.distance(p, q) + space.distance(q, b);
    let defect = length - space.distance(a, b);
    let delta = space.delta();
    let pq = Rational::from_integer(space.distance(p, q) as i64);
    let bound_holds = (pq > Rational::from_integer(14) * delta)
        .then(|| Rational::from_integer(defect as i64) <= Rational::from_integer(24) * delta);
    Ok(NppPath {
        points,
        p_index: pi,
        q_index: qi,
        defect,
        bound_holds,
    })
}

/// Outcome of a quasigeodesic test; `witness` is the first violating index pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasigeodesicCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

/// Checks `(1/K) d(γ_s, γ_t) ≤ |s − t| ≤ K d(γ_s, γ_t)` for all index pairs.
pub fn is_quasigeodesic<S: HyperbolicSpace>(
    space: &S,
    path: &[S::Point],
    k: Rational,
) -> Result<QuasigeodesicCheck> {
    if path.len() < 2 {
        return Err(LabError::rejected("quasigeodesic check needs at least two points"));
    }
    if k <= Rational::from_integer(0) {
        return Err(LabError::rejected("quasigeodesic constant must be positive"));
    }
    for s in 0..path.len() {
        for t in s + 1..path.len() {
            let d = Rational::from_integer(space.distance(&path[s], &path[t]) as i64);
            let gap = Rational::from_integer((t - s) as i64);
            if d / k > gap || gap > k * d {
                return Ok(QuasigeodesicCheck {
                    holds: false,
                    witness: Some((s, t)),
                });
            }
        }
    }
    Ok(QuasigeodesicCheck {
        holds: true,
        witness: None,
    })
}

/// Slimness of one geodesic triangle: the largest distance from a point on
/// one side to the union of the other two.
pub fn triangle_slimness<S: HyperbolicSpace>(
    space: &S,
    a: &S::Point,
    b: &S::Point,
    c: &S::Point,
) -> Result<u64> {
    let sides = [space.geodesic(a, b)?, space.geodesic(b, c)?, space.geodesic(c, a)?];
    let mut worst = 0;
    for i in 0..3 {
        let others: Vec<S::Point> = sides[(i + 1) % 3]
            .points()
            .iter()
            .chain(sides[(i + 2) % 3].points())
            .cloned()
            .collect();
        for z in sides[i].points() {
            worst = worst.max(distance_to_path(space, z, &others)?);
        }
    }
    Ok(worst)
}

/// Running maximum of triangle slimness over `samples` random triangles in
/// the ball of the given radius. Triangle `i` draws from stream `(seed, i)`,
/// so the estimate is non-decreasing in the sample count.
pub fn delta_estimate<S: HyperbolicSpace>(
    space: &S,
    samples: u64,
    radius: u64,
    seed: u64,
) -> Result<Rational> {
    let mut worst = 0;
    for i in 0..samples {
        let mut rng = sample_stream(seed, i);
        let a = space.random_point(&mut rng, radius)?;
        let b = space.random_point(&mut rng, radius)?;
        let c = space.random_point(&mut rng, radius)?;
        worst = worst.max(triangle_slimness(space, &a, &b, &c)?);
    }
    Ok(Rational::from_integer(worst as i64))
}
