//! Halfspaces H(x, y), their shadows on boundary cylinders, nesting and
//! projection bounds, and the neighbourhoods N_r(T) of boundary sets.

use std::collections::BTreeSet;
use std::fmt::{Debug, Display};
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::hyp::{gromov_product, nearest_point_projection, ConstantTable, HyperbolicSpace, Rational};
use crate::rng::sample_stream;
use crate::spaces::farey::{self, FareyCylinder, FareyGraph};
use crate::group::GroupElement;
use crate::spaces::tree::{FreeTree, Word};

/// Points at least as close to `target` as to `anchor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace<P> {
    pub anchor: P,
    pub target: P,
}

impl<P: Clone + Eq> Halfspace<P> {
    pub fn new(anchor: P, target: P) -> Self {
        Halfspace { anchor, target }
    }

    /// H(1, x).
    pub fn from_base<S: HyperbolicSpace<Point = P>>(space: &S, x: P) -> Self {
        Halfspace::new(space.basepoint(), x)
    }

    pub fn contains<S: HyperbolicSpace<Point = P>>(&self, space: &S, z: &P) -> bool {
        space.distance(z, &self.target) <= space.distance(z, &self.anchor)
    }

    /// Strict membership: closer to `target` than to `anchor`.
    pub fn strictly_contains<S: HyperbolicSpace<Point = P>>(&self, space: &S, z: &P) -> bool {
        space.distance(z, &self.target) < space.distance(z, &self.anchor)
    }

    /// g·H(x, y) = H(gx, gy).
    pub fn translate<S: HyperbolicSpace<Point = P>>(&self, space: &S, g: &S::Element) -> Self {
        Halfspace::new(space.act(g, &self.anchor), space.act(g, &self.target))
    }

    pub fn opposite(&self) -> Self {
        Halfspace::new(self.target.clone(), self.anchor.clone())
    }
}

/// How a boundary cylinder sits relative to the closure of a halfspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ShadowStatus {
    Inside,
    Outside,
    /// Meets both the closure and its complement.
    Mixed,
    /// Not decidable at this resolution.
    Undecided,
}

/// Finite-resolution model of the Gromov boundary by cylinders.
pub trait BoundaryProxy: HyperbolicSpace {
    type Cylinder: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync;

    fn max_cylinder_depth(&self) -> usize;
    fn cylinders(&self, depth: usize) -> Result<Vec<Self::Cylinder>>;
    fn children(&self, c: &Self::Cylinder) -> Vec<Self::Cylinder>;
    fn cylinder_depth(&self, c: &Self::Cylinder) -> usize;
    /// `inner ⊆ outer` as boundary sets.
    fn is_sub_cylinder(&self, outer: &Self::Cylinder, inner: &Self::Cylinder) -> bool;
    /// Status of the cylinder against the closure of `h`.
    fn decide(&self, h: &Halfspace<Self::Point>, c: &Self::Cylinder) -> ShadowStatus;
    /// A vertex inside the cylinder's cone, standing in for its boundary points.
    fn representative(&self, c: &Self::Cylinder) -> Self::Point;
}

impl BoundaryProxy for FreeTree {
    type Cylinder = Word;

    fn max_cylinder_depth(&self) -> usize {
        12
    }

    fn cylinders(&self, depth: usize) -> Result<Vec<Word>> {
        check_depth(depth, self.max_cylinder_depth())?;
        Ok(self.sphere(depth))
    }

    fn children(&self, c: &Word) -> Vec<Word> {
        let last = c.letters().last().copied();
        self.alphabet()
            .into_iter()
            .filter(|&l| Some(-l) != last)
            .map(|l| c.mul(&Word::letter(l)))
            .collect()
    }

    fn cylinder_depth(&self, c: &Word) -> usize {
        c.len()
    }

    fn is_sub_cylinder(&self, outer: &Word, inner: &Word) -> bool {
        inner.starts_with(outer)
    }

    fn decide(&self, h: &Halfspace<Word>, c: &Word) -> ShadowStatus {
        // along a ray ξ, d(ξₙ, y) − d(ξₙ, x) settles at |y| − |x| − 2(ξ|y) + 2(ξ|x)
        let settled = |p: &Word| p.len() <= c.len() || c.common_prefix_len(p) < c.len();
        if settled(&h.anchor) && settled(&h.target) {
            let gap = h.target.len() as i64 - h.anchor.len() as i64 - 2 * c.common_prefix_len(&h.target) as i64
                + 2 * c.common_prefix_len(&h.anchor) as i64;
            return if gap <= 0 { ShadowStatus::Inside } else { ShadowStatus::Outside };
        }
        let mut seen = BTreeSet::new();
        for child in self.children(c) {
            match self.decide(h, &child) {
                ShadowStatus::Inside => seen.insert(0),
                ShadowStatus::Outside => seen.insert(1),
                _ => seen.insert(2),
            };
        }
        match (seen.contains(&0), seen.contains(&1), seen.contains(&2)) {
            (true, false, false) => ShadowStatus::Inside,
            (false, true, false) => ShadowStatus::Outside,
            _ => ShadowStatus::Mixed,
        }
    }

    fn representative(&self, c: &Word) -> Word {
        c.clone()
    }
}

impl BoundaryProxy for FareyGraph {
    type Cylinder = FareyCylinder;

    fn max_cylinder_depth(&self) -> usize {
        16
    }

    fn cylinders(&self, depth: usize) -> Result<Vec<FareyCylinder>> {
        check_depth(depth, self.max_cylinder_depth())?;
        farey::farey_cylinders(depth)
    }

    fn children(&self, c: &FareyCylinder) -> Vec<FareyCylinder> {
        c.children().to_vec()
    }

    fn cylinder_depth(&self, c: &FareyCylinder) -> usize {
        c.depth()
    }

    fn is_sub_cylinder(&self, outer: &FareyCylinder, inner: &FareyCylinder) -> bool {
        outer.is_prefix_of(inner)
    }

    fn decide(&self, h: &Halfspace<farey::FareyVertex>, c: &FareyCylinder) -> ShadowStatus {
        match farey::farey_shadow_decision(&h.anchor, &h.target, c) {
            Some(true) => ShadowStatus::Inside,
            Some(false) => ShadowStatus::Outside,
            None => ShadowStatus::Undecided,
        }
    }

    fn representative(&self, c: &FareyCylinder) -> farey::FareyVertex {
        c.mediant()
    }
}

fn check_depth(depth: usize, max: usize) -> Result<()> {
    if depth == 0 || depth > max {
        return Err(LabError::rejected(format!("cylinder depth {depth} outside 1..={max}")));
    }
    Ok(())
}

/// Outcome of checking a coarse inequality over a finite set of instances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    /// Worst observed value (a maximum for upper bounds, a minimum for lower).
    pub observed: Option<Rational>,
    pub bound: Rational,
    pub holds: bool,
    /// Instances that met the hypotheses and were checked.
    pub checked: usize,
}

impl BoundCheck {
    fn upper(observed: Option<u64>, bound: Rational, checked: usize) -> Self {
        let observed = observed.map(|o| Rational::from_integer(o as i64));
        BoundCheck {
            holds: observed.is_none_or(|o| o <= bound),
            observed,
            bound,
            checked,
        }
    }
}

/// How far the projection of `z` to `g` lies from H(x, y): the distance from
/// the projection to the nearest point of `g` inside the halfspace, which
/// bounds the distance to the halfspace from above.
pub fn projection_excess<S: HyperbolicSpace>(
    space: &S,
    h: &Halfspace<S::Point>,
    g: &[S::Point],
    z: &S::Point,
) -> Result<u64> {
    let (i, _) = nearest_point_projection(space, z, g)?;
    let p = &g[i];
    g.iter()
        .filter(|q| h.contains(space, q))
        .map(|q| space.distance(p, q))
        .min()
        .ok_or_else(|| LabError::rejected("geodesic misses the halfspace"))
}

/// Projection of H(x, y) to [x, y] lies within 3δ of H(x, y), checked over
/// every member of `points` that lies in the halfspace.
pub fn projection_bound_over<S: HyperbolicSpace>(
    space: &S,
    h: &Halfspace<S::Point>,
    points: &[S::Point],
) -> Result<BoundCheck> {
    let g = space.geodesic(&h.anchor, &h.target)?;
    let bound = Rational::from_integer(3) * space.delta();
    let inside: Vec<&S::Point> = points.iter().filter(|z| h.contains(space, z)).collect();
    let worst = inside
        .par_iter()
        .map(|z| projection_excess(space, h, g.points(), z))
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .max();
    Ok(BoundCheck::upper(worst, bound, inside.len()))
}

/// Sampled version of [`projection_bound_over`]: points are drawn from the
/// ball of `radius` and kept when they lie in `h`.
pub fn projection_bound_check<S: HyperbolicSpace>(
    space: &S,
    h: &Halfspace<S::Point>,
    samples: u64,
    radius: u64,
    seed: u64,
) -> Result<BoundCheck> {
    if h.anchor == h.target {
        return Err(LabError::rejected("degenerate halfspace"));
    }
    let points = (0..samples)
        .map(|i| space.random_point(&mut sample_stream(seed, i), radius))
        .collect::<Result<Vec<_>>>()?;
    projection_bound_over(space, h, &points)
}

/// Projection of the closure of H(1, x) to [1, x] lies within K5 of H(1, x).
/// The closure is represented by the points of `points` inside the
/// halfspace together with representatives of the cylinders of depth
/// `depth` that lie inside its shadow.
pub fn closure_projection_check<S: BoundaryProxy>(
    space: &S,
    x: &S::Point,
    points: &[S::Point],
    depth: usize,
    table: &ConstantTable,
) -> Result<BoundCheck> {
    let h = Halfspace::from_base(space, x.clone());
    let g = space.geodesic(&h.anchor, &h.target)?;
    let mut reps: Vec<S::Point> = points.iter().filter(|z| h.contains(space, z)).cloned().collect();
    let sh = shadow(space, &h, depth)?;
    reps.extend(sh.inside.iter().map(|c| space.representative(c)));
    let worst = reps
        .par_iter()
        .map(|z| projection_excess(space, &h, g.points(), z))
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .max();
    Ok(BoundCheck::upper(worst, table.k5, reps.len()))
}

/// A nested pair H(1, x) ⊂ H(1, y) with y on [1, x] and d(y, x) = k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedPair<P> {
    pub x: P,
    pub y: P,
    pub k: u64,
}

pub fn make_nested<S: HyperbolicSpace>(space: &S, x: &S::Point, k: u64) -> Result<NestedPair<S::Point>> {
    let one = space.basepoint();
    let d = space.distance(&one, x);
    if k == 0 || d <= k {
        return Err(LabError::rejected(format!("nesting depth {k} needs 0 < k < d(1,x) = {d}")));
    }
    let g = space.geodesic(&one, x)?;
    Ok(NestedPair {
        x: x.clone(),
        y: g.points()[(d - k) as usize].clone(),
        k,
    })
}

/// Disjointness of H(1, x) and H(y, 1) over `points`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestingCheck {
    /// Whether the hypothesis k ≥ K6 holds, so that disjointness is claimed.
    pub claimed: bool,
    pub disjoint: bool,
    /// First point found in both halfspaces.
    pub witness: Option<String>,
    pub checked: usize,
}

impl NestingCheck {
    /// Fails only when disjointness is claimed and violated.
    pub fn holds(&self) -> bool {
        !self.claimed || self.disjoint
    }
}

pub fn nested_disjointness<S: HyperbolicSpace>(
    space: &S,
    pair: &NestedPair<S::Point>,
    points: &[S::Point],
    table: &ConstantTable,
) -> NestingCheck {
    let one = space.basepoint();
    let inner = Halfspace::new(one.clone(), pair.x.clone());
    let away = Halfspace::new(pair.y.clone(), one);
    let witness = points
        .par_iter()
        .find_first(|z| inner.contains(space, z) && away.contains(space, z))
        .map(|z| format!("{z:?}"));
    NestingCheck {
        claimed: Rational::from_integer(pair.k as i64) >= table.k6,
        disjoint: witness.is_none(),
        witness,
        checked: points.len(),
    }
}

/// Minimum Gromov product over pairs of points of H(1, x) found in
/// `points`, against the lower bound ½d(1, x) − K7.
pub fn gp_lower_bound_over<S: HyperbolicSpace>(
    space: &S,
    x: &S::Point,
    points: &[S::Point],
    table: &ConstantTable,
) -> Result<BoundCheck> {
    let one = space.basepoint();
    let d = space.distance(&one, x);
    if Rational::from_integer(d as i64) < Rational::from_integer(35) * table.delta || d == 0 {
        return Err(LabError::rejected(format!("d(1,x) = {d} is below 35δ")));
    }
    let h = Halfspace::new(one.clone(), x.clone());
    let inside: Vec<&S::Point> = points.iter().filter(|z| h.contains(space, z)).collect();
    let min = (0..inside.len())
        .into_par_iter()
        .map(|i| {
            (i..inside.len())
                .map(|j| gromov_product(space, inside[i], inside[j], &one))
                .min()
        })
        .flatten()
        .min();
    let bound = Rational::new(d as i64, 2) - table.k7;
    Ok(BoundCheck {
        holds: min.is_none_or(|m| m >= bound),
        observed: min,
        bound,
        checked: inside.len(),
    })
}

/// Sampled version: pairs drawn from the ball of `radius`, kept when both
/// points lie in H(1, x).
pub fn gp_lower_bound_check<S: HyperbolicSpace>(
    space: &S,
    x: &S::Point,
    samples: u64,
    radius: u64,
    seed: u64,
    table: &ConstantTable,
) -> Result<BoundCheck> {
    let points = (0..samples)
        .map(|i| space.random_point(&mut sample_stream(seed, i), radius))
        .collect::<Result<Vec<_>>>()?;
    gp_lower_bound_over(space, x, &points, table)
}

/// The cylinders of a given depth inside the closure of a halfspace, plus
/// those the backend could not decide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shadow<C> {
    pub depth: usize,
    pub inside: Vec<C>,
    pub undecided: Vec<C>,
}

pub fn shadow<S: BoundaryProxy>(space: &S, h: &Halfspace<S::Point>, depth: usize) -> Result<Shadow<S::Cylinder>> {
    if h.anchor == h.target {
        return Err(LabError::rejected("degenerate halfspace"));
    }
    let cyls = space.cylinders(depth)?;
    let status: Vec<ShadowStatus> = cyls.par_iter().map(|c| space.decide(h, c)).collect();
    let mut inside = Vec::new();
    let mut undecided = Vec::new();
    for (c, s) in cyls.into_iter().zip(status) {
        match s {
            ShadowStatus::Inside => inside.push(c),
            ShadowStatus::Undecided => undecided.push(c),
            _ => {}
        }
    }
    Ok(Shadow {
        depth,
        inside,
        undecided,
    })
}

/// Whether the closure of `h` meets the cylinder `c`, refining undecided
/// and mixed cylinders down to `max_depth`. `None` if still undecided.
pub fn shadow_meets<S: BoundaryProxy>(space: &S, h: &Halfspace<S::Point>, c: &S::Cylinder, max_depth: usize) -> Option<bool> {
    match space.decide(h, c) {
        ShadowStatus::Inside | ShadowStatus::Mixed => Some(true),
        ShadowStatus::Outside => Some(false),
        ShadowStatus::Undecided => {
            if space.cylinder_depth(c) >= max_depth {
                return None;
            }
            let mut unknown = false;
            for child in space.children(c) {
                match shadow_meets(space, h, &child, max_depth) {
                    Some(true) => return Some(true),
                    None => unknown = true,
                    Some(false) => {}
                }
            }
            if unknown {
                None
            } else {
                Some(false)
            }
        }
    }
}

/// N_r(T) within a search radius: the anchors x with r ≤ d(1, x) ≤ radius
/// whose halfspace closure meets T.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NrNeighbourhood<P> {
    pub r: u64,
    pub search_radius: u64,
    pub anchors: Vec<P>,
    /// Anchors the backend could not decide; excluded from `anchors`.
    pub undecided: usize,
}

impl<P: Clone + Eq + Hash + Ord + Debug + Send + Sync> NrNeighbourhood<P> {
    /// The points of `points` lying in some H(1, x) of the neighbourhood.
    pub fn point_set<S: HyperbolicSpace<Point = P>>(&self, space: &S, points: &[P]) -> BTreeSet<P> {
        let one = space.basepoint();
        points
            .par_iter()
            .filter(|z| {
                self.anchors
                    .iter()
                    .any(|x| space.distance(z, x) <= space.distance(z, &one))
            })
            .cloned()
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }
}

pub fn nr_neighbourhood<S: BoundaryProxy>(
    space: &S,
    t: &[S::Cylinder],
    r: u64,
    search_radius: u64,
) -> Result<NrNeighbourhood<S::Point>> {
    if r > search_radius {
        return Err(LabError::rejected(format!("r = {r} exceeds the search radius {search_radius}")));
    }
    let one = space.basepoint();
    let max_depth = space.max_cylinder_depth();
    let candidates: Vec<S::Point> = space
        .ball(&one, search_radius)?
        .into_iter()
        .filter(|x| space.distance(&one, x) >= r.max(1))
        .collect();
    let verdicts: Vec<Option<bool>> = candidates
        .par_iter()
        .map(|x| {
            let h = Halfspace::new(one.clone(), x.clone());
            let mut unknown = false;
            for c in t {
                match shadow_meets(space, &h, c, max_depth) {
                    Some(true) => return Some(true),
                    None => unknown = true,
                    Some(false) => {}
                }
            }
            if unknown {
                None
            } else {
                Some(false)
            }
        })
        .collect();
    let mut anchors = Vec::new();
    let mut undecided = 0;
    for (x, v) in candidates.into_iter().zip(verdicts) {
        match v {
            Some(true) => anchors.push(x),
            None => undecided += 1,
            Some(false) => {}
        }
    }
    anchors.sort();
    Ok(NrNeighbourhood {
        r,
        search_radius,
        anchors,
        undecided,
    })
}

/// Cylinders of depth `depth` inside the shadow of some halfspace of the
/// neighbourhood: the finite-resolution boundary trace of N_r(T).
pub fn neighbourhood_shadow<S: BoundaryProxy>(
    space: &S,
    n: &NrNeighbourhood<S::Point>,
    depth: usize,
) -> Result<BTreeSet<S::Cylinder>> {
    let one = space.basepoint();
    let mut out = BTreeSet::new();
    for x in &n.anchors {
        let h = Halfspace::new(one.clone(), x.clone());
        out.extend(shadow(space, &h, depth)?.inside);
    }
    Ok(out)
}

/// The constants A, B, C of the disjoint-pair construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisjointConstants {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl DisjointConstants {
    /// A = K′ + 2K5 + K6 + 66δ, B = L + 3K5 + 24δ, C = K5 + 96δ, with K′ = L.
    pub fn from_table(t: &ConstantTable) -> Self {
        let int = Rational::from_integer;
        DisjointConstants {
            a: t.fellow + int(2) * t.k5 + t.k6 + int(66) * t.delta,
            b: t.fellow + int(3) * t.k5 + int(24) * t.delta,
            c: t.k5 + int(96) * t.delta,
        }
    }
}

/// Two B-nested pairs straddling the projection of 1 to an axis.
#[derive(Clone, Debug)]
pub struct NestedPairConfig<P> {
    pub inner: (P, P),
    pub outer: (P, P),
    pub nesting: u64,
    /// Largest distance from 1 to a geodesic joining the inner halfspaces.
    pub d_p: u64,
    /// Largest projection diameter of the outer complement onto such a geodesic.
    pub r_p: u64,
    pub r_bound: Rational,
    pub outer_disjoint: bool,
    pub checked_points: usize,
    pub checked_paths: usize,
}

impl<P> NestedPairConfig<P> {
    pub fn holds(&self) -> bool {
        self.outer_disjoint && Rational::from_integer(self.r_p as i64) <= self.r_bound
    }
}

/// Builds the outer pair for x₁, x₂ on `axis` and measures D(P), R(P) over
/// the ball of radius `radius`, using geodesics between up to `paths`
/// inner endpoint pairs.
pub fn disjoint_config<S: HyperbolicSpace>(
    space: &S,
    axis: &[S::Point],
    x1: &S::Point,
    x2: &S::Point,
    constants: &DisjointConstants,
    radius: u64,
    paths: usize,
) -> Result<NestedPairConfig<S::Point>> {
    if x1 == x2 {
        return Err(LabError::rejected("x₁ and x₂ coincide"));
    }
    let one = space.basepoint();
    let (pi, d1p) = nearest_point_projection(space, &one, axis)?;
    let i1 = axis.iter().position(|a| a == x1).ok_or_else(|| LabError::rejected("x₁ is not on the axis"))?;
    let i2 = axis.iter().position(|a| a == x2).ok_or_else(|| LabError::rejected("x₂ is not on the axis"))?;
    if !((i1 < pi && pi < i2) || (i2 < pi && pi < i1)) {
        return Err(LabError::rejected("x₁ and x₂ are not separated by the projection of 1"));
    }
    let p = &axis[pi];
    for x in [x1, x2] {
        if Rational::from_integer(space.distance(p, x) as i64) < Rational::from_integer(d1p as i64) + constants.a {
            return Err(LabError::rejected("separation precondition d(p, xᵢ) ≥ d(1, p) + A fails"));
        }
    }
    let b = constants.b.ceil().to_integer().max(0) as u64;
    let outer_point = |x: &S::Point| -> Result<S::Point> {
        if b == 0 {
            Ok(x.clone())
        } else {
            Ok(make_nested(space, x, b)?.y)
        }
    };
    let y1 = outer_point(x1)?;
    let y2 = outer_point(x2)?;
    let points = space.ball(&one, radius)?;
    let (h1, h2) = (Halfspace::new(one.clone(), x1.clone()), Halfspace::new(one.clone(), x2.clone()));
    let (o1, o2) = (Halfspace::new(one.clone(), y1.clone()), Halfspace::new(one.clone(), y2.clone()));
    let outer_disjoint = !points.par_iter().any(|z| o1.contains(space, z) && o2.contains(space, z));
    let in1: Vec<&S::Point> = points.iter().filter(|z| h1.contains(space, z)).collect();
    let in2: Vec<&S::Point> = points.iter().filter(|z| h2.contains(space, z)).collect();
    let complement: Vec<&S::Point> = points
        .iter()
        .filter(|z| !o1.contains(space, z) && !o2.contains(space, z))
        .collect();
    let stride1 = (in1.len() / paths.max(1)).max(1);
    let stride2 = (in2.len() / paths.max(1)).max(1);
    let pairs: Vec<(&S::Point, &S::Point)> = in1
        .iter()
        .step_by(stride1)
        .zip(in2.iter().step_by(stride2))
        .map(|(a, b)| (*a, *b))
        .take(paths.max(1))
        .collect();
    let per_path = pairs
        .par_iter()
        .map(|(a, b)| -> Result<(u64, u64)> {
            let beta = space.geodesic(a, b)?;
            let d = nearest_point_projection(space, &one, beta.points())?.1;
            let mut lo = usize::MAX;
            let mut hi = 0;
            for z in &complement {
                let (i, _) = nearest_point_projection(space, z, beta.points())?;
                lo = lo.min(i);
                hi = hi.max(i);
            }
            let diam = if lo == usize::MAX {
                0
            } else {
                space.distance(&beta.points()[lo], &beta.points()[hi])
            };
            Ok((d, diam))
        })
        .collect::<Result<Vec<_>>>()?;
    let d_p = per_path.iter().map(|x| x.0).max().unwrap_or(0);
    let r_p = per_path.iter().map(|x| x.1).max().unwrap_or(0);
    Ok(NestedPairConfig {
        r_bound: Rational::new(space.distance(x1, x2) as i64, 2) + constants.c,
        inner: (x1.clone(), x2.clone()),
        outer: (y1, y2),
        nesting: b,
        d_p,
        r_p,
        outer_disjoint,
        checked_points: points.len(),
        checked_paths: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::farey::FareyVertex;
    use crate::GroupElement;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn tree_table() -> ConstantTable {
        ConstantTable::new(Rational::from_integer(0), Rational::from_integer(1), Rational::from_integer(0)).unwrap()
    }

    #[test]
    fn membership() {
        let t = FreeTree::new(2).unwrap();
        let h = Halfspace::new(w(""), w("aa"));
        assert!(h.contains(&t, &w("aa")));
        assert!(!h.contains(&t, &w("")));
        // d(ab, aa) = 2 = d(ab, "")
        assert!(h.contains(&t, &w("ab")));
        assert!(!h.strictly_contains(&t, &w("ab")));
        assert!(h.opposite().contains(&t, &w("ab")));
    }

    #[test]
    fn tree_shadows() {
        let t = FreeTree::new(2).unwrap();
        let sh = shadow(&t, &Halfspace::new(w(""), w("ab")), 2).unwrap();
        let names: Vec<String> = sh.inside.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["aa", "ab", "aB"]);
        assert!(sh.undecided.is_empty());
        assert!(shadow(&t, &Halfspace::new(w("a"), w("a")), 2).is_err());
        assert!(shadow(&t, &Halfspace::new(w(""), w("a")), 13).is_err());
        let deep = shadow(&t, &Halfspace::new(w(""), w("abab")), 3).unwrap();
        assert_eq!(deep.inside.len(), 3);
        assert!(deep.inside.iter().all(|c| c.starts_with(&w("ab"))));
    }

    #[test]
    fn farey_shadow_at_depth_three() {
        let f = FareyGraph::default();
        let h = Halfspace::new(FareyVertex::integer(0), FareyVertex::integer(1));
        let sh = shadow(&f, &h, 3).unwrap();
        let codes: Vec<&str> = sh.inside.iter().map(|c| c.code()).collect();
        // rays towards ∞ stay equidistant from 0 and 1
        assert_eq!(codes, ["-LL", "+LR", "+RL", "+RR"]);
        assert!(!sh.undecided.is_empty());
    }

    #[test]
    fn tree_projection_and_gp_bounds() {
        let t = FreeTree::new(2).unwrap();
        let table = tree_table();
        let ball = t.ball(&w(""), 6).unwrap();
        let h = Halfspace::new(w(""), w("aab"));
        let check = projection_bound_over(&t, &h, &ball).unwrap();
        assert!(check.holds);
        assert_eq!(check.observed, Some(Rational::from_integer(0)));
        let gp = gp_lower_bound_over(&t, &w("aaa"), &ball, &table).unwrap();
        assert_eq!(gp.observed, Some(Rational::from_integer(2)));
        assert!(gp.holds);
        let closure = closure_projection_check(&t, &w("aaa"), &ball, 6, &table).unwrap();
        assert!(closure.holds);
    }

    #[test]
    fn nesting_on_the_tree() {
        let t = FreeTree::new(2).unwrap();
        let pair = make_nested(&t, &w("aaaa"), 2).unwrap();
        assert_eq!(pair.y, w("aa"));
        let ball = t.ball(&w(""), 7).unwrap();
        let check = nested_disjointness(&t, &pair, &ball, &tree_table());
        assert!(check.claimed && check.disjoint);
        assert!(make_nested(&t, &w("aaaa"), 4).is_err());
        assert!(make_nested(&t, &w("aaaa"), 0).is_err());
    }

    #[test]
    fn gp_hypothesis_is_enforced() {
        let f = FareyGraph::default();
        let table = ConstantTable::for_space(&f, Rational::from_integer(1), Rational::from_integer(1)).unwrap();
        let x = FareyVertex::new(3, 5).unwrap();
        assert!(gp_lower_bound_over(&f, &x, &[], &table).is_err());
    }

    #[test]
    fn neighbourhoods_on_the_tree() {
        let t = FreeTree::new(2).unwrap();
        assert!(nr_neighbourhood(&t, &[], 1, 3).unwrap().anchors.is_empty());
        let n = nr_neighbourhood(&t, &[w("a")], 2, 3).unwrap();
        assert!(n.anchors.iter().all(|x| x.starts_with(&w("a")) && x.len() >= 2));
        assert_eq!(n.anchors.len(), 3 + 9);
        assert!(nr_neighbourhood(&t, &[w("a")], 4, 3).is_err());
    }

    #[test]
    fn equivariance() {
        let t = FreeTree::new(2).unwrap();
        let h = Halfspace::new(w("b"), w("aB"));
        let g = w("Aba");
        let gh = h.translate(&t, &g);
        for z in t.ball(&w(""), 4).unwrap() {
            assert_eq!(h.contains(&t, &z), gh.contains(&t, &g.mul(&z)));
        }
    }

    #[test]
    fn disjoint_pair_on_the_a_axis() {
        let t = FreeTree::new(2).unwrap();
        let axis: Vec<Word> = (-6..=6)
            .map(|k: i32| Word::from_letters(std::iter::repeat_n(if k < 0 { -1 } else { 1 }, k.unsigned_abs() as usize)).unwrap())
            .collect();
        let consts = DisjointConstants::from_table(&tree_table());
        let cfg = disjoint_config(&t, &axis, &w("aaaa"), &w("AAAA"), &consts, 6, 20).unwrap();
        assert_eq!(cfg.d_p, 0);
        assert!(cfg.outer_disjoint);
        assert!(cfg.holds());
        assert!(disjoint_config(&t, &axis, &w("aaaa"), &w("aaaa"), &consts, 6, 20).is_err());
        assert!(disjoint_config(&t, &axis, &w("aaaa"), &w("aa"), &consts, 6, 20).is_err());
    }
}
