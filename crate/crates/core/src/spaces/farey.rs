//! The Farey graph: vertices are reduced fractions p/q together with
//! ∞ = 1/0, and p/q ~ r/s exactly when |ps − qr| = 1. SL(2,ℤ) acts by
//! linear fractional maps.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::group::GroupElement;
use crate::hyp::{Geodesic, HyperbolicSpace, Rational};

/// Calibrated slimness of Farey triangles: `delta_estimate` at radius 6 over
/// 10⁴ triangles in the default window.
pub const FAREY_DELTA_BASELINE: i64 = 1;

/// Largest height of the default vertex window.
pub const DEFAULT_HEIGHT: u64 = 40;

const MAX_HEIGHT: u64 = 400;
const MAX_RADIUS: u64 = 16;
/// Deepest Stern–Brocot cylinder we will build.
pub const MAX_CYLINDER_DEPTH: usize = 64;

/// A vertex p/q in lowest terms with q ≥ 0; ∞ is stored as 1/0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FareyVertex {
    p: BigInt,
    q: BigInt,
}

impl FareyVertex {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(LabError::rejected("0/0 is not a Farey vertex"));
        }
        if !p.gcd(&q).is_one() {
            return Err(LabError::rejected(format!("{p}/{q} is not in lowest terms")));
        }
        Ok(Self::canonical(p, q))
    }

    /// Normalises the sign of a coprime pair.
    pub(crate) fn canonical(p: BigInt, q: BigInt) -> Self {
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            FareyVertex { p: -p, q: -q }
        } else {
            FareyVertex { p, q }
        }
    }

    pub fn infinity() -> Self {
        FareyVertex {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn integer(n: i64) -> Self {
        FareyVertex {
            p: n.into(),
            q: BigInt::one(),
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    /// max(|p|, q)
    pub fn height(&self) -> BigInt {
        self.p.abs().max(self.q.clone())
    }

    pub fn is_adjacent(&self, other: &FareyVertex) -> bool {
        (&self.p * &other.q - &self.q * &other.p).abs().is_one()
    }

    fn small(&self) -> Option<(i128, i128)> {
        Some((small_int(&self.p)?, small_int(&self.q)?))
    }
}

fn small_int(v: &BigInt) -> Option<i128> {
    // keeps every intermediate product of the distance ladder inside i128
    if v.bits() <= 28 {
        v.to_i128()
    } else {
        None
    }
}

/// Order by value on ℝ ∪ {∞}, with ∞ largest.
impl Ord for FareyVertex {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.p * &other.q).cmp(&(&other.p * &self.q)).then_with(|| {
            // both infinite, or equal values
            Ordering::Equal
        })
    }
}

impl PartialOrd for FareyVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FareyVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl fmt::Debug for FareyVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FareyVertex {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Self::infinity());
        }
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| LabError::rejected(format!("bad vertex `{s}`")))?;
        let q: BigInt = q.parse().map_err(|_| LabError::rejected(format!("bad vertex `{s}`")))?;
        Self::new(p, q)
    }
}

/// A 2×2 integer matrix of determinant 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sl2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Sl2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = Sl2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if !(&m.a * &m.d - &m.b * &m.c).is_one() {
            return Err(LabError::rejected(format!("{m} does not have determinant 1")));
        }
        Ok(m)
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Sl2 { a, b, c, d }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// x ↦ (ax + b)/(cx + d)
    pub fn act(&self, v: &FareyVertex) -> FareyVertex {
        FareyVertex::canonical(&self.a * &v.p + &self.b * &v.q, &self.c * &v.p + &self.d * &v.q)
    }

    /// A matrix sending `v` to ∞.
    pub fn to_infinity(v: &FareyVertex) -> Sl2 {
        let (r, s) = complement(&v.p, &v.q);
        Sl2::raw(s, -r, -v.q.clone(), v.p.clone())
    }

    /// Stable (attracting) fixed point, for |trace| > 2.
    pub fn attracting_fixed_point(&self) -> Option<QuadraticIrrational> {
        self.fixed_point(true)
    }

    /// Unstable (repelling) fixed point, for |trace| > 2.
    pub fn repelling_fixed_point(&self) -> Option<QuadraticIrrational> {
        self.fixed_point(false)
    }

    fn fixed_point(&self, attracting: bool) -> Option<QuadraticIrrational> {
        // projectively M and −M agree; normalise to positive trace
        let m = if self.trace().is_negative() {
            Sl2::raw(-self.a.clone(), -self.b.clone(), -self.c.clone(), -self.d.clone())
        } else {
            self.clone()
        };
        let t = m.trace();
        if t <= BigInt::from(2) {
            return None;
        }
        // eigenvalue (t ± √(t²−4))/2 has eigenvector x = (a − d ± √Δ)/(2c)
        let disc = &t * &t - BigInt::from(4);
        let sign = if attracting { BigInt::one() } else { -BigInt::one() };
        let (mut p, mut q, mut r) = (&m.a - &m.d, sign, BigInt::from(2) * &m.c);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        Some(QuadraticIrrational { p, q, r, disc })
    }
}

/// (r, s) with p·s − q·r = 1 for coprime p, q.
fn complement(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let e = p.extended_gcd(q);
    let (mut s, mut y) = (e.x, e.y);
    if e.gcd.is_negative() {
        s = -s;
        y = -y;
    }
    debug_assert!((p * &s + q * &y).is_one());
    (-y, s)
}

impl GroupElement for Sl2 {
    fn identity() -> Self {
        Sl2::raw(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    fn mul(&self, o: &Self) -> Self {
        Sl2::raw(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    fn inverse(&self) -> Self {
        Sl2::raw(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Sl2 {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !matches!(c, '[' | ']' | ' ')).collect();
        let parts: Vec<&str> = cleaned.split(',').collect();
        if parts.len() != 4 {
            return Err(LabError::rejected(format!("expected [[a,b],[c,d]], got `{s}`")));
        }
        let mut v = Vec::with_capacity(4);
        for part in parts {
            v.push(
                part.parse::<BigInt>()
                    .map_err(|_| LabError::rejected(format!("bad matrix entry `{part}`")))?,
            );
        }
        let d = v.pop().unwrap();
        let c = v.pop().unwrap();
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        Sl2::new(a, b, c, d)
    }
}

/// The real number (p + q√disc)/r with r > 0 and disc not a square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub disc: BigInt,
}

impl QuadraticIrrational {
    /// Compares with the projective point (u : v), v ≥ 0; (±1 : 0) is ±∞.
    pub fn cmp_point(&self, u: &BigInt, v: &BigInt) -> Ordering {
        if v.is_zero() {
            return if u.is_positive() { Ordering::Less } else { Ordering::Greater };
        }
        // sign of v(p + q√D) − u r = α + β√D
        let alpha = v * &self.p - u * &self.r;
        let beta = v * &self.q;
        sign_of_surd(&alpha, &beta, &self.disc)
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.disc.to_f64().unwrap_or(f64::NAN);
        (self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * d.sqrt())
            / self.r.to_f64().unwrap_or(f64::NAN)
    }
}

fn sign_of_surd(alpha: &BigInt, beta: &BigInt, disc: &BigInt) -> Ordering {
    let sa = alpha.sign();
    let sb = beta.sign();
    use num_bigint::Sign::*;
    match (sa, sb) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) => (alpha * alpha).cmp(&(beta * beta * disc)),
        (Minus, Plus) => (beta * beta * disc).cmp(&(alpha * alpha)),
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√{})/{}", self.p, self.q, self.disc, self.r)
    }
}

trait Int: Integer + Signed + Clone {}
impl<T: Integer + Signed + Clone> Int for T {}

struct LadderNode<T> {
    p: T,
    q: T,
    dist: u64,
    pred: Option<usize>,
}

/// Distance from ∞ to a/b (b > 0) by the Stern–Brocot ladder: every Farey
/// edge (l, r) separates its interval from ∞, so the mediant m satisfies
/// d(m) = min(d(l), d(r)) + 1. Runs of equal turns are jumped once the
/// distances have stabilised. Returns the distance and, on request, a
/// geodesic from ∞ to a/b as (p, q) pairs.
fn ladder<T: Int>(a: &T, b: &T, want_path: bool) -> (u64, Vec<(T, T)>) {
    let one = T::one();
    let zero = T::zero();
    if b.is_zero() {
        return (0, vec![(one, zero)]);
    }
    if b.is_one() {
        return (1, vec![(one, zero), (a.clone(), b.clone())]);
    }
    let fl = a.div_floor(b);
    let mut nodes = vec![
        LadderNode {
            p: fl.clone(),
            q: one.clone(),
            dist: 1,
            pred: None,
        },
        LadderNode {
            p: fl + one.clone(),
            q: one.clone(),
            dist: 1,
            pred: None,
        },
    ];
    let (mut l, mut r) = (0usize, 1usize);
    let push_mediant = |nodes: &mut Vec<LadderNode<T>>, l: usize, r: usize| -> usize {
        let (nl, nr) = (&nodes[l], &nodes[r]);
        let (dist, pred) = if nl.dist <= nr.dist {
            (nl.dist + 1, l)
        } else {
            (nr.dist + 1, r)
        };
        nodes.push(LadderNode {
            p: nl.p.clone() + nr.p.clone(),
            q: nl.q.clone() + nr.q.clone(),
            dist,
            pred: Some(pred),
        });
        nodes.len() - 1
    };
    let end = loop {
        let big_a = a.clone() * nodes[l].q.clone() - b.clone() * nodes[l].p.clone();
        let big_b = b.clone() * nodes[r].p.clone() - a.clone() * nodes[r].q.clone();
        if big_a == big_b {
            break push_mediant(&mut nodes, l, r);
        }
        let right = big_a > big_b;
        let (num, den) = if right { (big_a, big_b) } else { (big_b, big_a) };
        let steps = (num - one.clone()).div_floor(&den);
        let three = one.clone() + one.clone() + one.clone();
        let explicit = if steps < three { steps.clone() } else { three.clone() };
        let mut done = zero.clone();
        while done < explicit {
            let m = push_mediant(&mut nodes, l, r);
            if right {
                l = m;
            } else {
                r = m;
            }
            done = done + one.clone();
        }
        let rest = steps - explicit;
        if rest.is_positive() {
            // distances are constant along the remainder of the run
            let (moving, fixed) = if right { (l, r) } else { (r, l) };
            let node = LadderNode {
                p: nodes[moving].p.clone() + rest.clone() * nodes[fixed].p.clone(),
                q: nodes[moving].q.clone() + rest * nodes[fixed].q.clone(),
                dist: nodes[moving].dist,
                pred: nodes[moving].pred,
            };
            nodes.push(node);
            if right {
                l = nodes.len() - 1;
            } else {
                r = nodes.len() - 1;
            }
        }
    };
    let dist = nodes[end].dist;
    if !want_path {
        return (dist, Vec::new());
    }
    let mut path = Vec::with_capacity(dist as usize + 1);
    let mut cur = Some(end);
    while let Some(i) = cur {
        path.push((nodes[i].p.clone(), nodes[i].q.clone()));
        cur = nodes[i].pred;
    }
    path.push((one, zero));
    path.reverse();
    (dist, path)
}

/// Applies the matrix sending (p, q) to ∞ to the point (u, v).
fn reduce<T: Int>(p: &T, q: &T, u: &T, v: &T) -> (T, T, T, T) {
    let e = p.extended_gcd(q);
    let (mut s, mut y) = (e.x, e.y);
    if e.gcd.is_negative() {
        s = -s;
        y = -y;
    }
    let r = -y;
    // M = [[s, −r], [−q, p]]
    let mut a = s.clone() * u.clone() - r.clone() * v.clone();
    let mut b = p.clone() * v.clone() - q.clone() * u.clone();
    if b.is_negative() || (b.is_zero() && a.is_negative()) {
        a = -a;
        b = -b;
    }
    (a, b, r, s)
}

/// Exact Farey distance.
pub fn farey_distance(u: &FareyVertex, v: &FareyVertex) -> u64 {
    if u == v {
        return 0;
    }
    if let (Some((p, q)), Some((x, y))) = (u.small(), v.small()) {
        let (a, b, _, _) = reduce(&p, &q, &x, &y);
        return ladder(&a, &b, false).0;
    }
    let (a, b, _, _) = reduce(&u.p, &u.q, &v.p, &v.q);
    ladder(&a, &b, false).0
}

/// (u, v, ladder distance, BFS distance).
pub type Mismatch = (String, String, u64, u64);

/// Agreement of [`farey_distance`] with breadth-first search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfsGate {
    pub vertices: usize,
    pub pairs: usize,
    pub mismatches: usize,
    /// The first disagreement found.
    pub first_mismatch: Option<Mismatch>,
}

/// Compares [`farey_distance`] with BFS on the subgraph induced by ∞ and the
/// vertices of `[lo, hi]` with denominator ≤ `max_den`. The edges (lo, ∞)
/// and (hi, ∞) cut the region off from the rest of the graph and geodesics
/// inside a unit interval run through Stern–Brocot ancestors, so induced
/// distances equal true distances.
pub fn bfs_gate(lo: i64, hi: i64, max_den: i64) -> Result<BfsGate> {
    if lo >= hi || !(1..=200).contains(&max_den) {
        return Err(LabError::rejected("BFS gate needs lo < hi and 1 ≤ max_den ≤ 200"));
    }
    let mut verts = vec![(1i64, 0i64)];
    for q in 1..=max_den {
        for p in lo * q..=hi * q {
            if p.gcd(&q) == 1 {
                verts.push((p, q));
            }
        }
    }
    let n = verts.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (p, q) = verts[i];
            (0..n).filter(|&j| (p * verts[j].1 - q * verts[j].0).abs() == 1).collect()
        })
        .collect();
    let vs: Vec<FareyVertex> = verts.iter().map(|&(p, q)| FareyVertex::canonical(p.into(), q.into())).collect();
    let rows: Vec<(usize, Option<Mismatch>)> = (0..n)
        .into_par_iter()
        .map(|src| {
            let mut dist = vec![u64::MAX; n];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == u64::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            let mut bad = 0;
            let mut first = None;
            for (j, &d) in dist.iter().enumerate() {
                let ladder = farey_distance(&vs[src], &vs[j]);
                if ladder != d {
                    bad += 1;
                    first.get_or_insert_with(|| (vs[src].to_string(), vs[j].to_string(), ladder, d));
                }
            }
            (bad, first)
        })
        .collect();
    Ok(BfsGate {
        vertices: n,
        pairs: n * n,
        mismatches: rows.iter().map(|r| r.0).sum(),
        first_mismatch: rows.into_iter().find_map(|r| r.1),
    })
}

/// A geodesic from `u` to `v` read off the distance ladder.
pub fn farey_geodesic(u: &FareyVertex, v: &FareyVertex) -> Vec<FareyVertex> {
    if u == v {
        return vec![u.clone()];
    }
    let (a, b, r, s) = reduce(&u.p, &u.q, &v.p, &v.q);
    let (_, path) = ladder(&a, &b, true);
    // M⁻¹ = [[p, r], [q, s]]
    path.into_iter()
        .map(|(x, y)| FareyVertex::canonical(&u.p * &x + &r * &y, &u.q * &x + &s * &y))
        .collect()
}

/// Farey graph restricted, for enumeration purposes, to vertices of height
/// at most `height`. Distances and geodesics are computed in the full graph.
pub struct FareyGraph {
    height: u64,
    delta: Rational,
    window: Vec<FareyVertex>,
    balls: Mutex<HashMap<u64, Arc<Vec<FareyVertex>>>>,
}

impl FareyGraph {
    pub fn new(height: u64, delta: Rational) -> Result<Self> {
        if height == 0 || height > MAX_HEIGHT {
            return Err(LabError::rejected(format!("window height must lie in 1..={MAX_HEIGHT}")));
        }
        if delta < Rational::from_integer(0) {
            return Err(LabError::rejected("δ must be non-negative"));
        }
        Ok(FareyGraph {
            height,
            delta,
            window: window_vertices(height),
            balls: Mutex::new(HashMap::new()),
        })
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    /// All vertices of height ≤ `height`, in increasing order, ∞ last.
    pub fn window(&self) -> &[FareyVertex] {
        &self.window
    }

    fn ball_around_base(&self, radius: u64) -> Result<Arc<Vec<FareyVertex>>> {
        let mut cache = self.balls.lock().expect("ball cache poisoned");
        if let Some(b) = cache.get(&radius) {
            return Ok(Arc::clone(b));
        }
        let ball = Arc::new(self.ball(&self.basepoint(), radius)?);
        cache.insert(radius, Arc::clone(&ball));
        Ok(ball)
    }
}

impl Default for FareyGraph {
    fn default() -> Self {
        FareyGraph::new(DEFAULT_HEIGHT, Rational::from_integer(FAREY_DELTA_BASELINE))
            .expect("default window is valid")
    }
}

fn window_vertices(height: u64) -> Vec<FareyVertex> {
    let h = height as i64;
    let mut out = Vec::new();
    for q in 1..=h {
        for p in -h..=h {
            if p.gcd(&q) == 1 {
                out.push(FareyVertex {
                    p: p.into(),
                    q: q.into(),
                });
            }
        }
    }
    out.push(FareyVertex::infinity());
    out.sort();
    out
}

impl HyperbolicSpace for FareyGraph {
    type Point = FareyVertex;
    type Element = Sl2;

    fn name(&self) -> &'static str {
        "farey"
    }

    fn delta(&self) -> Rational {
        self.delta
    }

    fn basepoint(&self) -> FareyVertex {
        FareyVertex::integer(0)
    }

    fn distance(&self, a: &FareyVertex, b: &FareyVertex) -> u64 {
        farey_distance(a, b)
    }

    fn geodesic(&self, a: &FareyVertex, b: &FareyVertex) -> Result<Geodesic<FareyVertex>> {
        Ok(Geodesic::from_points_unchecked(farey_geodesic(a, b)))
    }

    fn act(&self, g: &Sl2, p: &FareyVertex) -> FareyVertex {
        g.act(p)
    }

    fn ball(&self, center: &FareyVertex, radius: u64) -> Result<Vec<FareyVertex>> {
        if radius > MAX_RADIUS {
            return Err(LabError::rejected(format!(
                "radius {radius} exceeds the enumeration bound {MAX_RADIUS}"
            )));
        }
        Ok(self
            .window
            .iter()
            .filter(|v| farey_distance(center, v) <= radius)
            .cloned()
            .collect())
    }

    fn random_point(&self, rng: &mut ChaCha8Rng, radius: u64) -> Result<FareyVertex> {
        let ball = self.ball_around_base(radius)?;
        Ok(ball[rng.gen_range(0..ball.len())].clone())
    }
}

/// A Stern–Brocot cylinder: the open Farey interval between two adjacent
/// vertices, named by its coding. The first symbol is `+` for (0, ∞) and `-`
/// for (−∞, 0); each further `L`/`R` picks the left or right half at the
/// mediant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FareyCylinder {
    code: String,
    /// Endpoints as projective pairs; (−1, 0) stands for −∞.
    left: (BigInt, BigInt),
    right: (BigInt, BigInt),
}

impl FareyCylinder {
    pub fn roots() -> [FareyCylinder; 2] {
        let (z, o) = (BigInt::zero(), BigInt::one());
        [
            FareyCylinder {
                code: "-".into(),
                left: (-o.clone(), z.clone()),
                right: (z.clone(), o.clone()),
            },
            FareyCylinder {
                code: "+".into(),
                left: (z.clone(), o.clone()),
                right: (o, z),
            },
        ]
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn depth(&self) -> usize {
        self.code.chars().count()
    }

    pub fn left(&self) -> FareyVertex {
        FareyVertex::canonical(self.left.0.clone(), self.left.1.clone())
    }

    pub fn right(&self) -> FareyVertex {
        FareyVertex::canonical(self.right.0.clone(), self.right.1.clone())
    }

    pub fn mediant(&self) -> FareyVertex {
        FareyVertex::canonical(&self.left.0 + &self.right.0, &self.left.1 + &self.right.1)
    }

    pub fn children(&self) -> [FareyCylinder; 2] {
        let m = (&self.left.0 + &self.right.0, &self.left.1 + &self.right.1);
        [
            FareyCylinder {
                code: format!("{}L", self.code),
                left: self.left.clone(),
                right: m.clone(),
            },
            FareyCylinder {
                code: format!("{}R", self.code),
                left: m,
                right: self.right.clone(),
            },
        ]
    }

    pub fn is_prefix_of(&self, other: &FareyCylinder) -> bool {
        other.code.starts_with(&self.code)
    }

    /// Whether a vertex lies strictly inside the interval.
    pub fn contains_vertex(&self, v: &FareyVertex) -> bool {
        if v.is_infinity() {
            return false;
        }
        let after_left = if self.left.1.is_zero() {
            true
        } else {
            &v.p * &self.left.1 > &self.left.0 * &v.q
        };
        let before_right = if self.right.1.is_zero() {
            true
        } else {
            &v.p * &self.right.1 < &self.right.0 * &v.q
        };
        after_left && before_right
    }

    fn contains_surd(&self, x: &QuadraticIrrational) -> bool {
        let after_left = if self.left.1.is_zero() {
            true
        } else {
            x.cmp_point(&self.left.0, &self.left.1) == Ordering::Greater
        };
        after_left && x.cmp_point(&self.right.0, &self.right.1) == Ordering::Less
    }
}

impl fmt::Display for FareyCylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl fmt::Debug for FareyCylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.code, self.left(), self.right())
    }
}

/// All cylinders of the given depth, left to right.
pub fn farey_cylinders(depth: usize) -> Result<Vec<FareyCylinder>> {
    if depth == 0 || depth > 20 {
        return Err(LabError::rejected("full Farey cylinder enumeration needs depth in 1..=20"));
    }
    let mut level: Vec<FareyCylinder> = FareyCylinder::roots().to_vec();
    for _ in 1..depth {
        level = level.iter().flat_map(|c| c.children()).collect();
    }
    Ok(level)
}

/// The depth-`depth` cylinder containing an irrational boundary point.
pub fn cylinder_of_surd(x: &QuadraticIrrational, depth: usize) -> Result<FareyCylinder> {
    if depth == 0 || depth > MAX_CYLINDER_DEPTH {
        return Err(LabError::rejected(format!("cylinder depth must lie in 1..={MAX_CYLINDER_DEPTH}")));
    }
    let [neg, pos] = FareyCylinder::roots();
    let mut c = if pos.contains_surd(x) { pos } else { neg };
    for _ in 1..depth {
        let [l, r] = c.children();
        c = if l.contains_surd(x) { l } else { r };
    }
    Ok(c)
}

/// The depth-`depth` cylinder containing a vertex. A vertex that is an
/// endpoint of the chosen interval is assigned to the right-hand half, and
/// ∞ to the positive root.
pub fn cylinder_of_vertex(v: &FareyVertex, depth: usize) -> Result<FareyCylinder> {
    if depth == 0 || depth > MAX_CYLINDER_DEPTH {
        return Err(LabError::rejected(format!("cylinder depth must lie in 1..={MAX_CYLINDER_DEPTH}")));
    }
    let [neg, pos] = FareyCylinder::roots();
    let mut c = if v.is_infinity() || !v.p.is_negative() { pos } else { neg };
    for _ in 1..depth {
        let m = c.mediant();
        let [l, r] = c.children();
        c = if v < &m { l } else { r };
    }
    Ok(c)
}

/// Decides whether every boundary point of `cyl` lies in the closure of
/// H(x, y). The edge between the cylinder's endpoints separates its interior
/// from x and y unless one of them lies inside, in which case the answer is
/// `None`; otherwise the comparison of distances at the two gates is exact
/// (`Some(false)` means the cylinder is disjoint from the closure).
pub fn farey_shadow_decision(x: &FareyVertex, y: &FareyVertex, cyl: &FareyCylinder) -> Option<bool> {
    if cyl.contains_vertex(x) || cyl.contains_vertex(y) {
        return None;
    }
    let (l, r) = (cyl.left(), cyl.right());
    let gap = |g: &FareyVertex| farey_distance(g, y) as i64 - farey_distance(g, x) as i64;
    let (a, b) = (gap(&l), gap(&r));
    if a <= 0 && b <= 0 {
        Some(true)
    } else if a >= 1 && b >= 1 {
        Some(false)
    } else {
        None
    }
}
