//! Classification, translation lengths and fixed points of group elements.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::group::GroupElement;
use crate::halfspace::{BoundaryProxy, Halfspace, ShadowStatus};
use crate::hyp::{distance_to_path, is_quasigeodesic, ConstantTable, HyperbolicSpace, Rational};
use crate::spaces::farey::{cylinder_of_surd, farey_distance, FareyCylinder, FareyGraph, FareyVertex, Sl2, MAX_CYLINDER_DEPTH};
use crate::spaces::genus2::MappingClass;
use crate::spaces::tree::{FreeTree, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Trivial,
    /// Bounded orbits, or a parabolic (τ = 0 with unbounded orbits).
    Bounded { parabolic: bool },
    Hyperbolic,
}

/// Backend-specific isometry data.
pub trait IsometryBackend: BoundaryProxy {
    fn classify(&self, g: &Self::Element) -> Classification;
    fn translation_length_exact(&self, g: &Self::Element) -> Result<Rational>;
    /// λ⁺ (attracting) or λ⁻, as text; `None` unless hyperbolic.
    fn fixed_point_descriptor(&self, g: &Self::Element, attracting: bool) -> Option<String>;
    /// Status of the fixed point against the closure of `h`, refined as far
    /// as the backend allows.
    fn fixed_point_status(&self, g: &Self::Element, attracting: bool, h: &Halfspace<Self::Point>) -> Option<ShadowStatus>;
}

impl IsometryBackend for FreeTree {
    fn classify(&self, g: &Word) -> Classification {
        if g.is_empty() {
            Classification::Trivial
        } else {
            Classification::Hyperbolic
        }
    }

    fn translation_length_exact(&self, g: &Word) -> Result<Rational> {
        Ok(Rational::from_integer(g.cyclic_length() as i64))
    }

    fn fixed_point_descriptor(&self, g: &Word, attracting: bool) -> Option<String> {
        if g.is_empty() {
            return None;
        }
        let (u, c) = g.cyclic_decomposition();
        let c = if attracting { c } else { c.inverse() };
        let u = if u.is_empty() { String::new() } else { u.to_string() };
        Some(format!("{u}({c})^∞"))
    }

    fn fixed_point_status(&self, g: &Word, attracting: bool, h: &Halfspace<Word>) -> Option<ShadowStatus> {
        if g.is_empty() {
            return None;
        }
        let (u, c) = g.cyclic_decomposition();
        let c = if attracting { c } else { c.inverse() };
        // a prefix longer than both anchors settles the decision
        let depth = h.anchor.len().max(h.target.len()) + 1;
        let mut ray = u;
        while ray.len() < depth {
            ray = ray.mul(&c);
        }
        Some(self.decide(h, &ray.prefix(depth)))
    }
}

impl IsometryBackend for FareyGraph {
    fn classify(&self, g: &Sl2) -> Classification {
        let t = g.trace().abs();
        let two = BigInt::from(2);
        if is_central(g) {
            Classification::Trivial
        } else if t > two {
            Classification::Hyperbolic
        } else {
            Classification::Bounded { parabolic: t == two }
        }
    }

    fn translation_length_exact(&self, g: &Sl2) -> Result<Rational> {
        if self.classify(g) != Classification::Hyperbolic {
            return Ok(Rational::from_integer(0));
        }
        let chain = pivot_chain(g)?;
        let min = chain.iter().map(|v| farey_distance(v, &g.act(v))).min().unwrap_or(0);
        Ok(Rational::from_integer(min as i64))
    }

    fn fixed_point_descriptor(&self, g: &Sl2, attracting: bool) -> Option<String> {
        let x = if attracting { g.attracting_fixed_point() } else { g.repelling_fixed_point() };
        x.map(|x| x.to_string())
    }

    fn fixed_point_status(&self, g: &Sl2, attracting: bool, h: &Halfspace<FareyVertex>) -> Option<ShadowStatus> {
        let x = if attracting { g.attracting_fixed_point() } else { g.repelling_fixed_point() }?;
        let mut last = ShadowStatus::Undecided;
        for depth in 1..=MAX_CYLINDER_DEPTH {
            let c = cylinder_of_surd(&x, depth).ok()?;
            last = self.decide(h, &c);
            if matches!(last, ShadowStatus::Inside | ShadowStatus::Outside) {
                break;
            }
        }
        Some(last)
    }
}

/// The pivot vertices of the Farey ladder of a hyperbolic matrix over one
/// fundamental domain: endpoints of the Stern–Brocot edges separating the
/// repelling from the attracting fixed point, from the first such vertex v
/// up to g·v.
pub fn pivot_chain(g: &Sl2) -> Result<Vec<FareyVertex>> {
    let (Some(plus), Some(minus)) = (g.attracting_fixed_point(), g.repelling_fixed_point()) else {
        return Err(LabError::rejected(format!("{g} is not hyperbolic")));
    };
    let mut chain: Vec<FareyVertex> = Vec::new();
    for depth in 1..=MAX_CYLINDER_DEPTH {
        let c: FareyCylinder = cylinder_of_surd(&plus, depth)?;
        if c.is_prefix_of(&cylinder_of_surd(&minus, depth)?) {
            continue;
        }
        for v in [c.left(), c.right()] {
            if !chain.contains(&v) {
                chain.push(v);
            }
        }
        let image = g.act(&chain[0]);
        if let Some(i) = chain.iter().position(|v| *v == image) {
            chain.truncate(i + 1);
            return Ok(chain);
        }
    }
    Err(LabError::rejected(format!(
        "the axis period of {g} exceeds the cylinder resolution {MAX_CYLINDER_DEPTH}"
    )))
}

/// d(1, gⁿ·1)/n at n = 2ᵏ ≤ n_max, ending with n_max itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslationLimit {
    pub n_max: u64,
    pub estimate: Rational,
    pub sequence: Vec<(u64, Rational)>,
}

pub fn translation_length_limit<S: HyperbolicSpace>(space: &S, g: &S::Element, n_max: u64) -> Result<TranslationLimit> {
    if n_max == 0 {
        return Err(LabError::rejected("n_max must be at least 1"));
    }
    let one = space.basepoint();
    let at = |n: u64| {
        let p = space.act(&g.pow(n as i64), &one);
        Rational::new(space.distance(&one, &p) as i64, n as i64)
    };
    let mut sequence: Vec<(u64, Rational)> = std::iter::successors(Some(1u64), |n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .map(|n| (n, at(n)))
        .collect();
    if sequence.last().map(|s| s.0) != Some(n_max) {
        sequence.push((n_max, at(n_max)));
    }
    Ok(TranslationLimit {
        n_max,
        estimate: sequence.last().unwrap().1,
        sequence,
    })
}

/// The path through gⁱ·x for −n ≤ i ≤ n joined by geodesics.
pub fn orbit_axis<S: HyperbolicSpace>(space: &S, g: &S::Element, x: &S::Point, n: i64) -> Result<Vec<S::Point>> {
    let mut out: Vec<S::Point> = Vec::new();
    let mut prev = space.act(&g.pow(-n), x);
    out.push(prev.clone());
    for i in (-n + 1)..=n {
        let next = space.act(&g.pow(i), x);
        out.extend(space.geodesic(&prev, &next)?.points().iter().skip(1).cloned());
        prev = next;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NppEstimate {
    /// d(x, g·x) − 2·d(x, axis).
    pub estimate: i64,
    pub tau: Rational,
    /// |estimate − τ| ≤ K10, checked when τ ≥ K10.
    pub within_k10: Option<bool>,
}

pub fn translation_estimate_npp<S: IsometryBackend>(
    space: &S,
    g: &S::Element,
    x: &S::Point,
    axis: &[S::Point],
    table: &ConstantTable,
) -> Result<NppEstimate> {
    if space.classify(g) != Classification::Hyperbolic {
        return Err(LabError::rejected(format!("{g:?} is not hyperbolic")));
    }
    let qg = is_quasigeodesic(space, axis, table.k_qg)?;
    if !qg.holds {
        return Err(LabError::rejected(format!("axis is not a {}-quasigeodesic", table.k_qg)));
    }
    let estimate = space.distance(x, &space.act(g, x)) as i64 - 2 * distance_to_path(space, x, axis)? as i64;
    let tau = space.translation_length_exact(g)?;
    let within_k10 =
        (tau >= table.k10).then(|| (Rational::from_integer(estimate) - tau).abs() <= table.k10);
    Ok(NppEstimate { estimate, tau, within_k10 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedPointCheck {
    Holds,
    Fails,
    Inconclusive(String),
}

/// λ⁺(g) ∈ H̄(x, g·x) and λ⁻(g) ∈ H̄(x, g⁻¹·x), once τ_g ≥ K9.
pub fn fixed_point_halfspace_check<S: IsometryBackend>(
    space: &S,
    g: &S::Element,
    x: &S::Point,
    table: &ConstantTable,
) -> Result<FixedPointCheck> {
    let tau = space.translation_length_exact(g)?;
    if tau.is_zero() || tau < table.k9 {
        return Ok(FixedPointCheck::Inconclusive(format!("τ = {tau} is below K9 = {}", table.k9)));
    }
    let forward = Halfspace::new(x.clone(), space.act(g, x));
    let backward = Halfspace::new(x.clone(), space.act(&g.inverse(), x));
    let plus = space.fixed_point_status(g, true, &forward);
    let minus = space.fixed_point_status(g, false, &backward);
    Ok(match (plus, minus) {
        (Some(ShadowStatus::Inside), Some(ShadowStatus::Inside)) => FixedPointCheck::Holds,
        (Some(ShadowStatus::Outside), _) | (_, Some(ShadowStatus::Outside)) => FixedPointCheck::Fails,
        other => FixedPointCheck::Inconclusive(format!("undecided at cylinder resolution: {other:?}")),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsometryReport {
    pub element: String,
    pub classification: Classification,
    pub tau_exact: Option<Rational>,
    pub tau_limit: TranslationLimit,
    pub attracting: Option<String>,
    pub repelling: Option<String>,
}

pub fn isometry_report<S: IsometryBackend>(space: &S, g: &S::Element, n_max: u64) -> Result<IsometryReport> {
    Ok(IsometryReport {
        element: format!("{g:?}"),
        classification: space.classify(g),
        tau_exact: Some(space.translation_length_exact(g)?),
        tau_limit: translation_length_limit(space, g, n_max)?,
        attracting: space.fixed_point_descriptor(g, true),
        repelling: space.fixed_point_descriptor(g, false),
    })
}

/// Mapping classes have no isometry classification here.
pub fn classify_mapping_class(_g: &MappingClass) -> Result<Classification> {
    Err(LabError::unsupported("genus2", "isometry classification"))
}

/// Whether the matrix is ±identity.
pub fn is_central(g: &Sl2) -> bool {
    let [a, b, c, d] = g.entries();
    b.is_zero() && c.is_zero() && a == d && a.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::tree::FreeTree;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Sl2 {
        s.parse().unwrap()
    }

    fn minus_one() -> Sl2 {
        Sl2::new(-1, 0, 0, -1).unwrap()
    }

    fn tree_table() -> ConstantTable {
        ConstantTable::new(Rational::from_integer(0), Rational::from_integer(1), Rational::from_integer(0)).unwrap()
    }

    #[test]
    fn tree_translation_lengths() {
        let t = FreeTree::new(2).unwrap();
        let r = |n| Rational::from_integer(n);
        assert_eq!(t.translation_length_exact(&w("abAB")).unwrap(), r(4));
        assert_eq!(t.translation_length_exact(&w("aBA")).unwrap(), r(1));
        assert_eq!(translation_length_limit(&t, &w(""), 8).unwrap().estimate, r(0));
        assert_eq!(translation_length_limit(&t, &w("a"), 32).unwrap().estimate, r(1));
        let l = translation_length_limit(&t, &w("aB"), 32).unwrap();
        assert_eq!(l.estimate, r(2));
        assert_eq!(l.sequence.len(), 6);
        assert!(translation_length_limit(&t, &w("a"), 0).is_err());
        assert_eq!(translation_length_limit(&t, &w("a"), 5).unwrap().sequence.last().unwrap().0, 5);
    }

    #[test]
    fn tree_tau_is_conjugation_invariant_and_homogeneous() {
        let t = FreeTree::new(2).unwrap();
        let g = w("abbA");
        let tau = t.translation_length_exact(&g).unwrap();
        for h in ["b", "aB", "BBa", "abab"] {
            let h = w(h);
            assert_eq!(t.translation_length_exact(&h.mul(&g).mul(&h.inverse())).unwrap(), tau);
        }
        for k in 1..=8 {
            assert_eq!(t.translation_length_exact(&g.pow(k)).unwrap(), tau * Rational::from_integer(k));
        }
    }

    #[test]
    fn farey_classification() {
        let f = FareyGraph::default();
        assert_eq!(f.classify(&m("[[1,1],[0,1]]")), Classification::Bounded { parabolic: true });
        assert_eq!(f.classify(&m("[[2,1],[1,1]]")), Classification::Hyperbolic);
        assert_eq!(f.classify(&m("[[0,-1],[1,0]]")), Classification::Bounded { parabolic: false });
        assert_eq!(f.classify(&Sl2::identity()), Classification::Trivial);
        assert_eq!(f.classify(&minus_one()), Classification::Trivial);
        assert!(is_central(&minus_one()));
        assert_eq!(FreeTree::new(2).unwrap().classify(&w("")), Classification::Trivial);
        assert_eq!(f.translation_length_exact(&m("[[1,1],[0,1]]")).unwrap(), Rational::from_integer(0));
        assert!(classify_mapping_class(&MappingClass::identity()).is_err());
    }

    #[test]
    fn farey_translation_matches_orbit_growth() {
        let f = FareyGraph::default();
        for s in ["[[2,1],[1,1]]", "[[5,2],[2,1]]", "[[13,5],[5,2]]", "[[2,5],[3,8]]", "[[4,7],[1,2]]"] {
            let g = m(s);
            let tau = f.translation_length_exact(&g).unwrap();
            let chain = pivot_chain(&g).unwrap();
            let v = chain.iter().min_by_key(|v| farey_distance(v, &g.act(v))).unwrap();
            for n in [8i64, 16] {
                let d = farey_distance(v, &g.pow(n).act(v));
                assert_eq!(Rational::from_integer(d as i64), tau * Rational::from_integer(n), "{s}");
            }
            let lim = translation_length_limit(&f, &g, 64).unwrap().estimate;
            assert!((lim - tau).abs() <= Rational::new(2, 64) * Rational::from_integer(4), "{s}");
        }
    }

    #[test]
    fn npp_estimates_on_the_tree() {
        let t = FreeTree::new(2).unwrap();
        let table = tree_table();
        let g = w("aa");
        let axis = orbit_axis(&t, &g, &w(""), 4).unwrap();
        let est = translation_estimate_npp(&t, &g, &w("b"), &axis, &table).unwrap();
        assert_eq!(est.estimate, 2);
        assert_eq!(est.within_k10, Some(true));
        let on = translation_estimate_npp(&t, &g, &w("a"), &axis, &table).unwrap();
        assert_eq!(Rational::from_integer(on.estimate), on.tau);
        assert!(translation_estimate_npp(&t, &w(""), &w("a"), &axis, &table).is_err());
        let bent = vec![w(""), w("a"), w("")];
        assert!(translation_estimate_npp(&t, &g, &w("a"), &bent, &table).is_err());
    }

    #[test]
    fn fixed_points() {
        let t = FreeTree::new(2).unwrap();
        let table = tree_table();
        assert_eq!(t.fixed_point_descriptor(&w("ab"), true).unwrap(), "(ab)^∞");
        assert_eq!(t.fixed_point_descriptor(&w("aBA"), false).unwrap(), "a(b)^∞");
        for g in ["ab", "a", "aBA", "abbAB"] {
            assert_eq!(fixed_point_halfspace_check(&t, &w(g), &w(""), &table).unwrap(), FixedPointCheck::Holds, "{g}");
        }
        let f = FareyGraph::default();
        let ft = ConstantTable::for_space(&f, Rational::from_integer(1), Rational::from_integer(1)).unwrap();
        let g = m("[[2,1],[1,1]]");
        assert_eq!(f.fixed_point_descriptor(&g, true).unwrap(), "(1 + 1√5)/2");
        let h = Halfspace::new(FareyVertex::integer(0), g.act(&FareyVertex::integer(0)));
        assert_eq!(f.fixed_point_status(&g, true, &h), Some(ShadowStatus::Inside));
        // τ = 1 is far below K9 = 60
        assert!(matches!(
            fixed_point_halfspace_check(&f, &g, &FareyVertex::integer(0), &ft).unwrap(),
            FixedPointCheck::Inconclusive(_)
        ));
    }

    #[test]
    fn reports() {
        let t = FreeTree::new(2).unwrap();
        let r = isometry_report(&t, &w("aBA"), 16).unwrap();
        assert_eq!(r.classification, Classification::Hyperbolic);
        assert_eq!(r.tau_exact, Some(Rational::from_integer(1)));
        assert_eq!(r.tau_limit.estimate, Rational::new(18, 16));
    }
}
