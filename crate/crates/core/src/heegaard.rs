//! Disc-set samples for the standard genus-2 handlebody and interval
//! estimates of the splitting distance d(𝒟, w·𝒟).
//!
//! Every disc in a sample is h·mⱼ for a handlebody word h and a meridian
//! mⱼ, so intersections reduce to pants readouts:
//! i(h·mⱼ, g·mₖ) = i(mⱼ, h⁻¹g·mₖ).

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::group::GroupElement;
use crate::spaces::genus2::{enumerate_curves, CurveCoords, Genus2, MappingClass};
use crate::stats::{linear_fit, LinearFit};
use crate::walk::WalkSpec;

/// Default coordinate bound for the disjoint-curve search.
pub const DEFAULT_SEARCH_BOUND: u64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disc {
    /// The disc is `word · m_meridian`.
    pub word: MappingClass,
    /// Pants index 1..=3.
    pub meridian: u8,
    pub coords: CurveCoords,
}

/// A finite set of disc-bounding curves.
#[derive(Clone, Debug)]
pub struct DiscSetSample {
    pub bound: usize,
    pub discs: Vec<Disc>,
    pub provenance: String,
}

impl DiscSetSample {
    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    /// g·D.
    pub fn translate(&self, space: &Genus2, g: &MappingClass) -> DiscSetSample {
        DiscSetSample {
            bound: self.bound,
            discs: self
                .discs
                .iter()
                .map(|d| Disc {
                    word: g.mul(&d.word),
                    meridian: d.meridian,
                    coords: space.apply_word(g, &d.coords),
                })
                .collect(),
            provenance: format!("({g})·{}", self.provenance),
        }
    }
}

/// The meridians and their images under handlebody words of length at most
/// `bound` in the preset generators and their inverses.
pub fn disc_set_sample(space: &Genus2, bound: usize) -> DiscSetSample {
    let mut gens: Vec<MappingClass> = Vec::new();
    for g in &space.preset().handlebody {
        gens.push(g.word.clone());
        gens.push(g.word.inverse());
    }
    let mut words = vec![MappingClass::identity()];
    let mut frontier = words.clone();
    for _ in 0..bound {
        let next: Vec<MappingClass> = frontier.iter().flat_map(|w| gens.iter().map(move |g| w.mul(g))).collect();
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut seen = HashSet::new();
    let mut discs = Vec::new();
    for w in &words {
        for (j, m) in space.meridians().iter().enumerate() {
            let coords = space.apply_word(w, m);
            if seen.insert(coords.clone()) {
                discs.push(Disc {
                    word: w.clone(),
                    meridian: j as u8 + 1,
                    coords,
                });
            }
        }
    }
    DiscSetSample {
        bound,
        discs,
        provenance: format!("handlebody words of length ≤ {bound}"),
    }
}

/// i(a, b) for two discs.
pub fn disc_intersection(space: &Genus2, a: &Disc, b: &Disc) -> BigInt {
    let moved = space.apply_word(&a.word.inverse(), &b.coords);
    space.intersection_with_pants(&moved, a.meridian).expect("meridian index is valid")
}

/// i(x, d) for an arbitrary curve.
pub fn curve_disc_intersection(space: &Genus2, x: &CurveCoords, d: &Disc) -> BigInt {
    disc_intersection(
        space,
        d,
        &Disc {
            word: MappingClass::identity(),
            meridian: 1,
            coords: x.clone(),
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateLevel {
    Exact,
    Verified,
    /// No witness found within the search bound; evidence, not proof.
    SearchBounded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceInterval {
    pub lower: u64,
    pub level: CertificateLevel,
    pub upper: u64,
    pub search_bound: u64,
    /// Smallest cross intersection number.
    #[serde(serialize_with = "ser_bigint")]
    pub min_intersection: BigInt,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl DistanceInterval {
    pub fn is_consistent(&self) -> bool {
        self.lower <= self.upper
    }

    /// log₂ of the smallest cross intersection, 0 when some pair is disjoint.
    pub fn log_min_intersection(&self) -> f64 {
        if self.min_intersection.is_zero() {
            0.0
        } else {
            log2_big(&self.min_intersection)
        }
    }
}

fn log2_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::INFINITY).log2()
    } else {
        let shift = bits - 64;
        ((x >> shift).to_f64().unwrap()).log2() + shift as f64
    }
}

/// ⌈2·log₂ i⌉ + 2 for i ≥ 1.
pub fn log_bound(i: &BigInt) -> u64 {
    // smallest k with 2^k ≥ i², i.e. ⌈log₂ i²⌉
    let sq = i * i;
    let mut k = sq.bits();
    if (BigInt::from(1) << (k - 1)) == sq {
        k -= 1;
    }
    k + 2
}

/// Curves of coordinate size at most the bound, kept with the discs of a
/// fixed sample they miss.
pub struct CurveSearch {
    pub bound: u64,
    candidates: Vec<(CurveCoords, Vec<usize>)>,
}

impl CurveSearch {
    pub fn new(space: &Genus2, d1: &DiscSetSample, bound: u64) -> Result<Self> {
        let curves = enumerate_curves(bound)?;
        let candidates = curves
            .into_par_iter()
            .filter_map(|x| {
                let hits: Vec<usize> = d1
                    .discs
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| curve_disc_intersection(space, &x, d).is_zero())
                    .map(|(i, _)| i)
                    .collect();
                (!hits.is_empty()).then_some((x, hits))
            })
            .collect();
        Ok(CurveSearch { bound, candidates })
    }

    pub fn candidates(&self) -> usize {
        self.candidates.len()
    }

    /// Indices of a disc of the first sample and one of `d2` that both miss
    /// some candidate curve.
    fn witness(&self, space: &Genus2, d2: &DiscSetSample) -> Option<(usize, usize)> {
        self.candidates.iter().find_map(|(x, hits)| {
            d2.discs
                .iter()
                .position(|d| curve_disc_intersection(space, x, d).is_zero())
                .map(|j| (hits[0], j))
        })
    }
}

pub fn splitting_upper_bound(space: &Genus2, d1: &DiscSetSample, d2: &DiscSetSample) -> u64 {
    cross_pairs(space, d1, d2).0
}

fn cross_pairs(space: &Genus2, d1: &DiscSetSample, d2: &DiscSetSample) -> (u64, BigInt, bool) {
    let mut upper = u64::MAX;
    let mut min_i: Option<BigInt> = None;
    let mut shared = false;
    for a in &d1.discs {
        for b in &d2.discs {
            let value = if a.coords == b.coords {
                shared = true;
                0
            } else {
                let i = disc_intersection(space, a, b);
                let v = if i.is_zero() { 1 } else { log_bound(&i) };
                if min_i.as_ref().is_none_or(|m| &i < m) {
                    min_i = Some(i);
                }
                v
            };
            upper = upper.min(value);
        }
    }
    if shared {
        min_i = Some(BigInt::zero());
    }
    (upper, min_i.unwrap_or_default(), shared)
}

/// The lower bound alone, with its certificate level.
pub fn splitting_lower_bound(
    space: &Genus2,
    d1: &DiscSetSample,
    d2: &DiscSetSample,
    search: &CurveSearch,
) -> (CertificateLevel, u64) {
    let iv = splitting_interval(space, d1, d2, search);
    (iv.level, iv.lower)
}

/// Interval for d(D1, D2). `search` must have been built from `d1`.
pub fn splitting_interval(space: &Genus2, d1: &DiscSetSample, d2: &DiscSetSample, search: &CurveSearch) -> DistanceInterval {
    let (mut upper, min_intersection, shared) = cross_pairs(space, d1, d2);
    let (lower, level) = if shared {
        (0, CertificateLevel::Exact)
    } else if min_intersection.is_zero() {
        (1, CertificateLevel::Exact)
    } else if upper <= 2 {
        (2, CertificateLevel::Verified)
    } else if search.witness(space, d2).is_some() {
        upper = upper.min(2);
        (2, CertificateLevel::Verified)
    } else {
        (3, CertificateLevel::SearchBounded)
    };
    DistanceInterval {
        lower,
        level,
        upper,
        search_bound: search.bound,
        min_intersection,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub samples: u64,
    pub mean_upper: f64,
    pub mean_log_min_intersection: f64,
    /// Counts of (lower, level) outcomes.
    pub lower_histogram: BTreeMap<String, u64>,
    pub consistent: u64,
    pub max_upper: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub log_intersection_fit: Option<LinearFit>,
    pub upper_fit: Option<LinearFit>,
    pub disc_bound: usize,
    pub search_bound: u64,
    pub search_candidates: usize,
}

impl GrowthReport {
    pub fn all_consistent(&self) -> bool {
        self.rows.iter().all(|r| r.consistent == r.samples)
    }
}

/// Per-n interval statistics for d(𝒟, w_n·𝒟) over sampled walks.
pub fn growth_experiment(
    space: &Genus2,
    spec: &WalkSpec<MappingClass>,
    ns: &[usize],
    samples: u64,
    disc_bound: usize,
    search_bound: u64,
) -> Result<GrowthReport> {
    if ns.is_empty() {
        return Err(LabError::rejected("empty n grid"));
    }
    if samples == 0 {
        return Err(LabError::rejected("no samples"));
    }
    let d1 = disc_set_sample(space, disc_bound);
    let search = CurveSearch::new(space, &d1, search_bound)?;
    let mut rows = Vec::new();
    for &n in ns {
        let intervals: Vec<DistanceInterval> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let w = spec.position(i, n);
                splitting_interval(space, &d1, &d1.translate(space, &w), &search)
            })
            .collect();
        let mut lower_histogram = BTreeMap::new();
        for iv in &intervals {
            let key = format!("{}:{}", iv.lower, serde_json::to_value(iv.level).unwrap().as_str().unwrap());
            *lower_histogram.entry(key).or_insert(0) += 1;
        }
        let k = samples as f64;
        rows.push(GrowthRow {
            n,
            samples,
            mean_upper: intervals.iter().map(|iv| iv.upper as f64).sum::<f64>() / k,
            mean_log_min_intersection: intervals.iter().map(|iv| iv.log_min_intersection()).sum::<f64>() / k,
            lower_histogram,
            consistent: intervals.iter().filter(|iv| iv.is_consistent()).count() as u64,
            max_upper: intervals.iter().map(|iv| iv.upper).max().unwrap_or(0),
        });
    }
    let fit = |f: fn(&GrowthRow) -> f64| {
        let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let ys: Vec<f64> = rows.iter().map(f).collect();
        linear_fit(&xs, &ys).ok()
    };
    Ok(GrowthReport {
        log_intersection_fit: fit(|r| r.mean_log_min_intersection),
        upper_fit: fit(|r| r.mean_upper),
        rows,
        disc_bound,
        search_bound,
        search_candidates: search.candidates(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(s: &str) -> MappingClass {
        s.parse().unwrap()
    }

    #[test]
    fn disc_samples() {
        let g = Genus2::standard();
        let d0 = disc_set_sample(g, 0);
        assert_eq!(d0.len(), 3);
        let d1 = disc_set_sample(g, 1);
        assert!(d1.len() >= d0.len());
        assert!(d0.discs.iter().all(|d| d1.discs.iter().any(|e| e.coords == d.coords)));
        let d2 = disc_set_sample(g, 2);
        assert!(d2.len() >= d1.len());
        for d in &d1.discs {
            assert_eq!(d.coords, g.apply_word(&d.word, &g.meridians()[d.meridian as usize - 1]));
        }
    }

    #[test]
    fn meridian_twists_fix_the_meridians() {
        let g = Genus2::standard();
        let d0 = disc_set_sample(g, 0);
        for w in ["1", "3", "-5", "1 3 5"] {
            let moved = d0.translate(g, &mc(w));
            let a: HashSet<_> = d0.discs.iter().map(|d| d.coords.clone()).collect();
            let b: HashSet<_> = moved.discs.iter().map(|d| d.coords.clone()).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn intersections_are_equivariant() {
        let g = Genus2::standard();
        let d = disc_set_sample(g, 1);
        let w = mc("2 -4 1 3 -2 5 4");
        let wd = d.translate(g, &w);
        for a in d.discs.iter().take(5) {
            for b in d.discs.iter().take(5) {
                assert_eq!(disc_intersection(g, a, b), disc_intersection(g, &wd.discs[d.discs.iter().position(|x| x == a).unwrap()], &wd.discs[d.discs.iter().position(|x| x == b).unwrap()]));
            }
        }
    }

    #[test]
    fn log_bounds() {
        assert_eq!(log_bound(&BigInt::from(16)), 10);
        assert_eq!(log_bound(&BigInt::from(1)), 2);
        assert_eq!(log_bound(&BigInt::from(3)), 6);
        assert!((log2_big(&(BigInt::from(1) << 2000)) - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn intervals() {
        let g = Genus2::standard();
        let d = disc_set_sample(g, 1);
        let search = CurveSearch::new(g, &d, 3).unwrap();
        let same = splitting_interval(g, &d, &d, &search);
        assert_eq!((same.lower, same.upper, same.level), (0, 0, CertificateLevel::Exact));
        let tw = splitting_interval(g, &d, &d.translate(g, &mc("1 -3 5 5")), &search);
        assert_eq!((tw.lower, tw.upper), (0, 0));
        for w in ["2", "2 4", "2 -4 2 -4 3 1 2", "4 2 4 2 4 2 1 -5 -3"] {
            let w = mc(w);
            let iv = splitting_interval(g, &d, &d.translate(g, &w), &search);
            assert!(iv.is_consistent(), "{w}: {iv:?}");
            let back = splitting_interval(g, &d, &d.translate(g, &w.inverse()), &search);
            assert_eq!(iv.min_intersection, back.min_intersection);
            assert_eq!((iv.lower, iv.upper), (back.lower, back.upper));
        }
    }

    #[test]
    fn upper_bound_is_monotone_in_the_samples() {
        let g = Genus2::standard();
        let w = mc("2 4 -2 1 4 3 2 5");
        let small = disc_set_sample(g, 0);
        let big = disc_set_sample(g, 1);
        let a = splitting_upper_bound(g, &small, &small.translate(g, &w));
        let b = splitting_upper_bound(g, &big, &big.translate(g, &w));
        assert!(b <= a);
    }

    #[test]
    fn growth_rows() {
        let g = Genus2::standard();
        let r = growth_experiment(g, &WalkSpec::meridian_twists(1), &[0, 5, 10], 10, 1, 3).unwrap();
        assert!(r.rows.iter().all(|row| row.max_upper == 0 && row.mean_log_min_intersection == 0.0));
        let h = growth_experiment(g, &WalkSpec::humphries_uniform(1), &[0, 20, 40], 20, 1, 3).unwrap();
        assert!(h.all_consistent());
        assert_eq!(h.rows[0].max_upper, 0);
        assert!(h.log_intersection_fit.unwrap().slope > 0.0);
        assert!(growth_experiment(g, &WalkSpec::humphries_uniform(1), &[], 20, 1, 3).is_err());
    }
}
