//! Simple closed curves on the closed genus-2 surface, handled through the
//! hyperelliptic quotient: a sphere with six punctures, triangulated as an
//! octahedron. Every curve upstairs is isotopic to a symmetric one, and
//! symmetric curves correspond to essential curves on the punctured sphere:
//! nonseparating curves to curves cutting off two punctures, separating
//! curves to curves cutting off three. Curves are stored by their normal
//! coordinates (intersection numbers with the twelve edges) and mapping
//! classes act through lifted half-twists, computed by edge flips.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};
use crate::group::GroupElement;

pub const N_PUNCTURES: usize = 6;
pub const N_EDGES: usize = 12;
/// Number of chain (Humphries) generators.
pub const N_GENERATORS: u8 = 5;

const PRESET: &str = include_str!("../../presets/genus2.txt");

const NAMES: [char; N_PUNCTURES] = ['X', 'Y', 'Z', 'x', 'y', 'z'];

fn antipode(v: u8) -> u8 {
    (v + 3) % 6
}

/// Octahedron edges: all non-antipodal pairs, ordered lexicographically.
fn octahedron_edges() -> [(u8, u8); N_EDGES] {
    let mut out = [(0, 0); N_EDGES];
    let mut k = 0;
    for u in 0..6u8 {
        for v in u + 1..6u8 {
            if v != antipode(u) {
                out[k] = (u, v);
                k += 1;
            }
        }
    }
    out
}

fn edge_id(u: u8, v: u8) -> Option<usize> {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    octahedron_edges().iter().position(|&e| e == (u, v))
}

fn vertex_of(c: char) -> Result<u8> {
    NAMES
        .iter()
        .position(|&n| n == c)
        .map(|i| i as u8)
        .ok_or_else(|| LabError::rejected(format!("unknown puncture `{c}`")))
}

fn parse_edge(s: &str) -> Result<usize> {
    let cs: Vec<char> = s.chars().collect();
    if cs.len() != 2 {
        return Err(LabError::rejected(format!("bad edge `{s}`")));
    }
    edge_id(vertex_of(cs[0])?, vertex_of(cs[1])?)
        .ok_or_else(|| LabError::rejected(format!("`{s}` is not an octahedron edge")))
}

/// Octahedron faces, counterclockwise seen from outside.
fn octahedron_faces() -> Vec<[u8; 3]> {
    let mut faces = Vec::new();
    for mask in 0..8u8 {
        let sx = mask & 1 == 0;
        let sy = mask & 2 == 0;
        let sz = mask & 4 == 0;
        let vx = if sx { 0 } else { 3 };
        let vy = if sy { 1 } else { 4 };
        let vz = if sz { 2 } else { 5 };
        let positive = [sx, sy, sz].iter().filter(|s| !**s).count() % 2 == 0;
        faces.push(if positive { [vx, vy, vz] } else { [vx, vz, vy] });
    }
    faces
}

#[derive(Clone, Copy, Debug)]
struct Tri {
    /// `e[k]` runs from `v[k]` to `v[(k+1) % 3]`.
    e: [usize; 3],
    v: [u8; 3],
}

/// A labelled ideal triangulation; flipping an edge keeps its label.
#[derive(Clone, Debug)]
struct Triangulation {
    tris: Vec<Tri>,
}

/// A flip of `edge` inside the quadrilateral with sides `sides` in cyclic
/// order: new = max(s0 + s2, s1 + s3) − old. The reverse flip uses the same
/// quadrilateral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct FlipStep {
    edge: usize,
    sides: [usize; 4],
}

impl Triangulation {
    fn octahedron() -> Self {
        let tris = octahedron_faces()
            .into_iter()
            .map(|v| Tri {
                e: [
                    edge_id(v[0], v[1]).unwrap(),
                    edge_id(v[1], v[2]).unwrap(),
                    edge_id(v[2], v[0]).unwrap(),
                ],
                v,
            })
            .collect();
        Triangulation { tris }
    }

    fn rotated(t: Tri, k: usize) -> Tri {
        Tri {
            e: [t.e[k], t.e[(k + 1) % 3], t.e[(k + 2) % 3]],
            v: [t.v[k], t.v[(k + 1) % 3], t.v[(k + 2) % 3]],
        }
    }

    fn flip(&mut self, edge: usize) -> FlipStep {
        let mut hits = Vec::new();
        for (i, t) in self.tris.iter().enumerate() {
            for k in 0..3 {
                if t.e[k] == edge {
                    hits.push((i, k));
                }
            }
        }
        assert!(
            hits.len() == 2 && hits[0].0 != hits[1].0,
            "edge {edge} does not border two distinct triangles"
        );
        let t1 = Self::rotated(self.tris[hits[0].0], hits[0].1);
        let t2 = Self::rotated(self.tris[hits[1].0], hits[1].1);
        let (u, v, w) = (t1.v[0], t1.v[1], t1.v[2]);
        let w2 = t2.v[2];
        assert!(t2.v[0] == v && t2.v[1] == u, "inconsistent orientation at edge {edge}");
        let (a, b) = (t1.e[1], t1.e[2]);
        let (c, d) = (t2.e[1], t2.e[2]);
        self.tris[hits[0].0] = Tri {
            e: [edge, d, a],
            v: [w, w2, v],
        };
        self.tris[hits[1].0] = Tri {
            e: [edge, b, c],
            v: [w2, w, u],
        };
        FlipStep {
            edge,
            sides: [c, d, a, b],
        }
    }

    fn has_triangle(&self, edges: [usize; 3]) -> bool {
        let want: BTreeSet<usize> = edges.into_iter().collect();
        self.tris.iter().any(|t| t.e.iter().copied().collect::<BTreeSet<_>>() == want)
    }
}

/// The half-twist about one chain arc, as edge-label operations.
#[derive(Clone, Debug)]
struct TwistProgram {
    flips: Vec<FlipStep>,
    e: usize,
    x: usize,
    y: usize,
    y2: usize,
    c: usize,
}

impl TwistProgram {
    fn relabel(&self, perm: &[usize; N_EDGES]) -> Self {
        TwistProgram {
            flips: self
                .flips
                .iter()
                .map(|f| FlipStep {
                    edge: perm[f.edge],
                    sides: f.sides.map(|s| perm[s]),
                })
                .collect(),
            e: perm[self.e],
            x: perm[self.x],
            y: perm[self.y],
            y2: perm[self.y2],
            c: perm[self.c],
        }
    }

    fn flip_value(w: &[BigInt], f: &FlipStep) -> BigInt {
        let [s0, s1, s2, s3] = f.sides;
        (&w[s0] + &w[s2]).max(&w[s1] + &w[s3]) - &w[f.edge]
    }

    fn apply(&self, w: &mut [BigInt], forward: bool) {
        for f in &self.flips {
            w[f.edge] = Self::flip_value(w, f);
        }
        let (e, x, y, y2, c) = (self.e, self.x, self.y, self.y2, self.c);
        if forward {
            // x ← y, y2 ← x, y ← flip of y2
            let new_y = (&w[e] + &w[c]).max(&w[x] + &w[y]) - &w[y2];
            let old_x = std::mem::take(&mut w[x]);
            w[x] = std::mem::replace(&mut w[y], new_y);
            w[y2] = old_x;
        } else {
            // y ← x, x ← y2, y2 ← flip of y
            let new_y2 = (&w[e] + &w[c]).max(&w[y2] + &w[x]) - &w[y];
            let old_x = std::mem::take(&mut w[x]);
            w[x] = std::mem::replace(&mut w[y2], new_y2);
            w[y] = old_x;
        }
        for f in self.flips.iter().rev() {
            w[f.edge] = Self::flip_value(w, f);
        }
    }
}

/// Orientation-preserving symmetries of the octahedron, as vertex maps.
fn rotations() -> Vec<[u8; N_PUNCTURES]> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for p in perms {
        let parity = if p == [0, 1, 2] || p == [1, 2, 0] || p == [2, 0, 1] { 1 } else { -1 };
        for signs in 0..8u8 {
            let s = [0, 1, 2].map(|i| if signs >> i & 1 == 0 { 1 } else { -1 });
            if parity * s[0] * s[1] * s[2] != 1 {
                continue;
            }
            let mut map = [0u8; N_PUNCTURES];
            for v in 0..6u8 {
                let axis = (v % 3) as usize;
                let sign = if v < 3 { 1 } else { -1 } * s[axis];
                map[v as usize] = p[axis] as u8 + if sign > 0 { 0 } else { 3 };
            }
            out.push(map);
        }
    }
    out
}

fn edge_permutation(map: &[u8; N_PUNCTURES]) -> [usize; N_EDGES] {
    let edges = octahedron_edges();
    let mut perm = [0; N_EDGES];
    for (i, &(u, v)) in edges.iter().enumerate() {
        perm[i] = edge_id(map[u as usize], map[v as usize]).expect("rotations preserve edges");
    }
    perm
}

/// A named element of the handlebody group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandlebodyGenerator {
    pub name: String,
    pub word: MappingClass,
}

/// The parsed and verified preset file.
#[derive(Clone, Debug)]
pub struct Genus2Preset {
    pub version: u32,
    pub sha256: String,
    pub chain: [usize; 5],
    pub meridians: [u8; 3],
    pub handlebody: Vec<HandlebodyGenerator>,
    pub curves: Vec<(String, CurveCoords)>,
    twist_flips: Vec<usize>,
    twist_local: [usize; 5],
}

impl Genus2Preset {
    pub fn parse(text: &str) -> Result<Self> {
        let body_end = text
            .rfind("sha256 ")
            .ok_or_else(|| LabError::rejected("preset has no sha256 line"))?;
        let (body, tail) = text.split_at(body_end);
        let stated = tail["sha256 ".len()..].trim().to_string();
        let actual = format!("{:x}", Sha256::digest(body.as_bytes()));
        if stated != actual {
            return Err(LabError::rejected(format!("preset checksum mismatch: {stated} != {actual}")));
        }
        let mut version = None;
        let mut chain = None;
        let mut meridians = None;
        let mut twist_flips = None;
        let mut twist_local = None;
        let mut handlebody = Vec::new();
        let mut curves = Vec::new();
        for line in body.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            let words: Vec<&str> = rest.split_whitespace().collect();
            match key {
                "format" if rest == "genus2-preset" => {}
                "version" => version = rest.parse().ok(),
                "chain" => {
                    let ids = words.iter().map(|w| parse_edge(w)).collect::<Result<Vec<_>>>()?;
                    chain = ids.try_into().ok();
                }
                "meridians" => {
                    let ids: Vec<u8> = words.iter().filter_map(|w| w.parse().ok()).collect();
                    meridians = ids.try_into().ok();
                }
                "twist-flips" => {
                    twist_flips = Some(words.iter().map(|w| parse_edge(w)).collect::<Result<Vec<_>>>()?);
                }
                "twist-local" => {
                    let mut slots = HashMap::new();
                    for w in &words {
                        let (k, v) = w
                            .split_once('=')
                            .ok_or_else(|| LabError::rejected(format!("bad twist-local entry `{w}`")))?;
                        slots.insert(k, parse_edge(v)?);
                    }
                    let get = |k: &str| {
                        slots
                            .get(k)
                            .copied()
                            .ok_or_else(|| LabError::rejected(format!("twist-local lacks `{k}`")))
                    };
                    twist_local = Some([get("e")?, get("x")?, get("y")?, get("y2")?, get("c")?]);
                }
                "handlebody" => {
                    let (name, word) = rest
                        .split_once('=')
                        .ok_or_else(|| LabError::rejected(format!("bad handlebody line `{line}`")))?;
                    handlebody.push(HandlebodyGenerator {
                        name: name.trim().to_string(),
                        word: word.trim().parse()?,
                    });
                }
                "curve" => {
                    let (name, spec) = rest
                        .split_once('=')
                        .ok_or_else(|| LabError::rejected(format!("bad curve line `{line}`")))?;
                    let parts: Vec<&str> = spec.split_whitespace().collect();
                    let verts = parts[1..]
                        .iter()
                        .map(|p| {
                            let mut cs = p.chars();
                            match (cs.next(), cs.next()) {
                                (Some(c), None) => vertex_of(c),
                                _ => Err(LabError::rejected(format!("bad puncture `{p}`"))),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let curve = match (parts.first(), verts.as_slice()) {
                        (Some(&"face"), &[a, b, c]) => CurveCoords::around(&[a, b, c])?,
                        (Some(&"arc"), &[a, b]) => CurveCoords::around(&[a, b])?,
                        _ => return Err(LabError::rejected(format!("bad curve spec `{spec}`"))),
                    };
                    curves.push((name.trim().to_string(), curve));
                }
                _ => return Err(LabError::rejected(format!("unknown preset line `{line}`"))),
            }
        }
        let missing = |what: &str| LabError::rejected(format!("preset lacks `{what}`"));
        Ok(Genus2Preset {
            version: version.ok_or_else(|| missing("version"))?,
            sha256: stated,
            chain: chain.ok_or_else(|| missing("chain"))?,
            meridians: meridians.ok_or_else(|| missing("meridians"))?,
            handlebody,
            curves,
            twist_flips: twist_flips.ok_or_else(|| missing("twist-flips"))?,
            twist_local: twist_local.ok_or_else(|| missing("twist-local"))?,
        })
    }

    pub fn curve(&self, name: &str) -> Option<&CurveCoords> {
        self.curves.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

/// The genus-2 backend: the preset plus one twist program per generator.
#[derive(Debug)]
pub struct Genus2 {
    preset: Genus2Preset,
    programs: Vec<TwistProgram>,
}

impl Genus2 {
    pub fn from_preset(preset: Genus2Preset) -> Result<Self> {
        let mut tri = Triangulation::octahedron();
        let flips: Vec<FlipStep> = preset.twist_flips.iter().map(|&e| tri.flip(e)).collect();
        let [e, x, y, y2, c] = preset.twist_local;
        if !(tri.has_triangle([e, y, x]) && tri.has_triangle([e, y2, x]) && tri.has_triangle([y, c, y2])) {
            return Err(LabError::rejected(
                "twist flips do not produce a twice-punctured monogon around the first chain arc",
            ));
        }
        let base = TwistProgram { flips, e, x, y, y2, c };
        let edges = octahedron_edges();
        let (bu, bv) = edges[e];
        let rots = rotations();
        let mut programs = Vec::new();
        for &target in &preset.chain {
            let (tu, tv) = edges[target];
            let g = rots
                .iter()
                .find(|g| {
                    let (a, b) = (g[bu as usize], g[bv as usize]);
                    (a, b) == (tu, tv) || (b, a) == (tu, tv)
                })
                .expect("rotations act transitively on edges");
            programs.push(base.relabel(&edge_permutation(g)));
        }
        Ok(Genus2 { preset, programs })
    }

    /// The backend built from the frozen preset file.
    pub fn standard() -> &'static Genus2 {
        static STANDARD: OnceLock<Genus2> = OnceLock::new();
        STANDARD.get_or_init(|| {
            let preset = Genus2Preset::parse(PRESET).expect("frozen preset is valid");
            Genus2::from_preset(preset).expect("frozen preset is consistent")
        })
    }

    pub fn preset(&self) -> &Genus2Preset {
        &self.preset
    }

    /// The circle around chain arc `i` (1..=5); its lift is the chain curve cᵢ.
    pub fn chain_curve(&self, i: u8) -> Result<CurveCoords> {
        let e = self.chain_edge(i)?;
        let (u, v) = octahedron_edges()[e];
        CurveCoords::around(&[u, v])
    }

    fn chain_edge(&self, i: u8) -> Result<usize> {
        if !(1..=N_GENERATORS).contains(&i) {
            return Err(LabError::rejected(format!("chain index {i} outside 1..=5")));
        }
        Ok(self.preset.chain[i as usize - 1])
    }

    /// The three disc-bounding pants curves, in order.
    pub fn meridians(&self) -> Vec<CurveCoords> {
        self.preset
            .meridians
            .iter()
            .map(|&i| self.chain_curve(i).expect("preset meridians are chain indices"))
            .collect()
    }

    /// Applies T_{c_gen}^power, the Dehn twist about chain curve `gen`.
    pub fn twist_action(&self, c: &CurveCoords, gen: u8, power: i64) -> Result<CurveCoords> {
        if !(1..=N_GENERATORS).contains(&gen) {
            return Err(LabError::rejected(format!("generator {gen} outside 1..=5")));
        }
        let program = &self.programs[gen as usize - 1];
        let mut w = c.w.clone();
        for _ in 0..power.unsigned_abs() {
            program.apply(&mut w, power > 0);
        }
        let out = CurveCoords { w };
        debug_assert!(out.check_admissible().is_ok(), "twist produced an inadmissible curve");
        Ok(out)
    }

    /// `w · c`; the rightmost letter acts first.
    pub fn apply_word(&self, w: &MappingClass, c: &CurveCoords) -> CurveCoords {
        let mut cur = c.w.clone();
        for &l in w.0.iter().rev() {
            self.programs[l.unsigned_abs() as usize - 1].apply(&mut cur, l > 0);
        }
        CurveCoords { w: cur }
    }

    /// i(c̃, c̃ᵢ) for the chain curve cᵢ, i in 1..=5.
    pub fn intersection_with_chain(&self, c: &CurveCoords, i: u8) -> Result<BigInt> {
        let e = self.chain_edge(i)?;
        Ok(c.readout(e))
    }

    /// Intersection with pants curve j in 1..=3 (the meridians).
    pub fn intersection_with_pants(&self, c: &CurveCoords, j: u8) -> Result<BigInt> {
        if !(1..=3).contains(&j) {
            return Err(LabError::rejected(format!("pants index {j} outside 1..=3")));
        }
        self.intersection_with_chain(c, self.preset.meridians[j as usize - 1])
    }

    /// Intersection numbers with the three pants curves.
    pub fn pants_readout(&self, c: &CurveCoords) -> [BigInt; 3] {
        [1, 2, 3].map(|j| self.intersection_with_pants(c, j).expect("valid pants index"))
    }
}

/// Which kind of curve upstairs a sphere curve lifts to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// Cuts off two punctures.
    Nonseparating,
    /// Cuts off three punctures.
    Separating,
}

/// Normal coordinates of an essential simple closed curve on the
/// six-punctured sphere, one entry per octahedron edge.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveCoords {
    w: Vec<BigInt>,
}

impl CurveCoords {
    /// Validates face conditions, connectedness and essentiality.
    pub fn new(weights: Vec<BigInt>) -> Result<Self> {
        if weights.len() != N_EDGES {
            return Err(LabError::rejected(format!("expected {N_EDGES} coordinates")));
        }
        let c = CurveCoords { w: weights };
        c.check_admissible()?;
        c.kind()?;
        if let Some(false) = c.is_connected() {
            return Err(LabError::rejected("coordinates describe a multicurve"));
        }
        Ok(c)
    }

    pub fn from_u64(weights: [u64; N_EDGES]) -> Result<Self> {
        Self::new(weights.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The boundary of a regular neighbourhood of a face or an edge.
    fn around(verts: &[u8]) -> Result<Self> {
        let inside = |v: u8| verts.contains(&v);
        let w = octahedron_edges()
            .iter()
            .map(|&(u, v)| BigInt::from((inside(u) != inside(v)) as u8))
            .collect();
        Self::new(w)
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.w
    }

    pub fn max_coordinate(&self) -> BigInt {
        self.w.iter().max().cloned().unwrap_or_default()
    }

    /// Total number of intersections with the triangulation.
    pub fn size(&self) -> BigInt {
        self.w.iter().sum()
    }

    fn check_admissible(&self) -> Result<()> {
        if self.w.iter().any(|x| x < &BigInt::zero()) {
            return Err(LabError::rejected("negative normal coordinate"));
        }
        for f in octahedron_faces() {
            let e = [
                edge_id(f[0], f[1]).unwrap(),
                edge_id(f[1], f[2]).unwrap(),
                edge_id(f[2], f[0]).unwrap(),
            ];
            let [a, b, c] = e.map(|i| &self.w[i]);
            if (a + b + c) % 2 != BigInt::zero() || a > &(b + c) || b > &(a + c) || c > &(a + b) {
                return Err(LabError::rejected("face condition violated"));
            }
        }
        Ok(())
    }

    /// Side of each puncture: `u`, `v` share a side iff edge uv has even weight.
    pub fn sides(&self) -> [bool; N_PUNCTURES] {
        let edges = octahedron_edges();
        let mut side = [None; N_PUNCTURES];
        side[0] = Some(false);
        while side.iter().any(Option::is_none) {
            for (i, &(u, v)) in edges.iter().enumerate() {
                let odd = self.w[i].bit(0);
                match (side[u as usize], side[v as usize]) {
                    (Some(s), None) => side[v as usize] = Some(s ^ odd),
                    (None, Some(s)) => side[u as usize] = Some(s ^ odd),
                    _ => {}
                }
            }
        }
        side.map(|s| s.unwrap())
    }

    pub fn kind(&self) -> Result<CurveKind> {
        let ones = self.sides().iter().filter(|&&s| s).count();
        match ones.min(N_PUNCTURES - ones) {
            2 => Ok(CurveKind::Nonseparating),
            3 => Ok(CurveKind::Separating),
            _ => Err(LabError::rejected("curve is empty or peripheral")),
        }
    }

    /// i(c̃, ẽ) for the lift ẽ of octahedron edge `e`.
    fn readout(&self, e: usize) -> BigInt {
        match self.kind() {
            Ok(CurveKind::Separating) => BigInt::from(2) * &self.w[e],
            _ => self.w[e].clone(),
        }
    }

    /// Traces the normal arcs; `None` when the coordinates are too large.
    pub fn is_connected(&self) -> Option<bool> {
        let w: Vec<usize> = self
            .w
            .iter()
            .map(|x| x.to_usize().filter(|&v| v <= 1 << 16))
            .collect::<Option<_>>()?;
        Some(count_components(&w) == 1)
    }
}

/// Number of closed components of the normal multicurve with weights `w`.
fn count_components(w: &[usize]) -> usize {
    let edges = octahedron_edges();
    let mut offset = [0; N_EDGES + 1];
    for i in 0..N_EDGES {
        offset[i + 1] = offset[i] + w[i];
    }
    let total = offset[N_EDGES];
    if total == 0 {
        return 0;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // point j (1-based) at distance j from `from` along edge e
    let point = |e: usize, from: u8, j: usize| -> usize {
        if edges[e].0 == from {
            offset[e] + j - 1
        } else {
            offset[e] + w[e] - j
        }
    };
    for f in octahedron_faces() {
        for k in 0..3 {
            let corner = f[k];
            let before = edge_id(f[(k + 2) % 3], corner).unwrap();
            let after = edge_id(corner, f[(k + 1) % 3]).unwrap();
            let opposite = edge_id(f[(k + 1) % 3], f[(k + 2) % 3]).unwrap();
            let arcs = (w[before] + w[after] - w[opposite]) / 2;
            for j in 1..=arcs {
                let a = find(&mut parent, point(before, corner, j));
                let b = find(&mut parent, point(after, corner, j));
                parent[a] = b;
            }
        }
    }
    (0..total).filter(|&x| find(&mut parent, x) == x).count()
}

/// All essential simple closed curves whose coordinates are at most `bound`.
pub fn enumerate_curves(bound: u64) -> Result<Vec<CurveCoords>> {
    if bound > 6 {
        return Err(LabError::rejected("curve enumeration supports coordinate bounds up to 6"));
    }
    let faces: Vec<[usize; 3]> = octahedron_faces()
        .iter()
        .map(|f| {
            [
                edge_id(f[0], f[1]).unwrap(),
                edge_id(f[1], f[2]).unwrap(),
                edge_id(f[2], f[0]).unwrap(),
            ]
        })
        .collect();
    // faces checkable once all their edges (by index) are assigned
    let mut ready: Vec<Vec<[usize; 3]>> = vec![Vec::new(); N_EDGES];
    for f in &faces {
        ready[*f.iter().max().unwrap()].push(*f);
    }
    let mut out = Vec::new();
    let mut w = [0usize; N_EDGES];
    fn rec(
        k: usize,
        bound: usize,
        w: &mut [usize; N_EDGES],
        ready: &[Vec<[usize; 3]>],
        out: &mut Vec<CurveCoords>,
    ) {
        if k == N_EDGES {
            if count_components(w) == 1 {
                let c = CurveCoords {
                    w: w.iter().map(|&x| BigInt::from(x)).collect(),
                };
                if c.kind().is_ok() {
                    out.push(c);
                }
            }
            return;
        }
        for v in 0..=bound {
            w[k] = v;
            let ok = ready[k].iter().all(|&[a, b, c]| {
                let (a, b, c) = (w[a], w[b], w[c]);
                (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b
            });
            if ok {
                rec(k + 1, bound, w, ready, out);
            }
        }
    }
    rec(0, bound as usize, &mut w, &ready, &mut out);
    Ok(out)
}

impl fmt::Debug for CurveCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CurveCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.w.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A word in the chain twists: letter ±i stands for T_{cᵢ}^{±1}.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MappingClass(Vec<i8>);

impl MappingClass {
    pub fn new(letters: impl IntoIterator<Item = i8>) -> Result<Self> {
        let mut out = Vec::new();
        for l in letters {
            if l == 0 || l.unsigned_abs() > N_GENERATORS {
                return Err(LabError::rejected(format!("generator {l} outside ±1..=±5")));
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(MappingClass(out))
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl GroupElement for MappingClass {
    fn identity() -> Self {
        MappingClass(Vec::new())
    }

    fn mul(&self, other: &Self) -> Self {
        MappingClass::new(self.0.iter().chain(&other.0).copied()).expect("letters already valid")
    }

    fn inverse(&self) -> Self {
        MappingClass(self.0.iter().rev().map(|l| -l).collect())
    }

    fn mul_assign(&mut self, other: &Self) {
        for &l in &other.0 {
            if self.0.last() == Some(&-l) {
                self.0.pop();
            } else {
                self.0.push(l);
            }
        }
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for MappingClass {
    type Err = LabError;

    /// Space-separated signed generator indices, e.g. `2 1 -3`; `1` alone
    /// is the generator T₁, and the empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split_whitespace()
            .map(|t| t.parse::<i8>().map_err(|_| LabError::rejected(format!("bad letter `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        MappingClass::new(letters)
    }
}
