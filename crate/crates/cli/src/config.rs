//! Experiment configuration files.

use std::path::Path;

use hyplab::spaces::farey::{FareyGraph, DEFAULT_HEIGHT, FAREY_DELTA_BASELINE};
use hyplab::spaces::genus2::{Genus2, Genus2Preset, MappingClass};
use hyplab::spaces::farey::Sl2;
use hyplab::walk::WalkSpec;
use hyplab::{ConstantTable, FreeTree, HyperbolicSpace, LabError, Rational, Result, Word};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    MetricProps,
    HalfspaceProps,
    Drift,
    TranslationGrowth,
    Independence,
    MeasureZero,
    SplittingGrowth,
    FareyVerify,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::MetricProps => "metric-props",
            Kind::HalfspaceProps => "halfspace-props",
            Kind::Drift => "drift",
            Kind::TranslationGrowth => "translation-growth",
            Kind::Independence => "independence",
            Kind::MeasureZero => "measure-zero",
            Kind::SplittingGrowth => "splitting-growth",
            Kind::FareyVerify => "farey-verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Tree,
    Farey,
    Genus2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub element: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Constants {
    #[serde(default = "one")]
    pub k_qg: String,
    #[serde(default = "zero")]
    pub fellow: String,
}

fn one() -> String {
    "1".into()
}

fn zero() -> String {
    "0".into()
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            k_qg: one(),
            fellow: zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub backend: Backend,
    /// Free-group rank for the tree backend.
    pub rank: Option<u8>,
    /// Window height for the Farey backend.
    pub height: Option<u64>,
    /// δ override, as a rational string.
    pub delta: Option<String>,
    /// Path to a genus-2 preset file; the built-in preset otherwise.
    pub genus2_preset: Option<String>,
    /// A preset walk name.
    pub walk: Option<String>,
    /// Explicit walk steps, used instead of a preset.
    pub steps: Option<Vec<Step>>,
    /// Two elements generating a non-elementary subgroup.
    pub witness: Option<[String; 2]>,
    #[serde(default)]
    pub n: Vec<usize>,
    pub samples: Option<u64>,
    pub depth: Option<usize>,
    pub radius: Option<u64>,
    pub anchor_radius: Option<u64>,
    pub disc_bound: Option<usize>,
    pub search_bound: Option<u64>,
    pub max_denominator: Option<i64>,
    pub epsilon: Option<f64>,
    pub fraction: Option<f64>,
    pub avoid: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub output: Option<String>,
    #[serde(default)]
    pub constants: Constants,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| LabError::rejected(format!("bad rational {s:?}: {e}")))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| LabError::rejected(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::rejected(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// SHA-256 of the canonical JSON form, with the output path left out.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn samples(&self) -> u64 {
        self.samples.unwrap_or(match self.kind {
            Kind::MetricProps => 1000,
            Kind::HalfspaceProps => 10_000,
            Kind::Drift | Kind::TranslationGrowth | Kind::FareyVerify => 10_000,
            Kind::Independence => 100_000,
            Kind::MeasureZero => 1_000_000,
            Kind::SplittingGrowth => 200,
        })
    }

    pub fn n_grid(&self) -> Vec<usize> {
        if !self.n.is_empty() {
            return self.n.clone();
        }
        match self.kind {
            Kind::Drift => vec![2000],
            Kind::TranslationGrowth => vec![1000],
            Kind::Independence => vec![10, 25, 50, 100],
            Kind::MeasureZero => vec![100],
            Kind::SplittingGrowth => vec![10, 20, 40, 80],
            Kind::FareyVerify => vec![40],
            Kind::MetricProps | Kind::HalfspaceProps => vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LabError::rejected(m));
        let allowed: &[Backend] = match self.kind {
            Kind::MetricProps | Kind::HalfspaceProps | Kind::Drift | Kind::TranslationGrowth | Kind::Independence => {
                &[Backend::Tree, Backend::Farey]
            }
            Kind::MeasureZero => &[Backend::Tree],
            Kind::SplittingGrowth => &[Backend::Genus2],
            Kind::FareyVerify => &[Backend::Farey],
        };
        if !allowed.contains(&self.backend) {
            return bad(format!("{} does not run on the {:?} backend", self.kind.name(), self.backend));
        }
        if self.samples == Some(0) {
            return bad("samples must be positive".into());
        }
        if matches!(self.kind, Kind::Drift | Kind::TranslationGrowth) && self.samples() < 2 {
            return bad("at least two samples are needed for a confidence interval".into());
        }
        if self.n.contains(&0) {
            return bad("every n must be positive".into());
        }
        for (name, v) in [
            ("depth", self.depth.map(|d| d as u64)),
            ("radius", self.radius),
            ("anchor-radius", self.anchor_radius),
            ("search-bound", self.search_bound),
            ("rank", self.rank.map(u64::from)),
            ("height", self.height),
        ] {
            if v == Some(0) {
                return bad(format!("{name} must be positive"));
            }
        }
        if self.max_denominator.is_some_and(|d| d < 1) {
            return bad("max-denominator must be positive".into());
        }
        for (name, v) in [("epsilon", self.epsilon), ("fraction", self.fraction)] {
            if v.is_some_and(|x| !(x > 0.0 && x.is_finite())) {
                return bad(format!("{name} must be positive"));
            }
        }
        if self.walk.is_some() && self.steps.is_some() {
            return bad("give either walk or steps, not both".into());
        }
        if let Some(d) = &self.delta {
            if parse_rational(d)? < Rational::from_integer(0) {
                return bad("delta must be non-negative".into());
            }
        }
        parse_rational(&self.constants.k_qg)?;
        parse_rational(&self.constants.fellow)?;
        if self.kind == Kind::Independence {
            let depth = self.depth.unwrap_or(1);
            if self.n_grid().iter().any(|&n| n < 2 * depth) {
                return bad("independence needs n ≥ 2·depth".into());
            }
        }
        if self.kind == Kind::MeasureZero && self.avoid.as_deref().is_some_and(|a| a.is_empty()) {
            return bad("avoid must name at least one letter".into());
        }
        Ok(())
    }

    pub fn tree(&self) -> Result<FreeTree> {
        let t = FreeTree::new(self.rank.unwrap_or(2))?;
        if let Some(d) = &self.delta {
            if parse_rational(d)? != t.delta() {
                return Err(LabError::rejected("the tree backend has δ = 0"));
            }
        }
        Ok(t)
    }

    pub fn farey(&self) -> Result<FareyGraph> {
        let delta = match &self.delta {
            Some(d) => parse_rational(d)?,
            None => Rational::from_integer(FAREY_DELTA_BASELINE),
        };
        FareyGraph::new(self.height.unwrap_or(DEFAULT_HEIGHT), delta)
    }

    /// A custom genus-2 backend, or `None` for the built-in one.
    pub fn genus2(&self) -> Result<Option<Genus2>> {
        self.genus2_preset
            .as_ref()
            .map(|path| {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| LabError::rejected(format!("cannot read {path}: {e}")))?;
                Genus2::from_preset(Genus2Preset::parse(&text)?)
            })
            .transpose()
    }

    pub fn constant_table(&self, delta: Rational) -> Result<ConstantTable> {
        ConstantTable::new(delta, parse_rational(&self.constants.k_qg)?, parse_rational(&self.constants.fellow)?)
    }

    fn custom_steps<G: std::str::FromStr>(&self) -> Result<Option<Vec<(G, Rational)>>>
    where
        G::Err: std::fmt::Display,
    {
        let Some(steps) = &self.steps else {
            return Ok(None);
        };
        steps
            .iter()
            .map(|s| {
                let g = s
                    .element
                    .parse::<G>()
                    .map_err(|e| LabError::rejected(format!("bad step {:?}: {e}", s.element)))?;
                Ok((g, parse_rational(&s.weight)?))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn finish<G: hyplab::GroupElement>(&self, spec: WalkSpec<G>) -> WalkSpec<G> {
        match &self.witness {
            Some([g, h]) => spec.with_witness(g.clone(), h.clone()),
            None => spec,
        }
    }

    pub fn tree_walk(&self, space: &FreeTree) -> Result<WalkSpec<Word>> {
        let spec = match self.custom_steps::<Word>()? {
            Some(steps) => {
                for (g, _) in &steps {
                    space.check(g)?;
                }
                WalkSpec::new("f2", steps, self.seed)?
            }
            None => {
                if space.rank() != 2 {
                    return Err(LabError::rejected("preset tree walks need rank 2; give steps instead"));
                }
                match self.walk.as_deref().unwrap_or("f2-uniform") {
                    "f2-uniform" => WalkSpec::f2_uniform(self.seed),
                    "f2-asymmetric" => WalkSpec::f2_asymmetric(self.seed),
                    "f2-ray" => WalkSpec::f2_ray(self.seed),
                    other => return Err(LabError::rejected(format!("unknown tree walk {other:?}"))),
                }
            }
        };
        Ok(self.finish(spec))
    }

    pub fn farey_walk(&self) -> Result<WalkSpec<Sl2>> {
        let spec = match self.custom_steps::<Sl2>()? {
            Some(steps) => WalkSpec::new("sl2", steps, self.seed)?,
            None => match self.walk.as_deref().unwrap_or("sl2-uniform") {
                "sl2-uniform" => WalkSpec::sl2_uniform(self.seed),
                other => return Err(LabError::rejected(format!("unknown Farey walk {other:?}"))),
            },
        };
        Ok(self.finish(spec))
    }

    pub fn genus2_walk(&self) -> Result<WalkSpec<MappingClass>> {
        let spec = match self.custom_steps::<MappingClass>()? {
            Some(steps) => WalkSpec::new("mcg", steps, self.seed)?,
            None => match self.walk.as_deref().unwrap_or("humphries-uniform") {
                "humphries-uniform" => WalkSpec::humphries_uniform(self.seed),
                "meridian-twists" => WalkSpec::meridian_twists(self.seed),
                other => return Err(LabError::rejected(format!("unknown genus-2 walk {other:?}"))),
            },
        };
        Ok(self.finish(spec))
    }

    /// Whether the walk is the uniform measure on the standard generators.
    pub fn is_uniform_preset(&self) -> bool {
        self.steps.is_none() && matches!(self.walk.as_deref(), None | Some("f2-uniform"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let e = ExperimentConfig::from_toml("kind = \"drift\"\nbackend = \"tree\"\nsampels = 3\n").unwrap_err();
        assert!(e.to_string().contains("sampels"), "{e}");
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(ExperimentConfig::from_toml("kind = \"drift\"\nbackend = \"tree\"\nsamples = 0\n").is_err());
    }

    #[test]
    fn backend_must_fit_kind() {
        assert!(ExperimentConfig::from_toml("kind = \"splitting-growth\"\nbackend = \"tree\"\n").is_err());
        assert!(ExperimentConfig::from_toml("kind = \"independence\"\nbackend = \"tree\"\ndepth = 3\nn = [4]\n").is_err());
    }

    #[test]
    fn hash_ignores_output_but_not_seed() {
        let a = ExperimentConfig::from_toml("kind = \"drift\"\nbackend = \"tree\"\noutput = \"x\"\n").unwrap();
        let mut b = a.clone();
        b.output = Some("y".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = 9;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn walks_from_config() {
        let c = ExperimentConfig::from_toml(
            "kind = \"drift\"\nbackend = \"tree\"\n[[steps]]\nelement = \"a\"\nweight = \"1/2\"\n[[steps]]\nelement = \"A\"\nweight = \"1/2\"\n",
        )
        .unwrap();
        let t = c.tree().unwrap();
        assert_eq!(c.tree_walk(&t).unwrap().steps().len(), 2);
        assert!(!c.is_uniform_preset());
        let bad = ExperimentConfig::from_toml("kind = \"drift\"\nbackend = \"tree\"\nwalk = \"nope\"\n").unwrap();
        assert!(bad.tree_walk(&t).is_err());
    }
}
