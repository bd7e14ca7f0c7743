//! Scenario files.
//!
//! A scenario is a TOML document: flat scalar parameters at the top level,
//! then `[blue]`, `[red]`, `[engagement]` and an optional `[integrator]`
//! table. Parameter names follow the model notation (`sigma_B`, `zeta_BR`,
//! `phi_RB`, `kappa_BR`, `gamma_B`, ...). Node numbers in files are 1-based.
//!
//! ```toml
//! name = "example"
//! seed = 7
//! t_final = 1000.0
//! sigma_B = 1.0
//! # ... remaining scalars
//!
//! [blue]
//! graph = { kind = "fighting_fish" }
//! omega = 1.0                      # scalar, list, or { uniform = [lo, hi], mean = m }
//! theta0 = "sector"                # or a list / scalar
//! p0 = [10.0, 10.0, 100.0]         # or scalar, or { fill = x, head = [...] }
//!
//! [engagement]
//! same_index = [1, 3]              # or pairs = [[b, r], ...], or file = "path"
//! ```

use super::HarnessError;
use crate::global::{sector_phases, Feedback, GlobalScenario, EPS1_DEFAULT, EPS2_DEFAULT};
use crate::graphs::{
    build_complete, build_complete_kary_tree, build_edgeless, build_erdos_renyi,
    build_fighting_fish, build_path, build_random_geometric, load_engagement, load_graph,
    EngagementMap, ForceGraph,
};
use crate::integrate::IntegratorSettings;
use crate::networked::{NetFeedback, NetworkedScenario};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Independent random streams derived from the scenario seed.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub enum SeedStream {
    BlueGraph = 1,
    RedGraph = 2,
    BlueOmega = 3,
    RedOmega = 4,
}

pub fn stream_seed(seed: u64, stream: SeedStream) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    KaryTree {
        branching: usize,
        depth: usize,
    },
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    FightingFish,
    RandomGeometric {
        n: usize,
        mean_degree: f64,
    },
    Edgeless {
        n: usize,
    },
    Path {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// Edge-list file, relative to the scenario file.
    File {
        path: String,
    },
}

/// Per-node values of one force.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeValues {
    Scalar(f64),
    List(Vec<f64>),
    /// `head` on nodes 1..=head.len(), `fill` elsewhere.
    Fill {
        fill: f64,
        head: Vec<f64>,
    },
    /// Seeded uniform draw, optionally shifted so the sample mean is `mean`.
    Uniform {
        uniform: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mean: Option<f64>,
    },
    /// `"sector"`: equally spaced over `[-π/4, π/4]`.
    Keyword(String),
}

impl NodeValues {
    fn expand(&self, n: usize, what: &str, rng_seed: u64) -> Result<Vec<f64>, HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(format!("{what}: {msg}")));
        match self {
            NodeValues::Scalar(x) => Ok(vec![*x; n]),
            NodeValues::List(v) if v.len() == n => Ok(v.clone()),
            NodeValues::List(v) => bad(format!("{} values for {n} nodes", v.len())),
            NodeValues::Fill { fill, head } if head.len() <= n => {
                let mut v = head.clone();
                v.resize(n, *fill);
                Ok(v)
            }
            NodeValues::Fill { head, .. } => {
                bad(format!("head of {} values for {n} nodes", head.len()))
            }
            NodeValues::Uniform {
                uniform: [lo, hi],
                mean,
            } => {
                if !(lo <= hi) {
                    return bad(format!("empty range [{lo}, {hi}]"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
                let mut v: Vec<f64> = (0..n)
                    .map(|_| lo + (hi - lo) * rng.random::<f64>())
                    .collect();
                if let Some(m) = mean {
                    let shift = m - v.iter().sum::<f64>() / n as f64;
                    v.iter_mut().for_each(|x| *x += shift);
                }
                Ok(v)
            }
            NodeValues::Keyword(k) if k == "sector" => Ok(sector_phases(n)),
            NodeValues::Keyword(k) => bad(format!("unknown keyword {k:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSpec {
    pub graph: GraphSpec,
    pub omega: NodeValues,
    pub theta0: NodeValues,
    pub p0: NodeValues,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EngagementSpec {
    /// Blue node `k` engages Red node `k` for `k` in the inclusive range.
    SameIndex {
        same_index: [usize; 2],
    },
    Pairs {
        pairs: Vec<[usize; 2]>,
    },
    File {
        file: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_samples: Option<usize>,
}

impl IntegratorSpec {
    fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

fn one() -> f64 {
    1.0
}
fn eps1_default() -> f64 {
    EPS1_DEFAULT
}
fn eps2_default() -> f64 {
    EPS2_DEFAULT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub t_final: f64,
    #[serde(rename = "sigma_B")]
    pub sigma_b: f64,
    #[serde(rename = "sigma_R")]
    pub sigma_r: f64,
    #[serde(rename = "zeta_BR")]
    pub zeta_br: f64,
    #[serde(rename = "zeta_RB")]
    pub zeta_rb: f64,
    #[serde(rename = "phi_BR")]
    pub phi_br: f64,
    #[serde(rename = "phi_RB")]
    pub phi_rb: f64,
    #[serde(rename = "kappa_BR")]
    pub kappa_br: f64,
    #[serde(rename = "kappa_RB")]
    pub kappa_rb: f64,
    #[serde(rename = "gamma_B", default)]
    pub gamma_b: f64,
    #[serde(rename = "gamma_R", default)]
    pub gamma_r: f64,
    /// Attenuation used by the global and reduced tiers.
    #[serde(default)]
    pub feedback: Feedback,
    /// Attenuation used by the networked tier.
    #[serde(default)]
    pub net_feedback: NetFeedback,
    #[serde(default = "one")]
    pub standing_force: f64,
    /// Defaults to `eps1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extinction_threshold: Option<f64>,
    #[serde(default = "eps1_default")]
    pub eps1: f64,
    #[serde(default = "eps2_default")]
    pub eps2: f64,
    pub blue: ForceSpec,
    pub red: ForceSpec,
    pub engagement: EngagementSpec,
    #[serde(default, skip_serializing_if = "IntegratorSpec::is_default")]
    pub integrator: IntegratorSpec,
    /// Directory that relative file paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

/// Graphs and per-node vectors shared by every tier.
#[derive(Debug, Clone)]
pub struct BuiltForces {
    pub blue_graph: ForceGraph,
    pub red_graph: ForceGraph,
    pub engagement: EngagementMap,
    pub omega_b: Vec<f64>,
    pub omega_r: Vec<f64>,
    pub theta0_b: Vec<f64>,
    pub theta0_r: Vec<f64>,
    pub p0_b: Vec<f64>,
    pub p0_r: Vec<f64>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut s = Self::from_toml(&text)?;
        s.base_dir = path.parent().map(Path::to_path_buf);
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario is always representable in TOML")
    }

    pub fn to_value(&self) -> toml::Value {
        toml::Value::try_from(self).expect("scenario is always representable in TOML")
    }

    pub fn from_value(value: toml::Value, base_dir: Option<PathBuf>) -> Result<Self, HarnessError> {
        let mut s: Self = value.try_into()?;
        s.base_dir = base_dir;
        Ok(s)
    }

    /// First 16 hex digits of the SHA-256 of the canonical TOML text.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Applies `path=value` overrides (see [`super::set_path`]).
    pub fn with_overrides<S: AsRef<str>>(&self, sets: &[S]) -> Result<Self, HarnessError> {
        if sets.is_empty() {
            return Ok(self.clone());
        }
        let mut v = self.to_value();
        for s in sets {
            let (path, raw) = s.as_ref().split_once('=').ok_or_else(|| {
                HarnessError::Override(format!("expected path=value, got {:?}", s.as_ref()))
            })?;
            super::set_path(&mut v, path.trim(), super::parse_value(raw.trim()))?;
        }
        Self::from_value(v, self.base_dir.clone())
    }

    fn resolve(&self, p: &str) -> PathBuf {
        match &self.base_dir {
            Some(dir) if Path::new(p).is_relative() => dir.join(p),
            _ => PathBuf::from(p),
        }
    }

    fn build_graph(
        &self,
        spec: &GraphSpec,
        stream: SeedStream,
    ) -> Result<ForceGraph, HarnessError> {
        let seed = stream_seed(self.seed, stream);
        Ok(match spec {
            GraphSpec::KaryTree { branching, depth } => {
                build_complete_kary_tree(*branching, *depth)?
            }
            GraphSpec::ErdosRenyi { n, p } => build_erdos_renyi(*n, *p, seed)?,
            GraphSpec::FightingFish => build_fighting_fish(),
            GraphSpec::RandomGeometric { n, mean_degree } => {
                build_random_geometric(*n, *mean_degree, seed)?.0
            }
            GraphSpec::Edgeless { n } => build_edgeless(*n),
            GraphSpec::Path { n } => build_path(*n),
            GraphSpec::Complete { n } => build_complete(*n),
            GraphSpec::File { path } => load_graph(self.resolve(path))?,
        })
    }

    pub fn build_forces(&self) -> Result<BuiltForces, HarnessError> {
        let blue_graph = self.build_graph(&self.blue.graph, SeedStream::BlueGraph)?;
        let red_graph = self.build_graph(&self.red.graph, SeedStream::RedGraph)?;
        let (nb, nr) = (blue_graph.n(), red_graph.n());
        let in_range = |k: usize, n: usize| {
            if (1..=n).contains(&k) {
                Ok(k - 1)
            } else {
                Err(HarnessError::Config(format!(
                    "engagement node {k} outside 1..={n}"
                )))
            }
        };
        let engagement = match &self.engagement {
            EngagementSpec::SameIndex {
                same_index: [lo, hi],
            } => {
                let ks = (*lo..=*hi)
                    .map(|k| Ok((in_range(k, nb)?, in_range(k, nr)?)))
                    .collect::<Result<Vec<_>, HarnessError>>()?;
                EngagementMap::new(nb, nr, ks)?
            }
            EngagementSpec::Pairs { pairs } => {
                let ks = pairs
                    .iter()
                    .map(|[b, r]| Ok((in_range(*b, nb)?, in_range(*r, nr)?)))
                    .collect::<Result<Vec<_>, HarnessError>>()?;
                EngagementMap::new(nb, nr, ks)?
            }
            EngagementSpec::File { file } => load_engagement(self.resolve(file), nb, nr)?,
        };
        let blue_omega_seed = stream_seed(self.seed, SeedStream::BlueOmega);
        let red_omega_seed = stream_seed(self.seed, SeedStream::RedOmega);
        Ok(BuiltForces {
            omega_b: self.blue.omega.expand(nb, "blue.omega", blue_omega_seed)?,
            omega_r: self.red.omega.expand(nr, "red.omega", red_omega_seed)?,
            theta0_b: self.blue.theta0.expand(nb, "blue.theta0", 0)?,
            theta0_r: self.red.theta0.expand(nr, "red.theta0", 0)?,
            p0_b: self.blue.p0.expand(nb, "blue.p0", 0)?,
            p0_r: self.red.p0.expand(nr, "red.p0", 0)?,
            blue_graph,
            red_graph,
            engagement,
        })
    }

    /// Homogeneous-force view: each force's population is the sum of its
    /// per-node populations.
    pub fn global(&self) -> Result<GlobalScenario, HarnessError> {
        let f = self.build_forces()?;
        let scn = GlobalScenario {
            p_b0: f.p0_b.iter().sum(),
            p_r0: f.p0_r.iter().sum(),
            blue_graph: f.blue_graph,
            red_graph: f.red_graph,
            engagement: f.engagement,
            sigma_b: self.sigma_b,
            sigma_r: self.sigma_r,
            zeta_br: self.zeta_br,
            zeta_rb: self.zeta_rb,
            phi_br: self.phi_br,
            phi_rb: self.phi_rb,
            kappa_br: self.kappa_br,
            kappa_rb: self.kappa_rb,
            omega_b: f.omega_b,
            omega_r: f.omega_r,
            theta0_b: f.theta0_b,
            theta0_r: f.theta0_r,
            feedback: self.feedback,
            eps1: self.eps1,
            eps2: self.eps2,
        };
        scn.validate()?;
        Ok(scn)
    }

    pub fn networked(&self) -> Result<NetworkedScenario, HarnessError> {
        let f = self.build_forces()?;
        let cat = |a: Vec<f64>, b: Vec<f64>| a.into_iter().chain(b).collect::<Vec<_>>();
        let mut scn = NetworkedScenario::new(
            f.blue_graph,
            f.red_graph,
            f.engagement,
            cat(f.omega_b, f.omega_r),
            cat(f.theta0_b, f.theta0_r),
            cat(f.p0_b, f.p0_r),
        );
        scn.sigma_b = self.sigma_b;
        scn.sigma_r = self.sigma_r;
        scn.zeta_br = self.zeta_br;
        scn.zeta_rb = self.zeta_rb;
        scn.phi_br = self.phi_br;
        scn.phi_rb = self.phi_rb;
        scn.kappa_br = self.kappa_br;
        scn.kappa_rb = self.kappa_rb;
        scn.gamma_b = self.gamma_b;
        scn.gamma_r = self.gamma_r;
        scn.standing_force = self.standing_force;
        scn.feedback = self.net_feedback;
        scn.extinction_threshold = self.extinction_threshold.unwrap_or(self.eps1);
        scn.eps1 = self.eps1;
        scn.eps2 = self.eps2;
        scn.validate()?;
        Ok(scn)
    }

    /// Span-scaled defaults for `[0, t_final]` with the `[integrator]`
    /// overrides applied.
    pub fn integrator_settings(&self, t_final: f64) -> IntegratorSettings {
        let mut s = IntegratorSettings::for_span(t_final);
        let spec = &self.integrator;
        if let Some(r) = spec.rel_tol {
            s.rel_tol = r;
        }
        if let Some(a) = spec.abs_tol {
            s.abs_tol = a;
        }
        if let Some(n) = spec.output_samples {
            s.output_samples = n;
        }
        s
    }
}
