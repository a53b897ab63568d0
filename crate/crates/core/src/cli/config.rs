//! `key = value` run configuration with `[section]` headers.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::exponents::{AggregateOptions, EnvelopeKind, LPolicy, LPolicyKind, Q1Treatment};
use crate::quadfield::{Field, CLASS_NUMBER_ONE};

const KNOWN_KEYS: &[&str] = &[
    "field.D",
    "precision.tail_tolerance",
    "precision.zeta_precision",
    "precision.max_norm_cutoff",
    "eisenstein.t",
    "eisenstein.points",
    "supnorm.t_grid",
    "supnorm.grid_n",
    "supnorm.r_min",
    "supnorm.r_max",
    "supnorm.exponent_max",
    "supnorm.doubling_shift_max",
    "aggregate.t_f_grid",
    "aggregate.t_g",
    "aggregate.t_k",
    "aggregate.policy",
    "aggregate.delta",
    "aggregate.density_exponent",
    "aggregate.q1_treatment",
    "aggregate.kind",
    "aggregate.epsilon",
    "aggregate.slope_band",
    "subconvexity.grid",
    "subconvexity.t_k",
    "subconvexity.density_exponent",
    "subconvexity.q1_treatment",
    "subconvexity.e_grid",
    "subconvexity.band",
    "coefficients.path",
    "verify.seed",
    "verify.automorphy_cases",
    "verify.automorphy_t_max",
    "verify.automorphy_fields",
    "verify.q1_grid_n",
    "verify.q1_random_points",
    "verify.scattering_t_max",
    "verify.scattering_t_step",
    "verify.scattering_fields",
    "verify.watson_grid",
    "verify.mellin_lambdas",
    "verify.mellin_orders",
];

/// Raw `section.key → (value, line)` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<RawConfig> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("malformed section header {line:?}"),
                })?;
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got {line:?}"),
            })?;
            let key = if section.is_empty() {
                k.trim().to_string()
            } else {
                format!("{section}.{}", k.trim())
            };
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown key {key:?}"),
                });
            }
            if entries
                .insert(key.clone(), (v.trim().to_string(), line_no))
                .is_some()
            {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate key {key:?}"),
                });
            }
        }
        Ok(RawConfig { entries })
    }

    fn get(&self, key: &str) -> Option<&(String, usize)> {
        self.entries.get(key)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| Error::Parse {
                line: *line,
                message: format!("cannot parse {key} = {v:?}"),
            }),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>> {
        match self.get(key) {
            None => Ok(default),
            Some((v, line)) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse().map_err(|_| Error::Parse {
                        line: *line,
                        message: format!("cannot parse {s:?} in {key}"),
                    })
                })
                .collect(),
        }
    }

    fn band(&self, key: &str, default: (f64, f64)) -> Result<(f64, f64)> {
        let v = self.list(key, vec![default.0, default.1])?;
        match v.as_slice() {
            [lo, hi] if lo <= hi => Ok((*lo, *hi)),
            _ => Err(Error::InvalidArgument(format!("{key} must be `low, high`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupnormConfig {
    pub t_grid: Vec<f64>,
    pub grid_n: usize,
    pub r_range: (f64, f64),
    pub exponent_max: f64,
    pub doubling_shift_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateConfig {
    pub t_f_grid: Vec<f64>,
    /// `None`: `t_g = t_f` co-varied.
    pub t_g: Option<f64>,
    pub t_k: f64,
    pub policy: LPolicy,
    pub options: AggregateOptions,
    pub slope_band: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubconvexityConfig {
    pub grid: Vec<f64>,
    pub t_k: f64,
    pub options: AggregateOptions,
    pub e_grid: Vec<f64>,
    pub band: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub automorphy_cases: usize,
    pub automorphy_t_max: f64,
    pub automorphy_fields: Vec<i64>,
    pub q1_grid_n: usize,
    pub q1_random_points: usize,
    pub scattering_t_max: f64,
    pub scattering_t_step: f64,
    pub scattering_fields: Vec<i64>,
    pub watson_grid: Vec<f64>,
    pub mellin_lambdas: Vec<f64>,
    pub mellin_orders: Vec<f64>,
}

/// Validated settings for every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub field: Field,
    pub tail_tolerance: f64,
    pub zeta_precision: f64,
    pub max_norm_cutoff: u64,
    pub eval_t: f64,
    pub points: Vec<(f64, f64, f64)>,
    pub supnorm: SupnormConfig,
    pub aggregate: AggregateConfig,
    pub subconvexity: SubconvexityConfig,
    pub verify: VerifyConfig,
    pub coefficients_path: Option<PathBuf>,
}

fn treatment(s: &str) -> Result<Q1Treatment> {
    match s {
        "exact" => Ok(Q1Treatment::Exact),
        "trivial" => Ok(Q1Treatment::TrivialBound),
        other => Err(Error::InvalidArgument(format!(
            "q1_treatment {other:?} is not `exact` or `trivial`"
        ))),
    }
}

fn points(raw: &RawConfig) -> Result<Vec<(f64, f64, f64)>> {
    let Some((v, line)) = raw.get("eisenstein.points") else {
        return Ok(vec![(0.1, 0.2, 1.1)]);
    };
    let bad = || Error::Parse {
        line: *line,
        message: format!("points must be `x y r; x y r; ...`, got {v:?}"),
    };
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|p| {
            let c: Vec<f64> = p
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            match c.as_slice() {
                [x, y, r] => Ok((*x, *y, *r)),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n == 0 {
        return vec![lo];
    }
    let top = lo + step * n as f64;
    (0..=n)
        .map(|i| lo + (top - lo) * i as f64 / n as f64)
        .collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<RunConfig> {
        let field = Field::new(raw.parsed("field.D", -1i64)?)?;
        let policy_kind = match raw.parsed("aggregate.policy", "glh".to_string())?.as_str() {
            "glh" => LPolicyKind::Glh,
            "convexity" => LPolicyKind::Convexity,
            "subconvex" => LPolicyKind::Subconvex,
            other => return Err(Error::InvalidArgument(format!("unknown policy {other:?}"))),
        };
        let policy = LPolicy {
            kind: policy_kind,
            exponent_delta: raw.parsed("aggregate.delta", 0.001)?,
        }
        .validated()?;
        let t_g = match raw.get("aggregate.t_g") {
            None => None,
            Some((v, _)) if v == "co-varied" => None,
            Some(_) => Some(raw.parsed("aggregate.t_g", 0.0)?),
        };
        let eps = raw.parsed("aggregate.epsilon", 0.1)?;
        let aggregate = AggregateConfig {
            t_f_grid: raw.list("aggregate.t_f_grid", vec![50.0, 100.0, 200.0, 400.0])?,
            t_g,
            t_k: raw.parsed("aggregate.t_k", 1.0)?,
            policy,
            options: AggregateOptions {
                density_exponent: raw.parsed("aggregate.density_exponent", 0.0)?,
                q1_treatment: treatment(
                    &raw.parsed("aggregate.q1_treatment", "trivial".to_string())?,
                )?,
                kind: raw
                    .parsed::<String>("aggregate.kind", "cusp".into())?
                    .parse::<EnvelopeKind>()?,
                epsilon: eps,
            },
            slope_band: raw.band("aggregate.slope_band", (-1.7, -1.3))?,
        };
        let subconvexity = SubconvexityConfig {
            grid: raw.list("subconvexity.grid", vec![50.0, 100.0, 200.0, 400.0])?,
            t_k: raw.parsed("subconvexity.t_k", 1.0)?,
            options: AggregateOptions {
                density_exponent: raw.parsed("subconvexity.density_exponent", 0.0)?,
                q1_treatment: treatment(
                    &raw.parsed("subconvexity.q1_treatment", "trivial".to_string())?,
                )?,
                kind: EnvelopeKind::Cusp,
                epsilon: eps,
            },
            e_grid: raw.list("subconvexity.e_grid", range(0.0, 0.3, 0.025))?,
            band: raw.band("subconvexity.band", (0.115, 0.135))?,
        };
        let all_fields = CLASS_NUMBER_ONE.to_vec();
        let verify = VerifyConfig {
            seed: raw.parsed("verify.seed", 20240601u64)?,
            automorphy_cases: raw.parsed("verify.automorphy_cases", 10usize)?,
            automorphy_t_max: raw.parsed("verify.automorphy_t_max", 20.0)?,
            automorphy_fields: raw.list("verify.automorphy_fields", vec![-1, -3])?,
            q1_grid_n: raw.parsed("verify.q1_grid_n", 20usize)?,
            q1_random_points: raw.parsed("verify.q1_random_points", 100_000usize)?,
            scattering_t_max: raw.parsed("verify.scattering_t_max", 100.0)?,
            scattering_t_step: raw.parsed("verify.scattering_t_step", 0.5)?,
            scattering_fields: raw.list("verify.scattering_fields", all_fields)?,
            watson_grid: raw.list("verify.watson_grid", vec![0.0, 2.5, 5.0])?,
            mellin_lambdas: raw.list("verify.mellin_lambdas", vec![1.0, 2.0, 3.0])?,
            mellin_orders: raw.list("verify.mellin_orders", vec![0.0, 1.0, 2.0])?,
        };
        let cfg = RunConfig {
            field,
            tail_tolerance: raw.parsed("precision.tail_tolerance", 1e-10)?,
            zeta_precision: raw.parsed("precision.zeta_precision", 1e-12)?,
            max_norm_cutoff: raw.parsed(
                "precision.max_norm_cutoff",
                crate::eisenstein::DEFAULT_MAX_NORM_CUTOFF,
            )?,
            eval_t: raw.parsed("eisenstein.t", 3.0)?,
            points: points(raw)?,
            supnorm: SupnormConfig {
                t_grid: raw.list("supnorm.t_grid", range(20.0, 200.0, 20.0))?,
                grid_n: raw.parsed("supnorm.grid_n", 10usize)?,
                r_range: (
                    raw.parsed("supnorm.r_min", 0.8)?,
                    raw.parsed("supnorm.r_max", 2.0)?,
                ),
                exponent_max: raw.parsed("supnorm.exponent_max", 1.1)?,
                doubling_shift_max: raw.parsed("supnorm.doubling_shift_max", 0.05)?,
            },
            aggregate,
            subconvexity,
            verify,
            coefficients_path: raw.get("coefficients.path").map(|(v, _)| PathBuf::from(v)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let inv = |m: String| Err(Error::InvalidArgument(m));
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance <= 1e-4) {
            return inv(format!(
                "tail_tolerance {} outside (0, 1e-4]",
                self.tail_tolerance
            ));
        }
        if !(self.zeta_precision > 0.0 && self.zeta_precision <= 1e-6) {
            return inv(format!(
                "zeta_precision {} outside (0, 1e-6]",
                self.zeta_precision
            ));
        }
        for d in self
            .verify
            .automorphy_fields
            .iter()
            .chain(&self.verify.scattering_fields)
        {
            Field::new(*d)?;
        }
        if self.verify.scattering_t_step <= 0.0 || self.verify.scattering_t_max <= 0.0 {
            return inv("scattering grid needs positive t_max and step".into());
        }
        if self.verify.q1_grid_n < 2 {
            return inv("q1_grid_n must be at least 2".into());
        }
        if !(self.aggregate.t_k > 0.0 && self.subconvexity.t_k > 0.0) {
            return inv("t_k must be positive".into());
        }
        if let Some(t_g) = self.aggregate.t_g {
            if !(t_g > 0.0) {
                return inv(format!("t_g = {t_g} must be positive"));
            }
        }
        Ok(())
    }

    /// Inclusive `t` grid of the scattering check.
    pub fn scattering_grid(&self) -> Vec<f64> {
        let v = &self.verify;
        range(v.scattering_t_step, v.scattering_t_max, v.scattering_t_step)
    }
}
