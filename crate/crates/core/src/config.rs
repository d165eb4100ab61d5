//! Experiment configuration: a flat TOML document.

use std::f64::consts::{SQRT_2, TAU};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::noise::{NoiseParams, NoiseScaleLap};
use crate::recon::TruncationRule;
use crate::sources::AnalyticSource;

/// Source selector: a built-in analytic source or a gridded CSV file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    S1,
    S1Saddle,
    S2,
    S3,
    Gridded,
}

impl SourceKind {
    pub fn analytic(self) -> Option<AnalyticSource> {
        match self {
            SourceKind::S1 => Some(AnalyticSource::S1),
            SourceKind::S1Saddle => Some(AnalyticSource::S1Saddle),
            SourceKind::S2 => Some(AnalyticSource::S2),
            SourceKind::S3 => Some(AnalyticSource::S3),
            SourceKind::Gridded => None,
        }
    }

    /// Whether the H1 error is meaningful (smooth sources only).
    pub fn is_smooth(self) -> bool {
        matches!(self, SourceKind::S1 | SourceKind::S1Saddle | SourceKind::S3)
    }
}

/// How the exact gradient in the H1 error is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactGradient {
    #[default]
    FiniteDifference,
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: SourceKind,
    /// CSV with columns `x1, x2, value` when `source = "gridded"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_file: Option<PathBuf>,
    /// Side of `V0 = (-a/2, a/2)^2`.
    pub a: f64,
    /// Measurement radius.
    #[serde(rename = "R")]
    pub r: f64,
    /// Propagation radius.
    pub rho: f64,
    /// Number of measurement angles.
    pub n_m: usize,
    pub theta_max: f64,
    pub out_angle_count: usize,
    pub lambda: f64,
    pub n_max: usize,
    pub delta: f64,
    pub seed: u64,
    #[serde(serialize_with = "ser_rule", deserialize_with = "de_rule")]
    pub truncation: TruncationRule,
    pub quad_points_per_side: usize,
    pub eval_points_per_side: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_scale: Option<f64>,
    #[serde(default)]
    pub noise_scale_lap: NoiseScaleLap,
    #[serde(default)]
    pub exact_gradient: ExactGradient,
    pub output_dir: PathBuf,
    /// Measurement cache; defaults to `<output_dir>/data`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_dir: Option<PathBuf>,
}

fn ser_rule<S: Serializer>(r: &TruncationRule, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        TruncationRule::Paper => s.serialize_str("paper"),
        TruncationRule::Alt => s.serialize_str("alt"),
        TruncationRule::Fixed(n) => s.serialize_u64(*n as u64),
    }
}

fn de_rule<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<TruncationRule, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Name(String),
        Fixed(u64),
    }
    match Raw::deserialize(d)? {
        Raw::Name(s) if s == "paper" => Ok(TruncationRule::Paper),
        Raw::Name(s) if s == "alt" => Ok(TruncationRule::Alt),
        Raw::Name(s) => Err(serde::de::Error::custom(format!("unknown truncation rule `{s}` (paper, alt or an integer)"))),
        Raw::Fixed(n) => Ok(TruncationRule::Fixed(n as usize)),
    }
}

impl ExperimentConfig {
    /// Example 1: the smooth source on the unit square.
    pub fn example1() -> Self {
        Self {
            source: SourceKind::S1,
            source_file: None,
            a: 1.0,
            r: 0.8,
            rho: 2.0,
            n_m: 200,
            theta_max: TAU,
            out_angle_count: 200,
            lambda: 1e-3,
            n_max: 60,
            delta: 0.1,
            seed: 1,
            truncation: TruncationRule::Paper,
            quad_points_per_side: 201,
            eval_points_per_side: 201,
            k_scale: None,
            noise_scale_lap: NoiseScaleLap::LapU,
            exact_gradient: ExactGradient::FiniteDifference,
            output_dir: PathBuf::from("out/example1"),
            data_dir: None,
        }
    }

    /// Example 2: the discontinuous source.
    pub fn example2() -> Self {
        Self { source: SourceKind::S2, output_dir: PathBuf::from("out/example2"), ..Self::example1() }
    }

    /// Example 3: the Gaussian mixture on `[-3, 3]^2`, full aperture.
    pub fn example3() -> Self {
        Self {
            source: SourceKind::S3,
            a: 6.0,
            r: 5.0,
            rho: 6.0,
            output_dir: PathBuf::from("out/example3"),
            ..Self::example1()
        }
    }

    pub fn example(id: u32) -> Result<Self> {
        match id {
            1 => Ok(Self::example1()),
            2 => Ok(Self::example2()),
            3 => Ok(Self::example3()),
            _ => Err(Error::Config(format!("no preset for example {id} (1, 2 or 3)"))),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.a > 0.0 && self.a.is_finite()) {
            return bad(format!("a must be positive, got {}", self.a));
        }
        let half_diag = self.a * SQRT_2 / 2.0;
        if !(self.r > half_diag) {
            return bad(format!("R = {} must exceed a sqrt(2)/2 = {half_diag}", self.r));
        }
        if !(self.rho > self.r) {
            return bad(format!("rho = {} must exceed R = {}", self.rho, self.r));
        }
        let c = TAU / self.a;
        if !(self.lambda > 0.0 && c * self.lambda < 0.5) {
            return bad(format!("lambda = {} violates 0 < (2pi/a) lambda < 1/2", self.lambda));
        }
        if !(self.theta_max > 0.0 && self.theta_max <= TAU) {
            return bad(format!("theta_max = {} must lie in (0, 2pi]", self.theta_max));
        }
        if self.n_m == 0 || self.out_angle_count == 0 {
            return bad("angle counts must be positive".into());
        }
        if self.quad_points_per_side < 2 || self.eval_points_per_side < 2 {
            return bad("grids need at least 2 points per side".into());
        }
        if let Some(s) = self.k_scale {
            if !(s > 0.0 && s.is_finite()) {
                return bad(format!("k_scale must be positive, got {s}"));
            }
        }
        if self.source == SourceKind::Gridded && self.source_file.is_none() {
            return bad("source = \"gridded\" requires source_file".into());
        }
        if self.source != SourceKind::Gridded && self.source_file.is_some() {
            return bad("source_file is only used with source = \"gridded\"".into());
        }
        if self.truncation == TruncationRule::Fixed(0) {
            return bad("fixed truncation order must be at least 1".into());
        }
        self.noise()?;
        Ok(())
    }

    pub fn noise(&self) -> Result<NoiseParams> {
        Ok(NoiseParams::new(self.delta, self.seed)
            .map_err(|e| Error::Config(e.to_string()))?
            .with_scale_lap(self.noise_scale_lap))
    }

    /// Whether the measurement arc is the full circle.
    pub fn full_aperture(&self) -> bool {
        (self.theta_max - TAU).abs() <= 8.0 * f64::EPSILON
    }

    /// Hash of everything that determines the simulated measurements.
    /// Noise level, seed and truncation are applied afterwards and excluded.
    pub fn simulation_hash(&self) -> String {
        let key = serde_json::json!({
            "source": self.source,
            "source_file": self.source_file,
            "a": self.a,
            "R": self.r,
            "n_m": self.n_m,
            "theta_max": self.theta_max,
            "lambda": self.lambda,
            "quad_points_per_side": self.quad_points_per_side,
            "k_scale": self.k_scale,
        });
        short_hash(&key.to_string())
    }

    /// Hash of the whole configuration except the output location.
    pub fn config_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        let m = v.as_object_mut().unwrap();
        m.remove("output_dir");
        m.remove("data_dir");
        short_hash(&v.to_string())
    }

    pub fn data_dir(&self) -> PathBuf {
        self.data_dir.clone().unwrap_or_else(|| self.output_dir.join("data"))
    }
}

fn short_hash(s: &str) -> String {
    hex::encode(&Sha256::digest(s.as_bytes())[..8])
}
