//! Scenario files and their merge with command-line flags.

use std::path::Path;

use resotunnel::singularity::PotentialSign;
use resotunnel::{Complex64, ConstantSet, DeltaDoubleBarrier, EffectiveMass, RectDoubleBarrier};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Rect,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SignArg {
    Barrier,
    Well,
}

impl From<SignArg> for PotentialSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Barrier => PotentialSign::Barrier,
            SignArg::Well => PotentialSign::Well,
        }
    }
}

/// Every field is optional so that a file and the flags can each supply a
/// part. Field names double as the JSON keys.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u0r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u0i: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0i: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emax: Option<f64>,
    /// Fixed energy (cubic).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    /// Imaginary-part (or V0I) axis, for res-sweep, locus and cubic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_axis: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignArg>,
    /// Resonance ordinal (0 = lowest).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

macro_rules! overlay {
    ($self:ident, $other:ident, $($f:ident),*) => {
        $( if $other.$f.is_some() { $self.$f = $other.$f.clone(); } )*
    };
}

pub const DEFAULT_MASS: f64 = 0.067;

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read scenario {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid scenario {}: {e}", path.display())))
    }

    /// Fields set in `flags` replace those of `self`.
    pub fn overlay(mut self, flags: &Scenario) -> Self {
        overlay!(
            self, flags, structure, b, w, u0r, u0i, v0r, v0i, mass, constants, emin, emax,
            energy, imin, imax, points, log_axis, branch, sign, index, draws, seed, out
        );
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }

    pub fn structure(&self) -> Result<StructureKind, CliError> {
        self.structure.ok_or_else(|| missing("structure"))
    }

    pub fn mass_model(&self) -> Result<EffectiveMass, CliError> {
        let m = self.mass.unwrap_or(DEFAULT_MASS);
        EffectiveMass::with_constants(m, self.constants.unwrap_or_default())
            .map_err(|e| CliError::Usage(format!("mass: {e}")))
    }

    pub fn positive(&self, name: &str, v: Option<f64>) -> Result<f64, CliError> {
        let v = v.ok_or_else(|| missing(name))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn finite(&self, name: &str, v: Option<f64>) -> Result<f64, CliError> {
        let v = v.ok_or_else(|| missing(name))?;
        if !v.is_finite() {
            return Err(CliError::Usage(format!("{name} must be finite, got {v}")));
        }
        Ok(v)
    }

    pub fn rect(&self) -> Result<RectDoubleBarrier, CliError> {
        let b = self.positive("b", self.b)?;
        let w = self.positive("w", self.w)?;
        let u0r = self.finite("u0r", self.u0r)?;
        let u0i = self.finite("u0i", Some(self.u0i.unwrap_or(0.0)))?;
        RectDoubleBarrier::new(b, w, Complex64::new(u0r, u0i), self.mass_model()?)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn delta(&self) -> Result<DeltaDoubleBarrier, CliError> {
        let w = self.positive("w", self.w)?;
        let v0r = self.finite("v0r", self.v0r)?;
        let v0i = self.finite("v0i", Some(self.v0i.unwrap_or(0.0)))?;
        DeltaDoubleBarrier::new(w, Complex64::new(v0r, v0i), self.mass_model()?)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn points(&self) -> Result<usize, CliError> {
        let n = self.points.ok_or_else(|| missing("points"))?;
        if n < 2 {
            return Err(CliError::Usage(format!("points must be at least 2, got {n}")));
        }
        Ok(n)
    }

    /// Inclusive grid over `[lo, hi]`, log-spaced when `log_axis` is set.
    pub fn grid(&self, lo_name: &str, lo: Option<f64>, hi_name: &str, hi: Option<f64>) -> Result<Vec<f64>, CliError> {
        let lo = self.finite(lo_name, lo)?;
        let hi = self.finite(hi_name, hi)?;
        if !(hi > lo) {
            return Err(CliError::Usage(format!("{hi_name} ({hi}) must exceed {lo_name} ({lo})")));
        }
        let n = self.points()?;
        let log = self.log_axis.unwrap_or(false);
        if log && !(lo > 0.0) {
            return Err(CliError::Usage(format!("--log-axis needs {lo_name} > 0, got {lo}")));
        }
        let last = (n - 1) as f64;
        Ok((0..n)
            .map(|i| {
                if i == 0 {
                    return lo;
                }
                if i == n - 1 {
                    return hi;
                }
                let t = i as f64 / last;
                if log {
                    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
                } else {
                    (lo * (last - i as f64) + hi * i as f64) / last
                }
            })
            .collect())
    }
}

fn missing(name: &str) -> CliError {
    CliError::Usage(format!("missing required field '{name}' (scenario key or --{})", name.replace('_', "-")))
}
