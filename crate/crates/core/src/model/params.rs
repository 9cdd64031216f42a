use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};

/// Electronic structure of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Donor and acceptor.
    #[serde(rename = "DA", alias = "da")]
    Da,
    /// Donor, two bridge sites and acceptor.
    #[serde(rename = "DBA", alias = "dba")]
    Dba,
}

impl ModelKind {
    pub fn n_sites(self) -> usize {
        match self {
            ModelKind::Da => 2,
            ModelKind::Dba => 4,
        }
    }

    pub fn site_labels(self) -> &'static [&'static str] {
        match self {
            ModelKind::Da => &["D", "A"],
            ModelKind::Dba => &["D", "B1", "B2", "A"],
        }
    }
}

pub const DEFAULT_DBA_SITE_ENERGIES: [f64; 4] = [5.0, 4.0, 3.0, 0.0];
/// Neighbouring sites are one unit of q apart, centred on the origin.
pub const DEFAULT_DBA_POSITIONS: [f64; 4] = [-1.5, -0.5, 0.5, 1.5];

/// Physical parameters of a DA or DBA system. Energies are in ħω and
/// `gamma_cfg` is a rate per oscillator period.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kind: ModelKind,
    /// Donor minus acceptor energy (DA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_e: Option<f64>,
    pub v: f64,
    /// Reorganization energy (DA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub kbt: f64,
    pub gamma_cfg: f64,
    pub n_levels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dba_site_energies: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dba_positions: Option<[f64; 4]>,
}

impl ModelParams {
    pub fn da(delta_e: f64, v: f64, lambda: f64, kbt: f64, gamma_cfg: f64, n_levels: usize) -> Result<Self> {
        let p = Self {
            kind: ModelKind::Da,
            delta_e: Some(delta_e),
            v,
            lambda: Some(lambda),
            kbt,
            gamma_cfg,
            n_levels,
            dba_site_energies: None,
            dba_positions: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// DBA system with the default site energies and positions.
    pub fn dba(v: f64, kbt: f64, gamma_cfg: f64, n_levels: usize) -> Result<Self> {
        let p = Self {
            kind: ModelKind::Dba,
            delta_e: None,
            v,
            lambda: None,
            kbt,
            gamma_cfg,
            n_levels,
            dba_site_energies: Some(DEFAULT_DBA_SITE_ENERGIES),
            dba_positions: Some(DEFAULT_DBA_POSITIONS),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                arg_err(format!("{name} must be finite, got {x}"))
            }
        };
        finite("v", self.v)?;
        finite("kbt", self.kbt)?;
        finite("gamma_cfg", self.gamma_cfg)?;
        if self.n_levels < 2 {
            return arg_err(format!("n_levels must be at least 2, got {}", self.n_levels));
        }
        if self.kbt <= 0.0 {
            return arg_err(format!("kbt must be positive, got {}", self.kbt));
        }
        if self.gamma_cfg < 0.0 {
            return arg_err(format!("gamma_cfg must be non-negative, got {}", self.gamma_cfg));
        }
        match self.kind {
            ModelKind::Da => {
                let (Some(de), Some(lam)) = (self.delta_e, self.lambda) else {
                    return arg_err("DA model needs delta_e and lambda");
                };
                finite("delta_e", de)?;
                finite("lambda", lam)?;
                if lam < 0.0 {
                    return arg_err(format!("lambda must be non-negative, got {lam}"));
                }
                if self.dba_site_energies.is_some() || self.dba_positions.is_some() {
                    return arg_err("dba_site_energies and dba_positions are only valid for the DBA model");
                }
            }
            ModelKind::Dba => {
                let (Some(eps), Some(pos)) = (self.dba_site_energies, self.dba_positions) else {
                    return arg_err("DBA model needs dba_site_energies and dba_positions");
                };
                if eps.iter().chain(&pos).any(|x| !x.is_finite()) {
                    return arg_err("DBA site energies and positions must be finite");
                }
                if self.delta_e.is_some() || self.lambda.is_some() {
                    return arg_err("delta_e and lambda are only valid for the DA model");
                }
            }
        }
        Ok(())
    }

    /// ΔE, or an error for the DBA model.
    pub fn delta_e(&self) -> Result<f64> {
        self.delta_e.ok_or_else(|| Error::Argument("delta_e is only defined for the DA model".into()))
    }

    /// Copy with a different ΔE (DA only).
    pub fn with_delta_e(&self, delta_e: f64) -> Result<Self> {
        if self.kind != ModelKind::Da {
            return arg_err("delta_e is only defined for the DA model");
        }
        let mut p = self.clone();
        p.delta_e = Some(delta_e);
        p.validate()?;
        Ok(p)
    }

    pub fn with_n_levels(&self, n_levels: usize) -> Result<Self> {
        let mut p = self.clone();
        p.n_levels = n_levels;
        p.validate()?;
        Ok(p)
    }
}

/// Named parameter sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    WeaklyCoupled,
    StronglyDamped,
    StronglyCoupled,
    HighTemperature,
    Dba,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::WeaklyCoupled,
        Preset::StronglyDamped,
        Preset::StronglyCoupled,
        Preset::HighTemperature,
        Preset::Dba,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::WeaklyCoupled => "weakly_coupled",
            Preset::StronglyDamped => "strongly_damped",
            Preset::StronglyCoupled => "strongly_coupled",
            Preset::HighTemperature => "high_temperature",
            Preset::Dba => "dba",
        }
    }

    /// ΔE at which the transfer rate peaks; `None` for the DBA system.
    pub fn peak_delta_e(self) -> Option<f64> {
        match self {
            Preset::WeaklyCoupled => Some(3.0),
            Preset::StronglyDamped => Some(2.0),
            Preset::StronglyCoupled => Some(4.4),
            Preset::HighTemperature => Some(20.0),
            Preset::Dba => None,
        }
    }

    /// Interaction duration (periods) at which repeated interaction has converged.
    pub fn converged_tau(self) -> f64 {
        match self {
            Preset::HighTemperature => 0.01,
            _ => 0.1,
        }
    }

    /// Parameters with ΔE set to the peak value.
    pub fn params(self) -> ModelParams {
        let p = match self {
            Preset::WeaklyCoupled => ModelParams::da(3.0, 0.1, 1.0, 1.0, 0.01, 16),
            Preset::StronglyDamped => {
                ModelParams::da(2.0, 0.1, 1.0, 1.0, 1.0 / std::f64::consts::TAU, 16)
            }
            Preset::StronglyCoupled => ModelParams::da(4.4, 1.0, 1.0, 1.0, 0.01, 16),
            Preset::HighTemperature => ModelParams::da(20.0, 0.1, 20.0, 2.0, 0.1, 32),
            Preset::Dba => ModelParams::dba(0.1, 1.0, 0.01, 16),
        };
        p.expect("preset parameters are valid")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown preset {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_presence_follows_kind() {
        let mut p = Preset::WeaklyCoupled.params();
        p.dba_positions = Some(DEFAULT_DBA_POSITIONS);
        assert!(p.validate().is_err());
        let mut q = Preset::Dba.params();
        q.delta_e = Some(1.0);
        assert!(q.validate().is_err());
        q.delta_e = None;
        q.dba_site_energies = None;
        assert!(q.validate().is_err());
    }

    #[test]
    fn ranges() {
        assert!(ModelParams::da(1.0, 0.1, 1.0, 0.0, 0.01, 16).is_err());
        assert!(ModelParams::da(1.0, 0.1, 1.0, 1.0, -0.01, 16).is_err());
        assert!(ModelParams::da(1.0, 0.1, -1.0, 1.0, 0.01, 16).is_err());
        assert!(ModelParams::da(1.0, 0.1, 1.0, 1.0, 0.01, 1).is_err());
        assert!(ModelParams::da(f64::NAN, 0.1, 1.0, 1.0, 0.01, 4).is_err());
    }

    #[test]
    fn preset_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("nope".parse::<Preset>().is_err());
    }
}
