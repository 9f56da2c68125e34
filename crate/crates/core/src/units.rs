//! Unit system and kinematic quantities.
//!
//! Energies are in eV, lengths in nm, delta strengths in nm·eV and masses are
//! ratios to the free-electron rest mass. Every formula goes through
//! `h2m = ħ²/(2m)` in eV·nm² instead of raw `ħ` and `m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TunnelError};

/// CODATA 2018 reduced Planck constant, J·s.
pub const HBAR_CODATA: f64 = 1.054_571_817e-34;
/// CODATA 2018 electron rest mass, kg.
pub const M0_CODATA: f64 = 9.109_383_701_5e-31;
/// Elementary charge (exact since 2019), C.
pub const E_CHARGE_CODATA: f64 = 1.602_176_634e-19;

/// Three-digit textbook values (ħ = 1.0546e-34 J·s, m0 = 9.11e-31 kg,
/// e = 1.6e-19 C); see [`ConstantSet::Rounded`].
pub const HBAR_ROUNDED: f64 = 1.0546e-34;
pub const M0_ROUNDED: f64 = 9.11e-31;
pub const E_CHARGE_ROUNDED: f64 = 1.6e-19;

const fn hbar_sq_over_2m0(hbar: f64, m0: f64, charge: f64) -> f64 {
    // J·m² -> eV·nm²
    hbar * hbar / (2.0 * m0) / charge * 1e18
}

/// ħ²/(2m0) in eV·nm² from CODATA values (≈ 0.0380998).
pub const H2M0: f64 = hbar_sq_over_2m0(HBAR_CODATA, M0_CODATA, E_CHARGE_CODATA);

/// ħ²/(2m0) in eV·nm² from the rounded constants (≈ 0.0381511).
pub const H2M0_ROUNDED: f64 = hbar_sq_over_2m0(HBAR_ROUNDED, M0_ROUNDED, E_CHARGE_ROUNDED);

/// Which set of fundamental constants backs `ħ²/(2m0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantSet {
    #[default]
    Codata,
    /// Three-digit constants. The bundled reference scenarios (71.917 μeV,
    /// 0.1194 eV, 0.5131 nm·eV, 0.4622 eV, 0.71 nm·eV) assume this set.
    Rounded,
}

impl ConstantSet {
    pub fn h2m0(self) -> f64 {
        match self {
            ConstantSet::Codata => H2M0,
            ConstantSet::Rounded => H2M0_ROUNDED,
        }
    }
}

impl std::str::FromStr for ConstantSet {
    type Err = TunnelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "codata" => Ok(ConstantSet::Codata),
            "rounded" => Ok(ConstantSet::Rounded),
            other => Err(TunnelError::Domain(format!(
                "unknown constant set '{other}' (expected codata|rounded)"
            ))),
        }
    }
}

/// Effective mass as a ratio to m0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveMass {
    m_rel: f64,
    #[serde(default)]
    constants: ConstantSet,
}

impl EffectiveMass {
    pub fn new(m_rel: f64) -> Result<Self> {
        Self::with_constants(m_rel, ConstantSet::Codata)
    }

    pub fn with_constants(m_rel: f64, constants: ConstantSet) -> Result<Self> {
        if !(m_rel > 0.0) || !m_rel.is_finite() {
            return Err(TunnelError::Domain(format!(
                "effective mass must be positive and finite, got {m_rel}"
            )));
        }
        Ok(Self { m_rel, constants })
    }

    /// GaAs-like conduction band mass, 0.067 m0.
    pub fn gaas() -> Self {
        Self { m_rel: 0.067, constants: ConstantSet::Codata }
    }

    pub fn m_rel(&self) -> f64 {
        self.m_rel
    }

    pub fn constants(&self) -> ConstantSet {
        self.constants
    }

    /// ħ²/(2m) in eV·nm².
    pub fn h2m(&self) -> f64 {
        self.constants.h2m0() / self.m_rel
    }
}

/// ħ²/(2m) for the given effective mass, eV·nm².
pub fn h2m(m: EffectiveMass) -> f64 {
    m.h2m()
}

/// Free-particle quantities at energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub energy: f64,
    /// Wavenumber, 1/nm.
    pub k: f64,
    /// `m/(2ħ²E) = 1/(4·h2m·E)`, 1/(eV²·nm²).
    pub a: f64,
    pub h2m: f64,
}

pub fn kinematics(energy: f64, m: EffectiveMass) -> Result<Kinematics> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(TunnelError::Domain(format!(
            "energy must be positive (scattering states only), got {energy}"
        )));
    }
    let h2m = m.h2m();
    Ok(Kinematics {
        energy,
        k: (energy / h2m).sqrt(),
        a: 1.0 / (4.0 * h2m * energy),
        h2m,
    })
}

/// Principal square root with the cut on the negative real axis approached
/// from above: `-x + 0i` and `-x - 0i` both map to `+i·sqrt(x)`.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    // -0.0 + 0.0 == +0.0
    Complex64::new(z.re, z.im + 0.0).sqrt()
}

/// Inside-barrier quantities for barrier height `U0` at energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierKinematics {
    pub kin: Kinematics,
    pub kappa: Complex64,
    pub delta: Complex64,
    pub sigma_sq: Complex64,
}

impl BarrierKinematics {
    /// Same kinematics with `kappa` replaced by an arbitrary root of `kappa²`.
    /// Used to check that observables do not depend on the branch.
    pub fn with_kappa(kin: Kinematics, kappa: Complex64) -> Result<Self> {
        let k = kin.k;
        if kappa == Complex64::new(0.0, 0.0) {
            return Err(TunnelError::SingularKinematics { energy: kin.energy });
        }
        let delta = (kappa * kappa - k * k) / (kappa * k);
        Ok(Self { kin, kappa, delta, sigma_sq: delta * delta + 4.0 })
    }
}

pub fn barrier_kinematics(
    energy: f64,
    u0: Complex64,
    m: EffectiveMass,
) -> Result<BarrierKinematics> {
    let kin = kinematics(energy, m)?;
    let kappa = principal_sqrt((u0 - energy) / kin.h2m);
    BarrierKinematics::with_kappa(kin, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2m0_pinned_from_codata() {
        // ħ² / (2 m0) with ħ = 1.054571817e-34, m0 = 9.1093837015e-31,
        // e = 1.602176634e-19, converted J·m² -> eV·nm² (CODATA 2018 set).
        assert!((H2M0 - 0.038_099_821_114_859_61).abs() < 1e-16);
        assert!((H2M0 - 0.0380998).abs() < 1e-7);
        assert!((H2M0_ROUNDED - 0.038_151_110_043_907_8).abs() < 1e-15);
    }

    #[test]
    fn h2m_examples() {
        let unit = EffectiveMass::new(1.0).unwrap();
        assert!((h2m(unit) - 0.0380998).abs() < 1e-7);
        let gaas = EffectiveMass::gaas();
        assert!((h2m(gaas) - 0.568654).abs() < 1e-6);
        let heavy = EffectiveMass::new(1e300).unwrap();
        assert!(h2m(heavy) < 1e-300);
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(EffectiveMass::new(0.0).is_err());
        assert!(EffectiveMass::new(-0.1).is_err());
        assert!(EffectiveMass::new(f64::NAN).is_err());
    }

    #[test]
    fn kinematics_examples() {
        let m = EffectiveMass::gaas();
        let kin = kinematics(m.h2m(), m).unwrap();
        assert!((kin.k - 1.0).abs() < 1e-15);

        let kin = kinematics(0.4622, m).unwrap();
        assert!((kin.k - (0.4622f64 / 0.568654).sqrt()).abs() < 1e-6);
        assert!((kin.k - 0.9015).abs() < 1e-4);
        let v0i = (kin.h2m * kin.energy).sqrt();
        assert!((kin.a.sqrt() * v0i - 0.5).abs() < 1e-15);
        assert!(((kin.k * v0i - kin.energy) / kin.energy).abs() < 1e-14);

        assert!(kinematics(0.0, m).is_err());
        assert!(kinematics(-1.0, m).is_err());
    }

    #[test]
    fn barrier_kinematics_examples() {
        let m = EffectiveMass::gaas();
        let bk = barrier_kinematics(0.1194, Complex64::new(0.7, 0.0), m).unwrap();
        assert!(bk.kappa.im == 0.0);
        assert!((bk.kappa.re - (0.5806f64 / 0.568654).sqrt()).abs() < 1e-6);
        assert!((bk.kappa.re - 1.0104).abs() < 1e-4);

        let bk = barrier_kinematics(0.5, Complex64::new(0.5, -1e-30), m).unwrap();
        assert!(bk.kappa.norm() < 1e-14);
        assert!(bk.delta.is_finite());

        let bk = barrier_kinematics(1.0, Complex64::new(0.5, 0.0), m).unwrap();
        assert_eq!(bk.kappa.re, 0.0);
        assert!(bk.kappa.im > 0.0);
        let bk = barrier_kinematics(1.0, Complex64::new(0.5, -0.0), m).unwrap();
        assert!(bk.kappa.im > 0.0);

        let err = barrier_kinematics(0.7, Complex64::new(0.7, 0.0), m).unwrap_err();
        assert!(matches!(err, TunnelError::SingularKinematics { .. }));
    }

    #[test]
    fn sigma_sq_is_delta_sq_plus_four() {
        let m = EffectiveMass::gaas();
        let bk = barrier_kinematics(0.3, Complex64::new(0.2, 0.13), m).unwrap();
        assert_eq!(bk.sigma_sq, bk.delta * bk.delta + 4.0);
    }
}
