//! Double delta barrier `V0·[δ(x + w/2) + δ(x − w/2)]`, the `b → 0`,
//! `U0·b = V0` limit of the rectangular double barrier.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TunnelError};
use crate::structure::DoubleBarrier;
use crate::units::{kinematics, EffectiveMass, Kinematics};
use crate::uvw::{check_divergence, UvwSplit};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaDoubleBarrier {
    w: f64,
    v0: Complex64,
    m: EffectiveMass,
}

/// Full scattering solution of the double delta barrier at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaScattering {
    pub d: Complex64,
    pub t: Complex64,
    /// Reflection amplitude for the centred potential.
    pub r: Complex64,
    /// Reflection amplitude with the deltas at `0` and `w`: `R·e^{ikw}`.
    pub r_shifted: Complex64,
    /// Absorption probability; negative under gain.
    pub absorption: f64,
    /// `2·sqrt(a)·V0`, dimensionless strength.
    pub alpha: Complex64,
}

impl DeltaScattering {
    pub fn t2(&self) -> f64 {
        self.t.norm_sqr()
    }
    pub fn r2(&self) -> f64 {
        self.r.norm_sqr()
    }
}

impl DeltaDoubleBarrier {
    pub fn new(w: f64, v0: Complex64, m: EffectiveMass) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(TunnelError::Domain(format!("well width w must be > 0, got {w}")));
        }
        if !v0.is_finite() {
            return Err(TunnelError::Domain(format!("delta strength must be finite, got {v0}")));
        }
        Ok(Self { w, v0, m })
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn v0(&self) -> Complex64 {
        self.v0
    }
    pub fn mass(&self) -> EffectiveMass {
        self.m
    }

    fn kin(&self, energy: f64) -> Result<Kinematics> {
        kinematics(energy, self.m)
    }

    /// `α = sqrt(2m/(ħ²E))·V0 = 2·sqrt(a)·V0`.
    pub fn alpha(&self, energy: f64) -> Result<Complex64> {
        Ok(2.0 * self.kin(energy)?.a.sqrt() * self.v0)
    }

    /// `D = 1 − a·V0²·(1 − e^{i2kw}) + 2i·sqrt(a)·V0`.
    pub fn d_of_k(&self, energy: f64) -> Result<Complex64> {
        let kin = self.kin(energy)?;
        let v0_sq = self.v0 * self.v0;
        let e2 = Complex64::from_polar(1.0, 2.0 * kin.k * self.w);
        Ok(1.0 - kin.a * v0_sq * (1.0 - e2) + 2.0 * I * kin.a.sqrt() * self.v0)
    }

    /// The same denominator in the trigonometric form
    /// `1 + a·V0²·(cos 2kw − 1) + i·sqrt(2m/(ħ²E))·V0 + i·a·V0²·sin 2kw`.
    pub fn d_of_k_trig(&self, energy: f64) -> Result<Complex64> {
        let kin = self.kin(energy)?;
        let v0_sq = self.v0 * self.v0;
        let (s, c) = (2.0 * kin.k * self.w).sin_cos();
        let root = (1.0 / (kin.h2m * energy)).sqrt();
        Ok(1.0 + kin.a * v0_sq * (c - 1.0) + I * root * self.v0 + I * kin.a * v0_sq * s)
    }

    /// `U = 1 − a·V0²`, `V = 2·sqrt(a)·V0`, `W = a·V0²`.
    pub fn uvw(&self, energy: f64) -> Result<UvwSplit> {
        let kin = self.kin(energy)?;
        let (re, im) = (self.v0.re, self.v0.im);
        let diff = re * re - im * im;
        let cross = 2.0 * kin.a * re * im;
        let sa = kin.a.sqrt();
        Ok(UvwSplit::new(
            Complex64::new(1.0 - kin.a * diff, -cross),
            Complex64::new(2.0 * sa * re, 2.0 * sa * im),
            Complex64::new(kin.a * diff, cross),
        ))
    }

    /// `(M, N)` from the general extremal condition with this structure's
    /// `U, V, W`.
    pub fn mn(&self, energy: f64) -> Result<(f64, f64)> {
        Ok(self.uvw(energy)?.mn())
    }

    /// `(M, N)` transcribed term by term from the expanded polynomial form.
    /// Kept to check the expansion against [`DeltaDoubleBarrier::mn`].
    pub fn mn_expanded(&self, energy: f64) -> Result<(f64, f64)> {
        let a = self.kin(energy)?.a;
        let a32 = a * a.sqrt();
        let (r, i) = (self.v0.re, self.v0.im);
        let diff = r * r - i * i;
        let m = 2.0 * a * a * r * i * diff - 2.0 * a * r * i + 4.0 * a32 * r * i * i
            - 2.0 * a * a * r * i * diff
            + 2.0 * a32 * r * diff;
        let n = 4.0 * a32 * i * r * r + a * diff - a * a * diff * diff - 2.0 * a32 * i * diff
            - 4.0 * (a * r * i).powi(2);
        Ok((m, n))
    }

    /// The real factor in square brackets of the resonant denominator.
    pub fn resonance_bracket(&self, energy: f64) -> Result<f64> {
        let a = self.kin(energy)?.a;
        let sa = a.sqrt();
        let (r, i) = (self.v0.re, self.v0.im);
        let x = 1.0 - a * (r * r - i * i) - 2.0 * sa * i;
        let y = 2.0 * sa * r - 2.0 * a * r * i;
        let den = x.hypot(y);
        if den == 0.0 {
            return Err(TunnelError::SingularInput(format!(
                "resonant denominator radical vanishes at E = {energy} eV"
            )));
        }
        Ok(1.0 - a * (r * r + i * i) / den)
    }

    /// `D_res = (1 + i·sqrt(a)·V0)²·[bracket]`.
    pub fn d_res(&self, energy: f64) -> Result<Complex64> {
        let a = self.kin(energy)?.a;
        let f = 1.0 + I * a.sqrt() * self.v0;
        Ok(f * f * self.resonance_bracket(energy)?)
    }

    /// Reflection amplitude of the centred potential and of the potential
    /// shifted to `δ(x) + δ(x − w)`.
    pub fn reflection(&self, energy: f64) -> Result<(Complex64, Complex64)> {
        let kin = self.kin(energy)?;
        let alpha = 2.0 * kin.a.sqrt() * self.v0;
        let kw = kin.k * self.w;
        let (ep, em) = (Complex64::from_polar(1.0, kw), Complex64::from_polar(1.0, -kw));
        let num = alpha * ((alpha - 2.0 * I) * em - (alpha + 2.0 * I) * ep);
        let den = alpha * alpha * (ep * ep - 1.0) + 4.0 * I * alpha + 4.0;
        let scale = 4.0 + alpha.norm_sqr() * 2.0 + 4.0 * alpha.norm();
        let den = check_divergence(den, scale)?;
        let r = num / den;
        Ok((r, r * ep))
    }

    /// Absorption `A = 2·(1 + Re{R·e^{ikw}}) / (1 − ħ²k/(2m·V0I))`.
    ///
    /// The expression is 0/0 on the line `V0I = h2m·k`; within `1e-8` of it
    /// the equivalent `1 − |T|² − |R|²` is returned instead.
    pub fn absorption(&self, energy: f64) -> Result<f64> {
        let v0i = self.v0.im;
        if v0i == 0.0 {
            return Ok(0.0);
        }
        let kin = self.kin(energy)?;
        let (r, r_shifted) = self.reflection(energy)?;
        let den = 1.0 - kin.h2m * kin.k / v0i;
        if den.abs() < 1e-8 {
            let t = self.transmission_amplitude(energy)?;
            return Ok(1.0 - t.norm_sqr() - r.norm_sqr());
        }
        Ok(2.0 * (1.0 + r_shifted.re) / den)
    }

    pub fn scatter(&self, energy: f64) -> Result<DeltaScattering> {
        let uvw = self.uvw(energy)?;
        let d = self.d_of_k(energy)?;
        let t = check_divergence(d, uvw.scale())?.inv();
        let (r, r_shifted) = self.reflection(energy)?;
        Ok(DeltaScattering {
            d,
            t,
            r,
            r_shifted,
            absorption: self.absorption(energy)?,
            alpha: self.alpha(energy)?,
        })
    }
}

impl DoubleBarrier for DeltaDoubleBarrier {
    fn well_width(&self) -> f64 {
        self.w
    }
    fn mass(&self) -> EffectiveMass {
        self.m
    }
    fn uvw(&self, energy: f64) -> Result<UvwSplit> {
        DeltaDoubleBarrier::uvw(self, energy)
    }
    fn d_of_k(&self, energy: f64) -> Result<Complex64> {
        DeltaDoubleBarrier::d_of_k(self, energy)
    }
    fn im_pot(&self) -> f64 {
        self.v0.im
    }
    fn re_pot(&self) -> f64 {
        self.v0.re
    }
    fn with_im_pot(&self, im_pot: f64) -> Self {
        Self { v0: Complex64::new(self.v0.re, im_pot), ..*self }
    }
    fn with_well_width(&self, w: f64) -> Self {
        Self { w, ..*self }
    }
    /// Ground level of the infinite square well of width `w`.
    fn energy_scale(&self) -> f64 {
        std::f64::consts::PI.powi(2) * self.m.h2m() / (self.w * self.w)
    }
    fn transmission_phase(&self, _energy: f64) -> Result<f64> {
        Ok(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3(v0i: f64) -> DeltaDoubleBarrier {
        DeltaDoubleBarrier::new(3.0, Complex64::new(2.3, v0i), EffectiveMass::gaas()).unwrap()
    }

    #[test]
    fn zero_strength_is_transparent() {
        let s = DeltaDoubleBarrier::new(2.0, Complex64::new(0.0, 0.0), EffectiveMass::gaas())
            .unwrap();
        assert_eq!(s.d_of_k(0.3).unwrap(), Complex64::new(1.0, 0.0));
        let uvw = s.uvw(0.3).unwrap();
        assert_eq!((uvw.u, uvw.v, uvw.w), (1.0.into(), 0.0.into(), 0.0.into()));
        assert_eq!(s.mn(0.3).unwrap(), (0.0, 0.0));
        assert_eq!(s.reflection(0.3).unwrap().0, Complex64::new(0.0, 0.0));
        assert_eq!(s.absorption(0.3).unwrap(), 0.0);
    }

    #[test]
    fn u_plus_w_is_one() {
        let uvw = fig3(0.37).uvw(0.61).unwrap();
        assert!((uvw.u + uvw.w - 1.0).norm() < 1e-15);
    }

    #[test]
    fn uvw_reproduces_d() {
        for &(v0i, e) in &[(0.0, 0.2), (0.5131, 0.4622), (-0.8, 1.7)] {
            let s = fig3(v0i);
            let from_uvw = DoubleBarrier::d_of_k(&s, e).unwrap();
            let direct = s.d_of_k(e).unwrap();
            assert!((from_uvw - direct).norm() < 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn trig_form_matches_exponential_form() {
        for &(v0i, e) in &[(0.0, 0.2), (0.5131, 0.4622), (-0.8, 1.7)] {
            let s = fig3(v0i);
            let a = s.d_of_k(e).unwrap();
            let b = s.d_of_k_trig(e).unwrap();
            assert!((a - b).norm() < 1e-13 * a.norm().max(1.0));
        }
    }

    #[test]
    fn expanded_mn_matches_general_form() {
        for &(v0i, e) in &[(0.2, 0.3), (0.5131, 0.4622), (-1.1, 0.9)] {
            let s = fig3(v0i);
            let (m, n) = s.mn(e).unwrap();
            let (m2, n2) = s.mn_expanded(e).unwrap();
            let scale = m.abs().max(n.abs());
            assert!((m - m2).abs() < 1e-12 * scale);
            assert!((n - n2).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn closed_resonant_form_matches_general_one() {
        for &(v0i, e) in &[(0.0, 0.46), (0.3, 0.47), (-0.4, 0.5), (0.5131, 0.4622)] {
            let s = fig3(v0i);
            let closed = s.d_res(e).unwrap();
            let general = s.uvw(e).unwrap().d_res().unwrap();
            assert!((closed - general).norm() < 1e-12 * general.norm().max(1.0));
        }
    }

    #[test]
    fn real_strength_has_unit_resonant_denominator() {
        for &e in &[0.1, 0.4675, 1.3] {
            assert!((fig3(0.0).d_res(e).unwrap().norm() - 1.0).abs() < 1e-14);
        }
        assert!(fig3(-0.2).d_res(0.47).unwrap().norm() > 1.0);
    }

    #[test]
    fn absorption_sign_follows_imaginary_part() {
        let e = 0.47;
        assert!(fig3(-0.3).absorption(e).unwrap() > 0.0);
        assert!(fig3(0.3).absorption(e).unwrap() < 0.0);
        assert_eq!(fig3(0.0).absorption(e).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_width() {
        assert!(DeltaDoubleBarrier::new(0.0, Complex64::new(1.0, 0.0), EffectiveMass::gaas())
            .is_err());
    }
}
