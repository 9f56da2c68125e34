//! Symmetric rectangular double barrier: two barriers of width `b` and
//! complex height `U0`, separated by a well of width `w`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TunnelError};
use crate::structure::DoubleBarrier;
use crate::units::{barrier_kinematics, kinematics, BarrierKinematics, EffectiveMass};
use crate::uvw::{check_divergence, UvwSplit};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RectDoubleBarrier {
    b: f64,
    w: f64,
    u0: Complex64,
    m: EffectiveMass,
}

impl RectDoubleBarrier {
    pub fn new(b: f64, w: f64, u0: Complex64, m: EffectiveMass) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(TunnelError::Domain(format!("barrier width b must be > 0, got {b}")));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(TunnelError::Domain(format!("well width w must be > 0, got {w}")));
        }
        if !u0.is_finite() {
            return Err(TunnelError::Domain(format!("barrier height must be finite, got {u0}")));
        }
        Ok(Self { b, w, u0, m })
    }

    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn u0(&self) -> Complex64 {
        self.u0
    }
    pub fn mass(&self) -> EffectiveMass {
        self.m
    }

    pub fn barrier_kinematics(&self, energy: f64) -> Result<BarrierKinematics> {
        barrier_kinematics(energy, self.u0, self.m)
    }

    /// `U, V, W` for an explicit choice of `kappa`. Any root of `kappa²`
    /// gives the same result.
    pub fn uvw_from(&self, bk: &BarrierKinematics) -> Result<UvwSplit> {
        let kb = bk.kappa * self.b;
        let (ch, sh) = (kb.cosh(), kb.sinh());
        let (ch2, sh2) = (ch * ch, sh * sh);
        let u = ch2 - bk.delta * bk.delta / 4.0 * sh2;
        let v = bk.delta * ch * sh;
        let w = bk.sigma_sq / 4.0 * sh2;
        if !(u.is_finite() && v.is_finite() && w.is_finite()) {
            return Err(TunnelError::Overflow(format!(
                "U, V, W overflow for κb = {kb} at E = {} eV",
                bk.kin.energy
            )));
        }
        Ok(UvwSplit::new(u, v, w))
    }

    pub fn uvw(&self, energy: f64) -> Result<UvwSplit> {
        self.uvw_from(&self.barrier_kinematics(energy)?)
    }

    /// Resonance condition `tan(2kw) = M/N` at energy `E`.
    pub fn mn(&self, energy: f64) -> Result<(f64, f64)> {
        Ok(self.uvw(energy)?.mn())
    }

    /// `D` at resonance, valid for any complex `U0`:
    /// `(U + iV)·[1 − sqrt((W_R² + W_I²)/((U_R − V_I)² + (V_R + U_I)²))]`.
    pub fn d_res(&self, energy: f64) -> Result<Complex64> {
        self.uvw(energy)?.d_res()
    }

    /// Resonant `D` for a strictly real barrier,
    /// `(1 − ¼δ²tanh²(κb) + iδ·tanh(κb)) / (1 + ¼δ²tanh²(κb))`, with unit
    /// modulus.
    pub fn d_res_real(&self, energy: f64) -> Result<Complex64> {
        if self.u0.im != 0.0 {
            return Err(TunnelError::Domain(format!(
                "real-potential resonance form needs Im U0 = 0, got {}",
                self.u0.im
            )));
        }
        let bk = self.barrier_kinematics(energy)?;
        let x = bk.delta * (bk.kappa * self.b).tanh();
        let x2 = x * x / 4.0;
        Ok((1.0 - x2 + I * x) / (1.0 + x2))
    }

    /// Reflection amplitude of the centred structure, built from the
    /// single-barrier amplitudes by summing the multiple reflections in the
    /// well.
    pub fn reflection(&self, energy: f64) -> Result<Complex64> {
        let bk = self.barrier_kinematics(energy)?;
        let (k, kappa) = (bk.kin.k, bk.kappa);
        let kb = kappa * self.b;
        let (ch, sh) = (kb.cosh(), kb.sinh());
        let eta = (kappa * kappa + k * k) / (kappa * k);
        let den1 = 2.0 * ch + I * bk.delta * sh;
        // single barrier on [0, b]: r = −iη·sinh/(2cosh + iδ·sinh),
        // t = 2e^{−ikb}/(2cosh + iδ·sinh)
        let r1 = -I * eta * sh / den1;
        let t1 = Complex64::from_polar(2.0, -k * self.b) / den1;
        let x0 = -self.w / 2.0 - self.b;
        let phase = |x: f64| Complex64::from_polar(1.0, 2.0 * k * x);
        let round_trip = 1.0 - r1 * r1 * phase(self.w);
        let uvw = self.uvw_from(&bk)?;
        // round_trip·(2cosh + iδ·sinh)² = 4·D, so share the divergence test
        check_divergence(round_trip * den1 * den1 / 4.0, uvw.scale())?;
        let r = r1 * phase(x0) + t1 * t1 * r1 * phase(x0 + self.b + self.w) / round_trip;
        if !r.is_finite() {
            return Err(TunnelError::Overflow(format!(
                "reflection amplitude overflow for κb = {kb} at E = {energy} eV"
            )));
        }
        Ok(r)
    }
}

impl DoubleBarrier for RectDoubleBarrier {
    fn well_width(&self) -> f64 {
        self.w
    }
    fn mass(&self) -> EffectiveMass {
        self.m
    }
    fn uvw(&self, energy: f64) -> Result<UvwSplit> {
        RectDoubleBarrier::uvw(self, energy)
    }
    fn im_pot(&self) -> f64 {
        self.u0.im
    }
    fn re_pot(&self) -> f64 {
        self.u0.re
    }
    fn with_im_pot(&self, im_pot: f64) -> Self {
        Self { u0: Complex64::new(self.u0.re, im_pot), ..*self }
    }
    fn with_well_width(&self, w: f64) -> Self {
        Self { w, ..*self }
    }
    fn energy_scale(&self) -> f64 {
        self.u0.re.abs()
    }
    /// `T = e^{−i2kb}/D`.
    fn transmission_phase(&self, energy: f64) -> Result<f64> {
        Ok(-2.0 * kinematics(energy, self.m)?.k * self.b)
    }
}
