//! The `U`, `V`, `W` decomposition shared by both barrier families.
//!
//! `D(k) = U + W·e^{i·2kw} + i·V`. Everything about the extremal condition
//! in the well width follows from this form. Writing `P = U + iV` and
//! `Q = conj(P)·W = N − iM`, the extrema of `|D|²` in `w` sit where
//! `Im(Q·e^{iφ}) = 0` and the minima (resonances) where additionally
//! `Re(Q·e^{iφ}) < 0`. At a minimum `D = P·(1 − |W|/|P|)`.

use num_complex::Complex64;

use crate::error::{Result, TunnelError};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex `U`, `V`, `W`. The real/imaginary accessors are views.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvwSplit {
    pub u: Complex64,
    pub v: Complex64,
    pub w: Complex64,
}

impl UvwSplit {
    pub fn new(u: Complex64, v: Complex64, w: Complex64) -> Self {
        Self { u, v, w }
    }

    pub fn u_r(&self) -> f64 {
        self.u.re
    }
    pub fn u_i(&self) -> f64 {
        self.u.im
    }
    pub fn v_r(&self) -> f64 {
        self.v.re
    }
    pub fn v_i(&self) -> f64 {
        self.v.im
    }
    pub fn w_r(&self) -> f64 {
        self.w.re
    }
    pub fn w_i(&self) -> f64 {
        self.w.im
    }

    /// `U + iV` as a complex number.
    pub fn p(&self) -> Complex64 {
        self.u + I * self.v
    }

    /// `D` for a given phase `φ = 2kw`.
    pub fn d(&self, phase: f64) -> Complex64 {
        self.u + self.w * Complex64::from_polar(1.0, phase) + I * self.v
    }

    /// `U² + V² − (1 + W)²`, zero for the rectangular barrier.
    pub fn identity_residual(&self) -> Complex64 {
        let one_w = self.w + 1.0;
        self.u * self.u + self.v * self.v - one_w * one_w
    }

    /// Numerator `M` and denominator `N` of `tan(2kw) = M/N`.
    pub fn mn(&self) -> (f64, f64) {
        let (ur, ui, vr, vi, wr, wi) =
            (self.u_r(), self.u_i(), self.v_r(), self.v_i(), self.w_r(), self.w_i());
        let m = -ur * wi + vi * wi + ui * wr + vr * wr;
        let n = ur * wr - vi * wr + ui * wi + vr * wi;
        (m, n)
    }

    /// `(N·sin φ − M·cos φ)/sqrt(M² + N²)`, or `None` when `M = N = 0`.
    pub fn extremal_residual(&self, phase: f64) -> Option<f64> {
        let (m, n) = self.mn();
        let r = m.hypot(n);
        if r == 0.0 || !r.is_finite() {
            return None;
        }
        let (s, c) = phase.sin_cos();
        Some((n * s - m * c) / r)
    }

    /// `(N·cos φ + M·sin φ)/sqrt(M² + N²)`: `−1` at a transmission maximum,
    /// `+1` at a minimum.
    pub fn extremal_curvature(&self, phase: f64) -> Option<f64> {
        let (m, n) = self.mn();
        let r = m.hypot(n);
        if r == 0.0 || !r.is_finite() {
            return None;
        }
        let (s, c) = phase.sin_cos();
        Some((n * c + m * s) / r)
    }

    /// The real factor `1 − |W|/|U + iV|` of the resonant denominator.
    pub fn resonance_bracket(&self) -> Result<f64> {
        let p_re = self.u_r() - self.v_i();
        let p_im = self.v_r() + self.u_i();
        let den = p_re.hypot(p_im);
        if den == 0.0 {
            return Err(TunnelError::SingularInput(
                "(U_R − V_I)² + (V_R + U_I)² vanishes".into(),
            ));
        }
        Ok(1.0 - self.w_r().hypot(self.w_i()) / den)
    }

    /// `D` at resonance: `(U + iV)·[1 − |W|/|U + iV|]`.
    pub fn d_res(&self) -> Result<Complex64> {
        Ok(self.p() * self.resonance_bracket()?)
    }

    /// Characteristic magnitude of the terms that sum to `D`; used to judge
    /// when `|D|` is zero to working precision.
    pub fn scale(&self) -> f64 {
        self.p().norm() + self.w.norm()
    }
}

/// Relative size of `|D|` (against [`UvwSplit::scale`]) below which the
/// transmission is reported as divergent.
pub const DIVERGENCE_REL: f64 = 1e-9;

pub(crate) fn check_divergence(d: Complex64, scale: f64) -> Result<Complex64> {
    let d_abs = d.norm();
    if d_abs <= DIVERGENCE_REL * scale.max(1.0) || !d_abs.is_normal() {
        return Err(TunnelError::Divergent { d_abs });
    }
    Ok(d)
}
