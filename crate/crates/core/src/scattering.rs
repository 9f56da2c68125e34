use num_complex::Complex64;
use serde::Serialize;

use crate::delta::DeltaDoubleBarrier;
use crate::error::Result;
use crate::rect::RectDoubleBarrier;
use crate::structure::DoubleBarrier;

/// Amplitudes and probabilities at one energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub t: Complex64,
    pub r: Complex64,
    pub t2: f64,
    pub r2: f64,
    /// Absorption probability (negative under gain).
    pub absorption: f64,
}

impl ScatteringResult {
    fn new(t: Complex64, r: Complex64, absorption: f64) -> Self {
        Self { t, r, t2: t.norm_sqr(), r2: r.norm_sqr(), absorption }
    }
}

/// Scattering by the double delta barrier, all from closed forms.
pub fn scatter_delta(spec: &DeltaDoubleBarrier, energy: f64) -> Result<ScatteringResult> {
    let s = spec.scatter(energy)?;
    Ok(ScatteringResult::new(s.t, s.r, s.absorption))
}

/// Scattering by the rectangular double barrier (centred potential), with
/// `A = 1 − |T|² − |R|²`.
pub fn scatter_rect_barrier(spec: &RectDoubleBarrier, energy: f64) -> Result<ScatteringResult> {
    let t = spec.transmission_amplitude(energy)?;
    let r = spec.reflection(energy)?;
    Ok(ScatteringResult::new(t, r, 1.0 - t.norm_sqr() - r.norm_sqr()))
}
