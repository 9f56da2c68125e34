use num_complex::Complex64;

use crate::error::Result;
use crate::units::{kinematics, EffectiveMass};
use crate::uvw::{check_divergence, UvwSplit};

/// A symmetric double-barrier structure whose transmission denominator has
/// the `U + W·e^{i2kw} + iV` form.
pub trait DoubleBarrier: Clone + Send + Sync {
    fn well_width(&self) -> f64;
    fn mass(&self) -> EffectiveMass;
    fn uvw(&self, energy: f64) -> Result<UvwSplit>;

    /// Imaginary part of the barrier potential (eV or nm·eV).
    fn im_pot(&self) -> f64;
    /// Real part of the barrier potential (eV or nm·eV).
    fn re_pot(&self) -> f64;
    fn with_im_pot(&self, im_pot: f64) -> Self;
    fn with_well_width(&self, w: f64) -> Self;

    /// Energy that sets the default resonance search window.
    fn energy_scale(&self) -> f64;

    /// Phase of `T` relative to `1/D`.
    fn transmission_phase(&self, energy: f64) -> Result<f64>;

    fn phase(&self, energy: f64) -> Result<f64> {
        Ok(2.0 * kinematics(energy, self.mass())?.k * self.well_width())
    }

    fn d_of_k(&self, energy: f64) -> Result<Complex64> {
        Ok(self.uvw(energy)?.d(self.phase(energy)?))
    }

    /// `T = e^{iθ}/D`; reports a divergence when `D` vanishes.
    fn transmission_amplitude(&self, energy: f64) -> Result<Complex64> {
        let s = self.uvw(energy)?;
        let d = check_divergence(s.d(self.phase(energy)?), s.scale())?;
        Ok(Complex64::from_polar(1.0, self.transmission_phase(energy)?) / d)
    }

    fn transmission_probability(&self, energy: f64) -> Result<f64> {
        Ok(self.transmission_amplitude(energy)?.norm_sqr())
    }
}
