//! Random-draw comparison of the closed forms against the transfer-matrix
//! oracle.
//!
//! Draws come from a seeded ChaCha stream, so a report is reproducible from
//! `(draws, seed)`. Parameter ranges: `b, w ∈ (0, 10]` nm, `Re U0 ∈ [−2, 2]`
//! eV, `Im U0 ∈ [−1, 1]` eV, `E ∈ (0, 2]` eV; delta strengths use the same
//! ranges in nm·eV.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::delta::DeltaDoubleBarrier;
use crate::error::Result;
use crate::oracle::{absorption_direct, scatter_delta, scatter_rect, tm_scatter, delta_regions};
use crate::rect::RectDoubleBarrier;
use crate::structure::DoubleBarrier;
use crate::units::EffectiveMass;

/// Amplitude agreement required between closed forms and the oracle.
pub const AMPLITUDE_TOL: f64 = 1e-10;
/// Required accuracy of `|T|² + |R|² + A = 1` and of the two absorption
/// evaluations.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Draws with `|D|` below this are skipped (too close to a singularity).
pub const MIN_ABS_D: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Rect,
    Delta,
}

/// Deliberate defects for checking that the comparison can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Evaluate the closed-form `D` as `U + W·e^{i2kw} − iV`.
    FlipVSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheckConfig {
    pub draws: usize,
    pub seed: u64,
    pub mass: EffectiveMass,
    pub mutation: Mutation,
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        Self { draws: 1000, seed: 0x5eed, mass: EffectiveMass::gaas(), mutation: Mutation::None }
    }
}

/// Worst-case disagreement for one draw.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DrawErrors {
    pub rel_t: f64,
    pub rel_r: f64,
    pub unitarity: f64,
    /// Closed-form absorption against the direct boundary-value evaluation
    /// (delta family only).
    pub absorption: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    /// Draws per structure family.
    pub draws: usize,
    pub seed: u64,
    pub skipped: usize,
    #[serde(rename = "max_rel_err_T")]
    pub max_rel_err_t: f64,
    #[serde(rename = "max_rel_err_R")]
    pub max_rel_err_r: f64,
    pub max_abs_err_unitarity: f64,
    pub max_abs_err_absorption: f64,
    pub pass: bool,
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// `(0, hi]`, drawn as `hi − [0, hi)`.
fn positive(rng: &mut ChaCha8Rng, hi: f64) -> f64 {
    hi - rng.gen_range(0.0..hi)
}

pub fn draw_rect(rng: &mut ChaCha8Rng, m: EffectiveMass) -> (RectDoubleBarrier, f64) {
    let b = positive(rng, 10.0);
    let w = positive(rng, 10.0);
    let u0 = Complex64::new(uniform(rng, -2.0, 2.0), uniform(rng, -1.0, 1.0));
    let e = positive(rng, 2.0);
    (RectDoubleBarrier::new(b, w, u0, m).expect("drawn geometry is valid"), e)
}

pub fn draw_delta(rng: &mut ChaCha8Rng, m: EffectiveMass) -> (DeltaDoubleBarrier, f64) {
    let w = positive(rng, 10.0);
    let v0 = Complex64::new(uniform(rng, -2.0, 2.0), uniform(rng, -1.0, 1.0));
    let e = positive(rng, 2.0);
    (DeltaDoubleBarrier::new(w, v0, m).expect("drawn geometry is valid"), e)
}

/// Relative amplitude error, measured against the larger of the two oracle
/// amplitudes so that a vanishing `R` does not inflate it.
fn rel_err(analytic: Complex64, oracle: Complex64, scale: f64) -> f64 {
    (analytic - oracle).norm() / scale
}

fn mutated_t<S: DoubleBarrier>(s: &S, energy: f64, mutation: Mutation) -> Result<Complex64> {
    match mutation {
        Mutation::None => s.transmission_amplitude(energy),
        Mutation::FlipVSign => {
            let uvw = s.uvw(energy)?;
            let phase = s.phase(energy)?;
            let d = uvw.u + uvw.w * Complex64::from_polar(1.0, phase)
                - Complex64::new(0.0, 1.0) * uvw.v;
            Ok(Complex64::from_polar(1.0, s.transmission_phase(energy)?) / d)
        }
    }
}

/// Compare one rectangular draw. `Ok(None)` when the draw is skipped.
pub fn compare_rect(
    s: &RectDoubleBarrier,
    energy: f64,
    mutation: Mutation,
) -> Result<Option<DrawErrors>> {
    let d = s.d_of_k(energy)?;
    if d.norm() < MIN_ABS_D {
        return Ok(None);
    }
    let oracle = scatter_rect(s, energy)?;
    let t = mutated_t(s, energy, mutation)?;
    let r = s.reflection(energy)?;
    let scale = oracle.t.norm().max(oracle.r.norm());
    let a = 1.0 - t.norm_sqr() - r.norm_sqr();
    Ok(Some(DrawErrors {
        rel_t: rel_err(t, oracle.t, scale),
        rel_r: rel_err(r, oracle.r, scale),
        unitarity: (t.norm_sqr() + r.norm_sqr() + a - 1.0).abs(),
        absorption: (a - oracle.absorption()).abs(),
    }))
}

/// Compare one delta draw. `Ok(None)` when the draw is skipped.
pub fn compare_delta(
    s: &DeltaDoubleBarrier,
    energy: f64,
    mutation: Mutation,
) -> Result<Option<DrawErrors>> {
    let d = s.d_of_k(energy)?;
    if d.norm() < MIN_ABS_D {
        return Ok(None);
    }
    let (regions, x0) = delta_regions(s, true);
    let centred = tm_scatter(&regions, x0, energy, s.mass())?;
    let shifted = scatter_delta(s, energy)?;
    let sc = s.scatter(energy)?;
    let t = mutated_t(s, energy, mutation)?;
    let scale = centred.t.norm().max(centred.r.norm());
    let rel_r = rel_err(sc.r, centred.r, scale).max(rel_err(sc.r_shifted, shifted.r, scale));
    let direct = absorption_direct(s, energy)?;
    Ok(Some(DrawErrors {
        rel_t: rel_err(t, centred.t, scale),
        rel_r,
        unitarity: (t.norm_sqr() + sc.r2() + sc.absorption - 1.0).abs(),
        absorption: (sc.absorption - direct).abs(),
    }))
}

fn run_family(
    family: Family,
    cfg: &OracleCheckConfig,
    rng: &mut ChaCha8Rng,
    report: &mut OracleReport,
) -> Result<()> {
    for _ in 0..cfg.draws {
        let errs = match family {
            Family::Rect => {
                let (s, e) = draw_rect(rng, cfg.mass);
                compare_rect(&s, e, cfg.mutation)
            }
            Family::Delta => {
                let (s, e) = draw_delta(rng, cfg.mass);
                compare_delta(&s, e, cfg.mutation)
            }
        };
        match errs {
            Ok(Some(e)) => {
                report.max_rel_err_t = report.max_rel_err_t.max(e.rel_t);
                report.max_rel_err_r = report.max_rel_err_r.max(e.rel_r);
                report.max_abs_err_unitarity = report.max_abs_err_unitarity.max(e.unitarity);
                report.max_abs_err_absorption = report.max_abs_err_absorption.max(e.absorption);
            }
            Ok(None) => report.skipped += 1,
            Err(err) if err.is_divergent() => report.skipped += 1,
            Err(err) => return Err(err),
        }
    }
    Ok(())
}

/// Run `cfg.draws` draws for each structure family.
pub fn oracle_check(cfg: &OracleCheckConfig) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = OracleReport {
        draws: cfg.draws,
        seed: cfg.seed,
        skipped: 0,
        max_rel_err_t: 0.0,
        max_rel_err_r: 0.0,
        max_abs_err_unitarity: 0.0,
        max_abs_err_absorption: 0.0,
        pass: false,
    };
    run_family(Family::Rect, cfg, &mut rng, &mut report)?;
    run_family(Family::Delta, cfg, &mut rng, &mut report)?;
    report.pass = report.max_rel_err_t < AMPLITUDE_TOL
        && report.max_rel_err_r < AMPLITUDE_TOL
        && report.max_abs_err_unitarity < UNITARITY_TOL
        && report.max_abs_err_absorption < UNITARITY_TOL;
    Ok(report)
}
