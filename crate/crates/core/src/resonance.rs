//! Resonance search.
//!
//! A resonance is an energy where `|D|²` is minimal with respect to the well
//! width: `tan(2kw) = M/N` together with `sin(2kw) = −M/sqrt(M² + N²)`.
//! Candidates come from sign changes of the normalised residual on a uniform
//! energy grid and are refined by bisection.

use log::{debug, warn};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TunnelError};
use crate::structure::DoubleBarrier;
use crate::units::kinematics;
use crate::uvw::{UvwSplit, DIVERGENCE_REL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceResult {
    /// Resonant energy, eV.
    pub energy: f64,
    pub d_res: Complex64,
    /// `1/|D_res|²`; infinite when `divergent` is set.
    pub t_res_sq: f64,
    pub divergent: bool,
    /// Ordinal within the search window, 0 = lowest.
    pub index: usize,
    /// Normalised residual at `energy`.
    pub residual: f64,
    /// `1 − |W|/|U + iV|`, the real factor of `D_res`.
    pub bracket: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceOptions {
    pub grid_points: usize,
    /// Absolute bisection tolerance on the energy, eV.
    pub energy_tol: f64,
    /// Half-width of the well-width probe used to confirm a minimum, nm.
    pub w_probe: f64,
}

impl Default for ResonanceOptions {
    fn default() -> Self {
        Self { grid_points: 2000, energy_tol: 1e-12, w_probe: 1e-6 }
    }
}

/// Largest accepted normalised residual at a refined root.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Search window used when the caller gives none.
pub fn default_window<S: DoubleBarrier>(s: &S) -> (f64, f64) {
    let scale = s.energy_scale();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    (1e-3 * scale, 3.0 * scale.max(1.0))
}

/// `U, V, W`, retrying once with `E` nudged by one part in 10⁹ when `E`
/// sits exactly on a real barrier height.
fn uvw_nudged<S: DoubleBarrier>(s: &S, energy: f64) -> Result<(f64, UvwSplit)> {
    match s.uvw(energy) {
        Err(TunnelError::SingularKinematics { .. }) => {
            let e = energy * (1.0 + 1e-9);
            Ok((e, s.uvw(e)?))
        }
        other => Ok((energy, other?)),
    }
}

/// `N·sin(2kw) − M·cos(2kw)` without normalisation.
pub fn raw_resonance_residual<S: DoubleBarrier>(s: &S, energy: f64) -> Result<f64> {
    let (e, uvw) = uvw_nudged(s, energy)?;
    let (m, n) = uvw.mn();
    let (sin, cos) = s.phase(e)?.sin_cos();
    Ok(n * sin - m * cos)
}

/// `(N·sin(2kw) − M·cos(2kw))/sqrt(M² + N²)`; zero on the resonance
/// condition. Returns 0 when `M = N = 0` (no barrier); see
/// [`is_degenerate`].
pub fn resonance_residual<S: DoubleBarrier>(s: &S, energy: f64) -> Result<f64> {
    let (e, uvw) = uvw_nudged(s, energy)?;
    Ok(uvw.extremal_residual(s.phase(e)?).unwrap_or_else(|| {
        debug!("degenerate resonance condition (M = N = 0) at E = {e}");
        0.0
    }))
}

pub fn is_degenerate<S: DoubleBarrier>(s: &S, energy: f64) -> Result<bool> {
    let (_, uvw) = uvw_nudged(s, energy)?;
    let (m, n) = uvw.mn();
    Ok(m == 0.0 && n == 0.0)
}

/// `|sin(2kw) + M/sqrt(M² + N²)|`, zero when the resonant sign is selected.
pub fn sign_selection_mismatch<S: DoubleBarrier>(s: &S, energy: f64) -> Result<f64> {
    let (e, uvw) = uvw_nudged(s, energy)?;
    let (m, n) = uvw.mn();
    Ok((s.phase(e)?.sin() + m / m.hypot(n)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Extremum {
    Maximum,
    Minimum,
}

/// Classify a refined root by the sign selection and, independently, by
/// probing `|D|²` at `w ± h`.
fn classify<S: DoubleBarrier>(s: &S, energy: f64, probe: f64) -> Result<Option<Extremum>> {
    let (e, uvw) = uvw_nudged(s, energy)?;
    let phase = s.phase(e)?;
    let Some(curv) = uvw.extremal_curvature(phase) else {
        return Ok(None);
    };
    let by_sign = if curv < 0.0 { Extremum::Maximum } else { Extremum::Minimum };

    let dphi = 2.0 * kinematics(e, s.mass())?.k * probe;
    let centre = uvw.d(phase).norm_sqr();
    let lo = uvw.d(phase - dphi).norm_sqr();
    let hi = uvw.d(phase + dphi).norm_sqr();
    let by_probe = if centre <= lo && centre <= hi {
        Some(Extremum::Maximum)
    } else if centre >= lo && centre >= hi {
        Some(Extremum::Minimum)
    } else {
        None
    };
    match by_probe {
        Some(p) if p == by_sign => Ok(Some(by_sign)),
        _ => {
            warn!(
                "resonance candidate at E = {e} eV discarded: sign selection says {by_sign:?}, \
                 w-probe says {by_probe:?}"
            );
            Ok(None)
        }
    }
}

fn bisect<F>(f: F, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(TunnelError::SolverFailure { lo, hi, reason: "bisection iteration limit".into() })
}

/// Resonant `D` and transmission at an already located resonance.
pub fn resonance_at<S: DoubleBarrier>(s: &S, energy: f64, index: usize) -> Result<ResonanceResult> {
    let (e, uvw) = uvw_nudged(s, energy)?;
    let bracket = uvw.resonance_bracket()?;
    let d_res = uvw.p() * bracket;
    let residual = uvw.extremal_residual(s.phase(e)?).unwrap_or(0.0);
    let divergent = d_res.norm() <= DIVERGENCE_REL * uvw.scale().max(1.0);
    let t_res_sq = if divergent { f64::INFINITY } else { 1.0 / d_res.norm_sqr() };
    Ok(ResonanceResult { energy: e, d_res, t_res_sq, divergent, index, residual, bracket })
}

/// Refine a sign change of the residual on `[lo, hi]` and classify it.
fn refine<S: DoubleBarrier>(
    s: &S,
    lo: f64,
    hi: f64,
    r_lo: f64,
    opts: &ResonanceOptions,
) -> Result<Option<f64>> {
    let root = bisect(|e| resonance_residual(s, e), lo, hi, r_lo, opts.energy_tol)?;
    let residual = resonance_residual(s, root)?;
    if residual.abs() > RESIDUAL_TOL {
        return Err(TunnelError::SolverFailure {
            lo,
            hi,
            reason: format!("residual {residual:e} at refined root (discontinuity?)"),
        });
    }
    Ok(match classify(s, root, opts.w_probe)? {
        Some(Extremum::Maximum) => Some(root),
        _ => None,
    })
}

/// Resonances in `[e_min, e_max]`, ascending, at most `max_count` (lowest
/// kept).
pub fn find_resonances<S: DoubleBarrier>(
    s: &S,
    e_min: f64,
    e_max: f64,
    max_count: usize,
) -> Result<Vec<ResonanceResult>> {
    find_resonances_with(s, e_min, e_max, max_count, &ResonanceOptions::default())
}

pub fn find_resonances_with<S: DoubleBarrier>(
    s: &S,
    e_min: f64,
    e_max: f64,
    max_count: usize,
    opts: &ResonanceOptions,
) -> Result<Vec<ResonanceResult>> {
    if !(e_min > 0.0 && e_max > e_min && e_max.is_finite()) {
        return Err(TunnelError::Domain(format!(
            "search window must satisfy 0 < E_min < E_max, got ({e_min}, {e_max})"
        )));
    }
    let n = opts.grid_points.max(2);
    let step = (e_max - e_min) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| e_min + step * i as f64).collect();
    let values = grid.iter().map(|&e| resonance_residual(s, e)).collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for i in 0..n - 1 {
        if roots.len() >= max_count {
            break;
        }
        let (r0, r1) = (values[i], values[i + 1]);
        if r0 == 0.0 {
            if is_degenerate(s, grid[i])? {
                continue;
            }
            if let Some(Extremum::Maximum) = classify(s, grid[i], opts.w_probe)? {
                roots.push(grid[i]);
            }
            continue;
        }
        if r1 != 0.0 && (r0 < 0.0) != (r1 < 0.0) {
            if let Some(root) = refine(s, grid[i], grid[i + 1], r0, opts)? {
                roots.push(root);
            }
        }
    }
    if values[n - 1] == 0.0 && roots.len() < max_count && !is_degenerate(s, grid[n - 1])? {
        if let Some(Extremum::Maximum) = classify(s, grid[n - 1], opts.w_probe)? {
            roots.push(grid[n - 1]);
        }
    }
    roots.iter().enumerate().map(|(i, &e)| resonance_at(s, e, i)).collect()
}

/// Resonances in the default window.
pub fn find_resonances_default<S: DoubleBarrier>(
    s: &S,
    max_count: usize,
) -> Result<Vec<ResonanceResult>> {
    let (lo, hi) = default_window(s);
    find_resonances(s, lo, hi, max_count)
}

/// The resonance nearest to `seed`, searched in windows of growing width
/// around it. Used for continuation along a parameter sweep.
pub fn track_resonance<S: DoubleBarrier>(
    s: &S,
    seed: f64,
    index: usize,
) -> Result<ResonanceResult> {
    let opts = ResonanceOptions { grid_points: 41, ..Default::default() };
    let mut half = 2e-3 * seed;
    while half <= 0.5 * seed {
        let lo = (seed - half).max(seed * 1e-3);
        let hi = seed + half;
        let found = find_resonances_with(s, lo, hi, usize::MAX, &opts)?;
        if let Some(best) = found.into_iter().min_by(|a, b| {
            (a.energy - seed).abs().total_cmp(&(b.energy - seed).abs())
        }) {
            return resonance_at(s, best.energy, index);
        }
        half *= 2.0;
    }
    Err(TunnelError::NotFound(format!("no resonance within ±50% of seed E = {seed} eV")))
}

/// Resonance `index` followed across a set of imaginary potential values.
///
/// The full search runs once, at the value closest to zero; every other point
/// is seeded from its neighbour towards that anchor. Output is in the order
/// of `im_values`. A point where tracking fails carries its error and the
/// sweep continues from the last good energy.
pub fn sweep_im_pot<S: DoubleBarrier>(
    s: &S,
    im_values: &[f64],
    index: usize,
) -> Result<Vec<Result<ResonanceResult>>> {
    let Some(anchor) = (0..im_values.len())
        .min_by(|&i, &j| im_values[i].abs().total_cmp(&im_values[j].abs()))
    else {
        return Ok(Vec::new());
    };
    let start = s.with_im_pot(im_values[anchor]);
    let (lo, hi) = default_window(&start);
    let found = find_resonances(&start, lo, hi, index + 1)?;
    let first = found.get(index).copied().ok_or_else(|| {
        TunnelError::NotFound(format!(
            "resonance #{index} not found in ({lo}, {hi}) eV at imaginary part {}",
            im_values[anchor]
        ))
    })?;

    let mut out: Vec<Option<Result<ResonanceResult>>> = vec![None; im_values.len()];
    out[anchor] = Some(Ok(first));
    for order in [
        (anchor + 1..im_values.len()).collect::<Vec<_>>(),
        (0..anchor).rev().collect::<Vec<_>>(),
    ] {
        let mut seed = first.energy;
        for i in order {
            let r = track_resonance(&s.with_im_pot(im_values[i]), seed, index);
            if let Ok(ok) = &r {
                seed = ok.energy;
            }
            out[i] = Some(r);
        }
    }
    Ok(out.into_iter().map(|r| r.expect("every point visited")).collect())
}
