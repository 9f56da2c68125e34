//! Transmission singularities: parameter points where the resonant
//! denominator vanishes and `|T_res|²` diverges.
//!
//! For the double delta barrier the singular set is known in closed form.
//! With `θ = w·V0I/(2·h2m)`, `D = 0` at resonance requires
//! `V0I = sqrt(h2m·E)` and either `V0R = V0I·tan θ` or `V0R = −V0I·cot θ`.
//! Barriers (`V0R > 0`) use `tan` on `(nπ, nπ + π/2)` and `cot` on
//! `(nπ + π/2, nπ + π)`; wells swap the two intervals. The rectangular
//! barrier has no closed form and is solved by nesting a resonance search
//! inside a root-find over `U0I`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::delta::DeltaDoubleBarrier;
use crate::error::{Result, TunnelError};
use crate::rect::RectDoubleBarrier;
use crate::resonance::{find_resonances_default, track_resonance, ResonanceResult};
use crate::structure::DoubleBarrier;
use crate::units::{kinematics, EffectiveMass};

/// Distance in θ (rad) from a branch endpoint inside which the locus is
/// reported as a pole.
pub const POLE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Tan,
    Cot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialSign {
    Barrier,
    Well,
}

impl PotentialSign {
    pub fn of(v0r: f64) -> Self {
        if v0r < 0.0 {
            PotentialSign::Well
        } else {
            PotentialSign::Barrier
        }
    }
}

/// One branch of the singular locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusBranch {
    pub n: u32,
    pub kind: BranchKind,
}

impl LocusBranch {
    pub fn new(n: u32, kind: BranchKind) -> Self {
        Self { n, kind }
    }

    /// Open θ interval of this branch (radians).
    pub fn domain(&self, sign: PotentialSign) -> (f64, f64) {
        let base = self.n as f64 * PI;
        let upper_half = matches!(
            (sign, self.kind),
            (PotentialSign::Barrier, BranchKind::Cot) | (PotentialSign::Well, BranchKind::Tan)
        );
        if upper_half {
            (base + FRAC_PI_2, base + PI)
        } else {
            (base, base + FRAC_PI_2)
        }
    }

    /// Branch whose domain contains `theta`.
    pub fn containing(theta: f64, sign: PotentialSign) -> Self {
        let j = (theta / FRAC_PI_2).floor().max(0.0) as u32;
        let lower_half = j.is_multiple_of(2);
        let kind = match (sign, lower_half) {
            (PotentialSign::Barrier, true) | (PotentialSign::Well, false) => BranchKind::Tan,
            _ => BranchKind::Cot,
        };
        Self { n: j / 2, kind }
    }
}

impl std::fmt::Display for LocusBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            BranchKind::Tan => "tan",
            BranchKind::Cot => "cot",
        };
        write!(f, "{kind}-branch n={}", self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LocusValue {
    Finite(f64),
    Pole,
}

impl LocusValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            LocusValue::Finite(v) => Some(v),
            LocusValue::Pole => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocusPoint {
    pub v0i: f64,
    pub theta: f64,
    pub branch: LocusBranch,
    pub value: LocusValue,
}

/// Location of a transmission singularity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularPoint {
    /// `U0I` (eV) for the rectangular barrier, `V0I` (nm·eV) for the delta.
    pub im_pot: f64,
    /// Resonant energy, eV.
    pub energy: f64,
    /// Real factor of the resonant denominator at the point.
    pub bracket_residual: f64,
    /// Left-hand side of the singularity cubic (delta only).
    pub cubic_residual: Option<f64>,
    /// Locus branch (delta only).
    pub branch: Option<LocusBranch>,
}

/// `4a^{3/2}V0I³ − 6aV0I² + 4a^{1/2}(1 + aV0R²)V0I − 2aV0R² − 1`.
///
/// `V0I = 1/(2·sqrt(a))` is a root for every `V0R`.
pub fn cubic_residual(v0i: f64, a: f64, v0r: f64) -> f64 {
    let sa = a.sqrt();
    4.0 * a * sa * v0i.powi(3) - 6.0 * a * v0i * v0i + 4.0 * sa * (1.0 + a * v0r * v0r) * v0i
        - 2.0 * a * v0r * v0r
        - 1.0
}

/// `θ = m·w·V0I/ħ² = w·V0I/(2·h2m)`.
pub fn locus_theta(v0i: f64, w: f64, m: EffectiveMass) -> f64 {
    w * v0i / (2.0 * m.h2m())
}

fn locus_value_at(theta: f64, v0i: f64, branch: LocusBranch) -> f64 {
    match branch.kind {
        BranchKind::Tan => v0i * theta.tan(),
        BranchKind::Cot => -v0i / theta.tan(),
    }
}

/// `V0R` on the singular locus for a given `V0I`.
pub fn locus_v0r(v0i: f64, w: f64, m: EffectiveMass, sign: PotentialSign) -> Result<LocusPoint> {
    if !(v0i > 0.0 && v0i.is_finite()) {
        return Err(TunnelError::Domain(format!("V0I must be positive, got {v0i}")));
    }
    if !(w > 0.0) {
        return Err(TunnelError::Domain(format!("well width must be positive, got {w}")));
    }
    let theta = locus_theta(v0i, w, m);
    let branch = LocusBranch::containing(theta, sign);
    let offset = theta.rem_euclid(FRAC_PI_2);
    let value = if offset < POLE_EPS || FRAC_PI_2 - offset < POLE_EPS {
        LocusValue::Pole
    } else {
        LocusValue::Finite(locus_value_at(theta, v0i, branch))
    };
    Ok(LocusPoint { v0i, theta, branch, value })
}

/// Branch with the smallest `V0I` that contains a singular point for `V0R`.
pub fn default_branch(v0r: f64, w: f64, m: EffectiveMass) -> LocusBranch {
    branch_for_index(0, v0r, w, m)
}

/// Lower-`V0I` branch of index `n` that contains a singular point for `V0R`.
/// For barriers that is the tan branch; for wells the cot branch, except
/// that the `n = 0` cot branch only spans `V0R ∈ (−2·h2m/w, 0)`.
pub fn branch_for_index(n: u32, v0r: f64, w: f64, m: EffectiveMass) -> LocusBranch {
    match PotentialSign::of(v0r) {
        PotentialSign::Barrier => LocusBranch::new(n, BranchKind::Tan),
        PotentialSign::Well if n > 0 || v0r > -2.0 * m.h2m() / w => {
            LocusBranch::new(n, BranchKind::Cot)
        }
        PotentialSign::Well => LocusBranch::new(0, BranchKind::Tan),
    }
}

/// Singular point of the double delta barrier with real strength `V0R`.
///
/// Solves the locus equation for `θ` by bisection (the locus is monotone
/// on every branch), then `V0I = 2·h2m·θ/w` and `E0 = V0I²/h2m`.
pub fn singular_point_delta(
    v0r: f64,
    w: f64,
    m: EffectiveMass,
    branch: Option<LocusBranch>,
) -> Result<SingularPoint> {
    if v0r == 0.0 || !v0r.is_finite() {
        return Err(TunnelError::Domain(format!("V0R must be non-zero and finite, got {v0r}")));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(TunnelError::Domain(format!("well width must be positive, got {w}")));
    }
    let sign = PotentialSign::of(v0r);
    let h2m = m.h2m();
    let branch = branch.unwrap_or_else(|| default_branch(v0r, w, m));
    let (mut lo, mut hi) = branch.domain(sign);
    let scale = 2.0 * h2m / w;
    let g = |theta: f64| locus_value_at(theta, scale * theta, branch) - v0r;

    // Range of the branch: both ends are 0 or ±∞ except the n = 0 cot
    // branch of a well, which starts at −2·h2m/w.
    let has_root = match sign {
        PotentialSign::Barrier => v0r > 0.0,
        PotentialSign::Well if branch.n == 0 && branch.kind == BranchKind::Cot => v0r > -scale,
        PotentialSign::Well => v0r < 0.0,
    };
    if !has_root {
        return Err(TunnelError::NotFound(format!(
            "no singular point with V0R = {v0r} nm·eV on the {branch}"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let v0i = scale * theta;
    let energy = v0i * v0i / h2m;

    let structure = DeltaDoubleBarrier::new(w, Complex64::new(v0r, v0i), m)?;
    let bracket_residual = structure.resonance_bracket(energy)?;
    let a = kinematics(energy, m)?.a;
    Ok(SingularPoint {
        im_pot: v0i,
        energy,
        bracket_residual,
        cubic_residual: Some(cubic_residual(v0i, a, v0r)),
        branch: Some(branch),
    })
}

/// How the imaginary-part axis is scanned when bracketing a singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImScan {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log_spacing: bool,
}

impl ImScan {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points.max(2);
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log_spacing {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

/// Bracket scan along an imaginary-part grid, tracking one resonance.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketScan {
    pub im_values: Vec<f64>,
    pub resonances: Vec<ResonanceResult>,
}

impl BracketScan {
    /// Indices `i` where the bracket changes sign between `i` and `i + 1`.
    pub fn sign_changes(&self) -> Vec<usize> {
        self.resonances
            .windows(2)
            .enumerate()
            .filter(|(_, p)| (p[0].bracket > 0.0) != (p[1].bracket > 0.0))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Follow the resonance seeded at `seed_energy` over `im_values` (ascending,
/// continuation from the first value).
pub fn bracket_scan<S: DoubleBarrier>(
    s: &S,
    seed_energy: f64,
    index: usize,
    im_values: &[f64],
) -> Result<BracketScan> {
    let mut seed = seed_energy;
    let mut resonances = Vec::with_capacity(im_values.len());
    for &x in im_values {
        let r = track_resonance(&s.with_im_pot(x), seed, index)?;
        seed = r.energy;
        resonances.push(r);
    }
    Ok(BracketScan { im_values: im_values.to_vec(), resonances })
}

/// Nested solve: the imaginary part at which the bracket of the tracked
/// resonance crosses zero. Works for any [`DoubleBarrier`].
pub fn singular_point_nested<S: DoubleBarrier>(
    s: &S,
    index: usize,
    scan: &ImScan,
) -> Result<(f64, ResonanceResult)> {
    let real = s.with_im_pot(0.0);
    let found = find_resonances_default(&real, index + 1)?;
    let anchor = found.get(index).ok_or_else(|| {
        TunnelError::NotFound(format!("resonance #{index} of the real-potential structure"))
    })?;
    let values = scan.values();
    let sweep = bracket_scan(s, anchor.energy, index, &values)?;
    let Some(&i) = sweep.sign_changes().first() else {
        let (lo, hi) = sweep
            .resonances
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r.bracket), hi.max(r.bracket))
            });
        return Err(TunnelError::NotFound(format!(
            "resonant bracket has no sign change for imaginary part in [{}, {}] \
             ({} points, bracket range [{lo:e}, {hi:e}])",
            scan.start, scan.stop, values.len()
        )));
    };

    let (mut lo, mut hi) = (values[i], values[i + 1]);
    let mut lo_res = sweep.resonances[i];
    let lo_positive = lo_res.bracket > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi.abs() {
            break;
        }
        let r = track_resonance(&s.with_im_pot(mid), lo_res.energy, index)?;
        if r.bracket == 0.0 {
            return Ok((mid, r));
        }
        if (r.bracket > 0.0) == lo_positive {
            lo = mid;
            lo_res = r;
        } else {
            hi = mid;
        }
    }
    let im = 0.5 * (lo + hi);
    let r = track_resonance(&s.with_im_pot(im), lo_res.energy, index)?;
    Ok((im, r))
}

/// Default scan for the rectangular solve: log-spaced over
/// `[1e-9·U0R, U0R]`.
pub fn default_rect_scan(u0r: f64) -> ImScan {
    ImScan { start: 1e-9 * u0r, stop: u0r, points: 400, log_spacing: true }
}

/// Singular point of the rectangular double barrier for real height `U0R`
/// (lowest resonance).
pub fn singular_point_rect(b: f64, w: f64, u0r: f64, m: EffectiveMass) -> Result<SingularPoint> {
    singular_point_rect_with(b, w, u0r, m, 0, &default_rect_scan(u0r))
}

pub fn singular_point_rect_with(
    b: f64,
    w: f64,
    u0r: f64,
    m: EffectiveMass,
    index: usize,
    scan: &ImScan,
) -> Result<SingularPoint> {
    if !(u0r > 0.0) {
        return Err(TunnelError::Domain(format!("U0R must be positive, got {u0r}")));
    }
    let s = RectDoubleBarrier::new(b, w, Complex64::new(u0r, 0.0), m)?;
    let (im, r) = singular_point_nested(&s, index, scan)?;
    Ok(SingularPoint {
        im_pot: im,
        energy: r.energy,
        bracket_residual: r.bracket,
        cubic_residual: None,
        branch: None,
    })
}
