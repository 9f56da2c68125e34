//! Transfer-matrix solution of the piecewise-constant + delta scattering
//! problem.
//!
//! The state vector is `(ψ, ψ')`. Plane waves only appear at the outer
//! boundaries, where the incident amplitude from the left is fixed to one.
//! Nothing here uses the `U, V, W` algebra, so it serves as an independent
//! check of the closed forms in [`crate::rect`] and [`crate::delta`].

use std::ops::Mul;

use num_complex::Complex64;

use crate::delta::DeltaDoubleBarrier;
use crate::error::{Result, TunnelError};
use crate::rect::RectDoubleBarrier;
use crate::units::{kinematics, principal_sqrt, EffectiveMass};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest `|Re κ|·L` propagated in one step before a slab is split.
const MAX_GROWTH_PER_STEP: f64 = 300.0;
const RENORM_THRESHOLD: f64 = 1e100;

/// One piece of the potential profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Constant potential (eV) over `length` nm.
    Slab { length: f64, potential: Complex64 },
    /// `strength·δ(x − x_i)` in nm·eV; occupies no length.
    Delta { strength: Complex64 },
}

impl Region {
    pub fn length(&self) -> f64 {
        match *self {
            Region::Slab { length, .. } => length,
            Region::Delta { .. } => 0.0,
        }
    }
}

/// 2×2 complex matrix acting on `(ψ, ψ')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn scaled(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    /// Propagation across a slab of constant potential.
    pub fn slab(length: f64, potential: Complex64, energy: f64, h2m: f64) -> Self {
        let q2 = (potential - energy) / h2m;
        let q = principal_sqrt(q2);
        let ql = q * length;
        // cosh(qL), sinh(qL)/q and q·sinh(qL) are all even in q.
        let (ch, sh_over_q, q_sh) = if ql.norm() < 1e-6 {
            let x2 = ql * ql;
            let sinhc = ONE + x2 / 6.0 + x2 * x2 / 120.0;
            (ONE + x2 / 2.0 + x2 * x2 / 24.0, sinhc * length, q2 * length * sinhc)
        } else {
            let sh = ql.sinh();
            (ql.cosh(), sh / q, q * sh)
        };
        Mat2([[ch, sh_over_q], [q_sh, ch]])
    }

    /// Derivative jump `ψ'(x+) − ψ'(x−) = (strength/h2m)·ψ(x)`.
    pub fn delta(strength: Complex64, h2m: f64) -> Self {
        Mat2([[ONE, ZERO], [strength / h2m, ONE]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

/// Matrix product kept as `exp(log_scale)·mat`.
#[derive(Debug, Clone, Copy)]
struct ScaledMat {
    mat: Mat2,
    log_scale: f64,
}

impl ScaledMat {
    fn identity() -> Self {
        Self { mat: Mat2::identity(), log_scale: 0.0 }
    }

    fn left_mul(&mut self, m: Mat2) {
        self.mat = m * self.mat;
        let big = self.mat.max_abs();
        if big > RENORM_THRESHOLD {
            self.mat = self.mat.scaled(1.0 / big);
            self.log_scale += big.ln();
        }
    }
}

/// Region matrices, with thick slabs split so no single factor overflows.
pub fn region_matrices(region: &Region, energy: f64, h2m: f64) -> Vec<Mat2> {
    match *region {
        Region::Delta { strength } => vec![Mat2::delta(strength, h2m)],
        Region::Slab { length, potential } => {
            let q = principal_sqrt((potential - energy) / h2m);
            let growth = q.re.abs() * length;
            let pieces = if growth > MAX_GROWTH_PER_STEP {
                (growth / MAX_GROWTH_PER_STEP).ceil() as usize
            } else {
                1
            };
            let piece = Mat2::slab(length / pieces as f64, potential, energy, h2m);
            vec![piece; pieces]
        }
    }
}

/// Scattering solution for unit incidence from the left.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringState {
    /// ψ at the left end of the structure (left delta / left barrier edge).
    pub psi_0: Complex64,
    /// ψ at the right end of the structure.
    pub psi_w: Complex64,
    /// `ψ(x) = T·e^{ikx}` to the right.
    pub t: Complex64,
    /// `ψ(x) = e^{ikx} + R·e^{−ikx}` to the left.
    pub r: Complex64,
    /// `(x, ψ(x))` at every region boundary, left to right.
    pub interfaces: Vec<(f64, Complex64)>,
}

impl ScatteringState {
    pub fn absorption(&self) -> f64 {
        1.0 - self.t.norm_sqr() - self.r.norm_sqr()
    }
}

/// Solve the scattering problem for `regions` laid out from `x_start`.
pub fn tm_scatter(
    regions: &[Region],
    x_start: f64,
    energy: f64,
    m: EffectiveMass,
) -> Result<ScatteringState> {
    if regions.is_empty() {
        return Err(TunnelError::Domain("at least one region is required".into()));
    }
    if let Some(bad) = regions.iter().find(|r| !(r.length() >= 0.0)) {
        return Err(TunnelError::Domain(format!("negative region length in {bad:?}")));
    }
    let kin = kinematics(energy, m)?;
    let (k, h2m) = (kin.k, kin.h2m);
    let x_end = x_start + regions.iter().map(Region::length).sum::<f64>();

    let mut total = ScaledMat::identity();
    for region in regions {
        for piece in region_matrices(region, energy, h2m) {
            total.left_mul(piece);
        }
    }
    if !total.mat.is_finite() {
        return Err(TunnelError::Overflow(format!(
            "non-finite transfer matrix at E = {energy} eV"
        )));
    }

    // K = G(x_end)⁻¹ · M · G(x_start), G(x) columns are the right- and
    // left-going plane waves with their derivatives.
    let ik = I * k;
    let g0 = {
        let (ep, em) = ((ik * x_start).exp(), (-ik * x_start).exp());
        Mat2([[ep, em], [ik * ep, -ik * em]])
    };
    let g1_inv = {
        let (ep, em) = ((ik * x_end).exp(), (-ik * x_end).exp());
        Mat2([[em / 2.0, em / (2.0 * ik)], [ep / 2.0, -ep / (2.0 * ik)]])
    };
    let kmat = g1_inv * total.mat * g0;
    let k21 = kmat.0[1][0];
    let k22 = kmat.0[1][1];
    if k22.norm() <= 1e-14 * kmat.max_abs() {
        return Err(TunnelError::Divergent { d_abs: k22.norm() * total.log_scale.exp() });
    }
    let r = -k21 / k22;
    let t = (-total.log_scale).exp() / k22;
    if !(r.is_finite() && t.is_finite()) {
        return Err(TunnelError::Overflow(format!("non-finite amplitudes at E = {energy} eV")));
    }

    let mut state = g0.apply([ONE, r]);
    let mut x = x_start;
    let mut interfaces = vec![(x, state[0])];
    for region in regions {
        for piece in region_matrices(region, energy, h2m) {
            state = piece.apply(state);
        }
        x += region.length();
        interfaces.push((x, state[0]));
    }
    // Delta interfaces leave ψ continuous, so consecutive entries may repeat
    // a position; keep the layout but drop exact duplicates.
    interfaces.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);

    Ok(ScatteringState {
        psi_0: interfaces[0].1,
        psi_w: interfaces[interfaces.len() - 1].1,
        t,
        r,
        interfaces,
    })
}

/// Profile of the rectangular double barrier centred on the origin.
pub fn rect_regions(spec: &RectDoubleBarrier) -> (Vec<Region>, f64) {
    let barrier = Region::Slab { length: spec.b(), potential: spec.u0() };
    let well = Region::Slab { length: spec.w(), potential: ZERO };
    (vec![barrier, well, barrier], -spec.w() / 2.0 - spec.b())
}

/// Profile of the double delta barrier; centred on the origin, or with the
/// deltas at `0` and `w` when `centered` is false.
pub fn delta_regions(spec: &DeltaDoubleBarrier, centered: bool) -> (Vec<Region>, f64) {
    let d = Region::Delta { strength: spec.v0() };
    let well = Region::Slab { length: spec.w(), potential: ZERO };
    let start = if centered { -spec.w() / 2.0 } else { 0.0 };
    (vec![d, well, d], start)
}

pub fn scatter_rect(spec: &RectDoubleBarrier, energy: f64) -> Result<ScatteringState> {
    let (regions, x0) = rect_regions(spec);
    tm_scatter(&regions, x0, energy, spec.mass())
}

/// Double delta with the deltas at `0` and `w` (the shifted layout).
pub fn scatter_delta(spec: &DeltaDoubleBarrier, energy: f64) -> Result<ScatteringState> {
    let (regions, x0) = delta_regions(spec, false);
    tm_scatter(&regions, x0, energy, spec.mass())
}

/// Absorption from the probability density at the two deltas:
/// `A = −(V0I/(h2m·k))·(|ψ(0)|² + |ψ(w)|²)`.
pub fn absorption_direct(spec: &DeltaDoubleBarrier, energy: f64) -> Result<f64> {
    let v0i = spec.v0().im;
    if v0i == 0.0 {
        return Ok(0.0);
    }
    let kin = kinematics(energy, spec.mass())?;
    let st = scatter_delta(spec, energy)?;
    Ok(-(v0i / (kin.h2m * kin.k)) * (st.psi_0.norm_sqr() + st.psi_w.norm_sqr()))
}
