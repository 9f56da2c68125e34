//! Python bindings. Energies in eV, lengths in nm, delta strengths in nm·eV.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use resotunnel::resonance::{default_window, find_resonances, sweep_im_pot};
use resotunnel::scattering::{scatter_delta, scatter_rect_barrier, ScatteringResult};
use resotunnel::validation::{oracle_check as run_oracle_check, Mutation, OracleCheckConfig};
use resotunnel::{
    BranchKind, Complex64, ConstantSet, DoubleBarrier, EffectiveMass, LocusValue, PotentialSign,
    ResonanceResult, SingularPoint, TunnelError,
};

create_exception!(pyresotunnel, SolverError, PyRuntimeError, "A solver did not converge or found nothing.");
create_exception!(pyresotunnel, DivergenceError, SolverError, "The transmission denominator vanished.");

fn to_py(e: TunnelError) -> PyErr {
    match e {
        TunnelError::Domain(_) | TunnelError::SingularInput(_) | TunnelError::SingularKinematics { .. } => {
            PyValueError::new_err(e.to_string())
        }
        TunnelError::Divergent { .. } => DivergenceError::new_err(e.to_string()),
        _ => SolverError::new_err(e.to_string()),
    }
}

fn parse_constants(name: &str) -> Result<ConstantSet, String> {
    match name {
        "codata" => Ok(ConstantSet::Codata),
        "rounded" => Ok(ConstantSet::Rounded),
        other => Err(format!("constants must be 'codata' or 'rounded', got '{other}'")),
    }
}

fn parse_sign(name: &str) -> Result<PotentialSign, String> {
    match name {
        "barrier" => Ok(PotentialSign::Barrier),
        "well" => Ok(PotentialSign::Well),
        other => Err(format!("sign must be 'barrier' or 'well', got '{other}'")),
    }
}

fn branch_kind(kind: BranchKind) -> &'static str {
    match kind {
        BranchKind::Tan => "tan",
        BranchKind::Cot => "cot",
    }
}

fn mass_model(mass: f64, constants: &str) -> PyResult<EffectiveMass> {
    let set = parse_constants(constants).map_err(PyValueError::new_err)?;
    EffectiveMass::with_constants(mass, set).map_err(to_py)
}

fn scattering_dict<'py>(py: Python<'py>, s: &ScatteringResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("t", s.t)?;
    d.set_item("r", s.r)?;
    d.set_item("T2", s.t2)?;
    d.set_item("R2", s.r2)?;
    d.set_item("A", s.absorption)?;
    Ok(d)
}

fn resonance_dict<'py>(py: Python<'py>, r: &ResonanceResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("energy", r.energy)?;
    d.set_item("d_res", r.d_res)?;
    d.set_item("T2_res", r.t_res_sq)?;
    d.set_item("divergent", r.divergent)?;
    d.set_item("index", r.index)?;
    d.set_item("residual", r.residual)?;
    Ok(d)
}

fn singular_dict<'py>(py: Python<'py>, p: &SingularPoint) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("im_pot", p.im_pot)?;
    d.set_item("energy", p.energy)?;
    d.set_item("bracket_residual", p.bracket_residual)?;
    d.set_item("cubic_residual", p.cubic_residual)?;
    d.set_item("branch", p.branch.map(|b| (b.n, branch_kind(b.kind))))?;
    Ok(d)
}

fn resonances<'py, S: DoubleBarrier>(
    py: Python<'py>,
    s: &S,
    emin: Option<f64>,
    emax: Option<f64>,
    max_count: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (lo, hi) = default_window(s);
    let found = find_resonances(s, emin.unwrap_or(lo), emax.unwrap_or(hi), max_count).map_err(to_py)?;
    found.iter().map(|r| resonance_dict(py, r)).collect()
}

/// One resonance followed across imaginary-potential values; failed points
/// come back as `None`.
fn sweep<'py, S: DoubleBarrier>(
    py: Python<'py>,
    s: &S,
    values: Vec<f64>,
    index: usize,
) -> PyResult<Vec<Option<Bound<'py, PyDict>>>> {
    sweep_im_pot(s, &values, index)
        .map_err(to_py)?
        .into_iter()
        .map(|r| r.ok().map(|r| resonance_dict(py, &r)).transpose())
        .collect()
}

/// Symmetric rectangular double barrier: barriers of width `b` and complex
/// height `u0` around a well of width `w`.
#[pyclass(name = "RectDoubleBarrier", frozen)]
struct PyRect(resotunnel::RectDoubleBarrier);

#[pymethods]
impl PyRect {
    #[new]
    #[pyo3(signature = (b, w, u0, mass = 0.067, constants = "codata"))]
    fn new(b: f64, w: f64, u0: Complex64, mass: f64, constants: &str) -> PyResult<Self> {
        let m = mass_model(mass, constants)?;
        resotunnel::RectDoubleBarrier::new(b, w, u0, m).map(Self).map_err(to_py)
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b()
    }

    #[getter]
    fn w(&self) -> f64 {
        self.0.w()
    }

    #[getter]
    fn u0(&self) -> Complex64 {
        self.0.u0()
    }

    fn with_im_pot(&self, im: f64) -> Self {
        Self(self.0.with_im_pot(im))
    }

    fn uvw(&self, energy: f64) -> PyResult<(Complex64, Complex64, Complex64)> {
        let s = self.0.uvw(energy).map_err(to_py)?;
        Ok((s.u, s.v, s.w))
    }

    fn d_of_k(&self, energy: f64) -> PyResult<Complex64> {
        self.0.d_of_k(energy).map_err(to_py)
    }

    fn transmission(&self, energy: f64) -> PyResult<Complex64> {
        self.0.transmission_amplitude(energy).map_err(to_py)
    }

    fn reflection(&self, energy: f64) -> PyResult<Complex64> {
        self.0.reflection(energy).map_err(to_py)
    }

    fn scatter<'py>(&self, py: Python<'py>, energy: f64) -> PyResult<Bound<'py, PyDict>> {
        scattering_dict(py, &scatter_rect_barrier(&self.0, energy).map_err(to_py)?)
    }

    #[pyo3(signature = (emin = None, emax = None, max_count = 10))]
    fn find_resonances<'py>(
        &self,
        py: Python<'py>,
        emin: Option<f64>,
        emax: Option<f64>,
        max_count: usize,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        resonances(py, &self.0, emin, emax, max_count)
    }

    #[pyo3(signature = (values, index = 0))]
    fn sweep_im_pot<'py>(&self, py: Python<'py>, values: Vec<f64>, index: usize) -> PyResult<Vec<Option<Bound<'py, PyDict>>>> {
        sweep(py, &self.0, values, index)
    }

    fn __repr__(&self) -> String {
        let u0 = self.0.u0();
        format!("RectDoubleBarrier(b={}, w={}, u0=({}{:+}j))", self.0.b(), self.0.w(), u0.re, u0.im)
    }
}

/// Two delta barriers of complex strength `v0` (nm·eV), `w` apart.
#[pyclass(name = "DeltaDoubleBarrier", frozen)]
struct PyDelta(resotunnel::DeltaDoubleBarrier);

#[pymethods]
impl PyDelta {
    #[new]
    #[pyo3(signature = (w, v0, mass = 0.067, constants = "codata"))]
    fn new(w: f64, v0: Complex64, mass: f64, constants: &str) -> PyResult<Self> {
        let m = mass_model(mass, constants)?;
        resotunnel::DeltaDoubleBarrier::new(w, v0, m).map(Self).map_err(to_py)
    }

    #[getter]
    fn w(&self) -> f64 {
        self.0.w()
    }

    #[getter]
    fn v0(&self) -> Complex64 {
        self.0.v0()
    }

    fn with_im_pot(&self, im: f64) -> Self {
        Self(self.0.with_im_pot(im))
    }

    fn alpha(&self, energy: f64) -> PyResult<Complex64> {
        self.0.alpha(energy).map_err(to_py)
    }

    fn uvw(&self, energy: f64) -> PyResult<(Complex64, Complex64, Complex64)> {
        let s = self.0.uvw(energy).map_err(to_py)?;
        Ok((s.u, s.v, s.w))
    }

    fn d_of_k(&self, energy: f64) -> PyResult<Complex64> {
        self.0.d_of_k(energy).map_err(to_py)
    }

    fn transmission(&self, energy: f64) -> PyResult<Complex64> {
        self.0.transmission_amplitude(energy).map_err(to_py)
    }

    fn scatter<'py>(&self, py: Python<'py>, energy: f64) -> PyResult<Bound<'py, PyDict>> {
        scattering_dict(py, &scatter_delta(&self.0, energy).map_err(to_py)?)
    }

    #[pyo3(signature = (emin = None, emax = None, max_count = 10))]
    fn find_resonances<'py>(
        &self,
        py: Python<'py>,
        emin: Option<f64>,
        emax: Option<f64>,
        max_count: usize,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        resonances(py, &self.0, emin, emax, max_count)
    }

    #[pyo3(signature = (values, index = 0))]
    fn sweep_im_pot<'py>(&self, py: Python<'py>, values: Vec<f64>, index: usize) -> PyResult<Vec<Option<Bound<'py, PyDict>>>> {
        sweep(py, &self.0, values, index)
    }

    fn __repr__(&self) -> String {
        let v0 = self.0.v0();
        format!("DeltaDoubleBarrier(w={}, v0=({}{:+}j))", self.0.w(), v0.re, v0.im)
    }
}

#[pyfunction]
#[pyo3(signature = (b, w, u0r, mass = 0.067, constants = "codata", index = 0))]
fn singular_point_rect<'py>(
    py: Python<'py>,
    b: f64,
    w: f64,
    u0r: f64,
    mass: f64,
    constants: &str,
    index: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let m = mass_model(mass, constants)?;
    let scan = resotunnel::singularity::default_rect_scan(u0r);
    let p = resotunnel::singularity::singular_point_rect_with(b, w, u0r, m, index, &scan).map_err(to_py)?;
    singular_dict(py, &p)
}

/// `branch` picks locus branch n; the tan/cot kind follows from the sign of
/// `v0r`.
#[pyfunction]
#[pyo3(signature = (v0r, w, mass = 0.067, constants = "codata", branch = None))]
fn singular_point_delta<'py>(
    py: Python<'py>,
    v0r: f64,
    w: f64,
    mass: f64,
    constants: &str,
    branch: Option<u32>,
) -> PyResult<Bound<'py, PyDict>> {
    let m = mass_model(mass, constants)?;
    let branch = branch.map(|n| resotunnel::singularity::branch_for_index(n, v0r, w, m));
    let p = resotunnel::singular_point_delta(v0r, w, m, branch).map_err(to_py)?;
    singular_dict(py, &p)
}

/// `(V0R, theta, n, kind)`; V0R is `inf` on a pole of the locus.
#[pyfunction]
#[pyo3(signature = (v0i, w, sign = "barrier", mass = 0.067, constants = "codata"))]
fn locus_v0r(v0i: f64, w: f64, sign: &str, mass: f64, constants: &str) -> PyResult<(f64, f64, u32, &'static str)> {
    let m = mass_model(mass, constants)?;
    let sign = parse_sign(sign).map_err(PyValueError::new_err)?;
    let p = resotunnel::locus_v0r(v0i, w, m, sign).map_err(to_py)?;
    let v0r = match p.value {
        LocusValue::Finite(v) => v,
        LocusValue::Pole => f64::INFINITY,
    };
    Ok((v0r, p.theta, p.branch.n, branch_kind(p.branch.kind)))
}

#[pyfunction]
fn cubic_residual(v0i: f64, a: f64, v0r: f64) -> f64 {
    resotunnel::cubic_residual(v0i, a, v0r)
}

/// Random comparison of the closed forms with the transfer-matrix solver.
#[pyfunction]
#[pyo3(signature = (draws = 1000, seed = 0x5eed, mass = 0.067, constants = "codata", inject_sign_flip = false))]
fn oracle_check<'py>(
    py: Python<'py>,
    draws: usize,
    seed: u64,
    mass: f64,
    constants: &str,
    inject_sign_flip: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = OracleCheckConfig {
        draws,
        seed,
        mass: mass_model(mass, constants)?,
        mutation: if inject_sign_flip { Mutation::FlipVSign } else { Mutation::None },
    };
    let r = run_oracle_check(&cfg).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("draws", r.draws)?;
    d.set_item("seed", r.seed)?;
    d.set_item("skipped", r.skipped)?;
    d.set_item("max_rel_err_T", r.max_rel_err_t)?;
    d.set_item("max_rel_err_R", r.max_rel_err_r)?;
    d.set_item("max_abs_err_unitarity", r.max_abs_err_unitarity)?;
    d.set_item("max_abs_err_absorption", r.max_abs_err_absorption)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

#[pymodule]
fn pyresotunnel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRect>()?;
    m.add_class::<PyDelta>()?;
    m.add_function(wrap_pyfunction!(singular_point_rect, m)?)?;
    m.add_function(wrap_pyfunction!(singular_point_delta, m)?)?;
    m.add_function(wrap_pyfunction!(locus_v0r, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_residual, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_check, m)?)?;
    m.add("SolverError", m.py().get_type::<SolverError>())?;
    m.add("DivergenceError", m.py().get_type::<DivergenceError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
