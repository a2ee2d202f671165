//! Python bindings for the plate transmission laboratory.
//!
//! Exposes the discrete system as a `Lab` class plus the multiplier
//! identities as free functions. Build with maturin
//! (`maturin develop --features extension-module`) or via
//! `cargo build --features extension-module` and rename the cdylib to
//! `platelab_py.so`; see `python/smoke.py`.

// the pymethods macro expansion triggers useless_conversion on PyErr
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use platelab::domain::DomainConfig;
use platelab::error::Error;
use platelab::evolve;
use platelab::identities;
use platelab::operator::{FirstOrderSystem, StateVector};
use platelab::spectral;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// The discrete transmission system on a fixed mesh.
#[pyclass]
struct Lab {
    sys: FirstOrderSystem,
    config: DomainConfig,
    seed: u64,
}

#[pymethods]
impl Lab {
    #[new]
    #[pyo3(signature = (length=1.0, interface_a=0.3, interface_b=0.7, rho=1.0,
                        n_left=8, n_mid=8, n_right=8, seed=42))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        length: f64,
        interface_a: f64,
        interface_b: f64,
        rho: f64,
        n_left: usize,
        n_mid: usize,
        n_right: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let config = DomainConfig {
            length,
            interface_a,
            interface_b,
            rho,
            elements_per_region: [n_left, n_mid, n_right],
        }
        .validated()
        .map_err(to_py_err)?;
        let sys = FirstOrderSystem::from_config(&config).map_err(to_py_err)?;
        Ok(Lab { sys, config, seed })
    }

    #[getter]
    fn n_dof(&self) -> usize {
        self.sys.n_dof()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.config.rho
    }

    /// Fundamental frequency of the undamped pencil.
    fn fundamental_frequency(&self) -> PyResult<f64> {
        spectral::fundamental_frequency(&self.sys).map_err(to_py_err)
    }

    /// Energy ½(uᵀKu + vᵀMv) of a state.
    fn energy(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<f64> {
        self.check_state(&u, &v)?;
        Ok(self.sys.energy_gram().energy(&StateVector { u, v }))
    }

    /// Applies the generator: (u, v) -> (v, M⁻¹(-Ku - ρD₀v)).
    fn apply_generator(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<(Vec<f64>, Vec<f64>)> {
        self.check_state(&u, &v)?;
        let out = self.sys.apply_generator(&StateVector { u, v });
        Ok((out.u, out.v))
    }

    /// Eigenvalues and location margins of the quadratic pencil.
    fn spectrum<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let spec = spectral::spectrum(&self.sys).map_err(to_py_err)?;
        let dict = PyDict::new_bound(py);
        let eigenvalues: Vec<(f64, f64)> = spec.eigenvalues().map(|l| (l.re, l.im)).collect();
        dict.set_item("eigenvalues", eigenvalues)?;
        dict.set_item("spectral_abscissa", spec.spectral_abscissa)?;
        dict.set_item("imag_axis_margin", spec.imag_axis_margin)?;
        dict.set_item("zero_margin", spec.zero_margin)?;
        dict.set_item("residual_bound", spec.residual_bound)?;
        Ok(dict)
    }

    /// Resolvent norm ‖(iλ - 𝒜)⁻¹‖ in the energy norm.
    fn resolvent_norm(&self, lam: f64) -> PyResult<f64> {
        spectral::resolvent_norm(&self.sys, &self.sys.energy_gram(), lam).map_err(to_py_err)
    }

    /// Scans the resolvent norm over a linear grid.
    #[pyo3(signature = (lambda_min=-200.0, lambda_max=200.0, points=401))]
    fn scan<'py>(
        &self,
        py: Python<'py>,
        lambda_min: f64,
        lambda_max: f64,
        points: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let grid = spectral::GridSpec {
            lambda_min,
            lambda_max,
            count: points,
        }
        .points()
        .map_err(to_py_err)?;
        let scan = spectral::scan_imaginary_axis(&self.sys, &self.sys.energy_gram(), &grid)
            .map_err(to_py_err)?;
        let dict = PyDict::new_bound(py);
        dict.set_item("lambdas", scan.lambdas.clone())?;
        dict.set_item("norms", scan.norms.clone())?;
        dict.set_item("flagged", scan.flagged.clone())?;
        dict.set_item("sup_norm", scan.sup_norm)?;
        Ok(dict)
    }

    /// Midpoint time integration; returns times, energies, the worst
    /// dissipation residual, and (for ρ > 0) the fitted decay rate.
    #[pyo3(signature = (dt=None, steps=None, init="bump"))]
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        dt: Option<f64>,
        steps: Option<usize>,
        init: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let omega1 = spectral::fundamental_frequency(&self.sys).map_err(to_py_err)?;
        let period = 2.0 * std::f64::consts::PI / omega1;
        let dt = dt.unwrap_or(1e-3 * period);
        let steps = steps.unwrap_or_else(|| (20.0 * period / dt).ceil() as usize);
        let initial = match init {
            "bump" => {
                evolve::initial_bump(&self.sys, self.config.interface_a, self.config.interface_b)
                    .map_err(to_py_err)?
            }
            "random" => evolve::initial_random(&self.sys, self.seed),
            other => {
                return Err(PyValueError::new_err(format!(
                    "init must be 'bump' or 'random', got '{other}'"
                )))
            }
        };
        let mut trace = evolve::simulate(&self.sys, &initial, dt, steps).map_err(to_py_err)?;
        let horizon = *trace.times.last().unwrap();
        if self.config.rho > 0.0 {
            trace.fit = evolve::fit_decay(&trace, (horizon / 2.0, horizon)).ok();
        }
        let dict = PyDict::new_bound(py);
        dict.set_item("t", trace.times.clone())?;
        dict.set_item("energy", trace.energies.clone())?;
        dict.set_item(
            "max_dissipation_residual",
            trace
                .dissipation_residuals
                .iter()
                .fold(0.0f64, |a, &b| a.max(b)),
        )?;
        match trace.fit {
            Some(fit) => {
                dict.set_item("kappa", fit.kappa)?;
                dict.set_item("r2", fit.r2)?;
            }
            None => {
                dict.set_item("kappa", py.None())?;
                dict.set_item("r2", py.None())?;
            }
        }
        Ok(dict)
    }
}

impl Lab {
    fn check_state(&self, u: &[f64], v: &[f64]) -> PyResult<()> {
        let n = self.sys.n_dof();
        if u.len() != n || v.len() != n {
            return Err(PyValueError::new_err(format!(
                "state must have {n} displacement and {n} velocity coefficients"
            )));
        }
        Ok(())
    }
}

/// |LHS - RHS| and the natural scale of the multiplier identity for the
/// polynomial with the given ascending coefficients.
#[pyfunction]
fn rellich_residual(coeffs: Vec<f64>, alpha: f64, beta: f64) -> PyResult<(f64, f64)> {
    let w = identities::PolyFunction::new(coeffs).map_err(to_py_err)?;
    let r = identities::rellich_residual(&w, (alpha, beta)).map_err(to_py_err)?;
    Ok((r.residual, r.scale))
}

/// Shifted multiplier identity residual with z := -w'''' + λ²w.
#[pyfunction]
fn rellich_shifted_residual(
    coeffs: Vec<f64>,
    lam: f64,
    alpha: f64,
    beta: f64,
) -> PyResult<(f64, f64)> {
    let w = identities::PolyFunction::new(coeffs).map_err(to_py_err)?;
    let r = identities::rellich_shifted_residual(&w, lam, (alpha, beta)).map_err(to_py_err)?;
    Ok((r.residual, r.scale))
}

/// Clamped-endpoint identity residual at s with the given outward normal.
#[pyfunction]
fn boundary_identity_residual(coeffs: Vec<f64>, s: f64, outward: f64) -> PyResult<(f64, f64)> {
    let w = identities::PolyFunction::new(coeffs).map_err(to_py_err)?;
    let r = identities::boundary_identity_residual(&w, s, outward).map_err(to_py_err)?;
    Ok((r.residual, r.scale))
}

/// Sector and analyticity diagnostics of the whole-domain damped operator.
#[pyfunction]
#[pyo3(signature = (length=1.0, n_elements=24, rho=1.0, lambda_min=-200.0,
                    lambda_max=200.0, points=401))]
fn sector_check<'py>(
    py: Python<'py>,
    length: f64,
    n_elements: usize,
    rho: f64,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = spectral::GridSpec {
        lambda_min,
        lambda_max,
        count: points,
    };
    let report = spectral::sector_check_whole_domain(length, n_elements, rho, 0.0, &grid)
        .map_err(to_py_err)?;
    let dict = PyDict::new_bound(py);
    dict.set_item("spectral_abscissa", report.spectrum.spectral_abscissa)?;
    dict.set_item("max_aperture", report.max_aperture)?;
    dict.set_item("lambda_resolvent_sup", report.lambda_resolvent_sup)?;
    dict.set_item("flagged_points", report.flagged_points)?;
    Ok(dict)
}

#[pymodule]
fn platelab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lab>()?;
    m.add_function(wrap_pyfunction!(rellich_residual, m)?)?;
    m.add_function(wrap_pyfunction!(rellich_shifted_residual, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_identity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(sector_check, m)?)?;
    Ok(())
}
