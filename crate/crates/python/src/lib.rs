//! Python module `ssr_sim`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use ssr_core::fock::{FockSpace, PartyPartition, Register, StateDocument};
use ssr_core::states::HidingBit;
use ssr_core::{analysis, channels, protocols, states, Tolerances, C64};

fn err(e: ssr_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bit(v: u8) -> PyResult<HidingBit> {
    HidingBit::try_from(v).map_err(err)
}

fn space_of(registers: Vec<(String, String, usize)>) -> PyResult<FockSpace> {
    FockSpace::new(registers.into_iter().map(|(id, party, c)| Register::new(id, party, c)).collect()).map_err(err)
}

fn registers_of(space: &FockSpace) -> Vec<(String, String, usize)> {
    space.registers().iter().map(|r| (r.id.clone(), r.party.clone(), r.cutoff)).collect()
}

/// Mixed state on a truncated Fock space.
#[pyclass(name = "DensityOperator", module = "ssr_sim", frozen)]
pub struct PyDensity(pub ssr_core::fock::DensityOperator);

#[pymethods]
impl PyDensity {
    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    /// `(id, party, cutoff)` per register, in basis order.
    #[getter]
    fn registers(&self) -> Vec<(String, String, usize)> {
        registers_of(self.0.space())
    }

    #[getter]
    fn truncation_deficit(&self) -> f64 {
        self.0.truncation_deficit()
    }

    fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Row-major nested lists of complex entries.
    fn matrix(&self) -> Vec<Vec<C64>> {
        let m = self.0.matrix();
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }

    fn min_eigenvalue(&self) -> f64 {
        self.0.min_eigenvalue()
    }

    fn partial_trace(&self, keep: Vec<String>) -> PyResult<PyDensity> {
        let ids: Vec<&str> = keep.iter().map(String::as_str).collect();
        self.0.partial_trace(&ids).map(PyDensity).map_err(err)
    }

    fn tensor(&self, other: &PyDensity) -> PyResult<PyDensity> {
        self.0.tensor(&other.0).map(PyDensity).map_err(err)
    }

    fn to_json(&self) -> String {
        StateDocument::from_density(&self.0).to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyDensity> {
        match StateDocument::from_json(text).and_then(StateDocument::into_state).map_err(err)? {
            ssr_core::fock::AnyState::Density(rho) => Ok(PyDensity(rho)),
            ssr_core::fock::AnyState::Vector(psi) => Ok(PyDensity(psi.to_density())),
        }
    }

    fn __repr__(&self) -> String {
        let ids: Vec<String> = self.0.space().registers().iter().map(|r| r.id.clone()).collect();
        format!("DensityOperator(dimension={}, registers={ids:?})", self.0.dimension())
    }
}

/// Pure state on a truncated Fock space.
#[pyclass(name = "StateVector", module = "ssr_sim", frozen)]
pub struct PyState(pub ssr_core::fock::StateVector);

#[pymethods]
impl PyState {
    #[getter]
    fn dimension(&self) -> usize {
        self.0.space().dimension()
    }

    #[getter]
    fn registers(&self) -> Vec<(String, String, usize)> {
        registers_of(self.0.space())
    }

    #[getter]
    fn truncation_deficit(&self) -> f64 {
        self.0.truncation_deficit()
    }

    fn amplitudes(&self) -> Vec<C64> {
        self.0.amplitudes().iter().copied().collect()
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn tensor(&self, other: &PyState) -> PyResult<PyState> {
        self.0.tensor(&other.0).map(PyState).map_err(err)
    }

    fn to_density(&self) -> PyDensity {
        PyDensity(self.0.to_density())
    }

    fn to_json(&self) -> String {
        StateDocument::from_vector(&self.0).to_json()
    }

    fn __repr__(&self) -> String {
        format!("StateVector(dimension={})", self.0.space().dimension())
    }
}

/// Number state `|occupation>` on registers given as `(id, party, cutoff)`.
#[pyfunction]
fn ket(registers: Vec<(String, String, usize)>, occupation: Vec<usize>) -> PyResult<PyState> {
    let space = space_of(registers)?;
    ssr_core::fock::StateVector::ket(&space, &occupation.into()).map(PyState).map_err(err)
}

/// Truncated, renormalized coherent state on one register.
#[pyfunction]
#[pyo3(signature = (alpha, cutoff, phase=0.0, register="c", party="A"))]
fn coherent(alpha: f64, cutoff: usize, phase: f64, register: &str, party: &str) -> PyResult<PyState> {
    let space = space_of(vec![(register.into(), party.into(), cutoff)])?;
    ssr_core::fock::StateVector::coherent(&space, register, alpha, phase).map(PyState).map_err(err)
}

#[pyfunction]
fn rho1() -> PyDensity {
    PyDensity(states::rho1())
}

#[pyfunction]
#[pyo3(signature = (alpha, cutoff=None))]
fn rho2(alpha: f64, cutoff: Option<usize>) -> PyResult<PyDensity> {
    states::rho2(alpha, cutoff).map(PyDensity).map_err(err)
}

/// Hiding state for bit 0 (`|+>`) or 1 (`|->`), split between parties A and B.
#[pyfunction]
#[pyo3(signature = (bit, copies=1))]
fn hiding_state(bit: u8, copies: usize) -> PyResult<PyState> {
    let psi = states::hiding_state_copies(self::bit(bit)?, copies).map_err(err)?;
    let split = states::dealer_split(psi.space());
    let space = psi.space().relabeled(|r| split.party_of(&r.id).unwrap_or(&r.party).to_string());
    ssr_core::fock::StateVector::new(space, psi.into_amplitudes()).map(PyState).map_err(err)
}

#[pyfunction]
fn resource_state(n: usize) -> PyState {
    PyState(states::resource_state(n))
}

#[pyfunction]
fn multiparty_hiding_state(bit_value: u8, parties: usize) -> PyResult<PyState> {
    states::multiparty_hiding_state(bit(bit_value)?, parties).map(PyState).map_err(err)
}

/// Dephasing over the local-number sectors of the register parties.
#[pyfunction]
fn dephase(rho: &PyDensity) -> PyResult<PyDensity> {
    channels::dephase(&rho.0, &PartyPartition::from_space(rho.0.space())).map(PyDensity).map_err(err)
}

/// `(compatible, residual)` for the fixed-point test of `dephase`.
#[pyfunction]
fn is_ssr_compatible(rho: &PyDensity) -> PyResult<(bool, f64)> {
    channels::is_ssr_compatible(&rho.0, &PartyPartition::from_space(rho.0.space()), &Tolerances::DEFAULT).map_err(err)
}

/// Max over seeded random product observables obeying the number rule of
/// `|tr[X (rho - sigma)]|`.
#[pyfunction]
#[pyo3(signature = (rho, sigma, trials=200, seed=0))]
fn locc_statistics_gap(rho: &PyDensity, sigma: &PyDensity, trials: u64, seed: u64) -> PyResult<f64> {
    let part = PartyPartition::from_space(rho.0.space());
    channels::locc_statistics_gap(&rho.0, &sigma.0, &part, trials, seed).map_err(err)
}

#[pyfunction]
fn trace_distance(rho: &PyDensity, sigma: &PyDensity) -> PyResult<f64> {
    analysis::trace_distance(&rho.0, &sigma.0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rho, sigma, prior=0.5))]
fn helstrom_success(rho: &PyDensity, sigma: &PyDensity, prior: f64) -> PyResult<f64> {
    analysis::helstrom_success(&rho.0, &sigma.0, prior).map(|b| b.success).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rho, party="A"))]
fn ppt_check<'py>(py: Python<'py>, rho: &PyDensity, party: &str) -> PyResult<Bound<'py, PyDict>> {
    let r = analysis::ppt_check(&rho.0, &PartyPartition::from_space(rho.0.space()), party, &Tolerances::DEFAULT)
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("ppt", r.ppt)?;
    d.set_item("min_eigenvalue", r.min_eigenvalue)?;
    d.set_item("conclusive", r.conclusive)?;
    Ok(d)
}

#[pyfunction]
fn entangled_summary<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let s = protocols::entangled_summary(n).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", s.n_total)?;
    d.set_item("success_bit0", s.success_bit0)?;
    d.set_item("success_bit1", s.success_bit1)?;
    d.set_item("worst_case", s.worst_case)?;
    d.set_item("average", s.average)?;
    d.set_item("predicted", s.predicted)?;
    Ok(d)
}

/// Exact success as `(numerator, denominator)`.
#[pyfunction]
fn entangled_success_exact(bit_value: u8, n: usize) -> PyResult<(i64, i64)> {
    let r = protocols::exact::entangled_success_exact(bit(bit_value)?, n);
    Ok((*r.numer(), *r.denom()))
}

#[pyfunction]
#[pyo3(signature = (alpha, cutoff=None))]
fn coherent_summary<'py>(py: Python<'py>, alpha: f64, cutoff: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let s = protocols::coherent_summary(alpha, cutoff).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("alpha", s.alpha)?;
    d.set_item("cutoff", s.cutoff)?;
    d.set_item("success_bit0", s.success_bit0)?;
    d.set_item("success_bit1", s.success_bit1)?;
    d.set_item("inconclusive", s.inconclusive)?;
    d.set_item("sum_f", s.sum_f)?;
    d.set_item("truncation_deficit", s.truncation_deficit)?;
    Ok(d)
}

#[pyfunction]
fn f_formula(n: usize, m: usize, alpha: f64) -> PyResult<f64> {
    protocols::f_formula(n, m, alpha).map_err(err)
}

/// `{coalition: max_abs_diff}` over every bipartition of `parties` parties.
#[pyfunction]
fn multiparty_security_check<'py>(py: Python<'py>, parties: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = protocols::multiparty_security_check(parties).map_err(err)?;
    let d = PyDict::new(py);
    for c in r.checks {
        d.set_item(c.coalition.join("+"), c.max_abs_diff)?;
    }
    Ok(d)
}

#[pyfunction]
fn dual_rail_teleport<'py>(py: Python<'py>, u: C64, v: C64) -> PyResult<Bound<'py, PyDict>> {
    let r = protocols::dual_rail_teleport(u, v).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("fidelity", r.fidelity)?;
    d.set_item("average_fidelity", r.average_fidelity)?;
    d.set_item("max_number_commutator", r.max_number_commutator)?;
    let branches: Vec<(u8, u8, f64, f64)> =
        r.branches.iter().map(|b| (b.m0, b.m1, b.probability, b.fidelity)).collect();
    d.set_item("branches", branches)?;
    Ok(d)
}

#[pymodule]
fn ssr_sim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function of `ssr_sim` to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(ket, m)?)?;
    m.add_function(wrap_pyfunction!(coherent, m)?)?;
    m.add_function(wrap_pyfunction!(rho1, m)?)?;
    m.add_function(wrap_pyfunction!(rho2, m)?)?;
    m.add_function(wrap_pyfunction!(hiding_state, m)?)?;
    m.add_function(wrap_pyfunction!(resource_state, m)?)?;
    m.add_function(wrap_pyfunction!(multiparty_hiding_state, m)?)?;
    m.add_function(wrap_pyfunction!(dephase, m)?)?;
    m.add_function(wrap_pyfunction!(is_ssr_compatible, m)?)?;
    m.add_function(wrap_pyfunction!(locc_statistics_gap, m)?)?;
    m.add_function(wrap_pyfunction!(trace_distance, m)?)?;
    m.add_function(wrap_pyfunction!(helstrom_success, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_check, m)?)?;
    m.add_function(wrap_pyfunction!(entangled_summary, m)?)?;
    m.add_function(wrap_pyfunction!(entangled_success_exact, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_summary, m)?)?;
    m.add_function(wrap_pyfunction!(f_formula, m)?)?;
    m.add_function(wrap_pyfunction!(multiparty_security_check, m)?)?;
    m.add_function(wrap_pyfunction!(dual_rail_teleport, m)?)?;
    Ok(())
}
