//! Python bindings: the closed-form outage machinery, the Monte Carlo
//! verifier, and the allocator, with channels passed as plain tuples.
//!
//! Channels are `(m, omega, p)` tuples; the noise PSD and subcarrier
//! bandwidth ride alongside so one call fully determines the link.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use nakarate_core::allocator::{ChannelPool, NakagamiGain, UserDemand};
use nakarate_core::channel::{AllocationSet, ProductGammaDist, SubcarrierChannel};
use nakarate_core::mcsim::SimConfig;
use nakarate_core::outage::HopPath;
use nakarate_core::ratestats::AmcTable;
use nakarate_core::specfun::{KernelBackend, ShapeVector};
use nakarate_core::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) => PyValueError::new_err(e.to_string()),
        Error::Evaluation { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

fn shape_vector(shapes: Vec<f64>) -> PyResult<ShapeVector> {
    ShapeVector::new(shapes).map_err(to_py_err)
}

fn backend_name(b: KernelBackend) -> &'static str {
    match b {
        KernelBackend::ResidueSeries => "residue_series",
        KernelBackend::ContourQuadrature => "contour_quadrature",
    }
}

fn build_alloc(channels: Vec<(f64, f64, f64)>, n0: f64, b_sc: f64) -> PyResult<AllocationSet> {
    let chs: Result<Vec<SubcarrierChannel>, Error> = channels
        .into_iter()
        .map(|(m, omega, p)| SubcarrierChannel::new(m, omega, p, n0, b_sc))
        .collect();
    AllocationSet::new(chs.map_err(to_py_err)?).map_err(to_py_err)
}

fn build_dist(shapes: Vec<f64>, scales: Vec<f64>) -> PyResult<ProductGammaDist> {
    ProductGammaDist::from_parts(shapes, scales).map_err(to_py_err)
}

/// ln Gamma(a) for a > 0.
#[pyfunction]
fn log_gamma(a: f64) -> PyResult<f64> {
    nakarate_core::specfun::ln_gamma(a).map_err(to_py_err)
}

/// Lower regularized incomplete gamma P(a, x).
#[pyfunction]
fn lower_regularized_gamma(a: f64, x: f64) -> PyResult<f64> {
    nakarate_core::specfun::lower_regularized_gamma(a, x).map_err(to_py_err)
}

/// Error function.
#[pyfunction]
fn erf(x: f64) -> f64 {
    nakarate_core::specfun::erf(x)
}

/// Density kernel G^{M,0}_{0,M}[x | -; shapes].
/// Returns (value, abs_error_estimate, backend).
#[pyfunction]
fn meijer_pdf_kernel(x: f64, shapes: Vec<f64>) -> PyResult<(f64, f64, &'static str)> {
    let r = nakarate_core::specfun::meijer_pdf_kernel(x, &shape_vector(shapes)?)
        .map_err(to_py_err)?;
    Ok((r.value, r.abs_error_estimate, backend_name(r.backend)))
}

/// Cdf kernel G^{M,1}_{1,M+1}[x | 1; shapes, 0].
/// Returns (value, abs_error_estimate, backend).
#[pyfunction]
fn meijer_cdf_kernel(x: f64, shapes: Vec<f64>) -> PyResult<(f64, f64, &'static str)> {
    let r = nakarate_core::specfun::meijer_cdf_kernel(x, &shape_vector(shapes)?)
        .map_err(to_py_err)?;
    Ok((r.value, r.abs_error_estimate, backend_name(r.backend)))
}

/// MGF E[exp(s Y)] of the rate variable Y = 1 + prod(chi_n), s <= 0.
#[pyfunction]
fn laplace_y(s: f64, shapes: Vec<f64>, scales: Vec<f64>) -> PyResult<f64> {
    let dist = build_dist(shapes, scales)?;
    nakarate_core::specfun::laplace_y(s, &dist).map_err(to_py_err)
}

/// Gamma scale S = p * omega / (m * n0 * b_sc) of the per-subcarrier SNR.
#[pyfunction]
fn gamma_scale(m: f64, omega: f64, p: f64, n0: f64, b_sc: f64) -> PyResult<f64> {
    let ch = SubcarrierChannel::new(m, omega, p, n0, b_sc).map_err(to_py_err)?;
    Ok(nakarate_core::channel::gamma_scale(&ch))
}

/// Density of Y = 1 + prod(chi_n) at y > 1.
#[pyfunction]
fn product_pdf(shapes: Vec<f64>, scales: Vec<f64>, y: f64) -> PyResult<f64> {
    let dist = build_dist(shapes, scales)?;
    nakarate_core::outage::product_pdf(&dist, y).map_err(to_py_err)
}

/// Cdf of Y = 1 + prod(chi_n) at y >= 1.
#[pyfunction]
fn product_cdf(shapes: Vec<f64>, scales: Vec<f64>, y: f64) -> PyResult<f64> {
    let dist = build_dist(shapes, scales)?;
    nakarate_core::outage::product_cdf(&dist, y).map_err(to_py_err)
}

/// Closed-form outage with per-hop breakdown and error estimate.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct OutageResult {
    probability: f64,
    per_hop: Vec<f64>,
    abs_error_estimate: f64,
}

#[pymethods]
impl OutageResult {
    fn __repr__(&self) -> String {
        format!(
            "OutageResult(probability={}, per_hop={:?}, abs_error_estimate={})",
            self.probability, self.per_hop, self.abs_error_estimate
        )
    }
}

/// Closed-form rate outage of one allocation set.
/// Channels are (m, omega, p) tuples.
#[pyfunction]
fn single_hop_outage(
    channels: Vec<(f64, f64, f64)>,
    n0: f64,
    b_sc: f64,
    r_min: f64,
) -> PyResult<OutageResult> {
    let alloc = build_alloc(channels, n0, b_sc)?;
    let r = nakarate_core::outage::single_hop_outage(&alloc, r_min).map_err(to_py_err)?;
    Ok(OutageResult {
        probability: r.probability,
        per_hop: r.per_hop,
        abs_error_estimate: r.abs_error_estimate,
    })
}

/// Bottleneck rate outage of a multi-hop route; one channel list per hop.
#[pyfunction]
fn multi_hop_outage(
    hops: Vec<Vec<(f64, f64, f64)>>,
    n0: f64,
    b_sc: f64,
    r_min: f64,
) -> PyResult<OutageResult> {
    let allocs: PyResult<Vec<AllocationSet>> = hops
        .into_iter()
        .map(|chs| build_alloc(chs, n0, b_sc))
        .collect();
    let path = HopPath::new(allocs?).map_err(to_py_err)?;
    let r = nakarate_core::outage::multi_hop_outage(&path, r_min).map_err(to_py_err)?;
    Ok(OutageResult {
        probability: r.probability,
        per_hop: r.per_hop,
        abs_error_estimate: r.abs_error_estimate,
    })
}

/// Monte Carlo summary statistics.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct SimReport {
    empirical_outage: f64,
    mean_rate: f64,
    stderr_outage: f64,
    n_frames: u64,
}

#[pymethods]
impl SimReport {
    fn __repr__(&self) -> String {
        format!(
            "SimReport(empirical_outage={}, mean_rate={}, stderr_outage={}, n_frames={})",
            self.empirical_outage, self.mean_rate, self.stderr_outage, self.n_frames
        )
    }
}

fn report(r: nakarate_core::mcsim::SimReport) -> SimReport {
    SimReport {
        empirical_outage: r.empirical_outage,
        mean_rate: r.mean_rate,
        stderr_outage: r.stderr_outage,
        n_frames: r.n_frames,
    }
}

/// Deterministic Monte Carlo outage run for one allocation set.
#[pyfunction]
#[pyo3(signature = (channels, n0, b_sc, r_min, seed=0, n_frames=100_000))]
fn simulate_single_hop(
    channels: Vec<(f64, f64, f64)>,
    n0: f64,
    b_sc: f64,
    r_min: f64,
    seed: u64,
    n_frames: u64,
) -> PyResult<SimReport> {
    let alloc = build_alloc(channels, n0, b_sc)?;
    let cfg = SimConfig { seed, n_frames, ..Default::default() };
    nakarate_core::mcsim::simulate_single_hop(&alloc, r_min, &cfg)
        .map(report)
        .map_err(to_py_err)
}

/// Deterministic Monte Carlo outage run for a multi-hop route.
#[pyfunction]
#[pyo3(signature = (hops, n0, b_sc, r_min, seed=0, n_frames=100_000))]
fn simulate_multi_hop(
    hops: Vec<Vec<(f64, f64, f64)>>,
    n0: f64,
    b_sc: f64,
    r_min: f64,
    seed: u64,
    n_frames: u64,
) -> PyResult<SimReport> {
    let allocs: PyResult<Vec<AllocationSet>> = hops
        .into_iter()
        .map(|chs| build_alloc(chs, n0, b_sc))
        .collect();
    let path = HopPath::new(allocs?).map_err(to_py_err)?;
    let cfg = SimConfig { seed, n_frames, ..Default::default() };
    nakarate_core::mcsim::simulate_multi_hop(&path, r_min, &cfg)
        .map(report)
        .map_err(to_py_err)
}

/// AMC-quantized per-frame rate pmf (built-in table, thresholds in dB).
/// Returns (support, probs) with rates in bits/s.
#[pyfunction]
fn amc_pmf(
    channels: Vec<(f64, f64, f64)>,
    n0: f64,
    b_sc: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let alloc = build_alloc(channels, n0, b_sc)?;
    let pmf = nakarate_core::ratestats::amc_pmf(&alloc, &AmcTable::default())
        .map_err(to_py_err)?;
    Ok((pmf.support().to_vec(), pmf.probs().to_vec()))
}

/// Probability that the exponential average rate (window frames, frame t)
/// lies inside [r_min, rho * r_min], via the normal approximation.
#[pyfunction]
#[pyo3(signature = (channels, n0, b_sc, r_min, rho, window, t=None))]
#[allow(clippy::too_many_arguments)]
fn rate_window_probability(
    channels: Vec<(f64, f64, f64)>,
    n0: f64,
    b_sc: f64,
    r_min: f64,
    rho: f64,
    window: u32,
    t: Option<u64>,
) -> PyResult<f64> {
    let alloc = build_alloc(channels, n0, b_sc)?;
    let pmf = nakarate_core::ratestats::amc_pmf(&alloc, &AmcTable::default())
        .map_err(to_py_err)?;
    let stats =
        nakarate_core::ratestats::avg_rate_stats(&pmf, t.unwrap_or(10 * window as u64), window);
    nakarate_core::ratestats::window_probability(&stats, r_min, rho).map_err(to_py_err)
}

/// Subcarrier allocation plan.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct AllocationPlan {
    assignment: Vec<Option<usize>>,
    powers: Vec<f64>,
    objective: f64,
    feasible: bool,
    slack: Vec<f64>,
}

#[pymethods]
impl AllocationPlan {
    fn __repr__(&self) -> String {
        format!(
            "AllocationPlan(assignment={:?}, objective={}, feasible={})",
            self.assignment, self.objective, self.feasible
        )
    }
}

/// Greedy-with-repair subcarrier allocation. `users` are
/// (r_min, rho, nu, window) tuples; `gains[k][n]` is the (m, omega) pair
/// of user k on subcarrier n.
#[pyfunction]
#[pyo3(signature = (users, gains, n0, b_sc, p_total, t=None))]
fn sca_out_allocate(
    users: Vec<(f64, f64, f64, u32)>,
    gains: Vec<Vec<(f64, f64)>>,
    n0: f64,
    b_sc: f64,
    p_total: f64,
    t: Option<u64>,
) -> PyResult<AllocationPlan> {
    let demands: Result<Vec<UserDemand>, Error> = users
        .into_iter()
        .map(|(r_min, rho, nu, window)| UserDemand::new(r_min, rho, nu, window))
        .collect();
    let pool = ChannelPool::new(
        gains
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(m, omega)| NakagamiGain { m, omega })
                    .collect()
            })
            .collect(),
        n0,
        b_sc,
    )
    .map_err(to_py_err)?;
    let plan = nakarate_core::allocator::sca_out_allocate(
        &demands.map_err(to_py_err)?,
        &pool,
        &AmcTable::default(),
        p_total,
        t,
    )
    .map_err(to_py_err)?;
    Ok(AllocationPlan {
        assignment: plan.assignment,
        powers: plan.powers,
        objective: plan.objective,
        feasible: plan.feasible,
        slack: plan.slack,
    })
}

#[pymodule]
fn nakarate_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(lower_regularized_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(erf, m)?)?;
    m.add_function(wrap_pyfunction!(meijer_pdf_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(meijer_cdf_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_y, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_scale, m)?)?;
    m.add_function(wrap_pyfunction!(product_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(product_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(single_hop_outage, m)?)?;
    m.add_function(wrap_pyfunction!(multi_hop_outage, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_single_hop, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_multi_hop, m)?)?;
    m.add_function(wrap_pyfunction!(amc_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(rate_window_probability, m)?)?;
    m.add_function(wrap_pyfunction!(sca_out_allocate, m)?)?;
    m.add_class::<OutageResult>()?;
    m.add_class::<SimReport>()?;
    m.add_class::<AllocationPlan>()?;
    Ok(())
}
