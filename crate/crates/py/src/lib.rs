//! Python bindings for the core lab: curve point counts and Frobenius
//! records, the group-order and census formulas, the polynomial splitting
//! test, and the effective bound calculators.

use ltlab::census;
use ltlab::chebotarev::{self, Regime};
use ltlab::ffield::{self, Poly, PrimeField};
use ltlab::genus2::{self, HyperellipticCurve};
use ltlab::gsp4::{self, SplittingType};
use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn val_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_regime(regime: &str) -> PyResult<Regime> {
    match regime {
        "unconditional" => Ok(Regime::Unconditional),
        "grh" => Ok(Regime::Grh),
        other => Err(val_err(format!("unknown regime {other:?}"))),
    }
}

/// A genus-2 curve y^2 = f(x) with integer f of degree 5 or 6.
#[pyclass(name = "Curve")]
struct PyCurve {
    inner: HyperellipticCurve,
}

#[pymethods]
impl PyCurve {
    #[new]
    fn new(label: String, f_coeffs: Vec<i64>) -> PyResult<Self> {
        Ok(PyCurve {
            inner: HyperellipticCurve::new(label, f_coeffs).map_err(val_err)?,
        })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn f_coeffs(&self) -> Vec<i64> {
        self.inner.f_coeffs().to_vec()
    }

    fn disc(&self) -> BigInt {
        self.inner.disc().clone()
    }

    fn good_reduction(&self, p: u64) -> bool {
        self.inner.good_reduction(p)
    }

    /// #C(F_{p^k}) including points at infinity, k in {1, 2}.
    fn count_points(&self, p: u64, k: u32) -> PyResult<u64> {
        genus2::count_points(&self.inner, p, k).map_err(val_err)
    }

    /// (a_p, b_p) of the Frobenius quartic X^4 - aX^3 + bX^2 - apX + p^2.
    fn frobenius_record(&self, p: u64) -> PyResult<(i64, i64)> {
        let rec = genus2::frobenius_record(&self.inner, p).map_err(val_err)?;
        Ok((rec.a, rec.b))
    }

    /// [(p, a_p, b_p)] for all good p <= pmax.
    fn scan(&self, pmax: u64) -> PyResult<Vec<(u64, i64, i64)>> {
        let scan = genus2::scan_curve(&self.inner, pmax).map_err(val_err)?;
        Ok(scan.records.iter().map(|r| (r.p, r.a, r.b)).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Curve({:?}, {:?})",
            self.inner.label(),
            self.inner.f_coeffs()
        )
    }
}

/// The built-in verification curve set.
#[pyfunction]
fn fixed_curves() -> Vec<PyCurve> {
    genus2::fixed_curves()
        .into_iter()
        .map(|inner| PyCurve { inner })
        .collect()
}

/// |Sp4(F_q)| = q^4 (q^2 - 1)(q^4 - 1).
#[pyfunction]
fn sp4_order(q: u64) -> BigUint {
    gsp4::sp4_order(q)
}

#[pyfunction]
fn gsp4_order(q: u64) -> BigUint {
    gsp4::gsp4_order(q)
}

/// Pair count of the group scheme over the splitting type (l, degrees).
#[pyfunction]
fn g_scheme_order(ell: u64, residue_degrees: Vec<usize>) -> PyResult<BigUint> {
    let split = SplittingType::new(ell, residue_degrees).map_err(val_err)?;
    Ok(gsp4::g_scheme_order(&split))
}

/// (|B_l| exact, predicted l^(6n+1)).
#[pyfunction]
fn count_borel(ell: u64, residue_degrees: Vec<usize>) -> PyResult<(BigUint, BigUint)> {
    let split = SplittingType::new(ell, residue_degrees).map_err(val_err)?;
    Ok(census::count_borel(&split))
}

/// (equal-eigenvalue slice count, trace-zero class count) for the weight
/// exponent c.
#[pyfunction]
fn count_equal_eigen_sets(
    ell: u64,
    residue_degrees: Vec<usize>,
    weight_exponent: u64,
) -> PyResult<(BigUint, BigUint)> {
    let split = SplittingType::new(ell, residue_degrees).map_err(val_err)?;
    census::count_equal_eigen_sets(&split, weight_exponent).map_err(val_err)
}

/// True iff the polynomial (coefficients lowest first) splits into linear
/// factors over F_l with no zero root.
#[pyfunction]
fn splits_completely_nonzero(coeffs: Vec<i64>, ell: u64) -> PyResult<bool> {
    let f = PrimeField::new(ell).map_err(val_err)?;
    let poly = Poly::new(&f, coeffs.iter().map(|&c| f.reduce_i64(c)).collect());
    ffield::splits_completely_nonzero(&f, &poly).map_err(val_err)
}

/// Roots in F_l with multiplicity.
#[pyfunction]
fn roots_mod(coeffs: Vec<i64>, ell: u64) -> PyResult<Vec<u64>> {
    let f = PrimeField::new(ell).map_err(val_err)?;
    let poly = Poly::new(&f, coeffs.iter().map(|&c| f.reduce_i64(c)).collect());
    ffield::roots_in_field(&f, &poly).map_err(val_err)
}

/// Exact integer discriminant of a polynomial of degree >= 2.
#[pyfunction]
fn discriminant(coeffs: Vec<i64>) -> PyResult<BigInt> {
    ffield::discriminant_i64(&coeffs).map_err(val_err)
}

/// The theorem exponent as a fraction (num, den): regimes "unconditional"
/// and "grh", split by a = 0.
#[pyfunction]
fn alpha_value(n: u64, regime: &str, a_zero: bool) -> PyResult<(i64, i64)> {
    let a = chebotarev::alpha_value(n, parse_regime(regime)?, a_zero);
    Ok((*a.numer(), *a.denom()))
}

/// (D - d)/(D - r/2) as a fraction (num, den).
#[pyfunction]
fn serre_exponent(dim: i64, minkowski: i64, r: i64) -> PyResult<(i64, i64)> {
    let a = chebotarev::serre_exponent(dim, minkowski, r).map_err(val_err)?;
    Ok((*a.numer(), *a.denom()))
}

/// Li(x) = int_2^x dt/log t.
#[pyfunction]
fn li(x: f64) -> PyResult<f64> {
    chebotarev::li(x).map_err(val_err)
}

/// M(L/K) = 2 [L:K] |disc K|^(1/[K:Q]) prod p over the ramified primes.
#[pyfunction]
fn m_constant(
    degree_l: u64,
    degree_k: u64,
    rel_degree: u64,
    disc_k: i64,
    ramified_primes: Vec<u64>,
) -> PyResult<f64> {
    let ext =
        chebotarev::ExtensionData::new(degree_l, degree_k, rel_degree, disc_k, ramified_primes)
            .map_err(val_err)?;
    Ok(ext.m_constant())
}

#[pyfunction]
fn hensel_bound(
    degree_l: u64,
    degree_k: u64,
    rel_degree: u64,
    disc_k: i64,
    ramified_primes: Vec<u64>,
) -> PyResult<f64> {
    let ext =
        chebotarev::ExtensionData::new(degree_l, degree_k, rel_degree, disc_k, ramified_primes)
            .map_err(val_err)?;
    Ok(ext.hensel_bound())
}

/// (|C|/|G|) x/log x + |C|^(1/2) [K:Q] (sqrt x/log x) log M.
#[pyfunction]
#[pyo3(signature = (x, class_size, group_size, degree_k, m_const, o_const = 1.0))]
fn zywina_bound(
    x: f64,
    class_size: f64,
    group_size: f64,
    degree_k: f64,
    m_const: f64,
    o_const: f64,
) -> f64 {
    chebotarev::zywina_bound(x, class_size, group_size, degree_k, m_const, o_const)
}

/// (main, error) of the GRH effective bound.
#[pyfunction]
#[pyo3(signature = (x, class_size, group_size, log_disc, degree_l, o_const = 1.0))]
fn grh_bound(
    x: f64,
    class_size: f64,
    group_size: f64,
    log_disc: f64,
    degree_l: f64,
    o_const: f64,
) -> PyResult<(f64, f64)> {
    let b = chebotarev::grh_bound(x, class_size, group_size, log_disc, degree_l, o_const)
        .map_err(val_err)?;
    Ok((b.main, b.error))
}

/// x/(log x)^(1+alpha-eps) and x^(1-alpha)/(log x)^(1-2alpha).
#[pyfunction]
fn bound_curves(x: f64, alpha: f64, epsilon: f64) -> (f64, f64) {
    (
        chebotarev::bound_curve_unconditional(x, alpha, epsilon),
        chebotarev::bound_curve_grh(x, alpha),
    )
}

/// Simulated Frobenius stream: [(p, label)] with classes drawn
/// proportionally to their sizes, deterministic per seed.
#[pyfunction]
fn simulate_frobenius(
    classes: Vec<(String, u64)>,
    x: u64,
    seed: u64,
) -> PyResult<Vec<(u64, String)>> {
    let specs: Vec<chebotarev::ClassSpec> = classes
        .iter()
        .map(|(label, size)| chebotarev::ClassSpec {
            label: label.clone(),
            size: *size,
        })
        .collect();
    let order = specs.iter().map(|c| c.size).sum();
    let stream = chebotarev::simulate_frobenius(&specs, order, x, seed, None).map_err(val_err)?;
    Ok(stream
        .draws
        .iter()
        .map(|&(p, c)| (p, stream.classes[c as usize].label.clone()))
        .collect())
}

#[pymodule]
fn ltlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(fixed_curves, m)?)?;
    m.add_function(wrap_pyfunction!(sp4_order, m)?)?;
    m.add_function(wrap_pyfunction!(gsp4_order, m)?)?;
    m.add_function(wrap_pyfunction!(g_scheme_order, m)?)?;
    m.add_function(wrap_pyfunction!(count_borel, m)?)?;
    m.add_function(wrap_pyfunction!(count_equal_eigen_sets, m)?)?;
    m.add_function(wrap_pyfunction!(splits_completely_nonzero, m)?)?;
    m.add_function(wrap_pyfunction!(roots_mod, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_value, m)?)?;
    m.add_function(wrap_pyfunction!(serre_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(li, m)?)?;
    m.add_function(wrap_pyfunction!(m_constant, m)?)?;
    m.add_function(wrap_pyfunction!(hensel_bound, m)?)?;
    m.add_function(wrap_pyfunction!(zywina_bound, m)?)?;
    m.add_function(wrap_pyfunction!(grh_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bound_curves, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_frobenius, m)?)?;
    Ok(())
}
