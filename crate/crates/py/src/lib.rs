//! Python module `w2p`: Fock vectors, screening operators, kernels and the
//! Zhu-algebra curve. Rational scalars cross the boundary as
//! `fractions.Fraction`.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use w2p_core::exactlin::{parse_rational, Poly1, Rational};
use w2p_core::fock::{heis, virasoro, FockVector, ModelParams};
use w2p_core::vertexops::{product, screening_q, screening_qtilde};
use w2p_core::walgebra::{self, ScreeningOp};
use w2p_core::zhu;

fn err(e: w2p_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

/// Accepts `int`, `str` like `"3/2"`, or `fractions.Fraction`.
fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = x.str()?.to_string();
    match parse_rational(&text) {
        Some(r) => Ok(r),
        None if text.ends_with("/0") => Err(PyZeroDivisionError::new_err(text)),
        None => Err(PyValueError::new_err(format!("not a rational number: {text}"))),
    }
}

fn coefficients<'py>(py: Python<'py>, f: &Poly1) -> PyResult<Bound<'py, PyList>> {
    let items = f.dense().iter().map(|c| fraction(py, c)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn operator(tag: &str) -> PyResult<ScreeningOp> {
    ScreeningOp::from_tag(tag).ok_or_else(|| PyValueError::new_err(format!("operator must be 'Q' or 'Qtilde', got {tag:?}")))
}

type Triple<'py> = (Bound<'py, PyAny>, Bound<'py, PyAny>, Bound<'py, PyAny>);

/// The free-boson model with `⟨β,β⟩ = 2/p`, `α = pβ`.
#[pyclass(name = "Model", frozen)]
struct PyModel {
    inner: ModelParams,
}

/// An element of `M(1) ⊗ e^{mβ}` or of a continuous-momentum Fock module.
#[pyclass(name = "Vector", frozen)]
struct PyVector {
    model: ModelParams,
    inner: FockVector,
}

impl PyVector {
    fn wrap(&self, inner: FockVector) -> Self {
        Self {
            model: self.model.clone(),
            inner,
        }
    }
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(p: i64) -> PyResult<Self> {
        Ok(Self {
            inner: ModelParams::new(p).map_err(err)?,
        })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn central_charge<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.central_charge())
    }

    #[getter]
    fn default_max_level(&self) -> u32 {
        self.inner.default_max_level()
    }

    fn vacuum(&self) -> PyVector {
        self.vector(self.inner.vacuum())
    }

    fn omega(&self) -> PyVector {
        self.vector(self.inner.omega())
    }

    /// `e^{mβ}`.
    fn exponential(&self, m: i64) -> PyVector {
        self.vector(self.inner.exponential(m))
    }

    /// Highest-weight vector `v_λ` with `⟨λ, α⟩ = t`.
    fn highest(&self, t: &Bound<'_, PyAny>) -> PyResult<PyVector> {
        Ok(self.vector(FockVector::highest(self.inner.continuous(rational(t)?))))
    }

    /// `(F, H, E)`.
    fn generators(&self) -> (PyVector, PyVector, PyVector) {
        let g = walgebra::Generators::new(&self.inner);
        (self.vector(g.f), self.vector(g.h), self.vector(g.e))
    }

    /// `u_n = Q^n e^{-nα}`.
    fn singular_vector(&self, n: u32) -> PyVector {
        self.vector(walgebra::singular_vector(&self.inner, n))
    }

    /// Basis of the kernel of `"Q"` or `"Qtilde"` on `M(1)` at `level`.
    fn kernel(&self, op: &str, level: u32) -> PyResult<Vec<PyVector>> {
        let k = walgebra::kernel(&self.inner, operator(op)?, level).map_err(err)?;
        Ok(k.vectors.into_iter().map(|v| self.vector(v)).collect())
    }

    fn kernel_dim(&self, op: &str, level: u32) -> PyResult<usize> {
        Ok(walgebra::kernel(&self.inner, operator(op)?, level).map_err(err)?.dim())
    }

    fn spanning_check(&self, level: u32) -> PyResult<bool> {
        walgebra::spanning_check(&self.inner, level).map_err(err)
    }

    /// Coefficients of `g`, constant term first; both computations must agree.
    fn g<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        coefficients(py, &zhu::compute_g(&self.inner).map_err(err)?)
    }

    /// `C_p`, `P`, `u`, `v`, `g` and the central charge.
    fn curve<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = zhu::curve(&self.inner);
        let d = PyDict::new(py);
        d.set_item("p", c.p)?;
        d.set_item("C_p", fraction(py, &c.c_p)?)?;
        d.set_item("central_charge", fraction(py, &c.central_charge)?)?;
        d.set_item("P", c.poly.to_string())?;
        d.set_item("u", coefficients(py, &c.u)?)?;
        d.set_item("v", coefficients(py, &c.v)?)?;
        d.set_item("g", coefficients(py, &c.g)?)?;
        Ok(d)
    }

    /// `[(t, u(t), v(t))]` for `t = 0, …, 2p`.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Vec<Triple<'py>>> {
        zhu::classify(&self.inner)
            .samples
            .iter()
            .map(|s| Ok((fraction(py, &s.t)?, fraction(py, &s.x)?, fraction(py, &s.y)?)))
            .collect()
    }

    /// Eigenvalue of `o(a)` on `v_λ`, `⟨λ, α⟩ = t`.
    fn top_level_eval<'py>(&self, py: Python<'py>, a: PyRef<'_, PyVector>, t: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let value = zhu::top_level_eval(&self.inner, &a.inner, &rational(t)?).map_err(err)?;
        fraction(py, &value)
    }

    fn __repr__(&self) -> String {
        format!("Model(p={})", self.inner.p())
    }
}

impl PyModel {
    fn vector(&self, inner: FockVector) -> PyVector {
        PyVector {
            model: self.inner.clone(),
            inner,
        }
    }
}

#[pymethods]
impl PyVector {
    /// Parses the text form produced by `str()`.
    #[staticmethod]
    fn parse(model: PyRef<'_, PyModel>, text: &str) -> PyResult<Self> {
        Ok(Self {
            model: model.inner.clone(),
            inner: FockVector::parse(&model.inner, text).map_err(err)?,
        })
    }

    #[getter]
    fn sector(&self) -> String {
        self.inner.sector().to_string()
    }

    /// Conformal weight, or `None` if inhomogeneous.
    #[getter]
    fn weight<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner.weight().map(|w| fraction(py, &w)).transpose()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// `[(parts, coefficient)]`, parts weakly decreasing.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<u32>, Bound<'py, PyAny>)>> {
        self.inner
            .terms()
            .map(|(m, c)| Ok((m.parts().to_vec(), fraction(py, c)?)))
            .collect()
    }

    fn heisenberg(&self, n: i64) -> Self {
        self.wrap(heis(&self.model, n, &self.inner))
    }

    fn virasoro(&self, n: i64) -> Self {
        self.wrap(virasoro(&self.model, n, &self.inner))
    }

    fn screening_q(&self) -> PyResult<Self> {
        Ok(self.wrap(screening_q(&self.model, &self.inner).map_err(err)?))
    }

    fn screening_qtilde(&self) -> PyResult<Self> {
        Ok(self.wrap(screening_qtilde(&self.model, &self.inner).map_err(err)?))
    }

    /// `self_n other`.
    fn product(&self, n: i64, other: PyRef<'_, PyVector>) -> PyResult<Self> {
        Ok(self.wrap(product(&self.model, &self.inner, n, &other.inner).map_err(err)?))
    }

    fn scaled(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(self.wrap(self.inner.scaled(&rational(c)?)))
    }

    fn __add__(&self, other: PyRef<'_, PyVector>) -> PyResult<Self> {
        self.same_space(&other)?;
        Ok(self.wrap(self.inner.plus(&other.inner)))
    }

    fn __sub__(&self, other: PyRef<'_, PyVector>) -> PyResult<Self> {
        self.same_space(&other)?;
        Ok(self.wrap(self.inner.minus(&other.inner)))
    }

    fn __eq__(&self, other: PyRef<'_, PyVector>) -> bool {
        self.model == other.model && self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Vector(p={}, {})", self.model.p(), self.inner)
    }
}

impl PyVector {
    fn same_space(&self, other: &PyVector) -> PyResult<()> {
        if self.model != other.model || self.inner.sector() != other.inner.sector() {
            return Err(PyValueError::new_err("vectors lie in different Fock spaces"));
        }
        Ok(())
    }
}

#[pymodule]
fn w2p(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyVector>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
