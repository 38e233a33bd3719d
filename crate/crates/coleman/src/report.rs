//! The result record of a verification run: computed and reference values,
//! errors, and a pass flag tied to a tolerance.

use num_complex::Complex64;

/// Outcome of one numerical check. `pass` holds iff the recorded error is
/// within the tolerance (relative when the reference is away from zero,
/// absolute otherwise).
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: String,
    pub inputs: String,
    pub computed: Vec<f64>,
    pub reference: Vec<f64>,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    /// wall time in milliseconds; 0 unless timing was requested
    pub wall_ms: f64,
}

impl CheckReport {
    pub fn from_scalar(id: &str, computed: f64, reference: f64, tol: f64) -> Self {
        let abs_err = (computed - reference).abs();
        let rel_err = if reference.abs() > 1e-300 {
            abs_err / reference.abs()
        } else {
            abs_err
        };
        let err = if reference.abs() > 1e-12 { rel_err } else { abs_err };
        Self {
            id: id.into(),
            inputs: String::new(),
            computed: vec![computed],
            reference: vec![reference],
            abs_err,
            rel_err,
            tol,
            pass: err <= tol,
            wall_ms: 0.0,
        }
    }

    pub fn from_complex(id: &str, computed: Complex64, reference: Complex64, tol: f64) -> Self {
        let abs_err = (computed - reference).norm();
        let rel_err = if reference.norm() > 1e-300 {
            abs_err / reference.norm()
        } else {
            abs_err
        };
        let err = if reference.norm() > 1e-12 { rel_err } else { abs_err };
        Self {
            id: id.into(),
            inputs: String::new(),
            computed: vec![computed.re, computed.im],
            reference: vec![reference.re, reference.im],
            abs_err,
            rel_err,
            tol,
            pass: err <= tol,
            wall_ms: 0.0,
        }
    }

    /// A report asserting a boolean condition with an associated measurement.
    pub fn from_condition(id: &str, measured: f64, bound: f64, ok: bool) -> Self {
        Self {
            id: id.into(),
            inputs: String::new(),
            computed: vec![measured],
            reference: vec![bound],
            abs_err: (measured - bound).abs(),
            rel_err: if bound.abs() > 1e-300 {
                (measured - bound).abs() / bound.abs()
            } else {
                (measured - bound).abs()
            },
            tol: f64::NAN,
            pass: ok,
            wall_ms: 0.0,
        }
    }

    pub fn with_inputs(mut self, inputs: impl Into<String>) -> Self {
        self.inputs = inputs.into();
        self
    }
}
