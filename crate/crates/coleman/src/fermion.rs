//! Free Dirac fermion correlation functions: massless and massive
//! propagators, determinant and truncated (cyclic-sum) correlators, chiral
//! density correlators, and the current-insertion reduction identities.

use crate::combinat;
use crate::error::{Error, Result};
use crate::point::ComplexPoint;
use crate::report::CheckReport;
use crate::specfun;
use num_complex::Complex64;

/// 2x2 complex matrix housing propagator values S(x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorMatrix {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
}

impl SpinorMatrix {
    pub fn entry(&self, alpha: u8, beta: u8) -> Complex64 {
        match (alpha, beta) {
            (1, 1) => self.s11,
            (1, 2) => self.s12,
            (2, 1) => self.s21,
            (2, 2) => self.s22,
            _ => panic!("spinor indices must be 1 or 2"),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.s11
            .norm()
            .max(self.s12.norm())
            .max(self.s21.norm())
            .max(self.s22.norm())
    }
}

/// The 2x2 constant matrices of the chosen Dirac representation.
#[derive(Debug, Clone, Copy)]
pub struct DiracMatrices {
    pub identity: [[Complex64; 2]; 2],
    pub gamma0: [[Complex64; 2]; 2],
    pub gamma1: [[Complex64; 2]; 2],
    pub gamma5: [[Complex64; 2]; 2],
}

impl DiracMatrices {
    pub fn standard() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let mi = Complex64::new(0.0, -1.0);
        Self {
            identity: [[l, o], [o, l]],
            gamma0: [[o, l], [-l, o]],
            gamma1: [[o, mi], [mi, o]],
            gamma5: [[l, o], [o, -l]],
        }
    }
}

/// A point with spinor indices: the bilinear psibar_alpha psi_beta (x).
#[derive(Debug, Clone, Copy)]
pub struct FermionInsertion {
    pub point: ComplexPoint,
    pub alpha: u8,
    pub beta: u8,
}

impl FermionInsertion {
    pub fn new(point: ComplexPoint, alpha: u8, beta: u8) -> Result<Self> {
        if !(1..=2).contains(&alpha) || !(1..=2).contains(&beta) {
            return Err(Error::Input("spinor indices must be 1 or 2".into()));
        }
        Ok(Self { point, alpha, beta })
    }
}

/// Propagator selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propagator {
    Massless,
    Massive(f64),
}

impl Propagator {
    pub fn eval(&self, x: ComplexPoint, y: ComplexPoint) -> Result<SpinorMatrix> {
        match *self {
            Propagator::Massless => propagator_massless(x, y),
            Propagator::Massive(mu) => propagator_massive(x, y, mu),
        }
    }
}

/// Massless propagator: off-diagonal 1/(2 pi (xbar - ybar)) and
/// 1/(2 pi (x - y)), zero diagonal.
pub fn propagator_massless(x: ComplexPoint, y: ComplexPoint) -> Result<SpinorMatrix> {
    let dz = x.z() - y.z();
    if dz.norm() == 0.0 {
        return Err(Error::Coincident("massless propagator at x = y".into()));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(SpinorMatrix {
        s11: Complex64::new(0.0, 0.0),
        s12: Complex64::new(1.0, 0.0) / (two_pi * dz.conj()),
        s21: Complex64::new(1.0, 0.0) / (two_pi * dz),
        s22: Complex64::new(0.0, 0.0),
    })
}

/// Massive propagator. With r = |x-y| and u = x - y as a complex number,
///
///   s11 = s22 = (mu/2pi) K0(|mu| r),
///   s21 = (|mu|/2pi) K1(|mu| r) (ubar / r),
///   s12 = (|mu|/2pi) K1(|mu| r) (u / r),
///
/// using 2 d_x K0(|mu| r) = -|mu| K1(|mu| r) (xbar-ybar)/r (the chain rule
/// with d_x r = (xbar-ybar)/(2r) and K0' = -K1). Both signs of mu satisfy
/// (i dslash + mu) S = 0 away from the diagonal.
pub fn propagator_massive(x: ComplexPoint, y: ComplexPoint, mu: f64) -> Result<SpinorMatrix> {
    if mu == 0.0 {
        return propagator_massless(x, y);
    }
    let u = x.z() - y.z();
    let r = u.norm();
    if r == 0.0 {
        return Err(Error::Coincident("massive propagator at x = y".into()));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let am = mu.abs();
    let k0 = specfun::bessel_k(0, am * r)?;
    let k1 = specfun::bessel_k(1, am * r)?;
    let diag = Complex64::new(mu / two_pi * k0, 0.0);
    let off = am / two_pi * k1 / r;
    Ok(SpinorMatrix {
        s11: diag,
        s12: off * u,
        s21: off * u.conj(),
        s22: diag,
    })
}

/// Determinant correlator `det(S_{alpha_i beta_j}(x_i, y_j))`; `n = 0` gives 1.
/// Also returns the 1-norm condition number of the kernel matrix.
pub fn corr_determinant(
    xs: &[(ComplexPoint, u8)],
    ys: &[(ComplexPoint, u8)],
    prop: Propagator,
) -> Result<(Complex64, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::Input("corr_determinant needs equally many psibar and psi".into()));
    }
    let n = xs.len();
    if n == 0 {
        return Ok((Complex64::new(1.0, 0.0), 1.0));
    }
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, &(xi, ai)) in xs.iter().enumerate() {
        for (j, &(yj, bj)) in ys.iter().enumerate() {
            let coincident = xi.dist(&yj) == 0.0;
            if coincident {
                // S is singular on the diagonal; only the zero entries of the
                // massless propagator are defined there.
                if matches!(prop, Propagator::Massless) && ai == bj {
                    m[i][j] = Complex64::new(0.0, 0.0);
                    continue;
                }
                return Err(Error::Coincident(format!(
                    "kernel entry ({i},{j}) undefined at coincident points"
                )));
            }
            m[i][j] = prop.eval(xi, yj)?.entry(ai, bj);
        }
    }
    let det = combinat::lu_determinant(&m);
    let cond = combinat::condition_number(&m);
    Ok((det, cond))
}

/// Truncated correlator of bilinears via the cyclic sum
/// `(-1)^{n+1} sum_{cyclic pi} prod_i S_{a_{pi^i(1)} b_{pi^{i+1}(1)}}(x_{pi^i(1)}, x_{pi^{i+1}(1)})`.
///
/// Pairwise condition: for i != j either x_i != x_j, or alpha_i = beta_j and
/// alpha_j = beta_i (the entries that would be evaluated on the diagonal are
/// then never touched).
pub fn corr_truncated(insertions: &[FermionInsertion], prop: Propagator) -> Result<Complex64> {
    let n = insertions.len();
    if n == 0 {
        return Err(Error::Input("corr_truncated needs at least one insertion".into()));
    }
    if n > 9 {
        return Err(Error::Budget {
            context: format!("cyclic sum with n = {n}"),
            estimate: f64::NAN,
            error: f64::NAN,
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&insertions[i], &insertions[j]);
            if a.point.dist(&b.point) == 0.0 && !(a.alpha == b.beta && b.alpha == a.beta) {
                return Err(Error::Coincident(format!(
                    "insertions {i} and {j} coincide with incompatible indices"
                )));
            }
        }
    }
    if n == 1 {
        // single cycle: S_{alpha beta}(x, x): zero for the massless diagonal
        // (alpha = beta gives S_11 = S_22 = 0 only off-diagonal entries are
        // singular); everything else is undefined.
        let ins = insertions[0];
        if matches!(prop, Propagator::Massless) && ins.alpha == ins.beta {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::Coincident("n = 1 truncated correlator is singular".into()));
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let entry = |i: usize, j: usize| -> Result<Complex64> {
        let (a, b) = (&insertions[i], &insertions[j]);
        if a.point.dist(&b.point) == 0.0 {
            // allowed only when the entry is the structural zero of S_0
            if matches!(prop, Propagator::Massless) && a.alpha == b.beta {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Err(Error::Coincident("cycle touches a singular diagonal entry".into()));
        }
        Ok(prop.eval(a.point, b.point)?.entry(a.alpha, b.beta))
    };
    let mut rest: Vec<usize> = (1..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err: Option<Error> = None;
    permute_visit(&mut rest, 0, &mut |order| {
        if err.is_some() {
            return;
        }
        let mut cyc = Vec::with_capacity(n);
        cyc.push(0usize);
        cyc.extend_from_slice(order);
        let mut prod = Complex64::new(1.0, 0.0);
        for i in 0..n {
            match entry(cyc[i], cyc[(i + 1) % n]) {
                Ok(v) => prod *= v,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            }
        }
        total += prod;
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(total * sign)
}

fn permute_visit(items: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute_visit(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Massless chiral-density correlator
/// `< prod psibar_1 psi_1(x_k) prod psibar_2 psi_2(y_k') >` in closed form:
/// `1_{n=n'} (2pi)^{-2n} |det(1/(x_k - y_{k'}))|^2`.
pub fn chiral_density_corr(xs: &[ComplexPoint], ys: &[ComplexPoint]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Ok(0.0);
    }
    let n = xs.len();
    if n == 0 {
        return Ok(1.0);
    }
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let d = x.z() - y.z();
            if d.norm() == 0.0 {
                return Err(Error::Coincident("chiral correlator needs x_k != y_k'".into()));
            }
            m[i][j] = Complex64::new(1.0, 0.0) / d;
        }
    }
    let det = combinat::lu_determinant(&m);
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(det.norm_sqr() / two_pi.powi(2 * n as i32))
}

/// Cauchy--Vandermonde closed form
/// `det(1/(x_i - y_j)) = prod_{i<i'}(x_i - x_{i'}) prod_{j<j'}(y_{j'} - y_j)
///                       / prod_{i,j}(x_i - y_j)`.
///
/// The second product runs in the reversed orientation; with both products
/// oriented the same way the formula is off by (-1)^{n(n-1)/2}, as direct
/// expansion at n = 2 shows.
pub fn cauchy_determinant(xs: &[Complex64], ys: &[Complex64]) -> Complex64 {
    let n = xs.len();
    let mut num = Complex64::new(1.0, 0.0);
    for i in 0..n {
        for ip in i + 1..n {
            num *= xs[i] - xs[ip];
        }
    }
    for j in 0..n {
        for jp in j + 1..n {
            num *= ys[jp] - ys[j];
        }
    }
    let mut den = Complex64::new(1.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            den *= xs[i] - ys[j];
        }
    }
    num / den
}

/// Configuration for the reduction-identity check: the truncated correlator
/// with one extra current insertion psibar_2 psi_1(z) (or its conjugate with
/// psibar_1 psi_2(w)) factors as `(1/2pi) sum_i (1/(x_i - z) - 1/(y_i - z))`
/// times the correlator without the extra insertion.
pub struct ReductionConfig {
    /// chiral-density points with psibar_1 psi_1
    pub xs: Vec<ComplexPoint>,
    /// chiral-density points with psibar_2 psi_2
    pub ys: Vec<ComplexPoint>,
    /// current points psibar_2 psi_1
    pub zs: Vec<ComplexPoint>,
    /// conjugate current points psibar_1 psi_2
    pub ws: Vec<ComplexPoint>,
    /// the extra insertion and its indices: (point, alpha, beta) with
    /// (2, 1) for psibar_2 psi_1 or (1, 2) for psibar_1 psi_2
    pub extra: (ComplexPoint, u8, u8),
}

fn config_insertions(cfg: &ReductionConfig, with_extra: bool) -> Result<Vec<FermionInsertion>> {
    let mut ins = Vec::new();
    for &x in &cfg.xs {
        ins.push(FermionInsertion::new(x, 1, 1)?);
    }
    for &y in &cfg.ys {
        ins.push(FermionInsertion::new(y, 2, 2)?);
    }
    for &z in &cfg.zs {
        ins.push(FermionInsertion::new(z, 2, 1)?);
    }
    for &w in &cfg.ws {
        ins.push(FermionInsertion::new(w, 1, 2)?);
    }
    if with_extra {
        let (p, a, b) = cfg.extra;
        ins.push(FermionInsertion::new(p, a, b)?);
    }
    Ok(ins)
}

/// Verifies the reduction identity; the report carries both sides.
pub fn reduction_identity_check(cfg: &ReductionConfig, tol: f64) -> Result<CheckReport> {
    if cfg.xs.len() != cfg.ys.len() {
        // non-neutral: both sides vanish; evaluate lhs and compare to 0
        let lhs = if cfg.xs.is_empty() && cfg.ys.is_empty() && cfg.zs.is_empty() && cfg.ws.is_empty()
        {
            Complex64::new(0.0, 0.0)
        } else {
            corr_truncated(&config_insertions(cfg, true)?, Propagator::Massless)?
        };
        return Ok(CheckReport::from_complex("fermion_reduction_identity", lhs, Complex64::new(0.0, 0.0), tol));
    }
    let n = cfg.xs.len();
    let lhs = if n == 0 && cfg.zs.is_empty() && cfg.ws.is_empty() {
        // the identity is interpreted as 0 when the base correlator is empty
        Complex64::new(0.0, 0.0)
    } else {
        corr_truncated(&config_insertions(cfg, true)?, Propagator::Massless)?
    };
    let rhs = if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        let base = corr_truncated(&config_insertions(cfg, false)?, Propagator::Massless)?;
        let (zp, a, b) = cfg.extra;
        let z = zp.z();
        let mut factor = Complex64::new(0.0, 0.0);
        let two_pi = 2.0 * std::f64::consts::PI;
        match (a, b) {
            (2, 1) => {
                for i in 0..n {
                    factor += 1.0 / (cfg.xs[i].z() - z) - 1.0 / (cfg.ys[i].z() - z);
                }
            }
            // conjugate insertion: the x and y roles swap relative to the
            // holomorphic case (direct expansion of the cyclic sum; the
            // partial-fraction step acts on S_12 factors whose arguments
            // run from the psi_2 side)
            (1, 2) => {
                for i in 0..n {
                    factor += 1.0 / (cfg.ys[i].z().conj() - z.conj())
                        - 1.0 / (cfg.xs[i].z().conj() - z.conj());
                }
            }
            _ => return Err(Error::Input("extra insertion must be (2,1) or (1,2)".into())),
        }
        base * factor / two_pi
    };
    Ok(CheckReport::from_complex("fermion_reduction_identity", lhs, rhs, tol))
}
