//! Gaussian free field closed forms: regularized covariances, massless
//! charge correlations, mixed charge-gradient truncated correlations,
//! gradient correlations (pointwise and smeared), and the renormalization
//! counterterm.

use crate::error::{Error, Result};
use crate::point::ComplexPoint;
use crate::quad::{self, QuadratureSpec, TestFunction};
use crate::specfun::{self, EULER_GAMMA};
use crate::{combinat, report::CheckReport};
use num_complex::Complex64;

/// A charge insertion xi = (x, sigma) with sigma in {-1, +1}.
#[derive(Debug, Clone, Copy)]
pub struct ChargeInsertion {
    pub point: ComplexPoint,
    pub sigma: i8,
}

impl ChargeInsertion {
    pub fn new(point: ComplexPoint, sigma: i8) -> Result<Self> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::Input("charge must be +1 or -1".into()));
        }
        Ok(Self { point, sigma })
    }
}

/// UV scale, mass, and coupling of the regularized field.
#[derive(Debug, Clone, Copy)]
pub struct RegularizationParams {
    pub epsilon: f64,
    pub m: f64,
    pub beta: f64,
}

impl RegularizationParams {
    pub fn new(epsilon: f64, m: f64, beta: f64) -> Result<Self> {
        if epsilon <= 0.0 || m <= 0.0 {
            return Err(Error::Input("epsilon and m must be positive".into()));
        }
        if beta <= 0.0 || beta >= 6.0 * std::f64::consts::PI {
            return Err(Error::Input("beta must lie in (0, 6*pi)".into()));
        }
        Ok(Self { epsilon, m, beta })
    }
}

/// Regularized covariance
/// `c(x,y) = int_{eps^2}^inf ds e^{-m^2 s} e^{-|x-y|^2/(4s)} / (4 pi s)`.
///
/// At coincident points this is `Gamma(0, m^2 eps^2) / (4 pi)` in closed
/// form; otherwise adaptive quadrature on a log-transformed axis.
pub fn covariance(x: ComplexPoint, y: ComplexPoint, params: &RegularizationParams) -> Result<f64> {
    let r = x.dist(&y);
    covariance_r(r, params)
}

/// Covariance as a function of the distance r = |x - y|.
pub fn covariance_r(r: f64, params: &RegularizationParams) -> Result<f64> {
    let e2 = params.epsilon * params.epsilon;
    let m2 = params.m * params.m;
    if r == 0.0 {
        return Ok(specfun::inc_gamma0(m2 * e2)? / (4.0 * std::f64::consts::PI));
    }
    // substitute s = e^w so the integrand is well scaled over many decades
    let spec = QuadratureSpec::with_tol(1e-13, 1e-12);
    let f = |w: f64| {
        let s = w.exp();
        (-m2 * s - r * r / (4.0 * s)).exp() / (4.0 * std::f64::consts::PI)
    };
    // effective support: s from eps^2 to ~ max(r^2, 1/m^2) * big
    let w_lo = e2.ln();
    let w_hi = (1.0 / m2).ln() + 40.0_f64.ln();
    if w_hi <= w_lo {
        return Ok(0.0);
    }
    let (v, _) = quad::integrate_1d(f, w_lo, w_hi, &spec)?;
    Ok(v)
}

/// Massless charge correlator (the epsilon, m -> 0 limit)
/// `1_{n=n'} (4 e^{-gamma})^{beta n / 4 pi} prod_{i<j}|x_i-x_j|^{b} |y_i-y_j|^{b} / prod |x_i-y_j|^{b}`
/// with `b = beta/2pi`; `xs` carry charge +1 and `ys` charge -1.
pub fn massless_charge_corr(xs: &[ComplexPoint], ys: &[ComplexPoint], beta: f64) -> Result<f64> {
    if xs.len() != ys.len() {
        return Ok(0.0);
    }
    let n = xs.len();
    if n == 0 {
        return Ok(1.0);
    }
    let b = beta / (2.0 * std::f64::consts::PI);
    // assemble in log space to avoid overflow for clustered points
    let mut logv = (beta * n as f64 / (4.0 * std::f64::consts::PI))
        * (4.0f64.ln() - EULER_GAMMA);
    for i in 0..n {
        for j in i + 1..n {
            let dx = xs[i].dist(&xs[j]);
            let dy = ys[i].dist(&ys[j]);
            if dx == 0.0 || dy == 0.0 {
                return Err(Error::Coincident("massless_charge_corr needs distinct points".into()));
            }
            logv += b * (dx.ln() + dy.ln());
        }
    }
    for x in xs {
        for y in ys {
            let d = x.dist(y);
            if d == 0.0 {
                return Err(Error::Coincident("massless_charge_corr needs distinct points".into()));
            }
            logv -= b * d.ln();
        }
    }
    Ok(logv.exp())
}

/// Massless charge correlator for a signed configuration, any mix of charges.
pub fn massless_charge_corr_signed(insertions: &[ChargeInsertion], beta: f64) -> Result<f64> {
    let xs: Vec<ComplexPoint> = insertions
        .iter()
        .filter(|c| c.sigma > 0)
        .map(|c| c.point)
        .collect();
    let ys: Vec<ComplexPoint> = insertions
        .iter()
        .filter(|c| c.sigma < 0)
        .map(|c| c.point)
        .collect();
    massless_charge_corr(&xs, &ys, beta)
}

/// Finite-(epsilon, m) charge correlator
/// `eps^{-n beta/4pi} exp(-(beta/2) sum_{i,j} sigma_i sigma_j c(x_i, x_j))`,
/// assembled in log space (the `eps^{-1/2pi} e^{-c(0,0)}` factors would
/// otherwise overflow for small eps).
pub fn charge_corr_regularized(
    insertions: &[ChargeInsertion],
    params: &RegularizationParams,
) -> Result<f64> {
    let n = insertions.len();
    let c0 = covariance_r(0.0, params)?;
    let mut logv =
        -(params.beta / (4.0 * std::f64::consts::PI)) * (n as f64) * params.epsilon.ln();
    // diagonal terms of the quadratic form
    logv -= params.beta / 2.0 * (n as f64) * c0;
    for i in 0..n {
        for j in i + 1..n {
            let cij = covariance(insertions[i].point, insertions[j].point, params)?;
            logv -= params.beta
                * (insertions[i].sigma as f64)
                * (insertions[j].sigma as f64)
                * cij;
        }
    }
    Ok(logv.exp())
}

/// Truncated charge correlator of the massless field: cumulant of
/// [`massless_charge_corr_signed`] moments over subsets of the insertions.
pub fn truncated_charge_corr(insertions: &[ChargeInsertion], beta: f64) -> Result<f64> {
    let n = insertions.len();
    if n == 0 {
        return Err(Error::Input("need at least one insertion".into()));
    }
    if n > 8 {
        return Err(Error::Budget {
            context: format!("truncated_charge_corr with n = {n}"),
            estimate: f64::NAN,
            error: f64::NAN,
        });
    }
    let mut moments = combinat::SubsetValues::new();
    for s in 1u32..(1 << n) {
        let sub: Vec<ChargeInsertion> = (0..n)
            .filter(|i| s & (1 << i) != 0)
            .map(|i| insertions[i])
            .collect();
        moments.insert(
            s,
            Complex64::new(massless_charge_corr_signed(&sub, beta)?, 0.0),
        );
    }
    let cum = combinat::moments_to_cumulants(n, &moments)?;
    Ok(cum[&((1u32 << n) - 1)].re)
}

/// Mixed truncated correlator of charges with holomorphic-gradient insertions
/// at `dz` and antiholomorphic at `dw`:
///
/// `truncated_charge_corr(charges) * prod_j (i sqrt(beta)/4pi sum_k sigma_k/(x_k - z_j))
///  * prod_j' (i sqrt(beta)/4pi sum_k sigma_k/(xbar_k - wbar_j'))`.
pub fn mixed_truncated_corr(
    charges: &[ChargeInsertion],
    dz: &[ComplexPoint],
    dw: &[ComplexPoint],
    beta: f64,
) -> Result<Complex64> {
    if charges.is_empty() {
        return Err(Error::Input(
            "mixed_truncated_corr needs at least one charge; use gradient_truncated".into(),
        ));
    }
    let base = truncated_charge_corr(charges, beta)?;
    let pref = Complex64::new(0.0, beta.sqrt() / (4.0 * std::f64::consts::PI));
    let mut val = Complex64::new(base, 0.0);
    for z in dz {
        let mut s = Complex64::new(0.0, 0.0);
        for c in charges {
            let d = c.point.z() - z.z();
            if d.norm() == 0.0 {
                return Err(Error::Coincident("gradient point coincides with a charge".into()));
            }
            s += (c.sigma as f64) / d;
        }
        val *= pref * s;
    }
    for w in dw {
        let mut s = Complex64::new(0.0, 0.0);
        for c in charges {
            let d = c.point.z().conj() - w.z().conj();
            if d.norm() == 0.0 {
                return Err(Error::Coincident("gradient point coincides with a charge".into()));
            }
            s += (c.sigma as f64) / d;
        }
        val *= pref * s;
    }
    Ok(val)
}

/// Pure-gradient truncated correlator: `-1/(4 pi (z1 - z2)^2)` for (2, 0),
/// its conjugate for (0, 2), and 0 otherwise.
pub fn gradient_truncated(dz: &[ComplexPoint], dw: &[ComplexPoint]) -> Result<Complex64> {
    let (q, qp) = (dz.len(), dw.len());
    if q + qp == 0 {
        return Err(Error::Input("need at least one gradient insertion".into()));
    }
    match (q, qp) {
        (2, 0) => {
            let d = dz[0].z() - dz[1].z();
            if d.norm() == 0.0 {
                return Err(Error::Coincident("gradient two-point at coincident points".into()));
            }
            Ok(-1.0 / (4.0 * std::f64::consts::PI * d * d))
        }
        (0, 2) => {
            let d = (dw[0].z() - dw[1].z()).conj();
            if d.norm() == 0.0 {
                return Err(Error::Coincident("gradient two-point at coincident points".into()));
            }
            Ok(-1.0 / (4.0 * std::f64::consts::PI * d * d))
        }
        _ => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// Kind of smeared gradient pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientKind {
    /// `< d phi(g1) d phi(g2) >`
    HoloHolo,
    /// `< dbar phi(g1) dbar phi(g2) >`
    AntiAnti,
    /// `< d phi(g1) dbar phi(g2) >`
    HoloAnti,
}

/// Result of a smeared gradient two-point evaluation; for the `d d` case the
/// two independent routes are both returned.
#[derive(Debug, Clone)]
pub struct SmearedGradient {
    /// principal-value kernel route `-(1/4pi) p.v. int g1 g2/(x-y)^2`
    pub pv_route: Complex64,
    /// log-kernel integration-by-parts route
    /// `(1/2pi) int int d g1(x) d g2(y) log |x-y|^{-1}` (for `d d`)
    pub log_route: Complex64,
}

/// Smeared gradient two-point function, by both evaluation routes where
/// two exist. For `HoloAnti` both fields carry `(1/4) int g1 g2`.
pub fn gradient_smeared(
    g1: &TestFunction,
    g2: &TestFunction,
    kind: GradientKind,
    spec: &QuadratureSpec,
) -> Result<SmearedGradient> {
    match kind {
        GradientKind::HoloAnti => {
            // (1/4) int g1 g2
            let c1 = g1.center;
            let r = g1.radius.max(g2.radius + g1.center.dist(&g2.center));
            let v = quad::integrate_disk(
                |p| Complex64::new(g1.eval(p) * g2.eval(p), 0.0),
                c1,
                r,
                spec,
            )? * 0.25;
            Ok(SmearedGradient {
                pv_route: v,
                log_route: v,
            })
        }
        GradientKind::HoloHolo => {
            let pv = quad::integrate_pv_pair(g1, g2, spec)?
                * (-1.0 / (4.0 * std::f64::consts::PI));
            let log_route = log_kernel_route(g1, g2, false, spec)?;
            Ok(SmearedGradient { pv_route: pv, log_route })
        }
        GradientKind::AntiAnti => {
            // conjugate kernel; for real test functions this is the
            // conjugate of the HoloHolo value
            let v = gradient_smeared(g1, g2, GradientKind::HoloHolo, spec)?;
            Ok(SmearedGradient {
                pv_route: v.pv_route.conj(),
                log_route: v.log_route.conj(),
            })
        }
    }
}

/// `(1/2pi) int int D g1(x) D g2(y) log |x-y|^{-1}` with D the (anti)holomorphic
/// Wirtinger derivative of the bump, evaluated analytically.
fn log_kernel_route(
    g1: &TestFunction,
    g2: &TestFunction,
    anti: bool,
    _spec: &QuadratureSpec,
) -> Result<Complex64> {
    let d1 = move |p: ComplexPoint| if anti { g1.dbar_eval(p) } else { g1.d_eval(p) };
    let d2 = move |p: ComplexPoint| if anti { g2.dbar_eval(p) } else { g2.d_eval(p) };
    let outer = quad::pair_kernel_integral(
        &d1,
        (g1.center, g1.radius),
        &d2,
        (g2.center, g2.radius),
        quad::PairKernel::Log,
    )?;
    Ok(outer / (2.0 * std::f64::consts::PI))
}

/// The renormalization counterterm
/// `A(xi1, xi2 | eps, m) = <:e^{i s1 b phi(x1)}: :e^{i s2 b phi(x2)}:>^T` at
/// finite regularization, and its eps, m -> 0 limit
/// `delta_{s1+s2,0} e^{-gamma beta/4pi} (2/|x1-x2|)^{beta/2pi}`.
pub fn counterterm_a(
    xi1: &ChargeInsertion,
    xi2: &ChargeInsertion,
    params: &RegularizationParams,
) -> Result<f64> {
    // truncated pair = <XY> - <X><Y>; in the regularized Gaussian form:
    // <X><Y> = [eps^{-beta/4pi} e^{-(beta/2) c(0)}]^2 and
    // <XY> = <X><Y> * exp(-beta s1 s2 c(x1,x2)).
    let c0 = covariance_r(0.0, params)?;
    let c12 = covariance(xi1.point, xi2.point, params)?;
    let log_norm = -(params.beta / (4.0 * std::f64::consts::PI)) * params.epsilon.ln() * 2.0
        - params.beta * c0;
    let s1s2 = (xi1.sigma as f64) * (xi2.sigma as f64);
    Ok(log_norm.exp() * ((-params.beta * s1s2 * c12).exp() - 1.0))
}

/// eps, m -> 0 limit of the counterterm.
pub fn counterterm_a_limit(xi1: &ChargeInsertion, xi2: &ChargeInsertion, beta: f64) -> Result<f64> {
    if xi1.sigma + xi2.sigma != 0 {
        return Ok(0.0);
    }
    let r = xi1.point.dist(&xi2.point);
    if r == 0.0 {
        return Err(Error::Coincident("counterterm limit needs distinct points".into()));
    }
    let b = beta / (2.0 * std::f64::consts::PI);
    Ok((-EULER_GAMMA * beta / (4.0 * std::f64::consts::PI)).exp() * (2.0 / r).powf(b))
}

/// The covariance small-mass law: check that
/// `cov + (1/2pi) log(m |x-y| / 2) + gamma/2pi -> 0` as eps, m -> 0.
pub fn covariance_smallm_check(r: f64, m: f64, epsilon: f64, tol: f64) -> Result<CheckReport> {
    let params = RegularizationParams::new(epsilon, m, 4.0 * std::f64::consts::PI)?;
    let cov = covariance_r(r, &params)?;
    let lhs = cov + (m * r / 2.0).ln() / (2.0 * std::f64::consts::PI)
        + EULER_GAMMA / (2.0 * std::f64::consts::PI);
    Ok(CheckReport::from_scalar("gff_covariance_small_m", lhs, 0.0, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x0: f64, x1: f64) -> ComplexPoint {
        ComplexPoint::new(x0, x1)
    }

    #[test]
    fn covariance_at_coincident_points() {
        let params = RegularizationParams::new(0.1, 0.5, 4.0 * std::f64::consts::PI).unwrap();
        let got = covariance_r(0.0, &params).unwrap();
        let want = specfun::inc_gamma0(0.0025).unwrap() / (4.0 * std::f64::consts::PI);
        assert!((got - want).abs() < 1e-14);
        // quadrature route agrees with the closed form at tiny r
        let got2 = covariance_r(1e-12, &params).unwrap();
        assert!((got2 - want).abs() < 1e-8, "{got2} vs {want}");
    }

    #[test]
    fn covariance_eps_to_zero_is_k0() {
        // at |x-y| = 1, m = 1: c -> K0(1)/(2 pi)
        let params = RegularizationParams::new(1e-7, 1.0, 4.0 * std::f64::consts::PI).unwrap();
        let got = covariance(pt(0.0, 0.0), pt(0.0, 1.0), &params).unwrap();
        let want = specfun::bessel_k(0, 1.0).unwrap() / (2.0 * std::f64::consts::PI);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn covariance_small_m_expansion() {
        let rep = covariance_smallm_check(1.0, 1e-4, 1e-6, 1e-3).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn charge_pair_at_free_fermion_point() {
        // n = n' = 1, beta = 4pi, |x-y| = 1 -> 4 e^{-gamma}
        let beta = 4.0 * std::f64::consts::PI;
        let v = massless_charge_corr(&[pt(0.0, 0.0)], &[pt(0.0, 1.0)], beta).unwrap();
        let want = 4.0 * (-EULER_GAMMA).exp();
        assert!((v - want).abs() < 1e-13, "{v} vs {want}");
        // n != n' -> 0
        let v = massless_charge_corr(&[pt(0.0, 0.0), pt(0.0, 2.0)], &[pt(0.0, 1.0)], beta).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn charge_corr_scaling_at_4pi() {
        // beta = 4pi: rescaling all points by lambda rescales the n-pair
        // correlator by lambda^{-2n}
        let beta = 4.0 * std::f64::consts::PI;
        let xs = [pt(0.0, 0.0), pt(0.3, 1.2)];
        let ys = [pt(0.9, -0.4), pt(-0.6, 0.8)];
        let v = massless_charge_corr(&xs, &ys, beta).unwrap();
        let lam = 1.7;
        let scale = |p: &ComplexPoint| pt(p.x0 * lam, p.x1 * lam);
        let xs2: Vec<_> = xs.iter().map(scale).collect();
        let ys2: Vec<_> = ys.iter().map(scale).collect();
        let v2 = massless_charge_corr(&xs2, &ys2, beta).unwrap();
        assert!((v2 - v * lam.powi(-4)).abs() < 1e-12 * v.abs());
    }

    #[test]
    fn euclidean_invariance() {
        let beta = 4.0 * std::f64::consts::PI;
        let charges = [
            ChargeInsertion::new(pt(0.1, 0.2), 1).unwrap(),
            ChargeInsertion::new(pt(-0.5, 0.9), -1).unwrap(),
            ChargeInsertion::new(pt(0.8, -0.3), 1).unwrap(),
            ChargeInsertion::new(pt(-0.2, -0.7), -1).unwrap(),
        ];
        let v = truncated_charge_corr(&charges, beta).unwrap();
        let moved: Vec<ChargeInsertion> = charges
            .iter()
            .map(|c| ChargeInsertion {
                point: c.point.rotate(0.83).translate(Complex64::new(2.0, -1.0)),
                sigma: c.sigma,
            })
            .collect();
        let v2 = truncated_charge_corr(&moved, beta).unwrap();
        assert!((v - v2).abs() < 1e-11 * v.abs().max(1.0), "{v} vs {v2}");
    }

    #[test]
    fn truncated_charge_basics() {
        let beta = 4.0 * std::f64::consts::PI;
        // single insertion: vanishes (non-neutral one-point)
        let one = [ChargeInsertion::new(pt(0.0, 0.0), 1).unwrap()];
        assert_eq!(truncated_charge_corr(&one, beta).unwrap(), 0.0);
        // neutral pair: truncated = plain (one-points vanish)
        let pair = [
            ChargeInsertion::new(pt(0.0, 0.0), 1).unwrap(),
            ChargeInsertion::new(pt(0.0, 1.3), -1).unwrap(),
        ];
        let t = truncated_charge_corr(&pair, beta).unwrap();
        let p = massless_charge_corr_signed(&pair, beta).unwrap();
        assert!((t - p).abs() < 1e-13);
        // (+,+,-,-): truncated = moment - the two pair pairings
        let quad = [
            ChargeInsertion::new(pt(0.0, 0.0), 1).unwrap(),
            ChargeInsertion::new(pt(0.2, 0.9), 1).unwrap(),
            ChargeInsertion::new(pt(-0.8, 0.4), -1).unwrap(),
            ChargeInsertion::new(pt(0.7, -0.5), -1).unwrap(),
        ];
        let t = truncated_charge_corr(&quad, beta).unwrap();
        let m = massless_charge_corr_signed(&quad, beta).unwrap();
        let p = |i: usize, j: usize| {
            massless_charge_corr_signed(&[quad[i], quad[j]], beta).unwrap()
        };
        // nonzero pair moments are only (+,-) pairs
        let want = m - p(0, 2) * p(1, 3) - p(0, 3) * p(1, 2);
        assert!((t - want).abs() < 1e-12 * want.abs().max(1.0), "{t} vs {want}");
    }

    #[test]
    fn mixed_corr_reduces_and_factorizes() {
        let beta = 4.0 * std::f64::consts::PI;
        let charges = [
            ChargeInsertion::new(pt(0.0, 0.0), 1).unwrap(),
            ChargeInsertion::new(pt(0.0, 1.0), -1).unwrap(),
        ];
        // no gradient insertions: reduces to the truncated charge correlator
        let v = mixed_truncated_corr(&charges, &[], &[], beta).unwrap();
        let base = truncated_charge_corr(&charges, beta).unwrap();
        assert!((v - Complex64::new(base, 0.0)).norm() < 1e-13);
        // one z insertion: explicit prefactor
        let z = pt(0.4, -0.7);
        let v = mixed_truncated_corr(&charges, &[z], &[], beta).unwrap();
        let pref = Complex64::new(0.0, beta.sqrt() / (4.0 * std::f64::consts::PI))
            * (1.0 / (charges[0].point.z() - z.z()) - 1.0 / (charges[1].point.z() - z.z()));
        assert!((v - pref * base).norm() < 1e-13);
        // odd charge count vanishes through the indicator
        let odd = [
            ChargeInsertion::new(pt(0.0, 0.0), 1).unwrap(),
            ChargeInsertion::new(pt(0.0, 1.0), -1).unwrap(),
            ChargeInsertion::new(pt(1.0, 1.0), 1).unwrap(),
        ];
        let v = mixed_truncated_corr(&odd, &[z], &[], beta).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn conjugation_symmetry() {
        // flipping all charges and swapping z <-> w conjugates the value
        let beta = 4.0 * std::f64::consts::PI;
        let charges = [
            ChargeInsertion::new(pt(0.1, 0.3), 1).unwrap(),
            ChargeInsertion::new(pt(-0.4, 0.8), -1).unwrap(),
        ];
        let flipped: Vec<ChargeInsertion> = charges
            .iter()
            .map(|c| ChargeInsertion {
                point: c.point,
                sigma: -c.sigma,
            })
            .collect();
        let z = [pt(0.9, -0.2)];
        let w = [pt(-0.7, -0.6)];
        let v = mixed_truncated_corr(&charges, &z, &w, beta).unwrap();
        let vc = mixed_truncated_corr(&flipped, &w, &z, beta).unwrap();
        assert!((v.conj() - vc).norm() < 1e-13 * v.norm().max(1.0), "{v} vs {vc}");
    }

    #[test]
    fn gradient_pointwise_values() {
        // (2,0) at z1 - z2 = 1 -> -1/(4 pi)
        let v = gradient_truncated(&[pt(0.0, 1.0), pt(0.0, 0.0)], &[]).unwrap();
        let want = -1.0 / (4.0 * std::f64::consts::PI);
        assert!((v - Complex64::new(want, 0.0)).norm() < 1e-15);
        // (1,1) -> 0 pointwise
        let v = gradient_truncated(&[pt(0.0, 1.0)], &[pt(0.0, 0.0)]).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        // (3,0) -> 0
        let v = gradient_truncated(&[pt(0.0, 1.0), pt(0.0, 0.0), pt(1.0, 0.0)], &[]).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn counterterm_limit_values() {
        let beta = 4.0 * std::f64::consts::PI;
        let plus = ChargeInsertion::new(pt(0.0, 0.0), 1).unwrap();
        let minus = ChargeInsertion::new(pt(0.0, 1.0), -1).unwrap();
        let plus2 = ChargeInsertion::new(pt(0.0, 1.0), 1).unwrap();
        // same charges -> 0
        assert_eq!(counterterm_a_limit(&plus, &plus2, beta).unwrap(), 0.0);
        // opposite at distance 1 -> 4 e^{-gamma}, consistent with the
        // massless pair correlator
        let lim = counterterm_a_limit(&plus, &minus, beta).unwrap();
        let pair = massless_charge_corr(&[plus.point], &[minus.point], beta).unwrap();
        assert!((lim - pair).abs() < 1e-13);
        assert!((lim - 4.0 * (-EULER_GAMMA).exp()).abs() < 1e-13);
    }

    #[test]
    fn counterterm_converges_to_limit() {
        let beta = 4.0 * std::f64::consts::PI;
        let plus = ChargeInsertion::new(pt(0.0, 0.0), 1).unwrap();
        let minus = ChargeInsertion::new(pt(0.0, 1.0), -1).unwrap();
        let lim = counterterm_a_limit(&plus, &minus, beta).unwrap();
        let mut devs = Vec::new();
        for &(eps, m) in &[(0.05, 0.1), (0.02, 0.04), (0.008, 0.016)] {
            let params = RegularizationParams::new(eps, m, beta).unwrap();
            let v = counterterm_a(&plus, &minus, &params).unwrap();
            devs.push((v - lim).abs());
        }
        assert!(devs[0] > devs[1] && devs[1] > devs[2], "devs {devs:?}");
        assert!(devs[2] < 0.05 * lim.abs());
    }
}
