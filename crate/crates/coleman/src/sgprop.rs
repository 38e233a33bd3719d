//! The massless sine-Gordon propagator at beta = 4 pi: pointwise two-point
//! kernels, the Fourier covariance `C_mu(p) = mu^{-2} F(|p|/mu)`, and
//! independent cross-checks of the bubble-integral representation.

use crate::bosonize;
use crate::error::{Error, Result};
use crate::gff::{self, GradientKind};
use crate::point::ComplexPoint;
use crate::quad::{self, QuadratureSpec, TestFunction};
use crate::report::CheckReport;
use crate::specfun;
use num_complex::Complex64;

/// Coupling of the massless sine-Gordon model; the fermion mass is `mu = A z`.
#[derive(Debug, Clone, Copy)]
pub struct SgParams {
    pub z: f64,
}

impl SgParams {
    pub fn mu(&self) -> f64 {
        bosonize::constant_a() * self.z
    }
}

/// Taylor coefficients of F about 0 (even powers), derived once from
/// `F(x) = 1/x^2 - 4 arsinh(x/2) / (x^3 sqrt(4+x^2))` by series expansion of
/// arsinh and the square root; radius of convergence 2:
/// `F = 1/6 - x^2/30 + x^4/140 - x^6/630 + x^8/2772 - ...`.
const F_TAYLOR: [f64; 5] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 140.0,
    -1.0 / 630.0,
    1.0 / 2772.0,
];

/// `F(x) = 1/x^2 - 4 arsinh(x/2)/(x^3 sqrt(4+x^2))`, with the Taylor branch
/// below x = 0.1 where the two terms cancel catastrophically.
pub fn f_hat(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("f_hat requires x > 0, got {x}")));
    }
    if x < 0.1 {
        let t = x * x;
        let mut acc = 0.0;
        for &c in F_TAYLOR.iter().rev() {
            acc = acc * t + c;
        }
        return Ok(acc);
    }
    Ok(1.0 / (x * x) - 4.0 * specfun::arsinh(x / 2.0) / (x.powi(3) * (4.0 + x * x).sqrt()))
}

/// The limit value F(0+) = 1/6.
pub fn f_hat_origin() -> f64 {
    1.0 / 6.0
}

/// Fourier covariance `C_mu(p) = mu^{-2} F(|p|/mu)`; `C_mu(0) = 1/(6 mu^2)`.
pub fn c_hat(p: ComplexPoint, mu: f64) -> Result<f64> {
    if mu == 0.0 {
        return Err(Error::Domain("c_hat requires mu != 0".into()));
    }
    let ap = p.z().norm();
    if ap == 0.0 {
        return Ok(1.0 / (6.0 * mu * mu));
    }
    Ok(f_hat(ap / mu.abs())? / (mu * mu))
}

/// Three-route evaluation of the Fourier covariance at `p`:
/// (a) the closed form, (b) the radial-angular double integral of the bubble
/// representation, (c) the residue-reduced single radial integral. The
/// report compares (b) and (c) against (a); the imaginary part of (b) is
/// required to be negligible.
pub fn bubble_check(p: ComplexPoint, mu: f64, tol: f64) -> Result<CheckReport> {
    if mu == 0.0 {
        return Err(Error::Domain("bubble_check requires mu != 0".into()));
    }
    let ap = p.z().norm();
    if ap == 0.0 {
        return Err(Error::Domain("bubble_check requires p != 0".into()));
    }
    let mu_p = mu.abs() / ap;

    let closed = c_hat(p, mu)?;

    // route (b): (2/|p|^2) int_0^inf dr r/(r^2+mu_p^2) *
    //            int_0^{2pi} (dt/2pi) e^{-it} r (1 - r e^{-it}) /
    //                        (1 + r^2 - 2 r cos t + mu_p^2)
    //
    // The angular average decays like mu_p^2/r^4, so the radial integrand
    // falls off like r^-5; the tail beyond r_max contributes O(mu_p^2 /
    // r_max^4), which at r_max = 100 max(1, mu_p) is far below tolerance.
    // Cutting there also avoids amplifying the cancellation noise of the
    // angular sum at huge r.
    let r_max = 100.0 * mu_p.max(1.0);
    let spec = QuadratureSpec::with_tol(1e-11, 1e-10);
    let angular = |r: f64| -> Complex64 {
        // smooth periodic integrand: trapezoid converges spectrally
        let m = 256;
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..m {
            let t = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
            let e = Complex64::from_polar(1.0, -t);
            let den = 1.0 + r * r - 2.0 * r * t.cos() + mu_p * mu_p;
            s += e * r * (1.0 - r * e) / den;
        }
        s / m as f64
    };
    let (bubble_re, _) = quad::integrate_1d(
        |r| r / (r * r + mu_p * mu_p) * angular(r).re,
        0.0,
        r_max,
        &spec,
    )?;
    let (bubble_im, _) = quad::integrate_1d(
        |r| r / (r * r + mu_p * mu_p) * angular(r).im,
        0.0,
        r_max,
        &spec,
    )?;
    let route_b = 2.0 / (ap * ap) * bubble_re;
    let imag_part = 2.0 / (ap * ap) * bubble_im;

    // route (c): the residue-reduced radial integral; written through
    // s = sqrt((r^2+mu_p^2-1)^2 + 4 mu_p^2) to avoid cancellation at large r
    let radial = |r: f64| {
        let m2 = mu_p * mu_p;
        let s = (((r * r + m2 - 1.0) * (r * r + m2 - 1.0)) + 4.0 * m2).sqrt();
        let num = -m2 + r * r - (m2 + r * r).powi(2) + (m2 + r * r) * s;
        r / (r * r + m2) * num / (2.0 * s)
    };
    let (rad, _) = quad::integrate_1d(radial, 0.0, r_max, &spec)?;
    let route_c = 2.0 / (ap * ap) * rad;

    let err_b = ((route_b - closed) / closed).abs();
    let err_c = ((route_c - closed) / closed).abs();
    let max_err = err_b.max(err_c);
    let mut rep = CheckReport::from_scalar("sg_bubble_triple_agreement", route_b, closed, tol);
    rep.computed = vec![route_b, route_c, imag_part];
    rep.reference = vec![closed, closed, 0.0];
    rep.rel_err = max_err;
    rep.abs_err = (route_b - closed).abs().max((route_c - closed).abs());
    rep.pass = max_err <= tol && imag_part.abs() <= 1e-8;
    rep.inputs = format!("|p|/mu = {:.6}", 1.0 / mu_p);
    Ok(rep)
}

/// Which two-point kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoPointKind {
    /// `< d phi d phi >`: `-(B^2/pi^2) (d_x K0(mu r))^2` (complex square)
    HoloHolo,
    /// `< d phi dbar phi >`: `(B^2 A^2 z^2 / 4 pi^2) K0(mu r)^2`
    HoloAnti,
    /// charge-neutral pair: `(A^2/pi^2) |d_x K0(mu r)|^2`
    ChargeNeutral,
    /// same-charge pair: `-(A^4 z^2 / 4 pi^2) K0(mu r)^2`
    ChargeSame,
}

/// Pointwise two-point kernel of the massless sine-Gordon model at
/// `beta = 4 pi` with coupling `z`; the mass scale is `mu = A |z|`.
///
/// At `z = 0` the GFF limits are returned. The holomorphic-gradient kernel
/// keeps the complex square `(d_x K0)^2` while the charge-neutral kernel
/// carries the modulus square, exactly as the displays are printed.
pub fn two_point(kind: TwoPointKind, x: ComplexPoint, y: ComplexPoint, z: f64) -> Result<Complex64> {
    let u = x.z() - y.z();
    let r = u.norm();
    if r == 0.0 {
        return Err(Error::Coincident("two_point at coincident points".into()));
    }
    let a = bosonize::constant_a();
    let b = bosonize::constant_b();
    let pi = std::f64::consts::PI;
    let mu = a * z.abs();
    if z == 0.0 {
        // GFF values
        return Ok(match kind {
            TwoPointKind::HoloHolo => -1.0 / (4.0 * pi * u * u),
            TwoPointKind::HoloAnti => Complex64::new(0.0, 0.0),
            TwoPointKind::ChargeNeutral => {
                Complex64::new(4.0 * (-specfun::EULER_GAMMA).exp() / (r * r), 0.0)
            }
            TwoPointKind::ChargeSame => Complex64::new(0.0, 0.0),
        });
    }
    // d_x K0(mu r) = -(mu/2) K1(mu r) (xbar - ybar)/r
    let k0 = specfun::bessel_k(0, mu * r)?;
    let k1 = specfun::bessel_k(1, mu * r)?;
    let dk0 = -(mu / 2.0) * k1 / r * u.conj();
    Ok(match kind {
        TwoPointKind::HoloHolo => -(b * b) / (pi * pi) * dk0 * dk0,
        TwoPointKind::HoloAnti => {
            Complex64::new(b * b * a * a * z * z / (4.0 * pi * pi) * k0 * k0, 0.0)
        }
        TwoPointKind::ChargeNeutral => Complex64::new(a * a / (pi * pi) * dk0.norm_sqr(), 0.0),
        TwoPointKind::ChargeSame => {
            Complex64::new(-a.powi(4) * z * z / (4.0 * pi * pi) * k0 * k0, 0.0)
        }
    })
}

/// Verifies the smeared `d phi dbar phi` two-point function: the assembled
/// value (Bessel term plus contact term) must equal the sum of the two
/// independently computed pieces, with the contact piece coming from the
/// free-field gradient pairing.
pub fn contact_term_check(
    f1: &TestFunction,
    f2: &TestFunction,
    z: f64,
    tol: f64,
) -> Result<CheckReport> {
    let spec = QuadratureSpec::with_tol(1e-8, 1e-8);
    // Bessel piece: (B^2 A^2 z^2 / 4pi^2) int int f1(x) f2(y) K0(mu|x-y|)^2,
    // zero at z = 0.
    let bessel_piece = if z == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let a = bosonize::constant_a();
        let b = bosonize::constant_b();
        let mu = a * z.abs();
        let pref = b * b * a * a * z * z / (4.0 * std::f64::consts::PI.powi(2));
        let g1 = |p: ComplexPoint| Complex64::new(f1.eval(p), 0.0);
        let g2 = |p: ComplexPoint| Complex64::new(f2.eval(p), 0.0);
        quad::pair_kernel_integral(
            &g1,
            (f1.center, f1.radius),
            &g2,
            (f2.center, f2.radius),
            quad::PairKernel::K0Squared { mu },
        )? * pref
    };
    // contact piece via the GFF route
    let contact = gff::gradient_smeared(f1, f2, GradientKind::HoloAnti, &spec)?.pv_route;
    let assembled = bessel_piece + contact;

    // independent direct evaluation of the two pieces: the Bessel kernel by
    // a plain midpoint tensor grid, the contact term by (1/4) int f1 f2 on a
    // radial grid
    let direct_contact = {
        let n = 400;
        let r = f1.radius.max(f1.center.dist(&f2.center) + f2.radius);
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let p = ComplexPoint::new(
                    f1.center.x0 - r + 2.0 * r * (i as f64 + 0.5) / n as f64,
                    f1.center.x1 - r + 2.0 * r * (j as f64 + 0.5) / n as f64,
                );
                s += f1.eval(p) * f2.eval(p);
            }
        }
        0.25 * s * (2.0 * r / n as f64).powi(2)
    };
    let direct = bessel_piece + Complex64::new(direct_contact, 0.0);
    Ok(
        CheckReport::from_complex("sg_contact_term", assembled, direct, tol)
            .with_inputs(format!("z = {z}")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x0: f64, x1: f64) -> ComplexPoint {
        ComplexPoint::new(x0, x1)
    }

    #[test]
    fn f_small_x_limit() {
        // F -> 1/6 at 0; at x = 1e-3 the deviation is ~x^2/30
        let v = f_hat(1e-3).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-6);
        // 22-digit reference at 1e-3
        assert!((v - 0.16666663333334048869).abs() < 1e-15, "{v}");
        // continuity across the series/direct switch at 0.1
        let lo = f_hat(0.1 - 1e-12).unwrap();
        let hi = f_hat(0.1 + 1e-12).unwrap();
        assert!((lo - hi).abs() < 1e-12);
    }

    #[test]
    fn f_golden_values() {
        let cases = [
            (1.0, 0.13918211807199192222),
            (0.1, 0.16633404603534522972),
            (0.5, 0.15875629267870713639),
            (5.0, 0.030211739367003090083),
            (10.0, 0.0090929870595284694435),
        ];
        for (x, want) in cases {
            let got = f_hat(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "F({x}) = {got}, want {want}");
        }
        // direct form F(1) = 1 - 4 arsinh(1/2)/sqrt(5)
        let direct = 1.0 - 4.0 * specfun::arsinh(0.5) / 5.0f64.sqrt();
        assert!((f_hat(1.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn f_large_x_recovers_gff() {
        let x = 1e3;
        let v = f_hat(x).unwrap() * x * x;
        assert!((v - 1.0).abs() < 1e-2, "x^2 F(x) = {v}");
    }

    #[test]
    fn c_hat_values_and_positivity() {
        assert!((c_hat(pt(0.0, 0.0), 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        // |p| >> mu: c_hat ~ 1/|p|^2
        let p = pt(0.0, 100.0);
        let v = c_hat(p, 1.0).unwrap();
        assert!((v * 1e4 - 1.0).abs() < 0.01, "{v}");
        // positivity and monotone decrease on a log grid
        let mut prev = f64::INFINITY;
        for i in 0..60 {
            let ap = 10f64.powf(-2.0 + 5.0 * i as f64 / 59.0);
            let v = c_hat(pt(0.0, ap), 1.0).unwrap();
            assert!(v > 0.0);
            assert!(v < prev, "not decreasing at |p| = {ap}");
            prev = v;
        }
        assert!(c_hat(pt(0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn bubble_routes_agree_at_unit_ratio() {
        let rep = bubble_check(pt(0.0, 1.0), 1.0, 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn bubble_routes_agree_at_large_ratio() {
        let rep = bubble_check(pt(0.0, 10.0), 1.0, 1e-5).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn two_point_gff_limits() {
        // mu -> 0 of the holo-holo kernel approaches -1/(4 pi (x-y)^2)
        let x = pt(0.0, 1.0);
        let y = pt(0.0, 0.0);
        let gff_val = two_point(TwoPointKind::HoloHolo, x, y, 0.0).unwrap();
        let z_small = 1e-3 / bosonize::constant_a(); // mu = 1e-3
        let v = two_point(TwoPointKind::HoloHolo, x, y, z_small).unwrap();
        assert!(
            (v - gff_val).norm() < 1e-3 * gff_val.norm(),
            "{v} vs {gff_val}"
        );
        // charge-neutral kernel approaches 4 e^{-gamma}/r^2 at r = 1
        let gff_c = two_point(TwoPointKind::ChargeNeutral, x, y, 0.0).unwrap();
        let vc = two_point(TwoPointKind::ChargeNeutral, x, y, z_small).unwrap();
        assert!((vc - gff_c).norm() < 1e-3 * gff_c.norm(), "{vc} vs {gff_c}");
        assert!((gff_c.re - 4.0 * (-specfun::EULER_GAMMA).exp()).abs() < 1e-14);
    }

    #[test]
    fn two_point_exponential_decay() {
        // log|kernel| slope between r = 5 and r = 10 is about -2 mu for the
        // holo-anti kernel at z = 0.5
        let z = 0.5;
        let mu = bosonize::constant_a() * z;
        let v5 = two_point(TwoPointKind::HoloAnti, pt(0.0, 5.0), pt(0.0, 0.0), z)
            .unwrap()
            .norm();
        let v10 = two_point(TwoPointKind::HoloAnti, pt(0.0, 10.0), pt(0.0, 0.0), z)
            .unwrap()
            .norm();
        let slope = (v10.ln() - v5.ln()) / 5.0;
        assert!(
            ((slope + 2.0 * mu) / (2.0 * mu)).abs() < 0.05,
            "slope {slope} vs -2mu = {}",
            -2.0 * mu
        );
    }

    #[test]
    fn contact_term_cases() {
        use crate::quad::TestFunction;
        // z = 0: only the contact piece survives
        let f1 = TestFunction::bump(pt(0.0, 0.0), 0.8, 1.0);
        let f2 = TestFunction::bump(pt(0.1, 0.2), 0.8, 1.0);
        let rep = contact_term_check(&f1, &f2, 0.0, 1e-5).unwrap();
        assert!(rep.pass, "{rep:?}");
        // disjoint supports: the contact term contributes nothing and the
        // Bessel piece matches the pointwise-kernel quadrature
        let g2 = TestFunction::bump(pt(0.0, 3.0), 0.8, 1.0);
        let rep = contact_term_check(&f1, &g2, 0.7, 1e-5).unwrap();
        assert!(rep.pass, "{rep:?}");
        // overlapping bumps at z = 1: assembled equals the two-piece sum
        let rep = contact_term_check(&f1, &f2, 1.0, 1e-5).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn two_point_rotation_invariance_and_signs() {
        let x = pt(0.4, 0.8);
        let y = pt(-0.3, 0.1);
        for kind in [
            TwoPointKind::HoloAnti,
            TwoPointKind::ChargeNeutral,
            TwoPointKind::ChargeSame,
        ] {
            let v = two_point(kind, x, y, 0.7).unwrap();
            let vr = two_point(kind, x.rotate(1.1), y.rotate(1.1), 0.7).unwrap();
            assert!((v - vr).norm() < 1e-12 * v.norm().max(1.0), "{kind:?}");
        }
        // signs: charge-same <= 0, charge-neutral >= 0
        let cs = two_point(TwoPointKind::ChargeSame, x, y, 0.7).unwrap();
        let cn = two_point(TwoPointKind::ChargeNeutral, x, y, 0.7).unwrap();
        assert!(cs.re <= 0.0 && cs.im == 0.0);
        assert!(cn.re >= 0.0 && cn.im == 0.0);
        // holo-holo rotates covariantly (weight-2 kernel), check |.|
        let hh = two_point(TwoPointKind::HoloHolo, x, y, 0.7).unwrap();
        let hhr = two_point(TwoPointKind::HoloHolo, x.rotate(0.6), y.rotate(0.6), 0.7).unwrap();
        assert!((hh.norm() - hhr.norm()).abs() < 1e-12 * hh.norm());
    }
}
