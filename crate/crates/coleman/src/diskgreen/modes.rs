//! Radial mode kernels of the disk convolution ladder.
//!
//! In scaled radii u = r_x/L, v = r_y/L the building blocks decompose over
//! angular Fourier modes,
//!
//!   E_j(x,y) = L^(2(j-1)) sum over n >= 0 of phi_j\[n\](u,v) e^(-i n (th_x - th_y)),
//!   F_j(x,y) = L^(2(j-1)) sum over n >= 1 of psi_j\[n\](u,v) e^(+i n (th_x - th_y)),
//!
//! and each convolution with the Dirichlet Green's function acts mode by
//! mode: phi_(j+k)\[n\](u,v) = 2 pi int_0^1 tau phi_j\[n\](u,tau) phi_k\[n\](tau,v) dtau.
//! The j = 1 kernels are elementary, the j = 2 kernels are integrated in
//! closed form, and j = 3 by 1D quadrature. All expressions are arranged in
//! the ratios q = min/max and w = u v so no negative powers appear.

use crate::quad::{self, QuadratureSpec};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// phi_1[n](u,v): mode-n radial kernel of E_1 (n >= 0).
pub fn phi1(n: u32, u: f64, v: f64) -> f64 {
    let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
    if n == 0 {
        return (1.0 / hi).ln() / TWO_PI;
    }
    let nf = n as f64;
    ((lo / hi).powi(n as i32) - (u * v).powi(n as i32)) / (2.0 * TWO_PI * nf)
}

/// psi_1[n](u,v): mode-n radial kernel of F_1 (n >= 1).
pub fn psi1(n: u32, u: f64, v: f64) -> f64 {
    let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
    let nf = n as f64;
    (lo / hi).powi(n as i32) / (2.0 * TWO_PI * nf)
}

/// d phi_1[n]/du at (u, tau) as a function of the integration radius tau.
pub fn dphi1_du(n: u32, u: f64, tau: f64) -> f64 {
    if n == 0 {
        return if tau < u { -1.0 / (TWO_PI * u) } else { 0.0 };
    }
    let nf = n as f64;
    let p = 1.0 / (2.0 * TWO_PI * nf);
    if tau < u {
        p * (-nf / u) * ((tau / u).powi(n as i32) + (u * tau).powi(n as i32))
    } else {
        p * (nf / u) * ((u / tau).powi(n as i32) - (u * tau).powi(n as i32))
    }
}

/// d psi_1[n]/du at (u, tau).
pub fn dpsi1_du(n: u32, u: f64, tau: f64) -> f64 {
    let nf = n as f64;
    let p = 1.0 / (2.0 * TWO_PI * nf);
    if tau < u {
        p * (-nf / u) * (tau / u).powi(n as i32)
    } else {
        p * (nf / u) * (u / tau).powi(n as i32)
    }
}

/// `(uv)^n Q_n(v)` with `Q_n(v) = int_v^1 tau^{1-2n} dtau`, arranged
/// overflow-safe: the arguments are the already-raised ratios `q = (u/v)^n`
/// and `w = (uv)^n`; the result is `(w - q v^2)/(2-2n)` for n >= 2 and
/// `w log(1/v)` for n = 1.
fn wn_qn(n: u32, q: f64, w: f64, v: f64) -> f64 {
    if n == 1 {
        w * (1.0 / v).ln()
    } else {
        let nf = n as f64;
        (w - q * v * v) / (2.0 - 2.0 * nf)
    }
}

/// phi_2[n](u,v): one convolution of phi_1 with itself, in closed form.
pub fn phi2(n: u32, mut u: f64, mut v: f64) -> f64 {
    if u > v {
        std::mem::swap(&mut u, &mut v);
    }
    if n == 0 {
        let (lu, lv) = ((1.0 / u).ln(), (1.0 / v).ln());
        let vv = |t: f64| t * t / 2.0 * (1.0 / t).ln() + t * t / 4.0;
        let ww = |t: f64| {
            let l = (1.0 / t).ln();
            t * t / 2.0 * l * l + t * t / 2.0 * l + t * t / 4.0
        };
        return (u * u / 2.0 * lu * lv + lv * (vv(v) - vv(u)) + 0.25 - ww(v)) / TWO_PI;
    }
    let nf = n as f64;
    let p = 1.0 / (2.0 * TWO_PI * nf);
    let q = (u / v).powi(n as i32);
    let w = (u * v).powi(n as i32);
    let u2n2 = u.powi(2 * n as i32 + 2);
    let v2n2 = v.powi(2 * n as i32 + 2);
    let p1 = (q - w) * (u * u - u2n2) / (2.0 * nf + 2.0);
    let p2 = (q - w) * ((v * v - u * u) / 2.0 - (v2n2 - u2n2) / (2.0 * nf + 2.0));
    let p3 = wn_qn(n, q, w, v) - w * (1.0 - v * v) + w * (1.0 - v2n2) / (2.0 * nf + 2.0);
    TWO_PI * p * p * (p1 + p2 + p3)
}

/// psi_2[n](u,v) in closed form (n >= 1).
pub fn psi2(n: u32, mut u: f64, mut v: f64) -> f64 {
    if u > v {
        std::mem::swap(&mut u, &mut v);
    }
    let nf = n as f64;
    let p = 1.0 / (2.0 * TWO_PI * nf);
    let q = (u / v).powi(n as i32);
    let w = (u * v).powi(n as i32);
    let p1 = q * u * u / (2.0 * nf + 2.0);
    let p2 = q * (v * v - u * u) / 2.0;
    let p3 = wn_qn(n, q, w, v);
    TWO_PI * p * p * (p1 + p2 + p3)
}

/// Derivative of phi_2[n] with respect to its first argument.
pub fn dphi2_du(n: u32, u: f64, v: f64) -> f64 {
    if u <= v {
        if n == 0 {
            return -(u / 2.0) * (1.0 / v).ln() / TWO_PI;
        }
        let nf = n as f64;
        let p = 1.0 / (2.0 * TWO_PI * nf);
        let q = (u / v).powi(n as i32);
        let w = (u * v).powi(n as i32);
        let u2n1 = u.powi(2 * n as i32 + 1);
        let u2n2 = u * u2n1;
        let v2n2 = v.powi(2 * n as i32 + 2);
        // both q = (u/v)^n and w = (uv)^n carry d/du = (n/u) * itself
        let dqw = (nf / u) * (q - w);
        let d1 = (dqw * (u * u - u2n2) + (q - w) * (2.0 * u - (2.0 * nf + 2.0) * u2n1))
            / (2.0 * nf + 2.0);
        let d2 = dqw * ((v * v - u * u) / 2.0 - (v2n2 - u2n2) / (2.0 * nf + 2.0))
            + (q - w) * (-u + u2n1);
        // every term of p3 carries u^n: d p3/du = (n/u) p3
        let p3 = wn_qn(n, q, w, v) - w * (1.0 - v * v) + w * (1.0 - v2n2) / (2.0 * nf + 2.0);
        let d3 = (nf / u) * p3;
        TWO_PI * p * p * (d1 + d2 + d3)
    } else {
        // phi2 is symmetric; differentiate the (u<=v) form in its second slot
        let (a, b) = (v, u); // a <= b, derivative wrt b
        if n == 0 {
            let la = (1.0 / a).ln();
            let vv = |t: f64| t * t / 2.0 * (1.0 / t).ln() + t * t / 4.0;
            return (-a * a * la / (2.0 * b) - (vv(b) - vv(a)) / b) / TWO_PI;
        }
        let nf = n as f64;
        let p = 1.0 / (2.0 * TWO_PI * nf);
        let q = (a / b).powi(n as i32);
        let w = (a * b).powi(n as i32);
        let a2n2 = a.powi(2 * n as i32 + 2);
        let b2n1 = b.powi(2 * n as i32 + 1);
        let b2n2 = b * b2n1;
        // d q/db = -(n/b) q, d w/db = (n/b) w
        let dq = -(nf / b) * q;
        let dw = (nf / b) * w;
        let d1 = (dq - dw) * (a * a - a2n2) / (2.0 * nf + 2.0);
        let d2 = (dq - dw) * ((b * b - a * a) / 2.0 - (b2n2 - a2n2) / (2.0 * nf + 2.0))
            + (q - w) * (b - b2n1);
        // p3 = wn_qn - w(1-b^2) + w(1-b^{2n+2})/(2n+2)
        let dwnqn = if n == 1 {
            dw * (1.0 / b).ln() - w / b
        } else {
            (dw - (dq * b * b + q * 2.0 * b)) / (2.0 - 2.0 * nf)
        };
        let d3 = dwnqn + (-dw * (1.0 - b * b) + w * 2.0 * b)
            + (dw * (1.0 - b2n2) - w * (2.0 * nf + 2.0) * b2n1) / (2.0 * nf + 2.0);
        TWO_PI * p * p * (d1 + d2 + d3)
    }
}

/// Derivative of psi_2[n] with respect to its first argument.
pub fn dpsi2_du(n: u32, u: f64, v: f64) -> f64 {
    let nf = n as f64;
    let p = 1.0 / (2.0 * TWO_PI * nf);
    if u <= v {
        let q = (u / v).powi(n as i32);
        let w = (u * v).powi(n as i32);
        let d1 = q * u * (nf + 2.0) / (2.0 * nf + 2.0);
        let d2 = (nf / u) * q * (v * v - u * u) / 2.0 - q * u;
        let d3 = (nf / u) * wn_qn(n, q, w, v);
        TWO_PI * p * p * (d1 + d2 + d3)
    } else {
        let (a, b) = (v, u); // derivative wrt b of the (a <= b) form
        let q = (a / b).powi(n as i32);
        let w = (a * b).powi(n as i32);
        let d1 = -(nf / b) * q * a * a / (2.0 * nf + 2.0);
        let d2 = -(nf / b) * q * (b * b - a * a) / 2.0 + q * b;
        let d3 = if n == 1 {
            a * (1.0 / b).ln() - a
        } else {
            let dwn = (nf / b) * w;
            let dqn = -(nf / b) * q;
            (dwn - (dqn * b * b + q * 2.0 * b)) / (2.0 - 2.0 * nf)
        };
        TWO_PI * p * p * (d1 + d2 + d3)
    }
}

fn gk_panels(f: &dyn Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    let spec = QuadratureSpec::with_tol(1e-13, 1e-12);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            if let Ok((v, _)) = quad::integrate_1d(f, w[0], w[1], &spec) {
                total += v;
            }
        }
    }
    total
}

/// phi_3[n](u,v) = 2 pi int_0^1 tau phi_1[n](u,tau) phi_2[n](tau,v) dtau.
pub fn phi3(n: u32, u: f64, v: f64) -> f64 {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    TWO_PI * gk_panels(&|t: f64| t * phi1(n, u, t) * phi2(n, t, v), &[0.0, a, b, 1.0])
}

/// psi_3[n](u,v) analogously from the F ladder.
pub fn psi3(n: u32, u: f64, v: f64) -> f64 {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    TWO_PI * gk_panels(&|t: f64| t * psi1(n, u, t) * psi2(n, t, v), &[0.0, a, b, 1.0])
}

/// phi_4[n] by the semigroup relation from two j = 2 kernels.
pub fn phi4(n: u32, u: f64, v: f64) -> f64 {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    TWO_PI * gk_panels(&|t: f64| t * phi2(n, u, t) * phi2(n, t, v), &[0.0, a, b, 1.0])
}

/// psi_4[n] analogously.
pub fn psi4(n: u32, u: f64, v: f64) -> f64 {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    TWO_PI * gk_panels(&|t: f64| t * psi2(n, u, t) * psi2(n, t, v), &[0.0, a, b, 1.0])
}

/// d phi_3[n]/du by differentiating under the integral (phi_1 is continuous
/// at tau = u, so no boundary term).
pub fn dphi3_du(n: u32, u: f64, v: f64) -> f64 {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    TWO_PI * gk_panels(&|t: f64| t * dphi1_du(n, u, t) * phi2(n, t, v), &[0.0, a, b, 1.0])
}

/// d psi_3[n]/du.
pub fn dpsi3_du(n: u32, u: f64, v: f64) -> f64 {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    TWO_PI * gk_panels(&|t: f64| t * dpsi1_du(n, u, t) * psi2(n, t, v), &[0.0, a, b, 1.0])
}
