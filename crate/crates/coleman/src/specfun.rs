//! Self-contained special functions: modified Bessel K0/K1, Bessel J_n and
//! its zeros j_{n,k}, the exponential integral Gamma(0,x), and arsinh.
//!
//! Accuracy targets: K0/K1 relative error <= 1e-12 on [1e-8, 50]; J_n
//! absolute error <= 1e-10 relative to the unit-amplitude envelope; zeros
//! to 1e-10.

use crate::error::{Error, Result};

/// Euler--Mascheroni constant, 20 digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Modified Bessel function of the second kind, order 0 or 1.
///
/// Power series below x = 2, Thompson--Barnett continued fraction above.
pub fn bessel_k(order: u8, x: f64) -> Result<f64> {
    if !(order == 0 || order == 1) {
        return Err(Error::Input(format!("bessel_k order must be 0 or 1, got {order}")));
    }
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires x > 0, got {x}")));
    }
    let (k0, k1) = if x < 2.0 { bessel_k01_series(x) } else { bessel_k01_cf(x) };
    Ok(if order == 0 { k0 } else { k1 })
}

/// Series evaluation of (K0, K1) for 0 < x < 2 (DLMF 10.31).
fn bessel_k01_series(x: f64) -> (f64, f64) {
    let t = x * x / 4.0;
    let lg = (x / 2.0).ln();

    // I0, I1 and the companion sums, accumulated together.
    let mut term0 = 1.0; // t^k / (k!)^2
    let mut i0 = 1.0;
    let mut s0 = 0.0; // sum t^k H_k / (k!)^2
    let mut hk = 0.0;

    let mut term1 = 1.0; // t^k / (k!(k+1)!)
    let mut i1 = 1.0; // I1(x) = (x/2) * i1
    // sum for K1: t^k [psi(k+1)+psi(k+2)] / (k!(k+1)!), psi(1) = -gamma
    let mut s1 = -2.0 * EULER_GAMMA + 1.0; // k = 0 term: psi(1)+psi(2) = -2g+1
    for k in 1..64 {
        let kf = k as f64;
        term0 *= t / (kf * kf);
        hk += 1.0 / kf;
        i0 += term0;
        s0 += term0 * hk;

        term1 *= t / (kf * (kf + 1.0));
        i1 += term1;
        // psi(k+1) + psi(k+2) = -2g + 2 H_k + 1/(k+1)
        s1 += term1 * (-2.0 * EULER_GAMMA + 2.0 * hk + 1.0 / (kf + 1.0));

        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1 {
            break;
        }
    }
    let k0 = -(lg + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + lg * (x / 2.0) * i1 - (x / 4.0) * s1;
    (k0, k1)
}

/// Continued-fraction evaluation of (K0, K1) for x >= 2
/// (Thompson--Barnett CF2, as in standard bessik routines).
fn bessel_k01_cf(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Bessel function of the first kind of integer order n >= 0.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if x < 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    Ok(bessel_j_unchecked(n, x))
}

fn bessel_j_unchecked(n: u32, x: f64) -> f64 {
    match n {
        0 => bessel_j0(x),
        1 => bessel_j1(x),
        _ => bessel_jn(n, x),
    }
}

fn bessel_j0(x: f64) -> f64 {
    if x < 12.0 {
        // power series
        let t = -x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            let kf = k as f64;
            term *= t / (kf * kf);
            sum += term;
            if term.abs() < 1e-17 {
                break;
            }
        }
        sum
    } else {
        hankel_asymptotic(0, x)
    }
}

fn bessel_j1(x: f64) -> f64 {
    if x < 12.0 {
        let t = -x * x / 4.0;
        let mut term = x / 2.0;
        let mut sum = term;
        for k in 1..80 {
            let kf = k as f64;
            term *= t / (kf * (kf + 1.0));
            sum += term;
            if term.abs() < 1e-17 {
                break;
            }
        }
        sum
    } else {
        hankel_asymptotic(1, x)
    }
}

/// Large-argument amplitude/phase expansion of J_n (DLMF 10.17) for n = 0, 1.
fn hankel_asymptotic(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n as f64) * (n as f64);
    let chi = x - (0.5 * n as f64 + 0.25) * std::f64::consts::PI;
    let z = 8.0 * x;
    // P ~ sum_k (-1)^k a_{2k} / z^{2k},  Q ~ sum_k (-1)^k a_{2k+1} / z^{2k+1}
    // a_j = prod_{i=1}^{j} (mu - (2i-1)^2) / (j! ... ) built incrementally.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    for j in 1..18 {
        let jf = j as f64;
        term *= (mu - (2.0 * jf - 1.0) * (2.0 * jf - 1.0)) / (jf * z);
        if term.abs() < 1e-18 {
            break;
        }
        match j % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// J_n for n >= 2 via three-term recurrences (forward when stable,
/// Miller's backward algorithm otherwise).
fn bessel_jn(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    if nf < x {
        // forward recurrence from J0, J1
        let mut jm = bessel_j0(x);
        let mut j = bessel_j1(x);
        for k in 1..n {
            let jn = 2.0 * (k as f64) / x * j - jm;
            jm = j;
            j = jn;
        }
        j
    } else {
        // backward (Miller) recurrence, normalized via J0 + 2*sum J_{2k} = 1
        let start = n + ((40.0 + 1.3 * nf + x) as u32);
        let mut jp = 0.0_f64;
        let mut j = 1e-30_f64;
        let mut jn_val = 0.0;
        let mut norm = 0.0;
        for k in (0..=start).rev() {
            let jm = 2.0 * ((k + 1) as f64) / x * j - jp;
            jp = j;
            j = jm;
            // renormalize to avoid overflow
            if j.abs() > 1e250 {
                j *= 1e-250;
                jp *= 1e-250;
                jn_val *= 1e-250;
                norm *= 1e-250;
            }
            if k == n {
                jn_val = j;
            }
            if k > 0 && k % 2 == 0 {
                norm += 2.0 * j;
            }
        }
        norm += j;
        jn_val / norm
    }
}

/// Index of a Bessel zero: angular order `n >= 0`, zero index `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BesselZeroIndex {
    pub n: u32,
    pub k: u32,
}

impl BesselZeroIndex {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("bessel zero index k must be >= 1".into()));
        }
        Ok(Self { n, k })
    }
}

/// k'th positive zero of J_n, to absolute accuracy ~1e-12.
///
/// Row n = 0 is seeded by the McMahon expansion; rows n >= 1 are bracketed by
/// the interlacing property j_{n-1,k} < j_{n,k} < j_{n-1,k+1}. Bisection is
/// followed by a Newton polish using J_n' = J_{n-1} - (n/x) J_n.
pub fn bessel_zero(idx: BesselZeroIndex) -> Result<f64> {
    if idx.k == 0 {
        return Err(Error::Input("bessel zero index k must be >= 1".into()));
    }
    // Build zeros row by row up to order n; each row needs the previous row
    // computed one index further.
    let n = idx.n as usize;
    let k = idx.k as usize;
    let mut row = row_zeros_j0(k + n);
    for m in 1..=n {
        let mut next = Vec::with_capacity(row.len() - 1);
        for i in 0..row.len() - 1 {
            next.push(refine_zero(m as u32, row[i], row[i + 1]));
        }
        row = next;
    }
    Ok(row[k - 1])
}

/// McMahon-seeded zeros of J_0, k = 1..=count.
fn row_zeros_j0(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    for k in 1..=count {
        let b = (k as f64 - 0.25) * std::f64::consts::PI;
        let guess = b + 1.0 / (8.0 * b);
        // bracket by +- pi/2 around the guess; J0 zeros are ~pi apart
        let (mut lo, mut hi) = (guess - 0.8, guess + 0.8);
        if lo <= 0.0 {
            lo = 1e-8;
        }
        out.push(refine_zero(0, lo, hi));
        let _ = &mut hi;
    }
    out
}

/// Bisection + Newton refinement of the unique zero of J_n in (lo, hi).
fn refine_zero(n: u32, mut lo: f64, mut hi: f64) -> f64 {
    let f = |x: f64| bessel_j_unchecked(n, x);
    let mut flo = f(lo);
    let fhi = f(hi);
    debug_assert!(
        flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0),
        "zero bracket failed for n={n} in ({lo},{hi})"
    );
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-4 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..6 {
        let jx = bessel_j_unchecked(n, x);
        let jprev = if n == 0 { -bessel_j1(x) } else { bessel_j_unchecked(n - 1, x) };
        let deriv = if n == 0 { jprev } else { jprev - (n as f64) / x * jx };
        let step = jx / deriv;
        x -= step;
        if step.abs() < 1e-14 * x {
            break;
        }
    }
    x
}

/// Incomplete gamma function Gamma(0, x) = E_1(x) = int_x^inf e^{-t}/t dt.
///
/// Series for x <= 1, continued fraction (modified Lentz) for x > 1.
pub fn inc_gamma0(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("inc_gamma0 requires x > 0, got {x}")));
    }
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= -x / kf;
            let contrib = -term / kf;
            sum += contrib;
            if contrib.abs() < 1e-18 * (sum.abs() + 1e-300) {
                break;
            }
        }
        Ok(-EULER_GAMMA - x.ln() + sum)
    } else {
        // E1(x) = e^{-x} * CF, Lentz's algorithm on the standard fraction.
        const FPMIN: f64 = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let a = -(i as f64) * (i as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok(h * (-x).exp())
    }
}

/// Inverse hyperbolic sine, log(x + sqrt(x^2+1)).
pub fn arsinh(x: f64) -> f64 {
    x.asinh()
}

#[cfg(test)]
mod tests {
    use super::*;

    // A 21-point Gauss--Legendre panel integrator used only as a test oracle.
    fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        // 10-point Gauss--Legendre nodes/weights on [-1,1]
        const X: [f64; 5] = [
            0.148874338981631211,
            0.433395394129247191,
            0.679409568299024406,
            0.865063366688984511,
            0.973906528517171720,
        ];
        const W: [f64; 5] = [
            0.295524224714752870,
            0.269266719309996355,
            0.219086362515982044,
            0.149451349150580593,
            0.066671344308688138,
        ];
        let mut total = 0.0;
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let (pa, pb) = (a + p as f64 * h, a + (p + 1) as f64 * h);
            let (m, r) = (0.5 * (pa + pb), 0.5 * (pb - pa));
            let mut s = 0.0;
            for i in 0..5 {
                s += W[i] * (f(m + r * X[i]) + f(m - r * X[i]));
            }
            total += s * r;
        }
        total
    }

    #[test]
    fn k0_matches_integral_representation() {
        // K0(x) = int_0^inf exp(-x cosh t) dt; integrand decays like
        // exp(-x e^t / 2), truncate at t = 40.
        for &x in &[0.5, 1.0, 2.0, 5.0] {
            let oracle = gl_integrate(|t| (-x * t.cosh()).exp(), 0.0, 40.0, 400);
            let val = bessel_k(0, x).unwrap();
            assert!(
                (val - oracle).abs() <= 1e-12 * oracle.abs(),
                "K0({x}) = {val} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn k_golden_values() {
        // mpmath 22-digit references
        let cases = [
            (0u8, 1.0, 0.42102443824070833334),
            (1, 1.0, 0.60190723019723457474),
            (0, 2.0, 0.11389387274953343565),
            (1, 2.0, 0.13986588181652242728),
            (0, 5.0, 0.0036910983340425942747),
            (1, 5.0, 0.0040446134454521642084),
            (0, 10.0, 1.7780062316167651811e-5),
            (1, 10.0, 1.8648773453825584597e-5),
            (0, 50.0, 3.4101677497894955139e-23),
            (1, 50.0, 3.4441022267175556126e-23),
            (0, 0.5, 0.92441907122766586178),
            (1, 0.5, 1.6564411200033008937),
            (0, 0.1, 2.4270690247020166125),
            (1, 0.1, 9.8538447808706061348),
            (0, 1e-4, 9.3262719134502749209),
        ];
        for (ord, x, want) in cases {
            let got = bessel_k(ord, x).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "K{ord}({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn k0_small_x_log_asymptotics() {
        // K0(x) + log(x/2) + gamma -> 0 as x -> 0
        let x = 1e-6;
        let dev = bessel_k(0, x).unwrap() + (x / 2.0).ln() + EULER_GAMMA;
        assert!(dev.abs() < 1e-10, "dev = {dev:e}");
    }

    #[test]
    fn k1_small_x_pole() {
        let x = 1e-6;
        let v = bessel_k(1, x).unwrap() * x;
        assert!((v - 1.0).abs() < 1e-10, "x*K1(x) = {v}");
    }

    #[test]
    fn k1_is_minus_dk0() {
        // Wronskian-style check via central differences.
        let h = 1e-5;
        for &x in &[0.5, 1.0, 2.0, 5.0] {
            let d = (bessel_k(0, x + h).unwrap() - bessel_k(0, x - h).unwrap()) / (2.0 * h);
            let k1 = bessel_k(1, x).unwrap();
            assert!((k1 + d).abs() < 1e-7, "x={x}: K1={k1}, -dK0={}", -d);
        }
    }

    #[test]
    fn k_rejects_nonpositive() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(1, -1.0).is_err());
    }

    #[test]
    fn j_basics() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        // J0 at its first zero
        let v = bessel_j(0, 2.404825557695773).unwrap();
        assert!(v.abs() < 1e-10, "J0(j01) = {v:e}");
    }

    #[test]
    fn j_against_series_oracle_large_x() {
        // independent check of the asymptotic branch against a high-order
        // series evaluated in extended precision via Kahan-style pairing is
        // impractical; instead cross-check recurrence consistency:
        // J_{n-1}(x) + J_{n+1}(x) = (2n/x) J_n(x).
        for &x in &[15.0, 40.0, 120.0] {
            for n in 1..8u32 {
                let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
                let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "recurrence n={n} x={x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn zeros_golden() {
        let cases = [
            (0u32, 1u32, 2.4048255576957727686),
            (0, 2, 5.5200781102863106496),
            (1, 1, 3.8317059702075123156),
            (1, 2, 7.0155866698156187535),
            (2, 1, 5.1356223018406825563),
            (5, 1, 8.7714838159599540191),
            (0, 3, 8.653727912911012217),
            (3, 2, 9.7610231299816696785),
        ];
        for (n, k, want) in cases {
            let got = bessel_zero(BesselZeroIndex::new(n, k).unwrap()).unwrap();
            assert!((got - want).abs() < 1e-10, "j({n},{k}) = {got}, want {want}");
        }
    }

    #[test]
    fn zeros_monotone_and_bounded() {
        // j_{n,k} < j_{n,k+1}, j_{n,k} < j_{n+1,k}, and the eigenvalue lower
        // bound j^2 >= n^2 + (k - 1/4)^2 pi^2 for n,k <= 16.
        let mut z = vec![vec![0.0; 17]; 18];
        for n in 0..=17u32 {
            for k in 1..=16u32 {
                z[n as usize][k as usize] =
                    bessel_zero(BesselZeroIndex::new(n, k).unwrap()).unwrap();
            }
        }
        for n in 0..=16usize {
            for k in 1..=16usize {
                let j = z[n][k];
                if k < 16 {
                    assert!(j < z[n][k + 1]);
                }
                assert!(j < z[n + 1][k]);
                let bound = (n * n) as f64
                    + (k as f64 - 0.25).powi(2) * std::f64::consts::PI.powi(2);
                assert!(j * j >= bound, "evbound fails at n={n} k={k}: {} < {bound}", j * j);
            }
        }
    }

    #[test]
    fn zeros_are_roots() {
        for n in (0..=16u32).step_by(4) {
            for k in (1..=16u32).step_by(5) {
                let j = bessel_zero(BesselZeroIndex::new(n, k).unwrap()).unwrap();
                let v = bessel_j(n, j).unwrap();
                assert!(v.abs() < 1e-9, "J_{n}(j_({n},{k})) = {v:e}");
            }
        }
    }

    #[test]
    fn high_order_zero_is_root_and_bounded() {
        // desk-scale upper corner of the truncation grids
        let j = bessel_zero(BesselZeroIndex::new(64, 64).unwrap()).unwrap();
        let v = bessel_j(64, j).unwrap();
        assert!(v.abs() < 1e-9, "J_64(j_64,64) = {v:e}");
        let bound = 64.0 * 64.0 + (64.0 - 0.25) * (64.0 - 0.25) * std::f64::consts::PI.powi(2);
        assert!(j * j >= bound);
        // and the function stays accurate past the zero (recurrence check)
        let x = j + 10.0;
        let lhs = bessel_j(63, x).unwrap() + bessel_j(65, x).unwrap();
        let rhs = 2.0 * 64.0 / x * bessel_j(64, x).unwrap();
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn zero_bisection_oracle_j0() {
        // Independent oracle: bisection on the plain power series for J0.
        let series_j0 = |x: f64| {
            let t = -x * x / 4.0;
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..60 {
                let kf = k as f64;
                term *= t / (kf * kf);
                sum += term;
            }
            sum
        };
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if series_j0(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let got = bessel_zero(BesselZeroIndex::new(0, 1).unwrap()).unwrap();
        assert!((got - oracle).abs() < 1e-10);
    }

    #[test]
    fn inc_gamma0_golden() {
        let cases = [
            (1.0, 0.21938393439552027368),
            (0.5, 0.55977359477616081175),
            (3.0, 0.013048381094197037413),
            (0.0025, 5.4167473205740979435),
        ];
        for (x, want) in cases {
            let got = inc_gamma0(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "E1({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn inc_gamma0_quadrature_oracle() {
        // Gamma(0,1) = int_1^inf e^{-t}/t dt
        let oracle = gl_integrate(|t| (-t).exp() / t, 1.0, 45.0, 300);
        let got = inc_gamma0(1.0).unwrap();
        assert!((got - oracle).abs() < 1e-12);
    }

    #[test]
    fn inc_gamma0_small_x_asymptotics() {
        let x = 1e-8;
        let dev = inc_gamma0(x).unwrap() + x.ln() + EULER_GAMMA;
        assert!(dev.abs() < 1e-6, "dev = {dev:e}");
    }

    #[test]
    fn inc_gamma0_tail() {
        assert!(inc_gamma0(50.0).unwrap() < 1e-20);
        assert!(inc_gamma0(-1.0).is_err());
    }

    #[test]
    fn arsinh_values() {
        assert_eq!(arsinh(0.0), 0.0);
        let want = 0.4812118250596034475;
        assert!((arsinh(0.5) - want).abs() < 1e-15);
        let direct = (0.5 + 1.25_f64.sqrt()).ln();
        assert!((arsinh(0.5) - direct).abs() < 1e-15);
        assert_eq!(arsinh(-3.0), -arsinh(3.0));
    }
}
