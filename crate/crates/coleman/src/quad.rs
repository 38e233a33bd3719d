//! Adaptive quadrature over intervals, the plane, and the disk, plus the
//! principal-value machinery and the smooth bump test functions used for
//! smeared correlators.

use crate::error::{Error, Result};
use crate::point::ComplexPoint;
use num_complex::Complex64;

/// Tolerances and budgets for the adaptive integrators.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Strictly decreasing excision radii for principal-value integrals.
    pub pv_excision_sequence: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            // geometric sequence 2^-3 .. 2^-12
            pv_excision_sequence: (3..=12).map(|k| 2f64.powi(-k)).collect(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

// 15-point Gauss--Kronrod nodes and weights (standard QUADPACK values).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// One Gauss--Kronrod 15 panel; returns (integral, error estimate).
fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        res_k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let integral = res_k * half;
    let err = ((res_k - res_g) * half).abs();
    (integral, err)
}

/// Adaptive 1D integration of `f` over `(a, b)`; `b` may be `f64::INFINITY`,
/// in which case the tail is mapped by `t = a + u/(1-u)`.
///
/// Returns `(value, error_estimate)`.
pub fn integrate_1d(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if b.is_infinite() {
        let g = |u: f64| {
            let t = a + u / (1.0 - u);
            let jac = 1.0 / ((1.0 - u) * (1.0 - u));
            f(t) * jac
        };
        return integrate_finite(&g, 0.0, 1.0, spec);
    }
    integrate_finite(&f, a, b, spec)
}

fn integrate_finite(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    // Deterministic worst-first refinement. Intervals are kept in a vector
    // and the worst one split; ties broken by position so the schedule does
    // not depend on float ordering quirks.
    let mut evals = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let (v, e) = gk15(&mut evals, a, b);
    let mut intervals = vec![(a, b, v, e)];
    for _ in 0..spec.max_subdivisions {
        let total: f64 = intervals.iter().map(|i| i.2).sum();
        let toterr: f64 = intervals.iter().map(|i| i.3).sum();
        if toterr <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok((total, toterr));
        }
        // worst interval
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1 .3
                    .partial_cmp(&y.1 .3)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(y.1 .0.partial_cmp(&x.1 .0).unwrap_or(std::cmp::Ordering::Equal))
            })
            .unwrap();
        let (ia, ib, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (ia + ib);
        if mid <= ia || mid >= ib {
            // interval at floating-point resolution; accept as is
            let (v, _) = gk15(&mut evals, ia, ib);
            intervals.push((ia, ib, v, 0.0));
            continue;
        }
        let (v1, e1) = gk15(&mut evals, ia, mid);
        let (v2, e2) = gk15(&mut evals, mid, ib);
        intervals.push((ia, mid, v1, e1));
        intervals.push((mid, ib, v2, e2));
    }
    let total: f64 = intervals.iter().map(|i| i.2).sum();
    let toterr: f64 = intervals.iter().map(|i| i.3).sum();
    if toterr <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        Ok((total, toterr))
    } else {
        Err(Error::Budget {
            context: format!("integrate_1d on [{a},{b})"),
            estimate: total,
            error: toterr,
        })
    }
}

/// Complex-valued adaptive 1D integration (real and imaginary parts refined
/// together on a shared grid).
pub fn integrate_1d_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    // Integrate re and im with the same adaptive driver by refining on
    // |f| as a scalar proxy. For the kernels in this crate both parts are
    // comparably smooth, so separate passes are adequate and simpler.
    let (re, e1) = integrate_1d(|x| f(x).re, a, b, spec)?;
    let (im, e2) = integrate_1d(|x| f(x).im, a, b, spec)?;
    Ok((Complex64::new(re, im), e1 + e2))
}

/// Adaptive integration of a complex integrand over the disk of radius
/// `radius` centered at `center`: nested adaptive quadrature in polar
/// coordinates (outer adaptive in angle, inner adaptive in radius), which
/// concentrates panels around angular spikes from off-center singularities.
pub fn integrate_disk(
    f: impl Fn(ComplexPoint) -> Complex64,
    center: ComplexPoint,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let c = center.z();
    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / 30.0,
        rel_tol: spec.rel_tol / 10.0,
        max_subdivisions: spec.max_subdivisions,
        pv_excision_sequence: vec![],
    };
    // slowly converging rays contribute their best estimate rather than
    // poisoning the whole integral
    let run = |g: &dyn Fn(f64) -> f64| -> f64 {
        match integrate_1d(g, 0.0, radius, &inner_spec) {
            Ok((v, _)) => v,
            Err(Error::Budget { estimate, .. }) => estimate,
            Err(_) => 0.0,
        }
    };
    let ring = |theta: f64| -> Complex64 {
        let at = |r: f64| ComplexPoint::from_z(c + Complex64::from_polar(r, theta));
        let re = run(&|r: f64| f(at(r)).re * r);
        let im = run(&|r: f64| f(at(r)).im * r);
        Complex64::new(re, im)
    };
    let outer_spec = QuadratureSpec {
        abs_tol: spec.abs_tol,
        rel_tol: spec.rel_tol,
        max_subdivisions: spec.max_subdivisions,
        pv_excision_sequence: vec![],
    };
    // [-pi, pi) keeps a spike on the positive real axis interior to the
    // panel structure, where the refinement localizes it
    let (v, _) = integrate_1d_complex(
        ring,
        -std::f64::consts::PI,
        std::f64::consts::PI,
        &outer_spec,
    )?;
    Ok(v)
}

/// Profile kind of a [`TestFunction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BumpProfile {
    /// `amplitude * exp(-1/(1-(r/R)^2))` inside the support disk.
    Standard,
    /// Difference of the standard bump and a half-radius bump rescaled so
    /// the integral vanishes.
    MeanZero,
}

/// Compactly supported smooth bump, the standard mollifier scaled to a disk.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub center: ComplexPoint,
    pub radius: f64,
    pub amplitude: f64,
    pub profile: BumpProfile,
}

impl TestFunction {
    pub fn bump(center: ComplexPoint, radius: f64, amplitude: f64) -> Self {
        Self {
            center,
            radius,
            amplitude,
            profile: BumpProfile::Standard,
        }
    }

    pub fn mean_zero(center: ComplexPoint, radius: f64, amplitude: f64) -> Self {
        Self {
            center,
            radius,
            amplitude,
            profile: BumpProfile::MeanZero,
        }
    }

    fn std_profile(s: f64) -> f64 {
        // s = (r/R)^2
        if s >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - s)).exp()
        }
    }

    pub fn eval(&self, p: ComplexPoint) -> f64 {
        let r2 = (p.z() - self.center.z()).norm_sqr();
        let s = r2 / (self.radius * self.radius);
        match self.profile {
            BumpProfile::Standard => self.amplitude * Self::std_profile(s),
            BumpProfile::MeanZero => {
                // difference of the bump and a half-radius bump carrying the
                // same mass; int of exp(-1/(1-(r/R)^2)) over R^2 scales as R^2
                let inner = Self::std_profile(4.0 * s) * 4.0;
                self.amplitude * (Self::std_profile(s) - inner)
            }
        }
    }

    /// Wirtinger derivative d f = (1/2)(-i d0 + d1) f, analytic.
    pub fn d_eval(&self, p: ComplexPoint) -> Complex64 {
        // f = A g(s), s = |w|^2/R^2 with w = z - c;
        // d|w|^2/dz = conj(w), so d f = A g'(s) conj(w)/R^2.
        let w = p.z() - self.center.z();
        let r2 = self.radius * self.radius;
        let s = w.norm_sqr() / r2;
        let dgds = |s: f64| {
            if s >= 1.0 {
                0.0
            } else {
                let d = 1.0 - s;
                -(-1.0 / d).exp() / (d * d)
            }
        };
        match self.profile {
            BumpProfile::Standard => w.conj() * (self.amplitude * dgds(s) / r2),
            BumpProfile::MeanZero => {
                let outer = dgds(s);
                let inner = dgds(4.0 * s) * 4.0 * 4.0;
                w.conj() * (self.amplitude * (outer - inner) / r2)
            }
        }
    }

    /// Antiholomorphic Wirtinger derivative; real profile, so it is the
    /// conjugate of [`TestFunction::d_eval`].
    pub fn dbar_eval(&self, p: ComplexPoint) -> Complex64 {
        self.d_eval(p).conj()
    }

    /// Integral over the plane, by quadrature of the radial profile.
    pub fn integral(&self, spec: &QuadratureSpec) -> Result<f64> {
        let v = integrate_disk(
            |p| Complex64::new(self.eval(p), 0.0),
            self.center,
            self.radius,
            spec,
        )?;
        Ok(v.re)
    }
}

/// Smooth pair-kernel weights for the double integrals over two bumps.
#[derive(Debug, Clone, Copy)]
pub enum PairKernel {
    /// `1/(x-y)^2` (complex Wirtinger kernel), excised at `|x-y| >= delta`
    InverseSquare { delta: f64 },
    /// `log(1/|x-y|)`
    Log,
    /// `K0(mu |x-y|)^2`
    K0Squared { mu: f64 },
}

/// Outer quadrature grid for pair integrals: radial Gauss--Kronrod panels
/// times an angular trapezoid (spectrally accurate for the C^inf bumps).
const PAIR_OUTER_PANELS: usize = 12;
const PAIR_OUTER_ANGLES: usize = 48;
const PAIR_INNER_ANGLES: usize = 48;

/// `int int g1(x) g2(y) K(x-y) dx dy` for smooth compactly supported complex
/// densities over the support disks `(c1, r1)` and `(c2, r2)`.
///
/// The inner integral is polar around the outer point, so the kernel
/// singularity sits at the radial origin where it is integrable (or excised
/// for the principal-value kernel).
pub fn pair_kernel_integral(
    g1: &dyn Fn(ComplexPoint) -> Complex64,
    supp1: (ComplexPoint, f64),
    g2: &dyn Fn(ComplexPoint) -> Complex64,
    supp2: (ComplexPoint, f64),
    kernel: PairKernel,
) -> Result<Complex64> {
    let (c1, r1) = supp1;
    let (c2, r2) = supp2;
    // inner integral at outer point x: radial GK panels of the angular
    // average (the integrand is smooth on the support annulus, so fixed
    // panels at GK15 are already at roundoff for the bumps used here)
    let inner = |x: ComplexPoint| -> Result<Complex64> {
        let xz = x.z();
        let d = x.dist(&c2);
        let lo = (d - r2).max(0.0);
        let hi = d + r2;
        if hi <= 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // angular moment of g2 around x: twist -2 for the inverse-square
        // kernel (from (x-y)^2 = rho^2 e^{2 i alpha}), 0 otherwise
        let twist = match kernel {
            PairKernel::InverseSquare { .. } => -2.0,
            _ => 0.0,
        };
        let ang = |rho: f64| -> Complex64 {
            let m = PAIR_INNER_ANGLES;
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..m {
                let a = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                let y = ComplexPoint::from_z(xz + Complex64::from_polar(rho, a));
                let v = g2(y);
                if v.norm_sqr() != 0.0 {
                    s += v * Complex64::from_polar(1.0, twist * a);
                }
            }
            s * (2.0 * std::f64::consts::PI / m as f64)
        };
        let weight = |rho: f64| -> f64 {
            match kernel {
                PairKernel::InverseSquare { .. } => 1.0 / rho,
                PairKernel::Log => rho * (1.0 / rho).ln(),
                PairKernel::K0Squared { mu } => {
                    let k0 = crate::specfun::bessel_k(0, mu * rho).unwrap_or(0.0);
                    rho * k0 * k0
                }
            }
        };
        let start = match kernel {
            PairKernel::InverseSquare { delta } => lo.max(delta).max(1e-14),
            _ => lo.max(1e-14),
        };
        if start >= hi {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let panels = 10;
        let hp = (hi - start) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let center = start + (p as f64 + 0.5) * hp;
            for (rho, w) in gk15_nodes(center, hp / 2.0) {
                acc += ang(rho) * (weight(rho) * w);
            }
        }
        Ok(acc)
    };
    // outer: radial GK panels x angular trapezoid over supp g1
    let mut total = Complex64::new(0.0, 0.0);
    let half = r1 / PAIR_OUTER_PANELS as f64 / 2.0;
    for p in 0..PAIR_OUTER_PANELS {
        let pa = r1 * p as f64 / PAIR_OUTER_PANELS as f64;
        let center = pa + half;
        for (r, wr) in gk15_nodes(center, half) {
            let m = PAIR_OUTER_ANGLES;
            for i in 0..m {
                let a = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                let x = ComplexPoint::from_z(c1.z() + Complex64::from_polar(r, a));
                let f = g1(x);
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                total += f * inner(x)? * (wr * r * 2.0 * std::f64::consts::PI / m as f64);
            }
        }
    }
    Ok(total)
}

/// GK15 nodes and weights on the interval `center +- half` (Kronrod weights
/// only; used where the error estimate is not needed).
fn gk15_nodes(center: f64, half: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(15);
    out.push((center, WGK[7] * half));
    for j in 0..7 {
        let x = half * XGK[j];
        out.push((center - x, WGK[j] * half));
        out.push((center + x, WGK[j] * half));
    }
    out
}

/// Principal-value integral of `f1(x) f2(y) / (x-y)^2` over the plane pair,
/// with symmetric excision `|x-y| >= delta` driven down
/// `spec.pv_excision_sequence` and Richardson extrapolation of the tail.
pub fn integrate_pv_pair(
    f1: &TestFunction,
    f2: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let g1 = |p: ComplexPoint| Complex64::new(f1.eval(p), 0.0);
    let g2 = |p: ComplexPoint| Complex64::new(f2.eval(p), 0.0);
    let s1 = (f1.center, f1.radius);
    let s2 = (f2.center, f2.radius);
    let sep = f1.center.dist(&f2.center);
    if sep >= f1.radius + f2.radius {
        // disjoint supports: the excision is inert
        return pair_kernel_integral(&g1, s1, &g2, s2, PairKernel::InverseSquare { delta: 0.0 });
    }
    let mut seq = spec.pv_excision_sequence.clone();
    if seq.is_empty() {
        seq = QuadratureSpec::default().pv_excision_sequence;
    }
    let mut vals = Vec::with_capacity(seq.len());
    for &delta in &seq {
        vals.push(pair_kernel_integral(
            &g1,
            s1,
            &g2,
            s2,
            PairKernel::InverseSquare { delta },
        )?);
    }
    // the excised value approaches the limit linearly in delta (the excision
    // boundary term is O(delta) for smooth densities)
    let n = vals.len();
    let extrap = |a: Complex64, b: Complex64, ra: f64, rb: f64| b + (b - a) * (rb / (ra - rb));
    let e1 = extrap(vals[n - 2], vals[n - 1], seq[n - 2], seq[n - 1]);
    let e2 = extrap(vals[n - 3], vals[n - 2], seq[n - 3], seq[n - 2]);
    let drift = (e1 - e2).norm();
    let scale = e1.norm().max(1.0);
    if drift > 1e-4 * scale {
        return Err(Error::NoConvergence(format!(
            "pv excision sequence did not stabilize (drift {drift:e})"
        )));
    }
    Ok(e1)
}
