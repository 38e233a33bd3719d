//! The fundamental solution of the Dirac operator with a finite-volume mass
//! term on the disk of radius L: disk Laplacian Green's function,
//! eigenfunctions, the E_j/F_j convolution ladder, the order-3 remainder
//! series, the assembled Green's function with its exterior harmonic
//! extension, and the numerical verifications tying it to the
//! infinite-volume propagator.

pub mod eigen;
pub mod modes;

use crate::error::{Error, Result};
use crate::fermion::{self, SpinorMatrix};
use crate::point::ComplexPoint;
use crate::quad::{self, QuadratureSpec};
use crate::report::CheckReport;
use eigen::{RadialTable, SeriesTruncation, ZeroCache};
use num_complex::Complex64;

/// Geometry and series parameters for the finite-volume problem.
#[derive(Debug, Clone)]
pub struct DiskSpec {
    pub l: f64,
    pub mu: f64,
    pub truncation: SeriesTruncation,
}

impl DiskSpec {
    pub fn new(l: f64, mu: f64, truncation: SeriesTruncation) -> Result<Self> {
        if l < 1.0 {
            return Err(Error::Input("disk radius must satisfy L >= 1".into()));
        }
        Ok(Self { l, mu, truncation })
    }
}

/// Dirichlet Green's function of the (positive) disk Laplacian:
/// `(1/2pi) log(1/|x-y|) - (1/2pi) log(1/|L - xbar y / L|)`.
pub fn laplace_green(x: ComplexPoint, y: ComplexPoint, l: f64) -> Result<f64> {
    let (zx, zy) = (x.z(), y.z());
    if zx.norm() >= l || zy.norm() >= l {
        return Err(Error::Input("laplace_green needs both points in the open disk".into()));
    }
    let d = (zx - zy).norm();
    if d == 0.0 {
        return Err(Error::Coincident("laplace_green at x = y".into()));
    }
    let refl = (Complex64::new(l, 0.0) - zx.conj() * zy / l).norm();
    Ok(((1.0 / d).ln() - (1.0 / refl).ln()) / (2.0 * std::f64::consts::PI))
}

/// E_1 in the two-branch closed form, with principal-series logarithm
/// branches; continuity defines the |x| = |y| circle.
pub fn e1(x: ComplexPoint, y: ComplexPoint, l: f64) -> Result<Complex64> {
    let (zx, zy) = (x.z(), y.z());
    if (zx - zy).norm() == 0.0 {
        return Err(Error::Coincident("E1 at x = y".into()));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let four_pi = 4.0 * std::f64::consts::PI;
    let boundary_part = (Complex64::new(1.0, 0.0) - zx.conj() * zy / (l * l)).ln() / four_pi
        + Complex64::new(l.ln() / two_pi, 0.0);
    if zx.norm() < zy.norm() {
        Ok(-zy.norm().ln() / two_pi - (Complex64::new(1.0, 0.0) - zx.conj() / zy.conj()).ln() / four_pi
            + boundary_part)
    } else {
        Ok(-zx.norm().ln() / two_pi - (Complex64::new(1.0, 0.0) - zy / zx).ln() / four_pi
            + boundary_part)
    }
}

/// F_1 in its two-branch closed form.
pub fn f1(x: ComplexPoint, y: ComplexPoint, l: f64) -> Result<Complex64> {
    let (zx, zy) = (x.z(), y.z());
    if (zx - zy).norm() == 0.0 {
        return Err(Error::Coincident("F1 at x = y".into()));
    }
    let _ = l;
    let four_pi = 4.0 * std::f64::consts::PI;
    if zx.norm() < zy.norm() {
        Ok(-(Complex64::new(1.0, 0.0) - zx / zy).ln() / four_pi)
    } else {
        Ok(-(Complex64::new(1.0, 0.0) - zy.conj() / zx.conj()).ln() / four_pi)
    }
}

/// The combination `E1 + F1 = -(1/2pi) log|x-y| + (1/4pi) Log(L^2 - xbar y)`
/// (principal branch), which is what the assembly consumes.
pub fn e1_plus_f1(x: ComplexPoint, y: ComplexPoint, l: f64) -> Result<Complex64> {
    let (zx, zy) = (x.z(), y.z());
    let d = (zx - zy).norm();
    if d == 0.0 {
        return Err(Error::Coincident("E1+F1 at x = y".into()));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(Complex64::new(-d.ln() / two_pi, 0.0)
        + (Complex64::new(l * l, 0.0) - zx.conj() * zy).ln() / (2.0 * two_pi))
}

/// Mode-sum caps; the kernels decay like n^-3 (j = 2) and n^-5 (j = 3).
const E2_MODE_CAP: u32 = 6000;
const E3_MODE_CAP: u32 = 140;
const MODE_STOP: f64 = 1e-13;

fn polar(p: ComplexPoint) -> (f64, f64) {
    let z = p.z();
    (z.norm(), z.arg())
}

/// E_j(x, y) for j = 2, 3 by the exact angular convolution (mode kernels).
pub fn ej(j: u8, x: ComplexPoint, y: ComplexPoint, l: f64) -> Result<Complex64> {
    let (rx, tx) = polar(x);
    let (ry, ty) = polar(y);
    let (u, v) = (rx / l, ry / l);
    let dth = tx - ty;
    let (kern, cap): (fn(u32, f64, f64) -> f64, u32) = match j {
        2 => (modes::phi2, E2_MODE_CAP),
        3 => (modes::phi3, E3_MODE_CAP),
        _ => return Err(Error::Input("ej supports j = 2 or 3".into())),
    };
    let rot = Complex64::from_polar(1.0, -dth);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..cap {
        let t = kern(n, u, v);
        acc += t * phase;
        if n > 40 && t.abs() < MODE_STOP {
            break;
        }
        phase *= rot;
    }
    Ok(acc * l.powi(2 * (j as i32 - 1)))
}

/// F_j(x, y) for j = 2, 3.
pub fn fj(j: u8, x: ComplexPoint, y: ComplexPoint, l: f64) -> Result<Complex64> {
    let (rx, tx) = polar(x);
    let (ry, ty) = polar(y);
    let (u, v) = (rx / l, ry / l);
    let dth = tx - ty;
    let (kern, cap): (fn(u32, f64, f64) -> f64, u32) = match j {
        2 => (modes::psi2, E2_MODE_CAP),
        3 => (modes::psi3, E3_MODE_CAP),
        _ => return Err(Error::Input("fj supports j = 2 or 3".into())),
    };
    let rot = Complex64::from_polar(1.0, dth);
    let mut phase = rot;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..cap {
        let t = kern(n, u, v);
        acc += t * phase;
        if n > 40 && t.abs() < MODE_STOP {
            break;
        }
        phase *= rot;
    }
    Ok(acc * l.powi(2 * (j as i32 - 1)))
}

/// `2 d_x (E_j + F_j)` by termwise mode derivatives.
fn two_d_ejfj(j: u8, x: ComplexPoint, y: ComplexPoint, l: f64) -> Result<Complex64> {
    let (rx, tx) = polar(x);
    let (ry, ty) = polar(y);
    let (u, v) = (rx / l, ry / l);
    let dth = tx - ty;
    let (dk_e, k_e, dk_f, k_f, cap): (
        fn(u32, f64, f64) -> f64,
        fn(u32, f64, f64) -> f64,
        fn(u32, f64, f64) -> f64,
        fn(u32, f64, f64) -> f64,
        u32,
    ) = match j {
        2 => (modes::dphi2_du, modes::phi2, modes::dpsi2_du, modes::psi2, E2_MODE_CAP),
        3 => (modes::dphi3_du, modes::phi3, modes::dpsi3_du, modes::psi3, E3_MODE_CAP),
        _ => return Err(Error::Input("two_d_ejfj supports j = 2 or 3".into())),
    };
    let rot = Complex64::from_polar(1.0, -dth);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..cap {
        let te = dk_e(n, u, v) - (n as f64 / u) * k_e(n, u, v);
        acc += te * phase;
        let tf = if n >= 1 {
            let t = dk_f(n, u, v) + (n as f64 / u) * k_f(n, u, v);
            acc += t * phase.conj();
            t.abs()
        } else {
            f64::INFINITY
        };
        if n > 40 && te.abs() < MODE_STOP && tf < MODE_STOP {
            break;
        }
        phase *= rot;
    }
    Ok(acc * Complex64::from_polar(1.0, -tx) / l * l.powi(2 * (j as i32 - 1)))
}

/// Assembly context: the zero cache is built once per (L, truncation) and
/// shared read-only across evaluations.
pub struct DiskGreen {
    pub spec: DiskSpec,
    cache: ZeroCache,
}

impl DiskGreen {
    pub fn new(spec: DiskSpec) -> Result<Self> {
        let cache = ZeroCache::build(spec.truncation.n_max + 1, spec.truncation.k_max + 1)?;
        Ok(Self { spec, cache })
    }

    pub fn cache(&self) -> &ZeroCache {
        &self.cache
    }

    /// Remainder pair at order 3 with its termwise tail bound.
    pub fn remainder(&self, x: ComplexPoint, y: ComplexPoint) -> Result<(Complex64, Complex64, f64)> {
        let l = self.spec.l;
        let (rx, tx) = polar(x);
        let (ry, ty) = polar(y);
        let tab_x = RadialTable::build(rx / l, &self.spec.truncation, &self.cache)?;
        let tab_y = RadialTable::build(ry / l, &self.spec.truncation, &self.cache)?;
        let r = eigen::remainder(
            3,
            &tab_x,
            &tab_y,
            tx,
            ty,
            self.spec.mu,
            l,
            &self.spec.truncation,
            &self.cache,
        );
        Ok((r.r11, r.r21, r.tail_bound))
    }

    /// Interior assembly at `x` with a precomputed radial table for `x`.
    fn interior_with_tables(
        &self,
        x: ComplexPoint,
        y: ComplexPoint,
        tab_x: &RadialTable,
        tab_y: &RadialTable,
    ) -> Result<SpinorMatrix> {
        let l = self.spec.l;
        let mu = self.spec.mu;
        let (_, tx) = polar(x);
        let (_, ty) = polar(y);
        let ef1 = e1_plus_f1(x, y, l)?;
        let d1 = 1.0 / (2.0 * std::f64::consts::PI * (x.z() - y.z()));
        let (ef2, ef3, def2, def3) = if mu != 0.0 {
            (
                ej(2, x, y, l)? + fj(2, x, y, l)?,
                ej(3, x, y, l)? + fj(3, x, y, l)?,
                two_d_ejfj(2, x, y, l)?,
                two_d_ejfj(3, x, y, l)?,
            )
        } else {
            let z = Complex64::new(0.0, 0.0);
            (z, z, z, z)
        };
        let rem = eigen::remainder(
            3,
            tab_x,
            tab_y,
            tx,
            ty,
            mu,
            l,
            &self.spec.truncation,
            &self.cache,
        );
        let s11 = mu * ef1 - mu.powi(3) * ef2 + mu.powi(5) * ef3 + rem.r11;
        let s21 = d1 + mu * mu * def2 - mu.powi(4) * def3 + rem.r21;
        Ok(SpinorMatrix {
            s11,
            s21,
            s12: s21.conj(),
            s22: s11.conj(),
        })
    }

    /// The assembled Green's function: the interior sums for `|x| <= L`,
    /// the exterior harmonic (Poisson) extension for `|x| > L`.
    pub fn assemble(&self, x: ComplexPoint, y: ComplexPoint) -> Result<SpinorMatrix> {
        let l = self.spec.l;
        if y.z().norm() >= l {
            return Err(Error::Input("source point y must lie in the open disk".into()));
        }
        if x.dist(&y) == 0.0 {
            return Err(Error::Coincident("green_assemble at x = y".into()));
        }
        if x.z().norm() <= l {
            let tab_x = RadialTable::build(x.z().norm() / l, &self.spec.truncation, &self.cache)?;
            let tab_y = RadialTable::build(y.z().norm() / l, &self.spec.truncation, &self.cache)?;
            return self.interior_with_tables(x, y, &tab_x, &tab_y);
        }
        self.exterior(x, y)
    }

    /// Exterior Poisson extension: for `x = r e^{i th}` with `r > L`,
    /// `S(x,y) = (r^2 - L^2)/(2pi) int dphi S(L e^{i phi}, y) /
    ///           (r^2 + L^2 - 2 r L cos(th - phi))`.
    pub fn exterior(&self, x: ComplexPoint, y: ComplexPoint) -> Result<SpinorMatrix> {
        let l = self.spec.l;
        let (r, th) = polar(x);
        if r <= l {
            return Err(Error::Input("exterior evaluation needs |x| > L".into()));
        }
        let tab_b = RadialTable::build(1.0, &self.spec.truncation, &self.cache)?;
        let tab_y = RadialTable::build(y.z().norm() / l, &self.spec.truncation, &self.cache)?;
        let kernel = |phi: f64| {
            (r * r - l * l)
                / (2.0 * std::f64::consts::PI * (r * r + l * l - 2.0 * r * l * (th - phi).cos()))
        };
        let spec = QuadratureSpec {
            abs_tol: 1e-8,
            rel_tol: 1e-7,
            max_subdivisions: 800,
            pv_excision_sequence: vec![],
        };
        let boundary = |phi: f64| -> SpinorMatrix {
            let bx = ComplexPoint::from_z(Complex64::from_polar(l, phi));
            self.interior_with_tables(bx, y, &tab_b, &tab_y)
                .unwrap_or(SpinorMatrix {
                    s11: Complex64::new(f64::NAN, 0.0),
                    s12: Complex64::new(f64::NAN, 0.0),
                    s21: Complex64::new(f64::NAN, 0.0),
                    s22: Complex64::new(f64::NAN, 0.0),
                })
        };
        // The kernel integrates to exactly 1, so write the extension as
        // S(th) + int P (S(phi) - S(th)); the subtraction tames the
        // near-boundary peak (width ~ (r-L)/L). Panels are split around the
        // peak so the adaptive rule localizes it cheaply.
        let center = boundary(th);
        let width = ((r - l) / l * 1e3).clamp(1e-3, 1.0);
        let breaks = [
            th - std::f64::consts::PI,
            th - width,
            th + width,
            th + std::f64::consts::PI,
        ];
        let mut s11 = center.s11;
        let mut s21 = center.s21;
        for w in breaks.windows(2) {
            let (v11, _) = quad::integrate_1d_complex(
                |phi| (boundary(phi).s11 - center.s11) * kernel(phi),
                w[0],
                w[1],
                &spec,
            )?;
            let (v21, _) = quad::integrate_1d_complex(
                |phi| (boundary(phi).s21 - center.s21) * kernel(phi),
                w[0],
                w[1],
                &spec,
            )?;
            s11 += v11;
            s21 += v21;
        }
        Ok(SpinorMatrix {
            s11,
            s21,
            s12: s21.conj(),
            s22: s11.conj(),
        })
    }

    /// Finite-difference Wirtinger residual of `(i dslash + mu 1_Lambda) S`
    /// at an interior point `x != y`, relative to the magnitude of the
    /// constituent terms. Step scaled to the distances involved.
    pub fn dirac_residual(&self, x: ComplexPoint, y: ComplexPoint) -> Result<f64> {
        let l = self.spec.l;
        let mu = self.spec.mu;
        let dist_bdy = l - x.z().norm();
        let h = 1e-3 * dist_bdy.min(x.dist(&y)).min(1.0);
        let tab_y = RadialTable::build(y.z().norm() / l, &self.spec.truncation, &self.cache)?;
        let eval = |p: ComplexPoint| -> Result<SpinorMatrix> {
            let tab = RadialTable::build(p.z().norm() / l, &self.spec.truncation, &self.cache)?;
            self.interior_with_tables(p, y, &tab, &tab_y)
        };
        let sp0 = eval(ComplexPoint::new(x.x0 + h, x.x1))?;
        let sm0 = eval(ComplexPoint::new(x.x0 - h, x.x1))?;
        let sp1 = eval(ComplexPoint::new(x.x0, x.x1 + h))?;
        let sm1 = eval(ComplexPoint::new(x.x0, x.x1 - h))?;
        let sc = eval(x)?;
        let wirt = |f: &dyn Fn(&SpinorMatrix) -> Complex64| -> (Complex64, Complex64) {
            let d0 = (f(&sp0) - f(&sm0)) / (2.0 * h);
            let d1 = (f(&sp1) - f(&sm1)) / (2.0 * h);
            (
                0.5 * (-Complex64::i() * d0 + d1),
                0.5 * (Complex64::i() * d0 + d1),
            )
        };
        let (_, dbar_s21) = wirt(&|s| s.s21);
        let (d_s11, _) = wirt(&|s| s.s11);
        let r1 = mu * sc.s11 + 2.0 * dbar_s21;
        let r2 = 2.0 * d_s11 + mu * sc.s21;
        // the natural magnitude of a single derivative entry keeps the
        // relative measure meaningful when every term vanishes (mu = 0)
        let deriv_scale = sc.s21.norm() / x.dist(&y).min(1.0);
        let scale = (mu * sc.s11)
            .norm()
            .max((2.0 * dbar_s21).norm())
            .max((2.0 * d_s11).norm())
            .max((mu * sc.s21).norm())
            .max(deriv_scale)
            .max(1e-12);
        Ok((r1.norm() + r2.norm()) / scale)
    }

    /// Two-sided continuity across the boundary at angle `theta`:
    /// interior value at `(L - delta) e^{i theta}` against the exterior
    /// Poisson value at `(L + delta) e^{i theta}`.
    pub fn boundary_continuity(&self, theta: f64, y: ComplexPoint, delta: f64) -> Result<f64> {
        let l = self.spec.l;
        let xin = ComplexPoint::from_z(Complex64::from_polar(l - delta, theta));
        let xout = ComplexPoint::from_z(Complex64::from_polar(l + delta, theta));
        let si = self.assemble(xin, y)?;
        let so = self.exterior(xout, y)?;
        let num = (si.s11 - so.s11).norm() + (si.s21 - so.s21).norm();
        let den = si.s11.norm().max(si.s21.norm()).max(1e-12);
        Ok(num / den)
    }

    /// Cross-mode energy of the boundary restriction: S11 must carry only
    /// strictly positive angular modes and S21 only strictly negative ones;
    /// returns the off-sector energy fraction measured by a dense DFT.
    pub fn boundary_fourier_defect(&self, y: ComplexPoint, samples: usize) -> Result<f64> {
        let l = self.spec.l;
        let tab_b = RadialTable::build(1.0, &self.spec.truncation, &self.cache)?;
        let tab_y = RadialTable::build(y.z().norm() / l, &self.spec.truncation, &self.cache)?;
        let mut vals11 = Vec::with_capacity(samples);
        let mut vals21 = Vec::with_capacity(samples);
        for i in 0..samples {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
            let bx = ComplexPoint::from_z(Complex64::from_polar(l, phi));
            let s = self.interior_with_tables(bx, y, &tab_b, &tab_y)?;
            vals11.push(s.s11);
            vals21.push(s.s21);
        }
        let dft = |vals: &[Complex64], m: i32| -> Complex64 {
            let nn = vals.len() as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &v) in vals.iter().enumerate() {
                let phi = 2.0 * std::f64::consts::PI * i as f64 / nn;
                acc += v * Complex64::from_polar(1.0, -(m as f64) * phi);
            }
            acc / nn
        };
        let half = (samples / 2) as i32;
        let mut bad11 = 0.0;
        let mut tot11 = 0.0;
        let mut bad21 = 0.0;
        let mut tot21 = 0.0;
        for m in -half..half {
            let c11 = dft(&vals11, m).norm_sqr();
            let c21 = dft(&vals21, m).norm_sqr();
            tot11 += c11;
            tot21 += c21;
            if m <= 0 {
                bad11 += c11;
            }
            if m >= 0 {
                bad21 += c21;
            }
        }
        Ok((bad11 / tot11.max(1e-300)).max(bad21 / tot21.max(1e-300)))
    }

    /// Resolvent identity: compares the Richardson central difference of
    /// `mu -> S` against `-int_Lambda S(x,u) S(u,y) du` by singularity-aware
    /// quadrature (polar grid centered at x, with a separately integrated
    /// patch around y). Returns the maximum entrywise relative deviation.
    pub fn resolvent_check(&self, x: ComplexPoint, y: ComplexPoint, grid: usize) -> Result<f64> {
        let l = self.spec.l;
        // left side: dS/dmu by central differences with Richardson
        let h = 1e-3;
        let eval_mu = |mu: f64| -> Result<SpinorMatrix> {
            let spec = DiskSpec {
                l,
                mu,
                truncation: self.spec.truncation,
            };
            let dg = DiskGreen {
                spec,
                cache: self.cache.clone(),
            };
            dg.assemble(x, y)
        };
        let diff = |hh: f64| -> Result<[Complex64; 2]> {
            let p = eval_mu(self.spec.mu + hh)?;
            let m = eval_mu(self.spec.mu - hh)?;
            Ok([
                (p.s11 - m.s11) / (2.0 * hh),
                (p.s21 - m.s21) / (2.0 * hh),
            ])
        };
        let d1 = diff(h)?;
        let d2 = diff(h / 2.0)?;
        let lhs = [
            (4.0 * d2[0] - d1[0]) / 3.0,
            (4.0 * d2[1] - d1[1]) / 3.0,
        ];

        // right side: -int S(x,u) S(u,y) du. The disk is split along the
        // perpendicular bisector of x and y; each half is integrated in
        // polar coordinates centered at its own singular point, whose
        // 1/|u - center| pole is absorbed by the Jacobian while the other
        // singular point stays at distance >= |x-y|/2.
        let tab_y = RadialTable::build(y.z().norm() / l, &self.spec.truncation, &self.cache)?;
        let tab_x = RadialTable::build(x.z().norm() / l, &self.spec.truncation, &self.cache)?;
        let sval = |a: ComplexPoint, tab_a: &RadialTable, b: ComplexPoint, tab_b: &RadialTable| {
            self.interior_with_tables(a, b, tab_a, tab_b)
        };
        let gk_x: [f64; 8] = [
            0.991_455_371_120_812_6,
            0.949_107_912_342_758_5,
            0.864_864_423_359_769_1,
            0.741_531_185_599_394_5,
            0.586_087_235_467_691_1,
            0.405_845_151_377_397_2,
            0.207_784_955_007_898_48,
            0.0,
        ];
        let gk_w: [f64; 8] = [
            0.022935322010529225,
            0.063_092_092_629_978_56,
            0.104_790_010_322_250_19,
            0.140_653_259_715_525_92,
            0.169_004_726_639_267_9,
            0.190_350_578_064_785_42,
            0.204_432_940_075_298_89,
            0.209_482_141_084_727_82,
        ];
        let radial_nodes = |rmax: f64, panels: usize| -> Vec<(f64, f64)> {
            let mut out = Vec::new();
            let hp = rmax / panels as f64;
            for p in 0..panels {
                let c = (p as f64 + 0.5) * hp;
                let half = hp / 2.0;
                out.push((c, gk_w[7] * half));
                for j in 0..7 {
                    out.push((c - half * gk_x[j], gk_w[j] * half));
                    out.push((c + half * gk_x[j], gk_w[j] * half));
                }
            }
            out
        };
        let mut acc11 = Complex64::new(0.0, 0.0);
        let mut acc21 = Complex64::new(0.0, 0.0);
        let panels = (grid / 8).max(3);
        let mut half_region = |center: ComplexPoint, other: ComplexPoint| -> Result<()> {
            let zc = center.z();
            let zo = other.z();
            for ia in 0..grid {
                let alpha = 2.0 * std::f64::consts::PI * ia as f64 / grid as f64;
                let wa = 2.0 * std::f64::consts::PI / grid as f64;
                let dir = Complex64::from_polar(1.0, alpha);
                // distance to the circle along the ray
                let ce = (zc * dir.conj()).re;
                let t_circle = -ce + (l * l - zc.norm_sqr() + ce * ce).sqrt();
                // distance to the perpendicular bisector of (center, other):
                // |zc + t dir - zo|^2 = t^2  =>  t = |zc-zo|^2 / (2 Re[(zo-zc) conj(dir)])
                let proj = ((zo - zc) * dir.conj()).re;
                let t_bis = if proj > 1e-12 {
                    (zo - zc).norm_sqr() / (2.0 * proj)
                } else {
                    f64::INFINITY
                };
                let rmax = t_circle.min(t_bis);
                if rmax <= 0.0 {
                    continue;
                }
                for (rr, wr) in radial_nodes(rmax, panels) {
                    let u = ComplexPoint::from_z(zc + dir * rr);
                    if u.dist(&x) < 1e-12 || u.dist(&y) < 1e-12 {
                        continue;
                    }
                    let w = rr * wr * wa;
                    let tab_u =
                        RadialTable::build(u.z().norm() / l, &self.spec.truncation, &self.cache)?;
                    let sxu = sval(x, &tab_x, u, &tab_u)?;
                    let suy = sval(u, &tab_u, y, &tab_y)?;
                    acc11 += (sxu.s11 * suy.s11 + sxu.s12 * suy.s21) * w;
                    acc21 += (sxu.s21 * suy.s11 + sxu.s22 * suy.s21) * w;
                }
            }
            Ok(())
        };
        half_region(x, y)?;
        half_region(y, x)?;
        let rhs = [-acc11, -acc21];
        let scale = lhs[0].norm().max(lhs[1].norm()).max(1e-12);
        Ok(((lhs[0] - rhs[0]).norm() + (lhs[1] - rhs[1]).norm()) / scale)
    }
}

/// Deviation `||S_{mu 1_L}(x,y) - S_mu(x,y)||` per L; for the infinite-volume
/// trend check.
pub fn infinite_volume_deviation(
    x: ComplexPoint,
    y: ComplexPoint,
    mu: f64,
    l: f64,
    trunc: SeriesTruncation,
) -> Result<f64> {
    let dg = DiskGreen::new(DiskSpec::new(l, mu, trunc)?)?;
    let s = dg.assemble(x, y)?;
    let sinf = fermion::propagator_massive(x, y, mu)?;
    Ok((s.s11 - sinf.s11)
        .norm()
        .max((s.s21 - sinf.s21).norm())
        .max((s.s12 - sinf.s12).norm())
        .max((s.s22 - sinf.s22).norm()))
}

/// Report for the infinite-volume check at a list of radii.
pub fn infinite_volume_check(
    x: ComplexPoint,
    y: ComplexPoint,
    mu: f64,
    ls: &[f64],
    trunc: SeriesTruncation,
    final_tol: f64,
) -> Result<CheckReport> {
    if mu == 0.0 {
        return Err(Error::Domain("infinite-volume check needs mu != 0".into()));
    }
    let mut devs = Vec::new();
    for &l in ls {
        devs.push(infinite_volume_deviation(x, y, mu, l, trunc)?);
    }
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    let ok = decreasing && *devs.last().unwrap() <= final_tol;
    let mut rep = CheckReport::from_condition(
        "disk_infinite_volume",
        *devs.last().unwrap(),
        final_tol,
        ok,
    );
    rep.computed = devs;
    rep.inputs = format!("mu={mu} ls={ls:?}");
    Ok(rep)
}
