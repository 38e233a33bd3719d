//! Dirichlet eigenfunctions of the disk Laplacian, their companion family,
//! and the truncated remainder series of the finite-volume Dirac Green's
//! function.

use crate::error::{Error, Result};
use crate::point::ComplexPoint;
use crate::specfun::{self, BesselZeroIndex};
use num_complex::Complex64;

/// Angular/radial truncation of the eigen-series.
#[derive(Debug, Clone, Copy)]
pub struct SeriesTruncation {
    pub n_max: u32,
    pub k_max: u32,
    pub tail_tol: f64,
}

impl SeriesTruncation {
    pub fn new(n_max: u32, k_max: u32, tail_tol: f64) -> Result<Self> {
        if n_max < 8 || k_max < 8 {
            return Err(Error::Input("series truncation needs n_max, k_max >= 8".into()));
        }
        Ok(Self { n_max, k_max, tail_tol })
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            n_max: 64,
            k_max: 64,
            tail_tol: 1e-6,
        }
    }
}

/// Immutable cache of Bessel zeros `j_{n,k}` for `n <= n_max`, `k <= k_max`,
/// with the normalization values `J_{n+1}(j_{n,k})` precomputed.
#[derive(Debug, Clone)]
pub struct ZeroCache {
    pub n_max: u32,
    pub k_max: u32,
    /// zeros[n][k-1] = j_{n,k}
    zeros: Vec<Vec<f64>>,
    /// norms[n][k-1] = J_{n+1}(j_{n,k})
    norms: Vec<Vec<f64>>,
}

impl ZeroCache {
    pub fn build(n_max: u32, k_max: u32) -> Result<Self> {
        let mut zeros = Vec::with_capacity(n_max as usize + 1);
        // build rows by interlacing: row n is bracketed by row n-1
        let count0 = (k_max + n_max + 2) as usize;
        let mut row: Vec<f64> = (1..=count0)
            .map(|k| specfun::bessel_zero(BesselZeroIndex::new(0, k as u32).unwrap()))
            .collect::<Result<Vec<f64>>>()?;
        zeros.push(row.clone());
        for _n in 1..=n_max {
            let mut next = Vec::with_capacity(row.len() - 1);
            for i in 0..row.len() - 1 {
                next.push(refine_between(_n, row[i], row[i + 1])?);
            }
            zeros.push(next.clone());
            row = next;
        }
        let mut norms = Vec::with_capacity(zeros.len());
        for (n, zrow) in zeros.iter().enumerate() {
            let mut nr = Vec::with_capacity(zrow.len());
            for &j in zrow {
                nr.push(specfun::bessel_j(n as u32 + 1, j)?);
            }
            norms.push(nr);
        }
        Ok(Self { n_max, k_max, zeros, norms })
    }

    pub fn zero(&self, n: u32, k: u32) -> f64 {
        self.zeros[n as usize][(k - 1) as usize]
    }

    pub fn norm(&self, n: u32, k: u32) -> f64 {
        self.norms[n as usize][(k - 1) as usize]
    }
}

fn refine_between(n: u32, lo: f64, hi: f64) -> Result<f64> {
    // interlacing guarantees exactly one simple zero of J_n in (lo, hi)
    let f = |x: f64| specfun::bessel_j(n, x).unwrap_or(f64::NAN);
    let (mut a, mut b) = (lo * (1.0 + 1e-14), hi * (1.0 - 1e-14));
    let mut fa = f(a);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Index of an eigenfunction: `n` any integer, `k >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct EigenIndex {
    pub n: i32,
    pub k: u32,
}

/// `e_{n,k}(x) = J_{|n|}(j_{|n|,k} r/L) e^{i n theta} / (sqrt(pi) L J_{|n|+1}(j_{|n|,k}))`.
pub fn eigenfunction(idx: EigenIndex, p: ComplexPoint, l: f64, cache: &ZeroCache) -> Result<Complex64> {
    let z = p.z();
    let (r, th) = (z.norm(), z.arg());
    let an = idx.n.unsigned_abs();
    let j = cache.zero(an, idx.k);
    let radial = specfun::bessel_j(an, j * r / l)?;
    let norm = std::f64::consts::PI.sqrt() * l * cache.norm(an, idx.k);
    Ok(Complex64::from_polar(radial / norm, idx.n as f64 * th))
}

/// Companion family `f_{n,k} = -2 (L/j_{n-1,k}) dbar e_{n-1,k}`, in the
/// closed form `J_n(j_{n-1,k} r/L) e^{i n theta} / (sqrt(pi) L J_n(j_{n-1,k}))`
/// (n, k >= 1), obtained from the Bessel recurrences.
pub fn f_eigenfunction(n: u32, k: u32, p: ComplexPoint, l: f64, cache: &ZeroCache) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Input("f family starts at n = 1".into()));
    }
    let z = p.z();
    let (r, th) = (z.norm(), z.arg());
    let jp = cache.zero(n - 1, k);
    let radial = specfun::bessel_j(n, jp * r / l)?;
    let norm = std::f64::consts::PI.sqrt() * l * specfun::bessel_j(n, jp)?;
    Ok(Complex64::from_polar(radial / norm, n as f64 * th))
}

/// Radial part tables for the remainder series at a fixed scaled radius
/// u = r/L: `je[n][k-1] = J_n(j_{n,k} u)` and `jf[n][k-1] = J_n(j_{n-1,k} u)`
/// (the latter for n >= 1).
pub struct RadialTable {
    pub je: Vec<Vec<f64>>,
    pub jf: Vec<Vec<f64>>,
    /// J_{n+1}(j_{n,k} u), the radial part of 2 d e_{-n,k}
    pub je_d: Vec<Vec<f64>>,
    /// J_{n-1}(j_{n-1,k} u), the radial part of 2 d f_{n,k}
    pub jf_d: Vec<Vec<f64>>,
}

impl RadialTable {
    pub fn build(u: f64, trunc: &SeriesTruncation, cache: &ZeroCache) -> Result<Self> {
        let nmax = trunc.n_max as usize;
        let kmax = trunc.k_max as usize;
        let mut je = vec![vec![0.0; kmax]; nmax + 1];
        let mut je_d = vec![vec![0.0; kmax]; nmax + 1];
        let mut jf = vec![vec![0.0; kmax]; nmax + 1];
        let mut jf_d = vec![vec![0.0; kmax]; nmax + 1];
        for n in 0..=nmax {
            for k in 1..=kmax {
                let j = cache.zero(n as u32, k as u32);
                je[n][k - 1] = specfun::bessel_j(n as u32, j * u)?;
                je_d[n][k - 1] = specfun::bessel_j(n as u32 + 1, j * u)?;
            }
        }
        for n in 1..=nmax {
            for k in 1..=kmax {
                let jp = cache.zero(n as u32 - 1, k as u32);
                jf[n][k - 1] = specfun::bessel_j(n as u32, jp * u)?;
                jf_d[n][k - 1] = specfun::bessel_j(n as u32 - 1, jp * u)?;
            }
        }
        Ok(Self { je, jf, je_d, jf_d })
    }
}

/// Truncated remainder pair `(R_{m;11}, R_{m;21})` at order m (= 3 in the
/// assembly), along with a termwise tail bound from the eigenvalue lower
/// bound and the sup-norm envelopes of the eigenfunctions.
pub struct Remainder {
    pub r11: Complex64,
    pub r21: Complex64,
    pub tail_bound: f64,
}

/// Evaluates the remainder series at scaled radii/angles
/// (u, th_x) and (v, th_y). The two families contribute
///
///   R11 = (-1)^m sum c^e_{nk} E-term + (-1)^m sum c^f_{nk} F-term,
///   R21 = (-1)^{m+1} [sum c'^e_{nk} (2 d e) term + sum c'^f_{nk} (2 d f) term],
///
/// with c_{nk} = L^{2(m+1)} mu^{2m+1} / ((1 + mu^2 L^2/j^2) j^{2(m+1)}) and
/// c' the same with mu^{2m}.
#[allow(clippy::too_many_arguments)]
pub fn remainder(
    m: u32,
    tab_x: &RadialTable,
    tab_y: &RadialTable,
    th_x: f64,
    th_y: f64,
    mu: f64,
    l: f64,
    trunc: &SeriesTruncation,
    cache: &ZeroCache,
) -> Remainder {
    let mm = m as i32;
    let sgn_m = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pi = std::f64::consts::PI;
    let dth = th_x - th_y;
    let mut r11 = Complex64::new(0.0, 0.0);
    let mut r21 = Complex64::new(0.0, 0.0);
    let phx = Complex64::from_polar(1.0, -th_x);
    for n in 0..=trunc.n_max {
        for k in 1..=trunc.k_max {
            let j = cache.zero(n, k);
            let nrm = cache.norm(n, k);
            let denom = (1.0 + mu * mu * l * l / (j * j)) * j.powi(2 * (mm + 1));
            let ce = l.powi(2 * (mm + 1)) * mu.powi(2 * mm + 1) / denom;
            let cep = l.powi(2 * (mm + 1)) * mu.powi(2 * mm) / denom;
            // e_{-n,k}(x) conj(e_{-n,k}(y)) = Jn(ju)Jn(jv)/(pi L^2 Jn+1(j)^2) e^{-in dth}
            let base = tab_x.je[n as usize][k as usize - 1] * tab_y.je[n as usize][k as usize - 1]
                / (pi * l * l * nrm * nrm);
            r11 += sgn_m * ce * base * Complex64::from_polar(1.0, -(n as f64) * dth);
            // (2 d e_{-n,k})(x) conj(e_{-n,k}(y)) =
            //   -(j/L) J_{n+1}(ju) J_n(jv) / (pi L^2 Jn+1(j)^2) e^{-i th_x} e^{-in dth}
            let based = -(j / l) * tab_x.je_d[n as usize][k as usize - 1]
                * tab_y.je[n as usize][k as usize - 1]
                / (pi * l * l * nrm * nrm);
            r21 += (-sgn_m) * cep * based * phx * Complex64::from_polar(1.0, -(n as f64) * dth);
        }
    }
    for n in 1..=trunc.n_max {
        for k in 1..=trunc.k_max {
            let jp = cache.zero(n - 1, k);
            let nrm = cache.norm(n - 1, k); // J_n(j_{n-1,k})
            let denom = (1.0 + mu * mu * l * l / (jp * jp)) * jp.powi(2 * (mm + 1));
            let cf = l.powi(2 * (mm + 1)) * mu.powi(2 * mm + 1) / denom;
            let cfp = l.powi(2 * (mm + 1)) * mu.powi(2 * mm) / denom;
            // f_{n,k}(x) conj(f_{n,k}(y)) = Jn(j'u)Jn(j'v)/(pi L^2 Jn(j')^2) e^{+in dth}
            let base = tab_x.jf[n as usize][k as usize - 1] * tab_y.jf[n as usize][k as usize - 1]
                / (pi * l * l * nrm * nrm);
            r11 += sgn_m * cf * base * Complex64::from_polar(1.0, (n as f64) * dth);
            // (2 d f_{n,k})(x) conj(f_{n,k}(y)) =
            //   (j'/L) J_{n-1}(j'u) J_n(j'v) / (pi L^2 Jn(j')^2) e^{-i th_x} e^{+in dth}
            let based = (jp / l) * tab_x.jf_d[n as usize][k as usize - 1]
                * tab_y.jf[n as usize][k as usize - 1]
                / (pi * l * l * nrm * nrm);
            r21 += (-sgn_m) * cfp * based * phx * Complex64::from_polar(1.0, (n as f64) * dth);
        }
    }
    // termwise tail estimate: |e_{n,k}| <= C j/L with C ~ 1, so the R21 tail
    // beyond (n_max, k_max) is bounded by sum over the excluded index range
    // of mu^{2m} L^{2m-1} j^{-(2m-1)} (and one power better for R11); the
    // eigenvalue bound j^2 >= n^2 + (k-1/4)^2 pi^2 makes this summable.
    let nm = trunc.n_max as f64;
    let km = trunc.k_max as f64;
    let jmin = (nm * nm + (km - 0.25) * (km - 0.25) * pi * pi).sqrt();
    let tail = 4.0 * mu.powi(2 * mm) * l.powi(2 * mm - 1) * (nm + km)
        / ((2.0 * mm as f64 - 2.0) * jmin.powi(2 * mm - 2));
    Remainder { r11, r21, tail_bound: tail }
}
