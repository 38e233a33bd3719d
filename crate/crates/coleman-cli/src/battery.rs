//! The verification batteries behind each subcommand.

use coleman::bosonize::{self, CorrespondenceConfig};
use coleman::diskgreen::eigen::SeriesTruncation;
use coleman::diskgreen::{DiskGreen, DiskSpec};
use coleman::gff;
use coleman::point::ComplexPoint;
use coleman::renorm;
use coleman::report::CheckReport;
use coleman::sgprop;
use coleman::specfun;
use coleman::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use std::time::Instant;

fn stamp<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t0 = Instant::now();
    let v = f()?;
    Ok((v, t0.elapsed().as_secs_f64() * 1e3))
}

/// Correspondence shapes (n, n', q, q') covering totals 1, 3, 4, 5, the
/// admissible totals of 2, and non-neutral cases that must vanish.
pub const BOSONIZE_SHAPES: [(usize, usize, usize, usize); 12] = [
    (1, 0, 0, 0), // total 1: both sides vanish
    (0, 0, 1, 0),
    (1, 1, 0, 0), // admissible total 2
    (0, 0, 2, 0),
    (0, 0, 1, 1),
    (1, 0, 1, 0), // total 2, both sides vanish (non-neutral)
    (1, 1, 1, 0), // total 3
    (1, 1, 0, 1),
    (2, 1, 0, 0), // non-neutral: zero
    (2, 2, 0, 0), // total 4
    (1, 1, 1, 1),
    (2, 2, 1, 0), // total 5
];

fn rand_point(rng: &mut ChaCha20Rng) -> ComplexPoint {
    ComplexPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// Draws a random configuration of the given shape with a minimum pairwise
/// separation so the kernel matrices stay well-conditioned.
fn random_config(shape: (usize, usize, usize, usize), rng: &mut ChaCha20Rng) -> CorrespondenceConfig {
    let (n, np, q, qp) = shape;
    loop {
        let pts: Vec<ComplexPoint> = (0..n + np + q + qp).map(|_| rand_point(rng)).collect();
        let mut ok = true;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].dist(&pts[j]) < 0.05 {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        return CorrespondenceConfig {
            plus_charges: pts[..n].to_vec(),
            minus_charges: pts[n..n + np].to_vec(),
            holo_currents: pts[n + np..n + np + q].to_vec(),
            antiholo_currents: pts[n + np + q..].to_vec(),
        };
    }
}

/// The massless Coleman correspondence battery: `configs` seeded random
/// configurations cycled over the admissible shapes.
pub fn bosonize_battery(seed: u64, configs: usize, tol: f64) -> Result<Vec<CheckReport>> {
    // draw all configurations up front so the stream is independent of the
    // evaluation order, then evaluate in parallel and emit in index order
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let drawn: Vec<(usize, CorrespondenceConfig)> = (0..configs)
        .map(|i| {
            let shape = BOSONIZE_SHAPES[i % BOSONIZE_SHAPES.len()];
            (i, random_config(shape, &mut rng))
        })
        .collect();
    drawn
        .par_iter()
        .map(|(i, cfg)| {
            let (mut rep, ms) = stamp(|| bosonize::coleman_check_z0(cfg, tol))?;
            rep.id = format!("coleman_z0[{i:04}]");
            rep.wall_ms = ms;
            Ok(rep)
        })
        .collect()
}

/// Parameters of the disk battery.
pub struct DiskParams {
    pub l: f64,
    pub mu: f64,
    pub seed: u64,
    pub pairs: usize,
    pub n_max: u32,
    pub k_max: u32,
    pub l_list: Vec<f64>,
    pub resolvent_grid: usize,
}

impl Default for DiskParams {
    fn default() -> Self {
        Self {
            l: 2.0,
            mu: 0.5,
            seed: 1,
            pairs: 10,
            n_max: 64,
            k_max: 64,
            l_list: vec![],
            resolvent_grid: 48,
        }
    }
}

/// The disk Green's-function battery: Dirac residuals on seeded interior
/// pairs, boundary continuity, boundary Fourier sectors, the resolvent
/// identity, and (optionally) the infinite-volume trend over `l_list`.
pub fn diskgreen_battery(p: &DiskParams) -> Result<Vec<CheckReport>> {
    let trunc = SeriesTruncation::new(p.n_max, p.k_max, 1e-6)?;
    let dg = DiskGreen::new(DiskSpec::new(p.l, p.mu, trunc)?)?;
    let mut rng = ChaCha20Rng::seed_from_u64(p.seed);
    let mut reports = Vec::new();
    // interior pairs, kept away from the boundary and from each other
    let mut pairs = Vec::new();
    while pairs.len() < p.pairs {
        let x = ComplexPoint::new(
            rng.gen_range(-0.75 * p.l..0.75 * p.l),
            rng.gen_range(-0.75 * p.l..0.75 * p.l),
        );
        let y = ComplexPoint::new(
            rng.gen_range(-0.75 * p.l..0.75 * p.l),
            rng.gen_range(-0.75 * p.l..0.75 * p.l),
        );
        if x.z().norm() < 0.85 * p.l && y.z().norm() < 0.85 * p.l && x.dist(&y) > 0.15 * p.l {
            pairs.push((x, y));
        }
    }
    let residuals: Vec<CheckReport> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let (r, ms) = stamp(|| dg.dirac_residual(x, y))?;
            let mut rep = CheckReport::from_condition("disk_dirac_residual", r, 1e-4, r <= 1e-4);
            rep.wall_ms = ms;
            rep.id = format!("disk_dirac_residual[{i:02}]");
            rep.inputs = format!(
                "L={} mu={} x=({},{}) y=({},{})",
                p.l, p.mu, x.x0, x.x1, y.x0, y.x1
            );
            Ok(rep)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.extend(residuals);

    if p.mu == 0.0 {
        // mu = 0 shortcut: the assembly must reproduce the massless
        // propagator entrywise
        let (x, y) = pairs[0];
        let s = dg.assemble(x, y)?;
        let s0 = coleman::fermion::propagator_massless(x, y)?;
        let dev = (s.s21 - s0.s21).norm() + s.s11.norm();
        reports.push(
            CheckReport::from_condition("disk_mu0_massless", dev, 1e-9, dev <= 1e-9)
                .with_inputs(format!("L={}", p.l)),
        );
    }

    // boundary continuity at two angles
    let y = pairs[0].1;
    for (i, theta) in [0.7, 2.9].into_iter().enumerate() {
        let (c, ms) = stamp(|| dg.boundary_continuity(theta, y, 1e-6 * p.l))?;
        let mut rep = CheckReport::from_condition("disk_boundary_continuity", c, 1e-5, c <= 1e-5);
        rep.wall_ms = ms;
        rep.id = format!("disk_boundary_continuity[{i}]");
        rep.inputs = format!("theta={theta}");
        reports.push(rep);
    }

    // boundary Fourier sector defect
    let defect = dg.boundary_fourier_defect(y, 256)?;
    reports.push(CheckReport::from_condition(
        "disk_boundary_fourier",
        defect,
        1e-5,
        defect <= 1e-5,
    ));

    // resolvent identity on the first pair
    let (x, y) = pairs[0];
    let (r, ms) = stamp(|| dg.resolvent_check(x, y, p.resolvent_grid))?;
    let mut rep = CheckReport::from_condition("disk_resolvent", r, 3e-3, r <= 3e-3)
        .with_inputs(format!("grid={}", p.resolvent_grid));
    rep.wall_ms = ms;
    reports.push(rep);

    // infinite-volume trend
    if !p.l_list.is_empty() {
        if p.mu == 0.0 {
            return Err(Error::Domain("L-list convergence needs mu != 0".into()));
        }
        let (x, y) = (ComplexPoint::new(0.0, 0.5), ComplexPoint::new(0.0, -0.5));
        let rep = coleman::diskgreen::infinite_volume_check(x, y, p.mu, &p.l_list, trunc, 1e-3)?;
        reports.push(rep);
    }
    Ok(reports)
}

/// The sine-Gordon propagator battery: the closed-form scan of the Fourier
/// covariance, the three-route bubble agreement on the reference grid, and
/// the two anchors of F.
pub fn sgprop_battery(mu: f64, scan_points: usize) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    // anchor rows
    let f0 = sgprop::f_hat(1e-3)?;
    reports.push(CheckReport::from_scalar(
        "sg_f_origin_anchor",
        f0,
        sgprop::f_hat_origin(),
        1e-6,
    ));
    let x = 1e3;
    reports.push(CheckReport::from_scalar(
        "sg_f_infinity_anchor",
        sgprop::f_hat(x)? * x * x,
        1.0,
        1e-2,
    ));
    // scan rows: positivity and monotone decrease over |p|/mu in
    // logspace(-2, 3, scan_points)
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    let mut positive = true;
    for i in 0..scan_points {
        let ratio = 10f64.powf(-2.0 + 5.0 * i as f64 / (scan_points.max(2) - 1) as f64);
        let v = sgprop::c_hat(ComplexPoint::new(0.0, ratio * mu.abs()), mu)?;
        positive &= v > 0.0;
        monotone &= v < prev;
        prev = v;
    }
    reports.push(CheckReport::from_condition(
        "sg_chat_scan_positive_monotone",
        if positive && monotone { 0.0 } else { 1.0 },
        0.0,
        positive && monotone,
    ));
    // bubble grid
    for (i, ratio) in [0.1, 0.5, 1.0, 5.0, 10.0].into_iter().enumerate() {
        let (mut rep, ms) =
            stamp(|| sgprop::bubble_check(ComplexPoint::new(0.0, ratio * mu.abs()), mu, 1e-5))?;
        rep.id = format!("sg_bubble[{i}]");
        rep.wall_ms = ms;
        reports.push(rep);
    }
    Ok(reports)
}

/// Position-space experiment: the radial back-transform
/// `C(r) = (1/2pi) int_0^inf J_0(p r) C^(p) p dp` evaluated by Hankel
/// quadrature on a small r-grid. Emitted as data rows (no closed-form
/// reference exists); the single checkable feature is monotone decay.
pub fn sgprop_hankel_rows(mu: f64, rs: &[f64]) -> Result<Vec<CheckReport>> {
    let spec = coleman::quad::QuadratureSpec::with_tol(1e-9, 1e-8);
    let mut rows = Vec::new();
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for (i, &r) in rs.iter().enumerate() {
        // the integrand decays like p^-1 J0(pr) beyond p ~ few/mu; truncate
        // where the envelope bound makes the tail negligible
        let p_max = 40.0 / r.max(0.05) + 20.0 * mu.abs();
        let (v, _) = coleman::quad::integrate_1d(
            |p| {
                let j0 = specfun::bessel_j(0, p * r).unwrap_or(0.0);
                let c = sgprop::c_hat(ComplexPoint::new(0.0, p), mu).unwrap_or(0.0);
                j0 * c * p / (2.0 * std::f64::consts::PI)
            },
            0.0,
            p_max,
            &spec,
        )?;
        monotone &= v < prev;
        prev = v;
        let mut rep = CheckReport::from_condition("sg_hankel_position", v, f64::NAN, true);
        rep.id = format!("sg_hankel_position[{i}]");
        rep.inputs = format!("r={r}");
        rows.push(rep);
    }
    if let Some(last) = rows.last_mut() {
        last.pass = monotone;
    }
    Ok(rows)
}

/// Parameters of the renormalized-potential battery.
pub struct RenpotParams {
    pub beta: f64,
    pub epsilon: f64,
    pub m: f64,
    pub t_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for RenpotParams {
    fn default() -> Self {
        Self {
            beta: 4.0 * std::f64::consts::PI,
            epsilon: 1e-3,
            m: 0.1,
            t_grid: vec![0.1, 0.2, 0.4],
            samples: 4000,
            seed: 7,
        }
    }
}

/// The renormalized-potential battery: the v1 bound on a grid, the n = 2
/// recursion residual, the norm slope fit, and the vanishing/cancellation
/// rows of the partition-function kernels.
pub fn renpot_battery(p: &RenpotParams) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    // v1 bound grid
    for (i, &(t, m)) in [(0.25, 0.5), (0.1, 0.2), (0.5, 0.9)].iter().enumerate() {
        let scales = renorm::ScaleParams::new(p.epsilon.min(0.01), t, m, p.beta)?;
        let v = renorm::v1(&scales)?;
        let bound = renorm::v1_bound(&scales);
        let ok = v >= 0.0 && v <= bound;
        let mut rep = CheckReport::from_condition("renorm_v1_bound", v, bound, ok);
        rep.id = format!("renorm_v1_bound[{i}]");
        rep.inputs = format!("beta={} t={t} m={m} eps={}", p.beta, p.epsilon.min(0.01));
        reports.push(rep);
    }
    // n = 2 recursion differential residual
    {
        let scales = renorm::ScaleParams::new(0.01, 0.25, 0.5, p.beta)?;
        let a = gff::ChargeInsertion::new(ComplexPoint::new(0.0, 0.0), 1)?;
        let b = gff::ChargeInsertion::new(ComplexPoint::new(0.0, 0.4), -1)?;
        let h = 1e-5;
        let vt = |t: f64| -> Result<f64> {
            let sc = renorm::ScaleParams::new(scales.epsilon, t, scales.m, scales.beta)?;
            renorm::v2(&a, &b, &sc)
        };
        let fd = (vt(scales.t + h)? - vt(scales.t - h)?) / (2.0 * h);
        let r = a.point.dist(&b.point);
        let udot_t = -scales.beta * renorm::c_dot(scales.t, r, scales.m);
        let v1t = renorm::v1(&scales)?;
        let dwdt = scales.beta * renorm::c_dot(scales.t, 0.0, scales.m) + udot_t;
        let rhs = udot_t * v1t * v1t - dwdt * renorm::v2(&a, &b, &scales)?;
        let resid = ((fd - rhs) / rhs.abs().max(1e-300)).abs();
        reports.push(CheckReport::from_condition(
            "renorm_v2_recursion_residual",
            resid,
            1e-5,
            resid <= 1e-5,
        ));
    }
    // norm slope fit
    let (mut slope_rep, ms) = stamp(|| {
        renorm::norm_slope_check(p.beta, &p.t_grid, p.epsilon, p.m, p.samples, p.seed, 0.15)
    })?;
    slope_rep.wall_ms = ms;
    reports.push(slope_rep);
    // M~ vanishing rows
    {
        let one = [gff::ChargeInsertion::new(ComplexPoint::new(0.0, 0.0), 1)?];
        let v = renorm::m_tilde_limit(&one, p.beta)?;
        reports.push(CheckReport::from_scalar("renorm_mtilde_odd", v, 0.0, 1e-12));
        let pair = [
            gff::ChargeInsertion::new(ComplexPoint::new(0.0, 0.0), 1)?,
            gff::ChargeInsertion::new(ComplexPoint::new(0.0, 0.7), -1)?,
        ];
        let v = renorm::m_tilde_limit(&pair, p.beta)?;
        reports.push(CheckReport::from_scalar(
            "renorm_mtilde_pair_cancellation",
            v,
            0.0,
            1e-12,
        ));
    }
    Ok(reports)
}

/// Golden-value table rows for the special functions.
pub fn tables_battery() -> Result<Vec<CheckReport>> {
    let rows = vec![
        CheckReport::from_scalar(
            "golden_k0_1",
            specfun::bessel_k(0, 1.0)?,
            0.421_024_438_240_708_34,
            1e-12,
        ),
        CheckReport::from_scalar(
            "golden_k1_1",
            specfun::bessel_k(1, 1.0)?,
            0.601_907_230_197_234_6,
            1e-12,
        ),
        CheckReport::from_scalar(
            "golden_gamma0_1",
            specfun::inc_gamma0(1.0)?,
            0.219_383_934_395_520_29,
            1e-12,
        ),
        CheckReport::from_scalar(
            "golden_j01",
            specfun::bessel_zero(specfun::BesselZeroIndex::new(0, 1)?)?,
            2.404_825_557_695_773,
            1e-11,
        ),
        CheckReport::from_scalar(
            "golden_arsinh_half",
            specfun::arsinh(0.5),
            0.481_211_825_059_603_47,
            1e-14,
        ),
        CheckReport::from_scalar(
            "golden_const_a",
            bosonize::constant_a(),
            9.416_056_915_754_142,
            1e-14,
        ),
        CheckReport::from_scalar(
            "golden_const_b",
            bosonize::constant_b(),
            1.772_453_850_905_516,
            1e-15,
        ),
        CheckReport::from_scalar(
            "golden_f_1",
            sgprop::f_hat(1.0)?,
            0.139_182_118_071_991_93,
            1e-13,
        ),
    ];
    Ok(rows)
}
