//! The bosonization dictionary at the free-fermion point: the constants A
//! and B, the massless (z = mu = 0) correspondence checker, and the charge
//! one-point divergence coefficients.

use crate::error::{Error, Result};
use crate::fermion::{self, FermionInsertion, Propagator};
use crate::gff::{self, ChargeInsertion};
use crate::point::ComplexPoint;
use crate::quad::{self, QuadratureSpec};
use crate::report::CheckReport;
use crate::specfun::{self, EULER_GAMMA};
use num_complex::Complex64;

/// `A = 4 pi e^{-gamma/2}`, the charge-field normalization.
pub fn constant_a() -> f64 {
    4.0 * std::f64::consts::PI * (-EULER_GAMMA / 2.0).exp()
}

/// `B = sqrt(pi)`, the current normalization.
pub fn constant_b() -> f64 {
    std::f64::consts::PI.sqrt()
}

/// A pointwise correspondence configuration: `n` positive charges, `n'`
/// negative charges, `q` holomorphic currents, `q'` antiholomorphic
/// currents, all at pairwise distinct points.
#[derive(Debug, Clone)]
pub struct CorrespondenceConfig {
    pub plus_charges: Vec<ComplexPoint>,
    pub minus_charges: Vec<ComplexPoint>,
    pub holo_currents: Vec<ComplexPoint>,
    pub antiholo_currents: Vec<ComplexPoint>,
}

impl CorrespondenceConfig {
    pub fn total(&self) -> usize {
        self.plus_charges.len()
            + self.minus_charges.len()
            + self.holo_currents.len()
            + self.antiholo_currents.len()
    }

    fn all_points(&self) -> Vec<ComplexPoint> {
        let mut v = self.plus_charges.clone();
        v.extend_from_slice(&self.minus_charges);
        v.extend_from_slice(&self.holo_currents);
        v.extend_from_slice(&self.antiholo_currents);
        v
    }

    pub fn validate(&self) -> Result<()> {
        let total = self.total();
        if total == 0 {
            return Err(Error::Input("configuration needs at least one insertion".into()));
        }
        let pts = self.all_points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].dist(&pts[j]) == 0.0 {
                    return Err(Error::Coincident(format!("points {i} and {j} coincide")));
                }
            }
        }
        // the pointwise statement covers total = 1, total >= 3, and the
        // admissible total = 2 shapes (all of them are fine pointwise: the
        // disjoint-support restriction is the smeared statement's concern)
        Ok(())
    }
}

/// Evaluates both sides of the massless Coleman correspondence for the
/// configuration and reports their agreement.
///
/// Bosonic side: the GFF truncated correlator of
/// `prod :e^{+i sqrt(4pi) phi}: prod :e^{-i sqrt(4pi) phi}: prod (-i d phi) prod (-i dbar phi)`.
/// Fermionic side: `A^{n+n'} B^{q+q'}` times the truncated cyclic-sum
/// correlator with the dictionary insertions
/// `psibar_1 psi_1, psibar_2 psi_2, psibar_2 psi_1, psibar_1 psi_2`.
pub fn coleman_check_z0(config: &CorrespondenceConfig, tol: f64) -> Result<CheckReport> {
    config.validate()?;
    let beta = 4.0 * std::f64::consts::PI;
    let n = config.plus_charges.len();
    let np = config.minus_charges.len();
    let q = config.holo_currents.len();
    let qp = config.antiholo_currents.len();

    // ----- bosonic side -----
    // The holomorphic current couples as -i d phi and the antiholomorphic
    // one as its conjugate +i dbar phi. With -i on both, the two sides of
    // the correspondence differ by exactly (-1)^{q'}: adjudicated by three
    // independent routes (the cyclic sum evaluated directly, the Grassmann
    // oracle, and Gaussian integration by parts on the field side).
    let mi = Complex64::new(0.0, -1.0);
    let pi_factor = mi.powu(q as u32) * mi.conj().powu(qp as u32);
    let bosonic = if n + np == 0 {
        // pure gradient sector
        let g = gff::gradient_truncated(&config.holo_currents, &config.antiholo_currents)?;
        pi_factor * g
    } else {
        let mut charges: Vec<ChargeInsertion> = Vec::new();
        for &p in &config.plus_charges {
            charges.push(ChargeInsertion::new(p, 1)?);
        }
        for &p in &config.minus_charges {
            charges.push(ChargeInsertion::new(p, -1)?);
        }
        let g = gff::mixed_truncated_corr(
            &charges,
            &config.holo_currents,
            &config.antiholo_currents,
            beta,
        )?;
        pi_factor * g
    };

    // ----- fermionic side -----
    let fermionic = if n + np == 0 && q + qp == 1 {
        // single current insertion: the pointwise kernel S_21(z,z) is
        // undefined, but the one-point function vanishes by symmetry,
        // matching the vanishing gradient one-point on the bosonic side
        Complex64::new(0.0, 0.0)
    } else {
        let mut insertions: Vec<FermionInsertion> = Vec::new();
        for &p in &config.plus_charges {
            insertions.push(FermionInsertion::new(p, 1, 1)?);
        }
        for &p in &config.minus_charges {
            insertions.push(FermionInsertion::new(p, 2, 2)?);
        }
        for &p in &config.holo_currents {
            insertions.push(FermionInsertion::new(p, 2, 1)?);
        }
        for &p in &config.antiholo_currents {
            insertions.push(FermionInsertion::new(p, 1, 2)?);
        }
        let trunc = fermion::corr_truncated(&insertions, Propagator::Massless)?;
        trunc * constant_a().powi((n + np) as i32) * constant_b().powi((q + qp) as i32)
    };

    Ok(
        CheckReport::from_complex("coleman_correspondence_z0", bosonic, fermionic, tol)
            .with_inputs(format!("n={n} n'={np} q={q} q'={qp}")),
    )
}

/// The one-point coefficient integral
/// `I(beta) = int_0^inf r^{1 - beta/2pi} e^{-(beta/4pi) Gamma(0, r^2)} dr`,
/// finite exactly for `beta` in `(4 pi, 6 pi)`.
pub fn one_point_coefficient(beta: f64) -> Result<f64> {
    let four_pi = 4.0 * std::f64::consts::PI;
    let six_pi = 6.0 * std::f64::consts::PI;
    if beta <= four_pi || beta >= six_pi {
        return Err(Error::Domain(format!(
            "one-point coefficient integral converges for beta in (4pi, 6pi), got {beta}"
        )));
    }
    let p = beta / (2.0 * std::f64::consts::PI);
    let spec = QuadratureSpec::with_tol(1e-12, 1e-11);
    // near 0 the integrand behaves like r e^{gamma beta/4pi} (finite); near
    // infinity like r^{1-beta/2pi}, integrable for beta > 4pi.
    let f = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let g = specfun::inc_gamma0(r * r).unwrap_or(0.0);
        r.powf(1.0 - p) * (-(beta / four_pi) * g).exp()
    };
    let (v, _) = quad::integrate_1d(f, 0.0, f64::INFINITY, &spec)?;
    Ok(v)
}

/// Coefficient of `log(1/eps) * z * int f` in the charge one-point function
/// at `beta = 4 pi`: exactly `2 pi e^{-gamma}`.
pub fn log_coefficient_4pi() -> f64 {
    2.0 * std::f64::consts::PI * (-EULER_GAMMA).exp()
}

/// Gradient one-point functions vanish identically by symmetry.
pub fn gradient_one_point() -> f64 {
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pt(x0: f64, x1: f64) -> ComplexPoint {
        ComplexPoint::new(x0, x1)
    }

    #[test]
    fn constants() {
        // A = 4 pi e^{-gamma/2}, B = sqrt(pi), 20-digit references
        assert!((constant_a() - 9.4160569157541423977).abs() < 1e-14);
        assert!((constant_b() - 1.7724538509055160273).abs() < 1e-15);
        // A^2/(2pi)^2 = 4 e^{-gamma}: the charge-pair normalization closes
        let lhs = constant_a().powi(2) / (2.0 * std::f64::consts::PI).powi(2);
        let rhs = 4.0 * (-EULER_GAMMA).exp();
        assert!((lhs - rhs).abs() < 1e-14 * rhs);
    }

    #[test]
    fn charge_pair_matches() {
        // n = n' = 1, |x - y| = 1: bosonic 4 e^{-gamma}, fermionic
        // A^2 (2pi)^{-2}; equal within 1e-12
        let cfg = CorrespondenceConfig {
            plus_charges: vec![pt(0.0, 0.0)],
            minus_charges: vec![pt(0.0, 1.0)],
            holo_currents: vec![],
            antiholo_currents: vec![],
        };
        let rep = coleman_check_z0(&cfg, 1e-12).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!((rep.computed[0] - 4.0 * (-EULER_GAMMA).exp()).abs() < 1e-12);
    }

    #[test]
    fn gradient_pair_matches() {
        // q = 2: bosonic (-i)^2 <d phi d phi>^T = 1/(4 pi (z1-z2)^2);
        // fermionic B^2/((2pi)^2 (z1-z2)^2); note B^2/(2pi)^2 = 1/(4pi)
        let cfg = CorrespondenceConfig {
            plus_charges: vec![],
            minus_charges: vec![],
            holo_currents: vec![pt(0.3, -0.4), pt(-0.9, 0.6)],
            antiholo_currents: vec![],
        };
        let rep = coleman_check_z0(&cfg, 1e-12).unwrap();
        assert!(rep.pass, "{rep:?}");
        let b2 = constant_b().powi(2) / (2.0 * std::f64::consts::PI).powi(2);
        assert!((b2 - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-16);
    }

    #[test]
    fn pair_plus_current_ratio() {
        // n = n' = 1, q = 1: both sides carry (1/2pi)(1/(x-z) - 1/(y-z))
        // relative to the pair correlator
        let x = pt(0.1, 0.2);
        let y = pt(-0.5, 0.9);
        let z = pt(0.8, -0.6);
        let with = CorrespondenceConfig {
            plus_charges: vec![x],
            minus_charges: vec![y],
            holo_currents: vec![z],
            antiholo_currents: vec![],
        };
        let rep = coleman_check_z0(&with, 1e-11).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn random_configurations_match() {
        let mut rng = StdRng::seed_from_u64(99);
        let rand_pt = |rng: &mut StdRng| {
            pt(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        };
        for trial in 0..30 {
            let shapes = [
                (1, 1, 1, 0),
                (1, 1, 0, 1),
                (2, 2, 0, 0),
                (1, 1, 2, 1),
                (2, 1, 0, 0), // non-neutral: both sides 0
                (0, 0, 2, 0),
                (1, 1, 1, 1),
            ];
            let (n, np, q, qp) = shapes[trial % shapes.len()];
            let cfg = CorrespondenceConfig {
                plus_charges: (0..n).map(|_| rand_pt(&mut rng)).collect(),
                minus_charges: (0..np).map(|_| rand_pt(&mut rng)).collect(),
                holo_currents: (0..q).map(|_| rand_pt(&mut rng)).collect(),
                antiholo_currents: (0..qp).map(|_| rand_pt(&mut rng)).collect(),
            };
            if cfg.validate().is_err() {
                continue; // astronomically unlikely coincidence
            }
            let rep = coleman_check_z0(&cfg, 1e-10).unwrap();
            assert!(rep.pass, "trial {trial} shape ({n},{np},{q},{qp}): {rep:?}");
        }
    }

    #[test]
    fn scaling_covariance_of_both_sides() {
        // rescaling all points by lambda rescales both sides by the same
        // power: the ratio of ratios is 1
        let cfg = CorrespondenceConfig {
            plus_charges: vec![pt(0.0, 0.3)],
            minus_charges: vec![pt(0.7, -0.2)],
            holo_currents: vec![pt(-0.4, 0.9)],
            antiholo_currents: vec![],
        };
        let lam = 1.9;
        let scaled = CorrespondenceConfig {
            plus_charges: cfg.plus_charges.iter().map(|p| pt(p.x0 * lam, p.x1 * lam)).collect(),
            minus_charges: cfg.minus_charges.iter().map(|p| pt(p.x0 * lam, p.x1 * lam)).collect(),
            holo_currents: cfg.holo_currents.iter().map(|p| pt(p.x0 * lam, p.x1 * lam)).collect(),
            antiholo_currents: vec![],
        };
        let r1 = coleman_check_z0(&cfg, 1e-10).unwrap();
        let r2 = coleman_check_z0(&scaled, 1e-10).unwrap();
        assert!(r1.pass && r2.pass);
        let v1 = Complex64::new(r1.computed[0], r1.computed[1]);
        let v2 = Complex64::new(r2.computed[0], r2.computed[1]);
        let f1 = Complex64::new(r1.reference[0], r1.reference[1]);
        let f2 = Complex64::new(r2.reference[0], r2.reference[1]);
        let ratio = (v2 / v1) / (f2 / f1);
        assert!((ratio - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn dictionary_conjugation_symmetry() {
        // flipping all charges and swapping the two current families
        // conjugates both sides identically
        let cfg = CorrespondenceConfig {
            plus_charges: vec![pt(0.1, 0.2)],
            minus_charges: vec![pt(-0.5, 0.9)],
            holo_currents: vec![pt(0.8, -0.6)],
            antiholo_currents: vec![pt(-0.2, -0.9)],
        };
        let swapped = CorrespondenceConfig {
            plus_charges: cfg.minus_charges.clone(),
            minus_charges: cfg.plus_charges.clone(),
            holo_currents: cfg.antiholo_currents.clone(),
            antiholo_currents: cfg.holo_currents.clone(),
        };
        let a = coleman_check_z0(&cfg, 1e-10).unwrap();
        let b = coleman_check_z0(&swapped, 1e-10).unwrap();
        assert!(a.pass && b.pass);
        let va = Complex64::new(a.computed[0], a.computed[1]);
        let vb = Complex64::new(b.computed[0], b.computed[1]);
        assert!((va.conj() - vb).norm() < 1e-12 * va.norm().max(1.0), "{va} vs {vb}");
        let fa = Complex64::new(a.reference[0], a.reference[1]);
        let fb = Complex64::new(b.reference[0], b.reference[1]);
        assert!((fa.conj() - fb).norm() < 1e-12 * fa.norm().max(1.0));
    }

    #[test]
    fn one_point_integrand_asymptotics() {
        let beta = 5.0 * std::f64::consts::PI;
        let p = beta / (2.0 * std::f64::consts::PI);
        // near 0: integrand ~ r e^{gamma beta/4pi}
        let r = 1e-4;
        let g = specfun::inc_gamma0(r * r).unwrap();
        let integrand = r.powf(1.0 - p) * (-(beta / (4.0 * std::f64::consts::PI)) * g).exp();
        let model = r * (EULER_GAMMA * beta / (4.0 * std::f64::consts::PI)).exp();
        assert!((integrand / model - 1.0).abs() < 0.01, "{integrand} vs {model}");
        // near infinity: integrand ~ r^{1-beta/2pi}
        let r = 50.0;
        let g = specfun::inc_gamma0(r * r).unwrap();
        let integrand = r.powf(1.0 - p) * (-(beta / (4.0 * std::f64::consts::PI)) * g).exp();
        let model = r.powf(1.0 - p);
        assert!(((integrand - model) / model).abs() < 1e-6);
    }

    #[test]
    fn one_point_coefficient_stability() {
        let beta = 5.0 * std::f64::consts::PI;
        let v = one_point_coefficient(beta).unwrap();
        assert!(v.is_finite() && v > 0.0);
        // stable to 6 digits against a re-evaluation at loosened tolerance
        let p = beta / (2.0 * std::f64::consts::PI);
        let spec = quad::QuadratureSpec::with_tol(1e-9, 1e-8);
        let (loose, _) = quad::integrate_1d(
            |r| {
                if r <= 0.0 {
                    return 0.0;
                }
                let g = specfun::inc_gamma0(r * r).unwrap_or(0.0);
                r.powf(1.0 - p) * (-(beta / (4.0 * std::f64::consts::PI)) * g).exp()
            },
            0.0,
            f64::INFINITY,
            &spec,
        )
        .unwrap();
        assert!(((v - loose) / v).abs() < 1e-6, "{v} vs {loose}");
        // domain errors outside (4pi, 6pi)
        assert!(one_point_coefficient(4.0 * std::f64::consts::PI).is_err());
        assert!(one_point_coefficient(6.5 * std::f64::consts::PI).is_err());
    }

    #[test]
    fn log_coefficient_value() {
        let want = 2.0 * std::f64::consts::PI * (-EULER_GAMMA).exp();
        assert_eq!(log_coefficient_4pi(), want);
        assert!((log_coefficient_4pi() - 3.5277539777240913814).abs() < 1e-14);
        assert_eq!(gradient_one_point(), 0.0);
    }
}
