//! The lifted-Laplacian form of the Schrödinger equation.
//!
//! For the Bargmann metric, det g = -1 and the divergence terms of the
//! Laplace-Beltrami operator vanish, leaving the closed form
//!
//! ```text
//! Delta_g = d2/dx2 + d2/dy2 + d2/dz2 + 2 d2/(dt ds) + 2 U d2/ds2
//! ```
//!
//! (docs/derivations.md). Applied to an equivariant lift
//! Psi = exp(i m s / hbar) psi this reproduces, up to the factor
//! -2m / hbar^2 and the overall phase, the Schrödinger residual
//! (-hbar^2 / 2m) lap psi + m U psi - i hbar dpsi/dt.

use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{BargmannMetric, ExtendedPoint, Potential};

type PsiFn = Arc<dyn Fn(&Vector3<f64>, f64) -> Complex64 + Send + Sync>;

/// A test wavefunction with analytic spatial Laplacian and time derivative.
#[derive(Clone)]
pub struct AnalyticSolution {
    pub label: String,
    psi: PsiFn,
    laplacian: PsiFn,
    time_deriv: PsiFn,
}

impl AnalyticSolution {
    pub fn new(
        label: impl Into<String>,
        psi: PsiFn,
        laplacian: PsiFn,
        time_deriv: PsiFn,
    ) -> Self {
        Self {
            label: label.into(),
            psi,
            laplacian,
            time_deriv,
        }
    }

    pub fn eval(&self, r: &Vector3<f64>, t: f64) -> Complex64 {
        (self.psi)(r, t)
    }

    pub fn laplacian(&self, r: &Vector3<f64>, t: f64) -> Complex64 {
        (self.laplacian)(r, t)
    }

    pub fn time_deriv(&self, r: &Vector3<f64>, t: f64) -> Complex64 {
        (self.time_deriv)(r, t)
    }

    /// Plane wave exp(i (p.r - E t) / hbar); solves the free equation when
    /// E = |p|^2 / 2m.
    pub fn plane_wave(momentum: Vector3<f64>, energy: f64, hbar: f64) -> Self {
        let phase = move |r: &Vector3<f64>, t: f64| {
            (Complex64::i() * (momentum.dot(r) - energy * t) / hbar).exp()
        };
        Self::new(
            format!(
                "plane_wave(p=[{}, {}, {}], E={energy})",
                momentum.x, momentum.y, momentum.z
            ),
            Arc::new(phase),
            Arc::new(move |r, t| -momentum.norm_squared() / (hbar * hbar) * phase(r, t)),
            Arc::new(move |r, t| -Complex64::i() * energy / hbar * phase(r, t)),
        )
    }

    /// Harmonic oscillator ground state
    /// exp(-m omega |r|^2 / 2 hbar) exp(-i E0 t / hbar), E0 = 3 hbar omega / 2;
    /// solves the equation with U = omega^2 |r|^2 / 2.
    pub fn harmonic_ground_state(m: f64, omega: f64, hbar: f64) -> Self {
        let alpha = m * omega / (2.0 * hbar);
        let e0 = 1.5 * hbar * omega;
        let psi = move |r: &Vector3<f64>, t: f64| {
            Complex64::from((-alpha * r.norm_squared()).exp())
                * (-Complex64::i() * e0 * t / hbar).exp()
        };
        Self::new(
            format!("harmonic_ground_state(m={m}, omega={omega})"),
            Arc::new(psi),
            Arc::new(move |r, t| {
                (4.0 * alpha * alpha * r.norm_squared() - 6.0 * alpha) * psi(r, t)
            }),
            Arc::new(move |r, t| -Complex64::i() * e0 / hbar * psi(r, t)),
        )
    }

    /// Free Gaussian packet with complex width c(t) = sigma^2 + i hbar t / m:
    /// psi = c^{-3/2} exp(-|r|^2 / 2c). Solves the free equation for any
    /// sigma > 0.
    pub fn gaussian_packet(sigma: f64, m: f64, hbar: f64) -> Self {
        let width = move |t: f64| Complex64::new(sigma * sigma, hbar * t / m);
        let psi = move |r: &Vector3<f64>, t: f64| {
            let c = width(t);
            c.powf(-1.5) * (-r.norm_squared() / (2.0 * c)).exp()
        };
        Self::new(
            format!("gaussian_packet(sigma={sigma})"),
            Arc::new(psi),
            Arc::new(move |r, t| {
                let c = width(t);
                (r.norm_squared() / (c * c) - 3.0 / c) * psi(r, t)
            }),
            Arc::new(move |r, t| {
                // c' = i hbar / m
                let c = width(t);
                let cdot = Complex64::i() * hbar / m;
                cdot * (-1.5 / c + r.norm_squared() / (2.0 * c * c)) * psi(r, t)
            }),
        )
    }
}

type LiftFn = Arc<dyn Fn(&ExtendedPoint) -> Complex64 + Send + Sync>;

/// Second derivatives of a lifted wavefunction needed by the 5-D Laplacian.
#[derive(Debug, Clone, Copy)]
pub struct LiftedSecondDerivatives {
    pub spatial_laplacian: Complex64,
    pub dt_ds: Complex64,
    pub ds_ds: Complex64,
}

type LiftDerivFn = Arc<dyn Fn(&ExtendedPoint) -> LiftedSecondDerivatives + Send + Sync>;

/// An equivariant lift Psi(t, r, s) = exp(i m s / hbar) psi(r, t), optionally
/// carrying analytic second derivatives.
#[derive(Clone)]
pub struct LiftedWavefunction {
    eval: LiftFn,
    second: Option<LiftDerivFn>,
}

impl LiftedWavefunction {
    /// Lift with analytic derivatives inherited from the solution.
    pub fn lift(solution: &AnalyticSolution, m: f64, hbar: f64) -> Self {
        let sol = solution.clone();
        let prefactor = move |s: f64| (Complex64::i() * m * s / hbar).exp();
        let eval: LiftFn = {
            let sol = sol.clone();
            Arc::new(move |p: &ExtendedPoint| prefactor(p.s) * sol.eval(&p.r, p.t))
        };
        let second: LiftDerivFn = Arc::new(move |p: &ExtendedPoint| {
            let phase = prefactor(p.s);
            let im_over_h = Complex64::i() * m / hbar;
            LiftedSecondDerivatives {
                spatial_laplacian: phase * sol.laplacian(&p.r, p.t),
                dt_ds: im_over_h * phase * sol.time_deriv(&p.r, p.t),
                ds_ds: im_over_h * im_over_h * phase * sol.eval(&p.r, p.t),
            }
        });
        Self {
            eval,
            second: Some(second),
        }
    }

    /// Lift evaluated by closure only; the Laplacian falls back to central
    /// finite differences.
    pub fn from_eval<F>(f: F) -> Self
    where
        F: Fn(&ExtendedPoint) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            second: None,
        }
    }

    pub fn eval(&self, p: &ExtendedPoint) -> Complex64 {
        (self.eval)(p)
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.second.is_some()
    }
}

/// Evaluates Delta_g Psi = lap_spatial Psi + 2 dt ds Psi + 2 U ds^2 Psi,
/// using analytic second derivatives when the lift carries them and central
/// finite differences of `fd_step` otherwise.
pub fn laplacian_5d(
    metric: &BargmannMetric,
    psi: &LiftedWavefunction,
    p: &ExtendedPoint,
    fd_step: f64,
) -> Result<Complex64> {
    let u = metric.potential().value(&p.r, p.t);
    if !u.is_finite() {
        return Err(crate::error::Error::Evaluation(format!(
            "potential non-finite at r={:?}, t={}",
            p.r, p.t
        )));
    }

    if let Some(second) = &psi.second {
        let d = second(p);
        return Ok(d.spatial_laplacian + 2.0 * d.dt_ds + 2.0 * u * d.ds_ds);
    }

    if !(fd_step > 0.0) {
        return Err(crate::error::Error::Evaluation(format!(
            "fd_step must be positive, got {fd_step}"
        )));
    }
    let h = fd_step;
    let at = |dc: [f64; 5]| {
        let mut c = p.coords();
        for (i, d) in dc.iter().enumerate() {
            c[i] += d;
        }
        psi.eval(&ExtendedPoint::from_coords(&c))
    };
    let center = psi.eval(p);
    let mut lap = Complex64::default();
    for i in 0..3 {
        let mut up = [0.0; 5];
        let mut dn = [0.0; 5];
        up[i] = h;
        dn[i] = -h;
        lap += (at(up) - 2.0 * center + at(dn)) / (h * h);
    }
    // mixed dt ds by the 4-point cross stencil
    let dt_ds = (at([0.0, 0.0, 0.0, h, h]) - at([0.0, 0.0, 0.0, h, -h])
        - at([0.0, 0.0, 0.0, -h, h])
        + at([0.0, 0.0, 0.0, -h, -h]))
        / (4.0 * h * h);
    let ds_ds =
        (at([0.0, 0.0, 0.0, 0.0, h]) - 2.0 * center + at([0.0, 0.0, 0.0, 0.0, -h])) / (h * h);

    Ok(lap + 2.0 * dt_ds + 2.0 * u * ds_ds)
}

/// The Schrödinger residual (-hbar^2 / 2m) lap psi + m U psi - i hbar dpsi/dt
/// at (r, t), from the solution's analytic derivatives.
pub fn schrodinger_residual(
    psi: &AnalyticSolution,
    potential: &Potential,
    m: f64,
    hbar: f64,
    r: &Vector3<f64>,
    t: f64,
) -> Complex64 {
    let u = potential.value(r, t);
    (-hbar * hbar / (2.0 * m)) * psi.laplacian(r, t) + m * u * psi.eval(r, t)
        - Complex64::i() * hbar * psi.time_deriv(r, t)
}

/// Compares |Delta_g of the lift| against (2m / hbar^2) |Schrödinger
/// residual|: both must vanish together. Returns the larger of the two
/// magnitudes when either exceeds 1e-10, else their difference.
pub fn lift_equivalence_check(
    metric: &BargmannMetric,
    psi: &AnalyticSolution,
    potential: &Potential,
    p: &ExtendedPoint,
    fd_step: f64,
) -> Result<f64> {
    let m = metric.mass();
    let hbar = metric.hbar();
    let lifted = LiftedWavefunction::lift(psi, m, hbar);
    let lap = laplacian_5d(metric, &lifted, p, fd_step)?.norm();
    let residual =
        (2.0 * m / (hbar * hbar)) * schrodinger_residual(psi, potential, m, hbar, &p.r, p.t).norm();
    const TOL: f64 = 1e-10;
    if lap > TOL || residual > TOL {
        Ok(lap.max(residual))
    } else {
        Ok((lap - residual).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut impl Rng) -> ExtendedPoint {
        ExtendedPoint::new(
            rng.gen_range(-1.0..1.0),
            Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ),
            rng.gen_range(-1.0..1.0),
        )
    }

    #[test]
    fn laplacian_of_constant_vanishes() {
        let metric = BargmannMetric::new(Potential::Free);
        let psi = LiftedWavefunction::from_eval(|_| Complex64::new(2.5, -1.0));
        let p = ExtendedPoint::new(0.3, Vector3::new(0.1, 0.2, 0.3), 0.4);
        let v = laplacian_5d(&metric, &psi, &p, 1e-3).unwrap();
        assert!(v.norm() < 1e-9);
    }

    #[test]
    fn laplacian_operator_examples() {
        // Psi = t s, U = 0: only the 2 dt ds term contributes
        let metric = BargmannMetric::new(Potential::Free);
        let psi = LiftedWavefunction::from_eval(|p: &ExtendedPoint| {
            Complex64::from(p.t * p.s)
        });
        let p = ExtendedPoint::new(0.7, Vector3::new(0.4, -0.2, 0.9), 0.3);
        let v = laplacian_5d(&metric, &psi, &p, 1e-3).unwrap();
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-10);

        // Psi = |r|^2: spatial Laplacian gives 6 for any potential
        for metric in [
            BargmannMetric::new(Potential::Free),
            BargmannMetric::new(Potential::Harmonic { omega: 1.4 }),
        ] {
            let psi = LiftedWavefunction::from_eval(|p: &ExtendedPoint| {
                Complex64::from(p.r.norm_squared())
            });
            let v = laplacian_5d(&metric, &psi, &p, 1e-3).unwrap();
            assert_abs_diff_eq!(v.re, 6.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn plane_wave_dispersion_relation() {
        let (m, hbar) = (1.3, 0.8);
        let momentum = Vector3::new(0.7, -0.4, 0.2);
        let energy = momentum.norm_squared() / (2.0 * m);
        let psi = AnalyticSolution::plane_wave(momentum, energy, hbar);
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let r = schrodinger_residual(&psi, &Potential::Free, m, hbar, &p.r, p.t);
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn detuned_plane_wave_residual_is_linear_in_energy() {
        let (m, hbar) = (1.0, 1.0);
        let momentum = Vector3::new(0.5, 0.1, -0.3);
        let energy = momentum.norm_squared() / (2.0 * m);
        let psi = AnalyticSolution::plane_wave(momentum, energy + 1.0, hbar);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            // residual = -(E' - E) psi, and |psi| = 1 for a plane wave
            let r = schrodinger_residual(&psi, &Potential::Free, m, hbar, &p.r, p.t);
            assert_abs_diff_eq!(r.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn harmonic_ground_state_solves_its_equation() {
        let (m, omega, hbar) = (1.0, 1.0, 1.0);
        let psi = AnalyticSolution::harmonic_ground_state(m, omega, hbar);
        let pot = Potential::Harmonic { omega };
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let r = schrodinger_residual(&psi, &pot, m, hbar, &p.r, p.t);
            assert!(r.norm() < 1e-12, "residual {}", r.norm());
        }
    }

    #[test]
    fn gaussian_packet_solves_the_free_equation() {
        let (m, hbar) = (1.2, 0.9);
        let psi = AnalyticSolution::gaussian_packet(0.8, m, hbar);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let r = schrodinger_residual(&psi, &Potential::Free, m, hbar, &p.r, p.t);
            assert!(r.norm() < 1e-12, "residual {}", r.norm());
        }
    }

    #[test]
    fn lifted_solutions_are_annihilated_analytically() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let cases: Vec<(BargmannMetric, AnalyticSolution)> = vec![
            (
                BargmannMetric::new(Potential::Free),
                AnalyticSolution::plane_wave(Vector3::new(0.6, -0.1, 0.4), 0.265, 1.0),
            ),
            (
                BargmannMetric::new(Potential::Harmonic { omega: 1.0 }),
                AnalyticSolution::harmonic_ground_state(1.0, 1.0, 1.0),
            ),
            (
                BargmannMetric::new(Potential::Free),
                AnalyticSolution::gaussian_packet(1.0, 1.0, 1.0),
            ),
        ];
        for (metric, sol) in &cases {
            let lifted = LiftedWavefunction::lift(sol, metric.mass(), metric.hbar());
            assert!(lifted.has_analytic_derivatives());
            for _ in 0..200 {
                let p = random_point(&mut rng);
                let v = laplacian_5d(metric, &lifted, &p, 1e-3).unwrap();
                assert!(v.norm() < 1e-10, "{}: {}", sol.label, v.norm());
            }
        }
    }

    #[test]
    fn lift_is_equivariant_and_laplacian_s_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let (m, hbar) = (1.4, 0.7);
        let sol = AnalyticSolution::plane_wave(Vector3::new(0.3, 0.2, -0.5), 0.9, hbar);
        let lifted = LiftedWavefunction::lift(&sol, m, hbar);
        let metric = BargmannMetric::with_units(Potential::Free, m, hbar).unwrap();
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let a = rng.gen_range(-2.0..2.0);
            let shifted = ExtendedPoint::new(p.t, p.r, p.s + a);
            let expected = (Complex64::i() * m * a / hbar).exp() * lifted.eval(&p);
            assert!((lifted.eval(&shifted) - expected).norm() < 1e-12);

            let l0 = laplacian_5d(&metric, &lifted, &p, 1e-3).unwrap().norm();
            let l1 = laplacian_5d(&metric, &lifted, &shifted, 1e-3).unwrap().norm();
            assert!((l0 - l1).abs() < 1e-10);
        }
    }

    #[test]
    fn finite_differences_converge_at_second_order() {
        // detuned plane wave: Delta_g of the lift is nonzero and the FD
        // evaluation approaches the analytic value at O(h^2)
        let (m, hbar) = (1.0, 1.0);
        let momentum = Vector3::new(0.4, 0.3, -0.2);
        let energy = momentum.norm_squared() / (2.0 * m) + 0.5;
        let sol = AnalyticSolution::plane_wave(momentum, energy, hbar);
        let metric = BargmannMetric::new(Potential::Free);

        let analytic_lift = LiftedWavefunction::lift(&sol, m, hbar);
        let fd_lift = {
            let sol = sol.clone();
            LiftedWavefunction::from_eval(move |p: &ExtendedPoint| {
                (Complex64::i() * m * p.s / hbar).exp() * sol.eval(&p.r, p.t)
            })
        };

        let p = ExtendedPoint::new(0.3, Vector3::new(0.2, -0.6, 0.1), 0.4);
        let exact = laplacian_5d(&metric, &analytic_lift, &p, 1e-3).unwrap();
        let err = |h: f64| (laplacian_5d(&metric, &fd_lift, &p, h).unwrap() - exact).norm();
        let (e1, e2) = (err(1e-2), err(5e-3));
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn residual_ratio_identity() {
        // Delta_g(lift) and the Schrödinger residual differ by the constant
        // factor 2m / hbar^2 in magnitude, also off shell
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let (m, hbar) = (1.7, 0.6);
        let metric = BargmannMetric::with_units(Potential::Free, m, hbar).unwrap();
        let momentum = Vector3::new(0.8, -0.2, 0.1);
        let energy = momentum.norm_squared() / (2.0 * m) + 1.0;
        let sol = AnalyticSolution::plane_wave(momentum, energy, hbar);
        let lifted = LiftedWavefunction::lift(&sol, m, hbar);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let lap = laplacian_5d(&metric, &lifted, &p, 1e-3).unwrap().norm();
            let res = schrodinger_residual(&sol, &Potential::Free, m, hbar, &p.r, p.t).norm();
            let ratio = lap / res;
            assert_abs_diff_eq!(ratio, 2.0 * m / (hbar * hbar), epsilon = 1e-6);
        }
    }

    #[test]
    fn lift_equivalence_check_examples() {
        let metric = BargmannMetric::new(Potential::Free);
        let momentum = Vector3::new(0.5, 0.5, 0.0);
        let on_shell = AnalyticSolution::plane_wave(momentum, 0.25, 1.0);
        let p = ExtendedPoint::new(0.4, Vector3::new(0.3, -0.1, 0.8), 0.2);
        assert!(
            lift_equivalence_check(&metric, &on_shell, &Potential::Free, &p, 1e-3).unwrap()
                < 1e-10
        );

        let harm = BargmannMetric::new(Potential::Harmonic { omega: 1.0 });
        let ground = AnalyticSolution::harmonic_ground_state(1.0, 1.0, 1.0);
        assert!(
            lift_equivalence_check(&harm, &ground, &Potential::Harmonic { omega: 1.0 }, &p, 1e-3)
                .unwrap()
                < 1e-10
        );

        let detuned = AnalyticSolution::plane_wave(momentum, 1.25, 1.0);
        assert!(
            lift_equivalence_check(&metric, &detuned, &Potential::Free, &p, 1e-3).unwrap() > 0.1
        );
    }
}
