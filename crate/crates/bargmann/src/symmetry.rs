//! The 13-parameter Schrödinger algebra of the free Bargmann metric:
//! generator fields, conformal Killing residuals, and Noether charges.
//!
//! A parameter set (omega, beta, gamma, epsilon, eta, delta, kappa) yields
//! the vector field Y = (X^i, X^t, Y^s) with
//!
//! ```text
//! X^i = (omega x r)^i + (delta/2 + kappa t) r^i + beta^i t + gamma^i
//! X^t = kappa t^2 + delta t + epsilon
//! Y^s = -(kappa |r|^2 / 2 + beta.r + eta)
//! ```
//!
//! The 11 parameters excluding (delta, kappa) generate isometries; delta and
//! kappa generate dilatations and expansions with conformal factor
//! lambda = delta + 2 kappa t.

use std::sync::Arc;

use nalgebra::{Matrix5, Vector3, Vector5};

use crate::dynamics::Trajectory;
use crate::error::Result;
use crate::geometry::{BargmannMetric, ExtendedPoint, TangentVector, IDX_S, IDX_T};

/// The 13 parameters of the extended Schrödinger algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SchrodingerParams {
    /// Rotation (3).
    pub omega: Vector3<f64>,
    /// Galilei boost (3).
    pub beta: Vector3<f64>,
    /// Space translation (3).
    pub gamma: Vector3<f64>,
    /// Time translation.
    pub epsilon: f64,
    /// Vertical translation.
    pub eta: f64,
    /// Dilatation.
    pub delta: f64,
    /// Expansion.
    pub kappa: f64,
}

impl SchrodingerParams {
    /// The 13 unit generators with their conventional names.
    pub fn unit_generators() -> Vec<(&'static str, SchrodingerParams)> {
        let mut out = Vec::with_capacity(13);
        for (i, axis) in ["x", "y", "z"].iter().enumerate() {
            let mut v = Vector3::zeros();
            v[i] = 1.0;
            out.push((
                match *axis {
                    "x" => "rotation_x",
                    "y" => "rotation_y",
                    _ => "rotation_z",
                },
                SchrodingerParams {
                    omega: v,
                    ..Default::default()
                },
            ));
        }
        for (i, name) in ["boost_x", "boost_y", "boost_z"].iter().enumerate() {
            let mut v = Vector3::zeros();
            v[i] = 1.0;
            out.push((
                *name,
                SchrodingerParams {
                    beta: v,
                    ..Default::default()
                },
            ));
        }
        for (i, name) in ["translation_x", "translation_y", "translation_z"]
            .iter()
            .enumerate()
        {
            let mut v = Vector3::zeros();
            v[i] = 1.0;
            out.push((
                *name,
                SchrodingerParams {
                    gamma: v,
                    ..Default::default()
                },
            ));
        }
        out.push((
            "time_translation",
            SchrodingerParams {
                epsilon: 1.0,
                ..Default::default()
            },
        ));
        out.push((
            "vertical_translation",
            SchrodingerParams {
                eta: 1.0,
                ..Default::default()
            },
        ));
        out.push((
            "dilatation",
            SchrodingerParams {
                delta: 1.0,
                ..Default::default()
            },
        ));
        out.push((
            "expansion",
            SchrodingerParams {
                kappa: 1.0,
                ..Default::default()
            },
        ));
        out
    }
}

type FieldFn = Arc<dyn Fn(&ExtendedPoint) -> Vector5<f64> + Send + Sync>;
type JacobianFn = Arc<dyn Fn(&ExtendedPoint) -> Matrix5<f64> + Send + Sync>;

/// A vector field on the extended manifold with its jacobian. Components
/// are ordered (x, y, z, t, s); `jacobian[(a, c)] = d Y^a / d x^c`.
#[derive(Clone)]
pub struct ConformalVectorField {
    eval: FieldFn,
    jacobian: JacobianFn,
}

impl ConformalVectorField {
    pub fn new(eval: FieldFn, jacobian: JacobianFn) -> Self {
        Self { eval, jacobian }
    }

    /// Field with a finite-difference jacobian (central, step 1e-5).
    pub fn from_eval<F>(eval: F) -> Self
    where
        F: Fn(&ExtendedPoint) -> Vector5<f64> + Send + Sync + 'static,
    {
        let eval: FieldFn = Arc::new(eval);
        let eval2 = eval.clone();
        let jac: JacobianFn = Arc::new(move |p: &ExtendedPoint| {
            let h = 1e-5;
            let mut j = Matrix5::zeros();
            for c in 0..5 {
                let mut up = p.coords();
                let mut dn = p.coords();
                up[c] += h;
                dn[c] -= h;
                let d = (eval2(&ExtendedPoint::from_coords(&up))
                    - eval2(&ExtendedPoint::from_coords(&dn)))
                    / (2.0 * h);
                j.set_column(c, &d);
            }
            j
        });
        Self { eval, jacobian: jac }
    }

    pub fn eval(&self, p: &ExtendedPoint) -> Vector5<f64> {
        (self.eval)(p)
    }

    pub fn jacobian(&self, p: &ExtendedPoint) -> Matrix5<f64> {
        (self.jacobian)(p)
    }

    /// The covariantly constant vertical Killing field xi = d/ds.
    pub fn xi() -> Self {
        Self::new(
            Arc::new(|_| Vector5::new(0.0, 0.0, 0.0, 0.0, 1.0)),
            Arc::new(|_| Matrix5::zeros()),
        )
    }
}

/// The conserved charges named by the free-particle table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeTable {
    pub angular_momentum: Vector3<f64>,
    pub center_of_mass: Vector3<f64>,
    pub momentum: Vector3<f64>,
    pub energy: f64,
    pub mass: f64,
    pub dilatation: f64,
    pub expansion: f64,
}

impl ChargeTable {
    /// Charge names in emission order, matching `values`.
    pub const NAMES: [&'static str; 13] = [
        "L_x", "L_y", "L_z", "g_x", "g_y", "g_z", "p_x", "p_y", "p_z", "E", "m", "D", "K",
    ];

    pub fn values(&self) -> [f64; 13] {
        [
            self.angular_momentum.x,
            self.angular_momentum.y,
            self.angular_momentum.z,
            self.center_of_mass.x,
            self.center_of_mass.y,
            self.center_of_mass.z,
            self.momentum.x,
            self.momentum.y,
            self.momentum.z,
            self.energy,
            self.mass,
            self.dilatation,
            self.expansion,
        ]
    }
}

/// Builds the Schrödinger generator for a parameter set, with its analytic
/// jacobian.
pub fn schrodinger_generator(params: SchrodingerParams) -> ConformalVectorField {
    let p0 = params;
    let eval: FieldFn = Arc::new(move |p: &ExtendedPoint| {
        let scale = 0.5 * p0.delta + p0.kappa * p.t;
        let x = p0.omega.cross(&p.r) + scale * p.r + p0.beta * p.t + p0.gamma;
        let xt = p0.kappa * p.t * p.t + p0.delta * p.t + p0.epsilon;
        let ys = -(0.5 * p0.kappa * p.r.norm_squared() + p0.beta.dot(&p.r) + p0.eta);
        Vector5::new(x.x, x.y, x.z, xt, ys)
    });
    let jacobian: JacobianFn = Arc::new(move |p: &ExtendedPoint| {
        let mut j = Matrix5::zeros();
        let scale = 0.5 * p0.delta + p0.kappa * p.t;
        for c in 0..3 {
            let mut e = Vector3::zeros();
            e[c] = 1.0;
            let col = p0.omega.cross(&e) + scale * e;
            for a in 0..3 {
                j[(a, c)] = col[a];
            }
            // d Y^s / d r^c
            j[(IDX_S, c)] = -(p0.kappa * p.r[c] + p0.beta[c]);
        }
        // d X^i / dt
        for a in 0..3 {
            j[(a, IDX_T)] = p0.kappa * p.r[a] + p0.beta[a];
        }
        // d X^t / dt
        j[(IDX_T, IDX_T)] = 2.0 * p0.kappa * p.t + p0.delta;
        j
    });
    ConformalVectorField::new(eval, jacobian)
}

/// (L_Y g)_ab = Y^c d_c g_ab + g_cb d_a Y^c + g_ac d_b Y^c, with the metric
/// derivative taken from the potential's analytic derivatives.
pub fn lie_derivative_metric(
    metric: &BargmannMetric,
    field: &ConformalVectorField,
    p: &ExtendedPoint,
) -> Result<Matrix5<f64>> {
    let g = metric.components(p)?;
    let y = field.eval(p);
    let j = field.jacobian(p);

    // d_c g_ab is nonzero only for (a, b) = (t, t): d_c g_tt = -2 d_c U
    let grad_u = metric.potential().grad(&p.r, p.t);
    let dt_u = metric.potential().time_deriv(&p.r, p.t);
    let mut dg_tt = Vector5::zeros();
    for i in 0..3 {
        dg_tt[i] = -2.0 * grad_u[i];
    }
    dg_tt[IDX_T] = -2.0 * dt_u;

    let mut lie = Matrix5::zeros();
    lie[(IDX_T, IDX_T)] = y.dot(&dg_tt);
    for a in 0..5 {
        for b in 0..5 {
            let mut v = lie[(a, b)];
            for c in 0..5 {
                v += g[(c, b)] * j[(c, a)] + g[(a, c)] * j[(c, b)];
            }
            lie[(a, b)] = v;
        }
    }
    Ok(lie)
}

/// Finite-difference fallback for the Lie derivative: both the metric
/// derivative and the field jacobian by central differences of `step`.
pub fn lie_derivative_metric_fd(
    metric: &BargmannMetric,
    field: &ConformalVectorField,
    p: &ExtendedPoint,
    step: f64,
) -> Result<Matrix5<f64>> {
    let y = field.eval(p);

    let mut dg = [Matrix5::zeros(); 5];
    let mut j = Matrix5::zeros();
    for c in 0..5 {
        let mut up = p.coords();
        let mut dn = p.coords();
        up[c] += step;
        dn[c] -= step;
        let pu = ExtendedPoint::from_coords(&up);
        let pd = ExtendedPoint::from_coords(&dn);
        dg[c] = (metric.components(&pu)? - metric.components(&pd)?) / (2.0 * step);
        j.set_column(c, &((field.eval(&pu) - field.eval(&pd)) / (2.0 * step)));
    }

    let g = metric.components(p)?;
    let mut lie = Matrix5::zeros();
    for a in 0..5 {
        for b in 0..5 {
            let mut v = 0.0;
            for c in 0..5 {
                v += y[c] * dg[c][(a, b)] + g[(c, b)] * j[(c, a)] + g[(a, c)] * j[(c, b)];
            }
            lie[(a, b)] = v;
        }
    }
    Ok(lie)
}

/// Extracts the conformal factor by trace, lambda = tr(g^-1 L_Y g) / 5, and
/// returns (lambda, max-abs entry of L_Y g - lambda g).
pub fn conformal_residual(
    metric: &BargmannMetric,
    field: &ConformalVectorField,
    p: &ExtendedPoint,
) -> Result<(f64, f64)> {
    let lie = lie_derivative_metric(metric, field, p)?;
    let gi = metric.inverse_components(p)?;
    let lambda = (gi * lie).trace() / 5.0;
    let g = metric.components(p)?;
    let defect = (lie - lambda * g).abs().max();
    Ok((lambda, defect))
}

/// Numerical d/ds of the field components at `p`: max-abs difference of the
/// field at p and at p shifted by `step` in s, divided by step. Vanishes for
/// any field commuting with xi.
pub fn vertical_commutation_check(
    field: &ConformalVectorField,
    p: &ExtendedPoint,
    step: f64,
) -> f64 {
    let shifted = ExtendedPoint::new(p.t, p.r, p.s + step);
    ((field.eval(&shifted) - field.eval(p)) / step).abs().max()
}

/// The Noether charge C = m (dr . X) - E X^t + m Y^s at (p, v) with
/// v.dt = 1, where E = m |dr|^2 / 2 + m U.
pub fn noether_charge(
    metric: &BargmannMetric,
    field: &ConformalVectorField,
    p: &ExtendedPoint,
    v: &TangentVector,
) -> f64 {
    debug_assert!((v.dt - 1.0).abs() < 1e-12, "noether_charge expects v.dt = 1");
    let m = metric.mass();
    let y = field.eval(p);
    let x = Vector3::new(y[0], y[1], y[2]);
    let u = metric.potential().value(&p.r, p.t);
    let energy = 0.5 * m * v.dr.norm_squared() + m * u;
    m * v.dr.dot(&x) - energy * y[IDX_T] + m * y[IDX_S]
}

/// The free-particle charge table evaluated from instantaneous data.
pub fn standard_charges(p: &ExtendedPoint, v: &TangentVector, m: f64, u_value: f64) -> ChargeTable {
    let momentum = m * v.dr;
    let energy = 0.5 * m * v.dr.norm_squared() + m * u_value;
    let dilatation = 0.5 * momentum.dot(&p.r) - p.t * energy;
    ChargeTable {
        angular_momentum: p.r.cross(&momentum),
        center_of_mass: m * p.r - momentum * p.t,
        momentum,
        energy,
        mass: m,
        dilatation,
        expansion: p.t * p.t * energy + 2.0 * p.t * dilatation - 0.5 * m * p.r.norm_squared(),
    }
}

/// Max-minus-min of the Noether charge over the trajectory samples.
pub fn charge_drift(traj: &Trajectory, field: &ConformalVectorField, m: f64) -> f64 {
    debug_assert!(m > 0.0);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for smp in &traj.samples {
        let c = noether_charge(&traj.metric, field, &smp.point, &smp.velocity);
        lo = lo.min(c);
        hi = hi.max(c);
    }
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate_null_geodesic;
    use crate::geometry::Potential;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut impl Rng) -> ExtendedPoint {
        ExtendedPoint::new(
            rng.gen_range(-2.0..2.0),
            Vector3::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ),
            rng.gen_range(-2.0..2.0),
        )
    }

    #[test]
    fn generator_evaluation_examples() {
        let zero = schrodinger_generator(SchrodingerParams::default());
        let p = ExtendedPoint::new(1.3, Vector3::new(0.4, -0.8, 0.1), 0.2);
        assert_eq!(zero.eval(&p), Vector5::zeros());

        let kappa = schrodinger_generator(SchrodingerParams {
            kappa: 1.0,
            ..Default::default()
        });
        let p = ExtendedPoint::new(2.0, Vector3::new(1.0, 0.0, 0.0), 0.0);
        let y = kappa.eval(&p);
        assert_abs_diff_eq!(y, Vector5::new(2.0, 0.0, 0.0, 4.0, -0.5), epsilon = 1e-15);

        let delta = schrodinger_generator(SchrodingerParams {
            delta: 1.0,
            ..Default::default()
        });
        let p = ExtendedPoint::new(3.0, Vector3::new(2.0, 0.0, 0.0), 0.0);
        let y = delta.eval(&p);
        assert_abs_diff_eq!(y, Vector5::new(1.0, 0.0, 0.0, 3.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn generator_map_is_linear_in_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let p1 = SchrodingerParams {
            omega: Vector3::new(0.3, -0.1, 0.7),
            beta: Vector3::new(0.2, 0.4, -0.6),
            gamma: Vector3::new(1.0, 0.0, -0.5),
            epsilon: 0.8,
            eta: -0.3,
            delta: 0.5,
            kappa: -0.9,
        };
        let p2 = SchrodingerParams {
            omega: Vector3::new(-0.5, 0.2, 0.1),
            beta: Vector3::new(0.9, -0.3, 0.0),
            gamma: Vector3::new(0.0, 0.7, 0.2),
            epsilon: -0.4,
            eta: 0.6,
            delta: -0.2,
            kappa: 0.3,
        };
        let a = 1.7;
        let sum = SchrodingerParams {
            omega: a * p1.omega + p2.omega,
            beta: a * p1.beta + p2.beta,
            gamma: a * p1.gamma + p2.gamma,
            epsilon: a * p1.epsilon + p2.epsilon,
            eta: a * p1.eta + p2.eta,
            delta: a * p1.delta + p2.delta,
            kappa: a * p1.kappa + p2.kappa,
        };
        let (g1, g2, gs) = (
            schrodinger_generator(p1),
            schrodinger_generator(p2),
            schrodinger_generator(sum),
        );
        for _ in 0..200 {
            let p = random_point(&mut rng);
            assert_abs_diff_eq!(
                gs.eval(&p),
                a * g1.eval(&p) + g2.eval(&p),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let params = SchrodingerParams {
            omega: Vector3::new(0.4, -0.7, 0.2),
            beta: Vector3::new(-0.1, 0.3, 0.8),
            gamma: Vector3::new(0.5, 0.5, -0.2),
            epsilon: 0.9,
            eta: 0.1,
            delta: -0.6,
            kappa: 0.7,
        };
        let field = schrodinger_generator(params);
        let fd = ConformalVectorField::from_eval({
            let field = field.clone();
            move |p: &ExtendedPoint| field.eval(p)
        });
        for _ in 0..100 {
            let p = random_point(&mut rng);
            assert_abs_diff_eq!(field.jacobian(&p), fd.jacobian(&p), epsilon = 1e-8);
        }
    }

    #[test]
    fn lie_derivative_free_metric_cases() {
        let free = BargmannMetric::new(Potential::Free);
        let p = ExtendedPoint::new(3.0, Vector3::new(0.7, -0.2, 1.1), 0.4);

        // constant translation field on the constant metric
        let trans = schrodinger_generator(SchrodingerParams {
            gamma: Vector3::new(1.0, -2.0, 0.3),
            ..Default::default()
        });
        let lie = lie_derivative_metric(&free, &trans, &p).unwrap();
        assert_abs_diff_eq!(lie, Matrix5::zeros(), epsilon = 1e-15);

        // dilatation: L_Y g = g
        let dil = schrodinger_generator(SchrodingerParams {
            delta: 1.0,
            ..Default::default()
        });
        let lie = lie_derivative_metric(&free, &dil, &p).unwrap();
        let g = free.components(&p).unwrap();
        assert_abs_diff_eq!(lie, g, epsilon = 1e-14);

        // expansion at t = 3: L_Y g = 6 g
        let exp = schrodinger_generator(SchrodingerParams {
            kappa: 1.0,
            ..Default::default()
        });
        let lie = lie_derivative_metric(&free, &exp, &p).unwrap();
        assert_abs_diff_eq!(lie, 6.0 * g, epsilon = 1e-13);
    }

    #[test]
    fn analytic_and_fd_lie_derivatives_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let metrics = [
            BargmannMetric::new(Potential::Free),
            BargmannMetric::new(Potential::Harmonic { omega: 1.2 }),
            BargmannMetric::new(Potential::Uniform {
                g: Vector3::new(0.3, 0.0, -0.9),
            }),
        ];
        let field = schrodinger_generator(SchrodingerParams {
            omega: Vector3::new(0.2, 0.1, -0.4),
            beta: Vector3::new(0.6, -0.2, 0.0),
            gamma: Vector3::new(-0.3, 0.8, 0.5),
            epsilon: 0.4,
            eta: -0.7,
            delta: 0.9,
            kappa: -0.5,
        });
        for metric in &metrics {
            for _ in 0..50 {
                let p = random_point(&mut rng);
                let a = lie_derivative_metric(metric, &field, &p).unwrap();
                let b = lie_derivative_metric_fd(metric, &field, &p, 1e-5).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn isometries_and_conformal_factors_on_the_free_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let free = BargmannMetric::new(Potential::Free);
        for (name, params) in SchrodingerParams::unit_generators() {
            let field = schrodinger_generator(params);
            for _ in 0..1000 {
                let p = random_point(&mut rng);
                let (lambda, residual) = conformal_residual(&free, &field, &p).unwrap();
                let expected = params.delta + 2.0 * params.kappa * p.t;
                assert!(
                    (lambda - expected).abs() < 1e-9,
                    "{name}: lambda {lambda} vs {expected}"
                );
                assert!(residual < 1e-9, "{name}: residual {residual}");
                assert!(vertical_commutation_check(&field, &p, 1e-3) < 1e-12);
            }
        }
    }

    #[test]
    fn expansion_fails_on_the_harmonic_metric() {
        // negative control: Eq-11 is the free-particle algebra
        let harm = BargmannMetric::new(Potential::Harmonic { omega: 1.0 });
        let exp = schrodinger_generator(SchrodingerParams {
            kappa: 1.0,
            ..Default::default()
        });
        let p = ExtendedPoint::new(1.0, Vector3::new(1.0, 0.0, 0.0), 0.0);
        let (_, residual) = conformal_residual(&harm, &exp, &p).unwrap();
        assert!(residual > 0.1, "residual {residual}");
    }

    #[test]
    fn vertical_commutation_detects_s_dependence() {
        let bad = ConformalVectorField::from_eval(|p: &ExtendedPoint| {
            Vector5::new(0.0, 0.0, 0.0, 0.0, p.s)
        });
        let p = ExtendedPoint::new(0.5, Vector3::new(1.0, 2.0, 3.0), 0.7);
        assert_abs_diff_eq!(vertical_commutation_check(&bad, &p, 1e-3), 1.0, epsilon = 1e-9);

        let zero = ConformalVectorField::from_eval(|_| Vector5::zeros());
        assert_eq!(vertical_commutation_check(&zero, &p, 1e-3), 0.0);
    }

    #[test]
    fn noether_charge_examples() {
        let free = BargmannMetric::new(Potential::Free);
        let p = ExtendedPoint::new(0.7, Vector3::new(0.4, -0.2, 1.0), 0.1);

        // xi charge is the mass
        let v = TangentVector::new(1.0, Vector3::new(0.3, 0.9, -0.5), 0.0);
        assert_eq!(noether_charge(&free, &ConformalVectorField::xi(), &p, &v), 1.0);

        // translation charge is the momentum component
        let tx = schrodinger_generator(SchrodingerParams {
            gamma: Vector3::x(),
            ..Default::default()
        });
        let v = TangentVector::new(1.0, Vector3::new(0.0, 1.0, 0.0), -0.5);
        assert_eq!(noether_charge(&free, &tx, &p, &v), 0.0);
        let v = TangentVector::new(1.0, Vector3::new(1.0, 0.0, 0.0), -0.5);
        assert_eq!(noether_charge(&free, &tx, &p, &v), 1.0);

        // expansion charge along r(t) = (1, t, 0) is -1/2 at every t
        let kappa = schrodinger_generator(SchrodingerParams {
            kappa: 1.0,
            ..Default::default()
        });
        for t in [0.0, 0.5, 1.0, 2.0, 3.7] {
            let p = ExtendedPoint::new(t, Vector3::new(1.0, t, 0.0), -0.5 * t);
            let v = TangentVector::new(1.0, Vector3::new(0.0, 1.0, 0.0), -0.5);
            assert_abs_diff_eq!(noether_charge(&free, &kappa, &p, &v), -0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn standard_charge_table_on_the_analytic_free_trajectory() {
        // r(t) = (1, t, 0), m = 1
        for t in [0.0, 0.3, 1.0, 2.5] {
            let p = ExtendedPoint::new(t, Vector3::new(1.0, t, 0.0), 0.0);
            let v = TangentVector::new(1.0, Vector3::new(0.0, 1.0, 0.0), -0.5);
            let table = standard_charges(&p, &v, 1.0, 0.0);
            assert_eq!(table.angular_momentum, Vector3::new(0.0, 0.0, 1.0));
            assert_eq!(table.center_of_mass, Vector3::new(1.0, 0.0, 0.0));
            assert_eq!(table.momentum, Vector3::new(0.0, 1.0, 0.0));
            assert_eq!(table.energy, 0.5);
            assert_eq!(table.mass, 1.0);
            assert_eq!(table.dilatation, 0.0);
            assert_eq!(table.expansion, -0.5);
        }

        // at rest at the origin: only the mass survives
        let p = ExtendedPoint::new(0.8, Vector3::zeros(), 0.0);
        let v = TangentVector::new(1.0, Vector3::zeros(), 0.0);
        let table = standard_charges(&p, &v, 2.0, 0.0);
        assert_eq!(table.mass, 2.0);
        assert_eq!(table.energy, 0.0);
        assert_eq!(table.angular_momentum, Vector3::zeros());
        assert_eq!(table.momentum, Vector3::zeros());
        assert_eq!(table.dilatation, 0.0);
        assert_eq!(table.expansion, 0.0);
    }

    #[test]
    fn angular_momentum_rotates_as_a_vector() {
        let rot = nalgebra::Rotation3::from_axis_angle(&Vector3::z_axis(), std::f64::consts::FRAC_PI_2)
            .into_inner();
        let r = Vector3::new(1.0, 0.2, -0.4);
        let vr = Vector3::new(0.3, 0.7, 0.1);
        let p = ExtendedPoint::new(0.0, r, 0.0);
        let v = TangentVector::new(1.0, vr, 0.0);
        let l = standard_charges(&p, &v, 1.0, 0.0).angular_momentum;

        let p_rot = ExtendedPoint::new(0.0, rot * r, 0.0);
        let v_rot = TangentVector::new(1.0, rot * vr, 0.0);
        let l_rot = standard_charges(&p_rot, &v_rot, 1.0, 0.0).angular_momentum;
        assert_abs_diff_eq!(l_rot, rot * l, epsilon = 1e-14);
    }

    #[test]
    fn noether_charges_reproduce_the_table_up_to_documented_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let free = BargmannMetric::new(Potential::Free);
        let m = free.mass();
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let dr = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let v = free.null_completion(&p, dr, 1.0).unwrap();
            let table = standard_charges(&p, &v, m, 0.0);

            let charge = |params: SchrodingerParams| {
                noether_charge(&free, &schrodinger_generator(params), &p, &v)
            };
            for i in 0..3 {
                let mut e = Vector3::zeros();
                e[i] = 1.0;
                assert_abs_diff_eq!(
                    charge(SchrodingerParams { omega: e, ..Default::default() }),
                    table.angular_momentum[i],
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    charge(SchrodingerParams { beta: e, ..Default::default() }),
                    -table.center_of_mass[i],
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    charge(SchrodingerParams { gamma: e, ..Default::default() }),
                    table.momentum[i],
                    epsilon = 1e-12
                );
            }
            assert_abs_diff_eq!(
                charge(SchrodingerParams { epsilon: 1.0, ..Default::default() }),
                -table.energy,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                charge(SchrodingerParams { eta: 1.0, ..Default::default() }),
                -m,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                charge(SchrodingerParams { delta: 1.0, ..Default::default() }),
                table.dilatation,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                charge(SchrodingerParams { kappa: 1.0, ..Default::default() }),
                table.expansion,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn charges_conserved_along_free_null_geodesics() {
        let free = BargmannMetric::new(Potential::Free);
        let p0 = ExtendedPoint::new(0.0, Vector3::new(0.4, -0.9, 0.3), 0.2);
        let traj =
            integrate_null_geodesic(&free, &p0, Vector3::new(0.7, 0.2, -0.5), 1e-3, 10.0).unwrap();
        for (name, params) in SchrodingerParams::unit_generators() {
            let drift = charge_drift(&traj, &schrodinger_generator(params), 1.0);
            assert!(drift < 1e-10, "{name}: drift {drift}");
        }
        // xi charge is m at every sample, exactly
        for smp in &traj.samples {
            assert_eq!(
                noether_charge(&traj.metric, &ConformalVectorField::xi(), &smp.point, &smp.velocity),
                1.0
            );
        }
    }

    #[test]
    fn harmonic_trajectory_keeps_only_its_own_symmetries() {
        let harm = BargmannMetric::new(Potential::Harmonic { omega: 1.0 });
        let p0 = ExtendedPoint::new(0.0, Vector3::new(1.0, 0.0, 0.0), 0.0);
        let traj =
            integrate_null_geodesic(&harm, &p0, Vector3::new(0.0, 0.6, 0.0), 1e-3, 10.0).unwrap();

        for (name, params) in SchrodingerParams::unit_generators() {
            let drift = charge_drift(&traj, &schrodinger_generator(params), 1.0);
            match name {
                "rotation_x" | "rotation_y" | "rotation_z" | "time_translation"
                | "vertical_translation" => {
                    assert!(drift < 1e-8, "{name}: drift {drift}");
                }
                "translation_x" => {
                    // negative control: the restoring force breaks momentum
                    // conservation at the force scale
                    assert!(drift > 0.1, "{name}: drift {drift}");
                }
                _ => {}
            }
        }
    }

    #[test]
    fn commutator_of_dilatation_and_translation_is_a_translation() {
        // group commutator of single-RK4-step flows; leading term is
        // h^2 [Y1, Y2], parallel to the translation direction
        let gamma_dir = Vector3::new(0.6, -0.3, 0.9);
        let y1 = schrodinger_generator(SchrodingerParams {
            delta: 1.0,
            ..Default::default()
        });
        let y2 = schrodinger_generator(SchrodingerParams {
            gamma: gamma_dir,
            ..Default::default()
        });

        let flow = |f: &ConformalVectorField, p: &ExtendedPoint, h: f64| -> ExtendedPoint {
            let k1 = f.eval(p);
            let k2 = f.eval(&ExtendedPoint::from_coords(&(p.coords() + 0.5 * h * k1)));
            let k3 = f.eval(&ExtendedPoint::from_coords(&(p.coords() + 0.5 * h * k2)));
            let k4 = f.eval(&ExtendedPoint::from_coords(&(p.coords() + h * k3)));
            ExtendedPoint::from_coords(
                &(p.coords() + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)),
            )
        };

        let p = ExtendedPoint::new(0.8, Vector3::new(0.3, 1.1, -0.7), 0.2);
        let h = 1e-4;
        let q = flow(&y2, &flow(&y1, &flow(&y2, &flow(&y1, &p, h), h), -h), -h);
        let comm = (q.coords() - p.coords()) / (h * h);

        let spatial = Vector3::new(comm[0], comm[1], comm[2]);
        // t and s components of the bracket vanish
        assert!(comm[IDX_T].abs() < 1e-5);
        assert!(comm[IDX_S].abs() < 1e-5);
        // spatial part is parallel to gamma_dir with coefficient 1/2
        let coeff = spatial.dot(&gamma_dir) / gamma_dir.norm_squared();
        assert!((spatial - coeff * gamma_dir).norm() < 1e-5, "not parallel: {spatial:?}");
        assert!((coeff.abs() - 0.5).abs() < 1e-2, "coefficient {coeff}");
    }
}
