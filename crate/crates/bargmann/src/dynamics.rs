//! Null-geodesic integration of the Bargmann metric, parametrized by t, plus
//! an independent Newtonian oracle for projection checks.
//!
//! Gamma^t_bc vanishes identically for this metric, so t is an affine
//! parameter along every geodesic and we integrate with dt/dt = 1 fixed
//! (docs/derivations.md). The geodesic side uses the classical Runge-Kutta
//! scheme; the oracle uses the 3/8 rule, a genuinely different fourth-order
//! method sharing no code with the geodesic path.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::{BargmannMetric, ExtendedPoint, Potential, TangentVector, IDX_S, IDX_T};

/// One sample of an extended trajectory; `velocity.dt == 1` always.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub point: ExtendedPoint,
    pub velocity: TangentVector,
}

/// A null geodesic sampled on a uniform t-grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub step: f64,
    pub metric: BargmannMetric,
}

/// The Newtonian oracle's output: (t, r, v) triples on a uniform grid.
#[derive(Debug, Clone)]
pub struct NewtonianTrajectory {
    pub samples: Vec<(f64, Vector3<f64>, Vector3<f64>)>,
    pub step: f64,
}

/// Geodesic second derivatives at (p, v) with v.dt = 1:
/// (d2t, d2r, d2s) = (0, -Gamma^i_tt, -Gamma^s_tt - 2 Gamma^s_ti dr^i),
/// i.e. r'' = -grad U and s'' = dU/dt + 2 grad U . r'.
pub fn geodesic_rhs(
    metric: &BargmannMetric,
    p: &ExtendedPoint,
    v: &TangentVector,
) -> Result<TangentVector> {
    debug_assert!((v.dt - 1.0).abs() < 1e-12, "geodesic_rhs expects v.dt = 1");
    let gamma = metric.christoffel(p)?;
    let mut d2r = Vector3::zeros();
    for i in 0..3 {
        d2r[i] = -gamma[i][(IDX_T, IDX_T)];
    }
    let mut d2s = -gamma[IDX_S][(IDX_T, IDX_T)];
    for i in 0..3 {
        d2s -= 2.0 * gamma[IDX_S][(IDX_T, i)] * v.dr[i];
    }
    Ok(TangentVector::new(0.0, d2r, d2s))
}

// state layout for the geodesic integrator: r, r', s, s'
#[derive(Clone, Copy)]
struct GeoState {
    r: Vector3<f64>,
    v: Vector3<f64>,
    s: f64,
    sdot: f64,
}

impl GeoState {
    fn axpy(&self, h: f64, d: &GeoState) -> GeoState {
        GeoState {
            r: self.r + h * d.r,
            v: self.v + h * d.v,
            s: self.s + h * d.s,
            sdot: self.sdot + h * d.sdot,
        }
    }

    fn is_finite(&self) -> bool {
        self.s.is_finite()
            && self.sdot.is_finite()
            && self.r.iter().all(|x| x.is_finite())
            && self.v.iter().all(|x| x.is_finite())
    }
}

fn geo_deriv(metric: &BargmannMetric, t: f64, y: &GeoState) -> Result<GeoState> {
    let p = ExtendedPoint::new(t, y.r, y.s);
    let vel = TangentVector::new(1.0, y.v, y.sdot);
    let acc = geodesic_rhs(metric, &p, &vel)?;
    Ok(GeoState {
        r: y.v,
        v: acc.dr,
        s: y.sdot,
        sdot: acc.ds,
    })
}

fn step_count(t0: f64, t_end: f64, dt_step: f64) -> Result<usize> {
    if !(dt_step > 0.0) {
        return Err(Error::Path(format!("dt_step must be positive, got {dt_step}")));
    }
    if !(t_end > t0) {
        return Err(Error::Path(format!("t_end = {t_end} must exceed t0 = {t0}")));
    }
    Ok((((t_end - t0) / dt_step).round() as usize).max(1))
}

/// Integrates the null geodesic with initial spatial data (p0, dr0). The
/// initial ds is fixed by `null_completion`, after which (s, s') evolve by
/// the geodesic equation. Classical fourth-order Runge-Kutta, fixed step.
pub fn integrate_null_geodesic(
    metric: &BargmannMetric,
    p0: &ExtendedPoint,
    dr0: Vector3<f64>,
    dt_step: f64,
    t_end: f64,
) -> Result<Trajectory> {
    let n = step_count(p0.t, t_end, dt_step)?;
    let v0 = metric.null_completion(p0, dr0, 1.0)?;

    let mut samples = Vec::with_capacity(n + 1);
    let mut y = GeoState {
        r: p0.r,
        v: dr0,
        s: p0.s,
        sdot: v0.ds,
    };
    let mut t = p0.t;
    samples.push(TrajectorySample {
        t,
        point: ExtendedPoint::new(t, y.r, y.s),
        velocity: TangentVector::new(1.0, y.v, y.sdot),
    });

    let h = dt_step;
    for k in 0..n {
        let step = (|| -> Result<GeoState> {
            let k1 = geo_deriv(metric, t, &y)?;
            let k2 = geo_deriv(metric, t + 0.5 * h, &y.axpy(0.5 * h, &k1))?;
            let k3 = geo_deriv(metric, t + 0.5 * h, &y.axpy(0.5 * h, &k2))?;
            let k4 = geo_deriv(metric, t + h, &y.axpy(h, &k3))?;
            Ok(y
                .axpy(h / 6.0, &k1)
                .axpy(h / 3.0, &k2)
                .axpy(h / 3.0, &k3)
                .axpy(h / 6.0, &k4))
        })();
        let next = match step {
            Ok(next) if next.is_finite() => next,
            _ => {
                return Err(Error::NonFiniteState {
                    last_valid: k,
                    partial: Box::new(Trajectory {
                        samples,
                        step: dt_step,
                        metric: metric.clone(),
                    }),
                })
            }
        };
        y = next;
        t = p0.t + (k + 1) as f64 * h;
        samples.push(TrajectorySample {
            t,
            point: ExtendedPoint::new(t, y.r, y.s),
            velocity: TangentVector::new(1.0, y.v, y.sdot),
        });
    }

    Ok(Trajectory {
        samples,
        step: dt_step,
        metric: metric.clone(),
    })
}

/// Integrates r'' = -grad U with the 3/8-rule Runge-Kutta scheme. Shares no
/// code with the geodesic integrator beyond the `Potential` itself.
pub fn newtonian_oracle(
    potential: &Potential,
    r0: Vector3<f64>,
    v0: Vector3<f64>,
    t0: f64,
    dt_step: f64,
    t_end: f64,
) -> Result<NewtonianTrajectory> {
    let n = step_count(t0, t_end, dt_step)?;
    let accel = |r: &Vector3<f64>, t: f64| -> Vector3<f64> { -potential.grad(r, t) };

    let mut samples = Vec::with_capacity(n + 1);
    let (mut r, mut v) = (r0, v0);
    let mut t = t0;
    samples.push((t, r, v));

    let h = dt_step;
    for k in 0..n {
        // 3/8 rule: c = (0, 1/3, 2/3, 1), b = (1/8, 3/8, 3/8, 1/8)
        let (kr1, kv1) = (v, accel(&r, t));
        let (kr2, kv2) = (
            v + (h / 3.0) * kv1,
            accel(&(r + (h / 3.0) * kr1), t + h / 3.0),
        );
        let (kr3, kv3) = (
            v + h * (-kv1 / 3.0 + kv2),
            accel(&(r + h * (-kr1 / 3.0 + kr2)), t + 2.0 * h / 3.0),
        );
        let (kr4, kv4) = (
            v + h * (kv1 - kv2 + kv3),
            accel(&(r + h * (kr1 - kr2 + kr3)), t + h),
        );
        r += (h / 8.0) * (kr1 + 3.0 * kr2 + 3.0 * kr3 + kr4);
        v += (h / 8.0) * (kv1 + 3.0 * kv2 + 3.0 * kv3 + kv4);
        if !(r.iter().all(|x| x.is_finite()) && v.iter().all(|x| x.is_finite())) {
            return Err(Error::NonFiniteState {
                last_valid: k,
                partial: Box::new(Trajectory {
                    samples: Vec::new(),
                    step: dt_step,
                    metric: BargmannMetric::new(potential.clone()),
                }),
            });
        }
        t = t0 + (k + 1) as f64 * h;
        samples.push((t, r, v));
    }

    Ok(NewtonianTrajectory {
        samples,
        step: dt_step,
    })
}

/// Max over samples of |r_geodesic(t) - r_oracle(t)| on a shared grid.
pub fn projection_deviation(traj: &Trajectory, oracle: &NewtonianTrajectory) -> Result<f64> {
    if traj.samples.len() != oracle.samples.len() {
        return Err(Error::Grid(format!(
            "sample counts differ: {} vs {}",
            traj.samples.len(),
            oracle.samples.len()
        )));
    }
    let mut max_dev: f64 = 0.0;
    for (g, (t, r, _)) in traj.samples.iter().zip(&oracle.samples) {
        if (g.t - t).abs() > 1e-12 {
            return Err(Error::Grid(format!("time grids differ: {} vs {}", g.t, t)));
        }
        max_dev = max_dev.max((g.point.r - r).norm());
    }
    Ok(max_dev)
}

/// Cumulative quadrature of the Lagrangian samples: composite Simpson at
/// even indices, with a one-interval fourth-order end correction at odd
/// indices.
fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut acc = vec![0.0; n];
    for k in 1..n {
        acc[k] = if k % 2 == 0 {
            acc[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
        } else if k == 1 {
            h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2])
        } else {
            acc[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k])
        };
    }
    acc
}

/// Checks the vertical law s(t) = s0 - (1/m) integral of L dt, with
/// L = m |r'|^2 / 2 - m U, by Simpson quadrature on the trajectory samples.
/// Returns the max deviation from the integrated s(t).
pub fn vertical_check(traj: &Trajectory, m: f64) -> Result<f64> {
    if traj.samples.len() < 3 {
        return Err(Error::Path(format!(
            "vertical check needs at least 3 samples, got {}",
            traj.samples.len()
        )));
    }
    let potential = traj.metric.potential();
    let lagrangian: Vec<f64> = traj
        .samples
        .iter()
        .map(|smp| {
            let u = potential.value(&smp.point.r, smp.t);
            (0.5 * m * smp.velocity.dr.norm_squared() - m * u) / m
        })
        .collect();
    let integral = cumulative_simpson(&lagrangian, traj.step);
    let s0 = traj.samples[0].point.s;
    Ok(traj
        .samples
        .iter()
        .zip(&integral)
        .map(|(smp, i)| (smp.point.s - (s0 - i)).abs())
        .fold(0.0, f64::max))
}

/// Max over samples of |h0| = |g_ab x'^a x'^b|; zero for an exact null
/// geodesic.
pub fn constraint_drift(traj: &Trajectory) -> Result<f64> {
    let mut max_drift: f64 = 0.0;
    for smp in &traj.samples {
        max_drift = max_drift.max(
            traj.metric
                .internal_energy(&smp.point, &smp.velocity)?
                .abs(),
        );
    }
    Ok(max_drift)
}
