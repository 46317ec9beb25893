//! The Bargmann group: the central extension of the Galilei group acting on
//! extended spacetime and, projectively, on wavefunctions.
//!
//! An element (A, b, c, e, h) acts on a point (t, r, s) as
//!
//! ```text
//! r* = A r + b t + c
//! t* = t + e
//! s* = s - b.(A r) - t |b|^2 / 2 - h
//! ```
//!
//! We use the left-action convention act(compose(g1, g2), p) =
//! act(g1, act(g2, p)); the composition law including the cocycle term is
//! derived in docs/derivations.md.

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ExtendedPoint;

/// A Bargmann group element (A, b, c, e, h): rotation, boost, space
/// translation, time translation and vertical translation.
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannElement {
    rotation: Matrix3<f64>,
    pub boost: Vector3<f64>,
    pub translation: Vector3<f64>,
    pub time_shift: f64,
    pub vertical_shift: f64,
}

impl BargmannElement {
    /// Validates that `rotation` is orthogonal with det = +1 (to 1e-12).
    pub fn new(
        rotation: Matrix3<f64>,
        boost: Vector3<f64>,
        translation: Vector3<f64>,
        time_shift: f64,
        vertical_shift: f64,
    ) -> Result<Self> {
        let defect = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
        if defect > 1e-12 {
            return Err(Error::InvalidRotation(format!(
                "A^T A deviates from identity by {defect:e}"
            )));
        }
        let det = rotation.determinant();
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidRotation(format!("det A = {det}, expected +1")));
        }
        Ok(Self {
            rotation,
            boost,
            translation,
            time_shift,
            vertical_shift,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            boost: Vector3::zeros(),
            translation: Vector3::zeros(),
            time_shift: 0.0,
            vertical_shift: 0.0,
        }
    }

    pub fn pure_rotation(a: Matrix3<f64>) -> Result<Self> {
        Self::new(a, Vector3::zeros(), Vector3::zeros(), 0.0, 0.0)
    }

    pub fn pure_boost(b: Vector3<f64>) -> Self {
        Self {
            boost: b,
            ..Self::identity()
        }
    }

    pub fn pure_translation(c: Vector3<f64>) -> Self {
        Self {
            translation: c,
            ..Self::identity()
        }
    }

    pub fn pure_time_shift(e: f64) -> Self {
        Self {
            time_shift: e,
            ..Self::identity()
        }
    }

    pub fn pure_vertical_shift(h: f64) -> Self {
        Self {
            vertical_shift: h,
            ..Self::identity()
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    /// Action on an extended point.
    pub fn act_point(&self, p: &ExtendedPoint) -> ExtendedPoint {
        let ar = self.rotation * p.r;
        ExtendedPoint {
            t: p.t + self.time_shift,
            r: ar + self.boost * p.t + self.translation,
            s: p.s
                - self.boost.dot(&ar)
                - 0.5 * p.t * self.boost.norm_squared()
                - self.vertical_shift,
        }
    }

    /// Left-action composition: act(g1.compose(g2), p) = act(g1, act(g2, p)).
    ///
    /// The vertical entry picks up the cocycle term b1.(A1 c2) + e2 |b1|^2/2,
    /// the witness of the central extension.
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.rotation * other.rotation;
        let b = self.rotation * other.boost + self.boost;
        let c = self.rotation * other.translation + self.boost * other.time_shift + self.translation;
        let e = self.time_shift + other.time_shift;
        let h = self.vertical_shift
            + other.vertical_shift
            + self.boost.dot(&(self.rotation * other.translation))
            + 0.5 * other.time_shift * self.boost.norm_squared();
        Self {
            rotation: a,
            boost: b,
            translation: c,
            time_shift: e,
            vertical_shift: h,
        }
    }

    /// Group inverse, solving compose(g, g^-1) = identity.
    pub fn inverse(&self) -> Self {
        let at = self.rotation.transpose();
        let b_inv = -(at * self.boost);
        let c_inv = at * (self.boost * self.time_shift - self.translation);
        let h_inv = -self.vertical_shift + self.boost.dot(&self.translation)
            - 0.5 * self.time_shift * self.boost.norm_squared();
        Self {
            rotation: at,
            boost: b_inv,
            translation: c_inv,
            time_shift: -self.time_shift,
            vertical_shift: h_inv,
        }
    }
}

type WaveFn = Arc<dyn Fn(&Vector3<f64>, f64) -> Complex64 + Send + Sync>;

/// A wavefunction psi(r, t) as a callable.
#[derive(Clone)]
pub struct Wavefunction {
    f: WaveFn,
}

impl Wavefunction {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&Vector3<f64>, f64) -> Complex64 + Send + Sync + 'static,
    {
        Self { f: Arc::new(f) }
    }

    pub fn eval(&self, r: &Vector3<f64>, t: f64) -> Complex64 {
        (self.f)(r, t)
    }

    /// Plane wave exp(i (p.r - E t) / hbar).
    pub fn plane_wave(momentum: Vector3<f64>, energy: f64, hbar: f64) -> Self {
        Self::new(move |r, t| {
            (Complex64::i() * (momentum.dot(r) - energy * t) / hbar).exp()
        })
    }
}

/// The projective Galilei action on wavefunctions:
/// psi*(r, t) = exp(-(i m / hbar)(b.(A r) + |b|^2 t / 2)) psi(r*, t*).
pub fn act_wavefunction(
    g: &BargmannElement,
    psi: &Wavefunction,
    m: f64,
    hbar: f64,
) -> Wavefunction {
    let g = g.clone();
    let psi = psi.clone();
    Wavefunction::new(move |r, t| {
        let ar = g.rotation * r;
        let phase =
            -(m / hbar) * (g.boost.dot(&ar) + 0.5 * g.boost.norm_squared() * t);
        let r_star = ar + g.boost * t + g.translation;
        let t_star = t + g.time_shift;
        (Complex64::i() * phase).exp() * psi.eval(&r_star, t_star)
    })
}

/// Equivariant lift Psi(t, r, s) = exp(i m s / hbar) psi(r, t).
pub fn lift_wavefunction(
    psi: &Wavefunction,
    m: f64,
    hbar: f64,
) -> Arc<dyn Fn(&ExtendedPoint) -> Complex64 + Send + Sync> {
    let psi = psi.clone();
    Arc::new(move |p: &ExtendedPoint| {
        (Complex64::i() * m * p.s / hbar).exp() * psi.eval(&p.r, p.t)
    })
}

/// A uniformly sampled path on the extended manifold, used for the extended
/// Lagrangian invariance check.
#[derive(Debug, Clone)]
pub struct ExtendedPath {
    pub samples: Vec<ExtendedPoint>,
    pub step: f64,
}

impl ExtendedPath {
    pub fn new(samples: Vec<ExtendedPoint>, step: f64) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::Path(format!(
                "need at least 3 samples, got {}",
                samples.len()
            )));
        }
        if !(step > 0.0) {
            return Err(Error::Path(format!("step must be positive, got {step}")));
        }
        Ok(Self { samples, step })
    }

    /// Samples a path from analytic r(t), s(t) on [t0, t0 + n*step].
    pub fn from_functions<R, S>(t0: f64, step: f64, n: usize, r: R, s: S) -> Result<Self>
    where
        R: Fn(f64) -> Vector3<f64>,
        S: Fn(f64) -> f64,
    {
        let samples = (0..=n)
            .map(|k| {
                let t = t0 + k as f64 * step;
                ExtendedPoint::new(t, r(t), s(t))
            })
            .collect();
        Self::new(samples, step)
    }

    /// Finite-difference velocities: central in the interior, one-sided
    /// second-order at the ends. Returns (dr/dt, ds/dt) per sample.
    fn fd_velocities(&self) -> Vec<(Vector3<f64>, f64)> {
        let n = self.samples.len();
        let h = self.step;
        (0..n)
            .map(|k| {
                let (rv, sv) = if k == 0 {
                    let (p0, p1, p2) = (&self.samples[0], &self.samples[1], &self.samples[2]);
                    (
                        (-3.0 * p0.r + 4.0 * p1.r - p2.r) / (2.0 * h),
                        (-3.0 * p0.s + 4.0 * p1.s - p2.s) / (2.0 * h),
                    )
                } else if k == n - 1 {
                    let (p0, p1, p2) =
                        (&self.samples[n - 3], &self.samples[n - 2], &self.samples[n - 1]);
                    (
                        (p0.r - 4.0 * p1.r + 3.0 * p2.r) / (2.0 * h),
                        (p0.s - 4.0 * p1.s + 3.0 * p2.s) / (2.0 * h),
                    )
                } else {
                    let (pm, pp) = (&self.samples[k - 1], &self.samples[k + 1]);
                    ((pp.r - pm.r) / (2.0 * h), (pp.s - pm.s) / (2.0 * h))
                };
                (rv, sv)
            })
            .collect()
    }
}

/// Evaluates the extended Lagrangian L0 = m |r'|^2 / 2 + m ds/dt on `path`
/// and on its image under `g`, returning the max pointwise difference.
///
/// The transformation is affine and the finite-difference stencils are
/// linear, so the deviation vanishes to rounding for any path.
pub fn verify_lagrangian_invariance(
    g: &BargmannElement,
    path: &ExtendedPath,
    m: f64,
) -> Result<f64> {
    let image_samples: Vec<ExtendedPoint> = path.samples.iter().map(|p| g.act_point(p)).collect();
    let image = ExtendedPath::new(image_samples, path.step)?;

    let lagrangian = |p: &ExtendedPath| -> Vec<f64> {
        p.fd_velocities()
            .iter()
            .map(|(rv, sv)| 0.5 * m * rv.norm_squared() + m * sv)
            .collect()
    };

    let l0 = lagrangian(path);
    let l1 = lagrangian(&image);
    Ok(l0
        .iter()
        .zip(&l1)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
