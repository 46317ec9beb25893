//! The Bargmann metric built from a Newtonian potential.
//!
//! Coordinates are ordered (x, y, z, t, s) everywhere, so the spatial block
//! sits in the upper-left 3x3 corner and the (t, s) light-cone pair in the
//! lower-right. With U = U(r, t),
//!
//! ```text
//! g = dr^2 + 2 ds dt - 2 U dt^2
//! ```
//!
//! has det g = -1 at every point and inverse entries g^ij = delta_ij,
//! g^ts = 1, g^ss = 2U (see docs/derivations.md).

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix5, Vector3, Vector5};

use crate::error::{Error, Result};

/// Index of the time coordinate in the (x, y, z, t, s) ordering.
pub const IDX_T: usize = 3;
/// Index of the vertical coordinate.
pub const IDX_S: usize = 4;

/// A point (t, r, s) of the extended 5-dimensional manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedPoint {
    pub t: f64,
    pub r: Vector3<f64>,
    pub s: f64,
}

impl ExtendedPoint {
    pub fn new(t: f64, r: Vector3<f64>, s: f64) -> Self {
        Self { t, r, s }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.s.is_finite() && self.r.iter().all(|x| x.is_finite())
    }

    /// Components in coordinate order (x, y, z, t, s).
    pub fn coords(&self) -> Vector5<f64> {
        Vector5::new(self.r.x, self.r.y, self.r.z, self.t, self.s)
    }

    pub fn from_coords(c: &Vector5<f64>) -> Self {
        Self {
            t: c[IDX_T],
            r: Vector3::new(c[0], c[1], c[2]),
            s: c[IDX_S],
        }
    }
}

/// Velocity components (dt, dr, ds) at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub dt: f64,
    pub dr: Vector3<f64>,
    pub ds: f64,
}

impl TangentVector {
    pub fn new(dt: f64, dr: Vector3<f64>, ds: f64) -> Self {
        Self { dt, dr, ds }
    }

    pub fn is_finite(&self) -> bool {
        self.dt.is_finite() && self.ds.is_finite() && self.dr.iter().all(|x| x.is_finite())
    }

    pub fn coords(&self) -> Vector5<f64> {
        Vector5::new(self.dr.x, self.dr.y, self.dr.z, self.dt, self.ds)
    }
}

type ScalarFn = Arc<dyn Fn(&Vector3<f64>, f64) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&Vector3<f64>, f64) -> Vector3<f64> + Send + Sync>;

/// A potential U(r, t) with analytic spatial gradient and time derivative.
///
/// The builtin families cover the standard verifications; `Custom` exists
/// mainly for tests that need time dependence.
#[derive(Clone)]
pub enum Potential {
    /// U = 0.
    Free,
    /// U = g . r for a constant vector g.
    Uniform { g: Vector3<f64> },
    /// U = 1/2 omega^2 |r|^2.
    Harmonic { omega: f64 },
    /// U = -k / max(|r|, softening). The softening regularises the origin;
    /// the default is 1e-9.
    Kepler { k: f64, softening: f64 },
    /// Arbitrary closures; the caller is responsible for consistency of
    /// `grad` and `time_deriv` with `value`.
    Custom {
        label: String,
        value: ScalarFn,
        grad: GradFn,
        time_deriv: ScalarFn,
    },
}

pub const KEPLER_DEFAULT_SOFTENING: f64 = 1e-9;

impl Potential {
    pub fn kepler(k: f64) -> Self {
        Potential::Kepler {
            k,
            softening: KEPLER_DEFAULT_SOFTENING,
        }
    }

    pub fn value(&self, r: &Vector3<f64>, t: f64) -> f64 {
        match self {
            Potential::Free => 0.0,
            Potential::Uniform { g } => g.dot(r),
            Potential::Harmonic { omega } => 0.5 * omega * omega * r.norm_squared(),
            Potential::Kepler { k, softening } => -k / r.norm().max(*softening),
            Potential::Custom { value, .. } => value(r, t),
        }
    }

    pub fn grad(&self, r: &Vector3<f64>, t: f64) -> Vector3<f64> {
        match self {
            Potential::Free => Vector3::zeros(),
            Potential::Uniform { g } => *g,
            Potential::Harmonic { omega } => omega * omega * r,
            Potential::Kepler { k, softening } => {
                let d = r.norm();
                if d <= *softening {
                    Vector3::zeros()
                } else {
                    *k * r / (d * d * d)
                }
            }
            Potential::Custom { grad, .. } => grad(r, t),
        }
    }

    pub fn time_deriv(&self, r: &Vector3<f64>, t: f64) -> f64 {
        match self {
            Potential::Custom { time_deriv, .. } => time_deriv(r, t),
            _ => 0.0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Potential::Free => "free".into(),
            Potential::Uniform { g } => format!("uniform(g=[{}, {}, {}])", g.x, g.y, g.z),
            Potential::Harmonic { omega } => format!("harmonic(omega={omega})"),
            Potential::Kepler { k, softening } => format!("kepler(k={k}, softening={softening})"),
            Potential::Custom { label, .. } => label.clone(),
        }
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({})", self.label())
    }
}

/// The Lorentz 5-metric of Eq-style form dr^2 + 2 ds dt - 2 U dt^2, together
/// with the particle mass and hbar carried for charge and quantum checks.
#[derive(Clone, Debug)]
pub struct BargmannMetric {
    potential: Potential,
    mass: f64,
    hbar: f64,
}

impl BargmannMetric {
    /// Natural-unit constructor, m = hbar = 1.
    pub fn new(potential: Potential) -> Self {
        Self {
            potential,
            mass: 1.0,
            hbar: 1.0,
        }
    }

    pub fn with_units(potential: Potential, mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Evaluation(format!("mass must be positive, got {mass}")));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::Evaluation(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { potential, mass, hbar })
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    fn potential_at(&self, p: &ExtendedPoint) -> Result<f64> {
        if !p.is_finite() {
            return Err(Error::Evaluation("non-finite point".into()));
        }
        let u = self.potential.value(&p.r, p.t);
        if !u.is_finite() {
            return Err(Error::Evaluation(format!(
                "potential {} is non-finite at r={:?}, t={}",
                self.potential.label(),
                p.r,
                p.t
            )));
        }
        Ok(u)
    }

    /// Covariant components g_ab in the (x, y, z, t, s) ordering.
    pub fn components(&self, p: &ExtendedPoint) -> Result<Matrix5<f64>> {
        let u = self.potential_at(p)?;
        let mut g = Matrix5::zeros();
        for i in 0..3 {
            g[(i, i)] = 1.0;
        }
        g[(IDX_T, IDX_T)] = -2.0 * u;
        g[(IDX_T, IDX_S)] = 1.0;
        g[(IDX_S, IDX_T)] = 1.0;
        Ok(g)
    }

    /// Contravariant components g^ab: g^ij = delta_ij, g^ts = 1, g^ss = 2U.
    pub fn inverse_components(&self, p: &ExtendedPoint) -> Result<Matrix5<f64>> {
        let u = self.potential_at(p)?;
        let mut g = Matrix5::zeros();
        for i in 0..3 {
            g[(i, i)] = 1.0;
        }
        g[(IDX_T, IDX_S)] = 1.0;
        g[(IDX_S, IDX_T)] = 1.0;
        g[(IDX_S, IDX_S)] = 2.0 * u;
        Ok(g)
    }

    /// Christoffel symbols Gamma^a_bc, indexed `[a][(b, c)]`, symmetric in
    /// (b, c). The only nonzero components are
    ///
    /// ```text
    /// Gamma^i_tt = dU/dx^i,  Gamma^s_tt = -dU/dt,  Gamma^s_ti = -dU/dx^i
    /// ```
    pub fn christoffel(&self, p: &ExtendedPoint) -> Result<[Matrix5<f64>; 5]> {
        self.potential_at(p)?;
        let grad = self.potential.grad(&p.r, p.t);
        let dt_u = self.potential.time_deriv(&p.r, p.t);
        if !dt_u.is_finite() || grad.iter().any(|x| !x.is_finite()) {
            return Err(Error::Evaluation(format!(
                "potential derivatives non-finite at r={:?}, t={}",
                p.r, p.t
            )));
        }
        let mut gamma = [Matrix5::zeros(); 5];
        for i in 0..3 {
            gamma[i][(IDX_T, IDX_T)] = grad[i];
            gamma[IDX_S][(IDX_T, i)] = -grad[i];
            gamma[IDX_S][(i, IDX_T)] = -grad[i];
        }
        gamma[IDX_S][(IDX_T, IDX_T)] = -dt_u;
        Ok(gamma)
    }

    /// The conserved quadratic h0 = g_ab dx^a dx^b, minus the internal
    /// energy: |dr|^2 + 2 ds dt - 2 U dt^2.
    pub fn internal_energy(&self, p: &ExtendedPoint, v: &TangentVector) -> Result<f64> {
        let u = self.potential_at(p)?;
        if !v.is_finite() {
            return Err(Error::Evaluation("non-finite tangent".into()));
        }
        Ok(v.dr.norm_squared() + 2.0 * v.ds * v.dt - 2.0 * u * v.dt * v.dt)
    }

    /// Solve h0 = 0 for ds given (dt, dr): ds = U dt - |dr|^2 / (2 dt).
    pub fn null_completion(
        &self,
        p: &ExtendedPoint,
        dr: Vector3<f64>,
        dt: f64,
    ) -> Result<TangentVector> {
        if dt == 0.0 {
            return Err(Error::NoTimeFlow);
        }
        let u = self.potential_at(p)?;
        let ds = u * dt - dr.norm_squared() / (2.0 * dt);
        Ok(TangentVector::new(dt, dr, ds))
    }
}
