//! The 5-dimensional wave equation contains the Schrödinger equation: a
//! solution psi(r, t) lifts to Psi = exp(i m s / hbar) psi, and Psi is
//! harmonic for the extended Laplacian exactly when psi solves the
//! Schrödinger equation for the same potential.

use bargmann::geometry::{BargmannMetric, ExtendedPoint, Potential};
use bargmann::quantum::{laplacian_5d, schrodinger_residual, AnalyticSolution, LiftedWavefunction};
use nalgebra::Vector3;

fn main() {
    let (m, hbar) = (1.0, 1.0);
    let p = ExtendedPoint::new(0.4, Vector3::new(0.3, -0.2, 0.6), 0.9);

    let free = BargmannMetric::new(Potential::Free);
    let momentum = Vector3::new(0.6, -0.3, 0.4);
    let tuned = momentum.norm_squared() / (2.0 * m);

    let plane = AnalyticSolution::plane_wave(momentum, tuned, hbar);
    let lifted = LiftedWavefunction::lift(&plane, m, hbar);
    println!(
        "plane wave with E = p^2/2m: |laplacian_5d| = {:.3e}",
        laplacian_5d(&free, &lifted, &p, 1e-3).unwrap().norm()
    );

    let harmonic = BargmannMetric::new(Potential::Harmonic { omega: 1.0 });
    let ground = AnalyticSolution::harmonic_ground_state(m, 1.0, hbar);
    let lifted = LiftedWavefunction::lift(&ground, m, hbar);
    println!(
        "harmonic ground state:       |laplacian_5d| = {:.3e}",
        laplacian_5d(&harmonic, &lifted, &p, 1e-3).unwrap().norm()
    );

    // detune the dispersion relation: the 5d Laplacian no longer vanishes,
    // and its size is exactly 2m/hbar^2 times the Schrödinger residual
    let detuned = AnalyticSolution::plane_wave(momentum, tuned + 1.0, hbar);
    let lifted = LiftedWavefunction::lift(&detuned, m, hbar);
    let lap = laplacian_5d(&free, &lifted, &p, 1e-3).unwrap();
    let res = schrodinger_residual(&detuned, &Potential::Free, m, hbar, &p.r, p.t);
    println!(
        "detuned plane wave:          |laplacian_5d| = {:.6}, (2m/hbar^2)|residual| = {:.6}",
        lap.norm(),
        2.0 * m / (hbar * hbar) * res.norm()
    );
}
