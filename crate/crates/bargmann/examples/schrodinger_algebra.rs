//! The 13-generator Schrödinger algebra realized as conformal vector fields
//! of the free extended metric: Lie-dragging the metric along each generator
//! rescales it by lambda = delta + 2 kappa t and nothing else.

use bargmann::geometry::{BargmannMetric, ExtendedPoint, Potential};
use bargmann::symmetry::{conformal_residual, schrodinger_generator, vertical_commutation_check, SchrodingerParams};
use nalgebra::Vector3;

fn main() {
    let free = BargmannMetric::new(Potential::Free);
    let p = ExtendedPoint::new(1.5, Vector3::new(0.7, -0.4, 1.1), 0.3);

    println!("{:<22} {:>12} {:>14} {:>14}", "generator", "lambda", "residual", "d/ds defect");
    for (name, params) in SchrodingerParams::unit_generators() {
        let field = schrodinger_generator(params);
        let (lambda, residual) = conformal_residual(&free, &field, &p).unwrap();
        let comm = vertical_commutation_check(&field, &p, 1e-3);
        println!("{name:<22} {lambda:>12.6} {residual:>14.3e} {comm:>14.3e}");
    }

    // dilatations and expansions are conformal only for the free metric;
    // against a harmonic potential the expansion generator picks up a defect
    let harmonic = BargmannMetric::new(Potential::Harmonic { omega: 1.0 });
    let expansion = schrodinger_generator(SchrodingerParams {
        kappa: 1.0,
        ..Default::default()
    });
    let control = ExtendedPoint::new(1.0, Vector3::new(1.0, 0.0, 0.0), 0.0);
    let (_, defect) = conformal_residual(&harmonic, &expansion, &control).unwrap();
    println!("\nexpansion against the harmonic metric: residual {defect:.3}");
}
