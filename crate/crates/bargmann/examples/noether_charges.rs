//! Each Schrödinger generator pairs with a conserved charge along null
//! geodesics: angular momentum, Galilei boosts, momentum, energy, mass,
//! dilatation and expansion.

use bargmann::dynamics::integrate_null_geodesic;
use bargmann::geometry::{BargmannMetric, ExtendedPoint, Potential, TangentVector};
use bargmann::symmetry::{charge_drift, schrodinger_generator, standard_charges, ChargeTable, SchrodingerParams};
use nalgebra::Vector3;

fn main() {
    // analytic free motion r(t) = (1, t, 0) with unit mass
    let p = ExtendedPoint::new(2.0, Vector3::new(1.0, 2.0, 0.0), 0.0);
    let v = TangentVector::new(1.0, Vector3::new(0.0, 1.0, 0.0), 0.0);
    let table = standard_charges(&p, &v, 1.0, 0.0);
    println!("charges on r(t) = (1, t, 0) at t = 2:");
    for (name, value) in ChargeTable::NAMES.iter().zip(table.values()) {
        println!("  {name:<4} = {value:>6.2}");
    }

    // all 13 charges stay constant along a numerically integrated geodesic
    let free = BargmannMetric::new(Potential::Free);
    let p0 = ExtendedPoint::new(0.0, Vector3::new(0.2, -0.5, 0.8), 0.0);
    let v0 = Vector3::new(0.6, 0.3, -0.4);
    let traj = integrate_null_geodesic(&free, &p0, v0, 1e-3, 10.0).unwrap();

    println!("\ncharge drift along a numeric free geodesic (t in [0, 10]):");
    for (name, params) in SchrodingerParams::unit_generators() {
        let field = schrodinger_generator(params);
        println!("  {:<22} {:.3e}", name, charge_drift(&traj, &field, 1.0));
    }
}
