//! Null geodesics of the free extended metric project onto straight lines,
//! while the extra coordinate s decreases linearly as minus the action.

use bargmann::dynamics::{constraint_drift, integrate_null_geodesic, vertical_check};
use bargmann::geometry::{BargmannMetric, ExtendedPoint, Potential};
use nalgebra::Vector3;

fn main() {
    let metric = BargmannMetric::new(Potential::Free);
    let r0 = Vector3::new(0.0, 0.0, 0.0);
    let v0 = Vector3::new(0.6, -0.8, 0.2);
    let p0 = ExtendedPoint::new(0.0, r0, 0.0);

    let traj = integrate_null_geodesic(&metric, &p0, v0, 1e-3, 5.0).unwrap();

    println!("free particle, v0 = {:?}", (v0.x, v0.y, v0.z));
    println!("{:>6} {:>10} {:>10} {:>10} {:>12}", "t", "x", "y", "z", "s");
    for smp in traj.samples.iter().step_by(1000) {
        println!(
            "{:6.2} {:10.6} {:10.6} {:10.6} {:12.6}",
            smp.t, smp.point.r.x, smp.point.r.y, smp.point.r.z, smp.point.s
        );
    }

    // s(t) = s0 - |v|^2 t / 2 for a free particle
    let expected_s = -0.5 * v0.norm_squared() * 5.0;
    let got_s = traj.samples.last().unwrap().point.s;
    println!("\ns(5) = {got_s:.9}, kinetic-action prediction {expected_s:.9}");
    println!("null constraint drift: {:.3e}", constraint_drift(&traj).unwrap());
    println!("vertical-law deviation: {:.3e}", vertical_check(&traj, 1.0).unwrap());
}
