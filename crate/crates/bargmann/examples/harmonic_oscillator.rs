//! The harmonic oscillator as extended-space geometry: the geodesic
//! projection reproduces cos(wt) and the vertical coordinate tracks minus
//! the classical action, s(t) = s0 + sin(2t)/4 for this initial condition.

use bargmann::dynamics::{integrate_null_geodesic, newtonian_oracle, projection_deviation, vertical_check};
use bargmann::geometry::{BargmannMetric, ExtendedPoint, Potential};
use nalgebra::Vector3;

fn main() {
    let metric = BargmannMetric::new(Potential::Harmonic { omega: 1.0 });
    let p0 = ExtendedPoint::new(0.0, Vector3::new(1.0, 0.0, 0.0), 0.0);
    let v0 = Vector3::zeros();

    let traj = integrate_null_geodesic(&metric, &p0, v0, 1e-3, 10.0).unwrap();
    let oracle = newtonian_oracle(metric.potential(), p0.r, v0, 0.0, 1e-3, 10.0).unwrap();

    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "t", "x", "cos t", "s", "sin(2t)/4");
    for smp in traj.samples.iter().step_by(2000) {
        println!(
            "{:6.2} {:12.8} {:12.8} {:12.8} {:12.8}",
            smp.t,
            smp.point.r.x,
            smp.t.cos(),
            smp.point.s,
            0.25 * (2.0 * smp.t).sin()
        );
    }

    println!(
        "\nmax deviation from the Newtonian oracle: {:.3e}",
        projection_deviation(&traj, &oracle).unwrap()
    );
    println!(
        "vertical-law quadrature deviation: {:.3e}",
        vertical_check(&traj, 1.0).unwrap()
    );
}
