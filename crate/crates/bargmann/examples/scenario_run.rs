//! Driving the toolkit from a declarative scenario, the same path the
//! `bargmann` binary takes: parse TOML, run the requested checks, emit a
//! deterministic report.

use bargmann::scenario::Scenario;

const CONFIG: &str = r#"
name = "example"
seed = 9
checks = ["projection", "vertical", "constraint", "charges", "symmetries", "quantum"]

[potential]
family = "harmonic"
omega = 1.0

[initial]
r0 = [1.0, 0.0, 0.0]
v0 = [0.0, 0.5, 0.0]

[integration]
dt_step = 1e-3
t_end = 10.0
"#;

fn main() {
    let scenario = Scenario::from_toml(CONFIG).unwrap();
    let outcome = scenario.run(&scenario.checks).unwrap();
    for check in &outcome.report.checks {
        println!(
            "{:<12} {:<5} value {:.3e}  tolerance {:.3e}",
            check.name, check.status, check.value, check.tolerance
        );
    }
    println!("\nreport JSON:\n{}", outcome.report.to_json());
}
