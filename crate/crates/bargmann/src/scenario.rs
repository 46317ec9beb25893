//! Scenario-driven runs: declarative TOML configs, check execution, and
//! deterministic CSV/JSON emission.
//!
//! The schema is frozen in the README; every builtin potential family has a
//! complete example under `scenarios/`. Identical configs produce
//! byte-identical outputs; per-check runtimes are measured but excluded from
//! the serialized report so the byte-determinism guarantee holds.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::Vector3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    constraint_drift, integrate_null_geodesic, newtonian_oracle, projection_deviation,
    vertical_check, Trajectory,
};
use crate::error::{Error, Result};
use crate::geometry::{BargmannMetric, ExtendedPoint, Potential, KEPLER_DEFAULT_SOFTENING};
use crate::quantum::{lift_equivalence_check, AnalyticSolution};
use crate::symmetry::{
    charge_drift, conformal_residual, schrodinger_generator, standard_charges,
    vertical_commutation_check, ConformalVectorField, SchrodingerParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Projection,
    Vertical,
    Constraint,
    Charges,
    Symmetries,
    Quantum,
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Projection => "projection",
            Check::Vertical => "vertical",
            Check::Constraint => "constraint",
            Check::Charges => "charges",
            Check::Symmetries => "symmetries",
            Check::Quantum => "quantum",
        }
    }

    /// Checks that consume the integrated trajectory.
    pub fn needs_trajectory(&self) -> bool {
        matches!(
            self,
            Check::Projection | Check::Vertical | Check::Constraint | Check::Charges
        )
    }
}

/// Check tolerances; the defaults match the toolkit's acceptance thresholds.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub projection: f64,
    pub vertical: f64,
    pub constraint: f64,
    pub charges: f64,
    pub symmetry_residual: f64,
    pub symmetry_commutation: f64,
    pub quantum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            projection: 1e-6,
            vertical: 1e-7,
            constraint: 1e-8,
            charges: 1e-8,
            symmetry_residual: 1e-9,
            symmetry_commutation: 1e-12,
            quantum: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

// ---- raw TOML schema ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(default)]
    seed: u64,
    checks: Vec<Check>,
    potential: PotentialSection,
    #[serde(default)]
    particle: ParticleSection,
    initial: InitialSection,
    integration: IntegrationSection,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialSection {
    family: String,
    omega: Option<f64>,
    g: Option<[f64; 3]>,
    k: Option<f64>,
    softening: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ParticleSection {
    mass: f64,
    hbar: f64,
}

impl Default for ParticleSection {
    fn default() -> Self {
        Self { mass: 1.0, hbar: 1.0 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialSection {
    r0: [f64; 3],
    v0: [f64; 3],
    #[serde(default)]
    s0: f64,
    #[serde(default)]
    t0: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrationSection {
    dt_step: f64,
    t_end: f64,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OutputSection {
    format: OutputFormat,
    directory: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            format: OutputFormat::Csv,
            directory: "out".into(),
        }
    }
}

// ---- validated scenario ----

/// A validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub potential: Potential,
    pub mass: f64,
    pub hbar: f64,
    pub r0: Vector3<f64>,
    pub v0: Vector3<f64>,
    pub s0: f64,
    pub t0: f64,
    pub dt_step: f64,
    pub t_end: f64,
    pub tolerances: Tolerances,
    pub output_format: OutputFormat,
    pub output_dir: PathBuf,
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        raw.validate()
    }

    pub fn metric(&self) -> Result<BargmannMetric> {
        BargmannMetric::with_units(self.potential.clone(), self.mass, self.hbar)
    }
}

impl ScenarioFile {
    fn validate(self) -> Result<Scenario> {
        let potential = match self.potential.family.as_str() {
            "free" => Potential::Free,
            "uniform" => {
                let g = self.potential.g.ok_or_else(|| {
                    Error::Config("potential.g is required for family = \"uniform\"".into())
                })?;
                Potential::Uniform { g: Vector3::from(g) }
            }
            "harmonic" => {
                let omega = self.potential.omega.ok_or_else(|| {
                    Error::Config("potential.omega is required for family = \"harmonic\"".into())
                })?;
                Potential::Harmonic { omega }
            }
            "kepler" => {
                let k = self.potential.k.ok_or_else(|| {
                    Error::Config("potential.k is required for family = \"kepler\"".into())
                })?;
                Potential::Kepler {
                    k,
                    softening: self.potential.softening.unwrap_or(KEPLER_DEFAULT_SOFTENING),
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "potential.family: unknown family {other:?} (expected free, uniform, harmonic or kepler)"
                )))
            }
        };
        if !(self.integration.dt_step > 0.0) {
            return Err(Error::Config(format!(
                "integration.dt_step must be positive, got {}",
                self.integration.dt_step
            )));
        }
        if !(self.integration.t_end > self.initial.t0) {
            return Err(Error::Config(format!(
                "integration.t_end = {} must exceed initial.t0 = {}",
                self.integration.t_end, self.initial.t0
            )));
        }
        if !(self.particle.mass > 0.0) {
            return Err(Error::Config(format!(
                "particle.mass must be positive, got {}",
                self.particle.mass
            )));
        }
        if !(self.particle.hbar > 0.0) {
            return Err(Error::Config(format!(
                "particle.hbar must be positive, got {}",
                self.particle.hbar
            )));
        }
        let mut seen = Vec::new();
        for c in &self.checks {
            if seen.contains(c) {
                return Err(Error::Config(format!(
                    "checks: {:?} listed more than once",
                    c.name()
                )));
            }
            seen.push(*c);
        }
        if self.checks.contains(&Check::Quantum)
            && !matches!(potential, Potential::Free | Potential::Harmonic { .. })
        {
            return Err(Error::Config(
                "checks: \"quantum\" requires the free or harmonic potential family \
                 (those ship analytic solutions)"
                    .into(),
            ));
        }
        Ok(Scenario {
            name: self.name,
            seed: self.seed,
            checks: self.checks,
            potential,
            mass: self.particle.mass,
            hbar: self.particle.hbar,
            r0: Vector3::from(self.initial.r0),
            v0: Vector3::from(self.initial.v0),
            s0: self.initial.s0,
            t0: self.initial.t0,
            dt_step: self.integration.dt_step,
            t_end: self.integration.t_end,
            tolerances: self.tolerances,
            output_format: self.output.format,
            output_dir: PathBuf::from(self.output.directory),
        })
    }
}

// ---- report ----

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: String,
    pub value: f64,
    pub tolerance: f64,
    /// Wall-clock seconds; excluded from serialization so identical configs
    /// emit byte-identical reports.
    #[serde(skip)]
    pub runtime: f64,
}

impl CheckResult {
    fn new(name: &str, value: f64, tolerance: f64, runtime: f64) -> Self {
        Self {
            name: name.to_string(),
            status: if value <= tolerance { "pass" } else { "fail" }.to_string(),
            value,
            tolerance,
            runtime,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub checks: Vec<CheckResult>,
    pub versions: Versions,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Versions {
    pub bargmann: String,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

// ---- runner ----

/// Outcome of a scenario run: the report plus the trajectory when one was
/// integrated (possibly partial after a blow-up).
pub struct RunOutcome {
    pub report: Report,
    pub trajectory: Option<Trajectory>,
}

/// Conserved-charge drift for the scenario's potential family: all 13
/// Schrödinger generators for the free metric, otherwise the charges the
/// family actually conserves (mass and energy always; angular momentum for
/// central potentials).
fn charges_value(scenario: &Scenario, traj: &Trajectory) -> f64 {
    let mut worst: f64 = 0.0;
    match scenario.potential {
        Potential::Free => {
            for (_, params) in SchrodingerParams::unit_generators() {
                worst = worst.max(charge_drift(traj, &schrodinger_generator(params), scenario.mass));
            }
            worst = worst.max(charge_drift(traj, &ConformalVectorField::xi(), scenario.mass));
        }
        _ => {
            // energy: -C for the time-translation generator
            let eps = schrodinger_generator(SchrodingerParams {
                epsilon: 1.0,
                ..Default::default()
            });
            worst = worst.max(charge_drift(traj, &eps, scenario.mass));
            worst = worst.max(charge_drift(traj, &ConformalVectorField::xi(), scenario.mass));
            let central = matches!(
                scenario.potential,
                Potential::Harmonic { .. } | Potential::Kepler { .. }
            );
            if central {
                for i in 0..3 {
                    let mut omega = Vector3::zeros();
                    omega[i] = 1.0;
                    let rot = schrodinger_generator(SchrodingerParams {
                        omega,
                        ..Default::default()
                    });
                    worst = worst.max(charge_drift(traj, &rot, scenario.mass));
                }
            }
        }
    }
    worst
}

/// Max conformal residual of the 13 generators on the free metric over
/// `n_points` seeded random points; also folds in the lambda defect and the
/// vertical-commutation defect scaled to its own tolerance.
fn symmetries_value(scenario: &Scenario, n_points: usize) -> Result<f64> {
    let free = BargmannMetric::with_units(Potential::Free, scenario.mass, scenario.hbar)?;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let tol = scenario.tolerances;
    let mut worst: f64 = 0.0;
    for (_, params) in SchrodingerParams::unit_generators() {
        let field = schrodinger_generator(params);
        for _ in 0..n_points {
            let p = ExtendedPoint::new(
                rng.gen_range(-2.0..2.0),
                Vector3::new(
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                ),
                rng.gen_range(-2.0..2.0),
            );
            let (lambda, residual) = conformal_residual(&free, &field, &p)?;
            let lambda_defect = (lambda - (params.delta + 2.0 * params.kappa * p.t)).abs();
            worst = worst.max(residual).max(lambda_defect);
            // commutation defect enters scaled so one threshold decides
            let comm = vertical_commutation_check(&field, &p, 1e-3);
            worst = worst.max(comm * tol.symmetry_residual / tol.symmetry_commutation);
        }
    }
    Ok(worst)
}

/// Max lift-equivalence defect over seeded points for the analytic solutions
/// matching the scenario's potential family.
fn quantum_value(scenario: &Scenario, n_points: usize) -> Result<f64> {
    let metric = scenario.metric()?;
    let (m, hbar) = (scenario.mass, scenario.hbar);
    let solutions: Vec<AnalyticSolution> = match scenario.potential {
        Potential::Free => {
            let momentum = Vector3::new(0.6, -0.3, 0.4);
            vec![
                AnalyticSolution::plane_wave(momentum, momentum.norm_squared() / (2.0 * m), hbar),
                AnalyticSolution::gaussian_packet(1.0, m, hbar),
            ]
        }
        Potential::Harmonic { omega } => {
            vec![AnalyticSolution::harmonic_ground_state(m, omega, hbar)]
        }
        _ => {
            return Err(Error::Config(
                "quantum check requires the free or harmonic family".into(),
            ))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for sol in &solutions {
        for _ in 0..n_points {
            let p = ExtendedPoint::new(
                rng.gen_range(-1.0..1.0),
                Vector3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ),
                rng.gen_range(-1.0..1.0),
            );
            worst = worst.max(lift_equivalence_check(
                &metric,
                sol,
                scenario.potential(),
                &p,
                1e-3,
            )?);
        }
    }
    Ok(worst)
}

impl Scenario {
    fn potential(&self) -> &Potential {
        &self.potential
    }

    /// Runs the requested subset of checks. Blow-ups during integration fail
    /// the affected checks instead of aborting; the partial trajectory is
    /// kept for output.
    pub fn run(&self, checks: &[Check]) -> Result<RunOutcome> {
        let metric = self.metric()?;
        let wants_trajectory = !checks.is_empty() && checks.iter().any(Check::needs_trajectory)
            || checks.is_empty();

        let mut trajectory = None;
        let mut diverged = false;
        if wants_trajectory {
            let p0 = ExtendedPoint::new(self.t0, self.r0, self.s0);
            match integrate_null_geodesic(&metric, &p0, self.v0, self.dt_step, self.t_end) {
                Ok(traj) => trajectory = Some(traj),
                Err(Error::NonFiniteState { partial, .. }) => {
                    trajectory = Some(*partial);
                    diverged = true;
                }
                Err(e) => return Err(e),
            }
        }

        let mut results = Vec::new();
        for check in checks {
            let start = Instant::now();
            let (value, tolerance) = match check {
                Check::Projection => {
                    let value = match (&trajectory, diverged) {
                        (Some(traj), false) => {
                            let oracle = newtonian_oracle(
                                &self.potential,
                                self.r0,
                                self.v0,
                                self.t0,
                                self.dt_step,
                                self.t_end,
                            );
                            match oracle {
                                Ok(oracle) => projection_deviation(traj, &oracle)?,
                                Err(_) => f64::INFINITY,
                            }
                        }
                        _ => f64::INFINITY,
                    };
                    (value, self.tolerances.projection)
                }
                Check::Vertical => {
                    let value = match (&trajectory, diverged) {
                        (Some(traj), false) => vertical_check(traj, self.mass)?,
                        _ => f64::INFINITY,
                    };
                    (value, self.tolerances.vertical)
                }
                Check::Constraint => {
                    let value = match (&trajectory, diverged) {
                        (Some(traj), false) => constraint_drift(traj)?,
                        _ => f64::INFINITY,
                    };
                    (value, self.tolerances.constraint)
                }
                Check::Charges => {
                    let value = match (&trajectory, diverged) {
                        (Some(traj), false) => charges_value(self, traj),
                        _ => f64::INFINITY,
                    };
                    (value, self.tolerances.charges)
                }
                Check::Symmetries => (symmetries_value(self, 1000)?, self.tolerances.symmetry_residual),
                Check::Quantum => (quantum_value(self, 200)?, self.tolerances.quantum),
            };
            results.push(CheckResult::new(
                check.name(),
                value,
                tolerance,
                start.elapsed().as_secs_f64(),
            ));
        }

        Ok(RunOutcome {
            report: Report {
                scenario: self.name.clone(),
                checks: results,
                versions: Versions {
                    bargmann: env!("CARGO_PKG_VERSION").to_string(),
                },
                seed: self.seed,
            },
            trajectory,
        })
    }
}

// ---- emission ----

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    let mut f = fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    f.write_all(contents.as_bytes()).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Trajectory CSV with the exact header `t,x,y,z,s,dx,dy,dz,ds,h0`,
/// 17 significant digits, newline-terminated rows.
pub fn trajectory_csv(traj: &Trajectory) -> Result<String> {
    let mut out = String::from("t,x,y,z,s,dx,dy,dz,ds,h0\n");
    for smp in &traj.samples {
        let h0 = traj.metric.internal_energy(&smp.point, &smp.velocity)?;
        let cols = [
            smp.t,
            smp.point.r.x,
            smp.point.r.y,
            smp.point.r.z,
            smp.point.s,
            smp.velocity.dr.x,
            smp.velocity.dr.y,
            smp.velocity.dr.z,
            smp.velocity.ds,
            h0,
        ];
        let row: Vec<String> = cols.iter().map(|c| fmt17(*c)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// JSON rendering of the trajectory with the same columns as the CSV.
pub fn trajectory_json(traj: &Trajectory) -> Result<String> {
    #[derive(Serialize)]
    struct Row {
        t: f64,
        x: f64,
        y: f64,
        z: f64,
        s: f64,
        dx: f64,
        dy: f64,
        dz: f64,
        ds: f64,
        h0: f64,
    }
    let mut rows = Vec::with_capacity(traj.samples.len());
    for smp in &traj.samples {
        rows.push(Row {
            t: smp.t,
            x: smp.point.r.x,
            y: smp.point.r.y,
            z: smp.point.r.z,
            s: smp.point.s,
            dx: smp.velocity.dr.x,
            dy: smp.velocity.dr.y,
            dz: smp.velocity.dr.z,
            ds: smp.velocity.ds,
            h0: traj.metric.internal_energy(&smp.point, &smp.velocity)?,
        });
    }
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    Ok(s)
}

/// Per-charge time series `t,<charge_name>` for plotting; returns
/// (file stem, contents) pairs for the 13 table charges.
pub fn charge_series(traj: &Trajectory, m: f64) -> Result<Vec<(String, String)>> {
    use crate::symmetry::ChargeTable;
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); 13];
    let mut times = Vec::new();
    for smp in &traj.samples {
        let u = traj.metric.potential().value(&smp.point.r, smp.t);
        let table = standard_charges(&smp.point, &smp.velocity, m, u);
        for (col, v) in columns.iter_mut().zip(table.values()) {
            col.push(v);
        }
        times.push(smp.t);
    }
    Ok(ChargeTable::NAMES
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut out = format!("t,{name}\n");
            for (t, v) in times.iter().zip(&columns[i]) {
                out.push_str(&fmt17(*t));
                out.push(',');
                out.push_str(&fmt17(*v));
                out.push('\n');
            }
            (format!("charge_{name}"), out)
        })
        .collect())
}

/// Writes the trajectory (CSV or JSON), the JSON report, and optionally the
/// per-charge plot series into `scenario.output_dir`.
pub fn emit_outputs(
    outcome: &RunOutcome,
    scenario: &Scenario,
    plot_data: bool,
) -> Result<Vec<PathBuf>> {
    let dir = &scenario.output_dir;
    let mut written = Vec::new();

    if let Some(traj) = &outcome.trajectory {
        let (name, contents) = match scenario.output_format {
            OutputFormat::Csv => ("trajectory.csv", trajectory_csv(traj)?),
            OutputFormat::Json => ("trajectory.json", trajectory_json(traj)?),
        };
        let path = dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);

        if plot_data {
            for (stem, contents) in charge_series(traj, scenario.mass)? {
                let path = dir.join(format!("{stem}.csv"));
                write_file(&path, &contents)?;
                written.push(path);
            }
        }
    }

    let report_path = dir.join("report.json");
    write_file(&report_path, &outcome.report.to_json())?;
    written.push(report_path);
    Ok(written)
}
