use anyhow::anyhow;
use poincare_core::dynamics::{
    evolve, kg_density_current, kg_field, kg_residual, negative_density_demo, position_density, velocity_expectation,
    Theory, TheoryId,
};
use poincare_core::kinematics::{
    gaussian_packet, position_expectation, to_position, GridSpec, MomentumGrid, PacketSpec, Placement, StateVector,
};
use poincare_core::localization::{determine_position, expected_verdict, DeterminationReport};
use poincare_core::representation::{finite_action, GroupElement, RepClass, RepSpec, Representation};
use poincare_core::verification::{run_suite, SuiteConfig, CHECK_NAMES};
use poincare_core::Error as CoreError;
use serde::Serialize;

use crate::config::{RunConfig, Schedule};
use crate::output::{slice_csv, Output};
use crate::{default_placement, Cli, Command};

/// Why a command did not succeed; maps onto the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config or names: exit 2.
    Usage(String),
    /// Anything that went wrong while computing or writing: exit 1.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::UnknownCheck(_) | CoreError::Forbidden(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

/// Runs one command. `Ok(true)` means every verdict or check passed.
pub fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Classify { forbidden } => classify(forbidden.as_deref()),
        Command::Determine { common, classes } => {
            let mut cfg = common.base_config().map_err(Failure::Usage)?;
            if !classes.is_empty() {
                cfg.classes = Some(classes);
            }
            let grid = cfg.validate().map_err(Failure::Usage)?;
            let out = Output::create(&cfg.resolve_output_dir(common.out.as_deref()))?;
            determine(&cfg, &grid, &out)
        }
        Command::Evolve { common, evolve } => {
            let mut cfg = common.base_config().map_err(Failure::Usage)?;
            evolve.apply(&mut cfg);
            let grid = cfg.validate().map_err(Failure::Usage)?;
            let theory = cfg.theory.ok_or_else(|| Failure::Usage("evolve needs a theory (--theory T1..T4)".into()))?;
            let out = Output::create(&cfg.resolve_output_dir(common.out.as_deref()))?;
            run_evolve(&cfg, &grid, theory, evolve.full, &out)
        }
        Command::DemoNegativeDensity { common } => {
            let cfg = common.base_config().map_err(Failure::Usage)?;
            let grid = cfg.validate().map_err(Failure::Usage)?;
            let out = Output::create(&cfg.resolve_output_dir(common.out.as_deref()))?;
            demo(&cfg, &grid, &out)
        }
        Command::Verify { common, only, probes } => {
            let mut cfg = common.base_config().map_err(Failure::Usage)?;
            if !only.is_empty() {
                cfg.checks = Some(only);
            }
            if let Some(k) = probes {
                cfg.probe_count = k;
            }
            cfg.validate().map_err(Failure::Usage)?;
            if let Some(bad) = cfg.checks.iter().flatten().find(|c| !CHECK_NAMES.contains(&c.as_str())) {
                return Err(Failure::Usage(format!("unknown check `{bad}`; known: {}", CHECK_NAMES.join(", "))));
            }
            let out = Output::create(&cfg.resolve_output_dir(common.out.as_deref()))?;
            verify(&cfg, &out)
        }
    }
}

fn theory_of(class: RepClass) -> Option<TheoryId> {
    TheoryId::ALL.into_iter().find(|t| t.class() == class)
}

fn classify(query: Option<&str>) -> Result<bool, Failure> {
    if let Some(q) = query {
        let parts: Vec<&str> = q.split('/').collect();
        let [spectrum, theta, pi, sign] = parts[..] else {
            return Err(Failure::Usage(format!("expected spectrum/theta/pi/sign, got `{q}`")));
        };
        let json = serde_json::json!({ "spectrum": spectrum, "theta": theta, "pi": pi, "sign_variant": sign });
        let spec: RepSpec = serde_json::from_value(json).map_err(|e| Failure::Usage(format!("bad label `{q}`: {e}")))?;
        match spec.classify() {
            Ok(class) => println!("allowed: {q} is class {class} ({})", class.case_label()),
            Err(rule) => println!("forbidden: {rule}"),
        }
        return Ok(true);
    }
    let grid = MomentumGrid::new(GridSpec::new(8, 4.0, 1.0)).map_err(|e| Failure::Runtime(e.into()))?;
    println!(
        "{:<6} {:<14} {:<10} {:<12} {:<12} {:<5} {:<18} {:<18} theory",
        "class", "case", "spectrum", "theta", "pi", "sign", "theta form", "pi form"
    );
    for class in RepClass::ALL {
        let spec = class.spec();
        let rep = Representation::of_class(class, &grid);
        let form = |a: &poincare_core::representation::AntiLinearAction| {
            format!("{}{}{}", a.matrix, if a.conjugate { " K" } else { "" }, if a.parity_flip { " Y" } else { "" })
        };
        println!(
            "{:<6} {:<14} {:<10} {:<12} {:<12} {:<5} {:<18} {:<18} {}",
            class.name(),
            class.case_label(),
            label(&spec.spectrum),
            label(&spec.theta),
            label(&spec.pi),
            label(&spec.sign_variant),
            form(rep.theta()),
            form(rep.pi()),
            theory_of(class).map_or("-".to_string(), |t| t.to_string())
        );
    }
    println!("K: complex conjugation, Y: p -> -p");
    Ok(true)
}

/// Serialized name of a label enum.
fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

#[derive(Serialize)]
struct DetermineOutput<'a> {
    seed: Option<u64>,
    grid: GridSpec,
    reports: &'a [DeterminationReport],
}

fn determine(cfg: &RunConfig, grid: &MomentumGrid, out: &Output) -> Result<bool, Failure> {
    let classes = cfg.classes.clone().unwrap_or_else(|| RepClass::ALL.to_vec());
    let reports: Vec<DeterminationReport> =
        classes.iter().map(|c| determine_position(&Representation::of_class(*c, grid))).collect();
    println!("{:<6} {:<14} {:<13} {:<13} {:>9} {:>7} {:>12}", "class", "case", "verdict", "expected", "nullspace", "shells", "F residual");
    let mut all_match = true;
    for (class, r) in classes.iter().zip(&reports) {
        let expected = expected_verdict(*class);
        all_match &= r.verdict == expected;
        let residual = r.residuals.as_ref().map_or("-".to_string(), |x| format!("{:.2e}", x.max()));
        println!(
            "{:<6} {:<14} {:<13} {:<13} {:>9} {:>7} {:>12}",
            r.class,
            r.case,
            format!("{:?}", r.verdict).to_lowercase(),
            format!("{expected:?}").to_lowercase(),
            r.max_nullspace_dim(),
            r.shells.len(),
            residual
        );
    }
    let path = out.write_json("determination.json", &DetermineOutput { seed: cfg.seed, grid: cfg.grid, reports: &reports })?;
    println!("wrote {}", path.display());
    Ok(all_match)
}

fn initial_state(cfg: &RunConfig, grid: &MomentumGrid, theory: &Theory) -> Result<StateVector, Failure> {
    let two = theory.rep().sector_count() == 2;
    let packets = if cfg.packets.is_empty() {
        vec![PacketSpec::new([0.0; 3], 1.0, default_placement(Some(theory.id())))]
    } else {
        cfg.packets.clone()
    };
    let mut total: Option<StateVector> = None;
    for p in &packets {
        let fits = match p.sector {
            Placement::Single => !two,
            Placement::Plus | Placement::Minus => two,
        };
        if !fits {
            return Err(Failure::Usage(format!("packet sector {:?} does not fit theory {}", p.sector, theory.id())));
        }
        let psi = gaussian_packet(grid, p)?;
        total = Some(match total {
            None => psi,
            Some(t) => t.add(&psi)?,
        });
    }
    let mut state = total.expect("at least one packet").normalized(grid);
    if let Some(element) = &cfg.boost {
        state = finite_action(theory.rep(), element, &state)?;
    }
    Ok(state)
}

#[derive(Serialize)]
struct EvolveResiduals {
    /// Relative Klein-Gordon residual at each snapshot.
    kg: Vec<f64>,
    kg_dt: f64,
    /// `max_j |<Q_j>(t) - <Q_j>(t_start) - v_j (t - t_start)|`.
    drift: Vec<f64>,
}

#[derive(Serialize)]
struct EvolveManifest {
    seed: Option<u64>,
    theory: TheoryId,
    grid: GridSpec,
    packets: Vec<PacketSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boost: Option<GroupElement>,
    schedule: Schedule,
    times: Vec<f64>,
    norms: Vec<f64>,
    centroids: Vec<[f64; 3]>,
    velocity: [f64; 3],
    residuals: EvolveResiduals,
    files: Vec<String>,
}

fn file_name(path: &std::path::Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn run_evolve(cfg: &RunConfig, grid: &MomentumGrid, id: TheoryId, full: bool, out: &Output) -> Result<bool, Failure> {
    let theory = Theory::new(id, grid);
    let psi0 = initial_state(cfg, grid, &theory)?;
    let times = cfg.schedule.times();
    let velocity: [f64; 3] = std::array::from_fn(|a| velocity_expectation(&theory, &psi0, a));
    let top_p0 = grid.p0().iter().fold(0.0f64, |m, e| m.max(*e));
    let kg_dt = 0.2 / top_p0;
    let mid = grid.n() / 2;
    let mut manifest = EvolveManifest {
        seed: cfg.seed,
        theory: id,
        grid: cfg.grid,
        packets: cfg.packets.clone(),
        boost: cfg.boost,
        schedule: cfg.schedule,
        times: times.clone(),
        norms: Vec::new(),
        centroids: Vec::new(),
        velocity,
        residuals: EvolveResiduals { kg: Vec::new(), kg_dt, drift: Vec::new() },
        files: Vec::new(),
    };
    for (k, &t) in times.iter().enumerate() {
        let psi = evolve(&theory, &psi0, t)?;
        let x = to_position(grid, &psi)?;
        let rho = position_density(&theory, &x)?;
        let centre: [f64; 3] = std::array::from_fn(|a| position_expectation(grid, &x, a));
        manifest.norms.push(psi.norm(grid));
        manifest.residuals.kg.push(kg_residual(&theory, &psi0, t, kg_dt)?);
        if let Some(first) = manifest.centroids.first() {
            let dt = t - times[0];
            let d = (0..3).map(|a| (centre[a] - first[a] - velocity[a] * dt).abs()).fold(0.0, f64::max);
            manifest.residuals.drift.push(d);
        } else {
            manifest.residuals.drift.push(0.0);
        }
        manifest.centroids.push(centre);
        let path = out.write_text(&format!("density-{k:03}.csv"), &slice_csv(grid, &rho.values, mid))?;
        manifest.files.push(file_name(&path));
        if full {
            let path = out.write_state(&format!("state-{k:03}"), &psi)?;
            manifest.files.push(file_name(&path));
        }
    }
    let path = out.write_json("evolve.json", &manifest)?;
    println!("theory {id}, {} snapshot(s), velocity {:?}", times.len(), velocity);
    for (k, t) in times.iter().enumerate() {
        println!(
            "t = {t:>8.4}  norm {:.12}  kg residual {:.2e}  drift {:.2e}",
            manifest.norms[k], manifest.residuals.kg[k], manifest.residuals.drift[k]
        );
    }
    println!("wrote {}", path.display());
    Ok(true)
}

#[derive(Serialize)]
struct Extremum {
    value: f64,
    x: [f64; 3],
}

#[derive(Serialize)]
struct DemoManifest {
    seed: Option<u64>,
    grid: GridSpec,
    theory: TheoryId,
    min_rho_hat: Extremum,
    min_rho: Extremum,
    rho_integral: f64,
    charge_times: Vec<f64>,
    charge: Vec<f64>,
    charge_drift: f64,
    files: Vec<String>,
}

fn demo(cfg: &RunConfig, grid: &MomentumGrid, out: &Output) -> Result<bool, Failure> {
    let theory = Theory::new(TheoryId::T3, grid);
    let state = negative_density_demo(grid)?;
    let (psi, dpsi) = kg_field(&theory, &state)?;
    let rho_hat = kg_density_current(grid, &psi, &dpsi, grid.mu());
    let rho = position_density(&theory, &to_position(grid, &state)?)?;
    let (hat_at, hat_min) = rho_hat.min();
    let (rho_at, rho_min) = rho.min();
    let charge_times = vec![0.0, 0.5, 1.0, 2.0];
    let charge: Vec<f64> = charge_times
        .iter()
        .map(|&t| -> Result<f64, Failure> {
            let (f, d) = kg_field(&theory, &evolve(&theory, &state, t)?)?;
            Ok(kg_density_current(grid, &f, &d, grid.mu()).integral(grid))
        })
        .collect::<Result<_, _>>()?;
    let charge_drift = charge.iter().map(|q| (q - charge[0]).abs()).fold(0.0, f64::max);
    let plane = grid.unravel(hat_at)[2];
    let files = vec![
        file_name(&out.write_state("demo-state", &state)?),
        file_name(&out.write_text("rho-hat.csv", &slice_csv(grid, &rho_hat.values, plane))?),
        file_name(&out.write_text("rho.csv", &slice_csv(grid, &rho.values, plane))?),
    ];
    let manifest = DemoManifest {
        seed: cfg.seed,
        grid: cfg.grid,
        theory: TheoryId::T3,
        min_rho_hat: Extremum { value: hat_min, x: grid.position(hat_at) },
        min_rho: Extremum { value: rho_min, x: grid.position(rho_at) },
        rho_integral: rho.integral(grid),
        charge_times,
        charge,
        charge_drift,
        files,
    };
    let path = out.write_json("demo.json", &manifest)?;
    println!("min rho_hat = {hat_min:.6e} at x = {:?}", manifest.min_rho_hat.x);
    println!("min rho (T3) = {rho_min:.3e}, integral {:.12}", manifest.rho_integral);
    println!("integral of rho_hat drifts by {charge_drift:.2e} over t in [0, 2]");
    println!("wrote {}", path.display());
    Ok(hat_min < 0.0 && rho_min >= 0.0)
}

fn verify(cfg: &RunConfig, out: &Output) -> Result<bool, Failure> {
    let suite = SuiteConfig {
        grid: cfg.grid,
        seed: cfg.seed.ok_or_else(|| anyhow!("seed is required"))?,
        probe_count: cfg.probe_count,
        checks: cfg.checks.clone(),
    };
    let report = run_suite(&suite)?;
    println!("{:<36} {:<5} {:>11} {:>9}", "check", "pass", "max", "tol");
    for c in &report.checks {
        println!(
            "{:<36} {:<5} {:>11.3e} {:>9.1e}",
            c.check,
            if c.pass { "yes" } else { "NO" },
            c.max_residual(),
            c.tolerance
        );
    }
    let path = out.write_json("report.json", &report)?;
    println!("{} of {} checks passed; wrote {}", report.checks.iter().filter(|c| c.pass).count(), report.checks.len(), path.display());
    Ok(report.pass)
}
