use num_complex::Complex64;

use super::consistency::{generator_quotients, Subgroup};
use super::report::{CheckReport, ToleranceBasis};
use super::suite::Context;
use crate::dynamics::{
    continuity_residual, energy_expectation, evolve, feshbach_villars, kg_density_current, kg_field, kg_residual,
    negative_density_demo, position_density, velocity_expectation, DensityField, FvVariant, Theory, TheoryId,
};
use crate::error::Result;
use crate::kinematics::{
    build_grid, gaussian_packet, inner_product, momentum_expectation, position_expectation, to_momentum, to_position, MomentumGrid,
    PacketSpec, Placement, StateVector,
};
use crate::localization::{
    build_constraint_system, determine_position, exact_rank, expected_nullspace_dim, expected_verdict, lattice_shells,
    newton_wigner_apply, reference_satisfies, Condition,
};
use crate::representation::{
    apply_generator, apply_pi, apply_theta, finite_action, make_rep, sector_project, AntiLinearAction, Character,
    Forbidden, Generator, GroupElement, RepClass, RepSpec, Representation, Sector, SignVariant, Spectrum,
};

/// Registered checks, sorted by name.
pub const CHECK_NAMES: [&str; 22] = [
    "anti-linear-coherence",
    "boost-expectation",
    "canonical-commutator",
    "classification-gate",
    "continuity",
    "density-positivity",
    "energy-sign",
    "fv-identity",
    "generator-commutators",
    "generator-consistency-exact",
    "generator-consistency-interpolated",
    "kg-containment",
    "kg-residual",
    "mass-shell",
    "negative-kg-density",
    "newton-wigner-symmetry",
    "packet-velocity",
    "position-determination",
    "rotation-identity",
    "sector-projection",
    "symmetry-generators",
    "time-evolution-unitarity",
];

/// Minimum of the Klein–Gordon density of the demo state on the default
/// 32³ lattice (`p_max = 10`, `μ = 1`), recorded from direct evaluation.
pub const DEMO_MIN_RHO_HAT: f64 = -6.297_457_940_431_119e-1;

pub(crate) fn run_check(name: &str, ctx: &Context) -> Result<CheckReport> {
    let report = match name {
        "anti-linear-coherence" => anti_linear_coherence(ctx)?,
        "boost-expectation" => boost_expectation(ctx)?,
        "canonical-commutator" => canonical_commutator(ctx)?,
        "classification-gate" => classification_gate(),
        "continuity" => continuity(ctx)?,
        "density-positivity" => density_positivity(ctx)?,
        "energy-sign" => energy_sign(ctx)?,
        "fv-identity" => fv_identity(ctx)?,
        "generator-commutators" => generator_commutators(ctx)?,
        "generator-consistency-exact" => generator_consistency(ctx, true)?,
        "generator-consistency-interpolated" => generator_consistency(ctx, false)?,
        "kg-containment" => kg_containment(ctx)?,
        "kg-residual" => kg_residual_check(ctx)?,
        "mass-shell" => mass_shell(ctx)?,
        "negative-kg-density" => negative_kg_density(ctx)?,
        "newton-wigner-symmetry" => newton_wigner_symmetry(ctx)?,
        "packet-velocity" => packet_velocity(ctx)?,
        "position-determination" => position_determination(ctx),
        "rotation-identity" => rotation_identity(ctx)?,
        "sector-projection" => sector_projection(ctx)?,
        "symmetry-generators" => symmetry_generators(ctx)?,
        "time-evolution-unitarity" => time_evolution_unitarity(ctx)?,
        other => return Err(crate::error::Error::UnknownCheck(other.to_string())),
    };
    Ok(report.finish())
}

fn rel(a: &StateVector, b: &StateVector, reference: &StateVector, grid: &MomentumGrid) -> Result<f64> {
    Ok(a.sub(b)?.norm(grid) / reference.norm(grid))
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `S(αψ)` against `α·Sψ` (unitary) or `ᾱ·Sψ` (anti-unitary), bit for bit.
fn anti_linear_coherence(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "anti-linear-coherence",
        "anti-unitary symmetries conjugate scalars, unitary ones do not",
        0.0,
        ToleranceBasis::Exact,
    );
    let alphas = [Complex64::new(0.3, -1.7), Complex64::new(-2.1, 0.4)];
    for rep in &ctx.reps {
        for (k, psi) in ctx.states(rep).iter().enumerate() {
            for (name, action) in [("theta", rep.theta()), ("pi", rep.pi())] {
                let mut worst: f64 = 0.0;
                for alpha in alphas {
                    let lhs = action.apply(&ctx.grid, &psi.scale(alpha));
                    let factor = if action.is_antiunitary() { alpha.conj() } else { alpha };
                    let rhs = action.apply(&ctx.grid, psi).scale(factor);
                    let mismatch = lhs
                        .sectors()
                        .iter()
                        .zip(rhs.sectors())
                        .flat_map(|(a, b)| a.iter().zip(b))
                        .filter(|(a, b)| a != b)
                        .count();
                    worst = worst.max(mismatch as f64);
                }
                r.push(format!("{}/{name}/{}", rep.class(), ctx.probe_id(k)), worst);
            }
        }
    }
    Ok(r)
}

/// `⟨P₃⟩` after a boost of rapidity `φ` along axis 3 against
/// `cosh φ ⟨P₃⟩ + sinh φ ⟨P₀⟩` evaluated on the unboosted state.
fn boost_expectation(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "boost-expectation",
        "boosted momentum expectation follows the Lorentz map",
        1e-3,
        ToleranceBasis::InterpolationOrder,
    );
    let phi: f64 = 0.1;
    let p3 = ctx.grid.momentum_component(2);
    for class in [RepClass::Up, RepClass::Down, RepClass::U3] {
        let rep = ctx.rep(class);
        for (k, psi) in ctx.states(rep).iter().enumerate() {
            let boosted = finite_action(rep, &GroupElement::Boost { axis: [0.0, 0.0, 1.0], rapidity: phi }, psi)?;
            let got = momentum_expectation(&ctx.grid, &boosted, &p3, None);
            let e0 = momentum_expectation(&ctx.grid, psi, ctx.grid.p0(), Some(rep.sector_signs()));
            let want = phi.cosh() * momentum_expectation(&ctx.grid, psi, &p3, None) + phi.sinh() * e0;
            r.push(format!("{class}/{}", ctx.probe_id(k)), (got - want).abs());
        }
    }
    Ok(r)
}

fn position_multiply(grid: &MomentumGrid, s: &StateVector, axis: usize) -> StateVector {
    let x = grid.axis_positions();
    s.map_sectors(|_, v| v.iter().enumerate().map(|(i, z)| z * x[grid.unravel(i)[axis]]).collect())
}

fn position_momentum(grid: &MomentumGrid, s: &StateVector, axis: usize) -> Result<StateVector> {
    let p = grid.momentum_component(axis);
    to_position(grid, &to_momentum(grid, s)?.multiply(&p))
}

/// `[Q̂_j, P̂_k] = iδ_jk` in the position representation: `Q̂` multiplies by
/// `x_j`, `P̂ = Z P Z⁻¹`.
fn canonical_commutator(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "canonical-commutator",
        "[Q_j, P_k] = i delta_jk",
        1e-9,
        ToleranceBasis::TransformRoundoff,
    );
    let g = &ctx.grid;
    for class in [RepClass::Up, RepClass::U3] {
        let rep = ctx.rep(class);
        for (k, psi) in ctx.states(rep).iter().enumerate() {
            let x = to_position(g, psi)?;
            let mut worst: f64 = 0.0;
            for j in 0..3 {
                for l in 0..3 {
                    let qp = position_multiply(g, &position_momentum(g, &x, l)?, j);
                    let pq = position_momentum(g, &position_multiply(g, &x, j), l)?;
                    let mut c = qp.sub(&pq)?;
                    if j == l {
                        c = c.sub(&x.scale(I))?;
                    }
                    worst = worst.max(c.norm(g) / x.norm(g));
                }
            }
            r.push(format!("{class}/{}", ctx.probe_id(k)), worst);
        }
    }
    Ok(r)
}

/// The violated rule, decided directly from the spectrum/character
/// constraints rather than through the classifier.
fn violated_rules(spec: &RepSpec) -> Vec<Forbidden> {
    let one_sided = spec.spectrum != Spectrum::Symmetric;
    let mut out = Vec::new();
    if spec.theta == Character::Unitary && one_sided {
        out.push(Forbidden::UnitaryTimeReversal);
    }
    if spec.pi == Character::Antiunitary && one_sided {
        out.push(Forbidden::AntiunitarySpaceInversion);
    }
    if !one_sided && spec.theta == Character::Antiunitary && spec.pi == Character::Unitary {
        out.push(Forbidden::OneSidedSpectrumRequired);
    }
    if out.is_empty() && one_sided && spec.sign_variant == SignVariant::Minus {
        out.push(Forbidden::RedundantSignVariant);
    }
    out
}

fn classification_gate() -> CheckReport {
    let mut r = CheckReport::new(
        "classification-gate",
        "8 constructible classes among 24 label combinations",
        0.0,
        ToleranceBasis::Exact,
    );
    let grid = build_grid(8, 4.0, 1.0).expect("fixed grid is valid");
    let mut built = 0usize;
    let mut spectral = 0usize;
    for spec in RepSpec::enumerate_all() {
        let id = format!(
            "{}/{}/{}/{}",
            serde_json::to_value(spec.spectrum).unwrap().as_str().unwrap(),
            serde_json::to_value(spec.theta).unwrap().as_str().unwrap(),
            serde_json::to_value(spec.pi).unwrap().as_str().unwrap(),
            serde_json::to_value(spec.sign_variant).unwrap().as_str().unwrap()
        );
        let violated = violated_rules(&spec);
        let ok = match make_rep(spec, &grid) {
            Ok(_) => {
                built += 1;
                violated.is_empty()
            }
            Err(crate::error::Error::Forbidden(rule)) => {
                spectral += rule.is_spectral_rule() as usize;
                violated.contains(&rule)
            }
            Err(_) => false,
        };
        r.push(id, if ok { 0.0 } else { 1.0 });
    }
    r.push("constructible-count", (built as f64 - 8.0).abs());
    r.detail("constructible", built as f64);
    r.detail("rejected", (24 - built) as f64);
    r.detail("rejected-by-spectral-rule", spectral as f64);
    r
}

fn kg_series(theory: &Theory, psi: &StateVector, t0: f64, dt: f64) -> Result<Vec<DensityField>> {
    (-1..=1)
        .map(|k| {
            let s = evolve(theory, psi, t0 + f64::from(k) * dt)?;
            let (f, d) = kg_field(theory, &s)?;
            Ok(kg_density_current(theory.grid(), &f, &d, theory.grid().mu()))
        })
        .collect()
}

/// Richardson ratio of the continuity residual under halving of `dt`.
fn continuity(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "continuity",
        "d(rho_hat)/dt + div(j_hat) = 0, second order in dt",
        0.4,
        ToleranceBasis::FiniteDifferenceOrder,
    );
    let g = &ctx.grid;
    let dt = 0.1;
    let t1 = Theory::new(TheoryId::T1, g);
    let a = gaussian_packet(g, &PacketSpec::new([1.2, 0.0, 0.0], 1.0, Placement::Single).with_offset([-0.8, 0.0, 0.0]))?;
    let b = gaussian_packet(g, &PacketSpec::new([-0.6, 0.3, 0.0], 1.0, Placement::Single).with_offset([0.8, 0.2, 0.0]))?;
    let mut cases = vec![("T1/two-packet".to_string(), t1, a.add(&b)?.normalized(g))];
    let t3 = Theory::new(TheoryId::T3, g);
    for (k, psi) in ctx.two_sector.iter().enumerate() {
        if ctx.probes.probes[k].occupancy == super::Occupancy::Both {
            cases.push((format!("T3/{}", ctx.probe_id(k)), t3.clone(), psi.clone()));
        }
    }
    let mut worst_reversed: f64 = 0.0;
    for (id, theory, psi) in cases {
        let coarse = continuity_residual(g, &kg_series(&theory, &psi, 0.3, dt)?, dt)?;
        let fine = continuity_residual(g, &kg_series(&theory, &psi, 0.3, dt / 2.0)?, dt / 2.0)?;
        let ratio = coarse.standard / fine.standard;
        worst_reversed = worst_reversed.max(fine.reversed);
        r.push_with_order(id.clone(), (ratio - 4.0).abs(), ratio.log2());
        r.detail(format!("{id}/standard-residual"), fine.standard);
        r.detail(format!("{id}/reversed-sign-residual"), fine.reversed);
    }
    r.detail("worst-reversed-sign-residual", worst_reversed);
    Ok(r)
}

fn density_positivity(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "density-positivity",
        "position density of the completed theories is non-negative with unit integral",
        1e-10,
        ToleranceBasis::TransformRoundoff,
    );
    let g = &ctx.grid;
    for id in TheoryId::ALL {
        let theory = Theory::new(id, g);
        for (k, psi) in ctx.states(theory.rep()).iter().enumerate() {
            let mut worst: f64 = 0.0;
            for t in [0.0, 1.0 / g.mu()] {
                let x = to_position(g, &evolve(&theory, psi, t)?)?;
                let rho = position_density(&theory, &x)?;
                let (_, min) = rho.min();
                worst = worst.max((rho.integral(g) - 1.0).abs()).max((-min).max(0.0));
            }
            r.push(format!("{id}/{}", ctx.probe_id(k)), worst);
        }
    }
    let t3 = Theory::new(TheoryId::T3, g);
    let demo = to_position(g, &negative_density_demo(g)?)?;
    let rho = position_density(&t3, &demo)?;
    r.push("T3/demo-state", (rho.integral(g) - 1.0).abs().max((-rho.min().1).max(0.0)));
    Ok(r)
}

fn energy_sign(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "energy-sign",
        "one-sided theories keep <P0> on their side of the mass gap",
        0.0,
        ToleranceBasis::ExactDiagonal,
    );
    let mu = ctx.grid.mu();
    for id in [TheoryId::T1, TheoryId::T2] {
        let theory = Theory::new(id, &ctx.grid);
        for (k, psi) in ctx.one_sector.iter().enumerate() {
            let e = energy_expectation(&theory, psi);
            let violation = if id == TheoryId::T1 { mu - e } else { e + mu };
            r.push(format!("{id}/{}", ctx.probe_id(k)), violation.max(0.0));
        }
    }
    Ok(r)
}

fn fv_identity(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "fv-identity",
        "two-component form reproduces the Klein-Gordon density and inverts exactly",
        1e-9,
        ToleranceBasis::TransformRoundoff,
    );
    let g = &ctx.grid;
    let mut cases = Vec::new();
    let t1 = Theory::new(TheoryId::T1, g);
    let t3 = Theory::new(TheoryId::T3, g);
    for (k, psi) in ctx.one_sector.iter().enumerate() {
        cases.push((format!("T1/{}", ctx.probe_id(k)), kg_field(&t1, psi)?));
    }
    for (k, psi) in ctx.two_sector.iter().enumerate() {
        cases.push((format!("T3/{}", ctx.probe_id(k)), kg_field(&t3, psi)?));
    }
    for (id, (psi, dpsi)) in cases {
        let rho = kg_density_current(g, &psi, &dpsi, g.mu());
        let scale = rho.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let fv = feshbach_villars(&psi, &dpsi, g.mu(), FvVariant::Corrected);
        let identity = fv
            .difference_density()
            .iter()
            .zip(&rho.values)
            .fold(0.0f64, |m, (d, v)| m.max((d - 2.0 * v).abs()))
            / scale;
        let (back, dback) = fv.inverse();
        let amp = psi.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let damp = dpsi.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let recon = back.iter().zip(&psi).fold(0.0f64, |m, (a, b)| m.max((a - b).norm())) / amp;
        let drecon = dback.iter().zip(&dpsi).fold(0.0f64, |m, (a, b)| m.max((a - b).norm())) / damp;
        r.push(id, identity.max(recon).max(drecon));
    }
    Ok(r)
}

/// `[J_l, P_j] = iε_ljk P_k`, `[P_j, P_k] = 0`, `[J_l, F_j] = iε_ljk F_k`, and
/// `Jψ = 0` for rotation-invariant packets.
fn generator_commutators(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "generator-commutators",
        "[J_l, P_j] = i eps_ljk P_k and [J_l, Q_j] = i eps_ljk Q_k",
        1e-6,
        ToleranceBasis::FiniteDifferenceOrder,
    );
    let g = &ctx.grid;
    let eps = |l: usize, j: usize, k: usize| -> f64 {
        match (l, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (1, 0, 2) | (2, 1, 0) => -1.0,
            _ => 0.0,
        }
    };
    for class in [RepClass::Up, RepClass::U3] {
        let rep = ctx.rep(class);
        for (n, psi) in ctx.states(rep).iter().enumerate() {
            let norm = psi.norm(g);
            let mut jp: f64 = 0.0;
            let mut pp: f64 = 0.0;
            let mut jq: f64 = 0.0;
            for l in 0..3 {
                let jl = Generator::rotation(l);
                let j_psi = apply_generator(rep, jl, psi)?;
                for j in 0..3 {
                    let pj = Generator::momentum(j);
                    let a = apply_generator(rep, jl, &apply_generator(rep, pj, psi)?)?;
                    let b = apply_generator(rep, pj, &j_psi)?;
                    let mut expected = StateVector::zeros(g, psi.kind(), psi.sector_count());
                    let mut expected_q = expected.clone();
                    for k in 0..3 {
                        let e = eps(l, j, k);
                        if e != 0.0 {
                            expected = apply_generator(rep, Generator::momentum(k), psi)?.scale(I * e);
                            expected_q = newton_wigner_apply(rep, k, psi)?.scale(I * e);
                        }
                    }
                    jp = jp.max(a.sub(&b)?.sub(&expected)?.norm(g) / norm);
                    let pk = apply_generator(rep, Generator::momentum((j + 1) % 3), psi)?;
                    let c = apply_generator(rep, pj, &pk)?
                        .sub(&apply_generator(rep, Generator::momentum((j + 1) % 3), &apply_generator(rep, pj, psi)?)?)?;
                    pp = pp.max(c.norm(g) / norm);
                    let qa = apply_generator(rep, jl, &newton_wigner_apply(rep, j, psi)?)?;
                    let qb = newton_wigner_apply(rep, j, &j_psi)?;
                    jq = jq.max(qa.sub(&qb)?.sub(&expected_q)?.norm(g) / norm);
                }
            }
            let id = ctx.probe_id(n);
            r.push(format!("{class}/{id}/J-P"), jp);
            r.push(format!("{class}/{id}/P-P"), pp);
            r.push(format!("{class}/{id}/J-Q"), jq);
        }
        // a centred packet with no offset is rotation invariant
        let placement = if rep.sector_count() == 1 { Placement::Single } else { Placement::Plus };
        let round = gaussian_packet(g, &PacketSpec::new([0.0; 3], 1.0, placement))?;
        let mut worst: f64 = 0.0;
        for l in 0..3 {
            worst = worst.max(apply_generator(rep, Generator::rotation(l), &round)?.norm(g));
        }
        r.push(format!("{class}/centred/J"), worst);
    }
    Ok(r)
}

/// Base parameter for the difference quotients.
const EXACT_EPS: f64 = 1e-4;
const INTERPOLATED_EPS: f64 = 1e-2;

fn generator_consistency(ctx: &Context, exact: bool) -> Result<CheckReport> {
    let (name, tolerance, basis, eps) = if exact {
        ("generator-consistency-exact", 1e-3, ToleranceBasis::FiniteDifferenceOrder, EXACT_EPS)
    } else {
        // one-sided interpolation of lattice data leaves an O(Δ) floor
        ("generator-consistency-interpolated", ctx.grid.delta(), ToleranceBasis::InterpolationOrder, INTERPOLATED_EPS)
    };
    let mut r = CheckReport::new(name, "one-parameter subgroups exp(-i s G) match their generators", tolerance, basis);
    for rep in &ctx.reps {
        for sub in Subgroup::ALL.into_iter().filter(|s| s.is_exact() == exact) {
            for (k, psi) in ctx.states(rep).iter().enumerate() {
                let c = generator_quotients(rep, sub, psi, eps)?;
                // two decimals: the estimator itself carries O(ε²) noise
                let order = (c.order * 100.0).round() / 100.0;
                r.push_with_order(format!("{}/{sub}/{}", rep.class(), ctx.probe_id(k)), c.residuals[2], order);
            }
        }
    }
    r.require_order(1.0);
    r.detail("base-parameter", eps);
    Ok(r)
}

/// A Klein–Gordon solution mixing both frequency signs is not a trajectory
/// of the one-sided theory.
fn kg_containment(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "kg-containment",
        "mixed-frequency Klein-Gordon solutions lie outside the one-sided theory",
        0.0,
        ToleranceBasis::Exact,
    );
    let g = &ctx.grid;
    let t1 = Theory::new(TheoryId::T1, g);
    let t3 = Theory::new(TheoryId::T3, g);
    let mut cases = vec![("demo-state".to_string(), negative_density_demo(g)?)];
    for (k, psi) in ctx.two_sector.iter().enumerate() {
        if ctx.probes.probes[k].occupancy == super::Occupancy::Both {
            cases.push((ctx.probe_id(k), psi.clone()));
        }
    }
    let t = 1.0 / g.mu();
    for (id, psi) in cases {
        let (mixed, _) = kg_field(&t3, &evolve(&t3, &psi, t)?)?;
        let upper = sector_project(t3.rep(), &psi, Sector::Plus)?;
        let single = StateVector::single(g, crate::kinematics::RepKind::Momentum, upper.sectors()[0].clone())?;
        let (one_sided, _) = kg_field(&t1, &evolve(&t1, &single, t)?)?;
        let num: f64 = mixed.iter().zip(&one_sided).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = mixed.iter().map(|a| a.norm_sqr()).sum();
        let discrepancy = (num / den).sqrt();
        r.push(id.clone(), (0.1 - discrepancy).max(0.0));
        r.detail(format!("{id}/discrepancy"), discrepancy);
    }
    Ok(r)
}

fn kg_residual_check(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "kg-residual",
        "evolved states solve the Klein-Gordon equation, second order in dt",
        0.4,
        ToleranceBasis::FiniteDifferenceOrder,
    );
    let g = &ctx.grid;
    // keeps max p0*dt well inside the asymptotic range on the probes' support
    let dt = 0.02;
    for id in TheoryId::ALL {
        let theory = Theory::new(id, g);
        for (k, psi) in ctx.states(theory.rep()).iter().enumerate() {
            let coarse = kg_residual(&theory, psi, 0.5, dt)?;
            let fine = kg_residual(&theory, psi, 0.5, dt / 2.0)?;
            let ratio = coarse / fine;
            r.push_with_order(format!("{id}/{}", ctx.probe_id(k)), (ratio - 4.0).abs(), ratio.log2());
        }
    }
    r.detail("dt", dt);
    Ok(r)
}

fn mass_shell(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "mass-shell",
        "P0^2 - P^2 = mu^2",
        1e-10,
        ToleranceBasis::ExactDiagonal,
    );
    let shell = |rep: &Representation, psi: &StateVector| -> Result<f64> {
        let g = rep.grid();
        let p0 = apply_generator(rep, Generator::P0, psi)?;
        let mut acc = apply_generator(rep, Generator::P0, &p0)?;
        for j in 0..3 {
            let pj = apply_generator(rep, Generator::momentum(j), psi)?;
            acc = acc.sub(&apply_generator(rep, Generator::momentum(j), &pj)?)?;
        }
        let mu2 = g.mu() * g.mu();
        Ok(acc.sub(&psi.scale(Complex64::new(mu2, 0.0)))?.norm(g) / psi.norm(g))
    };
    for rep in &ctx.reps {
        for (k, psi) in ctx.states(rep).iter().enumerate() {
            r.push(format!("{}/{}", rep.class(), ctx.probe_id(k)), shell(rep, psi)?);
        }
    }
    let spec = ctx.grid.spec();
    let heavy = build_grid(spec.n, spec.p_max, 2.0 * spec.mu)?;
    for class in [RepClass::Up, RepClass::U3] {
        let rep = Representation::of_class(class, &heavy);
        for (k, psi) in ctx.probes.states(&heavy, rep.sector_count())?.iter().enumerate() {
            r.push(format!("{class}/mass-doubled/{}", ctx.probe_id(k)), shell(&rep, psi)?);
        }
    }
    Ok(r)
}

/// The mixed-frequency demo: `min ρ̂ < 0`, its recorded value, and
/// conservation of `∫ρ̂`.
fn negative_kg_density(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "negative-kg-density",
        "the Klein-Gordon density of a mixed-frequency solution goes negative",
        1e-8,
        ToleranceBasis::TransformRoundoff,
    );
    let g = &ctx.grid;
    let t3 = Theory::new(TheoryId::T3, g);
    let demo = negative_density_demo(g)?;
    let (psi, dpsi) = kg_field(&t3, &demo)?;
    let rho_hat = kg_density_current(g, &psi, &dpsi, g.mu());
    let (at, min) = rho_hat.min();
    r.push("min-is-negative", if min < 0.0 { 0.0 } else { 1.0 });
    r.detail("min-rho-hat", min);
    let x = g.position(at);
    r.detail("min-x1", x[0]);
    r.detail("min-x2", x[1]);
    r.detail("min-x3", x[2]);
    if g.spec() == crate::kinematics::GridSpec::new(32, 10.0, 1.0) {
        r.push("recorded-value", ((min - DEMO_MIN_RHO_HAT) / DEMO_MIN_RHO_HAT).abs());
    }
    let q0 = rho_hat.integral(g);
    let mut drift: f64 = 0.0;
    for t in [0.25, 0.5, 1.0, 2.0] {
        let (f, d) = kg_field(&t3, &evolve(&t3, &demo, t)?)?;
        drift = drift.max((kg_density_current(g, &f, &d, g.mu()).integral(g) - q0).abs());
    }
    r.push("charge-conservation", drift);
    r.detail("charge", q0);
    Ok(r)
}

fn newton_wigner_symmetry(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "newton-wigner-symmetry",
        "time reversal commutes and space inversion anticommutes with F",
        1e-8,
        ToleranceBasis::TransformRoundoff,
    );
    let g = &ctx.grid;
    for rep in &ctx.reps {
        for (k, psi) in ctx.states(rep).iter().enumerate() {
            let (mut theta, mut pi): (f64, f64) = (0.0, 0.0);
            for axis in 0..3 {
                let f_psi = newton_wigner_apply(rep, axis, psi)?;
                let tf = apply_theta(rep, &f_psi)?;
                let ft = newton_wigner_apply(rep, axis, &apply_theta(rep, psi)?)?;
                theta = theta.max(rel(&tf, &ft, psi, g)?);
                let pf = apply_pi(rep, &f_psi)?;
                let fp = newton_wigner_apply(rep, axis, &apply_pi(rep, psi)?)?;
                pi = pi.max(pf.add(&fp)?.norm(g) / psi.norm(g));
            }
            r.push(format!("{}/theta/{}", rep.class(), ctx.probe_id(k)), theta);
            r.push(format!("{}/pi/{}", rep.class(), ctx.probe_id(k)), pi);
        }
    }
    Ok(r)
}

/// Finite-difference `d⟨Q̂⟩/dt` against `⟨s·p/p₀⟩` over `t ∈ [0, 1/μ]`.
fn packet_velocity(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "packet-velocity",
        "d<Q>/dt = <p/p0> under exact evolution",
        1e-3,
        ToleranceBasis::FiniteDifferenceOrder,
    );
    let g = &ctx.grid;
    let steps = 4;
    let h = 1.0 / g.mu() / steps as f64;
    for id in TheoryId::ALL {
        let theory = Theory::new(id, g);
        for (k, psi) in ctx.states(theory.rep()).iter().enumerate() {
            let centres: Vec<[f64; 3]> = (0..=steps)
                .map(|n| {
                    let x = to_position(g, &evolve(&theory, psi, n as f64 * h)?)?;
                    Ok(std::array::from_fn(|a| position_expectation(g, &x, a)))
                })
                .collect::<Result<_>>()?;
            let mut worst: f64 = 0.0;
            for a in 0..3 {
                let v = velocity_expectation(&theory, psi, a);
                for n in 1..steps {
                    let fd = (centres[n + 1][a] - centres[n - 1][a]) / (2.0 * h);
                    worst = worst.max((fd - v).abs());
                }
            }
            r.push(format!("{id}/{}", ctx.probe_id(k)), worst);
        }
    }
    Ok(r)
}

fn position_determination(ctx: &Context) -> CheckReport {
    let mut r = CheckReport::new(
        "position-determination",
        "symmetry conditions fix the position operator exactly in four classes",
        0.0,
        ToleranceBasis::Exact,
    );
    for rep in &ctx.reps {
        let class = rep.class();
        let report = determine_position(rep);
        let shells = lattice_shells(rep);
        let mut mismatches = 0usize;
        for (shell, result) in shells.iter().zip(&report.shells) {
            let system = build_constraint_system(rep, *shell);
            let rows: Vec<Vec<i64>> = system.rows.iter().map(|row| row.coefficients.clone()).collect();
            let oracle = system.dim - exact_rank(&rows);
            mismatches += (oracle != result.nullspace_dim) as usize;
            mismatches += (expected_nullspace_dim(class) != result.nullspace_dim) as usize;
        }
        mismatches += (report.verdict != expected_verdict(class)) as usize;
        let reference = reference_satisfies(rep.theta(), Condition::ThetaCommutes)
            && reference_satisfies(rep.pi(), Condition::PiAnticommutes);
        mismatches += (!reference) as usize;
        // the rows do not depend on the shell
        let sample = [shells[0], shells[shells.len() / 2], shells[shells.len() - 1]];
        let keys: Vec<_> = sample.iter().map(|s| build_constraint_system(rep, *s).rows_key()).collect();
        mismatches += (keys[0] != keys[1] || keys[1] != keys[2]) as usize;
        r.push(format!("{class}/{}", class.case_label()), mismatches as f64);
        r.detail(format!("{class}/nullspace-dim"), report.max_nullspace_dim() as f64);
    }
    r
}

fn rotation_identity(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "rotation-identity",
        "a full turn acts as the identity on spin-0 states",
        1e-6,
        ToleranceBasis::InterpolationOrder,
    );
    let axes = [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, -2.0, 0.5]];
    for class in [RepClass::Up, RepClass::U3] {
        let rep = ctx.rep(class);
        for (k, psi) in ctx.states(rep).iter().enumerate() {
            let mut worst: f64 = 0.0;
            for axis in axes {
                let turned = finite_action(
                    rep,
                    &GroupElement::Rotation { axis, angle: 2.0 * std::f64::consts::PI },
                    psi,
                )?;
                worst = worst.max(rel(&turned, psi, psi, &ctx.grid)?);
            }
            r.push(format!("{class}/{}", ctx.probe_id(k)), worst);
        }
    }
    Ok(r)
}

fn sector_projection(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "sector-projection",
        "sector projections are complementary and commute with the connected group",
        1e-8,
        ToleranceBasis::ExactDiagonal,
    );
    let g = &ctx.grid;
    let elements = [
        GroupElement::Boost { axis: [0.3, -0.2, 1.0], rapidity: 0.2 },
        GroupElement::Rotation { axis: [1.0, 1.0, 0.0], angle: 0.7 },
        GroupElement::Translation { time: 0.4, space: [0.1, -0.3, 0.2] },
    ];
    for rep in ctx.reps.iter().filter(|rep| rep.sector_count() == 2) {
        for (k, psi) in ctx.two_sector.iter().enumerate() {
            let plus = sector_project(rep, psi, Sector::Plus)?;
            let minus = sector_project(rep, psi, Sector::Minus)?;
            let mut worst = rel(&plus.add(&minus)?, psi, psi, g)?;
            worst = worst.max(rel(&sector_project(rep, &plus, Sector::Plus)?, &plus, psi, g)?);
            worst = worst.max(sector_project(rep, &plus, Sector::Minus)?.norm(g) / psi.norm(g));
            for e in &elements {
                let a = sector_project(rep, &finite_action(rep, e, psi)?, Sector::Plus)?;
                let b = finite_action(rep, e, &plus)?;
                worst = worst.max(rel(&a, &b, psi, g)?);
            }
            r.push(format!("{}/{}", rep.class(), ctx.probe_id(k)), worst);
        }
    }
    Ok(r)
}

/// Expected `S P_μ S⁻¹ = ±P_μ` from how time reversal and space inversion act
/// on translations, given the character of `S`.
fn expected_signs(is_time_reversal: bool, antiunitary: bool) -> (f64, f64) {
    match (is_time_reversal, antiunitary) {
        (true, false) => (-1.0, 1.0),
        (true, true) => (1.0, -1.0),
        (false, false) => (1.0, -1.0),
        (false, true) => (-1.0, 1.0),
    }
}

/// Norm restricted to points whose negation is again a lattice point; the
/// planes with some index 0 sit at `-p_max`, whose mirror image is missing.
fn paired_norm(grid: &MomentumGrid, s: &StateVector) -> f64 {
    let mut acc = 0.0;
    for v in s.sectors() {
        for (i, z) in v.iter().enumerate() {
            if grid.unravel(i).iter().all(|&k| k != 0) {
                acc += z.norm_sqr() * grid.weights()[i];
            }
        }
    }
    acc.sqrt()
}

fn symmetry_generators(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "symmetry-generators",
        "time reversal and space inversion act on P0 and P as required by their characters",
        1e-12,
        ToleranceBasis::ExactDiagonal,
    );
    let g = &ctx.grid;
    let mut unpaired: f64 = 0.0;
    for rep in &ctx.reps {
        let spec = rep.spec();
        let actions: [(&str, &AntiLinearAction, (f64, f64)); 2] = [
            ("theta", rep.theta(), expected_signs(true, spec.theta == Character::Antiunitary)),
            ("pi", rep.pi(), expected_signs(false, spec.pi == Character::Antiunitary)),
        ];
        for (k, psi) in ctx.states(rep).iter().enumerate() {
            let norm = psi.norm(g);
            for (name, action, (s0, sj)) in actions {
                let inv = action.inverse();
                let moved = inv.apply(g, psi);
                let conj = |gen| -> Result<StateVector> { Ok(action.apply(g, &apply_generator(rep, gen, &moved)?)) };
                let signed = |gen, sign: f64| -> Result<StateVector> {
                    Ok(apply_generator(rep, gen, psi)?.scale(Complex64::new(sign, 0.0)))
                };
                let energy = conj(Generator::P0)?.sub(&signed(Generator::P0, s0)?)?.norm(g) / norm;
                let mut momentum: f64 = 0.0;
                for j in 0..3 {
                    let d = conj(Generator::momentum(j))?.sub(&signed(Generator::momentum(j), sj)?)?;
                    momentum = momentum.max(paired_norm(g, &d) / norm);
                    unpaired = unpaired.max(d.norm(g) / norm);
                }
                let id = format!("{}/{name}/{}", rep.class(), ctx.probe_id(k));
                r.push(format!("{id}/P0"), energy);
                r.push(format!("{id}/P"), momentum);
            }
        }
    }
    r.detail("momentum-residual-including-unpaired-planes", unpaired);
    Ok(r)
}

fn time_evolution_unitarity(ctx: &Context) -> Result<CheckReport> {
    let mut r = CheckReport::new(
        "time-evolution-unitarity",
        "exp(-i P0 t) preserves norms and inner products",
        1e-12,
        ToleranceBasis::ExactDiagonal,
    );
    let g = &ctx.grid;
    for id in TheoryId::ALL {
        let theory = Theory::new(id, g);
        let states = ctx.states(theory.rep());
        for (k, psi) in states.iter().enumerate() {
            let other = &states[(k + 1) % states.len()];
            let before = inner_product(other, psi, g)?;
            let mut worst: f64 = 0.0;
            for t in [0.5, 1.0, 10.0] {
                let a = evolve(&theory, psi, t)?;
                let b = evolve(&theory, other, t)?;
                worst = worst.max((a.norm(g) / psi.norm(g) - 1.0).abs());
                worst = worst.max((inner_product(&b, &a, g)? - before).norm());
            }
            r.push(format!("{id}/{}", ctx.probe_id(k)), worst);
        }
    }
    Ok(r)
}
