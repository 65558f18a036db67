//! Numerical checks shared by the acceptance tests and the `verify` command.

use serde::{Deserialize, Serialize};

use crate::ambiguity::AmbiguityParams;
use crate::catalog::{Counting, Potential};
use crate::error::{Error, Result};
use crate::interval::{Endpoint, Grid};
use crate::oracle::{
    discretize_deformed, discretize_vonroos, eigenpairs, equivalence_check,
    test_battery,
};
use crate::ordering::{deformed_kinetic_apply, recover_initial_potential, OrderingContext};
use crate::si_engine::{si_residual, solve_chain, ClassId};
use crate::wavefunctions::{
    admissibility_check, gram_matrix, ground_state_numeric, normalize, polynomial_chain,
    StateModel,
};

/// Grid size for the eigen-residual check.
pub const FINE_POINTS: usize = 8001;
/// Grid size on the core interval for the factorization check.
pub const FACTOR_POINTS: usize = 20001;

/// Bounded part of the domain where the checks sample: the domain itself
/// when bounded, otherwise ten units from the finite end or around the
/// reference point.
pub fn core_interval(p: &Potential) -> (f64, f64) {
    let dom = p.domain();
    let xr = dom.reference_point();
    match (dom.left(), dom.right()) {
        (Endpoint::Finite(a), Endpoint::Finite(b)) => (a, b),
        (Endpoint::Finite(a), Endpoint::Unbounded) => (a, a + 10.0),
        (Endpoint::Unbounded, Endpoint::Finite(b)) => (b - 10.0, b),
        _ => (xr - 5.0, xr + 5.0),
    }
}

/// The core interval with 1% of its width removed at each end.
pub fn core_grid(p: &Potential, n_points: usize) -> Result<Grid> {
    let (a, b) = core_interval(p);
    let m = 0.01 * (b - a);
    Grid::new(a + m, b - m, n_points)
}

/// `count` evenly spaced points strictly inside the core interval.
pub fn probe_points(p: &Potential, count: usize) -> Vec<f64> {
    let (a, b) = core_interval(p);
    (1..=count).map(|i| a + (b - a) * i as f64 / (count + 1) as f64).collect()
}

/// Largest `|r1|`, `|r2|` over the chain links `0..depth` at 101 probe points.
pub fn si_residual_max(p: &Potential, depth: usize) -> Result<f64> {
    let problem = p.chain_problem();
    let chain = solve_chain(&problem, depth + 1)?;
    let df = p.deforming();
    let v = |x: f64| p.v_eff(x);
    let mut worst = 0.0f64;
    for x in probe_points(p, 101) {
        for i in 0..=depth {
            let r = si_residual(&problem, &df, &v, &chain, i, x)?;
            worst = worst.max(r.r1.abs()).max(r.r2.abs());
        }
    }
    Ok(worst)
}

/// Closed-form samples of `psi_n` on every node, unit Simpson norm.
pub fn closed_samples(p: &Potential, n: usize, grid: &Grid) -> Result<Vec<f64>> {
    let m = StateModel::for_potential(p, n)?;
    Ok(normalize(&m.sample_scaled(grid)?, grid)?.samples)
}

/// Fourth-order central derivative at node `i` (needs two neighbours each side).
fn d5(u: &[f64], i: usize, h: f64) -> f64 {
    (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h)
}

/// `max |A- psi_0| / max |psi_0|` with `A- = sqrt f d/dx sqrt f + W`,
/// skipping two nodes at each end.
pub fn factorization_residual(p: &Potential, grid: &Grid) -> Result<f64> {
    let psi = closed_samples(p, 0, grid)?;
    let problem = p.chain_problem();
    let chain = solve_chain(&problem, 0)?;
    let df = p.deforming();
    let nodes = grid.nodes();
    let n = nodes.len();
    if n < 5 {
        return Err(Error::Parameter("factorization check needs at least 5 nodes".into()));
    }
    let root_f: Vec<f64> = nodes.iter().map(|&x| df.f_raw(x).sqrt()).collect();
    let u: Vec<f64> = psi.iter().zip(&root_f).map(|(a, b)| a * b).collect();
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let h = grid.spacing();
    let mut worst = 0.0f64;
    for i in 2..n - 2 {
        let w = problem.sp.w_eval(chain.lambdas[0], chain.mus[0], nodes[i])?.w;
        worst = worst.max((root_f[i] * d5(&u, i, h) + w * psi[i]).abs());
    }
    Ok(worst / peak)
}

/// `||H psi_n - E_n psi_n||_2 / ||psi_n||_2` over the interior nodes, with
/// the chain energy. The discrete operator sees the closed-form values at the
/// two cut nodes rather than the Dirichlet zeros.
pub fn eigen_residual(p: &Potential, n: usize, grid: &Grid) -> Result<f64> {
    let psi = closed_samples(p, n, grid)?;
    let e = solve_chain(&p.chain_problem(), n)?.energies[n];
    let kin = deformed_kinetic_apply(&p.deforming(), &psi, grid)?;
    let nodes = grid.nodes();
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, t) in kin.iter().enumerate() {
        let (x, v) = (nodes[j + 1], psi[j + 1]);
        num += (t + p.v_eff(x) * v - e * v).powi(2);
        den += v * v;
    }
    Ok((num / den).sqrt())
}

/// Largest entry of `G - I` for the Gram matrix of levels `0..count`,
/// integrated over the whole domain.
pub fn gram_deviation(p: &Potential, count: usize) -> Result<f64> {
    let models = (0..count).map(|n| StateModel::for_potential(p, n)).collect::<Result<Vec<_>>>()?;
    let g = gram_matrix(&models)?;
    let mut worst = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - want).abs());
        }
    }
    Ok(worst)
}

/// Relative spread of `numeric / closed` for the ground state at 101 probe points.
pub fn ground_ratio_spread(p: &Potential) -> Result<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in probe_points(p, 101) {
        let closed = p.ground_state_closed(x)?;
        if closed.abs() < 1e-250 {
            continue;
        }
        let r = ground_state_numeric(p, x)? / closed;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    Ok((hi - lo) / lo.abs().max(hi.abs()))
}

/// [`equivalence_check`] for the entry's recovered potential, divided by the
/// largest magnitude of the deformed-side action over the same battery.
pub fn equivalence_dev(p: &Potential, amb: &AmbiguityParams, grid: &Grid) -> Result<f64> {
    let ctx = OrderingContext::new(p.deforming(), *amb);
    let v_eff = |x: f64| p.v_eff(x);
    let v = |x: f64| recover_initial_potential(&ctx, &v_eff, x).unwrap_or(f64::NAN);
    let dev = equivalence_check(&ctx.df, amb, &v, grid)?;
    let nodes = grid.nodes();
    let mut scale = 0.0f64;
    for psi in test_battery(grid) {
        let kin = deformed_kinetic_apply(&ctx.df, &psi, grid)?;
        for (j, t) in kin.iter().enumerate() {
            scale = scale.max((t + v_eff(nodes[j + 1]) * psi[j + 1]).abs());
        }
    }
    Ok(dev / scale.max(f64::MIN_POSITIVE))
}

/// Largest relative gap between the lowest `k` eigenvalues of the von Roos
/// operator on the recovered potential and of the deformed operator on `V_eff`.
pub fn vonroos_spectrum_dev(
    p: &Potential,
    amb: &AmbiguityParams,
    k: usize,
    grid: &Grid,
) -> Result<f64> {
    let ctx = OrderingContext::new(p.deforming(), *amb);
    let v_eff = |x: f64| p.v_eff(x);
    let v = |x: f64| recover_initial_potential(&ctx, &v_eff, x).unwrap_or(f64::NAN);
    let mass = ctx.mass_field();
    let fine = Grid::new(grid.x1(), grid.x2(), 2 * grid.n_points() - 1)?;
    let levels = |g: &Grid| -> Result<(Vec<f64>, Vec<f64>)> {
        let roos = eigenpairs(&discretize_vonroos(&mass, amb.mass_exponents(), &v, g)?, k, false)?;
        let deformed = eigenpairs(&discretize_deformed(&ctx.df, &v_eff, g)?, k, false)?;
        Ok((roos.eigenvalues, deformed.eigenvalues))
    };
    let (roos_c, def_c) = levels(grid)?;
    let (roos_f, def_f) = levels(&fine)?;
    let extrapolate = |c: &[f64], f: &[f64]| -> Vec<f64> {
        c.iter().zip(f).map(|(c, f)| (4.0 * f - c) / 3.0).collect()
    };
    let roos = extrapolate(&roos_c, &roos_f);
    let deformed = extrapolate(&def_c, &def_f);
    Ok(roos
        .iter()
        .zip(&deformed)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1e-12))
        .fold(0.0, f64::max))
}

/// Cancelled top coefficient of `P_n` relative to its largest coefficient
/// (class 3 only).
pub fn degree_cancellation(p: &Potential, n: usize) -> Result<Option<f64>> {
    let poly = polynomial_chain(p, n)?;
    if poly.class_id != ClassId::Class3 {
        return Ok(None);
    }
    Ok(poly.cancelled.map(|c| c.abs() / poly.max_abs_coeff().max(f64::MIN_POSITIVE)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, pass: value.is_finite() && value < tol }
    }

    /// A yes/no property; `value` is 1 when it holds.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 1.0 } else { 0.0 }, tol: 1.0, pass: ok }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        let mut c = Self::holds(format!("{} ({err})", name.into()), false);
        c.value = f64::NAN;
        c
    }
}

/// Numeric admissibility of one closed-form level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelVerdict {
    pub n: usize,
    pub square_integrable: bool,
    pub hermiticity_ok: bool,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub potential: String,
    pub params: std::collections::BTreeMap<String, f64>,
    pub deformation: std::collections::BTreeMap<String, f64>,
    pub counting: Counting,
    pub levels: Vec<LevelVerdict>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
}

/// Tolerances of the invariant suite. `oracle` overrides the recipe's
/// relative tolerance for oracle energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub oracle: Option<f64>,
    pub si: f64,
    pub factorization: f64,
    pub eigen: f64,
    pub gram: f64,
    pub ratio: f64,
    pub equivalence: f64,
    pub degree: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            oracle: None,
            si: 1e-10,
            factorization: 1e-8,
            eigen: 1e-5,
            gram: 1e-6,
            ratio: 1e-8,
            equivalence: 1e-6,
            degree: 1e-12,
        }
    }
}

fn push(checks: &mut Vec<Check>, name: &str, r: Result<f64>, tol: f64) {
    checks.push(match r {
        Ok(v) => Check::below(name, v, tol),
        Err(e) => Check::failed(name, &e),
    });
}

/// Every invariant that applies to `p` under the ordering `amb`.
pub fn verify_entry(p: &Potential, amb: &AmbiguityParams, tol: &Tolerances) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let counting = p.bound_state_count();
    let admitted = counting.levels(4);

    push(&mut checks, "si_residual_max", si_residual_max(p, 5), tol.si);
    let chain = solve_chain(&p.chain_problem(), 5)?;
    let worst_energy = (0..=5)
        .map(|n| (chain.energies[n] - p.printed_energy(n)).abs() / p.printed_energy(n).abs().max(1e-12))
        .fold(0.0, f64::max);
    match p.energy_flag() {
        Some(flag) => notes.push(format!("energy_flag: {flag}")),
        None => checks.push(Check::below("chain_vs_closed_energy", worst_energy, tol.si)),
    }

    let mut levels = Vec::new();
    let probed = if admitted == 0 { 3 } else { admitted.min(5) };
    for n in 0..=probed {
        let verdict = admissibility_check(p, n)?;
        levels.push(LevelVerdict {
            n,
            square_integrable: verdict.square_integrable,
            hermiticity_ok: verdict.hermiticity_ok,
            admissible: verdict.admissible,
        });
        checks.push(Check::holds(
            format!("admissibility_agrees_with_counting n={n}"),
            verdict.admissible == counting.admits(n),
        ));
    }

    let grid = p.oracle_grid(None)?;
    if admitted > 0 {
        let recipe = p.truncation();
        let rel = tol.oracle.unwrap_or(recipe.rel_tol);
        let op = discretize_deformed(&p.deforming(), &|x| p.v_eff(x), &grid)?;
        let resolved = recipe.oracle_levels.map_or(admitted, |k| k.min(admitted));
        let spec = eigenpairs(&op, resolved, false)?;
        for n in 0..resolved {
            let e = chain.energies[n];
            let err = (spec.eigenvalues[n] - e).abs() / e.abs().max(1e-12);
            checks.push(Check::below(format!("oracle_energy n={n}"), err, rel));
        }
        let fine = p.oracle_grid(Some(grid.n_points().max(FINE_POINTS)))?;
        let core = core_grid(p, FACTOR_POINTS)?;
        push(&mut checks, "factorization_residual", factorization_residual(p, &core), tol.factorization);
        for n in 0..admitted.min(3) {
            push(&mut checks, &format!("eigen_residual n={n}"), eigen_residual(p, n, &fine), tol.eigen);
        }
        push(&mut checks, "gram_max_deviation", gram_deviation(p, admitted), tol.gram);
        push(&mut checks, "ground_ratio_spread", ground_ratio_spread(p), tol.ratio);
    }
    let core = core_grid(p, 4001)?;
    push(&mut checks, "equivalence_max_dev", equivalence_dev(p, amb, &core), tol.equivalence);
    for n in 1..=6 {
        match degree_cancellation(p, n) {
            Ok(None) => break,
            Ok(Some(v)) => checks.push(Check::below(format!("degree_cancellation n={n}"), v, tol.degree)),
            Err(e) => checks.push(Check::failed(format!("degree_cancellation n={n}"), &e)),
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        potential: p.name().to_string(),
        params: p.params(),
        deformation: p.deformation(),
        counting,
        levels,
        checks,
        notes,
        pass,
    })
}
