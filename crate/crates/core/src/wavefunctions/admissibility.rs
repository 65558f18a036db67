//! Square integrability and the boundary condition `|psi|^2 f -> 0`.

use serde::{Deserialize, Serialize};

use crate::catalog::Potential;
use crate::deforming::EndLimit;
use crate::error::{Error, Result};
use crate::interval::{Endpoint, Side};
use crate::oracle::simpson_fn;
use crate::wavefunctions::state::StateModel;

const DECAY: f64 = 1e-8;
const CONVERGENCE: f64 = 1e-8;
const FINITE_STEPS: i32 = 60;
const INFINITE_STEPS: i32 = 1000;
const PROBE_FINITE: i32 = 20;
const PIECE_INTERVALS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityEvidence {
    pub total: f64,
    /// Relative size of the outermost piece, worst side. Infinite when
    /// the tail increments grow.
    pub tail_increment: f64,
    pub pieces: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndEvidence {
    pub side: Side,
    /// `f` tends to a finite nonzero constant; the condition holds there.
    pub automatic: bool,
    /// `(x, ln(|psi|^2 f))` along the probe sequence.
    pub probes: Vec<(f64, f64)>,
    pub decayed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub square_integrable: bool,
    pub hermiticity_ok: bool,
    pub admissible: bool,
    pub integrability: IntegrabilityEvidence,
    pub ends: Vec<EndEvidence>,
}

struct Layout {
    x_ref: f64,
    scale: f64,
}

fn layout(model: &StateModel) -> Layout {
    let dom = model.deforming().domain();
    let x_ref = dom.reference_point();
    let scale = match (dom.left(), dom.right()) {
        (Endpoint::Finite(a), Endpoint::Finite(b)) => b - a,
        (Endpoint::Finite(a), _) => x_ref - a,
        (_, Endpoint::Finite(b)) => b - x_ref,
        _ => 1.0,
    };
    Layout { x_ref, scale }
}

/// Breakpoints moving from the core boundary towards one end.
fn breakpoints(model: &StateModel, side: Side, steps_finite: i32, steps_inf: i32) -> Vec<f64> {
    let lay = layout(model);
    let dir = match side {
        Side::Left => -1.0,
        Side::Right => 1.0,
    };
    match model.deforming().domain().end(side) {
        Endpoint::Finite(e) => {
            let s = 0.1 * lay.scale;
            (0..=steps_finite).map(|k| e - dir * s * 2f64.powi(-k)).collect()
        }
        Endpoint::Unbounded => (0..=steps_inf).map(|k| lay.x_ref + dir * 2f64.powi(k)).collect(),
    }
}

/// `|psi|^2` scaled by `exp(-2 shift)`; `None` when evaluation breaks down.
fn density(model: &StateModel, x: f64, shift: f64) -> Option<f64> {
    let v = model.ln_eval_raw(x);
    let l = v.ln_abs();
    if l.is_nan() || l == f64::INFINITY {
        return None;
    }
    Some((2.0 * (l - shift)).exp())
}

fn integrability(model: &StateModel) -> IntegrabilityEvidence {
    let left = breakpoints(model, Side::Left, FINITE_STEPS, INFINITE_STEPS);
    let right = breakpoints(model, Side::Right, FINITE_STEPS, INFINITE_STEPS);
    let (a, b) = (left[0], right[0]);
    let shift = (0..=200)
        .map(|i| model.ln_eval_raw(a + (b - a) * i as f64 / 200.0).ln_abs())
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let fail = |pieces| IntegrabilityEvidence { total: f64::NAN, tail_increment: f64::INFINITY, pieces };
    if !shift.is_finite() {
        return fail(0);
    }
    let piece = |u: f64, v: f64| -> Option<f64> {
        let bad = std::cell::Cell::new(false);
        let val = simpson_fn(
            |x| {
                density(model, x, shift).unwrap_or_else(|| {
                    bad.set(true);
                    0.0
                })
            },
            u,
            v,
            PIECE_INTERVALS,
        );
        if bad.get() {
            None
        } else {
            Some(val)
        }
    };
    let Some(core) = piece(a, b) else {
        return fail(0);
    };
    let mut total = core;
    let mut pieces = 1;
    let mut tails = Vec::new();
    for pts in [&left, &right] {
        let mut incs = Vec::new();
        for w in pts.windows(2) {
            if w[0] == w[1] {
                break;
            }
            match piece(w[0].min(w[1]), w[0].max(w[1])) {
                Some(v) if v.is_finite() => {
                    total += v;
                    pieces += 1;
                    incs.push(v);
                }
                Some(_) => return fail(pieces),
                None => break,
            }
        }
        tails.push(incs);
    }
    let mut tail_increment = 0.0f64;
    for incs in &tails {
        let n = incs.len();
        if n == 0 || (n >= 2 && incs[n - 1] > incs[n - 2]) {
            return IntegrabilityEvidence { total, tail_increment: f64::INFINITY, pieces };
        }
        tail_increment = tail_increment.max(incs[n - 1].abs() / total);
    }
    IntegrabilityEvidence { total, tail_increment, pieces }
}

fn end_evidence(model: &StateModel, side: Side) -> EndEvidence {
    let automatic = matches!(model.deforming().end_limit(side), EndLimit::Finite(v) if v > 0.0);
    let mut probes = Vec::new();
    let mut decayed = automatic;
    if !automatic {
        let pts = breakpoints(model, side, PROBE_FINITE, INFINITE_STEPS);
        for x in pts {
            let v = model.ln_eval_raw(x).ln_density_f();
            if v.is_nan() || v == f64::INFINITY {
                break;
            }
            probes.push((x, v));
            if v == f64::NEG_INFINITY {
                break;
            }
        }
        let top = probes.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        decayed = match probes.last() {
            Some(&(_, last)) => last == f64::NEG_INFINITY || last < top + DECAY.ln(),
            None => false,
        };
    }
    EndEvidence { side, automatic, probes, decayed }
}

/// Numeric admissibility of a prepared level.
pub fn admissibility_of(model: &StateModel) -> AdmissibilityVerdict {
    let integrability = integrability(model);
    let square_integrable = integrability.total.is_finite()
        && integrability.total > 0.0
        && integrability.tail_increment <= CONVERGENCE;
    let ends = vec![end_evidence(model, Side::Left), end_evidence(model, Side::Right)];
    let hermiticity_ok = ends.iter().all(|e| e.decayed);
    AdmissibilityVerdict {
        square_integrable,
        hermiticity_ok,
        admissible: square_integrable && hermiticity_ok,
        integrability,
        ends,
    }
}

pub fn admissibility_check(p: &Potential, n: usize) -> Result<AdmissibilityVerdict> {
    Ok(admissibility_of(&StateModel::for_potential(p, n)?))
}

const GRAM_INTERVALS: usize = 512;
const GRAM_STOP: f64 = 1e-17;

/// Simpson samples of `f` on `[u, v]`; `None` if any sample is unusable.
fn simpson_vec(f: &dyn Fn(f64) -> Option<Vec<f64>>, u: f64, v: f64, m: usize) -> Option<Vec<f64>> {
    let h = (v - u) / m as f64;
    let mut acc: Option<Vec<f64>> = None;
    for i in 0..=m {
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let vals = f(u + h * i as f64)?;
        let acc = acc.get_or_insert_with(|| vec![0.0; vals.len()]);
        for (a, b) in acc.iter_mut().zip(&vals) {
            *a += w * b;
        }
    }
    acc.map(|a| a.into_iter().map(|s| s * h / 3.0).collect())
}

/// Gram matrix `int psi_i psi_j dx` of the given levels over the whole
/// domain, each level scaled to unit norm. All levels must share a domain.
pub fn gram_matrix(models: &[StateModel]) -> Result<Vec<Vec<f64>>> {
    let k = models.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let first = &models[0];
    let left = breakpoints(first, Side::Left, FINITE_STEPS, INFINITE_STEPS);
    let right = breakpoints(first, Side::Right, FINITE_STEPS, INFINITE_STEPS);
    let (a, b) = (left[0], right[0]);
    let shifts: Vec<f64> = models
        .iter()
        .map(|m| {
            (0..=400)
                .map(|i| m.ln_eval_raw(a + (b - a) * i as f64 / 400.0).ln_abs())
                .filter(|v| v.is_finite())
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    if shifts.iter().any(|s| !s.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let integrand = |x: f64| -> Option<Vec<f64>> {
        let mut vals = Vec::with_capacity(k);
        for (m, s) in models.iter().zip(&shifts) {
            let v = m.ln_eval_raw(x);
            let l = v.ln_abs();
            if l.is_nan() || l == f64::INFINITY {
                return None;
            }
            vals.push(v.sign * (l - s).exp());
        }
        Some(pairs.iter().map(|&(i, j)| vals[i] * vals[j]).collect())
    };
    let diag_idx: Vec<usize> =
        pairs.iter().enumerate().filter(|(_, p)| p.0 == p.1).map(|(n, _)| n).collect();
    let mut total = simpson_vec(&integrand, a, b, 2 * GRAM_INTERVALS)
        .ok_or_else(|| Error::Convergence("level evaluation failed on the core piece".into()))?;
    for pts in [&left, &right] {
        let mut settled = false;
        for w in pts.windows(2) {
            if w[0] == w[1] {
                settled = true;
                break;
            }
            let Some(piece) = simpson_vec(&integrand, w[0].min(w[1]), w[0].max(w[1]), GRAM_INTERVALS)
            else {
                break;
            };
            for (t, p) in total.iter_mut().zip(&piece) {
                *t += p;
            }
            if diag_idx.iter().all(|&d| piece[d].abs() <= GRAM_STOP * total[d]) {
                settled = true;
                break;
            }
        }
        if !settled {
            return Err(Error::Convergence("Gram integrals did not settle".into()));
        }
    }
    let mut g = vec![vec![0.0; k]; k];
    let norm: Vec<f64> = (0..k).map(|i| total[diag_idx[i]].sqrt()).collect();
    for (n, &(i, j)) in pairs.iter().enumerate() {
        let v = total[n] / (norm[i] * norm[j]);
        g[i][j] = v;
        g[j][i] = v;
    }
    Ok(g)
}
