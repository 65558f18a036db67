//! Machine-readable spectrum reports and their CSV/JSON forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ambiguity::{AmbiguityParams, Preset};
use crate::catalog::{Counting, Potential};
use crate::error::{Error, Result};
use crate::oracle::{discretize_deformed, eigenpairs, GridMeta};
use crate::si_engine::solve_chain;
use crate::verify::{core_grid, equivalence_dev, si_residual_max};
use crate::wavefunctions::{admissibility_check, gram_matrix, StateModel};

/// Level cap for `auto` on infinite spectra.
pub const AUTO_CAP: usize = 16;
/// Levels entering the orthonormality check.
const GRAM_LEVELS: usize = 4;

/// Ordering behind a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbiguityLabel {
    Preset(Preset),
    Exponents { xi: f64, zeta: f64 },
}

impl AmbiguityLabel {
    pub fn params(&self) -> AmbiguityParams {
        match *self {
            AmbiguityLabel::Preset(p) => p.params(),
            AmbiguityLabel::Exponents { xi, zeta } => AmbiguityParams::reduce(xi, zeta),
        }
    }
}

impl Default for AmbiguityLabel {
    fn default() -> Self {
        AmbiguityLabel::Preset(Preset::Bdd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelCount {
    Exact(usize),
    /// From the counting rule, capped at [`AUTO_CAP`].
    Auto,
}

impl std::str::FromStr for LevelCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(LevelCount::Auto);
        }
        s.parse()
            .map(LevelCount::Exact)
            .map_err(|_| Error::Parameter(format!("--n-levels expects a count or `auto`, got `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: usize,
    pub e_closed: f64,
    pub e_chain: f64,
    pub e_oracle: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub admissible: bool,
    pub hermiticity_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportChecks {
    pub si_residual_max: f64,
    pub equivalence_max_dev: f64,
    /// `None` with fewer than two admissible levels.
    pub orthonormality_max_offdiag: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub potential: String,
    pub params: BTreeMap<String, f64>,
    pub deformation: BTreeMap<String, f64>,
    pub ambiguity: AmbiguityLabel,
    pub levels: Vec<LevelRow>,
    pub counting: Counting,
    pub checks: ReportChecks,
    pub grid_meta: GridMeta,
    pub notes: Vec<String>,
}

/// Builds the report for `p`; the oracle columns are filled when `oracle`.
pub fn spectrum_report(
    p: &Potential,
    ambiguity: AmbiguityLabel,
    count: LevelCount,
    oracle: bool,
) -> Result<SpectrumReport> {
    let counting = p.bound_state_count();
    let k = match count {
        LevelCount::Auto => counting.levels(AUTO_CAP),
        LevelCount::Exact(k) => {
            if let Counting::Finite(_) | Counting::Zero = counting {
                let have = counting.levels(usize::MAX);
                if k > have {
                    return Err(Error::Index { n: k - 1, count: have });
                }
            }
            k
        }
    };
    let chain = solve_chain(&p.chain_problem(), k.max(1))?;
    let grid = p.oracle_grid(None)?;
    let oracle_values = if oracle && k > 0 {
        let op = discretize_deformed(&p.deforming(), &|x| p.v_eff(x), &grid)?;
        Some(eigenpairs(&op, k, false)?.eigenvalues)
    } else {
        None
    };

    let mut levels = Vec::with_capacity(k);
    let mut admitted = Vec::new();
    for n in 0..k {
        let e_closed = p.closed_energy(n)?;
        let verdict = admissibility_check(p, n)?;
        if verdict.admissible {
            admitted.push(n);
        }
        let e_oracle = oracle_values.as_ref().map(|v| v[n]);
        let abs_err = e_oracle.map(|e| (e_closed - e).abs());
        levels.push(LevelRow {
            n,
            e_closed,
            e_chain: chain.energies[n],
            e_oracle,
            abs_err,
            rel_err: abs_err.map(|d| d / e_closed.abs().max(1e-12)),
            admissible: verdict.admissible,
            hermiticity_ok: verdict.hermiticity_ok,
        });
    }

    let gram_models = admitted
        .iter()
        .take(GRAM_LEVELS)
        .map(|&n| StateModel::for_potential(p, n))
        .collect::<Result<Vec<_>>>()?;
    let orthonormality_max_offdiag = if gram_models.len() > 1 {
        let g = gram_matrix(&gram_models)?;
        let mut worst = 0.0f64;
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(v.abs());
                }
            }
        }
        Some(worst)
    } else {
        None
    };

    let mut notes = Vec::new();
    if let Some(flag) = p.energy_flag() {
        notes.push(format!("energy_flag: {flag}"));
    }
    if let Some(r) = p.truncation().oracle_levels {
        if oracle && k > r {
            notes.push(format!("oracle truncation resolves only the first {r} levels"));
        }
    }
    Ok(SpectrumReport {
        potential: p.name().to_string(),
        params: p.params(),
        deformation: p.deformation(),
        ambiguity,
        levels,
        counting,
        checks: ReportChecks {
            si_residual_max: si_residual_max(p, 5)?,
            equivalence_max_dev: equivalence_dev(p, &ambiguity.params(), &core_grid(p, 4001)?)?,
            orthonormality_max_offdiag,
        },
        grid_meta: (&grid).into(),
        notes,
    })
}

/// Seventeen significant digits; reading it back gives the same double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub const LEVEL_HEADER: &str =
    "potential,n,e_closed,e_chain,e_oracle,abs_err,rel_err,admissible,hermiticity_ok";

impl SpectrumReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parameter(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parameter(e.to_string()))
    }

    /// One row per level under [`LEVEL_HEADER`]; empty cells for missing
    /// oracle values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(LEVEL_HEADER);
        out.push('\n');
        for l in &self.levels {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.potential,
                l.n,
                fmt_f64(l.e_closed),
                fmt_f64(l.e_chain),
                opt(l.e_oracle),
                opt(l.abs_err),
                opt(l.rel_err),
                l.admissible,
                l.hermiticity_ok
            );
        }
        out
    }
}

/// Parses the level table written by [`SpectrumReport::to_csv`].
pub fn levels_from_csv(csv: &str) -> Result<Vec<LevelRow>> {
    let bad = |what: &str| Error::Parameter(format!("malformed level CSV: {what}"));
    let mut lines = csv.lines();
    if lines.next() != Some(LEVEL_HEADER) {
        return Err(bad("header"));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad(s));
    let opt_num = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
    let flag = |s: &str| s.parse::<bool>().map_err(|_| bad(s));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let c: Vec<&str> = line.split(',').collect();
            if c.len() != 9 {
                return Err(bad(line));
            }
            Ok(LevelRow {
                n: c[1].parse().map_err(|_| bad(c[1]))?,
                e_closed: num(c[2])?,
                e_chain: num(c[3])?,
                e_oracle: opt_num(c[4])?,
                abs_err: opt_num(c[5])?,
                rel_err: opt_num(c[6])?,
                admissible: flag(c[7])?,
                hermiticity_ok: flag(c[8])?,
            })
        })
        .collect()
}

/// One sweep row: the deformation value, its counting, and the closed-form
/// energies it admits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub counting: Counting,
    pub energies: Vec<f64>,
}

/// Counts and energies for `steps` evenly spaced values of `param` in
/// `[from, to]`; values outside the validity range are skipped.
pub fn sweep(p: &Potential, param: &str, from: f64, to: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(Error::Parameter("--steps must be at least 1".into()));
    }
    if !p.params().contains_key(param) && !p.deformation().contains_key(param) {
        return Err(Error::Parameter(format!("unknown parameter `{param}` for {}", p.name())));
    }
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = if steps == 1 { 0.0 } else { i as f64 / (steps - 1) as f64 };
        let value = from + (to - from) * t;
        let Ok(q) = p.with_param(param, value) else { continue };
        let counting = q.bound_state_count();
        let energies =
            (0..counting.levels(AUTO_CAP)).map(|n| q.closed_energy(n)).collect::<Result<Vec<_>>>()?;
        rows.push(SweepRow { value, counting, energies });
    }
    Ok(rows)
}

pub fn sweep_csv(param: &str, rows: &[SweepRow]) -> String {
    let width = rows.iter().map(|r| r.energies.len()).max().unwrap_or(0);
    let mut out = format!("{param},counting");
    for n in 0..width {
        let _ = write!(out, ",e_{n}");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{}", fmt_f64(r.value), r.counting);
        for n in 0..width {
            out.push(',');
            if let Some(e) = r.energies.get(n) {
                out.push_str(&fmt_f64(*e));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_strings() {
        for c in [Counting::Finite(3), Counting::Infinite, Counting::Zero] {
            assert_eq!(c.to_string().parse::<Counting>().unwrap(), c);
        }
        assert!("finite(x)".parse::<Counting>().is_err());
        assert_eq!(serde_json::to_string(&Counting::Finite(2)).unwrap(), "\"finite(2)\"");
    }

    #[test]
    fn csv_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.7777777777777777e-4, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn level_count_parse() {
        assert_eq!("auto".parse::<LevelCount>().unwrap(), LevelCount::Auto);
        assert_eq!("7".parse::<LevelCount>().unwrap(), LevelCount::Exact(7));
        assert!("-1".parse::<LevelCount>().is_err());
    }
}
