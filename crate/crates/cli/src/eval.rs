//! Statement evaluator: binds rings, ideals, Rees algebras and blow-up
//! atlases, runs report commands, and collects verdict records. Every
//! verdict carries the bounds it was computed under.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use derees_core::blowup::{blowup_charts, chart_consistency, compare_pi0, strictness_check_pi0, BlowupAtlas};
use derees_core::cotangent::cotangent_homology;
use derees_core::dg::{koszul, quasi_iso_in_range};
use derees_core::homology::{DegreeVerdict, PieceDim, QuasiIso};
use derees_core::poly::{MonomialOrder, WeightedRing};
use derees_core::rees::{
    connectivity_report, fiber_zero_comparison, generic_fiber, rees_ext_koszul, rees_ext_sym,
    ReesData,
};
use derees_core::text::parse_poly;
use derees_core::{Error, QPoly, Result};

use crate::script::Stmt;

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub bounds: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Output {
    pub version: String,
    pub statements: Vec<String>,
    pub reports: Vec<Report>,
}

/// Overall outcome, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Inconclusive,
}

pub struct Flags {
    pub bound: u32,
}

#[derive(Default)]
struct Env {
    rings: BTreeMap<String, Arc<WeightedRing>>,
    ideals: BTreeMap<String, Vec<String>>,
    rees: BTreeMap<String, ReesData>,
    blowups: BTreeMap<String, BlowupAtlas>,
}

impl Env {
    fn ring(&self, name: &str) -> Result<&Arc<WeightedRing>> {
        self.rings
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unbound ring `{}`", name)))
    }

    fn ideal_polys(&self, name: &str, ring: &Arc<WeightedRing>) -> Result<Vec<QPoly>> {
        let srcs = self
            .ideals
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unbound ideal `{}`", name)))?;
        srcs.iter().map(|s| parse_poly(s, ring)).collect()
    }

    fn rees(&self, name: &str) -> Result<&ReesData> {
        self.rees
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unbound rees algebra `{}`", name)))
    }

    fn blowup(&self, name: &str) -> Result<&BlowupAtlas> {
        self.blowups
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unbound blow-up `{}`", name)))
    }
}

fn quasi_iso_verdict(name: &str, v: &QuasiIso, bounds: BTreeMap<String, i64>) -> Verdict {
    let (status, witness) = match v {
        QuasiIso::True => ("true".to_string(), None),
        QuasiIso::False { witness_degree } => (
            "false".to_string(),
            Some(format!("homology mismatch at degree {}", witness_degree)),
        ),
        QuasiIso::Inconclusive { reason } => ("inconclusive".to_string(), Some(reason.clone())),
    };
    Verdict {
        name: name.to_string(),
        status,
        witness,
        bounds,
    }
}

pub fn evaluate(stmts: &[Stmt], flags: &Flags) -> Result<(Output, Outcome)> {
    let mut env = Env::default();
    let mut reports = Vec::new();
    let mut outcome = Outcome::Ok;
    let bound = flags.bound;

    for stmt in stmts {
        match stmt {
            Stmt::Ring { name, vars } => {
                let pairs: Vec<(&str, i64)> =
                    vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
                let r = WeightedRing::new(&pairs, MonomialOrder::DegRevLex)?;
                env.rings.insert(name.clone(), r);
            }
            Stmt::Ideal { name, gens } => {
                env.ideals.insert(name.clone(), gens.clone());
            }
            Stmt::ReesExt { name, ring, ideal } => {
                let r = env.ring(ring)?.clone();
                let f = env.ideal_polys(ideal, &r)?;
                env.rees.insert(name.clone(), rees_ext_koszul(&r, &f)?);
            }
            Stmt::ReesSym {
                name,
                ring,
                degrees,
            } => {
                let r = env.ring(ring)?.clone();
                let zero = vec![vec![QPoly::zero(&r); degrees.len()]; degrees.len()];
                env.rees
                    .insert(name.clone(), rees_ext_sym(&r, degrees, &zero)?);
            }
            Stmt::Blowup { name, ring, ideal } => {
                let r = env.ring(ring)?.clone();
                let f = env.ideal_polys(ideal, &r)?;
                env.blowups.insert(name.clone(), blowup_charts(&r, &f)?);
            }
            Stmt::ReportConnectivity {
                target,
                hmin,
                cutoff,
            } => {
                let r = env.rees(target)?;
                let rep = connectivity_report(r, *hmin, *cutoff)?;
                let mut verdicts = Vec::new();
                for (n, v) in &rep.verdicts {
                    let mut bounds = BTreeMap::new();
                    bounds.insert("cutoff".to_string(), *cutoff as i64);
                    let status = match v {
                        DegreeVerdict::Zero => "zero",
                        DegreeVerdict::NonZero => "nonzero",
                        DegreeVerdict::InconclusiveAtBound => {
                            outcome = Outcome::Inconclusive;
                            "inconclusive"
                        }
                    };
                    verdicts.push(Verdict {
                        name: format!("H_{}", n),
                        status: status.to_string(),
                        witness: None,
                        bounds,
                    });
                }
                reports.push(Report {
                    command: stmt.to_string(),
                    verdicts,
                });
            }
            Stmt::ReportFibers { target, lo, hi } => {
                let r = env.rees(target)?;
                let mut bounds = BTreeMap::new();
                bounds.insert("range_lo".to_string(), *lo);
                bounds.insert("range_hi".to_string(), *hi);
                bounds.insert("bound".to_string(), bound as i64);
                let mut verdicts = Vec::new();
                let (_nc, phi) = fiber_zero_comparison(r)?;
                let v0 = quasi_iso_in_range(&phi, *lo, *hi, bound)?;
                verdicts.push(quasi_iso_verdict(
                    "fiber_at_zero_vs_normal_cone",
                    &v0,
                    bounds.clone(),
                ));
                let (_gf, psi) = generic_fiber(r)?;
                let v1 = quasi_iso_in_range(&psi, *lo, *hi, bound)?;
                verdicts.push(quasi_iso_verdict(
                    "generic_fiber_vs_localized_base",
                    &v1,
                    bounds,
                ));
                if verdicts.iter().any(|v| v.status == "inconclusive") {
                    outcome = Outcome::Inconclusive;
                }
                reports.push(Report {
                    command: stmt.to_string(),
                    verdicts,
                });
            }
            Stmt::ReportCharts { target } => {
                let atlas = env.blowup(target)?;
                let mut verdicts = Vec::new();
                for i in 0..atlas.charts.len() {
                    let mut bounds = BTreeMap::new();
                    bounds.insert("bound".to_string(), bound as i64);
                    let cmp = compare_pi0(atlas, i)?;
                    verdicts.push(Verdict {
                        name: format!("chart_{}_pi0_comparison", i + 1),
                        status: if cmp.isomorphic {
                            "isomorphic".to_string()
                        } else {
                            "surjective".to_string()
                        },
                        witness: if cmp.kernel_generators.is_empty() {
                            None
                        } else {
                            Some(format!("kernel: {}", cmp.kernel_generators.join(", ")))
                        },
                        bounds: bounds.clone(),
                    });
                    let strict = strictness_check_pi0(atlas, i)?;
                    verdicts.push(check_verdict(
                        &format!("chart_{}_strictness_pi0", i + 1),
                        &strict,
                        bounds.clone(),
                        &mut outcome,
                    ));
                    let mut cb = bounds.clone();
                    cb.insert("range_lo".to_string(), -1);
                    cb.insert("range_hi".to_string(), 2);
                    let cons = chart_consistency(&atlas.a, &atlas.f, i, -1, 2, bound)?;
                    if matches!(cons, QuasiIso::Inconclusive { .. }) {
                        outcome = Outcome::Inconclusive;
                    }
                    verdicts.push(quasi_iso_verdict(
                        &format!("chart_{}_consistency", i + 1),
                        &cons,
                        cb,
                    ));
                }
                reports.push(Report {
                    command: stmt.to_string(),
                    verdicts,
                });
            }
            Stmt::ReportCotangent { ring, ideal, n } => {
                let r = env.ring(ring)?.clone();
                let f = env.ideal_polys(ideal, &r)?;
                let b = koszul(&r, &f, "e")?;
                let a_vars: Vec<String> = r.vars.iter().map(|(n, _)| n.clone()).collect();
                let a_refs: Vec<&str> = a_vars.iter().map(|s| s.as_str()).collect();
                let mut verdicts = Vec::new();
                for k in 0..=*n {
                    let h = cotangent_homology(&b, &a_refs, k, bound)?;
                    let mut bounds = BTreeMap::new();
                    bounds.insert("bound".to_string(), bound as i64);
                    let (status, witness) = if h.is_zero() {
                        ("zero".to_string(), None)
                    } else {
                        let dim = match h.piece_dimension(0, bound) {
                            PieceDim::Finite(d) => format!("{}", d),
                            PieceDim::Unstable { at_bound, .. } => format!(">= {}", at_bound),
                        };
                        (
                            "nonzero".to_string(),
                            Some(format!(
                                "generators: {}, relations: {}, weight-0 dimension {}",
                                h.gens,
                                h.relations.len(),
                                dim
                            )),
                        )
                    };
                    verdicts.push(Verdict {
                        name: format!("H_{}(L)", k),
                        status,
                        witness,
                        bounds,
                    });
                }
                reports.push(Report {
                    command: stmt.to_string(),
                    verdicts,
                });
            }
        }
    }

    Ok((
        Output {
            version: env!("CARGO_PKG_VERSION").to_string(),
            statements: stmts.iter().map(|s| s.to_string()).collect(),
            reports,
        },
        outcome,
    ))
}

fn check_verdict(
    name: &str,
    v: &derees_core::rees::CheckVerdict,
    bounds: BTreeMap<String, i64>,
    outcome: &mut Outcome,
) -> Verdict {
    use derees_core::rees::CheckVerdict;
    let (status, witness) = match v {
        CheckVerdict::True => ("true".to_string(), None),
        CheckVerdict::False { witness } => ("false".to_string(), Some(witness.clone())),
        CheckVerdict::Inconclusive { reason } => {
            *outcome = Outcome::Inconclusive;
            ("inconclusive".to_string(), Some(reason.clone()))
        }
    };
    Verdict {
        name: name.to_string(),
        status,
        witness,
        bounds,
    }
}

/// Aligned human-readable rendering; timings live only here so that the
/// JSON output stays byte-deterministic.
pub fn render_text(out: &Output, elapsed_ms: u128) -> String {
    let mut s = String::new();
    s.push_str(&format!("derees {}\n", out.version));
    for rep in &out.reports {
        s.push_str(&format!("{}\n", rep.command));
        let width = rep
            .verdicts
            .iter()
            .map(|v| v.name.len())
            .max()
            .unwrap_or(0);
        for v in &rep.verdicts {
            let bounds: Vec<String> = v
                .bounds
                .iter()
                .map(|(k, val)| format!("{}={}", k, val))
                .collect();
            s.push_str(&format!(
                "  {:width$}  {:12}  [{}]",
                v.name,
                v.status,
                bounds.join(", "),
                width = width
            ));
            if let Some(w) = &v.witness {
                s.push_str(&format!("  {}", w));
            }
            s.push('\n');
        }
    }
    s.push_str(&format!("elapsed: {} ms\n", elapsed_ms));
    s
}
