//! Exact homology of complex slices as finitely presented modules over the
//! polynomial base, connectivity reports, graded piece dimensions, and
//! range-limited quasi-isomorphism testing via mapping cones.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::complex::{cone, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::groebner::{buchberger_module, lift, module_normal_form, monomials_up_to, syzygies, ModPoly, ModTerm};
use crate::poly::{Monomial, WeightedRing, WeightOf};
use crate::QPoly;

/// A finitely presented module over the polynomial base: a free module of
/// rank `gens` modulo the row span of `relations`.
#[derive(Debug, Clone)]
pub struct FPModule {
    pub ring: Arc<WeightedRing>,
    pub gens: usize,
    /// internal weight of each generator, when weight-homogeneous
    pub gen_weights: Vec<Option<i64>>,
    pub relations: Vec<Vec<QPoly>>,
}

impl FPModule {
    pub fn free(ring: &Arc<WeightedRing>, rank: usize, weights: Vec<i64>) -> Self {
        FPModule {
            ring: ring.clone(),
            gens: rank,
            gen_weights: weights.into_iter().map(Some).collect(),
            relations: Vec::new(),
        }
    }

    pub fn zero(ring: &Arc<WeightedRing>) -> Self {
        Self::free(ring, 0, Vec::new())
    }

    fn relation_gb(&self) -> Vec<ModPoly<crate::Q>> {
        let nonzero: Vec<ModPoly<crate::Q>> = self
            .relations
            .iter()
            .filter(|r| r.iter().any(|p| !p.is_zero()))
            .map(|r| ModPoly::from_components(r))
            .collect();
        if nonzero.is_empty() {
            Vec::new()
        } else {
            buchberger_module(&nonzero)
        }
    }

    pub fn is_zero(&self) -> bool {
        if self.gens == 0 {
            return true;
        }
        let gb = self.relation_gb();
        if gb.is_empty() {
            return false;
        }
        for i in 0..self.gens {
            let mut unit = vec![QPoly::zero(&self.ring); self.gens];
            unit[i] = QPoly::one(&self.ring);
            let nf = module_normal_form(&ModPoly::from_components(&unit), &gb);
            if !nf.is_zero() {
                return false;
            }
        }
        true
    }

    /// Does `p` annihilate the whole module?
    pub fn annihilated_by(&self, p: &QPoly) -> bool {
        if self.gens == 0 {
            return true;
        }
        let gb = self.relation_gb();
        for i in 0..self.gens {
            let mut v = vec![QPoly::zero(&self.ring); self.gens];
            v[i] = p.clone();
            let nf = module_normal_form(&ModPoly::from_components(&v), &gb);
            if !nf.is_zero() {
                return false;
            }
        }
        true
    }

    /// Standard module monomials (comp, monomial) within the degree bound,
    /// i.e. a Q-basis of the quotient restricted to the window.
    pub fn standard_module_monomials(&self, max_deg: u32) -> Vec<(usize, Monomial)> {
        let gb = self.relation_gb();
        let leads: Vec<ModTerm> = gb.iter().map(|g| g.lead().unwrap().0.clone()).collect();
        let monos = monomials_up_to(self.ring.nvars(), max_deg);
        let mut out = Vec::new();
        for comp in 0..self.gens {
            for m in &monos {
                if !leads
                    .iter()
                    .any(|l| l.comp == comp && l.mono.divides(m))
                {
                    out.push((comp, m.clone()));
                }
            }
        }
        out
    }

    /// Q-dimension of the weight-w slice within the degree window.
    pub fn piece_dimension(&self, w: i64, degree_bound: u32) -> PieceDim {
        let count = |bound: u32| -> usize {
            self.standard_module_monomials(bound)
                .iter()
                .filter(|(comp, m)| {
                    let gw = self.gen_weights.get(*comp).copied().flatten().unwrap_or(0);
                    self.ring.mono_weight(m) + gw == w
                })
                .count()
        };
        let at_bound = count(degree_bound);
        let at_prev = if degree_bound == 0 {
            at_bound
        } else {
            count(degree_bound - 1)
        };
        if at_bound == at_prev {
            PieceDim::Finite(at_bound)
        } else {
            PieceDim::Unstable { at_bound, at_prev }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PieceDim {
    Finite(usize),
    /// counts still growing at the enumeration bound
    Unstable { at_bound: usize, at_prev: usize },
}

/// Presentation of ker d_n / im d_{n+1}: kernel generators come from the
/// syzygy module of the columns of d_n, relations from lifting the columns
/// of d_{n+1} through them.
pub fn homology_at(cx: &Complex, n: i64) -> Result<FPModule> {
    if n - 1 < cx.lo - 1 || n + 1 > cx.hi + 1 {
        return Err(Error::BoundExceeded(format!(
            "homology requested at degree {} outside window [{}, {}]",
            n, cx.lo, cx.hi
        )));
    }
    let ring = cx.ring.clone();
    let rn = cx.rank(n);
    if rn == 0 {
        return Ok(FPModule::zero(&ring));
    }
    let r_down = cx.rank(n - 1);
    let dn = cx.d(n);
    let weights_n = cx.weights(n);

    // kernel generators
    let kernel: Vec<Vec<QPoly>> = if r_down == 0 || dn.iter().all(|row| row.iter().all(|e| e.is_zero())) {
        (0..rn)
            .map(|i| {
                let mut v = vec![QPoly::zero(&ring); rn];
                v[i] = QPoly::one(&ring);
                v
            })
            .collect()
    } else {
        // columns of d_n as elements of the free module of rank r_down
        let cols: Vec<Vec<QPoly>> = (0..rn)
            .map(|j| (0..r_down).map(|i| dn[i][j].clone()).collect())
            .collect();
        syzygies(&cols)?
    };
    if kernel.is_empty() {
        return Ok(FPModule::zero(&ring));
    }

    // relations: columns of d_{n+1} expressed in kernel generators
    let r_up = cx.rank(n + 1);
    let mut relations = Vec::new();
    if r_up > 0 {
        let dn1 = cx.d(n + 1);
        for j in 0..r_up {
            let col: Vec<QPoly> = (0..rn).map(|i| dn1[i][j].clone()).collect();
            if col.iter().all(|p| p.is_zero()) {
                continue;
            }
            let coeffs = lift(&col, &kernel)?.ok_or_else(|| {
                Error::Invalid("image of d_{n+1} not inside ker d_n".into())
            })?;
            relations.push(coeffs);
        }
    }

    let gen_weights: Vec<Option<i64>> = kernel
        .iter()
        .map(|k| {
            let mut w: Option<i64> = None;
            for (j, p) in k.iter().enumerate() {
                match p.weight_of() {
                    WeightOf::Every => {}
                    WeightOf::Of(pw) => {
                        let total = pw + weights_n.get(j).copied().unwrap_or(0);
                        match w {
                            None => w = Some(total),
                            Some(prev) if prev == total => {}
                            Some(_) => return None,
                        }
                    }
                    WeightOf::Inhomogeneous => return None,
                }
            }
            w.or(Some(0))
        })
        .collect();

    Ok(FPModule {
        ring,
        gens: kernel.len(),
        gen_weights,
        relations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DegreeVerdict {
    Zero,
    NonZero,
    InconclusiveAtBound,
}

/// Per-degree vanishing verdicts, justified by exact rank computations
/// within the stated bound.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityReport {
    pub verdicts: BTreeMap<i64, DegreeVerdict>,
    pub bound: u32,
}

impl ConnectivityReport {
    pub fn all_zero(&self) -> bool {
        self.verdicts.values().all(|v| *v == DegreeVerdict::Zero)
    }
}

/// Vanishing verdicts for degrees in [n_min, -1].
pub fn connectivity_from_complex(cx: &Complex, n_min: i64, bound: u32) -> Result<ConnectivityReport> {
    let mut verdicts = BTreeMap::new();
    for n in n_min..=-1 {
        // truncation can both hide classes and hide the boundaries that
        // would kill them, so neither verdict is sound under it
        let v = if cx.truncated {
            DegreeVerdict::InconclusiveAtBound
        } else if homology_at(cx, n)?.is_zero() {
            DegreeVerdict::Zero
        } else {
            DegreeVerdict::NonZero
        };
        verdicts.insert(n, v);
    }
    Ok(ConnectivityReport { verdicts, bound })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QuasiIso {
    True,
    False { witness_degree: i64 },
    Inconclusive { reason: String },
}

/// True iff the mapping cone has vanishing homology at every degree in
/// [lo, hi+1]; the extra degree catches injectivity failures on H_hi.
/// Degrees where truncation could hide a contribution are reported as
/// inconclusive.
pub fn chain_map_quasi_iso(f: &ChainMap, lo: i64, hi: i64) -> Result<QuasiIso> {
    f.check_chain_map()?;
    let c = cone(f);
    c.check_dd_zero()?;
    if c.truncated {
        return Ok(QuasiIso::Inconclusive {
            reason: "enumeration bound reached; cone homology not fully determined".into(),
        });
    }
    for n in lo..=hi + 1 {
        let h = homology_at(&c, n)?;
        if !h.is_zero() {
            // H_n(cone) != 0 means either H_n of the target is not hit
            // (failure at n) or H_{n-1} of the source has kernel (failure
            // at n-1); when the target has no homology at n only the
            // second reading is possible
            let target_nonzero = match homology_at(&f.target, n) {
                Ok(ht) => !ht.is_zero(),
                Err(_) => true, // outside the target window; keep degree n
            };
            let w = if target_nonzero { n } else { n - 1 };
            if w >= lo && w <= hi {
                return Ok(QuasiIso::False { witness_degree: w });
            }
        }
    }
    Ok(QuasiIso::True)
}
