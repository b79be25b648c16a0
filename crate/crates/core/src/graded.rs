//! Discrete weight-graded bookkeeping: finitely supported graded vector
//! spaces with the Day convolution tensor, regrading pushforwards, monoid
//! algebras, twists, the positive/zero-weight splitting of a nonnegatively
//! graded algebra, graded localization at a weight-1 element, and the
//! localization comparison check.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, eliminate, module_normal_form, ModPoly};
use crate::homology::FPModule;
use crate::linalg::Mat;
use crate::poly::{Monomial, WeightedRing, WeightOf};
use crate::rees::CheckVerdict;
use crate::{QPoly, Q};
use num_traits::{One, Zero};

/// A finitely supported graded vector space, recorded by the dimension of
/// each nonzero weight piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedVect {
    pub pieces: BTreeMap<i64, usize>,
}

impl GradedVect {
    pub fn zero() -> Self {
        GradedVect {
            pieces: BTreeMap::new(),
        }
    }

    pub fn from_pairs(pairs: &[(i64, usize)]) -> Self {
        let mut pieces = BTreeMap::new();
        for &(w, d) in pairs {
            if d > 0 {
                *pieces.entry(w).or_insert(0) += d;
            }
        }
        GradedVect { pieces }
    }

    pub fn dim(&self, w: i64) -> usize {
        self.pieces.get(&w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.pieces.values().sum()
    }
}

/// Day convolution: the piece at a is the sum over a = b + c of products.
pub fn day_tensor(n: &GradedVect, n2: &GradedVect) -> GradedVect {
    let mut pieces = BTreeMap::new();
    for (&b, &db) in &n.pieces {
        for (&c, &dc) in &n2.pieces {
            if db * dc > 0 {
                *pieces.entry(b + c).or_insert(0) += db * dc;
            }
        }
    }
    GradedVect { pieces }
}

/// A monoid map along which gradings are pushed forward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoidMap {
    Identity,
    /// multiplication by a nonzero integer
    Scale(i64),
    /// the collapse to the trivial monoid (forgets the grading)
    Collapse,
}

/// l_!(K)_b = direct sum of K_a over l(a) = b. Fibers over the (finite)
/// support are always finite here; a zero scale is rejected because it is
/// the collapse in disguise with infinite fibers over 0.
pub fn regrade_pushforward(l: MonoidMap, k: &GradedVect) -> Result<GradedVect> {
    match l {
        MonoidMap::Identity => Ok(k.clone()),
        MonoidMap::Scale(0) => Err(Error::Invalid(
            "scale by 0 has infinite fibers; use the collapse map".into(),
        )),
        MonoidMap::Scale(c) => {
            let mut pieces = BTreeMap::new();
            for (&a, &d) in &k.pieces {
                *pieces.entry(c * a).or_insert(0) += d;
            }
            Ok(GradedVect { pieces })
        }
        MonoidMap::Collapse => {
            let total = k.total();
            Ok(GradedVect::from_pairs(&[(0, total)]))
        }
    }
}

/// M(d)_n = M_{n+d}.
pub fn twist(m: &GradedVect, d: i64) -> GradedVect {
    GradedVect {
        pieces: m.pieces.iter().map(|(&w, &dim)| (w - d, dim)).collect(),
    }
}

/// A graded algebra given by a weighted polynomial ring modulo
/// weight-homogeneous relations.
#[derive(Debug, Clone)]
pub struct GradedAlgebraPresentation {
    pub ring: Arc<WeightedRing>,
    pub relations: Vec<QPoly>,
}

impl GradedAlgebraPresentation {
    pub fn new(ring: &Arc<WeightedRing>, relations: Vec<QPoly>) -> Result<Self> {
        for r in &relations {
            if !r.ring.same_vars(ring) {
                return Err(Error::RingMismatch("relation not over the given ring".into()));
            }
            if matches!(r.weight_of(), WeightOf::Inhomogeneous) {
                return Err(Error::Inhomogeneous(format!(
                    "relation {} is not weight-homogeneous",
                    r
                )));
            }
        }
        Ok(GradedAlgebraPresentation {
            ring: ring.clone(),
            relations,
        })
    }

    /// Dimension of the weight-w piece restricted to total degree <= bound.
    pub fn piece_count(&self, w: i64, bound: u32) -> Result<usize> {
        let rel: Vec<QPoly> = self.relations.iter().filter(|p| !p.is_zero()).cloned().collect();
        let monos = if rel.is_empty() {
            crate::groebner::monomials_up_to(self.ring.nvars(), bound)
        } else {
            buchberger(&rel, self.ring.order.clone())?.standard_monomials(bound)
        };
        Ok(monos
            .iter()
            .filter(|m| self.ring.mono_weight(m) == w)
            .count())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monoid {
    Nat,
    Int,
}

/// The monoid algebra R[M]: for the integers the Laurent presentation with
/// t*t_inv = 1, for the naturals the free weight-1 generator.
pub fn monoid_algebra(r: &Arc<WeightedRing>, m: Monoid) -> Result<GradedAlgebraPresentation> {
    let mut t = "t".to_string();
    while r.var_index(&t).is_some() {
        t.push('\'');
    }
    match m {
        Monoid::Nat => {
            let ring = r.extend(&[(t.as_str(), 1)])?;
            GradedAlgebraPresentation::new(&ring, Vec::new())
        }
        Monoid::Int => {
            let mut t_inv = "t_inv".to_string();
            while r.var_index(&t_inv).is_some() || t_inv == t {
                t_inv.push('\'');
            }
            let ring = r.extend(&[(t.as_str(), 1), (t_inv.as_str(), -1)])?;
            let rel = QPoly::var_named(&ring, &t)?
                .mul(&QPoly::var_named(&ring, &t_inv)?)
                .sub(&QPoly::one(&ring));
            GradedAlgebraPresentation::new(&ring, vec![rel])
        }
    }
}

/// Split a nonnegatively graded algebra into its positive-weight part
/// (piece counts for weights 1..=w_max within the degree bound) and the
/// weight-0 subalgebra obtained by elimination.
pub fn split_plus_zero(
    b: &GradedAlgebraPresentation,
    w_max: i64,
    bound: u32,
) -> Result<(GradedVect, GradedAlgebraPresentation)> {
    if (0..b.ring.nvars()).any(|i| b.ring.weight(i) < 0) {
        return Err(Error::Invalid(
            "positive-part splitting needs a nonnegatively graded algebra".into(),
        ));
    }
    let mut pieces = BTreeMap::new();
    for w in 1..=w_max {
        let d = b.piece_count(w, bound)?;
        if d > 0 {
            pieces.insert(w, d);
        }
    }
    let zero_vars: Vec<usize> = (0..b.ring.nvars()).filter(|&i| b.ring.weight(i) == 0).collect();
    let names: Vec<(&str, i64)> = zero_vars
        .iter()
        .map(|&i| (b.ring.vars[i].0.as_str(), 0))
        .collect();
    let zero_ring = WeightedRing::new(&names, b.ring.order.clone())?;
    let rel: Vec<QPoly> = b.relations.iter().filter(|p| !p.is_zero()).cloned().collect();
    let zero_rel = if rel.is_empty() {
        Vec::new()
    } else {
        eliminate(&rel, &zero_vars)?
            .gens
            .iter()
            .map(|g| g.restrict(&zero_ring))
            .collect::<Result<Vec<_>>>()?
    };
    Ok((
        GradedVect { pieces },
        GradedAlgebraPresentation::new(&zero_ring, zero_rel)?,
    ))
}

// --- graded localization ----------------------------------------------------

/// Basis of the weight-w slice of an FP module, restricted to monomials of
/// total degree <= bound.
fn slice_basis(m: &FPModule, w: i64, bound: u32) -> Vec<(usize, Monomial)> {
    m.standard_module_monomials(bound)
        .into_iter()
        .filter(|(comp, mono)| {
            let gw = m.gen_weights.get(*comp).copied().flatten().unwrap_or(0);
            m.ring.mono_weight(mono) + gw == w
        })
        .collect()
}

fn relation_gb(m: &FPModule) -> Vec<ModPoly<Q>> {
    let nonzero: Vec<ModPoly<Q>> = m
        .relations
        .iter()
        .filter(|r| r.iter().any(|p| !p.is_zero()))
        .map(|r| ModPoly::from_components(r))
        .collect();
    if nonzero.is_empty() {
        Vec::new()
    } else {
        crate::groebner::buchberger_module(&nonzero)
    }
}

/// Matrix (rows = source basis, columns = target basis) of multiplication
/// by p from the weight-w slice to the weight-(w + weight p) slice. Returns
/// None when a normal form escapes the enumerated target basis.
fn mult_matrix(
    m: &FPModule,
    gb: &[ModPoly<Q>],
    p: &QPoly,
    w: i64,
    src_bound: u32,
    tgt_bound: u32,
) -> Option<Vec<Vec<Q>>> {
    let pw = match p.weight_of() {
        WeightOf::Of(x) => x,
        WeightOf::Every => return Some(Vec::new()),
        WeightOf::Inhomogeneous => return None,
    };
    let src = slice_basis(m, w, src_bound);
    let tgt = slice_basis(m, w + pw, tgt_bound);
    let index: BTreeMap<(usize, &Monomial), usize> = tgt
        .iter()
        .enumerate()
        .map(|(i, (c, mo))| ((*c, mo), i))
        .collect();
    let mut rows = Vec::new();
    for (comp, mono) in &src {
        let mut v = vec![QPoly::zero(&m.ring); m.gens];
        v[*comp] = p.mul(&QPoly::monomial(&m.ring, mono.clone(), Q::one()));
        let nf = if gb.is_empty() {
            ModPoly::from_components(&v)
        } else {
            module_normal_form(&ModPoly::from_components(&v), gb)
        };
        let mut row = vec![Q::zero(); tgt.len()];
        for (t, c) in &nf.terms {
            match index.get(&(t.comp, &t.mono)) {
                Some(&i) => row[i] = c.clone(),
                None => return None,
            }
        }
        rows.push(row);
    }
    Some(rows)
}

/// Piece dimensions of the localization M_f within a weight window. Piece
/// w is the colimit of M_w -> M_{w+1} -> ... under multiplication by f;
/// its dimension is read off as the stable rank of a long f-power map,
/// checked stable across two successive stages.
#[derive(Debug, Clone, Serialize)]
pub struct LocalizedPieces {
    pub pieces: BTreeMap<i64, usize>,
    pub cutoff: u32,
    pub degree_bound: u32,
}

pub fn graded_localize(
    m: &FPModule,
    f: &QPoly,
    w_lo: i64,
    w_hi: i64,
    cutoff: u32,
    bound: u32,
) -> Result<LocalizedPieces> {
    if !f.weight_of().compatible_with(1) {
        return Err(Error::Inhomogeneous(format!(
            "localization needs a weight-1 element, got {}",
            f
        )));
    }
    let gb = relation_gb(m);
    let fdeg = f.total_degree().unwrap_or(0).max(1);
    // slices only become eventually f-stable above the generator weights;
    // anchor the scan there
    let g_max = m
        .gen_weights
        .iter()
        .map(|w| w.unwrap_or(0))
        .max()
        .unwrap_or(0);
    let stage = |w: i64, k: u32| -> Result<usize> {
        // rank of f^cutoff out of the weight-(w+k) slice
        let p = f.pow(cutoff);
        let src_bound = bound + k * fdeg;
        let tgt_bound = src_bound + cutoff * fdeg;
        let rows = mult_matrix(m, &gb, &p, w + k as i64, src_bound, tgt_bound)
            .ok_or_else(|| Error::BoundExceeded("localization slice escaped the degree bound".into()))?;
        Ok(Mat::from_rows(rows).rank())
    };
    let mut pieces = BTreeMap::new();
    for w in w_lo..=w_hi {
        let k0 = (g_max + cutoff as i64 - w).max(cutoff as i64) as u32;
        let a = stage(w, k0)?;
        let b = stage(w, k0 + 1)?;
        if a != b {
            return Err(Error::BoundExceeded(format!(
                "localized piece at weight {} not stable at cutoff {}",
                w, cutoff
            )));
        }
        if a > 0 {
            pieces.insert(w, a);
        }
    }
    Ok(LocalizedPieces {
        pieces,
        cutoff,
        degree_bound: bound,
    })
}

/// A weight-preserving map of FP graded modules, given by a matrix over
/// the common ring: column j is the image of source generator j.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: Vec<Vec<QPoly>>,
}

impl GradedMap {
    fn apply(&self, comp: usize, mono: &Monomial) -> Vec<QPoly> {
        let ring = &self.target.ring;
        let mpoly = QPoly::monomial(ring, mono.clone(), Q::one());
        (0..self.target.gens)
            .map(|i| self.matrix[i][comp].mul(&mpoly))
            .collect()
    }
}

/// Localization comparison: a map of finitely presented graded modules
/// that is an isomorphism on all weight pieces >= 0 becomes an isomorphism
/// on every localized piece at a weight-1 element. Checked per weight in
/// the window, ranks stable across two cutoff stages.
pub fn lemma_loc_check(
    phi: &GradedMap,
    f: &QPoly,
    w_lo: i64,
    w_hi: i64,
    cutoff: u32,
    bound: u32,
) -> Result<CheckVerdict> {
    if !f.weight_of().compatible_with(1) {
        return Err(Error::Inhomogeneous("localization needs a weight-1 element".into()));
    }
    let gb_s = relation_gb(&phi.source);
    let gb_t = relation_gb(&phi.target);
    let fdeg = f.total_degree().unwrap_or(0).max(1);

    // hypothesis: slice isomorphism in nonnegative weights (within bounds)
    for w in 0..=(w_hi + cutoff as i64 + 1) {
        let src = slice_basis(&phi.source, w, bound);
        let tgt = slice_basis(&phi.target, w, bound);
        if src.len() != tgt.len() {
            return Ok(CheckVerdict::False {
                witness: format!("hypothesis fails: weight-{} piece dimensions differ", w),
            });
        }
        if src.is_empty() {
            continue;
        }
        let index: BTreeMap<(usize, &Monomial), usize> = tgt
            .iter()
            .enumerate()
            .map(|(i, (c, mo))| ((*c, mo), i))
            .collect();
        let mut rows = Vec::new();
        let mut ok = true;
        for (comp, mono) in &src {
            let img = phi.apply(*comp, mono);
            let nf = if gb_t.is_empty() {
                ModPoly::from_components(&img)
            } else {
                module_normal_form(&ModPoly::from_components(&img), &gb_t)
            };
            let mut row = vec![Q::zero(); tgt.len()];
            for (t, c) in &nf.terms {
                match index.get(&(t.comp, &t.mono)) {
                    Some(&i) => row[i] = c.clone(),
                    None => ok = false,
                }
            }
            rows.push(row);
        }
        if !ok || Mat::from_rows(rows).rank() != src.len() {
            return Ok(CheckVerdict::False {
                witness: format!("hypothesis fails: weight-{} piece map is not invertible", w),
            });
        }
    }

    // conclusion: the localized pieces match through the composite
    // M_{w+k} -> N_{w+k} -> N_{w+k+cutoff}
    let loc_s = graded_localize(&phi.source, f, w_lo, w_hi, cutoff, bound)?;
    let loc_t = graded_localize(&phi.target, f, w_lo, w_hi, cutoff, bound)?;
    let composite_rank = |w: i64, k: u32| -> Result<usize> {
        let src_bound = bound + k * fdeg;
        let tgt_bound = src_bound + cutoff * fdeg;
        let src = slice_basis(&phi.source, w + k as i64, src_bound);
        let tgt = slice_basis(&phi.target, w + k as i64 + cutoff as i64, tgt_bound);
        let index: BTreeMap<(usize, &Monomial), usize> = tgt
            .iter()
            .enumerate()
            .map(|(i, (c, mo))| ((*c, mo), i))
            .collect();
        let p = f.pow(cutoff);
        let mut rows = Vec::new();
        for (comp, mono) in &src {
            let img = phi.apply(*comp, mono);
            let scaled: Vec<QPoly> = img.iter().map(|q| q.mul(&p)).collect();
            let nf = if gb_t.is_empty() {
                ModPoly::from_components(&scaled)
            } else {
                module_normal_form(&ModPoly::from_components(&scaled), &gb_t)
            };
            let mut row = vec![Q::zero(); tgt.len()];
            for (t, c) in &nf.terms {
                match index.get(&(t.comp, &t.mono)) {
                    Some(&i) => row[i] = c.clone(),
                    None => {
                        return Err(Error::BoundExceeded(
                            "localized comparison escaped the degree bound".into(),
                        ))
                    }
                }
            }
            rows.push(row);
        }
        Ok(Mat::from_rows(rows).rank())
    };
    let _ = gb_s;
    let g_max = phi
        .source
        .gen_weights
        .iter()
        .chain(phi.target.gen_weights.iter())
        .map(|w| w.unwrap_or(0))
        .max()
        .unwrap_or(0);
    for w in w_lo..=w_hi {
        let want = loc_s.pieces.get(&w).copied().unwrap_or(0);
        if loc_t.pieces.get(&w).copied().unwrap_or(0) != want {
            return Ok(CheckVerdict::False {
                witness: format!("localized pieces at weight {} have different dimensions", w),
            });
        }
        let k0 = (g_max + cutoff as i64 - w).max(cutoff as i64) as u32;
        let r1 = composite_rank(w, k0)?;
        let r2 = composite_rank(w, k0 + 1)?;
        if r1 != r2 {
            return Ok(CheckVerdict::Inconclusive {
                reason: format!("localized map rank at weight {} unstable at the cutoff", w),
            });
        }
        if r1 != want {
            return Ok(CheckVerdict::False {
                witness: format!("localized map at weight {} is not invertible", w),
            });
        }
    }
    Ok(CheckVerdict::True)
}
