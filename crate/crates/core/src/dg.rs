//! Semifree bigraded (homological degree x weight) graded-commutative
//! dg-algebra presentations over a polynomial base.
//!
//! Sign conventions: homological indexing, d of degree -1, Leibniz rule
//! d(ab) = (da)b + (-1)^{|a|} a(db). Monomials are kept with generators in
//! canonical index order; reordering uses the Koszul sign (-1)^{|a||b|}.
//! Odd-degree generators square to zero. These choices are recorded in
//! every serialized presentation and locked by the d.d = 0 validation.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{ChainMap, Complex, PolyMat};
use crate::error::{Error, Result};
use crate::poly::{RingMap, WeightedRing, WeightOf};
use crate::{QPoly, Q};
use num_traits::One;

/// A generator adjoined to the base in nonzero homological degree (degree 0
/// is allowed only for generators carrying a nonzero weight, e.g. shifted
/// symmetric-algebra generators).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtGen {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

impl ExtGen {
    pub fn odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// The free graded-commutative algebra shape: base polynomial ring plus
/// exterior/divided generators.
#[derive(Debug, Clone, PartialEq)]
pub struct DgAlgebra {
    pub base: Arc<WeightedRing>,
    pub gens: Vec<ExtGen>,
}

pub type ExtMono = Vec<u32>;

impl DgAlgebra {
    pub fn new(base: &Arc<WeightedRing>, gens: Vec<ExtGen>) -> Result<Arc<Self>> {
        let mut names: Vec<&str> = base.vars.iter().map(|(n, _)| n.as_str()).collect();
        for g in &gens {
            names.push(&g.name);
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::DuplicateName(
                "generator name clashes with an existing variable".into(),
            ));
        }
        Ok(Arc::new(DgAlgebra { base: base.clone(), gens }))
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn mono_degree(&self, m: &ExtMono) -> i64 {
        m.iter()
            .zip(&self.gens)
            .map(|(&e, g)| e as i64 * g.degree)
            .sum()
    }

    pub fn mono_weight(&self, m: &ExtMono) -> i64 {
        m.iter()
            .zip(&self.gens)
            .map(|(&e, g)| e as i64 * g.weight)
            .sum()
    }

    pub fn mono_label(&self, m: &ExtMono) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            if e == 1 {
                parts.push(self.gens[i].name.clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.gens[i].name, e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Koszul sign for merging canonical monomials a*b, or None if an odd
    /// generator would be squared.
    fn merge_sign(&self, a: &ExtMono, b: &ExtMono) -> Option<bool> {
        // sign exponent = sum_{i<j} b_i * a_j * p_i * p_j
        let mut exp: u64 = 0;
        let mut tail_parity: u64 = 0; // sum of a_j * p_j for j > i, built from the right
        for i in (0..self.gens.len()).rev() {
            if self.gens[i].odd() {
                if a[i] + b[i] > 1 {
                    return None;
                }
                exp += b[i] as u64 * tail_parity;
                tail_parity += a[i] as u64;
            }
        }
        Some(exp % 2 == 1)
    }
}

/// Element of the free graded-commutative algebra: base-polynomial
/// coefficients indexed by generator exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DgElement {
    pub alg: Arc<DgAlgebra>,
    pub terms: BTreeMap<ExtMono, QPoly>,
}

impl DgElement {
    pub fn zero(alg: &Arc<DgAlgebra>) -> Self {
        DgElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_base(alg: &Arc<DgAlgebra>, p: &QPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(vec![0u32; alg.gens.len()], p.clone());
        }
        DgElement {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn one(alg: &Arc<DgAlgebra>) -> Self {
        Self::from_base(alg, &QPoly::one(&alg.base))
    }

    pub fn gen(alg: &Arc<DgAlgebra>, i: usize) -> Self {
        let mut m = vec![0u32; alg.gens.len()];
        m[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(m, QPoly::one(&alg.base));
        DgElement {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn monomial(alg: &Arc<DgAlgebra>, m: ExtMono, c: QPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DgElement {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, m: ExtMono, c: QPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = e.add(&c);
                if self.terms[&m].is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        DgElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_base(&self, p: &QPoly) -> Self {
        if p.is_zero() {
            return Self::zero(&self.alg);
        }
        let mut out = Self::zero(&self.alg);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.mul(p));
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Self {
        self.scale_base(&QPoly::constant(&self.alg.base, k.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.alg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(negate) = self.alg.merge_sign(ma, mb) {
                    let m: ExtMono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                    let mut c = ca.mul(cb);
                    if negate {
                        c = c.neg();
                    }
                    out.insert(m, c);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.alg);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// (degree, weight) homogeneity verdict across all terms.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        let mut out: Option<(i64, i64)> = None;
        for (m, c) in &self.terms {
            let d = self.alg.mono_degree(m);
            let w = match c.weight_of() {
                WeightOf::Every => continue,
                WeightOf::Of(pw) => pw + self.alg.mono_weight(m),
                WeightOf::Inhomogeneous => return None,
            };
            match out {
                None => out = Some((d, w)),
                Some(prev) if prev == (d, w) => {}
                Some(_) => return None,
            }
        }
        out
    }

    /// Every term has the given homological degree and weight.
    pub fn homogeneous_of(&self, degree: i64, weight: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        for (m, c) in &self.terms {
            if self.alg.mono_degree(m) != degree {
                return false;
            }
            match c.weight_of() {
                WeightOf::Every => {}
                WeightOf::Of(pw) => {
                    if pw + self.alg.mono_weight(m) != weight {
                        return false;
                    }
                }
                WeightOf::Inhomogeneous => return false,
            }
        }
        true
    }

    /// Transport along a base-ring map and generator reindexing into a
    /// larger algebra. `gen_map[i]` is the index of generator i in `to`.
    pub fn transport(&self, to: &Arc<DgAlgebra>, base_map: &RingMap<Q>, gen_map: &[usize]) -> Result<Self> {
        let mut out = DgElement::zero(to);
        for (m, c) in &self.terms {
            let mut m2 = vec![0u32; to.gens.len()];
            for (i, &e) in m.iter().enumerate() {
                m2[gen_map[i]] += e;
            }
            out.insert(m2, base_map.apply(c)?);
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.iter().all(|&e| e == 0) {
                    format!("({})", c)
                } else if c.is_constant() && *c == QPoly::one(&c.ring) {
                    self.alg.mono_label(m)
                } else {
                    format!("({})*{}", c, self.alg.mono_label(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A validated semifree presentation: the free graded-commutative algebra
/// plus a square-zero degree -1 derivation given on generators.
#[derive(Debug, Clone, PartialEq)]
pub struct DgPresentation {
    pub alg: Arc<DgAlgebra>,
    /// differential of each generator, parallel to `alg.gens`
    pub diffs: Vec<DgElement>,
}

impl DgPresentation {
    /// The base ring viewed as a dg-algebra with no higher generators.
    pub fn discrete(base: &Arc<WeightedRing>) -> Result<Self> {
        let alg = DgAlgebra::new(base, Vec::new())?;
        Ok(DgPresentation {
            alg,
            diffs: Vec::new(),
        })
    }

    /// Derivation extending d(gen_i) = diffs[i] (and 0 on the base) by the
    /// Leibniz rule.
    pub fn differential(&self, elem: &DgElement) -> DgElement {
        let alg = &self.alg;
        let mut out = DgElement::zero(alg);
        for (m, c) in &elem.terms {
            // d(c * m) = c * d(m); base coefficients are cycles
            let mut prefix_parity = false;
            for k in 0..alg.gens.len() {
                let e = m[k];
                if e > 0 && !self.diffs[k].is_zero() {
                    // left part: indices <= k with e_k reduced by one
                    let mut left = vec![0u32; alg.gens.len()];
                    for j in 0..=k {
                        left[j] = m[j];
                    }
                    left[k] = e - 1;
                    let mut right = vec![0u32; alg.gens.len()];
                    for j in (k + 1)..alg.gens.len() {
                        right[j] = m[j];
                    }
                    let coeff = if alg.gens[k].odd() {
                        Q::one()
                    } else {
                        crate::scalar::q(e as i64)
                    };
                    let mut piece = DgElement::monomial(alg, left, c.clone())
                        .mul(&self.diffs[k])
                        .mul(&DgElement::monomial(alg, right, QPoly::one(&alg.base)))
                        .scale(&coeff);
                    if prefix_parity {
                        piece = piece.neg();
                    }
                    out = out.add(&piece);
                }
                if alg.gens[k].odd() && e % 2 == 1 {
                    prefix_parity = !prefix_parity;
                }
            }
        }
        out
    }

    /// Serialized generator table in canonical order: name, degree, weight,
    /// differential. Includes the sign convention marker.
    pub fn serialize(&self) -> String {
        let mut out = String::from("convention: d of degree -1, d(ab) = (da)b + (-1)^|a| a(db)\n");
        out.push_str(&format!(
            "base: {}\n",
            self.alg
                .base
                .vars
                .iter()
                .map(|(n, w)| format!("{}:{}", n, w))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        for (g, d) in self.alg.gens.iter().zip(&self.diffs) {
            out.push_str(&format!(
                "gen {} deg {} wt {} d -> {}\n",
                g.name,
                g.degree,
                g.weight,
                d.render()
            ));
        }
        out
    }
}

/// Build and validate a semifree presentation: homogeneity of every
/// differential assignment, and d.d = 0 on every generator (sufficient in
/// characteristic zero since d.d is a derivation).
pub fn semifree(
    base: &Arc<WeightedRing>,
    gens: Vec<ExtGen>,
    diffs: Vec<DgElement>,
) -> Result<DgPresentation> {
    if gens.len() != diffs.len() {
        return Err(Error::Invalid("one differential per generator required".into()));
    }
    let alg = DgAlgebra::new(base, gens)?;
    // re-point the provided differentials at the validated algebra
    let diffs: Vec<DgElement> = diffs
        .into_iter()
        .map(|d| DgElement {
            alg: alg.clone(),
            terms: d.terms,
        })
        .collect();
    let pres = DgPresentation {
        alg: alg.clone(),
        diffs,
    };
    for (i, g) in alg.gens.iter().enumerate() {
        if !pres.diffs[i].homogeneous_of(g.degree - 1, g.weight) {
            return Err(Error::Inhomogeneous(format!(
                "d({}) must be homogeneous of degree {} and weight {}, got {}",
                g.name,
                g.degree - 1,
                g.weight,
                pres.diffs[i].render()
            )));
        }
    }
    for (i, g) in alg.gens.iter().enumerate() {
        let dd = pres.differential(&pres.diffs[i]);
        if !dd.is_zero() {
            return Err(Error::DifferentialSquare {
                gen: g.name.clone(),
                residual: dd.render(),
            });
        }
    }
    Ok(pres)
}

/// Koszul presentation on a list of weight-homogeneous base elements:
/// exterior generators eps_i of degree 1 with d(eps_i) = f_i.
pub fn koszul(base: &Arc<WeightedRing>, f: &[QPoly], prefix: &str) -> Result<DgPresentation> {
    let mut gens = Vec::new();
    let mut diffs = Vec::new();
    // validate weights first
    let mut weights = Vec::new();
    for (i, fi) in f.iter().enumerate() {
        match fi.weight_of() {
            WeightOf::Of(w) => weights.push(w),
            WeightOf::Every => weights.push(0),
            WeightOf::Inhomogeneous => {
                return Err(Error::Inhomogeneous(format!(
                    "koszul element #{}: {}",
                    i, fi
                )))
            }
        }
    }
    for (i, w) in weights.iter().enumerate() {
        gens.push(ExtGen {
            name: if f.len() == 1 {
                prefix.to_string()
            } else {
                format!("{}{}", prefix, i + 1)
            },
            degree: 1,
            weight: *w,
        });
    }
    let alg = DgAlgebra::new(base, gens.clone())?;
    for fi in f {
        diffs.push(DgElement::from_base(&alg, fi));
    }
    semifree(base, gens, diffs)
}

/// Tensor product over the shared base: union of generator sets with the
/// combined differential. Models the derived pushout since both inputs are
/// semifree.
pub fn dg_tensor(b: &DgPresentation, c: &DgPresentation) -> Result<DgPresentation> {
    if !b.alg.base.same_vars(&c.alg.base) {
        return Err(Error::RingMismatch("dg_tensor: different bases".into()));
    }
    let mut gens = b.alg.gens.clone();
    let taken: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let mut renamed = Vec::new();
    for g in &c.alg.gens {
        let mut name = g.name.clone();
        while taken.contains(&name) || renamed.contains(&name) {
            name.push('\'');
        }
        renamed.push(name.clone());
        gens.push(ExtGen {
            name,
            degree: g.degree,
            weight: g.weight,
        });
    }
    let alg = DgAlgebra::new(&b.alg.base, gens.clone())?;
    let id = RingMap::identity(&b.alg.base);
    let b_map: Vec<usize> = (0..b.alg.gens.len()).collect();
    let c_map: Vec<usize> = (0..c.alg.gens.len())
        .map(|i| b.alg.gens.len() + i)
        .collect();
    let mut diffs = Vec::new();
    for d in &b.diffs {
        diffs.push(d.transport(&alg, &id, &b_map)?);
    }
    for d in &c.diffs {
        diffs.push(d.transport(&alg, &id, &c_map)?);
    }
    semifree(&b.alg.base, gens, diffs)
}

/// Adjoin extra generators (with differentials expressed in the extended
/// algebra builder callback).
pub fn adjoin(
    pres: &DgPresentation,
    extra: Vec<ExtGen>,
    mk_diffs: impl FnOnce(&Arc<DgAlgebra>) -> Result<Vec<DgElement>>,
) -> Result<DgPresentation> {
    let mut gens = pres.alg.gens.clone();
    gens.extend(extra.clone());
    let alg = DgAlgebra::new(&pres.alg.base, gens.clone())?;
    let id = RingMap::identity(&pres.alg.base);
    let old_map: Vec<usize> = (0..pres.alg.gens.len()).collect();
    let mut diffs = Vec::new();
    for d in &pres.diffs {
        diffs.push(d.transport(&alg, &id, &old_map)?);
    }
    let new_diffs = mk_diffs(&alg)?;
    if new_diffs.len() != extra.len() {
        return Err(Error::Invalid("adjoin: wrong number of differentials".into()));
    }
    diffs.extend(new_diffs);
    semifree(&pres.alg.base, gens, diffs)
}

/// Extend the base ring by fresh degree-0 variables; generators and
/// differentials carry over.
pub fn extend_base(pres: &DgPresentation, extra: &[(&str, i64)]) -> Result<DgPresentation> {
    let base = pres.alg.base.extend(extra)?;
    let gens = pres.alg.gens.clone();
    let alg = DgAlgebra::new(&base, gens.clone())?;
    let embed = RingMap::new(
        &pres.alg.base,
        &base,
        pres.alg
            .base
            .vars
            .iter()
            .map(|(n, _)| QPoly::var_named(&base, n))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let gen_map: Vec<usize> = (0..gens.len()).collect();
    let diffs = pres
        .diffs
        .iter()
        .map(|d| d.transport(&alg, &embed, &gen_map))
        .collect::<Result<Vec<_>>>()?;
    semifree(&base, gens, diffs)
}

// --- flattening to linear complexes ---------------------------------------

/// Enumerate exterior monomials with total exponent <= cap, respecting
/// odd-generator exponent caps.
fn enumerate_ext_monos(alg: &DgAlgebra, cap: u32) -> Vec<ExtMono> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; alg.gens.len()];
    fn rec(alg: &DgAlgebra, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExtMono>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        let max_e = if alg.gens[i].odd() { left.min(1) } else { left };
        for e in 0..=max_e {
            cur[i] = e;
            rec(alg, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(alg, 0, cap, &mut cur, &mut out);
    out.sort();
    out
}

/// Flatten the presentation over the window [lo, hi]: monomial bases of
/// each homological degree as free base-modules with exact differential
/// matrices. `filter` restricts the exterior monomials (used for subobject
/// and quotient complexes); entries leaving the filter are projected away.
pub fn flatten_filtered(
    pres: &DgPresentation,
    lo: i64,
    hi: i64,
    bound: u32,
    filter: Option<&dyn Fn(&ExtMono) -> bool>,
) -> Result<Complex> {
    let alg = &pres.alg;
    let ring = alg.base.clone();
    let slack = 1 + alg
        .gens
        .iter()
        .map(|g| g.degree.unsigned_abs() as u32)
        .max()
        .unwrap_or(0);
    let all = enumerate_ext_monos(alg, bound + slack);
    let mut truncated = false;
    let mut basis: BTreeMap<i64, Vec<ExtMono>> = BTreeMap::new();
    for m in &all {
        if let Some(f) = filter {
            if !f(m) {
                continue;
            }
        }
        let d = alg.mono_degree(m);
        let total: u32 = m.iter().sum();
        if total > bound {
            if d >= lo - 1 && d <= hi + 1 {
                truncated = true;
            }
            continue;
        }
        if d >= lo && d <= hi {
            basis.entry(d).or_default().push(m.clone());
        }
    }
    let mut ranks = BTreeMap::new();
    let mut basis_weights = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for n in lo..=hi {
        let bs = basis.entry(n).or_default();
        // earlier generators first within each degree
        bs.sort_by(|a, b| b.cmp(a));
        ranks.insert(n, bs.len());
        basis_weights.insert(n, bs.iter().map(|m| alg.mono_weight(m)).collect());
        labels.insert(
            n,
            bs.iter().map(|m| alg.mono_label(m)).collect::<Vec<_>>(),
        );
    }
    let mut diff = BTreeMap::new();
    for n in lo + 1..=hi {
        let src = &basis[&n];
        let tgt = &basis[&(n - 1)];
        let index: BTreeMap<&ExtMono, usize> =
            tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat: PolyMat = vec![vec![QPoly::zero(&ring); src.len()]; tgt.len()];
        for (j, m) in src.iter().enumerate() {
            let dm = pres.differential(&DgElement::monomial(
                alg,
                m.clone(),
                QPoly::one(&ring),
            ));
            for (m2, c) in &dm.terms {
                if let Some(f) = filter {
                    if !f(m2) {
                        continue; // projected away (quotient complex)
                    }
                }
                match index.get(m2) {
                    Some(&i) => mat[i][j] = mat[i][j].add(c),
                    None => {
                        let total: u32 = m2.iter().sum();
                        if total > bound {
                            truncated = true;
                        } else {
                            return Err(Error::Invalid(format!(
                                "differential left the window: {} at degree {}",
                                alg.mono_label(m2),
                                n - 1
                            )));
                        }
                    }
                }
            }
        }
        diff.insert(n, mat);
    }
    let cx = Complex {
        ring,
        lo,
        hi,
        ranks,
        basis_weights,
        labels,
        diff,
        truncated,
    };
    Ok(cx)
}

pub fn flatten(pres: &DgPresentation, lo: i64, hi: i64, bound: u32) -> Result<Complex> {
    flatten_filtered(pres, lo, hi, bound, None)
}

/// The three-degree slice around n, as needed for homology at n.
pub fn flatten_at(pres: &DgPresentation, n: i64, bound: u32) -> Result<Complex> {
    flatten(pres, n - 1, n + 1, bound)
}

/// Homology of the presentation at degree n. Errors out rather than
/// reporting a module computed from truncated data.
pub fn homology_of(
    pres: &DgPresentation,
    n: i64,
    bound: u32,
) -> Result<crate::homology::FPModule> {
    let cx = flatten_at(pres, n, bound)?;
    if cx.truncated {
        return Err(Error::BoundExceeded(format!(
            "homology at degree {} not determined within enumeration bound {}",
            n, bound
        )));
    }
    crate::homology::homology_at(&cx, n)
}

/// Vanishing verdicts for H_n, n in [n_min, -1].
pub fn is_connective(
    pres: &DgPresentation,
    n_min: i64,
    bound: u32,
) -> Result<crate::homology::ConnectivityReport> {
    let cx = flatten(pres, n_min - 1, 0, bound)?;
    crate::homology::connectivity_from_complex(&cx, n_min, bound)
}

// --- morphisms -------------------------------------------------------------

/// A dg-algebra morphism given on base variables and generators; validated
/// to preserve (degree, weight) and commute with the differentials.
#[derive(Debug, Clone)]
pub struct DgMorphism {
    pub source: DgPresentation,
    pub target: DgPresentation,
    pub base_map: RingMap<Q>,
    pub gen_images: Vec<DgElement>,
}

impl DgMorphism {
    pub fn new(
        source: &DgPresentation,
        target: &DgPresentation,
        base_map: RingMap<Q>,
        gen_images: Vec<DgElement>,
    ) -> Result<Self> {
        if gen_images.len() != source.alg.gens.len() {
            return Err(Error::Invalid(
                "morphism: one image per source generator required".into(),
            ));
        }
        if !base_map.source.same_vars(&source.alg.base)
            || !base_map.target.same_vars(&target.alg.base)
        {
            return Err(Error::RingMismatch("morphism: base map mismatch".into()));
        }
        if !base_map.is_weight_preserving() {
            return Err(Error::Inhomogeneous("morphism: base map not weight-preserving".into()));
        }
        let m = DgMorphism {
            source: source.clone(),
            target: target.clone(),
            base_map,
            gen_images,
        };
        for (i, g) in source.alg.gens.iter().enumerate() {
            if !m.gen_images[i].homogeneous_of(g.degree, g.weight) {
                return Err(Error::Inhomogeneous(format!(
                    "morphism image of {} not homogeneous of ({}, {})",
                    g.name, g.degree, g.weight
                )));
            }
        }
        // d(phi(g)) = phi(d(g)) on every generator
        for (i, g) in source.alg.gens.iter().enumerate() {
            let lhs = m.target.differential(&m.gen_images[i]);
            let rhs = m.apply(&source.diffs[i])?;
            if !lhs.sub(&rhs).is_zero() {
                return Err(Error::Invalid(format!(
                    "morphism does not commute with d on {}",
                    g.name
                )));
            }
        }
        Ok(m)
    }

    pub fn identity(pres: &DgPresentation) -> Result<Self> {
        let images = (0..pres.alg.gens.len())
            .map(|i| DgElement::gen(&pres.alg, i))
            .collect();
        DgMorphism::new(pres, pres, RingMap::identity(&pres.alg.base), images)
    }

    pub fn apply(&self, elem: &DgElement) -> Result<DgElement> {
        let mut out = DgElement::zero(&self.target.alg);
        for (m, c) in &elem.terms {
            let mut t = DgElement::from_base(&self.target.alg, &self.base_map.apply(c)?);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&self.gen_images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Chain-level matrices between flattened slices of source and target.
    /// The source complex is transported into the target base ring so the
    /// cone lives over one ring; sound when the base map identifies the
    /// rings, which `quasi_iso_in_range` enforces.
    pub fn to_chain_map(&self, src_cx: &Complex, tgt_cx: &Complex) -> Result<ChainMap> {
        let src_cx_t = src_cx.map_ring(&self.base_map)?;
        let mut mats = BTreeMap::new();
        let mut truncated = false;
        let lo = src_cx.lo.max(tgt_cx.lo);
        let hi = src_cx.hi.min(tgt_cx.hi);
        for n in lo..=hi {
            let src_labels = &src_cx.labels[&n];
            let _ = src_labels;
            let src_rank = src_cx.rank(n);
            let tgt_rank = tgt_cx.rank(n);
            let mut mat = vec![vec![QPoly::zero(&tgt_cx.ring); src_rank]; tgt_rank];
            // rebuild source basis monomials from labels is fragile; instead
            // recompute them the same way flatten does
            let src_basis = basis_at(&self.source, src_cx, n);
            let tgt_basis = basis_at(&self.target, tgt_cx, n);
            let index: BTreeMap<&ExtMono, usize> =
                tgt_basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
            for (j, m) in src_basis.iter().enumerate() {
                let img = self.apply(&DgElement::monomial(
                    &self.source.alg,
                    m.clone(),
                    QPoly::one(&self.source.alg.base),
                ))?;
                for (m2, c) in &img.terms {
                    match index.get(m2) {
                        Some(&i) => mat[i][j] = mat[i][j].add(c),
                        None => {
                            let d2 = self.target.alg.mono_degree(m2);
                            if d2 == n {
                                truncated = true;
                            }
                            // degrees outside the window were never requested
                        }
                    }
                }
            }
            mats.insert(n, mat);
        }
        Ok(ChainMap {
            source: src_cx_t,
            target: tgt_cx.clone(),
            mats,
            truncated: truncated || src_cx.truncated || tgt_cx.truncated,
        })
    }
}

/// Reconstruct the exterior-monomial basis of a flattened degree from the
/// complex labels (flatten stores them in enumeration order).
fn basis_at(pres: &DgPresentation, cx: &Complex, n: i64) -> Vec<ExtMono> {
    let alg = &pres.alg;
    let labels = cx.labels.get(&n).cloned().unwrap_or_default();
    // enumerate and match by label, preserving the stored basis order
    let mut by_label: BTreeMap<String, ExtMono> = BTreeMap::new();
    for m in enumerate_ext_monos(alg, label_cap(&labels)) {
        if alg.mono_degree(&m) == n {
            by_label.insert(alg.mono_label(&m), m);
        }
    }
    labels
        .iter()
        .map(|l| {
            by_label
                .get(l)
                .cloned()
                .unwrap_or_else(|| vec![0u32; alg.gens.len()])
        })
        .collect()
}

fn label_cap(labels: &[String]) -> u32 {
    // the largest total exponent appearing in any label, conservatively
    let mut cap = 1u32;
    for l in labels {
        let mut total = 0u32;
        for part in l.split('*') {
            if let Some((_, e)) = part.split_once('^') {
                total += e.parse::<u32>().unwrap_or(1);
            } else if part != "1" {
                total += 1;
            }
        }
        cap = cap.max(total);
    }
    cap
}

/// Does the map send base variables bijectively to base variables?
fn base_map_is_variable_bijection(map: &RingMap<Q>) -> bool {
    if map.source.nvars() != map.target.nvars() {
        return false;
    }
    let mut seen = vec![false; map.target.nvars()];
    for img in &map.images {
        if img.terms.len() != 1 {
            return false;
        }
        let (m, c) = img.lead().unwrap();
        if !c.is_one() || m.total_degree() != 1 {
            return false;
        }
        let idx = m.0.iter().position(|&e| e == 1).unwrap();
        if seen[idx] {
            return false;
        }
        seen[idx] = true;
    }
    true
}

/// Presentation isomorphism up to canonical renaming of generators: same
/// base variables, same (degree, weight) sequence, identical differentials
/// as coefficient tables.
pub fn same_up_to_names(a: &DgPresentation, b: &DgPresentation) -> bool {
    a.alg.base.same_vars(&b.alg.base)
        && a.alg.gens.len() == b.alg.gens.len()
        && a.alg
            .gens
            .iter()
            .zip(&b.alg.gens)
            .all(|(x, y)| x.degree == y.degree && x.weight == y.weight)
        && a.diffs.iter().zip(&b.diffs).all(|(x, y)| x.terms == y.terms)
}

/// Composition outer . inner, validated.
pub fn compose(outer: &DgMorphism, inner: &DgMorphism) -> Result<DgMorphism> {
    let base_images = inner
        .base_map
        .images
        .iter()
        .map(|p| outer.base_map.apply(p))
        .collect::<Result<Vec<_>>>()?;
    let base_map = RingMap::new(&inner.source.alg.base, &outer.target.alg.base, base_images)?;
    let gen_images = inner
        .gen_images
        .iter()
        .map(|e| outer.apply(e))
        .collect::<Result<Vec<_>>>()?;
    DgMorphism::new(&inner.source, &outer.target, base_map, gen_images)
}

fn morphisms_equal(a: &DgMorphism, b: &DgMorphism) -> bool {
    a.base_map
        .images
        .iter()
        .zip(&b.base_map.images)
        .all(|(p, q)| p == q)
        && a.gen_images
            .iter()
            .zip(&b.gen_images)
            .all(|(x, y)| x.terms == y.terms)
}

/// Solve d(u) = z at homological degree n by expressing z in the columns of
/// the flattened differential. None when no solution is found within the
/// bound.
fn d_preimage(
    pres: &DgPresentation,
    z: &DgElement,
    n: i64,
    bound: u32,
) -> Result<Option<DgElement>> {
    if z.is_zero() {
        return Ok(Some(DgElement::zero(&pres.alg)));
    }
    let cx = flatten(pres, n - 1, n, bound)?;
    if cx.truncated {
        return Ok(None);
    }
    let src_basis = basis_at(pres, &cx, n);
    let tgt_basis = basis_at(pres, &cx, n - 1);
    let index: BTreeMap<&ExtMono, usize> =
        tgt_basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut zvec = vec![QPoly::zero(&pres.alg.base); tgt_basis.len()];
    for (m, c) in &z.terms {
        match index.get(m) {
            Some(&i) => zvec[i] = zvec[i].add(c),
            None => return Ok(None),
        }
    }
    if src_basis.is_empty() {
        return Ok(None);
    }
    let d = cx.d(n);
    let cols: Vec<Vec<QPoly>> = (0..src_basis.len())
        .map(|j| (0..tgt_basis.len()).map(|i| d[i][j].clone()).collect())
        .collect();
    match crate::groebner::lift(&zvec, &cols)? {
        None => Ok(None),
        Some(coeffs) => {
            let mut u = DgElement::zero(&pres.alg);
            for (j, c) in coeffs.iter().enumerate() {
                u = u.add(&DgElement::monomial(&pres.alg, src_basis[j].clone(), c.clone()));
            }
            Ok(Some(u))
        }
    }
}

/// Rewrite the morphism so the base map identifies the base rings, when
/// possible: for each source variable x with image p, adjoin a fresh base
/// variable x' and a contractible Koszul generator with differential
/// x' - p to the target. The padded target T' is quasi-isomorphic to the
/// old one since the elements x' - p form a regular sequence, and the
/// projection pi: T' -> T is a surjective quasi-isomorphism. Generator
/// images are re-lifted along pi degree by degree and the factorization
/// pi . phi' = phi is verified exactly, which makes verdicts about phi'
/// equivalent to verdicts about phi. Returns None when no exact
/// identification is found.
fn identify_bases(phi: &DgMorphism, bound: u32) -> Result<Option<DgMorphism>> {
    if base_map_is_variable_bijection(&phi.base_map) {
        return Ok(Some(phi.clone()));
    }
    if phi.target.alg.base.nvars() != 0 {
        return Ok(None);
    }
    let src_vars = phi.source.alg.base.vars.clone();
    let mut names: Vec<String> = Vec::new();
    for (n, _) in &src_vars {
        let mut name = n.clone();
        while phi.target.alg.gens.iter().any(|g| g.name == name) || names.contains(&name) {
            name.push('\'');
        }
        names.push(name);
    }
    let extra: Vec<(&str, i64)> = names
        .iter()
        .zip(&src_vars)
        .map(|(n, (_, w))| (n.as_str(), *w))
        .collect();
    let t_ext = extend_base(&phi.target, &extra)?;
    let mut xi_gens = Vec::new();
    for (i, (_, w)) in src_vars.iter().enumerate() {
        let mut name = format!("{}~", names[i]);
        while t_ext.alg.gens.iter().any(|g| g.name == name)
            || xi_gens.iter().any(|g: &ExtGen| g.name == name)
        {
            name.push('\'');
        }
        xi_gens.push(ExtGen {
            name,
            degree: 1,
            weight: *w,
        });
    }
    let old_images = phi.base_map.images.clone();
    let names_for_diff = names.clone();
    let padded = adjoin(&t_ext, xi_gens, |alg| {
        let mut out = Vec::new();
        for (i, p) in old_images.iter().enumerate() {
            let xv = QPoly::var_named(&alg.base, &names_for_diff[i])?;
            out.push(DgElement::from_base(alg, &xv.sub(&p.embed(&alg.base)?)));
        }
        Ok(out)
    })?;
    let base_map = RingMap::new(
        &phi.source.alg.base,
        &padded.alg.base,
        names
            .iter()
            .map(|n| QPoly::var_named(&padded.alg.base, n))
            .collect::<Result<Vec<_>>>()?,
    )?;
    // the projection pi: padded -> target (x' -> p, xi -> 0)
    let pi_base = RingMap::new(
        &padded.alg.base,
        &phi.target.alg.base,
        phi.base_map.images.clone(),
    )?;
    let mut pi_images: Vec<DgElement> = (0..phi.target.alg.gens.len())
        .map(|i| DgElement::gen(&phi.target.alg, i))
        .collect();
    pi_images.extend(
        (0..src_vars.len()).map(|_| DgElement::zero(&phi.target.alg)),
    );
    let pi = DgMorphism::new(&padded, &phi.target, pi_base, pi_images)?;

    // re-lift generator images through pi, in presentation order; the
    // differential of each generator may only involve earlier ones
    let n_src = phi.source.alg.gens.len();
    let mut gen_images: Vec<DgElement> = Vec::new();
    for i in 0..n_src {
        for (m, _) in &phi.source.diffs[i].terms {
            if m.iter().skip(i).any(|&e| e > 0) {
                return Ok(None);
            }
        }
        // image of d(g_i) under the partial morphism
        let mut z = DgElement::zero(&padded.alg);
        for (m, c) in &phi.source.diffs[i].terms {
            let mut t = DgElement::from_base(&padded.alg, &base_map.apply(c)?);
            for (j, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&gen_images[j].pow(e));
                }
            }
            z = z.add(&t);
        }
        match d_preimage(&padded, &z, phi.source.alg.gens[i].degree, bound)? {
            Some(u) => gen_images.push(u),
            None => return Ok(None),
        }
    }
    let lifted = DgMorphism::new(&phi.source, &padded, base_map, gen_images)?;
    if !morphisms_equal(&compose(&pi, &lifted)?, phi) {
        return Ok(None);
    }
    Ok(Some(lifted))
}

/// Quasi-isomorphism test in a homological range: identify the base rings,
/// flatten both sides, build the mapping cone, and check exact vanishing of
/// its homology.
pub fn quasi_iso_in_range(
    phi: &DgMorphism,
    lo: i64,
    hi: i64,
    bound: u32,
) -> Result<crate::homology::QuasiIso> {
    let phi = match identify_bases(phi, bound)? {
        Some(p) => p,
        None => {
            return Ok(crate::homology::QuasiIso::Inconclusive {
                reason: "base rings not identified by the morphism; no exact comparison over a common ring".into(),
            })
        }
    };
    let src_cx = flatten(&phi.source, lo - 2, hi + 2, bound)?;
    let tgt_cx = flatten(&phi.target, lo - 2, hi + 2, bound)?;
    let f = phi.to_chain_map(&src_cx, &tgt_cx)?;
    crate::homology::chain_map_quasi_iso(&f, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology_at, DegreeVerdict, FPModule, PieceDim, QuasiIso};
    use crate::poly::MonomialOrder;
    use crate::text::parse_poly;

    fn ring(vars: &[(&str, i64)]) -> Arc<WeightedRing> {
        WeightedRing::new(vars, MonomialOrder::DegRevLex).unwrap()
    }

    fn p(src: &str, r: &Arc<WeightedRing>) -> QPoly {
        parse_poly(src, r).unwrap()
    }

    fn kz(r: &Arc<WeightedRing>, fs: &[&str], prefix: &str) -> DgPresentation {
        let polys: Vec<QPoly> = fs.iter().map(|s| p(s, r)).collect();
        koszul(r, &polys, prefix).unwrap()
    }

    #[test]
    fn koszul_on_x_is_valid() {
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["x"], "e");
        assert_eq!(b.alg.gens.len(), 1);
        assert_eq!(b.alg.gens[0].degree, 1);
        assert!(b.serialize().contains("d(ab) = (da)b"));
    }

    #[test]
    fn inconsistent_differential_rejected() {
        // d(theta) = theta*x is not degree-homogeneous for deg(theta) = 1
        let r = ring(&[("x", 0)]);
        let gens = vec![ExtGen { name: "th".into(), degree: 1, weight: 0 }];
        let alg = DgAlgebra::new(&r, gens.clone()).unwrap();
        let d = DgElement::monomial(&alg, vec![1], p("x", &r));
        assert!(semifree(&r, gens, vec![d]).is_err());
    }

    #[test]
    fn d_square_residual_reported() {
        // e deg 1 with de = x, h deg 2 with dh = x*e: d(dh) = x^2 != 0
        let r = ring(&[("x", 0)]);
        let gens = vec![
            ExtGen { name: "e".into(), degree: 1, weight: 0 },
            ExtGen { name: "h".into(), degree: 2, weight: 0 },
        ];
        let alg = DgAlgebra::new(&r, gens.clone()).unwrap();
        let de = DgElement::from_base(&alg, &p("x", &r));
        let dh = DgElement::monomial(&alg, vec![1, 0], p("x", &r));
        match semifree(&r, gens, vec![de, dh]) {
            Err(Error::DifferentialSquare { gen, .. }) => assert_eq!(gen, "h"),
            other => panic!("expected d^2 error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn discrete_algebra_is_valid() {
        let r = ring(&[("x", 0)]);
        let b = DgPresentation::discrete(&r).unwrap();
        assert!(b.alg.gens.is_empty());
    }

    #[test]
    fn odd_generators_anticommute_and_square_to_zero() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let b = kz(&r, &["x", "y"], "e");
        let e1 = DgElement::gen(&b.alg, 0);
        let e2 = DgElement::gen(&b.alg, 1);
        assert!(e1.mul(&e1).is_zero());
        assert!(e1.mul(&e2).add(&e2.mul(&e1)).is_zero());
        // d(e1*e2) = x*e2 - y*e1
        let d = b.differential(&e1.mul(&e2));
        let expect = DgElement::monomial(&b.alg, vec![0, 1], p("x", &r))
            .add(&DgElement::monomial(&b.alg, vec![1, 0], p("-y", &r)));
        assert!(d.sub(&expect).is_zero());
    }

    #[test]
    fn even_generator_powers_follow_leibniz() {
        // u deg 2 with du = 0; d(u^2 * e) = u^2 * x
        let r = ring(&[("x", 0)]);
        let gens = vec![
            ExtGen { name: "e".into(), degree: 1, weight: 0 },
            ExtGen { name: "u".into(), degree: 2, weight: 0 },
        ];
        let alg = DgAlgebra::new(&r, gens.clone()).unwrap();
        let de = DgElement::from_base(&alg, &p("x", &r));
        let du = DgElement::zero(&alg);
        let pres = semifree(&r, gens, vec![de, du]).unwrap();
        let elem = DgElement::monomial(&pres.alg, vec![1, 2], QPoly::one(&r));
        let d = pres.differential(&elem);
        let expect = DgElement::monomial(&pres.alg, vec![0, 2], p("x", &r));
        assert!(d.sub(&expect).is_zero());
    }

    #[test]
    fn tensor_of_koszuls_is_koszul_on_union() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let t = dg_tensor(&kz(&r, &["x"], "e1"), &kz(&r, &["y"], "e2")).unwrap();
        assert!(same_up_to_names(&t, &kz(&r, &["x", "y"], "e")));
        // unit: B (x) A = B
        let unit = dg_tensor(&kz(&r, &["x"], "e1"), &DgPresentation::discrete(&r).unwrap()).unwrap();
        assert!(same_up_to_names(&unit, &kz(&r, &["x"], "e1")));
    }

    #[test]
    fn self_intersection_has_h1() {
        let r = ring(&[("x", 0)]);
        let t = dg_tensor(&kz(&r, &["x"], "e"), &kz(&r, &["x"], "f")).unwrap();
        let h1 = homology_of(&t, 1, 8).unwrap();
        assert!(!h1.is_zero());
        assert!(h1.annihilated_by(&p("x", &r)));
        // the class of e - f generates: H1 is one-dimensional over the quotient
        assert_eq!(h1.piece_dimension(0, 8), PieceDim::Finite(1));
    }

    #[test]
    fn flatten_koszul_plane() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let b = kz(&r, &["x", "y"], "e");
        let cx = flatten(&b, 0, 2, 8).unwrap();
        assert!(!cx.truncated);
        assert_eq!(cx.rank(0), 1);
        assert_eq!(cx.rank(1), 2);
        assert_eq!(cx.rank(2), 1);
        cx.check_dd_zero().unwrap();
        let d1 = cx.d(1);
        assert_eq!(d1[0][0], p("x", &r));
        assert_eq!(d1[0][1], p("y", &r));
        let d2 = cx.d(2);
        assert_eq!(d2[0][0], p("-y", &r));
        assert_eq!(d2[1][0], p("x", &r));
    }

    #[test]
    fn flatten_below_generators_is_zero() {
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["x"], "e");
        let cx = flatten(&b, -3, -1, 8).unwrap();
        for n in -3..=-1 {
            assert_eq!(cx.rank(n), 0);
        }
    }

    #[test]
    fn negative_exterior_generator_slice() {
        let r = ring(&[("t_inv", -1)]);
        let gens = vec![ExtGen { name: "h".into(), degree: -1, weight: 1 }];
        let alg = DgAlgebra::new(&r, gens.clone()).unwrap();
        let pres = semifree(&r, gens, vec![DgElement::zero(&alg)]).unwrap();
        let cx = flatten(&pres, -2, 0, 8).unwrap();
        assert_eq!(cx.rank(-1), 1);
        assert_eq!(cx.rank(-2), 0); // h^2 = 0
        let rep = is_connective(&pres, -2, 8).unwrap();
        assert_eq!(rep.verdicts[&-1], DegreeVerdict::NonZero);
        assert_eq!(rep.verdicts[&-2], DegreeVerdict::Zero);
    }

    #[test]
    fn koszul_regularity_plane() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let b = kz(&r, &["x", "y"], "e");
        assert!(homology_of(&b, 1, 8).unwrap().is_zero());
        assert!(homology_of(&b, 2, 8).unwrap().is_zero());
        let h0 = homology_of(&b, 0, 8).unwrap();
        assert!(!h0.is_zero());
        assert!(h0.annihilated_by(&p("x", &r)));
        assert!(h0.annihilated_by(&p("y", &r)));
        assert_eq!(h0.piece_dimension(0, 8), PieceDim::Finite(1));
    }

    #[test]
    fn repeated_generator_gives_quotient_h1() {
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["x", "x"], "e");
        let h1 = homology_of(&b, 1, 8).unwrap();
        assert!(!h1.is_zero());
        assert!(h1.annihilated_by(&p("x", &r)));
        assert_eq!(h1.piece_dimension(0, 8), PieceDim::Finite(1));
    }

    #[test]
    fn base_only_h0_is_free() {
        let r = ring(&[("x", 0)]);
        let b = DgPresentation::discrete(&r).unwrap();
        let h0 = homology_of(&b, 0, 8).unwrap();
        assert_eq!(h0.gens, 1);
        assert!(h0.relations.is_empty());
        assert!(homology_of(&b, 1, 8).unwrap().is_zero());
    }

    #[test]
    fn koszul_with_zero_differential_has_free_h1() {
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["0"], "e");
        let h1 = homology_of(&b, 1, 8).unwrap();
        assert_eq!(h1.gens, 1);
        assert!(h1.relations.is_empty());
    }

    #[test]
    fn connectivity_of_koszul_algebras() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let b = kz(&r, &["x", "y"], "e");
        let rep = is_connective(&b, -3, 8).unwrap();
        assert!(rep.all_zero());
    }

    #[test]
    fn piece_dimensions() {
        let r = ring(&[("n1", 1), ("n2", 1)]);
        let free = FPModule::free(&r, 1, vec![0]);
        assert_eq!(free.piece_dimension(2, 8), PieceDim::Finite(3));
        let zero = FPModule::zero(&r);
        assert_eq!(zero.piece_dimension(0, 8), PieceDim::Finite(0));
        let rx = ring(&[("x", 0)]);
        let quot = FPModule {
            ring: rx.clone(),
            gens: 1,
            gen_weights: vec![Some(0)],
            relations: vec![vec![p("x", &rx)]],
        };
        assert_eq!(quot.piece_dimension(0, 8), PieceDim::Finite(1));
    }

    #[test]
    fn identity_is_quasi_iso() {
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["x"], "e");
        let id = DgMorphism::identity(&b).unwrap();
        assert_eq!(quasi_iso_in_range(&id, 0, 2, 8).unwrap(), QuasiIso::True);
    }

    #[test]
    fn regular_quotient_map_is_quasi_iso() {
        // Koszul(Q[x]; x) -> Q with x -> 0, e -> 0: the discrete quotient
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["x"], "e");
        let q0 = ring(&[]);
        let t = DgPresentation::discrete(&q0).unwrap();
        let phi = DgMorphism::new(
            &b,
            &t,
            RingMap::new(&r, &q0, vec![QPoly::zero(&q0)]).unwrap(),
            vec![DgElement::zero(&t.alg)],
        )
        .unwrap();
        assert_eq!(quasi_iso_in_range(&phi, 0, 2, 8).unwrap(), QuasiIso::True);
    }

    #[test]
    fn non_quasi_iso_detected_with_witness() {
        // Koszul(Q[x]; 0) -> Q[x], e -> 0: H1 = Q[x] on the left
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["0"], "e");
        let t = DgPresentation::discrete(&r).unwrap();
        let phi = DgMorphism::new(
            &b,
            &t,
            RingMap::identity(&r),
            vec![DgElement::zero(&t.alg)],
        )
        .unwrap();
        assert_eq!(
            quasi_iso_in_range(&phi, 0, 2, 8).unwrap(),
            QuasiIso::False { witness_degree: 1 }
        );
    }

    #[test]
    fn self_intersection_inclusion_fails_on_h1() {
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["x"], "e");
        let t = dg_tensor(&kz(&r, &["x"], "e"), &kz(&r, &["x"], "f")).unwrap();
        let phi = DgMorphism::new(
            &b,
            &t,
            RingMap::identity(&r),
            vec![DgElement::gen(&t.alg, 1)],
        )
        .unwrap();
        assert_eq!(
            quasi_iso_in_range(&phi, 0, 2, 8).unwrap(),
            QuasiIso::False { witness_degree: 1 }
        );
    }

    #[test]
    fn composition_of_quasi_isos() {
        let r = ring(&[("x", 0)]);
        let b = kz(&r, &["x"], "e");
        let id = DgMorphism::identity(&b).unwrap();
        let c = compose(&id, &id).unwrap();
        assert_eq!(quasi_iso_in_range(&c, 0, 2, 8).unwrap(), QuasiIso::True);
    }

    #[test]
    fn homology_relations_annihilate() {
        // exactness sanity on a flattened slice
        let r = ring(&[("x", 0), ("y", 0)]);
        let b = kz(&r, &["x*y", "x^2"], "e");
        let cx = flatten(&b, -1, 2, 8).unwrap();
        cx.check_dd_zero().unwrap();
        let h0 = homology_at(&cx, 0).unwrap();
        assert!(!h0.is_zero());
        assert!(h0.annihilated_by(&p("x*y", &r)));
        assert!(h0.annihilated_by(&p("x^2", &r)));
    }
}
