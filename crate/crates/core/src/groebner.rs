//! Groebner bases for ideals and submodules of free modules, normal forms,
//! syzygies, elimination and saturation. This is the discrete (pi_0-level)
//! computational kernel for the whole crate.
//!
//! Determinism: pair selection uses the normal strategy (minimal lcm total
//! degree, ties broken by pair index), the output is the unique reduced
//! basis sorted in decreasing leading-term order, so identical inputs give
//! identical serialized bases.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial, WeightedRing};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct GroebnerBasis<C: Scalar> {
    /// Ring carrying the working order (variables identical to the input ring).
    pub ring: Arc<WeightedRing>,
    pub gens: Vec<Polynomial<C>>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

fn full_reduce<C: Scalar>(p: &Polynomial<C>, basis: &[Polynomial<C>]) -> Polynomial<C> {
    let ring = p.ring.clone();
    let mut work = p.clone();
    let mut rem = Polynomial::zero(&ring);
    'outer: while let Some((lm, lc)) = work.lead().map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            if let Some((gm, gc)) = g.lead() {
                if let Some(q) = lm.checked_div(gm) {
                    let factor = lc.clone() / gc.clone();
                    work = work.sub(&g.mul_term(&q, &factor));
                    continue 'outer;
                }
            }
        }
        // leading term irreducible: move it to the remainder
        rem = rem.add(&Polynomial::monomial(&ring, lm.clone(), lc.clone()));
        work = work.sub(&Polynomial::monomial(&ring, lm, lc));
    }
    rem
}

/// S-polynomial of two monic-or-not polynomials.
pub fn s_poly<C: Scalar>(f: &Polynomial<C>, g: &Polynomial<C>) -> Polynomial<C> {
    let (fm, fc) = f.lead().expect("s_poly of zero");
    let (gm, gc) = g.lead().expect("s_poly of zero");
    let l = fm.lcm(gm);
    let qf = l.checked_div(fm).unwrap();
    let qg = l.checked_div(gm).unwrap();
    f.mul_term(&qf, &fc.inv()).sub(&g.mul_term(&qg, &gc.inv()))
}

/// Reduced Groebner basis of the ideal generated by `gens`, under `order`.
pub fn buchberger<C: Scalar>(
    gens: &[Polynomial<C>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<C>> {
    let ring0 = gens
        .first()
        .map(|p| p.ring.clone())
        .ok_or_else(|| Error::Invalid("buchberger: empty generator list".into()))?;
    for p in gens {
        if !p.ring.same_vars(&ring0) {
            return Err(Error::RingMismatch("buchberger: mixed rings".into()));
        }
    }
    let ring = ring0.with_order(order.clone());
    let mut basis: Vec<Polynomial<C>> = Vec::new();
    for p in gens {
        let p = p.into_ring(&ring).monic();
        if !p.is_zero() && !basis.contains(&p) {
            basis.push(p);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while !pairs.is_empty() {
        // normal strategy: minimal lcm total degree, ties by pair index
        let mut best = 0usize;
        let mut best_key = u32::MAX;
        for (k, (i, j)) in pairs.iter().enumerate() {
            let li = basis[*i].lead().unwrap().0;
            let lj = basis[*j].lead().unwrap().0;
            let d = li.lcm(lj).total_degree();
            if d < best_key {
                best_key = d;
                best = k;
            }
        }
        let (i, j) = pairs.remove(best);
        let li = basis[i].lead().unwrap().0.clone();
        let lj = basis[j].lead().unwrap().0.clone();
        if li.coprime(&lj) {
            continue; // Buchberger's first criterion
        }
        let s = s_poly(&basis[i], &basis[j]);
        let r = full_reduce(&s, &basis);
        if !r.is_zero() {
            let r = r.monic();
            let new_idx = basis.len();
            basis.push(r);
            for k in 0..new_idx {
                pairs.push((k, new_idx));
            }
        }
    }
    // minimalize: drop elements whose lead is divisible by another lead
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let li = basis[i].lead().unwrap().0;
                let lj = basis[j].lead().unwrap().0;
                if lj.divides(li) && (li != lj || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let minimal: Vec<Polynomial<C>> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect();
    // tail-reduce each against the others
    let mut reduced: Vec<Polynomial<C>> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Polynomial<C>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = full_reduce(&minimal[i], &others).monic();
        if !r.is_zero() {
            reduced.push(r);
        }
    }
    reduced.sort_by(|a, b| {
        let la = a.lead().unwrap().0;
        let lb = b.lead().unwrap().0;
        ring.order.cmp(lb, la)
    });
    Ok(GroebnerBasis {
        ring,
        gens: reduced,
        order,
        reduced: true,
    })
}

impl<C: Scalar> GroebnerBasis<C> {
    /// The unique remainder of `p` modulo the basis.
    pub fn normal_form(&self, p: &Polynomial<C>) -> Result<Polynomial<C>> {
        if !p.ring.same_vars(&self.ring) {
            return Err(Error::RingMismatch("normal_form: wrong ring".into()));
        }
        let p = p.into_ring(&self.ring);
        let r = full_reduce(&p, &self.gens);
        Ok(r.into_ring(&p.ring))
    }

    pub fn contains(&self, p: &Polynomial<C>) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant() && !self.gens[0].is_zero()
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.gens
            .iter()
            .map(|g| g.lead().unwrap().0.clone())
            .collect()
    }

    /// Monomials of total degree <= max_deg not divisible by any leading
    /// monomial: a Q-basis of the quotient within the window.
    pub fn standard_monomials(&self, max_deg: u32) -> Vec<Monomial> {
        let leads = self.lead_monomials();
        monomials_up_to(self.ring.nvars(), max_deg)
            .into_iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .collect()
    }

    pub fn serialize(&self) -> String {
        self.gens
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// All monomials in `nvars` variables of total degree <= max_deg, in
/// lexicographic exponent order.
pub fn monomials_up_to(nvars: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_deg, &mut cur, &mut out);
    out.sort();
    out
}

// --- module Groebner bases ------------------------------------------------

/// A term of a free-module element: component index plus ring monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModTerm {
    pub comp: usize,
    pub mono: Monomial,
}

/// Element of a free module over the ring, in term-level sparse form.
/// Position-over-term order: lower component dominates.
#[derive(Debug, Clone, PartialEq)]
pub struct ModPoly<C: Scalar> {
    pub ring: Arc<WeightedRing>,
    pub rank: usize,
    /// strictly decreasing under POT order, no zero coefficients
    pub terms: Vec<(ModTerm, C)>,
}

fn pot_cmp(order: &MonomialOrder, a: &ModTerm, b: &ModTerm) -> std::cmp::Ordering {
    // smaller component = greater term
    b.comp.cmp(&a.comp).then_with(|| order.cmp(&a.mono, &b.mono))
}

impl<C: Scalar> ModPoly<C> {
    pub fn zero(ring: &Arc<WeightedRing>, rank: usize) -> Self {
        ModPoly {
            ring: ring.clone(),
            rank,
            terms: Vec::new(),
        }
    }

    pub fn from_components(comps: &[Polynomial<C>]) -> Self {
        let ring = comps[0].ring.clone();
        let rank = comps.len();
        let mut terms: Vec<(ModTerm, C)> = Vec::new();
        for (i, p) in comps.iter().enumerate() {
            for (m, c) in &p.terms {
                terms.push((
                    ModTerm {
                        comp: i,
                        mono: m.clone(),
                    },
                    c.clone(),
                ));
            }
        }
        let order = ring.order.clone();
        terms.sort_by(|(a, _), (b, _)| pot_cmp(&order, b, a));
        ModPoly { ring, rank, terms }
    }

    pub fn to_components(&self) -> Vec<Polynomial<C>> {
        let mut comps = vec![Polynomial::zero(&self.ring); self.rank];
        for (t, c) in &self.terms {
            comps[t.comp] =
                comps[t.comp].add(&Polynomial::monomial(&self.ring, t.mono.clone(), c.clone()));
        }
        comps
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(&ModTerm, &C)> {
        self.terms.first().map(|(t, c)| (t, c))
    }

    fn normalize(mut terms: Vec<(ModTerm, C)>, ring: &Arc<WeightedRing>, rank: usize) -> Self {
        let order = ring.order.clone();
        terms.sort_by(|(a, _), (b, _)| pot_cmp(&order, b, a));
        let mut out: Vec<(ModTerm, C)> = Vec::new();
        for (t, c) in terms {
            if let Some((lt, lc)) = out.last_mut() {
                if *lt == t {
                    *lc = lc.clone() + c;
                    continue;
                }
            }
            out.push((t, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        ModPoly {
            ring: ring.clone(),
            rank,
            terms: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::normalize(terms, &self.ring, self.rank)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(t, c)| (t.clone(), -c.clone())));
        Self::normalize(terms, &self.ring, self.rank)
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring, self.rank);
        }
        ModPoly {
            ring: self.ring.clone(),
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(t, k)| {
                    (
                        ModTerm {
                            comp: t.comp,
                            mono: t.mono.mul(m),
                        },
                        k.clone() * c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv();
                ModPoly {
                    ring: self.ring.clone(),
                    rank: self.rank,
                    terms: self
                        .terms
                        .iter()
                        .map(|(t, k)| (t.clone(), k.clone() * inv.clone()))
                        .collect(),
                }
            }
        }
    }

    pub fn into_ring(&self, ring: &Arc<WeightedRing>) -> Self {
        let mut terms = self.terms.clone();
        let order = ring.order.clone();
        terms.sort_by(|(a, _), (b, _)| pot_cmp(&order, b, a));
        ModPoly {
            ring: ring.clone(),
            rank: self.rank,
            terms,
        }
    }
}

fn mod_full_reduce<C: Scalar>(p: &ModPoly<C>, basis: &[ModPoly<C>]) -> ModPoly<C> {
    let mut work = p.clone();
    let mut rem = ModPoly::zero(&p.ring, p.rank);
    'outer: while let Some((lt, lc)) = work.lead().map(|(t, c)| (t.clone(), c.clone())) {
        for g in basis {
            if let Some((gt, gc)) = g.lead() {
                if gt.comp == lt.comp {
                    if let Some(q) = lt.mono.checked_div(&gt.mono) {
                        let factor = lc.clone() / gc.clone();
                        work = work.sub(&g.mul_term(&q, &factor));
                        continue 'outer;
                    }
                }
            }
        }
        let single = ModPoly {
            ring: p.ring.clone(),
            rank: p.rank,
            terms: vec![(lt, lc)],
        };
        rem = rem.add(&single);
        work = work.sub(&single);
    }
    rem
}

/// Reduced module Groebner basis under position-over-term order.
pub fn buchberger_module<C: Scalar>(gens: &[ModPoly<C>]) -> Vec<ModPoly<C>> {
    let mut basis: Vec<ModPoly<C>> = Vec::new();
    for p in gens {
        let p = p.monic();
        if !p.is_zero() && !basis.contains(&p) {
            basis.push(p);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while !pairs.is_empty() {
        let mut best = 0usize;
        let mut best_key = u32::MAX;
        for (k, (i, j)) in pairs.iter().enumerate() {
            let li = basis[*i].lead().unwrap().0;
            let lj = basis[*j].lead().unwrap().0;
            if li.comp != lj.comp {
                // no S-pair; give it minimal priority for quick disposal
                if 0 < best_key {
                    best_key = 0;
                    best = k;
                }
                continue;
            }
            let d = li.mono.lcm(&lj.mono).total_degree();
            if d < best_key {
                best_key = d;
                best = k;
            }
        }
        let (i, j) = pairs.remove(best);
        let (li, lc_i) = {
            let (t, c) = basis[i].lead().unwrap();
            (t.clone(), c.clone())
        };
        let (lj, lc_j) = {
            let (t, c) = basis[j].lead().unwrap();
            (t.clone(), c.clone())
        };
        if li.comp != lj.comp {
            continue;
        }
        let l = li.mono.lcm(&lj.mono);
        let qi = l.checked_div(&li.mono).unwrap();
        let qj = l.checked_div(&lj.mono).unwrap();
        let s = basis[i]
            .mul_term(&qi, &lc_i.inv())
            .sub(&basis[j].mul_term(&qj, &lc_j.inv()));
        let r = mod_full_reduce(&s, &basis);
        if !r.is_zero() {
            let r = r.monic();
            let new_idx = basis.len();
            basis.push(r);
            for k in 0..new_idx {
                pairs.push((k, new_idx));
            }
        }
    }
    // minimalize and tail-reduce
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let li = basis[i].lead().unwrap().0;
                let lj = basis[j].lead().unwrap().0;
                if lj.comp == li.comp
                    && lj.mono.divides(&li.mono)
                    && (li.mono != lj.mono || j < i)
                {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let minimal: Vec<ModPoly<C>> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect();
    let mut reduced = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<ModPoly<C>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = mod_full_reduce(&minimal[i], &others).monic();
        if !r.is_zero() {
            reduced.push(r);
        }
    }
    let ring = reduced
        .first()
        .map(|p| p.ring.clone())
        .unwrap_or_else(|| gens[0].ring.clone());
    let order = ring.order.clone();
    reduced.sort_by(|a, b| pot_cmp(&order, b.lead().unwrap().0, a.lead().unwrap().0));
    reduced
}

/// Normal form of a module element with respect to a module basis.
pub fn module_normal_form<C: Scalar>(p: &ModPoly<C>, basis: &[ModPoly<C>]) -> ModPoly<C> {
    mod_full_reduce(p, basis)
}

/// Generating set of the relation module { c : sum c_i * elems_i = 0 }.
///
/// Works by the component-elimination trick: augment each element with a
/// tracking unit vector, compute a module basis with the value block
/// dominating, and read off the elements whose value block vanished.
pub fn syzygies<C: Scalar>(elems: &[Vec<Polynomial<C>>]) -> Result<Vec<Vec<Polynomial<C>>>> {
    if elems.is_empty() {
        return Ok(Vec::new());
    }
    let rank = elems[0].len();
    let ring = elems[0][0].ring.clone();
    for e in elems {
        if e.len() != rank {
            return Err(Error::Invalid("syzygies: mixed free-module ranks".into()));
        }
        for p in e {
            if !p.ring.same_vars(&ring) {
                return Err(Error::RingMismatch("syzygies: mixed rings".into()));
            }
        }
    }
    let k = elems.len();
    let aug: Vec<ModPoly<C>> = elems
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut comps = e.clone();
            for j in 0..k {
                comps.push(if i == j {
                    Polynomial::one(&ring)
                } else {
                    Polynomial::zero(&ring)
                });
            }
            ModPoly::from_components(&comps)
        })
        .collect();
    let gb = buchberger_module(&aug);
    let mut out = Vec::new();
    for g in gb {
        let comps = g.to_components();
        if comps[..rank].iter().all(|p| p.is_zero()) {
            out.push(comps[rank..].to_vec());
        }
    }
    Ok(out)
}

/// Express `elem` as a combination of `gens` (same free-module rank), if it
/// lies in the generated submodule. Returns the coefficient vector.
pub fn lift<C: Scalar>(
    elem: &[Polynomial<C>],
    gens: &[Vec<Polynomial<C>>],
) -> Result<Option<Vec<Polynomial<C>>>> {
    if gens.is_empty() {
        return Ok(if elem.iter().all(|p| p.is_zero()) {
            Some(Vec::new())
        } else {
            None
        });
    }
    let rank = elem.len();
    let ring = gens[0][0].ring.clone();
    let k = gens.len();
    let aug: Vec<ModPoly<C>> = gens
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut comps = e.clone();
            for j in 0..k {
                comps.push(if i == j {
                    Polynomial::one(&ring)
                } else {
                    Polynomial::zero(&ring)
                });
            }
            ModPoly::from_components(&comps)
        })
        .collect();
    let gb = buchberger_module(&aug);
    let mut comps = elem.to_vec();
    for _ in 0..k {
        comps.push(Polynomial::zero(&ring));
    }
    let r = mod_full_reduce(&ModPoly::from_components(&comps), &gb);
    let rcomps = r.to_components();
    if rcomps[..rank].iter().all(|p| p.is_zero()) {
        Ok(Some(rcomps[rank..].iter().map(|p| p.neg()).collect()))
    } else {
        Ok(None)
    }
}

/// Groebner basis of the intersection of the ideal with the subring on
/// `keep` (variable indices): all other variables are eliminated.
pub fn eliminate<C: Scalar>(
    gens: &[Polynomial<C>],
    keep: &[usize],
) -> Result<GroebnerBasis<C>> {
    let ring = gens
        .first()
        .map(|p| p.ring.clone())
        .ok_or_else(|| Error::Invalid("eliminate: empty generator list".into()))?;
    for &i in keep {
        if i >= ring.nvars() {
            return Err(Error::UnknownVariable(format!("#{}", i)));
        }
    }
    let keep_set: BTreeSet<usize> = keep.iter().cloned().collect();
    let front: BTreeSet<usize> = (0..ring.nvars()).filter(|i| !keep_set.contains(i)).collect();
    if front.is_empty() {
        return buchberger(gens, ring.order.clone());
    }
    let gb = buchberger(gens, MonomialOrder::Elim { front: front.clone() })?;
    let filtered: Vec<Polynomial<C>> = gb
        .gens
        .iter()
        .filter(|g| {
            g.terms
                .iter()
                .all(|(m, _)| front.iter().all(|&i| m.0[i] == 0))
        })
        .cloned()
        .collect();
    if filtered.is_empty() {
        return Ok(GroebnerBasis {
            ring: gb.ring.clone(),
            gens: Vec::new(),
            order: gb.order.clone(),
            reduced: true,
        });
    }
    buchberger(&filtered, ring.order.clone())
}

/// Generators of the ideal quotient (I : h).
pub fn ideal_quotient<C: Scalar>(
    gens: &[Polynomial<C>],
    h: &Polynomial<C>,
) -> Result<Vec<Polynomial<C>>> {
    let mut elems: Vec<Vec<Polynomial<C>>> = gens.iter().map(|g| vec![g.clone()]).collect();
    elems.push(vec![h.clone()]);
    let syz = syzygies(&elems)?;
    let k = gens.len();
    let out: Vec<Polynomial<C>> = syz.into_iter().map(|row| row[k].clone()).collect();
    let out: Vec<Polynomial<C>> = out.into_iter().filter(|p| !p.is_zero()).collect();
    Ok(out)
}

/// Groebner basis of the saturation (I : h^infinity), by iterating the ideal
/// quotient until two successive quotients agree.
pub fn saturate<C: Scalar>(
    gens: &[Polynomial<C>],
    h: &Polynomial<C>,
) -> Result<GroebnerBasis<C>> {
    let ring = gens
        .first()
        .map(|p| p.ring.clone())
        .ok_or_else(|| Error::Invalid("saturate: empty generator list".into()))?;
    if !h.ring.same_vars(&ring) {
        return Err(Error::RingMismatch("saturate: h in a different ring".into()));
    }
    let mut current = buchberger(gens, ring.order.clone())?;
    loop {
        if current.gens.is_empty() {
            return Ok(current);
        }
        let q = ideal_quotient(&current.gens, h)?;
        let mut next_gens = current.gens.clone();
        next_gens.extend(q);
        let next = buchberger(&next_gens, ring.order.clone())?;
        if next.gens == current.gens {
            return Ok(next);
        }
        current = next;
    }
}

/// Radical membership via the Rabinowitsch trick: g in sqrt(I) iff
/// I + (1 - y*g) is the unit ideal in an extended ring.
pub fn in_radical<C: Scalar>(g: &Polynomial<C>, gens: &[Polynomial<C>]) -> Result<bool> {
    let ring = g.ring.clone();
    if g.is_zero() {
        // 0 in sqrt(I) always
        return Ok(true);
    }
    let mut aux_name = "_rab".to_string();
    while ring.var_index(&aux_name).is_some() {
        aux_name.push('_');
    }
    let ext = ring.extend(&[(&aux_name, 0)])?;
    let y = Polynomial::var_named(&ext, &aux_name)?;
    let mut egens: Vec<Polynomial<C>> = gens
        .iter()
        .map(|p| p.embed(&ext))
        .collect::<Result<_>>()?;
    let ge = g.embed(&ext)?;
    egens.push(Polynomial::one(&ext).sub(&y.mul(&ge)));
    let gb = buchberger(&egens, ext.order.clone())?;
    Ok(gb.is_unit_ideal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;
    use crate::text::parse_poly;

    fn ring(vars: &[(&str, i64)]) -> Arc<WeightedRing> {
        WeightedRing::new(vars, MonomialOrder::DegRevLex).unwrap()
    }

    fn p(src: &str, r: &Arc<WeightedRing>) -> Polynomial<Q> {
        parse_poly(src, r).unwrap()
    }

    #[test]
    fn already_reduced() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let gb = buchberger(&[p("y - x^2", &r)], r.order.clone()).unwrap();
        assert_eq!(gb.gens.len(), 1);
        assert!(gb.contains(&p("y - x^2", &r)).unwrap());
    }

    #[test]
    fn dedup() {
        let r = ring(&[("x", 0)]);
        let gb = buchberger(&[p("x", &r), p("x", &r)], r.order.clone()).unwrap();
        assert_eq!(gb.gens.len(), 1);
    }

    #[test]
    fn rees_spair_relation() {
        // {t_inv*v1 - x, t_inv*v2 - y} yields x*v2 - y*v1
        let r = ring(&[("x", 0), ("y", 0), ("t_inv", -1), ("v1", 1), ("v2", 1)]);
        let gb = buchberger(
            &[p("t_inv*v1 - x", &r), p("t_inv*v2 - y", &r)],
            r.order.clone(),
        )
        .unwrap();
        let target = p("x*v2 - y*v1", &r);
        assert!(gb.contains(&target).unwrap());
        assert!(gb
            .gens
            .iter()
            .any(|g| g == &target.monic().into_ring(&gb.ring)
                || g == &target.neg().monic().into_ring(&gb.ring)));
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let gb = buchberger(&[p("x^2 - y", &r)], r.order.clone()).unwrap();
        assert_eq!(gb.normal_form(&p("x^2", &r)).unwrap(), p("y", &r));
        let gb2 = buchberger(&[p("y - x^2", &r)], r.order.clone()).unwrap();
        assert!(gb2.contains(&p("y - x^2", &r)).unwrap());
        let gb3 = buchberger(&[p("y", &r)], r.order.clone()).unwrap();
        assert_eq!(gb3.normal_form(&p("x + 1", &r)).unwrap(), p("x + 1", &r));
        // idempotence
        let nf = gb.normal_form(&p("x^3 + x^2*y", &r)).unwrap();
        assert_eq!(gb.normal_form(&nf).unwrap(), nf);
    }

    #[test]
    fn syzygy_examples() {
        let r = ring(&[("x", 0), ("y", 0)]);
        // syzygies of (x, x): contains (1, -1) up to sign/scale
        let syz = syzygies(&[vec![p("x", &r)], vec![p("x", &r)]]).unwrap();
        assert!(!syz.is_empty());
        for row in &syz {
            let s = row[0].mul(&p("x", &r)).add(&row[1].mul(&p("x", &r)));
            assert!(s.is_zero());
        }
        // syzygies of (x, y): generated by (y, -x)
        let syz = syzygies(&[vec![p("x", &r)], vec![p("y", &r)]]).unwrap();
        assert_eq!(syz.len(), 1);
        let s = syz[0][0].mul(&p("x", &r)).add(&syz[0][1].mul(&p("y", &r)));
        assert!(s.is_zero());
        assert!(!syz[0][0].is_zero());
        // syzygies of (1): empty
        let syz = syzygies(&[vec![p("1", &r)]]).unwrap();
        assert!(syz.is_empty());
    }

    #[test]
    fn eliminate_classical_rees_kernel() {
        let r = ring(&[("x", 0), ("y", 0), ("v1", 0), ("v2", 0), ("t", 0)]);
        let keep: Vec<usize> = (0..4).collect();
        let gb = eliminate(&[p("v1 - t*x", &r), p("v2 - t*y", &r)], &keep).unwrap();
        assert_eq!(gb.gens.len(), 1);
        let want = p("x*v2 - y*v1", &r).monic().into_ring(&gb.ring);
        assert!(gb.gens[0] == want || gb.gens[0] == want.neg().monic());
    }

    #[test]
    fn eliminate_trivial_kernel() {
        let r = ring(&[("x", 0), ("v", 0), ("t", 0)]);
        let gb = eliminate(&[p("v - t*x", &r)], &[0, 1]).unwrap();
        assert!(gb.gens.is_empty());
    }

    #[test]
    fn eliminate_nothing() {
        let r = ring(&[("x", 0), ("y", 0)]);
        let gb = eliminate(&[p("x^2 - y", &r)], &[0, 1]).unwrap();
        assert_eq!(gb.gens.len(), 1);
    }

    #[test]
    fn saturation_examples() {
        let r = ring(&[("x", 0), ("y", 0), ("u", 0)]);
        // saturate (x*(y - u*x)) by x -> (y - u*x)
        let gb = saturate(&[p("x*y - u*x^2", &r)], &p("x", &r)).unwrap();
        assert!(gb.contains(&p("y - u*x", &r)).unwrap());
        assert!(!gb.contains(&p("x", &r)).unwrap());
        // saturate (x) by y -> (x)
        let gb = saturate(&[p("x", &r)], &p("y", &r)).unwrap();
        assert_eq!(gb.serialize(), "x");
        // saturate (x) by x -> (1)
        let gb = saturate(&[p("x", &r)], &p("x", &r)).unwrap();
        assert!(gb.is_unit_ideal());
    }

    #[test]
    fn buchberger_criterion_on_output() {
        let r = ring(&[("x", 0), ("y", 0), ("z", 0)]);
        let gb = buchberger(
            &[p("x^2 + y*z", &r), p("x*y - z^2", &r), p("y^3 - 1", &r)],
            r.order.clone(),
        )
        .unwrap();
        for i in 0..gb.gens.len() {
            for j in 0..i {
                let s = s_poly(&gb.gens[i], &gb.gens[j]);
                assert!(gb.normal_form(&s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn determinism() {
        let r = ring(&[("x", 0), ("y", 0), ("z", 0)]);
        let gens = [p("x*z - y^2", &r), p("x^2 - z*y", &r)];
        let a = buchberger(&gens, r.order.clone()).unwrap().serialize();
        let b = buchberger(&gens, r.order.clone()).unwrap().serialize();
        assert_eq!(a, b);
    }

    #[test]
    fn radical_membership() {
        let r = ring(&[("x", 0), ("y", 0)]);
        assert!(in_radical(&p("x", &r), &[p("x^2", &r)]).unwrap());
        assert!(!in_radical(&p("y", &r), &[p("x^2", &r)]).unwrap());
    }
}
