//! Weight-graded sparse multivariate polynomials over an exact field.
//!
//! Every variable carries an integer weight (the Z-grading tracking the
//! G_m-action), distinct from total degree. Terms are kept sorted in
//! decreasing monomial order, with no zero coefficients stored, so equality
//! of polynomials is equality of term lists.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector; one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// self / other, if other divides self.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if self.0.iter().zip(&other.0).all(|(a, b)| a >= b) {
            Some(Monomial(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Total well-orders on monomials compatible with multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (the default).
    DegRevLex,
    Lex,
    /// Block order: variables in `front` are compared first (degrevlex within
    /// the block), then the remaining variables by degrevlex. Used for
    /// elimination.
    Elim { front: BTreeSet<usize> },
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    // a > b iff the last nonzero entry of a - b is negative
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(&a.0, &b.0),
            MonomialOrder::Lex => {
                for i in 0..a.0.len() {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Elim { front } => {
                let pick = |m: &Monomial, keep: bool| -> Vec<u32> {
                    m.0.iter()
                        .enumerate()
                        .filter(|(i, _)| front.contains(i) == keep)
                        .map(|(_, e)| *e)
                        .collect()
                };
                match degrevlex(&pick(a, true), &pick(b, true)) {
                    Ordering::Equal => degrevlex(&pick(a, false), &pick(b, false)),
                    o => o,
                }
            }
        }
    }
}

/// A polynomial ring with named, integer-weighted variables and a fixed
/// monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedRing {
    pub vars: Vec<(String, i64)>,
    pub order: MonomialOrder,
}

impl WeightedRing {
    pub fn new(vars: &[(&str, i64)], order: MonomialOrder) -> Result<Arc<Self>> {
        let mut seen = BTreeSet::new();
        for (name, _) in vars {
            if !seen.insert(name.to_string()) {
                return Err(Error::DuplicateName(name.to_string()));
            }
        }
        Ok(Arc::new(WeightedRing {
            vars: vars.iter().map(|(n, w)| (n.to_string(), *w)).collect(),
            order,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.vars[i].1
    }

    pub fn mono_weight(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(&self.vars)
            .map(|(&e, (_, w))| e as i64 * w)
            .sum()
    }

    /// Same variables, different monomial order.
    pub fn with_order(self: &Arc<Self>, order: MonomialOrder) -> Arc<Self> {
        if self.order == order {
            return self.clone();
        }
        Arc::new(WeightedRing {
            vars: self.vars.clone(),
            order,
        })
    }

    /// New ring extending this one with extra variables (appended).
    pub fn extend(self: &Arc<Self>, extra: &[(&str, i64)]) -> Result<Arc<Self>> {
        let mut vars: Vec<(&str, i64)> = self
            .vars
            .iter()
            .map(|(n, w)| (n.as_str(), *w))
            .collect();
        vars.extend_from_slice(extra);
        WeightedRing::new(&vars, self.order.clone())
    }

    /// Ring on a subset of the variables (indices into `self.vars`).
    pub fn subring(self: &Arc<Self>, keep: &[usize]) -> Arc<Self> {
        Arc::new(WeightedRing {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            order: MonomialOrder::DegRevLex,
        })
    }

    pub fn same_vars(&self, other: &WeightedRing) -> bool {
        self.vars == other.vars
    }
}

/// Homogeneity verdict for the weight grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightOf {
    /// The zero polynomial is homogeneous of every weight.
    Every,
    Of(i64),
    Inhomogeneous,
}

impl WeightOf {
    pub fn compatible_with(&self, w: i64) -> bool {
        matches!(self, WeightOf::Every) || *self == WeightOf::Of(w)
    }
}

#[derive(Debug, Clone)]
pub struct Polynomial<C: Scalar> {
    pub ring: Arc<WeightedRing>,
    /// Sorted in strictly decreasing ring order, no zero coefficients.
    pub terms: Vec<(Monomial, C)>,
}

impl<C: Scalar> PartialEq for Polynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_vars(&other.ring) && self.terms == other.terms
    }
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(ring: &Arc<WeightedRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<WeightedRing>, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::one(ring.nvars()), c)],
        }
    }

    pub fn one(ring: &Arc<WeightedRing>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn var(ring: &Arc<WeightedRing>, i: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i), C::one())],
        }
    }

    pub fn var_named(ring: &Arc<WeightedRing>, name: &str) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<WeightedRing>, m: Monomial, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![(m, c)],
        }
    }

    pub fn from_terms(ring: &Arc<WeightedRing>, map: BTreeMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order.clone();
        terms.sort_by(|(a, _), (b, _)| order.cmp(b, a));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Leading (monomial, coefficient) under the ring order.
    pub fn lead(&self) -> Option<(&Monomial, &C)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    pub fn weight_of(&self) -> WeightOf {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.mono_weight(m));
        match it.next() {
            None => WeightOf::Every,
            Some(w) => {
                if it.all(|v| v == w) {
                    WeightOf::Of(w)
                } else {
                    WeightOf::Inhomogeneous
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring.same_vars(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring.vars, other.ring.vars
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ring(other).expect("ring mismatch in add");
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in self.terms.iter().chain(&other.terms) {
            let e = map.entry(m.clone()).or_insert_with(C::zero);
            *e = e.clone() + c.clone();
        }
        Self::from_terms(&self.ring, map)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ring(other).expect("ring mismatch in mul");
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let e = map.entry(m).or_insert_with(C::zero);
                *e = e.clone() + c1.clone() * c2.clone();
            }
        }
        Self::from_terms(&self.ring, map)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m0, c0)| (m0.mul(m), c0.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Monic rescaling (leading coefficient 1); zero stays zero.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Re-sort the term list into another ring with the same variables
    /// (possibly a different order).
    pub fn into_ring(&self, ring: &Arc<WeightedRing>) -> Self {
        assert!(self.ring.same_vars(ring), "into_ring: variable mismatch");
        let mut terms = self.terms.clone();
        let order = ring.order.clone();
        terms.sort_by(|(a, _), (b, _)| order.cmp(b, a));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Transport into a ring whose variable set contains this ring's,
    /// matching variables by name.
    pub fn embed(&self, ring: &Arc<WeightedRing>) -> Result<Self> {
        let idx: Vec<usize> = self
            .ring
            .vars
            .iter()
            .map(|(n, _)| {
                ring.var_index(n)
                    .ok_or_else(|| Error::UnknownVariable(n.clone()))
            })
            .collect::<Result<_>>()?;
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; ring.nvars()];
            for (j, &exp) in m.0.iter().enumerate() {
                e[idx[j]] += exp;
            }
            map.insert(Monomial(e), c.clone());
        }
        Ok(Self::from_terms(ring, map))
    }

    /// Restrict to a subring on the named variables; errors if any term
    /// involves a variable outside it.
    pub fn restrict(&self, ring: &Arc<WeightedRing>) -> Result<Self> {
        let idx: Vec<Option<usize>> = self
            .ring
            .vars
            .iter()
            .map(|(n, _)| ring.var_index(n))
            .collect();
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; ring.nvars()];
            for (j, &exp) in m.0.iter().enumerate() {
                if exp > 0 {
                    match idx[j] {
                        Some(i) => e[i] += exp,
                        None => {
                            return Err(Error::UnknownVariable(self.ring.vars[j].0.clone()))
                        }
                    }
                }
            }
            map.insert(Monomial(e), c.clone());
        }
        Ok(Self::from_terms(ring, map))
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                let entry = map.entry(m2).or_insert_with(C::zero);
                *entry = entry.clone() + c.clone() * C::from_i64(e as i64);
            }
        }
        Self::from_terms(&self.ring, map)
    }
}

/// A ring homomorphism determined by one image polynomial per source
/// variable.
#[derive(Debug, Clone)]
pub struct RingMap<C: Scalar> {
    pub source: Arc<WeightedRing>,
    pub target: Arc<WeightedRing>,
    pub images: Vec<Polynomial<C>>,
}

impl<C: Scalar> RingMap<C> {
    pub fn new(
        source: &Arc<WeightedRing>,
        target: &Arc<WeightedRing>,
        images: Vec<Polynomial<C>>,
    ) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::Invalid(format!(
                "expected {} images, got {}",
                source.nvars(),
                images.len()
            )));
        }
        for img in &images {
            if !img.ring.same_vars(target) {
                return Err(Error::RingMismatch("image not in target ring".into()));
            }
        }
        Ok(RingMap {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Check each image is weight-homogeneous of the source variable's weight.
    pub fn is_weight_preserving(&self) -> bool {
        self.source
            .vars
            .iter()
            .zip(&self.images)
            .all(|((_, w), img)| img.weight_of().compatible_with(*w))
    }

    pub fn identity(ring: &Arc<WeightedRing>) -> Self {
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            images: (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect(),
        }
    }

    pub fn apply(&self, p: &Polynomial<C>) -> Result<Polynomial<C>> {
        if !p.ring.same_vars(&self.source) {
            return Err(Error::RingMismatch(
                "polynomial not in the map's source ring".into(),
            ));
        }
        let mut acc = Polynomial::zero(&self.target);
        for (m, c) in &p.terms {
            let mut t = Polynomial::constant(&self.target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&self.images[i].pow(e));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

// --- canonical text form -------------------------------------------------

impl<C: Scalar> Polynomial<C> {
    fn fmt_term(&self, m: &Monomial, c: &C, lead: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg_one = -C::one();
        let c_str = format!("{}", c);
        let (sign, abs) = if let Some(stripped) = c_str.strip_prefix('-') {
            ("-", stripped.to_string())
        } else {
            ("+", c_str)
        };
        if lead {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", sign)?;
        }
        let unit_coeff = *c == C::one() || *c == neg_one;
        if m.is_one() {
            write!(f, "{}", abs)?;
            return Ok(());
        }
        if !unit_coeff {
            write!(f, "{}*", abs)?;
        }
        let mut first = true;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.ring.vars[i].0)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            self.fmt_term(m, c, k == 0, f)?;
        }
        Ok(())
    }
}
