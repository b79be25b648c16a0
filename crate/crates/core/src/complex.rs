//! Bounded slices of chain complexes of free modules over a polynomial
//! base, chain maps, and mapping cones. Differentials are stored as exact
//! polynomial matrices; `d_n . d_{n+1} = 0` is checked on construction.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::WeightedRing;
use crate::QPoly;

pub type PolyMat = Vec<Vec<QPoly>>; // rows x cols

pub fn mat_mul(ring: &Arc<WeightedRing>, a: &PolyMat, b: &PolyMat) -> PolyMat {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![QPoly::zero(ring); cols]; rows];
    for i in 0..rows {
        for (k, bk) in b.iter().enumerate().take(inner) {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !bk[j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&bk[j]));
                }
            }
        }
    }
    out
}

/// A slice of a complex of free modules: ranks and differentials for
/// homological degrees in `[lo, hi]`. `diff[n]` maps degree n to n-1 and has
/// shape rank(n-1) x rank(n). Degrees outside the window carry no data.
#[derive(Debug, Clone)]
pub struct Complex {
    pub ring: Arc<WeightedRing>,
    pub lo: i64,
    pub hi: i64,
    pub ranks: BTreeMap<i64, usize>,
    /// internal weight of each basis element, per degree
    pub basis_weights: BTreeMap<i64, Vec<i64>>,
    /// human-readable basis labels, per degree
    pub labels: BTreeMap<i64, Vec<String>>,
    pub diff: BTreeMap<i64, PolyMat>,
    /// true if an enumeration bound may have cut off basis elements that
    /// could influence the window
    pub truncated: bool,
}

impl Complex {
    pub fn rank(&self, n: i64) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    pub fn weights(&self, n: i64) -> Vec<i64> {
        self.basis_weights.get(&n).cloned().unwrap_or_default()
    }

    /// d_n as a full matrix (zero-filled when absent).
    pub fn d(&self, n: i64) -> PolyMat {
        match self.diff.get(&n) {
            Some(m) => m.clone(),
            None => vec![vec![QPoly::zero(&self.ring); self.rank(n)]; self.rank(n - 1)],
        }
    }

    /// Transport all differential entries along a ring map. Only meaningful
    /// when the map identifies the rings (variable renaming); callers
    /// guarantee that.
    pub fn map_ring(&self, map: &crate::poly::RingMap<crate::Q>) -> Result<Complex> {
        let mut out = self.clone();
        out.ring = map.target.clone();
        for mat in out.diff.values_mut() {
            for row in mat.iter_mut() {
                for e in row.iter_mut() {
                    *e = map.apply(e)?;
                }
            }
        }
        Ok(out)
    }

    pub fn check_dd_zero(&self) -> Result<()> {
        for n in self.lo + 2..=self.hi {
            let a = self.d(n - 1);
            let b = self.d(n);
            let prod = mat_mul(&self.ring, &a, &b);
            for row in &prod {
                for e in row {
                    if !e.is_zero() {
                        return Err(Error::Invalid(format!(
                            "d.d != 0 at degree {}: residual {}",
                            n, e
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A degreewise map of complexes; `mats[n]` has shape tgt.rank(n) x src.rank(n).
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    pub mats: BTreeMap<i64, PolyMat>,
    pub truncated: bool,
}

impl ChainMap {
    pub fn mat(&self, n: i64) -> PolyMat {
        match self.mats.get(&n) {
            Some(m) => m.clone(),
            None => {
                vec![vec![QPoly::zero(&self.source.ring); self.source.rank(n)];
                    self.target.rank(n)]
            }
        }
    }

    /// Commutation with the differentials on the overlap of the windows.
    pub fn check_chain_map(&self) -> Result<()> {
        let lo = self.source.lo.max(self.target.lo) + 1;
        let hi = self.source.hi.min(self.target.hi);
        for n in lo..=hi {
            let lhs = mat_mul(&self.source.ring, &self.target.d(n), &self.mat(n));
            let rhs = mat_mul(&self.source.ring, &self.mat(n - 1), &self.source.d(n));
            for (r1, r2) in lhs.iter().zip(&rhs) {
                for (a, b) in r1.iter().zip(r2) {
                    if !a.sub(b).is_zero() {
                        return Err(Error::Invalid(format!(
                            "not a chain map at degree {}",
                            n
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Mapping cone of a chain map f: S -> T.
/// C_n = T_n (+) S_{n-1}, d(t, s) = (dt + f(s), -ds).
pub fn cone(f: &ChainMap) -> Complex {
    let ring = f.source.ring.clone();
    let lo = f.source.lo.min(f.target.lo);
    let hi = (f.source.hi + 1).max(f.target.hi);
    let mut ranks = BTreeMap::new();
    let mut basis_weights = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut diff = BTreeMap::new();
    for n in lo..=hi {
        let rt = f.target.rank(n);
        let rs = f.source.rank(n - 1);
        ranks.insert(n, rt + rs);
        let mut w = f.target.weights(n);
        w.extend(f.source.weights(n - 1));
        basis_weights.insert(n, w);
        let mut lab: Vec<String> = f
            .target
            .labels
            .get(&n)
            .cloned()
            .unwrap_or_else(|| (0..rt).map(|i| format!("t{}", i)).collect());
        lab.extend(
            f.source
                .labels
                .get(&(n - 1))
                .cloned()
                .unwrap_or_else(|| (0..rs).map(|i| format!("s{}", i)).collect())
                .into_iter()
                .map(|l| format!("cone[{}]", l)),
        );
        labels.insert(n, lab);
    }
    for n in lo + 1..=hi {
        let rt_n = f.target.rank(n);
        let rs_n = f.source.rank(n - 1);
        let rt_p = f.target.rank(n - 1);
        let rs_p = f.source.rank(n - 2);
        let dt = f.target.d(n);
        let ds = f.source.d(n - 1);
        let fm = f.mat(n - 1);
        let mut m = vec![vec![QPoly::zero(&ring); rt_n + rs_n]; rt_p + rs_p];
        for i in 0..rt_p {
            for j in 0..rt_n {
                m[i][j] = dt[i][j].clone();
            }
            for j in 0..rs_n {
                m[i][rt_n + j] = fm[i][j].clone();
            }
        }
        for i in 0..rs_p {
            for j in 0..rs_n {
                m[rt_p + i][rt_n + j] = ds[i][j].neg();
            }
        }
        diff.insert(n, m);
    }
    Complex {
        ring,
        lo,
        hi,
        ranks,
        basis_weights,
        labels,
        diff,
        truncated: f.source.truncated || f.target.truncated || f.truncated,
    }
}
