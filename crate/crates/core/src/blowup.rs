//! Derived blow-up charts as the standard affine cover of Proj of the
//! Rees algebra, the classical saturation oracle, the pi0 comparison,
//! exceptional divisors, strictness at the reduced pi0 level, and the
//! chart/transition consistency checks.

use std::sync::Arc;

use serde::Serialize;

use crate::dg::{adjoin, extend_base, semifree, DgAlgebra, DgElement, DgMorphism, DgPresentation, ExtGen};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, ideal_quotient, in_radical, saturate, GroebnerBasis};
use crate::homology::QuasiIso;
use crate::poly::{RingMap, WeightedRing};
use crate::rees::CheckVerdict;
use crate::{QPoly, Q};


/// The affine chart atlas of a blow-up: chart i presents the locus where
/// the i-th Rees coordinate is inverted, with u_j = v_j/v_i of weight 0.
#[derive(Debug, Clone)]
pub struct BlowupAtlas {
    pub a: Arc<WeightedRing>,
    pub f: Vec<QPoly>,
    pub charts: Vec<DgPresentation>,
    /// per chart: the centre index j and the name of u_j, for j != i
    pub chart_vars: Vec<Vec<(usize, String)>>,
}

fn chart_var_names(a: &Arc<WeightedRing>, n: usize, i: usize) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for j in 0..n {
        if j == i {
            continue;
        }
        let want = if n == 2 {
            "u".to_string()
        } else {
            format!("u{}", j + 1)
        };
        let mut name = want;
        while a.var_index(&name).is_some() || out.iter().any(|(_, m)| *m == name) {
            name.push('\'');
        }
        out.push((j, name));
    }
    out
}

fn chart_base(a: &Arc<WeightedRing>, vars: &[(usize, String)]) -> Result<Arc<WeightedRing>> {
    let extra: Vec<(&str, i64)> = vars.iter().map(|(_, n)| (n.as_str(), 0)).collect();
    a.extend(&extra)
}

/// The naive chart relations f_j - u_j * f_i in the chart base ring.
fn chart_relations(
    a: &Arc<WeightedRing>,
    f: &[QPoly],
    i: usize,
    vars: &[(usize, String)],
    base: &Arc<WeightedRing>,
) -> Result<Vec<QPoly>> {
    let fi = f[i].embed(base)?;
    let mut out = Vec::new();
    for (j, name) in vars {
        let uj = QPoly::var_named(base, name)?;
        out.push(f[*j].embed(base)?.sub(&uj.mul(&fi)));
    }
    let _ = a;
    Ok(out)
}

pub fn blowup_charts(a: &Arc<WeightedRing>, f: &[QPoly]) -> Result<BlowupAtlas> {
    if f.is_empty() {
        return Err(Error::Invalid("blow-up centre must have at least one element".into()));
    }
    for (i, fi) in f.iter().enumerate() {
        if !fi.ring.same_vars(a) {
            return Err(Error::RingMismatch(format!("centre element #{} not over the base", i)));
        }
        if !fi.weight_of().compatible_with(0) {
            return Err(Error::Inhomogeneous(format!("centre element #{} must have weight 0", i)));
        }
    }
    let n = f.len();
    let mut charts = Vec::new();
    let mut chart_vars = Vec::new();
    for i in 0..n {
        let vars = chart_var_names(a, n, i);
        let base = chart_base(a, &vars)?;
        let rels = chart_relations(a, f, i, &vars, &base)?;
        let gens: Vec<ExtGen> = vars
            .iter()
            .map(|(j, _)| ExtGen {
                name: format!("eta{}", j + 1),
                degree: 1,
                weight: 0,
            })
            .collect();
        let alg = DgAlgebra::new(&base, gens.clone())?;
        let diffs: Vec<DgElement> = rels
            .iter()
            .map(|r| DgElement::from_base(&alg, r))
            .collect();
        charts.push(semifree(&base, gens, diffs)?);
        chart_vars.push(vars);
    }
    Ok(BlowupAtlas {
        a: a.clone(),
        f: f.to_vec(),
        charts,
        chart_vars,
    })
}

/// Classical chart oracle: A[u] / ((f_j - u_j*f_i) : f_i^infinity).
pub fn classical_blowup_chart(
    a: &Arc<WeightedRing>,
    f: &[QPoly],
    i: usize,
) -> Result<GroebnerBasis<Q>> {
    if i >= f.len() {
        return Err(Error::Invalid("chart index out of range".into()));
    }
    let vars = chart_var_names(a, f.len(), i);
    let base = chart_base(a, &vars)?;
    let rels: Vec<QPoly> = chart_relations(a, f, i, &vars, &base)?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let fi = f[i].embed(&base)?;
    if rels.is_empty() {
        return Ok(GroebnerBasis {
            ring: base.clone(),
            gens: Vec::new(),
            order: base.order.clone(),
            reduced: true,
        });
    }
    if fi.is_zero() {
        // (I : 0^infinity) is the unit ideal: the chart is empty
        return buchberger(&[QPoly::one(&base)], base.order.clone());
    }
    saturate(&rels, &fi)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartComparison {
    pub surjective: bool,
    pub isomorphic: bool,
    pub kernel_generators: Vec<String>,
}

/// Compare H_0 of the derived chart with the classical saturated chart.
/// The classical chart is always a quotient of pi0, so the map is
/// surjective; the kernel generators are normal forms of the saturation
/// relations that are nonzero in pi0.
pub fn compare_pi0(atlas: &BlowupAtlas, i: usize) -> Result<ChartComparison> {
    let classical = classical_blowup_chart(&atlas.a, &atlas.f, i)?;
    let vars = &atlas.chart_vars[i];
    let base = chart_base(&atlas.a, vars)?;
    let rels: Vec<QPoly> = chart_relations(&atlas.a, &atlas.f, i, vars, &base)?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let derived_gb = if rels.is_empty() {
        None
    } else {
        Some(buchberger(&rels, base.order.clone())?)
    };
    let mut kernel = Vec::new();
    for g in &classical.gens {
        let g_here = g.embed(&base)?;
        let nf = match &derived_gb {
            Some(gb) => gb.normal_form(&g_here)?,
            None => g_here,
        };
        if !nf.is_zero() {
            kernel.push(format!("{}", nf));
        }
    }
    Ok(ChartComparison {
        surjective: true,
        isomorphic: kernel.is_empty(),
        kernel_generators: kernel,
    })
}

/// The exceptional divisor restricted to chart i: the one-element Koszul
/// quotient of the chart by f_i, a virtual Cartier divisor by construction.
pub fn exceptional_divisor(atlas: &BlowupAtlas, i: usize) -> Result<DgPresentation> {
    let chart = &atlas.charts[i];
    let fi = atlas.f[i].embed(&chart.alg.base)?;
    adjoin(
        chart,
        vec![ExtGen {
            name: "ex".to_string(),
            degree: 1,
            weight: 0,
        }],
        |alg| Ok(vec![DgElement::from_base(alg, &fi)]),
    )
}

/// Strictness proxy at reduced pi0: f_i must be a nonzerodivisor on the
/// reduced classical chart (the saturated model, where derived and
/// classical agree), i.e. everything annihilating f_i modulo the chart
/// ideal already lies in its radical.
pub fn strictness_check_pi0(atlas: &BlowupAtlas, i: usize) -> Result<CheckVerdict> {
    if atlas.f[i].is_zero() {
        return Ok(CheckVerdict::False {
            witness: "the centre element is zero; the divisor is everything".into(),
        });
    }
    let classical = classical_blowup_chart(&atlas.a, &atlas.f, i)?;
    let base = classical.ring.clone();
    let rels = classical.gens.clone();
    let fi = atlas.f[i].embed(&base)?;
    if rels.is_empty() {
        // chart ideal is zero over a polynomial ring: f_i is regular
        return Ok(CheckVerdict::True);
    }
    let ann = ideal_quotient(&rels, &fi)?;
    for g in &ann {
        if !in_radical(g, &rels)? {
            return Ok(CheckVerdict::False {
                witness: format!("{} annihilates the divisor but is not nilpotent on the chart", g),
            });
        }
    }
    Ok(CheckVerdict::True)
}

/// Consistency of chart i against the weight-0 block of the Rees algebra
/// localized at v_i. The block model adjoins s = t_inv*v_i with generators
/// eps_j for every j, d(eps_i) = s - f_i and d(eps_j) = s*u_j - f_j; the
/// chart, enlarged by the contractible pair (zeta, s'), maps in by
/// zeta -> eps_i and eta_j -> u_j*eps_i - eps_j.
pub fn chart_consistency(
    a: &Arc<WeightedRing>,
    f: &[QPoly],
    i: usize,
    lo: i64,
    hi: i64,
    bound: u32,
) -> Result<QuasiIso> {
    if f.is_empty() || i >= f.len() {
        return Err(Error::Invalid("chart index out of range".into()));
    }
    let vars = chart_var_names(a, f.len(), i);
    let cbase = chart_base(a, &vars)?;

    // block model over the chart base plus s
    let mut s_name = "s".to_string();
    while cbase.var_index(&s_name).is_some() {
        s_name.push('\'');
    }
    let tbase = cbase.extend(&[(s_name.as_str(), 0)])?;
    let s = QPoly::var_named(&tbase, &s_name)?;
    let mut gens = Vec::new();
    let mut diffs_data = Vec::new();
    for j in 0..f.len() {
        gens.push(ExtGen {
            name: format!("eps{}", j + 1),
            degree: 1,
            weight: 0,
        });
        let d = if j == i {
            s.sub(&f[i].embed(&tbase)?)
        } else {
            let name = &vars.iter().find(|(k, _)| *k == j).unwrap().1;
            let uj = QPoly::var_named(&tbase, name)?;
            s.mul(&uj).sub(&f[j].embed(&tbase)?)
        };
        diffs_data.push(d);
    }
    let alg = DgAlgebra::new(&tbase, gens.clone())?;
    let diffs: Vec<DgElement> = diffs_data
        .iter()
        .map(|d| DgElement::from_base(&alg, d))
        .collect();
    let block = semifree(&tbase, gens, diffs)?;

    // the chart enlarged by a contractible pair over the same base
    let rels = chart_relations(a, f, i, &vars, &cbase)?;
    let cgens: Vec<ExtGen> = vars
        .iter()
        .map(|(j, _)| ExtGen {
            name: format!("eta{}", j + 1),
            degree: 1,
            weight: 0,
        })
        .collect();
    let calg = DgAlgebra::new(&cbase, cgens.clone())?;
    let cdiffs: Vec<DgElement> = rels.iter().map(|r| DgElement::from_base(&calg, r)).collect();
    let chart = semifree(&cbase, cgens, cdiffs)?;
    let mut sp = "s'".to_string();
    while cbase.var_index(&sp).is_some() {
        sp.push('\'');
    }
    let extended = extend_base(&chart, &[(sp.as_str(), 0)])?;
    let sp_poly = QPoly::var_named(&extended.alg.base, &sp)?;
    let fi_src = f[i].embed(&extended.alg.base)?;
    let source = adjoin(
        &extended,
        vec![ExtGen {
            name: "zeta".to_string(),
            degree: 1,
            weight: 0,
        }],
        |alg| Ok(vec![DgElement::from_base(alg, &sp_poly.sub(&fi_src))]),
    )?;

    // base map: identity on A and the u's, s' -> s
    let mut images = Vec::new();
    for (name, _) in &source.alg.base.vars {
        let tgt = if *name == sp { &s_name } else { name };
        images.push(QPoly::var_named(&tbase, tgt)?);
    }
    let base_map = RingMap::new(&source.alg.base, &tbase, images)?;

    let mut gen_images = Vec::new();
    for (pos, (j, name)) in vars.iter().enumerate() {
        let _ = pos;
        let uj = QPoly::var_named(&tbase, name)?;
        let mut ei = vec![0u32; block.alg.gens.len()];
        ei[i] = 1;
        let mut ej = vec![0u32; block.alg.gens.len()];
        ej[*j] = 1;
        gen_images.push(
            DgElement::monomial(&block.alg, ei, uj)
                .sub(&DgElement::monomial(&block.alg, ej, QPoly::one(&tbase))),
        );
    }
    gen_images.push(DgElement::gen(&block.alg, i));
    let phi = DgMorphism::new(&source, &block, base_map, gen_images)?;
    crate::dg::quasi_iso_in_range(&phi, lo, hi, bound)
}

/// Transition coherence at pi0: on the overlap of charts i and j, the
/// classical relations of chart j must hold after substituting
/// u^{(j)}_k = u^{(i)}_k / u^{(i)}_j, checked in the localization of the
/// classical chart i at u^{(i)}_j.
pub fn transition_coherent_pi0(atlas: &BlowupAtlas, i: usize, j: usize) -> Result<bool> {
    if i == j {
        return Ok(true);
    }
    let one_way = |i: usize, j: usize| -> Result<bool> {
        let vars_i = &atlas.chart_vars[i];
        let base_i = chart_base(&atlas.a, vars_i)?;
        let cl_i = classical_blowup_chart(&atlas.a, &atlas.f, i)?;
        // localize at u^{(i)}_j
        let mut w = "w".to_string();
        while base_i.var_index(&w).is_some() {
            w.push('\'');
        }
        let loc = base_i.extend(&[(w.as_str(), 0)])?;
        let uij = &vars_i.iter().find(|(k, _)| *k == j).unwrap().1;
        let mut rels: Vec<QPoly> = cl_i
            .gens
            .iter()
            .map(|g| g.embed(&loc))
            .collect::<Result<Vec<_>>>()?;
        rels.push(
            QPoly::var_named(&loc, uij)?
                .mul(&QPoly::var_named(&loc, &w)?)
                .sub(&QPoly::one(&loc)),
        );
        let gb = buchberger(&rels, loc.order.clone())?;
        // chart-j coordinate images: u^{(j)}_k -> u^{(i)}_k * w, u^{(j)}_i -> w
        let image = |k: usize| -> Result<QPoly> {
            if k == i {
                QPoly::var_named(&loc, &w)
            } else {
                let name = &vars_i.iter().find(|(m, _)| *m == k).unwrap().1;
                Ok(QPoly::var_named(&loc, name)?.mul(&QPoly::var_named(&loc, &w)?))
            }
        };
        let cl_j = classical_blowup_chart(&atlas.a, &atlas.f, j)?;
        let vars_j = &atlas.chart_vars[j];
        for g in &cl_j.gens {
            // substitute each chart-j variable by its image
            let mut acc = QPoly::zero(&loc);
            for (m, c) in &g.terms {
                let mut term = QPoly::constant(&loc, c.clone());
                for (idx, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let (name, _) = &cl_j.ring.vars[idx];
                    let img = match vars_j.iter().find(|(_, n)| n == name) {
                        Some((k, _)) => image(*k)?,
                        None => QPoly::var_named(&loc, name)?,
                    };
                    term = term.mul(&img.pow(e));
                }
                acc = acc.add(&term);
            }
            if !gb.normal_form(&acc)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    Ok(one_way(i, j)? && one_way(j, i)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::homology_of;
    use crate::poly::MonomialOrder;
    use crate::text::parse_poly;

    fn ring(vars: &[(&str, i64)]) -> Arc<WeightedRing> {
        WeightedRing::new(vars, MonomialOrder::DegRevLex).unwrap()
    }

    fn p(src: &str, r: &Arc<WeightedRing>) -> QPoly {
        parse_poly(src, r).unwrap()
    }

    fn plane_origin() -> (Arc<WeightedRing>, Vec<QPoly>) {
        let a = ring(&[("x", 0), ("y", 0)]);
        let f = vec![p("x", &a), p("y", &a)];
        (a, f)
    }

    fn twisted() -> (Arc<WeightedRing>, Vec<QPoly>) {
        let a = ring(&[("x", 0), ("y", 0)]);
        let f = vec![p("x^2", &a), p("x*y", &a)];
        (a, f)
    }

    #[test]
    fn plane_origin_chart_shape_and_homology() {
        let (a, f) = plane_origin();
        let atlas = blowup_charts(&a, &f).unwrap();
        assert_eq!(atlas.charts.len(), 2);
        let c = &atlas.charts[0];
        assert_eq!(c.alg.base.nvars(), 3);
        assert_eq!(c.alg.gens.len(), 1);
        assert_eq!(format!("{}", c.diffs[0].terms[&vec![0]]), "-x*u + y");
        assert!(homology_of(c, 1, 8).unwrap().is_zero());
        assert!(!homology_of(c, 0, 8).unwrap().is_zero());
    }

    #[test]
    fn cartier_centre_chart_is_base() {
        let a = ring(&[("x", 0)]);
        let atlas = blowup_charts(&a, &[p("x", &a)]).unwrap();
        assert_eq!(atlas.charts.len(), 1);
        assert!(atlas.charts[0].alg.gens.is_empty());
        assert_eq!(atlas.charts[0].alg.base.nvars(), 1);
    }

    #[test]
    fn empty_centre_rejected() {
        let a = ring(&[("x", 0)]);
        assert!(blowup_charts(&a, &[]).is_err());
    }

    #[test]
    fn classical_chart_of_plane_origin() {
        let (a, f) = plane_origin();
        let gb = classical_blowup_chart(&a, &f, 0).unwrap();
        assert_eq!(gb.gens.len(), 1);
        assert_eq!(format!("{}", gb.gens[0]), "x*u - y");
    }

    #[test]
    fn classical_chart_saturates_non_regular_centre() {
        let (a, f) = twisted();
        let gb = classical_blowup_chart(&a, &f, 0).unwrap();
        assert_eq!(gb.gens.len(), 1);
        assert_eq!(format!("{}", gb.gens[0]), "x*u - y");
    }

    #[test]
    fn classical_chart_of_cartier_centre_is_base() {
        let a = ring(&[("x", 0)]);
        let gb = classical_blowup_chart(&a, &[p("x", &a)], 0).unwrap();
        assert!(gb.gens.is_empty());
    }

    #[test]
    fn compare_pi0_regular_vs_non_regular() {
        let (a, f) = plane_origin();
        let atlas = blowup_charts(&a, &f).unwrap();
        let cmp = compare_pi0(&atlas, 0).unwrap();
        assert!(cmp.surjective && cmp.isomorphic);

        let (a2, f2) = twisted();
        let atlas2 = blowup_charts(&a2, &f2).unwrap();
        let cmp2 = compare_pi0(&atlas2, 0).unwrap();
        assert!(cmp2.surjective);
        assert!(!cmp2.isomorphic);
        // the kernel is generated by the class of y - u*x, which becomes
        // zero after multiplying by x (that product is the chart relation)
        assert_eq!(cmp2.kernel_generators.len(), 1);
        let base = atlas2.charts[0].alg.base.clone();
        let ker = parse_poly(&cmp2.kernel_generators[0], &base).unwrap();
        let rel = p("x*y", &a2)
            .embed(&base)
            .unwrap()
            .sub(&QPoly::var_named(&base, "u").unwrap().mul(&p("x^2", &a2).embed(&base).unwrap()));
        let gb = buchberger(&[rel], base.order.clone()).unwrap();
        assert!(!gb.normal_form(&ker).unwrap().is_zero());
        assert!(gb
            .normal_form(&ker.mul(&p("x", &a2).embed(&base).unwrap()))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn compare_pi0_trivial_for_cartier_centre() {
        let a = ring(&[("x", 0)]);
        let atlas = blowup_charts(&a, &[p("x", &a)]).unwrap();
        let cmp = compare_pi0(&atlas, 0).unwrap();
        assert!(cmp.isomorphic);
    }

    #[test]
    fn exceptional_divisor_of_plane_origin() {
        let (a, f) = plane_origin();
        let atlas = blowup_charts(&a, &f).unwrap();
        let ex = exceptional_divisor(&atlas, 0).unwrap();
        // pi0 = Q[x,y,u]/(y - ux, x): x and y both vanish, u free
        let h0 = homology_of(&ex, 0, 8).unwrap();
        assert!(!h0.is_zero());
        assert!(h0.annihilated_by(&p("x", &a).embed(&ex.alg.base).unwrap()));
        assert!(!h0.annihilated_by(&QPoly::var_named(&ex.alg.base, "u").unwrap()));
        assert!(homology_of(&ex, 1, 8).unwrap().is_zero());
    }

    #[test]
    fn exceptional_divisor_records_torsion_on_non_regular_centre() {
        let (a, f) = twisted();
        let atlas = blowup_charts(&a, &f).unwrap();
        let ex = exceptional_divisor(&atlas, 0).unwrap();
        assert!(!homology_of(&ex, 1, 8).unwrap().is_zero());
    }

    #[test]
    fn strictness_verdicts() {
        let (a, f) = plane_origin();
        let atlas = blowup_charts(&a, &f).unwrap();
        assert_eq!(strictness_check_pi0(&atlas, 0).unwrap(), CheckVerdict::True);

        let (a2, f2) = twisted();
        let atlas2 = blowup_charts(&a2, &f2).unwrap();
        assert_eq!(strictness_check_pi0(&atlas2, 0).unwrap(), CheckVerdict::True);

        let az = ring(&[("x", 0)]);
        let atlas3 = blowup_charts(&az, &[QPoly::zero(&az)]).unwrap();
        assert!(matches!(
            strictness_check_pi0(&atlas3, 0).unwrap(),
            CheckVerdict::False { .. }
        ));
    }

    #[test]
    fn chart_consistency_cartier() {
        let a = ring(&[("x", 0)]);
        let v = chart_consistency(&a, &[p("x", &a)], 0, -1, 2, 8).unwrap();
        assert_eq!(v, QuasiIso::True);
    }

    #[test]
    fn chart_consistency_plane_origin() {
        let (a, f) = plane_origin();
        for i in 0..2 {
            let v = chart_consistency(&a, &f, i, -1, 2, 8).unwrap();
            assert_eq!(v, QuasiIso::True, "chart {}", i);
        }
    }

    #[test]
    fn chart_consistency_non_regular() {
        let (a, f) = twisted();
        let v = chart_consistency(&a, &f, 0, -1, 2, 8).unwrap();
        assert_eq!(v, QuasiIso::True);
    }

    #[test]
    fn transitions_cohere_at_pi0() {
        let (a, f) = plane_origin();
        let atlas = blowup_charts(&a, &f).unwrap();
        assert!(transition_coherent_pi0(&atlas, 0, 1).unwrap());

        let a3 = ring(&[("x", 0), ("y", 0), ("z", 0)]);
        let f3 = vec![p("x", &a3), p("y", &a3), p("z", &a3)];
        let atlas3 = blowup_charts(&a3, &f3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(transition_coherent_pi0(&atlas3, i, j).unwrap(), "{} {}", i, j);
            }
        }
    }

    #[test]
    fn base_change_charts_match_after_renaming() {
        let (a, f) = plane_origin();
        let atlas = blowup_charts(&a, &f).unwrap();
        let az = ring(&[("x", 0), ("y", 0), ("z", 0)]);
        let fz = vec![p("x", &az), p("y", &az)];
        let atlasz = blowup_charts(&az, &fz).unwrap();
        // same generator data; the extended chart base has one extra variable
        assert_eq!(atlasz.charts[0].alg.base.nvars(), atlas.charts[0].alg.base.nvars() + 1);
        assert_eq!(
            atlasz.charts[0].alg.gens.len(),
            atlas.charts[0].alg.gens.len()
        );
        assert_eq!(
            atlasz.charts[0].diffs[0].render().replace("z", ""),
            atlas.charts[0].diffs[0].render()
        );
    }
}
