//! Structural checks on classified irreducible modules: dual parameters, the
//! fixed/complement splitting for a parabolic, weight supports of translated
//! fixed spaces, and the regularity/coregularity criteria. Each check
//! computes its statement by at least two independent routes and errors with
//! a contradiction diagnostic when they disagree.

use super::classify::{IrreducibleData, parameters};
use super::group::{
    FiniteGL, GroupRep, Permutation, RootSet, coinvariants, fixed_space, set_product,
};
use crate::error::{CoreError, Result};
use crate::ff::{self, FqMatrix};

/// Report of the dual-parameter checks.
pub struct DualityReport {
    pub psi_dual_ok: bool,
    pub delta_dual_ok: bool,
    pub psi_bar_ok: bool,
    pub delta_bar_ok: bool,
}

/// Verifies the parameter bookkeeping of the contragredient module and of
/// the opposite-Borel parameters:
/// psi_{V*} = w0(psi_V)^{-1}, Delta_{V*} = reversed(Delta_V),
/// psi read on the Ubar-line = w0(psi_V), and the Ubar-line stabilizer is the
/// opposite parabolic of reversed(Delta_V).
pub fn check_duality(group: &FiniteGL, data: &IrreducibleData) -> Result<DualityReport> {
    let dual = parameters(group, data.rep.dual())?;
    let psi_dual_ok = dual.psi == data.psi.w0().inverse();
    let delta_dual_ok = dual.delta_v == data.delta_v.reversed();

    // opposite-pair parameters read directly on the Ubar-fixed line
    let grep = GroupRep::new(group, data.rep.clone());
    let psi_bar = super::classify::bar_character(&grep, &data.ubar_fixed);
    let psi_bar_ok = psi_bar == data.psi.w0();
    let delta_bar_ok = data.delta_v_bar == data.delta_v.reversed();

    let rep = DualityReport { psi_dual_ok, delta_dual_ok, psi_bar_ok, delta_bar_ok };
    if !(psi_dual_ok && delta_dual_ok && psi_bar_ok && delta_bar_ok) {
        return Err(CoreError::ContradictionDiagnostic(format!(
            "dual-parameter check failed: psi* {} delta* {} psi-bar {} delta-bar {}",
            psi_dual_ok, delta_dual_ok, psi_bar_ok, delta_bar_ok
        )));
    }
    Ok(rep)
}

/// The two direct decompositions attached to a proper standard parabolic:
/// V = V^{N(k)} + (1 - Nbar(k))V and V = V^{Nbar(k)} + ker(V -> V_{N(k)}),
/// together with the inverse isomorphism phi: V_{N(k)} -> V^{Nbar(k)}.
pub struct DeckSplit {
    pub fixed: FqMatrix,
    pub complement: FqMatrix,
    /// projection V -> V_{N(k)} in quotient coordinates
    pub proj: FqMatrix,
    pub section: FqMatrix,
    /// phi: V_{N(k)} -> V^{Nbar(k)} with proj * phi = id
    pub phi: FqMatrix,
    pub bar_fixed: FqMatrix,
}

pub fn unipotent_splitting(
    group: &FiniteGL,
    data: &IrreducibleData,
    j: RootSet,
) -> Result<DeckSplit> {
    assert!(!j.is_full(), "splitting requires a proper parabolic");
    let grep = GroupRep::new(group, data.rep.clone());
    let par = group.parabolic(j);
    let p = group.p;
    let d = grep.dim();
    let id = FqMatrix::identity(d, p);

    let fixed = fixed_space(&grep, &par.n_elems);
    // span of (1 - nbar)v over all nbar, v
    let mut stacked = FqMatrix::zero(d, 0, p);
    for &nb in &par.nbar_elems {
        stacked = stacked.hstack(&id.sub(grep.of(nb)));
    }
    let complement = ff::column_space(&stacked);
    if fixed.cols() + complement.cols() != d
        || ff::rank(&fixed.hstack(&complement)) != d
    {
        return Err(CoreError::ContradictionDiagnostic(
            "V^{N} + (1-Nbar)V is not a direct decomposition".into(),
        ));
    }
    // same span when restricting the translates to V^{N}
    let mut stacked_fixed = FqMatrix::zero(d, 0, p);
    for &nb in &par.nbar_elems {
        stacked_fixed = stacked_fixed.hstack(&id.sub(grep.of(nb)).mul(&fixed));
    }
    let complement_from_fixed = ff::column_space(&stacked_fixed);
    if !same_column_space(&complement, &complement_from_fixed) {
        return Err(CoreError::ContradictionDiagnostic(
            "(1-Nbar)V differs from (1-Nbar)V^{N}".into(),
        ));
    }

    let co = coinvariants(&grep, &par.n_elems);
    let bar_fixed = fixed_space(&grep, &par.nbar_elems);
    let pw = co.proj.mul(&bar_fixed);
    let pw_inv = ff::invert(&pw).map_err(|_| {
        CoreError::ContradictionDiagnostic(
            "quotient map is not an isomorphism on V^{Nbar}".into(),
        )
    })?;
    let phi = bar_fixed.mul(&pw_inv);
    Ok(DeckSplit {
        fixed,
        complement,
        proj: co.proj,
        section: co.section,
        phi,
        bar_fixed,
    })
}

fn same_column_space(a: &FqMatrix, b: &FqMatrix) -> bool {
    a.cols() == b.cols() && (0..b.cols()).all(|c| ff::in_column_span(a, &b.col(c)))
}

/// Weight support of the translated fixed space: the set of g with nonzero
/// image of g V^{N'(k)} in the Nbar_J(k)-coinvariants, as Weyl double cosets.
pub struct WeightSupport {
    /// all group elements in the support (index set)
    pub support: Vec<usize>,
    /// Weyl elements in the support
    pub weyl: Vec<Permutation>,
    pub support_size: usize,
    pub matches_product: bool,
}

pub fn weight_support(
    group: &FiniteGL,
    data: &IrreducibleData,
    j: RootSet,
    j_prime: RootSet,
) -> Result<WeightSupport> {
    let grep = GroupRep::new(group, data.rep.clone());
    let par = group.parabolic(j);
    let par_prime = group.parabolic(j_prime);
    let co_bar = coinvariants(&grep, &par.nbar_elems);
    let w_prime = fixed_space(&grep, &par_prime.n_elems);

    let support: Vec<usize> = (0..group.order())
        .filter(|&g| !co_bar.proj.mul(&grep.of(g).mul(&w_prime)).is_zero())
        .collect();

    // independent route: Pbar_J * P_V * P'_{J'} as an element-set product
    let pv = group.parabolic(data.delta_v);
    let prod = set_product(
        group,
        &set_product(group, &par.pbar_elems, &pv.p_elems),
        &par_prime.p_elems,
    );
    let matches_product = support == prod;
    if !matches_product {
        return Err(CoreError::ContradictionDiagnostic(format!(
            "weight support ({} elements) differs from Pbar P_V P' ({} elements)",
            support.len(),
            prod.len()
        )));
    }

    // Weyl-representative route: support must be the union of Pbar w P' over
    // the Weyl elements it contains
    let mut weyl = Vec::new();
    let mut union: Vec<usize> = Vec::new();
    for w in Permutation::all(group.n) {
        let widx = group
            .index_of(&w.matrix(group.p))
            .expect("permutation matrix in group");
        if support.binary_search(&widx).is_ok() {
            let cell = set_product(
                group,
                &set_product(group, &par.pbar_elems, &[widx]),
                &par_prime.p_elems,
            );
            union = merge_sorted(&union, &cell);
            weyl.push(w);
        }
    }
    if union != support {
        return Err(CoreError::ContradictionDiagnostic(
            "weight support is not a union of Weyl double cosets".into(),
        ));
    }
    // closure under the finite Weyl subgroups on both sides
    let wm = Permutation::parabolic_subgroup(&j);
    let wm_prime = Permutation::parabolic_subgroup(&j_prime);
    for w in &weyl {
        for a in &wm {
            for b in &wm_prime {
                let x = a.compose(w).compose(b);
                if !weyl.contains(&x) {
                    return Err(CoreError::ContradictionDiagnostic(
                        "support Weyl set not closed under W_M x W_M'".into(),
                    ));
                }
            }
        }
    }
    Ok(WeightSupport {
        support_size: support.len(),
        support,
        weyl,
        matches_product,
    })
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    out.sort();
    out.dedup();
    out
}

/// Coregularity: the stabilizer of the Ubar-fixed line is contained in the
/// opposite parabolic of J. Computed directly and re-derived from the
/// coinvariant support; a mismatch is a contradiction diagnostic.
pub fn is_m_coregular(group: &FiniteGL, data: &IrreducibleData, j: RootSet) -> Result<bool> {
    let par = group.parabolic(j);
    let pbar: std::collections::BTreeSet<usize> = par.pbar_elems.iter().copied().collect();
    let direct = data.bar_line_stabilizer.iter().all(|g| pbar.contains(g));

    // route (b): support of g V^{Nbar} -> V_N equals P * Pbar_V * Pbar, and
    // coregularity says that support is exactly P * Pbar
    let grep = GroupRep::new(group, data.rep.clone());
    let co = coinvariants(&grep, &par.n_elems);
    let w_bar = fixed_space(&grep, &par.nbar_elems);
    let support: Vec<usize> = (0..group.order())
        .filter(|&g| !co.proj.mul(&grep.of(g).mul(&w_bar)).is_zero())
        .collect();
    let pvbar = group.parabolic(data.delta_v_bar);
    let prod = set_product(
        group,
        &set_product(group, &par.p_elems, &pvbar.pbar_elems),
        &par.pbar_elems,
    );
    if support != prod {
        return Err(CoreError::ContradictionDiagnostic(
            "support of g V^{Nbar} in V_N differs from P Pbar_V Pbar".into(),
        ));
    }
    let ppbar = set_product(group, &par.p_elems, &par.pbar_elems);
    let via_support = support == ppbar;

    if direct != via_support {
        return Err(CoreError::ContradictionDiagnostic(format!(
            "coregularity routes disagree: stabilizer {} support {}",
            direct, via_support
        )));
    }
    Ok(direct)
}

/// Regularity: the stabilizer of the U-fixed line is contained in P_J,
/// cross-checked through the mirrored support computation.
pub fn is_m_regular(group: &FiniteGL, data: &IrreducibleData, j: RootSet) -> Result<bool> {
    let par = group.parabolic(j);
    let pset: std::collections::BTreeSet<usize> = par.p_elems.iter().copied().collect();
    let direct = data.line_stabilizer.iter().all(|g| pset.contains(g));

    let grep = GroupRep::new(group, data.rep.clone());
    let co_bar = coinvariants(&grep, &par.nbar_elems);
    let w_fix = fixed_space(&grep, &par.n_elems);
    let support: Vec<usize> = (0..group.order())
        .filter(|&g| !co_bar.proj.mul(&grep.of(g).mul(&w_fix)).is_zero())
        .collect();
    let pv = group.parabolic(data.delta_v);
    let prod = set_product(
        group,
        &set_product(group, &par.pbar_elems, &pv.p_elems),
        &par.p_elems,
    );
    if support != prod {
        return Err(CoreError::ContradictionDiagnostic(
            "support of g V^{N} in V_{Nbar} differs from Pbar P_V P".into(),
        ));
    }
    let pbarp = set_product(group, &par.pbar_elems, &par.p_elems);
    let via_support = support == pbarp;
    if direct != via_support {
        return Err(CoreError::ContradictionDiagnostic(format!(
            "regularity routes disagree: stabilizer {} support {}",
            direct, via_support
        )));
    }
    Ok(direct)
}

/// Equivalence report for the product criterion relating
/// Pbar P_V P' = Pbar P', the Levi containment M_V in Pbar P', the Weyl
/// containment W_V in W_M W_M', and the simple-root orthogonality condition.
pub struct ProductEquivalenceReport {
    pub sets_collapse: bool,
    pub levi_contained: bool,
    pub weyl_contained: bool,
    pub root_condition: bool,
    pub counterexample: Option<String>,
}

pub fn rregu_equivalence(
    group: &FiniteGL,
    data: &IrreducibleData,
    j: RootSet,
    j_prime: RootSet,
) -> ProductEquivalenceReport {
    let par = group.parabolic(j);
    let par_prime = group.parabolic(j_prime);
    let pv = group.parabolic(data.delta_v);

    let pbar_p = set_product(group, &par.pbar_elems, &par_prime.p_elems);
    let pbar_pv_p = set_product(
        group,
        &set_product(group, &par.pbar_elems, &pv.p_elems),
        &par_prime.p_elems,
    );
    let sets_collapse = pbar_p == pbar_pv_p;

    let pbar_p_set: std::collections::BTreeSet<usize> = pbar_p.iter().copied().collect();
    let levi_contained = pv.m_elems.iter().all(|g| pbar_p_set.contains(g));

    let wm = Permutation::parabolic_subgroup(&j);
    let wmp = Permutation::parabolic_subgroup(&j_prime);
    let wv = Permutation::parabolic_subgroup(&data.delta_v);
    let products: std::collections::BTreeSet<Permutation> = wm
        .iter()
        .flat_map(|a| wmp.iter().map(move |b| a.compose(b)))
        .collect();
    let weyl_contained = wv.iter().all(|w| products.contains(w));

    let dv = data.delta_v;
    let in_union = dv.is_subset_of(&j.union(&j_prime));
    let left: Vec<usize> = dv.intersect(&j).minus(&j_prime).roots();
    let right: Vec<usize> = dv.intersect(&j_prime).minus(&j).roots();
    let orthogonal = left.iter().all(|&a| {
        right
            .iter()
            .all(|&b| (a as i64 - b as i64).abs() >= 2)
    });
    let root_condition = in_union && orthogonal;

    let all_equal = sets_collapse == levi_contained
        && levi_contained == weyl_contained
        && weyl_contained == root_condition;
    let counterexample = if all_equal {
        None
    } else {
        Some(format!(
            "dV={:?} J={:?} J'={:?}: sets={} levi={} weyl={} roots={}",
            dv, j, j_prime, sets_collapse, levi_contained, weyl_contained, root_condition
        ))
    };
    ProductEquivalenceReport {
        sets_collapse,
        levi_contained,
        weyl_contained,
        root_condition,
        counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::classify::{classify, special_rep};

    #[test]
    fn duality_gl22() {
        let g = FiniteGL::build(2, 2).unwrap();
        let cls = classify(&g).unwrap();
        for d in &cls.items {
            let r = check_duality(&g, d).unwrap();
            assert!(r.psi_dual_ok && r.delta_dual_ok);
        }
        // the natural module is self-dual with delta_v = {}
        let nat = &cls.items[1];
        assert_eq!(nat.delta_v, RootSet::empty(2));
        assert_eq!(nat.delta_v.reversed(), RootSet::empty(2));
    }

    #[test]
    fn duality_gl23_sym_det() {
        let g = FiniteGL::build(2, 3).unwrap();
        let cls = classify(&g).unwrap();
        for d in &cls.items {
            check_duality(&g, d).unwrap();
            // on GL(2): dual of Sym^r det^m is Sym^r det^{-r-m}
            let dual = parameters(&g, d.rep.dual()).unwrap();
            let r = d.rep.dim as i64 - 1;
            let m = d.psi.exps[1] as i64;
            let expect = super::super::group::TorusCharacter::new(3, vec![-m, -r - m]);
            assert_eq!(dual.psi, expect);
        }
    }

    #[test]
    fn splitting_examples() {
        // natural module of GL(2,2), J = {}: V^N = <e1>, complement <e2>
        let g = FiniteGL::build(2, 2).unwrap();
        let cls = classify(&g).unwrap();
        let nat = &cls.items[1];
        let j = RootSet::empty(2);
        let s = unipotent_splitting(&g, nat, j).unwrap();
        assert_eq!(s.fixed.cols(), 1);
        assert_eq!(s.complement.cols(), 1);
        assert!(!s.fixed[(0, 0)].is_zero() && s.fixed[(1, 0)].is_zero());
        assert!(s.complement[(0, 0)].is_zero() || !s.complement[(1, 0)].is_zero());
        // phi is a section of the projection
        assert!(s.proj.mul(&s.phi).is_identity());

        // trivial module: V^N = V, complement 0
        let triv = &cls.items[0];
        let st = unipotent_splitting(&g, triv, j).unwrap();
        assert_eq!(st.fixed.cols(), 1);
        assert_eq!(st.complement.cols(), 0);

        // Steinberg of GL(3,2), J = {a1}: dimensions add up
        let g3 = FiniteGL::build(3, 2).unwrap();
        let cls3 = classify(&g3).unwrap();
        let st3 = special_rep(&cls3, &g3, RootSet::empty(3));
        let s3 = unipotent_splitting(&g3, st3, RootSet::from_roots(3, &[1])).unwrap();
        assert_eq!(s3.fixed.cols() + s3.complement.cols(), 8);
    }

    #[test]
    fn weight_support_steinberg_gl22() {
        let g = FiniteGL::build(2, 2).unwrap();
        let cls = classify(&g).unwrap();
        let st = &cls.items[1];
        let j = RootSet::empty(2);
        let ws = weight_support(&g, st, j, j).unwrap();
        // Bbar(k) B(k) has 4 of the 6 elements
        assert_eq!(ws.support_size, 4);
        // identity is always in the support
        assert!(ws.support.binary_search(&0).is_ok());
    }

    #[test]
    fn weight_support_trivial_is_everything() {
        let g = FiniteGL::build(2, 3).unwrap();
        let cls = classify(&g).unwrap();
        let triv = cls
            .items
            .iter()
            .find(|d| d.rep.dim == 1 && d.psi.is_trivial())
            .unwrap();
        let j = RootSet::empty(2);
        let ws = weight_support(&g, triv, j, j).unwrap();
        assert_eq!(ws.support_size, g.order());
    }

    #[test]
    fn coregularity_examples() {
        let g = FiniteGL::build(2, 3).unwrap();
        let cls = classify(&g).unwrap();
        let j = RootSet::empty(2);
        for d in &cls.items {
            let coreg = is_m_coregular(&g, d, j).unwrap();
            // on GL(2) with J = {}: coregular iff the Ubar-line stabilizer is
            // the (opposite) Borel iff delta_v_bar = {}
            assert_eq!(coreg, d.delta_v_bar == RootSet::empty(2));
            // trivial module is never coregular for a proper parabolic
            if d.rep.dim == 1 {
                assert!(!coreg);
            }
            // Steinberg is coregular
            if d.rep.dim == 3 && d.psi.is_trivial() {
                assert!(coreg);
            }
            // regular of V iff coregular of V* (checked via the dual)
            let dual = parameters(&g, d.rep.dual()).unwrap();
            assert_eq!(
                is_m_regular(&g, d, j).unwrap(),
                is_m_coregular(&g, &dual, j).unwrap()
            );
        }
    }

    #[test]
    fn product_equivalence_gl3() {
        let g = FiniteGL::build(3, 2).unwrap();
        let cls = classify(&g).unwrap();

        // dV = {}: all conditions hold vacuously
        let st = special_rep(&cls, &g, RootSet::empty(3));
        let r = rregu_equivalence(
            &g,
            st,
            RootSet::from_roots(3, &[1]),
            RootSet::empty(3),
        );
        assert!(r.sets_collapse && r.levi_contained && r.weyl_contained && r.root_condition);
        assert!(r.counterexample.is_none());

        // dV = {a1}, J = {a1}, J' = {}: holds since dV is inside J
        let sp1 = special_rep(&cls, &g, RootSet::from_roots(3, &[1]));
        let r1 = rregu_equivalence(
            &g,
            sp1,
            RootSet::from_roots(3, &[1]),
            RootSet::empty(3),
        );
        assert!(r1.weyl_contained && r1.root_condition && r1.counterexample.is_none());

        // dV = {a1,a2} (trivial module), J = {a1}, J' = {a2}: fails
        // orthogonality, and all four routes must agree on the failure
        let triv = special_rep(&cls, &g, RootSet::full(3));
        let r2 = rregu_equivalence(
            &g,
            triv,
            RootSet::from_roots(3, &[1]),
            RootSet::from_roots(3, &[2]),
        );
        assert!(!r2.root_condition && !r2.weyl_contained);
        assert!(!r2.sets_collapse && !r2.levi_contained);
        assert!(r2.counterexample.is_none());
    }
}
