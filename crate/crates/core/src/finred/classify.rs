//! Classification of the irreducible F_p-modules of GL(n, F_p) by their
//! parameters: the torus character on the one-dimensional U(k)-fixed line and
//! the standard parabolic stabilizing that line.

use super::group::{
    FiniteGL, GroupRep, Parabolic, RootSet, TorusCharacter, fixed_space,
};
use crate::error::{CoreError, Result};
use crate::ff::{self, FqMatrix, FqScalar, primitive_root};
use crate::meataxe::{self, Iso, ModuleRep, Verdict};

/// Builds GL(n, F_p), materialized; errors past the order cap.
pub fn build_gl(n: usize, p: u32) -> Result<FiniteGL> {
    FiniteGL::build(n, p)
}

/// The classification invariants of one irreducible module.
pub struct IrreducibleData {
    pub rep: ModuleRep,
    pub psi: TorusCharacter,
    pub delta_psi: RootSet,
    /// J with P_J(k) the stabilizer of the U(k)-fixed line.
    pub delta_v: RootSet,
    /// J with the opposite parabolic of J stabilizing the Ubar(k)-fixed line.
    pub delta_v_bar: RootSet,
    pub u_fixed: Vec<FqScalar>,
    pub ubar_fixed: Vec<FqScalar>,
    /// Element index set of the stabilizer of the U-fixed line (= P_{delta_v}).
    pub line_stabilizer: Vec<usize>,
    /// Element index set of the stabilizer of the Ubar-fixed line.
    pub bar_line_stabilizer: Vec<usize>,
}

impl IrreducibleData {
    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn label(&self) -> String {
        format!(
            "dim{} psi{:?} dV{:?}",
            self.rep.dim, self.psi.exps, self.delta_v
        )
    }
}

/// Stabilizer of the line spanned by `v` under the tabulated action.
fn line_stabilizer(rep: &GroupRep, v: &[FqScalar]) -> Vec<usize> {
    let g = rep.group;
    let first = v
        .iter()
        .position(|x| !x.is_zero())
        .expect("line vector is nonzero");
    (0..g.order())
        .filter(|&i| {
            let w = rep.of(i).mul_vec(v);
            if w[first].is_zero() {
                return false;
            }
            let c = w[first].mul(&v[first].inv());
            w.iter().zip(v).all(|(wi, vi)| *wi == vi.mul(&c))
        })
        .collect()
}

/// Reads the torus character off the action on a stable line; public within
/// the module for the opposite-Borel parameter check.
pub(super) fn bar_character(rep: &GroupRep, v: &[FqScalar]) -> TorusCharacter {
    character_on_line(rep, v)
}

/// Reads the torus character off the action on the line spanned by `v`.
fn character_on_line(rep: &GroupRep, v: &[FqScalar]) -> TorusCharacter {
    let g = rep.group;
    let n = g.n;
    let p = g.p;
    if p == 2 {
        return TorusCharacter::trivial(p, n);
    }
    let zeta = primitive_root(p);
    let first = v.iter().position(|x| !x.is_zero()).unwrap();
    let mut exps = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = FqMatrix::identity(n, p);
        d[(i, i)] = FqScalar::new(zeta as i64, p);
        let idx = g.index_of(&d).expect("torus element in group");
        let w = rep.of(idx).mul_vec(v);
        let c = w[first].mul(&v[first].inv());
        assert!(
            w.iter().zip(v).all(|(wi, vi)| *wi == vi.mul(&c)),
            "torus does not act by a scalar on the fixed line"
        );
        // discrete log base zeta
        let mut e = 0u32;
        let mut x = FqScalar::one(p);
        while x != c {
            x = x.mul(&FqScalar::new(zeta as i64, p));
            e += 1;
            assert!(e < p, "discrete log failed");
        }
        exps.push(e as i64);
    }
    TorusCharacter::new(p, exps)
}

/// Computes the full parameter set of a certified irreducible module. Errors
/// when the U-fixed space is not a line or the line stabilizer is not a
/// standard parabolic; both would contradict verified structure theory.
pub fn parameters(group: &FiniteGL, rep: ModuleRep) -> Result<IrreducibleData> {
    let grep = GroupRep::new(group, rep);
    let borel = group.parabolic(RootSet::empty(group.n));

    let fu = fixed_space(&grep, &borel.n_elems);
    if fu.cols() != 1 {
        return Err(CoreError::ContradictionDiagnostic(format!(
            "U(k)-fixed space of an irreducible module has dimension {}, expected 1",
            fu.cols()
        )));
    }
    let u_fixed = fu.col(0);
    let fubar = fixed_space(&grep, &borel.nbar_elems);
    if fubar.cols() != 1 {
        return Err(CoreError::ContradictionDiagnostic(format!(
            "Ubar(k)-fixed space has dimension {}, expected 1",
            fubar.cols()
        )));
    }
    let ubar_fixed = fubar.col(0);

    let psi = character_on_line(&grep, &u_fixed);
    let delta_psi = psi.delta_psi();

    let stab = line_stabilizer(&grep, &u_fixed);
    let delta_v = match_standard_parabolic(group, &stab, false)?;
    let bar_stab = line_stabilizer(&grep, &ubar_fixed);
    let delta_v_bar = match_standard_parabolic(group, &bar_stab, true)?;

    if !delta_v.is_subset_of(&delta_psi) {
        return Err(CoreError::ContradictionDiagnostic(format!(
            "stabilizer set {:?} is not contained in {:?}",
            delta_v, delta_psi
        )));
    }
    Ok(IrreducibleData {
        rep: grep.rep,
        psi,
        delta_psi,
        delta_v,
        delta_v_bar,
        u_fixed,
        ubar_fixed,
        line_stabilizer: stab,
        bar_line_stabilizer: bar_stab,
    })
}

/// Matches an element index set against the standard (or opposite standard)
/// parabolics; errors when it is none of them.
fn match_standard_parabolic(group: &FiniteGL, set: &[usize], opposite: bool) -> Result<RootSet> {
    for j in RootSet::full(group.n).subsets() {
        let par = group.parabolic(j);
        let cand = if opposite { &par.pbar_elems } else { &par.p_elems };
        if cand == set {
            return Ok(j);
        }
    }
    Err(CoreError::ContradictionDiagnostic(
        "line stabilizer is not a standard parabolic subgroup".into(),
    ))
}

/// The complete table of irreducible modules of one group.
pub struct Classification {
    pub group_tag: String,
    pub items: Vec<IrreducibleData>,
}

impl Classification {
    pub fn find(&self, psi: &TorusCharacter, j: RootSet) -> Option<&IrreducibleData> {
        self.items
            .iter()
            .find(|d| d.psi == *psi && d.delta_v == j)
    }
}

/// Classifies all irreducible modules of the group: chops a seed inventory
/// until the number of pairwise non-isomorphic factors reaches the p-regular
/// class count, then checks that the parameter map is a bijection onto
/// {(psi, J subset of Delta_psi)}.
pub fn classify(group: &FiniteGL) -> Result<Classification> {
    let target = group.p_regular_class_count();
    let mut found: Vec<ModuleRep> = Vec::new();

    let mut push_factors = |seed: &ModuleRep, found: &mut Vec<ModuleRep>| {
        let series = meataxe::chop(seed, 0);
        for (f, _) in series.factors {
            if !found.iter().any(|g| matches!(meataxe::is_isomorphic(g, &f), Iso::Yes(_))) {
                found.push(f);
            }
        }
    };

    let det_max = (group.p - 1).max(1);
    let mut seeds: Vec<ModuleRep> = Vec::new();
    for m in 0..det_max {
        seeds.push(group.det_rep(m));
    }
    for j in RootSet::full(group.n).subsets() {
        let par = group.parabolic(j);
        seeds.push(group.coset_perm_rep(&par));
    }
    let nat = group.natural_rep();
    let mut tensor = nat.clone();
    for _ in 1..group.n * (group.p as usize - 1).max(1) {
        for m in 0..det_max {
            seeds.push(if m == 0 {
                tensor.clone()
            } else {
                tensor.tensor(&group.det_rep(m))
            });
        }
        tensor = tensor.tensor(&nat);
        if tensor.dim > 70 {
            break;
        }
    }

    for seed in &seeds {
        if found.len() >= target {
            break;
        }
        push_factors(seed, &mut found);
    }
    // safety net: tensor discovered factors together
    if found.len() < target {
        let snapshot = found.clone();
        'outer: for a in &snapshot {
            for b in &snapshot {
                if a.dim * b.dim > 70 {
                    continue;
                }
                push_factors(&a.tensor(b), &mut found);
                if found.len() >= target {
                    break 'outer;
                }
            }
        }
    }
    if found.len() != target {
        return Err(CoreError::IncompleteInventory(format!(
            "found {} irreducibles, expected {}",
            found.len(),
            target
        )));
    }

    // every factor must be absolutely irreducible for the prime-field
    // arithmetic downstream to be valid
    for f in &found {
        if !meataxe::is_absolutely_irreducible(f)? {
            return Err(CoreError::ContradictionDiagnostic(format!(
                "factor of dimension {} is irreducible but not absolutely irreducible",
                f.dim
            )));
        }
    }

    let mut items: Vec<IrreducibleData> = found
        .into_iter()
        .map(|f| parameters(group, f))
        .collect::<Result<_>>()?;
    items.sort_by_key(|d| (d.rep.dim, d.psi.exps.clone(), d.delta_v));

    // bijection check against {(psi, J subset of Delta_psi)}
    let mut expected = std::collections::BTreeSet::new();
    for psi in all_characters(group.p, group.n) {
        for j in psi.delta_psi().subsets() {
            expected.insert((psi.exps.clone(), j));
        }
    }
    let mut got = std::collections::BTreeSet::new();
    for d in &items {
        if !got.insert((d.psi.exps.clone(), d.delta_v)) {
            return Err(CoreError::ContradictionDiagnostic(format!(
                "two irreducibles share parameters ({:?}, {:?})",
                d.psi, d.delta_v
            )));
        }
    }
    if got != expected {
        return Err(CoreError::ContradictionDiagnostic(
            "parameter map is not a bijection onto {(psi, J in Delta_psi)}".into(),
        ));
    }

    Ok(Classification { group_tag: group.tag(), items })
}

/// All characters of the diagonal torus.
pub fn all_characters(p: u32, n: usize) -> Vec<TorusCharacter> {
    let m = (p - 1).max(1) as u64;
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut exps = Vec::with_capacity(n);
            for _ in 0..n {
                exps.push((code % m) as i64);
                code /= m;
            }
            TorusCharacter::new(p, exps)
        })
        .collect()
}

/// The special module with trivial torus character and prescribed stabilizer
/// set: J = Delta is the trivial character, J = empty the Steinberg module.
pub fn special_rep<'c>(cls: &'c Classification, group: &FiniteGL, j: RootSet) -> &'c IrreducibleData {
    let triv = TorusCharacter::trivial(group.p, group.n);
    cls.find(&triv, j)
        .expect("special module exists for every J by the classification")
}
