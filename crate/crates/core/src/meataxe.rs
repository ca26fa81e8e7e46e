//! Decomposition of finite-group modules over F_p into certified irreducible
//! composition factors.
//!
//! The chopper is the Norton/Parker style test: pick an element of the
//! enveloping algebra, factor its characteristic polynomial, and spin
//! null-space vectors. The verdicts here are certified, not probabilistic:
//! for every irreducible factor f of the characteristic polynomial we spin
//! *every* line of ker f(theta) and of ker f(theta^t), which exhausts the
//! candidate proper submodules by Norton's criterion. Randomness only chooses
//! which algebra element to try first, so it affects running time and the
//! particular invariant subspace returned, never the verdict.

use crate::error::{CoreError, Result};
use crate::ff::{self, FqMatrix, FqScalar};
use crate::fpoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A representation of a finitely generated group: one invertible matrix per
/// generator. `group_tag` names the abstract group together with the chosen
/// generating set, so intertwiner computations only combine compatible
/// modules.
#[derive(Clone)]
pub struct ModuleRep {
    pub dim: usize,
    pub generators: Vec<FqMatrix>,
    pub group_tag: String,
}

impl ModuleRep {
    pub fn new(generators: Vec<FqMatrix>, group_tag: impl Into<String>) -> Self {
        assert!(!generators.is_empty());
        let dim = generators[0].rows();
        for g in &generators {
            assert!(g.is_square() && g.rows() == dim, "generator size mismatch");
            assert!(!ff::det(g).is_zero(), "generator must be invertible");
        }
        ModuleRep { dim, generators, group_tag: group_tag.into() }
    }

    pub fn modulus(&self) -> u32 {
        self.generators[0].modulus()
    }

    /// Tensor product module (Kronecker products of generator images).
    pub fn tensor(&self, rhs: &ModuleRep) -> ModuleRep {
        assert_eq!(self.group_tag, rhs.group_tag);
        let gens = self
            .generators
            .iter()
            .zip(&rhs.generators)
            .map(|(a, b)| a.kron(b))
            .collect();
        ModuleRep::new(gens, self.group_tag.clone())
    }

    /// Contragredient module: inverse transpose on generators.
    pub fn dual(&self) -> ModuleRep {
        let gens = self
            .generators
            .iter()
            .map(|g| ff::invert(g).expect("generator is invertible").transpose())
            .collect();
        ModuleRep::new(gens, self.group_tag.clone())
    }

    /// Restriction of the action to an invariant subspace given by basis
    /// columns. Panics when the subspace is not invariant.
    pub fn restrict(&self, basis: &FqMatrix) -> ModuleRep {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let image = g.mul(basis);
                express_in_basis(basis, &image)
            })
            .collect();
        ModuleRep::new(gens, self.group_tag.clone())
    }

    /// Quotient module by an invariant subspace.
    pub fn quotient(&self, basis: &FqMatrix) -> ModuleRep {
        let p = self.modulus();
        let (proj, section) = quotient_maps(basis, self.dim, p);
        let gens = self
            .generators
            .iter()
            .map(|g| proj.mul(&g.mul(&section)))
            .collect();
        ModuleRep::new(gens, self.group_tag.clone())
    }
}

impl std::fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModuleRep(dim={}, tag={})", self.dim, self.group_tag)
    }
}

/// Writes each column of `image` in terms of the columns of `basis`.
fn express_in_basis(basis: &FqMatrix, image: &FqMatrix) -> FqMatrix {
    let p = basis.modulus();
    let mut cols = Vec::with_capacity(image.cols());
    for j in 0..image.cols() {
        let col = image.col(j);
        let sol = ff::solve(basis, &col).expect("subspace is not invariant");
        cols.push(sol);
    }
    FqMatrix::from_columns(basis.cols(), p, &cols)
}

/// Projection and section for the quotient by the column span of `basis`:
/// returns (proj, section) with proj * section = identity on the quotient and
/// proj * basis = 0.
pub fn quotient_maps(basis: &FqMatrix, dim: usize, p: u32) -> (FqMatrix, FqMatrix) {
    // complete basis columns to a full basis of F_p^dim
    let mut full = ff::column_space(basis);
    let k = full.cols();
    let mut extra = Vec::new();
    for e in 0..dim {
        if full.cols() == dim {
            break;
        }
        let mut cand = vec![FqScalar::zero(p); dim];
        cand[e] = FqScalar::one(p);
        let test = full.hstack(&FqMatrix::from_columns(dim, p, &[cand.clone()]));
        if ff::rank(&test) > full.cols() {
            full = test;
            extra.push(cand);
        }
    }
    assert_eq!(full.cols(), dim, "basis completion failed");
    let inv = ff::invert(&full).expect("full basis is invertible");
    // quotient coordinates = last dim-k rows of inv
    let q = dim - k;
    let mut proj = FqMatrix::zero(q, dim, p);
    for i in 0..q {
        for j in 0..dim {
            proj[(i, j)] = inv[(k + i, j)];
        }
    }
    let mut section = FqMatrix::zero(dim, q, p);
    for i in 0..dim {
        for j in 0..q {
            section[(i, j)] = full[(i, k + j)];
        }
    }
    (proj, section)
}

/// Verdict of the irreducibility test.
pub enum Verdict {
    /// Certified irreducible; carries a human-readable certificate note.
    Irreducible(String),
    /// A proper nonzero invariant subspace, as basis columns.
    Reducible(FqMatrix),
}

/// Composition factors with multiplicities.
pub struct CompositionSeries {
    pub factors: Vec<(ModuleRep, usize)>,
}

impl CompositionSeries {
    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(m, k)| m.dim * k).sum()
    }
}

/// Spin of a vector: basis columns of the smallest invariant subspace
/// containing `v`.
pub fn spin(gens: &[FqMatrix], v: &[FqScalar]) -> FqMatrix {
    let dim = gens[0].rows();
    let p = gens[0].modulus();
    let mut basis: Vec<Vec<FqScalar>> = Vec::new();
    let mut mat = FqMatrix::zero(dim, 0, p);
    let mut queue = vec![v.to_vec()];
    while let Some(w) = queue.pop() {
        if mat.cols() == dim {
            break;
        }
        if ff::in_column_span(&mat, &w) {
            continue;
        }
        basis.push(w.clone());
        mat = FqMatrix::from_columns(dim, p, &basis);
        for g in gens {
            queue.push(g.mul_vec(&w));
        }
    }
    mat
}

/// All lines of the column span of `space`, one representative vector each.
fn lines_of(space: &FqMatrix) -> Vec<Vec<FqScalar>> {
    let p = space.modulus();
    let dim = space.rows();
    let k = space.cols();
    if k == 0 {
        return Vec::new();
    }
    let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    let mut out = Vec::new();
    let total = (p as u64).pow(k as u32);
    for idx in 1..total {
        let mut c = idx;
        let mut coeffs = Vec::with_capacity(k);
        for _ in 0..k {
            coeffs.push(FqScalar::new((c % p as u64) as i64, p));
            c /= p as u64;
        }
        let mut v = vec![FqScalar::zero(p); dim];
        for (j, co) in coeffs.iter().enumerate() {
            for i in 0..dim {
                v[i] = v[i].add(&space[(i, j)].mul(co));
            }
        }
        // normalize to first nonzero coordinate = 1 to dedupe lines
        let Some(first) = v.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let inv = v[first].inv();
        let norm: Vec<u32> = v.iter().map(|x| x.mul(&inv).value()).collect();
        if seen.insert(norm) {
            out.push(v);
        }
    }
    out
}

/// Cap on how many lines of a kernel we are willing to spin before trying a
/// different algebra element.
const LINE_CAP: usize = 4096;

/// Norton/Parker irreducibility test with exhaustive kernel spinning; the
/// verdict is always definite.
pub fn is_irreducible(m: &ModuleRep, rng_seed: u64) -> Verdict {
    if m.dim == 1 {
        return Verdict::Irreducible("dimension 1".into());
    }
    let p = m.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let gens_t: Vec<FqMatrix> = m.generators.iter().map(|g| g.transpose()).collect();

    for attempt in 0.. {
        let theta = random_algebra_element(&mut rng, &m.generators, attempt);
        let cp = fpoly::char_poly(&theta);
        let factors = fpoly::distinct_irreducible_factors(&cp);
        for f in &factors {
            let ft = f.eval_matrix(&theta);
            let ker = ff::kernel(&ft);
            let nlines = line_count(p, ker.cols());
            if nlines > LINE_CAP {
                continue;
            }
            for v in lines_of(&ker) {
                let w = spin(&m.generators, &v);
                if w.cols() < m.dim {
                    return Verdict::Reducible(w);
                }
            }
            // dual side: a proper submodule of the transposed module gives a
            // proper invariant subspace of the original as its annihilator
            let kert = ff::kernel(&ft.transpose());
            if line_count(p, kert.cols()) > LINE_CAP {
                continue;
            }
            for v in lines_of(&kert) {
                let w = spin(&gens_t, &v);
                if w.cols() < m.dim {
                    let ann = ff::kernel(&w.transpose());
                    debug_assert!(ann.cols() > 0 && ann.cols() < m.dim);
                    return Verdict::Reducible(ann);
                }
            }
            return Verdict::Irreducible(format!(
                "Norton criterion: all {} lines of ker f(theta) and all lines of \
                 ker f(theta^t) spin to the full module, f = {:?}",
                lines_of(&ker).len(),
                f
            ));
        }
        if attempt > 64 {
            // With kernels this persistent the module is tiny enough to
            // exhaust every line of the whole space instead.
            let full = FqMatrix::identity(m.dim, p);
            if line_count(p, m.dim) <= LINE_CAP * 8 {
                for v in lines_of(&full) {
                    let w = spin(&m.generators, &v);
                    if w.cols() < m.dim {
                        return Verdict::Reducible(w);
                    }
                }
                return Verdict::Irreducible("exhaustive spin of every line".into());
            }
            panic!("meataxe failed to find a usable algebra element");
        }
    }
    unreachable!()
}

fn line_count(p: u32, k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    let mut n = 1usize;
    for _ in 0..k {
        n = n.saturating_mul(p as usize);
    }
    (n - 1) / (p as usize - 1).max(1)
}

fn random_algebra_element(rng: &mut ChaCha8Rng, gens: &[FqMatrix], attempt: usize) -> FqMatrix {
    let dim = gens[0].rows();
    let p = gens[0].modulus();
    // short random words summed with random coefficients; longer as attempts grow
    let words = 2 + attempt.min(6);
    let mut acc = FqMatrix::zero(dim, dim, p);
    for _ in 0..words {
        let len = 1 + rng.gen_range(0..=2 + attempt.min(4));
        let mut w = FqMatrix::identity(dim, p);
        for _ in 0..len {
            let g = &gens[rng.gen_range(0..gens.len())];
            w = w.mul(g);
        }
        let c = FqScalar::new(rng.gen_range(0..p as i64), p);
        acc = acc.add(&w.scale(&c));
    }
    acc
}

/// Full composition series; the factor multiset is independent of the seed
/// (checked by the tests via `is_isomorphic`).
pub fn chop(m: &ModuleRep, rng_seed: u64) -> CompositionSeries {
    let mut todo = vec![m.clone()];
    let mut factors: Vec<(ModuleRep, usize)> = Vec::new();
    while let Some(cur) = todo.pop() {
        match is_irreducible(&cur, rng_seed) {
            Verdict::Irreducible(_) => {
                let mut merged = false;
                for (f, mult) in factors.iter_mut() {
                    if let Iso::Yes(_) = is_isomorphic(f, &cur) {
                        *mult += 1;
                        merged = true;
                        break;
                    }
                }
                if !merged {
                    factors.push((cur, 1));
                }
            }
            Verdict::Reducible(basis) => {
                todo.push(cur.restrict(&basis));
                todo.push(cur.quotient(&basis));
            }
        }
    }
    factors.sort_by_key(|(f, _)| f.dim);
    CompositionSeries { factors }
}

/// Isomorphism test outcome.
pub enum Iso {
    No,
    Yes(FqMatrix),
}

/// Tests two modules over the same group presentation for isomorphism. For
/// irreducible inputs any nonzero intertwiner is invertible (Schur), which is
/// the case this is used in; for reducible inputs the search additionally
/// tries linear combinations of the intertwiner basis.
pub fn is_isomorphic(a: &ModuleRep, b: &ModuleRep) -> Iso {
    assert_eq!(a.group_tag, b.group_tag, "modules over different groups");
    assert_eq!(a.generators.len(), b.generators.len());
    if a.dim != b.dim {
        return Iso::No;
    }
    let pairs: Vec<(FqMatrix, FqMatrix)> = a
        .generators
        .iter()
        .cloned()
        .zip(b.generators.iter().cloned())
        .collect();
    let homs = ff::solve_sylvester_family(&pairs);
    if homs.is_empty() {
        return Iso::No;
    }
    for x in &homs {
        if !ff::det(x).is_zero() {
            return Iso::Yes(x.clone());
        }
    }
    // reducible corner: look for an invertible combination
    let p = a.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    for _ in 0..200 {
        let mut x = FqMatrix::zero(a.dim, a.dim, p);
        for h in &homs {
            let c = FqScalar::new(rng.gen_range(0..p as i64), p);
            x = x.add(&h.scale(&c));
        }
        if !ff::det(&x).is_zero() {
            return Iso::Yes(x);
        }
    }
    Iso::No
}

/// Whether the endomorphism algebra is one-dimensional. Precondition: the
/// module is certified irreducible.
pub fn is_absolutely_irreducible(m: &ModuleRep) -> Result<bool> {
    if let Verdict::Reducible(_) = is_irreducible(m, 1) {
        return Err(CoreError::Precondition(
            "is_absolutely_irreducible requires an irreducible module".into(),
        ));
    }
    let pairs: Vec<(FqMatrix, FqMatrix)> = m
        .generators
        .iter()
        .cloned()
        .zip(m.generators.iter().cloned())
        .collect();
    Ok(ff::solve_sylvester_family(&pairs).len() == 1)
}

/// Brute-force oracle: all proper nonzero invariant subspaces obtained by
/// spinning every vector; only feasible for tiny modules (dim <= 6 over
/// F_2/F_3). Used by tests as the independent reference for the chopper.
pub fn brute_invariant_subspaces(m: &ModuleRep) -> Vec<FqMatrix> {
    let full = FqMatrix::identity(m.dim, m.modulus());
    let mut out: Vec<FqMatrix> = Vec::new();
    for v in lines_of(&full) {
        let w = spin(&m.generators, &v);
        if w.cols() < m.dim && !out.iter().any(|u| same_space(u, &w)) {
            out.push(w);
        }
    }
    out
}

fn same_space(a: &FqMatrix, b: &FqMatrix) -> bool {
    a.cols() == b.cols()
        && (0..b.cols()).all(|j| ff::in_column_span(a, &b.col(j)))
}

/// Brute-force composition factor dimensions (sorted), via the subspace
/// oracle; exponential, test use only.
pub fn brute_factor_dims(m: &ModuleRep) -> Vec<usize> {
    let subs = brute_invariant_subspaces(m);
    let Some(min) = subs.iter().min_by_key(|s| s.cols()) else {
        return vec![m.dim];
    };
    let mut dims = brute_factor_dims(&m.restrict(min));
    dims.extend(brute_factor_dims(&m.quotient(min)));
    dims.sort();
    dims
}

#[cfg(test)]
mod tests {
    use super::*;

    /// GL(2,2) natural module generators: S = [[0,1],[1,0]], T = [[1,1],[0,1]].
    fn gl22_natural() -> ModuleRep {
        ModuleRep::new(
            vec![
                FqMatrix::from_i64(2, 2, 2, &[0, 1, 1, 0]),
                FqMatrix::from_i64(2, 2, 2, &[1, 1, 0, 1]),
            ],
            "gl(2,2)",
        )
    }

    /// Permutation module of GL(2,p) acting on the p+1 points of the
    /// projective line.
    fn projective_line_module(p: u32, gens: &[FqMatrix], tag: &str) -> ModuleRep {
        // points: [1:0], [c:1] for c in F_p
        let mut points: Vec<(FqScalar, FqScalar)> = vec![(FqScalar::one(p), FqScalar::zero(p))];
        for c in 0..p {
            points.push((FqScalar::new(c as i64, p), FqScalar::one(p)));
        }
        let norm = |x: FqScalar, y: FqScalar| -> (u32, u32) {
            if !y.is_zero() {
                let i = y.inv();
                (x.mul(&i).value(), 1)
            } else {
                (1, 0)
            }
        };
        let mats = gens
            .iter()
            .map(|g| {
                let mut m = FqMatrix::zero(points.len(), points.len(), p);
                for (j, &(x, y)) in points.iter().enumerate() {
                    let nx = g[(0, 0)].mul(&x).add(&g[(0, 1)].mul(&y));
                    let ny = g[(1, 0)].mul(&x).add(&g[(1, 1)].mul(&y));
                    let (a, b) = norm(nx, ny);
                    let i = points
                        .iter()
                        .position(|&(u, v)| (u.value(), v.value()) == (a, b))
                        .unwrap();
                    m[(i, j)] = FqScalar::one(p);
                }
                m
            })
            .collect();
        ModuleRep::new(mats, tag)
    }

    #[test]
    fn one_dimensional_is_irreducible() {
        let m = ModuleRep::new(vec![FqMatrix::from_i64(1, 1, 3, &[2])], "c2");
        assert!(matches!(is_irreducible(&m, 0), Verdict::Irreducible(_)));
    }

    #[test]
    fn natural_gl22_irreducible_vs_exhaustive_oracle() {
        let m = gl22_natural();
        // oracle: all 3 lines of F_2^2 spin to the full module
        assert!(brute_invariant_subspaces(&m).is_empty());
        assert!(matches!(is_irreducible(&m, 0), Verdict::Irreducible(_)));
    }

    #[test]
    fn p1_f3_permutation_module_reducible_with_all_ones_line() {
        let gens = vec![
            FqMatrix::from_i64(2, 2, 3, &[0, 2, 1, 0]),
            FqMatrix::from_i64(2, 2, 3, &[1, 1, 0, 1]),
            FqMatrix::from_i64(2, 2, 3, &[2, 0, 0, 1]),
        ];
        let m = projective_line_module(3, &gens, "gl(2,3)");
        assert_eq!(m.dim, 4);
        let Verdict::Reducible(w) = is_irreducible(&m, 0) else {
            panic!("permutation module must be reducible");
        };
        // the all-ones vector spans an invariant line
        let ones = vec![FqScalar::one(3); 4];
        let span = spin(&m.generators, &ones);
        assert_eq!(span.cols(), 1);
        assert!(w.cols() < 4);
    }

    #[test]
    fn chop_p1_f3_matches_brute_force_oracle() {
        let gens = vec![
            FqMatrix::from_i64(2, 2, 3, &[0, 2, 1, 0]),
            FqMatrix::from_i64(2, 2, 3, &[1, 1, 0, 1]),
            FqMatrix::from_i64(2, 2, 3, &[2, 0, 0, 1]),
        ];
        let m = projective_line_module(3, &gens, "gl(2,3)");
        let dims_oracle = brute_factor_dims(&m);
        assert_eq!(dims_oracle, vec![1, 3]);
        let series = chop(&m, 0);
        let mut dims: Vec<usize> = series
            .factors
            .iter()
            .flat_map(|(f, k)| std::iter::repeat(f.dim).take(*k))
            .collect();
        dims.sort();
        assert_eq!(dims, dims_oracle);
        assert_eq!(series.total_dim(), 4);
    }

    #[test]
    fn chop_p1_f2_trivial_plus_natural() {
        let nat = gl22_natural();
        let m = projective_line_module(2, &nat.generators, "gl(2,2)");
        assert_eq!(m.dim, 3);
        assert_eq!(brute_factor_dims(&m), vec![1, 2]);
        let series = chop(&m, 7);
        let mut dims: Vec<usize> = series
            .factors
            .iter()
            .flat_map(|(f, k)| std::iter::repeat(f.dim).take(*k))
            .collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        // the 2-dimensional factor is the natural module
        let two = series.factors.iter().find(|(f, _)| f.dim == 2).unwrap();
        assert!(matches!(is_isomorphic(&two.0, &nat), Iso::Yes(_)));
    }

    #[test]
    fn chop_seed_independent() {
        let gens = vec![
            FqMatrix::from_i64(2, 2, 3, &[0, 2, 1, 0]),
            FqMatrix::from_i64(2, 2, 3, &[1, 1, 0, 1]),
            FqMatrix::from_i64(2, 2, 3, &[2, 0, 0, 1]),
        ];
        let m = projective_line_module(3, &gens, "gl(2,3)");
        let a = chop(&m, 1);
        let b = chop(&m, 99);
        assert_eq!(a.factors.len(), b.factors.len());
        for (fa, ka) in &a.factors {
            let hit = b
                .factors
                .iter()
                .find(|(fb, _)| matches!(is_isomorphic(fa, fb), Iso::Yes(_)))
                .expect("factor multisets must agree");
            assert_eq!(*ka, hit.1);
        }
    }

    #[test]
    fn isomorphism_basics() {
        let m = gl22_natural();
        assert!(matches!(is_isomorphic(&m, &m), Iso::Yes(_)));
        // conjugate by a fixed invertible matrix
        let c = FqMatrix::from_i64(2, 2, 2, &[1, 1, 1, 0]);
        let cinv = ff::invert(&c).unwrap();
        let conj = ModuleRep::new(
            m.generators.iter().map(|g| c.mul(g).mul(&cinv)).collect(),
            "gl(2,2)",
        );
        let Iso::Yes(x) = is_isomorphic(&m, &conj) else {
            panic!("conjugate module must be isomorphic");
        };
        for (a, b) in m.generators.iter().zip(&conj.generators) {
            assert_eq!(x.mul(a), b.mul(&x));
        }
        // different dims
        let triv = ModuleRep::new(
            vec![
                FqMatrix::identity(1, 2),
                FqMatrix::identity(1, 2),
            ],
            "gl(2,2)",
        );
        assert!(matches!(is_isomorphic(&triv, &m), Iso::No));
    }

    #[test]
    fn absolute_irreducibility() {
        let m = gl22_natural();
        assert!(is_absolutely_irreducible(&m).unwrap());
        let triv = ModuleRep::new(vec![FqMatrix::from_i64(1, 1, 3, &[1])], "t");
        assert!(is_absolutely_irreducible(&triv).unwrap());
        // precondition violation: a visibly reducible module
        let red = ModuleRep::new(vec![FqMatrix::from_i64(2, 2, 3, &[1, 0, 0, 2])], "c2");
        assert!(is_absolutely_irreducible(&red).is_err());
    }
}
