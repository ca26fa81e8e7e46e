//! Dense exact linear algebra over prime fields F_p.
//!
//! Everything downstream (module chopping, fixed spaces, Hecke operator
//! values) runs on [`FqMatrix`]. Group orders in scope are at most 10^4 and
//! module dimensions at most a few dozen, so the storage is dense row-major
//! and the algorithms are plain Gaussian elimination. The modulus is stored
//! per scalar but validated once per matrix, which makes mixed-modulus bugs
//! impossible to write.

use crate::error::{CoreError, Result};

/// Largest admissible prime modulus.
pub const MAX_PRIME: u32 = 13;

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A residue in F_p together with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FqScalar {
    value: u32,
    p: u32,
}

impl FqScalar {
    /// Reduces `value` into `[0, p)`. Panics on a non-prime or out-of-cap
    /// modulus; the modulus is configuration data, not runtime input.
    pub fn new(value: i64, p: u32) -> Self {
        assert!(is_prime(p) && p <= MAX_PRIME, "modulus {p} not an admissible prime");
        let m = p as i64;
        let value = (value % m + m) % m;
        FqScalar { value: value as u32, p }
    }

    pub fn zero(p: u32) -> Self {
        Self::new(0, p)
    }

    pub fn one(p: u32) -> Self {
        Self::new(1, p)
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, rhs: &FqScalar) -> FqScalar {
        debug_assert_eq!(self.p, rhs.p);
        FqScalar::new((self.value + rhs.value) as i64, self.p)
    }

    pub fn sub(&self, rhs: &FqScalar) -> FqScalar {
        debug_assert_eq!(self.p, rhs.p);
        FqScalar::new(self.value as i64 - rhs.value as i64, self.p)
    }

    pub fn mul(&self, rhs: &FqScalar) -> FqScalar {
        debug_assert_eq!(self.p, rhs.p);
        FqScalar::new((self.value * rhs.value) as i64, self.p)
    }

    pub fn neg(&self) -> FqScalar {
        FqScalar::new(-(self.value as i64), self.p)
    }

    /// Multiplicative inverse by Fermat; panics on zero.
    pub fn inv(&self) -> FqScalar {
        assert!(self.value != 0, "inverse of zero in F_{}", self.p);
        self.pow(self.p - 2)
    }

    pub fn pow(&self, mut e: u32) -> FqScalar {
        let mut base = *self;
        let mut acc = FqScalar::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl std::fmt::Debug for FqScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Smallest generator of F_p^*.
pub fn primitive_root(p: u32) -> u32 {
    'cand: for g in 2..p {
        let mut x = 1u32;
        for _ in 0..p - 2 {
            x = x * g % p;
            if x == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    1 // p = 2
}

/// Dense row-major matrix over F_p with a uniform modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FqScalar>,
}

impl FqMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FqScalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        if let Some(first) = entries.first() {
            let p = first.modulus();
            assert!(entries.iter().all(|e| e.modulus() == p), "mixed moduli");
        }
        FqMatrix { rows, cols, entries }
    }

    pub fn from_i64(rows: usize, cols: usize, p: u32, data: &[i64]) -> Self {
        let entries = data.iter().map(|&v| FqScalar::new(v, p)).collect();
        Self::new(rows, cols, entries)
    }

    pub fn zero(rows: usize, cols: usize, p: u32) -> Self {
        Self::new(rows, cols, vec![FqScalar::zero(p); rows * cols])
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zero(n, n, p);
        for i in 0..n {
            m[(i, i)] = FqScalar::one(p);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.entries.first().map(|e| e.modulus()).unwrap_or(2)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self[(i, j)].value() == u32::from(i == j))
            })
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut out = FqMatrix::zero(self.cols, self.rows, self.modulus());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn add(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        FqMatrix::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        FqMatrix::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, c: &FqScalar) -> FqMatrix {
        let entries = self.entries.iter().map(|a| a.mul(c)).collect();
        FqMatrix::new(self.rows, self.cols, entries)
    }

    pub fn mul(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let p = self.modulus();
        let m = p as u64;
        let mut out = FqMatrix::zero(self.rows, rhs.cols, p);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += (self[(i, k)].value() as u64) * (rhs[(k, j)].value() as u64);
                }
                out[(i, j)] = FqScalar::new((acc % m) as i64, p);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FqScalar]) -> Vec<FqScalar> {
        assert_eq!(self.cols, v.len());
        let p = self.modulus();
        (0..self.rows)
            .map(|i| {
                let mut acc = FqScalar::zero(p);
                for k in 0..self.cols {
                    acc = acc.add(&self[(i, k)].mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> FqMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = FqMatrix::identity(self.rows, self.modulus());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn row(&self, i: usize) -> &[FqScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FqScalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = FqMatrix::zero(self.rows, self.cols + rhs.cols, self.modulus());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)];
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, rhs.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&rhs.entries);
        FqMatrix::new(self.rows + rhs.rows, self.cols, entries)
    }

    pub fn from_columns(rows: usize, p: u32, cols: &[Vec<FqScalar>]) -> FqMatrix {
        let mut out = FqMatrix::zero(rows, cols.len(), p);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                out[(i, j)] = c[i];
            }
        }
        out
    }

    /// Kronecker (tensor) product.
    pub fn kron(&self, rhs: &FqMatrix) -> FqMatrix {
        let p = self.modulus();
        let mut out = FqMatrix::zero(self.rows * rhs.rows, self.cols * rhs.cols, p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a.mul(&rhs[(k, l)]);
                    }
                }
            }
        }
        out
    }

    /// Compact canonical byte key, used for hashing group elements.
    pub fn key(&self) -> Vec<u8> {
        let mut k = Vec::with_capacity(self.entries.len() + 2);
        k.push(self.rows as u8);
        k.push(self.cols as u8);
        k.extend(self.entries.iter().map(|e| e.value() as u8));
        k
    }
}

impl std::ops::Index<(usize, usize)> for FqMatrix {
    type Output = FqScalar;
    fn index(&self, (i, j): (usize, usize)) -> &FqScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FqMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FqScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl std::fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)].value())?;
            }
        }
        write!(f, "]")
    }
}

/// Result of row reduction: the reduced row echelon form, its rank and the
/// pivot column indices.
pub struct Rref {
    pub reduced: FqMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Unique reduced row echelon form over F_p.
pub fn rref(m: &FqMatrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        for j in 0..cols {
            let tmp = a[(r, j)];
            a[(r, j)] = a[(pr, j)];
            a[(pr, j)] = tmp;
        }
        let inv = a[(r, c)].inv();
        for j in 0..cols {
            a[(r, j)] = a[(r, j)].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)];
                for j in 0..cols {
                    let s = a[(r, j)].mul(&f);
                    a[(i, j)] = a[(i, j)].sub(&s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { reduced: a, rank: r, pivots }
}

pub fn rank(m: &FqMatrix) -> usize {
    rref(m).rank
}

/// Basis of the right null space, returned as matrix columns; `cols - rank`
/// of them.
pub fn kernel(m: &FqMatrix) -> FqMatrix {
    let p = m.modulus();
    let cols = m.cols();
    let red = rref(m);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &red.pivots {
            v[c] = true;
        }
        v
    };
    let free: Vec<usize> = (0..cols).filter(|&c| !pivot_set[c]).collect();
    let mut basis = FqMatrix::zero(cols, free.len(), p);
    for (idx, &fc) in free.iter().enumerate() {
        basis[(fc, idx)] = FqScalar::one(p);
        for (r, &pc) in red.pivots.iter().enumerate() {
            basis[(pc, idx)] = red.reduced[(r, fc)].neg();
        }
    }
    basis
}

/// Inverse of a square matrix; errors when singular.
pub fn invert(m: &FqMatrix) -> Result<FqMatrix> {
    assert!(m.is_square(), "invert requires a square matrix");
    let n = m.rows();
    let aug = m.hstack(&FqMatrix::identity(n, m.modulus()));
    let red = rref(&aug);
    if red.rank < n || red.pivots.iter().take(n).copied().ne(0..n) {
        return Err(CoreError::SingularMatrix(format!("{m:?}")));
    }
    let mut inv = FqMatrix::zero(n, n, m.modulus());
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = red.reduced[(i, n + j)];
        }
    }
    Ok(inv)
}

pub fn det(m: &FqMatrix) -> FqScalar {
    assert!(m.is_square());
    let p = m.modulus();
    let n = m.rows();
    let mut a = m.clone();
    let mut d = FqScalar::one(p);
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return FqScalar::zero(p);
        };
        if pr != c {
            for j in 0..n {
                let tmp = a[(c, j)];
                a[(c, j)] = a[(pr, j)];
                a[(pr, j)] = tmp;
            }
            d = d.neg();
        }
        d = d.mul(&a[(c, c)]);
        let inv = a[(c, c)].inv();
        for i in c + 1..n {
            if !a[(i, c)].is_zero() {
                let f = a[(i, c)].mul(&inv);
                for j in c..n {
                    let s = a[(c, j)].mul(&f);
                    a[(i, j)] = a[(i, j)].sub(&s);
                }
            }
        }
    }
    d
}

/// Solves `m x = b`; returns one solution or `None` when inconsistent.
pub fn solve(m: &FqMatrix, b: &[FqScalar]) -> Option<Vec<FqScalar>> {
    assert_eq!(m.rows(), b.len());
    let p = m.modulus();
    let bm = FqMatrix::from_columns(b.len(), p, &[b.to_vec()]);
    let red = rref(&m.hstack(&bm));
    let mut x = vec![FqScalar::zero(p); m.cols()];
    for (r, &c) in red.pivots.iter().enumerate() {
        if c == m.cols() {
            return None; // pivot in the augmented column
        }
        x[c] = red.reduced[(r, m.cols())];
    }
    Some(x)
}

/// Column span of `m` as an echelonized basis (columns).
pub fn column_space(m: &FqMatrix) -> FqMatrix {
    let red = rref(&m.transpose());
    let p = m.modulus();
    let cols: Vec<Vec<FqScalar>> = (0..red.rank)
        .map(|r| red.reduced.row(r).to_vec())
        .collect();
    FqMatrix::from_columns(m.rows(), p, &cols)
}

/// Whether the column `v` lies in the column span of `basis`.
pub fn in_column_span(basis: &FqMatrix, v: &[FqScalar]) -> bool {
    solve(basis, v).is_some()
}

/// Basis of all matrices `X` (sized `d_b x d_a`) with `X A_i = B_i X` for
/// every pair. This is the intertwiner space Hom(A, B) when the pairs range
/// over corresponding generator images of two modules.
pub fn solve_sylvester_family(pairs: &[(FqMatrix, FqMatrix)]) -> Vec<FqMatrix> {
    assert!(!pairs.is_empty());
    let da = pairs[0].0.rows();
    let db = pairs[0].1.rows();
    let p = pairs[0].0.modulus();
    for (a, b) in pairs {
        assert!(a.is_square() && b.is_square());
        assert_eq!(a.rows(), da);
        assert_eq!(b.rows(), db);
    }
    // Unknown X flattened row-major: X[(i,j)] at index i*da + j.
    let unknowns = da * db;
    let mut rows: Vec<FqScalar> = Vec::new();
    let mut nrows = 0;
    for (a, b) in pairs {
        // (X A - B X)[(i,j)] = sum_k X[(i,k)] A[(k,j)] - sum_k B[(i,k)] X[(k,j)]
        for i in 0..db {
            for j in 0..da {
                let mut row = vec![FqScalar::zero(p); unknowns];
                for k in 0..da {
                    row[i * da + k] = row[i * da + k].add(&a[(k, j)]);
                }
                for k in 0..db {
                    row[k * da + j] = row[k * da + j].sub(&b[(i, k)]);
                }
                rows.extend(row);
                nrows += 1;
            }
        }
    }
    let system = FqMatrix::new(nrows, unknowns, rows);
    let ker = kernel(&system);
    (0..ker.cols())
        .map(|c| {
            let mut x = FqMatrix::zero(db, da, p);
            for i in 0..db {
                for j in 0..da {
                    x[(i, j)] = ker[(i * da + j, c)];
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: u32) -> FqMatrix {
        let data: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(0..p as i64)).collect();
        FqMatrix::from_i64(rows, cols, p, &data)
    }

    #[test]
    fn rref_identity_f3() {
        let id = FqMatrix::identity(2, 3);
        let r = rref(&id);
        assert_eq!(r.reduced, id);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one_f5() {
        // hand row-reduction: [[1,2],[2,4]] -> [[1,2],[0,0]]
        let m = FqMatrix::from_i64(2, 2, 5, &[1, 2, 2, 4]);
        let r = rref(&m);
        assert_eq!(r.reduced, FqMatrix::from_i64(2, 2, 5, &[1, 2, 0, 0]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_zero_f2() {
        let m = FqMatrix::zero(3, 3, 2);
        let r = rref(&m);
        assert!(r.reduced.is_zero());
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn kernel_identity_empty() {
        let k = kernel(&FqMatrix::identity(3, 3));
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn kernel_sum_f2() {
        // Oracle: enumerate F_2^2 and keep vectors killed by [1,1].
        let m = FqMatrix::from_i64(1, 2, 2, &[1, 1]);
        let mut oracle = Vec::new();
        for a in 0..2i64 {
            for b in 0..2i64 {
                if (a + b) % 2 == 0 && (a, b) != (0, 0) {
                    oracle.push((a, b));
                }
            }
        }
        assert_eq!(oracle, vec![(1, 1)]);
        let k = kernel(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!((k[(0, 0)].value(), k[(1, 0)].value()), (1, 1));
    }

    #[test]
    fn kernel_of_scalar_zero() {
        let m = FqMatrix::zero(1, 1, 3);
        let k = kernel(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!(k[(0, 0)].value(), 1);
    }

    #[test]
    fn invert_examples() {
        let id = FqMatrix::identity(4, 5);
        assert_eq!(invert(&id).unwrap(), id);

        let swap = FqMatrix::from_i64(2, 2, 2, &[0, 1, 1, 0]);
        assert_eq!(invert(&swap).unwrap(), swap);

        // hand inverse over F_3
        let m = FqMatrix::from_i64(2, 2, 3, &[1, 1, 0, 1]);
        assert_eq!(invert(&m).unwrap(), FqMatrix::from_i64(2, 2, 3, &[1, 2, 0, 1]));

        let sing = FqMatrix::from_i64(2, 2, 5, &[1, 2, 2, 4]);
        assert!(invert(&sing).is_err());
    }

    #[test]
    fn sylvester_identity_family_is_full_space() {
        let id = FqMatrix::identity(2, 3);
        let basis = solve_sylvester_family(&[(id.clone(), id)]);
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn sylvester_inequivalent_characters_of_c2() {
        // X * 1 = -1 * X over F_3 forces X = 0.
        let a = FqMatrix::from_i64(1, 1, 3, &[1]);
        let b = FqMatrix::from_i64(1, 1, 3, &[-1]);
        assert!(solve_sylvester_family(&[(a, b)]).is_empty());
    }

    #[test]
    fn randomized_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u32, 3, 5, 7] {
            for _ in 0..25 {
                let rows = rng.gen_range(1..=5);
                let cols = rng.gen_range(1..=5);
                let m = random_matrix(&mut rng, rows, cols, p);

                // rref idempotence
                let r1 = rref(&m);
                let r2 = rref(&r1.reduced);
                assert_eq!(r1.reduced, r2.reduced);

                // rank-nullity
                let k = kernel(&m);
                assert_eq!(r1.rank + k.cols(), cols);
                if k.cols() > 0 {
                    assert!(m.mul(&k).is_zero());
                }

                // determinism: recompute bit-identically
                let r3 = rref(&m);
                assert_eq!(r1.reduced, r3.reduced);

                // inverse round trip when square and invertible
                if rows == cols {
                    if let Ok(inv) = invert(&m) {
                        assert!(m.mul(&inv).is_identity());
                        assert!(inv.mul(&m).is_identity());
                    }
                }
            }
        }
    }

    #[test]
    fn solve_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let m = random_matrix(&mut rng, 4, 3, 5);
            let x: Vec<FqScalar> = (0..3).map(|_| FqScalar::new(rng.gen_range(0..5), 5)).collect();
            let b = m.mul_vec(&x);
            let sol = solve(&m, &b).expect("constructed system must be solvable");
            assert_eq!(m.mul_vec(&sol), b);
        }
    }
}
