//! Matrix normal forms over o = F_p[[t]]: the Hermite canonical form keying
//! right cosets K g, Smith elementary divisors with transformers, and the
//! Iwasawa decomposition g = n m k against a standard parabolic.

use super::laurent::{LaurentScalar, Prec};
use super::matrix::{LocalContext, LocalElt, reduce_mod_t};
use crate::error::{CoreError, Result};
use crate::ff::FqScalar;
use crate::finred::RootSet;

/// Canonical representative of a right coset K g: upper triangular with
/// diagonal (t^{a_1}, ..., t^{a_n}) and the entry (i, j), i < j, an exact
/// Laurent polynomial with all exponents below a_j.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetKey {
    pub n: usize,
    pub p: u32,
    pub diag: Vec<i64>,
    /// strict upper entries row-major, each a sparse exact polynomial
    pub upper: Vec<Vec<(i64, u32)>>,
}

impl CosetKey {
    pub fn to_elt(&self) -> LocalElt {
        let n = self.n;
        let mut m = LocalElt::diag_t(self.p, &self.diag);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<(i64, i64)> = self.upper[k]
                    .iter()
                    .map(|&(e, c)| (e, c as i64))
                    .collect();
                m.set_entry(i, j, LaurentScalar::from_terms(self.p, &terms));
                k += 1;
            }
        }
        LocalElt::new(n, self.p, (0..n * n).map(|t| m.entry(t / n, t % n).clone()).collect())
            .expect("canonical representative is invertible")
    }

    /// |t|-depth of the key: largest absolute diagonal exponent.
    pub fn depth(&self) -> i64 {
        self.diag.iter().map(|a| a.abs()).max().unwrap_or(0)
    }
}

impl std::fmt::Debug for CosetKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "K:diag{:?}", self.diag)?;
        if self.upper.iter().any(|u| !u.is_empty()) {
            write!(f, " upper{:?}", self.upper)?;
        }
        Ok(())
    }
}

/// Hermite canonical form of K g; also returns the transformer u in K with
/// u * g = canonical when requested.
pub fn canonical_coset(g: &LocalElt, ctx: &LocalContext) -> Result<CosetKey> {
    canonical_coset_with_transform(g, ctx).map(|(key, _)| key)
}

pub fn canonical_coset_with_transform(
    g: &LocalElt,
    ctx: &LocalContext,
) -> Result<(CosetKey, LocalElt)> {
    let n = g.n;
    let p = g.p;
    let mut a = g.clone();
    let mut u = LocalElt::identity(n, p);
    // triangularize by left K-operations: row swaps, unit row scalings,
    // integral row additions
    for col in 0..n {
        // pivot: minimal valuation among rows col..n, ties to the lowest row
        let mut pivot_row = None;
        let mut pivot_val = i64::MAX;
        for row in col..n {
            let e = a.entry(row, col);
            match e.val_lower_bound() {
                Prec::Exact => continue, // exact zero cannot be a pivot
                Prec::Finite(v) => {
                    if e.is_zero_to_prec() {
                        // unknown entry below the current candidate is fatal
                        if v < pivot_val {
                            return Err(CoreError::PrecisionExhausted(format!(
                                "pivot choice in column {col} blocked by O(t^{v}) entry"
                            )));
                        }
                    } else if v < pivot_val {
                        pivot_val = v;
                        pivot_row = Some(row);
                    }
                }
            }
        }
        let Some(pr) = pivot_row else {
            return Err(CoreError::SingularMatrix(format!(
                "no pivot available in column {col}"
            )));
        };
        if pr != col {
            swap_rows(&mut a, pr, col);
            swap_rows(&mut u, pr, col);
        }
        // scale the pivot row so the pivot becomes exactly t^{pivot_val}
        let unit_inv = a
            .entry(col, col)
            .shift(-pivot_val)
            .invert_unit(ctx.budget)?;
        scale_row(&mut a, col, &unit_inv);
        scale_row(&mut u, col, &unit_inv);
        a.set_entry(col, col, LaurentScalar::t_pow(p, pivot_val));
        // clear below
        for row in col + 1..n {
            let e = a.entry(row, col).clone();
            if e.is_zero_to_prec() {
                a.set_entry(row, col, LaurentScalar::zero(p));
                continue;
            }
            let q = e.shift(-pivot_val);
            row_sub(&mut a, row, col, &q);
            row_sub(&mut u, row, col, &q);
            a.set_entry(row, col, LaurentScalar::zero(p));
        }
    }
    // reduce above-diagonal entries modulo t^{a_j}, columns left to right so
    // later reductions cannot disturb finished columns
    let diag: Vec<i64> = (0..n)
        .map(|i| a.entry(i, i).valuation().map(|v| v.unwrap()))
        .collect::<Result<_>>()?;
    for col in 1..n {
        for row in 0..col {
            let e = a.entry(row, col).clone();
            let q = e.tail_from(diag[col]).shift(-diag[col]);
            if !q.is_zero_to_prec() {
                row_sub(&mut a, row, col, &q);
                row_sub(&mut u, row, col, &q);
            }
            let reduced = a.entry(row, col).principal_below(diag[col])?;
            a.set_entry(row, col, reduced);
        }
    }
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            upper.push(a.entry(i, j).terms());
        }
    }
    let key = CosetKey { n, p, diag, upper };
    Ok((key, u))
}

fn swap_rows(m: &mut LocalElt, i: usize, j: usize) {
    for c in 0..m.n {
        let a = m.entry(i, c).clone();
        let b = m.entry(j, c).clone();
        m.set_entry(i, c, b);
        m.set_entry(j, c, a);
    }
}

fn scale_row(m: &mut LocalElt, i: usize, by: &LaurentScalar) {
    for c in 0..m.n {
        let v = m.entry(i, c).mul(by);
        m.set_entry(i, c, v);
    }
}

/// row_i -= q * row_j
fn row_sub(m: &mut LocalElt, i: usize, j: usize, q: &LaurentScalar) {
    for c in 0..m.n {
        let v = m.entry(i, c).sub(&q.mul(m.entry(j, c)));
        m.set_entry(i, c, v);
    }
}

/// col_j -= q * col_i
fn col_sub(m: &mut LocalElt, j: usize, i: usize, q: &LaurentScalar) {
    for r in 0..m.n {
        let v = m.entry(r, j).sub(&q.mul(m.entry(r, i)));
        m.set_entry(r, j, v);
    }
}

fn swap_cols(m: &mut LocalElt, i: usize, j: usize) {
    for r in 0..m.n {
        let a = m.entry(r, i).clone();
        let b = m.entry(r, j).clone();
        m.set_entry(r, i, b);
        m.set_entry(r, j, a);
    }
}

fn scale_col(m: &mut LocalElt, j: usize, by: &LaurentScalar) {
    for r in 0..m.n {
        let v = m.entry(r, j).mul(by);
        m.set_entry(r, j, v);
    }
}

/// Canonical key of the left coset g K, via the transpose.
pub fn canonical_right_key(g: &LocalElt, ctx: &LocalContext) -> Result<CosetKey> {
    canonical_coset(&g.transpose(), ctx)
}

/// Smith decomposition g = left * diag(t^{a_1} >= ... >= t^{a_n}) * right
/// with both transformers in K.
pub struct Smith {
    pub invariants: Vec<i64>,
    pub left: LocalElt,
    pub right: LocalElt,
}

pub fn smith_invariants(g: &LocalElt, ctx: &LocalContext) -> Result<Vec<i64>> {
    smith(g, ctx).map(|s| s.invariants)
}

pub fn smith(g: &LocalElt, ctx: &LocalContext) -> Result<Smith> {
    let n = g.n;
    let p = g.p;
    let mut a = g.clone();
    // maintain g = left * a * right
    let mut left = LocalElt::identity(n, p);
    let mut right = LocalElt::identity(n, p);
    for k in 0..n {
        // global minimal-valuation pivot in the trailing submatrix
        let mut pivot = None;
        let mut pivot_val = i64::MAX;
        for i in k..n {
            for j in k..n {
                let e = a.entry(i, j);
                match e.val_lower_bound() {
                    Prec::Exact => {}
                    Prec::Finite(v) => {
                        if e.is_zero_to_prec() {
                            if v < pivot_val {
                                return Err(CoreError::PrecisionExhausted(format!(
                                    "Smith pivot blocked by O(t^{v}) at ({i},{j})"
                                )));
                            }
                        } else if v < pivot_val {
                            pivot_val = v;
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            return Err(CoreError::SingularMatrix("Smith pivot missing".into()));
        };
        if pi != k {
            swap_rows(&mut a, pi, k);
            swap_cols(&mut left, pi, k); // left := left * swap^{-1}
        }
        if pj != k {
            swap_cols(&mut a, pj, k);
            swap_rows(&mut right, pj, k);
        }
        let unit = a.entry(k, k).shift(-pivot_val);
        let unit_inv = unit.invert_unit(ctx.budget)?;
        scale_row(&mut a, k, &unit_inv);
        // left := left * diag(.., unit, ..)
        scale_col(&mut left, k, &unit);
        a.set_entry(k, k, LaurentScalar::t_pow(p, pivot_val));
        for i in k + 1..n {
            let e = a.entry(i, k).clone();
            if !e.is_zero_to_prec() {
                let q = e.shift(-pivot_val);
                row_sub(&mut a, i, k, &q);
                // left := left * (row-op)^{-1}: col_k += q * col_i
                col_add(&mut left, k, i, &q);
            }
            a.set_entry(i, k, LaurentScalar::zero(p));
        }
        for j in k + 1..n {
            let e = a.entry(k, j).clone();
            if !e.is_zero_to_prec() {
                let q = e.shift(-pivot_val);
                col_sub(&mut a, j, k, &q);
                row_add(&mut right, k, j, &q);
            }
            a.set_entry(k, j, LaurentScalar::zero(p));
        }
    }
    let mut invariants: Vec<i64> = (0..n)
        .map(|i| a.entry(i, i).valuation().map(|v| v.unwrap()))
        .collect::<Result<_>>()?;
    // sort nonincreasing by conjugating with a permutation
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| -invariants[i]);
    let perm = permutation_elt(n, p, &order);
    // D_sorted = P^{-1} D P with P the permutation sending slot i to order[i]
    invariants.sort_by_key(|&v| -v);
    let left = left.mul(&perm);
    let right = perm.inverse(&LocalContext::new(p, n, 4))?.mul(&right);
    debug_assert_eq!(invariants.iter().sum::<i64>(), g.det_val);
    Ok(Smith { invariants, left, right })
}

/// col_k += q * col_i
fn col_add(m: &mut LocalElt, k: usize, i: usize, q: &LaurentScalar) {
    for r in 0..m.n {
        let v = m.entry(r, k).add(&q.mul(m.entry(r, i)));
        m.set_entry(r, k, v);
    }
}

/// row_k += q * row_j  (inverse bookkeeping for a column operation)
fn row_add(m: &mut LocalElt, k: usize, j: usize, q: &LaurentScalar) {
    for c in 0..m.n {
        let v = m.entry(k, c).add(&q.mul(m.entry(j, c)));
        m.set_entry(k, c, v);
    }
}

fn permutation_elt(n: usize, p: u32, order: &[usize]) -> LocalElt {
    let mut m = LocalElt::identity(n, p);
    for i in 0..n {
        for j in 0..n {
            m.set_entry(
                i,
                j,
                if order[j] == i {
                    LaurentScalar::one(p)
                } else {
                    LaurentScalar::zero(p)
                },
            );
        }
    }
    LocalElt::new(n, p, (0..n * n).map(|t| m.entry(t / n, t % n).clone()).collect())
        .expect("permutation matrix")
}

/// Iwasawa decomposition g = n * m * k with n block-upper unipotent for J,
/// m block diagonal, k in K. Deterministic in g.
pub fn iwasawa(g: &LocalElt, j: RootSet, ctx: &LocalContext) -> Result<(LocalElt, LocalElt, LocalElt)> {
    let n = g.n;
    let p = g.p;
    let mut a = g.clone();
    // accumulate kacc with g * kacc = a, by column operations in K
    let mut kacc = LocalElt::identity(n, p);
    for row in (1..n).rev() {
        // pivot among columns 0..=row in this row, ties to the highest column
        let mut pivot_col = None;
        let mut pivot_val = i64::MAX;
        for col in (0..=row).rev() {
            let e = a.entry(row, col);
            match e.val_lower_bound() {
                Prec::Exact => {}
                Prec::Finite(v) => {
                    if e.is_zero_to_prec() {
                        if v < pivot_val {
                            return Err(CoreError::PrecisionExhausted(format!(
                                "Iwasawa pivot blocked by O(t^{v}) in row {row}"
                            )));
                        }
                    } else if v < pivot_val {
                        pivot_val = v;
                        pivot_col = Some(col);
                    }
                }
            }
        }
        let Some(pc) = pivot_col else {
            return Err(CoreError::SingularMatrix(format!("zero row {row}")));
        };
        if pc != row {
            swap_cols(&mut a, pc, row);
            swap_cols(&mut kacc, pc, row);
        }
        let unit_inv = a.entry(row, row).shift(-pivot_val).invert_unit(ctx.budget)?;
        scale_col(&mut a, row, &unit_inv);
        scale_col(&mut kacc, row, &unit_inv);
        a.set_entry(row, row, LaurentScalar::t_pow(p, pivot_val));
        for col in 0..row {
            let e = a.entry(row, col).clone();
            if e.is_zero_to_prec() {
                a.set_entry(row, col, LaurentScalar::zero(p));
                continue;
            }
            let q = e.shift(-pivot_val);
            col_sub(&mut a, col, row, &q);
            col_sub(&mut kacc, col, row, &q);
            a.set_entry(row, col, LaurentScalar::zero(p));
        }
    }
    // a is upper triangular; split a = n * m along the block structure
    let blocks = j.blocks();
    let mut m = LocalElt::identity(n, p);
    for &(s, l) in &blocks {
        for i in s..s + l {
            for c in s..s + l {
                m.set_entry(i, c, a.entry(i, c).clone());
            }
        }
    }
    let m = LocalElt::new(n, p, (0..n * n).map(|t| m.entry(t / n, t % n).clone()).collect())?;
    let minv = m.inverse(ctx)?;
    let nn = a.mul(&minv);
    let k = kacc.inverse(ctx)?;
    Ok((nn, m, k))
}

/// Iwahori factorization of an element of the parahoric: k = n0 * m0 * nbar
/// with n0 in N(F) cap K, m0 in M(F) cap K and nbar in Nbar(F) cap K_+.
/// Requires the mod-t reduction to lie in P_J(k).
pub fn iwahori_factor(
    k: &LocalElt,
    j: RootSet,
    ctx: &LocalContext,
) -> Result<(LocalElt, LocalElt, LocalElt)> {
    let n = k.n;
    let p = k.p;
    let kbar = reduce_mod_t(k)?;
    for i in 0..n {
        for c in 0..n {
            if j.block_of(i) > j.block_of(c) && !kbar[(i, c)].is_zero() {
                return Err(CoreError::NotInRegion {
                    region: format!("parahoric {:?}", j),
                    detail: format!("entry ({i},{c}) nonzero mod t"),
                });
            }
        }
    }
    let blocks = j.blocks();
    factor_blocks(k, &blocks, ctx)
}

fn factor_blocks(
    k: &LocalElt,
    blocks: &[(usize, usize)],
    ctx: &LocalContext,
) -> Result<(LocalElt, LocalElt, LocalElt)> {
    let n = k.n;
    let p = k.p;
    if blocks.len() == 1 {
        return Ok((LocalElt::identity(n, p), k.clone(), LocalElt::identity(n, p)));
    }
    let (s0, l0) = blocks[0];
    debug_assert_eq!(s0, 0);
    let first: Vec<usize> = (0..l0).collect();
    let rest: Vec<usize> = (l0..n).collect();
    // coarse split [A B; C D] with C = 0 mod t and D invertible over o:
    // k = [[I, BD^{-1}],[0, I]] * [[A - BD^{-1}C, 0],[0, D]] * [[I,0],[D^{-1}C, I]]
    let d_sub = submatrix(k, &rest, &rest);
    let d_elt = LocalElt::new(rest.len(), p, d_sub.data.clone())?;
    let d_inv = d_elt.inverse(ctx)?;
    let d_inv_r = elt_to_rect(&d_inv);
    let b_sub = submatrix(k, &first, &rest);
    let c_sub = submatrix(k, &rest, &first);
    let e_sub = rect_mul(&d_inv_r, &c_sub);
    let n_sub = rect_mul(&b_sub, &d_inv_r);
    let m1 = rect_sub(&submatrix(k, &first, &first), &rect_mul(&n_sub, &c_sub));

    // recurse on D with the remaining blocks shifted to start at 0
    let sub_blocks: Vec<(usize, usize)> = blocks[1..]
        .iter()
        .map(|&(s, l)| (s - l0, l))
        .collect();
    let (u2, m2, l2) = factor_blocks(&d_elt, &sub_blocks, ctx)?;

    let mut n0 = LocalElt::identity(n, p);
    for (bi, i) in first.iter().enumerate() {
        for (bj, jj) in rest.iter().enumerate() {
            n0.set_entry(*i, *jj, n_sub.data[bi * rest.len() + bj].clone());
        }
    }
    let n0 = n0.mul(&embed_lower_right(n, p, &u2, l0));

    let mut m0 = LocalElt::identity(n, p);
    for (bi, i) in first.iter().enumerate() {
        for (bj, jj) in first.iter().enumerate() {
            m0.set_entry(*i, *jj, m1.data[bi * first.len() + bj].clone());
        }
    }
    for (bi, i) in rest.iter().enumerate() {
        for (bj, jj) in rest.iter().enumerate() {
            m0.set_entry(*i, *jj, m2.entry(bi, bj).clone());
        }
    }
    let m0 = LocalElt::new(n, p, (0..n * n).map(|t| m0.entry(t / n, t % n).clone()).collect())?;

    let mut nb = LocalElt::identity(n, p);
    for (bi, i) in rest.iter().enumerate() {
        for (bj, jj) in first.iter().enumerate() {
            nb.set_entry(*i, *jj, e_sub.data[bi * first.len() + bj].clone());
        }
    }
    let nbar = embed_lower_right(n, p, &l2, l0).mul(&nb);
    Ok((n0, m0, nbar))
}

fn embed_lower_right(n: usize, p: u32, small: &LocalElt, offset: usize) -> LocalElt {
    let mut out = LocalElt::identity(n, p);
    for i in 0..small.n {
        for j in 0..small.n {
            out.set_entry(offset + i, offset + j, small.entry(i, j).clone());
        }
    }
    out
}

/// Rectangular block of Laurent scalars.
struct Rect {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<LaurentScalar>,
}

fn rect_mul(a: &Rect, b: &Rect) -> Rect {
    assert_eq!(a.cols, b.rows);
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = LaurentScalar::zero(a.p);
            for k in 0..a.cols {
                acc = acc.add(&a.data[i * a.cols + k].mul(&b.data[k * b.cols + j]));
            }
            data.push(acc);
        }
    }
    Rect { rows: a.rows, cols: b.cols, p: a.p, data }
}

fn rect_sub(a: &Rect, b: &Rect) -> Rect {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Rect {
        rows: a.rows,
        cols: a.cols,
        p: a.p,
        data: a.data.iter().zip(&b.data).map(|(x, y)| x.sub(y)).collect(),
    }
}

fn elt_to_rect(m: &LocalElt) -> Rect {
    Rect {
        rows: m.n,
        cols: m.n,
        p: m.p,
        data: (0..m.n * m.n)
            .map(|t| m.entry(t / m.n, t % m.n).clone())
            .collect(),
    }
}

fn submatrix(m: &LocalElt, rows: &[usize], cols: &[usize]) -> Rect {
    Rect {
        rows: rows.len(),
        cols: cols.len(),
        p: m.p,
        data: rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| m.entry(r, c).clone()))
            .collect(),
    }
}
