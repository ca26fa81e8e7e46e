//! Invertible matrices over F_p((t)) with cached determinant valuation.

use super::laurent::{LaurentScalar, Prec};
use crate::error::{CoreError, Result};
use crate::ff::{FqMatrix, FqScalar};

/// Per-computation working precision for operations that must truncate
/// (unit inversions inside normal forms). Derived once from the support
/// depth of the computation; a too-small budget errors, never lies.
#[derive(Clone, Copy, Debug)]
pub struct LocalContext {
    pub p: u32,
    pub n: usize,
    pub budget: i64,
}

impl LocalContext {
    pub fn new(p: u32, n: usize, budget: i64) -> Self {
        LocalContext { p, n, budget }
    }

    /// Generous budget for computations whose supports live within the given
    /// depth (largest |t-exponent| expected anywhere).
    pub fn for_depth(p: u32, n: usize, depth: i64) -> Self {
        LocalContext { p, n, budget: 24 + 8 * depth.abs() }
    }
}

/// An invertible n x n matrix over F_p((t)). The determinant valuation is
/// exact by construction; matrix entries may carry finite precision.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalElt {
    pub n: usize,
    pub p: u32,
    entries: Vec<LaurentScalar>,
    pub det_val: i64,
}

impl LocalElt {
    /// Builds from entries, computing and validating the determinant
    /// valuation. Errors when the determinant is zero or undecidable.
    pub fn new(n: usize, p: u32, entries: Vec<LaurentScalar>) -> Result<Self> {
        assert_eq!(entries.len(), n * n);
        let det = det_laurent(n, p, &entries);
        let v = det.valuation()?.ok_or_else(|| {
            CoreError::SingularMatrix("local matrix with exactly zero determinant".into())
        })?;
        Ok(LocalElt { n, p, entries, det_val: v })
    }

    /// Internal constructor when the determinant valuation is already known
    /// (products, inverses); debug-validated.
    fn with_det_val(n: usize, p: u32, entries: Vec<LaurentScalar>, det_val: i64) -> Self {
        #[cfg(debug_assertions)]
        {
            let det = det_laurent(n, p, &entries);
            if let Ok(Some(v)) = det.valuation() {
                debug_assert_eq!(v, det_val, "cached determinant valuation is wrong");
            }
        }
        LocalElt { n, p, entries, det_val }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut entries = vec![LaurentScalar::zero(p); n * n];
        for i in 0..n {
            entries[i * n + i] = LaurentScalar::one(p);
        }
        LocalElt { n, p, entries, det_val: 0 }
    }

    /// diag(t^{b_1}, ..., t^{b_n}).
    pub fn diag_t(p: u32, exps: &[i64]) -> Self {
        let n = exps.len();
        let mut entries = vec![LaurentScalar::zero(p); n * n];
        for (i, &b) in exps.iter().enumerate() {
            entries[i * n + i] = LaurentScalar::t_pow(p, b);
        }
        LocalElt { n, p, entries, det_val: exps.iter().sum() }
    }

    /// Constant lift of a matrix over F_p; must be invertible.
    pub fn from_fq(m: &FqMatrix) -> Self {
        assert!(m.is_square());
        let n = m.rows();
        let p = m.modulus();
        let entries = (0..n * n)
            .map(|k| LaurentScalar::constant(m[(k / n, k % n)]))
            .collect();
        LocalElt::new(n, p, entries).expect("constant lift of an invertible matrix")
    }

    /// Identity plus a single entry at (i, j).
    pub fn elementary(n: usize, p: u32, i: usize, j: usize, value: LaurentScalar) -> Self {
        assert_ne!(i, j);
        let mut e = Self::identity(n, p);
        e.entries[i * n + j] = value;
        LocalElt { det_val: 0, ..e }
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: LaurentScalar) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &LocalElt) -> LocalElt {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentScalar::zero(self.p);
                for k in 0..n {
                    acc = acc.add(&self.entry(i, k).mul(rhs.entry(k, j)));
                }
                entries.push(acc);
            }
        }
        LocalElt::with_det_val(n, self.p, entries, self.det_val + rhs.det_val)
    }

    /// Inverse via the adjugate, with the determinant inverted to the
    /// context budget.
    pub fn inverse(&self, ctx: &LocalContext) -> Result<LocalElt> {
        let n = self.n;
        let det = det_laurent(n, self.p, &self.entries);
        let det_inv = det.invert_unit(ctx.budget)?;
        let mut entries = vec![LaurentScalar::zero(self.p); n * n];
        for i in 0..n {
            for j in 0..n {
                // adjugate entry (i, j) = (-1)^{i+j} * minor(j, i)
                let minor = minor_det(self, j, i);
                let signed = if (i + j) % 2 == 0 { minor } else { minor.neg() };
                entries[i * n + j] = signed.mul(&det_inv);
            }
        }
        Ok(LocalElt::with_det_val(n, self.p, entries, -self.det_val))
    }

    pub fn transpose(&self) -> LocalElt {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entry(j, i).clone());
            }
        }
        LocalElt { n, p: self.p, entries, det_val: self.det_val }
    }

    pub fn truncate(&self, prec: Prec) -> LocalElt {
        LocalElt {
            n: self.n,
            p: self.p,
            entries: self.entries.iter().map(|e| e.truncate(prec)).collect(),
            det_val: self.det_val,
        }
    }

    pub fn is_identity_to_prec(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.sub(&LaurentScalar::one(self.p)).is_zero_to_prec()
                } else {
                    e.is_zero_to_prec()
                }
            })
        })
    }

    /// Entrywise agreement up to the common precision.
    pub fn eq_to_common_prec(&self, rhs: &LocalElt) -> bool {
        self.n == rhs.n
            && (0..self.n * self.n)
                .all(|k| self.entries[k].eq_to_common_prec(&rhs.entries[k]))
    }

    /// All entries exact.
    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact())
    }
}

impl std::fmt::Debug for LocalElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Determinant by cofactor expansion; fine for n <= 4.
fn det_laurent(n: usize, p: u32, entries: &[LaurentScalar]) -> LaurentScalar {
    fn go(n: usize, p: u32, rows: &[usize], cols: &[usize], entries: &[LaurentScalar], dim: usize) -> LaurentScalar {
        if rows.len() == 1 {
            return entries[rows[0] * dim + cols[0]].clone();
        }
        let mut acc = LaurentScalar::zero(p);
        let r = rows[0];
        let rest: Vec<usize> = rows[1..].to_vec();
        for (k, &c) in cols.iter().enumerate() {
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = go(n, p, &rest, &sub_cols, entries, dim);
            let term = entries[r * dim + c].mul(&minor);
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    go(n, p, &idx, &idx, entries, n)
}

fn minor_det(m: &LocalElt, skip_row: usize, skip_col: usize) -> LaurentScalar {
    let n = m.n;
    if n == 1 {
        return LaurentScalar::one(m.p);
    }
    let rows: Vec<usize> = (0..n).filter(|&r| r != skip_row).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| c != skip_col).collect();
    let sub: Vec<LaurentScalar> = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| m.entry(r, c).clone()))
        .collect();
    det_laurent(n - 1, m.p, &sub)
}

/// Reduction modulo t of an element of K = GL(n, o): the matrix of constant
/// coefficients, which is invertible over F_p.
pub fn reduce_mod_t(k: &LocalElt) -> Result<FqMatrix> {
    if k.det_val != 0 {
        return Err(CoreError::NotInRegion {
            region: "K".into(),
            detail: format!("determinant valuation {}", k.det_val),
        });
    }
    let n = k.n;
    let mut out = FqMatrix::zero(n, n, k.p);
    for i in 0..n {
        for j in 0..n {
            let e = k.entry(i, j);
            match e.val_lower_bound() {
                Prec::Finite(v) if v < 0 => {
                    if !e.is_zero_to_prec() {
                        return Err(CoreError::NotInRegion {
                            region: "K".into(),
                            detail: format!("entry ({i},{j}) has valuation {v}"),
                        });
                    }
                    return Err(CoreError::PrecisionExhausted(format!(
                        "entry ({i},{j}) only known modulo t^{v}"
                    )));
                }
                _ => {}
            }
            out[(i, j)] = e.coeff(0)?;
        }
    }
    if crate::ff::det(&out).is_zero() {
        return Err(CoreError::NotInRegion {
            region: "K".into(),
            detail: "constant term is singular".into(),
        });
    }
    Ok(out)
}

/// Builds an upper (or lower) block-unipotent matrix with prescribed entries
/// at the given positions.
pub fn unipotent_from_entries(
    n: usize,
    p: u32,
    entries: &[((usize, usize), LaurentScalar)],
) -> LocalElt {
    let mut m = LocalElt::identity(n, p);
    for ((i, j), v) in entries {
        assert_ne!(i, j);
        m.set_entry(*i, *j, v.clone());
    }
    LocalElt { det_val: 0, ..m }
}

pub fn fqscalar_vec_to_consts(_p: u32, v: &[FqScalar]) -> Vec<LaurentScalar> {
    v.iter().map(|c| LaurentScalar::constant(*c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_inverse_round_trip() {
        let p = 3;
        let ctx = LocalContext::for_depth(p, 2, 2);
        let a = LocalElt::new(
            2,
            p,
            vec![
                LaurentScalar::from_terms(p, &[(0, 1), (1, 1)]),
                LaurentScalar::from_terms(p, &[(-1, 1)]),
                LaurentScalar::zero(p),
                LaurentScalar::from_terms(p, &[(0, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(a.det_val, 0);
        let inv = a.inverse(&ctx).unwrap();
        assert!(a.mul(&inv).is_identity_to_prec());
        assert!(inv.mul(&a).is_identity_to_prec());
        assert_eq!(inv.det_val, 0);
    }

    #[test]
    fn det_val_of_diag() {
        let d = LocalElt::diag_t(5, &[2, -1]);
        assert_eq!(d.det_val, 1);
        let prod = d.mul(&LocalElt::diag_t(5, &[0, 3]));
        assert_eq!(prod.det_val, 4);
    }

    #[test]
    fn reduce_mod_t_examples() {
        let p = 2;
        assert!(reduce_mod_t(&LocalElt::identity(2, p))
            .unwrap()
            .is_identity());

        // 1 + t*m reduces to the identity
        let kplus = LocalElt::new(
            2,
            p,
            vec![
                LaurentScalar::from_terms(p, &[(0, 1), (1, 1)]),
                LaurentScalar::from_terms(p, &[(1, 1)]),
                LaurentScalar::from_terms(p, &[(1, 1)]),
                LaurentScalar::from_terms(p, &[(0, 1), (2, 1)]),
            ],
        )
        .unwrap();
        assert!(reduce_mod_t(&kplus).unwrap().is_identity());

        // [[1+t, 1],[t, 1]] reduces to [[1,1],[0,1]]
        let k = LocalElt::new(
            2,
            p,
            vec![
                LaurentScalar::from_terms(p, &[(0, 1), (1, 1)]),
                LaurentScalar::one(p),
                LaurentScalar::t_pow(p, 1),
                LaurentScalar::one(p),
            ],
        )
        .unwrap();
        assert_eq!(
            reduce_mod_t(&k).unwrap(),
            FqMatrix::from_i64(2, 2, 2, &[1, 1, 0, 1])
        );

        // not in K: negative valuation entry
        let bad = LocalElt::diag_t(2, &[-1, 1]);
        assert!(reduce_mod_t(&bad).is_err());
    }

    #[test]
    fn singular_rejected() {
        let p = 3;
        let zero = LaurentScalar::zero(p);
        let one = LaurentScalar::one(p);
        assert!(LocalElt::new(2, p, vec![one.clone(), one.clone(), one.clone(), one]).is_err());
        let _ = zero;
    }
}
