//! Univariate polynomials over F_p: characteristic polynomials via
//! Hessenberg reduction and deterministic Berlekamp factorization. Degrees in
//! scope stay below ~60, so no asymptotic tricks.

use crate::ff::{FqMatrix, FqScalar};

/// Polynomial with coefficients low-to-high; the zero polynomial has an empty
/// coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<FqScalar>,
}

impl FpPoly {
    pub fn new(p: u32, mut coeffs: Vec<FqScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_i64(p: u32, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| FqScalar::new(c, p)).collect())
    }

    pub fn zero(p: u32) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::new(p, vec![FqScalar::one(p)])
    }

    pub fn x(p: u32) -> Self {
        Self::from_i64(p, &[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FqScalar {
        self.coeffs.get(i).copied().unwrap_or_else(|| FqScalar::zero(self.p))
    }

    pub fn lead(&self) -> FqScalar {
        self.coeffs.last().copied().unwrap_or_else(|| FqScalar::zero(self.p))
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv();
        FpPoly::new(self.p, self.coeffs.iter().map(|c| c.mul(&inv)).collect())
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn sub(&self, rhs: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut coeffs = vec![FqScalar::zero(self.p); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        FpPoly::new(self.p, coeffs)
    }

    pub fn divmod(&self, rhs: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = vec![FqScalar::zero(self.p); self.coeffs.len()];
        let dlead = rhs.lead().inv();
        while !rem.is_zero() && rem.degree() >= rhs.degree() {
            let shift = rem.degree() - rhs.degree();
            let c = rem.lead().mul(&dlead);
            quo[shift] = quo[shift].add(&c);
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let s = b.mul(&c);
                rem.coeffs[shift + j] = rem.coeffs[shift + j].sub(&s);
            }
            while rem.coeffs.last().is_some_and(|x| x.is_zero()) {
                rem.coeffs.pop();
            }
        }
        (FpPoly::new(self.p, quo), rem)
    }

    pub fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&FqScalar::new(i as i64, self.p)))
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    /// Evaluates the polynomial at a square matrix.
    pub fn eval_matrix(&self, m: &FqMatrix) -> FqMatrix {
        let n = m.rows();
        let p = m.modulus();
        let mut acc = FqMatrix::zero(n, n, p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            for i in 0..n {
                acc[(i, i)] = acc[(i, i)].add(c);
            }
        }
        acc
    }
}

impl std::fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.value())?,
                1 => write!(f, "{}x", c.value())?,
                _ => write!(f, "{}x^{}", c.value(), i)?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial det(xI - A) via Hessenberg reduction.
pub fn char_poly(a: &FqMatrix) -> FpPoly {
    assert!(a.is_square());
    let n = a.rows();
    let p = a.modulus();
    if n == 0 {
        return FpPoly::one(p);
    }
    let mut h = a.clone();
    // similarity reduction to upper Hessenberg form
    for c in 0..n.saturating_sub(2) {
        if let Some(pr) = (c + 1..n).find(|&i| !h[(i, c)].is_zero()) {
            if pr != c + 1 {
                for j in 0..n {
                    let tmp = h[(c + 1, j)];
                    h[(c + 1, j)] = h[(pr, j)];
                    h[(pr, j)] = tmp;
                }
                for i in 0..n {
                    let tmp = h[(i, c + 1)];
                    h[(i, c + 1)] = h[(i, pr)];
                    h[(i, pr)] = tmp;
                }
            }
            let inv = h[(c + 1, c)].inv();
            for i in c + 2..n {
                if !h[(i, c)].is_zero() {
                    let f = h[(i, c)].mul(&inv);
                    for j in 0..n {
                        let s = h[(c + 1, j)].mul(&f);
                        h[(i, j)] = h[(i, j)].sub(&s);
                    }
                    for r in 0..n {
                        let s = h[(r, i)].mul(&f);
                        h[(r, c + 1)] = h[(r, c + 1)].add(&s);
                    }
                }
            }
        }
    }
    // recurrence on leading principal Hessenberg minors
    let mut polys: Vec<FpPoly> = vec![FpPoly::one(p)];
    for k in 1..=n {
        let x_minus = FpPoly::new(p, vec![h[(k - 1, k - 1)].neg(), FqScalar::one(p)]);
        let mut q = x_minus.mul(&polys[k - 1]);
        let mut prod = FqScalar::one(p);
        for i in (0..k - 1).rev() {
            prod = prod.mul(&h[(i + 1, i)]);
            let c = prod.mul(&h[(i, k - 1)]);
            let term = polys[i].mul(&FpPoly::new(p, vec![c]));
            q = q.sub(&term);
        }
        polys.push(q);
    }
    polys.pop().unwrap()
}

/// Distinct monic irreducible factors (multiplicities dropped), via
/// squarefree reduction and deterministic Berlekamp splitting.
pub fn distinct_irreducible_factors(f: &FpPoly) -> Vec<FpPoly> {
    assert!(!f.is_zero());
    let mut work = vec![squarefree_part(f)];
    let mut out: Vec<FpPoly> = Vec::new();
    while let Some(g) = work.pop() {
        if g.degree() == 0 {
            continue;
        }
        match berlekamp_split(&g) {
            None => out.push(g.monic()),
            Some((a, b)) => {
                work.push(a);
                work.push(b);
            }
        }
    }
    out.sort_by(|a, b| {
        (a.degree(), key_of(a)).cmp(&(b.degree(), key_of(b)))
    });
    out.dedup();
    out
}

fn key_of(f: &FpPoly) -> Vec<u32> {
    f.coeffs.iter().map(|c| c.value()).collect()
}

/// Product of the distinct irreducible factors of `f`.
fn squarefree_part(f: &FpPoly) -> FpPoly {
    let p = f.p;
    let f = f.monic();
    if f.degree() == 0 {
        return f;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p); over F_p the p-th root keeps the same coefficients
        let coeffs: Vec<FqScalar> = f
            .coeffs
            .iter()
            .step_by(p as usize)
            .copied()
            .collect();
        return squarefree_part(&FpPoly::new(p, coeffs));
    }
    let g = f.gcd(&d);
    let (q, r) = f.divmod(&g);
    debug_assert!(r.is_zero());
    if g.degree() == 0 {
        q.monic()
    } else {
        // q is squarefree but may miss factors of f whose multiplicity is
        // divisible by p; recover them from g
        let rest = squarefree_part(&g);
        let shared = q.gcd(&rest);
        let (extra, r2) = rest.divmod(&shared);
        debug_assert!(r2.is_zero());
        q.mul(&extra).monic()
    }
}

/// `x^e mod f` by repeated squaring in F_p[x]/(f).
fn pow_x_mod(f: &FpPoly, e: u64) -> FpPoly {
    let p = f.p;
    let mut base = FpPoly::x(p).divmod(f).1;
    let mut acc = FpPoly::one(p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).divmod(f).1;
        }
        base = base.mul(&base).divmod(f).1;
        e >>= 1;
    }
    acc
}

/// One Berlekamp splitting step on a squarefree monic `f`: returns two
/// nontrivial coprime factors, or `None` when `f` is irreducible.
fn berlekamp_split(f: &FpPoly) -> Option<(FpPoly, FpPoly)> {
    let p = f.p;
    let n = f.degree();
    if n <= 1 {
        return None;
    }
    // Berlekamp matrix Q with columns x^{p i} mod f
    let mut q = FqMatrix::zero(n, n, p);
    let mut xp = FpPoly::one(p);
    let step = pow_x_mod(f, p as u64);
    for j in 0..n {
        for i in 0..n {
            q[(i, j)] = xp.coeff(i);
        }
        xp = xp.mul(&step).divmod(f).1;
    }
    // kernel of Q - I = fixed space of Frobenius
    for i in 0..n {
        q[(i, i)] = q[(i, i)].sub(&FqScalar::one(p));
    }
    let ker = crate::ff::kernel(&q);
    if ker.cols() <= 1 {
        return None; // only constants fixed: irreducible
    }
    // a non-constant fixed element splits f via gcds with v - c
    for c in 0..ker.cols() {
        let v = FpPoly::new(p, (0..n).map(|i| ker[(i, c)]).collect());
        if v.degree() == 0 {
            continue;
        }
        for s in 0..p {
            let shifted = v.sub(&FpPoly::from_i64(p, &[s as i64]));
            let g = f.gcd(&shifted);
            if g.degree() > 0 && g.degree() < n {
                let (h, r) = f.divmod(&g);
                debug_assert!(r.is_zero());
                return Some((g, h.monic()));
            }
        }
    }
    unreachable!("Berlekamp subalgebra of dimension > 1 must split");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_companion() {
        // companion matrix of x^2 - x - 1 over F_5
        let m = FqMatrix::from_i64(2, 2, 5, &[0, 1, 1, 1]);
        let cp = char_poly(&m);
        assert_eq!(cp, FpPoly::from_i64(5, &[-1, -1, 1]));
    }

    #[test]
    fn char_poly_diag() {
        let m = FqMatrix::from_i64(3, 3, 7, &[2, 0, 0, 0, 3, 0, 0, 0, 3]);
        let cp = char_poly(&m);
        // (x-2)(x-3)^2 = x^3 - 8x^2 + 21x - 18
        assert_eq!(cp, FpPoly::from_i64(7, &[-18, 21, -8, 1]));
    }

    #[test]
    fn cayley_hamilton_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for &p in &[2u32, 3, 5] {
            for _ in 0..10 {
                let n = rng.gen_range(1..=6);
                let data: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..p as i64)).collect();
                let m = FqMatrix::from_i64(n, n, p, &data);
                let cp = char_poly(&m);
                assert_eq!(cp.degree(), n);
                assert!(cp.eval_matrix(&m).is_zero());
            }
        }
    }

    #[test]
    fn factor_small() {
        // x^2 + 1 irreducible over F_3
        let f = FpPoly::from_i64(3, &[1, 0, 1]);
        let fs = distinct_irreducible_factors(&f);
        assert_eq!(fs, vec![f.clone()]);

        // x^2 - 1 = (x-1)(x+1) over F_5
        let g = FpPoly::from_i64(5, &[-1, 0, 1]);
        let gs = distinct_irreducible_factors(&g);
        assert_eq!(gs.len(), 2);
        let prod = gs[0].mul(&gs[1]);
        assert_eq!(prod, g.monic());
    }

    #[test]
    fn factor_with_pth_power_multiplicity() {
        // (x+1)^2 * (x^2+x+1) over F_2: distinct factors {x+1, x^2+x+1}
        let a = FpPoly::from_i64(2, &[1, 1]);
        let b = FpPoly::from_i64(2, &[1, 1, 1]);
        let f = a.mul(&a).mul(&b);
        let fs = distinct_irreducible_factors(&f);
        assert_eq!(fs, vec![a, b]);
    }

    #[test]
    fn factor_reconstructs_squarefree_part() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for &p in &[2u32, 3, 5, 7] {
            for _ in 0..15 {
                let deg = rng.gen_range(1..=8);
                let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..p as i64)).collect();
                coeffs.push(1);
                let f = FpPoly::from_i64(p, &coeffs);
                let fs = distinct_irreducible_factors(&f);
                let mut prod = FpPoly::one(p);
                for g in &fs {
                    // irreducibility spot check: no further split
                    assert!(berlekamp_split(g).is_none());
                    prod = prod.mul(g);
                }
                // prod divides f and every factor of f divides prod
                let (_, r) = f.divmod(&prod);
                assert!(r.is_zero() || prod.degree() <= f.degree());
                let (_, rf) = prod.divmod(&f.gcd(&prod));
                assert!(rf.is_zero());
            }
        }
    }
}
