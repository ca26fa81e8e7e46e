//! Truncated Laurent series over F_p.

use crate::error::{CoreError, Result};
use crate::ff::FqScalar;

/// Precision marker: the value is known modulo t^k, or exactly.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Prec {
    Finite(i64),
    Exact,
}

impl Prec {
    pub fn min(self, other: Prec) -> Prec {
        match (self, other) {
            (Prec::Exact, x) => x,
            (x, Prec::Exact) => x,
            (Prec::Finite(a), Prec::Finite(b)) => Prec::Finite(a.min(b)),
        }
    }

    pub fn shift(self, k: i64) -> Prec {
        match self {
            Prec::Exact => Prec::Exact,
            Prec::Finite(a) => Prec::Finite(a + k),
        }
    }

    pub fn at_least(self, k: i64) -> bool {
        match self {
            Prec::Exact => true,
            Prec::Finite(a) => a >= k,
        }
    }
}

/// A Laurent series over F_p known modulo t^prec: coefficients for exponents
/// `lead .. lead+coeffs.len()` are stored (leading one nonzero), every other
/// exponent below the precision is zero, and nothing is known at or above the
/// precision. An empty coefficient vector means zero to the stated precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    p: u32,
    lead: i64,
    coeffs: Vec<u32>,
    prec: Prec,
}

impl LaurentScalar {
    pub fn new(p: u32, lead: i64, coeffs: Vec<u32>, prec: Prec) -> Self {
        let mut lead = lead;
        let mut coeffs: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
        // strip leading zeros
        while coeffs.first() == Some(&0) {
            coeffs.remove(0);
            lead += 1;
        }
        // drop coefficients at or above the precision
        if let Prec::Finite(m) = prec {
            while lead + coeffs.len() as i64 > m {
                coeffs.pop();
            }
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            lead = 0;
        }
        LaurentScalar { p, lead, coeffs, prec }
    }

    pub fn zero(p: u32) -> Self {
        Self::new(p, 0, Vec::new(), Prec::Exact)
    }

    pub fn zero_mod(p: u32, prec: i64) -> Self {
        Self::new(p, 0, Vec::new(), Prec::Finite(prec))
    }

    pub fn one(p: u32) -> Self {
        Self::new(p, 0, vec![1], Prec::Exact)
    }

    pub fn t_pow(p: u32, k: i64) -> Self {
        Self::new(p, k, vec![1], Prec::Exact)
    }

    pub fn constant(c: FqScalar) -> Self {
        Self::new(c.modulus(), 0, vec![c.value()], Prec::Exact)
    }

    /// Exact Laurent polynomial from (exponent, coefficient) terms.
    pub fn from_terms(p: u32, terms: &[(i64, i64)]) -> Self {
        if terms.is_empty() {
            return Self::zero(p);
        }
        let lo = terms.iter().map(|&(e, _)| e).min().unwrap();
        let hi = terms.iter().map(|&(e, _)| e).max().unwrap();
        let mut coeffs = vec![0i64; (hi - lo + 1) as usize];
        for &(e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        let m = p as i64;
        Self::new(
            p,
            lo,
            coeffs.iter().map(|&c| ((c % m + m) % m) as u32).collect(),
            Prec::Exact,
        )
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Prec::Exact
    }

    /// Zero to the available precision.
    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Certified exact zero.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }

    /// Coefficient at an exponent; errors when the exponent is at or beyond
    /// the precision.
    pub fn coeff(&self, e: i64) -> Result<FqScalar> {
        if !self.prec.at_least(e + 1) {
            return Err(CoreError::PrecisionExhausted(format!(
                "coefficient at t^{e} of a value known only modulo t^{:?}",
                self.prec
            )));
        }
        let idx = e - self.lead;
        let v = if idx < 0 || idx >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[idx as usize]
        };
        Ok(FqScalar::new(v as i64, self.p))
    }

    /// Valuation: `None` stands for +infinity (exact zero); errors when the
    /// value is zero to precision but not certified zero.
    pub fn valuation(&self) -> Result<Option<i64>> {
        if self.coeffs.is_empty() {
            return if self.is_exact() {
                Ok(None)
            } else {
                Err(CoreError::PrecisionExhausted(format!(
                    "valuation of O(t^{:?})",
                    self.prec
                )))
            };
        }
        Ok(Some(self.lead))
    }

    /// Lower bound for the valuation that is always available: the leading
    /// exponent, or the precision for a zero-to-precision value.
    pub fn val_lower_bound(&self) -> Prec {
        if self.coeffs.is_empty() {
            if self.is_exact() { Prec::Exact } else { self.prec }
        } else {
            Prec::Finite(self.lead)
        }
    }

    pub fn truncate(&self, prec: Prec) -> LaurentScalar {
        LaurentScalar::new(self.p, self.lead, self.coeffs.clone(), self.prec.min(prec))
    }

    pub fn neg(&self) -> LaurentScalar {
        LaurentScalar::new(
            self.p,
            self.lead,
            self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
            self.prec,
        )
    }

    pub fn add(&self, rhs: &LaurentScalar) -> LaurentScalar {
        debug_assert_eq!(self.p, rhs.p);
        let prec = self.prec.min(rhs.prec);
        if self.coeffs.is_empty() && rhs.coeffs.is_empty() {
            return LaurentScalar::new(self.p, 0, Vec::new(), prec);
        }
        let lo = match (self.coeffs.is_empty(), rhs.coeffs.is_empty()) {
            (true, false) => rhs.lead,
            (false, true) => self.lead,
            _ => self.lead.min(rhs.lead),
        };
        let hi_a = self.lead + self.coeffs.len() as i64;
        let hi_b = rhs.lead + rhs.coeffs.len() as i64;
        let hi = hi_a.max(hi_b);
        let mut coeffs = vec![0u32; (hi - lo) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lead - lo) as usize + i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.lead - lo) as usize + i] += c;
        }
        LaurentScalar::new(self.p, lo, coeffs, prec)
    }

    pub fn sub(&self, rhs: &LaurentScalar) -> LaurentScalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentScalar) -> LaurentScalar {
        debug_assert_eq!(self.p, rhs.p);
        // precision of the product: each factor's unknown tail enters scaled
        // by the other's valuation lower bound
        let prec = match (self.val_lower_bound(), rhs.val_lower_bound()) {
            (Prec::Exact, _) | (_, Prec::Exact)
                if self.is_exact_zero() || rhs.is_exact_zero() =>
            {
                Prec::Exact
            }
            (va, vb) => {
                let pa = match (va, rhs.prec) {
                    (_, Prec::Exact) => Prec::Exact,
                    (Prec::Exact, _) => Prec::Exact, // zero exact operand handled above
                    (Prec::Finite(v), Prec::Finite(q)) => Prec::Finite(v + q),
                };
                let pb = match (vb, self.prec) {
                    (_, Prec::Exact) => Prec::Exact,
                    (Prec::Exact, _) => Prec::Exact,
                    (Prec::Finite(v), Prec::Finite(q)) => Prec::Finite(v + q),
                };
                pa.min(pb)
            }
        };
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return LaurentScalar::new(self.p, 0, Vec::new(), prec);
        }
        let lo = self.lead + rhs.lead;
        let mut coeffs = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += (a as u64) * (b as u64);
            }
        }
        LaurentScalar::new(
            self.p,
            lo,
            coeffs.iter().map(|&c| (c % self.p as u64) as u32).collect(),
            prec,
        )
    }

    pub fn scale(&self, c: FqScalar) -> LaurentScalar {
        self.mul(&LaurentScalar::constant(c))
    }

    pub fn shift(&self, k: i64) -> LaurentScalar {
        LaurentScalar::new(self.p, self.lead + k, self.coeffs.clone(), self.prec.shift(k))
    }

    /// Inverse of a unit-times-t^v, exact to `target_prec`. Errors when the
    /// valuation is undecidable or the operand precision cannot support the
    /// target.
    pub fn invert_unit(&self, target_prec: i64) -> Result<LaurentScalar> {
        let v = self.valuation()?.ok_or_else(|| {
            CoreError::NonUnit("inverse of exact zero".into())
        })?;
        // u = self * t^{-v} has valuation 0; its inverse is known to the same
        // precision as u
        let u_prec = self.prec.shift(-v);
        let needed = target_prec + v; // precision of the inverse before the final shift
        if !u_prec.at_least(needed) {
            return Err(CoreError::PrecisionExhausted(format!(
                "invert_unit: need the unit part modulo t^{needed}, have {:?}",
                u_prec
            )));
        }
        if self.coeffs.len() == 1 {
            // monomial: exact inverse
            let c = FqScalar::new(self.coeffs[0] as i64, self.p).inv();
            return Ok(LaurentScalar::new(self.p, -v, vec![c.value()], Prec::Exact));
        }
        let m = needed.max(1) as usize;
        let u0 = FqScalar::new(self.coeffs[0] as i64, self.p);
        let u0i = u0.inv();
        let mut inv = vec![0u32; m];
        inv[0] = u0i.value();
        for k in 1..m {
            let mut acc = 0u64;
            for i in 1..=k {
                let ui = if i < self.coeffs.len() { self.coeffs[i] } else { 0 };
                acc += (ui as u64) * (inv[k - i] as u64);
            }
            let s = FqScalar::new((acc % self.p as u64) as i64, self.p);
            inv[k] = s.neg().mul(&u0i).value();
        }
        Ok(LaurentScalar::new(
            self.p,
            -v,
            inv,
            Prec::Finite(target_prec),
        ))
    }

    /// The part with exponents below `cut`, as an exact polynomial. Errors
    /// when those coefficients are not all known.
    pub fn principal_below(&self, cut: i64) -> Result<LaurentScalar> {
        if !self.prec.at_least(cut) {
            return Err(CoreError::PrecisionExhausted(format!(
                "residue below t^{cut} of a value known modulo t^{:?}",
                self.prec
            )));
        }
        let coeffs: Vec<u32> = self
            .coeffs
            .iter()
            .enumerate()
            .take_while(|(i, _)| self.lead + (*i as i64) < cut)
            .map(|(_, &c)| c)
            .collect();
        Ok(LaurentScalar::new(self.p, self.lead, coeffs, Prec::Exact))
    }

    /// The part with exponents >= `cut` (known ones), keeping precision.
    pub fn tail_from(&self, cut: i64) -> LaurentScalar {
        let mut coeffs = self.coeffs.clone();
        let mut lead = self.lead;
        while lead < cut && !coeffs.is_empty() {
            coeffs.remove(0);
            lead += 1;
        }
        LaurentScalar::new(self.p, lead, coeffs, self.prec)
    }

    /// Exact equality of two values certified to agree: both must be exact or
    /// agree on all known coefficients with matching precision.
    pub fn eq_to_common_prec(&self, rhs: &LaurentScalar) -> bool {
        let prec = self.prec.min(rhs.prec);
        let a = self.truncate(prec);
        let b = rhs.truncate(prec);
        a.lead == b.lead && a.coeffs == b.coeffs
    }

    /// Terms as (exponent, coefficient) pairs.
    pub fn terms(&self) -> Vec<(i64, u32)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.lead + i as i64, c))
            .collect()
    }
}

impl std::fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (e, c) in self.terms() {
                if !first {
                    write!(f, "+")?;
                }
                first = false;
                match e {
                    0 => write!(f, "{c}")?,
                    1 if c == 1 => write!(f, "t")?,
                    1 => write!(f, "{c}t")?,
                    _ if c == 1 => write!(f, "t^{e}")?,
                    _ => write!(f, "{c}t^{e}")?,
                }
            }
        }
        if let Prec::Finite(m) = self.prec {
            write!(f, "+O(t^{m})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_product() {
        let a = LaurentScalar::from_terms(5, &[(0, 1), (1, 1)]); // 1 + t
        let b = LaurentScalar::from_terms(5, &[(0, 1), (1, -1)]); // 1 - t
        let c = a.mul(&b);
        assert_eq!(c, LaurentScalar::from_terms(5, &[(0, 1), (2, -1)]));
        assert!(c.is_exact());
    }

    #[test]
    fn geometric_series_inverse() {
        // (1 - t)^{-1} = 1 + t + t^2 + t^3 + O(t^4)
        let a = LaurentScalar::from_terms(3, &[(0, 1), (1, -1)]);
        let inv = a.invert_unit(4).unwrap();
        assert_eq!(inv.prec(), Prec::Finite(4));
        for e in 0..4 {
            assert_eq!(inv.coeff(e).unwrap().value(), 1, "coefficient at t^{e}");
        }
        // certificate: a * inv = 1 + O(t^4)
        let prod = a.mul(&inv);
        assert!(prod.sub(&LaurentScalar::one(3)).is_zero_to_prec());
        assert_eq!(prod.prec(), Prec::Finite(4));
    }

    #[test]
    fn valuation_examples() {
        let a = LaurentScalar::from_terms(5, &[(-2, 1), (0, 1)]);
        assert_eq!(a.valuation().unwrap(), Some(-2));
        assert_eq!(LaurentScalar::zero(5).valuation().unwrap(), None);
        assert!(LaurentScalar::zero_mod(5, 3).valuation().is_err());
    }

    #[test]
    fn monomial_inverse_is_exact() {
        let a = LaurentScalar::from_terms(7, &[(3, 2)]);
        let inv = a.invert_unit(10).unwrap();
        assert!(inv.is_exact());
        assert!(a.mul(&inv).eq_to_common_prec(&LaurentScalar::one(7)));
    }

    #[test]
    fn precision_propagation() {
        let approx = LaurentScalar::new(3, 0, vec![1, 2], Prec::Finite(2)); // 1 + 2t + O(t^2)
        let exact = LaurentScalar::from_terms(3, &[(1, 1)]); // t
        let prod = approx.mul(&exact);
        assert_eq!(prod.prec(), Prec::Finite(3));
        let sum = approx.add(&exact);
        assert_eq!(sum.prec(), Prec::Finite(2));
        // coefficient beyond precision errors
        assert!(sum.coeff(2).is_err());
        assert!(sum.coeff(1).is_ok());
    }

    #[test]
    fn principal_and_tail() {
        let a = LaurentScalar::from_terms(5, &[(-2, 3), (-1, 1), (0, 2), (3, 4)]);
        let pp = a.principal_below(0).unwrap();
        assert_eq!(pp.terms(), vec![(-2, 3), (-1, 1)]);
        let tail = a.tail_from(0);
        assert_eq!(tail.terms(), vec![(0, 2), (3, 4)]);
        assert!(pp.add(&tail).eq_to_common_prec(&a));
    }

    #[test]
    fn zero_handling_in_products() {
        let z = LaurentScalar::zero(3);
        let approx = LaurentScalar::new(3, 0, vec![1], Prec::Finite(1));
        assert!(z.mul(&approx).is_exact_zero());
        let zm = LaurentScalar::zero_mod(3, 2); // O(t^2)
        let t3 = LaurentScalar::t_pow(3, 3);
        let prod = zm.mul(&t3); // O(t^5)
        assert!(prod.is_zero_to_prec());
        assert_eq!(prod.prec(), Prec::Finite(5));
    }
}
