//! Truncated Laurent expansions in 1/θ: approximate elements of K_∞ with an
//! explicit error bound.
//!
//! A value `x` with precision `P` is known modulo θ^{−P}·F_q[[1/θ]], so the
//! error has absolute value at most q^{−P}. Only exponents > −P are stored.

use std::fmt;

use crate::field::{Fe, Field};
use crate::frac::Frac;
use crate::poly::{add_assign_slice, mul_slices, sub_assign_slice, ThetaPoly};
use crate::scalar::Scalar;

/// Precision used for exactly known values.
pub const EXACT: i64 = i64::MAX / 8;

#[derive(Clone, PartialEq)]
pub struct Laurent {
    f: Field,
    /// Exponent of θ carried by `c[0]`.
    low: i64,
    c: Vec<Fe>,
    prec: i64,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if !a.is_zero() {
                parts.push(format!("{}*th^{}", crate::text::fe_to_string(self.f, a), self.low + i as i64));
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        if self.prec < EXACT {
            write!(fm, "{} + O(th^{})", parts.join(" + "), -self.prec)
        } else {
            write!(fm, "{}", parts.join(" + "))
        }
    }
}

fn sat_mul(a: i64, m: i64) -> i64 {
    if a >= EXACT {
        return EXACT;
    }
    a.saturating_mul(m).clamp(-EXACT, EXACT)
}

impl Laurent {
    /// Builds Σ c_i θ^{low+i} + O(θ^{−prec}).
    pub fn new(f: Field, low: i64, c: Vec<Fe>, prec: i64) -> Self {
        let mut x = Laurent { f, low, c, prec: prec.min(EXACT) };
        x.normalize();
        x
    }

    pub fn exact_zero(f: Field) -> Self {
        Laurent { f, low: 0, c: Vec::new(), prec: EXACT }
    }

    /// O(θ^{−prec}).
    pub fn zero_to(f: Field, prec: i64) -> Self {
        Laurent { f, low: 0, c: Vec::new(), prec }
    }

    fn normalize(&mut self) {
        let cut = -self.prec + 1;
        if self.low < cut {
            let drop = ((cut - self.low) as usize).min(self.c.len());
            self.c.drain(..drop);
            self.low = cut;
        }
        while self.c.last().is_some_and(|a| a.is_zero()) {
            self.c.pop();
        }
        let lead_zeros = self.c.iter().take_while(|a| a.is_zero()).count();
        if lead_zeros > 0 {
            self.c.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    pub fn from_poly_exact(a: &ThetaPoly) -> Self {
        Laurent::new(a.field(), 0, a.coeffs().to_vec(), EXACT)
    }

    /// 1/a expanded to precision `prec`.
    pub fn recip_poly(a: &ThetaPoly, prec: i64) -> crate::Result<Self> {
        let f = a.field();
        let d = a.deg().ok_or(crate::Error::DivisionByZero)? as i64;
        // 1/a = θ^{−d}·(lead + a_{d−1}u + … + a_0 u^d)^{−1} with u = 1/θ
        let n = (prec - d).max(0) as usize;
        let rev: Vec<Fe> = a.coeffs().iter().rev().copied().collect();
        let inv = series_inverse(f, &rev, n)?;
        Ok(Laurent::new(f, -d - n as i64 + 1, inv.into_iter().rev().collect(), prec))
    }

    pub fn from_frac(x: &Frac, prec: i64) -> crate::Result<Self> {
        if x.is_zero() {
            return Ok(Laurent::exact_zero(x.field()));
        }
        if x.den().is_one() {
            return Ok(Laurent::from_poly_exact(x.num()));
        }
        let dn = x.num().deg().unwrap() as i64;
        let inv = Laurent::recip_poly(x.den(), prec.saturating_add(dn))?;
        Ok(inv.times(&Laurent::from_poly_exact(x.num())))
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn low(&self) -> i64 {
        self.low
    }
    pub fn window(&self) -> &[Fe] {
        &self.c
    }

    /// Exponent of the leading known term, `None` when the window is empty.
    pub fn degree(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.low + self.c.len() as i64 - 1)
        }
    }

    /// Upper bound for log_q |x|: the degree, or −prec for an empty window.
    pub fn log_abs_bound(&self) -> i64 {
        self.degree().unwrap_or(-self.prec)
    }

    pub fn coeff(&self, e: i64) -> Fe {
        if e < self.low || e >= self.low + self.c.len() as i64 {
            Fe::ZERO
        } else {
            self.c[(e - self.low) as usize]
        }
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        let mut x = self.clone();
        x.prec = x.prec.min(prec);
        x.normalize();
        x
    }

    fn combine(&self, o: &Self, sub: bool) -> Self {
        let f = self.f;
        let prec = self.prec.min(o.prec);
        if o.c.is_empty() {
            return self.with_prec(prec);
        }
        if self.c.is_empty() {
            let r = if sub { o.negated() } else { o.clone() };
            return r.with_prec(prec);
        }
        let low = self.low.min(o.low);
        let high = (self.low + self.c.len() as i64).max(o.low + o.c.len() as i64);
        let mut c = vec![Fe::ZERO; (high - low) as usize];
        let a0 = (self.low - low) as usize;
        c[a0..a0 + self.c.len()].copy_from_slice(&self.c);
        let b0 = (o.low - low) as usize;
        if sub {
            sub_assign_slice(f, &mut c[b0..], &o.c);
        } else {
            add_assign_slice(f, &mut c[b0..], &o.c);
        }
        Laurent::new(f, low, c, prec)
    }

    /// Multiplication by an exactly known polynomial.
    pub fn mul_poly(&self, a: &ThetaPoly) -> Self {
        self.times(&Laurent::from_poly_exact(a))
    }
}

/// Inverse of a power series with nonzero constant term, to `n` terms.
fn series_inverse(f: Field, a: &[Fe], n: usize) -> crate::Result<Vec<Fe>> {
    let inv0 = f.inv(a[0])?;
    let mut out = vec![Fe::ZERO; n];
    if n == 0 {
        return Ok(out);
    }
    // b_k = −inv0·Σ_{i=1..k} a_i b_{k−i}, accumulated row by row
    let mut acc = vec![Fe::ZERO; n];
    for k in 0..n {
        let v = if k == 0 { Fe::ONE } else { f.neg(acc[k]) };
        let b = f.mul(v, inv0);
        out[k] = b;
        if !b.is_zero() {
            for (i, &ai) in a.iter().enumerate().skip(1) {
                if k + i >= n {
                    break;
                }
                acc[k + i] = f.add(acc[k + i], f.mul(ai, b));
            }
        }
    }
    Ok(out)
}

impl Scalar for Laurent {
    fn field(&self) -> Field {
        self.f
    }
    fn zero(f: Field) -> Self {
        Laurent::exact_zero(f)
    }
    fn one(f: Field) -> Self {
        Laurent::new(f, 0, vec![Fe::ONE], EXACT)
    }
    fn from_fe(f: Field, a: Fe) -> Self {
        Laurent::new(f, 0, vec![a], EXACT)
    }
    fn from_poly(a: &ThetaPoly) -> Self {
        Laurent::from_poly_exact(a)
    }
    /// True when no known coefficient survives; the value is then only
    /// known to be O(θ^{−prec}).
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self.combine(o, false)
    }
    fn minus(&self, o: &Self) -> Self {
        self.combine(o, true)
    }
    fn negated(&self) -> Self {
        let f = self.f;
        Laurent { f, low: self.low, c: self.c.iter().map(|&a| f.neg(a)).collect(), prec: self.prec }
    }
    fn times(&self, o: &Self) -> Self {
        let f = self.f;
        let prec = (o.prec.saturating_sub(self.log_abs_bound())).min(self.prec.saturating_sub(o.log_abs_bound())).min(EXACT);
        if self.c.is_empty() || o.c.is_empty() {
            return Laurent::zero_to(f, prec);
        }
        // only exponents > −prec are kept, so skip low terms that cannot reach them
        let lo_keep = -prec + 1;
        let (la, ca) = (self.low, &self.c);
        let (lb, cb) = (o.low, &o.c);
        let ha = la + ca.len() as i64 - 1;
        let hb = lb + cb.len() as i64 - 1;
        let sa = ((lo_keep - hb - la).max(0) as usize).min(ca.len());
        let sb = ((lo_keep - ha - lb).max(0) as usize).min(cb.len());
        if sa >= ca.len() || sb >= cb.len() {
            return Laurent::zero_to(f, prec);
        }
        let c = mul_slices(f, &ca[sa..], &cb[sb..]);
        Laurent::new(f, la + sa as i64 + lb + sb as i64, c, prec)
    }
    fn scale_fe(&self, a: Fe) -> Self {
        let f = self.f;
        if a.is_zero() {
            return Laurent::exact_zero(f);
        }
        Laurent { f, low: self.low, c: self.c.iter().map(|&x| f.mul(a, x)).collect(), prec: self.prec }
    }
    fn frobenius_pow(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let f = self.f;
        let m = (f.q() as i64).pow(k);
        let prec = sat_mul(self.prec, m);
        if self.c.is_empty() {
            return Laurent::zero_to(f, prec);
        }
        let mut c = vec![Fe::ZERO; (self.c.len() - 1) * m as usize + 1];
        for (i, &a) in self.c.iter().enumerate() {
            // coefficients are in F_q, fixed by x ↦ x^q
            c[i * m as usize] = a;
        }
        Laurent::new(f, self.low * m, c, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    #[test]
    fn reciprocal_times_poly_is_one() {
        for q in [2u32, 3, 4] {
            let f = Fq::with_q(q).unwrap();
            let a = ThetaPoly::new(f, vec![Fe(1), Fe((q - 1) as u8), Fe(0), Fe(1)]);
            let inv = Laurent::recip_poly(&a, 20).unwrap();
            assert_eq!(inv.degree(), Some(-3));
            let one = inv.mul_poly(&a);
            assert_eq!(one.prec(), 17);
            assert_eq!(one.window(), &[Fe::ONE]);
            assert_eq!(one.low(), 0);
        }
    }

    #[test]
    fn frac_roundtrip_and_frobenius() {
        let f = Fq::with_q(3).unwrap();
        let x = Frac::new(ThetaPoly::from_ints(f, &[1, 1]), ThetaPoly::from_ints(f, &[2, 0, 1])).unwrap();
        let lx = Laurent::from_frac(&x, 12).unwrap();
        let l3 = Laurent::from_frac(&x.frobenius_pow(1), 36).unwrap();
        assert_eq!(lx.frobenius_pow(1), l3);
        assert_eq!(lx.times(&lx).times(&lx), l3.with_prec(14));
    }

    #[test]
    fn precision_of_products() {
        let f = Fq::with_q(2).unwrap();
        let th = Laurent::from_poly_exact(&ThetaPoly::theta(f));
        let small = Laurent::new(f, -3, vec![Fe::ONE], 5);
        let p = th.times(&small);
        assert_eq!(p.prec(), 4);
        assert_eq!(p.degree(), Some(-2));
    }
}
