//! Dense univariate polynomials over F_q: the ring A = F_q[θ].

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

const KARATSUBA_CUTOFF: usize = 40;

/// An element of A = F_q[θ], coefficients lowest degree first, never with a
/// trailing zero. The zero polynomial has no coefficients and degree `None`.
#[derive(Clone)]
pub struct ThetaPoly {
    f: Field,
    c: Vec<Fe>,
}

impl PartialEq for ThetaPoly {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.f, other.f) && self.c == other.c
    }
}
impl Eq for ThetaPoly {}

impl Hash for ThetaPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::theta_poly_to_string(self))
    }
}

impl ThetaPoly {
    pub fn new(f: Field, mut c: Vec<Fe>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ThetaPoly { f, c }
    }

    /// From integer coefficients (reduced into the prime field), lowest first.
    pub fn from_ints(f: Field, c: &[i64]) -> Self {
        ThetaPoly::new(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    pub fn zero(f: Field) -> Self {
        ThetaPoly { f, c: Vec::new() }
    }
    pub fn one(f: Field) -> Self {
        ThetaPoly { f, c: vec![Fe::ONE] }
    }
    pub fn constant(f: Field, a: Fe) -> Self {
        ThetaPoly::new(f, vec![a])
    }
    pub fn theta(f: Field) -> Self {
        ThetaPoly { f, c: vec![Fe::ZERO, Fe::ONE] }
    }
    /// a·θ^k
    pub fn monomial(f: Field, a: Fe, k: usize) -> Self {
        if a.is_zero() {
            return ThetaPoly::zero(f);
        }
        let mut c = vec![Fe::ZERO; k + 1];
        c[k] = a;
        ThetaPoly { f, c }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.f
    }
    #[inline]
    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }
    pub fn into_coeffs(self) -> Vec<Fe> {
        self.c
    }
    /// Coefficient of θ^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Fe {
        self.c.get(k).copied().unwrap_or(Fe::ZERO)
    }
    /// `None` for the zero polynomial.
    #[inline]
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fe::ONE
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    pub fn scale(&self, a: Fe) -> Self {
        if a.is_zero() {
            return ThetaPoly::zero(self.f);
        }
        if a == Fe::ONE {
            return self.clone();
        }
        let f = self.f;
        ThetaPoly { f, c: self.c.iter().map(|&x| f.mul(x, a)).collect() }
    }

    /// Multiplication by θ^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.c);
        ThetaPoly { f: self.f, c }
    }

    /// Returns (lead, self / lead); the zero polynomial maps to (0, 0).
    pub fn monic_parts(&self) -> (Fe, Self) {
        let l = self.lead();
        if l.is_zero() || l == Fe::ONE {
            return (l, self.clone());
        }
        let inv = self.f.inv(l).expect("nonzero lead");
        (l, self.scale(inv))
    }

    pub fn to_monic(&self) -> Self {
        self.monic_parts().1
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = self.f;
        self.c.iter().rev().fold(Fe::ZERO, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = ThetaPoly::one(self.f);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// x ↦ x^{q^k}. Coefficients lie in F_q, so this only spreads them.
    pub fn frobenius_pow(&self, k: u32) -> Self {
        if k == 0 || self.c.len() <= 1 {
            return self.clone();
        }
        let stride = (self.f.q() as usize).pow(k);
        let mut c = vec![Fe::ZERO; (self.c.len() - 1) * stride + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * stride] = a;
        }
        ThetaPoly { f: self.f, c }
    }

    /// Euclidean division.
    pub fn divrem(&self, d: &ThetaPoly) -> Result<(ThetaPoly, ThetaPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.f;
        if self.c.len() < d.c.len() {
            return Ok((ThetaPoly::zero(f), self.clone()));
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let mut quo = vec![Fe::ZERO; r.len() - dl + 1];
        let inv = f.inv(d.lead())?;
        let dm: Vec<Fe> = if inv == Fe::ONE { d.c.clone() } else { d.c.iter().map(|&x| f.mul(x, inv)).collect() };
        for k in (0..quo.len()).rev() {
            let c = r[k + dl - 1];
            if c.is_zero() {
                continue;
            }
            quo[k] = f.mul(c, inv);
            sub_scaled(f, &mut r[k..k + dl], &dm, c);
        }
        r.truncate(dl - 1);
        Ok((ThetaPoly::new(f, quo), ThetaPoly::new(f, r)))
    }

    pub fn rem(&self, d: &ThetaPoly) -> Result<ThetaPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// `Some(self / d)` when d divides self exactly.
    pub fn exact_div(&self, d: &ThetaPoly) -> Option<ThetaPoly> {
        match self.divrem(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &ThetaPoly) -> bool {
        !self.is_zero() && other.divrem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(a: &ThetaPoly, b: &ThetaPoly) -> ThetaPoly {
        let f = a.f;
        if a.is_zero() {
            return b.to_monic();
        }
        if b.is_zero() {
            return a.to_monic();
        }
        if a.is_constant() || b.is_constant() {
            return ThetaPoly::one(f);
        }
        let (mut x, mut y) = if a.c.len() >= b.c.len() {
            (a.c.clone(), b.to_monic().c)
        } else {
            (b.c.clone(), a.to_monic().c)
        };
        // x mod y in place, then swap, until y vanishes
        loop {
            reduce_in_place(f, &mut x, &y);
            if x.is_empty() {
                return ThetaPoly { f, c: y };
            }
            if x.len() == 1 {
                return ThetaPoly::one(f);
            }
            let inv = f.inv(*x.last().unwrap()).unwrap();
            if inv != Fe::ONE {
                for c in x.iter_mut() {
                    *c = f.mul(*c, inv);
                }
            }
            std::mem::swap(&mut x, &mut y);
        }
    }
}

/// x ← x mod y, with y monic; trims x.
fn reduce_in_place(f: Field, x: &mut Vec<Fe>, y: &[Fe]) {
    let dl = y.len();
    while x.len() >= dl {
        let top = x.len() - 1;
        let c = x[top];
        if !c.is_zero() {
            let k = top + 1 - dl;
            sub_scaled(f, &mut x[k..=top], y, c);
        }
        x.pop();
        while x.last().is_some_and(|v| v.is_zero()) {
            x.pop();
        }
    }
}

/// dst ← dst − c·src (equal lengths).
#[inline]
fn sub_scaled(f: Field, dst: &mut [Fe], src: &[Fe], c: Fe) {
    if f.q() == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 ^= s.0;
        }
    } else if f.is_prime_field() {
        let p = f.p();
        if c == Fe::ONE {
            sub_assign_slice(f, dst, src);
            return;
        }
        if c.0 as u32 == p - 1 {
            add_assign_slice(f, dst, src);
            return;
        }
        let nc = p - c.0 as u32;
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 = ((d.0 as u32 + nc * s.0 as u32) % p) as u8;
        }
    } else {
        let nc = f.neg(c);
        for (d, s) in dst.iter_mut().zip(src) {
            *d = f.add(*d, f.mul(nc, *s));
        }
    }
}

/// dst ← dst + src (src may be shorter).
#[inline]
pub(crate) fn add_assign_slice(f: Field, dst: &mut [Fe], src: &[Fe]) {
    if f.p() == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 ^= s.0;
        }
    } else if f.is_prime_field() {
        let p = f.p() as u8;
        for (d, s) in dst.iter_mut().zip(src) {
            let v = d.0 + s.0;
            d.0 = if v >= p { v - p } else { v };
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = f.add(*d, *s);
        }
    }
}

#[inline]
pub(crate) fn sub_assign_slice(f: Field, dst: &mut [Fe], src: &[Fe]) {
    if f.p() == 2 {
        add_assign_slice(f, dst, src);
    } else if f.is_prime_field() {
        let p = f.p() as u8;
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 = if d.0 >= s.0 { d.0 - s.0 } else { d.0 + p - s.0 };
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = f.sub(*d, *s);
        }
    }
}

/// dst ← dst + c·src.
#[inline]
pub(crate) fn add_scaled_slice(f: Field, dst: &mut [Fe], src: &[Fe], c: Fe) {
    if c.is_zero() {
        return;
    }
    if c == Fe::ONE {
        add_assign_slice(f, dst, src);
        return;
    }
    if f.is_prime_field() {
        let p = f.p();
        if c.0 as u32 == p - 1 {
            sub_assign_slice(f, dst, src);
            return;
        }
        let cc = c.0 as u32;
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 = ((d.0 as u32 + cc * s.0 as u32) % p) as u8;
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = f.add(*d, f.mul(c, *s));
        }
    }
}

fn schoolbook(f: Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let n = a.len() + b.len() - 1;
    if f.q() == 2 {
        let mut out = vec![Fe::ZERO; n];
        for (i, &x) in a.iter().enumerate() {
            if x.0 != 0 {
                for (o, &y) in out[i..].iter_mut().zip(b) {
                    o.0 ^= y.0;
                }
            }
        }
        return out;
    }
    if f.is_prime_field() {
        // Accumulating at most KARATSUBA_CUTOFF products of size < p^2 fits in u32
        // for the shorter operand; longer ones are split before reaching here.
        let p = f.p();
        let mut acc = vec![0u32; n];
        for (i, &x) in a.iter().enumerate() {
            if x.0 != 0 {
                let xv = x.0 as u32;
                for (o, &y) in acc[i..].iter_mut().zip(b) {
                    *o += xv * y.0 as u32;
                }
            }
        }
        return acc.into_iter().map(|v| Fe((v % p) as u8)).collect();
    }
    let mut out = vec![Fe::ZERO; n];
    for (i, &x) in a.iter().enumerate() {
        if !x.is_zero() {
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o = f.add(*o, f.mul(x, y));
            }
        }
    }
    out
}

fn karatsuba(f: Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    // a.len() == b.len()
    let n = a.len();
    if n < KARATSUBA_CUTOFF {
        return schoolbook(f, a, b);
    }
    let m = n / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(f, a0, b0);
    let z2 = mul_slices(f, a1, b1);
    let mut sa = a1.to_vec();
    add_assign_slice(f, &mut sa, a0);
    let mut sb = b1.to_vec();
    add_assign_slice(f, &mut sb, b0);
    let mut z1 = mul_slices(f, &sa, &sb);
    sub_assign_slice(f, &mut z1, &z0);
    sub_assign_slice(f, &mut z1, &z2);
    let mut out = vec![Fe::ZERO; 2 * n - 1];
    add_assign_slice(f, &mut out, &z0);
    add_assign_slice(f, &mut out[m..], &z1);
    add_assign_slice(f, &mut out[2 * m..], &z2);
    out
}

/// Product of coefficient slices (both nonempty).
pub(crate) fn mul_slices(f: Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.len() < KARATSUBA_CUTOFF {
        return schoolbook(f, short, long);
    }
    let k = short.len();
    if long.len() == k {
        return karatsuba(f, long, short);
    }
    if long.len() < 2 * k {
        let mut padded = short.to_vec();
        padded.resize(long.len(), Fe::ZERO);
        let mut out = karatsuba(f, long, &padded);
        out.truncate(long.len() + k - 1);
        return out;
    }
    let mut out = vec![Fe::ZERO; long.len() + k - 1];
    for (idx, chunk) in long.chunks(k).enumerate() {
        let part = mul_slices(f, chunk, short);
        add_assign_slice(f, &mut out[idx * k..], &part);
    }
    out
}

impl Add for &ThetaPoly {
    type Output = ThetaPoly;
    fn add(self, rhs: &ThetaPoly) -> ThetaPoly {
        let (long, short) = if self.c.len() >= rhs.c.len() { (self, rhs) } else { (rhs, self) };
        let mut c = long.c.clone();
        add_assign_slice(self.f, &mut c, &short.c);
        ThetaPoly::new(self.f, c)
    }
}

impl Sub for &ThetaPoly {
    type Output = ThetaPoly;
    fn sub(self, rhs: &ThetaPoly) -> ThetaPoly {
        let mut c = self.c.clone();
        if c.len() < rhs.c.len() {
            c.resize(rhs.c.len(), Fe::ZERO);
        }
        sub_assign_slice(self.f, &mut c, &rhs.c);
        ThetaPoly::new(self.f, c)
    }
}

impl Neg for &ThetaPoly {
    type Output = ThetaPoly;
    fn neg(self) -> ThetaPoly {
        let f = self.f;
        ThetaPoly { f, c: self.c.iter().map(|&x| f.neg(x)).collect() }
    }
}

impl Mul for &ThetaPoly {
    type Output = ThetaPoly;
    fn mul(self, rhs: &ThetaPoly) -> ThetaPoly {
        if self.is_zero() || rhs.is_zero() {
            return ThetaPoly::zero(self.f);
        }
        if self.c.len() == 1 {
            return rhs.scale(self.c[0]);
        }
        if rhs.c.len() == 1 {
            return self.scale(rhs.c[0]);
        }
        ThetaPoly::new(self.f, mul_slices(self.f, &self.c, &rhs.c))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ThetaPoly {
            type Output = ThetaPoly;
            fn $m(self, rhs: ThetaPoly) -> ThetaPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// All monic polynomials of degree `d`, ordered lexicographically by the
/// coefficient vector read from θ^{d−1} down to θ^0 (encoding order of F_q).
pub fn monic_enum(f: Field, d: usize) -> Vec<ThetaPoly> {
    let q = f.q() as usize;
    let count = q.checked_pow(d as u32).expect("monic enumeration too large");
    (0..count).map(|idx| monic_from_index(f, d, idx)).collect()
}

/// The monic polynomial of degree d whose lower coefficients c_0..c_{d−1}
/// are the base-q digits of `idx` (c_0 least significant).
pub fn monic_from_index(f: Field, d: usize, idx: usize) -> ThetaPoly {
    let q = f.q() as usize;
    let mut c = Vec::with_capacity(d + 1);
    let mut x = idx;
    for _ in 0..d {
        c.push(Fe((x % q) as u8));
        x /= q;
    }
    c.push(Fe::ONE);
    ThetaPoly { f, c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn tp(f: Field, c: &[i64]) -> ThetaPoly {
        ThetaPoly::from_ints(f, c)
    }

    #[test]
    fn monic_enum_small_cases() {
        let f2 = Fq::with_q(2).unwrap();
        let m = monic_enum(f2, 1);
        assert_eq!(m, vec![tp(f2, &[0, 1]), tp(f2, &[1, 1])]);
        let f3 = Fq::with_q(3).unwrap();
        assert_eq!(monic_enum(f3, 0), vec![ThetaPoly::one(f3)]);
        let m2 = monic_enum(f2, 2);
        assert_eq!(
            m2,
            vec![tp(f2, &[0, 0, 1]), tp(f2, &[1, 0, 1]), tp(f2, &[0, 1, 1]), tp(f2, &[1, 1, 1])]
        );
    }

    #[test]
    fn monic_enum_counts_and_distinct() {
        for q in [2u32, 3, 4, 5] {
            let f = Fq::with_q(q).unwrap();
            let max_d = if q == 5 { 5 } else { 6 };
            for d in 0..=max_d {
                let m = monic_enum(f, d);
                assert_eq!(m.len(), (q as usize).pow(d as u32));
                assert!(m.iter().all(|a| a.is_monic() && a.deg() == Some(d)));
                let set: std::collections::HashSet<_> = m.iter().collect();
                assert_eq!(set.len(), m.len());
            }
        }
    }

    #[test]
    fn zero_degree_is_marker() {
        let f = Fq::with_q(3).unwrap();
        assert_eq!(ThetaPoly::zero(f).deg(), None);
        assert_eq!(ThetaPoly::one(f).deg(), Some(0));
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        for q in [2u32, 3, 4, 9] {
            let f = Fq::with_q(q).unwrap();
            let a: Vec<Fe> = (0..173).map(|i| Fe(((i * 7 + 3) % q as usize) as u8)).collect();
            let b: Vec<Fe> = (0..97).map(|i| Fe(((i * i + 1) % q as usize) as u8)).collect();
            assert_eq!(mul_slices(f, &a, &b), schoolbook(f, &a, &b));
            assert_eq!(mul_slices(f, &a, &a), schoolbook(f, &a, &a));
            let c: Vec<Fe> = (0..41).map(|i| Fe(((i * 5 + 2) % q as usize) as u8)).collect();
            assert_eq!(mul_slices(f, &a, &c), schoolbook(f, &a, &c));
        }
    }

    #[test]
    fn division_and_gcd() {
        let f = Fq::with_q(3).unwrap();
        let a = tp(f, &[1, 1]); // θ + 1
        let b = tp(f, &[2, 0, 1]); // θ² + 2 = (θ+1)(θ+2)
        let c = tp(f, &[0, 1, 1]); // θ² + θ = θ(θ+1)
        assert_eq!(ThetaPoly::gcd(&b, &c), a);
        let (qq, r) = b.divrem(&a).unwrap();
        assert!(r.is_zero());
        assert_eq!(qq, tp(f, &[2, 1]));
        assert_eq!(a.divrem(&ThetaPoly::zero(f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_is_qth_power() {
        for q in [2u32, 3, 4] {
            let f = Fq::with_q(q).unwrap();
            let a = ThetaPoly::new(f, vec![Fe(1), Fe::ZERO, Fe((q - 1) as u8), Fe(1)]);
            assert_eq!(a.frobenius_pow(1), a.pow(q as u64));
            assert_eq!(a.frobenius_pow(2), a.pow((q * q) as u64));
        }
    }
}
