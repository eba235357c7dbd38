//! Finite fields F_q with q = p^e ≤ 256, realized by lookup tables.
//!
//! An element is a residue polynomial of degree < e over F_p, encoded as the
//! integer Σ r_i p^i. The encoding makes 0 and 1 the additive and
//! multiplicative identities and, for prime q, coincides with the usual
//! residue. Field descriptions are interned: [`Fq::get`] leaks one table set
//! per distinct (p, e, modulus) and hands out `&'static` handles, so every
//! polynomial can carry its field by reference.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Handle to an interned finite field.
pub type Field = &'static Fq;

/// An element of F_q, interpreted relative to some [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({})", self.0)
    }
}

/// Description of F_q used to build (or look up) a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic modulus of degree e over F_p, lowest coefficient first.
    /// Ignored when e = 1; `None` selects a built-in modulus.
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, e: 1, modulus: None }
    }

    /// Splits `q` into p^e and selects the built-in modulus.
    pub fn from_q(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Ok(FieldSpec { p, e, modulus: None })
    }
}

/// Built-in irreducible moduli for the non-prime fields we ship.
fn builtin_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    match (p, e) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![2, 2, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        _ => None,
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Returns (p, e) with q = p^e, or `None` if q is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, e))
}

/// Table-driven arithmetic for one finite field.
pub struct Fq {
    p: u8,
    e: u8,
    q: u16,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// x ↦ x^p
    frob: Vec<u8>,
    generator: u8,
    /// Discrete logarithm base `generator`; entry 0 unused.
    log: Vec<u16>,
    /// Powers of `generator`, indices 0..q-1.
    exp: Vec<u8>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
    }
}

static REGISTRY: OnceLock<Mutex<Vec<Field>>> = OnceLock::new();

impl Fq {
    /// Interns the field described by `spec`.
    pub fn get(spec: &FieldSpec) -> Result<Field> {
        let (p, e) = (spec.p, spec.e);
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= 256).ok_or_else(|| {
            Error::InvalidField(format!("q = {p}^{e} exceeds the supported maximum 256"))
        })? as u32;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            let m = match &spec.modulus {
                Some(m) => m.clone(),
                None => builtin_modulus(p, e).ok_or_else(|| {
                    Error::InvalidField(format!(
                        "no built-in modulus for q = {q}; supply one explicitly"
                    ))
                })?,
            };
            validate_modulus(p, e, &m)?;
            m
        };
        let modulus: Vec<u8> = modulus.iter().map(|&c| c as u8).collect();

        let registry = REGISTRY.get_or_init(|| Mutex::new(Vec::new()));
        let mut guard = registry.lock().expect("field registry poisoned");
        if let Some(found) = guard
            .iter()
            .find(|f| f.p as u32 == p && f.e as u32 == e && f.modulus == modulus)
        {
            return Ok(found);
        }
        let field: Field = Box::leak(Box::new(Fq::build(p as u8, e as u8, q as u16, modulus)));
        guard.push(field);
        Ok(field)
    }

    /// Shorthand for `Fq::get(&FieldSpec::from_q(q)?)`.
    pub fn with_q(q: u32) -> Result<Field> {
        Fq::get(&FieldSpec::from_q(q)?)
    }

    fn build(p: u8, e: u8, q: u16, modulus: Vec<u8>) -> Fq {
        let n = q as usize;
        let digits = |x: usize| -> Vec<u32> {
            let mut v = vec![0u32; e as usize];
            let mut x = x;
            for d in v.iter_mut() {
                *d = (x % p as usize) as u32;
                x /= p as usize;
            }
            v
        };
        let encode = |v: &[u32]| -> u8 {
            v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize) as u8
        };
        let pp = p as u32;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % pp).collect();
                add[a * n + b] = encode(&s);
                // product of residues, reduced by the monic modulus
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % pp;
                    }
                }
                for k in (e as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (j, &m) in modulus.iter().enumerate().take(e as usize) {
                            let idx = k - e as usize + j;
                            prod[idx] = (prod[idx] + pp * pp - c * m as u32) % pp;
                        }
                        prod[k] = 0;
                    }
                }
                mul[a * n + b] = encode(&prod[..e as usize]);
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u8;
            }
        }
        let pow = |a: usize, k: usize| (0..k).fold(1usize, |acc, _| mul[acc * n + a] as usize);
        let frob = (0..n).map(|a| pow(a, p as usize) as u8).collect();
        let order = |a: usize| {
            let mut x = a;
            let mut k = 1;
            while x != 1 {
                x = mul[x * n + a] as usize;
                k += 1;
            }
            k
        };
        let generator = if n == 2 { 1 } else { (2..n).find(|&a| order(a) == n - 1).unwrap() };
        let mut exp = vec![0u8; n - 1];
        let mut log = vec![0u16; n];
        let mut x = 1usize;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x as u8;
            log[x] = k as u16;
            x = mul[x * n + generator] as usize;
        }
        Fq { p, e, q, modulus, add, mul, neg, inv, frob, generator: generator as u8, log, exp }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p as u32
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e as u32
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q as u32
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }
    /// Monic modulus, lowest coefficient first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> Vec<u32> {
        self.modulus.iter().map(|&c| c as u32).collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }
    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Fe(self.inv[a.0 as usize]))
        }
    }
    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }
    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (k % (self.q as u64 - 1))) % (self.q as u64 - 1)) as usize])
    }
    /// The absolute Frobenius x ↦ x^p.
    #[inline]
    pub fn frobenius(&self, a: Fe) -> Fe {
        Fe(self.frob[a.0 as usize])
    }

    /// The image of the integer n under Z → F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u8)
    }

    /// A fixed primitive element g (order q − 1).
    pub fn generator(&self) -> Fe {
        Fe(self.generator)
    }
    /// g^k.
    pub fn gen_pow(&self, k: u64) -> Fe {
        Fe(self.exp[(k % (self.q as u64 - 1)) as usize])
    }
    /// k with g^k = a, for a ≠ 0.
    pub fn gen_log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as u32)
    }

    /// All elements, in encoding order 0, 1, ….
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(|x| Fe(x as u8))
    }

    /// Integer representative of a prime-field element, or `None` for q non-prime.
    pub fn as_int(&self, a: Fe) -> Option<u32> {
        self.is_prime_field().then_some(a.0 as u32)
    }
}

fn validate_modulus(p: u32, e: u32, m: &[u32]) -> Result<()> {
    if m.len() != e as usize + 1 || m[e as usize] != 1 {
        return Err(Error::InvalidField(format!(
            "modulus must be monic of degree {e} (got {} coefficients)",
            m.len()
        )));
    }
    if m.iter().any(|&c| c >= p) {
        return Err(Error::InvalidField("modulus coefficients must lie in 0..p".into()));
    }
    // trial division by every monic polynomial of degree 1..=e/2
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let mut f = vec![0u32; d as usize + 1];
            let mut x = idx;
            for c in f.iter_mut().take(d as usize) {
                *c = (x % p as u64) as u32;
                x /= p as u64;
            }
            f[d as usize] = 1;
            if divides_mod_p(&f, m, p) {
                return Err(Error::InvalidField(format!("modulus {m:?} is reducible over F_{p}")));
            }
        }
    }
    Ok(())
}

fn divides_mod_p(f: &[u32], g: &[u32], p: u32) -> bool {
    let mut r: Vec<u32> = g.to_vec();
    let df = f.len() - 1;
    while r.len() > df {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        for (j, &fc) in f.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p * p - c * fc % p) % p;
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_elem(f: Field) -> Fe {
        f.generator()
    }

    #[test]
    fn generator_order_q4() {
        let f = Fq::with_q(4).unwrap();
        let g = generic_elem(f);
        let g3 = f.pow(g, 3);
        assert_eq!(g3, Fe::ONE);
        assert_eq!(f.mul(g, g3), g);
    }

    #[test]
    fn inverse_of_two_mod_three() {
        let f = Fq::with_q(3).unwrap();
        assert_eq!(f.inv(Fe(2)).unwrap(), Fe(2));
        assert_eq!(f.inv(Fe::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_squares_in_f4() {
        let f = Fq::with_q(4).unwrap();
        for x in f.elements() {
            assert_eq!(f.frobenius(x), f.mul(x, x));
        }
        // x is the class of the variable: residue digits (0, 1) encode as 2.
        // x^2 = x + 1 mod x^2 + x + 1, encoded as 3.
        assert_eq!(f.frobenius(Fe(2)), Fe(3));
    }

    #[test]
    fn field_axioms_small_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16] {
            let f = Fq::with_q(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, q as u64), a, "x^q = x in F_{q}");
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        let spec = FieldSpec { p: 2, e: 2, modulus: Some(vec![1, 0, 1]) };
        assert!(matches!(Fq::get(&spec), Err(Error::InvalidField(_))));
        assert!(Fq::with_q(6).is_err());
        assert!(Fq::with_q(25).is_err(), "no built-in modulus for 25");
        let spec = FieldSpec { p: 5, e: 2, modulus: Some(vec![2, 0, 1]) };
        assert_eq!(Fq::get(&spec).unwrap().q(), 25);
    }

    #[test]
    fn interning_returns_same_handle() {
        let a = Fq::with_q(9).unwrap();
        let b = Fq::with_q(9).unwrap();
        assert!(std::ptr::eq(a, b));
    }
}
