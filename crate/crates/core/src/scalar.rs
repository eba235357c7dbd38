//! Coefficient rings for [`MultiPoly`](crate::multipoly::MultiPoly).
//!
//! The field F_q is chosen at run time, so unlike `num_traits::Zero` the
//! constructors here take the [`Field`] handle explicitly.

use std::fmt::Debug;

use crate::field::{Fe, Field};
use crate::frac::Frac;
use crate::poly::ThetaPoly;

/// A commutative F_q-algebra in which θ lives and on which the q-power
/// Frobenius acts: A, K, or an approximation of K_∞.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn field(&self) -> Field;
    fn zero(f: Field) -> Self;
    fn one(f: Field) -> Self;
    fn from_fe(f: Field, a: Fe) -> Self;
    fn from_poly(a: &ThetaPoly) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scale_fe(&self, a: Fe) -> Self;
    /// x ↦ x^{q^k}.
    fn frobenius_pow(&self, k: u32) -> Self;

    fn add_assign(&mut self, o: &Self) {
        *self = self.plus(o);
    }
    fn theta(f: Field) -> Self {
        Self::from_poly(&ThetaPoly::theta(f))
    }
}

impl Scalar for ThetaPoly {
    fn field(&self) -> Field {
        ThetaPoly::field(self)
    }
    fn zero(f: Field) -> Self {
        ThetaPoly::zero(f)
    }
    fn one(f: Field) -> Self {
        ThetaPoly::one(f)
    }
    fn from_fe(f: Field, a: Fe) -> Self {
        ThetaPoly::constant(f, a)
    }
    fn from_poly(a: &ThetaPoly) -> Self {
        a.clone()
    }
    fn is_zero(&self) -> bool {
        ThetaPoly::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_fe(&self, a: Fe) -> Self {
        self.scale(a)
    }
    fn frobenius_pow(&self, k: u32) -> Self {
        ThetaPoly::frobenius_pow(self, k)
    }
    fn add_assign(&mut self, o: &Self) {
        if o.is_zero() {
            return;
        }
        let f = self.field();
        let mut c = std::mem::replace(self, ThetaPoly::zero(f)).into_coeffs();
        if c.len() < o.coeffs().len() {
            c.resize(o.coeffs().len(), Fe::ZERO);
        }
        crate::poly::add_assign_slice(f, &mut c, o.coeffs());
        *self = ThetaPoly::new(f, c);
    }
}

impl Scalar for Frac {
    fn field(&self) -> Field {
        Frac::field(self)
    }
    fn zero(f: Field) -> Self {
        Frac::zero(f)
    }
    fn one(f: Field) -> Self {
        Frac::one(f)
    }
    fn from_fe(f: Field, a: Fe) -> Self {
        Frac::constant(f, a)
    }
    fn from_poly(a: &ThetaPoly) -> Self {
        Frac::from_poly(a.clone())
    }
    fn is_zero(&self) -> bool {
        Frac::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_fe(&self, a: Fe) -> Self {
        self.scale(a)
    }
    fn frobenius_pow(&self, k: u32) -> Self {
        Frac::frobenius_pow(self, k)
    }
}
