//! The rational function field K = F_q(θ).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::ThetaPoly;

/// A reduced fraction num/den with den monic and gcd(num, den) = 1.
/// Zero is 0/1, so structural equality is equality in K.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac {
    num: ThetaPoly,
    den: ThetaPoly,
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::frac_to_string(self))
    }
}

impl Frac {
    pub fn new(num: ThetaPoly, den: ThetaPoly) -> Result<Frac> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = num.field();
        if num.is_zero() {
            return Ok(Frac::zero(f));
        }
        if den.is_one() {
            return Ok(Frac { num, den });
        }
        let g = ThetaPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let (lead, den) = den.monic_parts();
        let num = if lead == Fe::ONE { num } else { num.scale(f.inv(lead)?) };
        Ok(Frac { num, den })
    }

    /// num/den when the caller guarantees the pair is already reduced with
    /// monic den.
    fn from_reduced(num: ThetaPoly, den: ThetaPoly) -> Frac {
        debug_assert!(den.is_monic());
        Frac { num, den }
    }

    pub fn from_poly(a: ThetaPoly) -> Frac {
        let f = a.field();
        Frac { num: a, den: ThetaPoly::one(f) }
    }
    pub fn zero(f: Field) -> Frac {
        Frac::from_poly(ThetaPoly::zero(f))
    }
    pub fn one(f: Field) -> Frac {
        Frac::from_poly(ThetaPoly::one(f))
    }
    pub fn constant(f: Field, a: Fe) -> Frac {
        Frac::from_poly(ThetaPoly::constant(f, a))
    }
    pub fn theta(f: Field) -> Frac {
        Frac::from_poly(ThetaPoly::theta(f))
    }
    /// 1/a.
    pub fn recip_poly(a: &ThetaPoly) -> Result<Frac> {
        Frac::new(ThetaPoly::one(a.field()), a.clone())
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.num.field()
    }
    pub fn num(&self) -> &ThetaPoly {
        &self.num
    }
    pub fn den(&self) -> &ThetaPoly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    /// True when the fraction lies in A.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }
    /// The element of A, when integral.
    pub fn as_poly(&self) -> Option<&ThetaPoly> {
        self.is_integral().then_some(&self.num)
    }
    /// The element of F_q, when constant.
    pub fn as_constant(&self) -> Option<Fe> {
        (self.is_integral() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// −v_∞: the exponent e with |x|_∞ = q^e, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let n = self.num.deg()? as i64;
        Some(n - self.den.deg().unwrap() as i64)
    }

    pub fn inv(&self) -> Result<Frac> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (lead, num) = self.num.monic_parts();
        let den = self.den.scale(self.field().inv(lead)?);
        Ok(Frac::from_reduced(den, num))
    }

    pub fn scale(&self, a: Fe) -> Frac {
        if a.is_zero() {
            return Frac::zero(self.field());
        }
        Frac::from_reduced(self.num.scale(a), self.den.clone())
    }

    pub fn pow(&self, n: u64) -> Frac {
        // reduced fractions stay reduced under powers
        Frac::from_reduced(self.num.pow(n), self.den.pow(n))
    }

    /// x ↦ x^{q^k}; preserves reducedness and monicity.
    pub fn frobenius_pow(&self, k: u32) -> Frac {
        Frac::from_reduced(self.num.frobenius_pow(k), self.den.frobenius_pow(k))
    }

    /// Multiplication by an element of A.
    pub fn mul_poly(&self, a: &ThetaPoly) -> Frac {
        if a.is_zero() || self.is_zero() {
            return Frac::zero(self.field());
        }
        if self.den.is_one() {
            return Frac::from_poly(&self.num * a);
        }
        let g = ThetaPoly::gcd(a, &self.den);
        if g.is_one() {
            return Frac::from_reduced(&self.num * a, self.den.clone());
        }
        let a2 = a.exact_div(&g).unwrap();
        let d2 = self.den.exact_div(&g).unwrap();
        Frac::from_reduced(&self.num * &a2, d2)
    }

    /// Division by a nonzero element of A.
    pub fn div_poly(&self, a: &ThetaPoly) -> Result<Frac> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let g = ThetaPoly::gcd(&self.num, a);
        let (num, a) = if g.is_one() {
            (self.num.clone(), a.clone())
        } else {
            (self.num.exact_div(&g).unwrap(), a.exact_div(&g).unwrap())
        };
        let (lead, a) = a.monic_parts();
        let num = num.scale(self.field().inv(lead)?);
        Ok(Frac::from_reduced(num, &self.den * &a))
    }

    pub fn checked_div(&self, rhs: &Frac) -> Result<Frac> {
        Ok(self * &rhs.inv()?)
    }
}

impl Add for &Frac {
    type Output = Frac;
    fn add(self, rhs: &Frac) -> Frac {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Frac::from_poly(&self.num + &rhs.num);
        }
        if self.den.is_one() {
            return Frac::from_reduced(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return Frac::from_reduced(&(&rhs.num * &self.den) + &self.num, self.den.clone());
        }
        if self.den == rhs.den {
            let n = &self.num + &rhs.num;
            return Frac::new(n, self.den.clone()).unwrap();
        }
        let g = ThetaPoly::gcd(&self.den, &rhs.den);
        if g.is_one() {
            let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return Frac::from_reduced(n, &self.den * &rhs.den);
        }
        let b1 = self.den.exact_div(&g).unwrap();
        let d1 = rhs.den.exact_div(&g).unwrap();
        let t = &(&self.num * &d1) + &(&rhs.num * &b1);
        if t.is_zero() {
            return Frac::zero(self.field());
        }
        let g2 = ThetaPoly::gcd(&t, &g);
        if g2.is_one() {
            Frac::from_reduced(t, &b1 * &rhs.den)
        } else {
            let num = t.exact_div(&g2).unwrap();
            let den = &b1 * &rhs.den.exact_div(&g2).unwrap();
            Frac::from_reduced(num, den)
        }
    }
}

impl Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac::from_reduced(-&self.num, self.den.clone())
    }
}

impl Sub for &Frac {
    type Output = Frac;
    fn sub(self, rhs: &Frac) -> Frac {
        self + &(-rhs)
    }
}

impl Mul for &Frac {
    type Output = Frac;
    fn mul(self, rhs: &Frac) -> Frac {
        if self.is_zero() || rhs.is_zero() {
            return Frac::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Frac::from_poly(&self.num * &rhs.num);
        }
        let g1 = ThetaPoly::gcd(&self.num, &rhs.den);
        let g2 = ThetaPoly::gcd(&rhs.num, &self.den);
        let div = |a: &ThetaPoly, g: &ThetaPoly| {
            if g.is_one() {
                a.clone()
            } else {
                a.exact_div(g).unwrap()
            }
        };
        let num = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let den = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        // both factors of den are monic
        Frac::from_reduced(num, den)
    }
}

impl Div for &Frac {
    type Output = Frac;
    /// Panics on division by zero; use [`Frac::checked_div`] to handle it.
    fn div(self, rhs: &Frac) -> Frac {
        self.checked_div(rhs).expect("division by zero in K")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Frac {
            type Output = Frac;
            fn $m(self, rhs: Frac) -> Frac {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<ThetaPoly> for Frac {
    fn from(a: ThetaPoly) -> Frac {
        Frac::from_poly(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn tp(f: Field, c: &[i64]) -> ThetaPoly {
        ThetaPoly::from_ints(f, c)
    }

    #[test]
    fn normalization_is_unique() {
        let f = Fq::with_q(3).unwrap();
        // (2θ+2) / (2θ² + 2θ) = 1/θ
        let x = Frac::new(tp(f, &[2, 2]), tp(f, &[0, 2, 2])).unwrap();
        assert_eq!(x, Frac::recip_poly(&ThetaPoly::theta(f)).unwrap());
        assert!(x.den().is_monic());
        assert_eq!(Frac::new(ThetaPoly::zero(f), tp(f, &[1, 1])).unwrap(), Frac::zero(f));
        assert_eq!(Frac::new(ThetaPoly::one(f), ThetaPoly::zero(f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_operations() {
        let f = Fq::with_q(5).unwrap();
        let a = Frac::new(tp(f, &[1, 2]), tp(f, &[3, 0, 1])).unwrap();
        let b = Frac::new(tp(f, &[4, 1, 1]), tp(f, &[1, 1])).unwrap();
        let s = &a + &b;
        assert_eq!(&s - &b, a);
        let p = &a * &b;
        assert_eq!(&p / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), Frac::one(f));
        assert_eq!(a.frobenius_pow(1), a.pow(5));
        assert_eq!(Frac::zero(f).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn degree_is_absolute_value_exponent() {
        let f = Fq::with_q(2).unwrap();
        let x = Frac::new(tp(f, &[1]), tp(f, &[0, 1])).unwrap();
        assert_eq!(x.degree(), Some(-1));
        assert_eq!(Frac::zero(f).degree(), None);
    }
}
