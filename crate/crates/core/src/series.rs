//! Truncated power series in z (or Z) with [`MultiPoly`] coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::frac::Frac;
use crate::multipoly::{MultiPoly, Vars};
use crate::poly::ThetaPoly;
use crate::scalar::Scalar;

/// Which series variable is in use. `z` accompanies t-variables, `Z`
/// accompanies X-variables; they only differ in printing and in how the
/// dot action treats them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesVar {
    Lower,
    Upper,
}

impl SeriesVar {
    pub fn name(self) -> &'static str {
        match self {
            SeriesVar::Lower => "z",
            SeriesVar::Upper => "Z",
        }
    }
}

/// Σ_k c_k v^k + O(v^prec). `prec = None` means the series is an exact
/// polynomial. Coefficients at or beyond `prec` are never stored.
#[derive(Clone)]
pub struct Series<C> {
    field: Field,
    vars: Vars,
    var: SeriesVar,
    coeffs: BTreeMap<u64, MultiPoly<C>>,
    prec: Option<u64>,
}

pub type ZSeries = Series<Frac>;
pub type AZSeries = Series<ThetaPoly>;

impl<C: Scalar> PartialEq for Series<C> {
    fn eq(&self, o: &Self) -> bool {
        std::ptr::eq(self.field, o.field)
            && self.vars == o.vars
            && self.var == o.var
            && self.prec == o.prec
            && self.coeffs == o.coeffs
    }
}

impl<C: Scalar> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("var", &self.var)
            .field("prec", &self.prec)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

fn min_prec(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Scalar> Series<C> {
    /// The zero series with the given precision (`None` = exact).
    pub fn zero(field: Field, vars: Vars, var: SeriesVar, prec: Option<u64>) -> Self {
        Series { field, vars, var, coeffs: BTreeMap::new(), prec }
    }

    /// The exact series with the single coefficient `p` at v^k.
    pub fn monomial(p: MultiPoly<C>, var: SeriesVar, k: u64) -> Self {
        let mut s = Series::zero(p.field(), p.vars(), var, None);
        s.add_coeff(k, &p);
        s
    }

    pub fn from_poly(p: MultiPoly<C>, var: SeriesVar) -> Self {
        Series::monomial(p, var, 0)
    }

    pub fn one(field: Field, vars: Vars, var: SeriesVar) -> Self {
        Series::from_poly(MultiPoly::one(field, vars), var)
    }

    pub fn from_coeffs(
        field: Field,
        vars: Vars,
        var: SeriesVar,
        coeffs: impl IntoIterator<Item = (u64, MultiPoly<C>)>,
        prec: Option<u64>,
    ) -> Self {
        let mut s = Series::zero(field, vars, var, prec);
        for (k, c) in coeffs {
            s.add_coeff(k, &c);
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn vars(&self) -> Vars {
        self.vars
    }
    pub fn var(&self) -> SeriesVar {
        self.var
    }
    pub fn prec(&self) -> Option<u64> {
        self.prec
    }
    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of v^k (zero when absent).
    ///
    /// Panics if k lies beyond the precision, where the coefficient is
    /// unknown.
    pub fn coeff(&self, k: u64) -> MultiPoly<C> {
        if let Some(p) = self.prec {
            assert!(k < p, "coefficient {k} beyond precision {p}");
        }
        self.coeffs.get(&k).cloned().unwrap_or_else(|| MultiPoly::zero(self.field, self.vars))
    }

    pub fn coeff_ref(&self, k: u64) -> Option<&MultiPoly<C>> {
        self.coeffs.get(&k)
    }

    /// Nonzero coefficients in ascending order of the exponent.
    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (u64, &MultiPoly<C>)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<u64> {
        self.coeffs.keys().next().copied()
    }

    pub fn add_coeff(&mut self, k: u64, c: &MultiPoly<C>) {
        if self.prec.is_some_and(|p| k >= p) || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(e) => {
                e.add_assign(c);
                if e.is_zero() {
                    self.coeffs.remove(&k);
                }
            }
            None => {
                self.coeffs.insert(k, c.clone());
            }
        }
    }

    /// Drops everything at v^p and beyond; never widens the precision.
    pub fn truncate(&self, p: u64) -> Self {
        let prec = min_prec(self.prec, Some(p));
        Series {
            field: self.field,
            vars: self.vars,
            var: self.var,
            coeffs: self.coeffs.range(..prec.unwrap()).map(|(k, c)| (*k, c.clone())).collect(),
            prec,
        }
    }

    /// Forgets the precision flag, treating a truncation as exact. Used when
    /// a finite support has been proved independently.
    pub fn into_exact(mut self) -> Self {
        self.prec = None;
        self
    }

    pub fn plus(&self, o: &Self) -> Self {
        self.check(o);
        let prec = min_prec(self.prec, o.prec);
        let mut r = Series::zero(self.field, self.vars, self.var, prec);
        for (k, c) in self.coeffs.iter().chain(o.coeffs.iter()) {
            r.add_coeff(*k, c);
        }
        r
    }

    pub fn negated(&self) -> Self {
        Series {
            field: self.field,
            vars: self.vars,
            var: self.var,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.negated())).collect(),
            prec: self.prec,
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    /// Product, truncated to the smaller of the operand precisions.
    pub fn times(&self, o: &Self) -> Self {
        self.check(o);
        let prec = min_prec(self.prec, o.prec);
        let mut r = Series::zero(self.field, self.vars, self.var, prec);
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                if prec.is_some_and(|p| i + j >= p) {
                    break;
                }
                r.add_coeff(i + j, &a.times(b));
            }
        }
        r
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn mul_poly(&self, p: &MultiPoly<C>) -> Self {
        let mut r = Series::zero(self.field, self.vars, self.var, self.prec);
        for (k, c) in &self.coeffs {
            r.add_coeff(*k, &c.times(p));
        }
        r
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn scale_fe(&self, a: Fe) -> Self {
        self.map_coeffs(|p| p.scale_fe(a))
    }

    /// Multiplication by v^k.
    pub fn shift(&self, k: u64) -> Self {
        Series {
            field: self.field,
            vars: self.vars,
            var: self.var,
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// v ↦ v^m. A precision p becomes m(p − 1) + 1, the first exponent that
    /// an unknown term v^p could reach.
    pub fn substitute_power(&self, m: u64) -> Self {
        assert!(m >= 1);
        Series {
            field: self.field,
            vars: self.vars,
            var: self.var,
            coeffs: self.coeffs.iter().map(|(e, c)| (e * m, c.clone())).collect(),
            prec: self.prec.map(|p| m * (p.max(1) - 1) + 1),
        }
    }

    /// Applies a polynomial map to every coefficient. The map must be
    /// additive for the result to be meaningful as a series operation.
    pub fn map_coeffs<D: Scalar>(&self, g: impl Fn(&MultiPoly<C>) -> MultiPoly<D>) -> Series<D> {
        let mut coeffs = BTreeMap::new();
        let mut vars = self.vars;
        for (k, c) in &self.coeffs {
            let d = g(c);
            vars = d.vars();
            if !d.is_zero() {
                coeffs.insert(*k, d);
            }
        }
        Series { field: self.field, vars, var: self.var, coeffs, prec: self.prec }
    }

    pub fn try_map_coeffs<D: Scalar>(
        &self,
        g: impl Fn(&MultiPoly<C>) -> Result<MultiPoly<D>>,
    ) -> Result<Series<D>> {
        let mut coeffs = BTreeMap::new();
        let mut vars = self.vars;
        for (k, c) in &self.coeffs {
            let d = g(c)?;
            vars = d.vars();
            if !d.is_zero() {
                coeffs.insert(*k, d);
            }
        }
        Ok(Series { field: self.field, vars, var: self.var, coeffs, prec: self.prec })
    }

    /// φ^k on every coefficient.
    pub fn frobenius_coeffs(&self, k: u32) -> Self {
        self.map_coeffs(|p| p.frobenius_coeffs(k))
    }

    pub fn with_var(mut self, var: SeriesVar) -> Self {
        self.var = var;
        self
    }

    /// Reinterprets coefficients over a larger variable set.
    pub fn embed(&self, vars: Vars) -> Result<Self> {
        let mut r = Series::zero(self.field, vars, self.var, self.prec);
        for (k, c) in &self.coeffs {
            r.coeffs.insert(*k, c.embed(vars)?);
        }
        Ok(r)
    }

    /// Value at v = 1; only defined for exact series.
    pub fn eval_at_one(&self) -> Result<MultiPoly<C>> {
        if self.prec.is_some() {
            return Err(Error::Precondition(
                "evaluation at 1 needs an exact (polynomial) series".into(),
            ));
        }
        let mut r = MultiPoly::zero(self.field, self.vars);
        for c in self.coeffs.values() {
            r.add_assign(c);
        }
        Ok(r)
    }

    /// Quotient by (v − 1) for an exact series divisible by it.
    pub fn div_by_v_minus_one(&self) -> Result<Self> {
        if self.prec.is_some() {
            return Err(Error::Precondition("division needs an exact series".into()));
        }
        // synthetic division from the top: Σ c_k v^k = (v − 1) Σ d_k v^k with
        // d_{k-1} = c_k + d_k
        let mut r = Series::zero(self.field, self.vars, self.var, None);
        let Some(top) = self.degree() else { return Ok(r) };
        let mut carry = MultiPoly::zero(self.field, self.vars);
        for k in (1..=top).rev() {
            if let Some(c) = self.coeffs.get(&k) {
                carry.add_assign(c);
            }
            r.add_coeff(k - 1, &carry);
        }
        let c0 = self.coeffs.get(&0).cloned().unwrap_or_else(|| MultiPoly::zero(self.field, self.vars));
        if !c0.plus(&carry).is_zero() {
            return Err(Error::InvalidInput("series is not divisible by v - 1".into()));
        }
        Ok(r)
    }

    fn check(&self, o: &Self) {
        assert!(std::ptr::eq(self.field, o.field), "series over different fields");
        assert_eq!(self.vars, o.vars, "series over different variable sets");
        assert_eq!(self.var, o.var, "series in different variables");
    }
}

impl Series<ThetaPoly> {
    pub fn to_k(&self) -> ZSeries {
        self.map_coeffs(|p| p.to_k())
    }
}

impl ZSeries {
    /// The series over A, when every coefficient is integral.
    pub fn to_a(&self) -> Option<AZSeries> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(*k, c.to_a()?);
        }
        Some(Series { field: self.field, vars: self.vars, var: self.var, coeffs, prec: self.prec })
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integral())
    }

    pub fn mul_theta_poly(&self, a: &ThetaPoly) -> ZSeries {
        self.map_coeffs(|p| p.mul_poly(a))
    }

    pub fn div_theta_poly(&self, a: &ThetaPoly) -> Result<ZSeries> {
        self.try_map_coeffs(|p| p.div_poly(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn t1(f: Field) -> MultiPoly<Frac> {
        MultiPoly::t(f, Vars::t_only(1), 1).unwrap()
    }

    #[test]
    fn product_truncates_to_min_precision() {
        let f = Fq::with_q(3).unwrap();
        let v = Vars::t_only(1);
        let one = MultiPoly::one(f, v);
        let a = Series::from_coeffs(f, v, SeriesVar::Lower, [(0, one.clone()), (1, t1(f))], Some(5));
        let b = Series::from_coeffs(f, v, SeriesVar::Lower, [(0, one.clone()), (3, one.clone())], Some(3));
        let p = a.times(&b);
        assert_eq!(p.prec(), Some(3));
        assert_eq!(p.coeff(1), t1(f));
        assert!(p.coeff_ref(3).is_none());
    }

    #[test]
    fn divide_by_v_minus_one() {
        let f = Fq::with_q(2).unwrap();
        let v = Vars::t_only(1);
        let one = MultiPoly::<Frac>::one(f, v);
        // 1 + z = 1 − z in characteristic 2
        let s = Series::from_coeffs(f, v, SeriesVar::Lower, [(0, one.clone()), (1, one.clone())], None);
        let d = s.div_by_v_minus_one().unwrap();
        assert_eq!(d, Series::from_poly(one.negated(), SeriesVar::Lower));
        assert!(Series::from_poly(one, SeriesVar::Lower).div_by_v_minus_one().is_err());
    }

    #[test]
    fn substitute_power_moves_precision() {
        let f = Fq::with_q(3).unwrap();
        let v = Vars::t_only(1);
        let s = Series::from_coeffs(f, v, SeriesVar::Upper, [(1, t1(f))], Some(2));
        let r = s.substitute_power(3);
        assert_eq!(r.prec(), Some(4));
        assert_eq!(r.coeff(3), t1(f));
    }
}
