//! Sparse multivariate polynomials in the variable families t₁..t_s and
//! X₁..X_s over a [`Scalar`] coefficient ring.
//!
//! Variables are addressed by a flat index: t-variables first, then
//! X-variables. Monomials are ordered graded-lexicographically with
//! t₁ < ⋯ < t_s < X₁ < ⋯ < X_s, so iterating the term map yields the
//! canonical ascending order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::frac::Frac;
use crate::poly::ThetaPoly;
use crate::scalar::Scalar;

pub type Exps = SmallVec<[u32; 8]>;

/// Number of variables in each family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vars {
    pub t: usize,
    pub x: usize,
}

impl Vars {
    pub fn t_only(s: usize) -> Vars {
        Vars { t: s, x: 0 }
    }
    pub fn x_only(s: usize) -> Vars {
        Vars { t: 0, x: s }
    }
    pub fn len(&self) -> usize {
        self.t + self.x
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Flat index of t_i (1-based).
    pub fn t_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.t {
            return Err(Error::InvalidVariable { index: i, max: self.t });
        }
        Ok(i - 1)
    }
    /// Flat index of X_i (1-based).
    pub fn x_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.x {
            return Err(Error::InvalidVariable { index: i, max: self.x });
        }
        Ok(self.t + i - 1)
    }
    /// Printable name of the variable with flat index `k`.
    pub fn name(&self, k: usize) -> String {
        if k < self.t {
            format!("t{}", k + 1)
        } else {
            format!("X{}", k - self.t + 1)
        }
    }
}

/// An exponent vector in the flat variable order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Exps);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, n))
    }
    pub fn var(n: usize, k: usize, e: u32) -> Monomial {
        let mut m = Monomial::one(n);
        m.0[k] = e;
        m
    }
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn exps(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}
impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// A sparse polynomial; zero coefficients are never stored, so two values
/// are equal exactly when their term maps agree.
#[derive(Clone)]
pub struct MultiPoly<C> {
    field: Field,
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> PartialEq for MultiPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.vars == other.vars && self.terms == other.terms
    }
}

impl<C: Scalar> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(field: Field, vars: Vars) -> Self {
        MultiPoly { field, vars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, vars: Vars, c: C) -> Self {
        let mut p = MultiPoly::zero(field, vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(field: Field, vars: Vars) -> Self {
        MultiPoly::constant(field, vars, C::one(field))
    }

    /// The single variable with flat index `k`.
    pub fn var(field: Field, vars: Vars, k: usize) -> Self {
        MultiPoly::monomial(field, vars, Monomial::var(vars.len(), k, 1), C::one(field))
    }

    pub fn t(field: Field, vars: Vars, i: usize) -> Result<Self> {
        Ok(MultiPoly::var(field, vars, vars.t_index(i)?))
    }

    pub fn x(field: Field, vars: Vars, i: usize) -> Result<Self> {
        Ok(MultiPoly::var(field, vars, vars.x_index(i)?))
    }

    pub fn monomial(field: Field, vars: Vars, m: Monomial, c: C) -> Self {
        let mut p = MultiPoly::zero(field, vars);
        p.add_term(m, c);
        p
    }

    /// Product X₁⋯X_n (or t₁⋯t_n) over a whole family.
    pub fn x_product(field: Field, vars: Vars) -> Self {
        let mut m = Monomial::one(vars.len());
        for k in vars.t..vars.len() {
            m.0[k] = 1;
        }
        MultiPoly::monomial(field, vars, m, C::one(field))
    }

    pub fn from_terms(field: Field, vars: Vars, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = MultiPoly::zero(field, vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }
    #[inline]
    pub fn vars(&self) -> Vars {
        self.vars
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }
    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }
    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }
    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> C {
        self.terms.get(&Monomial::one(self.vars.len())).cloned().unwrap_or_else(|| C::zero(self.field))
    }
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Adds c·m in place.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.0.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        big.add_assign(small);
        big
    }

    pub fn negated(&self) -> Self {
        self.map_coeffs(|c| c.negated())
    }

    pub fn minus(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.negated());
        }
        r
    }

    pub fn times(&self, o: &Self) -> Self {
        let mut r = MultiPoly::zero(self.field, self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.times(c2));
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MultiPoly::one(self.field, self.vars);
        for _ in 0..n {
            acc = acc.times(self);
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.field, self.vars);
        }
        self.map_coeffs(|x| x.times(c))
    }

    pub fn scale_fe(&self, a: Fe) -> Self {
        self.map_coeffs(|x| x.scale_fe(a))
    }

    /// Applies `g` to every coefficient, dropping zeros.
    pub fn map_coeffs<D: Scalar>(&self, g: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly {
            field: self.field,
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let d = g(c);
                    (!d.is_zero()).then(|| (m.clone(), d))
                })
                .collect(),
        }
    }

    /// Fallible coefficient map.
    pub fn try_map_coeffs<D: Scalar>(&self, g: impl Fn(&C) -> Result<D>) -> Result<MultiPoly<D>> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = g(c)?;
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Ok(MultiPoly { field: self.field, vars: self.vars, terms })
    }

    /// φ^k: raises every coefficient to the q^k-th power.
    pub fn frobenius_coeffs(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        self.map_coeffs(|c| c.frobenius_pow(k))
    }

    /// Raises the whole polynomial to the q^k-th power, using additivity of
    /// Frobenius in characteristic p.
    pub fn frobenius_power(&self, k: u32) -> Self {
        let qk = (self.field.q() as u32).pow(k);
        MultiPoly {
            field: self.field,
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0.iter().map(|&e| e * qk).collect()), c.frobenius_pow(k)))
                .collect(),
        }
    }

    /// Reinterprets the polynomial over a larger variable set; existing
    /// t- and X-variables keep their family positions.
    pub fn embed(&self, vars: Vars) -> Result<Self> {
        if vars.t < self.vars.t || vars.x < self.vars.x {
            return Err(Error::InvalidInput(format!(
                "cannot embed {:?} into smaller {:?}",
                self.vars, vars
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = Monomial::one(vars.len());
                e.0[..self.vars.t].copy_from_slice(&m.0[..self.vars.t]);
                e.0[vars.t..vars.t + self.vars.x].copy_from_slice(&m.0[self.vars.t..]);
                (e, c.clone())
            })
            .collect();
        Ok(MultiPoly { field: self.field, vars, terms })
    }

    /// Inverse of [`embed`](Self::embed): drops trailing variables of each
    /// family, which must not occur.
    pub fn restrict(&self, vars: Vars) -> Result<Self> {
        if vars.t > self.vars.t || vars.x > self.vars.x {
            return Err(Error::InvalidInput(format!("cannot restrict {:?} to larger {:?}", self.vars, vars)));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (t, x) = m.0.split_at(self.vars.t);
            if t[vars.t..].iter().chain(&x[vars.x..]).any(|&e| e != 0) {
                return Err(Error::InvalidInput("a dropped variable occurs".into()));
            }
            let e: Exps = t[..vars.t].iter().chain(&x[..vars.x]).copied().collect();
            terms.insert(Monomial(e), c.clone());
        }
        Ok(MultiPoly { field: self.field, vars, terms })
    }

    /// Largest exponent of the variable with flat index k.
    pub fn degree_in(&self, k: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[k]).max()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Formal partial derivative in the variable with flat index k.
    pub fn partial_derivative(&self, k: usize) -> Result<Self> {
        if k >= self.vars.len() {
            return Err(Error::InvalidVariable { index: k + 1, max: self.vars.len() });
        }
        let f = self.field;
        let mut r = MultiPoly::zero(f, self.vars);
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let factor = f.from_int(e as i64);
            if factor.is_zero() {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[k] -= 1;
            r.add_term(m2, c.scale_fe(factor));
        }
        Ok(r)
    }

    /// Partial derivative in X_i (1-based).
    pub fn partial_derivative_x(&self, i: usize) -> Result<Self> {
        self.partial_derivative(self.vars.x_index(i)?)
    }

    /// Simultaneous substitution of the variables with `Some` image.
    pub fn substitute(&self, images: &[Option<MultiPoly<C>>]) -> Self {
        assert_eq!(images.len(), self.vars.len());
        let target_vars = images.iter().flatten().map(|p| p.vars).next().unwrap_or(self.vars);
        let mut power_cache: Vec<BTreeMap<u32, MultiPoly<C>>> = vec![BTreeMap::new(); images.len()];
        let mut r = MultiPoly::zero(self.field, target_vars);
        for (m, c) in &self.terms {
            let mut kept = Monomial::one(target_vars.len());
            let mut acc = MultiPoly::constant(self.field, target_vars, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &images[k] {
                    None => kept.0[k] += e,
                    Some(img) => {
                        let pw = power_cache[k]
                            .entry(e)
                            .or_insert_with(|| img.pow(e))
                            .clone();
                        acc = acc.times(&pw);
                    }
                }
            }
            for (m2, c2) in acc.terms {
                r.add_term(m2.mul(&kept), c2);
            }
        }
        r
    }

    /// Leading (largest) term in the canonical order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Removes all terms for which `keep` is false.
    pub fn retain(&mut self, mut keep: impl FnMut(&Monomial, &C) -> bool) {
        self.terms.retain(|m, c| keep(m, c));
    }

    /// Checks that every exponent of the listed variables is a power of q
    /// (so the polynomial is F_q-linear in each of them).
    pub fn is_q_linear_in(&self, indices: &[usize]) -> bool {
        let q = self.field.q();
        self.terms.keys().all(|m| indices.iter().all(|&k| is_power_of(m.0[k], q)))
    }
}

pub(crate) fn is_power_of(mut e: u32, q: u32) -> bool {
    if e == 0 {
        return false;
    }
    while e % q == 0 {
        e /= q;
    }
    e == 1
}

/// log_q(e) for e a power of q.
pub(crate) fn log_q(mut e: u32, q: u32) -> Option<u32> {
    let mut k = 0;
    if e == 0 {
        return None;
    }
    while e % q == 0 {
        e /= q;
        k += 1;
    }
    (e == 1).then_some(k)
}

/// Polynomials with coefficients in K = F_q(θ).
pub type KPoly = MultiPoly<Frac>;
/// Polynomials with coefficients in A = F_q[θ].
pub type APoly = MultiPoly<ThetaPoly>;

impl MultiPoly<ThetaPoly> {
    pub fn to_k(&self) -> KPoly {
        self.map_coeffs(|c| Frac::from_poly(c.clone()))
    }
    /// Divides every coefficient by d, producing K-coefficients.
    pub fn div_poly(&self, d: &ThetaPoly) -> Result<KPoly> {
        self.try_map_coeffs(|c| Frac::new(c.clone(), d.clone()))
    }
    /// Exact division of every coefficient by d, if d divides all of them.
    pub fn exact_div(&self, d: &ThetaPoly) -> Option<APoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.exact_div(d)?);
        }
        Some(MultiPoly { field: self.field, vars: self.vars, terms })
    }
    /// Multiplies by θ^e for each exponent of each t_i in `subset`, dropping
    /// those variables' exponents.
    pub fn eval_t_at_theta(&self, subset: &[usize]) -> Result<APoly> {
        let mut r = MultiPoly::zero(self.field, self.vars);
        for &i in subset {
            self.vars.t_index(i)?;
        }
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut shift = 0usize;
            for &i in subset {
                shift += m2.0[i - 1] as usize;
                m2.0[i - 1] = 0;
            }
            r.add_term(m2, c.shift(shift));
        }
        Ok(r)
    }
}

impl KPoly {
    /// True when every coefficient lies in A.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Frac::is_integral)
    }
    /// The polynomial over A, if every coefficient is integral.
    pub fn to_a(&self) -> Option<APoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.as_poly()?.clone());
        }
        Some(MultiPoly { field: self.field, vars: self.vars, terms })
    }
    /// Monic least common denominator of all coefficients.
    pub fn common_denominator(&self) -> ThetaPoly {
        let mut l = ThetaPoly::one(self.field);
        for c in self.terms.values() {
            if !c.den().is_one() {
                let g = ThetaPoly::gcd(&l, c.den());
                l = &l * &c.den().exact_div(&g).unwrap();
            }
        }
        l
    }
    pub fn div_poly(&self, d: &ThetaPoly) -> Result<KPoly> {
        self.try_map_coeffs(|c| c.div_poly(d))
    }
    pub fn mul_poly(&self, d: &ThetaPoly) -> KPoly {
        self.map_coeffs(|c| c.mul_poly(d))
    }
    /// Replaces each t_i in `subset` (1-based) by θ.
    pub fn eval_t_at_theta(&self, subset: &[usize]) -> Result<KPoly> {
        for &i in subset {
            self.vars.t_index(i)?;
        }
        let theta = ThetaPoly::theta(self.field);
        let mut r = MultiPoly::zero(self.field, self.vars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut shift = 0u64;
            for &i in subset {
                shift += m2.0[i - 1] as u64;
                m2.0[i - 1] = 0;
            }
            r.add_term(m2, c.mul_poly(&theta.pow(shift)));
        }
        Ok(r)
    }
}

/// a(t_i): the polynomial a with θ replaced by t_i; coefficients in F_q.
pub fn subst_theta<C: Scalar>(a: &ThetaPoly, vars: Vars, i: usize) -> Result<MultiPoly<C>> {
    let k = vars.t_index(i)?;
    let f = a.field();
    let mut r = MultiPoly::zero(f, vars);
    for (e, &c) in a.coeffs().iter().enumerate() {
        r.add_term(Monomial::var(vars.len(), k, e as u32), C::from_fe(f, c));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn kp(f: Field, vars: Vars, terms: &[(&[u32], &[i64])]) -> KPoly {
        MultiPoly::from_terms(
            f,
            vars,
            terms.iter().map(|(e, c)| {
                (Monomial(e.iter().copied().collect()), Frac::from_poly(ThetaPoly::from_ints(f, c)))
            }),
        )
    }

    #[test]
    fn grlex_order_puts_xs_last() {
        let v = Vars { t: 2, x: 2 };
        let t1 = Monomial::var(v.len(), 0, 1);
        let t2 = Monomial::var(v.len(), 1, 1);
        let x1 = Monomial::var(v.len(), 2, 1);
        let t1sq = Monomial::var(v.len(), 0, 2);
        assert!(t1 < t2 && t2 < x1 && x1 < t1sq);
    }

    #[test]
    fn subst_theta_examples() {
        let f = Fq::with_q(3).unwrap();
        let v = Vars::t_only(2);
        let a = ThetaPoly::from_ints(f, &[1, 1, 1]);
        let p: KPoly = subst_theta(&a, v, 1).unwrap();
        assert_eq!(p, kp(f, v, &[(&[2, 0], &[1]), (&[1, 0], &[1]), (&[0, 0], &[1])]));
        let one: KPoly = subst_theta(&ThetaPoly::one(f), v, 1).unwrap();
        assert_eq!(one, KPoly::one(f, v));
        let cube: KPoly = subst_theta(&ThetaPoly::from_ints(f, &[0, 0, 0, 1]), v, 2).unwrap();
        assert_eq!(cube, kp(f, v, &[(&[0, 3], &[1])]));
        assert!(matches!(
            subst_theta::<Frac>(&a, v, 3),
            Err(Error::InvalidVariable { index: 3, max: 2 })
        ));
    }

    #[test]
    fn eval_t_at_theta_examples() {
        let f = Fq::with_q(3).unwrap();
        let v = Vars::t_only(2);
        // t1 − θ at t1 = θ
        let p = kp(f, v, &[(&[1, 0], &[1]), (&[0, 0], &[0, 2])]);
        assert!(p.eval_t_at_theta(&[1]).unwrap().is_zero());
        // t1 t2 at t2 = θ
        let p = kp(f, v, &[(&[1, 1], &[1])]);
        assert_eq!(p.eval_t_at_theta(&[2]).unwrap(), kp(f, v, &[(&[1, 0], &[0, 1])]));
    }

    #[test]
    fn partial_derivative_examples() {
        let f = Fq::with_q(3).unwrap();
        let v = Vars::x_only(2);
        let x1x2 = kp(f, v, &[(&[1, 1], &[1])]);
        assert_eq!(x1x2.partial_derivative_x(2).unwrap(), kp(f, v, &[(&[1, 0], &[1])]));
        let x1q = kp(f, v, &[(&[3, 0], &[1])]);
        assert!(x1q.partial_derivative_x(1).unwrap().is_zero());
        let p = kp(f, v, &[(&[2, 1], &[1])]);
        assert_eq!(p.partial_derivative_x(1).unwrap(), kp(f, v, &[(&[1, 1], &[2])]));
    }

    #[test]
    fn substitution_and_embedding() {
        let f = Fq::with_q(2).unwrap();
        let v = Vars::x_only(2);
        let x1 = KPoly::x(f, v, 1).unwrap();
        let x2 = KPoly::x(f, v, 2).unwrap();
        let p = x1.times(&x2).plus(&x1);
        // X1 ↦ X1 + X2
        let img = x1.plus(&x2);
        let r = p.substitute(&[Some(img.clone()), None]);
        assert_eq!(r, img.times(&x2).plus(&img));
        let e = p.embed(Vars { t: 1, x: 3 }).unwrap();
        assert_eq!(e.vars(), Vars { t: 1, x: 3 });
        assert_eq!(e.len(), 2);
    }
}
