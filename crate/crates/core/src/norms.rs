//! The sup norm on K[X] through the orthogonal basis H_N, the Gauss norm on
//! K[t], and the action of K[t][z] on K[X][[Z]].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::carlitz::carlitz_in;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::frac::Frac;
use crate::multipoly::{KPoly, Monomial, MultiPoly, Vars};
use crate::poly::ThetaPoly;
use crate::scalar::Scalar;
use crate::series::{Series, SeriesVar, ZSeries};

/// A value q^{num/(q−1)}, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormValue {
    Zero,
    Pow { num: i64, q: u32 },
}

impl NormValue {
    /// q^{k/(q−1)}.
    pub fn pow(q: u32, k: i64) -> NormValue {
        NormValue::Pow { num: k, q }
    }

    /// q^n for an integer n.
    pub fn int_pow(q: u32, n: i64) -> NormValue {
        NormValue::Pow { num: n * (q as i64 - 1), q }
    }

    /// The exponent r with value q^r, as (numerator, denominator q − 1).
    pub fn exponent(&self) -> Option<(i64, i64)> {
        match *self {
            NormValue::Zero => None,
            NormValue::Pow { num, q } => Some((num, q as i64 - 1)),
        }
    }

    /// ⌈r⌉ for the value q^r.
    pub fn ceil_exponent(&self) -> Option<i64> {
        self.exponent().map(|(n, d)| n.div_euclid(d) + (n.rem_euclid(d) != 0) as i64)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Zero)
    }

    pub fn mul(&self, o: &NormValue) -> NormValue {
        match (*self, *o) {
            (NormValue::Pow { num: a, q }, NormValue::Pow { num: b, q: q2 }) => {
                assert_eq!(q, q2, "norms for different q");
                NormValue::Pow { num: a + b, q }
            }
            _ => NormValue::Zero,
        }
    }

    pub fn max(self, o: NormValue) -> NormValue {
        if self >= o {
            self
        } else {
            o
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NormValue::Zero, NormValue::Zero) => Ordering::Equal,
            (NormValue::Zero, _) => Ordering::Less,
            (_, NormValue::Zero) => Ordering::Greater,
            (NormValue::Pow { num: a, .. }, NormValue::Pow { num: b, .. }) => a.cmp(b),
        }
    }
}

impl fmt::Display for NormValue {
    /// `q^(a/(q-1))`, followed by the plain value when the exponent is an
    /// integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormValue::Zero => write!(f, "0"),
            NormValue::Pow { num, q } => {
                let d = q as i64 - 1;
                write!(f, "q^({num}/{d})")?;
                if num % d == 0 {
                    let e = num / d;
                    if e >= 0 {
                        write!(f, " = {}", (q as u128).pow(e as u32))?;
                    } else {
                        write!(f, " = 1/{}", (q as u128).pow((-e) as u32))?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// l_q(N): the sum of the base-q digits of N.
pub fn digit_sum(mut n: u64, q: u32) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % q as u64;
        n /= q as u64;
    }
    s
}

/// |x|_∞ as a norm value.
pub fn abs_frac(x: &Frac) -> NormValue {
    let q = x.field().q();
    match x.degree() {
        None => NormValue::Zero,
        Some(d) => NormValue::int_pow(q, d),
    }
}

/// One-variable polynomial as dense coefficients (index = exponent).
type Dense = Vec<Frac>;

/// Cached H_N and the H-expansions of X^n, per field.
struct HCache {
    h: HashMap<u32, Dense>,
    /// Expansion of X^n: list of (m, coefficient of H_m).
    inv: HashMap<u32, Arc<Vec<(u32, Frac)>>>,
}

static H_CACHES: OnceLock<Mutex<Vec<(Field, Arc<Mutex<HCache>>)>>> = OnceLock::new();

fn h_cache(f: Field) -> Arc<Mutex<HCache>> {
    let reg = H_CACHES.get_or_init(|| Mutex::new(Vec::new()));
    let mut g = reg.lock().unwrap();
    if let Some((_, c)) = g.iter().find(|(k, _)| std::ptr::eq(*k, f)) {
        return c.clone();
    }
    let c = Arc::new(Mutex::new(HCache { h: HashMap::new(), inv: HashMap::new() }));
    g.push((f, c.clone()));
    c
}

fn dense_mul(f: Field, a: &Dense, b: &Dense) -> Dense {
    let mut r = vec![Frac::zero(f); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                r[i + j] = &r[i + j] + &(x * y);
            }
        }
    }
    r
}

/// C_{θ^i}(X) as dense coefficients.
fn carlitz_theta_power(f: Field, i: u32) -> Dense {
    let p: KPoly = carlitz_in(&ThetaPoly::theta(f).pow(i as u64), Vars::x_only(1), 1).unwrap();
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut d = vec![Frac::zero(f); deg + 1];
    for (m, c) in p.terms() {
        d[m.exps()[0] as usize] = c.clone();
    }
    d
}

impl HCache {
    fn h(&mut self, f: Field, n: u32) -> &Dense {
        let q = f.q();
        self.h.entry(n).or_insert_with(|| {
            let mut acc = vec![Frac::one(f)];
            let (mut k, mut i) = (n, 0u32);
            while k > 0 {
                let digit = k % q;
                if digit > 0 {
                    let c = carlitz_theta_power(f, i);
                    for _ in 0..digit {
                        acc = dense_mul(f, &acc, &c);
                    }
                }
                k /= q;
                i += 1;
            }
            acc
        })
    }

    fn expand_power(&mut self, f: Field, n: u32) -> Arc<Vec<(u32, Frac)>> {
        if let Some(v) = self.inv.get(&n) {
            return v.clone();
        }
        // triangular elimination: H_m is monic of degree m
        let mut rest: BTreeMap<u32, Frac> = BTreeMap::new();
        rest.insert(n, Frac::one(f));
        let mut out = Vec::new();
        while let Some((&m, c)) = rest.iter().next_back() {
            let c = c.clone();
            out.push((m, c.clone()));
            let h = self.h(f, m).clone();
            for (e, hc) in h.iter().enumerate() {
                if hc.is_zero() {
                    continue;
                }
                let e = e as u32;
                let v = rest.entry(e).or_insert_with(|| Frac::zero(f));
                *v = &*v - &(&c * hc);
                if v.is_zero() {
                    rest.remove(&e);
                }
            }
        }
        out.sort_by_key(|x| x.0);
        let v = Arc::new(out);
        self.inv.insert(n, v.clone());
        v
    }
}

/// H_N(X) = ∏_i C_{θ^i}(X)^{N_i} over the base-q digits N_i of N, as a
/// polynomial in X_1.
pub fn h_poly(f: Field, n: u32) -> KPoly {
    let c = h_cache(f);
    let mut g = c.lock().unwrap();
    let d = g.h(f, n);
    MultiPoly::from_terms(
        f,
        Vars::x_only(1),
        d.iter().enumerate().map(|(e, c)| (Monomial::var(1, 0, e as u32), c.clone())),
    )
}

/// Coefficients f_N of F = Σ f_N ∏ H_{N_i}(X_i).
#[derive(Clone, Debug, PartialEq)]
pub struct HBasisExpansion {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Frac>,
}

impl HBasisExpansion {
    /// Evaluates Σ f_N ∏ H_{N_i}(X_i).
    pub fn to_multipoly(&self, f: Field) -> KPoly {
        let vars = Vars::x_only(self.nvars);
        let mut r = MultiPoly::zero(f, vars);
        for (n, c) in &self.terms {
            let mut p = MultiPoly::constant(f, vars, c.clone());
            for (i, &ni) in n.iter().enumerate() {
                let h = h_poly(f, ni);
                let hi = MultiPoly::from_terms(
                    f,
                    vars,
                    h.terms().map(|(m, c)| (Monomial::var(vars.len(), i, m.exps()[0]), c.clone())),
                );
                p = p.times(&hi);
            }
            r.add_assign(&p);
        }
        r
    }
}

/// The unique expansion of F ∈ K[X] in the basis ∏ H_{N_i}(X_i).
///
/// The basis is a tensor product of one-variable bases, so the change of
/// basis is done one variable at a time: each X_i^n is replaced by its
/// expansion Σ_m c_{n,m} H_m(X_i), found by triangular elimination against
/// the monic H_m. The result equals what leading-term elimination on whole
/// products would produce, since the expansion is unique.
pub fn h_expand(p: &KPoly) -> Result<HBasisExpansion> {
    let f = p.field();
    let v = p.vars();
    if p.terms().any(|(m, _)| m.exps()[..v.t].iter().any(|&e| e != 0)) {
        return Err(Error::InvalidInput("h_expand takes a polynomial in X only".into()));
    }
    let mut cur: BTreeMap<Vec<u32>, Frac> =
        p.terms().map(|(m, c)| (m.exps()[v.t..].to_vec(), c.clone())).collect();
    let cache = h_cache(f);
    for axis in 0..v.x {
        let mut next: BTreeMap<Vec<u32>, Frac> = BTreeMap::new();
        for (e, c) in cur {
            let exp = cache.lock().unwrap().expand_power(f, e[axis]);
            for (m, hc) in exp.iter() {
                let mut key = e.clone();
                key[axis] = *m;
                let val = next.entry(key.clone()).or_insert_with(|| Frac::zero(f));
                *val = &*val + &(&c * hc);
                if val.is_zero() {
                    next.remove(&key);
                }
            }
        }
        cur = next;
    }
    Ok(HBasisExpansion { nvars: v.x, terms: cur })
}

/// ‖F‖ = max_N |f_N| q^{(l_q(N_1)+⋯+l_q(N_s))/(q−1)}.
pub fn sup_norm(p: &KPoly) -> Result<NormValue> {
    let q = p.field().q();
    let e = h_expand(p)?;
    Ok(e.terms
        .iter()
        .map(|(n, c)| {
            let digits: u64 = n.iter().map(|&k| digit_sum(k as u64, q)).sum();
            abs_frac(c).mul(&NormValue::pow(q, digits as i64))
        })
        .fold(NormValue::Zero, NormValue::max))
}

/// Gauss norm: the largest |coefficient|_∞.
pub fn gauss_norm<C: Scalar>(p: &MultiPoly<C>, abs: impl Fn(&C) -> NormValue) -> NormValue {
    p.terms().map(|(_, c)| abs(c)).fold(NormValue::Zero, NormValue::max)
}

/// Gauss norm of a polynomial over K.
pub fn gauss_norm_k(p: &KPoly) -> NormValue {
    gauss_norm(p, abs_frac)
}

/// C_{θ^n}(X_1).
fn c_theta_pow(f: Field, n: u32) -> KPoly {
    carlitz_in(&ThetaPoly::theta(f).pow(n as u64), Vars::x_only(1), 1).unwrap()
}

/// t^e . F: X_j ↦ C_{θ^{e_j}}(X_j) for each j.
fn t_monomial_action(m: &Monomial, tvars: usize, big: &KPoly) -> KPoly {
    let f = big.field();
    let v = big.vars();
    let mut images: Vec<Option<KPoly>> = vec![None; v.len()];
    for j in 0..tvars {
        let e = m.exps()[j];
        if e > 0 {
            let c = c_theta_pow(f, e);
            let k = v.t + j;
            images[k] = Some(MultiPoly::from_terms(
                f,
                v,
                c.terms().map(|(mm, cc)| (Monomial::var(v.len(), k, mm.exps()[0]), cc.clone())),
            ));
        }
    }
    if images.iter().all(Option::is_none) {
        return big.clone();
    }
    big.substitute(&images)
}

/// f.F for f ∈ K[t_1..t_s] and F ∈ K[X_1..X_r], r ≥ s: t_j acts through
/// X_j ↦ C_θ(X_j).
pub fn dot_action(small: &KPoly, big: &KPoly) -> Result<KPoly> {
    let (sv, bv) = (small.vars(), big.vars());
    if sv.x != 0 {
        return Err(Error::InvalidInput("the acting polynomial must be in t only".into()));
    }
    if bv.t != 0 {
        return Err(Error::InvalidInput("the acted-on polynomial must be in X only".into()));
    }
    if sv.t > bv.x {
        return Err(Error::InvalidInput(format!(
            "{} t-variables cannot act on {} X-variables",
            sv.t, bv.x
        )));
    }
    let mut r = MultiPoly::zero(big.field(), bv);
    for (m, c) in small.terms() {
        r.add_assign(&t_monomial_action(m, sv.t, big).scale(c));
    }
    Ok(r)
}

/// (Σ f_k z^k).(Σ F_n Z^n) = Σ (f_k.F_n) Z^{n q^k}. Both series must be
/// exact.
pub fn dot_action_series(small: &ZSeries, big: &ZSeries) -> Result<ZSeries> {
    if !small.is_exact() || !big.is_exact() {
        return Err(Error::Precondition("the dot action is applied to exact series".into()));
    }
    let f = big.field();
    let q = f.q() as u64;
    let mut r = Series::zero(f, big.vars(), SeriesVar::Upper, None);
    for (k, fk) in small.coeffs() {
        for (n, big_n) in big.coeffs() {
            r.add_coeff(n * q.pow(k as u32), &dot_action(fk, big_n)?);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::text::parse_poly;

    #[test]
    fn h_basis_small() {
        let f = Fq::with_q(3).unwrap();
        assert_eq!(h_poly(f, 0), MultiPoly::one(f, Vars::x_only(1)));
        assert_eq!(h_poly(f, 1), parse_poly(f, "X1", None).unwrap());
        assert_eq!(h_poly(f, 3), parse_poly(f, "th*X1 + X1^3", None).unwrap());
        assert_eq!(h_poly(f, 4), parse_poly(f, "X1*(th*X1 + X1^3)", None).unwrap());
    }

    #[test]
    fn expand_x_to_the_q() {
        let f = Fq::with_q(3).unwrap();
        let e = h_expand(&parse_poly(f, "X1^3", None).unwrap()).unwrap();
        let want: BTreeMap<Vec<u32>, Frac> =
            [(vec![1], -&Frac::theta(f)), (vec![3], Frac::one(f))].into_iter().collect();
        assert_eq!(e.terms, want);
        let h5 = h_expand(&h_poly(f, 5)).unwrap();
        assert_eq!(h5.terms.len(), 1);
        assert_eq!(h5.terms[&vec![5]], Frac::one(f));
    }

    #[test]
    fn norm_of_monomials() {
        let f = Fq::with_q(3).unwrap();
        let p = parse_poly(f, "X1^2", None).unwrap();
        assert_eq!(sup_norm(&p).unwrap(), NormValue::pow(3, 2));
        assert_eq!(sup_norm(&p).unwrap().to_string(), "q^(2/2) = 3");
        assert_eq!(sup_norm(&MultiPoly::zero(f, Vars::x_only(1))).unwrap(), NormValue::Zero);
    }

    #[test]
    fn gauss_norms() {
        let f = Fq::with_q(2).unwrap();
        assert_eq!(gauss_norm_k(&parse_poly(f, "t1 - th", None).unwrap()), NormValue::int_pow(2, 1));
        assert_eq!(gauss_norm_k(&parse_poly(f, "1/th*t1^2", None).unwrap()), NormValue::int_pow(2, -1));
    }

    #[test]
    fn dot_action_examples() {
        let f = Fq::with_q(3).unwrap();
        let t1 = parse_poly(f, "t1", None).unwrap();
        let x1 = parse_poly(f, "X1", None).unwrap();
        assert_eq!(dot_action(&t1, &x1).unwrap(), parse_poly(f, "th*X1 + X1^3", None).unwrap());
        let t1sq = parse_poly(f, "t1^2", None).unwrap();
        let x12 = parse_poly(f, "X1*X2", None).unwrap();
        let want = h_poly(f, 9).embed(Vars::x_only(2)).unwrap().times(&parse_poly(f, "X2", Some(Vars::x_only(2))).unwrap());
        assert_eq!(dot_action(&t1sq, &x12).unwrap(), want);
    }
}
