//! The Carlitz module C (C_θ = θ + τ), the sequences D_i and l_i, the
//! polynomials b_d(t), and the twisted operators φ, τ, τ_z with the
//! operators exp_z and log_z built from them.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::frac::Frac;
use crate::multipoly::{KPoly, Monomial, MultiPoly, Vars};
use crate::poly::ThetaPoly;
use crate::scalar::Scalar;
use crate::series::{Series, ZSeries};

/// Memoized D_i and l_i for one field. Extension happens under a lock, so
/// concurrent readers always observe the same values.
pub struct CarlitzTables {
    field: Field,
    d: Mutex<Vec<ThetaPoly>>,
    l: Mutex<Vec<ThetaPoly>>,
}

static TABLES: OnceLock<Mutex<Vec<&'static CarlitzTables>>> = OnceLock::new();

impl CarlitzTables {
    /// The shared tables of `f`.
    pub fn of(f: Field) -> &'static CarlitzTables {
        let reg = TABLES.get_or_init(|| Mutex::new(Vec::new()));
        let mut g = reg.lock().unwrap();
        if let Some(t) = g.iter().find(|t| std::ptr::eq(t.field, f)) {
            return t;
        }
        let t: &'static CarlitzTables = Box::leak(Box::new(CarlitzTables {
            field: f,
            d: Mutex::new(vec![ThetaPoly::one(f)]),
            l: Mutex::new(vec![ThetaPoly::one(f)]),
        }));
        g.push(t);
        t
    }

    /// θ^{q^i} − θ.
    fn bracket(&self, i: usize) -> ThetaPoly {
        let f = self.field;
        let qi = (f.q() as usize).pow(i as u32);
        &ThetaPoly::monomial(f, Fe::ONE, qi) - &ThetaPoly::theta(f)
    }

    /// D_i = (θ^{q^i} − θ) D_{i−1}^q.
    pub fn d(&self, i: usize) -> ThetaPoly {
        let mut v = self.d.lock().unwrap();
        while v.len() <= i {
            let k = v.len();
            let next = &self.bracket(k) * &v[k - 1].frobenius_pow(1);
            v.push(next);
        }
        v[i].clone()
    }

    /// l_i = (θ − θ^{q^i}) l_{i−1}.
    pub fn l(&self, i: usize) -> ThetaPoly {
        let mut v = self.l.lock().unwrap();
        while v.len() <= i {
            let k = v.len();
            let next = &(-&self.bracket(k)) * &v[k - 1];
            v.push(next);
        }
        v[i].clone()
    }
}

pub fn carlitz_d(f: Field, i: usize) -> ThetaPoly {
    CarlitzTables::of(f).d(i)
}

pub fn carlitz_l(f: Field, i: usize) -> ThetaPoly {
    CarlitzTables::of(f).l(i)
}

/// ∏_{j=1}^{d} (θ^{q^j} − θ) = (−1)^d l_d, the monic lcm of all monic
/// polynomials of degree d.
pub fn lcm_monic(f: Field, d: usize) -> ThetaPoly {
    carlitz_l(f, d).to_monic()
}

/// The coefficients ψ_0(a), …, ψ_{deg a}(a) of C_a(X) = Σ ψ_k(a) X^{q^k},
/// built from C_{θ^{j+1}} = C_θ ∘ C_{θ^j}.
pub fn carlitz_coeffs(a: &ThetaPoly) -> Vec<ThetaPoly> {
    let f = a.field();
    let Some(deg) = a.deg() else { return Vec::new() };
    let theta = ThetaPoly::theta(f);
    let mut power = vec![ThetaPoly::one(f)];
    let mut acc = vec![ThetaPoly::zero(f); deg + 1];
    for j in 0..=deg {
        let c = a.coeff(j);
        if !c.is_zero() {
            for (k, p) in power.iter().enumerate() {
                acc[k] = &acc[k] + &p.scale(c);
            }
        }
        if j < deg {
            // (θ + τ) ∘ Σ c_k τ^k = Σ (θ c_k + c_{k−1}^q) τ^k
            let mut next = Vec::with_capacity(power.len() + 1);
            for k in 0..=power.len() {
                let mut v = if k < power.len() { &theta * &power[k] } else { ThetaPoly::zero(f) };
                if k > 0 {
                    v = &v + &power[k - 1].frobenius_pow(1);
                }
                next.push(v);
            }
            power = next;
        }
    }
    acc
}

/// ψ_k(a): the coefficient of X^{q^k} in C_a(X).
pub fn psi(k: usize, a: &ThetaPoly) -> ThetaPoly {
    carlitz_coeffs(a).into_iter().nth(k).unwrap_or_else(|| ThetaPoly::zero(a.field()))
}

/// An F_q-linear polynomial Σ c_n ∏ X_i^{q^{n_i}}, keyed by (n_1, …, n_s).
#[derive(Clone, Debug, PartialEq)]
pub struct QLinearPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Frac>,
}

impl QLinearPoly {
    pub fn new(field: Field, nvars: usize) -> Self {
        QLinearPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, n: Vec<u32>, c: Frac) {
        assert_eq!(n.len(), self.nvars);
        let e = self.terms.entry(n.clone()).or_insert_with(|| Frac::zero(self.field));
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Frac> {
        &self.terms
    }

    pub fn coeff(&self, n: &[u32]) -> Frac {
        self.terms.get(n).cloned().unwrap_or_else(|| Frac::zero(self.field))
    }

    /// Expands into a polynomial in X_1..X_s.
    pub fn to_multipoly(&self) -> KPoly {
        let q = self.field.q();
        let vars = Vars::x_only(self.nvars);
        MultiPoly::from_terms(
            self.field,
            vars,
            self.terms.iter().map(|(n, c)| {
                (Monomial(n.iter().map(|&k| q.pow(k)).collect()), c.clone())
            }),
        )
    }

    /// Reads back a polynomial in X-variables only; every exponent must be
    /// a power of q.
    pub fn from_multipoly(p: &KPoly) -> Result<Self> {
        let f = p.field();
        let v = p.vars();
        let mut r = QLinearPoly::new(f, v.x);
        for (m, c) in p.terms() {
            if m.exps()[..v.t].iter().any(|&e| e != 0) {
                return Err(Error::NonLinearInput("t-variables present".into()));
            }
            let n = m.exps()[v.t..]
                .iter()
                .map(|&e| crate::multipoly::log_q(e, f.q()))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| Error::NonLinearInput(format!("exponent {:?}", m)))?;
            r.add_term(n, c.clone());
        }
        Ok(r)
    }
}

/// C_a(X) as a one-variable F_q-linear polynomial.
pub fn carlitz_poly(a: &ThetaPoly) -> QLinearPoly {
    let mut r = QLinearPoly::new(a.field(), 1);
    for (k, c) in carlitz_coeffs(a).into_iter().enumerate() {
        if !c.is_zero() {
            r.add_term(vec![k as u32], Frac::from_poly(c));
        }
    }
    r
}

/// C_a(X_i) inside the polynomial ring with variables `vars`.
pub fn carlitz_in<C: Scalar>(a: &ThetaPoly, vars: Vars, i: usize) -> Result<MultiPoly<C>> {
    let f = a.field();
    let k = vars.x_index(i)?;
    let q = f.q();
    let mut r = MultiPoly::zero(f, vars);
    for (n, c) in carlitz_coeffs(a).into_iter().enumerate() {
        r.add_term(Monomial::var(vars.len(), k, q.pow(n as u32)), C::from_poly(&c));
    }
    Ok(r)
}

/// a*F: simultaneous substitution X_i ↦ C_a(X_i).
pub fn carlitz_action<C: Scalar>(a: &ThetaPoly, p: &MultiPoly<C>) -> MultiPoly<C> {
    let v = p.vars();
    let images: Vec<Option<MultiPoly<C>>> = (0..v.len())
        .map(|k| (k >= v.t).then(|| carlitz_in(a, v, k - v.t + 1).unwrap()))
        .collect();
    p.substitute(&images)
}

/// a*F on a series in Z: also Z ↦ Z^{q^{deg a}}.
pub fn carlitz_action_series<C: Scalar>(a: &ThetaPoly, s: &Series<C>) -> Result<Series<C>> {
    let deg = a.deg().ok_or(Error::InvalidInput("action of 0 on Z is undefined".into()))?;
    let acted = s.map_coeffs(|p| carlitz_action(a, p));
    Ok(acted.substitute_power((s.field().q() as u64).pow(deg as u32)))
}

/// Coefficients (in t, lowest first) of b_d(t) = ∏_{k=0}^{d−1} (t − θ^{q^k}).
pub fn b_coeffs(f: Field, d: usize) -> Vec<ThetaPoly> {
    let mut c = vec![ThetaPoly::one(f)];
    let q = f.q() as usize;
    for k in 0..d {
        let root = ThetaPoly::monomial(f, Fe::ONE, q.pow(k as u32));
        let mut next = vec![ThetaPoly::zero(f); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + x;
            next[i] = &next[i] - &(x * &root);
        }
        c = next;
    }
    c
}

/// b_d(t_i) in the ring with variables `vars`.
pub fn b_poly<C: Scalar>(f: Field, d: usize, vars: Vars, i: usize) -> Result<MultiPoly<C>> {
    let k = vars.t_index(i)?;
    let mut r = MultiPoly::zero(f, vars);
    for (e, c) in b_coeffs(f, d).into_iter().enumerate() {
        r.add_term(Monomial::var(vars.len(), k, e as u32), C::from_poly(&c));
    }
    Ok(r)
}

/// b_d(t_1)⋯b_d(t_s) over all t-variables of `vars`.
pub fn b_product<C: Scalar>(f: Field, d: usize, vars: Vars) -> MultiPoly<C> {
    let mut r = MultiPoly::one(f, vars);
    if d == 0 {
        return r;
    }
    for i in 1..=vars.t {
        r = r.times(&b_poly(f, d, vars, i).unwrap());
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    Phi,
    Tau,
    TauZ,
}

/// One of φ^d, τ^d, τ_z^d, acting on the t-variables of its argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistOperatorSpec {
    pub kind: TwistKind,
    pub power: u32,
}

fn check_t_only<C: Scalar>(p: &MultiPoly<C>) -> Result<()> {
    let v = p.vars();
    if p.terms().any(|(m, _)| m.exps()[v.t..].iter().any(|&e| e != 0)) {
        return Err(Error::InvalidInput("twisted operators act on t-polynomials only".into()));
    }
    Ok(())
}

/// φ^d(f).
pub fn phi_pow<C: Scalar>(p: &MultiPoly<C>, d: u32) -> Result<MultiPoly<C>> {
    check_t_only(p)?;
    Ok(p.frobenius_coeffs(d))
}

/// τ^d(f) = b_d(t_1)⋯b_d(t_s) φ^d(f).
pub fn tau_pow<C: Scalar>(p: &MultiPoly<C>, d: u32) -> Result<MultiPoly<C>> {
    check_t_only(p)?;
    if d == 0 {
        return Ok(p.clone());
    }
    let b = b_product(p.field(), d as usize, p.vars());
    Ok(p.frobenius_coeffs(d).times(&b))
}

/// τ_z^d(f) = z^d b_d(t_1)⋯b_d(t_s) φ^d(f), coefficientwise on a series.
pub fn tau_z_pow<C: Scalar>(s: &Series<C>, d: u32) -> Result<Series<C>> {
    for (_, c) in s.coeffs() {
        check_t_only(c)?;
    }
    if d == 0 {
        return Ok(s.clone());
    }
    let b = b_product(s.field(), d as usize, s.vars());
    Ok(s.map_coeffs(|c| c.frobenius_coeffs(d).times(&b)).shift(d as u64))
}

/// Applies a twist to a polynomial (`TauZ` needs a series; see [`twist_series`]).
pub fn twist<C: Scalar>(spec: TwistOperatorSpec, p: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    match spec.kind {
        TwistKind::Phi => phi_pow(p, spec.power),
        TwistKind::Tau => tau_pow(p, spec.power),
        TwistKind::TauZ => Err(Error::InvalidInput("tau_z acts on series".into())),
    }
}

pub fn twist_series<C: Scalar>(spec: TwistOperatorSpec, s: &Series<C>) -> Result<Series<C>> {
    match spec.kind {
        TwistKind::TauZ => tau_z_pow(s, spec.power),
        _ => s.try_map_coeffs(|c| twist(spec, c)),
    }
}

/// Σ_j τ_z^j(f)/w_j for j below the precision of f.
fn twisted_sum(f: &ZSeries, weight: impl Fn(usize) -> ThetaPoly) -> Result<ZSeries> {
    let prec = f.prec().ok_or_else(|| {
        Error::Precondition("exp_z/log_z need a series of finite precision".into())
    })?;
    let mut r = Series::zero(f.field(), f.vars(), f.var(), Some(prec));
    let start = f.order().unwrap_or(prec);
    for j in 0..prec.saturating_sub(start) {
        let t = tau_z_pow(&f.truncate(prec - j), j as u32)?;
        r = r.plus(&t.div_theta_poly(&weight(j as usize))?);
    }
    Ok(r)
}

/// exp_z = Σ_j τ_z^j / D_j, with s = number of t-variables of f.
pub fn exp_z(f: &ZSeries) -> Result<ZSeries> {
    let t = CarlitzTables::of(f.field());
    twisted_sum(f, |j| t.d(j))
}

/// log_z = Σ_j τ_z^j / l_j.
pub fn log_z(f: &ZSeries) -> Result<ZSeries> {
    let t = CarlitzTables::of(f.field());
    twisted_sum(f, |j| t.l(j))
}

/// log_{N,z} = Σ_k τ_z^k / l_k^N (N may be negative).
pub fn log_n_z(n: i64, f: &ZSeries) -> Result<ZSeries> {
    let fld = f.field();
    let t = CarlitzTables::of(fld);
    let prec = f.prec().ok_or_else(|| Error::Precondition("log_{N,z} needs finite precision".into()))?;
    let mut r = Series::zero(fld, f.vars(), f.var(), Some(prec));
    let start = f.order().unwrap_or(prec);
    for k in 0..prec.saturating_sub(start) {
        let tk = tau_z_pow(&f.truncate(prec - k), k as u32)?;
        let lk = t.l(k as usize).pow(n.unsigned_abs());
        let term = if n >= 0 { tk.div_theta_poly(&lk)? } else { tk.mul_theta_poly(&lk) };
        r = r.plus(&term);
    }
    Ok(r)
}
