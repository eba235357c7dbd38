//! Anderson-Stark units σ_s(t,z) = exp_z(L(1,s,z)) ∈ A[t,z], computed from
//! the L-series and, independently, from the special polynomial 𝔖_s.
//!
//! On the t-side the twisted operator is diagonal in the basis
//! ∏ b_{k_i}(t_i): since b_j(t)·φ^j(b_k(t)) = b_{j+k}(t),
//! τ^j(c ∏ b_{k_i}(t_i)) = φ^j(c) ∏ b_{k_i+j}(t_i). The exponential route
//! works in that basis.

use std::collections::{BTreeMap, HashMap};

use crate::carlitz::{b_coeffs, b_product, CarlitzTables};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::laurent::Laurent;
use crate::logalg::special_poly;
use crate::lseries::l_coeff;
use crate::multipoly::{log_q, APoly, KPoly, Monomial, MultiPoly, Vars};
use crate::norms::{dot_action_series, h_expand};
use crate::poly::ThetaPoly;
use crate::scalar::Scalar;
use crate::series::{AZSeries, Series, SeriesVar};

/// Coefficients keyed by exponent vectors, in the monomial or b-basis.
pub type Tensor = BTreeMap<Vec<u32>, ThetaPoly>;

/// β[e][k] with t^e = Σ_k β[e][k] b_k(t), for e ≤ max.
fn t_to_b_table(f: Field, max: usize) -> Vec<Vec<ThetaPoly>> {
    let q = f.q() as usize;
    let mut rows = vec![vec![ThetaPoly::one(f)]];
    for e in 1..=max {
        // t·b_k = b_{k+1} + θ^{q^k} b_k
        let prev = &rows[e - 1];
        let mut row = vec![ThetaPoly::zero(f); e + 1];
        for (k, c) in prev.iter().enumerate() {
            row[k + 1] = &row[k + 1] + c;
            row[k] = &row[k] + &(c * &ThetaPoly::monomial(f, Fe::ONE, q.pow(k as u32)));
        }
        rows.push(row);
    }
    rows
}

/// Applies a per-variable triangular change of basis given by `table`
/// (row e lists the images of index e).
fn change_basis(f: Field, p: &Tensor, table: &[Vec<ThetaPoly>]) -> Tensor {
    let Some(s) = p.keys().next().map(|k| k.len()) else { return Tensor::new() };
    let mut cur: HashMap<Vec<u32>, ThetaPoly> = p.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    for axis in 0..s {
        let mut next: HashMap<Vec<u32>, ThetaPoly> = HashMap::new();
        for (key, c) in cur {
            for (k, b) in table[key[axis] as usize].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut nk = key.clone();
                nk[axis] = k as u32;
                let add = &c * b;
                match next.get_mut(&nk) {
                    Some(v) => Scalar::add_assign(v, &add),
                    None => {
                        next.insert(nk, add);
                    }
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        cur = next;
    }
    let _ = f;
    cur.into_iter().collect()
}

fn max_entry(p: &Tensor) -> usize {
    p.keys().flat_map(|k| k.iter()).copied().max().unwrap_or(0) as usize
}

/// Monomial-basis coefficients to b-basis coefficients.
pub fn to_b_basis(f: Field, p: &Tensor) -> Tensor {
    change_basis(f, p, &t_to_b_table(f, max_entry(p)))
}

/// b-basis coefficients to monomial-basis coefficients.
pub fn from_b_basis(f: Field, p: &Tensor) -> Tensor {
    let table: Vec<Vec<ThetaPoly>> = (0..=max_entry(p)).map(|k| b_coeffs(f, k)).collect();
    change_basis(f, p, &table)
}

fn tensor_of(p: &APoly) -> Tensor {
    p.terms().map(|(m, c)| (m.exps().to_vec(), c.clone())).collect()
}

fn apoly_of(f: Field, s: usize, t: &Tensor) -> APoly {
    MultiPoly::from_terms(f, Vars::t_only(s), t.iter().map(|(k, c)| (Monomial(k.iter().copied().collect()), c.clone())))
}

/// θ^{q^i} − θ raised to the power n.
fn bracket_pow(f: Field, i: usize, n: u64) -> ThetaPoly {
    let qi = (f.q() as usize).pow(i as u32);
    let e = &ThetaPoly::monomial(f, Fe::ONE, qi) - &ThetaPoly::theta(f);
    e.pow(n)
}

/// Exponent of e_i = θ^{q^i} − θ in D_j·λ_d^{q^j}, where D_j = ∏_{i≤j} e_i^{q^{j−i}}
/// and λ_d = ∏_{i≤d} e_i.
fn den_exponent(q: u64, i: usize, j: usize, d: usize) -> u64 {
    let mut e = 0;
    if i <= j {
        e += q.pow((j - i) as u32);
    }
    if i <= d {
        e += q.pow(j as u32);
    }
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    ExpOfL,
    Extraction,
}

/// σ_s as an exact polynomial in z with coefficients in A[t_1..t_s].
#[derive(Clone, Debug)]
pub struct StarkUnit {
    pub field: Field,
    pub s: usize,
    pub sigma: AZSeries,
    pub route: Route,
}

impl StarkUnit {
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn deg_z(&self) -> Option<u64> {
        self.sigma.degree()
    }
}

/// ⌊(s−1)/(q−1)⌋, the proven bound for deg_z σ_s.
pub fn degree_bound(q: u32, s: usize) -> u64 {
    (s as u64 - 1) / (q as u64 - 1)
}

/// L(1,s,z) coefficients in the b-basis: (numerator tensor, λ_d) for d < prec.
fn l1_b_basis(f: Field, s: usize, prec: usize) -> Result<Vec<(Tensor, ThetaPoly)>> {
    (0..prec)
        .map(|d| {
            let c = l_coeff(f, 1, s, d)?;
            Ok((to_b_basis(f, &tensor_of(&c.num)), c.den))
        })
        .collect()
}

/// exp_z of a z-series given in the b-basis with numerators over λ_d,
/// returned in the b-basis with coefficients in A. Fails if a coefficient
/// is not integral.
fn exp_b_basis(f: Field, ell: &[(Tensor, ThetaPoly)]) -> Result<Vec<Tensor>> {
    let q = f.q() as u64;
    let mut out = Vec::with_capacity(ell.len());
    for m in 0..ell.len() {
        // common multiple C_m = ∏ e_i^{max_j E_i(j, m−j)} of the denominators
        let maxe: Vec<u64> = (1..=m).map(|i| (0..=m).map(|j| den_exponent(q, i, j, m - j)).max().unwrap()).collect();
        let cm = (1..=m).fold(ThetaPoly::one(f), |acc, i| &acc * &bracket_pow(f, i, maxe[i - 1]));
        let mut num: HashMap<Vec<u32>, ThetaPoly> = HashMap::new();
        for j in 0..=m {
            let d = m - j;
            let factor = (1..=m).fold(ThetaPoly::one(f), |acc, i| {
                &acc * &bracket_pow(f, i, maxe[i - 1] - den_exponent(q, i, j, d))
            });
            for (k, c) in &ell[d].0 {
                let key: Vec<u32> = k.iter().map(|&v| v + j as u32).collect();
                let add = &c.frobenius_pow(j as u32) * &factor;
                match num.get_mut(&key) {
                    Some(v) => Scalar::add_assign(v, &add),
                    None => {
                        num.insert(key, add);
                    }
                }
            }
        }
        let mut sig = Tensor::new();
        for (k, v) in num {
            if v.is_zero() {
                continue;
            }
            let c = v.exact_div(&cm).ok_or_else(|| {
                Error::IntegralityViolation(format!("coefficient of z^{} is not in A[t]", m))
            })?;
            sig.insert(k, c);
        }
        out.push(sig);
    }
    Ok(out)
}

fn sigma_from_b(f: Field, s: usize, b: &[Tensor]) -> AZSeries {
    let mut r = Series::zero(f, Vars::t_only(s), SeriesVar::Lower, None);
    for (m, t) in b.iter().enumerate() {
        r.add_coeff(m as u64, &apoly_of(f, s, &from_b_basis(f, t)));
    }
    r
}

/// σ_s = exp_z(L(1,s,z)), computed with two guard terms past the degree
/// bound; the guard terms must vanish and all coefficients must be in A[t].
pub fn sigma_via_exp(f: Field, s: usize) -> Result<StarkUnit> {
    if s == 0 {
        return Err(Error::InvalidInput("s must be at least 1".into()));
    }
    let bound = degree_bound(f.q(), s) as usize;
    let ell = l1_b_basis(f, s, bound + 3)?;
    let b = exp_b_basis(f, &ell)?;
    for (m, t) in b.iter().enumerate().skip(bound + 1) {
        if !t.is_empty() {
            return Err(Error::DegreeViolation(format!("σ_{} has a nonzero z^{} coefficient", s, m)));
        }
    }
    let sigma = sigma_from_b(f, s, &b[..=bound]);
    Ok(StarkUnit { field: f, s, sigma, route: Route::ExpOfL })
}

/// σ_s read off from 𝔖_s: each ∏ X_i^{q^{n_i}} Z^{q^k} is rewritten in the
/// basis ∏ H_{q^{n_i}}(X_i) Z^{q^k} = (∏ t_i^{n_i} z^k).(X_1⋯X_s Z).
pub fn sigma_via_extraction(f: Field, s: usize) -> Result<StarkUnit> {
    extract_sigma(f, s, &special_poly(f, s)?)
}

/// The extraction route applied to a given 𝔖_s.
pub fn extract_sigma(f: Field, s: usize, sp: &AZSeries) -> Result<StarkUnit> {
    let q = f.q();
    let vars = Vars::t_only(s);
    let mut sigma = Series::zero(f, vars, SeriesVar::Lower, None);
    for (zexp, p) in sp.coeffs() {
        let k = log_q(zexp as u32, q).ok_or_else(|| Error::NonLinearInput(format!("Z^{} is not a q-power", zexp)))?;
        let xs: Vec<usize> = (0..s).collect();
        if !p.is_q_linear_in(&xs) {
            return Err(Error::NonLinearInput(format!("coefficient of Z^{}", zexp)));
        }
        let e = h_expand(&p.to_k())?;
        let mut c = MultiPoly::zero(f, vars);
        for (n, v) in &e.terms {
            let mut exps = Vec::with_capacity(s);
            for &ni in n {
                exps.push(log_q(ni, q).ok_or_else(|| Error::NonLinearInput(format!("H-index {} is not a q-power", ni)))?);
            }
            let a = v.as_poly().ok_or_else(|| Error::IntegralityViolation(format!("coefficient of z^{} is not in A[t]", k)))?;
            c.add_term(Monomial(exps.into_iter().collect()), a.clone());
        }
        sigma.add_coeff(k as u64, &c);
    }
    Ok(StarkUnit { field: f, s, sigma, route: Route::Extraction })
}

/// Checks σ.(X_1⋯X_s Z) = 𝔖_s.
pub fn dot_consistency(u: &StarkUnit) -> Result<bool> {
    let f = u.field;
    let xz = Series::monomial(MultiPoly::x_product(f, Vars::x_only(u.s)), SeriesVar::Upper, 1);
    let lhs = dot_action_series(&u.sigma.to_k(), &xz)?;
    Ok(lhs == special_poly(f, u.s)?.to_k())
}

/// Findings for one s.
#[derive(Clone, Debug)]
pub struct SigmaReport {
    pub s: usize,
    pub deg_z: Option<u64>,
    pub bound: u64,
    pub degree_ok: bool,
    /// (z − 1) divides σ_s.
    pub divisible: bool,
    /// s ≡ 1 mod q − 1 and s > 1.
    pub expected_divisible: bool,
    /// log_z(σ_s) = L(1,s,z) through z^{bound+2}.
    pub log_ok: bool,
}

impl SigmaReport {
    pub fn ok(&self) -> bool {
        self.degree_ok && self.divisible == self.expected_divisible && self.log_ok
    }
}

/// log_z(σ) = L(1,s,z) in the b-basis: λ_d·Σ_j φ^j(σ_{d−j}[K−j])/l_j must
/// equal the numerator of the L-coefficient.
fn log_matches(f: Field, sigma_b: &[Tensor], ell: &[(Tensor, ThetaPoly)]) -> bool {
    let t = CarlitzTables::of(f);
    for (d, (num, lam)) in ell.iter().enumerate() {
        let mut acc: HashMap<Vec<u32>, ThetaPoly> = HashMap::new();
        for j in 0..=d {
            let Some(sig) = sigma_b.get(d - j) else { continue };
            let w = lam.exact_div(&t.l(j).to_monic()).expect("l_j divides λ_d");
            let w = if t.l(j).lead() == Fe::ONE { w } else { w.scale(f.inv(t.l(j).lead()).unwrap()) };
            for (k, c) in sig {
                let key: Vec<u32> = k.iter().map(|&v| v + j as u32).collect();
                let add = &c.frobenius_pow(j as u32) * &w;
                match acc.get_mut(&key) {
                    Some(v) => Scalar::add_assign(v, &add),
                    None => {
                        acc.insert(key, add);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        let got: Tensor = acc.into_iter().collect();
        if &got != num {
            return false;
        }
    }
    true
}

/// Degree bound, divisibility by z − 1 and log_z(σ_s) = L(1,s,z) for
/// 1 ≤ s ≤ s_max.
pub fn sigma_properties_check(f: Field, s_max: usize) -> Result<Vec<SigmaReport>> {
    (1..=s_max).map(|s| sigma_report(f, s)).collect()
}

/// The b-basis coefficients of σ_s are symmetric under permuting the t_i,
/// so the checks below run on sorted keys only. The change to the monomial
/// basis is invertible and acts on each z-coefficient separately, so
/// vanishing of a z-coefficient and of σ(t,1) can be read off here.
pub fn sigma_b_sym(f: Field, s: usize, terms: usize) -> Result<(Vec<Tensor>, Vec<(Tensor, ThetaPoly)>)> {
    let ell: Vec<(Tensor, ThetaPoly)> =
        (0..terms).map(|d| crate::logalg::l_k_product_num(f, s, d)).collect();
    Ok((exp_b_basis(f, &ell)?, ell))
}

/// Rough count of polynomial products needed by [`sigma_report`].
pub fn sigma_report_cost(q: u32, s: usize) -> f64 {
    let terms = degree_bound(q, s) as usize + 3;
    (0..terms)
        .map(|d| {
            // monics times depth-first nodes over sorted keys
            let nodes: f64 = (0..=s).map(|k| binom((d + k) as u64, k as u64)).sum();
            (q as f64).powi(d as i32) * nodes
        })
        .sum()
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn sigma_report(f: Field, s: usize) -> Result<SigmaReport> {
    let q = f.q();
    let bound = degree_bound(q, s);
    let (b, ell) = sigma_b_sym(f, s, bound as usize + 3)?;
    let deg_z = b.iter().rposition(|t| !t.is_empty()).map(|d| d as u64);
    let mut at_one: HashMap<&Vec<u32>, ThetaPoly> = HashMap::new();
    for t in &b {
        for (k, c) in t {
            let e = at_one.entry(k).or_insert_with(|| ThetaPoly::zero(f));
            *e = &*e + c;
        }
    }
    Ok(SigmaReport {
        s,
        deg_z,
        bound,
        degree_ok: deg_z.is_some_and(|d| d <= bound),
        divisible: at_one.values().all(|c| c.is_zero()),
        expected_divisible: s > 1 && (s as u64 - 1) % (q as u64 - 1) == 0,
        log_ok: log_matches(f, &b, &ell),
    })
}

/// Result of [`exp_tau_approx`].
#[derive(Clone, Debug)]
pub struct ExpApprox {
    pub value: MultiPoly<Laurent>,
    /// Terms j = 0..=cap of Σ τ^j/D_j were summed.
    pub cap: usize,
    /// The value is within q^{−certified} of exp_C(f) in Gauss norm.
    pub certified: i64,
}

/// log_q of the Gauss norm of τ^j(g)/D_j when ‖g‖ = q^a, for j ≥ 0:
/// s(q^j − 1)/(q − 1) + a·q^j − j·q^j.
fn tau_term_log(q: i64, s: i64, j: u32, a: i64) -> Option<i64> {
    let qj = q.checked_pow(j)?;
    let growth = s.checked_mul((qj - 1) / (q - 1))?;
    growth.checked_add(a.checked_mul(qj)?)?.checked_sub((j as i64).checked_mul(qj)?)
}

/// exp_C = Σ_j τ^j/D_j applied to f ∈ T_s given with Laurent coefficients.
/// `input_error` is log_q of a bound for the error already present in f
/// (as −P for an error ≤ q^{−P}); the sum is capped once every further
/// term is below q^{−target}, and the returned precision accounts for the
/// input error, the discarded terms and the rounding of each term.
pub fn exp_tau_approx(f: &MultiPoly<Laurent>, input_error: i64, target: i64) -> Result<ExpApprox> {
    let fld = f.field();
    let vars = f.vars();
    let q = fld.q() as i64;
    let s = vars.t as i64;
    if f.is_zero() {
        return Ok(ExpApprox { value: f.clone(), cap: 0, certified: (-input_error).min(target) });
    }
    let a = f.terms().map(|(_, c)| c.log_abs_bound()).max().unwrap();
    // find the cap: the term bounds eventually decrease to −∞
    let mut cap = None;
    for j in 0..40u32 {
        let tail_ok = (j + 1..j + 8).all(|jj| tau_term_log(q, s, jj, a).is_some_and(|b| b < -target));
        let decreasing = tau_term_log(q, s, j + 2, a)
            .zip(tau_term_log(q, s, j + 1, a))
            .is_some_and(|(x, y)| x < y);
        if tail_ok && decreasing {
            cap = Some(j as usize);
            break;
        }
    }
    let cap = cap.ok_or_else(|| Error::PrecisionLoss(format!("‖f‖ = q^{} is too large for a certified exp", a)))?;
    let tables = CarlitzTables::of(fld);
    let mut certified = target.min(-input_error);
    let mut value: MultiPoly<Laurent> = MultiPoly::zero(fld, vars);
    for j in 0..=cap {
        // the input error is raised to the q^j-th power by φ^j
        if let Some(e) = tau_term_log(q, s, j as u32, input_error) {
            certified = certified.min(-e);
        }
        let dj = tables.d(j);
        let ddeg = dj.deg().unwrap() as i64;
        let growth = s * ((q.pow(j as u32) - 1) / (q - 1));
        let mut phi: MultiPoly<Laurent> = MultiPoly::zero(fld, vars);
        for (m, c) in f.terms() {
            let cj = c.frobenius_pow(j as u32);
            // terms below q^{−target} after τ^j/D_j are dropped; the
            // ultrametric inequality bounds the change by the same amount
            if cj.log_abs_bound() + growth - ddeg < -target {
                continue;
            }
            phi.add_term(m.clone(), cj.with_prec(target + ddeg + 1));
        }
        if phi.is_zero() {
            continue;
        }
        let b: MultiPoly<Laurent> = b_product(fld, j, vars);
        let num = phi.times(&b);
        let top = num.terms().map(|(_, c)| c.log_abs_bound()).max().unwrap_or(0);
        let inv = Laurent::recip_poly(&dj, target + top.max(0) + 1)?;
        value.add_assign(&num.map_coeffs(|c| c.times(&inv).with_prec(target)));
    }
    if let Some(p) = value.terms().map(|(_, c)| c.prec()).min() {
        certified = certified.min(p);
    }
    value.retain(|_, c| !c.is_zero());
    Ok(ExpApprox { value, cap, certified })
}

/// Largest log_q|·| among the coefficients of `approx − exact`, or `None`
/// when every coefficient agrees within its precision.
pub fn approx_distance(approx: &MultiPoly<Laurent>, exact: &KPoly, prec: i64) -> Result<Option<i64>> {
    let ex: MultiPoly<Laurent> = exact.try_map_coeffs(|c| Laurent::from_frac(c, prec))?;
    let d = approx.minus(&ex);
    Ok(d.terms().filter_map(|(_, c)| c.with_prec(prec).degree()).max())
}

/// σ_s(t, 1) ∈ A[t].
pub fn sigma_at_one(u: &StarkUnit) -> Result<APoly> {
    u.sigma.eval_at_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::text::{parse_series, series_to_string};

    #[test]
    fn b_basis_roundtrip() {
        let f = Fq::with_q(3).unwrap();
        let mut t = Tensor::new();
        t.insert(vec![2, 0], ThetaPoly::from_ints(f, &[1, 1]));
        t.insert(vec![1, 3], ThetaPoly::from_ints(f, &[0, 2]));
        let b = to_b_basis(f, &t);
        assert_eq!(from_b_basis(f, &b), t);
    }

    #[test]
    fn small_units() {
        let f = Fq::with_q(3).unwrap();
        assert_eq!(series_to_string(&sigma_via_exp(f, 2).unwrap().sigma.to_k()), "1");
        assert_eq!(series_to_string(&sigma_via_exp(f, 3).unwrap().sigma.to_k()), "1 - z");
        let s4 = sigma_via_exp(f, 4).unwrap().sigma.to_k();
        let want = parse_series(f, "1 - (t1 + t2 + t3 + t4 - th)*z", Some(Vars::t_only(4))).unwrap();
        assert_eq!(s4, want);
        assert_eq!(sigma_via_extraction(f, 4).unwrap().sigma.to_k(), want);
    }

    #[test]
    fn routes_agree_with_generic_exp() {
        for (q, smax) in [(2u32, 4usize), (3, 5), (4, 4)] {
            let f = Fq::with_q(q).unwrap();
            for s in 1..=smax {
                let a = sigma_via_exp(f, s).unwrap();
                let b = sigma_via_extraction(f, s).unwrap();
                assert_eq!(a.sigma, b.sigma, "q={q} s={s}");
                let p = degree_bound(q, s) + 3;
                let l = crate::lseries::l_series(f, 1, s, p).unwrap().to_series().unwrap();
                let e = crate::carlitz::exp_z(&l).unwrap();
                assert_eq!(e, a.sigma.to_k().truncate(p), "q={q} s={s}");
                assert!(dot_consistency(&a).unwrap());
                assert!(sigma_report(f, s).unwrap().ok(), "q={q} s={s}");
            }
        }
    }
}
