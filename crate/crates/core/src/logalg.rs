//! Log-algebraicity: L_k(F) = Σ_{a∈A_{+,k}} (a*F)/a, the polynomials
//! Z_k(F) = Σ_j L_{k−j}(F)^{q^j}/D_j and 𝔏(F,Z) = Σ_k Z_k(F) Z^{q^k}, and the
//! special polynomials 𝔖_s = 𝔏(X_1⋯X_s, Z).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::carlitz::{carlitz_coeffs, lcm_monic, CarlitzTables};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::frac::Frac;
use crate::lseries::l_series;
use crate::multipoly::{APoly, KPoly, Monomial, MultiPoly, Vars};
use crate::norms::{dot_action_series, sup_norm};
use crate::poly::{monic_from_index, ThetaPoly};
use crate::series::{AZSeries, Series, SeriesVar, ZSeries};

/// L_k(F); zero for k < 0.
///
/// By linearity L_k(c·t^u X^m) = c·t^u·L_k(X^m), and L_k(X^m) is L_k(X_1⋯X_{|m|})
/// with the variables merged into blocks, so one symmetric table per
/// (|m|, k) serves every monomial.
pub fn l_k(p: &KPoly, k: i64) -> Result<KPoly> {
    let f = p.field();
    let v = p.vars();
    if k < 0 || p.is_zero() {
        return Ok(MultiPoly::zero(f, v));
    }
    let k = k as usize;
    let q = f.q();
    let mut acc = MultiPoly::zero(f, v);
    for (m, c) in p.terms() {
        let block: Vec<usize> = (v.t..v.len()).flat_map(|i| std::iter::repeat_n(i, m.0[i] as usize)).collect();
        let s = block.len();
        let tab = l_k_product_cached(f, s, k);
        let (nums, lam) = &*tab;
        let mut base = m.clone();
        for i in v.t..v.len() {
            base.0[i] = 0;
        }
        let mut sums: HashMap<Monomial, ThetaPoly> = HashMap::new();
        // every tuple (n_1..n_s) ∈ [0,k]^s, looked up by its sorted key
        let mut n = vec![0u32; s];
        'tuples: loop {
            let mut key = n.clone();
            key.sort_unstable();
            if let Some(num) = nums.get(&key) {
                let mut e = base.clone();
                for (pos, &j) in n.iter().enumerate() {
                    e.0[block[pos]] += q.pow(j);
                }
                let slot = sums.entry(e).or_insert_with(|| ThetaPoly::zero(f));
                *slot = &*slot + num;
            }
            let mut i = 0;
            loop {
                if i == s {
                    break 'tuples;
                }
                if (n[i] as usize) < k {
                    n[i] += 1;
                    break;
                }
                n[i] = 0;
                i += 1;
            }
        }
        let w = c.div_poly(lam)?;
        for (e, num) in sums {
            acc.add_term(e, &Frac::from_poly(num) * &w);
        }
    }
    Ok(acc)
}

type ProductCache = Mutex<HashMap<(usize, usize, usize), Arc<(SymMap<ThetaPoly>, ThetaPoly)>>>;

fn l_k_product_cached(f: Field, s: usize, k: usize) -> Arc<(SymMap<ThetaPoly>, ThetaPoly)> {
    static CACHE: std::sync::OnceLock<ProductCache> = std::sync::OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (f as *const _ as usize, s, k);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return r.clone();
    }
    let r = Arc::new(l_k_product_num(f, s, k));
    cache.lock().unwrap().insert(key, r.clone());
    r
}

/// Z_k(F) from the list L_0(F), …, L_k(F).
fn z_from_ls(f: Field, ls: &[KPoly], k: usize) -> Result<KPoly> {
    let t = CarlitzTables::of(f);
    let mut r = MultiPoly::zero(f, ls[0].vars());
    for j in 0..=k {
        let term = ls[k - j].frobenius_power(j as u32).div_poly(&t.d(j))?;
        r.add_assign(&term);
    }
    Ok(r)
}

/// Z_k(F); zero for k < 0.
pub fn z_k(p: &KPoly, k: i64) -> Result<KPoly> {
    if k < 0 {
        return Ok(MultiPoly::zero(p.field(), p.vars()));
    }
    let ls = (0..=k).map(|i| l_k(p, i)).collect::<Result<Vec<_>>>()?;
    z_from_ls(p.field(), &ls, k as usize)
}

/// Outcome of the log-algebraicity computation for one F.
#[derive(Clone, Debug)]
pub struct LogAlgResult {
    pub input: KPoly,
    /// Smallest k0 ≥ 0 with ‖F‖ ≤ q^{k0}.
    pub k0: usize,
    /// Z_0(F), …, Z_{k0}(F), all in A[X].
    pub zk: Vec<APoly>,
    /// 𝔏(F,Z) = Σ_k Z_k(F) Z^{q^k}.
    pub lf: AZSeries,
    pub integral: bool,
}

/// Termination index: the least k0 ≥ 0 with ‖F‖ ≤ q^{k0}.
pub fn termination_index(p: &KPoly) -> Result<usize> {
    Ok(sup_norm(p)?.ceil_exponent().unwrap_or(0).max(0) as usize)
}

fn series_from_zk(f: Field, vars: Vars, zk: &[APoly]) -> AZSeries {
    let q = f.q() as u64;
    Series::from_coeffs(f, vars, SeriesVar::Upper, zk.iter().enumerate().map(|(k, z)| (q.pow(k as u32), z.clone())), None)
}

/// Computes 𝔏(F,Z) for F ∈ A[X], checking that every Z_k(F) is integral
/// and that Z_{k0+1}(F) vanishes.
pub fn log_algebraic(p: &KPoly) -> Result<LogAlgResult> {
    let f = p.field();
    if !p.is_integral() {
        return Err(Error::Precondition("log-algebraicity needs coefficients in A".into()));
    }
    if p.vars().t != 0 {
        return Err(Error::InvalidInput("F must be a polynomial in X only".into()));
    }
    let k0 = termination_index(p)?;
    let ls = (0..=k0 as i64 + 1).map(|k| l_k(p, k)).collect::<Result<Vec<_>>>()?;
    let mut zk = Vec::with_capacity(k0 + 1);
    for k in 0..=k0 {
        let z = z_from_ls(f, &ls, k)?;
        let za = z.to_a().ok_or_else(|| Error::IntegralityViolation(format!("Z_{}(F) has a non-integral coefficient", k)))?;
        zk.push(za);
    }
    if !z_from_ls(f, &ls, k0 + 1)?.is_zero() {
        return Err(Error::NonzeroTail(format!("Z_{}(F) does not vanish", k0 + 1)));
    }
    let lf = series_from_zk(f, p.vars(), &zk);
    Ok(LogAlgResult { input: p.clone(), k0, zk, lf, integral: true })
}

/// A polynomial symmetric in its variables, keyed by nondecreasing
/// exponent (or twist-index) vectors.
pub(crate) type SymMap<C> = BTreeMap<Vec<u32>, C>;

/// All nondecreasing vectors of length s with entries in 0..=k.
pub(crate) fn multisets(s: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn rec(s: usize, lo: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for v in lo..=k {
            cur.push(v);
            rec(s, v, k, cur, out);
            cur.pop();
        }
    }
    rec(s, 0, k, &mut cur, &mut out);
    out
}

/// All distinct permutations of a nondecreasing vector.
pub(crate) fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = v.to_vec();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { return out };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Coefficients of L_k(X_1⋯X_s) on ∏ X_i^{q^{n_i}}, keyed by sorted n:
/// Σ_a ∏ ψ_{n_i}(a)/a.
fn l_k_product(f: Field, s: usize, k: usize) -> Result<SymMap<Frac>> {
    let (nums, lam) = l_k_product_num(f, s, k);
    let mut r = SymMap::new();
    for (key, num) in nums {
        r.insert(key, Frac::new(num, lam.clone())?);
    }
    Ok(r)
}

/// Numerators of [`l_k_product`] over the common denominator λ_k, which is
/// returned alongside. Zero entries are omitted.
pub(crate) fn l_k_product_num(f: Field, s: usize, k: usize) -> (SymMap<ThetaPoly>, ThetaPoly) {
    let lam = lcm_monic(f, k);
    let count = (f.q() as usize).pow(k as u32);
    let keys = multisets(s, k as u32);
    let index: HashMap<Vec<u32>, usize> = keys.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let sums = (0..count)
        .into_par_iter()
        .map(|x| {
            let a = monic_from_index(f, k, x);
            let psi = carlitz_coeffs(&a);
            let w = lam.exact_div(&a).expect("monic divides the lcm");
            let mut out = vec![ThetaPoly::zero(f); keys.len()];
            // depth-first over nondecreasing n, sharing prefix products
            let mut stack: Vec<(Vec<u32>, ThetaPoly)> = vec![(Vec::new(), w)];
            while let Some((n, prod)) = stack.pop() {
                if n.len() == s {
                    out[index[&n]] = prod;
                    continue;
                }
                let lo = n.last().copied().unwrap_or(0);
                for v in lo..=k as u32 {
                    let p = &psi[v as usize];
                    if p.is_zero() {
                        continue;
                    }
                    let mut m = n.clone();
                    m.push(v);
                    stack.push((m, &prod * p));
                }
            }
            out
        })
        .reduce(
            || vec![ThetaPoly::zero(f); keys.len()],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(&y) {
                    *a = &*a + b;
                }
                x
            },
        );
    let r = keys.into_iter().zip(sums).filter(|(_, n)| !n.is_zero()).collect();
    (r, lam)
}

/// 𝔖_s in symmetric form: for each k, the coefficient of Z^{q^k} keyed by
/// sorted (n_1..n_s) standing for ∏ X_i^{q^{n_i}} and all its permutations.
pub fn special_poly_sym(f: Field, s: usize) -> Result<Vec<SymMap<ThetaPoly>>> {
    if s == 0 {
        return Err(Error::InvalidInput("s must be at least 1".into()));
    }
    let q = f.q() as usize;
    let k0 = s.div_ceil(q - 1);
    let t = CarlitzTables::of(f);
    let ls = (0..=k0 + 1).map(|k| l_k_product(f, s, k)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for k in 0..=k0 + 1 {
        let mut z: SymMap<Frac> = SymMap::new();
        for j in 0..=k {
            let dj = t.d(j);
            for (n, c) in &ls[k - j] {
                let key: Vec<u32> = n.iter().map(|&v| v + j as u32).collect();
                let add = c.frobenius_pow(j as u32).div_poly(&dj)?;
                let e = z.entry(key.clone()).or_insert_with(|| Frac::zero(f));
                *e = &*e + &add;
                if e.is_zero() {
                    z.remove(&key);
                }
            }
        }
        if k == k0 + 1 {
            if !z.is_empty() {
                return Err(Error::NonzeroTail(format!("Z_{}(X_1⋯X_{}) does not vanish", k, s)));
            }
            break;
        }
        let mut za = SymMap::new();
        for (n, c) in z {
            let a = c.as_poly().ok_or_else(|| {
                Error::IntegralityViolation(format!("Z_{}(X_1⋯X_{}) has a non-integral coefficient", k, s))
            })?;
            za.insert(n, a.clone());
        }
        out.push(za);
    }
    while out.len() > 1 && out.last().is_some_and(|m| m.is_empty()) {
        out.pop();
    }
    Ok(out)
}

/// Expands the symmetric form into a polynomial in X_1..X_s, Z.
pub fn expand_special(f: Field, s: usize, sym: &[SymMap<ThetaPoly>]) -> AZSeries {
    let q = f.q();
    let vars = Vars::x_only(s);
    let mut r = Series::zero(f, vars, SeriesVar::Upper, None);
    for (k, m) in sym.iter().enumerate() {
        let mut p = MultiPoly::zero(f, vars);
        for (n, c) in m {
            for perm in permutations(n) {
                p.add_term(Monomial(perm.iter().map(|&v| q.pow(v)).collect()), c.clone());
            }
        }
        r.add_coeff((q as u64).pow(k as u32), &p);
    }
    r
}

type SpecialCache = Mutex<HashMap<(usize, usize), AZSeries>>;

fn special_cache() -> &'static SpecialCache {
    static CACHE: std::sync::OnceLock<SpecialCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// 𝔖_s = 𝔏(X_1⋯X_s, Z) ∈ A[X_1..X_s, Z], memoized per field.
pub fn special_poly(f: Field, s: usize) -> Result<AZSeries> {
    let key = (f as *const _ as usize, s);
    if let Some(r) = special_cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let r = expand_special(f, s, &special_poly_sym(f, s)?);
    special_cache().lock().unwrap().insert(key, r.clone());
    Ok(r)
}

/// Checks L(−N,s,z).(X_1⋯X_s Z) = ∂_{X_{s+1}}⋯∂_{X_{s+N+1}} 𝔖_{s+N+1} and
/// returns the common value.
pub fn negative_l_via_derivative(f: Field, n: u32, s: usize) -> Result<ZSeries> {
    let l = l_series(f, -(n as i64), s, 1)?.to_series()?;
    let vars = Vars::x_only(s);
    let xz = Series::monomial(MultiPoly::x_product(f, vars), SeriesVar::Upper, 1);
    let lhs = dot_action_series(&l, &xz)?;
    let big = s + n as usize + 1;
    let sp = special_poly(f, big)?.to_k();
    let rhs = sp.try_map_coeffs(|c| {
        let mut d = c.clone();
        for i in s + 1..=big {
            d = d.partial_derivative_x(i)?;
        }
        d.restrict(vars)
    })?;
    if lhs != rhs {
        return Err(Error::Mismatch(format!(
            "L(-{},{},z).(X_1⋯X_{} Z) differs from the derivative of the special polynomial",
            n, s, s
        )));
    }
    Ok(lhs)
}

/// Searches F ∈ F_q[X_1..X_n] with monomials of total degree 1..=max_deg
/// for solutions of 𝔏(F,Z) = F·Z, trying at most `limit` nonzero candidates
/// in a fixed enumeration order.
pub fn search_fixed(f: Field, nvars: usize, max_deg: u32, limit: usize) -> Result<Vec<KPoly>> {
    let vars = Vars::x_only(nvars);
    let mut monos = Vec::new();
    for e in multisets_all(nvars, max_deg) {
        let deg: u32 = e.iter().sum();
        if deg >= 1 && deg <= max_deg {
            monos.push(Monomial(e.into_iter().collect()));
        }
    }
    monos.sort();
    let q = f.q() as u64;
    let total = q.checked_pow(monos.len() as u32).unwrap_or(u64::MAX);
    let mut found = Vec::new();
    for idx in 1..total.min(limit as u64 + 1) {
        let mut p = MultiPoly::zero(f, vars);
        let mut x = idx;
        for m in &monos {
            let c = (x % q) as u8;
            x /= q;
            if c != 0 {
                p.add_term(m.clone(), Frac::constant(f, Fe(c)));
            }
        }
        let r = log_algebraic(&p)?;
        let want = series_from_zk(f, vars, &[p.to_a().unwrap()]);
        if r.lf == want {
            found.push(p);
        }
    }
    Ok(found)
}

/// All vectors in {0..=d}^n.
pub(crate) fn multisets_all(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=d).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::text::parse_poly;

    #[test]
    fn permutations_are_distinct() {
        assert_eq!(permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(multisets(2, 2).len(), 6);
    }

    #[test]
    fn l_k_matches_direct_sum() {
        use crate::carlitz::carlitz_action;
        use crate::poly::monic_enum;
        let cases = [
            (2, "th*X1^3*X2 + X2^2 + t1*X1 + 1", Vars { t: 1, x: 2 }),
            (3, "X1^2*X2^2 + (th^2 + 1)*X2^3 + th", Vars::x_only(2)),
        ];
        for (q, text, vars) in cases {
            let f = Fq::with_q(q).unwrap();
            let p = parse_poly(f, text, Some(vars)).unwrap();
            for k in 0..=3 {
                let mut want = MultiPoly::zero(f, vars);
                for a in monic_enum(f, k) {
                    want.add_assign(&carlitz_action(&a, &p).div_poly(&a).unwrap());
                }
                assert_eq!(l_k(&p, k as i64).unwrap(), want, "q={q} k={k}");
            }
        }
    }

    #[test]
    fn l1_of_x_in_char_two() {
        let f = Fq::with_q(2).unwrap();
        let x = parse_poly(f, "X1", None).unwrap();
        let want = parse_poly(f, "X1^2/(th^2 + th)", None).unwrap();
        assert_eq!(l_k(&x, 1).unwrap(), want);
        assert!(z_k(&x, 1).unwrap().is_zero());
        assert!(l_k(&x, -3).unwrap().is_zero());
    }

    #[test]
    fn symmetric_route_matches_generic() {
        for q in [2u32, 3] {
            let f = Fq::with_q(q).unwrap();
            for s in 1..=3 {
                let p = MultiPoly::x_product(f, Vars::x_only(s));
                let generic = log_algebraic(&p).unwrap().lf;
                assert_eq!(special_poly(f, s).unwrap(), generic, "q={} s={}", q, s);
            }
        }
    }
}
