//! Acceptance criteria 1-10, one printed line each. Expected values come
//! from closed forms or from brute-force oracles written here against the
//! definitions (monic enumeration, explicit products), not from the library
//! routine under test.
//!
//! Four criteria are known to fail as written; see `KNOWN_FAILURES`. The
//! test fails on any other failure, and on a known failure that stops
//! reproducing, so the list stays accurate.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stark_units::logalg::{log_algebraic, negative_l_via_derivative, special_poly, termination_index};
use stark_units::lseries::{l_value_approx, polylog_build, power_sum, scalar_power_sum, PolylogWeights};
use stark_units::norms::{dot_action, h_poly, sup_norm, NormValue};
use stark_units::selfcheck::random_f;
use stark_units::stark::{
    approx_distance, degree_bound, exp_tau_approx, sigma_at_one, sigma_report, sigma_report_cost, sigma_via_exp,
    sigma_via_extraction,
};
use stark_units::text::parse_series;
use stark_units::{APoly, Fe, Field, Fq, Frac, KPoly, Monomial, MultiPoly, Series, SeriesVar, ThetaPoly, Vars, ZSeries};

const KNOWN_FAILURES: &[(u32, &str)] = &[
    (1, "sigma_(q+1) is 1 - ((t1 - th) + ... + (t_(q+1) - th))*z, not the product form"),
    (5, "for r = 2 the identity needs the weight (l_(k+r-1)/l_k)^(q^r-N) on the k-th term"),
    (8, "q = 2 with s = 8..10 and q = 3 with s = 9, 10 exceed the compute budget"),
    (9, "|f.F| = |f|*|F| needs every H-index of F nonzero in each coordinate; t_i fixes terms free of X_i"),
];

/// Operation budget for the sigma_s property checks (see `sigma_report_cost`).
/// Override with STARK_SIGMA_BUDGET.
const SIGMA_BUDGET: f64 = 5e6;

struct Outcome {
    ok: bool,
    summary: String,
}

fn outcome(ok: bool, summary: impl Into<String>) -> Outcome {
    Outcome { ok, summary: summary.into() }
}

// ------------------------------------------------------------ oracles

fn fq(q: u32) -> Field {
    Fq::with_q(q).unwrap()
}

/// All monic polynomials of degree d, by an odometer over the lower
/// coefficients.
fn monics(f: Field, d: usize) -> Vec<ThetaPoly> {
    let els: Vec<Fe> = f.elements().collect();
    let q = els.len();
    let mut idx = vec![0usize; d];
    let mut out = Vec::new();
    loop {
        let mut c: Vec<Fe> = idx.iter().map(|&i| els[i]).collect();
        c.push(Fe::ONE);
        out.push(ThetaPoly::new(f, c));
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            idx[i] += 1;
            if idx[i] < q {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn th_pow(f: Field, k: u64) -> ThetaPoly {
    ThetaPoly::monomial(f, Fe::ONE, k as usize)
}

fn qpow(f: Field, k: usize) -> u64 {
    (f.q() as u64).pow(k as u32)
}

/// l_k = ∏_{i=1..k} (θ − θ^{q^i}).
fn l(f: Field, k: usize) -> ThetaPoly {
    (1..=k).fold(ThetaPoly::one(f), |acc, i| &acc * &(&ThetaPoly::theta(f) - &th_pow(f, qpow(f, i))))
}

/// D_j = ∏_{i=0..j−1} (θ^{q^j} − θ^{q^i}).
fn dd(f: Field, j: usize) -> ThetaPoly {
    (0..j).fold(ThetaPoly::one(f), |acc, i| &acc * &(&th_pow(f, qpow(f, j)) - &th_pow(f, qpow(f, i))))
}

/// ∏_{i=1..d} (θ^{q^i} − θ), divisible by every monic of degree d.
fn lcm_all(f: Field, d: usize) -> ThetaPoly {
    (1..=d).fold(ThetaPoly::one(f), |acc, i| &acc * &(&th_pow(f, qpow(f, i)) - &ThetaPoly::theta(f)))
}

/// θ ↦ θ^{q^k} on a polynomial in θ.
fn phi_theta(p: &ThetaPoly, k: usize) -> ThetaPoly {
    let f = p.field();
    let m = qpow(f, k) as usize;
    let mut c = vec![Fe::ZERO; p.coeffs().len().saturating_sub(1) * m + 1];
    for (i, &a) in p.coeffs().iter().enumerate() {
        c[i * m] = a;
    }
    ThetaPoly::new(f, c)
}

fn phi_a(p: &APoly, k: usize) -> APoly {
    p.map_coeffs(|c| phi_theta(c, k))
}

fn t_var(f: Field, vars: Vars, i: usize) -> APoly {
    MultiPoly::var(f, vars, i)
}

fn a_const(f: Field, vars: Vars, c: ThetaPoly) -> APoly {
    MultiPoly::constant(f, vars, c)
}

/// b_k(t_i) = ∏_{m=0..k−1} (t_i − θ^{q^m}).
fn b_of(f: Field, vars: Vars, k: usize, i: usize) -> APoly {
    (0..k).fold(MultiPoly::one(f, vars), |acc, m| acc.times(&t_var(f, vars, i).minus(&a_const(f, vars, th_pow(f, qpow(f, m))))))
}

fn b_prod(f: Field, vars: Vars, k: usize) -> APoly {
    (0..vars.t).fold(MultiPoly::one(f, vars), |acc, i| acc.times(&b_of(f, vars, k, i)))
}

/// Every tuple in [0, k]^n.
fn tuples(n: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..=k).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Σ_{a∈A_{+,d}} a(t_1)⋯a(t_n)·a^{−N}·λ^N with λ = lcm_all(d), for N ≥ 1;
/// returns the numerator and λ^N.
fn l_coeff_oracle(f: Field, big_n: u32, n: usize, d: usize) -> (APoly, ThetaPoly) {
    let vars = Vars::t_only(n);
    let den = lcm_all(f, d).pow(big_n as u64);
    // only nondecreasing exponent tuples; the sum is symmetric in the t_i
    let keys: Vec<Vec<u32>> = tuples(n, d as u32).into_iter().filter(|e| e.windows(2).all(|w| w[0] <= w[1])).collect();
    let mut acc: Vec<Vec<Fe>> = vec![vec![Fe::ZERO; den.coeffs().len()]; keys.len()];
    for a in monics(f, d) {
        let w = den.exact_div(&a.pow(big_n as u64)).expect("monic divides the lcm");
        for (key, slot) in keys.iter().zip(acc.iter_mut()) {
            let c = key.iter().fold(Fe::ONE, |x, &e| f.mul(x, a.coeff(e as usize)));
            if c.is_zero() {
                continue;
            }
            for (s, &x) in slot.iter_mut().zip(w.coeffs()) {
                *s = f.add(*s, f.mul(c, x));
            }
        }
    }
    let mut num = MultiPoly::zero(f, vars);
    for e in tuples(n, d as u32) {
        let mut key = e.clone();
        key.sort_unstable();
        let i = keys.iter().position(|k| *k == key).unwrap();
        num.add_term(Monomial(e.into_iter().collect()), ThetaPoly::new(f, acc[i].clone()));
    }
    (num, den)
}

/// Σ_{a∈A_{+,d}} a(t_1)⋯a(t_n)·a^m for m ≥ 0.
fn l_coeff_neg_oracle(f: Field, m: u32, n: usize, d: usize) -> APoly {
    let vars = Vars::t_only(n);
    let mut acc = MultiPoly::zero(f, vars);
    for a in monics(f, d) {
        let mut term = a_const(f, vars, a.pow(m as u64));
        for i in 0..n {
            let ai = MultiPoly::from_terms(
                f,
                vars,
                a.coeffs().iter().enumerate().map(|(k, &c)| (Monomial::var(n, i, k as u32), ThetaPoly::constant(f, c))),
            );
            term = term.times(&ai);
        }
        acc.add_assign(&term);
    }
    acc
}

/// C_a(X) on one variable: C_θ(X) = θX + X^q, extended F_q-linearly in a.
fn carlitz_poly_oracle(a: &ThetaPoly, vars: Vars, i: usize) -> KPoly {
    let f = a.field();
    let x: KPoly = MultiPoly::var(f, vars, i);
    let mut cur = x.clone();
    let mut out = MultiPoly::zero(f, vars);
    for (k, &c) in a.coeffs().iter().enumerate() {
        if k > 0 {
            cur = cur.scale(&Frac::theta(f)).plus(&cur.pow(f.q()));
        }
        out.add_assign(&cur.scale(&Frac::constant(f, c)));
    }
    out
}

fn a_star(a: &ThetaPoly, p: &KPoly) -> KPoly {
    let v = p.vars();
    let images: Vec<Option<KPoly>> = (0..v.len()).map(|k| Some(carlitz_poly_oracle(a, v, k))).collect();
    p.substitute(&images)
}

/// P^{q^j}: coefficients raised to q^j, exponents multiplied by q^j.
fn frob_poly(p: &KPoly, j: usize) -> KPoly {
    let f = p.field();
    let m = qpow(f, j) as u32;
    MultiPoly::from_terms(
        f,
        p.vars(),
        p.terms().map(|(e, c)| (Monomial(e.exps().iter().map(|&x| x * m).collect()), c.pow(m as u64))),
    )
}

/// Z_0(F), …, Z_{kmax}(F) from the definition Z_k = Σ_j L_{k−j}^{q^j}/D_j.
fn z_oracle(p: &KPoly, kmax: usize) -> Vec<KPoly> {
    let f = p.field();
    let ls: Vec<KPoly> = (0..=kmax)
        .map(|k| {
            let mut s = MultiPoly::zero(f, p.vars());
            for a in monics(f, k) {
                s.add_assign(&a_star(&a, p).scale(&Frac::recip_poly(&a).unwrap()));
            }
            s
        })
        .collect();
    (0..=kmax)
        .map(|k| {
            let mut z = MultiPoly::zero(f, p.vars());
            for j in 0..=k {
                z.add_assign(&frob_poly(&ls[k - j], j).scale(&Frac::recip_poly(&dd(f, j)).unwrap()));
            }
            z
        })
        .collect()
}

fn digit_sum(mut n: u64, q: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % q;
        n /= q;
    }
    s
}

fn gauss_norm_oracle(g: &KPoly) -> NormValue {
    let q = g.field().q();
    g.terms()
        .map(|(_, c)| NormValue::int_pow(q, c.num().deg().unwrap() as i64 - c.den().deg().unwrap() as i64))
        .fold(NormValue::Zero, NormValue::max)
}

// ------------------------------------------------------------ criteria

fn c1() -> Outcome {
    let mut bad = Vec::new();
    let mut sum_form = true;
    for q in [2u32, 3, 4, 5] {
        let f = fq(q);
        let q = q as usize;
        for s in 1..=q + (q >= 3) as usize {
            let vars = Vars::t_only(s);
            let got = sigma_via_exp(f, s).unwrap().sigma.to_k();
            let z: ZSeries = Series::monomial(MultiPoly::one(f, vars), SeriesVar::Lower, 1);
            let one: ZSeries = Series::from_poly(MultiPoly::one(f, vars), SeriesVar::Lower);
            let lin = |i: usize| -> KPoly { MultiPoly::var(f, vars, i).minus(&MultiPoly::constant(f, vars, Frac::theta(f))) };
            let want = if s < q {
                one.clone()
            } else if s == q {
                one.minus(&z)
            } else {
                let prod = (0..s).fold(MultiPoly::one(f, vars), |acc, i| acc.times(&lin(i)));
                let sum = (0..s).fold(MultiPoly::zero(f, vars), |acc, i| acc.plus(&lin(i)));
                if got != one.minus(&z.mul_poly(&sum)) {
                    sum_form = false;
                }
                one.minus(&z.mul_poly(&prod))
            };
            if got != want {
                bad.push(format!("q={q} s={s}"));
            }
        }
    }
    let note = if sum_form { "; the sum form holds for q = 3, 4, 5" } else { "; the sum form fails too" };
    outcome(bad.is_empty(), format!("mismatches: [{}]{}", bad.join(", "), note))
}

fn c2() -> Outcome {
    let mut bad = Vec::new();
    for q in [2u32, 3, 5] {
        let f = fq(q);
        let q = q as usize;
        for s in 1..=q + (q >= 3) as usize {
            let xs = (1..=s).map(|i| format!("X{i}")).collect::<Vec<_>>().join("*");
            let want = if s < q {
                format!("{xs}*Z")
            } else if s == q {
                format!("{xs}*Z - {xs}*Z^{q}")
            } else {
                let pw = (1..=s).map(|i| format!("X{i}^{}", q - 1)).collect::<Vec<_>>().join(" + ");
                format!("{xs}*Z - {xs}*({pw})*Z^{q}")
            };
            let want = parse_series(f, &want, Some(Vars::x_only(s))).unwrap();
            if special_poly(f, s).unwrap().to_k() != want {
                bad.push(format!("q={q} s={s}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("q in {{2,3,5}}, mismatches: [{}]", bad.join(", ")))
}

fn c3() -> Outcome {
    let mut bad = Vec::new();
    let mut oracle_checked = 0;
    for q in [2u32, 3] {
        let f = fq(q);
        let mut rng = ChaCha8Rng::seed_from_u64(20 + q as u64);
        for i in 0..50 {
            let p = random_f(f, &mut rng);
            let k0 = termination_index(&p).unwrap();
            let res = match log_algebraic(&p) {
                Ok(r) => r,
                Err(e) => {
                    bad.push(format!("q={q} #{i}: {e}"));
                    continue;
                }
            };
            if q == 2 {
                // the definition, summed over all monics of degree ≤ k0+1
                let z = z_oracle(&p, k0 + 1);
                let integral = z[..=k0].iter().all(|zk| zk.is_integral());
                let same = z[..=k0].iter().zip(&res.zk).all(|(a, b)| *a == b.to_k());
                if !integral || !same || !z[k0 + 1].is_zero() {
                    bad.push(format!("q={q} #{i}: oracle disagrees"));
                }
                oracle_checked += 1;
            }
        }
    }
    outcome(bad.is_empty(), format!("100 samples, {oracle_checked} against the direct definition; failures: [{}]", bad.join(", ")))
}

fn c4() -> Outcome {
    let mut bad = Vec::new();
    for q in [2u32, 3] {
        let f = fq(q);
        for s in 1..=2 * q as usize {
            let a = sigma_via_exp(f, s).unwrap().sigma;
            let b = sigma_via_extraction(f, s).unwrap().sigma;
            if a != b {
                bad.push(format!("q={q} s={s}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("s <= 2q, mismatches: [{}]", bad.join(", ")))
}

/// First d ≤ 8 where l_{r−1}^{q^r−N} ∏b_r(t_i) L_d ≠ Σ_j θ^j Σ_k ∏b_k(t_i) φ^k(h_{j,d−k}) w_k / l_k^N,
/// with both sides multiplied by λ^N.
fn polylog_first_mismatch(f: Field, big_n: u32, n: usize, r: u32, corrected: bool, lhs: &[(APoly, ThetaPoly)]) -> Option<usize> {
    let dec = polylog_build(f, big_n as i64, n, r).unwrap();
    let vars = Vars::t_only(n);
    let e = qpow(f, r as usize) - big_n as u64;
    let m = b_prod(f, vars, r as usize).scale(&l(f, r as usize - 1).pow(e));
    for (d, (num, den)) in lhs.iter().enumerate() {
        let left = num.times(&m);
        let mut right = MultiPoly::zero(f, vars);
        for k in 0..=d {
            let mut w = den.exact_div(&l(f, k).pow(big_n as u64)).unwrap();
            if corrected {
                w = &w * &l(f, k + r as usize - 1).exact_div(&l(f, k)).unwrap().pow(e);
            }
            let bk = b_prod(f, vars, k);
            for (j, h) in dec.h.iter().enumerate() {
                if let Some(c) = h.coeff_ref((d - k) as u64) {
                    let term = bk.times(&phi_a(c, k)).scale(&(&w * &th_pow(f, j as u64)));
                    right.add_assign(&term);
                }
            }
        }
        if left != right {
            return Some(d);
        }
    }
    None
}

fn c5() -> Outcome {
    let mut stated_ok = true;
    let mut lines = Vec::new();
    let mut corrected_ok = true;
    for (q, big_n, n, r) in [(2u32, 1u32, 1usize, 1u32), (2, 3, 2, 2), (3, 2, 1, 1), (3, 5, 2, 2)] {
        let f = fq(q);
        let lhs: Vec<(APoly, ThetaPoly)> = (0..=8).map(|d| l_coeff_oracle(f, big_n, n, d)).collect();
        let st = polylog_first_mismatch(f, big_n, n, r, false, &lhs);
        let co = polylog_first_mismatch(f, big_n, n, r, true, &lhs);
        stated_ok &= st.is_none();
        corrected_ok &= co.is_none();
        let fmt = |m: Option<usize>| m.map(|d| format!("fails at z^{d}")).unwrap_or_else(|| "holds".into());
        lines.push(format!("({q},{big_n},{n},{r}) stated {}, corrected {}", fmt(st), fmt(co)));
        // the library's own comparison must agree with the oracle
        let dec = polylog_build(f, big_n as i64, n, r).unwrap();
        assert_eq!(dec.first_mismatch(9, PolylogWeights::Stated).unwrap(), st.map(|d| d as u64));
        assert_eq!(dec.first_mismatch(9, PolylogWeights::Corrected).unwrap(), co.map(|d| d as u64));
    }
    assert!(corrected_ok, "the corrected identity must hold: {lines:?}");
    outcome(stated_ok, format!("through z^8: {}", lines.join("; ")))
}

fn c6() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for q in [2u32, 3] {
        let f = fq(q);
        let q1 = q as usize - 1;
        for s in 1..=2 * q as usize + 1 {
            let nv = s - 1;
            let from = s.div_ceil(q1);
            for k in from.saturating_sub(1)..=from + 2 {
                let oracle = l_coeff_neg_oracle(f, 0, nv, k);
                let lib = power_sum(f, k, nv).unwrap();
                if oracle != lib {
                    bad.push(format!("q={q} s={s} k={k}: library differs from enumeration"));
                }
                if k >= from && !oracle.is_zero() {
                    bad.push(format!("q={q} s={s} k={k}: nonzero"));
                }
                checked += 1;
            }
        }
        for j in 0..=2u32 {
            let m = (q as u64).pow(j) - 1;
            let bound = (m / q1 as u64) as usize;
            let mut total = ThetaPoly::zero(f);
            for d in 0..=bound + 3 {
                let v = monics(f, d).iter().fold(ThetaPoly::zero(f), |acc, a| &acc + &a.pow(m));
                if Frac::from_poly(v.clone()) != scalar_power_sum(f, d, m).unwrap() {
                    bad.push(format!("q={q} j={j} d={d}: library differs"));
                }
                if d > bound && !v.is_zero() {
                    bad.push(format!("q={q} j={j} d={d}: nonzero"));
                }
                total = &total + &v;
            }
            if total != if j == 0 { ThetaPoly::one(f) } else { ThetaPoly::zero(f) } {
                bad.push(format!("q={q} j={j}: total"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} power sums by enumeration; failures: [{}]", bad.join(", ")))
}

fn c7() -> Outcome {
    let mut bad = Vec::new();
    for (q, big_n, s) in [(2u32, 0u32, 1usize), (2, 1, 1), (3, 0, 1), (3, 0, 2), (3, 1, 1)] {
        let f = fq(q);
        let xv = Vars::x_only(s);
        // L(−N,s,z).(X_1⋯X_s Z) with t^e.(X_1⋯X_s) = ∏ C_{θ^{e_i}}(X_i), z^d Z ↦ Z^{q^d}
        let mut want: ZSeries = Series::zero(f, xv, SeriesVar::Upper, None);
        for d in 0..=6 {
            let c = l_coeff_neg_oracle(f, big_n, s, d);
            if d >= 5 {
                assert!(c.is_zero(), "L(-{big_n},{s},z) has degree >= 5");
            }
            let mut acted = MultiPoly::zero(f, xv);
            for (e, a) in c.terms() {
                let mut term = MultiPoly::constant(f, xv, Frac::from_poly(a.clone()));
                for (i, &k) in e.exps().iter().enumerate() {
                    term = term.times(&carlitz_poly_oracle(&th_pow(f, k as u64), xv, i));
                }
                acted.add_assign(&term);
            }
            want.add_coeff(qpow(f, d), &acted);
        }
        match negative_l_via_derivative(f, big_n, s) {
            Ok(v) if v == want => {}
            Ok(_) => bad.push(format!("({q},{big_n},{s}) differs from the enumeration")),
            Err(e) => bad.push(format!("({q},{big_n},{s}): {e}")),
        }
    }
    outcome(bad.is_empty(), format!("5 cases; failures: [{}]", bad.join(", ")))
}

fn c8() -> Outcome {
    let budget = std::env::var("STARK_SIGMA_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(SIGMA_BUDGET);
    let mut bad = Vec::new();
    let mut skipped = Vec::new();
    let mut verified = Vec::new();
    for q in [2u32, 3] {
        let f = fq(q);
        let mut top = 0;
        for s in 1..=10usize {
            let cost = sigma_report_cost(q, s);
            if cost > budget {
                skipped.push(format!("q={q} s={s} ({cost:.0e})"));
                continue;
            }
            let rep = sigma_report(f, s).unwrap();
            let expected = s > 1 && (s - 1) % (q as usize - 1) == 0;
            let deg_ok = rep.deg_z.is_some_and(|d| d <= degree_bound(q, s));
            if !deg_ok || rep.divisible != expected || !rep.log_ok {
                bad.push(format!("q={q} s={s}"));
            }
            // the full unit where it is cheap: degree and σ(t,1) directly
            if (q == 2 && s <= 6) || (q == 3 && s <= 7) {
                let u = sigma_via_exp(f, s).unwrap();
                let at_one_zero = sigma_at_one(&u).unwrap().is_zero();
                if u.sigma.degree() != rep.deg_z || at_one_zero != rep.divisible {
                    bad.push(format!("q={q} s={s}: report differs from the full unit"));
                }
            }
            top = s;
        }
        verified.push(format!("q={q} s<={top}"));
    }
    let ok = bad.is_empty() && skipped.is_empty();
    outcome(
        ok,
        format!("verified {}; not run: [{}]; failures: [{}]", verified.join(", "), skipped.join(", "), bad.join(", ")),
    )
}

fn c9() -> Outcome {
    let mut bad = Vec::new();
    let mut stated = Vec::new();
    for q in [2u32, 3] {
        let f = fq(q);
        let mut rng = ChaCha8Rng::seed_from_u64(90 + q as u64);
        for nv in 1..=3usize {
            let vars = Vars::x_only(nv);
            for e in tuples(nv, 6).into_iter().filter(|e| e.iter().sum::<u32>() <= 6) {
                let total: u32 = e.iter().sum();
                let m = MultiPoly::monomial(f, vars, Monomial(e.iter().copied().collect()), Frac::one(f));
                if sup_norm(&m).unwrap() != NormValue::pow(q, total as i64) {
                    bad.push(format!("q={q} |X^{e:?}|"));
                }
            }
        }
        for i in 0..50 {
            let p = random_f(f, &mut rng);
            let np = sup_norm(&p).unwrap();
            let deg = rng.gen_range(1..=3);
            let mut c: Vec<Fe> = (0..deg).map(|_| Fe(rng.gen_range(0..q) as u8)).collect();
            c.push(Fe::ONE);
            let a = ThetaPoly::new(f, c);
            if sup_norm(&a_star(&a, &p)).unwrap() != np {
                bad.push(format!("q={q} |a*F| #{i}"));
            }
            let tv = Vars::t_only(2);
            let mut g = MultiPoly::zero(f, tv);
            for _ in 0..3 {
                let e = [rng.gen_range(0..3u32), rng.gen_range(0..3u32)];
                let num: Vec<Fe> = (0..3).map(|_| Fe(rng.gen_range(0..q) as u8)).collect();
                let den = if rng.gen_bool(0.3) { ThetaPoly::from_ints(f, &[1, 1]) } else { ThetaPoly::one(f) };
                let num = ThetaPoly::new(f, num);
                if !num.is_zero() {
                    g.add_term(Monomial(e.into_iter().collect()), Frac::new(num, den).unwrap());
                }
            }
            if g.is_zero() {
                continue;
            }
            let bound = gauss_norm_oracle(&g).mul(&np);
            let got = sup_norm(&dot_action(&g, &p).unwrap()).unwrap();
            if got != bound {
                stated.push(format!("q={q} #{i}: {got} < {bound}"));
            }
            if got > bound {
                bad.push(format!("q={q} |f.F| > |f|*|F| #{i}"));
            }
            // F vanishing on every X_k = 0 has no H_0 factor in its expansion
            let xp = p.times(&MultiPoly::x_product(f, p.vars()));
            let bound = gauss_norm_oracle(&g).mul(&sup_norm(&xp).unwrap());
            if sup_norm(&dot_action(&g, &xp).unwrap()).unwrap() != bound {
                bad.push(format!("q={q} |f.(X1*X2*F)| #{i}"));
            }
        }
        // t_1 fixes X_2, so (t_1 - 1).X_2 = 0
        let xv = Vars::x_only(2);
        let tv = Vars::t_only(2);
        let g = MultiPoly::var(f, tv, 0).minus(&MultiPoly::one(f, tv));
        let x2: KPoly = MultiPoly::var(f, xv, 1);
        if !dot_action(&g, &x2).unwrap().is_zero() {
            bad.push(format!("q={q} (t1 - 1).X2 != 0"));
        }
        stated.push(format!("q={q}: |(t1 - 1).X2| = 0 < {}", sup_norm(&x2).unwrap()));
        let t1: KPoly = MultiPoly::var(f, Vars::t_only(1), 0);
        for n in 0..=q.pow(3) {
            let h = h_poly(f, n);
            if sup_norm(&h).unwrap() != NormValue::pow(q, digit_sum(n as u64, q as u64) as i64) {
                bad.push(format!("q={q} |H_{n}|"));
            }
            if n <= q.pow(2) && dot_action(&t1, &h).unwrap() != h_poly(f, q * n) {
                bad.push(format!("q={q} t.H_{n}"));
            }
        }
    }
    // the product identity as stated is checked on the same samples; it
    // fails whenever some t_i meets a term of F free of X_i
    let ok = bad.is_empty() && stated.is_empty();
    outcome(
        ok,
        format!(
            "q in {{2,3}}; other failures: [{}]; |f.F| = |f|*|F| fails for [{}]; holds with <= everywhere and with = for F in X1*X2*K[X]",
            bad.join(", "),
            stated.join(", ")
        ),
    )
}

fn c10() -> Outcome {
    let f = fq(3);
    let mut lines = Vec::new();
    let mut ok = true;
    for s in 3..=5usize {
        let cutoff = 12;
        let lv = l_value_approx(f, 1, s, cutoff, 16).unwrap();
        // the omitted tail Σ_{d>12} has norm at most q^{−13}
        let e = exp_tau_approx(&lv, -(cutoff as i64 + 1), 14).unwrap();
        let exact = sigma_at_one(&sigma_via_exp(f, s).unwrap()).unwrap().to_k();
        let dist = approx_distance(&e.value, &exact, e.certified).unwrap();
        let good = e.certified >= 10 && dist.is_none_or(|d| d <= -10);
        ok &= good;
        lines.push(format!("s={s} certified q^-{} distance {:?}", e.certified, dist.map(|d| format!("q^{d}"))));
    }
    outcome(ok, lines.join("; "))
}

#[test]
fn acceptance() {
    type Criterion = (u32, fn() -> Outcome, Option<f64>);
    let all: [Criterion; 10] = [
        (1, c1, Some(60.0)),
        (2, c2, Some(120.0)),
        (3, c3, Some(600.0)),
        (4, c4, None),
        (5, c5, Some(600.0)),
        (6, c6, None),
        (7, c7, None),
        (8, c8, None),
        (9, c9, None),
        (10, c10, Some(60.0)),
    ];
    let known: HashMap<u32, &str> = KNOWN_FAILURES.iter().copied().collect();
    // STARK_ACCEPTANCE_ONLY=3,7 runs a subset
    let only: Option<Vec<u32>> = std::env::var("STARK_ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut unexpected = Vec::new();
    for (n, run, limit) in all {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let t = Instant::now();
        let mut o = run();
        let secs = t.elapsed().as_secs_f64();
        if let Some(lim) = limit {
            if secs > lim {
                o.ok = false;
                o.summary = format!("{} (over the {lim:.0} s limit)", o.summary);
            }
        }
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {n}: {status} [{secs:.1} s] {}", o.summary);
        match (o.ok, known.get(&n)) {
            (false, Some(why)) => println!("  known failure: {why}"),
            (false, None) => unexpected.push(n),
            (true, Some(_)) => {
                println!("  listed as a known failure but passed");
                unexpected.push(n);
            }
            (true, None) => {}
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcomes for criteria {unexpected:?}");
}
