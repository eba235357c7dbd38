//! The verification suite for one field, as run by `stark selfcheck`.
//! Each check recomputes a stated identity or property and reports it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::carlitz::carlitz_action;
use crate::error::Result;
use crate::field::{Fe, Field};
use crate::frac::Frac;
use crate::logalg::{log_algebraic, negative_l_via_derivative, special_poly, termination_index, z_k};
use crate::lseries::{l_value_approx, polylog_build, power_sum, scalar_power_sum, PolylogWeights};
use crate::multipoly::{KPoly, Monomial, MultiPoly, Vars};
use crate::norms::{digit_sum, dot_action, gauss_norm_k, h_poly, sup_norm, NormValue};
use crate::poly::ThetaPoly;
use crate::stark::{
    approx_distance, degree_bound, exp_tau_approx, sigma_at_one, sigma_report, sigma_report_cost, sigma_via_exp,
    sigma_via_extraction,
};
use crate::text::{parse_series, series_to_string};

#[derive(Clone, Debug)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    fn new(group: &'static str, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check { group, name: name.into(), ok, detail: detail.into() }
    }

    fn from_result(group: &'static str, name: impl Into<String>, r: Result<bool>) -> Self {
        match r {
            Ok(ok) => Check::new(group, name, ok, ""),
            Err(e) => Check::new(group, name, false, e.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    /// Random polynomials for the log-algebraicity check.
    pub samples: usize,
    /// Largest s for the σ_s property checks.
    pub sigma_s_max: usize,
    /// Skip σ_s property checks whose estimated cost exceeds this many
    /// coefficient operations.
    pub sigma_budget: f64,
    pub polylog_prec: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 1, samples: 50, sigma_s_max: 10, sigma_budget: 5e6, polylog_prec: 9 }
    }
}

pub fn run(f: Field, o: &Options) -> Vec<Check> {
    let mut out = Vec::new();
    out.extend(closed_forms(f));
    out.extend(special_forms(f));
    out.extend(logalg_random(f, o.samples, o.seed));
    out.extend(routes(f));
    out.extend(polylog(f, o.polylog_prec));
    out.extend(power_sums(f));
    out.extend(derivative(f));
    out.extend(sigma_properties(f, o.sigma_s_max, o.sigma_budget));
    out.extend(norms(f, o.seed));
    out.extend(bridge(f));
    out
}

fn sigma_text(f: Field, s: usize) -> Result<String> {
    Ok(series_to_string(&sigma_via_exp(f, s)?.sigma.to_k()))
}

fn same_series(f: Field, got: &str, want: &str, vars: Vars) -> Result<bool> {
    Ok(parse_series(f, got, Some(vars))? == parse_series(f, want, Some(vars))?)
}

pub fn closed_forms(f: Field) -> Vec<Check> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    for s in 1..q {
        let r = sigma_text(f, s).and_then(|g| same_series(f, &g, "1", Vars::t_only(s)));
        out.push(Check::from_result("units", format!("sigma_{s} = 1"), r));
    }
    let r = sigma_text(f, q).and_then(|g| same_series(f, &g, "1 - z", Vars::t_only(q)));
    out.push(Check::from_result("units", format!("sigma_{q} = 1 - z"), r));
    if q >= 3 {
        let s = q + 1;
        let vars = Vars::t_only(s);
        let prod: Vec<String> = (1..=s).map(|i| format!("(t{i} - th)")).collect();
        let sum: Vec<String> = (1..=s).map(|i| format!("(t{i} - th)")).collect();
        let got = sigma_text(f, s);
        out.push(Check::from_result(
            "units",
            format!("sigma_{s} = 1 - (t1 - th)*...*(t{s} - th)*z"),
            got.clone().and_then(|g| same_series(f, &g, &format!("1 - {}*z", prod.join("*")), vars)),
        ));
        out.push(Check::from_result(
            "units",
            format!("sigma_{s} = 1 - ((t1 - th) + ... + (t{s} - th))*z"),
            got.and_then(|g| same_series(f, &g, &format!("1 - ({})*z", sum.join(" + ")), vars)),
        ));
    }
    out
}

pub fn special_forms(f: Field) -> Vec<Check> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    let xs = |s: usize| (1..=s).map(|i| format!("X{i}")).collect::<Vec<_>>().join("*");
    let mut cases = Vec::new();
    for s in 1..q {
        cases.push((s, format!("{}*Z", xs(s))));
    }
    cases.push((q, format!("{0}*Z - {0}*Z^{1}", xs(q), q)));
    if q >= 3 {
        let s = q + 1;
        let pw: Vec<String> = (1..=s).map(|i| format!("X{i}^{}", q - 1)).collect();
        cases.push((s, format!("{0}*Z - {0}*({1})*Z^{2}", xs(s), pw.join(" + "), q)));
    }
    for (s, want) in cases {
        let r = special_poly(f, s).and_then(|sp| Ok(sp.to_k() == parse_series(f, &want, Some(Vars::x_only(s)))?));
        out.push(Check::from_result("special", format!("S_{s} = {want}"), r));
    }
    out
}

/// A random F ∈ A[X_1,X_2] of total degree ≤ q+2 with θ-degree ≤ 2.
pub fn random_f(f: Field, rng: &mut impl Rng) -> KPoly {
    let q = f.q();
    let vars = Vars::x_only(2);
    loop {
        let mut p = MultiPoly::zero(f, vars);
        for a in 0..=q + 2 {
            for b in 0..=q + 2 - a {
                if rng.gen_bool(0.25) {
                    let c: Vec<Fe> = (0..3).map(|_| Fe(rng.gen_range(0..q) as u8)).collect();
                    p.add_term(Monomial([a, b].into_iter().collect()), Frac::from_poly(ThetaPoly::new(f, c)));
                }
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn logalg_random(f: Field, samples: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for i in 0..samples {
        let p = random_f(f, &mut rng);
        let r = log_algebraic(&p).and_then(|res| {
            let k0 = termination_index(&p)?;
            Ok(res.zk.len() == k0 + 1 && z_k(&p, k0 as i64 + 1)?.is_zero())
        });
        match r {
            Ok(true) => {}
            Ok(false) => bad.push(format!("#{i}: tail")),
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
    }
    vec![Check::new(
        "logalg",
        format!("{samples} random F: Z_k(F) in A[X] and Z_(k0+1)(F) = 0"),
        bad.is_empty(),
        bad.join("; "),
    )]
}

pub fn routes(f: Field) -> Vec<Check> {
    let q = f.q() as usize;
    let s_max = if q <= 3 { 2 * q } else { q + 1 };
    let mut bad = Vec::new();
    for s in 1..=s_max {
        match (sigma_via_exp(f, s), sigma_via_extraction(f, s)) {
            (Ok(a), Ok(b)) if a.sigma == b.sigma => {}
            (Ok(_), Ok(_)) => bad.push(format!("s={s}: differ")),
            (Err(e), _) | (_, Err(e)) => bad.push(format!("s={s}: {e}")),
        }
    }
    vec![Check::new("units", format!("exp route = extraction route, s <= {s_max}"), bad.is_empty(), bad.join("; "))]
}

/// (N, n, r) instances: r = 1 and r = 2 with s = q^r − N + n small.
pub fn polylog_cases(q: u32) -> Vec<(i64, usize, u32)> {
    let mut v = vec![(1, 1, 1)];
    match q {
        2 => v.push((3, 2, 2)),
        3 => v.extend([(2, 1, 1), (5, 2, 2)]),
        _ => v.push((q as i64 - 1, 1, 1)),
    }
    v
}

pub fn polylog(f: Field, prec: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (nn, n, r) in polylog_cases(f.q()) {
        let dec = polylog_build(f, nn, n, r);
        for w in [PolylogWeights::Stated, PolylogWeights::Corrected] {
            let name = format!("polylog identity N={nn} n={n} r={r} ({w:?} weights) through z^{}", prec - 1);
            let c = match dec.as_ref().map_err(Clone::clone).and_then(|d| d.first_mismatch(prec, w)) {
                Ok(None) => Check::new("polylog", name, true, ""),
                Ok(Some(k)) => Check::new("polylog", name, false, format!("first difference at z^{k}")),
                Err(e) => Check::new("polylog", name, false, e.to_string()),
            };
            out.push(c);
        }
    }
    out
}

pub fn power_sums(f: Field) -> Vec<Check> {
    let q = f.q() as usize;
    let mut bad = Vec::new();
    for s in 1..=2 * q + 1 {
        let nv = s - 1;
        let from = s.div_ceil(q - 1);
        for k in from..=from + 2 {
            match power_sum(f, k, nv) {
                Ok(p) if p.is_zero() => {}
                Ok(_) => bad.push(format!("k={k} s-1={nv}")),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    let mut out = vec![Check::new(
        "power sums",
        "sum over A+,k of a(t1)...a(t_(s-1)) = 0 for k >= s/(q-1)",
        bad.is_empty(),
        bad.join("; "),
    )];
    let mut bad = Vec::new();
    for j in 0..=2u32 {
        let m = (q as u64).pow(j) - 1;
        let bound = m / (q as u64 - 1);
        let mut total = Frac::zero(f);
        // the sum over d stops being nonzero after the bound
        for d in 0..=bound as usize + 2 {
            match scalar_power_sum(f, d, m) {
                Ok(v) => {
                    if d as u64 > bound && !v.is_zero() {
                        bad.push(format!("j={j} d={d} nonzero"));
                    }
                    total = &total + &v;
                }
                Err(e) => bad.push(e.to_string()),
            }
        }
        let want = if j == 0 { Frac::one(f) } else { Frac::zero(f) };
        if total != want {
            bad.push(format!("j={j} total"));
        }
    }
    out.push(Check::new(
        "power sums",
        "sum over A+,d of a^(q^j-1) vanishes for d > (q^j-1)/(q-1), totals 1, 0, 0",
        bad.is_empty(),
        bad.join("; "),
    ));
    out
}

pub fn derivative_cases(q: u32) -> Vec<(u32, usize)> {
    match q {
        2 => vec![(0, 1), (1, 1)],
        3 => vec![(0, 1), (0, 2), (1, 1)],
        _ => vec![(0, 1)],
    }
}

pub fn derivative(f: Field) -> Vec<Check> {
    derivative_cases(f.q())
        .into_iter()
        .map(|(n, s)| {
            Check::from_result(
                "logalg",
                format!("L(-{n},{s},z) acting on X1*...*X{s}*Z = derivative of S_{}", s + n as usize + 1),
                negative_l_via_derivative(f, n, s).map(|_| true),
            )
        })
        .collect()
}

pub fn sigma_properties(f: Field, s_max: usize, budget: f64) -> Vec<Check> {
    let q = f.q();
    let mut out = Vec::new();
    for s in 1..=s_max {
        let name = format!("sigma_{s}: deg_z <= {}, (z-1) | sigma iff s = 1 mod q-1 and s > 1, log_z(sigma) = L(1,s,z)", degree_bound(q, s));
        let cost = sigma_report_cost(q, s);
        if cost > budget {
            out.push(Check::new("units", name, false, format!("not run: estimated cost {cost:.1e} exceeds budget {budget:.1e}")));
            continue;
        }
        out.push(match sigma_report(f, s) {
            Ok(r) => Check::new(
                "units",
                name,
                r.ok(),
                format!("deg_z = {:?}, divisible = {}, log ok = {}", r.deg_z, r.divisible, r.log_ok),
            ),
            Err(e) => Check::new("units", name, false, e.to_string()),
        });
    }
    out
}

fn random_a(f: Field, rng: &mut impl Rng, deg: usize) -> ThetaPoly {
    let mut c: Vec<Fe> = (0..deg).map(|_| Fe(rng.gen_range(0..f.q()) as u8)).collect();
    c.push(Fe::ONE);
    ThetaPoly::new(f, c)
}

pub fn norms(f: Field, seed: u64) -> Vec<Check> {
    let q = f.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let vars = Vars::x_only(2);
    let mut bad = Vec::new();
    for a in 0..=6u32 {
        for b in 0..=6 - a {
            let m = MultiPoly::monomial(f, vars, Monomial([a, b].into_iter().collect()), Frac::one(f));
            if sup_norm(&m).ok() != Some(NormValue::pow(q, (a + b) as i64)) {
                bad.push(format!("X1^{a}*X2^{b}"));
            }
        }
    }
    out.push(Check::new("norms", "|X^i| = q^(|i|/(q-1)) for |i| <= 6", bad.is_empty(), bad.join("; ")));
    let mut bad = Vec::new();
    let mut stated = Vec::new();
    for i in 0..5 {
        let p = random_f(f, &mut rng);
        let a = random_a(f, &mut rng, 1 + i % 2);
        if sup_norm(&carlitz_action(&a, &p)).ok() != sup_norm(&p).ok() {
            bad.push(format!("sample {i}"));
        }
        let g: KPoly = {
            let tv = Vars::t_only(2);
            let mut g = MultiPoly::zero(f, tv);
            for (e1, e2) in [(0u32, 0u32), (1, 0), (0, 2), (1, 1)] {
                let deg = rng.gen_range(0..3);
                let c = random_a(f, &mut rng, deg);
                g.add_term(Monomial([e1, e2].into_iter().collect()), Frac::from_poly(c));
            }
            g
        };
        let lhs = dot_action(&g, &p).and_then(|x| sup_norm(&x));
        let rhs = sup_norm(&p).map(|n| gauss_norm_k(&g).mul(&n));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(l), Ok(r)) if l < r => stated.push(format!("sample {i}: {l} < {r}")),
            _ => bad.push(format!("|f.F| > |f|*|F| on sample {i}")),
        }
        let xp = p.times(&MultiPoly::x_product(f, p.vars()));
        let lhs = dot_action(&g, &xp).and_then(|x| sup_norm(&x));
        if lhs.ok() != sup_norm(&xp).ok().map(|n| gauss_norm_k(&g).mul(&n)) {
            bad.push(format!("|f.(X1*X2*F)| on sample {i}"));
        }
    }
    out.push(Check::new(
        "norms",
        "|a*F| = |F|, |f.F| <= |f|*|F|, and = for F in X1*X2*K[X], on random samples",
        bad.is_empty(),
        bad.join("; "),
    ));
    // t_1 fixes X_2, so the identity fails for F free of some X_i
    let tv = Vars::t_only(2);
    let g = MultiPoly::var(f, tv, 0).minus(&MultiPoly::one(f, tv));
    let x2 = MultiPoly::var(f, vars, 1);
    if dot_action(&g, &x2).map(|r| r.is_zero()).unwrap_or(false) {
        stated.push("(t1 - 1).X2 = 0".into());
    }
    out.push(Check::new("norms", "|f.F| = |f|*|F| for all F (as stated)", stated.is_empty(), stated.join("; ")));
    let mut bad = Vec::new();
    let t1 = MultiPoly::var(f, Vars::t_only(1), 0);
    for n in 0..=q.pow(3) {
        let h = h_poly(f, n);
        if sup_norm(&h).ok() != Some(NormValue::pow(q, digit_sum(n as u64, q) as i64)) {
            bad.push(format!("|H_{n}|"));
        }
        if n <= q.pow(2) && dot_action(&t1, &h).ok() != Some(h_poly(f, q * n)) {
            bad.push(format!("t.H_{n}"));
        }
    }
    out.push(Check::new("norms", "|H_N| = q^(l_q(N)/(q-1)) and t.H_N = H_(qN)", bad.is_empty(), bad.join("; ")));
    out
}

/// exp_C(L(1,s)) from the truncated series against σ_s(t,1), for
/// s ∈ {q, q+1, q+2}; the certified error must reach q^{−10}.
pub fn bridge(f: Field) -> Vec<Check> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    for s in q..=q + 2 {
        let name = format!("exp_C(L(1,{s})) matches sigma_{s}(t,1) within q^-10");
        let r = (|| -> Result<(bool, String)> {
            let cutoff = 12;
            let l = l_value_approx(f, 1, s, cutoff, 16)?;
            let e = exp_tau_approx(&l, -(cutoff as i64 + 1), 14)?;
            let exact = sigma_at_one(&sigma_via_exp(f, s)?)?.to_k();
            let dist = approx_distance(&e.value, &exact, e.certified)?;
            let ok = e.certified >= 10 && dist.is_none_or(|d| d <= -10);
            Ok((ok, format!("certified q^-{}, observed {:?}", e.certified, dist)))
        })();
        out.push(match r {
            Ok((ok, d)) => Check::new("bridge", name, ok, d),
            Err(e) => Check::new("bridge", name, false, e.to_string()),
        });
    }
    out
}
