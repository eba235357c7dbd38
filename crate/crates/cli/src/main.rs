use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stark_units::cache::Cache;
use stark_units::carlitz::carlitz_action;
use stark_units::logalg::{log_algebraic, search_fixed};
use stark_units::lseries::{l_series, polylog_build, polylog_corollary_x, PolylogWeights};
use stark_units::norms::sup_norm;
use stark_units::selfcheck::{self, Check};
use stark_units::stark::{degree_bound, extract_sigma};
use stark_units::text::{parse_poly, poly_to_json, poly_to_string, series_to_json, series_to_string};
use stark_units::{Error, Field, FieldSpec, Fq, KPoly, Series, SeriesVar, ThetaPoly, ZSeries};

#[derive(Parser)]
#[command(name = "stark", version, about = "Anderson-Stark units, special polynomials and L-series over F_q[theta]")]
struct Cli {
    /// Size of the constant field (a prime power).
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Monic modulus for non-prime q, comma separated over F_p, lowest first.
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    #[arg(long, global = true, env = "STARK_CACHE_DIR", default_value = "./cache")]
    cache_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum RouteArg {
    Exp,
    Extract,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    Stated,
    Corrected,
}

#[derive(Subcommand)]
enum Cmd {
    /// The Anderson-Stark unit sigma_s.
    Sigma {
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::Exp)]
        route: RouteArg,
    },
    /// The special polynomial S_s = L(X1...Xs, Z).
    Special {
        #[arg(long)]
        s: usize,
    },
    /// L(F, Z) for F in A[X].
    Logalg { expr: String },
    /// L(N, s, z) to z-order prec (exact for N <= 0).
    Lseries {
        #[arg(long = "N", allow_hyphen_values = true)]
        big_n: i64,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 8)]
        prec: u64,
    },
    /// The decomposition of L(N, n, z) through sigma_s, s = q^r - N + n.
    Polylog {
        #[arg(long = "N")]
        big_n: i64,
        #[arg(long)]
        n: usize,
        /// Defaults to the least r >= 1 with q^r >= N.
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, default_value_t = 8)]
        prec: u64,
        #[arg(long, value_enum, default_value_t = WeightsArg::Stated)]
        weights: WeightsArg,
    },
    /// The sup norm of F in K[X].
    Norm { expr: String },
    /// Runs the verification suite for one q.
    Selfcheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        sigma_s_max: usize,
        /// Estimated operation count above which a sigma_s check is not run.
        #[arg(long, default_value_t = 5e6)]
        budget: f64,
        #[arg(long, default_value_t = 9)]
        prec: u64,
    },
    /// Searches F in F_q[X] of bounded degree with L(F, Z) = F*Z.
    Search {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        max_deg: u32,
        #[arg(long, default_value_t = 10000)]
        limit: usize,
    },
}

struct Report {
    text: String,
    json: Value,
    checks: Vec<Check>,
}

fn check(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check { group: "cli", name: name.into(), ok, detail: detail.into() }
}

fn series_json(s: &ZSeries) -> Value {
    serde_json::to_value(series_to_json(s, true)).expect("serializable")
}

fn poly_json(p: &KPoly) -> Value {
    serde_json::to_value(poly_to_json(p)).expect("serializable")
}

fn field(cli: &Cli) -> stark_units::Result<Field> {
    let q = cli.q.ok_or_else(|| Error::InvalidInput("--q is required".into()))?;
    let spec = FieldSpec::from_q(q)?;
    Fq::get(&FieldSpec { modulus: cli.modulus.clone(), ..spec })
}

fn least_r(q: u32, big_n: i64) -> u32 {
    let mut r = 1;
    while (q as i64).pow(r) < big_n.max(1) {
        r += 1;
    }
    r
}

fn run(cli: &Cli) -> stark_units::Result<Report> {
    let f = field(cli)?;
    let q = f.q();
    let cache = Cache::new(&cli.cache_dir);
    match &cli.cmd {
        Cmd::Sigma { s, route } => {
            let mut checks = Vec::new();
            let exp = (*route != RouteArg::Extract).then(|| cache.sigma(f, *s)).transpose()?;
            let ext = (*route != RouteArg::Exp)
                .then(|| cache.special(f, *s).and_then(|sp| extract_sigma(f, *s, &sp)))
                .transpose()?
                .map(|u| u.sigma);
            if let (Some(a), Some(b)) = (&exp, &ext) {
                checks.push(check("exponential route = extraction route", a == b, ""));
            }
            let sigma = exp.or(ext).expect("one route ran").to_k();
            let bound = degree_bound(q, *s);
            let deg = sigma.degree().unwrap_or(0);
            checks.push(check(format!("deg_z sigma_{s} <= (s-1)/(q-1) = {bound}"), deg <= bound, format!("deg_z = {deg}")));
            let divisible = sigma.eval_at_one()?.is_zero();
            let expected = *s > 1 && (*s - 1) % (q as usize - 1) == 0;
            checks.push(check(
                "(z-1) divides sigma_s iff s = 1 mod q-1 and s > 1",
                divisible == expected,
                format!("divisible = {divisible}"),
            ));
            Ok(Report { text: series_to_string(&sigma), json: series_json(&sigma), checks })
        }
        Cmd::Special { s } => {
            let sp = cache.special(f, *s)?.to_k();
            let checks = vec![check("Z_k(X1...Xs) integral for k <= k0 and Z_(k0+1) = 0", true, "")];
            Ok(Report { text: series_to_string(&sp), json: series_json(&sp), checks })
        }
        Cmd::Logalg { expr } => {
            let p = parse_poly(f, expr, None)?;
            if p.vars().t != 0 {
                return Err(Error::InvalidInput("F must be a polynomial in X only".into()));
            }
            let r = log_algebraic(&p)?;
            let lf = r.lf.to_k();
            let checks = vec![
                check(format!("Z_k(F) in A[X] for k <= {}", r.k0), r.integral, ""),
                check(format!("Z_{}(F) = 0", r.k0 + 1), true, ""),
            ];
            Ok(Report { text: series_to_string(&lf), json: series_json(&lf), checks })
        }
        Cmd::Lseries { big_n, s, prec } => {
            let l = l_series(f, *big_n, *s, *prec)?;
            let v = l.to_series()?;
            let mut checks = Vec::new();
            if *big_n <= 0 {
                checks.push(check("L(N,s,z) is a polynomial in z", l.is_exact(), ""));
            }
            Ok(Report { text: series_to_string(&v), json: series_json(&v), checks })
        }
        Cmd::Polylog { big_n, n, r, prec, weights } => {
            let r = r.unwrap_or_else(|| least_r(q, *big_n));
            let w = match weights {
                WeightsArg::Stated => PolylogWeights::Stated,
                WeightsArg::Corrected => PolylogWeights::Corrected,
            };
            let dec = polylog_build(f, *big_n, *n, r)?;
            let mut checks = Vec::new();
            let t_side = dec.first_mismatch(*prec, w)?;
            checks.push(check(
                format!("L({big_n},{n},z) decomposes through sigma_{} ({w:?} weights) through z^{}", dec.s, prec - 1),
                t_side.is_none(),
                t_side.map(|k| format!("first difference at z^{k}")).unwrap_or_default(),
            ));
            let x_side = polylog_corollary_x(f, *big_n, *n, r, *prec, w);
            checks.push(check(
                "the same identity acting on X1...Xn Z",
                x_side.is_ok(),
                x_side.err().map(|e| e.to_string()).unwrap_or_default(),
            ));
            let mut lines = vec![format!("s = {}, r = {}, m = {}, d = {}", dec.s, r, dec.m, dec.d)];
            for (j, h) in dec.h.iter().enumerate() {
                lines.push(format!("h_{j} = {}", series_to_string(&h.to_k())));
            }
            let json = json!({
                "s": dec.s, "r": r, "m": dec.m, "d": dec.d,
                "h": dec.h.iter().map(|h| series_json(&h.to_k())).collect::<Vec<_>>(),
            });
            Ok(Report { text: lines.join("\n"), json, checks })
        }
        Cmd::Norm { expr } => {
            let p = parse_poly(f, expr, None)?;
            if p.vars().t != 0 {
                return Err(Error::InvalidInput("F must be a polynomial in X only".into()));
            }
            let v = sup_norm(&p)?;
            let a = ThetaPoly::from_ints(f, &[1, 1]);
            let acted = sup_norm(&carlitz_action(&a, &p))?;
            let checks = vec![check("|(th + 1)*F| = |F|", acted == v, format!("{acted}"))];
            let json = match v.exponent() {
                Some((num, den)) => json!({ "q": q, "num": num, "den": den, "text": v.to_string() }),
                None => json!({ "q": q, "zero": true, "text": v.to_string() }),
            };
            Ok(Report { text: v.to_string(), json, checks })
        }
        Cmd::Selfcheck { seed, samples, sigma_s_max, budget, prec } => {
            let o = selfcheck::Options {
                seed: *seed,
                samples: *samples,
                sigma_s_max: *sigma_s_max,
                sigma_budget: *budget,
                polylog_prec: *prec,
            };
            let checks = selfcheck::run(f, &o);
            let passed = checks.iter().filter(|c| c.ok).count();
            let text = format!("{passed}/{} checks passed for q = {q}", checks.len());
            Ok(Report { json: json!({ "q": q, "passed": passed, "total": checks.len() }), text, checks })
        }
        Cmd::Search { n, max_deg, limit } => {
            let found = search_fixed(f, *n, *max_deg, *limit)?;
            let mut checks = Vec::new();
            for p in &found {
                let r = log_algebraic(p)?;
                let want = Series::monomial(p.clone(), SeriesVar::Upper, 1);
                checks.push(check(format!("L(F,Z) = F*Z for F = {}", poly_to_string(p)), r.lf.to_k() == want, ""));
            }
            let mut lines = vec![format!("{} solutions", found.len())];
            lines.extend(found.iter().map(poly_to_string));
            let json = json!({ "solutions": found.iter().map(poly_json).collect::<Vec<_>>() });
            Ok(Report { text: lines.join("\n"), json, checks })
        }
    }
}

fn print(cli: &Cli, r: &Report) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    match cli.format {
        Format::Text => {
            writeln!(out, "{}", r.text)?;
            for c in &r.checks {
                let mark = if c.ok { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    writeln!(out, "  {mark} {}", c.name)?;
                } else {
                    writeln!(out, "  {mark} {} ({})", c.name, c.detail)?;
                }
            }
        }
        Format::Json => {
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| json!({ "group": c.group, "name": c.name, "ok": c.ok, "detail": c.detail }))
                .collect();
            writeln!(out, "{}", json!({ "result": r.json, "checks": checks }))?;
        }
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = print(&cli, &r);
            if r.checks.iter().all(|c| c.ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_verification_failure() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
