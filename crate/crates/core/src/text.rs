//! The canonical text grammar and the JSON form of polynomials and series.
//!
//! Text: a sum of terms, each a product of factors. Coefficients are
//! integers (prime q) or powers of the fixed generator `g` (any q); the
//! variables are `th` (θ), `t1..ts`, `X1..Xs` and one series variable `z`
//! or `Z`. A trailing `O(z^p)` marks a truncated series. Printing lists
//! series exponents in ascending order and, within one exponent, monomials
//! in descending graded-lexicographic order, so equal values always print
//! identically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field, FieldSpec, Fq};
use crate::frac::Frac;
use crate::multipoly::{KPoly, Monomial, MultiPoly, Vars};
use crate::poly::ThetaPoly;
use crate::scalar::Scalar;
use crate::series::{SeriesVar, ZSeries, Series};

/// Sign and magnitude of an element of F_q for printing: prime fields use
/// the balanced residue, other fields print `g^k`.
fn fe_parts(f: Field, a: Fe) -> (bool, String) {
    if f.is_prime_field() {
        let p = f.p() as i64;
        let r = a.0 as i64;
        if r > p / 2 && p > 2 {
            (true, (p - r).to_string())
        } else {
            (false, r.to_string())
        }
    } else {
        match f.gen_log(a) {
            None => (false, "0".into()),
            Some(0) => (false, "1".into()),
            Some(1) => (false, "g".into()),
            Some(k) => (false, format!("g^{k}")),
        }
    }
}

pub fn fe_to_string(f: Field, a: Fe) -> String {
    let (neg, body) = fe_parts(f, a);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn theta_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "th".into(),
        _ => format!("th^{k}"),
    }
}

/// Joins signed terms as `a - b + c`.
fn join_signed(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (neg, body) in parts {
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn theta_poly_parts(p: &ThetaPoly) -> Vec<(bool, String)> {
    let f = p.field();
    let mut parts = Vec::new();
    for k in (0..p.coeffs().len()).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let (neg, body) = fe_parts(f, c);
        let tp = theta_power(k);
        let term = if k == 0 {
            body
        } else if body == "1" {
            tp
        } else {
            format!("{body}*{tp}")
        };
        parts.push((neg, term));
    }
    parts
}

pub fn theta_poly_to_string(p: &ThetaPoly) -> String {
    join_signed(theta_poly_parts(p))
}

/// Printing of a coefficient inside a term: returns (negative, text of the
/// absolute value, whether that text binds as a single factor).
pub trait CoeffText {
    fn coeff_text(&self) -> (bool, String, bool);
    /// Stand-alone signed text.
    fn plain_text(&self) -> String {
        let (neg, body, atomic) = self.coeff_text();
        if neg {
            format!("-{}", wrap(body, atomic))
        } else {
            body
        }
    }
}

impl CoeffText for ThetaPoly {
    fn coeff_text(&self) -> (bool, String, bool) {
        let parts = theta_poly_parts(self);
        let neg = parts.first().is_some_and(|p| p.0);
        let atomic = parts.len() <= 1;
        let body = if neg {
            theta_poly_to_string(&-self)
        } else {
            join_signed(parts)
        };
        (neg, body, atomic)
    }
    fn plain_text(&self) -> String {
        theta_poly_to_string(self)
    }
}

fn wrap(s: String, atomic: bool) -> String {
    if atomic {
        s
    } else {
        format!("({s})")
    }
}

impl CoeffText for Frac {
    fn coeff_text(&self) -> (bool, String, bool) {
        let (neg, num, num_atomic) = self.num().coeff_text();
        if self.den().is_one() {
            return (neg, num, num_atomic);
        }
        let (_, den, den_atomic) = self.den().coeff_text();
        (neg, format!("{}/{}", wrap(num, num_atomic), wrap(den, den_atomic)), true)
    }
    fn plain_text(&self) -> String {
        if self.den().is_one() {
            return theta_poly_to_string(self.num());
        }
        let (neg, body, _) = self.coeff_text();
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

pub fn frac_to_string(x: &Frac) -> String {
    x.plain_text()
}

fn monomial_text(vars: Vars, m: &Monomial, extra: Option<(SeriesVar, u64)>) -> String {
    let mut factors = Vec::new();
    for (k, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(vars.name(k)),
            _ => factors.push(format!("{}^{e}", vars.name(k))),
        }
    }
    if let Some((v, e)) = extra {
        match e {
            0 => {}
            1 => factors.push(v.name().to_string()),
            _ => factors.push(format!("{}^{e}", v.name())),
        }
    }
    factors.join("*")
}

fn term_parts<C: Scalar + CoeffText>(
    p: &MultiPoly<C>,
    extra: Option<(SeriesVar, u64)>,
    out: &mut Vec<(bool, String)>,
) {
    let vars = p.vars();
    for (m, c) in p.terms().rev() {
        let (neg, body, atomic) = c.coeff_text();
        let mono = monomial_text(vars, m, extra);
        let term = if mono.is_empty() {
            wrap(body, atomic)
        } else if body == "1" {
            mono
        } else {
            format!("{}*{mono}", wrap(body, atomic))
        };
        out.push((neg, term));
    }
}

pub fn poly_to_string<C: Scalar + CoeffText>(p: &MultiPoly<C>) -> String {
    if p.len() == 1 && p.is_constant() {
        return p.constant_term().plain_text();
    }
    let mut parts = Vec::new();
    term_parts(p, None, &mut parts);
    join_signed(parts)
}

pub fn series_to_string<C: Scalar + CoeffText>(s: &Series<C>) -> String {
    if s.is_exact() && s.degree() == Some(0) {
        return poly_to_string(&s.coeff(0));
    }
    let mut parts = Vec::new();
    for (k, c) in s.coeffs() {
        term_parts(c, Some((s.var(), k)), &mut parts);
    }
    let mut out = join_signed(parts);
    if let Some(p) = s.prec() {
        let o = match p {
            0 => "O(1)".to_string(),
            1 => format!("O({})", s.var().name()),
            _ => format!("O({}^{p})", s.var().name()),
        };
        if s.is_zero() {
            out = o;
        } else {
            out.push_str(" + ");
            out.push_str(&o);
        }
    }
    out
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n = s[st..i]
                .parse::<u64>()
                .map_err(|_| Error::Parse { pos: st, msg: "integer too large".into() })?;
            out.push((st, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && b[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Atom {
    Int(u64),
    Gen,
    Theta,
    T(usize),
    X(usize),
    Series(SeriesVar),
}

#[derive(Clone, Debug)]
enum Expr {
    Atom(Atom),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u64),
    /// O(v^p)
    BigO(SeriesVar, u64),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.power()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.i += 1;
                e = Expr::Div(Box::new(e), Box::new(self.power()?), pos);
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let a = self.atom()?;
        if self.eat('^') {
            match self.peek() {
                Some(Tok::Num(n)) => {
                    let n = *n;
                    self.i += 1;
                    Ok(Expr::Pow(Box::new(a), n))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Num(n) => {
                self.i += 1;
                Ok(Expr::Atom(Atom::Int(n)))
            }
            Tok::Op('(') => {
                self.i += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Tok::Op(c) => self.err(format!("unexpected '{c}'")),
            Tok::Ident(name) => {
                let pos = self.pos();
                self.i += 1;
                let bad = |msg: String| Err(Error::Parse { pos, msg });
                let index = |rest: &str| -> Option<usize> {
                    (!rest.is_empty() && !rest.starts_with('0'))
                        .then(|| rest.parse::<usize>().ok())
                        .flatten()
                };
                match name.as_str() {
                    "th" => Ok(Expr::Atom(Atom::Theta)),
                    "g" => Ok(Expr::Atom(Atom::Gen)),
                    "z" => Ok(Expr::Atom(Atom::Series(SeriesVar::Lower))),
                    "Z" => Ok(Expr::Atom(Atom::Series(SeriesVar::Upper))),
                    "O" => self.big_o(),
                    _ if name.starts_with('t') => match index(&name[1..]) {
                        Some(i) => Ok(Expr::Atom(Atom::T(i))),
                        None => bad(format!("bad variable name '{name}'")),
                    },
                    _ if name.starts_with('X') => match index(&name[1..]) {
                        Some(i) => Ok(Expr::Atom(Atom::X(i))),
                        None => bad(format!("bad variable name '{name}'")),
                    },
                    _ => bad(format!("unknown identifier '{name}'")),
                }
            }
        }
    }

    fn big_o(&mut self) -> Result<Expr> {
        if !self.eat('(') {
            return self.err("expected '(' after O");
        }
        let r = match self.peek().cloned() {
            Some(Tok::Num(1)) => {
                self.i += 1;
                return self.err("O(1) has no series variable");
            }
            Some(Tok::Ident(v)) if v == "z" || v == "Z" => {
                self.i += 1;
                let var = if v == "z" { SeriesVar::Lower } else { SeriesVar::Upper };
                let mut p = 1;
                if self.eat('^') {
                    match self.peek() {
                        Some(Tok::Num(n)) => {
                            p = *n;
                            self.i += 1;
                        }
                        _ => return self.err("expected exponent"),
                    }
                }
                Expr::BigO(var, p)
            }
            _ => return self.err("expected z or Z inside O(...)"),
        };
        if !self.eat(')') {
            return self.err("expected ')'");
        }
        Ok(r)
    }
}

/// Variable usage collected before evaluation.
#[derive(Default)]
struct Usage {
    t: usize,
    x: usize,
    var: Option<SeriesVar>,
    clash: bool,
}

fn scan(e: &Expr, u: &mut Usage) {
    let note = |v: SeriesVar, u: &mut Usage| {
        if u.var.is_some_and(|w| w != v) {
            u.clash = true;
        }
        u.var = Some(v);
    };
    match e {
        Expr::Atom(Atom::T(i)) => u.t = u.t.max(*i),
        Expr::Atom(Atom::X(i)) => u.x = u.x.max(*i),
        Expr::Atom(Atom::Series(v)) => note(*v, u),
        Expr::BigO(v, _) => note(*v, u),
        Expr::Atom(_) => {}
        Expr::Neg(a) | Expr::Pow(a, _) => scan(a, u),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            scan(a, u);
            scan(b, u);
        }
    }
}

struct Eval {
    field: Field,
    vars: Vars,
    var: SeriesVar,
}

impl Eval {
    fn constant(&self, c: Frac) -> ZSeries {
        Series::from_poly(MultiPoly::constant(self.field, self.vars, c), self.var)
    }

    fn eval(&self, e: &Expr) -> Result<ZSeries> {
        let f = self.field;
        Ok(match e {
            Expr::Atom(a) => match a {
                Atom::Int(n) => self.constant(Frac::constant(f, f.from_int((*n % f.p() as u64) as i64))),
                Atom::Gen => self.constant(Frac::constant(f, f.generator())),
                Atom::Theta => self.constant(Frac::theta(f)),
                Atom::T(i) => Series::from_poly(MultiPoly::t(f, self.vars, *i)?, self.var),
                Atom::X(i) => Series::from_poly(MultiPoly::x(f, self.vars, *i)?, self.var),
                Atom::Series(_) => Series::monomial(MultiPoly::one(f, self.vars), self.var, 1),
            },
            Expr::BigO(_, p) => Series::zero(f, self.vars, self.var, Some(*p)),
            Expr::Neg(a) => self.eval(a)?.negated(),
            Expr::Add(a, b) => self.eval(a)?.plus(&self.eval(b)?),
            Expr::Sub(a, b) => self.eval(a)?.minus(&self.eval(b)?),
            Expr::Mul(a, b) => self.eval(a)?.times(&self.eval(b)?),
            Expr::Pow(a, n) => {
                let base = self.eval(a)?;
                let mut r = Series::one(f, self.vars, self.var);
                let mut sq = base;
                let mut n = *n;
                while n > 0 {
                    if n & 1 == 1 {
                        r = r.times(&sq);
                    }
                    n >>= 1;
                    if n > 0 {
                        sq = sq.times(&sq);
                    }
                }
                r
            }
            Expr::Div(a, b, pos) => {
                let num = self.eval(a)?;
                let den = self.eval(b)?;
                let c = (den.is_exact() && den.degree().unwrap_or(0) == 0)
                    .then(|| den.coeff(0))
                    .filter(|p| p.is_constant())
                    .map(|p| p.constant_term())
                    .ok_or_else(|| Error::Parse {
                        pos: *pos,
                        msg: "only division by elements of F_q(th) is supported".into(),
                    })?;
                let inv = c.inv().map_err(|_| Error::Parse { pos: *pos, msg: "division by zero".into() })?;
                num.scale(&inv)
            }
        })
    }
}

/// A parsed expression: the value and whether a series variable occurred.
pub struct Parsed {
    pub value: ZSeries,
    pub series_var: Option<SeriesVar>,
}

/// Parses an expression. Without `vars` the variable families are sized by
/// the largest index that occurs; with `vars`, larger indices are rejected.
pub fn parse_expr(field: Field, text: &str, vars: Option<Vars>) -> Result<Parsed> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, i: 0, end: text.len() };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    let mut u = Usage::default();
    scan(&e, &mut u);
    if u.clash {
        return Err(Error::Parse { pos: 0, msg: "both z and Z occur".into() });
    }
    let vars = match vars {
        None => Vars { t: u.t, x: u.x },
        Some(v) => {
            if u.t > v.t {
                return Err(Error::InvalidVariable { index: u.t, max: v.t });
            }
            if u.x > v.x {
                return Err(Error::InvalidVariable { index: u.x, max: v.x });
            }
            v
        }
    };
    let ev = Eval { field, vars, var: u.var.unwrap_or(SeriesVar::Lower) };
    Ok(Parsed { value: ev.eval(&e)?, series_var: u.var })
}

/// Parses a polynomial free of z and Z.
pub fn parse_poly(field: Field, text: &str, vars: Option<Vars>) -> Result<KPoly> {
    let p = parse_expr(field, text, vars)?;
    if p.series_var.is_some() {
        return Err(Error::Parse { pos: 0, msg: "unexpected series variable".into() });
    }
    Ok(p.value.coeff(0))
}

/// Parses a series (or polynomial) in z or Z.
pub fn parse_series(field: Field, text: &str, vars: Option<Vars>) -> Result<ZSeries> {
    Ok(parse_expr(field, text, vars)?.value)
}

// ---------------------------------------------------------------- JSON

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonTerm {
    /// Coefficients of the numerator in θ, lowest first, as field encodings.
    pub num: Vec<u32>,
    pub den: Vec<u32>,
    pub exps: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonPoly {
    pub q: u32,
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<u64>,
    pub terms: Vec<JsonTerm>,
}

fn var_names(vars: Vars, var: Option<SeriesVar>) -> Vec<String> {
    let mut v: Vec<String> = (0..vars.len()).map(|k| vars.name(k)).collect();
    if let Some(s) = var {
        v.push(s.name().to_string());
    }
    v
}

fn coeff_list(p: &ThetaPoly) -> Vec<u32> {
    p.coeffs().iter().map(|c| c.0 as u32).collect()
}

/// JSON form of a series; `series_var` = false drops the variable (for
/// plain polynomials stored as series of degree 0).
pub fn series_to_json(s: &ZSeries, series_var: bool) -> JsonPoly {
    let f = s.field();
    let vars = s.vars();
    let names = var_names(vars, series_var.then_some(s.var()));
    let mut terms = Vec::new();
    for (k, c) in s.coeffs() {
        for (m, x) in c.terms().rev() {
            let mut exps = BTreeMap::new();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    exps.insert(vars.name(i), e);
                }
            }
            if k > 0 {
                exps.insert(s.var().name().to_string(), k as u32);
            }
            terms.push(JsonTerm { num: coeff_list(x.num()), den: coeff_list(x.den()), exps });
        }
    }
    JsonPoly {
        q: f.q(),
        e: f.e(),
        modulus: (!f.is_prime_field()).then(|| f.modulus()),
        vars: names,
        prec: s.prec(),
        terms,
    }
}

pub fn poly_to_json(p: &KPoly) -> JsonPoly {
    series_to_json(&Series::from_poly(p.clone(), SeriesVar::Lower), false)
}

/// Reads the JSON form back, returning the field and the value.
pub fn series_from_json(j: &JsonPoly) -> Result<(Field, ZSeries, Option<SeriesVar>)> {
    let spec = FieldSpec::from_q(j.q)?;
    if spec.e != j.e {
        return Err(Error::InvalidField(format!("q = {} does not have e = {}", j.q, j.e)));
    }
    let f = Fq::get(&FieldSpec { modulus: j.modulus.clone(), ..spec })?;
    let mut t = 0;
    let mut x = 0;
    let mut var = None;
    let bad = |m: String| Error::Parse { pos: 0, msg: m };
    for n in &j.vars {
        match n.as_str() {
            "z" => var = Some(SeriesVar::Lower),
            "Z" => var = Some(SeriesVar::Upper),
            _ if n.starts_with('t') => t = t.max(n[1..].parse::<usize>().map_err(|_| bad(format!("bad variable {n}")))?),
            _ if n.starts_with('X') => x = x.max(n[1..].parse::<usize>().map_err(|_| bad(format!("bad variable {n}")))?),
            _ => return Err(bad(format!("bad variable {n}"))),
        }
    }
    let vars = Vars { t, x };
    let elem = |c: &[u32]| -> Result<ThetaPoly> {
        let v = c
            .iter()
            .map(|&a| if a < f.q() { Ok(Fe(a as u8)) } else { Err(bad(format!("coefficient {a} out of range"))) })
            .collect::<Result<Vec<_>>>()?;
        Ok(ThetaPoly::new(f, v))
    };
    let mut s = Series::zero(f, vars, var.unwrap_or(SeriesVar::Lower), j.prec);
    for term in &j.terms {
        let c = Frac::new(elem(&term.num)?, elem(&term.den)?)?;
        let mut m = Monomial::one(vars.len());
        let mut k = 0u64;
        for (name, &e) in &term.exps {
            match name.as_str() {
                "z" | "Z" => k = e as u64,
                _ if name.starts_with('t') => {
                    let i = name[1..].parse::<usize>().map_err(|_| bad(format!("bad variable {name}")))?;
                    m.0[vars.t_index(i)?] = e;
                }
                _ if name.starts_with('X') => {
                    let i = name[1..].parse::<usize>().map_err(|_| bad(format!("bad variable {name}")))?;
                    m.0[vars.x_index(i)?] = e;
                }
                _ => return Err(bad(format!("bad variable {name}"))),
            }
        }
        s.add_coeff(k, &MultiPoly::monomial(f, vars, m, c));
    }
    Ok((f, s, var))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_balanced_residues() {
        let f = Fq::with_q(3).unwrap();
        let s = parse_series(f, "1 - z", None).unwrap();
        assert_eq!(series_to_string(&s), "1 - z");
        let p = parse_poly(f, "2*th^2 + th", None).unwrap();
        assert_eq!(poly_to_string(&p), "-th^2 + th");
        let q = parse_poly(f, "(2*th^2 + th)*t1 + th^2 + 1", None).unwrap();
        assert_eq!(poly_to_string(&q), "-(th^2 - th)*t1 + (th^2 + 1)");
    }

    #[test]
    fn grammar_round_trip() {
        let f = Fq::with_q(5).unwrap();
        for src in [
            "(th^2 + 1)*t1^3*t2 + 2*t1",
            "X1*X2*Z + X1*X2*Z^2",
            "(th + 1)/th*t1 - 1/(th^2 - 2)",
            "1 - t1*t2*z + O(z^3)",
            "0",
        ] {
            let a = parse_series(f, src, None).unwrap();
            let b = parse_series(f, &series_to_string(&a), Some(a.vars())).unwrap();
            assert_eq!(a, b, "{src}");
        }
    }

    #[test]
    fn generator_notation() {
        let f = Fq::with_q(4).unwrap();
        let p = parse_poly(f, "g^2*th + g*g", None).unwrap();
        assert_eq!(poly_to_string(&p), "g^2*th + g^2");
    }

    #[test]
    fn parse_errors_carry_position() {
        let f = Fq::with_q(2).unwrap();
        assert!(matches!(parse_poly(f, "t1 + $", None), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_poly(f, "t1/t2", None), Err(Error::Parse { .. })));
        assert!(parse_series(f, "z + Z", None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = Fq::with_q(9).unwrap();
        let s = parse_series(f, "g^3/(th + g)*t1*X2*Z^3 + th + O(Z^5)", None).unwrap();
        let j = series_to_json(&s, true);
        let text = serde_json::to_string(&j).unwrap();
        let back: JsonPoly = serde_json::from_str(&text).unwrap();
        let (f2, s2, v) = series_from_json(&back).unwrap();
        assert!(std::ptr::eq(f, f2));
        assert_eq!(v, Some(SeriesVar::Upper));
        assert_eq!(s, s2);
    }
}
