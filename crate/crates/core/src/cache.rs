//! On-disk cache of 𝔖_s and σ_s in the canonical text grammar.
//!
//! Files live at `<dir>/q<q>/S_<s>.poly` and `<dir>/q<q>/sigma_<s>.poly`.
//! The first line is a header `# {"q":..,"s":..,"format_version":..}`; a
//! file whose header does not match is ignored and recomputed. Only fields
//! with the built-in modulus are cached.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::logalg::special_poly;
use crate::multipoly::Vars;
use crate::series::{AZSeries, SeriesVar};
use crate::stark::sigma_via_exp;
use crate::text::{parse_series, series_to_string};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct Header {
    q: u32,
    s: usize,
    format_version: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Special,
    Sigma,
}

impl Kind {
    fn stem(self) -> &'static str {
        match self {
            Kind::Special => "S",
            Kind::Sigma => "sigma",
        }
    }
    fn vars(self, s: usize) -> Vars {
        match self {
            Kind::Special => Vars::x_only(s),
            Kind::Sigma => Vars::t_only(s),
        }
    }
    fn var(self) -> SeriesVar {
        match self {
            Kind::Special => SeriesVar::Upper,
            Kind::Sigma => SeriesVar::Lower,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, f: Field, kind: Kind, s: usize) -> PathBuf {
        self.dir.join(format!("q{}", f.q())).join(format!("{}_{}.poly", kind.stem(), s))
    }

    fn usable(f: Field) -> bool {
        Fq::with_q(f.q()).is_ok_and(|g| std::ptr::eq(f, g))
    }

    /// The cached value, or `None` when absent, stale or unreadable.
    pub fn load(&self, f: Field, kind: Kind, s: usize) -> Option<AZSeries> {
        if !Self::usable(f) {
            return None;
        }
        let text = fs::read_to_string(self.path(f, kind, s)).ok()?;
        let (head, body) = text.split_once('\n')?;
        let h: Header = serde_json::from_str(head.strip_prefix("# ")?).ok()?;
        if h != (Header { q: f.q(), s, format_version: FORMAT_VERSION }) {
            return None;
        }
        let v = parse_series(f, body.trim(), Some(kind.vars(s))).ok()?;
        if v.degree().is_some_and(|d| d > 0) && v.var() != kind.var() {
            return None;
        }
        v.with_var(kind.var()).to_a()
    }

    /// Writes a verified value, replacing any previous file atomically.
    pub fn store(&self, f: Field, kind: Kind, s: usize, value: &AZSeries) -> Result<()> {
        if !Self::usable(f) {
            return Ok(());
        }
        let path = self.path(f, kind, s);
        let err = |e: std::io::Error| Error::Cache(format!("{}: {}", path.display(), e));
        fs::create_dir_all(path.parent().unwrap()).map_err(err)?;
        let head = serde_json::to_string(&Header { q: f.q(), s, format_version: FORMAT_VERSION })
            .map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = path.with_extension("poly.tmp");
        fs::write(&tmp, format!("# {}\n{}\n", head, series_to_string(&value.to_k()))).map_err(err)?;
        fs::rename(&tmp, &path).map_err(err)
    }

    fn get_or(&self, f: Field, kind: Kind, s: usize, compute: impl FnOnce() -> Result<AZSeries>) -> Result<AZSeries> {
        if let Some(v) = self.load(f, kind, s) {
            return Ok(v);
        }
        let v = compute()?;
        self.store(f, kind, s, &v)?;
        Ok(v)
    }

    /// 𝔖_s, from the cache or computed (with its checks) and stored.
    pub fn special(&self, f: Field, s: usize) -> Result<AZSeries> {
        self.get_or(f, Kind::Special, s, || special_poly(f, s))
    }

    /// σ_s by the exponential route, from the cache or computed and stored.
    pub fn sigma(&self, f: Field, s: usize) -> Result<AZSeries> {
        self.get_or(f, Kind::Sigma, s, || Ok(sigma_via_exp(f, s)?.sigma))
    }
}
