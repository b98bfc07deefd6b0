//! Relation tables: rewrite rules and nonvanishing declarations, loaded from
//! a line-oriented text file.
//!
//! ```text
//! version 1
//! depth 5
//! h(i)*h(i+1) = 0 | two-line | generic
//! h(i+1)^3 = h(i)^2*h(i+2) | three-line | generic
//! h0*h(n-1)^2*h(n+4) != 0 for n >= 4 | four-line | trusted
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use super::{ExtPElement, ExtPMonomial, Family, Gen, ParseError};

const STANDARD_TABLE: &str = include_str!("../../data/relations.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Generator { line: usize, source: ParseError },
    #[error("line {line}: relation is not degree-homogeneous")]
    Inhomogeneous { line: usize },
    #[error("missing `version` header")]
    MissingVersion,
}

/// `var + offset`, or the constant `offset` when `var` is false.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexExpr {
    pub var: bool,
    pub offset: i64,
}

impl IndexExpr {
    fn eval(self, v: i64) -> i64 {
        if self.var {
            v + self.offset
        } else {
            self.offset
        }
    }
}

/// A monomial whose indices may depend on one variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Template {
    pub factors: Vec<(Family, IndexExpr, u32)>,
}

impl Template {
    pub fn has_var(&self) -> bool {
        self.factors.iter().any(|(_, e, _)| e.var)
    }

    /// `None` when an index falls outside its family.
    pub fn instantiate(&self, v: i64) -> Option<ExtPMonomial> {
        let mut m = ExtPMonomial::one();
        for &(family, expr, exp) in &self.factors {
            let idx = expr.eval(v);
            if idx < i64::from(family.min_index()) {
                return None;
            }
            m.multiply_gen(Gen::new(family, idx as u32), exp);
        }
        Some(m)
    }

    /// Variable values under which some factor of the template lines up
    /// with a factor of `m`.
    fn candidates(&self, m: &ExtPMonomial) -> BTreeSet<i64> {
        if !self.has_var() {
            return std::iter::once(0).collect();
        }
        let mut out = BTreeSet::new();
        for &(family, expr, _) in &self.factors {
            if !expr.var {
                continue;
            }
            for (g, _) in m.factors() {
                if g.family == family {
                    out.insert(i64::from(g.index) - expr.offset);
                }
            }
        }
        out
    }

    fn parse(text: &str, var: &mut Option<char>) -> Result<Template, String> {
        let mut factors = Vec::new();
        for factor in text.trim().split('*') {
            let factor = factor.trim();
            let (body, exp) = match factor.rsplit_once('^') {
                Some((b, e)) if !b.ends_with('(') => {
                    (b, e.trim().parse::<u32>().map_err(|_| format!("bad exponent in `{factor}`"))?)
                }
                _ => (factor, 1),
            };
            if exp == 0 {
                return Err(format!("zero exponent in `{factor}`"));
            }
            let (family, expr) = if let Some(open) = body.find('(') {
                let inner = body[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| format!("unclosed index in `{factor}`"))?;
                let prefix = body[..open].trim_end_matches('_');
                let family = Family::from_prefix(prefix).ok_or_else(|| format!("unknown generator `{body}`"))?;
                (family, parse_index(inner, var)?)
            } else {
                let g: Gen = body.parse().map_err(|e: ParseError| e.to_string())?;
                (g.family, IndexExpr { var: false, offset: i64::from(g.index) })
            };
            factors.push((family, expr, exp));
        }
        Ok(Template { factors })
    }
}

fn parse_index(text: &str, var: &mut Option<char>) -> Result<IndexExpr, String> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(k) = text.parse::<i64>() {
        return Ok(IndexExpr { var: false, offset: k });
    }
    let mut chars = text.chars();
    let v = chars.next().filter(char::is_ascii_lowercase).ok_or_else(|| format!("bad index `{text}`"))?;
    match var {
        Some(existing) if *existing != v => return Err(format!("second variable `{v}`")),
        _ => *var = Some(v),
    }
    let rest: String = chars.collect();
    let offset = if rest.is_empty() {
        0
    } else if let Some(k) = rest.strip_prefix('+') {
        k.parse().map_err(|_| format!("bad index `{text}`"))?
    } else if let Some(k) = rest.strip_prefix('-') {
        -k.parse::<i64>().map_err(|_| format!("bad index `{text}`"))?
    } else {
        return Err(format!("bad index `{text}`"));
    };
    Ok(IndexExpr { var: true, offset })
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(family, expr, exp)| {
                let idx = match (expr.var, expr.offset) {
                    (false, k) => k.to_string(),
                    (true, 0) => "(v)".to_string(),
                    (true, k) if k > 0 => format!("(v+{k})"),
                    (true, k) => format!("(v{k})"),
                };
                let base = format!("{}{}", family.prefix(), idx);
                if exp == 1 {
                    base
                } else {
                    format!("{base}^{exp}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Lower bound on the template variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Domain {
    pub min: i64,
}

impl Domain {
    pub fn contains(&self, v: i64) -> bool {
        v >= self.min
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Holds for every index by a general theorem.
    Generic,
    /// The lowest instance was checked against the resolution.
    OracleVerified,
    /// No instance fits the oracle range; taken from the literature.
    Trusted,
}

impl Status {
    fn parse(text: &str) -> Option<Status> {
        match text {
            "generic" => Some(Status::Generic),
            "oracle-verified" => Some(Status::OracleVerified),
            "trusted" => Some(Status::Trusted),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationEntry {
    pub lhs: Template,
    /// `None` for a relation `lhs = 0`.
    pub rhs: Option<Template>,
    pub domain: Domain,
    pub source: String,
    pub status: Status,
    pub line: usize,
}

impl RelationEntry {
    pub fn label(&self) -> String {
        match &self.rhs {
            None => format!("{} = 0", self.lhs),
            Some(r) => format!("{} = {}", self.lhs, r),
        }
    }

    /// Both sides at `v`, when defined.
    pub fn instance(&self, v: i64) -> Option<(ExtPMonomial, Option<ExtPMonomial>)> {
        if !self.domain.contains(v) {
            return None;
        }
        let lhs = self.lhs.instantiate(v)?;
        let rhs = match &self.rhs {
            None => None,
            Some(r) => Some(r.instantiate(v)?),
        };
        Some((lhs, rhs))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonzeroFamily {
    pub template: Template,
    pub domain: Domain,
    pub source: String,
    pub status: Status,
    pub line: usize,
}

impl NonzeroFamily {
    pub fn instance(&self, v: i64) -> Option<ExtPMonomial> {
        if self.domain.contains(v) {
            self.template.instantiate(v)
        } else {
            None
        }
    }

    fn matches(&self, m: &ExtPMonomial) -> Option<i64> {
        self.template
            .candidates(m)
            .into_iter()
            .find(|&v| self.instance(v).as_ref() == Some(m))
    }
}

/// Outcome of a vanishing query. `Unknown` must be treated as a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "note", rename_all = "UPPERCASE")]
pub enum Vanishing {
    Zero(String),
    Nonzero(String),
    Unknown(String),
}

impl Vanishing {
    pub fn known(&self) -> Option<bool> {
        match self {
            Vanishing::Zero(_) => Some(true),
            Vanishing::Nonzero(_) => Some(false),
            Vanishing::Unknown(_) => None,
        }
    }

    pub fn note(&self) -> &str {
        match self {
            Vanishing::Zero(n) | Vanishing::Nonzero(n) | Vanishing::Unknown(n) => n,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationTable {
    pub version: u32,
    /// Deepest Adams line the nonvanishing declarations cover.
    pub depth: u32,
    pub relations: Vec<RelationEntry>,
    pub nonzero: Vec<NonzeroFamily>,
}

impl RelationTable {
    pub fn standard() -> &'static RelationTable {
        static TABLE: OnceLock<RelationTable> = OnceLock::new();
        TABLE.get_or_init(|| RelationTable::parse(STANDARD_TABLE).expect("bundled relation table parses"))
    }

    pub fn parse(text: &str) -> Result<RelationTable, TableError> {
        let mut version = None;
        let mut depth = 3;
        let mut relations = Vec::new();
        let mut nonzero = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| TableError::Syntax { line, message };
            if let Some(v) = content.strip_prefix("version ") {
                version = Some(v.trim().parse().map_err(|_| syntax("bad version".into()))?);
                continue;
            }
            if let Some(d) = content.strip_prefix("depth ") {
                depth = d.trim().parse().map_err(|_| syntax("bad depth".into()))?;
                continue;
            }
            let fields: Vec<&str> = content.split('|').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(syntax("expected `relation | source | status`".into()));
            }
            let status = Status::parse(fields[2]).ok_or_else(|| syntax(format!("unknown status `{}`", fields[2])))?;
            let source = fields[1].to_string();
            if source.is_empty() {
                return Err(syntax("empty source".into()));
            }
            let (body, domain) = match fields[0].split_once(" for ") {
                Some((b, d)) => (b, parse_domain(d).map_err(syntax)?),
                None => (fields[0], None),
            };
            let mut var = None;
            if let Some(lhs) = body.strip_suffix("!= 0") {
                let template = Template::parse(lhs, &mut var).map_err(syntax)?;
                let domain = check_domain(domain, var).map_err(syntax)?;
                nonzero.push(NonzeroFamily { template, domain, source, status, line });
                continue;
            }
            let (lhs, rhs) = body.split_once('=').ok_or_else(|| syntax("missing `=`".into()))?;
            let lhs = Template::parse(lhs, &mut var).map_err(syntax)?;
            let rhs = if rhs.trim() == "0" {
                None
            } else {
                Some(Template::parse(rhs, &mut var).map_err(syntax)?)
            };
            let domain = check_domain(domain, var).map_err(syntax)?;
            let entry = RelationEntry { lhs, rhs, domain, source, status, line };
            if !homogeneous(&entry) {
                return Err(TableError::Inhomogeneous { line });
            }
            relations.push(entry);
        }
        Ok(RelationTable {
            version: version.ok_or(TableError::MissingVersion)?,
            depth,
            relations,
            nonzero,
        })
    }

    /// Rewrites one monomial to normal form; `None` when it vanishes.
    /// Applied relations are appended to `trace`.
    pub fn reduce_monomial(&self, m: &ExtPMonomial, trace: &mut Vec<String>) -> Option<ExtPMonomial> {
        let mut current = m.clone();
        'outer: loop {
            for entry in &self.relations {
                for v in entry.lhs.candidates(&current) {
                    let Some((lhs, rhs)) = entry.instance(v) else { continue };
                    let Some(rest) = lhs.quotient_of(&current) else { continue };
                    trace.push(format!("{lhs} = {}", rhs.as_ref().map_or("0".to_string(), ToString::to_string)));
                    {
                        let r = rhs?;
                        current = rest.mul(&r);
                        continue 'outer;
                    }
                }
            }
            return Some(current);
        }
    }

    pub fn normal_form_traced(&self, e: &ExtPElement, trace: &mut Vec<String>) -> ExtPElement {
        let mut out = ExtPElement::zero();
        for m in e.terms() {
            if let Some(r) = self.reduce_monomial(m, trace) {
                out.toggle(r);
            }
        }
        out
    }

    pub fn normal_form(&self, e: &ExtPElement) -> ExtPElement {
        self.normal_form_traced(e, &mut Vec::new())
    }

    /// The declaration that makes `m` nonzero, if any.
    pub fn nonzero_declaration(&self, m: &ExtPMonomial) -> Option<(&NonzeroFamily, i64)> {
        self.nonzero.iter().find_map(|f| f.matches(m).map(|v| (f, v)))
    }

    pub fn is_zero(&self, e: &ExtPElement) -> Vanishing {
        let mut trace = Vec::new();
        let nf = self.normal_form_traced(e, &mut trace);
        if nf.is_empty_sum() {
            let note = if trace.is_empty() {
                "empty sum".to_string()
            } else {
                format!("relations: {}", trace.join(", "))
            };
            return Vanishing::Zero(note);
        }
        let mut notes = Vec::new();
        let deep = nf.terms().any(|m| m.s() > 3);
        if deep && nf.len() > 1 {
            return Vanishing::Unknown(format!("independence of the terms of {nf} is not declared"));
        }
        for m in nf.terms() {
            let s = m.s();
            if s <= 3 {
                notes.push(format!("{m}: normal form on line {s}, where normal forms are a basis"));
            } else if m.factors().count() == 1 && m.factors().all(|(g, e)| e == 1 && g.family != Family::H) {
                notes.push(format!("{m}: indecomposable generator"));
            } else if s > self.depth {
                return Vanishing::Unknown(format!("{m} lies on line {s}, beyond the curated depth {}", self.depth));
            } else if let Some((family, v)) = self.nonzero_declaration(m) {
                notes.push(format!(
                    "{m}: declared nonzero ({}, table line {}, index {v})",
                    family.source, family.line
                ));
            } else {
                return Vanishing::Unknown(format!("no relation or nonvanishing declaration covers {m}"));
            }
        }
        Vanishing::Nonzero(notes.join("; "))
    }
}

fn parse_domain(text: &str) -> Result<Option<(char, i64)>, String> {
    let (v, k) = text.split_once(">=").ok_or_else(|| format!("bad domain `{text}`"))?;
    let v = v.trim();
    let mut chars = v.chars();
    let c = chars.next().filter(|c| c.is_ascii_lowercase() && chars.next().is_none());
    let c = c.ok_or_else(|| format!("bad domain variable `{v}`"))?;
    let k = k.trim().parse().map_err(|_| format!("bad domain bound `{}`", k.trim()))?;
    Ok(Some((c, k)))
}

fn check_domain(domain: Option<(char, i64)>, var: Option<char>) -> Result<Domain, String> {
    match (domain, var) {
        (Some((c, _)), Some(v)) if c != v => Err(format!("domain names `{c}` but the relation uses `{v}`")),
        (Some((c, _)), None) => Err(format!("domain on `{c}` but the relation has no variable")),
        (Some((_, k)), _) => Ok(Domain { min: k }),
        (None, _) => Ok(Domain { min: 0 }),
    }
}

// Compares (s, t) of both sides at a few sample indices.
fn homogeneous(entry: &RelationEntry) -> bool {
    let Some(rhs) = &entry.rhs else { return true };
    (entry.domain.min.max(0)..entry.domain.min.max(0) + 4).all(|v| {
        match (entry.lhs.instantiate(v), rhs.instantiate(v)) {
            (Some(l), Some(r)) => l.s() == r.s() && l.t() == r.t(),
            _ => true,
        }
    })
}
