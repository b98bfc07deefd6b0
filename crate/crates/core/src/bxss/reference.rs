//! Reference arrow lists for the `(2, 3, 2^(n+1)*21 + 1)` window and their
//! comparison with the engine's arrows.

use std::collections::BTreeSet;

use serde::Serialize;

use super::E1Monomial;

const GENERIC: &str = include_str!("../../data/reference/window_2_3.txt");
const N3: &str = include_str!("../../data/reference/window_2_3_n3.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceArrow {
    pub line: usize,
    pub page: u8,
    pub source: E1Monomial,
    pub target: E1Monomial,
    /// Set when the reference target is known to disagree with the rules.
    pub engine_target: Option<E1Monomial>,
}

/// Substitutes `{n}`, `{n+k}` and `{n-k}`.
pub fn expand_template(text: &str, n: u32) -> Result<String, String> {
    let mut out = String::new();
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').ok_or_else(|| format!("unclosed brace in {text:?}"))? + open;
        let expr = rest[open + 1..close].trim();
        let value = match expr.strip_prefix('n') {
            Some("") => i64::from(n),
            Some(off) => {
                let off = off.replace(' ', "");
                let k: i64 = off.parse().map_err(|_| format!("bad offset {expr:?}"))?;
                i64::from(n) + k
            }
            None => return Err(format!("bad placeholder {expr:?}")),
        };
        if value < 0 {
            return Err(format!("{expr} is negative for n = {n}"));
        }
        out.push_str(&value.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

pub fn parse_reference(text: &str, n: u32) -> Result<Vec<ReferenceArrow>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(format!("line {}: expected 3 or 4 fields", i + 1));
        }
        let page: u8 = fields[0].parse().map_err(|_| format!("line {}: bad page", i + 1))?;
        let mono = |s: &str| -> Result<E1Monomial, String> {
            expand_template(s, n)?.parse().map_err(|e| format!("line {}: {e}", i + 1))
        };
        out.push(ReferenceArrow {
            line: i + 1,
            page,
            source: mono(fields[1])?,
            target: mono(fields[2])?,
            engine_target: fields.get(3).map(|s| mono(s)).transpose()?,
        });
    }
    Ok(out)
}

/// Reference arrows for the window at `n`, when one is on file.
pub fn reference_arrows(n: u32) -> Option<Vec<ReferenceArrow>> {
    let text = match n {
        3 => N3,
        4.. => GENERIC,
        _ => return None,
    };
    Some(parse_reference(text, n).expect("bundled reference data parses"))
}

/// Line-1 sources in the reference list: boundary producers from the
/// adjacent column.
pub fn supplementary_sources(n: u32) -> Vec<E1Monomial> {
    let set: BTreeSet<E1Monomial> = reference_arrows(n)
        .unwrap_or_default()
        .into_iter()
        .filter(|a| a.source.s() == 1)
        .map(|a| a.source)
        .collect();
    set.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlaggedArrow {
    pub page: u8,
    pub source: E1Monomial,
    pub reference_target: E1Monomial,
    pub engine_target: E1Monomial,
    pub engine_agrees_with_note: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub matched: usize,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    pub flagged: Vec<FlaggedArrow>,
}

impl Comparison {
    /// Everything matches apart from the flagged arrows, and the engine
    /// produces the noted replacement for each of those.
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.flagged.iter().all(|f| f.engine_agrees_with_note)
    }
}

pub fn compare(reference: &[ReferenceArrow], engine: &[(u8, E1Monomial, E1Monomial)]) -> Comparison {
    let produced: BTreeSet<(u8, E1Monomial, E1Monomial)> = engine.iter().cloned().collect();
    let mut explained = BTreeSet::new();
    let mut out = Comparison::default();
    for r in reference {
        let key = (r.page, r.source.clone(), r.target.clone());
        match &r.engine_target {
            None if produced.contains(&key) => {
                out.matched += 1;
                explained.insert(key);
            }
            None => out.missing.push(format!("d{}: {} -> {}", r.page, r.source, r.target)),
            Some(alt) => {
                let alt_key = (r.page, r.source.clone(), alt.clone());
                let agrees = produced.contains(&alt_key);
                if agrees {
                    explained.insert(alt_key);
                }
                if produced.contains(&key) {
                    explained.insert(key);
                }
                out.flagged.push(FlaggedArrow {
                    page: r.page,
                    source: r.source.clone(),
                    reference_target: r.target.clone(),
                    engine_target: alt.clone(),
                    engine_agrees_with_note: agrees,
                });
            }
        }
    }
    out.extra = produced
        .difference(&explained)
        .map(|(p, s, t)| format!("d{p}: {s} -> {t}"))
        .collect();
    out
}
