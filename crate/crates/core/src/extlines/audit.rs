//! Cross-checks of the presented lines against a computed resolution.

use serde::Serialize;

use super::{basis_in_degree, indecomposable_generators, ExtPMonomial, Family, RelationTable, Status};
use crate::f2linalg::{Echelon, F2Vector};
use crate::resolution::{ExtClass, Resolution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditOutcome {
    Pass,
    Fail(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditRecord {
    pub table_line: usize,
    pub entry: String,
    pub instance: String,
    pub outcome: AuditOutcome,
}

/// Class of a monomial in `h_i` and `c_i`, when the oracle covers it.
/// `c_i` must span its bidegree.
pub fn monomial_class(res: &Resolution, m: &ExtPMonomial) -> Option<ExtClass> {
    let (s, t) = (m.s(), m.t() / 2);
    let (max_s, max_t) = res.covered();
    if i64::from(s) > max_s || t as i64 > max_t {
        return None;
    }
    let mut class = res.unit_class().ok()?;
    for (g, e) in m.factors() {
        for _ in 0..e {
            class = match g.family {
                Family::H => res.multiply_by_h(g.index, &class).ok()?,
                Family::C => {
                    let deg = (g.t() / 2) as u32;
                    if res.ext_dim(3, deg).ok()? != 1 {
                        return None;
                    }
                    let c = res.basis_class(3, deg, 0).ok()?;
                    res.yoneda_product(&class, &c).ok()?
                }
                _ => return None,
            };
        }
    }
    Some(class)
}

fn in_range(res: &Resolution, m: &ExtPMonomial) -> bool {
    let (max_s, max_t) = res.covered();
    i64::from(m.s()) <= max_s && (m.t() / 2) as i64 <= max_t
}

/// Checks every in-range instance of every table entry, and that the
/// recorded statuses agree with what the oracle can reach.
pub fn audit_table(table: &RelationTable, res: &Resolution) -> Vec<AuditRecord> {
    let mut out = Vec::new();
    for entry in &table.relations {
        let mut reached = 0;
        let start = entry.domain.min.max(0);
        for v in start..start + 64 {
            let Some((lhs, rhs)) = entry.instance(v) else { continue };
            if !in_range(res, &lhs) {
                if entry.lhs.has_var() {
                    break;
                }
                continue;
            }
            reached += 1;
            let outcome = match (monomial_class(res, &lhs), rhs.as_ref().map(|r| monomial_class(res, r))) {
                (Some(l), None) if l.is_zero() => AuditOutcome::Pass,
                (Some(_), None) => AuditOutcome::Fail(format!("{lhs} is nonzero")),
                (Some(l), Some(Some(r))) if l == r => AuditOutcome::Pass,
                (Some(_), Some(Some(_))) => AuditOutcome::Fail("sides differ".into()),
                _ => AuditOutcome::Fail("class not expressible by the oracle".into()),
            };
            out.push(AuditRecord {
                table_line: entry.line,
                entry: entry.label(),
                instance: rhs.map_or(format!("{lhs} = 0"), |r| format!("{lhs} = {r}")),
                outcome,
            });
            if !entry.lhs.has_var() {
                break;
            }
        }
        out.extend(status_record(entry.line, &entry.label(), entry.status, reached));
    }
    for family in &table.nonzero {
        let mut reached = 0;
        let start = family.domain.min.max(0);
        for v in start..start + 64 {
            let Some(m) = family.instance(v) else { continue };
            if !in_range(res, &m) {
                if family.template.has_var() {
                    break;
                }
                continue;
            }
            reached += 1;
            let outcome = match monomial_class(res, &m) {
                Some(c) if !c.is_zero() => AuditOutcome::Pass,
                Some(_) => AuditOutcome::Fail(format!("{m} is zero")),
                None => AuditOutcome::Fail("class not expressible by the oracle".into()),
            };
            out.push(AuditRecord {
                table_line: family.line,
                entry: format!("{} != 0", family.template),
                instance: format!("{m} != 0"),
                outcome,
            });
            if !family.template.has_var() {
                break;
            }
        }
        out.extend(status_record(family.line, &format!("{} != 0", family.template), family.status, reached));
    }
    out
}

fn status_record(line: usize, entry: &str, status: Status, reached: usize) -> Option<AuditRecord> {
    let problem = match status {
        Status::OracleVerified if reached == 0 => Some("marked oracle-verified but no instance is in range"),
        Status::Trusted if reached > 0 => Some("marked trusted but an instance is in range"),
        _ => None,
    }?;
    Some(AuditRecord {
        table_line: line,
        entry: entry.to_string(),
        instance: "status".into(),
        outcome: AuditOutcome::Fail(problem.into()),
    })
}

/// For `s <= 3`: the presented basis maps to a basis of the oracle's Ext.
pub fn audit_low_bases(res: &Resolution, max_s: u32) -> Vec<AuditRecord> {
    let (_, max_t) = res.covered();
    let mut out = Vec::new();
    for s in 0..=max_s.min(3) {
        for t in 0..=max_t.max(0) as u32 {
            let basis = basis_in_degree(s, 2 * u64::from(t));
            let dim = res.ext_dim(s, t).unwrap_or(0);
            let classes: Vec<F2Vector> = basis
                .iter()
                .filter_map(|m| monomial_class(res, m))
                .map(|c| c.coordinates)
                .collect();
            let rank = Echelon::from_rows(dim, classes.iter().cloned()).rank();
            let outcome = if classes.len() == basis.len() && rank == basis.len() && rank == dim {
                AuditOutcome::Pass
            } else {
                AuditOutcome::Fail(format!("{} monomials of rank {rank}, Ext dimension {dim}", basis.len()))
            };
            out.push(AuditRecord {
                table_line: 0,
                entry: format!("basis ({s}, {})", 2 * t),
                instance: basis.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                outcome,
            });
        }
    }
    out
}

/// Dimension of `Ext^{s,t}` modulo `h_i`-multiples, over the Steenrod
/// algebra grading.
pub fn indecomposable_dim(res: &Resolution, s: u32, t: u32) -> usize {
    let dim = res.ext_dim(s, t).unwrap_or(0);
    let mut span = Echelon::new(dim);
    let mut i = 0;
    while (1u32 << i) <= t {
        let below = t - (1 << i);
        for g in 0..res.ext_dim(s - 1, below).unwrap_or(0) {
            let x = res.basis_class(s - 1, below, g).expect("in range");
            span.insert(res.multiply_by_h(i, &x).expect("in range").coordinates);
        }
        i += 1;
    }
    dim - span.rank()
}

/// Named-generator counts against the oracle. Lines 3 and 4 must match
/// exactly; on line 5 the table may list fewer generators than exist.
pub fn audit_indecomposables(res: &Resolution, lines: std::ops::RangeInclusive<u32>) -> Vec<AuditRecord> {
    let (max_s, max_t) = res.covered();
    let mut out = Vec::new();
    for s in lines {
        if i64::from(s) > max_s {
            break;
        }
        for t in 1..=max_t.max(0) as u32 {
            let listed = indecomposable_generators(s, 2 * u64::from(t));
            let actual = indecomposable_dim(res, s, t);
            let ok = if s <= 4 { listed.len() == actual } else { listed.len() <= actual };
            if listed.is_empty() && actual == 0 {
                continue;
            }
            let names: Vec<String> = listed.iter().map(ToString::to_string).collect();
            out.push(AuditRecord {
                table_line: 0,
                entry: format!("indecomposables ({s}, {})", 2 * t),
                instance: format!("[{}] vs oracle {actual}", names.join(", ")),
                outcome: if ok {
                    AuditOutcome::Pass
                } else {
                    AuditOutcome::Fail(format!("table lists {}, oracle finds {actual}", listed.len()))
                },
            });
        }
    }
    out
}
