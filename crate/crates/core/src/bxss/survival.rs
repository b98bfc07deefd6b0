//! Whether a class survives to `E_∞`: every class that could hit it is
//! either a permanent cycle, dies earlier, or sits in the wrong filtration.

use serde::Serialize;

use super::{d1_monomial, d2_monomial, enumerate_e1, BxssError, E1Element, E1Monomial};
use crate::extlines::{
    vanishing_bracket_certificate, ExtPElement, ExtPMonomial, RelationTable, Vanishing, VanishingCertificate,
};
use crate::f2linalg::{Echelon, F2Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Disposition {
    PermanentProduct {
        factor: String,
        certificates: Vec<VanishingCertificate>,
    },
    DiesEarlier {
        page: u8,
        target: Vec<E1Monomial>,
    },
    ExcludedByDegree {
        reason: String,
    },
    Kills {
        page: u8,
    },
    Unresolved {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceRecord {
    pub source: E1Monomial,
    pub filtration: u64,
    pub disposition: Disposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Survives,
    DoesNotSurvive,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalCertificate {
    pub target: E1Monomial,
    pub quadridegree: [u64; 4],
    pub sources: Vec<SourceRecord>,
    pub verdict: Verdict,
}

/// Certificates that `q_m h_m` (or `q_m h_{m+1}^2` when `squared`) is a
/// permanent cycle: every bracket `<h_{m-k}, ..., h_{m-1}, x>` for
/// `2 <= k <= m` lies in a zero group, and `h_{m-1} x = 0`.
pub fn permanent_factor_certificates(m: u32, squared: bool) -> Result<Vec<VanishingCertificate>, String> {
    let x = if squared {
        ExtPElement::h_product(&[m + 1, m + 1])
    } else {
        ExtPElement::h_product(&[m])
    };
    if m == 0 {
        return Ok(Vec::new());
    }
    let product = x.mul_monomial(&ExtPMonomial::h_product(&[m - 1]));
    let (s, t) = product.degree().expect("nonzero monomial");
    let first = match RelationTable::standard().is_zero(&product) {
        Vanishing::Zero(trace) => VanishingCertificate {
            bracket: format!("<h{}, {x}>", m - 1),
            s,
            t,
            reason: format!("the product vanishes: {trace}"),
        },
        _ => return Err(format!("h{} * {x} is not known to vanish", m - 1)),
    };
    std::iter::once(Ok(first))
        .chain((2..=m).map(|k| vanishing_bracket_certificate(m, k, &x)))
        .collect()
}

/// A factorization of a one-`q` monomial into permanent cycles, if one of
/// the known shapes applies.
pub fn permanent_product(y: &E1Monomial) -> Option<Disposition> {
    let idx = y.q.indices();
    let [m] = idx.as_slice() else { return None };
    let m = *m as u32;
    if m == 0 {
        return Some(Disposition::PermanentProduct {
            factor: "q0".into(),
            certificates: Vec::new(),
        });
    }
    for squared in [false, true] {
        let h = if squared {
            ExtPMonomial::h_product(&[m + 1, m + 1])
        } else {
            ExtPMonomial::h_product(&[m])
        };
        if !h.divides(&y.coeff) {
            continue;
        }
        if let Ok(certificates) = permanent_factor_certificates(m, squared) {
            let factor = E1Monomial::new(y.q.clone(), h).to_string();
            return Some(Disposition::PermanentProduct { factor, certificates });
        }
    }
    None
}

fn certify_nonzero(e: &E1Element) -> Result<(), String> {
    let table = RelationTable::standard();
    for m in e.iter() {
        match table.is_zero(&ExtPElement::monomial(m.coeff.clone())) {
            Vanishing::Nonzero(_) => {}
            Vanishing::Zero(why) | Vanishing::Unknown(why) => return Err(format!("{m}: {why}")),
        }
    }
    Ok(())
}

/// Whether `e` lies outside the span of `images`.
fn outside_span(images: &[E1Element], e: &E1Element) -> bool {
    let mut index: Vec<&E1Monomial> = images.iter().flat_map(|i| i.iter()).chain(e.iter()).collect();
    index.sort();
    index.dedup();
    let vector = |x: &E1Element| {
        F2Vector::from_support(index.len(), x.iter().map(|m| index.binary_search(&m).expect("indexed")))
    };
    let span = Echelon::from_rows(index.len(), images.iter().map(vector));
    !span.contains(&vector(e))
}

fn dispose(y: &E1Monomial, target: &E1Monomial, d1_images: &[E1Element]) -> Result<Disposition, BxssError> {
    let gap = y.filtration().checked_sub(target.filtration());
    let hits = |e: &E1Element| e.iter().any(|m| m == target);
    let dy1 = d1_monomial(y);
    if gap == Some(1) && hits(&dy1) {
        return Ok(Disposition::Kills { page: 1 });
    }
    if let Some(p) = permanent_product(y) {
        return Ok(p);
    }
    let Some(gap) = gap.filter(|&g| g > 0) else {
        return Ok(Disposition::ExcludedByDegree {
            reason: format!("filtration {} is not above {}", y.filtration(), target.filtration()),
        });
    };
    if !dy1.is_zero() {
        if gap == 1 {
            return Ok(Disposition::Unresolved {
                reason: "d1 is nonzero but misses the target".into(),
            });
        }
        return Ok(match certify_nonzero(&dy1) {
            Ok(()) => Disposition::DiesEarlier {
                page: 1,
                target: dy1.iter().cloned().collect(),
            },
            Err(reason) => Disposition::Unresolved { reason },
        });
    }
    if gap == 1 {
        return Ok(Disposition::ExcludedByDegree {
            reason: "d1 vanishes and later differentials drop filtration by more than one".into(),
        });
    }
    let dy2 = match d2_monomial(y) {
        Ok(v) => v,
        Err(BxssError::RuleGap { reason, .. }) => return Ok(Disposition::Unresolved { reason }),
        Err(e) => return Err(e),
    };
    if let Err(reason) = certify_nonzero(&dy2) {
        return Ok(Disposition::Unresolved { reason });
    }
    let nonzero_in_e2 = !dy2.is_zero() && outside_span(d1_images, &dy2);
    if gap == 2 && hits(&dy2) && nonzero_in_e2 {
        return Ok(Disposition::Kills { page: 2 });
    }
    if nonzero_in_e2 && gap > 2 {
        return Ok(Disposition::DiesEarlier {
            page: 2,
            target: dy2.iter().cloned().collect(),
        });
    }
    Ok(Disposition::Unresolved {
        reason: format!("no rule for d_{gap} on {y}"),
    })
}

/// Examines every class of `(s-1, k, t)` that could hit `target`.
pub fn survives_to_einfty(target: &E1Monomial) -> Result<SurvivalCertificate, BxssError> {
    let (s, k, t, f) = target.quadridegree();
    let sources = if s == 0 { Vec::new() } else { enumerate_e1(s - 1, k as u32, t)? };
    let d1_images: Vec<E1Element> = sources.iter().map(d1_monomial).collect();
    let mut records = Vec::new();
    for y in sources {
        let disposition = dispose(&y, target, &d1_images)?;
        records.push(SourceRecord {
            filtration: y.filtration(),
            source: y,
            disposition,
        });
    }
    let verdict = if records.iter().any(|r| matches!(r.disposition, Disposition::Kills { .. })) {
        Verdict::DoesNotSurvive
    } else if records.iter().any(|r| matches!(r.disposition, Disposition::Unresolved { .. })) {
        Verdict::Unresolved
    } else {
        Verdict::Survives
    };
    Ok(SurvivalCertificate {
        target: target.clone(),
        quadridegree: [u64::from(s), k, t, f],
        sources: records,
        verdict,
    })
}
