//! Cartan–Eilenberg degree bookkeeping and the certificate that
//! `h_0 x_n` is nonzero in `Ext_A^{6, 2^(n+1)*21 + 1}`.
//!
//! Only the degrees of the Cartan–Eilenberg spectral sequence are modelled.
//! Each potential source of a differential into `q_0 x_{n-1}` is either
//! ruled out by parity or shown to vanish by a window computation.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::bxss::reference::supplementary_sources;
use crate::bxss::survival::{survives_to_einfty, SurvivalCertificate, Verdict};
use crate::bxss::window::{window_pages, WindowReport};
use crate::bxss::{enumerate_e1, BxssError, E1Monomial};
use crate::extlines::{Family, Gen, RelationTable};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CessError {
    #[error("n = {n} is outside the supported range 3..={max}")]
    OutOfScope { n: u32, max: u32 },
    #[error(transparent)]
    Bxss(#[from] BxssError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CessDegree {
    pub s: u32,
    pub k: u32,
    pub t: u64,
}

impl CessDegree {
    pub fn total(&self) -> u32 {
        self.s + self.k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Source {
    pub s: u32,
    pub k: u32,
    pub r: u32,
}

/// Every `(s - r, k + r - 1)` that can support `d_r` into `(s, k)`, `r >= 2`.
pub fn raw_sources(s: u32, k: u32) -> Vec<Source> {
    (2..=s).map(|r| Source { s: s - r, k: k + r - 1, r }).collect()
}

/// The sources whose `E_1` is not empty for parity reasons.
pub fn differential_sources(s: u32, k: u32, t: u64) -> Vec<Source> {
    raw_sources(s, k)
        .into_iter()
        .filter(|src| (u64::from(src.k) + t).is_multiple_of(2))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityExclusion {
    pub s: u32,
    pub k: u32,
    pub t: u64,
    pub k_plus_t: u64,
    pub e1_empty: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conclusion {
    pub statement: String,
    pub s: u32,
    pub t: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainCertificate {
    pub n: u32,
    pub bxss_survival: SurvivalCertificate,
    pub window_2_3: WindowReport,
    pub window_0_5: WindowReport,
    pub parity_exclusions: Vec<ParityExclusion>,
    pub conclusion: Conclusion,
    pub failures: Vec<String>,
    pub engine_version: String,
    pub table_versions: BTreeMap<String, u32>,
}

impl MainCertificate {
    /// Re-derives the failures from the recorded sub-results.
    pub fn evaluate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.bxss_survival.verdict != Verdict::Survives {
            out.push(format!("{} has verdict {:?}", self.bxss_survival.target, self.bxss_survival.verdict));
        }
        for w in [&self.window_2_3, &self.window_0_5] {
            let [s, k, t] = w.tridegree;
            if !w.all_die() {
                out.push(format!("window ({s}, {k}, {t}) has {} survivors", w.survivors));
            }
            if let Some(cmp) = &w.reference {
                if !cmp.is_clean() {
                    out.push(format!("window ({s}, {k}, {t}) disagrees with its reference arrows"));
                }
            }
        }
        for p in &self.parity_exclusions {
            if !p.e1_empty || p.k_plus_t % 2 == 0 {
                out.push(format!("parity exclusion of ({}, {}, {}) does not hold", p.s, p.k, p.t));
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.conclusion.holds
    }

    /// Recomputes `failures` and the conclusion after a field changed.
    pub fn refresh(&mut self) {
        self.failures = self.evaluate();
        self.conclusion.holds = self.failures.is_empty();
    }
}

pub fn target_t(n: u32) -> u64 {
    (21u64 << (n + 1)) + 1
}

pub fn verify_main(n: u32, max_n: u32) -> Result<MainCertificate, CessError> {
    if n < 3 || n > max_n {
        return Err(CessError::OutOfScope { n, max: max_n });
    }
    let t = target_t(n);
    let target = E1Monomial::new(
        crate::milnor::QMonomial::generator(0),
        crate::extlines::ExtPMonomial::generator(Gen::new(Family::X, n - 1)),
    );
    debug_assert_eq!(target.t(), t);
    let bxss_survival = survives_to_einfty(&target)?;

    let kept = differential_sources(5, 1, t);
    let mut parity_exclusions = Vec::new();
    for src in raw_sources(5, 1) {
        if !kept.contains(&src) {
            parity_exclusions.push(ParityExclusion {
                s: src.s,
                k: src.k,
                t,
                k_plus_t: u64::from(src.k) + t,
                e1_empty: enumerate_e1(src.s, src.k, t)?.is_empty(),
            });
        }
    }
    let window_for = |s: u32, k: u32| -> Result<WindowReport, CessError> {
        let supplementary = if (s, k) == (2, 3) { supplementary_sources(n) } else { Vec::new() };
        let mut w = window_pages(s, k, t, &supplementary)?;
        w.attach_reference(n);
        Ok(w)
    };
    let window_2_3 = window_for(2, 3)?;
    let window_0_5 = window_for(0, 5)?;
    let mut failures = Vec::new();
    let expected: Vec<(u32, u32)> = kept.iter().map(|src| (src.s, src.k)).collect();
    if expected != [(2, 3), (0, 5)] {
        failures.push(format!("unexpected surviving sources {expected:?}"));
    }

    let table = RelationTable::standard();
    let mut cert = MainCertificate {
        n,
        bxss_survival,
        window_2_3,
        window_0_5,
        parity_exclusions,
        conclusion: Conclusion {
            statement: format!("h0*x{n} != 0"),
            s: 6,
            t,
            holds: false,
        },
        failures: Vec::new(),
        engine_version: ENGINE_VERSION.into(),
        table_versions: BTreeMap::from([("relations".to_string(), table.version)]),
    };
    cert.refresh();
    cert.failures.extend(failures);
    cert.conclusion.holds = cert.failures.is_empty();
    Ok(cert)
}

/// `v(m) = 8a + 2^b` where `v_2(m + 1) = 4a + b`, `0 <= b <= 3`.
pub fn bruner_v(m: u64) -> u64 {
    let v2 = (m + 1).trailing_zeros() as u64;
    8 * (v2 / 4) + (1 << (v2 % 4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentialStatement {
    pub source: String,
    pub page: u32,
    pub target: String,
    pub target_degree: (u32, u64),
    pub nonvanishing: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecializeError {
    #[error("family {0} has no d_2 specialization")]
    UnsupportedFamily(String),
    #[error("{family}_{j}: the formula applies for j >= 2")]
    IndexTooSmall { family: String, j: u32 },
}

/// `d_2(c_j) = h_0 f_{j-1}` and `d_2(e_j) = h_0 x_{j-1}`, for `j >= 2`.
/// Degrees are in the Steenrod algebra grading.
pub fn bruner_specialize(family: &str, j: u32) -> Result<DifferentialStatement, SpecializeError> {
    let (source_family, target_family) = match family {
        "c" => (Family::C, Family::F),
        "e" => (Family::E, Family::X),
        other => return Err(SpecializeError::UnsupportedFamily(other.into())),
    };
    if j < 2 {
        return Err(SpecializeError::IndexTooSmall { family: family.into(), j });
    }
    let source = Gen::new(source_family, j);
    let target = Gen::new(target_family, j - 1);
    let degree = (source.s() + 2, source.t() / 2 + 1);
    debug_assert_eq!(degree, (target.s() + 1, target.t() / 2 + 1));
    let nonvanishing = match source_family {
        Family::C => format!("h0*{target} != 0 is taken from the computed 5-line"),
        _ if j > 3 => format!("h0*{target} != 0 by the main certificate at n = {}", j - 1),
        _ => format!("h0*{target} != 0 is a finite machine computation"),
    };
    Ok(DifferentialStatement {
        source: source.to_string(),
        page: 2,
        target: format!("h0*{target}"),
        target_degree: degree,
        nonvanishing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources_and_parity() {
        let raw: Vec<(u32, u32, u32)> = raw_sources(5, 1).iter().map(|s| (s.s, s.k, s.r)).collect();
        assert_eq!(raw, [(3, 2, 2), (2, 3, 3), (1, 4, 4), (0, 5, 5)]);
        let kept: Vec<(u32, u32)> = differential_sources(5, 1, 337).iter().map(|s| (s.s, s.k)).collect();
        assert_eq!(kept, [(2, 3), (0, 5)]);
        let even: Vec<(u32, u32)> = differential_sources(5, 1, 338).iter().map(|s| (s.s, s.k)).collect();
        assert_eq!(even, [(3, 2), (1, 4)]);
        assert!(differential_sources(0, 4, 10).is_empty());
        for s in 0..8 {
            for src in raw_sources(s, 1) {
                assert_eq!(src.s + src.r, s);
                assert_eq!(src.k + 1 - src.r, 1);
            }
        }
    }

    #[test]
    fn v_function() {
        assert_eq!(bruner_v(0), 1);
        assert_eq!(bruner_v(7), 8);
        assert_eq!(bruner_v(15), 9);
        for k in 0..=12u32 {
            let m = (1u64 << k) - 1;
            assert_eq!(bruner_v(m), 8 * u64::from(k / 4) + (1 << (k % 4)), "k = {k}");
        }
    }

    #[test]
    fn specializations() {
        let c = bruner_specialize("c", 2).unwrap();
        assert_eq!((c.source.as_str(), c.target.as_str()), ("c2", "h0*f1"));
        assert_eq!(c.target_degree, (5, 45));
        let e = bruner_specialize("e", 4).unwrap();
        assert_eq!(e.target, "h0*x3");
        assert!(e.nonvanishing.contains("n = 3"));
        assert!(bruner_specialize("e", 1).is_err());
        assert!(bruner_specialize("d", 3).is_err());
    }

    #[test]
    fn out_of_scope() {
        assert!(matches!(verify_main(2, 12), Err(CessError::OutOfScope { .. })));
        assert!(matches!(verify_main(13, 12), Err(CessError::OutOfScope { .. })));
    }
}
