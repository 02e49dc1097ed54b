//! Rendering of bound reports and algebra summaries.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use crate::algebra::LeibnizAlgebra;
use crate::bounds::BoundReport;
use crate::derivations::{adl_set, derivation_algebra, DerivationError};
use crate::series::{lower_d_central_series, upper_d_central_series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Kv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "kv" => Ok(ReportFormat::Kv),
            _ => Err(format!("unknown format `{s}` (expected `text` or `kv`)")),
        }
    }
}

/// True iff every applicable report holds. An empty list passes.
pub fn all_hold(reports: &[BoundReport]) -> bool {
    reports.iter().all(|r| !r.is_violation())
}

pub fn render_report(reports: &[BoundReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Kv => render_kv(reports, ""),
        ReportFormat::Text => render_text(reports),
    }
}

/// `key = value` lines; every key is `<prefix><claim>.<field>`.
/// Non-applicable claims have neither `rhs` nor `holds`.
pub fn render_kv(reports: &[BoundReport], prefix: &str) -> String {
    let mut out = String::new();
    for r in reports {
        let key = format!("{prefix}{}", r.claim.name());
        let _ = writeln!(out, "{key}.applicable = {}", r.applicable);
        for (name, value) in &r.quantities {
            let _ = writeln!(out, "{key}.{name} = {value}");
        }
        let _ = writeln!(out, "{key}.lhs = {}", r.lhs);
        if r.applicable {
            let _ = writeln!(out, "{key}.rhs = {}", r.rhs);
            let _ = writeln!(out, "{key}.holds = {}", r.holds);
        }
    }
    out
}

fn render_text(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let quantities: Vec<String> = r
            .quantities
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        let verdict = match (r.applicable, r.holds) {
            (false, _) => "not applicable".to_string(),
            (true, true) => format!("{} <= {}  holds", r.lhs, r.rhs),
            (true, false) => format!("{} > {}  VIOLATED", r.lhs, r.rhs),
        };
        let _ = writeln!(
            out,
            "{:<16} {:<34} [{}]  {}",
            r.claim.name(),
            r.claim.statement(),
            quantities.join(" "),
            verdict
        );
    }
    out
}

/// Dimensions of the standard structures of an algebra, with the classical
/// series (`D = Ad^l(L)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub dim: usize,
    pub field: String,
    pub lie: bool,
    pub left_center: usize,
    pub right_center: usize,
    pub center: usize,
    pub derived: usize,
    pub der: usize,
    pub adl: usize,
    pub upper_series: Vec<usize>,
    pub lower_series: Vec<usize>,
    pub zl: usize,
}

pub fn analyze(a: &Arc<LeibnizAlgebra>) -> Result<Analysis, DerivationError> {
    let centers = a.centers();
    let adl = adl_set(a);
    let upper = upper_d_central_series(&adl)?;
    let lower = lower_d_central_series(&adl)?;
    Ok(Analysis {
        dim: a.dim(),
        field: a.field().to_string(),
        lie: a.is_lie(),
        left_center: centers.left.dim(),
        right_center: centers.right.dim(),
        center: centers.center.dim(),
        derived: a.derived_subalgebra().dim(),
        der: derivation_algebra(a).dim(),
        adl: adl.dim(),
        upper_series: upper.dims(),
        lower_series: lower.dims(),
        zl: upper.zl.expect("upper series"),
    })
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

impl Analysis {
    pub fn render(&self, format: ReportFormat) -> String {
        let rows: [(&str, String); 12] = [
            ("dim", self.dim.to_string()),
            ("field", self.field.clone()),
            ("lie", self.lie.to_string()),
            ("left_center", self.left_center.to_string()),
            ("right_center", self.right_center.to_string()),
            ("center", self.center.to_string()),
            ("derived", self.derived.to_string()),
            ("der", self.der.to_string()),
            ("adl", self.adl.to_string()),
            ("upper_series", join(&self.upper_series)),
            ("lower_series", join(&self.lower_series)),
            ("zl", self.zl.to_string()),
        ];
        let mut out = String::new();
        for (k, v) in rows {
            match format {
                ReportFormat::Kv => {
                    let _ = writeln!(out, "{k} = {v}");
                }
                ReportFormat::Text => {
                    let _ = writeln!(out, "{k:<13} {v}");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, CatalogFamily};
    use crate::bounds::{verify_corollaries, verify_theorem_b};
    use crate::field::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn kv_for_holding_schur() {
        let a1 = Arc::new(catalog(CatalogFamily::CyclicLeibniz, 2, Q).unwrap());
        let reports = verify_corollaries(&a1, 1).unwrap();
        let kv = render_report(&reports[..1], ReportFormat::Kv);
        assert!(kv.lines().any(|l| l == "schur_leibniz.holds = true"));
        assert!(kv.lines().any(|l| l == "schur_leibniz.t = 1"));
        assert!(all_hold(&reports));
    }

    #[test]
    fn kv_for_non_applicable() {
        let na2 = Arc::new(catalog(CatalogFamily::Nonabelian2, 2, Q).unwrap());
        let r = verify_theorem_b(&adl_set(&na2)).unwrap();
        let kv = render_report(std::slice::from_ref(&r), ReportFormat::Kv);
        assert!(kv.lines().any(|l| l == "theorem_b.applicable = false"));
        assert!(!kv.contains(".holds"));
        assert!(all_hold(std::slice::from_ref(&r)));
        assert!(render_report(&[r], ReportFormat::Text).contains("not applicable"));
    }

    #[test]
    fn empty_reports() {
        assert_eq!(render_report(&[], ReportFormat::Kv), "");
        assert_eq!(render_report(&[], ReportFormat::Text), "");
        assert!(all_hold(&[]));
    }

    #[test]
    fn analysis_of_heisenberg() {
        let h = Arc::new(catalog(CatalogFamily::Heisenberg, 3, Q).unwrap());
        let an = analyze(&h).unwrap();
        assert_eq!(
            (an.center, an.derived, an.der, an.adl, an.zl),
            (1, 1, 6, 2, 2)
        );
        let kv = an.render(ReportFormat::Kv);
        assert!(kv.contains("upper_series = 0 1 3\n"));
        assert!(kv.contains("lower_series = 3 1 0\n"));
    }
}
