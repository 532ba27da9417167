//! Text, markdown and CSV renderings.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::engine::{branch_rep, predict, Branch, EngineConfig, Prediction};
use crate::error::{Error, Result};
use crate::galois::Lambda;
use crate::hecke::TreeFunction;
use crate::llc::FPattern;
use crate::padic::{PadicElement, Valuation};

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

pub fn prediction_text(pred: &Prediction, ap: &str) -> String {
    let mut out = format!(
        "p = {}, k = {}, a_p = {}, v = {}, b = {}, exceptional = {}\n",
        pred.p, pred.k, ap, pred.v, pred.b, pred.exceptional
    );
    if pred.tau.is_some() || pred.t.is_some() {
        out.push_str(&format!("tau = {}, t = {}\n", opt(&pred.tau), opt(&pred.t)));
    }
    if let Some(branch) = pred.branch {
        out.push_str(&format!("case: {branch}\n"));
    }
    out.push_str(&format!("reduction: {}\n", pred.rep_text()));
    out.push_str(&format!("provenance: {}\n", pred.provenance));
    if let Some(m) = pred.caveat_m {
        out.push_str(&format!("caveat disk: m = {m}\n"));
    }
    for note in &pred.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

/// The range of `tau - t` covered by a case.
fn region(b: i64, branch: Branch) -> String {
    let n = (b + 1) / 2;
    match branch {
        Branch::Irreducible(0) => "< 0".into(),
        Branch::Reducible(j) if b % 2 == 1 && j == n => format!(">= {}", j - 1),
        Branch::Reducible(j) => format!("= {}", j - 1),
        Branch::Irreducible(j) if b % 2 == 0 && j == n => format!("> {}", j - 1),
        Branch::Irreducible(j) => format!("({}, {})", j - 1, j),
    }
}

/// The timeline of cases for the exceptional class of `pred`, with the
/// current case marked.
pub fn timeline_markdown(pred: &Prediction) -> String {
    let field = pred.rep.as_ref().map(|r| r.field().clone());
    let mut out = String::from("| | tau - t | case | F-pattern | representation |\n|---|---|---|---|---|\n");
    for branch in Branch::all(pred.b) {
        let mark = if pred.branch == Some(branch) { "→" } else { "" };
        let rep = match (&field, branch) {
            (Some(f), Branch::Reducible(j)) => {
                branch_rep(f, pred.b, branch, Lambda::unknown(j as u32)).to_string()
            }
            (Some(f), _) => branch_rep(f, pred.b, branch, Lambda::unknown(0)).to_string(),
            (None, _) => "-".into(),
        };
        out.push_str(&format!(
            "| {mark} | {} | {branch} | {} | {rep} |\n",
            region(pred.b, branch),
            FPattern::for_branch(pred.b, branch)
        ));
    }
    out
}

pub fn prediction_markdown(pred: &Prediction, ap: &str) -> String {
    let mut out = format!("## p = {}, k = {}, a_p = `{}`\n\n", pred.p, pred.k, ap);
    out.push_str("| v | b | exceptional | tau | t | case | reduction | provenance |\n");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    out.push_str(&format!(
        "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
        pred.v,
        pred.b,
        pred.exceptional,
        opt(&pred.tau),
        opt(&pred.t),
        opt(&pred.branch),
        pred.rep_text(),
        pred.provenance
    ));
    if pred.branch.is_some() {
        out.push_str("\n### Cases\n\n");
        out.push_str(&timeline_markdown(pred));
    }
    if !pred.notes.is_empty() {
        out.push('\n');
        for note in &pred.notes {
            out.push_str(&format!("- {note}\n"));
        }
    }
    out
}

/// One line of `sweep` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub p: i64,
    pub k: i64,
    pub ap: String,
    pub v: String,
    pub b: String,
    pub tau: String,
    pub t: String,
    pub case: String,
    pub rep: String,
    pub provenance: String,
}

impl Row {
    fn from_prediction(pred: &Prediction, ap: &str) -> Self {
        Row {
            p: pred.p,
            k: pred.k,
            ap: ap.to_string(),
            v: pred.v.to_string(),
            b: pred.b.to_string(),
            tau: opt(&pred.tau),
            t: opt(&pred.t),
            case: opt(&pred.branch),
            rep: pred.rep_text(),
            provenance: pred.provenance.to_string(),
        }
    }

    fn failed(p: i64, k: i64, ap: &str, v: Valuation, e: &Error) -> Self {
        Row {
            p,
            k,
            ap: ap.to_string(),
            v: v.to_string(),
            b: "-".into(),
            tau: "-".into(),
            t: "-".into(),
            case: "-".into(),
            rep: format!("error: {e}"),
            provenance: "-".into(),
        }
    }
}

/// Predictions for each weight in `range`, in order. Weights where the
/// engine reports an error get a row carrying the error text.
pub fn sweep_rows(
    range: RangeInclusive<i64>,
    a_p: &PadicElement,
    ap_text: &str,
    config: &EngineConfig,
    exceptional_only: bool,
) -> Vec<Row> {
    let p = a_p.context().p() as i64;
    let v = a_p.valuation();
    range
        .filter_map(|k| match predict(k, a_p, config) {
            Ok(pred) if exceptional_only && !pred.exceptional => None,
            Ok(pred) => Some(Row::from_prediction(&pred, ap_text)),
            Err(_) if exceptional_only && !is_exceptional(p, k, v) => None,
            Err(e) => Some(Row::failed(p, k, ap_text, v, &e)),
        })
        .collect()
}

fn is_exceptional(p: i64, k: i64, v: Valuation) -> bool {
    match v {
        Valuation::Finite(h) => (k - 2 - h.twice()).rem_euclid(p - 1) == 0,
        Valuation::Infinite => false,
    }
}

pub fn rows_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["p", "k", "ap", "v", "b", "tau", "t", "case", "rep", "provenance"])
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    for row in rows {
        w.serialize(row).map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn hecke_text(f: &TreeFunction, n: u32) -> String {
    let mut out = format!(
        "# T^{n} [1, v] in Sym^{} over {}; support radius {}\n",
        f.r,
        f.ring.describe(),
        f.support_radius()
    );
    out.push_str("dist\tvertex\tvalue\n");
    out.push_str(&f.support_table());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;

    #[test]
    fn region_labels_cover_timeline() {
        let labels: Vec<String> = Branch::all(4).into_iter().map(|b| region(4, b)).collect();
        assert_eq!(labels, ["< 0", "= 0", "(0, 1)", "= 1", "> 1"]);
        let labels: Vec<String> = Branch::all(3).into_iter().map(|b| region(3, b)).collect();
        assert_eq!(labels, ["< 0", "= 0", "(0, 1)", ">= 1"]);
    }

    #[test]
    fn csv_has_header_and_columns() {
        let ctx = PadicContext::new(5, 2, 10).unwrap();
        let a_p = PadicElement::pi_power(&ctx, 2);
        let rows = sweep_rows(22..=24, &a_p, "p", &EngineConfig::default(), false);
        assert_eq!(rows.len(), 3);
        let text = rows_csv(&rows).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("p,k,ap,v,b,tau,t,case,rep,provenance"));
        assert_eq!(lines.count(), 3);
        assert!(rows_csv(&[]).unwrap().starts_with("p,k,ap"));
    }

    #[test]
    fn exceptional_filter() {
        let ctx = PadicContext::new(5, 2, 10).unwrap();
        let a_p = PadicElement::pi_power(&ctx, 2);
        let rows = sweep_rows(10..=30, &a_p, "p", &EngineConfig::default(), true);
        assert!(rows.iter().all(|r| (r.k - 4).rem_euclid(4) == 0));
        assert!(!rows.is_empty());
    }
}
