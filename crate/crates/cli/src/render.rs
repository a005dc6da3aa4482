//! Fixed-width text output.

use std::fmt::Write;

use clonecheck_core::channels::Certificate;
use clonecheck_core::frames::{ScenarioReport, TimeOrder};
use clonecheck_core::linalg::ComplexMatrix;
use clonecheck_core::nocloning::BatchSummary;
use clonecheck_core::teleport::TeleportReport;

const LABEL_WIDTH: usize = 28;

fn row(out: &mut String, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{label:<LABEL_WIDTH$}{value}");
}

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn matrix(out: &mut String, label: &str, m: &ComplexMatrix) {
    for i in 0..m.rows() {
        let cells: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
            .collect();
        let head = if i == 0 { label } else { "" };
        let _ = writeln!(out, "{head:<LABEL_WIDTH$}[ {} ]", cells.join("  "));
    }
}

pub fn teleport(r: &TeleportReport) -> String {
    let mut out = String::new();
    matrix(&mut out, "input rho_C", r.input_state.matrix());
    matrix(&mut out, "(T rho)_B", r.b_marginal.matrix());
    matrix(&mut out, "(T rho)_C", r.c_marginal.matrix());
    row(&mut out, "dist_b", num(r.dist_b));
    row(&mut out, "dist_c", num(r.dist_c));
    row(&mut out, "(T rho)_B = rho_C", yes_no(r.eq_4_1_holds));
    row(&mut out, "(T rho)_C = rho_C", yes_no(r.eq_4_2_holds));
    out
}

pub fn noclone(s: &BatchSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6}  {:>20}  {:>5}  {:>5}  {:>20}  {:>20}  {:>20}",
        "index", "seed", "terms", "probe", "defect_b", "defect_c", "defect"
    );
    for r in &s.instances {
        let _ = writeln!(
            out,
            "{:>6}  {:>20}  {:>5}  {:>5}  {:>20}  {:>20}  {:>20}",
            r.index,
            r.seed,
            r.n_terms,
            r.probe_index,
            num(r.defect_b),
            num(r.defect_c),
            num(r.defect)
        );
    }
    row(&mut out, "instances", s.instances.len());
    row(&mut out, "min defect", num(s.min_defect));
    row(&mut out, "threshold", num(s.threshold));
    row(&mut out, "all fail to clone", yes_no(s.all_fail_to_clone));
    out
}

fn order(o: TimeOrder) -> &'static str {
    match o {
        TimeOrder::IBeforeII => "I before II",
        TimeOrder::IIBeforeI => "II before I",
        TimeOrder::Simultaneous => "simultaneous",
    }
}

pub fn audit(r: &ScenarioReport) -> String {
    let mut out = String::new();
    let [a, b] = &r.events;
    row(&mut out, "event I (t, x)", format!("({}, {})", a.t, a.x));
    row(&mut out, "event II (t, x)", format!("({}, {})", b.t, b.x));
    row(
        &mut out,
        "separation",
        format!("{:?}", r.interval_type).to_lowercase(),
    );
    row(&mut out, "rest-frame order", order(r.rest_order));
    match &r.boost {
        Some(f) => row(&mut out, "reordering boost beta", f.beta),
        None => row(
            &mut out,
            "reordering boost beta",
            "none (no reordering frame exists)",
        ),
    }
    row(&mut out, "boosted order", order(r.boosted_order));
    match r.window {
        Some((lo, hi)) => row(&mut out, "window t_II < t < t_I", format!("({lo}, {hi})")),
        None => row(&mut out, "window t_II < t < t_I", "absent"),
    }
    matrix(&mut out, "input rho_C", r.input_state.matrix());
    matrix(&mut out, "asserted rho^B_t", r.asserted_b_marginal.matrix());
    matrix(&mut out, "asserted rho^C_t", r.asserted_c_marginal.matrix());
    matrix(&mut out, "actual (T rho)_C", r.actual_c_after.matrix());
    row(
        &mut out,
        "asserted pattern B=C=rho_C",
        yes_no(r.eq_3_7_pattern),
    );
    row(&mut out, "(T rho)_B = rho_C", yes_no(r.eq_4_1_holds));
    row(&mut out, "(T rho)_C = rho_C", yes_no(r.eq_4_2_holds));
    row(&mut out, "verdict", format!("{:?}", r.verdict));
    for s in &r.signals {
        row(
            &mut out,
            &format!("signal {}", s.bits),
            format!("{} -> {}", s.measurement.name(), s.correction.name()),
        );
    }
    for n in &r.notes {
        row(&mut out, "note", n);
    }
    out
}

pub fn certificate(c: &Certificate) -> String {
    let mut out = String::new();
    row(&mut out, "dim", c.dim);
    row(&mut out, "terms", c.terms);
    match c.partition_residual {
        Some(p) => row(&mut out, "partition residual", num(p)),
        None => row(&mut out, "partition residual", "n/a"),
    }
    row(
        &mut out,
        "trace-preservation residual",
        num(c.trace_preservation_residual),
    );
    row(&mut out, "trace preserving", yes_no(c.trace_preserving));
    row(&mut out, "Choi min eigenvalue", num(c.choi_min_eigenvalue));
    row(
        &mut out,
        "completely positive",
        yes_no(c.completely_positive),
    );
    out
}
