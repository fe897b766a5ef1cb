//! Human-readable reports.

use std::fmt::Write as _;

use suprametric_core::axioms::{SemimetricAxiom, TripleWitness};
use suprametric_core::classify::ClassVerdict;
use suprametric_core::comparison::{ThetaVerdict, Verdict};
use suprametric_core::falsify::{FalsifyReport, Phase, Witness};
use suprametric_core::gallery::{ExpectedClass, GalleryItem};
use suprametric_core::picard::{CertificateVerdict, ContractionKind, SolveStatus};
use suprametric_core::point::fmt_num as n;

use crate::{CertifyOutput, ClassifyResult, ConvertResult, OrbitProbe, SolveOutput, ThetaOutput};

fn triple(w: &TripleWitness) -> String {
    format!(
        "(x, z, y) = ({}, {}, {}): Δ(x,y) = {}, Δ(x,z) = {}, Δ(z,y) = {}, slack {}",
        w.x,
        w.z,
        w.y,
        n(w.lhs),
        n(w.leg_a),
        n(w.leg_b),
        n(w.slack)
    )
}

fn constants(v: &ClassVerdict) -> String {
    let Some(f) = v.fitted() else {
        return String::new();
    };
    let mut parts = Vec::new();
    if let Some(a) = f.alpha {
        parts.push(format!("alpha = {}", n(a)));
    }
    if let Some(s) = f.s {
        parts.push(format!("s = {}", n(s)));
    }
    if let Some(c) = f.c {
        parts.push(format!("c = {}", n(c)));
    }
    parts.join(", ")
}

fn verdict_line(out: &mut String, name: &str, v: &ClassVerdict) {
    match v {
        ClassVerdict::Holds { fit } => {
            let _ = writeln!(out, "  {name:<22} holds   {}", constants(v));
            let _ = writeln!(out, "  {:<22}         binding {}", "", triple(&fit.extremal));
        }
        ClassVerdict::Fails { witness, note, .. } => {
            let _ = writeln!(out, "  {name:<22} fails   {note}");
            let _ = writeln!(out, "  {:<22}         witness {}", "", triple(witness));
        }
        ClassVerdict::Inconclusive { reason } => {
            let _ = writeln!(out, "  {name:<22} inconclusive ({reason})");
        }
    }
}

pub fn expected(e: &ExpectedClass) -> String {
    match e {
        ExpectedClass::Metric => "metric".into(),
        ExpectedClass::BMetric { s } => format!("b-metric with s = {}", n(*s)),
        ExpectedClass::Suprametric { s, c, b_unbounded } => format!(
            "b-suprametric with s = {}, c = {}{}",
            n(*s),
            n(*c),
            if *b_unbounded { ", no finite b-index" } else { "" }
        ),
        ExpectedClass::NotSemimetric => "not a semimetric".into(),
    }
}

pub fn classify(r: &ClassifyResult, item: Option<&GalleryItem>) -> String {
    let rep = &r.report;
    let mut out = String::new();
    let _ = writeln!(out, "space: {} ({})", rep.label, rep.description);
    let _ = writeln!(
        out,
        "sample: seed {}, {} triples{}",
        rep.config.sample.seed,
        rep.triples,
        if rep.exhaustive { " (all of them)" } else { "" }
    );
    let sm = &rep.semimetric;
    if sm.ok {
        let _ = writeln!(out, "semimetric: ok on {} pairs", sm.pairs_checked);
    } else {
        let _ = writeln!(out, "semimetric: VIOLATED ({} violations on {} pairs)", sm.violations, sm.pairs_checked);
        for w in &sm.witnesses {
            let _ = match (w.axiom, w.backward) {
                (SemimetricAxiom::Symmetry, Some(b)) => {
                    writeln!(out, "  symmetry: Δ({}, {}) = {} but Δ({}, {}) = {}", w.x, w.y, n(w.forward), w.y, w.x, n(b))
                }
                (SemimetricAxiom::Identity, _) => writeln!(out, "  identity: Δ({}, {}) = {}", w.x, w.y, n(w.forward)),
                (SemimetricAxiom::NonNegativity, _) => {
                    writeln!(out, "  non-negativity: Δ({}, {}) = {}", w.x, w.y, n(w.forward))
                }
                (SemimetricAxiom::Symmetry, None) => writeln!(out, "  symmetry: Δ({}, {})", w.x, w.y),
            };
        }
    }
    let _ = writeln!(out, "classes:");
    verdict_line(&mut out, "metric", &rep.metric);
    verdict_line(&mut out, "strong b-metric", &rep.strong_b);
    verdict_line(&mut out, "b-metric", &rep.b);
    if let Some(g) = &rep.b_growth {
        let _ = writeln!(
            out,
            "  {:<22}         index {} on {}, {} on {}{}",
            "",
            n(g.inner_s),
            g.inner_box,
            n(g.outer_s),
            g.outer_box,
            if g.growing {
                " (WARNING: grows with the box)"
            } else {
                ""
            }
        );
    }
    verdict_line(&mut out, "strong b-suprametric", &rep.strong_supra);
    verdict_line(&mut out, "b-suprametric", &rep.supra);
    verdict_line(&mut out, "interpolative", &rep.interpolative);
    if rep.is_suprametric() {
        let _ = writeln!(out, "suprametric: yes ({})", constants(&rep.supra));
    }
    if rep.lattice_ok() {
        let _ = writeln!(out, "lattice: consistent");
    } else {
        for issue in &rep.lattice_issues {
            let _ = writeln!(out, "lattice: INCONSISTENT {issue}");
        }
    }
    if let (Some(item), Some(m)) = (item, &r.expected_mismatches) {
        let status = if m.is_empty() { "reproduced".to_string() } else { m.join("; ") };
        let _ = writeln!(out, "expected: {}: {status}", expected(&item.expected));
    }
    out
}

pub fn convert(r: &ConvertResult) -> String {
    let mut out = format!("{}\n", r.s);
    if let Some(v) = &r.verify {
        let _ = writeln!(out, "check on {} ({} triples):", v.space, v.triples);
        let _ = writeln!(
            out,
            "  interpolative (alpha = {}, c = {}): {}",
            n(r.alpha),
            n(r.c),
            if v.interpolative_ok { "holds" } else { "fails" }
        );
        let _ = writeln!(
            out,
            "  b-metric (s = {}): {}{}",
            n(r.s),
            if v.b_metric_ok { "holds" } else { "fails" },
            v.b_worst_slack.map(|s| format!(", worst slack {}", n(s))).unwrap_or_default()
        );
        let _ = writeln!(
            out,
            "  implication: {}",
            if v.implication_holds { "holds" } else { "VIOLATED" }
        );
    }
    out
}

pub fn solve(o: &SolveOutput) -> String {
    let r = &o.result;
    let mut out = String::new();
    let status = match r.status {
        SolveStatus::Converged => "converged",
        SolveStatus::MaxIter => "not converged (iteration cap reached)",
        SolveStatus::Diverged => "diverged",
    };
    let _ = writeln!(out, "map: {}, start {}", o.map, r.start);
    let _ = writeln!(out, "status: {status}");
    if let Some(k) = r.escaped_at {
        let _ = writeln!(out, "left the domain at iteration {k}");
    }
    let _ = writeln!(out, "point: {}", r.fixed_point);
    let _ = writeln!(out, "iterations: {}", r.iterations);
    let _ = writeln!(out, "last step: {}", n(r.last_step));
    match r.residual {
        Some(res) => {
            let _ = writeln!(out, "residual Δ(z, Tz): {}", n(res));
        }
        None => {
            let _ = writeln!(out, "residual Δ(z, Tz): unavailable");
        }
    }
    if let Some(p) = &o.trace_written {
        let _ = writeln!(out, "trace: {}", p.display());
    }
    out
}

fn theta_verdict(v: &ThetaVerdict) -> String {
    match &v.verdict {
        Verdict::Holds => "holds".into(),
        Verdict::Fails { t, evidence } => format!("fails at t = {} ({evidence})", n(*t)),
        Verdict::Inconclusive { reason } => format!("inconclusive ({reason})"),
    }
}

pub fn certify(o: &CertifyOutput) -> String {
    let c = &o.certificate;
    let mut out = String::new();
    let kind = match c.kind {
        ContractionKind::Plain => "Δ(Tx,Ty) <= θ(Δ(x,y))",
        ContractionKind::Ciric => "Δ(Tx,Ty) <= θ(max{Δ(x,y), Δ(x,Tx), Δ(y,Ty)})",
    };
    let _ = writeln!(out, "contraction: {kind}");
    let _ = writeln!(out, "map: {}, θ = {}", o.map, c.theta);
    let _ = writeln!(out, "pairs checked: {}", c.pairs_checked);
    let _ = writeln!(out, "min slack: {}", n(c.min_slack));
    if let Some((x, y)) = &c.worst_pair {
        let _ = writeln!(
            out,
            "worst pair: ({x}, {y}), slack {} (relative {})",
            n(c.worst_slack),
            n(c.worst_relative_slack)
        );
    }
    let verdict = match c.verdict {
        CertificateVerdict::NoViolation => "no_violation".to_string(),
        CertificateVerdict::Violated => format!("violated ({} pairs)", c.violations),
    };
    let _ = writeln!(out, "verdict: {verdict}");
    match &o.orbit {
        OrbitProbe::Bounded { start, bound } => {
            let _ = writeln!(
                out,
                "orbit from {start}: diameter {} over {} points{}",
                n(bound.m),
                bound.window,
                if bound.growing { " (growing)" } else { "" }
            );
        }
        OrbitProbe::Escaped { start, iteration, point } => {
            let _ = writeln!(out, "orbit from {start}: left the domain at iteration {iteration} ({point})");
        }
    }
    let t = &o.theta;
    let _ = writeln!(
        out,
        "θ monotone: {}",
        t.monotone
            .as_ref()
            .map(|w| format!("no, θ({}) = {} > θ({}) = {}", n(w.t1), n(w.value1), n(w.t2), n(w.value2)))
            .unwrap_or_else(|| "yes".into())
    );
    let _ = writeln!(
        out,
        "θ(t) < t: {}",
        t.subdiagonal
            .as_ref()
            .map(|w| format!("no, θ({}) = {}", n(w.t), n(w.value)))
            .unwrap_or_else(|| "yes".into())
    );
    let _ = writeln!(out, "θ iterates to zero: {}", theta_verdict(&t.theta1));
    out
}

pub fn falsify(r: &FalsifyReport) -> String {
    let mut out = String::new();
    match &r.witness {
        None => {
            let _ = writeln!(out, "no counterexample found ({} checks)", r.checked);
        }
        Some(Witness::Triple { witness, triangle_ratio }) => {
            let phase = match r.phase {
                Some(Phase::Structured) => "structured search",
                _ => "random search",
            };
            let _ = writeln!(out, "counterexample ({phase}, {} checks):", r.checked);
            let _ = writeln!(out, "  {}", triple(witness));
            let _ = writeln!(out, "  triangle ratio {}", n(*triangle_ratio));
        }
        Some(Witness::Pair { violation }) => {
            let _ = writeln!(out, "counterexample ({} pairs checked):", r.checked);
            let _ = writeln!(
                out,
                "  Δ({}, {}) = {} but Δ({}, {}) = {}",
                violation.x,
                violation.y,
                n(violation.forward),
                violation.y,
                violation.x,
                n(violation.backward.unwrap_or(f64::NAN))
            );
        }
    }
    out
}

pub fn theta(o: &ThetaOutput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "θ = {}", o.theta);
    let _ = writeln!(
        out,
        "monotone: {}",
        o.monotone
            .as_ref()
            .map(|w| format!("fails, θ({}) = {} > θ({}) = {}", n(w.t1), n(w.value1), n(w.t2), n(w.value2)))
            .unwrap_or_else(|| "holds".into())
    );
    let _ = writeln!(
        out,
        "subdiagonal: {}",
        o.subdiagonal
            .as_ref()
            .map(|w| format!("fails at t = {}, θ(t) = {}", n(w.t), n(w.value)))
            .unwrap_or_else(|| "holds".into())
    );
    for v in [&o.theta1, &o.theta2] {
        let name = match v.class {
            suprametric_core::comparison::ThetaClass::Theta1 => "Θ₁ (iterates to 0)",
            suprametric_core::comparison::ThetaClass::Theta2 => "Θ₂ (summable iterates)",
        };
        let _ = writeln!(out, "{name}: {}", theta_verdict(v));
        for p in &v.probes {
            let sum = p.partial_sum.map(|s| format!(", partial sum {}", n(s))).unwrap_or_default();
            let _ = writeln!(out, "  t = {}: {} iterations, last {}{sum}", n(p.t), p.iterations, n(p.last_value));
        }
    }
    out
}

pub fn gallery(items: &[GalleryItem]) -> String {
    let mut out = String::new();
    for i in items {
        let _ = writeln!(out, "{:<16} {}", i.name, i.oracle.describe());
        let _ = writeln!(out, "{:<16} expected: {}", "", expected(&i.expected));
        if let Some(m) = &i.map {
            let theta = i.theta.as_ref().map(|t| t.name()).unwrap_or_else(|| "-".into());
            let fixed = i.fixed_point.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{:<16} map {}, θ {theta}, fixed point {fixed}", "", m.name());
        }
        let _ = writeln!(out, "{:<16} {}", "", i.note);
    }
    out
}
