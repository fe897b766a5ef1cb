//! One-shot classification of a distance against every class.

use serde::{Deserialize, Serialize};

use crate::axioms::{check_semimetric, verify_on, Axiom, SemimetricReport, TripleWitness, SLACK_RTOL};
use crate::error::Result;
use crate::feasibility::Objective;
use crate::fit::{
    default_alpha_grid, fit_b_index_on, fit_interpolative_on, fit_strong_b_index_on, fit_suprametric_constants_on,
    interpolative_to_b_index, ConstantsFit, FitKind, FitLimits, FitOutcome, SupraForm,
};
use crate::oracle::DistanceOracle;
use crate::point::DomainBox;
use crate::sampling::{self, SampleConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub sample: SampleConfig,
    pub limits: FitLimits,
    /// Also fit the b-index on the half-width box to expose unbounded growth.
    pub growth_probe: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            sample: SampleConfig::default(),
            limits: FitLimits::default(),
            growth_probe: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClassVerdict {
    /// No violation on the sample at the fitted constants. Evidence, not proof.
    Holds { fit: ConstantsFit },
    /// An explicit witness rules the class out (or every constant within the
    /// configured limits).
    Fails {
        witness: TripleWitness,
        fitted: Option<ConstantsFit>,
        note: String,
    },
    Inconclusive { reason: String },
}

impl ClassVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ClassVerdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, ClassVerdict::Fails { .. })
    }

    /// Fitted constants, whether or not the class holds.
    pub fn fitted(&self) -> Option<&ConstantsFit> {
        match self {
            ClassVerdict::Holds { fit } => Some(fit),
            ClassVerdict::Fails { fitted, .. } => fitted.as_ref(),
            ClassVerdict::Inconclusive { .. } => None,
        }
    }

    pub fn s(&self) -> Option<f64> {
        self.fitted().and_then(|f| f.s)
    }

    pub fn c(&self) -> Option<f64> {
        self.fitted().and_then(|f| f.c)
    }
}

/// b-index on nested boxes; large jumps suggest no finite index exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEvidence {
    pub inner_box: DomainBox,
    pub inner_s: f64,
    pub outer_box: DomainBox,
    pub outer_s: f64,
    pub growing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub label: String,
    pub description: String,
    pub config: ClassifyConfig,
    pub domain: Option<DomainBox>,
    pub triples: usize,
    pub exhaustive: bool,
    pub semimetric: SemimetricReport,
    pub metric: ClassVerdict,
    pub strong_b: ClassVerdict,
    pub b: ClassVerdict,
    pub b_growth: Option<GrowthEvidence>,
    pub strong_supra: ClassVerdict,
    pub supra: ClassVerdict,
    pub interpolative: ClassVerdict,
    pub lattice_issues: Vec<String>,
}

impl AxiomReport {
    pub fn lattice_ok(&self) -> bool {
        self.lattice_issues.is_empty()
    }

    /// A suprametric is a b-suprametric with `s = 1`.
    pub fn is_suprametric(&self) -> bool {
        self.supra.holds() && self.supra.s() == Some(1.0)
    }
}

fn ratio_verdict(fit: ConstantsFit, limit: f64, name: &str) -> ClassVerdict {
    let s = fit.s.unwrap_or(1.0);
    if s > limit {
        ClassVerdict::Fails {
            witness: fit.extremal.clone(),
            note: format!("{name} index {s:e} exceeds the limit {limit:e}"),
            fitted: Some(fit),
        }
    } else {
        ClassVerdict::Holds { fit }
    }
}

fn outcome_verdict(outcome: FitOutcome, note: &str) -> ClassVerdict {
    match outcome {
        FitOutcome::Feasible(fit) => ClassVerdict::Holds { fit },
        FitOutcome::Infeasible { witness } => ClassVerdict::Fails {
            witness,
            fitted: None,
            note: note.into(),
        },
    }
}

/// Runs every check on one shared sample drawn from `cfg.sample.seed`.
pub fn classify(oracle: &DistanceOracle, cfg: &ClassifyConfig) -> Result<AxiomReport> {
    let semimetric = check_semimetric(oracle, &cfg.sample)?;
    let triples = sampling::triples(oracle, &cfg.sample)?;
    let mut report = AxiomReport {
        label: oracle.label().to_string(),
        description: oracle.describe(),
        config: *cfg,
        domain: oracle.domain(),
        triples: triples.len(),
        exhaustive: triples.exhaustive,
        semimetric,
        metric: ClassVerdict::Inconclusive { reason: String::new() },
        strong_b: ClassVerdict::Inconclusive { reason: String::new() },
        b: ClassVerdict::Inconclusive { reason: String::new() },
        b_growth: None,
        strong_supra: ClassVerdict::Inconclusive { reason: String::new() },
        supra: ClassVerdict::Inconclusive { reason: String::new() },
        interpolative: ClassVerdict::Inconclusive { reason: String::new() },
        lattice_issues: Vec::new(),
    };
    if !report.semimetric.ok {
        let reason = "semi-metric axioms violated".to_string();
        for v in [
            &mut report.metric,
            &mut report.strong_b,
            &mut report.b,
            &mut report.strong_supra,
            &mut report.supra,
            &mut report.interpolative,
        ] {
            *v = ClassVerdict::Inconclusive { reason: reason.clone() };
        }
        return Ok(report);
    }

    let triangle = verify_on(&triples, Axiom::Metric)?;
    report.metric = match triangle.worst {
        Some(w) if !triangle.ok => ClassVerdict::Fails {
            witness: w,
            fitted: None,
            note: format!("{} of {} triples violate the triangle inequality", triangle.violations, triangle.triples_checked),
        },
        Some(w) => ClassVerdict::Holds {
            fit: ConstantsFit {
                kind: FitKind::Metric,
                s: Some(1.0),
                c: None,
                alpha: None,
                extremal: w,
                samples_used: triangle.triples_checked,
                exhaustive: triangle.exhaustive,
            },
        },
        None => ClassVerdict::Inconclusive {
            reason: "empty triple sample".into(),
        },
    };

    let limits = cfg.limits;
    report.b = ratio_verdict(fit_b_index_on(&triples)?, limits.s_max, "b-metric");
    report.strong_b = ratio_verdict(fit_strong_b_index_on(&triples)?, limits.s_max, "strong b-metric");
    report.supra = outcome_verdict(
        fit_suprametric_constants_on(&triples, SupraForm::Plain, Objective::LexMinSThenC, limits)?,
        "no (s, c) within the limits",
    );
    report.strong_supra = outcome_verdict(
        fit_suprametric_constants_on(&triples, SupraForm::Strong, Objective::LexMinSThenC, limits)?,
        "no (s, c) within the limits",
    );
    report.interpolative = outcome_verdict(
        fit_interpolative_on(&triples, &default_alpha_grid(), limits)?,
        "no c within the limit for any alpha on the grid",
    );

    if cfg.growth_probe {
        if let (Some(outer), Some(outer_s)) = (oracle.domain(), report.b.s()) {
            let inner = outer.shrunk(0.5);
            let inner_s = fit_b_index_on(&sampling::triples(&oracle.with_domain(inner)?, &cfg.sample)?)?
                .s
                .unwrap_or(1.0);
            report.b_growth = Some(GrowthEvidence {
                inner_box: inner,
                inner_s,
                outer_box: outer,
                outer_s,
                growing: outer_s > 1.5 * inner_s,
            });
        }
    }

    report.lattice_issues = lattice_issues(&report);
    Ok(report)
}

fn le(a: f64, b: f64) -> bool {
    a <= b + SLACK_RTOL * (1.0 + b.abs())
}

/// Implications between classes evaluated on the fitted constants:
/// metric ⇒ strong b ⇒ b ⇒ b-supra, strong b-supra ⇒ b-supra and
/// interpolative(α, c) ⇒ b with index `max{1 + cα, 1 + c(1 − α)}`.
pub fn lattice_issues(r: &AxiomReport) -> Vec<String> {
    let mut issues = Vec::new();
    let s_b = r.b.s();
    let s_strong = r.strong_b.s();
    let s_supra = r.supra.s();
    let mut require = |cond: bool, msg: String| {
        if !cond {
            issues.push(msg);
        }
    };
    if r.metric.holds() {
        for (name, s) in [("strong b", s_strong), ("b", s_b), ("b-supra", s_supra), ("strong b-supra", r.strong_supra.s())] {
            require(s.is_some_and(|s| le(s, 1.0)), format!("metric holds but {name} index is {s:?}"));
        }
        require(r.supra.c().is_some_and(|c| le(c, 0.0)), format!("metric holds but b-supra c is {:?}", r.supra.c()));
    }
    if let (true, Some(ss)) = (r.strong_b.holds(), s_strong) {
        require(
            r.b.holds() && s_b.is_some_and(|s| le(s, ss)),
            format!("strong b-metric with s = {ss} but b index is {s_b:?}"),
        );
    }
    if let (true, Some(sb)) = (r.b.holds(), s_b) {
        require(
            r.supra.holds() && s_supra.is_some_and(|s| le(s, sb)),
            format!("b-metric with s = {sb} but b-supra index is {s_supra:?}"),
        );
    }
    if let (true, Some(ss)) = (r.strong_supra.holds(), r.strong_supra.s()) {
        require(
            r.supra.holds() && s_supra.is_some_and(|s| le(s, ss)),
            format!("strong b-suprametric with s = {ss} but b-supra index is {s_supra:?}"),
        );
    }
    if let ClassVerdict::Holds { fit } = &r.interpolative {
        if let (Some(alpha), Some(c)) = (fit.alpha, fit.c) {
            if let Ok(bound) = interpolative_to_b_index(alpha, c) {
                require(
                    s_b.is_some_and(|s| le(s, bound)),
                    format!("interpolative ({alpha}, {c}) implies b index <= {bound}, fitted {s_b:?}"),
                );
            }
        }
    }
    issues
}
