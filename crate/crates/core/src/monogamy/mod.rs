//! α-power monogamy and polygamy residuals.
//!
//! A [`ResidualReport`] records one evaluation of
//! `M(focus | rest)^α − Σ M(focus, partner)^α` (or its hierarchical variant with
//! a multi-qubit tail term), together with the regime the exponent falls in and
//! a verdict derived from the residual's sign.

mod closed_form;
mod residual;

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::MeasureId;
use crate::convexroof::RoofConfig;

pub use closed_form::{
    count_sign_changes, tau_concurrence_ghz_closed_form, tau_concurrence_w_closed_form,
    tau_negativity_w_closed_form, tau_negativity_w_zero_crossing, w_negativity_bracket,
    w_one_to_rest_concurrence, w_pairwise_concurrence, w_pairwise_negativity,
};
pub use residual::{
    alpha_residual, alpha_sweep, hierarchical_residual, polygamy_check, one_to_rest_measure,
    pairwise_measure,
};

/// Which of the known guarantees applies to an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// α ≥ 2 for concurrence, negativity and CREN.
    MonogamyNegCren,
    /// α ≥ √2 for entanglement of formation.
    MonogamyEof,
    /// 0 < α below the measure's threshold: no sign guarantee.
    OpenBand,
    /// α < 0.
    Polygamy,
}

impl Regime {
    pub fn guarantees_monogamy(self) -> bool {
        matches!(self, Regime::MonogamyNegCren | Regime::MonogamyEof)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaExponent {
    pub alpha: f64,
    pub regime: Regime,
}

impl AlphaExponent {
    /// Exponent below which monogamy of `measure`^α is not guaranteed.
    pub fn threshold(measure: MeasureId) -> f64 {
        match measure {
            MeasureId::Eof => SQRT_2,
            _ => 2.0,
        }
    }

    pub fn new(alpha: f64, measure: MeasureId) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::arg(format!("alpha must be finite, got {alpha}")));
        }
        if alpha == 0.0 {
            return Err(Error::arg("alpha = 0 makes every term 1; it is not a valid exponent"));
        }
        let regime = if alpha < 0.0 {
            Regime::Polygamy
        } else if alpha >= Self::threshold(measure) {
            match measure {
                MeasureId::Eof => Regime::MonogamyEof,
                _ => Regime::MonogamyNegCren,
            }
        } else {
            Regime::OpenBand
        };
        Ok(Self { alpha, regime })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Monogamous,
    Polygamous,
    ViolationOfTheorem,
    /// α < 0 with a zero-valued term: 0^α is undefined and the inequality holds trivially.
    VacuousPass,
    /// A bound-valued residual whose sign does not settle the question.
    Inconclusive,
}

/// How the reported residual relates to the true one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualBound {
    Exact,
    /// True residual ≥ reported (an optimizer tail term with α > 0).
    LowerBound,
    /// True residual ≤ reported (an optimizer tail term with α < 0).
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhsTerm {
    /// Subsystems paired with the focus in this term.
    pub partners: Vec<usize>,
    /// The measure value M before exponentiation.
    pub measure_value: f64,
    /// M^α, or 0 when the term is excluded.
    pub value: f64,
    pub exact: bool,
    /// Zero-valued term at α < 0, left out of the sum.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub measure: MeasureId,
    pub alpha: f64,
    pub regime: Regime,
    pub focus: usize,
    /// M(focus | rest)^α.
    pub lhs: f64,
    pub lhs_measure_value: f64,
    pub rhs_terms: Vec<RhsTerm>,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    /// All terms exact.
    pub exact: bool,
    pub bound: ResidualBound,
    /// Hierarchy level k (equal to the qubit count for the full pairwise sum).
    pub k: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ResidualReport {
    pub fn rhs_sum(&self) -> f64 {
        self.rhs_terms.iter().map(|t| t.value).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualOptions {
    pub focus: usize,
    /// Verdict tolerance on the residual.
    pub tolerance: f64,
    /// Measure values at or below this are roundoff zeros: they contribute 0 for
    /// α > 0 (instead of, say, (1e-16)^0.02 ≈ 0.48) and are excluded for α < 0.
    pub zero_threshold: f64,
    /// Used for concurrence/CREN tail terms on mixed multi-qubit marginals.
    pub roof: RoofConfig,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self { focus: 0, tolerance: 1e-9, zero_threshold: 1e-12, roof: RoofConfig::default() }
    }
}

pub(crate) fn classify(residual: f64, regime: Regime, tol: f64, bound: ResidualBound, vacuous: bool) -> Verdict {
    if vacuous {
        return Verdict::VacuousPass;
    }
    let proves_low = matches!(bound, ResidualBound::Exact | ResidualBound::LowerBound);
    let proves_high = matches!(bound, ResidualBound::Exact | ResidualBound::UpperBound);
    match regime {
        Regime::Polygamy => {
            if residual <= tol && proves_high {
                Verdict::Polygamous
            } else if residual > tol && proves_low {
                Verdict::ViolationOfTheorem
            } else {
                Verdict::Inconclusive
            }
        }
        Regime::MonogamyNegCren | Regime::MonogamyEof => {
            if residual >= -tol && proves_low {
                Verdict::Monogamous
            } else if residual < -tol && proves_high {
                Verdict::ViolationOfTheorem
            } else {
                Verdict::Inconclusive
            }
        }
        Regime::OpenBand => {
            if residual >= -tol && proves_low {
                Verdict::Monogamous
            } else if residual < -tol && proves_high {
                Verdict::Polygamous
            } else {
                Verdict::Inconclusive
            }
        }
    }
}
