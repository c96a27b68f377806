//! Monotonicity criteria for the period function and the polynomial
//! identities behind them.
//!
//! Every sign check returns a [`CriterionReport`] carrying the worst
//! normalized margin over its grid and where it occurred.

mod polynomials;
mod potential_checks;
mod scans;

use serde::{Deserialize, Serialize};

use crate::verdict::{Verdict, WorstMargin};

pub use polynomials::{
    c_ma, discriminant, elimination, f_at_gamma, f_big, f_of, f_on_curve, fg_convexity, g_big, g_big_prime,
    g_big_second, k_alternate, phi_big, taylor_coeff_near_1, w_jet, w_poly, Discriminant, Elimination,
};
pub use potential_checks::{
    chicone_report, chicone_second_derivative, chow_wang_report, h_convex_report, inv_hprime2_report, k_monotonicity_report,
    k_of, r_of,
};
pub use scans::{convexity_report, discriminant_report, f_nonneg_scan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "chow-wang-R")]
    ChowWangR,
    #[serde(rename = "chicone-convexity")]
    ChiconeConvexity,
    #[serde(rename = "K-decreasing")]
    KDecreasing,
    #[serde(rename = "h-convex")]
    HConvex,
    #[serde(rename = "inv-hprime2-convex")]
    InvHprime2Convex,
    #[serde(rename = "f-nonneg")]
    FNonneg,
    #[serde(rename = "discriminant")]
    Discriminant,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Criterion::ChowWangR,
        Criterion::ChiconeConvexity,
        Criterion::KDecreasing,
        Criterion::HConvex,
        Criterion::InvHprime2Convex,
        Criterion::FNonneg,
        Criterion::Discriminant,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Criterion::ChowWangR => "chow-wang-R",
            Criterion::ChiconeConvexity => "chicone-convexity",
            Criterion::KDecreasing => "K-decreasing",
            Criterion::HConvex => "h-convex",
            Criterion::InvHprime2Convex => "inv-hprime2-convex",
            Criterion::FNonneg => "f-nonneg",
            Criterion::Discriminant => "discriminant",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Where the worst margin was found: a point of the grid, or a parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    At(f64),
    Params { a: f64, m: f64 },
    Nowhere,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub worst_margin: f64,
    pub witness: Witness,
    /// Number of grid points evaluated.
    pub samples: usize,
    pub note: Option<String>,
}

impl CriterionReport {
    pub(crate) fn from_scan(criterion: Criterion, worst: WorstMargin, tol: f64, samples: usize) -> Self {
        let (verdict, flag) = worst.verdict(tol);
        let witness = if worst.witness.is_nan() { Witness::Nowhere } else { Witness::At(worst.witness) };
        Self { criterion, verdict, worst_margin: worst.margin, witness, samples, note: flag.map(str::to_string) }
    }

    pub fn inconclusive(criterion: Criterion, why: impl Into<String>) -> Self {
        Self {
            criterion,
            verdict: Verdict::Inconclusive,
            worst_margin: f64::NAN,
            witness: Witness::Nowhere,
            samples: 0,
            note: Some(why.into()),
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}
