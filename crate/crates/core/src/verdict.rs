use serde::{Deserialize, Serialize};

/// Outcome of a sign check over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Running minimum of a margin over grid points, remembering where it occurred.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WorstMargin {
    pub margin: f64,
    pub witness: f64,
}

impl WorstMargin {
    pub fn new() -> Self {
        Self { margin: f64::INFINITY, witness: f64::NAN }
    }

    pub fn update(&mut self, at: f64, margin: f64) {
        // NaN margins count as failures at that point
        let m = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if m < self.margin {
            self.margin = m;
            self.witness = at;
        }
    }

    /// Holds iff every margin exceeded `tol`. A worst margin inside `[-tol, tol]`
    /// is a non-strict failure.
    pub fn verdict(&self, tol: f64) -> (Verdict, Option<&'static str>) {
        if self.margin > tol {
            (Verdict::Holds, None)
        } else if self.margin >= -tol {
            (Verdict::Fails, Some("non-strict"))
        } else {
            (Verdict::Fails, None)
        }
    }
}
