//! Result carriers for the estimators.

use alloc::vec::Vec;

/// Scale parameters that produced an estimate. Only the fields relevant to
/// the producing estimator are set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScaleParams {
    /// Word or orbit length.
    pub n: Option<usize>,
    /// Resolution of the dynamical balls.
    pub eps: Option<f64>,
    /// Total variation radius of the empirical neighborhood.
    pub theta: Option<f64>,
    /// Hamming separation fraction.
    pub delta: Option<f64>,
    /// Depth of the empirical marginal being matched.
    pub depth: Option<usize>,
    /// Cover depth cap.
    pub max_depth: Option<usize>,
}

/// An estimated quantity together with the scales it was computed at and a
/// trace of intermediate values (one `(scale, value)` pair per stage).
///
/// `flagged` is set when some stage degenerated (for example an empty
/// candidate set), in which case `value` may be infinite and should not be
/// trusted.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub value: f64,
    pub params: ScaleParams,
    pub trace: Vec<(f64, f64)>,
    pub flagged: bool,
}

impl EstimateReport {
    pub fn new(value: f64, params: ScaleParams) -> Self {
        EstimateReport {
            value,
            params,
            trace: Vec::new(),
            flagged: false,
        }
    }
}
