use serde::{Deserialize, Serialize};

/// Where a tolerance comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToleranceBasis {
    /// Integer, logical or bit-exact comparison.
    Exact,
    /// Products of diagonal operators, limited by rounding only.
    ExactDiagonal,
    /// Limited by rounding in the lattice transform.
    TransformRoundoff,
    /// Set by the order of a finite difference in time or parameter.
    FiniteDifferenceOrder,
    /// Set by trilinear interpolation on the momentum lattice.
    InterpolationOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResidual {
    pub id: String,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
}

/// Convergence-order requirement and what was measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub required: f64,
    pub measured_min: f64,
    /// Largest residual at the smallest parameter, i.e. the error floor the
    /// difference quotient settles on.
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub anchor: String,
    pub probes: Vec<ProbeResidual>,
    pub tolerance: f64,
    pub tolerance_basis: ToleranceBasis,
    pub pass: bool,
    pub order_estimate: Option<OrderEstimate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<Detail>,
}

impl CheckReport {
    pub fn new(check: &str, anchor: &str, tolerance: f64, basis: ToleranceBasis) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            anchor: anchor.to_string(),
            probes: Vec::new(),
            tolerance,
            tolerance_basis: basis,
            pass: true,
            order_estimate: None,
            details: Vec::new(),
        }
    }

    pub fn push(&mut self, id: impl Into<String>, residual: f64) {
        self.probes.push(ProbeResidual { id: id.into(), residual, order: None });
    }

    pub fn push_with_order(&mut self, id: impl Into<String>, residual: f64, order: f64) {
        self.probes.push(ProbeResidual { id: id.into(), residual, order: Some(order) });
    }

    pub fn detail(&mut self, name: impl Into<String>, value: f64) {
        self.details.push(Detail { name: name.into(), value });
    }

    pub fn require_order(&mut self, required: f64) {
        let measured_min = self.probes.iter().filter_map(|p| p.order).fold(f64::INFINITY, f64::min);
        let floor = self.max_residual();
        self.order_estimate = Some(OrderEstimate { required, measured_min, floor });
    }

    pub fn max_residual(&self) -> f64 {
        self.probes.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    /// Settles `pass`: every residual within tolerance (NaN fails) and, when
    /// an order is required, every measured order at least that.
    pub fn finish(mut self) -> CheckReport {
        let within = self.probes.iter().all(|p| p.residual <= self.tolerance);
        let order_ok = self.order_estimate.as_ref().is_none_or(|o| o.measured_min >= o.required);
        self.pass = within && order_ok;
        self
    }
}

/// The whole suite's outcome, ordered by check name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub grid: crate::kinematics::GridSpec,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn failed(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
