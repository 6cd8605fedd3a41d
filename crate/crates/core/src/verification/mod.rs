//! Property checks and the acceptance suite runner.

mod checks;
mod consistency;
mod probes;
mod report;
mod suite;

pub use checks::{CHECK_NAMES, DEMO_MIN_RHO_HAT};
pub use consistency::{generator_quotients, Consistency, Subgroup};
pub use probes::{Occupancy, Probe, ProbeRanges, ProbeSet};
pub use report::{CheckReport, Detail, OrderEstimate, ProbeResidual, SuiteReport, ToleranceBasis};
pub use suite::{check_names, run_suite, SuiteConfig};
