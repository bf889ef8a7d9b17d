//! Cake, measures, regions and allocations.

mod allocation;
mod instance;
mod region;
mod valuation;

pub use allocation::{cut_count, Allocation};
pub(crate) use instance::common_refinement;
pub use instance::{Instance, Topology};
pub use region::{Interval, Region};
pub use valuation::{equal_marks, mark_right, measure_of, Valuation};
