use num_traits::ToPrimitive;

use super::cloning::{clone_divide, near_equal_divide, near_equal_pattern};
use super::recursive::recursive_divide;
use super::special::{equal_pair, special3_equal_pair, special3_half};
use super::AlgorithmReport;
use crate::config::SolverConfig;
use crate::error::Result;
use crate::model::Instance;
use crate::rational::{common_denominator, ratio};

/// Picks a protocol by entitlement pattern: near-equal, then the two
/// three-agent cases, and otherwise the better of cloning (when the common
/// denominator is at most `config.clone_cap`) and recursive halving.
pub fn auto_solve(inst: &Instance, config: &SolverConfig) -> Result<AlgorithmReport> {
    if near_equal_pattern(inst).is_some() {
        return near_equal_divide(inst, config);
    }
    if inst.agent_count() == 3 {
        if inst.entitlements().contains(&ratio(1, 2)) {
            return special3_half(inst, config);
        }
        if equal_pair(inst).is_some() {
            return special3_equal_pair(inst, config);
        }
    }
    let recursive = recursive_divide(inst, config)?;
    let d = common_denominator(inst.entitlements());
    if d.to_u64().is_some_and(|d| d <= config.clone_cap) {
        let cloned = clone_divide(inst, config)?;
        if cloned.cut_count() < recursive.cut_count() {
            return Ok(cloned);
        }
    }
    Ok(recursive)
}
