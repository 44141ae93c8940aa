//! Small instances shipped with the crate.

use crate::graph::Instance;
use crate::steinlib::parse_steinlib;

/// Three nodes, edges `{1,2}:[4,8]`, `{1,3}:[1,3]`, `{2,3}:[1,3]`,
/// terminals `{1, 2}`, root 1.
pub const TINY1_STP: &str = include_str!("../fixtures/tiny1.stp");

pub fn tiny1() -> Instance {
    parse_steinlib(TINY1_STP).expect("bundled fixture parses")
}
