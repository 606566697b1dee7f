//! Bundled three-line manufacturing net with an unreliable two-unit resource `p12`.
//!
//! Subnet 1: p1→t1→p2→t2→p3→t3→p4→t4→p1, subnet 2: p5→t5→p6→t6→p7→t7→p5,
//! subnet 3: p8→t8→p9→t9→p8. Resources p10 (1 unit), p11 (2), p12 (2).

use crate::io::{NetDocument, S4prNet};

pub const CASE_STUDY: &str = include_str!("../fixtures/case_study.net");

pub fn case_study() -> S4prNet {
    NetDocument::parse(CASE_STUDY)
        .expect("bundled fixture parses")
        .build()
        .expect("bundled fixture is well formed")
}

/// Robust markings of the bundled net for `p12`, 12 rows.
pub const ROBUST_ROWS: [[u32; 12]; 12] = [
    [2, 0, 0, 0, 1, 0, 0, 1, 0, 1, 2, 2],
    [2, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 2],
    [2, 0, 0, 0, 0, 1, 0, 1, 0, 1, 2, 1],
    [1, 1, 0, 0, 1, 0, 0, 1, 0, 1, 1, 2],
    [2, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1],
    [2, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 2],
    [1, 1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1],
    [1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 2, 2],
    [1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 2, 1],
    [1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 2],
    [1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1],
    [1, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 2],
];

/// Non-robust markings of the bundled net for `p12`, 11 rows.
pub const UNROBUST_ROWS: [[u32; 12]; 11] = [
    [0, 2, 0, 0, 1, 0, 0, 1, 0, 1, 0, 2],
    [0, 2, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1],
    [1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1],
    [0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 2],
    [1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0],
    [0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 1, 1],
    [0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1],
    [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0],
    [0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 1, 1],
    [0, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1, 0],
    [0, 0, 0, 2, 1, 0, 0, 1, 0, 1, 0, 0],
];
