//! Inputs shared by the benchmarks.

use std::sync::Arc;

use lrc_core::{DifferenceMatrix, Field, Packing, ResolvablePacking, SystematicCode};

/// The 3-regular packing on eight points whose code is the binary [16,8,4] code.
pub fn regular_packing() -> Packing {
    let blocks = [
        [2, 3, 8],
        [3, 4, 1],
        [4, 5, 2],
        [5, 6, 3],
        [6, 7, 4],
        [7, 8, 5],
        [8, 1, 6],
        [1, 2, 7],
    ];
    Packing::new(8, blocks.iter().map(|b| b.to_vec()).collect()).expect("valid packing")
}

pub fn gf256() -> Arc<Field> {
    Arc::new(Field::new(2, 8, None).expect("GF(256)"))
}

pub fn rs(field: Arc<Field>, n: usize, k: usize) -> SystematicCode {
    SystematicCode::rs_systematic(field, n, k).expect("valid RS parameters")
}

/// Two parallel classes of blocks of size 3 (and one pair) on eight points.
pub fn two_classes() -> ResolvablePacking {
    let classes = vec![
        vec![vec![2, 3, 8], vec![6, 7, 4], vec![1, 5]],
        vec![vec![3, 4, 1], vec![7, 8, 5], vec![2, 6]],
    ];
    ResolvablePacking::new(8, classes).expect("valid resolvable packing")
}

pub fn difference_matrix(k: u64, r: usize, u: usize) -> DifferenceMatrix {
    DifferenceMatrix::build(k, r, u).expect("prime power order")
}
