//! Codes built from packings.
//!
//! * [`construction_a`]: a binary code whose check columns are the block
//!   indicator vectors of a packing.
//! * [`construction_b`]: an MDS code whose first `u` check columns are each
//!   split along one parallel class of a resolvable packing.

use serde::{Deserialize, Serialize};

use crate::codes::{MdsCertificate, SystematicCode, DEFAULT_MDS_EFFORT};
use crate::designs::{Packing, ResolvablePacking};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::locality::{verify_locality, Locality, LocalityReport};

use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionA {
    pub code: SystematicCode,
    pub packing: Packing,
    /// `max(R)`.
    pub r: usize,
    /// `Δ + 1`.
    pub delta: usize,
    /// `n1 = ⌈k(δ-1)/r⌉`.
    pub optimal_c: bool,
    /// The packing is `(δ-1)`-regular.
    pub update_optimal: bool,
    pub report: LocalityReport,
}

/// Binary systematic code whose `j`-th check column is the indicator of block `B_j`.
pub fn construction_a(packing: &Packing) -> Result<ConstructionA> {
    let k = packing.k();
    if let Some(idx) = packing.occurrences().iter().position(|&d| d == 0) {
        return Err(Error::UncoveredElement(idx + 1));
    }
    let columns = packing
        .blocks()
        .iter()
        .map(|b| (1..=k).map(|i| Elem::from(b.contains(&i))).collect())
        .collect();
    let code = SystematicCode::new(Arc::new(Field::binary()), k, columns)?;
    let r = packing.max_block_size();
    let spread = packing.min_occurrence();
    let delta = spread + 1;
    let report = match verify_locality(&code, r, delta)? {
        Locality::Satisfied(report) => report,
        Locality::Unsatisfied { symbol, .. } => {
            return Err(Error::SelfCheck(format!(
                "symbol {symbol} lacks repair groups"
            )))
        }
    };
    Ok(ConstructionA {
        optimal_c: packing.len() == (k * spread).div_ceil(r),
        update_optimal: packing.is_regular(spread),
        packing: packing.clone(),
        code,
        r,
        delta,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOptions {
    /// 1-based MDS check columns feeding classes `1..=u`; `None` means `1..=u`.
    pub columns: Option<Vec<usize>>,
    /// Square-minor budget for certifying the input code as MDS.
    pub mds_effort: u64,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            columns: None,
            mds_effort: DEFAULT_MDS_EFFORT,
        }
    }
}

/// Where every check column of a split code came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitLayout {
    /// MDS check column split by class `i` (index `i - 1`).
    pub source_columns: Vec<usize>,
    /// Output check columns of class `i`, one per block in class order.
    pub split_map: Vec<Vec<usize>>,
    /// `(mds column, output column)` for the columns copied unchanged.
    pub retained: Vec<(usize, usize)>,
}

/// Machine-checked argument that a split code has distance `n - k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCertificate {
    pub mds: MdsCertificate,
    /// Each class's split columns sum entrywise to its source column.
    pub column_sums_hold: bool,
    /// Each class's split columns have exactly one nonzero per row.
    pub one_nonzero_per_row: bool,
    pub retained_match: bool,
    pub min_row_weight: usize,
    pub max_row_weight: usize,
    /// `n - k + 1` of the MDS code when every check above passed and the MDS
    /// certificate is complete.
    pub certified_distance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionB {
    pub code: SystematicCode,
    pub layout: SplitLayout,
    /// `max(R)`.
    pub r: usize,
    /// `u + 1`.
    pub delta: usize,
    /// The packing has `⌈k(δ-1)/r⌉` blocks.
    pub optimal_c: bool,
    pub update_efficiency: usize,
    pub certificate: SplitCertificate,
    pub report: LocalityReport,
}

/// Splits MDS check columns along the parallel classes of `packing`.
pub fn construction_b(mds: &SystematicCode, packing: &ResolvablePacking) -> Result<ConstructionB> {
    construction_b_with(mds, packing, &SplitOptions::default())
}

pub fn construction_b_with(
    mds: &SystematicCode,
    packing: &ResolvablePacking,
    options: &SplitOptions,
) -> Result<ConstructionB> {
    let k = mds.k();
    if packing.k() != k {
        return Err(Error::GroundSetMismatch {
            packing: packing.k(),
            k,
        });
    }
    let u = packing.num_classes();
    let checks = mds.redundancy();
    if u >= checks {
        return Err(Error::TooManyClasses { classes: u, checks });
    }
    let sources = match &options.columns {
        None => (1..=u).collect::<Vec<_>>(),
        Some(cols) => {
            if cols.len() != u {
                return Err(Error::ColumnSelection(format!(
                    "{} columns for {u} classes",
                    cols.len()
                )));
            }
            if let Some(&c) = cols.iter().find(|&&c| c == 0 || c > checks) {
                return Err(Error::ColumnSelection(format!(
                    "column {c} outside 1..={checks}"
                )));
            }
            let mut seen = cols.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != u {
                return Err(Error::ColumnSelection("columns repeat".into()));
            }
            cols.clone()
        }
    };
    let mds_certificate = mds.mds_check(options.mds_effort);
    if let MdsCertificate::Failed { rows, columns } = &mds_certificate {
        return Err(Error::NotMds(format!(
            "singular minor at rows {rows:?}, columns {columns:?}"
        )));
    }

    let mut columns: Vec<Vec<Elem>> = Vec::new();
    let mut split_map = Vec::with_capacity(u);
    for (class, &src) in packing.classes().iter().zip(&sources) {
        let original = &mds.columns()[src - 1];
        let mut group = Vec::with_capacity(class.len());
        for block in class {
            let mut col = vec![0; k];
            for &l in block {
                col[l - 1] = original[l - 1];
            }
            columns.push(col);
            group.push(columns.len());
        }
        split_map.push(group);
    }
    let mut retained = Vec::new();
    for src in (1..=checks).filter(|c| !sources.contains(c)) {
        columns.push(mds.columns()[src - 1].clone());
        retained.push((src, columns.len()));
    }
    let code = SystematicCode::new(Arc::clone(mds.field()), k, columns)?;
    let layout = SplitLayout {
        source_columns: sources,
        split_map,
        retained,
    };
    let certificate = certify_split(&code, mds, &layout, mds_certificate)?;

    let r = packing.packing().max_block_size();
    let delta = u + 1;
    let report = match verify_locality(&code, r, delta)? {
        Locality::Satisfied(report) => report,
        Locality::Unsatisfied { symbol, .. } => {
            return Err(Error::SelfCheck(format!(
                "symbol {symbol} lacks repair groups"
            )))
        }
    };
    Ok(ConstructionB {
        optimal_c: packing.packing().len() == (k * u).div_ceil(r),
        update_efficiency: code.update_efficiency(),
        code,
        layout,
        r,
        delta,
        certificate,
        report,
    })
}

/// The `u = 1` case of [`construction_b`] (a Pyramid code).
pub fn pyramid(mds: &SystematicCode, partition: &ResolvablePacking) -> Result<ConstructionB> {
    if partition.num_classes() != 1 {
        return Err(Error::NotSingleClass(partition.num_classes()));
    }
    construction_b(mds, partition)
}

/// Re-derives the distance certificate of a split code from the code, its
/// source MDS code and the layout. `mds_certificate` is the already computed
/// result of [`SystematicCode::mds_check`] on `mds`.
pub fn certify_split(
    code: &SystematicCode,
    mds: &SystematicCode,
    layout: &SplitLayout,
    mds_certificate: MdsCertificate,
) -> Result<SplitCertificate> {
    let k = mds.k();
    if code.k() != k || code.field() != mds.field() {
        return Err(Error::Dimension(
            "split code and MDS code disagree on field or k".into(),
        ));
    }
    let mut referenced: Vec<usize> = layout.split_map.iter().flatten().copied().collect();
    referenced.extend(layout.retained.iter().map(|&(_, out)| out));
    referenced.sort_unstable();
    if referenced != (1..=code.redundancy()).collect::<Vec<_>>() {
        return Err(Error::Dimension(
            "layout does not cover every check column exactly once".into(),
        ));
    }
    if layout.source_columns.len() != layout.split_map.len()
        || layout
            .source_columns
            .iter()
            .chain(layout.retained.iter().map(|(src, _)| src))
            .any(|&c| c == 0 || c > mds.redundancy())
    {
        return Err(Error::Dimension(
            "layout references missing MDS columns".into(),
        ));
    }

    let f = code.field();
    let mut column_sums_hold = true;
    let mut one_nonzero_per_row = true;
    for (&src, group) in layout.source_columns.iter().zip(&layout.split_map) {
        for l in 1..=k {
            let sum = group.iter().fold(0, |acc, &j| f.add(acc, code.entry(l, j)));
            column_sums_hold &= sum == mds.entry(l, src);
            one_nonzero_per_row &= group.iter().filter(|&&j| code.entry(l, j) != 0).count() == 1;
        }
    }
    let retained_match = layout
        .retained
        .iter()
        .all(|&(src, out)| code.columns()[out - 1] == mds.columns()[src - 1]);
    let rows = code.row_weights();
    let min_row_weight = rows.iter().copied().min().unwrap_or(0);
    let max_row_weight = rows.iter().copied().max().unwrap_or(0);
    let target = mds.redundancy() + 1;
    let certified_distance = (mds_certificate.is_full()
        && column_sums_hold
        && retained_match
        && min_row_weight == target)
        .then_some(target);
    Ok(SplitCertificate {
        mds: mds_certificate,
        column_sums_hold,
        one_nonzero_per_row,
        retained_match,
        min_row_weight,
        max_row_weight,
        certified_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::fixtures::code_16_8_4;
    use crate::codes::DEFAULT_DISTANCE_BUDGET;
    use crate::designs::fixtures::{regular_8_3, resolvable_8};
    use crate::designs::DifferenceMatrix;

    fn gf(p: u64, m: u32) -> Arc<Field> {
        Arc::new(Field::new(p, m, None).unwrap())
    }

    #[test]
    fn regular_packing_reproduces_golden_code() {
        let pk = Packing::new(8, regular_8_3()).unwrap();
        let a = construction_a(&pk).unwrap();
        assert_eq!(a.code, code_16_8_4());
        assert_eq!((a.r, a.delta), (3, 4));
        assert!(a.optimal_c && a.update_optimal);
        assert_eq!(a.code.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap(), 4);
    }

    #[test]
    fn extracted_packing_regenerates_a_14_8_3_code() {
        let pk = Packing::new(
            8,
            vec![
                vec![2, 3, 8],
                vec![1, 3, 4],
                vec![2, 4, 6],
                vec![5, 7, 8],
                vec![1, 5, 6],
                vec![1, 7],
            ],
        )
        .unwrap();
        let a = construction_a(&pk).unwrap();
        assert_eq!((a.code.n(), a.r, a.delta), (14, 3, 3));
        assert_eq!(a.code.support(6), vec![1, 7]);
        assert_eq!(a.code.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap(), 3);
        assert!(a.optimal_c);
        assert!(!a.update_optimal);
    }

    #[test]
    fn single_block_gives_parity_code() {
        let pk = Packing::new(5, vec![vec![1, 2, 3, 4, 5]]).unwrap();
        let a = construction_a(&pk).unwrap();
        assert_eq!((a.code.n(), a.delta), (6, 2));
        assert_eq!(a.code.min_distance(100).unwrap(), 2);
    }

    #[test]
    fn uncovered_element_rejected() {
        let pk = Packing::new(4, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(construction_a(&pk), Err(Error::UncoveredElement(4)));
    }

    #[test]
    fn gf256_split_matches_printed_zero_pattern() {
        let mds = SystematicCode::rs_systematic(gf(2, 8), 16, 8).unwrap();
        let rp = ResolvablePacking::new(8, resolvable_8()[..2].to_vec()).unwrap();
        let b = construction_b(&mds, &rp).unwrap();
        assert_eq!((b.code.n(), b.code.k()), (20, 8));
        assert_eq!((b.r, b.delta), (3, 3));
        assert_eq!(b.update_efficiency, 9);
        assert!(b.optimal_c);
        assert_eq!(b.certificate.certified_distance, Some(9));
        assert!(b.certificate.column_sums_hold && b.certificate.one_nonzero_per_row);
        assert_eq!(b.layout.split_map, vec![vec![1, 2, 3], vec![4, 5, 6]]);
        // printed matrix: columns 9..14 supported on the blocks, 15..20 full
        let expected: [&[usize]; 6] = [
            &[2, 3, 8],
            &[4, 6, 7],
            &[1, 5],
            &[1, 3, 4],
            &[5, 7, 8],
            &[2, 6],
        ];
        for (j, supp) in expected.iter().enumerate() {
            assert_eq!(b.code.support(j + 1), supp.to_vec());
        }
        for j in 7..=12 {
            assert_eq!(b.code.support(j).len(), 8);
        }
    }

    #[test]
    fn gf8_split_is_exactly_optimal() {
        let mds = SystematicCode::rs_systematic(gf(2, 3), 8, 4).unwrap();
        let rp = DifferenceMatrix::build(2, 2, 2)
            .unwrap()
            .to_resolvable()
            .unwrap();
        let b = construction_b(&mds, &rp).unwrap();
        assert_eq!(b.code.n(), 10);
        assert_eq!(b.code.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap(), 5);
        assert_eq!(b.certificate.certified_distance, Some(5));
        assert!(b.optimal_c);
    }

    #[test]
    fn trivial_split_returns_input() {
        let mds = SystematicCode::rs_systematic(gf(2, 3), 8, 4).unwrap();
        let rp = ResolvablePacking::new(4, vec![vec![vec![1, 2, 3, 4]]]).unwrap();
        let b = pyramid(&mds, &rp).unwrap();
        assert_eq!(b.code, mds);
    }

    #[test]
    fn pyramid_cases() {
        let mds = SystematicCode::rs_systematic(gf(2, 3), 8, 4).unwrap();
        let halves = ResolvablePacking::new(4, vec![vec![vec![1, 2], vec![3, 4]]]).unwrap();
        let b = pyramid(&mds, &halves).unwrap();
        assert_eq!(b.code.n(), 9);
        assert_eq!((b.r, b.delta), (2, 2));
        assert_eq!(b.code.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap(), 5);

        let singletons =
            ResolvablePacking::new(4, vec![(1..=4).map(|i| vec![i]).collect()]).unwrap();
        let b = pyramid(&mds, &singletons).unwrap();
        assert_eq!(b.layout.split_map, vec![vec![1, 2, 3, 4]]);
        assert_eq!(b.code.column_weights()[..4], [1, 1, 1, 1]);

        let two = DifferenceMatrix::build(2, 2, 2)
            .unwrap()
            .to_resolvable()
            .unwrap();
        assert_eq!(pyramid(&mds, &two), Err(Error::NotSingleClass(2)));
    }

    #[test]
    fn split_preconditions() {
        let mds = SystematicCode::rs_systematic(gf(2, 3), 6, 4).unwrap();
        let rp = DifferenceMatrix::build(2, 2, 2)
            .unwrap()
            .to_resolvable()
            .unwrap();
        assert_eq!(
            construction_b(&mds, &rp),
            Err(Error::TooManyClasses {
                classes: 2,
                checks: 2
            })
        );
        let small = ResolvablePacking::new(3, vec![vec![vec![1, 2, 3]]]).unwrap();
        assert!(matches!(
            construction_b(&mds, &small),
            Err(Error::GroundSetMismatch { .. })
        ));
        let one = ResolvablePacking::new(8, vec![vec![(1..=8).collect()]]).unwrap();
        assert!(matches!(
            construction_b(&code_16_8_4(), &one),
            Err(Error::NotMds(_))
        ));
    }

    #[test]
    fn column_selection_changes_sources() {
        let mds = SystematicCode::rs_systematic(gf(2, 3), 8, 4).unwrap();
        let rp = DifferenceMatrix::build(2, 2, 2)
            .unwrap()
            .to_resolvable()
            .unwrap();
        let opts = SplitOptions {
            columns: Some(vec![4, 2]),
            ..SplitOptions::default()
        };
        let b = construction_b_with(&mds, &rp, &opts).unwrap();
        assert_eq!(b.layout.source_columns, vec![4, 2]);
        assert_eq!(b.layout.retained, vec![(1, 5), (3, 6)]);
        assert_eq!(b.certificate.certified_distance, Some(5));
        let bad = SplitOptions {
            columns: Some(vec![2, 2]),
            ..SplitOptions::default()
        };
        assert!(matches!(
            construction_b_with(&mds, &rp, &bad),
            Err(Error::ColumnSelection(_))
        ));
    }
}
