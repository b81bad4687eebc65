//! Information `(r, δ)_c`-locality of systematic codes.
//!
//! A check column `p_j` is *partial* when its support has at most `r`
//! elements. Information symbol `i` has `(r, δ)_c`-locality when `δ - 1`
//! partial columns contain `i` and pairwise share nothing but `i`; each such
//! column together with its check symbol is a repair group for `i`.

use serde::{Deserialize, Serialize};

use crate::codes::SystematicCode;
use crate::designs::Packing;
use crate::error::{Error, Result};

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn check_parameters(n: usize, k: usize, r: usize, delta: usize) -> Result<()> {
    if r == 0 || r > k || k >= n || delta < 2 {
        return Err(Error::LocalityParameters(format!(
            "need 1 <= r <= k < n and delta >= 2, got n = {n}, k = {k}, r = {r}, delta = {delta}"
        )));
    }
    Ok(())
}

/// Singleton-type bound for `(r, δ)_i`-locality:
/// `n - k + 1 - (⌈k/r⌉ - 1)(δ - 1)`.
pub fn bound_i(n: usize, k: usize, r: usize, delta: usize) -> Result<i64> {
    check_parameters(n, k, r, delta)?;
    Ok((n - k + 1) as i64 - ((ceil_div(k, r) - 1) * (delta - 1)) as i64)
}

/// Bound for `(r, δ)_c`-locality with one check symbol per repair group:
/// `n - k - ⌈k(δ-1)/r⌉ + δ`.
pub fn bound_c(n: usize, k: usize, r: usize, delta: usize) -> Result<i64> {
    check_parameters(n, k, r, delta)?;
    Ok((n - k + delta) as i64 - ceil_div(k * (delta - 1), r) as i64)
}

/// Conditions under which an optimal code must have exactly
/// `⌈k(δ-1)/r⌉` partial check columns.
pub fn n1_conditions(k: usize, r: usize, delta: usize) -> bool {
    let kappa = k.checked_sub(r);
    match delta {
        d if d >= 4 => true,
        3 => {
            k >= 2 * r
                || kappa
                    .is_some_and(|kp| (r <= 3 * kp && 2 * kp < r) || (2 * r <= 3 * kp && kp < r))
        }
        2 => k >= 2 * r || kappa.is_some_and(|kp| r <= 2 * kp && kp < r),
        _ => false,
    }
}

/// `⌈k(δ-1)/r⌉·r - k(δ-1)`: how many elements of an optimal code may occur in
/// more than `δ - 1` partial supports when [`n1_conditions`] holds.
pub fn repeated_element_budget(k: usize, r: usize, delta: usize) -> usize {
    let total = k * (delta - 1);
    ceil_div(total, r) * r - total
}

/// Witness for information `(r, δ)_c`-locality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
    /// For information symbol `i` (index `i - 1`), the `δ - 1` check columns (1-based)
    /// of its repair groups.
    pub repair_groups: Vec<Vec<usize>>,
    /// Check columns with weight at most `r`.
    #[serde(rename = "partial_indices")]
    pub partial_columns: Vec<usize>,
    pub n1: usize,
    pub n2: usize,
    /// `δ_i`: occurrences of each information symbol in partial supports.
    pub occurrences: Vec<usize>,
    /// `Δ = min δ_i`.
    #[serde(rename = "Delta")]
    pub min_occurrence: usize,
    pub bound_c: i64,
    pub bound_i: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locality {
    Satisfied(LocalityReport),
    /// `symbol` has only `groups_found` compatible repair groups.
    Unsatisfied {
        symbol: usize,
        groups_found: usize,
    },
}

impl Locality {
    pub fn report(&self) -> Option<&LocalityReport> {
        match self {
            Locality::Satisfied(r) => Some(r),
            Locality::Unsatisfied { .. } => None,
        }
    }

    pub fn into_report(self) -> Option<LocalityReport> {
        match self {
            Locality::Satisfied(r) => Some(r),
            Locality::Unsatisfied { .. } => None,
        }
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn disjoint(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }

    fn union_with(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
    }

    fn remove_all(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= !b);
    }
}

/// Backtracking over candidates in order; returns the first compatible
/// selection of `need` columns.
fn select_groups(
    masks: &[Bits],
    need: usize,
    start: usize,
    used: &mut Bits,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == need {
        return true;
    }
    if masks.len() - start < need - chosen.len() {
        return false;
    }
    for c in start..masks.len() {
        if !masks[c].disjoint(used) {
            continue;
        }
        used.union_with(&masks[c]);
        chosen.push(c);
        if select_groups(masks, need, c + 1, used, chosen) {
            return true;
        }
        chosen.pop();
        used.remove_all(&masks[c]);
    }
    false
}

/// Searches for `δ - 1` repair groups per information symbol.
///
/// Candidates for symbol `i` are the partial columns containing `i`, tried in
/// order of ascending weight then index; the first compatible selection wins.
pub fn verify_locality(code: &SystematicCode, r: usize, delta: usize) -> Result<Locality> {
    let (n, k) = (code.n(), code.k());
    check_parameters(n, k, r, delta)?;
    let weights = code.column_weights();
    let partial: Vec<usize> = (1..=code.redundancy())
        .filter(|&j| weights[j - 1] <= r)
        .collect();
    let supports: Vec<Vec<usize>> = partial.iter().map(|&j| code.support(j)).collect();

    let mut occurrences = vec![0usize; k];
    for &i in supports.iter().flatten() {
        occurrences[i - 1] += 1;
    }

    let mut repair_groups = Vec::with_capacity(k);
    for i in 1..=k {
        let mut candidates: Vec<(usize, usize)> = partial
            .iter()
            .zip(&supports)
            .filter(|(_, s)| s.contains(&i))
            .map(|(&j, s)| (s.len(), j))
            .collect();
        candidates.sort_unstable();
        let masks: Vec<Bits> = candidates
            .iter()
            .map(|&(_, j)| {
                let mut b = Bits::new(k + 1);
                code.support(j)
                    .into_iter()
                    .filter(|&l| l != i)
                    .for_each(|l| b.set(l));
                b
            })
            .collect();
        let mut chosen = Vec::new();
        if !select_groups(&masks, delta - 1, 0, &mut Bits::new(k + 1), &mut chosen) {
            let groups_found = max_compatible(&masks);
            return Ok(Locality::Unsatisfied {
                symbol: i,
                groups_found,
            });
        }
        repair_groups.push(chosen.into_iter().map(|c| candidates[c].1).collect());
    }

    let n1 = partial.len();
    Ok(Locality::Satisfied(LocalityReport {
        n,
        k,
        r,
        delta,
        repair_groups,
        n1,
        n2: code.redundancy() - n1,
        partial_columns: partial,
        min_occurrence: occurrences.iter().copied().min().unwrap_or(0),
        occurrences,
        bound_c: bound_c(n, k, r, delta)?,
        bound_i: bound_i(n, k, r, delta)?,
    }))
}

fn max_compatible(masks: &[Bits]) -> usize {
    let k = masks.first().map_or(0, |m| m.0.len() * 64);
    (0..=masks.len())
        .rev()
        .find(|&need| select_groups(masks, need, 0, &mut Bits::new(k), &mut Vec::new()))
        .unwrap_or(0)
}

/// Largest `δ` for which the code has `(r, δ)_c`-locality, if any `δ ≥ 2` works.
pub fn max_delta(code: &SystematicCode, r: usize) -> Result<Option<usize>> {
    let mut best = None;
    for delta in 2..=code.redundancy() + 1 {
        match verify_locality(code, r, delta)? {
            Locality::Satisfied(_) => best = Some(delta),
            Locality::Unsatisfied { .. } => break,
        }
    }
    Ok(best)
}

/// One element removed from a partial support while extracting a packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deletion {
    /// 1-based check column whose support lost the element.
    pub column: usize,
    pub element: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub packing: Packing,
    pub deletions: Vec<Deletion>,
}

/// Turns the partial supports into a packing by deleting elements from
/// repeated pairs.
///
/// Pairs `(i1, i2)` are scanned in lexicographic order. When a pair lies in
/// several blocks, the lowest-index block keeps it; every other block loses
/// whichever of `i1`, `i2` currently occurs more often (the larger element on
/// ties). Block `j` of the result comes from the `j`-th partial column.
pub fn extract_packing(code: &SystematicCode, report: &LocalityReport) -> Result<Extraction> {
    let k = code.k();
    if report.k != k || report.n != code.n() {
        return Err(Error::ReportMismatch(
            "report describes a different code".into(),
        ));
    }
    let mut blocks: Vec<Vec<usize>> = report
        .partial_columns
        .iter()
        .map(|&j| code.support(j))
        .collect();
    let mut occ = vec![0usize; k + 1];
    for &i in blocks.iter().flatten() {
        occ[i] += 1;
    }
    let mut deletions = Vec::new();
    for i1 in 1..=k {
        for i2 in i1 + 1..=k {
            let containing: Vec<usize> = (0..blocks.len())
                .filter(|&b| blocks[b].contains(&i1) && blocks[b].contains(&i2))
                .collect();
            for &b in containing.iter().skip(1) {
                let victim = if occ[i1] > occ[i2] { i1 } else { i2 };
                blocks[b].retain(|&e| e != victim);
                occ[victim] -= 1;
                deletions.push(Deletion {
                    column: report.partial_columns[b],
                    element: victim,
                });
            }
        }
    }
    let packing = Packing::new(k, blocks)?;
    if packing.max_block_size() > report.r {
        return Err(Error::SelfCheck(format!(
            "block larger than r = {}",
            report.r
        )));
    }
    if packing.min_occurrence() < report.delta - 1 {
        return Err(Error::SelfCheck(format!(
            "an element occurs in {} < delta - 1 blocks",
            packing.min_occurrence()
        )));
    }
    Ok(Extraction { packing, deletions })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalityVerdict {
    pub d: usize,
    pub bound_c: i64,
    pub bound_i: i64,
    /// `d` meets the `(r, δ)_c` bound with equality.
    pub optimal_c: bool,
    pub optimal_i: bool,
    pub update_efficiency: usize,
    /// Update-efficiency equals `d`.
    pub update_optimal: bool,
    /// `⌈k(δ-1)/r⌉`.
    pub n1_ceiling: usize,
    pub n1_matches_ceiling: bool,
    pub n1_conditions: bool,
    /// False only when the code is optimal under [`n1_conditions`] yet `n1`
    /// differs from the ceiling, which would contradict the characterization.
    pub consistent: bool,
}

pub fn classify_optimal(
    code: &SystematicCode,
    report: &LocalityReport,
    d: Option<usize>,
) -> Result<OptimalityVerdict> {
    let d = d.ok_or(Error::MissingDistance)?;
    let (k, r, delta) = (report.k, report.r, report.delta);
    let optimal_c = d as i64 == report.bound_c;
    let update_efficiency = code.update_efficiency();
    let n1_ceiling = ceil_div(k * (delta - 1), r);
    let n1_matches_ceiling = report.n1 == n1_ceiling;
    let conditions = n1_conditions(k, r, delta);
    Ok(OptimalityVerdict {
        d,
        bound_c: report.bound_c,
        bound_i: report.bound_i,
        optimal_c,
        optimal_i: d as i64 == report.bound_i,
        update_efficiency,
        update_optimal: update_efficiency == d,
        n1_ceiling,
        n1_matches_ceiling,
        n1_conditions: conditions,
        consistent: !(conditions && optimal_c) || n1_matches_ceiling,
    })
}
