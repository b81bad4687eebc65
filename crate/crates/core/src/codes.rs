//! Systematic linear codes `G = (I_k | P)` over a finite field.

use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::locality::LocalityReport;

/// Default cap on the number of messages [`SystematicCode::min_distance`] enumerates.
pub const DEFAULT_DISTANCE_BUDGET: u64 = 1 << 24;

/// Default cap on the number of square minors [`SystematicCode::mds_check`] evaluates.
pub const DEFAULT_MDS_EFFORT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicCode {
    field: Arc<Field>,
    k: usize,
    columns: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codeword {
    pub symbols: Vec<Elem>,
}

impl Codeword {
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&x| x != 0).count()
    }
}

/// Outcome of [`SystematicCode::mds_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "level", rename_all = "snake_case")]
pub enum MdsCertificate {
    /// Every square submatrix of `P` is nonsingular.
    Full { minors: u64 },
    /// Only 1×1 and 2×2 minors were checked; the full enumeration exceeded the effort.
    Necessary { minors: u64, total: u64 },
    /// A singular square submatrix of `P` (1-based rows and check columns).
    Failed {
        rows: Vec<usize>,
        columns: Vec<usize>,
    },
}

impl MdsCertificate {
    pub fn passed(&self) -> bool {
        !matches!(self, MdsCertificate::Failed { .. })
    }

    pub fn is_full(&self) -> bool {
        matches!(self, MdsCertificate::Full { .. })
    }
}

/// A repaired codeword plus the check column that served each erased information symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub codeword: Codeword,
    /// `(symbol, check column)` pairs, both 1-based.
    pub served_by: Vec<(usize, usize)>,
}

impl SystematicCode {
    /// Builds the code from its check columns `p_1..p_{n-k}`, each of length `k`.
    pub fn new(field: Arc<Field>, k: usize, columns: Vec<Vec<Elem>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Dimension("dimension k must be at least 1".into()));
        }
        if columns.is_empty() {
            return Err(Error::Dimension(
                "need at least one check column (n > k)".into(),
            ));
        }
        if let Some(j) = columns.iter().position(|c| c.len() != k) {
            return Err(Error::Dimension(format!(
                "check column {} has length {}, expected {k}",
                j + 1,
                columns[j].len()
            )));
        }
        if let Some(&value) = columns.iter().flatten().find(|&&x| !field.contains(x)) {
            return Err(Error::NotAnElement {
                value: value as u64,
                q: field.order(),
            });
        }
        Ok(SystematicCode { field, k, columns })
    }

    /// Builds the code from `P` given row by row (`k` rows of length `n - k`).
    pub fn from_check_rows(field: Arc<Field>, rows: &[Vec<Elem>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Dimension("ragged check matrix".into()));
        }
        let columns = (0..width)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::new(field, rows.len(), columns)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.k + self.columns.len()
    }

    pub fn redundancy(&self) -> usize {
        self.columns.len()
    }

    /// Check columns `p_1..p_{n-k}`.
    pub fn columns(&self) -> &[Vec<Elem>] {
        &self.columns
    }

    /// Entry `P[i][j]` for 1-based information symbol `i` and check column `j`.
    pub fn entry(&self, i: usize, j: usize) -> Elem {
        self.columns[j - 1][i - 1]
    }

    /// 1-based support of check column `j`.
    pub fn support(&self, j: usize) -> Vec<usize> {
        self.columns[j - 1]
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Hamming weights `w_j` of the check columns.
    pub fn column_weights(&self) -> Vec<usize> {
        self.columns
            .iter()
            .map(|c| c.iter().filter(|&&x| x != 0).count())
            .collect()
    }

    /// Hamming weights of the rows of `G`, identity part included.
    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.k)
            .map(|i| 1 + self.columns.iter().filter(|c| c[i] != 0).count())
            .collect()
    }

    /// `P` row by row.
    pub fn check_rows(&self) -> Matrix {
        (0..self.k)
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect()
    }

    pub fn generator_matrix(&self) -> Matrix {
        self.check_rows()
            .into_iter()
            .enumerate()
            .map(|(i, prow)| {
                let mut row: Vec<Elem> = (0..self.k).map(|j| Elem::from(i == j)).collect();
                row.extend(prow);
                row
            })
            .collect()
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Codeword> {
        if message.len() != self.k {
            return Err(Error::Dimension(format!(
                "message has length {}, expected {}",
                message.len(),
                self.k
            )));
        }
        if let Some(&value) = message.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::NotAnElement {
                value: value as u64,
                q: self.field.order(),
            });
        }
        let mut symbols = message.to_vec();
        symbols.extend(self.columns.iter().map(|col| {
            col.iter()
                .zip(message)
                .fold(0, |acc, (&p, &m)| self.field.mul_add(acc, m, p))
        }));
        Ok(Codeword { symbols })
    }

    /// Update-efficiency: the largest row weight of `G`.
    pub fn update_efficiency(&self) -> usize {
        self.row_weights().into_iter().max().unwrap_or(0)
    }

    /// Number of nonzero messages, `q^k - 1`, saturating.
    pub fn message_count(&self) -> u128 {
        (self.field.order() as u128)
            .checked_pow(self.k as u32)
            .map_or(u128::MAX, |c| c - 1)
    }

    /// Exact minimum distance by enumerating every nonzero message.
    ///
    /// Refuses with [`Error::BudgetExceeded`] when `q^k - 1 > budget`.
    pub fn min_distance(&self, budget: u64) -> Result<usize> {
        let needed = self.message_count();
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let f = &*self.field;
        let q = f.order();
        let rows = self.check_rows();
        let mut message = vec![0 as Elem; self.k];
        let mut checks = vec![0 as Elem; self.redundancy()];
        let mut message_weight = 0usize;
        let mut best = usize::MAX;
        // odometer over messages in base q; each step updates the checks incrementally
        'outer: loop {
            let mut i = 0;
            loop {
                if i == self.k {
                    break 'outer;
                }
                let old = message[i];
                let new = if old + 1 == q { 0 } else { old + 1 };
                let delta = f.sub(new, old);
                for (c, &p) in checks.iter_mut().zip(&rows[i]) {
                    *c = f.mul_add(*c, delta, p);
                }
                if old == 0 {
                    message_weight += 1;
                } else if new == 0 {
                    message_weight -= 1;
                }
                message[i] = new;
                if new != 0 {
                    break;
                }
                i += 1;
            }
            let weight = message_weight + checks.iter().filter(|&&c| c != 0).count();
            best = best.min(weight);
        }
        Ok(best)
    }

    /// Systematic MDS generator from a Vandermonde matrix.
    ///
    /// Evaluation points, in column order: `β^0, β^1, …` (up to `q - 1` of
    /// them), then `0` once `n ≥ q`, then the point at infinity (column
    /// `e_k`) when `n = q + 1`. The Vandermonde rows are `x^0..x^{k-1}`; the
    /// result is `V_k^{-1} V` where `V_k` is the first `k` columns.
    pub fn rs_systematic(field: Arc<Field>, n: usize, k: usize) -> Result<Self> {
        let q = field.order() as usize;
        if k == 0 || n <= k {
            return Err(Error::CodeParameters(format!(
                "need 1 <= k < n, got n = {n}, k = {k}"
            )));
        }
        if n > q + 1 {
            return Err(Error::CodeParameters(format!(
                "length {n} exceeds q + 1 = {} for an MDS code",
                q + 1
            )));
        }
        let beta = field.primitive_element();
        let mut columns: Vec<Vec<Elem>> = Vec::with_capacity(n);
        for idx in 0..n {
            let col = if idx < q - 1 {
                let x = field.pow(beta, idx as u64);
                (0..k).map(|e| field.pow(x, e as u64)).collect()
            } else if idx == q - 1 {
                (0..k).map(|e| Elem::from(e == 0)).collect()
            } else {
                (0..k).map(|e| Elem::from(e == k - 1)).collect()
            };
            columns.push(col);
        }
        let vander: Matrix = (0..k)
            .map(|r| columns.iter().map(|c| c[r]).collect())
            .collect();
        let head: Matrix = vander.iter().map(|row| row[..k].to_vec()).collect();
        let generator = linalg::mul(&field, &linalg::inverse(&field, &head)?, &vander)?;
        let check_rows: Matrix = generator.into_iter().map(|row| row[k..].to_vec()).collect();
        Self::from_check_rows(field, &check_rows)
    }

    /// Checks that every square submatrix of `P` is nonsingular, which is
    /// equivalent to the code being MDS.
    ///
    /// 1×1 and 2×2 minors are always checked. Larger minors are enumerated
    /// only when the total number of square minors is at most `effort`.
    pub fn mds_check(&self, effort: u64) -> MdsCertificate {
        let f = &*self.field;
        let rows = self.check_rows();
        let (k, r) = (self.k, self.redundancy());
        let mut checked = 0u64;

        for (i, row) in rows.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                checked += 1;
                if entry == 0 {
                    return MdsCertificate::Failed {
                        rows: vec![i + 1],
                        columns: vec![j + 1],
                    };
                }
            }
        }
        for (i1, i2) in (0..k).tuple_combinations() {
            for (j1, j2) in (0..r).tuple_combinations() {
                checked += 1;
                let det = f.sub(
                    f.mul(rows[i1][j1], rows[i2][j2]),
                    f.mul(rows[i1][j2], rows[i2][j1]),
                );
                if det == 0 {
                    return MdsCertificate::Failed {
                        rows: vec![i1 + 1, i2 + 1],
                        columns: vec![j1 + 1, j2 + 1],
                    };
                }
            }
        }

        let total: u128 = (1..=k.min(r))
            .map(|s| binomial(k, s) * binomial(r, s))
            .sum();
        if total > effort as u128 {
            let total = u64::try_from(total).unwrap_or(u64::MAX);
            return MdsCertificate::Necessary {
                minors: checked,
                total,
            };
        }
        for s in 3..=k.min(r) {
            for rs in (0..k).combinations(s) {
                for cs in (0..r).combinations(s) {
                    checked += 1;
                    let minor: Matrix = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| rows[i][j]).collect())
                        .collect();
                    if !linalg::is_nonsingular(f, &minor) {
                        return MdsCertificate::Failed {
                            rows: rs.iter().map(|i| i + 1).collect(),
                            columns: cs.iter().map(|j| j + 1).collect(),
                        };
                    }
                }
            }
        }
        MdsCertificate::Full { minors: checked }
    }

    /// Recovers a codeword with at most `δ - 1` erased positions (1-based).
    ///
    /// Each erased information symbol is rebuilt from the first of its repair
    /// groups in `report` that touches no erased position; erased check
    /// symbols are then recomputed from the information symbols. Values at
    /// erased positions of `word` are ignored.
    pub fn erase_and_repair(
        &self,
        word: &Codeword,
        erased: &[usize],
        report: &LocalityReport,
    ) -> Result<Repair> {
        let n = self.n();
        if word.symbols.len() != n {
            return Err(Error::Dimension(format!(
                "codeword has length {}, expected {n}",
                word.symbols.len()
            )));
        }
        self.check_report(report)?;
        let mut is_erased = vec![false; n + 1];
        for &pos in erased {
            if pos == 0 || pos > n {
                return Err(Error::ErasureOutOfRange(pos));
            }
            is_erased[pos] = true;
        }
        let count = is_erased.iter().filter(|&&e| e).count();
        if count > report.delta - 1 {
            return Err(Error::TooManyErasures {
                erased: count,
                limit: report.delta - 1,
            });
        }

        let f = &*self.field;
        let mut symbols = word.symbols.clone();
        let mut served_by = Vec::new();
        for i in (1..=self.k).filter(|&i| is_erased[i]) {
            let column = report.repair_groups[i - 1]
                .iter()
                .copied()
                .find(|&j| {
                    !is_erased[self.k + j]
                        && self.support(j).iter().all(|&l| l == i || !is_erased[l])
                })
                .ok_or(Error::NoRepairGroup(i))?;
            // c_{k+j} = Σ_l P[l][j] c_l, solved for c_i
            let mut acc = word.symbols[self.k + column - 1];
            for l in self.support(column).into_iter().filter(|&l| l != i) {
                acc = f.sub(acc, f.mul(self.entry(l, column), word.symbols[l - 1]));
            }
            symbols[i - 1] = f.div(acc, self.entry(i, column))?;
            served_by.push((i, column));
        }
        let codeword = self.encode(&symbols[..self.k])?;
        Ok(Repair {
            codeword,
            served_by,
        })
    }

    fn check_report(&self, report: &LocalityReport) -> Result<()> {
        if report.k != self.k || report.n != self.n() {
            return Err(Error::ReportMismatch(format!(
                "report is for [{}, {}], code is [{}, {}]",
                report.n,
                report.k,
                self.n(),
                self.k
            )));
        }
        if report.delta < 2 || report.repair_groups.len() != self.k {
            return Err(Error::ReportMismatch(
                "repair groups do not cover every information symbol".into(),
            ));
        }
        for (idx, groups) in report.repair_groups.iter().enumerate() {
            let i = idx + 1;
            if groups.len() != report.delta - 1 {
                return Err(Error::ReportMismatch(format!(
                    "symbol {i} has {} groups",
                    groups.len()
                )));
            }
            let mut used = vec![false; self.k + 1];
            for &j in groups {
                if j == 0 || j > self.redundancy() {
                    return Err(Error::ReportMismatch(format!(
                        "check column {j} does not exist"
                    )));
                }
                let supp = self.support(j);
                if !supp.contains(&i) || supp.len() > report.r {
                    return Err(Error::ReportMismatch(format!(
                        "column {j} is not a repair group of {i}"
                    )));
                }
                for l in supp.into_iter().filter(|&l| l != i) {
                    if std::mem::replace(&mut used[l], true) {
                        return Err(Error::ReportMismatch(format!(
                            "groups of symbol {i} overlap at {l}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    /// Independent distance oracle: weight of every `mG` computed from scratch.
    fn brute_distance(code: &SystematicCode) -> usize {
        let f = code.field();
        let q = f.order() as usize;
        let g = code.generator_matrix();
        let total = q.pow(code.k() as u32);
        (1..total)
            .map(|mut idx| {
                let msg: Vec<Elem> = (0..code.k())
                    .map(|_| {
                        let d = (idx % q) as Elem;
                        idx /= q;
                        d
                    })
                    .collect();
                (0..code.n())
                    .filter(|&c| {
                        msg.iter()
                            .zip(&g)
                            .fold(0, |acc, (&m, row)| f.mul_add(acc, m, row[c]))
                            != 0
                    })
                    .count()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn example_codes_have_expected_parameters() {
        let c1 = code_16_8_4();
        assert_eq!((c1.n(), c1.k()), (16, 8));
        assert_eq!(c1.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap(), 4);
        assert_eq!(c1.update_efficiency(), 4);
        assert_eq!(c1.support(1), vec![2, 3, 8]);

        let c3 = code_14_8_3();
        assert_eq!((c3.n(), c3.k()), (14, 8));
        assert_eq!(c3.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap(), 3);
        assert_eq!(c3.support(2), vec![1, 3, 4]);

        let rep = repetition();
        assert_eq!(rep.min_distance(10).unwrap(), 2);
        assert_eq!(rep.update_efficiency(), 2);
    }

    #[test]
    fn dimension_errors() {
        let f = Arc::new(Field::binary());
        assert!(SystematicCode::new(f.clone(), 2, vec![]).is_err());
        assert!(SystematicCode::new(f.clone(), 2, vec![vec![1]]).is_err());
        assert!(matches!(
            SystematicCode::new(f.clone(), 1, vec![vec![2]]),
            Err(Error::NotAnElement { value: 2, .. })
        ));
        let code = code_16_8_4();
        assert!(code.encode(&[1, 0]).is_err());
        assert!(code.encode(&[2, 0, 0, 0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn encode_unit_vectors_gives_rows() {
        let code = code_16_8_4();
        assert_eq!(code.encode(&[0; 8]).unwrap().weight(), 0);
        let g = code.generator_matrix();
        for i in 0..8 {
            let mut e = vec![0; 8];
            e[i] = 1;
            let cw = code.encode(&e).unwrap();
            assert_eq!(cw.symbols, g[i]);
            assert_eq!(cw.weight(), code.row_weights()[i]);
        }
        let e1 = code.encode(&[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let set: Vec<usize> = (9..=16).filter(|&c| e1.symbols[c - 1] == 1).collect();
        assert_eq!(set, vec![10, 15, 16]);
    }

    #[test]
    fn budget_is_enforced() {
        let code = code_16_8_4();
        assert_eq!(
            code.min_distance(100),
            Err(Error::BudgetExceeded {
                needed: 255,
                budget: 100
            })
        );
    }

    #[test]
    fn rs_small_fields_match_oracle() {
        let gf8 = Arc::new(Field::new(2, 3, None).unwrap());
        let rs = SystematicCode::rs_systematic(gf8, 8, 4).unwrap();
        assert_eq!(brute_distance(&rs), 5);
        assert_eq!(rs.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap(), 5);
        assert!(rs.mds_check(DEFAULT_MDS_EFFORT).is_full());

        let parity = SystematicCode::rs_systematic(Arc::new(Field::binary()), 3, 2).unwrap();
        assert_eq!(parity.columns(), &[vec![1, 1]]);
        assert_eq!(parity.min_distance(10).unwrap(), 2);

        // n = q + 1 uses the point at infinity
        let gf5 = Arc::new(Field::new(5, 1, None).unwrap());
        let long = SystematicCode::rs_systematic(gf5, 6, 3).unwrap();
        assert_eq!(brute_distance(&long), 4);
        assert!(long.mds_check(DEFAULT_MDS_EFFORT).is_full());
    }

    #[test]
    fn rs_gf256_16_8_is_fully_certified() {
        let f = Arc::new(Field::new(2, 8, None).unwrap());
        let rs = SystematicCode::rs_systematic(f, 16, 8).unwrap();
        assert_eq!(rs.column_weights(), vec![8; 8]);
        assert_eq!(rs.row_weights(), vec![9; 8]);
        assert_eq!(
            rs.mds_check(DEFAULT_MDS_EFFORT),
            MdsCertificate::Full { minors: 12869 }
        );
        assert!(matches!(
            rs.mds_check(1000),
            MdsCertificate::Necessary { total: 12869, .. }
        ));
    }

    #[test]
    fn rs_parameter_errors() {
        let gf8 = Arc::new(Field::new(2, 3, None).unwrap());
        assert!(SystematicCode::rs_systematic(gf8.clone(), 10, 4).is_err());
        assert!(SystematicCode::rs_systematic(gf8, 4, 4).is_err());
    }

    #[test]
    fn mds_check_witnesses() {
        let cert = code_16_8_4().mds_check(DEFAULT_MDS_EFFORT);
        assert_eq!(
            cert,
            MdsCertificate::Failed {
                rows: vec![1],
                columns: vec![1]
            }
        );

        // all entries nonzero but a 2x2 minor vanishes
        let f = Arc::new(Field::new(5, 1, None).unwrap());
        let code = SystematicCode::from_check_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(
            code.mds_check(DEFAULT_MDS_EFFORT),
            MdsCertificate::Failed {
                rows: vec![1, 2],
                columns: vec![1, 2]
            }
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(3, 5), 0);
    }

    proptest! {
        #[test]
        fn encode_is_linear(a in prop::collection::vec(0u32..8, 4), b in prop::collection::vec(0u32..8, 4)) {
            let f = Arc::new(Field::new(2, 3, None).unwrap());
            let code = SystematicCode::rs_systematic(f.clone(), 7, 4).unwrap();
            let sum: Vec<Elem> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect();
            let ca = code.encode(&a).unwrap();
            let cb = code.encode(&b).unwrap();
            let cs = code.encode(&sum).unwrap();
            let added: Vec<Elem> = ca.symbols.iter().zip(&cb.symbols).map(|(&x, &y)| f.add(x, y)).collect();
            prop_assert_eq!(cs.symbols, added);
        }

        #[test]
        fn sampled_weights_bound_distance(msg in prop::collection::vec(0u32..2, 8)) {
            let code = code_14_8_3();
            let d = code.min_distance(DEFAULT_DISTANCE_BUDGET).unwrap();
            let w = code.encode(&msg).unwrap().weight();
            prop_assert!(w == 0 || d <= w);
            prop_assert!(code.update_efficiency() >= d);
            prop_assert!(code.row_weights().iter().all(|&rw| rw >= d));
        }
    }
}
