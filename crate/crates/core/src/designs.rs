//! Packings, resolvable packings and difference matrices.
//!
//! Ground-set elements are 1-based (`1..=k`). Block order and class order are
//! preserved exactly as given because downstream constructions assign check
//! columns in that order; elements inside a block are stored sorted.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{prime_power, Elem, Field};

/// A `(k, R, 1)` packing: every pair of distinct elements lies in at most one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    k: usize,
    blocks: Vec<Vec<usize>>,
    occurrences: Vec<usize>,
}

impl Packing {
    /// Validates `blocks` over `1..=k` and computes the occurrence profile.
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::GroundSetTooSmall { k, min: 2 });
        }
        let mut blocks = blocks;
        for (idx, block) in blocks.iter_mut().enumerate() {
            let b = idx + 1;
            if block.is_empty() {
                return Err(Error::EmptyBlock { block: b });
            }
            if let Some(&element) = block.iter().find(|&&e| e == 0 || e > k) {
                return Err(Error::ElementOutOfRange {
                    block: b,
                    element,
                    k,
                });
            }
            block.sort_unstable();
            if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedElement {
                    block: b,
                    element: w[0],
                });
            }
        }

        // owner[a * k + b] = first block (1-based) containing the pair {a, b}
        let mut owner = vec![0usize; k * k];
        let mut occurrences = vec![0; k];
        for (idx, block) in blocks.iter().enumerate() {
            for (pos, &a) in block.iter().enumerate() {
                occurrences[a - 1] += 1;
                for &b in &block[pos + 1..] {
                    let slot = &mut owner[(a - 1) * k + (b - 1)];
                    if *slot != 0 {
                        return Err(Error::RepeatedPair {
                            a,
                            b,
                            first: *slot,
                            second: idx + 1,
                        });
                    }
                    *slot = idx + 1;
                }
            }
        }
        Ok(Packing {
            k,
            blocks,
            occurrences,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The block-size set `R`.
    pub fn block_sizes(&self) -> BTreeSet<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of blocks containing each element; index `i - 1` holds `δ_i`.
    pub fn occurrences(&self) -> &[usize] {
        &self.occurrences
    }

    /// `Δ`, the smallest element occurrence.
    pub fn min_occurrence(&self) -> usize {
        self.occurrences.iter().copied().min().unwrap_or(0)
    }

    pub fn is_regular(&self, t: usize) -> bool {
        self.occurrences.iter().all(|&d| d == t)
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }
}

/// A `(k, R, 1; u)` resolvable packing: `u` parallel classes, each a partition of `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvablePacking {
    classes: Vec<Vec<Vec<usize>>>,
    packing: Packing,
}

impl ResolvablePacking {
    pub fn new(k: usize, classes: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::GroundSetTooSmall { k, min: 2 });
        }
        if classes.is_empty() {
            return Err(Error::NoClasses);
        }
        for (idx, class) in classes.iter().enumerate() {
            let mut count = vec![0usize; k + 1];
            for block in class {
                for &e in block {
                    if e == 0 || e > k {
                        return Err(Error::ElementOutOfRange {
                            block: idx + 1,
                            element: e,
                            k,
                        });
                    }
                    count[e] += 1;
                }
            }
            let missing: Vec<_> = (1..=k).filter(|&e| count[e] == 0).collect();
            let duplicated: Vec<_> = (1..=k).filter(|&e| count[e] > 1).collect();
            if !missing.is_empty() || !duplicated.is_empty() {
                return Err(Error::NotAPartition {
                    class: idx + 1,
                    missing,
                    duplicated,
                });
            }
        }
        let packing = Packing::new(k, classes.iter().flatten().cloned().collect())?;
        let mut sorted = classes;
        for block in sorted.iter_mut().flatten() {
            block.sort_unstable();
        }
        Ok(ResolvablePacking {
            classes: sorted,
            packing,
        })
    }

    pub fn k(&self) -> usize {
        self.packing.k
    }

    pub fn classes(&self) -> &[Vec<Vec<usize>>] {
        &self.classes
    }

    /// Number of parallel classes `u`.
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// The flattened packing, classes concatenated in order.
    pub fn packing(&self) -> &Packing {
        &self.packing
    }
}

/// Additive group a difference matrix lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    Cyclic(u32),
    Gf(Arc<Field>),
}

impl Group {
    /// The additive group of GF(k); `k` must be a prime power.
    pub fn gf(k: u64) -> Result<Self> {
        let (p, m) = prime_power(k).ok_or(Error::NotPrimePower(k))?;
        Ok(Group::Gf(Arc::new(Field::new(p, m, None)?)))
    }

    pub fn order(&self) -> u32 {
        match self {
            Group::Cyclic(k) => *k,
            Group::Gf(f) => f.order(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Group::Cyclic(_) => "cyclic",
            Group::Gf(_) => "gf",
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self {
            Group::Cyclic(k) => (a + b) % k,
            Group::Gf(f) => f.add(a, b),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        match self {
            Group::Cyclic(k) => (a + k - b) % k,
            Group::Gf(f) => f.sub(a, b),
        }
    }
}

/// An `r × u` matrix over a group of order `k` whose row differences are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceMatrix {
    group: Group,
    entries: Vec<Vec<Elem>>,
}

impl DifferenceMatrix {
    /// Checks shape and entry range only; call [`validate`](Self::validate) for the
    /// difference property.
    pub fn from_entries(group: Group, entries: Vec<Vec<Elem>>) -> Result<Self> {
        let cols = entries.first().map(Vec::len).unwrap_or(0);
        if entries.is_empty() || cols == 0 {
            return Err(Error::MalformedDm("empty matrix".into()));
        }
        if entries.iter().any(|row| row.len() != cols) {
            return Err(Error::MalformedDm("ragged rows".into()));
        }
        let k = group.order();
        if let Some(&x) = entries.iter().flatten().find(|&&x| x >= k) {
            return Err(Error::MalformedDm(format!(
                "entry {x} outside a group of order {k}"
            )));
        }
        Ok(DifferenceMatrix { group, entries })
    }

    /// Multiplication-table matrix `d[j][i] = a_j · b_i` over GF(k), where the
    /// `a_j` and `b_i` are the first `r` and first `u` field elements.
    pub fn build(k: u64, r: usize, u: usize) -> Result<Self> {
        let group = Group::gf(k)?;
        if r == 0 || r as u64 > k {
            return Err(Error::DmRange(format!("rows r = {r} must lie in 1..={k}")));
        }
        if u == 0 || u as u64 > k {
            return Err(Error::DmRange(format!(
                "columns u = {u} must lie in 1..={k}"
            )));
        }
        let Group::Gf(field) = &group else {
            unreachable!()
        };
        let entries = (0..r as Elem)
            .map(|a| (0..u as Elem).map(|b| field.mul(a, b)).collect())
            .collect();
        let dm = DifferenceMatrix { group, entries };
        dm.validate()?;
        Ok(dm)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entries(&self) -> &[Vec<Elem>] {
        &self.entries
    }

    /// Every row pair must have pairwise distinct differences; with `u = k`
    /// the differences must also cover the whole group.
    pub fn validate(&self) -> Result<()> {
        let k = self.group.order() as usize;
        let u = self.cols();
        for s in 0..self.rows() {
            for t in s + 1..self.rows() {
                let mut seen: Vec<Option<usize>> = vec![None; k];
                for i in 0..u {
                    let diff = self.group.sub(self.entries[s][i], self.entries[t][i]);
                    if let Some(prev) = seen[diff as usize] {
                        return Err(Error::DifferenceCollision {
                            rows: (s + 1, t + 1),
                            columns: (prev + 1, i + 1),
                            difference: diff,
                        });
                    }
                    seen[diff as usize] = Some(i);
                }
                if u == k {
                    if let Some(missing) = seen.iter().position(Option::is_none) {
                        return Err(Error::DifferenceCoverage(missing as Elem));
                    }
                }
            }
        }
        Ok(())
    }

    /// The `(rk, r, 1; u)` resolvable packing of translates `D_i + a`.
    ///
    /// Point `(j, a)` of `[r] × M` is numbered `(j - 1)·k + a + 1`; class `i`
    /// lists the translates of column `i` in encoding order of `a`.
    pub fn to_resolvable(&self) -> Result<ResolvablePacking> {
        self.validate()?;
        let k = self.group.order();
        let classes = (0..self.cols())
            .map(|i| {
                (0..k)
                    .map(|a| {
                        self.entries
                            .iter()
                            .enumerate()
                            .map(|(j, row)| j * k as usize + self.group.add(row[i], a) as usize + 1)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ResolvablePacking::new(self.rows() * k as usize, classes)
    }
}
