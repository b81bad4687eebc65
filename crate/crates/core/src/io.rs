//! JSON documents for fields, packings, difference matrices, codes and codewords.
//!
//! All elements and field values are plain integers; packings use 1-based
//! elements; `p_columns` lists the check columns of `P`, each of length `k`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codes::SystematicCode;
use crate::constructions::{ConstructionA, ConstructionB, SplitCertificate, SplitLayout};
use crate::designs::{DifferenceMatrix, Group, Packing, ResolvablePacking};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
}

impl FieldDoc {
    pub fn to_field(&self) -> Result<Arc<Field>> {
        Ok(Arc::new(Field::new(self.p, self.m, Some(self.modulus))?))
    }
}

impl From<&Field> for FieldDoc {
    fn from(f: &Field) -> Self {
        FieldDoc {
            p: f.characteristic() as u64,
            m: f.degree(),
            modulus: f.modulus(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingDoc {
    pub k: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl PackingDoc {
    pub fn to_packing(&self) -> Result<Packing> {
        Packing::new(self.k, self.blocks.clone())
    }
}

impl From<&Packing> for PackingDoc {
    fn from(p: &Packing) -> Self {
        PackingDoc {
            k: p.k(),
            blocks: p.blocks().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvableDoc {
    pub k: usize,
    pub classes: Vec<Vec<Vec<usize>>>,
}

impl ResolvableDoc {
    pub fn to_resolvable(&self) -> Result<ResolvablePacking> {
        ResolvablePacking::new(self.k, self.classes.clone())
    }
}

impl From<&ResolvablePacking> for ResolvableDoc {
    fn from(rp: &ResolvablePacking) -> Self {
        ResolvableDoc {
            k: rp.k(),
            classes: rp.classes().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmDoc {
    pub k: u32,
    /// `"gf"` for the additive group of GF(k), `"cyclic"` for Z_k.
    pub group: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Elem>>,
}

impl DmDoc {
    /// Parses the matrix; the difference property is not checked here.
    pub fn to_dm(&self) -> Result<DifferenceMatrix> {
        let group = match self.group.as_str() {
            "gf" => Group::gf(self.k as u64)?,
            "cyclic" if self.k >= 1 => Group::Cyclic(self.k),
            other => return Err(Error::Document(format!("unknown group kind {other:?}"))),
        };
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Document("entries do not match rows x cols".into()));
        }
        DifferenceMatrix::from_entries(group, self.entries.clone())
    }
}

impl From<&DifferenceMatrix> for DmDoc {
    fn from(dm: &DifferenceMatrix) -> Self {
        DmDoc {
            k: dm.group().order(),
            group: dm.group().kind().to_string(),
            rows: dm.rows(),
            cols: dm.cols(),
            entries: dm.entries().to_vec(),
        }
    }
}

/// How a code file was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Provenance {
    A {
        packing: PackingDoc,
    },
    B {
        mds: Box<CodeDoc>,
        resolvable: ResolvableDoc,
        #[serde(flatten)]
        layout: SplitLayout,
        certificate: SplitCertificate,
    },
    Rs {
        n: usize,
        k: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub field: FieldDoc,
    pub k: usize,
    pub n: usize,
    pub p_columns: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl CodeDoc {
    pub fn to_code(&self) -> Result<SystematicCode> {
        if self.n != self.k + self.p_columns.len() {
            return Err(Error::Document(format!(
                "n = {} but k + {} check columns = {}",
                self.n,
                self.p_columns.len(),
                self.k + self.p_columns.len()
            )));
        }
        SystematicCode::new(self.field.to_field()?, self.k, self.p_columns.clone())
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }
}

impl From<&SystematicCode> for CodeDoc {
    fn from(code: &SystematicCode) -> Self {
        CodeDoc {
            field: FieldDoc::from(&**code.field()),
            k: code.k(),
            n: code.n(),
            p_columns: code.columns().to_vec(),
            provenance: None,
        }
    }
}

impl From<&ConstructionA> for CodeDoc {
    fn from(a: &ConstructionA) -> Self {
        CodeDoc::from(&a.code).with_provenance(Provenance::A {
            packing: PackingDoc::from(&a.packing),
        })
    }
}

impl CodeDoc {
    pub fn from_construction_b(
        b: &ConstructionB,
        mds: &SystematicCode,
        packing: &ResolvablePacking,
    ) -> Self {
        CodeDoc::from(&b.code).with_provenance(Provenance::B {
            mds: Box::new(CodeDoc::from(mds)),
            resolvable: ResolvableDoc::from(packing),
            layout: b.layout.clone(),
            certificate: b.certificate.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordDoc {
    pub symbols: Vec<Elem>,
    #[serde(default)]
    pub erased: Vec<usize>,
}
