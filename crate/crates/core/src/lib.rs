//! Locally repairable systematic erasure codes built from combinatorial packings.
//!
//! The crate covers the whole pipeline:
//!
//! * [`gf`]: exact arithmetic in GF(p^m) for q ≤ 2^16,
//! * [`designs`]: packings, resolvable packings and difference matrices,
//! * [`codes`]: systematic codes `(I | P)`, exact minimum distance, MDS
//!   generators and local erasure repair,
//! * [`locality`]: `(r, δ)_c`-locality witnesses, Singleton-type bounds,
//!   packing extraction and optimality classification,
//! * [`constructions`]: binary codes from packings and split MDS codes from
//!   resolvable packings,
//! * [`io`]: the JSON documents shared with the command-line tool.

pub mod codes;
pub mod constructions;
pub mod designs;
pub mod error;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod locality;

pub use codes::{
    Codeword, MdsCertificate, Repair, SystematicCode, DEFAULT_DISTANCE_BUDGET, DEFAULT_MDS_EFFORT,
};
pub use constructions::{
    construction_a, construction_b, construction_b_with, pyramid, ConstructionA, ConstructionB,
    SplitCertificate, SplitLayout, SplitOptions,
};
pub use designs::{DifferenceMatrix, Group, Packing, ResolvablePacking};
pub use error::{Error, Result};
pub use gf::{Elem, Field, FieldElement};
pub use locality::{
    bound_c, bound_i, classify_optimal, extract_packing, n1_conditions, repeated_element_budget,
    verify_locality, Locality, LocalityReport, OptimalityVerdict,
};
