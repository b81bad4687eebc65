use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use lrc_core::constructions::certify_split;
use lrc_core::io::{CodeDoc, CodewordDoc, DmDoc, PackingDoc, Provenance, ResolvableDoc};
use lrc_core::locality::extract_packing;
use lrc_core::{
    classify_optimal, construction_a, construction_b_with, verify_locality, Codeword,
    DifferenceMatrix, Elem, Field, Locality, LocalityReport, SplitOptions, SystematicCode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// JSON printed on stdout; `passed` selects exit status 0 or 1.
pub struct Report {
    pub doc: Value,
    pub passed: bool,
}

impl Report {
    fn ok(doc: Value) -> Self {
        Report { doc, passed: true }
    }
}

pub enum MdsSource {
    File(PathBuf),
    Rs {
        p: u64,
        m: u32,
        modulus: Option<u64>,
        n: usize,
        k: usize,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes through a temporary file in the target directory, so a failed run
/// never leaves a partial file behind.
fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a file in {}", dir.display()))?;
    serde_json::to_writer_pretty(&mut tmp, value)?;
    tmp.write_all(b"\n")?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn field(p: u64, m: u32, modulus: Option<u64>) -> Result<Arc<Field>> {
    Ok(Arc::new(Field::new(p, m, modulus)?))
}

pub fn build_dm(
    k: u64,
    r: usize,
    u: usize,
    out: &Path,
    resolvable: Option<&Path>,
) -> Result<Report> {
    let dm = DifferenceMatrix::build(k, r, u)?;
    dm.validate()?;
    let rp = resolvable.map(|_| dm.to_resolvable()).transpose()?;
    write_json(out, &DmDoc::from(&dm))?;
    if let (Some(path), Some(rp)) = (resolvable, &rp) {
        write_json(path, &ResolvableDoc::from(rp))?;
    }
    Ok(Report::ok(json!({
        "k": k,
        "group": dm.group().kind(),
        "rows": dm.rows(),
        "cols": dm.cols(),
        "difference_matrix": out,
        "resolvable": rp.as_ref().map(|rp| json!({
            "file": resolvable,
            "points": rp.k(),
            "block_size": r,
            "classes": rp.num_classes(),
            "blocks": rp.packing().len(),
        })),
    })))
}

pub fn construct_a(packing: &Path, out: &Path) -> Result<Report> {
    let packing = read_json::<PackingDoc>(packing)?.to_packing()?;
    let a = construction_a(&packing)?;
    // The blocks are the check-column supports, so the plain matrix already
    // records everything the packing would.
    write_json(out, &CodeDoc::from(&a.code))?;
    let rep = &a.report;
    Ok(Report::ok(json!({
        "construction": "a",
        "n": a.code.n(),
        "k": a.code.k(),
        "r": a.r,
        "delta": a.delta,
        "n1": rep.n1,
        "Delta": rep.min_occurrence,
        "d": a.delta,
        "bound_c": rep.bound_c,
        "bound_i": rep.bound_i,
        "optimal_c": a.optimal_c,
        "update_efficiency": a.code.update_efficiency(),
        "update_optimal": a.update_optimal,
        "out": out,
    })))
}

pub fn construct_b(
    source: MdsSource,
    resolvable: &Path,
    columns: Option<Vec<usize>>,
    mds_effort: u64,
    out: &Path,
) -> Result<Report> {
    let mds = match source {
        MdsSource::File(path) => read_json::<CodeDoc>(&path)?.to_code()?,
        MdsSource::Rs {
            p,
            m,
            modulus,
            n,
            k,
        } => SystematicCode::rs_systematic(field(p, m, modulus)?, n, k)?,
    };
    let rp = read_json::<ResolvableDoc>(resolvable)?.to_resolvable()?;
    let b = construction_b_with(
        &mds,
        &rp,
        &SplitOptions {
            columns,
            mds_effort,
        },
    )?;
    write_json(out, &CodeDoc::from_construction_b(&b, &mds, &rp))?;
    let rep = &b.report;
    Ok(Report::ok(json!({
        "construction": "b",
        "n": b.code.n(),
        "k": b.code.k(),
        "r": b.r,
        "delta": b.delta,
        "n1": rep.n1,
        "bound_c": rep.bound_c,
        "bound_i": rep.bound_i,
        "optimal_c": b.optimal_c,
        "update_efficiency": b.update_efficiency,
        "d": b.certificate.certified_distance,
        "distance_method": if b.certificate.certified_distance.is_some() { "certified" } else { "unknown" },
        "certificate": b.certificate,
        "split_map": b.layout.split_map,
        "out": out,
    })))
}

/// Exact distance when affordable, else the split certificate carried in the
/// file, re-derived here rather than trusted.
fn distance(
    code: &SystematicCode,
    doc: &CodeDoc,
    budget: u64,
    mds_effort: u64,
) -> Result<(Option<usize>, &'static str)> {
    if code.message_count() <= u128::from(budget) {
        return Ok((Some(code.min_distance(budget)?), "exact"));
    }
    if let Some(Provenance::B { mds, layout, .. }) = &doc.provenance {
        let mds = mds.to_code()?;
        let cert = certify_split(code, &mds, layout, mds.mds_check(mds_effort))?;
        if let Some(d) = cert.certified_distance {
            return Ok((Some(d), "certified"));
        }
    }
    Ok((None, "unknown"))
}

pub fn analyze(
    path: &Path,
    r: usize,
    delta: usize,
    budget: u64,
    mds_effort: u64,
) -> Result<Report> {
    let doc: CodeDoc = read_json(path)?;
    let code = doc.to_code()?;
    let report = match verify_locality(&code, r, delta)? {
        Locality::Satisfied(report) => report,
        Locality::Unsatisfied {
            symbol,
            groups_found,
        } => {
            eprintln!("({r}, {delta}) locality fails at information symbol {symbol}");
            return Ok(Report {
                doc: json!({
                    "locality": "unsatisfied",
                    "n": code.n(),
                    "k": code.k(),
                    "r": r,
                    "delta": delta,
                    "symbol": symbol,
                    "groups_found": groups_found,
                }),
                passed: false,
            });
        }
    };
    let (d, method) = distance(&code, &doc, budget, mds_effort)?;
    let verdict = d
        .map(|d| classify_optimal(&code, &report, Some(d)))
        .transpose()?;
    let extraction = match extract_packing(&code, &report) {
        Ok(ex) => json!({ "packing": PackingDoc::from(&ex.packing), "deletions": ex.deletions }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(Report::ok(json!({
        "locality": "satisfied",
        "d": d,
        "distance_method": method,
        "update_efficiency": code.update_efficiency(),
        "optimal_c": verdict.as_ref().map(|v| v.optimal_c),
        "verdict": verdict,
        "extracted": extraction,
        "report": report,
    })))
}

/// Either a bare report or a full `analyze` document.
#[derive(Deserialize)]
#[serde(untagged)]
enum ReportFile {
    Wrapped { report: LocalityReport },
    Bare(LocalityReport),
}

pub fn repair(
    code_path: &Path,
    report_path: &Path,
    erase: &[usize],
    message: Option<&Path>,
    seed: Option<u64>,
) -> Result<Report> {
    let code = read_json::<CodeDoc>(code_path)?.to_code()?;
    let report = match read_json::<ReportFile>(report_path)? {
        ReportFile::Wrapped { report } | ReportFile::Bare(report) => report,
    };
    let q = code.field().order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
    let message: Vec<Elem> = match message {
        Some(path) => read_json::<CodewordDoc>(path)?.symbols,
        None => (0..code.k()).map(|_| rng.gen_range(0..q)).collect(),
    };
    let original = code.encode(&message)?;

    let mut damaged = original.symbols.clone();
    for &pos in erase {
        if let Some(s) = pos.checked_sub(1).and_then(|i| damaged.get_mut(i)) {
            *s = rng.gen_range(0..q);
        }
    }
    let repaired = code.erase_and_repair(&Codeword { symbols: damaged }, erase, &report)?;
    let recovered = repaired.codeword == original;
    if !recovered {
        bail!("repair returned a different codeword");
    }
    let served: Vec<Value> = repaired
        .served_by
        .iter()
        .map(|&(symbol, column)| json!({ "symbol": symbol, "check_column": column, "position": code.k() + column }))
        .collect();
    Ok(Report::ok(json!({
        "recovered": recovered,
        "erased": erase,
        "message": message,
        "codeword": original.symbols,
        "served_by": served,
    })))
}

pub fn rs_gen(
    p: u64,
    m: u32,
    modulus: Option<u64>,
    n: usize,
    k: usize,
    out: &Path,
) -> Result<Report> {
    let code = SystematicCode::rs_systematic(field(p, m, modulus)?, n, k)?;
    let doc = CodeDoc::from(&code).with_provenance(Provenance::Rs { n, k });
    write_json(out, &doc)?;
    Ok(Report::ok(json!({
        "n": n,
        "k": k,
        "field": doc.field,
        "designed_distance": n - k + 1,
        "out": out,
    })))
}
