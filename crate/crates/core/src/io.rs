//! JSON schemas and file round-trips for structure data, bracket tables, and
//! prescribed tensors.
//!
//! Conventions: indices in files are 1-based; `gamma` is stored sparsely as
//! entries with sorted indices `i <= k <= l` and expanded by symmetry on
//! load; bracket entries carry `a < b` only, the opposite orientation is
//! implied by antisymmetry. All floating-point output is printed with 17
//! significant digits, which round-trips every finite double exactly.

use crate::data::{
    DataError, Gamma, InvariantTensor, LieAlgebraTable, StructureData,
};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(serde_json::Error),
    #[error("schema error: {message}")]
    Schema { message: String },
    #[error(transparent)]
    Data(#[from] DataError),
}

fn classify(err: serde_json::Error) -> LoadError {
    // structural errors (missing/unknown fields, wrong types) keep their
    // line/field diagnostics in the message
    match err.classify() {
        serde_json::error::Category::Data => LoadError::Schema { message: err.to_string() },
        _ => LoadError::Parse(err),
    }
}

fn schema_err(message: impl Into<String>) -> LoadError {
    LoadError::Schema { message: message.into() }
}

// ---------------------------------------------------------------------------
// 17-significant-digit serialization

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

struct SciPrettyFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! forward_fmt {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
            self.inner.$name(writer)
        })*
    };
}

impl serde_json::ser::Formatter for SciPrettyFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    forward_fmt!(begin_array, end_array, begin_object, end_object);

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array_value(writer)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object_value(writer)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Compact JSON with floats at 17 significant digits. Deterministic: equal
/// values serialize to equal bytes.
pub fn to_json_compact<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(out).expect("serializer emits valid utf-8")
}

/// Pretty-printed JSON with floats at 17 significant digits.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let formatter = SciPrettyFormatter { inner: serde_json::ser::PrettyFormatter::new() };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(out).expect("serializer emits valid utf-8")
}

// ---------------------------------------------------------------------------
// file schemas

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GammaEntryFile {
    i: usize,
    k: usize,
    l: usize,
    value: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    label: String,
    s: usize,
    d: Vec<usize>,
    b: Vec<f64>,
    gamma: Vec<GammaEntryFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zeta: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketEntryFile {
    a: usize,
    b: usize,
    e: usize,
    value: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    dim_g: usize,
    c: Vec<BracketEntryFile>,
    h_indices: Vec<usize>,
    m_blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    z: Vec<f64>,
}

/// Either kind of input document, detected by shape.
#[derive(Debug)]
pub enum Document {
    Structure(StructureData),
    Table(LieAlgebraTable),
}

// ---------------------------------------------------------------------------
// structure data

pub fn structure_from_json(text: &str) -> Result<StructureData, LoadError> {
    let file: StructureFile = serde_json::from_str(text).map_err(classify)?;
    if file.s == 0 {
        return Err(schema_err("field `s` must be at least 1"));
    }
    if file.d.len() != file.s {
        return Err(schema_err(format!(
            "field `d` has {} entries but `s` = {}",
            file.d.len(),
            file.s
        )));
    }
    if file.b.len() != file.s {
        return Err(schema_err(format!(
            "field `b` has {} entries but `s` = {}",
            file.b.len(),
            file.s
        )));
    }
    if let Some(z) = &file.zeta {
        if z.len() != file.s {
            return Err(schema_err(format!(
                "field `zeta` has {} entries but `s` = {}",
                z.len(),
                file.s
            )));
        }
    }
    let mut entries = Vec::with_capacity(file.gamma.len());
    for (pos, e) in file.gamma.iter().enumerate() {
        if e.i == 0 || !(e.i <= e.k && e.k <= e.l && e.l <= file.s) {
            return Err(schema_err(format!(
                "gamma[{pos}]: indices ({},{},{}) must satisfy 1 <= i <= k <= l <= s",
                e.i, e.k, e.l
            )));
        }
        entries.push((e.i - 1, e.k - 1, e.l - 1, e.value));
    }
    let gamma = Gamma::from_sorted_entries(file.s, &entries).map_err(|err| match err {
        DataError::DuplicateGammaEntry { i, k, l } => schema_err(format!(
            "duplicate gamma entry ({},{},{})",
            i + 1,
            k + 1,
            l + 1
        )),
        other => LoadError::Data(other),
    })?;
    StructureData::new(file.label, file.d, file.b, gamma, file.zeta).map_err(LoadError::Data)
}

pub fn structure_to_json(sd: &StructureData) -> String {
    let gamma = sd
        .gamma_array()
        .sorted_entries()
        .into_iter()
        .map(|(i, k, l, value)| GammaEntryFile { i: i + 1, k: k + 1, l: l + 1, value })
        .collect();
    let file = StructureFile {
        label: sd.label.clone(),
        s: sd.summand_count(),
        d: sd.dims.clone(),
        b: sd.killing.clone(),
        gamma,
        zeta: sd.casimir.clone(),
    };
    to_json_pretty(&file)
}

// ---------------------------------------------------------------------------
// bracket tables

pub fn table_from_json(text: &str) -> Result<LieAlgebraTable, LoadError> {
    let file: TableFile = serde_json::from_str(text).map_err(classify)?;
    if file.dim_g == 0 {
        return Err(schema_err("field `dim_g` must be at least 1"));
    }
    let mut entries = Vec::with_capacity(file.c.len());
    for (pos, e) in file.c.iter().enumerate() {
        if e.a == 0 || e.e == 0 || !(e.a < e.b && e.b <= file.dim_g && e.e <= file.dim_g) {
            return Err(schema_err(format!(
                "c[{pos}]: indices ({},{},{}) must satisfy 1 <= a < b <= dim_g, 1 <= e <= dim_g",
                e.a, e.b, e.e
            )));
        }
        entries.push((e.a - 1, e.b - 1, e.e - 1, e.value));
    }
    let to_zero_based = |v: &[usize], what: &str| -> Result<Vec<usize>, LoadError> {
        v.iter()
            .map(|&idx| {
                if idx == 0 || idx > file.dim_g {
                    Err(schema_err(format!("{what} index {idx} out of range 1..={}", file.dim_g)))
                } else {
                    Ok(idx - 1)
                }
            })
            .collect()
    };
    let isotropy = to_zero_based(&file.h_indices, "h_indices")?;
    let blocks = file
        .m_blocks
        .iter()
        .map(|blk| to_zero_based(blk, "m_blocks"))
        .collect::<Result<Vec<_>, _>>()?;
    LieAlgebraTable::from_entries(file.dim_g, &entries, isotropy, blocks).map_err(|err| {
        schema_err(format!("invalid table data: {err}"))
    })
}

pub fn table_to_json(t: &LieAlgebraTable) -> String {
    let c = t
        .sparse_entries()
        .into_iter()
        .map(|(a, b, e, value)| BracketEntryFile { a: a + 1, b: b + 1, e: e + 1, value })
        .collect();
    let file = TableFile {
        dim_g: t.dim,
        c,
        h_indices: t.isotropy.iter().map(|&j| j + 1).collect(),
        m_blocks: t.blocks.iter().map(|blk| blk.iter().map(|&a| a + 1).collect()).collect(),
    };
    to_json_pretty(&file)
}

// ---------------------------------------------------------------------------
// tensors

pub fn tensor_from_json(text: &str) -> Result<InvariantTensor, LoadError> {
    let file: TensorFile = serde_json::from_str(text).map_err(classify)?;
    InvariantTensor::new(file.z).map_err(LoadError::Data)
}

pub fn tensor_to_json(z: &InvariantTensor) -> String {
    to_json_pretty(&TensorFile { z: z.coeffs().to_vec() })
}

// ---------------------------------------------------------------------------
// paths

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), LoadError> {
    std::fs::write(path, text)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

pub fn load_structure(path: impl AsRef<Path>) -> Result<StructureData, LoadError> {
    structure_from_json(&read(path.as_ref())?)
}

pub fn load_table(path: impl AsRef<Path>) -> Result<LieAlgebraTable, LoadError> {
    table_from_json(&read(path.as_ref())?)
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<InvariantTensor, LoadError> {
    tensor_from_json(&read(path.as_ref())?)
}

/// Loads either a structure-data document or a bracket table, detected by
/// the presence of the `dim_g` field.
pub fn load(path: impl AsRef<Path>) -> Result<Document, LoadError> {
    let text = read(path.as_ref())?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(classify)?;
    let is_table = value.as_object().is_some_and(|o| o.contains_key("dim_g"));
    if is_table {
        Ok(Document::Table(table_from_json(&text)?))
    } else {
        Ok(Document::Structure(structure_from_json(&text)?))
    }
}

pub fn save_structure(sd: &StructureData, path: impl AsRef<Path>) -> Result<(), LoadError> {
    write_file(path.as_ref(), &(structure_to_json(sd) + "\n"))
}

pub fn save_table(t: &LieAlgebraTable, path: impl AsRef<Path>) -> Result<(), LoadError> {
    write_file(path.as_ref(), &(table_to_json(t) + "\n"))
}

pub fn save_tensor(z: &InvariantTensor, path: impl AsRef<Path>) -> Result<(), LoadError> {
    write_file(path.as_ref(), &(tensor_to_json(z) + "\n"))
}
