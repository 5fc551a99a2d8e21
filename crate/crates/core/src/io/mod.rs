//! JSON file formats. Every scalar is a string (`"3"`, `"-1/2"`), every file
//! carries `schema_version`, and conversions validate against the domain types.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::curved::FiniteDgla;
use crate::error::{ensure_dims, Error, Result};
use crate::graded::{FilteredLambdaModule, LambdaModule, TruncatedGradedAlgebra};
use crate::hochschild::GaugeElement;
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::scalar::{FieldSpec, Scalar};
use crate::sheaf::{FilteredPresentation, FreeElement, GradedPresentation, Poly, SplitBundleSpec};

pub const SCHEMA_VERSION: u32 = 1;

/// Matrix rows as scalar strings.
pub type MatrixJson = Vec<Vec<String>>;

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Schema(format!("schema_version {v} is not supported (expected {SCHEMA_VERSION})")));
    }
    Ok(())
}

/// The field named in a file, unless the caller overrides it.
fn resolve_field(declared: &str, over: Option<FieldSpec>) -> Result<FieldSpec> {
    match over {
        Some(f) => Ok(f),
        None => FieldSpec::from_str(declared),
    }
}

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect()
}

pub fn matrix_from_json(field: FieldSpec, rows: usize, cols: usize, j: &MatrixJson) -> Result<Matrix> {
    ensure_dims!(j.len() == rows, "matrix with {} rows, expected {rows}", j.len());
    let mut m = Matrix::zeros(field, rows, cols);
    for (r, row) in j.iter().enumerate() {
        ensure_dims!(row.len() == cols, "matrix row with {} entries, expected {cols}", row.len());
        for (c, x) in row.iter().enumerate() {
            m.set(r, c, field.parse(x)?);
        }
    }
    Ok(m)
}

fn vector_to_json(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn vector_from_json(field: FieldSpec, n: usize, v: &[String]) -> Result<Vec<Scalar>> {
    ensure_dims!(v.len() == n, "vector of length {}, expected {n}", v.len());
    v.iter().map(|x| field.parse(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableJson {
    pub i: usize,
    pub j: usize,
    pub mats: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraJson {
    /// `k[x_0, …, x_{nvars−1}]` truncated at `top`.
    Polynomial { nvars: usize, top: usize },
    Explicit { dims: Vec<usize>, mult: Vec<TableJson> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionJson {
    pub e: usize,
    pub i: usize,
    pub mats: Vec<MatrixJson>,
}

/// A window module, optionally with a flag. `flag` lists the proper steps
/// `M¹ ⊆ … ⊆ M^{s−1}`, each as per-degree spanning vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub schema_version: u32,
    pub field: String,
    pub algebra: AlgebraJson,
    pub p: i64,
    pub dims: Vec<usize>,
    pub action: Vec<ActionJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flag: Vec<Vec<Vec<Vec<String>>>>,
}

fn algebra_to_json(a: &TruncatedGradedAlgebra) -> AlgebraJson {
    let top = a.top_degree();
    if let Some((nvars, _)) = a.monomial_labels() {
        if a.same_structure(&TruncatedGradedAlgebra::polynomial(a.field(), nvars, top)) {
            return AlgebraJson::Polynomial { nvars, top };
        }
    }
    let mult = a
        .mult_tables()
        .iter()
        .map(|(&(i, j), ms)| TableJson { i, j, mats: ms.iter().map(matrix_to_json).collect() })
        .collect();
    AlgebraJson::Explicit { dims: a.dims().to_vec(), mult }
}

fn algebra_from_json(field: FieldSpec, j: &AlgebraJson) -> Result<TruncatedGradedAlgebra> {
    match j {
        AlgebraJson::Polynomial { nvars, top } => Ok(TruncatedGradedAlgebra::polynomial(field, *nvars, *top)),
        AlgebraJson::Explicit { dims, mult } => {
            let mut tables = BTreeMap::new();
            for t in mult {
                ensure_dims!(t.i + t.j < dims.len(), "table ({}, {}) above the top degree", t.i, t.j);
                let ms = t
                    .mats
                    .iter()
                    .map(|m| matrix_from_json(field, dims[t.i + t.j], dims[t.j], m))
                    .collect::<Result<Vec<_>>>()?;
                tables.insert((t.i, t.j), ms);
            }
            TruncatedGradedAlgebra::from_mult(field, dims.clone(), tables)
        }
    }
}

pub fn module_to_json(f: &FilteredLambdaModule) -> ModuleJson {
    let m = f.module();
    let action = m
        .actions()
        .iter()
        .map(|(&(e, i), ms)| ActionJson { e, i, mats: ms.iter().map(matrix_to_json).collect() })
        .collect();
    let flag = f.steps()[..f.length() - 1]
        .iter()
        .map(|s| s.iter().map(|sub| sub.basis().iter().map(|v| vector_to_json(v)).collect()).collect())
        .collect();
    ModuleJson {
        schema_version: SCHEMA_VERSION,
        field: m.field().to_string(),
        algebra: algebra_to_json(m.algebra()),
        p: m.p(),
        dims: m.dims().to_vec(),
        action,
        flag,
    }
}

pub fn plain_module_to_json(m: &LambdaModule) -> ModuleJson {
    module_to_json(&FilteredLambdaModule::trivial(m.clone()))
}

/// Reads a module file; `field` overrides the declared field, reducing
/// rational entries when it is a prime field.
pub fn module_from_json(j: &ModuleJson, field: Option<FieldSpec>) -> Result<FilteredLambdaModule> {
    check_version(j.schema_version)?;
    let f = resolve_field(&j.field, field)?;
    let alg = Arc::new(algebra_from_json(f, &j.algebra)?);
    ensure_dims!(!j.dims.is_empty(), "a window needs at least one degree");
    let mut action = BTreeMap::new();
    for a in &j.action {
        ensure_dims!(a.i + a.e < j.dims.len(), "action ({}, {}) outside the window", a.e, a.i);
        let ms = a
            .mats
            .iter()
            .map(|m| matrix_from_json(f, j.dims[a.i + a.e], j.dims[a.i], m))
            .collect::<Result<Vec<_>>>()?;
        action.insert((a.e, a.i), ms);
    }
    let module = LambdaModule::new(alg, j.p, j.dims.clone(), action)?;
    let mut steps = Vec::new();
    for s in &j.flag {
        ensure_dims!(s.len() == j.dims.len(), "flag step with {} degrees", s.len());
        let subs = s
            .iter()
            .zip(&j.dims)
            .map(|(vs, &n)| {
                let vecs = vs.iter().map(|v| vector_from_json(f, n, v)).collect::<Result<Vec<_>>>()?;
                Subspace::span(f, n, vecs)
            })
            .collect::<Result<Vec<_>>>()?;
        steps.push(subs);
    }
    steps.push(module.full_subs());
    FilteredLambdaModule::new(module, steps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub degree: i64,
    pub coeffs: Vec<String>,
}

/// A graded presentation, optionally with flag steps given by generating elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub schema_version: u32,
    pub field: String,
    pub vars: usize,
    pub gens: Vec<i64>,
    #[serde(default)]
    pub rels: Vec<ElementJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<Vec<ElementJson>>,
}

fn element_to_json(e: &FreeElement) -> ElementJson {
    ElementJson { degree: e.degree, coeffs: e.coeffs.iter().map(ToString::to_string).collect() }
}

fn element_from_json(f: FieldSpec, nvars: usize, e: &ElementJson) -> Result<FreeElement> {
    let coeffs = e.coeffs.iter().map(|c| Poly::parse(f, nvars, c)).collect::<Result<Vec<_>>>()?;
    Ok(FreeElement { degree: e.degree, coeffs })
}

pub fn presentation_to_json(fp: &FilteredPresentation) -> PresentationJson {
    let p = &fp.ambient;
    PresentationJson {
        schema_version: SCHEMA_VERSION,
        field: p.field().to_string(),
        vars: p.nvars(),
        gens: p.gens().to_vec(),
        rels: p.rels().iter().map(element_to_json).collect(),
        steps: fp.steps.iter().map(|s| s.iter().map(element_to_json).collect()).collect(),
    }
}

pub fn presentation_from_json(j: &PresentationJson, field: Option<FieldSpec>) -> Result<FilteredPresentation> {
    check_version(j.schema_version)?;
    let f = resolve_field(&j.field, field)?;
    let rels = j.rels.iter().map(|e| element_from_json(f, j.vars, e)).collect::<Result<Vec<_>>>()?;
    let ambient = GradedPresentation::new(f, j.vars, j.gens.clone(), rels)?;
    let steps = j
        .steps
        .iter()
        .map(|s| s.iter().map(|e| element_from_json(f, j.vars, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    FilteredPresentation::new(ambient, steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitBundleJson {
    pub schema_version: u32,
    pub blocks: Vec<(i64, usize)>,
}

pub fn split_to_json(s: &SplitBundleSpec) -> SplitBundleJson {
    SplitBundleJson { schema_version: SCHEMA_VERSION, blocks: s.blocks().to_vec() }
}

pub fn split_from_json(j: &SplitBundleJson) -> Result<SplitBundleSpec> {
    check_version(j.schema_version)?;
    SplitBundleSpec::new(j.blocks.clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentialEntry {
    pub alpha: usize,
    pub gamma: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub value: String,
}

/// A finite dgla in degrees `≥ 1` by structure constants; brackets are given
/// for `α ≤ β` and extended by graded antisymmetry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DglaJson {
    pub schema_version: u32,
    pub field: String,
    pub degrees: Vec<usize>,
    #[serde(default)]
    pub d: Vec<DifferentialEntry>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

pub fn dgla_to_json(l: &FiniteDgla) -> DglaJson {
    let mut d = Vec::new();
    for a in 0..l.dim() {
        for (g, x) in l.d_basis(a) {
            d.push(DifferentialEntry { alpha: a, gamma: *g, value: x.to_string() });
        }
    }
    let mut brackets = Vec::new();
    for (&(a, b), v) in l.bracket_entries() {
        for (g, x) in v {
            brackets.push(BracketEntry { alpha: a, beta: b, gamma: *g, value: x.to_string() });
        }
    }
    DglaJson { schema_version: SCHEMA_VERSION, field: l.field().to_string(), degrees: l.degrees().to_vec(), d, brackets }
}

pub fn dgla_from_json(j: &DglaJson, field: Option<FieldSpec>) -> Result<FiniteDgla> {
    check_version(j.schema_version)?;
    let f = resolve_field(&j.field, field)?;
    let n = j.degrees.len();
    let mut d_cols: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); n];
    for e in &j.d {
        ensure_dims!(e.alpha < n && e.gamma < n, "differential entry ({}, {}) out of range", e.alpha, e.gamma);
        let slot = d_cols[e.alpha].entry(e.gamma).or_insert_with(|| f.zero());
        *slot += &f.parse(&e.value)?;
    }
    let mut br: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
    for e in &j.brackets {
        let slot = br.entry((e.alpha, e.beta)).or_default().entry(e.gamma).or_insert_with(|| f.zero());
        *slot += &f.parse(&e.value)?;
    }
    let sparse = |m: BTreeMap<usize, Scalar>| -> SparseVec { m.into_iter().filter(|(_, x)| !x.is_zero()).collect() };
    let d_cols = d_cols.into_iter().map(sparse).collect();
    let brackets = br.into_iter().map(|(k, v)| (k, sparse(v))).collect();
    FiniteDgla::new(f, j.degrees.clone(), d_cols, brackets)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeJson {
    pub schema_version: u32,
    pub field: String,
    pub maps: Vec<MatrixJson>,
}

pub fn gauge_to_json(g: &GaugeElement, field: FieldSpec) -> GaugeJson {
    GaugeJson { schema_version: SCHEMA_VERSION, field: field.to_string(), maps: g.maps().iter().map(matrix_to_json).collect() }
}

pub fn gauge_from_json(j: &GaugeJson, field: Option<FieldSpec>) -> Result<GaugeElement> {
    check_version(j.schema_version)?;
    let f = resolve_field(&j.field, field)?;
    let maps = j.maps.iter().map(|m| matrix_from_json(f, m.len(), m.len(), m)).collect::<Result<Vec<_>>>()?;
    GaugeElement::new(maps)
}
