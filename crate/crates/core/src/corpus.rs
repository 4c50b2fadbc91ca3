//! JSON model files: parsing with cell-level diagnostics, canonical
//! serialization, and the embedded example corpus.

use crate::complexes::{canonical_filtration, ChainComplex, FilteredComplex, FilteredGComplex, GChainComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, GF2Matrix, Subspace};
use crate::groups::{FiniteGroup, GModule};
use crate::model::{Flags, QuotientCompanion, VarietyModel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic(usize),
    KleinFour,
    Table(Vec<Vec<usize>>),
}

impl Default for GroupSpec {
    fn default() -> Self {
        GroupSpec::Cyclic(1)
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic(d) => FiniteGroup::cyclic(*d),
            GroupSpec::KleinFour => Ok(FiniteGroup::klein_four()),
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, try_from = "serde_json::Value")]
pub enum FiltrationSpec {
    /// `"canonical"`.
    Named(String),
    /// `F_α` is spanned by the chains listed at all levels `≤ α`; `"*"` means every cell.
    Levels { min: i64, levels: BTreeMap<i64, Vec<String>> },
}

impl TryFrom<serde_json::Value> for FiltrationSpec {
    type Error = String;

    fn try_from(v: serde_json::Value) -> std::result::Result<Self, String> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Levels {
            min: i64,
            levels: BTreeMap<i64, Vec<String>>,
        }
        match v {
            serde_json::Value::String(s) => Ok(FiltrationSpec::Named(s)),
            v => {
                let l: Levels = serde_json::from_value(v).map_err(|e| format!("filtration: {e}"))?;
                Ok(FiltrationSpec::Levels { min: l.min, levels: l.levels })
            }
        }
    }
}

impl Default for FiltrationSpec {
    fn default() -> Self {
        FiltrationSpec::Named("canonical".into())
    }
}

/// Cells, boundary and filtration without group data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    /// Cell labels per degree.
    #[serde(default)]
    pub cells: BTreeMap<i64, Vec<String>>,
    /// Boundary of each cell as a list of labels (repeats cancel).
    #[serde(default)]
    pub boundary: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub filtration: FiltrationSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpec {
    pub model: ComplexSpec,
    /// Cell of `X` to the cell of `X/G` it covers.
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Companions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_weight: Option<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientSpec>,
}

impl Companions {
    fn is_empty(&self) -> bool {
        self.fixed.is_none() && self.invariant.is_none() && self.invariant_weight.is_none() && self.quotient.is_none()
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    /// Read off a worked example.
    Paper,
    /// Immediate from the definitions.
    Trivial,
    /// Recomputed by an independent argument.
    Derived,
}

/// A named expected output checked by `verify-corpus`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedBlock {
    pub name: String,
    pub tag: Tag,
    pub kind: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub values: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub group: GroupSpec,
    #[serde(default)]
    pub cells: BTreeMap<i64, Vec<String>>,
    #[serde(default)]
    pub boundary: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub filtration: FiltrationSpec,
    /// One cell permutation per group generator; unlisted cells are fixed and an
    /// empty list means the trivial action.
    #[serde(default)]
    pub action: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_cells: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub named_chains: BTreeMap<String, String>,
    #[serde(default)]
    pub flags: Flags,
    #[serde(default, skip_serializing_if = "Companions::is_empty")]
    pub companions: Companions,
    #[serde(default)]
    pub provenance: String,
    #[serde(default)]
    pub expected: Vec<ExpectedBlock>,
}

impl ModelFile {
    pub fn complex(&self) -> ComplexSpec {
        ComplexSpec { cells: self.cells.clone(), boundary: self.boundary.clone(), filtration: self.filtration.clone() }
    }
}

/// A loaded model together with its file metadata.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub model: VarietyModel,
    pub file: ModelFile,
}

/// Cell labels and their `(degree, index)` positions.
struct CellIndex {
    q_min: i64,
    labels: Vec<Vec<String>>,
    pos: BTreeMap<String, (i64, usize)>,
}

impl CellIndex {
    fn new(cells: &BTreeMap<i64, Vec<String>>, ctx: &str) -> Result<Self> {
        let q_min = cells.keys().next().copied().unwrap_or(0);
        let q_max = cells.keys().next_back().copied().unwrap_or(-1);
        let mut labels = Vec::new();
        let mut pos = BTreeMap::new();
        for q in q_min..=q_max {
            let row = cells.get(&q).cloned().unwrap_or_default();
            for (i, l) in row.iter().enumerate() {
                if l == "*" || l.contains('+') || l.is_empty() {
                    return Err(Error::Parse(format!("{ctx}: invalid cell label `{l}`")));
                }
                if pos.insert(l.clone(), (q, i)).is_some() {
                    return Err(Error::Parse(format!("{ctx}: duplicate cell label `{l}`")));
                }
            }
            labels.push(row);
        }
        Ok(CellIndex { q_min, labels, pos })
    }

    fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.labels.len()).map(move |i| self.q_min + i as i64)
    }

    fn dim(&self, q: i64) -> usize {
        let i = q - self.q_min;
        if i < 0 || i as usize >= self.labels.len() {
            0
        } else {
            self.labels[i as usize].len()
        }
    }

    fn lookup(&self, label: &str, ctx: &str) -> Result<(i64, usize)> {
        self.pos.get(label).copied().ok_or_else(|| Error::Parse(format!("{ctx}: unknown cell `{label}`")))
    }

    /// Parses `"a+b+c"`; all cells must share a degree.
    fn chain(&self, text: &str, ctx: &str) -> Result<(i64, BitVec)> {
        let mut degree = None;
        let mut parts = Vec::new();
        for tok in text.split('+').map(str::trim).filter(|t| !t.is_empty()) {
            let (q, i) = self.lookup(tok, ctx)?;
            if degree.is_some_and(|d| d != q) {
                return Err(Error::Parse(format!("{ctx}: chain `{text}` mixes degrees")));
            }
            degree = Some(q);
            parts.push(i);
        }
        let q = degree.ok_or_else(|| Error::Parse(format!("{ctx}: empty chain")))?;
        let mut v = BitVec::zeros(self.dim(q));
        for i in parts {
            v.flip(i);
        }
        Ok((q, v))
    }
}

fn build_chain(spec: &ComplexSpec, idx: &CellIndex, ctx: &str) -> Result<ChainComplex> {
    for label in spec.boundary.keys() {
        idx.lookup(label, ctx)?;
    }
    let mut dims = Vec::new();
    let mut boundary = Vec::new();
    for q in idx.degrees() {
        let n = idx.dim(q);
        let mut d = GF2Matrix::zeros(idx.dim(q - 1), n);
        if q > idx.q_min {
            for (j, l) in idx.labels[(q - idx.q_min) as usize].iter().enumerate() {
                for face in spec.boundary.get(l).into_iter().flatten() {
                    let (fq, fi) = idx.lookup(face, ctx)?;
                    if fq != q - 1 {
                        return Err(Error::InvalidComplex(format!("{ctx}: boundary of `{l}` (degree {q}) lists `{face}` of degree {fq}")));
                    }
                    d.flip(fi, j);
                }
            }
        } else if spec.boundary.iter().any(|(l, f)| idx.pos[l].0 == q && !f.is_empty()) {
            return Err(Error::InvalidComplex(format!("{ctx}: cells in the lowest degree {q} cannot have a boundary")));
        }
        dims.push(n);
        boundary.push(d);
    }
    for i in 1..boundary.len() {
        let dd = boundary[i - 1].mul(&boundary[i]);
        if let Some(j) = (0..dd.cols()).find(|&j| !dd.col(j).is_zero()) {
            let q = idx.q_min + i as i64;
            return Err(Error::InvalidComplex(format!(
                "{ctx}: ∂∘∂ ≠ 0 in degree {q}: ∂∂({}) is nonzero",
                idx.labels[i][j]
            )));
        }
    }
    ChainComplex::new(idx.q_min, dims, boundary)
}

fn build_filtration(spec: &ComplexSpec, idx: &CellIndex, chain: &ChainComplex, ctx: &str) -> Result<(i64, Vec<Vec<Subspace>>)> {
    let FiltrationSpec::Levels { min, levels } = &spec.filtration else {
        unreachable!("canonical filtrations are built from the complex");
    };
    let max = levels.keys().next_back().copied().unwrap_or(*min).max(*min);
    if levels.keys().any(|&a| a < *min) {
        return Err(Error::InvalidFiltration(format!("{ctx}: level below the declared minimum {min}")));
    }
    let degrees: Vec<i64> = idx.degrees().collect();
    let mut gens: Vec<Vec<BitVec>> = degrees.iter().map(|_| Vec::new()).collect();
    let mut out = Vec::new();
    for a in *min..=max {
        for text in levels.get(&a).into_iter().flatten() {
            if text == "*" {
                for (k, &q) in degrees.iter().enumerate() {
                    let n = chain.dim(q);
                    gens[k].extend((0..n).map(|i| BitVec::unit(n, i)));
                }
                continue;
            }
            let (q, v) = idx.chain(text, ctx)?;
            gens[(q - idx.q_min) as usize].push(v);
        }
        out.push(degrees.iter().enumerate().map(|(k, &q)| Subspace::span(chain.dim(q), gens[k].clone())).collect());
    }
    Ok((*min, out))
}

/// Prefixes the model name without nesting the error kind twice.
fn in_ctx(e: Error, ctx: &str) -> Error {
    match e {
        Error::InvalidFiltration(m) => Error::InvalidFiltration(format!("{ctx}: {m}")),
        Error::InvalidComplex(m) => Error::InvalidComplex(format!("{ctx}: {m}")),
        Error::InvalidModule(m) => Error::InvalidModule(format!("{ctx}: {m}")),
        Error::InvalidGroup(m) => Error::InvalidGroup(format!("{ctx}: {m}")),
        Error::NotChainMap(m) => Error::NotChainMap(format!("{ctx}: {m}")),
        other => other,
    }
}

fn named(text: &str) -> bool {
    matches!(text, "canonical")
}

/// Plain filtered complex from a companion spec.
fn build_plain(spec: &ComplexSpec, ctx: &str) -> Result<FilteredComplex> {
    let idx = CellIndex::new(&spec.cells, ctx)?;
    let chain = build_chain(spec, &idx, ctx)?;
    match &spec.filtration {
        FiltrationSpec::Named(n) if named(n) => {
            Ok(canonical_filtration(&GChainComplex::trivial_action(FiniteGroup::trivial(), chain)).filtration)
        }
        FiltrationSpec::Named(n) => Err(Error::Parse(format!("{ctx}: unknown filtration `{n}`"))),
        FiltrationSpec::Levels { .. } => {
            let (min, filt) = build_filtration(spec, &idx, &chain, ctx)?;
            FilteredComplex::new(chain, min, filt).map_err(|e| in_ctx(e, ctx))
        }
    }
}

fn permutation_matrix(perm: &BTreeMap<String, String>, idx: &CellIndex, q: i64, ctx: &str) -> Result<GF2Matrix> {
    let n = idx.dim(q);
    let mut img: Vec<usize> = (0..n).collect();
    for (src, dst) in perm {
        let (sq, si) = idx.lookup(src, ctx)?;
        let (dq, di) = idx.lookup(dst, ctx)?;
        if sq != dq {
            return Err(Error::InvalidModule(format!("{ctx}: action sends `{src}` to `{dst}` of another degree")));
        }
        if sq == q {
            img[si] = di;
        }
    }
    let mut seen = vec![false; n];
    let mut m = GF2Matrix::zeros(n, n);
    for (i, &j) in img.iter().enumerate() {
        if seen[j] {
            return Err(Error::InvalidModule(format!("{ctx}: action is not a permutation of the degree-{q} cells (`{}` hit twice)", idx.labels[(q - idx.q_min) as usize][j])));
        }
        seen[j] = true;
        m.set(j, i, true);
    }
    Ok(m)
}

fn load_file(file: ModelFile) -> Result<CorpusEntry> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", file.schema_version)));
    }
    let ctx = file.name.clone();
    let spec = file.complex();
    let group = file.group.build()?;
    let idx = CellIndex::new(&spec.cells, &ctx)?;
    let chain = build_chain(&spec, &idx, &ctx)?;
    if !file.action.is_empty() && file.action.len() != group.generators().len() {
        return Err(Error::InvalidModule(format!("{ctx}: {} action maps for {} group generators", file.action.len(), group.generators().len())));
    }
    let mut modules = Vec::new();
    for q in idx.degrees() {
        let images = file.action.iter().map(|p| permutation_matrix(p, &idx, q, &ctx)).collect::<Result<Vec<_>>>()?;
        let m = if file.action.is_empty() {
            GModule::trivial(&group, idx.dim(q))
        } else {
            GModule::from_generator_images(&group, idx.dim(q), &images).map_err(|e| in_ctx(e, &format!("{ctx}: degree {q}")))?
        };
        modules.push(m);
    }
    let base = GChainComplex::new(group, chain.clone(), modules)
        .map_err(|e| in_ctx(e, &ctx))?
        .with_labels(idx.labels.clone());
    let fk = match &spec.filtration {
        FiltrationSpec::Named(n) if named(n) => canonical_filtration(&base),
        FiltrationSpec::Named(n) => return Err(Error::Parse(format!("{ctx}: unknown filtration `{n}`"))),
        FiltrationSpec::Levels { .. } => {
            let (min, filt) = build_filtration(&spec, &idx, &chain, &ctx)?;
            FilteredGComplex::new(base, min, filt).map_err(|e| in_ctx(e, &ctx))?
        }
    };
    let mut model = VarietyModel::new(file.name.clone(), fk);
    model.flags = file.flags;
    if let Some(cells) = &file.fixed_cells {
        let mut per: Vec<Vec<usize>> = idx.degrees().map(|_| Vec::new()).collect();
        for l in cells {
            let (q, i) = idx.lookup(l, &ctx)?;
            per[(q - idx.q_min) as usize].push(i);
        }
        for p in &mut per {
            p.sort_unstable();
        }
        model.fixed_cells = Some(per);
        model.fixed_model()?;
    }
    for (name, text) in &file.named_chains {
        model.named_chains.insert(name.clone(), idx.chain(text, &ctx)?);
    }
    let c = &file.companions;
    if let Some(s) = &c.fixed {
        model.fixed = Some(build_plain(s, &format!("{ctx}/fixed"))?);
    }
    if let Some(s) = &c.invariant {
        model.invariant = Some(build_plain(s, &format!("{ctx}/invariant"))?);
    }
    if let Some(s) = &c.invariant_weight {
        model.invariant_weight = Some(build_plain(s, &format!("{ctx}/invariant_weight"))?);
    }
    if let Some(qs) = &c.quotient {
        let qctx = format!("{ctx}/quotient");
        let qfc = build_plain(&qs.model, &qctx)?;
        let qidx = CellIndex::new(&qs.model.cells, &qctx)?;
        let qbase = GChainComplex::trivial_action(FiniteGroup::trivial(), qfc.chain.clone()).with_labels(qidx.labels.clone());
        let qfk = FilteredGComplex::new(qbase, qfc.alpha_min(), (qfc.alpha_min()..=qfc.alpha_max()).map(|a| qfc.chain.degrees().map(|q| qfc.f(a, q)).collect()).collect())?;
        let mut cell_map: Vec<Vec<usize>> = idx.degrees().map(|q| vec![usize::MAX; idx.dim(q)]).collect();
        for (src, dst) in &qs.map {
            let (q, i) = idx.lookup(src, &qctx)?;
            let (dq, di) = qidx.lookup(dst, &qctx)?;
            if dq != q {
                return Err(Error::InvalidComplex(format!("{qctx}: `{src}` maps to `{dst}` of another degree")));
            }
            cell_map[(q - idx.q_min) as usize][i] = di;
        }
        if let Some((k, i)) = cell_map.iter().enumerate().find_map(|(k, row)| row.iter().position(|&x| x == usize::MAX).map(|i| (k, i))) {
            return Err(Error::InvalidComplex(format!("{qctx}: cell `{}` has no image", idx.labels[k][i])));
        }
        model.quotient = Some(QuotientCompanion { model: qfk, cell_map });
    }
    Ok(CorpusEntry { model, file })
}

pub fn parse_str(text: &str) -> Result<CorpusEntry> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    load_file(file)
}

pub fn load(path: &Path) -> Result<CorpusEntry> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_str(&text)
}

fn labels_of(k: &GChainComplex) -> BTreeMap<i64, Vec<String>> {
    k.chain.degrees().map(|q| (q, (0..k.dim(q)).map(|i| k.label(q, i)).collect())).collect()
}

fn chain_text(k: &GChainComplex, q: i64, v: &BitVec) -> String {
    v.ones().iter().map(|&i| k.label(q, i)).collect::<Vec<_>>().join("+")
}

fn complex_spec(fc: &FilteredComplex, k: &GChainComplex) -> ComplexSpec {
    let cells = labels_of(k);
    let mut boundary = BTreeMap::new();
    for q in k.chain.degrees().skip(1) {
        let d = k.d(q);
        for j in 0..k.dim(q) {
            let faces: Vec<String> = d.col(j).ones().iter().map(|&i| k.label(q - 1, i)).collect();
            if !faces.is_empty() {
                boundary.insert(k.label(q, j), faces);
            }
        }
    }
    let mut levels = BTreeMap::new();
    if !k.chain.is_empty() {
        for a in fc.alpha_min()..=fc.alpha_max() {
            let gens: Vec<String> = k
                .chain
                .degrees()
                .flat_map(|q| fc.f(a, q).basis().iter().map(|v| chain_text(k, q, v)).collect::<Vec<_>>())
                .collect();
            levels.insert(a, gens);
        }
    }
    let filtration = FiltrationSpec::Levels { min: fc.alpha_min(), levels };
    ComplexSpec { cells, boundary, filtration }
}

fn plain_spec(fc: &FilteredComplex) -> ComplexSpec {
    complex_spec(fc, &GChainComplex::trivial_action(FiniteGroup::trivial(), fc.chain.clone()))
}

/// Canonical file: explicit labels, explicit filtration bases, metadata copied from `meta`.
pub fn to_file(model: &VarietyModel, meta: &ModelFile) -> ModelFile {
    let k = model.complex();
    let g = &k.group;
    let action = g
        .generators()
        .iter()
        .map(|&gen| {
            let mut perm = BTreeMap::new();
            for q in k.chain.degrees() {
                let m = k.module(q).action(gen).clone();
                for j in 0..k.dim(q) {
                    let i = m.col(j).lowest().expect("permutation action");
                    if i != j {
                        perm.insert(k.label(q, j), k.label(q, i));
                    }
                }
            }
            perm
        })
        .collect();
    let fixed_cells = model.fixed_cells.as_ref().map(|cells| {
        k.chain.degrees().zip(cells).flat_map(|(q, row)| row.iter().map(move |&i| k.label(q, i))).collect()
    });
    let named_chains = model.named_chains.iter().map(|(n, (q, v))| (n.clone(), chain_text(k, *q, v))).collect();
    let quotient = model.quotient.as_ref().map(|qc| {
        let qk = &qc.model.base;
        let mut map = BTreeMap::new();
        for (row, q) in qc.cell_map.iter().zip(k.chain.degrees()) {
            for (i, &j) in row.iter().enumerate() {
                map.insert(k.label(q, i), qk.label(q, j));
            }
        }
        QuotientSpec { model: complex_spec(&qc.model.filtration, qk), map }
    });
    let companions = Companions {
        fixed: model.fixed.as_ref().map(plain_spec),
        invariant: model.invariant.as_ref().map(plain_spec),
        invariant_weight: model.invariant_weight.as_ref().map(plain_spec),
        quotient,
    };
    let spec = complex_spec(&model.fk.filtration, k);
    ModelFile {
        schema_version: SCHEMA_VERSION,
        name: model.name.clone(),
        group: meta.group.clone(),
        cells: spec.cells,
        boundary: spec.boundary,
        filtration: spec.filtration,
        action: if g.order() == 1 { Vec::new() } else { action },
        fixed_cells,
        named_chains,
        flags: model.flags,
        companions,
        provenance: meta.provenance.clone(),
        expected: meta.expected.clone(),
    }
}

pub fn to_json(model: &VarietyModel, meta: &ModelFile) -> String {
    serde_json::to_string_pretty(&to_file(model, meta)).expect("model files serialize")
}

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        /// Embedded corpus sources by file stem.
        pub const CORPUS: &[(&str, &str)] = &[$(($name, include_str!(concat!("../../../corpus/", $name, ".json")))),*];
    };
}

corpus_files!(
    "point_trivial",
    "point_z2",
    "point_pair_free",
    "circle_trivial",
    "circle_reflection",
    "circle_antipodal",
    "sphere_reflection",
    "sphere_antipodal",
    "figure8_swap",
    "figure8_flip",
    "figure8_swap_point",
    "figure8_swap_arcs",
    "circle_reflection_point",
    "circle_reflection_arc",
    "circle_pair_swap",
    "z3_three_points",
    "z3_circle_trivial",
    "z3_rotating_circle",
    "z3_rotating_vertices",
    "z3_rotating_edges",
    "bad_boundary",
    "bad_filtration",
    "smith_violation",
);

/// The embedded corpus sorted by name; negative controls that fail to load are
/// returned as errors next to their file stem.
pub fn corpus() -> Vec<(String, Result<CorpusEntry>)> {
    let mut out: Vec<(String, Result<CorpusEntry>)> = CORPUS.iter().map(|(n, s)| (n.to_string(), parse_str(s))).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Raw file metadata even when the model itself is rejected.
pub fn corpus_file(stem: &str) -> Option<ModelFile> {
    CORPUS.iter().find(|(n, _)| *n == stem).and_then(|(_, s)| serde_json::from_str(s).ok())
}

pub fn corpus_entry(stem: &str) -> Result<CorpusEntry> {
    let (_, s) = CORPUS.iter().find(|(n, _)| *n == stem).ok_or_else(|| Error::Parse(format!("no corpus entry `{stem}`")))?;
    parse_str(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(cells: &[(i64, &[&str])]) -> Result<CellIndex> {
        let m = cells.iter().map(|(q, ls)| (*q, ls.iter().map(|s| s.to_string()).collect())).collect();
        CellIndex::new(&m, "t")
    }

    #[test]
    fn chains_parse_within_one_degree() {
        let idx = index(&[(0, &["a", "b"]), (1, &["e"])]).unwrap();
        let (q, v) = idx.chain("a + b + a", "t").unwrap();
        assert_eq!((q, v.ones()), (0, vec![1]));
        assert!(idx.chain("a+e", "t").is_err());
        assert!(idx.chain("", "t").is_err());
        assert!(idx.chain("z", "t").is_err());
    }

    #[test]
    fn labels_are_validated() {
        assert!(index(&[(0, &["a", "a"])]).is_err());
        assert!(index(&[(0, &["*"])]).is_err());
        assert!(index(&[(0, &["a+b"])]).is_err());
        // Gaps between degrees are empty rows.
        let idx = index(&[(0, &["a"]), (2, &["f"])]).unwrap();
        assert_eq!(idx.degrees().collect::<Vec<_>>(), [0, 1, 2]);
        assert_eq!(idx.dim(1), 0);
    }

    #[test]
    fn star_level_is_everything() {
        let text = r#"{"schema_version": 1, "name": "arc", "cells": {"0": ["a", "b"], "1": ["e"]},
            "boundary": {"e": ["a", "b"]}, "filtration": {"min": -1, "levels": {"-1": ["a"], "0": ["*"]}},
            "provenance": "closed interval", "expected": []}"#;
        let fk = parse_str(text).unwrap().model.fk;
        assert_eq!((fk.f(-1, 0).dim(), fk.f(-1, 1).dim(), fk.f(0, 0).dim(), fk.f(0, 1).dim()), (1, 0, 2, 1));
    }

    #[test]
    fn canonical_filtration_by_name() {
        let text = r#"{"schema_version": 1, "name": "c", "cells": {"0": ["v"], "1": ["e"]}, "boundary": {"e": []},
            "filtration": "canonical", "provenance": "circle", "expected": []}"#;
        let fk = parse_str(text).unwrap().model.fk;
        assert_eq!((fk.alpha_min(), fk.alpha_max()), (-1, 0));
    }
}
