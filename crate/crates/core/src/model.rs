//! A finite filtered G-complex model of a variety, with optional companion data.

use crate::complexes::{ChainComplex, FilteredComplex, FilteredGComplex, GChainComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, GF2Matrix, Subspace};
use crate::lfunctor::WindowContract;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Flags {
    #[serde(default)]
    pub compact: bool,
    #[serde(default)]
    pub nonsingular: bool,
    /// The filtration and companions are claimed to reproduce the Nash-constructible data.
    #[serde(default)]
    pub nash_faithful: bool,
}

impl Flags {
    pub fn compact_nonsingular(&self) -> bool {
        self.compact && self.nonsingular
    }
}

/// Model of `X/G` with the cell assignment of the orbit map.
#[derive(Clone, Debug)]
pub struct QuotientCompanion {
    pub model: FilteredGComplex,
    /// `cell_map[k][i]`: quotient cell hit by cell `i` of degree `k` (indexed from `q_min`).
    pub cell_map: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct VarietyModel {
    pub name: String,
    pub fk: FilteredGComplex,
    /// Pointwise fixed cells per degree (indexed from `q_min`).
    pub fixed_cells: Option<Vec<Vec<usize>>>,
    /// Weight model of `X^G`; derived from `fixed_cells` when absent.
    pub fixed: Option<FilteredComplex>,
    /// Filtered invariant complex `(𝒩_α C)^G`; derived from `fk` when absent.
    pub invariant: Option<FilteredComplex>,
    /// Weight model of the invariant chains, for models that are not compact nonsingular.
    pub invariant_weight: Option<FilteredComplex>,
    pub quotient: Option<QuotientCompanion>,
    pub flags: Flags,
    pub named_chains: BTreeMap<String, (i64, BitVec)>,
}

impl VarietyModel {
    pub fn new(name: impl Into<String>, fk: FilteredGComplex) -> Self {
        VarietyModel {
            name: name.into(),
            fk,
            fixed_cells: None,
            fixed: None,
            invariant: None,
            invariant_weight: None,
            quotient: None,
            flags: Flags::default(),
            named_chains: BTreeMap::new(),
        }
    }

    pub fn complex(&self) -> &GChainComplex {
        &self.fk.base
    }

    /// Top degree carrying cells, or `−1` for the empty model.
    pub fn dimension(&self) -> i64 {
        let c = &self.fk.base.chain;
        c.degrees().rev().find(|&q| c.dim(q) > 0).unwrap_or(-1)
    }

    pub fn default_contract(&self) -> WindowContract {
        WindowContract::for_dimension(self.dimension())
    }

    pub fn is_z2(&self) -> bool {
        self.fk.group().order() == 2
    }

    pub fn chain(&self, name: &str) -> Result<(i64, BitVec)> {
        self.named_chains.get(name).cloned().ok_or_else(|| Error::Parse(format!("no named chain `{name}`")))
    }

    /// Fixed-point model: the supplied companion or the span of the fixed cells
    /// with the restricted filtration.
    pub fn fixed_model(&self) -> Result<FilteredComplex> {
        if let Some(f) = &self.fixed {
            return Ok(f.clone());
        }
        let cells = self.fixed_cells.as_ref().ok_or_else(|| Error::MissingCompanion(format!("{}: fixed cells", self.name)))?;
        fixed_subcomplex(&self.fk, cells)
    }

    /// Invariant companion, or the invariants of the supplied filtration.
    pub fn invariant_model(&self) -> FilteredComplex {
        match &self.invariant {
            Some(f) => f.clone(),
            None => self.fk.invariant_part().filtration,
        }
    }
}

/// Subcomplex spanned by `cells` with `F_α ∩ span(cells)`.
pub fn fixed_subcomplex(fk: &FilteredGComplex, cells: &[Vec<usize>]) -> Result<FilteredComplex> {
    let base = &fk.base;
    let degrees: Vec<i64> = base.chain.degrees().collect();
    if cells.len() != degrees.len() {
        return Err(Error::InvalidComplex(format!("fixed cells given for {} degrees, complex has {}", cells.len(), degrees.len())));
    }
    let mut subs = Vec::new();
    for (i, &q) in degrees.iter().enumerate() {
        let n = base.dim(q);
        for &c in &cells[i] {
            if c >= n {
                return Err(Error::InvalidComplex(format!("fixed cell {c} out of range in degree {q}")));
            }
            for g in 0..base.group.order() {
                let img = base.module(q).action(g).mul_vec(&BitVec::unit(n, c));
                if img != BitVec::unit(n, c) {
                    return Err(Error::InvalidComplex(format!("cell {} of degree {q} is declared fixed but moves", base.label(q, c))));
                }
            }
        }
        subs.push(Subspace::span(n, cells[i].iter().map(|&c| BitVec::unit(n, c))));
    }
    let mut dims = Vec::new();
    let mut boundary = Vec::new();
    for (i, &q) in degrees.iter().enumerate() {
        dims.push(subs[i].dim());
        if i == 0 {
            boundary.push(GF2Matrix::zeros(0, subs[i].dim()));
        } else {
            boundary.push(subs[i].restrict(&base.d(q), &subs[i - 1]).map_err(|_| {
                Error::InvalidComplex(format!("fixed cells in degree {q} have boundary outside the fixed cells"))
            })?);
        }
    }
    let q_min = degrees.first().copied().unwrap_or(0);
    let chain = ChainComplex::new(q_min, dims, boundary)?;
    let filt = (fk.alpha_min()..=fk.alpha_max())
        .map(|a| {
            degrees
                .iter()
                .zip(&subs)
                .map(|(&q, s)| {
                    let inter = fk.f(a, q).intersect(s);
                    Subspace::span(s.dim(), inter.basis().iter().map(|v| s.coords(v).expect("inside the span")))
                })
                .collect()
        })
        .collect();
    FilteredComplex::new(chain, fk.alpha_min(), filt)
}
