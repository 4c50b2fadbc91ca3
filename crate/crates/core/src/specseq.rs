//! Spectral sequences of bounded filtered complexes, with explicit
//! representatives so differentials can be evaluated on named classes.
//!
//! Pages are stored on internal keys `(s, n)`: filtration index and total
//! degree. An [`Indexing`] turns keys into the displayed `(p, q)`.

use crate::complexes::FilteredComplex;
use crate::error::{Error, Result};
use crate::gf2::{preimage, subquotient, BitVec, GF2Matrix, Subquotient, Subspace};
use crate::lfunctor::{Certificate, LComplex};
use std::collections::BTreeMap;

/// How internal keys are displayed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Indexing {
    /// `(p, q) = (s, n − s)`, `d^r : (p,q) → (p−r, q+r−1)`.
    Raw,
    /// Row filtration of a double complex: `(p, q) = (n − s, s)`, filtration by `q`.
    Rows,
    /// Weight reindexing `p' = 2p + q`, `q' = −p`, `r' = r + 1` applied to `Raw`.
    Weight,
}

impl Indexing {
    pub fn to_display(self, s: i64, n: i64) -> (i64, i64) {
        match self {
            Indexing::Raw => (s, n - s),
            Indexing::Rows => (n - s, s),
            Indexing::Weight => (s + n, -s),
        }
    }

    pub fn to_key(self, p: i64, q: i64) -> (i64, i64) {
        match self {
            Indexing::Raw => (p, p + q),
            Indexing::Rows => (q, p + q),
            Indexing::Weight => (-q, p + q),
        }
    }

    /// Displayed page number of internal page `r`.
    pub fn page_offset(self) -> usize {
        match self {
            Indexing::Weight => 1,
            _ => 0,
        }
    }
}

/// `(p,q) = (−1, 2)` in raw coordinates becomes `(0, 1)`.
pub fn reindex_weight(p: i64, q: i64) -> (i64, i64) {
    (2 * p + q, -p)
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub z: Subspace,
    pub b: Subspace,
    pub quotient: Subquotient,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

#[derive(Clone, Debug)]
pub struct Page {
    /// Internal page number.
    pub r: usize,
    pub cells: BTreeMap<(i64, i64), Cell>,
    /// `d^r` out of each cell, in quotient coordinates.
    pub d: BTreeMap<(i64, i64), GF2Matrix>,
}

impl Page {
    pub fn dim(&self, s: i64, n: i64) -> usize {
        self.cells.get(&(s, n)).map_or(0, |c| c.dim())
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CellReport {
    pub r: usize,
    pub p: i64,
    pub q: i64,
    pub dim: usize,
    pub stabilized: bool,
    pub generators: Vec<String>,
}

/// Increasing filtration on `H_n`: `Ω_s = image of H_n(F_s)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AbutmentFiltration {
    /// `(n, [(s, dim Ω_s H_n)])`.
    pub degrees: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl AbutmentFiltration {
    pub fn dim(&self, n: i64, s: i64) -> Option<usize> {
        let levels = self.degrees.get(&n)?;
        let first = levels.first()?.0;
        if s < first {
            return Some(0);
        }
        levels.iter().rev().find(|(t, _)| *t <= s).map(|(_, d)| *d)
    }
}

/// Spectral sequence of a filtered complex with a certification rule for truncated inputs.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub fc: FilteredComplex,
    pub indexing: Indexing,
    pub pages: Vec<Page>,
    pub infinity: Page,
    pub certificate: Certificate,
    /// Key shift per resolution period, used for periodic extension.
    pub period_shift: Option<(i64, i64)>,
    pub abutment: AbutmentFiltration,
}

fn z_space(fc: &FilteredComplex, r: i64, s: i64, n: i64) -> Subspace {
    let f = fc.f(s, n);
    if r < 0 {
        return f;
    }
    let d = fc.chain.d(n);
    let pre = preimage(&d, &fc.f(s - r, n - 1)).expect("dimensions agree");
    f.intersect(&pre)
}

fn cell(fc: &FilteredComplex, r: i64, s: i64, n: i64) -> Cell {
    let z = z_space(fc, r, s, n);
    let inner = z_space(fc, r - 1, s - 1, n);
    let bnd = z_space(fc, r - 1, s + r - 1, n + 1).map(&fc.chain.d(n + 1));
    let b = inner.sum(&bnd);
    let quotient = subquotient(&z, &b).expect("B^r ⊆ Z^r");
    Cell { z, b, quotient }
}

fn infinity_cell(fc: &FilteredComplex, s: i64, n: i64) -> Cell {
    let ker = fc.chain.cycles(n);
    let im = fc.chain.boundaries(n);
    let z = fc.f(s, n).intersect(&ker);
    let b = fc.f(s - 1, n).intersect(&ker).sum(&fc.f(s, n).intersect(&im));
    let quotient = subquotient(&z, &b).expect("B^∞ ⊆ Z^∞");
    Cell { z, b, quotient }
}

fn differential(fc: &FilteredComplex, page: &BTreeMap<(i64, i64), Cell>, r: i64, s: i64, n: i64) -> GF2Matrix {
    let src = &page[&(s, n)];
    let tgt = page.get(&(s - r, n - 1));
    let rows = tgt.map_or(0, |c| c.dim());
    let mut m = GF2Matrix::zeros(rows, src.dim());
    if let Some(t) = tgt {
        let d = fc.chain.d(n);
        for (j, x) in src.quotient.representatives().iter().enumerate() {
            let c = t.quotient.class_of(&d.mul_vec(x)).expect("∂Z^r_s ⊆ Z^r_{s−r}");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
    }
    m
}

impl SpectralSequence {
    /// Pages `0..=r_max` (internal numbering) and `E^∞`.
    pub fn new(fc: FilteredComplex, indexing: Indexing, r_max: usize, certificate: Certificate, period_shift: Option<(i64, i64)>) -> Self {
        let (a_lo, a_hi) = (fc.alpha_min(), fc.alpha_max());
        let degrees: Vec<i64> = fc.chain.degrees().collect();
        let mut pages = Vec::new();
        for r in 0..=r_max {
            let mut cells = BTreeMap::new();
            for s in a_lo..=a_hi {
                for &n in &degrees {
                    cells.insert((s, n), cell(&fc, r as i64, s, n));
                }
            }
            let mut d = BTreeMap::new();
            for &(s, n) in cells.keys() {
                d.insert((s, n), differential(&fc, &cells, r as i64, s, n));
            }
            pages.push(Page { r, cells, d });
        }
        let mut cells = BTreeMap::new();
        for s in a_lo..=a_hi {
            for &n in &degrees {
                cells.insert((s, n), infinity_cell(&fc, s, n));
            }
        }
        let infinity = Page { r: usize::MAX, cells, d: BTreeMap::new() };
        let abutment = abutment_filtration(&fc);
        SpectralSequence { fc, indexing, pages, infinity, certificate, period_shift, abutment }
    }

    pub fn r_max(&self) -> usize {
        self.pages.len() - 1
    }

    fn internal_page(&self, displayed: usize) -> Result<usize> {
        let off = self.indexing.page_offset();
        let r = displayed.checked_sub(off).ok_or_else(|| Error::Unsupported(format!("page {displayed} precedes the first page")))?;
        if r > self.r_max() {
            return Err(Error::Unsupported(format!("page {displayed} not computed (last is {})", self.r_max() + off)));
        }
        Ok(r)
    }

    /// Key at which a displayed cell is actually evaluated.
    pub fn resolve(&self, p: i64, q: i64) -> Result<(i64, i64)> {
        let (s, n) = self.indexing.to_key(p, q);
        if self.certificate.is_certified(n) {
            return Ok((s, n));
        }
        let Some((ds, dn)) = self.period_shift else {
            let m = self.certificate.min_degree.unwrap_or(n);
            return Err(Error::WindowTooSmall { requested: n, certified_min: m, suggested_p_min: n - 1 });
        };
        let n2 = self.certificate.representative(n, n)?;
        let k = (n2 - n) / dn;
        Ok((s + k * ds, n2))
    }

    /// `dim E^r_{p,q}` in displayed coordinates; `r = None` means `E^∞`.
    pub fn dim(&self, r: Option<usize>, p: i64, q: i64) -> Result<usize> {
        let key = self.resolve(p, q)?;
        Ok(match r {
            Some(r) => self.pages[self.internal_page(r)?].dim(key.0, key.1),
            None => self.infinity.dim(key.0, key.1),
        })
    }

    /// Whether `d^r` out of a displayed cell is zero.
    pub fn differential_is_zero(&self, r: usize, p: i64, q: i64) -> Result<bool> {
        let key = self.resolve(p, q)?;
        let page = &self.pages[self.internal_page(r)?];
        Ok(page.d.get(&key).is_none_or(|m| m.is_zero()))
    }

    pub fn infinity_dim_key(&self, s: i64, n: i64) -> usize {
        self.infinity.dim(s, n)
    }

    /// Certified internal keys.
    pub fn certified_keys(&self) -> Vec<(i64, i64)> {
        self.infinity.cells.keys().copied().filter(|&(_, n)| self.certificate.is_certified(n)).collect()
    }

    /// Least displayed page from which every certified cell equals `E^∞`.
    pub fn converged_at(&self) -> Option<usize> {
        let keys = self.certified_keys();
        (0..self.pages.len())
            .find(|&r| keys.iter().all(|&(s, n)| self.pages[r].dim(s, n) == self.infinity.dim(s, n)))
            .map(|r| r + self.indexing.page_offset())
    }

    /// Class in `E^r_{s}(n)` of an element `v ∈ F_s` modulo `F_{s−1}`, if it survives to page `r`.
    pub fn class_from_leading(&self, r_internal: usize, s: i64, n: i64, v: &BitVec) -> Option<BitVec> {
        let fc = &self.fc;
        if !fc.f(s, n).contains(v) {
            return None;
        }
        let r = r_internal as i64;
        let target = fc.f(s - r, n - 1);
        let d = fc.chain.d(n);
        let lower = fc.f(s - 1, n);
        let mut m = GF2Matrix::zeros(d.rows(), lower.dim());
        for (j, b) in lower.basis().iter().enumerate() {
            for i in target.reduce(&d.mul_vec(b)).ones() {
                m.set(i, j, true);
            }
        }
        let rhs = target.reduce(&d.mul_vec(v));
        let w = m.solve(&rhs)?;
        let z = v.xor(&lower.vector(&w));
        self.pages[r_internal].cells.get(&(s, n))?.quotient.class_of(&z)
    }

    /// Applies `d^r` to quotient coordinates at an internal key.
    pub fn apply_d(&self, r_internal: usize, s: i64, n: i64, x: &BitVec) -> BitVec {
        self.pages[r_internal].d[&(s, n)].mul_vec(x)
    }

    /// Displayed cells of a page for dumping.
    pub fn report(&self, r: Option<usize>, describe: &dyn Fn(i64, &BitVec) -> String) -> Vec<CellReport> {
        let page = match r {
            Some(r) => match self.internal_page(r) {
                Ok(i) => &self.pages[i],
                Err(_) => return Vec::new(),
            },
            None => &self.infinity,
        };
        let mut out = Vec::new();
        for (&(s, n), c) in &page.cells {
            if !self.certificate.is_certified(n) || c.dim() == 0 {
                continue;
            }
            let (p, q) = self.indexing.to_display(s, n);
            out.push(CellReport {
                r: r.unwrap_or(usize::MAX),
                p,
                q,
                dim: c.dim(),
                stabilized: c.dim() == self.infinity.dim(s, n),
                generators: c.quotient.representatives().iter().map(|v| describe(n, v)).collect(),
            });
        }
        out.sort_by_key(|c| (std::cmp::Reverse(c.q), std::cmp::Reverse(c.p)));
        out
    }

    /// `Σ_{s} dim E^∞_{s}(n)`, for comparison with `dim H_n`.
    pub fn infinity_total(&self, n: i64) -> usize {
        self.infinity.cells.iter().filter(|(&(_, m), _)| m == n).map(|(_, c)| c.dim()).sum()
    }

    /// `d^r ∘ d^r = 0` on every computed page.
    pub fn check_d_squared(&self) -> Result<()> {
        for page in &self.pages {
            let r = page.r as i64;
            for (&(s, n), m) in &page.d {
                if let Some(next) = page.d.get(&(s - r, n - 1)) {
                    if next.rows() > 0 && m.cols() > 0 && !next.mul(m).is_zero() {
                        return Err(Error::InvalidComplex(format!("d^{r} ∘ d^{r} ≠ 0 at key ({s},{n})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Page `r+1` dims equal `ker d^r / im d^r` cellwise.
    pub fn check_page_transitions(&self) -> Result<()> {
        for w in self.pages.windows(2) {
            let (cur, next) = (&w[0], &w[1]);
            let r = cur.r as i64;
            for &(s, n) in cur.cells.keys() {
                let out = &cur.d[&(s, n)];
                let ker = cur.dim(s, n) - out.rank();
                let im = cur.d.get(&(s + r, n + 1)).map_or(0, |m| m.rank());
                if ker - im != next.dim(s, n) {
                    return Err(Error::InvalidComplex(format!("page {} at ({s},{n}) is not the homology of page {}", r + 1, r)));
                }
            }
        }
        Ok(())
    }
}

fn abutment_filtration(fc: &FilteredComplex) -> AbutmentFiltration {
    let mut degrees = BTreeMap::new();
    for n in fc.chain.degrees() {
        let ker = fc.chain.cycles(n);
        let im = fc.chain.boundaries(n);
        let levels = (fc.alpha_min()..=fc.alpha_max())
            .map(|s| {
                let z = fc.f(s, n).intersect(&ker).sum(&im);
                (s, z.dim() - im.dim())
            })
            .collect();
        degrees.insert(n, levels);
    }
    AbutmentFiltration { degrees }
}

pub fn ss_filtered(fc: FilteredComplex, r_max: usize) -> SpectralSequence {
    SpectralSequence::new(fc, Indexing::Raw, r_max, Certificate::exact(), None)
}

/// Column (`I`) and row (`II`) filtration sequences of a double complex.
pub fn ss_double(d: &crate::lfunctor::DoubleComplex, variant: Variant, r_max: usize, certificate: Certificate, period: Option<usize>) -> SpectralSequence {
    let tot = d.total_complex();
    match variant {
        Variant::I => {
            let fc = tot.column_filtration(d.p_min, d.p_max);
            let shift = period.map(|t| (t as i64, t as i64));
            SpectralSequence::new(fc, Indexing::Raw, r_max, certificate, shift)
        }
        Variant::II => {
            let fc = tot.row_filtration(d.q_min, d.q_max);
            let shift = period.map(|t| (0, t as i64));
            SpectralSequence::new(fc, Indexing::Rows, r_max, certificate, shift)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Variant {
    I,
    II,
}

/// Column-filtration sequence of `L(K)`: `E²_{p,q} = H^{−p}(G, H_q(K))`.
pub fn hochschild_serre(l: &LComplex, r_max: usize) -> SpectralSequence {
    ss_double(&l.double, Variant::I, r_max, l.certificate.clone(), l.resolution.period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::ChainComplex;

    #[test]
    fn reindex_arithmetic() {
        assert_eq!(reindex_weight(-1, 2), (0, 1));
        for (p, q) in [(-3, 5), (0, 0), (2, -1)] {
            let (s, n) = Indexing::Weight.to_key(reindex_weight(p, q).0, reindex_weight(p, q).1);
            assert_eq!((s, n - s), (p, q));
        }
    }

    #[test]
    fn one_step_filtration_collapses_to_homology() {
        let d1 = GF2Matrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        let chain = ChainComplex::new(0, vec![2, 2], vec![GF2Matrix::zeros(0, 2), d1]).unwrap();
        let ss = ss_filtered(FilteredComplex::trivial(chain.clone(), 0), 3);
        for n in 0..=1 {
            assert_eq!(ss.pages[1].dim(0, n), chain.betti(n));
        }
        assert_eq!(ss.converged_at(), Some(1));
    }
}
