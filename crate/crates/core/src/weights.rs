//! Weight spectral sequences (plain and equivariant), the row sequences of the
//! equivariant page 2, and the integer invariants read off them.

use crate::complexes::{canonical_filtration, homology, invariant_subcomplex, FilteredComplex, FilteredGComplex, GChainComplex};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::groups::{group_cohomology, invariants, GModule, Resolution};
use crate::lfunctor::{l_filtration, LComplex, LFiltered, WindowContract};
use crate::model::VarietyModel;
use crate::specseq::{ss_double, Indexing, SpectralSequence, Variant};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    QB,
    BkG,
    Beta,
    BetaGOdd,
    InvariantBeta,
    BPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InvariantReport {
    pub kind: InvariantKind,
    pub index: Vec<i64>,
    pub value: i64,
    pub route: String,
    pub certified_window: (i64, i64),
    /// Whether the input data is flagged as reproducing the Nash-constructible filtration.
    pub nash_faithful: bool,
}

/// Internal page count sufficient for a filtration of the given length to converge.
pub fn default_r_max(fc: &FilteredComplex) -> usize {
    (fc.alpha_max() - fc.alpha_min() + 2).max(2) as usize
}

/// Weight spectral sequence of a filtered complex, displayed with `p' = 2p+q`, `q' = −p`.
pub fn weight_ss(fc: &FilteredComplex, r_max: usize) -> SpectralSequence {
    SpectralSequence::new(fc.clone(), Indexing::Weight, r_max, crate::lfunctor::Certificate::exact(), None)
}

/// `β_q = Σ_p (−1)^p dim Ẽ²_{p,q}`.
pub fn virtual_betti(fc: &FilteredComplex, q: i64) -> i64 {
    let ss = weight_ss(fc, 1);
    alternating_row_sum(&ss, 1, q)
}

/// `Σ_p (−1)^p dim` of row `q` on internal page `r` of a weight-indexed sequence.
fn alternating_row_sum(ss: &SpectralSequence, r: usize, q: i64) -> i64 {
    ss.pages[r]
        .cells
        .iter()
        .filter(|(&(s, _), _)| s == -q)
        .map(|(&(s, n), c)| crate::complexes::sign(s + n) * c.dim() as i64)
        .sum()
}

/// `L` of a weight-filtered G-complex and its spectral sequence.
#[derive(Clone, Debug)]
pub struct EquivariantWeightSS {
    pub lf: LFiltered,
    pub ss: SpectralSequence,
}

pub fn equivariant_weight_ss(fk: &FilteredGComplex, res: Option<Resolution>, contract: WindowContract, r_max: Option<usize>) -> Result<EquivariantWeightSS> {
    let lf = l_filtration(fk, res, contract)?;
    let r_max = r_max.unwrap_or_else(|| default_r_max(&fk.filtration));
    let shift = lf.l.resolution.period.map(|t| (0, t as i64));
    let ss = SpectralSequence::new(lf.filtered.clone(), Indexing::Weight, r_max, lf.l.certificate.clone(), shift);
    Ok(EquivariantWeightSS { lf, ss })
}

impl EquivariantWeightSS {
    pub fn l(&self) -> &LComplex {
        &self.lf.l
    }

    /// Displayed page `r` (`None` for `E^∞`) at `(p', q')`.
    pub fn dim(&self, r: Option<usize>, p: i64, q: i64) -> Result<usize> {
        self.ss.dim(r, p, q)
    }

    /// `[(α, dim Ω_α H_n)]` for a certified (or periodically resolved) degree.
    pub fn omega(&self, n: i64) -> Result<Vec<(i64, usize)>> {
        let m = self.lf.l.certificate.representative(n, self.lf.l.contract.p_min)?;
        Ok(self.ss.abutment.degrees.get(&m).cloned().unwrap_or_default())
    }

    pub fn omega_dim(&self, n: i64, alpha: i64) -> Result<usize> {
        let m = self.lf.l.certificate.representative(n, self.lf.l.contract.p_min)?;
        Ok(self.ss.abutment.dim(m, alpha).unwrap_or(0))
    }

    /// Tot element with `chain` as the image of the first generator in column `col`.
    pub fn chain_element(&self, col: i64, degree: i64, chain: &BitVec) -> Option<BitVec> {
        self.lf.l.chain_element(col, degree, chain)
    }

    /// Certified nonzero cells on pages `≥ 2` lying outside `0 ≤ q ≤ d`, `p + q ≤ d`.
    pub fn boundedness_violations(&self, d: i64) -> Vec<(usize, i64, i64)> {
        let mut out = Vec::new();
        for page in &self.ss.pages[1..] {
            for (&(s, n), c) in &page.cells {
                if c.dim() == 0 || !self.ss.certificate.is_certified(n) {
                    continue;
                }
                let (p, q) = Indexing::Weight.to_display(s, n);
                if q < 0 || q > d || p + q > d {
                    out.push((page.r + 1, p, q));
                }
            }
        }
        out
    }

    /// `Ω_α H_n` read from `E^∞` agrees with the image filtration, for certified `n`.
    pub fn abutment_consistent(&self) -> bool {
        let fc = &self.ss.fc;
        fc.chain.degrees().filter(|&n| self.ss.certificate.is_certified(n)).all(|n| {
            let mut acc = 0;
            (fc.alpha_min()..=fc.alpha_max()).all(|a| {
                acc += self.ss.infinity.dim(a, n);
                self.ss.abutment.dim(n, a) == Some(acc)
            }) && acc == fc.chain.betti(n)
        })
    }
}

/// G-module structure on `Ẽ²_{p,q}` of the plain weight sequence.
pub fn weight_e2_module(fk: &FilteredGComplex, p: i64, q: i64) -> GModule {
    let (s, n) = Indexing::Weight.to_key(p, q);
    let (piece, _) = fk.graded_piece(s);
    homology(&piece, n).module
}

/// `^GẼ²_{p,d} = H^{−p}(G, Ẽ²_{0,d})` across the guaranteed window; vacuous for the empty model.
pub fn top_row_check(fk: &FilteredGComplex, d: i64, contract: WindowContract, res: Option<Resolution>) -> Result<bool> {
    if d < 0 || fk.base.chain.is_empty() {
        return Ok(true);
    }
    let eq = equivariant_weight_ss(fk, res, contract, None)?;
    let m = weight_e2_module(fk, 0, d);
    let (lo, _) = contract.guaranteed_range();
    for p in lo..=d + 1 {
        let want = group_cohomology(&fk.base.group, &m, -p, &eq.lf.l.resolution)?.dim();
        if eq.dim(Some(2), p, d)? != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `R_q[β] = Ẽ¹_{β,q} = F_{−q} C_{β+q} / F_{−q−1} C_{β+q}` as a G-complex in `β`.
pub fn row_complex(fk: &FilteredGComplex, q: i64) -> GChainComplex {
    let (piece, _) = fk.graded_piece(-q);
    piece.shift(-q)
}

/// One row sequence: `^q_I E² = H^{−α}(G, Ẽ²_{β,q})` or `^q_II E¹ = H^{−α}(G, Ẽ¹_{β,q})`,
/// displayed at `(α, β)`.
#[derive(Clone, Debug)]
pub struct RowSS {
    pub q: i64,
    pub variant: Variant,
    pub l: LComplex,
    pub ss: SpectralSequence,
}

pub fn row_ss(fk: &FilteredGComplex, q: i64, variant: Variant, res: Option<Resolution>, contract: WindowContract) -> Result<RowSS> {
    let r = row_complex(fk, q);
    let l = LComplex::new(&r, res, contract)?;
    let r_max = (r.q_max() - r.q_min() + 3).max(3) as usize;
    let ss = ss_double(&l.double, variant, r_max, l.certificate.clone(), l.resolution.period);
    Ok(RowSS { q, variant, l, ss })
}

impl RowSS {
    pub fn dim(&self, r: Option<usize>, alpha: i64, beta: i64) -> Result<usize> {
        self.ss.dim(r, alpha, beta)
    }

    /// `dim H_n(G, Ẽ¹_{*,q})`, which both variants abut to.
    pub fn abutment_dim(&self, n: i64) -> Result<usize> {
        self.l.homology_dim(n)
    }

    /// Both variants abut to row `q` of `^GẼ²`.
    pub fn abutment_matches(&self, eq: &EquivariantWeightSS, lo: i64, hi: i64) -> Result<bool> {
        for n in lo..=hi {
            if self.abutment_dim(n)? != eq.dim(Some(2), n, self.q)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Rows `q` over the support of the filtration, variant II, for `^qB_i` and `B_k^G`.
#[derive(Clone, Debug)]
pub struct RowTable {
    pub rows: BTreeMap<i64, RowSS>,
    pub contract: WindowContract,
    pub nash_faithful: bool,
}

pub fn row_table(fk: &FilteredGComplex, res: Option<Resolution>, contract: WindowContract, nash_faithful: bool) -> Result<RowTable> {
    let mut rows = BTreeMap::new();
    if !fk.base.chain.is_empty() {
        for q in -fk.alpha_max()..=-fk.alpha_min() {
            rows.insert(q, row_ss(fk, q, Variant::II, res.clone(), contract)?);
        }
    }
    Ok(RowTable { rows, contract, nash_faithful })
}

impl RowTable {
    /// `^qB_i = Σ_j (−1)^j dim ^q_II E²_{i,j}`.
    pub fn qb_value(&self, q: i64, i: i64) -> Result<i64> {
        let Some(row) = self.rows.get(&q) else { return Ok(0) };
        if i > 0 {
            return Ok(0);
        }
        let c = row.l.complex.chain.clone();
        let mut total = 0;
        for j in c.degrees() {
            total += crate::complexes::sign(j) * row.dim(Some(2), i, j)? as i64;
        }
        Ok(total)
    }

    /// `B_k^G = Σ_{q+i=k} ^qB_i`.
    pub fn bkg_value(&self, k: i64) -> Result<i64> {
        let mut total = 0;
        for &q in self.rows.keys() {
            total += self.qb_value(q, k - q)?;
        }
        Ok(total)
    }

    fn report(&self, kind: InvariantKind, index: Vec<i64>, value: i64) -> InvariantReport {
        InvariantReport {
            kind,
            index,
            value,
            route: "row-sequences".into(),
            certified_window: self.contract.guaranteed_range(),
            nash_faithful: self.nash_faithful,
        }
    }

    pub fn qb(&self, q: i64, i: i64) -> Result<InvariantReport> {
        Ok(self.report(InvariantKind::QB, vec![q, i], self.qb_value(q, i)?))
    }

    pub fn bkg(&self, k: i64) -> Result<InvariantReport> {
        Ok(self.report(InvariantKind::BkG, vec![k], self.bkg_value(k)?))
    }
}

pub fn beta_report(fc: &FilteredComplex, q: i64) -> InvariantReport {
    InvariantReport {
        kind: InvariantKind::Beta,
        index: vec![q],
        value: virtual_betti(fc, q),
        route: "weight-page".into(),
        certified_window: (i64::MIN, i64::MAX),
        nash_faithful: false,
    }
}

/// `β^G_q = Σ_p (−1)^p dim ^GẼ²_{p,q}` for odd-order groups.
pub fn beta_g_odd(fk: &FilteredGComplex, q: i64) -> Result<InvariantReport> {
    let g = fk.group();
    if g.order().is_multiple_of(2) {
        return Err(Error::Unsupported(format!("β^G as a page-2 row sum needs odd order; |G| = {}", g.order())));
    }
    let contract = WindowContract::new(0, 0);
    let eq = equivariant_weight_ss(fk, None, contract, Some(1))?;
    Ok(InvariantReport {
        kind: InvariantKind::BetaGOdd,
        index: vec![q],
        value: alternating_row_sum(&eq.ss, 1, q),
        route: "odd-order".into(),
        certified_window: (i64::MIN, i64::MAX),
        nash_faithful: false,
    })
}

/// Weight model of the invariant chains: canonical filtration on compact
/// nonsingular models, or the supplied companion.
pub fn invariant_weight_model(v: &VarietyModel) -> Result<FilteredComplex> {
    if !v.is_z2() {
        return Err(Error::Unsupported("invariant weight model is only provided for G = Z/2".into()));
    }
    if let Some(w) = &v.invariant_weight {
        return Ok(w.clone());
    }
    if v.flags.compact_nonsingular() {
        return Ok(canonical_filtration(&invariant_subcomplex(v.complex())).filtration);
    }
    Err(Error::MissingCompanion(format!("{}: invariant weight model (or compact nonsingular flag)", v.name)))
}

/// `_Gβ_q = Σ_p (−1)^p dim _GẼ²_{p,q}`.
pub fn invariant_beta(v: &VarietyModel, q: i64) -> Result<InvariantReport> {
    let w = invariant_weight_model(v)?;
    Ok(InvariantReport {
        kind: InvariantKind::InvariantBeta,
        index: vec![q],
        value: virtual_betti(&w, q),
        route: "invariant-weight-page".into(),
        certified_window: (i64::MIN, i64::MAX),
        nash_faithful: v.flags.nash_faithful,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Relation {
    pub index: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

/// `dim H_q(X;G)` against `_Gβ_q + Σ_{i≥q+1} β_i(X^G)` on compact nonsingular Z/2 models.
pub fn invariant_betti_relation(v: &VarietyModel, q: i64, contract: WindowContract) -> Result<Relation> {
    if !v.flags.compact_nonsingular() {
        return Err(Error::MissingCompanion(format!("{}: relation needs the compact nonsingular flag", v.name)));
    }
    let fixed = v.fixed_model()?;
    let lhs = LComplex::new(v.complex(), None, contract)?.homology_dim(q)? as i64;
    let mut rhs = invariant_beta(v, q)?.value;
    for i in q + 1..=fixed.chain.q_max().max(q) {
        rhs += virtual_betti(&fixed, i);
    }
    Ok(Relation { index: q, lhs, rhs, equal: lhs == rhs })
}

/// `dim (ker ∂_k)^G / ∂((C_{k+1})^G) + Σ_{i≥k+1} dim H_i(X^G)`.
pub fn invariant_cycle_formula(v: &VarietyModel, k: i64) -> Result<usize> {
    let c = v.complex();
    let fixed = v.fixed_model()?;
    let inv_k = invariants(&c.group, &c.module(k));
    let z = c.chain.cycles(k).intersect(&inv_k);
    let b = invariants(&c.group, &c.module(k + 1)).map(&c.d(k + 1));
    let mut total = z.dim() - b.dim();
    debug_assert!(z.contains_subspace(&b));
    for i in k + 1..=fixed.chain.q_max().max(k) {
        total += fixed.chain.betti(i);
    }
    Ok(total)
}

/// Equivariant homology against the invariant-cycle formula for Z/2 with a fixed-point model.
pub fn fixed_point_homology_relation(v: &VarietyModel, k: i64, l: &LComplex) -> Result<Relation> {
    if !v.is_z2() {
        return Err(Error::Unsupported("the invariant-cycle formula is stated for G = Z/2".into()));
    }
    let lhs = l.homology_dim(k)? as i64;
    let rhs = invariant_cycle_formula(v, k)? as i64;
    Ok(Relation { index: k, lhs, rhs, equal: lhs == rhs })
}

/// Cellwise `^GẼ²_{p,q} = (Ẽ²_{p,q})^G` for odd-order groups, on all cells of the model.
pub fn odd_order_collapse_holds(fk: &FilteredGComplex) -> Result<bool> {
    let eq = equivariant_weight_ss(fk, None, WindowContract::new(0, 0), Some(1))?;
    for a in fk.alpha_min()..=fk.alpha_max() {
        for n in fk.base.chain.degrees() {
            let (p, q) = Indexing::Weight.to_display(a, n);
            let m = weight_e2_module(fk, p, q);
            let fixed = invariants(&fk.base.group, &m);
            if eq.ss.pages[1].dim(a, n) != fixed.dim() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
