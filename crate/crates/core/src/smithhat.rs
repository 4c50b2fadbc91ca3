//! Smith exact sequences for involutions, the `^kĈ` double complex of group
//! cohomology of graded pieces, and the closed-form `B'` route.

use crate::complexes::{sign, FilteredComplex, FilteredGComplex};
use crate::error::{Error, Result};
use crate::gf2::{preimage, BitVec, GF2Matrix, Subspace};
use crate::groups::{default_resolution, group_cohomology, Cohomology, HomG, Resolution};
use crate::lfunctor::{Certificate, DoubleComplex, LComplex};
use crate::model::VarietyModel;
use crate::specseq::{ss_double, SpectralSequence, Variant};
use crate::weights::{virtual_betti, InvariantKind, InvariantReport};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

fn require_z2(v: &VarietyModel) -> Result<()> {
    if v.is_z2() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{}: needs G = Z/2, |G| = {}", v.name, v.fk.group().order())))
    }
}

/// `1 + σ` on `C_q`.
fn one_plus_sigma(v: &VarietyModel, q: i64) -> GF2Matrix {
    let c = v.complex();
    let g = c.group.generators()[0];
    c.module(q).action(g).add(&GF2Matrix::identity(c.dim(q)))
}

fn fixed_span(v: &VarietyModel, q: i64) -> Result<Subspace> {
    let cells = v.fixed_cells.as_ref().ok_or_else(|| Error::MissingCompanion(format!("{}: fixed cells", v.name)))?;
    let c = v.complex();
    let n = c.dim(q);
    let row = (q - c.q_min()).try_into().ok().and_then(|i: usize| cells.get(i)).cloned().unwrap_or_default();
    Ok(Subspace::span(n, row.iter().map(|&i| BitVec::unit(n, i))))
}

/// `T^{α+1}_q` and `𝒩_αC_q(X^G)` for every chain degree.
#[derive(Clone, Debug)]
pub struct SmithLayer {
    pub alpha: i64,
    pub t_next: BTreeMap<i64, Subspace>,
    pub fixed_part: BTreeMap<i64, Subspace>,
}

pub fn smith_layer(v: &VarietyModel, alpha: i64) -> Result<SmithLayer> {
    require_z2(v)?;
    let mut t_next = BTreeMap::new();
    let mut fixed_part = BTreeMap::new();
    for q in v.complex().chain.degrees() {
        let pre = preimage(&one_plus_sigma(v, q), &v.fk.f(alpha, q))?;
        t_next.insert(q, pre.intersect(&v.fk.f(alpha + 1, q)));
        fixed_part.insert(q, v.fk.f(alpha, q).intersect(&fixed_span(v, q)?));
    }
    Ok(SmithLayer { alpha, t_next, fixed_part })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub restriction: BitVec,
    pub c_prime: BitVec,
}

fn reversed(v: &BitVec) -> BitVec {
    let n = v.len();
    BitVec::from_indices(n, &v.ones().iter().map(|&i| n - 1 - i).collect::<Vec<_>>())
}

/// `c = c|_{X^G} + (1+σ)c'` with `c' ∈ 𝒩_{α+1}C_k`. Among the solutions the one
/// supported on the lowest-indexed cells is returned.
pub fn smith_decompose(v: &VarietyModel, c: &BitVec, alpha: i64, k: i64) -> Result<SmithDecomposition> {
    require_z2(v)?;
    let op = one_plus_sigma(v, k);
    let cx = v.complex();
    if !op.mul_vec(c).is_zero() {
        return Err(Error::InvalidModule(format!("{} is not invariant", cx.describe(k, c))));
    }
    if !v.fk.f(alpha, k).contains(c) {
        return Err(Error::ContainmentViolation { context: format!("chain outside 𝒩_{alpha}C_{k}"), witness: c.ones() });
    }
    let fixed = fixed_span(v, k)?;
    let mut restriction = BitVec::zeros(c.len());
    for i in c.ones() {
        if fixed.contains(&BitVec::unit(c.len(), i)) {
            restriction.set(i, true);
        }
    }
    let violation = |w: &BitVec| Error::SmithViolation { alpha, degree: k, witness: cx.describe(k, w) };
    if !v.fk.f(alpha, k).contains(&restriction) {
        return Err(violation(&restriction));
    }
    let rest = c.xor(&restriction);
    let upper = v.fk.f(alpha + 1, k);
    let basis = upper.basis_matrix();
    let m = op.mul(&basis);
    let w = m.solve(&rest).ok_or_else(|| violation(c))?;
    let sol = basis.mul_vec(&w);
    let ker = Subspace::span(c.len(), m.kernel().basis().iter().map(|x| reversed(&basis.mul_vec(x))));
    let c_prime = reversed(&ker.reduce(&reversed(&sol)));
    debug_assert_eq!(restriction.xor(&op.mul_vec(&c_prime)), *c);
    Ok(SmithDecomposition { restriction, c_prime })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SmithRanks {
    pub degree: i64,
    pub fixed: usize,
    pub orbit: usize,
    pub sum: usize,
    pub middle: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SmithExactness {
    pub alpha: i64,
    pub exact: bool,
    pub failing_degree: Option<i64>,
    pub ranks: Vec<SmithRanks>,
}

/// Rank check of `0 → 𝒩_α(X^G) ⊕ (1+σ)T^{α+1} → 𝒩_α → (1+σ)𝒩_α → 0` in every degree.
pub fn smith_exactness(v: &VarietyModel, alpha: i64) -> Result<SmithExactness> {
    let layer = smith_layer(v, alpha)?;
    let mut ranks = Vec::new();
    let mut failing_degree = None;
    for q in v.complex().chain.degrees() {
        let op = one_plus_sigma(v, q);
        let n_alpha = v.fk.f(alpha, q);
        let a = &layer.fixed_part[&q];
        let b = layer.t_next[&q].map(&op);
        let sum = a.sum(&b);
        let right = n_alpha.map(&op);
        let r = SmithRanks { degree: q, fixed: a.dim(), orbit: b.dim(), sum: sum.dim(), middle: n_alpha.dim(), right: right.dim() };
        let ok = r.sum == r.fixed + r.orbit && r.middle == r.sum + r.right && n_alpha.contains_subspace(&sum);
        if !ok && failing_degree.is_none() {
            failing_degree = Some(q);
        }
        ranks.push(r);
    }
    Ok(SmithExactness { alpha, exact: failing_degree.is_none(), failing_degree, ranks })
}

/// First `(α, degree)` where the Smith sequence fails over the filtration range.
pub fn smith_first_failure(v: &VarietyModel) -> Result<Option<(i64, i64)>> {
    for a in v.fk.alpha_min()..=v.fk.alpha_max() {
        let e = smith_exactness(v, a)?;
        if let Some(q) = e.failing_degree {
            return Ok(Some((a, q)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct QuotientCheck {
    pub iso: bool,
    /// First `(α, degree)` where the comparison fails.
    pub failing: Option<(i64, i64)>,
    pub detail: Option<String>,
}

/// `(𝒩_αC_k)^G → 𝒩_αC_k(X/G)`, orbit sum to quotient cell, bijective for all `(α, k)`.
pub fn quotient_comparison(v: &VarietyModel) -> Result<QuotientCheck> {
    let qc = v.quotient.as_ref().ok_or_else(|| Error::MissingCompanion(format!("{}: quotient model", v.name)))?;
    let c = v.complex();
    let g = &c.group;
    for q in c.chain.degrees() {
        let m = c.module(q);
        for i in 0..c.dim(q) {
            let e = BitVec::unit(c.dim(q), i);
            if (0..g.order()).any(|h| h != g.identity() && m.action(h).mul_vec(&e) == e) {
                return Err(Error::Unsupported(format!("{}: cell {} has a nontrivial stabilizer", v.name, c.label(q, i))));
            }
        }
    }
    let qk = &qc.model.base;
    // Orbit representative (lowest index) to its quotient cell.
    let transfer = |q: i64| -> GF2Matrix {
        let m = c.module(q);
        let n = c.dim(q);
        let row = &qc.cell_map[(q - c.q_min()) as usize];
        let mut t = GF2Matrix::zeros(qk.dim(q), n);
        for (i, &target) in row.iter().enumerate().take(n) {
            let e = BitVec::unit(n, i);
            let rep = (0..g.order()).filter_map(|h| m.action(h).mul_vec(&e).lowest()).min().unwrap();
            if rep == i {
                t.set(target, i, true);
            }
        }
        t
    };
    let fail = |a: i64, q: i64, d: String| Ok(QuotientCheck { iso: false, failing: Some((a, q)), detail: Some(d) });
    let inv = v.fk.invariant_part();
    let vecs = |q: i64, s: &Subspace| -> Vec<BitVec> {
        let inc = crate::groups::invariants(g, &c.module(q)).basis_matrix();
        s.basis().iter().map(|x| inc.mul_vec(x)).collect()
    };
    for q in c.chain.degrees() {
        let t = transfer(q);
        if q > c.q_min() {
            let tl = transfer(q - 1);
            for x in vecs(q, &Subspace::full(inv.base.dim(q))) {
                if tl.mul_vec(&c.d(q).mul_vec(&x)) != qk.d(q).mul_vec(&t.mul_vec(&x)) {
                    return fail(v.fk.alpha_max(), q, format!("transfer does not commute with ∂ on {}", c.describe(q, &x)));
                }
            }
        }
        let lo = v.fk.alpha_min().min(qc.model.alpha_min());
        let hi = v.fk.alpha_max().max(qc.model.alpha_max());
        for a in lo..=hi {
            let src = vecs(q, &inv.f(a, q));
            let img = Subspace::span(qk.dim(q), src.iter().map(|x| t.mul_vec(x)));
            if img.dim() != src.len() {
                return fail(a, q, "transfer is not injective".into());
            }
            if img != qc.model.f(a, q) {
                return fail(a, q, format!("image has dim {}, quotient filtration has dim {}", img.dim(), qc.model.f(a, q).dim()));
            }
        }
    }
    Ok(QuotientCheck { iso: true, failing: None, detail: None })
}

/// One entry `H^{−k−α}(G, Gr_α K_β)` with the data needed to lift cocycles.
#[derive(Clone, Debug)]
pub struct HatEntry {
    pub alpha: i64,
    pub beta: i64,
    pub cohomology: Cohomology,
}

/// `^kĈ_{α,β}` placed at `(p,q) = (α,β)`: `d_h = d0` connecting maps, `d_v = d1` induced by `∂`.
#[derive(Clone, Debug)]
pub struct HatDoubleComplex {
    pub k: i64,
    pub dc: DoubleComplex,
    pub entries: BTreeMap<(i64, i64), HatEntry>,
}

impl HatDoubleComplex {
    /// `Σ (−1)^{α+β} dim ^kĈ_{α,β}`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dc.cells().map(|(p, q)| sign(p + q) * self.dc.dim(p, q) as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dc.cells().all(|(p, q)| self.dc.dim(p, q) == 0)
    }
}

/// Resolution depth needed by [`build_hat_c`].
pub fn hat_depth(k: i64, fk: &FilteredGComplex) -> usize {
    (-k - fk.alpha_min() + 2).max(1) as usize
}

pub fn build_hat_c(k: i64, fk: &FilteredGComplex, res: Option<Resolution>) -> Result<HatDoubleComplex> {
    build_hat_c_inner(k, fk, res, None)
}

/// Same complex with `d0` computed from random cocycle representatives and random lifts.
pub fn build_hat_c_randomized(k: i64, fk: &FilteredGComplex, res: Option<Resolution>, seed: u64) -> Result<HatDoubleComplex> {
    build_hat_c_inner(k, fk, res, Some(seed))
}

fn random_in(rng: &mut StdRng, s: &Subspace) -> BitVec {
    let mut v = BitVec::zeros(s.ambient_dim());
    for b in s.basis() {
        if rng.gen::<bool>() {
            v.xor_assign(b);
        }
    }
    v
}

fn build_hat_c_inner(k: i64, fk: &FilteredGComplex, res: Option<Resolution>, seed: Option<u64>) -> Result<HatDoubleComplex> {
    let group = fk.group();
    let depth = hat_depth(k, fk);
    let res = match res {
        Some(r) => {
            r.require_depth(depth)?;
            r
        }
        None => default_resolution(group, depth)?,
    };
    let mut rng = seed.map(StdRng::seed_from_u64);
    let chain = &fk.base.chain;
    let (a_lo, a_hi) = (fk.alpha_min(), fk.alpha_max());
    let (b_lo, b_hi) = if chain.is_empty() { (0, -1) } else { (chain.q_min(), chain.q_max()) };
    let mut dc = DoubleComplex::zeros(a_lo, a_hi, b_lo, b_hi);
    let pieces: BTreeMap<i64, _> = (a_lo - 1..=a_hi).map(|a| (a, fk.graded_piece(a))).collect();
    let mut entries = BTreeMap::new();
    for a in a_lo..=a_hi {
        for b in b_lo..=b_hi {
            let m = pieces[&a].0.module(b);
            let coh = group_cohomology(group, &m, -k - a, &res)?;
            dc.set_dim(a, b, coh.dim());
            entries.insert((a, b), HatEntry { alpha: a, beta: b, cohomology: coh });
        }
    }
    for a in a_lo..=a_hi {
        let n = -k - a;
        if n < 0 {
            continue;
        }
        let nu = n as usize;
        let fdim = res.module(nu).dim();
        let (piece, sqs) = &pieces[&a];
        for b in b_lo..=b_hi {
            let src = &entries[&(a, b)].cohomology;
            let (Some(hom), Some(classes)) = (&src.hom, &src.classes) else { continue };
            if classes.dim() == 0 {
                continue;
            }
            let bi = (b - b_lo) as usize;
            // d1: postcompose with the induced boundary.
            if b > b_lo {
                let tgt = &entries[&(a, b - 1)].cohomology;
                let (th, tc) = (tgt.hom.as_ref().unwrap(), tgt.classes.as_ref().unwrap());
                let d = piece.d(b);
                let mut m = GF2Matrix::zeros(tc.dim(), classes.dim());
                for j in 0..classes.dim() {
                    let phi = hom.space.vector(&classes.representative(&BitVec::unit(classes.dim(), j)));
                    let out = HomG::postcompose_vec(&phi, &d, fdim);
                    let coords = th.space.coords(&out).ok_or_else(|| Error::NotChainMap("d1 leaves the equivariant maps".into()))?;
                    let cls = tc.class_of(&coords).ok_or_else(|| Error::NotChainMap("d1 image is not a cocycle".into()))?;
                    for i in cls.ones() {
                        m.set(i, j, true);
                    }
                }
                dc.set_v(a, b, m);
            }
            // d0: lift through F_α K_β, precompose with Δ_{n+1}, project to Gr_{α−1}.
            if a > a_lo {
                let tgt = &entries[&(a - 1, b)].cohomology;
                let (th, tc) = (tgt.hom.as_ref().unwrap(), tgt.classes.as_ref().unwrap());
                let f_a = fk.f(a, b);
                let module_fa = fk.base.module(b).restrict(&f_a)?;
                let hom_fa = HomG::new(group, &res, nu, &module_fa);
                let basis = f_a.basis_matrix();
                let mut pi = GF2Matrix::zeros(sqs[bi].dim(), f_a.dim());
                for (j, v) in f_a.basis().iter().enumerate() {
                    for i in sqs[bi].class_of(v).expect("F_α is the numerator").ones() {
                        pi.set(i, j, true);
                    }
                }
                let post = hom_fa.postcompose_matrix(&pi, hom)?;
                let lower_sq = &pieces[&(a - 1)].1[bi];
                let delta = res.map(nu + 1);
                let mut m = GF2Matrix::zeros(tc.dim(), classes.dim());
                for j in 0..classes.dim() {
                    let mut z = classes.representative(&BitVec::unit(classes.dim(), j));
                    if let Some(rng) = rng.as_mut() {
                        z.xor_assign(&random_in(rng, &classes.b));
                    }
                    let mut lift = post.solve(&z).ok_or_else(|| Error::NotChainMap("cocycle does not lift through F_α".into()))?;
                    if let Some(rng) = rng.as_mut() {
                        lift.xor_assign(&random_in(rng, &post.kernel()));
                    }
                    let psi = hom_fa.space.vector(&lift);
                    let out = HomG::precompose_vec(&psi, delta, module_fa.dim());
                    let fdim2 = delta.cols();
                    let mut proj = BitVec::zeros(fdim2 * lower_sq.dim());
                    for f in 0..fdim2 {
                        let val = basis.mul_vec(&out.slice(f * module_fa.dim(), module_fa.dim()));
                        let c = lower_sq.class_of(&val).ok_or_else(|| Error::NotChainMap("connecting map leaves F_{α−1}".into()))?;
                        proj.xor_at(f * lower_sq.dim(), &c);
                    }
                    let coords = th.space.coords(&proj).ok_or_else(|| Error::NotChainMap("d0 leaves the equivariant maps".into()))?;
                    let cls = tc.class_of(&coords).ok_or_else(|| Error::NotChainMap("d0 image is not a cocycle".into()))?;
                    for i in cls.ones() {
                        m.set(i, j, true);
                    }
                }
                dc.set_h(a, b, m);
            }
        }
    }
    dc.validate()?;
    Ok(HatDoubleComplex { k, dc, entries })
}

/// Both spectral sequences of `^kĈ` with their Euler characteristics.
#[derive(Clone, Debug)]
pub struct HatSS {
    pub variant: Variant,
    pub ss: SpectralSequence,
}

impl HatSS {
    /// `Σ (−1)^{α+β} dim` on displayed page `r`, `None` for `E^∞`.
    pub fn euler_characteristic(&self, r: Option<usize>) -> i64 {
        let page = match r {
            Some(r) => &self.ss.pages[r.min(self.ss.pages.len() - 1)],
            None => &self.ss.infinity,
        };
        page.cells.iter().map(|(&(_, n), c)| sign(n) * c.dim() as i64).sum()
    }
}

/// Variant `I` filters by `β` (first differential `d0`), variant `II` by `α`
/// (first differential `d1`).
pub fn hat_ss(hc: &HatDoubleComplex, variant: Variant, r_max: usize) -> HatSS {
    let internal = match variant {
        Variant::I => Variant::II,
        Variant::II => Variant::I,
    };
    HatSS { variant, ss: ss_double(&hc.dc, internal, r_max.max(1), Certificate::exact(), None) }
}

/// `χ(Tot ^kĈ)` computed from the homology of the total complex.
pub fn hat_tot_euler(hc: &HatDoubleComplex) -> i64 {
    let tot = hc.dc.total_complex();
    tot.chain.degrees().map(|n| sign(n) * tot.chain.betti(n) as i64).sum()
}

fn graded_dim(fc: &FilteredComplex, a: i64, b: i64) -> usize {
    fc.f(a, b).dim() - fc.f(a - 1, b).dim()
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HatE1Mismatch {
    pub alpha: i64,
    pub beta: i64,
    pub computed: usize,
    pub formula: usize,
}

/// `^k_I Ê¹_{α,β}` against the closed-form dimensions; returns the failing cells.
pub fn hat_e1_check(v: &VarietyModel, k: i64) -> Result<Vec<HatE1Mismatch>> {
    require_z2(v)?;
    let fixed = v.fixed_model()?;
    let inv = v.invariant_model();
    let hc = build_hat_c(k, &v.fk, None)?;
    let hs = hat_ss(&hc, Variant::I, 2);
    let mut out = Vec::new();
    for (a, b) in hc.dc.cells() {
        let n = -k - a;
        let formula = match n {
            n if n >= 1 => graded_dim(&fixed, a, b),
            0 => graded_dim(&inv, a, b),
            _ => 0,
        };
        let computed = hs.ss.dim(Some(1), a, b)?;
        if computed != formula {
            out.push(HatE1Mismatch { alpha: a, beta: b, computed, formula });
        }
    }
    Ok(out)
}

/// `B'_k = (−1)^k χ((𝒩_{−k})^G/(𝒩_{−k−1})^G) + Σ_{q≥k+1} β_q(X^G)`.
pub fn b_prime_value(v: &VarietyModel, k: i64) -> Result<i64> {
    require_z2(v)?;
    let fixed = v.fixed_model()?;
    let inv = v.invariant_model();
    let chi: i64 = inv.chain.degrees().map(|b| sign(b) * graded_dim(&inv, -k, b) as i64).sum();
    let mut total = sign(k) * chi;
    if !fixed.chain.is_empty() {
        for q in (k + 1).max(fixed.chain.q_min())..=fixed.chain.q_max() {
            total += virtual_betti(&fixed, q);
        }
    }
    Ok(total)
}

pub fn b_prime(v: &VarietyModel, k: i64) -> Result<InvariantReport> {
    let route = if v.invariant.is_some() { "b-prime/companion" } else { "b-prime/invariant-subcomplex" };
    Ok(InvariantReport {
        kind: InvariantKind::BPrime,
        index: vec![k],
        value: b_prime_value(v, k)?,
        route: route.into(),
        certified_window: (i64::MIN, i64::MAX),
        nash_faithful: v.flags.nash_faithful,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CaseCheck {
    pub case: String,
    pub k: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// The equalities `B'_k = β^G_k` that are known in closed form: negative `k`,
/// free compact actions, the top degree, and compact nonsingular curves.
pub fn b_prime_case_checks(v: &VarietyModel) -> Result<Vec<CaseCheck>> {
    require_z2(v)?;
    let fixed = v.fixed_model()?;
    let d = v.dimension();
    let mut out = Vec::new();
    let mut push = |case: &str, k: i64, lhs: i64, rhs: i64| out.push(CaseCheck { case: case.into(), k, lhs, rhs, holds: lhs == rhs });
    let fixed_total: i64 = if fixed.chain.is_empty() { 0 } else { fixed.chain.degrees().map(|q| virtual_betti(&fixed, q)).sum() };
    for k in -3..0 {
        push("negative degree", k, b_prime_value(v, k)?, fixed_total);
    }
    let free = v.fixed_cells.as_ref().is_some_and(|c| c.iter().all(Vec::is_empty));
    if free && v.flags.compact {
        if let Some(qc) = &v.quotient {
            for k in 0..=d {
                push("free action", k, b_prime_value(v, k)?, virtual_betti(&qc.model.filtration, k));
            }
        }
    }
    if d >= 0 {
        let inv = v.invariant_model();
        push("top degree", d, b_prime_value(v, d)?, inv.f(-d, d).dim() as i64);
    }
    if d == 1 && v.flags.compact_nonsingular() {
        let l = LComplex::new(v.complex(), None, v.default_contract())?;
        push("compact nonsingular curve", 0, b_prime_value(v, 0)?, l.homology_dim(0)? as i64);
    }
    if out.is_empty() {
        return Err(Error::Unsupported(format!("{}: no applicable case", v.name)));
    }
    Ok(out)
}
