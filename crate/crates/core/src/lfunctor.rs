//! The functor L: the double complex `Hom_G(F_{−p}, C_q)`, its total complex,
//! the filtration induced by a filtration of `C`, and equivariant homology.
//!
//! The double complex is unbounded to the left. It is built on columns
//! `[p_min − r_max, 0]`; dropping the columns further left turns the total
//! complex into a quotient complex which agrees with the true one in every total
//! degree `n ≥ p_lo + q_max + 1`.

use crate::complexes::{ChainComplex, FilteredComplex, FilteredGComplex, GChainComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, GF2Matrix, Subspace};
use crate::groups::{default_resolution, FiniteGroup, HomG, Resolution};

/// Grid of spaces with `d_h : (p,q) → (p−1,q)` and `d_v : (p,q) → (p,q−1)`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
    dims: Vec<Vec<usize>>,
    dh: Vec<Vec<GF2Matrix>>,
    dv: Vec<Vec<GF2Matrix>>,
}

impl DoubleComplex {
    /// An all-zero grid to be filled with [`DoubleComplex::set_dim`] and the map setters.
    pub fn zeros(p_min: i64, p_max: i64, q_min: i64, q_max: i64) -> Self {
        let np = (p_max - p_min + 1).max(0) as usize;
        let nq = (q_max - q_min + 1).max(0) as usize;
        DoubleComplex {
            p_min,
            p_max,
            q_min,
            q_max,
            dims: vec![vec![0; nq]; np],
            dh: vec![vec![GF2Matrix::zeros(0, 0); nq]; np],
            dv: vec![vec![GF2Matrix::zeros(0, 0); nq]; np],
        }
    }

    fn idx(&self, p: i64, q: i64) -> Option<(usize, usize)> {
        (p >= self.p_min && p <= self.p_max && q >= self.q_min && q <= self.q_max)
            .then(|| ((p - self.p_min) as usize, (q - self.q_min) as usize))
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.idx(p, q).map_or(0, |(i, j)| self.dims[i][j])
    }

    pub fn set_dim(&mut self, p: i64, q: i64, d: usize) {
        let (i, j) = self.idx(p, q).expect("cell inside the grid");
        self.dims[i][j] = d;
    }

    pub fn set_h(&mut self, p: i64, q: i64, m: GF2Matrix) {
        let (i, j) = self.idx(p, q).expect("cell inside the grid");
        self.dh[i][j] = m;
    }

    pub fn set_v(&mut self, p: i64, q: i64, m: GF2Matrix) {
        let (i, j) = self.idx(p, q).expect("cell inside the grid");
        self.dv[i][j] = m;
    }

    /// Horizontal map out of `(p,q)`; zero if stored with the wrong shape or outside the grid.
    pub fn h(&self, p: i64, q: i64) -> GF2Matrix {
        let (r, c) = (self.dim(p - 1, q), self.dim(p, q));
        match self.idx(p, q) {
            Some((i, j)) if self.dh[i][j].rows() == r && self.dh[i][j].cols() == c => self.dh[i][j].clone(),
            _ => GF2Matrix::zeros(r, c),
        }
    }

    pub fn v(&self, p: i64, q: i64) -> GF2Matrix {
        let (r, c) = (self.dim(p, q - 1), self.dim(p, q));
        match self.idx(p, q) {
            Some((i, j)) if self.dv[i][j].rows() == r && self.dv[i][j].cols() == c => self.dv[i][j].clone(),
            _ => GF2Matrix::zeros(r, c),
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.p_min..=self.p_max).flat_map(move |p| (self.q_min..=self.q_max).map(move |q| (p, q)))
    }

    /// `d_h² = 0`, `d_v² = 0` and `d_h d_v = d_v d_h`.
    pub fn validate(&self) -> Result<()> {
        for (p, q) in self.cells() {
            if !self.h(p - 1, q).mul(&self.h(p, q)).is_zero() {
                return Err(Error::InvalidComplex(format!("d_h ∘ d_h ≠ 0 at ({p},{q})")));
            }
            if !self.v(p, q - 1).mul(&self.v(p, q)).is_zero() {
                return Err(Error::InvalidComplex(format!("d_v ∘ d_v ≠ 0 at ({p},{q})")));
            }
            if self.h(p, q - 1).mul(&self.v(p, q)) != self.v(p - 1, q).mul(&self.h(p, q)) {
                return Err(Error::InvalidComplex(format!("square at ({p},{q}) does not commute")));
            }
        }
        Ok(())
    }

    pub fn total_complex(&self) -> TotalComplex {
        let (n_lo, n_hi) = (self.p_min + self.q_min, self.p_max + self.q_max);
        let mut summands = Vec::new();
        let mut dims = Vec::new();
        for n in n_lo..=n_hi {
            let mut parts = Vec::new();
            let mut off = 0;
            for p in self.p_min..=self.p_max {
                let q = n - p;
                if q < self.q_min || q > self.q_max {
                    continue;
                }
                let d = self.dim(p, q);
                parts.push(Summand { p, q, offset: off, dim: d });
                off += d;
            }
            summands.push(parts);
            dims.push(off);
        }
        let mut boundary = Vec::new();
        for (i, n) in (n_lo..=n_hi).enumerate() {
            let rows = if i == 0 { 0 } else { dims[i - 1] };
            let mut d = GF2Matrix::zeros(rows, dims[i]);
            if i > 0 {
                let lower = &summands[i - 1];
                let find = |p: i64, q: i64| lower.iter().find(|s: &&Summand| s.p == p && s.q == q);
                for s in &summands[i] {
                    if let Some(t) = find(s.p, s.q - 1) {
                        d.put_block(t.offset, s.offset, &self.v(s.p, s.q));
                    }
                    if let Some(t) = find(s.p - 1, s.q) {
                        let h = self.h(s.p, s.q);
                        // put_block sets bits; blocks never overlap here since targets differ.
                        d.put_block(t.offset, s.offset, &h);
                    }
                }
                let _ = n;
            }
            boundary.push(d);
        }
        let chain = ChainComplex::new(n_lo, dims, boundary).expect("total complex of a double complex");
        TotalComplex { chain, summands, n_lo }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Summand {
    pub p: i64,
    pub q: i64,
    pub offset: usize,
    pub dim: usize,
}

/// `Tot_n = ⊕_{p+q=n} D_{p,q}` with the summand layout kept.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub chain: ChainComplex,
    summands: Vec<Vec<Summand>>,
    n_lo: i64,
}

impl TotalComplex {
    pub fn summands(&self, n: i64) -> &[Summand] {
        let i = n - self.n_lo;
        if i < 0 || i as usize >= self.summands.len() {
            return &[];
        }
        &self.summands[i as usize]
    }

    pub fn summand(&self, n: i64, p: i64) -> Option<Summand> {
        self.summands(n).iter().copied().find(|s| s.p == p)
    }

    /// Filtration by columns `p ≤ s`.
    pub fn column_filtration(&self, p_min: i64, p_max: i64) -> FilteredComplex {
        self.filtration_by(p_min, p_max, |s| s.p)
    }

    /// Filtration by rows `q ≤ s`.
    pub fn row_filtration(&self, q_min: i64, q_max: i64) -> FilteredComplex {
        self.filtration_by(q_min, q_max, |s| s.q)
    }

    fn filtration_by(&self, lo: i64, hi: i64, key: impl Fn(&Summand) -> i64) -> FilteredComplex {
        let filt = (lo..=hi)
            .map(|s| {
                self.chain
                    .degrees()
                    .map(|n| {
                        let dim = self.chain.dim(n);
                        let gens = self
                            .summands(n)
                            .iter()
                            .filter(|x| key(x) <= s)
                            .flat_map(|x| (x.offset..x.offset + x.dim).map(move |i| BitVec::unit(dim, i)))
                            .collect::<Vec<_>>();
                        Subspace::span(dim, gens)
                    })
                    .collect()
            })
            .collect();
        FilteredComplex::new(self.chain.clone(), lo, filt).expect("grid filtration")
    }
}

/// Reporting window for left-unbounded computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowContract {
    /// Lowest reported column.
    pub p_min: i64,
    /// Extra columns computed beyond `p_min`.
    pub r_max: usize,
}

impl WindowContract {
    pub fn new(p_min: i64, r_max: usize) -> Self {
        WindowContract { p_min: p_min.min(0), r_max }
    }

    /// `p_min = −(dim + 4)`, `r_max = dim + 3`.
    pub fn for_dimension(dim: i64) -> Self {
        let d = dim.max(0);
        WindowContract { p_min: -(d + 4), r_max: (d + 3) as usize }
    }

    /// Leftmost column actually built.
    pub fn internal_lo(&self) -> i64 {
        self.p_min - self.r_max as i64
    }

    /// Column range whose values are certified without periodic extension.
    pub fn guaranteed_range(&self) -> (i64, i64) {
        (self.internal_lo() + self.r_max as i64, 0)
    }
}

/// Certification data shared by everything built on one truncated L complex.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// Lowest exact total degree; `None` if the double complex is not truncated.
    pub min_degree: Option<i64>,
    /// Period in total degree below `periodic_below`, when the resolution is periodic.
    pub period: Option<(usize, i64)>,
}

impl Certificate {
    pub fn exact() -> Self {
        Certificate { min_degree: None, period: None }
    }

    pub fn is_certified(&self, n: i64) -> bool {
        self.min_degree.is_none_or(|m| n >= m)
    }

    /// Maps a requested total degree to a computed one with the same value.
    pub fn representative(&self, n: i64, p_min_hint: i64) -> Result<i64> {
        let Some(m) = self.min_degree else { return Ok(n) };
        if n >= m {
            return Ok(n);
        }
        if let Some((t, below)) = self.period {
            let t = t as i64;
            if n <= below && m + t - 1 <= below {
                let k = (m - n + t - 1) / t;
                return Ok(n + k * t);
            }
        }
        Err(Error::WindowTooSmall { requested: n, certified_min: m, suggested_p_min: p_min_hint - (m - n) })
    }
}

/// `L(K)` for a G-complex `K` on a fixed window.
#[derive(Clone, Debug)]
pub struct LComplex {
    pub group: FiniteGroup,
    pub complex: GChainComplex,
    pub resolution: Resolution,
    pub contract: WindowContract,
    pub double: DoubleComplex,
    homs: Vec<Vec<HomG>>,
    pub tot: TotalComplex,
    pub certificate: Certificate,
}

/// Builds `Hom_G(F_{−p}, C_q)` for `p_lo ≤ p ≤ 0`.
pub fn build_l(k: &GChainComplex, res: &Resolution, p_lo: i64) -> Result<(DoubleComplex, Vec<Vec<HomG>>)> {
    let p_lo = match res.length {
        Some(l) => p_lo.max(-(l as i64)),
        None => p_lo,
    };
    res.require_depth((-p_lo) as usize + 1)?;
    let g = &k.group;
    let (q_min, q_max) = (k.q_min(), k.q_max());
    let mut dc = DoubleComplex::zeros(p_lo, 0, q_min, q_max);
    let mut homs: Vec<Vec<HomG>> = Vec::new();
    for p in p_lo..=0 {
        let i = (-p) as usize;
        let col = k.chain.degrees().map(|q| HomG::new(g, res, i, &k.module(q))).collect::<Vec<_>>();
        homs.push(col);
    }
    let hom = |p: i64, q: i64| &homs[(p - p_lo) as usize][(q - q_min) as usize];
    for p in p_lo..=0 {
        for q in q_min..=q_max {
            dc.set_dim(p, q, hom(p, q).dim());
        }
    }
    for p in p_lo..=0 {
        for q in q_min..=q_max {
            if q > q_min {
                dc.set_v(p, q, hom(p, q).postcompose_matrix(&k.d(q), hom(p, q - 1))?);
            }
            if p > p_lo {
                let delta = res.map((-p + 1) as usize);
                dc.set_h(p, q, hom(p, q).precompose_matrix(delta, hom(p - 1, q))?);
            }
        }
    }
    Ok((dc, homs))
}

impl LComplex {
    /// Builds on `[contract.internal_lo(), 0]`, using `res` or the default resolution.
    pub fn new(k: &GChainComplex, res: Option<Resolution>, contract: WindowContract) -> Result<Self> {
        let p_lo = contract.internal_lo();
        let depth = (-p_lo) as usize + 1;
        let resolution = match res {
            Some(r) => r,
            None => default_resolution(&k.group, depth)?,
        };
        let (double, homs) = build_l(k, &resolution, p_lo)?;
        let tot = double.total_complex();
        let truncated = resolution.length.is_none_or(|l| (l as i64) > -p_lo);
        let q_max = k.q_max().max(k.q_min());
        let q_min = k.q_min();
        let certificate = if truncated {
            let m = double.p_min + q_max + 1;
            let period = resolution.period.map(|t| (t, q_min - t as i64 - 1));
            Certificate { min_degree: Some(m), period }
        } else {
            Certificate::exact()
        };
        Ok(LComplex { group: k.group.clone(), complex: k.clone(), resolution, contract, double, homs, tot, certificate })
    }

    pub fn hom(&self, p: i64, q: i64) -> Option<&HomG> {
        if p < self.double.p_min || p > 0 || q < self.complex.q_min() || q > self.complex.q_max() {
            return None;
        }
        Some(&self.homs[(p - self.double.p_min) as usize][(q - self.complex.q_min()) as usize])
    }

    /// `dim H_n(Tot L K)`, shifting by the period if `n` is below the exact range.
    pub fn homology_dim(&self, n: i64) -> Result<usize> {
        let m = self.certificate.representative(n, self.contract.p_min)?;
        Ok(self.tot.chain.betti(m))
    }

    /// Tot vector of the equivariant map `F_{−p} → C_q` sending the generators to `images`.
    pub fn element(&self, p: i64, q: i64, images: &[BitVec]) -> Option<BitVec> {
        let n = p + q;
        let s = self.tot.summand(n, p)?;
        let hom = self.hom(p, q)?;
        let c = hom.from_generator_images(&self.group, &self.resolution, (-p) as usize, &self.complex.module(q), images)?;
        let mut v = BitVec::zeros(self.tot.chain.dim(n));
        v.xor_at(s.offset, &c);
        Some(v)
    }

    /// Element placing `chain` (degree `q`) as the image of the first generator in column `p`.
    pub fn chain_element(&self, p: i64, q: i64, chain: &BitVec) -> Option<BitVec> {
        let r = self.resolution.generators((-p) as usize).len();
        let mut images = vec![BitVec::zeros(self.complex.dim(q)); r];
        if r == 0 {
            return None;
        }
        images[0] = chain.clone();
        self.element(p, q, &images)
    }

    /// Human-readable form: each nonzero summand as `p:q:` generator images.
    pub fn describe(&self, n: i64, v: &BitVec) -> String {
        let mut parts = Vec::new();
        for s in self.tot.summands(n) {
            let c = v.slice(s.offset, s.dim);
            if c.is_zero() {
                continue;
            }
            let hom = self.hom(s.p, s.q).unwrap();
            let i = (-s.p) as usize;
            let imgs: Vec<String> = (0..self.resolution.generators(i).len())
                .map(|j| self.complex.describe(s.q, &hom.eval_generator(&self.resolution, i, &c, j)))
                .collect();
            parts.push(format!("({},{}):{}", s.p, s.q, imgs.join("|")));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn total_complex(d: &DoubleComplex) -> TotalComplex {
    d.total_complex()
}

/// `dim H_n(X; G)`.
pub fn equivariant_homology(k: &GChainComplex, n: i64, contract: WindowContract) -> Result<usize> {
    LComplex::new(k, None, contract)?.homology_dim(n)
}

/// `L(K)` with the filtration `𝒥_α = L(J_α K)`.
#[derive(Clone, Debug)]
pub struct LFiltered {
    pub l: LComplex,
    pub filtered: FilteredComplex,
}

pub fn l_filtration(fk: &FilteredGComplex, res: Option<Resolution>, contract: WindowContract) -> Result<LFiltered> {
    let l = LComplex::new(&fk.base, res, contract)?;
    let chain = l.tot.chain.clone();
    let (a_lo, a_hi) = (fk.alpha_min(), fk.alpha_max());
    let mut filt = Vec::new();
    for a in a_lo..=a_hi {
        let mut level = Vec::new();
        for n in chain.degrees() {
            let dim = chain.dim(n);
            let mut gens = Vec::new();
            for s in l.tot.summands(n) {
                let hom = l.hom(s.p, s.q).unwrap();
                let fa = fk.f(a, s.q);
                let b = hom.target_dim;
                // φ lies in Hom(F, J_a C_q) iff every column reduces to zero mod J_a.
                let mut red = GF2Matrix::zeros(hom.source_dim * b, hom.dim());
                for (j, phi) in hom.space.basis().iter().enumerate() {
                    for f in 0..hom.source_dim {
                        let col = fa.reduce(&phi.slice(f * b, b));
                        for t in col.ones() {
                            red.set(f * b + t, j, true);
                        }
                    }
                }
                for c in red.kernel().basis() {
                    let mut v = BitVec::zeros(dim);
                    v.xor_at(s.offset, c);
                    gens.push(v);
                }
            }
            level.push(Subspace::span(dim, gens));
        }
        filt.push(level);
    }
    let filtered = FilteredComplex::new(chain, a_lo, filt)?;
    Ok(LFiltered { l, filtered })
}
