//! Bounded chain complexes, with and without a group action, and their filtrations.

use crate::error::{Error, Result};
use crate::gf2::{subquotient, BitVec, GF2Matrix, Subquotient, Subspace};
use crate::groups::{invariants, is_equivariant, FiniteGroup, GModule};

/// A bounded chain complex of GF(2) spaces in degrees `q_min..=q_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    q_min: i64,
    dims: Vec<usize>,
    /// `boundary[i]` is `∂` out of degree `q_min + i`.
    boundary: Vec<GF2Matrix>,
}

impl ChainComplex {
    /// `dims[i]` is the dimension in degree `q_min + i`; `boundary[i]` maps that degree down by one
    /// (the lowest one must have zero rows).
    pub fn new(q_min: i64, dims: Vec<usize>, boundary: Vec<GF2Matrix>) -> Result<Self> {
        if dims.len() != boundary.len() {
            return Err(Error::InvalidComplex(format!("{} degrees but {} boundary maps", dims.len(), boundary.len())));
        }
        for (i, d) in boundary.iter().enumerate() {
            let q = q_min + i as i64;
            let rows = if i == 0 { 0 } else { dims[i - 1] };
            if d.cols() != dims[i] || d.rows() != rows {
                return Err(Error::InvalidComplex(format!(
                    "∂_{q} is {}x{}, expected {rows}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i]
                )));
            }
            if i >= 1 && !boundary[i - 1].mul(d).is_zero() {
                return Err(Error::InvalidComplex(format!("∂_{} ∘ ∂_{q} ≠ 0", q - 1)));
            }
        }
        Ok(ChainComplex { q_min, dims, boundary })
    }

    pub fn zero() -> Self {
        ChainComplex { q_min: 0, dims: Vec::new(), boundary: Vec::new() }
    }

    pub fn q_min(&self) -> i64 {
        self.q_min
    }

    pub fn q_max(&self) -> i64 {
        self.q_min + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.q_min..=self.q_max()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    fn idx(&self, q: i64) -> Option<usize> {
        let i = q - self.q_min;
        (i >= 0 && (i as usize) < self.dims.len()).then_some(i as usize)
    }

    pub fn dim(&self, q: i64) -> usize {
        self.idx(q).map_or(0, |i| self.dims[i])
    }

    /// `∂_q : C_q → C_{q−1}`, zero outside the stored range.
    pub fn d(&self, q: i64) -> GF2Matrix {
        match self.idx(q) {
            Some(0) | None => GF2Matrix::zeros(self.dim(q - 1), self.dim(q)),
            Some(i) => self.boundary[i].clone(),
        }
    }

    pub fn cycles(&self, q: i64) -> Subspace {
        self.d(q).kernel()
    }

    pub fn boundaries(&self, q: i64) -> Subspace {
        self.d(q + 1).image()
    }

    pub fn homology(&self, q: i64) -> Subquotient {
        subquotient(&self.cycles(q), &self.boundaries(q)).expect("∂² = 0")
    }

    pub fn betti(&self, q: i64) -> usize {
        let z = self.dim(q) - self.d(q).rank();
        z - self.d(q + 1).rank()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|q| sign(q) * self.dim(q) as i64).sum()
    }

    /// Degree shift: `(C[k])_q = C_{q−k}`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        ChainComplex { q_min: self.q_min + k, dims: self.dims.clone(), boundary: self.boundary.clone() }
    }
}

pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A chain complex of G-modules with equivariant differential.
#[derive(Clone, Debug)]
pub struct GChainComplex {
    pub group: FiniteGroup,
    pub chain: ChainComplex,
    modules: Vec<GModule>,
    /// Optional basis labels per degree.
    pub labels: Option<Vec<Vec<String>>>,
}

impl GChainComplex {
    pub fn new(group: FiniteGroup, chain: ChainComplex, modules: Vec<GModule>) -> Result<Self> {
        if modules.len() != chain.dims.len() {
            return Err(Error::InvalidComplex(format!("{} modules for {} degrees", modules.len(), chain.dims.len())));
        }
        for (i, m) in modules.iter().enumerate() {
            let q = chain.q_min + i as i64;
            if m.dim() != chain.dims[i] {
                return Err(Error::InvalidComplex(format!("module in degree {q} has dim {}, chain group has {}", m.dim(), chain.dims[i])));
            }
            if m.actions().len() != group.order() {
                return Err(Error::InvalidComplex(format!("module in degree {q} is for a different group")));
            }
            if i >= 1 && !is_equivariant(&chain.boundary[i], m, &modules[i - 1]) {
                return Err(Error::InvalidComplex(format!("∂_{q} does not commute with the action")));
            }
        }
        Ok(GChainComplex { group, chain, modules, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        self.labels = Some(labels);
        self
    }

    /// A complex with trivial action.
    pub fn trivial_action(group: FiniteGroup, chain: ChainComplex) -> Self {
        let modules = chain.dims.iter().map(|&d| GModule::trivial(&group, d)).collect();
        GChainComplex { group, chain, modules, labels: None }
    }

    pub fn module(&self, q: i64) -> GModule {
        match self.chain.idx(q) {
            Some(i) => self.modules[i].clone(),
            None => GModule::zero(&self.group),
        }
    }

    pub fn q_min(&self) -> i64 {
        self.chain.q_min()
    }

    pub fn q_max(&self) -> i64 {
        self.chain.q_max()
    }

    pub fn dim(&self, q: i64) -> usize {
        self.chain.dim(q)
    }

    pub fn d(&self, q: i64) -> GF2Matrix {
        self.chain.d(q)
    }

    pub fn label(&self, q: i64, i: usize) -> String {
        self.labels
            .as_ref()
            .and_then(|l| self.chain.idx(q).and_then(|k| l.get(k)).and_then(|v| v.get(i)).cloned())
            .unwrap_or_else(|| format!("c{q}_{i}"))
    }

    /// Writes a chain as a sum of cell labels.
    pub fn describe(&self, q: i64, v: &BitVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.ones().iter().map(|&i| self.label(q, i)).collect::<Vec<_>>().join("+")
    }

    /// Same complex with degrees shifted up by `k`.
    pub fn shift(&self, k: i64) -> GChainComplex {
        GChainComplex {
            group: self.group.clone(),
            chain: self.chain.shift(k),
            modules: self.modules.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Subcomplex spanned by `subs` (one subspace per degree), with restricted action.
    pub fn subcomplex(&self, subs: &[Subspace]) -> Result<GChainComplex> {
        self.map_degrees(subs)
    }

    /// Applies `f` degreewise to obtain a new complex with the same group.
    fn map_degrees(&self, subs: &[Subspace]) -> Result<GChainComplex> {
        let mut dims = Vec::new();
        let mut boundary = Vec::new();
        let mut modules = Vec::new();
        for (i, q) in self.chain.degrees().enumerate() {
            dims.push(subs[i].dim());
            let d = if i == 0 {
                GF2Matrix::zeros(0, subs[i].dim())
            } else {
                subs[i].restrict(&self.d(q), &subs[i - 1])?
            };
            boundary.push(d);
            modules.push(self.modules[i].restrict(&subs[i])?);
        }
        GChainComplex::new(self.group.clone(), ChainComplex::new(self.q_min(), dims, boundary)?, modules)
    }
}

/// Homology in degree `q` with its induced G-module.
#[derive(Clone, Debug)]
pub struct Homology {
    pub q: i64,
    pub classes: Subquotient,
    pub module: GModule,
}

impl Homology {
    pub fn dim(&self) -> usize {
        self.classes.dim()
    }
}

pub fn homology(k: &GChainComplex, q: i64) -> Homology {
    let classes = k.chain.homology(q);
    let module = k.module(q).quotient(&classes).expect("cycles and boundaries are G-stable");
    Homology { q, classes, module }
}

/// Degreewise invariants with the restricted differential; the action on the result is trivial.
pub fn invariant_subcomplex(k: &GChainComplex) -> GChainComplex {
    let subs: Vec<Subspace> = k.chain.degrees().map(|q| invariants(&k.group, &k.module(q))).collect();
    let restricted = k.map_degrees(&subs).expect("invariants form a subcomplex");
    GChainComplex { labels: None, ..restricted }
}

/// Filtration on a plain complex: `F_α C_q` for `alpha_min ≤ α ≤ alpha_max`,
/// zero below and everything above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    pub chain: ChainComplex,
    alpha_min: i64,
    /// `filt[α − alpha_min][q − q_min]`.
    filt: Vec<Vec<Subspace>>,
}

impl FilteredComplex {
    /// Validates monotonicity, exhaustiveness and compatibility with `∂`.
    pub fn new(chain: ChainComplex, alpha_min: i64, filt: Vec<Vec<Subspace>>) -> Result<Self> {
        let fc = FilteredComplex { chain, alpha_min, filt };
        fc.validate()?;
        Ok(fc)
    }

    fn validate(&self) -> Result<()> {
        let fail = |s: String| Err(Error::InvalidFiltration(s));
        if self.filt.is_empty() {
            if !self.chain.is_empty() {
                return fail("empty filtration on a nonzero complex".into());
            }
            return Ok(());
        }
        let nq = self.chain.dims.len();
        for (ai, level) in self.filt.iter().enumerate() {
            let a = self.alpha_min + ai as i64;
            if level.len() != nq {
                return fail(format!("level {a} has {} degrees, complex has {nq}", level.len()));
            }
            for (qi, s) in level.iter().enumerate() {
                let q = self.chain.q_min + qi as i64;
                if s.ambient_dim() != self.chain.dims[qi] {
                    return fail(format!("F_{a} C_{q} lives in the wrong ambient space"));
                }
                if ai > 0 && !s.contains_subspace(&self.filt[ai - 1][qi]) {
                    return fail(format!("not monotone: F_{} C_{q} ⊄ F_{a} C_{q}", a - 1));
                }
                if qi > 0 {
                    let img = s.map(&self.chain.boundary[qi]);
                    if !level[qi - 1].contains_subspace(&img) {
                        return fail(format!("∂ F_{a} C_{q} ⊄ F_{a} C_{}", q - 1));
                    }
                }
            }
        }
        let top = self.filt.last().unwrap();
        for (qi, s) in top.iter().enumerate() {
            if s.dim() != self.chain.dims[qi] {
                return fail(format!("not exhaustive: F_{} C_{} is a proper subspace", self.alpha_max(), self.chain.q_min + qi as i64));
            }
        }
        Ok(())
    }

    /// One-step filtration: everything at level `alpha`.
    pub fn trivial(chain: ChainComplex, alpha: i64) -> Self {
        let level = chain.dims.iter().map(|&d| Subspace::full(d)).collect();
        FilteredComplex { chain, alpha_min: alpha, filt: vec![level] }
    }

    pub fn alpha_min(&self) -> i64 {
        self.alpha_min
    }

    pub fn alpha_max(&self) -> i64 {
        self.alpha_min + self.filt.len() as i64 - 1
    }

    pub fn f(&self, alpha: i64, q: i64) -> Subspace {
        let n = self.chain.dim(q);
        if alpha < self.alpha_min || self.chain.idx(q).is_none() {
            return Subspace::zero(n);
        }
        if alpha > self.alpha_max() {
            return Subspace::full(n);
        }
        self.filt[(alpha - self.alpha_min) as usize][self.chain.idx(q).unwrap()].clone()
    }

    /// `F_α / F_{α−1}` as a complex, in subquotient coordinates.
    pub fn graded_piece(&self, alpha: i64) -> (ChainComplex, Vec<Subquotient>) {
        let sqs: Vec<Subquotient> = self
            .chain
            .degrees()
            .map(|q| subquotient(&self.f(alpha, q), &self.f(alpha - 1, q)).expect("monotone filtration"))
            .collect();
        let mut boundary = Vec::new();
        for (i, q) in self.chain.degrees().enumerate() {
            let mut d = GF2Matrix::zeros(if i == 0 { 0 } else { sqs[i - 1].dim() }, sqs[i].dim());
            if i > 0 {
                let dq = self.chain.d(q);
                for (j, r) in sqs[i].representatives().iter().enumerate() {
                    let c = sqs[i - 1].class_of(&dq.mul_vec(r)).expect("filtration by subcomplexes");
                    for t in c.ones() {
                        d.set(t, j, true);
                    }
                }
            }
            boundary.push(d);
        }
        let dims = sqs.iter().map(|s| s.dim()).collect();
        (ChainComplex::new(self.chain.q_min, dims, boundary).expect("graded piece"), sqs)
    }
}

/// Equivariant filtration of a G-complex.
#[derive(Clone, Debug)]
pub struct FilteredGComplex {
    pub base: GChainComplex,
    pub filtration: FilteredComplex,
}

impl FilteredGComplex {
    pub fn new(base: GChainComplex, alpha_min: i64, filt: Vec<Vec<Subspace>>) -> Result<Self> {
        let filtration = FilteredComplex::new(base.chain.clone(), alpha_min, filt)?;
        for a in filtration.alpha_min()..=filtration.alpha_max() {
            for q in base.chain.degrees() {
                if !base.module(q).is_stable(&filtration.f(a, q)) {
                    return Err(Error::InvalidFiltration(format!("F_{a} C_{q} is not G-stable")));
                }
            }
        }
        Ok(FilteredGComplex { base, filtration })
    }

    pub fn trivial(base: GChainComplex, alpha: i64) -> Self {
        let filtration = FilteredComplex::trivial(base.chain.clone(), alpha);
        FilteredGComplex { base, filtration }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.base.group
    }

    pub fn alpha_min(&self) -> i64 {
        self.filtration.alpha_min()
    }

    pub fn alpha_max(&self) -> i64 {
        self.filtration.alpha_max()
    }

    pub fn f(&self, alpha: i64, q: i64) -> Subspace {
        self.filtration.f(alpha, q)
    }

    /// `F_α / F_{α−1}` with its induced action.
    pub fn graded_piece(&self, alpha: i64) -> (GChainComplex, Vec<Subquotient>) {
        let (chain, sqs) = self.filtration.graded_piece(alpha);
        let modules = self
            .base
            .chain
            .degrees()
            .zip(&sqs)
            .map(|(q, sq)| self.base.module(q).quotient(sq).expect("G-stable filtration"))
            .collect();
        (GChainComplex::new(self.base.group.clone(), chain, modules).expect("graded piece"), sqs)
    }

    /// Filtered invariant subcomplex `(F_α C)^G`, trivial action.
    pub fn invariant_part(&self) -> FilteredGComplex {
        let subs: Vec<Subspace> = self.base.chain.degrees().map(|q| invariants(&self.base.group, &self.base.module(q))).collect();
        let inv = invariant_subcomplex(&self.base);
        let filt = (self.alpha_min()..=self.alpha_max())
            .map(|a| {
                self.base
                    .chain
                    .degrees()
                    .zip(&subs)
                    .map(|(q, s)| {
                        let inter = self.f(a, q).intersect(s);
                        Subspace::span(s.dim(), inter.basis().iter().map(|v| s.coords(v).unwrap()))
                    })
                    .collect()
            })
            .collect();
        FilteredGComplex::new(inv, self.alpha_min(), filt).expect("invariant filtration")
    }
}

/// `F_p C_q = C_q` for `q > −p`, `ker ∂_q` for `q = −p`, `0` for `q < −p`.
pub fn canonical_filtration(k: &GChainComplex) -> FilteredGComplex {
    if k.chain.dims.is_empty() {
        return FilteredGComplex::trivial(k.clone(), 0);
    }
    let (qmin, qmax) = (k.q_min(), k.q_max());
    let filt = (-qmax..=-qmin)
        .map(|p| {
            k.chain
                .degrees()
                .map(|q| {
                    let n = k.dim(q);
                    if q > -p {
                        Subspace::full(n)
                    } else if q == -p {
                        k.chain.cycles(q)
                    } else {
                        Subspace::zero(n)
                    }
                })
                .collect()
        })
        .collect();
    FilteredGComplex::new(k.clone(), -qmax, filt).expect("canonical filtration is valid")
}

/// A degree-preserving equivariant chain map.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: GChainComplex,
    pub target: GChainComplex,
    /// Matrices indexed by degree from `lo`.
    lo: i64,
    maps: Vec<GF2Matrix>,
}

impl ChainMap {
    pub fn new(source: GChainComplex, target: GChainComplex, lo: i64, maps: Vec<GF2Matrix>) -> Result<Self> {
        let f = ChainMap { source, target, lo, maps };
        let (a, b) = f.range();
        for q in a..=b {
            let m = f.at(q);
            if m.cols() != f.source.dim(q) || m.rows() != f.target.dim(q) {
                return Err(Error::NotChainMap(format!("degree {q} matrix has the wrong shape")));
            }
            if !is_equivariant(&m, &f.source.module(q), &f.target.module(q)) {
                return Err(Error::NotChainMap(format!("degree {q} component is not equivariant")));
            }
            let lhs = f.target.d(q).mul(&m);
            let rhs = f.at(q - 1).mul(&f.source.d(q));
            if lhs != rhs {
                let witness = (0..m.cols()).find(|&j| lhs.col(j) != rhs.col(j)).unwrap_or(0);
                return Err(Error::NotChainMap(format!("∂f ≠ f∂ in degree {q} on basis vector {witness}")));
            }
        }
        Ok(f)
    }

    pub fn identity(k: &GChainComplex) -> Self {
        let maps = k.chain.degrees().map(|q| GF2Matrix::identity(k.dim(q))).collect();
        ChainMap { source: k.clone(), target: k.clone(), lo: k.q_min(), maps }
    }

    fn range(&self) -> (i64, i64) {
        let lo = self.source.q_min().min(self.target.q_min());
        let hi = self.source.q_max().max(self.target.q_max());
        (lo, hi + 1)
    }

    pub fn at(&self, q: i64) -> GF2Matrix {
        let i = q - self.lo;
        if i >= 0 && (i as usize) < self.maps.len() {
            let m = &self.maps[i as usize];
            if m.rows() == self.target.dim(q) && m.cols() == self.source.dim(q) {
                return m.clone();
            }
        }
        GF2Matrix::zeros(self.target.dim(q), self.source.dim(q))
    }
}

/// `Cone(f)_n = K_{n−1} ⊕ M_n` with `d(k, m) = (∂k, f k + ∂m)`.
pub fn mapping_cone(f: &ChainMap) -> GChainComplex {
    let (k, m) = (&f.source, &f.target);
    let lo = (k.q_min() + 1).min(m.q_min());
    let hi = (k.q_max() + 1).max(m.q_max());
    let mut dims = Vec::new();
    let mut boundary = Vec::new();
    let mut modules = Vec::new();
    for n in lo..=hi {
        let (a, b) = (k.dim(n - 1), m.dim(n));
        dims.push(a + b);
        modules.push(k.module(n - 1).direct_sum(&m.module(n)));
        let (a1, b1) = (k.dim(n - 2), m.dim(n - 1));
        let rows = if n == lo { 0 } else { a1 + b1 };
        let mut d = GF2Matrix::zeros(rows, a + b);
        if n > lo {
            d.put_block(0, 0, &k.d(n - 1));
            d.put_block(a1, 0, &f.at(n - 1));
            d.put_block(a1, a, &m.d(n));
        }
        boundary.push(d);
    }
    let chain = ChainComplex::new(lo, dims, boundary).expect("cone of a chain map");
    GChainComplex::new(k.group.clone(), chain, modules).expect("cone is equivariant")
}
