//! Finite groups, GF(2) modules, projective resolutions and group cohomology.
//!
//! Free modules `Z2[G]^r` use coordinates `j * |G| + g` for the basis vector
//! `g · e_j`; the group acts by left multiplication.

use crate::error::{Error, Result};
use crate::gf2::{subquotient, BitVec, GF2Matrix, Subquotient, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    cyclic_generator: Option<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, identity, inverses, associativity.
    pub fn from_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (a, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has length {}, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {x} in row {a} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mult[e][a] == a && mult[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mult[a][b] == identity && mult[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut g = FiniteGroup { order: n, mult, identity, inverse, cyclic_generator: None, generators: Vec::new() };
        g.cyclic_generator = (0..n).find(|&x| g.element_order(x) == n);
        g.generators = match g.cyclic_generator {
            Some(c) if n > 1 => vec![c],
            _ => g.greedy_generators(),
        };
        Ok(g)
    }

    /// `Z/dZ` with element `i` standing for `σ^i`.
    pub fn cyclic(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let mult = (0..d).map(|a| (0..d).map(|b| (a + b) % d).collect()).collect();
        Self::from_table(mult)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    /// `Z/2 × Z/2` with elements encoded as two bits.
    pub fn klein_four() -> Self {
        let mult = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self::from_table(mult).expect("Klein four-group")
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = self.closure(&gens);
        for x in 0..self.order {
            if !reached[x] {
                gens.push(x);
                reached = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(a) = stack.pop() {
            for &g in gens {
                let b = self.mult[a][g];
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn cyclic_generator(&self) -> Option<usize> {
        self.cyclic_generator
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator.is_some()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mult[x][a];
            k += 1;
        }
        k
    }

    /// Expresses every element as a word in `gens`: `(element, previous element, generator)` in BFS order.
    fn bfs_words(&self, gens: &[usize]) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = std::collections::VecDeque::from([self.identity]);
        let mut out = Vec::new();
        while let Some(a) = queue.pop_front() {
            for (k, &g) in gens.iter().enumerate() {
                let b = self.mult[g][a];
                if !seen[b] {
                    seen[b] = true;
                    out.push((b, a, k));
                    queue.push_back(b);
                }
            }
        }
        out
    }

    /// Left multiplication by `g` on `Z2[G]^rank`.
    pub fn free_action(&self, g: usize, rank: usize) -> GF2Matrix {
        let n = self.order;
        let mut m = GF2Matrix::zeros(rank * n, rank * n);
        for j in 0..rank {
            for h in 0..n {
                m.set(j * n + self.mult[g][h], j * n + h, true);
            }
        }
        m
    }
}

/// A finite-dimensional GF(2) representation, one matrix per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    dim: usize,
    action: Vec<GF2Matrix>,
}

impl GModule {
    /// Validates a homomorphism `G → GL(dim)` given on every element.
    pub fn new(group: &FiniteGroup, dim: usize, action: Vec<GF2Matrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidModule(format!("{} action matrices for a group of order {}", action.len(), group.order())));
        }
        for (g, m) in action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidModule(format!("action of element {g} is {}x{}, expected {dim}x{dim}", m.rows(), m.cols())));
            }
        }
        if action[group.identity()] != GF2Matrix::identity(dim) {
            return Err(Error::InvalidModule("identity element does not act as the identity".into()));
        }
        for g in 0..group.order() {
            if !action[g].is_invertible() {
                return Err(Error::InvalidModule(format!("action of element {g} is singular")));
            }
            for h in 0..group.order() {
                if action[g].mul(&action[h]) != action[group.mul(g, h)] {
                    return Err(Error::InvalidModule(format!("action is not multiplicative at ({g},{h})")));
                }
            }
        }
        Ok(GModule { dim, action })
    }

    /// Extends the images of `group.generators()` to all elements and validates.
    pub fn from_generator_images(group: &FiniteGroup, dim: usize, images: &[GF2Matrix]) -> Result<Self> {
        let gens = group.generators();
        if images.len() != gens.len() {
            return Err(Error::InvalidModule(format!("{} generator images for {} generators", images.len(), gens.len())));
        }
        let mut action: Vec<Option<GF2Matrix>> = vec![None; group.order()];
        action[group.identity()] = Some(GF2Matrix::identity(dim));
        for (b, a, k) in group.bfs_words(gens) {
            let m = images[k].mul(action[a].as_ref().expect("bfs order"));
            action[b] = Some(m);
        }
        Self::new(group, dim, action.into_iter().map(|m| m.expect("generators generate")).collect())
    }

    pub fn trivial(group: &FiniteGroup, dim: usize) -> Self {
        GModule { dim, action: vec![GF2Matrix::identity(dim); group.order()] }
    }

    pub fn free(group: &FiniteGroup, rank: usize) -> Self {
        GModule { dim: rank * group.order(), action: (0..group.order()).map(|g| group.free_action(g, rank)).collect() }
    }

    pub fn regular(group: &FiniteGroup) -> Self {
        Self::free(group, 1)
    }

    pub fn zero(group: &FiniteGroup) -> Self {
        Self::trivial(group, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &GF2Matrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[GF2Matrix] {
        &self.action
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = GF2Matrix::identity(self.dim);
        self.action.iter().all(|m| *m == id)
    }

    /// Checks that `sub` is stable under every element.
    pub fn is_stable(&self, sub: &Subspace) -> bool {
        self.action.iter().all(|m| sub.basis().iter().all(|b| sub.contains(&m.mul_vec(b))))
    }

    /// The action restricted to a stable subspace, in its canonical coordinates.
    pub fn restrict(&self, sub: &Subspace) -> Result<GModule> {
        let action = self.action.iter().map(|m| sub.restrict(m, sub)).collect::<Result<Vec<_>>>()?;
        Ok(GModule { dim: sub.dim(), action })
    }

    /// The induced action on `Z/B` for stable `B ⊆ Z`, in quotient coordinates.
    pub fn quotient(&self, sq: &Subquotient) -> Result<GModule> {
        let mut action = Vec::with_capacity(self.action.len());
        for m in &self.action {
            let mut a = GF2Matrix::zeros(sq.dim(), sq.dim());
            for (j, r) in sq.representatives().iter().enumerate() {
                let img = m.mul_vec(r);
                let c = sq.class_of(&img).ok_or_else(|| Error::InvalidModule("subquotient is not stable under the action".into()))?;
                for i in c.ones() {
                    a.set(i, j, true);
                }
            }
            action.push(a);
        }
        Ok(GModule { dim: sq.dim(), action })
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &GModule) -> GModule {
        let n = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = GF2Matrix::zeros(n, n);
                m.put_block(0, 0, a);
                m.put_block(self.dim, self.dim, b);
                m
            })
            .collect();
        GModule { dim: n, action }
    }
}

/// Checks `ρ_N(g) f = f ρ_M(g)` for all `g`.
pub fn is_equivariant(f: &GF2Matrix, source: &GModule, target: &GModule) -> bool {
    f.cols() == source.dim()
        && f.rows() == target.dim()
        && source.actions().iter().zip(target.actions()).all(|(a, b)| b.mul(f) == f.mul(a))
}

/// Fixed vectors `M^G`.
pub fn invariants(group: &FiniteGroup, m: &GModule) -> Subspace {
    let mut sub = Subspace::full(m.dim());
    for &g in group.generators() {
        let k = m.action(g).add(&GF2Matrix::identity(m.dim())).kernel();
        sub = sub.intersect(&k);
    }
    sub
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionKind {
    Cyclic,
    Bar,
    Minimal,
    /// `0 → Z2 → Z2 → 0`, valid when `|G|` is odd.
    TrivialProjective,
}

/// A projective resolution `F_* → Z2` up to a fixed depth.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub kind: ResolutionKind,
    modules: Vec<GModule>,
    /// `maps[i] = Δ_i : F_i → F_{i−1}` for `i ≥ 1`; `maps[0]` is the augmentation `F_0 → Z2`.
    maps: Vec<GF2Matrix>,
    free_ranks: Vec<Option<usize>>,
    /// Distinguished module generators of each `F_i`.
    generators: Vec<Vec<BitVec>>,
    /// `F_{i+t} = F_i` and `Δ_{i+t} = Δ_i` for all `i ≥ 1`.
    pub period: Option<usize>,
    /// `F_i = 0` for all `i` beyond this.
    pub length: Option<usize>,
}

fn equivariant_from_generators(group: &FiniteGroup, src_rank: usize, target: &GModule, images: &[BitVec]) -> GF2Matrix {
    let n = group.order();
    let mut m = GF2Matrix::zeros(target.dim(), src_rank * n);
    for (j, v) in images.iter().enumerate() {
        for h in 0..n {
            let col = target.action(h).mul_vec(v);
            for i in col.ones() {
                m.set(i, j * n + h, true);
            }
        }
    }
    m
}

fn augmentation(group: &FiniteGroup) -> GF2Matrix {
    GF2Matrix::from_rows(&[vec![1; group.order()]])
}

impl Resolution {
    pub fn depth(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, i: usize) -> &GModule {
        &self.modules[i]
    }

    /// `Δ_i` for `i ≥ 1`, the augmentation for `i = 0`.
    pub fn map(&self, i: usize) -> &GF2Matrix {
        &self.maps[i]
    }

    pub fn free_rank(&self, i: usize) -> Option<usize> {
        self.free_ranks[i]
    }

    pub fn generators(&self, i: usize) -> &[BitVec] {
        &self.generators[i]
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.free_ranks.iter().zip(&self.modules).map(|(r, m)| r.unwrap_or(m.dim())).collect()
    }

    pub fn require_depth(&self, needed: usize) -> Result<()> {
        if needed > self.depth() {
            Err(Error::InsufficientDepth { needed, have: self.depth() })
        } else {
            Ok(())
        }
    }

    /// Checks equivariance, `Δ_i Δ_{i+1} = 0`, exactness below the top degree,
    /// and that the augmentation is onto with kernel `im Δ_1`.
    pub fn validate(&self) -> Result<()> {
        let fail = |s: String| Err(Error::InvalidModule(s));
        for i in 0..=self.depth() {
            let m = &self.maps[i];
            let src = &self.modules[i];
            if m.cols() != src.dim() {
                return fail(format!("Δ_{i} has {} columns, F_{i} has dim {}", m.cols(), src.dim()));
            }
            if i >= 1 && !is_equivariant(m, src, &self.modules[i - 1]) {
                return fail(format!("Δ_{i} is not equivariant"));
            }
            if i < self.depth() && !m.mul(&self.maps[i + 1]).is_zero() {
                return fail(format!("Δ_{i} ∘ Δ_{} ≠ 0", i + 1));
            }
        }
        if self.maps[0].rank() != 1 {
            return fail("augmentation is not onto".into());
        }
        for i in 0..self.depth() {
            let k = self.maps[i].kernel();
            let im = self.maps[i + 1].image();
            if k != im {
                return fail(format!("not exact at F_{i}: dim ker {} vs dim im {}", k.dim(), im.dim()));
            }
        }
        Ok(())
    }
}

/// Periodic resolution with maps alternating `σ − 1` and `N = Σ σ^i`.
pub fn cyclic_resolution(d: usize, depth: usize) -> Result<Resolution> {
    if d == 0 {
        return Err(Error::InvalidGroup("cyclic group of order 0".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidModule("resolution depth must be at least 1".into()));
    }
    let g = FiniteGroup::cyclic(d)?;
    let f = GModule::regular(&g);
    let sigma = if d > 1 { 1 } else { 0 };
    let mut sigma_minus_one = BitVec::zeros(d);
    sigma_minus_one.flip(0);
    sigma_minus_one.flip(sigma);
    let norm = BitVec::from_bits(&vec![1; d]);
    let mut maps = vec![augmentation(&g)];
    for i in 1..=depth {
        let v = if i % 2 == 1 { &sigma_minus_one } else { &norm };
        maps.push(equivariant_from_generators(&g, 1, &f, std::slice::from_ref(v)));
    }
    Ok(Resolution {
        kind: ResolutionKind::Cyclic,
        modules: vec![f; depth + 1],
        maps,
        free_ranks: vec![Some(1); depth + 1],
        generators: vec![vec![BitVec::unit(d, 0)]; depth + 1],
        period: Some(if d == 2 { 1 } else { 2 }),
        length: None,
    })
}

/// Unnormalised bar resolution; `F_i` is free on `G^i`.
pub fn bar_resolution(group: &FiniteGroup, depth: usize) -> Result<Resolution> {
    if depth == 0 {
        return Err(Error::InvalidModule("resolution depth must be at least 1".into()));
    }
    let n = group.order();
    let rank = |i: usize| n.pow(i as u32);
    let decode = |mut idx: usize, len: usize| -> Vec<usize> {
        let mut t = vec![0; len];
        for k in (0..len).rev() {
            t[k] = idx % n;
            idx /= n;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * n + x);
    let mut modules = Vec::new();
    let mut maps = vec![augmentation(group)];
    for i in 0..=depth {
        modules.push(GModule::free(group, rank(i)));
    }
    for i in 1..=depth {
        let mut images = Vec::with_capacity(rank(i));
        for idx in 0..rank(i) {
            let t = decode(idx, i);
            let mut v = BitVec::zeros(rank(i - 1) * n);
            // g1 [g2 | … | gi]
            v.flip(encode(&t[1..]) * n + t[0]);
            for j in 0..i - 1 {
                let mut s = t[..j].to_vec();
                s.push(group.mul(t[j], t[j + 1]));
                s.extend_from_slice(&t[j + 2..]);
                v.flip(encode(&s) * n + group.identity());
            }
            v.flip(encode(&t[..i - 1]) * n + group.identity());
            images.push(v);
        }
        maps.push(equivariant_from_generators(group, rank(i), &modules[i - 1], &images));
    }
    let generators = (0..=depth).map(|i| (0..rank(i)).map(|j| BitVec::unit(rank(i) * n, j * n + group.identity())).collect()).collect();
    Ok(Resolution {
        kind: ResolutionKind::Bar,
        modules,
        maps,
        free_ranks: (0..=depth).map(|i| Some(rank(i))).collect(),
        generators,
        period: None,
        length: None,
    })
}

/// Free resolution built degree by degree from kernels. Generators are lifted
/// from `K / I·K` (`I` the augmentation ideal), which is minimal for 2-groups;
/// any shortfall is filled greedily.
pub fn minimal_resolution(group: &FiniteGroup, depth: usize) -> Result<Resolution> {
    if depth == 0 {
        return Err(Error::InvalidModule("resolution depth must be at least 1".into()));
    }
    let n = group.order();
    let mut modules = vec![GModule::regular(group)];
    let mut maps = vec![augmentation(group)];
    let mut ranks = vec![1usize];
    for i in 1..=depth {
        let prev = &modules[i - 1];
        let k = maps[i - 1].kernel();
        let ik = Subspace::span(
            prev.dim(),
            group.generators().iter().flat_map(|&g| k.basis().iter().map(move |b| prev.action(g).mul_vec(b).xor(b))),
        );
        let sq = subquotient(&k, &ik)?;
        let mut gens: Vec<BitVec> = sq.representatives().to_vec();
        let generated = |gens: &[BitVec]| Subspace::span(prev.dim(), gens.iter().flat_map(|v| prev.actions().iter().map(move |a| a.mul_vec(v))));
        let mut sub = generated(&gens);
        for b in k.basis() {
            if sub.dim() == k.dim() {
                break;
            }
            if !sub.contains(b) {
                gens.push(b.clone());
                sub = generated(&gens);
            }
        }
        let r = gens.len();
        let f = GModule::free(group, r);
        maps.push(equivariant_from_generators(group, r, prev, &gens));
        modules.push(f);
        ranks.push(r);
    }
    let generators = ranks.iter().map(|&r| (0..r).map(|j| BitVec::unit(r * n, j * n + group.identity())).collect()).collect();
    Ok(Resolution {
        kind: ResolutionKind::Minimal,
        modules,
        maps,
        free_ranks: ranks.into_iter().map(Some).collect(),
        generators,
        period: None,
        length: None,
    })
}

/// `F_0 = Z2` with trivial action and `F_i = 0` beyond; projective exactly when `|G|` is odd.
pub fn trivial_projective_resolution(group: &FiniteGroup, depth: usize) -> Result<Resolution> {
    if group.order().is_multiple_of(2) {
        return Err(Error::Unsupported("the trivial module is projective only for odd-order groups".into()));
    }
    let mut modules = vec![GModule::trivial(group, 1)];
    let mut maps = vec![GF2Matrix::identity(1)];
    for i in 1..=depth.max(1) {
        modules.push(GModule::zero(group));
        maps.push(GF2Matrix::zeros(if i == 1 { 1 } else { 0 }, 0));
    }
    let generators = (0..modules.len()).map(|i| if i == 0 { vec![BitVec::unit(1, 0)] } else { vec![] }).collect();
    Ok(Resolution {
        kind: ResolutionKind::TrivialProjective,
        free_ranks: vec![None; modules.len()],
        modules,
        maps,
        generators,
        period: Some(1),
        length: Some(0),
    })
}

/// Trivial-projective for odd order, periodic for cyclic groups, kernel-built otherwise.
pub fn default_resolution(group: &FiniteGroup, depth: usize) -> Result<Resolution> {
    if group.order() % 2 == 1 {
        trivial_projective_resolution(group, depth)
    } else if let Some(c) = group.cyclic_generator() {
        let d = group.order();
        let cyc = FiniteGroup::cyclic(d)?;
        if group.table() == cyc.table() && c == 1 {
            cyclic_resolution(d, depth)
        } else {
            minimal_resolution(group, depth)
        }
    } else {
        minimal_resolution(group, depth)
    }
}

/// Vectorised `Hom(F, M)`: entry `f * dim M + m` is the `m` coordinate of `φ(e_f)`.
#[derive(Clone, Debug)]
pub struct HomG {
    pub source_dim: usize,
    pub target_dim: usize,
    /// Canonical basis of the equivariant maps inside `Hom(F, M)`.
    pub space: Subspace,
}

impl HomG {
    /// Equivariant maps `F → M`, computed as the invariants of the conjugation action.
    pub fn invariant_maps(group: &FiniteGroup, f: &GModule, m: &GModule) -> HomG {
        let (a, b) = (f.dim(), m.dim());
        let n = a * b;
        let mut sub = Subspace::full(n);
        for &g in group.generators() {
            let finv_t = f.action(group.inv(g)).transpose();
            let t = finv_t.kron(m.action(g)).add(&GF2Matrix::identity(n));
            sub = sub.intersect(&t.kernel());
        }
        HomG { source_dim: a, target_dim: b, space: sub }
    }

    /// Same space as [`HomG::invariant_maps`], built from free generators when `F` is free.
    pub fn new(group: &FiniteGroup, res: &Resolution, i: usize, m: &GModule) -> HomG {
        let f = res.module(i);
        match res.free_rank(i) {
            Some(r) => {
                let n = group.order();
                let (a, b) = (f.dim(), m.dim());
                let mut gens = Vec::with_capacity(r * b);
                for j in 0..r {
                    for c in 0..b {
                        let mut v = BitVec::zeros(a * b);
                        let base = BitVec::unit(b, c);
                        for h in 0..n {
                            let img = m.action(h).mul_vec(&base);
                            v.xor_at((j * n + h) * b, &img);
                        }
                        gens.push(v);
                    }
                }
                HomG { source_dim: a, target_dim: b, space: Subspace::span(a * b, gens) }
            }
            None => Self::invariant_maps(group, f, m),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `φ ↦ φ ∘ Δ` as a raw vector map, `Δ : F' → F`.
    pub fn precompose_vec(phi: &BitVec, delta: &GF2Matrix, b: usize) -> BitVec {
        let a2 = delta.cols();
        let mut out = BitVec::zeros(a2 * b);
        let dt = delta.transpose();
        for f2 in 0..a2 {
            for f in dt.row(f2).ones() {
                let col = phi.slice(f * b, b);
                out.xor_at(f2 * b, &col);
            }
        }
        out
    }

    /// `φ ↦ A ∘ φ` as a raw vector map, `A : M → M'`.
    pub fn postcompose_vec(phi: &BitVec, a_map: &GF2Matrix, a: usize) -> BitVec {
        let (b, b2) = (a_map.cols(), a_map.rows());
        let mut out = BitVec::zeros(a * b2);
        for f in 0..a {
            let col = phi.slice(f * b, b);
            if !col.is_zero() {
                out.xor_at(f * b2, &a_map.mul_vec(&col));
            }
        }
        out
    }

    /// Matrix of precomposition in canonical coordinates.
    pub fn precompose_matrix(&self, delta: &GF2Matrix, target: &HomG) -> Result<GF2Matrix> {
        let mut out = GF2Matrix::zeros(target.dim(), self.dim());
        for (j, phi) in self.space.basis().iter().enumerate() {
            let v = Self::precompose_vec(phi, delta, self.target_dim);
            let c = target.space.coords(&v).ok_or_else(|| Error::NotChainMap("precomposition leaves the equivariant maps".into()))?;
            for i in c.ones() {
                out.set(i, j, true);
            }
        }
        Ok(out)
    }

    /// Matrix of postcomposition in canonical coordinates.
    pub fn postcompose_matrix(&self, a_map: &GF2Matrix, target: &HomG) -> Result<GF2Matrix> {
        let mut out = GF2Matrix::zeros(target.dim(), self.dim());
        for (j, phi) in self.space.basis().iter().enumerate() {
            let v = Self::postcompose_vec(phi, a_map, self.source_dim);
            let c = target.space.coords(&v).ok_or_else(|| Error::NotChainMap("postcomposition leaves the equivariant maps".into()))?;
            for i in c.ones() {
                out.set(i, j, true);
            }
        }
        Ok(out)
    }

    /// Canonical coordinates of the equivariant map determined by generator images.
    pub fn from_generator_images(&self, group: &FiniteGroup, res: &Resolution, i: usize, m: &GModule, images: &[BitVec]) -> Option<BitVec> {
        let gens = res.generators(i);
        if gens.len() != images.len() {
            return None;
        }
        let f = res.module(i);
        // Solve φ(g·gen_j) = g·images_j on the span; for free modules gen_j are basis vectors e_j.
        let mut raw = BitVec::zeros(self.source_dim * self.target_dim);
        match res.free_rank(i) {
            Some(_) => {
                let n = group.order();
                for (j, img) in images.iter().enumerate() {
                    for h in 0..n {
                        raw.xor_at((j * n + h) * self.target_dim, &m.action(h).mul_vec(img));
                    }
                }
            }
            None => {
                if f.dim() != gens.len() {
                    return None;
                }
                for (j, img) in images.iter().enumerate() {
                    raw.xor_at(j * self.target_dim, img);
                }
            }
        }
        self.space.coords(&raw)
    }

    /// Value of the map on generator `j`.
    pub fn eval_generator(&self, res: &Resolution, i: usize, phi_coords: &BitVec, j: usize) -> BitVec {
        let phi = self.space.vector(phi_coords);
        let g = &res.generators(i)[j];
        let mut out = BitVec::zeros(self.target_dim);
        for f in g.ones() {
            out.xor_assign(&phi.slice(f * self.target_dim, self.target_dim));
        }
        out
    }
}

/// `H^n(G, M)` with cocycle representatives in canonical `Hom_G(F_n, M)` coordinates.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub n: i64,
    pub hom: Option<HomG>,
    /// `ker δ^n / im δ^{n−1}`; `None` for `n < 0`.
    pub classes: Option<Subquotient>,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.classes.as_ref().map_or(0, |c| c.dim())
    }
}

/// Coboundary `Hom_G(F_n, M) → Hom_G(F_{n+1}, M)`.
pub fn coboundary(res: &Resolution, n: usize, source: &HomG, target: &HomG) -> Result<GF2Matrix> {
    source.precompose_matrix(res.map(n + 1), target)
}

pub fn group_cohomology(group: &FiniteGroup, m: &GModule, n: i64, res: &Resolution) -> Result<Cohomology> {
    if n < 0 {
        return Ok(Cohomology { n, hom: None, classes: None });
    }
    let nu = n as usize;
    res.require_depth(nu + 1)?;
    let hom_n = HomG::new(group, res, nu, m);
    let hom_next = HomG::new(group, res, nu + 1, m);
    let z = coboundary(res, nu, &hom_n, &hom_next)?.kernel();
    let b = if nu >= 1 {
        let hom_prev = HomG::new(group, res, nu - 1, m);
        coboundary(res, nu - 1, &hom_prev, &hom_n)?.image()
    } else {
        Subspace::zero(hom_n.dim())
    };
    let classes = subquotient(&z, &b)?;
    Ok(Cohomology { n, hom: Some(hom_n), classes: Some(classes) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_maps_have_expected_ranks() {
        let r = cyclic_resolution(3, 4).unwrap();
        r.validate().unwrap();
        assert_eq!(r.map(1).rank(), 2);
        assert_eq!(r.map(2).rank(), 1);
        let r2 = cyclic_resolution(2, 3).unwrap();
        assert_eq!(r2.map(1), r2.map(2));
        assert_eq!(r2.map(1).rank(), 1);
    }

    #[test]
    fn z2_cohomology_of_trivial_and_free() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let r = cyclic_resolution(2, 6).unwrap();
        let triv = GModule::trivial(&g, 1);
        let free = GModule::regular(&g);
        for n in 0..5 {
            assert_eq!(group_cohomology(&g, &triv, n, &r).unwrap().dim(), 1);
            assert_eq!(group_cohomology(&g, &free, n, &r).unwrap().dim(), usize::from(n == 0));
        }
        assert_eq!(group_cohomology(&g, &triv, -1, &r).unwrap().dim(), 0);
        assert!(matches!(group_cohomology(&g, &triv, 6, &r), Err(Error::InsufficientDepth { .. })));
    }

    #[test]
    fn hom_shortcut_matches_invariants() {
        let g = FiniteGroup::klein_four();
        let r = bar_resolution(&g, 2).unwrap();
        let m = GModule::regular(&g).direct_sum(&GModule::trivial(&g, 1));
        for i in 0..=2 {
            let a = HomG::new(&g, &r, i, &m);
            let b = HomG::invariant_maps(&g, r.module(i), &m);
            assert_eq!(a.space, b.space);
        }
    }

    #[test]
    fn rejects_bad_table() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }
}
