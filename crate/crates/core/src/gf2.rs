//! Dense bit-packed linear algebra over the two-element field.
//!
//! Vectors and matrix rows are packed into `u64` words. Subspaces are kept in
//! reduced column echelon form: every basis vector has a pivot (its lowest set
//! index), pivots are strictly ascending, and each pivot row is zero in every
//! other basis vector. Two generating sets of the same subspace therefore give
//! identical `Subspace` values.

use crate::error::{Error, Result};
use std::fmt;

const W: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(W)
}

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / W] >> (i % W)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % W);
        if b {
            self.words[i / W] |= m;
        } else {
            self.words[i / W] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / W] ^= 1u64 << (i % W);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index.
    pub fn lowest(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * W + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let t = w.trailing_zeros() as usize;
                out.push(k * W + t);
                w &= w - 1;
            }
        }
        out
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut r = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            r.set(i, true);
        }
        for i in other.ones() {
            r.set(self.len + i, true);
        }
        r
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut r = BitVec::zeros(len);
        for i in self.ones() {
            if i >= start && i < start + len {
                r.set(i - start, true);
            }
        }
        r
    }

    /// Writes `v` into positions `start..start + v.len()` by xor.
    pub fn xor_at(&mut self, start: usize, v: &BitVec) {
        for i in v.ones() {
            self.flip(start + i);
        }
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// Dense row-major bit-packed matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        GF2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds from rows of 0/1 entries. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, cols: &[BitVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        (self.data[i * self.stride + j / W] >> (j % W)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        let m = 1u64 << (j % W);
        let w = &mut self.data[i * self.stride + j / W];
        if b {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        let b = self.get(i, j);
        self.set(i, j, !b);
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec { len: self.cols, words: self.row_words(i).to_vec() }
    }

    pub fn col(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVec> {
        let t = self.transpose();
        (0..self.cols).map(|j| t.row(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "mul_vec dimension mismatch");
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(i).iter().zip(&v.words) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = GF2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = i * out.stride;
            for k in self.row(i).ones() {
                let src = other.row_words(k);
                for (w, s) in out.data[dst..dst + out.stride].iter_mut().zip(src) {
                    *w ^= *s;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= *b;
        }
        out
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = GF2Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                out.set(i, j, true);
            }
            for j in other.row(i).ones() {
                out.set(i, self.cols + j, true);
            }
        }
        out
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &GF2Matrix) {
        for i in 0..block.rows {
            for j in block.row(i).ones() {
                self.set(r0 + i, c0 + j, true);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> GF2Matrix {
        let mut out = GF2Matrix::zeros(nr, nc);
        for i in 0..nr {
            for j in self.row(r0 + i).ones() {
                if j >= c0 && j < c0 + nc {
                    out.set(i, j - c0, true);
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &GF2Matrix) -> GF2Matrix {
        let mut out = GF2Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                out.put_block(i * other.rows, j * other.cols, other);
            }
        }
        out
    }

    /// Row echelon form in place; returns the pivot column of each pivot row.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            if p != r {
                for k in 0..self.stride {
                    self.data.swap(p * self.stride + k, r * self.stride + k);
                }
            }
            let start = if reduced { 0 } else { r + 1 };
            for i in start..self.rows {
                if i != r && self.get(i, c) {
                    for k in 0..self.stride {
                        let s = self.data[r * self.stride + k];
                        self.data[i * self.stride + k] ^= s;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut gens = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::unit(self.cols, f);
            for (r, &c) in pivots.iter().enumerate() {
                if m.get(r, f) {
                    v.set(c, true);
                }
            }
            gens.push(v);
        }
        Subspace::span(self.cols, gens)
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, self.columns())
    }

    /// Some `x` with `self · x = b`, or `None`.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows, "solve dimension mismatch");
        let mut aug = GF2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                aug.set(i, j, true);
            }
            if b.get(i) {
                aug.set(i, self.cols, true);
            }
        }
        let pivots = aug.eliminate(true);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if aug.get(r, self.cols) {
                x.set(c, true);
            }
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<GF2Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&GF2Matrix::identity(n));
        let pivots = aug.eliminate(true);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

pub fn rank(m: &GF2Matrix) -> usize {
    m.rank()
}

pub fn kernel(m: &GF2Matrix) -> Subspace {
    m.kernel()
}

pub fn image(m: &GF2Matrix) -> Subspace {
    m.image()
}

/// A linear subspace of GF(2)^n with its canonical basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}; {:?})", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| BitVec::unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonical basis of the span of `gens`.
    pub fn span<I: IntoIterator<Item = BitVec>>(ambient: usize, gens: I) -> Self {
        // slot[p] holds the basis vector whose lowest bit is p.
        let mut slot: Vec<Option<BitVec>> = vec![None; ambient];
        for mut v in gens {
            assert_eq!(v.len(), ambient, "generator length mismatch");
            while let Some(p) = v.lowest() {
                match &slot[p] {
                    Some(b) => v.xor_assign(b),
                    None => {
                        slot[p] = Some(v);
                        break;
                    }
                }
            }
        }
        let pivots: Vec<usize> = (0..ambient).filter(|&p| slot[p].is_some()).collect();
        let mut basis: Vec<BitVec> = pivots.iter().map(|&p| slot[p].take().unwrap()).collect();
        // Clear each pivot from every other vector; only vectors with smaller pivots can hold it.
        for j in (0..basis.len()).rev() {
            let p = pivots[j];
            let (head, tail) = basis.split_at_mut(j);
            let bj = &tail[0];
            for b in head.iter_mut() {
                if b.get(p) {
                    b.xor_assign(bj);
                }
            }
        }
        Subspace { ambient, basis, pivots }
    }

    pub fn from_matrix_columns(m: &GF2Matrix) -> Self {
        m.image()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as the columns of an ambient×dim matrix.
    pub fn basis_matrix(&self) -> GF2Matrix {
        GF2Matrix::from_columns(self.ambient, &self.basis)
    }

    /// Canonical representative of `v` modulo this subspace: zero on every pivot.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        v.len() == self.ambient && self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// First basis vector of `other` not in `self`.
    pub fn containment_witness(&self, other: &Subspace) -> Option<BitVec> {
        other.basis.iter().find(|b| !self.contains(b)).cloned()
    }

    /// Coordinates of `v` in the canonical basis; `None` if `v` is not in the subspace.
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        if !self.contains(v) {
            return None;
        }
        let mut c = BitVec::zeros(self.dim());
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                c.set(i, true);
            }
        }
        Some(c)
    }

    /// Vector with the given coordinates.
    pub fn vector(&self, coords: &BitVec) -> BitVec {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        let mut v = BitVec::zeros(self.ambient);
        for i in coords.ones() {
            v.xor_assign(&self.basis[i]);
        }
        v
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "sum of subspaces in different ambients");
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "intersection of subspaces in different ambients");
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let m = self.basis_matrix().hstack(&other.basis_matrix());
        let k = m.kernel();
        let gens = k.basis.iter().map(|x| self.vector(&x.slice(0, self.dim())));
        Subspace::span(self.ambient, gens)
    }

    /// Image under `m`.
    pub fn map(&self, m: &GF2Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "map dimension mismatch");
        Subspace::span(m.rows(), self.basis.iter().map(|b| m.mul_vec(b)))
    }

    /// Matrix of `m` restricted to this subspace, in its coordinates, landing in
    /// `target` coordinates. Errors if some image leaves `target`.
    pub fn restrict(&self, m: &GF2Matrix, target: &Subspace) -> Result<GF2Matrix> {
        let mut out = GF2Matrix::zeros(target.dim(), self.dim());
        for (j, b) in self.basis.iter().enumerate() {
            let img = m.mul_vec(b);
            let c = target.coords(&img).ok_or_else(|| Error::ContainmentViolation {
                context: "restricted map leaves its target".into(),
                witness: img.ones(),
            })?;
            for i in c.ones() {
                out.set(i, j, true);
            }
        }
        Ok(out)
    }
}

/// `Z/B` with canonical coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub z: Subspace,
    pub b: Subspace,
    /// Canonical basis of the reduced image `reduce_B(Z)`; its vectors are the section.
    reps: Subspace,
    /// Maps Z-coordinates to quotient coordinates.
    pub projection: GF2Matrix,
    /// Ambient×dim matrix of the canonical coset representatives.
    pub section: GF2Matrix,
}

impl Subquotient {
    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.z.ambient_dim()
    }

    /// Quotient coordinates of an ambient vector lying in `Z`.
    pub fn class_of(&self, v: &BitVec) -> Option<BitVec> {
        if !self.z.contains(v) {
            return None;
        }
        self.reps.coords(&self.b.reduce(v))
    }

    /// Canonical representative in the ambient space.
    pub fn representative(&self, coords: &BitVec) -> BitVec {
        self.reps.vector(coords)
    }

    pub fn representatives(&self) -> &[BitVec] {
        self.reps.basis()
    }
}

pub fn subquotient(z: &Subspace, b: &Subspace) -> Result<Subquotient> {
    if z.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "subquotient ambient".into(),
            expected: z.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    if let Some(w) = z.containment_witness(b) {
        return Err(Error::ContainmentViolation { context: "subquotient requires B ⊆ Z".into(), witness: w.ones() });
    }
    let reps = Subspace::span(z.ambient_dim(), z.basis().iter().map(|v| b.reduce(v)));
    let mut projection = GF2Matrix::zeros(reps.dim(), z.dim());
    for (j, v) in z.basis().iter().enumerate() {
        let c = reps.coords(&b.reduce(v)).expect("reduced vector lies in reps");
        for i in c.ones() {
            projection.set(i, j, true);
        }
    }
    let section = reps.basis_matrix();
    Ok(Subquotient { z: z.clone(), b: b.clone(), reps, projection, section })
}

pub fn preimage(m: &GF2Matrix, w: &Subspace) -> Result<Subspace> {
    if w.ambient_dim() != m.rows() {
        return Err(Error::DimensionMismatch { context: "preimage target".into(), expected: m.rows(), found: w.ambient_dim() });
    }
    let reduced: Vec<BitVec> = (0..m.cols()).map(|j| w.reduce(&m.col(j))).collect();
    Ok(GF2Matrix::from_columns(m.rows(), &reduced).kernel())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_small_cases() {
        assert_eq!(GF2Matrix::identity(3).rank(), 3);
        assert_eq!(GF2Matrix::zeros(4, 2).rank(), 0);
        assert_eq!(GF2Matrix::from_rows(&[vec![1, 1], vec![1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_of_row() {
        let k = GF2Matrix::from_rows(&[vec![1, 1]]).kernel();
        assert_eq!(k.basis(), &[BitVec::from_bits(&[1, 1])]);
    }

    #[test]
    fn span_is_canonical() {
        let a = Subspace::span(3, [BitVec::from_bits(&[1, 1, 0]), BitVec::from_bits(&[0, 1, 1])]);
        let b = Subspace::span(3, [BitVec::from_bits(&[1, 0, 1]), BitVec::from_bits(&[1, 1, 0])]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[0, 1]);
    }

    #[test]
    fn subquotient_rejects_non_containment() {
        let z = Subspace::span(2, [BitVec::from_bits(&[1, 0])]);
        let b = Subspace::span(2, [BitVec::from_bits(&[0, 1])]);
        match subquotient(&z, &b) {
            Err(Error::ContainmentViolation { witness, .. }) => assert_eq!(witness, vec![1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn section_projection_identity() {
        let z = Subspace::full(3);
        let b = Subspace::span(3, [BitVec::from_bits(&[1, 1, 0])]);
        let q = subquotient(&z, &b).unwrap();
        assert_eq!(q.dim(), 2);
        for (i, r) in q.representatives().iter().enumerate() {
            assert_eq!(q.class_of(r).unwrap(), BitVec::unit(2, i));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = GF2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), GF2Matrix::identity(3));
        let b = BitVec::from_bits(&[1, 0, 1]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(GF2Matrix::from_rows(&[vec![1, 1], vec![1, 1]]).solve(&BitVec::from_bits(&[1, 0])).is_none());
    }
}
