//! Vectors and square matrices over GF(2), packed into machine words.
//!
//! Coordinate `x_i` (1-based, as printed) lives in bit `i - 1`. Bit strings
//! used for I/O put `x_1` leftmost.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest supported dimension. Vectors pack into a `u32`, truth tables
/// have at most 2^16 entries.
pub const MAX_DIM: usize = 16;

/// Largest dimension accepted by [`enumerate_gl`].
pub const GL_ENUM_CAP: usize = 5;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension(n));
    }
    Ok(())
}

#[inline]
pub(crate) fn mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
pub(crate) fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

fn parse_bits(s: &str) -> Result<(usize, u32)> {
    let n = s.len();
    check_dim(n)?;
    let mut bits = 0u32;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => bits |= 1 << i,
            _ => return Err(Error::Parse(format!("not a bit string: {s:?}"))),
        }
    }
    Ok((n, bits))
}

fn format_bits(n: usize, bits: u32) -> String {
    (0..n).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// An element of Z_2^n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z2Vec {
    bits: u32,
    n: u8,
}

impl Z2Vec {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        check_dim(n)?;
        if bits & !mask(n) != 0 {
            return Err(Error::InvalidParams(format!("bits {bits:#b} exceed n = {n}")));
        }
        Ok(Z2Vec { bits, n: n as u8 })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// The unit vector e_i, 1-based.
    pub fn unit(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Index(i, n));
        }
        Self::new(n, 1 << (i - 1))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (n, bits) = parse_bits(s)?;
        Self::new(n, bits)
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate x_i, 1-based.
    pub fn get(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.dim(), "coordinate {i} out of range");
        (self.bits >> (i - 1) & 1) as u8
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn add(&self, other: &Z2Vec) -> Result<Z2Vec> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(Z2Vec {
            bits: self.bits ^ other.bits,
            n: self.n,
        })
    }

    pub fn to_bit_string(&self) -> String {
        format_bits(self.dim(), self.bits)
    }
}

impl fmt::Debug for Z2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z2Vec({})", self.to_bit_string())
    }
}

impl fmt::Display for Z2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

pub fn vec_add(a: &Z2Vec, b: &Z2Vec) -> Result<Z2Vec> {
    a.add(b)
}

pub fn weight(x: &Z2Vec) -> u32 {
    x.weight()
}

/// Square matrix over GF(2). Row i is the expression of x'_i in terms of
/// the input coordinates, so `apply` computes x' = Gx.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    n: usize,
    rows: Vec<u32>,
}

impl GF2Matrix {
    pub fn from_rows(n: usize, rows: Vec<u32>) -> Result<Self> {
        check_dim(n)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch(n, rows.len()));
        }
        if rows.iter().any(|r| r & !mask(n) != 0) {
            return Err(Error::InvalidParams("row has bits beyond n".into()));
        }
        Ok(GF2Matrix { n, rows })
    }

    /// Rows given as lists of 1-based input indices, e.g. `[[1, 3], [2]]`
    /// means x'_1 = x_1 + x_3, x'_2 = x_2.
    pub fn from_index_rows(n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let mut packed = Vec::with_capacity(rows.len());
        for r in rows {
            let mut bits = 0u32;
            for &j in r {
                if j == 0 || j > n {
                    return Err(Error::Index(j, n));
                }
                bits ^= 1 << (j - 1);
            }
            packed.push(bits);
        }
        Self::from_rows(n, packed)
    }

    /// Matrix whose i-th column is `cols[i]`, i.e. G e_i = cols[i].
    pub fn from_columns(n: usize, cols: &[u32]) -> Result<Self> {
        if cols.len() != n {
            return Err(Error::DimensionMismatch(n, cols.len()));
        }
        let mut rows = vec![0u32; n];
        for (j, &c) in cols.iter().enumerate() {
            for (i, r) in rows.iter_mut().enumerate() {
                if c >> i & 1 == 1 {
                    *r |= 1 << j;
                }
            }
        }
        Self::from_rows(n, rows)
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.len();
        let mut packed = Vec::with_capacity(n);
        for r in rows {
            let (len, bits) = parse_bits(r.as_ref())?;
            if len != n {
                return Err(Error::DimensionMismatch(n, len));
            }
            packed.push(bits);
        }
        Self::from_rows(n, packed)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_rows(n, (0..n).map(|i| 1u32 << i).collect())
    }

    /// The permutation matrix with x'_i = x_{perm[i]} (both 1-based).
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let rows: Vec<Vec<usize>> = perm.iter().map(|&j| vec![j]).collect();
        let g = Self::from_index_rows(n, &rows)?;
        if !g.is_invertible() {
            return Err(Error::InvalidParams("not a permutation".into()));
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn row_strings(&self) -> Vec<String> {
        self.rows.iter().map(|&r| format_bits(self.n, r)).collect()
    }

    /// G e_j as packed bits (0-based j).
    pub fn column(&self, j: usize) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | ((r >> j & 1) << i))
    }

    #[inline]
    pub fn apply_bits(&self, x: u32) -> u32 {
        let mut y = 0u32;
        for (i, &r) in self.rows.iter().enumerate() {
            y |= (parity(r & x) as u32) << i;
        }
        y
    }

    pub fn apply(&self, x: &Z2Vec) -> Result<Z2Vec> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch(self.n, x.dim()));
        }
        Z2Vec::new(self.n, self.apply_bits(x.bits()))
    }

    /// `self.mul(b)` applies `b` first, then `self`.
    pub fn mul(&self, b: &GF2Matrix) -> Result<GF2Matrix> {
        if self.n != b.n {
            return Err(Error::DimensionMismatch(self.n, b.n));
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                (0..self.n)
                    .filter(|&j| r >> j & 1 == 1)
                    .fold(0u32, |acc, j| acc ^ b.rows[j])
            })
            .collect();
        Ok(GF2Matrix { n: self.n, rows })
    }

    pub fn transpose(&self) -> GF2Matrix {
        GF2Matrix {
            n: self.n,
            rows: (0..self.n).map(|j| self.column(j)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Gauss-Jordan elimination on [A | I].
    pub fn invert(&self) -> Result<GF2Matrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r] >> col & 1 == 1).ok_or(Error::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            for r in 0..n {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(GF2Matrix { n, rows: inv })
    }

    /// Block matrix acting as `self` on the variables listed in `vars`
    /// (1-based, in order) and as the identity elsewhere, inside dimension `n`.
    pub fn embed(&self, n: usize, vars: &[usize]) -> Result<GF2Matrix> {
        if vars.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, vars.len()));
        }
        let mut g = GF2Matrix::identity(n)?;
        for (i, &vi) in vars.iter().enumerate() {
            if vi == 0 || vi > n {
                return Err(Error::Index(vi, n));
            }
            let mut row = 0u32;
            for (j, &vj) in vars.iter().enumerate() {
                if self.rows[i] >> j & 1 == 1 {
                    row |= 1 << (vj - 1);
                }
            }
            g.rows[vi - 1] = row;
        }
        if !g.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(g)
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Matrix{:?}", self.row_strings())
    }
}

pub(crate) fn rank_of(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

pub fn mat_apply(g: &GF2Matrix, x: &Z2Vec) -> Result<Z2Vec> {
    g.apply(x)
}

pub fn mat_mul(a: &GF2Matrix, b: &GF2Matrix) -> Result<GF2Matrix> {
    a.mul(b)
}

pub fn mat_invert(a: &GF2Matrix) -> Result<GF2Matrix> {
    a.invert()
}

pub fn is_invertible(a: &GF2Matrix) -> bool {
    a.is_invertible()
}

/// |GL_n(F_2)| = prod_{i<n} (2^n - 2^i).
pub fn gl_order(n: usize) -> u128 {
    (0..n).map(|i| (1u128 << n) - (1u128 << i)).product()
}

/// Every invertible n x n matrix exactly once, rows in lexicographic order
/// of their packed values.
pub fn enumerate_gl(n: usize) -> Result<GlIter> {
    GlIter::with_prefix(n, &[])
}

/// Depth-first enumeration of GL_n(F_2). Span membership is tracked as a
/// 2^n-bit mask per level, which is why the dimension is capped.
pub struct GlIter {
    n: usize,
    fixed: usize,
    rows: Vec<u32>,
    spans: Vec<u64>,
    started: bool,
    done: bool,
}

impl GlIter {
    /// Only matrices whose leading rows equal `prefix`.
    pub fn with_prefix(n: usize, prefix: &[u32]) -> Result<Self> {
        if n > GL_ENUM_CAP {
            return Err(Error::Cap(n, GL_ENUM_CAP));
        }
        check_dim(n)?;
        let mut spans = vec![1u64];
        for &r in prefix {
            let s = *spans.last().unwrap();
            if r == 0 || r & !mask(n) != 0 || s >> r & 1 == 1 {
                return Err(Error::InvalidParams("prefix rows are dependent".into()));
            }
            spans.push(extend_span(s, r, n));
        }
        Ok(GlIter {
            n,
            fixed: prefix.len(),
            rows: prefix.to_vec(),
            spans,
            started: false,
            done: prefix.len() > n,
        })
    }

    fn descend(&mut self) -> bool {
        // fill rows from the current length to n with the smallest choices
        while self.rows.len() < self.n {
            let s = *self.spans.last().unwrap();
            match next_outside(s, 0, self.n) {
                Some(r) => {
                    self.rows.push(r);
                    self.spans.push(extend_span(s, r, self.n));
                }
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        loop {
            if self.rows.len() <= self.fixed {
                return false;
            }
            let last = self.rows.pop().unwrap();
            self.spans.pop();
            let s = *self.spans.last().unwrap();
            if let Some(r) = next_outside(s, last, self.n) {
                self.rows.push(r);
                self.spans.push(extend_span(s, r, self.n));
                if self.descend() {
                    return true;
                }
            }
        }
    }
}

fn extend_span(span: u64, r: u32, n: usize) -> u64 {
    let mut out = span;
    for v in 0..(1u32 << n) {
        if span >> v & 1 == 1 {
            out |= 1u64 << (v ^ r);
        }
    }
    out
}

fn next_outside(span: u64, after: u32, n: usize) -> Option<u32> {
    ((after + 1)..(1u32 << n)).find(|&r| span >> r & 1 == 0)
}

impl Iterator for GlIter {
    type Item = GF2Matrix;

    fn next(&mut self) -> Option<GF2Matrix> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.descend() || self.advance()
        } else {
            self.advance()
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(GF2Matrix {
            n: self.n,
            rows: self.rows.clone(),
        })
    }
}

/// A uniformly random invertible matrix, drawn row by row with rejection of
/// dependent rows from a ChaCha8 stream seeded with `seed`.
pub fn random_invertible(n: usize, seed: u64) -> Result<GF2Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_invertible_with(n, &mut rng)
}

pub fn random_invertible_with<R: Rng>(n: usize, rng: &mut R) -> Result<GF2Matrix> {
    check_dim(n)?;
    let mut rows: Vec<u32> = Vec::with_capacity(n);
    while rows.len() < n {
        let r = rng.gen::<u32>() & mask(n);
        if r == 0 {
            continue;
        }
        let mut trial = rows.clone();
        trial.push(r);
        if rank_of(&trial) == trial.len() {
            rows = trial;
        }
    }
    GF2Matrix::from_rows(n, rows)
}
