//! Cubic forms over GF(2) in algebraic normal form.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{check_dim, parity, GF2Matrix, Z2Vec};

/// A polynomial of degree at most 3 in x_1..x_n with zero constant term.
///
/// Monomials are stored as bitmasks of their variables, so x_i^2 = x_i is
/// built in and set equality is syntactic equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CubicForm {
    n: usize,
    monomials: BTreeSet<u32>,
}

/// GF(2) Moebius transform, in place. It is its own inverse and maps a
/// truth table to ANF coefficients and back.
pub fn moebius(table: &mut [u8]) {
    let len = table.len();
    assert!(len.is_power_of_two(), "table length must be a power of two");
    let mut step = 1;
    while step < len {
        for x in 0..len {
            if x & step != 0 {
                table[x] ^= table[x ^ step];
            }
        }
        step <<= 1;
    }
}

impl CubicForm {
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(CubicForm {
            n,
            monomials: BTreeSet::new(),
        })
    }

    /// Builds a form from monomials given as 1-based index lists. Repeated
    /// monomials cancel.
    pub fn from_monomials<I, M>(n: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: AsRef<[usize]>,
    {
        let mut f = Self::zero(n)?;
        for m in monomials {
            f.toggle(m.as_ref())?;
        }
        Ok(f)
    }

    pub fn from_parts(n: usize, cubic: &[[usize; 3]], quadratic: &[[usize; 2]], linear: &[usize]) -> Result<Self> {
        let mut f = Self::zero(n)?;
        for m in cubic {
            f.toggle(m)?;
        }
        for m in quadratic {
            f.toggle(m)?;
        }
        for &i in linear {
            f.toggle(&[i])?;
        }
        Ok(f)
    }

    /// Adds the monomial prod x_i over `vars` (1-based, distinct).
    pub fn toggle(&mut self, vars: &[usize]) -> Result<()> {
        let mut m = 0u32;
        for &i in vars {
            if i == 0 || i > self.n {
                return Err(Error::Index(i, self.n));
            }
            if m >> (i - 1) & 1 == 1 {
                return Err(Error::InvalidParams(format!("repeated variable in {vars:?}")));
            }
            m |= 1 << (i - 1);
        }
        if m == 0 || m.count_ones() > 3 {
            return Err(Error::InvalidParams(format!(
                "monomial {vars:?} must have degree 1..=3"
            )));
        }
        self.toggle_mask(m);
        Ok(())
    }

    fn toggle_mask(&mut self, m: u32) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn monomial_masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    fn of_degree(&self, d: u32) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .monomials
            .iter()
            .filter(|m| m.count_ones() == d)
            .map(|&m| (0..self.n).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect())
            .collect();
        out.sort();
        out
    }

    /// Triples i<j<k with A_ijk = 1, sorted, 1-based.
    pub fn cubic(&self) -> Vec<[usize; 3]> {
        self.of_degree(3).into_iter().map(|v| [v[0], v[1], v[2]]).collect()
    }

    pub fn quadratic(&self) -> Vec<[usize; 2]> {
        self.of_degree(2).into_iter().map(|v| [v[0], v[1]]).collect()
    }

    pub fn linear(&self) -> Vec<usize> {
        self.of_degree(1).into_iter().map(|v| v[0]).collect()
    }

    pub fn degree(&self) -> u32 {
        self.monomials.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    #[inline]
    pub fn eval_bits(&self, x: u32) -> u8 {
        let mut s = 0u8;
        for &m in &self.monomials {
            s ^= (x & m == m) as u8;
        }
        s
    }

    pub fn eval(&self, x: &Z2Vec) -> Result<u8> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch(self.n, x.dim()));
        }
        Ok(self.eval_bits(x.bits()))
    }

    /// Values at all 2^n points, indexed by packed point.
    pub fn truth_table(&self) -> Vec<u8> {
        let mut t = vec![0u8; 1 << self.n];
        for &m in &self.monomials {
            t[m as usize] ^= 1;
        }
        moebius(&mut t);
        t
    }

    /// Interpolates a truth table. Fails if the ANF has degree above 3 or a
    /// constant term.
    pub fn from_truth_table(n: usize, table: &[u8]) -> Result<Self> {
        check_dim(n)?;
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch(1 << n, table.len()));
        }
        let mut anf: Vec<u8> = table.iter().map(|b| b & 1).collect();
        moebius(&mut anf);
        let mut f = Self::zero(n)?;
        for (m, &c) in anf.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let d = (m as u32).count_ones();
            if d == 0 {
                return Err(Error::Verification("constant term in interpolated form".into()));
            }
            if d > 3 {
                return Err(Error::Verification(format!("interpolated degree {d} exceeds 3")));
            }
            f.monomials.insert(m as u32);
        }
        Ok(f)
    }

    pub fn add(&self, other: &CubicForm) -> Result<CubicForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let monomials = self.monomials.symmetric_difference(&other.monomials).copied().collect();
        Ok(CubicForm { n: self.n, monomials })
    }

    /// Renames x_i to x_{vars[i-1]} inside an n-variable ambient space.
    pub fn embed(&self, n: usize, vars: &[usize]) -> Result<CubicForm> {
        if vars.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, vars.len()));
        }
        let mut seen = 0u32;
        for &v in vars {
            if v == 0 || v > n {
                return Err(Error::Index(v, n));
            }
            if seen >> (v - 1) & 1 == 1 {
                return Err(Error::InvalidParams(format!("repeated target variable {v}")));
            }
            seen |= 1 << (v - 1);
        }
        let mut out = Self::zero(n)?;
        for &m in &self.monomials {
            let mut t = 0u32;
            for (i, &v) in vars.iter().enumerate() {
                if m >> i & 1 == 1 {
                    t |= 1 << (v - 1);
                }
            }
            out.toggle_mask(t);
        }
        Ok(out)
    }

    /// The same polynomial viewed in a larger ambient dimension.
    pub fn widen(&self, n: usize) -> Result<CubicForm> {
        let vars: Vec<usize> = (1..=self.n).collect();
        self.embed(n, &vars)
    }

    /// x_i + (x_i + 1) * self, for x_i not occurring in self; the "cone"
    /// pattern of the odd-dimensional reductions. With `with_apex` false
    /// the leading x_i is dropped.
    pub fn cone(&self, apex: usize, with_apex: bool) -> Result<CubicForm> {
        if apex == 0 || apex > self.n {
            return Err(Error::Index(apex, self.n));
        }
        let a = 1u32 << (apex - 1);
        let mut out = self.clone();
        for &m in &self.monomials {
            if m & a != 0 || m.count_ones() > 2 {
                return Err(Error::InvalidParams(
                    "cone needs a quadratic base free of the apex".into(),
                ));
            }
            out.toggle_mask(m | a);
        }
        if with_apex {
            out.toggle_mask(a);
        }
        Ok(out)
    }

    pub fn to_graph(&self) -> TriGraph {
        to_graph(self)
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for deg in [3u32, 2, 1] {
            for m in self.of_degree(deg) {
                terms.push(m.iter().map(|i| format!("x{i}")).collect::<String>());
            }
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl fmt::Debug for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubicForm[n={}]({})", self.n, self)
    }
}

pub fn eval(alpha: &CubicForm, x: &Z2Vec) -> Result<u8> {
    alpha.eval(x)
}

#[inline]
pub fn beta_bits(alpha: &CubicForm, x: u32, y: u32) -> u8 {
    alpha.eval_bits(x ^ y) ^ alpha.eval_bits(x) ^ alpha.eval_bits(y)
}

#[inline]
pub fn phi_bits(alpha: &CubicForm, x: u32, y: u32, z: u32) -> u8 {
    let e = |v| alpha.eval_bits(v);
    e(x ^ y ^ z) ^ e(x ^ y) ^ e(x ^ z) ^ e(y ^ z) ^ e(x) ^ e(y) ^ e(z)
}

fn same_dim(n: usize, xs: &[&Z2Vec]) -> Result<()> {
    for x in xs {
        if x.dim() != n {
            return Err(Error::DimensionMismatch(n, x.dim()));
        }
    }
    Ok(())
}

/// beta(x, y) = alpha(x + y) + alpha(x) + alpha(y).
pub fn beta_polar(alpha: &CubicForm, x: &Z2Vec, y: &Z2Vec) -> Result<u8> {
    same_dim(alpha.dim(), &[x, y])?;
    Ok(beta_bits(alpha, x.bits(), y.bits()))
}

/// The seven-term polarization of alpha.
pub fn phi_polar(alpha: &CubicForm, x: &Z2Vec, y: &Z2Vec, z: &Z2Vec) -> Result<u8> {
    same_dim(alpha.dim(), &[x, y, z])?;
    Ok(phi_bits(alpha, x.bits(), y.bits(), z.bits()))
}

fn check_signature(p: usize, q: usize, min: usize) -> Result<usize> {
    let n = p + q;
    if n < min {
        return Err(Error::InvalidParams(format!("p + q = {n} is below {min}")));
    }
    check_dim(n)?;
    Ok(n)
}

/// Sum of all cubic, all quadratic and all linear monomials.
pub fn make_alpha_n(n: usize) -> Result<CubicForm> {
    make_alpha_pq(0, n)
}

/// alpha_n plus x_1 + ... + x_p: linear terms survive only for i > p.
pub fn make_alpha_pq(p: usize, q: usize) -> Result<CubicForm> {
    let n = check_signature(p, q, 3)?;
    let mut f = make_alpha_cl_pq(p, q)?;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                f.toggle_mask(1 << i | 1 << j | 1 << k);
            }
        }
    }
    Ok(f)
}

pub fn make_alpha_cl_n(n: usize) -> Result<CubicForm> {
    make_alpha_cl_pq(0, n)
}

/// All quadratic monomials plus x_i for i > p.
pub fn make_alpha_cl_pq(p: usize, q: usize) -> Result<CubicForm> {
    let n = check_signature(p, q, 1)?;
    let mut f = CubicForm::zero(n)?;
    for i in 0..n {
        for j in i + 1..n {
            f.toggle_mask(1 << i | 1 << j);
        }
        if i >= p {
            f.toggle_mask(1 << i);
        }
    }
    Ok(f)
}

/// `plus` blocks x_a x_b followed by `minus` blocks x_a x_b + x_a + x_b on
/// consecutive variable pairs starting at x_start, inside dimension n.
pub fn make_cl_block_sum(plus: usize, minus: usize, start: usize, n: usize) -> Result<CubicForm> {
    if start == 0 {
        return Err(Error::Index(0, n));
    }
    let end = start + 2 * (plus + minus) - 1;
    if plus + minus > 0 && end > n {
        return Err(Error::InvalidParams(format!("blocks end at x{end} beyond n = {n}")));
    }
    let mut f = CubicForm::zero(n)?;
    for b in 0..plus + minus {
        let a = start + 2 * b;
        f.toggle(&[a, a + 1])?;
        if b >= plus {
            f.toggle(&[a])?;
            f.toggle(&[a + 1])?;
        }
    }
    Ok(f)
}

/// alpha^Cl_{p,q} placed on the variables `vars` of an n-variable space.
pub fn cl_on(p: usize, q: usize, vars: &[usize], n: usize) -> Result<CubicForm> {
    if p + q == 0 {
        return CubicForm::zero(n);
    }
    make_alpha_cl_pq(p, q)?.embed(n, vars)
}

/// A(x_1..x_n) + B(x_1, x_{n+1}, .., x_{n+m-1}) + x_1.
pub fn glue_forms(a: &CubicForm, b: &CubicForm) -> Result<CubicForm> {
    glue_forms_with(a, b, true)
}

/// As [`glue_forms`], optionally without the trailing x_1.
pub fn glue_forms_with(a: &CubicForm, b: &CubicForm, correction: bool) -> Result<CubicForm> {
    let n = a.dim() + b.dim() - 1;
    let mut vars = vec![1];
    vars.extend(a.dim() + 1..=n);
    let mut out = a.widen(n)?.add(&b.embed(n, &vars)?)?;
    if correction {
        out.toggle_mask(1);
    }
    Ok(out)
}

type Base = (&'static [[usize; 3]], &'static [[usize; 2]], &'static [usize]);

// Graph dictionary: shaded triangle -> cubic, thick edge -> quadratic,
// filled vertex -> linear.
const T03: Base = (&[[1, 2, 3]], &[[1, 2], [1, 3], [2, 3]], &[1, 2, 3]);
const T04: Base = (&[[1, 3, 4]], &[[1, 3], [1, 4], [3, 4]], &[1, 3, 4]);
const T05: Base = (&[[1, 2, 3], [1, 4, 5]], &[[2, 3], [1, 4], [1, 5], [4, 5]], &[1, 4, 5]);
const T06: Base = (
    &[[1, 3, 4], [1, 5, 6]],
    &[[1, 2], [3, 4], [1, 5], [1, 6], [5, 6]],
    &[1, 2, 5, 6],
);

const MIXED: &[((usize, usize), Base)] = &[
    ((1, 2), (&[[1, 2, 3]], &[[1, 2], [1, 3], [2, 3]], &[1])),
    ((2, 2), (&[[1, 3, 4]], &[[1, 3], [1, 4], [3, 4]], &[1])),
    ((1, 3), (&[[1, 3, 4]], &[[1, 3], [1, 4], [3, 4]], &[1, 2, 4])),
    (
        (2, 3),
        (&[[1, 2, 3], [1, 4, 5]], &[[1, 4], [1, 5], [4, 5], [2, 3]], &[1]),
    ),
    (
        (1, 4),
        (&[[1, 2, 3], [1, 4, 5]], &[[1, 4], [1, 5], [4, 5], [2, 3]], &[1, 2, 3]),
    ),
    (
        (3, 3),
        (&[[1, 5, 6], [1, 3, 4]], &[[1, 5], [1, 6], [5, 6], [3, 4], [1, 2]], &[1]),
    ),
    (
        (2, 4),
        (
            &[[1, 5, 6], [1, 3, 4]],
            &[[1, 5], [1, 6], [5, 6], [3, 4], [1, 2]],
            &[1, 2, 3, 4],
        ),
    ),
    (
        (1, 5),
        (
            &[[1, 5, 6], [1, 3, 4]],
            &[[1, 2], [1, 5], [1, 6], [5, 6], [3, 4]],
            &[1, 5, 6],
        ),
    ),
    (
        (2, 5),
        (
            &[[1, 6, 7], [1, 2, 3], [1, 4, 5]],
            &[[1, 2], [1, 3], [2, 3], [4, 5], [1, 6], [1, 7], [6, 7]],
            &[1, 6, 7],
        ),
    ),
    (
        (2, 6),
        (
            &[[1, 7, 8], [1, 3, 4], [1, 5, 6]],
            &[[1, 7], [1, 8], [7, 8], [5, 6], [1, 3], [1, 4], [3, 4]],
            &[1, 7, 8],
        ),
    ),
    (
        (3, 6),
        (
            &[[1, 8, 9], [1, 4, 5], [1, 6, 7], [1, 2, 3]],
            &[[2, 3], [4, 5], [1, 8], [1, 9], [8, 9], [1, 6], [1, 7], [6, 7]],
            &[1, 8, 9],
        ),
    ),
];

fn from_base(n: usize, b: Base) -> Result<CubicForm> {
    CubicForm::from_parts(n, b.0, b.1, b.2)
}

fn mixed_base(p: usize, q: usize) -> Option<Base> {
    MIXED
        .iter()
        .find(|(s, _)| *s == (p, q) || *s == (q, p))
        .map(|(_, b)| *b)
}

/// The signatures whose graphs are tabulated rather than derived.
pub fn tilde_base_signatures() -> Vec<(usize, usize)> {
    let mut v = vec![(0, 3), (0, 4), (0, 5), (0, 6)];
    v.extend(MIXED.iter().map(|(s, _)| *s));
    v
}

fn tilde_0n(n: usize) -> Result<CubicForm> {
    let base_n = 3 + (n - 3) % 4;
    let mut f = from_base(base_n, [T03, T04, T05, T06][base_n - 3])?;
    let block = from_base(5, T05)?;
    while f.dim() < n {
        f = glue_forms(&f, &block)?;
    }
    Ok(f)
}

/// The triangulated-graph representative tilde-alpha_{p,q}.
///
/// Pure signatures use the 4-block recursion on tilde-alpha_{0,5}, with
/// tilde-alpha_{n,0} = tilde-alpha_{0,n} + x_1. Mixed signatures use the
/// tabulated graphs, then the ladder
/// tilde(p+2, q+2) = glue(tilde(p, q), tilde(2, 3)) once both entries are
/// at least 3, and otherwise tilde(p, q+4) = tilde(p+4, q).
pub fn make_tilde(p: usize, q: usize) -> Result<CubicForm> {
    let n = check_signature(p, q, 3)?;
    if p == 0 {
        return tilde_0n(n);
    }
    if q == 0 {
        let mut f = tilde_0n(n)?;
        f.toggle_mask(1);
        return Ok(f);
    }
    if let Some(b) = mixed_base(p, q) {
        return from_base(n, b);
    }
    let (a, b) = (p.min(q), p.max(q));
    if a >= 3 {
        let inner = make_tilde(a - 2, b - 2)?;
        return glue_forms(&inner, &make_tilde(2, 3)?);
    }
    make_tilde(a + 4, b - 4)
}

/// The form x -> alpha(Gx), in canonical ANF.
pub fn substitute(alpha: &CubicForm, g: &GF2Matrix) -> Result<CubicForm> {
    let n = alpha.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch(n, g.dim()));
    }
    if !g.is_invertible() {
        return Err(Error::Singular);
    }
    let t = alpha.truth_table();
    let composed: Vec<u8> = (0..1u32 << n).map(|x| t[g.apply_bits(x) as usize]).collect();
    CubicForm::from_truth_table(n, &composed)
}

pub fn zero_count(alpha: &CubicForm) -> u64 {
    alpha.truth_table().iter().filter(|&&b| b == 0).count() as u64
}

/// GL_n(F_2)-invariant fingerprints of a cubic form.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct InvariantProfile {
    pub zero_count: u64,
    /// Sorted zero counts of x -> alpha(x + a) + alpha(x) over all a.
    pub derivative_zero_counts: Vec<u32>,
    /// dim { z : phi(x, y, z) = 0 for all x, y }.
    pub radical_dim: u32,
    /// Sorted ranks of (x, y) -> phi(x, y, a) over all a.
    pub phi_ranks: Vec<u32>,
}

impl InvariantProfile {
    /// Name and values of the first invariant on which the profiles differ.
    pub fn first_difference(&self, other: &InvariantProfile) -> Option<(&'static str, String, String)> {
        if self.zero_count != other.zero_count {
            return Some(("zero_count", self.zero_count.to_string(), other.zero_count.to_string()));
        }
        if self.radical_dim != other.radical_dim {
            return Some((
                "radical_dim",
                self.radical_dim.to_string(),
                other.radical_dim.to_string(),
            ));
        }
        if self.derivative_zero_counts != other.derivative_zero_counts {
            return Some((
                "derivative_zero_counts",
                format!("{:?}", self.derivative_zero_counts),
                format!("{:?}", other.derivative_zero_counts),
            ));
        }
        if self.phi_ranks != other.phi_ranks {
            return Some((
                "phi_ranks",
                format!("{:?}", self.phi_ranks),
                format!("{:?}", other.phi_ranks),
            ));
        }
        None
    }
}

fn walsh_hadamard(v: &mut [i64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for i in (0..len).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h <<= 1;
    }
}

/// For each a, the number of x with alpha(x + a) = alpha(x), through the
/// Wiener-Khinchin identity: autocorrelation = WHT(WHT(sign)^2) / 2^n.
pub fn derivative_zero_counts(table: &[u8]) -> Vec<u32> {
    let len = table.len();
    let mut v: Vec<i64> = table.iter().map(|&b| if b & 1 == 1 { -1 } else { 1 }).collect();
    walsh_hadamard(&mut v);
    for c in v.iter_mut() {
        *c *= *c;
    }
    walsh_hadamard(&mut v);
    v.iter().map(|&r| ((len as i64 + r / len as i64) / 2) as u32).collect()
}

/// phi(e_i, e_j, .) as a linear functional on z, packed; trilinearity of
/// phi makes these n^2 vectors a complete description.
fn phi_slices(alpha: &CubicForm) -> Vec<Vec<u32>> {
    let n = alpha.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(0u32, |acc, k| {
                        acc | (phi_bits(alpha, 1 << i, 1 << j, 1 << k) as u32) << k
                    })
                })
                .collect()
        })
        .collect()
}

fn ranks_from_slices(slices: &[Vec<u32>], n: usize) -> Vec<u32> {
    (0..1u32 << n)
        .into_par_iter()
        .map(|a| {
            let rows: Vec<u32> = (0..n)
                .map(|i| (0..n).fold(0u32, |acc, j| acc | (parity(slices[i][j] & a) as u32) << j))
                .collect();
            crate::gf2::rank_of(&rows) as u32
        })
        .collect()
}

/// For each a, the rank of the bilinear form (x, y) -> phi(x, y, a).
pub fn phi_rank_table(alpha: &CubicForm) -> Vec<u32> {
    ranks_from_slices(&phi_slices(alpha), alpha.dim())
}

pub fn invariant_profile(alpha: &CubicForm) -> InvariantProfile {
    let n = alpha.dim();
    let table = alpha.truth_table();
    let zero_count = table.iter().filter(|&&b| b == 0).count() as u64;
    let mut derivative_zero_counts = derivative_zero_counts(&table);
    derivative_zero_counts.sort_unstable();
    let slices = phi_slices(alpha);
    let all: Vec<u32> = slices.iter().flatten().copied().collect();
    let radical_dim = (n - crate::gf2::rank_of(&all)) as u32;
    let mut phi_ranks = ranks_from_slices(&slices, n);
    phi_ranks.sort_unstable();
    InvariantProfile {
        zero_count,
        derivative_zero_counts,
        radical_dim,
        phi_ranks,
    }
}

/// Checks that alpha_n vanishes exactly on points of weight divisible by 4.
pub fn weight_rule_check(n: usize) -> Result<bool> {
    let t = make_alpha_n(n)?.truth_table();
    Ok(t.iter()
        .enumerate()
        .all(|(x, &v)| (v == 0) == (x.count_ones() % 4 == 0)))
}

/// Vertices marked filled/empty, edges and shaded triangles; 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriGraph {
    pub n: usize,
    pub filled: Vec<bool>,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

pub fn to_graph(alpha: &CubicForm) -> TriGraph {
    let n = alpha.dim();
    let mut filled = vec![false; n];
    for i in alpha.linear() {
        filled[i - 1] = true;
    }
    TriGraph {
        n,
        filled,
        edges: alpha.quadratic(),
        triangles: alpha.cubic(),
    }
}

pub fn graph_to_form(g: &TriGraph) -> Result<CubicForm> {
    if g.filled.len() != g.n {
        return Err(Error::DimensionMismatch(g.n, g.filled.len()));
    }
    let linear: Vec<usize> = (1..=g.n).filter(|&i| g.filled[i - 1]).collect();
    CubicForm::from_parts(g.n, &g.triangles, &g.edges, &linear)
}

/// Graphviz text. Filled vertices are black discs, edges are solid, and each
/// triangle is a comment line followed by its three sides drawn dashed.
pub fn graph_to_dot(g: &TriGraph) -> String {
    let mut s = String::from("graph form {\n  node [shape=circle, label=\"\"];\n");
    for i in 1..=g.n {
        let style = if g.filled[i - 1] {
            "style=filled, fillcolor=black"
        } else {
            "style=solid"
        };
        s.push_str(&format!("  x{i} [{style}, xlabel=\"x{i}\"];\n"));
    }
    for [a, b] in &g.edges {
        s.push_str(&format!("  x{a} -- x{b};\n"));
    }
    for (t, [a, b, c]) in g.triangles.iter().enumerate() {
        s.push_str(&format!("  // triangle t{} x{a} x{b} x{c}\n", t + 1));
        for (u, v) in [(a, b), (b, c), (a, c)] {
            s.push_str(&format!(
                "  x{u} -- x{v} [style=dashed, color=gray, label=\"t{}\"];\n",
                t + 1
            ));
        }
    }
    s.push_str("}\n");
    s
}
