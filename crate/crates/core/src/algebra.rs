//! Twisted group algebras (K[Z_2^n], f) with u_x . u_y = (-1)^f(x,y) u_{x+y}.
//!
//! Twisting functions are dense bit tables. The exhaustive identity checks
//! work on whole rows: for fixed (x, y) the values over all z form a bit
//! vector, and z -> z + s is a word shuffle plus six butterfly steps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{make_alpha_cl_pq, make_alpha_pq, CubicForm};
use crate::gf2::{parity, Z2Vec};

/// Largest dimension for which dense tables are built (2^24 bits).
pub const MAX_TABLE_DIM: usize = 12;

const BUTTERFLY: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// A bit vector indexed by points of Z_2^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PointSet {
    words: Vec<u64>,
}

impl PointSet {
    fn words_for(n: usize) -> usize {
        (1usize << n).div_ceil(64)
    }

    pub(crate) fn from_table(n: usize, t: &[u8]) -> Self {
        let mut words = vec![0u64; Self::words_for(n)];
        for (x, &b) in t.iter().enumerate() {
            if b & 1 == 1 {
                words[x >> 6] |= 1 << (x & 63);
            }
        }
        PointSet { words }
    }

    #[inline]
    fn get(&self, x: usize) -> u8 {
        (self.words[x >> 6] >> (x & 63) & 1) as u8
    }

    /// out[z] = self[z + s]
    #[inline]
    fn shifted_into(&self, s: usize, out: &mut [u64]) {
        let hi = s >> 6;
        let lo = s & 63;
        for (w, o) in out.iter_mut().enumerate() {
            let mut v = self.words[w ^ hi];
            for (b, m) in BUTTERFLY.iter().enumerate() {
                if lo >> b & 1 == 1 {
                    let k = 1 << b;
                    v = ((v & m) << k) | ((v >> k) & m);
                }
            }
            *o = v;
        }
    }
}

#[inline]
fn fill(bit: u8, valid: u64) -> u64 {
    if bit == 1 {
        valid
    } else {
        0
    }
}

/// The twisting function f as a 2^n x 2^n bit table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingTable {
    n: usize,
    rows: Vec<PointSet>,
    cols: Vec<PointSet>,
}

impl TwistingTable {
    /// Builds the table from a predicate on packed points.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(u32, u32) -> u8 + Sync,
    {
        if n == 0 || n > MAX_TABLE_DIM {
            return Err(Error::Dimension(n));
        }
        let size = 1u32 << n;
        let rows: Vec<PointSet> = (0..size)
            .into_par_iter()
            .map(|x| {
                let t: Vec<u8> = (0..size).map(|y| f(x, y) & 1).collect();
                PointSet::from_table(n, &t)
            })
            .collect();
        Ok(Self::with_rows(n, rows))
    }

    fn with_rows(n: usize, rows: Vec<PointSet>) -> Self {
        let size = 1usize << n;
        let cols = (0..size)
            .map(|y| {
                let t: Vec<u8> = (0..size).map(|x| rows[x].get(y)).collect();
                PointSet::from_table(n, &t)
            })
            .collect();
        TwistingTable { n, rows, cols }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get_bits(&self, x: u32, y: u32) -> u8 {
        self.rows[x as usize].get(y as usize)
    }

    pub fn get(&self, x: &Z2Vec, y: &Z2Vec) -> Result<u8> {
        self.check(&[x, y])?;
        Ok(self.get_bits(x.bits(), y.bits()))
    }

    /// A copy with the single entry f(x, y) flipped.
    pub fn with_flipped(&self, x: u32, y: u32) -> TwistingTable {
        let mut rows = self.rows.clone();
        let (xi, yi) = (x as usize, y as usize);
        rows[xi].words[yi >> 6] ^= 1 << (yi & 63);
        Self::with_rows(self.n, rows)
    }

    fn check(&self, xs: &[&Z2Vec]) -> Result<()> {
        for x in xs {
            if x.dim() != self.n {
                return Err(Error::DimensionMismatch(self.n, x.dim()));
            }
        }
        Ok(())
    }

    fn words(&self) -> usize {
        PointSet::words_for(self.n)
    }

    fn valid(&self) -> u64 {
        if self.n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << self.n)) - 1
        }
    }

    /// phi(x, y, .) = f(x,y) + f(x, y+.) + f(x+y, .) + f(y, .)
    fn phi_row(&self, x: usize, y: usize, out: &mut [u64]) {
        self.rows[x].shifted_into(y, out);
        let c = fill(self.rows[x].get(y), self.valid());
        for (w, o) in out.iter_mut().enumerate() {
            *o ^= c ^ self.rows[x ^ y].words[w] ^ self.rows[y].words[w];
        }
    }

    /// phi(., y, x) as a function of the first argument.
    fn phi_row_reversed(&self, x: usize, y: usize, out: &mut [u64]) {
        self.cols[x].shifted_into(y, out);
        let c = fill(self.rows[y].get(x), self.valid());
        for (w, o) in out.iter_mut().enumerate() {
            *o ^= c ^ self.cols[x ^ y].words[w] ^ self.cols[y].words[w];
        }
    }
}

/// Scalar field label. Structure constants are +-1 either way; the tag only
/// decides which gluing subalgebras are legal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Real,
    Complex,
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub n: usize,
    pub twisting: TwistingTable,
    pub field_tag: FieldTag,
    pub signature: Option<(usize, usize)>,
}

impl GradedAlgebra {
    pub fn new(twisting: TwistingTable, field_tag: FieldTag, signature: Option<(usize, usize)>) -> Self {
        GradedAlgebra {
            n: twisting.dim(),
            twisting,
            field_tag,
            signature,
        }
    }

    /// O_{p,q} built from alpha_{p,q}.
    pub fn octonion_pq(p: usize, q: usize) -> Result<Self> {
        let f = twist_from_form(&make_alpha_pq(p, q)?)?;
        Ok(Self::new(f, FieldTag::Real, Some((p, q))))
    }

    pub fn clifford_pq(p: usize, q: usize) -> Result<Self> {
        let f = twist_standard(StandardKind::CliffordPq(p, q))?;
        Ok(Self::new(f, FieldTag::Real, Some((p, q))))
    }

    pub fn dimension(&self) -> usize {
        1 << self.n
    }
}

/// The twisting function attached to a cubic form monomial by monomial:
/// x_i x_j x_k -> x_i x_j y_k + x_i y_j x_k + y_i x_j x_k, x_i x_j -> x_i y_j
/// and x_i -> x_i y_i (i < j < k).
pub fn twist_from_form(alpha: &CubicForm) -> Result<TwistingTable> {
    let n = alpha.dim();
    let monos: Vec<u32> = alpha.monomial_masks().collect();
    // f(x, .) is linear in y; collect its coefficient vector.
    let coeff = move |x: u32| -> u32 {
        let mut l = 0u32;
        for &m in &monos {
            let vars: Vec<u32> = (0..n as u32).filter(|&i| m >> i & 1 == 1).collect();
            match vars.len() {
                1 => l ^= x & m,
                2 => {
                    if x >> vars[0] & 1 == 1 {
                        l ^= 1 << vars[1];
                    }
                }
                _ => {
                    for &v in &vars {
                        let others = m & !(1 << v);
                        if x & others == others {
                            l ^= 1 << v;
                        }
                    }
                }
            }
        }
        l
    };
    let coeffs: Vec<u32> = (0..1u32 << n).map(coeff).collect();
    TwistingTable::from_fn(n, |x, y| parity(coeffs[x as usize] & y))
}

/// The named twisting functions, each from its own closed formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    /// f_{O_n}
    On(usize),
    /// f_{O_n} + sum_{i <= p} x_i y_i
    Opq(usize, usize),
    /// sum_{i <= j} x_i y_j
    CliffordN(usize),
    /// f_{Cl_n} + sum_{i <= p} x_i y_i
    CliffordPq(usize, usize),
    /// x1 y1 + x1 y2 + x2 y2
    Quaternions,
    /// (x1 x2 y3 + x1 y2 x3 + y1 x2 x3) + sum_{i <= j <= 3} x_i y_j
    Octonions,
}

fn bit(v: u32, i: usize) -> u8 {
    (v >> i & 1) as u8
}

fn f_cubic(n: usize, x: u32, y: u32) -> u8 {
    let mut s = 0u8;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                s ^= bit(x, i) & bit(x, j) & bit(y, k);
                s ^= bit(x, i) & bit(y, j) & bit(x, k);
                s ^= bit(y, i) & bit(x, j) & bit(x, k);
            }
        }
    }
    s
}

fn f_upper(n: usize, x: u32, y: u32) -> u8 {
    let mut s = 0u8;
    for i in 0..n {
        for j in i..n {
            s ^= bit(x, i) & bit(y, j);
        }
    }
    s
}

fn f_diag(p: usize, x: u32, y: u32) -> u8 {
    (0..p).fold(0, |s, i| s ^ (bit(x, i) & bit(y, i)))
}

pub fn twist_standard(kind: StandardKind) -> Result<TwistingTable> {
    let need = |n: usize, min: usize| {
        if n < min {
            Err(Error::InvalidParams(format!("dimension {n} below {min} for {kind:?}")))
        } else {
            Ok(n)
        }
    };
    match kind {
        StandardKind::On(n) => {
            let n = need(n, 3)?;
            TwistingTable::from_fn(n, |x, y| f_cubic(n, x, y) ^ f_upper(n, x, y))
        }
        StandardKind::Opq(p, q) => {
            let n = need(p + q, 3)?;
            TwistingTable::from_fn(n, |x, y| f_cubic(n, x, y) ^ f_upper(n, x, y) ^ f_diag(p, x, y))
        }
        StandardKind::CliffordN(n) => {
            let n = need(n, 1)?;
            TwistingTable::from_fn(n, |x, y| f_upper(n, x, y))
        }
        StandardKind::CliffordPq(p, q) => {
            let n = need(p + q, 1)?;
            TwistingTable::from_fn(n, |x, y| f_upper(n, x, y) ^ f_diag(p, x, y))
        }
        StandardKind::Quaternions => TwistingTable::from_fn(2, |x, y| {
            (bit(x, 0) & bit(y, 0)) ^ (bit(x, 0) & bit(y, 1)) ^ (bit(x, 1) & bit(y, 1))
        }),
        StandardKind::Octonions => TwistingTable::from_fn(3, |x, y| f_cubic(3, x, y) ^ f_upper(3, x, y)),
    }
}

/// u_x . u_y = sign * u_{x+y}
pub fn multiply_basis(f: &TwistingTable, x: &Z2Vec, y: &Z2Vec) -> Result<(i8, Z2Vec)> {
    let s = f.get(x, y)?;
    Ok((if s == 1 { -1 } else { 1 }, x.add(y)?))
}

#[inline]
pub fn beta_bits(f: &TwistingTable, x: u32, y: u32) -> u8 {
    f.get_bits(x, y) ^ f.get_bits(y, x)
}

#[inline]
pub fn phi_bits(f: &TwistingTable, x: u32, y: u32, z: u32) -> u8 {
    f.get_bits(x, y) ^ f.get_bits(x, y ^ z) ^ f.get_bits(x ^ y, z) ^ f.get_bits(y, z)
}

pub fn beta_of(f: &TwistingTable, x: &Z2Vec, y: &Z2Vec) -> Result<u8> {
    f.check(&[x, y])?;
    Ok(beta_bits(f, x.bits(), y.bits()))
}

pub fn phi_of(f: &TwistingTable, x: &Z2Vec, y: &Z2Vec, z: &Z2Vec) -> Result<u8> {
    f.check(&[x, y, z])?;
    Ok(phi_bits(f, x.bits(), y.bits(), z.bits()))
}

fn all_pairs<F>(n: usize, words: usize, body: F) -> bool
where
    F: Fn(usize, usize, &mut [u64], &mut [u64]) -> bool + Sync,
{
    let size = 1usize << n;
    (0..size).into_par_iter().all(|x| {
        let mut a = vec![0u64; words];
        let mut b = vec![0u64; words];
        (0..size).all(|y| body(x, y, &mut a, &mut b))
    })
}

/// True iff phi = delta f is invariant under all permutations of its three
/// arguments, checked at every triple.
pub fn has_generating_function(f: &TwistingTable) -> bool {
    all_pairs(f.n, f.words(), |x, y, a, b| {
        f.phi_row(x, y, a);
        f.phi_row(y, x, b);
        if a != b {
            return false;
        }
        f.phi_row_reversed(x, y, b);
        a == b
    })
}

/// Which of the generating-function conditions hold for (f, alpha).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AxiomReport {
    /// f(x, x) = alpha(x)
    pub diagonal: bool,
    /// f(x, y) + f(y, x) = alpha(x + y) + alpha(x) + alpha(y)
    pub beta: bool,
    /// delta f equals the seven-term polarization of alpha
    pub phi: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.diagonal && self.beta && self.phi
    }
}

fn diagonal_matches(f: &TwistingTable, alpha: &CubicForm) -> bool {
    let t = alpha.truth_table();
    (0..1u32 << f.n).all(|x| f.get_bits(x, x) == t[x as usize])
}

fn beta_matches(f: &TwistingTable, alpha: &PointSet, n: usize) -> bool {
    let size = 1usize << n;
    let words = PointSet::words_for(n);
    let valid = f.valid();
    (0..size).into_par_iter().all(|x| {
        let mut s = vec![0u64; words];
        alpha.shifted_into(x, &mut s);
        let c = fill(alpha.get(x), valid);
        (0..words).all(|w| f.rows[x].words[w] ^ f.cols[x].words[w] == s[w] ^ c ^ alpha.words[w])
    })
}

fn phi_matches(f: &TwistingTable, alpha: &PointSet, n: usize) -> bool {
    let words = PointSet::words_for(n);
    let valid = f.valid();
    all_pairs(n, words, |x, y, a, b| {
        f.phi_row(x, y, a);
        // alpha(x+y+z) + alpha(x+z) + alpha(y+z) + alpha(z) + alpha(x+y) + alpha(x) + alpha(y)
        let c = fill(alpha.get(x ^ y) ^ alpha.get(x) ^ alpha.get(y), valid);
        alpha.shifted_into(x ^ y, b);
        for (bw, aw) in b.iter_mut().zip(&alpha.words) {
            *bw ^= aw ^ c;
        }
        let mut tmp = vec![0u64; words];
        alpha.shifted_into(x, &mut tmp);
        for w in 0..words {
            b[w] ^= tmp[w];
        }
        alpha.shifted_into(y, &mut tmp);
        for w in 0..words {
            b[w] ^= tmp[w];
        }
        a == b
    })
}

/// Checks the three generating-function conditions for alpha against f,
/// each exhaustively.
pub fn generating_axioms(f: &TwistingTable, alpha: &CubicForm) -> Result<AxiomReport> {
    if f.n != alpha.dim() {
        return Err(Error::DimensionMismatch(f.n, alpha.dim()));
    }
    let packed = PointSet::from_table(f.n, &alpha.truth_table());
    Ok(AxiomReport {
        diagonal: diagonal_matches(f, alpha),
        beta: beta_matches(f, &packed, f.n),
        phi: phi_matches(f, &packed, f.n),
    })
}

/// Interpolates alpha from the diagonal and checks that it generates f.
pub fn extract_generating(f: &TwistingTable) -> Result<CubicForm> {
    if !has_generating_function(f) {
        return Err(Error::NotGenerating("phi = delta f is not symmetric".into()));
    }
    let alpha = diagonal_form(f)?;
    let report = generating_axioms(f, &alpha)?;
    if !report.all() {
        return Err(Error::NotGenerating(format!("interpolated form fails {report:?}")));
    }
    Ok(alpha)
}

fn diagonal_form(f: &TwistingTable) -> Result<CubicForm> {
    let diag: Vec<u8> = (0..1u32 << f.n).map(|x| f.get_bits(x, x)).collect();
    CubicForm::from_truth_table(f.n, &diag)
}

/// u_x u_y = (-1)^beta(x,y) u_y u_x with beta from the diagonal form.
pub fn check_graded_commutative(f: &TwistingTable) -> bool {
    match diagonal_form(f) {
        Ok(alpha) => beta_matches(f, &PointSet::from_table(f.n, &alpha.truth_table()), f.n),
        Err(_) => false,
    }
}

/// delta f agrees with the polarization of the diagonal form.
pub fn check_graded_associative(f: &TwistingTable) -> bool {
    match diagonal_form(f) {
        Ok(alpha) => phi_matches(f, &PointSet::from_table(f.n, &alpha.truth_table()), f.n),
        Err(_) => false,
    }
}

/// u (u v) = u^2 v for homogeneous elements, i.e. phi(x, x, y) = 0.
pub fn check_graded_alternative(f: &TwistingTable) -> bool {
    let words = f.words();
    (0..1usize << f.n).into_par_iter().all(|x| {
        let mut a = vec![0u64; words];
        f.phi_row(x, x, &mut a);
        a.iter().all(|&w| w == 0)
    })
}

/// phi = delta f vanishes identically (true associativity).
pub fn is_associative(f: &TwistingTable) -> bool {
    all_pairs(f.n, f.words(), |x, y, a, _| {
        f.phi_row(x, y, a);
        a.iter().all(|&w| w == 0)
    })
}

/// (-1)^f(e_i, e_i), 1-based i.
pub fn generator_square(alg: &GradedAlgebra, i: usize) -> Result<i8> {
    if i == 0 || i > alg.n {
        return Err(Error::Index(i, alg.n));
    }
    let e = 1u32 << (i - 1);
    Ok(if alg.twisting.get_bits(e, e) == 1 { -1 } else { 1 })
}

/// One entry of the signed multiplication table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub x: Z2Vec,
    pub y: Z2Vec,
    pub sign: i8,
    pub product: Z2Vec,
}

/// All products u_x u_y, x-major in packed order.
pub fn multiplication_table(alg: &GradedAlgebra) -> Result<Vec<TableEntry>> {
    let n = alg.n;
    let mut out = Vec::with_capacity(1 << (2 * n));
    for x in 0..1u32 << n {
        for y in 0..1u32 << n {
            let xv = Z2Vec::new(n, x)?;
            let yv = Z2Vec::new(n, y)?;
            let (sign, product) = multiply_basis(&alg.twisting, &xv, &yv)?;
            out.push(TableEntry {
                x: xv,
                y: yv,
                sign,
                product,
            });
        }
    }
    Ok(out)
}

/// The Clifford form alpha^Cl_{p,q}, for symmetry with the octonion case.
pub fn clifford_form(p: usize, q: usize) -> Result<CubicForm> {
    make_alpha_cl_pq(p, q)
}
