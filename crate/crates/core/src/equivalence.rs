//! Equivalence of cubic forms under GL_n(F_2).
//!
//! Convention: a witness G for (lhs, rhs) satisfies lhs(x) = rhs(Gx) for
//! every x.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{
    cl_on, derivative_zero_counts, invariant_profile, make_alpha_cl_pq, make_alpha_pq, make_cl_block_sum, make_tilde,
    phi_rank_table, substitute, CubicForm,
};
use crate::gf2::{enumerate_gl, random_invertible_with, GF2Matrix, GlIter, GL_ENUM_CAP};
use crate::periodicity::classify_signature;

/// The explicit coordinate changes, each with the parameter it needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Recipe {
    /// Acts on n + 2 variables; sends the sum form to alpha^Cl_{p+2,q}.
    CliffPlus2 { n: usize },
    /// Acts on n + 2 variables; sends the sum form to alpha^Cl_{p,q+2}.
    CliffMinus2 { n: usize },
    /// n = 4k. The variant swaps the roles of x_1 and x_n in the first and
    /// last rows and serves even signatures.
    Lemma4k { k: usize, variant: bool },
    /// n = 4k + 2.
    Lemma4k2 { k: usize },
    /// n = 4k + 3, k odd.
    Lemma4k3Odd { k: usize },
    /// n = 4k + 3, k even.
    Lemma4k3Even { k: usize },
    /// n = 4k + 1, k odd.
    Lemma4k1Odd { k: usize },
    /// `Lemma4k1Odd` applied after x'_n = x_n + x_1.
    Lemma4k1OddPost { k: usize },
    /// n = 4k + 1, k even.
    Lemma4k1Even { k: usize },
    /// `Lemma4k1Even` applied after x'_2 = x_2 + x_1.
    Lemma4k1EvenPost { k: usize },
    /// 5 variables: tilde-alpha_{2,3} to its all-filled variant.
    O23Flip,
    /// 5 variables: exchanges the alpha_{2,3} and alpha_{3,2} blocks of a glue.
    FinalFlip,
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::CliffPlus2 { .. } => "cliff_plus2",
            Recipe::CliffMinus2 { .. } => "cliff_minus2",
            Recipe::Lemma4k { variant: false, .. } => "lemma_4k",
            Recipe::Lemma4k { variant: true, .. } => "lemma_4k_even",
            Recipe::Lemma4k2 { .. } => "lemma_4k2",
            Recipe::Lemma4k3Odd { .. } => "lemma_4k3_odd",
            Recipe::Lemma4k3Even { .. } => "lemma_4k3_even",
            Recipe::Lemma4k1Odd { .. } => "lemma_4k1_odd",
            Recipe::Lemma4k1OddPost { .. } => "lemma_4k1_odd_post",
            Recipe::Lemma4k1Even { .. } => "lemma_4k1_even",
            Recipe::Lemma4k1EvenPost { .. } => "lemma_4k1_even_post",
            Recipe::O23Flip => "o23_flip",
            Recipe::FinalFlip => "final_flip",
        }
    }

    /// Number of variables the transform acts on.
    pub fn dim(&self) -> usize {
        match *self {
            Recipe::CliffPlus2 { n } | Recipe::CliffMinus2 { n } => n + 2,
            Recipe::Lemma4k { k, .. } => 4 * k,
            Recipe::Lemma4k2 { k } => 4 * k + 2,
            Recipe::Lemma4k3Odd { k } | Recipe::Lemma4k3Even { k } => 4 * k + 3,
            Recipe::Lemma4k1Odd { k }
            | Recipe::Lemma4k1OddPost { k }
            | Recipe::Lemma4k1Even { k }
            | Recipe::Lemma4k1EvenPost { k } => 4 * k + 1,
            Recipe::O23Flip | Recipe::FinalFlip => 5,
        }
    }

    fn check_range(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidParams(format!("{}: {why}", self.name())));
        match *self {
            Recipe::CliffPlus2 { n } | Recipe::CliffMinus2 { n } if n == 0 => bad("needs n >= 1"),
            Recipe::Lemma4k { k, .. } | Recipe::Lemma4k2 { k } if k == 0 => bad("needs k >= 1"),
            Recipe::Lemma4k3Odd { k } | Recipe::Lemma4k1Odd { k } | Recipe::Lemma4k1OddPost { k } if k % 2 == 0 => {
                bad("needs odd k")
            }
            Recipe::Lemma4k3Even { k } | Recipe::Lemma4k1Even { k } | Recipe::Lemma4k1EvenPost { k }
                if k == 0 || k % 2 == 1 =>
            {
                bad("needs even k >= 2")
            }
            _ => {
                if self.dim() > crate::gf2::MAX_DIM {
                    return bad("dimension too large");
                }
                Ok(())
            }
        }
    }
}

fn span(a: usize, b: usize) -> Vec<usize> {
    (a..=b).collect()
}

fn without(v: &[usize], skip: usize) -> Vec<usize> {
    v.iter().copied().filter(|&j| j != skip).collect()
}

/// The matrix whose row i is the displayed expression for x'_i.
pub fn build_transform(recipe: Recipe) -> Result<GF2Matrix> {
    recipe.check_range()?;
    let n = recipe.dim();
    let rows: Vec<Vec<usize>> = match recipe {
        Recipe::CliffPlus2 { .. } => {
            let tail = span(3, n);
            let mut rows = vec![[vec![1], tail.clone()].concat(), [vec![2], tail].concat()];
            rows.extend((3..=n).map(|i| vec![i]));
            rows
        }
        Recipe::CliffMinus2 { n: m } => {
            let mut rows: Vec<Vec<usize>> = (1..=m).map(|i| vec![i]).collect();
            rows.push(span(1, m + 1));
            rows.push([span(1, m), vec![m + 2]].concat());
            rows
        }
        Recipe::Lemma4k { k, variant } => {
            let mut rows = vec![vec![1, n]];
            rows.extend((2..=2 * k + 1).map(|i| vec![1, i, n]));
            rows.extend((2 * k + 2..n).map(|i| without(&span(2, n), i)));
            rows.push(vec![n]);
            if variant {
                rows[0] = vec![n];
                rows[n - 1] = vec![1, n];
            }
            rows
        }
        Recipe::Lemma4k2 { .. } => {
            let mut rows = vec![vec![n]];
            rows.extend((2..=n).map(|i| vec![i - 1, n]));
            rows
        }
        Recipe::Lemma4k3Odd { k } => {
            let mut rows = vec![vec![2 * k + 2, 2 * k + 3]];
            rows.extend((2..=2 * k + 1).map(|i| vec![i, 2 * k + 2]));
            rows.push(vec![2 * k + 2]);
            let base = [span(1, 2 * k + 1), span(2 * k + 3, n)].concat();
            for i in 2 * k + 3..=n {
                // row 4k+2 follows its explicit display, not the general pattern
                let skip = if i == 4 * k + 2 { n } else { 6 * k + 5 - i };
                rows.push(without(&base, skip));
            }
            rows
        }
        Recipe::Lemma4k3Even { k } => {
            let mut rows = vec![vec![2 * k + 2, n]];
            rows.extend((2..=2 * k + 1).map(|i| vec![2 * k + 2, 2 * k + 1 + i]));
            rows.push(vec![2 * k + 2]);
            let base = [span(1, 2 * k + 1), span(2 * k + 3, n)].concat();
            rows.extend((2 * k + 3..=n).map(|i| without(&base, i - 2 * k - 1)));
            rows
        }
        Recipe::Lemma4k1Odd { k } | Recipe::Lemma4k1OddPost { k } => {
            let mut rows = vec![vec![1, 2 * k + 1]];
            rows.extend((2..=2 * k).map(|i| vec![1, i]));
            rows.push(span(1, n));
            rows.extend((2 * k + 2..=4 * k).map(|i| without(&span(2, n), 6 * k + 2 - i)));
            rows.push(span(2, 4 * k));
            rows
        }
        Recipe::Lemma4k1Even { k } | Recipe::Lemma4k1EvenPost { k } => {
            let mut rows: Vec<Vec<usize>> = (1..=2 * k).map(|i| vec![1, 4 * k + 2 - i]).collect();
            rows.push(span(1, n));
            rows.extend((2 * k + 2..=n).map(|i| without(&span(2, n), i - 2 * k)));
            rows
        }
        Recipe::O23Flip => vec![vec![1], vec![2, 3, 4], vec![2, 3, 5], vec![2, 4, 5], vec![3, 4, 5]],
        Recipe::FinalFlip => {
            vec![vec![1], vec![5], vec![1, 2, 3, 5], vec![1, 2, 4, 5], vec![2]]
        }
    };
    let g = GF2Matrix::from_index_rows(n, &rows)?;
    let g = match recipe {
        Recipe::Lemma4k1OddPost { .. } => {
            let mut post: Vec<Vec<usize>> = (1..n).map(|i| vec![i]).collect();
            post.push(vec![1, n]);
            g.mul(&GF2Matrix::from_index_rows(n, &post)?)?
        }
        Recipe::Lemma4k1EvenPost { .. } => {
            let mut post: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
            post[1] = vec![1, 2];
            g.mul(&GF2Matrix::from_index_rows(n, &post)?)?
        }
        _ => g,
    };
    if !g.is_invertible() {
        return Err(Error::Singular);
    }
    Ok(g)
}

/// The sum form that `cliff_plus2` sends to alpha^Cl_{p+2,q}:
/// x1 x2 + sum_{3 <= i <= j <= n+2} x_i x_j + sum_{i = p+3}^{n+2} x_i.
pub fn cliff_plus2_source(p: usize, q: usize) -> Result<CubicForm> {
    let n = p + q + 2;
    let mut f = CubicForm::from_monomials(n, [[1usize, 2]])?;
    for i in 3..=n {
        for j in i..=n {
            if i == j {
                f.toggle(&[i])?;
            } else {
                f.toggle(&[i, j])?;
            }
        }
    }
    for i in p + 3..=n {
        f.toggle(&[i])?;
    }
    Ok(f)
}

/// The sum form that `cliff_minus2` sends to alpha^Cl_{p,q+2}:
/// sum_{1 <= i <= j <= n} x_i x_j + sum_{i = p+1}^{n} x_i
/// + x_{n+1} x_{n+2} + x_{n+1} + x_{n+2}.
pub fn cliff_minus2_source(p: usize, q: usize) -> Result<CubicForm> {
    let m = p + q;
    let n = m + 2;
    let mut f = CubicForm::zero(n)?;
    for i in 1..=m {
        for j in i..=m {
            if i == j {
                f.toggle(&[i])?;
            } else {
                f.toggle(&[i, j])?;
            }
        }
    }
    for i in p + 1..=m {
        f.toggle(&[i])?;
    }
    f.toggle(&[n - 1, n])?;
    f.toggle(&[n - 1])?;
    f.toggle(&[n])?;
    Ok(f)
}

/// The two sides related by `o23_flip`: tilde-alpha_{2,3} and the same graph
/// with every vertex filled.
pub fn o23_pair() -> Result<(CubicForm, CubicForm)> {
    let lhs = make_tilde(2, 3)?;
    let mut rhs = lhs.clone();
    for i in 2..=5 {
        rhs.toggle(&[i])?;
    }
    Ok((lhs, rhs))
}

/// The two 5-variable blocks related by `final_flip`, on local variables
/// (a_1, .., a_5) = (x_1, x_{n+1}, .., x_{n+4}): alpha_{2,3}(a2, a3, a1, a4, a5)
/// and alpha_{3,2}(a1, .., a5).
pub fn final_flip_pair() -> Result<(CubicForm, CubicForm)> {
    let lhs = make_alpha_pq(2, 3)?.embed(5, &[2, 3, 1, 4, 5])?;
    Ok((lhs, make_alpha_pq(3, 2)?))
}

fn xn_times_rest(n: usize) -> Result<CubicForm> {
    CubicForm::from_monomials(n, (1..n).map(|i| vec![i, n]))
}

fn linear_sum(n: usize, idx: &[usize]) -> Result<CubicForm> {
    CubicForm::from_monomials(n, idx.iter().map(|&i| vec![i]))
}

/// The cone x_1 + (x_1 + 1)(Q) with Q = alpha^Cl_{a,0}(x_2..x_{a+1}) +
/// alpha^Cl_{0,b}(x_{a+2}..x_n), plus the listed linear terms.
fn cone_target(n: usize, a: usize, b: usize, apex: bool, extra: &[usize]) -> Result<CubicForm> {
    let q = cl_on(a, 0, &span(2, a + 1), n)?.add(&cl_on(0, b, &span(a + 2, a + b + 1), n)?)?;
    q.cone(1, apex)?.add(&linear_sum(n, extra)?)
}

/// The form the recipe produces from alpha_{p,q}: target(x) = alpha_{p,q}(Gx)
/// with G = build_transform(recipe). Errors when the recipe does not cover
/// the signature.
pub fn recipe_target(recipe: Recipe, p: usize, q: usize) -> Result<CubicForm> {
    let n = recipe.dim();
    let uncovered = || {
        Err(Error::InvalidParams(format!(
            "{} does not cover ({p},{q})",
            recipe.name()
        )))
    };
    if p + q != n {
        return uncovered();
    }
    let odd = |v: usize| v % 2 == 1;
    match recipe {
        Recipe::Lemma4k { variant, .. } => {
            let hat = if p == 0 && !variant {
                make_alpha_pq(0, n - 1)?.widen(n)?
            } else if q == 0 && !variant {
                make_alpha_pq(n - 1, 0)?.widen(n)?
            } else if p > 0 && q > 0 && odd(p) && !variant {
                make_alpha_pq(p, q - 1)?.widen(n)?.add(&linear_sum(n, &[n])?)?
            } else if p > 0 && q > 0 && !odd(p) && p <= q && variant {
                make_alpha_pq(p, q - 1)?.widen(n)?
            } else {
                return uncovered();
            };
            Ok(hat)
        }
        Recipe::Lemma4k2 { .. } => {
            let (hat, with_xn) = if p == 0 {
                (make_alpha_pq(0, n - 1)?, true)
            } else if q == 0 {
                (make_alpha_pq(n - 1, 0)?, true)
            } else {
                (make_alpha_pq(p - 1, q)?, !odd(p))
            };
            let mut f = hat.widen(n)?.add(&xn_times_rest(n)?)?;
            if with_xn {
                f.toggle(&[n])?;
            }
            Ok(f)
        }
        Recipe::Lemma4k3Odd { k } => {
            let (a, b) = (2 * k + 2, 2 * k);
            match (p, q) {
                (0, _) => cone_target(n, a, b, true, &[]),
                (_, 0) => cone_target(n, a, b, false, &[]),
                _ if (p, q) == (2 * k + 1, 2 * k + 2) => cone_target(n, a, b, true, &span(2, 2 * k + 3)),
                _ if (p, q) == (2 * k, 2 * k + 3) => {
                    cone_target(n, a, b, true, &[span(2, 2 * k), vec![2 * k + 3]].concat())
                }
                _ => uncovered(),
            }
        }
        Recipe::Lemma4k3Even { k } => {
            let (a, b) = (2 * k, 2 * k + 2);
            match (p, q) {
                (0, _) => cone_target(n, a, b, true, &[]),
                (_, 0) => cone_target(n, a, b, false, &[]),
                _ if (p, q) == (2 * k + 1, 2 * k + 2) => cone_target(n, a, b, true, &span(2 * k + 2, n)),
                _ if (p, q) == (2 * k, 2 * k + 3) => {
                    cone_target(n, a, b, true, &[span(2 * k + 3, 4 * k + 1), vec![n]].concat())
                }
                _ => uncovered(),
            }
        }
        Recipe::Lemma4k1Odd { k } => {
            let ab = 2 * k;
            match (p, q) {
                (0, _) => cone_target(n, ab, ab, true, &[]),
                (_, 0) => cone_target(n, ab, ab, false, &[]),
                _ if k >= 3 && (p, q) == (2 * k - 2, 2 * k + 3) => {
                    cone_target(n, ab, ab, true, &[span(2, 2 * k - 2), vec![2 * k + 1]].concat())
                }
                _ => uncovered(),
            }
        }
        Recipe::Lemma4k1OddPost { k } if (p, q) == (2 * k + 1, 2 * k) => {
            cone_target(n, 2 * k, 2 * k, true, &span(2 * k + 2, n))
        }
        Recipe::Lemma4k1Even { k } => {
            let ab = 2 * k;
            match (p, q) {
                (0, _) => cone_target(n, ab, ab, true, &[]),
                (_, 0) => cone_target(n, ab, ab, false, &[]),
                _ if (p, q) == (2 * k, 2 * k + 1) => cone_target(n, ab, ab, true, &span(2 * k + 2, n)),
                _ if (p, q) == (2 * k - 2, 2 * k + 3) => cone_target(n, ab, ab, true, &span(2 * k + 4, n)),
                _ => uncovered(),
            }
        }
        Recipe::Lemma4k1EvenPost { k } if (p, q) == (2 * k + 1, 2 * k) => {
            cone_target(n, 2 * k, 2 * k, true, &span(2, 2 * k + 1))
        }
        _ => uncovered(),
    }
}

/// True iff lhs(x) = rhs(Gx) at all 2^n points.
pub fn verify_equivalence(lhs: &CubicForm, rhs: &CubicForm, g: &GF2Matrix) -> Result<bool> {
    let n = lhs.dim();
    if rhs.dim() != n {
        return Err(Error::DimensionMismatch(n, rhs.dim()));
    }
    if g.dim() != n {
        return Err(Error::DimensionMismatch(n, g.dim()));
    }
    if !g.is_invertible() {
        return Err(Error::Singular);
    }
    let (a, b) = (lhs.truth_table(), rhs.truth_table());
    Ok(images(g).iter().enumerate().all(|(x, &gx)| a[x] == b[gx as usize]))
}

/// G x for every packed x, by linearity.
fn images(g: &GF2Matrix) -> Vec<u32> {
    let n = g.dim();
    let cols: Vec<u32> = (0..n).map(|j| g.column(j)).collect();
    let mut out = vec![0u32; 1 << n];
    for x in 1..1usize << n {
        let low = x.trailing_zeros() as usize;
        out[x] = out[x & (x - 1)] ^ cols[low];
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Equivalent {
        #[serde(serialize_with = "crate::io::serialize_matrix")]
        witness: GF2Matrix,
    },
    Inequivalent {
        invariant: String,
        lhs: serde_json::Value,
        rhs: serde_json::Value,
    },
    Unknown {
        budget_spent: u64,
    },
}

impl Verdict {
    pub fn witness(&self) -> Option<&GF2Matrix> {
        match self {
            Verdict::Equivalent { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }

    pub fn is_inequivalent(&self) -> bool {
        matches!(self, Verdict::Inequivalent { .. })
    }

    fn exhaustive() -> Verdict {
        Verdict::Inequivalent {
            invariant: "exhaustive".into(),
            lhs: serde_json::Value::Null,
            rhs: serde_json::Value::Null,
        }
    }
}

fn equivalent_checked(lhs: &CubicForm, rhs: &CubicForm, g: GF2Matrix) -> Result<Verdict> {
    if !verify_equivalence(lhs, rhs, &g)? {
        return Err(Error::Verification(format!("witness {g:?} fails re-verification")));
    }
    Ok(Verdict::Equivalent { witness: g })
}

fn same_dims(lhs: &CubicForm, rhs: &CubicForm) -> Result<usize> {
    if lhs.dim() != rhs.dim() {
        return Err(Error::DimensionMismatch(lhs.dim(), rhs.dim()));
    }
    Ok(lhs.dim())
}

/// Scans GL_n(F_2) in enumeration order and returns the first witness.
pub fn brute_force_search(lhs: &CubicForm, rhs: &CubicForm) -> Result<Verdict> {
    let n = same_dims(lhs, rhs)?;
    if n > GL_ENUM_CAP {
        return Err(Error::Cap(n, GL_ENUM_CAP));
    }
    let (a, b) = (lhs.truth_table(), rhs.truth_table());
    let matches = |g: &GF2Matrix| (0..1u32 << n).all(|x| a[x as usize] == b[g.apply_bits(x) as usize]);
    let found = if n <= 3 {
        enumerate_gl(n)?.find(|g| matches(g))
    } else {
        // first rows partition the stream; the lowest partition with a hit wins
        (1..1u32 << n)
            .into_par_iter()
            .map(|r| -> Option<GF2Matrix> { GlIter::with_prefix(n, &[r]).ok()?.find(|g| matches(g)) })
            .find_first(|g| g.is_some())
            .flatten()
    };
    match found {
        Some(g) => equivalent_checked(lhs, rhs, g),
        None => Ok(Verdict::exhaustive()),
    }
}

/// Compares invariant profiles; returns the distinguishing verdict if any.
pub fn invariant_verdict(lhs: &CubicForm, rhs: &CubicForm) -> Option<Verdict> {
    let (pa, pb) = (invariant_profile(lhs), invariant_profile(rhs));
    pa.first_difference(&pb).map(|(name, l, r)| Verdict::Inequivalent {
        invariant: name.to_string(),
        lhs: serde_json::from_str(&l).unwrap_or(serde_json::Value::String(l)),
        rhs: serde_json::from_str(&r).unwrap_or(serde_json::Value::String(r)),
    })
}

/// Elementary move on the rows of G: add row j to row i, or swap them.
#[derive(Clone, Copy, Debug)]
enum Move {
    Transvection(usize, usize),
    Swap(usize, usize),
}

fn apply_move(rows: &mut [u32], m: Move) {
    match m {
        Move::Transvection(i, j) => rows[i] ^= rows[j],
        Move::Swap(i, j) => rows.swap(i, j),
    }
}

/// Hill-climbing over GL_n(F_2). The objective is the Hamming distance
/// between the truth tables of lhs and rhs o G; one evaluation is one
/// objective computation, and `budget` caps the total. Randomness comes
/// from ChaCha8 seeded with `seed`, so results are reproducible.
pub fn heuristic_search(lhs: &CubicForm, rhs: &CubicForm, seed: u64, budget: u64) -> Result<Verdict> {
    let n = same_dims(lhs, rhs)?;
    if lhs == rhs {
        return equivalent_checked(lhs, rhs, GF2Matrix::identity(n)?);
    }
    if let Some(v) = invariant_verdict(lhs, rhs) {
        return Ok(v);
    }
    let (a, b) = (lhs.truth_table(), rhs.truth_table());
    let distance = |rows: &[u32]| -> u32 {
        let g = GF2Matrix::from_rows(n, rows.to_vec()).expect("moves keep dimensions");
        images(&g)
            .iter()
            .enumerate()
            .filter(|&(x, &gx)| a[x] != b[gx as usize])
            .count() as u32
    };
    let mut moves = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                moves.push(Move::Transvection(i, j));
                if i < j {
                    moves.push(Move::Swap(i, j));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spent = 0u64;
    let sideways_limit = 4 * n;
    while spent < budget {
        let mut rows = random_invertible_with(n, &mut rng)?.rows().to_vec();
        let mut d = distance(&rows);
        spent += 1;
        let mut sideways = 0;
        while d > 0 && spent < budget {
            moves.shuffle(&mut rng);
            let mut best = u32::MAX;
            let mut best_moves = Vec::new();
            for &m in &moves {
                if spent >= budget {
                    break;
                }
                let mut trial = rows.clone();
                apply_move(&mut trial, m);
                let dt = distance(&trial);
                spent += 1;
                if dt < best {
                    best = dt;
                    best_moves.clear();
                }
                if dt == best {
                    best_moves.push(m);
                }
                if dt == 0 {
                    break;
                }
            }
            if best_moves.is_empty() || best > d || (best == d && sideways >= sideways_limit) {
                break;
            }
            if best == d {
                sideways += 1;
            } else {
                sideways = 0;
            }
            let m = best_moves[rng.gen_range(0..best_moves.len())];
            apply_move(&mut rows, m);
            d = best;
        }
        if d == 0 {
            return equivalent_checked(lhs, rhs, GF2Matrix::from_rows(n, rows)?);
        }
    }
    Ok(Verdict::Unknown { budget_spent: spent })
}

/// Options for [`backtrack_search`].
#[derive(Clone, Copy, Debug)]
pub struct BacktrackOptions {
    /// Give up (returning `Unknown`) after this many search nodes.
    pub node_limit: u64,
    /// Require (Gx)_1 = x_1, so that the witness fixes a shared gluing
    /// variable.
    pub fix_first_coordinate: bool,
}

impl Default for BacktrackOptions {
    fn default() -> Self {
        BacktrackOptions {
            node_limit: 50_000_000,
            fix_first_coordinate: false,
        }
    }
}

/// Per-point data preserved by any equivalence: the value, the number of
/// zeros of the derivative in that direction, and the rank of phi(., ., v).
fn point_fingerprints(f: &CubicForm) -> Vec<(u8, u32, u32)> {
    let t = f.truth_table();
    let dz = derivative_zero_counts(&t);
    let ranks = phi_rank_table(f);
    (0..t.len()).map(|x| (t[x], dz[x], ranks[x])).collect()
}

/// Renames the keys of both sides to small integers through one shared,
/// sorted dictionary.
fn shared_ids<K: Ord + Clone>(a: &[K], b: &[K]) -> (Vec<u32>, Vec<u32>, usize) {
    let mut keys: Vec<K> = a.iter().chain(b).cloned().collect();
    keys.sort_unstable();
    keys.dedup();
    let id = |k: &K| keys.binary_search(k).expect("key present") as u32;
    (a.iter().map(id).collect(), b.iter().map(id).collect(), keys.len())
}

/// One refinement step: a point's new class records its old class and the
/// multiset of (class(u), class(u + v)) over all u. Any equivalence maps
/// these pairs bijectively, so classes stay invariant.
fn refine(a: &[u32], b: &[u32], k: usize) -> (Vec<u32>, Vec<u32>, usize) {
    let signature = |c: &[u32]| -> Vec<(u32, Vec<u32>)> {
        (0..c.len())
            .into_par_iter()
            .map(|v| {
                let mut pairs: Vec<u32> = (0..c.len()).map(|u| c[u] * k as u32 + c[u ^ v]).collect();
                pairs.sort_unstable();
                (c[v], pairs)
            })
            .collect()
    };
    shared_ids(&signature(a), &signature(b))
}

/// Class labels of the points of both forms, consistent across the two.
fn point_classes(lhs: &CubicForm, rhs: &CubicForm) -> (Vec<u32>, Vec<u32>) {
    let (a, b, k) = shared_ids(&point_fingerprints(lhs), &point_fingerprints(rhs));
    let (a, b, _) = refine(&a, &b, k);
    (a, b)
}

/// Complete search over images of a basis of the domain.
///
/// The basis is chosen greedily from the points whose fingerprint is rarest,
/// and each basis vector b may only go to a point with the fingerprint of b.
/// Every point of the span built so far is checked as soon as it exists:
/// lhs(x) and rhs(Gx) must carry the same fingerprint, which includes the
/// value, so a full assignment is a witness. Exhausting the tree proves
/// inequivalence.
pub fn backtrack_search(lhs: &CubicForm, rhs: &CubicForm, opts: BacktrackOptions) -> Result<Verdict> {
    let n = same_dims(lhs, rhs)?;
    let (fp_a, fp_b) = point_classes(lhs, rhs);
    let (mut sa, mut sb) = (fp_a.clone(), fp_b.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(Verdict::Inequivalent {
            invariant: "point_classes".into(),
            lhs: serde_json::Value::Null,
            rhs: serde_json::Value::Null,
        });
    }
    let class_size = |x: u32| sa.iter().filter(|&&f| f == fp_a[x as usize]).count();
    let mut by_rarity: Vec<(usize, u32)> = (1..1u32 << n).map(|x| (class_size(x), x)).collect();
    by_rarity.sort_unstable();
    let mut basis: Vec<u32> = Vec::with_capacity(n);
    for &(_, x) in &by_rarity {
        let mut trial = basis.clone();
        trial.push(x);
        if crate::gf2::rank_of(&trial) == trial.len() {
            basis = trial;
            if basis.len() == n {
                break;
            }
        }
    }
    let cands: Vec<Vec<u32>> = basis
        .iter()
        .map(|&b| {
            (1..1u32 << n)
                .filter(|&v| fp_b[v as usize] == fp_a[b as usize])
                .filter(|&v| !opts.fix_first_coordinate || v & 1 == b & 1)
                .collect()
        })
        .collect();
    let mut st = Backtrack {
        fp_a: &fp_a,
        fp_b: &fp_b,
        basis: &basis,
        cands: &cands,
        images: vec![0; n],
        span: vec![(0, 0)],
        in_span: vec![false; 1 << n],
        nodes: 0,
        limit: opts.node_limit,
    };
    st.in_span[0] = true;
    match st.descend(0) {
        Some(true) => {
            let v = GF2Matrix::from_columns(n, &st.images)?;
            let b = GF2Matrix::from_columns(n, &basis)?;
            equivalent_checked(lhs, rhs, v.mul(&b.invert()?)?)
        }
        Some(false) => Ok(Verdict::exhaustive()),
        None => Ok(Verdict::Unknown { budget_spent: st.nodes }),
    }
}

struct Backtrack<'a> {
    fp_a: &'a [u32],
    fp_b: &'a [u32],
    basis: &'a [u32],
    cands: &'a [Vec<u32>],
    images: Vec<u32>,
    /// (x, Gx) for every x in the span of the assigned basis vectors.
    span: Vec<(u32, u32)>,
    in_span: Vec<bool>,
    nodes: u64,
    limit: u64,
}

impl Backtrack<'_> {
    /// Some(found) on completion, None when the node limit is hit.
    fn descend(&mut self, pos: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        if pos == self.basis.len() {
            return Some(true);
        }
        let b = self.basis[pos];
        let len = self.span.len();
        for ci in 0..self.cands[pos].len() {
            let v = self.cands[pos][ci];
            if self.in_span[v as usize] {
                continue;
            }
            let consistent = self.span[1..]
                .iter()
                .all(|&(x, gx)| self.fp_a[(x ^ b) as usize] == self.fp_b[(gx ^ v) as usize]);
            if !consistent {
                continue;
            }
            self.images[pos] = v;
            for s in 0..len {
                let (x, gx) = self.span[s];
                self.span.push((x ^ b, gx ^ v));
                self.in_span[(gx ^ v) as usize] = true;
            }
            match self.descend(pos + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            for (_, gx) in self.span.drain(len..) {
                self.in_span[gx as usize] = false;
            }
        }
        Some(false)
    }
}

/// Exact search: exhaustive enumeration for n <= 5, backtracking above.
pub fn exact_search(lhs: &CubicForm, rhs: &CubicForm) -> Result<(Verdict, &'static str)> {
    if lhs.dim() <= GL_ENUM_CAP && lhs.dim() <= 4 {
        return Ok((brute_force_search(lhs, rhs)?, "search:exhaustive"));
    }
    Ok((
        backtrack_search(lhs, rhs, BacktrackOptions::default())?,
        "search:backtrack",
    ))
}

/// One verified step lhs(x) = rhs(Gx) of an equivalence chain.
#[derive(Clone, Debug, Serialize)]
pub struct Link {
    pub lhs: String,
    pub rhs: String,
    #[serde(skip)]
    pub lhs_form: CubicForm,
    #[serde(skip)]
    pub rhs_form: CubicForm,
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub witness: GF2Matrix,
    pub provenance: String,
}

/// A sequence of links whose right and left ends match, with one composed
/// witness checked pointwise end to end.
#[derive(Clone, Debug, Serialize)]
pub struct Chain {
    pub links: Vec<Link>,
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub composed: GF2Matrix,
    pub final_composed_check: bool,
}

impl Chain {
    pub fn lhs(&self) -> &CubicForm {
        &self.links[0].lhs_form
    }

    pub fn rhs(&self) -> &CubicForm {
        &self.links.last().expect("chains are non-empty").rhs_form
    }
}

#[derive(Default)]
pub struct ChainBuilder {
    links: Vec<Link>,
}

impl ChainBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a link after checking it pointwise and against the previous end.
    pub fn push(
        &mut self,
        lhs: (&str, &CubicForm),
        rhs: (&str, &CubicForm),
        witness: GF2Matrix,
        provenance: impl Into<String>,
    ) -> Result<()> {
        let provenance = provenance.into();
        if let Some(prev) = self.links.last() {
            if &prev.rhs_form != lhs.1 {
                return Err(Error::Verification(format!(
                    "chain break between {} and {}",
                    prev.rhs, lhs.0
                )));
            }
        }
        if !verify_equivalence(lhs.1, rhs.1, &witness)? {
            return Err(Error::Verification(format!(
                "link {} -> {} ({provenance}) fails",
                lhs.0, rhs.0
            )));
        }
        self.links.push(Link {
            lhs: lhs.0.to_string(),
            rhs: rhs.0.to_string(),
            lhs_form: lhs.1.clone(),
            rhs_form: rhs.1.clone(),
            witness,
            provenance,
        });
        Ok(())
    }

    /// Appends every link of another chain.
    pub fn extend(&mut self, chain: &Chain) -> Result<()> {
        for l in &chain.links {
            self.push(
                (&l.lhs, &l.lhs_form),
                (&l.rhs, &l.rhs_form),
                l.witness.clone(),
                l.provenance.clone(),
            )?;
        }
        Ok(())
    }

    /// Appends a search-derived link.
    pub fn search(&mut self, lhs: (&str, &CubicForm), rhs: (&str, &CubicForm)) -> Result<()> {
        if lhs.1 == rhs.1 {
            return self.push(lhs, rhs, GF2Matrix::identity(lhs.1.dim())?, "identity");
        }
        let (v, how) = exact_search(lhs.1, rhs.1)?;
        match v {
            Verdict::Equivalent { witness } => self.push(lhs, rhs, witness, how),
            other => Err(Error::Verification(format!(
                "no witness for {} -> {}: {other:?}",
                lhs.0, rhs.0
            ))),
        }
    }

    pub fn finish(self) -> Result<Chain> {
        let first = self
            .links
            .first()
            .ok_or_else(|| Error::Verification("empty chain".into()))?;
        let n = first.lhs_form.dim();
        let mut g = GF2Matrix::identity(n)?;
        for l in &self.links {
            g = l.witness.mul(&g)?;
        }
        let ok = verify_equivalence(&first.lhs_form, &self.links.last().unwrap().rhs_form, &g)?;
        if !ok {
            return Err(Error::Verification("composed witness fails".into()));
        }
        Ok(Chain {
            links: self.links,
            composed: g,
            final_composed_check: ok,
        })
    }
}

fn alpha_label(p: usize, q: usize) -> String {
    format!("alpha_{{{p},{q}}}")
}

fn tilde_label(p: usize, q: usize) -> String {
    format!("tilde_alpha_{{{p},{q}}}")
}

/// The reduction applying to a signature, and the signature of its class it
/// is applied to.
pub fn lemma_route(p: usize, q: usize) -> Option<(Recipe, (usize, usize))> {
    let n = p + q;
    let k = n / 4;
    if n < 4 {
        return None;
    }
    let covers = |r: Recipe, s: (usize, usize)| recipe_target(r, s.0, s.1).is_ok();
    let in_class = |r: Recipe| -> Option<(Recipe, (usize, usize))> {
        if covers(r, (p, q)) {
            return Some((r, (p, q)));
        }
        if p == 0 || q == 0 {
            return None;
        }
        classify_signature(p, q)
            .ok()?
            .into_iter()
            .find(|&s| covers(r, s))
            .map(|s| (r, s))
    };
    match n % 4 {
        0 => {
            let main = Recipe::Lemma4k { k, variant: false };
            let var = Recipe::Lemma4k { k, variant: true };
            if covers(main, (p, q)) {
                Some((main, (p, q)))
            } else if covers(var, (p, q)) {
                Some((var, (p, q)))
            } else if covers(var, (q, p)) {
                Some((var, (q, p)))
            } else {
                None
            }
        }
        2 => Some((Recipe::Lemma4k2 { k }, (p, q))),
        3 => in_class(if k % 2 == 1 {
            Recipe::Lemma4k3Odd { k }
        } else {
            Recipe::Lemma4k3Even { k }
        }),
        _ => {
            if k % 2 == 1 {
                in_class(Recipe::Lemma4k1Odd { k }).or_else(|| in_class(Recipe::Lemma4k1OddPost { k }))
            } else {
                in_class(Recipe::Lemma4k1Even { k })
            }
        }
    }
}

/// Intermediate signatures from `from` to `to` (exclusive of `from`), each
/// one swap or one shift (p, q) -> (p +- 4, q -+ 4) away from the previous.
fn signature_path(from: (usize, usize), to: (usize, usize)) -> Vec<(usize, usize)> {
    let mut path = Vec::new();
    let mut cur = from;
    if cur.0 % 4 != to.0 % 4 && cur != to {
        cur = (cur.1, cur.0);
        path.push(cur);
    }
    while cur.0 < to.0 && cur.0 + 4 <= to.0 {
        cur = (cur.0 + 4, cur.1 - 4);
        path.push(cur);
    }
    while cur.0 > to.0 && cur.0 >= to.0 + 4 {
        cur = (cur.0 - 4, cur.1 + 4);
        path.push(cur);
    }
    if cur != to {
        path.push(to);
    }
    path
}

/// The signature whose hat form an even-dimensional reduction lands on.
fn reduced_signature(recipe: Recipe, p: usize, q: usize) -> Option<(usize, usize)> {
    let n = p + q;
    match recipe {
        Recipe::Lemma4k { .. } => Some(if q == 0 { (n - 1, 0) } else { (p, q - 1) }),
        Recipe::Lemma4k2 { .. } => Some(if p == 0 { (0, n - 1) } else { (p - 1, q) }),
        _ => None,
    }
}

/// A verified chain from alpha_{p,q} to tilde-alpha_{p,q}.
///
/// Routing: a transcribed reduction for the dimension class (after moving to
/// a signature it covers, if needed), then for even n the recursive chain of
/// the reduced signature acting on x_1..x_{n-1}, and finally a search link to
/// tilde-alpha_{p,q}. Every link and the composed matrix are re-verified.
pub fn tilde_chain(p: usize, q: usize) -> Result<Chain> {
    let n = p + q;
    if n < 3 {
        return Err(Error::InvalidParams(format!("p + q = {n} is below 3")));
    }
    let alpha = make_alpha_pq(p, q)?;
    let tilde = make_tilde(p, q)?;
    let (al, tl) = (alpha_label(p, q), tilde_label(p, q));
    let mut chain = ChainBuilder::new();
    if alpha == tilde {
        chain.push((&al, &alpha), (&tl, &tilde), GF2Matrix::identity(n)?, "definition")?;
        return chain.finish();
    }
    let Some((recipe, (rp, rq))) = lemma_route(p, q) else {
        chain.search((&al, &alpha), (&tl, &tilde))?;
        return chain.finish();
    };
    let mut cur = alpha.clone();
    let mut cur_label = al.clone();
    for (sp, sq) in signature_path((p, q), (rp, rq)) {
        let next = make_alpha_pq(sp, sq)?;
        let next_label = alpha_label(sp, sq);
        chain.search((&cur_label, &cur), (&next_label, &next))?;
        cur = next;
        cur_label = next_label;
    }
    let g = build_transform(recipe)?;
    let target = recipe_target(recipe, rp, rq)?;
    let target_label = format!("{}({rp},{rq})", recipe.name());
    chain.push(
        (&cur_label, &cur),
        (&target_label, &target),
        g.invert()?,
        format!("transcribed:{}", recipe.name()),
    )?;
    cur = target;
    cur_label = target_label;
    if let Some((sp, sq)) = reduced_signature(recipe, rp, rq) {
        // the reduced chain acts on x_1..x_{n-1} and fixes x_n
        let sub = tilde_chain(sp, sq)?;
        let lift = sub.composed.embed(n, &span(1, n - 1))?;
        let next = substitute(&cur, &lift.invert()?)?;
        let next_label = format!("{}+tail", tilde_label(sp, sq));
        chain.push(
            (&cur_label, &cur),
            (&next_label, &next),
            lift,
            format!("recursion:tilde({sp},{sq})"),
        )?;
        cur = next;
        cur_label = next_label;
    }
    chain.search((&cur_label, &cur), (&tl, &tilde))?;
    chain.finish()
}

/// A single matrix G with alpha_{p,q}(x) = tilde-alpha_{p,q}(Gx).
pub fn tilde_equivalence(p: usize, q: usize) -> Result<GF2Matrix> {
    Ok(tilde_chain(p, q)?.composed)
}

/// A verified (lhs, rhs, witness, provenance) entry.
#[derive(Clone, Debug, Serialize)]
pub struct BlockEquivalence {
    pub lhs: String,
    pub rhs: String,
    #[serde(skip)]
    pub lhs_form: CubicForm,
    #[serde(skip)]
    pub rhs_form: CubicForm,
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub witness: GF2Matrix,
    pub provenance: String,
}

/// The pairs stated by the Clifford block lemma for 2k generators.
pub fn cl_block_statements(k: usize) -> Result<Vec<(String, CubicForm, String, CubicForm)>> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    let n = 2 * k;
    let plus = make_alpha_cl_pq(n, 0)?;
    let minus = make_alpha_cl_pq(0, n)?;
    let blocks = |a: usize, b: usize| make_cl_block_sum(a, b, 1, n);
    let blabel = |a: usize, b: usize| format!("(Cl_{{2,0}})^{a}+(Cl_{{0,2}})^{b}");
    let pl = format!("alpha^Cl_{{{n},0}}");
    let ml = format!("alpha^Cl_{{0,{n}}}");
    Ok(if k.is_multiple_of(2) {
        vec![
            (pl, plus.clone(), ml.clone(), minus.clone()),
            (ml, minus, blabel(k / 2, k / 2), blocks(k / 2, k / 2)?),
        ]
    } else {
        vec![
            (
                pl,
                plus,
                blabel(k.div_ceil(2), (k - 1) / 2),
                blocks(k.div_ceil(2), (k - 1) / 2)?,
            ),
            (
                ml,
                minus,
                blabel((k - 1) / 2, k.div_ceil(2)),
                blocks((k - 1) / 2, k.div_ceil(2))?,
            ),
        ]
    })
}

/// Witnesses for the Clifford block lemma: exhaustive search for 2k <= 4,
/// hill-climbing (fixed seed) above.
pub fn cl_block_equivalences(k: usize, seed: u64, budget: u64) -> Result<Vec<BlockEquivalence>> {
    let mut out = Vec::new();
    for (ll, lf, rl, rf) in cl_block_statements(k)? {
        let (verdict, provenance) = if lf == rf {
            (
                Verdict::Equivalent {
                    witness: GF2Matrix::identity(lf.dim())?,
                },
                "identity".to_string(),
            )
        } else if lf.dim() <= 4 {
            (brute_force_search(&lf, &rf)?, "search:exhaustive".to_string())
        } else {
            (heuristic_search(&lf, &rf, seed, budget)?, format!("search:seed={seed}"))
        };
        let Verdict::Equivalent { witness } = verdict else {
            return Err(Error::Verification(format!("no witness for {ll} ~ {rl}: {verdict:?}")));
        };
        out.push(BlockEquivalence {
            lhs: ll,
            rhs: rl,
            lhs_form: lf,
            rhs_form: rf,
            witness,
            provenance,
        });
    }
    Ok(out)
}
