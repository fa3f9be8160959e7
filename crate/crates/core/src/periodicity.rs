//! Gluing along a shared generator and the periodicity statements built on it.

use serde::Serialize;

use crate::algebra::{extract_generating, has_generating_function, GradedAlgebra, TwistingTable, MAX_TABLE_DIM};
use crate::equivalence::{build_transform, tilde_chain, Chain, ChainBuilder, Link, Recipe};
use crate::error::{Error, Result};
use crate::forms::{glue_forms, glue_forms_with, make_alpha_pq, make_tilde, substitute, zero_count, CubicForm};
use crate::gf2::{parity, GF2Matrix, Z2Vec};

pub use crate::forms::glue_forms as glue;

/// The two-dimensional subalgebra spanned by 1 and the shared generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SubalgebraTag {
    /// u^2 = -1
    C,
    /// u^2 = +1
    R2,
}

/// The isomorphism class of (p, q): the signatures reachable through
/// (p, q) ~ (q, p) and (p, q + 4) ~ (p + 4, q) with both entries positive,
/// plus the coincidences in dimensions 3 and 4. Sorted by p.
pub fn classify_signature(p: usize, q: usize) -> Result<Vec<(usize, usize)>> {
    let n = p + q;
    if n < 3 {
        return Err(Error::InvalidParams(format!("p + q = {n} is below 3")));
    }
    let class: Vec<(usize, usize)> = match n {
        3 if p == 0 => vec![(0, 3)],
        3 => vec![(1, 2), (2, 1), (3, 0)],
        4 if p == 0 => vec![(0, 4)],
        4 if p.is_multiple_of(2) => vec![(2, 2), (4, 0)],
        4 => vec![(1, 3), (3, 1)],
        _ if p == 0 || q == 0 => vec![(p, q)],
        _ => (1..n)
            .filter(|a| a % 4 == p % 4 || a % 4 == q % 4)
            .map(|a| (a, n - a))
            .collect(),
    };
    Ok(class)
}

/// O_{p,q} is simple iff p + q is not divisible by 4, or p and q are both odd.
pub fn is_simple(p: usize, q: usize) -> bool {
    !(p + q).is_multiple_of(4) || (p % 2 == 1 && q % 2 == 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicityReport {
    pub statement: String,
    pub result: (usize, usize),
    pub subalgebra: SubalgebraTag,
    /// Whether the +x_1 term of the glue was used (complex gluing) or not
    /// (gluing over R + R).
    pub glue_correction: bool,
    pub links: Vec<Link>,
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub composed: GF2Matrix,
    pub final_composed_check: bool,
    /// alpha ~ tilde-alpha for each glued factor.
    pub factors: [GlueFactor; 2],
}

fn alpha_label(p: usize, q: usize) -> String {
    format!("alpha_{{{p},{q}}}")
}

/// A factor alpha_{p,q} ~ tilde-alpha_{p,q} of a glue, with the degree that
/// spans the shared subalgebra in the alpha coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct GlueFactor {
    pub signature: (usize, usize),
    pub chain: Chain,
    /// G^{-1} e_1 as a bit string: the degree of the shared generator.
    pub shared_degree: String,
    /// +1 or -1.
    pub shared_square: i8,
}

fn glue_factor(p: usize, q: usize) -> Result<GlueFactor> {
    let chain = tilde_chain(p, q)?;
    let d = chain.composed.invert()?.apply_bits(1);
    let alpha = make_alpha_pq(p, q)?;
    Ok(GlueFactor {
        signature: (p, q),
        shared_degree: Z2Vec::new(p + q, d)?.to_bit_string(),
        shared_square: if alpha.eval_bits(d) == 1 { -1 } else { 1 },
        chain,
    })
}

/// alpha_{result} ~ tilde-alpha_{result} = glue(tilde-alpha_{left},
/// tilde-alpha_{right}), with both factors tied back to their alpha forms.
fn glued_chain(
    left: (usize, usize),
    right: (usize, usize),
    result: (usize, usize),
    complex: bool,
) -> Result<PeriodicityReport> {
    let (rp, rq) = result;
    let mut chain = ChainBuilder::new();
    chain.extend(&tilde_chain(rp, rq)?)?;
    let tilde = make_tilde(rp, rq)?;
    let (tl, tr) = (make_tilde(left.0, left.1)?, make_tilde(right.0, right.1)?);
    let glued = glue_forms_with(&tl, &tr, complex)?;
    let tlabel = format!("tilde_alpha_{{{rp},{rq}}}");
    let glabel = format!(
        "glue(tilde_alpha_{{{},{}}}, tilde_alpha_{{{},{}}})",
        left.0, left.1, right.0, right.1
    );
    if glued != tilde {
        return Err(Error::Verification(format!("{glabel} differs from {tlabel}")));
    }
    chain.push(
        (&tlabel, &tilde),
        (&glabel, &glued),
        GF2Matrix::identity(tilde.dim())?,
        "glue:syntactic",
    )?;
    let chain = chain.finish()?;
    let factors = [glue_factor(left.0, left.1)?, glue_factor(right.0, right.1)?];
    let want = if complex { -1 } else { 1 };
    if factors.iter().any(|f| f.shared_square != want) {
        return Err(Error::Verification("shared generators have the wrong square".into()));
    }
    Ok(PeriodicityReport {
        statement: format!("{} ~ {glabel}", alpha_label(rp, rq)),
        result,
        glue_correction: complex,
        subalgebra: if complex { SubalgebraTag::C } else { SubalgebraTag::R2 },
        composed: chain.composed,
        final_composed_check: chain.final_composed_check,
        links: chain.links,
        factors,
    })
}

/// The real periodicity statement for (p, q):
/// (0, n) glues with (0, 5), (n, 0) with (5, 0) over R + R, and mixed
/// signatures with (2, 3).
pub fn verify_real_periodicity(p: usize, q: usize) -> Result<PeriodicityReport> {
    let n = p + q;
    if n < 3 {
        return Err(Error::InvalidParams(format!("p + q = {n} is below 3")));
    }
    if p == 0 {
        glued_chain((0, n), (0, 5), (0, n + 4), true)
    } else if q == 0 {
        glued_chain((n, 0), (5, 0), (n + 4, 0), false)
    } else if (p, q) == (1, 4) || (p, q) == (4, 1) {
        Err(Error::InvalidParams(format!(
            "({p},{q}) is excluded from the mixed rule"
        )))
    } else {
        glued_chain((p, q), (2, 3), (p + 2, q + 2), true)
    }
}

/// The complex statement in dimension n: a glue of real forms of dimensions
/// n and 5 is equivalent to some alpha of dimension n + 4.
pub fn verify_complex_periodicity(n: usize) -> Result<PeriodicityReport> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("n = {n} is below 3")));
    }
    let p = n / 2;
    glued_chain((p, n - p), (2, 3), (p + 2, n - p + 2), true)
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorLemmaCase {
    pub p: usize,
    pub q: usize,
    pub points: u64,
    pub passed: bool,
    pub fixes_left_block: bool,
}

/// Checks that identity + final_flip carries alpha_{p,q} glued with
/// alpha_{2,3}(x_{n+1}, x_{n+2}, x_1, x_{n+3}, x_{n+4}) onto alpha_{p,q}
/// glued with alpha_{3,2}(x_1, x_{n+1}, .., x_{n+4}).
pub fn verify_o23_tensor_lemma(p: usize, q: usize) -> Result<TensorLemmaCase> {
    let n = p + q;
    let alpha = make_alpha_pq(p, q)?;
    let (l, r) = crate::equivalence::final_flip_pair()?;
    let lhs = glue_forms(&alpha, &l)?;
    let rhs = glue_forms(&alpha, &r)?;
    let total = n + 4;
    let mut vars = vec![1];
    vars.extend(n + 1..=total);
    let g = build_transform(Recipe::FinalFlip)?.embed(total, &vars)?;
    let passed = crate::equivalence::verify_equivalence(&lhs, &rhs, &g)?;
    let widened = alpha.widen(total)?;
    let fixes_left_block = substitute(&widened, &g)? == widened;
    Ok(TensorLemmaCase {
        p,
        q,
        points: 1 << total,
        passed,
        fixes_left_block,
    })
}

/// Product convention on the glued candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    Plain,
    /// Extra sign (-1)^<y, x'> for (x, y)(x', y'), where `pairing[i]` is the
    /// mask of left generators paired with the (i+2)-th right generator.
    Braided {
        pairing: Vec<u32>,
    },
}

impl Convention {
    /// The pairing that links every non-shared generator of one side with
    /// every non-shared generator of the other.
    pub fn koszul(n: usize, m: usize) -> Convention {
        let left = crate::gf2::mask(n) & !1;
        Convention::Braided {
            pairing: vec![left; m.saturating_sub(1)],
        }
    }
}

#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub left: TwistingTable,
    pub right: TwistingTable,
    /// 1-based shared generators.
    pub shared_left: usize,
    pub shared_right: usize,
    pub tag: SubalgebraTag,
}

impl GlueSpec {
    pub fn new(left: &GradedAlgebra, right: &GradedAlgebra, tag: SubalgebraTag) -> Self {
        GlueSpec {
            left: left.twisting.clone(),
            right: right.twisting.clone(),
            shared_left: 1,
            shared_right: 1,
            tag,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GluedResult {
    pub n_total: usize,
    #[serde(skip)]
    pub twisting: TwistingTable,
    /// The generating form, when the glued table has one.
    #[serde(serialize_with = "serialize_opt_form")]
    pub form: Option<CubicForm>,
    pub well_defined: bool,
    /// Number of (a, b) pairs whose product changes after rewriting an
    /// operand through the normalization rule.
    pub inconsistent_pairs: u64,
    pub convention: Convention,
    pub zero_count: Option<u64>,
}

fn serialize_opt_form<S: serde::Serializer>(f: &Option<CubicForm>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match f {
        Some(f) => crate::io::FormJson::from(f).serialize(s),
        None => s.serialize_none(),
    }
}

/// Swaps generator i (1-based) with generator 1 in a table.
fn move_to_front(t: &TwistingTable, i: usize) -> Result<TwistingTable> {
    if i == 1 {
        return Ok(t.clone());
    }
    let n = t.dim();
    let swap = |x: u32| {
        let (a, b) = (x & 1, x >> (i - 1) & 1);
        let mut y = x & !(1 | 1 << (i - 1));
        y |= b | a << (i - 1);
        y
    };
    TwistingTable::from_fn(n, |x, y| t.get_bits(swap(x), swap(y)))
}

/// The algebra-level glue: basis u_x (x) u_y with representatives y_1 = 0,
/// and the rule u_x (x) u_y = (-1)^{f(x,e1) + g(e1, y+e1)} u_{x+e1} (x) u_{y+e1}.
/// Well-definedness is checked by rewriting each operand (and both) through
/// that rule and comparing the normalized products.
pub fn glue_algebras(spec: &GlueSpec, convention: Convention) -> Result<GluedResult> {
    let f = move_to_front(&spec.left, spec.shared_left)?;
    let g = move_to_front(&spec.right, spec.shared_right)?;
    let (n, m) = (f.dim(), g.dim());
    let sq = (f.get_bits(1, 1), g.get_bits(1, 1));
    let want = match spec.tag {
        SubalgebraTag::C => 1,
        SubalgebraTag::R2 => 0,
    };
    if sq != (want, want) {
        return Err(Error::InvalidParams(format!(
            "shared generator squares {:?} do not match {:?}",
            sq, spec.tag
        )));
    }
    let total = n + m - 1;
    if total > MAX_TABLE_DIM {
        return Err(Error::Cap(total, MAX_TABLE_DIM));
    }
    if let Convention::Braided { pairing } = &convention {
        if pairing.len() != m - 1 {
            return Err(Error::DimensionMismatch(m - 1, pairing.len()));
        }
    }
    // raw product of arbitrary (not necessarily normalized) pairs
    let raw = |(x, y): (u32, u32), (x2, y2): (u32, u32)| -> (u8, (u32, u32)) {
        let mut s = f.get_bits(x, x2) ^ g.get_bits(y, y2);
        if let Convention::Braided { pairing } = &convention {
            for (i, &pm) in pairing.iter().enumerate() {
                if y >> (i + 1) & 1 == 1 {
                    s ^= parity(pm & x2);
                }
            }
        }
        (s, (x ^ x2, y ^ y2))
    };
    // sign of the rule applied to a pair with y_1 = 1
    let rule = |(x, y): (u32, u32)| f.get_bits(x, 1) ^ g.get_bits(1, y ^ 1);
    let normalize = |(s, (x, y)): (u8, (u32, u32))| -> (u8, (u32, u32)) {
        if y & 1 == 1 {
            (s ^ rule((x, y)), (x ^ 1, y ^ 1))
        } else {
            (s, (x, y))
        }
    };
    // a representative rewritten into its y_1 = 1 form
    let flip = |(x, y): (u32, u32)| -> (u8, (u32, u32)) {
        let z = (x ^ 1, y ^ 1);
        (rule(z), z)
    };
    let split = |z: u32| -> (u32, u32) { (z & crate::gf2::mask(n), (z >> n) << 1) };
    let size = 1u32 << total;
    let mut bad = 0u64;
    let mut rows = vec![0u8; (size as usize) * (size as usize)];
    for a in 0..size {
        for b in 0..size {
            let (pa, pb) = (split(a), split(b));
            let base = normalize(raw(pa, pb));
            rows[(a * size + b) as usize] = base.0;
            let (sa, fa) = flip(pa);
            let (sb, fb) = flip(pb);
            let variants = [
                {
                    let (s, z) = normalize(raw(fa, pb));
                    (s ^ sa, z)
                },
                {
                    let (s, z) = normalize(raw(pa, fb));
                    (s ^ sb, z)
                },
                {
                    let (s, z) = normalize(raw(fa, fb));
                    (s ^ sa ^ sb, z)
                },
            ];
            if variants.iter().any(|v| *v != base) {
                bad += 1;
            }
        }
    }
    let table = TwistingTable::from_fn(total, |a, b| rows[(a * size + b) as usize])?;
    let form = if has_generating_function(&table) {
        extract_generating(&table).ok()
    } else {
        None
    };
    let zc = form.as_ref().map(zero_count);
    Ok(GluedResult {
        n_total: total,
        twisting: table,
        form,
        well_defined: bad == 0,
        inconsistent_pairs: bad,
        convention,
        zero_count: zc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_classes() {
        assert_eq!(classify_signature(2, 1).unwrap(), vec![(1, 2), (2, 1), (3, 0)]);
        assert_eq!(classify_signature(3, 1).unwrap(), vec![(1, 3), (3, 1)]);
        assert_eq!(classify_signature(0, 9).unwrap(), vec![(0, 9)]);
        assert_eq!(classify_signature(2, 7).unwrap(), vec![(2, 7), (3, 6), (6, 3), (7, 2)]);
    }
}
