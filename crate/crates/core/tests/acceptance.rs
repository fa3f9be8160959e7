//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any fails. Each check compares library output against the
//! oracles in `common`, or against golden files built outside the library.

mod common;

use std::time::Instant;

use hoct::algebra::{
    check_graded_alternative, check_graded_associative, check_graded_commutative, generating_axioms, is_associative,
    twist_from_form, twist_standard, StandardKind,
};
use hoct::equivalence::{
    brute_force_search, build_transform, cl_block_equivalences, cl_block_statements, cliff_minus2_source,
    cliff_plus2_source, o23_pair, tilde_equivalence, Recipe,
};
use hoct::forms::{make_alpha_n, make_alpha_pq, make_tilde, weight_rule_check, zero_count};
use hoct::gf2::enumerate_gl;
use hoct::periodicity::{is_simple, verify_complex_periodicity, verify_o23_tensor_lemma, verify_real_periodicity};
use hoct::{CubicForm, TwistingTable};
use serde::Deserialize;

use common::*;

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: hoct::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn table_matches(f: &TwistingTable, n: usize, oracle: impl Fn(u32, u32) -> u8) -> bool {
    (0..1u32 << n).all(|x| (0..1u32 << n).all(|y| f.get_bits(x, y) == oracle(x, y)))
}

fn generating_axioms_hold(level: usize) -> Check {
    for (p, q) in signatures(3, level) {
        let n = p + q;
        let alpha = lib(make_alpha_pq(p, q))?;
        ensure((0..1u32 << n).all(|x| alpha.eval_bits(x) == alpha_pq(p, x)), || {
            format!("alpha_{{{p},{q}}} values")
        })?;
        let f = lib(twist_from_form(&alpha))?;
        ensure(table_matches(&f, n, |x, y| f_opq(n, p, x, y)), || {
            format!("f for ({p},{q}) differs from closed formula")
        })?;
        let report = lib(generating_axioms(&f, &alpha))?;
        ensure(report.all(), || format!("({p},{q}): {report:?}"))?;
    }
    Ok(())
}

fn criterion_1() -> Check {
    generating_axioms_hold(9)?;
    // an independent triple scan for the smaller sizes
    for (p, q) in signatures(3, 6) {
        let n = p + q;
        let a = |x: u32| alpha_pq(p, x);
        let f = |x: u32, y: u32| f_opq(n, p, x, y);
        for x in 0..1u32 << n {
            for y in 0..1u32 << n {
                ensure(f(x, y) ^ f(y, x) == a(x ^ y) ^ a(x) ^ a(y), || {
                    format!("beta at ({p},{q})")
                })?;
                for z in 0..1u32 << n {
                    let delta = f(x, y) ^ f(x, y ^ z) ^ f(x ^ y, z) ^ f(y, z);
                    let polar = a(x ^ y ^ z) ^ a(x ^ y) ^ a(x ^ z) ^ a(y ^ z) ^ a(x) ^ a(y) ^ a(z);
                    ensure(delta == polar, || format!("phi at ({p},{q})"))?;
                }
            }
        }
    }
    Ok(())
}

fn graded_identities_hold(f: &TwistingTable) -> bool {
    check_graded_commutative(f) && check_graded_associative(f) && check_graded_alternative(f)
}

fn criterion_2() -> Check {
    for (p, q) in signatures(3, 9) {
        let f = lib(twist_from_form(&lib(make_alpha_pq(p, q))?))?;
        ensure(graded_identities_hold(&f), || format!("O_{{{p},{q}}}"))?;
    }
    for (p, q) in signatures(1, 9) {
        let n = p + q;
        let c = lib(twist_standard(StandardKind::CliffordPq(p, q)))?;
        ensure(table_matches(&c, n, |x, y| f_clpq(n, p, x, y)), || {
            format!("Cl_{{{p},{q}}} table")
        })?;
        ensure(graded_identities_hold(&c) && is_associative(&c), || {
            format!("Cl_{{{p},{q}}}")
        })?;
    }
    Ok(())
}

fn criterion_3() -> Check {
    for n in 3..=12 {
        ensure(lib(weight_rule_check(n))?, || format!("weight rule n = {n}"))?;
        let alpha = lib(make_alpha_n(n))?;
        ensure((0..1u32 << n).all(|x| alpha.eval_bits(x) == alpha_n(x)), || {
            format!("alpha_{n} values")
        })?;
        ensure(
            (0..1u32 << n).all(|x| (alpha_n(x) == 0) == (x.count_ones() % 4 == 0)),
            || format!("oracle n = {n}"),
        )?;
        let (got, want) = (zero_count(&alpha), weight_zero_count(n));
        ensure(got == want, || {
            format!("zero_count(alpha_{n}) = {got}, expected {want}")
        })?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    for m in 1..=8 {
        let big = m + 2;
        let plus = lib(build_transform(Recipe::CliffPlus2 { n: m }))?.row_strings();
        let minus = lib(build_transform(Recipe::CliffMinus2 { n: m }))?.row_strings();
        for p in 0..=m {
            let q = m - p;
            // sum_{i <= j} y_i y_j + sum_{i > p} y_i: the block whose first p
            // generators square to -1
            let block = |y: u32| f_clpq(m, 0, y, y) ^ ((y >> p).count_ones() % 2) as u8;
            let plus_src = |x: u32| (x & x >> 1 & 1) as u8 ^ block(x >> 2);
            let low = (1u32 << m) - 1;
            let minus_src = |x: u32| block(x & low) ^ f_clpq(2, 0, x >> m, x >> m);
            let lp = lib(cliff_plus2_source(p, q))?;
            let lm = lib(cliff_minus2_source(p, q))?;
            ensure(
                (0..1u32 << big).all(|x| lp.eval_bits(x) == plus_src(x) && lm.eval_bits(x) == minus_src(x)),
                || format!("sum forms for ({p},{q})"),
            )?;
            let plus_tgt = |x: u32| f_clpq(big, p + 2, x, x);
            let minus_tgt = |x: u32| f_clpq(big, p, x, x);
            ensure(equivalent_under(big, plus_tgt, plus_src, &plus), || {
                format!("plus ({p},{q})")
            })?;
            ensure(equivalent_under(big, minus_tgt, minus_src, &minus), || {
                format!("minus ({p},{q})")
            })?;
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    let start = Instant::now();
    for (p, q) in signatures(3, 11) {
        let n = p + q;
        let g = lib(tilde_equivalence(p, q))?;
        let tilde = lib(make_tilde(p, q))?;
        ensure(rank(&g.row_strings()) == n, || {
            format!("witness for ({p},{q}) is singular")
        })?;
        ensure(
            equivalent_under(n, |x| alpha_pq(p, x), |y| tilde.eval_bits(y), &g.row_strings()),
            || format!("alpha_{{{p},{q}}} ~ tilde"),
        )?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 10.0, || format!("took {secs:.1} s"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    ensure(lib(enumerate_gl(3))?.count() as u64 == gl_order(3), || {
        "GL_3 count".into()
    })?;
    ensure(lib(enumerate_gl(4))?.count() as u64 == gl_order(4), || {
        "GL_4 count".into()
    })?;
    let classes: &[&[(usize, usize)]] = &[
        &[(0, 3)],
        &[(1, 2), (2, 1), (3, 0)],
        &[(0, 4)],
        &[(2, 2), (4, 0)],
        &[(1, 3), (3, 1)],
    ];
    let class_of = |s: (usize, usize)| classes.iter().position(|c| c.contains(&s)).unwrap();
    for n in 3..=4 {
        for a in (0..=n).map(|p| (p, n - p)) {
            for b in (0..=n).map(|p| (p, n - p)) {
                let verdict = lib(brute_force_search(
                    &lib(make_alpha_pq(a.0, a.1))?,
                    &lib(make_alpha_pq(b.0, b.1))?,
                ))?;
                let same = class_of(a) == class_of(b);
                ensure(verdict.is_equivalent() == same, || format!("{a:?} vs {b:?}"))?;
                if let Some(w) = verdict.witness() {
                    ensure(
                        equivalent_under(n, |x| alpha_pq(a.0, x), |y| alpha_pq(b.0, y), &w.row_strings()),
                        || format!("witness {a:?} vs {b:?}"),
                    )?;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 5.0, || format!("took {secs:.1} s"))
}

/// glue(tilde_A, tilde_B)(x) evaluated from the two factors directly.
fn glued_oracle(a: &CubicForm, b: &CubicForm, correction: bool, x: u32) -> u8 {
    let n = a.dim();
    let low = (1u32 << n) - 1;
    let right = (x & 1) | (x >> n) << 1;
    a.eval_bits(x & low) ^ b.eval_bits(right) ^ (correction && x & 1 == 1) as u8
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (p, q) in [(0, 3), (3, 0), (1, 2), (2, 1), (0, 4), (4, 0), (2, 2), (1, 3)] {
        let (l, r) = match (p, q) {
            (0, n) => ((0, n), (0, 5)),
            (n, 0) => ((n, 0), (5, 0)),
            _ => ((p, q), (2, 3)),
        };
        reports.push((lib(verify_real_periodicity(p, q))?, l, r, q != 0));
    }
    for n in 3..=5 {
        let p = n / 2;
        reports.push((lib(verify_complex_periodicity(n))?, (p, n - p), (2, 3), true));
    }
    for (report, l, r, correction) in reports {
        let (rp, rq) = report.result;
        let total = rp + rq;
        ensure(report.final_composed_check, || {
            format!("{} composed check", report.statement)
        })?;
        ensure(total == l.0 + l.1 + 4, || format!("{} size", report.statement))?;
        let (ta, tb) = (lib(make_tilde(l.0, l.1))?, lib(make_tilde(r.0, r.1))?);
        let rows = report.composed.row_strings();
        ensure(
            equivalent_under(
                total,
                |x| alpha_pq(rp, x),
                |y| glued_oracle(&ta, &tb, correction, y),
                &rows,
            ),
            || format!("{} pointwise", report.statement),
        )?;
        for f in &report.factors {
            let n = f.signature.0 + f.signature.1;
            let t = lib(make_tilde(f.signature.0, f.signature.1))?;
            let ok = equivalent_under(
                n,
                |x| alpha_pq(f.signature.0, x),
                |y| t.eval_bits(y),
                &f.chain.composed.row_strings(),
            );
            ensure(ok, || format!("factor {:?}", f.signature))?;
            ensure(f.shared_square == if correction { -1 } else { 1 }, || {
                format!("square {:?}", f.signature)
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 60.0, || format!("took {secs:.1} s"))
}

#[derive(Deserialize)]
struct MatrixFile {
    n: usize,
    rows: Vec<String>,
}

#[derive(Deserialize)]
struct BlockWitness {
    lhs: String,
    rhs: String,
    witness: MatrixFile,
}

fn golden(name: &str) -> std::result::Result<String, String> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))
}

/// Applies rows to the coordinates listed in `vars` (1-based), leaving the rest.
fn apply_embedded(rows: &[String], vars: &[usize], x: u32) -> u32 {
    let local = vars
        .iter()
        .enumerate()
        .fold(0u32, |a, (k, &v)| a | (x >> (v - 1) & 1) << k);
    let image = apply_rows(rows, local);
    vars.iter()
        .enumerate()
        .fold(x, |a, (k, &v)| (a & !(1 << (v - 1))) | (image >> k & 1) << (v - 1))
}

fn criterion_8() -> Check {
    let transforms: std::collections::BTreeMap<String, Vec<String>> =
        serde_json::from_str(&golden("transforms.json")?).map_err(|e| e.to_string())?;
    let (l, r) = lib(o23_pair())?;
    let o23 = &transforms["o23_flip"];
    ensure(lib(build_transform(Recipe::O23Flip))?.row_strings() == *o23, || {
        "o23 rows".into()
    })?;
    ensure(equivalent_under(5, |x| l.eval_bits(x), |y| r.eval_bits(y), o23), || {
        "o23 flip".into()
    })?;

    let flip = &transforms["final_flip"];
    for (p, q) in [(1, 2), (2, 2), (1, 3)] {
        let n = p + q;
        let case = lib(verify_o23_tensor_lemma(p, q))?;
        ensure(case.passed && case.fixes_left_block, || format!("final flip ({p},{q})"))?;
        let mut vars = vec![1];
        vars.extend(n + 1..=n + 4);
        let local = |x: u32| {
            vars.iter()
                .enumerate()
                .fold(0u32, |a, (k, &v)| a | (x >> (v - 1) & 1) << k)
        };
        let low = (1u32 << n) - 1;
        // alpha_{2,3}(z2, z3, z1, z4, z5) against alpha_{3,2}(z1, .., z5)
        let lhs = |x: u32| {
            let z = local(x);
            let w = (z >> 1 & 1) | (z >> 2 & 1) << 1 | (z & 1) << 2 | (z >> 3) << 3;
            alpha_pq(p, x & low) ^ alpha_pq(2, w) ^ (x & 1) as u8
        };
        let rhs = |x: u32| alpha_pq(p, x & low) ^ alpha_pq(3, local(x)) ^ (x & 1) as u8;
        let ok = (0..1u32 << (n + 4)).all(|x| lhs(x) == rhs(apply_embedded(flip, &vars, x)));
        ensure(ok, || format!("oracle final flip ({p},{q})"))?;
    }

    for k in 1..=2 {
        for e in lib(cl_block_equivalences(k, 7, 1_000_000))? {
            let n = 2 * k;
            let ok = equivalent_under(
                n,
                |x| e.lhs_form.eval_bits(x),
                |y| e.rhs_form.eval_bits(y),
                &e.witness.row_strings(),
            );
            ensure(ok, || format!("{} ~ {}", e.lhs, e.rhs))?;
        }
    }
    let committed: Vec<BlockWitness> = serde_json::from_str(&golden("cl_block_k3.json")?).map_err(|e| e.to_string())?;
    let stated = lib(cl_block_statements(3))?;
    ensure(committed.len() == stated.len(), || "k = 3 statement count".into())?;
    for (w, (ll, lf, rl, rf)) in committed.iter().zip(&stated) {
        ensure(w.lhs == *ll && w.rhs == *rl && w.witness.n == 6, || {
            format!("k = 3 labels {} {}", w.lhs, w.rhs)
        })?;
        ensure(rank(&w.witness.rows) == 6, || "k = 3 witness singular".into())?;
        ensure(
            equivalent_under(6, |x| lf.eval_bits(x), |y| rf.eval_bits(y), &w.witness.rows),
            || format!("k = 3 {ll} ~ {rl}"),
        )?;
    }
    Ok(())
}

fn criterion_9() -> Check {
    for (p, q) in signatures(3, 12) {
        let n = p + q;
        let expected = !(n % 4 == 0 && (p % 2 == 0 || q % 2 == 0));
        ensure(is_simple(p, q) == expected, || format!("({p},{q})"))?;
    }
    Ok(())
}

/// Criteria 1 and 2 for a candidate form against the O_{0,3} table.
fn generates_octonions(alpha: &CubicForm) -> bool {
    let f = |x: u32, y: u32| f_opq(3, 0, x, y);
    let a = |x: u32| alpha.eval_bits(x);
    (0..8u32).all(|x| {
        f(x, x) == a(x)
            && (0..8u32).all(|y| {
                f(x, y) ^ f(y, x) == a(x ^ y) ^ a(x) ^ a(y)
                    && (0..8u32).all(|z| {
                        f(x, y) ^ f(x, y ^ z) ^ f(x ^ y, z) ^ f(y, z)
                            == a(x ^ y ^ z) ^ a(x ^ y) ^ a(x ^ z) ^ a(y ^ z) ^ a(x) ^ a(y) ^ a(z)
                    })
            })
    })
}

fn criterion_10() -> Check {
    let alpha = lib(make_alpha_pq(0, 3))?;
    let reference = lib(twist_standard(StandardKind::Opq(0, 3)))?;
    ensure(generates_octonions(&alpha), || "unmutated form fails".into())?;
    let monomials: [&[usize]; 7] = [&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]];
    for m in monomials {
        let mut mutated = alpha.clone();
        lib(mutated.toggle(m))?;
        ensure(!generates_octonions(&mutated), || {
            format!("flip of {m:?} still generates")
        })?;
        ensure(!lib(generating_axioms(&reference, &mutated))?.all(), || {
            format!("library accepts flip of {m:?}")
        })?;
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("generating-function axioms, 3 <= n <= 9", criterion_1),
        ("graded identities for O_{p,q} and Cl_{p,q}, n <= 9", criterion_2),
        ("weight rule and zero counts, 3 <= n <= 12", criterion_3),
        ("Clifford coordinate changes, p + q <= 8", criterion_4),
        ("alpha_{p,q} ~ tilde-alpha_{p,q}, 3 <= n <= 11", criterion_5),
        ("n = 3, 4 equivalence classes by exhaustive search", criterion_6),
        ("real and complex periodicity", criterion_7),
        ("o23 flip, final flip, Clifford blocks", criterion_8),
        ("simplicity predicate, 3 <= n <= 12", criterion_9),
        ("single-coefficient mutations of alpha_{0,3}", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("criterion {:>2} pass  {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
