//! The verification battery behind `hoct selftest`.

use std::time::Instant;

use clap::ValueEnum;

use hoct::algebra::{
    check_graded_alternative, check_graded_associative, check_graded_commutative, generating_axioms, is_associative,
    twist_from_form, twist_standard, StandardKind,
};
use hoct::equivalence::{
    brute_force_search, build_transform, cl_block_equivalences, cliff_minus2_source, cliff_plus2_source, o23_pair,
    tilde_chain, verify_equivalence, Recipe,
};
use hoct::forms::{make_alpha_cl_pq, make_alpha_n, make_alpha_pq, weight_rule_check, zero_count};
use hoct::periodicity::{
    classify_signature, is_simple, verify_complex_periodicity, verify_o23_tensor_lemma, verify_real_periodicity,
};
use hoct::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

struct Check {
    name: &'static str,
    statement: &'static str,
    run: fn(Level) -> Result<bool>,
}

fn max_n(level: Level, quick: usize, full: usize) -> usize {
    if level == Level::Quick {
        quick
    } else {
        full
    }
}

fn signatures(lo: usize, hi: usize) -> impl Iterator<Item = (usize, usize)> {
    (lo..=hi).flat_map(|n| (0..=n).map(move |p| (p, n - p)))
}

fn binomial_zero_count(n: usize) -> u64 {
    let mut c = 1u64;
    let mut total = 0;
    for j in 0..=n as u64 {
        if j % 4 == 0 {
            total += c;
        }
        c = c * (n as u64 - j) / (j + 1);
    }
    total
}

fn generating(level: Level) -> Result<bool> {
    for (p, q) in signatures(3, max_n(level, 6, 9)) {
        let alpha = make_alpha_pq(p, q)?;
        if !generating_axioms(&twist_from_form(&alpha)?, &alpha)?.all() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn graded_identities(level: Level) -> Result<bool> {
    for (p, q) in signatures(3, max_n(level, 6, 9)) {
        let f = twist_from_form(&make_alpha_pq(p, q)?)?;
        let c = twist_standard(StandardKind::CliffordPq(p, q))?;
        let ok = [&f, &c]
            .iter()
            .all(|t| check_graded_commutative(t) && check_graded_associative(t) && check_graded_alternative(t));
        if !ok || !is_associative(&c) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn weight_rule(level: Level) -> Result<bool> {
    for n in 3..=max_n(level, 6, 12) {
        if !weight_rule_check(n)? || zero_count(&make_alpha_n(n)?) != binomial_zero_count(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn clifford_transforms(level: Level) -> Result<bool> {
    for m in 1..=max_n(level, 4, 8) {
        let plus = build_transform(Recipe::CliffPlus2 { n: m })?;
        let minus = build_transform(Recipe::CliffMinus2 { n: m })?;
        for p in 0..=m {
            let q = m - p;
            let a = verify_equivalence(&make_alpha_cl_pq(p + 2, q)?, &cliff_plus2_source(p, q)?, &plus)?;
            let b = verify_equivalence(&make_alpha_cl_pq(p, q + 2)?, &cliff_minus2_source(p, q)?, &minus)?;
            if !(a && b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn tilde(level: Level) -> Result<bool> {
    for (p, q) in signatures(3, max_n(level, 6, 11)) {
        if !tilde_chain(p, q)?.final_composed_check {
            return Ok(false);
        }
    }
    Ok(true)
}

fn degeneracies(_: Level) -> Result<bool> {
    for n in 3..=4 {
        for (p, q) in signatures(n, n) {
            let class = classify_signature(p, q)?;
            for (p2, q2) in signatures(n, n) {
                let v = brute_force_search(&make_alpha_pq(p, q)?, &make_alpha_pq(p2, q2)?)?;
                if v.is_equivalent() != class.contains(&(p2, q2)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn periodicity(level: Level) -> Result<bool> {
    let real: &[(usize, usize)] = if level == Level::Quick {
        &[(0, 3), (3, 0), (1, 2)]
    } else {
        &[(0, 3), (3, 0), (1, 2), (2, 1), (0, 4), (4, 0), (2, 2), (1, 3)]
    };
    for &(p, q) in real {
        if !verify_real_periodicity(p, q)?.final_composed_check {
            return Ok(false);
        }
    }
    for n in 3..=max_n(level, 3, 5) {
        if !verify_complex_periodicity(n)?.final_composed_check {
            return Ok(false);
        }
    }
    Ok(true)
}

fn flips(level: Level) -> Result<bool> {
    let (l, r) = o23_pair()?;
    if !verify_equivalence(&l, &r, &build_transform(Recipe::O23Flip)?)? {
        return Ok(false);
    }
    for (p, q) in [(1, 2), (2, 2), (1, 3)] {
        let c = verify_o23_tensor_lemma(p, q)?;
        if !(c.passed && c.fixes_left_block) {
            return Ok(false);
        }
    }
    for k in 1..=max_n(level, 2, 3) {
        cl_block_equivalences(k, 7, 1_000_000)?;
    }
    Ok(true)
}

fn simplicity(_: Level) -> Result<bool> {
    Ok(signatures(3, 12).all(|(p, q)| {
        let n = p + q;
        is_simple(p, q) == (n % 4 != 0 || (p % 2 == 1 && q % 2 == 1))
    }))
}

fn mutation(_: Level) -> Result<bool> {
    let alpha = make_alpha_pq(0, 3)?;
    let reference = twist_standard(StandardKind::Opq(0, 3))?;
    if !generating_axioms(&reference, &alpha)?.all() {
        return Ok(false);
    }
    let monomials: [&[usize]; 7] = [&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]];
    for m in monomials {
        let mut mutated = alpha.clone();
        mutated.toggle(m)?;
        // the mutated form must fail to generate the octonion table
        if generating_axioms(&reference, &mutated)?.all() {
            return Ok(false);
        }
    }
    Ok(true)
}

const CHECKS: &[Check] = &[
    Check {
        name: "generating-function",
        statement: "twist_from_form(alpha_{p,q}) satisfies the three generating conditions",
        run: generating,
    },
    Check {
        name: "graded-identities",
        statement: "O_{p,q} and Cl_{p,q} are graded commutative, associative, alternative; Cl associative",
        run: graded_identities,
    },
    Check {
        name: "weight-rule",
        statement: "alpha_n(x) = 0 iff |x| = 0 mod 4",
        run: weight_rule,
    },
    Check {
        name: "clifford-transforms",
        statement: "the two Clifford coordinate changes reach alpha^Cl_{p+2,q} and alpha^Cl_{p,q+2}",
        run: clifford_transforms,
    },
    Check {
        name: "alpha-tilde",
        statement: "alpha_{p,q} ~ tilde-alpha_{p,q}",
        run: tilde,
    },
    Check {
        name: "small-classes",
        statement: "O_{3,0} ~ O_{2,1} ~ O_{1,2} vs O_{0,3}; O_{4,0} ~ O_{2,2}, O_{1,3} ~ O_{3,1}, O_{0,4}",
        run: degeneracies,
    },
    Check {
        name: "periodicity",
        statement: "O_{n+4} from O_n and O_5 glued along a shared generator",
        run: periodicity,
    },
    Check {
        name: "o23-lemmas",
        statement: "o23 flip, O_{p,q} glued with O_{2,3} vs O_{3,2}, Clifford block sums",
        run: flips,
    },
    Check {
        name: "simplicity",
        statement: "O_{p,q} simple iff p+q != 0 mod 4 or p, q odd",
        run: simplicity,
    },
    Check {
        name: "mutation",
        statement: "every single-coefficient change of alpha_{0,3} breaks generation",
        run: mutation,
    },
];

/// Runs the battery and prints one row per check; true iff all pass.
pub fn run(level: Level) -> bool {
    let mut all = true;
    println!("{:<22}{:<8}{:>10}  statement", "check", "result", "ms");
    for c in CHECKS {
        let start = Instant::now();
        let outcome = (c.run)(level);
        let ms = start.elapsed().as_millis();
        let label = match &outcome {
            Ok(true) => "pass".to_string(),
            Ok(false) => "FAIL".to_string(),
            Err(e) => format!("ERROR: {e}"),
        };
        let passed = matches!(outcome, Ok(true));
        if !passed && all {
            eprintln!("first failing check: {} ({})", c.name, c.statement);
        }
        all &= passed;
        println!("{:<22}{:<8}{:>10}  {}", c.name, label, ms, c.statement);
    }
    all
}
