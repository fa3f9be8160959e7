//! Reference implementations used as oracles. Everything here works from
//! closed formulas and plain loops, never from the library's own tables.
#![allow(dead_code)]

/// alpha_n(x) from the weight: C(w,3) + C(w,2) + w mod 2.
pub fn alpha_n(x: u32) -> u8 {
    let w = x.count_ones() as u64;
    let c3 = if w >= 3 { w * (w - 1) * (w - 2) / 6 } else { 0 };
    let c2 = if w >= 2 { w * (w - 1) / 2 } else { 0 };
    ((c3 + c2 + w) % 2) as u8
}

/// alpha_{p,q}(x) = alpha_n(x) + x_1 + .. + x_p.
pub fn alpha_pq(p: usize, x: u32) -> u8 {
    let low = x & ((1u32 << p) - 1);
    alpha_n(x) ^ (low.count_ones() % 2) as u8
}

fn bit(x: u32, i: usize) -> u32 {
    x >> (i - 1) & 1
}

/// f_{O_n}(x, y) + sum_{i <= p} x_i y_i, straight from the closed formula.
pub fn f_opq(n: usize, p: usize, x: u32, y: u32) -> u8 {
    let mut s = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                s ^= bit(x, i) & bit(x, j) & bit(y, k);
                s ^= bit(x, i) & bit(y, j) & bit(x, k);
                s ^= bit(y, i) & bit(x, j) & bit(x, k);
            }
        }
    }
    for i in 1..=n {
        for j in i..=n {
            s ^= bit(x, i) & bit(y, j);
        }
    }
    for i in 1..=p {
        s ^= bit(x, i) & bit(y, i);
    }
    s as u8
}

/// f_{Cl_{p,q}}(x, y) = sum_{i <= j} x_i y_j + sum_{i <= p} x_i y_i.
pub fn f_clpq(n: usize, p: usize, x: u32, y: u32) -> u8 {
    let mut s = 0;
    for i in 1..=n {
        for j in i..=n {
            s ^= bit(x, i) & bit(y, j);
        }
    }
    for i in 1..=p {
        s ^= bit(x, i) & bit(y, i);
    }
    s as u8
}

/// Number of x with weight divisible by 4.
pub fn weight_zero_count(n: usize) -> u64 {
    (0..=n as u64)
        .filter(|j| j % 4 == 0)
        .map(|j| binomial(n as u64, j))
        .sum()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// |GL_n(F_2)| by the product formula.
pub fn gl_order(n: u32) -> u64 {
    (0..n).map(|i| (1u64 << n) - (1u64 << i)).product()
}

/// A form as a list of monomials (1-based index lists), evaluated directly.
pub fn eval_monomials(monomials: &[Vec<usize>], x: u32) -> u8 {
    monomials
        .iter()
        .map(|m| m.iter().all(|&i| bit(x, i) == 1) as u8)
        .fold(0, |a, b| a ^ b)
}

/// Applies a matrix given as row strings (x_1 leftmost) to x.
pub fn apply_rows(rows: &[String], x: u32) -> u32 {
    let mut out = 0;
    for (i, r) in rows.iter().enumerate() {
        let dot = r
            .bytes()
            .enumerate()
            .filter(|&(j, c)| c == b'1' && bit(x, j + 1) == 1)
            .count();
        out |= (dot as u32 & 1) << i;
    }
    out
}

/// lhs(x) = rhs(Gx) at every point.
pub fn equivalent_under(n: usize, lhs: impl Fn(u32) -> u8, rhs: impl Fn(u32) -> u8, rows: &[String]) -> bool {
    (0..1u32 << n).all(|x| lhs(x) == rhs(apply_rows(rows, x)))
}

/// Rank over GF(2) of row strings.
pub fn rank(rows: &[String]) -> usize {
    let mut v: Vec<u64> = rows
        .iter()
        .map(|r| {
            r.bytes()
                .enumerate()
                .fold(0u64, |a, (j, c)| a | ((c == b'1') as u64) << j)
        })
        .collect();
    let mut r = 0;
    for col in 0..64 {
        if let Some(piv) = (r..v.len()).find(|&i| v[i] >> col & 1 == 1) {
            v.swap(r, piv);
            for i in 0..v.len() {
                if i != r && v[i] >> col & 1 == 1 {
                    v[i] ^= v[r];
                }
            }
            r += 1;
        }
    }
    r
}

pub fn signatures(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    (lo..=hi).flat_map(|n| (0..=n).map(move |p| (p, n - p))).collect()
}
