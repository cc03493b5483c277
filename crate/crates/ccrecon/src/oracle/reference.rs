//! Reference arithmetic written apart from the core crate: fingerprints as
//! explicit power sums, codewords by Newton interpolation, and the coded
//! matrix built entry by entry. Only plain `u128` modular arithmetic is used.

use std::collections::HashSet;

use ccrecon_core::LabeledGraph;

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    acc
}

fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "zero has no inverse");
    pow(a, p - 2, p)
}

fn sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

/// `sum_i a_i t^(i-1) mod p`, one power at a time.
pub fn power_sum(a: &[u64], t: u64, p: u64) -> u64 {
    a.iter()
        .enumerate()
        .fold(0, |acc, (i, &ai)| (acc + mul(ai % p, pow(t, i as u64, p), p)) % p)
}

/// Points of `F_p` where the fingerprints of `a` and `b` agree.
pub fn agreeing_points(a: &[u64], b: &[u64], p: u64) -> u64 {
    (0..p).filter(|&t| power_sum(a, t, p) == power_sum(b, t, p)).count() as u64
}

/// `x` followed by the values at `n+1..=n+k` of the polynomial through
/// `(1, x_1), .., (n, x_n)`, from Newton's divided differences.
pub fn newton_codeword(x: &[u64], k: usize, q: u64) -> Vec<u64> {
    let n = x.len();
    let mut coef: Vec<u64> = x.iter().map(|&v| v % q).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            // nodes are i + 1 and i + 1 - level
            let num = sub(coef[i], coef[i - 1], q);
            coef[i] = mul(num, inv(level as u64, q), q);
        }
    }
    let mut word = x.to_vec();
    for t in (n + 1)..=(n + k) {
        let t = t as u64;
        let mut v = 0;
        for i in (0..n).rev() {
            v = (mul(v, sub(t, i as u64 + 1, q), q) + coef[i]) % q;
        }
        word.push(v);
    }
    word
}

/// `C(G)` as `(n+k)` rows of length `n+k`.
pub fn coded_matrix(g: &LabeledGraph, k: usize, q: u64) -> Vec<Vec<u64>> {
    let n = g.n();
    let words: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let row: Vec<u64> = (0..n).map(|j| u64::from(g.has_edge(i, j))).collect();
            newton_codeword(&row, k, q)
        })
        .collect();
    let mut m = vec![vec![0u64; n + k]; n + k];
    for i in 0..n {
        m[i].copy_from_slice(&words[i]);
    }
    for r in 0..k {
        for j in 0..n {
            m[n + r][j] = words[j][n + r];
        }
    }
    m
}

/// Row `j` of `m` evaluated at `points[j]`.
pub fn matrix_fingerprint(m: &[Vec<u64>], points: &[u64], p: u64) -> Vec<u64> {
    assert_eq!(m.len(), points.len());
    m.iter().zip(points).map(|(row, &t)| power_sum(row, t, p)).collect()
}

/// Number of unordered pairs of `graphs` whose coded fingerprints collide.
pub fn colliding_pairs(graphs: &[LabeledGraph], k: usize, q: u64, points: &[u64], p: u64) -> u64 {
    let fps: Vec<Vec<u64>> = graphs
        .iter()
        .map(|g| matrix_fingerprint(&coded_matrix(g, k, q), points, p))
        .collect();
    let distinct: HashSet<&Vec<u64>> = fps.iter().collect();
    if distinct.len() == fps.len() {
        return 0;
    }
    let mut count = 0;
    for a in 0..fps.len() {
        for b in a + 1..fps.len() {
            count += u64::from(fps[a] == fps[b]);
        }
    }
    count
}

/// `(n + k) 2^e` with `e` the least integer such that `2^(k e) >= size^2`.
pub fn separation_threshold(n: usize, k: usize, size: u64) -> u128 {
    let target = u128::from(size) * u128::from(size);
    let mut e = 0u32;
    while (1u128 << (k as u32 * e).min(127)) < target {
        e += 1;
    }
    (n as u128 + k as u128) << e
}

/// `3 n^3 2^c` with `c` the least integer such that `2^(c m) >= |G_m|` for
/// every `m <= n`, given the cardinalities `sizes[m - 1]`.
pub fn hereditary_threshold(n: usize, sizes: &[u64]) -> u128 {
    let mut c = 0u32;
    for (m, &s) in sizes.iter().enumerate().take(n) {
        let m = m as u32 + 1;
        while (1u128 << (c * m).min(127)) < u128::from(s) {
            c += 1;
        }
    }
    (3 * (n as u128).pow(3)) << c
}

/// `ceil(log2 p)`, the width of an element of `F_p`.
pub fn element_bits(p: u64) -> usize {
    let mut bits = 0;
    while (1u128 << bits) < u128::from(p) {
        bits += 1;
    }
    bits
}

pub fn is_prime(x: u64) -> bool {
    x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| x % d != 0)
}

pub fn next_prime(x: u128) -> u64 {
    let mut c = x as u64 + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}
