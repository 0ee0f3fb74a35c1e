//! Exact short-vector enumeration for positive definite integer Gram matrices.
//!
//! Floating point only steers the search (LLL reduction and Fincke-Pohst
//! bounds carry a safety margin); every returned vector is checked with exact
//! integer arithmetic.

/// Unimodular `u` (rows are new basis vectors in old coordinates) such that
/// `u * gram * u^T` is LLL-reduced.
pub fn lll(gram: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = gram.len();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut g = gram.to_vec();
    let mut k = 1usize;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 10_000 {
            break;
        }
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i128;
                row_op(&mut u, &mut g, k, j, r);
            }
        }
        let (mu, b) = gso(&g);
        if b[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            u.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
    u
}

fn row_op(u: &mut [Vec<i128>], g: &mut [Vec<i128>], k: usize, j: usize, r: i128) {
    let n = g.len();
    for c in 0..n {
        u[k][c] -= r * u[j][c];
    }
    // b_k <- b_k - r b_j
    let gkk = g[k][k] - 2 * r * g[k][j] + r * r * g[j][j];
    for c in 0..n {
        if c != k {
            let v = g[k][c] - r * g[j][c];
            g[k][c] = v;
            g[c][k] = v;
        }
    }
    g[k][k] = gkk;
}

fn gso(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0f64; n]; n];
    let mut b = vec![0.0f64; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * b[k];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i] as f64;
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * b[k];
        }
        b[i] = s;
        mu[i][i] = 1.0;
    }
    (mu, b)
}

/// All integer vectors `x` with `x^T h x <= bound` (the zero vector included).
pub fn short_vectors(h: &[Vec<i128>], bound: i128) -> Vec<Vec<i128>> {
    let n = h.len();
    if bound < 0 {
        return Vec::new();
    }
    let u = lll(h);
    let g = congruent(h, &u);
    let mut found = Vec::new();
    fincke_pohst(&g, bound, &mut |y: &[i128]| {
        let x: Vec<i128> = (0..n)
            .map(|c| y.iter().zip(&u).map(|(yi, row)| yi * row[c]).sum())
            .collect();
        found.push(x);
    });
    found
}

/// All integer vectors with `x^T h x == value`.
pub fn vectors_of_value(h: &[Vec<i128>], value: i128) -> Vec<Vec<i128>> {
    short_vectors(h, value)
        .into_iter()
        .filter(|x| quad_value(h, x) == value)
        .collect()
}

pub fn quad_value(h: &[Vec<i128>], x: &[i128]) -> i128 {
    let n = x.len();
    let mut s = 0i128;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            s += x[i] * h[i][j] * x[j];
        }
    }
    s
}

fn congruent(h: &[Vec<i128>], u: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = h.len();
    let mut out = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0i128;
            for a in 0..n {
                if u[i][a] == 0 {
                    continue;
                }
                for b in 0..n {
                    s += u[i][a] * h[a][b] * u[j][b];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

fn fincke_pohst(g: &[Vec<i128>], bound: i128, emit: &mut dyn FnMut(&[i128])) {
    let n = g.len();
    // Cholesky-type decomposition: x^T g x = sum q_ii (x_i + sum_{j>i} q_ij x_j)^2.
    let mut q: Vec<Vec<f64>> = g
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let limit = bound as f64 * (1.0 + 1e-9) + 1e-6;
    let mut x = vec![0i128; n];
    descend(g, &q, n, limit, bound, &mut x, emit);
}

fn descend(
    g: &[Vec<i128>],
    q: &[Vec<f64>],
    level: usize,
    remaining: f64,
    bound: i128,
    x: &mut Vec<i128>,
    emit: &mut dyn FnMut(&[i128]),
) {
    if level == 0 {
        if quad_value(g, x) <= bound {
            emit(x);
        }
        return;
    }
    let i = level - 1;
    let n = q.len();
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let rem = remaining.max(0.0);
    let radius = (rem / q[i][i]).sqrt() + 1e-6;
    let lo = (center - radius).ceil() as i128;
    let hi = (center + radius).floor() as i128;
    for xi in lo..=hi {
        let t = xi as f64 - center;
        let left = remaining - q[i][i] * t * t;
        if left < -1e-6 * (1.0 + remaining.abs()) {
            continue;
        }
        x[i] = xi;
        descend(g, q, level - 1, left, bound, x, emit);
    }
    x[i] = 0;
}

/// Hessian `h` of an integer-valued quadratic function on `Z^n`, so that
/// `x^T h x = 2 q(x)`.
pub fn hessian<F: Fn(&[i128]) -> i128>(n: usize, q: F) -> Vec<Vec<i128>> {
    let unit = |i: usize| -> Vec<i128> { (0..n).map(|k| i128::from(k == i)).collect() };
    let mut h = vec![vec![0i128; n]; n];
    for i in 0..n {
        h[i][i] = 2 * q(&unit(i));
        for j in i + 1..n {
            let mut e = unit(i);
            e[j] = 1;
            let v = q(&e) - q(&unit(i)) - q(&unit(j));
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(h: &[Vec<i128>], bound: i128, r: i128) -> usize {
        let n = h.len();
        let mut count = 0;
        let total = (2 * r + 1).pow(n as u32);
        for idx in 0..total {
            let mut t = idx;
            let x: Vec<i128> = (0..n)
                .map(|_| {
                    let v = t % (2 * r + 1) - r;
                    t /= 2 * r + 1;
                    v
                })
                .collect();
            if quad_value(h, &x) <= bound {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn sum_of_four_squares_counts() {
        let h: Vec<Vec<i128>> = (0..4).map(|i| (0..4).map(|j| i128::from(i == j)).collect()).collect();
        // r_4(5) = 8 * (1 + 5) = 48
        assert_eq!(vectors_of_value(&h, 5).len(), 48);
        assert_eq!(vectors_of_value(&h, 1).len(), 8);
    }

    #[test]
    fn skewed_form_matches_box_search() {
        let h = vec![vec![2, 9, 0], vec![9, 42, 1], vec![0, 1, 3]];
        assert_eq!(short_vectors(&h, 40).len(), brute(&h, 40, 40));
    }

    proptest! {
        #[test]
        fn enumeration_is_complete(a in 1i128..6, b in -3i128..4, c in 1i128..6, e in -2i128..3, f in 1i128..5) {
            // Diagonally dominant, hence positive definite.
            let h = vec![vec![a + b.abs() + e.abs(), b, e], vec![b, c + b.abs(), 0], vec![e, 0, f + e.abs()]];
            prop_assert_eq!(short_vectors(&h, 30).len(), brute(&h, 30, 30));
        }
    }
}
