//! Integer and rational matrix routines: row Hermite normal form, integral
//! solving, exact inverses and determinants.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rat = Ratio<i128>;

/// Row-style Hermite normal form of the Z-span of `rows`.
///
/// The result is upper echelon with positive pivots; entries above a pivot lie
/// in `[0, pivot)`. Zero rows are dropped.
pub fn hnf(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let (h, _) = hnf_impl(rows, false);
    h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect()
}

/// Hermite normal form together with a unimodular `u` such that `u * rows = h`.
/// `h` keeps its zero rows at the bottom so that the trailing rows of `u`
/// span the left kernel.
pub fn hnf_with_transform(rows: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let (h, u) = hnf_impl(rows, true);
    (h, u.expect("transform requested"))
}

fn hnf_impl(rows: &[Vec<i128>], track: bool) -> (Vec<Vec<i128>>, Option<Vec<Vec<i128>>>) {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let mut u: Option<Vec<Vec<i128>>> = track.then(|| {
        (0..nr)
            .map(|i| (0..nr).map(|j| i128::from(i == j)).collect())
            .collect()
    });
    let mut pivot_row = 0usize;
    let mut pivots = Vec::new();
    for col in 0..nc {
        if pivot_row >= nr {
            break;
        }
        loop {
            // Smallest nonzero entry in this column below pivot_row.
            let best = (pivot_row..nr)
                .filter(|&r| a[r][col] != 0)
                .min_by_key(|&r| a[r][col].abs());
            let Some(best) = best else { break };
            a.swap(pivot_row, best);
            if let Some(u) = u.as_mut() {
                u.swap(pivot_row, best);
            }
            let p = a[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..nr {
                if a[r][col] != 0 {
                    let q = Integer::div_floor(&a[r][col], &p);
                    sub_row(&mut a, r, pivot_row, q);
                    if let Some(u) = u.as_mut() {
                        sub_row(u, r, pivot_row, q);
                    }
                    if a[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col] != 0 {
            if a[pivot_row][col] < 0 {
                a[pivot_row].iter_mut().for_each(|x| *x = -*x);
                if let Some(u) = u.as_mut() {
                    u[pivot_row].iter_mut().for_each(|x| *x = -*x);
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    for &(r, c) in &pivots {
        let p = a[r][c];
        for above in 0..r {
            let q = Integer::div_floor(&a[above][c], &p);
            if q != 0 {
                sub_row(&mut a, above, r, q);
                if let Some(u) = u.as_mut() {
                    sub_row(u, above, r, q);
                }
            }
        }
    }
    (a, u)
}

fn sub_row(a: &mut [Vec<i128>], target: usize, src: usize, q: i128) {
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * *y;
    }
}

/// Integer row vector `x` with `x * rows = target`, if one exists.
pub fn solve_left(rows: &[Vec<i128>], target: &[i128]) -> Option<Vec<i128>> {
    let (h, u) = hnf_with_transform(rows);
    let nc = target.len();
    let mut rest = target.to_vec();
    let mut y = vec![0i128; rows.len()];
    let mut r = 0usize;
    for col in 0..nc {
        if r < h.len() && h[r][col] != 0 {
            let p = h[r][col];
            if rest[col] % p != 0 {
                return None;
            }
            let q = rest[col] / p;
            y[r] = q;
            for (c, v) in rest.iter_mut().enumerate() {
                *v -= q * h[r][c];
            }
            r += 1;
        } else if rest[col] != 0 {
            return None;
        }
    }
    let mut x = vec![0i128; rows.len()];
    for (i, &yi) in y.iter().enumerate() {
        if yi != 0 {
            for (xj, uij) in x.iter_mut().zip(u[i].iter()) {
                *xj += yi * uij;
            }
        }
    }
    Some(x)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det_int(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        a[col].iter_mut().for_each(|x| *x /= p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn to_rat(m: &[Vec<i128>]) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x)).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul_rat(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let k = b.len();
    let nc = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..nc)
                .map(|j| (0..k).fold(Rat::zero(), |s, t| s + row[t] * b[t][j]))
                .collect()
        })
        .collect()
}

/// Common denominator of a rational matrix and its integer numerators.
pub fn clear_denominators(m: &[Vec<Rat>]) -> (i128, Vec<Vec<i128>>) {
    let den = m
        .iter()
        .flatten()
        .fold(1i128, |l, x| l.lcm(x.denom()));
    let ints = m
        .iter()
        .map(|r| r.iter().map(|x| (x * Rat::from_integer(den)).to_integer()).collect())
        .collect();
    (den, ints)
}

/// Box representatives of `Z^n / L`, where `rows` is a full-rank basis of `L`.
/// The representatives are `0 <= x_i < h_ii` for the Hermite form `h`.
pub fn box_representatives(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let h = hnf(rows);
    let n = h.len();
    let diag: Vec<i128> = (0..n).map(|i| h[i][i]).collect();
    let mut out = vec![Vec::new()];
    for &d in &diag {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn rat_abs(x: Rat) -> Rat {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn span_contains(basis: &[Vec<i128>], v: &[i128]) -> bool {
        solve_left(basis, v).is_some()
    }

    #[test]
    fn hnf_of_simple_lattice() {
        let h = hnf(&[vec![2, 4], vec![3, 5]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn bareiss_determinant() {
        let m = vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]];
        assert_eq!(det_int(&m), 6);
        assert_eq!(det_int(&[vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = to_rat(&[vec![2, 1], vec![7, 4]]);
        let inv = inverse(&m).unwrap();
        let id = mat_mul_rat(&m, &inv);
        assert_eq!(id, to_rat(&[vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn box_representatives_count_index() {
        let reps = box_representatives(&[vec![2, 1], vec![0, 3]]);
        assert_eq!(reps.len(), 6);
    }

    proptest! {
        #[test]
        fn hnf_preserves_span(rows in proptest::collection::vec(proptest::collection::vec(-20i128..20, 3), 1..5)) {
            let h = hnf(&rows);
            for r in &rows {
                prop_assert!(h.is_empty() && r.iter().all(|&x| x == 0) || span_contains(&h, r));
            }
            for r in &h {
                prop_assert!(span_contains(&rows, r));
            }
            let (full, u) = hnf_with_transform(&rows);
            for (i, urow) in u.iter().enumerate() {
                let prod: Vec<i128> = (0..3).map(|c| urow.iter().zip(&rows).map(|(a, r)| a * r[c]).sum()).collect();
                prop_assert_eq!(&prod, &full[i]);
            }
            prop_assert_eq!(det_int(&u).abs(), 1);
        }
    }
}
