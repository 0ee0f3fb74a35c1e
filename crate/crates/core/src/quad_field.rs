//! Arithmetic in the ring of integers `O_K = Z[w]` of `K = Q(sqrt(-m))`.

use crate::arith::{divisors, is_squarefree, kronecker};
use crate::error::{Error, Result};
use crate::linalg::{hnf, solve_left};
use serde::Serialize;
use std::ops::{Add, Neg, Sub};

/// Class-number-one fields with a norm-Euclidean ring of integers.
pub const EUCLIDEAN_M: [i64; 5] = [1, 2, 3, 7, 11];
/// Remaining class-number-one fields, accepted only as experimental.
pub const EXPERIMENTAL_M: [i64; 4] = [19, 43, 67, 163];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OmegaKind {
    /// `w = sqrt(-m)`, used for `m = 1, 2 (mod 4)`.
    Root,
    /// `w = (1 + sqrt(-m)) / 2`, used for `m = 3 (mod 4)`.
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldParams {
    pub m: i64,
    pub omega_kind: OmegaKind,
    pub unit_count: usize,
    pub euclidean: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct QuadInt {
    pub x: i64,
    pub y: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { x: 0, y: 0 };
    pub const ONE: QuadInt = QuadInt { x: 1, y: 0 };
    pub const OMEGA: QuadInt = QuadInt { x: 0, y: 1 };

    pub const fn new(x: i64, y: i64) -> Self {
        QuadInt { x, y }
    }

    pub const fn int(x: i64) -> Self {
        QuadInt { x, y: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn scale(self, k: i64) -> Self {
        QuadInt::new(self.x * k, self.y * k)
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-self.x, -self.y)
    }
}

impl FieldParams {
    pub fn new(m: i64) -> Result<Self> {
        if m < 1 || !is_squarefree(m as u64) {
            return Err(Error::InvalidConfig(format!("m = {m} is not a square-free positive integer")));
        }
        if !EUCLIDEAN_M.contains(&m) && !EXPERIMENTAL_M.contains(&m) {
            return Err(Error::InvalidConfig(format!("Q(sqrt(-{m})) does not have class number one")));
        }
        let omega_kind = if m % 4 == 3 { OmegaKind::Half } else { OmegaKind::Root };
        let unit_count = match m {
            1 => 4,
            3 => 6,
            _ => 2,
        };
        Ok(FieldParams {
            m,
            omega_kind,
            unit_count,
            euclidean: EUCLIDEAN_M.contains(&m),
        })
    }

    /// True for parameters whose reports carry the experimental tag.
    pub fn experimental(&self) -> bool {
        self.m == 2 || EXPERIMENTAL_M.contains(&self.m)
    }

    /// Trace of `w`.
    pub fn omega_trace(&self) -> i64 {
        match self.omega_kind {
            OmegaKind::Root => 0,
            OmegaKind::Half => 1,
        }
    }

    /// Norm of `w`.
    pub fn omega_norm(&self) -> i64 {
        match self.omega_kind {
            OmegaKind::Root => self.m,
            OmegaKind::Half => (self.m + 1) / 4,
        }
    }

    /// Field discriminant `d_K`.
    pub fn discriminant(&self) -> i64 {
        match self.omega_kind {
            OmegaKind::Root => -4 * self.m,
            OmegaKind::Half => -self.m,
        }
    }

    pub fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        let (t, n) = (self.omega_trace(), self.omega_norm());
        QuadInt::new(
            a.x * b.x - n * a.y * b.y,
            a.x * b.y + a.y * b.x + t * a.y * b.y,
        )
    }

    pub fn conj(&self, a: QuadInt) -> QuadInt {
        QuadInt::new(a.x + self.omega_trace() * a.y, -a.y)
    }

    pub fn norm(&self, a: QuadInt) -> i64 {
        a.x * a.x + self.omega_trace() * a.x * a.y + self.omega_norm() * a.y * a.y
    }

    pub fn trace(&self, a: QuadInt) -> i64 {
        2 * a.x + self.omega_trace() * a.y
    }

    /// `a / b` when the quotient lies in `O_K`.
    pub fn div_exact(&self, a: QuadInt, b: QuadInt) -> Option<QuadInt> {
        let nb = self.norm(b);
        if nb == 0 {
            return None;
        }
        let p = self.mul(a, self.conj(b));
        (p.x % nb == 0 && p.y % nb == 0).then(|| QuadInt::new(p.x / nb, p.y / nb))
    }

    pub fn divides(&self, b: QuadInt, a: QuadInt) -> bool {
        if b.is_zero() {
            return a.is_zero();
        }
        self.div_exact(a, b).is_some()
    }

    pub fn units(&self) -> Vec<QuadInt> {
        self.elements_of_norm(1)
    }

    /// Every element of norm exactly `n`.
    pub fn elements_of_norm(&self, n: i64) -> Vec<QuadInt> {
        self.elements_up_to_norm(n)
            .into_iter()
            .filter(|&z| self.norm(z) == n)
            .collect()
    }

    /// Every element of norm at most `n`.
    pub fn elements_up_to_norm(&self, n: i64) -> Vec<QuadInt> {
        // 4 N(x + y w) = (2x + t y)^2 + |d'| y^2 with |d'| = 4n_w - t^2.
        let t = self.omega_trace();
        let dprime = 4 * self.omega_norm() - t * t;
        let mut out = Vec::new();
        let ymax = ((4 * n) as f64 / dprime as f64).sqrt() as i64 + 1;
        for y in -ymax..=ymax {
            let rest = 4 * n - dprime * y * y;
            if rest < 0 {
                continue;
            }
            let s = (rest as f64).sqrt() as i64 + 1;
            // |2x + t y| <= s
            let lo = (-s - t * y).div_euclid(2) - 1;
            let hi = (s - t * y).div_euclid(2) + 1;
            for x in lo..=hi {
                let z = QuadInt::new(x, y);
                if self.norm(z) <= n {
                    out.push(z);
                }
            }
        }
        out.sort();
        out
    }

    /// Canonical associate: among `u z` for units `u`, prefer `x > 0, y >= 0`
    /// and take the lexicographically least such pair.
    pub fn normalize_associate(&self, z: QuadInt) -> QuadInt {
        if z.is_zero() {
            return z;
        }
        let assoc: Vec<QuadInt> = self.units().into_iter().map(|u| self.mul(u, z)).collect();
        assoc
            .iter()
            .copied()
            .filter(|a| a.x > 0 && a.y >= 0)
            .min()
            .or_else(|| assoc.iter().copied().max())
            .expect("unit group is non-empty")
    }

    /// Euclidean division with a remainder of strictly smaller norm.
    fn div_round(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        let nb = self.norm(b) as i128;
        let p = self.mul(a, self.conj(b));
        let fx = (p.x as i128).div_euclid(nb) as i64;
        let fy = (p.y as i128).div_euclid(nb) as i64;
        let mut best = QuadInt::new(fx, fy);
        let mut best_norm = i64::MAX;
        for dx in -1..=2 {
            for dy in -1..=2 {
                let q = QuadInt::new(fx + dx, fy + dy);
                let r = a - self.mul(q, b);
                let nr = self.norm(r);
                if nr < best_norm {
                    best_norm = nr;
                    best = q;
                }
            }
        }
        best
    }

    /// Extended gcd: `g = r u + s v` generating `<u, v>`, with `g` normalized.
    pub fn xgcd(&self, u: QuadInt, v: QuadInt) -> Result<(QuadInt, QuadInt, QuadInt)> {
        if !self.euclidean {
            return Err(Error::NonEuclideanField(self.m));
        }
        if v.is_zero() {
            return Ok((u, QuadInt::ONE, QuadInt::ZERO));
        }
        // Invariant: a = ra u + sa v, b = rb u + sb v.
        let (mut a, mut ra, mut sa) = (u, QuadInt::ONE, QuadInt::ZERO);
        let (mut b, mut rb, mut sb) = (v, QuadInt::ZERO, QuadInt::ONE);
        while !b.is_zero() {
            let q = self.div_round(a, b);
            let r = a - self.mul(q, b);
            debug_assert!(self.norm(r) < self.norm(b));
            let rr = ra - self.mul(q, rb);
            let sr = sa - self.mul(q, sb);
            a = b;
            ra = rb;
            sa = sb;
            b = r;
            rb = rr;
            sb = sr;
        }
        let g = self.normalize_associate(a);
        let unit = self.div_exact(g, a).expect("associate");
        Ok((g, self.mul(unit, ra), self.mul(unit, sa)))
    }

    /// Index of the Z-module spanned by `u, wu, v, wv` inside `O_K` (0 if rank < 2).
    pub fn ideal_index(&self, gens: &[QuadInt]) -> i64 {
        let rows: Vec<Vec<i128>> = gens
            .iter()
            .flat_map(|&g| [g, self.mul(QuadInt::OMEGA, g)])
            .map(|z| vec![z.x as i128, z.y as i128])
            .collect();
        let h = hnf(&rows);
        if h.len() < 2 {
            return 0;
        }
        (h[0][0] * h[1][1]) as i64
    }

    pub fn is_coprime_pair(&self, u: QuadInt, v: QuadInt) -> bool {
        self.ideal_index(&[u, v]) == 1
    }

    /// Solve `r u + s v = 1` over `O_K` through an integer linear system.
    pub fn unit_combination(&self, u: QuadInt, v: QuadInt) -> Option<(QuadInt, QuadInt)> {
        let rows: Vec<Vec<i128>> = [u, self.mul(QuadInt::OMEGA, u), v, self.mul(QuadInt::OMEGA, v)]
            .iter()
            .map(|z| vec![z.x as i128, z.y as i128])
            .collect();
        let c = solve_left(&rows, &[1, 0])?;
        Some((
            QuadInt::new(c[0] as i64, c[1] as i64),
            QuadInt::new(c[2] as i64, c[3] as i64),
        ))
    }

    /// Canonical residues `x + y w` with `0 <= x, y < d`.
    pub fn residues(&self, d: i64) -> Vec<QuadInt> {
        (0..d)
            .flat_map(|x| (0..d).map(move |y| QuadInt::new(x, y)))
            .collect()
    }

    pub fn reduce_mod(&self, z: QuadInt, d: i64) -> QuadInt {
        QuadInt::new(z.x.rem_euclid(d), z.y.rem_euclid(d))
    }

    /// Number of ideals of norm `n`, from the character `(d_K / .)`.
    pub fn dedekind_coeff(&self, n: u64) -> u64 {
        let s: i64 = divisors(n)
            .into_iter()
            .map(|k| kronecker(self.discriminant(), k))
            .sum();
        s as u64
    }

    /// Number of ideals of norm `n`, counted as elements of norm `n` per unit.
    pub fn dedekind_coeff_by_elements(&self, n: u64) -> u64 {
        (self.elements_of_norm(n as i64).len() / self.unit_count) as u64
    }

    /// Representative of `b + mu O_K` of least `(N, Tr, x, y)`.
    pub fn coset_min(&self, b: QuadInt, mu: i64) -> QuadInt {
        let base = self.reduce_mod(b, mu);
        let mut best = base;
        let mut best_key = self.coset_key(base);
        let t = self.omega_trace();
        let dprime = 4 * self.omega_norm() - t * t;
        let bound = self.norm(base);
        let ymax = ((4 * bound) as f64 / dprime as f64).sqrt() as i64 + 1;
        for j in (-ymax - base.y).div_euclid(mu) - 1..=(ymax - base.y).div_euclid(mu) + 1 {
            let y = base.y + mu * j;
            let rest = 4 * bound - dprime * y * y;
            if rest < 0 {
                continue;
            }
            let s = (rest as f64).sqrt() as i64 + 2;
            let xlo = (-s - t * y).div_euclid(2) - 1;
            let xhi = (s - t * y).div_euclid(2) + 1;
            let ilo = (xlo - base.x).div_euclid(mu);
            let ihi = (xhi - base.x).div_euclid(mu) + 1;
            for i in ilo..=ihi {
                let z = QuadInt::new(base.x + mu * i, y);
                let key = self.coset_key(z);
                if key < best_key {
                    best_key = key;
                    best = z;
                }
            }
        }
        best
    }

    fn coset_key(&self, z: QuadInt) -> (i64, i64, i64, i64) {
        (self.norm(z), self.trace(z), z.x, z.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(m: i64) -> FieldParams {
        FieldParams::new(m).unwrap()
    }

    #[test]
    fn field_parameters() {
        assert_eq!(fp(1).unit_count, 4);
        assert_eq!(fp(3).unit_count, 6);
        assert_eq!(fp(7).unit_count, 2);
        assert!(fp(11).euclidean);
        assert!(!fp(19).euclidean);
        assert!(FieldParams::new(4).is_err());
        assert!(FieldParams::new(5).is_err());
        for m in [1, 2, 3, 7, 11, 19, 43, 67, 163] {
            assert_eq!(fp(m).units().len(), fp(m).unit_count);
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(fp(1).norm(QuadInt::new(3, 2)), 13);
        assert_eq!(fp(3).norm(QuadInt::OMEGA), 1);
        assert_eq!(fp(7).norm(QuadInt::ZERO), 0);
    }

    #[test]
    fn xgcd_examples() {
        let f = fp(1);
        let one_plus_i = QuadInt::new(1, 1);
        let (g, r, s) = f.xgcd(one_plus_i, QuadInt::int(2)).unwrap();
        assert_eq!(f.norm(g), 2);
        assert!(f.divides(g, one_plus_i) && f.divides(one_plus_i, g));
        assert_eq!(f.mul(r, one_plus_i) + f.mul(s, QuadInt::int(2)), g);

        let u = QuadInt::new(2, 3);
        assert_eq!(f.xgcd(u, QuadInt::ZERO).unwrap(), (u, QuadInt::ONE, QuadInt::ZERO));

        let (g, _, _) = f.xgcd(QuadInt::int(2), QuadInt::int(3)).unwrap();
        assert_eq!(f.norm(g), 1);
        assert_eq!(fp(19).xgcd(QuadInt::ONE, QuadInt::ONE), Err(Error::NonEuclideanField(19)));
    }

    #[test]
    fn coprime_pair_examples() {
        let f = fp(1);
        assert!(f.is_coprime_pair(QuadInt::ONE, QuadInt::new(5, 7)));
        assert!(!f.is_coprime_pair(QuadInt::new(1, 1), QuadInt::new(1, -1)));
        assert!(fp(3).is_coprime_pair(QuadInt::int(2), QuadInt::OMEGA));
    }

    #[test]
    fn residue_examples() {
        let f = fp(1);
        assert_eq!(f.residues(1), vec![QuadInt::ZERO]);
        assert_eq!(f.residues(2).len(), 4);
        let r3 = f.residues(3);
        assert_eq!(r3.len(), 9);
        for (i, a) in r3.iter().enumerate() {
            for b in &r3[i + 1..] {
                let diff = *a - *b;
                assert!(diff.x % 3 != 0 || diff.y % 3 != 0);
            }
        }
    }

    #[test]
    fn dedekind_examples() {
        let f = fp(1);
        assert_eq!(f.dedekind_coeff(1), 1);
        assert_eq!(f.dedekind_coeff(5), 2);
        assert_eq!(f.dedekind_coeff(3), 0);
        assert_eq!(f.dedekind_coeff(25), 3);
    }

    #[test]
    fn dedekind_formulas_agree_up_to_500() {
        for m in [1, 2, 3, 7, 11, 19] {
            let f = fp(m);
            for n in 1..=500 {
                assert_eq!(f.dedekind_coeff(n), f.dedekind_coeff_by_elements(n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn dedekind_is_multiplicative() {
        let f = fp(7);
        for a in 1..40u64 {
            for b in 1..40u64 {
                if num_integer::gcd(a, b) == 1 {
                    assert_eq!(f.dedekind_coeff(a * b), f.dedekind_coeff(a) * f.dedekind_coeff(b));
                }
            }
        }
    }

    #[test]
    fn coprime_iff_unit_combination_small_norms() {
        for m in [1, 3, 7, 11, 19] {
            let f = fp(m);
            let elems = f.elements_up_to_norm(12);
            let units = f.units();
            for &u in &elems {
                for &v in &elems {
                    if u.is_zero() && v.is_zero() {
                        continue;
                    }
                    // Brute force: look for r, s of small norm with r u + s v a unit.
                    let small = f.elements_up_to_norm(25);
                    let brute = small.iter().any(|&r| {
                        small.iter().any(|&s| units.contains(&(f.mul(r, u) + f.mul(s, v))))
                    });
                    assert_eq!(f.is_coprime_pair(u, v), brute, "m={m} u={u:?} v={v:?}");
                }
            }
        }
    }

    #[test]
    fn coset_min_is_minimal() {
        let f = fp(11);
        for mu in 1..6 {
            for b in f.residues(mu) {
                let best = f.coset_min(b, mu);
                let diff = best - b;
                assert!(diff.x % mu == 0 && diff.y % mu == 0);
                for i in -4..=4 {
                    for j in -4..=4 {
                        let z = b + QuadInt::new(mu * i, mu * j);
                        assert!(f.norm(best) <= f.norm(z));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(m in prop::sample::select(vec![1i64, 2, 3, 7, 11, 19, 43]), a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let f = fp(m);
            let u = QuadInt::new(a, b);
            let v = QuadInt::new(c, d);
            prop_assert_eq!(f.norm(f.mul(u, v)), f.norm(u) * f.norm(v));
            prop_assert_eq!(f.conj(f.conj(u)), u);
            prop_assert_eq!(f.mul(u, f.conj(u)), QuadInt::int(f.norm(u)));
            prop_assert_eq!(u + f.conj(u), QuadInt::int(f.trace(u)));
            prop_assert!(f.norm(u) >= 0);
        }

        #[test]
        fn xgcd_generates_the_ideal(m in prop::sample::select(vec![1i64, 2, 3, 7, 11]), a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
            let f = fp(m);
            let u = QuadInt::new(a, b);
            let v = QuadInt::new(c, d);
            prop_assume!(!(u.is_zero() && v.is_zero()));
            let (g, r, s) = f.xgcd(u, v).unwrap();
            prop_assert_eq!(f.mul(r, u) + f.mul(s, v), g);
            let (uq, vq) = (f.div_exact(u, g).unwrap(), f.div_exact(v, g).unwrap());
            prop_assert!(f.is_coprime_pair(uq, vq));
        }
    }
}
