//! The rank-4 quadratic space `(V0, phi0)` attached to `K`, the isometry
//! `f_w` from Hermitian matrices, congruence counts and lattice maximality.

use crate::arith::is_squarefree;
use crate::error::{Error, Result};
use crate::hermitian::{ClassList, HermForm};
use crate::linalg::{box_representatives, inverse, to_rat, Rat};
use crate::quad_field::{FieldParams, OmegaKind, QuadInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramData {
    pub fp: FieldParams,
    /// Even binary matrix with `S[(y, z)] / 2 = N(y + z w)`.
    pub s: [[i64; 2]; 2],
    /// Gram matrix of `2 phi0` on `Z^4`.
    pub s0: [[i64; 4]; 4],
    pub level_q: i64,
}

/// A Hermitian matrix `[[a, b], [conj b, c]]` with rational entries; `b` is
/// given by its coordinates on `{1, w}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatHerm {
    pub a: Rat,
    pub b: (Rat, Rat),
    pub c: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrthVector {
    pub coords: [Rat; 4],
}

impl GramData {
    pub fn new(fp: FieldParams) -> Self {
        let m = fp.m;
        let (s, level_q) = match fp.omega_kind {
            OmegaKind::Root => ([[2, 0], [0, 2 * m]], 4 * m),
            OmegaKind::Half => ([[2, 1], [1, (m + 1) / 2]], m),
        };
        let mut s0 = [[0i64; 4]; 4];
        s0[0][3] = 1;
        s0[3][0] = 1;
        for i in 0..2 {
            for j in 0..2 {
                s0[1 + i][1 + j] = -s[i][j];
            }
        }
        GramData { fp, s, s0, level_q }
    }

    pub fn det_s(&self) -> i64 {
        self.s[0][0] * self.s[1][1] - self.s[0][1] * self.s[1][0]
    }

    /// `phi0[v] = v1 v4 - S[(v2, v3)] / 2`.
    pub fn phi0(&self, v: &OrthVector) -> Rat {
        self.pair(v, v)
    }

    /// `phi0(v, w) = v^T S0 w / 2`.
    pub fn pair(&self, v: &OrthVector, w: &OrthVector) -> Rat {
        let mut s = Rat::zero();
        for i in 0..4 {
            for j in 0..4 {
                if self.s0[i][j] != 0 {
                    s += v.coords[i] * w.coords[j] * Rat::from_integer(self.s0[i][j] as i128);
                }
            }
        }
        s / Rat::from_integer(2)
    }

    /// `f_w([[x, y + w z], [., w]]) = (x, y, z, w)`.
    pub fn f_omega(&self, h: &RatHerm) -> OrthVector {
        OrthVector {
            coords: [h.a, h.b.0, h.b.1, h.c],
        }
    }

    pub fn f_omega_inv(&self, v: &OrthVector) -> RatHerm {
        RatHerm {
            a: v.coords[0],
            b: (v.coords[1], v.coords[2]),
            c: v.coords[3],
        }
    }

    pub fn herm_det(&self, h: &RatHerm) -> Rat {
        let t = Rat::from_integer(self.fp.omega_trace() as i128);
        let n = Rat::from_integer(self.fp.omega_norm() as i128);
        let (x, y) = h.b;
        h.a * h.c - (x * x + t * x * y + n * y * y)
    }

    /// `phi0[v] = ell` and `2 phi0(v, L0) = Z`.
    pub fn in_support(&self, v: &OrthVector, ell: i64) -> bool {
        if self.phi0(v) != Rat::from_integer(ell as i128) {
            return false;
        }
        let pairings: Vec<Rat> = (0..4)
            .map(|j| {
                (0..4).fold(Rat::zero(), |acc, i| {
                    acc + v.coords[i] * Rat::from_integer(self.s0[i][j] as i128)
                })
            })
            .collect();
        rational_ideal_generator(&pairings) == Rat::one()
    }

    /// Per-class counts `n(xi_i; d)` by the defining congruence on
    /// `s in Z^2 / d S Z^2`, classified through `f_w^{-1}`. Entries of
    /// non-support classes stay zero.
    pub fn n_counts_direct(&self, d: i64, classes: &ClassList) -> Vec<u64> {
        let ell = classes.ell;
        let q = self.level_q as i128;
        let big_d = -(ell as i128) * q;
        let s_rat = to_rat(&[
            vec![self.s[0][0] as i128, self.s[0][1] as i128],
            vec![self.s[1][0] as i128, self.s[1][1] as i128],
        ]);
        let s_inv = inverse(&s_rat).expect("S is non-degenerate");
        let d_s: Vec<Vec<i128>> = self
            .s
            .iter()
            .map(|r| r.iter().map(|&x| (d * x) as i128).collect())
            .collect();
        let mut counts = vec![0u64; classes.len()];
        let qd = q * d as i128;
        for s in box_representatives(&d_s) {
            let sr = [Rat::from_integer(s[0]), Rat::from_integer(s[1])];
            let y = s_inv[0][0] * sr[0] + s_inv[0][1] * sr[1];
            let z = s_inv[1][0] * sr[0] + s_inv[1][1] * sr[1];
            let quad = sr[0] * y + sr[1] * z;
            let val = quad * Rat::from_integer(q) / Rat::from_integer(2);
            if !val.is_integer() {
                continue;
            }
            let val = val.to_integer();
            if (val - big_d).rem_euclid(qd) != 0 {
                continue;
            }
            let a = (val - big_d) / qd;
            let v = OrthVector {
                coords: [
                    Rat::from_integer(a),
                    y,
                    z,
                    Rat::from_integer(d as i128),
                ],
            };
            if !self.in_support(&v, ell) {
                continue;
            }
            let h = self.f_omega_inv(&v);
            let Some(form) = self.integral_form(&h) else {
                continue;
            };
            if let Some(i) = classes.classify(&form) {
                counts[i] += 1;
            }
        }
        for (i, c) in counts.iter_mut().enumerate() {
            if !classes.support.contains(&i) {
                *c = 0;
            }
        }
        counts
    }

    /// `n(xi; d)` for a support class, by either path.
    pub fn n_xi_d(&self, xi: &HermForm, d: i64, classes: &ClassList, direct: bool) -> Result<u64> {
        if !xi.in_support() {
            return Err(Error::NotInSupport);
        }
        let i = classes.classify(xi).ok_or(Error::NotInSupport)?;
        let counts = if direct {
            self.n_counts_direct(d, classes)
        } else {
            classes.r_counts(d)
        };
        Ok(counts[i])
    }

    pub fn integral_form(&self, h: &RatHerm) -> Option<HermForm> {
        let ints = [h.a, h.b.0, h.b.1, h.c];
        if ints.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let [a, x, y, c] = ints.map(|r| r.to_integer() as i64);
        HermForm::new(a, QuadInt::new(x, y), c, self.fp).ok()
    }

    pub fn herm_of_form(f: &HermForm) -> RatHerm {
        RatHerm {
            a: Rat::from_integer(f.a as i128),
            b: (Rat::from_integer(f.b.x as i128), Rat::from_integer(f.b.y as i128)),
            c: Rat::from_integer(f.c as i128),
        }
    }
}

/// Positive generator of the fractional ideal spanned by rationals.
fn rational_ideal_generator(xs: &[Rat]) -> Rat {
    let num = xs.iter().fold(0i128, |g, x| g.gcd(x.numer()));
    let den = xs.iter().fold(1i128, |l, x| l.lcm(x.denom()));
    Rat::new(num, den)
}

/// Hypotheses under which the stabiliser comparison is proved.
pub fn stabiliser_conditions(m: i64, ell: i64) -> bool {
    if ell < 1 || !is_squarefree(ell as u64) || ell.gcd(&m) != 1 {
        return false;
    }
    match m.rem_euclid(4) {
        3 => true,
        1 => ell % 4 == 1,
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalityVerdict {
    pub m: i64,
    pub ell: i64,
    pub maximal: bool,
    /// A vector of `M* \ M` with integral `T`-value, when one exists.
    pub witness: Option<[String; 3]>,
    /// `det(2T)/2 = ell m` square-free; reported only for `m = 3 (mod 4)`.
    pub squarefree_shortcut: Option<bool>,
    pub satisfies_conditions: bool,
}

/// Decide whether `Z^3` is maximal for `T = diag(-2 ell, -S) / 2` by scanning
/// `M*/M`.
pub fn check_maximal(ell: i64, g: &GramData) -> MaximalityVerdict {
    let m = g.fp.m;
    let two_t: Vec<Vec<i128>> = vec![
        vec![-2 * ell as i128, 0, 0],
        vec![0, -g.s[0][0] as i128, -g.s[0][1] as i128],
        vec![0, -g.s[1][0] as i128, -g.s[1][1] as i128],
    ];
    let inv = inverse(&to_rat(&two_t)).expect("T is non-degenerate");
    let mut witness = None;
    for y in box_representatives(&two_t) {
        let x: Vec<Rat> = (0..3)
            .map(|i| (0..3).fold(Rat::zero(), |acc, j| acc + inv[i][j] * Rat::from_integer(y[j])))
            .collect();
        if x.iter().all(|c| c.is_integer()) {
            continue;
        }
        let ty = (0..3).fold(Rat::zero(), |acc, j| acc + Rat::from_integer(y[j]) * x[j]) / Rat::from_integer(2);
        if ty.is_integer() {
            witness = Some([x[0].to_string(), x[1].to_string(), x[2].to_string()]);
            break;
        }
    }
    let squarefree_shortcut = (m % 4 == 3).then(|| is_squarefree((ell * g.det_s()) as u64));
    MaximalityVerdict {
        m,
        ell,
        maximal: witness.is_none(),
        witness,
        squarefree_shortcut,
        satisfies_conditions: stabiliser_conditions(m, ell),
    }
}
