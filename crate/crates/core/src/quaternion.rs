//! The definite quaternion algebra `B = K + eK` with `e^2 = -ell` and
//! `e a = conj(a) e`, its order `o = O_K + e O_K`, and rank-4 lattices in `B`.
//!
//! Coordinates are taken on the Z-basis `{1, w, e, w e}` of `o`, so that
//! `(x0, x1, y0, y1)` stands for `(x0 + x1 w) + (y0 + y1 w) e`.

use crate::enumerate::{lll, vectors_of_value};
use crate::error::{Error, Result};
use crate::hermitian::{ClassList, HermForm};
use crate::linalg::{clear_denominators, det_int, hnf, inverse, solve_left, transpose, Rat};
use crate::quad_field::{FieldParams, QuadInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

pub type Coords = [i128; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuatAlg {
    #[serde(skip)]
    pub fp: FieldParams,
    pub ell: i64,
}

/// A rational element of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuatElem {
    pub alg: QuatAlg,
    pub c: [Rat; 4],
}

/// A full-rank lattice: the rows of `basis` divided by `den`, in Hermite form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuatLattice {
    pub den: i128,
    pub basis: [[i128; 4]; 4],
}

impl QuatAlg {
    pub fn new(fp: FieldParams, ell: i64) -> Self {
        QuatAlg { fp, ell }
    }

    fn tn(&self) -> (i128, i128) {
        (self.fp.omega_trace() as i128, self.fp.omega_norm() as i128)
    }

    pub fn mul_int(&self, a: &Coords, b: &Coords) -> Coords {
        let (t, n) = self.tn();
        let l = self.ell as i128;
        let kmul = |p: (i128, i128), q: (i128, i128)| (p.0 * q.0 - n * p.1 * q.1, p.0 * q.1 + p.1 * q.0 + t * p.1 * q.1);
        let kconj = |p: (i128, i128)| (p.0 + t * p.1, -p.1);
        let (x1, y1) = ((a[0], a[1]), (a[2], a[3]));
        let (x2, y2) = ((b[0], b[1]), (b[2], b[3]));
        let xx = kmul(x1, x2);
        let yy = kmul(y1, kconj(y2));
        let xy = kmul(x1, y2);
        let yx = kmul(y1, kconj(x2));
        [xx.0 - l * yy.0, xx.1 - l * yy.1, xy.0 + yx.0, xy.1 + yx.1]
    }

    pub fn conj_int(&self, a: &Coords) -> Coords {
        let (t, _) = self.tn();
        [a[0] + t * a[1], -a[1], -a[2], -a[3]]
    }

    pub fn nrd_int(&self, a: &Coords) -> i128 {
        let (t, n) = self.tn();
        let nk = |x: i128, y: i128| x * x + t * x * y + n * y * y;
        nk(a[0], a[1]) + self.ell as i128 * nk(a[2], a[3])
    }

    pub fn trd_int(&self, a: &Coords) -> i128 {
        let (t, _) = self.tn();
        2 * a[0] + t * a[1]
    }

    pub fn elem(&self, c: [Rat; 4]) -> QuatElem {
        QuatElem { alg: *self, c }
    }

    pub fn elem_int(&self, c: Coords) -> QuatElem {
        self.elem(c.map(Rat::from_integer))
    }

    pub fn one(&self) -> QuatElem {
        self.elem_int([1, 0, 0, 0])
    }

    pub fn epsilon(&self) -> QuatElem {
        self.elem_int([0, 0, 1, 0])
    }

    pub fn omega(&self) -> QuatElem {
        self.elem_int([0, 1, 0, 0])
    }

    pub fn from_k(&self, z: QuadInt) -> Coords {
        [z.x as i128, z.y as i128, 0, 0]
    }

    /// The order `o` itself.
    pub fn maximal_base(&self) -> QuatLattice {
        QuatLattice::identity()
    }

    /// Left ideal `[a, b + e] = O_K a + O_K (b + e)` of a form `[[a, b], [., c]]`.
    pub fn latimer_ideal(&self, f: &HermForm) -> QuatLattice {
        let a = f.a as i128;
        let be: Coords = [f.b.x as i128, f.b.y as i128, 1, 0];
        let w = self.from_k(QuadInt::OMEGA);
        let gens = vec![[a, 0, 0, 0], [0, a, 0, 0], be, self.mul_int(&w, &be)];
        QuatLattice::from_gens(1, &gens)
    }
}

impl QuatElem {
    fn check(&self, o: &QuatElem) -> Result<()> {
        if self.alg != o.alg {
            return Err(Error::ParameterMismatch);
        }
        Ok(())
    }

    fn split(&self) -> (i128, Coords) {
        let den = self.c.iter().fold(1i128, |l, x| l.lcm(x.denom()));
        (den, self.c.map(|x| (x * Rat::from_integer(den)).to_integer()))
    }

    pub fn mul(&self, o: &QuatElem) -> Result<QuatElem> {
        self.check(o)?;
        let (d1, a) = self.split();
        let (d2, b) = o.split();
        let p = self.alg.mul_int(&a, &b);
        Ok(self.alg.elem(p.map(|x| Rat::new(x, d1 * d2))))
    }

    pub fn add(&self, o: &QuatElem) -> Result<QuatElem> {
        self.check(o)?;
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x += y;
        }
        Ok(self.alg.elem(c))
    }

    pub fn conj(&self) -> QuatElem {
        let (d, a) = self.split();
        self.alg.elem(self.alg.conj_int(&a).map(|x| Rat::new(x, d)))
    }

    pub fn nrd(&self) -> Rat {
        let (d, a) = self.split();
        Rat::new(self.alg.nrd_int(&a), d * d)
    }

    pub fn trd(&self) -> Rat {
        let (d, a) = self.split();
        Rat::new(self.alg.trd_int(&a), d)
    }

    pub fn scale(&self, r: Rat) -> QuatElem {
        self.alg.elem(self.c.map(|x| x * r))
    }

    pub fn inverse(&self) -> Option<QuatElem> {
        let n = self.nrd();
        (!n.is_zero()).then(|| self.conj().scale(n.recip()))
    }
}

impl QuatLattice {
    pub fn identity() -> Self {
        let mut basis = [[0i128; 4]; 4];
        for (i, row) in basis.iter_mut().enumerate() {
            row[i] = 1;
        }
        QuatLattice { den: 1, basis }
    }

    /// Lattice spanned by `gens / den`; panics on rank deficiency.
    pub fn from_gens(den: i128, gens: &[Coords]) -> Self {
        Self::try_from_gens(den, gens).expect("generators span a full-rank lattice")
    }

    pub fn try_from_gens(den: i128, gens: &[Coords]) -> Option<Self> {
        let rows: Vec<Vec<i128>> = gens.iter().map(|g| g.to_vec()).collect();
        let h = hnf(&rows);
        if h.len() != 4 {
            return None;
        }
        let g = h.iter().flatten().fold(den, |g, x| g.gcd(x));
        let mut basis = [[0i128; 4]; 4];
        for (i, row) in h.iter().enumerate() {
            for j in 0..4 {
                basis[i][j] = row[j] / g;
            }
        }
        Some(QuatLattice { den: den / g, basis })
    }

    pub fn from_rational_rows(rows: &[Vec<Rat>]) -> Self {
        let (den, ints) = clear_denominators(rows);
        let gens: Vec<Coords> = ints.iter().map(|r| [r[0], r[1], r[2], r[3]]).collect();
        Self::from_gens(den, &gens)
    }

    pub fn rows(&self) -> Vec<Coords> {
        self.basis.to_vec()
    }

    pub fn rational_rows(&self) -> Vec<Vec<Rat>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|&x| Rat::new(x, self.den)).collect())
            .collect()
    }

    pub fn elements(&self, alg: &QuatAlg) -> Vec<QuatElem> {
        self.rational_rows()
            .into_iter()
            .map(|r| alg.elem([r[0], r[1], r[2], r[3]]))
            .collect()
    }

    pub fn contains(&self, x: &QuatElem) -> bool {
        let (d, a) = x.split();
        // a / d in L  <=>  a * den / d in Z-span of basis.
        let scaled: Vec<Rat> = a.iter().map(|&v| Rat::new(v * self.den, d)).collect();
        if scaled.iter().any(|v| !v.is_integer()) {
            return false;
        }
        let target: Vec<i128> = scaled.iter().map(|v| v.to_integer()).collect();
        let rows: Vec<Vec<i128>> = self.basis.iter().map(|r| r.to_vec()).collect();
        solve_left(&rows, &target).is_some()
    }

    pub fn contains_lattice(&self, other: &QuatLattice, alg: &QuatAlg) -> bool {
        other.elements(alg).iter().all(|e| self.contains(e))
    }

    pub fn mul(&self, other: &QuatLattice, alg: &QuatAlg) -> QuatLattice {
        let mut gens = Vec::with_capacity(16);
        for a in &self.basis {
            for b in &other.basis {
                gens.push(alg.mul_int(a, b));
            }
        }
        QuatLattice::from_gens(self.den * other.den, &gens)
    }

    /// `x L` for an element `x`.
    pub fn left_mul(&self, x: &QuatElem, alg: &QuatAlg) -> QuatLattice {
        let (d, a) = x.split();
        let gens: Vec<Coords> = self.basis.iter().map(|b| alg.mul_int(&a, b)).collect();
        QuatLattice::from_gens(d * self.den, &gens)
    }

    pub fn right_mul(&self, x: &QuatElem, alg: &QuatAlg) -> QuatLattice {
        let (d, a) = x.split();
        let gens: Vec<Coords> = self.basis.iter().map(|b| alg.mul_int(b, &a)).collect();
        QuatLattice::from_gens(d * self.den, &gens)
    }

    pub fn conj(&self, alg: &QuatAlg) -> QuatLattice {
        let gens: Vec<Coords> = self.basis.iter().map(|b| alg.conj_int(b)).collect();
        QuatLattice::from_gens(self.den, &gens)
    }

    pub fn scale(&self, r: Rat) -> QuatLattice {
        let gens: Vec<Coords> = self.basis.iter().map(|b| b.map(|x| x * r.numer())).collect();
        QuatLattice::from_gens(self.den * r.denom(), &gens)
    }

    /// `[o : L]` as a rational number (covolume ratio).
    pub fn covolume(&self) -> Rat {
        let rows: Vec<Vec<i128>> = self.basis.iter().map(|r| r.to_vec()).collect();
        Rat::new(det_int(&rows).abs(), self.den.pow(4))
    }

    /// `#(o / L)` for `L` inside `o`.
    pub fn module_index(&self, alg: &QuatAlg) -> Result<i128> {
        if !QuatLattice::identity().contains_lattice(self, alg) {
            return Err(Error::NotSubLattice);
        }
        Ok(self.covolume().to_integer())
    }

    /// Hessian of `2 nrd` on the numerators of the basis.
    pub fn gram(&self, alg: &QuatAlg) -> Vec<Vec<i128>> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| alg.trd_int(&alg.mul_int(&self.basis[i], &alg.conj_int(&self.basis[j]))))
                    .collect()
            })
            .collect()
    }

    /// Reduced norm: the positive generator of the Z-module spanned by
    /// `nrd(x)` for `x` in the lattice.
    pub fn nrd(&self, alg: &QuatAlg) -> Rat {
        let g = self.gram(alg);
        let mut acc = 0i128;
        for i in 0..4 {
            acc = acc.gcd(&(g[i][i] / 2));
            for j in i + 1..4 {
                acc = acc.gcd(&g[i][j]);
            }
        }
        Rat::new(acc, self.den * self.den)
    }

    /// All elements with reduced norm `target`.
    pub fn elements_of_nrd(&self, alg: &QuatAlg, target: Rat) -> Vec<QuatElem> {
        let scaled = target * Rat::from_integer(2 * self.den * self.den);
        if !scaled.is_integer() || target.is_negative() {
            return Vec::new();
        }
        let g = self.gram(alg);
        let mut out: Vec<QuatElem> = vectors_of_value(&g, scaled.to_integer())
            .into_iter()
            .map(|x| self.combine(alg, &x))
            .collect();
        out.sort_by(|a, b| a.c.cmp(&b.c));
        out
    }

    /// Number of elements of reduced norm at most `bound`, for each bound.
    pub fn theta_counts(&self, alg: &QuatAlg, bounds: &[i128]) -> Vec<usize> {
        let g = self.gram(alg);
        let max = *bounds.iter().max().unwrap_or(&0);
        let scale = 2 * self.den * self.den;
        let all = crate::enumerate::short_vectors(&g, max * scale);
        let values: Vec<i128> = all.iter().map(|x| crate::enumerate::quad_value(&g, x)).collect();
        bounds
            .iter()
            .map(|&b| values.iter().filter(|&&v| v <= b * scale).count())
            .collect()
    }

    fn combine(&self, alg: &QuatAlg, x: &[i128]) -> QuatElem {
        let mut c = [Rat::zero(); 4];
        for (xi, row) in x.iter().zip(&self.basis) {
            for k in 0..4 {
                c[k] += Rat::new(xi * row[k], self.den);
            }
        }
        alg.elem(c)
    }

    /// `{x : x I <= J}` when `left`, otherwise `{x : I x <= J}`.
    pub fn colon(j: &QuatLattice, i: &QuatLattice, alg: &QuatAlg, left: bool) -> QuatLattice {
        let rj_inv = inverse(&j.rational_rows()).expect("full rank");
        let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(16);
        let units: Vec<Coords> = (0..4)
            .map(|k| {
                let mut e = [0i128; 4];
                e[k] = 1;
                e
            })
            .collect();
        for b in &i.basis {
            // Row k: coordinates of e_k b (or b e_k) over o.
            let lb: Vec<Vec<Rat>> = units
                .iter()
                .map(|e| {
                    let p = if left { alg.mul_int(e, b) } else { alg.mul_int(b, e) };
                    p.iter().map(|&x| Rat::new(x, i.den)).collect()
                })
                .collect();
            let m = crate::linalg::mat_mul_rat(&lb, &rj_inv);
            columns.extend(transpose(&m));
        }
        let (d, ints) = clear_denominators(&columns);
        let bm = hnf(&ints);
        assert_eq!(bm.len(), 4, "colon lattice has full rank");
        let bm_rat: Vec<Vec<Rat>> = bm
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(x)).collect())
            .collect();
        let inv = inverse(&bm_rat).expect("full rank");
        let dual: Vec<Vec<Rat>> = transpose(&inv)
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * Rat::from_integer(d)).collect())
            .collect();
        QuatLattice::from_rational_rows(&dual)
    }

    pub fn left_order(&self, alg: &QuatAlg) -> QuatLattice {
        QuatLattice::colon(self, self, alg, true)
    }

    pub fn right_order(&self, alg: &QuatAlg) -> QuatLattice {
        QuatLattice::colon(self, self, alg, false)
    }

    /// `I' = conj(I) / nrd(I)` satisfies `I I' = O_L(I)` and `I' I = O_R(I)`.
    pub fn invertibility(&self, alg: &QuatAlg) -> InvertibilityCertificate {
        let n = self.nrd(alg);
        let inv = self.conj(alg).scale(n.recip());
        let left = self.left_order(alg);
        let right = self.right_order(alg);
        let prod_left = self.mul(&inv, alg);
        let prod_right = inv.mul(self, alg);
        InvertibilityCertificate {
            invertible: prod_left == left && prod_right == right,
            inverse: inv,
            left_order: left,
            right_order: right,
            left_product: prod_left,
            right_product: prod_right,
        }
    }

    pub fn is_invertible(&self, alg: &QuatAlg) -> bool {
        self.invertibility(alg).invertible
    }

    /// An element `a` with `a O_R(I) = I`, chosen as the least such element
    /// in coordinate order.
    pub fn principal_generator(&self, alg: &QuatAlg) -> Option<QuatElem> {
        let right = self.right_order(alg);
        let n = self.nrd(alg);
        self.elements_of_nrd(alg, n)
            .into_iter()
            .find(|a| right.left_mul(a, alg) == *self)
    }

    /// Latimer norm: the determinant of the coefficient matrix of a proper
    /// `O_K`-basis of a left ideal.
    pub fn latimer_norm(&self, alg: &QuatAlg) -> Result<Rat> {
        let fp = alg.fp;
        // Reorder columns to (y0, y1, x0, x1) so the echelon form separates the
        // projection to the e-part from the kernel.
        let rows: Vec<Vec<i128>> = self
            .basis
            .iter()
            .map(|r| vec![r[2], r[3], r[0], r[1]])
            .collect();
        let h = hnf(&rows);
        let proj: Vec<[i128; 2]> = h[..2].iter().map(|r| [r[0], r[1]]).collect();
        let kern: Vec<[i128; 2]> = h[2..].iter().map(|r| [r[2], r[3]]).collect();
        if h[2][0] != 0 || h[2][1] != 0 || h[3][0] != 0 || h[3][1] != 0 {
            return Err(Error::NoProperBasis);
        }
        let ga = ideal_generator(&fp, &kern).ok_or(Error::NoProperBasis)?;
        let gb = ideal_generator(&fp, &proj).ok_or(Error::NoProperBasis)?;
        // N = ga * gb as a K-element with common denominator den^2.
        let prod = fp.mul(ga, gb);
        for u in fp.units() {
            let z = fp.mul(u, prod);
            if z.y == 0 && z.x > 0 {
                return Ok(Rat::new(z.x as i128, self.den * self.den));
            }
        }
        Err(Error::NoProperBasis)
    }
}

/// Generator (numerator) of a rank-2 Z-submodule of `O_K` given by a basis,
/// provided the module is an `O_K`-ideal.
fn ideal_generator(fp: &FieldParams, basis: &[[i128; 2]]) -> Option<QuadInt> {
    let zs: Vec<QuadInt> = basis.iter().map(|b| QuadInt::new(b[0] as i64, b[1] as i64)).collect();
    let index = fp.ideal_index(&zs) as i128;
    let rows: Vec<Vec<i128>> = basis.iter().map(|b| b.to_vec()).collect();
    let h = crate::enumerate::hessian(2, |x| {
        let z = QuadInt::new(
            (x[0] * rows[0][0] + x[1] * rows[1][0]) as i64,
            (x[0] * rows[0][1] + x[1] * rows[1][1]) as i64,
        );
        fp.norm(z) as i128
    });
    let lattice_index = (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]).abs();
    if lattice_index != index {
        return None;
    }
    vectors_of_value(&h, 2 * index).into_iter().next().map(|x| {
        QuadInt::new(
            (x[0] * rows[0][0] + x[1] * rows[1][0]) as i64,
            (x[0] * rows[0][1] + x[1] * rows[1][1]) as i64,
        )
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibilityCertificate {
    pub invertible: bool,
    pub inverse: QuatLattice,
    pub left_order: QuatLattice,
    pub right_order: QuatLattice,
    pub left_product: QuatLattice,
    pub right_product: QuatLattice,
}

/// An element `a` with `a I = J`, searched among `(J : I)` by reduced norm.
pub fn same_class(i: &QuatLattice, j: &QuatLattice, alg: &QuatAlg) -> Result<Option<QuatElem>> {
    if i.right_order(alg) != j.right_order(alg) {
        return Err(Error::IncompatibleOrders);
    }
    Ok(class_transport(i, j, alg))
}

/// The search behind [`same_class`], without the right-order check.
pub fn class_transport(i: &QuatLattice, j: &QuatLattice, alg: &QuatAlg) -> Option<QuatElem> {
    let target = j.nrd(alg) / i.nrd(alg);
    if i.covolume() * target * target != j.covolume() {
        return None;
    }
    let colon = QuatLattice::colon(j, i, alg, true);
    colon
        .elements_of_nrd(alg, target)
        .into_iter()
        .find(|a| i.left_mul(a, alg) == *j)
}

/// Unit group order of an order.
pub fn unit_count(order: &QuatLattice, alg: &QuatAlg) -> usize {
    order.elements_of_nrd(alg, Rat::one()).len()
}

/// Structure constants `v_i v_j = sum_k c_ijk v_k` of a lattice basis closed
/// under multiplication.
fn structure_constants(order: &QuatLattice, alg: &QuatAlg) -> Option<Vec<Vec<Vec<i128>>>> {
    let rows: Vec<Vec<i128>> = order.basis.iter().map(|r| r.to_vec()).collect();
    let mut out = vec![vec![Vec::new(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let p = alg.mul_int(&order.basis[i], &order.basis[j]);
            // p / den^2 = sum c_k basis_k / den  =>  p = den * sum c_k basis_k
            if p.iter().any(|x| x % order.den != 0) {
                return None;
            }
            let target: Vec<i128> = p.iter().map(|x| x / order.den).collect();
            out[i][j] = solve_left(&rows, &target)?;
        }
    }
    Some(out)
}

/// Whether two orders are conjugate in `B`, by searching for a ring
/// isomorphism (every such map is inner by Skolem-Noether).
pub fn same_type(o1: &QuatLattice, o2: &QuatLattice, alg: &QuatAlg) -> bool {
    if o1.covolume() != o2.covolume() {
        return false;
    }
    let bounds = [1, 2, 3, 4, 5, 6];
    if o1.theta_counts(alg, &bounds) != o2.theta_counts(alg, &bounds) {
        return false;
    }
    // Reduced basis of o1 as rational elements.
    let u = lll(&o1.gram(alg));
    let reduced: Vec<Coords> = u
        .iter()
        .map(|row| {
            let mut c = [0i128; 4];
            for (k, &x) in row.iter().enumerate() {
                for t in 0..4 {
                    c[t] += x * o1.basis[k][t];
                }
            }
            c
        })
        .collect();
    let r1 = QuatLattice {
        den: o1.den,
        basis: [reduced[0], reduced[1], reduced[2], reduced[3]],
    };
    let consts = structure_constants(&r1, alg).expect("orders are closed under multiplication");
    let v: Vec<QuatElem> = r1.elements(alg);
    let candidates: Vec<Vec<QuatElem>> = v
        .iter()
        .map(|x| {
            o2.elements_of_nrd(alg, x.nrd())
                .into_iter()
                .filter(|w| w.trd() == x.trd())
                .collect()
        })
        .collect();
    let pair = |a: &QuatElem, b: &QuatElem| -> (Rat, Rat) {
        (
            a.mul(&b.conj()).expect("same algebra").trd(),
            a.mul(b).expect("same algebra").trd(),
        )
    };
    let target_pairs: Vec<Vec<(Rat, Rat)>> = v
        .iter()
        .map(|a| v.iter().map(|b| pair(a, b)).collect())
        .collect();
    let mut chosen: Vec<QuatElem> = Vec::with_capacity(4);
    search_iso(0, &candidates, &target_pairs, &pair, &mut chosen, &consts, o2, alg)
}

#[allow(clippy::too_many_arguments)]
fn search_iso(
    depth: usize,
    candidates: &[Vec<QuatElem>],
    target: &[Vec<(Rat, Rat)>],
    pair: &dyn Fn(&QuatElem, &QuatElem) -> (Rat, Rat),
    chosen: &mut Vec<QuatElem>,
    consts: &[Vec<Vec<i128>>],
    o2: &QuatLattice,
    alg: &QuatAlg,
) -> bool {
    if depth == 4 {
        return is_ring_isomorphism(chosen, consts, o2);
    }
    for w in &candidates[depth] {
        if (0..depth).all(|k| pair(&chosen[k], w) == target[k][depth] && pair(w, &chosen[k]) == target[depth][k]) {
            chosen.push(*w);
            if search_iso(depth + 1, candidates, target, pair, chosen, consts, o2, alg) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn is_ring_isomorphism(w: &[QuatElem], consts: &[Vec<Vec<i128>>], o2: &QuatLattice) -> bool {
    let rows: Vec<Vec<Rat>> = w.iter().map(|e| e.c.to_vec()).collect();
    let (den, ints) = clear_denominators(&rows);
    let gens: Vec<Coords> = ints.iter().map(|r| [r[0], r[1], r[2], r[3]]).collect();
    match QuatLattice::try_from_gens(den, &gens) {
        Some(l) if l == *o2 => {}
        _ => return false,
    }
    for i in 0..4 {
        for j in 0..4 {
            let lhs = w[i].mul(&w[j]).expect("same algebra");
            let mut rhs = [Rat::zero(); 4];
            for (k, &c) in consts[i][j].iter().enumerate() {
                for t in 0..4 {
                    rhs[t] += w[k].c[t] * Rat::from_integer(c);
                }
            }
            if lhs.c != rhs {
                return false;
            }
        }
    }
    true
}

/// A right ideal of given norm with its class and the class of the
/// Hermitian form it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormIdeal {
    pub ideal: QuatLattice,
    pub class: Option<usize>,
    pub form_class: Option<usize>,
}

/// Right ideal classes of `o` from the support Hermitian classes, with the
/// type map `rho`.
#[derive(Debug, Clone)]
pub struct ClassTypeData {
    pub alg: QuatAlg,
    /// Right ideals `conj([a_i, b_i + e])`, aligned with the support classes.
    pub ideal_class_reps: Vec<QuatLattice>,
    /// Indices into the Hermitian class list of each ideal class.
    pub hermitian_index: Vec<usize>,
    pub norms: Vec<Rat>,
    pub left_orders: Vec<QuatLattice>,
    pub type_reps: Vec<QuatLattice>,
    pub rho_map: Vec<usize>,
    /// `#O_L(I_i)^x`.
    pub unit_orders: Vec<usize>,
    pub bad_primes: Vec<u64>,
}

impl ClassTypeData {
    pub fn build(classes: &ClassList, bad_primes: &[u64]) -> Self {
        let alg = QuatAlg::new(classes.fp, classes.ell);
        let hermitian_index = classes.support.clone();
        let ideal_class_reps: Vec<QuatLattice> = hermitian_index
            .iter()
            .map(|&i| alg.latimer_ideal(&classes.all_reps[i]).conj(&alg))
            .collect();
        let norms: Vec<Rat> = ideal_class_reps.iter().map(|l| l.nrd(&alg)).collect();
        let left_orders: Vec<QuatLattice> = ideal_class_reps.par_iter().map(|l| l.left_order(&alg)).collect();
        let unit_orders = left_orders.par_iter().map(|o| unit_count(o, &alg)).collect();
        let mut type_reps: Vec<QuatLattice> = Vec::new();
        let mut rho_map = Vec::new();
        for o in &left_orders {
            let t = type_reps.iter().position(|r| same_type(r, o, &alg));
            match t {
                Some(t) => rho_map.push(t),
                None => {
                    rho_map.push(type_reps.len());
                    type_reps.push(o.clone());
                }
            }
        }
        ClassTypeData {
            alg,
            ideal_class_reps,
            hermitian_index,
            norms,
            left_orders,
            type_reps,
            rho_map,
            unit_orders,
            bad_primes: bad_primes.to_vec(),
        }
    }

    pub fn h1(&self) -> usize {
        self.ideal_class_reps.len()
    }

    pub fn h2(&self) -> usize {
        self.type_reps.len()
    }

    /// Index of the class of a right `o`-ideal, trying `hint` first.
    pub fn classify(&self, ideal: &QuatLattice, hint: Option<usize>) -> Option<usize> {
        let order = hint
            .into_iter()
            .chain((0..self.h1()).filter(move |&i| Some(i) != hint));
        for i in order {
            if class_transport(&self.ideal_class_reps[i], ideal, &self.alg).is_some() {
                return Some(i);
            }
        }
        None
    }

    fn check_norm(&self, d: u64) -> Result<()> {
        if self.bad_primes.iter().any(|&p| d % p == 0) {
            return Err(Error::BadNorm(d));
        }
        Ok(())
    }

    /// All right `o`-ideals of reduced norm `d`, each with its class.
    pub fn ideals_of_norm(&self, d: u64, classes: &ClassList) -> Result<Vec<(QuatLattice, usize)>> {
        Ok(self
            .ideals_of_norm_detailed(d, classes)?
            .into_iter()
            .map(|n| (n.ideal, n.class.expect("every good ideal lies in a support class")))
            .collect())
    }

    /// As [`Self::ideals_of_norm`], keeping the class predicted by the
    /// Hermitian form behind each ideal next to the class actually found.
    pub fn ideals_of_norm_detailed(&self, d: u64, classes: &ClassList) -> Result<Vec<NormIdeal>> {
        self.check_norm(d)?;
        let alg = self.alg;
        let fp = alg.fp;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in crate::arith::divisors(d) {
            let dp = (d / e) as i64;
            let alphas = fp.elements_of_norm(e as i64);
            for h in fp.residues(dp) {
                let n = fp.norm(h) + alg.ell;
                if n % dp != 0 {
                    continue;
                }
                let f = HermForm::new(dp, h, n / dp, fp).expect("positive definite");
                let base = alg.latimer_ideal(&f).conj(&alg);
                let hint_herm = classes.classify(&f).expect("complete class list");
                let hint = self.hermitian_index.iter().position(|&k| k == hint_herm);
                for &a in &alphas {
                    let ideal = base.left_mul(&alg.elem_int(alg.from_k(a)), &alg);
                    if seen.insert(ideal.clone()) {
                        out.push((ideal, hint));
                    }
                }
            }
        }
        Ok(out
            .into_par_iter()
            .map(|(ideal, hint)| {
                let class = self.classify(&ideal, hint);
                NormIdeal {
                    ideal,
                    class,
                    form_class: hint,
                }
            })
            .collect())
    }

    /// Brandt matrix: `B[i][j] = #{a in (I_i : I_j) : nrd a = d n_i / n_j} / e_j`.
    pub fn brandt(&self, d: u64) -> Result<Vec<Vec<Rat>>> {
        self.check_norm(d)?;
        let h = self.h1();
        let alg = &self.alg;
        let rows: Vec<Vec<Rat>> = (0..h)
            .into_par_iter()
            .map(|i| {
                (0..h)
                    .map(|j| {
                        let ii = &self.ideal_class_reps[i];
                        let ij = &self.ideal_class_reps[j];
                        let colon = QuatLattice::colon(ii, ij, alg, true);
                        let target = Rat::from_integer(d as i128) * self.norms[i] / self.norms[j];
                        let n = colon.elements_of_nrd(alg, target).len();
                        Rat::new(n as i128, self.unit_orders[j] as i128)
                    })
                    .collect()
            })
            .collect();
        Ok(rows)
    }
}

/// Every sublattice `J` of `lat` of index `index` with `J o <= J`, by
/// enumerating Hermite forms in the coordinates of `lat`.
pub fn right_subideals_by_index(lat: &QuatLattice, index: u64, alg: &QuatAlg) -> Vec<QuatLattice> {
    let mut out = Vec::new();
    let units: Vec<QuatElem> = QuatLattice::identity().elements(alg);
    for diag in diagonal_factorizations(index) {
        let mut ranges: Vec<(usize, usize, i128)> = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                ranges.push((i, j, diag[j] as i128));
            }
        }
        let total: i128 = ranges.iter().map(|r| r.2).product();
        for code in 0..total {
            let mut c = code;
            let mut h = [[0i128; 4]; 4];
            for (i, d) in diag.iter().enumerate() {
                h[i][i] = *d as i128;
            }
            for &(i, j, r) in &ranges {
                h[i][j] = c % r;
                c /= r;
            }
            let gens: Vec<Coords> = h
                .iter()
                .map(|row| {
                    let mut v = [0i128; 4];
                    for (k, &x) in row.iter().enumerate() {
                        for t in 0..4 {
                            v[t] += x * lat.basis[k][t];
                        }
                    }
                    v
                })
                .collect();
            let sub = QuatLattice::from_gens(lat.den, &gens);
            let closed = sub
                .elements(alg)
                .iter()
                .all(|b| units.iter().all(|e| sub.contains(&b.mul(e).expect("same algebra"))));
            if closed {
                out.push(sub);
            }
        }
    }
    out
}

fn diagonal_factorizations(n: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for a in crate::arith::divisors(n) {
        for b in crate::arith::divisors(n / a) {
            for c in crate::arith::divisors(n / a / b) {
                out.push([a, b, c, n / a / b / c]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn alg(m: i64, ell: i64) -> QuatAlg {
        QuatAlg::new(FieldParams::new(m).unwrap(), ell)
    }

    fn r(n: i128) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn multiplication_rules() {
        let a = alg(1, 1);
        let e = a.epsilon();
        let w = a.omega();
        let wbar = a.elem_int(a.from_k(a.fp.conj(QuadInt::OMEGA)));
        assert_eq!(e.mul(&w).unwrap(), wbar.mul(&e).unwrap());
        assert_eq!(e.mul(&e).unwrap(), a.one().scale(r(-1)));
        assert_eq!(a.one().add(&e).unwrap().nrd(), r(2));
        let a7 = alg(7, 3);
        assert_eq!(a7.epsilon().mul(&a7.epsilon()).unwrap(), a7.one().scale(r(-3)));
        assert_eq!(a.one().mul(&alg(1, 5).one()), Err(Error::ParameterMismatch));
    }

    #[test]
    fn conjugation_rules() {
        let a = alg(1, 1);
        assert_eq!(a.one().conj(), a.one());
        assert_eq!(a.epsilon().conj(), a.epsilon().scale(r(-1)));
        let x = a.omega().add(&a.epsilon()).unwrap();
        assert_eq!(x.conj(), x.scale(r(-1)));
        assert_eq!(x.nrd(), r(2));
    }

    #[test]
    fn orders_of_the_base_order() {
        let a = alg(3, 2);
        let o = QuatLattice::identity();
        assert_eq!(o.left_order(&a), o);
        assert_eq!(o.right_order(&a), o);
        let x = a.elem_int([1, 1, 1, 0]);
        let principal = o.left_mul(&x, &a);
        assert_eq!(principal.right_order(&a), o);
        // Left order is x o x^{-1}.
        let conj_order = principal.right_mul(&x.inverse().unwrap(), &a);
        assert_eq!(principal.left_order(&a), conj_order);
    }

    #[test]
    fn latimer_ideals_and_norms() {
        let a = alg(1, 1);
        let f = HermForm::diag(1, a.fp);
        assert_eq!(a.latimer_ideal(&f), QuatLattice::identity());
        assert_eq!(QuatLattice::identity().latimer_norm(&a), Ok(r(1)));
        let a5 = alg(1, 5);
        let g = HermForm::new(2, QuadInt::new(1, 0), 3, a5.fp).unwrap();
        let l = a5.latimer_ideal(&g);
        assert_eq!(l.latimer_norm(&a5), Ok(r(2)));
        assert_eq!(l.module_index(&a5), Ok(4));
        assert_eq!(l.left_order(&a5), QuatLattice::identity());
        let x = a5.elem_int([1, 2, 1, 0]);
        let p = QuatLattice::identity().right_mul(&x, &a5);
        assert_eq!(p.latimer_norm(&a5), Ok(x.nrd()));
    }

    #[test]
    fn module_index_examples() {
        let a = alg(1, 1);
        assert_eq!(QuatLattice::identity().module_index(&a), Ok(1));
        assert_eq!(QuatLattice::identity().scale(r(2)).module_index(&a), Ok(16));
        assert_eq!(
            QuatLattice::identity().scale(Rat::new(1, 2)).module_index(&a),
            Err(Error::NotSubLattice)
        );
    }

    #[test]
    fn invertibility_examples() {
        let a = alg(1, 1);
        assert!(QuatLattice::identity().is_invertible(&a));
        // The dual of the order Z + 2o is a lattice whose multiplier rings
        // fail to invert it.
        let gens: Vec<Coords> = vec![[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]];
        let small = QuatLattice::from_gens(1, &gens);
        let dual = trace_dual(&small, &a);
        assert!(!dual.is_invertible(&a));
    }

    fn trace_dual(l: &QuatLattice, a: &QuatAlg) -> QuatLattice {
        let g: Vec<Vec<Rat>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| Rat::from_integer(a.trd_int(&a.mul_int(&l.basis[i], &l.basis[j]))) / Rat::from_integer(l.den * l.den))
                    .collect()
            })
            .collect();
        let ginv = inverse(&g).unwrap();
        let rows = crate::linalg::mat_mul_rat(&ginv, &l.rational_rows());
        QuatLattice::from_rational_rows(&rows)
    }

    #[test]
    fn principal_examples() {
        let a = alg(1, 1);
        let o = QuatLattice::identity();
        assert_eq!(o.principal_generator(&a).map(|g| g.nrd()), Some(r(1)));
        let two = o.scale(r(2));
        let g = two.principal_generator(&a).unwrap();
        assert_eq!(o.left_mul(&g, &a), two);
        let data = ClassTypeData::build(&ClassList::enumerate(1, a.fp).unwrap(), &[2]);
        let cl = ClassList::enumerate(1, a.fp).unwrap();
        for (ideal, _) in data.ideals_of_norm(5, &cl).unwrap() {
            assert!(ideal.principal_generator(&a).is_some());
        }
    }

    #[test]
    fn same_class_examples() {
        let a = alg(3, 2);
        let i = a.latimer_ideal(&HermForm::diag(2, a.fp)).conj(&a);
        assert!(same_class(&i, &i, &a).unwrap().is_some());
        let x = a.elem_int([2, 1, 1, 1]);
        let j = i.left_mul(&x, &a);
        assert!(same_class(&i, &j, &a).unwrap().is_some());
        let left_ideal = a.latimer_ideal(&HermForm::diag(2, a.fp)).right_mul(&x, &a);
        let odd = QuatLattice::identity().left_mul(&x, &a).mul(&left_ideal, &a);
        if odd.right_order(&a) != i.right_order(&a) {
            assert_eq!(same_class(&i, &odd, &a), Err(Error::IncompatibleOrders));
        }
    }

    #[test]
    fn class_type_small_cases() {
        for m in [1, 3] {
            let cl = ClassList::enumerate(1, FieldParams::new(m).unwrap()).unwrap();
            let data = ClassTypeData::build(&cl, &[2, 3]);
            assert_eq!((data.h1(), data.h2()), (1, 1));
        }
        let cl = ClassList::enumerate(5, FieldParams::new(1).unwrap()).unwrap();
        let data = ClassTypeData::build(&cl, &[2, 5]);
        assert!(data.h2() <= data.h1());
        let hit: BTreeSet<usize> = data.rho_map.iter().copied().collect();
        assert_eq!(hit.len(), data.h2());
    }

    #[test]
    fn ideals_of_norm_examples() {
        let a = alg(1, 1);
        let cl = ClassList::enumerate(1, a.fp).unwrap();
        let data = ClassTypeData::build(&cl, &[2]);
        assert_eq!(data.ideals_of_norm(1, &cl).unwrap().len(), 1);
        assert_eq!(data.ideals_of_norm(1, &cl).unwrap()[0].0, QuatLattice::identity());
        assert_eq!(data.ideals_of_norm(5, &cl).unwrap().len(), 6);
        assert_eq!(data.ideals_of_norm(3, &cl).unwrap().len(), 4);
        assert_eq!(data.ideals_of_norm(4, &cl), Err(Error::BadNorm(4)));
    }

    #[test]
    fn ideals_of_norm_match_sublattice_search() {
        for (m, ell, ds) in [(1, 1, vec![3, 5, 9]), (1, 5, vec![3, 7]), (3, 2, vec![5, 7]), (7, 3, vec![5]), (11, 2, vec![3, 5])] {
            let a = alg(m, ell);
            let cl = ClassList::enumerate(ell, a.fp).unwrap();
            let bad = crate::arith::prime_factors((2 * ell * m) as u64);
            let data = ClassTypeData::build(&cl, &bad);
            for d in ds {
                let built: BTreeSet<QuatLattice> = data.ideals_of_norm(d, &cl).unwrap().into_iter().map(|x| x.0).collect();
                let searched: BTreeSet<QuatLattice> =
                    right_subideals_by_index(&QuatLattice::identity(), d * d, &a).into_iter().collect();
                assert_eq!(built, searched, "m={m} ell={ell} d={d}");
            }
        }
    }

    #[test]
    fn type_test_detects_conjugates() {
        let a = alg(7, 5);
        let o = QuatLattice::identity();
        let x = a.elem_int([1, 2, 0, 1]);
        let conj = o.left_mul(&x, &a).right_mul(&x.inverse().unwrap(), &a);
        assert!(same_type(&o, &conj, &a));
        let smaller = QuatLattice::from_gens(1, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]);
        assert!(!same_type(&o, &smaller, &a));
    }

    proptest! {
        #[test]
        fn nrd_is_multiplicative(m in prop::sample::select(vec![1i64, 2, 3, 7, 11]), ell in 1i64..20,
                                 x in proptest::collection::vec(-9i128..9, 4), y in proptest::collection::vec(-9i128..9, 4), d in 1i128..5) {
            let a = alg(m, ell);
            let p = a.elem([Rat::new(x[0], d), r(x[1]), r(x[2]), Rat::new(x[3], d)]);
            let q = a.elem_int([y[0], y[1], y[2], y[3]]);
            prop_assert_eq!(p.mul(&q).unwrap().nrd(), p.nrd() * q.nrd());
            prop_assert_eq!(p.mul(&p.conj()).unwrap(), a.one().scale(p.nrd()));
            let s = a.elem_int([x[0], x[1], y[0], y[1]]);
            prop_assert_eq!(p.mul(&q).unwrap().mul(&s).unwrap(), p.mul(&q.mul(&s).unwrap()).unwrap());
        }
    }
}
