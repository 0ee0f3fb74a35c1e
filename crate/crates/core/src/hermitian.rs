//! Positive definite binary Hermitian forms over `O_K` and their
//! `SL_2(O_K)`-classes.

use crate::enumerate::{hessian, short_vectors};
use crate::error::{Error, Result};
use crate::quad_field::{FieldParams, QuadInt};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// The matrix `[[a, b], [conj(b), c]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HermForm {
    pub a: i64,
    pub b: QuadInt,
    pub c: i64,
    pub ell: i64,
    #[serde(skip)]
    pub fp: FieldParams,
}

/// The matrix `[[r, s], [u, v]]` acting by `f -> A f A*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Transform {
    pub r: QuadInt,
    pub s: QuadInt,
    pub u: QuadInt,
    pub v: QuadInt,
}

pub type Pair = (QuadInt, QuadInt);

/// Ordering key of a reduced representative.
pub type ClassKey = (i64, i64, i64, i64, i64, i64);

impl Transform {
    pub fn identity() -> Self {
        Transform {
            r: QuadInt::ONE,
            s: QuadInt::ZERO,
            u: QuadInt::ZERO,
            v: QuadInt::ONE,
        }
    }

    pub fn det(&self, fp: &FieldParams) -> QuadInt {
        fp.mul(self.r, self.v) - fp.mul(self.s, self.u)
    }
}

impl HermForm {
    pub fn new(a: i64, b: QuadInt, c: i64, fp: FieldParams) -> Result<Self> {
        let ell = a * c - fp.norm(b);
        if a <= 0 || ell <= 0 {
            return Err(Error::InvalidConfig(format!(
                "form [[{a}, {b:?}], [., {c}]] is not positive definite"
            )));
        }
        Ok(HermForm { a, b, c, ell, fp })
    }

    pub fn diag(ell: i64, fp: FieldParams) -> Self {
        HermForm::new(1, QuadInt::ZERO, ell, fp).expect("ell > 0")
    }

    /// `f(u, v) = a N(u) + Tr(b u conj(v)) + c N(v)`.
    pub fn eval(&self, u: QuadInt, v: QuadInt) -> i64 {
        let fp = &self.fp;
        self.a * fp.norm(u) + fp.trace(fp.mul(self.b, fp.mul(u, fp.conj(v)))) + self.c * fp.norm(v)
    }

    /// `p f q*` for row vectors `p`, `q`.
    pub fn bilinear(&self, p: Pair, q: Pair) -> QuadInt {
        let fp = &self.fp;
        let (qu, qv) = (fp.conj(q.0), fp.conj(q.1));
        let first = fp.mul(p.0, (qu.scale(self.a)) + fp.mul(self.b, qv));
        let second = fp.mul(p.1, fp.mul(fp.conj(self.b), qu) + qv.scale(self.c));
        first + second
    }

    pub fn transform(&self, t: &Transform) -> HermForm {
        let p = (t.r, t.s);
        let q = (t.u, t.v);
        let a = self.eval(p.0, p.1);
        let c = self.eval(q.0, q.1);
        let b = self.bilinear(p, q);
        let fp = self.fp;
        HermForm {
            a,
            b,
            c,
            ell: a * c - fp.norm(b),
            fp,
        }
    }

    /// `gcd(a, c, Tr b, Tr(b w))`; equal to 1 exactly on the support set.
    pub fn content(&self) -> i64 {
        let fp = &self.fp;
        [
            self.a,
            self.c,
            fp.trace(self.b),
            fp.trace(fp.mul(self.b, QuadInt::OMEGA)),
        ]
        .into_iter()
        .fold(0i64, |g, x| g.gcd(&x))
    }

    pub fn in_support(&self) -> bool {
        self.content() == 1
    }

    /// Hessian of the form on `Z^4` in coordinates `(u.x, u.y, v.x, v.y)`.
    pub fn hessian(&self) -> Vec<Vec<i128>> {
        hessian(4, |x| {
            let u = QuadInt::new(x[0] as i64, x[1] as i64);
            let v = QuadInt::new(x[2] as i64, x[3] as i64);
            self.eval(u, v) as i128
        })
    }

    /// All pairs with `f(u, v) <= bound`, zero included.
    pub fn vectors_up_to(&self, bound: i64) -> Vec<Pair> {
        short_vectors(&self.hessian(), 2 * bound as i128)
            .into_iter()
            .map(|x| {
                (
                    QuadInt::new(x[0] as i64, x[1] as i64),
                    QuadInt::new(x[2] as i64, x[3] as i64),
                )
            })
            .collect()
    }

    pub fn vectors_of_value(&self, d: i64) -> Vec<Pair> {
        let mut v: Vec<Pair> = self
            .vectors_up_to(d)
            .into_iter()
            .filter(|&(u, w)| self.eval(u, w) == d)
            .collect();
        v.sort();
        v
    }

    pub fn minimum(&self) -> i64 {
        let cap = self.a.min(self.c).min(minimum_bound(self.ell, &self.fp));
        self.vectors_up_to(cap)
            .into_iter()
            .filter(|p| !(p.0.is_zero() && p.1.is_zero()))
            .map(|(u, v)| self.eval(u, v))
            .min()
            .expect("a is represented")
    }

    /// Reduced representative and its key: minimal first entry, then the
    /// least `(N b, Tr b, c, b.x, b.y)` over all minimal vectors and all
    /// translations of `b` by `a O_K`.
    pub fn canonical(&self) -> (HermForm, ClassKey) {
        let fp = self.fp;
        let mu = self.minimum();
        let mut best: Option<(ClassKey, HermForm)> = None;
        for (u, v) in self.vectors_up_to(mu) {
            if self.eval(u, v) != mu {
                continue;
            }
            let (p, q) = complete_row(&fp, u, v).expect("minimal vectors are primitive");
            let t = Transform { r: u, s: v, u: p, v: q };
            let g = self.transform(&t);
            let b = fp.coset_min(g.b, mu);
            let c = (fp.norm(b) + self.ell) / mu;
            let form = HermForm {
                a: mu,
                b,
                c,
                ell: self.ell,
                fp,
            };
            let key = form.key();
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, form));
            }
        }
        let (key, form) = best.expect("minimum is attained");
        (form, key)
    }

    pub fn key(&self) -> ClassKey {
        let fp = &self.fp;
        (self.a, fp.norm(self.b), fp.trace(self.b), self.c, self.b.x, self.b.y)
    }

    /// A matrix `A` of determinant 1 with `A self A* = other`, found by
    /// enumerating candidate rows by their form values.
    pub fn equivalence(&self, other: &HermForm) -> Result<Option<Transform>> {
        if self.ell != other.ell {
            return Err(Error::DeterminantMismatch(self.ell, other.ell));
        }
        let fp = &self.fp;
        let firsts = self.vectors_of_value(other.a);
        let seconds = self.vectors_of_value(other.c);
        for &p in &firsts {
            for &q in &seconds {
                let t = Transform { r: p.0, s: p.1, u: q.0, v: q.1 };
                if t.det(fp) == QuadInt::ONE && self.bilinear(p, q) == other.b {
                    return Ok(Some(t));
                }
            }
        }
        Ok(None)
    }

    /// Every `g` of determinant 1 with `g f g* = f`.
    pub fn automorphs(&self) -> Vec<Transform> {
        let fp = &self.fp;
        let firsts = self.vectors_of_value(self.a);
        let seconds = self.vectors_of_value(self.c);
        let mut out = Vec::new();
        for &p in &firsts {
            for &q in &seconds {
                let t = Transform { r: p.0, s: p.1, u: q.0, v: q.1 };
                if t.det(fp) == QuadInt::ONE && self.bilinear(p, q) == self.b {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Primitive representations of `d`.
    pub fn primitive_reps(&self, d: i64) -> Vec<Pair> {
        let fp = &self.fp;
        self.vectors_of_value(d)
            .into_iter()
            .filter(|&(u, v)| fp.is_coprime_pair(u, v))
            .collect()
    }

    pub fn all_reps_count(&self, d: i64) -> usize {
        self.vectors_of_value(d).len()
    }

    /// The residue `h (mod d)` with `A f A* = [[*, h], [conj h, d]]` for any
    /// completion `A` of the second row `(u, v)`.
    pub fn phi(&self, u: QuadInt, v: QuadInt, d: i64) -> Result<QuadInt> {
        self.phi_with(u, v, d, None)
    }

    /// As [`HermForm::phi`], optionally shifting the completion by `t` times
    /// the second row.
    pub fn phi_with(&self, u: QuadInt, v: QuadInt, d: i64, shift: Option<QuadInt>) -> Result<QuadInt> {
        let fp = &self.fp;
        if self.eval(u, v) != d || !fp.is_coprime_pair(u, v) {
            return Err(Error::NotPrimitive);
        }
        // r v - s u = 1 from x u + y v = 1.
        let (x, y) = unit_solution(fp, u, v).ok_or(Error::NotPrimitive)?;
        let (mut r, mut s) = (y, -x);
        if let Some(t) = shift {
            r = r + fp.mul(t, u);
            s = s + fp.mul(t, v);
        }
        Ok(fp.reduce_mod(self.bilinear((r, s), (u, v)), d))
    }
}

/// `(x, y)` with `x u + y v = 1`, by extended gcd on Euclidean fields and by
/// an integer linear solve otherwise.
fn unit_solution(fp: &FieldParams, u: QuadInt, v: QuadInt) -> Option<Pair> {
    if fp.euclidean {
        let (g, x, y) = fp.xgcd(u, v).ok()?;
        let ginv = fp.div_exact(QuadInt::ONE, g)?;
        Some((fp.mul(x, ginv), fp.mul(y, ginv)))
    } else {
        fp.unit_combination(u, v)
    }
}

/// Second row `(p, q)` with `u q - v p = 1`.
pub fn complete_row(fp: &FieldParams, u: QuadInt, v: QuadInt) -> Option<Pair> {
    let (x, y) = unit_solution(fp, u, v)?;
    Some((-y, x))
}

/// A complete list of classes of determinant `ell`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassList {
    pub ell: i64,
    #[serde(skip)]
    pub fp: FieldParams,
    /// Reduced representatives sorted by key; class 0 is `diag(1, ell)`.
    pub all_reps: Vec<HermForm>,
    /// Indices into `all_reps` of the classes in the support set.
    pub support: Vec<usize>,
    /// Automorph group orders, aligned with `all_reps`.
    pub unit_orders: Vec<usize>,
    /// First-entry bound used by the final (stable) enumeration.
    pub search_bound: i64,
    #[serde(skip)]
    index: HashMap<ClassKey, usize>,
}

/// First-entry bound covering every class minimum.
pub fn minimum_bound(ell: i64, fp: &FieldParams) -> i64 {
    let loose = (2.0 * (ell as f64).sqrt()).ceil() as i64;
    // Hermite: min^4 <= gamma_4^4 * ell^2 |d_K|^2 / 16 with gamma_4^4 = 4.
    let sq = ell * fp.discriminant().abs() / 2;
    let mut hermite = (sq as f64).sqrt() as i64;
    while (hermite + 1) * (hermite + 1) <= sq {
        hermite += 1;
    }
    loose.max(hermite).max(1)
}

fn reduced_keys(ell: i64, fp: FieldParams, bound: i64) -> BTreeMap<ClassKey, HermForm> {
    let found: Vec<(ClassKey, HermForm)> = (1..=bound)
        .into_par_iter()
        .flat_map_iter(|a| {
            fp.residues(a)
                .into_iter()
                .filter(move |&b| (fp.norm(b) + ell) % a == 0)
                .map(move |b| {
                    let f = HermForm::new(a, b, (fp.norm(b) + ell) / a, fp).expect("positive");
                    let (g, k) = f.canonical();
                    (k, g)
                })
        })
        .collect();
    found.into_iter().collect()
}

impl ClassList {
    pub fn enumerate(ell: i64, fp: FieldParams) -> Result<Self> {
        if ell < 1 {
            return Err(Error::InvalidConfig(format!("ell = {ell} must be positive")));
        }
        let mut bound = minimum_bound(ell, &fp);
        let mut classes = reduced_keys(ell, fp, bound);
        loop {
            let doubled = reduced_keys(ell, fp, 2 * bound);
            if doubled.len() == classes.len() {
                break;
            }
            bound *= 2;
            classes = doubled;
        }
        let all_reps: Vec<HermForm> = classes.values().copied().collect();
        let index = classes.keys().enumerate().map(|(i, k)| (*k, i)).collect();
        let support = (0..all_reps.len()).filter(|&i| all_reps[i].in_support()).collect();
        let unit_orders = all_reps.par_iter().map(|f| f.automorphs().len()).collect();
        Ok(ClassList {
            ell,
            fp,
            all_reps,
            support,
            unit_orders,
            search_bound: bound,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.all_reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all_reps.is_empty()
    }

    pub fn support_reps(&self) -> Vec<HermForm> {
        self.support.iter().map(|&i| self.all_reps[i]).collect()
    }

    /// Class index of an arbitrary form of the same determinant.
    pub fn classify(&self, f: &HermForm) -> Option<usize> {
        if f.ell != self.ell {
            return None;
        }
        self.index.get(&f.canonical().1).copied()
    }

    /// The form `[[(N h + ell) / d, h], [conj h, d]]`.
    pub fn residue_form(&self, h: QuadInt, d: i64) -> Option<HermForm> {
        let n = self.fp.norm(h) + self.ell;
        (n % d == 0).then(|| HermForm::new(n / d, h, d, self.fp).expect("positive"))
    }

    /// `r(f_i; d)` for every class `i`.
    pub fn r_counts(&self, d: i64) -> Vec<u64> {
        let mut counts = vec![0u64; self.len()];
        for h in self.fp.residues(d) {
            if let Some(f) = self.residue_form(h, d) {
                let i = self.classify(&f).expect("complete class list");
                counts[i] += 1;
            }
        }
        counts
    }

    /// `#R(d, -ell)`.
    pub fn r_total(&self, d: i64) -> u64 {
        let fp = &self.fp;
        fp.residues(d)
            .into_iter()
            .filter(|&h| (fp.norm(h) + self.ell) % d == 0)
            .count() as u64
    }
}
