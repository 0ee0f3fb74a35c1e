//! Brandt matrices on the ideal class set, simultaneous eigenforms that factor
//! through the type map, their L-coefficients, and the coefficientwise
//! identities between ideal counts and the hat zeta series.

use crate::algebraic::{charpoly, q, q_from_rat, split_solve, NumberField, Poly, Split, Q};
use crate::error::{Error, Result};
use crate::hermitian::ClassList;
use crate::linalg::Rat;
use crate::quaternion::{same_type, ClassTypeData, QuatLattice};
use crate::zeta::{DirichletCoeffs, PrimeSet};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub d: u64,
    pub matrix: Vec<Vec<Rat>>,
    pub weights: Vec<usize>,
}

impl HeckeMatrix {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn mul(&self, o: &HeckeMatrix) -> Vec<Vec<Rat>> {
        crate::linalg::mat_mul_rat(&self.matrix, &o.matrix)
    }

    pub fn commutes_with(&self, o: &HeckeMatrix) -> bool {
        self.mul(o) == o.mul(self)
    }

    /// `e_j B_ij = e_i B_ji`, i.e. self-adjoint for `<f, g> = sum f_i g_i / e_i`.
    pub fn is_weighted_self_adjoint(&self) -> bool {
        let n = self.size();
        let e = |i: usize| Rat::from_integer(self.weights[i] as i128);
        (0..n).all(|i| (0..n).all(|j| e(j) * self.matrix[i][j] == e(i) * self.matrix[j][i]))
    }

    pub fn row_sums(&self) -> Vec<Rat> {
        self.matrix.iter().map(|r| r.iter().copied().sum()).collect()
    }

    pub fn to_q(&self) -> Vec<Vec<Q>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&x| q_from_rat(x)).collect())
            .collect()
    }

    /// `C[s][t] = sum_{j in t} B[i][j]` when this is independent of `i in s`.
    pub fn factor_through(&self, rho: &[usize], h2: usize) -> Option<Vec<Vec<Rat>>> {
        let mut c: Vec<Vec<Option<Rat>>> = vec![vec![None; h2]; h2];
        for (i, row) in self.matrix.iter().enumerate() {
            let mut sums = vec![Rat::zero(); h2];
            for (j, &b) in row.iter().enumerate() {
                sums[rho[j]] += b;
            }
            for t in 0..h2 {
                match c[rho[i]][t] {
                    None => c[rho[i]][t] = Some(sums[t]),
                    Some(v) if v != sums[t] => return None,
                    _ => {}
                }
            }
        }
        Some(c.into_iter().map(|r| r.into_iter().map(|x| x.unwrap_or_default()).collect()).collect())
    }
}

pub fn brandt(d: u64, data: &ClassTypeData) -> Result<HeckeMatrix> {
    Ok(HeckeMatrix {
        d,
        matrix: data.brandt(d)?,
        weights: data.unit_orders.clone(),
    })
}

/// A simultaneous eigenform on the classes, constant on the fibers of `rho`,
/// with values in `Q[x]/(g)`.
#[derive(Debug, Clone)]
pub struct ClassFunction {
    pub field: NumberField,
    /// Values on types; pulled back to classes through `rho`.
    pub values: Vec<Poly>,
    pub rho_map: Vec<usize>,
    /// Eigenvalue at each prime used to build the system.
    pub eigenvalues: Vec<(u64, Poly)>,
    /// `f(1) = 0`; the values are then scaled to make the first unit value 1.
    pub vanishes_at_identity: bool,
    /// All roots of the modulus are real.
    pub real: bool,
}

impl ClassFunction {
    pub fn at_class(&self, i: usize) -> &Poly {
        &self.values[self.rho_map[i]]
    }

    /// Value at the type of `o`.
    pub fn at_identity(&self) -> &Poly {
        self.at_class(0)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| self.field.is_zero(&v.sub(&self.values[0])))
    }

    pub fn eigenvalue(&self, p: u64) -> Option<&Poly> {
        self.eigenvalues.iter().find(|(x, _)| *x == p).map(|(_, v)| v)
    }
}

/// Result of the eigen-decomposition on the rho-factoring subspace.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub forms: Vec<ClassFunction>,
    /// Sum of the degrees of the forms; at most `h2`.
    pub dimension: usize,
    pub h2: usize,
    /// Brandt matrices preserve the rho-factoring subspace.
    pub subspace_invariant: bool,
}

impl EigenSystem {
    /// The subspace spanned by the forms is smaller than `h2`.
    pub fn deficient(&self) -> bool {
        self.dimension < self.h2
    }
}

enum Attempt {
    Done(Vec<ClassFunction>),
    NotSimultaneous,
}

pub fn eigensystem(data: &ClassTypeData, primes: &[u64]) -> Result<EigenSystem> {
    let mats: Vec<HeckeMatrix> = primes.iter().map(|&p| brandt(p, data)).collect::<Result<_>>()?;
    eigensystem_from(data, &mats)
}

pub fn eigensystem_from(data: &ClassTypeData, mats: &[HeckeMatrix]) -> Result<EigenSystem> {
    for a in mats {
        for b in mats {
            if !a.commutes_with(b) {
                return Err(Error::NonCommuting);
            }
        }
    }
    let h1 = data.h1();
    let h2 = data.h2();
    let subspace_invariant = mats.iter().all(|m| m.factor_through(&data.rho_map, h2).is_some());
    let qm: Vec<Vec<Vec<Q>>> = mats.iter().map(|m| m.to_q()).collect();
    for attempt in 0..8u32 {
        let coeffs: Vec<Q> = (0..mats.len()).map(|k| q(((k as i64) + 2).pow(attempt + 1) - 1)).collect();
        let mut t = vec![vec![Q::zero(); h1]; h1];
        for (c, m) in coeffs.iter().zip(&qm) {
            for i in 0..h1 {
                for j in 0..h1 {
                    t[i][j] += c * &m[i][j];
                }
            }
        }
        let g = if h1 == 0 { Poly::constant(q(1)) } else { charpoly(&t).squarefree_part() };
        // Eigenvalues of the integral matrix t are algebraic integers bounded
        // by its largest absolute row sum.
        let bound: Q = t.iter().map(|r| r.iter().map(|x| num_traits::Signed::abs(x)).sum::<Q>()).max().unwrap_or_else(Q::zero);
        let bound = bound.ceil().to_integer().try_into().unwrap_or(i64::MAX);
        let parts: Vec<(NumberField, Attempt)> = g
            .split_integer_roots(bound)
            .iter()
            .flat_map(|factor| split_solve(factor, |f| eigen_task(f, &t, &qm, mats, data)))
            .collect();
        if parts.iter().any(|(_, a)| matches!(a, Attempt::NotSimultaneous)) {
            continue;
        }
        let mut forms: Vec<ClassFunction> = parts
            .into_iter()
            .flat_map(|(_, a)| match a {
                Attempt::Done(v) => v,
                Attempt::NotSimultaneous => Vec::new(),
            })
            .collect();
        forms.sort_by_key(|f| (!f.is_constant(), f.field.degree(), format!("{}", f.field.modulus)));
        let dimension = forms.iter().map(|f| f.field.degree()).sum();
        return Ok(EigenSystem {
            forms,
            dimension,
            h2,
            subspace_invariant,
        });
    }
    Err(Error::NonCommuting)
}

fn eigen_task(
    f: &NumberField,
    t: &[Vec<Q>],
    qm: &[Vec<Vec<Q>>],
    mats: &[HeckeMatrix],
    data: &ClassTypeData,
) -> std::result::Result<Attempt, Split> {
    let h1 = t.len();
    let x = f.generator();
    let shifted: Vec<Vec<Poly>> = (0..h1)
        .map(|i| {
            (0..h1)
                .map(|j| {
                    let c = Poly::constant(t[i][j].clone());
                    if i == j { c.sub(&x) } else { c }
                })
                .collect()
        })
        .collect();
    let basis = f.nullspace(&shifted)?;
    // Each matrix must act as one scalar on the whole eigenspace.
    let mut eigenvalues = Vec::new();
    for (m, hm) in qm.iter().zip(mats) {
        let mut lambda: Option<Poly> = None;
        for v in &basis {
            let bv = apply(f, m, v);
            let k = first_unit(f, v)?.expect("eigenvectors are nonzero");
            let l = f.mul(&bv[k], &f.inverse(&v[k])?);
            if bv.iter().zip(v).any(|(a, b)| !f.is_zero(&a.sub(&f.mul(&l, b)))) {
                return Ok(Attempt::NotSimultaneous);
            }
            match &lambda {
                None => lambda = Some(l),
                Some(prev) if !f.is_zero(&prev.sub(&l)) => return Ok(Attempt::NotSimultaneous),
                _ => {}
            }
        }
        if let Some(l) = lambda {
            eigenvalues.push((hm.d, l));
        }
    }
    // Intersect with functions constant on rho-fibers.
    let rho = &data.rho_map;
    let h2 = data.h2();
    let mut constraints: Vec<Vec<Poly>> = Vec::new();
    for j in 0..h1 {
        let j0 = (0..h1).find(|&k| rho[k] == rho[j]).expect("fiber is nonempty");
        if j0 != j {
            constraints.push(basis.iter().map(|v| v[j].sub(&v[j0])).collect());
        }
    }
    let combos = if constraints.is_empty() {
        (0..basis.len())
            .map(|k| (0..basis.len()).map(|l| Poly::constant(q(i64::from(k == l)))).collect())
            .collect()
    } else {
        f.nullspace(&constraints)?
    };
    let real = f.modulus.real_root_count() == f.degree();
    let mut out = Vec::new();
    for c in combos {
        let mut v = vec![Poly::zero(); h1];
        for (ck, bk) in c.iter().zip(&basis) {
            for i in 0..h1 {
                v[i] = f.reduce(&v[i].add(&ck.mul(&bk[i])));
            }
        }
        let vanishes = !f.classify(&v[0])?;
        let k = if vanishes { first_unit(f, &v)?.expect("nonzero combination") } else { 0 };
        let inv = f.inverse(&v[k])?;
        let v: Vec<Poly> = v.iter().map(|a| f.mul(a, &inv)).collect();
        let mut values = vec![Poly::zero(); h2];
        for i in 0..h1 {
            values[rho[i]] = v[i].clone();
        }
        out.push(ClassFunction {
            field: f.clone(),
            values,
            rho_map: rho.clone(),
            eigenvalues: eigenvalues.clone(),
            vanishes_at_identity: vanishes,
            real,
        });
    }
    Ok(Attempt::Done(out))
}

fn apply(f: &NumberField, m: &[Vec<Q>], v: &[Poly]) -> Vec<Poly> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Poly::zero(), |acc, (a, b)| acc.add(&b.scale(a)))
        })
        .map(|p| f.reduce(&p))
        .collect()
}

fn first_unit(f: &NumberField, v: &[Poly]) -> std::result::Result<Option<usize>, Split> {
    for (k, x) in v.iter().enumerate() {
        if f.classify(x)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `sum_{I of norm d} f(rho(I))` from per-class ideal counts.
pub fn ideal_weighted_sum(f: &ClassFunction, counts: &[u64]) -> Poly {
    let s = counts
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (i, &c)| acc.add(&f.at_class(i).scale(&q(c as i64))));
    f.field.reduce(&s)
}

/// L-coefficients over the field of `f`: `c(d) f(1) = sum_{I of norm d} f(rho(I))`.
#[derive(Debug, Clone)]
pub struct LCoeffs {
    pub field: NumberField,
    pub coeffs: Vec<Poly>,
}

impl LCoeffs {
    pub fn get(&self, d: u64) -> &Poly {
        &self.coeffs[d as usize - 1]
    }

    /// Rational coefficients when the field has degree 1.
    pub fn rational(&self) -> Option<DirichletCoeffs> {
        if self.field.degree() != 1 {
            return None;
        }
        let root = -self.field.modulus.0[0].clone();
        let n_max = self.coeffs.len();
        let vals: Vec<Q> = self.coeffs.iter().map(|p| p.eval(&root)).collect();
        vals.iter().all(|v| v.numer().bits() < 120 && v.denom().bits() < 120).then(|| {
            DirichletCoeffs::from_fn("L", n_max, |d| {
                let v = &vals[d as usize - 1];
                Rat::new(
                    v.numer().try_into().expect("bounded"),
                    v.denom().try_into().expect("bounded"),
                )
            })
        })
    }
}

pub fn l_coeffs(f: &ClassFunction, ideal_counts: &[Vec<u64>], p: &PrimeSet) -> Result<LCoeffs> {
    if f.vanishes_at_identity {
        return Err(Error::VanishingAtIdentity);
    }
    let inv = f.field.inverse(f.at_identity()).map_err(|_| Error::VanishingAtIdentity)?;
    let coeffs = ideal_counts
        .iter()
        .enumerate()
        .map(|(k, counts)| {
            if p.is_good(k as u64 + 1) {
                f.field.mul(&ideal_weighted_sum(f, counts), &inv)
            } else {
                Poly::zero()
            }
        })
        .collect();
    Ok(LCoeffs {
        field: f.field.clone(),
        coeffs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubMainRecord {
    pub form: usize,
    pub modulus: String,
    pub d: u64,
    pub lhs: String,
    pub rhs: String,
    /// `c(d)` agrees with the eigenvalue of the Brandt matrix at `d`, when computed.
    pub brandt_agrees: Option<bool>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialZetaRecord {
    pub type_index: usize,
    pub d: u64,
    pub zeta_sum: i128,
    pub ideal_count: u64,
    pub pass: bool,
}

/// `sum_i f(rho(u_i)) zeta_hat_i(d) = f(1) c(d)` for every form and good `d`.
///
/// With `brandt_check`, `c(d)` is also compared with the eigenvalue of `f`
/// under the Brandt matrix at `d`.
pub fn verify_sub_main(
    system: &EigenSystem,
    data: &ClassTypeData,
    hats: &[DirichletCoeffs],
    ideal_counts: &[Vec<u64>],
    p: &PrimeSet,
    brandt_check: bool,
) -> Vec<SubMainRecord> {
    let n_max = ideal_counts.len() as u64;
    let good: Vec<u64> = (1..=n_max).filter(|&d| p.is_good(d)).collect();
    let brandts: HashMap<u64, Vec<Vec<Q>>> = if brandt_check {
        good.par_iter()
            .map(|&d| (d, brandt(d, data).expect("good d").to_q()))
            .collect()
    } else {
        HashMap::new()
    };
    let mut out = Vec::new();
    for (j, f) in system.forms.iter().enumerate() {
        let fld = &f.field;
        let l = l_coeffs(f, ideal_counts, p).ok();
        for &d in &good {
            let lhs = fld.reduce(&(0..data.h1()).fold(Poly::zero(), |acc, i| {
                acc.add(&f.at_class(i).scale(&q_from_rat(hats[i].get(d))))
            }));
            let rhs = match &l {
                Some(l) => fld.mul(f.at_identity(), l.get(d)),
                None => ideal_weighted_sum(f, &ideal_counts[d as usize - 1]),
            };
            let brandt_agrees = match (&l, brandts.get(&d)) {
                (Some(l), Some(b)) => {
                    let v: Vec<Poly> = (0..data.h1()).map(|i| f.at_class(i).clone()).collect();
                    let bv = apply(fld, b, &v);
                    Some(bv.iter().zip(&v).all(|(a, x)| fld.is_zero(&a.sub(&fld.mul(l.get(d), x)))))
                }
                _ => None,
            };
            let pass = fld.is_zero(&lhs.sub(&rhs)) && brandt_agrees != Some(false);
            out.push(SubMainRecord {
                form: j,
                modulus: format!("{}", fld.modulus),
                d,
                lhs: format!("{lhs}"),
                rhs: format!("{rhs}"),
                brandt_agrees,
                pass,
            });
        }
    }
    out
}

/// Type of the left order of every ideal, computed directly by conjugacy
/// search against the type representatives.
pub struct TypeOracle<'a> {
    data: &'a ClassTypeData,
    cache: HashMap<QuatLattice, usize>,
}

impl<'a> TypeOracle<'a> {
    pub fn new(data: &'a ClassTypeData) -> Self {
        TypeOracle {
            data,
            cache: HashMap::new(),
        }
    }

    pub fn type_of(&mut self, ideal: &QuatLattice, hint: usize) -> usize {
        let alg = &self.data.alg;
        let order = ideal.left_order(alg);
        if let Some(&t) = self.cache.get(&order) {
            return t;
        }
        let reps = &self.data.type_reps;
        let t = std::iter::once(hint)
            .chain((0..reps.len()).filter(|&t| t != hint))
            .find(|&t| same_type(&reps[t], &order, alg))
            .expect("every left order has a type");
        self.cache.insert(order, t);
        t
    }
}

/// `sum_{i : rho(i) = w} zeta_hat_i(d) = #{norm-d ideals whose left order has type w}`,
/// together with the check that the fibers partition all norm-d ideals.
pub fn verify_partial_zeta(
    data: &ClassTypeData,
    classes: &ClassList,
    hats: &[DirichletCoeffs],
    p: &PrimeSet,
    n_max: usize,
) -> Vec<PartialZetaRecord> {
    let mut oracle = TypeOracle::new(data);
    let h2 = data.h2();
    let mut out = Vec::new();
    for d in (1..=n_max as u64).filter(|&d| p.is_good(d)) {
        let ideals = data.ideals_of_norm(d, classes).expect("good d");
        let mut by_type = vec![0u64; h2];
        for (ideal, c) in &ideals {
            by_type[oracle.type_of(ideal, data.rho_map[*c])] += 1;
        }
        debug_assert_eq!(by_type.iter().sum::<u64>(), ideals.len() as u64);
        for (w, &count) in by_type.iter().enumerate() {
            let zeta_sum: i128 = (0..data.h1())
                .filter(|&i| data.rho_map[i] == w)
                .map(|i| hats[i].get(d).to_integer())
                .sum();
            out.push(PartialZetaRecord {
                type_index: w,
                d,
                zeta_sum,
                ideal_count: count,
                pass: zeta_sum == count as i128,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_field::FieldParams;
    use crate::quaternion::right_subideals_by_index;
    use crate::zeta::{ideal_counts, zeta_hats};
    use std::sync::OnceLock;

    struct Setup {
        classes: ClassList,
        data: ClassTypeData,
        p: PrimeSet,
    }

    fn setup(m: i64, ell: i64) -> Setup {
        let classes = ClassList::enumerate(ell, FieldParams::new(m).unwrap()).unwrap();
        let p = PrimeSet::default_for(m, ell);
        let data = ClassTypeData::build(&classes, p.primes());
        Setup { classes, data, p }
    }

    fn cached(m: i64, ell: i64) -> &'static Setup {
        static CELLS: OnceLock<std::sync::Mutex<HashMap<(i64, i64), &'static Setup>>> = OnceLock::new();
        let map = CELLS.get_or_init(Default::default);
        let mut guard = map.lock().unwrap();
        *guard.entry((m, ell)).or_insert_with(|| Box::leak(Box::new(setup(m, ell))))
    }

    fn r(n: i128) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn brandt_examples() {
        let s = cached(1, 1);
        assert_eq!(brandt(1, &s.data).unwrap().matrix, vec![vec![r(1)]]);
        assert_eq!(brandt(3, &s.data).unwrap().matrix, vec![vec![r(4)]]);
        assert_eq!(brandt(5, &s.data).unwrap().matrix, vec![vec![r(6)]]);
        assert_eq!(brandt(2, &s.data), Err(Error::BadNorm(2)));
    }

    #[test]
    fn brandt_rows_match_subideal_enumeration() {
        for (m, ell, d) in [(1, 5, 3u64), (3, 5, 7), (7, 2, 3), (11, 1, 3)] {
            let s = cached(m, ell);
            let b = brandt(d, &s.data).unwrap();
            let alg = &s.data.alg;
            for (i, ideal) in s.data.ideal_class_reps.iter().enumerate() {
                let target = s.data.norms[i] * r(d as i128);
                let mut counts = vec![0i128; s.data.h1()];
                for sub in right_subideals_by_index(ideal, d * d, alg) {
                    assert_eq!(sub.nrd(alg), target);
                    counts[s.data.classify(&sub, None).unwrap()] += 1;
                }
                // Sub-ideals of I_i in class j correspond to elements of
                // (I_i : I_j) of the right norm, up to units of O_L(I_j).
                let expected: Vec<Rat> = counts.iter().map(|&c| r(c)).collect();
                assert_eq!(b.matrix[i], expected, "m={m} ell={ell} d={d} row {i}");
            }
        }
    }

    #[test]
    fn brandt_structure() {
        for (m, ell) in [(1, 5), (1, 13), (3, 11), (7, 5), (11, 3)] {
            let s = cached(m, ell);
            let primes: Vec<u64> = crate::arith::primes_up_to(23).into_iter().filter(|&p| s.p.is_good(p)).collect();
            let mats: Vec<HeckeMatrix> = primes.iter().map(|&p| brandt(p, &s.data).unwrap()).collect();
            for (p, b) in primes.iter().zip(&mats) {
                assert!(b.is_weighted_self_adjoint());
                assert!(b.row_sums().iter().all(|&x| x == r(*p as i128 + 1)));
                for c in &mats {
                    assert!(b.commutes_with(c));
                }
            }
        }
    }

    #[test]
    fn single_class_eigenform() {
        let s = cached(1, 1);
        let sys = eigensystem(&s.data, &[3, 5, 13]).unwrap();
        assert_eq!(sys.forms.len(), 1);
        let f = &sys.forms[0];
        assert!(f.is_constant() && f.real && !f.vanishes_at_identity);
        assert_eq!(f.eigenvalue(13), Some(&Poly::constant(q(14))));
        let counts = ideal_counts(&s.data, &s.classes, &s.p, 15);
        let l = l_coeffs(f, &counts, &s.p).unwrap().rational().unwrap();
        assert_eq!((l.get(1), l.get(3), l.get(5), l.get(13)), (r(1), r(4), r(6), r(14)));
        assert_eq!(l.get(15), l.get(3) * l.get(5));
    }

    #[test]
    fn eigenforms_are_orthogonal_and_real() {
        for (m, ell) in [(1, 13), (3, 11), (7, 5), (11, 5)] {
            let s = cached(m, ell);
            let primes: Vec<u64> = [3u64, 5, 7, 11, 13].into_iter().filter(|&p| s.p.is_good(p)).collect();
            let sys = eigensystem(&s.data, &primes).unwrap();
            assert!(sys.dimension <= s.data.h2());
            assert!(sys.forms[0].is_constant());
            for f in &sys.forms {
                assert!(f.real);
            }
            // Rational forms: weighted inner product over classes vanishes.
            let rational: Vec<&ClassFunction> = sys.forms.iter().filter(|f| f.field.degree() == 1).collect();
            for (a, b) in rational.iter().enumerate().flat_map(|(k, a)| rational[k + 1..].iter().map(move |b| (a, b))) {
                let root_a = -a.field.modulus.0[0].clone();
                let root_b = -b.field.modulus.0[0].clone();
                let ip: Q = (0..s.data.h1())
                    .map(|i| a.at_class(i).eval(&root_a) * b.at_class(i).eval(&root_b) / q(s.data.unit_orders[i] as i64))
                    .sum();
                assert!(ip.is_zero());
            }
        }
    }

    #[test]
    fn sub_main_and_partial_zeta_small() {
        for (m, ell) in [(1, 1), (1, 5), (3, 1), (3, 5)] {
            let s = cached(m, ell);
            let n_max = 40;
            let primes: Vec<u64> = [3u64, 5, 7, 11, 13].into_iter().filter(|&p| s.p.is_good(p)).collect();
            let sys = eigensystem(&s.data, &primes).unwrap();
            let hats = zeta_hats(&s.classes, &s.p, n_max);
            let counts = ideal_counts(&s.data, &s.classes, &s.p, n_max);
            for rec in verify_sub_main(&sys, &s.data, &hats, &counts, &s.p, true) {
                assert!(rec.pass, "{m} {ell} {rec:?}");
            }
            for rec in verify_partial_zeta(&s.data, &s.classes, &hats, &s.p, n_max) {
                assert!(rec.pass, "{m} {ell} {rec:?}");
            }
        }
    }

    #[test]
    fn vanishing_identity_is_reported() {
        let f = ClassFunction {
            field: NumberField::new(Poly::new(vec![q(0), q(1)])),
            values: vec![Poly::zero(), Poly::constant(q(1))],
            rho_map: vec![0, 1],
            eigenvalues: Vec::new(),
            vanishes_at_identity: true,
            real: true,
        };
        let p = PrimeSet::default();
        assert_eq!(l_coeffs(&f, &[vec![1, 0]], &p).unwrap_err(), Error::VanishingAtIdentity);
    }
}
