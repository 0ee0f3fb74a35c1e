//! Exact polynomial arithmetic over Q, real-root counting by Sturm sequences,
//! and linear algebra over `Q[x]/(g)` for squarefree `g`, splitting `g`
//! whenever a zero divisor shows up.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_from_rat(r: crate::linalg::Rat) -> Q {
    Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Polynomial with coefficients from the constant term upward; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly(vec![q(0), q(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).cloned().unwrap_or_else(Q::zero) + o.0.get(i).cloned().unwrap_or_else(Q::zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Q) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let lead = d.lead();
        let mut r = self.0.clone();
        let mut quot = vec![Q::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lead;
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] -= &c * di;
            }
            quot[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(quot), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::constant(q(1)), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(q(1)));
        while !r1.is_zero() {
            let (qq, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qq.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qq.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let k = r0.lead().recip();
        (r0.scale(&k), s0.scale(&k), t0.scale(&k))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// Integer roots in `[-bound, bound]`.
    pub fn integer_roots(&self, bound: i64) -> Vec<i64> {
        (-bound..=bound).filter(|&r| self.eval(&q(r)).is_zero()).collect()
    }

    /// Split off the linear factors at integer roots in `[-bound, bound]`;
    /// returns the linear factors followed by the remaining cofactor, if any.
    pub fn split_integer_roots(&self, bound: i64) -> Vec<Poly> {
        let mut rest = self.monic();
        let mut out = Vec::new();
        for r in self.integer_roots(bound) {
            let lin = Poly::new(vec![q(-r), q(1)]);
            rest = rest.divrem(&lin).0;
            out.push(lin);
        }
        if rest.degree().unwrap_or(0) > 0 {
            out.push(rest);
        }
        out
    }

    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Number of distinct real roots, from the Sturm sequence.
    pub fn real_root_count(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        let sign_changes = |signs: Vec<i32>| {
            let s: Vec<i32> = signs.into_iter().filter(|&x| x != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let sign = |x: &Q| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 };
        let at_pos = seq.iter().map(|p| sign(&p.lead())).collect();
        let at_neg = seq
            .iter()
            .map(|p| {
                let s = sign(&p.lead());
                if p.degree().unwrap_or(0) % 2 == 1 { -s } else { s }
            })
            .collect();
        sign_changes(at_neg) - sign_changes(at_pos)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(x I - A)` by Faddeev-LeVerrier.
pub fn charpoly(a: &[Vec<Q>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = q(1);
    let ident = |k: &Q| -> Vec<Vec<Q>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { k.clone() } else { Q::zero() }).collect())
            .collect()
    };
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let am = mat_mul(a, &m);
        let id = ident(&coeffs[n - k + 1]);
        m = am
            .iter()
            .zip(&id)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
            .collect();
        let amk = mat_mul(a, &m);
        let tr: Q = (0..n).map(|i| amk[i][i].clone()).sum();
        coeffs[n - k] = -tr / q(k as i64);
    }
    Poly::new(coeffs)
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum())
                .collect()
        })
        .collect()
}

/// `Q[x]/(g)` for a monic squarefree `g`. Elements are polynomials reduced mod `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    pub modulus: Poly,
}

/// A proper factor of the modulus found while inverting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split(pub Poly);

impl NumberField {
    pub fn new(modulus: Poly) -> Self {
        NumberField { modulus: modulus.monic() }
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.modulus)
    }

    pub fn generator(&self) -> Poly {
        self.reduce(&Poly::x())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b))
    }

    pub fn is_zero(&self, a: &Poly) -> bool {
        self.reduce(a).is_zero()
    }

    pub fn inverse(&self, a: &Poly) -> Result<Poly, Split> {
        let (g, s, _) = a.xgcd(&self.modulus);
        if g.degree() == Some(0) {
            Ok(self.reduce(&s))
        } else {
            Err(Split(g))
        }
    }

    /// Whether `a` is zero, or a unit; a zero divisor yields the split.
    pub fn classify(&self, a: &Poly) -> Result<bool, Split> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Ok(false);
        }
        let g = a.gcd(&self.modulus);
        if g.degree() == Some(0) {
            Ok(true)
        } else {
            Err(Split(g))
        }
    }

    /// Basis of the right nullspace of `m` over this ring, treating it as a field.
    pub fn nullspace(&self, m: &[Vec<Poly>]) -> Result<Vec<Vec<Poly>>, Split> {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut a: Vec<Vec<Poly>> = m.iter().map(|r| r.iter().map(|x| self.reduce(x)).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let mut piv = None;
            for i in r..rows {
                if self.classify(&a[i][c])? {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            a.swap(r, p);
            let inv = self.inverse(&a[r][c])?;
            a[r] = a[r].iter().map(|x| self.mul(x, &inv)).collect();
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    let row_r = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(&row_r) {
                        *x = self.reduce(&x.sub(&f.mul(y)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&fc| {
                let mut v = vec![Poly::zero(); cols];
                v[fc] = Poly::constant(q(1));
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = a[k][fc].neg();
                }
                v
            })
            .collect())
    }
}

/// Run `task` over `Q[x]/(g)`, restarting on every factor produced by a
/// split; returns one result per irreducible-enough factor.
pub fn split_solve<T>(g: &Poly, mut task: impl FnMut(&NumberField) -> Result<T, Split>) -> Vec<(NumberField, T)> {
    let mut work = vec![g.monic()];
    let mut out = Vec::new();
    while let Some(m) = work.pop() {
        let field = NumberField::new(m.clone());
        match task(&field) {
            Ok(t) => out.push((field, t)),
            Err(Split(h)) => {
                let h = h.monic();
                let other = m.divrem(&h).0.monic();
                work.push(other);
                work.push(h);
            }
        }
    }
    out.sort_by_key(|(f, _)| format!("{}", f.modulus));
    out
}
