//! Truncated Dirichlet series with exact coefficients, and the coefficientwise
//! identities linking the orthogonal counts, Hermitian representation numbers
//! and right ideals of the quaternion order.

use crate::arith::coprime_to_all;
use crate::error::{Error, Result};
use crate::hermitian::ClassList;
use crate::linalg::Rat;
use crate::orthogonal::GramData;
use crate::quad_field::FieldParams;
use crate::quaternion::ClassTypeData;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Coefficients `c(1..=n_max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCoeffs {
    pub n_max: usize,
    pub coeffs: Vec<Rat>,
    pub label: String,
}

/// A finite set of rational primes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn new(primes: &[u64]) -> Result<Self> {
        if let Some(p) = primes.iter().find(|&&p| !crate::arith::is_prime(p)) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        let mut primes = primes.to_vec();
        primes.sort_unstable();
        primes.dedup();
        Ok(PrimeSet { primes })
    }

    /// Primes dividing `2 ell m`.
    pub fn default_for(m: i64, ell: i64) -> Self {
        PrimeSet {
            primes: crate::arith::prime_factors((2 * ell * m) as u64),
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_good(&self, n: u64) -> bool {
        coprime_to_all(n, &self.primes)
    }
}

impl DirichletCoeffs {
    pub fn from_fn(label: &str, n_max: usize, f: impl Fn(u64) -> Rat) -> Self {
        DirichletCoeffs {
            n_max,
            coeffs: (1..=n_max as u64).map(f).collect(),
            label: label.to_string(),
        }
    }

    pub fn riemann(n_max: usize) -> Self {
        Self::from_fn("zeta", n_max, |_| Rat::one())
    }

    pub fn unit(n_max: usize) -> Self {
        Self::from_fn("one", n_max, |n| if n == 1 { Rat::one() } else { Rat::zero() })
    }

    pub fn dedekind(fp: &FieldParams, n_max: usize) -> Self {
        Self::from_fn("zeta_K", n_max, |n| Rat::from_integer(fp.dedekind_coeff(n) as i128))
    }

    pub fn get(&self, n: u64) -> Rat {
        self.coeffs[n as usize - 1]
    }

    pub fn convolve(&self, other: &DirichletCoeffs) -> Result<DirichletCoeffs> {
        if self.n_max != other.n_max {
            return Err(Error::LengthMismatch(self.n_max, other.n_max));
        }
        let n_max = self.n_max;
        let mut coeffs = vec![Rat::zero(); n_max];
        for d in 1..=n_max {
            let a = self.coeffs[d - 1];
            if a.is_zero() {
                continue;
            }
            for e in 1..=n_max / d {
                coeffs[d * e - 1] += a * other.coeffs[e - 1];
            }
        }
        Ok(DirichletCoeffs {
            n_max,
            coeffs,
            label: format!("{}*{}", self.label, other.label),
        })
    }

    /// Zero every coefficient whose index shares a factor with `p`.
    pub fn restrict(&self, p: &PrimeSet) -> DirichletCoeffs {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if p.is_good(i as u64 + 1) { c } else { Rat::zero() })
            .collect();
        DirichletCoeffs {
            n_max: self.n_max,
            coeffs,
            label: self.label.clone(),
        }
    }
}

/// `zeta_xi` for every Hermitian class at once, indexed like `classes.all_reps`;
/// non-support classes get the zero series.
pub fn zeta_xi_all(gram: &GramData, classes: &ClassList, p: &PrimeSet, n_max: usize) -> Vec<DirichletCoeffs> {
    let per_d: Vec<Vec<u64>> = (1..=n_max as i64)
        .into_par_iter()
        .map(|d| {
            if p.is_good(d as u64) {
                gram.n_counts_direct(d, classes)
            } else {
                vec![0; classes.len()]
            }
        })
        .collect();
    (0..classes.len())
        .map(|i| {
            DirichletCoeffs::from_fn(&format!("zeta_xi[{i}]"), n_max, |d| {
                Rat::from_integer(per_d[d as usize - 1][i] as i128)
            })
        })
        .collect()
}

pub fn zeta_xi(xi_class: usize, gram: &GramData, classes: &ClassList, p: &PrimeSet, n_max: usize) -> Result<DirichletCoeffs> {
    if !classes.support.contains(&xi_class) {
        return Err(Error::NotInSupport);
    }
    Ok(zeta_xi_all(gram, classes, p, n_max).swap_remove(xi_class))
}

/// `zeta_K * zeta_xi`, restricted to `p`.
pub fn zeta_hat_from(xi: &DirichletCoeffs, fp: &FieldParams, p: &PrimeSet) -> DirichletCoeffs {
    let zk = DirichletCoeffs::dedekind(fp, xi.n_max).restrict(p);
    let mut out = zk.convolve(xi).expect("same length").restrict(p);
    out.label = xi.label.replace("zeta_xi", "zeta_hat");
    out
}

pub fn zeta_hat(xi_class: usize, gram: &GramData, classes: &ClassList, p: &PrimeSet, n_max: usize) -> Result<DirichletCoeffs> {
    let xi = zeta_xi(xi_class, gram, classes, p, n_max)?;
    Ok(zeta_hat_from(&xi, &classes.fp, p))
}

/// One `(class, d)` comparison of the hat identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HatRecord {
    /// Index into the support classes.
    pub class: usize,
    pub d: u64,
    pub unit_order: u64,
    pub zeta_hat: i128,
    pub q: u64,
    pub ideal_count: u64,
}

impl HatRecord {
    pub fn representation_ok(&self) -> bool {
        self.unit_order as i128 * self.zeta_hat == self.q as i128
    }

    pub fn ideal_ok(&self) -> bool {
        self.zeta_hat == self.ideal_count as i128
    }
}

/// `zeta_hat` of every support class, in support order.
pub fn zeta_hats(classes: &ClassList, p: &PrimeSet, n_max: usize) -> Vec<DirichletCoeffs> {
    let gram = GramData::new(classes.fp);
    let all = zeta_xi_all(&gram, classes, p, n_max);
    classes
        .support
        .iter()
        .map(|&i| zeta_hat_from(&all[i], &classes.fp, p))
        .collect()
}

/// Right ideals of norm `d` per class, for every good `d <= n_max`.
pub fn ideal_counts(data: &ClassTypeData, classes: &ClassList, p: &PrimeSet, n_max: usize) -> Vec<Vec<u64>> {
    (1..=n_max as u64)
        .map(|d| {
            let mut counts = vec![0u64; data.h1()];
            if p.is_good(d) && data.bad_primes.iter().all(|&b| d % b != 0) {
                for (_, c) in data.ideals_of_norm(d, classes).expect("good norm") {
                    counts[c] += 1;
                }
            }
            counts
        })
        .collect()
}

/// Both hat identities for every support class and good `d <= n_max`.
pub fn verify_hat_identities(classes: &ClassList, data: &ClassTypeData, p: &PrimeSet, n_max: usize) -> Vec<HatRecord> {
    let hats = zeta_hats(classes, p, n_max);
    let ideals = ideal_counts(data, classes, p, n_max);
    let mut out = Vec::new();
    for (k, &i) in classes.support.iter().enumerate() {
        let f = &classes.all_reps[i];
        for d in (1..=n_max as u64).filter(|&d| p.is_good(d)) {
            out.push(HatRecord {
                class: k,
                d,
                unit_order: classes.unit_orders[i] as u64,
                zeta_hat: hats[k].get(d).to_integer(),
                q: f.all_reps_count(d as i64) as u64,
                ideal_count: ideals[d as usize - 1][k],
            });
        }
    }
    out
}
