//! Configuration, shared run context and the per-check record generators
//! behind the command-line reports.

use crate::arith::{is_squarefree, primes_up_to};
use crate::error::{Error, Result};
use crate::hecke::{self, EigenSystem};
use crate::hermitian::ClassList;
use crate::orthogonal::{check_maximal, stabiliser_conditions, GramData, MaximalityVerdict};
use crate::quad_field::FieldParams;
use crate::quaternion::ClassTypeData;
use crate::zeta::{ideal_counts, zeta_hats, DirichletCoeffs, PrimeSet};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub m: i64,
    pub ell: i64,
    pub n_max: usize,
    pub bad_primes: Option<Vec<u64>>,
    pub experimental: bool,
}

/// Outcome of validating a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn new(m: i64, ell: i64) -> Self {
        RunConfig {
            m,
            ell,
            n_max: 100,
            bad_primes: None,
            experimental: false,
        }
    }

    /// Reject unsupported fields and parameters outside the maximality
    /// conditions unless `experimental` is set.
    pub fn validate(&self) -> Result<Validation> {
        if self.m < 1 || !is_squarefree(self.m as u64) {
            return Err(Error::InvalidConfig(format!("m = {} is not a positive square-free integer", self.m)));
        }
        let fp = FieldParams::new(self.m)?;
        if self.ell < 1 {
            return Err(Error::InvalidConfig(format!("ell = {} must be positive", self.ell)));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidConfig("nmax must be positive".into()));
        }
        if let Some(bad) = &self.bad_primes {
            PrimeSet::new(bad)?;
        }
        let mut warnings = Vec::new();
        if fp.experimental() {
            warnings.push(format!("m = {} is outside the Euclidean fields with m != 2", self.m));
        }
        if !stabiliser_conditions(self.m, self.ell) {
            warnings.push(format!(
                "(m, ell) = ({}, {}) violates the maximality conditions (ell square-free, coprime to m, and ell = 1 mod 4 when m = 1 mod 4; m != 2 mod 4)",
                self.m, self.ell
            ));
        }
        if !warnings.is_empty() && !self.experimental {
            return Err(Error::InvalidConfig(format!("{}; pass --experimental to proceed", warnings.join("; "))));
        }
        Ok(Validation { warnings })
    }

    pub fn prime_set(&self) -> PrimeSet {
        match &self.bad_primes {
            Some(b) => PrimeSet::new(b).expect("validated"),
            None => PrimeSet::default_for(self.m, self.ell),
        }
    }

    pub fn is_experimental(&self) -> bool {
        FieldParams::new(self.m).map(|f| f.experimental()).unwrap_or(true) || !stabiliser_conditions(self.m, self.ell)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    REqN,
    PhiBijective,
    ZetaHat,
    Latimer,
    Norms,
    SubMain,
    PartialZeta,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::REqN,
        Check::PhiBijective,
        Check::ZetaHat,
        Check::Latimer,
        Check::Norms,
        Check::SubMain,
        Check::PartialZeta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::REqN => "r-eq-n",
            Check::PhiBijective => "phi-bijective",
            Check::ZetaHat => "zeta-hat",
            Check::Latimer => "latimer",
            Check::Norms => "norms",
            Check::SubMain => "sub-main",
            Check::PartialZeta => "partial-zeta",
        }
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown check {s}")))
    }
}

/// Parse a comma list of checks; `all` selects every check.
pub fn parse_checks(s: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Record {
    pub fn new(check: &str, params: &[(&str, String)], lhs: impl ToString, rhs: impl ToString, pass: bool) -> Self {
        Record {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        }
    }

    pub fn eq(check: &str, params: &[(&str, String)], lhs: impl ToString, rhs: impl ToString) -> Self {
        let (l, r) = (lhs.to_string(), rhs.to_string());
        let pass = l == r;
        Record::new(check, params, l, r, pass)
    }
}

/// Lazily built data shared by the checks of one configuration.
pub struct Context {
    pub config: RunConfig,
    pub fp: FieldParams,
    pub primes: PrimeSet,
    pub classes: ClassList,
    pub gram: GramData,
    data: Option<ClassTypeData>,
    hats: Option<Vec<DirichletCoeffs>>,
    ideal_counts: Option<Vec<Vec<u64>>>,
}

impl Context {
    pub fn new(config: RunConfig) -> Result<Self> {
        let fp = FieldParams::new(config.m)?;
        let primes = config.prime_set();
        let classes = ClassList::enumerate(config.ell, fp)?;
        Ok(Context {
            gram: GramData::new(fp),
            config,
            fp,
            primes,
            classes,
            data: None,
            hats: None,
            ideal_counts: None,
        })
    }

    pub fn data(&mut self) -> &ClassTypeData {
        if self.data.is_none() {
            self.data = Some(ClassTypeData::build(&self.classes, self.primes.primes()));
        }
        self.data.as_ref().expect("built")
    }

    pub fn hats(&mut self) -> &[DirichletCoeffs] {
        if self.hats.is_none() {
            self.hats = Some(zeta_hats(&self.classes, &self.primes, self.config.n_max));
        }
        self.hats.as_ref().expect("built")
    }

    pub fn ideal_counts(&mut self) -> &[Vec<u64>] {
        if self.ideal_counts.is_none() {
            self.data();
            let data = self.data.as_ref().expect("built");
            self.ideal_counts = Some(ideal_counts(data, &self.classes, &self.primes, self.config.n_max));
        }
        self.ideal_counts.as_ref().expect("built")
    }

    fn good(&self) -> Vec<u64> {
        (1..=self.config.n_max as u64).filter(|&d| self.primes.is_good(d)).collect()
    }

    /// Good primes up to 50 used to build the eigen-system.
    pub fn hecke_primes(&self) -> Vec<u64> {
        primes_up_to(50).into_iter().filter(|&p| self.primes.is_good(p)).collect()
    }

    pub fn eigensystem(&mut self) -> Result<EigenSystem> {
        let primes = self.hecke_primes();
        hecke::eigensystem(self.data(), &primes)
    }

    pub fn run(&mut self, check: Check) -> Result<Vec<Record>> {
        Ok(match check {
            Check::REqN => self.r_eq_n(),
            Check::PhiBijective => self.phi_bijective(),
            Check::ZetaHat => self.zeta_hat(),
            Check::Latimer => self.latimer(),
            Check::Norms => self.norms(),
            Check::SubMain => self.sub_main()?,
            Check::PartialZeta => self.partial_zeta(),
        })
    }

    fn class_param(&self, i: usize) -> (&'static str, String) {
        ("class", i.to_string())
    }

    fn r_eq_n(&self) -> Vec<Record> {
        (1..=self.config.n_max as i64)
            .into_par_iter()
            .flat_map_iter(|d| {
                let n = self.gram.n_counts_direct(d, &self.classes);
                let r = self.classes.r_counts(d);
                self.classes
                    .support
                    .iter()
                    .map(|&i| Record::eq("r-eq-n", &[self.class_param(i), ("d", d.to_string())], n[i], r[i]))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn phi_bijective(&self) -> Vec<Record> {
        let cl = &self.classes;
        let mut out = Vec::new();
        for d in self.good() {
            let d = d as i64;
            let r = cl.r_counts(d);
            let mut total = crate::linalg::Rat::from_integer(0);
            for (i, f) in cl.all_reps.iter().enumerate() {
                let reps = f.primitive_reps(d);
                let e = cl.unit_orders[i];
                let ratio = crate::linalg::Rat::new(reps.len() as i128, e as i128);
                total += ratio;
                let params = [self.class_param(i), ("d", d.to_string())];
                out.push(Record::eq("phi-bijective/count", &params, ratio, r[i]));
                // Every fiber of phi has exactly e elements and lands in class i.
                let mut fibers: BTreeMap<(i64, i64), usize> = BTreeMap::new();
                let mut in_class = true;
                for (u, v) in reps {
                    let h = f.phi(u, v, d).expect("primitive representation");
                    let g = cl.residue_form(h, d).expect("h lies in R(d, -ell)");
                    in_class &= cl.classify(&g) == Some(i);
                    *fibers.entry((h.x, h.y)).or_default() += 1;
                }
                let uniform = fibers.values().all(|&c| c == e);
                out.push(Record::new(
                    "phi-bijective/fibers",
                    &params,
                    format!("{} fibers of size {}", fibers.len(), if uniform { e.to_string() } else { "mixed".into() }),
                    format!("{} fibers of size {e}", r[i]),
                    uniform && in_class && fibers.len() as u64 == r[i],
                ));
            }
            out.push(Record::eq("phi-bijective/total", &[("d", d.to_string())], total, cl.r_total(d)));
        }
        out
    }

    fn zeta_hat(&mut self) -> Vec<Record> {
        let good = self.good();
        let hats = self.hats().to_vec();
        let counts = self.ideal_counts().to_vec();
        let cl = &self.classes;
        let mut out = Vec::new();
        for (k, &i) in cl.support.iter().enumerate() {
            let f = &cl.all_reps[i];
            let e = cl.unit_orders[i] as i128;
            for &d in &good {
                let params = [("class", k.to_string()), ("d", d.to_string())];
                let z = hats[k].get(d).to_integer();
                out.push(Record::eq("zeta-hat/representations", &params, e * z, f.all_reps_count(d as i64)));
                out.push(Record::eq("zeta-hat/ideals", &params, z, counts[d as usize - 1][k]));
            }
        }
        out
    }

    fn latimer(&mut self) -> Vec<Record> {
        let good = self.good();
        let classes = self.classes.clone();
        let data = self.data().clone();
        let alg = data.alg;
        let mut out = Vec::new();
        for (k, &i) in data.hermitian_index.iter().enumerate() {
            let f = &classes.all_reps[i];
            let left = alg.latimer_ideal(f);
            let params = [("class", k.to_string())];
            out.push(Record::eq("latimer/invertible", &params, left.is_invertible(&alg), true));
            out.push(Record::eq(
                "latimer/norm",
                &params,
                left.latimer_norm(&alg).map(|n| n.to_string()).unwrap_or_else(|e| e.to_string()),
                f.a,
            ));
            out.push(Record::eq(
                "latimer/index",
                &params,
                left.module_index(&alg).map(|n| n.to_string()).unwrap_or_else(|e| e.to_string()),
                f.a * f.a,
            ));
        }
        let mut distinct = 0;
        for j in 0..data.h1() {
            let hits = (0..data.h1())
                .filter(|&k| crate::quaternion::class_transport(&data.ideal_class_reps[k], &data.ideal_class_reps[j], &alg).is_some())
                .count();
            distinct += usize::from(hits == 1);
        }
        out.push(Record::eq("latimer/injective", &[], distinct, data.h1()));
        let mut classified = 0usize;
        let mut total = 0usize;
        let mut agree = 0usize;
        let mut hit = vec![false; data.h1()];
        for &d in &good {
            for n in data.ideals_of_norm_detailed(d, &classes).expect("good d") {
                total += 1;
                if let Some(c) = n.class {
                    classified += 1;
                    hit[c] = true;
                    agree += usize::from(n.form_class == Some(c));
                }
            }
        }
        let nmax = [("nmax", self.config.n_max.to_string())];
        out.push(Record::eq("latimer/surjective", &nmax, classified, total));
        out.push(Record::eq("latimer/classes-hit", &nmax, hit.iter().filter(|&&h| h).count(), data.h1()));
        out.push(Record::eq("latimer/respects-equivalence", &nmax, agree, total));
        out
    }

    fn norms(&mut self) -> Vec<Record> {
        let good = self.good();
        let classes = self.classes.clone();
        let data = self.data().clone();
        let alg = data.alg;
        let mut out = Vec::new();
        for &d in &good {
            let ideals = data.ideals_of_norm(d, &classes).expect("good d");
            let (mut index_ok, mut conj_ok, mut latimer_ok) = (0usize, 0usize, 0usize);
            for (ideal, _) in &ideals {
                let left = ideal.conj(&alg);
                let n = left.latimer_norm(&alg).ok().and_then(|n| n.to_integer().to_i128());
                let idx = ideal.module_index(&alg).ok();
                index_ok += usize::from(matches!((n, idx), (Some(n), Some(i)) if n * n == i));
                conj_ok += usize::from(left.nrd(&alg) == ideal.nrd(&alg) && left.covolume() == ideal.covolume());
                latimer_ok += usize::from(n == Some(d as i128));
            }
            let params = [("d", d.to_string())];
            let total = ideals.len();
            out.push(Record::eq("norms/square-is-index", &params, index_ok, total));
            out.push(Record::eq("norms/conjugation", &params, conj_ok, total));
            out.push(Record::eq("norms/latimer-equals-d", &params, latimer_ok, total));
        }
        out
    }

    fn sub_main(&mut self) -> Result<Vec<Record>> {
        let system = self.eigensystem()?;
        let hats = self.hats().to_vec();
        let counts = self.ideal_counts().to_vec();
        let data = self.data().clone();
        let primes = self.primes.clone();
        let mut out = vec![Record::new(
            "sub-main/dimension",
            &[("h2", system.h2.to_string())],
            system.dimension,
            system.h2,
            true,
        )];
        for (j, f) in system.forms.iter().enumerate() {
            out.push(Record::eq(
                "sub-main/real-eigenvalues",
                &[("form", j.to_string()), ("modulus", f.field.modulus.to_string())],
                f.real,
                true,
            ));
        }
        let recs = hecke::verify_sub_main(&system, &data, &hats, &counts, &primes, true);
        out.extend(recs.into_iter().map(|r| {
            let mut params = vec![("form", r.form.to_string()), ("modulus", r.modulus.clone()), ("d", r.d.to_string())];
            if let Some(b) = r.brandt_agrees {
                params.push(("brandt", b.to_string()));
            }
            Record::new("sub-main", &params, &r.lhs, &r.rhs, r.pass)
        }));
        Ok(out)
    }

    fn partial_zeta(&mut self) -> Vec<Record> {
        let hats = self.hats().to_vec();
        let n_max = self.config.n_max;
        let classes = self.classes.clone();
        let primes = self.primes.clone();
        let data = self.data().clone();
        hecke::verify_partial_zeta(&data, &classes, &hats, &primes, n_max)
            .into_iter()
            .map(|r| {
                Record::new(
                    "partial-zeta",
                    &[("type", r.type_index.to_string()), ("d", r.d.to_string())],
                    r.zeta_sum,
                    r.ideal_count,
                    r.pass,
                )
            })
            .collect()
    }
}

/// Maximality verdicts for every `(m, ell)` with `m` in `m_list` and `ell <= ell_max`.
pub fn scan_maximality(m_list: &[i64], ell_max: i64) -> Result<Vec<MaximalityVerdict>> {
    let mut ms = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut out = Vec::new();
    for m in ms {
        let g = GramData::new(FieldParams::new(m)?);
        out.extend((1..=ell_max).map(|ell| check_maximal(ell, &g)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rules() {
        assert!(RunConfig::new(1, 1).validate().is_ok());
        assert!(RunConfig::new(1, 4).validate().is_err());
        assert!(RunConfig::new(1, 3).validate().is_err());
        let mut c = RunConfig::new(1, 3);
        c.experimental = true;
        assert_eq!(c.validate().unwrap().warnings.len(), 1);
        assert!(RunConfig::new(2, 1).validate().is_err());
        assert!(RunConfig::new(5, 1).validate().is_err());
        assert!(RunConfig::new(4, 1).validate().is_err());
    }

    #[test]
    fn check_names_round_trip() {
        assert_eq!(parse_checks("all").unwrap(), Check::ALL.to_vec());
        assert_eq!(parse_checks("sub-main,r-eq-n").unwrap(), vec![Check::REqN, Check::SubMain]);
        assert!(parse_checks("nope").is_err());
    }

    #[test]
    fn all_checks_pass_small() {
        let mut c = RunConfig::new(1, 5);
        c.n_max = 20;
        let mut ctx = Context::new(c).unwrap();
        for check in Check::ALL {
            for r in ctx.run(check).unwrap() {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn scan_grid_shape() {
        let v = scan_maximality(&[3, 1, 3], 4).unwrap();
        assert_eq!(v.len(), 8);
        assert_eq!(v[0].m, 1);
        assert!(scan_maximality(&[], 5).unwrap().is_empty());
    }
}
