use std::collections::BTreeMap;
use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{dual, dual_with, enumerate_reps, EnumParams, ScanOrder};
use crate::arthur::{self, der_special, soc_special, to_aparam};
use crate::calculus::{
    candidate_points, derivative_at, derivative_delta01, derivative_z01, irreducible_at,
    irreducible_by_socles, socle_at, socle_z01, Point,
};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::jantzen::split;
use crate::model::{classify_point, LanglandsDatum, LineClass, Rho};

/// Function computing the dual; swappable so the harness can be tested
/// against deliberately broken engines.
pub type DualFn = dyn Fn(&LanglandsDatum) -> Result<LanglandsDatum> + Sync;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub datum: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.law, self.datum, self.detail)
    }
}

/// Per-law check and failure counts plus the first counterexample in
/// enumeration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub data: usize,
    pub checks: BTreeMap<String, u64>,
    pub failures: BTreeMap<String, u64>,
    /// Socle queries that left the domain of the `[0,1]` formulas.
    pub out_of_domain: u64,
    pub first: Option<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.values().all(|&n| n == 0)
    }

    pub fn failures_of(&self, law: &str) -> u64 {
        self.failures.get(law).copied().unwrap_or(0)
    }

    pub fn checks_of(&self, law: &str) -> u64 {
        self.checks.get(law).copied().unwrap_or(0)
    }

    /// Appends `other`, which comes later in enumeration order.
    pub fn absorb(&mut self, other: Report) {
        self.data += other.data;
        for (k, v) in other.checks {
            *self.checks.entry(k).or_default() += v;
        }
        for (k, v) in other.failures {
            *self.failures.entry(k).or_default() += v;
        }
        self.out_of_domain += other.out_of_domain;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    fn check(&mut self, law: &str, datum: &LanglandsDatum, outcome: std::result::Result<(), String>) {
        *self.checks.entry(law.to_string()).or_default() += 1;
        if let Err(detail) = outcome {
            *self.failures.entry(law.to_string()).or_default() += 1;
            if self.first.is_none() {
                self.first = Some(Violation { law: law.to_string(), datum: datum.to_string(), detail });
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "data: {}", self.data)?;
        for (law, n) in &self.checks {
            writeln!(f, "{law:<28} {n:>9} checks  {:>5} failures", self.failures_of(law))?;
        }
        writeln!(f, "z01 socles out of domain: {}", self.out_of_domain)?;
        match &self.first {
            Some(v) => write!(f, "first counterexample: {v}"),
            None => write!(f, "all checks passed"),
        }
    }
}

fn eq<T: PartialEq + fmt::Debug>(got: T, want: T) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("got {got:?}, want {want:?}"))
    }
}

fn show(d: &Result<LanglandsDatum>) -> String {
    match d {
        Ok(d) => d.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn same_datum(got: Result<LanglandsDatum>, want: &LanglandsDatum) -> std::result::Result<(), String> {
    match got {
        Ok(g) if g == *want => Ok(()),
        other => Err(format!("got {}, want {want}", show(&other))),
    }
}

fn self_dual_rhos(d: &LanglandsDatum) -> Vec<Rho> {
    let mut v: Vec<Rho> = d.segments().iter().map(|s| s.rho.clone()).chain(d.temp.rhos()).collect();
    v.sort();
    v.dedup();
    v.retain(Rho::is_self_dual);
    v
}

fn good_points(d: &LanglandsDatum, max: HalfInt) -> Vec<Point> {
    let mut out = Vec::new();
    for rho in self_dual_rhos(d) {
        for twice in 1..=max.twice() {
            let x = HalfInt::from_twice(twice);
            if classify_point(&rho, x, d.group) == LineClass::Good {
                out.push(Point::new(rho.clone(), x));
            }
        }
    }
    out
}

fn check_rank(r: &mut Report, d: &LanglandsDatum, hat: &LanglandsDatum) {
    let outcome = (|| -> Result<std::result::Result<(), String>> {
        let (a, b) = (split(d)?, split(hat)?);
        let shape = |fs: &[crate::jantzen::Factor]| -> Result<Vec<_>> {
            fs.iter().map(|f| Ok((f.class.clone(), f.datum.rank()?))).collect()
        };
        Ok(eq(shape(&b)?, shape(&a)?))
    })();
    r.check("rank", d, outcome.unwrap_or_else(|e| Err(e.to_string())));
}

/// All laws for one datum, using `dual_fn` wherever a dual is needed.
pub fn verify_datum_with(d: &LanglandsDatum, dual_fn: &DualFn) -> Report {
    let mut r = Report { data: 1, ..Report::default() };
    let hat = match dual_fn(d) {
        Ok(h) => h,
        Err(e) => {
            r.check("dual", d, Err(e.to_string()));
            return r;
        }
    };
    r.check("dual", d, Ok(()));
    r.check("involution", d, same_datum(dual_fn(&hat), d));
    check_rank(&mut r, d, &hat);

    for p in candidate_points(d) {
        let Ok(der) = derivative_at(d, &p) else {
            r.check("derivative", d, Err(format!("derivative at {p} failed")));
            continue;
        };
        let drop = der.k as i64 * p.rho.dim() as i64;
        r.check("rank", d, eq(der.value.rank().ok(), d.rank().ok().map(|n| n - drop)));
        r.check("reducedness", d, eq(derivative_at(&der.value, &p).map(|x| x.k).ok(), Some(0)));

        let q = p.conj();
        let outcome = match (dual_fn(&der.value), derivative_at(&hat, &q)) {
            (Ok(lhs), Ok(rhs)) => eq((rhs.k, rhs.value.to_string()), (der.k, lhs.to_string())),
            (lhs, rhs) => Err(format!("{} vs {:?}", show(&lhs), rhs.map(|x| x.k))),
        };
        r.check("commutation", d, outcome);

        r.check("inverse:S(k)D(k)", d, same_datum(socle_at(&der.value, &p, der.k), d));
        let outcome = match socle_at(d, &p, 1).and_then(|s| derivative_at(&s, &p)) {
            Ok(up) => eq((up.k, &up.value), (der.k + 1, &der.value)),
            Err(e) => Err(e.to_string()),
        };
        r.check("inverse:D(k+1)S(1)", d, outcome);
    }

    for rho in self_dual_rhos(d) {
        if let Ok(der) = derivative_delta01(d, &rho) {
            let drop = 2 * der.k as i64 * rho.dim() as i64;
            r.check("rank", d, eq(der.value.rank().ok(), d.rank().ok().map(|n| n - drop)));
            let outcome = match (dual_fn(&der.value), derivative_z01(&hat, &rho)) {
                (Ok(lhs), Ok(rhs)) => eq((rhs.k, rhs.value.to_string()), (der.k, lhs.to_string())),
                (lhs, rhs) => Err(format!("{} vs {:?}", show(&lhs), rhs.map(|x| x.k))),
            };
            r.check("commutation:D[0,-1]/Z[0,1]", d, outcome);
        }
        if let Ok(der) = derivative_z01(d, &rho) {
            let drop = 2 * der.k as i64 * rho.dim() as i64;
            r.check("rank", d, eq(der.value.rank().ok(), d.rank().ok().map(|n| n - drop)));
            let at_one = derivative_at(&der.value, &Point::new(rho.clone(), HalfInt::ONE)).map(|x| x.k).ok();
            r.check("reducedness", d, eq(at_one, Some(0)));
            match derivative_z01(&der.value, &rho) {
                Ok(again) => r.check("reducedness", d, eq(again.k, 0)),
                Err(Error::Precondition(_)) => {}
                Err(e) => r.check("reducedness", d, Err(e.to_string())),
            }
            r.check("inverse:z01 S(k)D(k)", d, same_datum(socle_z01(&der.value, &rho, der.k), d));
            match socle_z01(d, &rho, 1) {
                Ok(s) => {
                    let outcome = match derivative_z01(&s, &rho) {
                        Ok(up) => eq((up.k, &up.value), (der.k + 1, &der.value)),
                        Err(e) => Err(e.to_string()),
                    };
                    r.check("inverse:z01 D(k+1)S(1)", d, outcome);
                }
                Err(Error::Precondition(_)) => r.out_of_domain += 1,
                Err(e) => r.check("inverse:z01 D(k+1)S(1)", d, Err(e.to_string())),
            }
        }
    }

    for p in good_points(d, HalfInt::from_twice(7)) {
        check_arthur_pair(&mut r, d, &p);
        let verdicts = irreducible_at(d, &p).and_then(|a| Ok((a, irreducible_by_socles(d, &p)?)));
        let outcome = match verdicts {
            Ok((a, b)) => eq(a, b).map_err(|e| format!("at {p}: combinatorial vs socles: {e}")),
            Err(e) => Err(e.to_string()),
        };
        r.check("irreducibility", d, outcome);
        if d.is_tempered() {
            let outcome = to_aparam(0, &d.temp, p.x, &p.rho).and_then(|a| {
                Ok((irreducible_by_socles(d, &p)?, arthur::m_psi_minus(&a) == 0))
            });
            let outcome = match outcome {
                Ok((a, b)) => eq(a, b).map_err(|e| format!("at {p}: {e}")),
                Err(e) => Err(e.to_string()),
            };
            r.check("irreducibility:tempered", d, outcome);
        }
    }
    r
}

/// `S^{(k)} ∘ D^{(k)} = id` and `D ∘ S^{(1)}` raising the order by one, on the
/// A-parameter core read off at a good point, for every admissible `s`.
fn check_arthur_pair(r: &mut Report, d: &LanglandsDatum, p: &Point) {
    let t = d
        .segments_on(&p.rho)
        .filter(|(_, s)| s.x == p.x - HalfInt::ONE && s.y == -p.x)
        .count() as u32;
    let Ok(base) = to_aparam(t, &d.temp, p.x, &p.rho) else { return };
    let top = if p.x == HalfInt::HALF { 0 } else { base.m_prime() + 1 };
    for s in 0..=top {
        let a = arthur::AParamForm { s, ..base.clone() };
        if a.validate().is_err() {
            continue;
        }
        let outcome = (|| -> Result<std::result::Result<(), String>> {
            let (k, low) = der_special(&a)?;
            let mut back = low.clone();
            for _ in 0..k {
                back = soc_special(&back)?;
            }
            if back != a {
                return Ok(Err(format!("S^(k)D^(k) gave {back:?} from {a:?}")));
            }
            let (k1, low1) = der_special(&soc_special(&a)?)?;
            Ok(eq((k1, low1), (k + 1, low)))
        })();
        r.check("inverse:arthur", d, outcome.unwrap_or_else(|e| Err(e.to_string())));
    }
}

pub fn verify_datum(d: &LanglandsDatum) -> Report {
    let mut r = verify_datum_with(d, &default_dual);
    let outcome = match (dual(d), dual_with(d, ScanOrder::Reversed)) {
        (Ok((a, trace)), Ok((b, _))) => eq(&a, &b).and_then(|_| trace.replay().map_err(|e| e.to_string())),
        (a, b) => Err(format!("{:?} / {:?}", a.map(|x| x.0.to_string()), b.map(|x| x.0.to_string()))),
    };
    r.check("scan-order+replay", d, outcome);
    r
}

fn default_dual(d: &LanglandsDatum) -> Result<LanglandsDatum> {
    dual(d).map(|(h, _)| h)
}

/// Runs [`verify_datum`] over `data`, in parallel when asked and available.
/// The merged report does not depend on the schedule.
pub fn verify_data(data: &[LanglandsDatum], parallel: bool) -> Report {
    run(data, parallel, &verify_datum)
}

/// As [`verify_data`] with a substitute dual.
pub fn verify_data_with(data: &[LanglandsDatum], parallel: bool, dual_fn: &DualFn) -> Report {
    run(data, parallel, &|d| verify_datum_with(d, dual_fn))
}

fn run(data: &[LanglandsDatum], parallel: bool, f: &(dyn Fn(&LanglandsDatum) -> Report + Sync)) -> Report {
    let parts: Vec<Report> = if parallel {
        par_map(data, f)
    } else {
        data.iter().map(f).collect()
    };
    let mut total = Report::default();
    for p in parts {
        total.absorb(p);
    }
    total
}

#[cfg(feature = "parallel")]
fn par_map(data: &[LanglandsDatum], f: &(dyn Fn(&LanglandsDatum) -> Report + Sync)) -> Vec<Report> {
    data.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map(data: &[LanglandsDatum], f: &(dyn Fn(&LanglandsDatum) -> Report + Sync)) -> Vec<Report> {
    data.iter().map(f).collect()
}

/// Enumerates and checks every law.
pub fn verify(params: &EnumParams, parallel: bool) -> Result<Report> {
    Ok(verify_data(&enumerate_reps(params)?, parallel))
}
