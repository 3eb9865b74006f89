//! The Zelevinsky–Aubert dual, computed factor by factor by peeling off
//! highest derivatives and rebuilding with socles on the dual side.

mod enumerate;
mod verify;

use std::fmt;

pub use enumerate::{enumerate_reps, EnumParams};
pub use verify::{verify, verify_data, verify_data_with, verify_datum, verify_datum_with, DualFn, Report, Violation};

use crate::arthur;
use crate::calculus::{
    candidate_points, derivative_at, derivative_delta01, socle_at, socle_z01, Point,
};
use crate::error::{Error, Result};
use crate::jantzen::{merge, split, Factor, FactorClass};
use crate::model::{LanglandsDatum, Rho};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Derive(Point),
    DeriveDelta01(Rho),
    Base,
    Socle(Point),
    SocleZ01(Rho),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub op: Op,
    pub k: u32,
    pub before: LanglandsDatum,
    pub after: LanglandsDatum,
}

fn rho_suffix(rho: &Rho) -> String {
    if rho.is_default() {
        String::new()
    } else {
        format!("@{}", rho.id())
    }
}

impl TraceStep {
    /// Short operator name such as `D_{|.|^-2}^(1)` or `S_{Z[0,1]}^(2)`.
    pub fn name(&self) -> String {
        match &self.op {
            Op::Derive(p) => format!("D_{{{p}}}^({})", self.k),
            Op::Socle(p) => format!("S_{{{p}}}^({})", self.k),
            Op::DeriveDelta01(r) => format!("D_{{D[0,-1]{}}}^({})", rho_suffix(r), self.k),
            Op::SocleZ01(r) => format!("S_{{Z[0,1]{}}}^({})", rho_suffix(r), self.k),
            Op::Base => "base".to_string(),
        }
    }

    pub fn is_derivative(&self) -> bool {
        matches!(self.op, Op::Derive(_) | Op::DeriveDelta01(_))
    }

    pub fn is_socle(&self) -> bool {
        matches!(self.op, Op::Socle(_) | Op::SocleZ01(_))
    }
}

/// Derivative steps top-down, the tempered base cases, then socle steps
/// bottom-up. Factors follow each other in split order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualTrace {
    pub steps: Vec<TraceStep>,
}

impl DualTrace {
    pub fn names(&self) -> Vec<String> {
        self.steps.iter().map(TraceStep::name).collect()
    }

    /// Re-applies every step to its recorded input and checks the output.
    pub fn replay(&self) -> Result<()> {
        for step in &self.steps {
            let got = match &step.op {
                Op::Derive(p) => {
                    let r = derivative_at(&step.before, p)?;
                    (r.k == step.k).then_some(r.value)
                }
                Op::DeriveDelta01(rho) => {
                    let r = derivative_delta01(&step.before, rho)?;
                    (r.k == step.k).then_some(r.value)
                }
                Op::Socle(p) => Some(socle_at(&step.before, p, step.k)?),
                Op::SocleZ01(rho) => Some(socle_z01(&step.before, rho, step.k)?),
                Op::Base => Some(step.after.clone()),
            };
            if got.as_ref() != Some(&step.after) {
                return Err(Error::internal(format!("trace step {} does not replay", step.name())));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DualTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.steps.iter().map(|s| s.name().len()).max().unwrap_or(0);
        for s in &self.steps {
            writeln!(f, "{:<width$}  {}  ->  {}", s.name(), s.before, s.after)?;
        }
        Ok(())
    }
}

/// Order in which candidate points are probed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanOrder {
    #[default]
    Standard,
    Reversed,
}

/// First point (in scan order) with a nonzero highest derivative.
pub fn find_candidate(d: &LanglandsDatum) -> Result<Option<(Point, u32)>> {
    find_candidate_in(d, ScanOrder::Standard)
}

fn find_candidate_in(d: &LanglandsDatum, order: ScanOrder) -> Result<Option<(Point, u32)>> {
    let mut points = candidate_points(d);
    if order == ScanOrder::Reversed {
        points.reverse();
    }
    for p in points {
        let k = derivative_at(d, &p)?.k;
        if k > 0 {
            return Ok(Some((p, k)));
        }
    }
    Ok(None)
}

pub fn dual(d: &LanglandsDatum) -> Result<(LanglandsDatum, DualTrace)> {
    dual_with(d, ScanOrder::Standard)
}

pub fn dual_with(d: &LanglandsDatum, order: ScanOrder) -> Result<(LanglandsDatum, DualTrace)> {
    d.validate()?;
    let factors = split(d)?;
    let mut trace = DualTrace::default();
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        let datum = dual_rec(&f.class, &f.datum, order, &mut trace.steps)?;
        out.push(Factor { class: f.class, datum });
    }
    Ok((merge(&out)?, trace))
}

/// Dual of a single Jantzen factor.
pub fn dual_factor(f: &Factor) -> Result<LanglandsDatum> {
    let mut steps = Vec::new();
    dual_rec(&f.class, &f.datum, ScanOrder::Standard, &mut steps)
}

fn check_descent(before: &LanglandsDatum, after: &LanglandsDatum) -> Result<()> {
    if after.rank()? >= before.rank()? {
        return Err(Error::internal(format!("rank did not drop from {before} to {after}")));
    }
    Ok(())
}

fn dual_rec(
    class: &FactorClass,
    d: &LanglandsDatum,
    order: ScanOrder,
    steps: &mut Vec<TraceStep>,
) -> Result<LanglandsDatum> {
    if let Some((p, k)) = find_candidate_in(d, order)? {
        let lower = derivative_at(d, &p)?.value;
        check_descent(d, &lower)?;
        steps.push(TraceStep { op: Op::Derive(p.clone()), k, before: d.clone(), after: lower.clone() });
        let lower_dual = dual_rec(class, &lower, order, steps)?;
        let q = p.conj();
        let up = socle_at(&lower_dual, &q, k).map_err(inside)?;
        steps.push(TraceStep { op: Op::Socle(q), k, before: lower_dual, after: up.clone() });
        return Ok(up);
    }
    if !d.is_tempered() {
        let mut rhos: Vec<Rho> = d.segments().iter().map(|s| s.rho.clone()).collect();
        rhos.dedup();
        rhos.sort();
        rhos.dedup();
        for rho in rhos.into_iter().filter(Rho::is_self_dual) {
            let r = match derivative_delta01(d, &rho) {
                Ok(r) if r.k > 0 => r,
                _ => continue,
            };
            check_descent(d, &r.value)?;
            steps.push(TraceStep {
                op: Op::DeriveDelta01(rho.clone()),
                k: r.k,
                before: d.clone(),
                after: r.value.clone(),
            });
            let lower_dual = dual_rec(class, &r.value, order, steps)?;
            let up = socle_z01(&lower_dual, &rho, r.k).map_err(inside)?;
            steps.push(TraceStep { op: Op::SocleZ01(rho), k: r.k, before: lower_dual, after: up.clone() });
            return Ok(up);
        }
        return Err(Error::internal(format!(
            "{d} is reduced away from zero but has no Δ[0,-1]-derivative"
        )));
    }
    let out = match class {
        FactorClass::Good => {
            let (segments, temp) = arthur::dual_tempered(&d.temp, d.group).map_err(inside)?;
            LanglandsDatum::new(d.group, segments, temp)
        }
        FactorClass::Bad(_) | FactorClass::Ugly(_) => d.clone(),
    };
    out.validate().map_err(inside)?;
    steps.push(TraceStep { op: Op::Base, k: 0, before: d.clone(), after: out.clone() });
    Ok(out)
}

/// Failures on the dual side mean the recursion produced something the
/// formulas do not accept: an internal inconsistency, not bad input.
fn inside(e: Error) -> Error {
    match e {
        Error::Internal(_) => e,
        other => Error::internal(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroupType;
    use crate::parse::{parse_rep, Decls};

    fn sp(s: &str) -> LanglandsDatum {
        parse_rep(s, &Decls::standard(GroupType::SpEven)).unwrap()
    }

    #[test]
    fn candidate_scan_order() {
        let (p, k) = find_candidate(&sp("L(D[-2,-2];pi(3+))")).unwrap().unwrap();
        assert_eq!((p.to_string(), k), ("|.|^-2".to_string(), 1));
        assert!(find_candidate(&sp("L(D[0,-2],D[0,-1];pi(3+))")).unwrap().is_none());
        assert!(find_candidate(&sp("pi(1+)")).unwrap().is_none());
    }

    #[test]
    fn small_duals() {
        assert_eq!(dual(&sp("pi(3+)")).unwrap().0.to_string(), "L(D[-1,-1];pi(1+))");
        assert_eq!(dual(&sp("pi(1+,1+,1+)")).unwrap().0.to_string(), "pi(1+,1+,1+)");
        assert_eq!(dual(&sp("pi(1+)")).unwrap().0.to_string(), "pi(1+)");
    }

    #[test]
    fn trace_replays() {
        let (_, trace) = dual(&sp("pi(1+,1+,3+,5-,5-)")).unwrap();
        trace.replay().unwrap();
        assert_eq!(trace.steps.iter().filter(|s| s.is_derivative()).count(), 4);
    }
}
