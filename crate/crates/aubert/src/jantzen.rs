//! Splitting a datum into good, bad and ugly factors and gluing them back.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{
    classify_block, classify_point, GroupType, LanglandsDatum, LineClass, Rho, RhoLine, Segment,
    Sign, TemperedData,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorClass {
    Good,
    Bad(RhoLine),
    Ugly(RhoLine),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub class: FactorClass,
    pub datum: LanglandsDatum,
}

impl Factor {
    /// Checks that every piece of the datum lives where the class allows.
    pub fn validate(&self) -> Result<()> {
        self.datum.validate()?;
        let group = self.datum.group;
        let fits_seg = |s: &Segment| match &self.class {
            FactorClass::Good => classify_point(&s.rho, s.x, group) == LineClass::Good,
            FactorClass::Bad(l) | FactorClass::Ugly(l) => l.contains(&s.rho, s.x),
        };
        if !self.datum.segments().iter().all(fits_seg) {
            return Err(Error::validation("segment outside its factor's line"));
        }
        let blocks_ok = self.datum.temp.blocks().iter().all(|b| match &self.class {
            FactorClass::Good => b.sign != Sign::Unset,
            FactorClass::Bad(l) => {
                b.sign == Sign::Unset && l.contains(&b.rho, crate::HalfInt::from_twice(b.d as i64 - 1))
            }
            FactorClass::Ugly(_) => false,
        });
        if !blocks_ok {
            return Err(Error::validation("Jordan block outside its factor's line"));
        }
        Ok(())
    }
}

/// Decomposes a valid datum. The good factor is always present and first.
pub fn split(d: &LanglandsDatum) -> Result<Vec<Factor>> {
    d.validate()?;
    let group = d.group;
    let sigma = d.temp.sigma.clone();
    let mut good_segs = Vec::new();
    let mut good_temp = TemperedData::new(sigma.clone());
    let mut others: BTreeMap<(LineClass, RhoLine), (Vec<Segment>, TemperedData)> = BTreeMap::new();
    for s in d.segments() {
        let line = s.line();
        match classify_point(&s.rho, s.x, group) {
            LineClass::Good => good_segs.push(s.clone()),
            class => others
                .entry((class, line))
                .or_insert_with(|| (Vec::new(), TemperedData::new(sigma.clone())))
                .0
                .push(s.clone()),
        }
    }
    for b in d.temp.blocks() {
        match classify_block(&b.rho, b.d, group) {
            LineClass::Good => good_temp.add(&b.rho, b.d, b.mult, b.sign)?,
            LineClass::Bad => {
                let line = RhoLine::of_point(&b.rho, crate::HalfInt::from_twice(b.d as i64 - 1));
                others
                    .entry((LineClass::Bad, line))
                    .or_insert_with(|| (Vec::new(), TemperedData::new(sigma.clone())))
                    .1
                    .add(&b.rho, b.d, b.mult, b.sign)?
            }
            LineClass::Ugly => return Err(Error::validation("Jordan block on an ugly line")),
        }
    }
    let mut factors = vec![Factor {
        class: FactorClass::Good,
        datum: LanglandsDatum::new(group, good_segs, good_temp),
    }];
    for ((class, line), (segs, temp)) in others {
        let class = match class {
            LineClass::Bad => FactorClass::Bad(line),
            _ => FactorClass::Ugly(line),
        };
        factors.push(Factor { class, datum: LanglandsDatum::new(group, segs, temp) });
    }
    Ok(factors)
}

/// Inverse of [`split`].
pub fn merge(factors: &[Factor]) -> Result<LanglandsDatum> {
    let first = factors.first().ok_or_else(|| Error::internal("nothing to merge"))?;
    let group: GroupType = first.datum.group;
    let sigma = first.datum.temp.sigma.clone();
    let mut segments = Vec::new();
    let mut temp = TemperedData::new(sigma.clone());
    for f in factors {
        if f.datum.group != group || f.datum.temp.sigma != sigma {
            return Err(Error::internal("factors disagree on group or anchor"));
        }
        segments.extend(f.datum.segments().iter().cloned());
        for b in f.datum.temp.blocks() {
            temp.add(&b.rho, b.d, b.mult, b.sign)?;
        }
    }
    let d = LanglandsDatum::new(group, segments, temp);
    d.validate()?;
    Ok(d)
}

/// Moves every segment onto `target`, rewriting `Δ_{ρ∨}[x, y]` as `Δ_ρ[-y, -x]`.
pub fn re_base(segments: &[Segment], target: &Rho, dual: &Rho) -> Result<Vec<Segment>> {
    if target.dual_id() != dual.id() || target.is_self_dual() {
        return Err(Error::precondition(format!(
            "`{}` and `{}` are not a dual pair",
            target.id(),
            dual.id()
        )));
    }
    let mut out = segments
        .iter()
        .map(|s| {
            if s.rho == *target {
                Ok(s.clone())
            } else if s.rho == *dual {
                Ok(Segment::new(target.clone(), -s.y, -s.x))
            } else {
                Err(Error::precondition(format!("segment on `{}` is not on the pair", s.rho.id())))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}
