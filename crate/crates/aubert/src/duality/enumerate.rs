use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::model::{
    classify_line, ExpClass, GroupType, LanglandsDatum, LineClass, Rho, RhoLine, Segment, Sigma,
    Sign, TemperedData,
};

const MAX_RANK: u32 = 10;
const MAX_COUNT: usize = 5_000_000;

/// Bounds for exhaustive generation.
#[derive(Clone, Debug)]
pub struct EnumParams {
    pub group: GroupType,
    pub lines: Vec<RhoLine>,
    pub max_rank: u32,
    pub max_block_d: u32,
    /// Largest `|x|`, `|y|` for segment endpoints; `(max_block_d + 1) / 2` if unset.
    pub max_exp: Option<HalfInt>,
    pub sigma: Option<Sigma>,
}

impl EnumParams {
    /// The good line through the trivial character: integral for `Sp`,
    /// half-integral for odd `SO`.
    pub fn trivial_good(group: GroupType, max_rank: u32, max_block_d: u32) -> Self {
        let probe = RhoLine::new(Rho::trivial("1"), ExpClass::Integral);
        let class = if classify_line(&probe, group) == LineClass::Good {
            ExpClass::Integral
        } else {
            ExpClass::HalfIntegral
        };
        EnumParams {
            group,
            lines: vec![RhoLine::new(Rho::trivial("1"), class)],
            max_rank,
            max_block_d,
            max_exp: None,
            sigma: None,
        }
    }

    fn max_exp(&self) -> HalfInt {
        self.max_exp.unwrap_or(HalfInt::from_twice(self.max_block_d as i64 + 1))
    }
}

fn exponents(class: ExpClass, bound: HalfInt) -> Vec<HalfInt> {
    let half = matches!(class, ExpClass::HalfIntegral | ExpClass::Ugly { half_integral: true });
    let b = bound.twice();
    (-b..=b)
        .filter(|t| (t.rem_euclid(2) == 1) == half)
        .map(HalfInt::from_twice)
        .collect()
}

#[derive(Clone)]
struct BlockKind {
    rho: Rho,
    d: u32,
    bad: bool,
    dim: u32,
}

fn tempered_parts(p: &EnumParams, max_dim: u32) -> Vec<TemperedData> {
    let mut kinds = Vec::new();
    for line in &p.lines {
        let bad = match classify_line(line, p.group) {
            LineClass::Ugly => continue,
            c => c == LineClass::Bad,
        };
        let odd = line.exp_class == ExpClass::Integral;
        for d in 1..=p.max_block_d {
            if (d % 2 == 1) == odd && !kinds.iter().any(|k: &BlockKind| k.rho == line.base && k.d == d) {
                kinds.push(BlockKind { rho: line.base.clone(), d, bad, dim: line.base.dim() * d });
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = TemperedData::new(p.sigma.clone());
    fill_blocks(&kinds, 0, max_dim, &mut cur, &mut out);
    out
}

fn fill_blocks(kinds: &[BlockKind], i: usize, room: u32, cur: &mut TemperedData, out: &mut Vec<TemperedData>) {
    let Some(k) = kinds.get(i) else {
        if cur.central_sign() == Sign::Plus {
            out.push(cur.clone());
        }
        return;
    };
    fill_blocks(kinds, i + 1, room, cur, out);
    let step = if k.bad { 2 } else { 1 };
    let signs: &[Sign] = if k.bad { &[Sign::Unset] } else { &[Sign::Plus, Sign::Minus] };
    let mut m = step;
    while m * k.dim <= room {
        for &sign in signs {
            let mut next = cur.clone();
            next.add(&k.rho, k.d, m, sign).expect("fresh block class");
            fill_blocks(kinds, i + 1, room - m * k.dim, &mut next, out);
        }
        m += step;
    }
}

fn segment_kinds(p: &EnumParams) -> Vec<Segment> {
    let bound = p.max_exp();
    let mut out = Vec::new();
    for line in &p.lines {
        let ugly = classify_line(line, p.group) == LineClass::Ugly;
        let exps = exponents(line.exp_class, bound);
        for &x in &exps {
            for &y in exps.iter().filter(|&&y| y <= x) {
                if ugly || (x + y).is_negative() {
                    out.push(Segment::new(line.base.clone(), x, y));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn fill_segments(
    kinds: &[Segment],
    i: usize,
    room: i64,
    cur: &mut Vec<Segment>,
    emit: &mut dyn FnMut(&[Segment]) -> Result<()>,
) -> Result<()> {
    let Some(s) = kinds.get(i) else {
        return emit(cur);
    };
    fill_segments(kinds, i + 1, room, cur, emit)?;
    let cost = s.gl_size();
    let mut used = 0;
    while room - (used + 1) * cost >= 0 {
        cur.push(s.clone());
        used += 1;
        fill_segments(kinds, i + 1, room - used * cost, cur, emit)?;
    }
    cur.truncate(cur.len() - used as usize);
    Ok(())
}

/// Every valid canonical datum over the declared lines with rank at most
/// `max_rank`, sorted and deduplicated.
pub fn enumerate_reps(p: &EnumParams) -> Result<Vec<LanglandsDatum>> {
    if p.max_rank > MAX_RANK {
        return Err(Error::precondition(format!("max rank {} exceeds the budget {MAX_RANK}", p.max_rank)));
    }
    let max_dim = match &p.sigma {
        Some(s) if s.rank > p.max_rank => return Ok(Vec::new()),
        Some(s) => 2 * (p.max_rank - s.rank),
        None => 2 * p.max_rank + p.group.dim_offset() as u32,
    };
    let kinds = segment_kinds(p);
    let mut out = Vec::new();
    for temp in tempered_parts(p, max_dim) {
        let Ok(base) = temp.rank(p.group) else { continue };
        if base > p.max_rank as i64 {
            continue;
        }
        let mut emit = |segs: &[Segment]| -> Result<()> {
            let d = LanglandsDatum::new(p.group, segs.to_vec(), temp.clone());
            if d.validate().is_ok() {
                out.push(d);
            }
            if out.len() > MAX_COUNT {
                return Err(Error::precondition("enumeration exceeds the case budget"));
            }
            Ok(())
        };
        fill_segments(&kinds, 0, p.max_rank as i64 - base, &mut Vec::new(), &mut emit)?;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_zero_is_trivial() {
        let p = EnumParams::trivial_good(GroupType::SpEven, 0, 7);
        let all = enumerate_reps(&p).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_string(), "pi(1+)");
        let p = EnumParams::trivial_good(GroupType::SOodd, 0, 7);
        assert_eq!(enumerate_reps(&p).unwrap()[0].to_string(), "pi()");
    }

    #[test]
    fn rank_one_family() {
        let p = EnumParams::trivial_good(GroupType::SpEven, 1, 3);
        let names: Vec<String> = enumerate_reps(&p).unwrap().iter().map(|d| d.to_string()).collect();
        for want in ["pi(1+)", "pi(3+)", "pi(1+,1+,1+)", "L(D[-1,-1];pi(1+))"] {
            assert!(names.contains(&want.to_string()), "{want} missing from {names:?}");
        }
        assert!(names.contains(&"L(D[-2,-2];pi(1+))".to_string()));
        assert_eq!(names.len(), 5);
    }

    #[test]
    fn budget_is_enforced() {
        let p = EnumParams::trivial_good(GroupType::SpEven, 11, 3);
        assert!(enumerate_reps(&p).is_err());
    }
}
