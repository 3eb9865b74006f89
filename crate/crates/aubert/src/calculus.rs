//! Highest derivatives and socles of Langlands data.
//!
//! Every function takes a whole (valid) datum; content off the relevant line
//! passes through untouched.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arthur::{self, AParamForm};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::matching::{best_match, MatchResult, OrderedIndexSet};
use crate::model::{
    classify_point, LanglandsDatum, LineClass, Rho, Segment, Sign, TemperedData,
};

/// The supercuspidal `ρ|·|^x`, or `ρ∨|·|^x` when `dual` is set. Non-self-dual
/// bases are always the canonical member of their pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub rho: Rho,
    pub x: HalfInt,
    pub dual: bool,
}

impl Point {
    pub fn new(rho: Rho, x: HalfInt) -> Self {
        Point { rho, x, dual: false }
    }

    pub fn on_dual(rho: Rho, x: HalfInt) -> Self {
        let dual = !rho.is_self_dual();
        Point { rho, x, dual }
    }

    /// `(ρ, x) ↦ (ρ∨, -x)`.
    pub fn conj(&self) -> Point {
        Point {
            rho: self.rho.clone(),
            x: -self.x,
            dual: !self.rho.is_self_dual() && !self.dual,
        }
    }

    fn base_id(&self) -> &str {
        if self.dual {
            self.rho.dual_id()
        } else {
            self.rho.id()
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rho.is_default() {
            write!(f, "|.|^{}", self.x)
        } else {
            write!(f, "{}|.|^{}", self.base_id(), self.x)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeResult {
    pub k: u32,
    pub value: LanglandsDatum,
}

type Iv = (HalfInt, HalfInt);

/// Segments on one base, optionally viewed through `[x, y] ↦ [-y, -x]`.
struct View {
    rho: Rho,
    flip: bool,
    segs: Vec<Iv>,
    rest: Vec<Segment>,
}

impl View {
    fn new(d: &LanglandsDatum, rho: &Rho, flip: bool) -> Self {
        let mut segs = Vec::new();
        let mut rest = Vec::new();
        for s in d.segments() {
            if s.rho == *rho {
                segs.push(if flip { (-s.y, -s.x) } else { (s.x, s.y) });
            } else {
                rest.push(s.clone());
            }
        }
        View { rho: rho.clone(), flip, segs, rest }
    }

    fn assemble(self, d: &LanglandsDatum, extra: Vec<Segment>, temp: TemperedData) -> Result<LanglandsDatum> {
        let mut all = self.rest;
        for (x, y) in self.segs {
            let (x, y) = if self.flip { (-y, -x) } else { (x, y) };
            if let Some(s) = Segment::try_new(self.rho.clone(), x, y).map_err(to_internal)? {
                all.push(s);
            }
        }
        all.extend(extra);
        let out = LanglandsDatum::new(d.group, all, temp);
        out.validate().map_err(to_internal)?;
        Ok(out)
    }
}

fn to_internal(e: Error) -> Error {
    match e {
        Error::Internal(_) => e,
        other => Error::internal(format!("produced an invalid datum: {other}")),
    }
}

/// `A_{ρ|·|^x}` ordered by `y`.
fn a_set(segs: &[Iv], x: HalfInt) -> Vec<usize> {
    OrderedIndexSet::by_key((0..segs.len()).filter(|&i| segs[i].0 == x), |i| segs[i].1).items
}

/// `B_{ρ|·|^x}` (segments ending at `-x`), ordered so that larger `x_b` is smaller.
fn b_set(segs: &[Iv], x: HalfInt) -> Vec<usize> {
    OrderedIndexSet::by_key((0..segs.len()).filter(|&i| segs[i].1 == -x), |i| -segs[i].0).items
}

struct Matched {
    /// Unmatched members of the lower set, in increasing order.
    lower_c: Vec<usize>,
    /// Unmatched members of the upper set, in increasing order.
    upper_c: Vec<usize>,
}

fn lift(lower: &[usize], upper: &[usize], r: MatchResult) -> Matched {
    Matched {
        lower_c: r.ac.iter().map(|&p| lower[p]).collect(),
        upper_c: r.bc.iter().map(|&p| upper[p]).collect(),
    }
}

/// Best matching from `A_{x-1}` into `A_x` under `y_{a'} > y_a`.
fn match_a(segs: &[Iv], x: HalfInt) -> Matched {
    let lower = a_set(segs, x - HalfInt::ONE);
    let upper = a_set(segs, x);
    let r = best_match(lower.len(), upper.len(), |b, a| segs[upper[b]].1 > segs[lower[a]].1);
    lift(&lower, &upper, r)
}

/// Best matching from `B_{x-1}` into `B_x` under `x_{b'} < x_b`.
fn match_b(segs: &[Iv], x: HalfInt) -> Matched {
    let lower = b_set(segs, x - HalfInt::ONE);
    let upper = b_set(segs, x);
    let r = best_match(lower.len(), upper.len(), |b, a| segs[upper[b]].0 < segs[lower[a]].0);
    lift(&lower, &upper, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Negative,
    Good,
    Bad,
}

fn kind_of(d: &LanglandsDatum, p: &Point) -> Result<Kind> {
    if !p.rho.is_self_dual() {
        if p.rho.id() > p.rho.dual_id() {
            return Err(Error::precondition(format!(
                "point must be given on the canonical base `{}`",
                p.rho.dual_id()
            )));
        }
        return Ok(Kind::Negative);
    }
    if p.dual {
        return Err(Error::precondition("self-dual points carry no dual flag"));
    }
    if p.x.is_zero() {
        return Err(Error::precondition(
            "derivatives at ρ|.|^0 on a self-dual line are not supported",
        ));
    }
    if p.x.is_negative() {
        return Ok(Kind::Negative);
    }
    Ok(match classify_point(&p.rho, p.x, d.group) {
        LineClass::Good => Kind::Good,
        _ => Kind::Bad,
    })
}

/// The `π_A` part of the positive-case recipe, possibly with an `s` prefix.
#[derive(Clone, Debug)]
enum Core {
    Good(AParamForm),
    Bad(BadCore),
}

#[derive(Clone, Debug)]
struct BadCore {
    rho: Rho,
    x: HalfInt,
    s: u32,
    t: u32,
    phi: TemperedData,
}

impl BadCore {
    fn half(&self) -> bool {
        self.x == HalfInt::HALF
    }
    fn dp(&self) -> u32 {
        self.x.block_size() as u32
    }
    fn m(&self) -> u32 {
        self.phi.mult(&self.rho, self.dp())
    }
    fn m_prime(&self) -> u32 {
        if self.half() {
            0
        } else {
            self.phi.mult(&self.rho, self.dp() - 2)
        }
    }
    fn kappa(&self) -> u32 {
        self.t % 2
    }
}

impl Core {
    fn new(kind: Kind, t: u32, phi: &TemperedData, p: &Point, s: u32) -> Result<Core> {
        match kind {
            Kind::Good => {
                let mut a = arthur::to_aparam(t, phi, p.x, &p.rho)?;
                a.s = s;
                Ok(Core::Good(a))
            }
            Kind::Bad => Ok(Core::Bad(BadCore { rho: p.rho.clone(), x: p.x, s, t, phi: phi.clone() })),
            Kind::Negative => Err(Error::internal("no core in the negative case")),
        }
    }

    fn s(&self) -> u32 {
        match self {
            Core::Good(a) => a.s,
            Core::Bad(b) => b.s,
        }
    }

    fn mass(&self) -> u32 {
        match self {
            Core::Good(a) => a.m(),
            Core::Bad(b) => b.m() + b.kappa(),
        }
    }

    fn cap(&self) -> u32 {
        match self {
            Core::Good(a) => a.m_prime(),
            Core::Bad(b) => b.m_prime() + b.kappa(),
        }
    }

    fn derivative(&self) -> Result<(u32, Core)> {
        match self {
            Core::Good(a) => {
                let (k, out) = arthur::der_special(a)?;
                Ok((k, Core::Good(out)))
            }
            Core::Bad(b) => {
                let kappa = b.kappa();
                let (m, mp) = (b.m(), b.m_prime());
                let k = m + kappa + b.s.saturating_sub(mp + kappa);
                let mut out = b.clone();
                out.s = b.s.min(mp + kappa);
                out.t = b.t - kappa;
                out.phi.remove(&b.rho, b.dp(), m)?;
                if !b.half() {
                    out.phi.add(&b.rho, b.dp() - 2, m + 2 * kappa, Sign::Unset)?;
                }
                Ok((k, Core::Bad(out)))
            }
        }
    }

    fn socle(&self) -> Result<Core> {
        match self {
            Core::Good(a) => Ok(Core::Good(arthur::soc_special(a)?)),
            Core::Bad(b) => {
                let mut out = b.clone();
                if b.s < b.m_prime() + b.kappa() {
                    if b.kappa() == 0 {
                        out.t += 1;
                        out.phi.remove(&b.rho, b.dp() - 2, 2)?;
                    } else {
                        out.t -= 1;
                        out.phi.add(&b.rho, b.dp(), 2, Sign::Unset)?;
                    }
                } else if b.half() {
                    out.t += 1;
                } else {
                    out.s += 1;
                }
                Ok(Core::Bad(out))
            }
        }
    }

    /// Segments `Δ_ρ[x-1, -x]^·` and the tempered part, without the `s` prefix.
    fn pieces(&self) -> Result<(Vec<Segment>, TemperedData)> {
        match self {
            Core::Good(a) => AParamForm { s: 0, ..a.clone() }.expand(),
            Core::Bad(b) => {
                let seg = Segment::new(b.rho.clone(), b.x - HalfInt::ONE, -b.x);
                Ok((vec![seg; b.t as usize], b.phi.clone()))
            }
        }
    }
}

/// Positive-case bookkeeping shared by derivative, socle and irreducibility.
struct Positive {
    view: View,
    t: u32,
    a_x_c: Vec<usize>,
    a_x1_c: Vec<usize>,
    /// `B_x^c` in the order of `B_x`: larger `x_b` first.
    b_x_c: Vec<usize>,
    b_x1_c: Vec<usize>,
}

impl Positive {
    fn new(d: &LanglandsDatum, p: &Point) -> Self {
        let mut view = View::new(d, &p.rho, false);
        let target = (p.x - HalfInt::ONE, -p.x);
        let before = view.segs.len();
        view.segs.retain(|&s| s != target);
        let t = (before - view.segs.len()) as u32;
        let am = match_a(&view.segs, p.x);
        let bm = match_b(&view.segs, p.x);
        Positive { t, a_x_c: am.upper_c, a_x1_c: am.lower_c, b_x_c: bm.upper_c, b_x1_c: bm.lower_c, view }
    }
}

fn derivative_negative(d: &LanglandsDatum, p: &Point) -> Result<DerivativeResult> {
    let mut view = View::new(d, &p.rho, p.dual);
    let am = match_a(&view.segs, p.x);
    for &i in &am.upper_c {
        view.segs[i].0 = p.x - HalfInt::ONE;
    }
    let k = am.upper_c.len() as u32;
    let value = view.assemble(d, Vec::new(), d.temp.clone())?;
    Ok(DerivativeResult { k, value })
}

fn socle_negative(d: &LanglandsDatum, p: &Point) -> Result<LanglandsDatum> {
    let mut view = View::new(d, &p.rho, p.dual);
    let am = match_a(&view.segs, p.x);
    match am.lower_c.first() {
        Some(&a) => view.segs[a].0 = p.x,
        None => view.segs.push((p.x, p.x)),
    }
    view.assemble(d, Vec::new(), d.temp.clone())
}

fn derivative_positive(d: &LanglandsDatum, p: &Point, kind: Kind) -> Result<DerivativeResult> {
    let Positive { mut view, t, a_x_c, a_x1_c, b_x_c, .. } = Positive::new(d, p);
    let s = b_x_c.len() as u32;
    let core = Core::new(kind, t, &d.temp, p, s)?;
    let (k1, mut core) = core.derivative()?;
    let k2 = k1.min(a_x1_c.len() as u32);
    for _ in 0..k2 {
        core = core.socle()?;
    }
    let s_prime = core.s();
    if s_prime > s {
        return Err(Error::internal("restored more B-segments than were trimmed"));
    }
    for &i in &a_x_c {
        view.segs[i].0 = p.x - HalfInt::ONE;
    }
    for &i in b_x_c.iter().skip(s_prime as usize) {
        view.segs[i].1 = -(p.x - HalfInt::ONE);
    }
    let (extra, temp) = core.pieces()?;
    let k = a_x_c.len() as u32 + k1 - k2;
    let value = view.assemble(d, extra, temp)?;
    Ok(DerivativeResult { k, value })
}

fn socle_positive(d: &LanglandsDatum, p: &Point, kind: Kind) -> Result<LanglandsDatum> {
    let Positive { mut view, t, a_x1_c, b_x_c, b_x1_c, .. } = Positive::new(d, p);
    let s = b_x_c.len() as u32;
    let core = Core::new(kind, t, &d.temp, p, s)?;
    let (mass, cap, v) = (core.mass(), core.cap(), a_x1_c.len() as u32);
    let mut core_out = core.clone();
    if mass + s.saturating_sub(cap) < v {
        view.segs[a_x1_c[0]].0 = p.x;
    } else if s < cap && mass >= v {
        core_out = core.socle()?;
    } else if let Some(&b) = b_x1_c.first() {
        view.segs[b].1 = -p.x;
    } else {
        view.segs.push((-p.x, -p.x));
    }
    let (extra, temp) = core_out.pieces()?;
    view.assemble(d, extra, temp)
}

/// Highest `ρ|·|^x`-derivative.
pub fn derivative_at(d: &LanglandsDatum, p: &Point) -> Result<DerivativeResult> {
    match kind_of(d, p)? {
        Kind::Negative => derivative_negative(d, p),
        kind => derivative_positive(d, p, kind),
    }
}

/// `S^{(r)}_{ρ|·|^x}(π)`, one step at a time.
pub fn socle_at(d: &LanglandsDatum, p: &Point, r: u32) -> Result<LanglandsDatum> {
    let kind = kind_of(d, p)?;
    let mut cur = d.clone();
    for _ in 0..r {
        cur = match kind {
            Kind::Negative => socle_negative(&cur, p)?,
            _ => socle_positive(&cur, p, kind)?,
        };
    }
    Ok(cur)
}

/// Points worth probing, ordered by base, then `|x|` descending, positive first.
/// Zero exponents on self-dual bases are skipped.
pub fn candidate_points(d: &LanglandsDatum) -> Vec<Point> {
    let mut mags: BTreeMap<Rho, BTreeSet<HalfInt>> = BTreeMap::new();
    for s in d.segments() {
        let e = mags.entry(s.rho.clone()).or_default();
        e.insert(s.x.abs());
        e.insert(s.y.abs());
    }
    for b in d.temp.blocks() {
        let e = mags.entry(b.rho.clone()).or_default();
        e.insert(HalfInt::from_twice(b.d as i64 - 1));
        e.insert(HalfInt::from_twice(b.d as i64 + 1));
    }
    let mut out = Vec::new();
    for (rho, set) in mags {
        for &m in set.iter().rev() {
            if rho.is_self_dual() {
                if !m.is_zero() {
                    out.push(Point::new(rho.clone(), m));
                    out.push(Point::new(rho.clone(), -m));
                }
            } else {
                out.push(Point::new(rho.clone(), m));
                out.push(Point::on_dual(rho.clone(), m));
                if !m.is_zero() {
                    out.push(Point::new(rho.clone(), -m));
                    out.push(Point::on_dual(rho.clone(), -m));
                }
            }
        }
    }
    out
}

fn reduced_away_from_zero(d: &LanglandsDatum, rho: &Rho, negative_only: bool) -> Result<bool> {
    for p in candidate_points(d) {
        if p.rho != *rho || (negative_only && !p.x.is_negative()) {
            continue;
        }
        if derivative_at(d, &p)?.k > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Highest `Δ_ρ[0,-1]`-derivative of a datum reduced at every `ρ|·|^z`, `z ≠ 0`.
pub fn derivative_delta01(d: &LanglandsDatum, rho: &Rho) -> Result<DerivativeResult> {
    if !rho.is_self_dual() {
        return Err(Error::precondition("Δ[0,-1]-derivatives need a self-dual ρ"));
    }
    if !reduced_away_from_zero(d, rho, false)? {
        return Err(Error::precondition(format!(
            "not reduced at every nonzero exponent of `{}`",
            rho.id()
        )));
    }
    let mut view = View::new(d, rho, false);
    let min_x = view
        .segs
        .iter()
        .map(|s| s.0)
        .min()
        .ok_or_else(|| Error::precondition(format!("no segment on `{}`", rho.id())))?;
    if !min_x.is_zero() {
        return Err(Error::internal(format!("reduced datum {d} has min x = {min_x}")));
    }
    let mut k = 0;
    for s in view.segs.iter_mut().filter(|s| s.0.is_zero()) {
        s.0 = HalfInt::int(-2);
        k += 1;
    }
    let value = view.assemble(d, Vec::new(), d.temp.clone())?;
    Ok(DerivativeResult { k, value })
}

fn z01_kind(d: &LanglandsDatum, rho: &Rho) -> Result<Kind> {
    if !rho.is_self_dual() {
        return Err(Error::precondition("Z[0,1]-derivatives need a self-dual ρ"));
    }
    Ok(match classify_point(rho, HalfInt::ONE, d.group) {
        LineClass::Good => Kind::Good,
        _ => Kind::Bad,
    })
}

fn check_z01_domain(d: &LanglandsDatum, rho: &Rho) -> Result<()> {
    if d.segments_on(rho).any(|(_, s)| s.x.is_negative()) {
        return Err(Error::precondition(format!(
            "{d} is not reduced at negative exponents of `{}`",
            rho.id()
        )));
    }
    if derivative_at(d, &Point::new(rho.clone(), HalfInt::ONE))?.k > 0 {
        return Err(Error::precondition(format!("{d} is not ρ|.|^1-reduced")));
    }
    Ok(())
}

fn flip_one(temp: &mut TemperedData, rho: &Rho, by: Sign) {
    if let Some(s) = temp.sign(rho, 1) {
        temp.set_sign(rho, 1, s.times(by));
    }
}

/// Highest `Z_ρ[0,1]`-derivative of `L(Δ_ρ[0,-1]^t; π(φ, η))` with `φ` free of
/// the obstruction at `ρ|·|^1`. Returns `(k, segments, tempered part)`.
fn z01_core_derivative(
    kind: Kind,
    rho: &Rho,
    t: u32,
    phi: &TemperedData,
) -> Result<(u32, Vec<Segment>, TemperedData)> {
    let h = HalfInt::int;
    let mut phi = phi.clone();
    if kind == Kind::Bad {
        if !t.is_multiple_of(2) || phi.mult(rho, 3) != 0 {
            return Err(Error::internal("bad-parity [0,1] core out of shape"));
        }
        return Ok((t, Vec::new(), phi));
    }
    let m = phi.mult(rho, 1);
    let has3 = phi.mult(rho, 3) > 0;
    let odd = m % 2 == 1;
    let minus_one = || vec![Segment::point(rho.clone(), h(-1))];
    Ok(match (has3, odd) {
        (true, true) => {
            if t.is_multiple_of(2) {
                (t, Vec::new(), phi)
            } else {
                phi.add_like(rho, 1, 1, Sign::Plus)?;
                phi.remove(rho, 3, 1)?;
                (t, minus_one(), phi)
            }
        }
        (true, false) => {
            phi.remove(rho, 1, 1)?;
            phi.remove(rho, 3, 1)?;
            flip_one(&mut phi, rho, Sign::pow_neg(t as i64 + 1));
            (t + 1, Vec::new(), phi)
        }
        (false, true) => {
            if t == 0 {
                (0, Vec::new(), phi)
            } else if t.is_multiple_of(2) {
                phi.add_like(rho, 1, 2, Sign::Plus)?;
                (t - 1, minus_one(), phi)
            } else {
                (t - 1, vec![Segment::new(rho.clone(), h(0), h(-1))], phi)
            }
        }
        (false, false) => {
            flip_one(&mut phi, rho, Sign::pow_neg(t as i64));
            (t, Vec::new(), phi)
        }
    })
}

/// Highest `Z_ρ[0,1]`-derivative of a datum that is `ρ|·|^1`-reduced and
/// reduced at every negative exponent of `ρ`.
pub fn derivative_z01(d: &LanglandsDatum, rho: &Rho) -> Result<DerivativeResult> {
    let kind = z01_kind(d, rho)?;
    check_z01_domain(d, rho)?;
    let h = HalfInt::int;
    let one = Point::new(rho.clone(), HalfInt::ONE);
    let mut view = View::new(d, rho, false);
    let before = view.segs.len();
    view.segs.retain(|&s| s != (h(0), h(-1)));
    let t = (before - view.segs.len()) as u32;

    let core = Core::new(kind, t, &d.temp, &one, 0)?;
    let (l, core) = core.derivative()?;
    let (core_segs, core_temp) = core.pieces()?;
    let t_prime = core_segs.len() as u32;

    let real = view.segs.len();
    view.segs.extend(std::iter::repeat_n((h(1), h(1)), l as usize));
    let am = match_a(&view.segs, HalfInt::ONE);
    if !am.upper_c.is_empty() {
        return Err(Error::precondition(format!("{d} is not ρ|.|^1-reduced")));
    }
    let lower = a_set(&view.segs, h(0));
    let matched: Vec<usize> = lower.iter().copied().filter(|i| !am.lower_c.contains(i)).collect();
    let upper = a_set(&view.segs, h(1));
    let r1 = upper.len() as u32;
    for &i in &matched {
        view.segs[i].0 = h(-1);
    }
    for &i in &upper {
        view.segs[i].0 = h(0);
    }
    view.segs.truncate(real);

    let (k_a, extra, temp) = z01_core_derivative(kind, rho, t_prime, &core_temp)?;
    let value = view.assemble(d, extra, temp)?;
    Ok(DerivativeResult { k: k_a + r1, value })
}

/// Candidate cores `π_A` with `D^{(k)}_{[0,1]}(π_A) = L((ρ|·|^{-1})^s, Δ_ρ[0,-1]^t; φ)`.
fn z01_core_socles(
    kind: Kind,
    rho: &Rho,
    k: u32,
    s: u32,
    t: u32,
    phi: &TemperedData,
    d: &LanglandsDatum,
) -> Result<Vec<LanglandsDatum>> {
    let h = HalfInt::int;
    let group = d.group;
    let seg01 = Segment::new(rho.clone(), h(0), h(-1));
    if k == 0 {
        let mut segs = vec![Segment::point(rho.clone(), h(-1)); s as usize];
        segs.extend(vec![seg01; t as usize]);
        return Ok(vec![LanglandsDatum::new(group, segs, phi.clone())]);
    }
    let out_of_domain = || Error::precondition("socle leaves the domain of the [0,1] formulas");
    if kind == Kind::Bad {
        if s != 0 || t != 0 || !k.is_multiple_of(2) || phi.mult(rho, 3) != 0 {
            return Err(out_of_domain());
        }
        return Ok(vec![LanglandsDatum::new(group, vec![seg01; k as usize], phi.clone())]);
    }
    let has3 = phi.mult(rho, 3);
    if s + t + has3 > 1 {
        return Err(out_of_domain());
    }
    let mp = phi.mult(rho, 1);
    let mut base = phi.clone();
    let (big_t, l) = if s == 1 {
        if mp < 2 || k.is_multiple_of(2) {
            return Err(out_of_domain());
        }
        base.remove(rho, 1, 2)?;
        (k + 1, (mp % 2) as u8)
    } else if t == 1 {
        if mp.is_multiple_of(2) || k % 2 == 1 {
            return Err(out_of_domain());
        }
        (k + 1, 1)
    } else if has3 == 1 {
        if mp.is_multiple_of(2) || k % 2 == 1 {
            return Err(out_of_domain());
        }
        (k, 1)
    } else {
        flip_one(&mut base, rho, Sign::pow_neg(k as i64));
        (k, ((mp + 1) % 2) as u8)
    };
    let mut outs = Vec::new();
    for eta_psi in [Sign::Plus, Sign::Minus] {
        let a = AParamForm { rho: rho.clone(), x: HalfInt::ONE, s: 0, t: big_t, l, phi: base.clone(), eta_psi };
        if l == 1 && eta_psi == Sign::Minus {
            continue;
        }
        if a.validate().is_err() {
            continue;
        }
        if let Ok(datum) = arthur::from_aparam(&a, group) {
            if !outs.contains(&datum) {
                outs.push(datum);
            }
        }
    }
    if outs.is_empty() {
        return Err(out_of_domain());
    }
    Ok(outs)
}

/// `soc(Z_ρ[0,1]^k ⋊ π)`, rebuilt from the highest derivative and checked by
/// differentiating the result again.
pub fn socle_z01(d: &LanglandsDatum, rho: &Rho, k: u32) -> Result<LanglandsDatum> {
    let kind = z01_kind(d, rho)?;
    let (base, total) = match derivative_z01(d, rho) {
        Ok(r) => (r.value, r.k + k),
        Err(Error::Precondition(_)) => (d.clone(), k),
        Err(e) => return Err(e),
    };
    if total == 0 {
        return Ok(base);
    }
    let h = HalfInt::int;
    let mut view = View::new(&base, rho, false);
    let before = view.segs.len();
    view.segs.retain(|&sg| sg != (h(-1), h(-1)));
    let s = (before - view.segs.len()) as u32;
    let before = view.segs.len();
    view.segs.retain(|&sg| sg != (h(0), h(-1)));
    let t = (before - view.segs.len()) as u32;

    let lower = a_set(&view.segs, h(-1));
    let upper = a_set(&view.segs, h(0));
    let segs = &view.segs;
    let r = best_match(lower.len(), upper.len(), |b, a| segs[upper[b]].1 > segs[lower[a]].1);
    let r1 = lower.len() as u32;
    let b0_matched: Vec<usize> = r.b0.iter().map(|&p| upper[p]).collect();
    let l = r1 - b0_matched.len() as u32;
    let k_a = total.checked_sub(r1).ok_or_else(|| {
        Error::precondition(format!("order {total} is below the forced part {r1}"))
    })?;
    for &i in &lower {
        view.segs[i].0 = h(0);
    }
    for &i in &b0_matched {
        view.segs[i].0 = h(1);
    }

    let one = Point::new(rho.clone(), HalfInt::ONE);
    let cores = z01_core_socles(kind, rho, k_a, s, t, &base.temp, &base)?;
    let mut last_err = None;
    for core in cores {
        let raised = socle_at(&core, &one, l)?;
        let (_, extra, temp) = raised.into_parts();
        let candidate = View { rho: view.rho.clone(), flip: false, segs: view.segs.clone(), rest: view.rest.clone() }
            .assemble(&base, extra, temp);
        let candidate = match candidate {
            Ok(c) => c,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        match derivative_z01(&candidate, rho) {
            Ok(r) if r.k == total && r.value == base => return Ok(candidate),
            Ok(r) => {
                last_err = Some(Error::precondition(format!(
                    "candidate {candidate} differentiates to k={} {}",
                    r.k, r.value
                )))
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(match last_err {
        Some(Error::Internal(m)) => Error::Internal(m),
        Some(e) => Error::precondition(format!("socle leaves the domain of the [0,1] formulas: {e}")),
        None => Error::precondition("socle leaves the domain of the [0,1] formulas"),
    })
}

/// Combinatorial irreducibility test for `ρ|·|^x ⋊ π`, good parity, `x > 0`.
pub fn irreducible_at(d: &LanglandsDatum, p: &Point) -> Result<bool> {
    if kind_of(d, p)? != Kind::Good {
        return Err(Error::precondition("the combinatorial test needs a good point with x > 0"));
    }
    let neg = View::new(d, &p.rho, false);
    let a_neg = match_a(&neg.segs, -p.x);
    let pos = Positive::new(d, p);
    let a = arthur::to_aparam(pos.t, &d.temp, p.x, &p.rho)?;
    let (m, mp) = (a.m() as i64, arthur::m_psi_minus(&a) as i64);
    let s = pos.b_x_c.len() as i64;
    let v = pos.a_x1_c.len() as i64;
    Ok(a_neg.lower_c.is_empty() && s >= mp && m + s - mp >= v && pos.b_x1_c.is_empty())
}

/// `ρ|·|^x ⋊ π` is irreducible iff the socles at `x` and `-x` agree.
pub fn irreducible_by_socles(d: &LanglandsDatum, p: &Point) -> Result<bool> {
    Ok(socle_at(d, p, 1)? == socle_at(d, &Point { x: -p.x, ..p.clone() }, 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroupType;
    use crate::parse::{parse_rep, Decls};

    fn sp(s: &str) -> LanglandsDatum {
        parse_rep(s, &Decls::standard(GroupType::SpEven)).unwrap()
    }

    fn at(x: i64) -> Point {
        Point::new(Rho::trivial("1"), HalfInt::int(x))
    }

    fn one() -> Rho {
        Rho::trivial("1")
    }

    #[test]
    fn negative_derivative_and_socle() {
        let r = derivative_at(&sp("L(D[-2,-2];pi(3+))"), &at(-2)).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (1, "pi(3+)"));
        assert_eq!(socle_at(&sp("pi(1+)"), &at(-1), 1).unwrap().to_string(), "L(D[-1,-1];pi(1+))");
    }

    #[test]
    fn positive_good_derivatives() {
        let r = derivative_at(&sp("pi(1+,1+,3+,5-,5-)"), &at(2)).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (1, "L(D[1,-2];pi(1+,1+,3+))"));
        let r = derivative_at(&sp("L(D[1,-2];pi(1+,1+,3+))"), &at(1)).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (2, "L(D[0,-2];pi(1+,1+,1+))"));
        let r = derivative_at(&sp("L(D[1,-2];pi(1-,1-,3+))"), &at(1)).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (1, "L(D[0,-2];pi(1-,1-,3+))"));
        let r = derivative_at(&sp("L(D[0,-2];pi(1+,1+,1+))"), &at(2)).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (1, "L(D[0,-1];pi(1+,1+,1+))"));
    }

    #[test]
    fn positive_good_socles() {
        let s = socle_at(&sp("L(D[-1,-1];pi(1+))"), &at(2), 1).unwrap();
        assert_eq!(s.to_string(), "L(D[-1,-2];pi(1+))");
        let s = socle_at(&sp("L(D[0,-1];pi(1+))"), &at(2), 1).unwrap();
        assert_eq!(s.to_string(), "L(D[0,-2];pi(1+))");
    }

    #[test]
    fn delta01_derivatives() {
        let r = derivative_delta01(&sp("L(D[0,-2],D[0,-1];pi(3+))"), &one()).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (2, "L(D[-2,-2];pi(3+))"));
        let r = derivative_delta01(&sp("L(D[0,-2];pi(1-,1-,3+))"), &one()).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (1, "L(D[-2,-2];pi(1-,1-,3+))"));
    }

    #[test]
    fn z01_socles_rebuild_known_data() {
        assert_eq!(socle_z01(&sp("pi(1+)"), &one(), 1).unwrap().to_string(), "pi(1-,1-,3+)");
        assert_eq!(
            socle_z01(&sp("L(D[-1,-2];pi(1+))"), &one(), 2).unwrap().to_string(),
            "L(D[0,-2],D[0,-1];pi(3+))"
        );
        assert_eq!(
            socle_z01(&sp("L(D[0,-2];pi(1+))"), &one(), 1).unwrap().to_string(),
            "L(D[0,-2];pi(1-,1-,3+))"
        );
        assert_eq!(socle_z01(&sp("pi(1+,1+,1+)"), &one(), 1).unwrap().to_string(), "pi(1-,1-,1-,1-,3+)");
    }

    #[test]
    fn z01_derivatives() {
        let r = derivative_z01(&sp("pi(1-,1-,3+)"), &one()).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (1, "pi(1+)"));
        let r = derivative_z01(&sp("pi(1-,1-,1-,1-,3+)"), &one()).unwrap();
        assert_eq!((r.k, r.value.to_string().as_str()), (1, "pi(1+,1+,1+)"));
        assert_eq!(derivative_z01(&sp("pi(1+)"), &one()).unwrap().k, 0);
    }

    #[test]
    fn irreducibility_tempered_specialization() {
        let d = sp("pi(1+)");
        assert!(!irreducible_at(&d, &at(1)).unwrap());
        assert!(!irreducible_by_socles(&d, &at(1)).unwrap());
        let d = sp("pi(3+)");
        assert!(irreducible_at(&d, &at(1)).unwrap());
        assert!(irreducible_by_socles(&d, &at(1)).unwrap());
    }

    #[test]
    fn zero_on_self_dual_is_refused() {
        assert!(matches!(derivative_at(&sp("pi(1+)"), &at(0)), Err(Error::Precondition(_))));
    }
}
