//! Langlands data for `Sp_2n` and `SO_2n+1`: lines, segments, Jordan blocks.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupType {
    /// `Sp_2n`, dual group `SO_2n+1`: parameters are orthogonal.
    SpEven,
    /// `SO_2n+1`, dual group `Sp_2n`: parameters are symplectic.
    SOodd,
}

impl GroupType {
    /// Self-duality type of tempered parameters of this group.
    pub fn phi_type(self) -> SelfDual {
        match self {
            GroupType::SpEven => SelfDual::Orthogonal,
            GroupType::SOodd => SelfDual::Symplectic,
        }
    }

    /// Parity offset of `dim φ`: `2n + 1` for `Sp`, `2n` for `SO`.
    pub fn dim_offset(self) -> i64 {
        match self {
            GroupType::SpEven => 1,
            GroupType::SOodd => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupType::SpEven => "Sp",
            GroupType::SOodd => "SO",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelfDual {
    None,
    Orthogonal,
    Symplectic,
}

impl SelfDual {
    pub fn opposite(self) -> SelfDual {
        match self {
            SelfDual::Orthogonal => SelfDual::Symplectic,
            SelfDual::Symplectic => SelfDual::Orthogonal,
            SelfDual::None => SelfDual::None,
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct RhoLabel {
    pub id: String,
    pub dim: u32,
    pub self_dual: SelfDual,
    pub dual_id: String,
    /// Printed without an `@id` suffix.
    pub is_default: bool,
}

/// Shared handle to a declared supercuspidal of some `GL_d`. Equality and
/// ordering use the identifier only.
#[derive(Clone, Debug)]
pub struct Rho(Arc<RhoLabel>);

impl Rho {
    pub fn new(label: RhoLabel) -> Self {
        Rho(Arc::new(label))
    }

    /// The trivial character of `GL_1`, orthogonal.
    pub fn trivial(id: &str) -> Self {
        Rho::new(RhoLabel {
            id: id.to_string(),
            dim: 1,
            self_dual: SelfDual::Orthogonal,
            dual_id: id.to_string(),
            is_default: true,
        })
    }

    pub fn label(&self) -> &RhoLabel {
        &self.0
    }

    pub fn id(&self) -> &str {
        &self.0.id
    }

    pub fn dim(&self) -> u32 {
        self.0.dim
    }

    pub fn self_dual(&self) -> SelfDual {
        self.0.self_dual
    }

    pub fn is_self_dual(&self) -> bool {
        self.0.self_dual != SelfDual::None
    }

    pub fn dual_id(&self) -> &str {
        &self.0.dual_id
    }

    pub fn is_default(&self) -> bool {
        self.0.is_default
    }
}

impl PartialEq for Rho {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.id == other.0.id
    }
}

impl Eq for Rho {}

impl Hash for Rho {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl PartialOrd for Rho {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rho {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpClass {
    Integral,
    HalfIntegral,
    /// Non-self-dual base; the flag records the exponent class mod 1.
    Ugly { half_integral: bool },
}

impl ExpClass {
    pub fn of(rho: &Rho, x: HalfInt) -> ExpClass {
        let half_integral = !x.is_integral();
        if !rho.is_self_dual() {
            ExpClass::Ugly { half_integral }
        } else if half_integral {
            ExpClass::HalfIntegral
        } else {
            ExpClass::Integral
        }
    }
}

/// A line `Z_ρ|·|^{x}` of supercuspidals; ugly lines are keyed by the
/// canonical member of the pair `{ρ, ρ∨}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhoLine {
    pub base: Rho,
    pub exp_class: ExpClass,
}

impl RhoLine {
    pub fn new(base: Rho, exp_class: ExpClass) -> Self {
        RhoLine { base, exp_class }
    }

    pub fn of_point(rho: &Rho, x: HalfInt) -> Self {
        RhoLine::new(rho.clone(), ExpClass::of(rho, x))
    }

    pub fn contains(&self, rho: &Rho, x: HalfInt) -> bool {
        *rho == self.base && ExpClass::of(rho, x) == self.exp_class
    }
}

impl fmt::Display for RhoLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = match self.exp_class {
            ExpClass::Integral => "Z",
            ExpClass::HalfIntegral => "1/2+Z",
            ExpClass::Ugly { half_integral: false } => "Z (ugly)",
            ExpClass::Ugly { half_integral: true } => "1/2+Z (ugly)",
        };
        write!(f, "{}|.|^{}", self.base.id(), class)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineClass {
    Good,
    Bad,
    Ugly,
}

pub fn classify_line(line: &RhoLine, group: GroupType) -> LineClass {
    let rho_type = line.base.self_dual();
    match line.exp_class {
        ExpClass::Ugly { .. } => LineClass::Ugly,
        _ if rho_type == SelfDual::None => LineClass::Ugly,
        ExpClass::Integral if rho_type == group.phi_type() => LineClass::Good,
        ExpClass::HalfIntegral if rho_type == group.phi_type().opposite() => LineClass::Good,
        _ => LineClass::Bad,
    }
}

/// Classification of the point `ρ|·|^x`.
pub fn classify_point(rho: &Rho, x: HalfInt, group: GroupType) -> LineClass {
    classify_line(&RhoLine::of_point(rho, x), group)
}

/// Classification of the block `ρ ⊠ S_d`, i.e. of the line through `(d-1)/2`.
pub fn classify_block(rho: &Rho, d: u32, group: GroupType) -> LineClass {
    classify_point(rho, HalfInt::from_twice(d as i64 - 1), group)
}

/// `Δ_ρ[x, y]`, with `x ≥ y` and `x - y` integral.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub rho: Rho,
    pub x: HalfInt,
    pub y: HalfInt,
}

impl Segment {
    pub fn new(rho: Rho, x: HalfInt, y: HalfInt) -> Self {
        Segment { rho, x, y }
    }

    /// `Δ_ρ[x, y]` if it is a genuine segment, `None` for the empty `Δ_ρ[x, x+1]`.
    pub fn try_new(rho: Rho, x: HalfInt, y: HalfInt) -> Result<Option<Self>> {
        match x.int_diff(y) {
            None => Err(Error::validation(format!("segment [{x},{y}] has non-integral length"))),
            Some(-1) => Ok(None),
            Some(n) if n < -1 => Err(Error::validation(format!("segment [{x},{y}] has x < y"))),
            Some(_) => Ok(Some(Segment { rho, x, y })),
        }
    }

    pub fn point(rho: Rho, x: HalfInt) -> Self {
        Segment { rho, x, y: x }
    }

    pub fn len(&self) -> i64 {
        (self.x - self.y).twice() / 2 + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0
    }

    pub fn gl_size(&self) -> i64 {
        self.rho.dim() as i64 * self.len()
    }

    /// Canonical sort key `(x + y, x, ρ)`.
    fn key(&self) -> (HalfInt, HalfInt, &str, HalfInt) {
        (self.x + self.y, self.x, self.rho.id(), self.y)
    }

    pub fn line(&self) -> RhoLine {
        RhoLine::of_point(&self.rho, self.x)
    }

    pub fn is(&self, rho: &Rho, x: HalfInt, y: HalfInt) -> bool {
        self.rho == *rho && self.x == x && self.y == y
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Unset,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `(-1)^n` as a sign.
    pub fn pow_neg(n: i64) -> Sign {
        Sign::from_parity(n.rem_euclid(2) == 1)
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Unset => Sign::Unset,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Unset, _) | (_, Sign::Unset) => Sign::Unset,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    pub fn pow(self, n: u32) -> Sign {
        if n.is_multiple_of(2) && self != Sign::Unset {
            Sign::Plus
        } else {
            self
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Unset => '.',
        }
    }
}

/// `(ρ ⊠ S_d)^mult` with its sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanBlock {
    pub rho: Rho,
    pub d: u32,
    pub mult: u32,
    pub sign: Sign,
}

/// Opaque supercuspidal anchor of a classical group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sigma {
    pub id: String,
    pub rank: u32,
}

/// `π(φ, η)` possibly over an anchor `σ`. Blocks are kept one entry per
/// isomorphism class, sorted by `(ρ, d)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TemperedData {
    pub sigma: Option<Sigma>,
    blocks: Vec<JordanBlock>,
}

impl TemperedData {
    pub fn new(sigma: Option<Sigma>) -> Self {
        TemperedData { sigma, blocks: Vec::new() }
    }

    pub fn from_blocks(sigma: Option<Sigma>, blocks: impl IntoIterator<Item = JordanBlock>) -> Result<Self> {
        let mut t = TemperedData::new(sigma);
        for b in blocks {
            t.add(&b.rho, b.d, b.mult, b.sign)?;
        }
        Ok(t)
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn position(&self, rho: &Rho, d: u32) -> std::result::Result<usize, usize> {
        self.blocks
            .binary_search_by(|b| b.rho.cmp(rho).then(b.d.cmp(&d)))
    }

    pub fn mult(&self, rho: &Rho, d: u32) -> u32 {
        self.position(rho, d).map(|i| self.blocks[i].mult).unwrap_or(0)
    }

    pub fn sign(&self, rho: &Rho, d: u32) -> Option<Sign> {
        self.position(rho, d).ok().map(|i| self.blocks[i].sign)
    }

    /// Adds `count` copies of `ρ ⊠ S_d`. An existing class keeps its sign;
    /// a conflicting explicit sign is an error.
    pub fn add(&mut self, rho: &Rho, d: u32, count: u32, sign: Sign) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if d == 0 {
            return Err(Error::validation("Jordan block S_0 cannot be stored"));
        }
        match self.position(rho, d) {
            Ok(i) => {
                let b = &mut self.blocks[i];
                if b.sign != sign {
                    return Err(Error::validation(format!(
                        "conflicting signs on {}@{}",
                        d,
                        rho.id()
                    )));
                }
                b.mult += count;
            }
            Err(i) => self.blocks.insert(
                i,
                JordanBlock { rho: rho.clone(), d, mult: count, sign },
            ),
        }
        Ok(())
    }

    /// Adds copies using the existing sign if the class is present.
    pub fn add_like(&mut self, rho: &Rho, d: u32, count: u32, default: Sign) -> Result<()> {
        let sign = self.sign(rho, d).unwrap_or(default);
        self.add(rho, d, count, sign)
    }

    pub fn remove(&mut self, rho: &Rho, d: u32, count: u32) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        match self.position(rho, d) {
            Ok(i) if self.blocks[i].mult >= count => {
                self.blocks[i].mult -= count;
                if self.blocks[i].mult == 0 {
                    self.blocks.remove(i);
                }
                Ok(())
            }
            _ => Err(Error::internal(format!(
                "cannot remove {count} copies of {}@{}",
                d,
                rho.id()
            ))),
        }
    }

    pub fn set_sign(&mut self, rho: &Rho, d: u32, sign: Sign) {
        if let Ok(i) = self.position(rho, d) {
            self.blocks[i].sign = sign;
        }
    }

    pub fn map_signs(&mut self, mut f: impl FnMut(&JordanBlock) -> Sign) {
        for b in &mut self.blocks {
            b.sign = f(b);
        }
    }

    /// Total `Σ dim ρ · d · mult`.
    pub fn dim(&self) -> i64 {
        self.blocks
            .iter()
            .map(|b| b.rho.dim() as i64 * b.d as i64 * b.mult as i64)
            .sum()
    }

    /// `η(z_φ)` over the signed blocks.
    pub fn central_sign(&self) -> Sign {
        self.blocks
            .iter()
            .filter(|b| b.sign != Sign::Unset)
            .fold(Sign::Plus, |acc, b| acc.times(b.sign.pow(b.mult)))
    }

    pub fn rank(&self, group: GroupType) -> Result<i64> {
        let dim = self.dim();
        match &self.sigma {
            Some(s) if dim % 2 == 0 => Ok(s.rank as i64 + dim / 2),
            Some(_) => Err(Error::validation("blocks over an anchor must have even total dimension")),
            None if (dim - group.dim_offset()) % 2 == 0 && dim >= group.dim_offset() => {
                Ok((dim - group.dim_offset()) / 2)
            }
            None => Err(Error::validation(format!(
                "dim φ = {dim} is inconsistent with {}",
                group.name()
            ))),
        }
    }

    pub fn rhos(&self) -> Vec<Rho> {
        let mut v: Vec<Rho> = self.blocks.iter().map(|b| b.rho.clone()).collect();
        v.dedup();
        v
    }

    pub fn blocks_of<'a>(&'a self, rho: &'a Rho) -> impl Iterator<Item = &'a JordanBlock> + 'a {
        self.blocks.iter().filter(move |b| b.rho == *rho)
    }

    pub fn retain(&mut self, f: impl FnMut(&JordanBlock) -> bool) {
        self.blocks.retain(f);
    }
}

/// `L(Δ_1, …, Δ_r; π(φ, η))` in canonical segment order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LanglandsDatum {
    pub group: GroupType,
    segments: Vec<Segment>,
    pub temp: TemperedData,
}

impl LanglandsDatum {
    pub fn new(group: GroupType, segments: Vec<Segment>, temp: TemperedData) -> Self {
        let mut d = LanglandsDatum { group, segments, temp };
        d.canonicalize();
        d
    }

    pub fn tempered(group: GroupType, temp: TemperedData) -> Self {
        LanglandsDatum { group, segments: Vec::new(), temp }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn into_parts(self) -> (GroupType, Vec<Segment>, TemperedData) {
        (self.group, self.segments, self.temp)
    }

    pub fn canonicalize(&mut self) {
        self.segments.retain(|s| !s.is_empty());
        self.segments.sort();
    }

    pub fn push(&mut self, s: Segment) {
        if !s.is_empty() {
            let i = self.segments.partition_point(|t| t <= &s);
            self.segments.insert(i, s);
        }
    }

    pub fn is_tempered(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn with_segments(&self, segments: Vec<Segment>) -> Self {
        LanglandsDatum::new(self.group, segments, self.temp.clone())
    }

    pub fn rank(&self) -> Result<i64> {
        let segs: i64 = self.segments.iter().map(Segment::gl_size).sum();
        Ok(segs + self.temp.rank(self.group)?)
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let group = self.group;
        let mut needs_sigma = false;
        for (i, s) in self.segments.iter().enumerate() {
            if s.x.int_diff(s.y).is_none_or(|n| n < 0) {
                return Err(Error::validation(format!("segment [{},{}] is not valid", s.x, s.y)));
            }
            if i > 0 && self.segments[i - 1] > *s {
                return Err(Error::validation("segments are not in canonical order"));
            }
            match classify_point(&s.rho, s.x, group) {
                LineClass::Ugly => {
                    needs_sigma = true;
                    if s.rho.id() > s.rho.dual_id() {
                        return Err(Error::validation(format!(
                            "ugly segment on non-canonical base {}",
                            s.rho.id()
                        )));
                    }
                }
                LineClass::Bad => {
                    needs_sigma = true;
                    if !(s.x + s.y).is_negative() {
                        return Err(Error::validation(format!("segment [{},{}] has x + y ≥ 0", s.x, s.y)));
                    }
                }
                LineClass::Good => {
                    if !(s.x + s.y).is_negative() {
                        return Err(Error::validation(format!("segment [{},{}] has x + y ≥ 0", s.x, s.y)));
                    }
                }
            }
        }
        for b in self.temp.blocks() {
            if b.mult == 0 || b.d == 0 {
                return Err(Error::validation("empty Jordan block"));
            }
            match classify_block(&b.rho, b.d, group) {
                LineClass::Ugly => {
                    return Err(Error::validation(format!(
                        "Jordan block on non-self-dual {}",
                        b.rho.id()
                    )))
                }
                LineClass::Bad => {
                    needs_sigma = true;
                    if b.sign != Sign::Unset {
                        return Err(Error::validation(format!(
                            "bad-parity block {}@{} must be unsigned",
                            b.d,
                            b.rho.id()
                        )));
                    }
                    if b.mult % 2 != 0 {
                        return Err(Error::validation(format!(
                            "bad-parity block {}@{} needs even multiplicity",
                            b.d,
                            b.rho.id()
                        )));
                    }
                }
                LineClass::Good => {
                    if b.sign == Sign::Unset {
                        return Err(Error::validation(format!(
                            "good-parity block {}@{} needs a sign",
                            b.d,
                            b.rho.id()
                        )));
                    }
                }
            }
        }
        if self.temp.central_sign() != Sign::Plus {
            return Err(Error::validation("sign character is nontrivial on z_φ"));
        }
        if needs_sigma && self.temp.sigma.is_none() {
            return Err(Error::validation("bad or ugly data needs a cuspidal anchor"));
        }
        self.rank()?;
        Ok(())
    }

    /// Segments on `ρ`, with their positions.
    pub fn segments_on<'a>(&'a self, rho: &'a Rho) -> impl Iterator<Item = (usize, &'a Segment)> + 'a {
        self.segments.iter().enumerate().filter(move |(_, s)| s.rho == *rho)
    }
}

impl PartialOrd for LanglandsDatum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LanglandsDatum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.group
            .cmp(&other.group)
            .then_with(|| self.segments.cmp(&other.segments))
            .then_with(|| self.temp.sigma.cmp(&other.temp.sigma))
            .then_with(|| self.temp.blocks.cmp(&other.temp.blocks))
    }
}

fn rho_suffix(rho: &Rho) -> String {
    if rho.is_default() {
        String::new()
    } else {
        format!("@{}", rho.id())
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[{},{}]{}", self.x, self.y, rho_suffix(&self.rho))
    }
}

impl fmt::Display for TemperedData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items = Vec::new();
        for b in &self.blocks {
            for _ in 0..b.mult {
                items.push(format!("{}{}{}", b.d, b.sign.symbol(), rho_suffix(&b.rho)));
            }
        }
        write!(f, "pi({})", items.join(","))?;
        if let Some(s) = &self.sigma {
            write!(f, "*{}", s.id)?;
        }
        Ok(())
    }
}

impl fmt::Display for LanglandsDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            return write!(f, "{}", self.temp);
        }
        let segs: Vec<String> = self.segments.iter().map(|s| s.to_string()).collect();
        write!(f, "L({};{})", segs.join(","), self.temp)
    }
}
