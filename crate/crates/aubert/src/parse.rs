//! Declaration headers, the textual representation grammar, and the JSON mirror.
//!
//! ```text
//! group Sp|SO
//! rho <id> dim=<int> type=orth|symp|none [dual=<id>]
//! sigma <id> rank=<int>
//!
//! rep   := "L(" seg ("," seg)* ";" temp ")" | temp
//! seg   := "D[" half "," half "]" ["@" id]
//! temp  := "pi(" [block ("," block)*] ")" ["*" sigma-id]
//! block := int ("+"|"-"|".") ["@" id] ["^" int]
//! half  := int | int "/2"
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::model::{
    GroupType, LanglandsDatum, Rho, RhoLabel, Segment, SelfDual, Sigma, Sign, TemperedData,
};

/// Declared supercuspidal labels and anchors.
#[derive(Clone, Debug)]
pub struct Decls {
    pub group: GroupType,
    rhos: Vec<Rho>,
    sigmas: Vec<Sigma>,
}

struct RhoDecl {
    id: String,
    dim: u32,
    self_dual: SelfDual,
    dual: Option<String>,
}

impl Decls {
    /// One orthogonal character `1` of `GL_1`, used when no header is given.
    pub fn standard(group: GroupType) -> Self {
        Decls { group, rhos: vec![Rho::trivial("1")], sigmas: Vec::new() }
    }

    pub fn rhos(&self) -> &[Rho] {
        &self.rhos
    }

    pub fn sigmas(&self) -> &[Sigma] {
        &self.sigmas
    }

    pub fn rho(&self, id: &str) -> Option<&Rho> {
        self.rhos.iter().find(|r| r.id() == id)
    }

    pub fn sigma(&self, id: &str) -> Option<&Sigma> {
        self.sigmas.iter().find(|s| s.id == id)
    }

    pub fn default_rho(&self) -> Option<&Rho> {
        self.rhos.iter().find(|r| r.is_default())
    }

    pub fn dual_of(&self, rho: &Rho) -> Option<&Rho> {
        self.rho(rho.dual_id())
    }

    /// Canonical member of the pair `{ρ, ρ∨}` (smaller identifier).
    pub fn canonical(&self, rho: &Rho) -> Rho {
        if rho.is_self_dual() || rho.id() <= rho.dual_id() {
            rho.clone()
        } else {
            self.dual_of(rho).cloned().unwrap_or_else(|| rho.clone())
        }
    }

    pub fn add_sigma(&mut self, sigma: Sigma) {
        if self.sigma(&sigma.id).is_none() {
            self.sigmas.push(sigma);
        }
    }

    fn build(group: GroupType, decls: Vec<RhoDecl>, sigmas: Vec<Sigma>) -> Result<Self> {
        let mut all: Vec<RhoDecl> = Vec::new();
        for d in decls {
            if all.iter().any(|e| e.id == d.id) {
                return Err(Error::validation(format!("ρ `{}` declared twice", d.id)));
            }
            all.push(d);
        }
        let mut implied = Vec::new();
        for d in &all {
            match (d.self_dual, &d.dual) {
                (SelfDual::None, None) => {
                    return Err(Error::validation(format!(
                        "non-self-dual ρ `{}` needs dual=<id>",
                        d.id
                    )))
                }
                (SelfDual::None, Some(dual)) if *dual == d.id => {
                    return Err(Error::validation(format!("ρ `{}` cannot be its own dual", d.id)))
                }
                (SelfDual::None, Some(dual)) => match all.iter().find(|e| e.id == *dual) {
                    Some(e) if e.self_dual != SelfDual::None || e.dim != d.dim => {
                        return Err(Error::validation(format!(
                            "ρ `{}` and its dual `{}` disagree",
                            d.id, dual
                        )))
                    }
                    Some(e) if e.dual.as_deref() != Some(d.id.as_str()) => {
                        return Err(Error::validation(format!(
                            "dual of `{}` does not point back to `{}`",
                            dual, d.id
                        )))
                    }
                    Some(_) => {}
                    None => implied.push(RhoDecl {
                        id: dual.clone(),
                        dim: d.dim,
                        self_dual: SelfDual::None,
                        dual: Some(d.id.clone()),
                    }),
                },
                (_, Some(dual)) if *dual != d.id => {
                    return Err(Error::validation(format!(
                        "self-dual ρ `{}` has dual `{}`",
                        d.id, dual
                    )))
                }
                _ => {}
            }
        }
        all.extend(implied);
        let self_dual_count = all.iter().filter(|d| d.self_dual != SelfDual::None).count();
        let mut rhos: Vec<Rho> = all
            .into_iter()
            .map(|d| {
                let is_default = self_dual_count == 1 && d.self_dual != SelfDual::None;
                Rho::new(RhoLabel {
                    dual_id: d.dual.unwrap_or_else(|| d.id.clone()),
                    id: d.id,
                    dim: d.dim,
                    self_dual: d.self_dual,
                    is_default,
                })
            })
            .collect();
        rhos.sort();
        Ok(Decls { group, rhos, sigmas })
    }
}

/// A parsed input file: declarations and the expression lines that follow.
#[derive(Clone, Debug)]
pub struct Document {
    pub decls: Decls,
    /// `(1-based line number, text)`.
    pub expressions: Vec<(usize, String)>,
}

fn header_error(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Syntax { pos: line, msg: format!("line {line}: {msg}") }
}

/// Splits an input into header declarations and expressions. Without `rho`
/// lines the standard declaration is used; `group` overrides `default_group`.
pub fn parse_document(text: &str, default_group: GroupType) -> Result<Document> {
    let mut group = default_group;
    let mut rhos = Vec::new();
    let mut sigmas: Vec<Sigma> = Vec::new();
    let mut expressions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or("");
        match head {
            "group" => {
                group = match words.next() {
                    Some("Sp") => GroupType::SpEven,
                    Some("SO") => GroupType::SOodd,
                    other => return Err(header_error(line_no, format!("unknown group {other:?}"))),
                }
            }
            "rho" => {
                let id = words.next().ok_or_else(|| header_error(line_no, "missing ρ identifier"))?;
                check_ident(id).map_err(|m| header_error(line_no, m))?;
                let mut dim = None;
                let mut self_dual = None;
                let mut dual = None;
                for w in words {
                    let (k, v) = w
                        .split_once('=')
                        .ok_or_else(|| header_error(line_no, format!("expected key=value, got `{w}`")))?;
                    match k {
                        "dim" => {
                            dim = Some(v.parse::<u32>().ok().filter(|&d| d > 0).ok_or_else(|| {
                                header_error(line_no, format!("bad dimension `{v}`"))
                            })?)
                        }
                        "type" => {
                            self_dual = Some(match v {
                                "orth" => SelfDual::Orthogonal,
                                "symp" => SelfDual::Symplectic,
                                "none" => SelfDual::None,
                                _ => return Err(header_error(line_no, format!("unknown type `{v}`"))),
                            })
                        }
                        "dual" => {
                            check_ident(v).map_err(|m| header_error(line_no, m))?;
                            dual = Some(v.to_string())
                        }
                        _ => return Err(header_error(line_no, format!("unknown key `{k}`"))),
                    }
                }
                rhos.push(RhoDecl {
                    id: id.to_string(),
                    dim: dim.ok_or_else(|| header_error(line_no, "missing dim="))?,
                    self_dual: self_dual.ok_or_else(|| header_error(line_no, "missing type="))?,
                    dual,
                });
            }
            "sigma" => {
                let id = words.next().ok_or_else(|| header_error(line_no, "missing σ identifier"))?;
                check_ident(id).map_err(|m| header_error(line_no, m))?;
                let rank = words
                    .next()
                    .and_then(|w| w.strip_prefix("rank="))
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(|| header_error(line_no, "expected rank=<int>"))?;
                if sigmas.iter().any(|s| s.id == id) {
                    return Err(header_error(line_no, format!("σ `{id}` declared twice")));
                }
                sigmas.push(Sigma { id: id.to_string(), rank });
            }
            _ => expressions.push((line_no, line.to_string())),
        }
    }
    let decls = if rhos.is_empty() {
        Decls { group, rhos: vec![Rho::trivial("1")], sigmas }
    } else {
        Decls::build(group, rhos, sigmas)?
    };
    Ok(Document { decls, expressions })
}

fn check_ident(s: &str) -> std::result::Result<(), String> {
    if !s.is_empty() && s.chars().all(is_ident_char) {
        Ok(())
    } else {
        Err(format!("invalid identifier `{s}`"))
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let text = &self.src[start..end];
        let value = text.parse::<i64>().map_err(|_| self.err("expected an integer"))?;
        self.pos = end;
        Ok(value)
    }

    fn half(&mut self) -> Result<HalfInt> {
        let n = self.int()?;
        if self.eat("/") {
            let at = self.pos;
            let den = self.int()?;
            if den != 2 {
                return Err(Error::Syntax { pos: at, msg: "only the denominator 2 is allowed".into() });
            }
            Ok(HalfInt::from_twice(n))
        } else {
            Ok(HalfInt::int(n))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.src[start..]
            .chars()
            .take_while(|&c| is_ident_char(c))
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return Err(self.err("expected an identifier"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }
}

fn lookup_rho(decls: &Decls, cur: &mut Cursor<'_>) -> Result<Rho> {
    if cur.eat("@") {
        let at = cur.pos;
        let id = cur.ident()?;
        decls
            .rho(id)
            .cloned()
            .ok_or_else(|| Error::Syntax { pos: at, msg: format!("undeclared ρ `{id}`") })
    } else {
        decls
            .default_rho()
            .cloned()
            .ok_or_else(|| cur.err("no default ρ: write @<id>"))
    }
}

/// Parses one expression in the text grammar, or its JSON mirror if it starts with `{`.
pub fn parse_rep(text: &str, decls: &Decls) -> Result<LanglandsDatum> {
    if text.trim_start().starts_with('{') {
        return parse_json(text, decls);
    }
    let mut cur = Cursor { src: text, pos: 0 };
    let mut segments = Vec::new();
    let temp;
    if cur.eat("L(") {
        loop {
            cur.expect("D[")?;
            let x = cur.half()?;
            cur.expect(",")?;
            let y = cur.half()?;
            cur.expect("]")?;
            let rho = lookup_rho(decls, &mut cur)?;
            segments.push(rebase_on_input(decls, rho, x, y)?);
            if cur.eat(";") {
                break;
            }
            cur.expect(",")?;
        }
        temp = parse_temp(&mut cur, decls)?;
        cur.expect(")")?;
    } else {
        temp = parse_temp(&mut cur, decls)?;
    }
    if cur.peek().is_some() {
        return Err(cur.err("unexpected trailing input"));
    }
    let segments = segments.into_iter().flatten().collect();
    let datum = LanglandsDatum::new(decls.group, segments, temp);
    datum.validate()?;
    Ok(datum)
}

/// Rewrites segments on a non-canonical ugly base onto its dual.
fn rebase_on_input(decls: &Decls, rho: Rho, x: HalfInt, y: HalfInt) -> Result<Option<Segment>> {
    let canon = decls.canonical(&rho);
    if canon == rho {
        Segment::try_new(rho, x, y)
    } else {
        Segment::try_new(canon, -y, -x)
    }
}

fn parse_temp(cur: &mut Cursor<'_>, decls: &Decls) -> Result<TemperedData> {
    cur.expect("pi(")?;
    let mut blocks = Vec::new();
    if !cur.eat(")") {
        loop {
            let at = cur.pos;
            let d = cur.int()?;
            if d <= 0 {
                return Err(Error::Syntax { pos: at, msg: "block size must be positive".into() });
            }
            let sign = if cur.eat("+") {
                Sign::Plus
            } else if cur.eat("-") {
                Sign::Minus
            } else if cur.eat(".") {
                Sign::Unset
            } else {
                return Err(cur.err("expected a sign `+`, `-` or `.`"));
            };
            let rho = lookup_rho(decls, cur)?;
            let mult = if cur.eat("^") {
                let at = cur.pos;
                let m = cur.int()?;
                if m <= 0 {
                    return Err(Error::Syntax { pos: at, msg: "multiplicity must be positive".into() });
                }
                m as u32
            } else {
                1
            };
            if !rho.is_self_dual() {
                return Err(Error::validation(format!("Jordan block on non-self-dual `{}`", rho.id())));
            }
            blocks.push((rho, d as u32, mult, sign));
            if cur.eat(")") {
                break;
            }
            cur.expect(",")?;
        }
    }
    let sigma = if cur.eat("*") {
        let at = cur.pos;
        let id = cur.ident()?;
        Some(
            decls
                .sigma(id)
                .cloned()
                .ok_or_else(|| Error::Syntax { pos: at, msg: format!("undeclared σ `{id}`") })?,
        )
    } else {
        None
    };
    let mut temp = TemperedData::new(sigma);
    for (rho, d, mult, sign) in blocks {
        temp.add(&rho, d, mult, sign)?;
    }
    Ok(temp)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub rho: String,
    pub x2: i64,
    pub y2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub rho: String,
    pub d: u32,
    pub mult: u32,
    pub sign: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub id: String,
    pub rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TempJson {
    pub sigma: Option<SigmaJson>,
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumJson {
    pub group: String,
    pub segments: Vec<SegmentJson>,
    pub temp: TempJson,
}

impl From<&LanglandsDatum> for DatumJson {
    fn from(d: &LanglandsDatum) -> Self {
        DatumJson {
            group: d.group.name().to_string(),
            segments: d
                .segments()
                .iter()
                .map(|s| SegmentJson { rho: s.rho.id().to_string(), x2: s.x.twice(), y2: s.y.twice() })
                .collect(),
            temp: TempJson {
                sigma: d.temp.sigma.as_ref().map(|s| SigmaJson { id: s.id.clone(), rank: s.rank }),
                blocks: d
                    .temp
                    .blocks()
                    .iter()
                    .map(|b| BlockJson {
                        rho: b.rho.id().to_string(),
                        d: b.d,
                        mult: b.mult,
                        sign: b.sign.symbol().to_string(),
                    })
                    .collect(),
            },
        }
    }
}

pub fn to_json(d: &LanglandsDatum) -> String {
    serde_json::to_string(&DatumJson::from(d)).expect("datum serializes")
}

pub fn parse_json(text: &str, decls: &Decls) -> Result<LanglandsDatum> {
    let dto: DatumJson = serde_json::from_str(text).map_err(|e| Error::Syntax {
        pos: e.column().saturating_sub(1),
        msg: e.to_string(),
    })?;
    from_json(&dto, decls)
}

pub fn from_json(dto: &DatumJson, decls: &Decls) -> Result<LanglandsDatum> {
    let group = match dto.group.as_str() {
        "Sp" => GroupType::SpEven,
        "SO" => GroupType::SOodd,
        g => return Err(Error::validation(format!("unknown group `{g}`"))),
    };
    let rho = |id: &str| {
        decls
            .rho(id)
            .cloned()
            .ok_or_else(|| Error::validation(format!("undeclared ρ `{id}`")))
    };
    let mut segments = Vec::new();
    for s in &dto.segments {
        if let Some(seg) = rebase_on_input(decls, rho(&s.rho)?, HalfInt::from_twice(s.x2), HalfInt::from_twice(s.y2))? {
            segments.push(seg);
        }
    }
    let sigma = dto.temp.sigma.as_ref().map(|s| Sigma { id: s.id.clone(), rank: s.rank });
    let mut temp = TemperedData::new(sigma);
    for b in &dto.temp.blocks {
        let sign = match b.sign.as_str() {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            "." => Sign::Unset,
            s => return Err(Error::validation(format!("unknown sign `{s}`"))),
        };
        if b.mult == 0 {
            return Err(Error::validation("zero multiplicity"));
        }
        temp.add(&rho(&b.rho)?, b.d, b.mult, sign)?;
    }
    let datum = LanglandsDatum::new(group, segments, temp);
    datum.validate()?;
    Ok(datum)
}
