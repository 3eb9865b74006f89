use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use aubert::calculus::{derivative_at, irreducible_at, socle_at, Point};
use aubert::duality::{dual, enumerate_reps, verify_data, DualTrace, EnumParams, Report};
use aubert::jantzen::{split, FactorClass};
use aubert::model::{ExpClass, GroupType, LanglandsDatum, RhoLine};
use aubert::parse::{parse_document, parse_rep, Decls, DatumJson};
use aubert::{Error, HalfInt};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Zelevinsky–Aubert duals, derivatives and socles for Sp and odd SO.
#[derive(Parser, Debug)]
#[command(name = "aubert", version)]
struct Cli {
    /// Group when the input has no `group` line.
    #[arg(long, value_enum, default_value_t = Group::Sp, global = true)]
    group: Group,
    /// File with a declaration header and expressions; `-` reads stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Group {
    Sp,
    So,
}

impl From<Group> for GroupType {
    fn from(g: Group) -> Self {
        match g {
            Group::Sp => GroupType::SpEven,
            Group::So => GroupType::SOodd,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zelevinsky–Aubert dual.
    Dual {
        expr: Option<String>,
        /// Print the derivative/socle steps.
        #[arg(long)]
        trace: bool,
    },
    /// Highest derivative at a point.
    Derive {
        expr: Option<String>,
        /// Point as `rho:x`; `rho` names the default ρ, `x` is `n` or `n/2`.
        #[arg(long)]
        at: String,
    },
    /// Socle of `(ρ|.|^x)^k ⋊ π`.
    Socle {
        expr: Option<String>,
        #[arg(long)]
        at: String,
        #[arg(long)]
        k: u32,
    },
    /// Whether `ρ|.|^x ⋊ π` is irreducible (good point, x > 0).
    Irred {
        expr: Option<String>,
        #[arg(long)]
        at: String,
    },
    /// Good, bad and ugly factors.
    Split { expr: Option<String> },
    /// Rank of the group the representation lives on.
    Rank { expr: Option<String> },
    /// Enumerates a family and checks every law on it.
    Selftest {
        #[arg(long, default_value_t = 4)]
        max_rank: u32,
        /// Largest Jordan block size.
        #[arg(long, default_value_t = 7)]
        max_d: u32,
        /// Lines as `id:int`, `id:half`, `id:ugly` or `id:ugly-half`; defaults
        /// to the good line through the trivial character.
        #[arg(long, value_delimiter = ',')]
        lines: Vec<String>,
        /// Anchor σ declared in the input header.
        #[arg(long)]
        sigma: Option<String>,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

impl Command {
    fn expr(&self) -> Option<&str> {
        match self {
            Command::Dual { expr, .. }
            | Command::Derive { expr, .. }
            | Command::Socle { expr, .. }
            | Command::Irred { expr, .. }
            | Command::Split { expr }
            | Command::Rank { expr } => expr.as_deref(),
            Command::Selftest { .. } => None,
        }
    }
}

/// A failure tied to one input line.
struct Failure {
    line: Option<usize>,
    expr: Option<String>,
    err: Error,
}

impl Failure {
    fn bare(err: Error) -> Self {
        Failure { line: None, expr: None, err }
    }

    fn report(&self) {
        match self.line {
            Some(n) => eprintln!("error (line {n}): {}", self.err),
            None => eprintln!("error: {}", self.err),
        }
        if let (Error::Syntax { pos, .. }, Some(expr)) = (&self.err, &self.expr) {
            eprintln!("  {expr}");
            eprintln!("  {}^", " ".repeat(*pos));
        }
    }
}

fn read_source(path: &PathBuf) -> Result<String, Error> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    text.map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))
}

/// Declarations plus `(line, expression)` pairs to evaluate.
fn load(cli: &Cli) -> Result<(Decls, Vec<(usize, String)>), Error> {
    let group = cli.group.into();
    let text = match (&cli.input, cli.command.expr()) {
        (Some(path), _) => read_source(path)?,
        (None, Some(_)) => String::new(),
        (None, None) if matches!(cli.command, Command::Selftest { .. }) => String::new(),
        (None, None) => read_source(&PathBuf::from("-"))?,
    };
    let doc = parse_document(&text, group)?;
    let exprs = match cli.command.expr() {
        Some(e) => vec![(0, e.to_string())],
        None => doc.expressions,
    };
    Ok((doc.decls, exprs))
}

fn parse_point(spec: &str, decls: &Decls) -> Result<Point, Error> {
    let (id, x) = spec
        .rsplit_once(':')
        .ok_or_else(|| Error::validation(format!("point `{spec}` is not of the form rho:x")))?;
    let x: HalfInt = x
        .parse()
        .map_err(|_| Error::validation(format!("bad exponent `{x}` in point `{spec}`")))?;
    let rho = if id == "rho" {
        decls.default_rho().ok_or_else(|| Error::validation("no default ρ is declared"))?
    } else {
        decls.rho(id).ok_or_else(|| Error::validation(format!("undeclared ρ `{id}`")))?
    };
    let base = decls.canonical(rho);
    Ok(if base == *rho { Point::new(base, x) } else { Point::on_dual(base, x) })
}

fn datum_value(d: &LanglandsDatum) -> Value {
    serde_json::to_value(DatumJson::from(d)).expect("datum serializes")
}

fn trace_value(trace: &DualTrace) -> Value {
    trace
        .steps
        .iter()
        .map(|s| json!({ "step": s.name(), "k": s.k, "before": s.before.to_string(), "after": s.after.to_string() }))
        .collect()
}

/// Derivative steps on the left, the matching socle steps on the right,
/// one block per Jantzen factor.
fn trace_table(trace: &DualTrace) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut rest = trace.steps.as_slice();
    while !rest.is_empty() {
        let downs = rest.iter().take_while(|s| s.is_derivative()).count();
        let end = (downs + 1 + downs).min(rest.len());
        let (factor, tail) = rest.split_at(end);
        rest = tail;
        let ups: Vec<_> = factor[downs..].iter().filter(|s| s.is_socle()).rev().collect();
        for (i, d) in factor[..downs].iter().enumerate() {
            let right = ups.get(i).map(|u| format!("{}  ^  {}", u.after, u.name())).unwrap_or_default();
            rows.push((format!("{}  |  {}", d.before, d.name()), right));
        }
        for b in factor.iter().filter(|s| !s.is_derivative() && !s.is_socle()) {
            rows.push((b.before.to_string(), format!("{}  (base case)", b.after)));
        }
    }
    let width = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (l, r) in rows {
        let pad = width - l.chars().count();
        out.push_str(&format!("{l}{}  <->  {r}\n", " ".repeat(pad)));
    }
    out
}

fn run_one(cli: &Cli, decls: &Decls, expr: &str) -> Result<String, Error> {
    let d = parse_rep(expr, decls)?;
    d.validate()?;
    Ok(match &cli.command {
        Command::Dual { trace, .. } => {
            let (hat, steps) = dual(&d)?;
            match (cli.json, trace) {
                (true, true) => json!({ "dual": datum_value(&hat), "trace": trace_value(&steps) }).to_string(),
                (true, false) => datum_value(&hat).to_string(),
                (false, true) => format!("{hat}\n{}", trace_table(&steps).trim_end()),
                (false, false) => hat.to_string(),
            }
        }
        Command::Derive { at, .. } => {
            let p = parse_point(at, decls)?;
            let r = derivative_at(&d, &p)?;
            if cli.json {
                json!({ "k": r.k, "value": datum_value(&r.value) }).to_string()
            } else {
                format!("k={} {}", r.k, r.value)
            }
        }
        Command::Socle { at, k, .. } => {
            let p = parse_point(at, decls)?;
            let s = socle_at(&d, &p, *k)?;
            if cli.json {
                datum_value(&s).to_string()
            } else {
                s.to_string()
            }
        }
        Command::Irred { at, .. } => {
            let p = parse_point(at, decls)?;
            let irr = irreducible_at(&d, &p)?;
            if cli.json {
                json!({ "point": p.to_string(), "irreducible": irr }).to_string()
            } else {
                if irr { "irreducible" } else { "reducible" }.to_string()
            }
        }
        Command::Split { .. } => {
            let factors = split(&d)?;
            let label = |c: &FactorClass| match c {
                FactorClass::Good => "good".to_string(),
                FactorClass::Bad(l) => format!("bad {l}"),
                FactorClass::Ugly(l) => format!("ugly {l}"),
            };
            if cli.json {
                let items: Vec<Value> = factors
                    .iter()
                    .map(|f| json!({ "class": label(&f.class), "datum": datum_value(&f.datum) }))
                    .collect();
                Value::Array(items).to_string()
            } else {
                factors.iter().map(|f| format!("{}: {}", label(&f.class), f.datum)).collect::<Vec<_>>().join("\n")
            }
        }
        Command::Rank { .. } => {
            let n = d.rank()?;
            if cli.json {
                json!({ "rank": n }).to_string()
            } else {
                n.to_string()
            }
        }
        Command::Selftest { .. } => unreachable!("selftest takes no expression"),
    })
}

fn parse_line(spec: &str, decls: &Decls) -> Result<RhoLine, Error> {
    let (id, class) = spec
        .split_once(':')
        .ok_or_else(|| Error::validation(format!("line `{spec}` is not of the form id:class")))?;
    let rho = decls.rho(id).ok_or_else(|| Error::validation(format!("undeclared ρ `{id}`")))?;
    let class = match class {
        "int" => ExpClass::Integral,
        "half" => ExpClass::HalfIntegral,
        "ugly" => ExpClass::Ugly { half_integral: false },
        "ugly-half" => ExpClass::Ugly { half_integral: true },
        _ => return Err(Error::validation(format!("unknown line class `{class}`"))),
    };
    Ok(RhoLine::new(decls.canonical(rho), class))
}

fn report_value(r: &Report) -> Value {
    let laws: serde_json::Map<String, Value> = r
        .checks
        .iter()
        .map(|(law, n)| (law.clone(), json!({ "checks": n, "failures": r.failures_of(law) })))
        .collect();
    json!({
        "data": r.data,
        "laws": laws,
        "out_of_domain": r.out_of_domain,
        "first": r.first.as_ref().map(|v| v.to_string()),
        "passed": r.passed(),
    })
}

fn selftest(cli: &Cli, decls: &Decls) -> Result<(String, bool), Error> {
    let Command::Selftest { max_rank, max_d, lines, sigma, sequential } = &cli.command else {
        unreachable!()
    };
    let mut params = EnumParams::trivial_good(decls.group, *max_rank, *max_d);
    if !lines.is_empty() {
        params.lines = lines.iter().map(|l| parse_line(l, decls)).collect::<Result<_, _>>()?;
    }
    if let Some(id) = sigma {
        let s = decls.sigma(id).ok_or_else(|| Error::validation(format!("undeclared σ `{id}`")))?;
        params.sigma = Some(s.clone());
    }
    let data = enumerate_reps(&params)?;
    let report = verify_data(&data, !sequential);
    let text = if cli.json { report_value(&report).to_string() } else { report.to_string() };
    Ok((text, report.passed()))
}

fn run(cli: &Cli) -> Result<(), Vec<Failure>> {
    let (decls, exprs) = load(cli).map_err(|e| vec![Failure::bare(e)])?;
    if matches!(cli.command, Command::Selftest { .. }) {
        let (text, passed) = selftest(cli, &decls).map_err(|e| vec![Failure::bare(e)])?;
        println!("{text}");
        return if passed {
            Ok(())
        } else {
            Err(vec![Failure::bare(Error::internal("self-test found counterexamples"))])
        };
    }
    if exprs.is_empty() {
        return Err(vec![Failure::bare(Error::validation("no expression given"))]);
    }
    let mut failures = Vec::new();
    for (line, expr) in exprs {
        match run_one(cli, &decls, &expr) {
            Ok(out) => println!("{out}"),
            Err(err) => failures.push(Failure { line: (line > 0).then_some(line), expr: Some(expr), err }),
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failures) => {
            for f in &failures {
                f.report();
            }
            let code = failures.iter().map(|f| f.err.exit_code()).max().unwrap_or(2);
            ExitCode::from(code as u8)
        }
    }
}
