//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use aubert::duality::{dual, verify_data, enumerate_reps, DualTrace, EnumParams, Report};
use aubert::matching::{best_match, hall_check};
use aubert::model::{GroupType, LanglandsDatum};
use aubert::parse::{parse_rep, Decls};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn sp(s: &str) -> LanglandsDatum {
    parse_rep(s, &Decls::standard(GroupType::SpEven)).expect("golden input parses")
}

/// `(name, after)` for each derivative or socle step, in trace order.
fn chain(trace: &DualTrace) -> Vec<(String, String)> {
    trace
        .steps
        .iter()
        .filter(|s| s.is_derivative() || s.is_socle())
        .map(|s| (s.name(), s.after.to_string()))
        .collect()
}

fn expect_chain(trace: &DualTrace, want: &[(&str, &str)]) -> Result<(), String> {
    let got = chain(trace);
    let want: Vec<(String, String)> = want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    if got == want {
        Ok(())
    } else {
        Err(format!("trace mismatch\n  got  {got:?}\n  want {want:?}"))
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn golden_one() -> Outcome {
    let input = sp("L(D[0,-2],D[0,-1];pi(3+))");
    let (res, took) = timed(|| dual(&input));
    let (hat, trace) = res.map_err(|e| e.to_string())?;
    if hat != input {
        return Err(format!("dual is {hat}, expected the input back"));
    }
    expect_chain(
        &trace,
        &[
            ("D_{D[0,-1]}^(2)", "L(D[-2,-2];pi(3+))"),
            ("D_{|.|^-2}^(1)", "pi(3+)"),
            ("D_{|.|^1}^(1)", "pi(1+)"),
            ("S_{|.|^-1}^(1)", "L(D[-1,-1];pi(1+))"),
            ("S_{|.|^2}^(1)", "L(D[-1,-2];pi(1+))"),
            ("S_{Z[0,1]}^(2)", "L(D[0,-2],D[0,-1];pi(3+))"),
        ],
    )?;
    if took >= Duration::from_millis(10) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("self-dual, six-step chain reproduced in {took:?}"))
}

fn golden_two() -> Outcome {
    let t = Instant::now();
    let left = dual(&sp("pi(1+,1+,3+,5-,5-)")).map_err(|e| e.to_string())?;
    expect_chain(
        &left.1,
        &[
            ("D_{|.|^2}^(1)", "L(D[1,-2];pi(1+,1+,3+))"),
            ("D_{|.|^1}^(2)", "L(D[0,-2];pi(1+,1+,1+))"),
            ("D_{|.|^2}^(1)", "L(D[0,-1];pi(1+,1+,1+))"),
            ("D_{D[0,-1]}^(1)", "pi(1+,1+,1+)"),
            ("S_{Z[0,1]}^(1)", "pi(1-,1-,1-,1-,3+)"),
            ("S_{|.|^-2}^(1)", "L(D[-2,-2];pi(1-,1-,1-,1-,3+))"),
            ("S_{|.|^-1}^(2)", "L(D[-1,-2],D[-1,-1];pi(1-,1-,1-,1-,3+))"),
            ("S_{|.|^-2}^(1)", "L(D[-2,-2],D[-1,-2],D[-1,-1];pi(1-,1-,1-,1-,3+))"),
        ],
    )?;
    let right = dual(&sp("pi(1-,1-,3+,5-,5-)")).map_err(|e| e.to_string())?;
    expect_chain(
        &right.1,
        &[
            ("D_{|.|^2}^(1)", "L(D[1,-2];pi(1-,1-,3+))"),
            ("D_{|.|^1}^(1)", "L(D[0,-2];pi(1-,1-,3+))"),
            ("D_{D[0,-1]}^(1)", "L(D[-2,-2];pi(1-,1-,3+))"),
            ("D_{|.|^-2}^(1)", "pi(1-,1-,3+)"),
            ("S_{|.|^2}^(1)", "L(D[0,-2];pi(1+))"),
            ("S_{Z[0,1]}^(1)", "L(D[0,-2];pi(1-,1-,3+))"),
            ("S_{|.|^-1}^(1)", "L(D[-1,-1],D[0,-2];pi(1-,1-,3+))"),
            ("S_{|.|^-2}^(1)", "L(D[-2,-2],D[-1,-1],D[0,-2];pi(1-,1-,3+))"),
        ],
    )?;
    let base = right.1.steps.iter().find(|s| !s.is_derivative() && !s.is_socle()).map(|s| s.after.to_string());
    if base.as_deref() != Some("L(D[0,-1];pi(1+))") {
        return Err(format!("tempered base case gave {base:?}"));
    }
    let third = dual(&sp("pi(3+,5-,5-)")).map_err(|e| e.to_string())?.0;
    let want = [
        (&left.0, "L(D[-2,-2],D[-1,-2],D[-1,-1];pi(1-,1-,1-,1-,3+))"),
        (&right.0, "L(D[-2,-2],D[-1,-1],D[0,-2];pi(1-,1-,3+))"),
        (&third, "L(D[-2,-2],D[-1,-2],D[-1,-1];pi(1-,1-,3+))"),
    ];
    for (got, want) in want {
        if *got != sp(want) {
            return Err(format!("got {got}, want {want}"));
        }
    }
    let fixed = sp("L(D[0,-2];pi(1-,1-,3+))");
    if dual(&fixed).map_err(|e| e.to_string())?.0 != fixed {
        return Err("L(D[0,-2];pi(1-,1-,3+)) is not fixed".into());
    }
    let took = t.elapsed();
    if took >= Duration::from_millis(50) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("three duals and both columns reproduced in {took:?}"))
}

fn laws(report: &Report, names: &[&str]) -> Result<u64, String> {
    let mut total = 0;
    for &law in names {
        let checks = report.checks_of(law);
        if checks == 0 {
            return Err(format!("law {law} was never exercised"));
        }
        if report.failures_of(law) > 0 {
            return Err(format!(
                "{} failures of {law}; first: {}",
                report.failures_of(law),
                report.first.as_ref().map(|v| v.to_string()).unwrap_or_default()
            ));
        }
        total += checks;
    }
    Ok(total)
}

fn involution(report: &Report, took: Duration) -> Outcome {
    let n = laws(report, &["involution", "scan-order+replay", "rank", "reducedness"])?;
    if report.data < 1000 {
        return Err(format!("family has only {} data", report.data));
    }
    if took >= Duration::from_secs(60) {
        return Err(format!("suite took {took:?}"));
    }
    Ok(format!("{} data, {n} checks, full suite {took:?} single-threaded", report.data))
}

fn commutation(report: &Report) -> Outcome {
    let n = laws(report, &["commutation", "commutation:D[0,-1]/Z[0,1]"])?;
    Ok(format!("{n} checks"))
}

fn inverse_laws(report: &Report) -> Outcome {
    let n = laws(
        report,
        &[
            "inverse:S(k)D(k)",
            "inverse:D(k+1)S(1)",
            "inverse:z01 S(k)D(k)",
            "inverse:z01 D(k+1)S(1)",
            "inverse:arthur",
        ],
    )?;
    Ok(format!("{n} checks; {} Z[0,1]-socles outside the formulas' domain", report.out_of_domain))
}

fn irreducibility(report: &Report) -> Outcome {
    let n = laws(report, &["irreducibility", "irreducibility:tempered"])?;
    Ok(format!("{n} verdicts agree"))
}

/// Adds `b1 ⇝ a2` whenever `b1 ⇝ a1`, `b2 ⇝ a1`, `b2 ⇝ a2` with `a1 ≥ a2`,
/// `b1 ≥ b2`, until the relation is traversable.
fn repair(rel: &mut [Vec<bool>], na: usize, nb: usize) {
    loop {
        let mut changed = false;
        for a1 in 0..na {
            for a2 in 0..=a1 {
                for b1 in 0..nb {
                    for b2 in 0..=b1 {
                        if rel[b1][a1] && rel[b2][a1] && rel[b2][a2] && !rel[b1][a2] {
                            rel[b1][a2] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

fn brute_max(rel: &[Vec<bool>], a: usize, na: usize, used: &mut Vec<bool>) -> usize {
    if a == na {
        return 0;
    }
    let mut best = brute_max(rel, a + 1, na, used);
    for b in 0..used.len() {
        if !used[b] && rel[b][a] {
            used[b] = true;
            best = best.max(1 + brute_max(rel, a + 1, na, used));
            used[b] = false;
        }
    }
    best
}

fn brute_hall(rel: &[Vec<bool>], na: usize, nb: usize) -> bool {
    (0u32..1 << na).all(|mask| {
        let size = mask.count_ones() as usize;
        let nbhd = (0..nb).filter(|&b| (0..na).any(|a| mask >> a & 1 == 1 && rel[b][a])).count();
        nbhd >= size
    })
}

fn matching_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let instances = 12_000;
    for i in 0..instances {
        let na = rng.gen_range(0..=6);
        let nb = rng.gen_range(0..=6);
        let density = rng.gen_range(0.05..0.7);
        let mut rel = vec![vec![false; na]; nb];
        for row in rel.iter_mut() {
            for cell in row.iter_mut() {
                *cell = rng.gen_bool(density);
            }
        }
        repair(&mut rel, na, nb);
        let r = best_match(na, nb, |b, a| rel[b][a]);
        let want = brute_max(&rel, 0, na, &mut vec![false; nb]);
        let valid = r.f.iter().all(|&(a, b)| rel[b][a])
            && r.a0.len() == r.f.len()
            && r.b0.len() == r.f.len();
        if !valid || r.f.len() != want {
            return Err(format!("instance {i}: best_match size {} vs brute {want}, rel {rel:?}", r.f.len()));
        }
        if hall_check(na, nb, |b, a| rel[b][a]) != brute_hall(&rel, na, nb) {
            return Err(format!("instance {i}: hall_check disagrees, rel {rel:?}"));
        }
    }
    Ok(format!("{instances} random traversable instances"))
}

fn main() -> ExitCode {
    let params = EnumParams::trivial_good(GroupType::SpEven, 5, 7);
    let ((family_report, took), enum_err) = match enumerate_reps(&params) {
        Ok(data) => (timed(|| verify_data(&data, false)), None),
        Err(e) => ((Report::default(), Duration::ZERO), Some(e.to_string())),
    };
    let suite = |f: &dyn Fn(&Report) -> Outcome| match &enum_err {
        Some(e) => Err(format!("enumeration failed: {e}")),
        None => f(&family_report),
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("1 golden example 1", golden_one()),
        ("2 golden example 2", golden_two()),
        ("3 involution suite", suite(&|r| involution(r, took))),
        ("4 commutation suite", suite(&commutation)),
        ("5 inverse-law suite", suite(&inverse_laws)),
        ("6 irreducibility criterion", suite(&irreducibility)),
        ("7 matching oracle", matching_oracle()),
    ];
    let mut ok = true;
    for (name, outcome) in &results {
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                ok = false;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
