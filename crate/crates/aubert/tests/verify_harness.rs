use aubert::duality::{dual, enumerate_reps, verify, verify_data, verify_data_with, EnumParams};
use aubert::model::{GroupType, LanglandsDatum};
use aubert::Result;

fn family() -> Vec<LanglandsDatum> {
    enumerate_reps(&EnumParams::trivial_good(GroupType::SpEven, 3, 5)).unwrap()
}

#[test]
fn small_families_pass() {
    for group in [GroupType::SpEven, GroupType::SOodd] {
        let report = verify(&EnumParams::trivial_good(group, 3, 5), false).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.checks_of("involution") > 0);
    }
}

#[test]
fn schedule_does_not_change_the_report() {
    let data = family();
    assert_eq!(verify_data(&data, true), verify_data(&data, false));
}

#[test]
fn identity_dual_is_caught() {
    let data = family();
    let report = verify_data_with(&data, false, &|d: &LanglandsDatum| -> Result<LanglandsDatum> { Ok(d.clone()) });
    assert!(!report.passed());
    assert!(report.failures_of("commutation") > 0);
    let first = report.first.expect("a counterexample");
    assert_eq!(first.law, "commutation");
}

#[test]
fn non_involutive_dual_is_caught() {
    let data = family();
    let target = data.iter().find(|d| dual(d).unwrap().0 != **d).unwrap().clone();
    let broken = move |d: &LanglandsDatum| -> Result<LanglandsDatum> {
        if *d == target {
            Ok(d.clone())
        } else {
            dual(d).map(|x| x.0)
        }
    };
    let report = verify_data_with(&data, false, &broken);
    assert!(report.failures_of("involution") > 0);
}
