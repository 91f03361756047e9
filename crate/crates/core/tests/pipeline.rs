use std::fs;
use std::path::PathBuf;

use wreathkit::equations::{check_system, parse_assignment, parse_system, serialize_assignment, serialize_system};
use wreathkit::reduction::compile;
use wreathkit::{GroupSpec, IntPolynomial, WreathElement};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn demo() -> (IntPolynomial, GroupSpec) {
    (IntPolynomial::parse("z1 - 2", 0).unwrap(), GroupSpec::new(1, 1).unwrap())
}

#[test]
fn demo_system_matches_golden_file() {
    let (f, spec) = demo();
    assert_eq!(serialize_system(&compile(&f, spec).system), golden("z1_minus_2.system"));
}

#[test]
fn demo_system_is_a_parse_fixed_point() {
    let (_, spec) = demo();
    let text = golden("z1_minus_2.system");
    let parsed = parse_system::<WreathElement>(&text, &spec).unwrap();
    assert_eq!(serialize_system(&parsed), text);
}

#[test]
fn demo_witness_matches_golden_file() {
    let (f, spec) = demo();
    let out = compile(&f, spec);
    let asg = out.witness(&[2]).unwrap();
    let text = golden("z1_minus_2_at_2.assignment");
    assert_eq!(serialize_assignment(&asg), text);
    let parsed = parse_assignment::<WreathElement>(&text, &spec).unwrap();
    assert_eq!(parsed, asg);
    let system = parse_system::<WreathElement>(&golden("z1_minus_2.system"), &spec).unwrap();
    assert!(check_system(&system, &parsed, &spec).unwrap().is_satisfied());
    assert_eq!(out.extract_solution(&parsed).unwrap(), [2]);
}

#[test]
fn wrong_solution_is_rejected_by_the_system() {
    let (f, spec) = demo();
    let out = compile(&f, spec);
    let shifted = compile(&IntPolynomial::parse("z1 - 3", 0).unwrap(), spec);
    let asg = shifted.witness(&[3]).unwrap();
    // same variable layout, different constants: z = 3 does not solve z - 2
    let report = check_system(&out.system, &asg, &spec).unwrap();
    assert!(!report.is_satisfied());
}

#[test]
fn product_coordinate_is_the_square_of_a1_minus_1() {
    let (f, spec) = demo();
    let out = compile(&f, spec);
    let asg = out.witness(&[2]).unwrap();
    let y = asg.get(out.product_var.as_deref().unwrap()).unwrap();
    assert_eq!(y.coordinate(0).to_string(), "a1^2 - 2*a1 + 1");
}
