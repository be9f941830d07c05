use hopfore_cli::config::ConfigFile;
use hopfore_cli::parse::{parse_cyc, parse_module_expr, parse_ring_expr};
use hopfore_cli::CliError;

fn params(text: &str) -> hopfore::hopfdata::HopfParams {
    ConfigFile::from_str(text).unwrap().params().unwrap()
}

const S3: &str = include_str!("fixtures/case3_s3_sbar6.json");
const CASE1: &str = include_str!("fixtures/case1.json");

#[test]
fn single_nil_label() {
    let p = params(S3);
    let d = parse_module_expr("V1(eps)", &p).unwrap();
    assert_eq!(d.to_string(), "V1(eps)");
}

#[test]
fn weighted_sum_with_w_module() {
    let p = params(S3);
    let d = parse_module_expr("2*V3(chr(tor=[1])) + W1(eps; eta=z)", &p).unwrap();
    assert_eq!(d.iter().count(), 2);
    assert_eq!(d.iter().map(|(_, m)| m).sum::<u64>(), 3);
}

#[test]
fn zero_eta_is_rejected() {
    let p = params(S3);
    let e = parse_module_expr("W2(eps; eta=0)", &p).unwrap_err();
    assert_eq!(e.exit_code(), 4);
}

#[test]
fn w_modules_need_finite_chi() {
    let p = params(CASE1);
    assert!(parse_module_expr("W1(eps; eta=1)", &p).is_err());
}

#[test]
fn syntax_errors_carry_position() {
    let p = params(S3);
    match parse_module_expr("V1(eps) +", &p) {
        Err(CliError::Syntax { pos, .. }) => assert_eq!(pos, 9),
        other => panic!("expected syntax error, got {other:?}"),
    }
    assert!(parse_module_expr("V0(eps)", &p).is_err());
    assert!(parse_module_expr("V2(eps", &p).is_err());
}

#[test]
fn cyclotomic_arithmetic() {
    let a = parse_cyc("(1+z)^2 - 2*z", 6).unwrap();
    let b = parse_cyc("1 + z^2", 6).unwrap();
    assert_eq!(a, b);
    assert_eq!(parse_cyc("z^6", 6).unwrap(), parse_cyc("1", 6).unwrap());
    assert!(parse_cyc("1/0", 6).is_err());
}

#[test]
fn ring_expressions_parse() {
    let p = params(S3);
    for text in ["y^2 - chi", "z*x[1] + 3", "(y + V2(eps))^2", "chi^-1 * W1(eps; eta=1)"] {
        parse_ring_expr(text, &p).unwrap_or_else(|e| panic!("{text}: {e}"));
    }
}

#[test]
fn config_rejects_unknown_fields() {
    assert!(ConfigFile::from_str(r#"{"N":2,"group":{"free_rank":0,"torsion":[2]},"a":[1],"chi":{"tor":[1]},"extra":1}"#).is_err());
}
