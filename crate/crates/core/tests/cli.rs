use modp_entropy::cli::{parse_dist, run, Outcome, ParsedDist};
use modp_entropy::{Error, PrimeModulus};
use std::collections::BTreeMap;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("modp-entropy").chain(args.iter().copied()))
}

fn fields(out: &Outcome) -> Vec<(String, String)> {
    out.stdout
        .lines()
        .map(|line| {
            let (k, v) = line.split_once('=').expect("key=value line");
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn result(out: &Outcome) -> String {
    let fields = fields(out);
    let (key, value) = fields.last().expect("non-empty output");
    assert_eq!(key, "result", "last line must be result=");
    value.clone()
}

fn json_fields(out: &Outcome) -> BTreeMap<String, String> {
    let value: serde_json::Value = serde_json::from_str(&out.stdout).expect("json output");
    value
        .as_object()
        .expect("json object")
        .iter()
        .map(|(k, v)| (k.clone(), v.as_str().expect("string value").to_string()))
        .collect()
}

#[test]
fn entropy_of_four_ones_mod_three() {
    let out = cli(&["entropy", "3:1,1,1,1"]);
    assert_eq!(out.code, 0);
    assert_eq!(result(&out), "2");
}

#[test]
fn fermat_quotient_of_one() {
    let out = cli(&["fq", "--p", "5", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(result(&out), "0");
}

#[test]
fn negative_arguments_are_normalized() {
    assert_eq!(result(&cli(&["fq", "--p", "3", "-1"])), "0");
    assert_eq!(
        result(&cli(&["entropy", "3:-1,-1,0"])),
        result(&cli(&["entropy", "3:2,2,0"]))
    );
}

#[test]
fn fermat_quotient_of_multiple_of_p_is_a_usage_error() {
    let out = cli(&["fq", "--p", "5", "10"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"));
    assert_eq!(out.stderr.lines().count(), 1);
}

#[test]
fn pderivation() {
    // (2 - 8)/2 = -3 ≡ 1 mod 2
    assert_eq!(result(&cli(&["pderiv", "--p", "2", "2"])), "1");
}

#[test]
fn identities_pass_for_five() {
    let out = cli(&["identities", "--p", "5"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(result(&out), "pass");
    let keys: Vec<String> = fields(&out).into_iter().map(|(k, _)| k).collect();
    for key in [
        "seed",
        "cocycle",
        "grouping",
        "pounds1_formula",
        "pounds1_symmetry",
        "homogenization",
        "fundamental_pounds1",
        "fundamental_xp",
    ] {
        assert!(keys.iter().any(|k| k == key), "missing {key}");
    }
}

#[test]
fn seed_is_printed_and_settable() {
    let out = cli(&[
        "identities",
        "--p",
        "3",
        "--seed",
        "7",
        "--samples",
        "10",
        "--max-block",
        "3",
    ]);
    assert!(fields(&out).contains(&("seed".to_string(), "7".to_string())));
    assert_eq!(result(&out), "pass");
}

#[test]
fn uniform_and_compose_and_tensor() {
    let out = cli(&["uniform", "--p", "7", "6"]);
    assert_eq!(result(&out), "7:6,6,6,6,6,6");
    let out = cli(&["compose", "7:4,4", "7:6,6,6,6,6,6", "7:5,5,5"]);
    assert_eq!(result(&out), "7:3,3,3,3,3,3,6,6,6");
    let out = cli(&["tensor", "3:2,2", "3:1"]);
    assert_eq!(result(&out), "3:2,2");
    assert_eq!(cli(&["uniform", "--p", "3", "6"]).code, 2);
}

#[test]
fn measure_entropy_accepts_any_total() {
    let out = cli(&["measure-entropy", "3:1,1"]);
    assert_eq!(out.code, 0);
    // ((1+1)^3 - 2)/3 = 2
    assert_eq!(result(&out), "2");
}

#[test]
fn residue_of_equal_entropy_pair_agrees() {
    let a = cli(&["residue", "--p", "3", "1/2", "1/8", "1/8", "1/8", "1/8"]);
    let b = cli(&["residue", "--p", "3", "1/4", "1/4", "1/4", "1/4"]);
    assert_eq!(a.code, 0);
    assert_eq!(result(&a), result(&b));
    assert_eq!(cli(&["residue", "--p", "2", "1/2", "1/2"]).code, 2);
}

#[test]
fn real_eq_decides_exactly() {
    let out = cli(&["real-eq", "1/2 1/8 1/8 1/8 1/8", "1/4 1/4 1/4 1/4", "--p", "5"]);
    assert_eq!(out.code, 0);
    assert_eq!(result(&out), "true");
    let out = cli(&["real-eq", "1/2 1/2", "1/3 1/3 1/3"]);
    assert_eq!(result(&out), "false");
}

#[test]
fn interpolate_recovers_identity() {
    let out = cli(&["interpolate", "--p", "3", "--n", "1", "0", "1", "2"]);
    assert_eq!(result(&out), "x (mod 3)");
    assert_eq!(cli(&["interpolate", "--p", "3", "--n", "1", "0", "1"]).code, 2);
}

#[test]
fn characterize_small_system() {
    let out = cli(&["characterize", "--p", "2", "--max-arity", "3"]);
    assert_eq!(out.code, 0);
    let f: BTreeMap<_, _> = fields(&out).into_iter().collect();
    assert_eq!(f["unknowns"], "7");
    assert_eq!(f["kernel_dim"], "1");
    assert_eq!(f["contains_entropy"], "true");
    assert_eq!(f["kernel_is_span_of_entropy"], "true");
    assert_eq!(f["result"], "pass");
}

#[test]
fn characterize_guard_needs_override() {
    let out = cli(&["characterize", "--p", "13", "--max-arity", "6"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("error:"));
}

#[test]
fn verify_core_passes() {
    let out = cli(&["verify-core", "--p", "7"]);
    assert_eq!(out.code, 0);
    assert_eq!(result(&out), "pass");
    assert_eq!(cli(&["verify-core", "--p", "8"]).code, 2);
}

#[test]
fn loss_from_inline_json() {
    let map = r#"{"domain":{"p":3,"labels":["a","b","c","d"],"probs":[1,1,1,1]},
        "codomain":{"p":3,"labels":["x","y"],"probs":[2,2]},
        "mapping":{"a":"x","b":"x","c":"y","d":"y"}}"#;
    let out = cli(&["loss", map]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let f: BTreeMap<_, _> = fields(&out).into_iter().collect();
    // H(1,1,1,1) = 2, H(2,2) = (1 - 16)/3 = -5 ≡ 1
    assert_eq!(f["domain_entropy"], "2");
    assert_eq!(f["codomain_entropy"], "1");
    assert_eq!(f["result"], "1");
    assert_eq!(f["conditional"], "1");
}

#[test]
fn loss_from_file() {
    let dir = std::env::temp_dir().join(format!("modp-entropy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.json");
    std::fs::write(
        &path,
        r#"{"domain":{"p":2,"labels":["a","b","c"],"probs":[1,1,1]},"codomain":{"p":2,"labels":["*"],"probs":[1]},"mapping":{"a":"*","b":"*","c":"*"}}"#,
    )
    .unwrap();
    let out = cli(&["loss", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    // |supp| = 3 gives (3 - 1)/2 = 1
    assert_eq!(result(&out), "1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn loss_rejects_non_measure_preserving_maps() {
    let map = r#"{"domain":{"p":3,"labels":["a","b"],"probs":[2,2]},"codomain":{"p":3,"labels":["x","y"],"probs":[0,1]},"mapping":{"a":"x","b":"y"}}"#;
    let out = cli(&["loss", map]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        vec!["entropy", "3:1,1"],
        vec!["entropy", "nonsense"],
        vec!["frobnicate"],
        vec!["fq", "--p", "4", "3"],
        vec!["uniform", "7"],
    ] {
        let out = cli(&args);
        assert_eq!(out.code, 2, "{args:?}");
        assert_eq!(out.stderr.lines().count(), 1, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn sum_not_one_reports_sum() {
    let out = cli(&["entropy", "3:1,1"]);
    assert!(out.stderr.contains('2'), "{}", out.stderr);
}

#[test]
fn help_exits_zero() {
    let out = cli(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("characterize"));
}

#[test]
fn json_and_plain_outputs_have_identical_fields() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["entropy", "3:1,1,1,1"],
        vec!["measure-entropy", "5:1,2,3"],
        vec!["uniform", "--p", "5", "3"],
        vec!["fq", "--p", "7", "3"],
        vec!["residue", "--p", "5", "1/2", "1/4", "1/4"],
        vec!["real-eq", "1/2 1/2", "1/4 1/4 1/2", "--p", "3"],
        vec!["identities", "--p", "3", "--samples", "20", "--max-block", "3"],
        vec!["characterize", "--p", "2", "--max-arity", "3"],
        vec!["verify-core", "--p", "3"],
    ];
    for args in cases {
        let plain = cli(&args);
        let mut with_json = vec!["--json"];
        with_json.extend(&args);
        let json = cli(&with_json);
        assert_eq!(plain.code, json.code, "{args:?}");
        let plain: BTreeMap<_, _> = fields(&plain).into_iter().collect();
        assert_eq!(plain, json_fields(&json), "{args:?}");
    }
}

#[test]
fn parse_dist_examples() {
    let p3 = PrimeModulus::new(3).unwrap();
    match parse_dist("3:2,2").unwrap() {
        ParsedDist::Mod(d) => {
            assert_eq!(d.modulus(), p3);
            let values: Vec<u64> = d.probs().iter().map(|r| r.value()).collect();
            assert_eq!(values, vec![2, 2]);
        }
        other => panic!("{other:?}"),
    }
    match parse_dist("1/2 1/4 1/4").unwrap() {
        ParsedDist::Rational(d) => assert_eq!(d.len(), 3),
        other => panic!("{other:?}"),
    }
    match parse_dist("3:1,1") {
        Err(Error::SumNotOne { sum, p }) => {
            assert_eq!(sum, 2);
            assert_eq!(p, 3);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parsed_distributions_print_back_exactly() {
    for text in ["3:2,2", "7:3,3,3,3,3,3,6,6,6", "2:1", "1/2 1/4 1/4", "1/3 0 2/3"] {
        let printed = match parse_dist(text).unwrap() {
            ParsedDist::Mod(d) => d.to_string(),
            ParsedDist::Rational(d) => d.to_string(),
        };
        assert_eq!(printed, text);
    }
}
