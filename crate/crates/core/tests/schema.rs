use serde_json::Value;
use zigzag::cli::run;

fn validator(def: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json")).unwrap();
    let mut schema: Value = serde_json::from_str(&text).unwrap();
    schema["$ref"] = Value::String(format!("#/$defs/{def}"));
    jsonschema::validator_for(&schema).unwrap()
}

fn emit(args: &[&str]) -> Value {
    let out = run(std::iter::once("zigzag").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{doc}: {errors:?}");
}

#[test]
fn predictions_validate() {
    let v = validator("prediction");
    for (p, k, ap) in [
        ("5", "24", "p"),
        ("7", "11", "p^(3/2)"),
        ("5", "21", "(1+1*sqrt(p))*p^(3/2)"),
        ("7", "40", "p^(5/2)"),
        ("7", "13", "u*p"),
        ("5", "3", "p^(1/2)"),
        ("11", "200", "3*p^2"),
    ] {
        assert_valid(&v, &emit(&["predict", "--p", p, "--k", k, "--ap", ap, "--json"]));
    }
    assert!(!v.is_valid(&serde_json::json!({"kind": "red", "summands": []})));
}

#[test]
fn other_documents_validate() {
    let v = validator("llc_map");
    assert_valid(&v, &emit(&["llc", "--p", "5", "--map", "red(2,3;1,2)", "--json"]));
    assert_valid(&v, &emit(&["llc", "--p", "7", "--map", "ind(4,3)", "--json"]));
    assert_valid(&validator("galois_rep"), &emit(&["llc", "--p", "5", "--unmap", "pi(0,3,1)+pi(2,2,2)", "--json"]));
    assert_valid(&validator("sweep"), &emit(&["sweep", "--p", "7", "--k-range", "2..40", "--ap", "p^(3/2)", "--emit", "json"]));
    assert_valid(&validator("tree_function"), &emit(&["hecke", "--p", "5", "--r", "3", "--coeffs", "1,2,3,4", "--apply-t", "2", "--exponent", "2", "--json"]));
}
