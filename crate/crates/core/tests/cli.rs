use serde_json::Value;
use zigzag::cli::{run, Outcome};

fn zz(args: &[&str]) -> Outcome {
    run(std::iter::once("zigzag").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = zz(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn predict_json_example() {
    let doc = json(&["predict", "--p", "5", "--k", "24", "--ap", "p", "--json"]);
    assert_eq!(doc["kind"], "red");
    assert_eq!(
        doc["summands"],
        serde_json::json!([{"a": 2, "lambda": "3"}, {"a": 1, "lambda": "2"}])
    );
    assert_eq!(doc["provenance"], "THEOREM_BGR18");
    assert_eq!(doc["branch"], "RED(1)");
}

#[test]
fn predict_text_and_markdown() {
    let out = zz(&["predict", "--p", "7", "--k", "11", "--ap", "p^(3/2)"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("reduction: ind(ω₂^10)"), "{}", out.stdout);

    let out = zz(&["predict", "--p", "5", "--k", "21", "--ap", "(1+1*sqrt(p))*p^(3/2)", "--md"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("| ω^2 ⊕ ω^2 | THEOREM_GR19 |"), "{}", out.stdout);
    let marked: Vec<&str> = out.stdout.lines().filter(|l| l.starts_with("| → |")).collect();
    assert_eq!(marked, ["| → | >= 1 | RED(2) | (F3,F3) | μ_{unknown(*_2)^-1}ω^2 ⊕ μ_{unknown(*_2)}ω^2 |"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--p", "7", "--k-range", "8..60", "--ap", "-p^(3/2)+2*p^2"];
    assert_eq!(zz(&args), zz(&args));
}

#[test]
fn sweep_csv_columns() {
    let out = zz(&["sweep", "--p", "5", "--k-range", "20..=40", "--ap", "p", "--exceptional-only"]);
    // `..=` is not accepted
    assert_eq!(out.code, 2);
    let out = zz(&["sweep", "--p", "5", "--k-range", "20..40", "--ap", "p", "--exceptional-only"]);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("p,k,ap,v,b,tau,t,case,rep,provenance"));
    let ks: Vec<i64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ks, [20, 24, 28, 32, 36, 40]);
}

#[test]
fn sweep_json_rows() {
    let doc = json(&["sweep", "--p", "5", "--k-range", "24:24", "--ap", "p", "--emit", "json"]);
    assert_eq!(doc[0]["case"], "RED(1)");
    assert_eq!(doc[0]["rep"], "μ_{3}ω^2 ⊕ μ_{2}ω");
}

#[test]
fn filtration_table() {
    let out = zz(&["filtration", "--p", "7", "--r", "15", "--imax", "2"]);
    assert_eq!(out.code, 0);
    let rows: Vec<Vec<&str>> = out.stdout.lines().skip(2).map(|l| l.split('\t').collect()).collect();
    let dims: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(dims, ["16", "8", "0"]);
    assert!(rows.iter().all(|r| r[1] == r[2]));
    assert_eq!(rows[0][4..], ["V_3", "V_3⊗D^3", "8"]);
    assert_eq!(rows[1][4..], ["V_1⊗D", "V_5⊗D^2", "8"]);
    assert_eq!(rows[2][3], "-");
}

#[test]
fn llc_map_and_unmap() {
    let out = zz(&["llc", "--p", "5", "--map", "red(2,3;1,2)"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "μ_{3}ω^2 ⊕ μ_{2}ω ↦ π(0, 3, ω) ⊕ π(2, 2, ω^2)\n");
    let out = zz(&["llc", "--p", "5", "--unmap", "pi(0,3,1)+pi(2,2,2)"]);
    assert_eq!(out.stdout, "μ_{3}ω^2 ⊕ μ_{2}ω\n");

    let doc = json(&["llc", "--p", "7", "--map", "ind(4)", "--json"]);
    assert_eq!(doc["rep"]["kind"], "irred");
    assert_eq!(doc["labels"].as_array().unwrap().len(), 1);

    let out = zz(&["llc", "--p", "5", "--unmap", "pi(1,2,0)"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn hecke_support() {
    let out = zz(&["hecke", "--p", "5", "--r", "0", "--coeffs", "1"]);
    assert_eq!(out.code, 0);
    // p + 1 neighbours, each with value 1
    let rows: Vec<&str> = out.stdout.lines().skip(2).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.starts_with("1\t") && r.ends_with("[1]")));

    let doc = json(&["hecke", "--p", "5", "--r", "2", "--coeffs", "1,0,2", "--apply-t", "2", "--exponent", "2", "--json"]);
    assert!(doc.is_object());

    let out = zz(&["hecke", "--p", "5", "--r", "2", "--coeffs", "1,0"]);
    assert_eq!(out.code, 2);
}

#[test]
fn check_suites_pass() {
    for suite in ["local-constancy", "blz", "theta", "determinant"] {
        let out = zz(&["check", "--suite", suite]);
        assert_eq!(out.code, 0, "{suite}: {}", out.stdout);
        assert!(out.stdout.ends_with(": 0 failure(s)\n"));
    }
}

#[test]
fn usage_errors() {
    assert_eq!(zz(&[]).code, 2);
    assert_eq!(zz(&["predict", "--p", "5", "--k", "24"]).code, 2);
    let out = zz(&["predict", "--p", "5", "--k", "24", "--ap", "2*q"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("position 2"), "{}", out.stderr);
    let out = zz(&["predict", "--p", "5", "--k", "24", "--ap", "p^-1"]);
    assert_eq!(out.code, 2);
    assert_eq!(zz(&["predict", "--p", "5", "--k", "24", "--ap", "p", "--json", "--md"]).code, 2);
    let help = zz(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("filtration"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = std::env::temp_dir().join(format!("zigzag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zigzag.conf");
    std::fs::write(&path, "# too coarse for tau = 1\nprecision = 1\nresidue_degree = 1\n").unwrap();
    let path = path.to_str().unwrap();
    let low = zz(&["--config", path, "predict", "--p", "5", "--k", "24", "--ap", "p"]);
    assert_eq!(low.code, 2);
    assert!(low.stderr.contains("precision exhausted"), "{}", low.stderr);
    let high = zz(&["--config", path, "--precision", "12", "predict", "--p", "5", "--k", "24", "--ap", "p"]);
    assert_eq!(high.code, 0, "{}", high.stderr);
    assert!(high.stdout.contains("case: RED(1)"));
    std::fs::write(dir.join("bad.conf"), "colour = red\n").unwrap();
    let bad = zz(&["--config", dir.join("bad.conf").to_str().unwrap(), "check", "--suite", "theta"]);
    assert_eq!(bad.code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
