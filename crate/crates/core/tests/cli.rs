use std::process::{Command, Output};

fn idquad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idquad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn nodes_single_gauss_node() {
    let o = idquad(&["nodes", "--weight", "linear", "--kind", "gauss", "--n", "1", "--quiet"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let first: Vec<&str> = out.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(first, ["1", "0.333333333", "0.5"]);
    assert!(out.lines().last().unwrap().trim_start().starts_with("sum"));
}

#[test]
fn nodes_radau_csv() {
    let o = idquad(&["nodes", "--weight", "linear", "--kind", "radau", "--n", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "i,t_i,v_i\n1,0.25,0.444444444\n2,1.0,0.0555555556\nsum,,0.5\n");
}

#[test]
fn nodes_constant_lobatto() {
    let o = idquad(&["nodes", "--weight", "constant", "--kind", "lobatto", "--n", "1", "--format", "csv"]);
    let out = stdout(&o);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .take(3)
        .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    let want = [[0.0, 1.0 / 6.0], [0.5, 2.0 / 3.0], [1.0, 1.0 / 6.0]];
    for (r, w) in rows.iter().zip(&want) {
        assert!((r[0] - w[0]).abs() < 1e-9 && (r[1] - w[1]).abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn nodes_json_shape() {
    let o = idquad(&["nodes", "--kind", "lobatto", "--n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["meta"]["weight"], "linear");
    assert_eq!(v["meta"]["kind"], "lobatto");
    assert_eq!(v["meta"]["n"], 3);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(v["weights"].as_array().unwrap().len(), 5);
}

#[test]
fn csv_round_trips_to_nine_digits() {
    let o = idquad(&["nodes", "--weight", "constant", "--kind", "gauss", "--n", "7", "--format", "csv"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&idquad(&[
        "nodes", "--weight", "constant", "--kind", "gauss", "--n", "7", "--format", "json",
    ])))
    .unwrap();
    for (i, line) in stdout(&o).lines().skip(1).take(7).enumerate() {
        let t: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let exact = v["nodes"][i].as_f64().unwrap();
        assert!(((t - exact) / exact).abs() < 5e-9);
    }
}

#[test]
fn integrate_builtin_reports_percent_error() {
    let o = idquad(&["integrate", "--function", "f1", "--weight", "linear", "--kind", "gauss", "--n", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let get = |key: &str| -> f64 {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((get("approx") - 0.894426).abs() < 1e-6);
    assert!((get("exact") - 8.0 / 9.0).abs() < 1e-9);
    assert!((get("percent_error") - 0.622).abs() < 1e-3);
}

#[test]
fn integrate_expression() {
    let o = idquad(&["integrate", "--expr", "x^2", "--n", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "approx\n0.333333333\n");
}

#[test]
fn integrate_on_interval_with_dexpr() {
    let o = idquad(&[
        "integrate", "--expr", "exp(x)", "--dexpr", "exp(x)", "--a", "-1", "--b", "2", "--kind", "radau", "--n", "6",
        "--format", "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let exact = 2.0f64.exp() - (-1.0f64).exp();
    assert!((v["approx"].as_f64().unwrap() - exact).abs() < 1e-10);
    assert!(v["exact"].is_null());
}

#[test]
fn integrate_left_fixed_end_uses_one_sided_difference() {
    let left = idquad(&["integrate", "--expr", "x^(1/8)", "--fixed-end", "left", "--kind", "radau", "--n", "2", "--format", "csv"]);
    assert!(left.status.success(), "{}", stderr(&left));
    let v: f64 = stdout(&left).lines().nth(1).unwrap().parse().unwrap();
    assert!(v.is_finite());
    // the exact derivative at 0 is infinite
    let o = idquad(&["integrate", "--function", "f1", "--fixed-end", "left", "--kind", "radau", "--n", "2"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn left_and_right_agree_for_smooth_integrands() {
    let run = |end: &str| -> f64 {
        let o = idquad(&[
            "integrate", "--expr", "cos(x)", "--fixed-end", end, "--kind", "lobatto", "--n", "5", "--digits", "15",
            "--format", "csv",
        ]);
        stdout(&o).lines().nth(1).unwrap().parse().unwrap()
    };
    let exact = 1.0f64.sin();
    assert!((run("right") - exact).abs() < 1e-12);
    assert!((run("left") - exact).abs() < 1e-12);
}

#[test]
fn syntax_errors_exit_2_with_parser_message() {
    let o = idquad(&["integrate", "--expr", "2*(x+", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("syntax error at byte 5"), "{}", stderr(&o));
    let o = idquad(&["integrate", "--expr", "foo(x)", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown identifier 'foo'"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(idquad(&["nodes", "--weight", "quadratic"]).status.code(), Some(2));
    assert_eq!(idquad(&["integrate", "--n", "2"]).status.code(), Some(2));
    assert_eq!(idquad(&["integrate", "--expr", "x", "--function", "f1"]).status.code(), Some(2));
    assert_eq!(idquad(&["integrate", "--expr", "x", "--a", "1", "--b", "0"]).status.code(), Some(2));
    assert_eq!(idquad(&["table", "f9"]).status.code(), Some(2));
    assert_eq!(idquad(&["averages", "f4", "12-"]).status.code(), Some(2));
    assert_eq!(idquad(&["averages", "f4", "16-12"]).status.code(), Some(2));
    assert_eq!(idquad(&["nodes", "--n", "0"]).status.code(), Some(3));
}

#[test]
fn construction_failure_exits_3() {
    let o = idquad(&["nodes", "--weight", "constant", "--kind", "radau", "--n", "600"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("DivisionByZero"));
    let o = idquad(&["nodes", "--weight", "constant", "--kind", "lobatto", "--n", "300"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("SingularSystem"));
}

#[test]
fn evaluation_failure_exits_4() {
    let o = idquad(&["integrate", "--expr", "log(x - 2)", "--n", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("NonFiniteValue"));
}

#[test]
fn table_layouts() {
    let o = idquad(&["table", "f1", "--format", "markdown"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "| n | G(1) | G(1-t) | G-R(1) | G-R(1-t) | G-L(1) | G-L(1-t) |");
    assert_eq!(lines.len(), 12);
    assert!(lines[2].starts_with("| 2 | 0.922"));

    let o = idquad(&["table", "--function", "f2", "--format", "csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "n,G(1),G(1-t),G-R(1),G-R(1-t),G-L(1),G-L(1-t)");
    assert_eq!(out.lines().count(), 11);

    let o = idquad(&["table", "f1", "--n-min", "3", "--n-max", "3", "--quiet"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().nth(1).unwrap().trim_start().starts_with('3'));
}

#[test]
fn table_marks_failed_cells() {
    let o = idquad(&["table", "f2", "--n-min", "545", "--n-max", "545", "--format", "csv"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[3], "FAIL(DivisionByZero)");
    assert_eq!(cells[5], "FAIL(SingularSystem)");
}

#[test]
fn stability_summaries() {
    let o = idquad(&["stability", "linear", "gauss", "2000", "100"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "all ok\n");

    let o = idquad(&["stability", "constant", "radau", "600", "1"]);
    let out = stdout(&o);
    let line = out.lines().next().unwrap();
    let n: usize = line
        .strip_prefix("first failure: n=")
        .and_then(|s| s.strip_suffix(" (DivisionByZero)"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((500..=560).contains(&n), "{line}");
}

#[test]
fn averages_table() {
    let o = idquad(&["averages", "f4", "12-16,17-21,22-26,27-31,32-36", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("12-16,"));
    assert_eq!(lines[1].split(',').count(), 7);
}

#[test]
fn list_functions_shows_formulas() {
    let out = stdout(&idquad(&["list-functions"]));
    assert!(out.contains("2/(2+sin(10*pi*x))"));
    assert!(out.contains("1/((x-0.3)^2+0.01) + 1/((x-0.9)^2+0.04)"));
}

#[test]
fn output_is_deterministic() {
    let a = idquad(&["table", "f4", "--format", "csv"]);
    let b = idquad(&["table", "f4", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
}
