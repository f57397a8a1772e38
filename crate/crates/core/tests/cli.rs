use std::fs;
use std::process::{Command, Output};

use polyrelax::model::{import_json, VarKind};

const TWO_PI: &str = "6.283185307179586";

fn polyrelax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyrelax")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
}

#[test]
fn relax_sin_lp_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sin.lp");
    let out = polyrelax(&[
        "relax",
        "--function",
        "sin(x)",
        "--lower",
        "0",
        "--upper",
        TWO_PI,
        "--eps",
        "0.1",
        "--formulation",
        "milp",
        "--format",
        "lpfile",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary = stdout(&out);
    assert_eq!(field(&summary, "k"), "12");
    assert_eq!(field(&summary, "stop"), "tolerance-met");
    let text = fs::read_to_string(&path).unwrap();
    for section in ["Minimize\n", "Subject To\n", "Bounds\n", "Binaries\n", "End\n"] {
        assert!(text.contains(section), "missing {section:?}");
    }
    assert!(text.contains(" z_11\n") && !text.contains(" z_12\n"));
}

#[test]
fn relax_cubic_base_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cubic.json");
    let out = polyrelax(&[
        "relax",
        "--function",
        "x^3",
        "--lower",
        "-1",
        "--upper",
        "1",
        "--eps",
        "inf",
        "--max-parts",
        "0",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout(&out);
    assert!((field(&summary, "bound").parse::<f64>().unwrap() - 0.75).abs() < 1e-12);
    let sys = import_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(sys.metadata.partition, vec![-1.0, 0.0, 1.0]);
    assert_eq!(sys.metadata.function, "x^3");
    assert_eq!(sys.variables.iter().filter(|v| v.kind == VarKind::Binary).count(), 1);
}

#[test]
fn relax_lp_formulation_to_stdout() {
    let out = polyrelax(&["relax", "--function", "exp(x)", "--lower", "0", "--upper", "1", "--formulation", "lp"]);
    assert_eq!(out.status.code(), Some(0));
    let sys = import_json(&stdout(&out)).unwrap();
    assert_eq!(sys.variables.len(), 5);
    assert!(stderr(&out).starts_with("k=1 "));
}

#[test]
fn stats_table_rows() {
    let out = polyrelax(&[
        "stats",
        "--function",
        "1/(1+exp(-x))",
        "--lower",
        "-5",
        "--upper",
        "5",
        "--eps",
        "inf",
        "--max-parts",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let row = stdout(&out);
    let cols: Vec<&str> = row.trim_end().split('\t').collect();
    assert_eq!(cols.len(), 6);
    assert_eq!(cols[0], "1/(1+exp(-x))");
    assert_eq!(cols[2], "(-5.0, 0.0, 5.0)");
    assert!((cols[4].parse::<f64>().unwrap() - 0.3042).abs() < 1e-4);

    let out = polyrelax(&["stats", "--function", "x*abs(x)", "--lower", "-2", "--upper", "2", "--eps", "0.1"]);
    assert_eq!(stdout(&out).split('\t').nth(3), Some("16"));

    let out = polyrelax(&["stats", "--function", "x^3", "--lower", "-1", "--upper", "1", "--max-parts", "100"]);
    let bound: f64 = stdout(&out).split('\t').nth(4).unwrap().parse().unwrap();
    assert!(bound <= 0.0016, "{bound}");
}

#[test]
fn gamma_bounds() {
    let base = polyrelax(&[
        "bound",
        "--function",
        "gamma(x)",
        "--lower",
        "0.5",
        "--upper",
        "5",
        "--eps",
        "inf",
        "--max-parts",
        "0",
        "min",
    ]);
    assert_eq!(base.status.code(), Some(0), "{}", stderr(&base));
    let line = stdout(&base);
    for key in ["milp", "lp", "simplex"] {
        let v: f64 = field(&line, key).parse().unwrap();
        assert!((v + 10.561).abs() < 1e-2, "{key}={v}");
    }

    let refined =
        polyrelax(&["bound", "--function", "gamma(x)", "--lower", "0.5", "--upper", "5", "--eps", "0.001", "min"]);
    let line = stdout(&refined);
    for key in ["milp", "lp", "simplex"] {
        let v: f64 = field(&line, key).parse().unwrap();
        assert!((v - 0.8855).abs() < 1e-3, "{key}={v}");
    }
}

#[test]
fn sin_bound_max() {
    let out = polyrelax(&[
        "bound",
        "--function",
        "sin(x)",
        "--lower",
        "0",
        "--upper",
        TWO_PI,
        "--eps",
        "inf",
        "--max-parts",
        "0",
        "--formulation",
        "lp",
        "max",
    ]);
    let v: f64 = field(&stdout(&out), "lp").parse().unwrap();
    assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

fn rows(csv: &str) -> Vec<[f64; 4]> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,f,under,over"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect()
}

#[test]
fn plotdata_sin_base() {
    let out = polyrelax(&[
        "plotdata",
        "--function",
        "sin(x)",
        "--lower",
        "0",
        "--upper",
        TWO_PI,
        "--max-parts",
        "0",
        "--samples",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&stdout(&out));
    assert_eq!(r.len(), 5);
    let [x, f, under, over] = r[1];
    assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!(under.abs() < 1e-12 && (f - 1.0).abs() < 1e-15);
    assert!((over - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    for [_, f, under, over] in r {
        assert!(under <= f + 1e-9 && f <= over + 1e-9);
    }
}

#[test]
fn plotdata_refinement_tightens() {
    let dir = tempfile::tempdir().unwrap();
    let run = |parts: &str, name: &str| {
        let path = dir.path().join(name);
        let out = polyrelax(&[
            "plotdata",
            "--function",
            "x^4 - x^3",
            "--lower",
            "-0.5",
            "--upper",
            "1",
            "--max-parts",
            parts,
            "--samples",
            "301",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        rows(&fs::read_to_string(path).unwrap())
    };
    let coarse = run("0", "coarse.csv");
    let fine = run("9", "fine.csv");
    assert_eq!(coarse.len(), fine.len());
    let mut strictly = 0;
    for (c, f) in coarse.iter().zip(&fine) {
        assert_eq!(c[0], f[0]);
        assert!(f[2] <= f[1] + 1e-9 && f[1] <= f[3] + 1e-9);
        let (gc, gf) = (c[3] - c[2], f[3] - f[2]);
        assert!(gf <= gc + 1e-9, "x={}: {gf} > {gc}", c[0]);
        if gf < gc - 1e-9 {
            strictly += 1;
        }
    }
    assert!(strictly > coarse.len() / 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "lpfile"] {
        let mut texts = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{format}{run}"));
            let out = polyrelax(&[
                "relax",
                "--function",
                "sin(x) + x^2/10",
                "--lower",
                "-3",
                "--upper",
                "4",
                "--eps",
                "0.01",
                "--format",
                format,
                "-o",
                path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
            texts.push((fs::read(&path).unwrap(), stdout(&out)));
        }
        assert_eq!(texts[0], texts[1]);
    }
}

#[test]
fn exit_code_contract() {
    let cases: &[(&[&str], i32)] = &[
        (&["stats", "--function", "sin(x)", "--lower", "0", "--upper", "1"], 0),
        (&["--help"], 0),
        (&["--version"], 0),
        // expression and argument errors
        (&["relax", "--function", "sin(x", "--lower", "0", "--upper", "1"], 1),
        (&["relax", "--function", "x $ 2", "--lower", "0", "--upper", "1"], 1),
        (&["relax", "--function", "x^x", "--lower", "1", "--upper", "2"], 1),
        (&["relax", "--function", "y^2", "--lower", "0", "--upper", "1"], 1),
        (&["relax", "--function", "x^2", "--lower", "1", "--upper", "0"], 1),
        (&["relax", "--function", "x^2", "--lower", "0", "--upper", "1", "--eps", "-3"], 1),
        (&["relax", "--function", "x^2", "--lower", "0", "--upper", "1", "--format", "mps"], 1),
        (&["plotdata", "--function", "x^2", "--lower", "0", "--upper", "1", "--samples", "1"], 1),
        (&["relax", "--function", "x^2", "--upper", "1"], 1),
        (&["bound", "--function", "x^2", "--lower", "0", "--upper", "1", "sideways"], 1),
        (&["launch"], 1),
        // domain and numerical errors
        (&["relax", "--function", "log(x)", "--lower", "-1", "--upper", "1"], 2),
        (&["relax", "--function", "sqrt(x)", "--lower", "-1", "--upper", "1"], 2),
        (&["relax", "--function", "1/x", "--lower", "-1", "--upper", "1"], 2),
        (&["stats", "--function", "3*x - 1", "--lower", "0", "--upper", "1"], 2),
        (&["relax", "--function", "x^2", "--lower", "0", "--upper", "1", "-o", "/nonexistent-dir/out.json"], 2),
    ];
    for (args, code) in cases {
        let out = polyrelax(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn budget_warning_only_for_finite_eps() {
    let common = ["stats", "--function", "x^3", "--lower", "-1", "--upper", "1", "--max-parts", "3"];
    let warned = polyrelax(&[&common[..], &["--eps", "0.001"]].concat());
    assert_eq!(warned.status.code(), Some(0));
    assert!(stderr(&warned).contains("warning"));
    let silent = polyrelax(&common);
    assert_eq!(silent.status.code(), Some(0));
    assert!(stderr(&silent).is_empty());
}

#[test]
fn breakpoint_override() {
    let out = polyrelax(&[
        "stats",
        "--function",
        "sin(x)",
        "--lower",
        "0",
        "--upper",
        TWO_PI,
        "--breakpoints",
        "3.141592653589793",
        "--eps",
        "inf",
    ]);
    assert_eq!(stdout(&out).split('\t').nth(2), Some("(0.0, 3.141592653589793, 6.283185307179586)"));
}
