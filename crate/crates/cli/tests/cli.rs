use jmatrix::operators::{build_asc_l, build_laguerre_tl};
use serde_json::Value;
use std::process::{Command, Output};

fn jm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jmatrix")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    jm(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let out = jm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["build", "--model", "laguerre-tl", "--alpha", "1", "--N", "5"], 0),
        (&["build", "--model", "meixner-s", "--beta", "1", "--c", "0.5", "--gamma", "-1", "--format", "csv"], 0),
        (&["verify", "--model", "meixner-tm", "--beta", "1.5", "--c", "0.4", "--N", "6"], 0),
        (&["verify", "--model", "asc-l", "--q", "0.5", "--t1", "0.3", "--t2", "0.4", "--N", "10", "--tol", "1e-9"], 0),
        (&["verify", "--model", "laguerre-tl", "--alpha", "1", "--N", "5", "--tol", "1e-30"], 2),
        (&["spectrum", "--model", "laguerre-s", "--alpha", "0", "--gamma", "1", "--N", "30"], 0),
        (&["zeros", "--model", "linpot-chebu", "--gamma", "0.5", "--N", "8", "--format", "csv"], 0),
        (&["determinacy", "--model", "linpot-ultra", "--nu", "1", "--gamma", "1"], 0),
        (&["quadrature", "--family", "meixner-pollaczek", "--lambda", "0.5", "--phi", "1", "--N", "6"], 0),
        (&["quadrature", "--model", "qhermite", "--q", "0.5", "--gamma", "1", "--N", "6"], 0),
        (&["qhermite-support", "--q", "0.5", "--a", "0.7", "--N", "10"], 0),
        // usage and parameter errors
        (&[], 1),
        (&["frobnicate"], 1),
        (&["spectrum", "--model", "laguerre-tl"], 1),
        (&["spectrum", "--model", "nope", "--alpha", "1"], 1),
        (&["spectrum", "--model", "laguerre-tl", "--alpha", "-3"], 1),
        (&["spectrum", "--model", "laguerre-tl", "--alpha", "1", "--N", "1"], 1),
        (&["build", "--model", "laguerre-tl", "--alpha", "1", "--N", "0"], 1),
        (&["verify", "--model", "laguerre-tl", "--alpha", "1", "--tol", "0"], 1),
        (&["verify", "--model", "laguerre-tl", "--alpha", "1", "--tol", "-1e-3"], 1),
        (&["build", "--model", "laguerre-tl", "--alpha", "x"], 1),
        (&["build", "--model", "laguerre-tl", "--alpha", "1", "--format", "xml"], 1),
        (&["build", "--model", "meixner-s", "--beta", "1", "--c", "0.5", "--gamma", "1"], 1),
        (&["build", "--model", "asc-l", "--q", "1.5", "--t1", "0.3", "--t2", "0.4"], 1),
        (&["quadrature", "--family", "legendre", "--N", "3"], 1),
        (&["qhermite-support", "--q", "0.5", "--a", "0.3"], 1),
        (&["qhermite-support", "--a", "0.7"], 1),
    ];
    for (args, want) in cases {
        assert_eq!(code(args), *want, "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["spectrum", "--help"]), 0);
}

#[test]
fn build_json_round_trips_coefficients() {
    let n = 40;
    let v = json(&["build", "--model", "laguerre-tl", "--alpha", "0.37", "--N", "40", "--format", "json"]);
    let op = build_laguerre_tl(0.37).unwrap();
    assert_eq!(v["n"].as_u64(), Some(n as u64));
    let diag = floats(&v["diag"]);
    let coupling = floats(&v["coupling"]);
    for k in 0..n {
        assert_eq!(diag[k].to_bits(), op.diag(k).to_bits(), "diag {k}");
        if k > 0 {
            assert_eq!(coupling[k].to_bits(), op.coupling(k).to_bits(), "coupling {k}");
        }
    }
    let c = op.coeffs(n);
    assert_eq!(floats(&v["coeffs"]["b"]), c.b);
    assert_eq!(floats(&v["coeffs"]["a"]), c.a);
    let back: jmatrix::operators::JacobiOperator = serde_json::from_value(v["operator"].clone()).unwrap();
    assert_eq!(back, op);
}

#[test]
fn build_json_round_trips_q_model() {
    let v = json(&["build", "--model", "asc-l", "--q", "0.5", "--t1", "0.3", "--t2", "-0.4", "--N", "25"]);
    let op = build_asc_l(0.3, -0.4, 0.5).unwrap();
    let diag = floats(&v["diag"]);
    for (k, d) in diag.iter().enumerate() {
        assert_eq!(d.to_bits(), op.diag(k).to_bits());
    }
}

#[test]
fn json_carries_provenance() {
    for args in [
        &["build", "--model", "meixner-tm", "--beta", "1", "--c", "0.5"][..],
        &["verify", "--model", "linpot-laguerre", "--alpha", "0.5", "--gamma", "-0.25", "--N", "5"],
        &["spectrum", "--model", "linpot-qultra", "--beta", "0.5", "--q", "0.5", "--gamma", "1"],
        &["zeros", "--model", "laguerre-tl", "--alpha", "1"],
        &["determinacy", "--model", "meixner-tm", "--beta", "1", "--c", "0.5"],
        &["quadrature", "--family", "chebyshev-u"],
        &["qhermite-support", "--q", "0.5"],
    ] {
        let v = json(args);
        assert!(!v["provenance"].as_str().unwrap_or_default().is_empty(), "{args:?}");
    }
}

#[test]
fn laguerre_tl_spectrum_example() {
    let v = json(&["spectrum", "--model", "laguerre-tl", "--alpha", "2", "--N", "400"]);
    assert_eq!(v["continuousEdge"].as_f64(), Some(-2.25));
    let eig = floats(&v["eigenvaluesDesc"]);
    assert_eq!(eig.len(), 400);
    assert!((eig[0] + 2.0).abs() < 0.02, "{}", eig[0]);
    assert_eq!(floats(&v["predictedDiscrete"]), vec![-2.0]);
}

#[test]
fn qhermite_determinacy_example() {
    let v = json(&["determinacy", "--model", "qhermite", "--q", "0.5", "--gamma", "2"]);
    assert_eq!(v["status"], "Inconclusive");
    let carleman = &v["witness"]["carleman"];
    assert_eq!(carleman["divergent"], false);
    assert!(carleman["partialSum"].as_f64().unwrap().is_finite());
}

#[test]
fn spectrum_csv_rows() {
    let out = jm(&["spectrum", "--model", "laguerre-tl", "--alpha", "5", "--N", "12", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["N", "index", "value", "kind"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let eig = rows.iter().filter(|r| &r[3] == "eigenvalue").count();
    let pred: Vec<f64> = rows.iter().filter(|r| &r[3] == "predicted").map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(eig, 12);
    assert_eq!(pred, vec![-5.0, -8.0]);
    assert!(rows.iter().all(|r| &r[0] == "12"));

    let out = jm(&["spectrum", "--model", "qhermite", "--q", "0.5", "--gamma", "1", "--N", "7", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 7);
    assert!(!text.contains("predicted"));
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let p = path.to_str().unwrap();
    let args = ["spectrum", "--model", "meixner-s", "--beta", "1.2", "--c", "0.3", "--gamma", "-0.7", "--N", "50"];
    let first = jm(&args).stdout;
    assert_eq!(first, jm(&args).stdout);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", p]);
    assert_eq!(code(&with_file), 0);
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn csv_floats_carry_seventeen_digits() {
    let out = jm(&["build", "--model", "laguerre-tl", "--alpha", "0.3", "--N", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let op = build_laguerre_tl(0.3).unwrap();
    for (k, line) in text.lines().skip(1).enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        let mantissa = cols[1].split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{line}");
        assert_eq!(cols[1].parse::<f64>().unwrap().to_bits(), op.diag(k).to_bits());
    }
}

#[test]
fn zeros_lie_in_the_reported_interval() {
    let v = json(&["zeros", "--model", "linpot-ultra", "--nu", "0.8", "--gamma", "2", "--N", "15"]);
    let zeros = floats(&v["zeros"]);
    let (lo, hi) = (v["zeroBoundInterval"][0].as_f64().unwrap(), v["zeroBoundInterval"][1].as_f64().unwrap());
    assert_eq!(zeros.len(), 15);
    assert!(zeros.windows(2).all(|w| w[0] <= w[1]));
    assert!(zeros.iter().all(|z| *z >= lo - 1e-12 && *z <= hi + 1e-12));
}

#[test]
fn quadrature_integrates_laguerre_moments() {
    let v = json(&["quadrature", "--family", "laguerre", "--alpha", "0", "--N", "6"]);
    let (x, w) = (floats(&v["nodes"]), floats(&v["weights"]));
    // int x^k e^{-x} dx = k!
    let mut fact = 1.0;
    for k in 0..12 {
        if k > 0 {
            fact *= k as f64;
        }
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
        assert!((s - fact).abs() < 1e-10 * fact, "k={k}");
    }
}
