mod common;

use asdgic::cli::g17;
use asdgic::model::{RawParams, StateVariance};
use asdgic::scenario::{LatticeSection, OutputFormat, Scenario, SimSection};
use asdgic::simulate::Scheme;
use proptest::prelude::*;

use common::{cli, half_log2, parse_csv, scenario_file, scenario_text};

fn unit_file(name: &str) -> String {
    let path = scenario_file(name, &scenario_text(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, "\"unbounded\""));
    path.to_str().unwrap().to_string()
}

#[test]
fn regions_unit_scenario() {
    let f = unit_file("regions");
    let (code, out, err) = cli(&["regions", &f]);
    assert_eq!(code, 0, "{err}");
    let (header, rows) = parse_csv(&out);
    assert_eq!(header.join(","), "outer_bits,achievable_bits,kind,limiting_decoder,flags");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.5);
    let ach: f64 = rows[0][1].parse().unwrap();
    assert!(ach >= half_log2(1.5) && ach <= 0.5);
}

#[test]
fn regions_json() {
    let f = unit_file("regions-json");
    let (code, out, _) = cli(&["regions", &f, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["outer_bits"].as_f64(), Some(0.5));
}

#[test]
fn regions_without_regime_exits_one() {
    let f = scenario_file("noregime", &scenario_text(1.0, 100.0, 5.0, 1.0, 1.0, 1.0, "\"unbounded\""));
    let (code, _, err) = cli(&["regions", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn gap_table_rows() {
    let (code, out, _) = cli(&["gap-table", "--snrs", "0.1,0.5,1,10,20"]);
    assert_eq!(code, 0);
    let (header, rows) = parse_csv(&out);
    assert_eq!(header.join(","), "x,term_outer,term_inner_raw,term_inner_env,gap");
    let want = [1.79, 0.938, 0.661, 0.1257, 0.0673];
    for (row, w) in rows.iter().zip(want) {
        let gap: f64 = row[4].parse().unwrap();
        assert!((gap - w).abs() <= 0.01);
    }
    assert_eq!(cli(&["gap-table", "--snrs", "0"]).0, 2);
    assert_eq!(cli(&["gap-table", "--snrs", "abc"]).0, 2);
}

#[test]
fn gap_curve_rows() {
    let (code, out, _) = cli(&["gap-curve", "--xmin", "0.05", "--xmax", "50", "--steps", "200"]);
    assert_eq!(code, 0);
    let (_, rows) = parse_csv(&out);
    assert_eq!(rows.len(), 200);
    let x0: f64 = rows[0][0].parse().unwrap();
    let xn: f64 = rows[199][0].parse().unwrap();
    assert!((x0 - 0.05).abs() < 1e-12 && (xn - 50.0).abs() < 1e-9);
    let gaps: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn validate_reports_flags() {
    let weak = scenario_file("weak", &scenario_text(1.0, 1.0, 1.0, 1.0, 0.5, 0.5, "1.0"));
    let (code, out, _) = cli(&["validate", weak.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (header, rows) = parse_csv(&out);
    assert_eq!(header[0], "strong_interference");
    assert_eq!(rows[0][0], "false");

    let bad = scenario_file("neg", &scenario_text(-1.0, 1.0, 1.0, 1.0, 1.0, 1.0, "1.0"));
    assert_eq!(cli(&["validate", bad.to_str().unwrap()]).0, 2);
    let missing = std::env::temp_dir().join("asdgic-does-not-exist.toml");
    assert_eq!(cli(&["validate", missing.to_str().unwrap()]).0, 2);
    let junk = scenario_file("junk", "p1 = 1\nfoo = 2\n");
    assert_eq!(cli(&["validate", junk.to_str().unwrap()]).0, 2);
}

#[test]
fn binning_rows() {
    let f = unit_file("binning");
    let (code, out, _) = cli(&["binning", &f, "--q-list", "2,10,100,10000,1000000"]);
    assert_eq!(code, 0);
    let (header, rows) = parse_csv(&out);
    assert_eq!(header.join(","), "q1,q2,gamma,entropy_term,value");
    let vals: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    let gamma = half_log2(2.0 * std::f64::consts::PI * std::f64::consts::E);
    assert!((vals[0] - gamma).abs() < 1e-12);
    assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(vals[4], 0.0);
}

#[test]
fn simulate_outputs() {
    let f = unit_file("sim");
    let args = ["simulate", &f, "--scheme", "thm2-corner-R2", "--trials", "2000", "--seed", "3"];
    let (code, out, err) = cli(&args);
    assert_eq!(code, 0, "{err}");
    let (header, rows) = parse_csv(&out);
    assert_eq!(header.last().unwrap(), "config_hash");
    assert_eq!(rows.len(), 1);
    let res: f64 = rows[0][header.iter().position(|h| h == "max_alignment_residual").unwrap()]
        .parse()
        .unwrap();
    assert!(res <= 1e-9);
    assert_eq!(cli(&args).1, out);

    let (code, out, _) = cli(&["simulate", &f, "--scheme", "thm2-corner-R2", "--trials", "2000", "--digital", "1"]);
    assert_eq!(code, 0);
    let (header, rows) = parse_csv(&out);
    assert!(!rows[0][header.iter().position(|h| h == "ser").unwrap()].is_empty());

    let (code, out, _) = cli(&["simulate", &f, "--scheme", "thm2-corner-R2", "--trials", "2000", "--sweep-alpha", "--alpha-points", "21"]);
    assert_eq!(code, 0);
    let (header, rows) = parse_csv(&out);
    assert_eq!(header.join(","), "alpha,pre_mod_var,std_error,is_argmin,closed_form");
    assert_eq!(rows.len(), 21);
    assert_eq!(rows.iter().filter(|r| r[3] == "1").count(), 1);

    let (code, out, _) = cli(&["simulate", &f, "--scheme", "thm3-corner-R2", "--trials", "500", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["trials"].as_u64(), Some(500));
}

#[test]
fn simulate_thread_count_is_invisible() {
    let f = unit_file("threads");
    let base = ["simulate", &f, "--scheme", "thm3-corner-R1-appendix2", "--trials", "9000", "--seed", "5"];
    let one: Vec<&str> = base.iter().copied().chain(["--threads", "1"]).collect();
    let four: Vec<&str> = base.iter().copied().chain(["--threads", "4"]).collect();
    let a = cli(&one);
    let b = cli(&four);
    assert_eq!(a.0, 0);
    assert_eq!(a.1.as_bytes(), b.1.as_bytes());
}

#[test]
fn simulate_input_errors() {
    let f = unit_file("simerr");
    assert_eq!(cli(&["simulate", &f]).0, 2);
    assert_eq!(cli(&["simulate", &f, "--scheme", "bogus"]).0, 2);
    assert_eq!(cli(&["simulate", &f, "--scheme", "thm2-corner-R2", "--family", "hexagonal", "--dim", "2", "--digital", "1"]).0, 2);
    assert_eq!(cli(&["simulate", &f, "--scheme", "thm2-corner-R2", "--digital", "1", "--sweep-alpha"]).0, 2);
    assert_eq!(cli(&["simulate", &f, "--scheme", "thm2-corner-R2", "--trials", "0"]).0, 2);
}

#[test]
fn usage_and_help() {
    assert_eq!(cli(&[]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["regions", "gap-table", "gap-curve", "simulate", "binning", "validate"] {
        assert!(out.contains(sub));
    }
}

#[test]
fn g17_formatting() {
    assert_eq!(g17(0.5), "0.5");
    assert_eq!(g17(0.1), "0.10000000000000001");
    assert_eq!(g17(1e-5), "1.0000000000000001e-05");
    assert_eq!(g17(0.0), "0");
}

fn finite_or_unbounded() -> impl Strategy<Value = StateVariance> {
    prop_oneof![
        Just(StateVariance::Unbounded),
        (1e-3f64..1e6).prop_map(StateVariance::Finite),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]
    #[test]
    fn scenario_roundtrip(
        p in prop::array::uniform6(1e-3f64..1e3),
        q1 in finite_or_unbounded(),
        q2 in finite_or_unbounded(),
        json in any::<bool>(),
        seed in any::<u64>(),
        trials in 1u64..1_000_000,
        scheme in prop::sample::select(Scheme::ALL.to_vec()),
        alpha in prop::collection::vec(0.01f64..1.5, 0..3),
    ) {
        let mut s = Scenario::from_raw(RawParams::new(p[0], p[1], p[2], p[3], p[4], p[5]).with_states(q1, q2));
        s.format = Some(if json { OutputFormat::Json } else { OutputFormat::Csv });
        s.lattice = Some(LatticeSection { family: None, dim: Some(2), scale: Some(p[0]) });
        s.sim = Some(SimSection {
            scheme: Some(scheme),
            trials: Some(trials),
            seed: Some(seed),
            alpha: Some(alpha),
            ..Default::default()
        });
        let text = s.to_toml_string().unwrap();
        prop_assert_eq!(Scenario::from_toml_str(&text).unwrap(), s);
    }
}
