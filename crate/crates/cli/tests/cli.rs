use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cc_sched::{build_schedule, default_demands, DeliveryParams, NetworkConfig, Strategy as Scheme};
use cc_sched_cli::scenario::{DeliveryChoice, FixedDelivery, Keyword, Scenario};
use cc_sched_cli::wire::{from_wire, parse_schedule, to_wire, Kind};
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cc-sched")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dof_reports_exact_and_decimal() {
    let out = cli(&["dof", "--scenario", path_str(&fixture("worked_strategy_a.json"))]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dof"], "39/10");
    assert_eq!(v["dof_decimal"], 3.9);
    assert_eq!(v["closed_form"], "39/10");
    assert_eq!((v["j_m"].as_u64(), v["t_u"].as_u64()), (Some(33), Some(6)));
}

#[test]
fn sweep_csv_peaks_at_twelve() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = cli(&["sweep", "--scenario", path_str(&fixture("uniform_thirty.json")), "--out", path_str(&out_path)]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>().join(","),
        "eta_hat,Q,strategy,beta,K_M,K_U,T_M,T_U,dof_num,dof_den,dof_decimal,feasible");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let peak = rows.iter().find(|r| &r[0] == "5" && &r[1] == "3").unwrap();
    assert_eq!(peak.iter().collect::<Vec<_>>(), vec!["5", "3", "B", "5", "30", "0", "600", "0", "12", "1", "12.000000", "true"]);
    let best = rows
        .iter()
        .filter(|r| &r[11] == "true")
        .map(|r| r[10].parse::<f64>().unwrap())
        .fold(f64::MIN, f64::max);
    assert_eq!(best, 12.0);
    assert!(rows.iter().any(|r| &r[11] == "false" && r[10].is_empty()));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DoF_max = 12"));
}

#[test]
fn verify_passes_and_catches_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = fixture("worked_strategy_a.json");
    let sched_path = dir.path().join("schedule.json");
    let out = cli(&["schedule", "--scenario", path_str(&scenario), "--out", path_str(&sched_path)]);
    assert!(out.status.success());

    let ok = cli(&["verify", "--scenario", path_str(&scenario), "--schedule", path_str(&sched_path)]);
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["pass"], true);

    let text = std::fs::read_to_string(&sched_path).unwrap();
    let mut items: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    items.remove(0);
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, serde_json::to_string(&items).unwrap()).unwrap();
    let bad = cli(&["verify", "--scenario", path_str(&scenario), "--schedule", path_str(&broken)]);
    assert_eq!(bad.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["missing"].as_u64().unwrap() > 0);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("missing"));
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{ not json").unwrap();
    assert_eq!(cli(&["dof", "--scenario", path_str(&garbled)]).status.code(), Some(2));

    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"P":3,"tbar":1,"alpha":6,"L":6,"N":12,"eta":[5,4,3],"delivery":{"eta_hat":4,"Q":5,"beta":3,"strategy":"A"}}"#,
    )
    .unwrap();
    assert_eq!(cli(&["dof", "--scenario", path_str(&invalid)]).status.code(), Some(3));

    let coprime = dir.path().join("coprime.json");
    std::fs::write(&coprime, r#"{"P":4,"tbar":2,"alpha":2,"L":2,"N":2,"eta":[1,1,1,1]}"#).unwrap();
    assert_eq!(cli(&["sweep", "--scenario", path_str(&coprime)]).status.code(), Some(3));

    let absent = dir.path().join("absent.json");
    assert_eq!(cli(&["dof", "--scenario", path_str(&absent)]).status.code(), Some(5));
}

#[test]
fn sigma_csv_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sigma.csv");
    let out = cli(&[
        "sigma-experiment",
        "--scenario",
        path_str(&fixture("uniform_thirty.json")),
        "--samples",
        "100",
        "--closed-form",
        "--out",
        path_str(&out_path),
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>().join(","),
        "sigma_bin,n_samples,dof_m_decimal,unicast_baseline,uniform_optimum");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.iter().map(|r| r[1].parse::<u64>().unwrap()).sum::<u64>(), 100);
    assert!(rows.iter().all(|r| &r[3] == "7" && &r[4] == "12.000000"));
}

#[test]
fn schedule_listing_round_trips() {
    for (eta, strategy, beta) in [(vec![5, 4, 3], Scheme::A, 3), (vec![5, 4, 3], Scheme::B, 4)] {
        let cfg = NetworkConfig::from_counts(1, 6, 6, 12, &eta).unwrap();
        let d = build_schedule(&cfg, DeliveryParams { eta_hat: 4, q: 3, beta, strategy }, &default_demands(&cfg)).unwrap();
        let wire = to_wire(&d.schedule);
        assert_eq!(wire.iter().filter(|w| w.kind == Kind::Uc).count(), d.schedule.uc.len());
        assert_eq!(from_wire(&wire).unwrap(), d.schedule);
        let text = serde_json::to_string(&wire).unwrap();
        assert_eq!(parse_schedule(&text).unwrap(), d.schedule);
    }
}

fn arb_scenario() -> impl Strategy<Value = Scenario> {
    let delivery = prop_oneof![
        Just(DeliveryChoice::Search(Keyword::Sweep)),
        (1usize..6, 2usize..5, 1usize..4, any::<bool>()).prop_map(|(eta_hat, q, beta, b)| {
            DeliveryChoice::Fixed(FixedDelivery {
                eta_hat,
                q,
                beta,
                strategy: if b { Scheme::B } else { Scheme::A },
            })
        }),
    ];
    (
        2usize..7,
        1usize..3,
        1usize..9,
        1usize..20,
        prop::collection::vec(0usize..6, 2..7),
        any::<bool>(),
        delivery,
        prop::option::of(any::<u64>()),
        prop::option::of(prop::collection::btree_map(1u32..20, 1u32..5, 0..4)),
    )
        .prop_map(|(p, tbar, alpha, files, eta, explicit, delivery, seed, demands)| {
            let (eta_field, association) = if explicit {
                let assoc: BTreeMap<u32, usize> =
                    eta.iter().enumerate().map(|(i, &e)| (i as u32 + 1, e % p + 1)).collect();
                (None, Some(assoc))
            } else {
                (Some(eta), None)
            };
            Scenario { profiles: p, tbar, alpha, antennas: alpha + 1, files, eta: eta_field, association, delivery, demands, seed }
        })
}

proptest! {
    #[test]
    fn scenario_round_trip(s in arb_scenario()) {
        let text = s.to_json();
        let parsed = Scenario::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &s);
        prop_assert_eq!(parsed.to_json(), text);
    }
}
