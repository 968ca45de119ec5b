mod common;

use std::collections::BTreeMap;
use std::time::Duration;

use common::*;
use mds_core::bench::*;
use mds_core::dataset::{generate_dataset, load_instances, Density, DatasetParams, Instance};
use mds_core::gcn::load_weights;
use mds_core::{Budget, Graph, IgConfig};

fn corpus() -> Vec<Instance> {
    let dir = tempfile::tempdir().unwrap();
    let params = DatasetParams {
        count: 8,
        n_range: (20, 40),
        density: Density::AverageDegree(3.0, 5.0),
        seed: 11,
        max_solutions: 4,
        budget: Budget::unlimited(),
        jobs: 0,
        oversample: 2,
    };
    let m = generate_dataset(&params, dir.path()).unwrap();
    load_instances(&m, dir.path(), None).unwrap()
}

fn options() -> SolveOptions {
    SolveOptions {
        ig: IgConfig {
            delta_max: 50,
            time_limit: Duration::from_secs(5),
            ..IgConfig::default()
        },
        weights: Some(load_weights(fixture_path(FIXTURE_WEIGHTS)).unwrap()),
        ..SolveOptions::default()
    }
}

#[test]
fn every_method_on_a_labeled_corpus() {
    let instances = corpus();
    let (records, failures) = run_bench(&instances, &Method::ALL, &options());
    assert!(failures.is_empty(), "{failures:?}");
    // Random contributes one record per seed.
    assert_eq!(records.len(), instances.len() * (Method::ALL.len() - 1 + DEFAULT_RANDOM_SEEDS.len()));

    let mut by_instance: BTreeMap<(&str, Method), Vec<&BenchRecord>> = BTreeMap::new();
    for r in &records {
        by_instance.entry((r.instance.as_str(), r.method)).or_default().push(r);
        let gamma = r.gamma.unwrap();
        assert!(r.size >= gamma);
        assert!(r.deviation_pct.unwrap() >= 0.0);
    }
    for inst in &instances {
        let size = |m| by_instance[&(inst.id.as_str(), m)][0].size;
        assert_eq!(size(Method::Exact), inst.gamma.unwrap());
        assert!(size(Method::Ig) <= size(Method::Greedy));
    }
    let summary = summarize(&records);
    assert_eq!(summary.iter().map(|s| s.method).collect::<Vec<_>>(), Method::ALL);
    let exact = summary.iter().find(|s| s.method == Method::Exact).unwrap();
    assert_eq!(exact.mean_deviation_pct, Some(0.0));
}

#[test]
fn csv_round_trip_reproduces_the_summary() {
    let (records, _) = run_bench(&corpus(), &[Method::Random, Method::Greedy, Method::Exact], &options());
    let mut buf = Vec::new();
    write_csv(&records, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("instance,method,seed,size,gamma,deviation_pct,elapsed_ms\n"));
    let back = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, records);
    assert_eq!(summarize(&back), summarize(&records));
    assert_eq!(format_summary(&summarize(&back)), format_summary(&summarize(&records)));
}

#[test]
fn results_are_deterministic_apart_from_timing() {
    let instances = corpus();
    let strip = |rs: Vec<BenchRecord>| {
        rs.into_iter()
            .map(|r| (r.instance, r.method, r.seed, r.size, r.gamma))
            .collect::<Vec<_>>()
    };
    let (a, _) = run_bench(&instances, &Method::ALL, &options());
    let (b, _) = run_bench(&instances, &Method::ALL, &options());
    assert_eq!(strip(a), strip(b));
}

#[test]
fn failures_are_collected_per_method() {
    let inst = Instance::unlabeled("c6", Graph::cycle(6), Default::default());
    let opts = SolveOptions {
        weights: None,
        ..options()
    };
    let (records, failures) = run_bench(&[inst], &[Method::Greedy, Method::Gcn], &opts);
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].gamma, None);
    assert_eq!(records[0].deviation_pct, None);
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0].method, Method::Gcn);
}

#[test]
fn method_names_parse() {
    for m in Method::ALL {
        assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
    }
    assert!("annealing".parse::<Method>().is_err());
}

#[test]
fn malformed_csv_is_rejected() {
    assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    let bad = "instance,method,seed,size,gamma,deviation_pct,elapsed_ms\nx,greedy,,two,,,1.0\n";
    assert!(matches!(read_csv(bad.as_bytes()), Err(mds_core::Error::Parse { line: 2, .. })));
}
