use std::fs;
use std::time::Instant;

use frustra::{
    fixtures, run_oracle, run_pipeline, ComponentPolicy, Error, OracleConfig, RunConfig,
    SamplerKind, SignedGraph, TieAgreement,
};

fn write(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn oracle_subcommand_reproduces_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "square.txt", &fixtures::worked_example_text());
    let out = dir.path().join("out");
    let result = run_oracle(&OracleConfig {
        input,
        tie_break: Some("TL".into()),
        normalized_influence: true,
        tie_agreement: TieAgreement::ZeroCut,
        out_dir: out.clone(),
    })
    .unwrap();
    assert_eq!(result.cloud.len(), 4);

    let vertices = fs::read_to_string(out.join("vertices.csv")).unwrap();
    let rows: Vec<&str> = vertices.lines().collect();
    assert_eq!(
        rows[0],
        "label,degree,status,status_exact,vertical_status,vertical_status_exact,influence,influence_exact"
    );
    // Labels sort as BL, BR, TL, TR.
    let status: Vec<&str> = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(status, vec!["13/16", "7/16", "13/16", "11/16"]);
    assert!(rows[1].starts_with("BL,2,0.8125000000,13/16,0.6250000000,5/8,"));

    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("controversy_exact=11/16\n"));
    assert!(summary.contains("controversy=0.6875000000\n"));
    assert!(summary.contains("frustration_index=1\n"));
    let cloud = fs::read_to_string(out.join("cloud.csv")).unwrap();
    assert_eq!(cloud.lines().count(), 5);
    let edges = fs::read_to_string(out.join("edges.csv")).unwrap();
    assert_eq!(edges.lines().count(), 6);
}

#[test]
fn sampled_run_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "square.txt", &fixtures::worked_example_text());
    let out = dir.path().join("out");
    let cfg = RunConfig {
        sampler: SamplerKind::BreadthFirst,
        trees: 500,
        seed: 3,
        workers: 3,
        ..RunConfig::new(&input, &out)
    };
    let result = run_pipeline(&cfg).unwrap();
    assert_eq!(result.components.len(), 1);
    assert_eq!(result.files.len(), 3);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    for key in [
        "method=bfs",
        "seed=3",
        "trees=500",
        "neighbor_order=shuffled",
        "tie_break=none",
    ] {
        assert!(summary.lines().any(|l| l == key), "missing {key}");
    }
    let vertices = fs::read_to_string(out.join("vertices.csv")).unwrap();
    assert_eq!(
        vertices.lines().next().unwrap(),
        "label,degree,status,status_exact,influence,influence_exact"
    );
    // No temporary files left behind.
    let names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().all(|n| !n.starts_with('.')), "{names:?}");
}

#[test]
fn all_components_are_tagged() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "two.txt",
        "a b 1\nb c -1\na c 1\nx y -1\n# comment\ny z 1\n",
    );
    let out = dir.path().join("out");
    let cfg = RunConfig {
        component: ComponentPolicy::All,
        trees: 20,
        tie_break: Some("y".into()),
        ..RunConfig::new(&input, &out)
    };
    let result = run_pipeline(&cfg).unwrap();
    assert_eq!(result.components.len(), 2);
    let vertices = fs::read_to_string(out.join("vertices.csv")).unwrap();
    assert!(vertices.starts_with("component,label,"));
    assert!(vertices
        .lines()
        .any(|l| l.starts_with("0,a,2,") && l.contains(",,")));
    assert!(vertices.lines().any(|l| l.starts_with("1,y,")));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("component1.tie_break=y\n"));
    assert!(summary.contains("component0.tie_break=none\n"));
}

#[test]
fn failures_leave_no_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");

    let empty = write(dir.path(), "empty.txt", "# nothing\n");
    let err = run_pipeline(&RunConfig::new(&empty, &out)).unwrap_err();
    assert!(matches!(err, Error::EmptyGraph) && err.is_parse());

    let cancelled = write(dir.path(), "cancel.txt", "a b 1\nb a -1\n");
    assert!(matches!(
        run_pipeline(&RunConfig::new(&cancelled, &out)),
        Err(Error::EmptyGraph)
    ));

    let bad = write(dir.path(), "bad.txt", "a b 1\na c x\n");
    match run_pipeline(&RunConfig::new(&bad, &out)) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }

    let good = write(dir.path(), "good.txt", "a b 1\n");
    let cfg = RunConfig {
        tie_break: Some("nope".into()),
        ..RunConfig::new(&good, &out)
    };
    assert!(matches!(run_pipeline(&cfg), Err(Error::UnknownLabel(_))));
    let cfg = RunConfig {
        trees: 0,
        ..RunConfig::new(&good, &out)
    };
    assert!(matches!(run_pipeline(&cfg), Err(Error::Config(_))));

    assert!(!out.exists() || fs::read_dir(&out).unwrap().next().is_none());
}

#[test]
fn oracle_caps_are_capacity_errors() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixtures::complete_graph(22, |u, v| {
        frustra::Sign::from_value(if (u + v) % 3 == 0 { -1 } else { 1 }).unwrap()
    });
    let input = write(dir.path(), "big.txt", &g.export_edge_list());
    let err = run_oracle(&OracleConfig {
        input,
        tie_break: None,
        normalized_influence: true,
        tie_agreement: TieAgreement::ZeroCut,
        out_dir: dir.path().join("out"),
    })
    .unwrap_err();
    assert!(err.is_capacity(), "{err}");
}

fn seconds_for(g: &SignedGraph, trees: u64) -> f64 {
    let start = Instant::now();
    frustra::sample_accumulator(
        g,
        SamplerKind::RandomMst,
        1,
        trees,
        1,
        None,
        TieAgreement::ZeroCut,
    )
    .unwrap();
    start.elapsed().as_secs_f64()
}

#[test]
fn runtime_scales_linearly_with_edges() {
    // Same vertex count, roughly twice the edges.
    let sparse = fixtures::random_connected_graph(1500, 0.004, 0.3, 1);
    let dense = fixtures::random_connected_graph(1500, 0.009, 0.3, 1);
    let ratio_edges = dense.edge_count() as f64 / sparse.edge_count() as f64;
    assert!(
        (1.6..2.4).contains(&ratio_edges),
        "edge ratio {ratio_edges}"
    );
    seconds_for(&sparse, 5);
    let a = seconds_for(&sparse, 40);
    let b = seconds_for(&dense, 40);
    let ratio = b / a;
    assert!(
        ratio <= ratio_edges * 3.0,
        "runtime ratio {ratio} for edge ratio {ratio_edges}"
    );
}
