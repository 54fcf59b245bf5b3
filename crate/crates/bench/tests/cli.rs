use std::process::Command;

use seqflow_bench::{
    generate_instance, run_bench, run_cell, BenchConfig, BenchKind, Cell, Instance, PropId,
};

fn seqbench() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqbench"))
}

#[test]
fn config_error_exits_with_two() {
    let out = seqbench()
        .args(["--n", "10", "--k", "4", "--delta", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = seqbench()
        .args(["--bench", "soft", "--prop", "fb"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = seqbench().args(["--per-cell", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_grid_succeeds() {
    let out = seqbench().args(["--n"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
}

#[test]
fn csv_has_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = seqbench()
        .args([
            "--n",
            "20,30",
            "--k",
            "5",
            "--delta",
            "1,2",
            "--per-cell",
            "3",
            "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "bench",
            "n",
            "k",
            "delta",
            "m",
            "prop",
            "seed",
            "solved",
            "total",
            "avg_time_ms",
            "avg_backtracks"
        ]
    );
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(&r[0], "hard");
        assert_eq!(&r[5], "fb");
        assert_eq!(&r[7], "3");
        assert_eq!(&r[8], "3");
        assert_eq!(r[10].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn empty_csv_has_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    let out = seqbench()
        .args(["--delta", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("bench,n,k,delta"));
}

#[test]
fn runs_are_deterministic() {
    let config = BenchConfig {
        n: vec![40],
        k: vec![4, 7],
        delta: vec![1],
        prop: PropId::Ad,
        per_cell: 6,
        seed: 11,
        ..Default::default()
    };
    let a = run_cell(&config, config.cells()[1]).unwrap();
    let b = run_cell(&config, config.cells()[1]).unwrap();
    let key = |r: &[seqflow_bench::RunRecord]| -> Vec<_> {
        r.iter()
            .map(|x| (x.status, x.nodes, x.backtracks))
            .collect()
    };
    assert_eq!(key(&a), key(&b));
    assert_eq!(
        generate_instance(&config, config.cells()[0], 3).unwrap(),
        generate_instance(&config, config.cells()[0], 3).unwrap()
    );
}

#[test]
fn flow_propagation_never_backtracks() {
    let config = BenchConfig {
        n: vec![30, 60],
        k: vec![3, 6, 10],
        delta: vec![1, 2],
        per_cell: 10,
        ..Default::default()
    };
    for row in run_bench(&config).unwrap() {
        assert_eq!(row.solved, row.total);
        assert_eq!(row.avg_backtracks, Some(0.0));
    }
}

#[test]
fn dual_route_matches_flow_on_hard_instances() {
    let config = BenchConfig {
        n: vec![25],
        k: vec![5],
        delta: vec![1, 3],
        prop: PropId::Dual,
        per_cell: 5,
        ..Default::default()
    };
    for row in run_bench(&config).unwrap() {
        assert_eq!(row.solved, row.total);
        assert_eq!(row.avg_backtracks, Some(0.0));
    }
}

#[test]
fn soft_instances_solve_under_both_propagators() {
    let base = BenchConfig {
        bench: BenchKind::Soft,
        n: vec![20],
        k: vec![5],
        delta: vec![1],
        m: 2,
        per_cell: 4,
        prop: PropId::Fbs,
        ..Default::default()
    };
    let fbs = run_bench(&base).unwrap();
    let ads = run_bench(&BenchConfig {
        prop: PropId::Ads,
        ..base.clone()
    })
    .unwrap();
    assert_eq!(fbs[0].solved, ads[0].solved);
}

#[test]
fn instances_are_dumped_and_reread() {
    let dir = tempfile::tempdir().unwrap();
    let config = BenchConfig {
        n: vec![15],
        k: vec![4],
        delta: vec![1],
        per_cell: 3,
        instances_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let first = run_cell(&config, config.cells()[0]).unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 3);
    let cell = Cell {
        n: 15,
        k: 4,
        delta: 1,
    };
    for entry in files {
        let path = entry.unwrap().path();
        let inst = Instance::read(&path).unwrap();
        assert_eq!(inst.domains.len(), 15);
    }
    let expected = generate_instance(&config, cell, 0).unwrap();
    let name = dir.path().join("hard-n15-k4-d1-m1-s0-0.txt");
    assert_eq!(Instance::read(&name).unwrap(), expected);

    // A hand-edited file takes precedence over generation.
    let body: String = (0..15).map(|i| format!("dom {i} 0 1\n")).collect();
    std::fs::write(&name, format!("seq 15 4 4 4\n{body}")).unwrap();
    let again = run_cell(&config, cell).unwrap();
    assert_eq!(again.len(), first.len());
    assert_eq!(again[0].status, seqflow::solver::SolveStatus::Sat);
}

#[test]
fn malformed_instance_reports_line() {
    let err = Instance::parse("seq 5 2 1 1\nbogus 1\n", "x.txt").unwrap_err();
    assert!(err.to_string().starts_with("x.txt:2:"), "{err}");
}
