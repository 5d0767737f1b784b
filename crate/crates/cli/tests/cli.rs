use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = fpp(args);
    assert!(
        out.status.success(),
        "fpp {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// `statistic -> value` from a stats CSV.
fn stat(csv: &str, name: &str) -> f64 {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f.len() >= 4 && f[2] == name)
        .unwrap_or_else(|| panic!("no statistic {name} in\n{csv}"))[3]
        .parse()
        .unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn geometric_law_through_the_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let pool = p(dir.path(), "w.txt");
    let draws = p(dir.path(), "d.csv");
    ok(&[
        "--seed",
        "1",
        "pool",
        "--target",
        "w-complete",
        "--s",
        "1",
        "--size",
        "100000",
        "--out",
        &pool,
    ]);
    let header = fs::read_to_string(&pool).unwrap();
    assert!(header.contains("# config_hash "));
    assert!(header.contains("# target w-complete"));
    ok(&[
        "--seed",
        "2",
        "sample",
        "--hatd-complete",
        "--s",
        "1",
        "-n",
        "1000000",
        "--pool",
        &pool,
        "--out",
        &draws,
    ]);
    let stats = ok(&[
        "analyze",
        "-i",
        &draws,
        "--tv",
        "--against",
        "geometric:0.5",
    ]);
    assert!(stat(&stats, "tv") < 0.005, "{stats}");
    assert!((stat(&stats, "mean") - 2.0).abs() < 0.01);
}

#[test]
fn generate_spt_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let graph = p(dir.path(), "g.txt");
    let degrees = p(dir.path(), "deg.csv");
    let table = p(dir.path(), "t.csv");
    ok(&[
        "--seed",
        "3",
        "generate",
        "--cm",
        "--powerlaw",
        "3.5",
        "--dmin",
        "5",
        "-n",
        "20000",
        "--out",
        &graph,
    ]);
    ok(&[
        "--seed",
        "4",
        "spt",
        "--graph",
        &graph,
        "--source",
        "random",
        "--sources",
        "3",
        "--table",
        &table,
        "--out",
        &degrees,
    ]);
    let text = fs::read_to_string(&degrees).unwrap();
    assert!(text.contains("series,k,p,q"));
    assert!(text.lines().any(|l| l.starts_with("tree,1,")));
    assert_eq!(
        fs::read_to_string(&table)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .count(),
        20000
    );
    let stats = ok(&["analyze", "-i", &degrees, "--series", "tree"]);
    // handshake over three connected trees
    assert!(
        (stat(&stats, "mean") - 2.0 * 19999.0 / 20000.0).abs() < 1e-9,
        "{stats}"
    );
    let stats = ok(&["analyze", "-i", &degrees, "--series", "graph", "--tail"]);
    assert!(
        (stat(&stats, "tau_regression") - 3.5).abs() < 0.3,
        "{stats}"
    );
    let bfs = ok(&["bfst", "--graph", &graph, "--source", "0"]);
    assert!(bfs.contains("# run bfst"));
}

#[test]
fn seeds_give_identical_files_regardless_of_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |dir: &Path, threads: &'static str| {
        vec![
            "--seed".to_string(),
            "9".into(),
            "--threads".into(),
            threads.into(),
            "--out".into(),
            dir.to_string_lossy().into_owned(),
            "run".into(),
            "--experiment".into(),
            "oracle-vs-sim".into(),
            "--set".into(),
            "model.n=4000".into(),
            "--set".into(),
            "run.replications=6".into(),
            "--set".into(),
            "oracle.pool_size=20000".into(),
            "--set".into(),
            "oracle.draws=20000".into(),
        ]
    };
    for (dir, t) in [(a.path(), "1"), (b.path(), "3")] {
        let v = args(dir, t);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    }
    for name in ["oracle-vs-sim.csv", "oracle-vs-sim-stats.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(dir.path(), "exp.conf");
    fs::write(
        &cfg,
        "# fig 2 at small scale\nexperiment = fig2-regular\nseed = 5\n\n[model]\nn = 4000\nr = 10\n\n[run]\nreplications = 2\n",
    )
    .unwrap();
    let out = p(dir.path(), "out");
    ok(&[
        "--out",
        &out,
        "run",
        "--config",
        &cfg,
        "--set",
        "model.r=12",
    ]);
    let table = fs::read_to_string(dir.path().join("out/fig2-regular.csv")).unwrap();
    assert!(table.contains("# seed 5"));
    assert!(table.contains("# config model.r=12"));
    assert!(table.contains("# config model.n=4000"));
    assert!(table.lines().any(|l| l == "k,p,q_ge,q_gt,two_pow_minus_k"));

    ok(&["--seed", "6", "--out", &out, "run", "--config", &cfg]);
    let again = fs::read_to_string(dir.path().join("out/fig2-regular.csv")).unwrap();
    assert!(again.contains("# seed 6"));
    let hash = |t: &str| {
        t.lines()
            .find(|l| l.starts_with("# config_hash"))
            .unwrap()
            .to_string()
    };
    assert_ne!(hash(&table), hash(&again));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "out");
    let code = |args: &[&str]| fpp(args).status.code().unwrap();

    let cfg = p(dir.path(), "bad.conf");
    fs::write(&cfg, "experiment = infvar\n[model]\nr = 3\n").unwrap();
    let res = fpp(&["--out", &out, "run", "--config", &cfg]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 3"));

    assert_eq!(code(&["--out", &out, "run", "--experiment", "fig3"]), 2);
    assert_eq!(
        code(&[
            "--out",
            &out,
            "run",
            "--experiment",
            "recentering",
            "--set",
            "model.s=-1"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "--out",
            &out,
            "run",
            "--experiment",
            "complete-s-grid",
            "--set",
            "run.edge_budget=1000"
        ]),
        3
    );
    assert_eq!(code(&["generate", "--complete", "-n", "100000"]), 3);

    let edges = p(dir.path(), "e.txt");
    fs::write(&edges, "0 1 1.0\n1 2 nope\n").unwrap();
    let res = fpp(&["spt", "--graph", &edges]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));
}

#[test]
fn every_experiment_runs_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "out");
    let runs: [(&str, &[&str]); 8] = [
        ("fig1-powerlaw", &["model.n=30000", "run.replications=2"]),
        (
            "fig2-regular",
            &["model.n=3000", "model.r=10", "run.replications=2"],
        ),
        (
            "complete-s-grid",
            &["model.n=300", "model.s=1", "oracle.draws=5000"],
        ),
        (
            "oracle-vs-sim",
            &[
                "model.n=2000",
                "oracle.pool_size=20000",
                "oracle.draws=5000",
            ],
        ),
        (
            "rate-of-conv",
            &[
                "run.replications=50",
                "oracle.pool_size=20000",
                "analysis.k_grid=8,16,32,64,128",
            ],
        ),
        (
            "bfst-identity",
            &[
                "model.n=3000",
                "oracle.pool_size=20000",
                "oracle.draws=5000",
            ],
        ),
        (
            "recentering",
            &[
                "model.n_grid=50,100,150",
                "run.replications=3",
                "run.sources_per_graph=10",
                "oracle.pool_size=20000",
                "oracle.draws=5000",
            ],
        ),
        (
            "infvar",
            &[
                "oracle.pool_size=20000",
                "oracle.draws=5000",
                "analysis.k=500",
                "analysis.k_reps=20",
            ],
        ),
    ];
    for (name, sets) in runs {
        let mut args = vec!["--seed", "11", "--out", &out, "run", "--experiment", name];
        for s in sets {
            args.extend(["--set", s]);
        }
        let stdout = ok(&args);
        assert!(
            stdout.contains("experiment,seed,statistic,value,stderr"),
            "{name}"
        );
        for file in [format!("{name}.csv"), format!("{name}-stats.csv")] {
            let text = fs::read_to_string(dir.path().join("out").join(&file)).unwrap();
            assert!(text.starts_with("# fpp "), "{file}");
            assert!(text.contains("# seed 11"), "{file}");
        }
    }
}

#[test]
fn oracle_vs_sim_desk_scale() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "out");
    let stats = ok(&[
        "--seed",
        "20",
        "--out",
        &out,
        "run",
        "--experiment",
        "oracle-vs-sim",
    ]);
    assert!(stat(&stats, "tv_tree_oracle") < 0.02, "{stats}");
    assert!((stat(&stats, "lambda") - 2.0).abs() < 1e-9);
}

#[test]
fn fig2_tail_tracks_two_pow_minus_k() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "out");
    let stats = ok(&[
        "--seed",
        "21",
        "--out",
        &out,
        "run",
        "--experiment",
        "fig2-regular",
        "--set",
        "run.replications=8",
    ]);
    assert!(
        stat(&stats, "max_rel_dev_q_gt_vs_two_pow_minus_k") <= 0.5,
        "{stats}"
    );
}
