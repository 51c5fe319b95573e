use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nicer-ears"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen(dir: &Path, family: &str, k: usize) -> PathBuf {
    let p = dir.join(format!("{family}_k{k}.gr"));
    let o = run(&["gen", family, "--k", &k.to_string(), "--seed", "5", "--out", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn header(p: &Path) -> (usize, usize, Option<usize>) {
    let text = std::fs::read_to_string(p).unwrap();
    let mut h = (0, 0, None);
    for l in text.lines() {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f.first() {
            Some(&"p") => (h.0, h.1) = (f[1].parse().unwrap(), f[2].parse().unwrap()),
            Some(&"t") => h.2 = Some(f.len() - 1),
            _ => {}
        }
    }
    h
}

fn report(args: &[&str]) -> (serde_json::Value, bool) {
    let mut a = args.to_vec();
    a.extend(["--json", "-"]);
    let o = run(&a);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("JSON report");
    (v, o.status.success())
}

#[test]
fn generated_counts() {
    let dir = tempfile::tempdir().unwrap();
    for k in 1..=4 {
        assert_eq!(header(&gen(dir.path(), "fig3", k)), (8 * k + 5, 12 * k + 5, Some(2)));
        assert_eq!(header(&gen(dir.path(), "fig4", k)), (10 * k + 1, 13 * k + 1, None));
        assert_eq!(header(&gen(dir.path(), "fig5", k)), (24 * k, 44 * k - 2, None));
    }
    assert_eq!(header(&gen(dir.path(), "theta", 2)), (5, 6, None));
    assert_eq!(header(&gen(dir.path(), "cycle_st", 3)), (6, 6, Some(2)));
    assert!(!run(&["gen", "fig3", "--k", "0"]).status.success());
    assert!(!run(&["gen", "nosuch", "--k", "1"]).status.success());
}

#[test]
fn solve_figure_instances() {
    let dir = tempfile::tempdir().unwrap();
    let f4 = gen(dir.path(), "fig4", 1);
    let (r, ok) = report(&["solve", "tsp", f4.to_str().unwrap(), "--lp", "--oracle"]);
    assert!(ok);
    assert!(r["cardinality"].as_u64().unwrap() <= 14);
    assert_eq!(r["bounds"]["lp"], "11/1");
    assert_eq!(r["oracle"]["value"], 11);
    assert_eq!(r["assertions"]["ratio_vs_lp"], true);
    assert_eq!(r["schema"], "nicer-ears-report/1");

    let f5 = gen(dir.path(), "fig5", 1);
    let (r, ok) = report(&["solve", "2ecss", f5.to_str().unwrap(), "--lp"]);
    assert!(ok);
    assert!(r["cardinality"].as_u64().unwrap() <= 32);
    assert_eq!(r["bounds"]["lp"], "24/1");

    let f3 = gen(dir.path(), "fig3", 1);
    let (r, ok) = report(&["solve", "tjoin", f3.to_str().unwrap(), "--oracle"]);
    assert!(ok);
    assert!(r["cardinality"].as_u64().unwrap() <= 18);
    assert_eq!(r["oracle"]["value"], 12);
}

#[test]
fn path_tjoin_and_missing_t_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("path2.gr");
    std::fs::write(&p, "p 3 2\ne 1 2\ne 2 3\nt 1 3\n").unwrap();
    let (r, ok) = report(&["solve", "tjoin", p.to_str().unwrap()]);
    assert!(ok);
    assert_eq!(r["cardinality"], 2);
    let q = dir.path().join("c4.gr");
    std::fs::write(&q, "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n").unwrap();
    let o = run(&["solve", "tjoin", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c4.gr");
    std::fs::write(&g, "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n").unwrap();
    let good = dir.path().join("good.sol");
    std::fs::write(&good, "x 1 1\nx 2 1\nx 3 1\nx 4 1\n").unwrap();
    let bad = dir.path().join("bad.sol");
    std::fs::write(&bad, "x 1 1\nx 2 1\nx 3 1\n").unwrap();
    let o = run(&["verify", g.to_str().unwrap(), good.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["verify", g.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("odd"));

    let f3 = gen(dir.path(), "fig3", 1);
    let w = dir.path().join("w.sol");
    let o = run(&["oracle", "tjoin", f3.to_str().unwrap(), "--solution", w.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["verify", f3.to_str().unwrap(), w.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("12 edges"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "random", 8);
    let args = ["solve", "tsp", g.to_str().unwrap(), "--lp", "--oracle", "--json", "-"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let g2 = dir.path().join("again.gr");
    run(&["gen", "random", "--k", "8", "--seed", "5", "--out", g2.to_str().unwrap()]);
    assert_eq!(std::fs::read(&g).unwrap(), std::fs::read(&g2).unwrap());
}
