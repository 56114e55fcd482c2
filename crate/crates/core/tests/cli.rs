use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tdmtw::decomp::format::parse_decomposition;
use tdmtw::decomp::{validate, width};
use tdmtw::ip::format::parse_result;
use tdmtw::ip::SolveResult;
use tdmtw::sgraph::format::{parse_graph, parse_path_map, parse_subdivision_model, write_graph, write_path_map};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tdmtw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn tdmtw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdmtw")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_rooted_grid_two() {
    let o = tdmtw(&["gen", "--family", "rooted-grid", "--k", "2"]);
    assert!(o.status.success());
    let g = parse_graph(&stdout(&o)).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count(), g.roots().len()), (4, 4, 2));
}

#[test]
fn solve_matches_oracle_on_fixtures() {
    for (name, code) in [("two_vars.ip", 0), ("infeasible.ip", 2)] {
        let f = fixture(name);
        let dp = tdmtw(&["solve", "-i", p(&f)]);
        let bf = tdmtw(&["oracle", "-i", p(&f)]);
        assert_eq!(dp.status.code(), Some(code), "{name}");
        assert_eq!(bf.status.code(), Some(code), "{name}");
        let (a, b) = (parse_result(&stdout(&dp)).unwrap(), parse_result(&stdout(&bf)).unwrap());
        assert_eq!(a.objective(), b.objective(), "{name}");
    }
    let r = parse_result(&stdout(&tdmtw(&["solve", "-i", p(&fixture("two_vars.ip"))]))).unwrap();
    assert_eq!(r.objective().unwrap().to_string(), "1");
    assert!(matches!(r, SolveResult::Optimal { .. }));
}

#[test]
fn bundled_tdm_on_handle() {
    let g_path = scratch("handle3.graph");
    assert!(tdmtw(&["gen", "--family", "handle", "--k", "3", "-o", p(&g_path)]).status.success());
    let d_path = fixture("handle3.tdm");
    let v = tdmtw(&["validate", "-g", p(&g_path), "-d", p(&d_path)]);
    assert!(v.status.success(), "{}", stdout(&v));
    assert_eq!(stdout(&v).trim(), "ok");
    let reported: usize = stdout(&tdmtw(&["width", "-g", p(&g_path), "-d", p(&d_path)])).trim().parse().unwrap();
    let g = parse_graph(&std::fs::read_to_string(&g_path).unwrap()).unwrap();
    let d = parse_decomposition(&std::fs::read_to_string(&d_path).unwrap()).unwrap();
    assert_eq!(reported, width(&d, &g).unwrap());
}

#[test]
fn decompose_reports_its_width() {
    let g_path = scratch("vortex2.graph");
    assert!(tdmtw(&["gen", "--family", "vortex", "--k", "2", "--signing", "random", "--seed", "4", "-o", p(&g_path)])
        .status
        .success());
    for kind in ["tree", "kfree", "tocp", "tdm"] {
        let o = tdmtw(&["decompose", "-g", p(&g_path), "--kind", kind, "--budget", "500"]);
        assert!(o.status.success(), "{kind}");
        let text = stdout(&o);
        let first = text.lines().next().unwrap();
        let w: usize = first.strip_prefix("# width ").unwrap().split(' ').next().unwrap().parse().unwrap();
        let g = parse_graph(&std::fs::read_to_string(&g_path).unwrap()).unwrap();
        let d = parse_decomposition(&text).unwrap();
        assert_eq!(d.kind().keyword(), kind);
        assert!(validate(&d, &g).is_empty(), "{kind}");
        assert_eq!(width(&d, &g).unwrap(), w, "{kind}");
    }
}

#[test]
fn invalid_decomposition_lists_clauses() {
    let g_path = scratch("grid2.graph");
    assert!(tdmtw(&["gen", "--family", "grid", "--k", "2", "-o", p(&g_path)]).status.success());
    let d_path = scratch("bad.tree");
    std::fs::write(&d_path, "kind tree\ntree 1\nbag 0 0 1 2\n").unwrap();
    let o = tdmtw(&["validate", "-g", p(&g_path), "-d", p(&d_path)]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("invalid ")), "{text}");
    assert!(text.contains("invalid cover-vertex"), "{text}");
}

#[test]
fn even_grid_and_translate_round_trip() {
    let g_path = scratch("signed81.graph");
    let args = ["gen", "--family", "grid", "--k", "9", "--signing", "random", "--seed", "7", "-o", p(&g_path)];
    assert!(tdmtw(&args).status.success());
    let o = tdmtw(&["find-even-grid", "-g", p(&g_path), "--k", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# verify ok"), "{text}");
    let model = parse_subdivision_model(&text).unwrap();
    assert_eq!(model.vertex_map.len(), 9);

    let g_path = scratch("signed16.graph");
    let args = ["gen", "--family", "grid", "--k", "4", "--signing", "random", "--seed", "7", "-o", p(&g_path)];
    assert!(tdmtw(&args).status.success());
    let sub_path = scratch("signed16.sub.graph");
    let map_path = scratch("signed16.map");
    let t = tdmtw(&["translate", "--subdivide-even", "-g", p(&g_path), "--map", p(&map_path), "-o", p(&sub_path)]);
    assert!(t.status.success());
    let sub = parse_graph(&std::fs::read_to_string(&sub_path).unwrap()).unwrap();
    assert!(sub.edges().all(|e| e.parity.is_odd()));
    let map_text = std::fs::read_to_string(&map_path).unwrap();
    assert_eq!(write_path_map(&parse_path_map(&map_text).unwrap()), map_text);
    assert_eq!(write_graph(&sub), std::fs::read_to_string(&sub_path).unwrap());

    let dec = scratch("signed16.sub.tdm");
    let back = scratch("signed16.tdm");
    assert!(tdmtw(&["decompose", "-g", p(&sub_path), "--kind", "tdm", "-o", p(&dec)]).status.success());
    let u = tdmtw(&["translate", "--uncontract", "-g", p(&g_path), "-d", p(&dec), "--map", p(&map_path), "-o", p(&back)]);
    assert!(u.status.success());
    let v = tdmtw(&["validate", "-g", p(&g_path), "-d", p(&back)]);
    assert_eq!(stdout(&v).trim(), "ok");
}

#[test]
fn check_dmod_report() {
    let o = tdmtw(&["check-dmod", "-i", p(&fixture("two_vars.ip"))]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with(" pass")).count(), 4, "{text}");
    assert!(text.contains("delta 1\n"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["solve"][..],
        &["gen", "--family", "torus", "--k", "2"],
        &["translate", "--subdivide-even", "-g", "x.graph"],
        &["frobnicate"],
    ] {
        let o = tdmtw(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = tdmtw(&["oracle", "-i", "/nonexistent/x.ip"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    assert!(tdmtw(&["--help"]).status.success());
    assert!(tdmtw(&["solve", "--help"]).status.success());
}
