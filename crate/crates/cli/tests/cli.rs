use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quadflip::models::{standard_model, MODEL_NAMES};
use quadflip::qgm::{parse_qgm, write_qgm};
use quadflip::canonical_code;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadflip"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn model(dir: &Path, name: &str, params: &[&str]) -> PathBuf {
    let path = dir.join(format!("{name}{}.qgm", params.join("x")));
    let mut args = vec!["model", name];
    args.extend_from_slice(params);
    let p = path.to_str().unwrap();
    args.extend_from_slice(&["--out", p]);
    assert!(run(&args).status.success());
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn info_on_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cube = model(dir.path(), "cube_sphere", &[]);
    let o = run(&["info", p(&cube)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "sphere orientable χ=2 V=8 E=12 F=6 b=0");
}

#[test]
fn invariant_of_smallest_torus() {
    let dir = tempfile::tempdir().unwrap();
    let t = model(dir.path(), "grid_torus", &["1", "1"]);
    let marking = dir.path().join("t.marking");
    // the two loops of the single square
    std::fs::write(&marking, "cycle 0\ncycle 2\n").unwrap();
    let o = run(&["invariant", p(&t), "--marking", p(&marking)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("j2=1 j1_zero=false pairings=11"), "{}", stdout(&o));
}

#[test]
fn path_replays_to_target() {
    let dir = tempfile::tempdir().unwrap();
    let a = model(dir.path(), "pillow_sphere", &[]);
    let b = model(dir.path(), "cube_sphere", &[]);
    let seq = dir.path().join("seq.txt");
    let o = run(&["path", p(&a), p(&b), "--max-faces", "14", "--max-states", "100000", "--out", p(&seq)]);
    assert_eq!(o.status.code(), Some(0));
    let end = dir.path().join("end.qgm");
    let o = run(&["flip", "apply", p(&a), "--sequence", p(&seq), "--out", p(&end)]);
    assert!(o.status.success());
    let got = parse_qgm(&std::fs::read_to_string(&end).unwrap()).unwrap();
    let want = parse_qgm(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(canonical_code(&got).unwrap(), canonical_code(&want).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qgm");
    std::fs::write(&bad, "qgm 1\ndarts 2\na0: 1 0\na1: 1 0\na2: 0 1\n").unwrap();
    assert_eq!(run(&["check", p(&bad)]).status.code(), Some(1));
    assert_eq!(run(&["info", "/no/such/file"]).status.code(), Some(1));
    // different parity on the sphere: nothing to find, reported as exhaustion
    let beak = model(dir.path(), "beak_sphere", &[]);
    let cube = model(dir.path(), "cube_sphere", &[]);
    let o = run(&["path", p(&beak), p(&cube), "--max-faces", "8"]);
    assert_eq!(o.status.code(), Some(2));
    let torus = model(dir.path(), "grid_torus", &["1", "1"]);
    assert_eq!(run(&["path", p(&beak), p(&torus)]).status.code(), Some(1));
}

#[test]
fn flip_list_and_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cube = model(dir.path(), "cube_sphere", &[]);
    let o = run(&["flip", "list", p(&cube), "--kind", "b1"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 6);
    let anchor = lines[0].split_whitespace().nth(1).unwrap().to_string();
    let out = dir.path().join("big.qgm");
    let o = run(&["flip", "apply", p(&cube), "--kind", "b1", "--site", &anchor, "--out", p(&out)]);
    assert!(o.status.success());
    assert!(stdout(&run(&["info", p(&out)])).contains("F=10"));
    // an anchor that is not a site
    let o = run(&["flip", "apply", p(&cube), "--kind", "b1", "--site", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn marking_is_carried_through_flips() {
    let dir = tempfile::tempdir().unwrap();
    let t = model(dir.path(), "grid_torus", &["2", "2"]);
    let marking = dir.path().join("t.marking");
    std::fs::write(&marking, "cycle 0 8\ncycle 6 22\n").unwrap();
    let before = stdout(&run(&["invariant", p(&t), "--marking", p(&marking)]));
    let sites = stdout(&run(&["flip", "list", p(&t), "--kind", "b2"]));
    let anchor = sites.lines().next().unwrap().split_whitespace().nth(1).unwrap().to_string();
    let out = dir.path().join("after.qgm");
    let o = run(&["flip", "apply", p(&t), "--kind", "b2", "--site", &anchor, "--marking", p(&marking), "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let after = stdout(&run(&["invariant", p(&out), "--marking", p(&out.with_extension("marking"))]));
    assert_eq!(before, after);
}

#[test]
fn geometry_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cube = model(dir.path(), "cube_sphere", &[]);
    let curves = stdout(&run(&["curves", p(&cube)]));
    assert!(curves.contains("double_points=6") && curves.contains("circles=3"));
    let dual = dir.path().join("dual.qgm");
    assert!(run(&["dual", p(&cube), "--out", p(&dual)]).status.success());
    let c1 = stdout(&run(&["check", p(&cube)]));
    let c2 = stdout(&run(&["check", p(&dual)]));
    assert_eq!(c1, c2);
    let dot = stdout(&run(&["export", p(&cube), "--dot"]));
    assert!(dot.starts_with("graph skeleton {") && dot.matches("--").count() == 12);
    let st = dir.path().join("st.qgm");
    assert!(run(&["stabilize", p(&cube), "--start", "0", "--turns", "1", "--out", p(&st)]).status.success());
    assert!(stdout(&run(&["info", p(&st)])).contains("F=10"));
    let t = model(dir.path(), "grid_torus", &["2", "2"]);
    let slid = dir.path().join("slid.qgm");
    assert!(run(&["diag", "slide", p(&t), "--out", p(&slid)]).status.success());
    assert!(stdout(&run(&["info", p(&slid)])).contains("torus orientable χ=0 V=4 E=8 F=4"));
    // no degree-2 vertex on the 2x2 torus
    assert_eq!(run(&["diag", "rotate", p(&t)]).status.code(), Some(1));
}

#[test]
fn census_is_reproducible() {
    let args = ["census", "--surface", "sphere", "--max-faces", "4", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("classes=41 components=2"), "{text}");
}

#[test]
fn every_model_round_trips() {
    for &(name, params) in STANDARD_MODELS_WITH_PARAMS {
        let q = standard_model(name, params).unwrap();
        let back = parse_qgm(&write_qgm(&q)).unwrap();
        assert_eq!(canonical_code(&q).unwrap(), canonical_code(&back).unwrap(), "{name}");
    }
    assert!(MODEL_NAMES.iter().all(|n| STANDARD_MODELS_WITH_PARAMS.iter().any(|(m, _)| m == n)));
}

const STANDARD_MODELS_WITH_PARAMS: &[(&str, &[usize])] = &[
    ("cube_sphere", &[]),
    ("pillow_sphere", &[]),
    ("beak_sphere", &[]),
    ("grid_torus", &[2, 3]),
    ("klein_grid", &[2, 2]),
    ("rp2_min", &[]),
    ("disk_grid", &[2, 3]),
    ("annulus_grid", &[2, 3]),
    ("moebius_strip", &[3]),
];
