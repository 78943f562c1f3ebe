use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cherednik"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("session.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn run(config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg("run")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn report(out: &Path, name: &str) -> Value {
    let text = std::fs::read_to_string(out.join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

const Z2: &str = r#"
[group]
family = "cyclic"
order = 2

[parameters]
s = "1/2"

[[analysis]]
type = "group-info"

[[analysis]]
type = "restricted-blocks"
"#;

#[test]
fn group_info_for_z2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), Z2);
    let out = dir.path().join("out");
    let o = run(&cfg, &out, &["--only", "group-info"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out, "01-group-info.json");
    assert_eq!(r["status"], "ok");
    assert_eq!(r["report"]["order"], 2);
    assert_eq!(
        r["report"]["reflection_classes"].as_array().unwrap().len(),
        1
    );
    assert!(!out.join("02-restricted-blocks.json").exists());
    assert!(std::fs::read_to_string(out.join("summary.md"))
        .unwrap()
        .contains("|W| = 2"));
}

#[test]
fn dihedral4_census_at_c0() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(
        &configs().join("dihedral4.toml"),
        &out,
        &["--only", "leaf-census-c0"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out, "02-leaf-census-c0.json");
    let rows: Vec<(String, u64)> = r["report"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            (
                row["label"].as_str().unwrap().to_string(),
                row["sampled_leaf_dim"].as_u64().unwrap(),
            )
        })
        .collect();
    // (1) 4, (<b>) 2, (<ab>) 2, (I2(m)) 0, one leaf each
    assert_eq!(
        rows,
        vec![
            ("1".to_string(), 4),
            ("<b>".to_string(), 2),
            ("<ab>".to_string(), 2),
            ("I2(4)".to_string(), 0)
        ]
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("dihedral4.toml");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(run(
            &cfg,
            out,
            &["--only", "group-info,leaf-census-c0,restricted-blocks"]
        )
        .status
        .success());
    }
    let mut names: Vec<_> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for n in names {
        assert_eq!(
            std::fs::read(a.join(&n)).unwrap(),
            std::fs::read(b.join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(
        &configs().join("cyclic2.toml"),
        &out,
        &["--only", "group-info", "--seed", "99"],
    );
    assert!(o.status.success());
    assert!(std::fs::read_to_string(out.join("summary.md"))
        .unwrap()
        .contains("seed 99"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let bad = [
        Z2.replace("s = \"1/2\"", "t = \"1/2\""),
        Z2.replace("s = \"1/2\"", "s = \"1/2 +\""),
        Z2.replace("order = 2", "order = 2\nbogus = 1"),
        format!("{Z2}\n[[analysis]]\ntype = \"be-check\"\nparabolic = \"Z/2\"\nk = 0\n"),
        format!("{Z2}\n[[analysis]]\ntype = \"main-check\"\nparabolic = \"<q>\"\nk = 2\n"),
        "[group\nfamily=".to_string(),
    ];
    for text in bad {
        let cfg = write_config(dir.path(), &text);
        let o = run(&cfg, &out, &[]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{text}\n{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let cfg = write_config(dir.path(), Z2);
    assert_eq!(
        run(&cfg, &out, &["--only", "nothing"]).status.code(),
        Some(2)
    );
    let missing = bin().args(["run", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn max_dim_guard_fails_the_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), Z2);
    let out = dir.path().join("out");
    let o = run(&cfg, &out, &["--max-dim", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds --max-dim"));
    // the other analysis still reports
    assert_eq!(report(&out, "01-group-info.json")["status"], "ok");
    assert_eq!(
        report(&out, "02-restricted-blocks.json")["status"],
        "failed"
    );
}

#[test]
fn printed_theta_sign_fails_naming_the_relation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[group]
family = "dihedral"
m = 3

[parameters]
b = "1"

[[analysis]]
type = "be-check"
parabolic = "<b>"
k = 2
printed_sign = true
"#,
    );
    let out = dir.path().join("out");
    let o = run(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("θ relation [y"), "{err}");
}

#[test]
fn main_check_for_i2_6() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(
        &configs().join("dihedral6.toml"),
        &out,
        &["--only", "main-check"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &report(&out, "03-main-check.json")["report"];
    // |W / W_b| = 12 / 2, and C[x,y] ⋊ S2 / (x², xy, y²) has basis {1, x, y} ⊗ S2
    let size = 12 / 2;
    let cuspidal = 3 * 2;
    assert_eq!(r["matrix_size"], size);
    assert_eq!(r["quotient_dim"], cuspidal);
    assert_eq!(r["predicted_dim"], size * size * cuspidal);
    assert_eq!(r["order"], 3);
    for row in r["residuals"]["rows"].as_array().unwrap() {
        assert_eq!(row["residual_norm"], "0", "{row}");
    }
}
