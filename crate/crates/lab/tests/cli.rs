use std::path::PathBuf;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dehn-lab"))
        .args(args)
        .env_remove("DEHN_LAB_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dehn-lab-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn ball_sizes_of_z2() {
    let o = lab(&["ball", "--family", "gc", "--c", "1", "--radius", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "radius,size\n0,1\n1,5\n2,13\n3,25\n");
}

#[test]
fn ball_of_radius_zero() {
    let o = lab(&["ball", "--family", "gamma", "--a", "2", "--b", "1", "--c", "3", "--radius", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "radius,size\n0,1\n");
}

#[test]
fn usage_errors_exit_with_status_2() {
    assert_eq!(lab(&["ball", "--family", "bogus", "--radius", "2"]).status.code(), Some(2));
    assert_eq!(lab(&["ball", "--family", "gamma", "--a", "2", "--radius", "2"]).status.code(), Some(2));
    assert_eq!(lab(&["ball", "--family", "gc", "--c", "1", "--radius", "2", "--budget", "0"]).status.code(), Some(2));
    assert_eq!(lab(&["area", "--family", "gc", "--c", "2", "--word", "q"]).status.code(), Some(2));
}

#[test]
fn exhausted_ball_budget_exits_with_status_3() {
    let o = lab(&["ball", "--family", "gc", "--c", "2", "--radius", "10", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());
}

#[test]
fn central_length_of_g1_is_linear() {
    let o = lab(&["central-length", "--c", "1", "--radius", "8"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row = out.lines().last().unwrap();
    let exponent: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!((exponent - 1.0).abs() < 1e-9, "{out}");
}

#[test]
fn undistorted_subgroup_has_constant_distortion() {
    let o = lab(&["distortion", "--pair", "centre", "--c", "1", "--radius", "6", "--h-radius", "10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for line in out.lines().skip(1).take(6) {
        assert!(line.ends_with(",1.000000,false"), "{line}");
    }
}

#[test]
fn relator_has_oracle_and_filler_area_one() {
    let o = lab(&["area", "--family", "gc", "--c", "2", "--word", "x1^-1 t^-1 x1 t x2^-1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("oracle_area,1,false"), "{out}");
    assert!(out.contains("filler_area,1,false"), "{out}");
}

#[test]
fn hnn_commutator_matches_corridor_bound() {
    let o = lab(&["area", "--family", "z2-hnn", "--word", "a t^3 a^-1 t^-3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("oracle_area,3,false"), "{out}");
    assert!(out.contains("corridor_bound,3,false"), "{out}");
}

#[test]
fn word_beyond_budget_is_saturated() {
    let o = lab(&["area", "--family", "z2-hnn", "--word", "a^3 t^3 a^-3 t^-3", "--area-budget", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("oracle_area,4,true"));
}

#[test]
fn presentation_files_are_accepted() {
    let dir = scratch_dir("pres");
    let path = dir.join("z2.txt");
    std::fs::write(&path, "[generators]\na b\n[relators]\na b a^-1 b^-1\n").unwrap();
    let o = lab(&["area", "--presentation", path.to_str().unwrap(), "--word", "a^2 b a^-2 b^-1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("oracle_area,2,false"));
}

#[test]
fn wn_report_lower_bounds() {
    let o = lab(&[
        "wn-report", "--a", "2", "--b", "1", "--c", "3", "--n-max", "3", "--radius", "10", "--no-fill",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let l1: usize = rows[0][1].parse().unwrap();
    for (i, row) in rows.iter().enumerate() {
        let n = i as u64 + 1;
        assert_eq!(row[1].parse::<usize>().unwrap(), l1 * n as usize);
        assert_eq!(row[2], n.pow(5).to_string());
        assert_eq!(row[3], "false");
    }
}

#[test]
fn wn_report_fills_small_cases() {
    let o = lab(&["wn-report", "--a", "2", "--b", "1", "--c", "3", "--n-max", "1", "--radius", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let area: u64 = row[4].parse().unwrap();
    assert!(area >= 1);
    assert!(row[5].parse::<u32>().is_ok());
}

#[test]
fn output_is_deterministic_and_honours_env_dir() {
    let dir = scratch_dir("env");
    let run = || {
        let o = Command::new(env!("CARGO_BIN_EXE_dehn-lab"))
            .args(["distortion", "--pair", "centre", "--c", "2", "--radius", "12", "--h-radius", "40"])
            .env("DEHN_LAB_OUT", &dir)
            .output()
            .unwrap();
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
        std::fs::read(dir.join("distortion.csv")).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    assert!(!first.is_empty());
}

#[test]
fn explicit_output_path_wins() {
    let dir = scratch_dir("out");
    let path = dir.join("nested/ball.csv");
    let o = lab(&["ball", "--family", "gc", "--c", "1", "--radius", "1", "--output", path.to_str().unwrap(), "--summary"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "radius,size\n0,1\n1,5\n");
    assert!(String::from_utf8(o.stderr).unwrap().contains("ball size"));
}
