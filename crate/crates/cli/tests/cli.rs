use std::path::PathBuf;
use std::process::{Command, Output};

fn apsieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apsieve"))
        .args(args)
        .env_remove("APSIEVE_FIXTURES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("apsieve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn pipeline_exit_codes() {
    let o = apsieve(&["pipeline"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""solutions":[[-12,7],[-4,3]]"#));

    let o = apsieve(&["pipeline", "--primes"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains(r#""solutions":[[-12,7],[-4,3]]"#));

    let empty = scratch("empty.jsonl", "");
    let o = apsieve(&["--fixtures", empty.to_str().unwrap(), "pipeline"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_streams_json_lines() {
    let o = apsieve(&["search", "--k", "5", "--nmin", "-20", "--nmax", "20", "--dmin", "2", "--dmax", "10", "--pb", "eq:5"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[2].to_string(), r#"{"b":30,"d":7,"k":5,"n":-12,"tuple":[-3,-5,2,1,1],"y":24}"#);
}

#[test]
fn bad_input_exits_3() {
    let o = apsieve(&["search", "--k", "5", "--nmin", "3", "--nmax", "1", "--dmin", "1", "--dmax", "2", "--pb", "one"]);
    assert_eq!(o.status.code(), Some(3));
    let o = apsieve(&["search", "--k", "5", "--nmin", "1", "--nmax", "3", "--dmin", "1", "--dmax", "2", "--pb", "lt:3"]);
    assert_ne!(o.status.code(), Some(0));
    let o = apsieve(&["sieve", "--tuple=1,2,4,1,1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_claims() {
    let o = apsieve(&["verify", "--n=-12", "--d", "7", "--k", "5", "--b", "30", "--y", "24"]);
    assert_eq!(o.status.code(), Some(0));
    let o = apsieve(&["verify", "--n", "2", "--d", "1", "--k", "5", "--b", "7", "--y", "12"]);
    assert_eq!(o.status.code(), Some(1));
    let o = apsieve(&["verify", "--theorem1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no solutions with d>1"));
}

#[test]
fn sieve_output_replays() {
    let o = apsieve(&["sieve", "--tuple=-2,-5,3,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let o2 = apsieve(&["sieve", "--tuple=6,5,1,3,2"]);
    let file = scratch("certs.jsonl", &(stdout(&o) + &stdout(&o2)));
    let r = apsieve(&["sieve", "--replay", file.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let replayed = stdout(&r);
    assert_eq!(replayed.lines().count(), 11);
    assert!(replayed.lines().all(|l| l.contains(r#""replayed":true"#)));

    // a forged elimination does not replay
    let forged = scratch(
        "forged.jsonl",
        r#"{"tuple":{"a":[-3,-5,2,1,1],"k":5},"p":3,"outcome":"eliminated","witness":null}"#,
    );
    let r = apsieve(&["sieve", "--replay", forged.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn curve_commands() {
    let o = apsieve(&["curves", "jinv-check"]);
    assert_eq!(o.status.code(), Some(0));
    let o = apsieve(&["curves", "delta", "--family", "k7-a"]);
    assert_eq!(o.status.code(), Some(0));
    let o = apsieve(&["curves", "system", "--tuple", "3,1,5,6,7,2,1", "--pivots", "0,3"]);
    assert!(stdout(&o).contains("-3x0^2+12x3^2=x6^2"));
    let o = apsieve(&["oracle", "check"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn reduce_long_tuple() {
    let o = apsieve(&[
        "reduce",
        "--tuple",
        "6,7,2,1,10,11,3,13,14,15,1,17,2,19,5,21,22,23,6,1,26,3,7",
        "--known",
        "3,1,5,6,7,2,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""method":"halving""#));
}

#[test]
fn tuple_generation_count() {
    let o = apsieve(&["tuples", "--k", "5", "--pmax", "5", "--force", "1:5", "--force", "2:5", "--any"]);
    assert_eq!(stdout(&o).lines().count(), 880);
}
