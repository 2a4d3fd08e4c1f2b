use signed02_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("signed02").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("signed02-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn help_and_usage_errors() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("search-weighing"));
    let (code, _, err) = call(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("frobnicate"));
    let (code, _, err) = call(&["check"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = call(&["check", "--catalog", "R9.9"]);
    assert_eq!(code, 2);
}

#[test]
fn check_reports_certificates() {
    let (code, out, _) = call(&["check", "--catalog", "R4.2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("TwoSym λ²=4 m=8"), "{out}");
    assert!(out.contains("zero-two=true"));
    let (code, out, _) = call(&["check", "--expr", "cycle(5)"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("Other"));
    let (code, out, _) = call(&["check", "--expr", "hypercube(3)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("FourSym"), "{out}");
}

#[test]
fn search_writes_solutions_and_replayable_log() {
    let log = tmp("clebsch.log");
    let sols = tmp("clebsch.sg1");
    let (code, out, err) = call(&[
        "search",
        "--catalog",
        "Clebsch",
        "--log",
        log.to_str().unwrap(),
        "--solutions",
        sols.to_str().unwrap(),
        "--expect-solution",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("classes 1 "), "{out}");
    assert!(err.contains("depth 0 candidates"));
    let text = std::fs::read_to_string(&log).unwrap();
    let parsed = signed02::ProofLog::parse(&text).unwrap();
    let clebsch = signed02::catalog::catalog("Clebsch").unwrap().underlying();
    parsed.replay(&clebsch).unwrap();
    let g = signed02::io::parse_signed(&std::fs::read_to_string(&sols).unwrap()).unwrap();
    assert!(signed02::certify_two_sym(&g).is_ok());

    let (code, out, _) = call(&["search", "--catalog", "FQ5", "--expect-solution", "--serial"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("classes 0 ") && out.contains("exhausted true"), "{out}");
}

#[test]
fn weighing_search_and_conversion() {
    let file = tmp("w74.txt");
    let (code, out, _) =
        call(&["search-weighing", "--n", "7", "--r", "4", "--proper", "--out", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("classes 1 proper 1"), "{out}");
    let (code, sg1, _) = call(&["convert", file.to_str().unwrap(), "--from", "weighing", "--to", "sg1"]);
    assert_eq!(code, 0);
    let g = signed02::io::parse_signed(&sg1).unwrap();
    assert_eq!(g.n(), 14);
    assert_eq!(signed02::certify_two_sym(&g).unwrap().lambda_sq, 4);
    let sg1_file = tmp("w74.sg1");
    std::fs::write(&sg1_file, &sg1).unwrap();
    let (code, back, _) = call(&["convert", sg1_file.to_str().unwrap(), "--from", "sg1", "--to", "weighing"]);
    assert_eq!(code, 0);
    let w0 = signed02::io::parse_weighing(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let w1 = signed02::io::parse_weighing(&back).unwrap();
    assert!(signed02::weighing::equivalent(&w0, &w1).unwrap().is_some());

    let (code, _, _) = call(&["search-weighing", "--n", "5", "--r", "3", "--expect-solution"]);
    assert_eq!(code, 1);
}

#[test]
fn construct_and_graph6_round_trip() {
    let (code, g6, _) = call(&["construct", "hypercube(4)", "--format", "graph6"]);
    assert_eq!(code, 0);
    let file = tmp("q4.g6");
    std::fs::write(&file, &g6).unwrap();
    let (code, out, _) = call(&["search", "--graph6-file", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("classes 1 "));
    let (code, _, err) = call(&["construct", "ltimes-k2(R5.4"]);
    assert_eq!(code, 2);
    assert!(err.contains("expected"));
}

#[test]
fn extend_round_trips() {
    let (code, out, err) = call(&["extend", "--catalog", "R3.1", "--delete", "0"]);
    assert_eq!(code, 0, "{err}");
    let h = signed02::io::parse_signed(&out).unwrap();
    let g = signed02::catalog::catalog("R3.1").unwrap().into_signed();
    assert!(signed02::switching_isomorphic(&g, &h).unwrap().is_some());

    let (code, out, err) = call(&["extend", "--catalog", "R4.2", "--delete", "0,1"]);
    assert_eq!(code, 0, "{err}");
    let h = signed02::io::parse_signed(&out).unwrap();
    let g = signed02::catalog::catalog("R4.2").unwrap().into_signed();
    assert!(signed02::switching_isomorphic(&g, &h).unwrap().is_some());

    let (code, _, err) = call(&["extend", "--expr", "complete-bipartite(1,3)", "--mode", "zero-pair"]);
    assert_eq!(code, 1);
    assert!(err.contains("(d)"), "{err}");
}

#[test]
fn filter_exit_codes() {
    let (code, out, _) = call(&["filter", "--n", "36", "--r", "6", "--bipartite"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL sum-of-two-squares"), "{out}");
    let (code, out, _) = call(&["filter", "--n", "16", "--r", "4..5"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 2);
    let (code, _, _) = call(&["filter", "--n", "x", "--r", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn catalog_listing() {
    let (code, out, _) = call(&["catalog"]);
    assert_eq!(code, 0);
    assert!(out.contains("R6.5") && out.contains("needs weighing data"));
    let (code, out, _) = call(&["catalog", "R2.1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("sg1 4"));
    let (code, _, err) = call(&["catalog", "R6.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("R5.2"), "{err}");
}
