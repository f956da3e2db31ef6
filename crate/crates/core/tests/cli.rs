use provcalc::cli::{main_with, Output, EXIT_BOUND, EXIT_INPUT, EXIT_NO, EXIT_OK};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Output {
    let argv = std::iter::once("provcalc").chain(args.iter().copied()).map(String::from);
    main_with(argv, None)
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("provcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn run_exports_turner_diagram() {
    let dot = tmp("turner.dot");
    let json = tmp("turner.json");
    let out = cli(&["run", &fixture("turner.proc"), "--dot", dot.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("// config max_states=10000"));
    assert!(out.stdout.contains("(quiescent)"));
    let dot = std::fs::read_to_string(dot).unwrap();
    assert_eq!(dot.matches("shape=box").count(), 3);
    assert_eq!(dot.matches("shape=ellipse").count(), 2);
    assert_eq!(dot.matches("->").count(), 5);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(json["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(json["edges"].as_array().unwrap().len(), 7);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["include", &fixture("turner_final.proc"), &fixture("turner_init.proc"), "--kind", "i"]).code, EXIT_OK);
    assert_eq!(cli(&["include", &fixture("turner_init.proc"), &fixture("turner_final.proc")]).code, EXIT_NO);
    let sp = cli(&["spcheck", &fixture("n_graph.json")]);
    assert_eq!(sp.code, EXIT_NO);
    assert!(sp.stdout.contains("N on"));
    assert_eq!(cli(&["yields", &fixture("sage_joint.proc"), &fixture("sage_indep.proc")]).code, EXIT_OK);
    let absent = cli(&["yields", &fixture("sage_init.proc"), &fixture("sage_joint.proc")]);
    assert_eq!(absent.code, EXIT_NO);
    assert!(absent.stdout.ends_with("absent\n"));
    let bound = cli(&["yields", &fixture("turner_final.proc"), &fixture("turner_init.proc"), "--max-states", "5"]);
    assert_eq!(bound.code, EXIT_BOUND);
    assert!(bound.stdout.contains("bound-exceeded"));
    let big = cli(&["denote", &fixture("turner_init.proc"), "--max-dag-vertices", "4"]);
    assert_eq!(big.code, EXIT_BOUND);
}

#[test]
fn bad_input_exits_two() {
    let bad = tmp("bad.proc");
    std::fs::write(&bad, "*[a] | (").unwrap();
    let out = cli(&["parse", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("line 1"));
    assert_eq!(cli(&["parse", "/nonexistent/file.proc"]).code, EXIT_INPUT);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_INPUT);
    let conf = tmp("bad.conf");
    std::fs::write(&conf, "max_states = 0\n").unwrap();
    assert_eq!(cli(&["--config", conf.to_str().unwrap(), "parse", &fixture("baltic.proc")]).code, EXIT_INPUT);
}

#[test]
fn config_file_and_seed_sources() {
    let out = cli(&["--config", &fixture("example.conf"), "normalize", &fixture("baltic.proc")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.lines().next().unwrap().ends_with("universe_extras=photo"));
    let argv = || ["provcalc", "generate", "--count", "3"].map(String::from);
    let a = main_with(argv(), Some("9".into()));
    let b = main_with(argv(), Some("9".into()));
    assert_eq!(a, b);
    assert!(a.stdout.contains("seed=9"));
    assert_ne!(a.stdout, main_with(argv(), Some("10".into())).stdout);
    assert_eq!(main_with(argv(), Some("x".into())).code, EXIT_INPUT);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["run", "fixtures/turner.proc"],
        vec!["step", "fixtures/baltic.proc"],
        vec!["denote", "fixtures/sage_joint.proc", "--kind", "s"],
        vec!["provenance", "fixtures/turner_final.proc"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix("fixtures/").map_or(a.to_string(), fixture))
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = cli(&refs);
        assert_eq!(first.code, EXIT_OK, "{:?}: {}", refs, first.stderr);
        assert_eq!(first, cli(&refs));
    }
}

#[test]
fn each_subcommand_answers() {
    let parse = cli(&["parse", &fixture("baltic.proc")]);
    assert!(parse.stdout.contains("ex ?x. [mill depiction ?x] ; *[baltic depiction ?x]"));
    let nf = cli(&["normalize", &fixture("sage_init.proc")]);
    assert_eq!(nf.code, EXIT_OK);
    let steps = cli(&["step", &fixture("baltic.proc")]);
    assert!(steps.stdout.contains("exists at 1"));
    let run = cli(&["run", &fixture("baltic.proc"), "--strategy", "eager"]);
    assert!(run.stdout.contains("strategy=eager"));
    assert!(run.stdout.contains("#[mill depiction photo] ; *[baltic depiction photo]"));
    let prov = cli(&["provenance", &fixture("turner_final.proc")]);
    assert!(prov.stdout.contains("\"kind\": \"artefact\""));
    let sp = cli(&["spcheck", &fixture("n_graph.json")]);
    assert!(sp.stdout.contains("not series-parallel"));
}
