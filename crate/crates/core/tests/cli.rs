mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;

use rootpoly::cli::{
    self, cmd_flowdual, cmd_poset, cmd_root, cmd_toric, parse_document, PosetFlags, Report, ToricFlags,
};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn doc<T: serde::de::DeserializeOwned>(name: &str) -> T {
    parse_document(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("rootpoly").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn root_table_matches_reference_rows() {
    let r = cmd_root(&doc("nine_arrows.json")).unwrap();
    assert_eq!(r.field("summary", "facets"), Some("18"));
    assert_eq!(r.field("summary", "reflexive"), Some("true"));
    let t = r.section("facets").unwrap().table.as_ref().unwrap();
    assert_eq!(t.header[..7], ["1", "v1", "v2", "v3", "v4", "v5", "v6"]);
    let got: BTreeSet<Vec<String>> = t.rows.iter().map(|row| row[..7].to_vec()).collect();
    let want: BTreeSet<Vec<String>> =
        common::NINE_ARROW_FACETS.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
    assert_eq!(got, want);
}

#[test]
fn small_root_polytopes() {
    let q = cmd_root(&doc("quadrilateral.json")).unwrap();
    assert_eq!(q.field("summary", "f-vector"), Some("(4, 4)"));
    let s = cmd_root(&doc("segment.json")).unwrap();
    assert_eq!(s.field("summary", "facets"), Some("2"));
    assert_eq!(s.field("summary", "terminal"), Some("true"));
}

#[test]
fn unstarred_input_is_starred_and_logged() {
    let d: cli::QuiverDoc =
        parse_document(r#"{"normal_vertices": ["a", "b"], "arrows": [["a", "b"], ["b", "a"]]}"#).unwrap();
    let r = cmd_root(&d).unwrap();
    assert_eq!(r.field("summary", "dimension"), Some("1"));
    let norm = r.section("normalization").unwrap();
    assert!(norm.lines[0].contains("starred a"));
}

#[test]
fn flow_duality_verdict() {
    let r = cmd_flowdual(&doc("two_faces.json")).unwrap();
    assert_eq!(r.field("verdict", "duality"), Some("true"));
    assert_eq!(r.field("verdict", "flow polytope reflexive"), Some("true"));
    assert_eq!(r.section("relations").unwrap().lines.len(), 3);
}

#[test]
fn coordinates_and_rotation_agree() {
    let d: cli::PlaneQuiverDoc = parse_document(
        r#"{"normal_vertices": ["A", "B", "C"], "arrows": [["A", "B"], ["B", "C"], ["A", "C"]],
            "coordinates": {"A": [0, 0], "B": [2, 0], "C": [1, 2]}}"#,
    )
    .unwrap();
    let r = cmd_flowdual(&d).unwrap();
    assert_eq!(r.field("verdict", "duality"), Some("true"));
    assert_eq!(r.field("verdict", "flow dimension"), Some("1"));
}

#[test]
fn toric_summary_and_fano_index() {
    let flags = ToricFlags { fano_index: true, ..Default::default() };
    let r = cmd_toric(&doc("bidirected_path.json"), &flags).unwrap();
    assert_eq!(r.field("fano", "fano index"), Some("2"));
    assert_eq!(r.field("summary", "singular cones"), Some("3"));
    assert_eq!(r.field("summary", "picard rank"), Some("1"));
    assert_eq!(r.section("cartier conditions").unwrap().lines.len(), 3);
}

#[test]
fn superpotential_report() {
    let (code, out, _) = run(&["toric", "--superpotential", "r=1,1", data("nine_arrows.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = Report::from_text(&out).unwrap();
    let s = r.section("superpotential").unwrap();
    assert_eq!(
        r.field("superpotential", "S"),
        Some("x_1 + x_2/x_1 + x_3/x_2 + x_4/x_3 + q_1/x_4 + x_5/x_1 + x_6/x_2 + x_6/x_5 + q_2/x_6")
    );
    assert_eq!(s.lines.len(), 9);
    assert_eq!(s.lines[4], "1 - X_4 >= 0");
}

#[test]
fn smooth_input_needs_no_resolution() {
    let flags = ToricFlags { resolve: true, ..Default::default() };
    let r = cmd_toric(&doc("quadrilateral.json"), &flags).unwrap();
    assert_eq!(r.field("resolution", "status"), Some("already smooth, 0 subdivisions"));
}

#[test]
fn poset_reports() {
    let flags = PosetFlags { marked: true, fan_compare: true, ..Default::default() };
    let r = cmd_poset(&doc("marked_chains.json"), flags).unwrap();
    assert_eq!(r.field("marked order polytope", "interior point"), Some("(1, 2, 3, 4, 2, 3)"));
    assert_eq!(r.field("marked order polytope", "dual is root polytope"), Some("true"));
    assert_eq!(r.section("shifted marked order polytope").unwrap().lines.len(), 9);

    let flags = PosetFlags { picard: true, canonical: true, ..Default::default() };
    let r = cmd_poset(&doc("merged_tops.json"), flags).unwrap();
    assert_eq!(r.field("picard", "picard rank"), Some("3"));
    assert_eq!(r.field("canonical extension", "maximal elements"), Some("3"));
    assert!(r.field("picard", "warning").is_none());
}

#[test]
fn fan_comparison_witness() {
    let flags = PosetFlags { fan_compare: true, ..Default::default() };
    let r = cmd_poset(&doc("unranked.json"), flags).unwrap();
    assert_eq!(r.field("fan comparison", "refines"), Some("false"));
    assert!(r.field("fan comparison", "witness cone").is_some());
}

#[test]
fn text_and_json_round_trip() {
    for r in [
        cmd_root(&doc("nine_arrows.json")).unwrap(),
        cmd_flowdual(&doc("two_faces.json")).unwrap(),
        cmd_poset(&doc("merged_tops.json"), PosetFlags { picard: true, canonical: true, ..Default::default() })
            .unwrap(),
    ] {
        assert_eq!(Report::from_text(&r.to_text()).unwrap(), r);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}

#[test]
fn machine_format_is_json() {
    let (code, out, _) = run(&["root", "--format", "machine", data("segment.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = Report::from_json(&out).unwrap();
    assert_eq!(r.field("summary", "facets"), Some("2"));
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("rootpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };

    let typo = write("typo.json", r#"{"normal_vertices": ["v"], "starred": ["s"], "arrows": []}"#);
    let (code, _, err) = run(&["root", &typo]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1") && err.contains("starred"), "{err}");

    let one_way =
        write("one_way.json", r#"{"normal_vertices": ["v"], "starred_vertices": ["s"], "arrows": [["s", "v"]]}"#);
    let (code, _, err) = run(&["root", &one_way]);
    assert_eq!(code, 3);
    assert!(err.contains('v') && err.contains('s'), "{err}");

    let (code, _, _) = run(&["poset", "--marked", data("unranked.json").to_str().unwrap()]);
    assert_eq!(code, 3);

    let (code, _, _) = run(&["toric", "--superpotential", "r=1", data("nine_arrows.json").to_str().unwrap()]);
    assert_eq!(code, 2);

    let (code, _, _) = run(&["root", "/nonexistent/input.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
