//! State files, survey CSV, manifests and SVG output, including replay of the
//! checked-in fuzz seeds.

mod common;

use std::fs;
use std::path::PathBuf;

use common::{dims, random_state};
use entangle_atlas::plot::{emit_plots, FAMILIES};
use entangle_atlas::report::{csv_string, parse_csv, records_from_rows, RunManifest};
use entangle_atlas::state::werner;
use entangle_atlas::state_file::{parse_raw, parse_state, write_state};
use entangle_atlas::survey::run_range;
use entangle_atlas::{evaluate_all, Error, SurveyRecord, Tolerances};

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&path).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

fn small_records() -> Vec<SurveyRecord> {
    let tol = Tolerances::default();
    vec![
        run_range(dims(2, 2), 4, 0..200, None, &tol).unwrap(),
        run_range(dims(2, 3), 4, 0..200, None, &tol).unwrap(),
        run_range(dims(3, 2), 4, 0..200, None, &tol).unwrap(),
    ]
}

#[test]
fn state_files_round_trip_exactly() {
    for seed in 0..20 {
        let rho = random_state(dims(2, 3), seed);
        let back = parse_state(&write_state(&rho)).unwrap();
        assert_eq!(back.dims(), rho.dims());
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }
}

#[test]
fn state_file_errors_name_the_problem() {
    let trace = parse_state("2 2\n0 0 0.225 0\n1 1 0.225 0\n2 2 0.225 0\n3 3 0.225 0\n").unwrap_err();
    assert!(matches!(trace, Error::InvalidTrace { .. }));
    assert!(trace.to_string().contains("trace"));
    let herm = parse_state("2 2\n0 0 0.5 0\n1 1 0.5 0\n0 1 0.3 0\n").unwrap_err();
    assert!(matches!(herm, Error::NonHermitianInput { .. }));
    let negative = parse_state("2 2\n0 0 1.5 0\n1 1 -0.5 0\n").unwrap_err();
    assert!(matches!(negative, Error::NotPositive { .. }));
    match parse_raw("2 2\n0 0 1 0\n\n9 0 1 0\n").unwrap_err() {
        Error::Parse { line, .. } => assert_eq!(line, 4),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn state_file_seeds_behave_as_named() {
    for (name, bytes) in corpus("parse_state_file") {
        let text = String::from_utf8(bytes).unwrap();
        let parsed = parse_state(&text);
        let valid = [
            "werner_p05.txt",
            "maximally_mixed_2x3.txt",
            "complex_offdiag.txt",
            "single_qudit.txt",
        ];
        assert_eq!(parsed.is_ok(), valid.contains(&name.as_str()), "{name}: {parsed:?}");
        if let Ok(rho) = parsed {
            assert!(parse_raw(&text).is_ok());
            assert_eq!(parse_state(&write_state(&rho)).unwrap().dims(), rho.dims());
            evaluate_all(&rho, Some(2.0)).unwrap();
        }
    }
    let rho = parse_state(
        &String::from_utf8(
            corpus("parse_state_file")
                .into_iter()
                .find(|(n, _)| n == "werner_p05.txt")
                .unwrap()
                .1,
        )
        .unwrap(),
    )
    .unwrap();
    assert!(rho.matrix().max_abs_diff(werner(0.5).matrix()) < 1e-15);
}

#[test]
fn csv_seeds_reparse_after_emission() {
    for (name, bytes) in corpus("parse_survey_csv") {
        let Ok(rows) = parse_csv(bytes.as_slice()) else {
            assert_eq!(name, "bad_total.csv");
            continue;
        };
        let records = records_from_rows(&rows).unwrap();
        let again = parse_csv(csv_string(&records).unwrap().as_bytes()).unwrap();
        assert_eq!(again, rows, "{name}");
    }
}

#[test]
fn manifest_seeds_round_trip() {
    for (name, bytes) in corpus("parse_manifest") {
        let text = String::from_utf8(bytes).unwrap();
        match RunManifest::from_json(&text) {
            Ok(m) => assert_eq!(RunManifest::from_json(&m.to_json().unwrap()).unwrap(), m),
            Err(_) => assert_eq!(name, "truncated.json"),
        }
    }
}

#[test]
fn emitted_svgs_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_plots(&small_records(), dir.path(), "t_").unwrap();
    assert_eq!(paths.len(), FAMILIES.len());
    for path in paths {
        let text = fs::read_to_string(&path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let series = doc
            .descendants()
            .filter(|n| n.attribute("class") == Some("series"))
            .count();
        assert!(series >= 2, "{}", path.display());
    }
}

#[test]
fn single_dimension_gives_single_point_charts() {
    let dir = tempfile::tempdir().unwrap();
    let rec = run_range(dims(2, 2), 4, 0..50, None, &Tolerances::default()).unwrap();
    for path in emit_plots(&[rec], dir.path(), "").unwrap() {
        let text = fs::read_to_string(&path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert!(doc.descendants().any(|n| n.has_tag_name("circle")));
        assert!(!doc.descendants().any(|n| n.has_tag_name("polyline")));
    }
}

#[test]
fn empty_records_write_no_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plots");
    assert!(matches!(emit_plots(&[], &out, "x_"), Err(Error::EmptyRecords)));
    assert!(!out.exists());
}
