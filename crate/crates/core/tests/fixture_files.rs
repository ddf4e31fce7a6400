use std::path::Path;

use uecsm_core::fixtures;
use uecsm_core::report::{analyze, AnalysisOptions};
use uecsm_core::MatrixDocument;

fn fixture_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn shipped_fixtures_match_builders_and_round_trip() {
    for (name, m, expected) in fixtures::named() {
        let path = fixture_dir().join("reference").join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = MatrixDocument::parse(&text).unwrap();
        assert_eq!(doc.matrix, m, "{name}");
        assert_eq!(doc.to_canonical(), text, "{name} is not canonical");
        let report = analyze(&doc.matrix, doc.label.clone(), &AnalysisOptions::default()).unwrap();
        assert_eq!(report.uecsm, Some(expected), "{name}");
    }
}

#[test]
fn every_shipped_file_is_canonical() {
    for sub in ["reference", "symmetric", "constructed"] {
        for entry in std::fs::read_dir(fixture_dir().join(sub)).unwrap() {
            let path = entry.unwrap().path();
            let text = std::fs::read_to_string(&path).unwrap();
            let doc = MatrixDocument::parse(&text).unwrap();
            assert_eq!(doc.to_canonical(), text, "{}", path.display());
        }
    }
}
