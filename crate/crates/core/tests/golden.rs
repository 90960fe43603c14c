use std::path::PathBuf;

use rtorsion::char_variety::Catalog;
use rtorsion::seifert::SeifertIndex;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden")
}

const CASES: [(&str, &str); 3] = [
    ("sigma_2_3_7", "0; 0; 2/1, 3/-1, 7/-1"),
    ("sigma_2_3_5_7", "0; 0; 2/1, 3/-2, 5/-2, 7/4"),
    ("sigma_5_6_7", "0; 0; 5/3, 6/-1, 7/-3"),
];

#[test]
fn catalogs_match_golden_files() {
    let bless = std::env::var_os("RTORSION_BLESS").is_some();
    for (name, text) in CASES {
        let index: SeifertIndex = text.parse().unwrap();
        let catalog = Catalog::build(&index).unwrap();
        for (ext, body) in [("json", catalog.to_json()), ("csv", catalog.to_csv())] {
            let path = golden_dir().join(format!("{name}.{ext}"));
            if bless {
                std::fs::write(&path, &body).unwrap();
                continue;
            }
            let expected = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("{}: {e}; rerun with RTORSION_BLESS=1", path.display()));
            assert_eq!(body, expected, "{}", path.display());
        }
        let json = std::fs::read_to_string(golden_dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(Catalog::from_json(&json).unwrap(), catalog);
    }
}
