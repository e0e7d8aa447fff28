use std::path::PathBuf;

use ggbij::{fixtures, MarkedPartition};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(format!("{name}.txt"))
}

// Set GGBIJ_BLESS=1 to rewrite the frozen renderings.
#[test]
fn renderings_are_frozen() {
    let bless = std::env::var_os("GGBIJ_BLESS").is_some();
    for name in fixtures::names() {
        let text = fixtures::get(name).unwrap().render_grid();
        let path = golden_path(name);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let frozen = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, frozen, "{name}");
    }
}

#[test]
fn rendering_parses_back() {
    for name in fixtures::names() {
        let mp = fixtures::get(name).unwrap();
        assert_eq!(MarkedPartition::parse_grid(&mp.render_grid()).unwrap(), mp, "{name}");
    }
}

#[test]
fn json_round_trip_is_byte_identical() {
    for name in fixtures::names() {
        let mp = fixtures::get(name).unwrap();
        let text = serde_json::to_string(&mp.to_json()).unwrap();
        let back = MarkedPartition::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, mp, "{name}");
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text, "{name}");
    }
}

#[test]
fn marking_the_flat_parts_gives_the_printed_grid() {
    for name in ["pi1", "pi2", "pi3", "m6", "omega6", "omega12"] {
        let mp = fixtures::get(name).unwrap();
        assert_eq!(MarkedPartition::mark(mp.partition()), mp, "{name}");
    }
}

#[test]
fn first_sample_grid() {
    let mp = fixtures::get("pi1").unwrap();
    assert_eq!(mp.row(3), &[38, 22, 16, 12, 6]);
    assert_eq!(mp.row(2), &[36, 32, 26, 22, 18, 14, 10, 6, 2]);
    assert_eq!(mp.row(1), &[38, 34, 30, 26, 22, 16, 12, 9, 6, 1]);
    assert_eq!(mp.weight(), 454);
}
