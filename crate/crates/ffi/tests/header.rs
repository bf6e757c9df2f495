use std::fs;
use std::path::Path;

const EXPORTED: &[&str] = &[
    "radmax_last_error",
    "radmax_version",
    "radmax_set_parse",
    "radmax_set_free",
    "radmax_set_interval_count",
    "radmax_set_covering_number",
    "radmax_set_neighborhood_measure",
    "radmax_profile_parse",
    "radmax_profile_free",
    "radmax_spherical_mean",
    "radmax_region_radial",
    "radmax_region_polygon",
    "radmax_region_free",
    "radmax_region_vertex_count",
    "radmax_region_vertex",
    "radmax_region_membership",
];

fn header() -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/radmax.h")).expect("generated header")
}

#[test]
fn every_export_is_declared() {
    let h = header();
    for name in EXPORTED {
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn handles_are_opaque() {
    let h = header();
    for t in ["RadmaxSet", "RadmaxProfile", "RadmaxRegion"] {
        assert!(h.contains(&format!("typedef struct {t} {t};")), "{t} is not opaque");
    }
    assert!(h.contains("RADMAX_STATUS_OK = 0"));
    assert!(h.contains("#define RADMAX_FLAG_QUASI_ASSOUAD_REGULAR 4"));
}
