#![allow(dead_code)]

use std::path::PathBuf;

use cyczeta::document::{parse_config, Document};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn data_path(name: &str) -> PathBuf {
    data_dir().join(format!("{name}.json"))
}

pub fn load(name: &str) -> Document {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    parse_config(&text).unwrap()
}

/// Every document in the corpus, by file stem.
pub fn corpus() -> Vec<(String, Document)> {
    let mut names: Vec<String> = std::fs::read_dir(data_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "json").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names.into_iter().map(|n| {
        let d = load(&n);
        (n, d)
    }).collect()
}

/// Families of blow-up examples; each has instances `_1`, `_2`, `_3`.
pub const FAMILIES: [&str; 6] = [
    "double_point_surface",
    "point_on_curve_surface",
    "triple_point_threefold",
    "point_on_double_curve_threefold",
    "curve_center_threefold",
    "point_on_surface_threefold",
];
