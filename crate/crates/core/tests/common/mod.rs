#![allow(dead_code)]

use std::path::PathBuf;

use chaoswave::{pgm, GrayImage};

pub const CORPUS: [&str; 7] = ["camera", "astronaut", "chelsea", "coffee", "moon", "coins", "rocket"];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub fn load(name: &str) -> GrayImage {
    pgm::read_pgm(data_dir().join(format!("{name}.pgm"))).expect("corpus image")
}

pub fn corpus() -> Vec<(&'static str, GrayImage)> {
    CORPUS.iter().map(|&n| (n, load(n))).collect()
}

/// The 4×4 image used by the reference script.
pub fn tiny_image() -> GrayImage {
    GrayImage::new(
        4,
        4,
        vec![52, 55, 61, 66, 70, 61, 64, 73, 63, 59, 55, 90, 67, 61, 68, 104],
    )
    .unwrap()
}
