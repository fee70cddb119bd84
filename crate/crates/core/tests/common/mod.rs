#![allow(dead_code)]

use fbwm_core::{Fpcs, LinguisticTerm, Problem};
use rand::Rng;

pub fn term(level: u8) -> LinguisticTerm {
    LinguisticTerm::new(level).unwrap()
}

pub fn fixture(name: &str) -> Fpcs {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    match Problem::from_json_str(&std::fs::read_to_string(path).unwrap()).unwrap() {
        Problem::Single(f) => f,
        Problem::Hierarchy(_) => panic!("{name} is a hierarchy"),
    }
}

pub fn build(bto: &[u8], otw: &[u8], best: usize, worst: usize) -> Fpcs {
    let names: Vec<String> = (1..=bto.len()).map(|i| format!("c{i}")).collect();
    Fpcs::new(
        names.clone(),
        &names[best],
        &names[worst],
        bto.iter().map(|&l| term(l)).collect(),
        otw.iter().map(|&l| term(l)).collect(),
    )
    .unwrap()
}

/// A valid system with `n` criteria and judgments drawn uniformly from the scale.
pub fn random_fpcs(rng: &mut impl Rng, n: usize) -> Fpcs {
    let best = rng.gen_range(0..n);
    let worst = (best + rng.gen_range(1..n)) % n;
    let a_bw = rng.gen_range(2..=9u8);
    let mut bto: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let mut otw: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    bto[best] = 1;
    otw[worst] = 1;
    bto[worst] = a_bw;
    otw[best] = a_bw;
    build(&bto, &otw, best, worst)
}
