use patcalc::oracle::*;
fn main() {
    let cfg = UniverseConfig::default();
    for s in 1..=6 {
        let c = enumerate_terms(&cfg.clone().with_max_term_size(s)).count();
        println!("terms up to size {s}: {c}");
    }
    println!("patterns: {}", enumerate_patterns(&cfg).len());
    println!("substs(img<=2): {}", enumerate_substitutions(&cfg, 2).len());
}
