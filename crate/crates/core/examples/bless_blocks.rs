//! Regenerates assets/blocks.txt from the glider seeds.
use forge::cts2r110::{derive_library, validate_block_library};

fn main() {
    let lib = derive_library().expect("derivation");
    let issues = validate_block_library(&lib);
    for i in &issues {
        eprintln!("{i}");
    }
    assert!(issues.is_empty(), "{} issues", issues.len());
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/assets/blocks.txt");
    std::fs::write(path, lib.write()).expect("write asset");
    for b in lib.blocks.values() {
        eprintln!("{} width {} right phase {}", b.id, b.width(0), b.right_phase[0]);
    }
}
