// Parse quiver presentations from text and check the gentle axioms.
//
// Run with `cargo run --example validate_presentation`.

use gentle::{parse_presentation, validate_gentle};

const GOOD: &str = "\
vertices: 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
rel a b
";

// A loop with no relation gives an infinite dimensional algebra.
const BAD: &str = "\
vertices: 1
arrow a: 1 -> 1
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let good = parse_presentation(GOOD)?;
    let report = validate_gentle(&good);
    println!("A3 with a relation: gentle = {}", report.is_ok());
    assert!(report.is_ok());

    let bad = parse_presentation(BAD)?;
    let report = validate_gentle(&bad);
    for v in &report.violations {
        println!("free loop violates: {v}");
    }
    assert!(!report.is_ok());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
