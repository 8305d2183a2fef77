use gentle::selftest::run_all;

/// Runs every acceptance criterion once and prints a line per criterion.
pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let results = run_all(0x9e11e);
    for r in &results {
        println!("{}", r.line());
    }
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err("some criteria failed".into())
    }
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
