// Deciding derived equivalence from the surface invariant.

use gentle::corpus::named;
use gentle::surface::{decide_with_witness, Verdict};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a3 = named::a3_orientations();
    for (i, p) in a3.iter().enumerate() {
        for q in &a3[i + 1..] {
            let (v, _) = decide_with_witness(p, q)?;
            assert_eq!(v, Verdict::Equivalent);
        }
    }
    println!("all A3 orientations are derived equivalent");

    let (v, witness) = decide_with_witness(&named::a2(), &named::dual_numbers())?;
    println!("A2 vs dual numbers: {v}, witness {witness:?}");
    assert_eq!(v, Verdict::NotEquivalent);
    assert!(witness.is_some());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
