// The marked surface of a gentle algebra: discs, boundary components and
// the derived invariant.

use gentle::corpus::named;
use gentle::surface::{ribbon_surface, trace_boundary};
use gentle::{build_disc_model, derived_invariant};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (name, p) in [
        ("kronecker", named::kronecker()),
        ("a3 linear", named::a3_linear()),
        ("dual numbers", named::dual_numbers()),
    ] {
        let m = build_disc_model(&p)?;
        let s = ribbon_surface(&p)?;
        println!(
            "{name}: {} discs, chi {}, genus {}, {} boundary components",
            m.discs.len(),
            s.euler_characteristic,
            s.genus,
            s.boundary.len()
        );
        for walk in trace_boundary(&m)? {
            println!("  boundary through discs {:?}", walk.marked_discs());
        }
        let inv = derived_invariant(&p)?;
        println!("  invariant {:?}", inv.components);
        assert_eq!(s.euler_characteristic, 2 - 2 * s.genus as i64 - s.boundary.len() as i64);
    }
    println!("{}", build_disc_model(&named::a2())?.to_dot(&named::a2()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
