// Arc systems as tilting objects. The dual arcs give back the algebra; other
// systems give derived equivalent algebras.

use gentle::corpus::named;
use gentle::curves::boundary_segments;
use gentle::surface::{decide_derived_equivalence, Verdict};
use gentle::tilting::{endo_presentation, roundtrip_check, ArcSystem};
use gentle::build_disc_model;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (name, p) in named::all() {
        let rt = roundtrip_check(&p);
        println!("{name}: round trip {}", if rt.ok { "ok" } else { &rt.message });
        assert!(rt.ok);
    }

    // The two boundary segments of A2 form a tilting system too.
    let p = named::a2();
    let m = build_disc_model(&p)?;
    let arcs = ArcSystem { arcs: boundary_segments(&m).into_iter().take(2).collect() };
    match endo_presentation(&p, &m, &arcs) {
        Ok(q) => {
            print!("{}", q.emit());
            assert_eq!(decide_derived_equivalence(&p, &q)?, Verdict::Equivalent);
        }
        Err(e) => println!("not tilting: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
