// Twisting along a band: the Dehn twist on the surface against the
// spherical twist functor of the band object.

use gentle::corpus::named;
use gentle::curves::{boundary_loops, dehn_twist, word_to_text};
use gentle::homalg::{stalk_probes, Oracle};
use gentle::objects::{curve_complex, string_complex};
use gentle::{build_disc_model, graded, CurveWord};
use num_rational::Rational64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = named::kronecker();
    let m = build_disc_model(&p)?;
    let o = Oracle::new(&p);
    let (_, band) = boundary_loops(&m).into_iter().next().ok_or("no band")?;
    let b = curve_complex(&p, &m, &graded(&m, band.clone(), 0)?, Rational64::from_integer(1))?;
    let mut probes = stalk_probes(&p, 2);
    probes.push(b.clone());
    println!("band is {:?}-spherical", o.spherical_degree(&b, &probes));

    for v in 0..2 {
        let y = graded(&m, CurveWord::dual_arc(&m, v), 0)?;
        let algebraic = o.spherical_twist(&b, &string_complex(&p, &m, &y)?, &probes)?;
        let twisted = dehn_twist(&m, &y, &band)?;
        let geometric = string_complex(&p, &m, &twisted)?;
        assert!(o.is_isomorphic(&algebraic, &geometric));
        println!(
            "T(P_{}) = {} {:?}",
            p.quiver.vertices[v],
            word_to_text(&p, &m, &twisted.word, None),
            twisted.grading.degrees
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
