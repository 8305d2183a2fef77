// Graded curves on the surface and the complexes of projectives they give.
//
// Words print in the same text format `parse_word` reads back, so they can
// be passed straight to the command line tool.

use gentle::corpus::named;
use gentle::curves::{boundary_loops, boundary_segments, classify_word, parse_word, word_to_text};
use gentle::objects::{check_dsquared, curve_complex, string_complex};
use gentle::{build_disc_model, graded, CurveWord};
use num_rational::Rational64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = named::kronecker();
    let m = build_disc_model(&p)?;

    for v in 0..p.quiver.vertices.len() {
        let arc = graded(&m, CurveWord::dual_arc(&m, v), 0)?;
        let x = string_complex(&p, &m, &arc)?;
        println!("dual arc of {}: {}", p.quiver.vertices[v], word_to_text(&p, &m, &arc.word, None));
        print!("{}", x.to_text(&p));
    }

    for w in boundary_segments(&m) {
        let text = word_to_text(&p, &m, &w, None);
        let (back, _) = parse_word(&p, &m, &text)?;
        assert_eq!(back, w);
        println!("segment {text}: {}", classify_word(&p, &m, &w));
    }

    // The loop around a boundary component is a band; every nonzero
    // parameter gives a complex.
    let (_, band) = boundary_loops(&m).into_iter().next().ok_or("no band")?;
    let lambda = Rational64::new(2, 3);
    let b = graded(&m, band, 0)?;
    let x = curve_complex(&p, &m, &b, lambda)?;
    check_dsquared(&p, &x).map_err(|w| format!("{w:?}"))?;
    println!("{}", word_to_text(&p, &m, &b.word, Some(&lambda)));
    print!("{}", x.to_text(&p));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
