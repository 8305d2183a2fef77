// The Auslander-Reiten translate as a rotation of endpoints, its
// fractional Calabi-Yau behaviour on boundary segments, and the
// almost split triangle check.

use gentle::corpus::named;
use gentle::curves::{boundary_segments, tau_translate, word_to_text};
use gentle::homalg::Oracle;
use gentle::objects::string_complex;
use gentle::surface::ribbon_surface;
use gentle::{build_disc_model, graded};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = named::a3_linear();
    let m = build_disc_model(&p)?;
    let o = Oracle::new(&p);
    let s = ribbon_surface(&p)?;
    let c = &s.boundary[0];
    println!("one boundary component: {} marked points, winding {}", c.marked_count, c.winding);

    for w in boundary_segments(&m) {
        let delta = graded(&m, w, 0)?;
        let mut t = delta.clone();
        for _ in 0..c.marked_count {
            t = tau_translate(&m, &t)?;
        }
        // The word comes back; the degrees move by the winding number.
        assert_eq!(t.word.canonical(&m), delta.word.canonical(&m));
        let back = string_complex(&p, &m, &t)?;
        let expect = string_complex(&p, &m, &delta)?.shift(-c.winding);
        assert!(o.is_isomorphic(&back, &expect));

        let report = o.ar_check(&m, &delta)?;
        println!("{}: AR check ok = {}", word_to_text(&p, &m, &delta.word, None), report.ok);
        assert!(report.ok, "{:?}", report.failures);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
