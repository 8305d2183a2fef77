// Seeded random gentle algebras and a sweep of the invariant over them.

use gentle::corpus::{gen_corpus, CorpusSpec};
use gentle::surface::ribbon_surface;
use gentle::validate_gentle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = CorpusSpec { count: 12, ..CorpusSpec::default() };
    let corpus = gen_corpus(&spec);
    assert_eq!(corpus, gen_corpus(&spec));
    for p in &corpus {
        assert!(validate_gentle(p).is_ok());
        let s = ribbon_surface(p)?;
        println!(
            "{} vertices, {} arrows: genus {} components {:?}",
            p.quiver.vertices.len(),
            p.quiver.arrows.len(),
            s.genus,
            s.invariant().components
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
