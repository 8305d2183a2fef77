// Morphism spaces two ways: linear algebra over the homotopy category and
// the combinatorial basis read off the curves.

use gentle::corpus::named;
use gentle::curves::random_arc;
use gentle::homalg::Oracle;
use gentle::objects::string_complex;
use gentle::{build_disc_model, graded};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = named::a3_with_relation();
    let m = build_disc_model(&p)?;
    let o = Oracle::new(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for _ in 0..5 {
        let a = graded(&m, random_arc(&mut rng, &m, 4), 0)?;
        let b = graded(&m, random_arc(&mut rng, &m, 4), 0)?;
        let (x, y) = (string_complex(&p, &m, &a)?, string_complex(&p, &m, &b)?);
        let prof = o.hom_profile(&x, &y);
        for (d, maps) in o.alp_basis_all(&x, &y) {
            assert_eq!(maps.len(), prof.get(d));
            assert!(maps.iter().all(|f| o.is_chain_map(f) && !o.is_null_homotopic(f)));
        }
        println!("Hom profile {:?}", prof.dims);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
