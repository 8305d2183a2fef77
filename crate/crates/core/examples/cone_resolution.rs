// Two arcs meeting at a marked point: the cone of the morphism they define
// is the complex of the arc obtained by smoothing the meeting point.

use gentle::corpus::named;
use gentle::curves::word_to_text;
use gentle::homalg::{mapping_cone, Oracle};
use gentle::objects::string_complex;
use gentle::{build_disc_model, graded, CurveWord};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = named::a3_linear();
    let m = build_disc_model(&p)?;
    let o = Oracle::new(&p);
    let arcs: Vec<_> = (0..3)
        .map(|v| graded(&m, CurveWord::dual_arc(&m, v), 0))
        .collect::<Result<_, _>>()?;

    let mut found = 0;
    for (a, b) in arcs.iter().zip(&arcs[1..]) {
        for disc in [a.word.start_disc(), a.word.end_disc(&m)] {
            let Ok((f, resolved)) = o.intersection_morphism(&m, a, b, disc) else {
                continue;
            };
            let cone = mapping_cone(&f)?;
            let z = string_complex(&p, &m, &resolved)?;
            assert!(o.is_isomorphic(&cone, &z));
            println!("resolved at D{disc}: {}", word_to_text(&p, &m, &resolved.word, None));
            found += 1;
        }
    }
    assert!(found > 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
