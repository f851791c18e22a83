//! The divisor of the singular point of the node xy = 0.

use gendiv::divisor::{
    bounded_combinations, effective_to_subscheme, is_effective, linear_equivalence, nondegenerate_section,
    section_to_effective, validate_divisor,
};
use gendiv::field::Field;
use gendiv::module::FPModule;
use gendiv::parse::parse_poly;
use gendiv::ring::{PolyRing, QuotientRing};

fn main() -> gendiv::Result<()> {
    let amb = PolyRing::new(Field::rationals(), &["x", "y"]);
    let node = QuotientRing::new(amb.clone(), vec![parse_poly(&amb, "x*y")?])?;
    let p = |s: &str| parse_poly(&amb, s).unwrap();
    let m = FPModule::from_ideal(&node, &[p("x"), p("y")]);

    let d = validate_divisor(&m)?;
    println!("m is a generalized divisor, generic ranks at {} minimal primes", d.generic_ranks.len());
    let eff = is_effective(&d, 2).expect("m is effective");
    println!("effective, ideal {}", eff.ideal.show());
    let z = effective_to_subscheme(&d, 2)?;
    let ass: Vec<String> = z.associated.iter().map(|q| q.show()).collect();
    println!("subscheme {} with Ass = {}", z.ideal.show(), ass.join(" "));

    // Sections of m with coordinates of degree at most 1.
    let mut seen = 0;
    for s in bounded_combinations(&node, 2, 1) {
        if !nondegenerate_section(&m, &s) {
            continue;
        }
        let e = section_to_effective(&d, &s)?;
        let equivalent = linear_equivalence(&e, &d, 1, &[]).label();
        if seen < 4 {
            let j = is_effective(&e, 2).map(|x| x.ideal.show()).unwrap_or_default();
            let coords: Vec<String> = s.iter().map(|c| node.show(c)).collect();
            println!("section [{}] -> {} ({})", coords.join(", "), j, equivalent);
        }
        seen += 1;
    }
    println!("{} nondegenerate sections in the search box", seen);
    Ok(())
}
