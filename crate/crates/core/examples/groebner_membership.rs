//! Ideal membership over Q and F_5 via reduced Gröbner bases.

use gendiv::field::Field;
use gendiv::ideal::{groebner_basis, intersect, is_member};
use gendiv::order::MonomialOrder;
use gendiv::parse::parse_poly;
use gendiv::ring::QuotientRing;

fn main() -> gendiv::Result<()> {
    for field in [Field::rationals(), Field::prime(5)?] {
        let r = QuotientRing::polynomial(field.clone(), &["x", "y", "z"]);
        let p = |s: &str| parse_poly(r.ambient(), s).unwrap();
        let i = r.ideal(vec![p("x^2 - y*z"), p("x*y - z^2")])?;
        println!("char {}: basis of {}", field.characteristic(), i.show());
        for g in groebner_basis(&i, &MonomialOrder::Grevlex) {
            println!("  {}", r.show(&g));
        }
        for probe in ["x^3 - x*y*z", "y^2*z - x*z^2", "x + y"] {
            println!("  {} in I: {}", probe, is_member(&p(probe), &i)?);
        }
        let j = r.ideal(vec![p("x"), p("z")])?;
        println!("  I cap (x, z) = {}", intersect(&i, &j)?.show());
    }
    Ok(())
}
