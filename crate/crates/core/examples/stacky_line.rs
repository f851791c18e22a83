//! The stacky line [A^1 / Z_2] with u -> -u: equivariant structures on the
//! ideal (u), invariant sections and the stacky origin.

use gendiv::field::Field;
use gendiv::module::{FPModule, Matrix};
use gendiv::parse::parse_poly;
use gendiv::ring::QuotientRing;
use gendiv::stack::{
    build_group_groupoid, check_cocycle, invariant_sections, stack_effective_to_substack, EquivariantModule,
    StackDivisor,
};

fn main() -> gendiv::Result<()> {
    let r = QuotientRing::polynomial(Field::rationals(), &["u"]);
    let p = |s: &str| parse_poly(r.ambient(), s).unwrap();
    let table = vec![vec!["1".to_string(), "-1".to_string()], vec!["-1".to_string(), "1".to_string()]];
    let g = build_group_groupoid(&r, &table, vec![vec![p("u")], vec![p("-u")]])?;
    let m = FPModule::from_ideal(&r, &[p("u")]);

    for c in [1, -1, 2] {
        let phis = vec![Matrix::identity(&r, 1), Matrix::from_cols(1, vec![vec![r.constant(c)]])];
        let e = EquivariantModule::new(&g, &m, phis)?;
        match check_cocycle(&e) {
            Ok(_) => {
                let inv = invariant_sections(&e, 3);
                let vals: Vec<String> = inv.values.unwrap_or_default().iter().map(|v| r.show(&v[0])).collect();
                println!("phi = {}: cocycle ok, invariant values up to degree 3: {}", c, vals.join(", "));
            }
            Err(err) => println!("phi = {}: {}", c, err),
        }
    }

    let j = r.ideal(vec![p("u")])?;
    let origin = StackDivisor::from_invariant_ideal(&g, &j)?;
    let sub = stack_effective_to_substack(&origin, 2)?;
    println!("stacky origin: ideal {}, {} associated prime(s)", sub.subscheme.ideal.show(), sub.subscheme.associated.len());
    Ok(())
}
