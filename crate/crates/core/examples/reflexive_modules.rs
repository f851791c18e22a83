//! Duals, biduality and reflexivity of small modules.

use gendiv::field::Field;
use gendiv::module::{biduality_map, dual, ext, FPModule, IsoVerdict, Matrix};
use gendiv::parse::parse_poly;
use gendiv::ring::{PolyRing, QuotientRing};

fn ring(names: &[&str], rels: &[&str]) -> QuotientRing {
    let amb = PolyRing::new(Field::rationals(), names);
    let rels = rels.iter().map(|r| parse_poly(&amb, r).unwrap()).collect();
    QuotientRing::new(amb, rels).unwrap()
}

fn main() {
    let plane = ring(&["x", "y"], &[]);
    let node = ring(&["x", "y"], &["x*y"]);
    for (name, r) in [("Q[x,y]", &plane), ("Q[x,y]/(xy)", &node)] {
        let p = |s: &str| parse_poly(r.ambient(), s).unwrap();
        let m = FPModule::from_ideal(r, &[p("x"), p("y")]);
        let b = biduality_map(&m);
        println!("{}: m = {}", name, m.show());
        println!("  dual has {} generators, bidual {}", b.dual.module.num_gens(), b.bidual.module.num_gens());
        match b.map.iso_verdict() {
            IsoVerdict::Iso => println!("  m is reflexive"),
            IsoVerdict::NotSurjective(i) => {
                println!("  not reflexive: bidual generator {} is missed, cokernel {}", i, b.map.cokernel().show())
            }
            v => println!("  not reflexive: {:?}", v),
        }
    }
    let x = parse_poly(plane.ambient(), "x").unwrap();
    let torsion = FPModule::coker(&plane, Matrix::from_cols(1, vec![vec![x]])).unwrap();
    println!("Q[x,y]/(x): dual is zero: {}", dual(&torsion).module.is_zero());
    println!("Ext^1(Q[x,y]/(x), Q[x,y]) = {}", ext(1, &torsion, &FPModule::free(&plane, 1)).show());
}
