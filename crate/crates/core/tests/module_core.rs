use gendiv::divisor::find_isomorphism;
use gendiv::field::Field;
use gendiv::module::{
    base_change, biduality_map, dual, ext, hom_module, is_reflexive, localize_is_free_rank_one, syzygy_module, FPModule,
    IsoVerdict, Matrix, ModuleMap,
};
use gendiv::parse::parse_poly;
use gendiv::poly::Poly;
use gendiv::primes::PrimeRecord;
use gendiv::ring::{PolyRing, QuotientRing};
use gendiv::Error;

fn ring(names: &[&str], rels: &[&str]) -> QuotientRing {
    let amb = PolyRing::new(Field::rationals(), names);
    let rels = rels.iter().map(|r| parse_poly(&amb, r).unwrap()).collect();
    QuotientRing::new(amb, rels).unwrap()
}

fn p(r: &QuotientRing, s: &str) -> Poly {
    parse_poly(r.ambient(), s).unwrap()
}

fn node() -> QuotientRing {
    ring(&["x", "y"], &["x*y"])
}

fn plane() -> QuotientRing {
    ring(&["x", "y"], &[])
}

fn m(r: &QuotientRing) -> FPModule {
    FPModule::from_ideal(r, &[p(r, "x"), p(r, "y")])
}

fn cyclic(r: &QuotientRing, rels: &[&str]) -> FPModule {
    FPModule::coker(r, Matrix::from_cols(1, rels.iter().map(|g| vec![p(r, g)]).collect())).unwrap()
}

/// Finitely presented modules agree up to isomorphism when a bounded
/// search finds mutually inverse maps.
fn isomorphic(a: &FPModule, b: &FPModule) -> bool {
    find_isomorphism(a, b, 1).is_some()
}

#[test]
fn syzygies() {
    let a = plane();
    let s = syzygy_module(&FPModule::coker(&a, Matrix::from_cols(1, vec![vec![p(&a, "x")], vec![p(&a, "y")]])).unwrap());
    let e = s.embedding().unwrap();
    assert_eq!(e.ncols(), 1);
    let col = e.col(0);
    assert!(col[0] == p(&a, "y") && col[1] == p(&a, "-x") || col[0] == p(&a, "-y") && col[1] == p(&a, "x"));

    let n = node();
    let s = syzygy_module(&cyclic(&n, &["x"]));
    assert_eq!(s.embedding().unwrap().col(0), &[p(&n, "y")]);

    let id = FPModule::coker(&a, Matrix::identity(&a, 2)).unwrap();
    assert!(syzygy_module(&id).is_zero());
}

#[test]
fn homs() {
    let n = node();
    let target = m(&n);
    let h = hom_module(&FPModule::free(&n, 1), &target);
    assert!(isomorphic(&h.module, &target));

    let h = hom_module(&cyclic(&n, &["y"]), &FPModule::free(&n, 1));
    assert!(isomorphic(&h.module, &cyclic(&n, &["y"])));
    for g in &h.generators {
        ModuleMap::new(&cyclic(&n, &["y"]), &FPModule::free(&n, 1), g.clone()).expect("generators are well defined");
    }

    let a = plane();
    assert!(isomorphic(&dual(&m(&a)).module, &FPModule::free(&a, 1)));
}

#[test]
fn exts() {
    let n = node();
    let k = cyclic(&n, &["y"]);
    let e0 = ext(0, &k, &FPModule::free(&n, 1));
    assert!(isomorphic(&e0, &hom_module(&k, &FPModule::free(&n, 1)).module));

    let line = ring(&["x"], &[]);
    let e1 = ext(1, &cyclic(&line, &["x"]), &FPModule::free(&line, 1));
    assert!(isomorphic(&e1, &cyclic(&line, &["x"])));

    let a = plane();
    assert!(ext(1, &cyclic(&a, &["x", "y"]), &FPModule::free(&a, 1)).is_zero());
    assert!(!ext(2, &cyclic(&a, &["x", "y"]), &FPModule::free(&a, 1)).is_zero());
}

#[test]
fn duals() {
    let n = node();
    for rank in 1..=3 {
        assert_eq!(dual(&FPModule::free(&n, rank)).module.num_gens(), rank);
    }
    assert!(isomorphic(&dual(&m(&n)).module, &m(&n)));
}

#[test]
fn biduality() {
    let n = node();
    let free = FPModule::free(&n, 2);
    let b = biduality_map(&free);
    assert!(b.map.is_iso());

    assert!(biduality_map(&m(&n)).map.is_iso());

    let a = plane();
    let b = biduality_map(&m(&a));
    assert!(b.map.is_injective().is_ok());
    assert!(matches!(b.map.iso_verdict(), IsoVerdict::NotSurjective(_)));
    // The cokernel is the residue field Q = A/(x, y).
    assert!(isomorphic(&b.map.cokernel(), &cyclic(&a, &["x", "y"])));
}

#[test]
fn isomorphism_tests() {
    let n = node();
    let a = FPModule::free(&n, 1);
    assert!(ModuleMap::identity(&a).is_iso());
    let times_x = ModuleMap::new(&a, &a, Matrix::from_cols(1, vec![vec![p(&n, "x")]])).unwrap();
    match times_x.iso_verdict() {
        IsoVerdict::NotInjective(w) => assert_eq!(w, vec![p(&n, "y")]),
        other => panic!("{:?}", other),
    }
}

#[test]
fn ill_defined_maps_are_rejected() {
    let n = node();
    let k = cyclic(&n, &["y"]);
    // 1 -> 1 from A/(y) to A does not kill y.
    let bad = ModuleMap::new(&k, &FPModule::free(&n, 1), Matrix::identity(&n, 1));
    assert!(matches!(bad, Err(Error::NotWellDefined(_))), "{:?}", bad.map(|m| m.matrix));
    let a = plane();
    assert!(ModuleMap::new(&FPModule::free(&a, 1), &FPModule::free(&n, 1), Matrix::identity(&n, 1)).is_err());
}

#[test]
fn reflexivity() {
    let n = node();
    let a = plane();
    for rank in 1..=3 {
        assert!(is_reflexive(&FPModule::free(&n, rank)));
        assert!(is_reflexive(&FPModule::free(&a, rank)));
    }
    assert!(is_reflexive(&m(&n)));
    assert!(!is_reflexive(&m(&a)));
}

#[test]
fn base_changes() {
    let b = ring(&["x"], &[]);
    let c = ring(&["x", "t"], &["t^2 - t - x"]);
    let images = vec![p(&c, "t^2 - t")];
    assert!(base_change(&FPModule::free(&b, 3), &c, &images).unwrap().is_free_presentation());

    let pulled = base_change(&cyclic(&b, &["x"]), &c, &images).unwrap();
    assert!(isomorphic(&pulled, &cyclic(&c, &["t^2 - t"])));
    // The fiber over x = 0 is the two points t = 0 and t = 1.
    let ann = pulled.annihilator();
    assert!(ann.contains(&p(&c, "t*(t - 1)")) && !ann.contains(&p(&c, "t")) && !ann.contains(&p(&c, "t - 1")));

    let id: Vec<Poly> = vec![p(&b, "x")];
    let back = base_change(&cyclic(&b, &["x"]), &b, &id).unwrap();
    assert!(isomorphic(&back, &cyclic(&b, &["x"])));
}

#[test]
fn local_rank_one() {
    let n = node();
    let px = PrimeRecord::declared(&n, vec![p(&n, "x")]).unwrap();
    let origin = PrimeRecord::declared(&n, vec![p(&n, "x"), p(&n, "y")]).unwrap();
    assert!(localize_is_free_rank_one(&FPModule::free(&n, 1), &px));
    assert!(localize_is_free_rank_one(&FPModule::free(&n, 1), &origin));
    assert!(localize_is_free_rank_one(&m(&n), &px));
    assert!(!localize_is_free_rank_one(&m(&n), &origin));
    assert!(!localize_is_free_rank_one(&m(&n).direct_sum(&m(&n)), &px));
}
