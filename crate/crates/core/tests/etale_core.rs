use gendiv::etale::*;
use gendiv::field::Field;
use gendiv::module::{FPModule, Matrix};
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

fn prime(r: &QuotientRing, gens: &[&str]) -> PrimeRecord {
    PrimeRecord::declared(r, gens.iter().map(|g| p(r, g)).collect()).unwrap()
}

/// `Q[x] -> Q[x,t]/(t^2 - t - x)`.
fn curve_map() -> RingMapRecord {
    let b = ring(&["x"], &[]);
    let a = ring(&["x", "t"], &["t^2 - t - x"]);
    let x = p(&a, "x");
    RingMapRecord::new(&b, &a, vec![x]).unwrap()
}

fn curve_presentation(f: &RingMapRecord) -> EtalePresentation {
    let amb = EtalePresentation::ambient(&f.source, &["t".to_string()]);
    EtalePresentation { new_vars: vec!["t".into()], relations: vec![parse_poly(&amb, "t^2 - t - x").unwrap()] }
}

fn curve_cert() -> EtaleCertificate {
    let f = curve_map();
    let q = prime(&f.target, &["t"]);
    certify_etale(&f, &curve_presentation(&f), Some(&p(&f.target, "2t - 1")), Some(&[q])).unwrap()
}

fn non_flat() -> RingMapRecord {
    let b = ring(&["x"], &[]);
    let a = ring(&["x", "y"], &["x*y"]);
    RingMapRecord::new(&b, &a, vec![p(&a, "x")]).unwrap()
}

#[test]
fn ring_maps_must_respect_relations() {
    let b = ring(&["x"], &["x^2"]);
    let a = ring(&["x"], &[]);
    assert!(matches!(RingMapRecord::new(&b, &a, vec![p(&a, "x")]), Err(Error::NotRingMap(_))));
}

#[test]
fn curve_is_etale_at_t() {
    let c = curve_cert();
    let q = prime(&c.map.target, &["t"]);
    assert_eq!(c.scope, EtaleScope::AtPrimes(vec![q.clone()]));
    assert!(!q.contains(&c.jacobian_det));
    assert_eq!(c.map.target.show(&c.jacobian_det), "2*t - 1");
}

#[test]
fn identity_is_globally_etale() {
    let n = ring(&["x", "y"], &["x*y"]);
    let c = certify_etale(&RingMapRecord::identity(&n), &EtalePresentation::empty(), None, None).unwrap();
    assert_eq!(c.scope, EtaleScope::Global);
    assert!(c.jacobian_det == n.one());
}

#[test]
fn curve_ramifies_at_the_branch_point() {
    let f = curve_map();
    let q = prime(&f.target, &["2t - 1", "x + 1/4"]);
    match certify_etale(&f, &curve_presentation(&f), None, Some(&[q.clone()])) {
        Err(Error::NotEtaleAt(ps)) => assert_eq!(ps, vec![q.show()]),
        other => panic!("{:?}", other.map(|c| c.scope)),
    }
}

#[test]
fn presentations_are_checked() {
    let f = curve_map();
    let amb = EtalePresentation::ambient(&f.source, &["t".to_string()]);
    let wrong = EtalePresentation { new_vars: vec!["t".into()], relations: vec![parse_poly(&amb, "t^2 - x").unwrap()] };
    let q = prime(&f.target, &["t"]);
    assert!(matches!(certify_etale(&f, &wrong, None, Some(&[q.clone()])), Err(Error::BadPresentation(_))));
    let mismatched = certify_etale(&f, &curve_presentation(&f), Some(&p(&f.target, "t")), Some(&[q]));
    assert!(matches!(mismatched, Err(Error::BadPresentation(_))));
}

#[test]
fn contractions() {
    let f = curve_map();
    assert_eq!(contract_prime(&f, &prime(&f.target, &["t"])).unwrap().show(), "(x)");
    assert_eq!(contract_prime(&f, &prime(&f.target, &["t - 1", "x"])).unwrap().show(), "(x)");
    let zero = PrimeRecord::declared(&f.target, vec![p(&f.target, "t^2 - t - x")]).unwrap();
    assert_eq!(contract_prime(&f, &zero).unwrap().show(), "(0)");
    let n = ring(&["x", "y"], &["x*y"]);
    let id = RingMapRecord::identity(&n);
    let q = prime(&n, &["x", "y"]);
    assert_eq!(contract_prime(&id, &q).unwrap(), q);
}

#[test]
fn local_formulas() {
    let c = curve_cert();
    let r = verify_local_formulas(&c, &prime(&c.map.target, &["t"])).unwrap();
    assert_eq!((r.dim_target, r.dim_source, r.depth_target, r.depth_source), (1, 1, 1, 1));
    assert!(r.pass());
    let n = ring(&["x", "y"], &["x*y"]);
    let id = certify_etale(&RingMapRecord::identity(&n), &EtalePresentation::empty(), None, None).unwrap();
    let r = verify_local_formulas(&id, &prime(&n, &["x", "y"])).unwrap();
    assert_eq!((r.dim_target, r.dim_source, r.depth_target, r.depth_source), (1, 1, 1, 1));
}

#[test]
fn nonzerodivisor_transport() {
    let f = curve_map();
    let r = nzd_transport(&f, &p(&f.source, "x")).unwrap();
    assert!(r.pass());
    assert!(f.target.eq_elems(&r.image, &p(&f.target, "t^2 - t")));
    let n = ring(&["x", "y"], &["x*y"]);
    assert!(nzd_transport(&RingMapRecord::identity(&n), &p(&n, "x + y")).unwrap().pass());
    let g = non_flat();
    let r = nzd_transport(&g, &p(&g.source, "x")).unwrap();
    assert_eq!(r.non_flat_witness, Some(p(&g.target, "y")));
    assert!(matches!(nzd_transport(&RingMapRecord::identity(&n), &p(&n, "x")), Err(Error::SourceZerodivisor(_))));
}

#[test]
fn literal_images() {
    let f = curve_map();
    let t = p(&f.target, "t");
    match literal_image_membership(&t, &f, 6) {
        ImageMembership::NotInImage(cert) => {
            assert_eq!(cert.degree, 6);
            assert!(verify_not_in_image(&t, &f, &cert));
        }
        other => panic!("{:?}", other),
    }
    assert_eq!(literal_image_membership(&p(&f.target, "t^2 - t"), &f, 6), ImageMembership::InImage(p(&f.source, "x")));
    assert_eq!(literal_image_membership(&p(&f.target, "(t^2 - t)^3"), &f, 6), ImageMembership::InImage(p(&f.source, "x^3")));
}

#[test]
fn saturation_comparison() {
    let f = curve_map();
    let q = prime(&f.target, &["t"]);
    match compare_quotient_saturation(&f, &q, 4, &[]) {
        SaturationVerdict::Equal(ws) => {
            let w = ws.iter().find(|w| w.a == p(&f.target, "t")).unwrap();
            assert_eq!(w.b, p(&f.source, "x"));
            assert_eq!(w.c, p(&f.target, "t - 1"));
        }
        other => panic!("{:?}", other),
    }
    let n = ring(&["x", "y"], &["x*y"]);
    let e = compare_quotient_saturation(&RingMapRecord::identity(&n), &prime(&n, &["x", "y"]), 4, &[p(&n, "x + y")]);
    assert_eq!(e.label(), "EQUAL");
    let g = non_flat();
    let d = compare_quotient_saturation(&g, &prime(&g.target, &["x", "y"]), 4, &[]);
    assert_eq!(d.label(), "DISTINCT");
}

#[test]
fn pullbacks() {
    let c = curve_cert();
    let b = &c.map.source;
    let free = FPModule::free(b, 2);
    assert!(reflexive_pullback_check(&c, &free).unwrap().pass());
    assert!(hom_pullback_check(&c, &free).unwrap().verdict.is_iso());
    let xb = FPModule::from_ideal(b, &[p(b, "x")]);
    let r = reflexive_pullback_check(&c, &xb).unwrap();
    assert!(r.pass());
    assert!(hom_pullback_check(&c, &xb).unwrap().verdict.is_iso());
    let torsion = FPModule::coker(b, Matrix::from_cols(1, vec![vec![p(b, "x")]])).unwrap();
    assert!(matches!(reflexive_pullback_check(&c, &torsion), Err(Error::SourceNotReflexive)));
    let h = hom_pullback_check(&c, &torsion).unwrap();
    assert!(h.verdict.is_iso());
    assert_eq!(h.map.source.num_gens(), 0);

    let n = ring(&["x", "y"], &["x*y"]);
    let id = certify_etale(&RingMapRecord::identity(&n), &EtalePresentation::empty(), None, None).unwrap();
    let m = FPModule::from_ideal(&n, &[p(&n, "x"), p(&n, "y")]);
    assert!(reflexive_pullback_check(&id, &m).unwrap().pass());
    assert!(hom_pullback_check(&id, &m).unwrap().verdict.is_iso());
}

#[test]
fn default_bound() {
    assert_eq!(curve_map().default_degree_bound(), 6);
}
