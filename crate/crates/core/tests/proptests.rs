use proptest::prelude::*;

use gendiv::divisor::{effective_to_subscheme, is_effective, nondegenerate_section, section_to_effective, validate_divisor};
use gendiv::etale::{contract_prime, literal_image_membership, ImageMembership, RingMapRecord};
use gendiv::field::Field;
use gendiv::groebner::normal_form;
use gendiv::ideal::{eliminate, groebner_basis, ideal_quotient};
use gendiv::local::{associated_primes, has_embedded_points, is_gorenstein_at, is_nonzerodivisor, local_depth, local_dim};
use gendiv::module::{base_change, dual, ext, hom_module, is_reflexive, FPModule, Matrix};
use gendiv::order::MonomialOrder;
use gendiv::parse::parse_poly;
use gendiv::poly::Poly;
use gendiv::primes::{ring_minimal_primes, PrimeRecord};
use gendiv::ring::{IdealRecord, PolyRing, QuotientRing};
use gendiv::stack::{build_group_groupoid, invariant_sections, section_to_stack_effective, validate_stack_divisor, EquivariantModule};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() }
}

fn ring(names: &[&str], rels: &[&str]) -> QuotientRing {
    let amb = PolyRing::new(Field::rationals(), names);
    let rels = rels.iter().map(|r| parse_poly(&amb, r).unwrap()).collect();
    QuotientRing::new(amb, rels).unwrap()
}

fn p(r: &QuotientRing, s: &str) -> Poly {
    parse_poly(r.ambient(), s).unwrap()
}

/// Polynomials in `n` variables with small exponents and coefficients.
fn poly(field: Field, n: usize, maxdeg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=maxdeg, n), -3i64..=3), 1..4).prop_map(move |terms| {
        Poly::from_terms(field.clone(), n, terms.into_iter().map(|(m, c)| (m, field.from_i64(c))))
    })
}

fn f5() -> Field {
    Field::prime(5).unwrap()
}

fn ideal_of(r: &PolyRing, gens: Vec<Poly>) -> IdealRecord {
    IdealRecord::new(r, gens).unwrap()
}

/// Every module the local and module suites are built from.
fn fixture_modules() -> Vec<FPModule> {
    let node = ring(&["x", "y"], &["x*y"]);
    let plane = ring(&["x", "y"], &[]);
    let curve = ring(&["x", "t"], &["t^2 - t - x"]);
    let line = ring(&["x"], &[]);
    vec![
        FPModule::free(&node, 1),
        FPModule::free(&node, 2),
        FPModule::from_ideal(&node, &[p(&node, "x"), p(&node, "y")]),
        FPModule::from_ideal(&node, &[p(&node, "x")]),
        FPModule::from_ideal(&plane, &[p(&plane, "x"), p(&plane, "y")]),
        FPModule::free(&curve, 1),
        FPModule::from_ideal(&line, &[p(&line, "x")]),
        FPModule::coker(&line, Matrix::from_cols(1, vec![vec![p(&line, "x")]])).unwrap(),
    ]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn reduced_basis_ignores_generator_order(gens in prop::collection::vec(poly(f5(), 3, 2), 1..4), rot in 0usize..4) {
        let r = PolyRing::new(f5(), &["x", "y", "z"]);
        let mut perm = gens.clone();
        perm.rotate_left(rot % gens.len());
        perm.reverse();
        let a = groebner_basis(&ideal_of(&r, gens), &MonomialOrder::Grevlex);
        let b = groebner_basis(&ideal_of(&r, perm), &MonomialOrder::Grevlex);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normal_form_is_idempotent(gens in prop::collection::vec(poly(Field::rationals(), 2, 3), 1..3), f in poly(Field::rationals(), 2, 4)) {
        let r = PolyRing::new(Field::rationals(), &["x", "y"]);
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let gb = groebner_basis(&ideal_of(&r, gens.clone()), &order);
            let once = normal_form(&f, &gb, &order);
            prop_assert_eq!(normal_form(&once, &gb, &order), once.clone());
            // The remainder differs from f by an ideal member.
            prop_assert!(ideal_of(&r, gens.clone()).contains(&f.sub(&once)));
        }
    }

    #[test]
    fn colon_times_divisor_lies_in_ideal(i in prop::collection::vec(poly(f5(), 2, 2), 1..3), j in prop::collection::vec(poly(f5(), 2, 2), 1..3)) {
        let r = PolyRing::new(f5(), &["x", "y"]);
        let (i, j) = (ideal_of(&r, i), ideal_of(&r, j));
        let q = ideal_quotient(&i, &j).unwrap();
        prop_assert!(q.product(&j).is_subset_of(&i));
        prop_assert!(i.is_subset_of(&q));
    }

    #[test]
    fn elimination_stays_inside(gens in prop::collection::vec(poly(f5(), 3, 2), 1..4), v in 0usize..3) {
        let r = PolyRing::new(f5(), &["x", "y", "z"]);
        let i = ideal_of(&r, gens);
        let e = eliminate(&i, &[v]).unwrap();
        for g in e.generators() {
            prop_assert!(i.contains(g));
            prop_assert!(!g.involves(v));
        }
    }

    #[test]
    fn nonzerodivisors_multiply(a in poly(Field::rationals(), 2, 2), b in poly(Field::rationals(), 2, 2)) {
        let node = ring(&["x", "y"], &["x*y"]);
        if is_nonzerodivisor(&a, &node) && is_nonzerodivisor(&b, &node) {
            prop_assert!(is_nonzerodivisor(&node.mul(&a, &b), &node));
        }
    }

    #[test]
    fn image_membership_is_monotone(f in poly(Field::rationals(), 1, 3), extra in 1u32..4) {
        let b = ring(&["x"], &[]);
        let a = ring(&["x", "t"], &["t^2 - t - x"]);
        let map = RingMapRecord::new(&b, &a, vec![p(&a, "x")]).unwrap();
        let target = f.substitute(&[p(&a, "t^2 - t")]);
        let d = f.total_degree().unwrap_or(0);
        if let ImageMembership::InImage(_) = literal_image_membership(&target, &map, d) {
            prop_assert!(matches!(literal_image_membership(&target, &map, d + extra), ImageMembership::InImage(_)));
        }
    }

    #[test]
    fn section_divisors_have_no_embedded_points(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2, d in -2i64..=2, s in 1i64..=4) {
        let node = ring(&["x", "y"], &["x*y"]);
        let m = FPModule::from_ideal(&node, &[p(&node, "x"), p(&node, "y")]);
        let sec = vec![p(&node, &format!("{} + {}*x", a, b)), p(&node, &format!("{} + {}*y", c, d))];
        if nondegenerate_section(&m, &sec) {
            let div = validate_divisor(&m).unwrap();
            let e = section_to_effective(&div, &sec).unwrap();
            let z = effective_to_subscheme(&e, 2).unwrap();
            // No embedded points: the associated primes are pairwise incomparable.
            for (i, q) in z.associated.iter().enumerate() {
                prop_assert!(z.ideal.is_subset_of(&q.ideal));
                for r in &z.associated[i + 1..] {
                    prop_assert!(!q.is_subset_of(r) && !r.is_subset_of(q));
                }
            }
            // Scaling the section by a constant leaves the image ideal alone.
            let scaled: Vec<Poly> = sec.iter().map(|x| x.scale(&node.field().from_i64(s))).collect();
            let e2 = section_to_effective(&div, &scaled).unwrap();
            prop_assert_eq!(is_effective(&e2, 2).unwrap().ideal, is_effective(&e, 2).unwrap().ideal);
        }
    }

    #[test]
    fn invariant_sections_scale(c in 1i64..=5, sign in prop::bool::ANY) {
        let r = ring(&["u"], &[]);
        let table = vec![vec!["1".to_string(), "-1".to_string()], vec!["-1".to_string(), "1".to_string()]];
        let g = build_group_groupoid(&r, &table, vec![vec![p(&r, "u")], vec![p(&r, "-u")]]).unwrap();
        let m = FPModule::from_ideal(&r, &[p(&r, "u")]);
        let phi = if sign { 1 } else { -1 };
        let e = EquivariantModule::new(&g, &m, vec![Matrix::identity(&r, 1), Matrix::from_cols(1, vec![vec![r.constant(phi)]])]).unwrap();
        let d = validate_stack_divisor(&e).unwrap();
        for s in invariant_sections(&e, 3).coords {
            let (_, j) = section_to_stack_effective(&d, &s).unwrap();
            let scaled: Vec<Poly> = s.iter().map(|x| x.scale(&r.field().from_i64(c))).collect();
            let (_, j2) = section_to_stack_effective(&d, &scaled).unwrap();
            prop_assert_eq!(&j, &j2);
            // The image ideal is carried to itself by the group.
            prop_assert!(g.non_invariant_element(&j).is_none());
        }
    }
}

#[test]
fn duals_of_fixture_modules_are_reflexive() {
    for m in fixture_modules() {
        assert!(is_reflexive(&dual(&m).module), "{}", m.show());
    }
}

#[test]
fn identity_base_change_is_trivial() {
    for m in fixture_modules() {
        let r = m.ring().clone();
        let vars: Vec<Poly> = (0..r.nvars()).map(|i| r.var(i)).collect();
        let back = base_change(&m, &r, &vars).unwrap();
        assert_eq!(back.relations(), &m.relations().reduce(&r));
    }
}

#[test]
fn ext_zero_is_hom() {
    for m in fixture_modules() {
        let a = FPModule::free(m.ring(), 1);
        let e = ext(0, &m, &a);
        let h = hom_module(&m, &a).module;
        assert_eq!(e.num_gens(), h.num_gens(), "{}", m.show());
        assert_eq!(e.fitting_ideal(0), h.fitting_ideal(0));
        assert_eq!(e.annihilator(), h.annihilator());
    }
}

#[test]
fn depth_is_at_most_dimension() {
    for m in fixture_modules() {
        let r = m.ring().clone();
        let mut primes = ring_minimal_primes(&r).unwrap();
        if r.nvars() == 2 && r.names()[1] == "y" {
            primes.push(PrimeRecord::declared(&r, vec![p(&r, "x"), p(&r, "y")]).unwrap());
        }
        for q in &primes {
            if let Ok(depth) = local_depth(&m, q) {
                assert!(depth <= local_dim(&r, q).unwrap());
            }
        }
    }
}

#[test]
fn associated_primes_contain_minimal_primes() {
    for r in [ring(&["x", "y"], &["x*y"]), ring(&["x", "t"], &["t^2 - t - x"]), ring(&["x", "y"], &["y^2 - x^3"])] {
        let a = FPModule::free(&r, 1);
        let ass = associated_primes(&a, None).unwrap();
        for q in ring_minimal_primes(&r).unwrap() {
            assert!(ass.contains(&q));
        }
        assert!(has_embedded_points(&a, None).unwrap().is_none());
    }
}

#[test]
fn hypersurfaces_are_gorenstein() {
    let cases = [
        (ring(&["x", "y"], &["x*y"]), vec![vec!["x"], vec!["y"], vec!["x", "y"]]),
        (ring(&["x", "y"], &["y^2 - x^3"]), vec![vec!["x", "y"], vec!["x - 1", "y - 1"]]),
        (ring(&["x", "t"], &["t^2 - t - x"]), vec![vec!["t"], vec!["t - 1/2", "x + 1/4"]]),
    ];
    for (r, primes) in cases {
        for gens in primes {
            let q = PrimeRecord::declared(&r, gens.iter().map(|g| p(&r, g)).collect()).unwrap();
            assert!(is_gorenstein_at(&r, &q).unwrap(), "{}", q.show());
        }
    }
}

#[test]
fn contraction_along_identity() {
    let node = ring(&["x", "y"], &["x*y"]);
    let id = RingMapRecord::identity(&node);
    for gens in [vec!["x"], vec!["y"], vec!["x", "y"]] {
        let q = PrimeRecord::declared(&node, gens.iter().map(|g| p(&node, g)).collect()).unwrap();
        assert_eq!(contract_prime(&id, &q).unwrap(), q);
    }
}

#[test]
fn invariant_dimensions_are_complementary() {
    let r = ring(&["u"], &[]);
    let table = vec![vec!["1".to_string(), "-1".to_string()], vec!["-1".to_string(), "1".to_string()]];
    let g = build_group_groupoid(&r, &table, vec![vec![p(&r, "u")], vec![p(&r, "-u")]]).unwrap();
    let m = FPModule::from_ideal(&r, &[p(&r, "u")]);
    for d in 1..=6u32 {
        let dims: Vec<usize> = [1, -1]
            .iter()
            .map(|&c| {
                let e = EquivariantModule::new(&g, &m, vec![Matrix::identity(&r, 1), Matrix::from_cols(1, vec![vec![r.constant(c)]])]).unwrap();
                invariant_sections(&e, d).coords.len()
            })
            .collect();
        assert_eq!(dims, vec![(d as usize + 1) / 2, d as usize / 2], "bound {}", d);
    }
}
