use gendiv::field::Field;
use gendiv::module::{FPModule, Matrix};
use gendiv::parse::parse_poly;
use gendiv::poly::Poly;
use gendiv::ring::{PolyRing, QuotientRing};
use gendiv::etale::RingMapRecord;
use gendiv::stack::*;
use gendiv::Error;

fn line() -> QuotientRing {
    QuotientRing::new(PolyRing::new(Field::rationals(), &["u"]), vec![]).unwrap()
}

fn p(r: &QuotientRing, s: &str) -> Poly {
    parse_poly(r.ambient(), s).unwrap()
}

fn z2_table() -> Vec<Vec<String>> {
    vec![vec!["1".into(), "-1".into()], vec!["-1".into(), "1".into()]]
}

fn z2(r: &QuotientRing) -> GroupActionGroupoid {
    build_group_groupoid(r, &z2_table(), vec![vec![p(r, "u")], vec![p(r, "-u")]]).unwrap()
}

fn origin_module(r: &QuotientRing) -> FPModule {
    FPModule::from_ideal(r, &[p(r, "u")])
}

fn structure(r: &QuotientRing, c: i64) -> EquivariantModule {
    let g = z2(r);
    let m = origin_module(r);
    EquivariantModule::new(&g, &m, vec![Matrix::identity(r, 1), Matrix::from_cols(1, vec![vec![r.constant(c)]])]).unwrap()
}

#[test]
fn groupoids() {
    let r = line();
    let g = z2(&r);
    assert_eq!(g.inverses, vec![0, 1]);
    GroupActionGroupoid::trivial(&r);
    let bad = build_group_groupoid(&r, &z2_table(), vec![vec![p(&r, "u")], vec![p(&r, "u + 1")]]);
    assert_eq!(bad.unwrap_err(), Error::TableViolation("-1".into(), "-1".into()));
    let node = QuotientRing::new(PolyRing::new(Field::rationals(), &["x", "y"]), vec![parse_poly(&PolyRing::new(Field::rationals(), &["x", "y"]), "x*y").unwrap()]).unwrap();
    let nonmap = build_group_groupoid(&node, &z2_table(), vec![vec![p(&node, "x"), p(&node, "y")], vec![p(&node, "x + 1"), p(&node, "y")]]);
    assert!(matches!(nonmap, Err(Error::NotAutomorphism(_))));
}

#[test]
fn cocycles() {
    let r = line();
    assert!(check_cocycle(&structure(&r, 1)).is_ok());
    assert!(check_cocycle(&structure(&r, -1)).is_ok());
    match check_cocycle(&structure(&r, 2)) {
        Err(Error::CocycleFailure { g, h, witness }) => {
            assert_eq!((g.as_str(), h.as_str()), ("-1", "-1"));
            assert!(witness.starts_with("composite=4"), "{}", witness);
        }
        other => panic!("{:?}", other),
    }
}

#[test]
fn invariant_section_bases() {
    let r = line();
    let natural = invariant_sections(&structure(&r, 1), 3);
    assert_eq!(natural.values.unwrap(), vec![vec![p(&r, "u")], vec![p(&r, "u^3")]]);
    let twisted = invariant_sections(&structure(&r, -1), 3);
    assert_eq!(twisted.values.unwrap(), vec![vec![p(&r, "u^2")]]);
    let triv = GroupActionGroupoid::trivial(&r);
    let all = invariant_sections(&EquivariantModule::trivial(&triv, &FPModule::free(&r, 1)).unwrap(), 3);
    assert_eq!(all.coords.len(), 4);
}

#[test]
fn stack_divisors() {
    let r = line();
    let d = validate_stack_divisor(&structure(&r, 1)).unwrap();
    assert!(check_cocycle(&d.dual_equivariant).is_ok());
    let zero = validate_stack_divisor(&EquivariantModule::trivial(&z2(&r), &FPModule::free(&r, 1)).unwrap()).unwrap();
    assert!(stack_effective_to_substack(&zero, 2).unwrap().subscheme.ideal.is_unit());
    let rank2 = EquivariantModule::trivial(&z2(&r), &FPModule::free(&r, 2)).unwrap();
    assert!(matches!(validate_stack_divisor(&rank2), Err(Error::WrongGenericRank(_))));
}

#[test]
fn stacky_origin_substack() {
    let r = line();
    let g = z2(&r);
    let j = r.ideal(vec![p(&r, "u")]).unwrap();
    let d = StackDivisor::from_invariant_ideal(&g, &j).unwrap();
    let sub = stack_effective_to_substack(&d, 2).unwrap();
    assert_eq!(sub.subscheme.ideal, j);
    assert_eq!(sub.subscheme.associated.len(), 1);
    let bad = r.ideal(vec![p(&r, "u - 1")]).unwrap();
    assert_eq!(StackDivisor::from_invariant_ideal(&g, &bad).unwrap_err(), Error::NotInvariant("-1".into()));
}

#[test]
fn sections_to_effective() {
    let r = line();
    let d = validate_stack_divisor(&structure(&r, 1)).unwrap();
    let (_, j1) = section_to_stack_effective(&d, &[r.one()]).unwrap();
    assert!(j1.is_unit());
    let (_, j3) = section_to_stack_effective(&d, &[p(&r, "u^2")]).unwrap();
    assert_eq!(j3, r.ideal(vec![p(&r, "u^2")]).unwrap());
    let (_, scaled) = section_to_stack_effective(&d, &[p(&r, "5u^2")]).unwrap();
    assert_eq!(scaled, j3);
    assert_eq!(section_to_stack_effective(&d, &[p(&r, "u")]).unwrap_err(), Error::NotInvariant("-1".into()));
}

#[test]
fn descent() {
    let r = line();
    let m = origin_module(&r);
    let id = ChartFamily {
        modules: vec![m.clone()],
        edges: vec![DescentEdge { from: 0, to: 0, map: RingMapRecord::identity(&r), comparison: Matrix::identity(&r, 1) }],
    };
    assert_eq!(descent_check(&id), vec![EdgeVerdict::Iso]);
    let flip = RingMapRecord::new(&r, &r, vec![p(&r, "-u")]).unwrap();
    let twist = ChartFamily {
        modules: vec![m.clone(), m.clone()],
        edges: vec![
            DescentEdge { from: 0, to: 1, map: flip.clone(), comparison: Matrix::from_cols(1, vec![vec![r.constant(-1)]]) },
            DescentEdge { from: 0, to: 1, map: flip, comparison: Matrix::from_cols(1, vec![vec![p(&r, "u")]]) },
        ],
    };
    let v = descent_check(&twist);
    assert_eq!(v[0], EdgeVerdict::Iso);
    assert!(matches!(v[1], EdgeVerdict::NotIso(_)));
}
