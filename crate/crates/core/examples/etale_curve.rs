//! The double cover Q[x] -> Q[x,t]/(t^2 - t - x): étale certificate, local
//! formulas, nonzerodivisor transport, images and saturation.

use gendiv::etale::{
    certify_etale, compare_quotient_saturation, hom_pullback_check, literal_image_membership, nzd_transport,
    reflexive_pullback_check, verify_local_formulas, EtalePresentation, EtaleScope, ImageMembership, RingMapRecord,
};
use gendiv::field::Field;
use gendiv::module::FPModule;
use gendiv::parse::parse_poly;
use gendiv::primes::PrimeRecord;
use gendiv::ring::{PolyRing, QuotientRing};

fn main() -> gendiv::Result<()> {
    let b = QuotientRing::polynomial(Field::rationals(), &["x"]);
    let amb = PolyRing::new(Field::rationals(), &["x", "t"]);
    let a = QuotientRing::new(amb.clone(), vec![parse_poly(&amb, "t^2 - t - x")?])?;
    let p = |s: &str| parse_poly(&amb, s).unwrap();
    let f = RingMapRecord::new(&b, &a, vec![p("x")])?;

    let pres_amb = EtalePresentation::ambient(&b, &["t".to_string()]);
    let pres = EtalePresentation { new_vars: vec!["t".into()], relations: vec![parse_poly(&pres_amb, "t^2 - t - x")?] };
    let q = PrimeRecord::declared(&a, vec![p("t")])?;
    let cert = certify_etale(&f, &pres, None, Some(&[q.clone()]))?;
    let scope = match &cert.scope {
        EtaleScope::Global => "global".to_string(),
        EtaleScope::AtPrimes(ps) => ps.iter().map(|q| q.show()).collect::<Vec<_>>().join(" "),
    };
    println!("jacobian {}, etale at {}", a.show(&cert.jacobian_det), scope);

    let lf = verify_local_formulas(&cert, &q)?;
    println!("dim {} = {}, depth {} = {}", lf.dim_target, lf.dim_source, lf.depth_target, lf.depth_source);

    let t = nzd_transport(&f, &parse_poly(b.ambient(), "x")?)?;
    println!("x is a nonzerodivisor, image {} pass {}", a.show(&t.image), t.pass());

    match literal_image_membership(&p("t"), &f, 8) {
        ImageMembership::NotInImage(c) => println!("t is not an image up to degree {}", c.degree),
        other => println!("{:?}", other),
    }
    let sat = compare_quotient_saturation(&f, &q, 4, &[]);
    println!("saturation at (t): {}", sat.label());

    let xb = FPModule::from_ideal(&b, &[parse_poly(b.ambient(), "x")?]);
    println!("reflexive pullback of (x): {}", reflexive_pullback_check(&cert, &xb)?.pass());
    println!("hom pullback of (x): {}", hom_pullback_check(&cert, &xb)?.verdict.is_iso());
    Ok(())
}
