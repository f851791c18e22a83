//! Serre and Gorenstein conditions, depth and associated primes on the node.

use gendiv::field::Field;
use gendiv::local::{
    associated_primes, condition_report, is_gorenstein_at, local_depth, local_dim, total_quotient_decomposition,
    ConditionKind, Subject,
};
use gendiv::module::FPModule;
use gendiv::parse::parse_poly;
use gendiv::primes::PrimeRecord;
use gendiv::ring::{PolyRing, QuotientRing};

fn main() -> gendiv::Result<()> {
    let amb = PolyRing::new(Field::rationals(), &["x", "y"]);
    let node = QuotientRing::new(amb.clone(), vec![parse_poly(&amb, "x*y")?])?;
    let p = |s: &str| parse_poly(&amb, s).unwrap();
    let primes = vec![
        PrimeRecord::declared(&node, vec![p("x")])?,
        PrimeRecord::declared(&node, vec![p("y")])?,
        PrimeRecord::declared(&node, vec![p("x"), p("y")])?,
    ];
    let a = FPModule::free(&node, 1);
    for q in &primes {
        println!(
            "{}: dim {} depth {} gorenstein {}",
            q.show(),
            local_dim(&node, q)?,
            local_depth(&a, q)?,
            is_gorenstein_at(&node, q)?
        );
    }
    for (kind, r) in [(ConditionKind::Sr, 1), (ConditionKind::Sr, 2), (ConditionKind::Gr, 1)] {
        let rep = condition_report(Subject::Ring(&node), kind, r, &primes);
        println!("{} {}", kind.label(r), rep.verdict.label());
    }
    let ass: Vec<String> = associated_primes(&a, None)?.iter().map(|q| q.show()).collect();
    println!("Ass(A) = {}", ass.join(" "));
    for (q, d) in total_quotient_decomposition(&node)? {
        println!("K(A) factor at {}: {}", q.show(), d.show());
    }
    Ok(())
}
