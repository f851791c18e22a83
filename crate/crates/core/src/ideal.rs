//! Ideal arithmetic in an ambient polynomial ring.

use crate::error::{Error, Result};
use crate::groebner::ideal_basis;
use crate::order::MonomialOrder;
use crate::poly::{mono_divides, Poly};
use crate::ring::{IdealRecord, PolyRing, QuotientRing};
use crate::syzygy::kernel;

fn same_ambient(a: &IdealRecord, b: &IdealRecord) -> Result<()> {
    if a.ring() != b.ring() {
        return Err(Error::AmbientMismatch(format!("{} vs {}", a.ring(), b.ring())));
    }
    Ok(())
}

/// Reduced Gröbner basis for an arbitrary order.
pub fn groebner_basis(ideal: &IdealRecord, order: &MonomialOrder) -> Vec<Poly> {
    if *order == MonomialOrder::Grevlex {
        return ideal.basis().to_vec();
    }
    let r = ideal.ring();
    ideal_basis(r.field, r.nvars(), order, ideal.generators())
}

pub fn is_member(f: &Poly, ideal: &IdealRecord) -> Result<bool> {
    ideal.ring().check(f)?;
    Ok(ideal.contains(f))
}

/// `(I : g)` for a single polynomial.
pub fn quotient_by_element(ideal: &IdealRecord, g: &Poly) -> IdealRecord {
    let ring = ideal.ring();
    if ideal.is_unit() {
        return IdealRecord::unit(ring);
    }
    let q = QuotientRing::new(ring.clone(), ideal.generators().to_vec()).expect("proper ideal");
    let g = q.reduce(g);
    if g.is_zero() {
        return IdealRecord::unit(ring);
    }
    let ann: Vec<Poly> = kernel(&q, 1, &[vec![g]]).into_iter().map(|mut v| v.pop().unwrap()).collect();
    IdealRecord::new_unchecked(ring, ann).sum(ideal).canonical()
}

/// `(I : J) = { f : f J ⊆ I }`.
pub fn ideal_quotient(i: &IdealRecord, j: &IdealRecord) -> Result<IdealRecord> {
    same_ambient(i, j)?;
    let mut acc = IdealRecord::unit(i.ring());
    for g in j.generators() {
        let q = quotient_by_element(i, g);
        acc = intersect(&acc, &q)?;
    }
    Ok(acc.canonical())
}

pub fn intersect(a: &IdealRecord, b: &IdealRecord) -> Result<IdealRecord> {
    same_ambient(a, b)?;
    if a.is_unit() {
        return Ok(b.clone());
    }
    if b.is_unit() {
        return Ok(a.clone());
    }
    if a.is_zero() || b.is_zero() {
        return Ok(IdealRecord::zero(a.ring()));
    }
    let ring = a.ring();
    let p = QuotientRing::new(ring.clone(), Vec::new()).unwrap();
    let zero = ring.zero();
    let mut cols = vec![vec![ring.one(), ring.one()]];
    for f in a.generators() {
        cols.push(vec![f.clone(), zero.clone()]);
    }
    for g in b.generators() {
        cols.push(vec![zero.clone(), g.clone()]);
    }
    let gens: Vec<Poly> = kernel(&p, 2, &cols).into_iter().map(|v| v[0].clone()).collect();
    Ok(IdealRecord::new_unchecked(ring, gens).canonical())
}

/// `I ∩ k[remaining variables]`, computed with a block order.
pub fn eliminate(ideal: &IdealRecord, vars: &[usize]) -> Result<IdealRecord> {
    let ring = ideal.ring();
    if let Some(&v) = vars.iter().find(|&&v| v >= ring.nvars()) {
        return Err(Error::VariableMismatch(format!("variable index {v} out of range")));
    }
    let order = MonomialOrder::elimination(ring.nvars(), vars);
    let gb = groebner_basis(ideal, &order);
    let kept = gb.into_iter().filter(|g| vars.iter().all(|&v| !g.involves(v))).collect();
    Ok(IdealRecord::new_unchecked(ring, kept).canonical())
}

/// Krull dimension of `P / I` via maximal independent sets modulo the
/// leading-term ideal.
pub fn krull_dimension(ideal: &IdealRecord) -> Result<usize> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let order = MonomialOrder::Grevlex;
    let leads: Vec<Vec<u32>> = ideal.basis().iter().map(|g| g.leading_monomial(&order).unwrap().clone()).collect();
    let n = ideal.ring().nvars();
    Ok(max_independent_set(n, &leads).len())
}

/// A largest set of variables such that no leading monomial is supported on it.
pub fn max_independent_set(n: usize, leads: &[Vec<u32>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if best.as_ref().is_some_and(|b| size <= b.len()) {
            continue;
        }
        let independent = leads.iter().all(|m| m.iter().enumerate().any(|(i, &e)| e > 0 && mask & (1 << i) == 0));
        if independent {
            best = Some((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    best.unwrap_or_default()
}

/// Whether `f` is a unit of `A`, i.e. `1 ∈ relations + (f)`.
pub fn is_unit(f: &Poly, ring: &QuotientRing) -> bool {
    ring.relations().with(&[f.clone()]).is_unit()
}

/// Whether a monomial lies in the monomial ideal spanned by `gens`.
pub fn monomial_in(m: &[u32], gens: &[Vec<u32>]) -> bool {
    gens.iter().any(|g| mono_divides(g, m))
}

pub fn ambient_of(ring: &QuotientRing) -> PolyRing {
    ring.ambient().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn xy() -> PolyRing {
        PolyRing::new(Field::rationals(), &["x", "y"])
    }

    #[test]
    fn monomial_quotient() {
        let r = xy();
        let (x, y) = (r.var(0), r.var(1));
        let i = IdealRecord::new(&r, vec![x.mul(&y)]).unwrap();
        let j = IdealRecord::new(&r, vec![x.clone()]).unwrap();
        let q = ideal_quotient(&i, &j).unwrap();
        assert_eq!(q, IdealRecord::new(&r, vec![y.clone()]).unwrap());
    }

    #[test]
    fn node_nonzerodivisor_has_trivial_annihilator() {
        let r = xy();
        let (x, y) = (r.var(0), r.var(1));
        let i = IdealRecord::new(&r, vec![x.mul(&y)]).unwrap();
        let q = quotient_by_element(&i, &x.add(&y));
        assert_eq!(q, i);
    }

    #[test]
    fn intersection_of_axes() {
        let r = xy();
        let (x, y) = (r.var(0), r.var(1));
        let a = IdealRecord::new(&r, vec![x.clone()]).unwrap();
        let b = IdealRecord::new(&r, vec![y.clone()]).unwrap();
        assert_eq!(intersect(&a, &b).unwrap(), IdealRecord::new(&r, vec![x.mul(&y)]).unwrap());
    }

    #[test]
    fn dimensions() {
        let r = xy();
        let (x, y) = (r.var(0), r.var(1));
        assert_eq!(krull_dimension(&IdealRecord::new(&r, vec![x.mul(&y)]).unwrap()).unwrap(), 1);
        assert_eq!(krull_dimension(&IdealRecord::zero(&r)).unwrap(), 2);
        assert_eq!(krull_dimension(&IdealRecord::new(&r, vec![x.clone(), y.clone()]).unwrap()).unwrap(), 0);
        assert_eq!(krull_dimension(&IdealRecord::unit(&r)), Err(Error::UnitIdeal));
    }
}
