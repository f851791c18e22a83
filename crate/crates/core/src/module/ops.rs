use crate::ideal::quotient_by_element;
use crate::module::fp::FPModule;
use crate::module::matrix::Matrix;
use crate::poly::Poly;
use crate::primes::PrimeRecord;
use crate::ring::QuotientRing;
use crate::error::Result;

/// Some element of `Ann_R(g)` outside `p`, if one exists among the
/// generators of the annihilator.
pub fn annihilator_witness_outside(ring: &QuotientRing, g: &Poly, p: &PrimeRecord) -> Option<Poly> {
    let ann = quotient_by_element(ring.relations(), g);
    ann.generators().iter().find(|a| !p.contains(a)).cloned()
}

/// Whether `M_p` is free of rank one.
///
/// This holds exactly when `Fitt_1(M) ⊄ p` and `Fitt_0(M)` vanishes after
/// localizing, i.e. each generator of `Fitt_0` is killed by an element
/// outside `p`.
pub fn localize_is_free_rank_one(m: &FPModule, p: &PrimeRecord) -> bool {
    if m.fitting_minor_outside(1, p).is_none() {
        return false;
    }
    let ring = m.ring();
    let f0 = m.fitting_ideal(0);
    f0.generators()
        .iter()
        .map(|g| ring.reduce(g))
        .filter(|g| !g.is_zero())
        .all(|g| annihilator_witness_outside(ring, &g, p).is_some())
}

/// `M ⊗_R S` along the ring map sending the variables of `R` to `images`.
pub fn base_change(m: &FPModule, target: &QuotientRing, images: &[Poly]) -> Result<FPModule> {
    let rel = m.relations().map(|p| target.reduce(&p.substitute(images)));
    FPModule::new(target, m.num_gens(), Matrix::from_cols(m.num_gens(), rel.cols().to_vec()))
}
