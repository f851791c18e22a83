//! Polynomial rings and their quotients.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::groebner::{ideal_basis, ideal_gb_from_basis, ModuleGb};
use crate::order::MonomialOrder;
use crate::poly::Poly;

/// Ambient polynomial ring `k[v1, ..., vn]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: Field,
    pub names: Vec<String>,
}

impl PolyRing {
    pub fn new(field: Field, names: &[&str]) -> Self {
        PolyRing { field, names: names.iter().map(|s| s.to_string()).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.field, self.nvars(), i)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constant(&self, c: i64) -> Poly {
        Poly::from_i64(self.field, self.nvars(), c)
    }

    pub fn coeff_constant(&self, c: Coeff) -> Poly {
        Poly::constant(self.field, self.nvars(), c)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.field, self.nvars())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.field, self.nvars())
    }

    pub fn check(&self, p: &Poly) -> Result<()> {
        if p.nvars() != self.nvars() || p.field() != self.field {
            return Err(Error::VariableMismatch(format!(
                "polynomial with {} variables over {} used in {}",
                p.nvars(),
                p.field(),
                self
            )));
        }
        Ok(())
    }

    pub fn show(&self, p: &Poly) -> String {
        p.to_text(&self.names, &MonomialOrder::Grevlex)
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.names.join(","))
    }
}

/// An ideal of an ambient polynomial ring with a lazily cached reduced
/// grevlex Gröbner basis.
#[derive(Clone, Debug)]
pub struct IdealRecord {
    ring: PolyRing,
    generators: Vec<Poly>,
    basis: OnceLock<Vec<Poly>>,
}

impl PartialEq for IdealRecord {
    /// Equality of ideals (not of generator lists).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.basis() == other.basis()
    }
}

impl IdealRecord {
    pub fn new(ring: &PolyRing, generators: Vec<Poly>) -> Result<Self> {
        for g in &generators {
            ring.check(g)?;
        }
        Ok(Self::new_unchecked(ring, generators))
    }

    pub(crate) fn new_unchecked(ring: &PolyRing, generators: Vec<Poly>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        IdealRecord { ring: ring.clone(), generators, basis: OnceLock::new() }
    }

    pub fn zero(ring: &PolyRing) -> Self {
        Self::new_unchecked(ring, Vec::new())
    }

    pub fn unit(ring: &PolyRing) -> Self {
        Self::new_unchecked(ring, vec![ring.one()])
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Reduced grevlex basis, computed once.
    pub fn basis(&self) -> &[Poly] {
        self.basis.get_or_init(|| {
            ideal_basis(self.ring.field, self.ring.nvars(), &MonomialOrder::Grevlex, &self.generators)
        })
    }

    pub fn gb(&self) -> ModuleGb {
        ideal_gb_from_basis(self.ring.field, self.ring.nvars(), &MonomialOrder::Grevlex, self.basis())
    }

    pub fn reduce(&self, f: &Poly) -> Poly {
        if self.generators.is_empty() {
            return f.clone();
        }
        self.gb().reduce(&[f.clone()]).pop().unwrap()
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.basis().is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.basis().iter().any(|g| g.is_constant() && !g.is_zero())
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &IdealRecord) -> bool {
        let gb = other.gb();
        self.generators.iter().all(|g| gb.contains(&[g.clone()]))
    }

    pub fn sum(&self, other: &IdealRecord) -> IdealRecord {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Self::new_unchecked(&self.ring, g)
    }

    pub fn with(&self, extra: &[Poly]) -> IdealRecord {
        let mut g = self.generators.clone();
        g.extend(extra.iter().cloned());
        Self::new_unchecked(&self.ring, g)
    }

    pub fn product(&self, other: &IdealRecord) -> IdealRecord {
        let mut g = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                g.push(a.mul(b));
            }
        }
        Self::new_unchecked(&self.ring, g)
    }

    /// The ideal generated by the reduced basis; a canonical generator list.
    pub fn canonical(&self) -> IdealRecord {
        Self::new_unchecked(&self.ring, self.basis().to_vec())
    }

    pub fn show(&self) -> String {
        show_list(&self.ring, &self.generators)
    }

    pub fn show_basis(&self) -> String {
        show_list(&self.ring, self.basis())
    }
}

fn show_list(ring: &PolyRing, gens: &[Poly]) -> String {
    if gens.is_empty() {
        return "(0)".into();
    }
    let parts: Vec<String> = gens.iter().map(|g| ring.show(g)).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug)]
struct RingInner {
    ambient: PolyRing,
    relations: IdealRecord,
}

/// `k[v1..vn] / I` with `I` proper.
#[derive(Clone, Debug)]
pub struct QuotientRing(Arc<RingInner>);

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ambient == other.0.ambient && self.0.relations == other.0.relations)
    }
}

impl QuotientRing {
    pub fn new(ambient: PolyRing, relations: Vec<Poly>) -> Result<Self> {
        let relations = IdealRecord::new(&ambient, relations)?;
        if relations.is_unit() {
            return Err(Error::ZeroRing);
        }
        let relations = relations.canonical();
        Ok(QuotientRing(Arc::new(RingInner { ambient, relations })))
    }

    pub fn polynomial(field: Field, names: &[&str]) -> Self {
        Self::new(PolyRing::new(field, names), Vec::new()).expect("polynomial ring is nonzero")
    }

    pub fn ambient(&self) -> &PolyRing {
        &self.0.ambient
    }

    pub fn relations(&self) -> &IdealRecord {
        &self.0.relations
    }

    pub fn relation_basis(&self) -> &[Poly] {
        self.0.relations.basis()
    }

    pub fn field(&self) -> Field {
        self.0.ambient.field
    }

    pub fn nvars(&self) -> usize {
        self.0.ambient.nvars()
    }

    pub fn names(&self) -> &[String] {
        &self.0.ambient.names
    }

    pub fn var(&self, i: usize) -> Poly {
        self.0.ambient.var(i)
    }

    pub fn var_by_name(&self, name: &str) -> Option<Poly> {
        self.0.ambient.var_index(name).map(|i| self.var(i))
    }

    pub fn constant(&self, c: i64) -> Poly {
        self.0.ambient.constant(c)
    }

    pub fn zero(&self) -> Poly {
        self.0.ambient.zero()
    }

    pub fn one(&self) -> Poly {
        self.0.ambient.one()
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.0.relations.is_zero()
    }

    /// Canonical representative modulo the relations.
    pub fn reduce(&self, f: &Poly) -> Poly {
        self.0.relations.reduce(f)
    }

    pub fn is_zero(&self, f: &Poly) -> bool {
        self.0.relations.contains(f)
    }

    pub fn eq_elems(&self, a: &Poly, b: &Poly) -> bool {
        self.is_zero(&a.sub(b))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b))
    }

    /// An ideal of this ring, lifted to the ambient ring (relations included).
    pub fn ideal(&self, gens: Vec<Poly>) -> Result<IdealRecord> {
        let id = IdealRecord::new(self.ambient(), gens)?;
        Ok(id.sum(self.relations()))
    }

    pub fn show(&self, f: &Poly) -> String {
        self.0.ambient.show(f)
    }
}

impl fmt::Display for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial_ring() {
            write!(f, "{}", self.0.ambient)
        } else {
            write!(f, "{} / {}", self.0.ambient, self.0.relations.show())
        }
    }
}
