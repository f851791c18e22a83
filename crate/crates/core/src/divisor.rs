//! Generalized divisors on an affine chart: a reflexive module `F` that is
//! free of rank one at the generic points, stored with its dual `I = F^∨`.

use crate::error::{Error, Result};
use crate::ideal::ideal_quotient;
use crate::local::{has_embedded_points, is_nonzerodivisor, rank_at, zerodivisor_witness};
use crate::module::{
    biduality_map, dual, localize_is_free_rank_one, FPModule, HomModule, IsoVerdict, Matrix, ModuleMap,
};
use crate::poly::{monomials_up_to, Poly};
use crate::primes::{ring_minimal_primes, PrimeRecord};
use crate::ring::{IdealRecord, QuotientRing};
use crate::syzygy::lift;

/// The submodule `(1/denominator) · (numerators)` of the total ring of fractions.
#[derive(Clone, Debug)]
pub struct FractionalIdealRecord {
    pub ring: QuotientRing,
    pub numerators: Vec<Poly>,
    pub denominator: Poly,
}

impl FractionalIdealRecord {
    pub fn new(ring: &QuotientRing, numerators: Vec<Poly>, denominator: Poly) -> Result<Self> {
        for p in numerators.iter().chain([&denominator]) {
            ring.ambient().check(p)?;
        }
        let denominator = ring.reduce(&denominator);
        if let Some(w) = zerodivisor_witness(&denominator, ring) {
            return Err(Error::Malformed(format!(
                "denominator {} is a zerodivisor (killed by {})",
                ring.show(&denominator),
                ring.show(&w)
            )));
        }
        let numerators = numerators.iter().map(|n| ring.reduce(n)).filter(|n| !n.is_zero()).collect();
        Ok(FractionalIdealRecord { ring: ring.clone(), numerators, denominator })
    }

    pub fn numerator_ideal(&self) -> IdealRecord {
        self.ring.ideal(self.numerators.clone()).expect("same ambient")
    }

    /// The module structure, via the isomorphism given by multiplying by the
    /// denominator.
    pub fn as_module(&self) -> FPModule {
        FPModule::from_ideal(&self.ring, &self.numerators)
    }

    /// `self ⊆ other` inside the total ring of fractions.
    pub fn is_subset_of(&self, other: &FractionalIdealRecord) -> bool {
        let rhs = self.ring.ideal(other.numerators.iter().map(|n| n.mul(&self.denominator)).collect()).expect("same ambient");
        self.numerators.iter().all(|n| rhs.contains(&n.mul(&other.denominator)))
    }

    pub fn is_integral(&self) -> bool {
        let d = self.ring.ideal(vec![self.denominator.clone()]).expect("same ambient");
        self.numerators.iter().all(|n| d.contains(n))
    }

    /// The ideal of `A` equal to `self`, when `self ⊆ A`.
    pub fn integral_ideal(&self) -> Option<IdealRecord> {
        let mut gens = Vec::new();
        for n in &self.numerators {
            let l = lift(&self.ring, 1, &[vec![self.denominator.clone()]], &[n.clone()])?;
            gens.push(self.ring.reduce(&l.coeffs[0]));
        }
        Some(self.ring.ideal(gens).expect("same ambient").canonical())
    }

    pub fn show(&self) -> String {
        let nums: Vec<String> = self.numerators.iter().map(|n| self.ring.show(n)).collect();
        let nums = if nums.is_empty() { "0".to_string() } else { nums.join(", ") };
        format!("(1/({})) * ({})", self.ring.show(&self.denominator), nums)
    }
}

/// How a divisor is realized inside the total ring of fractions.
#[derive(Clone, Debug)]
pub enum Embedding {
    /// Evaluation of `I = F^∨` at a section `s` of `F`.
    Section(Vec<Poly>),
    Fractional(FractionalIdealRecord),
}

#[derive(Clone, Debug)]
pub struct GeneralizedDivisor {
    pub ring: QuotientRing,
    pub module_f: FPModule,
    pub ideal_i: HomModule,
    pub generic_ranks: Vec<(PrimeRecord, bool)>,
    /// Matrix of the certified isomorphism `F -> F^∨∨`.
    pub biduality: Matrix,
    pub embedding: Option<Embedding>,
}

/// Certifies `F` as a generalized divisor: free of rank one at each minimal
/// prime and reflexive.
pub fn validate_divisor(f: &FPModule) -> Result<GeneralizedDivisor> {
    let ring = f.ring();
    let mut generic_ranks = Vec::new();
    for eta in ring_minimal_primes(ring)? {
        if !localize_is_free_rank_one(f, &eta) {
            return Err(Error::WrongGenericRank(eta.show()));
        }
        generic_ranks.push((eta, true));
    }
    let b = biduality_map(f);
    match b.map.iso_verdict() {
        IsoVerdict::Iso => {}
        IsoVerdict::NotInjective(v) => {
            return Err(Error::NotReflexive(format!("element {:?} dies in the bidual", show_vec(ring, &v))))
        }
        IsoVerdict::NotSurjective(i) => {
            return Err(Error::NotReflexive(format!("bidual generator {} is not in the image", i)))
        }
    }
    Ok(GeneralizedDivisor {
        ring: ring.clone(),
        module_f: f.clone(),
        ideal_i: b.dual,
        generic_ranks,
        biduality: b.map.matrix,
        embedding: None,
    })
}

fn show_vec(ring: &QuotientRing, v: &[Poly]) -> Vec<String> {
    v.iter().map(|p| ring.show(p)).collect()
}

impl GeneralizedDivisor {
    /// The divisor of a fractional ideal, embedded by the ideal itself.
    pub fn from_fractional(i: &FractionalIdealRecord) -> Result<Self> {
        let mut d = validate_divisor(&fractional_inverse(i)?.0.as_module())?;
        d.embedding = Some(Embedding::Fractional(i.clone()));
        Ok(d)
    }

    /// Image of evaluation at `s`: the ideal `(φ(s) : φ ∈ F^∨)`.
    pub fn evaluation_ideal(&self, s: &[Poly]) -> IdealRecord {
        let gens = self.evaluation_row(s);
        self.ring.ideal(gens).expect("same ambient").canonical()
    }

    fn evaluation_row(&self, s: &[Poly]) -> Vec<Poly> {
        self.ideal_i
            .generators
            .iter()
            .map(|g| {
                let row = g.row(0);
                self.ring.reduce(&row.iter().zip(s).fold(self.ring.zero(), |acc, (a, b)| acc.add(&a.mul(b))))
            })
            .collect()
    }

    /// `ev_s : F^∨ -> A`.
    pub fn evaluation_map(&self, s: &[Poly]) -> ModuleMap {
        let row = self.evaluation_row(s);
        let m = Matrix::from_rows(row.len(), vec![row]);
        ModuleMap::new(&self.ideal_i.module, &FPModule::free(&self.ring, 1), m).expect("evaluation is well defined")
    }
}

fn find_nonzerodivisor(ring: &QuotientRing, gens: &[Poly]) -> Option<Poly> {
    for g in gens {
        if is_nonzerodivisor(g, ring) {
            return Some(g.clone());
        }
    }
    let k = gens.len().min(6);
    let mut combos: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..k {
        combos = combos.into_iter().flat_map(|c| [0, 1, -1].map(|s| [c.clone(), vec![s]].concat())).collect();
    }
    combos.retain(|c| c.iter().filter(|&&s| s != 0).count() > 1);
    combos.sort_by_key(|c| (c.iter().filter(|&&s| s != 0).count(), c.iter().filter(|&&s| s < 0).count()));
    let field = ring.field();
    combos.into_iter().find_map(|signs| {
        let c = gens.iter().zip(&signs).fold(ring.zero(), |acc, (g, &s)| acc.add(&g.scale(&field.from_i64(s))));
        let c = ring.reduce(&c);
        (!c.is_zero() && is_nonzerodivisor(&c, ring)).then_some(c)
    })
}

/// `I^{-1} = { f : f I ⊆ A }` together with the canonical map
/// `I^{-1} -> Hom(I, A)` and its isomorphism verdict.
pub fn fractional_inverse(i: &FractionalIdealRecord) -> Result<(FractionalIdealRecord, ModuleMap)> {
    let ring = &i.ring;
    for eta in ring_minimal_primes(ring)? {
        if i.numerators.iter().all(|n| eta.contains(n)) {
            return Err(Error::Degenerate(eta.show()));
        }
    }
    let u = find_nonzerodivisor(ring, &i.numerators)
        .ok_or_else(|| Error::Degenerate("no nonzerodivisor among small combinations of the numerators".into()))?;
    let uu = ring.ideal(vec![u.clone()])?;
    let q = ideal_quotient(&uu, &i.numerator_ideal())?;
    let hs: Vec<Poly> = q.generators().iter().map(|h| ring.reduce(h)).filter(|h| !h.is_zero()).collect();
    let inv = FractionalIdealRecord::new(ring, hs.iter().map(|h| h.mul(&i.denominator)).collect(), u.clone())?;
    let source = FPModule::from_ideal(ring, &hs);
    let d = dual(&i.as_module());
    let mut cols = Vec::new();
    for h in &hs {
        let mut row = Vec::new();
        for n in &i.numerators {
            let l = lift(ring, 1, &[vec![u.clone()]], &[ring.reduce(&h.mul(n))])
                .ok_or_else(|| Error::Malformed("quotient element does not clear the denominator".into()))?;
            row.push(ring.reduce(&l.coeffs[0]));
        }
        let m = Matrix::from_rows(row.len(), vec![row]);
        cols.push(d.map_to_element(&m).ok_or_else(|| Error::NotWellDefined("multiplication map".into()))?);
    }
    let map = ModuleMap::new(&source, &d.module, Matrix::from_cols(d.module.num_gens(), cols))?;
    Ok((inv, map))
}

/// Coordinate vectors for bounded searches: each generator times monomials
/// of degree at most `bound` with coefficient `±1`, then sums and
/// differences of pairs of generators.
pub fn bounded_combinations(ring: &QuotientRing, gens: usize, bound: u32) -> Vec<Vec<Poly>> {
    let unit = |i: usize, c: Poly| {
        let mut v = vec![ring.zero(); gens];
        v[i] = c;
        v
    };
    let field = ring.field();
    let mut out = Vec::new();
    for i in 0..gens {
        out.push(unit(i, ring.one()));
    }
    for i in 0..gens {
        for j in i + 1..gens {
            for s in [1, -1] {
                let mut v = unit(i, ring.one());
                v[j] = ring.constant(s);
                out.push(v);
            }
        }
    }
    for m in monomials_up_to(ring.nvars(), bound) {
        if m.iter().all(|&e| e == 0) {
            continue;
        }
        let mono = ring.reduce(&Poly::monomial(field, m, field.one()));
        if mono.is_zero() {
            continue;
        }
        for i in 0..gens {
            out.push(unit(i, mono.clone()));
            out.push(unit(i, mono.neg()));
        }
    }
    out.dedup();
    out
}

/// An effective realization: the ideal `J ⊆ A` and how it was obtained.
#[derive(Clone, Debug)]
pub struct Effectivity {
    pub ideal: IdealRecord,
    pub embedding: Embedding,
}

/// Whether `D` is effective; when the divisor carries no embedding, the
/// evaluation maps at bounded sections of `F` are searched for an injective one.
pub fn is_effective(d: &GeneralizedDivisor, bound: u32) -> Option<Effectivity> {
    match &d.embedding {
        Some(Embedding::Fractional(fi)) => {
            fi.integral_ideal().map(|ideal| Effectivity { ideal, embedding: Embedding::Fractional(fi.clone()) })
        }
        Some(Embedding::Section(s)) => d
            .evaluation_map(s)
            .is_injective()
            .ok()
            .map(|_| Effectivity { ideal: d.evaluation_ideal(s), embedding: Embedding::Section(s.clone()) }),
        None => bounded_combinations(&d.ring, d.module_f.num_gens(), bound).into_iter().find_map(|s| {
            d.evaluation_map(&s)
                .is_injective()
                .ok()
                .map(|_| Effectivity { ideal: d.evaluation_ideal(&s), embedding: Embedding::Section(s) })
        }),
    }
}

/// The closed subscheme `V(J)` cut out by an effective divisor.
#[derive(Clone, Debug)]
pub struct Subscheme {
    pub ideal: IdealRecord,
    pub associated: Vec<PrimeRecord>,
}

pub fn effective_to_subscheme(d: &GeneralizedDivisor, bound: u32) -> Result<Subscheme> {
    let eff = is_effective(d, bound).ok_or_else(|| Error::Malformed("divisor is not effective".into()))?;
    let ring = &d.ring;
    let j = eff.ideal;
    if j.is_unit() {
        return Ok(Subscheme { ideal: j, associated: Vec::new() });
    }
    for eta in ring_minimal_primes(ring)? {
        if j.is_subset_of(&eta.ideal) {
            return Err(Error::Degenerate(eta.show()));
        }
    }
    let gens: Vec<Vec<Poly>> = j.generators().iter().map(|g| ring.reduce(g)).filter(|g| !g.is_zero()).map(|g| vec![g]).collect();
    let quotient = FPModule::coker(ring, Matrix::from_cols(1, gens))?;
    if let Some(w) = has_embedded_points(&quotient, None)? {
        return Err(Error::EmbeddedPoint(w.show()));
    }
    let associated = crate::local::associated_primes(&quotient, None)?;
    Ok(Subscheme { ideal: j, associated })
}

/// The first minimal prime at which `s` fails to generate `F`, if any.
pub fn degenerate_at(f: &FPModule, s: &[Poly]) -> Result<Option<PrimeRecord>> {
    let ring = f.ring();
    let mut rel = f.relations().clone();
    rel.push_col(s.to_vec());
    let coker = FPModule::coker(ring, rel)?;
    let ann = coker.annihilator();
    Ok(ring_minimal_primes(ring)?.into_iter().find(|eta| ann.is_subset_of(&eta.ideal)))
}

pub fn nondegenerate_section(f: &FPModule, s: &[Poly]) -> bool {
    matches!(degenerate_at(f, s), Ok(None))
}

/// The effective divisor of a nondegenerate section: same `F`, embedded by
/// evaluation at `s`.
pub fn section_to_effective(d: &GeneralizedDivisor, s: &[Poly]) -> Result<GeneralizedDivisor> {
    if let Some(eta) = degenerate_at(&d.module_f, s)? {
        return Err(Error::DegenerateSection(eta.show()));
    }
    let s: Vec<Poly> = s.iter().map(|p| d.ring.reduce(p)).collect();
    if d.evaluation_map(&s).is_injective().is_err() {
        return Err(Error::DegenerateSection("evaluation is not injective".into()));
    }
    let mut out = d.clone();
    out.embedding = Some(Embedding::Section(s));
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    Equivalent { forward: ModuleMap, backward: ModuleMap },
    Not(String),
    Unknown,
}

impl Equivalence {
    pub fn label(&self) -> &'static str {
        match self {
            Equivalence::Equivalent { .. } => "EQUIVALENT",
            Equivalence::Not(_) => "NOT",
            Equivalence::Unknown => "UNKNOWN",
        }
    }
}

/// Searches for mutually inverse maps `F1 <-> F2`; `NOT` requires a
/// Fitting-ideal invariant that separates the modules.
pub fn linear_equivalence(d1: &GeneralizedDivisor, d2: &GeneralizedDivisor, bound: u32, primes: &[PrimeRecord]) -> Equivalence {
    let (f1, f2) = (&d1.module_f, &d2.module_f);
    if f1 == f2 {
        return Equivalence::Equivalent { forward: ModuleMap::identity(f1), backward: ModuleMap::identity(f2) };
    }
    if let Some(why) = separating_invariant(f1, f2, primes) {
        return Equivalence::Not(why);
    }
    match find_isomorphism(f1, f2, bound) {
        Some((forward, backward)) => Equivalence::Equivalent { forward, backward },
        None => Equivalence::Unknown,
    }
}

/// A Fitting invariant that differs between the modules, if any.
pub fn separating_invariant(f1: &FPModule, f2: &FPModule, primes: &[PrimeRecord]) -> Option<String> {
    let top = f1.num_gens().max(f2.num_gens());
    for j in 0..=top {
        let (a, b) = (f1.fitting_ideal(j), f2.fitting_ideal(j));
        if a != b {
            return Some(format!("Fitt_{} differs: {} vs {}", j, a.show_basis(), b.show_basis()));
        }
    }
    for p in primes {
        let (a, b) = (rank_at(f1, p), rank_at(f2, p));
        if a != b {
            return Some(format!("local generator counts at {} differ: {} vs {}", p.show(), a, b));
        }
    }
    None
}

/// Bounded search over `Hom(F1, F2)` for an isomorphism and its verified inverse.
pub fn find_isomorphism(f1: &FPModule, f2: &FPModule, bound: u32) -> Option<(ModuleMap, ModuleMap)> {
    let h = crate::module::hom_module(f1, f2);
    for v in bounded_combinations(f1.ring(), h.module.num_gens(), bound) {
        let phi = h.element_to_map(&v);
        if !phi.is_iso() {
            continue;
        }
        let psi = phi.inverse()?;
        if psi.compose(&phi).equals(&ModuleMap::identity(f1)) && phi.compose(&psi).equals(&ModuleMap::identity(f2)) {
            return Some((phi, psi));
        }
    }
    None
}
