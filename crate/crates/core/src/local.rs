//! Invariants of localizations at primes, computed without forming rings of
//! fractions: every local test reduces to a global computation followed by
//! a containment check against the prime.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ideal::{krull_dimension, max_independent_set, quotient_by_element};
use crate::module::{determinant, ext, for_each_subset, hom_module, FPModule, Matrix};
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::primes::{minimal_primes, ring_minimal_primes, PrimeRecord};
use crate::ring::{IdealRecord, QuotientRing};

fn check_prime(ring: &QuotientRing, p: &PrimeRecord) -> Result<()> {
    if p.ideal.ring() != ring.ambient() {
        return Err(Error::AmbientMismatch(format!("prime {} is not in {}", p.show(), ring)));
    }
    if !ring.relations().is_subset_of(&p.ideal) {
        return Err(Error::Malformed(format!("prime {} does not contain the ring relations", p.show())));
    }
    Ok(())
}

/// An element `b ≠ 0` with `a b = 0`, if any.
pub fn zerodivisor_witness(a: &Poly, ring: &QuotientRing) -> Option<Poly> {
    let ann = quotient_by_element(ring.relations(), a);
    ann.generators().iter().map(|g| ring.reduce(g)).find(|g| !g.is_zero())
}

pub fn is_nonzerodivisor(a: &Poly, ring: &QuotientRing) -> bool {
    zerodivisor_witness(a, ring).is_none()
}

/// `dim A_p`, using that affine algebras are catenary.
pub fn local_dim(ring: &QuotientRing, p: &PrimeRecord) -> Result<usize> {
    check_prime(ring, p)?;
    let dp = krull_dimension(&p.ideal)?;
    let mut best = None;
    for q in ring_minimal_primes(ring)? {
        if q.is_subset_of(p) {
            let d = krull_dimension(&q.ideal)? - dp;
            best = Some(best.map_or(d, |b: usize| b.max(d)));
        }
    }
    best.ok_or_else(|| Error::Malformed(format!("{} contains no minimal prime of {}", p.show(), ring)))
}

/// `A / p` as a cyclic module.
pub fn residue_module(ring: &QuotientRing, p: &PrimeRecord) -> FPModule {
    let gens: Vec<Vec<Poly>> =
        p.ideal.generators().iter().map(|g| ring.reduce(g)).filter(|g| !g.is_zero()).map(|g| vec![g]).collect();
    FPModule::coker(ring, Matrix::from_cols(1, gens)).expect("single row")
}

/// Whether `E_p ≠ 0`, i.e. `Ann(E) ⊆ p`.
pub fn localizes_nonzero(e: &FPModule, p: &PrimeRecord) -> bool {
    !e.is_zero() && e.annihilator().is_subset_of(&p.ideal)
}

/// `dim_{κ(p)} (E ⊗ κ(p))`: the least `j` with `Fitt_j(E) ⊄ p`.
pub fn rank_at(e: &FPModule, p: &PrimeRecord) -> usize {
    (0..=e.num_gens()).find(|&j| e.fitting_minor_outside(j, p).is_some()).unwrap_or(e.num_gens())
}

/// `depth M_p`, as the first `i` with `Ext^i(A/p, M)_p ≠ 0`.
pub fn local_depth(m: &FPModule, p: &PrimeRecord) -> Result<usize> {
    let ring = m.ring();
    check_prime(ring, p)?;
    if m.is_zero() || !m.annihilator().is_subset_of(&p.ideal) {
        return Err(Error::ZeroLocalization(p.show()));
    }
    let n = local_dim(ring, p)?;
    let k = residue_module(ring, p);
    for i in 0..=n {
        if localizes_nonzero(&ext(i, &k, m), p) {
            return Ok(i);
        }
    }
    Ok(n)
}

/// Whether `A_p` is Gorenstein: `Ext^i(κ, A_p)` vanishes below the
/// dimension and is one-dimensional in it.
pub fn is_gorenstein_at(ring: &QuotientRing, p: &PrimeRecord) -> Result<bool> {
    check_prime(ring, p)?;
    let n = local_dim(ring, p)?;
    let k = residue_module(ring, p);
    let a = FPModule::free(ring, 1);
    for i in 0..n {
        if localizes_nonzero(&ext(i, &k, &a), p) {
            return Ok(false);
        }
    }
    Ok(rank_at(&ext(n, &k, &a), p) == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    /// Gorenstein in codimension at most `r`.
    Gr,
    /// `depth M_p ≥ min(r, dim A_p)` everywhere.
    Sr,
}

impl ConditionKind {
    pub fn label(&self, r: usize) -> String {
        match self {
            ConditionKind::Gr => format!("G{}", r),
            ConditionKind::Sr => format!("S{}", r),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeCheck {
    pub prime: PrimeRecord,
    pub dim: usize,
    /// Depth at the prime (`S_r` only).
    pub depth: Option<usize>,
    /// Gorenstein verdict (`G_r` only, and only when `dim ≤ r`).
    pub gorenstein: Option<bool>,
    pub ok: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Partial(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail(_) => "FAIL",
            Verdict::Partial(_) => "PARTIAL",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub subject: String,
    pub kind: ConditionKind,
    pub r: usize,
    pub checks: Vec<PrimeCheck>,
    pub verdict: Verdict,
}

pub enum Subject<'a> {
    Ring(&'a QuotientRing),
    Module(&'a FPModule),
}

impl Subject<'_> {
    fn ring(&self) -> &QuotientRing {
        match self {
            Subject::Ring(r) => r,
            Subject::Module(m) => m.ring(),
        }
    }
}

fn check_one(subject: &Subject, kind: ConditionKind, r: usize, p: &PrimeRecord) -> PrimeCheck {
    let ring = subject.ring();
    let dim = match local_dim(ring, p) {
        Ok(d) => d,
        Err(e) => {
            return PrimeCheck { prime: p.clone(), dim: 0, depth: None, gorenstein: None, ok: false, note: Some(e.to_string()) }
        }
    };
    match kind {
        ConditionKind::Gr => {
            if dim > r {
                return PrimeCheck { prime: p.clone(), dim, depth: None, gorenstein: None, ok: true, note: Some("codimension above r".into()) };
            }
            match is_gorenstein_at(ring, p) {
                Ok(g) => PrimeCheck { prime: p.clone(), dim, depth: None, gorenstein: Some(g), ok: g, note: None },
                Err(e) => PrimeCheck { prime: p.clone(), dim, depth: None, gorenstein: None, ok: false, note: Some(e.to_string()) },
            }
        }
        ConditionKind::Sr => {
            let m = match subject {
                Subject::Ring(ring) => FPModule::free(ring, 1),
                Subject::Module(m) => (*m).clone(),
            };
            match local_depth(&m, p) {
                Ok(depth) => PrimeCheck { prime: p.clone(), dim, depth: Some(depth), gorenstein: None, ok: depth >= r.min(dim), note: None },
                Err(Error::ZeroLocalization(_)) => PrimeCheck {
                    prime: p.clone(),
                    dim,
                    depth: None,
                    gorenstein: None,
                    ok: true,
                    note: Some("module vanishes at this prime".into()),
                },
                Err(e) => PrimeCheck { prime: p.clone(), dim, depth: None, gorenstein: None, ok: false, note: Some(e.to_string()) },
            }
        }
    }
}

/// Ideal generated by the relations and the `c x c` minors of their Jacobian.
pub fn jacobian_ideal(ring: &QuotientRing, c: usize) -> IdealRecord {
    let amb = ring.ambient();
    let free = QuotientRing::new(amb.clone(), vec![]).expect("polynomial ring");
    let gens = ring.relation_basis().to_vec();
    let n = ring.nvars();
    let jac: Vec<Vec<Poly>> = gens.iter().map(|g| (0..n).map(|v| g.derivative(v)).collect()).collect();
    let mut minors = Vec::new();
    for_each_subset(gens.len(), c, &mut |rows| {
        for_each_subset(n, c, &mut |cols| {
            let sub: Vec<Vec<Poly>> = rows.iter().map(|&r| cols.iter().map(|&v| jac[r][v].clone()).collect()).collect();
            let d = determinant(&free, &sub);
            if !d.is_zero() {
                minors.push(d);
            }
            false
        });
        false
    });
    ring.relations().with(&minors).canonical()
}

/// Certifies that `primes` contains every prime at which the ring can fail
/// to be regular: the ring is equidimensional, every minimal prime is
/// listed, and the Jacobian singular locus is a finite set of listed
/// closed points. Returns the reason when certification is not possible.
pub fn certify_exhaustive(ring: &QuotientRing, primes: &[PrimeRecord]) -> std::result::Result<(), String> {
    let mins = ring_minimal_primes(ring).map_err(|e| e.to_string())?;
    let d = krull_dimension(ring.relations()).map_err(|e| e.to_string())?;
    for q in &mins {
        if krull_dimension(&q.ideal).map_err(|e| e.to_string())? != d {
            return Err(format!("minimal prime {} has smaller dimension", q.show()));
        }
        if !primes.contains(q) {
            return Err(format!("minimal prime {} not listed", q.show()));
        }
    }
    let c = ring.nvars() - d;
    let j = jacobian_ideal(ring, c);
    if j.is_unit() {
        return Ok(());
    }
    let sing = minimal_primes(&j).map_err(|e| format!("singular locus: {}", e))?;
    for s in &sing {
        if krull_dimension(&s.ideal).map_err(|e| e.to_string())? != 0 {
            return Err(format!("singular stratum {} is not a closed point", s.show()));
        }
        if !primes.contains(s) {
            return Err(format!("singular point {} not listed", s.show()));
        }
    }
    Ok(())
}

/// Checks `G_r` or `S_r` at each listed prime. The verdict is `PASS` only
/// when the primes are certified to cover every stratum that could fail.
pub fn condition_report(subject: Subject, kind: ConditionKind, r: usize, primes: &[PrimeRecord]) -> ConditionReport {
    let ring = subject.ring().clone();
    let name = match &subject {
        Subject::Ring(ring) => ring.to_string(),
        Subject::Module(m) => m.show(),
    };
    let checks: Vec<PrimeCheck> = primes.par_iter().map(|p| check_one(&subject, kind, r, p)).collect();
    let verdict = if let Some(bad) = checks.iter().find(|c| !c.ok) {
        Verdict::Fail(bad.prime.show())
    } else {
        match subject {
            Subject::Module(_) => Verdict::Partial("primes outside the list are not covered for modules".into()),
            Subject::Ring(_) => match certify_exhaustive(&ring, primes) {
                Ok(()) => Verdict::Pass,
                Err(why) => Verdict::Partial(why),
            },
        }
    };
    ConditionReport { subject: name, kind, r, checks, verdict }
}

/// Associated primes of `M`, each candidate certified by
/// `Hom(A/p, M)_p ≠ 0`.
pub fn associated_primes(m: &FPModule, candidates: Option<&[PrimeRecord]>) -> Result<Vec<PrimeRecord>> {
    let ring = m.ring();
    let cands: Vec<PrimeRecord> = match candidates {
        Some(c) => c.to_vec(),
        None => generate_candidates(m)?,
    };
    let mut out = Vec::new();
    for p in cands {
        check_prime(ring, &p)?;
        let h = hom_module(&residue_module(ring, &p), m).module;
        if localizes_nonzero(&h, &p) && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

fn generate_candidates(m: &FPModule) -> Result<Vec<PrimeRecord>> {
    let ring = m.ring();
    let amb = ring.ambient();
    let p = QuotientRing::new(amb.clone(), vec![])?;
    let mut rel = m.relations().clone();
    for g in ring.relation_basis() {
        for i in 0..m.num_gens() {
            let mut v = m.zero_vector();
            v[i] = g.clone();
            rel.push_col(v);
        }
    }
    let over_p = FPModule::coker(&p, rel)?;
    let free = FPModule::free(&p, 1);
    let mut out: Vec<PrimeRecord> = Vec::new();
    for i in 0..=amb.nvars() {
        let e = ext(i, &over_p, &free);
        if e.is_zero() {
            continue;
        }
        let ann = e.annihilator();
        if ann.is_unit() {
            continue;
        }
        for q in minimal_primes(&ann)? {
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// An associated prime strictly containing another one, if any.
pub fn has_embedded_points(m: &FPModule, candidates: Option<&[PrimeRecord]>) -> Result<Option<PrimeRecord>> {
    let ass = associated_primes(m, candidates)?;
    Ok(ass.iter().find(|p| ass.iter().any(|q| q != *p && q.is_subset_of(p))).cloned())
}

/// Presentation of `A_η` at a minimal prime `η`.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalDescriptor {
    /// `A_η` is the residue field `k(T)`.
    ResidueField { field: String, transcendentals: Vec<String> },
    /// `A_η` is Artinian local: `k(T)[rest] / (relations)` localized at `η`.
    Artinian { field: String, transcendentals: Vec<String>, rest: Vec<String>, relations: String, prime: String },
}

impl LocalDescriptor {
    pub fn show(&self) -> String {
        match self {
            LocalDescriptor::ResidueField { field, transcendentals } => {
                format!("field {}({})", field, transcendentals.join(","))
            }
            LocalDescriptor::Artinian { field, transcendentals, rest, relations, prime } => format!(
                "local {}({})[{}]/{} at {}",
                field,
                transcendentals.join(","),
                rest.join(","),
                relations,
                prime
            ),
        }
    }
}

/// One entry per minimal prime `η` describing `A_η`; their product is the
/// total ring of fractions when `A` has no embedded primes.
pub fn total_quotient_decomposition(ring: &QuotientRing) -> Result<Vec<(PrimeRecord, LocalDescriptor)>> {
    let mut out = Vec::new();
    let field = match ring.field().characteristic() {
        0 => "Q".to_string(),
        p => format!("F{}", p),
    };
    for eta in ring_minimal_primes(ring)? {
        let leads: Vec<Vec<u32>> =
            eta.ideal.basis().iter().map(|g| g.leading_monomial(&MonomialOrder::Grevlex).unwrap().clone()).collect();
        let t = max_independent_set(ring.nvars(), &leads);
        let names = ring.names();
        let transcendentals: Vec<String> = t.iter().map(|&i| names[i].clone()).collect();
        let collapses = eta
            .ideal
            .generators()
            .iter()
            .map(|g| ring.reduce(g))
            .filter(|g| !g.is_zero())
            .all(|g| crate::module::annihilator_witness_outside(ring, &g, &eta).is_some());
        let d = if collapses {
            LocalDescriptor::ResidueField { field: field.clone(), transcendentals }
        } else {
            LocalDescriptor::Artinian {
                field: field.clone(),
                transcendentals,
                rest: (0..ring.nvars()).filter(|i| !t.contains(i)).map(|i| names[i].clone()).collect(),
                relations: ring.relations().show_basis(),
                prime: eta.show(),
            }
        };
        out.push((eta, d));
    }
    Ok(out)
}
