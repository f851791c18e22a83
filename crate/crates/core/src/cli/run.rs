//! Executes assertions against a parsed document.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::divisor::{
    effective_to_subscheme, is_effective, linear_equivalence, section_to_effective, validate_divisor, Equivalence,
    GeneralizedDivisor,
};
use crate::error::{Error, Result};
use crate::etale::{
    certify_etale, compare_quotient_saturation, presentation_jacobian, hom_pullback_check, literal_image_membership, nzd_transport,
    reflexive_pullback_check, verify_local_formulas, EtaleCertificate, EtaleScope, ImageMembership, SaturationVerdict,
};
use crate::linalg::rank;
use crate::local::{
    condition_report, has_embedded_points, is_gorenstein_at, zerodivisor_witness, ConditionKind, Subject, Verdict as CondVerdict,
};
use crate::module::{biduality_map, localize_is_free_rank_one, FPModule, IsoVerdict};
use crate::poly::Poly;
use crate::ring::{IdealRecord, QuotientRing};
use crate::stack::{
    check_cocycle, descent_check, invariant_sections, section_to_stack_effective, stack_effective_to_substack,
    validate_stack_divisor, ChartFamily, DescentEdge, EdgeVerdict, StackDivisor,
};

use super::cert;
use super::document::{Assertion, Check, DivisorSource, Document, Entity, StackSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
    Error,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unknown => "UNKNOWN",
            Verdict::Error => "ERROR",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Verdict::Pass, Verdict::Fail, Verdict::Unknown, Verdict::Error].into_iter().find(|v| v.label() == s)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Default bound for bounded searches, when an assertion names none.
    pub bound: Option<u32>,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub check: String,
    pub assertion: String,
    pub verdict: Verdict,
    pub detail: String,
    pub certificates: Vec<Value>,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
    certs: Vec<Value>,
}

fn outcome(verdict: Verdict, detail: impl Into<String>) -> Outcome {
    Outcome { verdict, detail: detail.into(), certs: Vec::new() }
}

impl Outcome {
    fn with(mut self, c: Option<Value>) -> Self {
        self.certs.extend(c);
        self
    }
}

const DEFAULT_BOUND: u32 = 3;

struct Ctx<'a> {
    doc: &'a Document,
    opts: &'a RunOptions,
}

fn show_list(ring: &QuotientRing, ps: &[Poly]) -> String {
    ps.iter().map(|p| ring.show(p)).collect::<Vec<_>>().join(", ")
}

/// Generators of an ideal with the ring relations dropped.
fn show_ideal(ring: &QuotientRing, i: &IdealRecord) -> String {
    let gens: Vec<Poly> = i.basis().iter().map(|g| ring.reduce(g)).filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        "(0)".into()
    } else {
        format!("({})", show_list(ring, &gens))
    }
}

fn iso_text(ring: &QuotientRing, v: &IsoVerdict) -> String {
    match v {
        IsoVerdict::Iso => "isomorphism".into(),
        IsoVerdict::NotInjective(k) => format!("kernel element [{}]", show_list(ring, k)),
        IsoVerdict::NotSurjective(i) => format!("target generator {} not in the image", i),
    }
}

fn relation_cols(m: &FPModule) -> Vec<Vec<Poly>> {
    m.relations().cols().to_vec()
}

impl Ctx<'_> {
    fn bound(&self, b: Option<u32>, default: u32) -> u32 {
        b.or(self.opts.bound).unwrap_or(default)
    }

    fn divisor(&self, name: &str) -> Result<GeneralizedDivisor> {
        match self.doc.get(name) {
            Some(Entity::Divisor { source: DivisorSource::Module(m), .. }) => validate_divisor(self.doc.module(m)?),
            Some(Entity::Divisor { source: DivisorSource::Fractional(f), .. }) => GeneralizedDivisor::from_fractional(f),
            _ => Err(Error::Malformed(format!("{} is not a divisor", name))),
        }
    }

    fn stack_divisor(&self, name: &str) -> Result<StackDivisor> {
        match self.doc.get(name) {
            Some(Entity::StackDivisor { source: StackSource::Equivariant(e), .. }) => validate_stack_divisor(self.doc.equivariant(e)?),
            Some(Entity::StackDivisor { source: StackSource::Invariant(i), action }) => {
                let groupoid = match self.doc.get(action) {
                    Some(Entity::Action { groupoid, .. }) => groupoid,
                    _ => return Err(Error::Malformed(format!("{} is not an action", action))),
                };
                let ideal = match self.doc.get(i) {
                    Some(Entity::Ideal { ideal, .. }) => ideal,
                    _ => return Err(Error::Malformed(format!("{} is not an ideal", i))),
                };
                StackDivisor::from_invariant_ideal(groupoid, ideal)
            }
            _ => Err(Error::Malformed(format!("{} is not a stack divisor", name))),
        }
    }

    fn etale(&self, name: &str, primes: &[String]) -> Result<(String, EtaleCertificate)> {
        match self.doc.get(name) {
            Some(Entity::Etale { map, presentation, jacobian }) => {
                let ps = self.doc.primes(primes)?;
                let f = self.doc.map(map)?;
                let tname = self.doc.ring_of(map)?.0;
                let c = certify_etale(f, presentation, jacobian.as_ref(), if ps.is_empty() { None } else { Some(&ps) })?;
                Ok((tname, c))
            }
            _ => Err(Error::Malformed(format!("{} is not an etale presentation", name))),
        }
    }

    /// Certificates that the jacobian vanishes at the listed primes, or is
    /// not a unit when no primes were listed.
    fn not_etale(&self, etale: &str, primes: &[String], w: &[String]) -> Result<Outcome> {
        let (map, presentation) = match self.doc.get(etale) {
            Some(Entity::Etale { map, presentation, .. }) => (map, presentation),
            _ => return Err(Error::Malformed(format!("{} is not an etale presentation", etale))),
        };
        let f = self.doc.map(map)?;
        let (tname, ring) = self.doc.ring_of(map)?;
        let (det, _) = presentation_jacobian(f, presentation)?;
        let mut o = outcome(Verdict::Fail, format!("not etale at {}", w.join(" ")));
        if primes.is_empty() {
            o = o.with(cert::non_membership(&tname, ring, &ring.ideal(vec![det])?, &ring.one()));
        } else {
            for q in self.doc.primes(primes)? {
                if q.contains(&det) {
                    let cols: Vec<Vec<Poly>> = q.ideal.generators().iter().map(|g| vec![g.clone()]).collect();
                    o = o.with(cert::membership(&tname, ring, 1, &cols, &[det.clone()]));
                }
            }
        }
        Ok(o)
    }

    fn run(&self, a: &Assertion) -> Outcome {
        match self.check(&a.check) {
            Ok(o) => o,
            Err(e) => outcome(Verdict::Error, e.to_string()),
        }
    }

    fn check(&self, c: &Check) -> Result<Outcome> {
        let doc = self.doc;
        Ok(match c {
            Check::Member { ideal, f } => {
                let (rname, ring) = doc.ring_of(ideal)?;
                let id = match doc.get(ideal) {
                    Some(Entity::Ideal { ideal, .. }) => ideal.clone(),
                    Some(Entity::Prime { prime, .. }) => prime.ideal.clone(),
                    _ => unreachable!(),
                };
                if id.contains(f) {
                    let cols: Vec<Vec<Poly>> = id.generators().iter().map(|g| vec![g.clone()]).collect();
                    outcome(Verdict::Pass, format!("{} in {}", ring.show(f), ideal)).with(cert::membership(&rname, ring, 1, &cols, &[f.clone()]))
                } else {
                    outcome(Verdict::Fail, format!("remainder {}", ring.show(&id.reduce(f)))).with(cert::non_membership(&rname, ring, &id, f))
                }
            }
            Check::Reflexive { module } => {
                let m = doc.module(module)?;
                let b = biduality_map(m);
                match b.map.iso_verdict() {
                    IsoVerdict::Iso => outcome(Verdict::Pass, "biduality map is an isomorphism")
                        .with(Some(cert::recomputed(json!({"biduality": b.map.matrix.show(m.ring())})))),
                    IsoVerdict::NotInjective(v) => outcome(Verdict::Fail, format!("biduality kernel element [{}]", show_list(m.ring(), &v))),
                    IsoVerdict::NotSurjective(i) => {
                        outcome(Verdict::Fail, format!("cokernel witness: bidual generator {} is not in the image", i))
                    }
                }
            }
            Check::FreeRankOne { module, prime } => {
                let p = doc.prime(prime)?;
                let m = doc.module(module)?;
                let (rname, ring) = doc.ring_of(module)?;
                if localize_is_free_rank_one(m, p) {
                    let minor = m.fitting_minor_outside(1, p);
                    outcome(Verdict::Pass, format!("free of rank 1 at {}", p.show()))
                        .with(minor.and_then(|g| cert::non_membership(&rname, ring, &p.ideal, &g)))
                } else {
                    outcome(Verdict::Fail, format!("not free of rank 1 at {}", p.show()))
                        .with(Some(cert::recomputed(json!({ "fitting_0": m.fitting_ideal(0).show_basis(), "fitting_1": m.fitting_ideal(1).show_basis() }))))
                }
            }
            Check::Nzd { ring: rname, f } => {
                let ring = doc.ring(rname)?;
                match zerodivisor_witness(f, ring) {
                    None => outcome(Verdict::Pass, format!("{} is a nonzerodivisor", ring.show(f)))
                        .with(Some(cert::recomputed(json!({ "annihilator": "(0)" })))),
                    Some(w) => outcome(Verdict::Fail, format!("killed by {}", ring.show(&w)))
                        .with(cert::membership(rname, ring, 1, &[], &[f.mul(&w)]))
                        .with(cert::non_membership(rname, ring, ring.relations(), &w)),
                }
            }
            Check::Gorenstein { ring, prime } => {
                let p = doc.prime(prime)?;
                if is_gorenstein_at(doc.ring(ring)?, p)? {
                    outcome(Verdict::Pass, format!("Gorenstein at {}", p.show()))
                } else {
                    outcome(Verdict::Fail, format!("not Gorenstein at {}", p.show()))
                }
            }
            Check::Condition { serre, subject, r, primes } => {
                let ps = doc.primes(primes)?;
                let kind = if *serre { ConditionKind::Sr } else { ConditionKind::Gr };
                let rep = match doc.get(subject) {
                    Some(Entity::Ring(ring)) => condition_report(Subject::Ring(ring), kind, *r, &ps),
                    _ => condition_report(Subject::Module(doc.module(subject)?), kind, *r, &ps),
                };
                let per: Vec<String> = rep
                    .checks
                    .iter()
                    .map(|c| {
                        let mut s = format!("{} dim {}", c.prime.show(), c.dim);
                        if let Some(d) = c.depth {
                            s.push_str(&format!(" depth {}", d));
                        }
                        if let Some(g) = c.gorenstein {
                            s.push_str(if g { " gorenstein" } else { " not-gorenstein" });
                        }
                        s
                    })
                    .collect();
                let label = kind.label(*r);
                let (v, note) = match &rep.verdict {
                    CondVerdict::Pass => (Verdict::Pass, String::new()),
                    CondVerdict::Fail(w) => (Verdict::Fail, format!("; fails at {}", w)),
                    CondVerdict::Partial(w) => (Verdict::Unknown, format!("; partial: {}", w)),
                };
                let detail = format!("{} {}{}", label, per.join("; "), note);
                outcome(v, detail.clone()).with(Some(cert::recomputed(json!({ "primes": per }))))
            }
            Check::Embedded { subject } => {
                let m = match doc.get(subject) {
                    Some(Entity::Ring(ring)) => FPModule::free(ring, 1),
                    _ => doc.module(subject)?.clone(),
                };
                match has_embedded_points(&m, None)? {
                    Some(p) => outcome(Verdict::Pass, format!("embedded point {}", p.show())),
                    None => outcome(Verdict::Fail, "no embedded points"),
                }
            }
            Check::Etale { etale, primes } => match self.etale(etale, primes) {
                Ok((tname, c)) => {
                    let ring = &c.map.target;
                    let jac = ring.show(&c.jacobian_det);
                    match &c.scope {
                        EtaleScope::Global => outcome(Verdict::Pass, format!("GLOBAL jacobian {}", jac))
                            .with(cert::membership(&tname, ring, 1, &[vec![c.jacobian_det.clone()]], &[ring.one()])),
                        EtaleScope::AtPrimes(ps) => {
                            let names: Vec<String> = ps.iter().map(|p| p.show()).collect();
                            let mut o = outcome(Verdict::Pass, format!("AT_PRIMES {} jacobian {}", names.join(" "), jac));
                            for p in ps {
                                o = o.with(cert::non_membership(&tname, ring, &p.ideal, &c.jacobian_det));
                            }
                            o
                        }
                    }
                    .with(Some(cert::recomputed(json!({ "inverse_images": show_list(ring, &c.inverse_images) }))))
                }
                Err(Error::NotEtaleAt(w)) => self.not_etale(etale, primes, &w)?,
                Err(e) => return Err(e),
            },
            Check::LocalFormulas { etale, primes } => {
                let (_, c) = self.etale(etale, primes)?;
                let mut parts = Vec::new();
                let mut ok = true;
                for q in doc.primes(primes)? {
                    let r = verify_local_formulas(&c, &q)?;
                    ok &= r.pass();
                    parts.push(format!(
                        "q={} p={} dim {}={} depth {}={}",
                        r.q.show(),
                        r.p.show(),
                        r.dim_target,
                        r.dim_source,
                        r.depth_target,
                        r.depth_source
                    ));
                }
                let v = if ok { Verdict::Pass } else { Verdict::Fail };
                outcome(v, parts.join("; ")).with(Some(cert::recomputed(json!({ "formulas": parts }))))
            }
            Check::NzdTransport { map, f } => {
                let m = doc.map(map)?;
                let (tname, target) = doc.ring_of(map)?;
                let t = nzd_transport(m, f)?;
                match &t.non_flat_witness {
                    None => outcome(Verdict::Pass, format!("image {} is a nonzerodivisor", target.show(&t.image))),
                    Some(w) => outcome(Verdict::Fail, format!("NonFlatWitness: image {} killed by {}", target.show(&t.image), target.show(w)))
                        .with(cert::membership(&tname, target, 1, &[], &[t.image.mul(w)])),
                }
            }
            Check::Image { map, f, bound } => {
                let m = doc.map(map)?;
                let (tname, target) = doc.ring_of(map)?;
                let b = self.bound(*bound, m.default_degree_bound());
                match literal_image_membership(f, m, b) {
                    ImageMembership::InImage(pre) => {
                        let diff = m.apply(&pre).sub(f);
                        outcome(Verdict::Pass, format!("IN_IMAGE preimage {}", m.source.show(&pre)))
                            .with(cert::membership(&tname, target, 1, &[], &[diff]))
                    }
                    ImageMembership::NotInImage(ci) => {
                        outcome(Verdict::Fail, format!("NOT_IN_IMAGE at degree {}", ci.degree)).with(Some(cert::functional(map, &tname, target, f, &ci)))
                    }
                }
            }
            Check::Saturation { map, prime, bound, extra } => {
                let m = doc.map(map)?;
                let (tname, target) = doc.ring_of(map)?;
                let q = doc.prime(prime)?;
                let b = self.bound(*bound, DEFAULT_BOUND);
                match compare_quotient_saturation(m, q, b, extra) {
                    SaturationVerdict::Equal(ws) => {
                        let txt: Vec<String> = ws
                            .iter()
                            .map(|w| format!("f({}) = ({})*({}) with {} a unit at {}", m.source.show(&w.b), target.show(&w.a), target.show(&w.c), target.show(&w.c), q.show()))
                            .collect();
                        let mut o = outcome(Verdict::Pass, format!("EQUAL {}", txt.join("; ")));
                        for w in &ws {
                            o = o
                                .with(cert::membership(&tname, target, 1, &[], &[m.apply(&w.b).sub(&w.a.mul(&w.c))]))
                                .with(cert::non_membership(&tname, target, &q.ideal, &w.c));
                        }
                        o
                    }
                    SaturationVerdict::Distinct { b, killer } => outcome(
                        Verdict::Fail,
                        format!("DISTINCT f({}) killed by {}", m.source.show(&b), target.show(&killer)),
                    )
                    .with(cert::membership(&tname, target, 1, &[], &[m.apply(&b).mul(&killer)])),
                    SaturationVerdict::Unknown(v) => {
                        outcome(Verdict::Unknown, format!("UNKNOWN bound {} exhausted on {}", b, show_list(target, &v)))
                    }
                }
            }
            Check::ReflexivePullback { module, etale, primes } => {
                let (_, c) = self.etale(etale, primes)?;
                match reflexive_pullback_check(&c, doc.module(module)?) {
                    Ok(r) if r.pass() => outcome(Verdict::Pass, "pullback biduality is an isomorphism")
                        .with(Some(cert::recomputed(json!({ "biduality": r.target_biduality.show(&c.map.target) })))),
                    Ok(r) => outcome(Verdict::Fail, format!("pullback biduality is not an isomorphism: {}", iso_text(&c.map.target, &r.verdict))),
                    Err(Error::SourceNotReflexive) => outcome(Verdict::Fail, "source module is not reflexive"),
                    Err(e) => return Err(e),
                }
            }
            Check::HomPullback { module, etale, primes } => {
                let (_, c) = self.etale(etale, primes)?;
                let h = hom_pullback_check(&c, doc.module(module)?)?;
                if h.verdict.is_iso() {
                    outcome(Verdict::Pass, "pullback of the dual is the dual of the pullback")
                        .with(Some(cert::recomputed(json!({ "comparison": h.map.matrix.show(&c.map.target) }))))
                } else {
                    outcome(Verdict::Fail, format!("comparison map is not an isomorphism: {}", iso_text(&c.map.target, &h.verdict)))
                }
            }
            Check::Divisor { divisor } => match self.divisor(divisor) {
                Ok(d) => {
                    let ranks = d.generic_ranks.iter().map(|(p, ok)| format!("{}{}", p.show(), if *ok { "" } else { "?" })).collect::<Vec<_>>().join(" ");
                    outcome(Verdict::Pass, format!("reflexive, rank 1 at {}", ranks))
                        .with(Some(cert::recomputed(json!({ "biduality": d.biduality.show(&d.ring) }))))
                }
                Err(e @ (Error::NotReflexive(_) | Error::WrongGenericRank(_) | Error::Degenerate(_))) => outcome(Verdict::Fail, e.to_string()),
                Err(e) => return Err(e),
            },
            Check::Effective { divisor, bound, expect } => {
                let d = self.divisor(divisor)?;
                let b = self.bound(*bound, DEFAULT_BOUND);
                match is_effective(&d, b) {
                    Some(eff) => self.compare_ideal(&d.ring, &eff.ideal, expect, "image"),
                    None if d.embedding.is_some() => outcome(Verdict::Fail, "embedding is not integral"),
                    None => outcome(Verdict::Unknown, format!("no injective evaluation found at bound {}", b)),
                }
            }
            Check::Subscheme { divisor, bound, expect } => {
                let d = self.divisor(divisor)?;
                let b = self.bound(*bound, DEFAULT_BOUND);
                if is_effective(&d, b).is_none() {
                    outcome(Verdict::Unknown, format!("no effective embedding found at bound {}", b))
                } else {
                    match effective_to_subscheme(&d, b) {
                        Ok(s) => self.subscheme_outcome(&d.ring, &s.ideal, &s.associated, expect),
                        Err(e @ (Error::EmbeddedPoint(_) | Error::Degenerate(_))) => outcome(Verdict::Fail, e.to_string()),
                        Err(e) => return Err(e),
                    }
                }
            }
            Check::Section { divisor, s, expect } => {
                let d = self.divisor(divisor)?;
                let s: Vec<Poly> = s.iter().map(|p| d.ring.reduce(p)).collect();
                if s.len() != d.module_f.num_gens() {
                    return Err(Error::Malformed(format!("section needs {} coordinates", d.module_f.num_gens())));
                }
                match section_to_effective(&d, &s) {
                    Ok(e) => self.compare_ideal(&d.ring, &e.evaluation_ideal(&s), expect, "image"),
                    Err(e @ Error::DegenerateSection(_)) => outcome(Verdict::Fail, e.to_string()),
                    Err(e) => return Err(e),
                }
            }
            Check::Equivalent { first, second, bound, primes } => {
                let (d1, d2) = (self.divisor(first)?, self.divisor(second)?);
                let b = self.bound(*bound, 1);
                match linear_equivalence(&d1, &d2, b, &doc.primes(primes)?) {
                    Equivalence::Equivalent { forward, backward } => outcome(Verdict::Pass, "EQUIVALENT").with(Some(cert::recomputed(json!({
                        "forward": forward.matrix.show(&d1.ring),
                        "backward": backward.matrix.show(&d1.ring),
                    })))),
                    Equivalence::Not(why) => outcome(Verdict::Fail, format!("NOT {}", why)),
                    Equivalence::Unknown => outcome(Verdict::Unknown, format!("UNKNOWN no isomorphism at bound {}", b)),
                }
            }
            Check::Cocycle { equivariant } => {
                let e = doc.equivariant(equivariant)?;
                match check_cocycle(e) {
                    Ok(c) => {
                        let (rname, ring) = doc.ring_of(equivariant)?;
                        let gp = &e.groupoid;
                        let rel = relation_cols(&e.module);
                        let mut o = outcome(Verdict::Pass, format!("{} pairs checked", c.pairs_checked));
                        for g in 0..gp.order() {
                            for h in 0..gp.order() {
                                let comp = e.phis[g].mul(ring, &gp.act_matrix(g, &e.phis[h]));
                                let want = &e.phis[gp.table[g][h]];
                                for j in 0..comp.ncols() {
                                    let d: Vec<Poly> = comp.col(j).iter().zip(want.col(j)).map(|(a, b)| a.sub(b)).collect();
                                    o = o.with(cert::membership(&rname, ring, e.module.num_gens(), &rel, &d));
                                }
                            }
                        }
                        o
                    }
                    Err(Error::CocycleFailure { witness, .. }) => {
                        let short = witness.split(" expected=").next().unwrap_or(&witness).to_string();
                        outcome(Verdict::Fail, short)
                    }
                    Err(e) => return Err(e),
                }
            }
            Check::Descent { from, to, map, matrix } => {
                let family = ChartFamily {
                    modules: vec![doc.module(from)?.clone(), doc.module(to)?.clone()],
                    edges: vec![DescentEdge { from: 0, to: 1, map: doc.map(map)?.clone(), comparison: matrix.clone() }],
                };
                match descent_check(&family).remove(0) {
                    EdgeVerdict::Iso => outcome(Verdict::Pass, "comparison is an isomorphism"),
                    EdgeVerdict::NotIso(v) => {
                        outcome(Verdict::Fail, format!("comparison is not an isomorphism: {}", iso_text(&family.modules[1].ring().clone(), &v)))
                    }
                    EdgeVerdict::Invalid(why) => return Err(Error::Malformed(why)),
                }
            }
            Check::StackDivisor { equivariant } => match validate_stack_divisor(doc.equivariant(equivariant)?) {
                Ok(sd) => {
                    let ring = sd.divisor.ring.clone();
                    let phis: Vec<String> = sd.dual_equivariant.phis.iter().map(|m| m.show(&ring)).collect();
                    outcome(Verdict::Pass, "cocycle, reflexive rank 1, dual structure verified")
                        .with(Some(cert::recomputed(json!({ "dual_phis": phis }))))
                }
                Err(
                    e @ (Error::CocycleFailure { .. }
                    | Error::DualCocycleFailure(_)
                    | Error::NotReflexive(_)
                    | Error::WrongGenericRank(_)),
                ) => outcome(Verdict::Fail, e.to_string()),
                Err(e) => return Err(e),
            },
            Check::Invariants { equivariant, bound, expect } => {
                let e = doc.equivariant(equivariant)?;
                let (rname, ring) = doc.ring_of(equivariant)?;
                let b = self.bound(*bound, DEFAULT_BOUND);
                let inv = invariant_sections(e, b);
                let shown: Vec<Vec<Poly>> = inv.values.clone().unwrap_or_else(|| inv.coords.clone());
                let txt: Vec<String> = shown.iter().map(|v| if v.len() == 1 { ring.show(&v[0]) } else { format!("[{}]", show_list(ring, v)) }).collect();
                let detail = format!("basis ({})", txt.join(", "));
                let verdict = match expect {
                    None => Verdict::Pass,
                    Some(ex) if shown.iter().all(|v| v.len() == 1) => {
                        let got: Vec<Poly> = shown.iter().map(|v| v[0].clone()).collect();
                        if same_span(ring, &got, ex) {
                            Verdict::Pass
                        } else {
                            Verdict::Fail
                        }
                    }
                    Some(_) => Verdict::Fail,
                };
                let rel = relation_cols(&e.module);
                let mut o = outcome(verdict, detail);
                for s in &inv.coords {
                    for g in 1..e.groupoid.order() {
                        let d: Vec<Poly> = e.act(g, s).iter().zip(s).map(|(a, b)| a.sub(b)).collect();
                        o = o.with(cert::membership(&rname, ring, e.module.num_gens(), &rel, &d));
                    }
                }
                o.with(Some(cert::recomputed(json!({ "basis": txt }))))
            }
            Check::Substack { divisor, bound, expect } => {
                let sd = self.stack_divisor(divisor)?;
                let b = self.bound(*bound, DEFAULT_BOUND);
                match stack_effective_to_substack(&sd, b) {
                    Ok(s) => {
                        let ring = sd.divisor.ring.clone();
                        let rname = self.doc.ring_of(divisor)?.0;
                        let j = &s.subscheme.ideal;
                        let cols: Vec<Vec<Poly>> = j.generators().iter().map(|g| vec![g.clone()]).collect();
                        let gp = &sd.equivariant.groupoid;
                        let mut o = self.subscheme_outcome(&ring, j, &s.subscheme.associated, expect);
                        for g in 1..gp.order() {
                            for x in j.generators() {
                                o = o.with(cert::membership(&rname, &ring, 1, &cols, &[gp.act(g, x)]));
                            }
                        }
                        o
                    }
                    Err(e @ (Error::NotInvariant(_) | Error::EmbeddedPoint(_) | Error::Degenerate(_))) => outcome(Verdict::Fail, e.to_string()),
                    Err(Error::Malformed(m)) if m.contains("not effective") => outcome(Verdict::Unknown, m),
                    Err(e) => return Err(e),
                }
            }
            Check::StackSection { divisor, s, expect } => {
                let sd = self.stack_divisor(divisor)?;
                let ring = sd.divisor.ring.clone();
                if s.len() != sd.divisor.module_f.num_gens() {
                    return Err(Error::Malformed(format!("section needs {} coordinates", sd.divisor.module_f.num_gens())));
                }
                let s: Vec<Poly> = s.iter().map(|p| ring.reduce(p)).collect();
                match section_to_stack_effective(&sd, &s) {
                    Ok((_, j)) => self.compare_ideal(&ring, &j, expect, "ideal"),
                    Err(e @ (Error::NotInvariant(_) | Error::DegenerateSection(_))) => outcome(Verdict::Fail, e.to_string()),
                    Err(e) => return Err(e),
                }
            }
        })
    }

    fn compare_ideal(&self, ring: &QuotientRing, got: &IdealRecord, expect: &Option<IdealRecord>, what: &str) -> Outcome {
        let shown = show_ideal(ring, got);
        let data = Some(cert::recomputed(json!({ what: shown })));
        match expect {
            Some(e) if e != got => outcome(Verdict::Fail, format!("{} {} expected {}", what, shown, show_ideal(ring, e))).with(data),
            _ => outcome(Verdict::Pass, format!("{} {}", what, shown)).with(data),
        }
    }

    fn subscheme_outcome(&self, ring: &QuotientRing, j: &IdealRecord, ass: &[crate::primes::PrimeRecord], expect: &Option<IdealRecord>) -> Outcome {
        let ass_txt: Vec<String> = ass.iter().map(|p| show_ideal(ring, &p.ideal)).collect();
        let base = self.compare_ideal(ring, j, expect, "ideal");
        let detail = format!("{}, Ass = {{{}}}, no embedded points", base.detail, ass_txt.join(", "));
        Outcome { verdict: base.verdict, detail, certs: vec![cert::recomputed(json!({ "ideal": show_ideal(ring, j), "associated": ass_txt }))] }
    }
}

/// Whether two lists of polynomials span the same vector space.
fn same_span(ring: &QuotientRing, a: &[Poly], b: &[Poly]) -> bool {
    let field = ring.field();
    let mut index = BTreeMap::new();
    let a: Vec<Poly> = a.iter().map(|p| ring.reduce(p)).collect();
    let b: Vec<Poly> = b.iter().map(|p| ring.reduce(p)).collect();
    for p in a.iter().chain(&b) {
        for (m, _) in p.terms() {
            let k = index.len();
            index.entry(m.clone()).or_insert(k);
        }
    }
    let coords = |ps: &[Poly]| -> Vec<Vec<crate::field::Coeff>> {
        ps.iter()
            .map(|p| {
                let mut v = vec![field.zero(); index.len()];
                for (m, c) in p.terms() {
                    v[index[m]] = c.clone();
                }
                v
            })
            .collect()
    };
    let (ca, cb) = (coords(&a), coords(&b));
    let both: Vec<_> = ca.iter().chain(&cb).cloned().collect();
    let n = index.len();
    let (ra, rb, rab) = (rank(field, n, &ca), rank(field, n, &cb), rank(field, n, &both));
    ra == rab && rb == rab
}

fn apply_negation(a: &Assertion, o: Outcome) -> Outcome {
    if !a.negated {
        return o;
    }
    let verdict = match o.verdict {
        Verdict::Pass => Verdict::Fail,
        Verdict::Fail => Verdict::Pass,
        v => v,
    };
    Outcome { verdict, ..o }
}

pub fn run_assertion(doc: &Document, a: &Assertion, opts: &RunOptions) -> Entry {
    let ctx = Ctx { doc, opts };
    let o = apply_negation(a, ctx.run(a));
    let mut certificates = o.certs;
    if certificates.is_empty() && o.verdict != Verdict::Error {
        certificates.push(cert::recomputed(json!({ "witness": o.detail })));
    }
    certificates.push(cert::recomputed(json!({ "verdict": o.verdict.label(), "detail": o.detail })));
    Entry {
        line: a.line,
        check: if a.negated { format!("not-{}", a.kind) } else { a.kind.clone() },
        assertion: a.canonical.clone(),
        verdict: o.verdict,
        detail: o.detail,
        certificates,
    }
}

/// Runs every assertion, concurrently, preserving document order.
pub fn run(doc: &Document, opts: &RunOptions) -> Vec<Entry> {
    let asserts: Vec<&Assertion> = doc.assertions().collect();
    let go = || asserts.par_iter().map(|a| run_assertion(doc, a, opts)).collect::<Vec<_>>();
    match opts.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(_) => go(),
        },
        None => go(),
    }
}
