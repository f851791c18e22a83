//! Ring maps `B -> A`, étale certificates, and the checks that compare
//! local invariants and modules across such maps.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::ideal::{eliminate, is_unit};
use crate::linalg::{solve, Solve};
use crate::local::{is_nonzerodivisor, local_depth, local_dim, zerodivisor_witness};
use crate::module::{base_change, biduality_map, determinant, dual, FPModule, IsoVerdict, Matrix, ModuleMap};
use crate::poly::{monomials_up_to, Monomial, Poly};
use crate::primes::PrimeRecord;
use crate::ring::{IdealRecord, PolyRing, QuotientRing};
use crate::syzygy::lift;

/// A ring map `B -> A` given by the images of the variables of `B`.
#[derive(Clone, Debug)]
pub struct RingMapRecord {
    pub source: QuotientRing,
    pub target: QuotientRing,
    pub images: Vec<Poly>,
}

impl RingMapRecord {
    pub fn new(source: &QuotientRing, target: &QuotientRing, images: Vec<Poly>) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::InvalidField(format!("{} vs {}", source.field(), target.field())));
        }
        if images.len() != source.nvars() {
            return Err(Error::VariableMismatch(format!(
                "{} images for {} source variables",
                images.len(),
                source.nvars()
            )));
        }
        for im in &images {
            target.ambient().check(im)?;
        }
        let images: Vec<Poly> = images.iter().map(|p| target.reduce(p)).collect();
        for r in source.relation_basis() {
            if !target.reduce(&r.substitute(&images)).is_zero() {
                return Err(Error::NotRingMap(format!("relation {} does not map to zero", source.show(r))));
            }
        }
        Ok(RingMapRecord { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(ring: &QuotientRing) -> Self {
        RingMapRecord { source: ring.clone(), target: ring.clone(), images: (0..ring.nvars()).map(|i| ring.var(i)).collect() }
    }

    pub fn apply(&self, b: &Poly) -> Poly {
        self.target.reduce(&b.substitute(&self.images))
    }

    /// Default search bound: twice the largest degree among images and
    /// relations, plus two.
    pub fn default_degree_bound(&self) -> u32 {
        let d = self
            .images
            .iter()
            .chain(self.source.relation_basis())
            .chain(self.target.relation_basis())
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(1);
        2 * d + 2
    }

    /// `f^{-1}(J)` for an ideal `J` of the target ambient ring, computed by
    /// elimination in the graph ring.
    pub fn contract_ideal(&self, j: &IdealRecord) -> Result<IdealRecord> {
        let (nt, ns) = (self.target.nvars(), self.source.nvars());
        let field = self.source.field();
        let names: Vec<String> = self
            .target
            .names()
            .iter()
            .cloned()
            .chain(self.source.names().iter().map(|n| format!("{}'", n)))
            .collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let graph = PolyRing::new(field, &name_refs);
        let tmap: Vec<usize> = (0..nt).collect();
        let mut gens: Vec<Poly> = j.generators().iter().chain(self.target.relation_basis()).map(|g| g.rename(nt + ns, &tmap)).collect();
        for (i, im) in self.images.iter().enumerate() {
            gens.push(graph.var(nt + i).sub(&im.rename(nt + ns, &tmap)));
        }
        let ideal = IdealRecord::new(&graph, gens)?;
        let elim = eliminate(&ideal, &(0..nt).collect::<Vec<_>>())?;
        let back: Vec<usize> = (0..nt).map(|_| 0).chain(0..ns).collect();
        let gens: Vec<Poly> = elim.generators().iter().map(|g| g.rename(ns, &back)).collect();
        Ok(IdealRecord::new(self.source.ambient(), gens)?.sum(self.source.relations()).canonical())
    }
}

/// `f^{-1}(q)`.
pub fn contract_prime(f: &RingMapRecord, q: &PrimeRecord) -> Result<PrimeRecord> {
    let p = f.contract_ideal(&q.ideal)?;
    if p.is_unit() {
        return Err(Error::UnitIdeal);
    }
    Ok(PrimeRecord::computed(p))
}

/// The target written as `B[w_1..w_n] / (f_1..f_n)`; relations live in the
/// polynomial ring on the source variables followed by the new variables.
#[derive(Clone, Debug)]
pub struct EtalePresentation {
    pub new_vars: Vec<String>,
    pub relations: Vec<Poly>,
}

impl EtalePresentation {
    pub fn empty() -> Self {
        EtalePresentation { new_vars: Vec::new(), relations: Vec::new() }
    }

    pub fn ambient(source: &QuotientRing, new_vars: &[String]) -> PolyRing {
        let names: Vec<&str> = source.names().iter().chain(new_vars).map(String::as_str).collect();
        PolyRing::new(source.field(), &names)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EtaleScope {
    Global,
    AtPrimes(Vec<PrimeRecord>),
}

#[derive(Clone, Debug)]
pub struct EtaleCertificate {
    pub map: RingMapRecord,
    pub presentation: EtalePresentation,
    pub jacobian_det: Poly,
    pub scope: EtaleScope,
    /// Images of the target variables in the presentation ring.
    pub inverse_images: Vec<Poly>,
}

impl EtaleCertificate {
    /// Whether the certificate covers `q`: the jacobian is not in `q`.
    pub fn valid_at(&self, q: &PrimeRecord) -> bool {
        !q.contains(&self.jacobian_det)
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadPresentation(msg.into())
}

/// Verifies that the presentation reproduces the target through mutually
/// inverse ring maps and returns its jacobian determinant in the target
/// together with the inverse images of the target variables.
pub fn presentation_jacobian(f: &RingMapRecord, pres: &EtalePresentation) -> Result<(Poly, Vec<Poly>)> {
    let (ns, n) = (f.source.nvars(), pres.new_vars.len());
    if pres.relations.len() != n {
        return Err(bad(format!("{} relations for {} new variables", pres.relations.len(), n)));
    }
    let amb_c = EtalePresentation::ambient(&f.source, &pres.new_vars);
    for r in &pres.relations {
        amb_c.check(r)?;
    }
    let smap: Vec<usize> = (0..ns).collect();
    let mut crel: Vec<Poly> = f.source.relation_basis().iter().map(|g| g.rename(ns + n, &smap)).collect();
    crel.extend(pres.relations.iter().cloned());
    let c = QuotientRing::new(amb_c.clone(), crel).map_err(|_| bad("presentation ring is zero"))?;
    let a = &f.target;

    // phi: C -> A.
    let mut phi = f.images.clone();
    for w in &pres.new_vars {
        match a.var_by_name(w) {
            Some(v) => phi.push(v),
            None => return Err(bad(format!("new variable {} is not a target variable", w))),
        }
    }
    // psi: A -> C.
    let mut psi = Vec::new();
    for (vi, v) in a.names().iter().enumerate() {
        if let Some(k) = pres.new_vars.iter().position(|w| w == v) {
            psi.push(amb_c.var(ns + k));
            continue;
        }
        let mut found = None;
        for (i, im) in f.images.iter().enumerate() {
            let cst = im.constant_term();
            let rest = im.sub(&Poly::constant(im.field(), im.nvars(), cst.clone()));
            if rest.num_terms() == 1 && rest.is_monomial() && rest.involves(vi) && rest.total_degree() == Some(1) {
                let coef = rest.coeff(&{
                    let mut m = vec![0; a.nvars()];
                    m[vi] = 1;
                    m
                });
                let field = a.field();
                let inv = field.inv(&coef);
                let s = amb_c.var(i).sub(&Poly::constant(field, ns + n, cst));
                found = Some(s.scale(&inv));
                break;
            }
        }
        match found {
            Some(p) => psi.push(p),
            None => return Err(bad(format!("target variable {} is neither new nor solved by a source image", v))),
        }
    }
    for r in c.relation_basis() {
        if !a.reduce(&r.substitute(&phi)).is_zero() {
            return Err(bad(format!("presentation relation {} does not vanish on the target", c.show(r))));
        }
    }
    for r in a.relation_basis() {
        if !c.reduce(&r.substitute(&psi)).is_zero() {
            return Err(bad(format!("target relation {} does not vanish on the presentation", a.show(r))));
        }
    }
    for (vi, p) in psi.iter().enumerate() {
        if !a.eq_elems(&p.substitute(&phi), &a.var(vi)) {
            return Err(bad(format!("comparison maps do not invert each other at {}", a.names()[vi])));
        }
    }
    for (ui, p) in phi.iter().enumerate() {
        if !c.eq_elems(&p.substitute(&psi), &c.var(ui)) {
            return Err(bad(format!("comparison maps do not invert each other at {}", c.names()[ui])));
        }
    }
    let free = QuotientRing::new(amb_c.clone(), vec![]).expect("polynomial ring");
    let jac: Vec<Vec<Poly>> = pres.relations.iter().map(|r| (0..n).map(|k| r.derivative(ns + k)).collect()).collect();
    let det = a.reduce(&determinant(&free, &jac).substitute(&phi));
    Ok((det, psi))
}

/// Verifies the presentation, compares the supplied jacobian, and
/// determines the scope on which the jacobian is a unit.
pub fn certify_etale(
    f: &RingMapRecord,
    pres: &EtalePresentation,
    jacobian: Option<&Poly>,
    primes: Option<&[PrimeRecord]>,
) -> Result<EtaleCertificate> {
    let a = &f.target;
    let (det, psi) = presentation_jacobian(f, pres)?;
    if let Some(j) = jacobian {
        if !a.eq_elems(j, &det) {
            return Err(bad(format!("supplied jacobian {} differs from {}", a.show(j), a.show(&det))));
        }
    }
    let scope = if is_unit(&det, a) {
        EtaleScope::Global
    } else {
        match primes {
            Some(ps) if !ps.is_empty() => {
                let failing: Vec<String> = ps.iter().filter(|q| q.contains(&det)).map(|q| q.show()).collect();
                if !failing.is_empty() {
                    return Err(Error::NotEtaleAt(failing));
                }
                EtaleScope::AtPrimes(ps.to_vec())
            }
            _ => return Err(Error::NotEtaleAt(vec![format!("V({})", a.show(&det))])),
        }
    };
    Ok(EtaleCertificate { map: f.clone(), presentation: pres.clone(), jacobian_det: det, scope, inverse_images: psi })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalFormulaReport {
    pub q: PrimeRecord,
    pub p: PrimeRecord,
    pub dim_target: usize,
    pub dim_source: usize,
    pub depth_target: usize,
    pub depth_source: usize,
}

impl LocalFormulaReport {
    pub fn pass(&self) -> bool {
        self.dim_target == self.dim_source && self.depth_target == self.depth_source
    }
}

/// Compares `dim` and `depth` of `A_q` and `B_p` for `p = f^{-1}(q)`.
pub fn verify_local_formulas(cert: &EtaleCertificate, q: &PrimeRecord) -> Result<LocalFormulaReport> {
    if !cert.valid_at(q) {
        return Err(Error::NotEtaleAt(vec![q.show()]));
    }
    let f = &cert.map;
    let p = contract_prime(f, q)?;
    Ok(LocalFormulaReport {
        dim_target: local_dim(&f.target, q)?,
        dim_source: local_dim(&f.source, &p)?,
        depth_target: local_depth(&FPModule::free(&f.target, 1), q)?,
        depth_source: local_depth(&FPModule::free(&f.source, 1), &p)?,
        q: q.clone(),
        p,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NzdTransport {
    pub element: Poly,
    pub image: Poly,
    /// An element killing the image; its presence shows the map is not flat.
    pub non_flat_witness: Option<Poly>,
}

impl NzdTransport {
    pub fn pass(&self) -> bool {
        self.non_flat_witness.is_none()
    }
}

/// Checks that the image of a nonzerodivisor is a nonzerodivisor.
pub fn nzd_transport(f: &RingMapRecord, b: &Poly) -> Result<NzdTransport> {
    if let Some(w) = zerodivisor_witness(b, &f.source) {
        return Err(Error::SourceZerodivisor(f.source.show(&w)));
    }
    let image = f.apply(b);
    Ok(NzdTransport { element: f.source.reduce(b), non_flat_witness: zerodivisor_witness(&image, &f.target), image })
}

/// A linear functional on normal-form coefficients separating the target
/// element from the images of all source monomials of degree at most `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearInconsistency {
    pub degree: u32,
    pub functional: Vec<(Monomial, Coeff)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ImageMembership {
    InImage(Poly),
    NotInImage(LinearInconsistency),
}

fn coordinates(polys: &[Poly]) -> (BTreeMap<Monomial, usize>, Vec<Vec<Coeff>>) {
    let mut index = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let k = index.len();
            index.entry(m.clone()).or_insert(k);
        }
    }
    let vecs = polys
        .iter()
        .map(|p| {
            let mut v = vec![p.field().zero(); index.len()];
            for (m, c) in p.terms() {
                v[index[m]] = c.clone();
            }
            v
        })
        .collect();
    (index, vecs)
}

/// Evaluates a functional on the normal form of `p`.
pub fn apply_functional(functional: &[(Monomial, Coeff)], p: &Poly) -> Coeff {
    let field = p.field();
    functional.iter().fold(field.zero(), |acc, (m, c)| field.add(&acc, &field.mul(c, &p.coeff(m))))
}

/// Decides whether `a = f(b)` for a source `b` of degree at most `bound`.
pub fn literal_image_membership(a: &Poly, f: &RingMapRecord, bound: u32) -> ImageMembership {
    let target = &f.target;
    let field = target.field();
    let a = target.reduce(a);
    let mut last = None;
    for d in 0..=bound {
        let monos = monomials_up_to(f.source.nvars(), d);
        let mut polys: Vec<Poly> = monos.iter().map(|m| f.apply(&Poly::monomial(field, m.clone(), field.one()))).collect();
        polys.push(a.clone());
        let (index, vecs) = coordinates(&polys);
        let rows = index.len();
        let (cols, b) = vecs.split_at(monos.len());
        match solve(field, rows, cols, &b[0]) {
            Solve::Solution(x) => {
                let pre = Poly::from_terms(field, f.source.nvars(), monos.into_iter().zip(x));
                return ImageMembership::InImage(pre);
            }
            Solve::Inconsistent(y) => {
                let mut by_index: Vec<(Monomial, usize)> = index.into_iter().collect();
                by_index.sort_by_key(|(_, i)| *i);
                let functional = by_index
                    .into_iter()
                    .filter(|(_, i)| !y[*i].is_zero())
                    .map(|(m, i)| (m, y[i].clone()))
                    .collect();
                last = Some(LinearInconsistency { degree: d, functional });
            }
        }
    }
    ImageMembership::NotInImage(last.expect("bound loop runs at least once"))
}

/// Re-verifies a non-membership certificate by recomputing normal forms.
pub fn verify_not_in_image(a: &Poly, f: &RingMapRecord, cert: &LinearInconsistency) -> bool {
    let field = f.target.field();
    let monos = monomials_up_to(f.source.nvars(), cert.degree);
    monos.iter().all(|m| apply_functional(&cert.functional, &f.apply(&Poly::monomial(field, m.clone(), field.one()))).is_zero())
        && !apply_functional(&cert.functional, &f.target.reduce(a)).is_zero()
}

/// `f(b) = a c` with `b` a source nonzerodivisor and `c` a unit at `q`, so
/// `a` becomes invertible once `b` is.
#[derive(Clone, Debug, PartialEq)]
pub struct SaturationWitness {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SaturationVerdict {
    Equal(Vec<SaturationWitness>),
    /// A source nonzerodivisor whose image is a zerodivisor, with the killer.
    Distinct { b: Poly, killer: Poly },
    Unknown(Vec<Poly>),
}

impl SaturationVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SaturationVerdict::Equal(_) => "EQUAL",
            SaturationVerdict::Distinct { .. } => "DISTINCT",
            SaturationVerdict::Unknown(_) => "UNKNOWN",
        }
    }
}

/// Compares inverting the source nonzerodivisors with inverting all target
/// nonzerodivisors, locally at `q`, on the target variables and `extra`
/// candidates.
pub fn compare_quotient_saturation(f: &RingMapRecord, q: &PrimeRecord, bound: u32, extra: &[Poly]) -> SaturationVerdict {
    let (src, tgt) = (&f.source, &f.target);
    for i in 0..src.nvars() {
        let b = src.var(i);
        if is_nonzerodivisor(&b, src) {
            if let Some(killer) = zerodivisor_witness(&f.apply(&b), tgt) {
                return SaturationVerdict::Distinct { b, killer };
            }
        }
    }
    let mut candidates: Vec<Poly> = (0..tgt.nvars()).map(|i| tgt.var(i)).filter(|v| is_nonzerodivisor(v, tgt)).collect();
    candidates.extend(extra.iter().map(|e| tgt.reduce(e)));
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    for a in candidates {
        if !q.contains(&a) {
            witnesses.push(SaturationWitness { a: a.clone(), b: src.one(), c: a });
            continue;
        }
        match saturation_witness(f, q, &a, bound) {
            Some(w) => witnesses.push(w),
            None => missing.push(a),
        }
    }
    if missing.is_empty() {
        SaturationVerdict::Equal(witnesses)
    } else {
        SaturationVerdict::Unknown(missing)
    }
}

fn saturation_witness(f: &RingMapRecord, q: &PrimeRecord, a: &Poly, bound: u32) -> Option<SaturationWitness> {
    let (src, tgt) = (&f.source, &f.target);
    let j = tgt.ideal(vec![a.clone()]).ok()?;
    let k = f.contract_ideal(&j).ok()?;
    let gens: Vec<Poly> = k.generators().iter().map(|g| src.reduce(g)).filter(|g| !g.is_zero()).collect();
    let mut pool = gens.clone();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i..] {
            pool.push(src.reduce(&x.mul(y)));
        }
    }
    for b in pool {
        if b.total_degree().is_some_and(|d| d > bound) || !is_nonzerodivisor(&b, src) {
            continue;
        }
        let fb = f.apply(&b);
        let l = lift(tgt, 1, &[vec![a.clone()]], &[fb])?;
        let c = tgt.reduce(&l.coeffs[0]);
        if !q.contains(&c) {
            return Some(SaturationWitness { a: a.clone(), b, c });
        }
    }
    None
}

/// Biduality data on both sides of a pullback.
#[derive(Clone, Debug)]
pub struct ReflexivePullback {
    pub pullback: FPModule,
    pub source_biduality: Matrix,
    pub target_biduality: Matrix,
    pub verdict: IsoVerdict,
}

impl ReflexivePullback {
    pub fn pass(&self) -> bool {
        self.verdict.is_iso()
    }
}

pub fn reflexive_pullback_check(cert: &EtaleCertificate, m: &FPModule) -> Result<ReflexivePullback> {
    let src = biduality_map(m);
    if !src.map.is_iso() {
        return Err(Error::SourceNotReflexive);
    }
    let f = &cert.map;
    let pullback = base_change(m, &f.target, &f.images)?;
    let tgt = biduality_map(&pullback);
    Ok(ReflexivePullback {
        verdict: tgt.map.iso_verdict(),
        pullback,
        source_biduality: src.map.matrix,
        target_biduality: tgt.map.matrix,
    })
}

/// The canonical map `f^*(M^∨) -> (f^*M)^∨` and its isomorphism verdict.
#[derive(Clone, Debug)]
pub struct HomPullback {
    pub map: ModuleMap,
    pub verdict: IsoVerdict,
}

pub fn hom_pullback_check(cert: &EtaleCertificate, m: &FPModule) -> Result<HomPullback> {
    let f = &cert.map;
    let d = dual(m);
    let left = base_change(&d.module, &f.target, &f.images)?;
    let pulled = base_change(m, &f.target, &f.images)?;
    let right = dual(&pulled);
    let mut cols = Vec::new();
    for g in &d.generators {
        let img = g.map(|p| f.apply(p));
        match right.map_to_element(&img) {
            Some(v) => cols.push(v),
            None => return Err(Error::NotWellDefined("pulled-back dual generator is not a homomorphism".into())),
        }
    }
    let map = ModuleMap::new(&left, &right.module, Matrix::from_cols(right.module.num_gens(), cols))?;
    Ok(HomPullback { verdict: map.iso_verdict(), map })
}
