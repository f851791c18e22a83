//! Quotient stacks `[U / G]` for finite groups, equivariant modules with
//! cocycle certificates, descent along ring maps, and stack divisors.
//!
//! Conventions: `a_g` is the ring automorphism of `g`, acting on
//! polynomials by substitution, with `a_{gh} = a_g ∘ a_h`. An equivariant
//! structure is a family of matrices `φ_g` acting on coordinate vectors by
//! `ρ_g(s) = φ_g · a_g(s)`; the cocycle identity is
//! `φ_{gh} = φ_g · a_g(φ_h)` with `φ_e = 1`.

use std::collections::BTreeMap;

use crate::divisor::{
    effective_to_subscheme, is_effective, section_to_effective, validate_divisor, Embedding, FractionalIdealRecord,
    GeneralizedDivisor, Subscheme,
};
use crate::error::{Error, Result};
use crate::etale::RingMapRecord;
use crate::linalg::{nullspace, rank};
use crate::module::{base_change, FPModule, IsoVerdict, Matrix, ModuleMap};
use crate::poly::{monomials_up_to, Monomial, Poly};
use crate::ring::{IdealRecord, QuotientRing};
use crate::syzygy::lift;

#[derive(Clone, Debug)]
pub struct GroupActionGroupoid {
    pub chart: QuotientRing,
    pub elements: Vec<String>,
    /// `table[i][j]` is the index of `g_i g_j`.
    pub table: Vec<Vec<usize>>,
    /// Images of the chart variables under each `a_g`.
    pub actions: Vec<Vec<Poly>>,
    /// Index of the inverse of each element.
    pub inverses: Vec<usize>,
}

fn substitute_all(images: &[Poly], by: &[Poly], ring: &QuotientRing) -> Vec<Poly> {
    images.iter().map(|p| ring.reduce(&p.substitute(by))).collect()
}

/// Builds the action groupoid from a multiplication table whose first row
/// is the identity row (it lists the element names) and one automorphism
/// per element.
pub fn build_group_groupoid(chart: &QuotientRing, table: &[Vec<String>], actions: Vec<Vec<Poly>>) -> Result<GroupActionGroupoid> {
    let n = table.len();
    if n == 0 || table.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed("group table must be square and nonempty".into()));
    }
    let elements = table[0].clone();
    let index: BTreeMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    if index.len() != n {
        return Err(Error::Malformed("group element names must be distinct".into()));
    }
    let mut t = vec![vec![0; n]; n];
    for (i, row) in table.iter().enumerate() {
        for (j, name) in row.iter().enumerate() {
            t[i][j] = *index.get(name.as_str()).ok_or_else(|| Error::Malformed(format!("unknown group element {}", name)))?;
        }
    }
    for i in 0..n {
        if t[i][0] != i {
            return Err(Error::Malformed(format!("first element is not an identity for {}", elements[i])));
        }
        let mut seen = vec![false; n];
        for &k in &t[i] {
            seen[k] = true;
        }
        if seen.contains(&false) {
            return Err(Error::Malformed(format!("row of {} is not a permutation", elements[i])));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if t[t[a][b]][c] != t[a][t[b][c]] {
                    return Err(Error::Malformed("group table is not associative".into()));
                }
            }
        }
    }
    let inverses: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| t[i][j] == 0).expect("permutation rows")).collect();
    if actions.len() != n {
        return Err(Error::Malformed(format!("{} actions for {} group elements", actions.len(), n)));
    }
    let mut reduced = Vec::new();
    for (g, imgs) in actions.into_iter().enumerate() {
        RingMapRecord::new(chart, chart, imgs.clone()).map_err(|_| Error::NotAutomorphism(elements[g].clone()))?;
        reduced.push(imgs.iter().map(|p| chart.reduce(p)).collect::<Vec<_>>());
    }
    for g in 0..n {
        for h in 0..n {
            let composite = substitute_all(&reduced[h], &reduced[g], chart);
            if composite.iter().zip(&reduced[t[g][h]]).any(|(a, b)| !chart.eq_elems(a, b)) {
                return Err(Error::TableViolation(elements[g].clone(), elements[h].clone()));
            }
        }
    }
    for (v, img) in reduced[0].iter().enumerate() {
        if !chart.eq_elems(img, &chart.var(v)) {
            return Err(Error::NotAutomorphism(elements[0].clone()));
        }
    }
    Ok(GroupActionGroupoid { chart: chart.clone(), elements, table: t, actions: reduced, inverses })
}

impl GroupActionGroupoid {
    /// The trivial group acting trivially.
    pub fn trivial(chart: &QuotientRing) -> Self {
        GroupActionGroupoid {
            chart: chart.clone(),
            elements: vec!["e".into()],
            table: vec![vec![0]],
            actions: vec![(0..chart.nvars()).map(|i| chart.var(i)).collect()],
            inverses: vec![0],
        }
    }

    pub fn act(&self, g: usize, f: &Poly) -> Poly {
        self.chart.reduce(&f.substitute(&self.actions[g]))
    }

    pub fn act_vec(&self, g: usize, v: &[Poly]) -> Vec<Poly> {
        v.iter().map(|p| self.act(g, p)).collect()
    }

    pub fn act_matrix(&self, g: usize, m: &Matrix) -> Matrix {
        m.map(|p| self.act(g, p))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// `a_g(J)` as an ideal.
    pub fn act_ideal(&self, g: usize, j: &IdealRecord) -> IdealRecord {
        let gens = j.generators().iter().map(|p| self.act(g, p)).collect();
        self.chart.ideal(gens).expect("same ambient")
    }

    /// The first element that does not map `J` onto itself.
    pub fn non_invariant_element(&self, j: &IdealRecord) -> Option<String> {
        (0..self.order()).find_map(|g| {
            let img = self.act_ideal(g, j);
            (!(img.is_subset_of(j) && j.is_subset_of(&img))).then(|| self.elements[g].clone())
        })
    }
}

#[derive(Clone, Debug)]
pub struct EquivariantModule {
    pub groupoid: GroupActionGroupoid,
    pub module: FPModule,
    pub phis: Vec<Matrix>,
}

impl EquivariantModule {
    /// Checks shapes and that each `φ_g` is well defined on the `g`-twist.
    pub fn new(groupoid: &GroupActionGroupoid, module: &FPModule, phis: Vec<Matrix>) -> Result<Self> {
        if phis.len() != groupoid.order() {
            return Err(Error::Malformed(format!("{} matrices for {} group elements", phis.len(), groupoid.order())));
        }
        if module.ring() != &groupoid.chart {
            return Err(Error::AmbientMismatch("module is not over the chart".into()));
        }
        let e = EquivariantModule { groupoid: groupoid.clone(), module: module.clone(), phis };
        for g in 0..groupoid.order() {
            e.phi_map(g)?;
        }
        Ok(e)
    }

    /// The module `a_g^* M`, presented by the transformed relations.
    pub fn twist(&self, g: usize) -> FPModule {
        let rel = self.groupoid.act_matrix(g, self.module.relations());
        FPModule::coker(self.module.ring(), rel).expect("same shape")
    }

    pub fn phi_map(&self, g: usize) -> Result<ModuleMap> {
        ModuleMap::new(&self.twist(g), &self.module, self.phis[g].clone())
    }

    /// `ρ_g(s) = φ_g · a_g(s)`.
    pub fn act(&self, g: usize, s: &[Poly]) -> Vec<Poly> {
        self.phis[g].apply(self.module.ring(), &self.groupoid.act_vec(g, s))
    }

    /// Trivial action on a module.
    pub fn trivial(groupoid: &GroupActionGroupoid, module: &FPModule) -> Result<Self> {
        let n = module.num_gens();
        Self::new(groupoid, module, vec![Matrix::identity(module.ring(), n); groupoid.order()])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleCertificate {
    pub pairs_checked: usize,
    pub isomorphisms: Vec<bool>,
}

fn matrix_difference(module: &FPModule, a: &Matrix, b: &Matrix) -> Option<String> {
    let ring = module.ring();
    let span = module.relation_span();
    for j in 0..a.ncols() {
        let d: Vec<Poly> = a.col(j).iter().zip(b.col(j)).map(|(x, y)| ring.reduce(&x.sub(y))).collect();
        if !span.contains(&d) {
            let show = |m: &Matrix| m.col(j).iter().map(|p| ring.show(p)).collect::<Vec<_>>().join(", ");
            return Some(format!("composite={} expected={}", show(a), show(b)));
        }
    }
    None
}

/// Verifies `φ_e = 1` and `φ_{gh} = φ_g · a_g(φ_h)` for all pairs.
pub fn check_cocycle(e: &EquivariantModule) -> Result<CocycleCertificate> {
    let gp = &e.groupoid;
    let ring = e.module.ring();
    let id = Matrix::identity(ring, e.module.num_gens());
    if let Some(w) = matrix_difference(&e.module, &e.phis[0], &id) {
        return Err(Error::CocycleFailure { g: gp.elements[0].clone(), h: gp.elements[0].clone(), witness: w });
    }
    let mut pairs = 0;
    for g in 0..gp.order() {
        for h in 0..gp.order() {
            let composite = e.phis[g].mul(ring, &gp.act_matrix(g, &e.phis[h]));
            if let Some(w) = matrix_difference(&e.module, &composite, &e.phis[gp.table[g][h]]) {
                return Err(Error::CocycleFailure { g: gp.elements[g].clone(), h: gp.elements[h].clone(), witness: w });
            }
            pairs += 1;
        }
    }
    let isomorphisms = (0..gp.order()).map(|g| e.phi_map(g).map(|m| m.is_iso()).unwrap_or(false)).collect();
    Ok(CocycleCertificate { pairs_checked: pairs, isomorphisms })
}

/// A finite diagram of charts with a module on each and comparison maps
/// `f^* M_source -> M_target` along each edge.
#[derive(Clone, Debug)]
pub struct ChartFamily {
    pub modules: Vec<FPModule>,
    pub edges: Vec<DescentEdge>,
}

#[derive(Clone, Debug)]
pub struct DescentEdge {
    pub from: usize,
    pub to: usize,
    pub map: RingMapRecord,
    pub comparison: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EdgeVerdict {
    Iso,
    NotIso(IsoVerdict),
    Invalid(String),
}

pub fn descent_check(family: &ChartFamily) -> Vec<EdgeVerdict> {
    family
        .edges
        .iter()
        .map(|e| {
            let src = &family.modules[e.from];
            let tgt = &family.modules[e.to];
            let pulled = match base_change(src, &e.map.target, &e.map.images) {
                Ok(m) => m,
                Err(err) => return EdgeVerdict::Invalid(err.to_string()),
            };
            match ModuleMap::new(&pulled, tgt, e.comparison.clone()) {
                Ok(m) => match m.iso_verdict() {
                    IsoVerdict::Iso => EdgeVerdict::Iso,
                    v => EdgeVerdict::NotIso(v),
                },
                Err(err) => EdgeVerdict::Invalid(err.to_string()),
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct StackDivisor {
    pub equivariant: EquivariantModule,
    pub divisor: GeneralizedDivisor,
    pub dual_equivariant: EquivariantModule,
}

/// Certifies the chart module as a divisor and induces the dual structure
/// `ψ ↦ a_g(ψ) · φ_g^{-1}`, re-verifying its cocycle.
pub fn validate_stack_divisor(e: &EquivariantModule) -> Result<StackDivisor> {
    check_cocycle(e)?;
    let divisor = validate_divisor(&e.module)?;
    let d = &divisor.ideal_i;
    let gp = &e.groupoid;
    let mut dual_phis = Vec::new();
    for g in 0..gp.order() {
        let inv = e.phi_map(g)?.inverse().ok_or_else(|| Error::DualCocycleFailure(format!("φ_{} is not invertible", gp.elements[g])))?;
        let mut cols = Vec::new();
        for gen in &d.generators {
            let row = gp.act_matrix(g, gen).mul(e.module.ring(), &inv.matrix);
            let v = d
                .map_to_element(&row)
                .ok_or_else(|| Error::DualCocycleFailure(format!("twisted dual generator for {} is not a homomorphism", gp.elements[g])))?;
            cols.push(v);
        }
        dual_phis.push(Matrix::from_cols(d.module.num_gens(), cols));
    }
    let dual_equivariant =
        EquivariantModule::new(gp, &d.module, dual_phis).map_err(|err| Error::DualCocycleFailure(err.to_string()))?;
    check_cocycle(&dual_equivariant).map_err(|err| Error::DualCocycleFailure(err.to_string()))?;
    Ok(StackDivisor { equivariant: e.clone(), divisor, dual_equivariant })
}

impl StackDivisor {
    /// The effective divisor cut out by an invariant ideal `J`, with the
    /// structure induced by the action on `J^{-1}` inside the fractions.
    pub fn from_invariant_ideal(groupoid: &GroupActionGroupoid, j: &IdealRecord) -> Result<Self> {
        if let Some(g) = groupoid.non_invariant_element(j) {
            return Err(Error::NotInvariant(g));
        }
        let ring = &groupoid.chart;
        let gens: Vec<Poly> = j.generators().iter().map(|g| ring.reduce(g)).filter(|g| !g.is_zero()).collect();
        let frac = FractionalIdealRecord::new(ring, gens, ring.one())?;
        let mut divisor = GeneralizedDivisor::from_fractional(&frac)?;
        let (inv, _) = crate::divisor::fractional_inverse(&frac)?;
        // F has generators h_k / u; a_g(h_k / u) = sum_j c_j h_j / u.
        let u = &inv.denominator;
        let mut phis = Vec::new();
        for g in 0..groupoid.order() {
            let au = groupoid.act(g, u);
            let cols: Vec<Vec<Poly>> = inv.numerators.iter().map(|h| vec![ring.reduce(&au.mul(h))]).collect();
            let mut phi_cols = Vec::new();
            for h in &inv.numerators {
                let target = ring.reduce(&u.mul(&groupoid.act(g, h)));
                let l = lift(ring, 1, &cols, &[target]).ok_or_else(|| Error::NotInvariant(groupoid.elements[g].clone()))?;
                phi_cols.push(l.coeffs.iter().map(|c| ring.reduce(c)).collect());
            }
            phis.push(Matrix::from_cols(inv.numerators.len(), phi_cols));
        }
        let e = EquivariantModule::new(groupoid, &divisor.module_f, phis)?;
        let mut sd = validate_stack_divisor(&e)?;
        divisor.embedding = Some(Embedding::Fractional(frac));
        sd.divisor.embedding = divisor.embedding;
        Ok(sd)
    }
}

/// Invariant sections of bounded degree. For modules embedded in a free
/// module the bound applies to the embedded values.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSections {
    pub coords: Vec<Vec<Poly>>,
    pub values: Option<Vec<Vec<Poly>>>,
}

fn vec_coordinates(vs: &[Vec<Poly>]) -> Vec<Vec<crate::field::Coeff>> {
    let mut index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for v in vs {
        for (i, p) in v.iter().enumerate() {
            for (m, _) in p.terms() {
                let k = index.len();
                index.entry((i, m.clone())).or_insert(k);
            }
        }
    }
    vs.iter()
        .map(|v| {
            let field = v.first().map(|p| p.field()).expect("nonempty vector");
            let mut out = vec![field.zero(); index.len()];
            for (i, p) in v.iter().enumerate() {
                for (m, c) in p.terms() {
                    out[index[&(i, m.clone())]] = c.clone();
                }
            }
            out
        })
        .collect()
}

pub fn invariant_sections(e: &EquivariantModule, bound: u32) -> InvariantSections {
    let m = &e.module;
    let ring = m.ring();
    let field = ring.field();
    let span = m.relation_span();
    let mut basis: Vec<Vec<Poly>> = Vec::new();
    for i in 0..m.num_gens() {
        let shift = m
            .embedding()
            .and_then(|emb| emb.col(i).iter().filter_map(|p| p.total_degree()).max())
            .unwrap_or(0);
        if shift > bound {
            continue;
        }
        for mono in monomials_up_to(ring.nvars(), bound - shift) {
            let p = ring.reduce(&Poly::monomial(field, mono, field.one()));
            if p.is_zero() {
                continue;
            }
            let mut v = m.zero_vector();
            v[i] = p;
            if !span.contains(&v) && !basis.contains(&v) {
                basis.push(v);
            }
        }
    }
    if basis.is_empty() {
        return InvariantSections { coords: Vec::new(), values: m.embedding().map(|_| Vec::new()) };
    }
    // Columns: for each basis vector, the stacked differences ρ_g(b) - b.
    let mut stacked: Vec<Vec<Poly>> = basis.iter().map(|_| Vec::new()).collect();
    for g in 1..e.groupoid.order() {
        for (k, b) in basis.iter().enumerate() {
            let diff: Vec<Poly> = e.act(g, b).iter().zip(b).map(|(x, y)| ring.reduce(&x.sub(y))).collect();
            stacked[k].extend(span.reduce(&diff));
        }
    }
    let solutions: Vec<Vec<crate::field::Coeff>> = if stacked[0].is_empty() {
        (0..basis.len()).map(|k| (0..basis.len()).map(|j| if j == k { field.one() } else { field.zero() }).collect()).collect()
    } else {
        let cols = vec_coordinates(&stacked);
        let rows = cols[0].len();
        nullspace(field, rows, &cols)
    };
    let mut coords: Vec<Vec<Poly>> = Vec::new();
    for x in solutions {
        let mut s = m.zero_vector();
        for (c, b) in x.iter().zip(&basis) {
            for (si, bi) in s.iter_mut().zip(b) {
                *si = si.add(&bi.scale(c));
            }
        }
        let s = span.reduce(&s);
        if s.iter().all(Poly::is_zero) {
            continue;
        }
        let mut trial = coords.clone();
        trial.push(s.clone());
        let cs = vec_coordinates(&trial);
        if rank(field, cs[0].len(), &cs) == trial.len() {
            coords.push(s);
        }
    }
    let values = m.embedding().map(|emb| coords.iter().map(|c| emb.apply(ring, c)).collect());
    InvariantSections { coords, values }
}

/// The invariant ideal of the substack cut out by an effective stack divisor.
#[derive(Clone, Debug)]
pub struct Substack {
    pub subscheme: Subscheme,
}

pub fn stack_effective_to_substack(d: &StackDivisor, bound: u32) -> Result<Substack> {
    let eff = is_effective(&d.divisor, bound).ok_or_else(|| Error::Malformed("stack divisor is not effective".into()))?;
    if let Some(g) = d.equivariant.groupoid.non_invariant_element(&eff.ideal) {
        return Err(Error::NotInvariant(g));
    }
    let mut divisor = d.divisor.clone();
    divisor.embedding = Some(eff.embedding);
    Ok(Substack { subscheme: effective_to_subscheme(&divisor, bound)? })
}

/// The effective stack divisor of an invariant nondegenerate section.
pub fn section_to_stack_effective(d: &StackDivisor, s: &[Poly]) -> Result<(StackDivisor, IdealRecord)> {
    let e = &d.equivariant;
    let span = e.module.relation_span();
    for g in 0..e.groupoid.order() {
        let diff: Vec<Poly> = e.act(g, s).iter().zip(s).map(|(x, y)| e.module.ring().reduce(&x.sub(y))).collect();
        if !span.contains(&diff) {
            return Err(Error::NotInvariant(e.groupoid.elements[g].clone()));
        }
    }
    let divisor = section_to_effective(&d.divisor, s)?;
    let j = divisor.evaluation_ideal(s);
    if let Some(g) = e.groupoid.non_invariant_element(&j) {
        return Err(Error::NotInvariant(g));
    }
    Ok((StackDivisor { equivariant: e.clone(), divisor, dual_equivariant: d.dual_equivariant.clone() }, j))
}
