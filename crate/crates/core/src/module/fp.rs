use crate::error::{Error, Result};
use crate::ideal::intersect;
use crate::module::matrix::{determinant, for_each_subset, Matrix};
use crate::poly::Poly;
use crate::primes::PrimeRecord;
use crate::ring::{IdealRecord, QuotientRing};
use crate::syzygy::{kernel, Submodule};

/// `R^gens / (column span of relations)`.
///
/// `embedding`, when present, records each generator's value in a free
/// module `R^k` (columns), for modules that arose as submodules of free
/// modules.
#[derive(Clone, Debug)]
pub struct FPModule {
    ring: QuotientRing,
    gens: usize,
    relations: Matrix,
    embedding: Option<Matrix>,
}

impl PartialEq for FPModule {
    /// Same ring and same presentation (not abstract isomorphism).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.relations == other.relations
    }
}

impl FPModule {
    pub fn new(ring: &QuotientRing, gens: usize, relations: Matrix) -> Result<Self> {
        if relations.nrows() != gens {
            return Err(Error::Malformed(format!(
                "presentation matrix has {} rows for {} generators",
                relations.nrows(),
                gens
            )));
        }
        for c in relations.cols() {
            for p in c {
                ring.ambient().check(p)?;
            }
        }
        let relations = Matrix::from_cols(
            gens,
            relations
                .reduce(ring)
                .cols()
                .iter()
                .filter(|c| !c.iter().all(Poly::is_zero))
                .cloned()
                .collect(),
        );
        Ok(FPModule { ring: ring.clone(), gens, relations, embedding: None })
    }

    pub fn free(ring: &QuotientRing, rank: usize) -> Self {
        FPModule { ring: ring.clone(), gens: rank, relations: Matrix::empty(rank), embedding: None }
    }

    /// The cokernel of a matrix.
    pub fn coker(ring: &QuotientRing, m: Matrix) -> Result<Self> {
        Self::new(ring, m.nrows(), m)
    }

    /// The submodule of `R^k` spanned by columns, presented by its syzygies.
    pub fn from_submodule(ring: &QuotientRing, rows: usize, cols: Vec<Vec<Poly>>) -> Self {
        let cols: Vec<Vec<Poly>> = cols.iter().map(|c| c.iter().map(|p| ring.reduce(p)).collect()).collect();
        let syz = kernel(ring, rows, &cols);
        let n = cols.len();
        let relations = Matrix::from_cols(n, syz);
        FPModule { ring: ring.clone(), gens: n, relations, embedding: Some(Matrix::from_cols(rows, cols)) }
    }

    /// An ideal of the ring as a module, generated by `gens`.
    pub fn from_ideal(ring: &QuotientRing, gens: &[Poly]) -> Self {
        Self::from_submodule(ring, 1, gens.iter().map(|g| vec![g.clone()]).collect())
    }

    pub fn with_embedding(mut self, embedding: Matrix) -> Self {
        assert_eq!(embedding.ncols(), self.gens, "one embedding column per generator");
        self.embedding = Some(embedding);
        self
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn num_gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn embedding(&self) -> Option<&Matrix> {
        self.embedding.as_ref()
    }

    pub fn is_free_presentation(&self) -> bool {
        self.relations.ncols() == 0
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Poly> {
        let mut v = vec![self.ring.zero(); self.gens];
        v[i] = self.ring.one();
        v
    }

    pub fn zero_vector(&self) -> Vec<Poly> {
        vec![self.ring.zero(); self.gens]
    }

    pub fn relation_span(&self) -> Submodule {
        Submodule::new(&self.ring, self.gens, self.relations.cols())
    }

    /// Whether a coordinate vector represents zero in the module.
    pub fn is_zero_element(&self, v: &[Poly]) -> bool {
        self.relation_span().contains(v)
    }

    /// `Ok(())` when the module is zero, else the index of a surviving generator.
    pub fn zero_test(&self) -> std::result::Result<(), usize> {
        let span = self.relation_span();
        for i in 0..self.gens {
            if !span.contains(&self.unit_vector(i)) {
                return Err(i);
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.zero_test().is_ok()
    }

    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        let relations = Matrix::block_sum(&self.ring, &self.relations, &other.relations);
        FPModule { ring: self.ring.clone(), gens: self.gens + other.gens, relations, embedding: None }
    }

    /// `Ann(M)`, as an ideal of the ambient ring containing the relations.
    pub fn annihilator(&self) -> IdealRecord {
        let mut acc = IdealRecord::unit(self.ring.ambient());
        for i in 0..self.gens {
            let mut cols = vec![self.unit_vector(i)];
            cols.extend(self.relations.cols().iter().cloned());
            let gens: Vec<Poly> = kernel(&self.ring, self.gens, &cols).into_iter().map(|v| v[0].clone()).collect();
            let ann = self.ring.ideal(gens).expect("same ambient");
            acc = intersect(&acc, &ann).expect("same ambient");
        }
        acc.sum(self.ring.relations()).canonical()
    }

    /// `Fitt_j(M)`: the ideal of `(gens - j)`-minors of the presentation.
    pub fn fitting_ideal(&self, j: usize) -> IdealRecord {
        let mut minors = Vec::new();
        self.visit_minors(j, &mut |d| {
            minors.push(d);
            false
        });
        self.ring.ideal(minors).expect("same ambient").canonical()
    }

    /// Whether some `(gens - j)`-minor lies outside `p`; returns that minor.
    pub fn fitting_minor_outside(&self, j: usize, p: &PrimeRecord) -> Option<Poly> {
        let mut found = None;
        self.visit_minors(j, &mut |d| {
            if !p.contains(&d) {
                found = Some(d);
                true
            } else {
                false
            }
        });
        found
    }

    fn visit_minors(&self, j: usize, visit: &mut dyn FnMut(Poly) -> bool) {
        if j >= self.gens {
            visit(self.ring.one());
            return;
        }
        let size = self.gens - j;
        let ncols = self.relations.ncols();
        let m = &self.relations;
        let ring = &self.ring;
        for_each_subset(self.gens, size, &mut |rows| {
            for_each_subset(ncols, size, &mut |cols| {
                let sub: Vec<Vec<Poly>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| m.entry(r, c).clone()).collect()).collect();
                let d = determinant(ring, &sub);
                if d.is_zero() {
                    return false;
                }
                visit(d)
            })
        });
    }

    /// Removes generators killed by relations with a unit entry; returns the
    /// smaller presentation together with the indices of the kept generators
    /// and, for each old generator, its coordinates in the new presentation.
    pub fn simplify(&self) -> Simplified {
        let ring = &self.ring;
        let field = ring.field();
        let mut rel: Vec<Vec<Poly>> = self.relations.cols().to_vec();
        let mut kept: Vec<usize> = (0..self.gens).collect();
        let mut coords: Vec<Vec<Poly>> = (0..self.gens).map(|i| self.unit_vector(i)).collect();
        loop {
            let mut pivot = None;
            'search: for (c, col) in rel.iter().enumerate() {
                for (i, e) in col.iter().enumerate() {
                    if e.is_constant() && !e.is_zero() {
                        pivot = Some((c, i));
                        break 'search;
                    }
                }
            }
            let Some((c, i)) = pivot else { break };
            let u = rel[c][i].constant_term();
            let uinv = field.inv(&u);
            let pcol = rel[c].clone();
            // e_i = -(1/u) * sum_{k != i} pcol[k] e_k
            let expr: Vec<Poly> = pcol.iter().map(|p| p.scale(&field.neg(&uinv))).collect();
            let mut new_rel = Vec::new();
            for (c2, col) in rel.iter().enumerate() {
                if c2 == c {
                    continue;
                }
                let factor = col[i].clone();
                let mut v: Vec<Poly> = col.clone();
                if !factor.is_zero() {
                    for (k, x) in v.iter_mut().enumerate() {
                        *x = ring.reduce(&x.add(&factor.mul(&expr[k])));
                    }
                }
                v.remove(i);
                if !v.iter().all(Poly::is_zero) {
                    new_rel.push(v);
                }
            }
            rel = new_rel;
            for co in coords.iter_mut() {
                let f = co[i].clone();
                if !f.is_zero() {
                    for (k, x) in co.iter_mut().enumerate() {
                        if k != i {
                            *x = ring.reduce(&x.add(&f.mul(&expr[k])));
                        }
                    }
                }
                co.remove(i);
            }
            kept.remove(i);
        }
        rel.dedup();
        let gens = kept.len();
        let embedding = self.embedding.as_ref().map(|e| Matrix::from_cols(e.nrows(), kept.iter().map(|&k| e.col(k).to_vec()).collect()));
        let module = FPModule { ring: ring.clone(), gens, relations: Matrix::from_cols(gens, rel), embedding };
        Simplified { module, kept, coords: Matrix::from_cols(gens, coords) }
    }

    /// Canonical coordinate representative of an element.
    pub fn normalize(&self, v: &[Poly]) -> Vec<Poly> {
        self.relation_span().reduce(v)
    }

    pub fn show(&self) -> String {
        format!("coker {} gens {}", self.relations.show(&self.ring), self.gens)
    }
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub module: FPModule,
    /// Old generator index of each new generator.
    pub kept: Vec<usize>,
    /// Column `o`: coordinates of old generator `o` in the new presentation.
    pub coords: Matrix,
}
