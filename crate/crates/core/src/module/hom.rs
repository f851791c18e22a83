use crate::error::{Error, Result};
use crate::module::fp::{FPModule, Simplified};
use crate::module::matrix::Matrix;
use crate::poly::Poly;
use crate::ring::QuotientRing;
use crate::syzygy::{kernel, lift, Submodule};

/// `(span G + span Q) / span Q` inside `R^k`.
pub fn subquotient(ring: &QuotientRing, k: usize, g: &[Vec<Poly>], q: &[Vec<Poly>]) -> FPModule {
    let mut cols = g.to_vec();
    cols.extend(q.iter().cloned());
    let n = g.len();
    let syz: Vec<Vec<Poly>> = kernel(ring, k, &cols)
        .into_iter()
        .map(|v| v[..n].to_vec())
        .filter(|v| !v.iter().all(Poly::is_zero))
        .collect();
    FPModule::new(ring, n, Matrix::from_cols(n, syz)).expect("kernel of matching width")
}

/// A homomorphism `source -> target` given on generators: column `j` holds
/// the target coordinates of the image of generator `j`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: Matrix,
}

/// Outcome of an isomorphism test with a witness when it fails.
#[derive(Clone, Debug, PartialEq)]
pub enum IsoVerdict {
    Iso,
    /// A kernel element not killed in the source.
    NotInjective(Vec<Poly>),
    /// Index of a target generator outside the image.
    NotSurjective(usize),
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Iso)
    }
}

impl ModuleMap {
    pub fn new(source: &FPModule, target: &FPModule, matrix: Matrix) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::AmbientMismatch(format!("source over {}, target over {}", source.ring(), target.ring())));
        }
        if matrix.nrows() != target.num_gens() || matrix.ncols() != source.num_gens() {
            return Err(Error::Malformed(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.num_gens(),
                source.num_gens()
            )));
        }
        let ring = source.ring();
        let matrix = matrix.reduce(ring);
        let span = target.relation_span();
        for (j, rel) in source.relations().cols().iter().enumerate() {
            let img = matrix.apply(ring, rel);
            if !span.contains(&img) {
                return Err(Error::NotWellDefined(format!("relation {} of the source does not map to zero", j)));
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn identity(m: &FPModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.ring(), m.num_gens()) }
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        self.matrix.apply(self.source.ring(), v)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(self.source.ring(), &first.matrix),
        }
    }

    /// Generators (source coordinates) of the kernel, before removing those
    /// already zero in the source.
    pub fn kernel_generators(&self) -> Vec<Vec<Poly>> {
        let ring = self.source.ring();
        let s = self.source.num_gens();
        let mut cols = self.matrix.cols().to_vec();
        cols.extend(self.target.relations().cols().iter().cloned());
        kernel(ring, self.target.num_gens(), &cols)
            .into_iter()
            .map(|v| v[..s].to_vec())
            .filter(|v| !v.iter().all(Poly::is_zero))
            .collect()
    }

    pub fn kernel(&self) -> FPModule {
        subquotient(self.source.ring(), self.source.num_gens(), &self.kernel_generators(), self.source.relations().cols())
    }

    pub fn cokernel(&self) -> FPModule {
        let m = self.target.relations().hcat(&self.matrix);
        FPModule::coker(self.source.ring(), m).expect("matching rows")
    }

    pub fn is_injective(&self) -> std::result::Result<(), Vec<Poly>> {
        let span = self.source.relation_span();
        for v in self.kernel_generators() {
            if !span.contains(&v) {
                return Err(v);
            }
        }
        Ok(())
    }

    pub fn is_surjective(&self) -> std::result::Result<(), usize> {
        self.cokernel().zero_test()
    }

    pub fn iso_verdict(&self) -> IsoVerdict {
        if let Err(v) = self.is_injective() {
            return IsoVerdict::NotInjective(v);
        }
        if let Err(i) = self.is_surjective() {
            return IsoVerdict::NotSurjective(i);
        }
        IsoVerdict::Iso
    }

    pub fn is_iso(&self) -> bool {
        self.iso_verdict().is_iso()
    }

    /// Equality as maps: every generator has the same image.
    pub fn equals(&self, other: &ModuleMap) -> bool {
        let ring = self.source.ring();
        let span = self.target.relation_span();
        self.matrix.cols().iter().zip(other.matrix.cols()).all(|(a, b)| {
            let d: Vec<Poly> = a.iter().zip(b).map(|(x, y)| ring.reduce(&x.sub(y))).collect();
            span.contains(&d)
        })
    }

    /// An inverse constructed by lifting target generators, when the map is
    /// an isomorphism.
    pub fn inverse(&self) -> Option<ModuleMap> {
        if !self.is_iso() {
            return None;
        }
        let ring = self.source.ring();
        let t = self.target.num_gens();
        let mut cols = self.matrix.cols().to_vec();
        cols.extend(self.target.relations().cols().iter().cloned());
        let s = self.source.num_gens();
        let mut inv = Vec::new();
        for i in 0..t {
            let l = lift(ring, t, &cols, &self.target.unit_vector(i))?;
            inv.push(l.coeffs[..s].to_vec());
        }
        ModuleMap::new(&self.target, &self.source, Matrix::from_cols(s, inv)).ok()
    }
}

/// `H = Hom_R(M, N)` with each generator realized as an `n x m` matrix.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub source: FPModule,
    pub target: FPModule,
    pub module: FPModule,
    /// Matrices of the generators of `module`.
    pub generators: Vec<Matrix>,
    cycles: Vec<Vec<Poly>>,
    boundaries: Vec<Vec<Poly>>,
    simplified: Simplified,
}

fn flatten(m: &Matrix) -> Vec<Poly> {
    m.cols().iter().flat_map(|c| c.iter().cloned()).collect()
}

fn unflatten(v: &[Poly], rows: usize, cols: usize) -> Matrix {
    Matrix::from_cols(rows, (0..cols).map(|j| v[j * rows..(j + 1) * rows].to_vec()).collect())
}

/// Cycles and boundaries of `Hom(F_i, N)` for a complex
/// `F_{i-1} <-prev- F_i <-next- F_{i+1}`, as flattened `n x f_i` matrices.
fn cochain_data(ring: &QuotientRing, n_mod: &FPModule, fi: usize, next: &Matrix, prev: Option<&Matrix>) -> (Vec<Vec<Poly>>, Vec<Vec<Poly>>) {
    let n = n_mod.num_gens();
    let b = n_mod.relations();
    let r = next.ncols();
    let nb = b.ncols();
    let width = n * fi;
    let rows = n * r;
    // Unknowns: phi (n*fi entries), then z_k in R^{nb} for each next column k.
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    for j in 0..fi {
        for i in 0..n {
            let mut c = vec![ring.zero(); rows];
            for k in 0..r {
                c[k * n + i] = next.entry(j, k).clone();
            }
            cols.push(c);
        }
    }
    for k in 0..r {
        for l in 0..nb {
            let mut c = vec![ring.zero(); rows];
            for i in 0..n {
                c[k * n + i] = b.entry(i, l).neg();
            }
            cols.push(c);
        }
    }
    let cycles: Vec<Vec<Poly>> = if r == 0 {
        (0..width)
            .map(|idx| {
                let mut v = vec![ring.zero(); width];
                v[idx] = ring.one();
                v
            })
            .collect()
    } else {
        kernel(ring, rows, &cols)
            .into_iter()
            .map(|v| v[..width].to_vec())
            .filter(|v| !v.iter().all(Poly::is_zero))
            .collect()
    };
    let mut boundaries = Vec::new();
    for j in 0..fi {
        for l in 0..nb {
            let mut v = vec![ring.zero(); width];
            for i in 0..n {
                v[j * n + i] = b.entry(i, l).clone();
            }
            boundaries.push(v);
        }
    }
    if let Some(d) = prev {
        // E_{r,c} d: row r of the result is row c of d.
        for rr in 0..n {
            for c in 0..d.nrows() {
                let mut v = vec![ring.zero(); width];
                for j in 0..fi {
                    v[j * n + rr] = d.entry(c, j).clone();
                }
                if !v.iter().all(Poly::is_zero) {
                    boundaries.push(v);
                }
            }
        }
    }
    (cycles, boundaries)
}

impl HomModule {
    fn from_cochain(source: &FPModule, target: &FPModule, fi: usize, cycles: Vec<Vec<Poly>>, boundaries: Vec<Vec<Poly>>) -> Self {
        let ring = source.ring();
        let n = target.num_gens();
        let raw = subquotient(ring, n * fi, &cycles, &boundaries);
        let simplified = raw.simplify();
        let generators = simplified.kept.iter().map(|&k| unflatten(&cycles[k], n, fi)).collect();
        HomModule {
            source: source.clone(),
            target: target.clone(),
            module: simplified.module.clone(),
            generators,
            cycles,
            boundaries,
            simplified,
        }
    }

    /// The map with coordinates `v` in `module`.
    pub fn element_to_map(&self, v: &[Poly]) -> ModuleMap {
        let ring = self.source.ring();
        let mut acc = Matrix::zeros(ring, self.target.num_gens(), self.source.num_gens());
        for (g, c) in self.generators.iter().zip(v) {
            if c.is_zero() {
                continue;
            }
            acc = Matrix::from_cols(
                acc.nrows(),
                acc.cols().iter().zip(g.cols()).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(&y.mul(c))).collect()).collect(),
            );
        }
        ModuleMap { source: self.source.clone(), target: self.target.clone(), matrix: acc.reduce(ring) }
    }

    /// Coordinates in `module` of a map given by its matrix.
    pub fn map_to_element(&self, m: &Matrix) -> Option<Vec<Poly>> {
        let ring = self.source.ring();
        let width = self.target.num_gens() * self.source.num_gens();
        let mut cols = self.cycles.clone();
        cols.extend(self.boundaries.iter().cloned());
        let l = lift(ring, width, &cols, &flatten(&m.reduce(ring)))?;
        let raw = &l.coeffs[..self.cycles.len()];
        Some(self.module.normalize(&self.simplified.coords.apply(ring, raw)))
    }
}

pub fn hom_module(m: &FPModule, n: &FPModule) -> HomModule {
    let (c, b) = cochain_data(m.ring(), n, m.num_gens(), m.relations(), None);
    HomModule::from_cochain(m, n, m.num_gens(), c, b)
}

/// `M^∨ = Hom(M, R)`.
pub fn dual(m: &FPModule) -> HomModule {
    hom_module(m, &FPModule::free(m.ring(), 1))
}

/// Differentials `d_1, ..., d_len` of a free resolution of `M`;
/// `d_i : F_i -> F_{i-1}` as an `f_{i-1} x f_i` matrix.
pub fn resolution(m: &FPModule, len: usize) -> Vec<Matrix> {
    let ring = m.ring();
    let mut ds = vec![m.relations().clone()];
    while ds.len() < len {
        let last = ds.last().unwrap();
        let syz = kernel(ring, last.nrows(), last.cols());
        ds.push(Matrix::from_cols(last.ncols(), syz));
    }
    ds.truncate(len.max(1));
    ds
}

/// `Ext^i_R(M, N)` computed from a truncated free resolution of `M`.
pub fn ext(i: usize, m: &FPModule, n: &FPModule) -> FPModule {
    if i == 0 {
        return hom_module(m, n).module;
    }
    let ds = resolution(m, i + 1);
    let fi = ds[i - 1].ncols();
    let (c, b) = cochain_data(m.ring(), n, fi, &ds[i], Some(&ds[i - 1]));
    let ring = m.ring();
    subquotient(ring, n.num_gens() * fi, &c, &b).simplify().module
}

/// The canonical map `M -> M^∨∨`, together with both duals.
pub struct Biduality {
    pub dual: HomModule,
    pub bidual: HomModule,
    pub map: ModuleMap,
}

pub fn biduality_map(m: &FPModule) -> Biduality {
    let d = dual(m);
    let dd = dual(&d.module);
    let ring = m.ring();
    let mut cols = Vec::new();
    for j in 0..m.num_gens() {
        // Evaluation at generator j: each dual generator phi_k goes to phi_k(e_j).
        let row: Vec<Vec<Poly>> = d.generators.iter().map(|g| vec![g.entry(0, j).clone()]).collect();
        let ev = Matrix::from_cols(1, row);
        cols.push(dd.map_to_element(&ev).expect("evaluation is a homomorphism"));
    }
    let map = ModuleMap {
        source: m.clone(),
        target: dd.module.clone(),
        matrix: Matrix::from_cols(dd.module.num_gens(), cols).reduce(ring),
    };
    Biduality { dual: d, bidual: dd, map }
}

pub fn is_reflexive(m: &FPModule) -> bool {
    biduality_map(m).map.is_iso()
}

/// The module of syzygies of the presentation matrix's columns.
pub fn syzygy_module(m: &FPModule) -> FPModule {
    let rel = m.relations();
    FPModule::from_submodule(m.ring(), rel.ncols(), kernel(m.ring(), rel.nrows(), rel.cols()))
}

/// Span of the columns of `m` as a submodule of the target free module.
pub fn column_span(ring: &QuotientRing, m: &Matrix) -> Submodule {
    Submodule::new(ring, m.nrows(), m.cols())
}
