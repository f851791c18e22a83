//! Kernels and lifts for matrices over `R = P / I`, computed with module
//! Gröbner bases over `P`.
//!
//! Matrices are stored column-wise: `cols[j][i]` is the entry in row `i`,
//! column `j`.

use crate::field::Field;
use crate::groebner::{vec_is_zero, ModuleGb, ModuleOrder};
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::ring::QuotientRing;

fn zeros(field: Field, nvars: usize, n: usize) -> Vec<Poly> {
    (0..n).map(|_| Poly::zero(field, nvars)).collect()
}

/// Generators of `{ v in R^k : sum_j v_j cols[j] = 0 }` where each column
/// has `rows` entries.
pub fn kernel(ring: &QuotientRing, rows: usize, cols: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let (field, nv) = (ring.field(), ring.nvars());
    let k = cols.len();
    if k == 0 {
        return Vec::new();
    }
    let rel = ring.relation_basis();
    let mut gens = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        assert_eq!(c.len(), rows, "column length");
        let mut v = c.clone();
        v.extend(zeros(field, nv, k));
        v[rows + j] = Poly::one(field, nv);
        gens.push(v);
    }
    for g in rel {
        for i in 0..rows + k {
            let mut v = zeros(field, nv, rows + k);
            v[i] = g.clone();
            gens.push(v);
        }
    }
    let gb = ModuleGb::compute(field, nv, rows + k, ModuleOrder::pot(MonomialOrder::Grevlex), &gens);
    let mut out: Vec<Vec<Poly>> = Vec::new();
    for (e, l) in gb.elems.iter().zip(gb.leads()) {
        if l.pos < rows {
            continue;
        }
        let v: Vec<Poly> = e[rows..].iter().map(|p| ring.reduce(p)).collect();
        if !vec_is_zero(&v) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Certificate that `target = sum_j coeffs[j] * cols[j] + sum_{a,i} rel_cofactors[a][i] * g_a * e_i`,
/// where `g_a` runs over the relation basis of the ring.
#[derive(Clone, Debug)]
pub struct Lift {
    pub coeffs: Vec<Poly>,
    pub rel_cofactors: Vec<Vec<Poly>>,
}

/// Expresses `target` as a combination of the columns modulo the ring
/// relations, or `None` when it is not in their span.
pub fn lift(ring: &QuotientRing, rows: usize, cols: &[Vec<Poly>], target: &[Poly]) -> Option<Lift> {
    let (field, nv) = (ring.field(), ring.nvars());
    assert_eq!(target.len(), rows, "target length");
    let rel = ring.relation_basis();
    let k = cols.len();
    let tracked = k + rel.len() * rows;
    let width = rows + tracked;
    let mut gens = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        v.extend(zeros(field, nv, tracked));
        v[rows + j] = Poly::one(field, nv);
        gens.push(v);
    }
    for (a, g) in rel.iter().enumerate() {
        for i in 0..rows {
            let mut v = zeros(field, nv, width);
            v[i] = g.clone();
            v[rows + k + a * rows + i] = Poly::one(field, nv);
            gens.push(v);
        }
    }
    let gb = ModuleGb::compute(field, nv, width, ModuleOrder::pot(MonomialOrder::Grevlex), &gens);
    let mut t = target.to_vec();
    t.extend(zeros(field, nv, tracked));
    let r = gb.reduce(&t);
    if !vec_is_zero(&r[..rows]) {
        return None;
    }
    let neg: Vec<Poly> = r[rows..].iter().map(|p| p.neg()).collect();
    let coeffs = neg[..k].to_vec();
    let rel_cofactors = (0..rel.len()).map(|a| neg[k + a * rows..k + (a + 1) * rows].to_vec()).collect();
    Some(Lift { coeffs, rel_cofactors })
}

/// Checks a lift certificate by direct expansion over the ambient ring.
pub fn verify_lift(ring: &QuotientRing, rows: usize, cols: &[Vec<Poly>], target: &[Poly], lift: &Lift) -> bool {
    let rel = ring.relation_basis();
    if lift.coeffs.len() != cols.len() || lift.rel_cofactors.len() != rel.len() {
        return false;
    }
    (0..rows).all(|i| {
        let mut acc = target[i].clone();
        for (c, col) in lift.coeffs.iter().zip(cols) {
            acc = acc.sub(&c.mul(&col[i]));
        }
        for (g, cof) in rel.iter().zip(&lift.rel_cofactors) {
            acc = acc.sub(&cof[i].mul(g));
        }
        acc.is_zero()
    })
}

/// A submodule of `R^rows` spanned by columns, with a cached basis for
/// membership tests.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub rows: usize,
    pub cols: Vec<Vec<Poly>>,
    gb: ModuleGb,
}

impl Submodule {
    pub fn new(ring: &QuotientRing, rows: usize, cols: &[Vec<Poly>]) -> Self {
        let (field, nv) = (ring.field(), ring.nvars());
        let mut gens = cols.to_vec();
        for g in ring.relation_basis() {
            for i in 0..rows {
                let mut v = zeros(field, nv, rows);
                v[i] = g.clone();
                gens.push(v);
            }
        }
        let gb = ModuleGb::compute(field, nv, rows, ModuleOrder::top(MonomialOrder::Grevlex), &gens);
        Submodule { rows, cols: cols.to_vec(), gb }
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.gb.contains(v)
    }

    /// Canonical representative of `v` modulo the submodule.
    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        self.gb.reduce(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::ring::PolyRing;

    #[test]
    fn koszul_syzygy() {
        let r = QuotientRing::polynomial(Field::rationals(), &["x", "y"]);
        let (x, y) = (r.var(0), r.var(1));
        let k = kernel(&r, 1, &[vec![x.clone()], vec![y.clone()]]);
        assert_eq!(k.len(), 1);
        // (y, -x) up to sign
        let v = &k[0];
        assert!(v[0].mul(&x).add(&v[1].mul(&y)).is_zero());
        assert_eq!(v[0].total_degree(), Some(1));
    }

    #[test]
    fn annihilator_on_the_node() {
        let amb = PolyRing::new(Field::rationals(), &["x", "y"]);
        let node = QuotientRing::new(amb.clone(), vec![amb.var(0).mul(&amb.var(1))]).unwrap();
        let k = kernel(&node, 1, &[vec![node.var(0)]]);
        assert_eq!(k, vec![vec![node.var(1)]]);
    }

    #[test]
    fn lift_produces_checkable_cofactors() {
        let amb = PolyRing::new(Field::rationals(), &["x", "t"]);
        let (x, t) = (amb.var(0), amb.var(1));
        let rel = t.mul(&t).sub(&t).sub(&x);
        let a = QuotientRing::new(amb, vec![rel]).unwrap();
        let l = lift(&a, 1, &[vec![t.clone()]], &[x.clone()]).unwrap();
        assert!(verify_lift(&a, 1, &[vec![t.clone()]], &[x.clone()], &l));
        assert!(lift(&a, 1, &[vec![t.mul(&t)]], &[t.clone()]).is_none());
    }
}
