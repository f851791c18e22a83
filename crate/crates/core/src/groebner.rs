//! Buchberger's algorithm for submodules of free modules `P^r` over a
//! polynomial ring `P`. Ideals are the rank-one case.
//!
//! Pairs are selected by the normal strategy (smallest lcm degree, ties
//! broken by the lexicographically smallest lcm). The chain criterion is
//! used for every rank, the coprime criterion only for ideals.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::Zero;

use crate::field::{Coeff, Field};
use crate::order::MonomialOrder;
use crate::poly::{mono_degree, mono_div, mono_divides, mono_lcm, Monomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PositionOrder {
    /// Position over term; lower positions dominate.
    Pot,
    /// Term over position; ties go to the lower position.
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub pos: PositionOrder,
}

impl ModuleOrder {
    pub fn pot(mono: MonomialOrder) -> Self {
        ModuleOrder { mono, pos: PositionOrder::Pot }
    }

    pub fn top(mono: MonomialOrder) -> Self {
        ModuleOrder { mono, pos: PositionOrder::Top }
    }

    fn compare(&self, a: (usize, &[u32]), b: (usize, &[u32])) -> Ordering {
        match self.pos {
            PositionOrder::Pot => b.0.cmp(&a.0).then_with(|| self.mono.compare(a.1, b.1)),
            PositionOrder::Top => self.mono.compare(a.1, b.1).then_with(|| b.0.cmp(&a.0)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lead {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: Coeff,
}

pub fn lead(v: &[Poly], order: &ModuleOrder) -> Option<Lead> {
    let mut best: Option<(usize, &Monomial, &Coeff)> = None;
    for (i, p) in v.iter().enumerate() {
        let Some((m, c)) = p.leading(&order.mono) else { continue };
        if order.pos == PositionOrder::Pot {
            return Some(Lead { pos: i, mono: m.clone(), coeff: c.clone() });
        }
        best = match best {
            Some(b) if order.compare((b.0, b.1), (i, m)) != Ordering::Less => Some(b),
            _ => Some((i, m, c)),
        };
    }
    best.map(|(pos, m, c)| Lead { pos, mono: m.clone(), coeff: c.clone() })
}

pub fn vec_is_zero(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

fn vec_sub_scaled(a: &mut [Poly], b: &[Poly], mono: &[u32], c: &Coeff) {
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x = x.sub(&y.mul_term(mono, c));
        }
    }
}

fn vec_scale(v: &[Poly], mono: &[u32], c: &Coeff) -> Vec<Poly> {
    v.iter().map(|p| p.mul_term(mono, c)).collect()
}

/// A Gröbner basis of a submodule of `P^rank`.
#[derive(Clone, Debug)]
pub struct ModuleGb {
    pub field: Field,
    pub nvars: usize,
    pub rank: usize,
    pub order: ModuleOrder,
    pub elems: Vec<Vec<Poly>>,
    leads: Vec<Lead>,
}

impl ModuleGb {
    pub fn compute(field: Field, nvars: usize, rank: usize, order: ModuleOrder, gens: &[Vec<Poly>]) -> Self {
        let mut gb = ModuleGb { field, nvars, rank, order, elems: Vec::new(), leads: Vec::new() };
        gb.buchberger(gens);
        gb.interreduce();
        gb
    }

    pub fn leads(&self) -> &[Lead] {
        &self.leads
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    fn push(&mut self, v: Vec<Poly>) -> usize {
        let l = lead(&v, &self.order).expect("nonzero basis element");
        let inv = self.field.inv(&l.coeff);
        let one = vec![0; self.nvars];
        let v = vec_scale(&v, &one, &inv);
        self.leads.push(Lead { coeff: self.field.one(), ..l });
        self.elems.push(v);
        self.elems.len() - 1
    }

    fn find_reducer(&self, l: &Lead) -> Option<usize> {
        self.leads.iter().position(|g| g.pos == l.pos && mono_divides(&g.mono, &l.mono))
    }

    /// Reduces only the leading term until it is irreducible.
    fn top_reduce(&self, mut v: Vec<Poly>) -> Vec<Poly> {
        while let Some(l) = lead(&v, &self.order) {
            let Some(k) = self.find_reducer(&l) else { break };
            let q = mono_div(&l.mono, &self.leads[k].mono);
            vec_sub_scaled(&mut v, &self.elems[k], &q, &l.coeff);
        }
        v
    }

    /// Full normal form.
    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.rank, "vector rank mismatch");
        let mut p = v.to_vec();
        let mut r: Vec<Poly> = (0..self.rank).map(|_| Poly::zero(self.field, self.nvars)).collect();
        while let Some(l) = lead(&p, &self.order) {
            match self.find_reducer(&l) {
                Some(k) => {
                    let q = mono_div(&l.mono, &self.leads[k].mono);
                    vec_sub_scaled(&mut p, &self.elems[k], &q, &l.coeff);
                }
                None => {
                    let t = Poly::monomial(self.field, l.mono.clone(), l.coeff.clone());
                    p[l.pos] = p[l.pos].sub(&t);
                    r[l.pos] = r[l.pos].add(&t);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    fn buchberger(&mut self, gens: &[Vec<Poly>]) {
        // (lcm degree, lcm, pos, i, j)
        let mut queue: BTreeSet<(u32, Monomial, usize, usize, usize)> = BTreeSet::new();
        let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
        let add = |gb: &mut ModuleGb,
                   v: Vec<Poly>,
                   queue: &mut BTreeSet<(u32, Monomial, usize, usize, usize)>,
                   pending: &mut BTreeSet<(usize, usize)>| {
            let j = gb.push(v);
            for i in 0..j {
                if gb.leads[i].pos != gb.leads[j].pos {
                    continue;
                }
                let l = mono_lcm(&gb.leads[i].mono, &gb.leads[j].mono);
                queue.insert((mono_degree(&l), l, gb.leads[j].pos, i, j));
                pending.insert((i, j));
            }
        };
        for g in gens {
            assert_eq!(g.len(), self.rank, "generator rank mismatch");
            let v = self.top_reduce(g.clone());
            if !vec_is_zero(&v) {
                add(self, v, &mut queue, &mut pending);
            }
        }
        while let Some(key) = queue.pop_first() {
            let (_, l, pos, i, j) = key;
            pending.remove(&(i, j));
            if self.rank == 1 && coprime(&self.leads[i].mono, &self.leads[j].mono) {
                continue;
            }
            if self.chain_criterion(i, j, pos, &l, &pending) {
                continue;
            }
            let s = self.s_vector(i, j, &l);
            let s = self.top_reduce(s);
            if !vec_is_zero(&s) {
                add(self, s, &mut queue, &mut pending);
            }
        }
    }

    fn chain_criterion(&self, i: usize, j: usize, pos: usize, l: &[u32], pending: &BTreeSet<(usize, usize)>) -> bool {
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        (0..self.leads.len()).any(|k| {
            k != i
                && k != j
                && self.leads[k].pos == pos
                && mono_divides(&self.leads[k].mono, l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        })
    }

    fn s_vector(&self, i: usize, j: usize, l: &[u32]) -> Vec<Poly> {
        let one = self.field.one();
        let mi = mono_div(l, &self.leads[i].mono);
        let mj = mono_div(l, &self.leads[j].mono);
        let mut s = vec_scale(&self.elems[i], &mi, &one);
        vec_sub_scaled(&mut s, &self.elems[j], &mj, &one);
        s
    }

    fn interreduce(&mut self) {
        let n = self.elems.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || !keep[j] || self.leads[i].pos != self.leads[j].pos {
                    continue;
                }
                if mono_divides(&self.leads[j].mono, &self.leads[i].mono)
                    && (self.leads[i].mono != self.leads[j].mono || j < i)
                {
                    keep[i] = false;
                    break;
                }
            }
        }
        let elems: Vec<_> = self.elems.drain(..).zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();
        self.leads.clear();
        let mut minimal = ModuleGb {
            field: self.field,
            nvars: self.nvars,
            rank: self.rank,
            order: self.order.clone(),
            elems: Vec::new(),
            leads: Vec::new(),
        };
        for e in &elems {
            minimal.push(e.clone());
        }
        let mut reduced = Vec::with_capacity(elems.len());
        for k in 0..minimal.elems.len() {
            let l = minimal.leads[k].clone();
            let mut tail = minimal.elems[k].clone();
            let t = Poly::monomial(self.field, l.mono.clone(), l.coeff.clone());
            tail[l.pos] = tail[l.pos].sub(&t);
            let others = ModuleGb {
                field: self.field,
                nvars: self.nvars,
                rank: self.rank,
                order: self.order.clone(),
                elems: minimal.elems.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, e)| e.clone()).collect(),
                leads: minimal.leads.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, e)| e.clone()).collect(),
            };
            let mut r = others.reduce(&tail);
            r[l.pos] = r[l.pos].add(&t);
            reduced.push(r);
        }
        let order = self.order.clone();
        reduced.sort_by(|a, b| {
            let la = lead(a, &order).unwrap();
            let lb = lead(b, &order).unwrap();
            order.compare((lb.pos, &lb.mono), (la.pos, &la.mono))
        });
        for r in reduced {
            self.push(r);
        }
    }
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.is_zero() || y.is_zero())
}

/// Reduced Gröbner basis of an ideal of `P`.
pub fn ideal_basis(field: Field, nvars: usize, order: &MonomialOrder, gens: &[Poly]) -> Vec<Poly> {
    let vecs: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
    let gb = ModuleGb::compute(field, nvars, 1, ModuleOrder::top(order.clone()), &vecs);
    gb.elems.into_iter().map(|mut v| v.pop().unwrap()).collect()
}

/// Normal form of `f` with respect to a Gröbner basis of an ideal.
pub fn normal_form(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Poly {
    let gb = ideal_gb_from_basis(f.field(), f.nvars(), order, basis);
    gb.reduce(&[f.clone()]).pop().unwrap()
}

/// Wraps an already-computed basis without recomputation.
pub fn ideal_gb_from_basis(field: Field, nvars: usize, order: &MonomialOrder, basis: &[Poly]) -> ModuleGb {
    let mut gb = ModuleGb {
        field,
        nvars,
        rank: 1,
        order: ModuleOrder::top(order.clone()),
        elems: Vec::new(),
        leads: Vec::new(),
    };
    for b in basis {
        if !b.is_zero() {
            gb.push(vec![b.clone()]);
        }
    }
    gb
}
