//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::field::{coeff_to_string, is_negative, Coeff, Field};
use crate::order::MonomialOrder;

/// Exponent vector.
pub type Monomial = Vec<u32>;

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a / b`, assuming `b` divides `a`.
pub fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// All exponent vectors in `nvars` variables of total degree at most `deg`,
/// in increasing degree and then lexicographic order.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=deg {
        let mut cur = vec![0u32; nvars];
        exact_degree(&mut cur, 0, d, &mut out);
    }
    out
}

fn exact_degree(cur: &mut Vec<u32>, idx: usize, left: u32, out: &mut Vec<Monomial>) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if idx == cur.len() - 1 {
        cur[idx] = left;
        out.push(cur.clone());
        cur[idx] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[idx] = e;
        exact_degree(cur, idx + 1, left - e, out);
    }
    cur[idx] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Coeff) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, Coeff::one())
    }

    pub fn from_i64(field: Field, nvars: usize, c: i64) -> Self {
        Self::constant(field, nvars, field.from_i64(c))
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(field, m, Coeff::one())
    }

    pub fn monomial(field: Field, mono: Monomial, c: Coeff) -> Self {
        let mut p = Self::zero(field, mono.len());
        p.add_term(mono, c);
        p
    }

    pub fn from_terms(field: Field, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|e| *e == 0))
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        let c = self.field.reduce(c);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = self.field.add(v, &c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(m)).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.involves(v)).collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().max_by(|a, b| order.compare(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<&Monomial> {
        self.leading(order).map(|(m, _)| m)
    }

    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Monomial, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.compare(b.0, a.0));
        v
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), self.field.neg(c));
        }
        r
    }

    pub fn neg(&self) -> Poly {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), self.field.mul(v, c))).collect();
        Poly { field: self.field, nvars: self.nvars, terms }
    }

    pub fn mul_term(&self, m: &[u32], c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (mono_mul(k, m), self.field.mul(v, c)))
            .collect();
        Poly { field: self.field, nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut r = Poly::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(mono_mul(m1, m2), self.field.mul(c1, c2));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.field, self.nvars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Poly {
        match self.leading(order) {
            Some((_, c)) => self.scale(&self.field.inv(c)),
            None => self.clone(),
        }
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut r = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            r.add_term(m2, self.field.mul(c, &self.field.from_i64(m[var] as i64)));
        }
        r
    }

    /// Substitutes `images[i]` for variable `i`; the images share a ring.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let (field, nv) = match images.first() {
            Some(p) => (p.field, p.nvars),
            None => (self.field, 0),
        };
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(field, nv)]; self.nvars];
        let mut r = Poly::zero(field, nv);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(field, nv, c.clone());
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap().mul(&images[v]);
                    powers[v].push(next);
                }
                t = t.mul(&powers[v][e as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// Re-embeds into a ring with `nvars` variables, sending variable `i` to `map[i]`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut r = Poly::zero(self.field, nvars);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] += e;
            }
            r.add_term(m2, c.clone());
        }
        r
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let order = MonomialOrder::Grevlex;
        let (lm, lc) = d.leading(&order)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(self.field, self.nvars);
        while let Some((m, c)) = rem.leading(&order) {
            if !mono_divides(&lm, m) {
                return None;
            }
            let qm = mono_div(m, &lm);
            let qc = self.field.div(c, &lc);
            rem = rem.sub(&d.mul_term(&qm, &qc));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Content monomial: the gcd of all terms' exponent vectors.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        it.fold(first.clone(), |acc, m| acc.iter().zip(m).map(|(a, b)| *a.min(b)).collect())
    }

    fn check_compatible(&self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomials live in different rings");
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    /// Canonical text: terms sorted by `order`, `*` for products and `^` for powers.
    pub fn to_text(&self, names: &[String], order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono_txt = mono_text(m, names);
            if mono_txt.is_empty() {
                out.push_str(&coeff_to_string(&abs));
            } else if abs.is_one() {
                out.push_str(&mono_txt);
            } else {
                let _ = write!(out, "{}*{}", coeff_to_string(&abs), mono_txt);
            }
        }
        out
    }
}

fn mono_text(m: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}
