//! Minimal primes for a supported class of ideals, and prime records with
//! an explicit trust level.
//!
//! Supported: monomial ideals, linear ideals, ideals with a generator that
//! solves for one variable (eliminated by substitution), ideals containing
//! a monomial or a reducible generator (split along the factors), principal
//! ideals whose square-free part splits into certified irreducibles, and
//! user-declared components.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::ideal::intersect;
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::ring::{IdealRecord, QuotientRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Trust {
    Computed,
    Declared,
    Trusted,
}

impl Trust {
    pub fn as_str(&self) -> &'static str {
        match self {
            Trust::Computed => "COMPUTED",
            Trust::Declared => "DECLARED",
            Trust::Trusted => "TRUSTED",
        }
    }
}

/// A prime of a ring, stored as an ideal of the ambient polynomial ring
/// containing the ring relations.
#[derive(Clone, Debug)]
pub struct PrimeRecord {
    pub ideal: IdealRecord,
    pub trust: Trust,
}

impl PartialEq for PrimeRecord {
    fn eq(&self, other: &Self) -> bool {
        self.ideal == other.ideal
    }
}

impl PrimeRecord {
    /// Verifies primality within the supported class.
    pub fn declared(ring: &QuotientRing, gens: Vec<Poly>) -> Result<Self> {
        let ideal = ring.ideal(gens)?.canonical();
        if ideal.is_unit() {
            return Err(Error::UnitIdeal);
        }
        let mins = minimal_prime_ideals(&ideal)?;
        if mins.len() != 1 || mins[0] != ideal {
            return Err(Error::NotPrime(ideal.show_basis()));
        }
        Ok(PrimeRecord { ideal, trust: Trust::Declared })
    }

    /// Accepts a user claim of primality without verification.
    pub fn trusted(ring: &QuotientRing, gens: Vec<Poly>) -> Result<Self> {
        let ideal = ring.ideal(gens)?.canonical();
        if ideal.is_unit() {
            return Err(Error::UnitIdeal);
        }
        Ok(PrimeRecord { ideal, trust: Trust::Trusted })
    }

    pub(crate) fn computed(ideal: IdealRecord) -> Self {
        PrimeRecord { ideal: ideal.canonical(), trust: Trust::Computed }
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.ideal.contains(f)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &PrimeRecord) -> bool {
        self.ideal.is_subset_of(&other.ideal)
    }

    pub fn show(&self) -> String {
        self.ideal.show_basis()
    }
}

/// Minimal primes of a proper ideal, each with trust `COMPUTED`.
pub fn minimal_primes(ideal: &IdealRecord) -> Result<Vec<PrimeRecord>> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    Ok(minimal_prime_ideals(ideal)?.into_iter().map(PrimeRecord::computed).collect())
}

/// Minimal primes of `ring` itself.
pub fn ring_minimal_primes(ring: &QuotientRing) -> Result<Vec<PrimeRecord>> {
    minimal_primes(ring.relations())
}

/// Accepts user-declared components of `ideal` after certifying that each
/// contains the ideal, that they are pairwise incomparable, and that a power
/// of their product lies in the ideal (so every prime over the ideal contains
/// one of them).
pub fn minimal_primes_declared(ideal: &IdealRecord, declared: &[PrimeRecord], max_power: u32) -> Result<Vec<PrimeRecord>> {
    for p in declared {
        if !ideal.is_subset_of(&p.ideal) {
            return Err(Error::Malformed(format!("declared component {} does not contain the ideal", p.show())));
        }
    }
    for (i, p) in declared.iter().enumerate() {
        for (j, q) in declared.iter().enumerate() {
            if i != j && p.is_subset_of(q) {
                return Err(Error::Malformed(format!("declared components {} and {} are nested", p.show(), q.show())));
            }
        }
    }
    let mut prod = IdealRecord::unit(ideal.ring());
    for p in declared {
        prod = prod.product(&p.ideal).canonical();
    }
    let mut power = prod.clone();
    for _ in 0..max_power {
        if power.is_subset_of(ideal) {
            return Ok(declared.to_vec());
        }
        power = power.product(&prod).canonical();
    }
    Err(Error::UnsupportedIdealClass(format!(
        "declared components of {} not certified up to power {max_power}",
        ideal.show_basis()
    )))
}

pub(crate) fn minimal_prime_ideals(ideal: &IdealRecord) -> Result<Vec<IdealRecord>> {
    let mut out = raw_min_primes(ideal, 0)?;
    out.sort_by_key(|p| p.show_basis());
    Ok(out)
}

const MAX_DEPTH: usize = 32;

fn raw_min_primes(ideal: &IdealRecord, depth: usize) -> Result<Vec<IdealRecord>> {
    if depth > MAX_DEPTH {
        return Err(unsupported(ideal));
    }
    let ring = ideal.ring().clone();
    if ideal.is_unit() {
        return Ok(Vec::new());
    }
    let basis = ideal.basis().to_vec();
    if basis.is_empty() {
        return Ok(vec![IdealRecord::zero(&ring)]);
    }
    // A generator c*v + h with h free of v: substitute v = -h/c.
    for g in &basis {
        for v in 0..ring.nvars() {
            if let Some(sol) = solved_for(g, v) {
                let mut images: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
                images[v] = sol;
                let rest: Vec<Poly> = basis.iter().filter(|b| *b != g).map(|b| b.substitute(&images)).collect();
                let sub = IdealRecord::new_unchecked(&ring, rest);
                let primes = raw_min_primes(&sub, depth + 1)?;
                return Ok(primes.into_iter().map(|p| p.with(&[g.clone()]).canonical()).collect());
            }
        }
    }
    if basis.iter().all(Poly::is_monomial) {
        return Ok(monomial_min_primes(ideal));
    }
    if basis.iter().all(|g| g.total_degree().unwrap_or(0) <= 1) {
        return Ok(vec![ideal.canonical()]);
    }
    // A monomial generator: every prime over the ideal contains one of its variables.
    if let Some(m) = basis.iter().find(|g| g.is_monomial()) {
        let vars = m.support_vars();
        let pieces = vars.iter().map(|&v| ideal.with(&[ring.var(v)]));
        return split(pieces, depth);
    }
    if basis.len() == 1 {
        let factors = irreducible_factors(&basis[0])?;
        return Ok(minimal_elements(
            factors.into_iter().map(|f| IdealRecord::new_unchecked(&ring, vec![f]).canonical()).collect(),
        ));
    }
    for g in &basis {
        if let Ok(factors) = irreducible_factors(g) {
            if factors.len() > 1 || factors.first().is_some_and(|f| f != &g.monic(&MonomialOrder::Grevlex)) {
                let pieces = factors.into_iter().map(|f| ideal.with(&[f]));
                return split(pieces, depth);
            }
        }
    }
    Err(unsupported(ideal))
}

fn unsupported(ideal: &IdealRecord) -> Error {
    Error::UnsupportedIdealClass(format!("no supported decomposition for {}", ideal.show_basis()))
}

fn split(pieces: impl Iterator<Item = IdealRecord>, depth: usize) -> Result<Vec<IdealRecord>> {
    let mut all = Vec::new();
    for p in pieces {
        all.extend(raw_min_primes(&p, depth + 1)?);
    }
    Ok(minimal_elements(all))
}

fn minimal_elements(mut ideals: Vec<IdealRecord>) -> Vec<IdealRecord> {
    ideals.sort_by_key(|p| p.show_basis());
    ideals.dedup();
    let n = ideals.len();
    let keep: Vec<bool> = (0..n)
        .map(|i| !(0..n).any(|j| j != i && ideals[j].is_subset_of(&ideals[i]) && ideals[j] != ideals[i]))
        .collect();
    ideals.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
}

/// If `g = c*v + h` with `c` a nonzero constant and `h` free of `v`, returns `-h/c`.
fn solved_for(g: &Poly, v: usize) -> Option<Poly> {
    if g.degree_in(v) != 1 {
        return None;
    }
    let mut unit = vec![0; g.nvars()];
    unit[v] = 1;
    let c = g.coeff(&unit);
    if c.is_zero() || g.terms().any(|(m, _)| m[v] == 1 && *m != unit) {
        return None;
    }
    let field = g.field();
    let h = g.sub(&Poly::monomial(field, unit, c.clone()));
    Some(h.scale(&field.neg(&field.inv(&c))))
}

fn monomial_min_primes(ideal: &IdealRecord) -> Vec<IdealRecord> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let gens: Vec<Vec<u32>> = ideal.basis().iter().map(|g| g.terms().next().unwrap().0.clone()).collect();
    let mut covers: Vec<u64> = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let hits = gens.iter().all(|m| m.iter().enumerate().any(|(i, &e)| e > 0 && mask & (1 << i) != 0));
        if hits {
            covers.push(mask);
        }
    }
    let minimal: Vec<u64> =
        covers.iter().copied().filter(|&c| !covers.iter().any(|&d| d != c && d & c == d)).collect();
    minimal
        .into_iter()
        .map(|mask| {
            let vars = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ring.var(i)).collect();
            IdealRecord::new_unchecked(ring, vars).canonical()
        })
        .collect()
}

/// Greatest common divisor through `gcd = a*b / lcm`, with `(lcm) = (a) ∩ (b)`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let order = MonomialOrder::Grevlex;
    if a.is_zero() {
        return b.monic(&order);
    }
    if b.is_zero() {
        return a.monic(&order);
    }
    let ring = crate::ring::PolyRing {
        field: a.field(),
        names: (0..a.nvars()).map(|i| format!("v{i}")).collect(),
    };
    let ia = IdealRecord::new_unchecked(&ring, vec![a.clone()]);
    let ib = IdealRecord::new_unchecked(&ring, vec![b.clone()]);
    let l = intersect(&ia, &ib).expect("same ambient");
    let lcm = l.basis()[0].clone();
    a.mul(b).div_exact(&lcm).expect("lcm divides the product").monic(&order)
}

/// Distinct irreducible factors (each monic) of a nonzero polynomial, when
/// every factor is certified irreducible.
pub fn irreducible_factors(f: &Poly) -> Result<Vec<Poly>> {
    let order = MonomialOrder::Grevlex;
    let field = f.field();
    let n = f.nvars();
    let mut out = Vec::new();
    let content = f.monomial_content();
    for (v, &e) in content.iter().enumerate() {
        if e > 0 {
            out.push(Poly::var(field, n, v));
        }
    }
    let mut g = f.div_exact(&Poly::monomial(field, content, Coeff::one())).expect("content divides");
    if g.is_constant() {
        return Ok(out);
    }
    // square-free part
    'outer: loop {
        for v in g.support_vars() {
            let d = g.derivative(v);
            if d.is_zero() {
                continue;
            }
            let h = poly_gcd(&g, &d);
            if !h.is_constant() {
                g = g.div_exact(&h).expect("gcd divides");
                continue 'outer;
            }
        }
        break;
    }
    let mut stack = vec![g.monic(&order)];
    while let Some(p) = stack.pop() {
        if p.is_constant() {
            continue;
        }
        if certify_irreducible(&p) {
            out.push(p);
            continue;
        }
        let vars = p.support_vars();
        if vars.len() == 1 {
            if let Some(root) = find_root(&p, vars[0]) {
                let lin = Poly::var(field, n, vars[0]).sub(&Poly::constant(field, n, root));
                let q = p.div_exact(&lin).expect("root gives a factor");
                stack.push(lin);
                stack.push(q.monic(&order));
                continue;
            }
        }
        return Err(Error::UnsupportedIdealClass(format!(
            "cannot certify irreducibility of a factor with {} terms",
            p.num_terms()
        )));
    }
    out.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    out.dedup();
    Ok(out)
}

fn certify_irreducible(p: &Poly) -> bool {
    let vars = p.support_vars();
    // degree one in some variable with coprime coefficients
    for &v in &vars {
        if p.degree_in(v) == 1 {
            let field = p.field();
            let n = p.nvars();
            let mut a = Poly::zero(field, n);
            let mut b = Poly::zero(field, n);
            for (m, c) in p.terms() {
                if m[v] == 1 {
                    let mut m2 = m.clone();
                    m2[v] = 0;
                    a.add_term(m2, c.clone());
                } else {
                    b.add_term(m.clone(), c.clone());
                }
            }
            if poly_gcd(&a, &b).is_constant() {
                return true;
            }
        }
    }
    // univariate of degree 2 or 3 without roots
    if vars.len() == 1 {
        let d = p.degree_in(vars[0]);
        return (2..=3).contains(&d) && find_root(p, vars[0]).is_none() && !root_search_gave_up(p, vars[0]);
    }
    // binomial c1*x^a + c2*y^b with gcd(a, b) = 1
    if vars.len() == 2 && p.num_terms() == 2 {
        let terms: Vec<_> = p.terms().collect();
        let pure = |m: &Vec<u32>| {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
            (nz.len() == 1).then(|| (nz[0], m[nz[0]]))
        };
        if let (Some((x, a)), Some((y, b))) = (pure(terms[0].0), pure(terms[1].0)) {
            return x != y && a.gcd(&b) == 1;
        }
    }
    false
}

const ROOT_SEARCH_LIMIT: u64 = 1_000_000;

fn root_search_gave_up(p: &Poly, v: usize) -> bool {
    if !p.field().is_rationals() {
        return false;
    }
    let (lead, constant) = integer_ends(p, v);
    lead.abs() > BigInt::from(ROOT_SEARCH_LIMIT) || constant.abs() > BigInt::from(ROOT_SEARCH_LIMIT)
}

/// Leading and constant coefficients after clearing denominators.
fn integer_ends(p: &Poly, v: usize) -> (BigInt, BigInt) {
    let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let d = p.degree_in(v);
    let mut lead = BigInt::zero();
    let mut constant = BigInt::zero();
    for (m, c) in p.terms() {
        let scaled = (c * BigRational::from_integer(den.clone())).to_integer();
        if m[v] == d {
            lead = scaled.clone();
        }
        if m[v] == 0 {
            constant = scaled;
        }
    }
    (lead, constant)
}

fn eval_univariate(p: &Poly, v: usize, x: &Coeff) -> Coeff {
    let field = p.field();
    let mut acc = field.zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for _ in 0..m[v] {
            t = field.mul(&t, x);
        }
        acc = field.add(&acc, &t);
    }
    acc
}

fn find_root(p: &Poly, v: usize) -> Option<Coeff> {
    let field = p.field();
    if let Some(elems) = field.elements() {
        return elems.into_iter().find(|x| eval_univariate(p, v, x).is_zero());
    }
    let (lead, constant) = integer_ends(p, v);
    if constant.is_zero() {
        return Some(field.zero());
    }
    if root_search_gave_up(p, v) {
        return None;
    }
    let divisors = |n: &BigInt| -> Vec<i64> {
        let n = n.abs().to_i64().unwrap_or(0);
        (1..=n).filter(|d| n % d == 0).collect()
    };
    for num in divisors(&constant) {
        for den in divisors(&lead) {
            for sign in [1, -1] {
                let x = field.from_ratio(sign * num, den);
                if eval_univariate(p, v, &x).is_zero() {
                    return Some(x);
                }
            }
        }
    }
    None
}
