//! Certificates embedded in reports, and their verification.
//!
//! Membership and non-membership certificates are checked by plain
//! polynomial arithmetic (expansion, and division by a basis whose
//! S-pairs are re-reduced here), without the Gröbner engine.

use serde_json::{json, Value};

use crate::etale::{verify_not_in_image, LinearInconsistency};
use crate::field::{parse_coeff, Coeff};
use crate::order::MonomialOrder;
use crate::parse::parse_poly;
use crate::poly::{mono_divides, mono_div, mono_lcm, Poly};
use crate::ring::{IdealRecord, QuotientRing};
use crate::syzygy::lift;

use super::document::Document;

fn show(ring: &QuotientRing, p: &Poly) -> Value {
    Value::String(ring.show(p))
}

fn show_vec(ring: &QuotientRing, v: &[Poly]) -> Value {
    Value::Array(v.iter().map(|p| show(ring, p)).collect())
}

/// `target ∈ span(cols) + relations · R^rows`, with cofactors over the
/// ambient polynomial ring. The ring relations are spelled out as extra
/// columns so the check is a single expansion.
pub fn membership(rname: &str, ring: &QuotientRing, rows: usize, cols: &[Vec<Poly>], target: &[Poly]) -> Option<Value> {
    let free = QuotientRing::new(ring.ambient().clone(), vec![]).expect("polynomial ring");
    let mut all: Vec<Vec<Poly>> = cols.to_vec();
    for g in ring.relations().generators() {
        for i in 0..rows {
            let mut c = vec![ring.zero(); rows];
            c[i] = g.clone();
            all.push(c);
        }
    }
    let l = lift(&free, rows, &all, target)?;
    Some(json!({
        "type": "membership",
        "ring": rname,
        "rows": rows,
        "columns": all.iter().map(|c| show_vec(ring, c)).collect::<Vec<_>>(),
        "target": show_vec(ring, target),
        "coefficients": show_vec(ring, &l.coeffs),
    }))
}

/// `target ∉ ideal`: a basis of the ideal, expressions of the basis in
/// the generators, and the nonzero remainder.
pub fn non_membership(rname: &str, ring: &QuotientRing, ideal: &IdealRecord, target: &Poly) -> Option<Value> {
    let remainder = ideal.reduce(target);
    if remainder.is_zero() {
        return None;
    }
    let free = QuotientRing::new(ring.ambient().clone(), vec![]).expect("polynomial ring");
    let gens: Vec<Vec<Poly>> = ideal.generators().iter().map(|g| vec![g.clone()]).collect();
    let cofactors: Vec<Value> = ideal
        .basis()
        .iter()
        .map(|b| show_vec(ring, &lift(&free, 1, &gens, &[b.clone()]).expect("basis lies in the ideal").coeffs))
        .collect();
    Some(json!({
        "type": "non_membership",
        "ring": rname,
        "generators": show_vec(ring, ideal.generators()),
        "basis": show_vec(ring, ideal.basis()),
        "basis_cofactors": cofactors,
        "target": show(ring, target),
        "remainder": show(ring, &remainder),
    }))
}

pub fn functional(map: &str, rname: &str, ring: &QuotientRing, a: &Poly, cert: &LinearInconsistency) -> Value {
    let terms: Vec<Value> = cert
        .functional
        .iter()
        .map(|(m, c)| {
            let mono = Poly::monomial(ring.field(), m.clone(), ring.field().one());
            json!([ring.show(&mono), crate::field::coeff_to_string(c)])
        })
        .collect();
    json!({
        "type": "functional",
        "map": map,
        "ring": rname,
        "element": show(ring, a),
        "degree": cert.degree,
        "functional": terms,
    })
}

/// Data whose validation is recomputation from the document.
pub fn recomputed(data: Value) -> Value {
    json!({ "type": "recomputed", "data": data })
}

fn leading(p: &Poly) -> Option<(Vec<u32>, Coeff)> {
    p.leading(&MonomialOrder::Grevlex).map(|(m, c)| (m.clone(), c.clone()))
}

/// Full multivariate division remainder of `f` by `basis` in grevlex.
pub fn remainder(f: &Poly, basis: &[Poly]) -> Poly {
    let field = f.field();
    let leads: Vec<(Vec<u32>, Coeff)> = basis.iter().filter_map(leading).collect();
    let divisors: Vec<&Poly> = basis.iter().filter(|b| !b.is_zero()).collect();
    let mut p = f.clone();
    let mut r = Poly::zero(field, f.nvars());
    while let Some((m, c)) = leading(&p) {
        match leads.iter().position(|(lm, _)| mono_divides(lm, &m)) {
            Some(i) => {
                let q = field.div(&c, &leads[i].1);
                p = p.sub(&divisors[i].mul_term(&mono_div(&m, &leads[i].0), &q));
            }
            None => {
                let t = Poly::monomial(field, m, c);
                r = r.add(&t);
                p = p.sub(&t);
            }
        }
    }
    r
}

fn s_poly(a: &Poly, b: &Poly) -> Poly {
    let field = a.field();
    let (ma, ca) = leading(a).expect("nonzero");
    let (mb, cb) = leading(b).expect("nonzero");
    let l = mono_lcm(&ma, &mb);
    a.mul_term(&mono_div(&l, &ma), &field.inv(&ca)).sub(&b.mul_term(&mono_div(&l, &mb), &field.inv(&cb)))
}

fn field_of<'a>(doc: &'a Document, cert: &Value) -> Result<(&'a QuotientRing, String), String> {
    let rname = cert["ring"].as_str().ok_or("certificate has no ring")?;
    let (_, ring) = doc.ring_of(rname).map_err(|e| e.to_string())?;
    Ok((ring, rname.to_string()))
}

fn poly(ring: &QuotientRing, v: &Value) -> Result<Poly, String> {
    let s = v.as_str().ok_or("expected a polynomial string")?;
    parse_poly(ring.ambient(), s).map_err(|e| format!("cannot parse '{}': {}", s, e))
}

fn polys(ring: &QuotientRing, v: &Value) -> Result<Vec<Poly>, String> {
    v.as_array().ok_or("expected a list")?.iter().map(|p| poly(ring, p)).collect()
}

/// Checks one certificate. `recheck` supplies the verdict data recomputed
/// from the document for `recomputed` certificates.
pub fn verify(doc: &Document, cert: &Value, recomputed_data: &[Value]) -> Result<(), String> {
    match cert["type"].as_str() {
        Some("membership") => {
            let (ring, _) = field_of(doc, cert)?;
            let rows = cert["rows"].as_u64().ok_or("rows")? as usize;
            let cols: Vec<Vec<Poly>> =
                cert["columns"].as_array().ok_or("columns")?.iter().map(|c| polys(ring, c)).collect::<Result<_, _>>()?;
            let target = polys(ring, &cert["target"])?;
            let coeffs = polys(ring, &cert["coefficients"])?;
            if coeffs.len() != cols.len() || target.len() != rows || cols.iter().any(|c| c.len() != rows) {
                return Err("membership certificate has inconsistent shapes".into());
            }
            for i in 0..rows {
                let mut acc = target[i].clone();
                for (c, col) in coeffs.iter().zip(&cols) {
                    acc = acc.sub(&c.mul(&col[i]));
                }
                if !acc.is_zero() {
                    return Err(format!("expansion differs from the target in row {}", i));
                }
            }
            Ok(())
        }
        Some("non_membership") => {
            let (ring, _) = field_of(doc, cert)?;
            let gens = polys(ring, &cert["generators"])?;
            let basis = polys(ring, &cert["basis"])?;
            let cofs: Vec<Vec<Poly>> =
                cert["basis_cofactors"].as_array().ok_or("basis_cofactors")?.iter().map(|c| polys(ring, c)).collect::<Result<_, _>>()?;
            let target = poly(ring, &cert["target"])?;
            let rem = poly(ring, &cert["remainder"])?;
            if cofs.len() != basis.len() {
                return Err("one cofactor list per basis element expected".into());
            }
            for (b, c) in basis.iter().zip(&cofs) {
                if c.len() != gens.len() {
                    return Err("cofactor list has the wrong length".into());
                }
                let combo = c.iter().zip(&gens).fold(Poly::zero(ring.field(), ring.nvars()), |acc, (x, g)| acc.add(&x.mul(g)));
                if combo != *b {
                    return Err("a basis element is not the stated combination of generators".into());
                }
            }
            for g in &gens {
                if !remainder(g, &basis).is_zero() {
                    return Err("a generator does not reduce to zero by the basis".into());
                }
            }
            let nz: Vec<&Poly> = basis.iter().filter(|b| !b.is_zero()).collect();
            for i in 0..nz.len() {
                for j in i + 1..nz.len() {
                    if !remainder(&s_poly(nz[i], nz[j]), &basis).is_zero() {
                        return Err("basis fails the S-pair criterion".into());
                    }
                }
            }
            let r = remainder(&target, &basis);
            if r.is_zero() || r != rem {
                return Err("target does not leave the stated nonzero remainder".into());
            }
            Ok(())
        }
        Some("functional") => {
            let (ring, _) = field_of(doc, cert)?;
            let map = doc.map(cert["map"].as_str().ok_or("map")?).map_err(|e| e.to_string())?;
            let a = poly(ring, &cert["element"])?;
            let degree = cert["degree"].as_u64().ok_or("degree")? as u32;
            let mut terms = Vec::new();
            for t in cert["functional"].as_array().ok_or("functional")? {
                let m = poly(ring, &t[0])?;
                let mono = m.terms().next().map(|(m, _)| m.clone()).ok_or("empty monomial")?;
                let c = t[1].as_str().and_then(parse_coeff).ok_or("bad coefficient")?;
                terms.push((mono, ring.field().reduce(c)));
            }
            if verify_not_in_image(&a, map, &LinearInconsistency { degree, functional: terms }) {
                Ok(())
            } else {
                Err("functional does not separate the element from the image".into())
            }
        }
        Some("recomputed") => {
            if recomputed_data.contains(&cert["data"]) {
                Ok(())
            } else {
                Err("recomputed data differs".into())
            }
        }
        other => Err(format!("unknown certificate type {:?}", other)),
    }
}
