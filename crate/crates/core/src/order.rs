//! Monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// A monomial order on exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Block order eliminating the flagged variables: compares the degree in
    /// the block, then grevlex inside the block, then grevlex on the rest.
    Elimination(Vec<bool>),
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::Grevlex
    }
}

impl MonomialOrder {
    pub fn elimination(nvars: usize, eliminate: &[usize]) -> Self {
        let mut block = vec![false; nvars];
        for &v in eliminate {
            block[v] = true;
        }
        MonomialOrder::Elimination(block)
    }

    pub fn compare(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(a, b, |_| true),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elimination(block) => {
                let da: u32 = a.iter().zip(block).filter(|(_, &e)| e).map(|(x, _)| *x).sum();
                let db: u32 = b.iter().zip(block).filter(|(_, &e)| e).map(|(x, _)| *x).sum();
                da.cmp(&db)
                    .then_with(|| grevlex(a, b, |i| block[i]))
                    .then_with(|| grevlex(a, b, |i| !block[i]))
            }
        }
    }
}

fn grevlex(a: &[u32], b: &[u32], keep: impl Fn(usize) -> bool) -> Ordering {
    let da: u32 = a.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, x)| *x).sum();
    let db: u32 = b.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, x)| *x).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if !keep(i) {
            continue;
        }
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}
