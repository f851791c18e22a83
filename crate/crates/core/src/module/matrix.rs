use crate::poly::Poly;
use crate::ring::QuotientRing;

/// A matrix over a quotient ring, stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: Vec<Vec<Poly>>,
}

impl Matrix {
    pub fn from_cols(rows: usize, cols: Vec<Vec<Poly>>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), rows, "column length");
        }
        Matrix { rows, cols }
    }

    /// Builds from row-major entries.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<Poly>>) -> Self {
        let nrows = rows.len();
        let cols = (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        Matrix { rows: nrows, cols }
    }

    pub fn empty(rows: usize) -> Self {
        Matrix { rows, cols: Vec::new() }
    }

    pub fn zeros(ring: &QuotientRing, rows: usize, ncols: usize) -> Self {
        Matrix { rows, cols: vec![vec![ring.zero(); rows]; ncols] }
    }

    pub fn identity(ring: &QuotientRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.cols[i][i] = ring.one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn cols(&self) -> &[Vec<Poly>] {
        &self.cols
    }

    pub fn col(&self, j: usize) -> &[Poly] {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.cols[j][i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.cols[j][i] = v;
    }

    pub fn push_col(&mut self, c: Vec<Poly>) {
        assert_eq!(c.len(), self.rows, "column length");
        self.cols.push(c);
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.cols.iter().map(|c| c[i].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let cols = (0..self.rows).map(|i| self.row(i)).collect();
        Matrix { rows: self.ncols(), cols }
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols.iter().map(|c| c.iter().map(&f).collect()).collect() }
    }

    pub fn reduce(&self, ring: &QuotientRing) -> Matrix {
        self.map(|p| ring.reduce(p))
    }

    pub fn apply(&self, ring: &QuotientRing, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.ncols(), "vector length");
        let mut out = vec![ring.zero(); self.rows];
        for (c, x) in self.cols.iter().zip(v) {
            if x.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(c) {
                *o = o.add(&e.mul(x));
            }
        }
        out.iter().map(|p| ring.reduce(p)).collect()
    }

    pub fn mul(&self, ring: &QuotientRing, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.nrows(), "inner dimensions");
        Matrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(ring, c)).collect() }
    }

    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row counts");
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Matrix { rows: self.rows, cols }
    }

    /// Block diagonal sum.
    pub fn block_sum(ring: &QuotientRing, a: &Matrix, b: &Matrix) -> Matrix {
        let rows = a.rows + b.rows;
        let mut cols = Vec::new();
        for c in &a.cols {
            let mut v = c.clone();
            v.extend(vec![ring.zero(); b.rows]);
            cols.push(v);
        }
        for c in &b.cols {
            let mut v = vec![ring.zero(); a.rows];
            v.extend(c.iter().cloned());
            cols.push(v);
        }
        Matrix { rows, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(Poly::is_zero))
    }

    /// Row-major text with `;` between rows.
    pub fn show(&self, ring: &QuotientRing) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.cols.iter().map(|c| ring.show(&c[i])).collect::<Vec<_>>().join(", "))
            .collect();
        format!("[[{}]]", rows.join("; "))
    }
}

/// Determinant by cofactor expansion along the first column, skipping zeros.
pub fn determinant(ring: &QuotientRing, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ring.zero();
    for i in 0..n {
        if m[i][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            (0..n).filter(|&r| r != i).map(|r| m[r][1..].to_vec()).collect();
        let d = determinant(ring, &minor);
        let t = m[i][0].mul(&d);
        acc = if i % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    ring.reduce(&acc)
}

/// Calls `visit` with each `k`-subset of `0..n` in lexicographic order;
/// stops early when `visit` returns `true`.
pub fn for_each_subset(n: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, k, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if k > n {
        return false;
    }
    rec(0, n, k, &mut Vec::new(), visit)
}
