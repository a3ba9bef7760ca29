//! Exact rational linear algebra: sparse vectors, column-major sparse
//! operators with partially known columns, and dense Gauss-Jordan
//! elimination for kernels, images, solves and subspace arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `n` for integers and `n/d` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

pub fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

/// Sparse vector with no explicit zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(BTreeMap<usize, Q>);

impl SparseVec {
    pub fn new() -> Self {
        Self(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(i, Q::one());
        Self(m)
    }

    pub fn from_dense(v: &[Q]) -> Self {
        Self(
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        )
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (&i, x) in &self.0 {
            out[i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Q {
        self.0.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.0.iter().map(|(&i, x)| (i, x))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn add_term(&mut self, i: usize, x: Q) {
        if x.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &SparseVec, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.0 {
            self.add_term(i, x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        Self(self.0.iter().map(|(&i, x)| (i, x * c)).collect())
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let mut acc = Q::zero();
        for (&i, x) in &self.0 {
            if let Some(y) = other.0.get(&i) {
                acc += x * y;
            }
        }
        acc
    }
}

impl FromIterator<(usize, Q)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Q)>>(iter: T) -> Self {
        let mut v = SparseVec::new();
        for (i, x) in iter {
            v.add_term(i, x);
        }
        v
    }
}

/// Raised when an operator is applied to a basis vector whose image is not
/// known (a column that lies beyond a truncation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownColumn(pub usize);

/// Column-major sparse operator. A column may be `None` when its image is
/// not determined (truncated modules); applying the operator to a vector
/// with support on such a column fails instead of guessing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Option<SparseVec>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![Some(SparseVec::new()); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: (0..n).map(|i| Some(SparseVec::unit(i))).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<Option<SparseVec>>) -> Self {
        Self { rows, cols }
    }

    pub fn diagonal(d: &[Q]) -> Self {
        Self {
            rows: d.len(),
            cols: d
                .iter()
                .enumerate()
                .map(|(i, x)| Some([(i, x.clone())].into_iter().collect()))
                .collect(),
        }
    }

    pub fn from_dense(m: &[Vec<Q>], cols: usize) -> Self {
        let rows = m.len();
        let mut out = Self::zeros(rows, cols);
        for (r, row) in m.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out.cols[c].as_mut().unwrap().add_term(r, x.clone());
                }
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> Option<&SparseVec> {
        self.cols[c].as_ref()
    }

    pub fn set_column(&mut self, c: usize, v: Option<SparseVec>) {
        self.cols[c] = v;
    }

    pub fn is_complete(&self) -> bool {
        self.cols.iter().all(Option::is_some)
    }

    pub fn known_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.cols
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| i)
    }

    pub fn entry(&self, r: usize, c: usize) -> Option<Q> {
        self.cols[c].as_ref().map(|v| v.get(r))
    }

    pub fn apply(&self, v: &SparseVec) -> Result<SparseVec, UnknownColumn> {
        let mut out = SparseVec::new();
        for (c, x) in v.iter() {
            match &self.cols[c] {
                Some(col) => out.add_scaled(col, x),
                None => return Err(UnknownColumn(c)),
            }
        }
        Ok(out)
    }

    /// `self * other`; a product column is unknown when it depends on an
    /// unknown column of either factor.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols.len(), other.rows, "dimension mismatch in product");
        let cols = other
            .cols
            .iter()
            .map(|c| c.as_ref().and_then(|v| self.apply(v).ok()))
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn add_scaled(&mut self, other: &SparseMatrix, c: &Q) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols.len(), other.cols.len());
        if c.is_zero() {
            return;
        }
        for (mine, theirs) in self.cols.iter_mut().zip(&other.cols) {
            match (mine.as_mut(), theirs) {
                (Some(a), Some(b)) => a.add_scaled(b, c),
                _ => *mine = None,
            }
        }
    }

    pub fn scaled(&self, c: &Q) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .map(|col| col.as_ref().map(|v| v.scaled(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product with index `(i, j) -> i * other.rows + j`.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let rows = self.rows * other.rows;
        let mut cols = Vec::with_capacity(self.cols.len() * other.cols.len());
        for a in &self.cols {
            for b in &other.cols {
                cols.push(match (a, b) {
                    (Some(a), Some(b)) => {
                        let mut v = SparseVec::new();
                        for (i, x) in a.iter() {
                            for (j, y) in b.iter() {
                                v.add_term(i * other.rows + j, x * y);
                            }
                        }
                        Some(v)
                    }
                    _ => None,
                });
            }
        }
        SparseMatrix { rows, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols
            .iter()
            .all(|c| c.as_ref().map(SparseVec::is_zero).unwrap_or(false))
    }

    /// Returns `Some(c)` when the (complete, square) matrix equals `c * I`.
    pub fn scalar_value(&self) -> Result<Q, (usize, usize)> {
        let n = self.cols.len();
        if n == 0 {
            return Ok(Q::zero());
        }
        let c = self.entry(0, 0).ok_or((0, 0))?;
        for j in 0..n {
            let col = self.cols[j].as_ref().ok_or((j, j))?;
            for (i, x) in col.iter() {
                if i != j && !x.is_zero() {
                    return Err((i, j));
                }
            }
            if col.get(j) != c {
                return Err((j, j));
            }
        }
        Ok(c)
    }

    /// First entry where `self` and `other` differ, if any.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<(usize, usize)> {
        let d = self.sub(other);
        for (j, col) in d.cols.iter().enumerate() {
            match col {
                None => return Some((0, j)),
                Some(v) => {
                    if let Some(i) = v.support().next() {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.cols.len()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            let col = col.as_ref().expect("to_dense on incomplete matrix");
            for (i, x) in col.iter() {
                out[i][j] = x.clone();
            }
        }
        out
    }

    /// Dense submatrix on the given row and column index sets.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Q>> {
        let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mut out = vec![vec![Q::zero(); cols.len()]; rows.len()];
        for (k, &c) in cols.iter().enumerate() {
            let col = self.cols[c].as_ref().expect("block on unknown column");
            for (i, x) in col.iter() {
                if let Some(&r) = pos.get(&i) {
                    out[r][k] = x.clone();
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        let mut t = Q::zero();
        for (j, col) in self.cols.iter().enumerate() {
            t += col.as_ref().expect("trace on incomplete matrix").get(j);
        }
        t
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols.len())
                .map(|c| {
                    self.entry(r, c)
                        .map(|x| fmt_q(&x))
                        .unwrap_or_else(|| "?".into())
                })
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut m = m.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : m x = 0}` for an `r x cols` matrix.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); cols];
            x[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -a[r][f].clone();
            }
            x
        })
        .collect()
}

/// Row-reduced basis of the span of `vectors`.
pub fn span_basis(vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut a = vectors.to_vec();
    let k = rref(&mut a).len();
    a.truncate(k);
    a
}

/// Basis of the column space of `m` as a list of column vectors.
pub fn column_space(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let t = transpose(m, cols);
    span_basis(&t)
}

pub fn transpose(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    (0..cols)
        .map(|c| m.iter().map(|row| row[c].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).map(|k| &row[k] * &b[k][c]).sum())
                .collect()
        })
        .collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `m x = b`, returning one solution when consistent.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Coordinates of `v` in the basis `basis` (rows), if `v` lies in the span.
pub fn coords_in(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let t = transpose(basis, v.len());
    solve(&t, v)
}

/// Basis of the intersection of two subspaces given by spanning rows.
pub fn intersection(u: &[Vec<Q>], w: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    let cols = u.len() + w.len();
    let system: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            u.iter()
                .map(|b| b[i].clone())
                .chain(w.iter().map(|b| -b[i].clone()))
                .collect()
        })
        .collect();
    let null = nullspace(&system, cols);
    let vecs: Vec<Vec<Q>> = null
        .iter()
        .map(|x| {
            let mut v = vec![Q::zero(); dim];
            for (k, b) in u.iter().enumerate() {
                if !x[k].is_zero() {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += &x[k] * bi;
                    }
                }
            }
            v
        })
        .collect();
    span_basis(&vecs)
}

/// Vectors from `ambient` extending a basis of `sub` to a basis of
/// `span(sub + ambient)`.
pub fn complement(sub: &[Vec<Q>], ambient: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut current = span_basis(sub);
    let mut out = Vec::new();
    for v in ambient {
        let mut trial = current.clone();
        trial.push(v.clone());
        if rank(&trial) > current.len() {
            out.push(v.clone());
            current = span_basis(&trial);
        }
    }
    out
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
