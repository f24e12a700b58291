//! Exact linear algebra over a prime field GF(p).
//!
//! Scalars are residues `u32` in `[0, p)`; every routine takes its [`Field`]
//! explicitly or carries it inside the value. Subspaces are always stored in
//! reduced row-echelon form, so two subspaces are equal iff their
//! representations are equal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("entry {0} is not reduced modulo p")]
    EntryOutOfRange(u32),
}

/// The prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldRaw")]
pub struct Field {
    p: u32,
}

#[derive(Deserialize)]
struct FieldRaw {
    p: u32,
}

impl TryFrom<FieldRaw> for Field {
    type Error = LinalgError;

    fn try_from(raw: FieldRaw) -> Result<Self, Self::Error> {
        Field::new(raw.p)
    }
}

impl Field {
    /// Primes up to 2^16 are accepted so products fit in `u64` comfortably.
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if p < 2 || p > 65_521 || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Field { p })
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// `y += c * x`, elementwise.
    #[inline]
    pub fn axpy(self, y: &mut [u32], c: u32, x: &[u32]) {
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(c, xi));
            }
        }
    }

    pub fn scale(self, x: &mut [u32], c: u32) {
        for v in x.iter_mut() {
            *v = self.mul(*v, c);
        }
    }

    pub fn dot(self, x: &[u32], y: &[u32]) -> u32 {
        let mut acc: u64 = 0;
        for (&a, &b) in x.iter().zip(y) {
            acc = (acc + a as u64 * b as u64) % self.p as u64;
        }
        acc as u32
    }

    /// All elements of the field, in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }

    /// Canonical representatives of the points of the projective space
    /// P^{dim-1}: nonzero vectors whose first nonzero entry is 1.
    pub fn projective_points(self, dim: usize) -> ProjectivePoints {
        ProjectivePoints::new(self, dim)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Iterator over normalized projective points (see [`Field::projective_points`]).
pub struct ProjectivePoints {
    field: Field,
    dim: usize,
    lead: usize,
    tail: Vec<u32>,
    done: bool,
}

impl ProjectivePoints {
    fn new(field: Field, dim: usize) -> Self {
        ProjectivePoints {
            field,
            dim,
            lead: 0,
            tail: vec![0; dim.saturating_sub(1)],
            done: dim == 0,
        }
    }

    /// Number of points, `(p^dim - 1) / (p - 1)`, saturating.
    pub fn count(field: Field, dim: usize) -> u64 {
        let p = field.modulus() as u64;
        let mut total: u64 = 0;
        let mut pw: u64 = 1;
        for _ in 0..dim {
            total = total.saturating_add(pw);
            pw = pw.saturating_mul(p);
        }
        total
    }
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let mut v = vec![0u32; self.dim];
        v[self.lead] = 1;
        let free = self.dim - self.lead - 1;
        v[self.lead + 1..].copy_from_slice(&self.tail[..free]);
        // advance the free coordinates as a base-p counter
        let mut k = 0;
        loop {
            if k == free {
                self.lead += 1;
                if self.lead == self.dim {
                    self.done = true;
                }
                for t in self.tail.iter_mut() {
                    *t = 0;
                }
                break;
            }
            self.tail[k] += 1;
            if self.tail[k] == self.field.modulus() {
                self.tail[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
        Some(v)
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRaw")]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

#[derive(Deserialize)]
struct MatrixRaw {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl TryFrom<MatrixRaw> for Matrix {
    type Error = LinalgError;

    fn try_from(raw: MatrixRaw) -> Result<Self, Self::Error> {
        let expected = raw.rows.checked_mul(raw.cols).unwrap_or(usize::MAX);
        if raw.data.len() != expected {
            return Err(LinalgError::DimensionMismatch {
                expected,
                found: raw.data.len(),
            });
        }
        if let Some(&x) = raw.data.iter().find(|&&x| x >= raw.field.modulus()) {
            return Err(LinalgError::EntryOutOfRange(x));
        }
        Ok(Matrix {
            field: raw.field,
            rows: raw.rows,
            cols: raw.cols,
            data: raw.data,
        })
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced mod p.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x % field.modulus()));
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|r| self.field.dot(self.row(r), x)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let c = self.get(r, k);
                if c != 0 {
                    f.axpy(dst, c, other.row(k));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scaled(&self, c: u32) -> Matrix {
        let mut m = self.clone();
        self.field.scale(&mut m.data, c);
        m
    }

    /// Kernel `{x : self * x = 0}` as a subspace of GF(p)^cols.
    pub fn kernel(&self) -> Subspace {
        let (r, rank, pivots) = rref(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = self.field;
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u32; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = f.neg(r.get(i, fc));
            }
            basis.push(v);
        }
        Subspace::from_vectors(f, self.cols, basis)
    }

    /// Row space.
    pub fn row_space(&self) -> Subspace {
        Subspace::from_vectors(self.field, self.cols, self.to_rows())
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }
}

/// Reduced row-echelon form, rank and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    let f = m.field;
    let mut rows = m.to_rows();
    let pivots = rref_rows(f, &mut rows, m.cols);
    let rank = pivots.len();
    let mut out = Matrix::zeros(f, m.rows, m.cols);
    for (i, r) in rows.iter().enumerate() {
        out.data[i * m.cols..(i + 1) * m.cols].copy_from_slice(r);
    }
    (out, rank, pivots)
}

/// In-place reduction of a list of rows. Nonzero rows end up first, in
/// reduced echelon form; the returned pivots index those rows.
fn rref_rows(f: Field, rows: &mut [Vec<u32>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(rows[r][c]);
        f.scale(&mut rows[r], inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let k = f.neg(row[c]);
                f.axpy(row, k, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Some `x` with `a * x = b`, or `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[u32]) -> Result<Option<Vec<u32>>, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let f = a.field;
    let n = a.cols;
    let mut rows: Vec<Vec<u32>> = (0..a.rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r] % f.modulus());
            row
        })
        .collect();
    let pivots = rref_rows(f, &mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![0u32; n];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = rows[i][n];
    }
    Ok(Some(x))
}

/// A linear subspace of GF(p)^n held in canonical reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            field,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors<I>(field: Field, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut s = Subspace::zero(field, ambient);
        for v in vectors {
            s.insert(&v);
        }
        s
    }

    /// Span of the coordinate vectors `e_i`, `i` in `coords`.
    pub fn coordinate(field: Field, ambient: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        Subspace::from_vectors(
            field,
            ambient,
            coords.into_iter().map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            }),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots; their unit vectors span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ambient - self.dim());
        let mut k = 0;
        for c in 0..self.ambient {
            if k < self.pivots.len() && self.pivots[k] == c {
                k += 1;
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Representative of `v` modulo the subspace with zero pivot entries.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let f = self.field;
        let mut w: Vec<u32> = v.iter().map(|&x| x % f.modulus()).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                f.axpy(&mut w, f.neg(c), row);
            }
        }
        w
    }

    /// Coordinates of the class of `v` in the quotient, read on the
    /// non-pivot columns.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let w = self.reduce(v);
        self.non_pivots().into_iter().map(|c| w[c]).collect()
    }

    /// Matrix of the quotient map GF(p)^n -> GF(p)^n / self in the
    /// non-pivot coordinates.
    pub fn quotient_map(&self) -> Matrix {
        let f = self.field;
        let np = self.non_pivots();
        let mut m = Matrix::zeros(f, np.len(), self.ambient);
        for (i, &c) in np.iter().enumerate() {
            m.set(i, c, 1);
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                if row[c] != 0 {
                    m.set(i, pc, f.neg(row[c]));
                }
            }
        }
        m
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Adds `v` to the span. Returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        f.scale(&mut w, inv);
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                f.axpy(row, f.neg(c), &w);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, w);
        true
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        Ok(s)
    }

    /// Intersection by the Zassenhaus construction.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let f = self.field;
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(self.dim() + other.dim());
        for r in &self.rows {
            let mut v = r.clone();
            v.extend_from_slice(r);
            rows.push(v);
        }
        for r in &other.rows {
            let mut v = r.clone();
            v.extend(std::iter::repeat(0).take(n));
            rows.push(v);
        }
        let pivots = rref_rows(f, &mut rows, 2 * n);
        let out = rows
            .iter()
            .zip(&pivots)
            .filter(|(_, &pc)| pc >= n)
            .map(|(r, _)| r[n..].to_vec());
        Ok(Subspace::from_vectors(f, n, out))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    /// Vectors of `self` extending a basis of `w` (which must lie inside
    /// `self`) to a basis of `self`.
    pub fn quotient_basis_complement(&self, w: &Subspace) -> Result<Vec<Vec<u32>>, LinalgError> {
        self.check_ambient(w)?;
        if !w.is_subspace_of(self) {
            return Err(LinalgError::NotContained);
        }
        let mut acc = w.clone();
        let mut out = Vec::new();
        for r in &self.rows {
            if acc.insert(r) {
                out.push(r.clone());
            }
        }
        Ok(out)
    }

    /// Image under a linear map given as a matrix with `ambient` columns.
    pub fn image(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::from_vectors(self.field, m.rows(), self.rows.iter().map(|r| m.mul_vec(r)))
    }

    /// Preimage `{v : m v in self}` under a matrix with `ambient` rows.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient);
        self.quotient_map().mul(m).kernel()
    }
}
