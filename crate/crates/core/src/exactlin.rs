//! Exact integer and rational linear algebra.
//!
//! Everything here works on arbitrary-precision numbers; there is no floating
//! point anywhere in the crate.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IVec = Vec<Int>;
pub type QVec = Vec<Rat>;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IMat = Matrix<Int>;
pub type QMat = Matrix<Rat>;

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<T>], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(columns, rows)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + &(self.get(r, k) * other.get(k, c));
                }
                data.push(acc);
            }
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = (0..self.cols).map(|c| self.data[r * self.cols + c].to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Zero + for<'a> Add<&'a T, Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + &(x * y))
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn qvec(v: &[i64]) -> QVec {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn to_q(v: &[Int]) -> QVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn to_qmat(m: &IMat) -> QMat {
    Matrix { rows: m.rows, cols: m.cols, data: to_q(&m.data) }
}

/// The integer vector if every entry is integral.
pub fn to_integral(v: &[Rat]) -> Option<IVec> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> IVec {
    let g = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Positive rescaling of a rational vector to a primitive integer vector.
pub fn primitive_from_rat(v: &[Rat]) -> IVec {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: IVec = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    primitive(&scaled)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IMat) -> Result<Int> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Int::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return Ok(Int::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    Ok(if negate { -d } else { d })
}

/// Reduced row echelon form over the rationals, with pivot columns.
pub fn rref(m: &QMat) -> (QMat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a.get(r, c).recip();
        for j in c..a.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i != r && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    let v = a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Determinant over the rationals by Gaussian elimination.
pub fn determinant_q(m: &QMat) -> Result<Rat> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
            return Ok(Rat::zero());
        };
        if p != k {
            a.swap_rows(p, k);
            det = -det;
        }
        let pivot = a.get(k, k).clone();
        det *= &pivot;
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f = a.get(i, k) / &pivot;
            for j in k..n {
                let v = a.get(i, j) - &f * a.get(k, j);
                a.set(i, j, v);
            }
        }
    }
    Ok(det)
}

pub fn rank_q(m: &QMat) -> usize {
    rref(m).1.len()
}

/// Rank over the rationals of an integer matrix.
pub fn lattice_rank(m: &IMat) -> usize {
    rank_q(&to_qmat(m))
}

/// One exact solution of `a x = b`, free variables set to zero; `None` when inconsistent.
pub fn solve_rational(a: &QMat, b: &[Rat]) -> Result<Option<QVec>> {
    if b.len() != a.rows {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} equations", b.len(), a.rows)));
    }
    let mut aug = QMat::zeros(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, a.cols, b[r].clone());
    }
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red.get(r, a.cols).clone();
    }
    Ok(Some(x))
}

/// Basis of the rational nullspace `{x : m x = 0}`.
pub fn nullspace(m: &QMat) -> Vec<QVec> {
    let (red, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); m.cols];
            x[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -red.get(r, f).clone();
            }
            x
        })
        .collect()
}

/// Smith normal form `U m V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
    pub(crate) u_inv: IMat,
    pub(crate) v_inv: IMat,
}

impl Snf {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct SnfWork {
    a: IMat,
    u: IMat,
    u_inv: IMat,
    v: IMat,
    v_inv: IMat,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap_rows(i, k);
        self.u.swap_rows(i, k);
        self.u_inv.swap_cols(i, k);
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        self.a.swap_cols(j, k);
        self.v.swap_cols(j, k);
        self.v_inv.swap_rows(j, k);
    }

    /// row_i += q row_k
    fn add_row(&mut self, i: usize, k: usize, q: &Int) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols {
                let v = m.get(i, c) + q * m.get(k, c);
                m.set(i, c, v);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows {
            let v = m.get(r, k) - q * m.get(r, i);
            m.set(r, k, v);
        }
    }

    /// col_j += q col_k
    fn add_col(&mut self, j: usize, k: usize, q: &Int) {
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows {
                let v = m.get(r, j) + q * m.get(r, k);
                m.set(r, j, v);
            }
        }
        let m = &mut self.v_inv;
        for c in 0..m.cols {
            let v = m.get(k, c) - q * m.get(j, c);
            m.set(k, c, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols {
                let v = -m.get(i, c).clone();
                m.set(i, c, v);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows {
            let v = -m.get(r, i).clone();
            m.set(r, i, v);
        }
    }
}

pub fn smith_normal_form(m: &IMat) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut w = SnfWork {
        a: m.clone(),
        u: IMat::identity(rows),
        u_inv: IMat::identity(rows),
        v: IMat::identity(cols),
        v_inv: IMat::identity(cols),
    };
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = w.a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a.get(i, t).is_zero() {
                    let q = w.a.get(i, t) / w.a.get(t, t);
                    w.add_row(i, t, &-q);
                    clean &= w.a.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a.get(t, j).is_zero() {
                    let q = w.a.get(t, j) / w.a.get(t, t);
                    w.add_col(j, t, &-q);
                    clean &= w.a.get(t, j).is_zero();
                }
            }
            if !clean {
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = w.a.get(i, t);
                    if !x.is_zero() && x.abs() < w.a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = w.a.get(t, j);
                    if !x.is_zero() && x.abs() < w.a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let pivot = w.a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => w.add_row(t, i, &Int::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    Snf { u: w.u, d: w.a, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv }
}

/// Basis of the integer kernel `{x ∈ Z^c : m x = 0}` (a saturated lattice).
pub fn integer_kernel(m: &IMat) -> Vec<IVec> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols).map(|j| snf.v.column(j)).collect()
}

/// Basis of the lattice spanned by the columns of `m`.
pub fn image_basis(m: &IMat) -> Vec<IVec> {
    let snf = smith_normal_form(m);
    snf.invariant_factors()
        .iter()
        .enumerate()
        .map(|(j, d)| snf.u_inv.column(j).iter().map(|x| x * d).collect())
        .collect()
}

/// Integer coordinates of `v` in the lattice basis `basis` (columns), if it lies in that lattice.
pub fn lattice_coordinates(basis: &[IVec], v: &[Int]) -> Result<Option<IVec>> {
    let ambient = v.len();
    let b = to_qmat(&IMat::from_columns(basis, ambient)?);
    let Some(x) = solve_rational(&b, &to_q(v))? else {
        return Ok(None);
    };
    // a basis has full column rank, so the solution is unique
    Ok(to_integral(&x))
}
