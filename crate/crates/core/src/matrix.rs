//! Dense exact and floating-point matrices.
//!
//! `MatR` carries every identity the crate asserts. Elimination is
//! fraction-free (Bareiss) after clearing row denominators, with the pivot
//! chosen as the candidate of smallest numerator magnitude. `MatF` exists for
//! sampling and finite-difference checks only.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatR {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl MatR {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatR {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatR::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatR { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        MatR { rows, cols, data }
    }

    /// Build from integer entries given row by row.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        MatR {
            rows,
            cols,
            data: entries.iter().map(|&v| Rat::from_int(v)).collect(),
        }
    }

    pub fn column(entries: Vec<Rat>) -> Self {
        let n = entries.len();
        MatR::from_vec(n, 1, entries)
    }

    pub fn diag(entries: &[Rat]) -> Self {
        let n = entries.len();
        let mut m = MatR::zeros(n, n);
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> Self {
        MatR::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        MatR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn matmul(&self, rhs: &MatR) -> MatR {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = MatR::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &MatR) -> MatR {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> MatR {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        MatR::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &MatR) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn hstack(&self, rhs: &MatR) -> MatR {
        assert_eq!(self.rows, rhs.rows);
        MatR::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &MatR) -> MatR {
        assert_eq!(self.cols, rhs.cols);
        MatR::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                rhs[(i - self.rows, j)].clone()
            }
        })
    }

    /// Column-major flattening.
    pub fn vec_col_major(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].clone());
            }
        }
        out
    }

    pub fn from_col_major(rows: usize, cols: usize, v: &[Rat]) -> MatR {
        assert_eq!(v.len(), rows * cols);
        MatR::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }

    pub fn to_f64(&self) -> MatF {
        MatF {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Rat::to_f64).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MatR {
        assert!(self.is_square());
        let mut out = MatR::identity(self.rows);
        for _ in 0..e {
            out = out.matmul(self);
        }
        out
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self).pivots.len()
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let ech = Echelon::new(self);
        if ech.pivots.len() < self.rows {
            return Rat::zero();
        }
        // Full-rank Bareiss: the last pivot is the determinant of the
        // row-scaled, row-permuted input.
        let last = ech.pivots.len() - 1;
        let d = &ech.m[(last, ech.pivots[last])] / &ech.row_scale;
        if ech.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn inverse(&self) -> Option<MatR> {
        assert!(self.is_square());
        solve_many(self, &MatR::identity(self.rows)).ok().flatten()
    }
}

impl Index<(usize, usize)> for MatR {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatR {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &MatR {
    type Output = MatR;
    fn add(self, rhs: &MatR) -> MatR {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &MatR {
    type Output = MatR;
    fn sub(self, rhs: &MatR) -> MatR {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &MatR {
    type Output = MatR;
    fn mul(self, rhs: &MatR) -> MatR {
        self.matmul(rhs)
    }
}

impl Neg for &MatR {
    type Output = MatR;
    fn neg(self) -> MatR {
        MatR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

impl fmt::Display for MatR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MatR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatR{}x{}{}", self.rows, self.cols, self)
    }
}

/// Row echelon form from fraction-free elimination.
struct Echelon {
    m: MatR,
    pivots: Vec<usize>,
    swaps: usize,
    /// Product of the integer factors used to clear row denominators.
    row_scale: Rat,
}

impl Echelon {
    fn new(src: &MatR) -> Self {
        let (rows, cols) = (src.rows, src.cols);
        let mut m = src.clone();
        let mut row_scale = Rat::one();
        for i in 0..rows {
            let l = (0..cols).fold(BigInt::one(), |acc, j| acc.lcm(m[(i, j)].denom()));
            if !l.is_one() {
                let s = Rat::from(num_rational::BigRational::from_integer(l));
                for j in 0..cols {
                    m[(i, j)] = &m[(i, j)] * &s;
                }
                row_scale *= &s;
            }
        }

        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut prev = Rat::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let pick = (r..rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by_key(|&i| m[(i, c)].numer_bits());
            let Some(p) = pick else { continue };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
                swaps += 1;
            }
            let piv = m[(r, c)].clone();
            for i in r + 1..rows {
                let lead = m[(i, c)].clone();
                for j in c..cols {
                    let v = (&piv * &m[(i, j)] - &lead * &m[(r, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        Echelon {
            m,
            pivots,
            swaps,
            row_scale,
        }
    }

    /// Back-substitution over the first `cols` columns for one right-hand
    /// side given as the values the pivot rows must reproduce. Free
    /// variables take the values in `free`.
    fn back_substitute(&self, cols: usize, rhs: &[Rat], free: &[Rat]) -> Vec<Rat> {
        let mut x = free.to_vec();
        for (r, &c) in self.pivots.iter().enumerate().rev() {
            let mut acc = rhs[r].clone();
            for (j, xj) in x.iter().enumerate().take(cols).skip(c + 1) {
                if !self.m[(r, j)].is_zero() && !xj.is_zero() {
                    acc -= &self.m[(r, j)] * xj;
                }
            }
            x[c] = acc / &self.m[(r, c)];
        }
        x
    }
}

/// Rank and a basis of the right kernel `{v : m·v = 0}`.
pub fn rank_kernel(m: &MatR) -> (usize, Vec<MatR>) {
    let ech = Echelon::new(m);
    let cols = m.cols;
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in &ech.pivots {
            s[c] = true;
        }
        s
    };
    let zeros_rhs = vec![Rat::zero(); ech.pivots.len()];
    let kernel = (0..cols)
        .filter(|&j| !pivot_set[j])
        .map(|free_col| {
            let mut free = vec![Rat::zero(); cols];
            free[free_col] = Rat::one();
            MatR::column(ech.back_substitute(cols, &zeros_rhs, &free))
        })
        .collect();
    (ech.pivots.len(), kernel)
}

/// Solve `a·x = b` for a single column `b`. `Ok(None)` means inconsistent.
pub fn solve_linear(a: &MatR, b: &MatR) -> Result<Option<MatR>> {
    if b.cols != 1 {
        return Err(Error::Dimension(format!(
            "right-hand side must be a column, got {}x{}",
            b.rows, b.cols
        )));
    }
    solve_many(a, b)
}

/// Solve `a·X = B` column by column; `Ok(None)` if any column is inconsistent.
pub fn solve_many(a: &MatR, b: &MatR) -> Result<Option<MatR>> {
    if a.rows != b.rows {
        return Err(Error::Dimension(format!(
            "system has {} rows but right-hand side has {}",
            a.rows, b.rows
        )));
    }
    let aug = a.hstack(b);
    let ech = Echelon::new(&aug);
    if ech.pivots.iter().any(|&c| c >= a.cols) {
        return Ok(None);
    }
    let n = a.cols;
    let mut out = MatR::zeros(n, b.cols);
    for k in 0..b.cols {
        let rhs: Vec<Rat> = (0..ech.pivots.len())
            .map(|r| ech.m[(r, n + k)].clone())
            .collect();
        let x = ech.back_substitute(n, &rhs, &vec![Rat::zero(); n]);
        for (i, v) in x.into_iter().enumerate() {
            out[(i, k)] = v;
        }
    }
    Ok(Some(out))
}

/// `Σ_{j<k} m^j / j!` where `m^k = 0` for some `k ≤ nilpotency_bound`.
pub fn exp_nilpotent(m: &MatR, nilpotency_bound: u32) -> Result<MatR> {
    if !m.is_square() {
        return Err(Error::Dimension("exponential of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut sum = MatR::identity(n);
    let mut power = MatR::identity(n);
    let mut fact = Rat::one();
    for j in 1..=nilpotency_bound {
        power = power.matmul(m);
        if power.is_zero() {
            return Ok(sum);
        }
        fact = fact * Rat::from_int(j as i64);
        sum = &sum + &power.scale(&fact.recip().expect("nonzero factorial"));
    }
    Err(Error::NotNilpotent {
        bound: nilpotency_bound,
    })
}

/// Dense row-major float matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MatF {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl MatF {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatF {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatF::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatF { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        MatF { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> MatF {
        MatF::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &MatF) -> MatF {
        assert_eq!(self.cols, rhs.rows);
        let mut out = MatF::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> MatF {
        MatF {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, rhs: &MatF) -> MatF {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatF {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &MatF) -> MatF {
        self.add(&rhs.scale(-1.0))
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> MatF {
        MatF::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &MatF) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &MatF) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Option<MatF> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = MatF::identity(n);
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[(i, c)].abs().total_cmp(&a[(j, c)].abs()))?;
            if a[(p, c)].abs() < 1e-300 {
                return None;
            }
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
                inv.data.swap(p * n + j, c * n + j);
            }
            let piv = a[(c, c)];
            for j in 0..n {
                a[(c, j)] /= piv;
                inv[(c, j)] /= piv;
            }
            for i in 0..n {
                if i != c {
                    let f = a[(i, c)];
                    if f != 0.0 {
                        for j in 0..n {
                            a[(i, j)] -= f * a[(c, j)];
                            inv[(i, j)] -= f * inv[(c, j)];
                        }
                    }
                }
            }
        }
        Some(inv)
    }
}

impl Index<(usize, usize)> for MatF {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatF {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn exp_float(m: &MatF) -> Result<MatF> {
    if m.rows != m.cols {
        return Err(Error::Dimension("exponential of a non-square matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = m.norm_inf();
    if norm > 700.0 {
        return Err(Error::Overflow);
    }
    let mut squarings = 0u32;
    let mut scaled = norm;
    while scaled > 0.5 {
        scaled /= 2.0;
        squarings += 1;
    }
    let a = m.scale(0.5f64.powi(squarings as i32));
    let n = m.rows;
    let mut sum = MatF::identity(n);
    let mut term = MatF::identity(n);
    for k in 1..=20 {
        term = term.matmul(&a).scale(1.0 / k as f64);
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    if !sum.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn identity_has_full_rank_and_empty_kernel() {
        let (r, k) = rank_kernel(&MatR::identity(3));
        assert_eq!(r, 3);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let m = MatR::zeros(2, 3);
        let (r, k) = rank_kernel(&m);
        assert_eq!(r, 0);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(m.matmul(v).is_zero());
        }
    }

    #[test]
    fn rank_one_two_by_two() {
        let m = MatR::from_i64(2, 2, &[1, 2, 2, 4]);
        let (r, k) = rank_kernel(&m);
        assert_eq!(r, 1);
        assert_eq!(k.len(), 1);
        // Kernel spanned by (-2, 1).
        let v = &k[0];
        assert_eq!(&v[(0, 0)] * &rat(1, 1), &v[(1, 0)] * &rat(-2, 1));
        assert!(m.matmul(v).is_zero());
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = MatR::column(vec![rat(3, 4), rat(-1, 1), rat(5, 2)]);
        let x = solve_linear(&MatR::identity(3), &b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_inconsistent_is_none() {
        let a = MatR::from_i64(2, 2, &[1, 1, 1, 1]);
        let b = MatR::column(vec![rat(1, 1), rat(2, 1)]);
        assert_eq!(solve_linear(&a, &b).unwrap(), None);
    }

    #[test]
    fn solve_diagonal() {
        let a = MatR::from_i64(2, 2, &[2, 0, 0, 3]);
        let b = MatR::column(vec![rat(1, 1), rat(1, 1)]);
        let x = solve_linear(&a, &b).unwrap().unwrap();
        assert_eq!(x, MatR::column(vec![rat(1, 2), rat(1, 3)]));
    }

    #[test]
    fn solve_dimension_mismatch_is_error() {
        let a = MatR::identity(3);
        let b = MatR::column(vec![Rat::one(), Rat::one()]);
        assert!(matches!(solve_linear(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = MatR::from_i64(3, 3, &[2, -1, 0, 4, 3, 5, -2, 7, 1]);
        // 2(3-35) + 1(4+10) + 0 = -64 + 14 = -50
        assert_eq!(m.det(), rat(-50, 1));
        let h = MatR::from_fn(3, 3, |i, j| rat(1, (i + j + 1) as i64));
        assert_eq!(h.det(), rat(1, 2160));
        assert_eq!(MatR::from_i64(2, 2, &[1, 2, 2, 4]).det(), Rat::zero());
        assert_eq!(MatR::from_i64(2, 2, &[0, 1, 1, 0]).det(), rat(-1, 1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = MatR::from_fn(4, 4, |i, j| rat((i * 3 + j * j + 1) as i64 % 7 - 2, (j + 1) as i64));
        if let Some(inv) = m.inverse() {
            assert_eq!(m.matmul(&inv), MatR::identity(4));
        } else {
            assert!(m.det().is_zero());
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(exp_nilpotent(&MatR::zeros(3, 3), 3).unwrap(), MatR::identity(3));
    }

    #[test]
    fn exp_of_square_zero_is_affine() {
        let mut m = MatR::zeros(2, 2);
        m[(0, 1)] = rat(5, 3);
        let e = exp_nilpotent(&m, 2).unwrap();
        assert_eq!(e, &MatR::identity(2) + &m);
    }

    #[test]
    fn exp_of_jordan_block() {
        let mut m = MatR::zeros(3, 3);
        m[(0, 1)] = Rat::one();
        m[(1, 2)] = Rat::one();
        let e = exp_nilpotent(&m, 3).unwrap();
        assert_eq!(e[(0, 2)], rat(1, 2));
        let inv = exp_nilpotent(&-&m, 3).unwrap();
        assert_eq!(e.matmul(&inv), MatR::identity(3));
    }

    #[test]
    fn exp_rejects_non_nilpotent() {
        let m = MatR::identity(2);
        assert!(matches!(exp_nilpotent(&m, 4), Err(Error::NotNilpotent { bound: 4 })));
    }

    #[test]
    fn exp_float_scalar_cases() {
        let z = exp_float(&MatF::zeros(3, 3)).unwrap();
        assert!(z.max_abs_diff(&MatF::identity(3)) < 1e-15);
        let d = MatF::from_vec(2, 2, vec![2f64.ln(), 0.0, 0.0, 0.0]);
        let e = exp_float(&d).unwrap();
        let want = MatF::from_vec(2, 2, vec![2.0, 0.0, 0.0, 1.0]);
        assert!(e.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn exp_float_rejects_overflow_and_nan() {
        let big = MatF::from_vec(1, 1, vec![1e6]);
        assert!(matches!(exp_float(&big), Err(Error::Overflow)));
        let nan = MatF::from_vec(1, 1, vec![f64::NAN]);
        assert!(matches!(exp_float(&nan), Err(Error::NonFinite)));
    }

    #[test]
    fn float_inverse() {
        let m = MatF::from_vec(2, 2, vec![4.0, 7.0, 2.0, 6.0]);
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).max_abs_diff(&MatF::identity(2)) < 1e-14);
    }
}
