//! Small dense matrices, exact elimination over ℚ, and elimination over
//! ℚ[u]/(m) for squarefree `m`.
//!
//! When `m` is reducible, ℚ[u]/(m) is a product of fields. Elimination there
//! proceeds until a pivot candidate shares a proper factor with `m`; the
//! modulus is then split along that factor and each piece is retried. Every
//! returned piece therefore has a well-defined rank, identical at all of its
//! roots.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::numeric::{Approx, CRat};
use crate::poly::UniPoly;
use crate::rat::Rat;

pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
}

/// A field in which a pipeline can run either exactly (ℚ) or on the rounded
/// complex path. `try_sqrt` is partial over ℚ and total on `Approx`.
pub trait Field: Ring + Div<Output = Self> + fmt::Debug {
    fn lift(r: &Rat, bits: u32) -> Self;
    fn try_sqrt(&self) -> Option<Self>;
    /// Rough modulus, used only to choose among algebraically equivalent
    /// options (pivots, reflection signs).
    fn magnitude(&self) -> f64;
    fn is_exact_zero(&self) -> bool;
}

impl Ring for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
}

impl Field for Rat {
    fn lift(r: &Rat, _bits: u32) -> Self {
        r.clone()
    }
    fn try_sqrt(&self) -> Option<Self> {
        self.sqrt_exact()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
}

impl Ring for Approx {
    fn zero() -> Self {
        Approx {
            z: CRat::zero(),
            bits: 0,
        }
    }
    fn one() -> Self {
        Approx {
            z: CRat::one(),
            bits: 0,
        }
    }
}

impl Field for Approx {
    fn lift(r: &Rat, bits: u32) -> Self {
        Approx::from_rat(r, bits)
    }
    fn try_sqrt(&self) -> Option<Self> {
        let bits = if self.bits == 0 { 256 } else { self.bits };
        Some(Approx {
            z: self.z.sqrt_approx(bits),
            bits,
        })
    }
    fn magnitude(&self) -> f64 {
        self.z.abs_f64()
    }
    fn is_exact_zero(&self) -> bool {
        self.z.is_zero()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Minor with row `r` and column `c` removed.
    fn minor(&self, r: usize, c: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }
}

impl<T: Ring> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self.get(i, k).clone() * rhs.get(k, j).clone()
            })
        })
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j).clone()
        })
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j).clone()
        })
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        self.map(|x| c.clone() * x.clone())
    }

    /// `g · self · gᵀ`
    pub fn congruence(&self, g: &Matrix<T>) -> Matrix<T> {
        g.mul(self).mul(&g.transpose())
    }

    /// Cofactor expansion; used for the small (≤ 4×4) matrices of this crate,
    /// including matrices of polynomials.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        match self.rows {
            0 => T::one(),
            1 => self.get(0, 0).clone(),
            2 => {
                self.get(0, 0).clone() * self.get(1, 1).clone()
                    - self.get(0, 1).clone() * self.get(1, 0).clone()
            }
            n => {
                let mut acc = T::zero();
                for j in 0..n {
                    let term = self.get(0, j).clone() * self.minor(0, j).det();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form over ℚ; returns the pivot columns.
pub fn rref(m: &Matrix<Rat>) -> (Matrix<Rat>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..a.cols {
        if prow == a.rows {
            break;
        }
        let Some(r) = (prow..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        swap_rows(&mut a, r, prow);
        let inv = a.get(prow, col).recip().unwrap();
        for j in col..a.cols {
            let v = a.get(prow, j) * &inv;
            a.set(prow, j, v);
        }
        for r in 0..a.rows {
            if r == prow || a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col).clone();
            for j in col..a.cols {
                let v = a.get(r, j) - &(&f * a.get(prow, j));
                a.set(r, j, v);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    (a, pivots)
}

fn swap_rows<T: Clone>(a: &mut Matrix<T>, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..a.cols {
        a.data.swap(r1 * a.cols + j, r2 * a.cols + j);
    }
}

pub fn rank(m: &Matrix<Rat>) -> usize {
    rref(m).1.len()
}

/// Kernel basis; each vector has a 1 in its free coordinate.
pub fn kernel(m: &Matrix<Rat>) -> Vec<Vec<Rat>> {
    let (r, pivots) = rref(m);
    kernel_from_rref(&r, &pivots, Rat::zero, Rat::one, |x| -x.clone())
}

fn kernel_from_rref<T: Clone>(
    r: &Matrix<T>,
    pivots: &[usize],
    zero: impl Fn() -> T,
    one: impl Fn() -> T,
    neg: impl Fn(&T) -> T,
) -> Vec<Vec<T>> {
    let free: Vec<usize> = (0..r.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero(); r.cols];
            v[f] = one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = neg(r.get(i, f));
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Matrix<Rat>) -> Option<Matrix<Rat>> {
    let n = m.rows;
    assert!(m.is_square());
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| r.get(i, j + n).clone()))
}

/// Rank and kernel of a matrix over one piece ℚ[u]/(modulus).
#[derive(Clone, Debug)]
pub struct ModPiece {
    pub modulus: UniPoly,
    pub rank: usize,
    /// Entries are reduced polynomials in `u` representing elements of the
    /// quotient ring.
    pub kernel: Vec<Vec<UniPoly>>,
}

/// Elimination of a polynomial matrix over ℚ[u]/(m), `m` squarefree of
/// positive degree. The returned moduli multiply to `m`.
pub fn split_eliminate(mat: &Matrix<UniPoly>, m: &UniPoly) -> Vec<ModPiece> {
    let mut todo = vec![m.monic()];
    let mut out = Vec::new();
    while let Some(modulus) = todo.pop() {
        match rref_mod(mat, &modulus) {
            Ok((r, pivots)) => {
                let kernel = kernel_from_rref(&r, &pivots, UniPoly::zero, UniPoly::one, |x| {
                    (-x).rem(&modulus)
                });
                out.push(ModPiece {
                    rank: pivots.len(),
                    kernel,
                    modulus,
                });
            }
            Err(g) => {
                let other = modulus.exact_div(&g);
                todo.push(other);
                todo.push(g);
            }
        }
    }
    out.sort_by_key(|p| (p.modulus.deg0(), format!("{:?}", p.modulus)));
    out
}

fn rref_mod(
    mat: &Matrix<UniPoly>,
    m: &UniPoly,
) -> Result<(Matrix<UniPoly>, Vec<usize>), UniPoly> {
    let mut a = mat.map(|x| x.rem(m));
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..a.cols {
        if prow == a.rows {
            break;
        }
        let mut found = None;
        for r in prow..a.rows {
            let e = a.get(r, col);
            if e.is_zero() {
                continue;
            }
            let (g, s, _) = e.ext_gcd(m);
            if !g.is_constant() {
                return Err(g);
            }
            found = Some((r, s));
            break;
        }
        let Some((r, inv)) = found else { continue };
        swap_rows(&mut a, r, prow);
        for j in col..a.cols {
            let v = (a.get(prow, j) * &inv).rem(m);
            a.set(prow, j, v);
        }
        for r in 0..a.rows {
            if r == prow || a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col).clone();
            for j in col..a.cols {
                let v = (a.get(r, j) - &(&f * a.get(prow, j))).rem(m);
                a.set(r, j, v);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Ok((a, pivots))
}

/// Splits squarefree `m` into the part where `value` vanishes and the part
/// where it is a unit: `(gcd(value, m), m / gcd(value, m))`, both monic.
pub fn split_zero_locus(value: &UniPoly, m: &UniPoly) -> (UniPoly, UniPoly) {
    let v = value.rem(m);
    let g = v.gcd(m);
    if v.is_zero() {
        (m.monic(), UniPoly::one())
    } else {
        let rest = m.exact_div(&g).monic();
        (g, rest)
    }
}

/// `vᵀ A w` over ℚ[u]/(m) with `A` rational.
pub fn bilinear_mod(a: &Matrix<Rat>, v: &[UniPoly], w: &[UniPoly], m: &UniPoly) -> UniPoly {
    let mut acc = UniPoly::zero();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let c = a.get(i, j);
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&v[i] * &w[j]).scale(c);
        }
    }
    acc.rem(m)
}

pub fn bilinear(a: &Matrix<Rat>, v: &[Rat], w: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a.get(i, j) * &v[i] * &w[j];
        }
    }
    acc
}

pub fn mat_vec(a: &Matrix<Rat>, v: &[Rat]) -> Vec<Rat> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a.get(i, j) * &v[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    fn mat(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = mat(&[&[2, 1, 0, 0], &[1, 3, 1, 0], &[0, 1, 4, 1], &[0, 0, 1, 5]]);
        assert_eq!(a.det(), qi(2 * (3 * 19 - 5) - 19));
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(4));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&a, &k[0]).iter().all(Rat::is_zero));
    }

    #[test]
    fn polynomial_determinant() {
        // det(diag(u, u+1)) = u^2 + u
        let u = UniPoly::x();
        let m = Matrix::from_rows(vec![
            vec![u.clone(), UniPoly::zero()],
            vec![UniPoly::zero(), &u + &UniPoly::one()],
        ]);
        assert_eq!(m.det(), UniPoly::from_ints(&[0, 1, 1]));
    }

    #[test]
    fn splitting_elimination() {
        // diag(u, u - 1) over Q[u]/(u(u-1)(u^2-2)): rank 1 at u=0 and u=1, rank 2 elsewhere.
        let u = UniPoly::x();
        let m = &(&u * &(&u - &UniPoly::one())) * &UniPoly::from_ints(&[-2, 0, 1]);
        let a = Matrix::from_rows(vec![
            vec![u.clone(), UniPoly::zero()],
            vec![UniPoly::zero(), &u - &UniPoly::one()],
        ]);
        let pieces = split_eliminate(&a, &m);
        let product = pieces
            .iter()
            .fold(UniPoly::one(), |acc, p| &acc * &p.modulus);
        assert_eq!(product, m.monic());
        for p in &pieces {
            let expect = if p.modulus.deg0() == 1 { 1 } else { 2 };
            assert_eq!(p.rank, expect, "piece {:?}", p.modulus);
            assert_eq!(p.kernel.len(), 2 - p.rank);
        }
    }
}
