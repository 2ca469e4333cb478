//! Exact rational linear algebra: rank, linear systems, null spaces and a
//! phase-1 simplex deciding feasibility of `Ax = b, x >= 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ImsetError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Dense row-major matrix of arbitrary-precision rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(ImsetError::Dimension {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(ImsetError::Dimension {
                    expected: rows,
                    got: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(ImsetError::Dimension {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `yᵀ M`.
    pub fn vec_mul(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        self.transpose().mul_vec(y)
    }

    /// Exact rank by fraction-free elimination on integer-scaled rows.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = (0..self.rows).map(|i| scale_to_integers(self.row(i))).collect();
        let small: Option<Vec<Vec<i128>>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128()).collect())
            .collect();
        if let Some(small) = small {
            if let Some(r) = bareiss_rank_i128(small, self.cols) {
                return r;
            }
        }
        bareiss_rank_big(rows, self.cols)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    if self.get(r, j).is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &factor * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Some solution of `Mx = b` with free variables set to zero, or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(ImsetError::Dimension {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Basis of `{x : Mx = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Decides whether `{x >= 0 : Ax = b}` is nonempty.
    pub fn lp_feasible(&self, b: &[Rational]) -> Result<LpFeasibility> {
        if b.len() != self.rows {
            return Err(ImsetError::Dimension {
                expected: self.rows,
                got: b.len(),
            });
        }
        let out = phase_one(self, b);
        debug_assert!(out.verify(self, b), "LP answer failed verification");
        Ok(out)
    }
}

/// Outcome of a feasibility test, always carrying a checkable proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpFeasibility {
    /// `x >= 0` with `Ax = b`.
    Feasible { witness: Vec<Rational> },
    /// Integer `y` with `yᵀA >= 0` and `yᵀb < 0`.
    Infeasible { certificate: Vec<Rational> },
}

impl LpFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpFeasibility::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpFeasibility::Feasible { witness } => Some(witness),
            LpFeasibility::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&[Rational]> {
        match self {
            LpFeasibility::Infeasible { certificate } => Some(certificate),
            LpFeasibility::Feasible { .. } => None,
        }
    }

    /// Re-checks the witness or the Farkas certificate exactly.
    pub fn verify(&self, a: &RationalMatrix, b: &[Rational]) -> bool {
        match self {
            LpFeasibility::Feasible { witness } => {
                witness.len() == a.cols()
                    && witness.iter().all(|x| !x.is_negative())
                    && a.mul_vec(witness).is_ok_and(|ax| ax == b)
            }
            LpFeasibility::Infeasible { certificate } => {
                if certificate.len() != a.rows() {
                    return false;
                }
                let yb: Rational = certificate.iter().zip(b).map(|(y, x)| y * x).sum();
                yb.is_negative()
                    && a.vec_mul(certificate)
                        .is_ok_and(|ya| ya.iter().all(|v| !v.is_negative()))
            }
        }
    }
}

fn phase_one(a: &RationalMatrix, b: &[Rational]) -> LpFeasibility {
    let m = a.rows();
    let k = a.cols();
    let width = k + m + 1;
    let rhs = k + m;
    let signs: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();

    // tableau [D A | I | D b] with D flipping rows whose right-hand side is negative
    let mut t = vec![Rational::zero(); m * width];
    for i in 0..m {
        for j in 0..k {
            let v = a.get(i, j);
            t[i * width + j] = if signs[i] { -v } else { v.clone() };
        }
        t[i * width + k + i] = Rational::one();
        t[i * width + rhs] = if signs[i] { -&b[i] } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (k..k + m).collect();

    // reduced costs of the artificial-sum objective
    let mut obj = vec![Rational::zero(); width];
    for i in 0..m {
        for j in 0..k {
            obj[j] -= &t[i * width + j];
        }
        obj[rhs] -= &t[i * width + rhs];
    }
    for l in 0..m {
        obj[k + l] = Rational::zero();
    }

    loop {
        // Bland: lowest-index structural column with negative reduced cost;
        // artificial columns never enter
        let Some(enter) = (0..k).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let p = &t[i * width + enter];
            if !p.is_positive() {
                continue;
            }
            let ratio = &t[i * width + rhs] / p;
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase-1 objective is bounded below by zero
        let (r, _) = leave.expect("phase-1 simplex cannot be unbounded");
        pivot(&mut t, &mut obj, width, m, r, enter);
        basis[r] = enter;
    }

    // obj[rhs] holds minus the optimal artificial sum
    if obj[rhs].is_zero() {
        let mut x = vec![Rational::zero(); k];
        for (i, &j) in basis.iter().enumerate() {
            if j < k {
                x[j] = t[i * width + rhs].clone();
            }
        }
        LpFeasibility::Feasible { witness: x }
    } else {
        // reduced cost of artificial l is 1 - y'_l with y' = c_Bᵀ B⁻¹
        let y: Vec<Rational> = (0..m)
            .map(|l| {
                let yl = Rational::one() - &obj[k + l];
                // undo the row flips and negate: y = -D y'
                if signs[l] {
                    yl
                } else {
                    -yl
                }
            })
            .collect();
        LpFeasibility::Infeasible {
            certificate: integer_multiple(&y)
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        }
    }
}

fn pivot(t: &mut [Rational], obj: &mut [Rational], width: usize, m: usize, r: usize, c: usize) {
    let inv = t[r * width + c].recip();
    for j in 0..width {
        if !t[r * width + j].is_zero() {
            t[r * width + j] *= &inv;
        }
    }
    let pivot_row: Vec<(usize, Rational)> = (0..width)
        .filter(|&j| !t[r * width + j].is_zero())
        .map(|j| (j, t[r * width + j].clone()))
        .collect();
    for i in 0..m {
        if i == r {
            continue;
        }
        let f = t[i * width + c].clone();
        if f.is_zero() {
            continue;
        }
        for (j, v) in &pivot_row {
            t[i * width + j] -= &f * v;
        }
    }
    let f = obj[c].clone();
    if !f.is_zero() {
        for (j, v) in &pivot_row {
            obj[*j] -= &f * v;
        }
    }
}

/// Smallest positive multiple of `v` with integer entries and content one.
pub fn integer_multiple(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() || gcd.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &gcd).collect()
    }
}

fn scale_to_integers(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| (x * &lcm).to_integer()).collect()
}

/// Rank of an integer matrix given as rows.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let small: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    bareiss_rank_i128(small, cols).unwrap_or_else(|| {
        bareiss_rank_big(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    })
}

/// Fraction-free elimination; `None` on overflow.
fn bareiss_rank_i128(mut m: Vec<Vec<i128>>, cols: usize) -> Option<usize> {
    let rows = m.len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(p, rank);
        let piv = m[rank][c];
        for i in rank + 1..rows {
            let f = m[i][c];
            for j in c + 1..cols {
                let x = piv.checked_mul(m[i][j])?;
                let y = f.checked_mul(m[rank][j])?;
                let d = x.checked_sub(y)?;
                debug_assert_eq!(d % prev, 0);
                m[i][j] = d / prev;
            }
            m[i][c] = 0;
        }
        prev = piv;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_rank_big(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        let piv = m[rank][c].clone();
        for i in rank + 1..rows {
            let f = m[i][c].clone();
            for j in c + 1..cols {
                let d = &piv * &m[i][j] - &f * &m[rank][j];
                m[i][j] = d / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]]).rank(), 2);
        let mut half = m(&[&[1, 1], &[1, 2]]);
        half.set(0, 0, ratio(1, 3));
        assert_eq!(half.rank(), 2);
    }

    #[test]
    fn rank_falls_back_on_overflow() {
        let big = i64::MAX / 3;
        let rows = vec![vec![big, big - 1, 7], vec![big - 5, big, 3], vec![11, big, big - 2]];
        let exact = bareiss_rank_big(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            3,
        );
        assert_eq!(integer_rank(&rows), exact);
        assert_eq!(exact, 3);
    }

    #[test]
    fn solve_cases() {
        let id = RationalMatrix::identity(3);
        assert_eq!(id.solve(&v(&[4, 5, 6])).unwrap(), Some(v(&[4, 5, 6])));
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(a.solve(&v(&[1, 3])).unwrap(), None);
        let x = a.solve(&v(&[1, 2])).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), v(&[1, 2]));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 9]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            assert!(a.mul_vec(x).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn lp_feasible_and_infeasible() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let f = a.lp_feasible(&v(&[2, 3])).unwrap();
        assert!(f.is_feasible() && f.verify(&a, &v(&[2, 3])));
        let g = a.lp_feasible(&v(&[-1, 3])).unwrap();
        assert!(!g.is_feasible() && g.verify(&a, &v(&[-1, 3])));
        let c = g.certificate().unwrap();
        assert!(c.iter().all(|x| x.is_integer()));
    }

    #[test]
    fn lp_with_redundant_rows() {
        let a = m(&[&[1, -1, 0], &[-1, 1, 0], &[0, 0, 1]]);
        let b = v(&[0, 0, 1]);
        let f = a.lp_feasible(&b).unwrap();
        assert!(f.is_feasible());
        let b2 = v(&[1, 1, 0]);
        assert!(!a.lp_feasible(&b2).unwrap().is_feasible());
    }

    #[test]
    fn lp_is_deterministic() {
        let a = m(&[&[1, 2, 1, 0], &[0, 1, 2, 1]]);
        let b = v(&[3, 3]);
        assert_eq!(a.lp_feasible(&b).unwrap(), a.lp_feasible(&b).unwrap());
    }
}
