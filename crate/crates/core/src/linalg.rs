//! Small dense linear algebra over exact and float scalars.
//!
//! The exact routines run Gauss–Jordan elimination over any [`Scalar`]
//! field (in practice Gaussian rationals) and are used for hyperplane
//! coordinate changes, dependence kernels, and rank checks where a
//! wrong pivot decision would silently corrupt downstream certificates.
//! The float side provides an incremental rank accumulator with a
//! relative pivot tolerance, and a textbook LLL reduction over exact
//! rationals used by the integer-relation heuristic.

use num::{BigInt, BigRational, Signed, Zero};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reduces `mat` (rows × cols) to reduced row echelon form in place and
/// returns the pivot column indices.
pub fn rref<S: Scalar>(mat: &mut [Vec<S>]) -> Result<Vec<usize>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(r, p);
        let inv_lead = S::one().div(&mat[r][c])?;
        for x in mat[r].iter_mut() {
            *x = x.mul(&inv_lead);
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Rank of a matrix over an exact scalar field.
pub fn rank<S: Scalar>(mat: &[Vec<S>]) -> Result<usize> {
    let mut work: Vec<Vec<S>> = mat.to_vec();
    Ok(rref(&mut work)?.len())
}

/// Solves `A·x = b` exactly. Returns `None` when the system is
/// inconsistent; when underdetermined, free variables are set to zero.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<Option<Vec<S>>> {
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::InvalidInput(format!(
            "solve: matrix has {rows} rows but the right-hand side has {} entries",
            b.len()
        )));
    }
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut work: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut work)?;
    if pivots.last() == Some(&cols) {
        return Ok(None); // pivot in the augmented column: inconsistent
    }
    let mut x = vec![S::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = work[row][cols].clone();
    }
    Ok(Some(x))
}

/// A basis for the null space of `A`, one vector per free column.
pub fn kernel_basis<S: Scalar>(a: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut work: Vec<Vec<S>> = a.to_vec();
    let pivots = rref(&mut work)?;
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = work[row][free].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Incremental numerical rank tracker over ℂ with a relative pivot
/// tolerance: a candidate row is accepted when its component orthogonal
/// to the rows already kept is at least `tol` times its own norm.
#[derive(Clone, Debug)]
pub struct FloatRankAccumulator {
    basis: Vec<Vec<Complex64>>,
    tol: f64,
}

impl FloatRankAccumulator {
    pub fn new(tol: f64) -> Self {
        FloatRankAccumulator { basis: Vec::new(), tol }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Tries to add `row`; returns whether it increased the rank.
    pub fn try_add(&mut self, row: &[Complex64]) -> bool {
        let norm0: f64 = row.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm0 == 0.0 || !norm0.is_finite() {
            return false;
        }
        let mut v: Vec<Complex64> = row.to_vec();
        // Two rounds of modified Gram–Schmidt for numerical hygiene.
        for _ in 0..2 {
            for b in &self.basis {
                let dot: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
        }
        let residual: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if residual <= self.tol * norm0 {
            return false;
        }
        for c in v.iter_mut() {
            *c /= residual;
        }
        self.basis.push(v);
        true
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lattice basis reduction (LLL, δ = 3/4) over exact rationals.
///
/// `basis` holds lattice vectors as rows; they are reduced in place.
/// Exact arithmetic sidesteps the precision cliffs float LLL is known
/// for; the lattices here are tiny (≤ 10 vectors).
pub fn lll_reduce(basis: &mut Vec<Vec<BigRational>>) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    // Gram–Schmidt data recomputed on structural change; dimensions are
    // small enough that clarity wins over the incremental update.
    let gs = |basis: &Vec<Vec<BigRational>>| -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut mu: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut v = basis[i].clone();
            for j in 0..i {
                let denom = dot(&star[j], &star[j]);
                let m = if denom.is_zero() {
                    BigRational::zero()
                } else {
                    dot(&basis[i], &star[j]) / &denom
                };
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= &m * sk;
                }
                mu[i][j] = m;
            }
            star.push(v);
        }
        (star, mu)
    };
    let (mut star, mut mu) = gs(basis);
    let mut k = 1usize;
    while k < n {
        // Size reduction.
        for j in (0..k).rev() {
            let rounded = round_rational(&mu[k][j]);
            if !rounded.is_zero() {
                let row_j = basis[j].clone();
                for (bk, bj) in basis[k].iter_mut().zip(&row_j) {
                    *bk -= BigRational::from_integer(rounded.clone()) * bj;
                }
                let (s, m) = gs(basis);
                star = s;
                mu = m;
            }
        }
        // Lovász condition.
        let lhs = dot(&star[k], &star[k]);
        let prev = dot(&star[k - 1], &star[k - 1]);
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * prev;
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let (s, m) = gs(basis);
            star = s;
            mu = m;
            k = k.max(2) - 1;
        }
    }
}

fn round_rational(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let num = x.numer();
    let den = x.denom();
    // round-half-away-from-zero of num/den
    let doubled = num * &two;
    let q = &doubled / den;
    let adjusted = if q.is_negative() { q - BigInt::from(1) } else { q + BigInt::from(1) };
    &adjusted / &two
}

/// Squared Euclidean norm of a rational vector.
pub fn norm_sq(v: &[BigRational]) -> BigRational {
    dot(v, v)
}

/// All k-element index combinations of `0..n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_ints(n, 0)
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rref_and_rank() {
        let mat = vec![vec![g(1), g(2), g(3)], vec![g(2), g(4), g(6)], vec![g(0), g(1), g(1)]];
        assert_eq!(rank(&mat).unwrap(), 2);
        let id = vec![vec![g(1), g(0)], vec![g(0), g(1)]];
        assert_eq!(rank(&id).unwrap(), 2);
    }

    #[test]
    fn exact_solve() {
        // x + 2y = 5, 3x + 4y = 11  =>  x = 1, y = 2
        let a = vec![vec![g(1), g(2)], vec![g(3), g(4)]];
        let x = solve(&a, &[g(5), g(11)]).unwrap().unwrap();
        assert_eq!(x, vec![g(1), g(2)]);
        // Inconsistent system.
        let a2 = vec![vec![g(1), g(1)], vec![g(2), g(2)]];
        assert!(solve(&a2, &[g(1), g(3)]).unwrap().is_none());
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let a = vec![vec![g(1), g(2), g(3)]];
        let basis = kernel_basis(&a).unwrap();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let s = v[0].mul(&g(1)).add(&v[1].mul(&g(2))).add(&v[2].mul(&g(3)));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn float_rank_accumulator_rejects_dependent_rows() {
        let mut acc = FloatRankAccumulator::new(1e-10);
        let e1 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let e2 = vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)];
        assert!(acc.try_add(&e1));
        assert!(!acc.try_add(&[e1[0] * 3.0, e1[1] * 3.0]));
        assert!(acc.try_add(&e2));
        assert_eq!(acc.rank(), 2);
        assert!(!acc.try_add(&[e1[0] + e2[0], e1[1] + e2[1]]));
    }

    #[test]
    fn lll_finds_short_vector() {
        // r0 − r1 = (1, −1, −1) has norm² 3, far below the raw rows.
        let mut basis = vec![
            vec![rat(1), rat(0), rat(10001)],
            vec![rat(0), rat(1), rat(10002)],
            vec![rat(0), rat(0), rat(10003)],
        ];
        lll_reduce(&mut basis);
        let shortest = basis.iter().map(|v| norm_sq(v)).min().unwrap();
        assert!(shortest <= rat(3), "shortest norm² = {shortest}");
    }

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(4, 2)[0], vec![0, 1]);
        assert_eq!(combinations(4, 2)[5], vec![2, 3]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round_rational(&BigRational::new(BigInt::from(3), BigInt::from(2))), BigInt::from(2));
        assert_eq!(round_rational(&BigRational::new(BigInt::from(-3), BigInt::from(2))), BigInt::from(-2));
        assert_eq!(round_rational(&BigRational::new(BigInt::from(1), BigInt::from(3))), BigInt::from(0));
    }
}
