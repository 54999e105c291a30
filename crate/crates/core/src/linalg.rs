//! Dense exact linear algebra over the scalar tower. Row reduction,
//! solving and kernels require a field; arithmetic works anywhere.

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::ring::{Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![Scalar::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(ring));
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Scalar>>) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            for s in r {
                assert_eq!(s.ring(), ring, "entry ring mismatch");
                data.push(s);
            }
        }
        Matrix { ring: ring.clone(), rows: nrows, cols: ncols, data }
    }

    pub fn from_fn(
        ring: &Ring,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut m = Matrix::zero(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        assert_eq!(s.ring(), &self.ring, "entry ring mismatch");
        self.data[i * self.cols + j] = s;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn assert_same_shape(&self, other: &Matrix, op: &str) {
        assert_eq!(self.ring, other.ring, "{op} on mismatched rings");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "{op} shape mismatch");
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.assert_same_shape(other, "add");
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.assert_same_shape(other, "sub");
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        assert_eq!(c.ring(), &self.ring, "scale ring mismatch");
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring, "mul on mismatched rings");
        assert_eq!(self.cols, other.rows, "mul shape mismatch");
        let mut out = Matrix::zero(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(&self.ring);
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc = acc.add(&a.mul(vj));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "trace of non-square matrix");
        let mut acc = Scalar::zero(&self.ring);
        for i in 0..self.rows {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        assert_eq!(self.ring, other.ring, "hstack ring mismatch");
        Matrix::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        assert_eq!(self.ring, other.ring, "vstack ring mismatch");
        Matrix::from_fn(&self.ring, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    /// Applies a scalar map entrywise, landing in `target`.
    pub fn map(
        &self,
        target: &Ring,
        f: &mut dyn FnMut(&Scalar) -> Result<Scalar>,
    ) -> Result<Matrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for s in &self.data {
            let mapped = f(s)?;
            assert_eq!(mapped.ring(), target, "map landed in the wrong ring");
            data.push(mapped);
        }
        Ok(Matrix { ring: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Reduced row echelon form with the pivot column list. Requires a
    /// field.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        assert!(self.ring.is_field(), "row reduction needs a field, got {}", self.ring);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot in a field");
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&factor.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// One solution of self * X = rhs (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let (red, pivots) = self.hstack(rhs).rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(&self.ring, self.cols, rhs.cols);
        for (k, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(c, j, red.get(k, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// The unique solution of self * X = rhs; errors when the system is
    /// inconsistent or the solution is not unique.
    pub fn solve_unique(&self, rhs: &Matrix) -> Result<Matrix> {
        let x = self
            .solve(rhs)
            .ok_or_else(|| Error::NoSolution("inconsistent linear system".into()))?;
        if self.rank() < self.cols {
            return Err(Error::NoSolution(
                "linear system is underdetermined".into(),
            ));
        }
        Ok(x)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (red, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut v = vec![Scalar::zero(&self.ring); self.cols];
            v[f] = Scalar::one(&self.ring);
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = red.get(k, f).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Monic characteristic polynomial in the symbol `X`, computed by
    /// Hessenberg reduction. Requires a field.
    pub fn charpoly(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of non-square matrix");
        assert!(self.ring.is_field(), "characteristic polynomial needs a field");
        let n = self.rows;
        let ring = &self.ring;
        if n == 0 {
            return LaurentPoly::one(ring, "X");
        }
        let mut h: Vec<Vec<Scalar>> =
            (0..n).map(|i| self.row(i).to_vec()).collect();
        // similarity reduction to upper Hessenberg form
        for m in 0..n.saturating_sub(2) {
            let Some(piv) = ((m + 1)..n).find(|&i| !h[i][m].is_zero()) else {
                continue;
            };
            if piv != m + 1 {
                h.swap(piv, m + 1);
                for row in h.iter_mut() {
                    row.swap(piv, m + 1);
                }
            }
            let inv = h[m + 1][m].inv().expect("nonzero pivot in a field");
            for i in (m + 2)..n {
                if h[i][m].is_zero() {
                    continue;
                }
                let u = h[i][m].mul(&inv);
                let pivot_row = h[m + 1].clone();
                for (hij, pj) in h[i].iter_mut().zip(&pivot_row) {
                    *hij = hij.sub(&u.mul(pj));
                }
                for r in h.iter_mut() {
                    let v = r[m + 1].add(&u.mul(&r[i]));
                    r[m + 1] = v;
                }
            }
        }
        // recurrence on leading principal minors of XI - H
        let x = LaurentPoly::monomial(ring, "X", 1, Scalar::one(ring));
        let mut p = vec![LaurentPoly::one(ring, "X")];
        for m in 1..=n {
            let head = x
                .sub(&LaurentPoly::monomial(ring, "X", 0, h[m - 1][m - 1].clone()))
                .mul(&p[m - 1]);
            let mut acc = head;
            let mut t = Scalar::one(ring);
            for i in (1..m).rev() {
                t = t.mul(&h[i][i - 1]);
                let coeff = h[i - 1][m - 1].mul(&t);
                if !coeff.is_zero() {
                    acc = acc.sub(&p[i - 1].scale(&coeff));
                }
            }
            p.push(acc);
        }
        p.pop().expect("n >= 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            &Ring::Rat,
            rows.iter()
                .map(|r| r.iter().map(|&c| Scalar::from_int(&Ring::Rat, c)).collect())
                .collect(),
        )
    }

    /// Independent characteristic polynomial oracle over characteristic
    /// zero (trace-based Newton identities).
    fn faddeev_leverrier(a: &Matrix) -> Vec<Scalar> {
        let n = a.nrows();
        let ring = a.ring().clone();
        let mut coeffs = vec![Scalar::one(&ring)];
        let mut m = Matrix::zero(&ring, n, n);
        let mut c = Scalar::one(&ring);
        for k in 1..=n {
            for i in 0..n {
                let v = m.get(i, i).add(&c);
                m.set(i, i, v);
            }
            m = a.mul(&m);
            c = m.trace().neg().try_div(&Scalar::from_int(&ring, k as i64)).unwrap();
            coeffs.push(c.clone());
        }
        coeffs // X^n + c1 X^(n-1) + ... + cn
    }

    #[test]
    fn rref_and_rank() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let (red, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
        assert!(red.get(2, 0).is_zero() && red.get(2, 1).is_zero() && red.get(2, 2).is_zero());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = qm(&[&[1, 1], &[1, -1]]);
        let b = qm(&[&[3], &[1]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        assert!(a.solve_unique(&b).is_ok());
        let sing = qm(&[&[1, 1], &[1, 1]]);
        let bad = qm(&[&[0], &[1]]);
        assert!(sing.solve(&bad).is_none());
        let under = qm(&[&[1, 1], &[2, 2]]);
        let ok = qm(&[&[1], &[2]]);
        assert!(under.solve(&ok).is_some());
        assert!(matches!(under.solve_unique(&ok), Err(Error::NoSolution(_))));
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn charpoly_companion_matrix() {
        // companion of X^3 - 2X + 5
        let m = qm(&[&[0, 0, -5], &[1, 0, 2], &[0, 1, 0]]);
        let p = m.charpoly();
        let ring = Ring::Rat;
        let expect = LaurentPoly::from_terms(
            &ring,
            "X",
            [
                (3, Scalar::from_int(&ring, 1)),
                (1, Scalar::from_int(&ring, -2)),
                (0, Scalar::from_int(&ring, 5)),
            ],
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn charpoly_matches_trace_oracle() {
        let samples = [
            qm(&[&[2]]),
            qm(&[&[1, 2], &[3, 4]]),
            qm(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]),
            qm(&[&[3, 1, 0, 2], &[0, 3, 1, 1], &[5, 0, 1, 0], &[2, 2, 2, 2]]),
            qm(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
            qm(&[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1]]),
        ];
        for a in &samples {
            let n = a.nrows();
            let p = a.charpoly();
            let oracle = faddeev_leverrier(a);
            for (k, c) in oracle.iter().enumerate() {
                assert_eq!(
                    &p.coeff((n - k) as i64),
                    c,
                    "coefficient of X^{} differs",
                    n - k
                );
            }
        }
    }

    #[test]
    fn charpoly_similarity_invariance() {
        let a = qm(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        // conjugate by an invertible matrix s
        let s = qm(&[&[1, 1, 0], &[0, 1, 0], &[2, 0, 1]]);
        let sinv = qm(&[&[1, -1, 0], &[0, 1, 0], &[-2, 2, 1]]);
        assert_eq!(s.mul(&sinv), Matrix::identity(&Ring::Rat, 3));
        let b = s.mul(&a).mul(&sinv);
        assert_eq!(a.charpoly(), b.charpoly());
    }

    #[test]
    fn charpoly_over_prime_field() {
        let f5 = Ring::Gf { p: 5 };
        let m = Matrix::from_rows(
            &f5,
            vec![
                vec![Scalar::from_int(&f5, 2), Scalar::from_int(&f5, 1)],
                vec![Scalar::from_int(&f5, 0), Scalar::from_int(&f5, 3)],
            ],
        );
        let p = m.charpoly();
        // (X-2)(X-3) = X^2 - 5X + 6 = X^2 + 1 over GF(5)
        assert_eq!(p.coeff(2), Scalar::one(&f5));
        assert_eq!(p.coeff(1), Scalar::zero(&f5));
        assert_eq!(p.coeff(0), Scalar::one(&f5));
    }
}
