//! Dense complex matrices and the small eigen/SVD kernels used by the block model.
//!
//! The kernels are classical Jacobi iterations: two-sided rotations for
//! Hermitian eigenproblems, one-sided column rotations for the SVD. Block
//! sizes in this crate never exceed a few dozen rows, so a quadratically
//! convergent O(n^3)-per-sweep method is both simple and accurate.

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Convergence threshold for Jacobi sweeps, relative to the matrix scale.
pub const JACOBI_TOL: f64 = 1e-12;
/// Sweep budget; Jacobi converges quadratically, so hitting this means the
/// input was pathological (NaN/Inf) rather than merely ill-conditioned.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative cutoff below which an eigenvalue or singular value counts as zero
/// when building range projections and partial isometries.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian: max |A - A*| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-norm {off:.3e})")]
    NoConvergence { off: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.at(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn scalar(n: usize, z: C64) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, z);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged row lengths".into()));
        }
        let mut m = CMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                m.set(i, j, z);
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

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn check_finite(&self) -> Result<(), LinalgError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self.at(i, j);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, z: C64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= z;
        }
        out
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A - A*| over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        dev
    }

    /// (A + A*) / 2.
    pub fn hermitian_part(&self) -> CMat {
        CMat::from_fn(self.rows, self.rows, |i, j| {
            (self.at(i, j) + self.at(j, i).conj()) * 0.5
        })
    }

    /// Kronecker product; row-major index (i1*r2+i2, j1*c2+j2).
    pub fn kron(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.at(i1, j1);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, a * other.at(i2, j2));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.rows);
        for (i, &z) in v.iter().enumerate() {
            self.set(i, j, z);
        }
    }

    /// Outer product v w*: (i, j) -> v[i] * conj(w[j]).
    pub fn outer(v: &[C64], w: &[C64]) -> CMat {
        CMat::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }
}

/// <v, w> = sum conj(v_i) w_i; conjugate-linear in the first slot.
pub fn inner(v: &[C64], w: &[C64]) -> C64 {
    assert_eq!(v.len(), w.len());
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Columns of `vectors` are the corresponding orthonormal eigenvectors.
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

/// Rotation parameters annihilating the (p,q) entry of the Hermitian 2x2
/// [[a_pp, b e^{i phi}], [b e^{-i phi}, a_qq]] with b > 0.
fn jacobi_rotation(app: f64, aqq: f64, b: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// Two-sided complex Jacobi for Hermitian matrices.
///
/// Rejects inputs whose Hermitian deviation exceeds 1e-9 times the scale;
/// callers that want symmetrization do it explicitly via `hermitian_part`.
pub fn eigh(a: &CMat) -> Result<HermitianEig, LinalgError> {
    assert_eq!(a.rows, a.cols, "eigh requires a square matrix");
    a.check_finite()?;
    let n = a.rows;
    let scale = a.max_abs().max(1.0);
    let dev = a.hermitian_deviation();
    if dev > 1e-9 * scale {
        return Err(LinalgError::NotHermitian { deviation: dev });
    }

    let mut w = a.hermitian_part();
    let mut v = CMat::identity(n);
    if n <= 1 {
        return Ok(HermitianEig {
            values: (0..n).map(|i| w.at(i, i).re).collect(),
            vectors: v,
        });
    }

    let off = |m: &CMat| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += m.at(p, q).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let fro = w.frobenius_norm().max(1.0);
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&w) <= JACOBI_TOL * fro {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = w.at(p, q);
                let b = apq.norm();
                if b <= 1e-300 {
                    continue;
                }
                let phase = apq / b;
                let (c, s) = jacobi_rotation(w.at(p, p).re, w.at(q, q).re, b);
                // U columns: (c*phase, -s) and (s*phase, c); apply W <- U* W U, V <- V U.
                let (cp, sp) = (phase * c, phase * s);
                for j in 0..n {
                    let x = w.at(p, j);
                    let y = w.at(q, j);
                    w.set(p, j, cp.conj() * x - s * y);
                    w.set(q, j, sp.conj() * x + c * y);
                }
                for i in 0..n {
                    let x = w.at(i, p);
                    let y = w.at(i, q);
                    w.set(i, p, x * cp - y * s);
                    w.set(i, q, x * sp + y * c);
                    let vx = v.at(i, p);
                    let vy = v.at(i, q);
                    v.set(i, p, vx * cp - vy * s);
                    v.set(i, q, vx * sp + vy * c);
                }
            }
        }
    }
    if !converged && off(&w) > JACOBI_TOL * fro {
        return Err(LinalgError::NoConvergence { off: off(&w) });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w.at(i, i).re.partial_cmp(&w.at(j, j).re).unwrap());
    let values = order.iter().map(|&i| w.at(i, i).re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (newj, &oldj) in order.iter().enumerate() {
        vectors.set_column(newj, &v.column(oldj));
    }
    Ok(HermitianEig { values, vectors })
}

/// Singular value decomposition A = U diag(s) V*, singular values descending.
///
/// Columns of U corresponding to zero singular values are zero vectors (the
/// decomposition is "thin" on the rank); V is unitary.
pub struct Svd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

/// One-sided Jacobi SVD: rotate column pairs until mutually orthogonal.
pub fn svd(a: &CMat) -> Result<Svd, LinalgError> {
    a.check_finite()?;
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut v = CMat::identity(n);
    let scale = a.max_abs().max(1.0);
    let tol = JACOBI_TOL * scale * scale;

    if n > 1 {
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    // Gram data of the column pair.
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = C64::new(0.0, 0.0);
                    for i in 0..m {
                        let x = w.at(i, p);
                        let y = w.at(i, q);
                        app += x.norm_sqr();
                        aqq += y.norm_sqr();
                        apq += x.conj() * y;
                    }
                    let b = apq.norm();
                    if b <= tol || b * b <= (JACOBI_TOL * JACOBI_TOL) * app * aqq {
                        continue;
                    }
                    rotated = true;
                    let phase = apq / b;
                    let (c, s) = jacobi_rotation(app, aqq, b);
                    let (cp, sp) = (phase * c, phase * s);
                    for i in 0..m {
                        let x = w.at(i, p);
                        let y = w.at(i, q);
                        w.set(i, p, x * cp - y * s);
                        w.set(i, q, x * sp + y * c);
                    }
                    for i in 0..n {
                        let x = v.at(i, p);
                        let y = v.at(i, q);
                        v.set(i, p, x * cp - y * s);
                        v.set(i, q, x * sp + y * c);
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            // One extra orthogonality audit: accept if all pairs are clean.
            let mut worst: f64 = 0.0;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let mut apq = C64::new(0.0, 0.0);
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    for i in 0..m {
                        apq += w.at(i, p).conj() * w.at(i, q);
                        app += w.at(i, p).norm_sqr();
                        aqq += w.at(i, q).norm_sqr();
                    }
                    let denom = (app * aqq).sqrt().max(1e-300);
                    worst = worst.max(apq.norm() / denom);
                }
            }
            if worst > 1e-10 {
                return Err(LinalgError::NoConvergence { off: worst });
            }
        }
    }

    let mut sigma: Vec<f64> = (0..n).map(|j| vec_norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let zero_cut = JACOBI_TOL * smax.max(1.0);

    let mut u = CMat::zeros(m, n);
    let mut vs = CMat::zeros(n, n);
    let mut svals = Vec::with_capacity(n);
    for (newj, &oldj) in order.iter().enumerate() {
        let s = sigma[oldj];
        if s > zero_cut {
            let col: Vec<C64> = w.column(oldj).iter().map(|z| z / s).collect();
            u.set_column(newj, &col);
            svals.push(s);
        } else {
            sigma[oldj] = 0.0;
            svals.push(0.0);
        }
        vs.set_column(newj, &v.column(oldj));
    }
    Ok(Svd { u, singular_values: svals, v: vs })
}

/// Sum of singular values.
pub fn trace_norm(a: &CMat) -> Result<f64, LinalgError> {
    Ok(svd(a)?.singular_values.iter().sum())
}

/// Largest singular value.
pub fn operator_norm(a: &CMat) -> Result<f64, LinalgError> {
    Ok(svd(a)?.singular_values.first().copied().unwrap_or(0.0))
}

/// Polar decomposition A = V P with P = |A| PSD and V a partial isometry
/// whose initial space is the range of P (so V* V = range projection of P).
pub struct Polar {
    pub isometry: CMat,
    pub positive: CMat,
    pub rank: usize,
}

pub fn polar(a: &CMat) -> Result<Polar, LinalgError> {
    assert_eq!(a.rows, a.cols, "polar is used on square blocks");
    let n = a.rows;
    let dec = svd(a)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let cut = RANK_TOL * smax.max(1.0);
    let mut positive = CMat::zeros(n, n);
    let mut isometry = CMat::zeros(n, n);
    let mut rank = 0;
    for (k, &s) in dec.singular_values.iter().enumerate() {
        if s <= cut {
            continue;
        }
        rank += 1;
        let uk = dec.u.column(k);
        let vk = dec.v.column(k);
        // P += s * v v*;  V += u v*.
        for i in 0..n {
            for j in 0..n {
                let pij = positive.at(i, j) + vk[i] * vk[j].conj() * s;
                positive.set(i, j, pij);
                let wij = isometry.at(i, j) + uk[i] * vk[j].conj();
                isometry.set(i, j, wij);
            }
        }
    }
    Ok(Polar { isometry, positive, rank })
}

/// Orthogonal projection onto the range of a Hermitian PSD matrix.
/// Eigenvalues below RANK_TOL * max(lambda_max, 1) count as zero.
pub fn range_projection(a: &CMat) -> Result<CMat, LinalgError> {
    let n = a.rows;
    let eig = eigh(a)?;
    let lmax = eig.values.iter().cloned().fold(0.0, f64::max);
    let cut = RANK_TOL * lmax.max(1.0);
    let mut p = CMat::zeros(n, n);
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam < cut {
            continue;
        }
        let x = eig.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                let v = p.at(i, j) + x[i] * x[j].conj();
                p.set(i, j, v);
            }
        }
    }
    Ok(p)
}

/// Rank of an arbitrary matrix from its singular values; going through the
/// Gram matrix instead would square the noise floor past the cut.
/// Singular values below RANK_TOL * max(sigma_max, 1) count as zero.
pub fn rank(a: &CMat) -> Result<usize, LinalgError> {
    let sv = svd(a)?.singular_values;
    let smax = sv.first().copied().unwrap_or(0.0);
    let cut = RANK_TOL * smax.max(1.0);
    Ok(sv.iter().filter(|&&s| s > cut).count())
}

/// Gram-Schmidt span basis of a list of vectors, dropping near-dependent ones.
pub fn orthonormal_span(vectors: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        assert_eq!(v.len(), dim);
        let mut r = v.clone();
        for _ in 0..2 {
            // twice for numerical orthogonality
            for b in &basis {
                let c = inner(b, &r);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
        }
        let n = vec_norm(&r);
        let orig = vec_norm(v).max(1.0);
        if n > RANK_TOL * orig {
            for ri in r.iter_mut() {
                *ri /= n;
            }
            basis.push(r);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_cmat(n: usize, seed: u64) -> CMat {
        // tiny deterministic LCG; test-local, not a quality RNG
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMat::from_fn(n, n, |_, _| c(next(), next()))
    }

    #[test]
    fn matmul_identity() {
        let a = random_cmat(5, 7);
        let i = CMat::identity(5);
        assert!(a.mul(&i).sub(&a).max_abs() < 1e-15);
        assert!(i.mul(&a).sub(&a).max_abs() < 1e-15);
    }

    #[test]
    fn kron_shape_and_values() {
        let a = CMat::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)]]).unwrap();
        let b = CMat::from_rows(&[vec![c(0.0, 1.0)], vec![c(3.0, 0.0)]]).unwrap();
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.at(0, 0), c(0.0, 1.0));
        assert_eq!(k.at(1, 1), c(6.0, 0.0));
    }

    #[test]
    fn eigh_diagonalizes_random_hermitian() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 8);
            let x = random_cmat(n, 1000 + seed);
            let a = x.add(&x.adjoint()).scale(c(0.5, 0.0));
            let eig = eigh(&a).unwrap();
            // A V = V diag(lambda)
            let av = a.mul(&eig.vectors);
            let mut vl = eig.vectors.clone();
            for j in 0..n {
                for i in 0..n {
                    let v = vl.at(i, j) * eig.values[j];
                    vl.set(i, j, v);
                }
            }
            assert!(av.sub(&vl).max_abs() < 1e-10, "seed {seed}");
            // V unitary
            let vtv = eig.vectors.adjoint().mul(&eig.vectors);
            assert!(vtv.sub(&CMat::identity(n)).max_abs() < 1e-10);
            // ascending
            for k in 1..n {
                assert!(eig.values[k] >= eig.values[k - 1]);
            }
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let a = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(eigh(&a), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn svd_reconstructs() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 8);
            let a = random_cmat(n, 2000 + seed);
            let dec = svd(&a).unwrap();
            let mut us = dec.u.clone();
            for j in 0..n {
                for i in 0..n {
                    let v = us.at(i, j) * dec.singular_values[j];
                    us.set(i, j, v);
                }
            }
            let rec = us.mul(&dec.v.adjoint());
            assert!(rec.sub(&a).max_abs() < 1e-10, "seed {seed}");
            let vtv = dec.v.adjoint().mul(&dec.v);
            assert!(vtv.sub(&CMat::identity(n)).max_abs() < 1e-10);
        }
    }

    #[test]
    fn svd_handles_rank_deficiency() {
        // rank-1 outer product
        let v = vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5)];
        let a = CMat::outer(&v, &v);
        let dec = svd(&a).unwrap();
        assert!(dec.singular_values[1].abs() < 1e-10);
        assert!(dec.singular_values[2].abs() < 1e-10);
        let p = polar(&a).unwrap();
        assert_eq!(p.rank, 1);
        let rec = p.isometry.mul(&p.positive);
        assert!(rec.sub(&a).max_abs() < 1e-9);
    }

    #[test]
    fn polar_of_phase_multiple_of_identity() {
        let a = CMat::scalar(3, c(0.0, 0.5));
        let p = polar(&a).unwrap();
        assert!(p.positive.sub(&CMat::scalar(3, c(0.5, 0.0))).max_abs() < 1e-12);
        assert!(p.isometry.sub(&CMat::scalar(3, c(0.0, 1.0))).max_abs() < 1e-12);
        // partial isometry law V V* V = V
        let vvv = p.isometry.mul(&p.isometry.adjoint()).mul(&p.isometry);
        assert!(vvv.sub(&p.isometry).max_abs() < 1e-12);
    }

    #[test]
    fn trace_norm_of_projection_counts_rank() {
        let mut a = CMat::zeros(4, 4);
        a.set(0, 0, c(1.0, 0.0));
        a.set(2, 2, c(1.0, 0.0));
        assert!((trace_norm(&a).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn range_projection_idempotent() {
        for seed in 0..10 {
            let x = random_cmat(5, 3000 + seed);
            let a = x.mul(&x.adjoint()); // PSD
            let p = range_projection(&a).unwrap();
            assert!(p.mul(&p).sub(&p).max_abs() < 1e-9);
            assert!(p.hermitian_deviation() < 1e-10);
            // P A = A
            assert!(p.mul(&a).sub(&a).max_abs() < 1e-8 * a.max_abs().max(1.0));
        }
    }

    #[test]
    fn rank_of_outer_products() {
        let v1 = vec![c(1.0, 0.0), c(2.0, -1.0), c(0.0, 0.0)];
        let v2 = vec![c(0.0, 1.0), c(1.0, 0.0), c(1.0, 1.0)];
        let a = CMat::outer(&v1, &v1).add(&CMat::outer(&v2, &v2));
        assert_eq!(rank(&a).unwrap(), 2);
        assert_eq!(rank(&CMat::zeros(3, 3)).unwrap(), 0);
        assert_eq!(rank(&CMat::identity(3)).unwrap(), 3);
    }

    #[test]
    fn orthonormal_span_drops_dependent_vectors() {
        let v1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let v2 = vec![c(2.0, 0.0), c(0.0, 0.0)];
        let v3 = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let basis = orthonormal_span(&[v1, v2, v3], 2);
        assert_eq!(basis.len(), 2);
        assert!((inner(&basis[0], &basis[1]).norm()) < 1e-12);
    }
}
