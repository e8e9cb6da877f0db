//! Fixed-size complex matrices and the handful of dense kernels the rest of
//! the crate needs: products, Kronecker products, determinants, phase-aware
//! distances and Jacobi eigen-solvers.
//!
//! Two-qubit operators are row-major in the basis `|00>, |01>, |10>, |11>`,
//! with qubit 0 as the left tensor factor.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;
pub type Mat8 = Mat<8>;

impl<const N: usize> Default for Mat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Mat<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Mat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for k in 0..N {
            m.0[k][k] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for r in 0..N {
            for col in 0..N {
                m.0[r][col] = f(r, col);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|r, col| c(rows[r][col], 0.0))
    }

    pub fn diag(d: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for k in 0..N {
            m.0[k][k] = d[k];
        }
        m
    }

    pub fn diagonal(&self) -> [C64; N] {
        std::array::from_fn(|k| self.0[k][k])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, col| self.0[col][r].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, col| self.0[col][r])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|r, col| self.0[r][col].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|k| self.0[k][k]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|r, col| self.0[r][col] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|r, col| self.0[r][col] * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `||M†M - I||_F`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).frobenius_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_finite() && self.unitarity_residual() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).frobenius_norm() <= tol
    }

    /// Frobenius norm of the off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..N {
            for col in 0..N {
                if r != col {
                    s += self.0[r][col].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for k in 0..N {
            let mut piv = k;
            for r in (k + 1)..N {
                if a[r][k].norm() > a[piv][k].norm() {
                    piv = r;
                }
            }
            if a[piv][k] == ZERO {
                return ZERO;
            }
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det *= a[k][k];
            for r in (k + 1)..N {
                let f = a[r][k] / a[k][k];
                for col in k..N {
                    let t = a[k][col];
                    a[r][col] -= f * t;
                }
            }
        }
        det
    }

    pub fn col(&self, k: usize) -> [C64; N] {
        std::array::from_fn(|r| self.0[r][k])
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        std::array::from_fn(|r| (0..N).map(|k| self.0[r][k] * v[k]).sum())
    }
}

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = C64;
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.0[r][col]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.0[r][col]
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..N {
            for k in 0..N {
                let a = self.0[r][k];
                if a == ZERO {
                    continue;
                }
                for col in 0..N {
                    out.0[r][col] += a * rhs.0[k][col];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<C64> for Mat<N> {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

impl<const N: usize> Mul<f64> for Mat<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale_re(s)
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|r, col| self.0[r][col] + rhs.0[r][col])
    }
}

impl<const N: usize> AddAssign for Mat<N> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|r, col| self.0[r][col] - rhs.0[r][col])
    }
}

impl<const N: usize> Neg for Mat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

/// Kronecker product. Only the combinations that stay within 8x8 are
/// implemented, so an oversized product does not compile.
pub trait Kron<Rhs> {
    type Output;
    fn kron(&self, rhs: &Rhs) -> Self::Output;
}

fn kron_into<const A: usize, const B: usize, const AB: usize>(
    a: &Mat<A>,
    b: &Mat<B>,
) -> Mat<AB> {
    debug_assert_eq!(A * B, AB);
    Mat::from_fn(|r, col| a.0[r / B][col / B] * b.0[r % B][col % B])
}

impl Kron<Mat2> for Mat2 {
    type Output = Mat4;
    fn kron(&self, rhs: &Mat2) -> Mat4 {
        kron_into(self, rhs)
    }
}

impl Kron<Mat4> for Mat2 {
    type Output = Mat8;
    fn kron(&self, rhs: &Mat4) -> Mat8 {
        kron_into(self, rhs)
    }
}

impl Kron<Mat2> for Mat4 {
    type Output = Mat8;
    fn kron(&self, rhs: &Mat2) -> Mat8 {
        kron_into(self, rhs)
    }
}

pub fn kron<A: Kron<B>, B>(a: &A, b: &B) -> A::Output {
    a.kron(b)
}

/// Phase `phi` maximising `Re tr(e^{-i phi} B† A)`, i.e. the best global phase
/// with `A ≈ e^{i phi} B`.
pub fn optimal_phase<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> f64 {
    let t = (b.adjoint() * *a).trace();
    if t.norm() == 0.0 {
        0.0
    } else {
        t.arg()
    }
}

/// `min_phi ||A - e^{i phi} B||_F`, evaluated at the optimal phase.
pub fn phase_distance<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> f64 {
    let phi = optimal_phase(a, b);
    (*a - b.scale(cis(phi))).frobenius_norm()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDistance {
    pub distance: f64,
    pub phase: f64,
    /// Both inputs were unitary within the checking tolerance.
    pub unitary_inputs: bool,
}

/// Phase distance that also reports whether the inputs were unitary, so a
/// caller can tell a small distance between non-unitary matrices apart.
pub fn phase_distance_checked<const N: usize>(a: &Mat<N>, b: &Mat<N>, tol: f64) -> PhaseDistance {
    let phase = optimal_phase(a, b);
    PhaseDistance {
        distance: (*a - b.scale(cis(phase))).frobenius_norm(),
        phase,
        unitary_inputs: a.is_unitary(tol) && b.is_unitary(tol),
    }
}

/// Cyclic Jacobi for a Hermitian matrix. Returns real eigenvalues and a
/// unitary `V` with `V† H V` diagonal (columns are eigenvectors).
pub fn hermitian_eig<const N: usize>(h: &Mat<N>) -> ([f64; N], Mat<N>) {
    let mut a = *h;
    let mut v = Mat::<N>::identity();
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        if a.off_diagonal_norm() <= 1e-16 * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                let b = apq.norm();
                if b <= 1e-300 {
                    continue;
                }
                let phase = apq / b;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let pc = phase.conj();
                // Columns p and q of the rotation.
                let mut rot = Mat::<N>::identity();
                rot.0[p][p] = c(cs, 0.0);
                rot.0[p][q] = c(sn, 0.0);
                rot.0[q][p] = pc * (-sn);
                rot.0[q][q] = pc * cs;
                a = rot.adjoint() * a * rot;
                v = v * rot;
            }
        }
    }
    (std::array::from_fn(|k| a.0[k][k].re), v)
}

/// Eigen-decomposition of a normal matrix (unitary in practice). Returns the
/// eigenvalues and a unitary `V` with `V† M V` diagonal.
pub fn normal_eig<const N: usize>(m: &Mat<N>) -> Result<([C64; N], Mat<N>)> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let h1 = (*m + m.adjoint()).scale_re(0.5);
    let h2 = (*m - m.adjoint()).scale(c(0.0, -0.5));
    let scale = m.frobenius_norm().max(1.0);
    let mut best: Option<(f64, [C64; N], Mat<N>)> = None;
    for &t in MIX_WEIGHTS {
        let (_, v) = hermitian_eig(&(h1 + h2.scale_re(t)));
        let d = v.adjoint() * *m * v;
        let off = d.off_diagonal_norm();
        if best.as_ref().is_none_or(|b| off < b.0) {
            best = Some((off, d.diagonal(), v));
        }
        if off <= 1e-12 * scale {
            break;
        }
    }
    let (off, vals, v) = best.expect("at least one mixing weight");
    if off > 1e-8 * scale {
        return Err(Error::NoConvergence { residual: off });
    }
    Ok((vals, v))
}

/// Irrational weights used to mix two commuting Hermitian (or real
/// symmetric) parts into one matrix with a simple spectrum.
const MIX_WEIGHTS: &[f64] = &[
    0.577_215_664_901_532_9,
    std::f64::consts::SQRT_2,
    -0.739_085_133_215_160_6,
    std::f64::consts::E,
    -std::f64::consts::PI,
    std::f64::consts::FRAC_1_PI,
    -1.618_033_988_749_895,
    7.389_056_098_930_65,
];

/// Eigen-decomposition of a complex symmetric unitary `M = O diag(e^{i theta}) O^T`
/// with `O` real orthogonal and `det O = +1`.
#[derive(Clone, Copy, Debug)]
pub struct SymUnitaryEig {
    pub angles: [f64; 4],
    pub basis: [[f64; 4]; 4],
}

impl SymUnitaryEig {
    pub fn basis_mat(&self) -> Mat4 {
        Mat::from_real(self.basis)
    }

    pub fn eigenvalues(&self) -> [C64; 4] {
        self.angles.map(cis)
    }
}

/// Simultaneously diagonalise `Re M` and `Im M` of a symmetric unitary by a
/// real rotation. `tol` bounds both the symmetry and unitarity residual.
pub fn sym_unitary_eig(m: &Mat4, tol: f64) -> Result<SymUnitaryEig> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let sym = (*m - m.transpose()).frobenius_norm();
    if sym > tol {
        return Err(Error::NotSymmetric { residual: sym });
    }
    let uni = m.unitarity_residual();
    if uni > tol {
        return Err(Error::NotUnitary { residual: uni });
    }
    let re = Mat4::from_fn(|r, col| c(0.5 * (m.0[r][col].re + m.0[col][r].re), 0.0));
    let im = Mat4::from_fn(|r, col| c(0.5 * (m.0[r][col].im + m.0[col][r].im), 0.0));

    let mut best: Option<(f64, Mat4)> = None;
    for &t in MIX_WEIGHTS {
        let (_, v) = hermitian_eig(&(re + im.scale_re(t)));
        let o = Mat4::from_fn(|r, col| c(v.0[r][col].re, 0.0));
        let off = (o.transpose() * *m * o).off_diagonal_norm();
        if best.as_ref().is_none_or(|b| off < b.0) {
            best = Some((off, o));
        }
        if off <= 1e-13 {
            break;
        }
    }
    let (off, o) = best.expect("at least one mixing weight");
    if off > 1e-9 {
        return Err(Error::NoConvergence { residual: off });
    }
    let mut basis: [[f64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|col| o.0[r][col].re));
    if Mat4::from_real(basis).det().re < 0.0 {
        for row in basis.iter_mut() {
            row[0] = -row[0];
        }
    }
    let o = Mat4::from_real(basis);
    let d = o.transpose() * *m * o;
    Ok(SymUnitaryEig {
        angles: std::array::from_fn(|k| d.0[k][k].arg()),
        basis,
    })
}
