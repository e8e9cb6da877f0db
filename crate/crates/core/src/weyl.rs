//! Two-qubit geometry: magic basis, local invariants, KAK decomposition and
//! the Weyl chamber `π − a2 ≥ a1 ≥ a2 ≥ a3 ≥ 0`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c, cis, optimal_phase, phase_distance, sym_unitary_eig, Kron, Mat, Mat2, Mat4, C64, ONE, ZERO};

/// Tolerance for chamber-face and `a3 = 0` tests.
pub const CHAMBER_TOL: f64 = 1e-7;

/// Inputs whose unitarity residual exceeds this are rejected.
pub const UNITARY_TOL: f64 = 1e-6;

/// Reconstruction tolerance for [`kak_decompose`].
pub const KAK_TOL: f64 = 1e-8;

// Diagonal of XX, YY and ZZ in the magic basis.
const SX: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
const SY: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];
const SZ: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct NonlocalPoint {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl NonlocalPoint {
    pub const O: Self = Self::new(0.0, 0.0, 0.0);
    pub const A1: Self = Self::new(PI, 0.0, 0.0);
    pub const A2: Self = Self::new(FRAC_PI_2, FRAC_PI_2, 0.0);
    pub const A3: Self = Self::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2);
    pub const CNOT: Self = Self::new(FRAC_PI_2, 0.0, 0.0);

    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn dist(&self, other: &Self) -> f64 {
        ((self.a1 - other.a1).powi(2) + (self.a2 - other.a2).powi(2) + (self.a3 - other.a3).powi(2)).sqrt()
    }

    /// Distance between the local-equivalence classes of two canonical points.
    /// Accounts for the base identification `[a1,a2,0] ≡ [π−a1,a2,0]`, which
    /// makes the canonical map jump across `a3 = 0`.
    pub fn chamber_dist(&self, other: &Self) -> f64 {
        let mirrored = Self::new(PI - self.a1, self.a2, -self.a3);
        self.dist(other).min(mirrored.dist(other))
    }

    pub fn in_chamber(&self, tol: f64) -> bool {
        PI - self.a2 >= self.a1 - tol && self.a1 >= self.a2 - tol && self.a2 >= self.a3 - tol && self.a3 >= -tol
    }

    /// Half-angles `h_k` with `Q† core_gate(a) Q = diag(e^{i h_k})`.
    fn magic_half_angles(&self) -> [f64; 4] {
        std::array::from_fn(|k| 0.5 * (self.a1 * SX[k] + self.a2 * SY[k] + self.a3 * SZ[k]))
    }
}

impl fmt::Display for NonlocalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}, {:.12}]", self.a1, self.a2, self.a3)
    }
}

/// Where a canonical point sits in the chamber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChamberLocation {
    O,
    A1,
    A2,
    A3,
    /// Midpoint of `OA1`, the CNOT class.
    CnotPoint,
    EdgeOA1,
    EdgeOA2,
    EdgeOA3,
    EdgeA1A2,
    EdgeA1A3,
    EdgeA2A3,
    /// Base `a3 = 0`.
    FaceOA1A2,
    /// `a1 = a2`.
    FaceOA2A3,
    /// `a1 + a2 = π`.
    FaceA1A2A3,
    /// `a2 = a3`.
    FaceOA1A3,
    Interior,
}

impl ChamberLocation {
    pub fn name(self) -> &'static str {
        match self {
            Self::O => "O",
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::A3 => "A3",
            Self::CnotPoint => "mid OA1",
            Self::EdgeOA1 => "edge OA1",
            Self::EdgeOA2 => "edge OA2",
            Self::EdgeOA3 => "edge OA3",
            Self::EdgeA1A2 => "edge A1A2",
            Self::EdgeA1A3 => "edge A1A3",
            Self::EdgeA2A3 => "edge A2A3",
            Self::FaceOA1A2 => "face OA1A2",
            Self::FaceOA2A3 => "face OA2A3",
            Self::FaceA1A2A3 => "face A1A2A3",
            Self::FaceOA1A3 => "face OA1A3",
            Self::Interior => "interior",
        }
    }
}

impl fmt::Display for ChamberLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn chamber_location(a: &NonlocalPoint, tol: f64) -> ChamberLocation {
    use ChamberLocation::*;
    let near = |p: NonlocalPoint| a.dist(&p) <= tol;
    if near(NonlocalPoint::O) {
        return O;
    }
    if near(NonlocalPoint::A1) {
        return A1;
    }
    if near(NonlocalPoint::A2) {
        return A2;
    }
    if near(NonlocalPoint::A3) {
        return A3;
    }
    if near(NonlocalPoint::CNOT) {
        return CnotPoint;
    }
    let base = a.a3.abs() <= tol;
    let oa2a3 = (a.a1 - a.a2).abs() <= tol;
    let a1a2a3 = (a.a1 + a.a2 - PI).abs() <= tol;
    let oa1a3 = (a.a2 - a.a3).abs() <= tol;
    match (base, oa2a3, a1a2a3, oa1a3) {
        (true, _, _, true) => EdgeOA1,
        (true, true, _, _) => EdgeOA2,
        (true, _, true, _) => EdgeA1A2,
        (_, true, true, _) => EdgeA2A3,
        (_, true, _, true) => EdgeOA3,
        (_, _, true, true) => EdgeA1A3,
        (true, _, _, _) => FaceOA1A2,
        (_, true, _, _) => FaceOA2A3,
        (_, _, true, _) => FaceA1A2A3,
        (_, _, _, true) => FaceOA1A3,
        _ => Interior,
    }
}

/// Magic (Bell) basis; columns `(|00>+|11>)/√2`, `i(|01>+|10>)/√2`,
/// `(|01>−|10>)/√2`, `i(|00>−|11>)/√2`.
pub fn magic_basis() -> Mat4 {
    let s = FRAC_1_SQRT_2;
    let r = c(s, 0.0);
    let i = c(0.0, s);
    Mat([
        [r, ZERO, ZERO, i],
        [ZERO, i, r, ZERO],
        [ZERO, i, -r, ZERO],
        [r, ZERO, ZERO, -i],
    ])
}

/// `exp(i/2 (a1 XX + a2 YY + a3 ZZ))` in closed form.
pub fn core_gate(a: NonlocalPoint) -> Mat4 {
    let e3 = cis(a.a3 / 2.0);
    let e3c = e3.conj();
    let (sm, cm) = ((a.a1 - a.a2) / 2.0).sin_cos();
    let (sp, cp) = ((a.a1 + a.a2) / 2.0).sin_cos();
    let i = c(0.0, 1.0);
    Mat([
        [e3 * cm, ZERO, ZERO, i * e3 * sm],
        [ZERO, e3c * cp, i * e3c * sp, ZERO],
        [ZERO, i * e3c * sp, e3c * cp, ZERO],
        [i * e3 * sm, ZERO, ZERO, e3 * cm],
    ])
}

/// Eigenvalues of `m = U_Bᵀ U_B` for the det-1 normalised gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaSpectrum {
    pub values: [C64; 4],
}

impl LambdaSpectrum {
    /// The spectrum `e^{i(a·x_k)}` of a core gate.
    pub fn of_point(a: &NonlocalPoint) -> Self {
        let h = a.magic_half_angles();
        Self { values: h.map(|t| cis(2.0 * t)) }
    }

    pub fn trace(&self) -> C64 {
        self.values.iter().sum()
    }

    pub fn product(&self) -> C64 {
        self.values.iter().product()
    }

    /// Multiset distance, minimised over the overall sign left open by the
    /// choice of fourth root of `det U`.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut best = f64::INFINITY;
        for sign in [1.0, -1.0] {
            for p in PERMS_4 {
                let d = (0..4)
                    .map(|k| (self.values[k] - other.values[p[k]] * sign).norm())
                    .fold(0.0, f64::max);
                best = best.min(d);
            }
        }
        best
    }
}

const PERMS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

fn check_unitary(u: &Mat4) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::NonFinite);
    }
    let r = u.unitarity_residual();
    if r > UNITARY_TOL {
        return Err(Error::NotUnitary { residual: r });
    }
    Ok(())
}

/// Determinant-one representative `U det(U)^{-1/4}` (principal root) and the
/// removed phase.
fn su4_normalise(u: &Mat4) -> (Mat4, f64) {
    let phase = u.det().arg() / 4.0;
    (u.scale(cis(-phase)), phase)
}

/// `m = U_Bᵀ U_B` with `U_B = Q† U Q`.
fn gamma_matrix(u_su4: &Mat4) -> (Mat4, Mat4) {
    let q = magic_basis();
    let ub = q.adjoint() * *u_su4 * q;
    (ub, ub.transpose() * ub)
}

pub fn lambda_spectrum(u: &Mat4) -> Result<LambdaSpectrum> {
    check_unitary(u)?;
    let (su, _) = su4_normalise(u);
    let (_, m) = gamma_matrix(&su);
    let eig = sym_unitary_eig(&m, 1e-5)?;
    Ok(LambdaSpectrum { values: eig.eigenvalues() })
}

/// Raw KAK data before matching against a target point.
struct RawKak {
    /// Real orthogonal factors with `U_B = k1 diag(e^{i h}) k2`.
    k1: Mat4,
    k2: Mat4,
    half: [f64; 4],
}

fn raw_kak(u: &Mat4) -> Result<RawKak> {
    check_unitary(u)?;
    let (su, _) = su4_normalise(u);
    let (ub, m) = gamma_matrix(&su);
    let eig = sym_unitary_eig(&m, 1e-5)?;
    let mut half = eig.angles.map(|t| t / 2.0);
    // det D must be 1: the half-angle sum has to be a multiple of 2π.
    let turns = (half.iter().sum::<f64>() / PI).round() as i64;
    if turns.rem_euclid(2) == 1 {
        half[0] -= PI;
    }
    let o = eig.basis_mat();
    let dinv = Mat4::diag(&half.map(|h| cis(-h)));
    Ok(RawKak {
        k1: ub * o * dinv,
        k2: o.transpose(),
        half,
    })
}

fn raw_point(half: &[f64; 4]) -> [f64; 3] {
    let dot = |s: &[f64; 4]| (0..4).map(|k| s[k] * half[k]).sum::<f64>() / 2.0;
    [dot(&SX), dot(&SY), dot(&SZ)]
}

/// Canonical chamber point of `U`.
pub fn extract_nonlocal(u: &Mat4) -> Result<NonlocalPoint> {
    let raw = raw_kak(u)?;
    let a = canonicalize(raw_point(&raw.half));
    let got = LambdaSpectrum::of_point(&a);
    let want = lambda_spectrum(u)?;
    let residual = got.distance(&want);
    if residual > 1e-6 {
        return Err(Error::KakFailed { residual });
    }
    Ok(a)
}

/// `U = e^{i phase} (v1⊗v2) core_gate(a) (v3⊗v4)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KakDecomposition {
    pub v1: Mat2,
    pub v2: Mat2,
    pub v3: Mat2,
    pub v4: Mat2,
    pub a: NonlocalPoint,
    pub phase: f64,
    /// `phase_distance` between the input and the reconstruction.
    pub residual: f64,
}

impl KakDecomposition {
    pub fn reconstruct(&self) -> Mat4 {
        (self.v1.kron(&self.v2) * core_gate(self.a) * self.v3.kron(&self.v4)).scale(cis(self.phase))
    }
}

pub fn kak_decompose(u: &Mat4) -> Result<KakDecomposition> {
    let raw = raw_kak(u)?;
    let point = raw_point(&raw.half);
    // Prefer the snapped representative; near the base it can cost up to
    // `2 a3` in accuracy, in which case the exact one is used.
    let mut kak = match_core(u, &raw, canonicalize(point), 1e-6)?;
    if kak.residual > KAK_TOL {
        kak = match_core(u, &raw, canonicalize_with_base_tol(point, 0.0), 1e-6)?;
    }
    if kak.residual > KAK_TOL {
        return Err(Error::KakFailed { residual: kak.residual });
    }
    Ok(kak)
}

/// Decompose `U` around a prescribed core point `a`, which must be in the
/// Weyl orbit of `U`'s own point up to `match_tol`. The residual reflects
/// how far `a` is from the exact class.
pub fn kak_with_target(u: &Mat4, a: NonlocalPoint, match_tol: f64) -> Result<KakDecomposition> {
    let raw = raw_kak(u)?;
    match_core(u, &raw, a, match_tol)
}

fn match_core(u: &Mat4, raw: &RawKak, a: NonlocalPoint, match_tol: f64) -> Result<KakDecomposition> {
    let d_raw = raw.half.map(cis);
    let d_t = a.magic_half_angles().map(cis);
    let units = [ONE, c(0.0, 1.0), -ONE, c(0.0, -1.0)];

    let mut best: Option<(f64, [usize; 4], C64, [f64; 4])> = None;
    for p in PERMS_4 {
        for g in units {
            let mut signs = [1.0; 4];
            let mut err: f64 = 0.0;
            for k in 0..4 {
                let r = d_raw[k] / (g * d_t[p[k]]);
                signs[k] = if r.re >= 0.0 { 1.0 } else { -1.0 };
                err = err.max((r - signs[k]).norm());
            }
            if best.as_ref().is_none_or(|b| err < b.0) {
                best = Some((err, p, g, signs));
            }
        }
    }
    let (err, p, _, signs) = best.expect("non-empty search");
    if err > match_tol {
        return Err(Error::KakFailed { residual: err });
    }

    let mut perm = Mat4::zeros();
    for k in 0..4 {
        perm.0[k][p[k]] = ONE;
    }
    if perm.det().re < 0.0 {
        for row in perm.0.iter_mut() {
            row[0] = -row[0];
        }
    }
    let s = Mat4::diag(&signs.map(|x| c(x, 0.0)));
    let k1 = raw.k1 * s * perm;
    let k2 = perm.transpose() * raw.k2;

    let q = magic_basis();
    let (v1, v2) = factor_local(&(q * k1 * q.adjoint()));
    let (v3, v4) = factor_local(&(q * k2 * q.adjoint()));
    let mut kak = KakDecomposition { v1, v2, v3, v4, a, phase: 0.0, residual: 0.0 };
    let rebuilt = kak.reconstruct();
    kak.phase = optimal_phase(u, &rebuilt);
    kak.residual = phase_distance(u, &rebuilt);
    Ok(kak)
}

/// Split a product operator `L ≈ A⊗B` into det-1 factors.
pub fn factor_local(l: &Mat4) -> (Mat2, Mat2) {
    let block = |i: usize, j: usize| Mat2::from_fn(|r, col| l.0[2 * i + r][2 * j + col]);
    let mut best = (0, 0);
    let mut best_norm = -1.0;
    for i in 0..2 {
        for j in 0..2 {
            let n = block(i, j).frobenius_norm();
            if n > best_norm {
                best_norm = n;
                best = (i, j);
            }
        }
    }
    let b0 = block(best.0, best.1);
    let b = b0.scale(b0.det().sqrt().inv());
    let a = Mat2::from_fn(|i, j| (b.adjoint() * block(i, j)).trace() / 2.0);
    let da = a.det();
    let a = if da.norm() > 0.0 { a.scale(da.sqrt().inv()) } else { a };
    (a, b)
}

/// Representative of the Weyl orbit of `raw` in the chamber.
pub fn canonicalize(raw: [f64; 3]) -> NonlocalPoint {
    canonicalize_with_base_tol(raw, CHAMBER_TOL)
}

/// Like [`canonicalize`], but only points with `a3 <= base_tol` are treated as
/// lying on the base when choosing between `a1` and `π − a1`.
pub fn canonicalize_with_base_tol(raw: [f64; 3], base_tol: f64) -> NonlocalPoint {
    let mut b = raw.map(|r| {
        let x = r - PI * (r / PI).round();
        if x <= -FRAC_PI_2 { x + PI } else { x }
    });
    b.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    let negatives = b.iter().filter(|x| **x < 0.0).count();
    let [c1, c2, c3] = b.map(f64::abs);
    if negatives % 2 == 0 || c3 <= base_tol {
        NonlocalPoint::new(c1, c2, c3)
    } else {
        NonlocalPoint::new(PI - c1, c2, c3)
    }
}

pub fn locally_equivalent(u: &Mat4, v: &Mat4, tol: f64) -> bool {
    match (extract_nonlocal(u), extract_nonlocal(v)) {
        (Ok(a), Ok(b)) => a.chamber_dist(&b) <= tol,
        _ => false,
    }
}

/// `(2/9)(1 − |tr Λ|²/16)` from the matrix invariants.
pub fn entangling_power(u: &Mat4) -> Result<f64> {
    check_unitary(u)?;
    let (su, _) = su4_normalise(u);
    let (_, m) = gamma_matrix(&su);
    let t = m.trace().norm_sqr();
    Ok((2.0 / 9.0 * (1.0 - t / 16.0)).clamp(0.0, 2.0 / 9.0))
}

/// Entangling power of a chamber point.
pub fn entangling_power_at(a: &NonlocalPoint) -> f64 {
    let (s1, c1) = a.a1.sin_cos();
    let (s2, c2) = a.a2.sin_cos();
    let (s3, c3) = a.a3.sin_cos();
    let tr2 = 16.0 * ((c1 * c2 * c3).powi(2) + (s1 * s2 * s3).powi(2));
    2.0 / 9.0 * (1.0 - tr2 / 16.0)
}

fn random_qubit(rng: &mut ChaCha8Rng) -> [C64; 2] {
    let mut v: [C64; 2] = std::array::from_fn(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    for z in v.iter_mut() {
        *z /= n;
    }
    v
}

/// Linear entropy `1 − tr ρ_A²` of a two-qubit pure state.
pub fn linear_entropy(psi: &[C64; 4]) -> f64 {
    let rho = [
        [psi[0] * psi[0].conj() + psi[1] * psi[1].conj(), psi[0] * psi[2].conj() + psi[1] * psi[3].conj()],
        [psi[2] * psi[0].conj() + psi[3] * psi[1].conj(), psi[2] * psi[2].conj() + psi[3] * psi[3].conj()],
    ];
    let purity: f64 = rho.iter().flatten().map(|z| z.norm_sqr()).sum();
    1.0 - purity
}

/// Monte-Carlo average of the linear entropy produced from Haar-random
/// product states. Deterministic for a given seed.
pub fn entangling_power_mc(u: &Mat4, n: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..n {
        let p = random_qubit(&mut rng);
        let q = random_qubit(&mut rng);
        let prod = [p[0] * q[0], p[0] * q[1], p[1] * q[0], p[1] * q[1]];
        acc += linear_entropy(&u.mul_vec(&prod)).max(0.0);
    }
    Ok(acc / n as f64)
}

/// Fewest CNOTs needed for a gate with canonical point `a`.
pub fn min_cnot_count(a: &NonlocalPoint) -> u8 {
    min_cnot_count_tol(a, CHAMBER_TOL)
}

pub fn min_cnot_count_tol(a: &NonlocalPoint, tol: f64) -> u8 {
    if a.chamber_dist(&NonlocalPoint::O) <= tol {
        0
    } else if a.chamber_dist(&NonlocalPoint::CNOT) <= tol {
        1
    } else if a.a3.abs() <= tol {
        2
    } else {
        3
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    pub fn pauli(k: usize) -> Mat2 {
        match k {
            0 => Mat2::identity(),
            1 => Mat::from_real([[0.0, 1.0], [1.0, 0.0]]),
            2 => Mat([[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]),
            _ => Mat::from_real([[1.0, 0.0], [0.0, -1.0]]),
        }
    }

    pub fn cnot() -> Mat4 {
        let p0 = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]);
        let p1 = Mat2::from_real([[0.0, 0.0], [0.0, 1.0]]);
        p0.kron(&Mat2::identity()) + p1.kron(&pauli(1))
    }

    pub fn swap() -> Mat4 {
        let mut m = Mat4::zeros();
        for k in 1..4 {
            m += pauli(k).kron(&pauli(k));
        }
        (m + Mat4::identity()).scale_re(0.5)
    }

    pub fn iswap() -> Mat4 {
        let i = c(0.0, 1.0);
        (Mat4::identity() + pauli(1).kron(&pauli(1)).scale(i) + pauli(2).kron(&pauli(2)).scale(i) + pauli(3).kron(&pauli(3)))
            .scale_re(0.5)
    }

    /// Power-series matrix exponential, an independent route to core gates.
    pub fn expm4(a: &Mat4) -> Mat4 {
        let mut term = Mat4::identity();
        let mut sum = Mat4::identity();
        for k in 1..60 {
            term = (term * *a).scale_re(1.0 / k as f64);
            sum += term;
        }
        sum
    }

    pub fn su2(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
        let rz = |t: f64| Mat2::diag(&[cis(-t / 2.0), cis(t / 2.0)]);
        let (s, cs) = (beta / 2.0).sin_cos();
        let ry = Mat2::from_real([[cs, -s], [s, cs]]);
        rz(alpha) * ry * rz(gamma)
    }

    /// Haar-distributed 4x4 unitary via QR of a complex Gaussian matrix.
    pub fn haar4(rng: &mut ChaCha8Rng) -> Mat4 {
        let g = Mat4::from_fn(|_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let mut cols: Vec<[C64; 4]> = Vec::new();
        for k in 0..4 {
            let mut v = g.col(k);
            for u in &cols {
                let ip: C64 = (0..4).map(|i| u[i].conj() * v[i]).sum();
                for i in 0..4 {
                    v[i] -= ip * u[i];
                }
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols.push(v.map(|z| z / n));
        }
        Mat4::from_fn(|r, col| cols[col][r])
    }

    pub fn random_su2(rng: &mut ChaCha8Rng) -> Mat2 {
        su2(rng.random_range(-PI..PI), rng.random_range(0.0..PI), rng.random_range(-PI..PI))
    }

    fn hamiltonian(a: &NonlocalPoint) -> Mat4 {
        (pauli(1).kron(&pauli(1)).scale_re(a.a1)
            + pauli(2).kron(&pauli(2)).scale_re(a.a2)
            + pauli(3).kron(&pauli(3)).scale_re(a.a3))
        .scale(c(0.0, 0.5))
    }

    #[test]
    fn magic_basis_is_unitary_and_diagonalises_cores() {
        let q = magic_basis();
        assert!(q.unitarity_residual() < 1e-15);
        for m in [core_gate(NonlocalPoint::CNOT), swap(), core_gate(NonlocalPoint::new(0.3, -1.2, 2.5))] {
            assert!((q.transpose() * m * q).off_diagonal_norm() < 1e-12);
            assert!((q.adjoint() * m * q).off_diagonal_norm() < 1e-12);
        }
    }

    #[test]
    fn magic_basis_makes_local_gates_real() {
        let q = magic_basis();
        let l = su2(0.3, 1.1, -0.7).kron(&su2(-2.0, 0.4, 1.9));
        let lb = q.adjoint() * l * q;
        assert!(lb.0.iter().flatten().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn core_gate_matches_exponential() {
        for a in [NonlocalPoint::O, NonlocalPoint::CNOT, NonlocalPoint::new(0.4, -0.9, 1.7), NonlocalPoint::new(3.0, 2.0, -5.0)] {
            let e = expm4(&hamiltonian(&a));
            assert!(core_gate(a).max_abs_diff(&e) < 1e-12);
        }
    }

    #[test]
    fn landmark_cores() {
        assert!(core_gate(NonlocalPoint::O).max_abs_diff(&Mat4::identity()) < 1e-15);
        assert!(phase_distance(&core_gate(NonlocalPoint::A3), &swap()) < 1e-12);
        assert!(phase_distance(&core_gate(NonlocalPoint::A2), &iswap()) < 1e-12);
    }

    #[test]
    fn cnot_from_projectors() {
        let want = Mat4::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(cnot(), want);
        let xx = pauli(1).kron(&pauli(1));
        for r in 0..4 {
            for col in 0..4 {
                let v = if r + col == 3 { ONE } else { ZERO };
                assert_eq!(xx.0[r][col], v);
            }
        }
    }

    #[test]
    fn phase_distance_against_grid_search() {
        let (a, b) = (cnot(), swap());
        let mut best = f64::INFINITY;
        let n = 1_000_000;
        for k in 0..n {
            let phi = 2.0 * PI * k as f64 / n as f64;
            best = best.min((a - b.scale(cis(phi))).frobenius_norm());
        }
        assert!((phase_distance(&a, &b) - best).abs() < 1e-6);
        assert!(phase_distance(&a, &a.scale(c(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn sym_unitary_eig_of_cnot_core_matches_lambda() {
        let q = magic_basis();
        let ub = q.adjoint() * core_gate(NonlocalPoint::CNOT) * q;
        let m = ub.transpose() * ub;
        let e = sym_unitary_eig(&m, 1e-9).unwrap();
        let (a1, a2, a3) = (FRAC_PI_2, 0.0, 0.0);
        // Λ = {e^{i(−a1+a2+a3)}, e^{i(a1−a2+a3)}, e^{i(a1+a2−a3)}, e^{−i(a1+a2+a3)}}
        let closed = LambdaSpectrum {
            values: [cis(-a1 + a2 + a3), cis(a1 - a2 + a3), cis(a1 + a2 - a3), cis(-(a1 + a2 + a3))],
        };
        assert!(LambdaSpectrum { values: e.eigenvalues() }.distance(&closed) < 1e-12);
    }

    #[test]
    fn lambda_formula_matches_point_spectrum() {
        let (a1, a2, a3) = (0.3, 0.9, -0.4);
        let closed = LambdaSpectrum {
            values: [cis(-a1 + a2 + a3), cis(a1 - a2 + a3), cis(a1 + a2 - a3), cis(-(a1 + a2 + a3))],
        };
        let ours = LambdaSpectrum::of_point(&NonlocalPoint::new(a1, a2, a3));
        assert!(ours.distance(&closed) < 1e-14);
        let num = lambda_spectrum(&core_gate(NonlocalPoint::new(a1, a2, a3))).unwrap();
        assert!(num.distance(&closed) < 1e-12);
        assert!((num.product() - ONE).norm() < 1e-12);
    }

    #[test]
    fn lambda_of_identity_and_local_invariance() {
        let id = lambda_spectrum(&Mat4::identity()).unwrap();
        assert!(id.distance(&LambdaSpectrum { values: [ONE; 4] }) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = lambda_spectrum(&cnot()).unwrap();
        for _ in 0..1000 {
            let l = random_su2(&mut rng).kron(&random_su2(&mut rng)).scale(cis(rng.random_range(-PI..PI)));
            let r = random_su2(&mut rng).kron(&random_su2(&mut rng));
            let s = lambda_spectrum(&(l * cnot() * r)).unwrap();
            assert!(s.distance(&base) < 1e-8);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        assert!(matches!(lambda_spectrum(&Mat4::identity().scale_re(1.1)), Err(Error::NotUnitary { .. })));
        assert!(matches!(kak_decompose(&Mat4::zeros()), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn landmark_points() {
        let a = extract_nonlocal(&cnot()).unwrap();
        assert!(a.dist(&NonlocalPoint::CNOT) < 1e-12, "{a}");
        let a = extract_nonlocal(&swap()).unwrap();
        assert!(a.dist(&NonlocalPoint::A3) < 1e-12, "{a}");
        let a = extract_nonlocal(&iswap()).unwrap();
        assert!(a.dist(&NonlocalPoint::A2) < 1e-12, "{a}");
        let a = extract_nonlocal(&Mat4::identity()).unwrap();
        assert!(a.dist(&NonlocalPoint::O) < 1e-12, "{a}");
    }

    #[test]
    fn zz_rotation_is_equivalent_to_xx_rotation() {
        let h = Mat2::from_real([[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]);
        let hh = h.kron(&h);
        for theta in [0.1, 0.7, 1.2, 1.5] {
            let u = hh * core_gate(NonlocalPoint::new(0.0, 0.0, theta)) * hh;
            let a = extract_nonlocal(&u).unwrap();
            assert!(a.dist(&NonlocalPoint::new(theta, 0.0, 0.0)) < 1e-12, "{a}");
        }
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize([0.0; 3]), NonlocalPoint::O);
        let cval = 0.4;
        let a = canonicalize([FRAC_PI_2, FRAC_PI_2, FRAC_PI_2 - cval]);
        assert!(a.dist(&NonlocalPoint::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2 - cval)) < 1e-15);
        assert_eq!(canonicalize([-0.3, 0.1, 0.0]), canonicalize([0.3, 0.1, 0.0]));
        assert!(canonicalize([PI, 0.0, 0.0]).dist(&NonlocalPoint::O) < 1e-15);
    }

    #[test]
    fn kak_of_landmarks() {
        let local = su2(0.3, 1.0, 2.0).kron(&su2(-1.0, 0.5, 0.2));
        let k = kak_decompose(&local).unwrap();
        assert!(k.a.dist(&NonlocalPoint::O) < 1e-9);
        for u in [cnot(), swap(), iswap(), Mat4::identity(), core_gate(NonlocalPoint::new(2.5, 0.4, 0.1))] {
            let k = kak_decompose(&u).unwrap();
            assert!(k.residual < 1e-10, "{}", k.residual);
            assert!(phase_distance(&k.reconstruct(), &u) < 1e-10);
            for v in [k.v1, k.v2, k.v3, k.v4] {
                assert!(v.unitarity_residual() < 1e-12);
                assert!((v.det() - ONE).norm() < 1e-12);
            }
        }
        let k = kak_decompose(&cnot()).unwrap();
        assert!(k.a.dist(&NonlocalPoint::CNOT) < 1e-12);
    }

    #[test]
    fn kak_haar_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let u = haar4(&mut rng);
            let k = kak_decompose(&u).unwrap();
            assert!(k.residual < 1e-10, "{}", k.residual);
            assert!(k.a.in_chamber(1e-12));
        }
    }

    #[test]
    fn entangling_power_landmarks() {
        let ep = |u: &Mat4| entangling_power(u).unwrap();
        assert!((ep(&cnot()) - 2.0 / 9.0).abs() < 1e-14);
        assert!(ep(&swap()).abs() < 1e-14);
        assert!((ep(&iswap()) - 2.0 / 9.0).abs() < 1e-14);
        assert!((entangling_power_at(&NonlocalPoint::A2) - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn mc_oracle_agrees() {
        let s = entangling_power_mc(&swap(), 10_000, 3).unwrap();
        assert!(s.abs() < 1e-12);
        let e = entangling_power_mc(&cnot(), 200_000, 5).unwrap();
        assert!((e - 2.0 / 9.0).abs() < 5e-3);
        assert_eq!(entangling_power_mc(&cnot(), 100, 9), entangling_power_mc(&cnot(), 100, 9));
        assert!(matches!(entangling_power_mc(&cnot(), 0, 9), Err(Error::NoSamples)));
    }

    #[test]
    fn min_cnot_examples() {
        assert_eq!(min_cnot_count(&NonlocalPoint::O), 0);
        assert_eq!(min_cnot_count(&NonlocalPoint::CNOT), 1);
        assert_eq!(min_cnot_count(&NonlocalPoint::A2), 2);
        assert_eq!(min_cnot_count(&NonlocalPoint::new(FRAC_PI_2, FRAC_PI_2, PI / 4.0)), 3);
    }

    #[test]
    fn chamber_locations() {
        assert_eq!(chamber_location(&NonlocalPoint::CNOT, 1e-9), ChamberLocation::CnotPoint);
        assert_eq!(chamber_location(&NonlocalPoint::new(FRAC_PI_2, FRAC_PI_2, 0.3), 1e-9), ChamberLocation::EdgeA2A3);
        assert_eq!(chamber_location(&NonlocalPoint::new(0.4, 0.4, 0.2), 1e-9), ChamberLocation::FaceOA2A3);
        assert_eq!(chamber_location(&NonlocalPoint::new(2.0, PI - 2.0, 0.2), 1e-9), ChamberLocation::FaceA1A2A3);
        assert_eq!(chamber_location(&NonlocalPoint::new(0.7, 0.0, 0.0), 1e-9), ChamberLocation::EdgeOA1);
        assert_eq!(chamber_location(&NonlocalPoint::new(0.9, 0.5, 0.1), 1e-9), ChamberLocation::Interior);
    }

    /// All images of `r` under the 24 sign/permutation moves, reduced mod π
    /// into `[0, π)`.
    fn orbit_mod_pi(r: [f64; 3]) -> Vec<[f64; 3]> {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let signs = [[1.0, 1.0, 1.0], [-1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [1.0, -1.0, -1.0]];
        let mut out = Vec::new();
        for p in perms {
            for s in signs {
                out.push(std::array::from_fn(|k| (s[k] * r[p[k]]).rem_euclid(PI)));
            }
        }
        out
    }

    fn chamber_oracle(r: [f64; 3]) -> NonlocalPoint {
        let inside: Vec<_> = orbit_mod_pi(r)
            .into_iter()
            .map(NonlocalPoint::from_array)
            .filter(|a| a.in_chamber(1e-12))
            .collect();
        assert!(!inside.is_empty());
        inside[0]
    }

    fn random_chamber_point(u: [f64; 3]) -> NonlocalPoint {
        // Barycentric sample of the tetrahedron O A1 A2 A3.
        let mut w = [u[0], u[1], u[2]];
        w.sort_by(f64::total_cmp);
        let (l1, l2, l3) = (w[0], w[1] - w[0], w[2] - w[1]);
        let vs = [NonlocalPoint::A1, NonlocalPoint::A2, NonlocalPoint::A3];
        let mut a = [0.0; 3];
        for (l, v) in [l1, l2, l3].iter().zip(vs) {
            for k in 0..3 {
                a[k] += l * v.to_array()[k];
            }
        }
        NonlocalPoint::from_array(a)
    }

    #[test]
    fn extract_inverts_core_on_chamber_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10_000 {
            let a = random_chamber_point([rng.random(), rng.random(), rng.random()]);
            let got = extract_nonlocal(&core_gate(a)).unwrap();
            let want = canonicalize(a.to_array());
            assert!(got.chamber_dist(&want) < 1e-8, "{a} -> {got}");
        }
    }

    proptest! {
        #[test]
        fn canonicalize_matches_orbit_oracle(r in proptest::collection::vec(-10.0f64..10.0, 3)) {
            let r = [r[0], r[1], r[2]];
            let a = canonicalize(r);
            prop_assert!(a.in_chamber(1e-12));
            let oracle = chamber_oracle(r);
            prop_assert!(a.chamber_dist(&oracle) < 1e-9, "{} vs {}", a, oracle);
        }

        #[test]
        fn canonicalize_is_orbit_invariant_and_idempotent(
            r in proptest::collection::vec(-10.0f64..10.0, 3),
            shifts in proptest::collection::vec(-3i32..3, 3),
        ) {
            let r = [r[0], r[1], r[2]];
            let a = canonicalize(r);
            prop_assert_eq!(canonicalize(a.to_array()), a);
            for img in orbit_mod_pi(r) {
                let shifted: [f64; 3] = std::array::from_fn(|k| img[k] + PI * shifts[k] as f64);
                prop_assert!(canonicalize(shifted).chamber_dist(&a) < 1e-9);
            }
        }

        #[test]
        fn local_invariance(
            angles in proptest::collection::vec(-PI..PI, 12),
            point in proptest::collection::vec(-4.0f64..4.0, 3),
        ) {
            let w = |k: usize| su2(angles[3 * k], angles[3 * k + 1], angles[3 * k + 2]);
            let u = core_gate(NonlocalPoint::new(point[0], point[1], point[2]));
            let v = w(0).kron(&w(1)) * u * w(2).kron(&w(3));
            prop_assert!(lambda_spectrum(&u).unwrap().distance(&lambda_spectrum(&v).unwrap()) < 1e-8);
            let (e0, e1) = (entangling_power(&u).unwrap(), entangling_power(&v).unwrap());
            prop_assert!((e0 - e1).abs() < 1e-10);
            prop_assert!((0.0..=2.0 / 9.0).contains(&e0));
            let a = extract_nonlocal(&v).unwrap();
            prop_assert!((entangling_power_at(&a) - e1).abs() < 1e-10);
            prop_assert!(locally_equivalent(&u, &v, 1e-7));
        }
    }
}
