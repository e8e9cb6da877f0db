//! Yang-Baxterization of braid gates and the resulting Yang-Baxter gates.
//!
//! A braid gate `B = Σ λ_j P_j` is turned into a spectral-parameter family
//! `R(x) = Σ Θ_j(x) P_j`. Families I–III have three distinct eigenvalues and
//! give three kinds of gate (the listed eigenvalue order and its
//! `λ1↔λ2`, `λ2↔λ3` permutations); family IV has two and gives one.
//!
//! Spectral parameters are additive: `x = e^μ` for families I and II,
//! `x = e^{2μ}` for family III, and `x = tan(π/4 − χ)` for family IV.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use crate::braid::{build_braid, BraidSpec, Family};
use crate::error::{Error, Result};
use crate::linalg::{c, cis, normal_eig, phase_distance, Kron, Mat, Mat2, Mat4, Mat8, C64, ONE, ZERO};
use crate::weyl::{canonicalize, entangling_power_at, NonlocalPoint};

/// Closed forms whose normalising denominator falls below this are treated
/// as singular; the limit there depends on the direction of approach.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralTerm {
    pub lambda: C64,
    pub projector: Mat4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomp {
    pub terms: Vec<SpectralTerm>,
}

impl SpectralDecomp {
    pub fn reconstruct(&self) -> Mat4 {
        self.terms.iter().fold(Mat4::zeros(), |acc, t| acc + t.projector.scale(t.lambda))
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.terms.iter().map(|t| t.lambda).collect()
    }

    /// Projector belonging to eigenvalue `lambda`, if it is in the spectrum.
    pub fn projector_for(&self, lambda: C64, tol: f64) -> Option<&Mat4> {
        self.terms
            .iter()
            .find(|t| (t.lambda - lambda).norm() <= tol)
            .map(|t| &t.projector)
    }
}

/// Eigenvalues of `B` merged within `group_tol`, with orthogonal projectors.
pub fn spectral_decompose(b: &Mat4, group_tol: f64) -> Result<SpectralDecomp> {
    let (vals, v) = normal_eig(b)?;
    let mut groups: Vec<(Vec<C64>, Mat4)> = Vec::new();
    for k in 0..4 {
        let col = v.col(k);
        let outer = Mat4::from_fn(|r, s| col[r] * col[s].conj());
        match groups.iter_mut().find(|(ls, _)| (ls[0] - vals[k]).norm() <= group_tol) {
            Some((ls, p)) => {
                ls.push(vals[k]);
                *p += outer;
            }
            None => groups.push((vec![vals[k]], outer)),
        }
    }
    let terms: Vec<SpectralTerm> = groups
        .into_iter()
        .map(|(ls, projector)| {
            let mean: C64 = ls.iter().sum::<C64>() / ls.len() as f64;
            let lambda = if mean.norm() > 0.0 { mean / mean.norm() } else { mean };
            SpectralTerm { lambda, projector }
        })
        .collect();
    let decomp = SpectralDecomp { terms };
    let residual = (decomp.reconstruct() - *b).frobenius_norm();
    if residual > 1e-8 {
        return Err(Error::NoConvergence { residual });
    }
    Ok(decomp)
}

fn check_in_spectrum(b: &Mat4, lambda: C64) -> Result<()> {
    if (*b - Mat4::identity().scale(lambda)).det().norm() > 1e-8 {
        return Err(Error::UnknownEigenvalue(format!("{lambda}")));
    }
    Ok(())
}

fn distinct(ls: &[C64]) -> Result<()> {
    for i in 0..ls.len() {
        for j in (i + 1)..ls.len() {
            if (ls[i] - ls[j]).norm() <= 1e-12 {
                return Err(Error::InvalidParameters("eigenvalues must be distinct".into()));
            }
        }
    }
    Ok(())
}

/// Two-eigenvalue Yang-Baxterization `(1/λ2)(B + x λ1 λ2 B⁻¹)`.
pub fn baxterize2(b: &Mat4, l1: C64, l2: C64, x: C64) -> Result<Mat4> {
    distinct(&[l1, l2])?;
    check_in_spectrum(b, l1)?;
    check_in_spectrum(b, l2)?;
    Ok((*b + b.adjoint().scale(x * l1 * l2)).scale(l2.inv()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YbCoefficients {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
}

pub fn yb_coefficients(x: C64, l1: C64, l2: C64, l3: C64) -> YbCoefficients {
    YbCoefficients {
        alpha: -(x - ONE) / l3,
        beta: (ONE + l1 / l2 + l1 / l3 + l2 / l3) * x,
        gamma: l1 * x * (x - ONE),
    }
}

/// Three-eigenvalue Yang-Baxterization `αB + β1 + γB⁻¹`.
pub fn baxterize3(b: &Mat4, l1: C64, l2: C64, l3: C64, x: C64) -> Result<(Mat4, YbCoefficients)> {
    distinct(&[l1, l2, l3])?;
    for l in [l1, l2, l3] {
        check_in_spectrum(b, l)?;
    }
    let k = yb_coefficients(x, l1, l2, l3);
    let r = b.scale(k.alpha) + Mat4::identity().scale(k.beta) + b.adjoint().scale(k.gamma);
    Ok((r, k))
}

/// `Θ_j(x) = Π_{k<j}(1 + x λ_k/λ_{k+1}) · Π_{k≥j}(x + λ_k/λ_{k+1})`.
pub fn theta_polynomials(x: C64, lambdas: &[C64]) -> Vec<C64> {
    let n = lambdas.len();
    (0..n)
        .map(|j| {
            (0..n.saturating_sub(1))
                .map(|k| {
                    let r = lambdas[k] / lambdas[k + 1];
                    if k < j { ONE + x * r } else { x + r }
                })
                .product()
        })
        .collect()
}

/// Projector form `Σ Θ_j(x) P_j` for an ordered list of eigenvalues.
pub fn baxterize_projector(b: &Mat4, lambdas: &[C64], x: C64, group_tol: f64) -> Result<Mat4> {
    distinct(lambdas)?;
    let decomp = spectral_decompose(b, group_tol)?;
    if decomp.terms.len() != lambdas.len() {
        return Err(Error::EigenvalueCount { expected: lambdas.len(), found: decomp.terms.len() });
    }
    let theta = theta_polynomials(x, lambdas);
    let mut r = Mat4::zeros();
    for (l, t) in lambdas.iter().zip(theta) {
        let p = decomp
            .projector_for(*l, group_tol)
            .ok_or_else(|| Error::UnknownEigenvalue(format!("{l}")))?;
        r += p.scale(t);
    }
    Ok(r)
}

/// Rescale to unit average column norm, i.e. divide by `sqrt(tr(R†R)/4)`.
pub fn normalize(r: &Mat4) -> Result<Mat4> {
    let n = (r.frobenius_norm().powi(2) / 4.0).sqrt();
    if !n.is_finite() || n <= 1e-300 {
        return Err(Error::SingularGate);
    }
    Ok(r.scale_re(1.0 / n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    First,
    Second,
    Third,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::First, Kind::Second, Kind::Third];

    pub fn number(self) -> u8 {
        match self {
            Kind::First => 1,
            Kind::Second => 2,
            Kind::Third => 3,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Kind::First),
            2 => Ok(Kind::Second),
            3 => Ok(Kind::Third),
            _ => Err(Error::InvalidParameters(format!("kind must be 1, 2 or 3, got {k}"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A Yang-Baxter gate: braid family and angles, kind, and spectral parameter
/// (`μ` for families I–III, `χ` for family IV).
#[derive(Clone, Debug, PartialEq)]
pub struct YbSpec {
    family: Family,
    kind: Kind,
    spectral: f64,
    phi: Vec<f64>,
}

impl YbSpec {
    /// Family I takes `(φ1, φ2, φ3)` with `φ4 = φ1` implied, or all four
    /// angles provided `φ1 = φ4`.
    pub fn new(family: Family, kind: Kind, spectral: f64, phi: Vec<f64>) -> Result<Self> {
        if family == Family::IV && kind != Kind::First {
            return Err(Error::InvalidParameters("family IV has a single kind".into()));
        }
        if !spectral.is_finite() {
            return Err(Error::InvalidParameters("non-finite spectral parameter".into()));
        }
        let phi = match (family, phi.len()) {
            (Family::I, 4) => {
                if (cis(phi[0]) - cis(phi[3])).norm() > 1e-12 {
                    return Err(Error::InvalidParameters(
                        "family I Yang-Baxter gates need φ1 = φ4".into(),
                    ));
                }
                phi[..3].to_vec()
            }
            (Family::I, 3) => phi,
            (Family::I, n) => {
                return Err(Error::ParameterCount { family: "I", expected: 3, got: n });
            }
            (f, n) if n != f.arity() => {
                return Err(Error::ParameterCount { family: f.name(), expected: f.arity(), got: n });
            }
            _ => phi,
        };
        if phi.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameters("non-finite angle".into()));
        }
        Ok(Self { family, kind, spectral, phi })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn spectral(&self) -> f64 {
        self.spectral
    }

    /// Braid angles; for family I these are `(φ1, φ2, φ3)`.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn with_spectral(&self, spectral: f64) -> Self {
        Self { spectral, ..self.clone() }
    }

    /// Multiplicative spectral parameter.
    pub fn x(&self) -> f64 {
        spectral_to_x(self.family, self.spectral)
    }

    pub fn braid_spec(&self) -> BraidSpec {
        let phi = match self.family {
            Family::I => vec![self.phi[0], self.phi[1], self.phi[2], self.phi[0]],
            _ => self.phi.clone(),
        };
        BraidSpec::new(self.family, phi).expect("validated angles")
    }

    /// `φ = (φ2 + φ3)/2 − φ1` for families I and II.
    pub fn varphi(&self) -> Option<f64> {
        match self.family {
            Family::I | Family::II => Some(0.5 * (self.phi[1] + self.phi[2]) - self.phi[0]),
            _ => None,
        }
    }

    /// `ω = (φ2 − φ3)/2` for families I and II.
    pub fn omega(&self) -> Option<f64> {
        match self.family {
            Family::I | Family::II => Some(0.5 * (self.phi[1] - self.phi[2])),
            _ => None,
        }
    }
}

pub fn spectral_to_x(family: Family, spectral: f64) -> f64 {
    match family {
        Family::I | Family::II => spectral.exp(),
        Family::III => (2.0 * spectral).exp(),
        Family::IV => (FRAC_PI_4 - spectral).tan(),
    }
}

/// Eigenvalues of the braid gate in the order used for the first kind.
pub fn yb_eigenvalues(family: Family, phi: &[f64]) -> Vec<C64> {
    match family {
        Family::I | Family::II => {
            let psi = 0.5 * (phi[1] + phi[2]);
            vec![-cis(psi), cis(phi[0]), cis(psi)]
        }
        Family::III => vec![-cis(phi[0]), cis(-phi[0]), cis(phi[0])],
        Family::IV => vec![cis(FRAC_PI_4), cis(-FRAC_PI_4)],
    }
}

/// The kind's eigenvalue order.
fn kind_order(kind: Kind, l: &[C64]) -> [C64; 3] {
    match kind {
        Kind::First => [l[0], l[1], l[2]],
        Kind::Second => [l[1], l[0], l[2]],
        Kind::Third => [l[0], l[2], l[1]],
    }
}

/// Normalised gate produced by running the Yang-Baxterization on the braid gate.
pub fn baxterized(spec: &YbSpec) -> Result<Mat4> {
    let b = build_braid(&spec.braid_spec());
    let l = yb_eigenvalues(spec.family, &spec.phi);
    let x = c(spec.x(), 0.0);
    let r = match spec.family {
        Family::IV => baxterize2(&b, l[0], l[1], x)?,
        _ => {
            let [l1, l2, l3] = kind_order(spec.kind, &l);
            baxterize3(&b, l1, l2, l3, x)?.0
        }
    };
    normalize(&r)
}

fn sh(x: f64) -> f64 {
    x.sinh()
}

fn ch(x: f64) -> f64 {
    x.cosh()
}

/// Closed-form unitary Yang-Baxter gate.
pub fn build_yb(spec: &YbSpec) -> Result<Mat4> {
    let mu = spec.spectral;
    match spec.family {
        Family::I | Family::II => {
            let phi = spec.varphi().expect("family I/II");
            let e = cis(spec.omega().expect("family I/II"));
            let (diag, off) = match spec.kind {
                Kind::First => {
                    if mu == 0.0 {
                        return Ok(Mat4::identity());
                    }
                    let den = C64::new(phi, -mu).sin();
                    if den.norm() < SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let d = c(phi.sin(), 0.0) / den;
                    let o = c(0.0, -sh(mu)) / den;
                    ([ONE, d], [o * e, o * e.conj()])
                }
                Kind::Second | Kind::Third => {
                    let plus = C64::new(mu / 2.0, phi / 2.0);
                    let minus = C64::new(mu / 2.0, -phi / 2.0);
                    let (p, m, delta) = if spec.kind == Kind::Second {
                        (plus.sinh(), minus.sinh(), (phi / 2.0).sin().powi(2) + sh(mu / 2.0).powi(2))
                    } else {
                        (plus.cosh(), minus.cosh(), (phi / 2.0).cos().powi(2) + sh(mu / 2.0).powi(2))
                    };
                    if delta < SINGULAR_TOL * SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let n = 1.0 / delta.sqrt();
                    ([ZERO, p * n], [m * e * n, m * e.conj() * n])
                }
            };
            // `diag[0]` sits on the block the gate leaves alone, `diag[1]` on
            // the block it mixes; for kinds 2 and 3 the first is unused.
            Ok(match (spec.family, spec.kind) {
                (Family::I, Kind::First) => Mat([
                    [diag[0], ZERO, ZERO, ZERO],
                    [ZERO, diag[1], off[0], ZERO],
                    [ZERO, off[1], diag[1], ZERO],
                    [ZERO, ZERO, ZERO, diag[0]],
                ]),
                (Family::I, _) => Mat([
                    [diag[1], ZERO, ZERO, ZERO],
                    [ZERO, ZERO, off[0], ZERO],
                    [ZERO, off[1], ZERO, ZERO],
                    [ZERO, ZERO, ZERO, diag[1]],
                ]),
                (_, Kind::First) => Mat([
                    [diag[1], ZERO, ZERO, off[0]],
                    [ZERO, diag[0], ZERO, ZERO],
                    [ZERO, ZERO, diag[0], ZERO],
                    [off[1], ZERO, ZERO, diag[1]],
                ]),
                _ => Mat([
                    [ZERO, ZERO, ZERO, off[0]],
                    [ZERO, diag[1], ZERO, ZERO],
                    [ZERO, ZERO, diag[1], ZERO],
                    [off[1], ZERO, ZERO, ZERO],
                ]),
            })
        }
        Family::III => {
            let (s, co) = spec.phi[0].sin_cos();
            let e = cis(spec.phi[1]);
            let i = c(0.0, 1.0);
            match spec.kind {
                Kind::First => {
                    if mu == 0.0 {
                        return Ok(Mat4::identity());
                    }
                    let dc = C64::new(mu, spec.phi[0]).cosh();
                    let ds = C64::new(mu, spec.phi[0]).sinh();
                    if dc.norm() < SINGULAR_TOL || ds.norm() < SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let a = c(ch(mu) * co, 0.0) / dc;
                    let b = c(sh(mu) * s, 0.0) / dc;
                    let d = i * ch(mu) * s / ds;
                    let f = c(-sh(mu) * co, 0.0) / ds;
                    Ok(Mat([
                        [a, ZERO, ZERO, -e * b],
                        [ZERO, d, f, ZERO],
                        [ZERO, f, d, ZERO],
                        [e.conj() * b, ZERO, ZERO, a],
                    ]))
                }
                Kind::Second => {
                    // Eigenvalue order (λ2, λ1, λ3). The commonly quoted form
                    // for this kind has φ2 shifted by π; this is the matrix the
                    // construction actually produces.
                    let delta = (sh(mu) * co).powi(2) + (ch(mu) * s).powi(2);
                    if delta < SINGULAR_TOL * SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let n = 1.0 / delta.sqrt();
                    let p = c(-sh(mu) * co * n, 0.0);
                    let q = ch(mu) * s * n;
                    let r = c(0.0, -ch(mu) * s * n);
                    let t = c(sh(mu) * co * n, 0.0);
                    Ok(Mat([
                        [p, ZERO, ZERO, e * q],
                        [ZERO, r, t, ZERO],
                        [ZERO, t, r, ZERO],
                        [-e.conj() * q, ZERO, ZERO, p],
                    ]))
                }
                Kind::Third => {
                    let delta = (ch(mu) * co).powi(2) + (sh(mu) * s).powi(2);
                    if delta < SINGULAR_TOL * SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let n = 1.0 / delta.sqrt();
                    let p = c(ch(mu) * co * n, 0.0);
                    let q = sh(mu) * s * n;
                    let r = c(0.0, sh(mu) * s * n);
                    let t = c(-ch(mu) * co * n, 0.0);
                    Ok(Mat([
                        [p, ZERO, ZERO, -e * q],
                        [ZERO, r, t, ZERO],
                        [ZERO, t, r, ZERO],
                        [e.conj() * q, ZERO, ZERO, p],
                    ]))
                }
            }
        }
        Family::IV => Ok(r_iv(spec.phi[0], spec.spectral)),
    }
}

/// `R_IV(χ)` with braid angle `φ1`.
pub fn r_iv(phi1: f64, chi: f64) -> Mat4 {
    let (s, co) = chi.sin_cos();
    let e = cis(phi1);
    let cc = c(co, 0.0);
    let ss = c(s, 0.0);
    Mat([
        [cc, ZERO, ZERO, e * s],
        [ZERO, cc, ss, ZERO],
        [ZERO, -ss, cc, ZERO],
        [-e.conj() * s, ZERO, ZERO, cc],
    ])
}

/// `min_c ‖L − c·R‖_F` for the two sides of the Yang-Baxter equation built
/// from `r(μ)`, `r(ν)` and `r(μ+ν)`.
pub fn ybe_residual_with(r: impl Fn(f64) -> Mat4, mu: f64, nu: f64) -> f64 {
    let id = Mat2::identity();
    let (rx, ry, rxy) = (r(mu), r(nu), r(mu + nu));
    let lhs: Mat8 = rx.kron(&id) * id.kron(&rxy) * ry.kron(&id);
    let rhs: Mat8 = id.kron(&ry) * rxy.kron(&id) * id.kron(&rx);
    let den = rhs.frobenius_norm().powi(2);
    if den == 0.0 {
        return lhs.frobenius_norm();
    }
    let scale = (rhs.adjoint() * lhs).trace() / den;
    (lhs - rhs.scale(scale)).frobenius_norm()
}

/// Yang-Baxter residual of the closed-form gate at additive parameters
/// `μ`, `ν`. Family IV is composed through `x = e^μ`, `y = e^ν`.
pub fn ybe_residual(spec: &YbSpec, mu: f64, nu: f64) -> Result<f64> {
    let gate = |t: f64| -> Result<Mat4> {
        match spec.family {
            Family::IV => Ok(r_iv(spec.phi[0], FRAC_PI_4 - t.exp().atan())),
            _ => build_yb(&spec.with_spectral(t)),
        }
    };
    let (a, b, ab) = (gate(mu)?, gate(nu)?, gate(mu + nu)?);
    Ok(ybe_residual_with(
        |t| {
            if t == mu {
                a
            } else if t == nu {
                b
            } else {
                ab
            }
        },
        mu,
        nu,
    ))
}

fn wrap_pi(t: f64) -> f64 {
    let r = t - 2.0 * PI * (t / (2.0 * PI)).round();
    if r <= -PI { r + 2.0 * PI } else { r }
}

/// `[a, a, c]` for a first-kind gate with effective angle `φ` and parameter `μ`.
fn first_kind_point(phi: f64, mu: f64) -> NonlocalPoint {
    let den = (2.0 * mu).cosh() - (2.0 * phi).cos();
    if den <= 1e-300 {
        return NonlocalPoint::O;
    }
    let ratio = ((1.0 - (2.0 * phi).cos()) / den).clamp(0.0, 1.0);
    let a = ratio.sqrt().acos();
    let w = C64::new(phi, mu).sin();
    let cc = -wrap_pi(2.0 * w.arg()) / 2.0;
    canonicalize([a, a, cc])
}

/// Closed-form nonlocal parameters.
pub fn yb_nonlocal_closed(spec: &YbSpec) -> Result<NonlocalPoint> {
    let mu = spec.spectral;
    match spec.family {
        Family::I | Family::II => {
            let phi = spec.varphi().expect("family I/II");
            match spec.kind {
                Kind::First => Ok(first_kind_point(phi, mu)),
                Kind::Second => {
                    let v = C64::new(phi / 2.0, mu / 2.0).sin();
                    if v.norm() < SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let p2 = wrap_pi(-2.0 * v.arg());
                    Ok(canonicalize([FRAC_PI_2, FRAC_PI_2, FRAC_PI_2 - p2]))
                }
                Kind::Third => {
                    let u = C64::new(phi / 2.0, mu / 2.0).cos();
                    if u.norm() < SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let p3 = wrap_pi(2.0 * u.arg());
                    Ok(canonicalize([FRAC_PI_2, FRAC_PI_2, FRAC_PI_2 - p3]))
                }
            }
        }
        Family::III => {
            let (s, co) = spec.phi[0].sin_cos();
            match spec.kind {
                Kind::First => Ok(first_kind_point(2.0 * spec.phi[0], 2.0 * mu)),
                Kind::Second | Kind::Third => {
                    let (num, other) = if spec.kind == Kind::Second {
                        (sh(mu) * co, ch(mu) * s)
                    } else {
                        (ch(mu) * co, sh(mu) * s)
                    };
                    let norm = (num * num + other * other).sqrt();
                    if norm < SINGULAR_TOL {
                        return Err(Error::SingularGate);
                    }
                    let p = (num / norm).clamp(-1.0, 1.0).acos();
                    Ok(canonicalize([FRAC_PI_2, FRAC_PI_2, FRAC_PI_2 - 2.0 * p]))
                }
            }
        }
        Family::IV => Ok(canonicalize([2.0 * spec.spectral, 0.0, 0.0])),
    }
}

/// Closed-form entangling power.
pub fn yb_ep(spec: &YbSpec) -> Result<f64> {
    match spec.family {
        Family::IV => Ok(2.0 / 9.0 * (2.0 * spec.spectral).sin().powi(2)),
        _ => Ok(entangling_power_at(&yb_nonlocal_closed(spec)?)),
    }
}

/// Distance up to phase between the first-kind gate at `μ = −μ_large` and
/// its braid gate.
pub fn braid_limit_residual(spec: &YbSpec, mu_large: f64) -> Result<f64> {
    if spec.family == Family::IV || spec.kind != Kind::First {
        return Err(Error::InvalidParameters("braid limit applies to first-kind gates of families I-III".into()));
    }
    let r = build_yb(&spec.with_spectral(-mu_large.abs()))?;
    Ok(phase_distance(&r, &build_braid(&spec.braid_spec())))
}
