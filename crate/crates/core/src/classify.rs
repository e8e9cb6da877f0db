//! Clifford, matchgate and dual-unitary predicates, and the parameter
//! conditions under which braid and Yang-Baxter gates satisfy them.
//!
//! [`predict_conditions`] reports two verdict sets. `table` evaluates the
//! conditions exactly as tabulated for each family. `exact` is the complete
//! characterisation: the tabulated conditions are sufficient but miss a few
//! loci (identity points, `ω ∈ kπ/2`, and the iSWAP loci of family III), and
//! `exact` is what the numeric predicates agree with.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use crate::baxterize::{build_yb, Kind, YbSpec};
use crate::braid::{build_braid, derived_angles, BraidSpec, Family};
use crate::linalg::{c, Kron, Mat2, Mat4, C64, ONE, ZERO};

/// Frobenius tolerance for the numeric predicates.
pub const CLASSIFY_TOL: f64 = 1e-8;
/// A parameter within this distance of a condition lattice satisfies it.
pub const LATTICE_TOL: f64 = 1e-9;
/// Parameters closer than this to a lattice, but not within [`LATTICE_TOL`],
/// are boundary points where numeric and symbolic verdicts may legitimately
/// differ.
pub const BOUNDARY_BAND: f64 = 1e-6;

const PAULI_LABELS: [char; 4] = ['I', 'X', 'Y', 'Z'];

fn pauli(k: usize) -> Mat2 {
    match k {
        0 => Mat2::identity(),
        1 => Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]),
        2 => crate::linalg::Mat([[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]),
        _ => Mat2::from_real([[1.0, 0.0], [0.0, -1.0]]),
    }
}

/// `i^phase · σ_{string[0]} ⊗ σ_{string[1]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliImage {
    pub phase: u8,
    pub string: [u8; 2],
}

impl PauliImage {
    pub fn matrix(&self) -> Mat4 {
        let ph = [ONE, c(0.0, 1.0), -ONE, c(0.0, -1.0)][self.phase as usize];
        pauli(self.string[0] as usize).kron(&pauli(self.string[1] as usize)).scale(ph)
    }
}

impl fmt::Display for PauliImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(
            f,
            "{sign}{}{}",
            PAULI_LABELS[self.string[0] as usize],
            PAULI_LABELS[self.string[1] as usize]
        )
    }
}

/// Generators conjugated by the Clifford check, in order.
pub const CLIFFORD_GENERATORS: [&str; 4] = ["XI", "ZI", "IX", "IZ"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CliffordCheck {
    pub is_clifford: bool,
    /// Image of each of [`CLIFFORD_GENERATORS`]; `None` if it is not a
    /// phased Pauli string.
    pub images: [Option<PauliImage>; 4],
}

fn match_pauli(q: &Mat4, tol: f64) -> Option<PauliImage> {
    let mut best = (0.0, 0usize, 0usize, ZERO);
    for a in 0..4 {
        for b in 0..4 {
            let s = pauli(a).kron(&pauli(b));
            let coef = (s * *q).trace() / 4.0;
            if coef.norm() > best.0 {
                best = (coef.norm(), a, b, coef);
            }
        }
    }
    let (_, a, b, coef) = best;
    let phase = ((coef.arg() / FRAC_PI_2).round().rem_euclid(4.0)) as u8;
    let image = PauliImage { phase, string: [a as u8, b as u8] };
    ((*q - image.matrix()).frobenius_norm() <= tol).then_some(image)
}

/// Conjugation table of `U` on `X⊗I, Z⊗I, I⊗X, I⊗Z`.
pub fn clifford_check(u: &Mat4, tol: f64) -> CliffordCheck {
    let gens = [(1, 0), (3, 0), (0, 1), (0, 3)];
    let ud = u.adjoint();
    let images = gens.map(|(a, b)| {
        let p = pauli(a).kron(&pauli(b));
        match_pauli(&(*u * p * ud), tol)
    });
    CliffordCheck { is_clifford: images.iter().all(Option::is_some), images }
}

pub fn is_clifford(u: &Mat4, tol: f64) -> bool {
    clifford_check(u, tol).is_clifford
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchgateCheck {
    pub is_matchgate: bool,
    /// Largest entry outside the X pattern.
    pub off_x: f64,
    /// Determinant of the block on `|00⟩, |11⟩`.
    pub det_outer: C64,
    /// Determinant of the block on `|01⟩, |10⟩`.
    pub det_inner: C64,
}

pub fn matchgate_check(u: &Mat4, tol: f64) -> MatchgateCheck {
    let mut off_x: f64 = 0.0;
    for r in 0..4 {
        for s in 0..4 {
            if r != s && r + s != 3 {
                off_x = off_x.max(u[(r, s)].norm());
            }
        }
    }
    let det_outer = u[(0, 0)] * u[(3, 3)] - u[(0, 3)] * u[(3, 0)];
    let det_inner = u[(1, 1)] * u[(2, 2)] - u[(1, 2)] * u[(2, 1)];
    MatchgateCheck {
        is_matchgate: off_x <= tol && (det_outer - det_inner).norm() <= tol,
        off_x,
        det_outer,
        det_inner,
    }
}

pub fn is_matchgate(u: &Mat4, tol: f64) -> bool {
    matchgate_check(u, tol).is_matchgate
}

/// `⟨m n|Ũ|i j⟩ = ⟨j n|U|i m⟩`.
pub fn reshuffle(u: &Mat4) -> Mat4 {
    Mat4::from_fn(|row, col| {
        let (m, n) = (row >> 1, row & 1);
        let (i, j) = (col >> 1, col & 1);
        u[(2 * j + n, 2 * i + m)]
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualUnitaryCheck {
    pub is_dual_unitary: bool,
    /// `‖ŨŨ† − 1‖_F`.
    pub residual: f64,
}

pub fn dual_unitary_check(u: &Mat4, tol: f64) -> DualUnitaryCheck {
    let residual = reshuffle(u).unitarity_residual();
    DualUnitaryCheck { is_dual_unitary: residual <= tol, residual }
}

pub fn is_dual_unitary(u: &Mat4, tol: f64) -> (bool, f64) {
    let d = dual_unitary_check(u, tol);
    (d.is_dual_unitary, d.residual)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Verdicts {
    pub clifford: bool,
    pub matchgate: bool,
    pub dual_unitary: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prediction {
    /// Complete conditions.
    pub exact: Verdicts,
    /// Conditions as tabulated.
    pub table: Verdicts,
    /// Some parameter sits in the band `(LATTICE_TOL, BOUNDARY_BAND]` of a
    /// condition lattice.
    pub boundary: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpecRef<'a> {
    Braid(&'a BraidSpec),
    Yb(&'a YbSpec),
}

impl SpecRef<'_> {
    /// The gate matrix, or `None` at a singular Yang-Baxter point.
    pub fn gate(&self) -> Option<Mat4> {
        match self {
            SpecRef::Braid(b) => Some(build_braid(b)),
            SpecRef::Yb(y) => build_yb(y).ok(),
        }
    }
}

#[derive(Default)]
struct Lattice {
    boundary: bool,
}

impl Lattice {
    fn near(&mut self, d: f64) -> bool {
        if d > LATTICE_TOL && d <= BOUNDARY_BAND {
            self.boundary = true;
        }
        d <= LATTICE_TOL
    }

    /// `x ∈ offset + step·ℤ`.
    fn on(&mut self, x: f64, step: f64, offset: f64) -> bool {
        let r = (x - offset) / step;
        self.near((r - r.round()).abs() * step)
    }

    fn zero(&mut self, v: f64) -> bool {
        self.near(v.abs())
    }
}

/// `tanh(μ/2) = ±tan(φ/2)`, as a residual.
pub fn iswap_locus_second(phi: f64, mu: f64) -> f64 {
    (mu / 2.0).tanh().powi(2) * (phi / 2.0).cos().powi(2) - (phi / 2.0).sin().powi(2)
}

/// `tanh(μ/2) = ±cot(φ/2)`, as a residual.
pub fn iswap_locus_third(phi: f64, mu: f64) -> f64 {
    (mu / 2.0).tanh().powi(2) * (phi / 2.0).sin().powi(2) - (phi / 2.0).cos().powi(2)
}

pub fn predict_conditions(spec: SpecRef<'_>) -> Prediction {
    let mut l = Lattice::default();
    let (exact, table) = match spec {
        SpecRef::Braid(b) => predict_braid(b, &mut l),
        SpecRef::Yb(y) => predict_yb(y, &mut l),
    };
    Prediction { exact, table, boundary: l.boundary }
}

fn predict_braid(b: &BraidSpec, l: &mut Lattice) -> (Verdicts, Verdicts) {
    let p = b.phi();
    let d = derived_angles(b);
    match b.family() {
        Family::I => {
            let f = d.phi_i.expect("family I");
            let cl = [l.on(f[0], FRAC_PI_2, 0.0), l.on(f[1], FRAC_PI_2, 0.0), l.on(f[2], FRAC_PI_2, 0.0)];
            let v = Verdicts {
                clifford: cl.iter().all(|&x| x),
                matchgate: l.on(f[2], PI, FRAC_PI_2),
                dual_unitary: true,
            };
            (v, v)
        }
        Family::II => {
            let f = d.phi_ii.expect("family II");
            let cl = [l.on(f[0], FRAC_PI_2, 0.0), l.on(f[1], FRAC_PI_2, 0.0)];
            let v = Verdicts {
                clifford: cl[0] && cl[1],
                matchgate: l.on(f[1], PI, FRAC_PI_2),
                dual_unitary: true,
            };
            (v, v)
        }
        Family::III => {
            let k = l.on(p[0], PI, 0.0);
            let half = l.on(p[0], FRAC_PI_2, 0.0);
            let quarter = l.on(p[0], FRAC_PI_4, 0.0);
            let q2 = l.on(p[1], FRAC_PI_2, 0.0);
            let q2_odd = l.on(p[1], PI, FRAC_PI_2);
            let table = Verdicts { clifford: quarter && q2_odd, matchgate: false, dual_unitary: true };
            let exact = Verdicts { clifford: k || (half && q2) || (quarter && q2_odd), ..table };
            (exact, table)
        }
        Family::IV => {
            let v = Verdicts { clifford: l.on(p[0], PI, 0.0), matchgate: true, dual_unitary: false };
            (v, v)
        }
    }
}

fn predict_yb(y: &YbSpec, l: &mut Lattice) -> (Verdicts, Verdicts) {
    let mu = y.spectral();
    let p = y.phi();
    match y.family() {
        Family::I | Family::II => {
            let phi = y.varphi().expect("family I/II");
            let omega = y.omega().expect("family I/II");
            let m0 = l.zero(mu);
            let phi_k = l.on(phi, PI, 0.0);
            let phi_h = l.on(phi, PI, FRAC_PI_2);
            let w_half = l.on(omega, FRAC_PI_2, 0.0);
            let w_k = l.on(omega, PI, 0.0);
            let e59 = l.zero(iswap_locus_second(phi, mu));
            let e60 = l.zero(iswap_locus_third(phi, mu));
            match y.kind() {
                Kind::First => (
                    Verdicts {
                        clifford: m0 || (phi_k && w_half),
                        matchgate: m0 || phi_h,
                        dual_unitary: phi_k && !m0,
                    },
                    Verdicts { clifford: w_k && (m0 || phi_k), matchgate: phi_h, dual_unitary: false },
                ),
                Kind::Second | Kind::Third => {
                    let locus = if y.kind() == Kind::Second { e59 } else { e60 };
                    let base = m0 || phi_k || locus;
                    (
                        Verdicts { clifford: w_half && base, matchgate: locus, dual_unitary: true },
                        Verdicts { clifford: w_k && base, matchgate: locus, dual_unitary: true },
                    )
                }
            }
        }
        Family::III => {
            let m0 = l.zero(mu);
            let k = l.on(p[0], PI, 0.0);
            let h = l.on(p[0], PI, FRAC_PI_2);
            let half = l.on(p[0], FRAC_PI_2, 0.0);
            let q2 = l.on(p[1], FRAC_PI_2, 0.0);
            let q2_odd = l.on(p[1], PI, FRAC_PI_2);
            let (s, co) = p[0].sin_cos();
            let t2 = mu.tanh().powi(2);
            let e2 = l.zero(t2 * co * co - s * s);
            let e3 = l.zero(t2 * s * s - co * co);
            match y.kind() {
                Kind::First => (
                    Verdicts { clifford: m0 || k || (half && q2), matchgate: m0, dual_unitary: half && !m0 },
                    Verdicts { clifford: q2_odd && (m0 || half), matchgate: false, dual_unitary: false },
                ),
                Kind::Second => (
                    Verdicts {
                        clifford: k || ((m0 || h) && q2) || (e2 && q2_odd),
                        matchgate: false,
                        dual_unitary: true,
                    },
                    Verdicts { clifford: q2_odd && (m0 || h || k), matchgate: false, dual_unitary: true },
                ),
                Kind::Third => (
                    Verdicts {
                        clifford: m0 || k || (h && q2) || (e3 && q2_odd),
                        matchgate: false,
                        dual_unitary: true,
                    },
                    Verdicts { clifford: q2_odd && (m0 || h || k), matchgate: false, dual_unitary: true },
                ),
            }
        }
        Family::IV => {
            let chi_k = l.on(mu, PI, 0.0);
            let chi_half = l.on(mu, FRAC_PI_2, 0.0);
            let chi_quarter = l.on(mu, FRAC_PI_4, 0.0);
            let p_half = l.on(p[0], FRAC_PI_2, 0.0);
            let p_k = l.on(p[0], PI, 0.0);
            (
                Verdicts {
                    clifford: chi_k || (chi_half && p_half) || (chi_quarter && p_k),
                    matchgate: true,
                    dual_unitary: false,
                },
                Verdicts { clifford: p_k && chi_quarter, matchgate: true, dual_unitary: false },
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassificationReport {
    pub clifford: CliffordCheck,
    pub matchgate: MatchgateCheck,
    pub dual_unitary: DualUnitaryCheck,
    pub predicted: Option<Prediction>,
}

impl ClassificationReport {
    pub fn numeric(&self) -> Verdicts {
        Verdicts {
            clifford: self.clifford.is_clifford,
            matchgate: self.matchgate.is_matchgate,
            dual_unitary: self.dual_unitary.is_dual_unitary,
        }
    }

    /// Whether numeric verdicts equal the exact prediction; `None` without a
    /// prediction or at a boundary point.
    pub fn agrees(&self) -> Option<bool> {
        let p = self.predicted?;
        (!p.boundary).then(|| p.exact == self.numeric())
    }
}

pub fn classify(u: &Mat4, spec: Option<SpecRef<'_>>) -> ClassificationReport {
    ClassificationReport {
        clifford: clifford_check(u, CLASSIFY_TOL),
        matchgate: matchgate_check(u, CLASSIFY_TOL),
        dual_unitary: dual_unitary_check(u, CLASSIFY_TOL),
        predicted: spec.map(predict_conditions),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AgreementTally {
    pub agree: usize,
    pub disagree: usize,
    pub boundary: usize,
    /// Yang-Baxter points where the gate is undefined.
    pub singular: usize,
    /// Points where a tabulated condition holds but the numeric predicate
    /// does not.
    pub table_violations: usize,
}

impl AgreementTally {
    pub fn compared(&self) -> usize {
        self.agree + self.disagree
    }

    pub fn record(&mut self, spec: SpecRef<'_>) {
        let Some(u) = spec.gate() else {
            self.singular += 1;
            return;
        };
        let r = classify(&u, Some(spec));
        let p = r.predicted.expect("prediction requested");
        if p.boundary {
            self.boundary += 1;
            return;
        }
        let n = r.numeric();
        if (p.table.clifford && !n.clifford)
            || (p.table.matchgate && !n.matchgate)
            || (p.table.dual_unitary && !n.dual_unitary)
        {
            self.table_violations += 1;
        }
        if p.exact == n {
            self.agree += 1;
        } else {
            self.disagree += 1;
        }
    }
}
