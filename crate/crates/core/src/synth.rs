//! Two-qubit circuits over `{Rz, H, S, S†, T, T†, CNOT}` and CNOT-optimal
//! synthesis.
//!
//! Circuits are listed in application order. Qubit 0 is the left tensor
//! factor, and `Rz(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, cis, optimal_phase, phase_distance, Kron, Mat2, Mat4, ONE, ZERO};
use crate::weyl::{kak_decompose, kak_with_target, min_cnot_count, NonlocalPoint};

/// Residual above which synthesis is reported as failed.
pub const SYNTH_TOL: f64 = 1e-6;

/// Tolerance for treating the middle Euler angle as `0` or `π`.
const GIMBAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

/// Reduce an angle into `(−π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t - 2.0 * PI * (t / (2.0 * PI)).round();
    if r <= -PI { r + 2.0 * PI } else { r }
}

pub fn rz(theta: f64) -> Mat2 {
    Mat2::diag(&[cis(-theta / 2.0), cis(theta / 2.0)])
}

pub fn hadamard() -> Mat2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::from_real([[s, s], [s, -s]])
}

fn on_qubit(g: Mat2, q: usize) -> Mat4 {
    if q == 0 {
        g.kron(&Mat2::identity())
    } else {
        Mat2::identity().kron(&g)
    }
}

/// CNOT with the given control and target.
pub fn cnot_matrix(control: usize, target: usize) -> Mat4 {
    Mat4::from_fn(|r, s| {
        let bits = |k: usize| [(k >> 1) & 1, k & 1];
        let mut out = bits(s);
        if out[control] == 1 {
            out[target] ^= 1;
        }
        if bits(r) == out { ONE } else { ZERO }
    })
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&q) = self.qubits().iter().find(|&&q| q > 1) {
            return Err(Error::QubitIndex(q));
        }
        match *self {
            Gate::Cnot { control, target } if control == target => {
                Err(Error::InvalidParameters("CNOT control equals target".into()))
            }
            Gate::Rz(_, t) if !t.is_finite() => Err(Error::InvalidParameters("non-finite Rz angle".into())),
            _ => Ok(()),
        }
    }

    pub fn matrix(&self) -> Result<Mat4> {
        self.validate()?;
        let phase = |t: f64| Mat2::diag(&[ONE, cis(t)]);
        Ok(match *self {
            Gate::H(q) => on_qubit(hadamard(), q),
            Gate::S(q) => on_qubit(phase(FRAC_PI_2), q),
            Gate::Sdg(q) => on_qubit(phase(-FRAC_PI_2), q),
            Gate::T(q) => on_qubit(phase(FRAC_PI_4), q),
            Gate::Tdg(q) => on_qubit(phase(-FRAC_PI_4), q),
            Gate::Rz(q, t) => on_qubit(rz(t), q),
            Gate::Cnot { control, target } => cnot_matrix(control, target),
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::T(q) => write!(f, "T {q}"),
            Gate::Tdg(q) => write!(f, "TDG {q}"),
            Gate::Rz(q, t) => write!(f, "RZ {q} {t:?}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    /// Global phase in radians; bookkeeping only.
    pub phase: f64,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn extend(&mut self, other: &Circuit) {
        self.gates.extend_from_slice(&other.gates);
        self.phase += other.phase;
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    /// Product of the gate matrices times `e^{i phase}`.
    pub fn evaluate(&self) -> Result<Mat4> {
        let mut m = Mat4::identity();
        for g in &self.gates {
            m = g.matrix()? * m;
        }
        Ok(m.scale(cis(self.phase)))
    }

    /// Text form: a `# qubits=2` header, an optional `# phase=` line, then
    /// one gate per line.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# qubits=2\n");
        if self.phase != 0.0 {
            s.push_str(&format!("# phase={:?}\n", self.phase));
        }
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut circuit = Circuit::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| Error::CircuitParse { line, message };
            let trimmed = raw.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(q) = comment.strip_prefix("qubits=") {
                    if q.trim() != "2" {
                        return Err(err(format!("unsupported qubit count {q}")));
                    }
                } else if let Some(p) = comment.strip_prefix("phase=") {
                    circuit.phase = p.trim().parse().map_err(|_| err(format!("bad phase {p:?}")))?;
                }
                continue;
            }
            let body = trimmed.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let qubit = |t: &str| -> Result<usize> {
                t.parse::<usize>().map_err(|_| err(format!("bad qubit index {t:?}")))
            };
            let arity = |n: usize| -> Result<()> {
                if toks.len() == n + 1 {
                    Ok(())
                } else {
                    Err(err(format!("{} expects {n} operands", toks[0])))
                }
            };
            let gate = match toks[0].to_ascii_uppercase().as_str() {
                "H" | "S" | "SDG" | "T" | "TDG" => {
                    arity(1)?;
                    let q = qubit(toks[1])?;
                    match toks[0].to_ascii_uppercase().as_str() {
                        "H" => Gate::H(q),
                        "S" => Gate::S(q),
                        "SDG" => Gate::Sdg(q),
                        "T" => Gate::T(q),
                        _ => Gate::Tdg(q),
                    }
                }
                "RZ" => {
                    arity(2)?;
                    let t: f64 = toks[2].parse().map_err(|_| err(format!("bad angle {:?}", toks[2])))?;
                    Gate::Rz(qubit(toks[1])?, t)
                }
                "CNOT" => {
                    arity(2)?;
                    Gate::Cnot { control: qubit(toks[1])?, target: qubit(toks[2])? }
                }
                other => return Err(err(format!("unknown gate {other:?}"))),
            };
            gate.validate().map_err(|e| err(e.to_string()))?;
            circuit.gates.push(gate);
        }
        Ok(circuit)
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Circuit::from_text(s)
    }
}

/// Euler angles with `V = e^{i phase} Rz(α)·H·Rz(β)·H·Rz(γ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerZxz {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub phase: f64,
}

impl EulerZxz {
    pub fn matrix(&self) -> Mat2 {
        let h = hadamard();
        (rz(self.alpha) * h * rz(self.beta) * h * rz(self.gamma)).scale(cis(self.phase))
    }

    /// Gates on qubit `q` in application order, dropping zero rotations.
    pub fn gates(&self, q: usize) -> Vec<Gate> {
        let mut out = Vec::new();
        let rot = |t: f64, out: &mut Vec<Gate>| {
            if t != 0.0 {
                out.push(Gate::Rz(q, t));
            }
        };
        if self.beta == 0.0 {
            rot(self.alpha + self.gamma, &mut out);
            if let Some(Gate::Rz(_, t)) = out.last_mut() {
                *t = wrap_angle(*t);
            }
            return out;
        }
        rot(self.gamma, &mut out);
        out.push(Gate::H(q));
        rot(self.beta, &mut out);
        out.push(Gate::H(q));
        rot(self.alpha, &mut out);
        out
    }
}

/// ZXZ Euler decomposition of a 2×2 unitary. When the middle angle is `0`
/// or `π`, `γ` is set to zero.
pub fn euler_zxz(v: &Mat2) -> EulerZxz {
    let det = v.det();
    let w = v.scale(det.sqrt().inv());
    let (a, b) = (w[(0, 0)], w[(0, 1)]);
    let beta = 2.0 * b.norm().atan2(a.norm());
    let ib = c(0.0, 1.0) * b;
    let (alpha, gamma) = if beta <= GIMBAL_TOL {
        (-2.0 * a.arg(), 0.0)
    } else if PI - beta <= GIMBAL_TOL {
        (-2.0 * ib.arg(), 0.0)
    } else {
        let sum = -2.0 * a.arg();
        let diff = -2.0 * ib.arg();
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    let beta = if beta <= GIMBAL_TOL { 0.0 } else if PI - beta <= GIMBAL_TOL { PI } else { beta };
    let mut e = EulerZxz { alpha: wrap_angle(alpha), beta: wrap_angle(beta), gamma: wrap_angle(gamma), phase: 0.0 };
    e.phase = wrap_angle(optimal_phase(v, &e.matrix()));
    e
}

/// `CNOT · (1 ⊗ Rz(θ)) · CNOT = exp(−iθ/2 Z⊗Z)`.
pub fn synth_zz(theta: f64) -> Circuit {
    Circuit {
        gates: vec![
            Gate::Cnot { control: 0, target: 1 },
            Gate::Rz(1, wrap_angle(theta)),
            Gate::Cnot { control: 0, target: 1 },
        ],
        phase: 0.0,
    }
}

/// Nonlocal core with `n` CNOTs for point `a`, up to single-qubit gates.
fn template(a: &NonlocalPoint, n: u8) -> Circuit {
    let cx = |control, target| Gate::Cnot { control, target };
    let gates = match n {
        0 => vec![],
        1 => vec![cx(0, 1)],
        2 => vec![
            cx(0, 1),
            Gate::H(0),
            Gate::Rz(0, wrap_angle(-a.a1)),
            Gate::H(0),
            Gate::Rz(1, wrap_angle(-a.a2)),
            cx(0, 1),
        ],
        _ => vec![
            cx(0, 1),
            Gate::H(0),
            Gate::S(0),
            Gate::Rz(0, wrap_angle(-a.a2)),
            Gate::Rz(1, wrap_angle(-a.a1)),
            cx(0, 1),
            Gate::Rz(1, wrap_angle(a.a3)),
            Gate::H(1),
            cx(1, 0),
            Gate::Sdg(0),
            Gate::H(0),
            Gate::S(1),
            Gate::H(1),
        ],
    };
    Circuit { gates, phase: 0.0 }
}

/// Minimal-CNOT circuit for an arbitrary two-qubit unitary.
pub fn synth_general(u: &Mat4) -> Result<Circuit> {
    let kak = kak_decompose(u)?;
    let n = min_cnot_count(&kak.a);
    let core = template(&kak.a, n);
    let m = core.evaluate()?;
    // `m` is locally equivalent to the same core; its own dressings are
    // undone on either side.
    let w = kak_with_target(&m, kak.a, 1e-6)?;
    let pre0 = euler_zxz(&(w.v3.adjoint() * kak.v3));
    let pre1 = euler_zxz(&(w.v4.adjoint() * kak.v4));
    let post0 = euler_zxz(&(kak.v1 * w.v1.adjoint()));
    let post1 = euler_zxz(&(kak.v2 * w.v2.adjoint()));

    let mut out = Circuit::new();
    out.gates.extend(pre0.gates(0));
    out.gates.extend(pre1.gates(1));
    out.extend(&core);
    out.gates.extend(post0.gates(0));
    out.gates.extend(post1.gates(1));
    let rebuilt = out.evaluate()?;
    out.phase = wrap_angle(optimal_phase(u, &rebuilt));
    let residual = phase_distance(u, &out.evaluate()?);
    if residual > SYNTH_TOL {
        return Err(Error::SynthesisResidual { residual });
    }
    Ok(out)
}

/// Two-CNOT circuit for `R_IV(χ)` with braid angle `φ1`.
pub fn synth_riv(phi1: f64, chi: f64) -> Circuit {
    let h = wrap_angle(phi1 / 2.0);
    let cx = Gate::Cnot { control: 0, target: 1 };
    Circuit {
        gates: vec![
            Gate::Rz(0, h),
            Gate::Rz(1, h),
            Gate::S(0),
            Gate::H(0),
            Gate::H(1),
            cx,
            Gate::Rz(1, wrap_angle(2.0 * chi)),
            cx,
            Gate::H(0),
            Gate::H(1),
            Gate::Sdg(0),
            Gate::Rz(0, -h),
            Gate::Rz(1, -h),
        ],
        phase: 0.0,
    }
}

pub fn verify_circuit(c: &Circuit, target: &Mat4) -> Result<f64> {
    Ok(phase_distance(&c.evaluate()?, target))
}
