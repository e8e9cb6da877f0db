//! The `analyze` report.

use serde::{Deserialize, Serialize};
use ybgate::baxterize::{ybe_residual, yb_nonlocal_closed};
use ybgate::braid::{braid_nonlocal_closed, braid_residual, build_braid};
use ybgate::classify::{classify, SpecRef, Verdicts};
use ybgate::weyl::{
    chamber_location, entangling_power_at, entangling_power_mc, extract_nonlocal, min_cnot_count,
};

use crate::input::{Gate, Source};
use crate::CliError;

/// Distance within which a point is reported on a vertex, edge or face.
pub const LOCATION_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictsOut {
    pub clifford: bool,
    pub matchgate: bool,
    pub dual_unitary: bool,
}

impl From<Verdicts> for VerdictsOut {
    fn from(v: Verdicts) -> Self {
        Self { clifford: v.clifford, matchgate: v.matchgate, dual_unitary: v.dual_unitary }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Predicted {
    pub exact: VerdictsOut,
    pub table: VerdictsOut,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub clifford: bool,
    /// Images of `XI, ZI, IX, IZ`, or `null` where not a Pauli string.
    pub pauli_images: Vec<Option<String>>,
    pub matchgate: bool,
    pub off_x: f64,
    pub det_outer: [f64; 2],
    pub det_inner: [f64; 2],
    pub dual_unitary: bool,
    pub reshuffle_residual: f64,
    pub predicted: Option<Predicted>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub unitarity: f64,
    /// Braid relation of the braid gate behind the input, when there is one.
    pub braid: Option<f64>,
    /// Yang-Baxter equation at the probe `(mu, nu)`, for `yb` input.
    pub ybe: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: String,
    pub nonlocal: [f64; 3],
    /// Closed-form nonlocal point, for braid and Yang-Baxter input.
    pub nonlocal_closed: Option<[f64; 3]>,
    pub location: String,
    pub entangling_power: f64,
    pub entangling_power_mc: Option<McEstimate>,
    pub min_cnot_count: u8,
    pub classification: Classification,
    pub residuals: Residuals,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub samples: usize,
    pub seed: u64,
}

pub struct AnalyzeOptions {
    /// Monte-Carlo seed; no estimate without one.
    pub seed: Option<u64>,
    pub samples: usize,
    pub mu: f64,
    pub nu: f64,
}

pub fn analyze(gate: &Gate, opts: &AnalyzeOptions) -> Result<Report, CliError> {
    let u = &gate.matrix;
    let a = extract_nonlocal(u)?;
    let spec = match &gate.source {
        Source::Braid(b) => Some(SpecRef::Braid(b)),
        Source::Yb(y) => Some(SpecRef::Yb(y)),
        _ => None,
    };
    let cls = classify(u, spec);
    let nonlocal_closed = match &gate.source {
        Source::Braid(b) => Some(braid_nonlocal_closed(b).to_array()),
        Source::Yb(y) => Some(yb_nonlocal_closed(y)?.to_array()),
        _ => None,
    };
    let braid = match &gate.source {
        Source::Braid(b) => Some(braid_residual(&build_braid(b))),
        Source::Yb(y) => Some(braid_residual(&build_braid(&y.braid_spec()))),
        Source::Matrix | Source::Named(_) => Some(braid_residual(u)),
    };
    let ybe = match &gate.source {
        Source::Yb(y) => Some(ybe_residual(y, opts.mu, opts.nu)?),
        _ => None,
    };
    let entangling_power_mc = match opts.seed {
        Some(seed) => Some(McEstimate { value: entangling_power_mc(u, opts.samples, seed)?, samples: opts.samples, seed }),
        None => None,
    };
    let cplx = |z: ybgate::linalg::C64| [z.re, z.im];
    Ok(Report {
        input: gate.source.tag().into(),
        nonlocal: a.to_array(),
        nonlocal_closed,
        location: chamber_location(&a, LOCATION_TOL).name().into(),
        entangling_power: entangling_power_at(&a),
        entangling_power_mc,
        min_cnot_count: min_cnot_count(&a),
        classification: Classification {
            clifford: cls.clifford.is_clifford,
            pauli_images: cls.clifford.images.iter().map(|i| i.map(|p| p.to_string())).collect(),
            matchgate: cls.matchgate.is_matchgate,
            off_x: cls.matchgate.off_x,
            det_outer: cplx(cls.matchgate.det_outer),
            det_inner: cplx(cls.matchgate.det_inner),
            dual_unitary: cls.dual_unitary.is_dual_unitary,
            reshuffle_residual: cls.dual_unitary.residual,
            predicted: cls.predicted.map(|p| Predicted {
                exact: p.exact.into(),
                table: p.table.into(),
                boundary: p.boundary,
            }),
        },
        residuals: Residuals { unitarity: u.unitarity_residual(), braid, ybe },
    })
}
