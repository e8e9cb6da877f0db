//! JSON gate specifications.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use ybgate::baxterize::{build_yb, Kind, YbSpec};
use ybgate::braid::{build_braid, BraidSpec, Family};
use ybgate::linalg::{c, Mat, Mat4, ONE, ZERO};
use ybgate::synth::cnot_matrix;

use crate::CliError;

/// Largest accepted unitarity residual for matrix input.
pub const UNITARITY_TOL: f64 = 1e-6;

/// A radian value, written either as a number or as a π-multiple string
/// such as `"pi/2"`, `"-3pi/4"` or `"0.25*pi"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleRepr", into = "f64")]
pub struct Angle(pub f64);

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Num(f64),
    Str(String),
}

impl TryFrom<AngleRepr> for Angle {
    type Error = String;

    fn try_from(r: AngleRepr) -> Result<Self, String> {
        match r {
            AngleRepr::Num(x) => Ok(Angle(x)),
            AngleRepr::Str(s) => s.parse(),
        }
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect::<String>().to_ascii_lowercase();
        let bad = || format!("cannot parse angle {s:?}");
        let Some(pos) = t.find("pi") else {
            let x: f64 = t.parse().map_err(|_| bad())?;
            return if x.is_finite() { Ok(Angle(x)) } else { Err(bad()) };
        };
        let (head, tail) = (&t[..pos], &t[pos + 2..]);
        let head = head.strip_suffix('*').unwrap_or(head);
        let coef: f64 = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse().map_err(|_| bad())?,
        };
        let den: f64 = match tail {
            "" => 1.0,
            t => t.strip_prefix('/').ok_or_else(bad)?.parse().map_err(|_| bad())?,
        };
        if den == 0.0 || !coef.is_finite() || !den.is_finite() {
            return Err(bad());
        }
        Ok(Angle(coef * PI / den))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedGate {
    Cnot,
    Swap,
    Iswap,
    Identity,
}

impl NamedGate {
    pub fn matrix(self) -> Mat4 {
        match self {
            NamedGate::Identity => Mat4::identity(),
            NamedGate::Cnot => cnot_matrix(0, 1),
            NamedGate::Swap => cnot_matrix(0, 1) * cnot_matrix(1, 0) * cnot_matrix(0, 1),
            NamedGate::Iswap => {
                let i = c(0.0, 1.0);
                Mat([[ONE, ZERO, ZERO, ZERO], [ZERO, ZERO, i, ZERO], [ZERO, i, ZERO, ZERO], [ZERO, ZERO, ZERO, ONE]])
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidInput {
    pub family: String,
    pub phi: Vec<Angle>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YbInput {
    pub family: String,
    #[serde(default)]
    pub kind: Option<u8>,
    #[serde(default)]
    pub mu: Option<Angle>,
    #[serde(default)]
    pub chi: Option<Angle>,
    pub phi: Vec<Angle>,
}

/// Exactly one of the four fields must be present.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<NamedGate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<BraidInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yb: Option<YbInput>,
}

/// A parsed specification together with its matrix.
#[derive(Clone, Debug)]
pub struct Gate {
    pub source: Source,
    pub matrix: Mat4,
}

#[derive(Clone, Debug)]
pub enum Source {
    Matrix,
    Named(NamedGate),
    Braid(BraidSpec),
    Yb(YbSpec),
}

impl Source {
    pub fn tag(&self) -> &'static str {
        match self {
            Source::Matrix => "matrix",
            Source::Named(_) => "named",
            Source::Braid(_) => "braid",
            Source::Yb(_) => "yb",
        }
    }
}

fn family(s: &str) -> Result<Family, CliError> {
    s.parse::<Family>().map_err(|e| CliError::Input(e.to_string()))
}

fn angles(v: &[Angle]) -> Vec<f64> {
    v.iter().map(|a| a.0).collect()
}

impl GateSpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid gate specification: {e}")))
    }

    pub fn resolve(&self) -> Result<Gate, CliError> {
        let present = [self.matrix.is_some(), self.named.is_some(), self.braid.is_some(), self.yb.is_some()];
        if present.iter().filter(|&&p| p).count() != 1 {
            return Err(CliError::Input(
                "specification needs exactly one of `matrix`, `named`, `braid`, `yb`".into(),
            ));
        }
        if let Some(rows) = &self.matrix {
            return Ok(Gate { source: Source::Matrix, matrix: matrix_from_rows(rows)? });
        }
        if let Some(n) = self.named {
            return Ok(Gate { source: Source::Named(n), matrix: n.matrix() });
        }
        if let Some(b) = &self.braid {
            let spec = BraidSpec::new(family(&b.family)?, angles(&b.phi))?;
            let matrix = build_braid(&spec);
            return Ok(Gate { source: Source::Braid(spec), matrix });
        }
        let y = self.yb.as_ref().expect("one field present");
        let spec = yb_spec(y)?;
        let matrix = build_yb(&spec)?;
        Ok(Gate { source: Source::Yb(spec), matrix })
    }
}

pub fn yb_spec(y: &YbInput) -> Result<YbSpec, CliError> {
    let fam = family(&y.family)?;
    let kind = Kind::from_number(y.kind.unwrap_or(1))?;
    let spectral = match (fam, y.mu, y.chi) {
        (Family::IV, None, Some(chi)) => chi.0,
        (Family::IV, _, _) => return Err(CliError::Input("family IV takes `chi` (and no `mu`)".into())),
        (_, Some(mu), None) => mu.0,
        _ => return Err(CliError::Input(format!("family {fam} takes `mu` (and no `chi`)"))),
    };
    Ok(YbSpec::new(fam, kind, spectral, angles(&y.phi))?)
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<Mat4, CliError> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(CliError::Input("matrix must be 4x4 of [re, im] pairs".into()));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Input("matrix entries must be finite".into()));
    }
    let m = Mat4::from_fn(|r, s| c(rows[r][s][0], rows[r][s][1]));
    let residual = m.unitarity_residual();
    if residual > UNITARITY_TOL {
        return Err(CliError::NotUnitary(residual));
    }
    Ok(m)
}

pub fn matrix_to_rows(m: &Mat4) -> Vec<Vec<[f64; 2]>> {
    m.0.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn angle_strings() {
        let cases = [
            ("pi", PI),
            ("-pi", -PI),
            ("pi/2", FRAC_PI_2),
            ("-3pi/4", -3.0 * FRAC_PI_4),
            ("3*pi/4", 3.0 * FRAC_PI_4),
            ("0.25 * PI", FRAC_PI_4),
            ("1.5", 1.5),
        ];
        for (s, want) in cases {
            assert_eq!(s.parse::<Angle>().unwrap().0, want, "{s}");
        }
        for s in ["", "pi/0", "2pi/x", "nan", "inf", "pie", "pi2"] {
            assert!(s.parse::<Angle>().is_err(), "{s}");
        }
    }

    #[test]
    fn spec_requires_exactly_one_field() {
        assert!(GateSpecFile::parse("{}").unwrap().resolve().is_err());
        assert!(GateSpecFile::parse(r#"{"named":"cnot","braid":{"family":"IV","phi":[0]}}"#)
            .unwrap()
            .resolve()
            .is_err());
        assert!(GateSpecFile::parse(r#"{"gate":"cnot"}"#).is_err());
        assert!(GateSpecFile::parse(r#"{"named":"toffoli"}"#).is_err());
    }

    #[test]
    fn named_gates_are_unitary() {
        for n in [NamedGate::Cnot, NamedGate::Swap, NamedGate::Iswap, NamedGate::Identity] {
            assert!(n.matrix().unitarity_residual() < 1e-15);
        }
    }

    #[test]
    fn matrix_round_trip_and_rejection() {
        let m = NamedGate::Iswap.matrix();
        assert_eq!(matrix_from_rows(&matrix_to_rows(&m)).unwrap(), m);
        let mut rows = matrix_to_rows(&m);
        rows[0][0] = [2.0, 0.0];
        assert!(matches!(matrix_from_rows(&rows), Err(CliError::NotUnitary(_))));
        rows[0][0] = [f64::NAN, 0.0];
        assert!(matches!(matrix_from_rows(&rows), Err(CliError::Input(_))));
    }

    #[test]
    fn yb_parameter_names_follow_family() {
        let ok = r#"{"yb":{"family":"IV","chi":"pi/8","phi":[0.5]}}"#;
        assert!(GateSpecFile::parse(ok).unwrap().resolve().is_ok());
        let bad = r#"{"yb":{"family":"IV","mu":0.3,"phi":[0.5]}}"#;
        assert!(GateSpecFile::parse(bad).unwrap().resolve().is_err());
        let bad = r#"{"yb":{"family":"II","kind":2,"chi":0.3,"phi":[0,1,2]}}"#;
        assert!(GateSpecFile::parse(bad).unwrap().resolve().is_err());
    }
}
