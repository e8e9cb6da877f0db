//! Entangling-power landscapes over `(φ, μ)` grids.

use std::fmt::Write as _;

use rayon::prelude::*;
use ybgate::baxterize::{yb_ep, yb_nonlocal_closed, Kind, YbSpec};
use ybgate::braid::Family;

use crate::input::Angle;
use crate::CliError;

pub const CSV_HEADER: &str = "family,kind,phi,mu,a1,a2,a3,ep";

/// Parse a grid: a comma-separated list of angles, or `start:stop:n` for
/// `n` evenly spaced points including both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(CliError::Input("empty grid".into()));
    }
    let angle = |t: &str| t.parse::<Angle>().map(|a| a.0).map_err(CliError::Input);
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let (a, b) = (angle(parts[0])?, angle(parts[1])?);
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad point count in grid {s:?}")))?;
        return match n {
            0 => Err(CliError::Input("empty grid".into())),
            1 => Ok(vec![a]),
            _ => Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()),
        };
    }
    if parts.len() != 1 {
        return Err(CliError::Input(format!("bad grid {s:?}")));
    }
    s.split(',').map(|t| angle(t.trim())).collect()
}

/// Gate at one grid point. Families I and II use `φ1 = 0, φ2 = φ3 = φ`
/// (so the derived angle is `φ` and `ω = 0`); family III uses
/// `(φ1, φ2) = (φ, 0)`; family IV reads the `mu` column as `χ`.
pub fn grid_spec(family: Family, kind: Kind, phi: f64, mu: f64) -> Result<YbSpec, CliError> {
    let angles = match family {
        Family::I | Family::II => vec![0.0, phi, phi],
        Family::III => vec![phi, 0.0],
        Family::IV => vec![phi],
    };
    Ok(YbSpec::new(family, kind, mu, angles)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub phi: f64,
    pub mu: f64,
    /// `None` at singular points.
    pub point: Option<([f64; 3], f64)>,
}

pub fn sweep(family: Family, kind: Kind, phis: &[f64], mus: &[f64]) -> Result<Vec<Row>, CliError> {
    if phis.is_empty() || mus.is_empty() {
        return Err(CliError::Input("empty grid".into()));
    }
    // Validate once so per-point failures can only be singularities.
    grid_spec(family, kind, phis[0], mus[0])?;
    let cells: Vec<(f64, f64)> = phis.iter().flat_map(|&p| mus.iter().map(move |&m| (p, m))).collect();
    Ok(cells
        .par_iter()
        .map(|&(phi, mu)| {
            let spec = grid_spec(family, kind, phi, mu).expect("validated");
            let point = match (yb_nonlocal_closed(&spec), yb_ep(&spec)) {
                (Ok(a), Ok(ep)) => Some((a.to_array(), ep)),
                _ => None,
            };
            Row { phi, mu, point }
        })
        .collect())
}

pub fn to_csv(family: Family, kind: Kind, rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        write!(out, "{family},{kind},{:.16e},{:.16e}", r.phi, r.mu).unwrap();
        match r.point {
            Some((a, ep)) => write!(out, ",{:.16e},{:.16e},{:.16e},{:.16e}", a[0], a[1], a[2], ep).unwrap(),
            None => out.push_str(",nan,nan,nan,nan"),
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0, pi/2,1").unwrap(), vec![0.0, FRAC_PI_2, 1.0]);
        assert_eq!(parse_grid("0:pi:3").unwrap(), vec![0.0, FRAC_PI_2, PI]);
        assert_eq!(parse_grid("0.5:9:1").unwrap(), vec![0.5]);
        for bad in ["", "  ", "0:1:0", "0:1", "a,b", "0:1:x"] {
            assert!(parse_grid(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn landscape_points() {
        let rows = sweep(Family::I, Kind::First, &[FRAC_PI_2], &[0.0, 8.0]).unwrap();
        assert_eq!(rows[0].point.unwrap().1, 0.0);
        assert!((rows[1].point.unwrap().1 - 2.0 / 9.0).abs() < 1e-6);
        let chis = parse_grid("-1:2:31").unwrap();
        let rows = sweep(Family::IV, Kind::First, &[0.4], &chis).unwrap();
        for r in &rows {
            let want = 2.0 / 9.0 * (2.0 * r.mu).sin().powi(2);
            assert!((r.point.unwrap().1 - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_are_phi_major_and_round_trip() {
        let phis = [0.1, 0.7, 2.0];
        let mus = [-1.0, 0.0, 0.5, 3.0];
        let rows = sweep(Family::III, Kind::Third, &phis, &mus).unwrap();
        let csv = to_csv(Family::III, Kind::Third, &rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + phis.len() * mus.len());
        for (k, line) in lines[1..].iter().enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!((f[0], f[1]), ("III", "3"));
            let vals: Vec<f64> = f[2..].iter().map(|t| t.parse().unwrap()).collect();
            assert_eq!(vals[0], phis[k / mus.len()]);
            assert_eq!(vals[1], mus[k % mus.len()]);
            let (a, ep) = rows[k].point.unwrap();
            assert_eq!(&vals[2..5], &a);
            assert_eq!(vals[5], ep);
        }
    }

    #[test]
    fn singular_points_are_nan() {
        let rows = sweep(Family::I, Kind::Second, &[0.0], &[0.0]).unwrap();
        assert!(rows[0].point.is_none());
        assert!(to_csv(Family::I, Kind::Second, &rows).ends_with(",nan,nan,nan,nan\n"));
    }
}
