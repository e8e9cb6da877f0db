//! The four X-type unitary braid gates, the braid relation and their
//! closed-form invariants.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, cis, Kron, Mat, Mat2, Mat4, Mat8, ZERO};
use crate::weyl::{canonicalize, NonlocalPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    I,
    II,
    III,
    IV,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::I, Family::II, Family::III, Family::IV];

    pub fn name(self) -> &'static str {
        match self {
            Family::I => "I",
            Family::II => "II",
            Family::III => "III",
            Family::IV => "IV",
        }
    }

    /// Number of braid angles the family takes.
    pub fn arity(self) -> usize {
        match self {
            Family::I => 4,
            Family::II => 3,
            Family::III => 2,
            Family::IV => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Family::I),
            "II" | "2" => Ok(Family::II),
            "III" | "3" => Ok(Family::III),
            "IV" | "4" => Ok(Family::IV),
            other => Err(Error::InvalidParameters(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BraidSpec {
    family: Family,
    phi: Vec<f64>,
}

impl BraidSpec {
    pub fn new(family: Family, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != family.arity() {
            return Err(Error::ParameterCount {
                family: family.name(),
                expected: family.arity(),
                got: phi.len(),
            });
        }
        if phi.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameters("non-finite angle".into()));
        }
        Ok(Self { family, phi })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }
}

/// Combinations of braid angles that control the geometry of each family.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct DerivedAngles {
    /// `φ_{I,1..3}` for family I.
    pub phi_i: Option<[f64; 3]>,
    /// `φ_{II,1..2}` for family II.
    pub phi_ii: Option<[f64; 2]>,
    /// `ω = (φ2 − φ3)/2` for families I and II.
    pub omega: Option<f64>,
}

pub fn derived_angles(spec: &BraidSpec) -> DerivedAngles {
    let p = &spec.phi;
    match spec.family {
        Family::I => DerivedAngles {
            phi_i: Some([
                0.5 * (-p[0] - p[1] + p[2] + p[3]),
                0.5 * (-p[0] + p[1] - p[2] + p[3]),
                0.5 * (-p[0] + p[1] + p[2] - p[3]),
            ]),
            phi_ii: None,
            omega: Some(0.5 * (p[1] - p[2])),
        },
        Family::II => DerivedAngles {
            phi_i: None,
            phi_ii: Some([0.5 * (-p[1] + p[2]), 0.5 * (-p[1] + 2.0 * p[0] - p[2])]),
            omega: Some(0.5 * (p[1] - p[2])),
        },
        _ => DerivedAngles::default(),
    }
}

pub fn build_braid(spec: &BraidSpec) -> Mat4 {
    let p = &spec.phi;
    match spec.family {
        Family::I => Mat([
            [cis(p[0]), ZERO, ZERO, ZERO],
            [ZERO, ZERO, cis(p[1]), ZERO],
            [ZERO, cis(p[2]), ZERO, ZERO],
            [ZERO, ZERO, ZERO, cis(p[3])],
        ]),
        Family::II => Mat([
            [ZERO, ZERO, ZERO, cis(p[1])],
            [ZERO, cis(p[0]), ZERO, ZERO],
            [ZERO, ZERO, cis(p[0]), ZERO],
            [cis(p[2]), ZERO, ZERO, ZERO],
        ]),
        Family::III => {
            let (s, co) = p[0].sin_cos();
            let e = cis(p[1]);
            Mat([
                [c(co, 0.0), ZERO, ZERO, e * s],
                [ZERO, c(0.0, -s), c(-co, 0.0), ZERO],
                [ZERO, c(-co, 0.0), c(0.0, -s), ZERO],
                [-e.conj() * s, ZERO, ZERO, c(co, 0.0)],
            ])
        }
        Family::IV => {
            let r = c(FRAC_1_SQRT_2, 0.0);
            let e = cis(p[0]) * FRAC_1_SQRT_2;
            Mat([
                [r, ZERO, ZERO, e],
                [ZERO, r, r, ZERO],
                [ZERO, -r, r, ZERO],
                [-e.conj(), ZERO, ZERO, r],
            ])
        }
    }
}

/// `‖(B⊗1)(1⊗B)(B⊗1) − (1⊗B)(B⊗1)(1⊗B)‖_F`.
pub fn braid_residual(b: &Mat4) -> f64 {
    let id = Mat2::identity();
    let left: Mat8 = b.kron(&id);
    let right: Mat8 = id.kron(b);
    (left * right * left - right * left * right).frobenius_norm()
}

pub fn braid_nonlocal_closed(spec: &BraidSpec) -> NonlocalPoint {
    let third = match spec.family {
        Family::I => FRAC_PI_2 - derived_angles(spec).phi_i.expect("family I")[2],
        Family::II => FRAC_PI_2 - derived_angles(spec).phi_ii.expect("family II")[1],
        Family::III => FRAC_PI_2 - 2.0 * spec.phi[0],
        Family::IV => return canonicalize([FRAC_PI_2, 0.0, 0.0]),
    };
    canonicalize([FRAC_PI_2, FRAC_PI_2, third])
}

pub fn braid_ep_closed(spec: &BraidSpec) -> f64 {
    let s = match spec.family {
        Family::I => derived_angles(spec).phi_i.expect("family I")[2].sin(),
        Family::II => derived_angles(spec).phi_ii.expect("family II")[1].sin(),
        Family::III => (2.0 * spec.phi[0]).sin(),
        Family::IV => 1.0,
    };
    2.0 / 9.0 * s * s
}

/// Reduce an angle into `[0, 2π)`.
pub fn reduce_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI { 0.0 } else { r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{phase_distance, Mat2};
    use crate::weyl::tests::{cnot, pauli, swap};
    use crate::weyl::{entangling_power, extract_nonlocal};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(f: Family, phi: &[f64]) -> BraidSpec {
        BraidSpec::new(f, phi.to_vec()).unwrap()
    }

    fn random_spec(f: Family, rng: &mut ChaCha8Rng) -> BraidSpec {
        spec(f, &(0..f.arity()).map(|_| rng.random_range(0.0..2.0 * PI)).collect::<Vec<_>>())
    }

    #[test]
    fn parameter_count_is_checked() {
        assert!(matches!(BraidSpec::new(Family::I, vec![0.0; 3]), Err(Error::ParameterCount { got: 3, .. })));
        assert!(BraidSpec::new(Family::IV, vec![0.0]).is_ok());
        assert!(BraidSpec::new(Family::III, vec![f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn b_i_at_zero_is_swap() {
        assert_eq!(build_braid(&spec(Family::I, &[0.0; 4])), swap());
    }

    #[test]
    fn b_iv_at_zero() {
        let s = FRAC_1_SQRT_2;
        let want = Mat4::from_real([
            [s, 0.0, 0.0, s],
            [0.0, s, s, 0.0],
            [0.0, -s, s, 0.0],
            [-s, 0.0, 0.0, s],
        ]);
        assert!(build_braid(&spec(Family::IV, &[0.0])).max_abs_diff(&want) < 1e-16);
    }

    #[test]
    fn braid_relation_known_cases() {
        assert!(braid_residual(&swap()) < 1e-15);
        assert!(braid_residual(&cnot()) > 0.1);
    }

    #[test]
    fn all_families_are_unitary_x_type_braids() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in Family::ALL {
            for _ in 0..1000 {
                let b = build_braid(&random_spec(f, &mut rng));
                assert!(b.unitarity_residual() < 1e-12);
                assert!(braid_residual(&b) < 1e-10);
                for r in 0..4 {
                    for col in 0..4 {
                        if r != col && r + col != 3 {
                            assert_eq!(b.0[r][col], ZERO);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_numeric() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for f in Family::ALL {
            for _ in 0..1000 {
                let s = random_spec(f, &mut rng);
                let b = build_braid(&s);
                let a = extract_nonlocal(&b).unwrap();
                assert!(a.chamber_dist(&braid_nonlocal_closed(&s)) < 1e-7, "{f} {s:?}");
                assert!((entangling_power(&b).unwrap() - braid_ep_closed(&s)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn landmark_closed_forms() {
        let iv = braid_nonlocal_closed(&spec(Family::IV, &[1.3]));
        assert!(iv.dist(&NonlocalPoint::CNOT) < 1e-15);
        // φ_{I,3} = π/2 with φ = (0, π/2, π/2, 0).
        let s = spec(Family::I, &[0.0, FRAC_PI_2, FRAC_PI_2, 0.0]);
        assert!((derived_angles(&s).phi_i.unwrap()[2] - FRAC_PI_2).abs() < 1e-15);
        assert!(braid_nonlocal_closed(&s).dist(&NonlocalPoint::A2) < 1e-15);
        let s = spec(Family::III, &[0.0, 0.7]);
        assert!(braid_nonlocal_closed(&s).dist(&NonlocalPoint::A3) < 1e-15);
        assert!((braid_ep_closed(&spec(Family::IV, &[0.2])) - 2.0 / 9.0).abs() < 1e-16);
        assert!((braid_ep_closed(&spec(Family::III, &[PI / 4.0, 0.1])) - 2.0 / 9.0).abs() < 1e-16);
        assert!(braid_ep_closed(&spec(Family::I, &[0.3, 0.5, 0.1, 0.3])).abs() < 1e-16);
    }

    #[test]
    fn family_i_is_conjugate_of_family_ii() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ix = Mat2::identity().kron(&pauli(1));
        for _ in 0..100 {
            let p: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let b1 = build_braid(&spec(Family::I, &[p[0], p[1], p[2], p[0]]));
            let b2 = build_braid(&spec(Family::II, &p));
            assert!(b1.max_abs_diff(&(ix * b2 * ix)) <= 1e-12);
        }
    }

    #[test]
    fn b_i_swap_is_diagonal() {
        let b = build_braid(&spec(Family::I, &[0.1, 0.2, 0.3, 0.4]));
        assert!((b * swap()).off_diagonal_norm() < 1e-15);
        let b = build_braid(&spec(Family::II, &[0.1, 0.2, 0.3]));
        let xx = pauli(1).kron(&pauli(1));
        assert!((b * swap() * xx).off_diagonal_norm() < 1e-15);
        assert!(phase_distance(&b, &b) < 1e-15);
    }

    proptest! {
        #[test]
        fn parameters_are_two_pi_periodic(p in proptest::collection::vec(-10.0f64..10.0, 4), k in -3i32..3) {
            for f in Family::ALL {
                let phi: Vec<f64> = p[..f.arity()].to_vec();
                let shifted: Vec<f64> = phi.iter().map(|x| x + 2.0 * PI * k as f64).collect();
                let a = build_braid(&spec(f, &phi));
                let b = build_braid(&spec(f, &shifted));
                prop_assert!(a.max_abs_diff(&b) < 1e-12);
                prop_assert!((0.0..2.0 * PI).contains(&reduce_angle(phi[0])));
            }
        }
    }
}
