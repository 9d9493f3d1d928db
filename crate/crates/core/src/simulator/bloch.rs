//! Single-sphere charged-particle machine.
//!
//! A state is a point `v(r, theta, phi)` of the unit ball: surface points are
//! pure states, interior points mixed ones. Measuring along a direction `u`
//! places random charges `q1`, `q2 = Q - q1` on the two ends of the diameter
//! along `u`; the particle sticks to the end that pulls harder. With `theta`
//! the angle between `v` and `u` the distances are `2 sin(theta/2)` and
//! `2 cos(theta/2)`, so the outcome is "up" exactly when
//! `q1 / Q > sin^2(theta/2)`. Coulomb's constant and the charge magnitudes
//! cancel; only `u1 = q1 / Q` is ever drawn.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rng::Randomness;
use super::transcript::MeasurementTranscript;
use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-9;
const MATRIX_TOLERANCE: f64 = 1e-12;

/// Point of the Bloch ball in spherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    r: f64,
    theta: f64,
    phi: f64,
}

impl BlochPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r.is_finite() && (0.0..=1.0).contains(&r)) {
            return Err(Error::domain(format!("r must lie in [0, 1], got {r}")));
        }
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(Error::domain(format!("theta must lie in [0, pi], got {theta}")));
        }
        if !(phi.is_finite() && (0.0..TAU).contains(&phi)) {
            return Err(Error::domain(format!("phi must lie in [0, 2pi), got {phi}")));
        }
        Ok(Self { r, theta, phi })
    }

    /// Surface point in direction `(theta, phi)`.
    pub fn pure(theta: f64, phi: f64) -> Result<Self> {
        Self::new(1.0, theta, phi)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn is_pure(&self) -> bool {
        self.r == 1.0
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.r * st * cp, self.r * st * sp, self.r * ct]
    }
}

/// A measurement direction; unit length within `1e-9`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector([f64; 3]);

impl UnitVector {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::domain(format!("direction must be a unit vector, |u| = {norm}")));
        }
        Ok(Self(v))
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self([st * cp, st * sp, ct])
    }

    pub fn north() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinOutcome {
    Up,
    Down,
}

/// 2x2 complex density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub [[Complex64; 2]; 2]);

impl DensityMatrix {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn is_hermitian(&self) -> bool {
        let m = &self.0;
        m[0][0].im.abs() <= MATRIX_TOLERANCE
            && m[1][1].im.abs() <= MATRIX_TOLERANCE
            && (m[0][1] - m[1][0].conj()).norm() <= MATRIX_TOLERANCE
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    /// Hermitian, unit trace, positive semidefinite (all within `1e-12`).
    pub fn is_valid(&self) -> bool {
        let tr = self.trace();
        self.is_hermitian()
            && (tr.re - 1.0).abs() <= MATRIX_TOLERANCE
            && tr.im.abs() <= MATRIX_TOLERANCE
            && self.eigenvalues()[0] >= -MATRIX_TOLERANCE
    }
}

/// `1/2 [[1 + r cos(theta), r sin(theta) e^{-i phi}], [r sin(theta) e^{i phi}, 1 - r cos(theta)]]`.
pub fn bloch_to_density(point: BlochPoint) -> DensityMatrix {
    let (st, ct) = point.theta.sin_cos();
    let off = 0.5 * point.r * st;
    DensityMatrix([
        [Complex64::new(0.5 * (1.0 + point.r * ct), 0.0), Complex64::from_polar(off, -point.phi)],
        [Complex64::from_polar(off, point.phi), Complex64::new(0.5 * (1.0 - point.r * ct), 0.0)],
    ])
}

/// Angle between a surface state and a measurement direction, in `[0, pi]`.
pub fn angle_between(v: BlochPoint, u: UnitVector) -> Result<f64> {
    if (v.r - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::domain(format!("state must lie on the surface, r = {}", v.r)));
    }
    let a = v.cartesian();
    let b = u.0;
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    Ok(dot.clamp(-1.0, 1.0).acos())
}

/// Outcome law for a known charge fraction: up iff `u1 >= sin^2(theta/2)`.
///
/// The comparison is inclusive so that `theta = 0` is up for every draw;
/// equality has probability zero otherwise.
pub fn spin_outcome(theta: f64, charge_fraction: f64) -> SpinOutcome {
    let threshold = (0.5 * theta).sin().powi(2);
    if charge_fraction >= threshold && threshold < 1.0 {
        SpinOutcome::Up
    } else {
        SpinOutcome::Down
    }
}

/// Measures a pure state along `direction` with one random charge split.
pub fn spin_measurement(
    state: BlochPoint,
    direction: UnitVector,
    rng: &mut impl Randomness,
) -> Result<MeasurementTranscript<SpinOutcome>> {
    if !state.is_pure() {
        return Err(Error::UnsupportedState(format!(
            "the sphere machine measures surface states only (r = {})",
            state.r
        )));
    }
    let theta = angle_between(state, direction)?;
    let u1 = rng.uniform();
    Ok(MeasurementTranscript::machine(spin_outcome(theta, u1), u1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::rng::{RandomSource, Scripted};
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-15 && (a.im - im).abs() < 1e-15
    }

    #[test]
    fn density_examples() {
        let center = bloch_to_density(BlochPoint::new(0.0, 1.0, 2.0).unwrap());
        assert!(close(center.entry(0, 0), 0.5, 0.0));
        assert!(close(center.entry(1, 1), 0.5, 0.0));
        assert!(close(center.entry(0, 1), 0.0, 0.0));
        assert!(close(center.entry(1, 0), 0.0, 0.0));

        let north = bloch_to_density(BlochPoint::pure(0.0, 0.0).unwrap());
        assert!(close(north.entry(0, 0), 1.0, 0.0));
        assert!(close(north.entry(1, 1), 0.0, 0.0));

        let plus = bloch_to_density(BlochPoint::pure(FRAC_PI_2, 0.0).unwrap());
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!(close(plus.entry(i, j), 0.5, 0.0), "({i},{j}) = {}", plus.entry(i, j));
        }
    }

    #[test]
    fn density_invariants_over_the_ball() {
        for i in 0..=10 {
            for j in 0..=12 {
                for k in 0..12 {
                    let p = BlochPoint::new(i as f64 / 10.0, PI * j as f64 / 12.0, TAU * k as f64 / 12.0).unwrap();
                    let rho = bloch_to_density(p);
                    assert!(rho.is_valid(), "{p:?}");
                    // eigenvalues (1 +- r)/2
                    let ev = rho.eigenvalues();
                    assert!((ev[0] - 0.5 * (1.0 - p.r())).abs() < 1e-12);
                    assert!((ev[1] - 0.5 * (1.0 + p.r())).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_points_and_directions() {
        assert!(BlochPoint::new(1.1, 0.0, 0.0).is_err());
        assert!(BlochPoint::new(0.5, 4.0, 0.0).is_err());
        assert!(BlochPoint::new(0.5, 1.0, TAU).is_err());
        assert!(UnitVector::new([1.0, 1.0, 0.0]).is_err());
        let interior = BlochPoint::new(0.5, 0.0, 0.0).unwrap();
        assert!(angle_between(interior, UnitVector::north()).is_err());
        let mut rng = RandomSource::new(1);
        assert!(matches!(
            spin_measurement(interior, UnitVector::north(), &mut rng),
            Err(Error::UnsupportedState(_))
        ));
    }

    #[test]
    fn angle_examples() {
        let north = BlochPoint::pure(0.0, 0.0).unwrap();
        assert_eq!(angle_between(north, UnitVector::north()).unwrap(), 0.0);
        let south = UnitVector::new([0.0, 0.0, -1.0]).unwrap();
        assert!((angle_between(north, south).unwrap() - PI).abs() < 1e-15);
        let east = UnitVector::new([1.0, 0.0, 0.0]).unwrap();
        assert!((angle_between(north, east).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn spin_examples() {
        let north = UnitVector::north();
        let along = BlochPoint::pure(0.0, 0.0).unwrap();
        let opposite = BlochPoint::pure(PI, 0.0).unwrap();
        let equator = BlochPoint::pure(FRAC_PI_2, 0.0).unwrap();

        let t = spin_measurement(along, north, &mut Scripted::uniforms([0.5])).unwrap();
        assert_eq!(t.outcome, SpinOutcome::Up);
        assert_eq!(t.charge_fraction(), Some(0.5));

        let t = spin_measurement(opposite, north, &mut Scripted::uniforms([0.5])).unwrap();
        assert_eq!(t.outcome, SpinOutcome::Down);

        let t = spin_measurement(equator, north, &mut Scripted::uniforms([0.7])).unwrap();
        assert_eq!(t.outcome, SpinOutcome::Up);

        // endpoints are deterministic for every draw
        assert_eq!(spin_outcome(0.0, 0.0), SpinOutcome::Up);
        assert_eq!(spin_outcome(PI, 1.0 - f64::EPSILON), SpinOutcome::Down);
    }
}
