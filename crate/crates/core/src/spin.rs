//! Singlet spin state and the two-spin correlation `<psi| s.a (x) s.b |psi> = -a.b`.
//!
//! Conventions: standard Pauli matrices, basis order `|00>, |01>, |10>, |11>`
//! with the first index belonging to the left tensor factor.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::geometry::UnitVector3;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Two-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    amplitudes: Vector4<Complex64>,
}

impl SpinState {
    pub fn amplitudes(&self) -> [Complex64; 4] {
        [0, 1, 2, 3].map(|i| self.amplitudes[i])
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SpinState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Computational basis state `|alpha beta>`.
    pub fn basis(alpha: usize, beta: usize) -> SpinState {
        let mut amplitudes = Vector4::from_element(C0);
        amplitudes[2 * alpha + beta] = C1;
        SpinState { amplitudes }
    }

    /// `<self| M |self>`, complex.
    pub fn expectation(&self, observable: &SpinObservable) -> Complex64 {
        self.amplitudes.dotc(&(observable.matrix * self.amplitudes))
    }
}

/// `(|01> - |10>)/sqrt(2)`.
pub fn singlet() -> SpinState {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    SpinState {
        amplitudes: Vector4::new(C0, h, -h, C0),
    }
}

/// The operator `sigma.a (x) sigma.b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinObservable {
    matrix: Matrix4<Complex64>,
}

impl SpinObservable {
    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

fn pauli_dot(n: &UnitVector3) -> Matrix2<Complex64> {
    let s1 = Matrix2::new(C0, C1, C1, C0);
    let s2 = Matrix2::new(C0, -I, I, C0);
    let s3 = Matrix2::new(C1, C0, C0, -C1);
    s1 * Complex64::from(n.x()) + s2 * Complex64::from(n.y()) + s3 * Complex64::from(n.z())
}

pub fn spin_observable(a: &UnitVector3, b: &UnitVector3) -> SpinObservable {
    let k = pauli_dot(a).kronecker(&pauli_dot(b));
    SpinObservable {
        matrix: Matrix4::from_fn(|i, j| k[(i, j)]),
    }
}

/// Closed form `-a.b`.
pub fn e_spin(a: &UnitVector3, b: &UnitVector3) -> f64 {
    -a.dot(b)
}

/// Singlet expectation of [`spin_observable`] by explicit linear algebra.
pub fn e_spin_matrix(a: &UnitVector3, b: &UnitVector3) -> f64 {
    let e = singlet().expectation(&spin_observable(a, b));
    debug_assert!(e.im.abs() < 1e-12, "imaginary part {}", e.im);
    e.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Rotation3, Vector3};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

    const H: f64 = FRAC_1_SQRT_2;

    fn random_unit(rng: &mut impl Rng) -> UnitVector3 {
        loop {
            let v: [f64; 3] = [0, 1, 2].map(|_| rng.random_range(-1.0..1.0));
            let n2 = v.iter().map(|c| c * c).sum::<f64>();
            if n2 > 1e-4 && n2 <= 1.0 {
                return UnitVector3::from_array(v).unwrap();
            }
        }
    }

    #[test]
    fn singlet_amplitudes() {
        let s = singlet().amplitudes();
        assert_eq!(s[0], C0);
        assert_eq!(s[1].re, FRAC_1_SQRT_2);
        assert_eq!(s[2].re, -FRAC_1_SQRT_2);
        assert_eq!(s[3], C0);
        assert!((singlet().norm_squared() - 1.0).abs() < 1e-15);
        assert_eq!(singlet().inner(&SpinState::basis(0, 0)), C0);
    }

    #[test]
    fn sigma_z_tensor_sigma_z_is_diagonal() {
        let m = spin_observable(&UnitVector3::Z, &UnitVector3::Z);
        let expect = [1.0, -1.0, -1.0, 1.0];
        for (i, &diag) in expect.iter().enumerate() {
            for j in 0..4 {
                let want = if i == j { diag } else { 0.0 };
                assert_eq!(m.matrix()[(i, j)], Complex64::from(want));
            }
        }
    }

    #[test]
    fn observable_is_traceless_hermitian_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let id = Matrix4::<Complex64>::identity();
        for _ in 0..200 {
            let (a, b) = (random_unit(&mut rng), random_unit(&mut rng));
            let m = spin_observable(&a, &b);
            assert!(m.trace().norm() < 1e-14);
            let herm = (m.matrix() - m.matrix().adjoint()).norm();
            assert!(herm < 1e-12);
            let sq = (m.matrix() * m.matrix() - id).norm();
            assert!(sq < 1e-10, "M^2 - I = {sq}");
        }
    }

    #[test]
    fn e_spin_examples() {
        let x = UnitVector3::X;
        assert_eq!(e_spin(&x, &x), -1.0);
        assert_eq!(e_spin(&x, &UnitVector3::Y), 0.0);
        let d = UnitVector3::new(H, H, 0.0).unwrap();
        assert!((e_spin(&x, &d) + H).abs() < 1e-15);
    }

    #[test]
    fn e_spin_matrix_examples() {
        let z = UnitVector3::Z;
        assert!((e_spin_matrix(&z, &z) + 1.0).abs() < 1e-15);
        assert!((e_spin_matrix(&z, &-z) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_path_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let (a, b) = (random_unit(&mut rng), random_unit(&mut rng));
            let raw = singlet().expectation(&spin_observable(&a, &b));
            assert!(raw.im.abs() < 1e-12);
            assert!((raw.re - e_spin(&a, &b)).abs() <= 1e-12);
        }
    }

    proptest! {
        #[test]
        fn rotation_invariance(
            a in (0.0..PI, 0.0..TAU), b in (0.0..PI, 0.0..TAU),
            axis in (0.0..PI, 0.0..TAU), angle in -TAU..TAU,
        ) {
            let a = UnitVector3::from_spherical(a.0, a.1);
            let b = UnitVector3::from_spherical(b.0, b.1);
            let n = UnitVector3::from_spherical(axis.0, axis.1);
            let rot = Rotation3::from_axis_angle(
                &nalgebra::Unit::new_normalize(Vector3::new(n.x(), n.y(), n.z())), angle);
            let turn = |u: &UnitVector3| {
                let r = rot * Vector3::new(u.x(), u.y(), u.z());
                UnitVector3::new(r.x, r.y, r.z).unwrap()
            };
            prop_assert!((e_spin(&turn(&a), &turn(&b)) - e_spin(&a, &b)).abs() <= 1e-10);
            prop_assert!((e_spin_matrix(&turn(&a), &turn(&b)) - e_spin_matrix(&a, &b)).abs() <= 1e-10);
            prop_assert_eq!(e_spin(&a, &b), e_spin(&b, &a));
        }
    }
}
