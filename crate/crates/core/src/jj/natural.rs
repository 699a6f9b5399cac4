//! Natural angle of a running junction: the phase ψ that advances at a
//! constant rate √(α²−1) when the junction is uncoupled.
//!
//! The closed forms involve tan and atan, which jump by π. Both maps here
//! count the branch of the inner tangent and add the matching multiple of
//! 2π, so they are continuous, strictly increasing bijections of ℝ with
//! ψ(φ + 2π) = ψ(φ) + 2π.

use std::f64::consts::PI;

/// ψ(φ) = 2 atan(√((α−1)/(α+1)) tan(φ/2 + π/4)), continued across branches.
pub fn psi_of_phi(phi: f64, alpha: f64) -> f64 {
    let k = ((alpha - 1.0) / (alpha + 1.0)).sqrt();
    let x = 0.5 * phi + 0.25 * PI;
    let branch = (x / PI + 0.5).floor();
    2.0 * (k * (x - branch * PI).tan()).atan() + 2.0 * PI * branch
}

/// φ(ψ) = 2 atan(√((α+1)/(α−1)) tan(ψ/2)) − π/2, continued across branches.
pub fn phi_of_psi(psi: f64, alpha: f64) -> f64 {
    let k = ((alpha + 1.0) / (alpha - 1.0)).sqrt();
    let y = 0.5 * psi;
    let branch = (y / PI + 0.5).floor();
    2.0 * (k * (y - branch * PI).tan()).atan() + 2.0 * PI * branch - 0.5 * PI
}

/// sin φ expressed through the natural angle: (1 − α cos ψ)/(α − cos ψ).
pub fn sin_phi_of_psi(psi: f64, alpha: f64) -> f64 {
    let c = psi.cos();
    (1.0 - alpha * c) / (alpha - c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn anchor_points() {
        for alpha in [1.01, 1.2, 3.0, 10.0] {
            assert!(psi_of_phi(-PI / 2.0, alpha).abs() < 1e-15);
            assert!((psi_of_phi(PI / 2.0, alpha) - PI).abs() < 1e-12);
            assert!((phi_of_psi(0.0, alpha) + PI / 2.0).abs() < 1e-15);
            assert!((sin_phi_of_psi(0.0, alpha) + 1.0).abs() < 1e-15);
            assert!((sin_phi_of_psi(PI, alpha) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn continuous_and_increasing_across_branches() {
        let alpha = 1.2;
        let mut prev = psi_of_phi(-20.0, alpha);
        let mut x = -20.0;
        while x < 20.0 {
            x += 1e-3;
            let p = psi_of_phi(x, alpha);
            assert!(p > prev && p - prev < 0.01, "jump at {x}: {prev} -> {p}");
            prev = p;
        }
    }

    #[test]
    fn advances_by_full_turn() {
        for x in [-7.0, 0.3, 11.0] {
            assert!((psi_of_phi(x + 2.0 * PI, 1.5) - psi_of_phi(x, 1.5) - 2.0 * PI).abs() < 1e-12);
            assert!((phi_of_psi(x + 2.0 * PI, 1.5) - phi_of_psi(x, 1.5) - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn natural_angle_advances_uniformly() {
        // integrate dφ/dτ = α − sin φ and check ψ grows linearly at √(α²−1)
        let alpha = 1.2f64;
        let nu = (alpha * alpha - 1.0).sqrt();
        let h = 1e-3;
        let mut phi = 0.4f64;
        let psi0 = psi_of_phi(phi, alpha);
        let f = |p: f64| alpha - p.sin();
        for step in 1..=20_000 {
            let k1 = f(phi);
            let k2 = f(phi + 0.5 * h * k1);
            let k3 = f(phi + 0.5 * h * k2);
            let k4 = f(phi + h * k3);
            phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if step % 1000 == 0 {
                let t = step as f64 * h;
                assert!((psi_of_phi(phi, alpha) - psi0 - nu * t).abs() < 1e-8);
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip_on_principal_branch(x in -PI / 2.0 + 1e-9..1.5 * PI - 1e-9, alpha in 1.0001f64..=10.0) {
            let back = phi_of_psi(psi_of_phi(x, alpha), alpha);
            prop_assert!((back - x).abs() < 1e-10, "x = {}, back = {}", x, back);
        }

        #[test]
        fn roundtrip_everywhere(x in -50.0f64..50.0, alpha in 1.0001f64..=10.0) {
            let back = phi_of_psi(psi_of_phi(x, alpha), alpha);
            prop_assert!((back - x).abs() < 1e-9);
        }

        #[test]
        fn sin_phi_matches_composition(psi in -10.0f64..10.0, alpha in 1.0001f64..=10.0) {
            prop_assert!((sin_phi_of_psi(psi, alpha) - phi_of_psi(psi, alpha).sin()).abs() < 1e-12);
        }

        #[test]
        fn load_identity(psi in -10.0f64..10.0, alpha in 1.0001f64..=10.0) {
            let lhs = alpha - sin_phi_of_psi(psi, alpha);
            let rhs = (alpha * alpha - 1.0) / (alpha - psi.cos());
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
