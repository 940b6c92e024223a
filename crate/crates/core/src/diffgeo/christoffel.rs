//! Christoffel-type coefficients of φ in the moving basis (φ_x, φ_y, φ), the
//! minimality criteria built on them, and the residue identities of the
//! spectral construction.

use super::{MetricData, PotentialGradients};
use crate::baker_akhiezer::f2_complex;
use crate::linalg::{condition_number, from_cols, herm, max_abs3, norm_sqr, solve, sub, C3};
use crate::spectral_curve::ReducibleCurve;
use crate::surface::{spectral_family_jet, SurfaceJet};
use crate::{Complex, Error, Real, Result};

/// Basis condition numbers above this are rejected.
pub const CONDITION_LIMIT: f64 = 1e8;

/// φ_ij = Γ¹ᵢⱼφ_x + Γ²ᵢⱼφ_y + bᵢⱼφ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelData<T> {
    pub gamma1_11: Complex<T>,
    pub gamma2_11: Complex<T>,
    pub gamma1_12: Complex<T>,
    pub gamma2_12: Complex<T>,
    pub gamma1_22: Complex<T>,
    pub gamma2_22: Complex<T>,
    pub b11: Complex<T>,
    pub b12: Complex<T>,
    pub b22: Complex<T>,
    /// ∞-norm condition number of the basis matrix.
    pub condition: T,
    /// Largest componentwise backward error of the three solves.
    pub residual: T,
}

pub fn christoffel_solve<T: Real>(jet: &SurfaceJet<T>) -> Result<ChristoffelData<T>> {
    let m = from_cols(&jet.phi_x, &jet.phi_y, &jet.phi);
    let condition = condition_number(&m);
    if !(condition <= T::lit(CONDITION_LIMIT)) {
        return Err(Error::IllConditioned(
            condition.to_f64().unwrap_or(f64::INFINITY),
        ));
    }
    let solve_one = |rhs: &C3<T>| -> Result<(C3<T>, T)> {
        let c = solve(&m, rhs).ok_or(Error::IllConditioned(f64::INFINITY))?;
        let recon: C3<T> =
            [0, 1, 2].map(|k| jet.phi_x[k] * c[0] + jet.phi_y[k] * c[1] + jet.phi[k] * c[2]);
        Ok((c, max_abs3(&sub(&recon, rhs))))
    };
    let (c11, r11) = solve_one(&jet.phi_xx)?;
    let (c12, r12) = solve_one(&jet.phi_xy)?;
    let (c22, r22) = solve_one(&jet.phi_yy)?;
    Ok(ChristoffelData {
        gamma1_11: c11[0],
        gamma2_11: c11[1],
        b11: c11[2],
        gamma1_12: c12[0],
        gamma2_12: c12[1],
        b12: c12[2],
        gamma1_22: c22[0],
        gamma2_22: c22[1],
        b22: c22[2],
        condition,
        residual: r11.max(r12).max(r22),
    })
}

/// Relative deviations (|b₁₂|, |b₁₁ + 2e^{v₁}|, |b₂₂ + 2e^{v₂}|), each scaled
/// by the corresponding metric coefficient (b₁₂ by max(E, G)).
pub fn christoffel_invariant_defects<T: Real>(
    ch: &ChristoffelData<T>,
    m: &MetricData<T>,
) -> [T; 3] {
    [
        ch.b12.norm() / m.e.max(m.g),
        (ch.b11 + m.e).norm() / m.e,
        (ch.b22 + m.g).norm() / m.g,
    ]
}

/// |Γ¹₁₁ + Γ²₁₂ − (½(v₁ₓ + v₂ₓ) + iβₓ)| and the y-analogue.
pub fn connection_trace_defects<T: Real>(
    ch: &ChristoffelData<T>,
    g: &PotentialGradients<T>,
) -> [T; 2] {
    let half = T::lit(0.5);
    let ex = Complex::new(half * (g.v1_x + g.v2_x), g.beta_x);
    let ey = Complex::new(half * (g.v1_y + g.v2_y), g.beta_y);
    [
        (ch.gamma1_11 + ch.gamma2_12 - ex).norm(),
        (ch.gamma1_12 + ch.gamma2_22 - ey).norm(),
    ]
}

/// |Im(Γ¹₁₁ + Γ²₁₂)| and |Im(Γ¹₁₂ + Γ²₂₂)|; both vanish on minimal surfaces.
pub fn minimality_defects<T: Real>(ch: &ChristoffelData<T>) -> [T; 2] {
    [
        (ch.gamma1_11 + ch.gamma2_12).im.abs(),
        (ch.gamma1_12 + ch.gamma2_22).im.abs(),
    ]
}

/// Absolute values of the six residue identities, with weights
/// Aₖ = Res_{Qₖ}Ω / |αₖ|²:
///
/// ```text
/// Σ φⁱφ̄ⁱAᵢ + |d|²Res_rΩ,   Σ φⁱφ̄ⁱₓAᵢ,   Σ φⁱφ̄ⁱ_yAᵢ,   Σ φⁱₓφ̄ⁱ_yAᵢ,
/// Σ φⁱₓφ̄ⁱₓAᵢ + |f₁|²c₁,    Σ φⁱ_yφ̄ⁱ_yAᵢ + |f₂|²c₂
/// ```
pub fn residue_identity_defects<T: Real>(
    curve: &ReducibleCurve<T>,
    jet: &SurfaceJet<T>,
) -> Result<[T; 6]> {
    let expect = spectral_family_jet(curve, jet.x, jet.y);
    let scale = T::one() + norm_sqr(&expect.phi).sqrt();
    let dev = max_abs3(&sub(&expect.phi, &jet.phi));
    if !(dev <= T::lit(1e-9) * scale) {
        return Err(Error::CurveJetMismatch(dev.to_f64().unwrap_or(f64::NAN)));
    }
    let weights: [T; 3] = [0, 1, 2].map(|k| curve.res_q[k] / (curve.alpha[k] * curve.alpha[k]));
    let wsum = |u: &C3<T>, w: &C3<T>| -> Complex<T> {
        let wu: C3<T> = [0, 1, 2].map(|k| u[k] * weights[k]);
        herm(&wu, w)
    };
    let f1 = curve.d;
    let f2 = f2_complex(curve, jet.x, jet.y);
    Ok([
        (wsum(&jet.phi, &jet.phi) + curve.d * curve.d * curve.res_r).norm(),
        wsum(&jet.phi, &jet.phi_x).norm(),
        wsum(&jet.phi, &jet.phi_y).norm(),
        wsum(&jet.phi_x, &jet.phi_y).norm(),
        (wsum(&jet.phi_x, &jet.phi_x) + f1 * f1 * curve.c1_exp).norm(),
        (wsum(&jet.phi_y, &jet.phi_y) + f2.norm_sqr() * curve.c2_exp).norm(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffgeo::{analytic_gradients, metric_from_jet};
    use crate::spectral_curve::derive_constants;

    #[test]
    fn sphere_christoffel() {
        let k = derive_constants(1.0f64, 1.0, 2.0, 1.0).unwrap();
        let (x, y) = (0.2, 0.9);
        let j = spectral_family_jet(&k, x, y);
        let ch = christoffel_solve(&j).unwrap();
        let m = metric_from_jet(&j).unwrap();
        assert!(ch.b12.norm() < 1e-10);
        assert!((ch.b11 + m.e).norm() < 1e-9);
        assert!(ch.gamma1_12.norm() < 1e-9);
        // Γ²₁₂ = f₂ₓ/f₂ with f₂ = cos θ + sin θ, θ = x − y
        let t: f64 = x - y;
        let expect = (t.cos() - t.sin()) / (t.cos() + t.sin());
        assert!((ch.gamma2_12 - Complex::new(expect, 0.0)).norm() < 1e-9);
        assert!(ch.residual < 1e-12);
        let g = analytic_gradients(&j).unwrap();
        for d in connection_trace_defects(&ch, &g) {
            assert!(d < 1e-8);
        }
        for d in minimality_defects(&ch) {
            assert!(d < 1e-8);
        }
    }

    #[test]
    fn residue_identities_on_sphere() {
        let k = derive_constants(1.0f64, 1.0, 2.0, 1.0).unwrap();
        let j = spectral_family_jet(&k, 0.3, 1.1);
        for d in residue_identity_defects(&k, &j).unwrap() {
            assert!(d < 1e-12, "{d}");
        }
        let other = derive_constants(1.0f64, 1.0, 3.0, 1.0).unwrap();
        assert!(matches!(
            residue_identity_defects(&other, &j),
            Err(Error::CurveJetMismatch(_))
        ));
    }

    #[test]
    fn ill_conditioned_basis_rejected() {
        let k = derive_constants(1.0f64, 1.0, 2.0, 1.0).unwrap();
        let mut j = spectral_family_jet(&k, 0.3, 1.1);
        j.phi_y = j.phi_x;
        assert!(matches!(
            christoffel_solve(&j),
            Err(Error::IllConditioned(_))
        ));
    }
}
