//! Verification of the differential-geometric identities of a Lagrangian
//! immersion with diagonal metric: Gram conditions, metric potentials,
//! Lagrangian angle, the moving frame and its connection, Christoffel
//! symbols, the minimality criteria, the residue identities of the spectral
//! construction and Gaussian curvature.
//!
//! The Hermitian product conjugates its second slot throughout.

mod christoffel;
mod curvature;
mod frame;

pub use christoffel::{
    christoffel_invariant_defects, christoffel_solve, connection_trace_defects, minimality_defects,
    residue_identity_defects, ChristoffelData, CONDITION_LIMIT,
};
pub use curvature::{
    gauss_curvature, gauss_curvature_fd, spectral_degeneracy_distance, JetMetric, MetricField,
    MetricJet, SpectralMetric,
};
pub use frame::{frame_and_connection, frame_defects, FrameData, FrameDefects};

use crate::linalg::{det, from_rows, herm, norm_sqr, scale, Mat3};
use crate::surface::{JetField, SurfaceJet};
use crate::{Complex, Error, Real, Result};

/// Max allowed ||det Φ̃| − 1| before the input counts as non-Lagrangian.
pub const UNITARITY_LIMIT: f64 = 1e-6;

/// (|⟨φ,φ⟩ − 1|, |⟨φ,φ_x⟩|, |⟨φ,φ_y⟩|, |⟨φ_x,φ_y⟩|).
pub fn gram_defects<T: Real>(jet: &SurfaceJet<T>) -> [T; 4] {
    [
        (herm(&jet.phi, &jet.phi) - T::one()).norm(),
        herm(&jet.phi, &jet.phi_x).norm(),
        herm(&jet.phi, &jet.phi_y).norm(),
        herm(&jet.phi_x, &jet.phi_y).norm(),
    ]
}

/// Log-potentials of the diagonal metric, |φ_x|² = 2e^{v₁}, |φ_y|² = 2e^{v₂}.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MetricData<T> {
    pub v1: T,
    pub v2: T,
    pub e: T,
    pub g: T,
}

pub fn metric_from_jet<T: Real>(jet: &SurfaceJet<T>) -> Result<MetricData<T>> {
    let e = norm_sqr(&jet.phi_x);
    let g = norm_sqr(&jet.phi_y);
    if !(e > T::zero()) || !(g > T::zero()) {
        return Err(Error::Degenerate(format!(
            "vanishing derivative at ({}, {})",
            jet.x, jet.y
        )));
    }
    let two = T::lit(2.0);
    Ok(MetricData {
        v1: (e / two).ln(),
        v2: (g / two).ln(),
        e,
        g,
    })
}

/// The untwisted unitary frame Φ̃ with rows φ, φ_x/|φ_x|, φ_y/|φ_y|.
pub fn unitary_frame<T: Real>(jet: &SurfaceJet<T>) -> Result<Mat3<T>> {
    let m = metric_from_jet(jet)?;
    Ok(from_rows(
        jet.phi,
        scale(&jet.phi_x, Complex::from(T::one() / m.e.sqrt())),
        scale(&jet.phi_y, Complex::from(T::one() / m.g.sqrt())),
    ))
}

/// β = arg det Φ̃ in (−π, π].
pub fn lagrangian_angle<T: Real>(jet: &SurfaceJet<T>) -> Result<T> {
    let dt = det(&unitary_frame(jet)?);
    let dev = (dt.norm() - T::one()).abs();
    if !(dev <= T::lit(UNITARITY_LIMIT)) {
        return Err(Error::NotLagrangian(dev.to_f64().unwrap_or(f64::NAN)));
    }
    let b = dt.arg();
    Ok(if b <= -T::PI() { T::PI() } else { b })
}

/// Shifts `beta` by a multiple of 2π to lie nearest to `reference`.
pub fn unwrap_near<T: Real>(beta: T, reference: T) -> T {
    let tau = T::lit(2.0) * T::PI();
    beta - tau * ((beta - reference) / tau).round()
}

/// First partial derivatives of v₁, v₂ and β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialGradients<T> {
    pub v1_x: T,
    pub v1_y: T,
    pub v2_x: T,
    pub v2_y: T,
    pub beta_x: T,
    pub beta_y: T,
}

/// Gradients from the second-order jet:
/// v₁ₓ = 2Re⟨φ_xx, φ_x⟩/|φ_x|², and β_x = Im(∂ₓ det / det) with
/// ∂ₓ det(φ, φ_x, φ_y) = det(φ, φ_xx, φ_y) + det(φ, φ_x, φ_xy).
pub fn analytic_gradients<T: Real>(jet: &SurfaceJet<T>) -> Result<PotentialGradients<T>> {
    let m = metric_from_jet(jet)?;
    let two = T::lit(2.0);
    let d0 = det(&from_rows(jet.phi, jet.phi_x, jet.phi_y));
    if !(d0.norm() > T::zero()) {
        return Err(Error::Degenerate("frame determinant vanishes".into()));
    }
    let dx = det(&from_rows(jet.phi, jet.phi_xx, jet.phi_y))
        + det(&from_rows(jet.phi, jet.phi_x, jet.phi_xy));
    let dy = det(&from_rows(jet.phi, jet.phi_xy, jet.phi_y))
        + det(&from_rows(jet.phi, jet.phi_x, jet.phi_yy));
    Ok(PotentialGradients {
        v1_x: two * herm(&jet.phi_xx, &jet.phi_x).re / m.e,
        v1_y: two * herm(&jet.phi_xy, &jet.phi_x).re / m.e,
        v2_x: two * herm(&jet.phi_xy, &jet.phi_y).re / m.g,
        v2_y: two * herm(&jet.phi_yy, &jet.phi_y).re / m.g,
        beta_x: (dx / d0).im,
        beta_y: (dy / d0).im,
    })
}

/// Gradients by central differences of v₁, v₂ and the continuously lifted β.
pub fn fd_gradients<T: Real>(
    field: &impl JetField<T>,
    x: T,
    y: T,
    h: T,
) -> Result<PotentialGradients<T>> {
    let sample = |xx: T, yy: T| -> Result<(MetricData<T>, T)> {
        let j = field.jet(xx, yy);
        Ok((metric_from_jet(&j)?, lagrangian_angle(&j)?))
    };
    let (_, b0) = sample(x, y)?;
    let (mxp, bxp) = sample(x + h, y)?;
    let (mxm, bxm) = sample(x - h, y)?;
    let (myp, byp) = sample(x, y + h)?;
    let (mym, bym) = sample(x, y - h)?;
    let two_h = T::lit(2.0) * h;
    Ok(PotentialGradients {
        v1_x: (mxp.v1 - mxm.v1) / two_h,
        v1_y: (myp.v1 - mym.v1) / two_h,
        v2_x: (mxp.v2 - mxm.v2) / two_h,
        v2_y: (myp.v2 - mym.v2) / two_h,
        beta_x: (unwrap_near(bxp, b0) - unwrap_near(bxm, b0)) / two_h,
        beta_y: (unwrap_near(byp, b0) - unwrap_near(bym, b0)) / two_h,
    })
}
