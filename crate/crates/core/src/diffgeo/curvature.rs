//! Gaussian curvature of an orthogonal metric ds² = E dx² + G dy²:
//!
//! K = −1/(2√(EG)) · (∂ₓ(Gₓ/√(EG)) + ∂ᵧ(E_y/√(EG))).

use crate::baker_akhiezer::f2_expsum;
use crate::expsum::ExpSum;
use crate::linalg::norm_sqr;
use crate::spectral_curve::ReducibleCurve;
use crate::surface::JetField;
use crate::{Error, Real, Result};

/// E, G and the derivatives entering K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet<T> {
    pub e: T,
    pub g: T,
    pub e_x: T,
    pub e_y: T,
    pub e_yy: T,
    pub g_x: T,
    pub g_y: T,
    pub g_xx: T,
}

pub trait MetricField<T: Real>: Sync {
    /// (E, G) at a point.
    fn metric(&self, x: T, y: T) -> (T, T);

    /// Closed-form derivatives, when the field has them.
    fn metric_jet(&self, _x: T, _y: T) -> Option<MetricJet<T>> {
        None
    }
}

/// E = |φ_x|², G = |φ_y|² from a jet field (no closed-form derivatives).
pub struct JetMetric<'a, F>(pub &'a F);

impl<'a, T: Real, F: JetField<T>> MetricField<T> for JetMetric<'a, F> {
    fn metric(&self, x: T, y: T) -> (T, T) {
        let j = self.0.jet(x, y);
        (norm_sqr(&j.phi_x), norm_sqr(&j.phi_y))
    }
}

/// The spectral family's metric in closed form: E = |f₁|²|c₁|, G = |f₂|²|c₂|,
/// with f₁ = d constant and f₂ real.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMetric<T> {
    e: T,
    c2: T,
    f2: ExpSum<T>,
}

impl<T: Real> SpectralMetric<T> {
    pub fn new(curve: &ReducibleCurve<T>) -> Self {
        Self {
            e: curve.d * curve.d * curve.c1_exp.abs(),
            c2: curve.c2_exp.abs(),
            f2: f2_expsum(curve),
        }
    }
}

impl<T: Real> MetricField<T> for SpectralMetric<T> {
    fn metric(&self, x: T, y: T) -> (T, T) {
        let f = self.f2.eval(x, y).re;
        (self.e, self.c2 * f * f)
    }

    fn metric_jet(&self, x: T, y: T) -> Option<MetricJet<T>> {
        let j = self.f2.jet(x, y);
        let (f, fx, fy, fxx) = (j.v.re, j.x.re, j.y.re, j.xx.re);
        let two = T::lit(2.0);
        Some(MetricJet {
            e: self.e,
            g: self.c2 * f * f,
            e_x: T::zero(),
            e_y: T::zero(),
            e_yy: T::zero(),
            g_x: two * self.c2 * f * fx,
            g_y: two * self.c2 * f * fy,
            g_xx: two * self.c2 * (fx * fx + f * fxx),
        })
    }
}

fn check_positive<T: Real>(e: T, g: T) -> Result<()> {
    // rounding leaves G ≈ 1e-31 on the degeneracy lines rather than 0
    let floor = T::epsilon() * e.max(g);
    if !(e > floor) || !(g > floor) {
        return Err(Error::Degenerate(format!(
            "metric not positive (E = {e}, G = {g})"
        )));
    }
    Ok(())
}

/// K from closed-form metric derivatives.
pub fn gauss_curvature<T: Real>(m: &MetricJet<T>) -> Result<T> {
    check_positive(m.e, m.g)?;
    let two = T::lit(2.0);
    let w = (m.e * m.g).sqrt();
    let w_x = (m.e_x * m.g + m.e * m.g_x) / (two * w);
    let w_y = (m.e_y * m.g + m.e * m.g_y) / (two * w);
    let dx = m.g_xx / w - m.g_x * w_x / (w * w);
    let dy = m.e_yy / w - m.e_y * w_y / (w * w);
    Ok(-(dx + dy) / (two * w))
}

/// K by nested central differences of E and G with step `h`.
pub fn gauss_curvature_fd<T: Real>(metric: &impl MetricField<T>, x: T, y: T, h: T) -> Result<T> {
    let two_h = T::lit(2.0) * h;
    let sample = |xx: T, yy: T| -> Result<(T, T)> {
        let (e, g) = metric.metric(xx, yy);
        check_positive(e, g)?;
        Ok((e, g))
    };
    // Gₓ/√(EG) at x ± h and E_y/√(EG) at y ± h
    let gx_over_w = |xx: T| -> Result<T> {
        let (e, g) = sample(xx, y)?;
        let (_, gp) = sample(xx + h, y)?;
        let (_, gm) = sample(xx - h, y)?;
        Ok((gp - gm) / two_h / (e * g).sqrt())
    };
    let ey_over_w = |yy: T| -> Result<T> {
        let (e, g) = sample(x, yy)?;
        let (ep, _) = sample(x, yy + h)?;
        let (em, _) = sample(x, yy - h)?;
        Ok((ep - em) / two_h / (e * g).sqrt())
    };
    let (e, g) = sample(x, y)?;
    let dx = (gx_over_w(x + h)? - gx_over_w(x - h)?) / two_h;
    let dy = (ey_over_w(y + h)? - ey_over_w(y - h)?) / two_h;
    Ok(-(dx + dy) / (T::lit(2.0) * (e * g).sqrt()))
}

/// Planar distance from (x, y) to the nearest line where f₂ (hence G)
/// vanishes. With θ = ax − by, f₂ ∝ b·cos θ + Γ·sin θ = R·sin(θ + atan2(b, Γ)).
pub fn spectral_degeneracy_distance<T: Real>(curve: &ReducibleCurve<T>, x: T, y: T) -> T {
    let u = curve.a * x - curve.b * y + curve.b.atan2(curve.gamma_im);
    let pi = T::PI();
    let off = (u - pi * (u / pi).round()).abs();
    off / (curve.a * curve.a + curve.b * curve.b).sqrt()
}
