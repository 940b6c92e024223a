//! The SU(3) frame Φ and its connection matrices A = Φ_x Φ⁻¹, B = Φ_y Φ⁻¹.

use super::{analytic_gradients, lagrangian_angle, metric_from_jet, unwrap_near, MetricData};
use crate::linalg::{
    adjoint, det, from_rows, identity, inverse, max_abs_mat, mul, scale, scale_mat, sub_mat, Mat3,
    C3,
};
use crate::surface::{JetField, SurfaceJet};
use crate::{Complex, Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData<T> {
    /// Rows φ, e^{−iβ/2}φ_x/|φ_x|, e^{−iβ/2}φ_y/|φ_y|.
    pub phi: Mat3<T>,
    pub beta: T,
    pub metric: MetricData<T>,
    pub a: Mat3<T>,
    pub b: Mat3<T>,
    /// A₂₂ = if, B₂₂ = ih.
    pub f: T,
    pub h: T,
}

fn twisted_frame<T: Real>(jet: &SurfaceJet<T>, beta: T) -> Result<Mat3<T>> {
    let m = metric_from_jet(jet)?;
    let tw = Complex::new(T::zero(), -beta / T::lit(2.0)).exp();
    Ok(from_rows(
        jet.phi,
        scale(&jet.phi_x, tw / m.e.sqrt()),
        scale(&jet.phi_y, tw / m.g.sqrt()),
    ))
}

/// Builds Φ at (x, y) and differentiates it by central differences with step
/// `h`, lifting β continuously across the stencil.
pub fn frame_and_connection<T: Real>(
    field: &impl JetField<T>,
    x: T,
    y: T,
    h: T,
) -> Result<FrameData<T>> {
    let center = field.jet(x, y);
    let beta = lagrangian_angle(&center)?;
    let phi = twisted_frame(&center, beta)?;
    let inv = inverse(&phi).ok_or_else(|| Error::NotLagrangian(f64::INFINITY))?;
    let at = |xx: T, yy: T| -> Result<Mat3<T>> {
        let j = field.jet(xx, yy);
        let b = unwrap_near(lagrangian_angle(&j)?, beta);
        twisted_frame(&j, b)
    };
    let two_h = Complex::from(T::one() / (T::lit(2.0) * h));
    let phi_x = scale_mat(&sub_mat(&at(x + h, y)?, &at(x - h, y)?), two_h);
    let phi_y = scale_mat(&sub_mat(&at(x, y + h)?, &at(x, y - h)?), two_h);
    let a = mul(&phi_x, &inv);
    let b = mul(&phi_y, &inv);
    Ok(FrameData {
        phi,
        beta,
        metric: metric_from_jet(&center)?,
        a,
        b,
        f: a[1][1].im,
        h: b[1][1].im,
    })
}

/// Worst-case deviations of a [`FrameData`] from the structure of the
/// frame equations.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct FrameDefects<T> {
    /// max |ΦΦ* − I|
    pub unitarity: T,
    /// |det Φ − 1|
    pub det: T,
    /// max |A + A*|, |B + B*|
    pub anti_hermitian: T,
    /// |tr A|, |tr B|
    pub trace: T,
    /// |A₁₃|, |A₃₁|, |B₁₂|, |B₂₁|
    pub zero_pattern: T,
    /// |Re A₂₂|, |Re B₂₂|
    pub f_h_real: T,
    /// Deviation of the remaining entries from their closed forms in
    /// v₁, v₂, β, f, h and their gradients.
    pub displayed_entries: T,
    /// max |A·Φ − Φ_x| and |B·Φ − Φ_y| against jet-based Φ_x, Φ_y.
    pub reconstruction: T,
}

impl<T: Real> FrameDefects<T> {
    pub fn max(&self) -> T {
        [
            self.unitarity,
            self.det,
            self.anti_hermitian,
            self.trace,
            self.zero_pattern,
            self.f_h_real,
            self.displayed_entries,
            self.reconstruction,
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }
}

/// Φ_x and Φ_y from the jet, β-gradients and metric gradients.
fn analytic_frame_derivatives<T: Real>(jet: &SurfaceJet<T>, beta: T) -> Result<(Mat3<T>, Mat3<T>)> {
    let m = metric_from_jet(jet)?;
    let gr = analytic_gradients(jet)?;
    let half = T::lit(0.5);
    let tw = Complex::new(T::zero(), -beta * half).exp();
    let i = Complex::new(T::zero(), T::one());
    // d/ds (e^{−iβ/2} u/|u|) = e^{−iβ/2}(u_s/|u| − u·(|u|_s/|u|)/|u| − (iβ_s/2)u/|u|)
    let row = |u: &C3<T>, us: &C3<T>, norm: T, log_norm_s: T, beta_s: T| -> C3<T> {
        let k = tw / norm;
        let shift = Complex::from(log_norm_s) + i * (beta_s * half);
        [0, 1, 2].map(|c| k * (us[c] - u[c] * shift))
    };
    let (ne, ng) = (m.e.sqrt(), m.g.sqrt());
    let dx = from_rows(
        jet.phi_x,
        row(&jet.phi_x, &jet.phi_xx, ne, gr.v1_x * half, gr.beta_x),
        row(&jet.phi_y, &jet.phi_xy, ng, gr.v2_x * half, gr.beta_x),
    );
    let dy = from_rows(
        jet.phi_y,
        row(&jet.phi_x, &jet.phi_xy, ne, gr.v1_y * half, gr.beta_y),
        row(&jet.phi_y, &jet.phi_yy, ng, gr.v2_y * half, gr.beta_y),
    );
    Ok((dx, dy))
}

pub fn frame_defects<T: Real>(fd: &FrameData<T>, jet: &SurfaceJet<T>) -> Result<FrameDefects<T>> {
    let (a, b) = (&fd.a, &fd.b);
    let mut out = FrameDefects::default();
    out.unitarity = max_abs_mat(&sub_mat(&mul(&fd.phi, &adjoint(&fd.phi)), &identity()));
    out.det = (det(&fd.phi) - Complex::from(T::one())).norm();
    out.anti_hermitian = max_abs_mat(&sub_mat(
        a,
        &scale_mat(&adjoint(a), -Complex::from(T::one())),
    ))
    .max(max_abs_mat(&sub_mat(
        b,
        &scale_mat(&adjoint(b), -Complex::from(T::one())),
    )));
    out.trace = (a[0][0] + a[1][1] + a[2][2])
        .norm()
        .max((b[0][0] + b[1][1] + b[2][2]).norm());
    out.zero_pattern = [a[0][2], a[2][0], b[0][1], b[1][0]]
        .iter()
        .fold(T::zero(), |m, z| m.max(z.norm()));
    out.f_h_real = a[1][1].re.abs().max(b[1][1].re.abs());

    let gr = analytic_gradients(jet)?;
    let (v1, v2, beta, f, h) = (fd.metric.v1, fd.metric.v2, fd.beta, fd.f, fd.h);
    let (half, two) = (T::lit(0.5), T::lit(2.0));
    let i = Complex::new(T::zero(), T::one());
    let r = |v: T| Complex::from(v);
    let e = |re: T, im: T| Complex::new(re, im).exp();
    let s2 = two.sqrt();
    let expected_a = [
        ((0, 1), e(v1 * half, beta * half) * s2),
        ((1, 0), -e(v1 * half, -beta * half) * s2),
        ((0, 0), r(T::zero())),
        ((1, 1), i * f),
        ((2, 2), -i * f),
        (
            (1, 2),
            e((v1 - v2) * half, T::zero()) * half * (i * (two * h) - r(gr.v1_y) + i * gr.beta_y),
        ),
        (
            (2, 1),
            e((v1 - v2) * half, T::zero()) * half * (i * (two * h) + r(gr.v1_y) + i * gr.beta_y),
        ),
    ];
    let expected_b = [
        ((0, 2), e(v2 * half, beta * half) * s2),
        ((2, 0), -e(v2 * half, -beta * half) * s2),
        ((0, 0), r(T::zero())),
        ((1, 1), i * h),
        ((2, 2), -i * h),
        (
            (1, 2),
            e((v2 - v1) * half, T::zero()) * half * (i * gr.beta_x - i * (two * f) + r(gr.v2_x)),
        ),
        (
            (2, 1),
            e((v2 - v1) * half, T::zero()) * half * (i * gr.beta_x - i * (two * f) - r(gr.v2_x)),
        ),
    ];
    let dev = |m: &Mat3<T>, exp: &[((usize, usize), Complex<T>)]| {
        exp.iter().fold(T::zero(), |acc, ((r, c), v)| {
            acc.max((m[*r][*c] - *v).norm())
        })
    };
    out.displayed_entries = dev(a, &expected_a).max(dev(b, &expected_b));

    let (dx, dy) = analytic_frame_derivatives(jet, fd.beta)?;
    out.reconstruction = max_abs_mat(&sub_mat(&mul(a, &fd.phi), &dx))
        .max(max_abs_mat(&sub_mat(&mul(b, &fd.phi), &dy)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_curve::derive_constants;
    use crate::surface::SpectralFamily;

    #[test]
    fn sphere_frame_structure() {
        let fam = SpectralFamily::new(&derive_constants(1.0f64, 1.0, 2.0, 1.0).unwrap());
        let fd = frame_and_connection(&fam, 0.3, 1.1, 1e-4).unwrap();
        let jet = fam.jet(0.3, 1.1);
        let d = frame_defects(&fd, &jet).unwrap();
        assert!(d.unitarity < 1e-12);
        assert!(d.det < 1e-12);
        assert!(d.anti_hermitian < 1e-6, "{d:?}");
        assert!(d.trace < 1e-6);
        assert!(d.zero_pattern < 1e-6);
        assert!(d.displayed_entries < 1e-6, "{d:?}");
        assert!(d.reconstruction < 1e-6, "{d:?}");
        let expect = Complex::new(fd.metric.v1 / 2.0, fd.beta / 2.0).exp() * 2f64.sqrt();
        assert!((fd.a[0][1] - expect).norm() < 1e-6);
    }
}
