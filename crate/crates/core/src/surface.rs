//! Surface jets φ: R² → C³ for the two concrete families.

use num_traits::Zero;

use crate::baker_akhiezer::psi2_expsum;
use crate::expsum::ExpSum;
use crate::linalg::{norm_sqr, C3};
use crate::spectral_curve::ReducibleCurve;
use crate::{Complex, Error, Real, Result};

/// φ with all partial derivatives up to second order at (x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet<T> {
    pub x: T,
    pub y: T,
    pub phi: C3<T>,
    pub phi_x: C3<T>,
    pub phi_y: C3<T>,
    pub phi_xx: C3<T>,
    pub phi_xy: C3<T>,
    pub phi_yy: C3<T>,
}

/// Anything that produces a jet at every point of the plane.
pub trait JetField<T: Real>: Sync {
    fn jet(&self, x: T, y: T) -> SurfaceJet<T>;

    fn phi(&self, x: T, y: T) -> C3<T> {
        self.jet(x, y).phi
    }
}

/// φⁱ = αᵢψ₂(x, y, Qᵢ), each component an exponential sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFamily<T> {
    pub curve: ReducibleCurve<T>,
    components: [ExpSum<T>; 3],
}

impl<T: Real> SpectralFamily<T> {
    pub fn new(curve: &ReducibleCurve<T>) -> Self {
        let components =
            [0, 1, 2].map(|i| psi2_expsum(curve, curve.q[i]).scaled(Complex::from(curve.alpha[i])));
        Self {
            curve: curve.clone(),
            components,
        }
    }

    pub fn components(&self) -> &[ExpSum<T>; 3] {
        &self.components
    }
}

impl<T: Real> JetField<T> for SpectralFamily<T> {
    fn jet(&self, x: T, y: T) -> SurfaceJet<T> {
        let j = self.components.each_ref().map(|c| c.jet(x, y));
        SurfaceJet {
            x,
            y,
            phi: j.map(|s| s.v),
            phi_x: j.map(|s| s.x),
            phi_y: j.map(|s| s.y),
            phi_xx: j.map(|s| s.xx),
            phi_xy: j.map(|s| s.xy),
            phi_yy: j.map(|s| s.yy),
        }
    }
}

pub fn spectral_family_jet<T: Real>(curve: &ReducibleCurve<T>, x: T, y: T) -> SurfaceJet<T> {
    SpectralFamily::new(curve).jet(x, y)
}

/// The elementary family over the cone m·u₁² + n·u₂² = (m+n)·u₃²:
///
/// φ = (sin x·√(m+n)/√(2m+n)·e^{πimy},
///      cos x·√(m+n)/√(m+2n)·e^{πiny},
///      √(n cos²x/(m+2n) + m sin²x/(2m+n))·e^{−πi(m+n)y}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeFamily<T> {
    pub m: u32,
    pub n: u32,
    k1: T,
    k2: T,
    /// radicand R(x) = r0 + r1·sin²x
    r0: T,
    r1: T,
    freq: [T; 3],
}

impl<T: Real> ConeFamily<T> {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidCurve("cone family needs m, n >= 1".into()));
        }
        let (mf, nf) = (T::from_u32(m).unwrap(), T::from_u32(n).unwrap());
        let two = T::lit(2.0);
        let s = mf + nf;
        let pi = T::PI();
        Ok(Self {
            m,
            n,
            k1: (s / (two * mf + nf)).sqrt(),
            k2: (s / (mf + two * nf)).sqrt(),
            r0: nf / (mf + two * nf),
            r1: mf / (two * mf + nf) - nf / (mf + two * nf),
            freq: [pi * mf, pi * nf, -pi * s],
        })
    }
}

impl<T: Real> JetField<T> for ConeFamily<T> {
    fn jet(&self, x: T, y: T) -> SurfaceJet<T> {
        let two = T::lit(2.0);
        let (s, c) = x.sin_cos();
        let (s2, c2) = (two * x).sin_cos();
        // real amplitudes u(x) with first and second derivatives
        let rad = self.r0 + self.r1 * s * s;
        let rad_x = self.r1 * s2;
        let rad_xx = two * self.r1 * c2;
        let r = rad.sqrt();
        let r_x = rad_x / (two * r);
        let r_xx = rad_xx / (two * r) - rad_x * rad_x / (T::lit(4.0) * r * r * r);
        let u = [self.k1 * s, self.k2 * c, r];
        let u_x = [self.k1 * c, -self.k2 * s, r_x];
        let u_xx = [-self.k1 * s, -self.k2 * c, r_xx];

        let mut jet = SurfaceJet {
            x,
            y,
            phi: [Complex::zero(); 3],
            phi_x: [Complex::zero(); 3],
            phi_y: [Complex::zero(); 3],
            phi_xx: [Complex::zero(); 3],
            phi_xy: [Complex::zero(); 3],
            phi_yy: [Complex::zero(); 3],
        };
        for k in 0..3 {
            let w = self.freq[k];
            let e = Complex::new(T::zero(), w * y).exp();
            let iw = Complex::new(T::zero(), w);
            jet.phi[k] = e * u[k];
            jet.phi_x[k] = e * u_x[k];
            jet.phi_y[k] = e * iw * u[k];
            jet.phi_xx[k] = e * u_xx[k];
            jet.phi_xy[k] = e * iw * u_x[k];
            jet.phi_yy[k] = e * (-(w * w) * u[k]);
        }
        jet
    }
}

pub fn cone_family_jet<T: Real>(m: u32, n: u32, x: T, y: T) -> Result<SurfaceJet<T>> {
    Ok(ConeFamily::new(m, n)?.jet(x, y))
}

/// Plain point map wrapped as a jet field through finite differences.
pub struct FdField<F, T> {
    pub eval: F,
    pub h: T,
}

impl<T: Real, F: Fn(T, T) -> C3<T> + Sync> JetField<T> for FdField<F, T> {
    fn jet(&self, x: T, y: T) -> SurfaceJet<T> {
        fd_jet(&self.eval, x, y, self.h)
    }
    fn phi(&self, x: T, y: T) -> C3<T> {
        (self.eval)(x, y)
    }
}

/// Central finite-difference jet, O(h²): 2-point stencils for first
/// derivatives, 3-point for pure second derivatives and the 4-point cross
/// stencil for φ_xy.
pub fn fd_jet<T: Real>(eval: impl Fn(T, T) -> C3<T>, x: T, y: T, h: T) -> SurfaceJet<T> {
    let two = T::lit(2.0);
    let c = eval(x, y);
    let xp = eval(x + h, y);
    let xm = eval(x - h, y);
    let yp = eval(x, y + h);
    let ym = eval(x, y - h);
    let pp = eval(x + h, y + h);
    let pm = eval(x + h, y - h);
    let mp = eval(x - h, y + h);
    let mm = eval(x - h, y - h);
    let mut jet = SurfaceJet {
        x,
        y,
        phi: c,
        phi_x: [Complex::zero(); 3],
        phi_y: [Complex::zero(); 3],
        phi_xx: [Complex::zero(); 3],
        phi_xy: [Complex::zero(); 3],
        phi_yy: [Complex::zero(); 3],
    };
    for k in 0..3 {
        jet.phi_x[k] = (xp[k] - xm[k]) / (two * h);
        jet.phi_y[k] = (yp[k] - ym[k]) / (two * h);
        jet.phi_xx[k] = (xp[k] - c[k] * two + xm[k]) / (h * h);
        jet.phi_yy[k] = (yp[k] - c[k] * two + ym[k]) / (h * h);
        jet.phi_xy[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (T::lit(4.0) * h * h);
    }
    jet
}

/// Canonical representative of [φ] ∈ CP²: unit norm, first nonzero
/// component rotated onto the positive real axis.
pub fn hopf_representative<T: Real>(phi: &C3<T>) -> Result<C3<T>> {
    let n = norm_sqr(phi).sqrt();
    if !(n > T::zero()) {
        return Err(Error::ZeroVector);
    }
    let tiny = n * T::epsilon() * T::lit(16.0);
    let lead = phi.iter().find(|z| z.norm() > tiny).copied().unwrap();
    let rot = lead.conj() / lead.norm();
    Ok(phi.map(|z| z * rot / n))
}
