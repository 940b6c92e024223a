//! Two-point Baker–Akhiezer functions.
//!
//! On the reducible curve the function is explicit:
//!
//! ```text
//! ψ₁ = d·e^{ixz₁}                                  (first component)
//! ψ₂ = e^{iyz₂}·(f₂(x, y) + g₂(x, y)/(z₂ − γ))      (second component)
//! ```
//!
//! where f₂ and g₂ solve the gluing conditions ψ₁(±a) = ψ₂(±b). With
//! θ = ax − by:
//!
//! ```text
//! f₂ = d/(2b)·((b − γ)e^{iθ} + (b + γ)e^{−iθ})
//! g₂ = d/(2b)·(b² − γ²)(e^{iθ} − e^{−iθ})
//! ```
//!
//! For a general curve, [`ba_theta_assembly`] evaluates the theta-function
//! formula from caller-supplied period data.

use num_traits::{One, Zero};

use crate::expsum::ExpSum;
use crate::rational_form::Component;
use crate::spectral_curve::ReducibleCurve;
use crate::theta::{riemann_theta, LatticeTruncation, PeriodMatrix};
use crate::{Complex, Error, Real, Result};

/// Threshold below which a theta denominator counts as vanishing.
pub const THETA_DENOMINATOR_FLOOR: f64 = 1e-13;

/// Punctures carrying the essential singularities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Puncture {
    P1,
    P2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaRationalValue<T> {
    pub f1: T,
    pub f2: T,
    pub g2: Complex<T>,
    pub psi: Complex<T>,
}

fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// f₂ as an exponential sum in (x, y) (complex-valued before the reality check).
pub fn f2_expsum<T: Real>(curve: &ReducibleCurve<T>) -> ExpSum<T> {
    let (a, b, d) = (curve.a, curve.b, curve.d);
    let g = curve.gamma();
    let k = Complex::from(d / (T::lit(2.0) * b));
    let mut s = ExpSum::new();
    s.push(k * (Complex::from(b) - g), a, -b);
    s.push(k * (Complex::from(b) + g), -a, b);
    s
}

pub fn g2_expsum<T: Real>(curve: &ReducibleCurve<T>) -> ExpSum<T> {
    let (a, b, d) = (curve.a, curve.b, curve.d);
    let g = curve.gamma();
    let k = Complex::from(d / (T::lit(2.0) * b)) * (Complex::from(b * b) - g * g);
    let mut s = ExpSum::new();
    s.push(k, a, -b);
    s.push(-k, -a, b);
    s
}

/// ψ₂(·, ·, z) for a real point z ≠ γ of the second component, as an
/// exponential sum in (x, y):
/// d/(2b(z−γ))·((b−γ)(z+b)e^{i(ax+(z−b)y)} + (b+γ)(z−b)e^{i(−ax+(z+b)y)}).
pub fn psi2_expsum<T: Real>(curve: &ReducibleCurve<T>, z: T) -> ExpSum<T> {
    let (a, b, d) = (curve.a, curve.b, curve.d);
    let g = curve.gamma();
    let zc = Complex::from(z);
    let k = Complex::from(d / (T::lit(2.0) * b)) / (zc - g);
    let mut s = ExpSum::new();
    s.push(k * (Complex::from(b) - g) * (z + b), a, z - b);
    s.push(k * (Complex::from(b) + g) * (z - b), -a, z + b);
    s
}

/// Complex value of f₂; its imaginary part vanishes for real (x, y).
pub fn f2_complex<T: Real>(curve: &ReducibleCurve<T>, x: T, y: T) -> Complex<T> {
    f2_expsum(curve).eval(x, y)
}

pub fn g2_value<T: Real>(curve: &ReducibleCurve<T>, x: T, y: T) -> Complex<T> {
    g2_expsum(curve).eval(x, y)
}

/// ψ at an arbitrary point of either component.
pub fn psi_at<T: Real>(
    curve: &ReducibleCurve<T>,
    x: T,
    y: T,
    component: Component,
    coord: Complex<T>,
) -> Result<Complex<T>> {
    let i = i_unit::<T>();
    match component {
        Component::First => Ok((i * coord * x).exp() * curve.d),
        Component::Second => {
            let g = curve.gamma();
            if coord == g {
                return Err(Error::AtDivisor(format!("{coord}")));
            }
            let f2 = f2_complex(curve, x, y);
            let g2 = g2_value(curve, x, y);
            Ok((i * coord * y).exp() * (f2 + g2 / (coord - g)))
        }
    }
}

pub fn ba_rational_eval<T: Real>(
    curve: &ReducibleCurve<T>,
    x: T,
    y: T,
    component: Component,
    coord: Complex<T>,
) -> Result<BaRationalValue<T>> {
    let psi = psi_at(curve, x, y, component, coord)?;
    Ok(BaRationalValue {
        f1: curve.d,
        f2: f2_complex(curve, x, y).re,
        g2: g2_value(curve, x, y),
        psi,
    })
}

/// max(|ψ₁(a) − ψ₂(b)|, |ψ₁(−a) − ψ₂(−b)|) / (1 + |ψ₁(a)|).
pub fn consistency_defect<T: Real>(curve: &ReducibleCurve<T>, x: T, y: T) -> Result<T> {
    let (a, b) = (Complex::from(curve.a), Complex::from(curve.b));
    let p1a = psi_at(curve, x, y, Component::First, a)?;
    let p2b = psi_at(curve, x, y, Component::Second, b)?;
    let p1m = psi_at(curve, x, y, Component::First, -a)?;
    let p2m = psi_at(curve, x, y, Component::Second, -b)?;
    Ok((p1a - p2b).norm().max((p1m - p2m).norm()) / (T::one() + p1a.norm()))
}

/// |ψ(x, y, τP) − conj ψ(x, y, P)| with τ(z) = −z̄ on each component.
pub fn ba_conjugation_defect<T: Real>(
    curve: &ReducibleCurve<T>,
    x: T,
    y: T,
    component: Component,
    coord: Complex<T>,
) -> Result<T> {
    let tau = -coord.conj();
    let lhs = psi_at(curve, x, y, component, tau)?;
    let rhs = psi_at(curve, x, y, component, coord)?.conj();
    Ok((lhs - rhs).norm())
}

/// Coefficients C₀, C₁, …, C_order of ψ·e^{−ikt} = Σ Cₙ (ik)^{−n} at a
/// puncture, with local parameters k₁ = z₁ and k₂ = z₂.
///
/// At P₁ this is (d, 0, 0, …). At P₂ the geometric series
/// 1/(z − γ) = Σ γ^{n−1} z^{−n} gives C₀ = f₂ and Cₙ = iⁿγ^{n−1}g₂.
pub fn ba_essential_singularity_coeffs<T: Real>(
    curve: &ReducibleCurve<T>,
    x: T,
    y: T,
    puncture: Puncture,
    order: usize,
) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(order + 1);
    match puncture {
        Puncture::P1 => {
            out.push(Complex::from(curve.d));
            out.extend(std::iter::repeat(Complex::zero()).take(order));
        }
        Puncture::P2 => {
            out.push(f2_complex(curve, x, y));
            let g2 = g2_value(curve, x, y);
            let (i, g) = (i_unit::<T>(), curve.gamma());
            let mut ipow = Complex::<T>::one();
            let mut gpow = Complex::<T>::one();
            for n in 1..=order {
                ipow = ipow * i;
                if n > 1 {
                    gpow = gpow * g;
                }
                out.push(ipow * gpow * g2);
            }
        }
    }
    out
}

/// Period data for the theta-function formula of the Baker–Akhiezer function.
/// All transcendental quantities are supplied precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaBaInputs<T> {
    pub b: PeriodMatrix<T>,
    /// z = K − ΣA(γᵢ), Riemann constants folded in.
    pub z: Vec<Complex<T>>,
    /// b-periods of Ω¹ and Ω².
    pub u: Vec<Complex<T>>,
    pub v: Vec<Complex<T>>,
    pub abel_p: Vec<Complex<T>>,
    pub abel_r: Vec<Complex<T>>,
    /// Values of the exponential integrals ∫Ω¹, ∫Ω² at P and at r.
    pub exp1_p: Complex<T>,
    pub exp2_p: Complex<T>,
    pub exp1_r: Complex<T>,
    pub exp2_r: Complex<T>,
    pub d: T,
}

impl<T: Real> ThetaBaInputs<T> {
    pub fn validate(&self) -> Result<()> {
        let g = self.b.genus();
        for v in [&self.z, &self.u, &self.v, &self.abel_p, &self.abel_r] {
            if v.len() != g {
                return Err(Error::DimensionMismatch {
                    expected: g,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }
}

fn psi_tilde<T: Real>(
    inp: &ThetaBaInputs<T>,
    abel: &[Complex<T>],
    e1: Complex<T>,
    e2: Complex<T>,
    x: T,
    y: T,
    trunc: &LatticeTruncation<T>,
) -> Result<Complex<T>> {
    let base: Vec<Complex<T>> = abel.iter().zip(&inp.z).map(|(p, z)| *p + *z).collect();
    let moved: Vec<Complex<T>> = base
        .iter()
        .zip(inp.u.iter().zip(&inp.v))
        .map(|(b, (u, v))| *b + *u * x + *v * y)
        .collect();
    let den = riemann_theta(&base, &inp.b, trunc)?;
    if den.norm() < T::lit(THETA_DENOMINATOR_FLOOR) {
        return Err(Error::DegenerateDivisor(den.norm().to_f64().unwrap_or(0.0)));
    }
    let num = riemann_theta(&moved, &inp.b, trunc)?;
    let two_pi_i = Complex::new(T::zero(), T::lit(2.0) * T::PI());
    Ok(num / den * (two_pi_i * (e1 * x + e2 * y)).exp())
}

/// ψ(x, y, P) = d·ψ̃(x, y, P)/ψ̃(x, y, r) with
/// ψ̃ = θ(A + xU + yV + z)/θ(A + z)·exp(2πi(x∫Ω¹ + y∫Ω²)).
pub fn ba_theta_assembly<T: Real>(
    inp: &ThetaBaInputs<T>,
    x: T,
    y: T,
    trunc: &LatticeTruncation<T>,
) -> Result<Complex<T>> {
    inp.validate()?;
    let at_p = psi_tilde(inp, &inp.abel_p, inp.exp1_p, inp.exp2_p, x, y, trunc)?;
    let at_r = psi_tilde(inp, &inp.abel_r, inp.exp1_r, inp.exp2_r, x, y, trunc)?;
    if at_r.norm() < T::lit(THETA_DENOMINATOR_FLOOR) {
        return Err(Error::DegenerateDivisor(
            at_r.norm().to_f64().unwrap_or(0.0),
        ));
    }
    Ok(at_p / at_r * inp.d)
}
