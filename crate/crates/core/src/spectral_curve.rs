//! The reducible rational spectral curve: two copies of CP¹ glued at two
//! points (±a on the first component, ±b on the second).
//!
//! Marked points: P₁ = ∞ and r = 0 on the first component; P₂ = ∞, the real
//! points Q₁, Q₂, Q₃ and the divisor point γ = iΓ on the second. The regular
//! differential is Ω = (Ω₁, Ω₂) with
//!
//! ```text
//! Ω₁ = dz / (z (z² − a²))
//! Ω₂ = c (z² + Γ²) dz / ((z − Q₁)(z − Q₂)(z − Q₃)(z² − b²))
//! ```
//!
//! and Q₂ = −Q₁, which forces Q₃ = 0 and Q₁ + Q₂ + Q₃ = 0, the condition for
//! the w² term of Ω₂ at infinity to vanish.

use crate::rational_form::{Component, RationalOneForm};
use crate::{Complex, Error, Field, Real, Result};

/// The field-generic part of the curve: marked points, the normalisation
/// constant `c` and both forms. No square roots, so it also runs over Q.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveConstants<F> {
    pub a: F,
    pub b: F,
    pub q: [F; 3],
    pub gamma_sq: F,
    pub c: F,
    pub omega1: RationalOneForm<F>,
    pub omega2: RationalOneForm<F>,
}

/// Merges equal roots into a single entry with summed multiplicity.
fn merge_roots<F: Field>(roots: Vec<F>) -> Vec<(F, u32)> {
    let mut out: Vec<(F, u32)> = Vec::new();
    for r in roots {
        match out.iter_mut().find(|(x, _)| *x == r) {
            Some(e) => e.1 += 1,
            None => out.push((r, 1)),
        }
    }
    out
}

/// Builds Q₃, c and the two forms for an explicit choice of Q₂.
///
/// Q₃ = −b²(Q₁+Q₂)/(b²+Q₁Q₂) comes from regularity at both gluing points and
/// c = −b(b−Q₁)(b−Q₂)(b−Q₃)/(a²(b²+Γ²)) from Res_a Ω₁ + Res_b Ω₂ = 0.
pub fn curve_constants_with_q2<F: Field>(
    a: F,
    b: F,
    q1: F,
    q2: F,
    gamma_sq: F,
) -> CurveConstants<F> {
    let b2 = b.clone() * b.clone();
    let q3 =
        F::zero() - b2.clone() * (q1.clone() + q2.clone()) / (b2.clone() + q1.clone() * q2.clone());
    let c = F::zero()
        - b.clone()
            * (b.clone() - q1.clone())
            * (b.clone() - q2.clone())
            * (b.clone() - q3.clone())
            / (a.clone() * a.clone() * (b2 + gamma_sq.clone()));
    let omega1 = RationalOneForm::new(
        Component::First,
        vec![F::one()],
        vec![(F::zero(), 1), (a.clone(), 1), (F::zero() - a.clone(), 1)],
        F::one(),
    );
    let omega2 = RationalOneForm::new(
        Component::Second,
        vec![gamma_sq.clone(), F::zero(), F::one()],
        merge_roots(vec![
            q1.clone(),
            q2.clone(),
            q3.clone(),
            b.clone(),
            F::zero() - b.clone(),
        ]),
        c.clone(),
    );
    CurveConstants {
        a,
        b,
        q: [q1, q2, q3],
        gamma_sq,
        c,
        omega1,
        omega2,
    }
}

/// Curve constants with Q₂ = −Q₁.
pub fn curve_constants<F: Field>(a: F, b: F, q1: F, gamma_sq: F) -> CurveConstants<F> {
    let q2 = F::zero() - q1.clone();
    curve_constants_with_q2(a, b, q1, q2, gamma_sq)
}

impl<F: Field> CurveConstants<F> {
    /// (Res_a Ω₁ + Res_b Ω₂, Res_{−a} Ω₁ + Res_{−b} Ω₂).
    pub fn regularity_sums(&self) -> Result<(F, F)> {
        let neg = |v: &F| F::zero() - v.clone();
        let plus = self.omega1.residue_simple(&self.a)? + self.omega2.residue_simple(&self.b)?;
        let minus = self.omega1.residue_simple(&neg(&self.a))?
            + self.omega2.residue_simple(&neg(&self.b))?;
        Ok((plus, minus))
    }
}

/// Fully derived spectral data for the reducible curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducibleCurve<T> {
    pub a: T,
    pub b: T,
    pub q: [T; 3],
    pub gamma_im: T,
    /// Normalisation ψ(x, y, r) = d; positive branch of sqrt(−1/Res_r Ω).
    pub d: T,
    /// Scale of Ω₂.
    pub c: T,
    /// αᵢ = sqrt(Res_{Qᵢ} Ω₂).
    pub alpha: [T; 3],
    pub res_q: [T; 3],
    pub res_r: T,
    /// Leading coefficient of Ω at P₁ (in w₁ = 1/z₁).
    pub c1_exp: T,
    /// Leading coefficient of Ω at P₂ (in w₂ = 1/z₂).
    pub c2_exp: T,
    pub omega1: RationalOneForm<T>,
    pub omega2: RationalOneForm<T>,
}

/// Derives every constant of the curve from (a, b, Q₁, Γ).
pub fn derive_constants<T: Real>(a: T, b: T, q1: T, gamma_im: T) -> Result<ReducibleCurve<T>> {
    for (name, v) in [("a", a), ("b", b), ("q1", q1), ("gamma_im", gamma_im)] {
        if !v.is_finite() {
            return Err(Error::InvalidCurve(format!("{name} must be finite")));
        }
    }
    if !(a > T::zero()) {
        return Err(Error::InvalidCurve("a must be > 0".into()));
    }
    if !(b > T::zero()) {
        return Err(Error::InvalidCurve("b must be > 0".into()));
    }
    if gamma_im == T::zero() {
        return Err(Error::InvalidCurve("gamma_im must be nonzero".into()));
    }
    if q1 == T::zero() {
        return Err(Error::InvalidCurve("q1 must be nonzero".into()));
    }
    if !(q1.abs() > b) {
        return Err(Error::InvalidCurve(format!(
            "|q1| = {} must exceed b = {} (otherwise Res_Q3 <= 0)",
            q1.abs(),
            b
        )));
    }
    let k = curve_constants(a, b, q1, gamma_im * gamma_im);
    if k.q.iter().any(|qi| qi.abs() == b) {
        return Err(Error::InvalidCurve(
            "a marked point Q_i coincides with ±b".into(),
        ));
    }

    let mut res_q = [T::zero(); 3];
    for (i, qi) in k.q.iter().enumerate() {
        res_q[i] = k.omega2.residue_simple(qi)?;
        if !(res_q[i] > T::zero()) {
            return Err(Error::InvalidCurve(format!(
                "Res_Q{} Omega = {} is not positive",
                i + 1,
                res_q[i]
            )));
        }
    }
    let res_r = k.omega1.residue_simple(&T::zero())?;
    let d = (-T::one() / res_r).sqrt();
    let alpha = res_q.map(|r| r.sqrt());
    let c1_exp = k.omega1.expansion_at_infinity(1)?[0];
    let c2_exp = k.omega2.expansion_at_infinity(1)?[0];

    let curve = ReducibleCurve {
        a,
        b,
        q: k.q,
        gamma_im,
        d,
        c: k.c,
        alpha,
        res_q,
        res_r,
        c1_exp,
        c2_exp,
        omega1: k.omega1,
        omega2: k.omega2,
    };
    let tol = T::lit(256.0) * T::epsilon() * (T::one() + T::one() / (a * a));
    let defect = regularity_defect(&curve);
    if !(defect < tol) {
        return Err(Error::InvalidCurve(format!(
            "regularity defect {defect} after construction"
        )));
    }
    Ok(curve)
}

/// max over both gluing points of |Res Ω₁ + Res Ω₂|.
pub fn regularity_defect<T: Real>(curve: &ReducibleCurve<T>) -> T {
    let sum = |p1: T, p2: T| -> T {
        match (
            curve.omega1.residue_simple(&p1),
            curve.omega2.residue_simple(&p2),
        ) {
            (Ok(r1), Ok(r2)) => (r1 + r2).abs(),
            _ => T::infinity(),
        }
    };
    sum(curve.a, curve.b).max(sum(-curve.a, -curve.b))
}

impl<T: Real> ReducibleCurve<T> {
    /// The divisor point γ = iΓ on the second component.
    pub fn gamma(&self) -> Complex<T> {
        Complex::new(T::zero(), self.gamma_im)
    }

    /// Coefficients of w, w², … of Ω at P₁ (`Component::First`) or P₂.
    pub fn expansion_at(&self, puncture: Component, order: usize) -> Result<Vec<T>> {
        match puncture {
            Component::First => self.omega1.expansion_at_infinity(order),
            Component::Second => self.omega2.expansion_at_infinity(order),
        }
    }

    /// |q|/|c| at both punctures, where Ω = (c·w + q·w² + …)dw; the surface is
    /// minimal when both vanish.
    pub fn relative_w2_coefficients(&self) -> Result<[T; 2]> {
        let rel = |v: Vec<T>| v[1].abs() / v[0].abs();
        Ok([
            rel(self.expansion_at(Component::First, 2)?),
            rel(self.expansion_at(Component::Second, 2)?),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn sphere_constants() {
        let k = derive_constants(1.0f64, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(k.q, [2.0, -2.0, 0.0]);
        assert!((k.c - 1.5).abs() < 1e-15);
        assert!((k.d - 1.0).abs() < 1e-15);
        assert!((k.c1_exp + 1.0).abs() < 1e-15);
        assert!((k.c2_exp + 1.5).abs() < 1e-15);
        let a12 = 5.0f64.sqrt() / 4.0;
        assert!((k.alpha[0] - a12).abs() < 1e-15);
        assert!((k.alpha[1] - a12).abs() < 1e-15);
        assert!((k.alpha[2] - (3.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!(regularity_defect(&k) < 1e-13);
    }

    #[test]
    fn rejects_invalid_parameters() {
        for (a, b, q1, g) in [
            (1.0, 1.0, 0.5, 1.0),
            (1.0, 1.0, 1.0, 1.0),
            (1.0, 1.0, -1.0, 1.0),
            (1.0, 1.0, 0.0, 1.0),
            (0.0, 1.0, 2.0, 1.0),
            (1.0, -1.0, 2.0, 1.0),
            (1.0, 1.0, 2.0, 0.0),
            (f64::NAN, 1.0, 2.0, 1.0),
        ] {
            assert!(
                matches!(derive_constants(a, b, q1, g), Err(Error::InvalidCurve(_))),
                "{a} {b} {q1} {g}"
            );
        }
    }

    #[test]
    fn perturbed_scale_breaks_regularity() {
        let mut k = derive_constants(1.0f64, 1.0, 2.0, 1.0).unwrap();
        let res_b = k.omega2.residue_simple(&1.0).unwrap();
        k.omega2.scale *= 1.1;
        let d = regularity_defect(&k);
        assert!((d - 0.1 * res_b.abs()).abs() < 1e-14);
    }

    #[test]
    fn exact_regularity_for_sphere_data() {
        type Q = Ratio<i64>;
        let one = Q::from_integer(1);
        let k = curve_constants(one, one, Q::from_integer(2), one);
        assert_eq!(k.q[2], Q::from_integer(0));
        assert_eq!(k.c, Q::new(3, 2));
        assert_eq!(
            k.regularity_sums().unwrap(),
            (Q::from_integer(0), Q::from_integer(0))
        );
        assert_eq!(
            k.omega2.residue_simple(&Q::from_integer(2)).unwrap(),
            Q::new(5, 16)
        );
        assert_eq!(
            k.omega2.residue_simple(&Q::from_integer(0)).unwrap(),
            Q::new(3, 8)
        );
        let e = k.omega2.expansion_at_infinity(3).unwrap();
        assert_eq!(e[0], Q::new(-3, 2));
        assert_eq!(e[1], Q::from_integer(0));
    }

    #[test]
    fn forced_equal_q2_spoils_minimality() {
        type Q = Ratio<i64>;
        let (b, q1) = (Q::from_integer(1), Q::from_integer(2));
        let k = curve_constants_with_q2(Q::from_integer(1), b, q1, q1, Q::from_integer(1));
        assert_eq!(k.omega2.poles[0], (q1, 2));
        let e = k.omega2.expansion_at_infinity(2).unwrap();
        // w² coefficient = −c·(Q₁+Q₂+Q₃) with Q₁+Q₂+Q₃ = 2Q₁³/(b²+Q₁²)
        let s = q1 * q1 * q1 * Q::from_integer(2) / (b * b + q1 * q1);
        assert_eq!(e[1], -k.c * s);
        assert_ne!(e[1], Q::from_integer(0));
    }
}
