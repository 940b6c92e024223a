//! Rational 1-forms on a projective line and their residue calculus.
//!
//! A form is stored as `scale · N(z) / ∏(z − rⱼ)^{kⱼ} dz`. Everything here is
//! generic over [`Field`], so the same code runs on floats, complex numbers
//! and exact rationals.

use crate::{Error, Field, Result};

/// Which component of the reducible curve a form lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Component {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalOneForm<F> {
    pub component: Component,
    /// Numerator coefficients in ascending powers of z.
    pub numerator: Vec<F>,
    /// Denominator roots with multiplicities; the denominator is monic.
    pub poles: Vec<(F, u32)>,
    pub scale: F,
}

fn horner<F: Field>(coeffs: &[F], z: &F) -> F {
    coeffs
        .iter()
        .rev()
        .fold(F::zero(), |acc, c| acc * z.clone() + c.clone())
}

fn pow<F: Field>(base: &F, k: u32) -> F {
    (0..k).fold(F::one(), |acc, _| acc * base.clone())
}

/// Ascending coefficients of ∏(z − rⱼ)^{kⱼ}.
pub fn expand_roots<F: Field>(roots: &[(F, u32)]) -> Vec<F> {
    let mut poly = vec![F::one()];
    for (r, k) in roots {
        for _ in 0..*k {
            let mut next = vec![F::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + c.clone();
                next[i] = next[i].clone() - c.clone() * r.clone();
            }
            poly = next;
        }
    }
    poly
}

impl<F: Field> RationalOneForm<F> {
    pub fn new(component: Component, numerator: Vec<F>, poles: Vec<(F, u32)>, scale: F) -> Self {
        Self {
            component,
            numerator,
            poles,
            scale,
        }
    }

    pub fn numerator_degree(&self) -> Option<usize> {
        self.numerator.iter().rposition(|c| !c.is_zero())
    }

    pub fn denominator_degree(&self) -> usize {
        self.poles.iter().map(|(_, k)| *k as usize).sum()
    }

    /// Value of the coefficient function at a non-pole point.
    pub fn eval(&self, z: &F) -> F {
        let den = self.poles.iter().fold(F::one(), |acc, (r, k)| {
            acc * pow(&(z.clone() - r.clone()), *k)
        });
        self.scale.clone() * horner(&self.numerator, z) / den
    }

    /// Residue at a listed simple pole by deflated evaluation:
    /// scale·N(p) / ∏_{other roots}(p − r)^k.
    pub fn residue_simple(&self, pole: &F) -> Result<F> {
        let (_, mult) = self
            .poles
            .iter()
            .find(|(r, _)| r == pole)
            .ok_or_else(|| Error::NotAPole(format!("{pole:?}")))?;
        if *mult != 1 {
            return Err(Error::NotSimplePole {
                pole: format!("{pole:?}"),
                multiplicity: *mult,
            });
        }
        let deflated = self
            .poles
            .iter()
            .filter(|(r, _)| r != pole)
            .fold(F::one(), |acc, (r, k)| {
                acc * pow(&(pole.clone() - r.clone()), *k)
            });
        Ok(self.scale.clone() * horner(&self.numerator, pole) / deflated)
    }

    /// Laurent expansion at z = ∞ in w = 1/z: returns the exponent of the
    /// leading power e and the coefficients of w^e, w^{e+1}, … (`terms` of them).
    pub fn laurent_at_infinity(&self, terms: usize) -> (i64, Vec<F>) {
        let m = self.denominator_degree();
        let Some(n) = self.numerator_degree() else {
            return (0, vec![F::zero(); terms]);
        };
        // Ω = −scale · w^{m−n−2} · Ñ(w)/D̃(w) dw with reversed polynomials
        let num_rev: Vec<F> = self.numerator[..=n].iter().rev().cloned().collect();
        let den_rev: Vec<F> = expand_roots(&self.poles).into_iter().rev().collect();
        let mut q: Vec<F> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut s = num_rev.get(k).cloned().unwrap_or_else(F::zero);
            for j in 1..=k.min(den_rev.len() - 1) {
                s = s - den_rev[j].clone() * q[k - j].clone();
            }
            q.push(s / den_rev[0].clone());
        }
        let neg_scale = F::zero() - self.scale.clone();
        let coeffs = q.into_iter().map(|c| neg_scale.clone() * c).collect();
        (m as i64 - n as i64 - 2, coeffs)
    }

    /// Residue at z = ∞ (coefficient of w⁻¹ dw).
    pub fn residue_at_infinity(&self) -> F {
        let (e, _) = self.laurent_at_infinity(0);
        if e >= 0 {
            return F::zero();
        }
        let k = (-1 - e) as usize;
        let (_, c) = self.laurent_at_infinity(k + 1);
        c[k].clone()
    }

    /// Coefficients of Ω = (c·w + q·w² + d₃·w³ + …)dw at z = ∞, i.e. the
    /// coefficients of w¹ … w^order. Requires a zero at infinity.
    pub fn expansion_at_infinity(&self, order: usize) -> Result<Vec<F>> {
        let (e, _) = self.laurent_at_infinity(0);
        if e < 0 {
            return Err(Error::PoleAtInfinity);
        }
        if e == 0 {
            return Err(Error::InvalidCurve(
                "form does not vanish at infinity".into(),
            ));
        }
        let shift = (e - 1) as usize;
        let (_, c) = self.laurent_at_infinity(order.saturating_sub(shift));
        let mut out = vec![F::zero(); shift.min(order)];
        out.extend(c);
        Ok(out)
    }

    /// Sum of residues over all finite poles (all must be simple).
    pub fn finite_residue_sum(&self) -> Result<F> {
        self.poles
            .iter()
            .try_fold(F::zero(), |acc, (r, _)| Ok(acc + self.residue_simple(r)?))
    }
}
