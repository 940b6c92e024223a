//! Finite sums Σ cₖ·exp(i(pₖx + qₖy)) with exact partial derivatives.

use num_traits::Zero;

use crate::{Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm<T> {
    pub coef: Complex<T>,
    pub p: T,
    pub q: T,
}

/// Value and partial derivatives up to second order at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarJet<T> {
    pub v: Complex<T>,
    pub x: Complex<T>,
    pub y: Complex<T>,
    pub xx: Complex<T>,
    pub xy: Complex<T>,
    pub yy: Complex<T>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum<T> {
    pub terms: Vec<ExpTerm<T>>,
}

impl<T: Real> ExpSum<T> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn push(&mut self, coef: Complex<T>, p: T, q: T) {
        self.terms.push(ExpTerm { coef, p, q });
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coef: t.coef * s,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn eval(&self, x: T, y: T) -> Complex<T> {
        self.terms.iter().fold(Complex::zero(), |acc, t| {
            acc + t.coef * Complex::new(T::zero(), t.p * x + t.q * y).exp()
        })
    }

    /// ∂ₓ^j ∂ᵧ^k at (x, y): each term picks up (ip)^j (iq)^k.
    pub fn derivative(&self, j: u32, k: u32, x: T, y: T) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        self.terms.iter().fold(Complex::zero(), |acc, t| {
            let f = (i * t.p).powu(j) * (i * t.q).powu(k);
            acc + t.coef * f * Complex::new(T::zero(), t.p * x + t.q * y).exp()
        })
    }

    pub fn jet(&self, x: T, y: T) -> ScalarJet<T> {
        let i = Complex::new(T::zero(), T::one());
        let mut j = ScalarJet {
            v: Complex::zero(),
            x: Complex::zero(),
            y: Complex::zero(),
            xx: Complex::zero(),
            xy: Complex::zero(),
            yy: Complex::zero(),
        };
        for t in &self.terms {
            let e = t.coef * Complex::new(T::zero(), t.p * x + t.q * y).exp();
            j.v = j.v + e;
            j.x = j.x + e * i * t.p;
            j.y = j.y + e * i * t.q;
            j.xx = j.xx - e * (t.p * t.p);
            j.xy = j.xy - e * (t.p * t.q);
            j.yy = j.yy - e * (t.q * t.q);
        }
        j
    }
}
