//! Riemann theta function by truncated lattice summation.
//!
//! θ(z | B) = Σ_{m ∈ Zᵍ} exp(πi(Bm, m) + 2πi(m, z)).
//!
//! Terms are visited in shells of increasing |m|∞ and accumulated with
//! Neumaier compensation, so the result does not depend on platform-specific
//! reassociation. No reduction of B to the Siegel fundamental domain is
//! attempted: badly conditioned period matrices need a larger radius.

use num_traits::Zero;

use crate::linalg::{cholesky, symmetric_eigenvalues, CompensatedSum};
use crate::{Complex, Error, Real, Result};

/// Symmetric g×g complex matrix with positive-definite imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMatrix<T> {
    genus: usize,
    entries: Vec<Complex<T>>,
    lambda_min: T,
}

impl<T: Real> PeriodMatrix<T> {
    /// Builds the matrix from the upper triangle of `rows` (the lower triangle
    /// is ignored and overwritten), so symmetry is exact.
    pub fn from_upper_triangle(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let g = rows.len();
        if g == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let mut entries = vec![Complex::zero(); g * g];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != g {
                return Err(Error::DimensionMismatch {
                    expected: g,
                    got: row.len(),
                });
            }
            for j in i..g {
                if !(row[j].re.is_finite() && row[j].im.is_finite()) {
                    return Err(Error::Parse(format!("non-finite entry B[{i}][{j}]")));
                }
                entries[i * g + j] = row[j];
                entries[j * g + i] = row[j];
            }
        }
        let im: Vec<Vec<T>> = (0..g)
            .map(|i| (0..g).map(|j| entries[i * g + j].im).collect())
            .collect();
        if cholesky(&im).is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        let lambda_min = symmetric_eigenvalues(&im)[0];
        if !(lambda_min > T::zero()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            genus: g,
            entries,
            lambda_min,
        })
    }

    /// Builds the matrix from full rows, rejecting input whose lower and upper
    /// triangles disagree beyond a few ulps of the largest entry.
    pub fn new(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let g = rows.len();
        let mut asym = T::zero();
        let mut scale = T::one();
        for i in 0..g {
            if rows[i].len() != g {
                return Err(Error::DimensionMismatch {
                    expected: g,
                    got: rows[i].len(),
                });
            }
            for j in 0..g {
                scale = scale.max(rows[i][j].norm());
                asym = asym.max((rows[i][j] - rows[j][i]).norm());
            }
        }
        if asym > T::lit(64.0) * T::epsilon() * scale {
            return Err(Error::NotSymmetric(asym.to_f64().unwrap_or(f64::NAN)));
        }
        Self::from_upper_triangle(rows)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.genus + j]
    }

    /// Smallest eigenvalue of Im(B).
    pub fn lambda_min(&self) -> T {
        self.lambda_min
    }

    /// B·m for an integer vector m.
    pub fn apply_int(&self, m: &[i64]) -> Vec<Complex<T>> {
        let g = self.genus;
        (0..g)
            .map(|i| {
                (0..g).fold(Complex::zero(), |acc, j| {
                    acc + self.get(i, j) * T::from_i64(m[j]).unwrap()
                })
            })
            .collect()
    }

    /// The quadratic form (Bm, m).
    pub fn quad_int(&self, m: &[i64]) -> Complex<T> {
        let bm = self.apply_int(m);
        bm.iter().zip(m).fold(Complex::zero(), |acc, (v, &k)| {
            acc + *v * T::from_i64(k).unwrap()
        })
    }
}

/// Box truncation |m|∞ ≤ radius of the theta lattice sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeTruncation<T> {
    pub radius: u32,
    /// Upper bound on the number of summed terms, (2R+1)^g.
    pub cap: u128,
    _scalar: std::marker::PhantomData<T>,
}

pub const DEFAULT_TERM_CAP: u128 = 50_000_000;

impl<T: Real> LatticeTruncation<T> {
    pub fn new(radius: u32) -> Result<Self> {
        Self::with_cap(radius, DEFAULT_TERM_CAP)
    }

    pub fn with_cap(radius: u32, cap: u128) -> Result<Self> {
        if radius < 1 {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Self {
            radius,
            cap,
            _scalar: std::marker::PhantomData,
        })
    }

    /// Smallest radius R ≥ 1 with exp(−πλ_min R²)·exp(2π·|Im z|∞·R·g) < 1e−14.
    pub fn auto(b: &PeriodMatrix<T>, im_z_max: T) -> Self {
        let pi = T::PI();
        let lam = b.lambda_min();
        let g = T::from_usize(b.genus()).unwrap();
        let s = im_z_max.abs();
        let target = T::lit(14.0) * T::LN_10();
        let sg = s * g;
        let r = (sg + (sg * sg + lam * target / pi).sqrt()) / lam;
        let mut radius = r.ceil().to_u32().unwrap_or(u32::MAX).max(1);
        // the ceil can land exactly on the root; step until strictly below
        loop {
            let rr = T::from_u32(radius).unwrap();
            if pi * lam * rr * rr - T::lit(2.0) * pi * sg * rr > target {
                break;
            }
            radius += 1;
        }
        Self::new(radius).expect("radius >= 1")
    }

    /// Radius chosen by [`Self::auto`] for evaluation at `z`.
    pub fn auto_for(b: &PeriodMatrix<T>, z: &[Complex<T>]) -> Self {
        let s = z.iter().fold(T::zero(), |m, v| m.max(v.im.abs()));
        Self::auto(b, s)
    }

    pub fn term_count(&self, genus: usize) -> u128 {
        (2 * self.radius as u128 + 1).saturating_pow(genus as u32)
    }
}

fn check_dims<T: Real>(z: &[Complex<T>], b: &PeriodMatrix<T>) -> Result<()> {
    if z.len() != b.genus() {
        return Err(Error::DimensionMismatch {
            expected: b.genus(),
            got: z.len(),
        });
    }
    Ok(())
}

/// Visits every m with |m|∞ = shell, in lexicographic order.
fn for_each_in_shell(g: usize, shell: i64, mut f: impl FnMut(&[i64])) {
    let mut m = vec![-shell; g];
    loop {
        if m.iter().any(|v| v.abs() == shell) {
            f(&m);
        }
        let mut k = 0;
        loop {
            if k == g {
                return;
            }
            if m[k] < shell {
                m[k] += 1;
                break;
            }
            m[k] = -shell;
            k += 1;
        }
    }
}

/// Truncated theta series θ(z | B) over |m|∞ ≤ R.
pub fn riemann_theta<T: Real>(
    z: &[Complex<T>],
    b: &PeriodMatrix<T>,
    trunc: &LatticeTruncation<T>,
) -> Result<Complex<T>> {
    check_dims(z, b)?;
    let g = b.genus();
    let needed = trunc.term_count(g);
    if needed > trunc.cap {
        return Err(Error::TruncationCapExceeded {
            needed,
            cap: trunc.cap,
        });
    }
    let pi = T::PI();
    let two = T::lit(2.0);
    let mut acc = CompensatedSum::new();
    for shell in 0..=trunc.radius as i64 {
        for_each_in_shell(g, shell, |m| {
            let q = b.quad_int(m);
            let w = m.iter().zip(z).fold(Complex::zero(), |a, (&k, zi)| {
                a + *zi * T::from_i64(k).unwrap()
            });
            let arg = (q + w * two) * Complex::new(T::zero(), pi);
            acc.add(arg.exp());
        });
    }
    Ok(acc.value())
}

/// Relative defect of the quasi-periodicity law
/// θ(z + Bm) = exp(−πi(Bm, m) − 2πi(m, z))·θ(z).
pub fn quasi_periodicity_defect<T: Real>(
    z: &[Complex<T>],
    m: &[i64],
    b: &PeriodMatrix<T>,
    trunc: &LatticeTruncation<T>,
) -> Result<T> {
    check_dims(z, b)?;
    if m.len() != b.genus() {
        return Err(Error::DimensionMismatch {
            expected: b.genus(),
            got: m.len(),
        });
    }
    let bm = b.apply_int(m);
    let shifted: Vec<Complex<T>> = z.iter().zip(&bm).map(|(a, c)| *a + *c).collect();
    let lhs = riemann_theta(&shifted, b, trunc)?;
    let base = riemann_theta(z, b, trunc)?;
    let mz = m.iter().zip(z).fold(Complex::zero(), |a, (&k, zi)| {
        a + *zi * T::from_i64(k).unwrap()
    });
    let i_pi = Complex::new(T::zero(), T::PI());
    let factor = ((b.quad_int(m) + mz * T::lit(2.0)) * -i_pi).exp();
    Ok((lhs - factor * base).norm() / (T::one() + base.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn scalar(b: C) -> PeriodMatrix<f64> {
        PeriodMatrix::from_upper_triangle(&[vec![b]]).unwrap()
    }

    #[test]
    fn rejects_indefinite_imaginary_part() {
        let rows = vec![
            vec![C::new(0.0, 1.0), C::new(0.0, 2.0)],
            vec![C::new(0.0, 2.0), C::new(0.0, 1.0)],
        ];
        assert_eq!(PeriodMatrix::new(&rows), Err(Error::NotPositiveDefinite));
        assert_eq!(
            PeriodMatrix::from_upper_triangle(&[vec![C::new(0.3, -1.0)]]),
            Err(Error::NotPositiveDefinite)
        );
    }

    #[test]
    fn rejects_asymmetric_rows() {
        let rows = vec![
            vec![C::new(0.0, 1.0), C::new(0.1, 0.0)],
            vec![C::new(0.2, 0.0), C::new(0.0, 1.0)],
        ];
        assert!(matches!(
            PeriodMatrix::new(&rows),
            Err(Error::NotSymmetric(_))
        ));
        let sym = PeriodMatrix::from_upper_triangle(&rows).unwrap();
        assert_eq!(sym.get(1, 0), sym.get(0, 1));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let b = scalar(C::new(0.0, 1.0));
        let t = LatticeTruncation::new(4).unwrap();
        let err = riemann_theta(&[C::new(0.0, 0.0); 2], &b, &t).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn cap_is_enforced() {
        let rows: Vec<Vec<C>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| C::new(0.0, if i == j { 1.0 } else { 0.0 }))
                    .collect()
            })
            .collect();
        let b = PeriodMatrix::from_upper_triangle(&rows).unwrap();
        let t = LatticeTruncation::with_cap(10, 1000).unwrap();
        assert!(matches!(
            riemann_theta(&[C::new(0.0, 0.0); 3], &b, &t),
            Err(Error::TruncationCapExceeded {
                needed: 9261,
                cap: 1000
            })
        ));
        assert_eq!(
            LatticeTruncation::<f64>::new(0),
            Err(Error::InvalidRadius(0))
        );
    }

    #[test]
    fn shells_partition_the_box() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..=3 {
            for_each_in_shell(2, s, |m| {
                assert_eq!(m.iter().map(|v| v.abs()).max().unwrap(), s);
                assert!(seen.insert(m.to_vec()));
            });
        }
        assert_eq!(seen.len(), 49);
    }

    #[test]
    fn identity_shift_has_zero_defect() {
        let b = scalar(C::new(0.2, 1.3));
        let t = LatticeTruncation::new(8).unwrap();
        let d = quasi_periodicity_defect(&[C::new(0.3, 0.1)], &[0], &b, &t).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn auto_radius_meets_bound() {
        let b = scalar(C::new(0.0, 1.0));
        let t = LatticeTruncation::auto(&b, 0.0);
        let r = t.radius as f64;
        assert!((-std::f64::consts::PI * r * r).exp() < 1e-14);
        let r1 = r - 1.0;
        assert!(r1 < 1.0 || (-std::f64::consts::PI * r1 * r1).exp() >= 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let b = PeriodMatrix::<f32>::from_upper_triangle(&[vec![Complex::new(0.0, 1.0)]]).unwrap();
        let t = LatticeTruncation::new(6).unwrap();
        let v = riemann_theta(&[Complex::new(0.0f32, 0.0)], &b, &t).unwrap();
        assert!((v.re - 1.086_434_8).abs() < 1e-6);
    }
}
