//! Small dense complex linear algebra (3-vectors, 3×3 matrices), compensated
//! summation and a symmetric eigenvalue routine for the tiny real matrices
//! that show up as imaginary parts of period matrices.

use num_traits::{One, Zero};

use crate::{Complex, Real};

pub type C3<T> = [Complex<T>; 3];
pub type Mat3<T> = [[Complex<T>; 3]; 3];

/// Hermitian product, conjugate on the second slot: ⟨u, w⟩ = Σ uᵢ·conj(wᵢ).
#[inline]
pub fn herm<T: Real>(u: &C3<T>, w: &C3<T>) -> Complex<T> {
    u[0] * w[0].conj() + u[1] * w[1].conj() + u[2] * w[2].conj()
}

#[inline]
pub fn norm_sqr<T: Real>(u: &C3<T>) -> T {
    u[0].norm_sqr() + u[1].norm_sqr() + u[2].norm_sqr()
}

#[inline]
pub fn scale<T: Real>(u: &C3<T>, s: Complex<T>) -> C3<T> {
    [u[0] * s, u[1] * s, u[2] * s]
}

#[inline]
pub fn sub<T: Real>(u: &C3<T>, w: &C3<T>) -> C3<T> {
    [u[0] - w[0], u[1] - w[1], u[2] - w[2]]
}

pub fn max_abs3<T: Real>(u: &C3<T>) -> T {
    u.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

pub fn zero3<T: Real>() -> C3<T> {
    [Complex::zero(); 3]
}

pub fn identity<T: Real>() -> Mat3<T> {
    let mut m = [[Complex::zero(); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex::one();
    }
    m
}

/// Matrix whose rows are the three given vectors.
pub fn from_rows<T: Real>(r0: C3<T>, r1: C3<T>, r2: C3<T>) -> Mat3<T> {
    [r0, r1, r2]
}

/// Matrix whose columns are the three given vectors.
pub fn from_cols<T: Real>(c0: &C3<T>, c1: &C3<T>, c2: &C3<T>) -> Mat3<T> {
    let mut m = [[Complex::zero(); 3]; 3];
    for i in 0..3 {
        m[i] = [c0[i], c1[i], c2[i]];
    }
    m
}

pub fn det<T: Real>(m: &Mat3<T>) -> Complex<T> {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut m = [[Complex::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    m
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(a: &Mat3<T>) -> Mat3<T> {
    let mut m = [[Complex::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[j][i].conj();
        }
    }
    m
}

pub fn sub_mat<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = m[i][j] - b[i][j];
        }
    }
    m
}

pub fn scale_mat<T: Real>(a: &Mat3<T>, s: Complex<T>) -> Mat3<T> {
    let mut m = *a;
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v = *v * s;
        }
    }
    m
}

pub fn max_abs_mat<T: Real>(a: &Mat3<T>) -> T {
    a.iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |m, z| m.max(z.norm()))
}

/// Max-row-sum norm.
pub fn norm_inf<T: Real>(a: &Mat3<T>) -> T {
    a.iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<T>())
        .fold(T::zero(), T::max)
}

/// Inverse by adjugate; `None` when the determinant vanishes.
pub fn inverse<T: Real>(m: &Mat3<T>) -> Option<Mat3<T>> {
    let d = det(m);
    if d.norm() == T::zero() || !d.norm().is_finite() {
        return None;
    }
    let cof =
        |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    Some(scale_mat(&adj, Complex::<T>::one() / d))
}

/// ∞-norm condition number; infinite for singular matrices.
pub fn condition_number<T: Real>(m: &Mat3<T>) -> T {
    match inverse(m) {
        Some(inv) => norm_inf(m) * norm_inf(&inv),
        None => T::infinity(),
    }
}

/// Gaussian elimination with partial pivoting. `None` on an exactly singular pivot.
pub fn solve<T: Real>(m: &Mat3<T>, rhs: &C3<T>) -> Option<C3<T>> {
    let mut a = *m;
    let mut b = *rhs;
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| {
                a[i][col]
                    .norm()
                    .partial_cmp(&a[j][col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if a[piv][col].norm() == T::zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                let t = a[col][k];
                a[row][k] = a[row][k] - f * t;
            }
            let t = b[col];
            b[row] = b[row] - f * t;
        }
    }
    let mut x = [Complex::zero(); 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Neumaier-compensated accumulator for complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    re: (T, T),
    im: (T, T),
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            re: (T::zero(), T::zero()),
            im: (T::zero(), T::zero()),
        }
    }

    #[inline]
    fn step(acc: &mut (T, T), v: T) {
        let (s, c) = *acc;
        let t = s + v;
        let c = if s.abs() >= v.abs() {
            c + ((s - t) + v)
        } else {
            c + ((v - t) + s)
        };
        *acc = (t, c);
    }

    pub fn add(&mut self, z: Complex<T>) {
        Self::step(&mut self.re, z.re);
        Self::step(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Cholesky factorisation of a real symmetric matrix; succeeds iff it is
/// numerically positive definite.
pub fn cholesky<T: Real>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut l = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: T = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if !(d > T::zero()) {
                    return None;
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<T: Real>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a.to_vec();
    let eps = T::epsilon();
    for _sweep in 0..64 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let diag: T = (0..n).map(|i| m[i][i] * m[i][i]).sum();
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == T::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (T::lit(2.0) * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}
