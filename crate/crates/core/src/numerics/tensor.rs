use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

pub type CVec3 = [Complex64; 3];

/// 3x3 complex tensor in Cartesian components, row index = field component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex3Tensor(pub [[Complex64; 3]; 3]);

impl Complex3Tensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        }
        Self(m)
    }

    /// Dyadic product `a b^T` (no conjugation).
    pub fn outer(a: &CVec3, b: &CVec3) -> Self {
        Self::from_fn(|i, j| a[i] * b[j])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum())
    }

    pub fn apply(&self, v: &CVec3) -> CVec3 {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    /// Elementwise imaginary part, as a tensor with zero imaginary entries.
    pub fn imag(&self) -> Self {
        Self::from_fn(|i, j| Complex64::new(self.0[i][j].im, 0.0))
    }

    /// Hermitian-imaginary part `(G - G^dagger) / 2i`.
    pub fn hermitian_imag(&self) -> Self {
        let adj = self.adjoint();
        Self::from_fn(|i, j| (self.0[i][j] - adj.0[i][j]) / Complex64::new(0.0, 2.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `R G R^T` for a rotation by `phi` about the z axis.
    pub fn rotate_z(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let r = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        Self::from_fn(|i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, rk) in r[i].iter().enumerate() {
                for (l, rl) in r[j].iter().enumerate() {
                    acc += self.0[k][l] * (rk * rl);
                }
            }
            acc
        })
    }

    pub fn components(&self) -> Vec<Complex64> {
        self.0.iter().flatten().copied().collect()
    }
}

impl Add for Complex3Tensor {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl AddAssign for Complex3Tensor {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Complex3Tensor {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Neg for Complex3Tensor {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl Mul<f64> for Complex3Tensor {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * rhs)
    }
}

impl Mul<Complex64> for Complex3Tensor {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * rhs)
    }
}
