//! Dense complex matrices at arbitrary precision and the Hermitian
//! eigensolver used for matrix exponentials.
//!
//! Dimensions here are tiny (statistical systems of dimension <= 16), so a
//! cyclic Jacobi iteration with complex rotations is the whole story: it
//! converges quadratically and every step is unitary, which keeps the
//! decomposition residual near rounding level. The residual is returned so
//! callers can fold it into their reported error bounds.

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::BigComplex;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<BigComplex>,
}

impl CMatrix {
    pub fn zeros(n: usize, prec: u32) -> Self {
        CMatrix { n, data: vec![BigComplex::zero(prec); n * n] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = CMatrix::zeros(n, prec);
        for i in 0..n {
            *m.at_mut(i, i) = BigComplex::one(prec);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigComplex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigComplex {
        &self.data[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigComplex {
        &mut self.data[i * self.n + j]
    }

    pub fn prec(&self) -> u32 {
        self.data.iter().map(|c| c.prec()).max().unwrap_or(64)
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(other.data.iter()).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(other.data.iter()).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let prec = self.prec().max(other.prec());
        let mut out = CMatrix::zeros(n, prec);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    *out.at_mut(i, j) = out.at(i, j).add(&prod);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> BigComplex {
        let mut t = BigComplex::zero(self.prec());
        for i in 0..self.n {
            t = t.add(self.at(i, i));
        }
        t
    }

    pub fn scale(&self, c: &BigComplex) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn frobenius_norm(&self) -> Float {
        let prec = self.prec();
        let mut acc = Float::new(prec);
        for x in &self.data {
            acc += Float::with_val(prec, &x.re * &x.re) + Float::with_val(prec, &x.im * &x.im);
        }
        acc.sqrt()
    }

    /// Largest deviation from self-adjointness.
    pub fn hermitian_defect(&self) -> Float {
        let prec = self.prec();
        let mut worst = Float::new(prec);
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.at(i, j).sub(&self.at(j, i).conj()).abs();
                if d > worst {
                    worst = Float::with_val(prec, d);
                }
            }
        }
        worst
    }
}

/// Spectral decomposition of a Hermitian matrix: `a = vecs * diag(vals) *
/// vecs^H` up to `residual` in Frobenius norm.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<Float>,
    pub vectors: CMatrix,
    pub residual: Float,
}

/// Cyclic complex Jacobi iteration. Fails if the input is not Hermitian to
/// within `2^-(prec/2)` of its scale.
pub fn hermitian_eigen(a: &CMatrix, prec: u32) -> Result<HermitianEigen> {
    let n = a.dim();
    let scale = a.frobenius_norm().max(&Float::with_val(prec, 1));
    let defect = a.hermitian_defect();
    let tol_herm = Float::with_val(prec, &scale) >> (prec / 2);
    if defect > tol_herm {
        return Err(Error::DomainError(format!(
            "matrix is not Hermitian: defect {:e}",
            defect.to_f64()
        )));
    }

    let mut m = a.clone();
    let mut v = CMatrix::identity(n, prec);
    let stop = Float::with_val(prec, &scale) >> prec.saturating_sub(4);

    for _sweep in 0..60 {
        let mut off = Float::new(prec);
        for p in 0..n {
            for q in (p + 1)..n {
                off += {
                    let x = m.at(p, q).abs();
                    Float::with_val(prec, &x * &x)
                };
            }
        }
        if off.sqrt() < stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m.at(p, q).clone();
                let beta_abs = beta.abs();
                if beta_abs < Float::with_val(prec, &stop) >> 8 {
                    continue;
                }
                // real Jacobi angle for the phase-factored 2x2 block
                let alpha = m.at(p, p).re.clone();
                let gamma = m.at(q, q).re.clone();
                let tau = Float::with_val(prec, &gamma - &alpha)
                    / (Float::with_val(prec, 2) * &beta_abs);
                let t = {
                    let abs_tau = tau.clone().abs();
                    let root = (Float::with_val(prec, &tau * &tau) + 1u32).sqrt();
                    let denom = abs_tau + root;
                    let mag = Float::with_val(prec, 1) / denom;
                    if tau < 0 {
                        -mag
                    } else {
                        mag
                    }
                };
                let c = (Float::with_val(prec, &t * &t) + 1u32).sqrt().recip();
                let sigma = Float::with_val(prec, &t * &c);
                // s = e^{i phase(beta)} * sigma
                let phase = beta.div_float(&beta_abs);
                let s = phase.scale(&sigma);

                // columns p, q of m: m <- m * J, J = [[c, s],[-conj(s), c]]
                for i in 0..n {
                    let mip = m.at(i, p).clone();
                    let miq = m.at(i, q).clone();
                    *m.at_mut(i, p) = mip.scale(&c).sub(&miq.mul(&s.conj()));
                    *m.at_mut(i, q) = mip.mul(&s).add(&miq.scale(&c));
                }
                // rows p, q: m <- J^H * m
                for j in 0..n {
                    let mpj = m.at(p, j).clone();
                    let mqj = m.at(q, j).clone();
                    *m.at_mut(p, j) = mpj.scale(&c).sub(&mqj.mul(&s));
                    *m.at_mut(q, j) = mpj.mul(&s.conj()).add(&mqj.scale(&c));
                }
                // accumulate eigenvectors: v <- v * J
                for i in 0..n {
                    let vip = v.at(i, p).clone();
                    let viq = v.at(i, q).clone();
                    *v.at_mut(i, p) = vip.scale(&c).sub(&viq.mul(&s.conj()));
                    *v.at_mut(i, q) = vip.mul(&s).add(&viq.scale(&c));
                }
            }
        }
    }

    let values: Vec<Float> = (0..n).map(|i| m.at(i, i).re.clone()).collect();
    // residual ||V D V^H - A||_F for the caller's error accounting
    let d = CMatrix::from_fn(n, |i, j| {
        if i == j {
            BigComplex::new(values[i].clone(), Float::new(prec))
        } else {
            BigComplex::zero(prec)
        }
    });
    let reconstructed = v.mul(&d).mul(&v.adjoint());
    let residual = reconstructed.sub(a).frobenius_norm();
    Ok(HermitianEigen { values, vectors: v, residual })
}

impl HermitianEigen {
    /// `f(A) = V f(D) V^H` for a scalar function applied to eigenvalues.
    pub fn apply(&self, mut f: impl FnMut(&Float) -> BigComplex) -> CMatrix {
        let n = self.values.len();
        let prec = self.vectors.prec();
        let d = CMatrix::from_fn(n, |i, j| {
            if i == j {
                f(&self.values[i])
            } else {
                BigComplex::zero(prec)
            }
        });
        self.vectors.mul(&d).mul(&self.vectors.adjoint())
    }
}
