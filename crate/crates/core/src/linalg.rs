//! Dense complex LU with partial pivoting and a 1-norm condition estimate.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

type C = Complex64;

/// Row-major square matrix.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<C>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: alloc::vec![C::new(0.0, 0.0); n * n] }
    }

    pub fn at(&self, i: usize, j: usize) -> C {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul_vec(&self, x: &[C]) -> Vec<C> {
        (0..self.n).map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    fn norm1(&self) -> f64 {
        (0..self.n).map(|j| (0..self.n).map(|i| self.at(i, j).norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}

pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    norm1: f64,
}

impl Lu {
    pub fn factor(mut a: Matrix) -> Result<Self> {
        let n = a.n;
        let norm1 = a.norm1();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a.at(i, k).norm().total_cmp(&a.at(j, k).norm())).unwrap_or(k);
            if a.at(p, k).norm() == 0.0 {
                return Err(Error::Conditioning { condition: f64::INFINITY });
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a.at(k, k);
            let (head, tail) = a.data.split_at_mut((k + 1) * n);
            let row_k = &head[k * n..(k + 1) * n];
            for row in tail.chunks_mut(n) {
                let f = row[k] / pivot;
                row[k] = f;
                if f.norm() != 0.0 {
                    for j in k + 1..n {
                        row[j] -= f * row_k[j];
                    }
                }
            }
        }
        Ok(Lu { lu: a, perm, norm1 })
    }

    pub fn solve(&self, b: &[C]) -> Vec<C> {
        let n = self.lu.n;
        let mut x: Vec<C> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: C = (0..i).map(|j| self.lu.at(i, j) * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: C = (i + 1..n).map(|j| self.lu.at(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.lu.at(i, i);
        }
        x
    }

    /// Solves `Aᴴ x = b`.
    fn solve_adjoint(&self, b: &[C]) -> Vec<C> {
        let n = self.lu.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let s: C = (0..i).map(|j| self.lu.at(j, i).conj() * y[j]).sum();
            y[i] = (y[i] - s) / self.lu.at(i, i).conj();
        }
        for i in (0..n).rev() {
            let s: C = (i + 1..n).map(|j| self.lu.at(j, i).conj() * y[j]).sum();
            y[i] -= s;
        }
        let mut x = alloc::vec![C::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    /// Hager's estimate of `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.lu.n;
        let mut x = alloc::vec![C::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            let ny: f64 = y.iter().map(|v| v.norm()).sum();
            if ny <= est {
                break;
            }
            est = ny;
            let xi: Vec<C> = y.iter().map(|v| if v.norm() > 0.0 { v / v.norm() } else { C::new(1.0, 0.0) }).collect();
            let z = self.solve_adjoint(&xi);
            let (j, zmax) =
                z.iter().enumerate().fold((0, 0.0), |b, (i, v)| if v.norm() > b.1 { (i, v.norm()) } else { b });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= ztx {
                break;
            }
            x = alloc::vec![C::new(0.0, 0.0); n];
            x[j] = C::new(1.0, 0.0);
        }
        est * self.norm1
    }
}
