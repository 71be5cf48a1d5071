//! Square matrices over `Z/modulus`, acting on row vectors from the right.

use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, mul_mod, prime_power};

/// Row-major `n x n` matrix with entries reduced mod the ambient modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix(pub Vec<u64>);

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        Matrix(e)
    }

    pub fn from_rows(rows: &[&[i64]], modulus: u64) -> Self {
        let n = rows.len();
        let mut e = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            e.extend(r.iter().map(|&x| x.rem_euclid(modulus as i64) as u64));
        }
        Matrix(e)
    }

    pub fn diagonal(entries: &[u64]) -> Self {
        let n = entries.len();
        let mut m = Matrix(vec![0; n * n]);
        for (i, &x) in entries.iter().enumerate() {
            m.0[i * n + i] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        (self.0.len() as f64).sqrt().round() as usize
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.0[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        let n = self.dim();
        self.0[i * n + j] = x;
    }

    pub fn mul(&self, other: &Matrix, modulus: u64) -> Matrix {
        let n = self.dim();
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.0[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] =
                        (out[i * n + j] + mul_mod(a, other.0[k * n + j], modulus)) % modulus;
                }
            }
        }
        Matrix(out)
    }

    pub fn pow(&self, mut e: u64, modulus: u64) -> Matrix {
        let mut acc = Matrix::identity(self.dim());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, modulus);
            }
            base = base.mul(&base, modulus);
            e >>= 1;
        }
        acc
    }

    /// `v M` for a row vector `v`.
    pub fn apply_row(&self, v: &[u64], modulus: u64) -> Vec<u64> {
        let n = self.dim();
        let mut out = vec![0u64; n];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for j in 0..n {
                out[j] = (out[j] + mul_mod(vi, self.0[i * n + j], modulus)) % modulus;
            }
        }
        out
    }

    /// Reduce every entry mod `modulus`.
    pub fn reduce(&self, modulus: u64) -> Matrix {
        Matrix(self.0.iter().map(|x| x % modulus).collect())
    }

    /// Determinant mod a prime by Gaussian elimination.
    pub fn det_mod_prime(&self, p: u64) -> u64 {
        let n = self.dim();
        let mut a: Vec<u64> = self.0.iter().map(|x| x % p).collect();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = (p - det) % p;
            }
            let pv = a[col * n + col];
            det = mul_mod(det, pv, p);
            let inv = inv_mod(pv, p).expect("nonzero pivot mod prime");
            for r in col + 1..n {
                let f = mul_mod(a[r * n + col], inv, p);
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = mul_mod(f, a[col * n + j], p);
                    a[r * n + j] = (a[r * n + j] + p - sub) % p;
                }
            }
        }
        det
    }

    /// Block-diagonal embedding of `self` at `offset` in an `n x n` identity.
    pub fn embed(&self, offset: usize, n: usize) -> Matrix {
        let k = self.dim();
        let mut m = Matrix::identity(n);
        for i in 0..k {
            for j in 0..k {
                m.set(offset + i, offset + j, self.get(i, j));
            }
        }
        m
    }

    pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut m = Matrix(vec![0; n * n]);
        let mut off = 0;
        for b in blocks {
            let k = b.dim();
            for i in 0..k {
                for j in 0..k {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += k;
        }
        m
    }

    /// Permutation matrix sending `e_i` to `e_{images[i]}`.
    pub fn permutation(images: &[u32]) -> Matrix {
        let n = images.len();
        let mut m = Matrix(vec![0; n * n]);
        for (i, &j) in images.iter().enumerate() {
            m.set(i, j as usize, 1);
        }
        m
    }
}

/// A matrix group over `Z/modulus` for a prime-power modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixGroupSpec {
    pub d: usize,
    pub modulus: u64,
    pub generators: Vec<Matrix>,
}

impl MatrixGroupSpec {
    pub fn prime(&self) -> u64 {
        prime_power(self.modulus)
            .map(|(p, _)| p)
            .expect("matrix group modulus is a prime power")
    }

    pub fn all_invertible(&self) -> bool {
        let p = self.prime();
        self.generators.iter().all(|g| g.det_mod_prime(p) != 0)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("matrix spec serializes");
        s.push('\n');
        s
    }
}

/// Encode a vector over `Z/q` as a point index, first coordinate least significant.
pub fn vector_index(v: &[u64], q: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &x| acc * q + x)
}

pub fn index_vector(mut i: u64, q: u64, d: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(d);
    for _ in 0..d {
        v.push(i % q);
        i /= q;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_products() {
        let m = Matrix::from_rows(&[&[1, 1], &[0, 1]], 3);
        assert_eq!(m.pow(3, 3), Matrix::identity(2));
        assert_eq!(m.det_mod_prime(3), 1);
        let s = Matrix::from_rows(&[&[0, 1], &[1, 0]], 5);
        assert_eq!(s.det_mod_prime(5), 4);
        assert_eq!(
            Matrix::from_rows(&[&[2, 4], &[1, 2]], 5).det_mod_prime(5),
            0
        );
    }

    #[test]
    fn vector_encoding_round_trips() {
        for i in 0..81 {
            assert_eq!(vector_index(&index_vector(i, 3, 4), 3), i);
        }
        assert_eq!(index_vector(5, 3, 2), vec![2, 1]);
    }

    #[test]
    fn row_action_composes_in_product_order() {
        let a = Matrix::from_rows(&[&[1, 1], &[0, 1]], 5);
        let b = Matrix::from_rows(&[&[2, 0], &[0, 1]], 5);
        let v = [1u64, 3];
        let left = b.apply_row(&a.apply_row(&v, 5), 5);
        assert_eq!(left, a.mul(&b, 5).apply_row(&v, 5));
    }
}
