//! Square matrices and vectors over ℤ[θ].

use crate::field::{Field, Num};

pub type Vector = Vec<Num>;

/// Row-major square matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    n: usize,
    data: Vec<Num>,
}

impl Mat {
    pub fn identity(n: usize, f: &Field) -> Mat {
        let mut data = vec![f.zero(); n * n];
        for i in 0..n {
            data[i * n + i] = f.one();
        }
        Mat { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Num {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Num) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.as_integer().is_some_and(|k| k == crate::int::Int::ONE)
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, other: &Mat, f: &Field) -> Mat {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&f.mul(a, b));
                    }
                }
                data.push(acc);
            }
        }
        Mat { n, data }
    }

    pub fn pow(&self, mut k: u64, f: &Field) -> Mat {
        let mut result = Mat::identity(self.n, f);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, f);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, f);
            }
        }
        result
    }

    pub fn apply(&self, v: &[Num], f: &Field) -> Vector {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(f.zero(), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        acc.add(&f.mul(a, &v[j]))
                    }
                })
            })
            .collect()
    }

    /// `self − I`, column by column.
    pub fn minus_identity_columns(&self, f: &Field) -> Vec<Vector> {
        (0..self.n)
            .map(|j| {
                let mut c = self.column(j);
                c[j] = c[j].sub(&f.one());
                c
            })
            .collect()
    }
}

/// Rank of a family of vectors, by fraction-free elimination.
pub fn rank(vectors: &[Vector], f: &Field) -> usize {
    let mut rows: Vec<Vector> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for k in c..cols {
                row[k] = f.mul(&pivot[c], &row[k]).sub(&f.mul(&factor, &pivot[k]));
            }
            // Keep entries small: divide out a common integer content.
            reduce_content(row);
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

fn reduce_content(row: &mut [Num]) {
    use num_integer::Integer;
    let mut g: Option<num_bigint::BigInt> = None;
    for x in row.iter() {
        for c in x.coeffs() {
            if !c.is_zero() {
                let b = c.to_big();
                g = Some(match g {
                    None => b,
                    Some(h) => h.gcd(&b),
                });
            }
        }
    }
    if let Some(g) = g {
        let g = num_traits::Signed::abs(&g);
        if g > num_bigint::BigInt::from(1) {
            for x in row.iter_mut() {
                let coeffs = x.coeffs().iter().map(|c| crate::int::Int::from(c.to_big() / &g)).collect();
                *x = Num(coeffs);
            }
        }
    }
}
