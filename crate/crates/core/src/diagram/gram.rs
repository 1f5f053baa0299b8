//! Exact signature of the Gram form, used as an independent check of the
//! catalogue classification.

use serde::Serialize;

use super::{CoxeterMatrix, GenSet};
use crate::field::{Field, Num};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Twice the Gram matrix of the restriction to `j`, over ℤ[2cos(π/L)].
pub fn twice_gram(m: &CoxeterMatrix, j: GenSet, field: &Field) -> Vec<Vec<Num>> {
    let idx: Vec<usize> = j.iter().collect();
    idx.iter()
        .map(|&a| {
            idx.iter()
                .map(|&b| if a == b { field.int(2) } else { field.two_cos_pi_over(m.order(a, b).map(u64::from)).neg() })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial det(xI − A), highest degree first, by the
/// division-free Berkowitz algorithm.
pub fn charpoly(a: &[Vec<Num>], field: &Field) -> Vec<Num> {
    let n = a.len();
    if n == 0 {
        return vec![field.one()];
    }
    // Build from the bottom-right corner outwards.
    let mut vec = vec![field.one(), a[n - 1][n - 1].neg()];
    for k in (0..n - 1).rev() {
        // Partition the trailing principal block as [[a, R], [C, A']].
        let size = n - k;
        let r: Vec<&Num> = (k + 1..n).map(|j| &a[k][j]).collect();
        let c: Vec<Num> = (k + 1..n).map(|i| a[i][k].clone()).collect();
        let mut diags = vec![field.one(), a[k][k].neg()];
        let mut cur = c;
        for step in 0..size - 1 {
            let rc = r.iter().zip(&cur).fold(field.zero(), |acc, (x, y)| acc.add(&field.mul(x, y)));
            diags.push(rc.neg());
            if step + 1 < size - 1 {
                cur = (k + 1..n)
                    .map(|i| (k + 1..n).zip(&cur).fold(field.zero(), |acc, (j, y)| acc.add(&field.mul(&a[i][j], y))))
                    .collect();
            }
        }
        // Lower-triangular Toeplitz (size+1)×size times the previous vector.
        let mut next = Vec::with_capacity(size + 1);
        for i in 0..=size {
            let mut acc = field.zero();
            for (j, v) in vec.iter().enumerate() {
                if i >= j {
                    acc = acc.add(&field.mul(&diags[i - j], v));
                }
            }
            next.push(acc);
        }
        vec = next;
    }
    vec
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Signature of the Gram form on the span of the simple roots in `j`.
///
/// The characteristic polynomial of a real symmetric matrix has only real
/// roots, so Descartes' rule of signs counts positive roots exactly.
pub fn signature(m: &CoxeterMatrix, j: GenSet) -> Signature {
    let labels: Vec<u64> = m.restrict(j).finite_labels();
    let field = Field::for_labels(labels);
    let g = twice_gram(m, j, &field);
    let p = charpoly(&g, &field);
    let n = g.len();
    let signs: Vec<i32> = p.iter().map(|c| field.sign(c)).collect();
    let zero = signs.iter().rev().take_while(|&&s| s == 0).count();
    let positive = sign_changes(signs.iter().copied());
    // p(−x): flip the sign of odd-degree coefficients (degree n − i).
    let negative = sign_changes(signs.iter().enumerate().map(|(i, &s)| if (n - i) % 2 == 1 { -s } else { s }));
    Signature { positive, negative, zero }
}
