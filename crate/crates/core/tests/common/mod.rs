//! Independent oracles shared by the integration tests. They work with
//! matrices of the geometric representation and never call the closure search.

#![allow(dead_code)]

use coxeter::diagram::{CoxeterMatrix, GenSet};
use coxeter::element::Element;
use coxeter::linalg::Mat;
use coxeter::system::System;

/// All words of length exactly `len` over `rank` letters.
pub fn words_of_length(rank: usize, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u8>| {
                (0..rank as u8).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Rows of `M − I` with a nonzero entry. Row `j` vanishes exactly when the
/// element fixes the dual fundamental weight `ω_j`, that is when it lies in
/// `W_{S∖{j}}`; so this is the support of any reduced word.
pub fn row_support(sys: &System, m: &Mat) -> GenSet {
    let n = sys.rank();
    let mut out = GenSet::EMPTY;
    for i in 0..n {
        for j in 0..n {
            let d = if i == j { m.get(i, j).sub(&sys.field().int(1)) } else { m.get(i, j).clone() };
            if !d.is_zero() {
                out = out.with(i);
                break;
            }
        }
    }
    out
}

/// `(u, J)` with `u W_J u⁻¹` the smallest parabolic containing `elems`
/// among conjugators in the ball of the given radius.
pub fn closure_oracle(elems: &[Element], radius: usize) -> (Element, GenSet) {
    let sys = elems[0].system_arc().clone();
    let f = sys.field();
    let ball = sys.ball(sys.matrix().all(), radius, 1_000_000).expect("ball fits");
    let mats: Vec<Mat> = elems.iter().map(Element::matrix).collect();
    let mut best: Option<(Element, GenSet)> = None;
    for u in ball.iter() {
        let mu = u.matrix();
        let mui = u.inverse().matrix();
        let mut j = GenSet::EMPTY;
        for m in &mats {
            j = j.union(row_support(&sys, &mui.mul(m, f).mul(&mu, f)));
        }
        if best.as_ref().is_none_or(|(_, b)| j.len() < b.len()) {
            best = Some((u.clone(), j));
        }
    }
    best.expect("ball contains the identity")
}

/// Whether `x ∈ u W_J u⁻¹`, decided on matrices.
pub fn in_parabolic(x: &Element, u: &Element, j: GenSet) -> bool {
    let sys = x.system_arc().clone();
    let f = sys.field();
    let m = u.inverse().matrix().mul(&x.matrix(), f).mul(&u.matrix(), f);
    row_support(&sys, &m).is_subset(j)
}

/// Equality of `u W_J u⁻¹` and `v W_K v⁻¹` as subgroups.
pub fn same_parabolic(u: &Element, j: GenSet, v: &Element, k: GenSet) -> bool {
    let sys = u.system_arc().clone();
    let conj = |w: &Element, s: usize| w.mul(&Element::generator(&sys, s)).unwrap().mul(&w.inverse()).unwrap();
    j.len() == k.len()
        && j.iter().all(|s| in_parabolic(&conj(u, s), v, k))
        && k.iter().all(|s| in_parabolic(&conj(v, s), u, j))
}

/// Gram matrix `-cos(π/m)` (with `-1` for `m = ∞`) in floating point.
pub fn gram_f64(m: &CoxeterMatrix) -> Vec<Vec<f64>> {
    let n = m.rank();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match m.order(i, j) {
                    _ if i == j => 1.0,
                    Some(k) => -(std::f64::consts::PI / k as f64).cos(),
                    None => -1.0,
                })
                .collect()
        })
        .collect()
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// `(positive, negative, zero)` eigenvalue counts of the Gram matrix of `J`.
pub fn numeric_signature(m: &CoxeterMatrix, j: GenSet) -> (usize, usize, usize) {
    let g = gram_f64(m);
    let idx: Vec<usize> = j.iter().collect();
    let sub: Vec<Vec<f64>> = idx.iter().map(|&a| idx.iter().map(|&b| g[a][b]).collect()).collect();
    let ev = eigenvalues(sub);
    let pos = ev.iter().filter(|&&x| x > 1e-9).count();
    let neg = ev.iter().filter(|&&x| x < -1e-9).count();
    (pos, neg, ev.len() - pos - neg)
}

/// Family of an irreducible diagram from eigenvalue counts alone.
pub fn oracle_family(m: &CoxeterMatrix) -> &'static str {
    let n = m.rank();
    let all = m.all();
    match numeric_signature(m, all) {
        (p, 0, 0) if p == n => "Spherical",
        (p, 0, 1) if p == n - 1 => "Affine",
        (p, 1, 0) if p == n - 1 && (0..n).all(|s| numeric_signature(m, all.without(s)).0 == n - 1) => {
            "CompactHyperbolic"
        }
        _ => "Indefinite",
    }
}
