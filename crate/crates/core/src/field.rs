//! Exact arithmetic in the ring ℤ[θ], θ = 2cos(π/L).
//!
//! Every entry 2cos(π/m) of a Coxeter matrix with finite labels dividing `L`
//! is an integer polynomial in θ, so reflection matrices (with the integral
//! normalization `s(e_t) = e_t + 2cos(π/m) e_s`) have entries in ℤ[θ].
//! Elements are stored in the power basis reduced modulo the minimal
//! polynomial of θ; equality is coefficient equality.
//!
//! Sign decisions use a floating-point evaluation with a rigorous error bound
//! and fall back to rational interval refinement of θ when the bound is too
//! loose to decide.

use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::int::Int;

/// An element of ℤ[θ] in the power basis `c_0 + c_1 θ + … + c_{d-1} θ^{d-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Num(pub(crate) SmallVec<[Int; 2]>);

impl Num {
    pub fn coeffs(&self) -> &[Int] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Int::is_zero)
    }

    pub fn add(&self, other: &Num) -> Num {
        Num(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Num) -> Num {
        Num(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Num {
        Num(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Num {
        Num(self.0.iter().map(|a| a.mul_small(k)).collect())
    }

    /// The rational integer `k` viewed in a ring of degree `degree`.
    pub fn int(k: i64, degree: usize) -> Num {
        let mut c: SmallVec<[Int; 2]> = SmallVec::from_elem(Int::ZERO, degree);
        c[0] = Int::from(k);
        Num(c)
    }

    /// `Some(k)` when the element is the rational integer `k`.
    pub fn as_integer(&self) -> Option<Int> {
        if self.0[1..].iter().all(Int::is_zero) {
            Some(self.0[0].clone())
        } else {
            None
        }
    }

    /// Residues of the coefficients modulo `p`.
    pub fn residues(&self, p: u32) -> SmallVec<[u32; 2]> {
        self.0.iter().map(|c| c.rem_u32(p)).collect()
    }

    pub fn max_bits(&self) -> u64 {
        self.0.iter().map(Int::bits).max().unwrap_or(0)
    }
}

/// Coefficient list, lowest degree first; integers beyond `i64` as strings.
impl serde::Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.as_i64() {
                Some(k) => seq.serialize_element(&k)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl fmt::Debug for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let mut wrote = false;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != Int::ONE {
                        write!(f, "{a}")?;
                    }
                    write!(f, "θ")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The ring ℤ[θ] for θ = 2cos(π/L).
pub struct Field {
    level: u64,
    /// Monic minimal polynomial of θ, lowest degree first.
    minpoly: Vec<i64>,
    theta: f64,
    theta_powers: Vec<f64>,
    /// Isolating rational interval for θ, refined on demand.
    bracket: Mutex<(BigRational, BigRational)>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("level", &self.level).field("minpoly", &self.minpoly).finish()
    }
}

impl Field {
    /// The smallest ring containing 2cos(π/m) for every finite label `m ≥ 3`.
    pub fn for_labels(labels: impl IntoIterator<Item = u64>) -> Field {
        let level = labels.into_iter().filter(|&m| m >= 3).fold(1u64, |acc, m| acc.lcm(&m));
        Field::with_level(level.max(3))
    }

    /// ℤ[2cos(π/level)]; levels 1 and 2 collapse to ℤ.
    pub fn with_level(level: u64) -> Field {
        let level = level.max(3);
        let minpoly = real_cyclotomic_minpoly(2 * level);
        let theta = 2.0 * (std::f64::consts::PI / level as f64).cos();
        let degree = minpoly.len() - 1;
        let theta_powers = (0..degree).map(|i| theta.powi(i as i32)).collect();
        let eps = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
        let approx = BigRational::from_float(theta).expect("finite θ");
        let lo = &approx - &eps;
        let hi = &approx + &eps;
        let field = Field { level, minpoly, theta, theta_powers, bracket: Mutex::new((lo.clone(), hi.clone())) };
        let (slo, shi) = (field.minpoly_sign_at(&lo), field.minpoly_sign_at(&hi));
        assert!(slo * shi < 0 || degree == 1, "θ bracket does not isolate a root of the minimal polynomial");
        field
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[i64] {
        &self.minpoly
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn zero(&self) -> Num {
        Num::int(0, self.degree())
    }

    pub fn one(&self) -> Num {
        Num::int(1, self.degree())
    }

    pub fn int(&self, k: i64) -> Num {
        Num::int(k, self.degree())
    }

    /// 2cos(π/m) as a ring element; `None` encodes m = ∞ (value 2).
    pub fn two_cos_pi_over(&self, m: Option<u64>) -> Num {
        match m {
            None => self.int(2),
            Some(1) => self.int(-2),
            Some(2) => self.zero(),
            Some(3) => self.one(),
            Some(m) => {
                assert!(self.level.is_multiple_of(m), "label {m} not supported by level {}", self.level);
                self.chebyshev((self.level / m) as usize)
            }
        }
    }

    /// D_k(θ) = 2cos(kπ/L) via D_{k+1} = θ D_k − D_{k−1}.
    fn chebyshev(&self, k: usize) -> Num {
        let theta = self.theta_elem();
        let mut prev = self.int(2);
        let mut cur = theta.clone();
        if k == 0 {
            return prev;
        }
        for _ in 1..k {
            let next = self.mul(&theta, &cur).sub(&prev);
            prev = cur;
            cur = next;
        }
        cur
    }

    fn theta_elem(&self) -> Num {
        if self.degree() == 1 {
            // θ is the rational root of the linear minimal polynomial.
            return self.int(-self.minpoly[0]);
        }
        let mut c: SmallVec<[Int; 2]> = SmallVec::from_elem(Int::ZERO, self.degree());
        c[1] = Int::ONE;
        Num(c)
    }

    pub fn mul(&self, a: &Num, b: &Num) -> Num {
        let d = self.degree();
        if d == 1 {
            return Num(smallvec::smallvec![&a.0[0] * &b.0[0]]);
        }
        let mut r: Vec<Int> = vec![Int::ZERO; 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                r[i + j] = &r[i + j] + &(x * y);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut r[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                let f = self.minpoly[i];
                if f != 0 {
                    r[k - d + i] = &r[k - d + i] - &c.mul_small(f);
                }
            }
        }
        r.truncate(d);
        Num(r.into_iter().collect())
    }

    /// Floating approximation; may be `inf` for astronomically large values.
    pub fn approx(&self, a: &Num) -> f64 {
        a.0.iter().zip(&self.theta_powers).map(|(c, p)| c.to_f64_shifted(0) * p).sum()
    }

    /// Exact sign of `a` as a real number.
    pub fn sign(&self, a: &Num) -> i32 {
        if self.degree() == 1 {
            return a.0[0].signum();
        }
        if a.is_zero() {
            return 0;
        }
        let bits = a.max_bits();
        let shift = bits.saturating_sub(900);
        let mut val = 0.0f64;
        let mut mag = 0.0f64;
        let mut trunc = 0.0f64;
        for (c, p) in a.0.iter().zip(&self.theta_powers) {
            let x = c.to_f64_shifted(shift);
            val += x * p;
            mag += x.abs() * p;
            if shift > 0 {
                trunc += p;
            }
        }
        let err = mag * (4 * self.degree() + 8) as f64 * f64::EPSILON + trunc;
        if val.is_finite() && val.abs() > err {
            return if val > 0.0 { 1 } else { -1 };
        }
        self.exact_sign(a)
    }

    pub fn cmp(&self, a: &Num, b: &Num) -> std::cmp::Ordering {
        self.sign(&a.sub(b)).cmp(&0)
    }

    fn minpoly_sign_at(&self, x: &BigRational) -> i32 {
        let mut acc = BigRational::zero();
        for c in self.minpoly.iter().rev() {
            acc = acc * x + BigRational::from_integer(BigInt::from(*c));
        }
        if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        }
    }

    fn exact_sign(&self, a: &Num) -> i32 {
        let coeffs: Vec<BigRational> = a.0.iter().map(|c| BigRational::from_integer(c.to_big())).collect();
        let mut guard = self.bracket.lock().expect("bracket lock");
        loop {
            let (lo, hi) = (&guard.0, &guard.1);
            let mut lower = BigRational::zero();
            let mut upper = BigRational::zero();
            let mut plo = BigRational::one();
            let mut phi = BigRational::one();
            for c in &coeffs {
                if c.is_positive() {
                    lower += c * &plo;
                    upper += c * &phi;
                } else {
                    lower += c * &phi;
                    upper += c * &plo;
                }
                plo = &plo * lo;
                phi = &phi * hi;
            }
            if lower.is_positive() {
                return 1;
            }
            if upper.is_negative() {
                return -1;
            }
            // θ ≥ 0, so the interval evaluation is monotone per term; refine.
            let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
            let smid = self.minpoly_sign_at(&mid);
            if smid == 0 {
                // Cannot happen for an irreducible minimal polynomial of degree > 1.
                unreachable!("rational root of an irreducible minimal polynomial");
            }
            if smid == self.minpoly_sign_at(lo) {
                guard.0 = mid;
            } else {
                guard.1 = mid;
            }
        }
    }
}

/// Minimal polynomial of 2cos(2π/n) over ℚ, monic, lowest degree first.
pub fn real_cyclotomic_minpoly(n: u64) -> Vec<i64> {
    assert!(n >= 3);
    let phi = cyclotomic(n);
    // Φ_n is palindromic of even degree 2k; write z^{-k}Φ_n(z) in x = z + 1/z.
    let k = (phi.len() - 1) / 2;
    let mut dpolys: Vec<Vec<i128>> = vec![vec![2], vec![0, 1]];
    while dpolys.len() <= k {
        let j = dpolys.len();
        let mut next = vec![0i128; j + 1];
        for (i, c) in dpolys[j - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in dpolys[j - 2].iter().enumerate() {
            next[i] -= c;
        }
        dpolys.push(next);
    }
    let mut psi = vec![0i128; k + 1];
    psi[0] += phi[k];
    for j in 1..=k {
        for (i, c) in dpolys[j].iter().enumerate() {
            psi[i] += phi[k + j] * c;
        }
    }
    psi.into_iter().map(|c| i64::try_from(c).expect("minimal polynomial coefficient")).collect()
}

/// The n-th cyclotomic polynomial, lowest degree first.
fn cyclotomic(n: u64) -> Vec<i128> {
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = divide_monic(&num, &cyclotomic(d));
        }
    }
    num
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i128; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "non-exact cyclotomic division");
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_polynomials_match_known_values() {
        // 2cos(π/3) = 1
        assert_eq!(real_cyclotomic_minpoly(6), vec![-1, 1]);
        // 2cos(π/4) = √2
        assert_eq!(real_cyclotomic_minpoly(8), vec![-2, 0, 1]);
        // 2cos(π/5) = golden ratio
        assert_eq!(real_cyclotomic_minpoly(10), vec![-1, -1, 1]);
        // 2cos(π/6) = √3
        assert_eq!(real_cyclotomic_minpoly(12), vec![-3, 0, 1]);
        // 2cos(π/12)
        assert_eq!(real_cyclotomic_minpoly(24), vec![1, 0, -4, 0, 1]);
    }

    #[test]
    fn two_cos_values_are_exact() {
        let f = Field::for_labels([3, 4, 5, 6]);
        assert_eq!(f.level(), 60);
        assert_eq!(f.degree(), 16);
        for m in [3u64, 4, 5, 6, 10, 12, 60] {
            let c = f.two_cos_pi_over(Some(m));
            let expect = 2.0 * (std::f64::consts::PI / m as f64).cos();
            assert!((f.approx(&c) - expect).abs() < 1e-9, "m = {m}");
        }
        // (2cos(π/4))² = 2
        let r2 = f.two_cos_pi_over(Some(4));
        assert_eq!(f.mul(&r2, &r2), f.int(2));
        // golden ratio: φ² = φ + 1
        let g = f.two_cos_pi_over(Some(5));
        assert_eq!(f.mul(&g, &g), g.add(&f.one()));
    }

    #[test]
    fn sign_falls_back_to_exact_refinement() {
        let f = Field::with_level(4);
        let r2 = f.two_cos_pi_over(Some(4));
        // p/q close to √2 from both sides, with huge p, q.
        let p: i64 = 886_731_088_897;
        let q: i64 = 627_013_566_048;
        // p² − 2q² = 1, so p/q > √2 and q√2 − p < 0.
        let x = r2.scale(q).sub(&f.int(p));
        assert_eq!(f.sign(&x), -1);
        assert_eq!(f.sign(&x.neg()), 1);
        assert_eq!(f.sign(&f.zero()), 0);
    }
}
