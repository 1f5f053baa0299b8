//! The congruence subgroup W₀: kernel of the geometric representation
//! reduced modulo an odd prime.
//!
//! Coefficients live in `F_p[x]/(f)`, `f` the minimal polynomial of θ
//! reduced mod p. The kernel is torsion-free exactly when no non-trivial
//! element of a finite standard parabolic subgroup dies mod p (every finite
//! subgroup is conjugate into one, and the kernel is normal), which is
//! checked by comparing group orders.

use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::diagram::{self, GenSet};
use crate::error::{bail, Error, Result};
use crate::linalg::Mat;
use crate::system::CoxeterSystem;

const PRIMES: [u32; 5] = [3, 5, 7, 11, 13];

/// Largest congruence image that will be enumerated.
pub const IMAGE_CAP: usize = 2_000_000;

#[derive(Debug, Clone)]
struct ModRing {
    p: u32,
    d: usize,
    /// Monic modulus, lowest degree first, length `d + 1`.
    f: Vec<u32>,
}

impl ModRing {
    fn mul_poly(&self, a: &[u32], b: &[u32], out: &mut [u64]) {
        let d = self.d;
        let p = self.p as u64;
        let mut tmp = vec![0u64; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                tmp[i + j] = (tmp[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = tmp[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                tmp[k - d + i] = (tmp[k - d + i] + (p - c) * self.f[i] as u64) % p;
            }
        }
        for i in 0..d {
            out[i] = (out[i] + tmp[i]) % p;
        }
    }
}

/// A matrix over `F_p[x]/(f)`, entries stored as coefficient blocks.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModMat(Vec<u32>);

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceInfo {
    pub prime: u32,
    pub image_order: usize,
    pub exponent: u64,
}

#[derive(Debug)]
pub struct Congruence {
    ring: ModRing,
    n: usize,
    gens: Vec<ModMat>,
    identity: ModMat,
    image_order: usize,
    exponent: u64,
}

impl Congruence {
    pub(crate) fn build(sys: &CoxeterSystem) -> Result<Congruence> {
        let mut last_err = None;
        for &p in &PRIMES {
            match Congruence::try_prime(sys, p) {
                Ok(Some(c)) => return Ok(c),
                Ok(None) => continue,
                Err(e) => {
                    last_err = Some(e);
                    break;
                }
            }
        }
        Err(last_err
            .unwrap_or_else(|| Error::Budget(format!("no prime in {PRIMES:?} gives a torsion-free congruence kernel"))))
    }

    fn try_prime(sys: &CoxeterSystem, p: u32) -> Result<Option<Congruence>> {
        let field = sys.field();
        let f: Vec<u32> = field.minpoly().iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
        let ring = ModRing { p, d: field.degree(), f };
        let n = sys.rank();
        let reduce = |m: &Mat| {
            let mut out = Vec::with_capacity(n * n * ring.d);
            for i in 0..n {
                for j in 0..n {
                    out.extend(m.get(i, j).residues(p));
                }
            }
            ModMat(out)
        };
        let gens: Vec<ModMat> = (0..n).map(|s| reduce(&sys.generator_matrix(s))).collect();
        let identity = reduce(&Mat::identity(n, field));
        let mut c = Congruence { ring, n, gens, identity, image_order: 0, exponent: 1 };
        let image = c.enumerate(sys.matrix().all())?;
        c.image_order = image.len();

        // Torsion-freeness: every maximal spherical standard parabolic embeds.
        let m = sys.matrix();
        let spherical: Vec<GenSet> =
            m.all().subsets().filter(|&j| !j.is_empty() && diagram::is_spherical(m, j)).collect();
        for &j in &spherical {
            if spherical.iter().any(|&k| k != j && j.is_subset(k)) {
                continue;
            }
            let order = finite_order(sys, j)?;
            let img = c.enumerate(j)?.len();
            if img != order {
                return Ok(None);
            }
        }
        c.exponent = image.iter().fold(1u64, |acc, g| acc.lcm(&c.order(g)));
        Ok(Some(c))
    }

    fn mul(&self, a: &ModMat, b: &ModMat) -> ModMat {
        let (n, d) = (self.n, self.ring.d);
        let mut out = vec![0u32; n * n * d];
        let mut acc = vec![0u64; d];
        for i in 0..n {
            for j in 0..n {
                acc.iter_mut().for_each(|x| *x = 0);
                for k in 0..n {
                    let x = &a.0[(i * n + k) * d..(i * n + k + 1) * d];
                    let y = &b.0[(k * n + j) * d..(k * n + j + 1) * d];
                    if x.iter().all(|&c| c == 0) || y.iter().all(|&c| c == 0) {
                        continue;
                    }
                    self.ring.mul_poly(x, y, &mut acc);
                }
                for (t, &v) in acc.iter().enumerate() {
                    out[(i * n + j) * d + t] = v as u32;
                }
            }
        }
        ModMat(out)
    }

    fn order(&self, g: &ModMat) -> u64 {
        let mut k = 1;
        let mut cur = g.clone();
        while cur != self.identity {
            cur = self.mul(&cur, g);
            k += 1;
        }
        k
    }

    /// The image of `W_J`, by breadth-first search.
    fn enumerate(&self, j: GenSet) -> Result<Vec<ModMat>> {
        let mut seen: HashMap<ModMat, ()> = HashMap::new();
        seen.insert(self.identity.clone(), ());
        let mut all = vec![self.identity.clone()];
        let mut head = 0;
        while head < all.len() {
            let g = all[head].clone();
            head += 1;
            for s in j.iter() {
                let h = self.mul(&g, &self.gens[s]);
                if !seen.contains_key(&h) {
                    if all.len() >= IMAGE_CAP {
                        bail!(Budget, "congruence image mod {} exceeds {IMAGE_CAP} elements", self.ring.p);
                    }
                    seen.insert(h.clone(), ());
                    all.push(h);
                }
            }
        }
        Ok(all)
    }

    pub fn image(&self, word: &[u8]) -> ModMat {
        word.iter().fold(self.identity.clone(), |acc, &s| self.mul(&acc, &self.gens[s as usize]))
    }

    /// True when the word lies in W₀.
    pub fn in_kernel(&self, word: &[u8]) -> bool {
        self.image(word) == self.identity
    }

    pub fn is_identity(&self, m: &ModMat) -> bool {
        *m == self.identity
    }

    /// Order of the image of the word; the least `k` with `w^k ∈ W₀`.
    pub fn image_order_of(&self, word: &[u8]) -> u64 {
        self.order(&self.image(word))
    }

    pub fn prime(&self) -> u32 {
        self.ring.p
    }

    /// Exponent of the finite image: `w^{k₀} ∈ W₀` for every `w`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn image_order(&self) -> usize {
        self.image_order
    }

    pub fn info(&self) -> CongruenceInfo {
        CongruenceInfo { prime: self.prime(), image_order: self.image_order, exponent: self.exponent }
    }
}

/// Order of a finite standard parabolic subgroup, by exhausting its elements.
pub(crate) fn finite_order(sys: &CoxeterSystem, j: GenSet) -> Result<usize> {
    // Word-level enumeration, independent of the modular representation.
    let mut seen = std::collections::HashSet::new();
    seen.insert(Vec::<u8>::new());
    let mut layer = vec![Vec::<u8>::new()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for w in &layer {
            for s in j.iter() {
                let mut c = w.clone();
                c.push(s as u8);
                let nf = sys.reduce(&c);
                if nf.len() == w.len() + 1 && seen.insert(nf.clone()) {
                    next.push(nf);
                }
            }
        }
        if seen.len() > IMAGE_CAP {
            bail!(Budget, "finite parabolic {j:?} has more than {IMAGE_CAP} elements");
        }
        layer = next;
    }
    Ok(seen.len())
}
