//! Reduced-word acceptor over elementary (small) roots.
//!
//! The elementary roots form a finite set containing the simple roots and
//! closed under `β ↦ sβ` whenever `−1 < B(β, α_s) < 0`. For a word `w`, the
//! state is the set of elementary roots made negative by `w`; appending `s`
//! keeps the word reduced iff `α_s` is not in the state.

use std::collections::HashMap;

use crate::error::{bail, Result};
use crate::linalg::Vector;
use crate::system::CoxeterSystem;

/// Largest elementary root set that will be built.
pub const ELEMENTARY_CAP: usize = 200_000;

#[derive(Debug)]
pub struct ElementaryRoots {
    roots: Vec<Vector>,
    /// `next[β][s]`: index of `sβ` when it is elementary.
    next: Vec<Vec<Option<u32>>>,
    simple: Vec<usize>,
}

impl ElementaryRoots {
    pub(crate) fn build(sys: &CoxeterSystem) -> Result<ElementaryRoots> {
        let n = sys.rank();
        let f = sys.field();
        let mut roots: Vec<Vector> = (0..n).map(|s| sys.simple_root(s)).collect();
        let mut index: HashMap<Vector, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut head = 0;
        while head < roots.len() {
            let beta = roots[head].clone();
            head += 1;
            for s in 0..n {
                // A(β, α_s) = 2B(β, α_s) must lie strictly between −2 and 0.
                let b = sys.pair_simple(&beta, s);
                if f.sign(&b) >= 0 || f.sign(&b.add(&f.int(2))) <= 0 {
                    continue;
                }
                let mut gamma = beta.clone();
                sys.reflect(s, &mut gamma);
                if !index.contains_key(&gamma) {
                    if roots.len() >= ELEMENTARY_CAP {
                        bail!(Budget, "more than {ELEMENTARY_CAP} elementary roots");
                    }
                    index.insert(gamma.clone(), roots.len());
                    roots.push(gamma);
                }
            }
        }
        let next = roots
            .iter()
            .map(|beta| {
                (0..n)
                    .map(|s| {
                        let mut gamma = beta.clone();
                        sys.reflect(s, &mut gamma);
                        index.get(&gamma).map(|&i| i as u32)
                    })
                    .collect()
            })
            .collect();
        Ok(ElementaryRoots { roots, next, simple: (0..n).collect() })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    /// Runs the acceptor; `Some(i)` is the first position where the prefix
    /// stops being reduced.
    pub fn first_non_reduced(&self, word: &[u8]) -> Option<usize> {
        let words = self.roots.len().div_ceil(64);
        let mut state = vec![0u64; words];
        let mut next_state = vec![0u64; words];
        for (pos, &s) in word.iter().enumerate() {
            let s = s as usize;
            let a = self.simple[s];
            if state[a / 64] >> (a % 64) & 1 == 1 {
                return Some(pos);
            }
            next_state.iter_mut().for_each(|x| *x = 0);
            next_state[a / 64] |= 1 << (a % 64);
            for (wi, &bits) in state.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let i = wi * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    if let Some(j) = self.next[i][s] {
                        let j = j as usize;
                        next_state[j / 64] |= 1 << (j % 64);
                    }
                }
            }
            std::mem::swap(&mut state, &mut next_state);
        }
        None
    }

    pub fn is_reduced(&self, word: &[u8]) -> bool {
        self.first_non_reduced(word).is_none()
    }
}
