//! Naive word problem by Tits' rewriting: a word is reduced iff no sequence
//! of braid moves produces a square `ss`. Kept as an independent oracle for
//! the root-based normal form.

use std::collections::{HashSet, VecDeque};

use crate::diagram::CoxeterMatrix;
use crate::error::{bail, Result};

/// Braid-move class of `word`, or the first member containing a square.
enum Closure {
    Reduced(HashSet<Vec<u8>>),
    Square(Vec<u8>, usize),
}

fn square_at(w: &[u8]) -> Option<usize> {
    w.windows(2).position(|p| p[0] == p[1])
}

fn closure(m: &CoxeterMatrix, word: &[u8], cap: usize) -> Result<Closure> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    while let Some(w) = queue.pop_front() {
        if let Some(i) = square_at(&w) {
            return Ok(Closure::Square(w, i));
        }
        for i in 0..w.len().saturating_sub(1) {
            let (s, t) = (w[i] as usize, w[i + 1] as usize);
            let Some(k) = m.order(s, t) else { continue };
            let k = k as usize;
            if i + k > w.len() {
                continue;
            }
            let alternates = (0..k).all(|r| w[i + r] as usize == if r % 2 == 0 { s } else { t });
            if !alternates {
                continue;
            }
            let mut v = w.clone();
            for r in 0..k {
                v[i + r] = if r % 2 == 0 { t as u8 } else { s as u8 };
            }
            if seen.insert(v.clone()) {
                if seen.len() > cap {
                    bail!(Budget, "braid class exceeds {cap} words");
                }
                queue.push_back(v);
            }
        }
    }
    Ok(Closure::Reduced(seen))
}

/// ShortLex normal form by exhaustive rewriting.
pub fn tits_normal_form(m: &CoxeterMatrix, word: &[u8], cap: usize) -> Result<Vec<u8>> {
    let mut cur = word.to_vec();
    loop {
        match closure(m, &cur, cap)? {
            Closure::Square(mut w, i) => {
                w.drain(i..i + 2);
                cur = w;
            }
            Closure::Reduced(class) => {
                return Ok(class.into_iter().min().unwrap_or_default());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewriting_reference_words() {
        let a2 = CoxeterMatrix::from_edges(2, &[(0, 1, 3)]).unwrap();
        assert_eq!(tits_normal_form(&a2, &[1, 0, 1], 100).unwrap(), vec![0, 1, 0]);
        assert_eq!(tits_normal_form(&a2, &[0, 1, 0, 1, 0, 1], 100).unwrap(), Vec::<u8>::new());
        let a3 = CoxeterMatrix::from_edges(3, &[(0, 1, 3), (1, 2, 3)]).unwrap();
        // u s = s u since m(s,u) = 2.
        assert_eq!(tits_normal_form(&a3, &[2, 0], 100).unwrap(), vec![0, 2]);
    }
}
