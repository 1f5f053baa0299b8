//! A Coxeter system together with its geometric representation over ℤ[θ].
//!
//! Vectors are written in the basis of simple roots `e_s`. The form stored
//! is `A = 2B`, so `A[s][s] = 2`, `A[s][t] = −2cos(π/m(s,t))` (and `−2` for
//! m = ∞), and the simple reflection acts by `s(v) = v − A(v, e_s) e_s`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::diagram::{CoxeterMatrix, GenSet};
use crate::element::automaton::ElementaryRoots;
use crate::element::congruence::Congruence;
use crate::element::Element;
use crate::error::{bail, Result};
use crate::field::{Field, Num};
use crate::linalg::{Mat, Vector};

pub type System = Arc<CoxeterSystem>;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

type BallCache = HashMap<(GenSet, usize), Arc<Vec<Element>>>;

pub struct CoxeterSystem {
    id: u64,
    name: String,
    matrix: CoxeterMatrix,
    field: Field,
    a: Vec<Vec<Num>>,
    /// `A[s][t]` when it is a rational integer (labels 2, 3, ∞).
    a_int: Vec<Vec<Option<i64>>>,
    congruence: OnceLock<Result<Congruence>>,
    elementary: OnceLock<Result<ElementaryRoots>>,
    balls: Mutex<BallCache>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem").field("name", &self.name).field("matrix", &self.matrix).finish()
    }
}

impl CoxeterSystem {
    pub fn new(name: impl Into<String>, matrix: CoxeterMatrix) -> System {
        let field = Field::for_labels(matrix.finite_labels());
        let n = matrix.rank();
        let a: Vec<Vec<Num>> = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        if s == t {
                            field.int(2)
                        } else {
                            field.two_cos_pi_over(matrix.order(s, t).map(u64::from)).neg()
                        }
                    })
                    .collect()
            })
            .collect();
        let a_int = a.iter().map(|row| row.iter().map(|x| x.as_integer().and_then(|k| k.as_i64())).collect()).collect();
        Arc::new(CoxeterSystem {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            matrix,
            field,
            a,
            a_int,
            congruence: OnceLock::new(),
            elementary: OnceLock::new(),
            balls: Mutex::new(HashMap::new()),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `2B(e_s, e_t)`.
    pub fn a(&self, s: usize, t: usize) -> &Num {
        &self.a[s][t]
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field.zero(); self.rank()]
    }

    pub fn simple_root(&self, s: usize) -> Vector {
        let mut v = self.zero_vector();
        v[s] = self.field.one();
        v
    }

    fn scale_a(&self, s: usize, t: usize, x: &Num) -> Num {
        match self.a_int[s][t] {
            Some(0) => self.field.zero(),
            Some(-1) => x.neg(),
            Some(k) => x.scale(k),
            None => self.field.mul(&self.a[s][t], x),
        }
    }

    /// `A(v, e_s) = 2B(v, e_s)`.
    pub fn pair_simple(&self, v: &[Num], s: usize) -> Num {
        let mut acc = self.field.zero();
        for (t, x) in v.iter().enumerate() {
            if !x.is_zero() {
                acc = acc.add(&self.scale_a(t, s, x));
            }
        }
        acc
    }

    /// `2B(u, v)`.
    pub fn twice_b(&self, u: &[Num], v: &[Num]) -> Num {
        let mut acc = self.field.zero();
        for (s, x) in u.iter().enumerate() {
            if !x.is_zero() {
                acc = acc.add(&self.field.mul(x, &self.pair_simple(v, s)));
            }
        }
        acc
    }

    /// Applies the simple reflection `s` in place.
    pub fn reflect(&self, s: usize, v: &mut [Num]) {
        let c = self.pair_simple(v, s);
        if !c.is_zero() {
            v[s] = v[s].sub(&c);
        }
    }

    /// `w · v` for `w` given by a word.
    pub fn apply_word(&self, word: &[u8], v: &[Num]) -> Vector {
        let mut out = v.to_vec();
        for &s in word.iter().rev() {
            self.reflect(s as usize, &mut out);
        }
        out
    }

    /// `w⁻¹ · v` for `w` given by a word.
    pub fn apply_inverse_word(&self, word: &[u8], v: &[Num]) -> Vector {
        let mut out = v.to_vec();
        for &s in word {
            self.reflect(s as usize, &mut out);
        }
        out
    }

    /// Sign of a root (all coordinates share it); 0 for the zero vector.
    pub fn root_sign(&self, v: &[Num]) -> i32 {
        v.iter().find(|x| !x.is_zero()).map_or(0, |x| self.field.sign(x))
    }

    pub fn generator_matrix(&self, s: usize) -> Mat {
        let n = self.rank();
        let mut m = Mat::identity(n, &self.field);
        for t in 0..n {
            let v = if t == s { self.field.int(-1) } else { self.a[t][s].neg() };
            m.set(s, t, v);
        }
        m
    }

    pub fn word_matrix(&self, word: &[u8]) -> Mat {
        let n = self.rank();
        let mut cols: Vec<Vector> = (0..n).map(|t| self.simple_root(t)).collect();
        for c in cols.iter_mut() {
            *c = self.apply_word(word, c);
        }
        let mut m = Mat::identity(n, &self.field);
        for (j, c) in cols.into_iter().enumerate() {
            for (i, x) in c.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    /// Matrix of the reflection in the root `beta`: `v ↦ v − A(v, β) β`.
    #[allow(clippy::needless_range_loop)]
    pub fn reflection_matrix(&self, beta: &[Num]) -> Mat {
        let n = self.rank();
        let mut m = Mat::identity(n, &self.field);
        for j in 0..n {
            let c = self.pair_simple(beta, j);
            for i in 0..n {
                let v = m.get(i, j).sub(&self.field.mul(&c, &beta[i]));
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn validate_word(&self, letters: &[u8]) -> Result<()> {
        if let Some(&bad) = letters.iter().find(|&&s| s as usize >= self.rank()) {
            bail!(Input, "generator index {bad} out of range for rank {}", self.rank());
        }
        Ok(())
    }

    /// ShortLex normal form of a product of generators.
    ///
    /// Tracks `y_s = w⁻¹(e_s)`; `s` is a left descent of `w` exactly when
    /// `y_s` is negative. Peeling the least left descent each time yields the
    /// lexicographically least reduced word.
    pub fn reduce(&self, letters: &[u8]) -> Vec<u8> {
        let n = self.rank();
        if letters.len() <= 1 {
            return letters.to_vec();
        }
        let mut y: Vec<Vector> = (0..n).map(|s| self.apply_inverse_word(letters, &self.simple_root(s))).collect();
        let mut out = Vec::with_capacity(letters.len());
        while let Some(s) = (0..n).find(|&s| self.root_sign(&y[s]) < 0) {
            out.push(s as u8);
            let ys = std::mem::take(&mut y[s]);
            for (t, yt) in y.iter_mut().enumerate() {
                if t != s && self.a_int[t][s] != Some(0) {
                    for (x, y) in yt.iter_mut().zip(&ys) {
                        if !y.is_zero() {
                            *x = x.sub(&self.scale_a(t, s, y));
                        }
                    }
                }
            }
            y[s] = ys.iter().map(Num::neg).collect();
        }
        out
    }

    pub fn congruence(&self) -> Result<&Congruence> {
        self.congruence.get_or_init(|| Congruence::build(self)).as_ref().map_err(Clone::clone)
    }

    pub fn elementary_roots(&self) -> Result<&ElementaryRoots> {
        self.elementary.get_or_init(|| ElementaryRoots::build(self)).as_ref().map_err(Clone::clone)
    }

    /// All elements of length ≤ `radius` in the standard parabolic `W_J`,
    /// ordered by length then ShortLex. Fails when more than `cap` elements
    /// would be produced.
    pub fn ball(self: &Arc<Self>, j: GenSet, radius: usize, cap: usize) -> Result<Arc<Vec<Element>>> {
        if let Some(b) = self.balls.lock().expect("ball cache").get(&(j, radius)) {
            return Ok(b.clone());
        }
        let mut all = vec![Element::identity(self)];
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        seen.insert(Vec::new());
        let mut layer = vec![Vec::<u8>::new()];
        for len in 1..=radius {
            let mut next: Vec<Vec<u8>> = Vec::new();
            for w in &layer {
                for s in j.iter() {
                    let mut cand = w.clone();
                    cand.push(s as u8);
                    let nf = self.reduce(&cand);
                    if nf.len() == len && seen.insert(nf.clone()) {
                        next.push(nf);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            if all.len() + next.len() > cap {
                bail!(Budget, "ball of radius {radius} has more than {cap} elements");
            }
            all.extend(next.iter().map(|w| Element::from_reduced(self, w.clone())));
            layer = next;
        }
        let all = Arc::new(all);
        self.balls.lock().expect("ball cache").insert((j, radius), all.clone());
        Ok(all)
    }
}
