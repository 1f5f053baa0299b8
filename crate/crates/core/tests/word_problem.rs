use std::collections::HashSet;

use coxeter::element::{self, tits, Element};
use coxeter::geometry::{self, RootVector};
use coxeter::presets;
use coxeter::system::System;
use proptest::prelude::*;

const SYSTEMS: [&str; 7] = ["a2", "b2", "h3", "dinf_a1", "atilde2", "t334", "dinf_dinf"];

fn sys(i: usize) -> System {
    presets::system(SYSTEMS[i]).unwrap()
}

fn word(rank: usize, len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..rank as u8, 0..=len)
}

/// A system index with one word over its generators.
fn system_and_word(len: usize) -> impl Strategy<Value = (usize, Vec<u8>)> {
    (0..SYSTEMS.len()).prop_flat_map(move |i| (Just(i), word(sys(i).rank(), len)))
}

fn system_and_words(len: usize) -> impl Strategy<Value = (usize, Vec<u8>, Vec<u8>)> {
    (0..SYSTEMS.len()).prop_flat_map(move |i| {
        let r = sys(i).rank();
        (Just(i), word(r, len), word(r, len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_form_is_idempotent((i, w) in system_and_word(16)) {
        let s = sys(i);
        let nf = s.reduce(&w);
        prop_assert_eq!(s.reduce(&nf), nf.clone());
        prop_assert!(nf.len() <= w.len());
        prop_assert_eq!(nf.len() % 2, w.len() % 2);
    }

    #[test]
    fn normal_form_matches_tits_rewriting((i, w) in system_and_word(10)) {
        let s = sys(i);
        let by_tits = tits::tits_normal_form(s.matrix(), &w, 1_000_000).unwrap();
        prop_assert_eq!(by_tits, s.reduce(&w));
    }

    #[test]
    fn automaton_accepts_exactly_reduced_words((i, w) in system_and_word(12)) {
        let s = sys(i);
        let roots = s.elementary_roots().unwrap();
        let nf = s.reduce(&w);
        prop_assert!(roots.is_reduced(&nf));
        prop_assert_eq!(roots.is_reduced(&w), nf.len() == w.len());
    }

    #[test]
    fn inverse_has_the_same_length((i, w) in system_and_word(16)) {
        let s = sys(i);
        let x = Element::from_letters(&s, &w).unwrap();
        prop_assert_eq!(x.inverse().len(), x.len());
        prop_assert!(x.mul(&x.inverse()).unwrap().is_identity());
    }

    #[test]
    fn matrices_are_a_faithful_homomorphism((i, u, v) in system_and_words(10)) {
        let s = sys(i);
        let f = s.field();
        let x = Element::from_letters(&s, &u).unwrap();
        let y = Element::from_letters(&s, &v).unwrap();
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.matrix(), x.matrix().mul(&y.matrix(), f));
        prop_assert_eq!(x.matrix() == y.matrix(), x == y);
    }

    #[test]
    fn inversion_set_size_is_length((i, w) in system_and_word(14)) {
        let s = sys(i);
        let x = Element::from_letters(&s, &w).unwrap();
        let inv = element::inversion_roots(&x);
        prop_assert_eq!(inv.len(), x.len());
        // Each is a positive root sent negative by x⁻¹.
        let xi = x.inverse();
        for r in &inv {
            prop_assert!(r.is_positive(&s));
            prop_assert!(!geometry::act_on_root(&xi, r).is_positive(&s));
        }
        let distinct: HashSet<_> = inv.iter().collect();
        prop_assert_eq!(distinct.len(), inv.len());
    }

    #[test]
    fn inversion_set_of_a_product((i, u, v) in system_and_words(8)) {
        // N(xy) = N(x) Δ x·N(y), as sets of positive roots.
        let s = sys(i);
        let x = Element::from_letters(&s, &u).unwrap();
        let y = Element::from_letters(&s, &v).unwrap();
        let lhs: HashSet<RootVector> = element::inversion_roots(&x.mul(&y).unwrap()).into_iter().collect();
        let nx: HashSet<RootVector> = element::inversion_roots(&x).into_iter().collect();
        let xny: HashSet<RootVector> = element::inversion_roots(&y)
            .iter()
            .map(|r| geometry::act_on_root(&x, r).positive(&s))
            .collect();
        let rhs: HashSet<RootVector> = nx.symmetric_difference(&xny).cloned().collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_preserves_the_form((i, w, a, b) in (0..SYSTEMS.len()).prop_flat_map(|i| {
        let r = sys(i).rank();
        (Just(i), word(r, 10), 0..r, 0..r)
    })) {
        let s = sys(i);
        let x = Element::from_letters(&s, &w).unwrap();
        let (ra, rb) = (RootVector::simple(&s, a), RootVector::simple(&s, b));
        let (xa, xb) = (geometry::act_on_root(&x, &ra), geometry::act_on_root(&x, &rb));
        prop_assert_eq!(geometry::bilinear(&s, &xa, &xb), geometry::bilinear(&s, &ra, &rb));
    }

    #[test]
    fn action_is_equivariant((i, u, v, a) in (0..SYSTEMS.len()).prop_flat_map(|i| {
        let r = sys(i).rank();
        (Just(i), word(r, 8), word(r, 8), 0..r)
    })) {
        let s = sys(i);
        let x = Element::from_letters(&s, &u).unwrap();
        let y = Element::from_letters(&s, &v).unwrap();
        let alpha = RootVector::simple(&s, a);
        let lhs = geometry::act_on_root(&x.mul(&y).unwrap(), &alpha);
        let rhs = geometry::act_on_root(&x, &geometry::act_on_root(&y, &alpha));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugates_of_reflections_are_reflections((i, w, a) in (0..SYSTEMS.len()).prop_flat_map(|i| {
        let r = sys(i).rank();
        (Just(i), word(r, 10), 0..r)
    })) {
        let s = sys(i);
        let x = Element::from_letters(&s, &w).unwrap();
        let t = Element::generator(&s, a).conjugate(&x).unwrap();
        prop_assert!(t.is_reflection());
        prop_assert_eq!(t.len() % 2, 1);
    }
}
