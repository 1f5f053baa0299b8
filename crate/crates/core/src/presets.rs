//! Named Coxeter systems used by the suite, the CLI and the tests.

use crate::diagram::CoxeterMatrix;
use crate::error::{bail, Result};
use crate::system::{CoxeterSystem, System};

pub const NAMES: [&str; 9] = ["a2", "b2", "a1x3", "dinf", "dinf_a1", "atilde2", "t334", "dinf_dinf", "h3"];

/// Systems of the default suite run.
pub const SUITE: [&str; 5] = ["a1x3", "dinf", "dinf_a1", "atilde2", "t334"];

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn build(names: &[&str], edges: &[(usize, usize, u32)]) -> CoxeterMatrix {
    let n = names.len();
    let mut m = vec![vec![2u32; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(i, j, v) in edges {
        m[i][j] = v;
        m[j][i] = v;
    }
    CoxeterMatrix::new(labels(names), m).expect("preset matrices are valid")
}

pub fn matrix(name: &str) -> Result<CoxeterMatrix> {
    Ok(match name {
        "a2" => build(&["s", "t"], &[(0, 1, 3)]),
        "b2" => build(&["s", "t"], &[(0, 1, 4)]),
        "a1x3" => build(&["s", "t", "u"], &[]),
        "dinf" => build(&["s", "t"], &[(0, 1, 0)]),
        "dinf_a1" => build(&["s", "t", "u"], &[(0, 1, 0)]),
        "atilde2" => build(&["a", "b", "c"], &[(0, 1, 3), (1, 2, 3), (0, 2, 3)]),
        "t334" => build(&["s", "t", "u"], &[(0, 1, 3), (1, 2, 3), (0, 2, 4)]),
        "dinf_dinf" => build(&["s1", "t1", "s2", "t2"], &[(0, 1, 0), (2, 3, 0)]),
        "h3" => build(&["s", "t", "u"], &[(0, 1, 5), (1, 2, 3)]),
        other => bail!(Input, "unknown system {other:?}; known: {}", NAMES.join(", ")),
    })
}

pub fn system(name: &str) -> Result<System> {
    Ok(CoxeterSystem::new(name, matrix(name)?))
}
