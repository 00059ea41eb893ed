//! Catalog of named benchmark systems plus a seeded generator of random
//! conservative systems.

use rand::Rng;

use crate::error::{Error, Result};
use crate::torus::{ShearFactor, TorusSystem};

/// Names accepted by `catalog_system`, in display order.
pub fn catalog_names() -> &'static [&'static str] {
    &[
        "identity",
        "shear",
        "cat",
        "inverse-cat",
        "cat-cat",
        "perturbed-cat-0.05",
        "perturbed-cat-0.1",
        "shear-pair",
    ]
}

fn perturbed_cat(delta: f64) -> Result<TorusSystem> {
    TorusSystem::new(
        vec![vec![2, 1], vec![1, 1]],
        vec![ShearFactor::new(1, vec![1, 0], delta, 0.0)],
    )
}

/// Builds a catalog system by name.
pub fn catalog_system(name: &str) -> Result<TorusSystem> {
    match name {
        "identity" => TorusSystem::new(vec![vec![1, 0], vec![0, 1]], vec![]),
        "shear" => TorusSystem::new(vec![vec![1, 1], vec![0, 1]], vec![]),
        "cat" => TorusSystem::new(vec![vec![2, 1], vec![1, 1]], vec![]),
        "inverse-cat" => TorusSystem::new(vec![vec![1, -1], vec![-1, 2]], vec![]),
        "cat-cat" => TorusSystem::new(
            vec![
                vec![2, 1, 0, 0],
                vec![1, 1, 0, 0],
                vec![0, 0, 2, 1],
                vec![0, 0, 1, 1],
            ],
            vec![],
        ),
        "perturbed-cat-0.05" => perturbed_cat(0.05),
        "perturbed-cat-0.1" => perturbed_cat(0.1),
        "shear-pair" => TorusSystem::new(
            vec![vec![1, 0], vec![0, 1]],
            vec![
                ShearFactor::new(1, vec![1, 0], 0.3, 0.0),
                ShearFactor::new(0, vec![0, 1], 0.3, 0.0),
            ],
        ),
        other => Err(Error::InvalidInput(format!(
            "unknown catalog system '{other}'; known: {}",
            catalog_names().join(", ")
        ))),
    }
}

/// Random conservative 2-dimensional system: a product of elementary
/// GL(2,Z) factors (optionally a swap, giving det −1) with up to two
/// small shears of amplitude at most 0.1.
pub fn random_conservative<R: Rng>(rng: &mut R) -> TorusSystem {
    loop {
        let mut m = [[1i64, 0], [0, 1]];
        let factors = rng.gen_range(2..=4);
        for _ in 0..factors {
            let a = rng.gen_range(-2i64..=2);
            let e = if rng.gen_bool(0.5) {
                [[1, a], [0, 1]]
            } else {
                [[1, 0], [a, 1]]
            };
            m = mat_mul(m, e);
        }
        if rng.gen_bool(0.25) {
            m = mat_mul(m, [[0, 1], [1, 0]]);
        }
        if m.iter().flatten().any(|v| v.abs() > 20) {
            continue;
        }
        let mut shears = Vec::new();
        for _ in 0..rng.gen_range(0..=2usize) {
            let axis = rng.gen_range(0..2usize);
            let other = 1 - axis;
            let mut freq = vec![0i64; 2];
            freq[other] = loop {
                let f = rng.gen_range(-2i64..=2);
                if f != 0 {
                    break f;
                }
            };
            let amplitude = rng.gen_range(0.01..=0.1);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            shears.push(ShearFactor::new(axis, freq, amplitude, phase));
        }
        let rows = vec![vec![m[0][0], m[0][1]], vec![m[1][0], m[1][1]]];
        match TorusSystem::new(rows, shears) {
            Ok(sys) => return sys,
            Err(_) => continue,
        }
    }
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
