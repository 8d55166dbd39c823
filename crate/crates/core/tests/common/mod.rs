//! Random reflexive polytopes and nef-partitions for property tests.
#![allow(dead_code)]

use nefsphere::geometry::{qvec, Polytope, Role};
use nefsphere::nef::NefPartition;
use nefsphere::pipeline::{Flags, InputSpec, RationalInput, WeightEntry, WeightSpec};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Maximal reflexive polygons; every reflexive polygon is, up to
/// unimodular equivalence, spanned by boundary points of one of them.
const POLYGON_SOURCES: [&[[i64; 2]]; 3] = [
    &[[-1, -1], [2, -1], [-1, 2]],
    &[[-1, -1], [1, -1], [1, 1], [-1, 1]],
    &[[-1, -1], [3, -1], [-1, 1]],
];

const POLYTOPE3_SOURCES: [&[[i64; 3]]; 2] = [
    &[[3, -1, -1], [-1, 3, -1], [-1, -1, 3], [-1, -1, -1]],
    &[[-1, -1, -1], [1, -1, -1], [-1, 1, -1], [1, 1, -1], [-1, -1, 1], [1, -1, 1], [-1, 1, 1], [1, 1, 1]],
];

fn boundary_points(p: &Polytope) -> Vec<Vec<i64>> {
    p.lattice_points().into_iter().filter(|m| m.iter().any(|&x| x != 0)).collect()
}

fn interior_count(p: &Polytope) -> usize {
    p.lattice_points().iter().filter(|m| p.contains_in_relative_interior(&qvec(m))).count()
}

/// Random matrix in `GL_d(Z)` built from a few elementary moves.
fn unimodular(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..2 {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let k = rng.gen_range(-1..=1);
        for c in 0..d {
            a[i][c] += k * a[j][c];
        }
        if rng.gen_bool(0.3) {
            a.swap(i, j);
        }
    }
    a
}

fn apply(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn random_reflexive(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
    loop {
        let source: Vec<Vec<i64>> = if d == 2 {
            POLYGON_SOURCES[rng.gen_range(0..POLYGON_SOURCES.len())].iter().map(|v| v.to_vec()).collect()
        } else {
            POLYTOPE3_SOURCES[rng.gen_range(0..POLYTOPE3_SOURCES.len())].iter().map(|v| v.to_vec()).collect()
        };
        let big = Polytope::from_integer_points(&source, Role::M).unwrap();
        let mut pts = boundary_points(&big);
        pts.shuffle(rng);
        let k = rng.gen_range(d + 1..=pts.len().min(3 * d + 2));
        let Ok(p) = Polytope::from_integer_points(&pts[..k], Role::M) else { continue };
        if !p.contains_origin_in_interior() {
            continue;
        }
        let ok = if d == 2 { interior_count(&p) == 1 } else { matches!(p.is_reflexive(), Ok(true)) };
        if ok {
            let a = unimodular(rng, d);
            let mut vs: Vec<Vec<i64>> = p.integer_vertices().unwrap().iter().map(|v| apply(&a, v)).collect();
            vs.sort();
            return vs;
        }
    }
}

/// Splits the vertices of a random reflexive polytope into `r` groups and
/// takes the parts `Conv(0, Vᵢ)`; retries until the split is a nef-partition.
pub fn random_nef(rng: &mut ChaCha8Rng, d: usize, r: usize) -> Vec<Vec<Vec<i64>>> {
    loop {
        let vs = random_reflexive(rng, d);
        for _ in 0..20 {
            let mut parts: Vec<Vec<Vec<i64>>> = vec![vec![vec![0; d]]; r];
            let mut order = vs.clone();
            order.shuffle(rng);
            for (i, v) in order.into_iter().enumerate() {
                let slot = if i < r { i } else { rng.gen_range(0..r) };
                parts[slot].push(v);
            }
            let Ok(nef) = NefPartition::new(d, &parts, Role::M) else { continue };
            if nef.validate().passed() {
                return parts;
            }
        }
    }
}

fn perturbed(rng: &mut ChaCha8Rng, points: &[Vec<i64>]) -> WeightSpec {
    let values = ["1", "17/16", "9/8"];
    WeightSpec::Table(
        points
            .iter()
            .map(|p| {
                let value = if p.iter().all(|&x| x == 0) {
                    "0".to_string()
                } else {
                    values[rng.gen_range(0..values.len())].to_string()
                };
                WeightEntry { point: p.clone(), value: RationalInput::Text(value) }
            })
            .collect(),
    )
}

/// A random input; with `perturb` the weights are small perturbations of
/// `𝟙` (which may or may not give central subdivisions).
pub fn random_input(rng: &mut ChaCha8Rng, d: usize, r: usize, perturb: bool) -> InputSpec {
    let parts = random_nef(rng, d, r);
    let (omega, nu) = if perturb {
        let nef = NefPartition::new(d, &parts, Role::M).unwrap();
        let dual = nef.dual().unwrap();
        (perturbed(rng, &nef.union_hull().lattice_points()), perturbed(rng, &dual.union_hull().lattice_points()))
    } else {
        (WeightSpec::default(), WeightSpec::default())
    };
    InputSpec { dim: d, parts, omega, nu, flags: Flags::default() }
}
