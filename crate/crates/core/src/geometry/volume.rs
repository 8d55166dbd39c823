//! Pulling triangulations and exact volumes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::linalg::determinant;
use super::polytope::{Face, Polytope};
use super::{sub, QVec, Rational};

/// Pulling triangulation of `p` from its least vertex, recursively on faces.
/// Each simplex is a sorted list of vertex indices of `p`.
pub fn pulling_triangulation(p: &Polytope) -> Vec<Vec<usize>> {
    let lattice = p.face_lattice();
    let top = lattice.faces().last().expect("nonempty").clone();
    let mut memo: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    let mut out = triangulate_face(p, &top, &mut memo);
    for s in out.iter_mut() {
        s.sort();
    }
    out.sort();
    out
}

fn triangulate_face(p: &Polytope, face: &Face, memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(&face.vertices) {
        return t.clone();
    }
    let result = if face.dim == 0 {
        vec![face.vertices.clone()]
    } else {
        let apex = face.vertices[0];
        let mut out = Vec::new();
        let subfaces: Vec<Face> = p.face_lattice().facets_of(face).into_iter().cloned().collect();
        for f in subfaces {
            if f.vertices.contains(&apex) {
                continue;
            }
            for s in triangulate_face(p, &f, memo) {
                let mut t = Vec::with_capacity(s.len() + 1);
                t.push(apex);
                t.extend(s);
                out.push(t);
            }
        }
        out
    };
    memo.insert(face.vertices.clone(), result.clone());
    result
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Euclidean volume of a full-dimensional simplex given by its vertices.
pub fn simplex_volume(vertices: &[QVec]) -> Rational {
    let d = vertices.len() - 1;
    let rows: Vec<QVec> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
    determinant(&rows).abs() / Rational::from_integer(factorial(d))
}

/// Euclidean volume of a full-dimensional polytope; zero otherwise.
pub fn volume(p: &Polytope) -> Rational {
    if !p.is_full_dimensional() {
        return Rational::zero();
    }
    if p.dim() == 0 {
        return Rational::one();
    }
    pulling_triangulation(p)
        .iter()
        .map(|s| {
            let vs: Vec<QVec> = s.iter().map(|&i| p.vertices()[i].clone()).collect();
            simplex_volume(&vs)
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Volume of `p` inside the affine hull of `frame`, measured after projecting
/// to the frame's affine coordinates. Zero if `p` is lower-dimensional there.
pub fn relative_volume(p: &Polytope, frame: &Polytope) -> Rational {
    let coords = frame.affine_coordinates();
    let pts: Vec<QVec> = p.vertices().iter().map(|v| coords.iter().map(|&j| v[j].clone()).collect()).collect();
    if coords.is_empty() {
        return Rational::one();
    }
    volume(&Polytope::hull(&pts, p.role()).expect("nonempty"))
}
