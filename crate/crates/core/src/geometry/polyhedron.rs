//! Possibly unbounded polyhedra given by linear constraints, with their
//! generator form (vertices, rays, lines).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use super::linalg::{affine_dim, rank};
use super::{dot, primitive, zvec_to_q, QVec, Rational, ZVec};

/// A linear constraint `⟨normal, x⟩ ≤ rhs` (or `= rhs`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: QVec,
    pub rhs: Rational,
}

impl Halfspace {
    pub fn new(normal: QVec, rhs: Rational) -> Self {
        Halfspace { normal, rhs }
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x)
    }
}

#[derive(Debug, Clone)]
pub struct Polyhedron {
    ambient: usize,
    ineqs: Vec<Halfspace>,
    eqs: Vec<Halfspace>,
    vertices: Vec<QVec>,
    rays: Vec<ZVec>,
    lines: Vec<ZVec>,
}

fn homogenize(h: &Halfspace) -> ZVec {
    // b·t − ⟨a, x⟩
    let mut row = Vec::with_capacity(h.normal.len() + 1);
    row.push(h.rhs.clone());
    row.extend(h.normal.iter().map(|x| -x));
    primitive(&row)
}

impl Polyhedron {
    /// `{x : ineqs ≤, eqs =}`, or `None` when empty.
    pub fn from_constraints(ambient: usize, ineqs: &[Halfspace], eqs: &[Halfspace]) -> Option<Self> {
        let mut rows: Vec<ZVec> = ineqs.iter().map(homogenize).collect();
        let mut t_row = vec![num_bigint::BigInt::zero(); ambient + 1];
        t_row[0] = num_bigint::BigInt::one();
        rows.push(t_row);
        let eq_rows: Vec<ZVec> = eqs.iter().map(homogenize).collect();
        let gens = cone_generators(ambient + 1, &rows, &eq_rows);

        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for g in gens.rays {
            if g[0].is_positive() {
                let t = BigRational::from_integer(g[0].clone());
                vertices.push(g[1..].iter().map(|x| BigRational::from_integer(x.clone()) / &t).collect());
            } else {
                rays.push(g[1..].to_vec());
            }
        }
        if vertices.is_empty() {
            return None;
        }
        let lines: Vec<ZVec> = gens
            .lines
            .into_iter()
            .map(|l| {
                debug_assert!(l[0].is_zero());
                canonical_line(l[1..].to_vec())
            })
            .collect();
        vertices.sort();
        vertices.dedup();
        rays.sort();
        rays.dedup();
        Some(Polyhedron {
            ambient,
            ineqs: ineqs.to_vec(),
            eqs: eqs.to_vec(),
            vertices,
            rays,
            lines,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn rays(&self) -> &[ZVec] {
        &self.rays
    }

    pub fn lines(&self) -> &[ZVec] {
        &self.lines
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.ineqs
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.eqs
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn dim(&self) -> isize {
        let p0 = &self.vertices[0];
        let mut pts = self.vertices.clone();
        for r in self.rays.iter().chain(&self.lines) {
            pts.push(super::add(p0, &zvec_to_q(r)));
        }
        affine_dim(&pts)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.eqs.iter().all(|h| h.value(x) == h.rhs) && self.ineqs.iter().all(|h| h.value(x) <= h.rhs)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Option<Polyhedron> {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        Polyhedron::from_constraints(self.ambient, &ineqs, &eqs)
    }

    /// A point in the relative interior: the vertex barycenter pushed along
    /// the sum of the rays.
    pub fn relative_interior_point(&self) -> QVec {
        let n = Rational::from_integer((self.vertices.len() as i64).into());
        let mut c = vec![Rational::zero(); self.ambient];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        for ci in c.iter_mut() {
            *ci /= &n;
        }
        for r in &self.rays {
            for (ci, ri) in c.iter_mut().zip(r) {
                *ci += Rational::from_integer(ri.clone());
            }
        }
        c
    }

    /// Same point set, compared through the generator form.
    pub fn same_set(&self, other: &Polyhedron) -> bool {
        if self.vertices != other.vertices || self.rays != other.rays {
            return false;
        }
        let a: Vec<QVec> = self.lines.iter().map(|l| zvec_to_q(l)).collect();
        let mut both = a.clone();
        both.extend(other.lines.iter().map(|l| zvec_to_q(l)));
        let r = rank(&a, self.ambient);
        r == other.lines.len() && rank(&both, self.ambient) == r
    }
}

fn canonical_line(mut l: ZVec) -> ZVec {
    if let Some(first) = l.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in l.iter_mut() {
                *x = -&*x;
            }
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{q, qvec};

    fn hs(a: &[i64], b: i64) -> Halfspace {
        Halfspace::new(qvec(a), q(b))
    }

    #[test]
    fn triangle_from_constraints() {
        let p = Polyhedron::from_constraints(2, &[hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 1)], &[]).unwrap();
        assert!(p.is_bounded());
        assert_eq!(p.vertices(), &[qvec(&[0, 0]), qvec(&[0, 1]), qvec(&[1, 0])]);
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn ray_and_empty() {
        let p = Polyhedron::from_constraints(1, &[hs(&[-1], -1)], &[]).unwrap();
        assert!(!p.is_bounded());
        assert_eq!(p.vertices(), &[qvec(&[1])]);
        assert_eq!(p.rays().len(), 1);
        assert!(Polyhedron::from_constraints(1, &[hs(&[1], 0), hs(&[-1], -1)], &[]).is_none());
    }

    #[test]
    fn slab_with_line() {
        let p = Polyhedron::from_constraints(2, &[hs(&[1, 0], 1), hs(&[-1, 0], 1)], &[]).unwrap();
        assert_eq!(p.lines().len(), 1);
        assert_eq!(p.dim(), 2);
        assert!(!p.is_bounded());
    }
}
