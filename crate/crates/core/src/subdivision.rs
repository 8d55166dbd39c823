//! Regular central subdivisions `S ⋆ 0` from a lifting of the lattice points,
//! and the induced subdivision `S` of the boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::polytope::is_subset;
use crate::geometry::volume::volume;
use crate::geometry::{fmt_q, qvec, Polytope, QVec, Rational, Role};

/// Values on the lattice points of a polytope, normalized to vanish at `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    values: BTreeMap<Vec<i64>, Rational>,
}

impl WeightFunction {
    /// `𝟙` on the nonzero lattice points and `0` at the origin.
    pub fn all_ones(points: &[Vec<i64>]) -> Self {
        let values = points
            .iter()
            .map(|p| {
                let v = if p.iter().all(|&x| x == 0) { 0 } else { 1 };
                (p.clone(), Rational::from_integer(v.into()))
            })
            .collect();
        WeightFunction { values }
    }

    /// Explicit table; must cover `points` exactly. A nonzero value at the
    /// origin is removed by subtracting it everywhere.
    pub fn from_table(points: &[Vec<i64>], table: &[(Vec<i64>, Rational)]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (p, v) in table {
            if values.insert(p.clone(), v.clone()).is_some() {
                return Err(Error::Weight(format!("duplicate point {p:?}")));
            }
        }
        for p in points {
            if !values.contains_key(p) {
                return Err(Error::Weight(format!("no value at lattice point {p:?}")));
            }
        }
        if values.len() != points.len() {
            let extra = values.keys().find(|k| !points.contains(k)).cloned().unwrap_or_default();
            return Err(Error::Weight(format!("point {extra:?} is not a lattice point of the polytope")));
        }
        let d = points.first().map_or(0, |p| p.len());
        let c = values.get(&vec![0; d]).cloned().unwrap_or_else(Rational::zero);
        if !c.is_zero() {
            for v in values.values_mut() {
                *v -= &c;
            }
        }
        Ok(WeightFunction { values })
    }

    pub fn get(&self, p: &[i64]) -> Option<&Rational> {
        self.values.get(p)
    }

    pub fn value(&self, p: &[i64]) -> Rational {
        self.values.get(p).cloned().expect("weight defined on every lattice point")
    }

    pub fn is_all_ones(&self) -> bool {
        self.values
            .iter()
            .all(|(p, v)| *v == Rational::from_integer(if p.iter().all(|&x| x == 0) { 0 } else { 1 }.into()))
    }

    pub fn table(&self) -> Vec<(Vec<i64>, String)> {
        self.values.iter().map(|(p, v)| (p.clone(), fmt_q(v))).collect()
    }
}

/// A cell given by its vertices, as indices into a global point table.
#[derive(Debug, Clone)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub dim: usize,
    pub polytope: Polytope,
}

/// Maximal cells of the lower hull of `{(m, w(m))}` over the lattice points
/// of `p`, as sorted index lists into `points`.
pub fn lower_hull_cells(points: &[Vec<i64>], weights: &WeightFunction, role: Role) -> Result<Vec<Vec<usize>>> {
    let d = points.first().map_or(0, |p| p.len());
    let lifted: Vec<QVec> = points
        .iter()
        .map(|p| {
            let mut v = qvec(p);
            v.push(weights.value(p));
            v
        })
        .collect();
    let base = Polytope::from_integer_points(points, role)?;
    let hull = Polytope::hull(&lifted, role)?;
    let lookup: HashMap<&[Rational], usize> = lifted.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let to_points = |idx: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = idx.iter().map(|&k| lookup[hull.vertices()[k].as_slice()]).collect();
        out.sort();
        out
    };
    if hull.dim() == base.dim() {
        // affine lifting: a single cell
        let all: Vec<usize> = (0..hull.vertices().len()).collect();
        return Ok(vec![to_points(&all)]);
    }
    let mut cells: Vec<Vec<usize>> = hull
        .facets()
        .iter()
        .zip(hull.incidence())
        .filter(|(h, _)| h.normal[d].is_negative())
        .map(|(_, inc)| to_points(inc))
        .collect();
    cells.sort();
    Ok(cells)
}

/// The regular subdivision `S ⋆ 0` of a reflexive polytope together with the
/// induced boundary subdivision `S`.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub role: Role,
    pub dim: usize,
    /// Lattice points of the polytope, sorted.
    pub points: Vec<Vec<i64>>,
    pub origin: usize,
    pub weights: WeightFunction,
    /// Maximal cells of `S ⋆ 0`.
    pub maximal: Vec<Vec<usize>>,
    /// Cells of `S`, sorted by dimension then vertex list.
    pub cells: Vec<Cell>,
    index: HashMap<Vec<usize>, usize>,
}

/// True iff the origin is a vertex of every maximal cell and the opposite
/// face of every maximal cell lies in the boundary.
pub fn is_central(polytope: &Polytope, points: &[Vec<i64>], maximal: &[Vec<usize>]) -> bool {
    let Some(origin) = points.iter().position(|p| p.iter().all(|&x| x == 0)) else {
        return false;
    };
    maximal.iter().all(|cell| {
        if !cell.contains(&origin) {
            return false;
        }
        let rest: Vec<QVec> = cell.iter().filter(|&&i| i != origin).map(|&i| qvec(&points[i])).collect();
        let cone_poly = match Polytope::hull(
            &cell.iter().map(|&i| qvec(&points[i])).collect::<Vec<_>>(),
            polytope.role(),
        ) {
            Ok(p) => p,
            Err(_) => return false,
        };
        let origin_q = qvec(&points[origin]);
        if cone_poly.vertex_index(&origin_q).is_none() {
            return false;
        }
        polytope.facets().iter().any(|h| rest.iter().all(|v| h.value(v) == h.rhs))
    })
}

impl Subdivision {
    /// Builds `S ⋆ 0` and `S`; fails with "subdivision not central" otherwise.
    pub fn new(polytope: &Polytope, weights: WeightFunction) -> Result<Self> {
        let points = polytope.lattice_points();
        for p in &points {
            if weights.get(p).is_none() {
                return Err(Error::Weight(format!("no value at lattice point {p:?}")));
            }
        }
        let maximal = lower_hull_cells(&points, &weights, polytope.role())?;
        if !is_central(polytope, &points, &maximal) {
            return Err(Error::NotCentral);
        }
        Self::boundary_subdivision(polytope, points, weights, maximal)
    }

    fn boundary_subdivision(
        polytope: &Polytope,
        points: Vec<Vec<i64>>,
        weights: WeightFunction,
        maximal: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let origin = points.iter().position(|p| p.iter().all(|&x| x == 0)).ok_or(Error::NotCentral)?;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cell in &maximal {
            let rest: Vec<usize> = cell.iter().copied().filter(|&i| i != origin).collect();
            let pts: Vec<QVec> = rest.iter().map(|&i| qvec(&points[i])).collect();
            let top = Polytope::hull(&pts, polytope.role())?;
            for face in top.face_lattice().faces() {
                let mut vs: Vec<usize> = face.vertices.iter().map(|&k| {
                    let v = &top.vertices()[k];
                    rest[pts.iter().position(|p| p == v).expect("vertex from input")]
                }).collect();
                vs.sort();
                seen.insert(vs);
            }
        }
        let mut cells: Vec<Cell> = seen
            .into_iter()
            .map(|vs| {
                let pts: Vec<QVec> = vs.iter().map(|&i| qvec(&points[i])).collect();
                let polytope = Polytope::hull(&pts, polytope.role()).expect("nonempty");
                Cell { dim: polytope.dim(), vertices: vs, polytope }
            })
            .collect();
        cells.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        let index = cells.iter().enumerate().map(|(i, c)| (c.vertices.clone(), i)).collect();
        Ok(Subdivision {
            role: polytope.role(),
            dim: polytope.ambient_dim(),
            points,
            origin,
            weights,
            maximal,
            cells,
            index,
        })
    }

    pub fn find(&self, vertices: &[usize]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i]
    }

    pub fn point_index(&self, p: &[i64]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    pub fn weight(&self, i: usize) -> Rational {
        self.weights.value(&self.points[i])
    }

    /// `a` is a face of `b`.
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        is_subset(&self.cells[a].vertices, &self.cells[b].vertices)
    }

    /// Maximal cells of `S` (those of dimension `d − 1`).
    pub fn maximal_boundary_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim + 1 == self.dim).collect()
    }

    /// Vertex list of the coned cell `σ ⋆ 0`.
    pub fn coned(&self, cell: usize) -> Vec<usize> {
        let mut v = self.cells[cell].vertices.clone();
        v.push(self.origin);
        v.sort();
        v
    }

    /// All cells of `S ⋆ 0` as vertex lists: `{0}`, every `σ` and every `σ ⋆ 0`.
    pub fn coned_complex(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![self.origin]];
        for i in 0..self.cells.len() {
            out.push(self.cells[i].vertices.clone());
            out.push(self.coned(i));
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        for cell in &self.cells {
            c[cell.dim] += 1;
        }
        c
    }

    /// The maximal cones have total volume `vol P` and every maximal `S`-cell
    /// lies in a facet of `P`; together these say the `S`-cells cover `∂P`.
    pub fn covers_boundary(&self, polytope: &Polytope) -> bool {
        let total = self.maximal.iter().fold(Rational::zero(), |acc, cell| {
            let pts: Vec<QVec> = cell.iter().map(|&i| qvec(&self.points[i])).collect();
            acc + volume(&Polytope::hull(&pts, self.role).expect("nonempty"))
        });
        let in_facets = self.maximal_boundary_cells().iter().all(|&c| {
            let vs: Vec<QVec> = self.cells[c].vertices.iter().map(|&i| qvec(&self.points[i])).collect();
            polytope.facets().iter().any(|h| vs.iter().all(|v| h.value(v) == h.rhs))
        });
        total == volume(polytope) && in_facets
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[Vec<i64>]) -> Polytope {
        Polytope::from_integer_points(pts, Role::M).unwrap()
    }

    #[test]
    fn segment_splits_at_origin() {
        let p = poly(&[vec![-1], vec![1]]);
        let pts = p.lattice_points();
        let s = Subdivision::new(&p, WeightFunction::all_ones(&pts)).unwrap();
        assert_eq!(s.maximal, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(s.cells.len(), 2);
        assert!(s.cells.iter().all(|c| c.dim == 0));
    }

    #[test]
    fn triangle_all_ones() {
        let p = poly(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
        let pts = p.lattice_points();
        let s = Subdivision::new(&p, WeightFunction::all_ones(&pts)).unwrap();
        assert_eq!(s.maximal.len(), 3);
        assert_eq!(s.counts_by_dim(), vec![3, 3]);
        assert!(s.covers_boundary(&p));
    }

    #[test]
    fn negative_corner_is_not_central() {
        let p = poly(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]);
        let pts = p.lattice_points();
        let table: Vec<(Vec<i64>, Rational)> = pts
            .iter()
            .map(|q| {
                let v = if q.iter().all(|&x| x == 0) {
                    0
                } else if q == &vec![1, 1] {
                    -1
                } else {
                    1
                };
                (q.clone(), Rational::from_integer(v.into()))
            })
            .collect();
        let w = WeightFunction::from_table(&pts, &table).unwrap();
        assert!(matches!(Subdivision::new(&p, w), Err(Error::NotCentral)));
    }
}
