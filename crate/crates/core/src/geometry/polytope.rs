//! Exact convex polytopes carried in vertex and facet representation.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use super::linalg::{affine_dim, nullspace, rank, rref};
use super::polyhedron::{Halfspace, Polyhedron};
use super::{add, dot, primitive, scale, sub, to_i64, zvec_to_q, QVec, Rational, Role};
use crate::error::{Error, Result};

/// A nonempty face, as a sorted list of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
}

/// All nonempty faces of a polytope, including the polytope itself, sorted
/// by dimension and then by vertex set.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<Face>,
    index: HashMap<Vec<usize>, usize>,
}

impl FaceLattice {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn find(&self, vertices: &[usize]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn is_face(&self, vertices: &[usize]) -> bool {
        self.index.contains_key(vertices)
    }

    pub fn of_dim(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    /// Faces of dimension one less that are contained in `face`.
    pub fn facets_of(&self, face: &Face) -> Vec<&Face> {
        if face.dim == 0 {
            return Vec::new();
        }
        self.faces
            .iter()
            .filter(|f| f.dim + 1 == face.dim && is_subset(&f.vertices, &face.vertices))
            .collect()
    }

    /// f-vector `(f_0, f_1, ..., f_dim)`.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }
}

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

pub fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Debug)]
pub struct Polytope {
    role: Role,
    ambient: usize,
    dim: usize,
    vertices: Vec<QVec>,
    equations: Vec<Halfspace>,
    facets: Vec<Halfspace>,
    incidence: Vec<Vec<usize>>,
    pivots: Vec<usize>,
    faces: OnceLock<FaceLattice>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            role: self.role,
            ambient: self.ambient,
            dim: self.dim,
            vertices: self.vertices.clone(),
            equations: self.equations.clone(),
            facets: self.facets.clone(),
            incidence: self.incidence.clone(),
            pivots: self.pivots.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.role == other.role && self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

/// Scales `(normal, rhs)` so the normal is a primitive integer vector.
fn normalize(normal: &[Rational], rhs: &Rational) -> Halfspace {
    let mut l = BigInt::one();
    for x in normal {
        l = l.lcm(x.denom());
    }
    let lq = Rational::from_integer(l);
    let ints: Vec<BigInt> = normal.iter().map(|x| (x * &lq).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let f = &lq / Rational::from_integer(g.clone());
    Halfspace::new(
        ints.iter().map(|x| Rational::from_integer(x / &g)).collect(),
        rhs * f,
    )
}

impl Polytope {
    /// Convex hull of a nonempty point set.
    pub fn hull(points: &[QVec], role: Role) -> Result<Polytope> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyPointSet);
        };
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::DimensionMismatch);
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let p0 = pts[0].clone();
        let diffs: Vec<QVec> = pts[1..].iter().map(|p| sub(p, &p0)).collect();
        let (dirs, pivots) = rref(&diffs, ambient);
        let k = pivots.len();

        // Affine hull equations in reduced form.
        let mut equations: Vec<Halfspace> = Vec::new();
        if k < ambient {
            let normals = nullspace(&dirs, ambient);
            let (red, _) = rref(&normals, ambient);
            for n in red {
                let rhs = dot(&n, &p0);
                equations.push(normalize(&n, &rhs));
            }
        }

        if k == 0 {
            return Ok(Polytope {
                role,
                ambient,
                dim: 0,
                vertices: pts,
                equations,
                facets: Vec::new(),
                incidence: Vec::new(),
                pivots,
                faces: OnceLock::new(),
            });
        }

        let proj: Vec<QVec> = pts.iter().map(|p| pivots.iter().map(|&j| p[j].clone()).collect()).collect();
        let rows: Vec<_> = proj
            .iter()
            .map(|y| {
                let mut r = Vec::with_capacity(k + 1);
                r.push(Rational::one());
                r.extend(y.iter().map(|x| -x));
                primitive(&r)
            })
            .collect();
        let gens = cone_generators(k + 1, &rows, &[]);
        debug_assert!(gens.lines.is_empty());

        let mut proj_facets: Vec<(QVec, Rational)> = Vec::new();
        for g in gens.rays {
            if g[1..].iter().all(|x| x.is_zero()) {
                continue;
            }
            let a = zvec_to_q(&g[1..]);
            let b = Rational::from_integer(g[0].clone());
            proj_facets.push((a, b));
        }

        // Vertices: points whose tight facet normals have full rank k.
        let mut vertices = Vec::new();
        for (p, y) in pts.iter().zip(&proj) {
            let tight: Vec<QVec> = proj_facets
                .iter()
                .filter(|(a, b)| &dot(a, y) == b)
                .map(|(a, _)| a.clone())
                .collect();
            if rank(&tight, k) == k {
                vertices.push(p.clone());
            }
        }

        let mut facets: Vec<Halfspace> = proj_facets
            .iter()
            .map(|(a, b)| {
                let mut full = vec![Rational::zero(); ambient];
                for (&j, x) in pivots.iter().zip(a) {
                    full[j] = x.clone();
                }
                normalize(&full, b)
            })
            .collect();
        facets.sort();
        facets.dedup();
        let incidence = facets
            .iter()
            .map(|h| (0..vertices.len()).filter(|&i| h.value(&vertices[i]) == h.rhs).collect())
            .collect();
        Ok(Polytope {
            role,
            ambient,
            dim: k,
            vertices,
            equations,
            facets,
            incidence,
            pivots,
            faces: OnceLock::new(),
        })
    }

    pub fn from_integer_points(points: &[Vec<i64>], role: Role) -> Result<Polytope> {
        let pts: Vec<QVec> = points.iter().map(|p| super::qvec(p)).collect();
        Polytope::hull(&pts, role)
    }

    /// The bounded polyhedron `{x : ineqs ≤, eqs =}`; `Ok(None)` when empty.
    pub fn from_constraints(
        ambient: usize,
        ineqs: &[Halfspace],
        eqs: &[Halfspace],
        role: Role,
    ) -> Result<Option<Polytope>> {
        match Polyhedron::from_constraints(ambient, ineqs, eqs) {
            None => Ok(None),
            Some(p) if !p.is_bounded() => Err(Error::Unbounded),
            Some(p) => Polytope::hull(p.vertices(), role).map(Some),
        }
    }

    /// Coordinates on which projection is injective on the affine hull.
    pub fn affine_coordinates(&self) -> &[usize] {
        &self.pivots
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn integer_vertices(&self) -> Option<Vec<Vec<i64>>> {
        self.vertices.iter().map(|v| to_i64(v)).collect()
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.equations
    }

    /// Vertex indices on each facet, parallel to [`Polytope::facets`].
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn is_lattice_polytope(&self) -> bool {
        self.vertices.iter().all(|v| super::is_integral(v))
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if self.dim == 0 {
            return self.vertices[0].as_slice() == x;
        }
        self.equations.iter().all(|h| h.value(x) == h.rhs) && self.facets.iter().all(|h| h.value(x) <= h.rhs)
    }

    pub fn contains_in_relative_interior(&self, x: &[Rational]) -> bool {
        if self.dim == 0 {
            return self.vertices[0].as_slice() == x;
        }
        self.equations.iter().all(|h| h.value(x) == h.rhs) && self.facets.iter().all(|h| h.value(x) < h.rhs)
    }

    pub fn contains_origin_in_interior(&self) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|h| h.rhs.is_positive())
    }

    /// Halfspace description that also works for points: the affine hull
    /// equations and the facet inequalities.
    pub fn constraints(&self) -> (Vec<Halfspace>, Vec<Halfspace>) {
        if self.dim == 0 {
            // x = v
            let eqs = (0..self.ambient)
                .map(|j| {
                    let mut e = vec![Rational::zero(); self.ambient];
                    e[j] = Rational::one();
                    Halfspace::new(e, self.vertices[0][j].clone())
                })
                .collect();
            return (Vec::new(), eqs);
        }
        (self.facets.clone(), self.equations.clone())
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        self.faces.get_or_init(|| self.build_face_lattice())
    }

    fn build_face_lattice(&self) -> FaceLattice {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(all.clone());
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for f in &self.incidence {
            if seen.insert(f.clone()) {
                queue.push_back(f.clone());
            }
        }
        while let Some(f) = queue.pop_front() {
            for g in &self.incidence {
                let h = intersect_sorted(&f, g);
                if !h.is_empty() && seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
        let proj: Vec<QVec> = self
            .vertices
            .iter()
            .map(|p| self.pivots.iter().map(|&j| p[j].clone()).collect())
            .collect();
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|vs| {
                let pts: Vec<QVec> = vs.iter().map(|&i| proj[i].clone()).collect();
                let dim = affine_dim(&pts) as usize;
                Face { vertices: vs, dim }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        let index = faces.iter().enumerate().map(|(i, f)| (f.vertices.clone(), i)).collect();
        FaceLattice { faces, index }
    }

    /// Face as a polytope in its own right.
    pub fn face_polytope(&self, face: &Face) -> Polytope {
        let pts: Vec<QVec> = face.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
        Polytope::hull(&pts, self.role).expect("faces are nonempty")
    }

    /// The polar `{y : ⟨x,y⟩ ≤ 1 ∀x ∈ P}`.
    pub fn polar_dual(&self) -> Result<Polytope> {
        if !self.contains_origin_in_interior() {
            return Err(Error::PolarUndefined);
        }
        let pts: Vec<QVec> = self.facets.iter().map(|h| scale(&h.rhs.recip(), &h.normal)).collect();
        Polytope::hull(&pts, self.role.dual())
    }

    /// Lattice polytope whose polar is again a lattice polytope.
    pub fn is_reflexive(&self) -> Result<bool> {
        if !self.is_lattice_polytope() {
            return Ok(false);
        }
        Ok(self.polar_dual()?.is_lattice_polytope())
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.role != other.role {
            return Err(Error::RoleMismatch);
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch);
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(add(a, b));
            }
        }
        Polytope::hull(&pts, self.role)
    }

    pub fn minkowski_sum_all(parts: &[&Polytope]) -> Result<Polytope> {
        let (first, rest) = parts.split_first().ok_or(Error::EmptyPointSet)?;
        let mut acc = (*first).clone();
        for p in rest {
            acc = acc.minkowski_sum(p)?;
        }
        Ok(acc)
    }

    pub fn convex_union(parts: &[&Polytope]) -> Result<Polytope> {
        let role = parts.first().ok_or(Error::EmptyPointSet)?.role;
        if parts.iter().any(|p| p.role != role) {
            return Err(Error::RoleMismatch);
        }
        let pts: Vec<QVec> = parts.iter().flat_map(|p| p.vertices.iter().cloned()).collect();
        Polytope::hull(&pts, role)
    }

    pub fn scaled(&self, c: &Rational) -> Polytope {
        let pts: Vec<QVec> = self.vertices.iter().map(|v| scale(c, v)).collect();
        Polytope::hull(&pts, self.role).expect("nonempty")
    }

    pub fn intersect(&self, other: &Polytope) -> Option<Polytope> {
        let (mut ineqs, mut eqs) = self.constraints();
        let (i2, e2) = other.constraints();
        ineqs.extend(i2);
        eqs.extend(e2);
        Polytope::from_constraints(self.ambient, &ineqs, &eqs, self.role).expect("bounded")
    }

    /// `max ⟨v, x⟩` over the polytope.
    pub fn support_value(&self, x: &[Rational]) -> Rational {
        self.vertices
            .iter()
            .map(|v| dot(v, x))
            .max()
            .expect("nonempty polytope")
    }

    /// All lattice points, in lexicographic order, by bounding-box scan.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let n = self.ambient;
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for v in &self.vertices {
            for j in 0..n {
                let f = i64::try_from(v[j].floor().to_integer()).expect("coordinates fit in i64");
                let c = i64::try_from(v[j].ceil().to_integer()).expect("coordinates fit in i64");
                lo[j] = lo[j].min(f);
                hi[j] = hi[j].max(c);
            }
        }
        let (ineqs, eqs) = self.constraints();
        let to_int = |h: &Halfspace| -> (Vec<i128>, Rational) {
            let normal = h
                .normal
                .iter()
                .map(|x| i128::try_from(x.to_integer()).expect("integral normal"))
                .collect();
            (normal, h.rhs.clone())
        };
        // normals are primitive integer vectors except for point constraints,
        // which are unit vectors: both integral.
        let ineqs: Vec<(Vec<i128>, i128)> = ineqs
            .iter()
            .map(|h| {
                let (a, b) = to_int(h);
                (a, i128::try_from(b.floor().to_integer()).expect("fits"))
            })
            .collect();
        let mut int_eqs = Vec::new();
        for h in &eqs {
            let (a, b) = to_int(h);
            if !b.is_integer() {
                return Vec::new();
            }
            int_eqs.push((a, i128::try_from(b.to_integer()).expect("fits")));
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let ok = int_eqs
                .iter()
                .all(|(a, b)| a.iter().zip(&cur).map(|(x, &y)| x * y as i128).sum::<i128>() == *b)
                && ineqs
                    .iter()
                    .all(|(a, b)| a.iter().zip(&cur).map(|(x, &y)| x * y as i128).sum::<i128>() <= *b);
            if ok {
                out.push(cur.clone());
            }
            let mut j = n;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    for c in cur.iter_mut().skip(j + 1) {
                        *c = 0;
                    }
                    for (c, l) in cur.iter_mut().zip(&lo).skip(j + 1) {
                        *c = *l;
                    }
                    break;
                }
            }
        }
    }

    /// Index of a vertex equal to `x`.
    pub fn vertex_index(&self, x: &[Rational]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).ok()
    }
}
