//! Tropical cells `F_σ`, the amoebas `A`, `A⁽ⁱ⁾`, the bounded complex
//! `∇_ω` and the checks relating them to the transversal poset.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::polyhedron::Halfspace;
use crate::geometry::volume::volume;
use crate::geometry::{fmt_q, qvec, to_i64, Polyhedron, Polytope, QVec, Rational, Role};
use crate::homology::order_complex;
use crate::nef::Check;
use crate::sphere::Side;
use crate::subdivision::{lower_hull_cells, WeightFunction};

/// A lattice point configuration with heights and the full cell list of the
/// induced regular subdivision.
#[derive(Debug, Clone)]
pub struct LiftedSupport {
    pub points: Vec<Vec<i64>>,
    pub heights: Vec<Rational>,
    /// All cells, sorted by dimension then vertex list.
    pub cells: Vec<Vec<usize>>,
    pub cell_dims: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    role: Role,
}

impl LiftedSupport {
    /// Regular subdivision of the lattice points of `p` lifted by `w`.
    pub fn new(p: &Polytope, w: &WeightFunction) -> Result<Self> {
        let points = p.lattice_points();
        let heights: Vec<Rational> = points.iter().map(|m| w.value(m)).collect();
        Self::from_points(points, heights, p.role())
    }

    pub fn from_points(points: Vec<Vec<i64>>, heights: Vec<Rational>, role: Role) -> Result<Self> {
        let table: Vec<(Vec<i64>, Rational)> = points.iter().cloned().zip(heights.iter().cloned()).collect();
        let w = WeightFunction::from_table(&points, &table)?;
        let maximal = lower_hull_cells(&points, &w, role)?;
        let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for cell in &maximal {
            let pts: Vec<QVec> = cell.iter().map(|&i| qvec(&points[i])).collect();
            let poly = Polytope::hull(&pts, role)?;
            for face in poly.face_lattice().faces() {
                let mut vs: Vec<usize> = face
                    .vertices
                    .iter()
                    .map(|&k| cell[pts.iter().position(|p| p == &poly.vertices()[k]).expect("input point")])
                    .collect();
                vs.sort();
                seen.insert((face.dim, vs));
            }
        }
        let (cell_dims, cells): (Vec<usize>, Vec<Vec<usize>>) = seen.into_iter().unzip();
        let index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(LiftedSupport { points, heights, cells, cell_dims, index, role })
    }

    pub fn find(&self, vertices: &[usize]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn point_index(&self, p: &[i64]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    /// `F_τ`: where the affine functions `⟨m,·⟩ − w(m)` of the vertices of
    /// `τ` tie for the maximum over all lattice points.
    pub fn tropical_cell(&self, vertices: &[usize]) -> Result<Polyhedron> {
        let d = self.points[0].len();
        let m0 = vertices[0];
        let row = |m: usize| -> Halfspace {
            let normal: Vec<i64> = self.points[m].iter().zip(&self.points[m0]).map(|(a, b)| a - b).collect();
            Halfspace::new(qvec(&normal), &self.heights[m] - &self.heights[m0])
        };
        let eqs: Vec<Halfspace> = vertices[1..].iter().map(|&m| row(m)).collect();
        let ineqs: Vec<Halfspace> = (0..self.points.len()).filter(|m| !vertices.contains(m)).map(row).collect();
        Polyhedron::from_constraints(d, &ineqs, &eqs).ok_or(Error::NotLowerHullCell)
    }

    /// Cell of the subdivision whose lifted face is where the maximum is
    /// attained at `y`.
    pub fn cell_at(&self, y: &[Rational]) -> Option<usize> {
        let vals: Vec<Rational> = self
            .points
            .iter()
            .zip(&self.heights)
            .map(|(m, h)| crate::geometry::dot(&qvec(m), y) - h)
            .collect();
        let best = vals.iter().max()?;
        let arg: Vec<QVec> = (0..self.points.len()).filter(|&i| &vals[i] == best).map(|i| qvec(&self.points[i])).collect();
        let hull = Polytope::hull(&arg, self.role).ok()?;
        let mut vs: Vec<usize> =
            hull.vertices().iter().map(|v| self.point_index(&to_i64(v).expect("lattice point")).expect("known")).collect();
        vs.sort();
        self.find(&vs)
    }

    /// The amoeba: `F_τ` for every cell `τ` of positive dimension.
    pub fn amoeba(&self) -> Result<Vec<TropicalCell>> {
        (0..self.cells.len())
            .filter(|&c| self.cell_dims[c] >= 1)
            .map(|c| TropicalCell::new(self, c))
            .collect()
    }
}

/// `F_τ` together with the generating cell.
#[derive(Debug, Clone)]
pub struct TropicalCell {
    pub generator: Vec<usize>,
    pub generator_dim: usize,
    pub polyhedron: Polyhedron,
}

impl TropicalCell {
    pub fn new(support: &LiftedSupport, cell: usize) -> Result<Self> {
        let generator = support.cells[cell].clone();
        let polyhedron = support.tropical_cell(&generator)?;
        Ok(TropicalCell { generator, generator_dim: support.cell_dims[cell], polyhedron })
    }

    pub fn is_bounded(&self) -> bool {
        self.polyhedron.is_bounded()
    }

    pub fn dim(&self) -> usize {
        self.polyhedron.dim() as usize
    }
}

/// Generator form of a cell for export.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SceneCell {
    pub generator: Vec<Vec<i64>>,
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
    pub lines: Vec<Vec<String>>,
}

impl SceneCell {
    pub fn new(support: &LiftedSupport, cell: &TropicalCell) -> Self {
        let fmt = |v: &[Rational]| v.iter().map(fmt_q).collect::<Vec<_>>();
        let fmt_z = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        SceneCell {
            generator: cell.generator.iter().map(|&i| support.points[i].clone()).collect(),
            dim: cell.dim(),
            vertices: cell.polyhedron.vertices().iter().map(|v| fmt(v)).collect(),
            rays: cell.polyhedron.rays().iter().map(|v| fmt_z(v)).collect(),
            lines: cell.polyhedron.lines().iter().map(|v| fmt_z(v)).collect(),
        }
    }
}

/// `∇_ω` and the supports it was computed from.
#[derive(Debug, Clone)]
pub struct TropicalComplex {
    /// Subdivision of the whole of `∇∨` (the side's union hull).
    pub support: LiftedSupport,
    /// Subdivisions of the parts.
    pub parts: Vec<LiftedSupport>,
    /// `F_σ̄` for each transversal `σ`, by poset position.
    pub cells: Vec<Polytope>,
    pub f0: Polytope,
    pub checks: Vec<Check>,
}

impl TropicalComplex {
    /// Builds `∇_ω` for the side. With `full` the common refinement of the
    /// part amoebas is enumerated and compared.
    pub fn new(side: &Side, full: bool) -> Result<Self> {
        let nef = &side.nef;
        let w = &side.sub.weights;
        let support = LiftedSupport::new(nef.union_hull(), w)?;
        let parts: Vec<LiftedSupport> = nef.parts().iter().map(|p| LiftedSupport::new(p, w)).collect::<Result<_>>()?;
        let d = side.dim();
        let origin = support.point_index(&vec![0; d]).ok_or(Error::OriginNotInterior)?;
        let to_support = |pts: &[usize]| -> Vec<usize> {
            let mut v: Vec<usize> =
                pts.iter().map(|&p| support.point_index(&side.sub.points[p]).expect("same lattice points")).collect();
            v.sort();
            v
        };
        let mut checks = Vec::new();

        // the coned cells are cells of the lifted subdivision
        let mut cells = Vec::with_capacity(side.len());
        let mut unbounded = Vec::new();
        let mut dim_bad = Vec::new();
        for k in 0..side.len() {
            let mut gen = to_support(side.vertices(k));
            gen.push(origin);
            gen.sort();
            let f = support.tropical_cell(&gen)?;
            if !f.is_bounded() {
                unbounded.push(k);
                cells.push(Polytope::hull(f.vertices(), side.sub.role.dual())?);
                continue;
            }
            let poly = Polytope::hull(f.vertices(), side.sub.role.dual())?;
            if poly.dim() + side.cell_dim(k) + 1 != d {
                dim_bad.push(k);
            }
            cells.push(poly);
        }
        if !unbounded.is_empty() {
            return Err(Error::Falsified(format!(
                "tropical cell of transversal cell {:?} is unbounded",
                side.vertices(unbounded[0])
            )));
        }
        checks.push(Check::new(
            "transversal_cells_bounded",
            true,
            format!("{} bounded cells F_σ̄", cells.len()),
        ));
        checks.push(Check::new(
            "tropical_cell_dimensions",
            dim_bad.is_empty(),
            format!("dim F_σ̄ + dim σ̄ = {d} for all transversal σ"),
        ));

        let f0ineq = f0_constraints(&support);
        let f0 = Polytope::from_constraints(d, &f0ineq, &[], side.sub.role.dual())?.ok_or(Error::OriginNotInterior)?;
        checks.push(faces_of_f0(&f0, &cells));
        if side.r() == 1 {
            checks.push(boundary_of_f0(&f0, side));
        }
        checks.push(anti_isomorphism(side, &cells));
        checks.push(order_complex_check(side, &cells));
        checks.push(parts_restrict(side, &support, &parts));
        checks.push(mixed_subdivision(side, &support)?);
        let complex = TropicalComplex { support, parts, cells, f0, checks };
        if full {
            let c = complex.bounded_cells_check(side)?;
            let mut complex = complex;
            complex.checks.push(c);
            return Ok(complex);
        }
        Ok(complex)
    }

    /// Bounded cells of `⋂A⁽ⁱ⁾` against `{F_σ̄}`, with `F_σ̄ = ⋂F⁽ⁱ⁾_{σ̄⁽ⁱ⁾}`.
    pub fn bounded_cells_check(&self, side: &Side) -> Result<Check> {
        let name = "nabla_equals_bounded_refinement";
        let amoebas: Vec<Vec<TropicalCell>> = self.parts.iter().map(|p| p.amoeba()).collect::<Result<_>>()?;
        let mut found: BTreeSet<Vec<QVec>> = BTreeSet::new();
        let mut tuple = Vec::new();
        self.refine(&amoebas, 0, None, &mut tuple, &mut found);
        let expected: BTreeSet<Vec<QVec>> = self.cells.iter().map(|c| c.vertices().to_vec()).collect();
        if found != expected {
            return Ok(Check::new(
                name,
                false,
                format!("{} bounded refinement cells vs {} cells of ∇_ω", found.len(), expected.len()),
            ));
        }
        // cellwise: F_σ̄ = ⋂ F⁽ⁱ⁾ of the coned slices
        for k in 0..side.len() {
            let mut acc: Option<Polyhedron> = None;
            for (i, part) in self.parts.iter().enumerate() {
                let mut gen: Vec<usize> = side
                    .slice(k, i)
                    .iter()
                    .map(|&p| part.point_index(&side.sub.points[p]).expect("slice point lies in its part"))
                    .collect();
                let zero = part.point_index(&vec![0; side.dim()]).expect("parts contain the origin");
                gen.push(zero);
                gen.sort();
                gen.dedup();
                let f = part.tropical_cell(&gen)?;
                acc = Some(match acc {
                    None => f,
                    Some(a) => a.intersect(&f).ok_or(Error::NotLowerHullCell)?,
                });
            }
            let acc = acc.expect("r ≥ 1");
            if !acc.is_bounded() || acc.vertices() != self.cells[k].vertices() {
                return Ok(Check::new(name, false, format!("cellwise mismatch at {:?}", side.vertices(k))));
            }
        }
        Ok(Check::new(name, true, format!("{} bounded cells matched", found.len())))
    }

    fn refine(
        &self,
        amoebas: &[Vec<TropicalCell>],
        i: usize,
        acc: Option<&Polyhedron>,
        tuple: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<QVec>>,
    ) {
        if i == amoebas.len() {
            let p = acc.expect("r ≥ 1");
            if !p.is_bounded() {
                return;
            }
            let y = p.relative_interior_point();
            let own = amoebas.iter().zip(&self.parts).zip(tuple.iter()).all(|((cells, part), &t)| {
                part.cell_at(&y).is_some_and(|c| part.cells[c] == cells[t].generator)
            });
            if own {
                found.insert(p.vertices().to_vec());
            }
            return;
        }
        for (t, cell) in amoebas[i].iter().enumerate() {
            let next = match acc {
                None => Some(cell.polyhedron.clone()),
                Some(a) => a.intersect(&cell.polyhedron),
            };
            if let Some(next) = next {
                tuple.push(t);
                self.refine(amoebas, i + 1, Some(&next), tuple, found);
                tuple.pop();
            }
        }
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.dim()).max().map_or(0, |k| k + 1);
        let mut c = vec![0; top];
        for cell in &self.cells {
            c[cell.dim()] += 1;
        }
        c
    }
}

/// `F₀ = {y : ⟨m,y⟩ ≤ ω(m)}`.
fn f0_constraints(support: &LiftedSupport) -> Vec<Halfspace> {
    support
        .points
        .iter()
        .zip(&support.heights)
        .filter(|(m, _)| m.iter().any(|&x| x != 0))
        .map(|(m, h)| Halfspace::new(qvec(m), h.clone()))
        .collect()
}

fn face_indices(big: &Polytope, small: &Polytope) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = small.vertices().iter().map(|v| big.vertex_index(v)).collect::<Option<_>>()?;
    idx.sort();
    Some(idx)
}

fn faces_of_f0(f0: &Polytope, cells: &[Polytope]) -> Check {
    let lattice = f0.face_lattice();
    let ok = cells.iter().all(|c| face_indices(f0, c).is_some_and(|idx| lattice.is_face(&idx) && idx.len() < f0.vertices().len()));
    Check::new("cells_are_faces_of_f0", ok, "every F_σ̄ is a proper face of F₀".to_string())
}

/// For a single part the cells `F_σ̄` are exactly the proper faces of `F₀`.
fn boundary_of_f0(f0: &Polytope, side: &Side) -> Check {
    let proper = f0.face_lattice().len() - 1;
    Check::new(
        "support_equals_boundary_of_f0",
        proper == side.len(),
        format!("{proper} proper faces of F₀, {} cells of ∇_ω", side.len()),
    )
}

/// `σ ↦ F_σ̄` reverses inclusion and is a bijection onto the faces of each
/// cell.
fn anti_isomorphism(side: &Side, cells: &[Polytope]) -> Check {
    let name = "face_lattice_opposite_to_poset";
    let distinct: BTreeSet<&[QVec]> = cells.iter().map(|c| c.vertices()).collect();
    if distinct.len() != cells.len() {
        return Check::new(name, false, "two transversal cells share a tropical cell".to_string());
    }
    for k in 0..side.len() {
        let above: Vec<usize> = (0..side.len()).filter(|&j| side.is_face(k, j)).collect();
        let lattice = cells[k].face_lattice();
        if lattice.len() != above.len() {
            return Check::new(
                name,
                false,
                format!("{:?}: {} faces vs {} cells above", side.vertices(k), lattice.len(), above.len()),
            );
        }
        for &j in &above {
            if !face_indices(&cells[k], &cells[j]).is_some_and(|idx| lattice.is_face(&idx)) {
                return Check::new(name, false, format!("{:?} ≤ {:?} not reversed", side.vertices(k), side.vertices(j)));
            }
        }
    }
    Check::new(name, true, format!("{} cells", cells.len()))
}

/// The order complex of the cells of `∇_ω` under inclusion equals the order
/// complex of `P` through `F_σ̄ ↦ σ`.
fn order_complex_check(side: &Side, cells: &[Polytope]) -> Check {
    let n = side.len();
    // linear extension of inclusion of tropical cells: by dimension
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (cells[k].dim(), k));
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (i, &k) in order.iter().enumerate() {
            p[k] = i;
        }
        p
    };
    let below_f: Vec<Vec<u32>> = order
        .iter()
        .map(|&k| {
            let mut l: Vec<u32> = (0..n)
                .filter(|&j| j != k && is_subset_q(cells[j].vertices(), cells[k].vertices()))
                .map(|j| pos[j] as u32)
                .collect();
            l.sort_unstable();
            l
        })
        .collect();
    let tropical = order_complex(&below_f);
    let below_p: Vec<Vec<u32>> =
        (0..n).map(|k| side.faces[k].iter().copied().filter(|&j| j as usize != k).collect()).collect();
    let poset = order_complex(&below_p);
    // translate tropical simplices back to poset labels
    let relabel = |s: &Vec<u32>| -> Vec<u32> {
        let mut v: Vec<u32> = s.iter().map(|&i| order[i as usize] as u32).collect();
        v.sort_unstable();
        v
    };
    let a: BTreeSet<Vec<u32>> = (0..=tropical.dim().max(0) as usize).flat_map(|k| tropical.simplices(k).iter().map(relabel)).collect();
    let b: BTreeSet<Vec<u32>> = (0..=poset.dim().max(0) as usize).flat_map(|k| poset.simplices(k).iter().cloned()).collect();
    Check::new(
        "bsd_nabla_is_order_complex_of_poset",
        a == b,
        format!("{} simplices", a.len()),
    )
}

fn is_subset_q(a: &[QVec], b: &[QVec]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

/// The subdivision of each part induced by the weights consists of the cells
/// of `S ⋆ 0` lying in that part.
fn parts_restrict(side: &Side, support: &LiftedSupport, parts: &[LiftedSupport]) -> Check {
    for (i, part) in parts.iter().enumerate() {
        let poly = side.nef.part(i);
        let from_whole: BTreeSet<Vec<Vec<i64>>> = support
            .cells
            .iter()
            .filter(|c| c.iter().all(|&p| poly.contains(&qvec(&support.points[p]))))
            .map(|c| c.iter().map(|&p| support.points[p].clone()).collect())
            .collect();
        let own: BTreeSet<Vec<Vec<i64>>> =
            part.cells.iter().map(|c| c.iter().map(|&p| part.points[p].clone()).collect()).collect();
        if from_whole != own {
            return Check::new(
                "part_subdivisions_restrict",
                false,
                format!("part {}: {} own cells vs {} restricted", i + 1, own.len(), from_whole.len()),
            );
        }
    }
    Check::new("part_subdivisions_restrict", true, format!("{} parts", parts.len()))
}

/// The cells `Σᵢ σ⁽ⁱ⁾` over the maximal `σ ∈ S ⋆ 0` tile `Δ`.
fn mixed_subdivision(side: &Side, support: &LiftedSupport) -> Result<Check> {
    let name = "mixed_subdivision_tiles_sum";
    let d = side.dim();
    let nef = &side.nef;
    let mut tiles: Vec<Polytope> = Vec::new();
    for (c, &dim) in support.cells.iter().zip(&support.cell_dims) {
        if dim != d {
            continue;
        }
        let mut slices = Vec::with_capacity(nef.r());
        for i in 0..nef.r() {
            let pts: Vec<QVec> = c
                .iter()
                .map(|&p| qvec(&support.points[p]))
                .filter(|p| nef.part(i).contains(p))
                .collect();
            if pts.is_empty() {
                return Ok(Check::new(name, false, format!("maximal cell misses part {}", i + 1)));
            }
            slices.push(Polytope::hull(&pts, side.sub.role)?);
        }
        let refs: Vec<&Polytope> = slices.iter().collect();
        let tile = Polytope::minkowski_sum_all(&refs)?;
        if tile.is_full_dimensional() {
            tiles.push(tile);
        }
    }
    let total = tiles.iter().fold(Rational::from_integer(0.into()), |a, t| a + volume(t));
    if total != volume(nef.sum()) {
        return Ok(Check::new(name, false, format!("tile volumes {} vs vol Δ {}", fmt_q(&total), fmt_q(&volume(nef.sum())))));
    }
    for a in 0..tiles.len() {
        for b in a + 1..tiles.len() {
            if let Some(x) = tiles[a].intersect(&tiles[b]) {
                if x.is_full_dimensional() {
                    return Ok(Check::new(name, false, format!("tiles {a} and {b} overlap")));
                }
            }
        }
    }
    Ok(Check::new(name, true, format!("{} tiles, total volume {}", tiles.len(), fmt_q(&total))))
}
