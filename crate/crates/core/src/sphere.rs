//! Slices of boundary cells, transversal posets, the Minkowski complexes
//! `S_Δ`, `T_∇`, adjoint pairs and the sphere complex `Σ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::geometry::lattice::{saturated_perp_basis, smith_normal_form, IntegerMatrix};
use crate::geometry::linalg::affine_dim;
use crate::geometry::polyhedron::Halfspace;
use crate::geometry::polytope::is_subset;
use crate::geometry::volume::relative_volume;
use crate::geometry::{q, qvec, Polytope, QVec, Rational};
use crate::homology::{homology, order_complex, Homology, SimplicialComplex};
use crate::nef::{Check, NefPartition};
use crate::subdivision::{Subdivision, WeightFunction};

/// Counts and failures of the slice lemma over all cells of one side.
#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct LemmaReport {
    pub cells: usize,
    pub face_checks: usize,
    pub distance_checks: usize,
    pub minimal_checks: usize,
    pub failures: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One side of the construction: a nef-partition, its boundary subdivision
/// and everything derived from slicing cells by the parts.
#[derive(Debug, Clone)]
pub struct Side {
    pub nef: NefPartition,
    pub sub: Subdivision,
    /// Parts containing each lattice point.
    pub point_parts: Vec<Vec<usize>>,
    /// For every cell of the subdivision, the vertex list of each slice.
    pub slices: Vec<Vec<Vec<usize>>>,
    /// Cells in the transversal poset, in subdivision order.
    pub poset: Vec<usize>,
    position: HashMap<usize, usize>,
    /// For each poset element, the poset elements that are its faces
    /// (itself included), ascending.
    pub faces: Vec<Vec<u32>>,
    /// Minimal poset elements.
    pub minimal: Vec<usize>,
    /// `σ_Δ` for each poset element.
    pub mink: Vec<Polytope>,
    pub lemma: LemmaReport,
    pub checks: Vec<Check>,
}

impl Side {
    pub fn new(nef: NefPartition, weights: WeightFunction) -> Result<Self> {
        let sub = Subdivision::new(nef.union_hull(), weights)?;
        let r = nef.r();
        let point_parts: Vec<Vec<usize>> = sub.points.iter().map(|p| nef.parts_containing(&qvec(p))).collect();
        let mut lemma = LemmaReport::default();
        let mut slices = Vec::with_capacity(sub.cells.len());
        for ci in 0..sub.cells.len() {
            let s = slice_cell(&nef, &sub, &point_parts, ci);
            lemma.cells += 1;
            check_slices(&nef, &sub, ci, &s, &mut lemma);
            slices.push(s);
        }
        let poset: Vec<usize> = (0..sub.cells.len()).filter(|&c| slices[c].iter().all(|s| !s.is_empty())).collect();
        let position: HashMap<usize, usize> = poset.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let faces: Vec<Vec<u32>> = poset
            .iter()
            .map(|&c| {
                poset
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| is_subset(&sub.cells[b].vertices, &sub.cells[c].vertices))
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        let minimal: Vec<usize> = (0..poset.len()).filter(|&i| faces[i].len() == 1).collect();
        for &m in &minimal {
            lemma.minimal_checks += 1;
            let c = poset[m];
            if let Err(e) = check_unimodular(&sub, &slices[c], r) {
                lemma.failures.push(format!("minimal cell {:?}: {e}", sub.cells[c].vertices));
            }
        }
        let mut side = Side {
            nef,
            sub,
            point_parts,
            slices,
            poset,
            position,
            faces,
            minimal,
            mink: Vec::new(),
            lemma,
            checks: Vec::new(),
        };
        side.checks.push(side.check_upper_ideal());
        let (mink, check) = side.minkowski_cells()?;
        side.mink = mink;
        side.checks.push(check);
        side.checks.push(side.check_face_lattice_isomorphism());
        side.checks.push(side.check_support()?);
        Ok(side)
    }

    pub fn r(&self) -> usize {
        self.nef.r()
    }

    pub fn dim(&self) -> usize {
        self.nef.dim()
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Poset position of a subdivision cell, if transversal.
    pub fn position(&self, cell: usize) -> Option<usize> {
        self.position.get(&cell).copied()
    }

    /// Subdivision cell of a poset element.
    pub fn cell(&self, k: usize) -> usize {
        self.poset[k]
    }

    pub fn vertices(&self, k: usize) -> &[usize] {
        &self.sub.cells[self.poset[k]].vertices
    }

    /// Slice `σ⁽ⁱ⁾` of poset element `k` as point indices.
    pub fn slice(&self, k: usize, i: usize) -> &[usize] {
        &self.slices[self.poset[k]][i]
    }

    /// Integer points of slice `i` of poset element `k`.
    pub fn slice_points(&self, k: usize, i: usize) -> Vec<Vec<i64>> {
        self.slice(k, i).iter().map(|&p| self.sub.points[p].clone()).collect()
    }

    /// Dimension of every slice of poset element `k`.
    pub fn slice_dims(&self, k: usize) -> Vec<usize> {
        (0..self.r())
            .map(|i| {
                let pts: Vec<QVec> = self.slice(k, i).iter().map(|&p| qvec(&self.sub.points[p])).collect();
                affine_dim(&pts) as usize
            })
            .collect()
    }

    pub fn is_face(&self, a: usize, b: usize) -> bool {
        self.faces[b].binary_search(&(a as u32)).is_ok()
    }

    pub fn cell_dim(&self, k: usize) -> usize {
        self.sub.cells[self.poset[k]].dim
    }

    /// Subdivision cell equal to the convex hull of the given points, if any.
    pub fn subdivision_cell_of_hull(&self, pts: &[usize]) -> Option<usize> {
        let q: Vec<QVec> = pts.iter().map(|&p| qvec(&self.sub.points[p])).collect();
        let hull = Polytope::hull(&q, self.sub.role).ok()?;
        let mut verts: Vec<usize> = hull
            .vertices()
            .iter()
            .map(|v| self.sub.point_index(&crate::geometry::to_i64(v).expect("lattice point")).expect("lattice point"))
            .collect();
        verts.sort();
        self.sub.find(&verts)
    }

    fn check_upper_ideal(&self) -> Check {
        let mut bad = None;
        for (c, cell) in self.sub.cells.iter().enumerate() {
            if self.position.contains_key(&c) {
                continue;
            }
            if let Some(&p) = self.poset.iter().find(|&&p| is_subset(&self.sub.cells[p].vertices, &cell.vertices)) {
                bad = Some((p, c));
                break;
            }
        }
        match bad {
            None => Check::new("transversal_upper_ideal", true, format!("{} transversal cells", self.poset.len())),
            Some((p, c)) => Check::new(
                "transversal_upper_ideal",
                false,
                format!(
                    "cell {:?} contains transversal {:?} but is not transversal",
                    self.sub.cells[c].vertices, self.sub.cells[p].vertices
                ),
            ),
        }
    }

    /// `σ_Δ = Σσ⁽ⁱ⁾` and the cross-check `rσ ∩ Δ`, plus emptiness of
    /// `rσ ∩ Δ` for non-transversal cells.
    fn minkowski_cells(&self) -> Result<(Vec<Polytope>, Check)> {
        let r = self.r();
        let rq = q(r as i64);
        let total = self.nef.sum();
        let mut out = Vec::with_capacity(self.poset.len());
        let mut failures = Vec::new();
        for (c, cell) in self.sub.cells.iter().enumerate() {
            let scaled = cell.polytope.scaled(&rq);
            let cut = scaled.intersect(total);
            match self.position.get(&c) {
                Some(_) => {
                    let parts: Vec<Polytope> = self.slices[c]
                        .iter()
                        .map(|s| {
                            let pts: Vec<QVec> = s.iter().map(|&p| qvec(&self.sub.points[p])).collect();
                            Polytope::hull(&pts, self.sub.role)
                        })
                        .collect::<Result<_>>()?;
                    let refs: Vec<&Polytope> = parts.iter().collect();
                    let sum = Polytope::minkowski_sum_all(&refs)?;
                    if cut.as_ref() != Some(&sum) {
                        failures.push(format!("{:?}", cell.vertices));
                    }
                    if sum.dim() + r != cell.dim + 1 {
                        failures.push(format!("{:?}: dimension", cell.vertices));
                    }
                    out.push(sum);
                }
                None => {
                    if cut.is_some() {
                        failures.push(format!("{:?}: non-transversal cell meets Δ", cell.vertices));
                    }
                }
            }
        }
        let check = Check::new(
            "minkowski_cell_equals_scaled_intersection",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{} cells", self.sub.cells.len())
            } else {
                format!("mismatch at {}", failures.join(", "))
            },
        );
        Ok((out, check))
    }

    /// `σ ↦ σ_Δ` is injective and order-preserving onto the faces of `S_Δ`.
    fn check_face_lattice_isomorphism(&self) -> Check {
        let mut seen: HashMap<&[QVec], usize> = HashMap::new();
        for (k, m) in self.mink.iter().enumerate() {
            if let Some(j) = seen.insert(m.vertices(), k) {
                return Check::new(
                    "face_lattice_isomorphic_to_poset",
                    false,
                    format!("elements {j} and {k} have the same Minkowski cell"),
                );
            }
        }
        for (k, m) in self.mink.iter().enumerate() {
            let lattice = m.face_lattice();
            if lattice.len() != self.faces[k].len() {
                return Check::new(
                    "face_lattice_isomorphic_to_poset",
                    false,
                    format!("element {k}: {} faces vs {} poset elements below", lattice.len(), self.faces[k].len()),
                );
            }
            for &j in &self.faces[k] {
                let f = &self.mink[j as usize];
                let idx: Option<Vec<usize>> = f.vertices().iter().map(|v| m.vertex_index(v)).collect();
                let ok = idx.is_some_and(|idx| {
                    let mut idx = idx;
                    idx.sort();
                    lattice.is_face(&idx)
                });
                if !ok {
                    return Check::new(
                        "face_lattice_isomorphic_to_poset",
                        false,
                        format!("element {j} is below {k} but its cell is not a face"),
                    );
                }
            }
        }
        Check::new("face_lattice_isomorphic_to_poset", true, format!("{} cells", self.mink.len()))
    }

    /// `|S_Δ| = Δ ∩ ∂(r∇∨)`: every cell lies in `Δ` and in a scaled facet, and
    /// for each facet `F` the top cells inside `rF` fill `Δ ∩ rF` by volume.
    fn check_support(&self) -> Result<Check> {
        let r = self.r();
        let rq = q(r as i64);
        let hull = self.nef.union_hull();
        let total = self.nef.sum();
        let d = self.dim();
        let name = "support_equals_boundary_slice";
        for (k, m) in self.mink.iter().enumerate() {
            let on_facet = hull.facets().iter().any(|h| m.vertices().iter().all(|v| h.value(v) == &rq * &h.rhs));
            if !on_facet || !m.vertices().iter().all(|v| total.contains(v)) {
                return Ok(Check::new(name, false, format!("cell {k} leaves Δ ∩ ∂(r∇∨)")));
            }
        }
        let (dineq, deq) = total.constraints();
        for h in hull.facets() {
            let scaled_rhs = &rq * &h.rhs;
            let mut ineqs: Vec<Halfspace> = hull.facets().iter().map(|g| Halfspace::new(g.normal.clone(), &rq * &g.rhs)).collect();
            ineqs.extend(dineq.iter().cloned());
            let mut eqs = deq.clone();
            eqs.push(Halfspace::new(h.normal.clone(), scaled_rhs.clone()));
            let region = Polytope::from_constraints(d, &ineqs, &eqs, self.sub.role)?;
            let inside: Vec<usize> = (0..self.mink.len())
                .filter(|&k| self.mink[k].vertices().iter().all(|v| h.value(v) == scaled_rhs))
                .collect();
            match region {
                None => {
                    if !inside.is_empty() {
                        return Ok(Check::new(name, false, "cells in an empty facet slice".to_string()));
                    }
                }
                Some(region) => {
                    let k = region.dim();
                    let filled = inside
                        .iter()
                        .filter(|&&c| self.mink[c].dim() == k)
                        .fold(Rational::zero(), |acc, &c| acc + relative_volume(&self.mink[c], &region));
                    if filled != relative_volume(&region, &region) {
                        return Ok(Check::new(name, false, format!("facet {:?}: volume mismatch", h.normal)));
                    }
                }
            }
        }
        Ok(Check::new(name, true, format!("{} facets", hull.facets().len())))
    }
}

/// Slices `σ ∩ Δ⁽ⁱ⁾` of one cell: the cell's vertices lying in each part.
/// The exact intersection is compared in [`check_slices`].
fn slice_cell(nef: &NefPartition, sub: &Subdivision, point_parts: &[Vec<usize>], ci: usize) -> Vec<Vec<usize>> {
    let cell = &sub.cells[ci];
    (0..nef.r())
        .map(|i| cell.vertices.iter().copied().filter(|&v| point_parts[v].contains(&i)).collect())
        .collect()
}

fn check_slices(nef: &NefPartition, sub: &Subdivision, ci: usize, slices: &[Vec<usize>], report: &mut LemmaReport) {
    let cell = &sub.cells[ci];
    let r = nef.r();
    let local = |pts: &[usize]| -> Vec<usize> {
        pts.iter().map(|p| cell.vertices.binary_search(p).expect("cell vertex")).collect()
    };
    for (i, s) in slices.iter().enumerate() {
        let exact = cell.polytope.intersect(nef.part(i));
        let expected: Vec<QVec> = s.iter().map(|&p| qvec(&sub.points[p])).collect();
        let ok = match &exact {
            None => s.is_empty(),
            Some(p) => p.vertices() == expected.as_slice(),
        };
        if !ok {
            report.failures.push(format!("cell {:?}: slice {} is not spanned by cell vertices", cell.vertices, i + 1));
        }
    }
    let lattice = cell.polytope.face_lattice();
    let full = (1usize << r) - 1;
    let union = |mask: usize| -> Vec<usize> {
        let mut v: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).flat_map(|i| slices[i].iter().copied()).collect();
        v.sort();
        v.dedup();
        v
    };
    for mask in 1..=full {
        let a = union(mask);
        if a.is_empty() {
            continue;
        }
        report.face_checks += 1;
        if !lattice.is_face(&local(&a)) {
            report.failures.push(format!("cell {:?}: σ^I not a face for I = {}", cell.vertices, fmt_mask(mask, r)));
        }
        let comp = full & !mask;
        if mask < comp {
            let b = union(comp);
            if b.is_empty() {
                continue;
            }
            report.distance_checks += 1;
            let pa: Vec<Vec<i64>> = a.iter().map(|&p| sub.points[p].clone()).collect();
            let pb: Vec<Vec<i64>> = b.iter().map(|&p| sub.points[p].clone()).collect();
            let dist = lattice_distance(&pa, &pb);
            if !dist.is_one() {
                report.failures.push(format!(
                    "cell {:?}: lattice distance {dist} for I = {}",
                    cell.vertices,
                    fmt_mask(mask, r)
                ));
            }
        }
    }
}

fn fmt_mask(mask: usize, r: usize) -> String {
    let items: Vec<String> = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Lattice distance between the affine spans of two point sets: the index of
/// the difference of base points modulo the saturated span of both direction
/// spaces. Zero if the spans meet or are parallel translates by a non-lattice
/// amount that the directions absorb.
pub fn lattice_distance(a: &[Vec<i64>], b: &[Vec<i64>]) -> BigInt {
    let d = a[0].len();
    let mut dirs: Vec<QVec> = Vec::new();
    for set in [a, b] {
        for p in &set[1..] {
            let v: Vec<i64> = p.iter().zip(&set[0]).map(|(x, y)| x - y).collect();
            dirs.push(qvec(&v));
        }
    }
    let basis = saturated_perp_basis(&dirs, d);
    let diff: Vec<BigInt> = b[0].iter().zip(&a[0]).map(|(x, y)| BigInt::from(x - y)).collect();
    basis
        .entries
        .iter()
        .map(|row| row.iter().zip(&diff).map(|(x, y)| x * y).sum::<BigInt>())
        .fold(BigInt::zero(), |g, x| g.gcd(&x))
}

/// Exactly `r` vertices, one in each slice, spanning a unimodular simplex.
fn check_unimodular(sub: &Subdivision, slices: &[Vec<usize>], r: usize) -> std::result::Result<(), String> {
    if slices.iter().any(|s| s.len() != 1) {
        return Err("some slice is not a single vertex".into());
    }
    let mut verts: Vec<usize> = slices.iter().map(|s| s[0]).collect();
    verts.sort();
    verts.dedup();
    if verts.len() != r {
        return Err(format!("{} distinct vertices instead of {r}", verts.len()));
    }
    let p0 = &sub.points[verts[0]];
    let edges: Vec<Vec<i64>> =
        verts[1..].iter().map(|&v| sub.points[v].iter().zip(p0).map(|(x, y)| x - y).collect()).collect();
    if edges.is_empty() {
        return Ok(());
    }
    let snf = smith_normal_form(&IntegerMatrix::from_i64(&edges));
    if snf.rank != r - 1 || !snf.divisors.iter().all(|x| x.is_one()) {
        return Err(format!("edge lattice has divisors {:?}", snf.divisors));
    }
    Ok(())
}

/// A cell `σ_Δ × τ_∇` of `Σ`, by poset positions on the two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub sigma: usize,
    pub tau: usize,
}

/// The sphere complex and its barycentric subdivision.
#[derive(Debug, Clone)]
pub struct SphereComplex {
    /// Adjoint pairs sorted by cell dimension, then `σ`, then `τ`.
    pub pairs: Vec<Pair>,
    pub dims: Vec<usize>,
    index: HashMap<Pair, usize>,
    /// Strictly-below lists in the face poset of `Σ`.
    pub below: Vec<Vec<u32>>,
    pub bsd: SimplicialComplex,
    pub checks: Vec<Check>,
}

/// `⟨σ⁽ⁱ⁾, τ⁽ʲ⁾⟩ = δᵢⱼ` on all vertex pairs.
pub fn is_adjoint(sigma: &[Vec<Vec<i64>>], tau: &[Vec<Vec<i64>>]) -> bool {
    sigma.iter().enumerate().all(|(i, si)| {
        tau.iter().enumerate().all(|(j, tj)| {
            let want = (i == j) as i64;
            si.iter().all(|m| tj.iter().all(|n| m.iter().zip(n).map(|(a, b)| a * b).sum::<i64>() == want))
        })
    })
}

impl SphereComplex {
    pub fn new(m: &Side, n: &Side) -> Self {
        let r = m.r();
        let d = m.dim();
        let sig: Vec<Vec<Vec<Vec<i64>>>> = (0..m.len()).map(|k| (0..r).map(|i| m.slice_points(k, i)).collect()).collect();
        let tau: Vec<Vec<Vec<Vec<i64>>>> = (0..n.len()).map(|k| (0..r).map(|i| n.slice_points(k, i)).collect()).collect();
        let mut pairs = Vec::new();
        for (a, s) in sig.iter().enumerate() {
            for (b, t) in tau.iter().enumerate() {
                if is_adjoint(s, t) {
                    pairs.push(Pair { sigma: a, tau: b });
                }
            }
        }
        let dim_of = |p: &Pair| m.mink[p.sigma].dim() + n.mink[p.tau].dim();
        pairs.sort_by_key(|p| (dim_of(p), p.sigma, p.tau));
        let dims: Vec<usize> = pairs.iter().map(dim_of).collect();
        let index: HashMap<Pair, usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut checks = Vec::new();

        // face poset: products of faces; closure under faces is verified
        let mut below = Vec::with_capacity(pairs.len());
        let mut missing = None;
        for (id, p) in pairs.iter().enumerate() {
            let mut list = Vec::new();
            for &fs in &m.faces[p.sigma] {
                for &ft in &n.faces[p.tau] {
                    let f = Pair { sigma: fs as usize, tau: ft as usize };
                    if f == *p {
                        continue;
                    }
                    match index.get(&f) {
                        Some(&j) => list.push(j as u32),
                        None => missing = missing.or(Some((id, f))),
                    }
                }
            }
            list.sort_unstable();
            below.push(list);
        }
        checks.push(Check::new(
            "sigma_closed_under_faces",
            missing.is_none(),
            match missing {
                None => format!("{} adjoint pairs", pairs.len()),
                Some((id, f)) => format!("pair {id} has non-adjoint face {f:?}"),
            },
        ));

        // ⟨m, n⟩ = r on all vertices of all cells
        let rq = q(r as i64);
        let mut violation = None;
        for p in &pairs {
            for a in m.mink[p.sigma].vertices() {
                for b in n.mink[p.tau].vertices() {
                    if crate::geometry::dot(a, b) != rq {
                        violation = violation.or(Some(*p));
                    }
                }
            }
        }
        checks.push(Check::new(
            "cells_on_pairing_level_set",
            violation.is_none(),
            match violation {
                None => format!("⟨m,n⟩ = {r} on every cell vertex"),
                Some(p) => format!("violated at {p:?}"),
            },
        ));

        let top = d - r;
        let too_big = dims.iter().any(|&k| k > top);
        let maximal_ok = (0..pairs.len()).all(|i| {
            let is_max = !below.iter().any(|l| l.binary_search(&(i as u32)).is_ok());
            !is_max || dims[i] == top
        });
        checks.push(Check::new(
            "cell_dimensions",
            !too_big && maximal_ok,
            format!("cells have dimension ≤ {top}, maximal ones exactly {top}"),
        ));

        let hit_p = (0..m.len()).all(|k| pairs.iter().any(|p| p.sigma == k));
        let hit_q = (0..n.len()).all(|k| pairs.iter().any(|p| p.tau == k));
        checks.push(Check::new("projection_p1_onto_s_delta", hit_p, format!("{} cells of S_Δ", m.len())));
        checks.push(Check::new("projection_p2_onto_t_nabla", hit_q, format!("{} cells of T_∇", n.len())));

        let bsd = order_complex(&below);
        SphereComplex { pairs, dims, index, below, bsd, checks }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn find(&self, p: Pair) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|&k| if k % 2 == 0 { 1 } else { -1 }).sum()
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        let top = self.dims.iter().copied().max().map_or(0, |k| k + 1);
        let mut c = vec![0; top];
        for &k in &self.dims {
            c[k] += 1;
        }
        c
    }

    pub fn homology(&self) -> Homology {
        homology(&self.bsd)
    }
}

/// `ℤ`, then zeros, then `ℤ` in degree `n`; for `n = 0` the two-point
/// sphere `ℤ²`.
pub fn sphere_betti(n: usize) -> Vec<usize> {
    if n == 0 {
        return vec![2];
    }
    let mut b = vec![0; n + 1];
    b[0] = 1;
    b[n] = 1;
    b
}

/// Betti numbers of a product of spheres of the given dimensions.
pub fn product_betti(dims: &[usize]) -> Vec<usize> {
    dims.iter().fold(vec![1], |acc, &n| {
        let s = sphere_betti(n);
        let mut out = vec![0; acc.len() + s.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in s.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    })
}
