mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nefsphere::geometry::{dot, q, qvec, Polytope, QVec, Rational, Role};
use nefsphere::nef::NefPartition;
use nefsphere::samples::{self, Sample};
use nefsphere::sphere::Side;
use nefsphere::subdivision::WeightFunction;
use nefsphere::tropical::{LiftedSupport, TropicalComplex};

fn side(s: &Sample) -> Side {
    let nef = NefPartition::new(s.dim, &s.parts, Role::M).unwrap();
    let w = WeightFunction::all_ones(&nef.union_hull().lattice_points());
    Side::new(nef, w).unwrap()
}

fn ones(points: &[Vec<i64>]) -> Vec<Rational> {
    points.iter().map(|p| if p.iter().all(|&x| x == 0) { q(0) } else { q(1) }).collect()
}

fn pt(v: &[i64]) -> QVec {
    qvec(v)
}

fn sorted(vs: &[QVec]) -> Vec<QVec> {
    let mut v = vs.to_vec();
    v.sort();
    v
}

/// Points where `⟨m,y⟩ − h(m)` is maximal, reduced to the hull vertices.
fn argmax_vertices(support: &LiftedSupport, y: &[Rational]) -> Vec<usize> {
    let vals: Vec<Rational> = support.points.iter().zip(&support.heights).map(|(m, h)| dot(&qvec(m), y) - h).collect();
    let best = vals.iter().max().unwrap().clone();
    let arg: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == best).collect();
    let pts: Vec<Vec<i64>> = arg.iter().map(|&i| support.points[i].clone()).collect();
    let hull = Polytope::from_integer_points(&pts, Role::M).unwrap();
    arg.into_iter().filter(|&i| hull.vertex_index(&qvec(&support.points[i])).is_some()).collect()
}

#[test]
fn segment_cells() {
    let pts = vec![vec![-1], vec![0], vec![1]];
    let s = LiftedSupport::from_points(pts.clone(), ones(&pts), Role::M).unwrap();
    // the vertex {1} is dual to the half-line y ≥ 1
    let f = s.tropical_cell(&[2]).unwrap();
    assert!(!f.is_bounded());
    assert_eq!(f.vertices(), &[pt(&[1])]);
    assert!(f.contains(&pt(&[1])) && f.contains(&pt(&[7])));
    assert!(!f.contains(&[Rational::new(1.into(), 2.into())]));
    // the edge [0,1] is dual to the point 1
    let e = s.tropical_cell(&[1, 2]).unwrap();
    assert!(e.is_bounded() && e.dim() == 0);
    assert_eq!(e.vertices(), &[pt(&[1])]);
    let amoeba: BTreeSet<QVec> = s.amoeba().unwrap().iter().map(|c| c.polyhedron.vertices()[0].clone()).collect();
    assert_eq!(amoeba, [pt(&[-1]), pt(&[1])].into_iter().collect());
}

#[test]
fn triangle_curve_is_a_triangle_with_three_rays() {
    let pts = Polytope::from_integer_points(&samples::triangle().parts[0], Role::M).unwrap().lattice_points();
    let s = LiftedSupport::from_points(pts.clone(), ones(&pts), Role::M).unwrap();
    let cells = s.amoeba().unwrap();
    let bounded_edges = cells.iter().filter(|c| c.dim() == 1 && c.is_bounded()).count();
    let rays: BTreeSet<(QVec, Vec<i64>)> = cells
        .iter()
        .filter(|c| !c.is_bounded())
        .map(|c| {
            assert_eq!(c.polyhedron.rays().len(), 1);
            let r: Vec<i64> = c.polyhedron.rays()[0].iter().map(|x| i64::try_from(x).unwrap()).collect();
            (c.polyhedron.vertices()[0].clone(), r)
        })
        .collect();
    let vertices: BTreeSet<QVec> = cells.iter().filter(|c| c.dim() == 0).map(|c| c.polyhedron.vertices()[0].clone()).collect();
    assert_eq!(bounded_edges, 3);
    // each ray leaves a corner of the polar triangle in the corner's direction
    let corners = [vec![-2, 1], vec![1, -2], vec![1, 1]];
    assert_eq!(rays, corners.iter().map(|c| (pt(c), c.clone())).collect());
    assert_eq!(vertices, corners.iter().map(|c| pt(c)).collect());
}

#[test]
fn triangle_nabla_is_the_boundary_of_the_polar() {
    let side = side(&samples::triangle());
    let t = TropicalComplex::new(&side, true).unwrap();
    assert_eq!(sorted(t.f0.vertices()), vec![pt(&[-2, 1]), pt(&[1, -2]), pt(&[1, 1])]);
    assert_eq!(t.counts_by_dim(), vec![3, 3]);
    for c in &t.cells {
        assert!(c.vertices().iter().all(|v| t.f0.contains(v) && !t.f0.contains_in_relative_interior(v)));
    }
    assert!(t.checks.iter().all(|c| c.pass), "{:?}", t.checks);
}

#[test]
fn square_nabla_is_four_points() {
    // part amoebas are the lines y₁ = ±1 and y₂ = ±1
    let side = side(&samples::square());
    let t = TropicalComplex::new(&side, true).unwrap();
    let pts: BTreeSet<QVec> = t.cells.iter().map(|c| c.vertices()[0].clone()).collect();
    assert_eq!(t.counts_by_dim(), vec![4]);
    let want: BTreeSet<QVec> = [[1, 1], [1, -1], [-1, 1], [-1, -1]].iter().map(|c| pt(c)).collect();
    assert_eq!(pts, want);
    assert!(t.checks.iter().all(|c| c.pass), "{:?}", t.checks);
}

#[test]
fn plane_pair_nabla_is_where_a_line_meets_a_tropical_line() {
    // the segment gives y₁ = 1; the triangle gives a tropical line at (−2, 1)
    // with rays along (1, 0), (1, −1) and (−2, 1)
    let side = side(&samples::plane_pair());
    let t = TropicalComplex::new(&side, true).unwrap();
    let pts: BTreeSet<QVec> = t.cells.iter().map(|c| c.vertices()[0].clone()).collect();
    assert_eq!(pts, [pt(&[1, 1]), pt(&[1, -2])].into_iter().collect());
    assert!(t.checks.iter().all(|c| c.pass), "{:?}", t.checks);
}

#[test]
fn tropical_checks_pass_on_the_samples() {
    for s in [samples::simplex3(), samples::quadric_cubic()] {
        let side = side(&s);
        let t = TropicalComplex::new(&side, true).unwrap();
        assert!(t.checks.iter().all(|c| c.pass), "{}: {:?}", s.name, t.checks);
        assert_eq!(t.cells.len(), side.len());
        for k in 0..side.len() {
            assert_eq!(t.cells[k].dim() + side.cell_dim(k) + 1, s.dim);
        }
    }
}

#[test]
fn maximal_cells_give_vertices() {
    let pts = Polytope::from_integer_points(&samples::simplex3().parts[0], Role::M).unwrap().lattice_points();
    let s = LiftedSupport::from_points(pts.clone(), ones(&pts), Role::M).unwrap();
    for (c, dim) in s.cell_dims.iter().enumerate() {
        let f = s.tropical_cell(&s.cells[c]).unwrap();
        assert_eq!(f.dim(), (3 - dim) as isize);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn amoeba_cells_match_the_argmax(seed in any::<u64>(), values in prop::collection::vec(-2i64..=4, 16)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = Polytope::from_integer_points(&common::random_reflexive(&mut rng, 2), Role::M).unwrap().lattice_points();
        let heights: Vec<Rational> = (0..pts.len()).map(|i| q(values[i % values.len()])).collect();
        let s = LiftedSupport::from_points(pts, heights, Role::M).unwrap();
        for cell in s.amoeba().unwrap() {
            let y = cell.polyhedron.relative_interior_point();
            prop_assert_eq!(argmax_vertices(&s, &y), cell.generator.clone());
            for v in cell.polyhedron.vertices() {
                let at = argmax_vertices(&s, v);
                let hull_pts: Vec<Vec<i64>> = at.iter().map(|&i| s.points[i].clone()).collect();
                let hull = Polytope::from_integer_points(&hull_pts, Role::M).unwrap();
                prop_assert!(cell.generator.iter().all(|&g| hull.contains(&qvec(&s.points[g]))));
            }
        }
    }
}
