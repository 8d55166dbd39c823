use std::collections::BTreeSet;

use num_traits::One;

use nefsphere::geometry::{q, qvec, Polytope, Rational, Role};
use nefsphere::nef::NefPartition;
use nefsphere::samples::{self, Sample};
use nefsphere::sphere::{lattice_distance, Side, SphereComplex};
use nefsphere::subdivision::WeightFunction;

fn sides(s: &Sample) -> (Side, Side) {
    let nef = NefPartition::new(s.dim, &s.parts, Role::M).unwrap();
    let dual = nef.dual().unwrap();
    let wm = WeightFunction::all_ones(&nef.union_hull().lattice_points());
    let wn = WeightFunction::all_ones(&dual.union_hull().lattice_points());
    (Side::new(nef, wm).unwrap(), Side::new(dual, wn).unwrap())
}

fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Adjoint pairs by brute force over `P × Q`, straight from the definition.
fn adjoint_pairs(m: &Side, n: &Side) -> BTreeSet<(usize, usize)> {
    let r = m.r();
    let mut out = BTreeSet::new();
    for k in 0..m.len() {
        for l in 0..n.len() {
            let ok = (0..r).all(|i| {
                (0..r).all(|j| {
                    let want = i64::from(i == j);
                    m.slice_points(k, i).iter().all(|a| n.slice_points(l, j).iter().all(|b| dot_i(a, b) == want))
                })
            });
            if ok {
                out.insert((k, l));
            }
        }
    }
    out
}

fn pair_set(sigma: &SphereComplex) -> BTreeSet<(usize, usize)> {
    sigma.pairs.iter().map(|p| (p.sigma, p.tau)).collect()
}

#[test]
fn adjoint_pairs_match_brute_force() {
    for s in [samples::triangle(), samples::plane_pair(), samples::square(), samples::simplex3()] {
        let (m, n) = sides(&s);
        let sigma = SphereComplex::new(&m, &n);
        assert_eq!(pair_set(&sigma), adjoint_pairs(&m, &n), "{}", s.name);
    }
}

#[test]
fn cells_lie_on_the_pairing_level_set() {
    for s in [samples::triangle(), samples::plane_pair(), samples::simplex3(), samples::quadric_cubic()] {
        let (m, n) = sides(&s);
        let sigma = SphereComplex::new(&m, &n);
        let r = q(m.r() as i64);
        for p in &sigma.pairs {
            for a in m.mink[p.sigma].vertices() {
                for b in n.mink[p.tau].vertices() {
                    assert_eq!(nefsphere::geometry::dot(a, b), r, "{}", s.name);
                }
            }
            assert!(m.mink[p.sigma].dim() + n.mink[p.tau].dim() <= s.dim - m.r());
        }
    }
}

#[test]
fn triangle_sphere_is_a_circle() {
    let (m, n) = sides(&samples::triangle());
    assert_eq!(m.len(), m.sub.cells.len(), "every cell is transversal for one part");
    let sigma = SphereComplex::new(&m, &n);
    assert_eq!(sigma.euler_characteristic(), 0);
    assert!(sigma.homology().is_free_with(&[1, 1]));
    assert!(sigma.bsd.is_closed_pseudomanifold(1));
}

#[test]
fn reducible_square_gives_four_points() {
    let (m, n) = sides(&samples::square());
    let sigma = SphereComplex::new(&m, &n);
    assert_eq!(sigma.len(), 4);
    assert!(sigma.homology().is_free_with(&[4]));
}

#[test]
fn k3_sphere_is_a_two_sphere() {
    let (m, n) = sides(&samples::simplex3());
    let sigma = SphereComplex::new(&m, &n);
    assert!(sigma.homology().is_free_with(&[1, 0, 1]));
    assert_eq!(sigma.euler_characteristic(), 2);
}

#[test]
fn plane_pair_minkowski_cells_are_scaled_intersections() {
    let s = samples::plane_pair();
    let (m, _) = sides(&s);
    let delta = m.nef.sum().clone();
    let two = q(2);
    for k in 0..m.len() {
        // Minkowski sum by hand: hull of all sums of slice points
        let a = m.slice_points(k, 0);
        let b = m.slice_points(k, 1);
        let sums: Vec<Vec<i64>> = a.iter().flat_map(|x| b.iter().map(move |y| vec![x[0] + y[0], x[1] + y[1]])).collect();
        let by_hand = Polytope::from_integer_points(&sums, Role::M).unwrap();
        assert_eq!(by_hand.vertices(), m.mink[k].vertices());
        // 2σ ∩ Δ contains the cell and every lattice point of it
        let cell: Vec<Vec<i64>> = m.vertices(k).iter().map(|&i| m.sub.points[i].clone()).collect();
        let scaled = Polytope::from_integer_points(&cell, Role::M).unwrap().scaled(&two);
        for v in m.mink[k].vertices() {
            assert!(scaled.contains(v) && delta.contains(v));
        }
        for x in delta.lattice_points() {
            if scaled.contains(&qvec(&x)) {
                assert!(m.mink[k].contains(&qvec(&x)), "{x:?} missing from cell {k}");
            }
        }
    }
}

#[test]
fn plane_pair_s_delta_is_the_boundary_slice() {
    // |S_Δ| = Δ ∩ ∂(2∇∨): checked on the lattice points of Δ
    let s = samples::plane_pair();
    let (m, _) = sides(&s);
    let delta = m.nef.sum().clone();
    let union = m.nef.union_hull().clone();
    let on_boundary = |x: &[i64]| {
        let y: Vec<Rational> = x.iter().map(|&c| Rational::new(c.into(), 2.into())).collect();
        union.contains(&y) && !union.contains_in_relative_interior(&y)
    };
    for x in delta.lattice_points() {
        let in_complex = (0..m.len()).any(|k| m.mink[k].contains(&qvec(&x)));
        assert_eq!(in_complex, on_boundary(&x), "{x:?}");
    }
}

#[test]
fn minimal_transversal_cells_are_unimodular_simplices() {
    for s in [samples::plane_pair(), samples::simplex3(), samples::quadric_cubic()] {
        let (m, _) = sides(&s);
        let r = m.r();
        for &k in &m.minimal {
            let vs: Vec<Vec<i64>> = m.vertices(k).iter().map(|&i| m.sub.points[i].clone()).collect();
            assert_eq!(vs.len(), r);
            for i in 0..r {
                assert_eq!(m.slice_points(k, i).len(), 1);
            }
            // unimodular: the vertices extend to a lattice basis, i.e. their
            // maximal minors have gcd 1 (they lie on a height-one hyperplane)
            let mat = nefsphere::geometry::IntegerMatrix::from_i64(&vs);
            let snf = nefsphere::geometry::smith_normal_form(&mat);
            assert_eq!(snf.rank, r);
            assert!(snf.divisors.iter().all(|d| d.is_one()), "{}: {vs:?}", s.name);
        }
    }
}

#[test]
fn lattice_distance_examples() {
    assert_eq!(lattice_distance(&[vec![0, 0]], &[vec![1, 0]]).to_string(), "1");
    assert_eq!(lattice_distance(&[vec![0, 0], vec![0, 1]], &[vec![2, 0]]).to_string(), "2");
    assert_eq!(lattice_distance(&[vec![1, 0], vec![0, 1]], &[vec![0, 0]]).to_string(), "1");
}

#[test]
fn projections_hit_every_cell() {
    for s in [samples::triangle(), samples::plane_pair(), samples::simplex3()] {
        let (m, n) = sides(&s);
        let sigma = SphereComplex::new(&m, &n);
        let sig: BTreeSet<usize> = sigma.pairs.iter().map(|p| p.sigma).collect();
        let tau: BTreeSet<usize> = sigma.pairs.iter().map(|p| p.tau).collect();
        assert_eq!(sig.len(), m.len(), "{}", s.name);
        assert_eq!(tau.len(), n.len(), "{}", s.name);
    }
}

#[test]
fn triangle_lemma_counts_are_complete() {
    let (m, n) = sides(&samples::triangle());
    for side in [&m, &n] {
        assert!(side.lemma.passed());
        assert_eq!(side.lemma.cells, side.len());
    }
}
