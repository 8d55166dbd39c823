use num_traits::{One, Zero};

use nefsphere::geometry::lattice::{smith_normal_form, IntegerMatrix};
use nefsphere::geometry::{dot, qvec, saturated_perp_basis, Polytope, QVec, Rational, Role};
use nefsphere::samples;

fn poly(points: &[Vec<i64>]) -> Polytope {
    Polytope::from_integer_points(points, Role::M).unwrap()
}

fn sorted_vertices(p: &Polytope) -> Vec<Vec<i64>> {
    let mut v = p.integer_vertices().unwrap();
    v.sort();
    v
}

/// Rank of a rational matrix by plain Gaussian elimination.
fn rank(mut rows: Vec<QVec>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

#[test]
fn schoen_first_part_is_a_three_dimensional_hexagonal_prism() {
    let s = samples::schoen();
    let part = &s.parts[0];
    let p = poly(part);
    assert_eq!(p.ambient_dim(), 5);
    assert_eq!(p.vertices().len(), 6);
    let diffs: Vec<QVec> = part[1..].iter().map(|v| qvec(&v.iter().zip(&part[0]).map(|(a, b)| a - b).collect::<Vec<_>>())).collect();
    assert_eq!(rank(diffs), 3);
    assert_eq!(p.dim(), 3);
}

#[test]
fn reflexivity_examples() {
    let tri = poly(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
    assert!(tri.is_reflexive().unwrap());
    let big = poly(&[vec![2, 0], vec![0, 2], vec![-2, -2]]);
    assert!(!big.is_reflexive().unwrap());
    // the oracle: some facet of the big triangle has lattice distance > 1 from the origin
    let dual = big.polar_dual().unwrap();
    assert!(!dual.is_lattice_polytope());
    let seg = poly(&[vec![-1], vec![1]]);
    assert!(seg.is_reflexive().unwrap());
    assert_eq!(sorted_vertices(&seg.polar_dual().unwrap()), sorted_vertices(&seg));
}

#[test]
fn polar_satisfies_the_defining_inequalities() {
    // every vertex pair of a polytope and its polar pairs to at most 1, and each
    // polar vertex is tight on a facet's worth of primal vertices
    let tri = poly(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
    let dual = tri.polar_dual().unwrap();
    assert_eq!(sorted_vertices(&dual), vec![vec![-2, 1], vec![1, -2], vec![1, 1]]);
    for y in dual.vertices() {
        let tight = tri.vertices().iter().filter(|x| dot(x, y) == Rational::one()).count();
        assert_eq!(tight, 2);
        assert!(tri.vertices().iter().all(|x| dot(x, y) <= Rational::one()));
    }
}

#[test]
fn schoen_sum_is_reflexive_with_polar_the_dual_union() {
    let s = samples::schoen();
    let a = poly(&s.parts[0]);
    let b = poly(&s.parts[1]);
    let sum = a.minkowski_sum(&b).unwrap();
    assert!(sum.is_reflexive().unwrap());
    let dual_union: Vec<Vec<i64>> = samples::schoen_dual_parts().concat();
    let hull = poly(&dual_union);
    assert_eq!(sorted_vertices(&sum.polar_dual().unwrap()), sorted_vertices(&hull));
}

#[test]
fn lattice_point_counts_match_box_scans() {
    let cases: Vec<(Vec<Vec<i64>>, usize)> = vec![
        (vec![vec![-1], vec![1]], 3),
        (vec![vec![1, 0], vec![0, 1], vec![-1, -1]], 4),
        (vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]], 9),
    ];
    for (pts, want) in cases {
        let p = poly(&pts);
        // box scan with a membership test as the oracle
        let d = pts[0].len();
        let mut count = 0;
        let mut x = vec![-3i64; d];
        loop {
            if p.contains(&qvec(&x)) {
                count += 1;
            }
            let mut k = 0;
            while k < d && x[k] == 3 {
                x[k] = -3;
                k += 1;
            }
            if k == d {
                break;
            }
            x[k] += 1;
        }
        assert_eq!(count, want);
        assert_eq!(p.lattice_points().len(), want);
    }
}

#[test]
fn perp_basis_examples() {
    let b = saturated_perp_basis(&[qvec(&[2, 0, 0]), qvec(&[0, 1, 1])], 3);
    let rows = b.to_i64().unwrap();
    assert_eq!(rows.len(), 1);
    let v = &rows[0];
    assert!(v == &vec![0, 1, -1] || v == &vec![0, -1, 1]);
    let b = saturated_perp_basis(&[qvec(&[1, 1])], 2).to_i64().unwrap();
    assert!(b == vec![vec![1, -1]] || b == vec![vec![-1, 1]]);
}

#[test]
fn smith_examples_from_hand_reduction() {
    let divisors = |rows: Vec<Vec<i64>>| -> Vec<String> {
        smith_normal_form(&IntegerMatrix::from_i64(&rows)).divisors.iter().map(|d| d.to_string()).collect()
    };
    assert_eq!(divisors(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), ["1", "1", "1"]);
    assert_eq!(divisors(vec![vec![2, 0], vec![0, 4]]), ["2", "4"]);
    assert_eq!(divisors(vec![vec![2, 4], vec![6, 8]]), ["2", "4"]);
}

#[test]
fn face_lattice_is_eulerian_on_the_schoen_sum() {
    let s = samples::schoen();
    let sum = poly(&s.parts[0]).minkowski_sum(&poly(&s.parts[1])).unwrap();
    let f = sum.face_lattice().f_vector();
    // proper faces of a 5-polytope: f0 − f1 + f2 − f3 + f4 = 1 − (−1)^5 = 2
    let alt: i64 = f.iter().take(5).enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
    assert_eq!(alt, 2);
}
