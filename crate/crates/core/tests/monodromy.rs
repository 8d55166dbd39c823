use nefsphere::geometry::Role;
use nefsphere::monodromy::{complement, duality_check, is_smooth, Discriminant, MonodromyAnalysis};
use nefsphere::nef::NefPartition;
use nefsphere::samples::{self, Sample};
use nefsphere::sphere::{Side, SphereComplex};
use nefsphere::subdivision::WeightFunction;

struct Run {
    m: Side,
    n: Side,
    sigma: SphereComplex,
    disc: Discriminant,
    mono: MonodromyAnalysis,
}

fn run(s: &Sample) -> Run {
    let nef = NefPartition::new(s.dim, &s.parts, Role::M).unwrap();
    let dual = nef.dual().unwrap();
    let wm = WeightFunction::all_ones(&nef.union_hull().lattice_points());
    let wn = WeightFunction::all_ones(&dual.union_hull().lattice_points());
    let m = Side::new(nef, wm).unwrap();
    let n = Side::new(dual, wn).unwrap();
    let sigma = SphereComplex::new(&m, &n);
    let disc = Discriminant::new(&m, &n, &sigma);
    let mono = MonodromyAnalysis::new(&m, &n, &sigma, &disc).unwrap();
    Run { m, n, sigma, disc, mono }
}

fn det(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = a[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * a[0][j] as i128 * det(&minor)
        })
        .sum()
}

fn minus_identity(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, &x)| x - i64::from(i == j)).collect()).collect()
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a.len()).map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn no_discriminant_when_sigma_has_dimension_below_two() {
    for s in [samples::triangle(), samples::plane_pair(), samples::square()] {
        let r = run(&s);
        assert!(r.disc.non_smooth().is_empty(), "{}", s.name);
        assert!(r.disc.components.is_empty());
        assert!(r.mono.loops.iter().all(|l| l.trivial), "{}", s.name);
    }
}

#[test]
fn minimal_transversal_cells_give_smooth_pairs() {
    for s in [samples::simplex3(), samples::quadric_cubic()] {
        let r = run(&s);
        for p in &r.sigma.pairs {
            if r.m.minimal.contains(&p.sigma) || r.n.minimal.contains(&p.tau) {
                assert!(is_smooth(&r.m, &r.n, *p), "{}", s.name);
            }
        }
    }
}

#[test]
fn quartic_discriminant_is_six_points_of_multiplicity_four() {
    let r = run(&samples::simplex3());
    assert_eq!(r.disc.components.len(), 6);
    for c in &r.disc.components {
        assert_eq!(c.vertices.len(), 1);
        assert!(c.homology.is_free_with(&[1]));
    }
    // S² minus six points
    let comp = complement(&r.sigma, &r.disc);
    assert!(comp.homology.is_free_with(&[1, 5, 0]));
    assert_eq!(r.mono.component_divisors, vec![vec![vec!["4".to_string()]]; 6]);
    // a K3 has Euler characteristic 24
    let total: i64 = r.mono.component_divisors.iter().map(|c| c[0][0].parse::<i64>().unwrap()).sum();
    assert_eq!(total, 24);
}

#[test]
fn quadric_cubic_multiplicities_sum_to_24() {
    let r = run(&samples::quadric_cubic());
    let total: i64 = r
        .mono
        .component_divisors
        .iter()
        .map(|c| c.iter().map(|d| d.iter().map(|x| x.parse::<i64>().unwrap()).product::<i64>()).max().unwrap())
        .sum();
    assert_eq!(total, 24);
}

#[test]
fn loop_linear_parts_are_unipotent_shears() {
    for s in [samples::simplex3(), samples::quadric_cubic()] {
        let r = run(&s);
        for l in &r.mono.loops {
            assert_eq!(det(&l.linear), 1, "{}", s.name);
            let n = minus_identity(&l.linear);
            assert!(mul(&n, &n).iter().flatten().all(|&x| x == 0), "{}: {:?}", s.name, l.linear);
        }
    }
}

#[test]
fn nontrivial_quartic_loops_shear_by_four() {
    let r = run(&samples::simplex3());
    let nontrivial: Vec<_> = r.mono.loops.iter().filter(|l| !l.trivial).collect();
    assert_eq!(nontrivial.len(), 6);
    for l in nontrivial {
        assert!(!l.degenerate);
        let g = minus_identity(&l.linear).iter().flatten().fold(0, |a, &x| gcd(a, x));
        assert_eq!(g, 4, "{:?}", l.linear);
    }
}

#[test]
fn degenerate_loops_are_trivial() {
    for s in [samples::simplex3(), samples::quadric_cubic()] {
        let r = run(&s);
        assert!(r.mono.loops.iter().filter(|l| l.lp.tau0 == l.lp.tau1).all(|l| l.trivial), "{}", s.name);
        assert!(r.mono.loops.iter().filter(|l| l.degenerate).all(|l| l.trivial), "{}", s.name);
    }
}

#[test]
fn local_groups_pass() {
    for s in [samples::simplex3(), samples::quadric_cubic()] {
        let r = run(&s);
        assert!(!r.mono.local.is_empty());
        assert!(r.mono.local.iter().all(|g| g.passed()), "{}", s.name);
    }
}

#[test]
fn dual_loops_preserve_the_pairing() {
    for s in [samples::plane_pair(), samples::simplex3(), samples::quadric_cubic()] {
        let r = run(&s);
        let primary: Vec<_> = r.mono.loops.iter().map(|l| l.lp).collect();
        assert!(duality_check(&r.m, &r.n, &primary).unwrap().passed(), "{}", s.name);
        let constant = duality_check(&r.m, &r.n, &r.mono.graph.edge_loops()).unwrap();
        assert_eq!(constant.loops, r.mono.graph.edge_count());
        assert!(constant.passed(), "{}", s.name);
    }
}

#[test]
fn checks_pass_on_the_small_samples() {
    for s in [samples::triangle(), samples::plane_pair(), samples::simplex3(), samples::quadric_cubic()] {
        let r = run(&s);
        assert!(r.mono.checks.iter().all(|c| c.pass), "{}: {:?}", s.name, r.mono.checks);
    }
}
