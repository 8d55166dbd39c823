//! Double description method for polyhedral cones.
//!
//! Computes generators of `C = {h : A h ≥ 0, E h = 0}`: a basis of the
//! lineality space and the extreme rays of the pointed part `C ∩ L^⊥`.
//! All arithmetic is on primitive integer vectors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{nullspace, rank};
use super::{primitive, primitive_z, zdot, zvec_to_q, QVec, ZVec};

#[derive(Debug, Clone, Default)]
pub struct ConeGenerators {
    pub lines: Vec<ZVec>,
    pub rays: Vec<ZVec>,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

fn to_q_rows(rows: &[ZVec]) -> Vec<QVec> {
    rows.iter().map(|r| zvec_to_q(r)).collect()
}

/// Generators of `{h ∈ Q^n : ineqs·h ≥ 0, eqs·h = 0}`.
pub fn cone_generators(n: usize, ineqs: &[ZVec], eqs: &[ZVec]) -> ConeGenerators {
    let mut all = to_q_rows(ineqs);
    all.extend(to_q_rows(eqs));
    let lines: Vec<ZVec> = nullspace(&all, n).iter().map(|v| primitive(v)).collect();

    let mut wrows = to_q_rows(eqs);
    wrows.extend(lines.iter().map(|l| zvec_to_q(l)));
    let basis: Vec<ZVec> = nullspace(&wrows, n).iter().map(|v| primitive(v)).collect();
    let w = basis.len();
    if w == 0 {
        return ConeGenerators { lines, rays: Vec::new() };
    }
    let reduced: Vec<ZVec> = ineqs
        .iter()
        .map(|a| basis.iter().map(|b| zdot(a, b)).collect())
        .collect();

    let rays_z = pointed_cone_rays(w, &reduced);
    let rays = rays_z
        .into_iter()
        .map(|z| {
            let mut h = vec![BigInt::zero(); n];
            for (zk, bk) in z.iter().zip(&basis) {
                for (hj, bj) in h.iter_mut().zip(bk) {
                    *hj += zk * bj;
                }
            }
            primitive_z(h)
        })
        .collect();
    ConeGenerators { lines, rays }
}

/// Extreme rays of `{z ∈ Q^w : rows·z ≥ 0}` where `rows` has full column rank.
fn pointed_cone_rays(w: usize, rows: &[ZVec]) -> Vec<ZVec> {
    let m = rows.len();
    // Greedy choice of w independent rows for the initial simplicial cone.
    let mut chosen: Vec<usize> = Vec::with_capacity(w);
    let mut chosen_q: Vec<QVec> = Vec::with_capacity(w);
    for (i, r) in rows.iter().enumerate() {
        if chosen.len() == w {
            break;
        }
        chosen_q.push(zvec_to_q(r));
        if rank(&chosen_q, w) == chosen_q.len() {
            chosen.push(i);
        } else {
            chosen_q.pop();
        }
    }
    assert_eq!(chosen.len(), w, "constraint system must have full column rank");
    let inv = super::linalg::inverse(&chosen_q).expect("independent rows");

    let mut rays: Vec<ZVec> = Vec::new();
    let mut zeros: Vec<Bits> = Vec::new();
    for k in 0..w {
        let col: QVec = inv.iter().map(|row| row[k].clone()).collect();
        rays.push(primitive(&col));
        let mut z = Bits::new(m);
        for (j, &ci) in chosen.iter().enumerate() {
            if j != k {
                z.set(ci);
            }
        }
        zeros.push(z);
    }
    let mut processed = vec![false; m];
    for &c in &chosen {
        processed[c] = true;
    }

    for i in 0..m {
        if processed[i] {
            continue;
        }
        processed[i] = true;
        let a = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|r| zdot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        if neg.is_empty() {
            for j in 0..rays.len() {
                if vals[j].is_zero() {
                    zeros[j].set(i);
                }
            }
            continue;
        }
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        for &p in &pos {
            for &qn in &neg {
                let z = zeros[p].and(&zeros[qn]);
                if w >= 2 && z.count() < w - 2 {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&k| k != p && k != qn)
                    .all(|k| !z.subset_of(&zeros[k]));
                if !adjacent {
                    continue;
                }
                let ap = &vals[p];
                let aq = -&vals[qn];
                let r: ZVec = rays[p]
                    .iter()
                    .zip(&rays[qn])
                    .map(|(x, y)| &aq * x + ap * y)
                    .collect();
                let mut zn = z;
                zn.set(i);
                new_rays.push(primitive_z(r));
                new_zeros.push(zn);
            }
        }
        let mut kept_rays = Vec::new();
        let mut kept_zeros = Vec::new();
        for (j, (r, mut z)) in rays.into_iter().zip(zeros).enumerate() {
            if vals[j].is_negative() {
                continue;
            }
            if vals[j].is_zero() {
                z.set(i);
            }
            kept_rays.push(r);
            kept_zeros.push(z);
        }
        kept_rays.extend(new_rays);
        kept_zeros.extend(new_zeros);
        rays = kept_rays;
        zeros = kept_zeros;
    }
    rays.sort();
    rays.dedup();
    rays
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZVec {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn positive_quadrant() {
        let g = cone_generators(2, &[z(&[1, 0]), z(&[0, 1])], &[]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![z(&[0, 1]), z(&[1, 0])]);
    }

    #[test]
    fn square_cone_has_four_rays() {
        // homogenized square |x|,|y| ≤ t
        let ineqs = [z(&[1, 1, 0]), z(&[1, -1, 0]), z(&[1, 0, 1]), z(&[1, 0, -1])];
        let g = cone_generators(3, &ineqs, &[]);
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[0], BigInt::from(1));
        }
    }

    #[test]
    fn halfplane_has_lineality() {
        let g = cone_generators(2, &[z(&[1, 0])], &[]);
        assert_eq!(g.lines.len(), 1);
        assert_eq!(g.rays, vec![z(&[1, 0])]);
    }

    #[test]
    fn equality_restricts() {
        let g = cone_generators(3, &[z(&[1, 0, 0]), z(&[0, 1, 0]), z(&[0, 0, 1])], &[z(&[1, -1, 0])]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![z(&[0, 0, 1]), z(&[1, 1, 0])]);
    }
}
