//! Finite simplicial complexes and their integral homology.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::geometry::lattice::{smith_normal_form, IntegerMatrix};

/// A simplicial complex stored as its simplices grouped by dimension, each a
/// sorted vertex list, each dimension sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Vec<u32>>>,
}

impl SimplicialComplex {
    /// Closure of the given simplices under taking faces.
    pub fn from_simplices<I: IntoIterator<Item = Vec<u32>>>(simplices: I) -> Self {
        let mut sets: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            add_with_faces(&mut sets, s);
        }
        SimplicialComplex { by_dim: sets.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    /// Trusts the caller that `by_dim` is closed under faces.
    pub fn from_closed(mut by_dim: Vec<Vec<Vec<u32>>>) -> Self {
        for level in by_dim.iter_mut() {
            level.sort_unstable();
        }
        while by_dim.last().is_some_and(|l| l.is_empty()) {
            by_dim.pop();
        }
        SimplicialComplex { by_dim }
    }

    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn simplices(&self, k: usize) -> &[Vec<u32>] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|l| l.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(|l| l.len()).sum()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Simplices all of whose vertices satisfy `keep`.
    pub fn full_subcomplex(&self, keep: impl Fn(u32) -> bool) -> SimplicialComplex {
        let by_dim = self
            .by_dim
            .iter()
            .map(|l| l.iter().filter(|s| s.iter().all(|&v| keep(v))).cloned().collect())
            .collect();
        SimplicialComplex::from_closed(by_dim)
    }

    /// Vertex sets of the connected components, each sorted, ordered by least
    /// vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let verts = self.vertices();
        let pos: HashMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.simplices(1) {
            let a = find(&mut parent, pos[&e[0]]);
            let b = find(&mut parent, pos[&e[1]]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: HashMap<usize, Vec<u32>> = HashMap::new();
        for (i, &v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<u32>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Every simplex lies in an `n`-simplex and every `(n−1)`-simplex lies in
    /// exactly two `n`-simplices.
    pub fn is_closed_pseudomanifold(&self, n: usize) -> bool {
        if self.dim() != n as isize {
            return false;
        }
        if n == 0 {
            return true;
        }
        let mut count: HashMap<&[u32], usize> = HashMap::new();
        for s in self.simplices(n) {
            for skip in 0..s.len() {
                let f: Vec<u32> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let key = self.simplices(n - 1).binary_search(&f).expect("closed under faces");
                *count.entry(self.simplices(n - 1)[key].as_slice()).or_default() += 1;
            }
        }
        self.simplices(n - 1).iter().all(|f| count.get(f.as_slice()) == Some(&2))
    }
}

fn add_with_faces(sets: &mut Vec<BTreeSet<Vec<u32>>>, s: Vec<u32>) {
    let k = s.len() - 1;
    while sets.len() <= k {
        sets.push(BTreeSet::new());
    }
    if sets[k].contains(&s) {
        return;
    }
    if k > 0 {
        for skip in 0..s.len() {
            let f: Vec<u32> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            add_with_faces(sets, f);
        }
    }
    sets[k].insert(s);
}

/// Integral homology: Betti numbers and torsion coefficients in each degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<String>>,
}

impl Homology {
    /// `H_k ≅ Z^{b_k}` with no torsion, in every degree listed.
    pub fn is_free_with(&self, betti: &[usize]) -> bool {
        self.torsion.iter().all(|t| t.is_empty()) && trimmed(&self.betti) == trimmed(betti)
    }

    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }

    /// Compact form such as `Z, 0, Z^2`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (k, b) in self.betti.iter().enumerate() {
            let mut terms = Vec::new();
            match b {
                0 => {}
                1 => terms.push("Z".to_string()),
                n => terms.push(format!("Z^{n}")),
            }
            for t in &self.torsion[k] {
                terms.push(format!("Z/{t}"));
            }
            parts.push(if terms.is_empty() { "0".to_string() } else { terms.join("+") });
        }
        parts.join(", ")
    }
}

fn trimmed(b: &[usize]) -> &[usize] {
    let mut n = b.len();
    while n > 0 && b[n - 1] == 0 {
        n -= 1;
    }
    &b[..n]
}

/// Rank and nontrivial elementary divisors of a boundary matrix.
struct Reduced {
    rank: usize,
    torsion: Vec<BigInt>,
}

/// Sparse integer matrix reduction by unit pivots; whatever block is left
/// without unit entries goes to the dense Smith form.
fn reduce_sparse(rows: Vec<Vec<(u32, i64)>>, ncols: usize) -> Reduced {
    let mut rows: Vec<Option<Vec<(u32, i64)>>> = rows.into_iter().map(|r| if r.is_empty() { None } else { Some(r) }).collect();
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for &(c, _) in r {
                cols[c as usize].push(i as u32);
            }
        }
    }
    let mut col_alive = vec![true; ncols];
    let mut rank = 0;
    let mut overflow = false;
    // Process rows repeatedly; each pass takes any row that has a unit
    // entry, choosing the unit column with the fewest rows.
    let mut progress = true;
    while progress && !overflow {
        progress = false;
        for i in 0..rows.len() {
            let Some(row) = rows[i].as_ref() else { continue };
            let mut best: Option<(u32, i64, usize)> = None;
            for &(c, v) in row {
                if v.abs() == 1 {
                    let live = cols[c as usize].len();
                    if best.is_none_or(|(_, _, b)| live < b) {
                        best = Some((c, v, live));
                    }
                }
            }
            let Some((pc, pv, _)) = best else { continue };
            let pivot_row = rows[i].take().expect("present");
            rank += 1;
            progress = true;
            col_alive[pc as usize] = false;
            let others: Vec<u32> = std::mem::take(&mut cols[pc as usize]);
            for &j in &others {
                let j = j as usize;
                if j == i {
                    continue;
                }
                let Some(target) = rows[j].as_mut() else { continue };
                let Some(pos) = target.iter().position(|&(c, _)| c == pc) else { continue };
                let f = target[pos].1 * pv; // since pv = ±1, f = a / pv
                match axpy(target, &pivot_row, f) {
                    Some(new_cols) => {
                        for c in new_cols {
                            cols[c as usize].push(j as u32);
                        }
                    }
                    None => {
                        overflow = true;
                    }
                }
                if target.is_empty() {
                    rows[j] = None;
                }
            }
            // Column operations clear the rest of the pivot row without
            // touching other rows, so the pivot row is simply dropped.
            for &(c, _) in &pivot_row {
                if c != pc {
                    let list = &mut cols[c as usize];
                    if let Some(p) = list.iter().position(|&r| r as usize == i) {
                        list.swap_remove(p);
                    }
                }
            }
            if overflow {
                break;
            }
        }
        // drop stale column entries
        for (c, list) in cols.iter_mut().enumerate() {
            if col_alive[c] {
                list.retain(|&r| rows[r as usize].as_ref().is_some_and(|row| row.iter().any(|&(cc, _)| cc as usize == c)));
                list.sort_unstable();
                list.dedup();
            }
        }
    }
    // Dense remainder.
    let rest: Vec<&Vec<(u32, i64)>> = rows.iter().flatten().collect();
    if rest.is_empty() && !overflow {
        return Reduced { rank, torsion: Vec::new() };
    }
    let mut used: Vec<u32> = rest.iter().flat_map(|r| r.iter().map(|&(c, _)| c)).collect();
    used.sort_unstable();
    used.dedup();
    let pos: HashMap<u32, usize> = used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut m = IntegerMatrix::zeros(rest.len(), used.len());
    for (i, r) in rest.iter().enumerate() {
        for &(c, v) in r.iter() {
            m.entries[i][pos[&c]] = BigInt::from(v);
        }
    }
    assert!(!overflow, "entry growth exceeded i64 during sparse elimination");
    let snf = smith_normal_form(&m);
    let torsion = snf.divisors.iter().filter(|d| !d.is_one()).cloned().collect();
    Reduced { rank: rank + snf.rank, torsion }
}

/// `target -= f * src` on sorted sparse rows. Returns the columns that became
/// newly nonzero, or `None` on overflow.
fn axpy(target: &mut Vec<(u32, i64)>, src: &[(u32, i64)], f: i64) -> Option<Vec<u32>> {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let mut fresh = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < src.len() {
        let ca = target.get(a).map(|x| x.0);
        let cb = src.get(b).map(|x| x.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = target[a].1.checked_sub(f.checked_mul(src[b].1)?)?;
                if v != 0 {
                    out.push((x, v));
                }
                a += 1;
                b += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(target[a]);
                a += 1;
            }
            (Some(_), None) => {
                out.push(target[a]);
                a += 1;
            }
            (_, Some(y)) => {
                let v = f.checked_mul(src[b].1)?.checked_neg()?;
                out.push((y, v));
                fresh.push(y);
                b += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    *target = out;
    Some(fresh)
}

/// Boundary map `C_k → C_{k−1}` as sparse rows indexed by `k`-simplices.
fn boundary_rows(cx: &SimplicialComplex, k: usize) -> Vec<Vec<(u32, i64)>> {
    let faces = cx.simplices(k - 1);
    let index: HashMap<&[u32], u32> = faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i as u32)).collect();
    cx.simplices(k)
        .iter()
        .map(|s| {
            let mut row: Vec<(u32, i64)> = (0..s.len())
                .map(|skip| {
                    let f: Vec<u32> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    let sign = if skip % 2 == 0 { 1 } else { -1 };
                    (index[f.as_slice()], sign)
                })
                .collect();
            row.sort_unstable();
            row
        })
        .collect()
}

/// Integral simplicial homology in degrees `0..=dim`.
pub fn homology(cx: &SimplicialComplex) -> Homology {
    let top = cx.dim();
    if top < 0 {
        return Homology { betti: Vec::new(), torsion: Vec::new() };
    }
    let top = top as usize;
    // reduced[k] describes ∂_k for k ≥ 1
    let mut reduced: Vec<Option<Reduced>> = Vec::with_capacity(top + 2);
    reduced.push(None);
    for k in 1..=top {
        let rows = boundary_rows(cx, k);
        reduced.push(Some(reduce_sparse(rows, cx.simplices(k - 1).len())));
    }
    let rank = |k: usize| reduced.get(k).and_then(|r| r.as_ref()).map_or(0, |r| r.rank);
    let mut betti = Vec::with_capacity(top + 1);
    let mut torsion = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let n = cx.simplices(k).len();
        betti.push(n - rank(k) - rank(k + 1));
        let t = reduced
            .get(k + 1)
            .and_then(|r| r.as_ref())
            .map(|r| r.torsion.iter().map(|d| d.abs().to_string()).collect())
            .unwrap_or_default();
        torsion.push(t);
    }
    Homology { betti, torsion }
}

/// Order complex of a finite poset given by its strict "below" lists over
/// elements `0..n`: one simplex per chain.
pub fn order_complex(below: &[Vec<u32>]) -> SimplicialComplex {
    // Chains ending at each element; `below[x]` may only list elements with
    // smaller index, so index order is a linear extension.
    let n = below.len();
    let mut ending: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n);
    for x in 0..n {
        let mut chains = vec![vec![x as u32]];
        for &y in &below[x] {
            debug_assert!((y as usize) < x);
            for c in &ending[y as usize] {
                let mut ch = Vec::with_capacity(c.len() + 1);
                ch.extend_from_slice(c);
                ch.push(x as u32);
                chains.push(ch);
            }
        }
        ending.push(chains);
    }
    let mut by_dim: Vec<Vec<Vec<u32>>> = Vec::new();
    for chains in ending {
        for c in chains {
            let k = c.len() - 1;
            while by_dim.len() <= k {
                by_dim.push(Vec::new());
            }
            by_dim[k].push(c);
        }
    }
    SimplicialComplex::from_closed(by_dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary_of_simplex(n: u32) -> SimplicialComplex {
        let all: Vec<u32> = (0..=n).collect();
        SimplicialComplex::from_simplices((0..=n).map(|skip| all.iter().copied().filter(|&v| v != skip).collect()))
    }

    #[test]
    fn point_and_spheres() {
        let pt = SimplicialComplex::from_simplices(vec![vec![7]]);
        assert_eq!(homology(&pt).betti, vec![1]);
        let s2 = boundary_of_simplex(3);
        assert!(homology(&s2).is_free_with(&[1, 0, 1]));
        assert!(s2.is_closed_pseudomanifold(2));
        assert_eq!(s2.euler_characteristic(), 2);
        let s1 = boundary_of_simplex(2);
        assert!(homology(&s1).is_free_with(&[1, 1]));
    }

    #[test]
    fn projective_plane_has_torsion() {
        // six-vertex triangulation of RP²
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        let cx = SimplicialComplex::from_simplices(tris.iter().map(|t| t.to_vec()));
        let h = homology(&cx);
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion[1], vec!["2".to_string()]);
    }

    #[test]
    fn torus_and_components() {
        // 7-vertex torus
        let mut tris = Vec::new();
        for i in 0..7u32 {
            tris.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            tris.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        let t = SimplicialComplex::from_simplices(tris);
        assert!(homology(&t).is_free_with(&[1, 2, 1]));
        let two = SimplicialComplex::from_simplices(vec![vec![0, 1], vec![5, 6]]);
        assert_eq!(two.components(), vec![vec![0, 1], vec![5, 6]]);
        assert_eq!(homology(&two).betti, vec![2, 0]);
    }

    #[test]
    fn order_complex_of_a_chain_is_a_simplex() {
        let below = vec![vec![], vec![0], vec![0, 1]];
        let cx = order_complex(&below);
        assert_eq!(cx.f_vector(), vec![3, 3, 1]);
        assert!(homology(&cx).is_free_with(&[1]));
    }
}
