//! Smooth pairs, the discriminant, the chart graph `Γ`, primary loops and
//! their monodromy, local and global monodromy groups, and the dual check.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::lattice::{hermite_normal_form, saturated_perp_basis, smith_normal_form, IntegerMatrix};
use crate::geometry::linalg::{coordinates, rank, solve_in_row_space};
use crate::geometry::{dot, fmt_q, qvec, sub, to_i64, zvec_to_q, QVec, Rational};
use crate::homology::{homology, order_complex, Homology, SimplicialComplex};
use crate::nef::Check;
use crate::sphere::{Pair, Side, SphereComplex};

/// `dim σ⁽ⁱ⁾ · dim τ⁽ⁱ⁾ = 0` for every `i`.
pub fn is_smooth(m: &Side, n: &Side, p: Pair) -> bool {
    m.slice_dims(p.sigma).iter().zip(n.slice_dims(p.tau)).all(|(a, b)| a * b == 0)
}

/// The discriminant `D`: the full subcomplex of `bsd(Σ)` on non-smooth pairs.
#[derive(Debug, Clone)]
pub struct Discriminant {
    pub smooth: Vec<bool>,
    pub complex: SimplicialComplex,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Component {
    /// `bsd(Σ)` vertices, i.e. pair ids.
    pub vertices: Vec<u32>,
    pub homology: Homology,
}

impl Discriminant {
    pub fn new(m: &Side, n: &Side, sigma: &SphereComplex) -> Self {
        let smooth: Vec<bool> = sigma.pairs.iter().map(|&p| is_smooth(m, n, p)).collect();
        let complex = sigma.bsd.full_subcomplex(|v| !smooth[v as usize]);
        let components = complex
            .components()
            .into_iter()
            .map(|vs| {
                let set: BTreeSet<u32> = vs.iter().copied().collect();
                let h = homology(&complex.full_subcomplex(|v| set.contains(&v)));
                Component { vertices: vs, homology: h }
            })
            .collect();
        Discriminant { smooth, complex, components }
    }

    pub fn non_smooth(&self) -> Vec<usize> {
        (0..self.smooth.len()).filter(|&i| !self.smooth[i]).collect()
    }

    pub fn component_of(&self, pair: usize) -> Option<usize> {
        self.components.iter().position(|c| c.vertices.binary_search(&(pair as u32)).is_ok())
    }
}

/// Homology of `Σ ∖ D` computed two ways: on the complement of the open star
/// of `D` in the second barycentric subdivision, and on the full subcomplex
/// of `bsd(Σ)` spanned by smooth vertices.
#[derive(Debug, Clone, Serialize)]
pub struct Complement {
    pub second_subdivision_size: Vec<usize>,
    pub homology: Homology,
    pub smooth_subcomplex_homology: Homology,
}

pub fn complement(sigma: &SphereComplex, disc: &Discriminant) -> Complement {
    // vertices of bsd² outside the open star of D'' are the bsd-simplices not
    // contained in D; they form an upward closed set whose order complex is
    // the complement
    let bsd = &sigma.bsd;
    let top = bsd.dim().max(0) as usize;
    let mut ids: HashMap<&[u32], u32> = HashMap::new();
    let mut elems: Vec<&[u32]> = Vec::new();
    for k in 0..=top {
        for s in bsd.simplices(k) {
            if s.iter().any(|&v| disc.smooth[v as usize]) {
                ids.insert(s.as_slice(), elems.len() as u32);
                elems.push(s.as_slice());
            }
        }
    }
    let below: Vec<Vec<u32>> = elems
        .iter()
        .map(|s| {
            let mut out = Vec::new();
            let n = s.len();
            // proper nonempty faces
            for mask in 1..(1u32 << n) - 1 {
                let f: Vec<u32> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                if let Some(&id) = ids.get(f.as_slice()) {
                    out.push(id);
                }
            }
            out.sort_unstable();
            out
        })
        .collect();
    let second = order_complex(&below);
    let smooth_part = bsd.full_subcomplex(|v| disc.smooth[v as usize]);
    Complement {
        second_subdivision_size: second.f_vector(),
        homology: homology(&second),
        smooth_subcomplex_homology: homology(&smooth_part),
    }
}

/// The bipartite graph on minimal transversal cells of both sides.
#[derive(Debug, Clone)]
pub struct ChartGraph {
    pub sigmas: Vec<usize>,
    pub taus: Vec<usize>,
    /// Adjacency from each `σ` node (poset position) to `τ` nodes.
    pub edges: BTreeMap<usize, Vec<usize>>,
}

impl ChartGraph {
    /// The constant loop `(σ τ σ τ)` at every edge.
    pub fn edge_loops(&self) -> Vec<Loop> {
        self.edges.iter().flat_map(|(&s, ts)| ts.iter().map(move |&t| Loop { sigma0: s, tau0: t, sigma1: s, tau1: t })).collect()
    }

    pub fn new(m: &Side, n: &Side, sigma: &SphereComplex) -> Self {
        let mut edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &s in &m.minimal {
            let adj: Vec<usize> = n.minimal.iter().copied().filter(|&t| sigma.find(Pair { sigma: s, tau: t }).is_some()).collect();
            edges.insert(s, adj);
        }
        ChartGraph { sigmas: m.minimal.clone(), taus: n.minimal.clone(), edges }
    }

    pub fn adjacent(&self, s: usize, t: usize) -> bool {
        self.edges.get(&s).is_some_and(|a| a.binary_search(&t).is_ok())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|a| a.len()).sum()
    }

    /// An edge exists iff the charts `U_σ` and `V_τ` meet, i.e. some pair
    /// `(σ′, τ′)` has `σ ≤ σ′` and `τ ≤ τ′`.
    pub fn check_against_charts(&self, m: &Side, n: &Side, sigma: &SphereComplex) -> Check {
        for &s in &self.sigmas {
            for &t in &self.taus {
                let meet = sigma.pairs.iter().any(|p| m.is_face(s, p.sigma) && n.is_face(t, p.tau));
                if meet != self.adjacent(s, t) {
                    return Check::new("graph_edges_are_chart_overlaps", false, format!("σ {s}, τ {t}"));
                }
            }
        }
        let covered = sigma.pairs.iter().all(|p| self.sigmas.iter().any(|&s| m.is_face(s, p.sigma)))
            && sigma.pairs.iter().all(|p| self.taus.iter().any(|&t| n.is_face(t, p.tau)));
        Check::new(
            "graph_edges_are_chart_overlaps",
            covered,
            format!("{} + {} nodes, {} edges; charts cover bsd(Σ)", self.sigmas.len(), self.taus.len(), self.edge_count()),
        )
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.sigmas.first() else { return true };
        let (seen_s, seen_t) = self.bfs(start);
        seen_s.len() == self.sigmas.len() && seen_t.len() == self.taus.len()
    }

    fn tau_neighbors(&self, t: usize) -> Vec<usize> {
        self.sigmas.iter().copied().filter(|&s| self.adjacent(s, t)).collect()
    }

    /// Breadth-first search from `start`; returns the parent links
    /// `σ ↦ (τ, previous σ)` of the spanning tree and the reached `τ`s.
    fn bfs(&self, start: usize) -> (BTreeMap<usize, Option<(usize, usize)>>, BTreeSet<usize>) {
        let mut parent: BTreeMap<usize, Option<(usize, usize)>> = BTreeMap::new();
        let mut seen_t = BTreeSet::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for &t in &self.edges[&s] {
                if !seen_t.insert(t) {
                    continue;
                }
                for s2 in self.tau_neighbors(t) {
                    if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(s2) {
                        e.insert(Some((t, s)));
                        queue.push_back(s2);
                    }
                }
            }
        }
        (parent, seen_t)
    }
}

/// A primary loop `(σ₀ τ₀ σ₁ τ₁)` by poset positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Loop {
    pub sigma0: usize,
    pub tau0: usize,
    pub sigma1: usize,
    pub tau1: usize,
}

impl Loop {
    pub fn is_degenerate(&self) -> bool {
        self.sigma0 == self.sigma1 || self.tau0 == self.tau1
    }
}

/// Vertices of minimal cells, one per part, in part order.
fn minimal_vertices(side: &Side, k: usize) -> Vec<QVec> {
    (0..side.r())
        .map(|j| {
            let s = side.slice(k, j);
            debug_assert_eq!(s.len(), 1);
            qvec(&side.sub.points[s[0]])
        })
        .collect()
}

fn conv_is_cell(side: &Side, a: usize, b: usize) -> bool {
    let mut pts: Vec<usize> = side.vertices(a).iter().chain(side.vertices(b)).copied().collect();
    pts.sort();
    pts.dedup();
    side.subdivision_cell_of_hull(&pts).is_some()
}

/// All primary loops in canonical orientation `σ₀ ≤ σ₁`, `τ₀ ≤ τ₁`,
/// excluding the two-node loops `σ₀ = σ₁`, `τ₀ = τ₁`.
pub fn primary_loops(graph: &ChartGraph, m: &Side, n: &Side) -> Vec<Loop> {
    let mut sig_pairs = Vec::new();
    for (i, &a) in graph.sigmas.iter().enumerate() {
        for &b in &graph.sigmas[i..] {
            if a == b || conv_is_cell(m, a, b) {
                sig_pairs.push((a, b));
            }
        }
    }
    let mut tau_ok: HashMap<(usize, usize), bool> = HashMap::new();
    let mut out = Vec::new();
    for (a, b) in sig_pairs {
        let common: Vec<usize> = graph.edges[&a].iter().copied().filter(|&t| graph.adjacent(b, t)).collect();
        for (i, &t0) in common.iter().enumerate() {
            for &t1 in &common[i..] {
                if a == b && t0 == t1 {
                    continue;
                }
                let ok = t0 == t1 || *tau_ok.entry((t0, t1)).or_insert_with(|| conv_is_cell(n, t0, t1));
                if ok {
                    out.push(Loop { sigma0: a, tau0: t0, sigma1: b, tau1: t1 });
                }
            }
        }
    }
    out.sort();
    out
}

/// Chart data on one side of a loop computation: the `σ` vertices with
/// their weights and the `τ` vertices.
struct Charts<'a> {
    m: &'a Side,
    mv: HashMap<usize, Vec<QVec>>,
    nv: HashMap<usize, Vec<QVec>>,
}

impl<'a> Charts<'a> {
    fn new(m: &'a Side, n: &'a Side) -> Self {
        let mv = m.minimal.iter().map(|&k| (k, minimal_vertices(m, k))).collect();
        let nv = n.minimal.iter().map(|&k| (k, minimal_vertices(n, k))).collect();
        Charts { m, mv, nv }
    }

    fn weight(&self, v: &[Rational]) -> Rational {
        let p: Vec<i64> = v.iter().map(|x| i64::try_from(x.to_integer()).expect("lattice point")).collect();
        self.m.sub.weights.value(&p)
    }

    /// Integral basis of `σ^⊥` as rational row vectors.
    fn basis(&self, s: usize) -> Vec<QVec> {
        let b = saturated_perp_basis(&self.mv[&s], self.m.dim());
        b.entries.iter().map(|r| zvec_to_q(r)).collect()
    }

    /// Linear part of the change of chart `σ → σ′` through `V_τ`:
    /// `x ↦ x − Σⱼ ⟨σ′⁽ʲ⁾, x⟩ τ⁽ʲ⁾`.
    fn transport_linear(&self, s2: usize, t: usize, x: &[Rational]) -> QVec {
        let mut out = x.to_vec();
        for (mj, tj) in self.mv[&s2].iter().zip(&self.nv[&t]) {
            let c = dot(mj, x);
            for (o, t) in out.iter_mut().zip(tj) {
                *o -= &c * t;
            }
        }
        out
    }

    /// The affine change of chart `x ↦ x − Σⱼ [⟨σ′⁽ʲ⁾, x⟩ − ω(σ′⁽ʲ⁾)] τ⁽ʲ⁾`.
    fn transport_affine(&self, s2: usize, t: usize, x: &[Rational]) -> QVec {
        let mut out = x.to_vec();
        for (mj, tj) in self.mv[&s2].iter().zip(&self.nv[&t]) {
            let c = dot(mj, x) - self.weight(mj);
            for (o, t) in out.iter_mut().zip(tj) {
                *o -= &c * t;
            }
        }
        out
    }

    /// `Lin(T)(x) = x + Σⱼ ⟨σ₁⁽ʲ⁾, x⟩ (τ₁⁽ʲ⁾ − τ₀⁽ʲ⁾)`.
    fn loop_linear(&self, l: &Loop, x: &[Rational]) -> QVec {
        let mut out = x.to_vec();
        for j in 0..self.m.r() {
            let c = dot(&self.mv[&l.sigma1][j], x);
            let diff = sub(&self.nv[&l.tau1][j], &self.nv[&l.tau0][j]);
            for (o, t) in out.iter_mut().zip(&diff) {
                *o += &c * t;
            }
        }
        out
    }

    fn loop_affine(&self, l: &Loop, x: &[Rational]) -> QVec {
        let mut out = x.to_vec();
        for j in 0..self.m.r() {
            let m1 = &self.mv[&l.sigma1][j];
            let c = dot(m1, x) - self.weight(m1);
            let diff = sub(&self.nv[&l.tau1][j], &self.nv[&l.tau0][j]);
            for (o, t) in out.iter_mut().zip(&diff) {
                *o += &c * t;
            }
        }
        out
    }

    /// Base point of `aff F_σ̄` in the row space of the vertex matrix.
    fn base_point(&self, s: usize) -> Result<QVec> {
        let rows = &self.mv[&s];
        let rhs: Vec<Rational> = rows.iter().map(|v| self.weight(v)).collect();
        solve_in_row_space(rows, &rhs, self.m.dim())
            .ok_or_else(|| Error::Internal("minimal cell vertices are dependent".into()))
    }
}

/// Matrix of a linear map on `σ^⊥` in the given basis; columns are images of
/// basis vectors.
fn matrix_in_basis(basis: &[QVec], f: impl Fn(&[Rational]) -> QVec) -> Result<Vec<Vec<Rational>>> {
    let k = basis.len();
    let mut m = vec![vec![Rational::zero(); k]; k];
    for (c, b) in basis.iter().enumerate() {
        let img = f(b);
        let coords = coordinates(basis, &img).ok_or_else(|| Error::Internal("image leaves the tangent space".into()))?;
        for r in 0..k {
            m[r][c] = coords[r].clone();
        }
    }
    Ok(m)
}

fn to_int_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| r.iter().map(|x| if x.is_integer() { i64::try_from(x.to_integer()).ok() } else { None }).collect())
        .collect()
}

fn mat_mul_i(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let k = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0i64; k]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate() {
            for j in 0..k {
                out[i][j] += a[i][l] * bl[j];
            }
        }
    }
    out
}

fn minus_identity(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, &x)| x - (i == j) as i64).collect()).collect()
}

fn is_zero_i(a: &[Vec<i64>]) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

fn det_i(a: &[Vec<i64>]) -> BigInt {
    let rows: Vec<QVec> = a.iter().map(|r| qvec(r)).collect();
    crate::geometry::linalg::determinant(&rows).to_integer()
}

/// Affine monodromy in the canonical basis of `σ₀^⊥`.
#[derive(Debug, Clone, Serialize)]
pub struct AffineMonodromy {
    #[serde(rename = "loop")]
    pub lp: Loop,
    pub degenerate: bool,
    pub basis: Vec<Vec<String>>,
    pub base_point: Vec<String>,
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<String>,
    pub trivial: bool,
}

fn monodromy_of(ch: &Charts, l: &Loop) -> Result<(AffineMonodromy, Vec<Vec<i64>>)> {
    let basis = ch.basis(l.sigma0);
    let lin = matrix_in_basis(&basis, |x| ch.loop_linear(l, x))?;
    let lin = to_int_matrix(&lin).ok_or_else(|| Error::Falsified("non-integral monodromy".into()))?;
    let x0 = ch.base_point(l.sigma0)?;
    let moved = ch.loop_affine(l, &x0);
    let shift = coordinates(&basis, &sub(&moved, &x0)).ok_or_else(|| Error::Internal("translation leaves the chart".into()))?;
    // dual route: the composition of the two changes of chart
    let via = ch.transport_affine(l.sigma0, l.tau1, &ch.transport_affine(l.sigma1, l.tau0, &x0));
    if via != moved {
        return Err(Error::Falsified(format!("loop {l:?}: chart composition disagrees with the monodromy formula")));
    }
    for b in &basis {
        let comp = ch.transport_linear(l.sigma0, l.tau1, &ch.transport_linear(l.sigma1, l.tau0, b));
        if comp != ch.loop_linear(l, b) {
            return Err(Error::Falsified(format!("loop {l:?}: linear parts disagree")));
        }
    }
    let trivial = lin.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == (i == j) as i64))
        && shift.iter().all(|x| x.is_zero());
    let report = AffineMonodromy {
        lp: *l,
        degenerate: l.is_degenerate(),
        basis: basis.iter().map(|b| b.iter().map(fmt_q).collect()).collect(),
        base_point: x0.iter().map(fmt_q).collect(),
        linear: lin.clone(),
        translation: shift.iter().map(fmt_q).collect(),
        trivial,
    };
    Ok((report, lin))
}

/// Result of the three-way equivalence test on one non-degenerate loop.
#[derive(Debug, Clone, Serialize)]
pub struct CorollaryRow {
    #[serde(rename = "loop")]
    pub lp: Loop,
    pub linear_trivial: bool,
    pub smooth_pair_contains: bool,
    /// Every part has `σ₀⁽ʲ⁾ = σ₁⁽ʲ⁾` or `τ₀⁽ʲ⁾ = τ₁⁽ʲ⁾`.
    pub slices_agree: bool,
    /// Some part has `σ₀⁽ʲ⁾ ≠ σ₁⁽ʲ⁾` and `τ₀⁽ʲ⁾ ≠ τ₁⁽ʲ⁾`.
    pub literal_condition: bool,
}

/// Local monodromy data at a non-smooth vertex.
#[derive(Debug, Clone, Serialize)]
pub struct LocalGroup {
    pub pair: usize,
    pub loops: usize,
    pub primary_loops: usize,
    pub w_dim: usize,
    pub expected_w_dim: usize,
    pub image_in_w: bool,
    pub vanishes_on_w: bool,
    pub commute: bool,
    pub nontrivial: usize,
    /// Divisors of the span of the local logarithms `Lin − id`.
    pub divisors: Vec<String>,
}

impl LocalGroup {
    pub fn passed(&self) -> bool {
        self.w_dim == self.expected_w_dim && self.image_in_w && self.vanishes_on_w && self.commute
    }
}

/// Global monodromy: loops transported to a base chart.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalGroup {
    pub base: usize,
    pub generators: usize,
    pub distinct_generators: Vec<Vec<Vec<i64>>>,
    pub commute: bool,
    pub unipotent: bool,
    pub log_rank: usize,
    /// Divisors of the span of the transported logarithms `Lin − id`.
    pub log_divisors: Vec<String>,
    /// Divisors of the span closed under conjugation by the group; this
    /// does not depend on the base chart or the spanning tree.
    pub invariant_divisors: Vec<String>,
    pub alternate_base: usize,
    pub alternate_base_invariant_divisors: Vec<String>,
}

/// Everything computed on the monodromy side of one run.
#[derive(Debug, Clone)]
pub struct MonodromyAnalysis {
    pub graph: ChartGraph,
    pub loops: Vec<AffineMonodromy>,
    pub corollary: Vec<CorollaryRow>,
    pub local: Vec<LocalGroup>,
    /// For each component of `D`, the distinct local divisor lists at its
    /// vertices.
    pub component_divisors: Vec<Vec<Vec<String>>>,
    pub global: Option<GlobalGroup>,
    pub checks: Vec<Check>,
}

impl MonodromyAnalysis {
    pub fn new(m: &Side, n: &Side, sigma: &SphereComplex, disc: &Discriminant) -> Result<Self> {
        let ch = Charts::new(m, n);
        let graph = ChartGraph::new(m, n, sigma);
        let mut checks = vec![graph.check_against_charts(m, n, sigma)];
        let loops = primary_loops(&graph, m, n);
        let mut reports = Vec::with_capacity(loops.len());
        let mut lins = Vec::with_capacity(loops.len());
        let mut unipotent = true;
        for l in &loops {
            let (rep, lin) = monodromy_of(&ch, l)?;
            let nmat = minus_identity(&lin);
            if !is_zero_i(&mat_mul_i(&nmat, &nmat)) || !det_i(&lin).is_one() {
                unipotent = false;
            }
            reports.push(rep);
            lins.push(lin);
        }
        checks.push(Check::new(
            "loop_monodromy_unipotent",
            unipotent,
            format!("{} primary loops; each Lin has det 1 and (Lin − id)² = 0", loops.len()),
        ));
        let degenerate_trivial = reports.iter().filter(|r| r.degenerate).all(|r| r.trivial);
        checks.push(Check::new(
            "degenerate_loops_trivial",
            degenerate_trivial,
            format!("{} degenerate loops", reports.iter().filter(|r| r.degenerate).count()),
        ));

        let corollary = corollary_rows(m, n, sigma, disc, &loops, &lins);
        let agree = corollary
            .iter()
            .all(|c| c.linear_trivial == c.smooth_pair_contains && c.smooth_pair_contains == c.slices_agree);
        checks.push(Check::new(
            "non_smooth_corollary_equivalence",
            agree,
            format!("{} non-degenerate loops", corollary.len()),
        ));

        let local = local_groups(&ch, m, n, sigma, disc)?;
        checks.push(Check::new(
            "local_monodromy_block_form",
            local.iter().all(|g| g.passed()),
            format!("{} non-smooth vertices", local.len()),
        ));
        let component_divisors = disc
            .components
            .iter()
            .map(|c| {
                let set: BTreeSet<Vec<String>> = local
                    .iter()
                    .filter(|g| c.vertices.binary_search(&(g.pair as u32)).is_ok())
                    .map(|g| g.divisors.clone())
                    .collect();
                set.into_iter().collect()
            })
            .collect();
        let smooth_ext = smooth_extension(&ch, m, n, sigma, disc)?;
        checks.push(smooth_ext);

        let global = if graph.is_connected() && !graph.sigmas.is_empty() {
            Some(global_group(&ch, &graph, &loops)?)
        } else {
            None
        };
        if let Some(g) = &global {
            checks.push(Check::new(
                "global_generators_unipotent",
                g.unipotent,
                format!("{} transported loops; commuting: {}", g.generators, g.commute),
            ));
            checks.push(Check::new(
                "global_divisors_base_independent",
                g.invariant_divisors == g.alternate_base_invariant_divisors,
                format!("bases {} and {}", g.base, g.alternate_base),
            ));
        }
        Ok(MonodromyAnalysis { graph, loops: reports, corollary, local, component_divisors, global, checks })
    }
}

fn corollary_rows(
    m: &Side,
    n: &Side,
    sigma: &SphereComplex,
    disc: &Discriminant,
    loops: &[Loop],
    lins: &[Vec<Vec<i64>>],
) -> Vec<CorollaryRow> {
    let r = m.r();
    loops
        .iter()
        .zip(lins)
        .filter(|(l, _)| !l.is_degenerate())
        .map(|(l, lin)| {
            let linear_trivial = is_zero_i(&minus_identity(lin));
            let smooth_pair_contains = sigma.pairs.iter().enumerate().any(|(i, p)| {
                disc.smooth[i]
                    && m.is_face(l.sigma0, p.sigma)
                    && m.is_face(l.sigma1, p.sigma)
                    && n.is_face(l.tau0, p.tau)
                    && n.is_face(l.tau1, p.tau)
            });
            let differs = |side: &Side, a: usize, b: usize, j: usize| side.slice(a, j) != side.slice(b, j);
            let slices_agree = (0..r).all(|j| !differs(m, l.sigma0, l.sigma1, j) || !differs(n, l.tau0, l.tau1, j));
            let literal_condition =
                (0..r).any(|j| differs(m, l.sigma0, l.sigma1, j) && differs(n, l.tau0, l.tau1, j));
            CorollaryRow { lp: *l, linear_trivial, smooth_pair_contains, slices_agree, literal_condition }
        })
        .collect()
}

/// Minimal elements of the side lying below `k`.
fn minimal_below(side: &Side, k: usize) -> Vec<usize> {
    side.minimal.iter().copied().filter(|&s| side.is_face(s, k)).collect()
}

fn local_groups(
    ch: &Charts,
    m: &Side,
    n: &Side,
    sigma: &SphereComplex,
    disc: &Discriminant,
) -> Result<Vec<LocalGroup>> {
    let r = m.r();
    let d = m.dim();
    let mut out = Vec::new();
    for pid in disc.non_smooth() {
        let p = sigma.pairs[pid];
        let ms = minimal_below(m, p.sigma);
        let ts = minimal_below(n, p.tau);
        let s0 = ms[0];
        // W_τ: span of the differences of slice vertices of minimal τ's
        let mut w: Vec<QVec> = Vec::new();
        for &a in &ts {
            for &b in &ts {
                if a < b {
                    for j in 0..r {
                        w.push(sub(&ch.nv[&a][j], &ch.nv[&b][j]));
                    }
                }
            }
        }
        let w_dim = rank(&w, d);
        let expected_w_dim = n.cell_dim(p.tau) + 1 - r;
        let basis = ch.basis(s0);
        let mut nmats: Vec<Vec<Vec<i64>>> = Vec::new();
        let mut image_in_w = true;
        let mut vanishes_on_w = true;
        let mut count = 0;
        let mut primary = 0;
        for &sk in &ms {
            if sk == s0 {
                continue;
            }
            for &tp in &ts {
                for &tq in &ts {
                    if tp == tq {
                        continue;
                    }
                    let l = Loop { sigma0: s0, tau0: tp, sigma1: sk, tau1: tq };
                    count += 1;
                    if conv_is_cell(m, s0, sk) && conv_is_cell(n, tp, tq) {
                        primary += 1;
                    }
                    let lin = matrix_in_basis(&basis, |x| ch.loop_linear(&l, x))?;
                    let lin = to_int_matrix(&lin).ok_or_else(|| Error::Falsified("non-integral monodromy".into()))?;
                    // N applied to ambient basis vectors lands in W
                    for b in &basis {
                        let nb = sub(&ch.loop_linear(&l, b), b);
                        let mut ext = w.clone();
                        ext.push(nb);
                        if rank(&ext, d) != w_dim {
                            image_in_w = false;
                        }
                    }
                    for v in &w {
                        if &ch.loop_linear(&l, v) != v {
                            vanishes_on_w = false;
                        }
                    }
                    nmats.push(minus_identity(&lin));
                }
            }
        }
        // W lies in the tangent space of σ₀
        if w.iter().any(|v| ch.mv[&s0].iter().any(|m0| !dot(m0, v).is_zero())) {
            image_in_w = false;
        }
        let commute = nmats.iter().enumerate().all(|(i, a)| {
            nmats[i + 1..].iter().all(|b| mat_mul_i(a, b) == mat_mul_i(b, a))
        });
        let nontrivial = nmats.iter().filter(|x| !is_zero_i(x)).count();
        let divisors = log_divisors(&nmats).1;
        out.push(LocalGroup {
            divisors,
            pair: pid,
            loops: count,
            primary_loops: primary,
            w_dim,
            expected_w_dim,
            image_in_w,
            vanishes_on_w,
            commute,
            nontrivial,
        });
    }
    Ok(out)
}

/// Around a smooth vertex with both cells non-minimal every loop of the
/// star has trivial linear part.
fn smooth_extension(ch: &Charts, m: &Side, n: &Side, sigma: &SphereComplex, disc: &Discriminant) -> Result<Check> {
    let mut tested = 0;
    for (pid, p) in sigma.pairs.iter().enumerate() {
        if !disc.smooth[pid] {
            continue;
        }
        let ms = minimal_below(m, p.sigma);
        let ts = minimal_below(n, p.tau);
        if ms.len() < 2 || ts.len() < 2 {
            continue;
        }
        let basis = ch.basis(ms[0]);
        for &sk in &ms[1..] {
            for &tp in &ts {
                for &tq in &ts {
                    if tp == tq {
                        continue;
                    }
                    let l = Loop { sigma0: ms[0], tau0: tp, sigma1: sk, tau1: tq };
                    tested += 1;
                    if basis.iter().any(|b| &ch.loop_linear(&l, b) != b) {
                        return Ok(Check::new(
                            "smooth_vertices_have_trivial_monodromy",
                            false,
                            format!("pair {pid}, loop {l:?}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(Check::new("smooth_vertices_have_trivial_monodromy", true, format!("{tested} loops")))
}

fn flatten(ns: &[Vec<Vec<i64>>]) -> IntegerMatrix {
    let rows: Vec<Vec<i64>> = ns.iter().map(|n| n.iter().flatten().copied().collect()).collect();
    IntegerMatrix::from_i64(&rows)
}

/// Nonzero rows of the Hermite form: a canonical basis of the row lattice.
fn lattice_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let (h, _) = hermite_normal_form(m);
    IntegerMatrix::from_rows(m.cols, h.entries.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect())
}

fn unflatten(row: &[BigInt], k: usize) -> IntegerMatrix {
    IntegerMatrix::from_rows(k, row.chunks(k).map(|c| c.to_vec()).collect())
}

/// The smallest lattice of `k × k` matrices containing `logs` and stable
/// under conjugation by every element of `group` and its inverse.
fn conjugation_closure(group: &[Vec<Vec<i64>>], logs: &[Vec<Vec<i64>>], k: usize) -> IntegerMatrix {
    let mut conj: Vec<(IntegerMatrix, IntegerMatrix)> = Vec::new();
    for g in group {
        let gq: Vec<QVec> = g.iter().map(|r| qvec(r)).collect();
        let inv = crate::geometry::linalg::inverse(&gq).expect("monodromy is invertible");
        let inv: Vec<Vec<i64>> = inv.iter().map(|r| to_i64(r).expect("integral inverse")).collect();
        let (g, inv) = (IntegerMatrix::from_i64(g), IntegerMatrix::from_i64(&inv));
        conj.push((g.clone(), inv.clone()));
        conj.push((inv, g));
    }
    let mut basis = lattice_basis(&flatten(logs));
    loop {
        let mut rows = basis.entries.clone();
        for r in &basis.entries {
            let n = unflatten(r, k);
            for (g, inv) in &conj {
                rows.push(g.mul(&n).mul(inv).entries.concat());
            }
        }
        let next = lattice_basis(&IntegerMatrix::from_rows(k * k, rows));
        if next == basis {
            return basis;
        }
        basis = next;
    }
}

fn divisors_of(m: &IntegerMatrix) -> Vec<String> {
    if m.rows == 0 {
        return Vec::new();
    }
    smith_normal_form(m).divisors.iter().map(|x| x.to_string()).collect()
}

fn log_divisors(ns: &[Vec<Vec<i64>>]) -> (usize, Vec<String>) {
    if ns.is_empty() {
        return (0, Vec::new());
    }
    let snf = smith_normal_form(&flatten(ns));
    (snf.rank, snf.divisors.iter().map(|x| x.to_string()).collect())
}

/// Linear parts of all primary loops conjugated into the chart of `base`
/// along a breadth-first spanning tree of `Γ`.
fn transported(ch: &Charts, graph: &ChartGraph, loops: &[Loop], base: usize) -> Result<Vec<(Loop, Vec<Vec<i64>>)>> {
    let (parent, _) = graph.bfs(base);
    let path_to = |s: usize| -> Vec<(usize, usize)> {
        // steps (τ, σ′) from base to s
        let mut steps = Vec::new();
        let mut cur = s;
        while let Some(Some((t, prev))) = parent.get(&cur) {
            steps.push((*t, cur));
            cur = *prev;
        }
        steps.reverse();
        steps
    };
    let basis = ch.basis(base);
    let mut out = Vec::new();
    for l in loops.iter().filter(|l| !l.is_degenerate()) {
        let steps = path_to(l.sigma0);
        let lin = matrix_in_basis(&basis, |x| {
            let mut v = x.to_vec();
            let mut prev = base;
            for &(t, s2) in &steps {
                v = ch.transport_linear(s2, t, &v);
                prev = s2;
            }
            debug_assert_eq!(prev, l.sigma0);
            v = ch.loop_linear(l, &v);
            // back along the path
            let mut back: Vec<(usize, usize)> = Vec::new();
            let mut nodes = vec![base];
            nodes.extend(steps.iter().map(|&(_, s)| s));
            for i in (0..steps.len()).rev() {
                back.push((steps[i].0, nodes[i]));
            }
            for (t, s2) in back {
                v = ch.transport_linear(s2, t, &v);
            }
            v
        })?;
        let lin = to_int_matrix(&lin).ok_or_else(|| Error::Falsified("non-integral transported monodromy".into()))?;
        out.push((*l, lin));
    }
    Ok(out)
}

fn global_group(
    ch: &Charts,
    graph: &ChartGraph,
    loops: &[Loop],
) -> Result<GlobalGroup> {
    let base = graph.sigmas[0];
    let gens = transported(ch, graph, loops, base)?;
    let ns: Vec<Vec<Vec<i64>>> = gens.iter().map(|(_, g)| minus_identity(g)).collect();
    let commute = ns.iter().enumerate().all(|(i, a)| ns[i + 1..].iter().all(|b| mat_mul_i(a, b) == mat_mul_i(b, a)));
    let unipotent = ns.iter().all(|x| is_zero_i(&mat_mul_i(x, x)));
    let (log_rank, log_divs) = log_divisors(&ns);
    let distinct: BTreeSet<Vec<Vec<i64>>> = gens.iter().map(|(_, g)| g.clone()).filter(|g| !is_zero_i(&minus_identity(g))).collect();

    let k = ch.basis(base).len();
    let group: Vec<Vec<Vec<i64>>> = distinct.iter().cloned().collect();
    let invariant = divisors_of(&conjugation_closure(&group, &ns, k));

    let alternate = *graph.sigmas.last().expect("nonempty");
    let alt = transported(ch, graph, loops, alternate)?;
    let alt_ns: Vec<Vec<Vec<i64>>> = alt.iter().map(|(_, g)| minus_identity(g)).collect();
    let alt_group: Vec<Vec<Vec<i64>>> =
        alt.iter().map(|(_, g)| g.clone()).filter(|g| !is_zero_i(&minus_identity(g))).collect();
    let alt_divs = divisors_of(&conjugation_closure(&alt_group, &alt_ns, k));
    Ok(GlobalGroup {
        base,
        generators: gens.len(),
        distinct_generators: distinct.into_iter().collect(),
        commute,
        unipotent,
        log_rank,
        log_divisors: log_divs,
        invariant_divisors: invariant,
        alternate_base: alternate,
        alternate_base_invariant_divisors: alt_divs,
    })
}

/// Outcome of pairing primal and dual loop monodromies.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub loops: usize,
    pub preserved: usize,
    pub failures: Vec<Loop>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each primal loop `(σ₀ τ₀ σ₁ τ₁)` the dual loop `(τ₀ σ₁ τ₁ σ₀)` on the
/// swapped sides satisfies `⟨Lin(T∨) y, Lin(T) x⟩ = ⟨y, x⟩` on
/// `τ₀^⊥ × σ₀^⊥`, and the pairing there is unimodular.
pub fn duality_check(m: &Side, n: &Side, loops: &[Loop]) -> Result<DualityReport> {
    let primal = Charts::new(m, n);
    let dual = Charts::new(n, m);
    let mut failures = Vec::new();
    let mut preserved = 0;
    for &l in loops {
        let dl = Loop { sigma0: l.tau0, tau0: l.sigma1, sigma1: l.tau1, tau1: l.sigma0 };
        let xs = primal.basis(l.sigma0);
        let ys = dual.basis(l.tau0);
        let gram: Vec<QVec> = ys.iter().map(|y| xs.iter().map(|x| dot(y, x)).collect()).collect();
        let det = crate::geometry::linalg::determinant(&gram);
        if det != Rational::one() && det != -Rational::one() {
            return Err(Error::Falsified(format!("loop {l:?}: pairing of tangent lattices has determinant {}", fmt_q(&det))));
        }
        let ok = xs.iter().all(|x| {
            let lx = primal.loop_linear(&l, x);
            ys.iter().all(|y| dot(&dual.loop_linear(&dl, y), &lx) == dot(y, x))
        });
        if ok {
            preserved += 1;
        } else {
            failures.push(l);
        }
    }
    Ok(DualityReport { loops: loops.len(), preserved, failures })
}
