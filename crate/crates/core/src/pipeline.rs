//! Input parsing, stage orchestration and the deterministic run report.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{fmt_q, linalg::rank, parse_q, Rational, Role};
use crate::homology::Homology;
use crate::monodromy::{complement, duality_check, Complement, Component, Discriminant, MonodromyAnalysis};
use crate::nef::{Check, Irreducibility, NefPartition};
use crate::sphere::{product_betti, sphere_betti, LemmaReport, Side, SphereComplex};
use crate::subdivision::WeightFunction;
use crate::tropical::TropicalComplex;

/// A rational written as an integer or as a `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Int(i64),
    Text(String),
}

impl RationalInput {
    pub fn parse(&self) -> Result<Rational> {
        match self {
            RationalInput::Int(n) => Ok(Rational::from_integer((*n).into())),
            RationalInput::Text(s) => parse_q(s).ok_or_else(|| Error::Input(format!("not a rational: {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct WeightEntry {
    pub point: Vec<i64>,
    pub value: RationalInput,
}

/// `"all_ones"` or an explicit table of values on lattice points.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Named(String),
    Table(Vec<WeightEntry>),
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec::Named("all_ones".into())
    }
}

impl WeightSpec {
    pub fn resolve(&self, points: &[Vec<i64>]) -> Result<WeightFunction> {
        match self {
            WeightSpec::Named(s) if s == "all_ones" || s == "all-ones" => Ok(WeightFunction::all_ones(points)),
            WeightSpec::Named(s) => Err(Error::Input(format!("unknown weight function {s:?}"))),
            WeightSpec::Table(rows) => {
                let d = points.first().map_or(0, |p| p.len());
                let mut table = Vec::with_capacity(rows.len());
                for row in rows {
                    if row.point.len() != d {
                        return Err(Error::Input(format!("weight point {:?} has the wrong length", row.point)));
                    }
                    table.push((row.point.clone(), row.value.parse()?));
                }
                WeightFunction::from_table(points, &table)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verify {
    Fast,
    #[default]
    Full,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
pub struct Flags {
    pub verify: Option<Verify>,
    pub dual: Option<bool>,
    pub require_irreducible: Option<bool>,
}

/// The JSON input file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub dim: usize,
    pub parts: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub omega: WeightSpec,
    #[serde(default)]
    pub nu: WeightSpec,
    #[serde(default)]
    pub flags: Flags,
}

impl InputSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: InputSpec = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        if spec.parts.is_empty() {
            return Err(Error::Input("no parts".into()));
        }
        for (i, part) in spec.parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::Input(format!("part {} is empty", i + 1)));
            }
            if let Some(p) = part.iter().find(|p| p.len() != spec.dim) {
                return Err(Error::Input(format!("point {p:?} in part {} does not have length {}", i + 1, spec.dim)));
            }
        }
        Ok(spec)
    }
}

/// Resolved run options; command-line flags override the input file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub verify: Verify,
    pub dual: bool,
    pub require_irreducible: bool,
}

impl Options {
    pub fn from_flags(flags: &Flags) -> Self {
        Options {
            verify: flags.verify.unwrap_or_default(),
            dual: flags.dual.unwrap_or(false),
            require_irreducible: flags.require_irreducible.unwrap_or(false),
        }
    }
}

/// How far to run the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Validate,
    Dualize,
    Complex,
    Tropical,
    Discriminant,
    Monodromy,
    Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedCheck {
    pub stage: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationSection {
    pub dim: usize,
    pub r: usize,
    pub parts: Vec<Vec<Vec<i64>>>,
    pub valid: bool,
    pub irreducible: bool,
    /// 1-based part labels of a proper subset with `0` in the relative
    /// interior of its sum.
    pub reducible_witness: Option<Vec<usize>>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualSection {
    pub parts: Vec<Vec<Vec<i64>>>,
    pub double_dual_is_identity: bool,
    pub interior_vectors: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SideSection {
    pub lattice_points: usize,
    pub weights_all_ones: bool,
    pub cells_by_dim: Vec<usize>,
    pub transversal: usize,
    pub minimal: usize,
    pub lemma: LemmaReport,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereSection {
    pub pairs: usize,
    pub cells_by_dim: Vec<usize>,
    pub euler_characteristic: i64,
    pub bsd_f_vector: Vec<usize>,
    pub homology: Homology,
    pub expected_betti: Vec<usize>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TropicalSection {
    pub cells_by_dim: Vec<usize>,
    pub part_cells: Vec<usize>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscriminantSection {
    pub non_smooth_pairs: usize,
    pub f_vector: Vec<usize>,
    pub components: Vec<ComponentSummary>,
    pub complement: Option<Complement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub vertices: usize,
    pub homology: Homology,
}

impl From<&Component> for ComponentSummary {
    fn from(c: &Component) -> Self {
        ComponentSummary { vertices: c.vertices.len(), homology: c.homology.clone() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonodromySection {
    pub graph_nodes: [usize; 2],
    pub graph_edges: usize,
    pub graph_connected: bool,
    pub primary_loops: usize,
    pub degenerate_loops: usize,
    pub nontrivial_loops: usize,
    pub corollary_loops: usize,
    /// Loops where the printed condition (some part differs on both sides)
    /// holds; it is the negation of triviality.
    pub corollary_literal_condition_loops: usize,
    pub local_groups: usize,
    pub local_divisors: Vec<Vec<String>>,
    pub component_divisors: Vec<Vec<Vec<String>>>,
    pub global: Option<crate::monodromy::GlobalGroup>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualRunSection {
    pub sphere_pairs: usize,
    pub discriminant_components: usize,
    pub monodromy: MonodromySection,
    pub duality_loops: usize,
    pub duality_preserved: usize,
    /// Constant loops `(σ τ σ τ)`, one per edge of the chart graph; these
    /// still test that the pairing of the tangent lattices is unimodular.
    pub constant_loops: usize,
    pub constant_loops_preserved: usize,
    pub checks: Vec<Check>,
}

/// Everything a run produced, in a fixed field order.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub verify: Verify,
    pub validation: ValidationSection,
    pub dual: Option<DualSection>,
    pub m_side: Option<SideSection>,
    pub n_side: Option<SideSection>,
    pub sphere: Option<SphereSection>,
    pub nabla_omega: Option<TropicalSection>,
    pub delta_nu: Option<TropicalSection>,
    pub discriminant: Option<DiscriminantSection>,
    pub monodromy: Option<MonodromySection>,
    pub dual_run: Option<DualRunSection>,
    pub checks: Vec<NamedCheck>,
    pub passed: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> Vec<&NamedCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Intermediate objects kept for export.
pub struct Artifacts {
    pub m: Side,
    pub n: Side,
    pub sigma: Option<SphereComplex>,
    pub nabla: Option<TropicalComplex>,
    pub disc: Option<Discriminant>,
    pub mono: Option<MonodromyAnalysis>,
}

fn part_vertex_sets(nef: &NefPartition) -> Vec<Vec<Vec<i64>>> {
    nef.part_vertices()
        .into_iter()
        .map(|mut vs| {
            vs.sort();
            vs
        })
        .collect()
}

fn side_section(side: &Side) -> SideSection {
    SideSection {
        lattice_points: side.sub.points.len(),
        weights_all_ones: side.sub.weights.is_all_ones(),
        cells_by_dim: side.sub.counts_by_dim(),
        transversal: side.len(),
        minimal: side.minimal.len(),
        lemma: side.lemma.clone(),
        checks: side.checks.clone(),
    }
}

/// Dimensions of the spheres whose product `Σ` should be: one factor per
/// class of parts whose linear spans are linked.
fn expected_sphere_dims(nef: &NefPartition) -> Vec<usize> {
    let r = nef.r();
    let spans: Vec<Vec<Vec<Rational>>> = nef
        .parts()
        .iter()
        .map(|p| p.vertices().iter().filter(|v| v.iter().any(|x| *x != Rational::from_integer(0.into()))).cloned().collect())
        .collect();
    let d = nef.dim();
    let mut parent: Vec<usize> = (0..r).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let root = find(p, p[x]);
            p[x] = root;
        }
        p[x]
    }
    for i in 0..r {
        for j in i + 1..r {
            let both: Vec<Vec<Rational>> = spans[i].iter().chain(&spans[j]).cloned().collect();
            if rank(&both, d) < rank(&spans[i], d) + rank(&spans[j], d) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for i in 0..r {
        let root = find(&mut parent, i);
        blocks.entry(root).or_default().push(i);
    }
    blocks
        .values()
        .map(|idx| {
            let vs: Vec<Vec<Rational>> = idx.iter().flat_map(|&i| spans[i].iter().cloned()).collect();
            rank(&vs, d) - idx.len()
        })
        .collect()
}

fn sphere_section(nef: &NefPartition, irreducible: bool, sigma: &SphereComplex) -> SphereSection {
    let h = sigma.homology();
    let n = nef.dim() - nef.r();
    let mut checks = sigma.checks.clone();
    let expected = if irreducible {
        let chi = 1 + if n % 2 == 0 { 1 } else { -1 };
        checks.push(Check::new(
            "euler_characteristic",
            sigma.euler_characteristic() == chi,
            format!("χ(Σ) = {} and 1 + (−1)^{n} = {chi}", sigma.euler_characteristic()),
        ));
        checks.push(Check::new(
            "closed_pseudomanifold",
            sigma.bsd.is_closed_pseudomanifold(n),
            format!("bsd(Σ) is a closed {n}-pseudomanifold"),
        ));
        sphere_betti(n)
    } else {
        product_betti(&expected_sphere_dims(nef))
    };
    checks.push(Check::new(
        "sphere_homology",
        h.is_free_with(&expected),
        format!("H(Σ) = {}", h.describe()),
    ));
    SphereSection {
        pairs: sigma.len(),
        cells_by_dim: sigma.counts_by_dim(),
        euler_characteristic: sigma.euler_characteristic(),
        bsd_f_vector: sigma.bsd.f_vector(),
        homology: h,
        expected_betti: expected,
        checks,
    }
}

fn tropical_section(t: &TropicalComplex) -> TropicalSection {
    TropicalSection {
        cells_by_dim: t.counts_by_dim(),
        part_cells: t.parts.iter().map(|p| p.cells.len()).collect(),
        checks: t.checks.clone(),
    }
}

fn monodromy_section(mono: &MonodromyAnalysis) -> MonodromySection {
    MonodromySection {
        graph_nodes: [mono.graph.sigmas.len(), mono.graph.taus.len()],
        graph_edges: mono.graph.edge_count(),
        graph_connected: mono.graph.is_connected(),
        primary_loops: mono.loops.len(),
        degenerate_loops: mono.loops.iter().filter(|l| l.degenerate).count(),
        nontrivial_loops: mono.loops.iter().filter(|l| !l.trivial).count(),
        corollary_loops: mono.corollary.len(),
        corollary_literal_condition_loops: mono.corollary.iter().filter(|c| c.literal_condition).count(),
        local_groups: mono.local.len(),
        local_divisors: mono.local.iter().map(|g| g.divisors.clone()).collect::<BTreeSet<_>>().into_iter().collect(),
        component_divisors: mono.component_divisors.clone(),
        global: mono.global.clone(),
        checks: mono.checks.clone(),
    }
}

fn collect(stage: &str, checks: &[Check], out: &mut Vec<NamedCheck>) {
    out.extend(checks.iter().map(|c| NamedCheck {
        stage: stage.into(),
        name: c.name.clone(),
        pass: c.pass,
        detail: c.detail.clone(),
    }));
}

/// Validity checks and irreducibility; also returns the dual when valid.
pub fn validation_section(spec: &InputSpec) -> Result<(NefPartition, ValidationSection, Option<NefPartition>)> {
    let nef = NefPartition::new(spec.dim, &spec.parts, Role::M)?;
    let validation = nef.validate();
    let irr = nef.irreducibility();
    let section = ValidationSection {
        dim: spec.dim,
        r: nef.r(),
        parts: part_vertex_sets(&nef),
        valid: validation.passed(),
        irreducible: irr.is_irreducible(),
        reducible_witness: match irr {
            Irreducibility::Reducible { witness } => Some(witness),
            Irreducibility::Irreducible => None,
        },
        checks: validation.checks,
    };
    Ok((nef, section, validation.dual))
}

/// Runs the pipeline up to `stage`. Invalid input is an `Err`; failed
/// checks are recorded in the report.
pub fn run(spec: &InputSpec, opts: Options, stage: Stage) -> Result<(RunReport, Option<Artifacts>)> {
    let (nef, vsec, dual) = validation_section(spec)?;
    let mut checks = Vec::new();
    collect("validation", &vsec.checks, &mut checks);
    if !vsec.valid {
        let failed: Vec<String> = vsec.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
        return Err(Error::InvalidNefPartition(failed.join(", ")));
    }
    if opts.require_irreducible {
        if let Some(witness) = &vsec.reducible_witness {
            return Err(Error::InvalidNefPartition(format!("reducible, witness {witness:?}")));
        }
    }
    let irreducible = vsec.irreducible;
    let mut report = RunReport {
        verify: opts.verify,
        validation: vsec,
        dual: None,
        m_side: None,
        n_side: None,
        sphere: None,
        nabla_omega: None,
        delta_nu: None,
        discriminant: None,
        monodromy: None,
        dual_run: None,
        checks,
        passed: true,
    };
    let dual = dual.expect("valid partition has a dual");
    if stage >= Stage::Dualize {
        let back = dual.dual()?;
        let same = part_vertex_sets(&back) == part_vertex_sets(&nef);
        let iv = nef.interior_vectors(&dual)?;
        let mut ivc = nef.check_interior_vectors(&dual, &iv);
        if irreducible {
            let span = rank(&iv.v, nef.dim());
            ivc.push(Check::new("v_span_dimension", span + 1 == nef.r(), format!("rank of v₁,…,v_r is {span}")));
        } else {
            // the sign pattern is only claimed for irreducible partitions
            ivc.retain(|c| c.name != "sign_pattern");
        }
        let mut dc = vec![Check::new("double_dual_is_identity", same, "")];
        dc.extend(ivc.iter().cloned());
        collect("dualize", &dc, &mut report.checks);
        report.dual = Some(DualSection { parts: part_vertex_sets(&dual), double_dual_is_identity: same, interior_vectors: ivc });
    }
    if stage < Stage::Complex {
        report.passed = report.checks.iter().all(|c| c.pass);
        return Ok((report, None));
    }

    let omega = spec.omega.resolve(&nef.union_hull().lattice_points())?;
    let nu = spec.nu.resolve(&dual.union_hull().lattice_points())?;
    let m = Side::new(nef.clone(), omega)?;
    let n = Side::new(dual.clone(), nu)?;
    for (name, side) in [("m_side", &m), ("n_side", &n)] {
        collect(name, &side.checks, &mut report.checks);
        let lemma = Check::new("slice_lemma", side.lemma.passed(), side.lemma.failures.join("; "));
        collect(name, &[lemma], &mut report.checks);
    }
    report.m_side = Some(side_section(&m));
    report.n_side = Some(side_section(&n));
    let sigma = SphereComplex::new(&m, &n);
    let ssec = sphere_section(&nef, irreducible, &sigma);
    collect("sphere", &ssec.checks, &mut report.checks);
    report.sphere = Some(ssec);
    let mut art = Artifacts { m, n, sigma: None, nabla: None, disc: None, mono: None };

    if stage == Stage::Tropical || stage >= Stage::Report {
        let full = opts.verify == Verify::Full;
        let tm = TropicalComplex::new(&art.m, full)?;
        let tn = TropicalComplex::new(&art.n, full)?;
        collect("nabla_omega", &tm.checks, &mut report.checks);
        collect("delta_nu", &tn.checks, &mut report.checks);
        report.nabla_omega = Some(tropical_section(&tm));
        report.delta_nu = Some(tropical_section(&tn));
        art.nabla = Some(tm);
    }

    if stage >= Stage::Discriminant && stage != Stage::Tropical {
        let disc = Discriminant::new(&art.m, &art.n, &sigma);
        let comp = (opts.verify == Verify::Full).then(|| complement(&sigma, &disc));
        if let Some(c) = &comp {
            collect(
                "discriminant",
                &[Check::new(
                    "complement_homology_agrees",
                    c.homology == c.smooth_subcomplex_homology,
                    format!("{} / {}", c.homology.describe(), c.smooth_subcomplex_homology.describe()),
                )],
                &mut report.checks,
            );
        }
        report.discriminant = Some(DiscriminantSection {
            non_smooth_pairs: disc.non_smooth().len(),
            f_vector: disc.complex.f_vector(),
            components: disc.components.iter().map(ComponentSummary::from).collect(),
            complement: comp,
        });
        if stage >= Stage::Monodromy {
            let mono = MonodromyAnalysis::new(&art.m, &art.n, &sigma, &disc)?;
            collect("monodromy", &mono.checks, &mut report.checks);
            report.monodromy = Some(monodromy_section(&mono));
            if opts.dual {
                let dr = dual_run(&art, &sigma, &disc, &mono)?;
                collect("dual_run", &dr.checks, &mut report.checks);
                report.dual_run = Some(dr);
            }
            art.mono = Some(mono);
        }
        art.disc = Some(disc);
    }
    art.sigma = Some(sigma);
    report.passed = report.checks.iter().all(|c| c.pass);
    Ok((report, Some(art)))
}

/// The role-swapped run on `(∇, ν)` and the transpose-inverse check.
fn dual_run(art: &Artifacts, sigma: &SphereComplex, disc: &Discriminant, mono: &MonodromyAnalysis) -> Result<DualRunSection> {
    let (m, n) = (&art.n, &art.m);
    let sig2 = SphereComplex::new(m, n);
    let disc2 = Discriminant::new(m, n, &sig2);
    let mono2 = MonodromyAnalysis::new(m, n, &sig2, &disc2)?;
    let same_pairs = sig2.len() == sigma.len() && sig2.pairs.iter().all(|p| sigma.find(crate::sphere::Pair { sigma: p.tau, tau: p.sigma }).is_some());
    let same_disc = {
        let a: BTreeSet<(usize, usize)> = disc.non_smooth().iter().map(|&i| (sigma.pairs[i].sigma, sigma.pairs[i].tau)).collect();
        let b: BTreeSet<(usize, usize)> = disc2.non_smooth().iter().map(|&i| (sig2.pairs[i].tau, sig2.pairs[i].sigma)).collect();
        a == b
    };
    let primary: Vec<_> = mono.loops.iter().map(|l| l.lp).collect();
    let dc = duality_check(&art.m, &art.n, &primary)?;
    let trivial = duality_check(&art.m, &art.n, &mono.graph.edge_loops())?;
    let mut checks = vec![
        Check::new("swapped_sphere_is_the_same", same_pairs, format!("{} pairs", sig2.len())),
        Check::new("swapped_discriminant_is_the_same", same_disc, format!("{} non-smooth pairs", disc2.non_smooth().len())),
        Check::new(
            "transpose_inverse_pairing",
            dc.passed() && trivial.passed(),
            format!(
                "{} of {} primary loops and {} of {} constant loops preserve ⟨·,·⟩",
                dc.preserved, dc.loops, trivial.preserved, trivial.loops
            ),
        ),
    ];
    checks.extend(mono2.checks.iter().map(|c| Check::new(format!("swapped_{}", c.name), c.pass, c.detail.clone())));
    Ok(DualRunSection {
        sphere_pairs: sig2.len(),
        discriminant_components: disc2.components.len(),
        monodromy: monodromy_section(&mono2),
        duality_loops: dc.loops,
        duality_preserved: dc.preserved,
        constant_loops: trivial.loops,
        constant_loops_preserved: trivial.preserved,
        checks,
    })
}

/// JSON cell lists for `Σ`, `∇_ω`, `D` and the loop monodromies.
pub fn export_complexes(art: &Artifacts) -> Vec<(&'static str, Value)> {
    let mut out = Vec::new();
    let (m, n) = (&art.m, &art.n);
    if let Some(sigma) = &art.sigma {
        let cells: Vec<Value> = sigma
            .pairs
            .iter()
            .zip(&sigma.dims)
            .map(|(p, d)| json!({ "dim": d, "sigma": m.vertices(p.sigma), "tau": n.vertices(p.tau) }))
            .collect();
        out.push((
            "sigma.json",
            json!({
                "m_points": m.sub.points,
                "n_points": n.sub.points,
                "cells": cells,
                "bsd_facets": sigma.bsd.simplices(sigma.bsd.dim().max(0) as usize),
            }),
        ));
    }
    if let Some(t) = &art.nabla {
        let mut table: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for c in &t.cells {
            table.extend(c.vertices().iter().cloned());
        }
        let table: Vec<Vec<Rational>> = table.into_iter().collect();
        let cells: Vec<Value> = t
            .cells
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut idx: Vec<usize> = c.vertices().iter().map(|v| table.binary_search(v).expect("in table")).collect();
                idx.sort();
                json!({ "dim": c.dim(), "generator": m.vertices(k), "vertices": idx })
            })
            .collect();
        let points: Vec<Vec<String>> = table.iter().map(|v| v.iter().map(fmt_q).collect()).collect();
        out.push(("nabla_omega.json", json!({ "m_points": m.sub.points, "points": points, "cells": cells })));
    }
    if let Some(disc) = &art.disc {
        let all: Vec<&Vec<u32>> = (0..=disc.complex.dim().max(0) as usize).flat_map(|k| disc.complex.simplices(k)).collect();
        let comps: Vec<&Vec<u32>> = disc.components.iter().map(|c| &c.vertices).collect();
        out.push(("discriminant.json", json!({ "simplices": all, "components": comps })));
    }
    if let Some(mono) = &art.mono {
        out.push(("monodromy.json", json!({ "loops": mono.loops, "corollary": mono.corollary, "local": mono.local })));
    }
    out
}
