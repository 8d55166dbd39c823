//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Runs without the libtest harness so the
//! lines are always shown.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nefsphere::pipeline::{run, Artifacts, InputSpec, NamedCheck, Options, RunReport, Stage, Verify};
use nefsphere::samples::{self, Sample};
use nefsphere::Error;

struct Case {
    name: String,
    report: RunReport,
    art: Artifacts,
}

fn spec_of(s: &Sample) -> InputSpec {
    let text = serde_json::json!({ "dim": s.dim, "parts": s.parts }).to_string();
    InputSpec::from_json(&text).expect("sample input")
}

fn full() -> Options {
    Options { verify: Verify::Full, dual: true, require_irreducible: false }
}

fn evaluate(name: String, spec: InputSpec) -> Option<Case> {
    match run(&spec, full(), Stage::Report) {
        Ok((report, Some(art))) => Some(Case { name, report, art }),
        Ok((_, None)) => panic!("{name}: no artifacts"),
        Err(Error::NotCentral) => None,
        Err(e) => panic!("{name}: {e}"),
    }
}

/// Fixed-seed random reflexive nef-partitions in dimensions 2 and 3.
fn random_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for d in 2..=3 {
        for r in 1..=2 {
            for seed in 0..6u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 * d as u64 + 100 * r as u64 + seed);
                let spec = common::random_input(&mut rng, d, r, seed % 2 == 1);
                if let Some(c) = evaluate(format!("random_d{d}_r{r}_{seed}"), spec) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn check<'a>(report: &'a RunReport, stage: &str, name: &str) -> Option<&'a NamedCheck> {
    report.checks.iter().find(|c| c.stage == stage && c.name == name)
}

/// Names of the inputs on which one of the listed checks is missing or failed.
fn failing(cases: &[&Case], wanted: &[(&str, &str)]) -> Vec<String> {
    let mut bad = Vec::new();
    for c in cases {
        for (stage, name) in wanted {
            match check(&c.report, stage, name) {
                Some(k) if k.pass => {}
                Some(_) => bad.push(format!("{}:{stage}/{name}", c.name)),
                None => bad.push(format!("{}:{stage}/{name} missing", c.name)),
            }
        }
    }
    bad
}

fn summary(bad: &[String]) -> String {
    match bad.len() {
        0 => String::new(),
        n => format!("; {n} failing, first {}", bad[0]),
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn canonical(parts: &[Vec<Vec<i64>>]) -> Vec<BTreeSet<Vec<i64>>> {
    parts.iter().map(|p| p.iter().cloned().collect()).collect()
}

fn betti(h: &nefsphere::homology::Homology) -> (Vec<usize>, bool) {
    (h.betti.clone(), h.torsion.iter().all(|t| t.is_empty()))
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();

    // 1. dualization of the Schoen input
    let schoen = samples::schoen();
    let start = Instant::now();
    let (dual_report, _) = run(&spec_of(&schoen), Options { verify: Verify::Fast, dual: false, require_irreducible: false }, Stage::Dualize)
        .expect("schoen dualizes");
    let dual_time = start.elapsed();
    let got = canonical(&dual_report.dual.as_ref().expect("dual section").parts);
    let want = canonical(&samples::schoen_dual_parts());
    results.push((
        1,
        "Schoen dualization",
        outcome(got == want && dual_time < Duration::from_secs(10), format!("dual parts match: {}, {:.2?}", got == want, dual_time)),
    ));

    // full pipeline on Schoen
    let start = Instant::now();
    let schoen_case = evaluate("schoen".into(), spec_of(&schoen)).expect("schoen is central");
    let schoen_time = start.elapsed();
    let rep = &schoen_case.report;

    let sphere = rep.sphere.as_ref().expect("sphere section");
    let (b, free) = betti(&sphere.homology);
    results.push((
        2,
        "Schoen sphere homology",
        outcome(b == [1, 0, 0, 1] && free && schoen_time < Duration::from_secs(600), format!("betti {b:?}, torsion-free {free}, full run {:.2?}", schoen_time)),
    ));

    let disc = schoen_case.art.disc.as_ref().expect("discriminant");
    let circles = disc.components.iter().all(|c| betti(&c.homology) == (vec![1, 1], true));
    let mut seen = BTreeSet::new();
    let disjoint = disc.components.iter().flat_map(|c| &c.vertices).all(|v| seen.insert(*v));
    let shapes: Vec<String> = disc.components.iter().map(|c| format!("{}v {}", c.vertices.len(), c.homology.describe())).collect();
    results.push((
        3,
        "Schoen discriminant is two disjoint circles",
        outcome(
            disc.components.len() == 2 && circles && disjoint,
            format!("{} components [{}], disjoint {disjoint}", disc.components.len(), shapes.join(", ")),
        ),
    ));

    let complement = rep.discriminant.as_ref().and_then(|d| d.complement.as_ref()).expect("complement");
    let (cb, cfree) = betti(&complement.homology);
    let trimmed: Vec<usize> = {
        let mut v = cb.clone();
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    results.push((
        4,
        "Schoen complement is a torus",
        outcome(trimmed == [1, 2, 1] && cfree, format!("complement {}", complement.homology.describe())),
    ));

    let mono = rep.monodromy.as_ref().expect("monodromy section");
    let unipotent = check(rep, "monodromy", "loop_monodromy_unipotent").is_some_and(|c| c.pass);
    let global = mono.global.as_ref().expect("global group");
    let twelve = global.invariant_divisors == ["12", "12"];
    results.push((
        5,
        "Schoen monodromy",
        outcome(
            unipotent && global.unipotent && global.commute && twelve,
            format!(
                "unipotent {}, commute {}, log divisors {:?}, invariant divisors {:?}",
                unipotent && global.unipotent,
                global.commute,
                global.log_divisors,
                global.invariant_divisors
            ),
        ),
    ));

    // every other input
    let mut cases: Vec<Case> = samples::all()
        .iter()
        .filter(|s| s.name != "schoen")
        .filter_map(|s| evaluate(s.name.to_string(), spec_of(s)))
        .collect();
    let random = random_cases();
    let random_count = random.len();
    cases.extend(random);
    cases.push(schoen_case);
    let all: Vec<&Case> = cases.iter().collect();
    let irreducible: Vec<&Case> = cases.iter().filter(|c| c.report.validation.irreducible).collect();
    let label = format!("{} inputs ({} random)", all.len(), random_count);

    let mut lemma_bad = failing(&all, &[("m_side", "slice_lemma"), ("n_side", "slice_lemma")]);
    let mut lemma_counts = [0usize; 3];
    for c in &all {
        for side in [&c.report.m_side, &c.report.n_side] {
            let l = &side.as_ref().expect("side").lemma;
            lemma_counts[0] += l.face_checks;
            lemma_counts[1] += l.distance_checks;
            lemma_counts[2] += l.minimal_checks;
            lemma_bad.extend(l.failures.iter().map(|f| format!("{}: {f}", c.name)));
        }
    }
    results.push((
        6,
        "Slice lemma",
        outcome(
            lemma_bad.is_empty(),
            format!(
                "{label}; {} face, {} distance, {} unimodularity checks{}",
                lemma_counts[0],
                lemma_counts[1],
                lemma_counts[2],
                summary(&lemma_bad)
            ),
        ),
    ));

    let mut prop_checks = Vec::new();
    for side in ["m_side", "n_side"] {
        prop_checks.push((side, "minkowski_cell_equals_scaled_intersection"));
        prop_checks.push((side, "support_equals_boundary_slice"));
    }
    prop_checks.push(("sphere", "projection_p1_onto_s_delta"));
    prop_checks.push(("sphere", "projection_p2_onto_t_nabla"));
    for side in ["nabla_omega", "delta_nu"] {
        prop_checks.push((side, "nabla_equals_bounded_refinement"));
    }
    let prop_bad = failing(&all, &prop_checks);
    results.push((
        7,
        "Proposition suites",
        outcome(prop_bad.is_empty(), format!("{label}, {} checks each{}", prop_checks.len(), summary(&prop_bad))),
    ));

    let mut sphere_bad = failing(&irreducible, &[("sphere", "euler_characteristic"), ("sphere", "closed_pseudomanifold")]);
    for c in &irreducible {
        let v = &c.report.validation;
        let s = c.report.sphere.as_ref().expect("sphere");
        let expected = 1 + if (v.dim - v.r) % 2 == 0 { 1 } else { -1 };
        if s.euler_characteristic != expected {
            sphere_bad.push(format!("{}: chi {}", c.name, s.euler_characteristic));
        }
    }
    let square = cases.iter().find(|c| c.name == "square").expect("square input");
    let sq = square.report.sphere.as_ref().expect("square sphere");
    let square_ok = !square.report.validation.irreducible
        && sq.pairs == 4
        && betti(&sq.homology) == (vec![4], true)
        && check(&square.report, "sphere", "sphere_homology").is_some_and(|c| c.pass);
    if !square_ok {
        sphere_bad.push(format!("square: {} pairs, {}", sq.pairs, sq.homology.describe()));
    }
    results.push((
        8,
        "Sphericity",
        outcome(
            sphere_bad.is_empty(),
            format!("{} irreducible inputs; square has {} points, H {}{}", irreducible.len(), sq.pairs, sq.homology.describe(), summary(&sphere_bad)),
        ),
    ));

    let mut cor_bad = failing(&all, &[("monodromy", "non_smooth_corollary_equivalence")]);
    let mut cor_rows = 0;
    for c in &all {
        let m = c.art.mono.as_ref().expect("monodromy");
        for (i, row) in m.corollary.iter().enumerate() {
            cor_rows += 1;
            if row.linear_trivial != row.smooth_pair_contains || row.linear_trivial != row.slices_agree {
                cor_bad.push(format!("{}: loop row {i}", c.name));
            }
        }
    }
    results.push((9, "Non-smooth corollary", outcome(cor_bad.is_empty(), format!("{label}, {cor_rows} non-degenerate loops{}", summary(&cor_bad)))));

    let mut local_bad = failing(&all, &[("monodromy", "local_monodromy_block_form")]);
    let mut local_count = 0;
    for c in &all {
        let m = c.art.mono.as_ref().expect("monodromy");
        for g in &m.local {
            local_count += 1;
            if g.w_dim != g.expected_w_dim || !g.image_in_w || !g.vanishes_on_w || !g.commute {
                local_bad.push(format!("{}: pair {}", c.name, g.pair));
            }
        }
    }
    results.push((
        10,
        "Upper-triangular local monodromy",
        outcome(local_bad.is_empty(), format!("{label}, {local_count} non-smooth vertices{}", summary(&local_bad))),
    ));

    let mut dual_bad = failing(&all, &[("dualize", "double_dual_is_identity")]);
    let paired: Vec<&Case> = cases.iter().filter(|c| c.name == "schoen" || c.name == "plane_pair").collect();
    dual_bad.extend(failing(&paired, &[("dual_run", "transpose_inverse_pairing")]));
    let pairing: Vec<String> = paired
        .iter()
        .map(|c| {
            let d = c.report.dual_run.as_ref().expect("dual run");
            format!(
                "{} {}/{} primary, {}/{} constant",
                c.name, d.duality_preserved, d.duality_loops, d.constant_loops_preserved, d.constant_loops
            )
        })
        .collect();
    for c in &paired {
        let d = c.report.dual_run.as_ref().expect("dual run");
        if d.duality_preserved != d.duality_loops || d.constant_loops_preserved != d.constant_loops || d.constant_loops == 0 {
            dual_bad.push(format!("{}: pairing", c.name));
        }
    }
    results.push((
        11,
        "Duality",
        outcome(dual_bad.is_empty(), format!("{label}; pairing preserved on {}{}", pairing.join(", "), summary(&dual_bad))),
    ));

    let bin = env!("CARGO_BIN_EXE_nefsphere");
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let mut det_bad = Vec::new();
    for name in ["plane_pair", "simplex3", "schoen"] {
        let path = format!("{data}/{name}.json");
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|_| Command::new(bin).args(["report", &path]).output().expect("run cli").stdout)
            .collect();
        if outputs[0].is_empty() || outputs[0] != outputs[1] {
            det_bad.push(name.to_string());
        }
    }
    results.push((12, "Deterministic report", outcome(det_bad.is_empty(), format!("plane_pair, simplex3, schoen{}", summary(&det_bad)))));

    let mut failed = 0;
    for (n, title, o) in &results {
        let mark = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {n:>2} {mark}  {title}: {}", o.detail);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
