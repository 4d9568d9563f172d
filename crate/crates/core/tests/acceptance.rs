//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured quantities (run with `cargo test --test acceptance --
//! --nocapture` to see them).

use std::time::{Duration, Instant};

use collinear_core::auxtrees::{
    badness_levels, build_aux, build_side_trees, counting_checks, leaf_caress_check,
    node_inequality_check, structural_bad_checks,
};
use collinear_core::classify::{check_touched_lower_bound, classify};
use collinear_core::cycles::{
    canonical_form, long_cycle_heuristic, longest_cycle_exact, oracle, orient_and_partition,
    DualCycle, SearchBudget,
};
use collinear_core::dual::{check_three_connected, dualize, verify_shared_edge_bound, DualGraph};
use collinear_core::embedding::{max_degree, Triangulation};
use collinear_core::generate::{generate, Generated, Kind};
use collinear_core::pipeline::{run_pipeline, PipelineOptions};
use collinear_core::render::{render_svg, Overlay};
use collinear_core::surgery::surgery_loop;

struct Instance {
    name: String,
    gen: Generated,
}

/// The fixed corpus: all named instances plus seeded random families with
/// 4 <= n <= 40.
fn corpus() -> Vec<Instance> {
    let mut kinds: Vec<Kind> = vec![Kind::Tetrahedron, Kind::Octahedron, Kind::Icosahedron];
    for k in 4..=12 {
        kinds.push(Kind::Serpentine { k });
    }
    for k in 1..=3 {
        kinds.push(Kind::Pinwheel { k });
    }
    for n in 4..=40 {
        for seed in [1, 2, 3] {
            kinds.push(Kind::RandomStacked { n, seed });
        }
    }
    for n in 5..=40 {
        for seed in [1, 2] {
            kinds.push(Kind::RandomFlip { n, flips: 2 * n, seed });
        }
    }
    for n in 5..=14 {
        kinds.push(Kind::RandomFlip { n, flips: 2 * n, seed: 3 });
    }
    kinds
        .into_iter()
        .map(|kind| Instance {
            name: kind.name(),
            gen: generate(kind).expect("corpus instance generates"),
        })
        .collect()
}

fn theorem_battery(t: &Triangulation, d: &DualGraph, c: &DualCycle, name: &str) {
    let cls = classify(d, c);
    assert_eq!(cls.tau, cls.rho + cls.kappa, "{name}: tau != rho + kappa");
    for side in 0..2 {
        let s = cls.per_side[side];
        assert_eq!(s.tau, s.rho + s.kappa, "{name}: side {side} identity");
    }
    assert!(
        check_touched_lower_bound(max_degree(t), &cls, c),
        "{name}: touched lower bound"
    );
    let aux = build_aux(d, c, &cls).expect("aux");
    let mut trees = build_side_trees(d, c, &aux, &cls).expect("trees");
    badness_levels(&mut trees, 2);
    assert!(
        node_inequality_check(&trees).is_ok(),
        "{name}: node inequality"
    );
    assert!(leaf_caress_check(&trees).is_ok(), "{name}: leaf caress");
    assert!(counting_checks(&trees).ok(), "{name}: counting checks");
    assert!(
        structural_bad_checks(&trees, &aux, d, c).is_ok(),
        "{name}: structural bad checks"
    );
}

#[test]
fn criterion_1_dual_structure() {
    let start = Instant::now();
    let corpus = corpus();
    assert!(
        corpus.len() >= 200,
        "corpus has only {} instances",
        corpus.len()
    );
    for inst in &corpus {
        let t = &inst.gen.triangulation;
        let d = dualize(t).expect("dualize");
        assert_eq!(
            d.vertex_count(),
            2 * t.n() - 4,
            "{}: dual vertex count",
            inst.name
        );
        for v in 0..d.vertex_count() {
            assert_eq!(d.map().degree(v), 3, "{}: dual not cubic", inst.name);
        }
        assert!(check_three_connected(&d), "{}: 3-connected", inst.name);
        assert!(
            verify_shared_edge_bound(&d),
            "{}: shared edge bound",
            inst.name
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "criterion 1 took {elapsed:?}"
    );
    println!(
        "PASS criterion-1: dual structure on {} instances in {:.1?}",
        corpus.len(),
        elapsed
    );
}

#[test]
fn criterion_2_theorem_tests() {
    let start = Instant::now();
    let corpus = corpus();
    let mut pairs = 0usize;
    for inst in &corpus {
        let t = &inst.gen.triangulation;
        let d = dualize(t).expect("dualize");
        if d.vertex_count() <= 12 {
            for seq in oracle::enumerate_simple_cycles(&d.map().adjacency()) {
                let c = orient_and_partition(&d, &seq).expect("cycle");
                theorem_battery(t, &d, &c, &inst.name);
                pairs += 1;
            }
        } else {
            let h = long_cycle_heuristic(&d, 0).expect("heuristic");
            theorem_battery(t, &d, &h, &inst.name);
            let e = longest_cycle_exact(
                &d,
                SearchBudget {
                    max_nodes: Some(100_000),
                    time_limit: None,
                },
            )
            .expect("exact");
            theorem_battery(t, &d, &e.cycle, &inst.name);
            pairs += 2;
            if let Some(seq) = &inst.gen.canonical_cycle {
                let c = orient_and_partition(&d, seq).expect("canonical");
                theorem_battery(t, &d, &c, &inst.name);
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(600),
        "criterion 2 took {elapsed:?}"
    );
    println!("PASS criterion-2: theorem tests on {pairs} (T, C) pairs in {elapsed:.1?}");
}

#[test]
fn criterion_3_figure_values() {
    for k in 4..=12 {
        let gen = generate(Kind::Serpentine { k }).unwrap();
        let d = dualize(&gen.triangulation).unwrap();
        let c = orient_and_partition(&d, gen.canonical_cycle.as_ref().unwrap()).unwrap();
        let cls = classify(&d, &c);
        assert_eq!(cls.kappa, 4, "serpentine({k}) kappa");
        assert_eq!(cls.per_side[0].kappa, 2, "serpentine({k}) interior kappa");
        assert_eq!(cls.per_side[1].kappa, 2, "serpentine({k}) exterior kappa");
    }
    for k in 1..=3 {
        let gen = generate(Kind::Pinwheel { k }).unwrap();
        let d = dualize(&gen.triangulation).unwrap();
        let c = orient_and_partition(&d, gen.canonical_cycle.as_ref().unwrap()).unwrap();
        let cls = classify(&d, &c);
        let aux = build_aux(&d, &c, &cls).unwrap();
        let trees = build_side_trees(&d, &c, &aux, &cls).unwrap();
        let found = trees.sides[0]
            .nodes
            .iter()
            .chain(trees.sides[1].nodes.iter())
            .any(|u| u.rho == 2 * k + 1 && u.kappa == 0 && u.degree == k + 2);
        assert!(found, "pinwheel({k}) lacks the (2k+1, 0, k+2) node");
    }
    println!(
        "PASS criterion-3: serpentine(4..=12) kappa = 4 exactly; pinwheel(1..=3) node = (2k+1, 0, k+2) exactly"
    );
}

#[test]
fn criterion_4_surgery_progress() {
    let start = Instant::now();
    let mut total_steps = 0usize;
    // serpentine instances with k >= 5 * max_degree + 4 = 34
    for k in [40usize, 44, 60] {
        let gen = generate(Kind::Serpentine { k }).unwrap();
        let t = &gen.triangulation;
        let delta = max_degree(t);
        assert!(k >= 5 * delta + 4);
        let d = dualize(t).unwrap();
        let c = orient_and_partition(&d, gen.canonical_cycle.as_ref().unwrap()).unwrap();
        let (_, log) = surgery_loop(t, &d, &c, 1000).expect("surgery loop");
        assert!(
            !log.steps.is_empty(),
            "serpentine({k}): no surgery step applied"
        );
        for s in &log.steps {
            assert!(s.kappa_after > s.kappa_before, "kappa must strictly grow");
            assert!(
                s.len_before.abs_diff(s.len_after) <= delta * delta,
                "length change bound"
            );
        }
        total_steps += log.steps.len();
    }
    // every applied step across the corpus: the per-step verification
    // (simple cycle, only-bad claim face by face, designated face caressed)
    // runs inside apply_surgery, which fails the loop on any violation.
    let corpus = corpus();
    for inst in &corpus {
        let t = &inst.gen.triangulation;
        let delta = max_degree(t);
        let d = dualize(t).unwrap();
        let c = match &inst.gen.canonical_cycle {
            Some(seq) => orient_and_partition(&d, seq).unwrap(),
            None => long_cycle_heuristic(&d, 0).unwrap(),
        };
        let (_, log) = surgery_loop(t, &d, &c, 1000).expect("surgery loop on corpus");
        for s in &log.steps {
            assert!(s.kappa_after > s.kappa_before);
            assert!(s.len_before.abs_diff(s.len_after) <= delta * delta);
        }
        total_steps += log.steps.len();
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(600),
        "criterion 4 took {elapsed:?}"
    );
    println!(
        "PASS criterion-4: surgery applied and verified ({total_steps} steps total) in {elapsed:.1?}"
    );
}

#[test]
fn criterion_5_certificate_soundness() {
    let start = Instant::now();
    let corpus = corpus();
    let mut bounded = 0usize;
    for inst in &corpus {
        let t = &inst.gen.triangulation;
        let out = run_pipeline(t, &PipelineOptions::default())
            .unwrap_or_else(|e| panic!("{}: pipeline failed: {e}", inst.name));
        assert!(
            out.report.checks.curve_verified,
            "{}: curve not verified",
            inst.name
        );
        // S independent in T
        let s = &out.certificate.s;
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                assert!(
                    !t.map().has_edge(a, b),
                    "{}: S not independent ({a}, {b})",
                    inst.name
                );
            }
        }
        let kappa = out.report.kappa_final;
        assert!(
            6 * s.len() >= kappa,
            "{}: |S| = {} < kappa/6 with kappa = {kappa}",
            inst.name,
            s.len()
        );
        if out.dual.vertex_count() <= 14 {
            assert_eq!(
                out.report.checks.upper_bound,
                Some(true),
                "{}: |S| exceeds dual circumference",
                inst.name
            );
            bounded += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "PASS criterion-5: certificates sound on {} instances ({bounded} with exact upper bound) in {elapsed:.1?}",
        corpus.len()
    );
}

#[test]
fn criterion_6_exact_solver_oracle() {
    let start = Instant::now();
    let corpus = corpus();
    let mut checked = 0usize;
    for inst in &corpus {
        let d = dualize(&inst.gen.triangulation).unwrap();
        if d.vertex_count() > 14 {
            continue;
        }
        let exact = longest_cycle_exact(&d, SearchBudget::unlimited()).unwrap();
        assert!(exact.optimal);
        let brute = oracle::longest_cycle_bruteforce(&d.map().adjacency()).unwrap();
        assert_eq!(
            exact.cycle.len(),
            brute.len(),
            "{}: circumference mismatch",
            inst.name
        );
        assert_eq!(
            canonical_form(exact.cycle.vertex_seq()),
            brute,
            "{}: canonical witness mismatch",
            inst.name
        );
        checked += 1;
    }
    // pinned values
    let tetra = dualize(&generate(Kind::Tetrahedron).unwrap().triangulation).unwrap();
    assert_eq!(
        longest_cycle_exact(&tetra, SearchBudget::unlimited())
            .unwrap()
            .cycle
            .len(),
        4
    );
    let cube = dualize(&generate(Kind::Octahedron).unwrap().triangulation).unwrap();
    assert_eq!(
        longest_cycle_exact(&cube, SearchBudget::unlimited())
            .unwrap()
            .cycle
            .len(),
        8
    );
    let dodeca = dualize(&generate(Kind::Icosahedron).unwrap().triangulation).unwrap();
    assert_eq!(
        longest_cycle_exact(&dodeca, SearchBudget::unlimited())
            .unwrap()
            .cycle
            .len(),
        20
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "criterion 6 took {elapsed:?}"
    );
    println!(
        "PASS criterion-6: exact solver matches enumeration on {checked} small duals; tetra-dual 4, cube 8, dodecahedron 20 ({elapsed:.1?})"
    );
}

#[test]
fn criterion_7_determinism() {
    let picks = [
        Kind::Tetrahedron,
        Kind::Serpentine { k: 8 },
        Kind::Pinwheel { k: 2 },
        Kind::RandomStacked { n: 25, seed: 2 },
        Kind::RandomFlip { n: 30, flips: 60, seed: 1 },
    ];
    for kind in picks {
        let gen = generate(kind).unwrap();
        let t = &gen.triangulation;
        let a = run_pipeline(t, &PipelineOptions::default()).unwrap();
        let b = run_pipeline(t, &PipelineOptions::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a.certificate).unwrap(),
            serde_json::to_string(&b.certificate).unwrap(),
            "{}: certificate not byte-identical",
            kind.name()
        );
        assert_eq!(
            a.report.deterministic_json(),
            b.report.deterministic_json(),
            "{}: report not deterministic",
            kind.name()
        );
        let d = dualize(t).unwrap();
        let cls = classify(&d, &a.final_cycle);
        let svg1 = render_svg(t, &d, Overlay::Cycle(&a.final_cycle), Some(&cls)).unwrap();
        let svg2 = render_svg(t, &d, Overlay::Cycle(&b.final_cycle), Some(&cls)).unwrap();
        assert_eq!(svg1, svg2, "{}: SVG not byte-identical", kind.name());
    }
    println!("PASS criterion-7: byte-identical certificates, reports and SVGs across repeated runs");
}
