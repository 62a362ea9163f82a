//! One line per acceptance criterion, each run over its full family.
//! Criteria run concurrently; the test fails if any line reads FAIL.

use std::io::Write;
use std::thread;

use flowpoly::graph::{build_gm, DirectedMultigraph};
use flowpoly::suite::{sample_reduced_node, run_suite, Suite, SuiteConfig, SuiteOutcome};
use flowpoly::{
    canonical_reduction_tree, count_flows, lidskii_count_c_form, unimodular_dissection, FlowInstance,
    LidskiiExpansion, ReductionOptions,
};

struct Line {
    criterion: usize,
    passed: bool,
    text: String,
}

fn suite_line(criterion: usize, suite: Suite, extra: Vec<(String, bool)>) -> Line {
    let outcome: SuiteOutcome = run_suite(suite, &SuiteConfig::default()).expect("suite ran");
    let mut passed = outcome.passed() && outcome.instances > 0;
    let mut text = outcome.to_string();
    for (label, ok) in extra {
        passed &= ok;
        text.push_str(&format!("; {label}: {}", if ok { "ok" } else { "MISMATCH" }));
    }
    Line { criterion, passed, text }
}

fn k4() -> DirectedMultigraph {
    DirectedMultigraph::complete(4)
}

fn pinned_c_form() -> Vec<(String, bool)> {
    let g = k4();
    let expansion = LidskiiExpansion::new(&g).unwrap();
    [(vec![1, 1, 1], 2u32), (vec![3, 2, 2], 22)]
        .into_iter()
        .map(|(c, want)| {
            let formula = lidskii_count_c_form(&g, &c).unwrap();
            let inst = FlowInstance::new(g.clone(), expansion.netflow_for_c(&c)).unwrap();
            let oracle = count_flows(&inst);
            (
                format!("K4 c={c:?} gives {formula} (oracle {oracle}, expected {want})"),
                formula == want.into() && oracle == want.into(),
            )
        })
        .collect()
}

fn pinned_census() -> Vec<(String, bool)> {
    let tree = canonical_reduction_tree(&k4(), &ReductionOptions::default()).unwrap();
    let leaves: Vec<_> = tree.leaves().map(|n| n.graph.graph().clone()).collect();
    let shape = |m: &[i64]| {
        let want = build_gm(m).unwrap();
        leaves.iter().filter(|l| l.same_shape(&want)).count()
    };
    vec![(
        format!("K4 leaves: {} total, G[4,1,1] x{}, G[3,2,1] x{}", leaves.len(), shape(&[4, 1, 1]), shape(&[3, 2, 1])),
        leaves.len() == 2 && shape(&[4, 1, 1]) == 1 && shape(&[3, 2, 1]) == 1,
    )]
}

fn pinned_dissection() -> Vec<(String, bool)> {
    let cells = unimodular_dissection(&k4(), &[3, 2, 2], &ReductionOptions::default()).unwrap();
    vec![(format!("K4 c=(3,2,2) dissects into {} cells", cells.len()), cells.len() == 22)]
}

fn pinned_golden() -> Vec<(String, bool)> {
    let node = sample_reduced_node().unwrap();
    let image = node.phi().apply(&[0, 1, 0, 1, 1, 1]).unwrap();
    vec![(format!("phi(0,1,0,1,1,1) = {image:?}"), image == vec![0, 1, 1, 0, 2, 1])]
}

#[test]
fn acceptance() {
    let mut lines: Vec<Line> = thread::scope(|s| {
        let handles = vec![
            s.spawn(|| suite_line(1, Suite::Eq2, vec![])),
            s.spawn(|| suite_line(2, Suite::Eq1, vec![])),
            s.spawn(|| suite_line(3, Suite::Thm41, pinned_c_form())),
            s.spawn(|| suite_line(4, Suite::Census, pinned_census())),
            s.spawn(|| suite_line(5, Suite::Noncrossing, vec![])),
            s.spawn(|| suite_line(6, Suite::Dissection, pinned_dissection())),
            s.spawn(|| suite_line(7, Suite::InVector, vec![])),
            s.spawn(|| suite_line(8, Suite::Fidelity, pinned_golden())),
        ];
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    lines.sort_by_key(|l| l.criterion);
    // written to the raw handle so the lines survive libtest's output capture
    let mut err = std::io::stderr().lock();
    for line in &lines {
        writeln!(
            err,
            "criterion {}: {} — {}",
            line.criterion,
            if line.passed { "PASS" } else { "FAIL" },
            line.text
        )
        .unwrap();
    }
    let failed: Vec<_> = lines.iter().filter(|l| !l.passed).map(|l| l.criterion).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
