//! Acceptance criteria 1 to 8. Each test prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use wittsym::suite::{run_suite, SuiteReport, SuiteSpec};
use wittsym::Budget;

const SEED: u64 = 20_241_017;
const FIELDS: [(u64, u32); 3] = [(2, 1), (3, 1), (2, 2)];

const WITT_SAMPLES: u64 = 200;
const WITT_LIMIT: Duration = Duration::from_secs(60);
const SYMBOL_SAMPLES: u64 = 100;
const SYMBOL_LIMIT: Duration = Duration::from_secs(300);
const KEY_SAMPLES: u64 = 200;
const PAIRING_SAMPLES: u64 = 100;
const FORMS_SAMPLES: u64 = 100;
const CLASSICAL_SAMPLES: u64 = 200;

/// Suites that compare level n against level n + 1.
const NEEDS_NEXT_LEVEL: [&str; 4] = ["asw-shift", "prop-3.8-shift", "prop-3.17-padding", "lemma-4.11-probe"];

fn levels(id: &str, p: u64) -> impl Iterator<Item = usize> {
    let cap = Budget::default().cap(p);
    let top = if NEEDS_NEXT_LEVEL.contains(&id) { cap - 1 } else { cap };
    let bottom = if id == "lemma-4.7-f-map" { 2 } else { 1 };
    bottom..=top
}

struct Outcome {
    runs: usize,
    problems: Vec<String>,
    elapsed: Duration,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn describe(r: &SuiteReport) -> String {
    let first = r.failures.first().map(|f| f.witness.to_string()).unwrap_or_default();
    format!("{} p={} f={} n={}: {} failures, first {first}", r.suite, r.p, r.f, r.n, r.failures.len())
}

fn run_specs(specs: impl IntoIterator<Item = SuiteSpec>) -> (Outcome, Vec<SuiteReport>) {
    let start = Instant::now();
    let mut out = Outcome { runs: 0, problems: Vec::new(), elapsed: Duration::ZERO };
    let mut reports = Vec::new();
    for spec in specs {
        out.runs += 1;
        match run_suite(&spec) {
            Ok(r) => {
                if !r.passed() {
                    out.problems.push(describe(&r));
                }
                reports.push(r);
            }
            Err(e) => out.problems.push(format!("{} p={} f={} n={}: error {e}", spec.suite, spec.p, spec.f, spec.n)),
        }
    }
    out.elapsed = start.elapsed();
    (out, reports)
}

fn over_fields(ids: &[&str], fields: &[(u64, u32)], samples: u64) -> Vec<SuiteSpec> {
    let mut specs = Vec::new();
    for id in ids {
        for &(p, f) in fields {
            for n in levels(id, p) {
                specs.push(SuiteSpec::new(id, p, f, n).samples(samples).seed(SEED));
            }
        }
    }
    specs
}

fn report(criterion: u32, name: &str, out: &Outcome, limit: Option<Duration>) -> bool {
    let slow = limit.is_some_and(|l| out.elapsed > l);
    let ok = out.passed() && !slow;
    let mut line = format!(
        "criterion {criterion} ({name}): {} [{} runs, {:.1} s]",
        if ok { "PASS" } else { "FAIL" },
        out.runs,
        out.elapsed.as_secs_f64()
    );
    if slow {
        line.push_str(&format!(" over the {} s limit", limit.unwrap().as_secs()));
    }
    println!("{line}");
    for p in &out.problems {
        println!("    {p}");
    }
    ok
}

#[test]
fn criterion_1_witt_ring() {
    let ids = ["witt-ring-axioms", "witt-fv-p", "witt-v-product", "witt-ghost-morphism", "witt-ghost-inverse"];
    let (out, _) = run_specs(over_fields(&ids, &FIELDS, WITT_SAMPLES));
    assert!(report(1, "Witt ring", &out, Some(WITT_LIMIT)));
}

#[test]
fn criterion_2_wp_kernel_exhaustive() {
    let cases = [(2u64, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)];
    let specs = cases.iter().map(|&(p, n)| SuiteSpec::new("witt-fp-integers", p, 1, n).seed(SEED));
    let (out, _) = run_specs(specs);
    assert!(report(2, "kernel of wp on W_n(F_p)", &out, None));
}

#[test]
fn criterion_3_symbol() {
    let ids = [
        "asw-bilinear",
        "asw-wp-vanishing",
        "asw-pn-power",
        "asw-frobenius",
        "asw-shift",
        "asw-unramified",
        "lemma-2.2-ii",
    ];
    let (out, _) = run_specs(over_fields(&ids, &FIELDS, SYMBOL_SAMPLES));
    assert!(report(3, "symbol identities", &out, Some(SYMBOL_LIMIT)));
}

#[test]
fn criterion_4_key_lemma() {
    let (out, _) = run_specs(over_fields(&["lemma-2.2-key"], &FIELDS, KEY_SAMPLES));
    assert!(report(4, "[[b], b) = 0", &out, None));
}

#[test]
fn criterion_5_pairing() {
    let ids = [
        "prop-3.3-i",
        "prop-3.3-ii",
        "prop-3.3-iii",
        "prop-3.3-iv",
        "lemma-3.2-i",
        "lemma-3.2-ii",
        "prop-3.7-adjoint",
        "prop-3.8-shift",
        "cor-3.9-level",
        "prop-3.10-antisymmetric",
        "prop-3.11-ii",
        "prop-3.11-iv",
        "prop-3.13-case-split",
        "prop-3.14-routes",
        "prop-3.17-padding",
        "prop-3.17-antisymmetric",
    ];
    let (out, _) = run_specs(over_fields(&ids, &FIELDS, PAIRING_SAMPLES));
    assert!(report(5, "pairing", &out, None));
}

#[test]
fn criterion_6_forms() {
    let ids = [
        "lemma-4.2-kernel",
        "lemma-4.4-relations",
        "lemma-4.12-ncov",
        "cor-4.14-nprime-cov",
        "lemma-4.7-f-map",
        "thm-4.10-g-map",
        "thm-4.10-gn-equal",
        "lemma-4.5-reduce-teich",
        "lemma-4.1-dlog",
        "lemma-4.4-leibniz",
        "lemma-4.5-rewrites",
        "lemma-4.11-probe",
    ];
    let (out, _) = run_specs(over_fields(&ids, &FIELDS, FORMS_SAMPLES));
    assert!(report(6, "forms", &out, None));
}

#[test]
fn criterion_7_anchors() {
    let anchor_specs = [2u64, 3]
        .into_iter()
        .flat_map(|p| levels("anchor-normalization", p).map(move |n| SuiteSpec::new("anchor-normalization", p, 1, n)));
    let (mut anchors, _) = run_specs(anchor_specs);

    let (surj, reports) = run_specs([SuiteSpec::new("prop-1.2-surjective", 2, 1, 2).seed(SEED)]);
    if let Some(obs) = reports.first().and_then(|r| r.observed.as_ref()) {
        println!("    order witness at p=2 n=2: {obs}");
    }

    if !anchors.passed() {
        // Identities passing with a wrong anchor points at a sign or normalization slip.
        let (identities, _) = run_specs(over_fields(&["asw-bilinear", "classical-n1"], &[(2, 1), (3, 1)], 20));
        let kind = if identities.passed() { "normalization error" } else { "identity failure" };
        anchors.problems.insert(0, format!("anchor mismatch classified as {kind}"));
    }
    let a = report(7, "anchor [[1], t) = 1", &anchors, None);
    let s = report(7, "order p^n witness at p=2 n=2", &surj, None);
    assert!(a && s);
}

#[test]
fn criterion_8_classical_n1() {
    let specs = FIELDS.iter().map(|&(p, f)| SuiteSpec::new("classical-n1", p, f, 1).samples(CLASSICAL_SAMPLES).seed(SEED));
    let (out, _) = run_specs(specs);
    assert!(report(8, "n = 1 against the residue formula", &out, None));
}
