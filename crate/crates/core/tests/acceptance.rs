//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Every criterion is evaluated in full. A criterion whose outcome differs from
//! `EXPECTED_FAILURES` fails the test; a known failure still prints FAIL.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tropline::dilworth::{
    circuit_label_sets, dilworth, geometric_dilworth, relabel_complements, tilde_dil_nminus2_circuits,
    tilde_dilworth_uniform,
};
use tropline::foundation::{rat, PlueckerVector, QMatrix, Rational, Subset};
use tropline::linespace::{
    genericity_report, gr36_minor_values, plucker_of_rowspace, reduced_w, sample_generic, SubspaceInput,
};
use tropline::matroid::{matroid_equal_by_labels, matroid_of_lines, Matroid};
use tropline::pipeline::{analyze_lines, identity_suite, tropical_coherence, LinesAnalysis};
use tropline::polyrel::Fault;
use tropline::tropical::{
    bergman_chart, fan_point, in_bergman_fan, in_trop_linear_space, link_graph, matroid_plucker, smooth_degree2,
    TropValue,
};

/// Criteria that cannot hold as worded, with the reason printed beside the FAIL line.
const EXPECTED_FAILURES: &[(usize, &str)] = &[(
    3,
    "published rows (2,4), (2,5), (3,5) disagree with the single-element row formula; \
     definition-derived values are pinned in tests/golden/u_v_n5_d2.json",
)];

const GOLDEN: &str = include_str!("golden/u_v_n5_d2.json");

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// `(d+1) × n` integer matrix of full row rank with entries in `[−2, 2]`; small entries make
/// special positions and a vanishing `q_{[d+1]}` common.
fn random_subspace(n: usize, d: usize, rng: &mut ChaCha8Rng) -> SubspaceInput {
    loop {
        let rows: Vec<Vec<Rational>> = (0..=d).map(|_| (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect()).collect();
        let m = QMatrix::from_rows(rows).unwrap();
        if m.rank() == d + 1 {
            return SubspaceInput::from_basis(m).unwrap();
        }
    }
}

fn shapes() -> Vec<(usize, usize)> {
    (4..=7).flat_map(|n| (1..=3).filter(move |&d| d + 1 < n).map(move |d| (n, d))).collect()
}

/// The 50 instances shared by criteria 1 and 2.
fn instance_set() -> Vec<SubspaceInput> {
    let shapes = shapes();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50).map(|k| shapes[k % shapes.len()]).map(|(n, d)| random_subspace(n, d, &mut rng)).collect()
}

fn criterion_1(analyses: &[LinesAnalysis], seconds: f64) -> Outcome {
    let unequal = analyses.iter().filter(|a| !a.matroids.all_equal()).count();
    let relabeled = analyses.iter().filter(|a| a.w.is_relabeled()).count();
    outcome(
        unequal == 0 && seconds < 60.0,
        format!("{} instances, {unequal} unequal, {relabeled} relabeled, {seconds:.1} s", analyses.len()),
    )
}

fn criterion_2(analyses: &[LinesAnalysis]) -> Outcome {
    let failing: Vec<String> = analyses
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.gale.holds())
        .map(|(k, a)| format!("#{k} {:?}", a.gale))
        .collect();
    outcome(failing.is_empty(), format!("{} instances, failing: {failing:?}", analyses.len()))
}

/// Evaluates `0`, `1`, `q134` or `-q124` at a Plücker vector.
fn eval_entry(expr: &str, q: &PlueckerVector) -> Rational {
    let (sign, body) = match expr.strip_prefix('-') {
        Some(rest) => (rat(-1), rest),
        None => (rat(1), expr),
    };
    match body.strip_prefix('q') {
        Some(digits) => sign * q.get(digits.parse::<Subset>().unwrap()),
        None => sign * rat(body.parse().unwrap()),
    }
}

fn eval_row(exprs: &Value, q: &PlueckerVector) -> Vec<Rational> {
    exprs.as_array().unwrap().iter().map(|e| eval_entry(e.as_str().unwrap(), q)).collect()
}

fn criterion_3() -> Outcome {
    let golden: Value = serde_json::from_str(GOLDEN).unwrap();
    let columns: Vec<Subset> =
        golden["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().parse().unwrap()).collect();
    let bases = [
        QMatrix::from_i64(&[&[1, 0, 0, 2, -1], &[0, 1, 0, 3, 5], &[0, 0, 1, -4, 7]]),
        QMatrix::from_i64(&[&[2, 1, 0, 7, -3], &[1, 1, 1, 0, 2], &[0, 3, 1, -5, 4]]),
    ];
    let mut published_mismatch = BTreeSet::new();
    let mut definition_mismatch = Vec::new();
    let mut v_ok = true;
    for basis in bases {
        let w = reduced_w(&SubspaceInput::from_basis(basis).unwrap());
        assert!(!w.is_relabeled());
        let q = plucker_of_rowspace(&w.entries).unwrap();
        let a = analyze_lines(&SubspaceInput::from_basis(w.entries.clone()).unwrap()).unwrap();
        assert_eq!(a.u.col_labels, columns);
        let u_row = |label: &str| {
            let s: Subset = label.parse().unwrap();
            let r = a.u.row_labels.iter().position(|&x| x == s).unwrap();
            a.u.entries.row(r).to_vec()
        };
        for (label, exprs) in golden["definition"]["U"].as_object().unwrap() {
            if u_row(label) != eval_row(exprs, &q) {
                definition_mismatch.push(format!("U {label}"));
            }
        }
        for label in golden["criterion_rows"].as_array().unwrap() {
            let label = label.as_str().unwrap();
            if u_row(label) != eval_row(&golden["published"]["U"][label], &q) {
                published_mismatch.insert(label.to_string());
            }
        }
        for (i, exprs) in golden["definition"]["V"].as_array().unwrap().iter().enumerate() {
            if a.v.entries.row(i) != eval_row(exprs, &q).as_slice() {
                definition_mismatch.push(format!("V row {i}"));
            }
        }
        // Published rows run over `d − i`; reversing ours must give the identity block.
        let reversed: Vec<Vec<Rational>> = (0..3).rev().map(|i| a.v.entries.row(i)[..3].to_vec()).collect();
        v_ok &= reversed == QMatrix::identity(3).to_rows();
        let col45 = a.v.col_labels.iter().position(|&c| c == Subset::of(&[4, 5])).unwrap();
        v_ok &= a.v.entries.column(col45) == eval_row(&golden["published"]["V_column_4,5"], &q);
    }
    outcome(
        published_mismatch.is_empty() && definition_mismatch.is_empty() && v_ok,
        format!(
            "verbatim U rows differing: {published_mismatch:?}; golden mismatches: {definition_mismatch:?}; \
             V identity block and column 45: {}",
            if v_ok { "ok" } else { "differ" }
        ),
    )
}

fn criterion_4() -> Outcome {
    let x1 = SubspaceInput::from_basis(QMatrix::from_i64(&[
        &[0, -271, -92, 0, -13, -54],
        &[0, -18, -7, -1, 0, -4],
        &[-1, 12293, 4173, 0, 588, 2450],
    ]))
    .unwrap();
    let x2 = SubspaceInput::from_basis(QMatrix::from_i64(&[
        &[1, 3, 0, 1, 5, 7],
        &[0, 0, 1, 3, -1, -1],
        &[1, 4, -1, -3, 0, 0],
    ]))
    .unwrap();
    let v1 = gr36_minor_values(x1.plucker()).unwrap();
    // `−q124·q356 + q456` at the normalised Plücker vector of X2.
    let q2 = x2.plucker();
    let q2 = q2.scale(&(rat(1) / q2.get(Subset::of(&[1, 2, 3]))));
    let at = |e: &[usize]| q2.get(Subset::of(e));
    let minor_x2 = -at(&[1, 2, 4]) * at(&[3, 5, 6]) + at(&[4, 5, 6]);
    let g1 = genericity_report(&x1).unwrap().is_generic;
    let g2 = genericity_report(&x2).unwrap().is_generic;
    let all_nonzero = v1.iter().all(|v| *v != rat(0));
    outcome(
        all_nonzero && minor_x2 == rat(0) && g1 && !g2,
        format!("X1 minors nonzero: {all_nonzero}, X2 minor = {minor_x2}, generic(X1) = {g1}, generic(X2) = {g2}"),
    )
}

fn criterion_5() -> Outcome {
    let shapes: Vec<(usize, usize)> = shapes();
    let mut truncations: BTreeMap<(usize, usize), Matroid> = BTreeMap::new();
    let mut unequal = Vec::new();
    for k in 0..20 {
        let (n, d) = shapes[k % shapes.len()];
        let x = sample_generic(n, d, 100 + k as u64).unwrap();
        let lines = matroid_of_lines(&reduced_w(&x)).unwrap();
        let target = truncations.entry((n, d)).or_insert_with(|| {
            let uniform = Matroid::uniform(n, (1..=n).map(|e| e.to_string()).collect()).unwrap();
            relabel_complements(&dilworth(&uniform, n - d).unwrap(), n).unwrap()
        });
        if !matroid_equal_by_labels(&lines, target) {
            unequal.push((n, d, k));
        }
    }
    outcome(unequal.is_empty(), format!("20 generic instances, unequal: {unequal:?}"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut unequal = Vec::new();
    for n in 3..=6 {
        let labels: Vec<String> = (1..=n).map(|e| e.to_string()).collect();
        let uniform = Matroid::uniform(n, labels.clone()).unwrap();
        let ks: BTreeSet<usize> = [2, n - 2].into_iter().collect();
        for k in ks {
            let combinatorial = dilworth(&uniform, k).unwrap();
            for seed in 0..10 {
                let geometric = geometric_dilworth(&QMatrix::identity(n), labels.clone(), k, seed).unwrap();
                checked += 1;
                if geometric.ground() != combinatorial.ground() || geometric.bases() != combinatorial.bases() {
                    unequal.push((n, k, seed));
                }
            }
        }
    }
    outcome(unequal.is_empty(), format!("{checked} draws, unequal: {unequal:?}"))
}

fn criterion_7() -> Outcome {
    let mut unequal = Vec::new();
    for n in 4..=6 {
        let closed = circuit_label_sets(&tilde_dil_nminus2_circuits(n).unwrap());
        let computed = circuit_label_sets(&tilde_dilworth_uniform(n, n - 2).unwrap().circuits());
        if closed != computed {
            unequal.push(n);
        }
    }
    outcome(unequal.is_empty(), format!("n = 4, 5, 6; unequal: {unequal:?}"))
}

fn criterion_8() -> Outcome {
    let m = tilde_dilworth_uniform(4, 2).unwrap();
    let flats = m.flats();
    let rank1 = flats.of_rank(1).count();
    let rank2 = flats.of_rank(2).count();
    let proper = flats.proper_nonempty().len();
    let link = link_graph(&m).unwrap();
    let smooth = smooth_degree2(&link).unwrap();
    let shape = (smooth.labels.len(), smooth.edges.len(), smooth.regularity(), smooth.girth());
    let passed =
        proper == 13 && rank1 == 6 && rank2 == 7 && link.edges.len() == 18 && shape == (10, 15, Some(3), Some(5));
    outcome(
        passed,
        format!(
            "{proper} flats ({rank1} + {rank2}), link edges {}, smoothed (|V|, |E|, regularity, girth) = {shape:?}",
            link.edges.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = 0;
    let mut tuples = 0;
    let mut certificates = 0;
    for d in 1..=2 {
        for n in (d + 2)..=6 {
            let r = identity_suite(n, d, Fault::None).unwrap();
            tuples += r.in2pl_checked + r.move_b_checked;
            if n <= 5 && d == 2 {
                certificates += r.certificates_checked;
                failures += r.failures.len();
            } else {
                failures += r.failures.iter().filter(|f| f.identity != "certificate").count();
            }
        }
    }
    outcome(
        failures == 0 && certificates > 0,
        format!("{tuples} identity tuples, {certificates} certificates at d = 2, {failures} failures"),
    )
}

fn criterion_10() -> Outcome {
    let mut reports = Vec::new();
    for (k, &(n, d)) in [(4, 1), (4, 2), (5, 1), (5, 2), (6, 1), (6, 2)].iter().enumerate() {
        let x = sample_generic(n, d, 300 + k as u64).unwrap();
        reports.push(((n, d), tropical_coherence(&x, 100, k as u64).unwrap()));
    }
    let coherent = reports.iter().all(|(_, r)| r.holds());

    let line_matroid = tilde_dilworth_uniform(4, 2).unwrap();
    let ray: Vec<Rational> = line_matroid.ground().iter().map(|l| rat(if l == "1,2" { -1 } else { 0 })).collect();
    let ray_ok = in_bergman_fan(&line_matroid, &ray)
        && in_trop_linear_space(&matroid_plucker(&line_matroid).unwrap(), &finite(&ray)).unwrap();

    let u34 = Matroid::uniform(3, (1..=4).map(|e| e.to_string()).collect()).unwrap();
    let chart = bergman_chart(&u34).unwrap();
    let chain = [Subset::of(&[1]).bits(), Subset::of(&[1, 2]).bits()];
    let point = fan_point(&chart, &chain, &[rat(1), rat(1)]).unwrap();
    let chain_ok = point == [rat(-2), rat(-1), rat(0), rat(0)]
        && in_bergman_fan(&u34, &point)
        && in_trop_linear_space(&matroid_plucker(&u34).unwrap(), &finite(&point)).unwrap();

    let failing: Vec<_> = reports.iter().filter(|(_, r)| !r.holds()).map(|(s, r)| (s, r)).collect();
    outcome(
        coherent && ray_ok && chain_ok,
        format!(
            "{} generic instances x 100 samples, failing: {failing:?}; −e_12 member: {ray_ok}; −(2,1,0,0) member: {chain_ok}",
            reports.len()
        ),
    )
}

fn finite(x: &[Rational]) -> Vec<TropValue> {
    x.iter().cloned().map(TropValue::Finite).collect()
}

#[test]
fn acceptance_criteria() {
    let started = Instant::now();
    let analyses: Vec<LinesAnalysis> = instance_set().iter().map(|x| analyze_lines(x).unwrap()).collect();
    let seconds = started.elapsed().as_secs_f64();

    let outcomes = [
        ("three-way matroid equality", criterion_1(&analyses, seconds)),
        ("Gale duality", criterion_2(&analyses)),
        ("U and V for n = 5, d = 2", criterion_3()),
        ("genericity of X1 and X2", criterion_4()),
        ("lines matroid equals relabeled Dilworth truncation", criterion_5()),
        ("geometric Dilworth oracle", criterion_6()),
        ("closed-form circuits", criterion_7()),
        ("Petersen link graph", criterion_8()),
        ("identity suite and certificates", criterion_9()),
        ("tropical coherence", criterion_10()),
    ];

    // Written to the raw handle so the lines survive the harness's output capture.
    let mut log = std::io::stderr().lock();
    let _ = writeln!(log);
    let mut unexpected = Vec::new();
    for (k, (name, o)) in outcomes.iter().enumerate() {
        let id = k + 1;
        let known = EXPECTED_FAILURES.iter().find(|(c, _)| *c == id);
        let _ = writeln!(log, "{} criterion {id}: {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if let (false, Some((_, why))) = (o.passed, known) {
            let _ = writeln!(log, "     known failure: {why}");
        }
        if o.passed == known.is_some() {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
