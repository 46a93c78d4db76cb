//! Acceptance run: one pass/fail line per criterion.  Exits nonzero if any
//! criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use qmasa::scalar::rational;
use qmasa::suites::{run_suite, Overrides};
use qmasa::verdict::{Status, VerdictRecord};

struct Criterion {
    id: u32,
    title: &'static str,
    suite: &'static str,
    overrides: Overrides,
    checks: &'static [&'static str],
    /// Minimum number of records expected, so an empty selection cannot pass.
    min_records: usize,
}

fn criteria() -> Vec<Criterion> {
    let base = Overrides::default;
    vec![
        Criterion {
            id: 1,
            title: "radial recurrence, L in {3,4,5}, n <= 8",
            suite: "hecke-core",
            overrides: Overrides { depth: Some(8), ..base() },
            checks: &["hecke.recurrence"],
            min_records: 21,
        },
        Criterion {
            id: 2,
            title: "h_n = P_n(h), n <= 8, L = 3",
            suite: "radial",
            overrides: Overrides { l: Some(3), depth: Some(8), ..base() },
            checks: &["radial.hn_polynomial"],
            min_records: 9,
        },
        Criterion {
            id: 3,
            title: "approximation residual decreases in delta, log-log slope in [0.3, 0.7]",
            suite: "lemma24",
            overrides: base(),
            checks: &["approx.residual", "approx.decreasing", "approx.slope", "approx.routes_agree"],
            min_records: 7,
        },
        Criterion {
            id: 4,
            title: "orbit product cases 1-7, L in {3,4}, window, 5 seeds",
            suite: "pukanszky",
            overrides: base(),
            checks: &["pukanszky.products"],
            min_records: 14,
        },
        Criterion {
            id: 5,
            title: "Gram matrices of beta and gamma families, m, n <= 3",
            suite: "pukanszky",
            overrides: base(),
            checks: &["pukanszky.gram"],
            min_records: 6,
        },
        Criterion {
            id: 6,
            title: "expansion and recursive relation, m, n <= 4, L = 3, l = 2",
            suite: "pukanszky",
            overrides: base(),
            checks: &["pukanszky.expansion", "pukanszky.relation"],
            min_records: 2,
        },
        Criterion {
            id: 7,
            title: "intertwiner exact for depth <= 4, sigma_min > 0 to depth 5, Toeplitz bracket a = +-1/2, k <= 32",
            suite: "pukanszky",
            overrides: base(),
            checks: &["pukanszky.intertwiner", "pukanszky.toeplitz"],
            min_records: 7,
        },
        Criterion {
            id: 8,
            title: "cross-orthogonality l' = 1, l = 2, total degree <= 6",
            suite: "pukanszky",
            overrides: base(),
            checks: &["pukanszky.cross"],
            min_records: 1,
        },
        Criterion {
            id: 9,
            title: "density moments at p = 0 within 1e-6, n <= 10 (p = -1/2 reported only)",
            suite: "density",
            overrides: base(),
            checks: &["density.moments", "density.walks"],
            min_records: 12,
        },
        Criterion {
            id: 10,
            title: "q-Fock core: positivity, adjointness, q-CCR, Wick words, covariance",
            suite: "fock-core",
            overrides: base(),
            checks: &[
                "fock.positivity",
                "fock.adjointness",
                "fock.qccr",
                "fock.field_symmetric",
                "fock.wick",
                "fock.wick_right",
                "fock.covariance",
                "fock.quantization_adjoint",
            ],
            min_records: 105 + 10 + 12,
        },
        Criterion {
            id: 11,
            title: "orthogonal configuration: exact zero beyond n + m, 49 pairs, q = +-1/2, N = 10",
            suite: "popa-orthogonal",
            overrides: base(),
            checks: &["popa.orthogonal"],
            min_records: 98,
        },
        Criterion {
            id: 12,
            title: "general configuration: decomposition j <= 6, envelope j in [4, 14], decreasing sweep",
            suite: "popa-general",
            overrides: Overrides { q: Some(rational(1, 2)), alpha: Some(rational(3, 5)), depth: Some(14), ..base() },
            checks: &["popa.decomposition", "popa.envelope", "popa.sweep_decreasing"],
            min_records: 3,
        },
        Criterion {
            id: 13,
            title: "tensor power norms j <= 12, growth ratio within 1e-6 by j = 30",
            suite: "fock-core",
            overrides: base(),
            checks: &["fock.norm_product", "fock.growth_ratio"],
            min_records: 2,
        },
    ]
}

fn main() -> ExitCode {
    // the pukanszky and fock-core suites feed several criteria; run each once
    let mut cache: HashMap<&str, (Vec<VerdictRecord>, u128)> = HashMap::new();
    let mut failed = 0;
    let total_start = Instant::now();
    for c in criteria() {
        let key = c.suite;
        if !cache.contains_key(key) || c.overrides.depth.is_some() || c.overrides.l.is_some() {
            let start = Instant::now();
            let recs = match run_suite(c.suite, &c.overrides, false) {
                Ok(r) => r,
                Err(e) => vec![VerdictRecord::new(c.suite, Status::Fail, format!("error: {e}"))],
            };
            cache.insert(key, (recs, start.elapsed().as_millis()));
        }
        let (recs, ms) = &cache[key];
        let selected: Vec<&VerdictRecord> =
            recs.iter().filter(|r| c.checks.contains(&r.check.as_str()) || r.residual.starts_with("error")).collect();
        let fails: Vec<&&VerdictRecord> = selected.iter().filter(|r| r.status == Status::Fail).collect();
        let anomalies = selected.iter().filter(|r| r.status == Status::Anomaly).count();
        let ok = fails.is_empty() && selected.len() >= c.min_records;
        if !ok {
            failed += 1;
        }
        let mut line = format!(
            "{} criterion {:>2}: {} [{} records",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            selected.len()
        );
        if anomalies > 0 {
            line.push_str(&format!(", {anomalies} anomalies"));
        }
        line.push_str(&format!(", suite {} {} ms]", c.suite, ms));
        println!("{line}");
        for f in fails.iter().take(5) {
            println!("    {}", f.to_json().unwrap_or_default());
        }
        if selected.len() < c.min_records {
            println!("    expected at least {} records", c.min_records);
        }
    }
    println!("acceptance: {} of 13 criteria passed in {} ms", 13 - failed, total_start.elapsed().as_millis());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
