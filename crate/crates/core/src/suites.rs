//! The verification suites behind `verify <suite>`.  Defaults reproduce the
//! acceptance windows; every parameter can be overridden.

use std::time::Instant;

use num_traits::Zero;

use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::popa::{self, ExperimentConfig};
use crate::pukanszky::orthogonality::{cross_window, verify_orthogonality, Kind};
use crate::pukanszky::{expansion, products, toeplitz, PukanszkyContext};
use crate::qfock::quantization::{norm_growth, plane_rotation};
use crate::qfock::{q_factorial, FockSpace, FockVector, QGramCache};
use crate::radial::commutant::{commutant_probe, Window};
use crate::radial::density::moment_table;
use crate::radial::approx::{explicit_residual, log_log_slope, residual_sweep, AdjacentStep};
use crate::radial::RadialContext;
use crate::scalar::{format_rational, rational, rational_to_f64, Rational};
use crate::verdict::{format_float, Status, VerdictRecord};

pub const SUITES: [&str; 8] =
    ["hecke-core", "radial", "lemma24", "pukanszky", "fock-core", "popa-orthogonal", "popa-general", "density"];

/// Published default seed; seeds of a window are `seed, seed + 1, ...`.
pub const DEFAULT_SEED: u64 = 0;

/// δ grid of the approximation sweep, and its truncation tolerance.
pub const DELTAS: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
pub const TAIL_TOL: f64 = 1e-6;
pub const MOMENT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub l: Option<usize>,
    pub p: Option<Rational>,
    pub q: Option<Rational>,
    pub dim: Option<usize>,
    pub trunc: Option<usize>,
    pub depth: Option<usize>,
    pub delta: Option<f64>,
    pub alpha: Option<Rational>,
    pub seed: Option<u64>,
}

impl Overrides {
    fn seeds(&self, count: u64) -> Vec<u64> {
        let s = self.seed.unwrap_or(DEFAULT_SEED);
        (s..s + count).collect()
    }

    fn ls(&self, default: &[usize]) -> Vec<usize> {
        self.l.map_or_else(|| default.to_vec(), |l| vec![l])
    }

    fn qs(&self, default: &[Rational]) -> Vec<Rational> {
        self.q.clone().map_or_else(|| default.to_vec(), |q| vec![q])
    }
}

/// Collects records, stamping each group with its runtime when asked.
struct Collector {
    timings: bool,
    records: Vec<VerdictRecord>,
}

impl Collector {
    fn run(&mut self, check: &str, f: impl FnOnce() -> Result<Vec<VerdictRecord>>) {
        let start = Instant::now();
        let recs = f().unwrap_or_else(|e| vec![VerdictRecord::new(check, Status::Fail, format!("error: {e}"))]);
        let ms = start.elapsed().as_millis() as u64;
        for mut r in recs {
            if self.timings {
                r.runtime_ms = Some(ms);
            }
            self.records.push(r);
        }
    }
}

pub fn run_suite(name: &str, o: &Overrides, timings: bool) -> Result<Vec<VerdictRecord>> {
    let mut c = Collector { timings, records: Vec::new() };
    match name {
        "hecke-core" => hecke_core(&mut c, o),
        "radial" => radial(&mut c, o),
        "lemma24" => approx(&mut c, o),
        "pukanszky" => pukanszky(&mut c, o),
        "fock-core" => fock_core(&mut c, o),
        "popa-orthogonal" => popa_orthogonal(&mut c, o),
        "popa-general" => popa_general(&mut c, o),
        "density" => density(&mut c, o),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    }
    Ok(c.records)
}

fn hecke_core(c: &mut Collector, o: &Overrides) {
    let max_n = o.depth.unwrap_or(8);
    for l in o.ls(&[3, 4, 5]) {
        c.run("hecke.recurrence", || {
            let ctx = RadialContext::new(l, max_n)?;
            (2..=max_n)
                .map(|n| {
                    let r = ctx.verify_recurrence(n)?;
                    Ok(VerdictRecord::exact("hecke.recurrence", r.residual.len() + r.companion_residual.len())
                        .param("L", l)
                        .param("n", n))
                })
                .collect()
        });
    }
}

fn radial(c: &mut Collector, o: &Overrides) {
    let l = o.l.unwrap_or(3);
    let max_n = o.depth.unwrap_or(8);
    c.run("radial.hn_polynomial", || {
        let ctx = RadialContext::new(l, max_n)?;
        Ok((0..=max_n)
            .map(|n| {
                let diff = ctx.substitute(&ctx.express_hn_in_h(n)) - ctx.h_n(n);
                VerdictRecord::exact("radial.hn_polynomial", diff.len()).param("L", l).param("n", n)
            })
            .collect())
    });
    let k = o.trunc.unwrap_or(4);
    c.run("radial.commutant", || {
        let rep = commutant_probe(&RadialContext::new(l, k)?, Window::FullImage)?;
        Ok(vec![VerdictRecord::exact("radial.commutant", rep.non_radial_rank)
            .param("L", l)
            .param("K", k)
            .param("kernel_dim", rep.kernel_dim)])
    });
}

fn approx(c: &mut Collector, o: &Overrides) {
    let l = o.l.unwrap_or(3);
    let deltas: Vec<f64> = o.delta.map_or_else(|| DELTAS.to_vec(), |d| vec![d]);
    c.run("approx.residual", || {
        let ctx = RadialContext::new(l, 1)?;
        let (v, w) = (Word::from_reduced(vec![1]), Word::from_reduced(vec![0]));
        let rows = residual_sweep(&ctx, &v, &w, &deltas, TAIL_TOL)?;
        let mut out: Vec<VerdictRecord> = rows
            .iter()
            .map(|r| {
                VerdictRecord::new("approx.residual", Status::Pass, format_float(r.residual))
                    .param("L", l)
                    .param("delta", r.delta)
                    .param("K", r.truncation)
            })
            .collect();
        if rows.len() > 1 {
            let decreasing = rows.windows(2).all(|p| p[1].residual < p[0].residual);
            out.push(VerdictRecord::property("approx.decreasing", decreasing, rows.last().unwrap().residual).param("L", l));
            let slope = log_log_slope(&rows);
            out.push(VerdictRecord::property("approx.slope", (0.3..=0.7).contains(&slope), slope).param("L", l));
        }
        // the shell calculus against explicit Hecke products at small K
        let step = AdjacentStep::new(&ctx, Word::identity(), 0, 1)?;
        let shell = crate::radial::approx::adjacent_residual(&ctx, &step, 0.4, 3, 0.0)?;
        let explicit = explicit_residual(&ctx, &v, &w, 0.4, 3, 0.0)?;
        out.push(VerdictRecord::within("approx.routes_agree", (shell - explicit).abs(), 1e-12).param("K", 3));
        Ok(out)
    });
}

fn pukanszky(c: &mut Collector, o: &Overrides) {
    let seeds = o.seeds(5);
    let max_l = o.depth.unwrap_or(3);
    for l in o.ls(&[3, 4]) {
        c.run("pukanszky.products", || {
            let ctx = PukanszkyContext::new(l)?;
            let all = products::verify_window(&ctx, max_l, 3, &seeds)?;
            Ok((1..=7u8)
                .map(|case| {
                    let of_case: Vec<_> = all.iter().filter(|r| r.case == case).collect();
                    let bad = of_case.iter().filter(|r| !r.passed()).count();
                    VerdictRecord::exact("pukanszky.products", bad)
                        .param("L", l)
                        .param("case", case)
                        .param("checks", of_case.len())
                })
                .collect())
        });
        c.run("pukanszky.gram", || {
            let ctx = PukanszkyContext::new(l)?;
            let mut out = Vec::new();
            for (kind, deg) in [(Kind::Beta, 1), (Kind::Gamma, 2), (Kind::Gamma, 3)] {
                let rep = verify_orthogonality(&ctx, kind, deg, 3, (seeds[0], seeds[1]))?;
                out.push(
                    VerdictRecord::exact("pukanszky.gram", rep.mismatches.len() + rep.p_dependent)
                        .param("L", l)
                        .param("kind", format!("{kind:?}").to_lowercase())
                        .param("l", deg)
                        .param("entries", rep.entries),
                );
            }
            Ok(out)
        });
    }
    let l = o.l.unwrap_or(3);
    c.run("pukanszky.expansion", || {
        let ctx = PukanszkyContext::new(l)?;
        let rels = expansion::verify_relation(&ctx, 4, 4, 2, (seeds[0], seeds[1]))?;
        let residual = rels.iter().filter(|r| !r.beta.residual.is_zero() || !r.gamma.residual.is_zero()).count();
        let bad = rels.iter().filter(|r| !r.passed()).count();
        Ok(vec![
            VerdictRecord::exact("pukanszky.expansion", residual).param("L", l).param("l", 2),
            VerdictRecord::exact("pukanszky.relation", bad).param("L", l).param("l", 2),
        ])
    });
    c.run("pukanszky.intertwiner", || {
        let ctx = PukanszkyContext::new(l)?;
        (1..=5)
            .map(|depth| {
                let r = expansion::intertwiner_check(&ctx, depth, 2, (seeds[0], seeds[1]))?;
                let rec = if depth <= 4 {
                    VerdictRecord::property("pukanszky.intertwiner", r.passed(), r.sigma_min)
                } else {
                    VerdictRecord::property("pukanszky.intertwiner", r.bounds_ok(), r.sigma_min)
                };
                Ok(rec
                    .param("L", l)
                    .param("depth", depth)
                    .param("exact_failures", r.failures.len())
                    .param("sigma_max", format_float(r.sigma_max))
                    .param("lower_bound", format_float(r.lower_bound))
                    .param("upper_bound", format_float(r.upper_bound))
                    .param("shift_norm", format_float(r.shift_norm)))
            })
            .collect()
    });
    c.run("pukanszky.toeplitz", || {
        let mut out = Vec::new();
        for a in [0.5, -0.5] {
            let mut worst: f64 = f64::INFINITY;
            let mut ok = true;
            for k in 1..=32 {
                let b = toeplitz::toeplitz_bounds(a, k)?;
                ok &= b.within_bracket();
                worst = worst.min(b.min_eig);
            }
            out.push(VerdictRecord::property("pukanszky.toeplitz", ok, worst).param("a", a).param("k_max", 32));
        }
        Ok(out)
    });
    c.run("pukanszky.cross", || {
        let ctx = PukanszkyContext::new(l)?;
        let reps = cross_window(&ctx, 2, 1, 6, (seeds[0], seeds[1]))?;
        let bad = reps.iter().filter(|r| !r.passed()).count();
        Ok(vec![VerdictRecord::exact("pukanszky.cross", bad)
            .param("L", l)
            .param("pairs", reps.iter().filter(|r| !r.by_degree).count())])
    });
}

fn q_grid() -> Vec<Rational> {
    vec![rational(-9, 10), rational(-1, 2), rational(0, 1), rational(1, 2), rational(9, 10)]
}

fn fock_core(c: &mut Collector, o: &Overrides) {
    let dims: Vec<usize> = o.dim.map_or_else(|| vec![1, 2, 3], |d| vec![d]);
    let max_n = o.trunc.unwrap_or(6);
    for q in o.qs(&q_grid()) {
        for &d in &dims {
            c.run("fock.positivity", || {
                let g = QGramCache::build(&FockSpace::new(d, max_n, q.clone())?)?;
                Ok((0..=max_n)
                    .map(|n| {
                        VerdictRecord::property("fock.positivity", g.is_positive_definite(n), g.min_eigenvalue(n))
                            .param("q", format_rational(&q))
                            .param("d", d)
                            .param("n", n)
                    })
                    .collect())
            });
        }
    }
    let qs = o.qs(&[rational(1, 2), rational(-1, 3)]);
    for q in &qs {
        let qs_str = format_rational(q);
        c.run("fock.relations", || {
            let s = FockSpace::new(2, 5, q.clone())?;
            let xi = vec![rational(3, 5), rational(4, 5)];
            let eta = vec![rational(1, 1), rational(-2, 1)];
            let mut adj = s.adjointness_defects(&xi)?.len();
            adj += s.adjointness_defects(&s.unit(1))?.len();
            Ok(vec![
                VerdictRecord::exact("fock.adjointness", adj).param("q", &qs_str).param("N", 5),
                VerdictRecord::exact("fock.qccr", s.qccr_defects(&xi, &eta).len() + s.qccr_defects(&s.unit(0), &s.unit(0)).len())
                    .param("q", &qs_str)
                    .param("N", 5),
                VerdictRecord::exact("fock.field_symmetric", s.field_symmetry_defects(&xi)?.len()).param("q", &qs_str),
                VerdictRecord::exact("fock.wick", s.wick_defect(5, false).len()).param("q", &qs_str).param("d", 2),
                VerdictRecord::exact("fock.wick_right", s.wick_defect(5, true).len()).param("q", &qs_str).param("d", 2),
            ])
        });
        c.run("fock.covariance", || {
            let n = o.trunc.unwrap_or(6);
            let s = FockSpace::new(2, n, q.clone())?;
            let u = plane_rotation(2, rational(3, 5), rational(4, 5));
            let mut out = Vec::new();
            for word in ["0", "0.0", "0.1", "1.0", "1.1"] {
                let r = s.second_quantization_check(&u, &FockVector::basis(word.parse()?))?;
                out.push(
                    VerdictRecord::exact("fock.covariance", r.mismatched.len())
                        .param("q", &qs_str)
                        .param("N", n)
                        .param("symbol", word),
                );
            }
            let adj = s.quantization_adjoint_defects(&u, 4)?.len();
            out.push(VerdictRecord::exact("fock.quantization_adjoint", adj).param("q", &qs_str));
            Ok(out)
        });
    }
    c.run("fock.norm_growth", || {
        let q = o.q.clone().unwrap_or(rational(1, 2));
        let s = FockSpace::new(1, 12, q.clone())?;
        let bad = (0..=12).filter(|&j| s.power_norm_sq(&[rational(1, 1)], j).ok() != Some(q_factorial(&q, j))).count();
        let g = norm_growth(rational_to_f64(&q), 30)?;
        let dev = (g[30].ratio - 1.0).abs();
        Ok(vec![
            VerdictRecord::exact("fock.norm_product", bad).param("q", format_rational(&q)).param("j_max", 12),
            VerdictRecord::within("fock.growth_ratio", dev, 1e-6).param("q", format_rational(&q)).param("j", 30),
        ])
    });
}

fn popa_orthogonal(c: &mut Collector, o: &Overrides) {
    let n = o.trunc.unwrap_or(10);
    for q in o.qs(&[rational(1, 2), rational(-1, 2)]) {
        let qs = format_rational(&q);
        c.run("popa.orthogonal", || {
            let mut out = Vec::new();
            for (x, y) in popa::wick_pairs(2, 2) {
                let cfg = ExperimentConfig { x_word: x.clone(), y_word: y.clone(), ..ExperimentConfig::orthogonal(q.clone(), n) };
                let d = popa::decay_orthogonal(&cfg)?;
                let tail = d.rows.iter().filter(|r| r.k > cfg.n() + cfg.m()).count();
                out.push(
                    VerdictRecord::exact("popa.orthogonal", d.nonzero_tail.len())
                        .param("q", &qs)
                        .param("N", n)
                        .param("x", &x)
                        .param("y", &y)
                        .param("tail_rows", tail),
                );
            }
            Ok(out)
        });
        c.run("popa.commutation", || {
            let s = FockSpace::new(2, 6, q.clone())?;
            let bad = popa::wick_pairs(2, 2).iter().filter(|(x, y)| !popa::commutation_defects(&s, x, y).is_empty()).count();
            Ok(vec![VerdictRecord::exact("popa.commutation", bad).param("q", &qs).param("N", 6)])
        });
    }
    c.run("popa.phase", || {
        let q = o.q.clone().unwrap_or(rational(1, 2));
        let n = o.trunc.unwrap_or(12);
        let cfg = ExperimentConfig::orthogonal(q.clone(), n);
        let rows = popa::decay_orthogonal_phase(&cfg, n + 2)?;
        let head = &rows[..=n];
        let decreasing = head.windows(2).all(|p| p[1].norm < p[0].norm);
        let last = rows.last().expect("nonempty").norm;
        Ok(vec![
            VerdictRecord::property("popa.phase_decreasing", decreasing, head[n].norm)
                .param("q", format_rational(&q))
                .param("N", n),
            VerdictRecord::within("popa.phase_final", last, 1e-6).param("q", format_rational(&q)).param("k", n + 2),
        ])
    });
}

fn general_config(o: &Overrides) -> Result<ExperimentConfig> {
    ExperimentConfig::general(
        o.q.clone().unwrap_or(rational(1, 2)),
        o.trunc.unwrap_or(10),
        o.alpha.clone().unwrap_or(rational(3, 5)),
    )
}

fn popa_general(c: &mut Collector, o: &Overrides) {
    c.run("popa.decomposition", || {
        let cfg = general_config(o)?;
        let s = FockSpace::new(2, 6, cfg.q.clone())?;
        let v = cfg.direction();
        let bad = (0..=6).filter(|&j| popa::v_tilde(&cfg.alpha, &cfg.beta, j, j) != s.tensor_power(&v, j)).count();
        Ok(vec![VerdictRecord::exact("popa.decomposition", bad).param("alpha", format_rational(&cfg.alpha))])
    });
    c.run("popa.general", || {
        let cfg = general_config(o)?;
        let max_j = o.depth.unwrap_or(14);
        let g = popa::decay_general(&cfg, 4..=max_j)?;
        let nm = cfg.n() + cfg.m();
        let worst = g.envelope.iter().map(|r| rational_to_f64(&r.lhs) / r.envelope).fold(0.0, f64::max);
        let q = format_rational(&cfg.q);
        let a = format_rational(&cfg.alpha);
        Ok(vec![
            VerdictRecord::property("popa.envelope", g.envelope_holds(), worst)
                .param("q", &q)
                .param("alpha", &a)
                .param("C", format_float(g.c))
                .param("j_max", max_j),
            VerdictRecord::property("popa.sweep_decreasing", g.sweep_decreasing(nm), g.sweep.last().map_or(0.0, |r| r.1))
                .param("q", &q)
                .param("alpha", &a)
                .param("N", cfg.truncation),
        ])
    });
}

fn density(c: &mut Collector, o: &Overrides) {
    let l = o.l.unwrap_or(3);
    let ps = o.p.clone().map_or_else(|| vec![rational(0, 1), rational(-1, 2)], |p| vec![p]);
    let max_n = o.depth.unwrap_or(10);
    for p in ps {
        c.run("density.moments", || {
            let ctx = RadialContext::new(l, 1)?;
            let binding = p.is_zero();
            let ps = format_rational(&p);
            match moment_table(&ctx, &p, max_n, 1e-12) {
                Ok(rows) => Ok(rows
                    .into_iter()
                    .map(|r| {
                        let status = match (r.abs_err < MOMENT_TOL, binding) {
                            (true, _) => Status::Pass,
                            (false, true) => Status::Fail,
                            (false, false) => Status::Anomaly,
                        };
                        VerdictRecord::new("density.moments", status, format_float(r.abs_err))
                            .param("L", l)
                            .param("p", &ps)
                            .param("n", r.n)
                            .param("exact", format_rational(&r.exact))
                    })
                    .collect()),
                Err(Error::DensityAnomaly { x, denominator }) if !binding => {
                    Ok(vec![VerdictRecord::new("density.moments", Status::Anomaly, format_float(denominator))
                        .param("L", l)
                        .param("p", &ps)
                        .param("x", x)])
                }
                Err(e) => Err(e),
            }
        });
    }
    c.run("density.walks", || {
        let ctx = RadialContext::new(l, 1)?;
        let zero = rational(0, 1);
        let m2 = ctx.moment(2, &zero);
        let m4 = ctx.moment(4, &zero);
        let (w2, w4) = (l as i64, (l * (2 * l - 1)) as i64);
        let bad = usize::from(m2 != rational(w2, 1)) + usize::from(m4 != rational(w4, 1));
        Ok(vec![VerdictRecord::exact("density.walks", bad).param("L", l).param("tau_h4", format_rational(&m4))])
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &Overrides::default(), false), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn small_overrides_run() {
        let o = Overrides { l: Some(3), depth: Some(4), ..Default::default() };
        let recs = run_suite("hecke-core", &o, true).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.passed() && r.runtime_ms.is_some()));
    }

    #[test]
    fn errors_become_fail_records() {
        let o = Overrides { alpha: Some(rational(1, 2)), ..Default::default() };
        let recs = run_suite("popa-general", &o, false).unwrap();
        assert!(recs.iter().all(|r| r.status == Status::Fail && r.residual.starts_with("error")));
    }
}
