//! Finite-window intertwining experiments for two generator masas of a
//! q-Gaussian algebra.
//!
//! The conditional expectation onto `W(e_t)''` is realised on the Fock
//! space as the q-orthogonal projection onto `span{e_t^{⊗n}}`.  The vectors
//! `η_k = u_k Ω` come in two kinds: normalised pure powers, on which the
//! decay is exact, and phases `f_k(J)Ω` of the truncated Jacobi matrix, which
//! are symbols of genuine unitaries at the truncated level.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qfock::wick::jacobi_matrix;
use crate::qfock::{q_factorial, FockSpace, FockVector, TensorWord};
use crate::scalar::{parse_rational, rational, rational_to_f64, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub q: Rational,
    pub d: usize,
    pub truncation: usize,
    /// `v = α e_0 + β e_1`; `α = 0` is the orthogonal configuration.
    pub alpha: Rational,
    pub beta: Rational,
    pub x_word: TensorWord,
    pub y_word: TensorWord,
}

impl ExperimentConfig {
    /// `η_k` along `e_0`, projection onto `e_1`, `x = y = W(e_1)`.
    pub fn orthogonal(q: Rational, truncation: usize) -> Self {
        ExperimentConfig {
            q,
            d: 2,
            truncation,
            alpha: Rational::zero(),
            beta: rational(1, 1),
            x_word: TensorWord::pure(1, 1),
            y_word: TensorWord::pure(1, 1),
        }
    }

    /// `η_k` along `v = α e_0 + β e_1` with `β = √(1 - α²)`, which must be
    /// rational.
    pub fn general(q: Rational, truncation: usize, alpha: Rational) -> Result<Self> {
        let beta = (rational(1, 1) - alpha.clone() * alpha.clone())
            .sqrt_exact()
            .ok_or_else(|| Error::Precondition(format!("1 - α² is not a rational square for α = {alpha}")))?;
        let cfg = ExperimentConfig { alpha, beta, ..Self::orthogonal(q, truncation) };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn n(&self) -> usize {
        self.x_word.len()
    }

    pub fn m(&self) -> usize {
        self.y_word.len()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.alpha.is_zero()
    }

    pub fn validate(&self) -> Result<()> {
        let pre = |msg: String| Err(Error::Precondition(msg));
        if self.d < 2 {
            return pre(format!("need d >= 2, got {}", self.d));
        }
        if self.q.abs() >= rational(1, 1) {
            return pre(format!("need |q| < 1, got {}", self.q));
        }
        if self.alpha.clone() * self.alpha.clone() + self.beta.clone() * self.beta.clone() != rational(1, 1) {
            return pre(format!("α² + β² != 1 for α = {}, β = {}", self.alpha, self.beta));
        }
        if self.beta.is_zero() {
            return pre("β must be nonzero".into());
        }
        if self.truncation < self.n() + self.m() + 2 {
            return Err(Error::TruncationTooSmall(format!(
                "N = {} but |x| + |y| + 2 = {}",
                self.truncation,
                self.n() + self.m() + 2
            )));
        }
        for w in [&self.x_word, &self.y_word] {
            if w.letters().iter().any(|&i| i as usize >= self.d) {
                return pre(format!("word {w} uses an index outside dimension {}", self.d));
            }
        }
        Ok(())
    }

    /// Flat `key = value` text; `#` starts a comment.  Keys: `q`, `d`, `N`
    /// (or `trunc`), `alpha`, `beta`, `x`, `y`.  Unset keys keep the
    /// orthogonal defaults with `q = 1/2`, `N = 10`; `beta` defaults to
    /// `√(1 - α²)`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::orthogonal(rational(1, 2), 10);
        let mut beta_set = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            if k.trim() == "beta" {
                beta_set = true;
            }
            cfg.set(k.trim(), v.trim())?;
        }
        if !beta_set {
            cfg.beta = (rational(1, 1) - cfg.alpha.clone() * cfg.alpha.clone())
                .sqrt_exact()
                .ok_or_else(|| Error::Parse("beta missing and 1 - α² is not a rational square".into()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| v.parse::<usize>().map_err(|_| Error::Parse(format!("{key}: not an integer: {v:?}")));
        match key {
            "q" => self.q = parse_rational(value)?,
            "d" | "dim" => self.d = int(value)?,
            "N" | "trunc" => self.truncation = int(value)?,
            "alpha" => self.alpha = parse_rational(value)?,
            "beta" => self.beta = parse_rational(value)?,
            "x" => self.x_word = value.parse()?,
            "y" => self.y_word = value.parse()?,
            _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn space(&self) -> Result<FockSpace<Rational>> {
        FockSpace::new(self.d, self.truncation, self.q.clone())
    }

    pub fn direction(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.d];
        v[0] = self.alpha.clone();
        v[1] = self.beta.clone();
        v
    }
}

/// q-orthogonal projection onto `span{e_t^{⊗n} : n <= N}`, by solving the
/// normal equations on the pure powers.
pub fn proj_b<S: Scalar>(space: &FockSpace<S>, v: &FockVector<S>, t: u8) -> Result<FockVector<S>> {
    let top = v.max_degree().unwrap_or(0).max(space.truncation());
    let powers: Vec<FockVector<S>> = (0..=top).map(|n| FockVector::basis(TensorWord::pure(t, n))).collect();
    let mut gram = Matrix::zeros(top + 1, top + 1);
    let mut rhs = Matrix::zeros(top + 1, 1);
    // raw inner products: v may sit above the truncation
    let ext = FockSpace::new(space.dim(), top, space.q().clone())?;
    for (a, pa) in powers.iter().enumerate() {
        for (b, pb) in powers.iter().enumerate() {
            gram[(a, b)] = ext.inner(pa, pb)?;
        }
        rhs[(a, 0)] = ext.inner(v, pa)?.conj();
    }
    let c = gram.solve(&rhs).ok_or_else(|| Error::Singular("pure-power Gram".into()))?;
    Ok(FockVector::from_terms((0..=top).map(|n| (TensorWord::pure(t, n), c[(n, 0)].clone()))))
}

/// The pure `e_t`-power components of `v`.  Pure powers are q-orthogonal to
/// every other word, so this equals [`proj_b`].
pub fn pure_part<S: Scalar>(v: &FockVector<S>, t: u8) -> FockVector<S> {
    FockVector::from_terms(v.terms().iter().filter(|(w, _)| w.is_pure(t)).map(|(w, c)| (w.clone(), c.clone())))
}

/// `Q_l`: keeps exponents `<= l` of a vector supported on pure `e_t` powers.
pub fn proj_q<S: Scalar>(v: &FockVector<S>, t: u8, l: usize) -> Result<FockVector<S>> {
    if let Some(w) = v.terms().keys().find(|w| !w.is_pure(t)) {
        return Err(Error::Precondition(format!("word {w} is not a power of e_{t}")));
    }
    Ok(v.compress(l))
}

/// `‖P v‖_q²` with `P` the projection onto `e_t` powers.
pub fn projected_norm_sq<S: Scalar>(v: &FockVector<S>, q: &S, t: u8) -> S {
    let mut acc = S::zero();
    for (w, c) in pure_part(v, t).terms() {
        acc += c.norm_sq() * q_factorial(q, w.len());
    }
    acc
}

/// `x ỹ η` with `x = W(x_word)` and `ỹ = W_r(y_word)`, exact.
pub fn sandwich<S: Scalar>(space: &FockSpace<S>, x: &TensorWord, y: &TensorWord, eta: &FockVector<S>) -> FockVector<S> {
    let ye = space.right_wick_apply(&FockVector::basis(y.clone()), eta);
    space.wick_apply(&FockVector::basis(x.clone()), &ye)
}

/// Basis words `w` of degree `<= N - |x| - |y|` with `x ỹ w != ỹ x w`.
pub fn commutation_defects<S: Scalar>(space: &FockSpace<S>, x: &TensorWord, y: &TensorWord) -> Vec<TensorWord> {
    let (sx, sy) = (FockVector::basis(x.clone()), FockVector::basis(y.clone()));
    let max = space.truncation().saturating_sub(x.len() + y.len());
    space
        .basis(max)
        .into_iter()
        .filter(|w| {
            let v = FockVector::basis(w.clone());
            let a = space.wick_apply(&sx, &space.right_wick_apply(&sy, &v));
            let b = space.right_wick_apply(&sy, &space.wick_apply(&sx, &v));
            a != b
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DecayRow {
    pub k: usize,
    /// `‖P(x ỹ η_k)‖²` with `η_k` normalised.
    pub norm_sq: Rational,
}

impl DecayRow {
    pub fn norm(&self) -> f64 {
        rational_to_f64(&self.norm_sq).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct OrthogonalDecay {
    pub rows: Vec<DecayRow>,
    /// Rows with `k > |x| + |y|` whose norm is not exactly zero.
    pub nonzero_tail: Vec<usize>,
}

impl OrthogonalDecay {
    pub fn passed(&self) -> bool {
        self.nonzero_tail.is_empty()
    }
}

/// `‖P(x ỹ η_k)‖` for pure powers `η_k ∝ e_0^{⊗k}`, `P` onto `e_1` powers,
/// `k <= N - |x| - |y|`, in exact arithmetic.
pub fn decay_orthogonal(cfg: &ExperimentConfig) -> Result<OrthogonalDecay> {
    cfg.validate()?;
    if !cfg.is_orthogonal() {
        return Err(Error::Precondition("the orthogonal experiment needs α = 0".into()));
    }
    let space = cfg.space()?;
    let nm = cfg.n() + cfg.m();
    let mut rows = Vec::new();
    let mut nonzero_tail = Vec::new();
    for k in 0..=cfg.truncation - nm {
        let v = sandwich(&space, &cfg.x_word, &cfg.y_word, &FockVector::basis(TensorWord::pure(0, k)));
        let p = proj_b(&space, &v, 1)?;
        let norm_sq = space.norm_sq(&p)? / q_factorial(&cfg.q, k);
        if k > nm && !norm_sq.is_zero() {
            nonzero_tail.push(k);
        }
        rows.push(DecayRow { k, norm_sq });
    }
    Ok(OrthogonalDecay { rows, nonzero_tail })
}

/// Every pair of Wick words of length `<= max_len` over `d` letters.
pub fn wick_pairs(d: usize, max_len: usize) -> Vec<(TensorWord, TensorWord)> {
    let space = FockSpace::new(d, max_len, 0.0).expect("valid dimension");
    let words = space.basis(max_len);
    words.iter().cartesian_product(&words).map(|(a, b)| (a.clone(), b.clone())).collect()
}

/// Coefficients of `f_k(J)Ω` in the normalised pure-power basis, with `J` the
/// Jacobi matrix of `W(e)` on degrees `<= N` and
/// `f_k(λ) = exp(i k arccos(λ / c))`, `c = 2/√(1-q)`.
pub fn jacobi_phase(q: f64, truncation: usize, k: usize) -> Result<Vec<Complex64>> {
    let j = jacobi_matrix(q, truncation)?;
    let eig = j.symmetric_eigen();
    let c = 2.0 / (1.0 - q).sqrt();
    let n = truncation + 1;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, k as f64 * (l / c).clamp(-1.0, 1.0).acos()))
        .collect();
    let v: &DMatrix<f64> = &eig.eigenvectors;
    Ok((0..n).map(|a| (0..n).map(|i| v[(a, i)] * phases[i] * v[(0, i)]).sum()).collect())
}

/// `η_k` of the given kind along `e_t`, as a Fock vector of unit q-norm.
pub fn eta_sequence(kind: EtaKind, q: f64, truncation: usize, k: usize, t: u8) -> Result<FockVector<Complex64>> {
    match kind {
        EtaKind::PurePower => {
            if k > truncation {
                return Err(Error::TruncationOverflow { degree: k, truncation });
            }
            let norm = q_factorial(&q, k).sqrt();
            Ok(FockVector::monomial(TensorWord::pure(t, k), Complex64::new(1.0 / norm, 0.0)))
        }
        EtaKind::JacobiPhase => {
            let a = jacobi_phase(q, truncation, k)?;
            Ok(FockVector::from_terms(
                a.into_iter().enumerate().map(|(n, c)| (TensorWord::pure(t, n), c / q_factorial(&q, n).sqrt())),
            ))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaKind {
    PurePower,
    JacobiPhase,
}

#[derive(Clone, Debug)]
pub struct PhaseRow {
    pub k: usize,
    pub norm: f64,
    /// `|⟨η_k, Ω⟩|`.
    pub overlap: f64,
}

/// `‖P(x ỹ η_k)‖` for Jacobi-phase `η_k` along `e_0`, `k <= max_k`, in
/// floating point.
pub fn decay_orthogonal_phase(cfg: &ExperimentConfig, max_k: usize) -> Result<Vec<PhaseRow>> {
    cfg.validate()?;
    let q = rational_to_f64(&cfg.q);
    let space = FockSpace::new(cfg.d, cfg.truncation + cfg.n() + cfg.m(), Complex64::new(q, 0.0))?;
    let qc = Complex64::new(q, 0.0);
    (0..=max_k)
        .map(|k| {
            let eta = eta_sequence(EtaKind::JacobiPhase, q, cfg.truncation, k, 0)?;
            let overlap = eta.coeff(&TensorWord::vacuum()).norm();
            let v = sandwich(&space, &cfg.x_word, &cfg.y_word, &eta);
            let norm = projected_norm_sq(&v, &qc, 1).re.max(0.0).sqrt();
            Ok(PhaseRow { k, norm, overlap })
        })
        .collect()
}

/// `R_{j,k}`: the sum of the `binom(j, k)` words with `j - k` letters `a`
/// and `k` letters `b`.
pub fn r_jk<S: Scalar>(j: usize, k: usize, (a, b): (u8, u8)) -> Result<FockVector<S>> {
    if k > j {
        return Err(Error::Precondition(format!("need k <= j, got j={j}, k={k}")));
    }
    Ok(FockVector::from_terms((0..j).combinations(k).map(|pos| {
        let mut letters = vec![a; j];
        for p in pos {
            letters[p] = b;
        }
        (TensorWord::new(letters), S::one())
    })))
}

/// `Σ_{k <= min(j, cut)} α^{j-k} β^k R_{j,k}`; with `cut >= j` this is
/// `v^{⊗j}`.
pub fn v_tilde<S: Scalar>(alpha: &S, beta: &S, j: usize, cut: usize) -> FockVector<S> {
    let mut out = FockVector::zero();
    for k in 0..=j.min(cut) {
        let c = alpha.powi((j - k) as u32) * beta.powi(k as u32);
        out += &r_jk::<S>(j, k, (0, 1)).expect("k <= j").scale(&c);
    }
    out
}

#[derive(Clone, Debug)]
pub struct EnvelopeRow {
    pub j: usize,
    /// `(1-q)^j ‖ṽ^{⊗j}‖²`, exact.
    pub lhs: Rational,
    /// `C j^{n+m} |α|^j`.
    pub envelope: f64,
}

#[derive(Clone, Debug)]
pub struct GeneralDecay {
    /// The constant fixed at the first row.
    pub c: f64,
    pub envelope: Vec<EnvelopeRow>,
    /// `k -> ‖P(x ỹ η_k)‖` with `η_k` the normalised `v^{⊗k}`, `P` onto `e_0`.
    pub sweep: Vec<(usize, f64)>,
}

impl GeneralDecay {
    pub fn envelope_holds(&self) -> bool {
        self.envelope.iter().all(|r| rational_to_f64(&r.lhs) <= r.envelope * (1.0 + 1e-12))
    }

    /// Strictly decreasing for `k > n + m`.
    pub fn sweep_decreasing(&self, nm: usize) -> bool {
        let tail: Vec<f64> = self.sweep.iter().filter(|(k, _)| *k > nm).map(|r| r.1).collect();
        tail.windows(2).all(|w| w[1] < w[0])
    }

    pub fn passed(&self, nm: usize) -> bool {
        self.envelope_holds() && self.sweep_decreasing(nm)
    }
}

/// Envelope of `(1-q)^j ‖ṽ^{⊗j}‖²` over `j ∈ js` (the constant is fitted at
/// the first `j`), and the decay sweep for `k <= N - n - m`.
pub fn decay_general(cfg: &ExperimentConfig, js: std::ops::RangeInclusive<usize>) -> Result<GeneralDecay> {
    cfg.validate()?;
    if cfg.alpha.abs() >= rational(1, 1) {
        return Err(Error::Precondition("need |α| < 1".into()));
    }
    let nm = cfg.n() + cfg.m();
    let top = *js.end();
    let space = FockSpace::new(cfg.d, top.max(cfg.truncation), cfg.q.clone())?;
    let one_minus_q = rational(1, 1) - cfg.q.clone();
    let abs_alpha = rational_to_f64(&cfg.alpha.abs());
    let mut envelope = Vec::new();
    let mut c = 0.0;
    for j in js {
        let vt = v_tilde(&cfg.alpha, &cfg.beta, j, nm);
        let lhs = one_minus_q.powi(j as u32) * space.norm_sq(&vt)?;
        let shape = (j as f64).powi(nm as i32) * abs_alpha.powi(j as i32);
        if envelope.is_empty() {
            c = rational_to_f64(&lhs) / shape;
        }
        envelope.push(EnvelopeRow { j, lhs, envelope: c * shape });
    }

    let q = rational_to_f64(&cfg.q);
    let fspace = FockSpace::new(cfg.d, cfg.truncation, q)?;
    let (a, b) = (rational_to_f64(&cfg.alpha), rational_to_f64(&cfg.beta));
    let sweep = (0..=cfg.truncation - nm)
        .map(|k| {
            let eta = v_tilde(&a, &b, k, k).scale(&(1.0 / q_factorial(&q, k).sqrt()));
            let v = sandwich(&fspace, &cfg.x_word, &cfg.y_word, &eta);
            (k, projected_norm_sq(&v, &q, 0).max(0.0).sqrt())
        })
        .collect();
    Ok(GeneralDecay { c, envelope, sweep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfock::q_number;

    fn w(s: &str) -> TensorWord {
        s.parse().unwrap()
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::parse("# general\nq = 0.5\nN=12\nalpha = 3/5\nx = 1.1\n").unwrap();
        assert_eq!(cfg.q, rational(1, 2));
        assert_eq!(cfg.beta, rational(4, 5));
        assert_eq!(cfg.x_word, w("1.1"));
        assert_eq!(cfg.truncation, 12);
        assert!(ExperimentConfig::parse("alpha = 1/2").is_err());
        assert!(ExperimentConfig::parse("N = 3\nx = 1.1").is_err());
        assert!(ExperimentConfig::parse("bogus = 1").is_err());
        assert!(ExperimentConfig::parse("alpha = 3/5\nbeta = 3/5").is_err());
        assert!(ExperimentConfig::general(rational(1, 2), 10, rational(3, 5)).is_ok());
    }

    #[test]
    fn projection_examples() {
        let q = rational(1, 2);
        let s = FockSpace::new(2, 4, q).unwrap();
        let omega = FockVector::vacuum();
        assert_eq!(proj_b(&s, &omega, 1).unwrap(), omega);
        let e111 = FockVector::basis(w("1.1.1"));
        assert_eq!(proj_b(&s, &e111, 1).unwrap(), e111);
        assert!(proj_b(&s, &FockVector::basis(w("0.1")), 1).unwrap().is_zero());
        let mixed = FockVector::from_terms([(w("0.1"), rational(2, 1)), (w("1.1"), rational(-1, 3)), (w("1"), rational(5, 1))]);
        assert_eq!(proj_b(&s, &mixed, 1).unwrap(), pure_part(&mixed, 1));
    }

    #[test]
    fn projection_is_q_orthogonal() {
        // v - Pv is q-orthogonal to every pure power, against the brute-force
        // permutation Gram
        let s = FockSpace::new(2, 4, rational(-1, 3)).unwrap();
        let v = FockVector::from_terms(
            s.basis(4).into_iter().enumerate().map(|(i, w)| (w, rational((i as i64 % 5) - 2, 1 + i as i64 % 3))),
        );
        let r = v.clone() - proj_b(&s, &v, 0).unwrap();
        for n in 0..=4 {
            let e = FockVector::basis(TensorWord::pure(0, n));
            assert!(r.plain_dot(&s.pq_oracle(&e).unwrap()).is_zero());
        }
    }

    #[test]
    fn q_projection() {
        let v = FockVector::from_terms([(w("0.0.0"), rational(1, 1)), (w("0"), rational(2, 1))]);
        assert_eq!(proj_q(&v, 0, 2).unwrap(), FockVector::monomial(w("0"), rational(2, 1)));
        assert_eq!(proj_q(&v, 0, 3).unwrap(), v);
        let once = proj_q(&v, 0, 1).unwrap();
        assert_eq!(proj_q(&once, 0, 1).unwrap(), once);
        assert!(proj_q(&FockVector::<Rational>::basis(w("0.1")), 0, 2).is_err());
        let eta = FockVector::<Rational>::basis(TensorWord::pure(0, 3));
        assert!(proj_q(&eta, 0, 2).unwrap().is_zero());
    }

    #[test]
    fn decay_at_vacuum_and_beyond() {
        let q = rational(1, 2);
        let cfg = ExperimentConfig::orthogonal(q.clone(), 10);
        let d = decay_orthogonal(&cfg).unwrap();
        // x ỹ Ω = e1 ⊗ e1 + Ω
        assert_eq!(d.rows[0].norm_sq, rational(1, 1) + q + rational(1, 1));
        assert!(d.rows[3].norm_sq.is_zero());
        assert!(d.passed());
        assert_eq!(d.rows.len(), 9);
    }

    #[test]
    fn decay_needs_orthogonal_config() {
        let cfg = ExperimentConfig::general(rational(1, 2), 10, rational(3, 5)).unwrap();
        assert!(decay_orthogonal(&cfg).is_err());
    }

    #[test]
    fn left_and_right_words_commute() {
        let s = FockSpace::new(2, 6, rational(1, 2)).unwrap();
        for (x, y) in [("1", "1"), ("0.1", "1"), ("1.1", "0.1"), ("0.0", "1.0")] {
            assert!(commutation_defects(&s, &w(x), &w(y)).is_empty(), "{x} {y}");
        }
        // two left words do not commute
        let (a, b) = (FockVector::basis(w("0")), FockVector::basis(w("1")));
        let v = FockVector::vacuum();
        assert_ne!(s.wick_apply(&a, &s.wick_apply(&b, &v)), s.wick_apply(&b, &s.wick_apply(&a, &v)));
    }

    #[test]
    fn r_jk_examples() {
        let r = r_jk::<Rational>(2, 1, (0, 1)).unwrap();
        assert_eq!(r, FockVector::from_terms([(w("0.1"), rational(1, 1)), (w("1.0"), rational(1, 1))]));
        assert_eq!(r_jk::<Rational>(5, 0, (0, 1)).unwrap(), FockVector::basis(TensorWord::pure(0, 5)));
        assert_eq!(r_jk::<Rational>(6, 3, (0, 1)).unwrap().len(), 20);
        assert!(r_jk::<Rational>(2, 3, (0, 1)).is_err());
    }

    #[test]
    fn tensor_power_decomposition() {
        let s = FockSpace::new(2, 6, rational(1, 2)).unwrap();
        let (a, b) = (rational(3, 5), rational(4, 5));
        for j in 0..=6 {
            assert_eq!(v_tilde(&a, &b, j, j), s.tensor_power(&[a.clone(), b.clone()], j));
        }
    }

    #[test]
    fn alpha_zero_keeps_single_shell() {
        let (a, b) = (rational(0, 1), rational(1, 1));
        let v = v_tilde(&a, &b, 5, 2);
        assert!(v.is_zero());
        assert_eq!(v_tilde(&a, &b, 2, 2), FockVector::basis(w("1.1")));
    }

    #[test]
    fn jacobi_phase_vectors() {
        let q = 0.5;
        for k in [0usize, 1, 5, 12] {
            let eta = eta_sequence(EtaKind::JacobiPhase, q, 12, k, 0).unwrap();
            let s = FockSpace::new(1, 12, Complex64::new(q, 0.0)).unwrap();
            assert!((s.norm_sq(&eta).unwrap().re - 1.0).abs() < 1e-10);
        }
        let a = jacobi_phase(q, 12, 0).unwrap();
        assert!((a[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let pure = eta_sequence(EtaKind::PurePower, q, 6, 3, 0).unwrap();
        assert!((pure.coeff(&TensorWord::pure(0, 3)).re - 1.0 / q_factorial(&q, 3).sqrt()).abs() < 1e-15);
        assert!((q_number(&q, 3) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn phase_overlap_decreases() {
        let cfg = ExperimentConfig::orthogonal(rational(1, 2), 12);
        let rows = decay_orthogonal_phase(&cfg, 6).unwrap();
        assert!((rows[0].overlap - 1.0).abs() < 1e-12);
        assert!(rows[6].overlap < rows[0].overlap);
    }

    #[test]
    fn envelope_small() {
        let cfg = ExperimentConfig::general(rational(1, 2), 8, rational(3, 5)).unwrap();
        let g = decay_general(&cfg, 4..=9).unwrap();
        assert_eq!(g.envelope.len(), 6);
        assert!((rational_to_f64(&g.envelope[0].lhs) - g.envelope[0].envelope).abs() < 1e-12);
    }
}
