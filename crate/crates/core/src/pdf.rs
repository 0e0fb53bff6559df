//! Positive definite functions on free groups: the radial Haagerup family
//! r^{|x|}, free products of single-generator functions, and free Riesz
//! products, together with a Gram-matrix positive-definiteness certificate.
//!
//! Square-summability and classification thresholds are decided from closed
//! forms of the declared coefficient families, never from truncated numeric
//! sums; partial sums appear only as cross-checks in the test suites.

use crate::linalg::{eigh, CMat, C64};
use crate::words::{count_words, enumerate_words_up_to, ReducedWord, WordError};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PdfError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("word uses generator x{gen} but the rank is {rank}")]
    GeneratorOutOfRange { gen: u32, rank: u32 },
    #[error("no factor function for generator x{gen}")]
    MissingFactor { gen: u32 },
    #[error("declared summability flags contradict the family: {0}")]
    InconsistentFlags(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("eigensolver failure: {0}")]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error("riesz spec parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Radial parameter for f_r(x) = r^{|x|} on F_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaagerupParam {
    r: f64,
    k: u32,
}

impl HaagerupParam {
    pub fn new(r: f64, k: u32) -> Result<Self, PdfError> {
        if !(r > 0.0 && r < 1.0) || !r.is_finite() {
            return Err(PdfError::Parameter(format!("r must lie in (0,1), got {r}")));
        }
        if k == 0 {
            return Err(PdfError::Parameter("rank k must be at least 1".into()));
        }
        Ok(HaagerupParam { r, k })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// f_r(w) = r^{|w|}; errors when the word leaves the rank-k alphabet.
pub fn haagerup_eval(p: &HaagerupParam, w: &ReducedWord) -> Result<f64, PdfError> {
    let g = w.max_generator();
    if g > p.k {
        return Err(PdfError::GeneratorOutOfRange { gen: g, rank: p.k });
    }
    Ok(p.r.powi(w.len() as i32))
}

/// Square-summability of f_r over F_k. The sphere of radius n has
/// 2k(2k-1)^(n-1) points, so sum f_r^2 converges iff q = (2k-1) r^2 < 1,
/// with value 1 + (2k/(2k-1)) q/(1-q) (the n = 0 term included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2Report {
    pub q: f64,
    pub in_l2: bool,
    pub norm_sq: Option<f64>,
}

pub fn haagerup_l2_report(p: &HaagerupParam) -> L2Report {
    let k = p.k as f64;
    let q = (2.0 * k - 1.0) * p.r * p.r;
    let in_l2 = q < 1.0;
    let norm_sq = in_l2.then(|| 1.0 + (2.0 * k / (2.0 * k - 1.0)) * q / (1.0 - q));
    L2Report { q, in_l2, norm_sq }
}

/// Smallest m >= 1 with (2k-1) r^(2m) < 1, i.e. the first power f_r^m that is
/// square-summable. Always exists since r < 1.
pub fn haagerup_min_l2_power(p: &HaagerupParam) -> u32 {
    let base = 2.0 * p.k as f64 - 1.0;
    let mut m = 1u32;
    while base * p.r.powi(2 * m as i32) >= 1.0 {
        m += 1;
    }
    m
}

/// Position of r against the square-summability threshold (2k-1)^{-1/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialRegime {
    Below,
    At,
    Above,
}

impl fmt::Display for RadialRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialRegime::Below => write!(f, "below"),
            RadialRegime::At => write!(f, "at"),
            RadialRegime::Above => write!(f, "above"),
        }
    }
}

/// Pairing of f_r against the length-n sphere indicator, with the
/// (n+1) sqrt(#sphere) norm bound for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiPairingReport {
    pub n: u64,
    pub pairing: f64,
    pub haagerup_bound: f64,
    pub regime: RadialRegime,
    /// For the above-threshold regime: first sphere radius (within the scan
    /// bound) where the pairing exceeds the bound.
    pub first_exceeding_n: Option<u64>,
}

/// log of 2k(2k-1)^(n-1) for n >= 1, and 0 for n = 0.
fn log_sphere_count(k: u32, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (2.0 * k as f64).ln() + (n - 1) as f64 * (2.0 * k as f64 - 1.0).ln()
}

pub fn chi_pairing_report(p: &HaagerupParam, n: u64, scan_bound: u64) -> ChiPairingReport {
    let k = p.k;
    // Direct product when it stays finite; the log form guards comparisons.
    let log_pairing = n as f64 * p.r.ln() + log_sphere_count(k, n);
    let pairing = match count_words(k, n) {
        Ok(c) if c < (1u128 << 100) => p.r.powi(n as i32) * c as f64,
        _ => log_pairing.exp(),
    };
    let log_bound = ((n + 1) as f64).ln() + 0.5 * log_sphere_count(k, n);
    let haagerup_bound = log_bound.exp();

    let threshold = 1.0 / (2.0 * k as f64 - 1.0).sqrt();
    let regime = if (p.r - threshold).abs() <= 1e-12 * threshold {
        RadialRegime::At
    } else if p.r < threshold {
        RadialRegime::Below
    } else {
        RadialRegime::Above
    };

    let first_exceeding_n = if regime == RadialRegime::Above {
        (1..=scan_bound).find(|&m| {
            let lp = m as f64 * p.r.ln() + log_sphere_count(k, m);
            let lb = ((m + 1) as f64).ln() + 0.5 * log_sphere_count(k, m);
            lp > lb
        })
    } else {
        None
    };

    ChiPairingReport { n, pairing, haagerup_bound, regime, first_exceeding_n }
}

/// A normalized function on one free factor Z: a map n -> c with value 1 at 0.
#[derive(Clone)]
pub struct FactorFunction {
    eval: Arc<dyn Fn(i64) -> C64 + Send + Sync>,
    label: String,
}

impl fmt::Debug for FactorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactorFunction({})", self.label)
    }
}

impl FactorFunction {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(i64) -> C64 + Send + Sync + 'static,
    ) -> Result<Self, PdfError> {
        let label = label.into();
        let v0 = eval(0);
        if (v0 - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(PdfError::Parameter(format!(
                "factor `{label}` is not normalized: value at 0 is {v0}"
            )));
        }
        Ok(FactorFunction { eval: Arc::new(eval), label })
    }

    /// Restriction of f_r to one factor: n -> r^{|n|}.
    pub fn haagerup(r: f64) -> Result<Self, PdfError> {
        if !(r > 0.0 && r < 1.0) {
            return Err(PdfError::Parameter(format!("r must lie in (0,1), got {r}")));
        }
        FactorFunction::new(format!("haagerup r={r}"), move |n| {
            C64::new(r.powi(n.unsigned_abs().min(i32::MAX as u64) as i32), 0.0)
        })
    }

    /// One Riesz factor delta_e + a delta_x + conj(a) delta_{x^-1}.
    pub fn riesz(alpha: C64) -> Result<Self, PdfError> {
        FactorFunction::new(format!("riesz alpha={alpha}"), move |n| match n {
            0 => C64::new(1.0, 0.0),
            1 => alpha,
            -1 => alpha.conj(),
            _ => C64::new(0.0, 0.0),
        })
    }

    pub fn eval(&self, n: i64) -> C64 {
        (self.eval)(n)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Free product evaluation: the value on a reduced word is the product of the
/// per-factor values over its syllables. Generator x_i uses factors[i-1].
pub fn free_product_eval(factors: &[FactorFunction], w: &ReducedWord) -> Result<C64, PdfError> {
    let mut acc = C64::new(1.0, 0.0);
    for s in w.syllables() {
        let f = factors
            .get((s.gen - 1) as usize)
            .ok_or(PdfError::MissingFactor { gen: s.gen })?;
        acc *= f.eval(s.exp);
    }
    Ok(acc)
}

/// Coefficient family of a free Riesz product prod (delta_e + a_k delta_{x_k}
/// + conj(a_k) delta_{x_k^{-1}}). Families are closed under the coefficient
/// power maps a_k -> a_k^m, which keeps every summability question analytic.
#[derive(Debug, Clone, PartialEq)]
pub enum RieszFamily {
    /// Finitely many coefficients a_1..a_n; a_k = 0 beyond.
    Finite { alphas: Vec<C64> },
    /// a_k = c q^(k-1), 0 < q < 1.
    Geometric { c: C64, q: f64 },
    /// a_k = c k^(-p), p >= 0 (p = 0 is the constant family).
    PowerLaw { c: C64, p: f64 },
    /// a_k = c / ln(10 + k)^p, p >= 0.
    LogLaw { c: C64, p: f64 },
}

/// Declared summability facts; when present they are cross-checked against
/// the family closed forms and inconsistencies are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeclaredFlags {
    pub beta_finite: bool,
    pub all_powers_divergent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszSpec {
    family: RieszFamily,
    declared: Option<DeclaredFlags>,
}

/// beta = sum |a_k|^2 and gamma = beta^2 - sum |a_k|^4 (the off-diagonal part
/// of beta^2); `None` encodes a divergent sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summability {
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    /// Whether sum_k |a_k|^(2m) diverges for every m >= 1.
    pub all_powers_divergent: bool,
    /// Whether a_k -> 0.
    pub vanishing: bool,
}

/// Riemann zeta for s > 1 by Euler-Maclaurin with three Bernoulli terms;
/// absolute accuracy far below 1e-13 for s >= 1.01 at this cutoff.
fn zeta(s: f64) -> f64 {
    debug_assert!(s > 1.0);
    let n = 32.0f64;
    let mut sum = 0.0;
    let mut k = 1.0;
    while k < n {
        sum += k.powf(-s);
        k += 1.0;
    }
    let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let b2 = s * n.powf(-s - 1.0) / 12.0;
    let b4 = -s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
    let b6 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * n.powf(-s - 5.0) / 30240.0;
    sum + tail + b2 + b4 + b6
}

impl RieszSpec {
    pub fn new(family: RieszFamily, declared: Option<DeclaredFlags>) -> Result<Self, PdfError> {
        let max_mod = match &family {
            RieszFamily::Finite { alphas } => {
                if alphas.iter().any(|a| a.norm() == 0.0) {
                    return Err(PdfError::Parameter(
                        "finite riesz coefficients must be nonzero".into(),
                    ));
                }
                alphas.iter().map(|a| a.norm()).fold(0.0, f64::max)
            }
            RieszFamily::Geometric { c, q } => {
                if !(*q > 0.0 && *q < 1.0) {
                    return Err(PdfError::Parameter(format!("q must lie in (0,1), got {q}")));
                }
                c.norm()
            }
            RieszFamily::PowerLaw { c, p } | RieszFamily::LogLaw { c, p } => {
                if *p < 0.0 || !p.is_finite() {
                    return Err(PdfError::Parameter(format!("p must be >= 0, got {p}")));
                }
                // both families are nonincreasing in k, so k = 1 is extremal
                match &family {
                    RieszFamily::PowerLaw { c, .. } => c.norm(),
                    _ => c.norm() / (11f64).ln().powf(*p),
                }
            }
        };
        if max_mod == 0.0 && !matches!(family, RieszFamily::Finite { .. }) {
            return Err(PdfError::Parameter("coefficient scale c must be nonzero".into()));
        }
        if max_mod > 0.5 + 1e-12 {
            return Err(PdfError::Parameter(format!(
                "riesz coefficients must satisfy |a_k| <= 1/2, max is {max_mod}"
            )));
        }
        let spec = RieszSpec { family, declared };
        if let Some(d) = declared {
            let s = spec.summability();
            if d.beta_finite != s.beta.is_some() {
                return Err(PdfError::InconsistentFlags(format!(
                    "declared beta_finite={} but the family gives {}",
                    d.beta_finite,
                    if s.beta.is_some() { "a finite beta" } else { "beta = infinity" }
                )));
            }
            if d.all_powers_divergent != s.all_powers_divergent {
                return Err(PdfError::InconsistentFlags(format!(
                    "declared all_powers_divergent={} but the family gives {}",
                    d.all_powers_divergent, s.all_powers_divergent
                )));
            }
        }
        Ok(spec)
    }

    pub fn family(&self) -> &RieszFamily {
        &self.family
    }

    /// Coefficient a_k (k >= 1); 0 beyond the support of a finite family.
    pub fn alpha(&self, k: u32) -> C64 {
        assert!(k >= 1, "coefficient indices start at 1");
        match &self.family {
            RieszFamily::Finite { alphas } => {
                alphas.get((k - 1) as usize).copied().unwrap_or(C64::new(0.0, 0.0))
            }
            RieszFamily::Geometric { c, q } => c * q.powi(k as i32 - 1),
            RieszFamily::PowerLaw { c, p } => c * (k as f64).powf(-p),
            RieszFamily::LogLaw { c, p } => c * (10.0 + k as f64).ln().powf(*p).recip(),
        }
    }

    /// Closed-form summability of the coefficient family.
    pub fn summability(&self) -> Summability {
        match &self.family {
            RieszFamily::Finite { alphas } => {
                let beta: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
                let p4: f64 = alphas.iter().map(|a| a.norm_sqr() * a.norm_sqr()).sum();
                Summability {
                    beta: Some(beta),
                    gamma: Some(beta * beta - p4),
                    all_powers_divergent: false,
                    vanishing: true,
                }
            }
            RieszFamily::Geometric { c, q } => {
                let c2 = c.norm_sqr();
                let beta = c2 / (1.0 - q * q);
                let p4 = c2 * c2 / (1.0 - q.powi(4));
                Summability {
                    beta: Some(beta),
                    gamma: Some(beta * beta - p4),
                    all_powers_divergent: false,
                    vanishing: true,
                }
            }
            RieszFamily::PowerLaw { c, p } => {
                // sum |a_k|^(2m) = |c|^(2m) zeta(2mp), finite iff 2mp > 1
                let c2 = c.norm_sqr();
                let beta = (2.0 * p > 1.0).then(|| c2 * zeta(2.0 * p));
                let gamma = beta.map(|b| b * b - c2 * c2 * zeta(4.0 * p));
                Summability {
                    beta,
                    gamma,
                    // some power converges as soon as p > 0; p = 0 is constant
                    all_powers_divergent: false,
                    vanishing: *p > 0.0,
                }
            }
            RieszFamily::LogLaw { c, p } => {
                // sum 1/ln(10+k)^(2mp) diverges for every m and p
                let _ = c;
                Summability {
                    beta: None,
                    gamma: None,
                    all_powers_divergent: true,
                    vanishing: *p > 0.0,
                }
            }
        }
    }
}

/// Value of the free Riesz product at a reduced word: the product over
/// syllables of a_k (exponent +1), conj(a_k) (exponent -1), or 0 (|exp| >= 2);
/// the identity evaluates to 1.
pub fn riesz_eval(spec: &RieszSpec, w: &ReducedWord) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for s in w.syllables() {
        let a = spec.alpha(s.gen);
        acc *= match s.exp {
            1 => a,
            -1 => a.conj(),
            _ => return C64::new(0.0, 0.0),
        };
    }
    acc
}

/// The spec whose product evaluates word-wise to the m-th power of the
/// original: coefficients a_k^m, computed in closed form per family.
pub fn riesz_power(spec: &RieszSpec, m: u32) -> Result<RieszSpec, PdfError> {
    if m == 0 {
        return Err(PdfError::Parameter("power m must be at least 1".into()));
    }
    let family = match spec.family() {
        RieszFamily::Finite { alphas } => RieszFamily::Finite {
            alphas: alphas.iter().map(|a| a.powu(m)).collect(),
        },
        RieszFamily::Geometric { c, q } => {
            RieszFamily::Geometric { c: c.powu(m), q: q.powi(m as i32) }
        }
        RieszFamily::PowerLaw { c, p } => {
            RieszFamily::PowerLaw { c: c.powu(m), p: p * m as f64 }
        }
        RieszFamily::LogLaw { c, p } => RieszFamily::LogLaw { c: c.powu(m), p: p * m as f64 },
    };
    // declared flags do not transfer through powers; recompute from scratch
    RieszSpec::new(family, None)
}

/// Where the Riesz product sits relative to the reduced group algebra dual:
/// square-summable, bounded on it, singular to every element of it, or
/// outside the norm bound that the square-summable criterion gives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RieszClass {
    InL2,
    InBLambda,
    SingularToBLambda,
    OutsideBLambdaBound,
    Unknown,
}

impl fmt::Display for RieszClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RieszClass::InL2 => write!(f, "in_l2"),
            RieszClass::InBLambda => write!(f, "in_B_lambda"),
            RieszClass::SingularToBLambda => write!(f, "singular_to_B_lambda"),
            RieszClass::OutsideBLambdaBound => write!(f, "outside_B_lambda_bound"),
            RieszClass::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszClassification {
    pub class: RieszClass,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
}

/// Classification by the summability thresholds: gamma < 1 gives a
/// square-summable product, gamma <= 1 keeps it bounded on the reduced
/// algebra, divergent beta makes it singular to that dual, and beta > 2
/// pushes it outside the bound available from the square-summable criterion.
pub fn riesz_classify(spec: &RieszSpec) -> RieszClassification {
    let s = spec.summability();
    let class = match (s.beta, s.gamma) {
        (Some(_), Some(g)) if g < 1.0 => RieszClass::InL2,
        (Some(_), Some(g)) if g <= 1.0 => RieszClass::InBLambda,
        (None, _) => RieszClass::SingularToBLambda,
        (Some(b), _) if b > 2.0 => RieszClass::OutsideBLambdaBound,
        _ => RieszClass::Unknown,
    };
    RieszClassification { class, beta: s.beta, gamma: s.gamma }
}

/// True when every power of the product is singular to the reduced dual:
/// the coefficients vanish at infinity, stay in (0, 1/2], and
/// sum |a_k|^(2m) diverges for every m.
pub fn powers_all_singular(spec: &RieszSpec) -> bool {
    let s = spec.summability();
    s.vanishing && s.all_powers_divergent
}

/// Certificate from the Gram positive-definiteness check.
#[derive(Debug, Clone, PartialEq)]
pub struct GramCertificate {
    pub word_count: usize,
    pub min_eigenvalue: f64,
    pub hermitian_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Builds the Gram matrix [f(s^{-1} t)] over all reduced words of length at
/// most max_len in F_k and certifies its minimum eigenvalue against -tol.
/// The entry count is limited by `cap`.
pub fn gram_psd_check(
    f: &dyn Fn(&ReducedWord) -> C64,
    k: u32,
    max_len: u64,
    tol: f64,
    cap: u64,
) -> Result<GramCertificate, PdfError> {
    let words = enumerate_words_up_to(k, max_len, cap)?;
    let n = words.len();
    let entries = (n as u64).checked_mul(n as u64).ok_or(WordError::Resource {
        size: u64::MAX,
        cap,
    })?;
    if entries > cap {
        return Err(PdfError::Word(WordError::Resource { size: entries, cap }));
    }
    let inverses: Vec<ReducedWord> = words.iter().map(|w| w.inverse()).collect();
    let g = CMat::from_fn(n, n, |i, j| f(&inverses[i].concat(&words[j])));
    let dev = g.hermitian_deviation();
    let h = g.hermitian_part();
    let eig = eigh(&h)?;
    let min_eigenvalue = eig.values.first().copied().unwrap_or(0.0);
    Ok(GramCertificate {
        word_count: n,
        min_eigenvalue,
        hermitian_deviation: dev,
        tolerance: tol,
        pass: min_eigenvalue >= -tol && dev <= tol.max(1e-12),
    })
}

/// The three function axioms checked by `general_haagerup_validate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomKind {
    /// u(e) = 1.
    Normalization,
    /// |u(x)| <= 1.
    Modulus,
    /// conj(u(x)) = u(x^{-1}).
    ConjugateSymmetry,
    /// u(xy) = u(x) u(y) whenever |xy| = |x| + |y|.
    Multiplicativity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomViolation {
    pub kind: AxiomKind,
    pub x: ReducedWord,
    pub y: Option<ReducedWord>,
    pub lhs: C64,
    pub rhs: C64,
}

/// Checks the multiplicative-on-non-cancelling-pairs axioms of a candidate
/// Haagerup-type function on the given word set (expected to contain the
/// identity and be closed under inverses). Returns all violations found.
pub fn general_haagerup_validate(
    u: &dyn Fn(&ReducedWord) -> C64,
    words: &[ReducedWord],
    tol: f64,
) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    let e = ReducedWord::identity();
    let ue = u(&e);
    if (ue - C64::new(1.0, 0.0)).norm() > tol {
        out.push(AxiomViolation {
            kind: AxiomKind::Normalization,
            x: e.clone(),
            y: None,
            lhs: ue,
            rhs: C64::new(1.0, 0.0),
        });
    }
    for x in words {
        let ux = u(x);
        if ux.norm() > 1.0 + tol {
            out.push(AxiomViolation {
                kind: AxiomKind::Modulus,
                x: x.clone(),
                y: None,
                lhs: ux,
                rhs: C64::new(1.0, 0.0),
            });
        }
        let uxi = u(&x.inverse());
        if (ux.conj() - uxi).norm() > tol {
            out.push(AxiomViolation {
                kind: AxiomKind::ConjugateSymmetry,
                x: x.clone(),
                y: None,
                lhs: ux.conj(),
                rhs: uxi,
            });
        }
    }
    for x in words {
        for y in words {
            let xy = x.concat(y);
            if xy.len() != x.len() + y.len() {
                continue;
            }
            let lhs = u(&xy);
            let rhs = u(x) * u(y);
            if (lhs - rhs).norm() > tol {
                out.push(AxiomViolation {
                    kind: AxiomKind::Multiplicativity,
                    x: x.clone(),
                    y: Some(y.clone()),
                    lhs,
                    rhs,
                });
            }
        }
    }
    out
}

/// Text form of a Riesz spec: `finite:<c>,<c>,...`, `geometric:c=<r>,q=<r>`,
/// `powerlaw:c=<r>,p=<r>`, `loglaw:c=<r>,p=<r>`; complex scalars as `a+bi`.
pub fn parse_riesz_spec(text: &str) -> Result<RieszSpec, PdfError> {
    let t = text.trim();
    let (head, rest) = t.split_once(':').ok_or(PdfError::Parse {
        col: 1,
        msg: "expected `<family>:<params>`".into(),
    })?;
    let body_col = head.len() + 2;
    let family = match head {
        "finite" => {
            let mut alphas = Vec::new();
            let mut col = body_col;
            for piece in rest.split(',') {
                alphas.push(parse_complex(piece).map_err(|(c, msg)| PdfError::Parse {
                    col: col + c - 1,
                    msg,
                })?);
                col += piece.len() + 1;
            }
            RieszFamily::Finite { alphas }
        }
        "geometric" | "powerlaw" | "loglaw" => {
            let mut c_val: Option<C64> = None;
            let mut second: Option<f64> = None;
            let second_key = if head == "geometric" { "q" } else { "p" };
            let mut col = body_col;
            for piece in rest.split(',') {
                let (key, val) = piece.split_once('=').ok_or(PdfError::Parse {
                    col,
                    msg: format!("expected `c=..` or `{second_key}=..`, found `{piece}`"),
                })?;
                let vcol = col + key.len() + 1;
                match key.trim() {
                    "c" => {
                        c_val = Some(parse_complex(val).map_err(|(c, msg)| PdfError::Parse {
                            col: vcol + c - 1,
                            msg,
                        })?)
                    }
                    k if k == second_key => {
                        second = Some(val.trim().parse().map_err(|_| PdfError::Parse {
                            col: vcol,
                            msg: format!("invalid real number `{val}`"),
                        })?)
                    }
                    other => {
                        return Err(PdfError::Parse {
                            col,
                            msg: format!("unknown parameter `{other}`"),
                        })
                    }
                }
                col += piece.len() + 1;
            }
            let c = c_val.ok_or(PdfError::Parse { col: body_col, msg: "missing c=".into() })?;
            let s = second.ok_or(PdfError::Parse {
                col: body_col,
                msg: format!("missing {second_key}="),
            })?;
            match head {
                "geometric" => RieszFamily::Geometric { c, q: s },
                "powerlaw" => RieszFamily::PowerLaw { c, p: s },
                _ => RieszFamily::LogLaw { c, p: s },
            }
        }
        other => {
            return Err(PdfError::Parse {
                col: 1,
                msg: format!(
                    "unknown family `{other}` (expected finite, geometric, powerlaw, loglaw)"
                ),
            })
        }
    };
    RieszSpec::new(family, None)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` into a complex number.
/// Errors carry a 1-based column within the piece.
pub fn parse_complex(text: &str) -> Result<C64, (usize, String)> {
    let t = text.trim();
    if t.is_empty() {
        return Err((1, "empty number".into()));
    }
    let leading = text.len() - text.trim_start().len();
    let fail = |msg: String| Err((leading + 1, msg));
    if let Some(body) = t.strip_suffix('i') {
        // pure imaginary, or a+bi: find the split sign after the leading one
        let split = body
            .char_indices()
            .skip(1)
            .find(|(i, ch)| {
                (*ch == '+' || *ch == '-')
                    && !matches!(body.as_bytes().get(i - 1), Some(b'e') | Some(b'E'))
            })
            .map(|(i, _)| i);
        match split {
            Some(i) => {
                let re: f64 = match body[..i].parse() {
                    Ok(v) => v,
                    Err(_) => return fail(format!("invalid real part `{}`", &body[..i])),
                };
                let imtext = &body[i..];
                let im: f64 = if imtext == "+" {
                    1.0
                } else if imtext == "-" {
                    -1.0
                } else {
                    match imtext.parse() {
                        Ok(v) => v,
                        Err(_) => return fail(format!("invalid imaginary part `{imtext}`")),
                    }
                };
                Ok(C64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() || body == "+" {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    match body.parse() {
                        Ok(v) => v,
                        Err(_) => return fail(format!("invalid imaginary part `{body}`")),
                    }
                };
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        match t.parse::<f64>() {
            Ok(v) => Ok(C64::new(v, 0.0)),
            Err(_) => fail(format!("invalid number `{t}`")),
        }
    }
}
