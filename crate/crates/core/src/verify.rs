//! Named verification suites producing deterministic, diffable reports.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::blocks::{sampling as block_sampling, AlgebraError, GroupAlgebra, SupportRelation};
use crate::coset::{self, CosetError, CosetExpr};
use crate::group;
use crate::linalg::CMat;
use crate::pdf::{self, PdfError, RieszFamily, RieszSpec};
use crate::words::{self, ReducedWord, Syllable, WordError};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Suite names accepted by `run_suite`, in execution order for `all`.
pub const SUITE_NAMES: &[&str] = &[
    "coset",
    "haagerup",
    "norms",
    "product-support",
    "prz",
    "riesz",
    "s3-supports",
    "s3-tensor",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pdf(#[from] PdfError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Coset(#[from] CosetError),
}

/// One verification check: stable id, a short statement of the claim, the
/// measured numbers, and the tolerance they were held to. A failed case
/// always carries a witness string.
#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub anchor: String,
    pub passed: bool,
    pub measured: Vec<f64>,
    pub tolerance: f64,
    pub witness: Option<String>,
}

fn case(
    id: impl Into<String>,
    anchor: impl Into<String>,
    measured: Vec<f64>,
    tolerance: f64,
    passed: bool,
    witness: impl Into<String>,
) -> CaseResult {
    CaseResult {
        id: id.into(),
        anchor: anchor.into(),
        passed,
        measured,
        tolerance,
        witness: if passed { None } else { Some(witness.into()) },
    }
}

/// Report of one suite run. The wall time is informational only and is kept
/// out of both serializations so that reports stay byte-identical across
/// runs with equal seed, tolerance, and inputs.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub tolerance: f64,
    pub cases: Vec<CaseResult>,
    #[serde(skip)]
    pub wall_time_ms: u128,
}

fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed).count()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# suite\t{}", self.suite);
        let _ = writeln!(out, "# seed\t{}", self.seed);
        let _ = writeln!(out, "# tolerance\t{}", fmt_float(self.tolerance));
        let _ = writeln!(out, "# cases\t{}", self.cases.len());
        let _ = writeln!(out, "# failures\t{}", self.failures());
        let _ = writeln!(out, "id\tanchor\tstatus\tmeasured\ttolerance\twitness");
        for c in &self.cases {
            let measured = if c.measured.is_empty() {
                "-".to_string()
            } else {
                c.measured
                    .iter()
                    .map(|&x| fmt_float(x))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                c.id,
                c.anchor,
                if c.passed { "pass" } else { "fail" },
                measured,
                fmt_float(c.tolerance),
                c.witness.as_deref().unwrap_or("-"),
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Runs one named suite (or `all`) with the given seed, tolerance, and
/// enumeration cap; cases come back sorted by id, ids unique.
pub fn run_suite(
    name: &str,
    seed: u64,
    tol: f64,
    cap: u64,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut cases = collect(name, seed, tol, cap)?;
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    for pair in cases.windows(2) {
        assert_ne!(pair[0].id, pair[1].id, "duplicate case id");
    }
    Ok(VerificationReport {
        suite: name.to_string(),
        seed,
        tolerance: tol,
        cases,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

fn collect(name: &str, seed: u64, tol: f64, cap: u64) -> Result<Vec<CaseResult>, VerifyError> {
    match name {
        "s3-supports" => suite_s3_supports(tol),
        "s3-tensor" => suite_s3_tensor(tol),
        "norms" => suite_norms(seed, tol),
        "product-support" => suite_product_support(seed),
        "haagerup" => suite_haagerup(tol, cap),
        "riesz" => suite_riesz(seed),
        "prz" => suite_prz(),
        "coset" => suite_coset(seed, cap),
        "all" => {
            let mut out = Vec::new();
            for n in SUITE_NAMES {
                out.extend(collect(n, seed, tol, cap)?);
            }
            Ok(out)
        }
        other => Err(VerifyError::UnknownSuite(other.to_string())),
    }
}

fn e_vec(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[i] = C64::new(1.0, 0.0);
    v
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

// ---------------------------------------------------------------------------
// s3-supports: two diagonal coefficients of the 2-dimensional irrep have
// additive norms in both combinations while sharing their central support.
// ---------------------------------------------------------------------------

fn suite_s3_supports(tol: f64) -> Result<Vec<CaseResult>, VerifyError> {
    let ctx = GroupAlgebra::bundled("s3")?;
    let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0))?;
    let phi2 = ctx.coefficient_functional(2, &e_vec(2, 1), &e_vec(2, 1))?;
    let sum = ctx.combine(one(), &phi1, one(), &phi2);
    let diff = ctx.combine(one(), &phi1, -one(), &phi2);

    let mut cases = Vec::new();
    for (idx, label, f, want) in [
        (1, "norm of phi1 equals 1", &phi1, 1.0),
        (2, "norm of phi2 equals 1", &phi2, 1.0),
        (3, "norm of phi1 + phi2 equals 2", &sum, 2.0),
        (4, "norm of phi1 - phi2 equals 2", &diff, 2.0),
    ] {
        let n = ctx.bg_norm(f)?;
        cases.push(case(
            format!("s3-supports/0{idx}-norm"),
            label,
            vec![n],
            tol,
            (n - want).abs() <= tol,
            format!("norm {n} differs from {want}"),
        ));
    }

    let zs1 = ctx.central_support(&phi1)?;
    let zs2 = ctx.central_support(&phi2)?;
    let d = zs1.distance(&zs2);
    cases.push(case(
        "s3-supports/05-central-support",
        "central supports of phi1 and phi2 coincide",
        vec![d],
        tol,
        d <= tol,
        format!("central supports differ by {d}"),
    ));

    let s1 = ctx.support(&phi1)?;
    let s2 = ctx.support(&phi2)?;
    let p = s1.product_norm(&s2);
    cases.push(case(
        "s3-supports/06-support-product",
        "supports of phi1 and phi2 are orthogonal",
        vec![p],
        tol,
        p <= tol,
        format!("support product has norm {p}"),
    ));
    Ok(cases)
}

// ---------------------------------------------------------------------------
// s3-tensor: squares of functionals jump blocks exactly as the tensor-square
// decomposition of the 2-dimensional irrep dictates.
// ---------------------------------------------------------------------------

fn suite_s3_tensor(tol: f64) -> Result<Vec<CaseResult>, VerifyError> {
    let ctx = GroupAlgebra::bundled("s3")?;
    let f = ctx.character_functional(2)?;
    let h1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0))?;
    let f2 = ctx.to_blocks(&ctx.pointwise_product(f.values(), f.values()))?;
    let h2 = ctx.to_blocks(&ctx.pointwise_product(h1.values(), h1.values()))?;

    let mut cases = Vec::new();

    let rel = ctx.support_relation(&f, &h1)?;
    cases.push(case(
        "s3-tensor/01-trace-dominated",
        "trace coefficient is absolutely continuous wrt one diagonal coefficient",
        vec![],
        0.0,
        rel == SupportRelation::AbsolutelyContinuous,
        format!("relation is {rel}"),
    ));

    let zf2 = ctx.central_support(&f2)?;
    let ranks: Vec<f64> = zf2.block_ranks().iter().map(|&r| r as f64).collect();
    cases.push(case(
        "s3-tensor/02-square-central-support",
        "squared trace coefficient has full central support",
        ranks.clone(),
        0.0,
        zf2.block_ranks() == vec![1, 1, 2],
        format!("central support ranks {ranks:?}"),
    ));

    let zh2 = ctx.central_support(&h2)?;
    let ranks: Vec<f64> = zh2.block_ranks().iter().map(|&r| r as f64).collect();
    cases.push(case(
        "s3-tensor/03-square-misses-sign",
        "squared diagonal coefficient misses the sign block",
        ranks.clone(),
        0.0,
        zh2.block_ranks() == vec![1, 0, 2],
        format!("central support ranks {ranks:?}"),
    ));

    let rel = ctx.support_relation(&f2, &h2)?;
    cases.push(case(
        "s3-tensor/04-squares-incomparable",
        "squares are neither dominated nor singular",
        vec![],
        0.0,
        rel == SupportRelation::Neither,
        format!("relation is {rel}"),
    ));

    let td = ctx.tensor_decompose(2, 2)?;
    let mults: Vec<f64> = td.multiplicities.iter().map(|&m| m as f64).collect();
    cases.push(case(
        "s3-tensor/05-multiplicities",
        "tensor square of the 2-dim irrep splits with multiplicities (1,1,1)",
        mults.clone(),
        0.0,
        td.multiplicities == vec![1, 1, 1],
        format!("multiplicities {mults:?}"),
    ));
    cases.push(case(
        "s3-tensor/06-intertwiner-defect",
        "intertwiner conjugates the tensor square onto the block sum",
        vec![td.max_deviation],
        tol,
        td.max_deviation <= tol,
        format!("deviation {}", td.max_deviation),
    ));
    Ok(cases)
}

// ---------------------------------------------------------------------------
// norms: Lebesgue decomposition, duality attainment, and translation span
// dimensions over every bundled group.
// ---------------------------------------------------------------------------

fn suite_norms(seed: u64, tol: f64) -> Result<Vec<CaseResult>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for name in group::bundled_names() {
        let ctx = GroupAlgebra::bundled(&name)?;

        // Lebesgue: split against g's central support, additive norms,
        // uniqueness against block-mass transfers.
        let mut max_norm_dev: f64 = 0.0;
        let mut relation_failures = 0usize;
        for _ in 0..500 {
            let f = block_sampling::random_hermitian(&ctx, &mut rng);
            let g = block_sampling::random_positive(&ctx, &mut rng);
            let split = ctx.lebesgue(&f, &g)?;
            let ac_ok = ctx.support_relation(&split.absolutely_continuous, &g)?
                == SupportRelation::AbsolutelyContinuous;
            let nonzero_singular = ctx
                .nonzero_blocks(&split.singular)?
                .iter()
                .any(|&b| b);
            let sg_ok = !nonzero_singular
                || ctx.support_relation(&split.singular, &g)? == SupportRelation::Singular;
            if !(ac_ok && sg_ok) {
                relation_failures += 1;
            }
            let dev = (ctx.bg_norm(&f)?
                - ctx.bg_norm(&split.absolutely_continuous)?
                - ctx.bg_norm(&split.singular)?)
            .abs();
            max_norm_dev = max_norm_dev.max(dev);
        }
        let mut uniqueness_misses = 0usize;
        for _ in 0..50 {
            let f = block_sampling::random_hermitian(&ctx, &mut rng);
            let g = block_sampling::random_positive(&ctx, &mut rng);
            let split = ctx.lebesgue(&f, &g)?;
            let noise = block_sampling::random_hermitian(&ctx, &mut rng);
            let block = rng.gen_range(0..ctx.catalog().len());
            // transfer the noise restricted to one block between the parts
            let masked_blocks: Vec<_> = noise
                .blocks()
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    if i == block {
                        m.clone()
                    } else {
                        CMat::zeros(m.rows(), m.cols())
                    }
                })
                .collect();
            let p = ctx.from_blocks(masked_blocks)?;
            if ctx.bg_norm(&p)? <= 1e-6 {
                continue;
            }
            let h1 = ctx.combine(one(), &split.absolutely_continuous, one(), &p);
            let h2 = ctx.combine(one(), &split.singular, -one(), &p);
            let still_ac = ctx.support_relation(&h1, &g)? == SupportRelation::AbsolutelyContinuous;
            let h2_nonzero = ctx.nonzero_blocks(&h2)?.iter().any(|&b| b);
            let still_sg = !h2_nonzero
                || ctx.support_relation(&h2, &g)? == SupportRelation::Singular;
            if still_ac && still_sg {
                uniqueness_misses += 1;
            }
        }
        cases.push(case(
            format!("norms/{name}-lebesgue"),
            "unique split into dominated and singular parts with additive norms",
            vec![
                max_norm_dev,
                relation_failures as f64,
                uniqueness_misses as f64,
            ],
            tol,
            max_norm_dev <= tol && relation_failures == 0 && uniqueness_misses == 0,
            format!(
                "norm deviation {max_norm_dev}, {relation_failures} relation failures, \
                 {uniqueness_misses} alternative decompositions survived"
            ),
        ));

        // duality: the polar isometry attains the norm inside the unit ball
        let mut max_attain_dev: f64 = 0.0;
        let mut max_bound_excess: f64 = 0.0;
        for _ in 0..50 {
            let f = block_sampling::random_hermitian(&ctx, &mut rng);
            let norm = ctx.bg_norm(&f)?;
            let x = ctx.norming_element(&f)?;
            let attained = ctx.pairing_blocks(&f, &x).re;
            max_attain_dev = max_attain_dev.max((attained - norm).abs());
            let y = block_sampling::random_contraction(&ctx, &mut rng)?;
            let paired = ctx.pairing_blocks(&f, &y).norm();
            max_bound_excess = max_bound_excess.max(paired - norm);
        }
        cases.push(case(
            format!("norms/{name}-duality"),
            "norm is attained on the unit ball and dominates all pairings",
            vec![max_attain_dev, max_bound_excess],
            tol,
            max_attain_dev <= tol && max_bound_excess <= tol,
            format!(
                "attainment off by {max_attain_dev}, ball pairing exceeds norm by \
                 {max_bound_excess}"
            ),
        ));

        // translation span: dimension counts the squares of the live blocks
        let mut span_failures = 0usize;
        for trial in 0..200 {
            let values = if trial % 2 == 0 {
                block_sampling::random_values(&ctx, &mut rng)
            } else {
                block_sampling::random_positive(&ctx, &mut rng)
                    .values()
                    .to_vec()
            };
            let f = ctx.to_blocks(&values)?;
            let expected: usize = ctx
                .nonzero_blocks(&f)?
                .iter()
                .zip(ctx.catalog().dims())
                .filter(|(&nz, _)| nz)
                .map(|(_, d)| d * d)
                .sum();
            if ctx.translate_span_dim(&values)? != expected {
                span_failures += 1;
            }
        }
        cases.push(case(
            format!("norms/{name}-translation"),
            "translates span a space of dimension sum of squared live block sizes",
            vec![span_failures as f64],
            0.0,
            span_failures == 0,
            format!("{span_failures} of 200 span dimensions off"),
        ));
    }
    Ok(cases)
}

// ---------------------------------------------------------------------------
// product-support: the intertwiner route to the support of a pointwise
// product agrees with transforming the product directly.
// ---------------------------------------------------------------------------

fn suite_product_support(seed: u64) -> Result<Vec<CaseResult>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for name in group::bundled_names() {
        let ctx = GroupAlgebra::bundled(&name)?;
        let mut max_distance: f64 = 0.0;
        let mut first_bad: Option<usize> = None;
        for trial in 0..200 {
            let f = block_sampling::random_positive(&ctx, &mut rng);
            let g = block_sampling::random_positive(&ctx, &mut rng);
            let predicted = ctx.product_support_min(&f, &g)?;
            let product = ctx.to_blocks(&ctx.pointwise_product(f.values(), g.values()))?;
            let direct = ctx.support(&product)?;
            let d = predicted.distance(&direct);
            if d > 1e-8 && first_bad.is_none() {
                first_bad = Some(trial);
            }
            max_distance = max_distance.max(d);
        }
        cases.push(case(
            format!("product-support/{name}"),
            "support of a pointwise product matches the intertwiner prediction",
            vec![max_distance],
            1e-8,
            first_bad.is_none(),
            format!("first mismatch at trial {first_bad:?}, distance {max_distance}"),
        ));
    }
    Ok(cases)
}

// ---------------------------------------------------------------------------
// haagerup: closed-form square norms against partial sums, power thresholds,
// sphere pairings, and Gram positivity certificates.
// ---------------------------------------------------------------------------

fn suite_haagerup(tol: f64, cap: u64) -> Result<Vec<CaseResult>, VerifyError> {
    let mut cases = Vec::new();

    let p = pdf::HaagerupParam::new(0.5, 2)?;
    let report = pdf::haagerup_l2_report(&p);
    let norm_sq = report.norm_sq.unwrap_or(f64::NAN);
    cases.push(case(
        "haagerup/01-l2-closed-form",
        "square norm closed form at r=1/2, two generators, equals 5",
        vec![report.q, norm_sq],
        tol,
        report.in_l2 && (norm_sq - 5.0).abs() <= tol && (report.q - 0.75).abs() <= tol,
        format!("q {}, norm_sq {}", report.q, norm_sq),
    ));

    // partial sum over word lengths <= 30 plus the exact geometric tail
    let mut partial = 1.0;
    for n in 1..=30u64 {
        let count = words::count_words(2, n)? as f64;
        partial += count * p.r().powi(2 * n as i32);
    }
    let q = 3.0 * p.r() * p.r();
    let tail = (4.0 / 3.0) * q.powi(31) / (1.0 - q);
    let recon_dev = (norm_sq - partial - tail).abs();
    cases.push(case(
        "haagerup/02-l2-partial-sum",
        "closed form equals the length-30 partial sum plus the geometric tail",
        vec![partial, tail, recon_dev],
        tol,
        recon_dev <= tol && (norm_sq - partial).abs() <= 1e-3,
        format!("partial {partial}, tail {tail}, reconstruction off by {recon_dev}"),
    ));

    let p8 = pdf::HaagerupParam::new(0.8, 2)?;
    let m = pdf::haagerup_min_l2_power(&p8);
    let below = 3.0 * p8.r().powi(2 * m as i32);
    let above = if m > 1 {
        3.0 * p8.r().powi(2 * (m - 1) as i32)
    } else {
        f64::INFINITY
    };
    cases.push(case(
        "haagerup/03-min-l2-power",
        "third power is the first square-summable one at r=0.8",
        vec![m as f64, below, above],
        0.0,
        m == 3 && below < 1.0 && above >= 1.0,
        format!("power {m}, threshold values {below} and {above}"),
    ));

    let pairing = pdf::chi_pairing_report(&p, 2, 50);
    let sphere = words::enumerate_words(2, 2, cap)?;
    let mut direct = 0.0;
    for w in &sphere {
        direct += pdf::haagerup_eval(&p, w)?;
    }
    cases.push(case(
        "haagerup/04-sphere-pairing",
        "sphere-2 pairing equals 3 and matches direct enumeration",
        vec![pairing.pairing, direct],
        tol,
        (pairing.pairing - 3.0).abs() <= tol && (pairing.pairing - direct).abs() <= tol,
        format!("pairing {}, enumerated {direct}", pairing.pairing),
    ));

    // positivity certificates over the radial family
    let mut min_eig = f64::INFINITY;
    let mut psd_ok = true;
    for tenths in 2..=9u32 {
        let r = tenths as f64 / 10.0;
        let param = pdf::HaagerupParam::new(r, 3)?;
        for k in 1..=3u32 {
            let f = |w: &ReducedWord| -> C64 {
                C64::new(pdf::haagerup_eval(&param, w).expect("in-range word"), 0.0)
            };
            let cert = pdf::gram_psd_check(&f, k, 3, 1e-9, cap)?;
            min_eig = min_eig.min(cert.min_eigenvalue);
            psd_ok &= cert.pass;
        }
    }
    cases.push(case(
        "haagerup/05-psd-radial",
        "radial functions pass the Gram positivity check for r in [0.2, 0.9]",
        vec![min_eig],
        1e-9,
        psd_ok,
        format!("worst Gram eigenvalue {min_eig}"),
    ));

    let specs = [
        RieszSpec::new(
            RieszFamily::Finite {
                alphas: vec![C64::new(0.5, 0.0), C64::new(0.3, 0.0)],
            },
            None,
        )?,
        RieszSpec::new(
            RieszFamily::Geometric {
                c: C64::new(0.5, 0.0),
                q: 0.5,
            },
            None,
        )?,
        RieszSpec::new(
            RieszFamily::PowerLaw {
                c: C64::new(0.5, 0.0),
                p: 0.0,
            },
            None,
        )?,
    ];
    let mut min_eig = f64::INFINITY;
    let mut psd_ok = true;
    for spec in &specs {
        let f = |w: &ReducedWord| pdf::riesz_eval(spec, w);
        let cert = pdf::gram_psd_check(&f, 3, 3, 1e-9, cap)?;
        min_eig = min_eig.min(cert.min_eigenvalue);
        psd_ok &= cert.pass;
    }
    cases.push(case(
        "haagerup/06-psd-riesz",
        "free products with coefficients up to 1/2 pass the Gram check",
        vec![min_eig],
        1e-9,
        psd_ok,
        format!("worst Gram eigenvalue {min_eig}"),
    ));

    // growth 1.5^|x| is the designed non-positive control
    let bad = |w: &ReducedWord| C64::new(1.5f64.powi(w.len() as i32), 0.0);
    let cert = pdf::gram_psd_check(&bad, 2, 2, 1e-9, cap)?;
    cases.push(case(
        "haagerup/07-psd-negative-control",
        "the growing radial control fails the Gram check decisively",
        vec![cert.min_eigenvalue],
        0.01,
        cert.min_eigenvalue < -0.01,
        format!("control eigenvalue {}", cert.min_eigenvalue),
    ));

    Ok(cases)
}

// ---------------------------------------------------------------------------
// riesz: summability classification closed forms and the power identity.
// ---------------------------------------------------------------------------

fn suite_riesz(seed: u64) -> Result<Vec<CaseResult>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();

    let geometric = RieszSpec::new(
        RieszFamily::Geometric {
            c: C64::new(0.5, 0.0),
            q: 0.5,
        },
        None,
    )?;
    let cls = pdf::riesz_classify(&geometric);
    let beta = cls.beta.unwrap_or(f64::NAN);
    let gamma = cls.gamma.unwrap_or(f64::NAN);
    cases.push(case(
        "riesz/01-geometric-classification",
        "halving coefficients give beta 1/3, gamma 2/45, square-summable",
        vec![beta, gamma],
        1e-12,
        cls.class == pdf::RieszClass::InL2
            && (beta - 1.0 / 3.0).abs() <= 1e-12
            && (gamma - 2.0 / 45.0).abs() <= 1e-12,
        format!("class {}, beta {beta}, gamma {gamma}", cls.class),
    ));

    let constant = RieszSpec::new(
        RieszFamily::PowerLaw {
            c: C64::new(0.5, 0.0),
            p: 0.0,
        },
        None,
    )?;
    let cls = pdf::riesz_classify(&constant);
    cases.push(case(
        "riesz/02-constant-singular",
        "constant coefficients 1/2 are singular to the reduced dual",
        vec![],
        0.0,
        cls.class == pdf::RieszClass::SingularToBLambda,
        format!("class {}", cls.class),
    ));

    let log_law = RieszSpec::new(
        RieszFamily::LogLaw {
            c: C64::new(0.5, 0.0),
            p: 1.0,
        },
        None,
    )?;
    cases.push(case(
        "riesz/03-log-law-powers",
        "logarithmic decay keeps every power singular",
        vec![],
        0.0,
        pdf::powers_all_singular(&log_law),
        "powers_all_singular returned false".to_string(),
    ));

    // pointwise power identity on random reduced words
    let finite = RieszSpec::new(
        RieszFamily::Finite {
            alphas: vec![
                C64::new(0.4, 0.1),
                C64::new(-0.2, 0.3),
                C64::new(0.5, 0.0),
            ],
        },
        None,
    )?;
    let mut max_dev: f64 = 0.0;
    for base in [&geometric, &finite] {
        for m in 2..=3u32 {
            let powered = pdf::riesz_power(base, m)?;
            for _ in 0..250 {
                let w = random_word(&mut rng, 6, 4);
                let lhs = pdf::riesz_eval(&powered, &w);
                let rhs = direct_power_eval(base, m, &w);
                max_dev = max_dev.max((lhs - rhs).norm());
            }
        }
    }
    cases.push(case(
        "riesz/04-power-identity",
        "powered coefficient families evaluate to literal coefficient powers",
        vec![max_dev],
        1e-12,
        max_dev <= 1e-12,
        format!("worst pointwise deviation {max_dev}"),
    ));

    Ok(cases)
}

fn random_word<R: Rng>(rng: &mut R, gens: u32, max_syllables: usize) -> ReducedWord {
    let len = rng.gen_range(0..=max_syllables);
    let mut syllables: Vec<Syllable> = Vec::with_capacity(len);
    let mut last: Option<u32> = None;
    for _ in 0..len {
        let mut gen = rng.gen_range(1..=gens);
        while Some(gen) == last {
            gen = rng.gen_range(1..=gens);
        }
        last = Some(gen);
        let exp = match rng.gen_range(0..6) {
            0 => 2, // exercise the vanishing branch
            1..=3 => 1,
            _ => -1,
        };
        syllables.push(Syllable { gen, exp });
    }
    ReducedWord::from_syllables(syllables).expect("constructed reduced")
}

fn direct_power_eval(spec: &RieszSpec, m: u32, w: &ReducedWord) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for s in w.syllables() {
        let a = spec.alpha(s.gen).powu(m);
        acc *= match s.exp {
            1 => a,
            -1 => a.conj(),
            _ => return C64::new(0.0, 0.0),
        };
    }
    acc
}

// ---------------------------------------------------------------------------
// prz: extension of a subgroup character by zero satisfies the two-sided
// inverse identity exactly, with the predicted spectrum.
// ---------------------------------------------------------------------------

fn suite_prz() -> Result<Vec<CaseResult>, VerifyError> {
    let ctx = GroupAlgebra::bundled("s3")?;
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let sub = [0usize, 1, 2];
    let f_on_sub = [one(), omega, omega * omega];
    let report = ctx.prz_identity_check(&sub, &f_on_sub, C64::new(2.0, 0.0))?;

    let mut cases = Vec::new();
    cases.push(case(
        "prz/01-identity-exact",
        "shifted extension times its piecewise inverse is exactly one",
        vec![report.max_deviation],
        0.0,
        report.exact && report.max_deviation == 0.0,
        format!("max deviation {}", report.max_deviation),
    ));
    cases.push(case(
        "prz/02-extension-range",
        "extension takes exactly the subgroup values plus zero",
        vec![report.extended_range.len() as f64],
        0.0,
        report.range_matches && report.extended_range.len() == 4,
        format!("range has {} values", report.extended_range.len()),
    ));
    let guard = ctx.prz_identity_check(&sub, &f_on_sub, omega);
    cases.push(case(
        "prz/03-range-guard",
        "a shift inside the extended range is rejected",
        vec![],
        0.0,
        matches!(guard, Err(AlgebraError::LambdaInRange(_))),
        "in-range lambda was accepted".to_string(),
    ));
    Ok(cases)
}

// ---------------------------------------------------------------------------
// coset: extraction of an infinite coset up to finitely many exceptions,
// checked by box scans, plus the cyclic-coset window scan on words.
// ---------------------------------------------------------------------------

fn one_d(rows: &[i64]) -> Result<coset::Lattice, CosetError> {
    coset::Lattice::from_generators(1, &[rows.to_vec()])
}

fn fixed_corpus() -> Result<Vec<(CosetExpr, &'static str)>, CosetError> {
    let z = coset::Coset::new(vec![0], one_d(&[1])?)?;
    let even = coset::Coset::new(vec![0], one_d(&[2])?)?;
    let one_mod_four = coset::Coset::new(vec![1], one_d(&[4])?)?;
    let odd_not_one = CosetExpr::new(1, vec![z.clone()], vec![even, one_mod_four])?;

    let z2 = coset::Coset::new(
        vec![0, 0],
        coset::Lattice::from_generators(2, &[vec![1, 0], vec![0, 1]])?,
    )?;
    let stripe = coset::Coset::new(
        vec![0, 0],
        coset::Lattice::from_generators(2, &[vec![2, 0], vec![0, 1]])?,
    )?;
    let off_stripe = CosetExpr::new(2, vec![z2], vec![stripe])?;

    let punctured = CosetExpr::new(
        1,
        vec![z],
        vec![coset::Coset::point(vec![0])?],
    )?;

    Ok(vec![
        (odd_not_one, "line minus evens and one residue class"),
        (off_stripe, "plane minus an even-column stripe"),
        (punctured, "line minus the origin"),
    ])
}

fn suite_coset(seed: u64, cap: u64) -> Result<Vec<CaseResult>, VerifyError> {
    let mut cases = Vec::new();

    for (idx, (expr, label)) in fixed_corpus()?.into_iter().enumerate() {
        let out = coset::extract_almost_coset(&expr)?;
        let ok = coset::check_extraction(&expr, &out, 200)?;
        cases.push(case(
            format!("coset/0{}-fixed", idx + 1),
            format!("{label}: extracted coset survives the box scan"),
            vec![out.coset.rank() as f64, out.exceptions.len() as f64],
            0.0,
            ok && out.coset.rank() >= 1,
            format!("extraction {} with {:?}", out.coset, out.exceptions),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0usize;
    let mut max_exceptions = 0usize;
    let mut first_bad: Option<usize> = None;
    for trial in 0..100 {
        let dim = 1 + (trial % 2);
        let expr = coset::sampling::random_expression(dim, &mut rng)?;
        let out = coset::extract_almost_coset(&expr)?;
        let ok = coset::check_extraction(&expr, &out, 200)?
            && out.coset.rank() >= 1
            && within_exception_bound(&expr, out.exceptions.len());
        if ok {
            passed += 1;
        } else if first_bad.is_none() {
            first_bad = Some(trial);
        }
        max_exceptions = max_exceptions.max(out.exceptions.len());
    }
    cases.push(case(
        "coset/04-random-corpus",
        "random valid expressions all yield box-verified extractions",
        vec![passed as f64, max_exceptions as f64],
        0.0,
        passed == 100,
        format!("{passed}/100 passed, first failure at trial {first_bad:?}"),
    ));

    let gens = words::GeneratorSet::new(1..=5, true)?;
    let scan = words::cyclic_coset_scan(&gens, 2, 20, cap)?;
    cases.push(case(
        "coset/05-cyclic-window",
        "no cyclic coset meets the five-generator set more than twice",
        vec![scan.max_hits as f64, scan.pairs_scanned as f64],
        0.0,
        scan.max_hits <= 2,
        format!(
            "max hits {} at g = {}, w = {}",
            scan.max_hits, scan.witness_g, scan.witness_w
        ),
    ));

    Ok(cases)
}

fn within_exception_bound(expr: &CosetExpr, exceptions: usize) -> bool {
    let mut bound: u128 = 1;
    for c in expr.negatives() {
        match c.lattice().index() {
            Some(ix) => bound = bound.saturating_mul(ix),
            // infinite index: the bound is vacuous
            None => return true,
        }
    }
    exceptions as u128 <= bound
}
