//! Finite group tables and bundled unitary irreducible representation catalogs.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::CMat;

/// Entrywise tolerance for the homomorphism and unitarity checks.
pub const HOM_TOL: f64 = 1e-10;
/// Tolerance for character inner products (irreducibility, orthogonality).
pub const CHAR_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group order must be at least 1")]
    EmptyGroup,
    #[error("element list has {got} labels, expected {expected}")]
    ElementCount { got: usize, expected: usize },
    #[error("multiplication table has {got} entries, expected {expected}")]
    TableShape { got: usize, expected: usize },
    #[error("table entry {value} at row {row}, column {col} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("element {index} has no two-sided inverse in the table")]
    MissingInverse { index: usize },
    #[error("irrep {index}: {msg}")]
    IrrepShape { index: usize, msg: String },
    #[error("unknown bundled group `{0}`")]
    UnknownBundled(String),
    #[error("group file failed validation: {0}")]
    Invalid(String),
}

/// A finite group given by its full multiplication table.
///
/// Element 0 is always the identity. The inverse permutation is derived from
/// the table at construction time; the group laws themselves are checked by
/// [`validate_model`], which reports violations with witnesses instead of
/// refusing to construct the object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupModel {
    name: String,
    order: usize,
    elements: Vec<String>,
    mult: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroupModel {
    /// Builds a model from raw parts, checking only structural shape: label
    /// count, table size, index range, and existence of two-sided inverses.
    pub fn from_parts(
        name: impl Into<String>,
        elements: Vec<String>,
        mult: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let order = elements.len();
        if order == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if mult.len() != order * order {
            return Err(GroupError::TableShape {
                got: mult.len(),
                expected: order * order,
            });
        }
        for (pos, &value) in mult.iter().enumerate() {
            if value >= order {
                return Err(GroupError::EntryOutOfRange {
                    row: pos / order,
                    col: pos % order,
                    value,
                });
            }
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            let found = (0..order).find(|&b| mult[a * order + b] == 0 && mult[b * order + a] == 0);
            match found {
                Some(b) => inv[a] = b,
                None => return Err(GroupError::MissingInverse { index: a }),
            }
        }
        Ok(FiniteGroupModel {
            name: name.into(),
            order,
            elements,
            mult,
            inv,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, g: usize) -> &str {
        &self.elements[g]
    }

    pub fn element_index(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// True when the index set contains the identity and is closed under the
    /// table product and inversion.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        if !set.contains(&0) || set.iter().any(|&g| g >= self.order) {
            return false;
        }
        set.iter().all(|&a| {
            set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
        })
    }
}

/// One unitary irreducible representation: a matrix per group element.
#[derive(Debug, Clone)]
pub struct Irrep {
    dim: usize,
    matrices: Vec<CMat>,
}

impl Irrep {
    pub fn new(dim: usize, matrices: Vec<CMat>) -> Self {
        assert!(dim > 0, "irrep dimension must be positive");
        assert!(
            matrices.iter().all(|m| m.rows() == dim && m.cols() == dim),
            "irrep matrices must be square of the declared dimension"
        );
        Irrep { dim, matrices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn character(&self) -> Vec<C64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }
}

/// Character order used to fix block indices: dimension ascending, then the
/// character sequence lexicographically with larger entries first (real part
/// compared before imaginary part). The all-ones trivial character therefore
/// always leads its dimension class.
fn canonical_key_less(a: &Irrep, b: &Irrep) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match a.dim.cmp(&b.dim) {
        Ordering::Equal => {}
        other => return other,
    }
    let (ca, cb) = (a.character(), b.character());
    for (x, y) in ca.iter().zip(cb.iter()) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            Ordering::Equal => continue,
            other => return other.reverse(),
        }
    }
    Ordering::Equal
}

/// The full list of irreducibles of a group, in canonical order.
#[derive(Debug, Clone)]
pub struct IrrepCatalog {
    irreps: Vec<Irrep>,
}

impl IrrepCatalog {
    pub fn new(mut irreps: Vec<Irrep>) -> Self {
        irreps.sort_by(canonical_key_less);
        IrrepCatalog { irreps }
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn irrep(&self, i: usize) -> &Irrep {
        &self.irreps[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    /// Index of the irrep whose character matches `chi` entrywise within
    /// `tol`, if any.
    pub fn find_by_character(&self, chi: &[C64], tol: f64) -> Option<usize> {
        self.irreps.iter().position(|r| {
            let c = r.character();
            c.len() == chi.len() && c.iter().zip(chi).all(|(x, y)| (x - y).norm() <= tol)
        })
    }
}

/// One failed invariant together with a human-readable witness.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckFailure {
    pub check: String,
    pub witness: String,
}

/// Outcome of the exhaustive model + catalog audit.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub group: String,
    pub checks_run: usize,
    pub failures: Vec<CheckFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fail(failures: &mut Vec<CheckFailure>, check: &str, witness: String) {
    failures.push(CheckFailure {
        check: check.to_string(),
        witness,
    });
}

/// Exhaustively audits the group laws and every catalog invariant:
/// homomorphism and unitarity entrywise within `1e-10`, irreducibility and
/// pairwise character orthogonality within `1e-8`, and the dimension count
/// `sum d_i^2 = |G|`.
pub fn validate_model(model: &FiniteGroupModel, cat: &IrrepCatalog) -> ValidationReport {
    let n = model.order();
    let mut failures = Vec::new();
    let mut checks_run = 0usize;

    for a in 0..n {
        checks_run += 1;
        if model.mul(0, a) != a || model.mul(a, 0) != a {
            fail(
                &mut failures,
                "identity",
                format!("e*{a} = {}, {a}*e = {}", model.mul(0, a), model.mul(a, 0)),
            );
        }
        checks_run += 1;
        let b = model.inv(a);
        if model.mul(a, b) != 0 || model.mul(b, a) != 0 {
            fail(&mut failures, "inverse", format!("inv({a}) = {b} fails"));
        }
    }
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                checks_run += 1;
                let lhs = model.mul(model.mul(a, b), c);
                let rhs = model.mul(a, model.mul(b, c));
                if lhs != rhs {
                    fail(
                        &mut failures,
                        "associativity",
                        format!("({a}*{b})*{c} = {lhs} but {a}*({b}*{c}) = {rhs}"),
                    );
                    break 'assoc;
                }
            }
        }
    }

    for (i, rep) in cat.irreps().iter().enumerate() {
        checks_run += 1;
        if rep.matrices().len() != n {
            fail(
                &mut failures,
                "matrix-count",
                format!("irrep {i} has {} matrices, expected {n}", rep.matrices().len()),
            );
            continue;
        }
        for g in 0..n {
            checks_run += 1;
            let u = rep.matrix(g);
            let dev = u.mul(&u.adjoint()).sub(&CMat::identity(rep.dim())).max_abs();
            if dev > HOM_TOL {
                fail(
                    &mut failures,
                    "unitarity",
                    format!("irrep {i}, element {g}: |UU* - I| = {dev:.3e}"),
                );
            }
        }
        for a in 0..n {
            for b in 0..n {
                checks_run += 1;
                let dev = rep
                    .matrix(a)
                    .mul(rep.matrix(b))
                    .sub(rep.matrix(model.mul(a, b)))
                    .max_abs();
                if dev > HOM_TOL {
                    fail(
                        &mut failures,
                        "homomorphism",
                        format!("irrep {i}: |U({a})U({b}) - U({a}*{b})| = {dev:.3e}"),
                    );
                }
            }
        }
        checks_run += 1;
        let chi = rep.character();
        let self_ip: f64 = chi.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        if (self_ip - 1.0).abs() > CHAR_TOL {
            fail(
                &mut failures,
                "irreducibility",
                format!("irrep {i}: <chi, chi> = {self_ip}"),
            );
        }
    }

    checks_run += 1;
    let dim_sq: usize = cat.irreps().iter().map(|r| r.dim * r.dim).sum();
    if dim_sq != n {
        fail(
            &mut failures,
            "completeness",
            format!("sum of squared dims = {dim_sq}, group order = {n}"),
        );
    }

    for i in 0..cat.len() {
        for j in (i + 1)..cat.len() {
            checks_run += 1;
            if cat.irrep(i).matrices().len() != n || cat.irrep(j).matrices().len() != n {
                continue;
            }
            let (ci, cj) = (cat.irrep(i).character(), cat.irrep(j).character());
            let ip: C64 = ci
                .iter()
                .zip(cj.iter())
                .map(|(x, y)| x * y.conj())
                .sum::<C64>()
                / n as f64;
            if ip.norm() > CHAR_TOL {
                fail(
                    &mut failures,
                    "character-orthogonality",
                    format!("irreps {i}, {j}: <chi_i, chi_j> = {ip}"),
                );
            }
        }
    }

    ValidationReport {
        group: model.name().to_string(),
        checks_run,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Bundled groups
// ---------------------------------------------------------------------------

/// Names accepted by [`bundled`], in a stable listing order.
pub fn bundled_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=12).map(|n| format!("z{n}")).collect();
    names.extend(["s3", "d4", "q8"].map(String::from));
    names
}

/// Returns the bundled model and catalog for `name` (`z1`..`z12`, `s3`,
/// `d4`, `q8`), or an error for anything else.
pub fn bundled(name: &str) -> Result<(FiniteGroupModel, IrrepCatalog), GroupError> {
    let lower = name.to_ascii_lowercase();
    if let Some(num) = lower.strip_prefix('z') {
        if let Ok(n) = num.parse::<usize>() {
            if (1..=12).contains(&n) {
                return Ok(cyclic(n));
            }
        }
    }
    match lower.as_str() {
        "s3" => Ok(symmetric_3()),
        "d4" => Ok(dihedral_4()),
        "q8" => Ok(quaternion_8()),
        _ => Err(GroupError::UnknownBundled(name.to_string())),
    }
}

/// Cyclic group of order n with characters m -> exp(2*pi*i*j*m/n).
pub fn cyclic(n: usize) -> (FiniteGroupModel, IrrepCatalog) {
    assert!(n >= 1);
    let elements: Vec<String> = (0..n).map(|m| m.to_string()).collect();
    let mut mult = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            mult[a * n + b] = (a + b) % n;
        }
    }
    let model = FiniteGroupModel::from_parts(format!("z{n}"), elements, mult).unwrap();
    let irreps = (0..n)
        .map(|j| {
            let matrices = (0..n)
                .map(|m| {
                    let theta = 2.0 * PI * (j * m % n) as f64 / n as f64;
                    CMat::scalar(1, C64::from_polar(1.0, theta))
                })
                .collect();
            Irrep::new(1, matrices)
        })
        .collect();
    (model, IrrepCatalog::new(irreps))
}

fn perm_compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // function composition: (a o b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

fn perm_group_table(perms: &[Vec<usize>]) -> Vec<usize> {
    let n = perms.len();
    let mut mult = vec![0usize; n * n];
    for (i, a) in perms.iter().enumerate() {
        for (j, b) in perms.iter().enumerate() {
            let prod = perm_compose(a, b);
            mult[i * n + j] = perms.iter().position(|p| *p == prod).unwrap();
        }
    }
    mult
}

/// Symmetric group on three points. The two-dimensional representation acts
/// on the orthogonal complement of (1,1,1) inside the permutation
/// representation, written in the orthonormal basis
/// v1 = (1,-1,0)/sqrt(2), v2 = (1,1,-2)/sqrt(6).
pub fn symmetric_3() -> (FiniteGroupModel, IrrepCatalog) {
    let perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![0, 2, 1],
        vec![2, 1, 0],
        vec![1, 0, 2],
    ];
    let labels = ["e", "r", "r2", "t0", "t1", "t2"];
    let mult = perm_group_table(&perms);
    let model = FiniteGroupModel::from_parts(
        "s3",
        labels.iter().map(|s| s.to_string()).collect(),
        mult,
    )
    .unwrap();

    let s2 = 1.0 / 2.0_f64.sqrt();
    let s6 = 1.0 / 6.0_f64.sqrt();
    let basis = [[s2, s6], [-s2, s6], [0.0, -2.0 * s6]];
    let std_matrices: Vec<CMat> = perms
        .iter()
        .map(|p| {
            // entry (a,b) = <v_a, P v_b> with (P v)(i) = v at the preimage of i
            CMat::from_fn(2, 2, |a, b| {
                let mut acc = 0.0;
                for i in 0..3 {
                    acc += basis[p[i]][a] * basis[i][b];
                }
                C64::new(acc, 0.0)
            })
        })
        .collect();

    let one = |vals: [f64; 6]| {
        Irrep::new(
            1,
            vals.iter().map(|&v| CMat::scalar(1, C64::new(v, 0.0))).collect(),
        )
    };
    let triv = one([1.0; 6]);
    let sgn = one([1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
    let std = Irrep::new(2, std_matrices);
    (model, IrrepCatalog::new(vec![triv, sgn, std]))
}

/// Dihedral group of order 8. Elements are r^a s^eps, indexed a + 4*eps.
pub fn dihedral_4() -> (FiniteGroupModel, IrrepCatalog) {
    let n = 8;
    let idx = |a: usize, eps: usize| (a % 4) + 4 * eps;
    let mut mult = vec![0usize; n * n];
    for a in 0..4 {
        for eps in 0..2 {
            for b in 0..4 {
                for delta in 0..2 {
                    // s r^b = r^{-b} s
                    let (c, gamma) = if eps == 0 {
                        ((a + b) % 4, delta)
                    } else {
                        ((a + 4 - b) % 4, 1 - delta)
                    };
                    mult[idx(a, eps) * n + idx(b, delta)] = idx(c, gamma);
                }
            }
        }
    }
    let labels = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"];
    let model = FiniteGroupModel::from_parts(
        "d4",
        labels.iter().map(|s| s.to_string()).collect(),
        mult,
    )
    .unwrap();

    let one = |r_sign: f64, s_sign: f64| {
        let matrices = (0..n)
            .map(|g| {
                let (a, eps) = (g % 4, g / 4);
                let v = r_sign.powi(a as i32) * s_sign.powi(eps as i32);
                CMat::scalar(1, C64::new(v, 0.0))
            })
            .collect();
        Irrep::new(1, matrices)
    };
    let re = |rows: [[f64; 2]; 2]| {
        CMat::from_fn(2, 2, |i, j| C64::new(rows[i][j], 0.0))
    };
    let rot = re([[0.0, -1.0], [1.0, 0.0]]);
    let flip = re([[1.0, 0.0], [0.0, -1.0]]);
    let two = Irrep::new(
        2,
        (0..n)
            .map(|g| {
                let (a, eps) = (g % 4, g / 4);
                let mut m = CMat::identity(2);
                for _ in 0..a {
                    m = m.mul(&rot);
                }
                if eps == 1 {
                    m = m.mul(&flip);
                }
                m
            })
            .collect(),
    );
    let irreps = vec![
        one(1.0, 1.0),
        one(1.0, -1.0),
        one(-1.0, 1.0),
        one(-1.0, -1.0),
        two,
    ];
    (model, IrrepCatalog::new(irreps))
}

/// Quaternion group {±1, ±i, ±j, ±k}.
pub fn quaternion_8() -> (FiniteGroupModel, IrrepCatalog) {
    // element = (basis 0..4 for 1,i,j,k; sign 0 plus, 1 minus), index = basis + 4*sign
    let base_mul = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) => (x, 0),
            (x, 0) => (x, 0),
            (1, 1) => (0, 1),
            (2, 2) => (0, 1),
            (3, 3) => (0, 1),
            (1, 2) => (3, 0),
            (2, 3) => (1, 0),
            (3, 1) => (2, 0),
            (2, 1) => (3, 1),
            (3, 2) => (1, 1),
            (1, 3) => (2, 1),
            _ => unreachable!(),
        }
    };
    let n = 8;
    let mut mult = vec![0usize; n * n];
    for a in 0..4 {
        for sa in 0..2 {
            for b in 0..4 {
                for sb in 0..2 {
                    let (c, sc) = base_mul(a, b);
                    mult[(a + 4 * sa) * n + (b + 4 * sb)] = c + 4 * ((sa + sb + sc) % 2);
                }
            }
        }
    }
    let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"];
    let model = FiniteGroupModel::from_parts(
        "q8",
        labels.iter().map(|s| s.to_string()).collect(),
        mult,
    )
    .unwrap();

    let one = |i_sign: f64, j_sign: f64| {
        let vals = [1.0, i_sign, j_sign, i_sign * j_sign];
        let matrices = (0..n)
            .map(|g| CMat::scalar(1, C64::new(vals[g % 4], 0.0)))
            .collect();
        Irrep::new(1, matrices)
    };
    let i_mat = CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => C64::new(0.0, 1.0),
        (1, 1) => C64::new(0.0, -1.0),
        _ => C64::new(0.0, 0.0),
    });
    let j_mat = CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => C64::new(-1.0, 0.0),
        (1, 0) => C64::new(1.0, 0.0),
        _ => C64::new(0.0, 0.0),
    });
    let base = [CMat::identity(2), i_mat.clone(), j_mat.clone(), i_mat.mul(&j_mat)];
    let two = Irrep::new(
        2,
        (0..n)
            .map(|g| {
                let m = base[g % 4].clone();
                if g >= 4 {
                    m.scale(C64::new(-1.0, 0.0))
                } else {
                    m
                }
            })
            .collect(),
    );
    let irreps = vec![one(1.0, 1.0), one(1.0, -1.0), one(-1.0, 1.0), one(-1.0, -1.0), two];
    (model, IrrepCatalog::new(irreps))
}

// ---------------------------------------------------------------------------
// Group file format
// ---------------------------------------------------------------------------

/// JSON group file. Complex entries are `[re, im]` pairs; matrices are
/// row-major, one per element in table order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub elements: Vec<String>,
    pub mult: Vec<usize>,
    pub irreps: Vec<IrrepData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrrepData {
    pub dim: usize,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

impl GroupFile {
    pub fn from_model(model: &FiniteGroupModel, cat: &IrrepCatalog) -> GroupFile {
        let irreps = cat
            .irreps()
            .iter()
            .map(|rep| IrrepData {
                dim: rep.dim(),
                matrices: rep
                    .matrices()
                    .iter()
                    .map(|m| m.data().iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            })
            .collect();
        GroupFile {
            name: model.name().to_string(),
            order: model.order(),
            elements: model.elements().to_vec(),
            mult: model.mult.clone(),
            irreps,
        }
    }

    /// Structural decode without the law/invariant audit.
    pub fn build(&self) -> Result<(FiniteGroupModel, IrrepCatalog), GroupError> {
        if self.order != self.elements.len() {
            return Err(GroupError::ElementCount {
                got: self.elements.len(),
                expected: self.order,
            });
        }
        let model =
            FiniteGroupModel::from_parts(self.name.clone(), self.elements.clone(), self.mult.clone())?;
        let mut irreps = Vec::with_capacity(self.irreps.len());
        for (index, data) in self.irreps.iter().enumerate() {
            if data.dim == 0 {
                return Err(GroupError::IrrepShape {
                    index,
                    msg: "dimension must be positive".into(),
                });
            }
            if data.matrices.len() != self.order {
                return Err(GroupError::IrrepShape {
                    index,
                    msg: format!(
                        "{} matrices given, expected one per element ({})",
                        data.matrices.len(),
                        self.order
                    ),
                });
            }
            let mut matrices = Vec::with_capacity(self.order);
            for (g, flat) in data.matrices.iter().enumerate() {
                if flat.len() != data.dim * data.dim {
                    return Err(GroupError::IrrepShape {
                        index,
                        msg: format!(
                            "element {g}: {} entries, expected {}",
                            flat.len(),
                            data.dim * data.dim
                        ),
                    });
                }
                let d = data.dim;
                matrices.push(CMat::from_fn(d, d, |i, j| {
                    let p = flat[i * d + j];
                    C64::new(p[0], p[1])
                }));
            }
            irreps.push(Irrep::new(data.dim, matrices));
        }
        Ok((model, IrrepCatalog::new(irreps)))
    }

    /// Decode plus the mandatory full audit; the first failure aborts the load.
    pub fn into_validated(&self) -> Result<(FiniteGroupModel, IrrepCatalog), GroupError> {
        let (model, cat) = self.build()?;
        let report = validate_model(&model, &cat);
        match report.failures.first() {
            None => Ok((model, cat)),
            Some(f) => Err(GroupError::Invalid(format!("{}: {}", f.check, f.witness))),
        }
    }
}
