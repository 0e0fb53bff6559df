//! Integer lattices, cosets of Z^d, and coset-ring indicator expressions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CosetError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("vector has length {got}, expected {expected}")]
    VectorLength { got: usize, expected: usize },
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("indicator value {value} at point {point:?} is outside {{0,1}}")]
    InvalidExpression { point: Vec<i64>, value: i64 },
    #[error("expression contains no infinite coset")]
    NoInfiniteCoset,
}

type Wide = i128;

fn widen(v: &[i64]) -> Vec<Wide> {
    v.iter().map(|&x| x as Wide).collect()
}

fn narrow(v: &[Wide]) -> Result<Vec<i64>, CosetError> {
    v.iter()
        .map(|&x| i64::try_from(x).map_err(|_| CosetError::Overflow))
        .collect()
}

fn pivot_col(row: &[Wide]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

fn checked_row_sub(
    target: &mut [Wide],
    source: &[Wide],
    q: Wide,
) -> Result<(), CosetError> {
    for (t, &s) in target.iter_mut().zip(source) {
        let prod = q.checked_mul(s).ok_or(CosetError::Overflow)?;
        *t = t.checked_sub(prod).ok_or(CosetError::Overflow)?;
    }
    Ok(())
}

/// Row Hermite normal form in place; mirrors every row operation on the
/// optional transform. Returns the rank; rows at index >= rank end up zero.
fn hnf_in_place(
    m: &mut Vec<Vec<Wide>>,
    mut transform: Option<&mut Vec<Vec<Wide>>>,
) -> Result<usize, CosetError> {
    let rows = m.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = m[0].len();
    let mut pivot = 0usize;
    for col in 0..cols {
        if pivot >= rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot..rows {
                if m[r][col] != 0
                    && best.map_or(true, |b| m[r][col].abs() < m[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot, b);
            if let Some(u) = transform.as_deref_mut() {
                u.swap(pivot, b);
            }
            let mut clean = true;
            for r in (pivot + 1)..rows {
                if m[r][col] != 0 {
                    let q = m[r][col] / m[pivot][col];
                    let pivot_row = m[pivot].clone();
                    checked_row_sub(&mut m[r], &pivot_row, q)?;
                    if let Some(u) = transform.as_deref_mut() {
                        let upivot = u[pivot].clone();
                        checked_row_sub(&mut u[r], &upivot, q)?;
                    }
                    if m[r][col] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if m[pivot][col] == 0 {
            continue;
        }
        if m[pivot][col] < 0 {
            for x in m[pivot].iter_mut() {
                *x = x.checked_neg().ok_or(CosetError::Overflow)?;
            }
            if let Some(u) = transform.as_deref_mut() {
                for x in u[pivot].iter_mut() {
                    *x = x.checked_neg().ok_or(CosetError::Overflow)?;
                }
            }
        }
        for r in 0..pivot {
            let q = m[r][col].div_euclid(m[pivot][col]);
            if q != 0 {
                let pivot_row = m[pivot].clone();
                checked_row_sub(&mut m[r], &pivot_row, q)?;
                if let Some(u) = transform.as_deref_mut() {
                    let upivot = u[pivot].clone();
                    checked_row_sub(&mut u[r], &upivot, q)?;
                }
            }
        }
        pivot += 1;
    }
    Ok(pivot)
}

fn identity_wide(n: usize) -> Vec<Vec<Wide>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect()
}

/// Solves w * H = target for the nonzero HNF rows by triangular exact
/// division; None when the target is outside the row space.
fn solve_in_hnf(h: &[Vec<Wide>], rank: usize, target: &[Wide]) -> Option<Vec<Wide>> {
    let mut rem = target.to_vec();
    let mut w = vec![0 as Wide; rank];
    for (k, row) in h.iter().take(rank).enumerate() {
        let p = pivot_col(row).expect("nonzero HNF row");
        if rem[p] % row[p] != 0 {
            return None;
        }
        let q = rem[p] / row[p];
        w[k] = q;
        for (r, &x) in rem.iter_mut().zip(row) {
            *r -= q * x;
        }
    }
    if rem.iter().all(|&x| x == 0) {
        Some(w)
    } else {
        None
    }
}

/// A sublattice of Z^d held as a Hermite-normal-form row basis: pivots
/// positive, zeros left of each pivot, entries above a pivot reduced into
/// [0, pivot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
}

impl Lattice {
    /// Lattice generated by the given rows (any integer vectors).
    pub fn from_generators(dim: usize, rows: &[Vec<i64>]) -> Result<Lattice, CosetError> {
        for row in rows {
            if row.len() != dim {
                return Err(CosetError::VectorLength {
                    got: row.len(),
                    expected: dim,
                });
            }
        }
        let mut m: Vec<Vec<Wide>> = rows.iter().map(|r| widen(r)).collect();
        let rank = hnf_in_place(&mut m, None)?;
        let basis = m[..rank]
            .iter()
            .map(|r| narrow(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Lattice { dim, basis })
    }

    pub fn zero(dim: usize) -> Lattice {
        Lattice {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Lattice {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Lattice { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Index in Z^d when full rank (product of pivots), None otherwise.
    pub fn index(&self) -> Option<u128> {
        if self.rank() < self.dim {
            return None;
        }
        let mut prod: u128 = 1;
        for row in &self.basis {
            let p = row[pivot_col(&widen(row)).expect("HNF row")] as u128;
            prod = prod.checked_mul(p)?;
        }
        Some(prod)
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool, CosetError> {
        if v.len() != self.dim {
            return Err(CosetError::VectorLength {
                got: v.len(),
                expected: self.dim,
            });
        }
        let mut rem = widen(v);
        for row in &self.basis {
            let row = widen(row);
            let p = pivot_col(&row).expect("HNF row");
            if rem[p] % row[p] != 0 {
                return Ok(false);
            }
            let q = rem[p] / row[p];
            for (r, &x) in rem.iter_mut().zip(&row) {
                *r -= q * x;
            }
        }
        Ok(rem.iter().all(|&x| x == 0))
    }

    /// Unique representative of v modulo the lattice: pivot coordinates land
    /// in [0, pivot).
    fn reduce(&self, v: &[Wide]) -> Vec<Wide> {
        let mut a = v.to_vec();
        for row in &self.basis {
            let row = widen(row);
            let p = pivot_col(&row).expect("HNF row");
            let q = a[p].div_euclid(row[p]);
            if q != 0 {
                for (x, &y) in a.iter_mut().zip(&row) {
                    *x -= q * y;
                }
            }
        }
        a
    }

    /// Intersection via the kernel of the stacked bases: unimodular row
    /// reduction of [B1; B2] tracks which combinations cancel, and those
    /// give generators of L1 and L2 simultaneously.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice, CosetError> {
        if self.dim != other.dim {
            return Err(CosetError::DimMismatch(self.dim, other.dim));
        }
        if self.rank() == 0 || other.rank() == 0 {
            return Ok(Lattice::zero(self.dim));
        }
        let mut stack: Vec<Vec<Wide>> = self
            .basis
            .iter()
            .chain(other.basis.iter())
            .map(|r| widen(r))
            .collect();
        let mut u = identity_wide(stack.len());
        let rank = hnf_in_place(&mut stack, Some(&mut u))?;
        let mut gens = Vec::new();
        for z in u.iter().skip(rank) {
            let mut g = vec![0 as Wide; self.dim];
            for (k, row) in self.basis.iter().enumerate() {
                for (c, &x) in row.iter().enumerate() {
                    let prod = z[k].checked_mul(x as Wide).ok_or(CosetError::Overflow)?;
                    g[c] = g[c].checked_add(prod).ok_or(CosetError::Overflow)?;
                }
            }
            gens.push(narrow(&g)?);
        }
        Lattice::from_generators(self.dim, &gens)
    }

    /// Every basis row multiplied by k > 0; a finite-index sublattice.
    pub fn scaled(&self, k: i64) -> Result<Lattice, CosetError> {
        assert!(k > 0, "scale factor must be positive");
        let rows: Vec<Vec<i64>> = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| x.checked_mul(k).ok_or(CosetError::Overflow))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Lattice::from_generators(self.dim, &rows)
    }
}

/// anchor + lattice with the anchor in canonical reduced form, so equal
/// cosets compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    anchor: Vec<i64>,
    lattice: Lattice,
}

impl Coset {
    pub fn new(anchor: Vec<i64>, lattice: Lattice) -> Result<Coset, CosetError> {
        if anchor.len() != lattice.dim() {
            return Err(CosetError::VectorLength {
                got: anchor.len(),
                expected: lattice.dim(),
            });
        }
        let reduced = narrow(&lattice.reduce(&widen(&anchor)))?;
        Ok(Coset {
            anchor: reduced,
            lattice,
        })
    }

    pub fn point(p: Vec<i64>) -> Result<Coset, CosetError> {
        let dim = p.len();
        Coset::new(p, Lattice::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn anchor(&self) -> &[i64] {
        &self.anchor
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn contains(&self, p: &[i64]) -> Result<bool, CosetError> {
        if p.len() != self.dim() {
            return Err(CosetError::VectorLength {
                got: p.len(),
                expected: self.dim(),
            });
        }
        let diff: Vec<i64> = p
            .iter()
            .zip(&self.anchor)
            .map(|(&a, &b)| a.checked_sub(b).ok_or(CosetError::Overflow))
            .collect::<Result<_, _>>()?;
        self.lattice.contains(&diff)
    }

    /// Empty, or the coset of the intersection lattice through a common
    /// point solved from the congruence system x B1 - y B2 = a2 - a1.
    pub fn intersect(&self, other: &Coset) -> Result<Option<Coset>, CosetError> {
        if self.dim() != other.dim() {
            return Err(CosetError::DimMismatch(self.dim(), other.dim()));
        }
        let delta: Vec<Wide> = other
            .anchor
            .iter()
            .zip(&self.anchor)
            .map(|(&a, &b)| a as Wide - b as Wide)
            .collect();
        let mut stack: Vec<Vec<Wide>> = self.lattice.basis.iter().map(|r| widen(r)).collect();
        stack.extend(other.lattice.basis.iter().map(|r| {
            widen(r).iter().map(|&x| -x).collect::<Vec<Wide>>()
        }));
        if stack.is_empty() {
            // two points: intersect iff equal
            return if delta.iter().all(|&x| x == 0) {
                Ok(Some(self.clone()))
            } else {
                Ok(None)
            };
        }
        let mut u = identity_wide(stack.len());
        let rank = hnf_in_place(&mut stack, Some(&mut u))?;
        let Some(w) = solve_in_hnf(&stack, rank, &delta) else {
            return Ok(None);
        };
        // z = w * U picks out a concrete solution of the stacked system
        let mut z = vec![0 as Wide; u.len()];
        for (k, &wk) in w.iter().enumerate() {
            for (c, &x) in u[k].iter().enumerate() {
                let prod = wk.checked_mul(x).ok_or(CosetError::Overflow)?;
                z[c] = z[c].checked_add(prod).ok_or(CosetError::Overflow)?;
            }
        }
        let mut point: Vec<Wide> = widen(&self.anchor);
        for (k, row) in self.lattice.basis.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                let prod = z[k].checked_mul(x as Wide).ok_or(CosetError::Overflow)?;
                point[c] = point[c].checked_add(prod).ok_or(CosetError::Overflow)?;
            }
        }
        let lattice = self.lattice.intersect(&other.lattice)?;
        Ok(Some(Coset::new(narrow(&point)?, lattice)?))
    }
}

impl std::fmt::Display for Coset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} + span{:?}", self.anchor, self.lattice.basis)
    }
}

/// Indicator combination sum of positives minus sum of negatives; valid
/// expressions take values in {0,1}.
#[derive(Debug, Clone)]
pub struct CosetExpr {
    dim: usize,
    positives: Vec<Coset>,
    negatives: Vec<Coset>,
}

impl CosetExpr {
    pub fn new(
        dim: usize,
        positives: Vec<Coset>,
        negatives: Vec<Coset>,
    ) -> Result<CosetExpr, CosetError> {
        for c in positives.iter().chain(&negatives) {
            if c.dim() != dim {
                return Err(CosetError::DimMismatch(c.dim(), dim));
            }
        }
        Ok(CosetExpr {
            dim,
            positives,
            negatives,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positives(&self) -> &[Coset] {
        &self.positives
    }

    pub fn negatives(&self) -> &[Coset] {
        &self.negatives
    }

    /// Indicator evaluation; a value outside {0,1} means the expression is
    /// not a valid set description and is reported as such.
    pub fn membership(&self, p: &[i64]) -> Result<bool, CosetError> {
        let mut value: i64 = 0;
        for c in &self.positives {
            if c.contains(p)? {
                value += 1;
            }
        }
        for c in &self.negatives {
            if c.contains(p)? {
                value -= 1;
            }
        }
        match value {
            0 => Ok(false),
            1 => Ok(true),
            v => Err(CosetError::InvalidExpression {
                point: p.to_vec(),
                value: v,
            }),
        }
    }

    /// Runs the indicator over the whole box [-radius, radius]^d, failing on
    /// the first value outside {0,1}.
    pub fn verify_box(&self, radius: i64) -> Result<(), CosetError> {
        let mut any = Ok(());
        scan_box(self.dim, radius, |p| {
            if let Err(e) = self.membership(p) {
                any = Err(e);
                return false;
            }
            true
        });
        any
    }
}

/// Calls f on every point of [-radius, radius]^dim until f returns false.
pub fn scan_box(dim: usize, radius: i64, mut f: impl FnMut(&[i64]) -> bool) {
    let mut p = vec![-radius; dim];
    if dim == 0 {
        f(&p);
        return;
    }
    loop {
        if !f(&p) {
            return;
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if p[k] < radius {
                p[k] += 1;
                for x in p.iter_mut().skip(k + 1) {
                    *x = -radius;
                }
                break;
            }
        }
    }
}

/// Outcome of the almost-coset extraction: a coset of an infinite lattice
/// and the finitely many points of it that fall outside the set.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub coset: Coset,
    pub exceptions: Vec<Vec<i64>>,
}

const SEARCH_RADIUS: i64 = 48;

/// Finds a coset c with rank >= 1 and a finite exception set such that
/// c minus the exceptions lies inside the set described by `expr`.
///
/// For each ambient positive coset A the other cosets are split greedily:
/// those whose lattice keeps the working lattice L at rank >= 1 shrink it
/// (membership in them is then constant on every coset of L), the rest meet
/// each coset of L in at most one point and become correction candidates.
/// A coset of L on which the generic indicator value is 1 is then located by
/// scanning anchor candidates in growing coefficient boxes.
pub fn extract_almost_coset(expr: &CosetExpr) -> Result<Extraction, CosetError> {
    for (ai, ambient) in expr.positives.iter().enumerate() {
        if ambient.rank() == 0 {
            continue;
        }
        let mut working = ambient.lattice().clone();
        let mut isolated: Vec<&Coset> = Vec::new();
        let others = expr
            .positives
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != ai)
            .map(|(_, c)| c)
            .chain(expr.negatives.iter());
        for other in others {
            let meet = working.intersect(other.lattice())?;
            if meet.rank() >= 1 {
                working = meet;
            } else {
                isolated.push(other);
            }
        }

        if let Some(found) = search_ambient(expr, ambient, &working, &isolated)? {
            return Ok(found);
        }
    }
    Err(CosetError::NoInfiniteCoset)
}

fn search_ambient(
    expr: &CosetExpr,
    ambient: &Coset,
    working: &Lattice,
    isolated: &[&Coset],
) -> Result<Option<Extraction>, CosetError> {
    let rank = ambient.rank();
    let mut seen: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    let mut coeff = vec![0i64; rank];
    for radius in 0..=SEARCH_RADIUS {
        let mut result: Result<Option<Extraction>, CosetError> = Ok(None);
        let mut shell_hit = false;
        // enumerate coefficient vectors with max-norm equal to radius
        scan_box(rank, radius, |c| {
            if c.iter().map(|x| x.abs()).max().unwrap_or(0) != radius {
                return true;
            }
            coeff.copy_from_slice(c);
            let mut p = widen(ambient.anchor());
            for (k, row) in ambient.lattice().basis().iter().enumerate() {
                for (x, &y) in p.iter_mut().zip(row) {
                    *x += coeff[k] as Wide * y as Wide;
                }
            }
            let p = match narrow(&p) {
                Ok(p) => p,
                Err(e) => {
                    result = Err(e);
                    return false;
                }
            };
            match probe_line(expr, &p, working, isolated, &mut seen) {
                Ok(None) => true,
                Ok(Some(found)) => {
                    result = Ok(Some(found));
                    shell_hit = true;
                    false
                }
                Err(e) => {
                    result = Err(e);
                    false
                }
            }
        });
        if shell_hit || result.is_err() {
            return result;
        }
    }
    Ok(None)
}

/// Tests one coset p + L: gathers the isolated-coset hit points, evaluates
/// the indicator at a point clear of them, and on success reports the coset
/// with the hits that are genuinely missing from the set.
fn probe_line(
    expr: &CosetExpr,
    p: &[i64],
    working: &Lattice,
    isolated: &[&Coset],
    seen: &mut std::collections::HashSet<Vec<i64>>,
) -> Result<Option<Extraction>, CosetError> {
    let line = Coset::new(p.to_vec(), working.clone())?;
    if !seen.insert(line.anchor().to_vec()) {
        return Ok(None);
    }
    let mut hits: Vec<Vec<i64>> = Vec::new();
    for iso in isolated {
        if let Some(meet) = line.intersect(iso)? {
            // rank-0 intersection lattice: the coset is the single point
            debug_assert_eq!(meet.rank(), 0);
            if !hits.contains(&meet.anchor().to_vec()) {
                hits.push(meet.anchor().to_vec());
            }
        }
    }
    let step = widen(&working.basis()[0]);
    let mut generic: Option<Vec<i64>> = None;
    for t in 0..=(hits.len() as Wide + 1) {
        let q: Vec<Wide> = widen(p)
            .iter()
            .zip(&step)
            .map(|(&a, &b)| a + t * b)
            .collect();
        let q = narrow(&q)?;
        if !hits.contains(&q) {
            generic = Some(q);
            break;
        }
    }
    let q = generic.expect("more probe points than hit points");
    if !expr.membership(&q)? {
        return Ok(None);
    }
    let mut exceptions = Vec::new();
    for x in hits {
        if !expr.membership(&x)? {
            exceptions.push(x);
        }
    }
    Ok(Some(Extraction {
        coset: line,
        exceptions,
    }))
}

/// Box-scan confirmation that coset minus exceptions stays inside the set.
pub fn check_extraction(
    expr: &CosetExpr,
    extraction: &Extraction,
    radius: i64,
) -> Result<bool, CosetError> {
    let mut verdict = Ok(true);
    scan_box(expr.dim(), radius, |p| {
        let inside = match extraction.coset.contains(p) {
            Ok(v) => v,
            Err(e) => {
                verdict = Err(e);
                return false;
            }
        };
        if !inside || extraction.exceptions.iter().any(|x| x == p) {
            return true;
        }
        match expr.membership(p) {
            Ok(true) => true,
            Ok(false) => {
                verdict = Ok(false);
                false
            }
            Err(e) => {
                verdict = Err(e);
                false
            }
        }
    });
    verdict
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CosetData {
    pub anchor: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CosetExprData {
    pub dim: usize,
    pub positives: Vec<CosetData>,
    pub negatives: Vec<CosetData>,
}

impl CosetData {
    pub fn build(&self, dim: usize) -> Result<Coset, CosetError> {
        let lattice = Lattice::from_generators(dim, &self.basis)?;
        Coset::new(self.anchor.clone(), lattice)
    }

    pub fn from_coset(c: &Coset) -> CosetData {
        CosetData {
            anchor: c.anchor().to_vec(),
            basis: c.lattice().basis().to_vec(),
        }
    }
}

impl CosetExprData {
    pub fn build(&self) -> Result<CosetExpr, CosetError> {
        let positives = self
            .positives
            .iter()
            .map(|c| c.build(self.dim))
            .collect::<Result<Vec<_>, _>>()?;
        let negatives = self
            .negatives
            .iter()
            .map(|c| c.build(self.dim))
            .collect::<Result<Vec<_>, _>>()?;
        CosetExpr::new(self.dim, positives, negatives)
    }

    pub fn from_expr(expr: &CosetExpr) -> CosetExprData {
        CosetExprData {
            dim: expr.dim(),
            positives: expr.positives().iter().map(CosetData::from_coset).collect(),
            negatives: expr.negatives().iter().map(CosetData::from_coset).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Randomized valid expressions
// ---------------------------------------------------------------------------

pub mod sampling {
    use super::*;
    use rand::Rng;

    fn random_ambient<R: Rng>(dim: usize, rng: &mut R) -> Result<Coset, CosetError> {
        let anchor: Vec<i64> = (0..dim).map(|_| rng.gen_range(-5..=5)).collect();
        let rows: Vec<Vec<i64>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            rng.gen_range(1..=3)
                        } else if j > i {
                            rng.gen_range(0..=2)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        Coset::new(anchor, Lattice::from_generators(dim, &rows)?)
    }

    fn random_point_of<R: Rng>(c: &Coset, rng: &mut R) -> Result<Vec<i64>, CosetError> {
        let mut p = widen(c.anchor());
        for row in c.lattice().basis() {
            let k = rng.gen_range(-3..=3) as Wide;
            for (x, &y) in p.iter_mut().zip(row) {
                *x += k * y as Wide;
            }
        }
        narrow(&p)
    }

    fn random_subcoset<R: Rng>(a: &Coset, scale: i64, rng: &mut R) -> Result<Coset, CosetError> {
        let anchor = random_point_of(a, rng)?;
        Coset::new(anchor, a.lattice().scaled(scale)?)
    }

    /// A random expression whose indicator provably stays in {0,1}: an
    /// ambient coset (optionally a disjoint union of two), minus sub-cosets
    /// of proper index with inclusion-exclusion corrections, minus single
    /// points still inside the set.
    pub fn random_expression<R: Rng>(dim: usize, rng: &mut R) -> Result<CosetExpr, CosetError> {
        let ambient = random_ambient(dim, rng)?;
        // proper sub-cosets must leave a residue class uncovered
        let scale = if ambient.rank() <= 1 { 3 } else { 2 };
        let mut positives = vec![ambient.clone()];
        let mut negatives = Vec::new();

        match rng.gen_range(0..4) {
            0 => {}
            1 => {
                negatives.push(random_subcoset(&ambient, scale, rng)?);
            }
            2 => {
                let b1 = random_subcoset(&ambient, scale, rng)?;
                let b2 = random_subcoset(&ambient, scale, rng)?;
                if let Some(meet) = b1.intersect(&b2)? {
                    positives.push(meet);
                }
                negatives.push(b1);
                negatives.push(b2);
            }
            _ => {
                // disjoint second ambient: same lattice, different residue
                for _ in 0..40 {
                    let mut shifted = ambient.anchor().to_vec();
                    let k = rng.gen_range(0..dim);
                    shifted[k] += rng.gen_range(1..=5);
                    let other = Coset::new(shifted, ambient.lattice().clone())?;
                    if other.anchor() != ambient.anchor() {
                        positives.push(other);
                        break;
                    }
                }
            }
        }

        let expr = CosetExpr::new(dim, positives.clone(), negatives.clone())?;
        // point removals, only where the indicator currently equals 1
        if rng.gen_bool(0.5) {
            let pt = random_point_of(&ambient, rng)?;
            if expr.membership(&pt)? {
                negatives.push(Coset::point(pt)?);
            }
        }
        CosetExpr::new(dim, positives, negatives)
    }
}
