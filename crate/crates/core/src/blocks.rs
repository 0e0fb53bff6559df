//! Block-diagonal model of the group algebra and the functionals living on it.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::group::{self, FiniteGroupModel, GroupError, IrrepCatalog};
use crate::linalg::{self, CMat, LinalgError, RANK_TOL};

/// Absolute tolerance for transform round trips, positivity and projection
/// identities.
pub const BLOCK_TOL: f64 = 1e-9;
/// Kernel-matrix positivity cut used by the independent oracle route.
pub const KERNEL_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("value vector has length {got}, expected group order {expected}")]
    ValueLength { got: usize, expected: usize },
    #[error("block {index} has shape {rows}x{cols}, expected {dim}x{dim}")]
    BlockShape {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("functional is not positive definite")]
    NotPositive,
    #[error("functional is zero")]
    ZeroFunctional,
    #[error("epsilon must be positive")]
    NonPositiveEps,
    #[error("element index {0} out of range")]
    ElementOutOfRange(usize),
    #[error("irrep index {0} out of range")]
    IrrepOutOfRange(usize),
    #[error("tensor multiplicity for irrep {index} is {value}, not an integer within 1e-8")]
    NonIntegerMultiplicity { index: usize, value: f64 },
    #[error("tensor intertwiner construction failed: {0}")]
    TensorStructure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index set {0} is not a subgroup of the model")]
    NotSubgroup(String),
    #[error("lambda = {0} lies in the range of the extended function")]
    LambdaInRange(C64),
    #[error("function descriptor undefined at {0}")]
    UndefinedAt(C64),
    #[error("function descriptor ambiguous at {0}")]
    AmbiguousAt(C64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A functional on the group algebra, held both as values on the group and
/// as its matrix blocks, one per irrep.
#[derive(Debug, Clone)]
pub struct BlockFunctional {
    values: Vec<C64>,
    blocks: Vec<CMat>,
}

impl BlockFunctional {
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }
}

/// One orthogonal projection per block.
#[derive(Debug, Clone)]
pub struct BlockProjection {
    blocks: Vec<CMat>,
}

impl BlockProjection {
    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }

    pub fn block_ranks(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|p| p.trace().re.round() as usize)
            .collect()
    }

    pub fn total_rank(&self) -> usize {
        self.block_ranks().iter().sum()
    }

    /// max deviation from the projection laws p = p* = p^2.
    pub fn projection_deviation(&self) -> f64 {
        self.blocks
            .iter()
            .map(|p| p.hermitian_deviation().max(p.mul(p).sub(p).max_abs()))
            .fold(0.0, f64::max)
    }

    /// Largest entry of any blockwise product p_i q_i; zero iff orthogonal.
    pub fn product_norm(&self, other: &BlockProjection) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(p, q)| p.mul(q).max_abs())
            .fold(0.0, f64::max)
    }

    /// p <= q as projections, i.e. q p = p within tol.
    pub fn leq(&self, other: &BlockProjection, tol: f64) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(p, q)| q.mul(p).sub(p).max_abs() <= tol)
    }

    pub fn distance(&self, other: &BlockProjection) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(p, q)| p.sub(q).max_abs())
            .fold(0.0, f64::max)
    }

    /// Central means every block is 0 or the identity.
    pub fn is_central(&self, tol: f64) -> bool {
        self.blocks.iter().all(|p| {
            p.max_abs() <= tol || p.sub(&CMat::identity(p.rows())).max_abs() <= tol
        })
    }
}

/// One matrix per block with v v* v = v.
#[derive(Debug, Clone)]
pub struct BlockPartialIsometry {
    blocks: Vec<CMat>,
}

impl BlockPartialIsometry {
    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn deviation(&self) -> f64 {
        self.blocks
            .iter()
            .map(|v| v.mul(&v.adjoint()).mul(v).sub(v).max_abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportRelation {
    AbsolutelyContinuous,
    Singular,
    Neither,
}

impl std::fmt::Display for SupportRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SupportRelation::AbsolutelyContinuous => "absolutely_continuous",
            SupportRelation::Singular => "singular",
            SupportRelation::Neither => "neither",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Predicates {
    pub is_tracial: bool,
    pub is_gns_faithful: bool,
}

#[derive(Debug, Clone)]
pub struct LebesgueSplit {
    pub absolutely_continuous: BlockFunctional,
    pub singular: BlockFunctional,
}

/// Tensor product of two irreps rewritten as a direct sum: multiplicities,
/// the adapting unitary, and the column layout of its copies.
#[derive(Debug, Clone)]
pub struct TensorDecomposition {
    pub multiplicities: Vec<usize>,
    pub intertwiner: CMat,
    pub slots: Vec<TensorSlot>,
    /// Worst deviation, over all group elements, of the conjugated tensor
    /// representation from the expected block-diagonal copies, including the
    /// unitarity defect of the intertwiner itself.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorSlot {
    pub irrep: usize,
    pub copy: usize,
    pub offset: usize,
}

/// Pointwise function descriptors for the holomorphic calculus on a finite
/// range.
#[derive(Debug, Clone)]
pub enum CalcFn {
    Identity,
    Square,
    /// Coefficients in ascending degree order.
    Polynomial(Vec<C64>),
    Rational { num: Vec<C64>, den: Vec<C64> },
    LocallyConstant(Vec<Piece>),
}

/// Constant value on a disk; used for the 0/1 idempotent descriptors.
#[derive(Debug, Clone, Copy)]
pub struct Piece {
    pub center: C64,
    pub radius: f64,
    pub value: C64,
}

/// Result of the extension-identity check for a function on a subgroup.
#[derive(Debug, Clone)]
pub struct PrzReport {
    /// Product values (f~ - lambda 1_G)(g~ - (1/lambda) 1_{G\H}) per element.
    pub product: Vec<C64>,
    pub max_deviation: f64,
    /// True when every product value is bitwise equal to 1.
    pub exact: bool,
    /// Sorted distinct values of the extension.
    pub extended_range: Vec<C64>,
    /// Extension range equals the subgroup range plus {0} (for proper H).
    pub range_matches: bool,
}

/// A validated finite group together with its irrep catalog; the ambient
/// context for every block-model operation.
#[derive(Debug, Clone)]
pub struct GroupAlgebra {
    model: FiniteGroupModel,
    cat: IrrepCatalog,
}

impl GroupAlgebra {
    pub fn new(model: FiniteGroupModel, cat: IrrepCatalog) -> Result<Self, AlgebraError> {
        let report = group::validate_model(&model, &cat);
        if let Some(f) = report.failures.first() {
            return Err(AlgebraError::Group(GroupError::Invalid(format!(
                "{}: {}",
                f.check, f.witness
            ))));
        }
        Ok(GroupAlgebra { model, cat })
    }

    pub fn bundled(name: &str) -> Result<Self, AlgebraError> {
        let (model, cat) = group::bundled(name)?;
        GroupAlgebra::new(model, cat)
    }

    pub fn model(&self) -> &FiniteGroupModel {
        &self.model
    }

    pub fn catalog(&self) -> &IrrepCatalog {
        &self.cat
    }

    pub fn order(&self) -> usize {
        self.model.order()
    }

    fn check_values(&self, values: &[C64]) -> Result<(), AlgebraError> {
        if values.len() != self.order() {
            return Err(AlgebraError::ValueLength {
                got: values.len(),
                expected: self.order(),
            });
        }
        Ok(())
    }

    fn check_irrep(&self, i: usize) -> Result<(), AlgebraError> {
        if i >= self.cat.len() {
            return Err(AlgebraError::IrrepOutOfRange(i));
        }
        Ok(())
    }

    // -- basic constructions -------------------------------------------------

    /// Indicator of a single element.
    pub fn delta(&self, g: usize) -> Result<Vec<C64>, AlgebraError> {
        if g >= self.order() {
            return Err(AlgebraError::ElementOutOfRange(g));
        }
        let mut v = vec![C64::new(0.0, 0.0); self.order()];
        v[g] = C64::new(1.0, 0.0);
        Ok(v)
    }

    /// Character of one irrep as a value vector.
    pub fn character_values(&self, l: usize) -> Result<Vec<C64>, AlgebraError> {
        self.check_irrep(l)?;
        Ok(self.cat.irrep(l).character())
    }

    /// Matrix coefficient g -> <xi, U_l(g) eta>.
    pub fn coefficient_values(
        &self,
        l: usize,
        xi: &[C64],
        eta: &[C64],
    ) -> Result<Vec<C64>, AlgebraError> {
        self.check_irrep(l)?;
        let rep = self.cat.irrep(l);
        if xi.len() != rep.dim() || eta.len() != rep.dim() {
            return Err(AlgebraError::BlockShape {
                index: l,
                rows: xi.len(),
                cols: eta.len(),
                dim: rep.dim(),
            });
        }
        Ok((0..self.order())
            .map(|g| linalg::inner(xi, &rep.matrix(g).apply(eta)))
            .collect())
    }

    pub fn delta_functional(&self, g: usize) -> Result<BlockFunctional, AlgebraError> {
        let v = self.delta(g)?;
        self.to_blocks(&v)
    }

    pub fn character_functional(&self, l: usize) -> Result<BlockFunctional, AlgebraError> {
        let v = self.character_values(l)?;
        self.to_blocks(&v)
    }

    pub fn coefficient_functional(
        &self,
        l: usize,
        xi: &[C64],
        eta: &[C64],
    ) -> Result<BlockFunctional, AlgebraError> {
        let v = self.coefficient_values(l, xi, eta)?;
        self.to_blocks(&v)
    }

    // -- the block transform -------------------------------------------------

    /// M_i = (d_i/|G|) sum_g f(g) U_i(g)*.
    pub fn to_blocks(&self, values: &[C64]) -> Result<BlockFunctional, AlgebraError> {
        self.check_values(values)?;
        let n = self.order() as f64;
        let blocks = self
            .cat
            .irreps()
            .iter()
            .map(|rep| {
                let d = rep.dim();
                let mut m = CMat::zeros(d, d);
                for (g, &fg) in values.iter().enumerate() {
                    m = m.add(&rep.matrix(g).adjoint().scale(fg));
                }
                m.scale(C64::new(rep.dim() as f64 / n, 0.0))
            })
            .collect();
        Ok(BlockFunctional {
            values: values.to_vec(),
            blocks,
        })
    }

    /// f(g) = sum_i trace(M_i U_i(g)).
    pub fn from_blocks(&self, blocks: Vec<CMat>) -> Result<BlockFunctional, AlgebraError> {
        if blocks.len() != self.cat.len() {
            return Err(AlgebraError::BlockShape {
                index: blocks.len(),
                rows: 0,
                cols: 0,
                dim: self.cat.len(),
            });
        }
        for (index, (m, rep)) in blocks.iter().zip(self.cat.irreps()).enumerate() {
            if m.rows() != rep.dim() || m.cols() != rep.dim() {
                return Err(AlgebraError::BlockShape {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim: rep.dim(),
                });
            }
        }
        let values = (0..self.order())
            .map(|g| {
                blocks
                    .iter()
                    .zip(self.cat.irreps())
                    .map(|(m, rep)| m.mul(rep.matrix(g)).trace())
                    .sum()
            })
            .collect();
        Ok(BlockFunctional { values, blocks })
    }

    /// alpha f + beta g on both representations at once.
    pub fn combine(
        &self,
        alpha: C64,
        f: &BlockFunctional,
        beta: C64,
        g: &BlockFunctional,
    ) -> BlockFunctional {
        let values = f
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let blocks = f
            .blocks
            .iter()
            .zip(&g.blocks)
            .map(|(a, b)| a.scale(alpha).add(&b.scale(beta)))
            .collect();
        BlockFunctional { values, blocks }
    }

    // -- pairing and norm ----------------------------------------------------

    /// <f, x> = sum_g f(g) x(g) on raw coefficient vectors.
    pub fn pairing_values(&self, f: &[C64], x: &[C64]) -> C64 {
        f.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// The same pairing through the block model: sum_i trace(M_i X_i).
    pub fn pairing_blocks(&self, f: &BlockFunctional, x: &[CMat]) -> C64 {
        f.blocks.iter().zip(x).map(|(m, xm)| m.mul(xm).trace()).sum()
    }

    /// Image of an algebra element x = sum x(g) g in every block.
    pub fn element_blocks(&self, x: &[C64]) -> Result<Vec<CMat>, AlgebraError> {
        self.check_values(x)?;
        Ok(self
            .cat
            .irreps()
            .iter()
            .map(|rep| {
                let mut m = CMat::zeros(rep.dim(), rep.dim());
                for (g, &xg) in x.iter().enumerate() {
                    m = m.add(&rep.matrix(g).scale(xg));
                }
                m
            })
            .collect())
    }

    /// Largest blockwise operator norm; the norm dual to `bg_norm`.
    pub fn element_norm(&self, x: &[CMat]) -> Result<f64, AlgebraError> {
        let mut best = 0.0f64;
        for m in x {
            best = best.max(linalg::operator_norm(m)?);
        }
        Ok(best)
    }

    /// Sum of blockwise trace norms.
    pub fn bg_norm(&self, f: &BlockFunctional) -> Result<f64, AlgebraError> {
        let mut total = 0.0;
        for m in &f.blocks {
            total += linalg::trace_norm(m)?;
        }
        Ok(total)
    }

    // -- positivity ----------------------------------------------------------

    /// Blockwise route: every block Hermitian within 1e-9 with smallest
    /// eigenvalue >= -1e-9.
    pub fn is_positive(&self, f: &BlockFunctional) -> Result<bool, AlgebraError> {
        for m in &f.blocks {
            if m.hermitian_deviation() > BLOCK_TOL {
                return Ok(false);
            }
            let eig = linalg::eigh(&m.hermitian_part())?;
            if eig.values.first().copied().unwrap_or(0.0) < -BLOCK_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The kernel matrix [f(s^{-1} t)]_{s,t}.
    pub fn kernel_matrix(&self, values: &[C64]) -> Result<CMat, AlgebraError> {
        self.check_values(values)?;
        let n = self.order();
        Ok(CMat::from_fn(n, n, |s, t| {
            values[self.model.mul(self.model.inv(s), t)]
        }))
    }

    /// Independent oracle route: the kernel matrix is PSD within 1e-8.
    pub fn is_positive_kernel(&self, values: &[C64]) -> Result<bool, AlgebraError> {
        let k = self.kernel_matrix(values)?;
        if k.hermitian_deviation() > KERNEL_TOL * k.max_abs().max(1.0) {
            return Ok(false);
        }
        let eig = linalg::eigh(&k.hermitian_part())?;
        Ok(eig.values.first().copied().unwrap_or(0.0) >= -KERNEL_TOL)
    }

    // -- polar and supports ----------------------------------------------------

    /// Blockwise polar decomposition M_i = V_i P_i with positive part packed
    /// into a functional.
    pub fn polar(
        &self,
        f: &BlockFunctional,
    ) -> Result<(BlockPartialIsometry, BlockFunctional), AlgebraError> {
        let mut isometries = Vec::with_capacity(f.blocks.len());
        let mut positives = Vec::with_capacity(f.blocks.len());
        for m in &f.blocks {
            let p = linalg::polar(m)?;
            isometries.push(p.isometry);
            positives.push(p.positive);
        }
        let absf = self.from_blocks(positives)?;
        Ok((BlockPartialIsometry { blocks: isometries }, absf))
    }

    /// Dual element attaining the norm: x = direct sum of V_i*.
    pub fn norming_element(&self, f: &BlockFunctional) -> Result<Vec<CMat>, AlgebraError> {
        let (v, _) = self.polar(f)?;
        Ok(v.blocks.iter().map(|m| m.adjoint()).collect())
    }

    /// Range projection of every block; positive functionals only.
    pub fn support(&self, f: &BlockFunctional) -> Result<BlockProjection, AlgebraError> {
        if !self.is_positive(f)? {
            return Err(AlgebraError::NotPositive);
        }
        let blocks = f
            .blocks
            .iter()
            .map(|m| linalg::range_projection(&m.hermitian_part()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BlockProjection { blocks })
    }

    /// Block indices whose operator norm clears the scale-aware rank cut.
    pub fn nonzero_blocks(&self, f: &BlockFunctional) -> Result<Vec<bool>, AlgebraError> {
        let norms = f
            .blocks
            .iter()
            .map(linalg::operator_norm)
            .collect::<Result<Vec<_>, _>>()?;
        let scale = norms.iter().cloned().fold(1.0, f64::max);
        Ok(norms.iter().map(|&n| n > RANK_TOL * scale).collect())
    }

    /// Identity on every nonzero block, zero elsewhere.
    pub fn central_support(&self, f: &BlockFunctional) -> Result<BlockProjection, AlgebraError> {
        let nonzero = self.nonzero_blocks(f)?;
        let blocks = self
            .cat
            .irreps()
            .iter()
            .zip(&nonzero)
            .map(|(rep, &nz)| {
                if nz {
                    CMat::identity(rep.dim())
                } else {
                    CMat::zeros(rep.dim(), rep.dim())
                }
            })
            .collect();
        Ok(BlockProjection { blocks })
    }

    /// Compares nonzero-block sets: subset, disjoint, or neither.
    pub fn support_relation(
        &self,
        f: &BlockFunctional,
        g: &BlockFunctional,
    ) -> Result<SupportRelation, AlgebraError> {
        let nf = self.nonzero_blocks(f)?;
        let ng = self.nonzero_blocks(g)?;
        if nf.iter().zip(&ng).all(|(&a, &b)| !a || b) {
            return Ok(SupportRelation::AbsolutelyContinuous);
        }
        if nf.iter().zip(&ng).all(|(&a, &b)| !(a && b)) {
            return Ok(SupportRelation::Singular);
        }
        Ok(SupportRelation::Neither)
    }

    /// Splits f into the part carried by g's nonzero blocks and the rest.
    pub fn lebesgue(
        &self,
        f: &BlockFunctional,
        g: &BlockFunctional,
    ) -> Result<LebesgueSplit, AlgebraError> {
        let ng = self.nonzero_blocks(g)?;
        let mut ac_blocks = Vec::with_capacity(f.blocks.len());
        let mut sg_blocks = Vec::with_capacity(f.blocks.len());
        for (m, &nz) in f.blocks.iter().zip(&ng) {
            let zero = CMat::zeros(m.rows(), m.cols());
            if nz {
                ac_blocks.push(m.clone());
                sg_blocks.push(zero);
            } else {
                ac_blocks.push(zero);
                sg_blocks.push(m.clone());
            }
        }
        Ok(LebesgueSplit {
            absolutely_continuous: self.from_blocks(ac_blocks)?,
            singular: self.from_blocks(sg_blocks)?,
        })
    }

    /// Tracial: every block a scalar multiple of the identity. GNS faithful:
    /// every nonzero block has full rank (support = central support).
    pub fn predicates(&self, f: &BlockFunctional) -> Result<Predicates, AlgebraError> {
        let mut is_tracial = true;
        for m in &f.blocks {
            let d = m.rows();
            let mean = m.trace() / d as f64;
            if m.sub(&CMat::scalar(d, mean)).max_abs() > BLOCK_TOL {
                is_tracial = false;
                break;
            }
        }
        let nonzero = self.nonzero_blocks(f)?;
        let mut is_gns_faithful = true;
        for (m, &nz) in f.blocks.iter().zip(&nonzero) {
            if nz && linalg::rank(m)? < m.rows() {
                is_gns_faithful = false;
                break;
            }
        }
        Ok(Predicates {
            is_tracial,
            is_gns_faithful,
        })
    }

    /// Faithful perturbation psi = f + (eps/2B) sum over nonzero blocks of
    /// the unit-trace-norm identity density; same central support, distance
    /// at most eps.
    pub fn gns_faithful_approx(
        &self,
        f: &BlockFunctional,
        eps: f64,
    ) -> Result<BlockFunctional, AlgebraError> {
        if eps <= 0.0 {
            return Err(AlgebraError::NonPositiveEps);
        }
        if !self.is_positive(f)? {
            return Err(AlgebraError::NotPositive);
        }
        let nonzero = self.nonzero_blocks(f)?;
        let count = nonzero.iter().filter(|&&b| b).count();
        if count == 0 {
            return Err(AlgebraError::ZeroFunctional);
        }
        let weight = eps / (2.0 * count as f64);
        let blocks = f
            .blocks
            .iter()
            .zip(&nonzero)
            .map(|(m, &nz)| {
                if nz {
                    let d = m.rows();
                    m.add(&CMat::scalar(d, C64::new(weight / d as f64, 0.0)))
                } else {
                    m.clone()
                }
            })
            .collect();
        self.from_blocks(blocks)
    }

    // -- translation ---------------------------------------------------------

    /// Two-sided translate t -> f(a t b).
    pub fn translate(
        &self,
        values: &[C64],
        a: usize,
        b: usize,
    ) -> Result<Vec<C64>, AlgebraError> {
        self.check_values(values)?;
        if a >= self.order() || b >= self.order() {
            return Err(AlgebraError::ElementOutOfRange(a.max(b)));
        }
        Ok((0..self.order())
            .map(|t| values[self.model.mul(self.model.mul(a, t), b)])
            .collect())
    }

    /// Rank of the stack of all two-sided translates.
    pub fn translate_span_dim(&self, values: &[C64]) -> Result<usize, AlgebraError> {
        self.check_values(values)?;
        let n = self.order();
        let mut stack = CMat::zeros(n * n, n);
        for a in 0..n {
            for b in 0..n {
                let row = a * n + b;
                for t in 0..n {
                    stack.set(row, t, values[self.model.mul(self.model.mul(a, t), b)]);
                }
            }
        }
        Ok(linalg::rank(&stack)?)
    }

    // -- tensor structure ------------------------------------------------------

    /// Decomposes U_i tensor U_j into catalog copies. The intertwiner columns
    /// are built from the entry projections
    /// T^l_a = (d_l/|G|) sum_g conj(U_l(g)_{a,0}) (U_i tensor U_j)(g):
    /// an orthonormal basis w_c of range(T^l_0) seeds the copies, and the
    /// columns T^l_a w_c carry exactly the catalog matrices U_l.
    pub fn tensor_decompose(&self, i: usize, j: usize) -> Result<TensorDecomposition, AlgebraError> {
        self.check_irrep(i)?;
        self.check_irrep(j)?;
        let n = self.order();
        let (ri, rj) = (self.cat.irrep(i), self.cat.irrep(j));
        let dim = ri.dim() * rj.dim();
        let tensor: Vec<CMat> = (0..n)
            .map(|g| ri.matrix(g).kron(rj.matrix(g)))
            .collect();

        let chi_i = ri.character();
        let chi_j = rj.character();
        let mut multiplicities = Vec::with_capacity(self.cat.len());
        for (l, rl) in self.cat.irreps().iter().enumerate() {
            let chi_l = rl.character();
            let mut acc = C64::new(0.0, 0.0);
            for g in 0..n {
                acc += chi_i[g] * chi_j[g] * chi_l[g].conj();
            }
            acc /= n as f64;
            let m = acc.re.round();
            if (acc.re - m).abs() > 1e-8 || acc.im.abs() > 1e-8 || m < 0.0 {
                return Err(AlgebraError::NonIntegerMultiplicity {
                    index: l,
                    value: acc.re,
                });
            }
            multiplicities.push(m as usize);
        }
        let total: usize = multiplicities
            .iter()
            .zip(self.cat.dims())
            .map(|(m, d)| m * d)
            .sum();
        if total != dim {
            return Err(AlgebraError::TensorStructure(format!(
                "multiplicities fill {total} of {dim} dimensions"
            )));
        }

        let mut intertwiner = CMat::zeros(dim, dim);
        let mut slots = Vec::new();
        let mut offset = 0usize;
        for (l, rl) in self.cat.irreps().iter().enumerate() {
            let m_l = multiplicities[l];
            if m_l == 0 {
                continue;
            }
            let d_l = rl.dim();
            let entry_proj: Vec<CMat> = (0..d_l)
                .map(|a| {
                    let mut t = CMat::zeros(dim, dim);
                    for g in 0..n {
                        t = t.add(&tensor[g].scale(rl.matrix(g).at(a, 0).conj()));
                    }
                    t.scale(C64::new(d_l as f64 / n as f64, 0.0))
                })
                .collect();
            let seeds = linalg::orthonormal_span(
                &(0..dim).map(|c| entry_proj[0].column(c)).collect::<Vec<_>>(),
                dim,
            );
            if seeds.len() != m_l {
                return Err(AlgebraError::TensorStructure(format!(
                    "irrep {l}: seed space has dimension {}, expected multiplicity {m_l}",
                    seeds.len()
                )));
            }
            for (copy, w) in seeds.iter().enumerate() {
                slots.push(TensorSlot {
                    irrep: l,
                    copy,
                    offset,
                });
                for (a, t) in entry_proj.iter().enumerate() {
                    let mut col = t.apply(w);
                    let nv = linalg::vec_norm(&col);
                    if nv < 0.5 {
                        return Err(AlgebraError::TensorStructure(format!(
                            "irrep {l}, copy {copy}: degenerate column norm {nv}"
                        )));
                    }
                    for z in col.iter_mut() {
                        *z /= nv;
                    }
                    intertwiner.set_column(offset + a, &col);
                }
                offset += d_l;
            }
        }

        let mut max_deviation = intertwiner
            .adjoint()
            .mul(&intertwiner)
            .sub(&CMat::identity(dim))
            .max_abs();
        for g in 0..n {
            let conjugated = intertwiner.adjoint().mul(&tensor[g]).mul(&intertwiner);
            let mut expected = CMat::zeros(dim, dim);
            for slot in &slots {
                let rep = self.cat.irrep(slot.irrep);
                for a in 0..rep.dim() {
                    for b in 0..rep.dim() {
                        expected.set(slot.offset + a, slot.offset + b, rep.matrix(g).at(a, b));
                    }
                }
            }
            max_deviation = max_deviation.max(conjugated.sub(&expected).max_abs());
        }

        Ok(TensorDecomposition {
            multiplicities,
            intertwiner,
            slots,
            max_deviation,
        })
    }

    /// Smallest projection p with coproduct image dominating
    /// support(f) tensor support(g): collect, per irrep, the adapted-basis
    /// components of an orthonormal basis of every block pair, and span them.
    pub fn product_support_min(
        &self,
        f: &BlockFunctional,
        g: &BlockFunctional,
    ) -> Result<BlockProjection, AlgebraError> {
        let sf = self.support(f)?;
        let sg = self.support(g)?;
        let mut collected: Vec<Vec<Vec<C64>>> = self.cat.dims().iter().map(|_| Vec::new()).collect();
        for i in 0..self.cat.len() {
            if sf.block(i).max_abs() <= RANK_TOL {
                continue;
            }
            for j in 0..self.cat.len() {
                if sg.block(j).max_abs() <= RANK_TOL {
                    continue;
                }
                let pair = sf.block(i).kron(sg.block(j));
                let dim = pair.rows();
                let basis = linalg::orthonormal_span(
                    &(0..dim).map(|c| pair.column(c)).collect::<Vec<_>>(),
                    dim,
                );
                let td = self.tensor_decompose(i, j)?;
                let adj = td.intertwiner.adjoint();
                for w in &basis {
                    let y = adj.apply(w);
                    for slot in &td.slots {
                        let d_l = self.cat.irrep(slot.irrep).dim();
                        let comp: Vec<C64> = y[slot.offset..slot.offset + d_l].to_vec();
                        if linalg::vec_norm(&comp) > 1e-12 {
                            collected[slot.irrep].push(comp);
                        }
                    }
                }
            }
        }
        let blocks = self
            .cat
            .irreps()
            .iter()
            .enumerate()
            .map(|(l, rep)| {
                let basis = linalg::orthonormal_span(&collected[l], rep.dim());
                let mut p = CMat::zeros(rep.dim(), rep.dim());
                for v in &basis {
                    p = p.add(&CMat::outer(v, v));
                }
                p
            })
            .collect();
        Ok(BlockProjection { blocks })
    }

    // -- pointwise algebra -----------------------------------------------------

    pub fn pointwise_product(&self, f: &[C64], g: &[C64]) -> Vec<C64> {
        f.iter().zip(g).map(|(a, b)| a * b).collect()
    }

    /// For GNS faithful f1, f2 and g1 << f1, g2 << f2, checks that the
    /// pointwise products satisfy g1 g2 << f1 f2.
    pub fn iterated_abscont_check(
        &self,
        f1: &BlockFunctional,
        f2: &BlockFunctional,
        g1: &BlockFunctional,
        g2: &BlockFunctional,
    ) -> Result<bool, AlgebraError> {
        for (name, f) in [("f1", f1), ("f2", f2)] {
            if !self.predicates(f)?.is_gns_faithful {
                return Err(AlgebraError::Precondition(format!(
                    "{name} is not GNS faithful"
                )));
            }
        }
        for (name, g, f) in [("g1", g1, f1), ("g2", g2, f2)] {
            if self.support_relation(g, f)? != SupportRelation::AbsolutelyContinuous {
                return Err(AlgebraError::Precondition(format!(
                    "{name} is not absolutely continuous with respect to its base"
                )));
            }
        }
        let num = self.to_blocks(&self.pointwise_product(g1.values(), g2.values()))?;
        let den = self.to_blocks(&self.pointwise_product(f1.values(), f2.values()))?;
        Ok(self.support_relation(&num, &den)? == SupportRelation::AbsolutelyContinuous)
    }

    /// The range f(G), deduplicated within 1e-9 and sorted by (re, im).
    pub fn spectrum(&self, values: &[C64]) -> Result<Vec<C64>, AlgebraError> {
        self.check_values(values)?;
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut out: Vec<C64> = Vec::new();
        for z in sorted {
            if out.last().map_or(true, |w| (z - w).norm() > BLOCK_TOL) {
                out.push(z);
            }
        }
        Ok(out)
    }

    pub fn pointwise_calculus(
        &self,
        values: &[C64],
        func: &CalcFn,
    ) -> Result<Vec<C64>, AlgebraError> {
        self.check_values(values)?;
        values.iter().map(|&z| apply_calc(func, z)).collect()
    }

    // -- subgroup extension ------------------------------------------------------

    /// Extension by zero of a function on a subgroup given as element indices.
    pub fn extend_by_zero(
        &self,
        sub: &[usize],
        f_on_sub: &[C64],
    ) -> Result<Vec<C64>, AlgebraError> {
        let distinct: std::collections::BTreeSet<usize> = sub.iter().copied().collect();
        if distinct.len() != sub.len() || !self.model.is_subgroup(sub) {
            return Err(AlgebraError::NotSubgroup(format!("{sub:?}")));
        }
        if f_on_sub.len() != sub.len() {
            return Err(AlgebraError::ValueLength {
                got: f_on_sub.len(),
                expected: sub.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.order()];
        for (&h, &v) in sub.iter().zip(f_on_sub) {
            out[h] = v;
        }
        Ok(out)
    }

    /// Forms (f~ - lambda 1_G)(g~ - (1/lambda) 1_{G\H}) with g = 1/(f-lambda)
    /// on H, and checks it is the constant 1 and that the extended range is
    /// the subgroup range plus {0}.
    pub fn prz_identity_check(
        &self,
        sub: &[usize],
        f_on_sub: &[C64],
        lambda: C64,
    ) -> Result<PrzReport, AlgebraError> {
        let ext = self.extend_by_zero(sub, f_on_sub)?;
        let one = C64::new(1.0, 0.0);
        let reach = |z: C64| {
            f_on_sub.iter().any(|&v| (v - z).norm() <= 1e-12) || z.norm() <= 1e-12
        };
        if reach(lambda) {
            return Err(AlgebraError::LambdaInRange(lambda));
        }
        let in_sub = |g: usize| sub.contains(&g);
        let product: Vec<C64> = (0..self.order())
            .map(|g| {
                let a = ext[g] - lambda;
                let b = if in_sub(g) {
                    one / (ext[g] - lambda)
                } else {
                    -(one / lambda)
                };
                a * b
            })
            .collect();
        let max_deviation = product
            .iter()
            .map(|z| (z - one).norm())
            .fold(0.0, f64::max);
        let exact = product.iter().all(|z| z.re == 1.0 && z.im == 0.0);

        let extended_range = self.spectrum(&ext)?;
        let mut expected: Vec<C64> = f_on_sub.to_vec();
        if sub.len() < self.order() {
            expected.push(C64::new(0.0, 0.0));
        }
        let range_matches = extended_range.iter().all(|z| {
            expected.iter().any(|w| (z - w).norm() <= BLOCK_TOL)
        }) && expected.iter().all(|w| {
            extended_range.iter().any(|z| (z - w).norm() <= BLOCK_TOL)
        });

        Ok(PrzReport {
            product,
            max_deviation,
            exact,
            extended_range,
            range_matches,
        })
    }
}

fn eval_poly(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn apply_calc(func: &CalcFn, z: C64) -> Result<C64, AlgebraError> {
    match func {
        CalcFn::Identity => Ok(z),
        CalcFn::Square => Ok(z * z),
        CalcFn::Polynomial(coeffs) => Ok(eval_poly(coeffs, z)),
        CalcFn::Rational { num, den } => {
            let d = eval_poly(den, z);
            if d.norm() <= 1e-12 {
                return Err(AlgebraError::UndefinedAt(z));
            }
            Ok(eval_poly(num, z) / d)
        }
        CalcFn::LocallyConstant(pieces) => {
            let hits: Vec<&Piece> = pieces
                .iter()
                .filter(|p| (z - p.center).norm() <= p.radius)
                .collect();
            match hits.as_slice() {
                [] => Err(AlgebraError::UndefinedAt(z)),
                [p] => Ok(p.value),
                more => {
                    let v = more[0].value;
                    if more.iter().all(|p| p.value == v) {
                        Ok(v)
                    } else {
                        Err(AlgebraError::AmbiguousAt(z))
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Randomized constructions shared by property tests and verification suites
// ---------------------------------------------------------------------------

pub mod sampling {
    use super::*;
    use rand::Rng;

    pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
        C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    }

    pub fn random_values<R: Rng>(ctx: &GroupAlgebra, rng: &mut R) -> Vec<C64> {
        (0..ctx.order()).map(|_| random_complex(rng)).collect()
    }

    /// Random functional with Hermitian blocks, i.e. f(g^{-1}) = conj f(g).
    pub fn random_hermitian<R: Rng>(ctx: &GroupAlgebra, rng: &mut R) -> BlockFunctional {
        let blocks = ctx
            .catalog()
            .irreps()
            .iter()
            .map(|rep| {
                let d = rep.dim();
                CMat::from_fn(d, d, |_, _| random_complex(rng)).hermitian_part()
            })
            .collect();
        ctx.from_blocks(blocks).expect("shapes are catalog shapes")
    }

    /// Random positive functional; each block gets an independent random
    /// rank between 0 and its dimension, so supports vary.
    pub fn random_positive<R: Rng>(ctx: &GroupAlgebra, rng: &mut R) -> BlockFunctional {
        let blocks = ctx
            .catalog()
            .irreps()
            .iter()
            .map(|rep| {
                let d = rep.dim();
                let r = rng.gen_range(0..=d);
                let b = CMat::from_fn(d, r, |_, _| random_complex(rng));
                b.mul(&b.adjoint())
            })
            .collect();
        ctx.from_blocks(blocks).expect("shapes are catalog shapes")
    }

    /// Random positive functional with every block of full rank.
    pub fn random_faithful<R: Rng>(ctx: &GroupAlgebra, rng: &mut R) -> BlockFunctional {
        let blocks = ctx
            .catalog()
            .irreps()
            .iter()
            .map(|rep| {
                let d = rep.dim();
                let b = CMat::from_fn(d, d, |_, _| random_complex(rng));
                b.mul(&b.adjoint()).add(&CMat::scalar(d, C64::new(0.1, 0.0)))
            })
            .collect();
        ctx.from_blocks(blocks).expect("shapes are catalog shapes")
    }

    /// Random positive functional supported inside the nonzero blocks of
    /// `base` (hence absolutely continuous with respect to it).
    pub fn random_dominated<R: Rng>(
        ctx: &GroupAlgebra,
        base: &BlockFunctional,
        rng: &mut R,
    ) -> Result<BlockFunctional, AlgebraError> {
        let nonzero = ctx.nonzero_blocks(base)?;
        let blocks = ctx
            .catalog()
            .irreps()
            .iter()
            .zip(&nonzero)
            .map(|(rep, &nz)| {
                let d = rep.dim();
                if nz {
                    let r = rng.gen_range(1..=d);
                    let b = CMat::from_fn(d, r, |_, _| random_complex(rng));
                    b.mul(&b.adjoint())
                } else {
                    CMat::zeros(d, d)
                }
            })
            .collect();
        ctx.from_blocks(blocks)
    }

    /// Random algebra element scaled to unit blockwise operator norm.
    pub fn random_contraction<R: Rng>(
        ctx: &GroupAlgebra,
        rng: &mut R,
    ) -> Result<Vec<CMat>, AlgebraError> {
        let blocks: Vec<CMat> = ctx
            .catalog()
            .irreps()
            .iter()
            .map(|rep| CMat::from_fn(rep.dim(), rep.dim(), |_, _| random_complex(rng)))
            .collect();
        let norm = ctx.element_norm(&blocks)?;
        if norm <= 0.0 {
            return Ok(blocks);
        }
        Ok(blocks
            .iter()
            .map(|m| m.scale(C64::new(1.0 / norm, 0.0)))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::sampling::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn s3() -> GroupAlgebra {
        GroupAlgebra::bundled("s3").unwrap()
    }

    fn e_vec(d: usize, k: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[k] = C64::new(1.0, 0.0);
        v
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn round_trip_on_all_bundled_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in group::bundled_names() {
            let ctx = GroupAlgebra::bundled(&name).unwrap();
            for _ in 0..50 {
                let values = random_values(&ctx, &mut rng);
                let f = ctx.to_blocks(&values).unwrap();
                let back = ctx.from_blocks(f.blocks().to_vec()).unwrap();
                for (a, b) in values.iter().zip(back.values()) {
                    assert!((a - b).norm() < BLOCK_TOL, "{name}: round trip drift");
                }
            }
        }
    }

    #[test]
    fn delta_e_blocks_are_scaled_identities() {
        for name in ["z5", "s3", "q8"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            let f = ctx.delta_functional(0).unwrap();
            for (m, rep) in f.blocks().iter().zip(ctx.catalog().irreps()) {
                let d = rep.dim();
                let expected = CMat::scalar(d, c(d as f64 / ctx.order() as f64, 0.0));
                assert!(m.sub(&expected).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn character_blocks_are_kronecker_identities() {
        for name in ["z6", "s3", "d4"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for l in 0..ctx.catalog().len() {
                let f = ctx.character_functional(l).unwrap();
                for (i, m) in f.blocks().iter().enumerate() {
                    let expected = if i == l {
                        CMat::identity(m.rows())
                    } else {
                        CMat::zeros(m.rows(), m.cols())
                    };
                    assert!(m.sub(&expected).max_abs() < 1e-10, "{name}, irrep {l}");
                }
            }
        }
    }

    #[test]
    fn rank_one_coefficients_have_rank_one_blocks() {
        let ctx = s3();
        // block index 2 is the two-dimensional irrep
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let m = phi1.block(2);
        let e11 = CMat::outer(&e_vec(2, 0), &e_vec(2, 0));
        assert!(m.sub(&e11).max_abs() < 1e-10);
        assert!(phi1.block(0).max_abs() < 1e-10);
        assert!(phi1.block(1).max_abs() < 1e-10);
    }

    #[test]
    fn bg_norm_examples() {
        let ctx = s3();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let phi2 = ctx.coefficient_functional(2, &e_vec(2, 1), &e_vec(2, 1)).unwrap();
        assert!((ctx.bg_norm(&phi1).unwrap() - 1.0).abs() < BLOCK_TOL);
        assert!((ctx.bg_norm(&phi2).unwrap() - 1.0).abs() < BLOCK_TOL);
        let one = c(1.0, 0.0);
        let sum = ctx.combine(one, &phi1, one, &phi2);
        let diff = ctx.combine(one, &phi1, -one, &phi2);
        assert!((ctx.bg_norm(&sum).unwrap() - 2.0).abs() < BLOCK_TOL);
        assert!((ctx.bg_norm(&diff).unwrap() - 2.0).abs() < BLOCK_TOL);
        let zero = ctx.to_blocks(&vec![c(0.0, 0.0); 6]).unwrap();
        assert_eq!(ctx.bg_norm(&zero).unwrap(), 0.0);
    }

    #[test]
    fn norm_duality_attained_and_dominating() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in ["z4", "s3", "q8"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for _ in 0..20 {
                let f = ctx.to_blocks(&random_values(&ctx, &mut rng)).unwrap();
                let norm = ctx.bg_norm(&f).unwrap();
                let x = ctx.norming_element(&f).unwrap();
                let attained = ctx.pairing_blocks(&f, &x).norm();
                assert!((attained - norm).abs() < BLOCK_TOL, "{name}: attainment");
                for _ in 0..20 {
                    let y = random_contraction(&ctx, &mut rng).unwrap();
                    assert!(ctx.pairing_blocks(&f, &y).norm() <= norm + BLOCK_TOL);
                }
            }
        }
    }

    #[test]
    fn pairing_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let ctx = s3();
        for _ in 0..50 {
            let fv = random_values(&ctx, &mut rng);
            let xv = random_values(&ctx, &mut rng);
            let f = ctx.to_blocks(&fv).unwrap();
            let x = ctx.element_blocks(&xv).unwrap();
            let direct = ctx.pairing_values(&fv, &xv);
            let through_blocks = ctx.pairing_blocks(&f, &x);
            assert!((direct - through_blocks).norm() < 1e-9);
        }
    }

    #[test]
    fn positivity_examples() {
        let ctx = s3();
        let delta = ctx.delta_functional(0).unwrap();
        assert!(ctx.is_positive(&delta).unwrap());
        let chi_std = ctx.character_functional(2).unwrap();
        assert!(ctx.is_positive(&chi_std).unwrap());
        let mut blocks = delta.blocks().to_vec();
        blocks[0] = CMat::scalar(1, c(-1.0, 0.0));
        let bad = ctx.from_blocks(blocks).unwrap();
        assert!(!ctx.is_positive(&bad).unwrap());
    }

    #[test]
    fn positivity_agrees_with_kernel_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for name in ["z3", "s3", "d4"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for k in 0..200 {
                let f = if k % 2 == 0 {
                    random_positive(&ctx, &mut rng)
                } else {
                    random_hermitian(&ctx, &mut rng)
                };
                let via_blocks = ctx.is_positive(&f).unwrap();
                let via_kernel = ctx.is_positive_kernel(f.values()).unwrap();
                assert_eq!(via_blocks, via_kernel, "{name}: trial {k}");
            }
        }
    }

    #[test]
    fn polar_reconstruction_and_positive_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let ctx = s3();
        for _ in 0..30 {
            let f = ctx.to_blocks(&random_values(&ctx, &mut rng)).unwrap();
            let (v, absf) = ctx.polar(&f).unwrap();
            assert!(v.deviation() < BLOCK_TOL);
            for ((m, vi), p) in f.blocks().iter().zip(v.blocks()).zip(absf.blocks()) {
                assert!(m.sub(&vi.mul(p)).max_abs() < BLOCK_TOL);
            }
            assert!(ctx.is_positive(&absf).unwrap());
            let (n1, n2) = (ctx.bg_norm(&f).unwrap(), ctx.bg_norm(&absf).unwrap());
            assert!((n1 - n2).abs() < BLOCK_TOL);
            // initial space: v* v = support of |f|
            let supp = ctx.support(&absf).unwrap();
            for (vi, p) in v.blocks().iter().zip(supp.blocks()) {
                assert!(vi.adjoint().mul(vi).sub(p).max_abs() < 1e-7);
            }
        }
        let pos = random_positive(&ctx, &mut rng);
        let (v, absf) = ctx.polar(&pos).unwrap();
        for (a, b) in pos.values().iter().zip(absf.values()) {
            assert!((a - b).norm() < BLOCK_TOL);
        }
        let supp = ctx.support(&pos).unwrap();
        for (vi, p) in v.blocks().iter().zip(supp.blocks()) {
            assert!(vi.sub(p).max_abs() < 1e-7);
        }
        // scalar phase: f = i delta_e
        let i_delta = {
            let mut vals = vec![c(0.0, 0.0); 6];
            vals[0] = c(0.0, 1.0);
            ctx.to_blocks(&vals).unwrap()
        };
        let (v, absf) = ctx.polar(&i_delta).unwrap();
        let delta = ctx.delta_functional(0).unwrap();
        for (a, b) in absf.values().iter().zip(delta.values()) {
            assert!((a - b).norm() < BLOCK_TOL);
        }
        for vi in v.blocks() {
            assert!(vi.sub(&CMat::scalar(vi.rows(), c(0.0, 1.0))).max_abs() < BLOCK_TOL);
        }
    }

    #[test]
    fn support_examples() {
        let ctx = s3();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let supp = ctx.support(&phi1).unwrap();
        assert!(supp.projection_deviation() < BLOCK_TOL);
        assert_eq!(supp.block_ranks(), vec![0, 0, 1]);
        let e11 = CMat::outer(&e_vec(2, 0), &e_vec(2, 0));
        assert!(supp.block(2).sub(&e11).max_abs() < 1e-9);

        let delta = ctx.delta_functional(0).unwrap();
        let supp = ctx.support(&delta).unwrap();
        assert_eq!(supp.block_ranks(), vec![1, 1, 2]);

        let zero = ctx.to_blocks(&vec![c(0.0, 0.0); 6]).unwrap();
        assert_eq!(ctx.support(&zero).unwrap().total_rank(), 0);

        let chi_sgn = ctx.character_functional(1).unwrap();
        let minus = ctx.combine(c(-1.0, 0.0), &chi_sgn, c(0.0, 0.0), &chi_sgn);
        assert!(matches!(ctx.support(&minus), Err(AlgebraError::NotPositive)));
    }

    #[test]
    fn support_compression_preserves_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let ctx = s3();
        for _ in 0..20 {
            let f = random_positive(&ctx, &mut rng);
            let supp = ctx.support(&f).unwrap();
            let x: Vec<CMat> = random_contraction(&ctx, &mut rng).unwrap();
            let compressed: Vec<CMat> = x
                .iter()
                .zip(supp.blocks())
                .map(|(xm, p)| p.mul(xm).mul(p))
                .collect();
            let a = ctx.pairing_blocks(&f, &x);
            let b = ctx.pairing_blocks(&f, &compressed);
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn central_supports_of_phi1_phi2_match_and_supports_are_orthogonal() {
        let ctx = s3();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let phi2 = ctx.coefficient_functional(2, &e_vec(2, 1), &e_vec(2, 1)).unwrap();
        let z1 = ctx.central_support(&phi1).unwrap();
        let z2 = ctx.central_support(&phi2).unwrap();
        assert_eq!(z1.distance(&z2), 0.0);
        assert!(z1.is_central(1e-12));
        assert_eq!(z1.block_ranks(), vec![0, 0, 2]);
        let s1 = ctx.support(&phi1).unwrap();
        let s2 = ctx.support(&phi2).unwrap();
        assert!(s1.product_norm(&s2) < 1e-12);
    }

    #[test]
    fn central_support_equals_central_support_of_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let ctx = s3();
        for _ in 0..20 {
            let f = ctx.to_blocks(&random_values(&ctx, &mut rng)).unwrap();
            let (_, absf) = ctx.polar(&f).unwrap();
            let a = ctx.central_support(&f).unwrap();
            let b = ctx.central_support(&absf).unwrap();
            assert!(a.distance(&b) < 1e-12);
        }
    }

    #[test]
    fn support_relation_examples() {
        let ctx = s3();
        let chi_triv = ctx.character_functional(0).unwrap();
        let chi_sgn = ctx.character_functional(1).unwrap();
        let chi_std = ctx.character_functional(2).unwrap();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        assert_eq!(
            ctx.support_relation(&chi_triv, &chi_sgn).unwrap(),
            SupportRelation::Singular
        );
        assert_eq!(
            ctx.support_relation(&chi_std, &phi1).unwrap(),
            SupportRelation::AbsolutelyContinuous
        );
        assert_eq!(
            ctx.support_relation(&phi1, &chi_std).unwrap(),
            SupportRelation::AbsolutelyContinuous
        );
        assert_eq!(
            ctx.support_relation(&phi1, &phi1).unwrap(),
            SupportRelation::AbsolutelyContinuous
        );
        let mixed = ctx.combine(c(1.0, 0.0), &chi_triv, c(1.0, 0.0), &chi_std);
        assert_eq!(
            ctx.support_relation(&mixed, &chi_triv).unwrap(),
            SupportRelation::Neither
        );
    }

    #[test]
    fn singular_pairs_have_additive_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for name in ["s3", "d4"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            let mut checked = 0;
            while checked < 50 {
                let f = random_positive(&ctx, &mut rng);
                let g = random_positive(&ctx, &mut rng);
                if ctx.support_relation(&f, &g).unwrap() != SupportRelation::Singular {
                    continue;
                }
                checked += 1;
                let alpha = random_complex(&mut rng);
                let beta = random_complex(&mut rng);
                let combo = ctx.combine(alpha, &f, beta, &g);
                let lhs = ctx.bg_norm(&combo).unwrap();
                let rhs = alpha.norm() * ctx.bg_norm(&f).unwrap()
                    + beta.norm() * ctx.bg_norm(&g).unwrap();
                assert!((lhs - rhs).abs() < BLOCK_TOL, "{name}: additivity");
            }
        }
    }

    #[test]
    fn lebesgue_examples_and_uniqueness() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let ctx = s3();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let chi_triv = ctx.character_functional(0).unwrap();
        let split = ctx.lebesgue(&phi1, &chi_triv).unwrap();
        assert!(ctx.bg_norm(&split.absolutely_continuous).unwrap() < 1e-12);
        for (a, b) in split.singular.values().iter().zip(phi1.values()) {
            assert!((a - b).norm() < 1e-12);
        }

        let delta = ctx.delta_functional(0).unwrap();
        let chi_std = ctx.character_functional(2).unwrap();
        let split = ctx.lebesgue(&delta, &chi_std).unwrap();
        assert!(split.absolutely_continuous.block(0).max_abs() < 1e-12);
        assert!(split.absolutely_continuous.block(1).max_abs() < 1e-12);
        assert!(split.absolutely_continuous.block(2).sub(delta.block(2)).max_abs() < 1e-12);

        for _ in 0..40 {
            let f = ctx.to_blocks(&random_values(&ctx, &mut rng)).unwrap();
            let g = random_positive(&ctx, &mut rng);
            let split = ctx.lebesgue(&f, &g).unwrap();
            let back = ctx.combine(
                c(1.0, 0.0),
                &split.absolutely_continuous,
                c(1.0, 0.0),
                &split.singular,
            );
            for (a, b) in back.values().iter().zip(f.values()) {
                assert!((a - b).norm() < BLOCK_TOL);
            }
            assert_ne!(
                ctx.support_relation(&split.singular, &g).unwrap(),
                SupportRelation::Neither
            );
            let n = ctx.bg_norm(&f).unwrap();
            let n1 = ctx.bg_norm(&split.absolutely_continuous).unwrap();
            let n2 = ctx.bg_norm(&split.singular).unwrap();
            assert!((n - n1 - n2).abs() < BLOCK_TOL);

            // any h with both constraints satisfied must vanish, so a
            // perturbed pair breaks one of them
            let h = random_positive(&ctx, &mut rng);
            if ctx.bg_norm(&h).unwrap() < 1e-6 {
                continue;
            }
            let f1p = ctx.combine(c(1.0, 0.0), &split.absolutely_continuous, c(1.0, 0.0), &h);
            let f2p = ctx.combine(c(1.0, 0.0), &split.singular, c(-1.0, 0.0), &h);
            let still_ac = ctx.support_relation(&f1p, &g).unwrap()
                == SupportRelation::AbsolutelyContinuous;
            let still_sing =
                ctx.support_relation(&f2p, &g).unwrap() == SupportRelation::Singular;
            assert!(!(still_ac && still_sing), "nonzero perturbation slipped through");
        }
    }

    #[test]
    fn predicates_examples() {
        let ctx = s3();
        let delta = ctx.delta_functional(0).unwrap();
        let p = ctx.predicates(&delta).unwrap();
        assert!(p.is_tracial && p.is_gns_faithful);

        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let p = ctx.predicates(&phi1).unwrap();
        assert!(!p.is_tracial && !p.is_gns_faithful);

        let chi_std = ctx.character_functional(2).unwrap();
        let p = ctx.predicates(&chi_std).unwrap();
        assert!(p.is_tracial && p.is_gns_faithful);
    }

    #[test]
    fn tracial_positive_implies_faithful() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let ctx = GroupAlgebra::bundled("q8").unwrap();
        for _ in 0..50 {
            // random tracial positive: nonnegative weight per block
            let blocks = ctx
                .catalog()
                .irreps()
                .iter()
                .map(|rep| {
                    let w: f64 = rng.gen::<f64>();
                    let w = if w < 0.2 { 0.0 } else { w };
                    CMat::scalar(rep.dim(), c(w, 0.0))
                })
                .collect();
            let f = ctx.from_blocks(blocks).unwrap();
            let p = ctx.predicates(&f).unwrap();
            assert!(p.is_tracial);
            assert!(p.is_gns_faithful);
        }
    }

    #[test]
    fn gns_faithful_approx_examples() {
        let ctx = s3();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let psi = ctx.gns_faithful_approx(&phi1, 0.1).unwrap();
        assert!(ctx.predicates(&psi).unwrap().is_gns_faithful);
        let zf = ctx.central_support(&phi1).unwrap();
        let zp = ctx.central_support(&psi).unwrap();
        assert!(zf.distance(&zp) < 1e-12);
        let diff = ctx.combine(c(1.0, 0.0), &psi, c(-1.0, 0.0), &phi1);
        assert!(ctx.bg_norm(&diff).unwrap() <= 0.1 + 1e-12);

        let delta = ctx.delta_functional(0).unwrap();
        let psi = ctx.gns_faithful_approx(&delta, 0.05).unwrap();
        assert!(ctx.predicates(&psi).unwrap().is_gns_faithful);
        assert!(
            ctx.central_support(&delta)
                .unwrap()
                .distance(&ctx.central_support(&psi).unwrap())
                < 1e-12
        );

        assert!(matches!(
            ctx.gns_faithful_approx(&phi1, 0.0),
            Err(AlgebraError::NonPositiveEps)
        ));
        let zero = ctx.to_blocks(&vec![c(0.0, 0.0); 6]).unwrap();
        assert!(matches!(
            ctx.gns_faithful_approx(&zero, 0.1),
            Err(AlgebraError::ZeroFunctional)
        ));
    }

    #[test]
    fn extreme_point_of_the_faithful_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let ctx = s3();
        let state = ctx.delta_functional(0).unwrap();
        let identity: Vec<CMat> = ctx
            .catalog()
            .irreps()
            .iter()
            .map(|rep| CMat::identity(rep.dim()))
            .collect();
        assert!((ctx.pairing_blocks(&state, &identity) - c(1.0, 0.0)).norm() < 1e-12);
        let mut hypothesis_hits = 0;
        for k in 0..300 {
            let x: Vec<CMat> = if k % 3 == 0 {
                identity.clone()
            } else if k % 3 == 1 {
                // tiny perturbations of the identity, renormalized
                let raw: Vec<CMat> = ctx
                    .catalog()
                    .irreps()
                    .iter()
                    .map(|rep| {
                        let d = rep.dim();
                        let noise = CMat::from_fn(d, d, |_, _| {
                            random_complex(&mut rng) * c(1e-13, 0.0)
                        });
                        CMat::identity(d).add(&noise)
                    })
                    .collect();
                let norm = ctx.element_norm(&raw).unwrap();
                raw.iter().map(|m| m.scale(c(1.0 / norm, 0.0))).collect()
            } else {
                random_contraction(&ctx, &mut rng).unwrap()
            };
            let val = ctx.pairing_blocks(&state, &x);
            if val.re >= 1.0 - 1e-12 {
                hypothesis_hits += 1;
                for (m, id) in x.iter().zip(&identity) {
                    assert!(m.sub(id).max_abs() <= 1e-6);
                }
            }
        }
        assert!(hypothesis_hits >= 100, "sampler never hit the hypothesis");
    }

    #[test]
    fn translate_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let ctx = s3();
        let f = random_values(&ctx, &mut rng);
        assert_eq!(ctx.translate(&f, 0, 0).unwrap(), f);
        let delta = ctx.delta(0).unwrap();
        for a in 0..6 {
            let t = ctx.translate(&delta, a, 0).unwrap();
            let inv_a = ctx.model().inv(a);
            for (g, v) in t.iter().enumerate() {
                let expected = if g == inv_a { 1.0 } else { 0.0 };
                assert!((v - c(expected, 0.0)).norm() < 1e-15);
            }
        }
        // composition against the table
        for a in 0..6 {
            for cc in 0..6 {
                let lhs = ctx
                    .translate(&ctx.translate(&f, a, 0).unwrap(), cc, 0)
                    .unwrap();
                let rhs = ctx.translate(&f, ctx.model().mul(a, cc), 0).unwrap();
                for (x, y) in lhs.iter().zip(&rhs) {
                    assert!((x - y).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn translate_acts_on_blocks_by_left_right_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let ctx = s3();
        for _ in 0..10 {
            let values = random_values(&ctx, &mut rng);
            let f = ctx.to_blocks(&values).unwrap();
            for a in 0..6 {
                for b in 0..6 {
                    let t = ctx.to_blocks(&ctx.translate(&values, a, b).unwrap()).unwrap();
                    for (l, rep) in ctx.catalog().irreps().iter().enumerate() {
                        let expected = rep.matrix(b).mul(f.block(l)).mul(rep.matrix(a));
                        assert!(t.block(l).sub(&expected).max_abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn translate_span_dims() {
        let ctx = s3();
        let phi1 = ctx.coefficient_values(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        assert_eq!(ctx.translate_span_dim(&phi1).unwrap(), 4);
        assert_eq!(ctx.translate_span_dim(&ctx.delta(0).unwrap()).unwrap(), 6);
        assert_eq!(
            ctx.translate_span_dim(&ctx.character_values(0).unwrap()).unwrap(),
            1
        );
    }

    #[test]
    fn translate_span_matches_block_count_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for name in ["z6", "s3", "d4", "q8"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for _ in 0..30 {
                let f = random_positive(&ctx, &mut rng);
                let nonzero = ctx.nonzero_blocks(&f).unwrap();
                let expected: usize = ctx
                    .catalog()
                    .dims()
                    .iter()
                    .zip(&nonzero)
                    .filter(|(_, &nz)| nz)
                    .map(|(d, _)| d * d)
                    .sum();
                assert_eq!(
                    ctx.translate_span_dim(f.values()).unwrap(),
                    expected,
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn tensor_square_of_std_rep() {
        let ctx = s3();
        let td = ctx.tensor_decompose(2, 2).unwrap();
        assert_eq!(td.multiplicities, vec![1, 1, 1]);
        assert!(td.max_deviation < 1e-10, "deviation {}", td.max_deviation);
    }

    #[test]
    fn tensor_with_trivial_is_identity_slot() {
        for name in ["s3", "d4", "q8"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for l in 0..ctx.catalog().len() {
                let td = ctx.tensor_decompose(0, l).unwrap();
                let mut expected = vec![0usize; ctx.catalog().len()];
                expected[l] = 1;
                assert_eq!(td.multiplicities, expected, "{name}, irrep {l}");
                assert!(td.max_deviation < 1e-10);
            }
        }
    }

    #[test]
    fn tensor_of_cyclic_characters_adds_exponents() {
        let ctx = GroupAlgebra::bundled("z3").unwrap();
        let td = ctx.tensor_decompose(1, 1).unwrap();
        assert_eq!(td.multiplicities, vec![0, 0, 1]);
        assert!(td.max_deviation < 1e-12);
    }

    #[test]
    fn tensor_decompose_all_pairs_all_groups() {
        for name in ["z5", "s3", "d4", "q8"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for i in 0..ctx.catalog().len() {
                for j in 0..ctx.catalog().len() {
                    let td = ctx.tensor_decompose(i, j).unwrap();
                    assert!(
                        td.max_deviation < 1e-9,
                        "{name} ({i},{j}): deviation {}",
                        td.max_deviation
                    );
                }
            }
        }
    }

    #[test]
    fn product_support_on_z2_characters() {
        let ctx = GroupAlgebra::bundled("z2").unwrap();
        let f = ctx.to_blocks(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let g = ctx.to_blocks(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let p = ctx.product_support_min(&f, &g).unwrap();
        // the product is the sign character, so only the sign block survives
        assert_eq!(p.block_ranks(), vec![0, 1]);
        let product = ctx
            .to_blocks(&ctx.pointwise_product(f.values(), g.values()))
            .unwrap();
        let direct = ctx.support(&product).unwrap();
        assert!(p.distance(&direct) < 1e-9);
    }

    #[test]
    fn product_support_of_faithful_state_is_full() {
        let ctx = s3();
        let delta = ctx.delta_functional(0).unwrap();
        let p = ctx.product_support_min(&delta, &delta).unwrap();
        assert_eq!(p.block_ranks(), vec![1, 1, 2]);
    }

    #[test]
    fn product_support_matches_pointwise_square_of_phi1() {
        let ctx = s3();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let p = ctx.product_support_min(&phi1, &phi1).unwrap();
        let square = ctx
            .to_blocks(&ctx.pointwise_product(phi1.values(), phi1.values()))
            .unwrap();
        let direct = ctx.support(&square).unwrap();
        assert!(p.distance(&direct) < 1e-9);
    }

    #[test]
    fn product_support_matches_pointwise_support_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for name in ["z4", "s3", "d4"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for trial in 0..25 {
                let f = random_positive(&ctx, &mut rng);
                let g = random_positive(&ctx, &mut rng);
                let p = ctx.product_support_min(&f, &g).unwrap();
                let product = ctx
                    .to_blocks(&ctx.pointwise_product(f.values(), g.values()))
                    .unwrap();
                let direct = ctx.support(&product).unwrap();
                assert!(
                    p.distance(&direct) < 1e-8,
                    "{name} trial {trial}: distance {}",
                    p.distance(&direct)
                );
            }
        }
    }

    #[test]
    fn pointwise_product_examples() {
        let ctx = GroupAlgebra::bundled("z3").unwrap();
        let chi1 = ctx.character_values(1).unwrap();
        let ones = vec![c(1.0, 0.0); 3];
        assert_eq!(ctx.pointwise_product(&chi1, &ones), chi1);
        let sq = ctx.pointwise_product(&chi1, &chi1);
        let chi2 = ctx.character_values(2).unwrap();
        for (a, b) in sq.iter().zip(&chi2) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pointwise_product_of_coefficients_is_tensor_coefficient() {
        let ctx = s3();
        let phi1 = ctx.coefficient_values(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let phi2 = ctx.coefficient_values(2, &e_vec(2, 1), &e_vec(2, 1)).unwrap();
        let prod = ctx.pointwise_product(&phi1, &phi2);
        let rep = ctx.catalog().irrep(2);
        let mut e12 = vec![c(0.0, 0.0); 4];
        e12[0 * 2 + 1] = c(1.0, 0.0); // e1 tensor e2 in row-major pair order
        for g in 0..6 {
            let w = rep.matrix(g).kron(rep.matrix(g));
            let via_tensor = linalg::inner(&e12, &w.apply(&e12));
            assert!((prod[g] - via_tensor).norm() < 1e-12);
        }
    }

    #[test]
    fn schur_products_of_positives_stay_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for name in ["s3", "q8"] {
            let ctx = GroupAlgebra::bundled(name).unwrap();
            for _ in 0..30 {
                let f = random_positive(&ctx, &mut rng);
                let g = random_positive(&ctx, &mut rng);
                let prod = ctx
                    .to_blocks(&ctx.pointwise_product(f.values(), g.values()))
                    .unwrap();
                assert!(ctx.is_positive(&prod).unwrap(), "{name}");
                assert!(ctx.is_positive_kernel(prod.values()).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn iterated_abscont_holds_for_faithful_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let ctx = s3();
        for _ in 0..30 {
            let f1 = random_faithful(&ctx, &mut rng);
            let f2 = random_faithful(&ctx, &mut rng);
            let g1 = random_dominated(&ctx, &f1, &mut rng).unwrap();
            let g2 = random_dominated(&ctx, &f2, &mut rng).unwrap();
            assert!(ctx.iterated_abscont_check(&f1, &f2, &g1, &g2).unwrap());
        }
        // reflexive case
        let f = random_faithful(&ctx, &mut rng);
        assert!(ctx.iterated_abscont_check(&f, &f, &f, &f).unwrap());
    }

    #[test]
    fn iterated_abscont_rejects_unfaithful_base() {
        let ctx = s3();
        let phi1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        let chi_std = ctx.character_functional(2).unwrap();
        let err = ctx.iterated_abscont_check(&phi1, &phi1, &chi_std, &chi_std);
        assert!(matches!(err, Err(AlgebraError::Precondition(_))));
    }

    #[test]
    fn trace_function_square_escapes_h1_square_supportwise() {
        let ctx = s3();
        // the known failure without faithfulness: f << h1 but f^2 not << h1^2
        let f = ctx.character_functional(2).unwrap();
        let h1 = ctx.coefficient_functional(2, &e_vec(2, 0), &e_vec(2, 0)).unwrap();
        assert_eq!(
            ctx.support_relation(&f, &h1).unwrap(),
            SupportRelation::AbsolutelyContinuous
        );
        let f2 = ctx
            .to_blocks(&ctx.pointwise_product(f.values(), f.values()))
            .unwrap();
        let h2 = ctx
            .to_blocks(&ctx.pointwise_product(h1.values(), h1.values()))
            .unwrap();
        assert_ne!(
            ctx.support_relation(&f2, &h2).unwrap(),
            SupportRelation::AbsolutelyContinuous
        );
    }

    #[test]
    fn spectrum_examples() {
        let ctx3 = GroupAlgebra::bundled("z3").unwrap();
        let spec = ctx3.spectrum(&ctx3.character_values(1).unwrap()).unwrap();
        assert_eq!(spec.len(), 3);
        let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
        for target in [c(1.0, 0.0), omega, omega.conj()] {
            assert!(spec.iter().any(|z| (z - target).norm() < 1e-12));
        }

        let ctx = s3();
        let spec = ctx.spectrum(&ctx.delta(0).unwrap()).unwrap();
        assert_eq!(spec.len(), 2);
        assert!(spec.iter().any(|z| z.norm() < 1e-12));
        assert!(spec.iter().any(|z| (z - c(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn spectrum_matches_multiplication_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let ctx = s3();
        for _ in 0..20 {
            let f = random_values(&ctx, &mut rng);
            let spec = ctx.spectrum(&f).unwrap();
            let n = ctx.order();
            let op = CMat::from_fn(n, n, |i, j| if i == j { f[i] } else { c(0.0, 0.0) });
            // sigma_min(M - z I) vanishes exactly on eigenvalues of normal M
            for z in &spec {
                let shifted = op.sub(&CMat::scalar(n, *z));
                let sv = linalg::svd(&shifted).unwrap().singular_values;
                let smin = sv.last().copied().unwrap_or(0.0);
                assert!(smin < 1e-10, "claimed spectral value too far: {smin}");
            }
            for v in &f {
                assert!(spec.iter().any(|z| (z - v).norm() <= BLOCK_TOL));
            }
        }
    }

    #[test]
    fn calculus_identity_square_and_indicator() {
        let ctx3 = GroupAlgebra::bundled("z3").unwrap();
        let chi = ctx3.character_values(1).unwrap();
        let same = ctx3.pointwise_calculus(&chi, &CalcFn::Identity).unwrap();
        assert_eq!(same, chi);

        let squared = ctx3.pointwise_calculus(&chi, &CalcFn::Square).unwrap();
        let direct = ctx3.pointwise_product(&chi, &chi);
        for (a, b) in squared.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-15);
        }

        let indicator = CalcFn::LocallyConstant(vec![
            Piece {
                center: c(1.0, 0.0),
                radius: 0.5,
                value: c(1.0, 0.0),
            },
            Piece {
                center: c(-0.5, 0.0),
                radius: 0.95,
                value: c(0.0, 0.0),
            },
        ]);
        let idem = ctx3.pointwise_calculus(&chi, &indicator).unwrap();
        assert_eq!(idem[0], c(1.0, 0.0));
        assert_eq!(idem[1], c(0.0, 0.0));
        assert_eq!(idem[2], c(0.0, 0.0));
        // idempotent exactly
        let sq = ctx3.pointwise_product(&idem, &idem);
        assert_eq!(sq, idem);
    }

    #[test]
    fn calculus_rejects_undefined_points() {
        let ctx3 = GroupAlgebra::bundled("z3").unwrap();
        let chi = ctx3.character_values(1).unwrap();
        let near_one_only = CalcFn::LocallyConstant(vec![Piece {
            center: c(1.0, 0.0),
            radius: 0.1,
            value: c(1.0, 0.0),
        }]);
        assert!(matches!(
            ctx3.pointwise_calculus(&chi, &near_one_only),
            Err(AlgebraError::UndefinedAt(_))
        ));
        let pole = CalcFn::Rational {
            num: vec![c(1.0, 0.0)],
            den: vec![c(-1.0, 0.0), c(1.0, 0.0)], // z - 1 vanishes at 1
        };
        assert!(matches!(
            ctx3.pointwise_calculus(&chi, &pole),
            Err(AlgebraError::UndefinedAt(_))
        ));
    }

    #[test]
    fn extend_by_zero_and_prz_identity() {
        let ctx = s3();
        let sub = [0usize, 1, 2]; // the rotation subgroup
        let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let f_h = [c(1.0, 0.0), omega, omega * omega];
        let report = ctx
            .prz_identity_check(&sub, &f_h, c(2.0, 0.0))
            .unwrap();
        assert!(report.exact, "max deviation {}", report.max_deviation);
        assert_eq!(report.max_deviation, 0.0);
        assert!(report.range_matches);
        assert_eq!(report.extended_range.len(), 4);

        // lambda inside the range is rejected
        assert!(matches!(
            ctx.prz_identity_check(&sub, &f_h, omega),
            Err(AlgebraError::LambdaInRange(_))
        ));
        assert!(matches!(
            ctx.prz_identity_check(&sub, &f_h, c(0.0, 0.0)),
            Err(AlgebraError::LambdaInRange(_))
        ));
        // a non-subgroup index set is rejected
        assert!(matches!(
            ctx.extend_by_zero(&[0, 1], &[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(AlgebraError::NotSubgroup(_))
        ));
        // extension truly vanishes off the subgroup
        let ext = ctx.extend_by_zero(&sub, &f_h).unwrap();
        for g in 3..6 {
            assert_eq!(ext[g], c(0.0, 0.0));
        }
    }

    #[test]
    fn prz_on_whole_group_has_no_extra_zero() {
        let ctx3 = GroupAlgebra::bundled("z3").unwrap();
        let sub = [0usize, 1, 2];
        let f_h: Vec<C64> = ctx3.character_values(1).unwrap();
        let report = ctx3.prz_identity_check(&sub, &f_h, c(2.0, 0.0)).unwrap();
        assert!(report.exact);
        assert_eq!(report.extended_range.len(), 3);
        assert!(report.range_matches);
    }
}
