use num_complex::Complex64;

use crate::matcore::{ensure_unitary, is_psd, least_squares_min_norm, rank, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Slack on `‖U†U − I‖_F` accepted by [`ElementaryOperator::conjugate`].
pub const UNITARY_SLACK: f64 = 1e-10;

/// Residual above which a minus operator is treated as outside the span of
/// the plus operators.
pub const SPAN_RESIDUAL: f64 = 1e-8;

/// One product `left · X · right`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    /// `dim_out × dim_in`.
    pub left: ComplexMatrix,
    /// `dim_in × dim_out`.
    pub right: ComplexMatrix,
}

/// `Φ(X) = Σ Cᵢ X Cᵢ† − Σ Dⱼ X Dⱼ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausDifferenceForm {
    pub plus: Vec<ComplexMatrix>,
    pub minus: Vec<ComplexMatrix>,
}

impl KrausDifferenceForm {
    pub fn terms(&self) -> Vec<Term> {
        let plus = self.plus.iter().map(|c| Term { left: c.clone(), right: c.adjoint() });
        let minus = self.minus.iter().map(|d| Term { left: -d, right: d.adjoint() });
        plus.chain(minus).collect()
    }

    fn shape(&self) -> Option<(usize, usize)> {
        self.plus.iter().chain(&self.minus).next().map(|m| m.shape())
    }
}

/// Finite-rank elementary operator `X ↦ Σ AᵢXBᵢ` from `B(C^dim_in)` into
/// `B(C^dim_out)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryOperator {
    dim_in: usize,
    dim_out: usize,
    terms: Vec<Term>,
    kraus: Option<KrausDifferenceForm>,
}

/// Choi matrix `Σᵢⱼ |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` of size `dim_in·dim_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub mat: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpCheck {
    pub completely_positive: bool,
    pub choi_min_eigenvalue: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcpVerdict {
    /// Some minus operator is not a contractive combination of the plus
    /// operators, so the map is not completely positive.
    ProvedNcp,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NcpCheck {
    pub verdict: NcpVerdict,
    /// Largest, over the minus operators, of the minimum coefficient norm
    /// needed to express it over the plus operators. Infinite when some minus
    /// operator lies outside their span; zero when there are none.
    pub min_norm: f64,
    /// Minimum-norm coefficient vector for each minus operator.
    pub coefficients: Vec<Vec<Complex64>>,
}

impl ElementaryOperator {
    pub fn new(dim_in: usize, dim_out: usize, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::BadParams("an elementary operator needs at least one term".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.left.shape() != (dim_out, dim_in) || t.right.shape() != (dim_in, dim_out) {
                return Err(Error::DimensionMismatch(format!(
                    "term {i}: left {:?} and right {:?} do not match {dim_in} -> {dim_out}",
                    t.left.shape(),
                    t.right.shape()
                )));
            }
        }
        Ok(Self { dim_in, dim_out, terms, kraus: None })
    }

    pub fn from_kraus_difference(form: KrausDifferenceForm) -> Result<Self> {
        let (dim_out, dim_in) =
            form.shape().ok_or_else(|| Error::BadParams("empty Kraus-difference form".into()))?;
        let mut op = Self::new(dim_in, dim_out, form.terms())?;
        op.kraus = Some(form);
        Ok(op)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus_difference(KrausDifferenceForm { plus: vec![ComplexMatrix::identity(d)], minus: vec![] })
            .expect("identity is well formed")
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn kraus_form(&self) -> Option<&KrausDifferenceForm> {
        self.kraus.as_ref()
    }

    pub fn evaluate(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "map expects a {0}x{0} input, got {1}x{2}",
                self.dim_in,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for t in &self.terms {
            let lx = t.left.try_mul(x)?;
            out += &lx.try_mul(&t.right)?;
        }
        Ok(out)
    }

    pub fn choi(&self) -> ChoiMatrix {
        let (din, dout) = (self.dim_in, self.dim_out);
        let mut mat = ComplexMatrix::zeros(din * dout, din * dout);
        for i in 0..din {
            for j in 0..din {
                let image = self.evaluate(&ComplexMatrix::unit(din, din, i, j)).expect("unit has input shape");
                mat.set_block(i * dout, j * dout, &image);
            }
        }
        ChoiMatrix { mat }
    }

    pub fn is_completely_positive(&self, tol: &Tolerance) -> Result<CpCheck> {
        let choi = self.choi().mat;
        let defect = choi.hermitian_defect();
        if defect > tol.equality_slack {
            return Err(Error::NotHermiticityPreserving { defect });
        }
        let check = is_psd(&choi, tol)?;
        Ok(CpCheck { completely_positive: check.psd, choi_min_eigenvalue: check.min_eigenvalue })
    }

    /// `X ↦ V† Φ(U† X U) V`.
    pub fn conjugate(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        if u.shape() != (self.dim_in, self.dim_in) || v.shape() != (self.dim_out, self.dim_out) {
            return Err(Error::DimensionMismatch(format!(
                "conjugation needs U {0}x{0} and V {1}x{1}",
                self.dim_in, self.dim_out
            )));
        }
        ensure_unitary(u, UNITARY_SLACK)?;
        ensure_unitary(v, UNITARY_SLACK)?;
        let (ud, vd) = (u.adjoint(), v.adjoint());
        let terms = self
            .terms
            .iter()
            .map(|t| Term { left: &(&vd * &t.left) * &ud, right: &(u * &t.right) * v })
            .collect();
        let kraus = self.kraus.as_ref().map(|k| KrausDifferenceForm {
            plus: k.plus.iter().map(|c| &(&vd * c) * &ud).collect(),
            minus: k.minus.iter().map(|d| &(&vd * d) * &ud).collect(),
        });
        Ok(Self { dim_in: self.dim_in, dim_out: self.dim_out, terms, kraus })
    }

    /// Ranks of the smallest input and output subspaces containing every
    /// term's supports. An upper bound on the order; exact for the built-in
    /// families.
    pub fn order_upper_bound(&self) -> (usize, usize) {
        let input: Vec<ComplexMatrix> =
            self.terms.iter().flat_map(|t| [t.right.clone(), t.left.adjoint()]).collect();
        let output: Vec<ComplexMatrix> =
            self.terms.iter().flat_map(|t| [t.left.clone(), t.right.adjoint()]).collect();
        (column_span_rank(&input, self.dim_in), column_span_rank(&output, self.dim_out))
    }

    /// `Φ(X†) = Φ(X)†` on all matrix units.
    pub fn is_hermiticity_preserving(&self, tol: &Tolerance) -> bool {
        self.choi().mat.hermitian_defect() <= tol.equality_slack
    }

    /// Smallest eigenvalue of `Φ(|x⟩⟨x|)`.
    pub fn probe_min_eigenvalue(&self, x: &[Complex64]) -> Result<f64> {
        if x.len() != self.dim_in {
            return Err(Error::DimensionMismatch(format!("probe of length {} for input dim {}", x.len(), self.dim_in)));
        }
        // left·|x⟩⟨x|·right = |left x⟩⟨right† x|.
        let mut image = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for t in &self.terms {
            let a = t.left.mat_vec(x);
            let b = t.right.adjoint().mat_vec(x);
            image += &ComplexMatrix::outer(&a, &b);
        }
        Ok(crate::matcore::eigenvalues_hermitian(&image)?.first().copied().unwrap_or(0.0))
    }
}

fn column_span_rank(blocks: &[ComplexMatrix], dim: usize) -> usize {
    let width: usize = blocks.iter().map(|b| b.cols()).sum();
    if width == 0 || dim == 0 {
        return 0;
    }
    let mut stacked = ComplexMatrix::zeros(dim, width);
    let mut col = 0;
    for b in blocks {
        stacked.set_block(0, col, b);
        col += b.cols();
    }
    rank(&stacked, 1e-10)
}

/// Sufficient test for non-complete-positivity: is some `Dⱼ` not a
/// contractive linear combination of the `Cᵢ`?
pub fn ncp_quick_check(form: &KrausDifferenceForm) -> Result<NcpCheck> {
    if form.minus.is_empty() {
        return Ok(NcpCheck { verdict: NcpVerdict::Inconclusive, min_norm: 0.0, coefficients: vec![] });
    }
    let (rows, cols) = form.shape().expect("nonempty form");
    let len = rows * cols;
    let mut basis = ComplexMatrix::zeros(len, form.plus.len());
    for (k, c) in form.plus.iter().enumerate() {
        if c.shape() != (rows, cols) {
            return Err(Error::DimensionMismatch("Kraus operators must share a shape".into()));
        }
        for (r, z) in c.data().iter().enumerate() {
            basis[(r, k)] = *z;
        }
    }
    let mut worst: f64 = 0.0;
    let mut coefficients = Vec::with_capacity(form.minus.len());
    for d in &form.minus {
        if d.shape() != (rows, cols) {
            return Err(Error::DimensionMismatch("Kraus operators must share a shape".into()));
        }
        let (x, residual) = least_squares_min_norm(&basis, d.data())?;
        let norm = if residual > SPAN_RESIDUAL {
            f64::INFINITY
        } else {
            x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        };
        worst = worst.max(norm);
        coefficients.push(x);
    }
    let verdict = if worst > 1.0 + 1e-9 { NcpVerdict::ProvedNcp } else { NcpVerdict::Inconclusive };
    Ok(NcpCheck { verdict, min_norm: worst, coefficients })
}
