//! Dense operators with declared normed domain and codomain, inversion with
//! certified residuals, and small matrix utilities shared by the frame
//! calculus.

use nalgebra::{DMatrix, DVector};

use crate::config::Config;
use crate::error::{FrameError, Result};
use crate::norm::{operator_norm_between, NormDesc, NormEstimate};
use crate::space::{BlockSpace, SpaceDesc};

/// Either side of an operator: a plain coordinate space or a block space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpSpace {
    Simple(SpaceDesc),
    Block(BlockSpace),
}

impl OpSpace {
    pub fn dim(&self) -> usize {
        match self {
            OpSpace::Simple(s) => s.dim,
            OpSpace::Block(b) => b.dim(),
        }
    }

    pub fn norm_desc(&self) -> NormDesc {
        match self {
            OpSpace::Simple(s) => NormDesc::plain(s.dim, s.r),
            OpSpace::Block(b) => NormDesc::block(
                b.n,
                b.factor.dim,
                crate::space::Exponent::Finite(b.p),
                b.factor.r,
            ),
        }
    }
}

/// A linear map between declared normed spaces, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub mat: DMatrix<f64>,
    pub domain: OpSpace,
    pub codomain: OpSpace,
}

impl Operator {
    pub fn new(mat: DMatrix<f64>, domain: OpSpace, codomain: OpSpace) -> Result<Self> {
        if mat.ncols() != domain.dim() || mat.nrows() != codomain.dim() {
            return Err(FrameError::shape(format!(
                "operator is {}x{} but spaces demand {}x{}",
                mat.nrows(),
                mat.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(Operator { mat, domain, codomain })
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.mat * x
    }

    /// Certified norm interval with respect to the declared space norms.
    pub fn norm(&self, cfg: &Config) -> NormEstimate {
        operator_norm_between(&self.mat, &self.domain.norm_desc(), &self.codomain.norm_desc(), cfg)
    }

    /// Inverse with swapped spaces; see [`invert_mat`] for the guarantees.
    pub fn invert(&self, cfg: &Config) -> Result<Operator> {
        if self.domain.dim() != self.codomain.dim() {
            return Err(FrameError::shape("only square operators can be inverted"));
        }
        let (inv, _) = invert_mat(&self.mat, cfg)?;
        Ok(Operator { mat: inv, domain: self.codomain, codomain: self.domain })
    }
}

/// Entrywise maximum absolute value; the norm used for identity residuals.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, &x| acc.max(x.abs()))
}

/// Smallest pivot magnitude of the partial-pivoting LU factorization.
/// Zero for empty or non-square input.
pub fn smallest_pivot(m: &DMatrix<f64>) -> f64 {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return 0.0;
    }
    let lu = m.clone().lu();
    let u = lu.u();
    (0..m.nrows()).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min)
}

/// Inverts via partial-pivoting elimination and certifies the result: the
/// smallest pivot must clear `singular_tol` and both residuals
/// ||M M^inv - I||_max and ||M^inv M - I||_max must clear `residual_tol`.
/// Returns the inverse and the smallest pivot magnitude.
pub fn invert_mat(m: &DMatrix<f64>, cfg: &Config) -> Result<(DMatrix<f64>, f64)> {
    if m.nrows() != m.ncols() {
        return Err(FrameError::shape("only square matrices can be inverted"));
    }
    let n = m.nrows();
    let lu = m.clone().lu();
    let pivot = {
        let u = lu.u();
        (0..n).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min)
    };
    if !(pivot > cfg.singular_tol) {
        return Err(FrameError::SingularOperator { smallest_pivot: pivot });
    }
    let inv = lu
        .try_inverse()
        .ok_or(FrameError::SingularOperator { smallest_pivot: pivot })?;
    let eye = DMatrix::<f64>::identity(n, n);
    let residual = max_abs(&(m * &inv - &eye)).max(max_abs(&(&inv * m - &eye)));
    if !(residual <= cfg.residual_tol) {
        // the inverse exists numerically but cannot be certified
        return Err(FrameError::SingularOperator { smallest_pivot: pivot });
    }
    Ok((inv, pivot))
}

/// Kronecker product, row-major block convention: entry blocks a_ij * B.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}
