//! Coordinate spaces, sequence-space exponents, and the block space that
//! analysis maps into.
//!
//! A `SpaceDesc` is R^dim carrying an ell^r norm with r in [1, inf].  The
//! block space for a frame with N elements is the p-direct-sum of N copies
//! of the codomain Y: a block vector z = (z_1, ..., z_N) with
//! ||z|| = (sum_n ||z_n||_Y^p)^(1/p).  The coordinate embeddings L_n and
//! projections Gamma_n of the sequence-space calculus become `embed` and
//! `block` here; the identities Gamma_n L_m = delta_nm I and
//! sum_n L_n Gamma_n = I hold exactly in these coordinates.

use nalgebra::{DVector, DVectorView};

use crate::error::{FrameError, Result};

/// Norm exponent r in [1, inf].  `Inf` is admitted for coordinate-space
/// norms; sequence exponents p are kept finite by the frame types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Inf,
}

impl Exponent {
    /// Validates r >= 1 (finite case).
    pub fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(r) if !(r >= 1.0) || !r.is_finite() => {
                Err(FrameError::InvalidParameter {
                    context: format!("norm exponent must satisfy 1 <= r < inf, got {r}"),
                })
            }
            other => Ok(other),
        }
    }

    /// Conjugate exponent r* with 1/r + 1/r* = 1.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Inf => Exponent::Finite(1.0),
            Exponent::Finite(r) if r == 1.0 => Exponent::Inf,
            Exponent::Finite(r) => Exponent::Finite(r / (r - 1.0)),
        }
    }

    /// 1/r, with 1/inf = 0.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Inf => 0.0,
            Exponent::Finite(r) => 1.0 / r,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Exponent::Inf)
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Inf => write!(f, "inf"),
            Exponent::Finite(r) => write!(f, "{r}"),
        }
    }
}

/// ell^r vector norm on R^dim.
pub fn p_norm(v: &DVector<f64>, r: Exponent) -> f64 {
    p_norm_slice(v.as_slice(), r)
}

pub(crate) fn p_norm_slice(v: &[f64], r: Exponent) -> f64 {
    match r {
        Exponent::Inf => v.iter().fold(0.0, |m, &x| m.max(x.abs())),
        Exponent::Finite(r) if r == 1.0 => v.iter().map(|x| x.abs()).sum(),
        Exponent::Finite(r) if r == 2.0 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        Exponent::Finite(r) => v.iter().map(|x| x.abs().powf(r)).sum::<f64>().powf(1.0 / r),
    }
}

/// A finite-dimensional coordinate space R^dim with the ell^r norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceDesc {
    pub dim: usize,
    pub r: Exponent,
}

impl SpaceDesc {
    pub fn new(dim: usize, r: Exponent) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::InvalidParameter {
                context: "space dimension must be positive".into(),
            });
        }
        Ok(SpaceDesc { dim, r: r.validate()? })
    }

    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        p_norm(v, self.r)
    }
}

/// The p-direct-sum of `n` copies of the factor space: the target of the
/// analysis map of a frame with `n` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSpace {
    pub n: usize,
    pub p: f64,
    pub factor: SpaceDesc,
}

impl BlockSpace {
    pub fn new(n: usize, p: f64, factor: SpaceDesc) -> Result<Self> {
        if n == 0 {
            return Err(FrameError::InvalidParameter {
                context: "block count must be positive".into(),
            });
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(FrameError::InvalidParameter {
                context: format!("sequence exponent must satisfy 1 <= p < inf, got {p}"),
            });
        }
        Ok(BlockSpace { n, p, factor })
    }

    /// Total coordinate dimension n * dim(factor).
    pub fn dim(&self) -> usize {
        self.n * self.factor.dim
    }

    /// Coordinate embedding of the n-th summand: y |-> (0, ..., y, ..., 0).
    /// Isometric for every p because zero blocks contribute nothing.
    pub fn embed(&self, index: usize, y: &DVector<f64>) -> Result<BlockVector> {
        self.check_index(index)?;
        if y.len() != self.factor.dim {
            return Err(FrameError::shape(format!(
                "embed expects a factor vector of length {}, got {}",
                self.factor.dim,
                y.len()
            )));
        }
        let mut data = DVector::zeros(self.dim());
        data.rows_mut(index * self.factor.dim, self.factor.dim).copy_from(y);
        Ok(BlockVector { space: *self, data })
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n {
            return Err(FrameError::InvalidParameter {
                context: format!("block index {index} out of range 0..{}", self.n),
            });
        }
        Ok(())
    }

    /// Block norm (sum_n ||z_n||_factor^p)^(1/p) evaluated on flat data.
    pub fn norm_flat(&self, data: &[f64]) -> f64 {
        debug_assert_eq!(data.len(), self.dim());
        let e = self.factor.dim;
        let block_norms: Vec<f64> =
            (0..self.n).map(|i| p_norm_slice(&data[i * e..(i + 1) * e], self.factor.r)).collect();
        p_norm_slice(&block_norms, Exponent::Finite(self.p))
    }
}

/// Element of a block space, stored flat with block n occupying coordinates
/// [n*e, (n+1)*e).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    pub space: BlockSpace,
    pub data: DVector<f64>,
}

impl BlockVector {
    pub fn new(space: BlockSpace, data: DVector<f64>) -> Result<Self> {
        if data.len() != space.dim() {
            return Err(FrameError::shape(format!(
                "block vector needs {} coordinates, got {}",
                space.dim(),
                data.len()
            )));
        }
        Ok(BlockVector { space, data })
    }

    pub fn zeros(space: BlockSpace) -> Self {
        BlockVector { data: DVector::zeros(space.dim()), space }
    }

    /// Coordinate projection Gamma_n: extracts the n-th block.
    pub fn block(&self, index: usize) -> Result<DVectorView<'_, f64>> {
        self.space.check_index(index)?;
        let e = self.space.factor.dim;
        Ok(self.data.rows(index * e, e))
    }

    pub fn norm(&self) -> f64 {
        self.space.norm_flat(self.data.as_slice())
    }
}
