//! Frame pairs and their calculus: analysis and synthesis into the block
//! space, the frame operator and its factorization, classification,
//! canonical duals, matrix-pair construction, restriction to subspaces,
//! Parseval completion, and iterative reconstruction.
//!
//! A pair ({A_n}, {Psi_n}) with A_n : X -> Y and Psi_n : Y -> X is kept
//! together with its sequence exponent p and the two space descriptors.
//! The frame operator S = sum_n Psi_n A_n is always computed by direct
//! summation; the analysis and synthesis matrices provide an independent
//! factorization route S = theta_Psi theta_A that checks against it.

use nalgebra::{DMatrix, DVector};

use crate::config::Config;
use crate::error::{FrameError, Result};
use crate::norm::NormEstimate;
use crate::op::{invert_mat, max_abs, smallest_pivot, OpSpace, Operator};
use crate::space::{BlockSpace, BlockVector, SpaceDesc};

/// Operator-valued frame pair on X with codomain Y and sequence exponent p.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePair {
    a: Vec<DMatrix<f64>>,
    psi: Vec<DMatrix<f64>>,
    p: f64,
    x: SpaceDesc,
    y: SpaceDesc,
}

impl FramePair {
    /// Validates shapes: every A_n is dim(Y) x dim(X), every Psi_n is
    /// dim(X) x dim(Y), the counts agree and are positive, and p is a
    /// finite sequence exponent >= 1.
    pub fn new(
        a: Vec<DMatrix<f64>>,
        psi: Vec<DMatrix<f64>>,
        p: f64,
        x: SpaceDesc,
        y: SpaceDesc,
    ) -> Result<Self> {
        if a.is_empty() || a.len() != psi.len() {
            return Err(FrameError::shape(format!(
                "need matching nonempty element lists, got {} and {}",
                a.len(),
                psi.len()
            )));
        }
        // BlockSpace validates p
        BlockSpace::new(a.len(), p, y)?;
        for (n, m) in a.iter().enumerate() {
            if m.nrows() != y.dim || m.ncols() != x.dim {
                return Err(FrameError::shape(format!(
                    "analysis element {n} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    y.dim,
                    x.dim
                )));
            }
        }
        for (n, m) in psi.iter().enumerate() {
            if m.nrows() != x.dim || m.ncols() != y.dim {
                return Err(FrameError::shape(format!(
                    "synthesis element {n} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    x.dim,
                    y.dim
                )));
            }
        }
        Ok(FramePair { a, psi, p, x, y })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn a(&self) -> &[DMatrix<f64>] {
        &self.a
    }

    pub fn psi(&self) -> &[DMatrix<f64>] {
        &self.psi
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn x(&self) -> SpaceDesc {
        self.x
    }

    pub fn y(&self) -> SpaceDesc {
        self.y
    }

    pub fn block_space(&self) -> BlockSpace {
        BlockSpace { n: self.a.len(), p: self.p, factor: self.y }
    }

    /// Analysis map theta_A x = (A_1 x, ..., A_N x) as a block vector.
    pub fn analysis(&self, x: &DVector<f64>) -> Result<BlockVector> {
        if x.len() != self.x.dim {
            return Err(FrameError::shape(format!(
                "analysis expects a domain vector of length {}, got {}",
                self.x.dim,
                x.len()
            )));
        }
        let bs = self.block_space();
        let mut data = DVector::zeros(bs.dim());
        for (n, a_n) in self.a.iter().enumerate() {
            data.rows_mut(n * self.y.dim, self.y.dim).copy_from(&(a_n * x));
        }
        BlockVector::new(bs, data)
    }

    /// Synthesis map theta_Psi z = sum_n Psi_n z_n.
    pub fn synthesis(&self, z: &BlockVector) -> Result<DVector<f64>> {
        if z.space != self.block_space() {
            return Err(FrameError::shape("block vector does not live in this frame's block space"));
        }
        let mut out = DVector::zeros(self.x.dim);
        for (n, psi_n) in self.psi.iter().enumerate() {
            let block = z.data.rows(n * self.y.dim, self.y.dim);
            out += psi_n * block;
        }
        Ok(out)
    }

    /// Stacked analysis matrix theta_A : X -> block space.
    pub fn analysis_matrix(&self) -> Operator {
        let e = self.y.dim;
        let mut m = DMatrix::zeros(self.len() * e, self.x.dim);
        for (n, a_n) in self.a.iter().enumerate() {
            m.rows_mut(n * e, e).copy_from(a_n);
        }
        Operator {
            mat: m,
            domain: OpSpace::Simple(self.x),
            codomain: OpSpace::Block(self.block_space()),
        }
    }

    /// Concatenated synthesis matrix theta_Psi : block space -> X.
    pub fn synthesis_matrix(&self) -> Operator {
        let e = self.y.dim;
        let mut m = DMatrix::zeros(self.x.dim, self.len() * e);
        for (n, psi_n) in self.psi.iter().enumerate() {
            m.columns_mut(n * e, e).copy_from(psi_n);
        }
        Operator {
            mat: m,
            domain: OpSpace::Block(self.block_space()),
            codomain: OpSpace::Simple(self.x),
        }
    }

    /// Frame operator S = sum_n Psi_n A_n, summed directly so that it can be
    /// checked independently against the factorization through the block
    /// space.
    pub fn frame_operator(&self) -> Operator {
        let mut s = DMatrix::zeros(self.x.dim, self.x.dim);
        for (a_n, psi_n) in self.a.iter().zip(self.psi.iter()) {
            s += psi_n * a_n;
        }
        Operator { mat: s, domain: OpSpace::Simple(self.x), codomain: OpSpace::Simple(self.x) }
    }

    /// Certified optimal frame bounds and the analysis/synthesis norms.
    ///
    /// The optimal upper bound is ||S|| and the optimal lower bound is
    /// 1/||S^{-1}||; when S is singular the lower bound is exactly zero.
    pub fn bounds(&self, cfg: &Config) -> FrameBounds {
        let s = self.frame_operator();
        let upper = s.norm(cfg);
        let lower = match s.invert(cfg) {
            Ok(inv) => inv.norm(cfg).reciprocal(),
            Err(_) => NormEstimate::exact(0.0),
        };
        FrameBounds {
            lower,
            upper,
            analysis: self.analysis_matrix().norm(cfg),
            synthesis: self.synthesis_matrix().norm(cfg),
        }
    }

    /// Classification by direct numerical tests: invertibility of S (frame),
    /// S = I (Parseval), and P = I on the block space (the pair spans the
    /// whole block space, i.e. a Riesz-type basis).
    pub fn classify(&self, cfg: &Config) -> FrameClass {
        let s = self.frame_operator();
        let pivot = smallest_pivot(&s.mat);
        let eye_x = DMatrix::<f64>::identity(self.x.dim, self.x.dim);
        let parseval_residual = max_abs(&(&s.mat - &eye_x));
        let (frame, riesz_residual) = match invert_mat(&s.mat, cfg) {
            Ok((inv, _)) => {
                let p = self.projection_from_inverse(&inv);
                let eye_b = DMatrix::<f64>::identity(p.nrows(), p.ncols());
                (true, max_abs(&(p - eye_b)))
            }
            Err(_) => (false, f64::INFINITY),
        };
        FrameClass {
            bessel: true,
            frame,
            parseval: frame && parseval_residual <= cfg.identity_tol,
            riesz: frame && riesz_residual <= cfg.identity_tol,
            smallest_pivot: pivot,
            parseval_residual,
            riesz_residual,
        }
    }

    fn projection_from_inverse(&self, s_inv: &DMatrix<f64>) -> DMatrix<f64> {
        let theta_a = self.analysis_matrix().mat;
        let theta_psi = self.synthesis_matrix().mat;
        &theta_a * s_inv * &theta_psi
    }

    /// Projection P = theta_A S^{-1} theta_Psi of the block space onto the
    /// image of the analysis map.
    pub fn projection(&self, cfg: &Config) -> Result<Operator> {
        let s = self.frame_operator();
        let (inv, _) = invert_mat(&s.mat, cfg)?;
        let bs = self.block_space();
        Ok(Operator {
            mat: self.projection_from_inverse(&inv),
            domain: OpSpace::Block(bs),
            codomain: OpSpace::Block(bs),
        })
    }

    /// Canonical dual ({A_n S^{-1}}, {S^{-1} Psi_n}).  Its frame operator is
    /// S^{-1} and taking the canonical dual twice returns the original pair.
    pub fn canonical_dual(&self, cfg: &Config) -> Result<FramePair> {
        let s = self.frame_operator();
        let (inv, _) = invert_mat(&s.mat, cfg)?;
        let a = self.a.iter().map(|a_n| a_n * &inv).collect();
        let psi = self.psi.iter().map(|psi_n| &inv * psi_n).collect();
        FramePair::new(a, psi, self.p, self.x, self.y)
    }

    /// Rebuilds the element lists from stacked analysis and concatenated
    /// synthesis matrices: A_n is the n-th block row of `u`, Psi_n the n-th
    /// block column of `v`.
    pub fn from_uv(
        u: &DMatrix<f64>,
        v: &DMatrix<f64>,
        n: usize,
        p: f64,
        x: SpaceDesc,
        y: SpaceDesc,
    ) -> Result<FramePair> {
        if n == 0 || u.nrows() != n * y.dim || u.ncols() != x.dim {
            return Err(FrameError::shape(format!(
                "analysis matrix is {}x{}, expected {}x{}",
                u.nrows(),
                u.ncols(),
                n * y.dim,
                x.dim
            )));
        }
        if v.nrows() != x.dim || v.ncols() != n * y.dim {
            return Err(FrameError::shape(format!(
                "synthesis matrix is {}x{}, expected {}x{}",
                v.nrows(),
                v.ncols(),
                x.dim,
                n * y.dim
            )));
        }
        let e = y.dim;
        let a = (0..n).map(|i| u.rows(i * e, e).into_owned()).collect();
        let psi = (0..n).map(|i| v.columns(i * e, e).into_owned()).collect();
        FramePair::new(a, psi, p, x, y)
    }

    /// The two matrices of `from_uv`, with their block-space typing.
    pub fn to_uv(&self) -> (Operator, Operator) {
        (self.analysis_matrix(), self.synthesis_matrix())
    }

    /// Restriction to a subspace Z = range(P) expressed in the columns of
    /// `basis`: elements (A_n E, E^+ P Psi_n) on Z with the inherited
    /// coordinate exponent.  `p_mat` must be an idempotent map of X whose
    /// range the basis spans with full column rank.
    pub fn restrict(
        &self,
        p_mat: &DMatrix<f64>,
        basis: &DMatrix<f64>,
        cfg: &Config,
    ) -> Result<FramePair> {
        let d = self.x.dim;
        if p_mat.nrows() != d || p_mat.ncols() != d {
            return Err(FrameError::shape("projection must be square on X"));
        }
        if basis.nrows() != d || basis.ncols() == 0 || basis.ncols() > d {
            return Err(FrameError::shape("basis must be X-dim by subspace-dim"));
        }
        let proj_residual = max_abs(&(p_mat * p_mat - p_mat));
        if proj_residual > cfg.identity_tol {
            return Err(FrameError::NotAProjection { residual: proj_residual });
        }
        // every basis column must be fixed by P, and the ranks must agree
        let span_residual = max_abs(&(p_mat * basis - basis));
        let rank_tol = 1e-8 * sigma_scale(p_mat).max(sigma_scale(basis)).max(1.0);
        let rank_p = p_mat.clone().svd(false, false).rank(rank_tol);
        let rank_e = basis.clone().svd(false, false).rank(rank_tol);
        if span_residual > cfg.identity_tol || rank_p != rank_e || rank_e < basis.ncols() {
            return Err(FrameError::SpanMismatch {
                residual: span_residual.max((rank_p as f64 - rank_e as f64).abs()),
            });
        }
        // left inverse E^+ = (E^T E)^{-1} E^T of the injective basis map
        let gram = basis.transpose() * basis;
        let (gram_inv, _) = invert_mat(&gram, cfg)?;
        let pinv = gram_inv * basis.transpose();
        let a = self.a.iter().map(|a_n| a_n * basis).collect();
        let psi = self.psi.iter().map(|psi_n| &pinv * p_mat * psi_n).collect();
        let z = SpaceDesc { dim: basis.ncols(), r: self.x.r };
        FramePair::new(a, psi, self.p, z, self.y)
    }

    /// Appends elements whose synthesized product is the Bessel defect
    /// I - S, producing a Parseval pair.  The supplied factorization is
    /// checked, not trusted.
    pub fn complete_to_parseval(
        &self,
        b: &[DMatrix<f64>],
        phi: &[DMatrix<f64>],
        cfg: &Config,
    ) -> Result<FramePair> {
        if b.is_empty() || b.len() != phi.len() {
            return Err(FrameError::shape("completion needs matching nonempty element lists"));
        }
        let d = self.x.dim;
        let e = self.y.dim;
        for (m, phi_m) in b.iter().zip(phi.iter()) {
            if m.nrows() != e || m.ncols() != d || phi_m.nrows() != d || phi_m.ncols() != e {
                return Err(FrameError::shape("completion elements must match the frame's spaces"));
            }
        }
        let s = self.frame_operator().mat;
        let defect = DMatrix::<f64>::identity(d, d) - s;
        let mut product = DMatrix::<f64>::zeros(d, d);
        for (b_m, phi_m) in b.iter().zip(phi.iter()) {
            product += phi_m * b_m;
        }
        let residual = max_abs(&(&defect - &product));
        if residual > cfg.identity_tol {
            return Err(FrameError::FactorizationMismatch { residual });
        }
        let mut a = self.a.clone();
        let mut psi = self.psi.clone();
        a.extend_from_slice(b);
        psi.extend_from_slice(phi);
        FramePair::new(a, psi, self.p, self.x, self.y)
    }

    /// Richardson-type reconstruction x_k = x_{k-1} + mu S (x - x_{k-1})
    /// with mu = 2/(a+b) built from the certified frame bounds.  When the
    /// contraction hypothesis ||I - mu S|| <= (b-a)/(b+a) is certified, the
    /// run carries the ratio and the error sequence obeys
    /// ||x - x_k|| <= ratio^k ||x||.
    pub fn iterate_reconstruction(
        &self,
        x: &DVector<f64>,
        steps: usize,
        cfg: &Config,
    ) -> Result<ReconstructionRun> {
        if x.len() != self.x.dim {
            return Err(FrameError::shape("reconstruction target must live in X"));
        }
        let s = self.frame_operator();
        let bounds = self.bounds(cfg);
        let a_lo = bounds.lower.lower;
        let b_hi = bounds.upper.upper;
        if !(a_lo > 0.0) {
            return Err(FrameError::SingularOperator { smallest_pivot: smallest_pivot(&s.mat) });
        }
        let mu = 2.0 / (a_lo + b_hi);
        let ratio = (b_hi - a_lo) / (b_hi + a_lo);
        let d = self.x.dim;
        let defect = DMatrix::<f64>::identity(d, d) - mu * &s.mat;
        let contraction = crate::norm::operator_norm_between(
            &defect,
            &crate::norm::NormDesc::plain(d, self.x.r),
            &crate::norm::NormDesc::plain(d, self.x.r),
            cfg,
        );
        // for a spectrum attaining both bounds the contraction norm equals
        // the ratio exactly, so certification gets roundoff headroom
        let certified = contraction.upper <= ratio * (1.0 + 1e-9) + 1e-12;
        let x_norm = crate::space::p_norm(x, self.x.r);
        let mut current = DVector::zeros(d);
        let mut iterates = Vec::with_capacity(steps);
        let mut errors = Vec::with_capacity(steps);
        for k in 1..=steps {
            current = &current + mu * (&s.mat * (x - &current));
            let err = crate::space::p_norm(&(x - &current), self.x.r);
            if certified {
                // theorem-backed tripwire; failure indicates a broken bound
                assert!(
                    err <= ratio.powi(k as i32) * x_norm * (1.0 + 1e-9) + 1e-13,
                    "certified reconstruction bound violated at step {k}: {err}"
                );
            }
            iterates.push(current.clone());
            errors.push(err);
        }
        Ok(ReconstructionRun {
            iterates,
            errors,
            ratio: if certified { Some(ratio) } else { None },
            contraction_upper: contraction.upper,
        })
    }
}

fn sigma_scale(m: &DMatrix<f64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

/// Certified optimal frame bounds (lower a, upper b) and the norms of the
/// analysis and synthesis maps (c, d).
#[derive(Debug, Clone, Copy)]
pub struct FrameBounds {
    pub lower: NormEstimate,
    pub upper: NormEstimate,
    pub analysis: NormEstimate,
    pub synthesis: NormEstimate,
}

/// Classification flags; `parseval` implies `frame` implies `bessel`, and
/// `riesz` implies `frame`.  Residuals and the smallest pivot of S document
/// how each verdict was reached.
#[derive(Debug, Clone, Copy)]
pub struct FrameClass {
    pub bessel: bool,
    pub frame: bool,
    pub parseval: bool,
    pub riesz: bool,
    pub smallest_pivot: f64,
    pub parseval_residual: f64,
    pub riesz_residual: f64,
}

impl FrameClass {
    /// Most specific class that applies.
    pub fn strongest(&self) -> &'static str {
        if self.parseval && self.riesz {
            "parseval riesz"
        } else if self.parseval {
            "parseval"
        } else if self.riesz {
            "riesz"
        } else if self.frame {
            "frame"
        } else {
            "bessel"
        }
    }
}

/// Output of `iterate_reconstruction`: the iterates, their errors in the
/// X norm, the certified ratio when the contraction hypothesis holds, and
/// the measured contraction upper bound either way.
#[derive(Debug, Clone)]
pub struct ReconstructionRun {
    pub iterates: Vec<DVector<f64>>,
    pub errors: Vec<f64>,
    pub ratio: Option<f64>,
    pub contraction_upper: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Exponent;

    fn cfg() -> Config {
        Config::default()
    }

    fn space(dim: usize, r: f64) -> SpaceDesc {
        SpaceDesc::new(dim, Exponent::Finite(r)).unwrap()
    }

    fn eye(n: usize) -> DMatrix<f64> {
        DMatrix::identity(n, n)
    }

    /// Two-element pair on R^2 whose frame operator is diag(1, 3).
    fn diag_pair() -> FramePair {
        let x = space(2, 2.0);
        let y = space(2, 2.0);
        let a1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let a2 = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 2.0f64.sqrt()]);
        let psi1 = a1.transpose();
        let psi2 = a2.transpose();
        FramePair::new(vec![a1, a2], vec![psi1, psi2], 2.0, x, y).unwrap()
    }

    #[test]
    fn identity_singleton_is_parseval_riesz() {
        let x = space(2, 2.0);
        let f = FramePair::new(vec![eye(2)], vec![eye(2)], 2.0, x, x).unwrap();
        let class = f.classify(&cfg());
        assert!(class.parseval && class.riesz && class.frame && class.bessel);
        assert_eq!(class.strongest(), "parseval riesz");
    }

    #[test]
    fn tall_embedding_is_parseval_but_not_riesz() {
        // A = e_1 embedding R -> R^2: S = 1 but the analysis image is a
        // proper subspace of the block space
        let x = space(1, 2.0);
        let y = space(2, 2.0);
        let a = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let psi = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let f = FramePair::new(vec![a], vec![psi], 2.0, x, y).unwrap();
        let class = f.classify(&cfg());
        assert!(class.parseval);
        assert!(!class.riesz);
        assert!(class.riesz_residual > 0.5);
    }

    #[test]
    fn zero_synthesis_is_bessel_only() {
        let x = space(2, 2.0);
        let f = FramePair::new(vec![eye(2)], vec![DMatrix::zeros(2, 2)], 2.0, x, x).unwrap();
        let class = f.classify(&cfg());
        assert!(class.bessel && !class.frame && !class.parseval && !class.riesz);
        assert!(class.smallest_pivot <= 1e-10);
    }

    #[test]
    fn frame_operator_factors_through_the_block_space() {
        let f = diag_pair();
        let s = f.frame_operator().mat;
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        assert!(max_abs(&(&s - &expected)) < 1e-15);
        // independent route: product of the stacked matrices
        let (u, v) = f.to_uv();
        let via_block = v.mat * u.mat;
        assert!(max_abs(&(&s - &via_block)) < 1e-14);
    }

    #[test]
    fn analysis_synthesis_vector_routes_match_matrices() {
        let f = diag_pair();
        let x = DVector::from_column_slice(&[0.3, -1.2]);
        let z = f.analysis(&x).unwrap();
        let (u, v) = f.to_uv();
        assert!((&u.mat * &x - &z.data).abs().max() < 1e-15);
        let back = f.synthesis(&z).unwrap();
        assert!((&v.mat * &z.data - &back).abs().max() < 1e-15);
    }

    #[test]
    fn bounds_bracket_the_diagonal_spectrum() {
        let f = diag_pair();
        let b = f.bounds(&cfg());
        assert!((b.upper.upper - 3.0).abs() < 1e-10);
        assert!((b.lower.lower - 1.0).abs() < 1e-10);
        assert!(b.lower.lower <= b.lower.upper && b.upper.lower <= b.upper.upper);
    }

    #[test]
    fn canonical_dual_inverts_the_frame_operator_and_involutes() {
        let f = diag_pair();
        let dual = f.canonical_dual(&cfg()).unwrap();
        let s_dual = dual.frame_operator().mat;
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0 / 3.0]);
        assert!(max_abs(&(&s_dual - &expected)) < 1e-12);
        let back = dual.canonical_dual(&cfg()).unwrap();
        for n in 0..f.len() {
            assert!(max_abs(&(&back.a()[n] - &f.a()[n])) < 1e-12);
            assert!(max_abs(&(&back.psi()[n] - &f.psi()[n])) < 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent_and_fixes_the_analysis_image() {
        let f = diag_pair();
        let p = f.projection(&cfg()).unwrap().mat;
        assert!(max_abs(&(&p * &p - &p)) < 1e-12);
        let theta_a = f.analysis_matrix().mat;
        assert!(max_abs(&(&p * &theta_a - &theta_a)) < 1e-12);
        let theta_psi = f.synthesis_matrix().mat;
        assert!(max_abs(&(&theta_psi * &p - &theta_psi)) < 1e-12);
    }

    #[test]
    fn uv_round_trip_is_exact() {
        let f = diag_pair();
        let (u, v) = f.to_uv();
        let g = FramePair::from_uv(&u.mat, &v.mat, f.len(), f.p(), f.x(), f.y()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn restrict_keeps_parseval_on_coordinate_subspaces() {
        // Parseval pair on R^2, restricted to span(e_1)
        let x = space(2, 2.0);
        let f = FramePair::new(vec![eye(2)], vec![eye(2)], 2.0, x, x).unwrap();
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let basis = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let g = f.restrict(&p, &basis, &cfg()).unwrap();
        assert_eq!(g.x().dim, 1);
        let class = g.classify(&cfg());
        assert!(class.parseval);
    }

    #[test]
    fn restrict_rejects_non_projections_and_bad_bases() {
        let x = space(2, 2.0);
        let f = FramePair::new(vec![eye(2)], vec![eye(2)], 2.0, x, x).unwrap();
        let not_p = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let basis = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        assert!(matches!(
            f.restrict(&not_p, &basis, &cfg()),
            Err(FrameError::NotAProjection { .. })
        ));
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let wrong_basis = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        assert!(matches!(
            f.restrict(&p, &wrong_basis, &cfg()),
            Err(FrameError::SpanMismatch { .. })
        ));
    }

    #[test]
    fn completion_reaches_parseval_and_rejects_bad_factorizations() {
        // S = 0.5 I; appending (I, 0.5 I) completes to Parseval
        let x = space(2, 2.0);
        let f =
            FramePair::new(vec![eye(2)], vec![0.5 * eye(2)], 2.0, x, x).unwrap();
        let completed = f
            .complete_to_parseval(&[eye(2)], &[0.5 * eye(2)], &cfg())
            .unwrap();
        assert!(completed.classify(&cfg()).parseval);
        assert_eq!(completed.len(), 2);
        let bad = f.complete_to_parseval(&[eye(2)], &[0.4 * eye(2)], &cfg());
        assert!(matches!(bad, Err(FrameError::FactorizationMismatch { .. })));
    }

    #[test]
    fn reconstruction_contracts_at_the_certified_ratio() {
        let f = diag_pair();
        let x = DVector::from_column_slice(&[1.0, -2.0]);
        let run = f.iterate_reconstruction(&x, 12, &cfg()).unwrap();
        // bounds are a = 1, b = 3, so the ratio is 1/2
        let ratio = run.ratio.expect("contraction must certify for an exact diagonal spectrum");
        assert!((ratio - 0.5).abs() < 1e-9);
        let x_norm = 5.0f64.sqrt();
        for (k, err) in run.errors.iter().enumerate() {
            assert!(*err <= ratio.powi(k as i32 + 1) * x_norm * (1.0 + 1e-9));
        }
        // the final iterate has converged to x
        let last = run.iterates.last().unwrap();
        assert!((last - &x).abs().max() < 1e-3);
    }

    #[test]
    fn reconstruction_requires_an_invertible_frame_operator() {
        let x = space(2, 2.0);
        let f = FramePair::new(vec![eye(2)], vec![DMatrix::zeros(2, 2)], 2.0, x, x).unwrap();
        let target = DVector::from_column_slice(&[1.0, 0.0]);
        assert!(matches!(
            f.iterate_reconstruction(&target, 3, &cfg()),
            Err(FrameError::SingularOperator { .. })
        ));
    }

    #[test]
    fn shape_validation_rejects_mismatched_elements() {
        let x = space(2, 2.0);
        let y = space(3, 2.0);
        // analysis element has the wrong number of rows for Y
        let bad = FramePair::new(vec![eye(2)], vec![DMatrix::zeros(2, 3)], 2.0, x, y);
        assert!(bad.is_err());
        // infinite p is not a sequence exponent
        let ok_mats = (vec![eye(2)], vec![eye(2)]);
        assert!(FramePair::new(ok_mats.0, ok_mats.1, f64::INFINITY, x, x).is_err());
    }
}
