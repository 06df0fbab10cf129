//! Similarity of frame pairs and dilation to Riesz pairs.
//!
//! Two pairs are similar when an invertible operator of X carries the
//! analysis elements of one onto the other and a second invertible operator
//! does the same for the synthesis elements.  Similarity is decided by the
//! reconstruction projections: similar pairs share theirs, and candidate
//! witnesses can always be recovered from the mixed operators.  Dilation
//! goes the other way: any frame pair extends, on X padded with the range
//! of the projection defect, to a Riesz pair that restricts back to the
//! original exactly.

use nalgebra::DMatrix;

use crate::config::Config;
use crate::dual::{check_compatible, mixed_frame_operator};
use crate::error::{FrameError, Result};
use crate::frame::FramePair;
use crate::op::{invert_mat, max_abs};
use crate::space::SpaceDesc;

/// Invertible operators carrying one pair onto another, with the entrywise
/// residual of the reproduction they achieve.
#[derive(Debug, Clone)]
pub struct SimilarityWitness {
    pub r: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub residual: f64,
}

/// Transports a pair along invertible operators of X: analysis elements
/// become a[n] * r, synthesis elements l * psi[n].  Both matrices must be
/// certifiably invertible; the result is then a frame again, similar to the
/// input by construction.
pub fn similar_transform(
    f: &FramePair,
    r: &DMatrix<f64>,
    l: &DMatrix<f64>,
    cfg: &Config,
) -> Result<FramePair> {
    let d = f.x().dim;
    for (name, m) in [("r", r), ("l", l)] {
        if m.nrows() != d || m.ncols() != d {
            return Err(FrameError::shape(format!(
                "similarity action {name} is {}x{}, expected {d}x{d}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    invert_mat(r, cfg)?;
    invert_mat(l, cfg)?;
    FramePair::new(
        f.a().iter().map(|an| an * r).collect(),
        f.psi().iter().map(|pn| l * pn).collect(),
        f.p(),
        f.x(),
        f.y(),
    )
}

/// Recovers the only possible similarity witnesses between two frames and
/// verifies them: the analysis action must be S_f^-1 times the mixed
/// operator of g's analysis against f's synthesis, and the synthesis action
/// its mirror image.  Fails with the reproduction residual when the pairs
/// are not similar, and demands invertibility of both witnesses.
pub fn recover_similarity(f: &FramePair, g: &FramePair, cfg: &Config) -> Result<SimilarityWitness> {
    check_compatible(f, g)?;
    let (s_inv, _) = invert_mat(&f.frame_operator().mat, cfg)?;
    let r = &s_inv * mixed_frame_operator(g, f)?;
    let l = mixed_frame_operator(f, g)? * &s_inv;
    let mut residual: f64 = 0.0;
    for n in 0..f.len() {
        residual = residual.max(max_abs(&(&g.a()[n] - &f.a()[n] * &r)));
        residual = residual.max(max_abs(&(&g.psi()[n] - &l * &f.psi()[n])));
    }
    if residual > cfg.identity_tol {
        return Err(FrameError::NotSimilar { residual });
    }
    invert_mat(&r, cfg)?;
    invert_mat(&l, cfg)?;
    Ok(SimilarityWitness { r, l, residual })
}

/// Verdict of the projection criterion for similarity, together with the
/// witnesses when they can be recovered.
#[derive(Debug, Clone)]
pub struct SimilarityCheck {
    pub projection_residual: f64,
    pub similar: bool,
    pub witness: Option<SimilarityWitness>,
}

/// Decides similarity of two frames by comparing their reconstruction
/// projections entrywise, and reports recovered witnesses alongside.  The
/// two routes agree on exact data; keeping both visible lets the caller
/// cross-check them.
pub fn is_similar(f: &FramePair, g: &FramePair, cfg: &Config) -> Result<SimilarityCheck> {
    check_compatible(f, g)?;
    let pf = f.projection(cfg)?;
    let pg = g.projection(cfg)?;
    let projection_residual = max_abs(&(pf.mat - pg.mat));
    Ok(SimilarityCheck {
        projection_residual,
        similar: projection_residual <= cfg.identity_tol,
        witness: recover_similarity(f, g, cfg).ok(),
    })
}

/// A frame pair dilated to a Riesz pair on the padded space, with the maps
/// that relate the two.  `embed` sends X into the padded space by zero
/// padding (an isometry for the coordinate exponent), `basis` holds an
/// orthonormal basis of the projection defect's range in the coefficient
/// block space, and `added_dim` counts the padded directions.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub dilated: FramePair,
    pub embed: DMatrix<f64>,
    pub basis: DMatrix<f64>,
    pub added_dim: usize,
}

/// Extends a frame pair to a Riesz pair: the analysis elements gain columns
/// that chart the range of I - P through an orthonormal basis, the
/// synthesis elements gain the matching rows of its coordinates,
///
/// ```text
/// a[n]   -> [ a[n] | rows n of E ]
/// psi[n] -> [ psi[n] over block n of E^T (I - P) ]
/// ```
///
/// so the dilated frame operator is the original one padded with an
/// identity block, the dilated projection is the identity, and composing a
/// dilated analysis element with `embed` returns the original element
/// bitwise.  A Riesz input has an empty defect and comes back unchanged.
pub fn dilate(f: &FramePair, cfg: &Config) -> Result<Dilation> {
    let d = f.x().dim;
    let e = f.y().dim;
    let m = f.len() * e;
    let p_mat = f.projection(cfg)?.mat;
    let defect = DMatrix::identity(m, m) - &p_mat;
    let qr = defect.clone().col_piv_qr();
    let r_factor = qr.r();
    // The defect of a reconstruction projection has its nonzero spectral
    // weight at one or above, so a relative cutoff on the pivoted triangle
    // reads off the rank cleanly; a leading pivot at the inversion noise
    // floor means the defect is numerically empty, not rank one.
    let lead = r_factor[(0, 0)].abs();
    let mut added_dim = 0;
    if lead > cfg.identity_tol {
        for i in 0..r_factor.nrows().min(r_factor.ncols()) {
            if r_factor[(i, i)].abs() > 1.5e-8 * lead {
                added_dim += 1;
            } else {
                break;
            }
        }
    }
    let basis = qr.q().columns(0, added_dim).into_owned();
    let coords = basis.transpose() * &defect;

    let x1 = SpaceDesc::new(d + added_dim, f.x().r)?;
    let mut a = Vec::with_capacity(f.len());
    let mut psi = Vec::with_capacity(f.len());
    for n in 0..f.len() {
        let mut wide = DMatrix::zeros(e, d + added_dim);
        wide.view_mut((0, 0), (e, d)).copy_from(&f.a()[n]);
        wide.view_mut((0, d), (e, added_dim))
            .copy_from(&basis.rows(n * e, e));
        a.push(wide);
        let mut tall = DMatrix::zeros(d + added_dim, e);
        tall.view_mut((0, 0), (d, e)).copy_from(&f.psi()[n]);
        tall.view_mut((d, 0), (added_dim, e))
            .copy_from(&coords.columns(n * e, e));
        psi.push(tall);
    }
    let dilated = FramePair::new(a, psi, f.p(), x1, f.y())?;
    let embed = DMatrix::from_fn(d + added_dim, d, |i, j| if i == j { 1.0 } else { 0.0 });
    Ok(Dilation {
        dilated,
        embed,
        basis,
        added_dim,
    })
}
