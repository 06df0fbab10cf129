//! Duality calculus: exact duals and their complete parametrization,
//! orthogonality-based constructions (interpolation, direct sums, common
//! duals), tensor products, and approximate duality with certified gaps.
//!
//! Conventions for a base pair f and a candidate g on the same spaces: the
//! "left" composite applies g's synthesis after f's analysis (the sum of
//! g.psi[n] * f.a[n]), the "right" composite applies f's synthesis after
//! g's analysis.  Duality asks both composites to be the identity,
//! orthogonality asks both to vanish, and approximate duality asks both to
//! lie within distance one of the identity in the operator norm of X.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Config;
use crate::error::{FrameError, Result};
use crate::frame::FramePair;
use crate::norm::{operator_norm_between, NormDesc, NormEstimate};
use crate::op::{invert_mat, kron, max_abs, smallest_pivot};
use crate::space::{Exponent, SpaceDesc};

/// Norm descriptor of the domain space X.
pub(crate) fn x_desc(f: &FramePair) -> NormDesc {
    NormDesc::plain(f.x().dim, f.x().r)
}

/// Norm descriptor of the coefficient block space.
pub(crate) fn block_desc(f: &FramePair) -> NormDesc {
    NormDesc::block(f.len(), f.y().dim, Exponent::Finite(f.p()), f.y().r)
}

/// Two pairs can only be compared when they share spaces, block exponent,
/// and length.
pub(crate) fn check_compatible(f: &FramePair, g: &FramePair) -> Result<()> {
    if f.p() != g.p() {
        return Err(FrameError::shape(format!(
            "block exponents differ: {} vs {}",
            f.p(),
            g.p()
        )));
    }
    if f.x() != g.x() || f.y() != g.y() {
        return Err(FrameError::shape(
            "pairs live on different spaces".to_string(),
        ));
    }
    if f.len() != g.len() {
        return Err(FrameError::shape(format!(
            "pair lengths differ: {} vs {}",
            f.len(),
            g.len()
        )));
    }
    Ok(())
}

/// Sum of g.psi[n] * f.a[n]: analysis from the first argument, synthesis
/// from the second.  For a dual pair this is the identity, for an
/// orthogonal pair it vanishes, and in general it measures how well g
/// reconstructs what f analyzes.
pub fn mixed_frame_operator(f: &FramePair, g: &FramePair) -> Result<DMatrix<f64>> {
    check_compatible(f, g)?;
    let d = f.x().dim;
    let mut s = DMatrix::zeros(d, d);
    for (a_n, phi_n) in f.a().iter().zip(g.psi().iter()) {
        s += phi_n * a_n;
    }
    Ok(s)
}

/// Outcome of a duality check.  `residual_left` measures the left composite
/// against the identity entrywise, `residual_right` the right one;
/// `candidate_pivot` documents whether the candidate's own frame operator
/// is invertible, which upgrades a reconstructing pair to a dual frame.
#[derive(Debug, Clone, Copy)]
pub struct DualCertificate {
    pub residual_left: f64,
    pub residual_right: f64,
    pub identities_hold: bool,
    pub candidate_pivot: f64,
    pub candidate_invertible: bool,
}

impl DualCertificate {
    /// Both reconstruction identities hold and the candidate is a frame.
    pub fn is_dual_frame(&self) -> bool {
        self.identities_hold && self.candidate_invertible
    }
}

/// Checks whether g is a dual of f: both mixed operators must equal the
/// identity.
pub fn is_dual(f: &FramePair, g: &FramePair, cfg: &Config) -> Result<DualCertificate> {
    let left = mixed_frame_operator(f, g)?;
    let right = mixed_frame_operator(g, f)?;
    let eye = DMatrix::identity(f.x().dim, f.x().dim);
    let residual_left = max_abs(&(&left - &eye));
    let residual_right = max_abs(&(&right - &eye));
    let pivot = smallest_pivot(&g.frame_operator().mat);
    Ok(DualCertificate {
        residual_left,
        residual_right,
        identities_hold: residual_left <= cfg.identity_tol && residual_right <= cfg.identity_tol,
        candidate_pivot: pivot,
        candidate_invertible: pivot > cfg.singular_tol,
    })
}

/// Every dual of a frame arises from two free parameters folded through the
/// complement of the reconstruction projection: with analysis-shaped `u`
/// and synthesis-shaped `v`,
///
/// ```text
/// theta_B   = theta_A S^-1 + (I - P) u
/// theta_Phi = S^-1 theta_Psi + v (I - P)
/// ```
///
/// and the candidate is kept only if its own frame operator is invertible.
/// `u = v = 0` reproduces the canonical dual; for a Riesz pair P = I and
/// the canonical dual is the only member of the family.
pub fn dual_from_params(
    f: &FramePair,
    u: &DMatrix<f64>,
    v: &DMatrix<f64>,
    cfg: &Config,
) -> Result<FramePair> {
    let m = f.len() * f.y().dim;
    let d = f.x().dim;
    if u.nrows() != m || u.ncols() != d {
        return Err(FrameError::shape(format!(
            "analysis parameter is {}x{}, expected {}x{}",
            u.nrows(),
            u.ncols(),
            m,
            d
        )));
    }
    if v.nrows() != d || v.ncols() != m {
        return Err(FrameError::shape(format!(
            "synthesis parameter is {}x{}, expected {}x{}",
            v.nrows(),
            v.ncols(),
            d,
            m
        )));
    }
    let s = f.frame_operator();
    let (s_inv, _) = invert_mat(&s.mat, cfg)?;
    let ta = f.analysis_matrix();
    let tv = f.synthesis_matrix();
    let p = &ta.mat * &s_inv * &tv.mat;
    let complement = DMatrix::identity(m, m) - p;
    let r = &ta.mat * &s_inv + &complement * u;
    let l = &s_inv * &tv.mat + v * &complement;
    let g = FramePair::from_uv(&r, &l, f.len(), f.p(), f.x(), f.y())?;
    // Family membership requires the candidate to be a frame itself.
    invert_mat(&g.frame_operator().mat, cfg)?;
    Ok(g)
}

/// Outcome of an orthogonality check: both mixed operators must vanish.
#[derive(Debug, Clone, Copy)]
pub struct OrthogonalityCertificate {
    pub residual_left: f64,
    pub residual_right: f64,
    pub orthogonal: bool,
}

impl OrthogonalityCertificate {
    /// Larger of the two residuals.
    pub fn residual(&self) -> f64 {
        self.residual_left.max(self.residual_right)
    }
}

/// Checks whether f and g are orthogonal: each pair's synthesis annihilates
/// the other's analysis.
pub fn is_orthogonal(f: &FramePair, g: &FramePair, cfg: &Config) -> Result<OrthogonalityCertificate> {
    let left = mixed_frame_operator(f, g)?;
    let right = mixed_frame_operator(g, f)?;
    let residual_left = max_abs(&left);
    let residual_right = max_abs(&right);
    Ok(OrthogonalityCertificate {
        residual_left,
        residual_right,
        orthogonal: residual_left <= cfg.identity_tol && residual_right <= cfg.identity_tol,
    })
}

/// Mixes two orthogonal Parseval pairs through operators of X.  Analysis
/// elements become f.a[n] * c + g.a[n] * d, synthesis elements
/// e * f.psi[n] + h * g.psi[n]; the mix preserves Parsevality exactly when
/// e * c + h * d = I, which is validated along with the Parseval and
/// orthogonality hypotheses.
pub fn interpolate_orthogonal(
    f: &FramePair,
    g: &FramePair,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    e: &DMatrix<f64>,
    h: &DMatrix<f64>,
    cfg: &Config,
) -> Result<FramePair> {
    check_compatible(f, g)?;
    let dim = f.x().dim;
    for (name, m) in [("c", c), ("d", d), ("e", e), ("h", h)] {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(FrameError::shape(format!(
                "mixing matrix {name} is {}x{}, expected {}x{}",
                m.nrows(),
                m.ncols(),
                dim,
                dim
            )));
        }
    }
    let eye = DMatrix::identity(dim, dim);
    for pair in [f, g] {
        let residual = max_abs(&(pair.frame_operator().mat - &eye));
        if residual > cfg.identity_tol {
            return Err(FrameError::NotParseval { residual });
        }
    }
    let orth = is_orthogonal(f, g, cfg)?;
    if !orth.orthogonal {
        return Err(FrameError::NotOrthogonal {
            residual: orth.residual(),
        });
    }
    let combo = e * c + h * d;
    let residual = max_abs(&(&combo - &eye));
    if residual > cfg.identity_tol {
        return Err(FrameError::CombinationNotIdentity { residual });
    }
    let a = f
        .a()
        .iter()
        .zip(g.a().iter())
        .map(|(an, bn)| an * c + bn * d)
        .collect();
    let psi = f
        .psi()
        .iter()
        .zip(g.psi().iter())
        .map(|(pn, qn)| e * pn + h * qn)
        .collect();
    FramePair::new(a, psi, f.p(), f.x(), f.y())
}

/// Combines two orthogonal pairs into one on the doubled space: analysis
/// elements are the horizontal concatenations [f.a[n]  g.a[n]], synthesis
/// elements the vertical stacks of f.psi[n] over g.psi[n].  Orthogonality
/// makes the frame operator block-diagonal (the two originals tiled), so
/// the result is a frame, and Parseval whenever both inputs are.  The
/// doubled space carries the coordinate exponent of X.
pub fn direct_sum(f: &FramePair, g: &FramePair, cfg: &Config) -> Result<FramePair> {
    let orth = is_orthogonal(f, g, cfg)?;
    if !orth.orthogonal {
        return Err(FrameError::NotOrthogonal {
            residual: orth.residual(),
        });
    }
    let d = f.x().dim;
    let e = f.y().dim;
    let x2 = SpaceDesc::new(2 * d, f.x().r)?;
    let mut a = Vec::with_capacity(f.len());
    let mut psi = Vec::with_capacity(f.len());
    for (an, bn) in f.a().iter().zip(g.a().iter()) {
        let mut wide = DMatrix::zeros(e, 2 * d);
        wide.view_mut((0, 0), (e, d)).copy_from(an);
        wide.view_mut((0, d), (e, d)).copy_from(bn);
        a.push(wide);
    }
    for (pn, qn) in f.psi().iter().zip(g.psi().iter()) {
        let mut tall = DMatrix::zeros(2 * d, e);
        tall.view_mut((0, 0), (d, e)).copy_from(pn);
        tall.view_mut((d, 0), (d, e)).copy_from(qn);
        psi.push(tall);
    }
    FramePair::new(a, psi, f.p(), x2, f.y())
}

/// The common dual of two orthogonal frames: elements
/// f.a[n] * S_f^-1 + g.a[n] * S_g^-1 and S_f^-1 * f.psi[n] + S_g^-1 * g.psi[n]
/// reconstruct through either input.  The output is only guaranteed to be a
/// Bessel pair: its own frame operator is S_f^-1 + S_g^-1, which can be
/// singular, so no frame claim is made for it.
pub fn common_dual(f: &FramePair, g: &FramePair, cfg: &Config) -> Result<FramePair> {
    let orth = is_orthogonal(f, g, cfg)?;
    if !orth.orthogonal {
        return Err(FrameError::NotOrthogonal {
            residual: orth.residual(),
        });
    }
    let (sf_inv, _) = invert_mat(&f.frame_operator().mat, cfg)?;
    let (sg_inv, _) = invert_mat(&g.frame_operator().mat, cfg)?;
    let a = f
        .a()
        .iter()
        .zip(g.a().iter())
        .map(|(an, bn)| an * &sf_inv + bn * &sg_inv)
        .collect();
    let psi = f
        .psi()
        .iter()
        .zip(g.psi().iter())
        .map(|(pn, qn)| &sf_inv * pn + &sg_inv * qn)
        .collect();
    FramePair::new(a, psi, f.p(), f.x(), f.y())
}

/// Tensor product pair, indexed lexicographically with the first factor
/// major: element n * g.len() + m is (f.a[n] (x) g.a[m], f.psi[n] (x)
/// g.psi[m]) as Kronecker products.  The frame operator is the Kronecker
/// product of the two frame operators, so any two frames with the same
/// block exponent combine and Parseval inputs give a Parseval output.  The
/// product spaces inherit the first factor's coordinate exponents.
pub fn tensor_product(f: &FramePair, g: &FramePair) -> Result<FramePair> {
    if f.p() != g.p() {
        return Err(FrameError::InvalidParameter {
            context: format!(
                "tensor factors must share the block exponent, got {} and {}",
                f.p(),
                g.p()
            ),
        });
    }
    let x = SpaceDesc::new(f.x().dim * g.x().dim, f.x().r)?;
    let y = SpaceDesc::new(f.y().dim * g.y().dim, f.y().r)?;
    let mut a = Vec::with_capacity(f.len() * g.len());
    let mut psi = Vec::with_capacity(f.len() * g.len());
    for an in f.a() {
        for bm in g.a() {
            a.push(kron(an, bm));
        }
    }
    for pn in f.psi() {
        for qm in g.psi() {
            psi.push(kron(pn, qm));
        }
    }
    FramePair::new(a, psi, f.p(), x, y)
}

/// Certified approximate-duality gaps: `gap_left` bounds the distance of
/// the left composite from the identity in the operator norm of X,
/// `gap_right` the right one.  The pairs qualify when both certified upper
/// bounds are below one.  `strict_samples_ok` reports an independent
/// operational check: on sampled nonzero vectors, the reconstruction error
/// stays strictly below the vector norm.
#[derive(Debug, Clone, Copy)]
pub struct ApproxDualCertificate {
    pub gap_left: NormEstimate,
    pub gap_right: NormEstimate,
    pub approx_dual: bool,
    pub strict_samples_ok: bool,
}

/// Checks whether g is an approximate dual of f.
pub fn is_approx_dual(f: &FramePair, g: &FramePair, cfg: &Config) -> Result<ApproxDualCertificate> {
    let d = f.x().dim;
    let eye = DMatrix::identity(d, d);
    let left_defect = &eye - mixed_frame_operator(f, g)?;
    let right_defect = &eye - mixed_frame_operator(g, f)?;
    let desc = x_desc(f);
    let gap_left = operator_norm_between(&left_defect, &desc, &desc, cfg);
    let gap_right = operator_norm_between(&right_defect, &desc, &desc, cfg);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6170_7078);
    let samples = cfg.sample_budget.min(256);
    let mut strict_samples_ok = true;
    for _ in 0..samples {
        let x = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let x_norm = f.x().norm(&x);
        if x_norm == 0.0 {
            continue;
        }
        for defect in [&left_defect, &right_defect] {
            if f.x().norm(&(defect * &x)) >= x_norm {
                strict_samples_ok = false;
            }
        }
    }
    Ok(ApproxDualCertificate {
        gap_left,
        gap_right,
        approx_dual: gap_left.upper < 1.0 && gap_right.upper < 1.0,
        strict_samples_ok,
    })
}

/// Splits an approximately dual pair into two exact duals by inverting the
/// mixed operators: with S_left the left composite and S_right the right
/// one,
///
/// ```text
/// dual of f: ( g.a[n] * S_right^-1,  S_left^-1 * g.psi[n] )
/// dual of g: ( f.a[n] * S_left^-1,   S_right^-1 * f.psi[n] )
/// ```
///
/// Inversion is the only requirement, so the construction also succeeds
/// past the gap-below-one regime whenever the mixed operators stay
/// invertible.
pub fn exact_dual_from_approx(
    f: &FramePair,
    g: &FramePair,
    cfg: &Config,
) -> Result<(FramePair, FramePair)> {
    let s_left = mixed_frame_operator(f, g)?;
    let s_right = mixed_frame_operator(g, f)?;
    let (s_left_inv, _) = invert_mat(&s_left, cfg)?;
    let (s_right_inv, _) = invert_mat(&s_right, cfg)?;
    let dual_of_f = FramePair::new(
        g.a().iter().map(|bn| bn * &s_right_inv).collect(),
        g.psi().iter().map(|qn| &s_left_inv * qn).collect(),
        f.p(),
        f.x(),
        f.y(),
    )?;
    let dual_of_g = FramePair::new(
        f.a().iter().map(|an| an * &s_left_inv).collect(),
        f.psi().iter().map(|pn| &s_right_inv * pn).collect(),
        f.p(),
        f.x(),
        f.y(),
    )?;
    Ok((dual_of_f, dual_of_g))
}

/// Builds an approximate dual from an exact dual g of f by scaling: the new
/// pair is (g.a[n] * u, v * g.psi[n]).  Requires certified ||I - u|| < 1
/// and ||I - v|| < 1 in the operator norm of X; the constructed pair's
/// right gap then equals ||I - u|| and its left gap ||I - v|| exactly, so
/// this parametrizes all approximate duals as scaled exact duals.
pub fn approx_dual_from_scaled(
    f: &FramePair,
    g: &FramePair,
    u: &DMatrix<f64>,
    v: &DMatrix<f64>,
    cfg: &Config,
) -> Result<(FramePair, ApproxDualCertificate)> {
    let cert = is_dual(f, g, cfg)?;
    if !cert.identities_hold {
        return Err(FrameError::HypothesisNotCertified {
            context: format!(
                "the second pair must be an exact dual; reconstruction residuals {:.3e}, {:.3e}",
                cert.residual_left, cert.residual_right
            ),
        });
    }
    let d = f.x().dim;
    if u.nrows() != d || u.ncols() != d || v.nrows() != d || v.ncols() != d {
        return Err(FrameError::shape(format!(
            "scaling matrices must be {d}x{d}"
        )));
    }
    let eye = DMatrix::identity(d, d);
    let desc = x_desc(f);
    let dist_u = operator_norm_between(&(&eye - u), &desc, &desc, cfg);
    let dist_v = operator_norm_between(&(&eye - v), &desc, &desc, cfg);
    if dist_u.upper >= 1.0 || dist_v.upper >= 1.0 {
        return Err(FrameError::HypothesisNotCertified {
            context: format!(
                "scalings must stay within distance one of the identity; certified bounds {:.3e}, {:.3e}",
                dist_u.upper, dist_v.upper
            ),
        });
    }
    let scaled = FramePair::new(
        g.a().iter().map(|bn| bn * u).collect(),
        g.psi().iter().map(|qn| v * qn).collect(),
        f.p(),
        f.x(),
        f.y(),
    )?;
    let cert = is_approx_dual(f, &scaled, cfg)?;
    Ok((scaled, cert))
}

/// One truncation level of the iterative dual construction.
#[derive(Debug, Clone)]
pub struct NeumannLevel {
    pub level: usize,
    pub pair: FramePair,
    pub gap_left: NormEstimate,
    pub gap_right: NormEstimate,
    pub bound_left: f64,
    pub bound_right: f64,
    pub within_bound: bool,
}

/// Truncated iterative duals together with the base gaps that drive their
/// convergence.
#[derive(Debug, Clone)]
pub struct NeumannRun {
    pub base_left: NormEstimate,
    pub base_right: NormEstimate,
    pub levels: Vec<NeumannLevel>,
}

/// Iterates an approximate dual toward the exact dual it generates: level N
/// uses the truncated inverse sum_{m=0}^{N} K^m in place of the full
/// inverse of each mixed operator,
///
/// ```text
/// a[n]   -> g.a[n] * sum_m (I - S_right)^m
/// psi[n] -> sum_m (I - S_left)^m * g.psi[n]
/// ```
///
/// and the level-N gaps are bounded by the base gaps raised to N + 1, so
/// they decay geometrically.  Requires certified base gaps below one.
/// `within_bound` is refutation-sound: it only reports a violation when the
/// certified lower bound of a measured gap exceeds its theoretical bound.
pub fn neumann_truncated_dual(
    f: &FramePair,
    g: &FramePair,
    max_level: usize,
    cfg: &Config,
) -> Result<NeumannRun> {
    let base = is_approx_dual(f, g, cfg)?;
    if !base.approx_dual {
        return Err(FrameError::NotApproxDual {
            gap_left: base.gap_left.upper,
            gap_right: base.gap_right.upper,
        });
    }
    let d = f.x().dim;
    let eye = DMatrix::identity(d, d);
    let k_left = &eye - mixed_frame_operator(f, g)?;
    let k_right = &eye - mixed_frame_operator(g, f)?;
    // Partial sums of the geometric series for the two mixed inverses.
    let mut acc_left = eye.clone();
    let mut acc_right = eye.clone();
    let mut pow_left = eye.clone();
    let mut pow_right = eye.clone();
    let mut levels = Vec::with_capacity(max_level + 1);
    for level in 0..=max_level {
        let pair = FramePair::new(
            g.a().iter().map(|bn| bn * &acc_right).collect(),
            g.psi().iter().map(|qn| &acc_left * qn).collect(),
            f.p(),
            f.x(),
            f.y(),
        )?;
        let cert = is_approx_dual(f, &pair, cfg)?;
        let bound_left = base.gap_left.upper.powi(level as i32 + 1);
        let bound_right = base.gap_right.upper.powi(level as i32 + 1);
        // Comparing a certified estimate against a bound on the true norm:
        // only a lower bound above the theoretical bound refutes it.
        let within_bound = cert.gap_left.lower <= bound_left * (1.0 + 1e-9) + 1e-12
            && cert.gap_right.lower <= bound_right * (1.0 + 1e-9) + 1e-12;
        levels.push(NeumannLevel {
            level,
            pair,
            gap_left: cert.gap_left,
            gap_right: cert.gap_right,
            bound_left,
            bound_right,
            within_bound,
        });
        pow_left = &pow_left * &k_left;
        pow_right = &pow_right * &k_right;
        acc_left += &pow_left;
        acc_right += &pow_right;
    }
    Ok(NeumannRun {
        base_left: base.gap_left,
        base_right: base.gap_right,
        levels,
    })
}

/// Certificate that a perturbation of a frame keeps an exact dual of the
/// original as an approximate dual.  The hypothesis multiplies the dual's
/// synthesis bound by the analysis shift (left) and its analysis bound by
/// the synthesis shift (right); both products must stay below one, and they
/// then bound the measured gaps.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationToApproxDual {
    pub analysis_shift: NormEstimate,
    pub synthesis_shift: NormEstimate,
    pub dual_analysis_bound: NormEstimate,
    pub dual_synthesis_bound: NormEstimate,
    pub product_left: f64,
    pub product_right: f64,
    pub hypothesis_ok: bool,
    pub gaps: ApproxDualCertificate,
    pub bounds_respected: bool,
}

/// Measures how far the collections of `f` drift from `reference` and
/// certifies that `dual` (an exact dual of `reference`) still serves `f`
/// approximately.  All norms are certified intervals; the hypothesis and
/// the gap bounds use their upper ends, while `bounds_respected` is
/// refutation-sound via the lower ends.
pub fn approx_dual_from_perturbation(
    f: &FramePair,
    reference: &FramePair,
    dual: &FramePair,
    cfg: &Config,
) -> Result<PerturbationToApproxDual> {
    check_compatible(f, reference)?;
    let cert = is_dual(reference, dual, cfg)?;
    if !cert.identities_hold {
        return Err(FrameError::HypothesisNotCertified {
            context: format!(
                "the third pair must be an exact dual of the reference; residuals {:.3e}, {:.3e}",
                cert.residual_left, cert.residual_right
            ),
        });
    }
    let xd = x_desc(f);
    let bd = block_desc(f);
    let analysis_diff = f.analysis_matrix().mat - reference.analysis_matrix().mat;
    let synthesis_diff = reference.synthesis_matrix().mat - f.synthesis_matrix().mat;
    let analysis_shift = operator_norm_between(&analysis_diff, &xd, &bd, cfg);
    let synthesis_shift = operator_norm_between(&synthesis_diff, &bd, &xd, cfg);
    let dual_analysis_bound = dual.analysis_matrix().norm(cfg);
    let dual_synthesis_bound = dual.synthesis_matrix().norm(cfg);
    let product_left = dual_synthesis_bound.upper * analysis_shift.upper;
    let product_right = dual_analysis_bound.upper * synthesis_shift.upper;
    let gaps = is_approx_dual(f, dual, cfg)?;
    let bounds_respected = gaps.gap_left.lower <= product_left * (1.0 + 1e-9) + 1e-12
        && gaps.gap_right.lower <= product_right * (1.0 + 1e-9) + 1e-12;
    Ok(PerturbationToApproxDual {
        analysis_shift,
        synthesis_shift,
        dual_analysis_bound,
        dual_synthesis_bound,
        product_left,
        product_right,
        hypothesis_ok: product_left < 1.0 && product_right < 1.0,
        gaps,
        bounds_respected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Exponent;

    fn cfg() -> Config {
        Config::default()
    }

    /// Three functionals on the plane with frame operator [[2,1],[1,2]]:
    /// overcomplete, neither Parseval nor Riesz.
    fn overcomplete_pair(p: f64, r: f64) -> FramePair {
        let rows = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        let a = rows
            .iter()
            .map(|row| DMatrix::from_row_slice(1, 2, row))
            .collect();
        let psi = rows
            .iter()
            .map(|row| DMatrix::from_row_slice(2, 1, row))
            .collect();
        FramePair::new(
            a,
            psi,
            p,
            SpaceDesc::new(2, Exponent::Finite(r)).unwrap(),
            SpaceDesc::new(1, Exponent::Finite(r)).unwrap(),
        )
        .unwrap()
    }

    /// Two pairs supported on disjoint slots: each is a frame, their mixed
    /// operators vanish identically.  Scales pick the frame operators
    /// (alpha * I and beta * I).
    fn disjoint_slot_pairs(alpha: f64, beta: f64) -> (FramePair, FramePair) {
        let x = SpaceDesc::new(2, Exponent::Finite(2.0)).unwrap();
        let eye = DMatrix::<f64>::identity(2, 2);
        let zero = DMatrix::<f64>::zeros(2, 2);
        let f = FramePair::new(
            vec![&eye * alpha, zero.clone()],
            vec![eye.clone(), zero.clone()],
            2.0,
            x,
            x,
        )
        .unwrap();
        let g = FramePair::new(
            vec![zero.clone(), eye.clone()],
            vec![zero, &eye * beta],
            2.0,
            x,
            x,
        )
        .unwrap();
        (f, g)
    }

    #[test]
    fn canonical_dual_reconstructs_in_both_orders() {
        let f = overcomplete_pair(1.5, 3.0);
        let g = f.canonical_dual(&cfg()).unwrap();
        let cert = is_dual(&f, &g, &cfg()).unwrap();
        assert!(cert.residual_left <= 1e-12);
        assert!(cert.residual_right <= 1e-12);
        assert!(cert.is_dual_frame());
        // Duality is symmetric.
        let back = is_dual(&g, &f, &cfg()).unwrap();
        assert!(back.identities_hold);
    }

    #[test]
    fn dual_family_covers_the_canonical_choice_and_random_members_reconstruct() {
        let f = overcomplete_pair(2.0, 2.0);
        let m = f.len() * f.y().dim;
        let d = f.x().dim;
        let zero_u = DMatrix::zeros(m, d);
        let zero_v = DMatrix::zeros(d, m);
        let canonical = f.canonical_dual(&cfg()).unwrap();
        let member = dual_from_params(&f, &zero_u, &zero_v, &cfg()).unwrap();
        for n in 0..f.len() {
            assert!(max_abs(&(&member.a()[n] - &canonical.a()[n])) <= 1e-14);
            assert!(max_abs(&(&member.psi()[n] - &canonical.psi()[n])) <= 1e-14);
        }

        let u = DMatrix::from_row_slice(3, 2, &[0.4, -0.2, 0.7, 0.1, -0.3, 0.5]);
        let v = DMatrix::from_row_slice(2, 3, &[0.2, -0.6, 0.3, 0.8, 0.1, -0.4]);
        let other = dual_from_params(&f, &u, &v, &cfg()).unwrap();
        let cert = is_dual(&f, &other, &cfg()).unwrap();
        assert!(cert.identities_hold, "every family member is a dual");
        // A genuinely different member: the family is not a singleton here.
        let moved = f
            .a()
            .iter()
            .zip(other.a().iter())
            .any(|(an, bn)| max_abs(&(an - bn)) > 1e-6);
        assert!(moved || max_abs(&(&other.a()[0] - &canonical.a()[0])) > 1e-6);
    }

    #[test]
    fn dual_family_rejects_parameters_that_break_invertibility() {
        let f = overcomplete_pair(2.0, 2.0);
        let c = cfg();
        let s_inv = invert_mat(&f.frame_operator().mat, &c).unwrap().0;
        let p = f.analysis_matrix().mat * &s_inv * f.synthesis_matrix().mat;
        let complement = DMatrix::identity(3, 3) - p;
        let z = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        let w = &complement * z;
        assert!(w.norm() > 1e-8, "fixture leaves the projection range");
        // Force the candidate frame operator S^-1 + v (I - P) u to become
        // S^-1 (I - e1 e1^T), which is singular.
        let target = -(&s_inv.column(0)).into_owned();
        let u = DMatrix::from_fn(3, 2, |i, j| if j == 0 { w[i] } else { 0.0 });
        let scale = w.dot(&w);
        let v = DMatrix::from_fn(2, 3, |i, j| target[i] * w[j] / scale);
        match dual_from_params(&f, &u, &v, &c) {
            Err(FrameError::SingularOperator { .. }) => {}
            other => panic!("expected a singularity rejection, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_slots_certify_orthogonality() {
        let (f, g) = disjoint_slot_pairs(2.0, 3.0);
        let cert = is_orthogonal(&f, &g, &cfg()).unwrap();
        assert_eq!(cert.residual_left, 0.0);
        assert_eq!(cert.residual_right, 0.0);
        assert!(cert.orthogonal);
        // A pair is never orthogonal to itself when it is a frame.
        let not = is_orthogonal(&f, &f, &cfg()).unwrap();
        assert!(!not.orthogonal);
    }

    #[test]
    fn interpolating_orthogonal_parseval_pairs_stays_parseval() {
        let (f, g) = disjoint_slot_pairs(1.0, 1.0);
        let c = cfg();
        let half = DMatrix::identity(2, 2) * (0.5f64).sqrt();
        let mixed = interpolate_orthogonal(&f, &g, &half, &half, &half, &half, &c).unwrap();
        assert!(mixed.classify(&c).parseval);

        let eye = DMatrix::identity(2, 2);
        match interpolate_orthogonal(&f, &g, &eye, &eye, &eye, &eye, &c) {
            Err(FrameError::CombinationNotIdentity { residual }) => assert!(residual > 0.9),
            other => panic!("expected a combination rejection, got {other:?}"),
        }
        match interpolate_orthogonal(&f, &f, &half, &half, &half, &half, &c) {
            Err(FrameError::NotOrthogonal { .. }) => {}
            other => panic!("expected an orthogonality rejection, got {other:?}"),
        }
        let (scaled, other) = disjoint_slot_pairs(2.0, 1.0);
        match interpolate_orthogonal(&scaled, &other, &half, &half, &half, &half, &c) {
            Err(FrameError::NotParseval { residual }) => assert!(residual > 0.9),
            other => panic!("expected a Parseval rejection, got {other:?}"),
        }
    }

    #[test]
    fn direct_sum_block_diagonalizes_the_frame_operator() {
        let (f, g) = disjoint_slot_pairs(2.0, 3.0);
        let c = cfg();
        let sum = direct_sum(&f, &g, &c).unwrap();
        assert_eq!(sum.x().dim, 4);
        let s = sum.frame_operator();
        let mut oracle = DMatrix::zeros(4, 4);
        oracle
            .view_mut((0, 0), (2, 2))
            .copy_from(&f.frame_operator().mat);
        oracle
            .view_mut((2, 2), (2, 2))
            .copy_from(&g.frame_operator().mat);
        assert!(max_abs(&(s.mat - &oracle)) <= 1e-14);
        assert!(sum.classify(&c).frame);

        let parseval = {
            let (pf, pg) = disjoint_slot_pairs(1.0, 1.0);
            direct_sum(&pf, &pg, &c).unwrap()
        };
        assert!(parseval.classify(&c).parseval);

        match direct_sum(&f, &f, &c) {
            Err(FrameError::NotOrthogonal { .. }) => {}
            other => panic!("expected an orthogonality rejection, got {other:?}"),
        }
    }

    #[test]
    fn a_common_dual_reconstructs_both_orthogonal_frames() {
        let (f, g) = disjoint_slot_pairs(2.0, 3.0);
        let c = cfg();
        let shared = common_dual(&f, &g, &c).unwrap();
        let for_f = is_dual(&f, &shared, &c).unwrap();
        let for_g = is_dual(&g, &shared, &c).unwrap();
        assert!(for_f.identities_hold);
        assert!(for_g.identities_hold);
    }

    #[test]
    fn tensor_product_frame_operator_is_the_kronecker_of_the_factors() {
        let f = overcomplete_pair(2.0, 2.0);
        let g = overcomplete_pair(2.0, 2.0);
        let t = tensor_product(&f, &g).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.x().dim, 4);
        let oracle = kron(&f.frame_operator().mat, &g.frame_operator().mat);
        assert!(max_abs(&(t.frame_operator().mat - &oracle)) <= 1e-12);
        // First-factor-major layout, bitwise.
        for n in 0..f.len() {
            for m in 0..g.len() {
                let idx = n * g.len() + m;
                assert_eq!(t.a()[idx], kron(&f.a()[n], &g.a()[m]));
            }
        }
        // The canonical dual of the product is the product of the duals.
        let c = cfg();
        let dual_of_product = t.canonical_dual(&c).unwrap();
        let product_of_duals =
            tensor_product(&f.canonical_dual(&c).unwrap(), &g.canonical_dual(&c).unwrap()).unwrap();
        for idx in 0..t.len() {
            assert!(
                max_abs(&(&dual_of_product.a()[idx] - &product_of_duals.a()[idx])) <= 1e-10
            );
            assert!(
                max_abs(&(&dual_of_product.psi()[idx] - &product_of_duals.psi()[idx])) <= 1e-10
            );
        }

        let mismatched = overcomplete_pair(1.5, 2.0);
        match tensor_product(&f, &mismatched) {
            Err(FrameError::InvalidParameter { .. }) => {}
            other => panic!("expected a block-exponent rejection, got {other:?}"),
        }
    }

    #[test]
    fn scaled_exact_duals_have_gaps_equal_to_the_scaling_defects() {
        let f = overcomplete_pair(2.0, 2.0);
        let c = cfg();
        let g = f.canonical_dual(&c).unwrap();
        let u = DMatrix::identity(2, 2) * 0.9;
        let v = DMatrix::from_diagonal(&DVector::from_row_slice(&[0.85, 0.95]));
        let (scaled, cert) = approx_dual_from_scaled(&f, &g, &u, &v, &c).unwrap();
        // Euclidean coordinates make every gap an exact singular value.
        assert!(cert.gap_right.exact, "2 -> 2 norms are exact");
        assert!((cert.gap_right.upper - 0.1).abs() <= 1e-12);
        assert!((cert.gap_left.upper - 0.15).abs() <= 1e-12);
        assert!(cert.approx_dual);
        assert!(cert.strict_samples_ok);

        // Recover exact duals from the approximate pair.
        let (dual_of_f, dual_of_g) = exact_dual_from_approx(&f, &scaled, &c).unwrap();
        assert!(is_dual(&f, &dual_of_f, &c).unwrap().identities_hold);
        assert!(is_dual(&scaled, &dual_of_g, &c).unwrap().identities_hold);

        let too_far = DMatrix::identity(2, 2) * 2.5;
        match approx_dual_from_scaled(&f, &g, &too_far, &v, &c) {
            Err(FrameError::HypothesisNotCertified { .. }) => {}
            other => panic!("expected a hypothesis rejection, got {other:?}"),
        }
    }

    #[test]
    fn truncated_neumann_duals_converge_at_the_certified_rate() {
        let f = overcomplete_pair(2.0, 2.0);
        let c = cfg();
        let g = f.canonical_dual(&c).unwrap();
        let u = DMatrix::identity(2, 2) * 0.8;
        let v = DMatrix::identity(2, 2) * 0.75;
        let (approx, _) = approx_dual_from_scaled(&f, &g, &u, &v, &c).unwrap();
        let run = neumann_truncated_dual(&f, &approx, 6, &c).unwrap();
        assert_eq!(run.levels.len(), 7);
        for level in &run.levels {
            assert!(level.within_bound, "level {} breaks its bound", level.level);
            // Euclidean coordinates: the measured gap is exact, so the
            // geometric bound can be checked directly.
            assert!(level.gap_left.upper <= level.bound_left * (1.0 + 1e-9) + 1e-12);
            assert!(level.gap_right.upper <= level.bound_right * (1.0 + 1e-9) + 1e-12);
        }
        assert!(run.levels[6].gap_left.upper < run.levels[0].gap_left.upper);
        // Level zero is the approximate dual itself.
        assert!((run.levels[0].gap_left.upper - run.base_left.upper).abs() <= 1e-12);

        match neumann_truncated_dual(&f, &f, 2, &c) {
            Err(FrameError::NotApproxDual { .. }) => {}
            other => panic!("expected an approximate-duality rejection, got {other:?}"),
        }
    }

    #[test]
    fn a_perturbed_frame_keeps_the_old_dual_as_certified_approximate_dual() {
        let reference = overcomplete_pair(2.0, 2.0);
        let c = cfg();
        let dual = reference.canonical_dual(&c).unwrap();
        let mut a = reference.a().to_vec();
        let mut psi = reference.psi().to_vec();
        a[2] += DMatrix::from_row_slice(1, 2, &[0.01, -0.005]);
        psi[1] += DMatrix::from_row_slice(2, 1, &[0.003, 0.002]);
        let moved = FramePair::new(a, psi, 2.0, reference.x(), reference.y()).unwrap();
        let report = approx_dual_from_perturbation(&moved, &reference, &dual, &c).unwrap();
        assert!(report.hypothesis_ok);
        assert!(report.product_left < 0.1 && report.product_right < 0.1);
        assert!(report.gaps.approx_dual);
        assert!(report.bounds_respected);

        // An unrelated pair is rejected as the claimed exact dual.
        match approx_dual_from_perturbation(&moved, &reference, &reference, &c) {
            Err(FrameError::HypothesisNotCertified { .. }) => {}
            other => panic!("expected a duality rejection, got {other:?}"),
        }
    }

    #[test]
    fn mixed_operators_demand_matching_shapes() {
        let f = overcomplete_pair(2.0, 2.0);
        let g = overcomplete_pair(1.5, 2.0);
        assert!(matches!(
            mixed_frame_operator(&f, &g),
            Err(FrameError::ShapeMismatch { .. })
        ));
        let (short, _) = disjoint_slot_pairs(1.0, 1.0);
        assert!(matches!(
            mixed_frame_operator(&f, &short),
            Err(FrameError::ShapeMismatch { .. })
        ));
    }
}
