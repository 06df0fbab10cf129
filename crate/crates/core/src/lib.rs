//! Calculus of operator-valued p-approximate Schauder frames on
//! finite-dimensional p-normed coordinate spaces.
//!
//! A frame pair consists of analysis operators A_n : X -> Y and synthesis
//! operators Psi_n : Y -> X whose frame operator S = sum_n Psi_n A_n is
//! invertible.  The crate provides the block-space calculus (analysis and
//! synthesis maps into the p-direct-sum of N copies of Y), classification,
//! canonical and parametrized duals, approximate duals with Neumann
//! refinement, similarity transforms, dilation to a Riesz pair, and
//! quantitative perturbation certificates.
//!
//! Every norm-dependent statement is backed by a certified interval
//! ([`norm::NormEstimate`]): lower bounds are witnessed by explicit vectors,
//! upper bounds come from exact formulas or sound relaxations, so a verdict
//! of the form "quantity < 1" is never an artifact of sampling.
//!
//! ```
//! use ovpframe_core::{config::Config, frame::FramePair, space::{Exponent, SpaceDesc}};
//! use nalgebra::DMatrix;
//!
//! let cfg = Config::default();
//! let x = SpaceDesc::new(2, Exponent::Finite(2.0)).unwrap();
//! let y = SpaceDesc::new(1, Exponent::Finite(2.0)).unwrap();
//! let rows = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
//! let a: Vec<DMatrix<f64>> = rows.iter().map(|r| DMatrix::from_row_slice(1, 2, r)).collect();
//! let psi: Vec<DMatrix<f64>> = a.iter().map(|m| m.transpose()).collect();
//! let f = FramePair::new(a, psi, 2.0, x, y).unwrap();
//!
//! let class = f.classify(&cfg);
//! assert!(class.frame);
//! let dual = f.canonical_dual(&cfg).unwrap();
//! assert!(ovpframe_core::dual::is_dual(&f, &dual, &cfg).unwrap().identities_hold);
//! let bounds = f.bounds(&cfg);
//! assert!(bounds.lower.lower <= bounds.lower.upper);
//! ```

pub mod config;
pub mod dual;
pub mod error;
pub mod frame;
pub mod norm;
pub mod op;
pub mod perturb;
pub mod space;
pub mod transform;

pub use config::Config;
pub use error::{FrameError, Result};
