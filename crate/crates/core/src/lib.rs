//! Mixed maximally entangled states of multipartite qudit systems.
//!
//! ```
//! use mme::mme::{construct, max_mme_rank, SearchOptions};
//! use mme::modes::ModeStructure;
//! use mme::verify::{min_avg_ent, SpectralData, Strategy};
//!
//! let s: ModeStructure = "2x2x2x2".parse()?;
//! let report = max_mme_rank(&s, &SearchOptions::default())?;
//! assert_eq!(report.r_mme, 4);
//!
//! let (state, _rho) = construct(&s, report.witness[..2].to_vec(), vec![0.7, 0.3], None)?;
//! let est = min_avg_ent(&SpectralData::from_mme(&state), Strategy::default_grid())?;
//! assert!((est.min_avg - 1.0).abs() < 1e-9);
//! # Ok::<(), mme::Error>(())
//! ```

pub mod cli;
pub mod entcore;
pub mod error;
pub mod linalg;
pub mod mme;
pub mod modes;
pub mod tables;
pub mod tgx;
pub mod verify;

pub use error::{Error, Result};
