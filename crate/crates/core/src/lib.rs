//! Network sampling laboratory for respondent-driven sampling (RDS).
//!
//! The crate generates partially directed homophilous networks, simulates
//! RDS together with four successive/with-replacement approximations of it,
//! and evaluates the resulting pseudo-inclusion probabilities and Hájek
//! prevalence estimates.
//!
//! * [`graph`]: network representation and degree/edge-block statistics.
//! * [`acm`]: attributed configuration model generator.
//! * [`blockmodel`]: exact-budget block model used for the simulation grid.
//! * [`samplers`]: RDS, WRPI, SS_in, SS_pi and SS_pa.
//! * [`estimators`]: inclusion frequencies, Hájek, MARE, RMSE.
//! * [`experiment`]: scenario grid runner.
//! * [`ingest`]: SNAP edge lists, status assignment, edge thinning.

pub mod acm;
pub mod blockmodel;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod graph;
pub mod ingest;
pub mod samplers;
pub mod seed;

pub use error::{Error, ErrorKind, Result};
pub use graph::{Network, Status};
