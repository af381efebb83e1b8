//! Estimation of the linear-in-means peer-effects model on collections of
//! networks when peers are self-selected.
//!
//! Both peer regressors in the model — the average peer outcome and the
//! average peer covariate — are endogenous when agents choose their own
//! links. The estimator implemented here instruments them with covariate
//! averages taken over each agent's *leave-own-out* subnetwork: the network
//! left after deleting every link that involves the agent. Walks on that
//! subnetwork are unaffected by the agent's own link decisions, which makes
//! the resulting instrument columns exogenous under self-selection while the
//! usual powers-of-the-adjacency instruments are not.
//!
//! The crate provides:
//!
//! - [`graph`]: adjacency matrices, row-normalized transition matrices, and
//!   leave-one-out subnetwork transitions;
//! - [`instruments`]: the averaged s-step walk transforms `Q_s x` and
//!   per-group instrument matrices for both instrument families;
//! - [`estimator`]: pooled two-stage least squares across groups with
//!   cluster-robust covariance, t-statistics, rank diagnostics, and a
//!   Durbin–Wu–Hausman endogeneity test;
//! - [`dgp`]: simulation of endogenous network formation and outcomes;
//! - [`montecarlo`]: a deterministic replication harness with tabular
//!   summaries;
//! - [`io`]: CSV edge/node file ingestion and machine-readable output.

pub mod dgp;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod instruments;
pub mod io;
pub mod montecarlo;

pub use error::{Error, Result};
pub use estimator::{Dataset, FitResult, GroupData, Model};
pub use graph::{Graph, TransitionMatrix};
pub use instruments::{InstrumentMatrix, InstrumentMode, InstrumentSpec};
