//! Secure transmission design for linear multihop relay networks under
//! Poisson-distributed eavesdroppers.
//!
//! The crate provides the closed-form secrecy outage probability of an
//! N-hop randomize-and-forward path, the throughput-optimal wiretap code
//! rates for on-off (OFT) and non-on-off (NOFT) transmission, exhaustive
//! hop-count optimization, and an independent Monte Carlo simulator used to
//! cross-check every analytic quantity.
//!
//! ```
//! use multihop_secrecy::{optimizer, NetworkConfig, SchemeKind};
//!
//! let best = optimizer::optimize_hops(&NetworkConfig::default(), SchemeKind::Oft, 20).unwrap();
//! assert_eq!(best.n_star, 5);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod quadrature;
pub mod simulator;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{HopLayout, NetworkConfig, RateDesign, SchemeKind};
