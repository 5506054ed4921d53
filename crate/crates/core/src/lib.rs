//! Knee point identification on Pareto fronts.
//!
//! The main entry point is [`kpitu::identify`], which finds the solutions
//! that no neighbour beats in trade-off utility and ranks them by their
//! accumulative utility. [`baselines`] holds the methods it is usually
//! compared with, [`benchmarks`] the knee test problems with their true
//! knees, [`metrics`] the identification error and [`emo`] an NSGA-II
//! variant that uses knee identification for survival.

pub mod baselines;
pub mod benchmarks;
pub mod emo;
pub mod error;
pub mod io;
pub mod kpitu;
pub mod metrics;
pub mod neighbourhood;
pub mod objective;
pub mod tradeoff;

pub use error::{KneeError, Result};
pub use kpitu::{identify, identify_parallel, KneeResult, KpituConfig};
pub use objective::TradeoffSet;
