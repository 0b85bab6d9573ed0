//! Game model and simulator for local voting-based misbehavior detection in
//! vehicular networks.
//!
//! A target node is judged by its neighbors, who act one at a time and
//! either vote (at a cost) or abstain. Benign neighbors observe the target
//! through an imperfect monitor and weigh the incentives of voting against
//! the probability that the nodes still to act will identify the target.
//! Malicious neighbors always vote wrong.
//!
//! - [`stage`]: probability `p_k` that the remaining nodes complete a correct
//!   identification, and the gain `δ` from one extra correct vote.
//! - [`payoff`]: stage payoffs of the benign player and the target.
//! - [`equilibrium`]: mixed-strategy equilibrium and its parameter bounds.
//! - [`simulator`]: population sampling, game play and Monte Carlo statistics.

pub mod equilibrium;
pub mod error;
pub mod params;
pub mod payoff;
pub mod simulator;
pub mod stage;

pub use error::{ModelError, Result};
pub use params::GameParams;
pub use payoff::{group_payoffs, payoff_matrix, GroupPayoffs, PayoffMatrix};
pub use stage::{stage_probability, vote_delta, StageState};
