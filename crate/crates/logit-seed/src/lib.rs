//! Information-theoretic weight initialization for logistic-activation
//! networks, plus the numerical kit needed to study it.
//!
//! The starting point is a single neuron whose pre-activation ("logit") is
//! approximately Gaussian. Pushing `N(mu, sigma^2)` through the logistic
//! `g(z) = 1/(1+e^{-z})` gives an output density on `(0,1)` whose
//! differential entropy is maximized — information transfer is best — at
//! `mu = 0`, `sigma = sqrt(pi/2)` ([`neuron`]). Scaling each weight row onto
//! the ellipsoid that realizes those logit moments is the *elliptical
//! projection* (EP) initialization ([`init`]), which keeps deep logistic
//! networks out of saturation where the classical recipes drive them into
//! it, and endows recurrent nets with a large, trainable recurrent norm
//! ([`rnn`]).
//!
//! What lives where:
//!
//! * [`special`] — logistic/softplus kernels, `erf`, the Lambert `W`
//!   principal branch, Gauss–Hermite quadrature;
//! * [`neuron`] — output entropy, the closed-form bound `H_B` and its
//!   sandwich, the optimal operating point and its constants;
//! * [`init`] — the six strategies (`lecun`, `glorot`, `ortho`, `lsuv`,
//!   `random+EP`, `ortho+EP`) and the elliptical projection solver;
//! * [`net`] / [`rnn`] — minimal feedforward and recurrent cores with exact
//!   gradients, dropout, and gradient-chain diagnostics;
//! * [`optim`] — momentum SGD and Adam with global-norm clipping;
//! * [`data`] — XOR Gaussians, MNIST (IDX), the copy-memory task;
//! * [`config`] / [`experiment`] — the deterministic experiment harness
//!   behind the `logit-seed` binary.
//!
//! ```
//! use logit_seed::neuron::{h_bound, optimal_sigma, GaussianLogitStats};
//!
//! // The entropy-optimal logit scale at zero mean...
//! let sigma = optimal_sigma(0.0);
//! assert!((sigma - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-12);
//!
//! // ...and the sandwich certifying the closed-form bound there.
//! let bound = h_bound(GaussianLogitStats::new(0.0, sigma).unwrap());
//! assert!(bound.lower <= bound.upper);
//! ```

pub mod config;
pub mod data;
pub mod error;
pub mod experiment;
pub mod init;
pub mod linalg;
pub mod net;
pub mod neuron;
pub mod optim;
pub mod rnn;
pub mod special;

pub use config::{ExperimentConfig, Task};
pub use error::{Error, Result};
pub use experiment::{compare_strategies, run_experiment, ExperimentSummary};
pub use init::{elliptical_project, InitStrategy, InputStats, ProjectionProblem};
pub use neuron::GaussianLogitStats;
