//! Crashworthiness black-box optimization benchmarks.
//!
//! Three scalable problems (a crash box, a layered beam in three-point
//! bending and a long crash tube with triggers) map a design vector in the
//! normalized box `[-5, 5]^d` onto a shell mesh, an explicit-solver input
//! deck and, through either an external solver or a closed-form mock, onto
//! crash responses and objective values.
//!
//! ```
//! use crashbench::{create_problem, ObjectiveKind, ProblemId, SolverMode};
//!
//! let p = create_problem(ProblemId::StarBox, 1, &[ObjectiveKind::Mass], SolverMode::Mock).unwrap();
//! assert_eq!(p.denormalize(&[0.0]).unwrap(), vec![90.0]);
//! let r = p.evaluate(&[0.0]).unwrap();
//! assert!((r.mass_kg - 0.7103).abs() < 1e-3);
//! ```

pub mod batch;
pub mod deck;
mod error;
pub mod harness;
pub mod mesh;
pub mod objectives;
pub mod parameterization;
pub mod post;
pub mod problem;
pub mod solver;

pub use batch::{evaluate_batch, evaluate_batch_sequential};
pub use error::{Error, ErrorCategory, Result};
pub use objectives::ObjectiveKind;
pub use problem::{create_problem, Bounds, EvaluationResult, ProblemId, ProblemInstance, RunSettings};
pub use solver::SolverMode;
