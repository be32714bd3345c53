//! Evaluation of many design points against one problem instance.
//!
//! Every evaluation owns its working directory, so points are independent
//! and results do not depend on scheduling: the parallel and sequential
//! paths return identical values in the same order.

use crate::error::Result;
use crate::problem::{EvaluationResult, ProblemInstance};

/// Evaluates all points, in parallel when the `parallel` feature is on.
pub fn evaluate_batch(problem: &ProblemInstance, points: &[Vec<f64>]) -> Vec<Result<EvaluationResult>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|x| problem.evaluate(x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        evaluate_batch_sequential(problem, points)
    }
}

pub fn evaluate_batch_sequential(problem: &ProblemInstance, points: &[Vec<f64>]) -> Vec<Result<EvaluationResult>> {
    points.iter().map(|x| problem.evaluate(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::ObjectiveKind;
    use crate::problem::{create_problem, ProblemId};
    use crate::solver::SolverMode;

    #[test]
    fn parallel_matches_sequential() {
        let p = create_problem(ProblemId::StarBox, 3, &ObjectiveKind::ALL, SolverMode::Mock).unwrap();
        let points: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64 - 4.0, 1.0, 4.0 - i as f64]).collect();
        let a = evaluate_batch(&p, &points);
        let b = evaluate_batch_sequential(&p, &points);
        for (ra, rb) in a.iter().zip(&b) {
            let (ra, rb) = (ra.as_ref().unwrap(), rb.as_ref().unwrap());
            assert_eq!(ra.raw, rb.raw);
            assert_eq!(ra.record.th, rb.record.th);
        }
    }
}
