//! Lasso instance, primal/dual objectives and duality gap.
//!
//! The primal problem is `min_x ½‖y − Ax‖² + λ‖x‖₁` and its dual is
//! `max_u ½‖y‖² − ½‖y − u‖²` over the dual feasible set
//! `{u : ‖Aᵀu‖∞ ≤ λ}`.

use crate::error::{check_len, Error, Result};
use crate::linalg::{norm1, norm2_sq, norm_inf, Dictionary};

/// Relative slack used when deciding dual feasibility.
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-12;

/// A Lasso instance `(A, y, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LassoProblem {
    dictionary: Dictionary,
    observation: Vec<f64>,
    lambda: f64,
}

impl LassoProblem {
    pub fn new(dictionary: Dictionary, observation: Vec<f64>, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        check_len("observation", dictionary.nrows(), observation.len())?;
        Ok(Self {
            dictionary,
            observation,
            lambda,
        })
    }

    /// Same dictionary and observation with `λ = ratio · λ_max`.
    pub fn with_lambda_ratio(
        dictionary: Dictionary,
        observation: Vec<f64>,
        ratio: f64,
    ) -> Result<Self> {
        let lambda_max = norm_inf(&dictionary.matvec_t(&observation));
        Self::new(dictionary, observation, ratio * lambda_max)
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    pub fn observation(&self) -> &[f64] {
        &self.observation
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Number of rows `m`.
    pub fn m(&self) -> usize {
        self.dictionary.nrows()
    }

    /// Number of atoms `n`.
    pub fn n(&self) -> usize {
        self.dictionary.ncols()
    }

    pub(crate) fn check_primal(&self, x: &[f64]) -> Result<()> {
        check_len("primal point", self.n(), x.len())
    }

    pub(crate) fn check_dual(&self, u: &[f64]) -> Result<()> {
        check_len("dual point", self.m(), u.len())
    }

    /// `y − Ax`.
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_primal(x)?;
        let ax = self.dictionary.matvec(x);
        Ok(self
            .observation
            .iter()
            .zip(&ax)
            .map(|(y, v)| y - v)
            .collect())
    }

    pub fn primal_objective(&self, x: &[f64]) -> Result<f64> {
        let rho = self.residual(x)?;
        Ok(0.5 * norm2_sq(&rho) + self.lambda * norm1(x))
    }

    /// `½‖y‖² − ½‖y − u‖²`; feasibility of `u` is not checked.
    pub fn dual_objective(&self, u: &[f64]) -> Result<f64> {
        self.check_dual(u)?;
        Ok(dual_value(
            &self.observation,
            norm2_sq(&self.observation),
            u,
        ))
    }

    /// `P(x) − D(u)`; `u` must be dual feasible.
    pub fn duality_gap(&self, x: &[f64], u: &[f64]) -> Result<f64> {
        self.ensure_dual_feasible(u)?;
        Ok(self.primal_objective(x)? - self.dual_objective(u)?)
    }

    /// `‖Aᵀy‖∞`: for `λ ≥ λ_max` the zero vector is the unique solution.
    pub fn lambda_max(&self) -> f64 {
        norm_inf(&self.dictionary.matvec_t(&self.observation))
    }

    /// `‖Aᵀu‖∞ ≤ λ(1 + tol)`.
    pub fn is_dual_feasible(&self, u: &[f64], tol: f64) -> Result<bool> {
        self.check_dual(u)?;
        Ok(norm_inf(&self.dictionary.matvec_t(u)) <= self.lambda * (1.0 + tol))
    }

    pub(crate) fn ensure_dual_feasible(&self, u: &[f64]) -> Result<()> {
        self.check_dual(u)?;
        let norm = norm_inf(&self.dictionary.matvec_t(u));
        if norm <= self.lambda * (1.0 + DEFAULT_FEASIBILITY_TOL) {
            Ok(())
        } else {
            Err(Error::InfeasibleDual {
                norm,
                lambda: self.lambda,
            })
        }
    }

    /// Rescales the residual `ρ = y − Ax` into the dual feasible set:
    /// `u = ρ / max(1, ‖Aᵀρ‖∞ / λ)`.
    pub fn dual_scaling(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut rho = self.residual(x)?;
        let corr = norm_inf(&self.dictionary.matvec_t(&rho));
        let scale = dual_scale_factor(corr, self.lambda);
        if scale != 1.0 {
            rho.iter_mut().for_each(|v| *v /= scale);
        }
        Ok(rho)
    }
}

#[inline]
pub(crate) fn dual_scale_factor(corr_inf: f64, lambda: f64) -> f64 {
    (corr_inf / lambda).max(1.0)
}

/// Dual objective given `‖y‖²` precomputed.
#[inline]
pub(crate) fn dual_value(y: &[f64], y_norm_sq: f64, u: &[f64]) -> f64 {
    let diff_sq: f64 = {
        let mut acc = 0.0;
        for (yi, ui) in y.iter().zip(u) {
            let d = yi - ui;
            acc += d * d;
        }
        acc
    };
    0.5 * y_norm_sq - 0.5 * diff_sq
}

/// Proximal operator of `t‖·‖₁`: componentwise `sign(v)·max(|v| − t, 0)`.
pub fn soft_threshold(v: &[f64], t: f64) -> Vec<f64> {
    debug_assert!(t >= 0.0);
    v.iter().map(|&vi| soft_threshold_scalar(vi, t)).collect()
}

#[inline]
pub(crate) fn soft_threshold_scalar(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn toy(lambda: f64) -> LassoProblem {
        LassoProblem::new(Dictionary::identity(2), vec![1.0, 0.0], lambda).unwrap()
    }

    #[test]
    fn primal_objective_examples() {
        let p = toy(0.5);
        assert_abs_diff_eq!(
            p.primal_objective(&[0.0, 0.0]).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            p.primal_objective(&[0.5, 0.0]).unwrap(),
            0.375,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            p.primal_objective(&[0.4, 0.0]).unwrap(),
            0.38,
            epsilon = 1e-15
        );
        assert!(matches!(
            p.primal_objective(&[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dual_objective_examples() {
        let p = toy(0.5);
        assert_eq!(p.dual_objective(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(p.dual_objective(&[1.0, 0.0]).unwrap(), 0.5);
        assert_abs_diff_eq!(
            p.dual_objective(&[0.5, 0.0]).unwrap(),
            0.375,
            epsilon = 1e-15
        );
        assert!(p.dual_objective(&[0.0; 3]).is_err());
    }

    #[test]
    fn duality_gap_examples() {
        let p = toy(0.5);
        assert_abs_diff_eq!(
            p.duality_gap(&[0.0, 0.0], &[0.0, 0.0]).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            p.duality_gap(&[0.5, 0.0], &[0.5, 0.0]).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            p.duality_gap(&[0.4, 0.0], &[0.5, 0.0]).unwrap(),
            0.005,
            epsilon = 1e-15
        );
        assert!(matches!(
            p.duality_gap(&[0.0, 0.0], &[0.6, 0.0]),
            Err(Error::InfeasibleDual { .. })
        ));
    }

    #[test]
    fn lambda_max_examples() {
        assert_eq!(toy(0.5).lambda_max(), 1.0);
        let dup = Dictionary::from_columns(&[[1.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(
            LassoProblem::new(dup, vec![1.0, 0.0], 0.5)
                .unwrap()
                .lambda_max(),
            1.0
        );
        let skew = Dictionary::from_columns(&[[1.0, 0.0], [0.6, 0.8]]).unwrap();
        assert_eq!(
            LassoProblem::new(skew, vec![1.0, 0.0], 0.5)
                .unwrap()
                .lambda_max(),
            1.0
        );
    }

    #[test]
    fn feasibility_examples() {
        let p = toy(0.5);
        assert!(p.is_dual_feasible(&[0.5, 0.0], 0.0).unwrap());
        assert!(!p.is_dual_feasible(&[0.6, 0.0], 0.0).unwrap());
        assert!(p.is_dual_feasible(&[0.0, 0.0], 0.0).unwrap());
    }

    #[test]
    fn dual_scaling_examples() {
        let u = toy(0.5).dual_scaling(&[0.4, 0.0]).unwrap();
        assert_abs_diff_eq!(u[0], 0.5, epsilon = 1e-15);
        assert_eq!(u[1], 0.0);
        assert_eq!(toy(2.0).dual_scaling(&[0.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        // Ax = y gives a zero residual.
        assert_eq!(toy(0.5).dual_scaling(&[1.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(&[1.0, -0.3], 0.5), vec![0.5, 0.0]);
        assert_eq!(soft_threshold(&[0.0, 0.0], 1.0), vec![0.0, 0.0]);
        assert_eq!(soft_threshold(&[2.0, -2.0], 0.0), vec![2.0, -2.0]);
    }

    #[test]
    fn invalid_construction() {
        assert!(LassoProblem::new(Dictionary::identity(2), vec![1.0, 0.0], 0.0).is_err());
        assert!(LassoProblem::new(Dictionary::identity(2), vec![1.0], 1.0).is_err());
    }

    fn small_problem() -> impl Strategy<Value = (LassoProblem, Vec<f64>)> {
        (1usize..5, 1usize..6).prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(-2.0f64..2.0, m * n),
                prop::collection::vec(-2.0f64..2.0, m),
                prop::collection::vec(-2.0f64..2.0, n),
                0.05f64..3.0,
            )
                .prop_filter_map("degenerate dictionary", move |(a, y, x, lam)| {
                    let a = Dictionary::from_column_major(m, n, a).ok()?;
                    Some((LassoProblem::new(a, y, lam).ok()?, x))
                })
        })
    }

    proptest! {
        #[test]
        fn dual_scaling_is_feasible_and_gap_nonnegative((p, x) in small_problem()) {
            let u = p.dual_scaling(&x).unwrap();
            prop_assert!(p.is_dual_feasible(&u, 1e-12).unwrap());
            prop_assert!(p.duality_gap(&x, &u).unwrap() >= -1e-12);
            prop_assert!(p.primal_objective(&x).unwrap() >= 0.0);
        }

        #[test]
        fn scaling_at_zero_returns_y_above_lambda_max((p, _x) in small_problem()) {
            let lmax = p.lambda_max();
            prop_assume!(lmax > 0.0);
            let q = LassoProblem::new(p.dictionary().clone(), p.observation().to_vec(), lmax).unwrap();
            let zero = vec![0.0; q.n()];
            prop_assert_eq!(q.dual_scaling(&zero).unwrap(), q.observation().to_vec());
        }

        #[test]
        fn orthonormal_closed_form_is_optimal(
            y in prop::collection::vec(-2.0f64..2.0, 3),
            lam in 0.01f64..2.0,
            angle in 0.0f64..std::f64::consts::TAU,
        ) {
            // rotation in the first two coordinates, identity in the third
            let (s, c) = angle.sin_cos();
            let a = Dictionary::from_columns(&[[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]).unwrap();
            let p = LassoProblem::new(a, y, lam).unwrap();
            let x = soft_threshold(&p.dictionary().matvec_t(p.observation()), lam);
            let u = p.residual(&x).unwrap();
            prop_assert!(p.is_dual_feasible(&u, 1e-12).unwrap());
            prop_assert!(p.duality_gap(&x, &u).unwrap().abs() <= 1e-12);
        }
    }
}
