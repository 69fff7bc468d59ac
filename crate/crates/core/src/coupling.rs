//! Vertex coupling conditions `(C | C′)` on the boundary coefficients
//! `(α, β)`, their GL(k) equivalence, admissibility, and the δ-type family
//! (continuity of α plus one weighted condition on β).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Graph, SingularCoordinates};
use crate::linalg::{self, CMat};

/// Relative singular-value threshold below which a direction counts as zero
/// for rank decisions.
pub const RANK_TOL_REL: f64 = 1e-10;
/// Projector-distance tolerance for row-space equality.
pub const EQUIV_TOL: f64 = 1e-10;

/// Parameters of a δ-type condition: `k − 1` continuity rows `α_i = α_{i+1}`
/// and one row `ν α₁ + Σ c′_j β_j = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaParams {
    pub nu: Complex64,
    pub cprime: Vec<Complex64>,
}

/// A `k × 2k` coupling condition at one vertex, stored as the two square
/// blocks. Columns follow the vertex's endpoint order.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingCondition {
    vertex: usize,
    c: CMat,
    c_prime: CMat,
    delta: Option<DeltaParams>,
}

impl CouplingCondition {
    pub fn new(vertex: usize, c: DMatrix<Complex64>, c_prime: DMatrix<Complex64>) -> Result<Self> {
        let k = c.nrows();
        if c.ncols() != k {
            return Err(Error::DimensionMismatch {
                context: "C block must be square",
                expected: k,
                found: c.ncols(),
            });
        }
        if c_prime.nrows() != k || c_prime.ncols() != k {
            return Err(Error::DimensionMismatch {
                context: "C' block must match C",
                expected: k,
                found: c_prime.nrows().max(c_prime.ncols()),
            });
        }
        Ok(Self {
            vertex,
            c,
            c_prime,
            delta: None,
        })
    }

    /// Builds the δ-type condition for `k = cprime.len()` endpoints.
    /// The parameter vector `(ν, c′₁, …, c′_k)` must not vanish entirely.
    pub fn delta_type(vertex: usize, nu: Complex64, cprime: &[Complex64]) -> Result<Self> {
        let k = cprime.len();
        if k == 0 {
            return Err(Error::DimensionMismatch {
                context: "delta-type condition needs at least one endpoint",
                expected: 1,
                found: 0,
            });
        }
        let zero = |z: &Complex64| z.re == 0.0 && z.im == 0.0;
        if zero(&nu) && cprime.iter().all(zero) {
            return Err(Error::AllZeroParameters);
        }
        let mut c = CMat::zeros(k, k);
        let mut cp = CMat::zeros(k, k);
        for i in 0..k.saturating_sub(1) {
            c[(i, i)] = Complex64::new(1.0, 0.0);
            c[(i, i + 1)] = Complex64::new(-1.0, 0.0);
        }
        c[(k - 1, 0)] = nu;
        for j in 0..k {
            cp[(k - 1, j)] = cprime[j];
        }
        Ok(Self {
            vertex,
            c,
            c_prime: cp,
            delta: Some(DeltaParams {
                nu,
                cprime: cprime.to_vec(),
            }),
        })
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn k(&self) -> usize {
        self.c.nrows()
    }

    pub fn c(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn c_prime(&self) -> &DMatrix<Complex64> {
        &self.c_prime
    }

    /// δ-type parameters when the condition was built by [`Self::delta_type`].
    pub fn delta_params(&self) -> Option<&DeltaParams> {
        self.delta.as_ref()
    }

    /// The `k × 2k` matrix `(C | C′)`.
    pub fn stacked(&self) -> DMatrix<Complex64> {
        let k = self.k();
        DMatrix::from_fn(k, 2 * k, |i, j| {
            if j < k {
                self.c[(i, j)]
            } else {
                self.c_prime[(i, j - k)]
            }
        })
    }

    /// Surjectivity of the boundary map: numerical rank of `(C | C′)` equals
    /// `k`.
    pub fn is_admissible(&self) -> bool {
        self.is_admissible_with(RANK_TOL_REL)
    }

    pub fn is_admissible_with(&self, rank_tol_rel: f64) -> bool {
        linalg::numerical_rank(&self.stacked(), rank_tol_rel) == self.k()
    }

    /// Row spaces of `(C | C′)` coincide, i.e. one condition is the other
    /// multiplied on the left by an invertible matrix.
    pub fn is_equivalent_to(&self, other: &Self) -> Result<bool> {
        if self.k() != other.k() {
            return Err(Error::DimensionMismatch {
                context: "coupling conditions have different k",
                expected: self.k(),
                found: other.k(),
            });
        }
        let p1 = linalg::row_space_projector(&self.stacked(), RANK_TOL_REL);
        let p2 = linalg::row_space_projector(&other.stacked(), RANK_TOL_REL);
        Ok(linalg::spectral_norm(&(p1 - p2)) <= EQUIV_TOL)
    }

    /// Applies the condition: `C·α + C′·β`. The coordinates must list one
    /// `(α, β)` pair per endpoint of the vertex, in order; the result is
    /// zero iff the coordinates satisfy the condition.
    pub fn apply(&self, u: &SingularCoordinates) -> Result<DVector<Complex64>> {
        let k = self.k();
        if u.len() != k {
            return Err(Error::DimensionMismatch {
                context: "coordinate pairs per endpoint",
                expected: k,
                found: u.len(),
            });
        }
        let alpha = DVector::from_vec(u.alphas());
        let beta = DVector::from_vec(u.betas());
        Ok(&self.c * alpha + &self.c_prime * beta)
    }
}

/// One admissible condition per vertex; the block-diagonal assembly over a
/// graph (total row count `Σ k_p = 2N`).
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCoupling {
    pub conditions: Vec<CouplingCondition>,
}

impl GraphCoupling {
    pub fn new(conditions: Vec<CouplingCondition>) -> Self {
        Self { conditions }
    }

    pub fn condition_for(&self, vertex_id: usize) -> Option<&CouplingCondition> {
        self.conditions.iter().find(|c| c.vertex == vertex_id)
    }

    /// Coverage, dimension and admissibility problems relative to `g`,
    /// rendered as messages. Empty iff the coupling is usable with `g`.
    pub fn validate_against(&self, g: &Graph, rank_tol_rel: f64) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for cc in &self.conditions {
            if !seen.insert(cc.vertex) {
                out.push(format!("vertex {} has more than one coupling condition", cc.vertex));
                continue;
            }
            match g.vertex_by_id(cc.vertex) {
                None => out.push(format!("coupling references unknown vertex {}", cc.vertex)),
                Some(v) => {
                    if v.k() != cc.k() {
                        out.push(format!(
                            "vertex {}: coupling is {}x{} but the vertex has {} endpoints",
                            cc.vertex,
                            cc.k(),
                            2 * cc.k(),
                            v.k()
                        ));
                    } else if !cc.is_admissible_with(rank_tol_rel) {
                        out.push(format!(
                            "vertex {}: coupling condition is not admissible (rank < k)",
                            cc.vertex
                        ));
                    }
                }
            }
        }
        for v in &g.vertices {
            if !seen.contains(&v.id) {
                out.push(format!("vertex {} has no coupling condition", v.id));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar_condition(c: f64, cp: f64) -> CouplingCondition {
        CouplingCondition::new(
            0,
            CMat::from_element(1, 1, c64(c, 0.0)),
            CMat::from_element(1, 1, c64(cp, 0.0)),
        )
        .unwrap()
    }

    #[test]
    fn dirichlet_is_admissible() {
        let cc = CouplingCondition::new(0, CMat::identity(2, 2), CMat::zeros(2, 2)).unwrap();
        assert!(cc.is_admissible());
    }

    #[test]
    fn zero_condition_is_not_admissible() {
        let cc = CouplingCondition::new(0, CMat::zeros(1, 1), CMat::zeros(1, 1)).unwrap();
        assert!(!cc.is_admissible());
    }

    #[test]
    fn kirchhoff_three_is_admissible() {
        let ones = vec![c64(1.0, 0.0); 3];
        let cc = CouplingCondition::delta_type(0, c64(0.0, 0.0), &ones).unwrap();
        assert!(cc.is_admissible());
        assert_eq!(cc.k(), 3);
    }

    #[test]
    fn equivalence_examples() {
        let a = scalar_condition(1.0, 1.0);
        let b = scalar_condition(2.0, 2.0);
        assert!(a.is_equivalent_to(&b).unwrap());
        let dirichlet = scalar_condition(1.0, 0.0);
        let neumann = scalar_condition(0.0, 1.0);
        assert!(!dirichlet.is_equivalent_to(&neumann).unwrap());
    }

    #[test]
    fn apply_dirichlet_returns_alphas() {
        let cc = CouplingCondition::new(0, CMat::identity(2, 2), CMat::zeros(2, 2)).unwrap();
        let u = SingularCoordinates::new(vec![
            (c64(1.0, 0.0), c64(5.0, 0.0)),
            (c64(2.0, 0.0), c64(7.0, 0.0)),
        ]);
        let r = cc.apply(&u).unwrap();
        assert_eq!(r[0], c64(1.0, 0.0));
        assert_eq!(r[1], c64(2.0, 0.0));
    }

    #[test]
    fn apply_kirchhoff_kernel_element() {
        let cc =
            CouplingCondition::delta_type(0, c64(0.0, 0.0), &[c64(1.0, 0.0), c64(1.0, 0.0)])
                .unwrap();
        let u = SingularCoordinates::new(vec![
            (c64(1.0, 0.0), c64(3.0, 0.0)),
            (c64(1.0, 0.0), c64(-3.0, 0.0)),
        ]);
        let r = cc.apply(&u).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn apply_scalar_robin() {
        let cc = scalar_condition(1.0, 1.0);
        let u = SingularCoordinates::new(vec![(c64(1.0, 0.0), c64(-1.0, 0.0))]);
        assert!(cc.apply(&u).unwrap().norm() < 1e-15);
    }

    #[test]
    fn delta_type_matches_layout() {
        // k = 3, ν = 2, c′ = (1, 0, 1)
        let cc = CouplingCondition::delta_type(
            0,
            c64(2.0, 0.0),
            &[c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)],
        )
        .unwrap();
        let c = cc.c();
        let cp = cc.c_prime();
        assert_eq!(c[(0, 0)], c64(1.0, 0.0));
        assert_eq!(c[(0, 1)], c64(-1.0, 0.0));
        assert_eq!(c[(1, 1)], c64(1.0, 0.0));
        assert_eq!(c[(1, 2)], c64(-1.0, 0.0));
        assert_eq!(c[(2, 0)], c64(2.0, 0.0));
        assert_eq!(cp[(2, 0)], c64(1.0, 0.0));
        assert_eq!(cp[(2, 1)], c64(0.0, 0.0));
        assert_eq!(cp[(2, 2)], c64(1.0, 0.0));
        assert!(cp.row(0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn delta_type_scalar() {
        let cc = CouplingCondition::delta_type(0, c64(1.0, 0.0), &[c64(1.0, 0.0)]).unwrap();
        assert_eq!(cc.c()[(0, 0)], c64(1.0, 0.0));
        assert_eq!(cc.c_prime()[(0, 0)], c64(1.0, 0.0));
    }

    #[test]
    fn delta_type_rejects_all_zero() {
        assert_eq!(
            CouplingCondition::delta_type(0, c64(0.0, 0.0), &[c64(0.0, 0.0); 2]),
            Err(Error::AllZeroParameters)
        );
    }

    fn matrix_strategy(k: usize) -> impl Strategy<Value = CMat> {
        proptest::collection::vec(
            (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c64(re, im)),
            k * k,
        )
        .prop_map(move |v| CMat::from_vec(k, k, v))
    }

    fn invertible_strategy(k: usize) -> impl Strategy<Value = CMat> {
        matrix_strategy(k).prop_filter("invertible", |m| {
            linalg::numerical_rank(m, 1e-6) == m.nrows()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn equivalence_closed_under_left_multiplication(
            c in matrix_strategy(3),
            cp in matrix_strategy(3),
            m in invertible_strategy(3),
        ) {
            let cc = CouplingCondition::new(0, c.clone(), cp.clone()).unwrap();
            prop_assume!(cc.is_admissible());
            let mc = CouplingCondition::new(0, &m * &c, &m * &cp).unwrap();
            // reflexive, symmetric, and stable under the GL action
            prop_assert!(cc.is_equivalent_to(&cc).unwrap());
            prop_assert!(cc.is_equivalent_to(&mc).unwrap());
            prop_assert!(mc.is_equivalent_to(&cc).unwrap());
        }

        #[test]
        fn apply_is_left_equivariant(
            c in matrix_strategy(2),
            cp in matrix_strategy(2),
            m in invertible_strategy(2),
            coords in proptest::collection::vec(
                ((-1.0f64..1.0, -1.0f64..1.0), (-1.0f64..1.0, -1.0f64..1.0)),
                2,
            ),
        ) {
            let cc = CouplingCondition::new(0, c.clone(), cp.clone()).unwrap();
            prop_assume!(cc.is_admissible());
            let mc = CouplingCondition::new(0, &m * &c, &m * &cp).unwrap();
            let u = SingularCoordinates::new(
                coords
                    .into_iter()
                    .map(|((ar, ai), (br, bi))| (c64(ar, ai), c64(br, bi)))
                    .collect(),
            );
            let lhs = mc.apply(&u).unwrap();
            let rhs = &m * cc.apply(&u).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn delta_type_is_admissible_for_nonzero_parameters(
            nu in (-1.0f64..1.0, -1.0f64..1.0),
            cps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
        ) {
            let nu = c64(nu.0, nu.1);
            let cprime: Vec<Complex64> = cps.into_iter().map(|(re, im)| c64(re, im)).collect();
            prop_assume!(nu.norm() > 1e-3 || cprime.iter().any(|z| z.norm() > 1e-3));
            let cc = CouplingCondition::delta_type(0, nu, &cprime).unwrap();
            prop_assert!(cc.is_admissible());
        }
    }
}
