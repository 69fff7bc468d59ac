//! Metric graphs: edges with smooth coefficients, the vertex partition of
//! interval endpoints, and the endpoint-local data that drives all spectral
//! criteria.
//!
//! Each edge carries the operator `a(s) D² + b(s) D + c(s)/((1−s)(1+s))` on
//! `[−1, 1]` with `D = −i ∂ₛ`. Near an endpoint the fixed linear charts
//! `x = 1 − s` (at `s = +1`) and `x = 1 + s` (at `s = −1`) bring it to the
//! form `a_q D_x² + b_q D_x + c_q(x)/x` with `a_q(0) = a(±1)` and
//! `c_q(0) = c(±1)/2`; these two numbers are all that the vertex-level
//! criteria consume. Boundary coefficients `(α, β)` of a maximal-domain
//! function are expressed in the basis `α(1 + (c_q/a_q)(0) x log x) + β x`
//! of these charts.

use num_complex::Complex64;
use thiserror::Error;

use crate::error::{Error as CrateError, Result};
use crate::polynomial::Polynomial;
use crate::sector::Sector;

/// Sampling tolerance for the ellipticity zero test.
pub(crate) const ZERO_TOL: f64 = 1e-12;
/// Chebyshev sampling intervals per edge (nodes = intervals + 1, so the grid
/// contains both endpoints and 0 exactly).
pub(crate) const ELLIPTICITY_SAMPLES: usize = 2048;

/// Which end of an edge an endpoint refers to: `s = −1` or `s = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn coordinate(&self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }
}

/// One of the `2N` boundary points of the disjoint union of edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EndpointId {
    pub edge: usize,
    pub side: Side,
}

impl std::fmt::Display for EndpointId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = match self.side {
            Side::Minus => '-',
            Side::Plus => '+',
        };
        write!(f, "e{}{}", self.edge, sign)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: usize,
    pub a: Polynomial,
    pub b: Polynomial,
    pub c: Polynomial,
}

impl Edge {
    pub fn new(id: usize, a: Polynomial, b: Polynomial, c: Polynomial) -> Self {
        Self { id, a, b, c }
    }

    /// Leading coefficient, endpoint potential value and their quotient in
    /// the endpoint chart: `a₀ = a(±1)`, `c₀ = c(±1)/2`.
    pub fn endpoint_data(&self, side: Side) -> Result<EndpointLocalData> {
        let s = side.coordinate();
        let a0 = self.a.eval(s);
        if a0.norm() <= ZERO_TOL {
            return Err(CrateError::EllipticityViolation { edge: self.id, s });
        }
        let c0 = self.c.eval(s) * 0.5;
        Ok(EndpointLocalData {
            a0,
            c0,
            log_slope: c0 / a0,
        })
    }

    /// Samples `a(s)` on a Chebyshev grid; fails with a witness where `a`
    /// vanishes (within tolerance) or, when a sector is given, where
    /// `a(s) ∈ Λ`. A sampling check, not a proof.
    pub fn check_ellipticity(&self, sector: Option<&Sector>) -> EllipticityReport {
        let m = ELLIPTICITY_SAMPLES;
        for i in 0..=m {
            let s = (std::f64::consts::PI * i as f64 / m as f64).cos();
            let value = self.a.eval(s);
            if value.norm() <= ZERO_TOL {
                return EllipticityReport {
                    pass: false,
                    witness: Some(EllipticityWitness {
                        s,
                        value,
                        in_sector: sector.map(|sec| sec.contains(value)).unwrap_or(false),
                    }),
                };
            }
            if let Some(sec) = sector {
                if sec.contains(value) {
                    return EllipticityReport {
                        pass: false,
                        witness: Some(EllipticityWitness {
                            s,
                            value,
                            in_sector: true,
                        }),
                    };
                }
            }
        }
        EllipticityReport {
            pass: true,
            witness: None,
        }
    }
}

/// Result of [`Edge::check_ellipticity`].
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticityReport {
    pub pass: bool,
    pub witness: Option<EllipticityWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticityWitness {
    /// Sample point where the check failed.
    pub s: f64,
    /// Value `a(s)` there.
    pub value: Complex64,
    /// Whether the failure was sector membership (as opposed to a zero).
    pub in_sector: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: usize,
    /// Endpoint order is fixed: it is the column order of coupling matrices.
    pub endpoints: Vec<EndpointId>,
}

impl Vertex {
    pub fn new(id: usize, endpoints: Vec<EndpointId>) -> Self {
        Self { id, endpoints }
    }

    pub fn k(&self) -> usize {
        self.endpoints.len()
    }
}

/// Endpoint-local data in the fixed chart: `a₀ ≠ 0`, `c₀`, and their exact
/// quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointLocalData {
    pub a0: Complex64,
    pub c0: Complex64,
    pub log_slope: Complex64,
}

/// Boundary coefficient pairs `(α_q, β_q)`, one per endpoint in a fixed
/// order (two complex dimensions per endpoint, `4N` in total over a graph).
#[derive(Debug, Clone, PartialEq)]
pub struct SingularCoordinates {
    pairs: Vec<(Complex64, Complex64)>,
}

impl SingularCoordinates {
    pub fn new(pairs: Vec<(Complex64, Complex64)>) -> Self {
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(Complex64, Complex64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn alphas(&self) -> Vec<Complex64> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn betas(&self) -> Vec<Complex64> {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

/// Structured findings of [`Graph::validate`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("edge id {id} appears more than once")]
    DuplicateEdgeId { id: usize },
    #[error("vertex id {id} appears more than once")]
    DuplicateVertexId { id: usize },
    #[error("vertex {vertex} has no endpoints")]
    EmptyVertex { vertex: usize },
    #[error("endpoint {endpoint} references an unknown edge")]
    UnknownEdge { endpoint: EndpointId },
    #[error("endpoint {endpoint} appears in more than one vertex")]
    DuplicateEndpoint { endpoint: EndpointId },
    #[error("endpoint {endpoint} is not assigned to any vertex")]
    MissingEndpoint { endpoint: EndpointId },
    #[error("edge {edge} has a non-finite coefficient")]
    NonFiniteCoefficient { edge: usize },
    #[error("ellipticity fails on edge {edge} at s = {s}")]
    EllipticityViolation { edge: usize, s: f64 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
}

impl Graph {
    pub fn new(edges: Vec<Edge>, vertices: Vec<Vertex>) -> Self {
        Self { edges, vertices }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_by_id(&self, id: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn vertex_by_id(&self, id: usize) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    /// All `2N` endpoints in edge order.
    pub fn endpoints(&self) -> impl Iterator<Item = EndpointId> + '_ {
        self.edges.iter().flat_map(|e| {
            [
                EndpointId { edge: e.id, side: Side::Minus },
                EndpointId { edge: e.id, side: Side::Plus },
            ]
        })
    }

    /// Checks the endpoint partition and samples ellipticity on every edge.
    /// Returns an empty list iff the graph is valid; never aborts.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen_edges = std::collections::HashSet::new();
        for e in &self.edges {
            if !seen_edges.insert(e.id) {
                out.push(Violation::DuplicateEdgeId { id: e.id });
            }
            if !(e.a.is_finite() && e.b.is_finite() && e.c.is_finite()) {
                out.push(Violation::NonFiniteCoefficient { edge: e.id });
                continue;
            }
            let rep = e.check_ellipticity(None);
            if let Some(w) = rep.witness {
                out.push(Violation::EllipticityViolation { edge: e.id, s: w.s });
            }
        }
        let mut seen_vertices = std::collections::HashSet::new();
        let mut assigned: std::collections::HashMap<EndpointId, usize> =
            std::collections::HashMap::new();
        for v in &self.vertices {
            if !seen_vertices.insert(v.id) {
                out.push(Violation::DuplicateVertexId { id: v.id });
            }
            if v.endpoints.is_empty() {
                out.push(Violation::EmptyVertex { vertex: v.id });
            }
            for &ep in &v.endpoints {
                if self.edge_by_id(ep.edge).is_none() {
                    out.push(Violation::UnknownEdge { endpoint: ep });
                    continue;
                }
                if assigned.insert(ep, v.id).is_some() {
                    out.push(Violation::DuplicateEndpoint { endpoint: ep });
                }
            }
        }
        for ep in self.endpoints() {
            if !assigned.contains_key(&ep) {
                out.push(Violation::MissingEndpoint { endpoint: ep });
            }
        }
        out
    }
}
