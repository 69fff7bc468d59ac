//! The frozen-coefficient model operator `⊕_q a_q(0) D_x²` on half-lines at
//! a vertex: background spectrum and its open sector components, the
//! determinant spectrum test `det(C − C′Δ(λ)) = 0`, the δ-type eigenvalue
//! equation, sign functions across sector components, and spectral design
//! of couplings realizing a prescribed pattern of sector spectra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coupling::CouplingCondition;
use crate::error::{Error, Result};
use crate::graph::{Graph, SingularCoordinates, Vertex};
use crate::linalg::{self, CMat};
use crate::sector::{angular_distance, wrap_angle, OpenSector, TAU};

/// Angular tolerance for membership on a background ray.
pub const RAY_ANGLE_TOL: f64 = 1e-12;
/// Relative determinant threshold declaring an eigenvalue.
pub const DET_TOL_REL: f64 = 1e-9;
/// Newton polishing defaults for determinant roots.
pub const NEWTON_MAX_ITERS: usize = 50;
pub const NEWTON_RESIDUAL_REL: f64 = 1e-12;

/// Square root of `−λ/a` with positive real part. Fails when `λ` lies on the
/// closed ray `a·[0, ∞)` (within [`RAY_ANGLE_TOL`]), where no such root
/// exists.
pub fn principal_root(lambda: Complex64, a: Complex64) -> Result<Complex64> {
    let z = -lambda / a;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::OnBackgroundRay { lambda });
    }
    if z.norm() == 0.0 || angular_distance(z.arg(), std::f64::consts::PI) <= RAY_ANGLE_TOL {
        return Err(Error::OnBackgroundRay { lambda });
    }
    Ok(z.sqrt())
}

/// Per-vertex data of the model operator: the endpoint leading coefficients
/// `a_q(0)` in endpoint order, their deduplicated normalized directions
/// sorted by argument, and the endpoint → direction grouping.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelVertexData {
    vertex: usize,
    a0: Vec<Complex64>,
    directions: Vec<Complex64>,
    group_of: Vec<usize>,
}

impl ModelVertexData {
    pub fn new(vertex: usize, a0: Vec<Complex64>) -> Result<Self> {
        for (i, a) in a0.iter().enumerate() {
            if a.norm() == 0.0 || !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::ZeroLeadingCoefficient {
                    vertex,
                    endpoint: i,
                });
            }
        }
        let mut order: Vec<(f64, usize)> = a0
            .iter()
            .enumerate()
            .map(|(i, a)| (wrap_angle(a.arg()), i))
            .collect();
        order.sort_by(|x, y| x.partial_cmp(y).expect("finite angles"));

        let mut directions: Vec<Complex64> = Vec::new();
        let mut rep_angles: Vec<f64> = Vec::new();
        let mut group_of = vec![0usize; a0.len()];
        for &(angle, idx) in &order {
            let group = match rep_angles.last() {
                Some(&last) if angle - last <= RAY_ANGLE_TOL => rep_angles.len() - 1,
                _ => {
                    rep_angles.push(angle);
                    directions.push(a0[idx] / a0[idx].norm());
                    rep_angles.len() - 1
                }
            };
            group_of[idx] = group;
        }
        // merge a group hugging 2π into the one at 0
        if rep_angles.len() > 1 {
            let first = rep_angles[0];
            let last = *rep_angles.last().unwrap();
            if TAU - last + first <= RAY_ANGLE_TOL {
                let dropped = rep_angles.len() - 1;
                directions.pop();
                rep_angles.pop();
                for g in group_of.iter_mut() {
                    if *g == dropped {
                        *g = 0;
                    }
                }
            }
        }
        Ok(Self {
            vertex,
            a0,
            directions,
            group_of,
        })
    }

    /// Freezes the graph operator at a vertex via the endpoint-local data of
    /// each of its endpoints.
    pub fn from_graph(g: &Graph, vertex: &Vertex) -> Result<Self> {
        let mut a0 = Vec::with_capacity(vertex.k());
        for ep in &vertex.endpoints {
            let edge = g.edge_by_id(ep.edge).ok_or(Error::InvalidInput {
                problems: vec![format!("endpoint {ep} references an unknown edge")],
            })?;
            a0.push(edge.endpoint_data(ep.side)?.a0);
        }
        Self::new(vertex.id, a0)
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    /// Number of endpoints (half-lines) at the vertex.
    pub fn k(&self) -> usize {
        self.a0.len()
    }

    pub fn a0(&self) -> &[Complex64] {
        &self.a0
    }

    /// Deduplicated unit directions of the background rays, argument-sorted.
    pub fn directions(&self) -> &[Complex64] {
        &self.directions
    }

    pub fn n_directions(&self) -> usize {
        self.directions.len()
    }

    pub fn group_of(&self, endpoint: usize) -> usize {
        self.group_of[endpoint]
    }

    fn lambda_on_ray(&self, lambda: Complex64) -> bool {
        if lambda.norm() == 0.0 {
            return true;
        }
        let arg = lambda.arg();
        self.directions
            .iter()
            .any(|d| angular_distance(arg, d.arg()) <= RAY_ANGLE_TOL)
    }
}

/// The diagonal matrix `Δ(λ)` with entries `√(−λ/a_q(0))`, all chosen with
/// positive real part.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMatrix {
    diag: Vec<Complex64>,
}

impl DeltaMatrix {
    pub fn new(v: &ModelVertexData, lambda: Complex64) -> Result<Self> {
        let diag = v
            .a0
            .iter()
            .map(|&a| principal_root(lambda, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { diag })
    }

    pub fn diagonal(&self) -> &[Complex64] {
        &self.diag
    }

    pub(crate) fn as_matrix(&self) -> CMat {
        CMat::from_diagonal(&DVector::from_vec(self.diag.clone()))
    }
}

/// The background spectrum: deduplicated unit ray directions
/// `a_q(0)/|a_q(0)|`.
pub fn background_spectrum(v: &ModelVertexData) -> Vec<Complex64> {
    v.directions.clone()
}

/// The open angular components of the background resolvent set, indexed by
/// the ray they start at; the last one wraps past 2π.
pub fn bgres_sectors(v: &ModelVertexData) -> Vec<OpenSector> {
    let n = v.n_directions();
    let angles: Vec<f64> = v.directions.iter().map(|d| wrap_angle(d.arg())).collect();
    (0..n)
        .map(|j| {
            let lo = angles[j];
            let hi = if j + 1 < n { angles[j + 1] } else { angles[0] + TAU };
            OpenSector::new(lo, hi).expect("consecutive ray angles")
        })
        .collect()
}

/// Where `λ` sits relative to the model operator with coupling `cc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InBgSpec,
    Eigenvalue,
    Resolvent,
}

fn membership_matrix(
    v: &ModelVertexData,
    cc: &CouplingCondition,
    lambda: Complex64,
) -> Result<CMat> {
    let delta = DeltaMatrix::new(v, lambda)?;
    Ok(cc.c() - cc.c_prime() * delta.as_matrix())
}

/// Classifies `λ`: on a background ray, an eigenvalue of the determinant
/// test `det(C − C′Δ(λ)) = 0` (relative tolerance [`DET_TOL_REL`]), or in
/// the resolvent set.
pub fn spectrum_membership(
    v: &ModelVertexData,
    cc: &CouplingCondition,
    lambda: Complex64,
) -> Membership {
    if v.lambda_on_ray(lambda) {
        return Membership::InBgSpec;
    }
    let m = match membership_matrix(v, cc, lambda) {
        Ok(m) => m,
        Err(_) => return Membership::InBgSpec,
    };
    let det = linalg::determinant(&m);
    if det.norm() <= DET_TOL_REL * linalg::det_scale(&m) {
        Membership::Eigenvalue
    } else {
        Membership::Resolvent
    }
}

/// Spectrum of a δ-type condition inside one background sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectorSpectrum {
    Empty,
    Point(Complex64),
    Whole,
}

/// Solves the δ-type eigenvalue equation `Σ c′_q √(−λ/a_q(0)) = ν` on one
/// open background sector exactly: the sum reduces to a single holomorphic
/// square root there, so the sector spectrum is empty, one point, or the
/// whole sector (the latter only for `ν = 0`).
pub fn delta_spectrum(
    v: &ModelVertexData,
    nu: Complex64,
    cprime: &[Complex64],
    sector: &OpenSector,
) -> Result<SectorSpectrum> {
    let k = v.k();
    if cprime.len() != k {
        return Err(Error::DimensionMismatch {
            context: "c' entries per endpoint",
            expected: k,
            found: cprime.len(),
        });
    }
    let zero = |z: &Complex64| z.re == 0.0 && z.im == 0.0;
    if zero(&nu) && cprime.iter().all(zero) {
        return Err(Error::AllZeroParameters);
    }
    for d in v.directions() {
        if sector.contains(*d) {
            return Err(Error::InvalidSector {
                reason: format!(
                    "background ray at angle {} rad lies inside the sector",
                    wrap_angle(d.arg())
                ),
            });
        }
    }
    let anchor = Complex64::from_polar(1.0, sector.bisector());
    let roots_at_anchor: Vec<Complex64> = v
        .a0
        .iter()
        .map(|&a| principal_root(anchor, a))
        .collect::<Result<Vec<_>>>()?;
    let sum: Complex64 = cprime
        .iter()
        .zip(&roots_at_anchor)
        .map(|(c, r)| c * r)
        .sum();
    let scale: f64 = cprime
        .iter()
        .zip(&roots_at_anchor)
        .map(|(c, r)| c.norm() * r.norm())
        .sum();
    if sum.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        // the weighted root sum vanishes identically on the sector
        return Ok(if zero(&nu) {
            SectorSpectrum::Whole
        } else {
            SectorSpectrum::Empty
        });
    }
    if zero(&nu) {
        return Ok(SectorSpectrum::Empty);
    }
    // unique algebraic candidate; valid iff it lands in the sector with the
    // positive-real-part branches reproducing ν
    let lambda_p = nu * nu * anchor / (sum * sum);
    if !sector.contains(lambda_p) {
        return Ok(SectorSpectrum::Empty);
    }
    let residual: Complex64 = cprime
        .iter()
        .zip(v.a0.iter())
        .map(|(c, &a)| c * principal_root(lambda_p, a).unwrap_or(Complex64::new(0.0, 0.0)))
        .sum::<Complex64>()
        - nu;
    if residual.norm() <= 1e-9 * (nu.norm() + scale * lambda_p.norm().sqrt()) {
        Ok(SectorSpectrum::Point(lambda_p))
    } else {
        Ok(SectorSpectrum::Empty)
    }
}

/// Square-root branches `√(a_j⁰)` of the unit directions, anchored so that
/// the single analytic root continues correctly across sector `j`: the
/// first direction takes the principal branch and every other branch is
/// pinned by evaluation at the bisector of its own sector.
fn direction_sqrt_branches(v: &ModelVertexData, sectors: &[OpenSector]) -> Vec<Complex64> {
    let dirs = v.directions();
    let s1 = dirs[0].sqrt();
    (0..dirs.len())
        .map(|j| {
            let lam = Complex64::from_polar(1.0, sectors[j].bisector());
            let r1 = principal_root(lam, dirs[0]).expect("bisector avoids rays");
            let rj = principal_root(lam, dirs[j]).expect("bisector avoids rays");
            s1 * r1 / rj
        })
        .collect()
}

/// The `n_p × n_p` sign table `ε_j(Λ_ℓ)`: each entry is obtained by
/// evaluating the quotient of anchored roots at the bisector of `Λ_ℓ` and
/// extracting its sign. The result is `+1` on and below the diagonal and
/// `−1` above it.
pub fn epsilon_matrix(v: &ModelVertexData) -> DMatrix<i32> {
    let sectors = bgres_sectors(v);
    let n = sectors.len();
    let branches = direction_sqrt_branches(v, &sectors);
    let dirs = v.directions();
    DMatrix::from_fn(n, n, |ell, j| {
        let lam = Complex64::from_polar(1.0, sectors[ell].bisector());
        let num = branches[j] * principal_root(lam, dirs[j]).expect("bisector avoids rays");
        let den = branches[0] * principal_root(lam, dirs[0]).expect("bisector avoids rays");
        let value = num / den;
        if value.re >= 0.0 {
            1
        } else {
            -1
        }
    })
}

/// Designs a δ-type condition (`ν = 0`) whose model spectrum covers exactly
/// the targeted background sectors (0-based indices) and is empty on the
/// rest. The construction solves the ±1 sign system for the targeted
/// pattern and distributes the resulting weights over one representative
/// endpoint per ray direction; the returned condition is self-verified by
/// sampling five interior points of every sector.
pub fn design_coupling(v: &ModelVertexData, target: &[usize]) -> Result<CouplingCondition> {
    let k = v.k();
    let np = v.n_directions();
    for &t in target {
        if t >= np {
            return Err(Error::UnknownSector {
                index: t,
                count: np,
            });
        }
    }
    let target: std::collections::BTreeSet<usize> = target.iter().copied().collect();
    if target.len() >= k {
        return Err(Error::TargetTooLarge {
            requested: target.len(),
            k,
        });
    }
    let sectors = bgres_sectors(v);
    let eps = epsilon_matrix(v);
    let eps_f = DMatrix::<f64>::from_fn(np, np, |i, j| eps[(i, j)] as f64);
    let rhs = DVector::<f64>::from_fn(np, |i, _| if target.contains(&i) { 0.0 } else { 1.0 });
    let y = eps_f.lu().solve(&rhs).ok_or(Error::RankDeficient)?;
    let branches = direction_sqrt_branches(v, &sectors);
    let weights: Vec<Complex64> = (0..np).map(|j| branches[j] * y[j]).collect();

    let mut cprime = vec![Complex64::new(0.0, 0.0); k];
    for j in 0..np {
        let members: Vec<usize> = (0..k).filter(|&q| v.group_of(q) == j).collect();
        if weights[j].norm() > 1e-12 {
            let q = members[0];
            cprime[q] = weights[j] * v.a0[q].norm().sqrt();
        } else if members.len() >= 2 {
            // zero weight on a shared ray: realize it with a cancelling pair
            cprime[members[0]] = Complex64::new(v.a0[members[0]].norm().sqrt(), 0.0);
            cprime[members[1]] = Complex64::new(-v.a0[members[1]].norm().sqrt(), 0.0);
        }
    }
    if cprime.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::AllZeroParameters);
    }
    let cc = CouplingCondition::delta_type(v.vertex, Complex64::new(0.0, 0.0), &cprime)?;

    for (ell, sec) in sectors.iter().enumerate() {
        let want_eigenvalue = target.contains(&ell);
        for lambda in sec.interior_points(5) {
            let got = spectrum_membership(v, &cc, lambda);
            let ok = match got {
                Membership::Eigenvalue => want_eigenvalue,
                Membership::Resolvent => !want_eigenvalue,
                Membership::InBgSpec => false,
            };
            if !ok {
                return Err(Error::VerificationFailed {
                    details: format!(
                        "sector {} at lambda = {lambda}: expected {}, found {got:?}",
                        ell + 1,
                        if want_eigenvalue { "Eigenvalue" } else { "Resolvent" },
                    ),
                });
            }
        }
    }
    Ok(cc)
}

/// The identification of graph-side boundary coefficients with model-side
/// ones: the identity on `(α, β)`. The same matrices `(C | C′)` therefore
/// define both the graph domain and the model domain.
pub fn theta_p(u: &SingularCoordinates) -> SingularCoordinates {
    u.clone()
}

/// Newton-polishes a root of `λ ↦ det(C − C′Δ(λ))` starting from `lambda0`.
/// Returns the polished root when the residual drops below
/// `residual_rel · Π max(1, ‖row‖)` within `max_iters` iterations.
pub fn polish_eigenvalue(
    v: &ModelVertexData,
    cc: &CouplingCondition,
    lambda0: Complex64,
    max_iters: usize,
    residual_rel: f64,
) -> Option<Complex64> {
    let f = |lam: Complex64| -> Option<(Complex64, f64)> {
        let m = membership_matrix(v, cc, lam).ok()?;
        Some((linalg::determinant(&m), linalg::det_scale(&m)))
    };
    let mut lam = lambda0;
    for _ in 0..max_iters {
        let (val, scale) = f(lam)?;
        if val.norm() <= residual_rel * scale {
            return Some(lam);
        }
        let h = 1e-7 * lam.norm().max(1.0);
        let (fp, _) = f(lam + Complex64::new(h, 0.0))?;
        let (fm, _) = f(lam - Complex64::new(h, 0.0))?;
        let deriv = (fp - fm) / Complex64::new(2.0 * h, 0.0);
        if deriv.norm() == 0.0 {
            return None;
        }
        let step = val / deriv;
        lam -= step;
        if !lam.re.is_finite() || !lam.im.is_finite() {
            return None;
        }
        if step.norm() <= 1e-16 * lam.norm().max(1.0) {
            break;
        }
    }
    let (val, scale) = f(lam)?;
    (val.norm() <= residual_rel * scale).then_some(lam)
}

/// All confirmed eigenvalues of the model operator inside one background
/// sector. On the sector `Δ(λ) = w(λ)·diag(1/√a_q)` for a single analytic
/// root `w`, so `det(C − C′Δ)` is a polynomial of degree ≤ k in `w`; its
/// roots seed Newton polishing on the full determinant and survivors are
/// confirmed by the membership test.
pub fn sector_eigenvalues(
    v: &ModelVertexData,
    cc: &CouplingCondition,
    sector: &OpenSector,
) -> Vec<Complex64> {
    sector_eigenvalues_with(v, cc, sector, NEWTON_MAX_ITERS, NEWTON_RESIDUAL_REL)
}

pub fn sector_eigenvalues_with(
    v: &ModelVertexData,
    cc: &CouplingCondition,
    sector: &OpenSector,
    max_iters: usize,
    residual_rel: f64,
) -> Vec<Complex64> {
    let k = v.k();
    let anchor = Complex64::from_polar(1.0, sector.bisector());
    let w_anchor = (-anchor).sqrt();
    let branch: Vec<Complex64> = match v
        .a0
        .iter()
        .map(|&a| principal_root(anchor, a).map(|r| w_anchor / r))
        .collect::<Result<Vec<_>>>()
    {
        Ok(b) => b,
        Err(_) => return Vec::new(),
    };
    let dmat = CMat::from_fn(k, k, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0) / branch[j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let poly = linalg::interpolate_polynomial(
        |w| linalg::determinant(&(cc.c() - cc.c_prime() * &dmat * w)),
        k,
    );
    let mut out: Vec<Complex64> = Vec::new();
    for w in linalg::polynomial_roots(&poly) {
        let candidate = -w * w;
        if !sector.contains(candidate) {
            continue;
        }
        let Some(lam) = polish_eigenvalue(v, cc, candidate, max_iters, residual_rel) else {
            continue;
        };
        if !sector.contains(lam) || spectrum_membership(v, cc, lam) != Membership::Eigenvalue {
            continue;
        }
        if out.iter().all(|&seen| (seen - lam).norm() > 1e-8 * lam.norm().max(1.0)) {
            out.push(lam);
        }
    }
    out.sort_by(|a, b| {
        (a.norm(), a.arg())
            .partial_cmp(&(b.norm(), b.arg()))
            .expect("finite eigenvalues")
    });
    out
}
