//! The dilation flow `u ↦ ρ^{1/2} u(ρ·)` acting on coupling matrices as
//! `(C | C′) ↦ (C | ρ⁻¹C′)`, its ρ → 0 limit (the limiting domain), a
//! projector metric on coupling classes, and the per-vertex certification
//! determinant for sectors of minimal growth.

use num_complex::Complex64;

use crate::coupling::{CouplingCondition, RANK_TOL_REL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::ModelVertexData;
use crate::sector::{wrap_angle, Sector};

/// Relative threshold for certifying `det S ≠ 0`.
pub const DET_TOL_REL: f64 = 1e-9;

/// The ρ → 0 limit of the dilation flow through an admissible condition:
/// `ell` rows carry only the `C′` block (of full row rank) and the rest
/// carry only the `C` block.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitingDomain {
    ell: usize,
    condition: CouplingCondition,
}

impl LimitingDomain {
    /// Rank of the original `C′` block.
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn condition(&self) -> &CouplingCondition {
        &self.condition
    }

    pub fn matrix(&self) -> CMat {
        self.condition.stacked()
    }
}

/// The dilation action on a coupling condition: `(C | ρ⁻¹ C′)`.
pub fn kappa_act(cc: &CouplingCondition, rho: f64) -> Result<CouplingCondition> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::NonpositiveRho { rho });
    }
    let scale = Complex64::new(1.0 / rho, 0.0);
    CouplingCondition::new(cc.vertex(), cc.c().clone(), cc.c_prime() * scale)
}

/// Computes the limiting domain: with `ℓ = rank C′`, row-reduce `(C | C′)`
/// so that the top `ℓ` rows have a full-rank `C′` block and the bottom rows
/// have none, then drop the blocks that the flow kills. The result is
/// admissible and dilation-invariant.
pub fn limiting_domain(cc: &CouplingCondition) -> Result<LimitingDomain> {
    limiting_domain_with(cc, RANK_TOL_REL)
}

pub fn limiting_domain_with(cc: &CouplingCondition, rank_tol_rel: f64) -> Result<LimitingDomain> {
    let k = cc.k();
    let svd = cc.c_prime().clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).expect("finite singular values"));
    let ell = if smax == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > rank_tol_rel * smax).count()
    };

    // adjoint of U with columns sorted by decreasing singular value
    let m = CMat::from_fn(k, k, |i, j| u[(j, order[i])].conj());
    let rc = &m * cc.c();
    let rcp = &m * cc.c_prime();
    let zero = Complex64::new(0.0, 0.0);
    let new_c = CMat::from_fn(k, k, |i, j| if i < ell { zero } else { rc[(i, j)] });
    let new_cp = CMat::from_fn(k, k, |i, j| if i < ell { rcp[(i, j)] } else { zero });
    let condition = CouplingCondition::new(cc.vertex(), new_c, new_cp)?;
    if !condition.is_admissible_with(rank_tol_rel) {
        return Err(Error::RankDeficient);
    }
    Ok(LimitingDomain { ell, condition })
}

/// Spectral-norm distance between the orthogonal projectors onto the row
/// spaces of two conditions; zero iff the conditions are equivalent.
pub fn grassmann_distance(a: &CouplingCondition, b: &CouplingCondition) -> Result<f64> {
    if a.k() != b.k() {
        return Err(Error::DimensionMismatch {
            context: "coupling conditions have different k",
            expected: a.k(),
            found: b.k(),
        });
    }
    let pa = linalg::row_space_projector(&a.stacked(), RANK_TOL_REL);
    let pb = linalg::row_space_projector(&b.stacked(), RANK_TOL_REL);
    Ok(linalg::spectral_norm(&(pa - pb)))
}

/// The `k × k` certification matrix built from a limiting domain over a
/// closed sector: the dilation-scaled rows are divided entrywise by
/// `√(a_q(0))`, with every branch pinned so that `Re(√(−λ₀)/√(a_q(0))) > 0`
/// at the sector's bisector anchor `λ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    matrix: CMat,
    sqrt_a: Vec<Complex64>,
    anchor_root: Complex64,
}

impl SMatrix {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn det(&self) -> Complex64 {
        linalg::determinant(&self.matrix)
    }

    /// The chosen branches of `√(a_q(0))`, in endpoint order.
    pub fn sqrt_a(&self) -> &[Complex64] {
        &self.sqrt_a
    }

    /// The fixed `√(−λ₀)` at the anchor.
    pub fn anchor_root(&self) -> Complex64 {
        self.anchor_root
    }
}

pub fn build_smatrix(
    ld: &LimitingDomain,
    v: &ModelVertexData,
    sector: &Sector,
) -> Result<SMatrix> {
    let k = ld.condition().k();
    if v.k() != k {
        return Err(Error::DimensionMismatch {
            context: "model data endpoints",
            expected: k,
            found: v.k(),
        });
    }
    for d in v.directions() {
        if sector.contains_ray(*d) {
            return Err(Error::SectorHitsBackgroundSpectrum {
                ray_angle: wrap_angle(d.arg()),
            });
        }
    }
    let anchor = Complex64::from_polar(1.0, sector.bisector_angle());
    let anchor_root = (-anchor).sqrt();
    let sqrt_a: Vec<Complex64> = v
        .a0()
        .iter()
        .map(|&a| {
            let t = a.sqrt();
            if (anchor_root / t).re > 0.0 {
                t
            } else {
                -t
            }
        })
        .collect();
    let ell = ld.ell();
    let c = ld.condition().c();
    let cp = ld.condition().c_prime();
    let matrix = CMat::from_fn(k, k, |i, j| {
        if i < ell {
            cp[(i, j)] / sqrt_a[j]
        } else {
            c[(i, j)]
        }
    });
    Ok(SMatrix {
        matrix,
        sqrt_a,
        anchor_root,
    })
}

/// Outcome of the per-vertex minimal-growth test.
#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    Certified { det: Complex64 },
    NotCertified { reason: NotCertifiedReason },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NotCertifiedReason {
    SectorHitsBackgroundSpectrum { ray_angle: f64 },
    DeterminantNearZero { det: Complex64, threshold: f64 },
    InvalidCoupling { message: String },
}

impl std::fmt::Display for NotCertifiedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotCertifiedReason::SectorHitsBackgroundSpectrum { ray_angle } => {
                write!(f, "background ray at {ray_angle} rad meets the sector")
            }
            NotCertifiedReason::DeterminantNearZero { det, threshold } => {
                write!(f, "|det S| = {} below threshold {threshold}", det.norm())
            }
            NotCertifiedReason::InvalidCoupling { message } => write!(f, "{message}"),
        }
    }
}

/// Certifies the sector for the model operator at one vertex: the sector
/// must avoid every background ray and the limiting-domain determinant must
/// stay above `DET_TOL_REL · Π max(1, ‖row‖)`. Values below the threshold
/// are reported, never silently certified.
pub fn vertex_minimal_growth(
    cc: &CouplingCondition,
    v: &ModelVertexData,
    sector: &Sector,
) -> Certification {
    vertex_minimal_growth_with(cc, v, sector, DET_TOL_REL, RANK_TOL_REL)
}

pub fn vertex_minimal_growth_with(
    cc: &CouplingCondition,
    v: &ModelVertexData,
    sector: &Sector,
    det_tol_rel: f64,
    rank_tol_rel: f64,
) -> Certification {
    for d in v.directions() {
        if sector.contains_ray(*d) {
            return Certification::NotCertified {
                reason: NotCertifiedReason::SectorHitsBackgroundSpectrum {
                    ray_angle: wrap_angle(d.arg()),
                },
            };
        }
    }
    let ld = match limiting_domain_with(cc, rank_tol_rel) {
        Ok(ld) => ld,
        Err(e) => {
            return Certification::NotCertified {
                reason: NotCertifiedReason::InvalidCoupling {
                    message: e.to_string(),
                },
            }
        }
    };
    let s = match build_smatrix(&ld, v, sector) {
        Ok(s) => s,
        Err(e) => {
            return Certification::NotCertified {
                reason: NotCertifiedReason::InvalidCoupling {
                    message: e.to_string(),
                },
            }
        }
    };
    let det = s.det();
    let threshold = det_tol_rel * linalg::det_scale(s.matrix());
    if det.norm() > threshold {
        Certification::Certified { det }
    } else {
        Certification::NotCertified {
            reason: NotCertifiedReason::DeterminantNearZero { det, threshold },
        }
    }
}
