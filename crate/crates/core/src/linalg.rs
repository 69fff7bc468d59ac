//! Small dense complex linear algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub(crate) type CMat = DMatrix<Complex64>;
pub(crate) type CVec = DVector<Complex64>;

pub(crate) fn singular_values(m: &CMat) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.as_slice().to_vec()
}

pub(crate) fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Number of singular values above `rel_tol` times the largest.
pub(crate) fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Orthogonal projector onto the row space of `m`, as a matrix on `ℂ^{ncols}`.
pub(crate) fn row_space_projector(m: &CMat, rel_tol: f64) -> CMat {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd with v_t requested");
    let sv = &svd.singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let n = m.ncols();
    let mut p = CMat::zeros(n, n);
    if max == 0.0 {
        return p;
    }
    for i in 0..sv.len() {
        if sv[i] > rel_tol * max {
            let row = vt.row(i).clone_owned();
            p += row.adjoint() * row;
        }
    }
    p
}

pub(crate) fn determinant(m: &CMat) -> Complex64 {
    m.clone().lu().determinant()
}

/// `Π_j max(1, ‖row_j‖)`: the scale against which determinants are compared.
pub(crate) fn det_scale(m: &CMat) -> f64 {
    (0..m.nrows()).map(|i| m.row(i).norm().max(1.0)).product()
}

/// Smallest singular value together with a corresponding right singular
/// vector (a near-null vector of `m` when the value is small).
pub(crate) fn smallest_singular(m: &CMat) -> (f64, CVec) {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd with v_t requested");
    let mut idx = 0;
    let mut min = f64::INFINITY;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s < min {
            min = s;
            idx = i;
        }
    }
    (min, vt.row(idx).adjoint())
}

/// Smallest singular value of a (possibly large) square matrix by power
/// iteration on `(MᴴM)⁻¹` using LU factorizations of `M` and `Mᴴ`.
/// Returns 0 when the factorization declares the matrix singular.
pub(crate) fn sigma_min_inverse_power(m: &CMat, max_iters: usize, rel_tol: f64) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "sigma_min requires a square matrix");
    let lu = m.clone().lu();
    let lu_adj = m.adjoint().lu();
    let mut x = CVec::from_fn(n, |i, _| {
        Complex64::new(1.0 + 0.3 * ((i % 7) as f64), 0.1 * ((i % 3) as f64))
    });
    let nrm = x.norm();
    x.unscale_mut(nrm);
    let mut mu = 0.0;
    for it in 0..max_iters {
        let y = match lu_adj.solve(&x) {
            Some(y) => y,
            None => return 0.0,
        };
        let z = match lu.solve(&y) {
            Some(z) => z,
            None => return 0.0,
        };
        let grow = z.norm();
        if !grow.is_finite() {
            return 0.0;
        }
        if grow == 0.0 {
            // only possible for m with infinite singular values; treat as failure
            return 0.0;
        }
        x = z.unscale(grow);
        if it > 1 && (grow - mu).abs() <= rel_tol * grow {
            mu = grow;
            break;
        }
        mu = grow;
    }
    1.0 / mu.sqrt()
}

/// Coefficients (ascending degree) of the polynomial `w ↦ f(w)` of degree at
/// most `deg`, recovered by interpolation at scaled roots of unity.
pub(crate) fn interpolate_polynomial<F: Fn(Complex64) -> Complex64>(
    f: F,
    deg: usize,
) -> Vec<Complex64> {
    let m = deg + 1;
    let nodes: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64))
        .collect();
    let vals: Vec<Complex64> = nodes.iter().map(|&w| f(w)).collect();
    let vander = CMat::from_fn(m, m, |i, j| nodes[i].powu(j as u32));
    let rhs = CVec::from_vec(vals);
    match vander.lu().solve(&rhs) {
        Some(c) => c.as_slice().to_vec(),
        None => vec![Complex64::new(0.0, 0.0); m],
    }
}

/// All roots of a complex polynomial (ascending coefficients) by the
/// Durand–Kerner iteration. Near-zero leading coefficients are trimmed
/// relative to the largest coefficient; the zero polynomial has no roots.
pub(crate) fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut trimmed: Vec<Complex64> = coeffs.to_vec();
    while let Some(last) = trimmed.last() {
        if last.norm() <= 1e-12 * scale && trimmed.len() > 1 {
            trimmed.pop();
        } else {
            break;
        }
    }
    let deg = trimmed.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = trimmed[deg];
    let monic: Vec<Complex64> = trimmed.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // staggered starting points on a spiral
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-13 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_with_relative_threshold() {
        let m = CMat::from_row_slice(2, 4, &[
            c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0),
            c(2.0, 0.0), c(0.0, 0.0), c(4.0, 0.0), c(0.0, 0.0),
        ]);
        assert_eq!(numerical_rank(&m, 1e-10), 1);
        assert_eq!(numerical_rank(&CMat::zeros(2, 4), 1e-10), 0);
    }

    #[test]
    fn projector_is_idempotent_and_hermitian() {
        let m = CMat::from_row_slice(2, 4, &[
            c(1.0, 0.5), c(0.0, -1.0), c(2.0, 0.0), c(0.3, 0.0),
            c(0.0, 0.0), c(1.0, 1.0), c(0.0, 0.2), c(3.0, -2.0),
        ]);
        let p = row_space_projector(&m, 1e-10);
        assert!(spectral_norm(&(&p * &p - &p)) < 1e-12);
        assert!(spectral_norm(&(p.adjoint() - &p)) < 1e-12);
    }

    #[test]
    fn inverse_power_matches_svd() {
        let mut m = CMat::from_fn(40, 40, |i, j| {
            c(((3 * i + 7 * j) % 11) as f64 - 5.0, ((i * j) % 5) as f64 - 2.0)
        });
        for i in 0..40 {
            m[(i, i)] += c(8.0, 0.0);
        }
        let exact = singular_values(&m).into_iter().fold(f64::INFINITY, f64::min);
        let est = sigma_min_inverse_power(&m, 200, 1e-9);
        assert!((est - exact).abs() < 1e-6 * exact, "est {est} vs exact {exact}");
    }

    #[test]
    fn durand_kerner_recovers_roots() {
        // (w - 1)(w + 2i)(w - 3 - i) expanded
        let r1 = c(1.0, 0.0);
        let r2 = c(0.0, -2.0);
        let r3 = c(3.0, 1.0);
        let coeffs = vec![
            -r1 * r2 * r3,
            r1 * r2 + r1 * r3 + r2 * r3,
            -(r1 + r2 + r3),
            c(1.0, 0.0),
        ];
        let mut roots = polynomial_roots(&coeffs);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut expect = [r2, r1, r3];
        expect.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (r, e) in roots.iter().zip(expect.iter()) {
            assert!((r - e).norm() < 1e-9);
        }
    }

    #[test]
    fn interpolation_reproduces_determinant_polynomial() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let b = CMat::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)]);
        let f = |w: Complex64| determinant(&(&a - &b * w));
        let coeffs = interpolate_polynomial(f, 2);
        for &w in &[c(0.3, 0.7), c(-2.0, 0.1)] {
            let direct = f(w);
            let horner = coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &cf| acc * w + cf);
            assert!((direct - horner).norm() < 1e-10 * (1.0 + direct.norm()));
        }
    }
}
