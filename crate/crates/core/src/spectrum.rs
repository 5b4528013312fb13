//! Characteristic polynomials of 4×4 matrices and their roots.
//!
//! The polynomial is built with the Faddeev–LeVerrier recursion and solved
//! as the eigenvalue problem of its companion matrix. Accurate for simple
//! roots; a root of multiplicity m is only resolved to about `ε^{1/m}`.

use nalgebra::{Matrix4, Schur};
use num_complex::Complex64;

use crate::state::CMatrix4;

/// Monic characteristic polynomial `det(λI − A)` of a complex matrix,
/// coefficients ordered from `λ⁰` up to `λ⁴`.
pub fn char_poly(a: &CMatrix4) -> [Complex64; 5] {
    let n = 4;
    let mut coeffs = [Complex64::new(0.0, 0.0); 5];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = CMatrix4::zeros();
    for k in 1..=n {
        m = a * m + CMatrix4::identity() * coeffs[n - k + 1];
        coeffs[n - k] = -(a * m).trace() / k as f64;
    }
    coeffs
}

/// Real-matrix variant of [`char_poly`].
pub fn real_char_poly(a: &Matrix4<f64>) -> [f64; 5] {
    let c = char_poly(&a.map(|v| Complex64::new(v, 0.0)));
    c.map(|z| z.re)
}

/// Roots of the monic quartic `c0 + c1 λ + c2 λ² + c3 λ³ + λ⁴`, from the
/// eigenvalues of its companion matrix, each refined by two Newton steps.
pub fn companion_roots(coeffs: [f64; 5]) -> [Complex64; 4] {
    let lead = coeffs[4];
    let c: Vec<f64> = coeffs.iter().map(|v| v / lead).collect();
    let mut companion = Matrix4::<f64>::zeros();
    for i in 1..4 {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..4 {
        companion[(i, 3)] = -c[i];
    }
    let eig = match Schur::try_new(companion, f64::EPSILON, 1_000) {
        Some(schur) => schur.complex_eigenvalues(),
        None => {
            // QR stalls on unitary companions such as that of λ⁴ + 1; a
            // non-orthogonal similarity keeps the spectrum and breaks the
            // symmetry
            let s = Matrix4::new(
                1.0, 0.5, 0.25, 0.125, //
                0.0, 1.0, 0.5, 0.25, //
                0.0, 0.0, 1.0, 0.5, //
                0.0, 0.0, 0.0, 1.0,
            );
            let s_inv = s.try_inverse().expect("unit triangular");
            Schur::try_new(s * companion * s_inv, f64::EPSILON, 10_000)
                .expect("Schur converges after the similarity")
                .complex_eigenvalues()
        }
    };
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    for (k, z) in eig.iter().enumerate() {
        roots[k] = newton_polish(&c, *z);
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    roots
}

fn newton_polish(c: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..2 {
        let mut p = Complex64::new(c[4], 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..4).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        if dp.norm() < 1e-300 {
            break;
        }
        let next = z - p / dp;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        // only accept steps that reduce the residual
        let mut q = Complex64::new(c[4], 0.0);
        for k in (0..4).rev() {
            q = q * next + c[k];
        }
        if q.norm() < p.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}
