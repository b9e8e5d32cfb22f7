//! Eigenvalue routines for small dense complex matrices.
//!
//! Two solvers cover everything the crate needs:
//! - [`hermitian_eigenvalues`]: cyclic complex Jacobi. Used for trace
//!   distance, positivity floors, and spectral norms, where the inputs are
//!   Hermitian by construction.
//! - [`eigenvalues`]: Householder reduction to Hessenberg form followed by
//!   an explicitly shifted QR iteration with Givens rotations. Used for
//!   Liouvillian spectra, which are not normal matrices.
//!
//! Eigenvectors are never needed, so neither solver accumulates them.

use crate::error::{Error, Result};
use crate::linalg::{adjoint, frobenius_norm, require_finite, require_square, C64, CMatrix};

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// as (A + A†)/2 first, so callers enforce their own Hermiticity gates.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    let n = require_square("Hermitian eigenvalues", a)?;
    require_finite("Hermitian eigenvalues", a)?;
    if n == 1 {
        return Ok(vec![a[(0, 0)].re]);
    }
    let mut m = (a + &adjoint(a)) * C64::new(0.5, 0.0);
    let scale = frobenius_norm(&m).max(1.0);

    for _sweep in 0..60 {
        let off: f64 = {
            let mut acc = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    acc += m[(p, q)].norm_sqr();
                }
            }
            acc.sqrt()
        };
        if off <= 1e-15 * scale {
            let mut eigs: Vec<f64> = (0..n).map(|k| m[(k, k)].re).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eigs);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Phase-adjusted real Jacobi rotation: with the 2x2 block
                // written as P [[app, |apq|], [|apq|, aqq]] P†,
                // P = diag(1, e^{-iφ}), a real rotation finishes the job.
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Plane transform G: G[p][p]=c, G[p][q]=s, G[q][p]=-s·e^{-iφ},
                // G[q][q]=c·e^{-iφ}; update M ← G† M G.
                let gqp = -s * phase.conj();
                let gqq = c * phase.conj();
                for i in 0..n {
                    let mp = m[(i, p)];
                    let mq = m[(i, q)];
                    m[(i, p)] = mp * c + mq * gqp;
                    m[(i, q)] = mp * s + mq * gqq;
                }
                for j in 0..n {
                    let pj = m[(p, j)];
                    let qj = m[(q, j)];
                    m[(p, j)] = pj * c + qj * gqp.conj();
                    m[(q, j)] = pj * s + qj * gqq.conj();
                }
            }
        }
    }
    Err(Error::NoConvergence {
        context: "Hermitian eigenvalues",
    })
}

/// Largest Hermitian eigenvalue convenience wrapper.
pub fn max_hermitian_eigenvalue(a: &CMatrix) -> Result<f64> {
    Ok(*hermitian_eigenvalues(a)?
        .last()
        .expect("nonempty spectrum"))
}

/// Spectral (operator 2-) norm via the top eigenvalue of A†A.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    let gram = adjoint(a).dot(a);
    Ok(max_hermitian_eigenvalue(&gram)?.max(0.0).sqrt())
}

fn householder_hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        // reflector for the column below the subdiagonal
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x <= 1e-300 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        v[0] += phase * norm_x;
        let norm_v: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_v <= 1e-300 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= norm_v;
        }
        // H ← (1 - 2vv†) H (1 - 2vv†) applied on rows/cols k+1..n
        for j in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + idx, j)];
            }
            let dot2 = dot * 2.0;
            for (idx, vi) in v.iter().enumerate() {
                let sub = *vi * dot2;
                h[(k + 1 + idx, j)] -= sub;
            }
        }
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + idx)] * *vi;
            }
            let dot2 = dot * 2.0;
            for (idx, vi) in v.iter().enumerate() {
                let sub = dot2 * vi.conj();
                h[(i, k + 1 + idx)] -= sub;
            }
        }
        // enforce the exact zeros the reflector produced
        for i in (k + 2)..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    h
}

/// Eigenvalues of the trailing 2x2 block, with the root nearer `d` first.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of a general complex matrix, sorted by real part then
/// imaginary part (ascending). Accuracy is the usual backward-stable QR
/// level; the callers' tolerances are far looser.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = require_square("eigenvalues", a)?;
    require_finite("eigenvalues", a)?;
    let mut h = householder_hessenberg(a);
    let mut eigs: Vec<C64> = Vec::with_capacity(n);
    let eps = f64::EPSILON;
    let mut hi = n;
    let mut stuck = 0usize;
    let max_stuck = 40 * n.max(4);

    while hi > 0 {
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // bottom deflation test
        let sub = h[(hi - 1, hi - 2)].norm();
        let local = h[(hi - 2, hi - 2)].norm() + h[(hi - 1, hi - 1)].norm();
        if sub <= eps * local.max(1e-300) {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            stuck = 0;
            continue;
        }
        // find the top of the active unreduced block
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo, lo - 1)].norm();
            let d = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s <= eps * d.max(1e-300) {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        stuck += 1;
        if stuck > max_stuck {
            return Err(Error::NoConvergence {
                context: "eigenvalues",
            });
        }
        let mu = if stuck % 12 == 0 {
            // exceptional shift to break symmetry-induced stalls
            C64::new(
                h[(hi - 1, hi - 2)].norm() + h[(hi - 2, hi - 2)].norm(),
                0.0,
            )
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };

        // explicit shifted QR sweep on the active block [lo, hi)
        for k in lo..hi {
            h[(k, k)] -= mu;
        }
        let mut rotations: Vec<(usize, f64, C64)> = Vec::with_capacity(hi - lo);
        for k in lo..(hi - 1) {
            let a_el = h[(k, k)];
            let b_el = h[(k + 1, k)];
            let denom = (a_el.norm_sqr() + b_el.norm_sqr()).sqrt();
            let (c, s) = if denom <= 1e-300 || a_el.norm() <= 1e-300 {
                (0.0, C64::new(1.0, 0.0))
            } else {
                let c = a_el.norm() / denom;
                let s = (a_el / a_el.norm()) * b_el.conj() / denom;
                (c, s)
            };
            // rows k, k+1 ← [[c, s], [-s̄, c]] · rows
            for j in k..hi {
                let top = h[(k, j)];
                let bot = h[(k + 1, j)];
                h[(k, j)] = top * c + bot * s;
                h[(k + 1, j)] = -(s.conj() * top) + bot * c;
            }
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            // columns k, k+1 ← columns · [[c, -s], [s̄, c]]
            let row_end = (k + 2).min(hi);
            for i in lo..row_end {
                let left = h[(i, k)];
                let right = h[(i, k + 1)];
                h[(i, k)] = left * c + right * s.conj();
                h[(i, k + 1)] = -(left * s) + right * c;
            }
        }
        for k in lo..hi {
            h[(k, k)] += mu;
        }
    }

    eigs.sort_by(|x, y| {
        (x.re, x.im)
            .partial_cmp(&(y.re, y.im))
            .expect("finite eigenvalues")
    });
    Ok(eigs)
}
