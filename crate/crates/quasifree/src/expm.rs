//! Matrix exponential by scaling-and-squaring with diagonal Padé
//! approximants, the standard double-precision variant: the approximation
//! order is chosen from the 1-norm, and matrices above the order-13
//! threshold are repeatedly halved and the result squared back up.
//!
//! For the operator norms this crate produces (generator matrices with
//! norm up to a few tens) the relative error stays near machine precision;
//! the tolerance tests in `tests/` pin that down.

use crate::error::Result;
use crate::linalg::{identity, one_norm, require_finite, require_square, C64, CMatrix};
use crate::solve::lu_factor;

// (order, 1-norm threshold) pairs for double precision.
const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Evaluates the odd/even split of the degree-m Padé numerator using the
/// precomputed even powers `[A², A⁴]`.
fn pade_low_order(a: &CMatrix, b: &[f64], powers: &[CMatrix]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let mut u_inner = identity(n) * real(b[1]);
    let mut v = identity(n) * real(b[0]);
    for (k, pw) in powers.iter().enumerate() {
        let even = 2 * (k + 1);
        if even < b.len() {
            v = v + pw * real(b[even]);
        }
        if even + 1 < b.len() {
            u_inner = u_inner + pw * real(b[even + 1]);
        }
    }
    (a.dot(&u_inner), v)
}

fn pade_13(a: &CMatrix, a2: &CMatrix, a4: &CMatrix, a6: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let b = &B13;
    let u_high = a6 * real(b[13]) + a4 * real(b[11]) + a2 * real(b[9]);
    let u_inner =
        a6.dot(&u_high) + a6 * real(b[7]) + a4 * real(b[5]) + a2 * real(b[3]) + identity(n) * real(b[1]);
    let v_high = a6 * real(b[12]) + a4 * real(b[10]) + a2 * real(b[8]);
    let v = a6.dot(&v_high) + a6 * real(b[6]) + a4 * real(b[4]) + a2 * real(b[2])
        + identity(n) * real(b[0]);
    (a.dot(&u_inner), v)
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    require_square("matrix exponential", a)?;
    require_finite("matrix exponential", a)?;

    let norm = one_norm(a);
    let a2 = a.dot(a);

    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = pade_low_order(a, &B3, &[a2.clone()]);
        (u, v, 0u32)
    } else if norm <= THETA_5 {
        let a4 = a2.dot(&a2);
        let (u, v) = pade_low_order(a, &B5, &[a2.clone(), a4]);
        (u, v, 0)
    } else if norm <= THETA_7 || norm <= THETA_9 {
        let a4 = a2.dot(&a2);
        let a6 = a2.dot(&a4);
        let b: &[f64] = if norm <= THETA_7 { &B7 } else { &B9 };
        let mut powers = vec![a2.clone(), a4.clone(), a6.clone()];
        if b.len() > 9 {
            powers.push(a4.dot(&a4));
        }
        let (u, v) = pade_low_order(a, b, &powers);
        (u, v, 0)
    } else {
        let squarings = ((norm / THETA_13).log2().ceil()).max(0.0) as u32;
        let scale = real(0.5f64.powi(squarings as i32));
        let a_s = a * scale;
        let a2s = a_s.dot(&a_s);
        let a4s = a2s.dot(&a2s);
        let a6s = a2s.dot(&a4s);
        let (u, v) = pade_13(&a_s, &a2s, &a4s, &a6s);
        (u, v, squarings)
    };

    let p = &v + &u;
    let q = &v - &u;
    let mut result = lu_factor(&q)?.solve(&p)?;
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}
