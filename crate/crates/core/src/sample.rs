//! Random streams and uniform sampling.
//!
//! Draw accounting is fixed so runs replay exactly: [`draw_index`] consumes
//! one `u64`, and [`sample_uniform`] consumes one `u64` per dimension, in
//! dimension order, for both int and real dimensions.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Bounds, InputBox, Point};

/// The random number generator shared by every generation method.
pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform index in `0..len` from a single draw (multiply-shift; the bias is
/// below `len / 2^64`).
///
/// # Panics
/// If `len` is zero.
pub fn draw_index<R: RngCore + ?Sized>(rng: &mut R, len: usize) -> usize {
    assert!(len > 0, "draw from an empty range");
    ((rng.next_u64() as u128 * len as u128) >> 64) as usize
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn draw_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent uniform coordinates: inclusive integer ranges, `[lo, hi)` for reals.
pub fn sample_uniform<R: RngCore + ?Sized>(bx: &InputBox, rng: &mut R) -> Point {
    let coords = bx
        .dims()
        .iter()
        .map(|d| match d.bounds() {
            Bounds::Int { lo, hi } => {
                let size = (hi - lo) as u64 + 1;
                lo as f64 + ((rng.next_u64() as u128 * size as u128) >> 64) as f64
            }
            Bounds::Real { lo, hi } => {
                let u = draw_unit(rng);
                let x = lo + (hi - lo) * u;
                if x >= hi && hi > lo {
                    hi.next_down().max(lo)
                } else {
                    x.max(lo)
                }
            }
        })
        .collect();
    Point::new(coords)
}
