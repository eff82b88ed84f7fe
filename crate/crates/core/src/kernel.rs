//! Truncated convolution of big-integer coefficient runs.
//!
//! Two routes compute the same product: a schoolbook double loop, and a
//! Kronecker substitution that packs each run into one large integer, lets
//! `num-bigint` multiply those (Karatsuba/Toom-3), and unpacks balanced
//! digits. The second route wins once runs reach a few dozen terms of
//! multi-limb integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

/// Below this many output terms the schoolbook loop is used.
pub const KRONECKER_THRESHOLD: usize = 40;

/// First `n` coefficients of `a * b`.
pub fn convolve(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let n = n.min(output_len(a.len(), b.len()));
    if n < KRONECKER_THRESHOLD || a.len().min(b.len()) < 8 {
        convolve_schoolbook(a, b, n)
    } else {
        convolve_kronecker(a, b, n)
    }
}

fn output_len(la: usize, lb: usize) -> usize {
    if la == 0 || lb == 0 {
        0
    } else {
        la + lb - 1
    }
}

pub fn convolve_schoolbook(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let n = n.min(output_len(a.len(), b.len()));
    let mut out = vec![BigInt::zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

pub fn convolve_kronecker(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let n = n.min(output_len(a.len(), b.len()));
    if n == 0 {
        return Vec::new();
    }
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    let max_bits = |xs: &[BigInt]| xs.iter().map(|x| x.bits()).max().unwrap_or(0);
    let (ba, bb) = (max_bits(a), max_bits(b));
    if ba == 0 || bb == 0 {
        return vec![BigInt::zero(); n];
    }
    // |c_k| < 2^(ba + bb + log2(len)); one more bit keeps balanced digits unique.
    let terms = a.len().min(b.len()) as u64;
    let log_terms = 64 - terms.leading_zeros() as u64;
    let slot_bits = ba + bb + log_terms + 2;
    let slot = slot_bits.div_ceil(32) as usize;

    let pa = pack(a, slot);
    let pb = pack(b, slot);
    let product = pa * pb;
    unpack(&product, slot, n)
}

fn pack(xs: &[BigInt], slot: usize) -> BigInt {
    let mut pos = vec![0u32; xs.len() * slot];
    let mut neg = vec![0u32; xs.len() * slot];
    for (i, x) in xs.iter().enumerate() {
        let (sign, digits) = x.to_u32_digits();
        let dst = match sign {
            Sign::Plus => &mut pos,
            Sign::Minus => &mut neg,
            Sign::NoSign => continue,
        };
        dst[i * slot..i * slot + digits.len()].copy_from_slice(&digits);
    }
    BigInt::from(BigUint::new(pos)) - BigInt::from(BigUint::new(neg))
}

fn unpack(r: &BigInt, slot: usize, n: usize) -> Vec<BigInt> {
    let (sign, digits) = r.to_u32_digits();
    let full = BigInt::one() << (32 * slot);
    let half = BigInt::one() << (32 * slot - 1);
    let mut out = Vec::with_capacity(n);
    let mut carry = false;
    for i in 0..n {
        let lo = (i * slot).min(digits.len());
        let hi = ((i + 1) * slot).min(digits.len());
        let mut v = BigInt::from(BigUint::from_slice(&digits[lo..hi]));
        if carry {
            v += 1;
        }
        carry = v >= half;
        if carry {
            v -= &full;
        }
        if sign == Sign::Minus {
            v = -v;
        }
        out.push(v);
    }
    out
}
