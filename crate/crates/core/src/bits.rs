//! Bit-vector helpers shared by the transmit and receive chains.
//!
//! Bits are plain `bool`s; multi-bit fields are read and written MSB first.

use rand::Rng;

/// Reads `bits` as an unsigned integer, most significant bit first.
pub fn to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Appends the `width` low bits of `value` to `out`, most significant first.
pub fn push_index(out: &mut Vec<bool>, value: usize, width: usize) {
    out.extend((0..width).rev().map(|i| (value >> i) & 1 == 1));
}

/// `width` bits of `value`, most significant first.
pub fn from_index(value: usize, width: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(width);
    push_index(&mut out, value, width);
    out
}

pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.random::<bool>()).collect()
}

/// Number of positions where the two slices differ.
pub fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub(crate) fn gray_encode(n: usize) -> usize {
    n ^ (n >> 1)
}

pub(crate) fn gray_decode(mut g: usize) -> usize {
    let mut n = g;
    while g > 1 {
        g >>= 1;
        n ^= g;
    }
    n
}

/// `log2(n)` when `n` is a power of two.
pub(crate) fn exact_log2(n: usize) -> Option<usize> {
    n.is_power_of_two().then(|| n.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for v in 0..64 {
            assert_eq!(to_index(&from_index(v, 6)), v);
        }
        assert_eq!(from_index(6, 3), vec![true, true, false]);
        assert_eq!(from_index(1, 3), vec![false, false, true]);
    }

    #[test]
    fn gray_is_inverse_and_single_bit() {
        for n in 0..1024 {
            assert_eq!(gray_decode(gray_encode(n)), n);
            if n > 0 {
                let d = gray_encode(n) ^ gray_encode(n - 1);
                assert_eq!(d.count_ones(), 1);
            }
        }
    }
}
