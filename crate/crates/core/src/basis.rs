//! Computational basis strings packed into a `u64`.
//!
//! Qubit 0 is the leftmost character of the written string and the most
//! significant of the `n` low bits, so the packed value is also the row
//! index in the usual big-endian tensor ordering.

pub const MAX_QUBITS: usize = 64;

#[inline]
pub fn bit(x: u64, n: usize, q: usize) -> bool {
    (x >> (n - 1 - q)) & 1 == 1
}

#[inline]
pub fn flip(x: u64, n: usize, q: usize) -> u64 {
    x ^ (1u64 << (n - 1 - q))
}

#[inline]
pub fn with_bit(x: u64, n: usize, q: usize, b: bool) -> u64 {
    let m = 1u64 << (n - 1 - q);
    if b {
        x | m
    } else {
        x & !m
    }
}

/// x‖y where y has `ny` bits.
#[inline]
pub fn concat(x: u64, y: u64, ny: usize) -> u64 {
    if ny == 0 {
        x
    } else {
        (x << ny) | y
    }
}

/// Splits z into (high `n - ny` bits, low `ny` bits).
#[inline]
pub fn split(z: u64, ny: usize) -> (u64, u64) {
    if ny == 0 {
        (z, 0)
    } else if ny == 64 {
        (0, z)
    } else {
        (z >> ny, z & ((1u64 << ny) - 1))
    }
}

pub fn parse(s: &str) -> Option<(u64, usize)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.len() > MAX_QUBITS {
        return None;
    }
    let mut x = 0u64;
    for c in t.chars() {
        x = (x << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => return None,
            };
    }
    Some((x, t.len()))
}

pub fn format(x: u64, n: usize) -> String {
    (0..n).map(|q| if bit(x, n, q) { '1' } else { '0' }).collect()
}

/// Unary clock word 1^t 0^(k-t).
pub fn unary(t: usize, k: usize) -> u64 {
    if t == 0 {
        0
    } else if t == 64 {
        u64::MAX
    } else {
        ((1u64 << t) - 1) << (k - t)
    }
}

/// Inverse of [`unary`]; `None` for words that are not of that shape.
pub fn decode_unary(z: u64, k: usize) -> Option<usize> {
    let t = z.count_ones() as usize;
    if unary(t, k) == z {
        Some(t)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_packing() {
        let (x, n) = parse("100").unwrap();
        assert_eq!((x, n), (4, 3));
        assert!(bit(x, n, 0));
        assert_eq!(format(flip(x, n, 2), n), "101");
        assert_eq!(concat(0b10, 0b1, 1), 0b101);
        assert_eq!(split(0b101, 1), (0b10, 1));
    }

    #[test]
    fn unary_words() {
        assert_eq!(format(unary(2, 5), 5), "11000");
        assert_eq!(decode_unary(unary(3, 4), 4), Some(3));
        assert_eq!(decode_unary(0b0100, 4), None);
        assert_eq!(decode_unary(0, 0), Some(0));
    }
}
