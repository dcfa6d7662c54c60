//! Cube labels on the torus (ℤ/4)^d and their base-4 encoding.
//!
//! A label `x ∈ {0,1,2,3}^d` names the cube `x + [0,2)^d` taken mod 4.
//! Codes are base 4 with coordinate 0 as the most significant digit, so every
//! coordinate occupies one 2-bit lane of the code. The lane layout lets the
//! hot predicates run as a handful of bit operations on the code itself.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported dimension; `4^8` codes still fit in a `u16`.
pub const MAX_DIM: usize = 8;

/// Dense encoding of a label, in `[0, 4^d)`.
pub type Code = u16;

const LOW: u32 = 0x5555_5555;
const HIGH: u32 = 0xAAAA_AAAA;

/// Number of labels in dimension `d`.
#[inline]
pub fn label_count(d: usize) -> usize {
    1usize << (2 * d)
}

#[inline]
fn lane_mask(d: usize) -> u32 {
    ((1u64 << (2 * d)) - 1) as u32
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        Err(Error::invalid(format!("dimension {d} outside 1..={MAX_DIM}")))
    } else {
        Ok(())
    }
}

/// Bit offset of coordinate `i` inside a code of dimension `d`.
#[inline]
pub fn lane_shift(d: usize, i: usize) -> usize {
    2 * (d - 1 - i)
}

#[inline]
pub fn digit(d: usize, code: Code, i: usize) -> u8 {
    ((code >> lane_shift(d, i)) & 3) as u8
}

pub fn encode(coords: &[u8]) -> Code {
    coords.iter().fold(0u32, |acc, &c| (acc << 2) | (c & 3) as u32) as Code
}

pub fn decode(d: usize, code: Code) -> Vec<u8> {
    (0..d).map(|i| digit(d, code, i)).collect()
}

/// True iff the two cubes are disjoint: some coordinate differs by 2 mod 4.
///
/// Digits `a, b` satisfy `a - b ≡ 2 (mod 4)` exactly when `a ^ b == 0b10`.
#[inline]
pub fn disjoint_codes(x: Code, y: Code) -> bool {
    let t = (x ^ y) as u32;
    ((t >> 1) & !t & LOW) != 0
}

/// Coordinatewise `x + y (mod 4)`.
#[inline]
pub fn add_codes(d: usize, x: Code, y: Code) -> Code {
    let (x, y) = (x as u32, y as u32);
    let m = lane_mask(d);
    ((((x & LOW) + (y & LOW)) ^ ((x ^ y) & HIGH)) & m) as Code
}

/// Coordinatewise `x - y (mod 4)`.
#[inline]
pub fn sub_codes(d: usize, x: Code, y: Code) -> Code {
    let (x, y) = (x as u32, y as u32);
    let m = lane_mask(d);
    let h = HIGH & m;
    ((((x | h) - (y & LOW & m)) ^ ((x ^ !y) & h)) & m) as Code
}

/// Coordinatewise negation mod 4 on the coordinates selected by `lanes`
/// (a mask with bit `i` for coordinate `i`).
#[inline]
pub fn negate_lanes(d: usize, x: Code, lanes: u32) -> Code {
    if lanes == 0 {
        return x;
    }
    let mut sel = 0u32;
    for i in 0..d {
        if lanes >> i & 1 == 1 {
            sel |= 3 << lane_shift(d, i);
        }
    }
    let neg = sub_codes(d, 0, x) as u32;
    ((x as u32 & !sel) | (neg & sel)) as Code
}

macro_rules! lattice_point {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            dim: u8,
            code: Code,
        }

        impl $name {
            pub fn new(coords: &[u8]) -> Result<Self> {
                check_dim(coords.len())?;
                if let Some(&bad) = coords.iter().find(|&&c| c > 3) {
                    return Err(Error::Validation(format!("coordinate {bad} outside 0..=3")));
                }
                Ok(Self { dim: coords.len() as u8, code: encode(coords) })
            }

            pub fn from_code(dim: usize, code: Code) -> Result<Self> {
                check_dim(dim)?;
                if code as usize >= label_count(dim) {
                    return Err(Error::Validation(format!(
                        "code {code} outside [0, 4^{dim})"
                    )));
                }
                Ok(Self { dim: dim as u8, code })
            }

            #[inline]
            pub fn dim(&self) -> usize {
                self.dim as usize
            }

            #[inline]
            pub fn code(&self) -> Code {
                self.code
            }

            #[inline]
            pub fn coord(&self, i: usize) -> u8 {
                digit(self.dim(), self.code, i)
            }

            pub fn coords(&self) -> Vec<u8> {
                decode(self.dim(), self.code)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{:?}", stringify!($name), self.coords())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    };
}

lattice_point!(
    /// A point of `{0,1,2,3}^d` naming the cube `x + [0,2)^d` mod 4.
    CubeLabel
);

lattice_point!(
    /// Corner `z` of the window `z + [0,4)^d`.
    WindowCorner
);

lattice_point!(
    /// The unit cell `u + [0,1)^d` of the torus.
    UnitCell
);

/// Whether the cubes named by `x` and `y` intersect. A cube overlaps itself.
pub fn overlaps(d: usize, x: CubeLabel, y: CubeLabel) -> Result<bool> {
    Error::check_dim(d, x.dim())?;
    Error::check_dim(d, y.dim())?;
    Ok(!disjoint_codes(x.code, y.code))
}

/// All labels of dimension `d` in code order.
pub fn all_labels(d: usize) -> impl Iterator<Item = CubeLabel> {
    (0..label_count(d)).map(move |c| CubeLabel { dim: d as u8, code: c as Code })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lbl(c: &[u8]) -> CubeLabel {
        CubeLabel::new(c).unwrap()
    }

    // Interval oracle: [a, a+2) and [b, b+2) on ℤ/4 share a unit cell.
    fn intervals_meet(a: u8, b: u8) -> bool {
        let cells = |s: u8| [s % 4, (s + 1) % 4];
        cells(a).iter().any(|c| cells(b).contains(c))
    }

    #[test]
    fn encode_is_base4_most_significant_first() {
        assert_eq!(encode(&[1, 0]), 4);
        assert_eq!(encode(&[0, 1]), 1);
        assert_eq!(encode(&[3, 3, 3]), 63);
        for d in 1..=4 {
            for c in 0..label_count(d) as Code {
                assert_eq!(encode(&decode(d, c)), c);
            }
        }
    }

    #[test]
    fn overlap_examples() {
        assert!(!overlaps(3, lbl(&[0, 0, 0]), lbl(&[3, 2, 3])).unwrap());
        assert!(overlaps(3, lbl(&[0, 0, 0]), lbl(&[0, 0, 0])).unwrap());
        assert!(overlaps(2, lbl(&[1, 3]), lbl(&[0, 0])).unwrap());
        assert!(!overlaps(2, lbl(&[1, 3]), lbl(&[3, 3])).unwrap());
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let err = overlaps(3, lbl(&[0, 0]), lbl(&[0, 0, 0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn disjointness_matches_interval_check() {
        let d = 2;
        for x in all_labels(d) {
            for y in all_labels(d) {
                let meet = (0..d).all(|i| intervals_meet(x.coord(i), y.coord(i)));
                assert_eq!(disjoint_codes(x.code(), y.code()), !meet, "{x} {y}");
            }
        }
    }

    #[test]
    fn lane_arithmetic_matches_digitwise() {
        let d = 3;
        for x in 0..label_count(d) as Code {
            for y in 0..label_count(d) as Code {
                let (dx, dy) = (decode(d, x), decode(d, y));
                let sum: Vec<u8> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % 4).collect();
                let diff: Vec<u8> = dx.iter().zip(&dy).map(|(a, b)| (a + 4 - b) % 4).collect();
                assert_eq!(add_codes(d, x, y), encode(&sum));
                assert_eq!(sub_codes(d, x, y), encode(&diff));
            }
            for lanes in 0..8u32 {
                let dx = decode(d, x);
                let neg: Vec<u8> = dx
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if lanes >> i & 1 == 1 { (4 - a) % 4 } else { a })
                    .collect();
                assert_eq!(negate_lanes(d, x, lanes), encode(&neg));
            }
        }
    }

    #[test]
    fn invalid_labels_rejected() {
        assert!(CubeLabel::new(&[0, 4]).is_err());
        assert!(CubeLabel::new(&[]).is_err());
        assert!(CubeLabel::from_code(2, 16).is_err());
        assert!(WindowCorner::from_code(2, 15).is_ok());
    }
}
