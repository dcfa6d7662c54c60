//! Density functions: nonnegative `f` on `(ℤ/4)^d` with
//! `Σ_{u ∈ {0,1}^d} f(x + u) = 1` for every `x`. Tiling indicators are the
//! 0/1 members; every value is an exact rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::flips::{apply_flip, flip_moves};
use crate::label::{add_codes, check_dim, digit, label_count, lane_shift, Code};
use crate::packing::{is_tiling, regular_tiling, LabelCodes, Packing};
use crate::symmetry::Symmetry;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityFunction {
    dim: usize,
    values: Vec<BigRational>,
}

/// Offsets `Σ u_i e_i` for `u ∈ {0..base}^d` as codes.
fn offsets(d: usize, base: u32) -> Vec<Code> {
    let mut out = vec![0 as Code];
    for i in 0..d {
        out = out
            .iter()
            .flat_map(|&c| (0..base).map(move |k| c | (k << lane_shift(d, i)) as Code))
            .collect();
    }
    out
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl DensityFunction {
    /// Validates nonnegativity and the unit-cell constraint.
    pub fn new(dim: usize, values: Vec<BigRational>) -> Result<Self> {
        check_dim(dim)?;
        Error::check_dim(label_count(dim), values.len())?;
        let f = DensityFunction { dim, values };
        if !f.is_member() {
            return Err(Error::Validation("values violate the density constraints".into()));
        }
        Ok(f)
    }

    /// Indicator of a tiling's labels.
    pub fn from_tiling(t: &Packing) -> Result<Self> {
        if !is_tiling(t) {
            return Err(Error::invalid("only tilings give density functions"));
        }
        let mut values = vec![BigRational::zero(); label_count(t.dim())];
        for &x in t.codes() {
            values[x as usize] = BigRational::one();
        }
        Ok(DensityFunction { dim: t.dim(), values })
    }

    pub fn uniform(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(DensityFunction { dim: d, values: vec![ratio(1, 1 << d); label_count(d)] })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, x: Code) -> &BigRational {
        &self.values[x as usize]
    }

    pub fn is_member(&self) -> bool {
        let d = self.dim;
        if self.values.iter().any(|v| v.is_negative()) {
            return false;
        }
        let cell = offsets(d, 2);
        let one = BigRational::one();
        (0..label_count(d) as Code).all(|x| {
            cell.iter().fold(BigRational::zero(), |acc, &u| acc + &self.values[add_codes(d, x, u) as usize]) == one
        })
    }

    /// `Σ_{u ∈ {0,1,2}^d} f(z + u)`; the window count for indicators.
    pub fn window_sum(&self, z: Code) -> BigRational {
        let d = self.dim;
        offsets(d, 3).iter().fold(BigRational::zero(), |acc, &u| acc + &self.values[add_codes(d, z, u) as usize])
    }

    /// Mean of the squared window sums over all corners.
    pub fn second_moment(&self) -> BigRational {
        let d = self.dim;
        let window = offsets(d, 3);
        let n = label_count(d);
        let total = (0..n as Code).fold(BigRational::zero(), |acc, z| {
            let s = window.iter().fold(BigRational::zero(), |a, &u| a + &self.values[add_codes(d, z, u) as usize]);
            acc + &s * &s
        });
        total / BigRational::from_integer(BigInt::from(n))
    }

    /// `w·self + (1 − w)·other` for `0 ≤ w ≤ 1`; stays in the space.
    pub fn mix(&self, other: &DensityFunction, w: &BigRational) -> Result<Self> {
        Error::check_dim(self.dim, other.dim)?;
        if w.is_negative() || *w > BigRational::one() {
            return Err(Error::invalid(format!("mixing weight {w} outside [0, 1]")));
        }
        let rest = BigRational::one() - w;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * w + b * &rest).collect();
        Ok(DensityFunction { dim: self.dim, values })
    }

    /// A random member: a convex combination of the uniform density and up to
    /// three random tiling indicators with random rational weights.
    pub fn random<R: Rng>(d: usize, rng: &mut R) -> Result<Self> {
        let mut f = Self::uniform(d)?;
        for _ in 0..rng.gen_range(1..=3) {
            let t = Self::from_tiling(&random_tiling(d, rng)?)?;
            let den = rng.gen_range(1..=12);
            let w = ratio(rng.gen_range(0..=den), den);
            f = t.mix(&f, &w)?;
        }
        Ok(f)
    }
}

/// A tiling reached by random flips from the regular one, then moved by a
/// random symmetry.
pub fn random_tiling<R: Rng>(d: usize, rng: &mut R) -> Result<Packing> {
    let mut t = regular_tiling(d)?;
    for _ in 0..4 * d {
        let moves = flip_moves(&t)?;
        if moves.is_empty() {
            break;
        }
        t = apply_flip(&t, moves[rng.gen_range(0..moves.len())])?;
    }
    Symmetry::random(d, rng).apply(&t)
}

/// `M_i f(x) = f(x) + f(x + e_i)` for even `x_i`, and `0` for odd `x_i`.
pub fn merge(f: &DensityFunction, i: usize) -> Result<DensityFunction> {
    let d = f.dim;
    if i >= d {
        return Err(Error::invalid(format!("coordinate {i} out of range for dimension {d}")));
    }
    let e = (1 << lane_shift(d, i)) as Code;
    let values = (0..label_count(d) as Code)
        .map(|x| {
            if digit(d, x, i).is_multiple_of(2) {
                f.value(x) + f.value(add_codes(d, x, e))
            } else {
                BigRational::zero()
            }
        })
        .collect();
    Ok(DensityFunction { dim: d, values })
}

/// `M_0 ∘ M_1 ∘ … ∘ M_{d−1}`.
pub fn merge_all(f: &DensityFunction) -> Result<DensityFunction> {
    (0..f.dim).rev().try_fold(f.clone(), |g, i| merge(&g, i))
}

/// Compares `Σ_k (x_k + x_{k+1} + x_{k+2})²` (indices mod 4) with
/// `2(Σ x)² + (x_0 + x_1)² + (x_2 + x_3)²`; the first never exceeds the second.
pub fn key_inequality_check(x: &[BigRational; 4]) -> Result<bool> {
    if x.iter().any(|v| v.is_negative()) {
        return Err(Error::invalid("inequality inputs must be nonnegative"));
    }
    let sq = |v: BigRational| &v * &v;
    let lhs = (0..4).fold(BigRational::zero(), |acc, k| acc + sq(&x[k] + &x[(k + 1) % 4] + &x[(k + 2) % 4]));
    let total = &x[0] + &x[1] + &x[2] + &x[3];
    let rhs = sq(total) * BigRational::from_integer(2.into()) + sq(&x[0] + &x[1]) + sq(&x[2] + &x[3]);
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::moments::{moments, window_counts};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn tilings_and_uniform_are_members() {
        for d in 1..=4 {
            assert!(DensityFunction::from_tiling(&regular_tiling(d).unwrap()).unwrap().is_member());
            assert!(DensityFunction::uniform(d).unwrap().is_member());
        }
        assert!(DensityFunction::from_tiling(&crate::packing::sparse_packing_3d()).is_err());
        let mut bad = vec![q(0); 4];
        bad[0] = q(1);
        assert!(DensityFunction::new(1, bad).is_err());
    }

    #[test]
    fn window_sums_match_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=3 {
            for _ in 0..10 {
                let t = random_tiling(d, &mut rng).unwrap();
                let f = DensityFunction::from_tiling(&t).unwrap();
                let counts = window_counts(&t);
                for z in 0..label_count(d) as Code {
                    assert_eq!(f.window_sum(z), q(counts[z as usize] as i64));
                }
                let m = moments(&t).m2;
                assert_eq!(f.second_moment(), BigRational::new((*m.numer()).into(), (*m.denom()).into()));
            }
        }
    }

    #[test]
    fn merge_keeps_membership_and_raises_second_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 1..=3 {
            let regular = DensityFunction::from_tiling(&regular_tiling(d).unwrap()).unwrap();
            for i in 0..d {
                assert_eq!(merge(&regular, i).unwrap(), regular);
            }
            for _ in 0..20 {
                let f = DensityFunction::random(d, &mut rng).unwrap();
                assert!(f.is_member());
                for i in 0..d {
                    let g = merge(&f, i).unwrap();
                    assert!(g.is_member());
                    assert!(g.second_moment() >= f.second_moment());
                }
                assert_eq!(merge_all(&f).unwrap(), regular);
            }
        }
    }

    #[test]
    fn key_inequality() {
        assert!(key_inequality_check(&[q(0), q(0), q(0), q(0)]).unwrap());
        assert!(key_inequality_check(&[q(1), q(1), q(1), q(1)]).unwrap());
        assert!(key_inequality_check(&[q(-1), q(0), q(0), q(0)]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x = [(); 4].map(|_| ratio(rng.gen_range(0..50), rng.gen_range(1..20)));
            assert!(key_inequality_check(&x).unwrap());
        }
    }
}
