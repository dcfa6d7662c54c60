//! Window counts `N_z`: the number of cubes inside the window `z + [0,4)^d`.
//!
//! Cube `x + [0,2)^d` lies in the window iff `x_i − z_i ∈ {0,1,2}` for every
//! `i`, i.e. no coordinate has `z_i ≡ x_i + 1`. Each cube sits in `3^d` windows.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::equal_coordinates;
use crate::error::{Error, Result};
use crate::label::{label_count, sub_codes, Code, WindowCorner};
use crate::packing::{LabelCodes, Packing};

#[inline]
fn contains(d: usize, z: Code, x: Code) -> bool {
    // z − x must avoid the digit 1 in every lane
    let t = sub_codes(d, z, x) as u32;
    (t & !(t >> 1) & 0x5555_5555) == 0
}

fn count_at(d: usize, codes: &[Code], z: Code) -> u32 {
    codes.iter().filter(|&&x| contains(d, z, x)).count() as u32
}

pub fn window_count(p: &Packing, z: WindowCorner) -> Result<usize> {
    Error::check_dim(p.dim(), z.dim())?;
    Ok(count_at(p.dim(), p.codes(), z.code()) as usize)
}

/// `N_z` for every corner, indexed by code.
pub fn window_counts<S: LabelCodes + ?Sized>(p: &S) -> Vec<u32> {
    let (d, codes) = (p.dim(), p.codes());
    let n = label_count(d) as Code;
    if d >= 6 {
        (0..n).into_par_iter().map(|z| count_at(d, codes, z)).collect()
    } else {
        (0..n).map(|z| count_at(d, codes, z)).collect()
    }
}

fn pow(b: i64, e: usize) -> i64 {
    b.pow(e as u32)
}

/// Lower bound on the second moment of any packing of `n` cubes.
pub fn m2_lower_bound(d: usize, n: usize) -> Rational64 {
    let (q, r) = ((n / 4) as i64, (n % 4) as i64);
    let n = n as i64;
    let two_d = pow(2, d);
    Rational64::new(pow(3, d) * n, pow(4, d))
        + Rational64::new(n * (n - 1), two_d)
        + Rational64::new(d as i64 * (2 * q * (q - 1) + r * q), two_d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub dim: usize,
    pub size: usize,
    pub m1: Rational64,
    pub m2: Rational64,
    pub m2_lower_bound: Rational64,
    pub window_counts: Vec<u32>,
    pub deficit: usize,
}

#[derive(Serialize, Deserialize)]
struct MomentRecord {
    d: usize,
    n: usize,
    deficit: usize,
    m1: String,
    m2: String,
    m2_lower_bound: String,
}

impl MomentReport {
    pub fn satisfies_bound(&self) -> bool {
        self.m2 >= self.m2_lower_bound
    }

    /// Fixed-field text row: `d N δ m1 m2 bound`.
    pub fn to_row(&self) -> String {
        format!(
            "{:>2} {:>4} {:>4} {:>12} {:>14} {:>14}",
            self.dim, self.size, self.deficit, self.m1, self.m2, self.m2_lower_bound
        )
    }

    pub fn header() -> &'static str {
        " d    N    δ           m1             m2       m2 bound"
    }

    /// One JSON object; rationals as `p/q` strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MomentRecord {
            d: self.dim,
            n: self.size,
            deficit: self.deficit,
            m1: self.m1.to_string(),
            m2: self.m2.to_string(),
            m2_lower_bound: self.m2_lower_bound.to_string(),
        })
        .expect("plain record")
    }
}

/// Exact first and second moments of `N_z` over all windows.
pub fn moments(p: &Packing) -> MomentReport {
    let d = p.dim();
    let counts = window_counts(p);
    let denom = pow(4, d);
    let s1: i64 = counts.iter().map(|&c| c as i64).sum();
    let s2: i64 = counts.iter().map(|&c| (c as i64) * (c as i64)).sum();
    let m1 = Rational64::new(s1, denom);
    debug_assert_eq!(m1, Rational64::new(pow(3, d) * p.len() as i64, denom));
    MomentReport {
        dim: d,
        size: p.len(),
        m1,
        m2: Rational64::new(s2, denom),
        m2_lower_bound: m2_lower_bound(d, p.len()),
        window_counts: counts,
        deficit: p.deficit(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStat {
    pub a: Code,
    pub b: Code,
    /// Coordinates on which the two labels agree.
    pub mu: u32,
    /// `3^μ · 2^(d−μ)`.
    pub t_formula: u64,
    /// Windows containing both cubes, counted directly.
    pub t_brute: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnStat {
    pub coord: usize,
    /// Σ_u d_u(d_u − 1)/2 with `d_u` the number of cubes having digit `u` here.
    pub r: u64,
    /// `2q(q−1) + rq` for `N = 4q + r`.
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStats {
    pub pairs: Vec<PairStat>,
    pub columns: Vec<ColumnStat>,
}

impl PairStats {
    pub fn formulas_agree(&self) -> bool {
        self.pairs.iter().all(|p| p.t_formula == p.t_brute)
    }

    pub fn columns_bounded(&self) -> bool {
        self.columns.iter().all(|c| c.r >= c.bound)
    }
}

pub fn window_pair_stats(p: &Packing) -> PairStats {
    let (d, codes) = (p.dim(), p.codes());
    let mut pairs = Vec::new();
    for (i, &a) in codes.iter().enumerate() {
        for &b in &codes[i + 1..] {
            let mu = equal_coordinates(d, a, b);
            let t_brute =
                (0..label_count(d) as Code).filter(|&z| contains(d, z, a) && contains(d, z, b)).count() as u64;
            let t_formula = 3u64.pow(mu) << (d as u32 - mu);
            pairs.push(PairStat { a, b, mu, t_formula, t_brute });
        }
    }
    let n = codes.len() as u64;
    let (q, r) = (n / 4, n % 4);
    let bound = 2 * q * q.saturating_sub(1) + r * q;
    let columns = (0..d)
        .map(|i| {
            let mut hist = [0u64; 4];
            for &x in codes {
                hist[crate::label::digit(d, x, i) as usize] += 1;
            }
            let r = hist.iter().map(|&h| h * h.saturating_sub(1) / 2).sum();
            ColumnStat { coord: i, r, bound }
        })
        .collect();
    PairStats { pairs, columns }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::{regular_tiling, sparse_packing_3d};
    use crate::stochastic::{random_packing, SearchConfig};

    fn corner(c: &[u8]) -> WindowCorner {
        WindowCorner::new(c).unwrap()
    }

    #[test]
    fn one_dimensional_windows() {
        let r = regular_tiling(1).unwrap();
        let got: Vec<usize> = (0..4).map(|z| window_count(&r, corner(&[z])).unwrap()).collect();
        assert_eq!(got, [2, 1, 2, 1]);
        assert!(window_count(&r, corner(&[0, 0])).is_err());
        assert!(window_counts(&Packing::empty(3).unwrap()).iter().all(|&c| c == 0));
    }

    // Interval oracle: the lift of [x, x+2) starting at offset (x − z) mod 4
    // from z must end by z + 4.
    fn contains_geometric(z: &[u8], x: &[u8]) -> bool {
        z.iter().zip(x).all(|(&z, &x)| (x + 4 - z) % 4 + 2 <= 4)
    }

    #[test]
    fn containment_matches_geometry() {
        let d = 2;
        for z in 0..16 {
            for x in 0..16 {
                let zc = crate::label::decode(d, z);
                let xc = crate::label::decode(d, x);
                assert_eq!(contains(d, z, x), contains_geometric(&zc, &xc));
            }
        }
        for d in 1..=4 {
            for x in 0..label_count(d) as Code {
                let n = (0..label_count(d) as Code).filter(|&z| contains(d, z, x)).count();
                assert_eq!(n, 3usize.pow(d as u32));
            }
        }
    }

    #[test]
    fn regular_tiling_second_moment() {
        for d in 1..=6 {
            let m = moments(&regular_tiling(d).unwrap());
            assert_eq!(m.m2, Rational64::new(5i64.pow(d as u32), 2i64.pow(d as u32)), "d={d}");
            assert!(m.satisfies_bound());
        }
        assert_eq!(moments(&regular_tiling(2).unwrap()).m1, Rational64::new(9, 4));
    }

    #[test]
    fn sparse_packing_moments() {
        let p = sparse_packing_3d();
        let m = moments(&p);
        assert_eq!(m.m1, Rational64::new(27, 16));
        let counts: Vec<i64> = (0..64u16).map(|z| count_at(3, p.codes(), z) as i64).collect();
        assert_eq!(m.m2, Rational64::new(counts.iter().map(|c| c * c).sum(), 64));
        assert!(m.satisfies_bound());
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(m2_lower_bound(2, 4), Rational64::new(21, 4));
        assert_eq!(m2_lower_bound(5, 0), Rational64::new(0, 1));
        assert_eq!(m2_lower_bound(3, 1), Rational64::new(27, 64));
    }

    #[test]
    fn pair_formula_matches_brute_force() {
        let r = regular_tiling(1).unwrap();
        let s = window_pair_stats(&r);
        assert_eq!(s.pairs.len(), 1);
        assert_eq!((s.pairs[0].mu, s.pairs[0].t_brute), (0, 2));
        for d in 2..=4 {
            for seed in 0..20 {
                let p = random_packing(d, &SearchConfig { seed, ..Default::default() }).unwrap();
                let s = window_pair_stats(&p);
                assert!(s.formulas_agree() && s.columns_bounded());
                assert!(moments(&p).satisfies_bound());
            }
        }
    }

    #[test]
    fn report_serialises_rationals_as_text() {
        let m = moments(&regular_tiling(4).unwrap());
        assert!(m.to_json().contains("\"m2\":\"625/16\""));
        assert!(m.to_row().contains("625/16"));
    }
}
