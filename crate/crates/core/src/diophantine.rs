//! Lattice points of `tau * x + y = n + s * tau` inside an axis-aligned
//! rectangle.
//!
//! For the trajectory matrix of a type-`s` series these points are exactly
//! the `(row, col)` cells that hold sample `x[n]`: type-0 uses the rectangle
//! `(0, d-1, 0, m-1)` and type-1 uses `(1, d, 1, m)`.

use crate::error::{Error, Result};
use crate::series::IndexConvention;

/// `floor(a / b)` for `b > 0`, rounding toward negative infinity.
pub fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a / b;
    if a % b != 0 && a < 0 {
        q - 1
    } else {
        q
    }
}

/// `ceil(a / b)` for `b > 0`, rounding toward positive infinity.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a / b;
    if a % b != 0 && a > 0 {
        q + 1
    } else {
        q
    }
}

/// Closed integer rectangle `[alpha1, alpha2] x [beta1, beta2]`.
///
/// Degenerate sides (`alpha1 == alpha2`, `beta1 == beta2`) are allowed so
/// that `d = 1` and `m = 1` embeddings have a rectangle too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rectangle {
    alpha1: i64,
    alpha2: i64,
    beta1: i64,
    beta2: i64,
}

impl Rectangle {
    pub fn new(alpha1: i64, alpha2: i64, beta1: i64, beta2: i64) -> Result<Self> {
        if alpha1 < 0 || beta1 < 0 || alpha1 > alpha2 || beta1 > beta2 {
            return Err(Error::InvalidRectangle {
                alpha1,
                alpha2,
                beta1,
                beta2,
            });
        }
        Ok(Rectangle {
            alpha1,
            alpha2,
            beta1,
            beta2,
        })
    }

    /// Cell rectangle of a `d x m` matrix in the given convention.
    pub fn for_matrix(d: usize, m: usize, convention: IndexConvention) -> Result<Self> {
        let s = convention.flag();
        if d == 0 || m == 0 {
            return Err(Error::InvalidRectangle {
                alpha1: s,
                alpha2: d as i64 - 1 + s,
                beta1: s,
                beta2: m as i64 - 1 + s,
            });
        }
        Rectangle::new(s, d as i64 - 1 + s, s, m as i64 - 1 + s)
    }

    pub fn alpha1(&self) -> i64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> i64 {
        self.alpha2
    }

    pub fn beta1(&self) -> i64 {
        self.beta1
    }

    pub fn beta2(&self) -> i64 {
        self.beta2
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        (self.alpha1..=self.alpha2).contains(&x) && (self.beta1..=self.beta2).contains(&y)
    }
}

/// Solutions of the constrained equation, ordered by ascending `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub n: i64,
    pub tau: i64,
    pub s: i64,
    pub points: Vec<(i64, i64)>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (i64, i64)> {
        self.points.iter()
    }

    pub fn contains(&self, point: (i64, i64)) -> bool {
        self.points.contains(&point)
    }
}

impl<'a> IntoIterator for &'a SolutionSet {
    type Item = &'a (i64, i64);
    type IntoIter = std::slice::Iter<'a, (i64, i64)>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Range of admissible `x`. An empty solution set is signalled by
/// `x_min > x_max`.
///
/// # Panics
///
/// If `tau < 1`.
pub fn x_bounds(n: i64, tau: i64, s: IndexConvention, rect: &Rectangle) -> (i64, i64) {
    assert!(tau >= 1, "time delay must be positive");
    let rhs = n + s.flag() * tau;
    let x_min = rect.alpha1.max(ceil_div(rhs - rect.beta2, tau));
    let x_max = rect.alpha2.min(floor_div(rhs - rect.beta1, tau));
    (x_min, x_max)
}

pub fn solve_constrained(n: i64, tau: i64, s: IndexConvention, rect: &Rectangle) -> SolutionSet {
    let (x_min, x_max) = x_bounds(n, tau, s, rect);
    let rhs = n + s.flag() * tau;
    let points = (x_min..=x_max).map(|x| (x, rhs - x * tau)).collect();
    SolutionSet {
        n,
        tau,
        s: s.flag(),
        points,
    }
}

pub fn count_solutions(n: i64, tau: i64, s: IndexConvention, rect: &Rectangle) -> i64 {
    let (x_min, x_max) = x_bounds(n, tau, s, rect);
    (x_max - x_min + 1).max(0)
}

/// Bounds for the type-0 matrix rectangle `(0, d-1, 0, m-1)`.
pub fn bounds_type0(n: i64, tau: i64, d: i64, m: i64) -> (i64, i64) {
    let x_min = 0.max(ceil_div(n - m + 1, tau));
    let x_max = (d - 1).min(floor_div(n, tau));
    (x_min, x_max)
}

/// Bounds for the type-1 matrix rectangle `(1, d, 1, m)`.
pub fn bounds_type1(n: i64, tau: i64, d: i64, m: i64) -> (i64, i64) {
    let x_min = 1.max(ceil_div(n + tau - m, tau));
    let x_max = d.min(floor_div(n + tau - 1, tau));
    (x_min, x_max)
}

/// Number of cells holding `x[n]` for a type-1, unit-delay `d x m` matrix.
///
/// Grows as `n` up to `d* = min(d, m)`, stays at `d*` until
/// `m* = max(d, m)`, then falls as `N - n + 1` with `N = d + m - 1`.
pub fn unit_delay_cardinality(n: i64, d: i64, m: i64) -> Result<i64> {
    let d_star = d.min(m);
    let m_star = d.max(m);
    let len = d_star + m_star - 1;
    if n < 1 || n > len {
        return Err(Error::IndexOutOfRange {
            index: n,
            lo: 1,
            hi: len,
        });
    }
    Ok(if n < d_star {
        n
    } else if n <= m_star {
        d_star
    } else {
        len - n + 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S0: IndexConvention = IndexConvention::ZeroBased;
    const S1: IndexConvention = IndexConvention::OneBased;

    fn brute_force(n: i64, tau: i64, s: IndexConvention, r: &Rectangle) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in r.alpha1()..=r.alpha2() {
            for y in r.beta1()..=r.beta2() {
                if tau * x + y == n + s.flag() * tau {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn rect(a1: i64, a2: i64, b1: i64, b2: i64) -> Rectangle {
        Rectangle::new(a1, a2, b1, b2).unwrap()
    }

    #[test]
    fn floor_and_ceil_round_mathematically() {
        assert_eq!(floor_div(7, 3), 2);
        assert_eq!(floor_div(-7, 3), -3);
        assert_eq!(floor_div(-6, 3), -2);
        assert_eq!(ceil_div(7, 3), 3);
        assert_eq!(ceil_div(-7, 3), -2);
        assert_eq!(ceil_div(-6, 3), -2);
        assert_eq!(ceil_div(0, 5), 0);
        for a in -50..50 {
            for b in 1..9 {
                let q = a as f64 / b as f64;
                assert_eq!(floor_div(a, b), q.floor() as i64);
                assert_eq!(ceil_div(a, b), q.ceil() as i64);
            }
        }
    }

    #[test]
    fn x_bounds_examples() {
        assert_eq!(x_bounds(9, 3, S0, &rect(0, 6, 0, 8)), (1, 3));
        assert_eq!(x_bounds(9, 3, S1, &rect(1, 7, 1, 9)), (1, 3));
        assert_eq!(x_bounds(0, 1, S0, &rect(0, 0, 0, 0)), (0, 0));
    }

    #[test]
    fn solve_examples() {
        let g = solve_constrained(9, 3, S0, &rect(0, 6, 0, 8));
        assert_eq!(g.points, vec![(1, 6), (2, 3), (3, 0)]);
        let g = solve_constrained(16, 3, S1, &rect(1, 7, 1, 9));
        assert_eq!(g.points, vec![(4, 7), (5, 4), (6, 1)]);
        let r = rect(0, 6, 0, 8);
        let g = solve_constrained(6, 3, S0, &r);
        assert_eq!(g.points, brute_force(6, 3, S0, &r));
        assert_eq!(g.points, vec![(0, 6), (1, 3), (2, 0)]);
    }

    #[test]
    fn empty_solution_set() {
        let r = rect(3, 6, 0, 1);
        assert!(brute_force(2, 5, S0, &r).is_empty());
        assert!(solve_constrained(2, 5, S0, &r).is_empty());
        assert_eq!(count_solutions(2, 5, S0, &r), 0);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_solutions(3, 3, S0, &rect(0, 6, 0, 8)), 2);
        assert_eq!(count_solutions(26, 3, S0, &rect(0, 6, 0, 8)), 1);
        assert_eq!(count_solutions(27, 3, S1, &rect(1, 7, 1, 9)), 1);
    }

    #[test]
    fn specialised_bounds_examples() {
        assert_eq!(bounds_type0(12, 3, 7, 9), (2, 4));
        assert_eq!(bounds_type0(0, 3, 7, 9), (0, 0));
        let r = rect(0, 2, 0, 10);
        let bf = brute_force(14, 2, S0, &r);
        assert_eq!(bf, vec![(2, 10)]);
        assert_eq!(bounds_type0(14, 2, 3, 11), (2, 2));

        assert_eq!(bounds_type1(10, 3, 7, 9), (2, 4));
        assert_eq!(bounds_type1(1, 3, 7, 9), (1, 1));
        let r = rect(1, 4, 1, 6);
        let bf = brute_force(5, 1, S1, &r);
        assert_eq!((bf[0].0, bf[bf.len() - 1].0), (1, 4));
        assert_eq!(bounds_type1(5, 1, 4, 6), (1, 4));
    }

    #[test]
    fn ceiling_lower_bound_differs_from_floor() {
        // n - m + 1 = 2 is not a multiple of tau; a floor would admit y = m.
        let (x_min, _) = bounds_type0(10, 3, 7, 9);
        assert_eq!(x_min, 1);
        assert_eq!(floor_div(10 - 9 + 1, 3), 0);
        assert!(!rect(0, 6, 0, 8).contains(0, 10));
    }

    #[test]
    fn unit_delay_examples() {
        assert_eq!(unit_delay_cardinality(3, 7, 9), Ok(3));
        assert_eq!(unit_delay_cardinality(8, 7, 9), Ok(7));
        assert_eq!(unit_delay_cardinality(15, 7, 9), Ok(1));
        assert!(matches!(
            unit_delay_cardinality(16, 7, 9),
            Err(Error::IndexOutOfRange {
                index: 16,
                lo: 1,
                hi: 15
            })
        ));
        assert!(unit_delay_cardinality(0, 7, 9).is_err());
    }

    #[test]
    fn rectangle_validation() {
        assert!(Rectangle::new(-1, 2, 0, 1).is_err());
        assert!(Rectangle::new(3, 2, 0, 1).is_err());
        assert!(Rectangle::new(0, 0, 5, 5).is_ok());
        assert_eq!(Rectangle::for_matrix(7, 9, S1).unwrap(), rect(1, 7, 1, 9));
        assert!(Rectangle::for_matrix(0, 9, S0).is_err());
    }

    proptest! {
        #[test]
        fn matches_exhaustive_scan(
            n in 0i64..80, tau in 1i64..9, s in 0i64..2,
            a1 in 0i64..6, da in 0i64..8, b1 in 0i64..6, db in 0i64..12,
        ) {
            let conv = IndexConvention::from_flag(s).unwrap();
            let r = rect(a1, a1 + da, b1, b1 + db);
            let g = solve_constrained(n, tau, conv, &r);
            prop_assert_eq!(&g.points, &brute_force(n, tau, conv, &r));
            prop_assert_eq!(g.len() as i64, count_solutions(n, tau, conv, &r));
            for &(x, y) in &g {
                prop_assert_eq!(tau * x + y, n + s * tau);
                prop_assert!(r.contains(x, y));
            }
            prop_assert!(g.points.windows(2).all(|w| w[0].0 < w[1].0));
        }

        #[test]
        fn specialisations_agree(tau in 1i64..9, d in 1i64..17, m in 1i64..17) {
            let len = m + (d - 1) * tau;
            let r0 = Rectangle::for_matrix(d as usize, m as usize, S0).unwrap();
            let r1 = Rectangle::for_matrix(d as usize, m as usize, S1).unwrap();
            // Every sample is housed somewhere iff the rows overlap or touch.
            let covering = d == 1 || m >= tau;
            for n in 0..len {
                prop_assert_eq!(bounds_type0(n, tau, d, m), x_bounds(n, tau, S0, &r0));
                if covering {
                    prop_assert!(count_solutions(n, tau, S0, &r0) >= 1);
                }
            }
            for n in 1..=len {
                prop_assert_eq!(bounds_type1(n, tau, d, m), x_bounds(n, tau, S1, &r1));
                if covering {
                    prop_assert!(count_solutions(n, tau, S1, &r1) >= 1);
                }
            }
            if !covering {
                let empty = (0..len).filter(|&n| count_solutions(n, tau, S0, &r0) == 0).count();
                prop_assert!(empty > 0);
            }
        }

        #[test]
        fn unit_delay_law(d in 1i64..17, m in 1i64..17) {
            let r = Rectangle::for_matrix(d as usize, m as usize, S1).unwrap();
            for n in 1..=(d + m - 1) {
                prop_assert_eq!(unit_delay_cardinality(n, d, m).unwrap(), count_solutions(n, 1, S1, &r));
            }
        }
    }
}
