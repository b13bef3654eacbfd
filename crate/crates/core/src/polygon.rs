//! Lower convex hulls and Newton polygons.
//!
//! [`newton_polygon`] reports the *negated* hull slopes, so each returned
//! slope is the `p`-adic valuation of a root. With this convention the slopes
//! of a Frobenius matrix are the valuations of its eigenvalues.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{check_prime, valuation_unchecked, ExtendedValuation, Rational};

/// Vertices of a lower convex polygon, `x` strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polygon {
    vertices: Vec<(i64, Rational)>,
}

impl Polygon {
    /// Lower convex hull of a point set (monotone chain).
    pub fn lower_hull(points: &[(i64, Rational)]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup_by(|b, a| a.0 == b.0);
        if pts.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let mut hull: Vec<(i64, Rational)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 && !turns_left(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) {
                hull.pop();
            }
            hull.push(p);
        }
        Ok(Polygon { vertices: hull })
    }

    /// Polygon through the partial sums of an ascending slope list, starting
    /// at the origin. Each `(slope, multiplicity)` pair is one segment.
    pub fn from_slopes(slopes: &[(Rational, u64)]) -> Self {
        let mut x = 0i64;
        let mut y = Rational::zero();
        let mut vertices = vec![(0, Rational::zero())];
        for (s, m) in slopes {
            x += *m as i64;
            y += &(s * Rational::from(*m as i64));
            vertices.push((x, y.clone()));
        }
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[(i64, Rational)] {
        &self.vertices
    }

    /// Segment slopes with horizontal lengths, left to right.
    pub fn slopes(&self) -> Vec<(Rational, u64)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let dx = w[1].0 - w[0].0;
                ((&w[1].1 - &w[0].1) / Rational::from(dx), dx as u64)
            })
            .collect()
    }

    pub fn is_convex(&self) -> bool {
        let s = self.slopes();
        self.vertices.windows(2).all(|w| w[0].0 < w[1].0) && s.windows(2).all(|w| w[0].0 <= w[1].0)
    }
}

// strict left turn; collinear middle points are dropped
fn turns_left(a: &(i64, Rational), b: &(i64, Rational), c: &(i64, Rational)) -> bool {
    let lhs = (&b.1 - &a.1) * Rational::from(c.0 - a.0);
    let rhs = (&c.1 - &a.1) * Rational::from(b.0 - a.0);
    lhs < rhs
}

/// Lower hull by gift wrapping; quadratic, used only to cross-check.
pub fn lower_hull_gift_wrap(points: &[(i64, Rational)]) -> Vec<(i64, Rational)> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup_by(|b, a| a.0 == b.0);
    let Some(first) = pts.first().cloned() else {
        return Vec::new();
    };
    let mut hull = vec![first];
    loop {
        let cur = hull.last().unwrap().clone();
        // among points to the right, take the least slope, farthest on ties
        let next = pts
            .iter()
            .filter(|q| q.0 > cur.0)
            .map(|q| ((&q.1 - &cur.1) / Rational::from(q.0 - cur.0), q))
            .min_by(|(s1, q1), (s2, q2)| s1.cmp(s2).then(q2.0.cmp(&q1.0)));
        match next {
            Some((_, q)) => hull.push(q.clone()),
            None => return hull,
        }
    }
}

fn trim(coeffs: &[Rational]) -> &[Rational] {
    let end = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    &coeffs[..end]
}

/// Newton slopes of a polynomial with respect to `p`, as root valuations in
/// ascending order with multiplicities summing to the degree.
pub fn newton_polygon(coeffs: &[Rational], p: u64) -> Result<Vec<(Rational, u64)>> {
    check_prime(p)?;
    let coeffs = trim(coeffs);
    if coeffs.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if coeffs[0].is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(newton_points(coeffs, p))
}

fn newton_points(coeffs: &[Rational], p: u64) -> Vec<(Rational, u64)> {
    let pts: Vec<(i64, Rational)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match valuation_unchecked(c, p) {
            ExtendedValuation::Finite(v) => Some((i as i64, v)),
            ExtendedValuation::Infinity => None,
        })
        .collect();
    let hull = Polygon::lower_hull(&pts).expect("constant term present");
    let mut out: Vec<(Rational, u64)> = hull.slopes().into_iter().map(|(s, m)| (-s, m)).collect();
    out.sort();
    merge_equal(out)
}

/// Same result as [`newton_polygon`] computed through gift wrapping.
pub fn newton_polygon_oracle(coeffs: &[Rational], p: u64) -> Result<Vec<(Rational, u64)>> {
    check_prime(p)?;
    let coeffs = trim(coeffs);
    if coeffs.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if coeffs[0].is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let pts: Vec<(i64, Rational)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| valuation_unchecked(c, p).finite().map(|v| (i as i64, v.clone())))
        .collect();
    let hull = lower_hull_gift_wrap(&pts);
    let mut out: Vec<(Rational, u64)> = hull
        .windows(2)
        .map(|w| {
            let dx = w[1].0 - w[0].0;
            (-((&w[1].1 - &w[0].1) / Rational::from(dx)), dx as u64)
        })
        .collect();
    out.sort();
    Ok(merge_equal(out))
}

/// Merges adjacent equal slopes of a sorted list.
pub(crate) fn merge_equal(sorted: Vec<(Rational, u64)>) -> Vec<(Rational, u64)> {
    let mut out: Vec<(Rational, u64)> = Vec::with_capacity(sorted.len());
    for (s, m) in sorted {
        match out.last_mut() {
            Some((t, n)) if *t == s => *n += m,
            _ => out.push((s, m)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn spec_examples() {
        let p = 3;
        assert_eq!(newton_polygon(&[q(-1), q(1)], p).unwrap(), vec![(q(0), 1)]);
        assert_eq!(
            newton_polygon(&[q(-3), q(0), q(1)], p).unwrap(),
            vec![(Rational::frac(1, 2), 2)]
        );
        assert_eq!(
            newton_polygon(&[q(3), q(-4), q(1)], p).unwrap(),
            vec![(q(0), 1), (q(1), 1)]
        );
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(newton_polygon(&[], 2), Err(Error::ZeroPolynomial));
        assert_eq!(newton_polygon(&[q(0), q(0)], 2), Err(Error::ZeroPolynomial));
        assert_eq!(newton_polygon(&[q(0), q(1)], 2), Err(Error::ZeroConstantTerm));
        assert_eq!(newton_polygon(&[q(1)], 4), Err(Error::NotPrime(4)));
        assert_eq!(newton_polygon(&[q(7)], 2).unwrap(), vec![]);
    }

    #[test]
    fn collinear_points_merge() {
        // x^3 - 8 at p = 2: points (0,3), (3,0), single slope 1 with multiplicity 3
        assert_eq!(newton_polygon(&[q(-8), q(0), q(0), q(1)], 2).unwrap(), vec![(q(1), 3)]);
        // 4 + 2x + x^2 also lies on one segment
        assert_eq!(newton_polygon(&[q(4), q(2), q(1)], 2).unwrap(), vec![(q(1), 2)]);
    }

    #[test]
    fn hull_matches_gift_wrap() {
        let pts: Vec<(i64, Rational)> = vec![(0, q(4)), (1, q(1)), (2, q(3)), (3, q(0)), (5, q(2))];
        let hull = Polygon::lower_hull(&pts).unwrap();
        assert_eq!(hull.vertices(), &lower_hull_gift_wrap(&pts)[..]);
        assert!(hull.is_convex());
    }
}
