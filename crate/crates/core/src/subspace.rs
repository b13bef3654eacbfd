//! Subspaces of `Q^n` kept in reduced row echelon form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

/// A linear subspace of `Q^n`, stored as the nonzero rows of its RREF basis.
///
/// Two subspaces are equal exactly when their stored bases are equal. The
/// derived ordering compares ambient dimension and then the bases
/// lexicographically, which is the tie-break used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace::from_vectors(ambient, &RatMatrix::identity(ambient).to_rows())
            .expect("identity rows")
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn from_vectors(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in Q^{ambient}",
                v.len()
            )));
        }
        if vectors.is_empty() || ambient == 0 {
            return Ok(Subspace::zero(ambient));
        }
        let m = RatMatrix::from_rows(vectors.to_vec())?;
        let (r, pivots) = m.rref();
        Ok(Subspace {
            ambient,
            basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
        })
    }

    /// Coordinate subspace spanned by the given standard basis vectors.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vec<Rational>> = indices
            .iter()
            .map(|&i| unit(ambient, i))
            .collect();
        Subspace::from_vectors(ambient, &vs).expect("unit vectors")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient {
            return None;
        }
        let pivots = self.pivots();
        let coords: Vec<Rational> = pivots.iter().map(|&c| v[c].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(&self.basis) {
            for (r, x) in residual.iter_mut().zip(row) {
                *r -= &(c * x);
            }
        }
        residual.iter().all(Rational::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.ambient, &vs).expect("same ambient")
    }

    /// Annihilator under the standard pairing `<u, v> = sum u_i v_i`.
    pub fn perp(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::whole(self.ambient);
        }
        let m = RatMatrix::from_rows(self.basis.clone()).expect("rectangular");
        Subspace::from_vectors(self.ambient, &m.nullspace()).expect("same ambient")
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        self.perp().sum(&other.perp()).perp()
    }

    /// Image under `m` acting on column vectors.
    pub fn image(&self, m: &RatMatrix) -> Subspace {
        let vs: Vec<Vec<Rational>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_vectors(m.rows(), &vs).expect("matrix rows")
    }

    /// Preimage-free stability test: `m(W) ⊆ W`.
    pub fn is_stable(&self, m: &RatMatrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Smallest `m`-stable subspace containing `self`.
    pub fn closure(&self, ms: &[&RatMatrix]) -> Subspace {
        let mut cur = self.clone();
        loop {
            let mut next = cur.clone();
            for m in ms {
                next = next.sum(&cur.image(m));
            }
            if next.dim() == cur.dim() {
                return cur;
            }
            cur = next;
        }
    }

    /// Vectors extending a basis of `self` to a basis of `outer`, chosen
    /// greedily from `outer`'s RREF rows.
    pub fn complement_in(&self, outer: &Subspace) -> Vec<Vec<Rational>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in &outer.basis {
            if !acc.contains(v) {
                acc = acc.sum(&Subspace::from_vectors(self.ambient, std::slice::from_ref(v)).unwrap());
                out.push(v.clone());
            }
        }
        out
    }

    /// Matrix whose rows are the basis vectors.
    pub fn as_matrix(&self) -> RatMatrix {
        if self.basis.is_empty() {
            RatMatrix::zeros(0, self.ambient)
        } else {
            RatMatrix::from_rows(self.basis.clone()).unwrap()
        }
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?} in Q^{}", self.basis, self.ambient)
    }
}

#[derive(Deserialize)]
struct RawSubspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSubspace::deserialize(d)?;
        Subspace::from_vectors(raw.ambient, &raw.basis).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::from_vectors(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = Subspace::from_vectors(3, &[v(&[0, 1, 1]), v(&[1, 1, 0])]).unwrap();
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[1, 1, 0])));
        assert!(a.sum(&b).is_whole());
        assert_eq!(a.perp(), Subspace::coordinate(3, &[2]));
    }

    #[test]
    fn canonical_form() {
        let a = Subspace::from_vectors(2, &[v(&[2, 2]), v(&[3, 3])]).unwrap();
        let b = Subspace::from_vectors(2, &[v(&[1, 1])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coordinates(&v(&[5, 5])), Some(v(&[5])));
        assert_eq!(a.coordinates(&v(&[5, 4])), None);
    }

    #[test]
    fn stability_and_closure() {
        let n = RatMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e3 = Subspace::coordinate(3, &[2]);
        assert!(!e3.is_stable(&n));
        assert!(e3.closure(&[&n]).is_whole());
        assert!(Subspace::coordinate(3, &[0]).is_stable(&n));
    }
}
