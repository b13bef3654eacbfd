//! Coherent sheaves on the Fargues–Fontaine curve in classification normal
//! form: a sum of stable bundles `O(d/h)` plus torsion at labeled points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Label of the point at infinity.
pub const INFTY: &str = "infty";

/// `d` and `h` of a slope `d/h` in lowest terms.
pub fn slope_parts(s: &Rational) -> (i64, i64) {
    s.to_i64_pair().expect("slope fits in i64")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FFSheaf {
    /// `(slope, copies)`, slopes strictly decreasing.
    bundle: Vec<(Rational, u64)>,
    /// Torsion lengths per point, each list ascending.
    torsion: BTreeMap<String, Vec<u64>>,
}

impl FFSheaf {
    pub fn zero() -> Self {
        FFSheaf {
            bundle: Vec::new(),
            torsion: BTreeMap::new(),
        }
    }

    /// `O(λ)^copies`.
    pub fn stable(slope: Rational, copies: u64) -> Self {
        FFSheaf::new(vec![(slope, copies)], BTreeMap::new())
    }

    pub fn torsion_at(point: &str, lengths: Vec<u64>) -> Result<Self> {
        let mut t = BTreeMap::new();
        t.insert(point.to_string(), lengths);
        FFSheaf::with_torsion(Vec::new(), t)
    }

    /// Sum of `copies` of each `O(slope)`; zero copies are dropped.
    pub fn new(bundle: Vec<(Rational, u64)>, torsion: BTreeMap<String, Vec<u64>>) -> Self {
        FFSheaf::with_torsion(bundle, torsion).expect("positive torsion lengths")
    }

    fn with_torsion(bundle: Vec<(Rational, u64)>, torsion: BTreeMap<String, Vec<u64>>) -> Result<Self> {
        let mut merged: BTreeMap<Rational, u64> = BTreeMap::new();
        for (s, c) in bundle {
            if c > 0 {
                *merged.entry(s).or_default() += c;
            }
        }
        let mut tors = BTreeMap::new();
        for (pt, mut ls) in torsion {
            if ls.contains(&0) {
                return Err(Error::InvalidSheaf(format!("zero torsion length at {pt}")));
            }
            if ls.is_empty() {
                continue;
            }
            ls.sort_unstable();
            tors.entry(pt).or_insert_with(Vec::new).extend(ls);
        }
        for ls in tors.values_mut() {
            ls.sort_unstable();
        }
        Ok(FFSheaf {
            bundle: merged.into_iter().rev().collect(),
            torsion: tors,
        })
    }

    /// Bundle from `(slope, rank)` pairs: a rank `ρ` at slope `d/h` becomes
    /// `ρ/h` copies of `O(d/h)`.
    pub fn canonicalize(raw: &[(Rational, u64)]) -> Result<Self> {
        let mut bundle = Vec::with_capacity(raw.len());
        for (s, rho) in raw {
            let (_, h) = slope_parts(s);
            let h = h as u64;
            if rho % h != 0 {
                return Err(Error::InvalidSheaf(format!(
                    "rank {rho} at slope {s} is not a multiple of {h}"
                )));
            }
            bundle.push((s.clone(), rho / h));
        }
        Ok(FFSheaf::new(bundle, BTreeMap::new()))
    }

    pub fn bundle(&self) -> &[(Rational, u64)] {
        &self.bundle
    }

    pub fn torsion(&self) -> &BTreeMap<String, Vec<u64>> {
        &self.torsion
    }

    pub fn is_bundle(&self) -> bool {
        self.torsion.is_empty()
    }

    /// `(slope, rank)` pairs, the inverse of [`FFSheaf::canonicalize`].
    pub fn slope_ranks(&self) -> Vec<(Rational, u64)> {
        self.bundle
            .iter()
            .map(|(s, c)| (s.clone(), c * slope_parts(s).1 as u64))
            .collect()
    }

    pub fn rank(&self) -> u64 {
        self.slope_ranks().iter().map(|x| x.1).sum()
    }

    /// Degree of the bundle part plus total torsion length.
    pub fn degree(&self) -> i64 {
        let b: i64 = self
            .bundle
            .iter()
            .map(|(s, c)| slope_parts(s).0 * *c as i64)
            .sum();
        b + self.torsion_length() as i64
    }

    pub fn torsion_length(&self) -> u64 {
        self.torsion.values().flatten().sum()
    }

    pub fn direct_sum(&self, other: &FFSheaf) -> FFSheaf {
        let mut bundle = self.bundle.clone();
        bundle.extend(other.bundle.iter().cloned());
        let mut torsion = self.torsion.clone();
        for (pt, ls) in &other.torsion {
            torsion.entry(pt.clone()).or_default().extend(ls.iter().copied());
        }
        FFSheaf::new(bundle, torsion)
    }

    /// `O(λ1) ⊗ O(λ2) = O(λ1+λ2)^n` with `n = h1 h2 / h`, extended
    /// bilinearly; a bundle of rank `ρ` tensored with torsion repeats each
    /// length `ρ` times.
    pub fn tensor(&self, other: &FFSheaf) -> Result<FFSheaf> {
        if !self.torsion.is_empty() && !other.torsion.is_empty() {
            return Err(Error::TorsionTensor);
        }
        let mut bundle = Vec::new();
        for (s1, c1) in &self.bundle {
            for (s2, c2) in &other.bundle {
                let s = s1 + s2;
                let n = slope_parts(s1).1 * slope_parts(s2).1 / slope_parts(&s).1;
                bundle.push((s, c1 * c2 * n as u64));
            }
        }
        let mut torsion: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for (bun, tor) in [(self, other), (other, self)] {
            let rho = bun.rank() as usize;
            for (pt, ls) in &tor.torsion {
                let entry = torsion.entry(pt.clone()).or_default();
                for l in ls {
                    entry.extend(std::iter::repeat(*l).take(rho));
                }
            }
        }
        Ok(FFSheaf::new(bundle, torsion))
    }

    pub fn dual(&self) -> Result<FFSheaf> {
        if !self.torsion.is_empty() {
            return Err(Error::InvalidSheaf("dual of a torsion sheaf".into()));
        }
        Ok(FFSheaf::new(
            self.bundle.iter().map(|(s, c)| (-s, *c)).collect(),
            BTreeMap::new(),
        ))
    }

    /// Dimensions of `H^0` and `H^1`. A stable `O(d/h)` contributes `(d, h)`
    /// to `H^0` when `d ≥ 0` and `(-d, -h)` to `H^1` when `d < 0`; torsion of
    /// length `ℓ` contributes `(ℓ, 0)` to `H^0`.
    pub fn cohomology_dim(&self) -> CohomologyDim {
        let mut h0 = Dimension::ZERO;
        let mut h1 = Dimension::ZERO;
        for (s, c) in &self.bundle {
            let (d, h) = slope_parts(s);
            if d >= 0 {
                h0 = h0 + Dimension::new(d, h) * *c as i64;
            } else {
                h1 = h1 + Dimension::new(-d, -h) * *c as i64;
            }
        }
        h0 = h0 + Dimension::new(self.torsion_length() as i64, 0);
        CohomologyDim { h0, h1 }
    }

    /// Dimension of `Hom(self, other)`.
    pub fn hom_dim(&self, other: &FFSheaf) -> HomDim {
        let mut total = Dimension::ZERO;
        for (s1, c1) in &self.bundle {
            let (_, h1) = slope_parts(s1);
            for (s2, c2) in &other.bundle {
                let twist = FFSheaf::stable(-s1.clone(), 1)
                    .tensor(&FFSheaf::stable(s2.clone(), 1))
                    .expect("bundles");
                total = total + twist.cohomology_dim().h0 * (*c1 * *c2) as i64;
            }
            let len = other.torsion_length() as i64;
            total = total + Dimension::new(h1 * len, 0) * *c1 as i64;
        }
        let mut bdr_lengths = Vec::new();
        for (pt, ls) in &self.torsion {
            if let Some(ms) = other.torsion.get(pt) {
                for l in ls {
                    for m in ms {
                        bdr_lengths.push(*l.min(m));
                    }
                }
            }
        }
        bdr_lengths.sort_unstable();
        total = total + Dimension::new(bdr_lengths.iter().sum::<u64>() as i64, 0);
        let division_algebra = match (&self.bundle[..], &other.bundle[..]) {
            ([(s1, 1)], [(s2, 1)]) if s1 == s2 && self.is_bundle() && other.is_bundle() => {
                Some(s1.clone())
            }
            _ => None,
        };
        HomDim {
            dimension: total,
            qp_dimension: (total.dim == 0).then_some(total.ht),
            division_algebra,
            bdr_lengths,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDim {
    pub h0: Dimension,
    pub h1: Dimension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDim {
    /// Dimension of the Hom space as a Banach–Colmez space.
    pub dimension: Dimension,
    /// `Q_p`-dimension when the Hom space is finite dimensional.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub qp_dimension: Option<i64>,
    /// Invariant `λ` when both sheaves are the same stable bundle, whose
    /// endomorphisms form the division algebra `D_λ`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub division_algebra: Option<Rational>,
    /// Torsion part: `Hom` is the sum of `B_dR^+/t^m` for these `m`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub bdr_lengths: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BundleEntry {
    slope: Rational,
    copies: u64,
}

#[derive(Serialize, Deserialize)]
struct TorsionEntry {
    point: String,
    lengths: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SheafRaw {
    #[serde(default)]
    bundle: Vec<BundleEntry>,
    #[serde(default)]
    torsion: Vec<TorsionEntry>,
}

impl Serialize for FFSheaf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SheafRaw {
            bundle: self
                .bundle
                .iter()
                .map(|(slope, copies)| BundleEntry {
                    slope: slope.clone(),
                    copies: *copies,
                })
                .collect(),
            torsion: self
                .torsion
                .iter()
                .map(|(point, lengths)| TorsionEntry {
                    point: point.clone(),
                    lengths: lengths.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FFSheaf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SheafRaw::deserialize(d)?;
        let mut torsion: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for t in raw.torsion {
            torsion.entry(t.point).or_default().extend(t.lengths);
        }
        FFSheaf::with_torsion(
            raw.bundle.into_iter().map(|b| (b.slope, b.copies)).collect(),
            torsion,
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Rank multiplicity `h1 h2 / h` of `O(λ1) ⊗ O(λ2)`.
pub fn tensor_multiplicity(l1: &Rational, l2: &Rational) -> u64 {
    let h1 = slope_parts(l1).1;
    let h2 = slope_parts(l2).1;
    let h = slope_parts(&(l1 + l2)).1;
    debug_assert_eq!((h1 * h2) % h, 0);
    ((h1 * h2) / h) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(
            FFSheaf::canonicalize(&[(r(1, 2), 4)]).unwrap(),
            FFSheaf::stable(r(1, 2), 2)
        );
        assert_eq!(FFSheaf::canonicalize(&[(r(0, 1), 3)]).unwrap(), FFSheaf::stable(r(0, 1), 3));
        assert!(FFSheaf::canonicalize(&[(r(2, 3), 2)]).is_err());
        let s = FFSheaf::canonicalize(&[(r(1, 2), 2), (r(3, 1), 1), (r(1, 2), 2)]).unwrap();
        assert_eq!(FFSheaf::canonicalize(&s.slope_ranks()).unwrap(), s);
        assert_eq!(s.bundle()[0].0, r(3, 1));
    }

    #[test]
    fn tensor_examples() {
        let half = FFSheaf::stable(r(1, 2), 1);
        assert_eq!(half.tensor(&half).unwrap(), FFSheaf::stable(r(1, 1), 4));
        assert_eq!(
            half.tensor(&FFSheaf::stable(r(1, 3), 1)).unwrap(),
            FFSheaf::stable(r(5, 6), 1)
        );
        let e = FFSheaf::stable(r(-2, 3), 2).direct_sum(&FFSheaf::stable(r(1, 1), 1));
        assert_eq!(FFSheaf::stable(r(0, 1), 1).tensor(&e).unwrap(), e);
        let t = FFSheaf::torsion_at(INFTY, vec![2]).unwrap();
        assert_eq!(t.tensor(&t), Err(Error::TorsionTensor));
        let bt = half.tensor(&t).unwrap();
        assert_eq!(bt.torsion()[INFTY], vec![2, 2]);
    }

    #[test]
    fn cohomology_examples() {
        let c = FFSheaf::stable(r(1, 2), 1).cohomology_dim();
        assert_eq!((c.h0, c.h1), (Dimension::new(1, 2), Dimension::ZERO));
        let c = FFSheaf::stable(r(-1, 1), 1).cohomology_dim();
        assert_eq!((c.h0, c.h1), (Dimension::ZERO, Dimension::new(1, -1)));
        let c = FFSheaf::torsion_at(INFTY, vec![3]).unwrap().cohomology_dim();
        assert_eq!(c.h0, Dimension::new(3, 0));
    }

    #[test]
    fn hom_examples() {
        let half = FFSheaf::stable(r(1, 2), 1);
        let end = half.hom_dim(&half);
        assert_eq!(end.qp_dimension, Some(4));
        assert_eq!(end.division_algebra, Some(r(1, 2)));
        assert!(FFSheaf::stable(r(1, 1), 1)
            .hom_dim(&FFSheaf::stable(r(0, 1), 1))
            .dimension
            .is_zero());
        let x = FFSheaf::torsion_at("x", vec![1]).unwrap();
        let inf = FFSheaf::torsion_at(INFTY, vec![2]).unwrap();
        assert!(x.hom_dim(&inf).dimension.is_zero());
        assert_eq!(inf.hom_dim(&inf).bdr_lengths, vec![2]);
        assert_eq!(half.hom_dim(&inf).dimension, Dimension::new(4, 0));
    }
}
