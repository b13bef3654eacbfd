//! Hodge data: weight multisets and explicit descending flags.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::subspace::Subspace;

/// A finite descending filtration of `Q^n`.
///
/// Stored as jump indices `i_0 < i_1 < .. < i_k` with subspaces
/// `V_0 = Q^n ⊋ V_1 ⊋ .. ⊋ V_k ≠ 0`, where `Fil^i = V_j` for
/// `i_{j-1} < i ≤ i_j`, `Fil^i = Q^n` for `i ≤ i_0` and `Fil^i = 0` above `i_k`.
/// The weight `i_j` then has multiplicity `dim V_j - dim V_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    ambient: usize,
    steps: Vec<(i64, Subspace)>,
}

impl Flag {
    /// The filtration with `Fil^i` the span of each listed entry and the
    /// usual conventions in between. Entries may come in any order; they
    /// must be nested. If the lowest entry is a proper subspace, the whole
    /// space is placed one index below it.
    pub fn new(ambient: usize, entries: Vec<(i64, Subspace)>) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidFiltration(format!("index {} repeated", w[0].0)));
            }
            if !w[0].1.contains_subspace(&w[1].1) {
                return Err(Error::InvalidFiltration(format!(
                    "Fil^{} does not contain Fil^{}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(e) = entries.iter().find(|e| e.1.ambient() != ambient) {
            return Err(Error::InvalidFiltration(format!(
                "Fil^{} lives in Q^{}, expected Q^{ambient}",
                e.0,
                e.1.ambient()
            )));
        }
        if ambient > 0 {
            match entries.first() {
                Some(e) if e.1.is_whole() => {}
                Some(e) => {
                    let i = e.0 - 1;
                    entries.insert(0, (i, Subspace::whole(ambient)));
                }
                None => {
                    return Err(Error::InvalidFiltration(
                        "a nonzero space needs at least one filtration step".into(),
                    ))
                }
            }
        }
        // keep the highest index of each run of equal subspaces
        let mut steps: Vec<(i64, Subspace)> = Vec::new();
        for (i, v) in entries {
            if v.is_zero() {
                break;
            }
            match steps.last_mut() {
                Some(last) if last.1 == v => last.0 = i,
                _ => steps.push((i, v)),
            }
        }
        Ok(Flag { ambient, steps })
    }

    /// Coordinate flag realizing the given weights: `Fil^i` is spanned by
    /// the basis vectors whose weight is at least `i`, listed with the
    /// largest weights first.
    pub fn from_weights(weights: &[i64]) -> Self {
        let mut w = weights.to_vec();
        w.sort_unstable_by(|a, b| b.cmp(a));
        let n = w.len();
        let mut distinct: Vec<i64> = w.clone();
        distinct.dedup();
        let entries = distinct
            .iter()
            .map(|&i| {
                let k = w.iter().filter(|&&x| x >= i).count();
                (i, Subspace::coordinate(n, &(0..k).collect::<Vec<_>>()))
            })
            .collect();
        Flag::new(n, entries).expect("nested coordinate flag")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    pub fn fil(&self, i: i64) -> Subspace {
        match self.steps.iter().find(|s| s.0 >= i) {
            Some(s) => s.1.clone(),
            None => Subspace::zero(self.ambient),
        }
    }

    /// Jump indices with multiplicity, ascending.
    pub fn weights(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.ambient);
        for (k, (i, v)) in self.steps.iter().enumerate() {
            let next = self.steps.get(k + 1).map_or(0, |s| s.1.dim());
            out.extend(std::iter::repeat(*i).take(v.dim() - next));
        }
        out
    }

    pub fn t_h(&self) -> i64 {
        self.weights().iter().sum()
    }

    /// `t_H` of the filtration induced on `w`, from intersection dimensions.
    pub fn t_h_on(&self, w: &Subspace) -> i64 {
        let mut total = 0;
        for (k, (i, v)) in self.steps.iter().enumerate() {
            let here = v.intersect(w).dim() as i64;
            let next = self
                .steps
                .get(k + 1)
                .map_or(0, |s| s.1.intersect(w).dim() as i64);
            total += i * (here - next);
        }
        total
    }

    pub fn min_index(&self) -> Option<i64> {
        self.steps.first().map(|s| s.0)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.steps.last().map(|s| s.0)
    }

    /// The dual filtration `Fil^i_⊥ = (Fil^{1-i})^⊥` under the standard pairing.
    pub fn dual(&self) -> Flag {
        let (Some(lo), Some(hi)) = (self.min_index(), self.max_index()) else {
            return self.clone();
        };
        let entries = (-hi..=1 - lo)
            .map(|i| (i, self.fil(1 - i).perp()))
            .collect();
        Flag::new(self.ambient, entries).expect("annihilators of a flag are nested")
    }

    pub fn shift(&self, r: i64) -> Flag {
        Flag {
            ambient: self.ambient,
            steps: self.steps.iter().map(|(i, v)| (i + r, v.clone())).collect(),
        }
    }

    /// The filtration `Fil^i ∩ W` written in the coordinates of `basis`.
    pub fn induced_on(&self, basis: &[Vec<Rational>]) -> Result<Flag> {
        let m = basis.len();
        if basis.iter().any(|b| b.len() != self.ambient) {
            return Err(Error::DimensionMismatch("basis vector length".into()));
        }
        if Subspace::from_vectors(self.ambient, basis)?.dim() != m {
            return Err(Error::InvalidFiltration("subspace basis is not independent".into()));
        }
        if m == 0 {
            return Ok(Flag {
                ambient: 0,
                steps: Vec::new(),
            });
        }
        let bt = RatMatrix::from_rows(basis.to_vec())?.transpose();
        let mut entries = Vec::new();
        for (i, v) in &self.steps {
            let ann = v.perp();
            let sub = if ann.is_zero() {
                Subspace::whole(m)
            } else {
                let cond = ann.as_matrix().mul(&bt)?;
                Subspace::from_vectors(m, &cond.nullspace())?
            };
            entries.push((*i, sub));
        }
        Flag::new(m, entries)
    }

    /// Pointwise containment `Fil^i ⊆ other.Fil^i` for every `i`.
    pub fn is_contained_in(&self, other: &Flag) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        let mut idx: Vec<i64> = self.steps.iter().chain(&other.steps).map(|s| s.0).collect();
        idx.sort_unstable();
        idx.dedup();
        idx.iter().all(|&i| other.fil(i).contains_subspace(&self.fil(i)))
    }

    /// Replaces `Fil^i` by `v` at a single index.
    pub(crate) fn with_fil(&self, i: i64, v: Subspace) -> Result<Flag> {
        let (Some(lo), Some(hi)) = (self.min_index(), self.max_index()) else {
            return Ok(self.clone());
        };
        let entries = (lo.min(i)..=hi.max(i))
            .map(|j| if j == i { (j, v.clone()) } else { (j, self.fil(j)) })
            .collect();
        Flag::new(self.ambient, entries)
    }
}

/// Hodge data as bare weights or as a flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HodgeData {
    Weights(Vec<i64>),
    Flag(Flag),
}

impl HodgeData {
    pub fn weights_of(w: &[i64]) -> Self {
        let mut w = w.to_vec();
        w.sort_unstable();
        HodgeData::Weights(w)
    }

    pub fn rank(&self) -> usize {
        match self {
            HodgeData::Weights(w) => w.len(),
            HodgeData::Flag(f) => f.ambient(),
        }
    }

    /// Weight multiset, ascending.
    pub fn weights(&self) -> Vec<i64> {
        match self {
            HodgeData::Weights(w) => w.clone(),
            HodgeData::Flag(f) => f.weights(),
        }
    }

    pub fn t_h(&self) -> i64 {
        self.weights().iter().sum()
    }

    pub fn flag(&self) -> Option<&Flag> {
        match self {
            HodgeData::Flag(f) => Some(f),
            HodgeData::Weights(_) => None,
        }
    }

    /// The flag, if the data determines one: explicit flags, and weight
    /// lists in which every weight is equal (so each `Fil^i` is `0` or
    /// everything).
    pub fn unique_flag(&self) -> Option<Flag> {
        match self {
            HodgeData::Flag(f) => Some(f.clone()),
            HodgeData::Weights(w) if w.windows(2).all(|p| p[0] == p[1]) => {
                Some(Flag::from_weights(w))
            }
            HodgeData::Weights(_) => None,
        }
    }

    /// Dual data: flags via `Fil^i_⊥ = (Fil^{1-i})^⊥`, which sends each
    /// weight `w` to `-w`.
    pub fn dual(&self) -> HodgeData {
        match self {
            HodgeData::Weights(w) => HodgeData::weights_of(&w.iter().map(|x| -x).collect::<Vec<_>>()),
            HodgeData::Flag(f) => HodgeData::Flag(f.dual()),
        }
    }

    pub fn shift(&self, r: i64) -> HodgeData {
        match self {
            HodgeData::Weights(w) => HodgeData::Weights(w.iter().map(|x| x + r).collect()),
            HodgeData::Flag(f) => HodgeData::Flag(f.shift(r)),
        }
    }

    pub fn induced_on_subspace(&self, basis: &[Vec<Rational>]) -> Result<HodgeData> {
        match self {
            HodgeData::Weights(_) => Err(Error::FlagRequired),
            HodgeData::Flag(f) => Ok(HodgeData::Flag(f.induced_on(basis)?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FlagEntry {
    index: i64,
    basis: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HodgeRaw {
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flag: Option<Vec<FlagEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
}

impl Serialize for HodgeData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match self {
            HodgeData::Weights(w) => HodgeRaw {
                weights: Some(w.clone()),
                flag: None,
                dim: None,
            },
            HodgeData::Flag(f) => HodgeRaw {
                weights: None,
                flag: Some(
                    f.steps
                        .iter()
                        .rev()
                        .map(|(i, v)| FlagEntry {
                            index: *i,
                            basis: v.basis().to_vec(),
                        })
                        .collect(),
                ),
                dim: Some(f.ambient),
            },
        };
        raw.serialize(s)
    }
}

impl TryFrom<HodgeRaw> for HodgeData {
    type Error = Error;

    fn try_from(raw: HodgeRaw) -> Result<Self> {
        match (raw.weights, raw.flag) {
            (Some(w), None) => {
                if raw.dim.is_some_and(|d| d != w.len()) {
                    return Err(Error::InvalidFiltration("dim disagrees with weights".into()));
                }
                Ok(HodgeData::weights_of(&w))
            }
            (None, Some(entries)) => {
                let dim = raw
                    .dim
                    .or_else(|| entries.iter().flat_map(|e| e.basis.first()).map(Vec::len).next())
                    .ok_or_else(|| {
                        Error::InvalidFiltration("cannot infer the ambient dimension".into())
                    })?;
                let steps = entries
                    .into_iter()
                    .map(|e| Ok((e.index, Subspace::from_vectors(dim, &e.basis)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(HodgeData::Flag(Flag::new(dim, steps)?))
            }
            _ => Err(Error::InvalidFiltration(
                "expected exactly one of \"weights\" or \"flag\"".into(),
            )),
        }
    }
}

impl<'de> Deserialize<'de> for HodgeData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HodgeData::try_from(HodgeRaw::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn t_h_examples() {
        assert_eq!(HodgeData::weights_of(&[0, 0, 0]).t_h(), 0);
        assert_eq!(HodgeData::weights_of(&[0, 1]).t_h(), 1);
        let f = Flag::new(
            3,
            vec![
                (1, Subspace::whole(3)),
                (3, Subspace::from_vectors(3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(f.weights(), vec![1, 3, 3]);
        assert_eq!(f.t_h(), 7);
    }

    #[test]
    fn implicit_bottom_step() {
        let f = Flag::new(2, vec![(1, Subspace::coordinate(2, &[0]))]).unwrap();
        assert_eq!(f.weights(), vec![0, 1]);
        assert_eq!(f.fil(-7), Subspace::whole(2));
        assert!(f.fil(2).is_zero());
    }

    #[test]
    fn dual_negates_weights() {
        let f = Flag::new(2, vec![(1, Subspace::coordinate(2, &[0]))]).unwrap();
        let d = f.dual();
        assert_eq!(d.weights(), vec![-1, 0]);
        assert_eq!(d.fil(0), Subspace::coordinate(2, &[1]));
        assert_eq!(d.dual(), f);
        assert_eq!(HodgeData::weights_of(&[0]).dual().weights(), vec![0]);
    }

    #[test]
    fn induced_examples() {
        let h = HodgeData::Flag(Flag::new(2, vec![(1, Subspace::coordinate(2, &[0]))]).unwrap());
        assert_eq!(h.induced_on_subspace(&[v(&[1, 0])]).unwrap().weights(), vec![1]);
        assert_eq!(h.induced_on_subspace(&[v(&[1, 1])]).unwrap().weights(), vec![0]);
        let zero = h.induced_on_subspace(&[]).unwrap();
        assert_eq!((zero.rank(), zero.t_h()), (0, 0));
        assert_eq!(
            h.induced_on_subspace(&[v(&[1, 0]), v(&[0, 1])]).unwrap(),
            h
        );
        assert_eq!(
            HodgeData::weights_of(&[0, 1]).induced_on_subspace(&[v(&[1, 0])]),
            Err(Error::FlagRequired)
        );
    }

    #[test]
    fn shift_and_weights_round_trip() {
        let h = HodgeData::weights_of(&[0, 1]);
        assert_eq!(h.shift(2).weights(), vec![2, 3]);
        let f = Flag::from_weights(&[2, 0, 2, 1]);
        assert_eq!(f.weights(), vec![0, 1, 2, 2]);
        assert_eq!(f.shift(3).t_h(), f.t_h() + 12);
    }

    #[test]
    fn json_round_trip() {
        let h: HodgeData =
            serde_json::from_str(r#"{"flag":[{"index":1,"basis":[["0","1"]]}]}"#).unwrap();
        assert_eq!(h.weights(), vec![0, 1]);
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(serde_json::from_str::<HodgeData>(&s).unwrap(), h);
        assert!(serde_json::from_str::<HodgeData>(r#"{"weights":[0.5]}"#).is_err());
    }
}
