//! Formal Banach–Colmez spaces in split normal form and Dimension
//! bookkeeping for exact sequences of them.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sheaf::INFTY;

/// A stable piece of a Banach–Colmez space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Piece {
    /// `U_{h,d}` with `d ≥ 0`: global sections of a bundle of slope `d/h ≥ 0`.
    Ueff { d: i64, h: i64 },
    /// `B_d / Q_{p^h}`: the quotient type, Dimension `(d, -h)`.
    Uquot { d: i64, h: i64 },
    /// Torsion of length `length` at a point of the curve.
    Tors { point: String, length: i64 },
    /// `Q_p^n`.
    Qp(i64),
}

impl Piece {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Piece::Ueff { d, h } => *d >= 0 && *h >= 1,
            Piece::Uquot { d, h } => *d > 0 && *h > 0,
            Piece::Tors { length, .. } => *length > 0,
            Piece::Qp(n) => *n > 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidObject(format!("{self:?}")))
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            Piece::Ueff { d, h } => Dimension::new(*d, *h),
            Piece::Uquot { d, h } => Dimension::new(*d, -h),
            Piece::Tors { length, .. } => Dimension::new(*length, 0),
            Piece::Qp(n) => Dimension::new(0, *n),
        }
    }

    /// Slope `μ⁻` and the multiplicity `rk⁻`, which is `dim` for pieces of
    /// positive dimension and the height for `Q_p`-like pieces.
    pub fn hn_slope(&self) -> (ExtSlope, u64) {
        match self {
            Piece::Ueff { d, h } if *d > 0 => (ExtSlope::Finite(Rational::frac(-h, *d)), *d as u64),
            Piece::Ueff { h, .. } => (ExtSlope::NegInfinity, *h as u64),
            Piece::Qp(n) => (ExtSlope::NegInfinity, *n as u64),
            Piece::Tors { length, .. } => (ExtSlope::Finite(Rational::zero()), *length as u64),
            Piece::Uquot { d, h } => (ExtSlope::Finite(Rational::frac(*h, *d)), *d as u64),
        }
    }

    /// Positive curvature: quotient type and torsion away from infinity.
    pub fn positive_curvature(&self) -> bool {
        match self {
            Piece::Uquot { .. } => true,
            Piece::Tors { point, .. } => point != INFTY,
            _ => false,
        }
    }
}

/// A slope in `Q ∪ {-∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtSlope {
    NegInfinity,
    Finite(Rational),
}

impl Ord for ExtSlope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtSlope::NegInfinity, ExtSlope::NegInfinity) => Ordering::Equal,
            (ExtSlope::NegInfinity, _) => Ordering::Less,
            (_, ExtSlope::NegInfinity) => Ordering::Greater,
            (ExtSlope::Finite(a), ExtSlope::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtSlope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtSlope::NegInfinity => f.write_str("-inf"),
            ExtSlope::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl Serialize for ExtSlope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A Banach–Colmez space as a direct sum of stable pieces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Piece>", into = "Vec<Piece>")]
pub struct BCObject {
    pieces: Vec<Piece>,
}

impl TryFrom<Vec<Piece>> for BCObject {
    type Error = Error;
    fn try_from(pieces: Vec<Piece>) -> Result<Self> {
        BCObject::new(pieces)
    }
}

impl From<BCObject> for Vec<Piece> {
    fn from(b: BCObject) -> Self {
        b.pieces
    }
}

impl BCObject {
    /// Pieces are kept sorted so equal sums compare equal.
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            p.validate()?;
        }
        pieces.sort();
        Ok(BCObject { pieces })
    }

    pub fn zero() -> Self {
        BCObject::default()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn direct_sum(&self, other: &BCObject) -> BCObject {
        let mut p = self.pieces.clone();
        p.extend(other.pieces.iter().cloned());
        BCObject::new(p).expect("valid pieces")
    }

    pub fn dimension(&self) -> Dimension {
        self.pieces.iter().map(Piece::dimension).sum()
    }

    /// HN slopes with multiplicities, descending, `-∞` last.
    pub fn hn_slopes(&self) -> Vec<(ExtSlope, u64)> {
        let mut all: Vec<(ExtSlope, u64)> = self.pieces.iter().map(Piece::hn_slope).collect();
        all.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(ExtSlope, u64)> = Vec::new();
        for (s, m) in all {
            match out.last_mut() {
                Some((t, n)) if *t == s => *n += m,
                _ => out.push((s, m)),
            }
        }
        out
    }

    /// `(W_{>0}, W_{=0}, W_{<0})`: quotient pieces and torsion away from
    /// infinity; torsion at infinity; effective pieces and `Q_p`.
    pub fn canonical_filtration(&self) -> (BCObject, BCObject, BCObject) {
        let mut gt = Vec::new();
        let mut eq = Vec::new();
        let mut lt = Vec::new();
        for p in &self.pieces {
            match p {
                Piece::Tors { point, .. } if point == INFTY => eq.push(p.clone()),
                _ if p.positive_curvature() => gt.push(p.clone()),
                _ => lt.push(p.clone()),
            }
        }
        (
            BCObject { pieces: gt },
            BCObject { pieces: eq },
            BCObject { pieces: lt },
        )
    }

    pub fn curvature_le0(&self) -> bool {
        !self.pieces.iter().any(Piece::positive_curvature)
    }
}

/// Extension of a Banach–Colmez space by a torsion `B_dR^+`-module.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QBCObject {
    pub torsion_core: Vec<u64>,
    pub quotient: BCObject,
}

impl QBCObject {
    /// `dim` counts the core, `ht` is that of the quotient.
    pub fn dimension(&self) -> Dimension {
        let core: u64 = self.torsion_core.iter().sum();
        self.quotient.dimension() + Dimension::new(core as i64, 0)
    }
}

/// A term of a formal exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Node {
    Bc(BCObject),
    Qbc(QBCObject),
    /// Only the Dimension is known.
    Dim(Dimension),
    Zero,
}

impl Node {
    pub fn dimension(&self) -> Dimension {
        match self {
            Node::Bc(b) => b.dimension(),
            Node::Qbc(q) => q.dimension(),
            Node::Dim(d) => *d,
            Node::Zero => Dimension::ZERO,
        }
    }

    /// `Some(true)` when the curvature is known to be `≤ 0`.
    pub fn curvature_le0(&self) -> Option<bool> {
        match self {
            Node::Bc(b) => Some(b.curvature_le0()),
            Node::Qbc(q) => Some(q.quotient.curvature_le0()),
            Node::Dim(_) => None,
            Node::Zero => Some(true),
        }
    }

    fn bc(&self) -> Option<&BCObject> {
        match self {
            Node::Bc(b) => Some(b),
            _ => None,
        }
    }
}

/// Declared kernel and image Dimensions of one arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub ker: Dimension,
    pub im: Dimension,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequence {
    pub nodes: Vec<Node>,
    pub arrows: Vec<Arrow>,
}

impl ExactSequence {
    /// `0 → a → b → c → 0` with the declarations of a short exact sequence.
    pub fn short_exact(a: Node, b: Node, c: Node) -> Self {
        let (da, dc) = (a.dimension(), c.dimension());
        let z = Dimension::ZERO;
        ExactSequence {
            nodes: vec![Node::Zero, a, b, c, Node::Zero],
            arrows: vec![
                Arrow { ker: z, im: z },
                Arrow { ker: z, im: da },
                Arrow { ker: da, im: dc },
                Arrow { ker: dc, im: z },
            ],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub exact: bool,
    pub failures: Vec<Failure>,
}

/// A check that failed at node `index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub reason: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "node {}: {}", self.index, self.reason)
    }
}

/// Checks declared kernels and images for Dimension additivity
/// `Dim source = Dim ker + Dim im`, exactness `im f_k = ker f_{k+1}` at
/// each inner node, validity of every declared Dimension, and the bound
/// `d < h` for effective pieces declared to inject into a power of `C`.
pub fn check_exact(seq: &ExactSequence) -> Result<ExactnessReport> {
    if seq.nodes.len() < 2 {
        return Err(Error::MalformedSequence("fewer than two nodes".into()));
    }
    if seq.arrows.len() + 1 != seq.nodes.len() {
        return Err(Error::MalformedSequence(format!(
            "{} nodes need {} arrows, got {}",
            seq.nodes.len(),
            seq.nodes.len() - 1,
            seq.arrows.len()
        )));
    }
    let mut failures = Vec::new();
    let mut fail = |index: usize, reason: String| failures.push(Failure { index, reason });
    for (k, a) in seq.arrows.iter().enumerate() {
        let src = seq.nodes[k].dimension();
        if a.ker + a.im != src {
            fail(k, format!("Dim ker {} + Dim im {} != Dim {src}", a.ker, a.im));
        }
        if !a.ker.is_valid() || !a.im.is_valid() {
            fail(k, "declared Dimension of outgoing arrow is not a BC Dimension".into());
        }
        if let Some(next) = seq.arrows.get(k + 1) {
            if a.im != next.ker {
                fail(k + 1, format!("image {} != kernel {}", a.im, next.ker));
            }
        }
        let tgt = seq.nodes[k + 1].dimension();
        let coker = tgt - a.im;
        if matches!(seq.nodes[k + 1], Node::Bc(_) | Node::Zero) && !coker.is_valid() {
            fail(k + 1, format!("cokernel Dimension {coker} is impossible"));
        }
        if a.ker.is_zero() {
            if let (Some(s), Some(t)) = (seq.nodes[k].bc(), seq.nodes[k + 1].bc()) {
                if let Some(msg) = injection_into_c_power(s, t) {
                    fail(k, msg);
                }
            }
        }
    }
    Ok(ExactnessReport {
        exact: failures.is_empty(),
        failures,
    })
}

// An effective piece O(d/h) with d > 0 injecting into C^N forces d < h.
fn injection_into_c_power(src: &BCObject, tgt: &BCObject) -> Option<String> {
    let tgt_is_c_power = !tgt.is_zero()
        && tgt
            .pieces
            .iter()
            .all(|p| matches!(p, Piece::Tors { point, length: 1 } if point == INFTY));
    let src_effective = src
        .pieces
        .iter()
        .all(|p| matches!(p, Piece::Ueff { .. } | Piece::Qp(_)));
    if !tgt_is_c_power || !src_effective {
        return None;
    }
    src.pieces.iter().find_map(|p| match p {
        Piece::Ueff { d, h } if *d > 0 && d >= h => Some(format!(
            "Ueff(d={d}, h={h}) cannot inject into a power of C: needs d < h"
        )),
        _ => None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightRank {
    pub value: i64,
    pub certified: bool,
}

/// Rank of `Hom(W, B_dR)`: the height for curvature `≤ 0`, otherwise the
/// height plus a caller-supplied `Ext^1` correction.
pub fn height_functor_rank(w: &Node, correction: Option<i64>) -> HeightRank {
    let ht = w.dimension().ht;
    match w.curvature_le0() {
        Some(true) => HeightRank {
            value: ht,
            certified: true,
        },
        _ => HeightRank {
            value: ht + correction.unwrap_or(0),
            certified: correction.is_some(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ueff(d: i64, h: i64) -> Piece {
        Piece::Ueff { d, h }
    }

    fn tors(point: &str, length: i64) -> Piece {
        Piece::Tors {
            point: point.into(),
            length,
        }
    }

    fn bc(p: Vec<Piece>) -> BCObject {
        BCObject::new(p).unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(bc(vec![tors(INFTY, 4)]).dimension(), Dimension::new(4, 0));
        assert_eq!(bc(vec![ueff(2, 3)]).dimension(), Dimension::new(2, 3));
        assert_eq!(
            bc(vec![Piece::Uquot { d: 1, h: 1 }, Piece::Qp(1)]).dimension(),
            Dimension::new(1, 0)
        );
        let q = QBCObject {
            torsion_core: vec![2],
            quotient: bc(vec![ueff(1, 1)]),
        };
        assert_eq!(q.dimension(), Dimension::new(3, 1));
        assert!(BCObject::new(vec![Piece::Uquot { d: 0, h: 1 }]).is_err());
    }

    #[test]
    fn slope_examples() {
        assert_eq!(
            bc(vec![ueff(1, 2)]).hn_slopes(),
            vec![(ExtSlope::Finite(Rational::from(-2)), 1)]
        );
        assert_eq!(bc(vec![Piece::Qp(3)]).hn_slopes(), vec![(ExtSlope::NegInfinity, 3)]);
        assert_eq!(
            bc(vec![tors(INFTY, 5)]).hn_slopes(),
            vec![(ExtSlope::Finite(Rational::zero()), 5)]
        );
    }

    #[test]
    fn canonical_filtration_examples() {
        let w = bc(vec![ueff(1, 1), tors(INFTY, 2), Piece::Uquot { d: 1, h: 1 }]);
        let (gt, eq, lt) = w.canonical_filtration();
        assert_eq!(gt, bc(vec![Piece::Uquot { d: 1, h: 1 }]));
        assert_eq!(eq, bc(vec![tors(INFTY, 2)]));
        assert_eq!(lt, bc(vec![ueff(1, 1)]));
        let (gt, _, _) = bc(vec![tors("x", 1)]).canonical_filtration();
        assert_eq!(gt.pieces().len(), 1);
    }

    #[test]
    fn exactness_examples() {
        let seq = ExactSequence::short_exact(
            Node::Bc(bc(vec![Piece::Qp(1)])),
            Node::Bc(bc(vec![ueff(1, 1)])),
            Node::Bc(bc(vec![tors(INFTY, 1)])),
        );
        assert!(check_exact(&seq).unwrap().exact);
        let w = Node::Bc(bc(vec![ueff(2, 1)]));
        let d = w.dimension();
        let id = ExactSequence {
            nodes: vec![Node::Zero, w.clone(), w, Node::Zero],
            arrows: vec![
                Arrow { ker: Dimension::ZERO, im: Dimension::ZERO },
                Arrow { ker: Dimension::ZERO, im: d },
                Arrow { ker: d, im: Dimension::ZERO },
            ],
        };
        assert!(check_exact(&id).unwrap().exact);
        let bad = ExactSequence {
            nodes: vec![
                Node::Zero,
                Node::Bc(bc(vec![ueff(1, 1)])),
                Node::Bc(bc(vec![tors(INFTY, 1)])),
                Node::Zero,
            ],
            arrows: vec![
                Arrow { ker: Dimension::ZERO, im: Dimension::ZERO },
                Arrow { ker: Dimension::ZERO, im: Dimension::new(1, 1) },
                Arrow { ker: Dimension::new(1, 0), im: Dimension::ZERO },
            ],
        };
        let r = check_exact(&bad).unwrap();
        assert!(!r.exact);
        assert!(check_exact(&ExactSequence::default()).is_err());
    }

    #[test]
    fn injection_bound() {
        let inj = |d, h| ExactSequence {
            nodes: vec![Node::Bc(bc(vec![ueff(d, h)])), Node::Bc(bc(vec![tors(INFTY, 1); 4]))],
            arrows: vec![Arrow { ker: Dimension::ZERO, im: Dimension::new(d, h) }],
        };
        // only the injection bound and additivity are in play here
        let ok = check_exact(&inj(1, 2)).unwrap();
        assert!(ok.failures.iter().all(|f| !f.reason.contains("inject")));
        let bad = check_exact(&inj(2, 1)).unwrap();
        assert!(bad.failures.iter().any(|f| f.reason.contains("inject")));
    }

    #[test]
    fn height_examples() {
        let h = |p: Vec<Piece>| height_functor_rank(&Node::Bc(bc(p)), None);
        assert_eq!(h(vec![ueff(1, 1)]), HeightRank { value: 1, certified: true });
        assert_eq!(h(vec![tors(INFTY, 3)]).value, 0);
        assert_eq!(h(vec![Piece::Qp(2)]).value, 2);
        assert!(!h(vec![Piece::Uquot { d: 1, h: 1 }]).certified);
        let corrected = height_functor_rank(&Node::Bc(bc(vec![Piece::Uquot { d: 1, h: 1 }])), Some(1));
        assert_eq!(corrected, HeightRank { value: 0, certified: true });
    }

    #[test]
    fn json_tags() {
        let b: BCObject =
            serde_json::from_str(r#"[{"Ueff":{"d":1,"h":2}},{"Tors":{"point":"infty","length":2}},{"Qp":3}]"#)
                .unwrap();
        assert_eq!(b.dimension(), Dimension::new(3, 5));
        let back: BCObject = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
    }
}
