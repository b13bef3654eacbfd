//! Bookkeeping for the semistable comparison square on synthetic data.
//!
//! At degree `i` the data is a (φ,N)-module `M` and a lattice given by Hodge
//! weights in `[0, i]`. Everything below is Dimension arithmetic on
//!
//! ```text
//! 0 → H^0(E) → X^{r,i} → B^i / t^r Fil^{r,i} → H^1(E) → 0
//! ```
//!
//! where `X^{r,i}` has Dimension `(r·rk M - t_N, rk M)`, the target is a
//! `B_r`-module of length `r·rk M - t_H`, and `E` is the modification whose
//! slopes are the Harder–Narasimhan slopes of `(M, lattice)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bc::{check_exact, height_functor_rank, ExactSequence};
use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::filtration::HodgeData;
use crate::hn::{hn_filtration, is_acyclic, vst_dimension, FilteredPhiModule, SearchOptions, Status, Verdict};
use crate::isocrystal::PhiModule;
use crate::rational::Rational;
use crate::sheaf::FFSheaf;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisViolation {
    pub index: usize,
    pub reason: String,
}

impl fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "index {}: {}", self.index, self.reason)
    }
}

/// Hodge–Kato and lattice data in degrees `r` and `r - 1`. A missing
/// degree `r - 1` stands for the zero module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntheticCohomology {
    r: i64,
    top: FilteredPhiModule,
    prev: Option<FilteredPhiModule>,
}

impl SyntheticCohomology {
    pub fn new(r: i64, top: FilteredPhiModule, prev: Option<FilteredPhiModule>) -> Result<Self> {
        if r < 0 {
            return Err(Error::InvalidCohomology(format!("r = {r} is negative")));
        }
        check_window(&top, r, r)?;
        if let Some(m) = &prev {
            if r == 0 {
                return Err(Error::InvalidCohomology("degree -1 must be the zero module".into()));
            }
            check_window(m, r - 1, r)?;
        }
        Ok(SyntheticCohomology { r, top, prev })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn top(&self) -> &FilteredPhiModule {
        &self.top
    }

    pub fn prev(&self) -> Option<&FilteredPhiModule> {
        self.prev.as_ref()
    }
}

/// Newton slopes and Hodge weights of degree-`i` data lie in `[0, i]`.
fn check_window(m: &FilteredPhiModule, i: i64, r: i64) -> Result<()> {
    let top = Rational::from(i);
    for (s, _) in m.module().newton_slopes() {
        if s.is_negative() || s > top {
            return Err(Error::InvalidModule(format!(
                "Newton slope {s} outside [0, {i}] in degree {i} (r = {r})"
            )));
        }
    }
    for w in m.hodge().weights() {
        if w < 0 || w > i {
            return Err(Error::InvalidFiltration(format!(
                "lattice weight {w} outside [0, {i}] in degree {i} (r = {r})"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeRaw {
    hk: PhiModule,
    lattice: HodgeData,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreesRaw {
    r: DegreeRaw,
    #[serde(rename = "r-1", default, skip_serializing_if = "Option::is_none")]
    prev: Option<DegreeRaw>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SyntheticRaw {
    r: i64,
    degrees: DegreesRaw,
}

impl Serialize for SyntheticCohomology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = |m: &FilteredPhiModule| DegreeRaw {
            hk: m.module().clone(),
            lattice: m.hodge().clone(),
        };
        SyntheticRaw {
            r: self.r,
            degrees: DegreesRaw {
                r: raw(&self.top),
                prev: self.prev.as_ref().map(raw),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SyntheticCohomology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SyntheticRaw::deserialize(d)?;
        let fm = |x: DegreeRaw| FilteredPhiModule::new(x.hk, x.lattice);
        let top = fm(raw.degrees.r).map_err(D::Error::custom)?;
        let prev = raw.degrees.prev.map(fm).transpose().map_err(D::Error::custom)?;
        SyntheticCohomology::new(raw.r, top, prev).map_err(D::Error::custom)
    }
}

/// The modification `E(M, M_dR^+)` in classification normal form.
pub fn build_modification(
    hk: &PhiModule,
    lattice: &HodgeData,
    r: i64,
    opts: SearchOptions,
) -> Result<FFSheaf> {
    let m = FilteredPhiModule::new(hk.clone(), lattice.clone())?;
    check_window(&m, r, r)?;
    modification(&m, opts)
}

fn modification(m: &FilteredPhiModule, opts: SearchOptions) -> Result<FFSheaf> {
    let hn = hn_filtration(m, opts)?;
    if !hn.certified {
        return Err(Error::Uncertified);
    }
    let graded: Vec<(Rational, u64)> = hn
        .filtration
        .graded()
        .into_iter()
        .map(|(s, rk)| (s, rk as u64))
        .collect();
    FFSheaf::canonicalize(&graded)
}

/// Dimensions in the four-term sequence at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeLedger {
    pub degree: i64,
    /// `X^{r,i}`.
    pub x: Dimension,
    /// `B^i / t^r Fil^{r,i}`.
    pub target: Dimension,
    /// `H^0(E)`, the kernel of `X^{r,i} → target`.
    pub kernel: Dimension,
    pub image: Dimension,
    /// `H^1(E)`, the cokernel.
    pub cokernel: Dimension,
    pub modification: FFSheaf,
}

fn int(q: &Rational) -> Result<i64> {
    q.to_i64()
        .ok_or_else(|| Error::Internal(format!("{q} is not an integer")))
}

fn ledger(m: &FilteredPhiModule, degree: i64, r: i64, opts: SearchOptions) -> Result<DegreeLedger> {
    let n = m.rank() as i64;
    let x = Dimension::new(r * n - int(&m.module().t_n())?, n);
    let target = Dimension::new(r * n - m.hodge().t_h(), 0);
    let e = modification(m, opts)?;
    let kernel = vst_dimension(m, opts)?.h0;
    let cokernel = e.cohomology_dim().h1;
    let image = x - kernel;
    if target - image != cokernel {
        return Err(Error::Internal(format!(
            "degree {degree}: target {target} - image {image} != H^1 {cokernel}"
        )));
    }
    Ok(DegreeLedger {
        degree,
        x,
        target,
        kernel,
        image,
        cokernel,
        modification: e,
    })
}

fn zero_ledger(degree: i64) -> DegreeLedger {
    let z = Dimension::ZERO;
    DegreeLedger {
        degree,
        x: z,
        target: z,
        kernel: z,
        image: z,
        cokernel: z,
        modification: FFSheaf::zero(),
    }
}

fn optional(l: Result<DegreeLedger>) -> Result<Option<DegreeLedger>> {
    match l {
        Ok(l) => Ok(Some(l)),
        Err(Error::Uncertified) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryReport {
    /// The square is bicartesian.
    pub verdict_a: Verdict,
    /// Acyclicity in degree `r - 1`.
    pub verdict_b_rm1: Verdict,
    /// Acyclicity in degree `r`.
    pub verdict_b_r: Verdict,
    /// Acyclicity in both degrees.
    pub verdict_b: Verdict,
    /// Kernel and cokernel of `H^{r,r} → X^{r,r}` have height 0.
    pub verdict_cprime: Verdict,
    /// `ht(H^{r,r}) = dim H^r_dR`.
    pub verdict_d: Verdict,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub height: Option<i64>,
    pub dim_dr: i64,
    pub ledger: Vec<DegreeLedger>,
}

impl BatteryReport {
    /// The four equivalent properties `(a)`, `(b)`, `(c′)`, `(d)`.
    pub fn verdicts(&self) -> [&Verdict; 4] {
        [&self.verdict_a, &self.verdict_b, &self.verdict_cprime, &self.verdict_d]
    }

    pub fn is_certified(&self) -> bool {
        self.verdicts().iter().all(|v| v.status.is_certified())
            && self.verdict_b_rm1.status.is_certified()
            && self.verdict_b_r.status.is_certified()
    }

    /// Certified when every verdict is certified and they agree.
    pub fn status(&self) -> Status {
        if !self.is_certified() || !self.consistent {
            return Status::Uncertified;
        }
        self.verdict_a.status
    }
}

fn decided(b: Option<bool>) -> Verdict {
    match b {
        Some(true) => Verdict::yes(),
        Some(false) => Verdict {
            status: Status::CertifiedFalse,
            witness: None,
        },
        None => Verdict::unknown(),
    }
}

/// Runs the equivalence battery. Each verdict is computed from its own data:
/// (b) by subobject search, (a) from the cokernels of both degrees, (c′) and
/// (d) from heights.
pub fn battery(s: &SyntheticCohomology, opts: SearchOptions) -> Result<BatteryReport> {
    let r = s.r;
    let verdict_b_rm1 = match &s.prev {
        Some(m) => is_acyclic(m, opts)?,
        None => Verdict::yes(),
    };
    let verdict_b_r = is_acyclic(&s.top, opts)?;
    let verdict_b = match (verdict_b_rm1.status, verdict_b_r.status) {
        (Status::CertifiedFalse, _) => verdict_b_rm1.clone(),
        (_, Status::CertifiedFalse) => verdict_b_r.clone(),
        (Status::CertifiedTrue, Status::CertifiedTrue) => Verdict::yes(),
        _ => Verdict::unknown(),
    };
    let prev = match &s.prev {
        Some(m) => optional(ledger(m, r - 1, r, opts))?,
        None => Some(zero_ledger(r - 1)),
    };
    let top = optional(ledger(&s.top, r, r, opts))?;
    let dim_dr = s.top.rank() as i64;

    let both = prev.as_ref().zip(top.as_ref());
    let verdict_a = decided(both.map(|(p, t)| p.cokernel.is_zero() && t.cokernel.is_zero()));
    // ker(H → X) is the degree r-1 cokernel, coker(H → X) the degree-r image
    let verdict_cprime = decided(both.map(|(p, t)| p.cokernel.ht == 0 && t.image.ht == 0));
    let height = both.map(|(p, t)| p.cokernel.ht + t.kernel.ht);
    let verdict_d = decided(height.map(|h| h == dim_dr));

    let mut report = BatteryReport {
        verdict_a,
        verdict_b_rm1,
        verdict_b_r,
        verdict_b,
        verdict_cprime,
        verdict_d,
        consistent: true,
        height,
        dim_dr,
        ledger: prev.into_iter().chain(top).collect(),
    };
    let certified: Vec<bool> = report.verdicts().iter().filter_map(|v| v.status.as_bool()).collect();
    report.consistent = certified.windows(2).all(|w| w[0] == w[1]);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Surjective,
    PositiveHeightImage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub branch: Branch,
    /// `-ht` of the cokernel, equal to the height of the image.
    pub deficit: i64,
    pub image: Dimension,
    pub target: Dimension,
}

/// Either `X^{r,r}` maps onto the target, or its image has positive height.
pub fn dichotomy(hk: &PhiModule, lattice: &HodgeData, r: i64, opts: SearchOptions) -> Result<DichotomyReport> {
    let m = FilteredPhiModule::new(hk.clone(), lattice.clone())?;
    check_window(&m, r, r)?;
    let n = m.rank() as i64;
    let target = Dimension::new(r * n - m.hodge().t_h(), 0);
    if target.is_zero() {
        return Ok(DichotomyReport {
            branch: Branch::Surjective,
            deficit: 0,
            image: Dimension::ZERO,
            target,
        });
    }
    let l = ledger(&m, r, r, opts)?;
    let branch = if l.cokernel.is_zero() {
        Branch::Surjective
    } else {
        Branch::PositiveHeightImage
    };
    Ok(DichotomyReport {
        branch,
        deficit: -l.cokernel.ht,
        image: l.image,
        target,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MvReport {
    pub equal: bool,
    pub certified: bool,
    pub ht_a: i64,
    pub ht_b: i64,
    /// Height read off the declared arrows around the middle node,
    /// `ht(ker) + ht(im)`, in each row.
    pub from_arrows: [i64; 2],
}

fn violate(bad: &mut Vec<HypothesisViolation>, index: usize, reason: String) {
    bad.push(HypothesisViolation { index, reason });
}

/// Compares `ht(A_{3r})` and `ht(B_{3r})` for two aligned exact rows, after
/// checking that heights agree at every other index up to `3r + 2` and that
/// `A_{3r}` has curvature `≤ 0`.
pub fn mv_check(a: &ExactSequence, b: &ExactSequence, r: usize) -> Result<MvReport> {
    let mid = 3 * r;
    let need = mid + 3;
    let mut bad = Vec::new();
    if a.nodes.len() != b.nodes.len() {
        violate(&mut bad, 0, format!("rows have {} and {} nodes", a.nodes.len(), b.nodes.len()));
    }
    if a.nodes.len() < need || b.nodes.len() < need {
        violate(&mut bad, need - 1, format!("rows need at least {need} nodes"));
    }
    for (name, row) in [("A", a), ("B", b)] {
        match check_exact(row) {
            Ok(rep) => {
                for f in rep.failures {
                    violate(&mut bad, f.index, format!("row {name}: {}", f.reason));
                }
            }
            Err(e) => violate(&mut bad, 0, format!("row {name}: {e}")),
        }
    }
    if bad.is_empty() {
        for k in (0..need).filter(|&k| k != mid) {
            let (ha, hb) = (a.nodes[k].dimension().ht, b.nodes[k].dimension().ht);
            if ha != hb {
                violate(&mut bad, k, format!("ht(A_{k}) = {ha} but ht(B_{k}) = {hb}"));
            }
        }
        if a.nodes[mid].curvature_le0() != Some(true) {
            violate(&mut bad, mid, format!("A_{mid} is not known to have curvature <= 0"));
        }
    }
    if !bad.is_empty() {
        return Err(Error::Hypotheses(bad));
    }
    let ha = height_functor_rank(&a.nodes[mid], None);
    let hb = height_functor_rank(&b.nodes[mid], None);
    let from_arrows = [a, b].map(|row| row.arrows[mid].ker.ht + row.arrows[mid].im.ht);
    Ok(MvReport {
        equal: ha.value == hb.value,
        certified: ha.certified && hb.certified,
        ht_a: ha.value,
        ht_b: hb.value,
        from_arrows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc::{Arrow, BCObject, Node, Piece};
    use crate::filtration::Flag;
    use crate::matrix::RatMatrix;
    use crate::subspace::Subspace;

    const P: u64 = 3;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn diag(xs: &[i64]) -> PhiModule {
        PhiModule::from_phi(P, RatMatrix::diagonal(&xs.iter().map(|&x| q(x)).collect::<Vec<_>>())).unwrap()
    }

    fn weights(w: &[i64]) -> HodgeData {
        HodgeData::Weights(w.to_vec())
    }

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    fn all(report: &BatteryReport, b: bool) -> bool {
        report.verdicts().iter().all(|v| v.status.as_bool() == Some(b))
    }

    #[test]
    fn modification_examples() {
        let e = build_modification(&diag(&[1]), &weights(&[1]), 1, opts()).unwrap();
        assert_eq!(e, FFSheaf::stable(q(1), 1));
        let e = build_modification(&diag(&[3]), &weights(&[0]), 1, opts()).unwrap();
        assert_eq!(e, FFSheaf::stable(q(-1), 1));
        // diag(1, p) with Fil^1 = e2 is weakly admissible
        let flag = Flag::new(2, vec![(1, Subspace::coordinate(2, &[1]))]).unwrap();
        let e = build_modification(&diag(&[1, 3]), &HodgeData::Flag(flag), 1, opts()).unwrap();
        assert_eq!(e, FFSheaf::stable(q(0), 2));
    }

    #[test]
    fn window_is_enforced() {
        assert!(build_modification(&diag(&[9]), &weights(&[1]), 1, opts()).is_err());
        assert!(build_modification(&diag(&[1]), &weights(&[2]), 1, opts()).is_err());
    }

    #[test]
    fn stein_like() {
        let top = FilteredPhiModule::new(diag(&[1, 3]), weights(&[1, 1])).unwrap();
        let s = SyntheticCohomology::new(1, top, None).unwrap();
        let rep = battery(&s, opts()).unwrap();
        assert!(all(&rep, true));
        assert_eq!(rep.height, Some(2));
        assert!(rep.consistent);
        assert_eq!(rep.status(), Status::CertifiedTrue);
    }

    #[test]
    fn proper_like() {
        let flag = Flag::new(2, vec![(1, Subspace::coordinate(2, &[1]))]).unwrap();
        let top = FilteredPhiModule::new(diag(&[1, 3]), HodgeData::Flag(flag)).unwrap();
        let prev = FilteredPhiModule::new(diag(&[1]), weights(&[0])).unwrap();
        let s = SyntheticCohomology::new(1, top, Some(prev)).unwrap();
        let rep = battery(&s, opts()).unwrap();
        assert!(all(&rep, true));
        assert_eq!(rep.height, Some(2));
    }

    #[test]
    fn failure_case() {
        let top = FilteredPhiModule::new(diag(&[3]), weights(&[0])).unwrap();
        let s = SyntheticCohomology::new(1, top, None).unwrap();
        let rep = battery(&s, opts()).unwrap();
        assert!(all(&rep, false), "{rep:?}");
        // b at r-1 is vacuous, so only the degree-r verdicts fail
        assert_eq!(rep.verdict_b_rm1.status, Status::CertifiedTrue);
        assert_eq!(rep.height, Some(0));
        let d = dichotomy(&diag(&[3]), &weights(&[0]), 1, opts()).unwrap();
        assert_eq!(d.branch, Branch::PositiveHeightImage);
        assert_eq!(d.deficit, 1);
    }

    #[test]
    fn failure_in_lower_degree() {
        let top = FilteredPhiModule::new(diag(&[1]), weights(&[2])).unwrap();
        let prev = FilteredPhiModule::new(diag(&[3]), weights(&[0])).unwrap();
        let s = SyntheticCohomology::new(2, top, Some(prev)).unwrap();
        let rep = battery(&s, opts()).unwrap();
        assert_eq!(rep.verdict_b_rm1.status, Status::CertifiedFalse);
        assert_eq!(rep.verdict_b_r.status, Status::CertifiedTrue);
        assert_eq!(rep.verdict_a.status, Status::CertifiedFalse);
        assert_eq!(rep.verdict_d.status, Status::CertifiedFalse);
        assert_eq!(rep.verdict_b.status, Status::CertifiedFalse);
        assert!(all(&rep, false));
        assert!(rep.consistent);
    }

    #[test]
    fn dichotomy_branches() {
        let flag = Flag::new(2, vec![(1, Subspace::coordinate(2, &[1]))]).unwrap();
        let d = dichotomy(&diag(&[1, 3]), &HodgeData::Flag(flag), 1, opts()).unwrap();
        assert_eq!(d.branch, Branch::Surjective);
        let d = dichotomy(&diag(&[1, 3]), &weights(&[1, 1]), 1, opts()).unwrap();
        assert_eq!(d.branch, Branch::Surjective);
        assert!(d.target.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"r":1,"degrees":{"r":{"hk":{"p":3,"phi":[["3"]]},"lattice":{"weights":[0]}}}}"#;
        let s: SyntheticCohomology = serde_json::from_str(src).unwrap();
        assert_eq!(s.r(), 1);
        let back = serde_json::to_string(&s).unwrap();
        let again: SyntheticCohomology = serde_json::from_str(&back).unwrap();
        assert_eq!(s, again);
        let bad = r#"{"r":0,"degrees":{"r":{"hk":{"p":3,"phi":[["1"]]},"lattice":{"weights":[0]}},"r-1":{"hk":{"p":3,"phi":[["1"]]},"lattice":{"weights":[0]}}}}"#;
        assert!(serde_json::from_str::<SyntheticCohomology>(bad).is_err());
    }

    fn row(nodes: Vec<Node>, arrows: Vec<(Dimension, Dimension)>) -> ExactSequence {
        ExactSequence {
            nodes,
            arrows: arrows.into_iter().map(|(ker, im)| Arrow { ker, im }).collect(),
        }
    }

    fn qp(n: i64) -> Node {
        Node::Bc(BCObject::new(vec![Piece::Qp(n)]).unwrap())
    }

    #[test]
    fn mv_identical_rows() {
        let z = Dimension::ZERO;
        let one = Dimension::new(0, 1);
        let a = row(vec![qp(1), qp(1), Node::Zero], vec![(z, one), (one, z)]);
        let rep = mv_check(&a, &a.clone(), 0).unwrap();
        assert!(rep.equal && rep.certified);
        assert_eq!(rep.ht_a, 1);
    }

    #[test]
    fn mv_height_mismatch() {
        let z = Dimension::ZERO;
        let one = Dimension::new(0, 1);
        let a = row(
            vec![qp(1), qp(1), Node::Zero, Node::Zero],
            vec![(z, one), (one, z), (z, z)],
        );
        let b = row(
            vec![qp(1), qp(2), qp(1), Node::Zero],
            vec![(z, one), (one, one), (one, z)],
        );
        match mv_check(&a, &b, 0) {
            Err(Error::Hypotheses(v)) => {
                let idx: Vec<usize> = v.iter().map(|h| h.index).collect();
                assert_eq!(idx, vec![1, 2]);
            }
            other => panic!("{other:?}"),
        }
    }
}
