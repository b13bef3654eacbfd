//! Harder–Narasimhan calculus for filtered (φ,N)-modules.
//!
//! Degrees use `deg = t_H - t_N`. With this sign a filtration that shrinks
//! lowers the degree, and a rank-1 module is acyclic exactly when its Hodge
//! weight is at least its Newton slope.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::filtration::{Flag, HodgeData};
use crate::isocrystal::PhiModule;
use crate::matrix::RatMatrix;
use crate::poly::Poly;
use crate::polygon::newton_polygon;
use crate::rational::{valuation_unchecked, Rational};
use crate::subspace::{unit, Subspace};

/// Controls for subobject searches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Seed for the randomized sample used when enumeration is not certified.
    pub seed: u64,
    /// Use brute-force stability tests instead of the block-graph shortcut.
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredPhiModule {
    module: PhiModule,
    hodge: HodgeData,
}

impl FilteredPhiModule {
    pub fn new(module: PhiModule, hodge: HodgeData) -> Result<Self> {
        if module.rank() != hodge.rank() {
            return Err(Error::DimensionMismatch(format!(
                "module of rank {} with Hodge data of rank {}",
                module.rank(),
                hodge.rank()
            )));
        }
        Ok(FilteredPhiModule { module, hodge })
    }

    pub fn module(&self) -> &PhiModule {
        &self.module
    }

    pub fn hodge(&self) -> &HodgeData {
        &self.hodge
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    /// `t_H - t_N`.
    pub fn degree(&self) -> Rational {
        Rational::from(self.hodge.t_h()) - self.module.t_n()
    }

    /// Dual module with the dual filtration.
    pub fn dual(&self) -> FilteredPhiModule {
        FilteredPhiModule {
            module: self.module.dual(),
            hodge: self.hodge.dual(),
        }
    }

    /// The flag used by subobject tests. Weight-only data is accepted when
    /// the choice of flag cannot matter: all weights equal, `φ` scalar, or
    /// no stable subspaces besides `0` and the whole space.
    pub fn effective_flag(&self) -> Result<Flag> {
        if let Some(f) = self.hodge.unique_flag() {
            return Ok(f);
        }
        if is_scalar(self.module.phi()) {
            return Ok(Flag::from_weights(&self.hodge.weights()));
        }
        // only 0 and the whole space are stable: the flag is never tested
        if let Some(subs) = certified_subobjects(&self.module, false) {
            if subs.iter().all(|s| s.is_zero() || s.is_whole()) {
                return Ok(Flag::from_weights(&self.hodge.weights()));
            }
        }
        Err(Error::FlagRequired)
    }

    fn with_flag(&self, flag: Flag) -> FilteredPhiModule {
        FilteredPhiModule {
            module: self.module.clone(),
            hodge: HodgeData::Flag(flag),
        }
    }

    /// `t_N` of a φ-stable subspace.
    pub fn t_n_of(&self, w: &Subspace) -> Rational {
        if w.is_zero() {
            return Rational::zero();
        }
        let phi = self.module.phi();
        let cols: Vec<Vec<Rational>> = w
            .basis()
            .iter()
            .map(|b| w.coordinates(&phi.mul_vec(b)).expect("stable subspace"))
            .collect();
        let restricted = RatMatrix::from_columns(w.dim(), &cols);
        valuation_unchecked(&restricted.det().expect("square"), self.module.p())
            .finite()
            .cloned()
            .expect("restriction of an invertible map")
    }
}

fn is_scalar(m: &RatMatrix) -> bool {
    let n = m.rows();
    n == 0 || *m == RatMatrix::identity(n).scale(&m[(0, 0)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    CertifiedTrue,
    CertifiedFalse,
    Uncertified,
}

impl Status {
    pub fn is_certified(self) -> bool {
        self != Status::Uncertified
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::CertifiedTrue
        } else {
            Status::CertifiedFalse
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Status::CertifiedTrue => Some(true),
            Status::CertifiedFalse => Some(false),
            Status::Uncertified => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<Vec<Rational>>>,
}

impl Verdict {
    pub(crate) fn yes() -> Self {
        Verdict {
            status: Status::CertifiedTrue,
            witness: None,
        }
    }

    pub(crate) fn unknown() -> Self {
        Verdict {
            status: Status::Uncertified,
            witness: None,
        }
    }

    pub(crate) fn no(w: &Subspace) -> Self {
        Verdict {
            status: Status::CertifiedFalse,
            witness: Some(w.basis().to_vec()),
        }
    }
}

/// Stable subspaces found for a module, sorted, with `0` and the whole
/// space always present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subobjects {
    pub subspaces: Vec<Subspace>,
    pub certified: bool,
}

struct Block {
    slope: Rational,
    space: Subspace,
}

/// Splits the module into φ-stable blocks, one per Newton slope, when every
/// slope `a/h` occurs with multiplicity exactly `h` and the matching factor
/// of the characteristic polynomial is found over `Q`. Each block is then
/// irreducible over `Q_p`, so stable subspaces are sums of blocks.
fn slope_blocks(m: &PhiModule) -> Option<Vec<Block>> {
    let n = m.rank();
    let f = Poly::new(m.phi().charpoly().ok()?);
    let slopes = newton_polygon(f.coeffs(), m.p()).ok()?;
    let p = m.p();
    let mut factors: Vec<Option<Poly>> = Vec::with_capacity(slopes.len());
    let roots = f.rational_roots();
    for (s, mult) in &slopes {
        let h: u64 = s.denom().try_into().ok()?;
        if *mult != h {
            return None;
        }
        let mut found = None;
        if h == 1 {
            if let Some(roots) = &roots {
                found = roots
                    .iter()
                    .find(|r| valuation_unchecked(r, p).finite() == Some(s))
                    .map(Poly::linear);
            }
        } else {
            let a: i64 = s.numer().try_into().ok()?;
            for sign in [1i64, -1] {
                let mut c = vec![Rational::zero(); h as usize + 1];
                c[0] = -Rational::prime_power(p, a) * Rational::from(sign);
                c[h as usize] = Rational::one();
                let g = Poly::new(c);
                if f.div_exact(&g).is_some() {
                    found = Some(g);
                    break;
                }
            }
        }
        factors.push(found);
    }
    let missing: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].is_none()).collect();
    match missing.len() {
        0 => {}
        1 => {
            let known = factors
                .iter()
                .flatten()
                .fold(Poly::one(), |acc, g| acc.mul(g));
            let g = f.div_exact(&known)?;
            let s = &slopes[missing[0]];
            if newton_polygon(g.coeffs(), p).ok()? != vec![s.clone()] {
                return None;
            }
            factors[missing[0]] = Some(g);
        }
        _ => return None,
    }
    let mut blocks = Vec::with_capacity(slopes.len());
    let mut total = 0;
    for ((s, mult), g) in slopes.iter().zip(factors) {
        let g = g?;
        let k = m.phi().eval_poly(g.coeffs()).ok()?;
        let space = Subspace::from_vectors(n, &k.nullspace()).ok()?;
        if space.dim() as u64 != *mult {
            return None;
        }
        total += space.dim();
        blocks.push(Block {
            slope: s.clone(),
            space,
        });
    }
    (total == n).then_some(blocks)
}

fn block_sum(blocks: &[Block], mask: u32, n: usize) -> Subspace {
    blocks
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(Subspace::zero(n), |acc, (_, b)| acc.sum(&b.space))
}

fn certified_subobjects(m: &PhiModule, oracle: bool) -> Option<Vec<Subspace>> {
    let n = m.rank();
    let blocks = slope_blocks(m)?;
    let k = blocks.len();
    if k > 20 {
        return None;
    }
    let nmat = m.monodromy();
    let mut out = Vec::new();
    if oracle {
        for mask in 0..(1u32 << k) {
            let w = block_sum(&blocks, mask, n);
            if w.is_stable(m.phi()) && w.is_stable(nmat) {
                out.push(w);
            }
        }
    } else {
        // N lowers slopes by one: it maps each block into the block of slope one less
        let mut succ: Vec<Option<usize>> = vec![None; k];
        for (i, b) in blocks.iter().enumerate() {
            let img = b.space.image(nmat);
            if img.is_zero() {
                continue;
            }
            let target = &b.slope - Rational::one();
            let j = blocks.iter().position(|c| c.slope == target)?;
            if !blocks[j].space.contains_subspace(&img) {
                return None;
            }
            succ[i] = Some(j);
        }
        for mask in 0..(1u32 << k) {
            let closed = (0..k).all(|i| mask >> i & 1 == 0 || succ[i].map_or(true, |j| mask >> j & 1 == 1));
            if closed {
                out.push(block_sum(&blocks, mask, n));
            }
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn small_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::from(rng.gen_range(-2i64..=2))).collect()
}

fn sampled_subobjects(m: &PhiModule, flag: Option<&Flag>, seed: u64) -> Vec<Subspace> {
    let n = m.rank();
    let phi = m.phi();
    let nmat = m.monodromy();
    let close = |vs: &[Vec<Rational>]| {
        Subspace::from_vectors(n, vs)
            .expect("vectors of the right length")
            .closure(&[phi, nmat])
    };
    let mut seeds: Vec<Vec<Vec<Rational>>> = (0..n).map(|i| vec![unit(n, i)]).collect();
    if let Some(f) = flag {
        for (_, v) in f.steps() {
            seeds.extend(v.basis().iter().map(|b| vec![b.clone()]));
            seeds.push(v.basis().to_vec());
        }
    }
    let f = Poly::new(phi.charpoly().expect("square"));
    if let Some(roots) = f.rational_roots() {
        for r in roots {
            let shifted = phi.sub(&RatMatrix::identity(n).scale(&r)).expect("square");
            let eig = shifted.nullspace();
            seeds.extend(eig.iter().map(|b| vec![b.clone()]));
            seeds.push(eig);
        }
    }
    seeds.push(nmat.nullspace());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 * n {
        seeds.push(vec![small_vector(&mut rng, n)]);
    }
    if let Some(f) = flag {
        for (_, v) in f.steps() {
            for _ in 0..2 {
                let c = small_vector(&mut rng, v.dim());
                let vec = (0..n)
                    .map(|j| v.basis().iter().zip(&c).map(|(b, x)| &b[j] * x).sum())
                    .collect();
                seeds.push(vec![vec]);
            }
        }
    }
    let mut found: Vec<Subspace> = seeds.iter().map(|s| close(s)).collect();
    found.push(Subspace::zero(n));
    found.push(Subspace::whole(n));
    found.sort();
    found.dedup();
    let base = found.clone();
    for (i, a) in base.iter().enumerate() {
        for b in &base[i + 1..] {
            found.push(a.sum(b));
            found.push(a.intersect(b));
        }
    }
    found.sort();
    found.dedup();
    found
}

/// All (φ,N)-stable subspaces when this can be certified, otherwise a seeded
/// sample of stable subspaces.
pub fn enumerate_subobjects(m: &FilteredPhiModule, opts: SearchOptions) -> Subobjects {
    match certified_subobjects(&m.module, opts.oracle) {
        Some(subspaces) => Subobjects {
            subspaces,
            certified: true,
        },
        None => Subobjects {
            subspaces: sampled_subobjects(&m.module, m.hodge.flag(), opts.seed),
            certified: false,
        },
    }
}

/// Candidates that decide every subobject test. For scalar `φ` every
/// subspace is stable, and the degree of a subspace of given rank is
/// maximized along the Hodge flag, so the flag steps suffice.
fn decisive(m: &FilteredPhiModule, flag: &Flag, opts: SearchOptions) -> Subobjects {
    if is_scalar(m.module.phi()) {
        let n = m.rank();
        let mut subspaces: Vec<Subspace> = flag.steps().iter().map(|s| s.1.clone()).collect();
        subspaces.push(Subspace::zero(n));
        subspaces.push(Subspace::whole(n));
        subspaces.sort();
        subspaces.dedup();
        return Subobjects {
            subspaces,
            certified: true,
        };
    }
    enumerate_subobjects(m, opts)
}

struct Scored {
    space: Subspace,
    degree: Rational,
}

fn scored(m: &FilteredPhiModule, flag: &Flag, opts: SearchOptions) -> (Vec<Scored>, bool) {
    let subs = decisive(m, flag, opts);
    let scored = subs
        .subspaces
        .into_iter()
        .map(|w| Scored {
            degree: Rational::from(flag.t_h_on(&w)) - m.t_n_of(&w),
            space: w,
        })
        .collect();
    (scored, subs.certified)
}

/// Most degree, then most rank, then least basis.
fn worst<'a>(cands: impl Iterator<Item = &'a Scored>) -> Option<&'a Scored> {
    cands.min_by(|a, b| {
        b.degree
            .cmp(&a.degree)
            .then(b.space.dim().cmp(&a.space.dim()))
            .then(a.space.cmp(&b.space))
    })
}

/// Semistable of slope 0: degree 0 and no subobject of positive degree.
pub fn is_weakly_admissible(m: &FilteredPhiModule, opts: SearchOptions) -> Result<Verdict> {
    let flag = m.effective_flag()?;
    if !m.degree().is_zero() {
        return Ok(Verdict::no(&Subspace::whole(m.rank())));
    }
    let (cands, certified) = scored(m, &flag, opts);
    if let Some(w) = worst(cands.iter().filter(|s| s.degree.is_positive())) {
        return Ok(Verdict::no(&w.space));
    }
    Ok(if certified { Verdict::yes() } else { Verdict::unknown() })
}

/// All Harder–Narasimhan slopes `≥ 0`: no subobject has degree above the
/// whole module. A witness is the subobject whose quotient has least degree.
pub fn is_acyclic(m: &FilteredPhiModule, opts: SearchOptions) -> Result<Verdict> {
    let flag = m.effective_flag()?;
    let total = m.degree();
    let (cands, certified) = scored(m, &flag, opts);
    if let Some(w) = worst(cands.iter().filter(|s| s.degree > total)) {
        return Ok(Verdict::no(&w.space));
    }
    Ok(if certified { Verdict::yes() } else { Verdict::unknown() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnStep {
    /// RREF basis of the step `W_j`.
    pub basis: Vec<Vec<Rational>>,
    /// Slope of the graded piece `W_j / W_{j-1}`.
    pub slope: Rational,
    /// Rank of `W_j`.
    pub rank: usize,
    /// Degree of `W_j`.
    pub degree: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnFiltration {
    pub steps: Vec<HnStep>,
}

impl HnFiltration {
    /// `(slope, rank)` of each graded piece, slopes strictly decreasing.
    pub fn graded(&self) -> Vec<(Rational, usize)> {
        let mut prev = 0;
        self.steps
            .iter()
            .map(|s| {
                let r = s.rank - prev;
                prev = s.rank;
                (s.slope.clone(), r)
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.steps.iter().map(|s| s.slope.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnResult {
    pub certified: bool,
    pub filtration: HnFiltration,
}

/// Greedy maximal destabilizing chain: from `W_{j-1}`, take the candidate
/// `W ⊋ W_{j-1}` of largest slope `(deg W - deg W_{j-1}) / (rk W - rk W_{j-1})`,
/// then largest rank, then least basis.
pub fn hn_filtration(m: &FilteredPhiModule, opts: SearchOptions) -> Result<HnResult> {
    let flag = m.effective_flag()?;
    let (cands, certified) = scored(m, &flag, opts);
    let n = m.rank();
    let mut prev_space = Subspace::zero(n);
    let mut prev_deg = Rational::zero();
    let mut steps = Vec::new();
    while prev_space.dim() < n {
        let best = cands
            .iter()
            .filter(|c| c.space.dim() > prev_space.dim() && c.space.contains_subspace(&prev_space))
            .map(|c| {
                let slope = (&c.degree - &prev_deg) / Rational::from((c.space.dim() - prev_space.dim()) as i64);
                (slope, c)
            })
            .min_by(|(s1, a), (s2, b)| {
                s2.cmp(s1)
                    .then(b.space.dim().cmp(&a.space.dim()))
                    .then(a.space.cmp(&b.space))
            })
            .expect("whole space is a candidate");
        let (slope, c) = best;
        steps.push(HnStep {
            basis: c.space.basis().to_vec(),
            slope,
            rank: c.space.dim(),
            degree: c.degree.clone(),
        });
        prev_space = c.space.clone();
        prev_deg = c.degree.clone();
    }
    Ok(HnResult {
        certified,
        filtration: HnFiltration { steps },
    })
}

fn require_certified_acyclic(m: &FilteredPhiModule, opts: SearchOptions) -> Result<()> {
    match is_acyclic(m, opts)?.status {
        Status::CertifiedTrue => Ok(()),
        Status::CertifiedFalse => Err(Error::NotAcyclic),
        Status::Uncertified => Err(Error::Uncertified),
    }
}

/// Lowers the Hodge filtration one dimension at a time until the module is
/// weakly admissible, keeping it acyclic throughout.
///
/// Each round takes `P`, the part of the HN filtration of positive slope,
/// the largest `i` with `Fil^i ∩ P ≠ 0`, and replaces `Fil^i` by a
/// hyperplane that contains `Fil^{i+1}` but misses a vector of
/// `Fil^i ∩ P`. Every quotient of degree 0 contains `P`, so no quotient
/// degree drops below 0.
pub fn fn4_reduce(m: &FilteredPhiModule, opts: SearchOptions) -> Result<FilteredPhiModule> {
    let mut flag = m.effective_flag()?;
    let mut cur = m.with_flag(flag.clone());
    require_certified_acyclic(&cur, opts)?;
    let n = m.rank();
    while cur.degree().is_positive() {
        let hn = hn_filtration(&cur, opts)?;
        let steps = &hn.filtration.steps;
        let positive = match steps.last() {
            Some(last) if last.slope.is_zero() && steps.len() >= 2 => {
                Subspace::from_vectors(n, &steps[steps.len() - 2].basis)?
            }
            _ => Subspace::whole(n),
        };
        let (i0, s) = flag
            .steps()
            .iter()
            .rev()
            .map(|(i, v)| (*i, v.intersect(&positive)))
            .find(|(_, s)| !s.is_zero())
            .ok_or_else(|| Error::Internal("positive part meets no filtration step".into()))?;
        let top = flag.fil(i0);
        let above = flag.fil(i0 + 1);
        let mut keep = above.basis().to_vec();
        keep.extend(s.sum(&above).complement_in(&top));
        let mut next = None;
        for drop in 0..s.dim() {
            let mut vs: Vec<Vec<Rational>> = s
                .basis()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != drop)
                .map(|(_, b)| b.clone())
                .collect();
            vs.extend(keep.iter().cloned());
            let h = Subspace::from_vectors(n, &vs)?;
            let cand = flag.with_fil(i0, h)?;
            let trial = cur.with_flag(cand.clone());
            if is_acyclic(&trial, opts)?.status == Status::CertifiedTrue {
                next = Some(cand);
                break;
            }
        }
        flag = next.ok_or_else(|| {
            Error::Internal(format!("no acyclic hyperplane of Fil^{i0} found"))
        })?;
        cur = cur.with_flag(flag.clone());
    }
    if is_weakly_admissible(&cur, opts)?.status != Status::CertifiedTrue {
        return Err(Error::Internal("reduced filtration is not weakly admissible".into()));
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VstDimension {
    pub h0: Dimension,
    pub h1_nonzero: bool,
}

/// Dimension of `H^0` of the bundle whose slopes are the HN slopes, and
/// whether its `H^1` is nonzero.
pub fn vst_dimension(m: &FilteredPhiModule, opts: SearchOptions) -> Result<VstDimension> {
    let hn = hn_filtration(m, opts)?;
    if !hn.certified {
        return Err(Error::Uncertified);
    }
    let mut h0 = Dimension::ZERO;
    let mut h1_nonzero = false;
    for (slope, rank) in hn.filtration.graded() {
        if slope.is_negative() {
            h1_nonzero = true;
        } else {
            let deg = (&slope * Rational::from(rank as i64))
                .to_i64()
                .ok_or_else(|| Error::Internal("non-integral graded degree".into()))?;
            h0 = h0 + Dimension::new(deg, rank as i64);
        }
    }
    Ok(VstDimension { h0, h1_nonzero })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: i64 = 5;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn diag(xs: &[i64]) -> PhiModule {
        PhiModule::from_phi(P as u64, RatMatrix::diagonal(&v(xs))).unwrap()
    }

    fn fil1(n: usize, vs: &[Vec<Rational>]) -> HodgeData {
        HodgeData::Flag(Flag::new(n, vec![(1, Subspace::from_vectors(n, vs).unwrap())]).unwrap())
    }

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn degree_examples() {
        let m = FilteredPhiModule::new(diag(&[P]), HodgeData::weights_of(&[1])).unwrap();
        assert_eq!(m.degree(), q(0));
        let m = FilteredPhiModule::new(diag(&[1]), HodgeData::weights_of(&[1])).unwrap();
        assert_eq!(m.degree(), q(1));
        let m = FilteredPhiModule::new(diag(&[1, P]), HodgeData::weights_of(&[0, 1])).unwrap();
        assert_eq!(m.degree(), q(0));
    }

    #[test]
    fn enumeration_examples() {
        let m = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[0, 1])])).unwrap();
        let s = enumerate_subobjects(&m, opts());
        assert!(s.certified);
        assert_eq!(s.subspaces.len(), 4);
        let id = FilteredPhiModule::new(diag(&[1, 1]), fil1(2, &[v(&[1, 1])])).unwrap();
        let s = enumerate_subobjects(&id, opts());
        assert!(!s.certified);
        assert!(s.subspaces.contains(&Subspace::from_vectors(2, &[v(&[1, 1])]).unwrap()));
        let comp = PhiModule::from_slopes(&[(Rational::frac(1, 2), 2)], P as u64).unwrap();
        let c = FilteredPhiModule::new(comp, HodgeData::weights_of(&[0, 1])).unwrap();
        let s = enumerate_subobjects(&c, opts());
        assert!(s.certified);
        assert_eq!(s.subspaces, vec![Subspace::zero(2), Subspace::whole(2)]);
    }

    #[test]
    fn weak_admissibility_examples() {
        let good = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[0, 1])])).unwrap();
        assert_eq!(is_weakly_admissible(&good, opts()).unwrap(), Verdict::yes());
        let bad = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[1, 0])])).unwrap();
        let verdict = is_weakly_admissible(&bad, opts()).unwrap();
        assert_eq!(verdict.status, Status::CertifiedFalse);
        assert_eq!(verdict.witness, Some(vec![v(&[1, 0])]));
        let generic = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[1, 1])])).unwrap();
        assert_eq!(is_weakly_admissible(&generic, opts()).unwrap().status, Status::CertifiedTrue);
        assert_eq!(is_acyclic(&bad, opts()).unwrap().status, Status::CertifiedFalse);
        let unit = FilteredPhiModule::new(diag(&[1]), HodgeData::weights_of(&[1])).unwrap();
        assert_eq!(is_acyclic(&unit, opts()).unwrap().status, Status::CertifiedTrue);
        assert_eq!(is_weakly_admissible(&unit, opts()).unwrap().status, Status::CertifiedFalse);
    }

    #[test]
    fn hn_examples() {
        let bad = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[1, 0])])).unwrap();
        let hn = hn_filtration(&bad, opts()).unwrap();
        assert!(hn.certified);
        assert_eq!(hn.filtration.slopes(), vec![q(1), q(-1)]);
        assert_eq!(hn.filtration.steps[0].basis, vec![v(&[1, 0])]);
        let good = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[0, 1])])).unwrap();
        assert_eq!(hn_filtration(&good, opts()).unwrap().filtration.slopes(), vec![q(0)]);
        // rank-1 summands of degree 2 and 0
        let sum = FilteredPhiModule::new(
            diag(&[1, P]),
            HodgeData::Flag(
                Flag::new(
                    2,
                    vec![(1, Subspace::whole(2)), (2, Subspace::coordinate(2, &[0]))],
                )
                .unwrap(),
            ),
        );
        // weights: e1 -> 2, e2 -> 1, degrees 2 - 0 and 1 - 1
        let hn = hn_filtration(&sum.unwrap(), opts()).unwrap();
        assert_eq!(hn.filtration.slopes(), vec![q(2), q(0)]);
    }

    #[test]
    fn fn4_examples() {
        let unit = FilteredPhiModule::new(diag(&[1]), HodgeData::weights_of(&[1])).unwrap();
        let r = fn4_reduce(&unit, opts()).unwrap();
        assert_eq!(r.hodge().weights(), vec![0]);
        let scalar = FilteredPhiModule::new(diag(&[P, P]), HodgeData::weights_of(&[1, 2])).unwrap();
        let r = fn4_reduce(&scalar, opts()).unwrap();
        assert_eq!(r.hodge().weights(), vec![1, 1]);
        assert!(r.effective_flag().unwrap().is_contained_in(&scalar.effective_flag().unwrap()));
        let good = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[0, 1])])).unwrap();
        assert_eq!(fn4_reduce(&good, opts()).unwrap().hodge(), good.hodge());
        let bad = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[1, 0])])).unwrap();
        assert_eq!(fn4_reduce(&bad, opts()), Err(Error::NotAcyclic));
    }

    #[test]
    fn vst_examples() {
        let good = FilteredPhiModule::new(diag(&[1, P]), fil1(2, &[v(&[0, 1])])).unwrap();
        let d = vst_dimension(&good, opts()).unwrap();
        assert_eq!((d.h0, d.h1_nonzero), (Dimension::new(0, 2), false));
        let unit = FilteredPhiModule::new(diag(&[1]), HodgeData::weights_of(&[1])).unwrap();
        let d = vst_dimension(&unit, opts()).unwrap();
        assert_eq!((d.h0, d.h1_nonzero), (Dimension::new(1, 1), false));
        let neg = FilteredPhiModule::new(diag(&[P]), HodgeData::weights_of(&[0])).unwrap();
        let d = vst_dimension(&neg, opts()).unwrap();
        assert_eq!((d.h0, d.h1_nonzero), (Dimension::ZERO, true));
    }

    #[test]
    fn monodromy_restricts_subobjects() {
        // N maps the slope-1 line onto the slope-0 line, so span(e2) is not stable
        let m = PhiModule::new(
            P as u64,
            RatMatrix::diagonal(&v(&[1, P])),
            RatMatrix::from_int_rows(&[&[0, 1], &[0, 0]]),
        )
        .unwrap();
        let f = FilteredPhiModule::new(m, HodgeData::weights_of(&[0, 0])).unwrap();
        let fast = enumerate_subobjects(&f, opts());
        let slow = enumerate_subobjects(&f, SearchOptions { oracle: true, ..opts() });
        assert_eq!(fast, slow);
        assert_eq!(fast.subspaces.len(), 3);
    }
}
