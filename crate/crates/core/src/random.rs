//! Seeded random instances for tests and benchmarks.
//!
//! Modules are built as `S D S^{-1}` from a diagonal or Dieudonné–Manin
//! block matrix `D`, so their slope blocks are found over `Q` and subobject
//! enumeration is certified.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bc::{BCObject, Piece};
use crate::filtration::{Flag, HodgeData};
use crate::sheaf::INFTY;
use crate::hn::FilteredPhiModule;
use crate::isocrystal::PhiModule;
use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::subspace::Subspace;

fn q(n: i64) -> Rational {
    Rational::from(n)
}

/// Invertible matrix with entries in `-bound..=bound`.
pub fn invertible<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RatMatrix {
    loop {
        let data = (0..n * n).map(|_| q(rng.gen_range(-bound..=bound))).collect();
        let m = RatMatrix::new(n, n, data).expect("n x n entries");
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// `n` linearly independent vectors with entries in `-bound..=bound`.
pub fn independent_vectors<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<Rational>> {
    invertible(rng, n, bound).to_rows()
}

/// Flag with the given weights along random independent vectors:
/// `Fil^i` is spanned by the vectors whose weight is at least `i`.
pub fn flag_with_weights<R: Rng>(rng: &mut R, weights: &[i64], bound: i64) -> Flag {
    let n = weights.len();
    let vs = independent_vectors(rng, n, bound);
    let mut distinct = weights.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let entries = distinct
        .iter()
        .map(|&i| {
            let span: Vec<Vec<Rational>> = weights
                .iter()
                .zip(&vs)
                .filter(|(w, _)| **w >= i)
                .map(|(_, v)| v.clone())
                .collect();
            (i, Subspace::from_vectors(n, &span).expect("ambient n"))
        })
        .collect();
    Flag::new(n, entries).expect("nested flag")
}

fn unit<R: Rng>(rng: &mut R, p: u64) -> i64 {
    let units: Vec<i64> = [1i64, -1, 2, -2, 3, -3]
        .into_iter()
        .filter(|u: &i64| u.unsigned_abs() % p != 0)
        .collect();
    *units.choose(rng).expect("nonempty")
}

fn conjugate(d: &RatMatrix, s: &RatMatrix) -> RatMatrix {
    let inv = s.inverse().expect("invertible");
    s.mul(d).and_then(|m| m.mul(&inv)).expect("square")
}

/// Shape of random (φ,N)-modules.
#[derive(Clone, Debug)]
pub struct ModuleSpec {
    pub primes: Vec<u64>,
    pub max_rank: usize,
    /// Integer slopes are drawn from `0..=max_valuation`.
    pub max_valuation: i64,
    /// Probability of a slope-`1/2` block (rank ≥ 2, `max_valuation ≥ 1`).
    pub half_slope: f64,
    /// Probability of a nonzero monodromy (rank ≥ 2, `max_valuation ≥ 1`).
    pub monodromy: f64,
    pub entry_bound: i64,
}

impl Default for ModuleSpec {
    fn default() -> Self {
        ModuleSpec {
            primes: vec![2, 3, 5],
            max_rank: 3,
            max_valuation: 3,
            half_slope: 0.0,
            monodromy: 0.0,
            entry_bound: 2,
        }
    }
}

/// A (φ,N)-module of rank `1..=max_rank` with distinct integer slopes, or
/// one slope-`1/2` block plus distinct integer slopes, or a monodromy pair.
pub fn phi_module<R: Rng>(rng: &mut R, spec: &ModuleSpec) -> PhiModule {
    let p = *spec.primes.choose(rng).expect("a prime");
    let n = rng.gen_range(1..=spec.max_rank);
    let room = spec.max_valuation >= 1 && n >= 2;
    let mut d = RatMatrix::zeros(0, 0);
    let mut nmat = RatMatrix::zeros(0, 0);
    let mut used: Vec<i64> = Vec::new();
    let mut filled = 0;
    if room && rng.gen_bool(spec.half_slope) {
        let block = PhiModule::from_slopes(&[(Rational::frac(1, 2), 2)], p).expect("slope 1/2");
        d = block.phi().clone();
        nmat = RatMatrix::zeros(2, 2);
        filled = 2;
    } else if room && rng.gen_bool(spec.monodromy) {
        // φ = diag(p λ, λ) with N e1 = e2 satisfies Nφ = pφN
        let a = rng.gen_range(0..spec.max_valuation);
        let lam = Rational::prime_power(p, a) * q(unit(rng, p));
        d = RatMatrix::diagonal(&[&lam * q(p as i64), lam]);
        nmat = RatMatrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        used = vec![a, a + 1];
        filled = 2;
    }
    let mut pool: Vec<i64> = (0..=spec.max_valuation).filter(|v| !used.contains(v)).collect();
    pool.shuffle(rng);
    while filled < n {
        let Some(v) = pool.pop() else { break };
        let lam = Rational::prime_power(p, v) * q(unit(rng, p));
        d = d.direct_sum(&RatMatrix::diagonal(&[lam]));
        nmat = nmat.direct_sum(&RatMatrix::zeros(1, 1));
        filled += 1;
    }
    let s = invertible(rng, filled, spec.entry_bound);
    PhiModule::new(p, conjugate(&d, &s), conjugate(&nmat, &s)).expect("valid (phi,N)-module")
}

/// A filtered module whose flag has weights in `0..=max_weight` along random
/// vectors.
pub fn filtered_module<R: Rng>(rng: &mut R, spec: &ModuleSpec, max_weight: i64) -> FilteredPhiModule {
    let m = phi_module(rng, spec);
    let weights: Vec<i64> = (0..m.rank()).map(|_| rng.gen_range(0..=max_weight)).collect();
    let flag = flag_with_weights(rng, &weights, spec.entry_bound);
    FilteredPhiModule::new(m, HodgeData::Flag(flag)).expect("ranks agree")
}

/// Slope multiset with denominators `≤ max_den`, multiplicities multiples of
/// the denominators, total rank `≤ max_rank`, slopes in `[-span, span]`.
pub fn slope_multiset<R: Rng>(rng: &mut R, max_den: i64, max_rank: u64, span: i64) -> Vec<(Rational, u64)> {
    let mut out: Vec<(Rational, u64)> = Vec::new();
    let mut total = 0u64;
    loop {
        let h = rng.gen_range(1..=max_den);
        let a = rng.gen_range(-span * h..=span * h);
        let s = Rational::frac(a, h);
        let h = s.denom().try_into().unwrap_or(1u64);
        if total + h > max_rank {
            break;
        }
        let k = rng.gen_range(1..=((max_rank - total) / h));
        total += k * h;
        match out.iter_mut().find(|(t, _)| *t == s) {
            Some(e) => e.1 += k * h,
            None => out.push((s, k * h)),
        }
        if rng.gen_bool(0.4) {
            break;
        }
    }
    out.sort();
    out
}

/// Sum of up to `max_pieces` stable pieces with small parameters. With
/// `nonpositive` set, quotient pieces and torsion away from infinity are
/// left out, so the curvature is `≤ 0`.
pub fn bc_object<R: Rng>(rng: &mut R, max_pieces: usize, nonpositive: bool) -> BCObject {
    let count = rng.gen_range(0..=max_pieces);
    let kinds = if nonpositive { 3 } else { 5 };
    let pieces = (0..count)
        .map(|_| match rng.gen_range(0..kinds) {
            0 => Piece::Ueff {
                d: rng.gen_range(0..=3),
                h: rng.gen_range(1..=3),
            },
            1 => Piece::Qp(rng.gen_range(1..=3)),
            2 => Piece::Tors {
                point: INFTY.into(),
                length: rng.gen_range(1..=3),
            },
            3 => Piece::Uquot {
                d: rng.gen_range(1..=3),
                h: rng.gen_range(1..=3),
            },
            _ => Piece::Tors {
                point: "x".into(),
                length: rng.gen_range(1..=2),
            },
        })
        .collect();
    BCObject::new(pieces).expect("valid pieces")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_modules_are_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = ModuleSpec {
            half_slope: 0.3,
            monodromy: 0.3,
            ..ModuleSpec::default()
        };
        for _ in 0..50 {
            let m = filtered_module(&mut rng, &spec, 3);
            assert!(m.module().check());
            let subs = crate::hn::enumerate_subobjects(&m, Default::default());
            assert!(subs.certified, "{:?}", m.module());
        }
    }

    #[test]
    fn flag_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = flag_with_weights(&mut rng, &[2, 0, 2, 1], 2);
        assert_eq!(f.weights(), vec![0, 1, 2, 2]);
    }
}
