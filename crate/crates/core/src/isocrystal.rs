//! (φ,N)-modules over `Q_p` with residue field `F_p`, given by rational matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::polygon::{merge_equal, newton_polygon, newton_polygon_oracle};
use crate::rational::{check_prime, valuation_unchecked, ExtendedValuation, Rational};

/// Sorted `(slope, multiplicity)` pairs.
pub type SlopeMultiset = Vec<(Rational, u64)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    Matrix,
    DmNormal,
}

/// An invertible Frobenius `phi` and a nilpotent monodromy `n` with
/// `N φ = p φ N`. Matrices act on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiModule {
    p: u64,
    phi: RatMatrix,
    n: RatMatrix,
    form: Form,
}

/// Tests `N φ = p φ N`, nilpotency of `N`, and invertibility of `φ`.
///
/// Size mismatches and a singular `φ` are errors; a failed relation or a
/// non-nilpotent `N` gives `Ok(false)`.
pub fn check_phi_n(p: u64, phi: &RatMatrix, n: &RatMatrix) -> Result<bool> {
    check_prime(p)?;
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    if n.rows() != phi.rows() || n.cols() != phi.cols() {
        return Err(Error::DimensionMismatch(format!(
            "phi is {}x{}, N is {}x{}",
            phi.rows(),
            phi.cols(),
            n.rows(),
            n.cols()
        )));
    }
    if phi.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let lhs = n.mul(phi)?;
    let rhs = phi.mul(n)?.scale(&Rational::from(p as i64));
    if lhs != rhs {
        return Ok(false);
    }
    Ok(n.pow(phi.rows() as u32)?.is_zero())
}

impl PhiModule {
    pub fn new(p: u64, phi: RatMatrix, n: RatMatrix) -> Result<Self> {
        if !check_phi_n(p, &phi, &n)? {
            return Err(Error::InvalidModule(
                "N must be nilpotent and satisfy N phi = p phi N".into(),
            ));
        }
        Ok(PhiModule {
            p,
            phi,
            n,
            form: Form::Matrix,
        })
    }

    /// Module with `N = 0`.
    pub fn from_phi(p: u64, phi: RatMatrix) -> Result<Self> {
        let n = RatMatrix::zeros(phi.rows(), phi.cols());
        PhiModule::new(p, phi, n)
    }

    /// Dieudonné–Manin normal form: one companion block of `x^h - p^a` per
    /// copy of the slope `a/h`, blocks in ascending slope order.
    pub fn from_slopes(slopes: &[(Rational, u64)], p: u64) -> Result<Self> {
        check_prime(p)?;
        let mut sorted: Vec<(Rational, u64)> = slopes.iter().filter(|s| s.1 > 0).cloned().collect();
        sorted.sort();
        let sorted = merge_equal(sorted);
        let total: u64 = sorted.iter().map(|s| s.1).sum();
        let mut phi = RatMatrix::zeros(0, 0);
        for (s, m) in &sorted {
            let h = s.denom().try_into().unwrap_or(u64::MAX);
            if h > total {
                return Err(Error::SlopeDenominator {
                    slope: s.to_string(),
                    block: h,
                    rank: total,
                });
            }
            if m % h != 0 {
                return Err(Error::SlopeMultiplicity {
                    slope: s.to_string(),
                    block: h,
                    multiplicity: *m,
                });
            }
            let a = s.numer().try_into().map_err(|_| {
                Error::InvalidModule(format!("slope numerator of {s} out of range"))
            })?;
            let block = dm_block(p, a, h as usize);
            for _ in 0..m / h {
                phi = phi.direct_sum(&block);
            }
        }
        let r = phi.rows();
        Ok(PhiModule {
            p,
            phi,
            n: RatMatrix::zeros(r, r),
            form: Form::DmNormal,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &RatMatrix {
        &self.phi
    }

    pub fn monodromy(&self) -> &RatMatrix {
        &self.n
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Re-validates the stored matrices.
    pub fn check(&self) -> bool {
        check_phi_n(self.p, &self.phi, &self.n).unwrap_or(false)
    }

    /// Root valuations of the characteristic polynomial of `φ`, ascending.
    pub fn newton_slopes(&self) -> SlopeMultiset {
        if self.rank() == 0 {
            return Vec::new();
        }
        let f = self.phi.charpoly().expect("square");
        newton_polygon(&f, self.p).expect("invertible phi has nonzero constant term")
    }

    /// Newton slopes through the Faddeev–LeVerrier charpoly and a
    /// gift-wrapped hull.
    pub fn newton_slopes_oracle(&self) -> SlopeMultiset {
        if self.rank() == 0 {
            return Vec::new();
        }
        let f = self.phi.charpoly_faddeev().expect("square");
        newton_polygon_oracle(&f, self.p).expect("invertible phi has nonzero constant term")
    }

    /// `v_p(det φ)`.
    pub fn t_n(&self) -> Rational {
        match valuation_unchecked(&self.phi.det().expect("square"), self.p) {
            ExtendedValuation::Finite(v) => v,
            ExtendedValuation::Infinity => unreachable!("phi is invertible"),
        }
    }

    fn same_prime(&self, other: &PhiModule) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn tensor(&self, other: &PhiModule) -> Result<PhiModule> {
        self.same_prime(other)?;
        let i_a = RatMatrix::identity(self.rank());
        let i_b = RatMatrix::identity(other.rank());
        let phi = self.phi.kron(&other.phi);
        let n = self.n.kron(&i_b).add(&i_a.kron(&other.n))?;
        Ok(PhiModule {
            p: self.p,
            phi,
            n,
            form: Form::Matrix,
        })
    }

    pub fn dual(&self) -> PhiModule {
        PhiModule {
            p: self.p,
            phi: self.phi.inverse().expect("invertible").transpose(),
            n: self.n.transpose().scale(&Rational::from(-1)),
            form: Form::Matrix,
        }
    }

    /// Top exterior power.
    pub fn det(&self) -> PhiModule {
        let d = self.phi.det().expect("square");
        PhiModule {
            p: self.p,
            phi: RatMatrix::diagonal(&[d]),
            n: RatMatrix::zeros(1, 1),
            form: Form::Matrix,
        }
    }

    pub fn direct_sum(&self, other: &PhiModule) -> Result<PhiModule> {
        self.same_prime(other)?;
        Ok(PhiModule {
            p: self.p,
            phi: self.phi.direct_sum(&other.phi),
            n: self.n.direct_sum(&other.n),
            form: Form::Matrix,
        })
    }

    /// Base change by `s`: the module with matrices `s φ s⁻¹`, `s N s⁻¹`.
    pub fn conjugate(&self, s: &RatMatrix) -> Result<PhiModule> {
        let inv = s.inverse()?;
        Ok(PhiModule {
            p: self.p,
            phi: s.mul(&self.phi)?.mul(&inv)?,
            n: s.mul(&self.n)?.mul(&inv)?,
            form: Form::Matrix,
        })
    }
}

fn dm_block(p: u64, a: i64, h: usize) -> RatMatrix {
    let mut coeffs = vec![Rational::zero(); h + 1];
    coeffs[0] = -Rational::prime_power(p, a);
    coeffs[h] = Rational::one();
    RatMatrix::companion(&coeffs).expect("monic")
}

#[derive(Serialize)]
struct PhiModuleOut<'a> {
    p: u64,
    phi: &'a RatMatrix,
    #[serde(rename = "N")]
    n: &'a RatMatrix,
    form: Form,
}

impl Serialize for PhiModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PhiModuleOut {
            p: self.p,
            phi: &self.phi,
            n: &self.n,
            form: self.form,
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiModuleIn {
    p: u64,
    phi: Option<RatMatrix>,
    #[serde(rename = "N")]
    n: Option<RatMatrix>,
    form: Option<Form>,
    slopes: Option<Vec<(Rational, u64)>>,
}

impl TryFrom<PhiModuleIn> for PhiModule {
    type Error = Error;

    fn try_from(raw: PhiModuleIn) -> Result<Self> {
        match (raw.phi, raw.slopes) {
            (Some(_), Some(_)) => Err(Error::InvalidModule(
                "give either \"phi\" or \"slopes\", not both".into(),
            )),
            (None, None) => Err(Error::InvalidModule("missing \"phi\"".into())),
            (None, Some(slopes)) => {
                if raw.n.as_ref().is_some_and(|n| !n.is_zero()) {
                    return Err(Error::InvalidModule(
                        "slope shorthand does not carry a monodromy".into(),
                    ));
                }
                PhiModule::from_slopes(&slopes, raw.p)
            }
            (Some(phi), None) => {
                let n = raw
                    .n
                    .unwrap_or_else(|| RatMatrix::zeros(phi.rows(), phi.cols()));
                let mut m = PhiModule::new(raw.p, phi, n)?;
                if raw.form == Some(Form::DmNormal) {
                    let normal = PhiModule::from_slopes(&m.newton_slopes(), m.p)?;
                    if normal.phi != m.phi || !m.n.is_zero() {
                        return Err(Error::InvalidModule(
                            "matrix is not in Dieudonné-Manin normal form".into(),
                        ));
                    }
                    m.form = Form::DmNormal;
                }
                Ok(m)
            }
        }
    }
}

impl<'de> Deserialize<'de> for PhiModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PhiModule::try_from(PhiModuleIn::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
