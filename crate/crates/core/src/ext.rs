//! Ext dimensions between a few almost-`C` representations of `G_K`.
//!
//! Dimensions are over `Q_p`. Pairs outside the tables get only the Euler
//! characteristic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supported objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// The Tate twist `C(j)`.
    C(i64),
    /// `(B_dR^+ / t^k)(twist)`.
    BdrQuotient {
        k: u32,
        #[serde(default)]
        twist: i64,
    },
    /// `t^{-n} B_dR^+ / t^j B_dR^+`.
    BdrWindow { n: u32, j: u32 },
    /// The trivial representation `Q_p^n`.
    Qp(u32),
}

impl Label {
    pub fn validate(&self) -> Result<()> {
        let bad = match self {
            Label::BdrQuotient { k: 0, .. } => "B_dR^+/t^k needs k >= 1",
            Label::BdrWindow { j: 0, .. } => "t^-n B_dR^+/t^j needs j >= 1",
            Label::Qp(0) => "Q_p^n needs n >= 1",
            _ => return Ok(()),
        };
        Err(Error::UnsupportedLabel(bad.into()))
    }

    /// Height of the associated Vector Space.
    pub fn height(&self) -> i64 {
        match self {
            Label::Qp(n) => *n as i64,
            _ => 0,
        }
    }

    /// Tate twist by `m`, when the result is again a label.
    pub fn twist(&self, m: i64) -> Option<Label> {
        match *self {
            Label::C(j) => Some(Label::C(j + m)),
            Label::BdrQuotient { k, twist } => Some(Label::BdrQuotient { k, twist: twist + m }),
            Label::BdrWindow { .. } | Label::Qp(_) => None,
        }
    }

    fn normalized(self) -> Label {
        match self {
            Label::BdrQuotient { k: 1, twist } => Label::C(twist),
            l => l,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtResult {
    /// `dim Ext^0, Ext^1, Ext^2`, or `None` outside the tables.
    pub ext: Option<[u64; 3]>,
    pub euler: i64,
}

impl ExtResult {
    pub fn is_tabulated(&self) -> bool {
        self.ext.is_some()
    }
}

/// `dim_K Ext^a(B_dR^+/t^k, C(j))`.
pub fn bdr_quotient_to_c(k: u32, j: i64) -> [u64; 3] {
    let k = k as i64;
    [(j == 0) as u64, (j == 0 || j == k) as u64, (j == k) as u64]
}

fn reversed(e: [u64; 3]) -> [u64; 3] {
    [e[2], e[1], e[0]]
}

/// Ext dimensions of the pair `(x, y)` over `K` with `[K:Q_p] = k_degree`.
pub fn ext_tables(x: &Label, y: &Label, k_degree: u32) -> Result<ExtResult> {
    x.validate()?;
    y.validate()?;
    if k_degree == 0 {
        return Err(Error::UnsupportedLabel("[K:Q_p] must be at least 1".into()));
    }
    let d = k_degree as u64;
    let euler = -(k_degree as i64) * x.height() * y.height();
    let over_k = |e: [u64; 3]| Some(e.map(|v| v * d));
    let ext = match (*x, *y) {
        (Label::BdrQuotient { k: i, twist: 0 }, Label::BdrWindow { j, .. }) if i < j => Some([0; 3]),
        (Label::Qp(n), Label::Qp(m)) => {
            let nm = (n as u64) * (m as u64);
            Some([nm, nm * (d + 1), 0])
        }
        _ => match (x.normalized(), y.normalized()) {
            (Label::C(i), Label::C(j)) => over_k(bdr_quotient_to_c(1, j - i)),
            (Label::BdrQuotient { k, twist }, Label::C(j)) => over_k(bdr_quotient_to_c(k, j - twist)),
            (Label::C(j), Label::BdrQuotient { k, twist }) => {
                over_k(reversed(bdr_quotient_to_c(k, j + 1 - twist)))
            }
            _ => None,
        },
    };
    Ok(ExtResult { ext, euler })
}
