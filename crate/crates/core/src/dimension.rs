use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A Banach–Colmez Dimension `(dim, ht)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dimension {
    pub dim: i64,
    pub ht: i64,
}

impl Dimension {
    pub const ZERO: Dimension = Dimension { dim: 0, ht: 0 };

    pub const fn new(dim: i64, ht: i64) -> Self {
        Dimension { dim, ht }
    }

    pub fn is_zero(&self) -> bool {
        *self == Dimension::ZERO
    }

    /// Dimensions that a Banach–Colmez space can have: `dim ≥ 0`, and
    /// `ht ≥ 0` whenever `dim = 0`.
    pub fn is_valid(&self) -> bool {
        self.dim > 0 || (self.dim == 0 && self.ht >= 0)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dim, self.ht)
    }
}

impl Add for Dimension {
    type Output = Dimension;
    fn add(self, o: Dimension) -> Dimension {
        Dimension::new(self.dim + o.dim, self.ht + o.ht)
    }
}

impl Sub for Dimension {
    type Output = Dimension;
    fn sub(self, o: Dimension) -> Dimension {
        Dimension::new(self.dim - o.dim, self.ht - o.ht)
    }
}

impl Neg for Dimension {
    type Output = Dimension;
    fn neg(self) -> Dimension {
        Dimension::new(-self.dim, -self.ht)
    }
}

impl Mul<i64> for Dimension {
    type Output = Dimension;
    fn mul(self, k: i64) -> Dimension {
        Dimension::new(self.dim * k, self.ht * k)
    }
}

impl Sum for Dimension {
    fn sum<I: Iterator<Item = Dimension>>(iter: I) -> Dimension {
        iter.fold(Dimension::ZERO, Add::add)
    }
}
