//! The supported levels and their derived constants.

use crate::error::{Error, Result};

/// A genus-zero prime level with the constants the congruence machinery uses.
///
/// `lambda = 24/(p-1)`. The constants `delta`, `gamma` and the congruence bound
/// are defined only for p in {2, 3, 5, 7}; p = 13 is constructible in
/// exploratory mode and carries none of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeContext {
    p: u32,
}

impl PrimeContext {
    pub const SUPPORTED: [u32; 4] = [2, 3, 5, 7];

    pub fn new(p: u32) -> Result<Self> {
        if Self::SUPPORTED.contains(&p) {
            Ok(PrimeContext { p })
        } else if p == 13 {
            Err(Error::ExploratoryPrime(13))
        } else {
            Err(Error::UnsupportedPrime(p))
        }
    }

    /// Also accepts 13, the remaining genus-zero prime with 24/(p-1) integral.
    pub fn exploratory(p: u32) -> Result<Self> {
        if p == 13 {
            Ok(PrimeContext { p })
        } else {
            Self::new(p)
        }
    }

    /// All four congruence primes, in increasing order.
    pub fn all() -> [PrimeContext; 4] {
        Self::SUPPORTED.map(|p| PrimeContext { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_exploratory(&self) -> bool {
        self.p == 13
    }

    pub fn lambda(&self) -> u32 {
        24 / (self.p - 1)
    }

    /// Extra power of p gained by U_p on R^(p).
    pub fn delta(&self) -> Option<u32> {
        match self.p {
            2 => Some(3),
            3 => Some(2),
            5 | 7 => Some(1),
            _ => None,
        }
    }

    /// Required valuation of the degree-k coefficient of an R^(p) element.
    pub fn gamma(&self, k: usize) -> Option<i64> {
        if self.is_exploratory() {
            return None;
        }
        let k = k as i64;
        if k <= 1 {
            return Some(0);
        }
        Some(match self.p {
            2 => 8 * (k - 1),
            3 => 4 * (k - 1),
            _ => k,
        })
    }

    /// Exponent of p in the modulus of the main congruence, for `d = beta - alpha >= 1`.
    pub fn congruence_bound(&self, d: i64) -> Result<i64> {
        if d <= 0 {
            return Err(Error::Precondition(format!(
                "bound requires beta - alpha >= 1, got {d}"
            )));
        }
        match self.p {
            2 => Ok(3 * d + 8),
            3 => Ok(2 * d + 3),
            5 => Ok(d + 1),
            7 => Ok(d),
            p => Err(Error::ExploratoryPrime(p)),
        }
    }

    /// Lower bound for the p-adic valuation of the Newton power sum S_n.
    pub fn power_sum_target(&self, n: usize) -> Option<i64> {
        let n = n as i64;
        match self.p {
            2 => Some(4 * n + 12),
            3 => Some(2 * n + 7),
            5 => Some(2 * n + 2),
            7 => Some(n + 2),
            _ => None,
        }
    }

    pub(crate) fn require_congruence_prime(&self) -> Result<()> {
        if self.is_exploratory() {
            Err(Error::ExploratoryPrime(self.p))
        } else {
            Ok(())
        }
    }
}

impl std::fmt::Display for PrimeContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants() {
        let got: Vec<_> = PrimeContext::all()
            .iter()
            .map(|c| (c.p(), c.lambda(), c.delta().unwrap()))
            .collect();
        assert_eq!(got, vec![(2, 24, 3), (3, 12, 2), (5, 6, 1), (7, 4, 1)]);
        for c in PrimeContext::all() {
            assert_eq!(c.lambda() % 2, 0);
        }
    }

    #[test]
    fn gamma_table() {
        let c2 = PrimeContext::new(2).unwrap();
        let c3 = PrimeContext::new(3).unwrap();
        let c7 = PrimeContext::new(7).unwrap();
        assert_eq!(c2.gamma(1), Some(0));
        assert_eq!(c2.gamma(2), Some(8));
        assert_eq!(c3.gamma(4), Some(12));
        assert_eq!(c7.gamma(5), Some(5));
    }

    #[test]
    fn bounds() {
        assert_eq!(PrimeContext::new(2).unwrap().congruence_bound(1), Ok(11));
        assert_eq!(PrimeContext::new(7).unwrap().congruence_bound(2), Ok(2));
        assert_eq!(PrimeContext::new(3).unwrap().congruence_bound(3), Ok(9));
        assert_eq!(PrimeContext::new(5).unwrap().congruence_bound(2), Ok(3));
        assert!(PrimeContext::new(5).unwrap().congruence_bound(0).is_err());
    }

    #[test]
    fn thirteen_is_exploratory_only() {
        assert_eq!(PrimeContext::new(13), Err(Error::ExploratoryPrime(13)));
        let c = PrimeContext::exploratory(13).unwrap();
        assert_eq!(c.lambda(), 2);
        assert_eq!(c.delta(), None);
        assert!(c.congruence_bound(1).is_err());
        assert_eq!(PrimeContext::new(11), Err(Error::UnsupportedPrime(11)));
    }
}
