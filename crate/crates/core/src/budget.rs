use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Caps on Witt length per prime and on residue degree.
///
/// Universal polynomials grow quickly with `p^n`; the caps keep every
/// computation at desk scale. Primes without an entry use `default_cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub caps: BTreeMap<u64, usize>,
    pub default_cap: usize,
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            caps: BTreeMap::from([(2, 4), (3, 3), (5, 2)]),
            default_cap: 1,
            max_degree: 2,
        }
    }
}

impl Budget {
    /// Largest admissible Witt length for `p`.
    pub fn cap(&self, p: u64) -> usize {
        self.caps.get(&p).copied().unwrap_or(self.default_cap)
    }

    pub fn check_length(&self, p: u64, n: usize) -> Result<()> {
        let cap = self.cap(p);
        if n > cap {
            return Err(Error::BudgetExceeded { p, n, cap });
        }
        Ok(())
    }

    pub fn check_degree(&self, f: u32) -> Result<()> {
        if f > self.max_degree {
            return Err(Error::DegreeBudgetExceeded { f, cap: self.max_degree });
        }
        Ok(())
    }

    /// `(p, n)` pairs covered by the table, `n` from 1 to the cap.
    pub fn table(&self) -> Vec<(u64, usize)> {
        self.caps.iter().flat_map(|(&p, &cap)| (1..=cap).map(move |n| (p, n))).collect()
    }
}

/// Parses `"2:4,3:3,5:2"`; degree and default cap keep their defaults.
impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut caps = BTreeMap::new();
        for entry in s.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (p, n) = entry
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("budget entry `{entry}` is not p:n")))?;
            let p: u64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad prime in `{entry}`")))?;
            let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad length in `{entry}`")))?;
            caps.insert(p, n);
        }
        Ok(Budget { caps, ..Budget::default() })
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.caps.iter().map(|(p, n)| format!("{p}:{n}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table() {
        let b = Budget::default();
        assert_eq!(b.to_string(), "2:4,3:3,5:2");
        assert_eq!(b.cap(7), 1);
        assert!(b.check_length(3, 3).is_ok());
        assert_eq!(b.check_length(5, 3), Err(Error::BudgetExceeded { p: 5, n: 3, cap: 2 }));
        assert!(b.check_degree(3).is_err());
    }

    #[test]
    fn parses_round_trip() {
        let b: Budget = "2:4, 3:3,5:2".parse().unwrap();
        assert_eq!(b, Budget::default());
        assert!("2-4".parse::<Budget>().is_err());
    }
}
