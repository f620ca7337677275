use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// ℝⁿ with polynomial coefficients in `x1..xn`.
    Euclid,
    /// Tⁿ with finite Fourier sums in `e^{i k·θ}`.
    Torus,
}

/// A globally framed chart: ℝⁿ or the n-torus, with frame fields `∂1..∂n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub dim: usize,
}

impl ChartSpec {
    pub fn new(kind: ChartKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidChart("dimension must be at least 1".into()));
        }
        Ok(ChartSpec { kind, dim })
    }

    pub fn euclid(dim: usize) -> Self {
        Self::new(ChartKind::Euclid, dim).expect("positive dimension")
    }

    pub fn torus(dim: usize) -> Self {
        Self::new(ChartKind::Torus, dim).expect("positive dimension")
    }

    /// The circle `T¹`.
    pub fn circle() -> Self {
        Self::torus(1)
    }

    pub fn is_torus(&self) -> bool {
        self.kind == ChartKind::Torus
    }

    pub(crate) fn ensure_same(&self, other: &ChartSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch { left: *self, right: *other })
        }
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i + 1, dim: self.dim })
        }
    }
}

impl fmt::Display for ChartSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChartKind::Euclid => write!(f, "euclid:{}", self.dim),
            ChartKind::Torus => write!(f, "torus:{}", self.dim),
        }
    }
}

impl FromStr for ChartSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, dim) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidChart(format!("expected euclid:<n> or torus:<n>, got `{s}`")))?;
        let dim: usize = dim
            .trim()
            .parse()
            .map_err(|_| Error::InvalidChart(format!("bad dimension in `{s}`")))?;
        match kind.trim() {
            "euclid" => ChartSpec::new(ChartKind::Euclid, dim),
            "torus" => ChartSpec::new(ChartKind::Torus, dim),
            other => Err(Error::InvalidChart(format!("unknown chart kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let c: ChartSpec = "torus:2".parse().unwrap();
        assert_eq!(c, ChartSpec::torus(2));
        assert_eq!(c.to_string(), "torus:2");
        assert!("euclid:0".parse::<ChartSpec>().is_err());
        assert!("sphere:2".parse::<ChartSpec>().is_err());
    }
}
