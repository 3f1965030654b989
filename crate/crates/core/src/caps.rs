//! Size limits guarding the exponential-cost enumerations.
//!
//! Defaults are conservative. `RICHLINES_CAPS` overrides individual caps with
//! a comma-separated list such as `grid=20000000,rlgp=14`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Elements generated for a constructed ground set.
    pub grid: u128,
    /// `|Y|` for symmetry-set enumeration over ℚ.
    pub sym: usize,
    /// Largest prime scanned by the full symmetry-set oracle.
    pub sym_fp_prime: u64,
    /// Input size `|A|` for the closure pipeline.
    pub pipeline: usize,
    /// Size of any intermediate stage `A_j` of the pipeline.
    pub stage: usize,
    /// `|Y|` for the exact RLGP search.
    pub rlgp: usize,
    /// Nodes the RLGP branch and bound may expand.
    pub rlgp_nodes: u64,
    /// Number of ordered tuples enumerated by product-set routines.
    pub product: u128,
    /// Number of prime-power slopes generated by the planner.
    pub slopes: usize,
    /// Bits of the integer whose root defines the planner length `L`.
    pub length_bits: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            grid: 10_000_000,
            sym: 64,
            sym_fp_prime: 257,
            pipeline: 1_000,
            stage: 20_000,
            rlgp: 12,
            rlgp_nodes: 2_000_000,
            product: 50_000_000,
            slopes: 1_000_000,
            length_bits: 1 << 23,
        }
    }
}

impl Caps {
    /// Every cap lifted.
    pub fn unlimited() -> Caps {
        Caps {
            grid: u128::MAX,
            sym: usize::MAX,
            sym_fp_prime: u64::MAX,
            pipeline: usize::MAX,
            stage: usize::MAX,
            rlgp: usize::MAX,
            rlgp_nodes: u64::MAX,
            product: u128::MAX,
            slopes: usize::MAX,
            length_bits: u64::MAX,
        }
    }

    /// Defaults overridden by `RICHLINES_CAPS`, if set.
    pub fn from_env() -> Result<Caps> {
        match std::env::var("RICHLINES_CAPS") {
            Ok(spec) => Caps::default().with_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Caps> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(item, "expected key=value"))?;
            let bad = |_| Error::parse(item, "cap must be a nonnegative integer");
            match key.trim() {
                "grid" => self.grid = value.trim().parse().map_err(bad)?,
                "sym" => self.sym = value.trim().parse().map_err(bad)?,
                "sym_fp_prime" => self.sym_fp_prime = value.trim().parse().map_err(bad)?,
                "pipeline" => self.pipeline = value.trim().parse().map_err(bad)?,
                "stage" => self.stage = value.trim().parse().map_err(bad)?,
                "rlgp" => self.rlgp = value.trim().parse().map_err(bad)?,
                "rlgp_nodes" => self.rlgp_nodes = value.trim().parse().map_err(bad)?,
                "product" => self.product = value.trim().parse().map_err(bad)?,
                "slopes" => self.slopes = value.trim().parse().map_err(bad)?,
                "length_bits" => self.length_bits = value.trim().parse().map_err(bad)?,
                other => return Err(Error::parse(other, "unknown cap name")),
            }
        }
        Ok(self)
    }
}

pub(crate) fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
