//! Kernelization audit reports.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

/// Whether a brute-force equivalence check ran, and what it found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Unchecked,
    Equivalent,
    Mismatch,
}

impl fmt::Display for EquivalenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EquivalenceVerdict::Unchecked => "unchecked",
            EquivalenceVerdict::Equivalent => "equivalent",
            EquivalenceVerdict::Mismatch => "mismatch",
        };
        f.write_str(s)
    }
}

/// Audit record emitted by every kernelizer: sizes before and after, which
/// rules fired, the compression parameters, and the exact-arithmetic check of
/// the worst-case magnitude bound.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub problem: String,
    pub original_bits: u64,
    pub kernel_bits: u64,
    pub rule_firings: u64,
    pub trace: Vec<String>,
    /// Dimension of the vector handed to the weight reducer.
    pub compression_dim: Option<usize>,
    /// Sign-preservation radius handed to the weight reducer.
    pub compression_radius: Option<BigInt>,
    /// Every compressed number is within the worst-case magnitude bound.
    pub bound_ok: bool,
    pub equivalence: EquivalenceVerdict,
    pub extra: BTreeMap<String, String>,
}

impl KernelReport {
    pub fn new(problem: impl Into<String>) -> Self {
        KernelReport {
            problem: problem.into(),
            original_bits: 0,
            kernel_bits: 0,
            rule_firings: 0,
            trace: Vec::new(),
            compression_dim: None,
            compression_radius: None,
            bound_ok: true,
            equivalence: EquivalenceVerdict::Unchecked,
            extra: BTreeMap::new(),
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.extra.insert(key.into(), value.into());
    }
}

impl fmt::Display for KernelReport {
    /// Machine-readable `key=value` lines, one per field, trace lines last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "problem={}", self.problem)?;
        writeln!(f, "original_bits={}", self.original_bits)?;
        writeln!(f, "kernel_bits={}", self.kernel_bits)?;
        writeln!(f, "rule_firings={}", self.rule_firings)?;
        if let Some(dim) = self.compression_dim {
            writeln!(f, "compression_dim={dim}")?;
        }
        if let Some(radius) = &self.compression_radius {
            writeln!(f, "compression_radius={radius}")?;
        }
        writeln!(f, "bound_ok={}", self.bound_ok)?;
        writeln!(f, "equivalence={}", self.equivalence)?;
        for (k, v) in &self.extra {
            writeln!(f, "{k}={v}")?;
        }
        for line in &self.trace {
            writeln!(f, "trace={line}")?;
        }
        Ok(())
    }
}
