use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_size(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SizeMismatch { expected, found })
    }
}

/// Dense resource limits shared by every operation that materializes
/// factorial- or exponential-size objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` for which full tables over `S_n` are built.
    pub factorial_n: usize,
    /// Largest Hilbert-space dimension `d^n` for dense operators and statevectors.
    pub dense_dim: usize,
    /// Largest number of merged LCU unitaries in one segment.
    pub lcu_terms: usize,
    /// Largest number of amplitudes held at once for a joint object: a full
    /// basis (`d^n` vectors of length `d^n`) or an ancilla ⊗ system register.
    pub joint_entries: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            factorial_n: 8,
            dense_dim: 1 << 14,
            lcu_terms: 1 << 16,
            joint_entries: 1 << 24,
        }
    }
}

impl Caps {
    pub fn check_factorial(&self, n: usize) -> Result<()> {
        if n > self.factorial_n {
            return Err(Error::resource(format!(
                "n = {n} exceeds the factorial cap {} (n! table too large)",
                self.factorial_n
            )));
        }
        Ok(())
    }

    pub fn check_dense(&self, d: usize, n: usize) -> Result<usize> {
        let dim = checked_pow(d, n).filter(|&dim| dim <= self.dense_dim);
        dim.ok_or_else(|| {
            Error::resource(format!(
                "d^n = {d}^{n} exceeds the dense cap {}",
                self.dense_dim
            ))
        })
    }

    pub fn check_basis(&self, d: usize, n: usize) -> Result<usize> {
        let dim = self.check_dense(d, n)?;
        if dim.saturating_mul(dim) > self.joint_entries {
            return Err(Error::resource(format!(
                "full basis of {dim} vectors exceeds the joint cap of {} amplitudes",
                self.joint_entries
            )));
        }
        Ok(dim)
    }

    pub fn check_joint(&self, entries: usize, what: &str) -> Result<()> {
        if entries > self.joint_entries {
            return Err(Error::resource(format!(
                "{what} needs {entries} amplitudes, above the joint cap of {}",
                self.joint_entries
            )));
        }
        Ok(())
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
