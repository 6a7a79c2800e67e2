//! Resource guard for dense tensor allocations.
//!
//! Multilinear maps are stored as dense coefficient tensors of size
//! `(g*s^2)^arity * s^2`; the guard rejects configurations beyond a cap
//! instead of exhausting memory. The default cap suits desk-scale inputs
//! (s <= 3, g <= 3, arity <= 4) and can be overridden with the
//! `NCGERM_MEM_CAP` environment variable.

pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("tensor with {entries} entries exceeds the cap of {cap} (set NCGERM_MEM_CAP to override)")]
pub struct ResourceError {
    pub entries: u128,
    pub cap: u128,
}

pub fn mem_cap() -> u128 {
    std::env::var("NCGERM_MEM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// Check that a dense object with `entries` scalars fits under the cap.
pub fn check_entries(entries: u128) -> Result<(), ResourceError> {
    let cap = mem_cap();
    if entries > cap {
        Err(ResourceError { entries, cap })
    } else {
        Ok(())
    }
}

/// Entry count of an arity-`arity` tensor at point size `s` with `g` letters.
pub fn tensor_entries(s: usize, g: usize, arity: usize) -> u128 {
    let dim = (g * s * s) as u128;
    let sq = (s * s) as u128;
    dim.checked_pow(arity as u32)
        .unwrap_or(u128::MAX)
        .saturating_mul(sq)
}
