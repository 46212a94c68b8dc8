//! Command-line companion to `composite-core`: verification suites,
//! parameter sweeps, the Pauli demonstration and the JSON/CSV formats.

pub mod demo;
pub mod formats;
pub mod sweep;
pub mod verify;

/// Environment variable capping the Fock-space dimension.
pub const MAX_DIM_ENV: &str = "COMPOSITE_LAB_MAX_DIM";

pub const DEFAULT_MAX_DIM: usize = 1 << 20;

/// Reads the dimension cap from [`MAX_DIM_ENV`], defaulting to [`DEFAULT_MAX_DIM`].
pub fn max_dim_from_env() -> anyhow::Result<usize> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow::anyhow!("{MAX_DIM_ENV}=`{v}` is not a positive integer")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_DIM),
        Err(e) => Err(anyhow::anyhow!("{MAX_DIM_ENV}: {e}")),
    }
}
