use std::sync::OnceLock;

pub const DEFAULT_MAX_BASE: usize = 16;

/// Largest set whose subsets are enumerated exhaustively. Read once from
/// `COALSIM_MAX_BASE`, falling back to 16.
pub fn max_base() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("COALSIM_MAX_BASE")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&n: &usize| n > 0 && n < 31)
            .unwrap_or(DEFAULT_MAX_BASE)
    })
}
