//! Exact-arithmetic computation and verification engine for refined vertex
//! networks, instanton χ_y-genera and Fock-space operator traces.
//!
//! Everything is computed over arbitrary-precision rationals at generic
//! parameter points, with Kähler variables carried as truncated formal
//! series; identities certified here are coefficient-exact within the
//! declared truncation windows.

pub mod error;
pub mod fock;
pub mod instanton;
pub mod params;
pub mod partitions;
pub mod rat;
pub mod series;
pub mod symfun;
pub mod verify;
pub mod vertex;

pub use error::{EngineError, Result};

/// Initialize the global thread pool from the QQ_ENGINE_THREADS environment
/// variable. Safe to call more than once; later calls are no-ops.
pub fn init_threads() {
    if let Ok(v) = std::env::var("QQ_ENGINE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}
