//! Binary linear codes from two-to-one functions over GF(2^n).
//!
//! Two generic constructions are supported for a function f with f(0) = 0:
//!
//! * `C_f`, length 2^n - 1, codewords `(tr(a x + b f(x)))` over nonzero x,
//!   one per pair (a, b);
//! * `C_D(f)`, length |D(f)|, codewords `(tr(b d))` over the nonzero image
//!   D(f) of f, one per b.
//!
//! Weight distributions come from Walsh spectra ([`walsh`]) and are checked
//! against literal codeword enumeration ([`codes`]). The [`catalog`] module
//! holds the known two-to-one families with their closed-form weight tables.

pub mod catalog;
pub mod codes;
pub mod error;
pub mod fexpr;
pub mod gf2n;
mod gf2mat;
pub mod lowfactor;
pub mod par;
pub mod suite;
pub mod walsh;

pub use error::{Error, Result};
pub use fexpr::FuncExpr;
pub use gf2n::{FieldElt, FieldSpec};
pub use par::Exec;

/// Work caps, expressed as the largest field degree n each computation may
/// run at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Full (a, b) Walsh grid: 2^n transforms of length 2^n.
    pub full: u32,
    /// The b-slice W_f(0, b).
    pub slice: u32,
    /// Literal enumeration of C_f codewords (2^(3n) work).
    pub brute_cf: u32,
    /// Literal enumeration of C_D(f) codewords (2^(2n) work).
    pub brute_cdf: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            full: 16,
            slice: 22,
            brute_cf: 9,
            brute_cdf: 13,
        }
    }
}

/// Execution context threaded through the heavy computations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Ctx {
    pub exec: Exec,
    pub caps: Caps,
}

impl Ctx {
    pub fn sequential() -> Ctx {
        Ctx {
            exec: Exec::Sequential,
            ..Ctx::default()
        }
    }
}

pub(crate) fn check_cap(n: u32, cap: u32) -> Result<()> {
    if n > cap {
        Err(Error::SizeCapExceeded { n, cap })
    } else {
        Ok(())
    }
}
