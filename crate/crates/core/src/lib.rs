pub mod arith;
pub mod cli;
pub mod error;
pub mod field;
pub mod engine;
pub mod galois;
pub mod gamma;
pub mod hecke;
pub mod linalg;
pub mod llc;
pub mod padic;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/padic.md")]
    mod padic {}
    #[doc = include_str!("../../../book/src/galois.md")]
    mod galois {}
    #[doc = include_str!("../../../book/src/zigzag.md")]
    mod zigzag {}
    #[doc = include_str!("../../../book/src/filtration.md")]
    mod filtration {}
    #[doc = include_str!("../../../book/src/llc.md")]
    mod llc {}
    #[doc = include_str!("../../../book/src/hecke.md")]
    mod hecke {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
