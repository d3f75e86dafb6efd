pub mod charspec;
pub mod error;
pub mod heckeforms;
pub mod iwasawa;
pub mod measures;
pub mod padic;
pub mod torus;
pub mod tree;

pub use error::{Error, Result};

/// Chapters of the guide, compiled so their examples run as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/padic.md")]
    pub struct Padic;
    #[doc = include_str!("../../../book/src/tree.md")]
    pub struct Tree;
    #[doc = include_str!("../../../book/src/torus.md")]
    pub struct Torus;
    #[doc = include_str!("../../../book/src/forms.md")]
    pub struct Forms;
    #[doc = include_str!("../../../book/src/iwasawa.md")]
    pub struct Iwasawa;
    #[doc = include_str!("../../../book/src/measures.md")]
    pub struct Measures;
    #[doc = include_str!("../../../book/src/characters.md")]
    pub struct Characters;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
