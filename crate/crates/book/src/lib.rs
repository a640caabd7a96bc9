//! The guide in `book/`, compiled so that its code blocks run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/rule110.md")]
pub mod rule110 {}
#[doc = include_str!("../../../book/src/tag-systems.md")]
pub mod tag_systems {}
#[doc = include_str!("../../../book/src/blocks.md")]
pub mod blocks {}
#[doc = include_str!("../../../book/src/checking.md")]
pub mod checking {}
#[doc = include_str!("../../../book/src/emulators.md")]
pub mod emulators {}
#[doc = include_str!("../../../book/src/nearywoods.md")]
pub mod nearywoods {}
