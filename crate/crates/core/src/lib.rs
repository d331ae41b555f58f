pub mod basis;
pub mod circuit;
pub mod clockham;
pub mod exactnum;
pub mod fixtures;
pub mod ham;
pub mod oracle;
pub mod qstate;
pub mod verify;
pub mod xform;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/numbers.md")]
    mod numbers {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/clock.md")]
    mod clock {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/verifier.md")]
    mod verifier {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
