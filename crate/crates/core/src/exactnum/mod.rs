//! Exact numbers: the bit-level number classes with their flags, and a
//! field ℚ(i, √2) (times an optional √r) for arithmetic.
//!
//! ```
//! use succinct::exactnum::{encode, ClassDescriptor, ExactValue, Family};
//!
//! let v = ExactValue::complex("-6/3".parse().unwrap(), "2/-7".parse().unwrap());
//! let cls = ClassDescriptor::new(Family::C, 3);
//! let bits = encode(&v, &cls).unwrap();
//! assert_eq!(bits.grouped(&cls.layout()), "1 0 110 011 0 1 010 111");
//! ```

mod class;
mod codec;
mod field;
mod rational;
mod value;

use std::str::FromStr;

pub use class::{parse_flags, BitString, ClassDescriptor, Family, Flag};
pub use codec::{decode, encode, fit_class, present, ratio};
pub use field::{sign_sqrt2, Algebraic, Gauss, Zeta8, Q};
pub use rational::{rational_sqrt, SignedRational};
pub use value::{pow2, rat, ExactValue, Literal};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("value does not fit in {width} bits")]
    OutOfRange { width: usize },
    #[error("value carries a tag the class does not have")]
    FlagMismatch,
    #[error("expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("square-root multipliers do not combine")]
    IncompatibleRadicals,
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("not representable in {0}")]
    NotRepresentable(String),
    #[error("ratio not defined for classes with square-root flags")]
    UnsupportedRatio,
    #[error("bad class: {0}")]
    BadClass(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(op: ArithOp, x: &ExactValue, y: &ExactValue) -> Result<ExactValue, ExactError> {
    match op {
        ArithOp::Add => x.add(y),
        ArithOp::Sub => x.sub(y),
        ArithOp::Mul => x.mul(y),
        ArithOp::Div => x.div(y),
    }
}

impl FromStr for ExactValue {
    type Err = ExactError;

    /// `re` or `re,im`, each a possibly unreduced signed rational.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (re, im) = match s.split_once(',') {
            Some((a, b)) => (a.parse()?, b.parse()?),
            None => (s.parse()?, SignedRational::zero()),
        };
        Ok(ExactValue::complex(re, im))
    }
}
