// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod certify;
pub mod cylinder;
pub mod error;
pub mod geometry;
pub mod optimize;
pub mod plans;
pub mod quad;
pub mod reproduce;
pub mod roots;
pub mod special;
pub mod yamabe;

pub use error::{Error, Result};
