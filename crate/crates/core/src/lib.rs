// SPDX-License-Identifier: Apache-2.0
pub mod automata;
pub mod classify;
pub mod commutative;
pub mod error;
pub mod generators;
pub mod ine;
pub mod ponfa;
pub mod random;
pub mod unary;

pub use error::{Error, Result};
pub use unary::{Natural, Progression, SemilinearSet};

pub type Semilinear64 = SemilinearSet<u64>;
pub type Semilinear32 = SemilinearSet<u32>;
