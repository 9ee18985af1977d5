//! Exact computational algebra for the quantum superalgebra `U_q[osp(1|2n)]`.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcoeff`]: exact scalars in `Q(sqrt 2)[s, 1/s]` with `s = q^(1/2)`, the fractions
//!   with denominators `(s + 1/s)` and `(s - 1/s)`, q-integers and evaluation at
//!   `q = exp(i pi / k)`.
//! - [`ospclassic`]: the `(2n+1) x (2n+1)` matrix realization of `osp(1|2n)` and the
//!   classical para-Bose identities.
//! - [`walgebra`]: the deformed Weyl algebra `W_q(n)`: word rewriting, canonical
//!   multiplication and the symbolic Fock module.
//! - [`uqosp`]: pre-oscillator and Chevalley constructions, the realization map into
//!   `W_q(n)` and the catalog of relations.
//! - [`fockrep`]: sparse complex matrices of the Fock representation at a root of
//!   unity, relation checks and the `U_q[gl(n)]` decomposition.
//! - [`report`]: the shared JSON report schema.

pub mod error;
pub mod fockrep;
pub mod ospclassic;
pub mod qcoeff;
pub mod report;
pub mod uqosp;
pub mod walgebra;

pub use error::{Error, Result};

pub use qcoeff::{QCoeff, QFrac, QSqrt2};

pub use fockrep::{FockBasisIndex, GlDecomposition, OpLabel, RepMatrix};
pub use uqosp::{GenExpr, RelationInstance};
pub use walgebra::{FockVector, Letter, WeylElement, WeylMonomial};

/// Sign of a creation (`+`) or annihilation (`-`) operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn from_value(v: i32) -> Sign {
        if v < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}
