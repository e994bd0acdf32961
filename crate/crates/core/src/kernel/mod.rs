//! Exact scalar arithmetic (ℚ(p, γ, μ₁…μ₄)) and the tensor-operator calculus
//! on V^{⊗k} that every other module builds on.

pub mod poly;
pub mod scalar;
pub mod tensor;

pub use poly::{var_mu, Exp, Poly, NVARS, VAR_G, VAR_P};
pub use scalar::{parse_scalar, qbinomial, qfact, qint, qpow, ParseError, Scalar};
pub use tensor::{rank_of, solve_multi, TensorError, TensorOp};
