//! Explicit bounds |f(x)| ≤ A·x^{θ−1}/logʲx + remainders, conversions between them
//! and a ledger recording how each one was obtained.

mod certify;
mod form;
mod ledger;
mod ops;
mod plan;
mod pos;

pub use certify::{certify_le, highest_end, lowest_start, Check, Term};
pub use form::{BoundForm, Provenance, Remainder, SqrtModel, Target};
pub use ledger::{Entry, Ledger, Role};
pub use ops::{
    abs_m_integral_model, convert_via_g1, convert_via_g1check, convert_via_h1, convert_via_h1_localized,
    convert_via_h_envelope, descend_at, form_integral, lower_rank, majorant_descent, merge, power_integral,
    sqrt_range_lowering, triangle_m, weaken, ConvertParams, EnvelopeOptions, Lowering,
};
pub use plan::{
    bootstrap, run_plan, Context, ConvertStep, Num, Piece, Plan, RemainderSpec, Step, CHAINS, MASTER_PLAN,
    MAX_VERIFY_RANK,
};
pub use pos::{fmt_num, fmt_sig, Pos, Rounded, Rounding};
