//! Piecewise Gauss–Kronrod quadrature, Mellin brackets and step-function kernel integrals.

mod gauss;
mod kernel;
mod mellin;

pub use gauss::{
    adaptive_panel, gk15, integrate_panels, integrate_piecewise, integrate_piecewise_detailed, panels, PanelResult,
    Quadrature, MAX_PANELS,
};
pub use kernel::{
    identity_kernel_integral, kernel_breakpoints, kernel_integral, KernelForm, KernelIntegral, KernelWeight, KERNEL_TOL,
};
pub use mellin::{mellin_numeric, MellinBracket, TailEnvelope, MAX_FINITE_PART};
