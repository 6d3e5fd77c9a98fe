//! Double-exponential quadrature, Bessel moments and principal-value
//! Hilbert transforms.

pub mod engine;
pub mod hilbert;
mod moment;

use rug::Float;

use crate::bounded::BoundedReal;
use crate::error::Result;
use crate::precision::PrecisionContext;

pub use engine::{Node, Outcome, QuadratureOptions, Range};
pub use hilbert::{hilbert_image, hilbert_pv, hilbert_pv_with_min, pv_function_value, PvFunction, PvQuery};
pub(crate) use moment::MomentKey;
pub use moment::{
    fused_moment_sum, integrate_combination, moment, moment_with_split, tail_bound,
    weighted_moment_sum, weighted_moment_sum_detailed, Integration, MomentResult, MomentSpec,
    DEFAULT_SPLIT,
};

/// Integral of `f` over `[lo, hi]` (tanh-sinh) or `[lo, inf)` when `hi` is
/// `None` (exp-sinh). Endpoint singularities of logarithmic type at `lo` are
/// fine as long as `f` reads the abscissa from [`Node::from_lo`].
pub fn tanh_sinh<F>(f: F, lo: &Float, hi: Option<&Float>, ctx: &PrecisionContext) -> Result<BoundedReal>
where
    F: FnMut(&Node) -> Result<BoundedReal>,
{
    let range = match hi {
        Some(hi) => Range::finite(lo.clone(), hi.clone()),
        None => Range::half_line(lo.clone()),
    };
    Ok(engine::integrate(&range, ctx, &QuadratureOptions::from_context(ctx), f)?.value)
}
