//! Numerical checks of the decay and sublevel exponents predicted by the height.

pub mod decay;
pub mod fit;
pub mod phase;
pub mod quadrature;
pub mod smallparam;
pub mod sublevel;

pub use decay::{oscillatory_decay_fit, DecayFit, DecayOptions};
pub use fit::ExponentFit;
pub use quadrature::{Bump, QuadOptions};
pub use smallparam::{small_param_bound_check, SmallParamKind, SmallParamOptions, SmallParamReport};
pub use sublevel::{eps_grid, flat_preset_fit, sublevel_exponent_fit, SublevelFit, SublevelOptions};
