//! Reproducible random streams, core samplers and special functions.
//!
//! A stream is owned by one thread at a time; parallel work distributes
//! distinct stream indices instead of sharing a stream.

mod sample;
mod special;
mod stream;

pub use sample::{sample_beta, sample_exp1, sample_gamma, sample_normal};
pub(crate) use sample::{beta_unchecked, gamma_unit};
pub use special::{
    gamma_fn, kolmogorov_sf, ln_gamma, reg_inc_beta, reg_inc_gamma, reg_inc_gamma_upper,
};
pub use stream::{derive_seed, make_stream, RngStream};
