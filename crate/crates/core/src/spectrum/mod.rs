//! Spectrum of the chirped preparation source.

mod bound;
mod chirp;
pub mod fresnel;

pub use bound::{region_bound, region_bound_offset, spectrum_bound, Coefficients, Region, SpectrumRegionBound};
pub use chirp::{
    chirp_component, chirp_spectrum, spectrum_sweep, windowed_cosine_spectrum, write_spectrum_csv, ChirpSource,
    SpectrumSample,
};
pub use fresnel::fresnel;
