//! Reproducible random generation: Poisson, binomial and multinomial variates
//! and the coupling of a multinomial sample with its Poissonized version.

mod binomial;
mod coupling;
mod multinomial;
mod poisson;
mod rng;

pub use binomial::sample_binomial;
pub use coupling::{coupling_l1_bound, sample_coupled, CouplingReport, CountsPair};
pub use multinomial::sample_multinomial;
pub use poisson::sample_poisson;
pub use rng::SeededRng;
