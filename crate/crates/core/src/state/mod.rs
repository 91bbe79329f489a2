//! Dense pure states and density operators on qudit registers.

mod density;
pub mod io;
mod layout;
mod pure;
mod spectrum;

pub use density::DensityOperator;
pub use io::StateData;
pub use layout::RegisterLayout;
pub use pure::PureState;
pub use spectrum::Spectrum;

pub(crate) use spectrum::check_power;
#[cfg(test)]
pub(crate) use pure::unitarity_deviation as pure_unitarity_deviation;
