//! Complex special functions used by the solution formulas.

pub(crate) mod continuation;
mod gamma;
mod hyp1f1;
mod hyp2f1;
mod power;

pub use gamma::{gamma, gamma_ratio, log_gamma, reflection_product, rgamma};
pub use hyp1f1::kummer_1f1;
pub use hyp2f1::{gauss_2f1, gauss_2f1_via, select_route, Route, SERIES_LIMIT};
pub use power::principal_power;
