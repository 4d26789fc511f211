//! Scalar types shared by every evaluator: exact roots of unity, disk
//! parameters, error-tracked values and evaluation settings.

mod combinat;
mod config;
mod counter;
mod param;
mod root;
mod sum;
mod value;

pub use combinat::{bernoulli_even, binomial, factorial, neg_polylog, stirling2_table};
pub use config::{AccelMode, EvalConfig};
pub use counter::{record_terms, terms_summed};
pub use param::{param_inverse, param_product, Twist, UnitParam, DISK_TOL};
pub(crate) use root::unit_point;
pub use root::lcm;
pub use root::{root_of_unity, RootOfUnity};
pub use sum::CompensatedSum;
pub use value::ValueWithError;
