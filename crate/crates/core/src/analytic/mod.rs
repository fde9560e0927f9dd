//! Complex jets, power series, expressions and the built-in map catalog.

mod catalog;
mod expr;
mod function;
mod jet;
mod series;

pub use catalog::{catalog_lookup, CatalogEntry, CATALOG};
pub use expr::{parse_complex, parse_expr, Expr};
pub use function::{series_from_expr, AnalyticFunction};
pub use jet::Jet;
pub use series::{PowerSeries, DEFAULT_ORDER, DEFAULT_RADIUS};
