//! Built-in sense-preserving maps, all valid on `|z| <= 0.7`.

use crate::analytic::{parse_expr, series_from_expr, AnalyticFunction, DEFAULT_ORDER};
use crate::{Error, Result};

pub struct CatalogEntry {
    pub name: &'static str,
    pub h: &'static str,
    /// Expression for `g`, or for `g'` when `g_from_derivative` is set.
    pub g: &'static str,
    pub g_from_derivative: bool,
    pub description: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "identity",
        h: "z",
        g: "0",
        g_from_derivative: false,
        description: "f = z, dilatation 0",
    },
    CatalogEntry {
        name: "shear",
        h: "z",
        g: "z^2/2",
        g_from_derivative: false,
        description: "dilatation z, Jacobian 1-|z|^2",
    },
    CatalogEntry {
        name: "rotor",
        h: "z",
        g: "0.5*z",
        g_from_derivative: false,
        description: "constant dilatation 0.5",
    },
    CatalogEntry {
        name: "expmap",
        h: "exp(z)-1",
        g: "0.3*z",
        g_from_derivative: false,
        description: "dilatation 0.3 exp(-z)",
    },
    CatalogEntry {
        name: "blaschke-dil",
        h: "z",
        g: "0.9*(z+0.3)/(1+0.3*z)",
        g_from_derivative: true,
        description: "dilatation 0.9(z+0.3)/(1+0.3z), g as a series",
    },
    CatalogEntry {
        name: "exp-dil",
        h: "exp(z)-1",
        g: "0.9*(z-1)*exp(z)+0.9",
        g_from_derivative: false,
        description: "dilatation 0.9z with h = exp(z)-1",
    },
    CatalogEntry {
        name: "cubic",
        h: "z",
        g: "z^2/2+z^4/40",
        g_from_derivative: false,
        description: "dilatation z+z^3/10",
    },
    CatalogEntry {
        name: "square",
        h: "z",
        g: "0.3*z^3",
        g_from_derivative: false,
        description: "dilatation 0.9z^2, critical point at 0",
    },
    CatalogEntry {
        name: "exp-rotor",
        h: "exp(z)-1",
        g: "-0.4*i*(exp(z)-1)",
        g_from_derivative: false,
        description: "constant dilatation -0.4i with h = exp(z)-1",
    },
];

/// Series-backed catalog functions are accurate well past the default radius.
const CATALOG_SERIES_RADIUS: f64 = 0.9;

pub fn catalog_lookup(name: &str) -> Result<(AnalyticFunction, AnalyticFunction)> {
    let entry = CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCatalogEntry(name.to_string()))?;
    let h = AnalyticFunction::parse(entry.h)?;
    let g = if entry.g_from_derivative {
        let dg = series_from_expr(&parse_expr(entry.g)?, DEFAULT_ORDER)?;
        AnalyticFunction::Series(dg.antiderivative().with_radius(CATALOG_SERIES_RADIUS))
    } else {
        AnalyticFunction::parse(entry.g)?
    };
    Ok((h, g))
}
