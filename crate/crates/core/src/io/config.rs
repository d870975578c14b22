//! TOML configuration for custom involution data.
//!
//! ```toml
//! name = "swap"
//! permutation = [2, 1]          # 1-based image of each fundamental index
//!
//! [epsilon]
//! coweight = [1, 1]             # ε(λ) = (−1)^<λ, x₀>
//!
//! # or, per generator of the σ₊-fixed sublattice:
//! # [epsilon.table]
//! # "1+2" = -1
//! ```
//!
//! Every rejection names the line of the offending key.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::real_structure::{generator_key, parse_generator_key, validate, EpsilonSpec, RealInvolutionDatum};
use crate::root_system::RootDatum;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<Spanned<String>>,
    permutation: Spanned<Vec<i64>>,
    epsilon: Spanned<RawEpsilon>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEpsilon {
    coweight: Option<Spanned<Vec<i64>>>,
    table: Option<Spanned<BTreeMap<String, Spanned<i64>>>>,
}

fn line_of(text: &str, span: &Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

struct Located<'a> {
    source: &'a str,
    text: &'a str,
}

impl Located<'_> {
    fn err(&self, span: &Range<usize>, msg: impl std::fmt::Display) -> String {
        format!("{}:{}: {msg}", self.source, line_of(self.text, span))
    }
}

/// Parses and validates an involution config for `datum`, checking level
/// preservation up to `k_max`. `source` names the file in diagnostics.
pub fn parse_involution_config(
    text: &str,
    source: &str,
    datum: &RootDatum,
    k_max: u32,
) -> Result<RealInvolutionDatum> {
    let loc = Located { source, text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, &s)).unwrap_or(1);
        Error::Input(format!("{source}:{line}: {}", e.message().trim_end()))
    })?;
    let n = datum.rank();

    let perm_span = raw.permutation.span();
    let perm = raw.permutation.into_inner();
    if perm.len() != n {
        return Err(Error::Input(loc.err(
            &perm_span,
            format!("permutation has {} entries but {} has rank {n}", perm.len(), datum.cartan_type()),
        )));
    }
    let mut sigma = Vec::with_capacity(n);
    for &p in &perm {
        if p < 1 || p as usize > n {
            return Err(Error::Input(loc.err(
                &perm_span,
                format!("permutation entry {p} is outside 1..{n}"),
            )));
        }
        sigma.push(p as usize - 1);
    }

    let eps_span = raw.epsilon.span();
    let eps = raw.epsilon.into_inner();
    let epsilon = match (eps.coweight, eps.table) {
        (Some(c), None) => {
            let span = c.span();
            let x = c.into_inner();
            if x.len() != n {
                return Err(Error::Input(loc.err(
                    &span,
                    format!("coweight has {} entries, expected {n}", x.len()),
                )));
            }
            EpsilonSpec::Coweight(x)
        }
        (None, Some(t)) => {
            let mut table = BTreeMap::new();
            for (key, v) in t.into_inner() {
                let span = v.span();
                let idx = parse_generator_key(&key).map_err(|e| Error::Input(loc.err(&span, e)))?;
                if idx.iter().any(|&i| i >= n) {
                    return Err(Error::Input(loc.err(&span, format!("generator {key} out of range"))));
                }
                let val = *v.get_ref();
                if val != 1 && val != -1 {
                    return Err(Error::Input(loc.err(&span, format!("ε({key}) = {val} is not ±1"))));
                }
                table.insert(idx, val as i8);
            }
            EpsilonSpec::Table(table)
        }
        _ => {
            return Err(Error::Input(loc.err(
                &eps_span,
                "epsilon needs exactly one of `coweight` or `table`",
            )))
        }
    };

    let name = raw.name.map(|s| s.into_inner()).unwrap_or_else(|| "custom".into());
    let inv = RealInvolutionDatum::new(name, sigma, epsilon)
        .map_err(|e| Error::Input(loc.err(&perm_span, e)))?;

    let report = validate(&inv, datum, k_max);
    if let Some(c) = report.failures().next() {
        let span = if c.name.starts_with("epsilon") { &eps_span } else { &perm_span };
        return Err(Error::Validation(loc.err(span, format!("{}: {}", c.name, c.detail))));
    }
    Ok(inv)
}

/// Renders involution data back into the config format.
pub fn involution_to_toml(inv: &RealInvolutionDatum) -> String {
    let perm: Vec<String> = inv.sigma_plus().iter().map(|i| (i + 1).to_string()).collect();
    let mut out = format!(
        "name = {:?}\npermutation = [{}]\n\n",
        inv.name(),
        perm.join(", ")
    );
    match inv.epsilon_spec() {
        EpsilonSpec::Coweight(x) => {
            let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("[epsilon]\ncoweight = [{}]\n", xs.join(", ")));
        }
        EpsilonSpec::Table(t) => {
            out.push_str("[epsilon.table]\n");
            for (k, v) in t {
                out.push_str(&format!("\"{}\" = {v}\n", generator_key(k)));
            }
        }
    }
    out
}
