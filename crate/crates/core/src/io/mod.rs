//! Serialization, caching and configuration ingestion.

pub mod cache;
pub mod config;
pub mod export;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{FusionTable, VirtualCharacter};
use crate::real_structure::{generator_key, EpsilonSpec, RealInvolutionDatum, TypeDecomposition};
use crate::real_verlinde::{
    builtin_ik_generators, enumerate_S, real_ideal_generators, Monomial, RKRElement, RealBasisElement,
    RealIdealGenerator, RealVerlinde,
};
use crate::root_system::{RootDatum, Weight};

pub use cache::{CacheEntry, FusionCache, Lookup, CACHE_DIR_ENV};
pub use config::{involution_to_toml, parse_involution_config};
pub use export::{
    fusion_table_from_json, fusion_table_to_csv, fusion_table_to_json, fusion_table_to_text, DescribeReport,
    FusionTableJson, RootDatumJson, SCHEMA_VERSION,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonJson {
    Coweight(Vec<i64>),
    Table(BTreeMap<String, i8>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionJson {
    pub name: String,
    /// 1-based.
    pub permutation: Vec<usize>,
    pub epsilon: EpsilonJson,
}

impl InvolutionJson {
    pub fn new(inv: &RealInvolutionDatum) -> Self {
        InvolutionJson {
            name: inv.name().to_string(),
            permutation: inv.sigma_plus().iter().map(|i| i + 1).collect(),
            epsilon: match inv.epsilon_spec() {
                EpsilonSpec::Coweight(x) => EpsilonJson::Coweight(x.clone()),
                EpsilonSpec::Table(t) => {
                    EpsilonJson::Table(t.iter().map(|(k, v)| (generator_key(k), *v)).collect())
                }
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductJson {
    pub x: String,
    pub y: String,
    pub product: RKRElement,
}

/// Where the level-k ideal generators come from.
#[derive(Clone, Debug)]
pub enum IkSource {
    /// Built-in generators (type A only).
    Builtin,
    Supplied(Vec<VirtualCharacter>),
    Skip,
}

/// Everything `real` reports for one type, level and involution.
#[derive(Clone, Debug, Serialize)]
pub struct RealReport {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub level: u32,
    pub involution: InvolutionJson,
    pub decomposition: TypeDecomposition,
    pub basis: Vec<RealBasisElement>,
    pub rr_rank: usize,
    pub products: Vec<ProductJson>,
    #[serde(rename = "S")]
    pub s_set: Vec<Monomial>,
    pub ideal_generators: Option<Vec<RealIdealGenerator>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal_note: Option<String>,
}

impl RealReport {
    pub fn compute(
        datum: &RootDatum,
        inv: &RealInvolutionDatum,
        table: &FusionTable,
        ik: IkSource,
    ) -> Result<Self> {
        let k = table.level();
        crate::real_structure::ensure_valid(inv, datum, k)?;
        let rv = RealVerlinde::new(inv, table)?;
        let basis = rv.basis();
        let gens = rv.generators();
        let mut products = Vec::new();
        for (i, x) in gens.iter().enumerate() {
            for (j, y) in gens.iter().enumerate().skip(i) {
                products.push(ProductJson {
                    x: basis[i].to_string(),
                    y: basis[j].to_string(),
                    product: rv.multiply(x, y)?,
                });
            }
        }
        let (ik_gens, mut note) = match ik {
            IkSource::Builtin => match builtin_ik_generators(datum, k) {
                Ok(g) => (Some(g), None),
                Err(Error::Unsupported(msg)) => (None, Some(msg)),
                Err(e) => return Err(e),
            },
            IkSource::Supplied(g) => (Some(g), None),
            IkSource::Skip => (None, Some("ideal generators not requested".to_string())),
        };
        let ideal_generators = match ik_gens {
            Some(g) => Some(real_ideal_generators(&g, inv, datum, k)?),
            None => None,
        };
        if ideal_generators.is_some() {
            note = None;
        }
        Ok(RealReport {
            cartan_type: datum.cartan_type().to_string(),
            level: k,
            involution: InvolutionJson::new(inv),
            decomposition: rv.decomposition().clone(),
            rr_rank: basis.len(),
            basis,
            products,
            s_set: enumerate_S(datum, inv)?,
            ideal_generators,
            ideal_note: note,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let list = |ws: &[Weight]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = format!(
            "{} level {}, involution {}\n",
            self.cartan_type, self.level, self.involution.name
        );
        out.push_str(&format!("real: {}\n", list(&self.decomposition.fixed_real)));
        out.push_str(&format!("quaternionic: {}\n", list(&self.decomposition.fixed_quaternionic)));
        out.push_str(&format!("orbit pairs: {}\n", list(&self.decomposition.orbit_pairs)));
        out.push_str(&format!("RR_k rank: {}\n\nbasis:\n", self.rr_rank));
        for b in &self.basis {
            out.push_str(&format!("  {b}  degree {}\n", b.degree));
        }
        out.push_str("\nproducts:\n");
        for p in &self.products {
            out.push_str(&format!("  {} * {} = {}\n", p.x, p.y, p.product));
        }
        let s: Vec<String> = self.s_set.iter().map(|m| m.to_string()).collect();
        out.push_str(&format!("\nS = {{{}}}\n", s.join(", ")));
        match (&self.ideal_generators, &self.ideal_note) {
            (Some(g), _) => {
                out.push_str("ideal generators:\n");
                for x in g {
                    out.push_str(&format!("  {x}\n"));
                }
            }
            (None, Some(n)) => out.push_str(&format!("ideal generators: {n}\n")),
            (None, None) => {}
        }
        out
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    weight: Vec<i64>,
    coeff: i64,
}

/// Parses level-k ideal generators given as a JSON list of virtual
/// characters, each a list of `{"weight": [...], "coeff": n}` terms.
pub fn parse_ik_generators(text: &str, datum: &RootDatum) -> Result<Vec<VirtualCharacter>> {
    let raw: Vec<Vec<TermJson>> =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("ideal generators: {e}")))?;
    let mut out = Vec::new();
    for terms in raw {
        let mut v = VirtualCharacter::new();
        for t in terms {
            let w = Weight::new(t.weight);
            datum.check_rank(&w)?;
            if !w.is_dominant() {
                return Err(Error::NotDominant(w.to_string()));
            }
            v.add_term(w, t.coeff);
        }
        out.push(v);
    }
    Ok(out)
}
