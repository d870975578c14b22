//! Deterministic JSON and CSV renderings of engine objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::FusionTable;
use crate::root_system::{CartanType, RootDatum, Weight};

/// Bumped whenever the fusion-table layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumJson {
    pub family: String,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates.
    pub positive_roots: Vec<Vec<i64>>,
    /// `B(ω_i, ω_j)` as `"p/q"` strings.
    #[serde(rename = "gram_B")]
    pub gram_b: Vec<Vec<String>>,
    pub dual_coxeter: i64,
    pub highest_root: Vec<i64>,
    pub rho: Vec<i64>,
    pub comarks: Vec<i64>,
    pub simple_root_numbering: String,
}

impl RootDatumJson {
    pub fn from_datum(datum: &RootDatum) -> Self {
        let t = datum.cartan_type();
        RootDatumJson {
            family: t.family().to_string(),
            rank: t.rank(),
            cartan_matrix: datum.cartan_matrix().to_vec(),
            positive_roots: datum.positive_roots().to_vec(),
            gram_b: datum
                .gram()
                .iter()
                .map(|row| row.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect())
                .collect(),
            dual_coxeter: datum.dual_coxeter(),
            highest_root: datum.highest_root_weight().labels().to_vec(),
            rho: datum.rho().labels().to_vec(),
            comarks: datum.comarks().to_vec(),
            simple_root_numbering: "bourbaki".into(),
        }
    }
}

/// Summary printed by `describe`.
#[derive(Clone, Debug, Serialize)]
pub struct DescribeReport {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    pub positive_root_count: usize,
    pub weyl_group_order: String,
    pub dual_coxeter: i64,
    /// Highest root as Dynkin labels.
    pub highest_root: Weight,
    pub highest_root_coordinates: Vec<i64>,
    pub rho: Weight,
    pub root_datum: RootDatumJson,
}

impl DescribeReport {
    pub fn new(datum: &RootDatum) -> Self {
        DescribeReport {
            cartan_type: datum.cartan_type().to_string(),
            rank: datum.rank(),
            positive_root_count: datum.positive_roots().len(),
            weyl_group_order: datum.weyl_order().to_string(),
            dual_coxeter: datum.dual_coxeter(),
            highest_root: datum.highest_root_weight().clone(),
            highest_root_coordinates: datum.highest_root().to_vec(),
            rho: datum.rho().clone(),
            root_datum: RootDatumJson::from_datum(datum),
        }
    }

    pub fn render_text(&self) -> String {
        format!(
            "type: {}\nrank: {}\npositive roots: {}\nWeyl group order: {}\ndual Coxeter number: {}\nhighest root: {} = {:?} in simple roots\nrho: {}\n",
            self.cartan_type,
            self.rank,
            self.positive_root_count,
            self.weyl_group_order,
            self.dual_coxeter,
            self.highest_root,
            self.highest_root_coordinates,
            self.rho
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub n: usize,
    pub c: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub l: usize,
    pub m: usize,
    pub entries: Vec<EntryJson>,
}

/// Wire form of a fusion table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionTableJson {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    pub level: u32,
    pub weights: Vec<Vec<i64>>,
    pub coeffs: Vec<PairJson>,
}

impl FusionTableJson {
    pub fn from_table(table: &FusionTable) -> Self {
        FusionTableJson {
            cartan_type: table.cartan_type().to_string(),
            rank: table.cartan_type().rank(),
            level: table.level(),
            weights: table.weights().iter().map(|w| w.labels().to_vec()).collect(),
            coeffs: table
                .entries()
                .iter()
                .map(|(&(l, m), row)| PairJson {
                    l,
                    m,
                    entries: row.iter().map(|(&n, &c)| EntryJson { n, c }).collect(),
                })
                .collect(),
        }
    }

    pub fn into_table(self) -> Result<FusionTable> {
        let t: CartanType = self.cartan_type.parse()?;
        if t.rank() != self.rank {
            return Err(Error::Input(format!(
                "fusion table type {t} disagrees with rank {}",
                self.rank
            )));
        }
        let weights: Vec<Weight> = self.weights.into_iter().map(Weight::new).collect();
        if weights.iter().any(|w| w.rank() != self.rank) {
            return Err(Error::Input("fusion table weight of wrong length".into()));
        }
        let mut coeffs = BTreeMap::new();
        for p in self.coeffs {
            let row: BTreeMap<usize, u64> = p.entries.into_iter().map(|e| (e.n, e.c)).collect();
            if coeffs.insert((p.l, p.m), row).is_some() {
                return Err(Error::Input(format!("duplicate fusion pair ({}, {})", p.l, p.m)));
            }
        }
        FusionTable::from_parts(t, self.level, weights, coeffs)
    }
}

pub fn fusion_table_to_json(table: &FusionTable) -> String {
    let mut s = serde_json::to_string_pretty(&FusionTableJson::from_table(table)).expect("serializable");
    s.push('\n');
    s
}

pub fn fusion_table_from_json(text: &str) -> Result<FusionTable> {
    let raw: FusionTableJson =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("fusion table JSON: {e}")))?;
    raw.into_table()
}

/// One row per nonzero coefficient: `lambda,mu,nu,coeff`.
pub fn fusion_table_to_csv(table: &FusionTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record(["lambda", "mu", "nu", "coeff"]).map_err(io)?;
    let ws = table.weights();
    for (&(l, m), row) in table.entries() {
        for (&n, &c) in row {
            w.write_record([
                ws[l].to_string(),
                ws[m].to_string(),
                ws[n].to_string(),
                c.to_string(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// Plain-text table, one product per line.
pub fn fusion_table_to_text(table: &FusionTable) -> String {
    let ws = table.weights();
    let mut out = format!(
        "{} level {}: {} weights\n",
        table.cartan_type(),
        table.level(),
        ws.len()
    );
    for (&(l, m), row) in table.entries() {
        let terms: Vec<String> = row
            .iter()
            .map(|(&n, &c)| if c == 1 { ws[n].to_string() } else { format!("{c}{}", ws[n]) })
            .collect();
        out.push_str(&format!("{} * {} = {}\n", ws[l], ws[m], terms.join(" + ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_datum_fields() {
        let d = RootDatum::new("A1".parse().unwrap());
        let v = serde_json::to_value(RootDatumJson::from_datum(&d)).unwrap();
        assert_eq!(v["family"], "A");
        assert_eq!(v["gram_B"][0][0], "1/2");
        assert_eq!(v["dual_coxeter"], 2);
        assert_eq!(v["simple_root_numbering"], "bourbaki");
    }

    #[test]
    fn table_round_trip() {
        let d = RootDatum::new("A2".parse().unwrap());
        let t = FusionTable::compute(&d, 2).unwrap();
        let s = fusion_table_to_json(&t);
        let back = fusion_table_from_json(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(fusion_table_to_json(&back), s);
    }

    #[test]
    fn table_shapes() {
        let d = RootDatum::new("A1".parse().unwrap());
        let t = FusionTable::compute(&d, 2).unwrap();
        assert_eq!(FusionTableJson::from_table(&t).coeffs.len(), 6);
        let t0 = FusionTable::compute(&d, 0).unwrap();
        let j = FusionTableJson::from_table(&t0);
        assert_eq!(j.coeffs, vec![PairJson { l: 0, m: 0, entries: vec![EntryJson { n: 0, c: 1 }] }]);
        let csv = fusion_table_to_csv(&t).unwrap();
        assert!(csv.starts_with("lambda,mu,nu,coeff\n"));
        assert!(csv.contains("(1),(1),(2),1\n"));
        assert!(fusion_table_to_text(&t).contains("(1) * (1) = (0) + (2)"));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(fusion_table_from_json("{").is_err());
        let bad = r#"{"type":"A1","rank":2,"level":1,"weights":[],"coeffs":[]}"#;
        assert!(fusion_table_from_json(bad).is_err());
        let bad = r#"{"type":"A1","rank":1,"level":1,"weights":[[0]],"coeffs":[{"l":0,"m":3,"entries":[]}]}"#;
        assert!(fusion_table_from_json(bad).is_err());
    }
}
