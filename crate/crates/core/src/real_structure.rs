//! Involution data `(σ₊, ε)` on the weight lattice and the resulting
//! real / quaternionic / complex type decomposition of level-k weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::diagnostics::Report;
use crate::error::{Error, Result};
use crate::fusion::{level_weights, LevelWeights};
use crate::root_system::{Family, RootDatum, Weight};

/// The built-in involution data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `σ_G = id`: `σ₊ = −w₀` and `ε` is the Frobenius–Schur indicator.
    TrivialInvolution,
    /// `SU(2n)` with `σ₊ = id` and `ε(ω_i) = (−1)^i`.
    SuEvenQuaternionic,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::TrivialInvolution, Preset::SuEvenQuaternionic];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::TrivialInvolution => "trivial_involution",
            Preset::SuEvenQuaternionic => "su_even_quaternionic",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial_involution" | "trivial" => Ok(Preset::TrivialInvolution),
            "su_even_quaternionic" => Ok(Preset::SuEvenQuaternionic),
            _ => Err(Error::Input(format!(
                "unknown preset '{s}' (expected trivial_involution or su_even_quaternionic)"
            ))),
        }
    }
}

/// How `ε` is specified on the `σ₊`-fixed sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsilonSpec {
    /// `ε(λ) = (−1)^{<λ, x₀>}` for an integral coweight `x₀` in coroot
    /// coordinates.
    Coweight(Vec<i64>),
    /// Signs on the generators of the fixed sublattice, one per `σ₊`-orbit of
    /// fundamental indices. Keys are sorted 0-based index sets.
    Table(BTreeMap<Vec<usize>, i8>),
}

/// `σ₊` as a permutation of fundamental-weight indices together with `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInvolutionDatum {
    name: String,
    sigma_plus: Vec<usize>,
    epsilon: EpsilonSpec,
}

/// Renders a 0-based index set as a 1-based generator key such as `1+2`.
pub fn generator_key(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join("+")
}

/// Parses a 1-based generator key such as `1+2` into sorted 0-based indices.
pub fn parse_generator_key(key: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in key.split('+') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad generator key '{key}'")))?;
        if i == 0 {
            return Err(Error::Input(format!("generator key '{key}' is 1-based")));
        }
        out.push(i - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl RealInvolutionDatum {
    /// Builds a datum from 0-based permutation data. Only the shape is
    /// checked here; see [`validate`] for the structural conditions.
    pub fn new(name: impl Into<String>, sigma_plus: Vec<usize>, epsilon: EpsilonSpec) -> Result<Self> {
        let n = sigma_plus.len();
        let distinct: BTreeSet<usize> = sigma_plus.iter().copied().collect();
        if distinct.len() != n || sigma_plus.iter().any(|&i| i >= n) {
            return Err(Error::Input(format!(
                "permutation {:?} is not a bijection of 1..{n}",
                sigma_plus.iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
        match &epsilon {
            EpsilonSpec::Coweight(x) if x.len() != n => {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: x.len(),
                })
            }
            EpsilonSpec::Table(t) => {
                for (key, v) in t {
                    if key.is_empty() || key.iter().any(|&i| i >= n) {
                        return Err(Error::Input(format!(
                            "epsilon table key {:?} out of range",
                            key.iter().map(|i| i + 1).collect::<Vec<_>>()
                        )));
                    }
                    if *v != 1 && *v != -1 {
                        return Err(Error::Input(format!(
                            "epsilon value {v} for generator {} is not ±1",
                            generator_key(key)
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(RealInvolutionDatum {
            name: name.into(),
            sigma_plus,
            epsilon,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// 0-based image of each fundamental index.
    pub fn sigma_plus(&self) -> &[usize] {
        &self.sigma_plus
    }

    pub fn epsilon_spec(&self) -> &EpsilonSpec {
        &self.epsilon
    }

    pub fn rank(&self) -> usize {
        self.sigma_plus.len()
    }

    /// Orbits of `σ₊` on fundamental indices, each sorted, in order of their
    /// least element. Only meaningful when `σ₊` is an involution.
    pub fn index_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.rank()];
        let mut out = Vec::new();
        for i in 0..self.rank() {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut j = self.sigma_plus[i];
            while !seen[j] {
                seen[j] = true;
                orbit.push(j);
                j = self.sigma_plus[j];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Indices moved by `σ₊`.
    pub fn moved_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.sigma_plus[i] != i).collect()
    }

    pub fn is_fixed(&self, w: &Weight) -> bool {
        apply_sigma_plus(self, w) == *w
    }

    /// `ε(λ)` for a `σ₊`-fixed weight.
    pub fn epsilon(&self, w: &Weight) -> Result<i8> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: w.rank(),
            });
        }
        if !self.is_fixed(w) {
            return Err(Error::Validation(format!("ε is undefined on non-fixed weight {w}")));
        }
        match &self.epsilon {
            EpsilonSpec::Coweight(x) => {
                let p: i64 = w.labels().iter().zip(x).map(|(a, b)| a * b).sum();
                Ok(if p.rem_euclid(2) == 0 { 1 } else { -1 })
            }
            EpsilonSpec::Table(t) => {
                let mut sign = 1i8;
                for orbit in self.index_orbits() {
                    let m = w.labels()[orbit[0]];
                    if m == 0 {
                        continue;
                    }
                    let e = t.get(&orbit).ok_or_else(|| {
                        Error::Validation(format!(
                            "ε has no value on fixed generator {} needed by {w}",
                            generator_key(&orbit)
                        ))
                    })?;
                    if m.rem_euclid(2) == 1 {
                        sign *= e;
                    }
                }
                Ok(sign)
            }
        }
    }
}

/// `σ₊` acting on Dynkin labels: the label at index `i` moves to `σ₊(i)`.
pub fn apply_sigma_plus(inv: &RealInvolutionDatum, w: &Weight) -> Weight {
    let mut out = vec![0; w.rank()];
    for (i, &x) in w.labels().iter().enumerate() {
        out[inv.sigma_plus.get(i).copied().unwrap_or(i)] = x;
    }
    Weight::new(out)
}

/// `2ρ^∨`, the sum of positive coroots, in simple-coroot coordinates.
pub fn two_rho_coroot(datum: &RootDatum) -> Vec<i64> {
    let simple_len: Vec<_> = (0..datum.rank())
        .map(|j| {
            let a = Weight::new(datum.cartan_matrix()[j].clone());
            datum.inner_product(&a, &a).expect("simple root rank")
        })
        .collect();
    let mut x = vec![0i64; datum.rank()];
    for (coords, w) in datum.positive_roots().iter().zip(datum.positive_root_weights()) {
        let len = datum.inner_product(w, w).expect("root rank");
        for j in 0..datum.rank() {
            let c = &simple_len[j] / &len * num_bigint::BigInt::from(coords[j]);
            debug_assert!(c.denom().is_one());
            x[j] += c.to_integer().to_i64().expect("small coroot coordinate");
        }
    }
    x
}

/// Builds a preset involution datum for the given type.
pub fn preset(datum: &RootDatum, preset: Preset) -> Result<RealInvolutionDatum> {
    let n = datum.rank();
    match preset {
        Preset::TrivialInvolution => {
            let mut perm = vec![0; n];
            for (i, p) in perm.iter_mut().enumerate() {
                let d = datum.dual_weight(&Weight::fundamental(n, i))?;
                *p = d
                    .labels()
                    .iter()
                    .position(|&x| x == 1)
                    .ok_or_else(|| Error::Internal(format!("−w₀ω_{} is not fundamental", i + 1)))?;
            }
            RealInvolutionDatum::new(
                preset.name(),
                perm,
                EpsilonSpec::Coweight(two_rho_coroot(datum)),
            )
        }
        Preset::SuEvenQuaternionic => {
            let t = datum.cartan_type();
            if t.family() != Family::A || t.rank().is_multiple_of(2) {
                return Err(Error::Input(format!(
                    "preset {preset} needs type A with odd rank (SU(2n)), got {t}"
                )));
            }
            RealInvolutionDatum::new(
                preset.name(),
                (0..n).collect(),
                EpsilonSpec::Coweight((0..n).map(|i| ((i + 1) % 2) as i64).collect()),
            )
        }
    }
}

/// Partition of `Λ*_k` by type.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TypeDecomposition {
    pub fixed_real: Vec<Weight>,
    pub fixed_quaternionic: Vec<Weight>,
    /// Lexicographically least member of each two-element orbit.
    pub orbit_pairs: Vec<Weight>,
}

impl TypeDecomposition {
    pub fn fixed_count(&self) -> usize {
        self.fixed_real.len() + self.fixed_quaternionic.len()
    }

    /// Number of weights covered, counting each orbit twice.
    pub fn covered(&self) -> usize {
        self.fixed_count() + 2 * self.orbit_pairs.len()
    }
}

pub fn classify(inv: &RealInvolutionDatum, weights: &LevelWeights) -> Result<TypeDecomposition> {
    let mut out = TypeDecomposition::default();
    for w in weights.weights() {
        let s = apply_sigma_plus(inv, w);
        if s == *w {
            if inv.epsilon(w)? == 1 {
                out.fixed_real.push(w.clone());
            } else {
                out.fixed_quaternionic.push(w.clone());
            }
        } else {
            if !weights.contains(&s) {
                return Err(Error::Validation(format!(
                    "σ₊ maps {w} to {s}, outside the level-{} alcove",
                    weights.level()
                )));
            }
            if *w < s {
                out.orbit_pairs.push(w.clone());
            }
        }
    }
    Ok(out)
}

/// Structural checks on involution data, for levels `0..=k_max`.
pub fn validate(inv: &RealInvolutionDatum, datum: &RootDatum, k_max: u32) -> Report {
    let mut report = Report::new();
    let n = datum.rank();
    let rank_ok = inv.rank() == n;
    report.push(
        "rank",
        rank_ok,
        if rank_ok {
            String::new()
        } else {
            format!("permutation has {} entries, type {} has rank {n}", inv.rank(), datum.cartan_type())
        },
    );
    if !rank_ok {
        return report;
    }
    let sigma = inv.sigma_plus();

    let bad: Vec<usize> = (0..n).filter(|&i| sigma[sigma[i]] != i).collect();
    let involutive = bad.is_empty();
    report.push(
        "sigma_involution",
        involutive,
        if involutive {
            String::new()
        } else {
            format!("σ₊² moves index {}", bad[0] + 1)
        },
    );

    let a = datum.cartan_matrix();
    let mut cartan_bad = None;
    'outer: for i in 0..n {
        for j in 0..n {
            if a[sigma[i]][sigma[j]] != a[i][j] {
                cartan_bad = Some((i, j));
                break 'outer;
            }
        }
    }
    report.push(
        "cartan_preserved",
        cartan_bad.is_none(),
        cartan_bad
            .map(|(i, j)| format!("A[σ({0})][σ({1})] ≠ A[{0}][{1}]", i + 1, j + 1))
            .unwrap_or_default(),
    );

    let mut level_detail = String::new();
    for k in 0..=k_max {
        let lw = level_weights(datum, k);
        if let Some(w) = lw
            .weights()
            .iter()
            .find(|w| !lw.contains(&apply_sigma_plus(inv, w)))
        {
            level_detail = format!("σ₊{w} leaves the level-{k} alcove");
            break;
        }
    }
    report.push("level_sets_preserved", level_detail.is_empty(), level_detail);

    if !involutive {
        report.push("epsilon_domain", false, "requires an involutive σ₊");
        report.push("epsilon_multiplicative", false, "requires an involutive σ₊");
        report.push("epsilon_sigma_invariant", false, "requires an involutive σ₊");
        return report;
    }

    let orbits = inv.index_orbits();
    let fixed_generators: BTreeSet<Vec<usize>> = orbits.iter().cloned().collect();
    let domain_detail = match inv.epsilon_spec() {
        EpsilonSpec::Coweight(_) => String::new(),
        EpsilonSpec::Table(t) => {
            let keys: BTreeSet<Vec<usize>> = t.keys().cloned().collect();
            if let Some(extra) = keys.difference(&fixed_generators).next() {
                format!("{} is not a generator of the σ₊-fixed sublattice", generator_key(extra))
            } else if let Some(missing) = fixed_generators.difference(&keys).next() {
                format!("no value for fixed generator {}", generator_key(missing))
            } else {
                String::new()
            }
        }
    };
    let domain_ok = domain_detail.is_empty();
    report.push("epsilon_domain", domain_ok, domain_detail);

    // multiplicativity and σ₊-invariance on sums of fixed generators
    let gens: Vec<Weight> = orbits
        .iter()
        .map(|o| {
            let mut v = vec![0; n];
            for &i in o {
                v[i] = 1;
            }
            Weight::new(v)
        })
        .collect();
    let mut mult_detail = String::new();
    let mut inv_detail = String::new();
    if domain_ok {
        'gens: for g in &gens {
            for h in &gens {
                let s = g.add(h);
                match (inv.epsilon(g), inv.epsilon(h), inv.epsilon(&s)) {
                    (Ok(a), Ok(b), Ok(c)) if a * b == c => {}
                    _ => {
                        mult_detail = format!("ε({s}) ≠ ε({g})·ε({h})");
                        break 'gens;
                    }
                }
            }
        }
        for g in &gens {
            let s = apply_sigma_plus(inv, g);
            if inv.epsilon(g).ok() != inv.epsilon(&s).ok() {
                inv_detail = format!("ε(σ₊{g}) ≠ ε({g})");
                break;
            }
        }
    } else {
        mult_detail = "ε domain is incomplete".into();
        inv_detail = mult_detail.clone();
    }
    report.push("epsilon_multiplicative", mult_detail.is_empty(), mult_detail);
    report.push("epsilon_sigma_invariant", inv_detail.is_empty(), inv_detail);
    report
}

/// Runs [`validate`] and converts the first failure into an error.
pub fn ensure_valid(inv: &RealInvolutionDatum, datum: &RootDatum, k_max: u32) -> Result<()> {
    let report = validate(inv, datum, k_max);
    let first = report.failures().next().cloned();
    match first {
        None => Ok(()),
        Some(c) => Err(Error::Validation(format!("{}: {}", c.name, c.detail))),
    }
}
