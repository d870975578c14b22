//! Level-k fusion rings.
//!
//! Structure constants are computed exactly by the Kac–Walton algorithm: the
//! classical tensor product (Racah–Speiser over a weight diagram) is reduced
//! into the fundamental alcove at the shifted level `k + h^∨`, keeping track
//! of reflection signs. The S-matrix and Weyl characters evaluated at the
//! special torus points serve as independent floating-point oracles.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::root_system::{CartanType, RootDatum, Weight};

/// Default bound on affine reflection steps per reduced constituent.
pub const DEFAULT_MAX_REFLECTIONS: usize = 10_000;
/// Default bound on the number of level-k weights handled numerically.
pub const DEFAULT_MAX_ALCOVE: usize = 5_000;
/// Weyl groups larger than this are never enumerated.
pub const WEYL_ENUMERATION_LIMIT: u128 = 1_000_000;

pub const ROUNDING_TOLERANCE: f64 = 1e-6;
pub const VANISHING_TOLERANCE: f64 = 1e-8;
pub const UNITARITY_TOLERANCE: f64 = 1e-9;
pub const SINGULAR_TOLERANCE: f64 = 1e-10;

/// Resource limits, overridable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub max_reflections: usize,
    pub max_alcove: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_reflections: DEFAULT_MAX_REFLECTIONS,
            max_alcove: DEFAULT_MAX_ALCOVE,
        }
    }
}

/// The dominant weights of level at most `k`, sorted lexicographically.
#[derive(Clone, Debug)]
pub struct LevelWeights {
    cartan_type: CartanType,
    level: u32,
    weights: Vec<Weight>,
    index: HashMap<Weight, usize>,
}

impl LevelWeights {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.index.contains_key(w)
    }

    pub fn require(&self, w: &Weight) -> Result<usize> {
        self.index_of(w).ok_or_else(|| Error::OutOfLevel {
            weight: w.to_string(),
            level: self.level,
        })
    }
}

/// Enumerates `Λ*_k`: dominant `λ` with `<λ, α_max^∨> ≤ k`.
pub fn level_weights(datum: &RootDatum, k: u32) -> LevelWeights {
    let comarks = datum.comarks();
    let mut weights = Vec::new();
    let mut current = vec![0i64; datum.rank()];
    fn fill(
        pos: usize,
        budget: i64,
        comarks: &[i64],
        current: &mut Vec<i64>,
        out: &mut Vec<Weight>,
    ) {
        if pos == comarks.len() {
            out.push(Weight::new(current.clone()));
            return;
        }
        let mut x = 0;
        while x * comarks[pos] <= budget {
            current[pos] = x;
            fill(pos + 1, budget - x * comarks[pos], comarks, current, out);
            x += 1;
        }
        current[pos] = 0;
    }
    fill(0, k as i64, comarks, &mut current, &mut weights);
    weights.sort();
    let index = weights
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    LevelWeights {
        cartan_type: datum.cartan_type(),
        level: k,
        weights,
        index,
    }
}

/// Classical tensor product multiplicities of `V_λ ⊗ V_μ`.
pub fn tensor_decompose(
    datum: &RootDatum,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Weight, u64>> {
    for w in [lambda, mu] {
        datum.check_rank(w)?;
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.to_string()));
        }
    }
    // iterate over the weight diagram of the smaller factor
    let (small, large) = if datum.weyl_dimension(lambda)? <= datum.weyl_dimension(mu)? {
        (lambda, mu)
    } else {
        (mu, lambda)
    };
    let shifted = large.add(datum.rho());
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (kappa, m) in datum.weight_multiplicities(small)? {
        let (d, s) = datum.dominant_reduce_shifted(&kappa.add(&shifted))?;
        if s != 0 {
            *acc.entry(d.sub(datum.rho())).or_insert(0) += s as i64 * m as i64;
        }
    }
    collect_nonnegative(acc, "tensor product")
}

fn collect_nonnegative(acc: BTreeMap<Weight, i64>, what: &str) -> Result<BTreeMap<Weight, u64>> {
    let mut out = BTreeMap::new();
    for (w, c) in acc {
        match c {
            0 => {}
            c if c > 0 => {
                out.insert(w, c as u64);
            }
            c => {
                return Err(Error::Internal(format!(
                    "negative {what} multiplicity {c} at {w}"
                )))
            }
        }
    }
    Ok(out)
}

/// Reduces a ρ-shifted weight into the interior of the fundamental alcove at
/// shifted level `shifted_level = k + h^∨`. Returns the unshifted weight and
/// the accumulated sign, or `None` when the orbit meets a wall.
pub fn affine_reduce(
    datum: &RootDatum,
    shifted_level: i64,
    xi: &Weight,
    max_steps: usize,
) -> Result<Option<(Weight, i8)>> {
    datum.check_rank(xi)?;
    let theta = datum.highest_root_weight().labels().to_vec();
    let mut w = xi.labels().to_vec();
    let mut sign = 1i8;
    for _ in 0..=max_steps {
        if w.contains(&0) {
            return Ok(None);
        }
        let level: i64 = w.iter().zip(datum.comarks()).map(|(a, b)| a * b).sum();
        if level == shifted_level {
            return Ok(None);
        }
        if let Some(i) = w.iter().position(|&x| x < 0) {
            datum.reflect(&mut w, i);
            sign = -sign;
        } else if level > shifted_level {
            let excess = level - shifted_level;
            for (x, t) in w.iter_mut().zip(&theta) {
                *x -= excess * t;
            }
            sign = -sign;
        } else {
            return Ok(Some((Weight::new(w).sub(datum.rho()), sign)));
        }
    }
    Err(Error::Resource(format!(
        "affine reduction of {xi} exceeded {max_steps} reflection steps"
    )))
}

/// Level-k fusion coefficients `c_{λμ}^ν`.
pub fn fusion_coeffs(
    datum: &RootDatum,
    k: u32,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Weight, u64>> {
    fusion_coeffs_with(datum, k, lambda, mu, Guards::default())
}

pub fn fusion_coeffs_with(
    datum: &RootDatum,
    k: u32,
    lambda: &Weight,
    mu: &Weight,
    guards: Guards,
) -> Result<BTreeMap<Weight, u64>> {
    for w in [lambda, mu] {
        datum.check_rank(w)?;
        if !w.is_dominant() || datum.level_of(w) > k as i64 {
            return Err(Error::OutOfLevel {
                weight: w.to_string(),
                level: k,
            });
        }
    }
    let shifted_level = k as i64 + datum.dual_coxeter();
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (nu, m) in tensor_decompose(datum, lambda, mu)? {
        if let Some((red, s)) =
            affine_reduce(datum, shifted_level, &nu.add(datum.rho()), guards.max_reflections)?
        {
            *acc.entry(red).or_insert(0) += s as i64 * m as i64;
        }
    }
    collect_nonnegative(acc, "fusion")
}

/// All structure constants of `R_k(G)`, stored for index pairs `i ≤ j` of the
/// sorted weight list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTable {
    cartan_type: CartanType,
    level: u32,
    weights: Vec<Weight>,
    index: HashMap<Weight, usize>,
    coeffs: BTreeMap<(usize, usize), BTreeMap<usize, u64>>,
}

impl FusionTable {
    pub fn compute(datum: &RootDatum, k: u32) -> Result<Self> {
        Self::compute_with(datum, k, Guards::default(), false)
    }

    pub fn compute_with(datum: &RootDatum, k: u32, guards: Guards, parallel: bool) -> Result<Self> {
        let lw = level_weights(datum, k);
        if lw.len() > guards.max_alcove {
            return Err(Error::Resource(format!(
                "{} level-{k} weights exceed the alcove guard {}",
                lw.len(),
                guards.max_alcove
            )));
        }
        let n = lw.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let one = |&(i, j): &(usize, usize)| -> Result<((usize, usize), BTreeMap<usize, u64>)> {
            let prod = fusion_coeffs_with(datum, k, &lw.weights[i], &lw.weights[j], guards)?;
            let mut row = BTreeMap::new();
            for (nu, c) in prod {
                row.insert(lw.require(&nu)?, c);
            }
            Ok(((i, j), row))
        };
        let rows: Vec<_> = if parallel {
            pairs.par_iter().map(one).collect::<Result<_>>()?
        } else {
            pairs.iter().map(one).collect::<Result<_>>()?
        };
        Ok(FusionTable {
            cartan_type: datum.cartan_type(),
            level: k,
            weights: lw.weights,
            index: lw.index,
            coeffs: rows.into_iter().collect(),
        })
    }

    /// Assembles a table from raw parts, checking indices.
    pub fn from_parts(
        cartan_type: CartanType,
        level: u32,
        weights: Vec<Weight>,
        coeffs: BTreeMap<(usize, usize), BTreeMap<usize, u64>>,
    ) -> Result<Self> {
        let n = weights.len();
        for (&(i, j), row) in &coeffs {
            if i > j || j >= n || row.keys().any(|&t| t >= n) {
                return Err(Error::Input(format!("bad fusion table entry ({i}, {j})")));
            }
        }
        let index = weights
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(FusionTable {
            cartan_type,
            level,
            weights,
            index,
            coeffs,
        })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Free rank of `R_k(G)`.
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn require(&self, w: &Weight) -> Result<usize> {
        self.index_of(w).ok_or_else(|| Error::OutOfLevel {
            weight: w.to_string(),
            level: self.level,
        })
    }

    /// Stored rows keyed by `(i, j)` with `i ≤ j`.
    pub fn entries(&self) -> &BTreeMap<(usize, usize), BTreeMap<usize, u64>> {
        &self.coeffs
    }

    /// Product `V_i · V_j` as index → coefficient.
    pub fn product(&self, i: usize, j: usize) -> &BTreeMap<usize, u64> {
        static EMPTY: BTreeMap<usize, u64> = BTreeMap::new();
        let key = if i <= j { (i, j) } else { (j, i) };
        self.coeffs.get(&key).unwrap_or(&EMPTY)
    }

    pub fn coeff(&self, i: usize, j: usize, t: usize) -> u64 {
        self.product(i, j).get(&t).copied().unwrap_or(0)
    }

    /// Product of two weights, as weight → coefficient.
    pub fn product_weights(&self, a: &Weight, b: &Weight) -> Result<BTreeMap<Weight, u64>> {
        let i = self.require(a)?;
        let j = self.require(b)?;
        Ok(self
            .product(i, j)
            .iter()
            .map(|(&t, &c)| (self.weights[t].clone(), c))
            .collect())
    }
}

/// A finitely supported integer combination of irreducible characters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VirtualCharacter(BTreeMap<Weight, i64>);

impl VirtualCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn irreducible(w: Weight) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, 1);
        VirtualCharacter(m)
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(terms: I) -> Self {
        let mut v = VirtualCharacter::new();
        for (w, c) in terms {
            v.add_term(w, c);
        }
        v
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&w);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &VirtualCharacter) -> VirtualCharacter {
        let mut out = self.clone();
        for (w, c) in &other.0 {
            out.add_term(w.clone(), *c);
        }
        out
    }

    /// Relabels every highest weight through `f`.
    pub fn map_weights<F: Fn(&Weight) -> Weight>(&self, f: F) -> VirtualCharacter {
        VirtualCharacter::from_terms(self.0.iter().map(|(w, c)| (f(w), *c)))
    }

    /// Product in the representation ring `R(G)`.
    pub fn tensor(&self, other: &VirtualCharacter, datum: &RootDatum) -> Result<VirtualCharacter> {
        let mut out = VirtualCharacter::new();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                for (nu, m) in tensor_decompose(datum, a, b)? {
                    out.add_term(nu, ca * cb * m as i64);
                }
            }
        }
        Ok(out)
    }

    /// Upper bound for `|χ(p)|` over torus points.
    pub fn magnitude_bound(&self, datum: &RootDatum) -> Result<f64> {
        let mut s = 0.0;
        for (w, c) in &self.0 {
            s += c.unsigned_abs() as f64 * datum.weyl_dimension(w)? as f64;
        }
        Ok(s)
    }
}

impl serde::Serialize for VirtualCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        #[derive(serde::Serialize)]
        struct Term<'a> {
            weight: &'a Weight,
            coeff: i64,
        }
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (weight, &coeff) in &self.0 {
            seq.serialize_element(&Term { weight, coeff })?;
        }
        seq.end()
    }
}

impl std::fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (n, (w, c)) in self.0.iter().enumerate() {
            let sep = if n == 0 { "" } else { " + " };
            match *c {
                1 => write!(f, "{sep}W{w}")?,
                c => write!(f, "{sep}{c}·W{w}")?,
            }
        }
        Ok(())
    }
}

/// A special torus point `B^♯((λ + ρ)/(k + h^∨))`, in simple-coroot
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialPoint {
    pub weight: Weight,
    pub coords: Vec<BigRational>,
}

impl SpecialPoint {
    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// One special point per `λ ∈ Λ*_k`. The coroot coordinate `x_j` is
/// `B(ω_j, λ + ρ)/(k + h^∨)`, so that `<ν, x> = B(ν, λ + ρ)/(k + h^∨)`.
pub fn special_points(datum: &RootDatum, k: u32) -> Vec<SpecialPoint> {
    let shifted = BigInt::from(k as i64 + datum.dual_coxeter());
    let den = BigInt::from(datum.gram_denominator()) * &shifted;
    level_weights(datum, k)
        .weights
        .into_iter()
        .map(|w| {
            let lr = w.add(datum.rho());
            let coords = (0..datum.rank())
                .map(|j| {
                    let e = Weight::fundamental(datum.rank(), j);
                    BigRational::new(
                        BigInt::from(datum.inner_scaled(e.labels(), lr.labels())),
                        den.clone(),
                    )
                })
                .collect();
            SpecialPoint { weight: w, coords }
        })
        .collect()
}

/// How a character value is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterRoute {
    /// Alternating Weyl sums, numerator over denominator.
    WeylQuotient,
    /// `Σ_μ mult(μ) e^{2πi<μ, x>}` over the weight diagram.
    WeightSum,
}

fn phase(labels: &[i64], x: &[f64]) -> Complex64 {
    let t: f64 = labels.iter().zip(x).map(|(a, b)| *a as f64 * b).sum();
    Complex64::from_polar(1.0, 2.0 * PI * t)
}

fn alternating_sum(orbit: &[(Weight, i8)], x: &[f64]) -> Complex64 {
    orbit
        .iter()
        .map(|(w, s)| phase(w.labels(), x) * *s as f64)
        .sum()
}

/// Weyl character `χ_λ` at the torus point `exp(2πi x)`, `x` in coroot
/// coordinates. Uses the Weyl quotient when the Weyl group is small enough to
/// enumerate and the point is regular, and the weight sum otherwise.
pub fn character_eval(datum: &RootDatum, lambda: &Weight, x: &[f64]) -> Result<Complex64> {
    if datum.weyl_order() <= WEYL_ENUMERATION_LIMIT {
        match character_eval_with(datum, lambda, x, CharacterRoute::WeylQuotient) {
            Err(Error::Numeric(_)) => {}
            other => return other,
        }
    }
    character_eval_with(datum, lambda, x, CharacterRoute::WeightSum)
}

pub fn character_eval_with(
    datum: &RootDatum,
    lambda: &Weight,
    x: &[f64],
    route: CharacterRoute,
) -> Result<Complex64> {
    datum.check_rank(lambda)?;
    if x.len() != datum.rank() {
        return Err(Error::RankMismatch {
            expected: datum.rank(),
            found: x.len(),
        });
    }
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    match route {
        CharacterRoute::WeightSum => Ok(datum
            .weight_multiplicities(lambda)?
            .iter()
            .map(|(mu, m)| phase(mu.labels(), x) * *m as f64)
            .sum()),
        CharacterRoute::WeylQuotient => {
            if datum.weyl_order() > WEYL_ENUMERATION_LIMIT {
                return Err(Error::Resource(format!(
                    "Weyl group of {} is too large to enumerate",
                    datum.cartan_type()
                )));
            }
            let den = alternating_sum(&datum.signed_regular_orbit(datum.rho())?, x);
            if den.norm() < SINGULAR_TOLERANCE {
                return Err(Error::Numeric(format!(
                    "Weyl denominator vanishes at {x:?}"
                )));
            }
            let num = alternating_sum(&datum.signed_regular_orbit(&lambda.add(datum.rho()))?, x);
            Ok(num / den)
        }
    }
}

/// `|Π_{α>0} 2 sin(π <α, x>)|`, the modulus of the Weyl denominator.
pub fn weyl_denominator_modulus(datum: &RootDatum, x: &[f64]) -> f64 {
    datum
        .positive_root_weights()
        .iter()
        .map(|a| {
            let t: f64 = a.labels().iter().zip(x).map(|(p, q)| *p as f64 * q).sum();
            (2.0 * (PI * t).sin()).abs()
        })
        .product()
}

/// Evaluates many characters at many points, caching weight diagrams.
pub struct CharacterEvaluator<'a> {
    datum: &'a RootDatum,
    diagrams: HashMap<Weight, Vec<(Weight, f64)>>,
}

impl<'a> CharacterEvaluator<'a> {
    pub fn new(datum: &'a RootDatum) -> Self {
        CharacterEvaluator {
            datum,
            diagrams: HashMap::new(),
        }
    }

    pub fn eval(&mut self, lambda: &Weight, x: &[f64]) -> Result<Complex64> {
        if !self.diagrams.contains_key(lambda) {
            let d = self
                .datum
                .weight_multiplicities(lambda)?
                .into_iter()
                .map(|(w, m)| (w, m as f64))
                .collect();
            self.diagrams.insert(lambda.clone(), d);
        }
        Ok(self.diagrams[lambda]
            .iter()
            .map(|(mu, m)| phase(mu.labels(), x) * *m)
            .sum())
    }

    pub fn eval_virtual(&mut self, v: &VirtualCharacter, x: &[f64]) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, c) in v.terms() {
            acc += self.eval(w, x)? * *c as f64;
        }
        Ok(acc)
    }
}

/// Whether a virtual character vanishes at every special point of level `k`,
/// relative to the bound `Σ |c_λ| dim V_λ`.
pub fn in_verlinde_ideal(datum: &RootDatum, k: u32, v: &VirtualCharacter) -> Result<bool> {
    Ok(ideal_residual(datum, k, v)? < VANISHING_TOLERANCE)
}

/// Largest relative value of `v` over the special points.
pub fn ideal_residual(datum: &RootDatum, k: u32, v: &VirtualCharacter) -> Result<f64> {
    for w in v.terms().keys() {
        datum.check_rank(w)?;
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.to_string()));
        }
    }
    if v.is_zero() {
        return Ok(0.0);
    }
    let scale = v.magnitude_bound(datum)?;
    let mut eval = CharacterEvaluator::new(datum);
    let mut worst: f64 = 0.0;
    for p in special_points(datum, k) {
        let val = eval.eval_virtual(v, &p.to_f64())?;
        worst = worst.max(val.norm() / scale);
    }
    Ok(worst)
}

/// The unitary modular S-matrix, indexed by the sorted level-k weights.
#[derive(Clone, Debug)]
pub struct SMatrix {
    weights: Vec<Weight>,
    entries: Vec<Vec<Complex64>>,
}

pub fn s_matrix(datum: &RootDatum, k: u32) -> Result<SMatrix> {
    s_matrix_with(datum, k, Guards::default())
}

pub fn s_matrix_with(datum: &RootDatum, k: u32, guards: Guards) -> Result<SMatrix> {
    s_matrix_route(datum, k, guards, datum.weyl_order() <= WEYL_ENUMERATION_LIMIT)
}

fn s_matrix_route(datum: &RootDatum, k: u32, guards: Guards, weyl_sum: bool) -> Result<SMatrix> {
    let lw = level_weights(datum, k);
    let n = lw.len();
    if n > guards.max_alcove {
        return Err(Error::Resource(format!(
            "{n} level-{k} weights exceed the alcove guard {}",
            guards.max_alcove
        )));
    }
    let shifted = (k as i64 + datum.dual_coxeter()) as f64;
    let mut raw = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let shifted_weights: Vec<Weight> = lw.weights.iter().map(|w| w.add(datum.rho())).collect();
    if weyl_sum {
        // Σ_w det(w) exp(-2πi B(w(λ+ρ), μ+ρ)/(k+h^∨))
        for (i, li) in shifted_weights.iter().enumerate() {
            let orbit = datum.signed_regular_orbit(li)?;
            for (j, mj) in shifted_weights.iter().enumerate() {
                raw[i][j] = orbit
                    .iter()
                    .map(|(w, s)| {
                        let t = datum.inner_f64(w.labels(), mj.labels()) / shifted;
                        Complex64::from_polar(1.0, -2.0 * PI * t) * *s as f64
                    })
                    .sum();
            }
        }
    } else {
        // conj(χ_λ(p_μ)) · Π_{α>0} sin(π B(α, μ+ρ)/(k+h^∨)), same matrix up to a global phase
        let points = special_points(datum, k);
        let mut eval = CharacterEvaluator::new(datum);
        for (j, p) in points.iter().enumerate() {
            let x = p.to_f64();
            let den: f64 = datum
                .positive_root_weights()
                .iter()
                .map(|a| (PI * datum.inner_f64(a.labels(), shifted_weights[j].labels()) / shifted).sin())
                .product();
            for (i, li) in lw.weights.iter().enumerate() {
                raw[i][j] = eval.eval(li, &x)?.conj() * den;
            }
        }
    }
    let norm: f64 = raw.iter().map(|row| row[0].norm_sqr()).sum::<f64>().sqrt();
    let phase = raw[0][0] / raw[0][0].norm();
    let entries: Vec<Vec<Complex64>> = raw
        .into_iter()
        .map(|row| row.into_iter().map(|z| z / phase / norm).collect())
        .collect();
    let s = SMatrix {
        weights: lw.weights,
        entries,
    };
    let defect = s.unitarity_defect();
    if defect > UNITARITY_TOLERANCE {
        return Err(Error::Numeric(format!(
            "S-matrix unitarity defect {defect:.3e} exceeds {UNITARITY_TOLERANCE:e}"
        )));
    }
    Ok(s)
}

impl SMatrix {
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn entries(&self) -> &[Vec<Complex64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `max |S S^† - I|` over all entries.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut z = Complex64::new(0.0, 0.0);
                for t in 0..n {
                    z += self.entries[i][t] * self.entries[j][t].conj();
                }
                if i == j {
                    z -= 1.0;
                }
                worst = worst.max(z.norm());
            }
        }
        worst
    }

    /// Verlinde formula `N_{ij}^l = Σ_s S_is S_js conj(S_ls) / S_0s` before
    /// rounding.
    pub fn verlinde_raw(&self, i: usize, j: usize, l: usize) -> Complex64 {
        (0..self.len())
            .map(|s| self.entries[i][s] * self.entries[j][s] * self.entries[l][s].conj() / self.entries[0][s])
            .sum()
    }

    /// Rounded fusion row with the largest pre-rounding deviation observed.
    pub fn fusion_row(&self, i: usize, j: usize) -> Result<(BTreeMap<usize, i64>, f64)> {
        let mut row = BTreeMap::new();
        let mut worst: f64 = 0.0;
        for l in 0..self.len() {
            let z = self.verlinde_raw(i, j, l);
            let r = z.re.round();
            let dev = (z - Complex64::new(r, 0.0)).norm();
            worst = worst.max(dev);
            if dev > ROUNDING_TOLERANCE {
                return Err(Error::Numeric(format!(
                    "Verlinde value {z} for ({}, {}; {}) is {dev:.3e} from an integer",
                    self.weights[i], self.weights[j], self.weights[l]
                )));
            }
            if r != 0.0 {
                row.insert(l, r as i64);
            }
        }
        Ok((row, worst))
    }
}

/// Fusion coefficients from the Verlinde formula, for cross-checking.
pub fn fusion_via_smatrix(
    datum: &RootDatum,
    k: u32,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Weight, i64>> {
    let s = s_matrix(datum, k)?;
    let lw = level_weights(datum, k);
    let i = lw.require(lambda)?;
    let j = lw.require(mu)?;
    let (row, _) = s.fusion_row(i, j)?;
    Ok(row
        .into_iter()
        .map(|(l, c)| (lw.weights[l].clone(), c))
        .collect())
}

/// Compares every entry of an exact table with the Verlinde formula and
/// returns the largest pre-rounding deviation.
pub fn cross_check_table(datum: &RootDatum, table: &FusionTable, guards: Guards) -> Result<f64> {
    let s = s_matrix_with(datum, table.level(), guards)?;
    if s.weights() != table.weights() {
        return Err(Error::Internal("S-matrix and table index different weights".into()));
    }
    let mut worst: f64 = 0.0;
    for i in 0..table.rank() {
        for j in i..table.rank() {
            let (row, dev) = s.fusion_row(i, j)?;
            worst = worst.max(dev);
            let exact: BTreeMap<usize, i64> = table.product(i, j).iter().map(|(&t, &c)| (t, c as i64)).collect();
            if row != exact {
                return Err(Error::Numeric(format!(
                    "Verlinde formula disagrees with the exact table at {} * {}",
                    table.weights()[i],
                    table.weights()[j]
                )));
            }
        }
    }
    Ok(worst)
}
