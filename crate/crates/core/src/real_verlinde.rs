//! The graded `KR_*(pt)`-module `KR^G_*(G⁻, A^{k+h^∨})`, its ring structure
//! (the Real Verlinde algebra and its graded extension), and generators of
//! the Real Verlinde ideal.
//!
//! As a module the group splits into one summand `V′_λ · KR_*(pt)` for each
//! `σ₊`-fixed level-k weight (intrinsic degree 0 if real, −4 if
//! quaternionic) and one summand `r(V_ν ⊗ K_*(+))` for each two-element
//! orbit `{ν, σ₊ν}`, indexed by its lexicographically least member.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::diagnostics::Report;
use crate::error::{Error, Result};
use crate::fusion::{in_verlinde_ideal, level_weights, FusionTable, VirtualCharacter};
use crate::kr_algebra::{coeff_c, coeff_r, kr_mul, KPlusCoefficient, KRCoefficient};
use crate::real_structure::{apply_sigma_plus, classify, ensure_valid, RealInvolutionDatum, TypeDecomposition};
use crate::root_system::{Family, RootDatum, Weight};

/// A module generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisKind {
    Fixed { weight: Weight, epsilon: i8 },
    OrbitPair { weight: Weight },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RealBasisElement {
    #[serde(flatten)]
    pub kind: BasisKind,
    /// Intrinsic degree: 0, or −4 for quaternionic fixed weights.
    pub degree: i64,
}

impl RealBasisElement {
    pub fn weight(&self) -> &Weight {
        match &self.kind {
            BasisKind::Fixed { weight, .. } | BasisKind::OrbitPair { weight } => weight,
        }
    }
}

impl fmt::Display for RealBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BasisKind::Fixed { weight, .. } => write!(f, "V'{weight}"),
            BasisKind::OrbitPair { weight } => write!(f, "r(V{weight})"),
        }
    }
}

fn basis_from(dec: &TypeDecomposition) -> Vec<RealBasisElement> {
    let mut fixed: Vec<(Weight, i8)> = dec
        .fixed_real
        .iter()
        .map(|w| (w.clone(), 1))
        .chain(dec.fixed_quaternionic.iter().map(|w| (w.clone(), -1)))
        .collect();
    fixed.sort();
    fixed
        .into_iter()
        .map(|(weight, epsilon)| RealBasisElement {
            degree: if epsilon == 1 { 0 } else { -4 },
            kind: BasisKind::Fixed { weight, epsilon },
        })
        .chain(dec.orbit_pairs.iter().map(|w| RealBasisElement {
            kind: BasisKind::OrbitPair { weight: w.clone() },
            degree: 0,
        }))
        .collect()
}

/// Module generators: fixed weights in lexicographic order, then orbit
/// representatives.
pub fn real_basis(datum: &RootDatum, inv: &RealInvolutionDatum, k: u32) -> Result<Vec<RealBasisElement>> {
    ensure_valid(inv, datum, k)?;
    let dec = classify(inv, &level_weights(datum, k))?;
    Ok(basis_from(&dec))
}

/// Free rank of `RR_k(G)`: fixed weights plus orbit pairs.
pub fn rr_k_rank(datum: &RootDatum, inv: &RealInvolutionDatum, k: u32) -> Result<usize> {
    let dec = classify(inv, &level_weights(datum, k))?;
    Ok(dec.fixed_count() + dec.orbit_pairs.len())
}

/// An element of the graded module in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RKRElement {
    /// `λ ↦ w` meaning `V′_λ · w`.
    pub fixed: BTreeMap<Weight, KRCoefficient>,
    /// Canonical `ν ↦ x` meaning `r(V_ν ⊗ x)`.
    pub orbit: BTreeMap<Weight, KPlusCoefficient>,
}

impl RKRElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `V′_λ · w`.
    pub fn fixed(weight: Weight, coeff: KRCoefficient) -> Self {
        let mut out = Self::zero();
        out.add_fixed(weight, coeff);
        out
    }

    /// `r(V_ν ⊗ x)`, with `ν` expected to be an orbit representative.
    pub fn orbit(weight: Weight, coeff: KPlusCoefficient) -> Self {
        let mut out = Self::zero();
        out.add_orbit(weight, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.fixed.is_empty() && self.orbit.is_empty()
    }

    fn add_fixed(&mut self, w: Weight, c: KRCoefficient) {
        if c.is_zero() {
            return;
        }
        let e = self.fixed.entry(w.clone()).or_default();
        *e = std::mem::take(e) + c;
        if e.is_zero() {
            self.fixed.remove(&w);
        }
    }

    fn add_orbit(&mut self, w: Weight, c: KPlusCoefficient) {
        if c.is_zero() {
            return;
        }
        let e = self.orbit.entry(w.clone()).or_default();
        *e = std::mem::take(e) + c;
        if e.is_zero() {
            self.orbit.remove(&w);
        }
    }

    pub fn add(&self, other: &RKRElement) -> RKRElement {
        let mut out = self.clone();
        for (w, c) in &other.fixed {
            out.add_fixed(w.clone(), c.clone());
        }
        for (w, c) in &other.orbit {
            out.add_orbit(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> RKRElement {
        RKRElement {
            fixed: self.fixed.iter().map(|(w, c)| (w.clone(), c.scale(-1))).collect(),
            orbit: self.orbit.iter().map(|(w, c)| (w.clone(), c.scale(-1))).collect(),
        }
    }

    /// Multiplication by a coefficient: `V′_λ w ↦ V′_λ wu`,
    /// `r(V_ν x) ↦ r(V_ν x c(u))`.
    pub fn scalar_mul(&self, u: &KRCoefficient) -> RKRElement {
        let cu = coeff_c(u);
        let mut out = RKRElement::zero();
        for (w, c) in &self.fixed {
            out.add_fixed(w.clone(), kr_mul(c, u));
        }
        for (w, c) in &self.orbit {
            out.add_orbit(w.clone(), c.mul(&cu));
        }
        out
    }
}

impl fmt::Display for RKRElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (w, c) in &self.fixed {
            if *c == KRCoefficient::one() {
                parts.push(format!("V'{w}"));
            } else {
                parts.push(format!("({c})·V'{w}"));
            }
        }
        for (w, c) in &self.orbit {
            if *c == KPlusCoefficient::one() {
                parts.push(format!("r(V{w})"));
            } else {
                parts.push(format!("r(V{w}⊗({c}))"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for RKRElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum WeightKind {
    /// Fixed weight with intrinsic β-shift 0 (real) or 2 (quaternionic).
    Fixed(i64),
    Canonical(Weight),
    Partner(Weight),
}

/// Product and forgetful-map machinery for one `(σ₊, ε)` and fusion table.
pub struct RealVerlinde<'a> {
    inv: &'a RealInvolutionDatum,
    table: &'a FusionTable,
    kinds: HashMap<Weight, WeightKind>,
    decomposition: TypeDecomposition,
}

impl<'a> RealVerlinde<'a> {
    pub fn new(inv: &'a RealInvolutionDatum, table: &'a FusionTable) -> Result<Self> {
        if inv.rank() != table.cartan_type().rank() {
            return Err(Error::RankMismatch {
                expected: table.cartan_type().rank(),
                found: inv.rank(),
            });
        }
        let mut kinds = HashMap::new();
        let mut dec = TypeDecomposition::default();
        for w in table.weights() {
            let s = apply_sigma_plus(inv, w);
            if table.index_of(&s).is_none() {
                return Err(Error::Validation(format!(
                    "σ₊ maps {w} to {s}, outside the level-{} alcove",
                    table.level()
                )));
            }
            let kind = if s == *w {
                if inv.epsilon(w)? == 1 {
                    dec.fixed_real.push(w.clone());
                    WeightKind::Fixed(0)
                } else {
                    dec.fixed_quaternionic.push(w.clone());
                    WeightKind::Fixed(2)
                }
            } else if *w < s {
                dec.orbit_pairs.push(w.clone());
                WeightKind::Canonical(s)
            } else {
                WeightKind::Partner(s)
            };
            kinds.insert(w.clone(), kind);
        }
        Ok(RealVerlinde {
            inv,
            table,
            kinds,
            decomposition: dec,
        })
    }

    pub fn decomposition(&self) -> &TypeDecomposition {
        &self.decomposition
    }

    pub fn basis(&self) -> Vec<RealBasisElement> {
        basis_from(&self.decomposition)
    }

    pub fn generator(&self, b: &RealBasisElement) -> RKRElement {
        match &b.kind {
            BasisKind::Fixed { weight, .. } => RKRElement::fixed(weight.clone(), KRCoefficient::one()),
            BasisKind::OrbitPair { weight } => RKRElement::orbit(weight.clone(), KPlusCoefficient::one()),
        }
    }

    pub fn generators(&self) -> Vec<RKRElement> {
        self.basis().iter().map(|b| self.generator(b)).collect()
    }

    fn kind(&self, w: &Weight) -> Result<&WeightKind> {
        self.kinds.get(w).ok_or_else(|| Error::OutOfLevel {
            weight: w.to_string(),
            level: self.table.level(),
        })
    }

    fn shift(&self, w: &Weight) -> Result<i64> {
        match self.kind(w)? {
            WeightKind::Fixed(s) => Ok(*s),
            _ => Err(Error::Input(format!("{w} is not σ₊-fixed"))),
        }
    }

    /// Adds `r(V_γ ⊗ y)` to `out` in canonical form.
    fn add_r(&self, out: &mut RKRElement, gamma: &Weight, y: KPlusCoefficient) -> Result<()> {
        match self.kind(gamma)? {
            WeightKind::Canonical(_) => out.add_orbit(gamma.clone(), y),
            WeightKind::Partner(rep) => out.add_orbit(rep.clone(), y.conj()),
            // V_γ = c(V′_γ)·β^{−s}, so r(V_γ y) = V′_γ · r(β^{−s} y)
            WeightKind::Fixed(s) => out.add_fixed(gamma.clone(), coeff_r(&y.shift(-s))),
        }
        Ok(())
    }

    /// Re-expresses arbitrary input in canonical form: orbit entries on the
    /// non-canonical member or on fixed weights are folded.
    pub fn canonicalize(&self, x: &RKRElement) -> Result<RKRElement> {
        let mut out = RKRElement::zero();
        for (w, c) in &x.fixed {
            self.shift(w)?;
            out.add_fixed(w.clone(), c.clone());
        }
        for (w, c) in &x.orbit {
            self.add_r(&mut out, w, c.clone())?;
        }
        Ok(out)
    }

    /// `V′_λ · V′_γ`.
    fn fixed_fixed(&self, lambda: &Weight, gamma: &Weight) -> Result<RKRElement> {
        let s = self.shift(lambda)? + self.shift(gamma)?;
        let prod = self.table.product_weights(lambda, gamma)?;
        let mut out = RKRElement::zero();
        for (nu, &n) in &prod {
            let n = n as i64;
            match self.kind(nu)? {
                WeightKind::Fixed(t) => {
                    let diff = s - t;
                    if diff.rem_euclid(4) == 0 {
                        out.add_fixed(nu.clone(), KRCoefficient::bott(diff / 4).scale(n));
                    } else {
                        if n % 2 != 0 {
                            return Err(Error::EvennessViolation {
                                weight: nu.to_string(),
                                coeff: n,
                            });
                        }
                        let c = kr_mul(&KRCoefficient::mu(), &KRCoefficient::bott((diff - 2).div_euclid(4)));
                        out.add_fixed(nu.clone(), c.scale(n / 2));
                    }
                }
                WeightKind::Canonical(partner) => {
                    let m = prod.get(partner).copied().unwrap_or(0) as i64;
                    if m != n {
                        return Err(Error::Internal(format!(
                            "fusion of σ₊-fixed {lambda}, {gamma} is not σ₊-symmetric at {nu}"
                        )));
                    }
                    out.add_orbit(nu.clone(), KPlusCoefficient::monomial(n, s));
                }
                WeightKind::Partner(_) => {}
            }
        }
        Ok(out)
    }

    /// `(V′_λ w) · r(V_ν a) = r(c(V′_λ w) · V_ν a)`.
    fn fixed_orbit(
        &self,
        lambda: &Weight,
        w: &KRCoefficient,
        nu: &Weight,
        a: &KPlusCoefficient,
        out: &mut RKRElement,
    ) -> Result<()> {
        let z = coeff_c(w).shift(self.shift(lambda)?).mul(a);
        if z.is_zero() {
            return Ok(());
        }
        for (gamma, n) in self.table.product_weights(lambda, nu)? {
            self.add_r(out, &gamma, z.scale(n as i64))?;
        }
        Ok(())
    }

    /// `r(V_ν a) · r(V_μ a′) = r(V_ν V_μ a a′) + r(V_ν V_{σ₊μ} a conj(a′))`.
    fn orbit_orbit(
        &self,
        nu: &Weight,
        a: &KPlusCoefficient,
        mu: &Weight,
        a2: &KPlusCoefficient,
        out: &mut RKRElement,
    ) -> Result<()> {
        let direct = a.mul(a2);
        for (gamma, n) in self.table.product_weights(nu, mu)? {
            self.add_r(out, &gamma, direct.scale(n as i64))?;
        }
        let twisted = a.mul(&a2.conj());
        let smu = apply_sigma_plus(self.inv, mu);
        for (gamma, n) in self.table.product_weights(nu, &smu)? {
            self.add_r(out, &gamma, twisted.scale(n as i64))?;
        }
        Ok(())
    }

    pub fn multiply(&self, x: &RKRElement, y: &RKRElement) -> Result<RKRElement> {
        let x = self.canonicalize(x)?;
        let y = self.canonicalize(y)?;
        let mut out = RKRElement::zero();
        for (l, w) in &x.fixed {
            for (g, w2) in &y.fixed {
                out = out.add(&self.fixed_fixed(l, g)?.scalar_mul(&kr_mul(w, w2)));
            }
            for (n, a) in &y.orbit {
                self.fixed_orbit(l, w, n, a, &mut out)?;
            }
        }
        for (n, a) in &x.orbit {
            for (g, w2) in &y.fixed {
                self.fixed_orbit(g, w2, n, a, &mut out)?;
            }
            for (m, a2) in &y.orbit {
                self.orbit_orbit(n, a, m, a2, &mut out)?;
            }
        }
        Ok(out)
    }

    /// The forgetful map to `R_k(G) ⊗ K_*(+)`:
    /// `c(V′_λ w) = V_λ β^{s_λ} c(w)`, `c(r(V_ν x)) = V_ν x + V_{σ₊ν} conj(x)`.
    pub fn forgetful_image(&self, x: &RKRElement) -> Result<BTreeMap<Weight, KPlusCoefficient>> {
        let x = self.canonicalize(x)?;
        let mut out: BTreeMap<Weight, KPlusCoefficient> = BTreeMap::new();
        let mut put = |w: Weight, c: KPlusCoefficient| {
            let e = out.entry(w.clone()).or_default();
            *e = std::mem::take(e) + c;
            if e.is_zero() {
                out.remove(&w);
            }
        };
        for (w, c) in &x.fixed {
            put(w.clone(), coeff_c(c).shift(self.shift(w)?));
        }
        for (w, c) in &x.orbit {
            put(w.clone(), c.clone());
            put(apply_sigma_plus(self.inv, w), c.conj());
        }
        Ok(out)
    }

    /// Product in `R_k(G) ⊗ K_*(+)`.
    pub fn complex_product(
        &self,
        a: &BTreeMap<Weight, KPlusCoefficient>,
        b: &BTreeMap<Weight, KPlusCoefficient>,
    ) -> Result<BTreeMap<Weight, KPlusCoefficient>> {
        let mut out: BTreeMap<Weight, KPlusCoefficient> = BTreeMap::new();
        for (l, x) in a {
            for (m, y) in b {
                let xy = x.mul(y);
                for (nu, n) in self.table.product_weights(l, m)? {
                    let e = out.entry(nu).or_default();
                    *e = std::mem::take(e) + xy.scale(n as i64);
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Degrees of the nonzero homogeneous components.
    pub fn degrees(&self, x: &RKRElement) -> Result<Vec<i64>> {
        let mut d = Vec::new();
        for (w, c) in &x.fixed {
            let s = self.shift(w)?;
            d.extend(c.degrees().into_iter().map(|g| g - 2 * s));
        }
        for c in x.orbit.values() {
            d.extend(c.degrees());
        }
        d.sort_unstable_by(|a, b| b.cmp(a));
        d.dedup();
        Ok(d)
    }
}

pub fn multiply(
    x: &RKRElement,
    y: &RKRElement,
    table: &FusionTable,
    inv: &RealInvolutionDatum,
) -> Result<RKRElement> {
    RealVerlinde::new(inv, table)?.multiply(x, y)
}

pub fn forgetful_image(
    x: &RKRElement,
    table: &FusionTable,
    inv: &RealInvolutionDatum,
) -> Result<BTreeMap<Weight, KPlusCoefficient>> {
    RealVerlinde::new(inv, table)?.forgetful_image(x)
}

/// A square-free product of fundamental characters `χ_{ω_i}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// 0-based fundamental indices.
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn character(&self, datum: &RootDatum) -> Result<VirtualCharacter> {
        let n = datum.rank();
        let mut acc = VirtualCharacter::irreducible(Weight::zero(n));
        for &i in &self.0 {
            acc = acc.tensor(&VirtualCharacter::irreducible(Weight::fundamental(n, i)), datum)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("ω{}", i + 1)).collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `{1}` together with the square-free monomials over moved indices `D`
/// with `D ∩ σ₊(D) = ∅`, ordered by degree and then lexicographically.
#[allow(non_snake_case)]
pub fn enumerate_S(datum: &RootDatum, inv: &RealInvolutionDatum) -> Result<Vec<Monomial>> {
    if inv.rank() != datum.rank() {
        return Err(Error::RankMismatch {
            expected: datum.rank(),
            found: inv.rank(),
        });
    }
    let moved = inv.moved_indices();
    if moved.len() > 24 {
        return Err(Error::Resource(format!("{} moved indices", moved.len())));
    }
    let sigma = inv.sigma_plus();
    let mut out = Vec::new();
    for mask in 0u32..(1 << moved.len()) {
        let d: Vec<usize> = (0..moved.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| moved[b])
            .collect();
        if d.iter().all(|i| !d.contains(&sigma[*i])) {
            out.push(Monomial(d));
        }
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// A symbolic generator of the Real Verlinde ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealIdealGenerator {
    /// `c⁻¹(ρ)` for a `σ̄`-invariant `ρ`.
    CInv { rho: VirtualCharacter },
    /// `c⁻¹(ρτ + σ̄(ρτ))`.
    CInvPair {
        rho: VirtualCharacter,
        tau: Monomial,
        payload: VirtualCharacter,
    },
    /// `r(ρχ ⊗ β^i)`, `i ∈ {1, 3}`.
    RGen {
        rho: VirtualCharacter,
        chi: Monomial,
        i: u8,
        payload: VirtualCharacter,
    },
}

impl RealIdealGenerator {
    pub fn tag(&self) -> &'static str {
        match self {
            RealIdealGenerator::CInv { .. } => "CInv",
            RealIdealGenerator::CInvPair { .. } => "CInvPair",
            RealIdealGenerator::RGen { .. } => "RGen",
        }
    }

    pub fn rho(&self) -> &VirtualCharacter {
        match self {
            RealIdealGenerator::CInv { rho }
            | RealIdealGenerator::CInvPair { rho, .. }
            | RealIdealGenerator::RGen { rho, .. } => rho,
        }
    }

    /// The virtual character that must lie in `I_k`.
    pub fn payload(&self) -> &VirtualCharacter {
        match self {
            RealIdealGenerator::CInv { rho } => rho,
            RealIdealGenerator::CInvPair { payload, .. } | RealIdealGenerator::RGen { payload, .. } => payload,
        }
    }
}

impl fmt::Display for RealIdealGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealIdealGenerator::CInv { rho } => write!(f, "CInv({rho})"),
            RealIdealGenerator::CInvPair { rho, tau, .. } => write!(f, "CInvPair({rho}, {tau})"),
            RealIdealGenerator::RGen { rho, chi, i, .. } => write!(f, "RGen({rho}, {chi}, {i})"),
        }
    }
}

impl Serialize for RealIdealGenerator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RealIdealGenerator", 5)?;
        st.serialize_field("tag", self.tag())?;
        st.serialize_field("symbol", &self.to_string())?;
        st.serialize_field("rho", self.rho())?;
        match self {
            RealIdealGenerator::CInv { .. } => {}
            RealIdealGenerator::CInvPair { tau, .. } => st.serialize_field("tau", tau)?,
            RealIdealGenerator::RGen { chi, i, .. } => {
                st.serialize_field("chi", chi)?;
                st.serialize_field("beta_power", i)?;
            }
        }
        st.serialize_field("payload", self.payload())?;
        st.end()
    }
}

/// `σ̄` on virtual characters: `V_λ ↦ V_{σ₊λ}`.
pub fn sigma_bar(inv: &RealInvolutionDatum, v: &VirtualCharacter) -> VirtualCharacter {
    v.map_weights(|w| apply_sigma_plus(inv, w))
}

/// Generators of the Real Verlinde ideal from generators of `I_k`.
pub fn real_ideal_generators(
    ik_gens: &[VirtualCharacter],
    inv: &RealInvolutionDatum,
    datum: &RootDatum,
    k: u32,
) -> Result<Vec<RealIdealGenerator>> {
    if ik_gens.is_empty() {
        return Ok(Vec::new());
    }
    let s = enumerate_S(datum, inv)?;
    let mut s_chars = Vec::with_capacity(s.len());
    for m in &s {
        s_chars.push(m.character(datum)?);
    }
    let gate = |v: &VirtualCharacter, what: &str| -> Result<()> {
        if in_verlinde_ideal(datum, k, v)? {
            Ok(())
        } else {
            Err(Error::Numeric(format!("{what} payload {v} does not vanish at level {k}")))
        }
    };
    let mut out = Vec::new();
    for rho in ik_gens {
        if !in_verlinde_ideal(datum, k, rho)? {
            return Err(Error::Input(format!(
                "{rho} does not vanish at the level-{k} special points"
            )));
        }
        if sigma_bar(inv, rho) == *rho {
            out.push(RealIdealGenerator::CInv { rho: rho.clone() });
            continue;
        }
        for (tau, tc) in s.iter().zip(&s_chars) {
            let prod = rho.tensor(tc, datum)?;
            let payload = prod.add(&sigma_bar(inv, &prod));
            gate(&payload, "CInvPair")?;
            out.push(RealIdealGenerator::CInvPair {
                rho: rho.clone(),
                tau: tau.clone(),
                payload,
            });
        }
        for (chi, cc) in s.iter().zip(&s_chars) {
            let payload = rho.tensor(cc, datum)?;
            gate(&payload, "RGen")?;
            for i in [1u8, 3] {
                out.push(RealIdealGenerator::RGen {
                    rho: rho.clone(),
                    chi: chi.clone(),
                    i,
                    payload: payload.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Characters `W_{(k+1)L₁ + L₂ + ⋯ + L_i}`, `i = 1..rank`, generating `I_k`
/// for type A.
pub fn builtin_ik_generators(datum: &RootDatum, k: u32) -> Result<Vec<VirtualCharacter>> {
    let t = datum.cartan_type();
    if t.family() != Family::A {
        return Err(Error::Unsupported(format!(
            "no built-in level-k ideal generators for {t}; supply them explicitly"
        )));
    }
    let n = t.rank();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // L-coordinates (k+1, 1, …, 1, 0, …) with i nonzero entries
        let mut labels = vec![0i64; n];
        if i == 1 {
            labels[0] = k as i64 + 1;
        } else {
            labels[0] = k as i64;
            labels[i - 1] = 1;
        }
        let v = VirtualCharacter::irreducible(Weight::new(labels));
        if !in_verlinde_ideal(datum, k, &v)? {
            return Err(Error::Internal(format!("built-in generator {v} does not vanish")));
        }
        out.push(v);
    }
    Ok(out)
}

fn unimodular(mut m: Vec<Vec<i128>>) -> bool {
    // fraction-free Gaussian elimination; the final pivot is the determinant
    let n = m.len();
    if n == 0 {
        return true;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
            return false;
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                m[r][j] = (m[r][j] * m[c][c] - m[r][c] * m[c][j]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    (sign * m[n - 1][n - 1]).abs() == 1
}

/// Checks the module structure at level `k`: the forgetful images of the
/// generators form a basis of the `σ̄`-invariant part of `R_k(G)`, products
/// of generators close up and commute with the forgetful map, and the rank
/// formula holds.
pub fn verify_module_structure(datum: &RootDatum, inv: &RealInvolutionDatum, k: u32) -> Report {
    let mut report = Report::new();
    let setup = ensure_valid(inv, datum, k)
        .and_then(|_| FusionTable::compute(datum, k));
    let table = match setup {
        Ok(t) => t,
        Err(e) => {
            report.push("setup", false, e.to_string());
            return report;
        }
    };
    let rv = match RealVerlinde::new(inv, &table) {
        Ok(rv) => rv,
        Err(e) => {
            report.push("setup", false, e.to_string());
            return report;
        }
    };
    let basis = rv.basis();
    let gens = rv.generators();

    // (a) images span the invariant sublattice
    let span_detail = (|| -> Result<String> {
        let mut rows = Vec::new();
        for g in &gens {
            let img = rv.forgetful_image(g)?;
            // forget the β-grading
            let mut flat: BTreeMap<Weight, i64> = BTreeMap::new();
            for (w, c) in img {
                *flat.entry(w).or_insert(0) += c.terms().iter().map(|(_, n)| n).sum::<i64>();
            }
            for (w, c) in &flat {
                if flat.get(&apply_sigma_plus(inv, w)).copied().unwrap_or(0) != *c {
                    return Ok(format!("image of {g} is not σ̄-invariant"));
                }
            }
            rows.push(
                basis
                    .iter()
                    .map(|b| flat.get(b.weight()).copied().unwrap_or(0) as i128)
                    .collect::<Vec<_>>(),
            );
        }
        Ok(if unimodular(rows) {
            String::new()
        } else {
            "images do not form a basis of the invariant sublattice".into()
        })
    })();
    match span_detail {
        Ok(d) => report.push("forgetful_span", d.is_empty(), d),
        Err(e) => report.push("forgetful_span", false, e.to_string()),
    }

    // (b) closure, forgetful commutation, degree additivity
    let closure = (|| -> Result<String> {
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i..] {
                let p = rv.multiply(x, y)?;
                let lhs = rv.forgetful_image(&p)?;
                let rhs = rv.complex_product(&rv.forgetful_image(x)?, &rv.forgetful_image(y)?)?;
                if lhs != rhs {
                    return Ok(format!("c({x} · {y}) differs from c({x})·c({y})"));
                }
                let (dx, dy, dp) = (rv.degrees(x)?, rv.degrees(y)?, rv.degrees(&p)?);
                if !p.is_zero() && dp.iter().any(|d| (d - dx[0] - dy[0]).rem_euclid(8) != 0) {
                    return Ok(format!("degree of {x} · {y} is not additive"));
                }
            }
        }
        Ok(String::new())
    })();
    match closure {
        Ok(d) => report.push("product_closure", d.is_empty(), d),
        Err(e) => report.push("product_closure", false, e.to_string()),
    }

    // (c) rank formula
    let dec = rv.decomposition();
    let rank = rr_k_rank(datum, inv, k).unwrap_or(usize::MAX);
    let orbits = table.rank() - dec.orbit_pairs.len();
    let ok = rank == basis.len()
        && rank == dec.fixed_count() + dec.orbit_pairs.len()
        && rank == orbits
        && dec.covered() == table.rank();
    report.push(
        "rank_formula",
        ok,
        if ok {
            String::new()
        } else {
            format!("rank {rank}, generators {}, σ₊-orbits {orbits}", basis.len())
        },
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real_structure::{preset, Preset};

    fn datum(s: &str) -> RootDatum {
        RootDatum::new(s.parse().unwrap())
    }

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn setup(t: &str, p: Preset, k: u32) -> (RootDatum, RealInvolutionDatum, FusionTable) {
        let d = datum(t);
        let inv = preset(&d, p).unwrap();
        let table = FusionTable::compute(&d, k).unwrap();
        (d, inv, table)
    }

    #[test]
    fn basis_examples() {
        let (d, inv, _) = setup("A1", Preset::TrivialInvolution, 1);
        let b = real_basis(&d, &inv, 1).unwrap();
        assert_eq!(
            b,
            vec![
                RealBasisElement {
                    kind: BasisKind::Fixed { weight: w(&[0]), epsilon: 1 },
                    degree: 0
                },
                RealBasisElement {
                    kind: BasisKind::Fixed { weight: w(&[1]), epsilon: -1 },
                    degree: -4
                },
            ]
        );
        let (d, inv, _) = setup("A2", Preset::TrivialInvolution, 1);
        let b = real_basis(&d, &inv, 1).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1].kind, BasisKind::OrbitPair { weight: w(&[0, 1]) });
        for t in ["A1", "A3", "C2", "G2"] {
            let d = datum(t);
            let inv = preset(&d, Preset::TrivialInvolution).unwrap();
            assert_eq!(real_basis(&d, &inv, 0).unwrap().len(), 1);
            assert_eq!(rr_k_rank(&d, &inv, 0).unwrap(), 1);
        }
    }

    #[test]
    fn rank_examples() {
        let (d, inv, _) = setup("A1", Preset::TrivialInvolution, 2);
        assert_eq!(rr_k_rank(&d, &inv, 2).unwrap(), 3);
        let (d, inv, _) = setup("A2", Preset::TrivialInvolution, 1);
        assert_eq!(rr_k_rank(&d, &inv, 1).unwrap(), 2);
    }

    #[test]
    fn quaternionic_square() {
        let (_, inv, table) = setup("A1", Preset::TrivialInvolution, 2);
        let v1 = RKRElement::fixed(w(&[1]), KRCoefficient::one());
        let p = multiply(&v1, &v1, &table, &inv).unwrap();
        let expect = RKRElement::fixed(w(&[0]), KRCoefficient::bott(1))
            .add(&RKRElement::fixed(w(&[2]), KRCoefficient::bott(1)));
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "(b)·V'(0) + (b)·V'(2)");
    }

    #[test]
    fn mixed_type_uses_mu() {
        // (2)·(1) = (1) + (3) at level 3: real times quaternionic
        let (_, inv, table) = setup("A1", Preset::TrivialInvolution, 3);
        let p = multiply(
            &RKRElement::fixed(w(&[2]), KRCoefficient::one()),
            &RKRElement::fixed(w(&[1]), KRCoefficient::one()),
            &table,
            &inv,
        )
        .unwrap();
        let expect = RKRElement::fixed(w(&[1]), KRCoefficient::one())
            .add(&RKRElement::fixed(w(&[3]), KRCoefficient::one()));
        assert_eq!(p, expect);
    }

    #[test]
    fn unit_and_eta() {
        let (_, inv, table) = setup("A2", Preset::TrivialInvolution, 2);
        let rv = RealVerlinde::new(&inv, &table).unwrap();
        let unit = RKRElement::fixed(w(&[0, 0]), KRCoefficient::one());
        let eta = RKRElement::fixed(w(&[0, 0]), KRCoefficient::eta());
        for g in rv.generators() {
            assert_eq!(rv.multiply(&unit, &g).unwrap(), g);
            let e = rv.multiply(&g, &eta).unwrap();
            assert!(e.orbit.is_empty());
        }
    }

    #[test]
    fn forgetful_examples() {
        let (_, inv, table) = setup("A1", Preset::TrivialInvolution, 2);
        let rv = RealVerlinde::new(&inv, &table).unwrap();
        let img = rv.forgetful_image(&RKRElement::fixed(w(&[2]), KRCoefficient::one())).unwrap();
        assert_eq!(img, [(w(&[2]), KPlusCoefficient::one())].into_iter().collect());
        let img = rv.forgetful_image(&RKRElement::fixed(w(&[2]), KRCoefficient::mu())).unwrap();
        assert_eq!(img, [(w(&[2]), KPlusCoefficient::monomial(2, 2))].into_iter().collect());
        assert!(rv.forgetful_image(&RKRElement::zero()).unwrap().is_empty());

        let (_, inv, table) = setup("A2", Preset::TrivialInvolution, 1);
        let rv = RealVerlinde::new(&inv, &table).unwrap();
        let img = rv
            .forgetful_image(&RKRElement::orbit(w(&[0, 1]), KPlusCoefficient::beta(1)))
            .unwrap();
        assert_eq!(
            img,
            [
                (w(&[0, 1]), KPlusCoefficient::beta(1)),
                (w(&[1, 0]), KPlusCoefficient::monomial(-1, 1))
            ]
            .into_iter()
            .collect()
        );
    }

    #[test]
    fn folding() {
        let (_, inv, table) = setup("A2", Preset::TrivialInvolution, 1);
        let rv = RealVerlinde::new(&inv, &table).unwrap();
        let raw = RKRElement {
            fixed: BTreeMap::new(),
            orbit: [(w(&[1, 0]), KPlusCoefficient::beta(1) + KPlusCoefficient::beta(2))]
                .into_iter()
                .collect(),
        };
        let c = rv.canonicalize(&raw).unwrap();
        assert_eq!(
            c,
            RKRElement::orbit(w(&[0, 1]), KPlusCoefficient::monomial(-1, 1) + KPlusCoefficient::beta(2))
        );
    }

    #[test]
    fn orbit_product_a2() {
        // r(V_{(0,1)}) squared at level 1: (0,1)(0,1) = (1,0), (0,1)(1,0) = (0,0)
        let (_, inv, table) = setup("A2", Preset::TrivialInvolution, 1);
        let rv = RealVerlinde::new(&inv, &table).unwrap();
        let r = RKRElement::orbit(w(&[0, 1]), KPlusCoefficient::one());
        let p = rv.multiply(&r, &r).unwrap();
        let expect = RKRElement::orbit(w(&[0, 1]), KPlusCoefficient::one())
            .add(&RKRElement::fixed(w(&[0, 0]), KRCoefficient::scalar(2)));
        assert_eq!(p, expect);
    }

    #[test]
    fn enumerate_s_examples() {
        let a3 = datum("A3");
        let q = preset(&a3, Preset::SuEvenQuaternionic).unwrap();
        assert_eq!(enumerate_S(&a3, &q).unwrap(), vec![Monomial::one()]);
        let a2 = datum("A2");
        let t = preset(&a2, Preset::TrivialInvolution).unwrap();
        let s: Vec<String> = enumerate_S(&a2, &t).unwrap().iter().map(|m| m.to_string()).collect();
        assert_eq!(s, ["1", "ω1", "ω2"]);
        let a4 = datum("A4");
        let t = preset(&a4, Preset::TrivialInvolution).unwrap();
        let s: Vec<String> = enumerate_S(&a4, &t).unwrap().iter().map(|m| m.to_string()).collect();
        assert_eq!(
            s,
            ["1", "ω1", "ω2", "ω3", "ω4", "ω1·ω2", "ω1·ω3", "ω2·ω4", "ω3·ω4"]
        );
    }

    #[test]
    fn builtin_generators() {
        let a1 = datum("A1");
        for k in 0..4 {
            let g = builtin_ik_generators(&a1, k).unwrap();
            assert_eq!(g, vec![VirtualCharacter::irreducible(w(&[k as i64 + 1]))]);
        }
        let a3 = datum("A3");
        let g = builtin_ik_generators(&a3, 1).unwrap();
        let weights: Vec<Weight> = g.iter().flat_map(|v| v.terms().keys().cloned()).collect();
        assert_eq!(weights, vec![w(&[2, 0, 0]), w(&[1, 1, 0]), w(&[1, 0, 1])]);
        assert!(matches!(
            builtin_ik_generators(&datum("C2"), 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn ideal_generator_examples() {
        let a3 = datum("A3");
        let q = preset(&a3, Preset::SuEvenQuaternionic).unwrap();
        for k in 1..=2 {
            let gens = builtin_ik_generators(&a3, k).unwrap();
            let out = real_ideal_generators(&gens, &q, &a3, k).unwrap();
            assert_eq!(out.len(), 3);
            assert!(out.iter().all(|g| g.tag() == "CInv"));
        }
        assert!(real_ideal_generators(&[], &q, &a3, 1).unwrap().is_empty());

        let a2 = datum("A2");
        let t = preset(&a2, Preset::TrivialInvolution).unwrap();
        let rho = VirtualCharacter::irreducible(w(&[2, 0]));
        let out = real_ideal_generators(std::slice::from_ref(&rho), &t, &a2, 1).unwrap();
        let tags: Vec<String> = out.iter().map(|g| g.to_string()).collect();
        assert_eq!(tags.len(), 9);
        assert!(tags.contains(&"CInvPair(W(2,0), ω2)".to_string()));
        assert!(tags.contains(&"RGen(W(2,0), 1, 3)".to_string()));

        let bad = VirtualCharacter::irreducible(w(&[1, 0]));
        assert!(matches!(
            real_ideal_generators(&[bad], &t, &a2, 1),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn module_structure_passes() {
        for (t, p, kmax) in [
            ("A1", Preset::TrivialInvolution, 4),
            ("A3", Preset::SuEvenQuaternionic, 2),
            ("A2", Preset::TrivialInvolution, 2),
            ("C2", Preset::TrivialInvolution, 2),
            ("G2", Preset::TrivialInvolution, 2),
        ] {
            let d = datum(t);
            let inv = preset(&d, p).unwrap();
            for k in 0..=kmax {
                let r = verify_module_structure(&d, &inv, k);
                assert!(r.passed(), "{t} {p} k={k}\n{r}");
            }
        }
    }

    #[test]
    fn evenness_violation_detected() {
        // ε flipped on ω1 for A3 with σ₊ = id makes (1,0,0)·(0,0,1) land oddly
        let a3 = datum("A3");
        let inv = RealInvolutionDatum::new(
            "odd",
            vec![0, 1, 2],
            crate::real_structure::EpsilonSpec::Coweight(vec![1, 0, 0]),
        )
        .unwrap();
        let table = FusionTable::compute(&a3, 1).unwrap();
        let r = multiply(
            &RKRElement::fixed(w(&[1, 0, 0]), KRCoefficient::one()),
            &RKRElement::fixed(w(&[0, 0, 1]), KRCoefficient::one()),
            &table,
            &inv,
        );
        assert!(matches!(r, Err(Error::EvennessViolation { .. })));
    }

    #[test]
    fn unimodular_check() {
        assert!(unimodular(vec![vec![1, 0], vec![0, 1]]));
        assert!(unimodular(vec![vec![0, 1], vec![1, 0]]));
        assert!(!unimodular(vec![vec![2, 0], vec![0, 1]]));
        assert!(unimodular(vec![vec![2, 1], vec![1, 1]]));
    }
}
