//! The coefficient rings `KR_*(pt) = Z[η, μ, b^{±1}]/(2η, η³, μη, μ² − 4b)`
//! and `K_*(+) = Z[β, b^{±1}]/(β⁴ − b)`, with the realification and
//! forgetful maps between them.
//!
//! Degrees: `|η| = −1`, `|μ| = −4`, `|β| = −2`, `|b| = −8`. Carrying the Bott
//! element `b` explicitly keeps every relation homogeneous.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Additive generators of `KR_*(pt)` over `Z[b^{±1}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KRBasis {
    One,
    Eta,
    Eta2,
    Mu,
}

impl KRBasis {
    pub const ALL: [KRBasis; 4] = [KRBasis::One, KRBasis::Eta, KRBasis::Eta2, KRBasis::Mu];

    pub fn degree(self) -> i64 {
        match self {
            KRBasis::One => 0,
            KRBasis::Eta => -1,
            KRBasis::Eta2 => -2,
            KRBasis::Mu => -4,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            KRBasis::One => "",
            KRBasis::Eta => "η",
            KRBasis::Eta2 => "η²",
            KRBasis::Mu => "μ",
        }
    }
}

/// The part of a coefficient attached to a single power of `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct Block {
    one: i64,
    eta: i64,
    eta2: i64,
    mu: i64,
}

impl Block {
    fn get(&self, e: KRBasis) -> i64 {
        match e {
            KRBasis::One => self.one,
            KRBasis::Eta => self.eta,
            KRBasis::Eta2 => self.eta2,
            KRBasis::Mu => self.mu,
        }
    }

    fn get_mut(&mut self, e: KRBasis) -> &mut i64 {
        match e {
            KRBasis::One => &mut self.one,
            KRBasis::Eta => &mut self.eta,
            KRBasis::Eta2 => &mut self.eta2,
            KRBasis::Mu => &mut self.mu,
        }
    }

    fn normalize(&mut self) {
        self.eta = self.eta.rem_euclid(2);
        self.eta2 = self.eta2.rem_euclid(2);
    }

    fn is_zero(&self) -> bool {
        *self == Block::default()
    }
}

/// An element `Σ_m b^m (a + c₁η + c₂η² + dμ)` of `KR_*(pt)` in canonical
/// form (`c₁, c₂ ∈ {0, 1}`, no zero blocks).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KRCoefficient(BTreeMap<i64, Block>);

impl KRCoefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(1)
    }

    pub fn scalar(n: i64) -> Self {
        Self::monomial(n, KRBasis::One, 0)
    }

    pub fn eta() -> Self {
        Self::monomial(1, KRBasis::Eta, 0)
    }

    pub fn eta2() -> Self {
        Self::monomial(1, KRBasis::Eta2, 0)
    }

    pub fn mu() -> Self {
        Self::monomial(1, KRBasis::Mu, 0)
    }

    /// `b^m`.
    pub fn bott(m: i64) -> Self {
        Self::monomial(1, KRBasis::One, m)
    }

    /// `c · e · b^m`.
    pub fn monomial(c: i64, e: KRBasis, m: i64) -> Self {
        let mut out = Self::zero();
        out.add_monomial(c, e, m);
        out
    }

    fn add_monomial(&mut self, c: i64, e: KRBasis, m: i64) {
        if c == 0 {
            return;
        }
        let block = self.0.entry(m).or_default();
        *block.get_mut(e) += c;
        block.normalize();
        if block.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient of `e · b^m`.
    pub fn get(&self, e: KRBasis, m: i64) -> i64 {
        self.0.get(&m).map_or(0, |b| b.get(e))
    }

    /// Nonzero terms `(m, e, c)` ordered by degree, highest first.
    pub fn terms(&self) -> Vec<(i64, KRBasis, i64)> {
        let mut out = Vec::new();
        for (&m, block) in &self.0 {
            for e in KRBasis::ALL {
                let c = block.get(e);
                if c != 0 {
                    out.push((m, e, c));
                }
            }
        }
        out
    }

    /// Degrees of the nonzero homogeneous components.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms().iter().map(|(m, e, _)| e.degree() - 8 * m).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::zero();
        for (m, e, c) in self.terms() {
            out.add_monomial(n * c, e, m);
        }
        out
    }

    /// Multiplies by `b^k`.
    pub fn shift_bott(&self, k: i64) -> Self {
        KRCoefficient(self.0.iter().map(|(m, b)| (m + k, *b)).collect())
    }

    /// Whether the coefficient lies in the η-torsion part `Z/2{η, η²}`.
    pub fn is_torsion(&self) -> bool {
        self.terms()
            .iter()
            .all(|(_, e, _)| matches!(e, KRBasis::Eta | KRBasis::Eta2))
    }
}

/// Product in `KR_*(pt)`.
pub fn kr_mul(x: &KRCoefficient, y: &KRCoefficient) -> KRCoefficient {
    use KRBasis::*;
    let mut out = KRCoefficient::zero();
    for (m, e, c) in x.terms() {
        for (n, f, d) in y.terms() {
            let k = m + n;
            let cd = c * d;
            match (e, f) {
                (One, g) | (g, One) => out.add_monomial(cd, g, k),
                (Eta, Eta) => out.add_monomial(cd, Eta2, k),
                (Mu, Mu) => out.add_monomial(4 * cd, One, k + 1),
                // η³ = 0, μη = 0
                _ => {}
            }
        }
    }
    out
}

impl Add for KRCoefficient {
    type Output = KRCoefficient;
    fn add(mut self, rhs: KRCoefficient) -> KRCoefficient {
        for (m, e, c) in rhs.terms() {
            self.add_monomial(c, e, m);
        }
        self
    }
}

impl Neg for KRCoefficient {
    type Output = KRCoefficient;
    fn neg(self) -> KRCoefficient {
        self.scale(-1)
    }
}

impl Sub for KRCoefficient {
    type Output = KRCoefficient;
    fn sub(self, rhs: KRCoefficient) -> KRCoefficient {
        self + (-rhs)
    }
}

impl Mul for &KRCoefficient {
    type Output = KRCoefficient;
    fn mul(self, rhs: &KRCoefficient) -> KRCoefficient {
        kr_mul(self, rhs)
    }
}

impl Mul for KRCoefficient {
    type Output = KRCoefficient;
    fn mul(self, rhs: KRCoefficient) -> KRCoefficient {
        kr_mul(&self, &rhs)
    }
}

fn bott_suffix(m: i64) -> String {
    match m {
        0 => String::new(),
        1 => "·b".into(),
        m => format!("·b^{m}"),
    }
}

fn render_terms<I: IntoIterator<Item = (i64, &'static str, i64)>>(
    f: &mut fmt::Formatter<'_>,
    terms: I,
) -> fmt::Result {
    let mut first = true;
    for (c, symbol, m) in terms {
        let mag = c.unsigned_abs();
        let text = match (symbol.is_empty(), m, mag) {
            (true, 0, _) => mag.to_string(),
            (true, m, 1) => bott_suffix(m).trim_start_matches('·').to_string(),
            (true, m, _) => format!("{mag}{}", bott_suffix(m)),
            (false, m, 1) => format!("{symbol}{}", bott_suffix(m)),
            (false, m, _) => format!("{mag}{symbol}{}", bott_suffix(m)),
        };
        match (first, c < 0) {
            (true, false) => write!(f, "{text}")?,
            (true, true) => write!(f, "-{text}")?,
            (false, false) => write!(f, " + {text}")?,
            (false, true) => write!(f, " - {text}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for KRCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_terms(f, self.terms().into_iter().map(|(m, e, c)| (c, e.symbol(), m)))
    }
}

impl Serialize for KRCoefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An element `Σ_m Σ_{i<4} c_{m,i} b^m β^i` of `K_*(+)`, with `β⁴ = b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KPlusCoefficient(BTreeMap<i64, [i64; 4]>);

impl KPlusCoefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(1)
    }

    pub fn scalar(n: i64) -> Self {
        Self::monomial(n, 0)
    }

    /// `c · β^e` for any integer exponent `e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        let mut out = Self::zero();
        out.add_monomial(c, e);
        out
    }

    pub fn beta(e: i64) -> Self {
        Self::monomial(1, e)
    }

    fn add_monomial(&mut self, c: i64, e: i64) {
        if c == 0 {
            return;
        }
        let m = e.div_euclid(4);
        let i = e.rem_euclid(4) as usize;
        let block = self.0.entry(m).or_default();
        block[i] += c;
        if block.iter().all(|&x| x == 0) {
            self.0.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Nonzero terms `(e, c)` meaning `c · β^e`, with `e = 4m + i`.
    pub fn terms(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for (&m, block) in &self.0 {
            for (i, &c) in block.iter().enumerate() {
                if c != 0 {
                    out.push((4 * m + i as i64, c));
                }
            }
        }
        out
    }

    /// Coefficient of `β^e`.
    pub fn get(&self, e: i64) -> i64 {
        self.0
            .get(&e.div_euclid(4))
            .map_or(0, |b| b[e.rem_euclid(4) as usize])
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms().iter().map(|(e, _)| -2 * e).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d.dedup();
        d
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            out.add_monomial(n * c, e);
        }
        out
    }

    /// Multiplies by `β^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            out.add_monomial(c, e + k);
        }
        out
    }

    /// Complex conjugation, `β ↦ −β`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            out.add_monomial(if e.rem_euclid(2) == 0 { c } else { -c }, e);
        }
        out
    }

    pub fn mul(&self, other: &KPlusCoefficient) -> KPlusCoefficient {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            for (f, d) in other.terms() {
                out.add_monomial(c * d, e + f);
            }
        }
        out
    }
}

impl Add for KPlusCoefficient {
    type Output = KPlusCoefficient;
    fn add(mut self, rhs: KPlusCoefficient) -> KPlusCoefficient {
        for (e, c) in rhs.terms() {
            self.add_monomial(c, e);
        }
        self
    }
}

impl Neg for KPlusCoefficient {
    type Output = KPlusCoefficient;
    fn neg(self) -> KPlusCoefficient {
        self.scale(-1)
    }
}

impl Sub for KPlusCoefficient {
    type Output = KPlusCoefficient;
    fn sub(self, rhs: KPlusCoefficient) -> KPlusCoefficient {
        self + (-rhs)
    }
}

impl Mul for &KPlusCoefficient {
    type Output = KPlusCoefficient;
    fn mul(self, rhs: &KPlusCoefficient) -> KPlusCoefficient {
        KPlusCoefficient::mul(self, rhs)
    }
}

impl fmt::Display for KPlusCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const BETA: [&str; 4] = ["", "β", "β²", "β³"];
        render_terms(
            f,
            self.terms()
                .into_iter()
                .map(|(e, c)| (c, BETA[e.rem_euclid(4) as usize], e.div_euclid(4))),
        )
    }
}

impl Serialize for KPlusCoefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Forgetful map `c`: `1 ↦ 1`, `η ↦ 0`, `η² ↦ 0`, `μ ↦ 2β²`, `b ↦ β⁴`.
pub fn coeff_c(x: &KRCoefficient) -> KPlusCoefficient {
    let mut out = KPlusCoefficient::zero();
    for (m, e, c) in x.terms() {
        match e {
            KRBasis::One => out.add_monomial(c, 4 * m),
            KRBasis::Mu => out.add_monomial(2 * c, 4 * m + 2),
            KRBasis::Eta | KRBasis::Eta2 => {}
        }
    }
    out
}

/// Realification `r`: `1 ↦ 2`, `β ↦ η²`, `β² ↦ μ`, `β³ ↦ 0`, `b`-linear.
pub fn coeff_r(y: &KPlusCoefficient) -> KRCoefficient {
    let mut out = KRCoefficient::zero();
    for (e, c) in y.terms() {
        let m = e.div_euclid(4);
        match e.rem_euclid(4) {
            0 => out.add_monomial(2 * c, KRBasis::One, m),
            1 => out.add_monomial(c, KRBasis::Eta2, m),
            2 => out.add_monomial(c, KRBasis::Mu, m),
            _ => {}
        }
    }
    out
}

/// Orientability and `Spin^c` type of `R^{r,s}` with a `(p, q)` Real structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpincClassification {
    NotOrientable,
    OrientableNotSpinc,
    Spinc,
}

impl fmt::Display for SpincClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpincClassification::NotOrientable => "NotOrientable",
            SpincClassification::OrientableNotSpinc => "OrientableNotSpinc",
            SpincClassification::Spinc => "Spinc",
        })
    }
}

pub fn spin_c_classify(r: u64, s: u64, p: u64, q: u64) -> Result<SpincClassification> {
    if p + q != r + s {
        return Err(Error::Input(format!(
            "p + q = {} differs from r + s = {}",
            p + q,
            r + s
        )));
    }
    let d = p as i128 - q as i128 - (r as i128 - s as i128);
    // d is even because p + q = r + s
    Ok(if (d / 2).rem_euclid(2) == 1 {
        SpincClassification::NotOrientable
    } else if d.rem_euclid(8) == 4 {
        SpincClassification::OrientableNotSpinc
    } else {
        SpincClassification::Spinc
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> Vec<KRCoefficient> {
        vec![
            KRCoefficient::one(),
            KRCoefficient::eta(),
            KRCoefficient::eta2(),
            KRCoefficient::mu(),
            KRCoefficient::bott(1),
            KRCoefficient::bott(-1),
        ]
    }

    fn kbasis() -> Vec<KPlusCoefficient> {
        (-4..8).map(KPlusCoefficient::beta).collect()
    }

    #[test]
    fn relations() {
        let eta = KRCoefficient::eta();
        let mu = KRCoefficient::mu();
        assert!(eta.scale(2).is_zero());
        assert!((&eta * &KRCoefficient::eta2()).is_zero());
        assert!((&mu * &eta).is_zero());
        assert_eq!(&mu * &mu, KRCoefficient::scalar(4) * KRCoefficient::bott(1));
        assert_eq!(&eta * &eta, KRCoefficient::eta2());
        for x in basis() {
            assert_eq!(&KRCoefficient::one() * &x, x);
        }
    }

    #[test]
    fn ring_axioms_on_samples() {
        let samples = vec![
            KRCoefficient::scalar(3) + KRCoefficient::eta2() + KRCoefficient::mu().scale(2),
            KRCoefficient::eta() + KRCoefficient::mu().scale(-1),
            KRCoefficient::bott(-1) + KRCoefficient::eta(),
            KRCoefficient::mu() * KRCoefficient::bott(2),
        ];
        for a in &samples {
            for b in &samples {
                assert_eq!(a * b, b * a);
                for c in &samples {
                    assert_eq!(&(a * b) * c, a * &(b * c));
                    assert_eq!(a * &(b.clone() + c.clone()), (a * b) + (a * c));
                }
            }
        }
    }

    #[test]
    fn degrees_add() {
        for x in basis() {
            for y in basis() {
                let p = &x * &y;
                if !p.is_zero() {
                    assert_eq!(p.degrees(), vec![x.degrees()[0] + y.degrees()[0]]);
                }
            }
        }
    }

    #[test]
    fn coefficient_maps() {
        assert_eq!(coeff_c(&KRCoefficient::one()), KPlusCoefficient::one());
        assert!(coeff_c(&KRCoefficient::eta()).is_zero());
        assert!(coeff_c(&KRCoefficient::eta2()).is_zero());
        assert_eq!(coeff_c(&KRCoefficient::mu()), KPlusCoefficient::monomial(2, 2));
        assert_eq!(coeff_r(&KPlusCoefficient::one()), KRCoefficient::scalar(2));
        assert_eq!(coeff_r(&KPlusCoefficient::beta(1)), KRCoefficient::eta2());
        assert_eq!(coeff_r(&KPlusCoefficient::beta(2)), KRCoefficient::mu());
        assert!(coeff_r(&KPlusCoefficient::beta(3)).is_zero());
    }

    #[test]
    fn r_c_identities() {
        for x in basis() {
            assert_eq!(coeff_r(&coeff_c(&x)), x.scale(2));
        }
        for y in kbasis() {
            assert_eq!(coeff_c(&coeff_r(&y)), y.clone() + y.conj());
            for x in basis() {
                assert_eq!(coeff_r(&y.mul(&coeff_c(&x))), &coeff_r(&y) * &x);
            }
        }
        assert!(coeff_c(&coeff_r(&KPlusCoefficient::beta(1))).is_zero());
    }

    #[test]
    fn c_is_multiplicative() {
        for x in basis() {
            for y in basis() {
                assert_eq!(coeff_c(&(&x * &y)), coeff_c(&x).mul(&coeff_c(&y)));
            }
        }
    }

    #[test]
    fn rendering() {
        let x = KRCoefficient::scalar(3)
            + KRCoefficient::eta2()
            + KRCoefficient::monomial(2, KRBasis::Mu, 1);
        assert_eq!(x.to_string(), "3 + η² + 2μ·b");
        assert_eq!(KRCoefficient::zero().to_string(), "0");
        assert_eq!(KRCoefficient::bott(1).to_string(), "b");
        assert_eq!(KRCoefficient::monomial(-2, KRBasis::One, 2).to_string(), "-2·b^2");
        assert_eq!(
            (KRCoefficient::one() - KRCoefficient::mu()).to_string(),
            "1 - μ"
        );
        assert_eq!(KPlusCoefficient::beta(6).to_string(), "β²·b");
        assert_eq!(
            (KPlusCoefficient::one() + KPlusCoefficient::monomial(3, 3)).to_string(),
            "1 + 3β³"
        );
        assert_eq!(KPlusCoefficient::beta(-4).to_string(), "b^-1");
    }

    #[test]
    fn spinc_examples() {
        use SpincClassification::*;
        assert_eq!(spin_c_classify(0, 4, 2, 2).unwrap(), OrientableNotSpinc);
        assert_eq!(spin_c_classify(0, 0, 0, 0).unwrap(), Spinc);
        assert_eq!(spin_c_classify(1, 0, 0, 1).unwrap(), NotOrientable);
        assert!(spin_c_classify(1, 0, 0, 0).is_err());
    }

    #[test]
    fn spinc_depends_on_residue() {
        let mut seen: BTreeMap<i64, SpincClassification> = BTreeMap::new();
        for r in 0..=8u64 {
            for s in 0..=8 - r {
                for p in 0..=r + s {
                    let q = r + s - p;
                    let d = (p as i64 - q as i64 - (r as i64 - s as i64)).rem_euclid(8);
                    let c = spin_c_classify(r, s, p, q).unwrap();
                    assert_eq!(*seen.entry(d).or_insert(c), c);
                }
            }
        }
        assert_eq!(seen.len(), 4);
    }
}
