//! Root systems, weight lattices and Weyl-group reduction for the simple
//! types `A_l` through `G_2`.
//!
//! Conventions:
//!
//! * simple roots follow Bourbaki numbering;
//! * `cartan[i][j] = <α_i, α_j^∨>`, so row `i` holds the Dynkin labels of `α_i`;
//! * weights are stored only by their Dynkin labels (fundamental-weight
//!   coordinates); root coordinates are derived when needed;
//! * the basic inner product `B` is normalized by `B(θ, θ) = 2` for the
//!   highest root `θ`.
//!
//! All lattice arithmetic is exact. The Gram matrix of `B` is kept both as
//! rationals and as an integer matrix scaled by a common denominator, which
//! the hot loops (Freudenthal, Weyl dimension) use.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family letter of a simple Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(Error::Input(format!("unknown Cartan family `{other}`"))),
        }
    }
}

/// A Cartan type such as `A3` or `G2`. Construction checks the rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::Input(format!("rank {rank} is not valid for family {family}")))
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> u128 {
        let l = self.rank as u128;
        let fact = |n: u128| (1..=n).product::<u128>();
        match self.family {
            Family::A => fact(l + 1),
            Family::B | Family::C => (1u128 << l) * fact(l),
            Family::D => (1u128 << (l - 1)) * fact(l),
            Family::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1_152,
            Family::G => 12,
        }
    }

    /// Known number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1) / 2,
            Family::B | Family::C => l * l,
            Family::D => l * (l - 1),
            Family::E => match l {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let mut a = vec![vec![0i64; l]; l];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..l - 1 {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..l - 2 {
                    link(i, i + 1);
                }
                link(l - 3, l - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..l - 1 {
                    link(i, i + 1);
                }
            }
            Family::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            Family::G => link(0, 1),
        }
        match self.family {
            // α_l short
            Family::B => a[l - 2][l - 1] = -2,
            // α_l long
            Family::C => a[l - 1][l - 2] = -2,
            // α_1, α_2 long
            Family::F => a[1][2] = -2,
            // α_1 short
            Family::G => a[1][0] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars
            .next()
            .ok_or_else(|| Error::Input("empty Cartan type".into()))?;
        let family: Family = head.to_string().parse()?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Input(format!("cannot parse rank in `{s}`")))?;
        CartanType::new(family, rank)
    }
}

/// An integral weight given by its Dynkin labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(labels: Vec<i64>) -> Self {
        Weight(labels)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight `ω_i` for a 0-based index `i`.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn labels(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

/// Root datum of a simple type, immutable after construction.
#[derive(Clone, Debug)]
pub struct RootDatum {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    /// `d_i = B(α_i, α_i) / 2`.
    symmetrizers: Vec<BigRational>,
    /// Root-basis coordinates, sorted by height then lexicographically.
    positive_roots: Vec<Vec<i64>>,
    /// The same roots as Dynkin-label weights.
    positive_root_weights: Vec<Weight>,
    /// Simple coroots `α_i^∨ = 2α_i / B(α_i, α_i)` in root-basis coordinates.
    simple_coroots: Vec<Vec<BigRational>>,
    highest_root: Vec<i64>,
    rho: Weight,
    gram: Vec<Vec<BigRational>>,
    gram_scaled: Vec<Vec<i64>>,
    gram_denominator: i64,
    comarks: Vec<i64>,
    dual_coxeter: i64,
}

impl RootDatum {
    pub fn new(cartan_type: CartanType) -> Self {
        build_root_datum(cartan_type)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizers(&self) -> &[BigRational] {
        &self.symmetrizers
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn positive_root_weights(&self) -> &[Weight] {
        &self.positive_root_weights
    }

    pub fn simple_coroots(&self) -> &[Vec<BigRational>] {
        &self.simple_coroots
    }

    /// Highest root `α_max` in root-basis coordinates.
    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    /// Highest root as a Dynkin-label weight.
    pub fn highest_root_weight(&self) -> &Weight {
        self.positive_root_weights
            .last()
            .expect("every simple type has positive roots")
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// Gram matrix `B(ω_i, ω_j)`.
    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    /// `gram_denominator · B(ω_i, ω_j)`, all integral.
    pub fn gram_scaled(&self) -> &[Vec<i64>] {
        &self.gram_scaled
    }

    pub fn gram_denominator(&self) -> i64 {
        self.gram_denominator
    }

    /// Comarks `<ω_i, α_max^∨>`; the level of a weight is their pairing with it.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn weyl_order(&self) -> u128 {
        self.cartan_type.weyl_order()
    }

    pub fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: w.rank(),
            })
        }
    }

    /// `<λ, α_max^∨>`.
    pub fn level_of(&self, w: &Weight) -> i64 {
        w.0.iter().zip(&self.comarks).map(|(a, b)| a * b).sum()
    }

    /// Exact basic inner product `B(λ, μ)`.
    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Result<BigRational> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        Ok(BigRational::new(
            BigInt::from(self.inner_scaled(a.labels(), b.labels())),
            BigInt::from(self.gram_denominator),
        ))
    }

    /// `gram_denominator · B(a, b)` on raw label slices.
    pub fn inner_scaled(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            let row = &self.gram_scaled[i];
            let s: i64 = row.iter().zip(b).map(|(g, bj)| g * bj).sum();
            acc += ai * s;
        }
        acc
    }

    /// `B(a, b)` as a float, for the numeric oracles.
    pub fn inner_f64(&self, a: &[i64], b: &[i64]) -> f64 {
        self.inner_scaled(a, b) as f64 / self.gram_denominator as f64
    }

    /// Root-basis coordinates of a weight, `(A^T)^{-1}` applied to its labels.
    pub fn root_coordinates(&self, w: &Weight) -> Result<Vec<BigRational>> {
        self.check_rank(w)?;
        let l = self.rank();
        // λ = Σ c_i α_i with c_i = B(λ, ω_i) / d_i
        Ok((0..l)
            .map(|i| {
                let e = Weight::fundamental(l, i);
                let b = BigRational::new(
                    BigInt::from(self.inner_scaled(w.labels(), e.labels())),
                    BigInt::from(self.gram_denominator),
                );
                b / &self.symmetrizers[i]
            })
            .collect())
    }

    /// Simple reflection `s_i` on Dynkin labels.
    pub fn reflect(&self, w: &mut [i64], i: usize) {
        let c = w[i];
        if c == 0 {
            return;
        }
        for (x, a) in w.iter_mut().zip(&self.cartan[i]) {
            *x -= c * a;
        }
    }

    /// Brings `ξ` into the dominant chamber by simple reflections; returns the
    /// dominant weight and `det(w)` of the Weyl element used.
    pub fn reduce_to_dominant(&self, xi: &Weight) -> Result<(Weight, i8)> {
        self.check_rank(xi)?;
        let mut w = xi.0.clone();
        let mut sign = 1i8;
        while let Some(i) = w.iter().position(|&x| x < 0) {
            self.reflect(&mut w, i);
            sign = -sign;
        }
        Ok((Weight(w), sign))
    }

    /// Dominant reduction with wall detection: the sign is 0 exactly when `ξ`
    /// has a nontrivial stabilizer (lies on a reflection wall).
    pub fn dominant_reduce_shifted(&self, xi: &Weight) -> Result<(Weight, i8)> {
        let (d, sign) = self.reduce_to_dominant(xi)?;
        if d.0.contains(&0) {
            Ok((d, 0))
        } else {
            Ok((d, sign))
        }
    }

    /// `λ* = -w_0 λ`, the highest weight of the dual representation.
    pub fn dual_weight(&self, w: &Weight) -> Result<Weight> {
        Ok(self.reduce_to_dominant(&w.neg())?.0)
    }

    /// The Weyl orbit of a dominant weight.
    pub fn weyl_orbit(&self, dominant: &Weight) -> Result<Vec<Weight>> {
        self.check_rank(dominant)?;
        if !dominant.is_dominant() {
            return Err(Error::NotDominant(dominant.to_string()));
        }
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(dominant.0.clone());
        queue.push_back(dominant.0.clone());
        let mut out = Vec::new();
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank() {
                if w[i] > 0 {
                    let mut n = w.clone();
                    self.reflect(&mut n, i);
                    if seen.insert(n.clone()) {
                        queue.push_back(n);
                    }
                }
            }
            out.push(Weight(w));
        }
        out.sort();
        Ok(out)
    }

    /// Weyl orbit of a regular dominant weight with `det(w)` attached to each
    /// image. Each image corresponds to exactly one Weyl element.
    pub fn signed_regular_orbit(&self, regular: &Weight) -> Result<Vec<(Weight, i8)>> {
        self.check_rank(regular)?;
        if regular.0.iter().any(|&x| x <= 0) {
            return Err(Error::Input(format!("{regular} is not regular dominant")));
        }
        let mut seen: HashMap<Vec<i64>, i8> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(regular.0.clone(), 1);
        queue.push_back((regular.0.clone(), 1i8));
        while let Some((w, s)) = queue.pop_front() {
            for i in 0..self.rank() {
                let mut n = w.clone();
                self.reflect(&mut n, i);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(n.clone()) {
                    e.insert(-s);
                    queue.push_back((n, -s));
                }
            }
        }
        let mut out: Vec<(Weight, i8)> = seen.into_iter().map(|(w, s)| (Weight(w), s)).collect();
        out.sort();
        Ok(out)
    }

    /// Dimension of the irreducible representation with highest weight `λ`.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Result<u64> {
        self.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        let shifted = lambda.add(&self.rho);
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for alpha in &self.positive_root_weights {
            num *= self.inner_scaled(shifted.labels(), alpha.labels());
            den *= self.inner_scaled(self.rho.labels(), alpha.labels());
        }
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() {
            return Err(Error::Internal(format!(
                "Weyl dimension of {lambda} is not integral"
            )));
        }
        q.to_u64()
            .ok_or_else(|| Error::Resource(format!("dimension of {lambda} overflows u64")))
    }

    /// Dominant weights of `V_λ` with their multiplicities (Freudenthal).
    pub fn dominant_multiplicities(&self, lambda: &Weight) -> Result<BTreeMap<Weight, u64>> {
        self.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        // Dominant μ ≼ λ are reached from λ by subtracting positive roots
        // through dominant weights only; depth is the height of λ - μ.
        let heights: Vec<i64> = self.positive_roots.iter().map(|r| r.iter().sum()).collect();
        let mut depth: HashMap<Weight, i64> = HashMap::new();
        depth.insert(lambda.clone(), 0);
        let mut queue = VecDeque::from([lambda.clone()]);
        while let Some(mu) = queue.pop_front() {
            let d = depth[&mu];
            for (alpha, h) in self.positive_root_weights.iter().zip(&heights) {
                let nu = mu.sub(alpha);
                if nu.is_dominant() && !depth.contains_key(&nu) {
                    depth.insert(nu.clone(), d + h);
                    queue.push_back(nu);
                }
            }
        }
        let mut order: Vec<(i64, Weight)> = depth.into_iter().map(|(w, d)| (d, w)).collect();
        order.sort();

        let lr = lambda.add(&self.rho);
        let top = self.inner_scaled(lr.labels(), lr.labels());
        let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
        for (d, mu) in order {
            if d == 0 {
                mult.insert(mu, 1);
                continue;
            }
            let mut num: i128 = 0;
            for alpha in &self.positive_root_weights {
                let mut j = 1i64;
                loop {
                    let nu = mu.add(&alpha.scale(j));
                    let (dom, _) = self.reduce_to_dominant(&nu)?;
                    let m = match mult.get(&dom) {
                        Some(m) => *m,
                        None => break,
                    };
                    num += m as i128 * self.inner_scaled(nu.labels(), alpha.labels()) as i128;
                    j += 1;
                }
            }
            num *= 2;
            let mr = mu.add(&self.rho);
            let den = (top - self.inner_scaled(mr.labels(), mr.labels())) as i128;
            if den <= 0 || num % den != 0 {
                return Err(Error::Internal(format!(
                    "Freudenthal recursion failed at {mu} in V{lambda}"
                )));
            }
            let m = num / den;
            if m > 0 {
                mult.insert(mu, m as u64);
            }
        }
        Ok(mult)
    }

    /// Full weight diagram of `V_λ` with multiplicities.
    pub fn weight_multiplicities(&self, lambda: &Weight) -> Result<BTreeMap<Weight, u64>> {
        let dominant = self.dominant_multiplicities(lambda)?;
        let mut out = BTreeMap::new();
        for (mu, m) in dominant {
            for w in self.weyl_orbit(&mu)? {
                out.insert(w, m);
            }
        }
        Ok(out)
    }

    /// Leading principal minors of the Gram matrix, all positive for a
    /// positive-definite form.
    pub fn gram_leading_minors(&self) -> Vec<BigRational> {
        (1..=self.rank())
            .map(|n| {
                let m: Vec<Vec<BigRational>> =
                    self.gram[..n].iter().map(|row| row[..n].to_vec()).collect();
                determinant(m)
            })
            .collect()
    }
}

/// Builds the root datum for a validated Cartan type.
pub fn build_root_datum(cartan_type: CartanType) -> RootDatum {
    let l = cartan_type.rank;
    let cartan = cartan_type.cartan_matrix();

    // symmetrizers from a_ij d_j = a_ji d_i, propagated along the Dynkin diagram
    let mut raw_d: Vec<Option<BigRational>> = vec![None; l];
    raw_d[0] = Some(BigRational::one());
    let mut stack = vec![0usize];
    while let Some(j) = stack.pop() {
        for i in 0..l {
            if i != j && cartan[i][j] != 0 && raw_d[i].is_none() {
                let dj = raw_d[j].clone().expect("visited");
                raw_d[i] = Some(dj * BigRational::new(cartan[i][j].into(), cartan[j][i].into()));
                stack.push(i);
            }
        }
    }
    let raw_d: Vec<BigRational> = raw_d.into_iter().map(|d| d.expect("connected")).collect();

    let positive_roots = positive_roots_by_closure(&cartan);
    let highest_root = positive_roots.last().expect("nonempty").clone();

    // (α_i, α_j) = a_ij d_j in root coordinates, rescaled so (θ, θ) = 2
    let root_form = |x: &[i64], y: &[i64], d: &[BigRational]| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..l {
            for j in 0..l {
                let c = x[i] * y[j] * cartan[i][j];
                if c != 0 {
                    acc += BigRational::from(BigInt::from(c)) * &d[j];
                }
            }
        }
        acc
    };
    let theta_sq = root_form(&highest_root, &highest_root, &raw_d);
    let factor = BigRational::from(BigInt::from(2)) / theta_sq;
    let symmetrizers: Vec<BigRational> = raw_d.iter().map(|d| d * &factor).collect();

    // B(ω_i, ω_j) = (A^{-1})_{ji} d_i
    let cartan_q: Vec<Vec<BigRational>> = cartan
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
        .collect();
    let inv = invert(cartan_q);
    let gram: Vec<Vec<BigRational>> = (0..l)
        .map(|i| (0..l).map(|j| &inv[j][i] * &symmetrizers[i]).collect())
        .collect();

    let mut den = BigInt::one();
    for row in &gram {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    let gram_scaled: Vec<Vec<i64>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| (x * BigRational::from(den.clone())).to_integer().to_i64().expect("small"))
                .collect()
        })
        .collect();
    let gram_denominator = den.to_i64().expect("small");

    let to_weight = |root: &[i64]| -> Weight {
        Weight((0..l).map(|j| (0..l).map(|i| root[i] * cartan[i][j]).sum()).collect())
    };
    let positive_root_weights: Vec<Weight> = positive_roots.iter().map(|r| to_weight(r)).collect();
    let theta_w = to_weight(&highest_root);

    let simple_coroots: Vec<Vec<BigRational>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    if i == j {
                        BigRational::one() / &symmetrizers[i]
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();

    let scaled = |a: &[i64], b: &[i64]| -> i64 {
        let mut acc = 0;
        for i in 0..l {
            for j in 0..l {
                acc += a[i] * gram_scaled[i][j] * b[j];
            }
        }
        acc
    };
    let comarks: Vec<i64> = (0..l)
        .map(|i| {
            let e = Weight::fundamental(l, i);
            let v = scaled(e.labels(), theta_w.labels());
            debug_assert_eq!(v % gram_denominator, 0);
            v / gram_denominator
        })
        .collect();
    let rho = Weight(vec![1; l]);
    let b_rho_theta = scaled(rho.labels(), theta_w.labels());
    debug_assert_eq!(b_rho_theta % gram_denominator, 0);
    let dual_coxeter = 1 + b_rho_theta / gram_denominator;

    RootDatum {
        cartan_type,
        cartan,
        symmetrizers,
        positive_roots,
        positive_root_weights,
        simple_coroots,
        highest_root,
        rho,
        gram,
        gram_scaled,
        gram_denominator,
        comarks,
        dual_coxeter,
    }
}

/// Positive roots in root coordinates by closure under simple-root strings,
/// sorted by height and then lexicographically.
fn positive_roots_by_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let l = cartan.len();
    let mut all: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut e = vec![0; l];
            e[i] = 1;
            e
        })
        .collect();
    all.extend(layer.iter().cloned());
    let mut out = Vec::new();
    while !layer.is_empty() {
        layer.sort();
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..l {
                let pairing: i64 = (0..l).map(|j| beta[j] * cartan[j][i]).sum();
                let mut q = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        q += 1;
                    } else {
                        break;
                    }
                }
                let p = q - pairing;
                if p > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if all.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        out.append(&mut layer);
        layer = next;
    }
    out.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    out
}

fn invert(mut m: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("Cartan matrices are invertible");
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let a = &m[col][j] * &f;
                    m[r][j] -= a;
                    let b = &inv[col][j] * &f;
                    inv[r][j] -= b;
                }
            }
        }
    }
    inv
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                let (top, bottom) = m.split_at_mut(r);
                for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *dst -= src * &f;
                }
            }
        }
    }
    det
}

/// Renders a rational as `"p/q"` (or `"p"` when integral).
pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Input(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from(s.trim().parse::<BigInt>().map_err(|_| bad())?)),
    }
}
