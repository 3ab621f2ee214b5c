//! `SL(2,Z)` isometry data, continued-fraction convergents, and the
//! factorization of an `SL(2,Z)` matrix into a generator word.
//!
//! A generator word `m = (m_1, …, m_n)` stands for the composite
//! `Φ ∘ L^{(−1)^{n+1} m_n} ∘ Φ ∘ ⋯ ∘ L^{−m_2} ∘ Φ ∘ L^{m_1} ∘ Φ`, where `Φ` is the
//! Poincaré transform and `L^k` is tensoring by the `k`-th power of the
//! principal polarization. Its isometry is read off the convergents of `m`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Serde adapter: a JSON integer when it fits in `i64`, a decimal string otherwise.
pub mod bigint_json {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match n.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Text(t) => t.trim().parse().map_err(serde::de::Error::custom),
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &[BigInt],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            #[derive(Serialize)]
            struct Item<'a>(#[serde(with = "super")] &'a BigInt);
            s.collect_seq(v.iter().map(Item))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<BigInt>, D::Error> {
            #[derive(Deserialize)]
            struct Item(#[serde(with = "super")] BigInt);
            Ok(Vec::<Item>::deserialize(d)?
                .into_iter()
                .map(|i| i.0)
                .collect())
        }
    }
}

/// The integer matrix `[[x, y], [z, w]]` with `xw − yz = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SL2 {
    #[serde(with = "bigint_json")]
    pub x: BigInt,
    #[serde(with = "bigint_json")]
    pub y: BigInt,
    #[serde(with = "bigint_json")]
    pub z: BigInt,
    #[serde(with = "bigint_json")]
    pub w: BigInt,
}

impl<'de> Deserialize<'de> for SL2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "bigint_json")]
            x: BigInt,
            #[serde(with = "bigint_json")]
            y: BigInt,
            #[serde(with = "bigint_json")]
            z: BigInt,
            #[serde(with = "bigint_json")]
            w: BigInt,
        }
        let r = Raw::deserialize(d)?;
        SL2::new(r.x, r.y, r.z, r.w).map_err(serde::de::Error::custom)
    }
}

impl SL2 {
    pub fn new(x: BigInt, y: BigInt, z: BigInt, w: BigInt) -> Result<Self> {
        if &x * &w - &y * &z != BigInt::one() {
            return Err(Error::Domain(format!(
                "matrix [[{x}, {y}], [{z}, {w}]] does not have determinant 1"
            )));
        }
        Ok(Self { x, y, z, w })
    }

    pub fn from_i64(x: i64, y: i64, z: i64, w: i64) -> Result<Self> {
        Self::new(x.into(), y.into(), z.into(), w.into())
    }

    // Internal constructor for products of matrices already known to be unimodular.
    fn raw(x: BigInt, y: BigInt, z: BigInt, w: BigInt) -> Self {
        debug_assert_eq!(&x * &w - &y * &z, BigInt::one());
        Self { x, y, z, w }
    }

    pub fn identity() -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn minus_identity() -> Self {
        Self::identity().negate()
    }

    /// Isometry of the Poincaré transform `Φ`: `[[0, −1], [1, 0]]`.
    pub fn poincare() -> Self {
        Self::raw(
            BigInt::zero(),
            -BigInt::one(),
            BigInt::one(),
            BigInt::zero(),
        )
    }

    /// Isometry of `(−) ⊗ L^k`: `[[1, 0], [−k, 1]]`.
    pub fn line_twist(k: &BigInt) -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), -k, BigInt::one())
    }

    pub fn det(&self) -> BigInt {
        &self.x * &self.w - &self.y * &self.z
    }

    pub fn negate(&self) -> Self {
        Self::raw(-&self.x, -&self.y, -&self.z, -&self.w)
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.w.clone(), -&self.y, -&self.z, self.x.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| &acc * self)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.x, &self.y, &self.z, &self.w]
    }
}

impl Mul<&SL2> for &SL2 {
    type Output = SL2;
    fn mul(self, b: &SL2) -> SL2 {
        SL2::raw(
            &self.x * &b.x + &self.y * &b.z,
            &self.x * &b.y + &self.y * &b.w,
            &self.z * &b.x + &self.w * &b.z,
            &self.z * &b.y + &self.w * &b.w,
        )
    }
}

impl Mul for SL2 {
    type Output = SL2;
    fn mul(self, b: SL2) -> SL2 {
        &self * &b
    }
}

impl fmt::Display for SL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.x, self.y, self.z, self.w)
    }
}

/// A word `(m_1, …, m_n)` together with the parity of the shift `[p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorWord {
    #[serde(with = "bigint_json::vec")]
    pub m: Vec<BigInt>,
    pub shift_parity: u8,
}

impl<'de> Deserialize<'de> for GeneratorWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "bigint_json::vec")]
            m: Vec<BigInt>,
            #[serde(default)]
            shift_parity: u8,
        }
        let r = Raw::deserialize(d)?;
        GeneratorWord::new(r.m, r.shift_parity).map_err(serde::de::Error::custom)
    }
}

impl GeneratorWord {
    pub fn new(m: Vec<BigInt>, shift_parity: u8) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Precondition(
                "generator word must have at least one entry".into(),
            ));
        }
        if shift_parity > 1 {
            return Err(Error::Precondition(format!(
                "shift parity must be 0 or 1, got {shift_parity}"
            )));
        }
        Ok(Self { m, shift_parity })
    }

    pub fn from_i64(m: &[i64]) -> Result<Self> {
        Self::new(m.iter().map(|&v| BigInt::from(v)).collect(), 0)
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }
}

/// Convergent numerators `s_0..s_n` and denominators `t_0..t_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergents {
    #[serde(with = "bigint_json::vec")]
    pub s: Vec<BigInt>,
    #[serde(with = "bigint_json::vec")]
    pub t: Vec<BigInt>,
}

impl Convergents {
    pub fn n(&self) -> usize {
        self.s.len() - 1
    }

    /// `s_k t_{k−1} − s_{k−1} t_k`, which equals `(−1)^k`.
    pub fn determinant(&self, k: usize) -> BigInt {
        &self.s[k] * &self.t[k - 1] - &self.s[k - 1] * &self.t[k]
    }
}

pub fn cf_convergents(word: &[BigInt]) -> Convergents {
    let n = word.len();
    let mut s = Vec::with_capacity(n + 1);
    let mut t = Vec::with_capacity(n + 1);
    s.push(BigInt::one());
    t.push(BigInt::zero());
    if let Some(m1) = word.first() {
        s.push(m1.clone());
        t.push(BigInt::one());
    }
    for k in 2..=n {
        let mk = &word[k - 1];
        s.push(mk * &s[k - 1] + &s[k - 2]);
        t.push(mk * &t[k - 1] + &t[k - 2]);
    }
    Convergents { s, t }
}

/// Evaluates `m_1 + 1/(m_2 + 1/(⋯ + 1/m_n))` from the innermost term outwards.
pub fn cf_evaluate(word: &[BigInt]) -> Result<Rational> {
    let (last, rest) = word
        .split_last()
        .ok_or_else(|| Error::Precondition("empty continued fraction".into()))?;
    let mut value = Rational::from_integer(last.clone());
    for (pos, mk) in rest.iter().enumerate().rev() {
        if value.is_zero() {
            return Err(Error::UndefinedContinuedFraction(pos + 1));
        }
        value = Rational::from_integer(mk.clone()) + value.recip();
    }
    Ok(value)
}

fn parity_sign(e: usize) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Closed-form isometry of a generator word:
/// `(−1)^{n(n+1)/2} [[(−1)^{n+1} t_n, (−1)^{n+1} s_n], [t_{n−1}, s_{n−1}]]`.
///
/// The shift parity is ignored here; callers apply `(−1)^{shift_parity}` themselves.
pub fn isometry_of_word(word: &GeneratorWord) -> SL2 {
    let c = cf_convergents(&word.m);
    let n = c.n();
    let outer = parity_sign(n * (n + 1) / 2);
    let inner = &outer * parity_sign(n + 1);
    SL2::raw(
        &inner * &c.t[n],
        &inner * &c.s[n],
        &outer * &c.t[n - 1],
        &outer * &c.s[n - 1],
    )
}

/// Isometry of a generator word by multiplying out the generator matrices in
/// composition order, `f_Φ · f_L^{±m_n} · f_Φ ⋯ f_L^{m_1} · f_Φ`.
pub fn isometry_oracle(word: &GeneratorWord) -> SL2 {
    let po = SL2::poincare();
    let mut acc = po.clone();
    for (i, mi) in word.m.iter().enumerate().rev() {
        // L^{(−1)^{k+1} m_k} with k = i + 1
        let exp = if i % 2 == 0 { mi.clone() } else { -mi };
        acc = &(&acc * &SL2::line_twist(&exp)) * &po;
    }
    acc
}

/// Isometry including the sign contributed by the shift parity.
pub fn signed_isometry(word: &GeneratorWord) -> SL2 {
    let f = isometry_of_word(word);
    if word.shift_parity == 1 {
        f.negate()
    } else {
        f
    }
}

// Integer 2×2 matrix with determinant ±1, used only inside the factorization.
#[derive(Clone, Debug)]
struct Unimodular([BigInt; 4]);

/// Writes `A = δ · K(a_1) ⋯ K(a_j)` with `K(a) = [[a, 1], [1, 0]]` and `δ = ±1`.
///
/// The quotients come from the floor-division Euclid chain on the first column.
fn decompose_continuant(mut a: Unimodular) -> (Vec<BigInt>, bool) {
    let mut quotients = Vec::new();
    while !a.0[2].is_zero() {
        let q = a.0[0].div_floor(&a.0[2]);
        let [a00, a01, a10, a11] = a.0;
        a = Unimodular([a10.clone(), a11.clone(), a00 - &q * &a10, a01 - &q * &a11]);
        quotients.push(q);
    }
    let [p, r, _, s] = a.0;
    let negative = p.is_negative();
    let pr = if negative { -r } else { r };
    if p == s {
        // δ·[[1, pr], [0, 1]] = δ·K(pr)·K(0); the identity itself needs no tail
        if !pr.is_zero() || quotients.is_empty() {
            quotients.push(pr);
            quotients.push(BigInt::zero());
        }
    } else {
        // δ·[[1, pr], [0, −1]] = δ·K(1 − pr)·K(−1)·K(1)
        quotients.push(BigInt::one() - pr);
        quotients.push(-BigInt::one());
        quotients.push(BigInt::one());
    }
    (quotients, negative)
}

/// Factors `M` as `(−1)^{shift_parity} · isometry_of_word(word)`.
///
/// The word is obtained from the Euclid chain on `(s_n, s_{n−1})` read off `M`,
/// so its entries appear in reverse order of the quotients. Both parities of the
/// word length are tried and the shorter result is kept.
pub fn factorize(m: &SL2) -> GeneratorWord {
    let mut best: Option<GeneratorWord> = None;
    for odd in [true, false] {
        // N = D·M·S with D = diag((−1)^{n+1}, 1), S = [[0, 1], [1, 0]]
        let d = if odd { BigInt::one() } else { -BigInt::one() };
        let n0 = Unimodular([&d * &m.y, &d * &m.x, m.w.clone(), m.z.clone()]);
        let (quotients, negative) = decompose_continuant(n0);
        let n = quotients.len();
        debug_assert_eq!(n % 2 == 1, odd);
        let sigma_negative = (n * (n + 1) / 2) % 2 == 1;
        let shift_parity = u8::from(negative != sigma_negative);
        let word = GeneratorWord {
            m: quotients.into_iter().rev().collect(),
            shift_parity,
        };
        let better = match &best {
            None => true,
            Some(b) => (word.len(), word.shift_parity) < (b.len(), b.shift_parity),
        };
        if better {
            best = Some(word);
        }
    }
    best.expect("both parities produce a word")
}
