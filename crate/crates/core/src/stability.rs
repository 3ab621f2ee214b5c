//! Central charges, slopes and Bogomolov-Gieseker type checks on numerical
//! Chern data of a principally polarized abelian threefold.
//!
//! Polarizations are restricted to `ω = q√3·ℓ`, `B = b·ℓ` with `b, q ∈ Q`, so
//! every quantity below is an element of `Q(√3)` and every comparison is exact.
//! Intersection numbers use `∫ ℓ³ = 6`.
//!
//! These are checks on numerical data only. Whether an object with a given
//! Chern vector is actually tilt-stable is not decidable from the vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{
    antidiag_twists, apply_fmt, apply_fmt_antidiag, exp_class, twist_change, ChernVector,
    FmtDescriptor,
};
use crate::error::{Error, Result};
use crate::exactnum::{int, rational_str, ExactComplex, ExactScalar, Rational};
use crate::sl2cf::SL2;
use crate::symrep::binomial;

/// `∫_X ℓ³` for a principal polarization on a threefold.
const TOP_INTERSECTION: i64 = 6;

/// The pair `(B, ω) = (b·ℓ, q√3·ℓ)`, i.e. `u = b + i·q√3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StabilityParams {
    #[serde(with = "rational_str")]
    pub b: Rational,
    #[serde(with = "rational_str")]
    pub m_coeff: Rational,
}

impl<'de> Deserialize<'de> for StabilityParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "rational_str")]
            b: Rational,
            #[serde(with = "rational_str")]
            m_coeff: Rational,
        }
        let r = Raw::deserialize(d)?;
        StabilityParams::new(r.b, r.m_coeff).map_err(serde::de::Error::custom)
    }
}

impl StabilityParams {
    pub fn new(b: Rational, m_coeff: Rational) -> Result<Self> {
        if !m_coeff.is_positive() {
            return Err(Error::Precondition(format!(
                "m = ({m_coeff})√3 must be positive"
            )));
        }
        Ok(Self { b, m_coeff })
    }

    pub fn m(&self) -> ExactScalar {
        ExactScalar::sqrt3_multiple(self.m_coeff.clone())
    }

    pub fn u(&self) -> ExactComplex {
        ExactComplex::new(self.b.clone().into(), self.m())
    }

    /// `m² = 3q²`, always rational.
    pub fn m_squared(&self) -> Rational {
        int(3) * &self.m_coeff * &self.m_coeff
    }
}

/// A slope: either an element of `Q(√3)` or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "value", rename_all = "snake_case")]
pub enum SlopeValue {
    Finite(ExactScalar),
    PlusInfinity,
}

impl SlopeValue {
    pub fn finite(&self) -> Option<&ExactScalar> {
        match self {
            SlopeValue::Finite(v) => Some(v),
            SlopeValue::PlusInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SlopeValue::PlusInfinity)
    }
}

/// Outcome of an inequality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsStrict,
    HoldsEquality,
    Fails,
}

impl Verdict {
    pub fn holds(self) -> bool {
        !matches!(self, Verdict::Fails)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BgMode {
    /// `ch₃^B < (ω²/2)·ch₁^B`
    Weak,
    /// `ch₃^B ≤ (ω²/18)·ch₁^B`
    Strong,
}

fn require_threefold(v: &ChernVector) -> Result<()> {
    if v.g != 3 {
        return Err(Error::Precondition(format!(
            "threefold numerics need g = 3, got g = {}",
            v.g
        )));
    }
    Ok(())
}

/// `Z_{ω,B}(E) = −∫ e^{−B−iω} ch(E) = −Σ_i C(g,i) (−u)^{g−i} a_i` with `u = b + i·m`.
pub fn central_charge(v: &ChernVector, p: &StabilityParams) -> Result<ExactComplex> {
    v.expect_untwisted()?;
    let g = v.g;
    let minus_u = -p.u();
    let mut acc = ExactComplex::zero();
    for (i, ai) in v.a.iter().enumerate() {
        let c = Rational::from_integer(binomial(g as i64, i as i64)) * ai;
        acc += minus_u.pow((g - i) as u32).scale(&c.into());
    }
    Ok(-acc)
}

/// `ω² · ch₁^B(E)` as an intersection number: `6 · m² · (a_1 − b·a_0)`.
pub fn omega_sq_ch1(v: &ChernVector, b: &Rational, omega_sq: &Rational) -> Result<Rational> {
    v.expect_untwisted()?;
    require_threefold(v)?;
    Ok(int(TOP_INTERSECTION) * omega_sq * (&v.a[1] - b * &v.a[0]))
}

/// Twisted slope for an arbitrary rational `ω²` coefficient (`ω² = c·ℓ²`).
pub fn twisted_slope_with_omega_sq(
    v: &ChernVector,
    b: &Rational,
    omega_sq: &Rational,
) -> Result<SlopeValue> {
    let num = omega_sq_ch1(v, b, omega_sq)?;
    if v.a[0].is_zero() {
        return Ok(SlopeValue::PlusInfinity);
    }
    Ok(SlopeValue::Finite((num / &v.a[0]).into()))
}

/// `μ_{ω,B} = ω²ch₁^B / ch₀^B`, `+∞` on numerically torsion classes.
pub fn twisted_slope_mu(v: &ChernVector, p: &StabilityParams) -> Result<SlopeValue> {
    twisted_slope_with_omega_sq(v, &p.b, &p.m_squared())
}

/// `μ_q = a_1/a_0 − q`, the slope for `ω = ℓ/√6`, `B = qℓ`.
pub fn slope_mu_q(v: &ChernVector, q: &Rational) -> Result<SlopeValue> {
    v.expect_untwisted()?;
    if v.a[0].is_zero() {
        return Ok(SlopeValue::PlusInfinity);
    }
    Ok(SlopeValue::Finite((&v.a[1] / &v.a[0] - q).into()))
}

/// `ν_{ω,B} = Im Z / (ω² ch₁^B)`, `+∞` when the denominator vanishes.
pub fn tilt_slope_nu(v: &ChernVector, p: &StabilityParams) -> Result<SlopeValue> {
    let den = omega_sq_ch1(v, &p.b, &p.m_squared())?;
    if den.is_zero() {
        return Ok(SlopeValue::PlusInfinity);
    }
    let im = central_charge(v, p)?.im;
    Ok(SlopeValue::Finite(im.scale(&den.recip())))
}

fn compare(lhs: &ExactScalar, rhs: &ExactScalar, strict: bool) -> Verdict {
    match lhs.cmp(rhs) {
        std::cmp::Ordering::Less => Verdict::HoldsStrict,
        std::cmp::Ordering::Equal if !strict => Verdict::HoldsEquality,
        _ => Verdict::Fails,
    }
}

/// Bogomolov inequality `a_1² ≥ a_0·a_2` (the `ℓ`-basis form of
/// `(ch₁)²ℓ ≥ 2ch₀ch₂ℓ`). The discriminant is twist invariant, so any twist is accepted.
pub fn bogomolov_check(v: &ChernVector) -> Result<Verdict> {
    if v.g < 2 {
        return Err(Error::Precondition("Bogomolov check needs g >= 2".into()));
    }
    let lhs = &v.a[0] * &v.a[2];
    let rhs = &v.a[1] * &v.a[1];
    Ok(compare(&lhs.into(), &rhs.into(), false))
}

/// Discriminant zero in the rank-one cubic sense: `a_1² = a_0a_2` and `a_2² = a_1a_3`.
pub fn discriminant_zero(v: &ChernVector) -> Result<bool> {
    require_threefold(v)?;
    let a = &v.a;
    Ok(&a[1] * &a[1] == &a[0] * &a[2] && &a[2] * &a[2] == &a[1] * &a[3])
}

/// Both sides `(ch₃^B, c·ω²·ch₁^B)` of a B-G type inequality, as intersection numbers.
pub fn bg_sides(
    v: &ChernVector,
    p: &StabilityParams,
    mode: BgMode,
) -> Result<(Rational, Rational)> {
    v.expect_untwisted()?;
    require_threefold(v)?;
    let twisted = twist_change(v, &p.b);
    let ch3 = twisted.a[3].clone();
    // (ω²/2)·ch₁ = 3m²a₁ and (ω²/18)·ch₁ = m²a₁/3 after ∫ℓ³ = 6
    let factor = match mode {
        BgMode::Weak => Rational::from_integer(BigInt::from(TOP_INTERSECTION)) / int(2),
        BgMode::Strong => Rational::from_integer(BigInt::from(TOP_INTERSECTION)) / int(18),
    };
    let rhs = factor * p.m_squared() * &twisted.a[1];
    Ok((ch3, rhs))
}

pub fn bg_check(v: &ChernVector, p: &StabilityParams, mode: BgMode) -> Result<Verdict> {
    let (lhs, rhs) = bg_sides(v, p, mode)?;
    Ok(compare(&lhs.into(), &rhs.into(), mode == BgMode::Weak))
}

/// `(u³, u²v, uv², v³)` for `v/u = p + q` and `v/u = p − q` in lowest terms, `u > 0`.
pub fn semihomog_chern(p: &Rational, q: &Rational) -> Result<(ChernVector, ChernVector)> {
    if q.is_zero() {
        return Err(Error::Domain(
            "q = 0 collapses the semi-homogeneous pair".into(),
        ));
    }
    if q.is_negative() {
        return Err(Error::Precondition(format!("q must be positive, got {q}")));
    }
    let build = |ratio: Rational| -> ChernVector {
        // Rational keeps lowest terms with positive denominator
        let (v, u) = (
            Rational::from_integer(ratio.numer().clone()),
            Rational::from_integer(ratio.denom().clone()),
        );
        let a = vec![&u * &u * &u, &u * &u * &v, &u * &v * &v, &v * &v * &v];
        ChernVector::new(3, Rational::zero(), a).expect("four components")
    };
    Ok((build(p + q), build(p - q)))
}

/// Strong B-G verdicts for the semi-homogeneous pair at `(b, m) = (p, √3q)`:
/// the `+` vector, the `−` vector, and the `−` vector negated (its shift by one).
pub fn semihomog_strong_bg(p: &Rational, q: &Rational) -> Result<[Verdict; 3]> {
    let params = StabilityParams::new(p.clone(), q.clone())?;
    let (plus, minus) = semihomog_chern(p, q)?;
    Ok([
        bg_check(&plus, &params, BgMode::Strong)?,
        bg_check(&minus, &params, BgMode::Strong)?,
        bg_check(&minus.negate(), &params, BgMode::Strong)?,
    ])
}

/// The record `(λ; x, y, z, w; b, m, b′, m′)` attached to a transform with `y < 0`:
/// `b = x/y + λ/2`, `m = √3λ/2`, `b′ = −w/y − 1/(2λy²)`, `m′ = √3/(2λy²)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamQuadruple {
    #[serde(with = "rational_str")]
    pub lambda: Rational,
    #[serde(with = "crate::sl2cf::bigint_json")]
    pub x: BigInt,
    #[serde(with = "crate::sl2cf::bigint_json")]
    pub y: BigInt,
    #[serde(with = "crate::sl2cf::bigint_json")]
    pub z: BigInt,
    #[serde(with = "crate::sl2cf::bigint_json")]
    pub w: BigInt,
    #[serde(with = "rational_str")]
    pub b: Rational,
    #[serde(with = "rational_str")]
    pub m_coeff: Rational,
    #[serde(with = "rational_str")]
    pub b_prime: Rational,
    #[serde(with = "rational_str")]
    pub m_prime_coeff: Rational,
}

impl<'de> Deserialize<'de> for ParamQuadruple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "rational_str")]
            lambda: Rational,
            #[serde(with = "crate::sl2cf::bigint_json")]
            x: BigInt,
            #[serde(with = "crate::sl2cf::bigint_json")]
            y: BigInt,
            #[serde(with = "crate::sl2cf::bigint_json")]
            z: BigInt,
            #[serde(with = "crate::sl2cf::bigint_json")]
            w: BigInt,
        }
        // derived fields are recomputed and must agree when present
        let value = serde_json::Value::deserialize(d)?;
        let raw: Raw = serde_json::from_value(value.clone()).map_err(serde::de::Error::custom)?;
        let matrix = SL2::new(raw.x, raw.y, raw.z, raw.w).map_err(serde::de::Error::custom)?;
        let quad = ParamQuadruple::new(raw.lambda, &matrix).map_err(serde::de::Error::custom)?;
        let recomputed = serde_json::to_value(&quad).map_err(serde::de::Error::custom)?;
        for key in ["b", "m_coeff", "b_prime", "m_prime_coeff"] {
            if let Some(given) = value.get(key) {
                let parsed = given.as_str().map(crate::exactnum::parse_rational);
                let expected = recomputed[key]
                    .as_str()
                    .map(crate::exactnum::parse_rational);
                if parsed.is_none() || parsed != expected {
                    return Err(serde::de::Error::custom(format!(
                        "field {key} inconsistent with (lambda, x, y, z, w)"
                    )));
                }
            }
        }
        Ok(quad)
    }
}

impl ParamQuadruple {
    pub fn new(lambda: Rational, m: &SL2) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::Precondition(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !m.y.is_negative() {
            return Err(Error::Precondition(format!(
                "normalization needs y < 0, got y = {}",
                m.y
            )));
        }
        let (x_over_y, minus_w_over_y) = antidiag_twists(m)?;
        let y = Rational::from_integer(m.y.clone());
        let lambda_y2 = &lambda * &y * &y;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        Ok(Self {
            b: &x_over_y + &lambda * &half,
            m_coeff: &lambda * &half,
            b_prime: &minus_w_over_y - (&lambda_y2 * int(2)).recip(),
            m_prime_coeff: (&lambda_y2 * int(2)).recip(),
            lambda,
            x: m.x.clone(),
            y: m.y.clone(),
            z: m.z.clone(),
            w: m.w.clone(),
        })
    }

    pub fn matrix(&self) -> SL2 {
        SL2::new(
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
            self.w.clone(),
        )
        .expect("validated at construction")
    }

    pub fn transform(&self) -> FmtDescriptor {
        FmtDescriptor::transform(self.matrix())
    }

    /// `(b, m)`.
    pub fn source_params(&self) -> StabilityParams {
        StabilityParams {
            b: self.b.clone(),
            m_coeff: self.m_coeff.clone(),
        }
    }

    /// `(b′, m′)`.
    pub fn target_params(&self) -> StabilityParams {
        StabilityParams {
            b: self.b_prime.clone(),
            m_coeff: self.m_prime_coeff.clone(),
        }
    }

    /// `x/y`.
    pub fn source_twist(&self) -> Rational {
        Rational::new(self.x.clone(), self.y.clone())
    }

    /// `−w/y`.
    pub fn target_twist(&self) -> Rational {
        -Rational::new(self.w.clone(), self.y.clone())
    }

    /// `|λy|³`.
    pub fn transfer_factor(&self) -> Rational {
        let ly = (&self.lambda * Rational::from_integer(self.y.clone())).abs();
        &ly * &ly * &ly
    }

    fn lambda_y2(&self) -> Rational {
        let y = Rational::from_integer(self.y.clone());
        &self.lambda * &y * &y
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChargeSide {
    /// vector at twist `x/y`, charge at `(b, m)`
    Source,
    /// vector at twist `−w/y`, charge at `(b′, m′)`
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeIdentity {
    pub side: ChargeSide,
    /// `Im Z` computed from the untwisted vector.
    pub direct: ExactScalar,
    /// `Im Z` from the closed form in the twisted coordinates.
    pub closed_form: ExactScalar,
}

impl ChargeIdentity {
    pub fn holds(&self) -> bool {
        self.direct == self.closed_form
    }
}

/// Closed form of `Im Z` in the adapted twisted coordinates:
/// source side `(3√3λ/2)(a₂ − λa₁)`, target side `(3√3/(2λy²))(a₂ + a₁/(λy²))`.
pub fn im_charge_closed_form(
    a: &[Rational],
    quad: &ParamQuadruple,
    side: ChargeSide,
) -> ExactScalar {
    let three_halves = Rational::new(BigInt::from(3), BigInt::from(2));
    let coeff = match side {
        ChargeSide::Source => &three_halves * &quad.lambda * (&a[2] - &quad.lambda * &a[1]),
        ChargeSide::Target => {
            let r = quad.lambda_y2().recip();
            &three_halves * &r * (&a[2] + &r * &a[1])
        }
    };
    ExactScalar::sqrt3_multiple(coeff)
}

fn im_charge_direct(v: &ChernVector, params: &StabilityParams) -> Result<ExactScalar> {
    Ok(central_charge(&twist_change(v, &Rational::zero()), params)?.im)
}

/// Evaluates `Im Z` both directly and through the closed form; the side is chosen
/// from the vector's twist (`x/y` first, then `−w/y`).
pub fn im_charge_identity(v: &ChernVector, quad: &ParamQuadruple) -> Result<ChargeIdentity> {
    require_threefold(v)?;
    let side = if v.twist == quad.source_twist() {
        ChargeSide::Source
    } else if v.twist == quad.target_twist() {
        ChargeSide::Target
    } else {
        return Err(Error::TwistMismatch {
            expected: Box::new(quad.source_twist()),
            found: Box::new(v.twist.clone()),
        });
    };
    im_charge_identity_on(v, quad, side)
}

pub fn im_charge_identity_on(
    v: &ChernVector,
    quad: &ParamQuadruple,
    side: ChargeSide,
) -> Result<ChargeIdentity> {
    require_threefold(v)?;
    let (twist, params) = match side {
        ChargeSide::Source => (quad.source_twist(), quad.source_params()),
        ChargeSide::Target => (quad.target_twist(), quad.target_params()),
    };
    v.expect_twist(&twist)?;
    Ok(ChargeIdentity {
        side,
        direct: im_charge_direct(v, &params)?,
        closed_form: im_charge_closed_form(&v.a, quad, side),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferIdentity {
    /// `Im Z_{m′,b′}(Υ(E))`
    pub forward_lhs: ExactScalar,
    /// `−|λy|⁻³ · Im Z_{m,b}(E)`
    pub forward_rhs: ExactScalar,
    /// `Im Z_{m,b}(Υ̂[1](E))`
    pub companion_lhs: ExactScalar,
    /// `−|λy|³ · Im Z_{m′,b′}(E)`
    pub companion_rhs: ExactScalar,
}

impl TransferIdentity {
    pub fn holds(&self) -> bool {
        self.forward_lhs == self.forward_rhs && self.companion_lhs == self.companion_rhs
    }
}

/// Transfer of `Im Z` under the transform `Υ` with matrix `[[x, y], [z, w]]` and
/// under the shifted adjoint `Υ̂[1]` with matrix `[[−w, y], [z, −x]]`.
pub fn charge_transfer_identity(
    v: &ChernVector,
    quad: &ParamQuadruple,
) -> Result<TransferIdentity> {
    require_threefold(v)?;
    v.expect_twist(&quad.source_twist())?;
    let factor = quad.transfer_factor();
    let source = quad.source_params();
    let target = quad.target_params();

    let image = apply_fmt_antidiag(v, &quad.transform())?;
    let forward_lhs = im_charge_identity_on(&image, quad, ChargeSide::Target)?.direct;
    let forward_rhs = im_charge_direct(v, &source)?.scale(&-factor.recip());

    let untwisted = twist_change(v, &Rational::zero());
    let adjoint_image = apply_fmt(&untwisted, &quad.transform().adjoint())?.negate();
    let companion_lhs = central_charge(&adjoint_image, &source)?.im;
    let companion_rhs = central_charge(&untwisted, &target)?.im.scale(&-factor);

    Ok(TransferIdentity {
        forward_lhs,
        forward_rhs,
        companion_lhs,
        companion_rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferVerdict {
    Concluded,
    InconsistentInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub verdict: TransferVerdict,
    /// `ch^{−w/y}(Υ[1](E)) = (y³a₃, −yλa₁, a₁/y, −a₀/y³)`
    pub transformed: ChernVector,
    /// `ℓ²ch₁(F) ≥ −(1/λy²)·ℓ³ch₀(F)` on the transformed vector
    pub hypothesis_holds: bool,
    /// `λ²a₁ ≥ a₃`
    pub conclusion_holds: bool,
}

/// Pushes the zero-charge vector `(a₀, a₁, λa₁, a₃)` at twist `x/y` through `Υ[1]`,
/// applies the inequality `ℓ²ch₁(F) ≥ −(1/λy²)ℓ³ch₀(F)` there, and reports whether
/// `λ²a₁ ≥ a₃` follows.
///
/// When the transformed vector violates the hypothesis, the input cannot come from
/// an object for which the hypothesis is available, and the verdict says so.
pub fn strong_bg_transfer(
    a0: &Rational,
    a1: &Rational,
    a3: &Rational,
    quad: &ParamQuadruple,
) -> Result<TransferReport> {
    let a = vec![a0.clone(), a1.clone(), &quad.lambda * a1, a3.clone()];
    let v = ChernVector::new(3, quad.source_twist(), a)?;
    let transformed = apply_fmt_antidiag(&v, &quad.transform())?.negate();

    let six = int(TOP_INTERSECTION);
    let l2ch1 = &six * &transformed.a[1];
    let l3ch0 = &six * &transformed.a[0];
    let hypothesis_holds = l2ch1 >= -(quad.lambda_y2().recip() * l3ch0);
    let conclusion_holds = &quad.lambda * &quad.lambda * a1 >= *a3;
    let verdict = if hypothesis_holds {
        TransferVerdict::Concluded
    } else {
        TransferVerdict::InconsistentInput
    };
    Ok(TransferReport {
        verdict,
        transformed,
        hypothesis_holds,
        conclusion_holds,
    })
}

/// The arithmetic step `−yλa₁ + (1/λy²)·y³a₃ ≥ 0 ⟺ λ²a₁ ≥ a₃`, evaluated on both sides.
pub fn transfer_reduction(
    a1: &Rational,
    a3: &Rational,
    lambda: &Rational,
    y: &Rational,
) -> (bool, bool) {
    let lhs = -(y * lambda * a1) + (lambda * y * y).recip() * y * y * y * a3;
    (!lhs.is_negative(), lambda * lambda * a1 >= *a3)
}

/// One end of an interval in `R ∪ {±∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    NegInfinity,
    Finite(ExactScalar),
    PlusInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Endpoint,
    pub lo_closed: bool,
    pub hi: Endpoint,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Endpoint, lo_closed: bool, hi: Endpoint, hi_closed: bool) -> Result<Self> {
        let malformed = |why: &str| Err(Error::Precondition(format!("malformed interval: {why}")));
        match (&lo, &hi) {
            (Endpoint::PlusInfinity, _) => return malformed("lower end is +∞"),
            (_, Endpoint::NegInfinity) => return malformed("upper end is −∞"),
            (Endpoint::Finite(l), Endpoint::Finite(h)) if l > h => {
                return malformed("lower end exceeds upper end")
            }
            _ => {}
        }
        if matches!(lo, Endpoint::NegInfinity) && lo_closed {
            return malformed("−∞ cannot be a closed end");
        }
        Ok(Self {
            lo,
            lo_closed,
            hi,
            hi_closed,
        })
    }

    /// `(0, +∞]`
    pub fn positive_with_infinity() -> Self {
        Self::new(
            Endpoint::Finite(ExactScalar::zero()),
            false,
            Endpoint::PlusInfinity,
            true,
        )
        .expect("well formed")
    }

    /// `(−∞, 0]`
    pub fn non_positive() -> Self {
        Self::new(
            Endpoint::NegInfinity,
            false,
            Endpoint::Finite(ExactScalar::zero()),
            true,
        )
        .expect("well formed")
    }
}

/// Membership of a single slope in an interval, with exact comparisons.
pub fn interval_placement(s: &SlopeValue, interval: &Interval) -> bool {
    let value = match s {
        SlopeValue::PlusInfinity => {
            return matches!(interval.hi, Endpoint::PlusInfinity) && interval.hi_closed
        }
        SlopeValue::Finite(v) => v,
    };
    let above_lo = match &interval.lo {
        Endpoint::NegInfinity => true,
        Endpoint::Finite(l) => value > l || (interval.lo_closed && value == l),
        Endpoint::PlusInfinity => false,
    };
    let below_hi = match &interval.hi {
        Endpoint::PlusInfinity => true,
        Endpoint::Finite(h) => value < h || (interval.hi_closed && value == h),
        Endpoint::NegInfinity => false,
    };
    above_lo && below_hi
}

/// `gcd`-reduced integer pair `(v, u)` with `u > 0` and `v/u = q`.
pub fn lowest_terms(q: &Rational) -> (BigInt, BigInt) {
    let g = q.numer().gcd(q.denom());
    (q.numer() / &g, q.denom() / &g)
}

/// The class `e^{uℓ}` paired against `v`, the second route to the central charge.
pub fn central_charge_by_pairing(v: &ChernVector, p: &StabilityParams) -> Result<ExactComplex> {
    v.expect_untwisted()?;
    let lifted: Vec<ExactComplex> =
        v.a.iter()
            .cloned()
            .map(ExactComplex::from_rational)
            .collect();
    crate::chern::mukai_pairing_complex(&exp_class(v.g, &p.u()), &lifted)
}
