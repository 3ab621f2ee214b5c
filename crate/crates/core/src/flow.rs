//! Action of transforms on complexified parameters `u = b + i·m`, the locus
//! where the Möbius factor is real, and the `(α, β)` solver producing a
//! transform together with its parameter quadruple.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{apply_fmt, exp_class, mukai_pairing_complex, ChernVector, FmtDescriptor};
use crate::error::{Error, Result};
use crate::exactnum::{int, ExactComplex, ExactScalar, Rational};
use crate::sl2cf::{factorize, GeneratorWord, SL2};
use crate::stability::ParamQuadruple;

/// `Φ · Z_{uℓ} = factor · Z_{vℓ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoebiusResult {
    pub v: ExactComplex,
    pub factor: ExactComplex,
}

fn scalar(n: &BigInt) -> ExactScalar {
    Rational::from_integer(n.clone()).into()
}

/// `v = (−z + w·u)/(x − y·u)` and `factor = scale · (x − y·u)^g`.
pub fn moebius_action(f: &FmtDescriptor, u: &ExactComplex, g: usize) -> Result<MoebiusResult> {
    let m = &f.matrix;
    let den = ExactComplex::from_real(scalar(&m.x)) - u.scale(&scalar(&m.y));
    if den.is_zero() {
        return Err(Error::Domain(format!(
            "u = {u} is the pole of the Möbius action"
        )));
    }
    let num = u.scale(&scalar(&m.w)) - ExactComplex::from_real(scalar(&m.z));
    let v = num.checked_div(&den)?;
    let factor = den.pow(g as u32).scale(&scalar(&BigInt::from(f.scale)));
    Ok(MoebiusResult { v, factor })
}

/// `ρ^(g)(F) · e^{uℓ}` and `factor · e^{vℓ}`, the class-level form of the action.
pub fn moebius_class_sides(
    f: &FmtDescriptor,
    u: &ExactComplex,
    g: usize,
) -> Result<(Vec<ExactComplex>, Vec<ExactComplex>)> {
    let result = moebius_action(f, u, g)?;
    let rho = f.cohomological_matrix(g)?;
    let source = exp_class(g, u);
    let lhs = (0..=g)
        .map(|i| {
            (0..=g).fold(ExactComplex::zero(), |acc, j| {
                acc + source[j].scale(&rho.rows[i][j])
            })
        })
        .collect();
    let rhs = exp_class(g, &result.v)
        .into_iter()
        .map(|c| &c * &result.factor)
        .collect();
    Ok((lhs, rhs))
}

/// `Z_{uℓ}(c)` and `factor · Z_{vℓ}(F(c))` for an untwisted class `c`, with
/// `Z_{uℓ}(c) = ⟨e^{uℓ}, c⟩`.
pub fn moebius_charge_sides(
    f: &FmtDescriptor,
    u: &ExactComplex,
    c: &ChernVector,
) -> Result<(ExactComplex, ExactComplex)> {
    let result = moebius_action(f, u, c.g)?;
    let lift = |v: &ChernVector| -> Vec<ExactComplex> {
        v.a.iter()
            .cloned()
            .map(ExactComplex::from_rational)
            .collect()
    };
    let lhs = mukai_pairing_complex(&exp_class(c.g, u), &lift(c))?;
    let image = apply_fmt(c, f)?;
    let rhs = &result.factor * &mukai_pairing_complex(&exp_class(c.g, &result.v), &lift(&image))?;
    Ok((lhs, rhs))
}

/// `e^{ilπ/3}` for `l ∈ {1, 2}`.
fn root_of_minus_one(l: u32) -> Result<ExactComplex> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let re = match l {
        1 => half.clone(),
        2 => -half.clone(),
        _ => {
            return Err(Error::Precondition(format!(
                "l = {l} leaves Q(√3, i); only l ∈ {{1, 2}} are exact"
            )))
        }
    };
    Ok(ExactComplex::new(
        re.into(),
        ExactScalar::sqrt3_multiple(half),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealFactorPoint {
    pub u: ExactComplex,
    pub v: ExactComplex,
    pub factor: ExactComplex,
}

/// `u = x/y + λ·e^{ilπ/g}` with `g = 3`; the factor `(x − yu)³ = y³λ³` is real.
pub fn real_factor_parameters(
    f: &FmtDescriptor,
    lambda: &Rational,
    g: usize,
    l: u32,
) -> Result<RealFactorPoint> {
    if g != 3 {
        return Err(Error::Precondition(format!(
            "real-factor locus is exact only for g = 3, got {g}"
        )));
    }
    if !lambda.is_positive() {
        return Err(Error::Precondition(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let m = &f.matrix;
    if m.y.is_zero() {
        return Err(Error::Domain("y = 0 has no real-factor locus".into()));
    }
    let x_over_y = Rational::new(m.x.clone(), m.y.clone());
    let u =
        ExactComplex::from_rational(x_over_y) + root_of_minus_one(l)?.scale(&lambda.clone().into());
    let MoebiusResult { v, factor } = moebius_action(f, &u, g)?;
    if !factor.is_real() {
        return Err(Error::Domain(format!("factor {factor} is not real")));
    }
    Ok(RealFactorPoint { u, v, factor })
}

/// Which closed form of `v` on the real-factor locus agrees with the Möbius value:
/// `−w/y − (1/(λy²))·e^{−ilπ/3}`, or the same with an extra factor `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormCheck {
    pub moebius_v: ExactComplex,
    pub single_lambda: ExactComplex,
    pub extra_lambda: ExactComplex,
    pub matches_single_lambda: bool,
    pub matches_extra_lambda: bool,
}

pub fn real_factor_closed_forms(
    f: &FmtDescriptor,
    lambda: &Rational,
    l: u32,
) -> Result<ClosedFormCheck> {
    let point = real_factor_parameters(f, lambda, 3, l)?;
    let m = &f.matrix;
    let y = Rational::from_integer(m.y.clone());
    let base = ExactComplex::from_rational(-Rational::new(m.w.clone(), m.y.clone()));
    let rotation = root_of_minus_one(l)?.conj();
    let single = &base - &rotation.scale(&(lambda * &y * &y).recip().into());
    let extra = &base - &rotation.scale(&(&y * &y).recip().into());
    Ok(ClosedFormCheck {
        matches_single_lambda: point.v == single,
        matches_extra_lambda: point.v == extra,
        moebius_v: point.v,
        single_lambda: single,
        extra_lambda: extra,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationSolution {
    pub quadruple: ParamQuadruple,
    pub word: GeneratorWord,
}

/// Finds `[[x, y], [z, w]] ∈ SL(2, Z)` with `y < 0` and `λ ∈ Q` such that
/// `α = √3λ/2`, `β = x/y + λ/2`, and factorizes the matrix into generators.
///
/// `(z, w)` is the solution of `xw − yz = 1` with `0 ≤ w < |y|`.
pub fn solve_polarization(alpha_coeff: &Rational, beta: &Rational) -> Result<PolarizationSolution> {
    if !alpha_coeff.is_positive() {
        return Err(Error::Precondition(format!(
            "alpha coefficient must be positive, got {alpha_coeff}"
        )));
    }
    let lambda = alpha_coeff * int(2);
    let ratio = beta - &lambda / int(2);
    // Rational keeps a positive denominator, so y = −denominator gives y < 0
    let x = -ratio.numer().clone();
    let y = -ratio.denom().clone();
    let modulus = y.abs();
    let w = if modulus.is_one() {
        BigInt::zero()
    } else {
        let egcd = x.extended_gcd(&modulus);
        egcd.x.mod_floor(&modulus)
    };
    let z = (&x * &w - BigInt::one()) / &y;
    let matrix = SL2::new(x, y, z, w)?;
    let quadruple = ParamQuadruple::new(lambda, &matrix)?;
    let word = factorize(&matrix);
    Ok(PolarizationSolution { quadruple, word })
}
