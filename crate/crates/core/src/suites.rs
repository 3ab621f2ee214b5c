//! Seeded batch checks of the exact identities, one case per index.
//!
//! Case `i` draws from a ChaCha stream selected by `(seed, i)`, so results do
//! not depend on evaluation order and cases run in parallel. Failures are
//! reported in case order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chern::{
    antidiag_normal_form, apply_fmt, fmt_compose, mukai_pairing, twist_conjugated_matrix,
    ChernVector, FmtDescriptor,
};
use crate::error::{Error, Result};
use crate::exactnum::{ExactComplex, ExactScalar, Rational};
use crate::flow::{moebius_action, moebius_charge_sides, moebius_class_sides, solve_polarization};
use crate::sl2cf::{
    cf_convergents, cf_evaluate, factorize, isometry_of_word, isometry_oracle, signed_isometry,
    GeneratorWord, SL2,
};
use crate::stability::{
    bg_check, bogomolov_check, central_charge, charge_transfer_identity, discriminant_zero,
    im_charge_identity_on, semihomog_chern, strong_bg_transfer, tilt_slope_nu, BgMode, ChargeSide,
    ParamQuadruple, SlopeValue, StabilityParams, TransferVerdict, Verdict,
};
use crate::symrep::{rep_matrix, rep_matrix_sl2, rep_oracle, Mat2};

/// Failure indices kept in a report.
const MAX_REPORTED_FAILURES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ImCharge,
    ChargeTransfer,
    Moebius,
    MukaiIsometry,
    Homomorphism,
    RepOracle,
    ContinuedFraction,
    Factorize,
    NormalForm,
    Semihomogeneous,
    StrongBgTransfer,
    Solver,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::ImCharge,
        Suite::ChargeTransfer,
        Suite::Moebius,
        Suite::MukaiIsometry,
        Suite::Homomorphism,
        Suite::RepOracle,
        Suite::ContinuedFraction,
        Suite::Factorize,
        Suite::NormalForm,
        Suite::Semihomogeneous,
        Suite::StrongBgTransfer,
        Suite::Solver,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ImCharge => "im-charge",
            Suite::ChargeTransfer => "charge-transfer",
            Suite::Moebius => "moebius",
            Suite::MukaiIsometry => "mukai-isometry",
            Suite::Homomorphism => "homomorphism",
            Suite::RepOracle => "rep-oracle",
            Suite::ContinuedFraction => "continued-fraction",
            Suite::Factorize => "factorize",
            Suite::NormalForm => "normal-form",
            Suite::Semihomogeneous => "semihomogeneous",
            Suite::StrongBgTransfer => "strong-bg-transfer",
            Suite::Solver => "solver",
        }
    }

    fn aliases(self) -> &'static [&'static str] {
        match self {
            Suite::ImCharge => &["prop43"],
            _ => &[],
        }
    }

    fn check(self, rng: &mut ChaCha8Rng) -> Result<bool> {
        match self {
            Suite::ImCharge => check_im_charge(rng),
            Suite::ChargeTransfer => check_charge_transfer(rng),
            Suite::Moebius => check_moebius(rng),
            Suite::MukaiIsometry => check_mukai_isometry(rng),
            Suite::Homomorphism => check_homomorphism(rng),
            Suite::RepOracle => check_rep_oracle(rng),
            Suite::ContinuedFraction => check_continued_fraction(rng),
            Suite::Factorize => check_factorize(rng),
            Suite::NormalForm => check_normal_form(rng),
            Suite::Semihomogeneous => check_semihomogeneous(rng),
            Suite::StrongBgTransfer => check_strong_bg_transfer(rng),
            Suite::Solver => check_solver(rng),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s || suite.aliases().contains(&s))
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    /// First failing case indices, ascending.
    pub failures: Vec<u64>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// RNG for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `cases` cases of `suite`. A case that raises an error counts as failed.
pub fn run_suite(suite: Suite, cases: u64, seed: u64) -> SuiteReport {
    let outcomes: Vec<bool> = (0..cases)
        .into_par_iter()
        .map(|i| suite.check(&mut case_rng(seed, i)).unwrap_or(false))
        .collect();
    let failures: Vec<u64> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i as u64)
        .collect();
    SuiteReport {
        suite,
        seed,
        cases,
        passed: cases - failures.len() as u64,
        failed: failures.len() as u64,
        failures: failures.into_iter().take(MAX_REPORTED_FAILURES).collect(),
    }
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(
        BigInt::from(rng.gen_range(-12i64..=12)),
        BigInt::from(rng.gen_range(1i64..=6)),
    )
}

pub fn random_positive_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(
        BigInt::from(rng.gen_range(1i64..=12)),
        BigInt::from(rng.gen_range(1i64..=6)),
    )
}

pub fn random_scalar(rng: &mut impl Rng) -> ExactScalar {
    ExactScalar::new(random_rational(rng), random_rational(rng))
}

/// Product of up to 12 factors drawn from `[[1,1],[0,1]]` and `[[0,−1],[1,0]]`.
pub fn random_sl2(rng: &mut impl Rng) -> SL2 {
    let t = SL2::from_i64(1, 1, 0, 1).expect("unipotent");
    let s = SL2::poincare();
    let len = rng.gen_range(0..=12);
    (0..len).fold(SL2::identity(), |acc, _| {
        if rng.gen_bool(0.5) {
            &acc * &t
        } else {
            &acc * &s
        }
    })
}

fn random_sl2_with_y(rng: &mut impl Rng) -> SL2 {
    loop {
        let m = random_sl2(rng);
        if !m.y.is_zero() {
            return m;
        }
    }
}

/// A quadruple with random `λ > 0` and a random transform normalized to `y < 0`.
pub fn random_quadruple(rng: &mut impl Rng) -> ParamQuadruple {
    let m = random_sl2_with_y(rng);
    let m = if m.y.is_positive() { m.negate() } else { m };
    ParamQuadruple::new(random_positive_rational(rng), &m).expect("y < 0 and λ > 0")
}

fn random_vector(rng: &mut impl Rng, g: usize, twist: Rational) -> ChernVector {
    let a = (0..=g).map(|_| random_rational(rng)).collect();
    ChernVector::new(g, twist, a).expect("g in range")
}

fn random_params(rng: &mut impl Rng) -> StabilityParams {
    StabilityParams::new(random_rational(rng), random_positive_rational(rng)).expect("positive m")
}

fn random_upper_half_plane(rng: &mut impl Rng) -> ExactComplex {
    random_params(rng).u()
}

fn check_im_charge(rng: &mut ChaCha8Rng) -> Result<bool> {
    let quad = random_quadruple(rng);
    let source = random_vector(rng, 3, quad.source_twist());
    let target = random_vector(rng, 3, quad.target_twist());
    Ok(
        im_charge_identity_on(&source, &quad, ChargeSide::Source)?.holds()
            && im_charge_identity_on(&target, &quad, ChargeSide::Target)?.holds(),
    )
}

fn check_charge_transfer(rng: &mut ChaCha8Rng) -> Result<bool> {
    let quad = random_quadruple(rng);
    let v = random_vector(rng, 3, quad.source_twist());
    Ok(charge_transfer_identity(&v, &quad)?.holds())
}

/// Central charge `Z_u(E)` against `factor · Z_v(Φ E)`, the class identity
/// `ρ(F) e^{uℓ} = factor · e^{vℓ}`, an independent recovery of `v` and the
/// factor from `ρ(F) e^{uℓ}`, and the cocycle law under composition.
fn check_moebius(rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = rng.gen_range(1..=3usize);
    let f = FmtDescriptor::transform(random_sl2(rng));
    let f2 = FmtDescriptor::transform(random_sl2(rng));
    let u = random_upper_half_plane(rng);
    let result = moebius_action(&f, &u, g)?;

    let e = random_vector(rng, g, Rational::zero());
    let (lhs_charge, rhs_charge) = moebius_charge_sides(&f, &u, &e)?;

    let (lhs, rhs) = moebius_class_sides(&f, &u, g)?;
    let recovered_factor = lhs[0].clone();
    let recovered_v = lhs[1].checked_div(&lhs[0])?;

    let first = moebius_action(&f2, &result.v, g)?;
    let composed = moebius_action(&fmt_compose(&f2, &f), &u, g)?;
    let cocycle = composed.v == first.v && composed.factor == &result.factor * &first.factor;

    Ok(lhs_charge == rhs_charge
        && lhs == rhs
        && recovered_factor == result.factor
        && recovered_v == result.v
        && cocycle)
}

fn check_mukai_isometry(rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = rng.gen_range(1..=3usize);
    let f = FmtDescriptor::transform(random_sl2(rng));
    let v = random_vector(rng, g, Rational::zero());
    let w = random_vector(rng, g, Rational::zero());
    Ok(mukai_pairing(&apply_fmt(&v, &f)?, &apply_fmt(&w, &f)?)? == mukai_pairing(&v, &w)?)
}

fn check_homomorphism(rng: &mut ChaCha8Rng) -> Result<bool> {
    let k = rng.gen_range(1..=4usize);
    let a = random_sl2(rng);
    let b = random_sl2(rng);
    Ok(rep_matrix_sl2(k, &(&a * &b))? == &rep_matrix_sl2(k, &a)? * &rep_matrix_sl2(k, &b)?)
}

/// Both constructions on a random matrix over `Q(√3)`, not necessarily invertible.
fn check_rep_oracle(rng: &mut ChaCha8Rng) -> Result<bool> {
    let k = rng.gen_range(1..=6usize);
    let m = Mat2::new(
        random_scalar(rng),
        random_scalar(rng),
        random_scalar(rng),
        random_scalar(rng),
    );
    Ok(rep_matrix(k, &m)? == rep_oracle(k, &m)?)
}

/// `s_n/s_{n−1} = [m_n, …, m_1]`, `t_n/t_{n−1} = [m_n, …, m_2]`, `s_n/t_n = [m_1, …, m_n]`,
/// each checked when the continued fraction is defined.
pub fn quotient_identities_hold(m: &[BigInt]) -> bool {
    let c = cf_convergents(m);
    let n = c.n();
    let agrees = |word: Vec<BigInt>, num: &BigInt, den: &BigInt| match cf_evaluate(&word) {
        Err(_) => true,
        Ok(value) => !den.is_zero() && value == Rational::new(num.clone(), den.clone()),
    };
    let reversed: Vec<BigInt> = m.iter().rev().cloned().collect();
    let s_ok = agrees(reversed.clone(), &c.s[n], &c.s[n - 1]);
    let t_ok = n < 2 || agrees(reversed[..n - 1].to_vec(), &c.t[n], &c.t[n - 1]);
    let st_ok = agrees(m.to_vec(), &c.s[n], &c.t[n]);
    s_ok && t_ok && st_ok
}

/// Determinant identity at every index.
pub fn determinant_identities_hold(m: &[BigInt]) -> bool {
    let c = cf_convergents(m);
    (1..=c.n()).all(|k| {
        c.determinant(k)
            == if k % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            }
    })
}

fn check_continued_fraction(rng: &mut ChaCha8Rng) -> Result<bool> {
    let n = rng.gen_range(1..=6usize);
    let m: Vec<BigInt> = (0..n)
        .map(|_| BigInt::from(rng.gen_range(-4i64..=4)))
        .collect();
    let word = GeneratorWord::new(m.clone(), 0)?;
    Ok(determinant_identities_hold(&m)
        && quotient_identities_hold(&m)
        && isometry_of_word(&word) == isometry_oracle(&word))
}

fn check_factorize(rng: &mut ChaCha8Rng) -> Result<bool> {
    let m = random_sl2(rng);
    Ok(signed_isometry(&factorize(&m)) == m)
}

fn check_normal_form(rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = rng.gen_range(2..=3usize);
    let m = random_sl2_with_y(rng);
    let y = Rational::from_integer(m.y.clone());
    Ok(twist_conjugated_matrix(g, &m)? == antidiag_normal_form(g, &y)?)
}

/// Bogomolov equality, vanishing discriminant, `ν = 0` and strong B-G at
/// `(b, m) = (p, √3q)` for both semi-homogeneous classes.
fn check_semihomogeneous(rng: &mut ChaCha8Rng) -> Result<bool> {
    let p = random_rational(rng);
    let q = random_positive_rational(rng);
    let params = StabilityParams::new(p.clone(), q.clone())?;
    let (plus, minus) = semihomog_chern(&p, &q)?;
    for v in [&plus, &minus] {
        let ok = bogomolov_check(v)? == Verdict::HoldsEquality
            && discriminant_zero(v)?
            && central_charge(v, &params)?.im.is_zero()
            && tilt_slope_nu(v, &params)? == SlopeValue::Finite(ExactScalar::zero())
            && bg_check(v, &params, BgMode::Strong)?.holds();
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The verdict must be `Concluded` exactly when `λ²a₁ ≥ a₃`; admissible inputs
/// (those satisfying the transferred inequality) must conclude.
fn check_strong_bg_transfer(rng: &mut ChaCha8Rng) -> Result<bool> {
    let quad = random_quadruple(rng);
    let a0 = random_rational(rng);
    let a1 = random_rational(rng);
    let a3 = if rng.gen_bool(0.5) {
        // admissible by construction, sometimes on the boundary
        let slack = if rng.gen_bool(0.25) {
            Rational::zero()
        } else {
            random_positive_rational(rng)
        };
        &quad.lambda * &quad.lambda * &a1 - slack
    } else {
        random_rational(rng)
    };
    let report = strong_bg_transfer(&a0, &a1, &a3, &quad)?;
    Ok(report.hypothesis_holds == report.conclusion_holds
        && (report.verdict == TransferVerdict::Concluded) == report.conclusion_holds)
}

fn check_solver(rng: &mut ChaCha8Rng) -> Result<bool> {
    let alpha = random_positive_rational(rng);
    let beta = random_rational(rng);
    let solution = solve_polarization(&alpha, &beta)?;
    let q = &solution.quadruple;
    let y = Rational::from_integer(q.y.clone());
    let two = Rational::from_integer(BigInt::from(2));
    let matrix = q.matrix();
    let word_matrix = signed_isometry(&solution.word);
    Ok(q.x.gcd(&q.y).is_one()
        && q.y.is_negative()
        && matrix.det().is_one()
        && q.lambda == &alpha * &two
        && q.source_twist() + &q.lambda / &two == beta
        && &q.b - q.source_twist() == &q.lambda / &two
        && &q.b_prime - q.target_twist() == -(&q.lambda * &y * &y * &two).recip()
        && Rational::from_integer(BigInt::from(3)) * &q.m_coeff * &q.m_prime_coeff
            == Rational::from_integer(BigInt::from(3))
                / (Rational::from_integer(BigInt::from(4)) * &y * &y)
        && word_matrix == matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
            let json = serde_json::to_string(&suite).unwrap();
            assert_eq!(json, format!("\"{}\"", suite.name()));
        }
        assert_eq!("prop43".parse::<Suite>().unwrap(), Suite::ImCharge);
        assert!(matches!("nope".parse::<Suite>(), Err(Error::Parse(_))));
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run_suite(Suite::ImCharge, 20, 7);
        let b = run_suite(Suite::ImCharge, 20, 7);
        assert_eq!(a, b);
        assert!(a.all_passed());
    }

    #[test]
    fn case_streams_differ() {
        let x: u64 = case_rng(1, 0).gen();
        let y: u64 = case_rng(1, 1).gen();
        assert_ne!(x, y);
    }

    #[test]
    fn every_suite_passes_small_batches() {
        for suite in Suite::ALL {
            let report = run_suite(suite, 40, 11);
            assert!(report.all_passed(), "{report:?}");
        }
    }

    #[test]
    fn random_sl2_is_unimodular() {
        let mut rng = case_rng(3, 0);
        for _ in 0..100 {
            assert!(random_sl2(&mut rng).det().is_one());
        }
    }

    #[test]
    fn quotient_identity_examples() {
        let w = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(quotient_identities_hold(&w(&[2, 3])));
        assert!(quotient_identities_hold(&w(&[1, 1, -1])));
        assert!(determinant_identities_hold(&w(&[0, 0, 4, -2])));
    }
}
