//! Chern vectors in the `ℓ^k/k!` basis and the cohomological action of
//! Fourier-Mukai transforms on them.
//!
//! A vector `(a_0, …, a_g)` stands for `Σ a_k ℓ^k/k!`. Each vector carries the
//! twist `b` it is expressed in (`ch^b = e^{−bℓ}·ch`); operations state which
//! twist they expect and reject anything else.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, rational_str, ExactComplex, ExactScalar, Rational};
use crate::sl2cf::SL2;
use crate::symrep::{binomial, rep_matrix, rep_matrix_sl2, Mat2, RepMatrix};

pub const MAX_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChernVector {
    pub g: usize,
    #[serde(with = "rational_str")]
    pub twist: Rational,
    #[serde(with = "rational_str::vec")]
    pub a: Vec<Rational>,
}

impl<'de> Deserialize<'de> for ChernVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            g: usize,
            #[serde(with = "rational_str", default = "Rational::zero")]
            twist: Rational,
            #[serde(with = "rational_str::vec")]
            a: Vec<Rational>,
        }
        let r = Raw::deserialize(d)?;
        ChernVector::new(r.g, r.twist, r.a).map_err(serde::de::Error::custom)
    }
}

impl ChernVector {
    pub fn new(g: usize, twist: Rational, a: Vec<Rational>) -> Result<Self> {
        if g == 0 || g > MAX_DIM {
            return Err(Error::Precondition(format!(
                "dimension g = {g} not in 1..={MAX_DIM}"
            )));
        }
        if a.len() != g + 1 {
            return Err(Error::Precondition(format!(
                "dimension {g} needs {} components, got {}",
                g + 1,
                a.len()
            )));
        }
        Ok(Self { g, twist, a })
    }

    /// Untwisted vector.
    pub fn untwisted(a: Vec<Rational>) -> Result<Self> {
        let g = a.len().saturating_sub(1);
        Self::new(g, Rational::zero(), a)
    }

    pub fn from_i64(twist: Rational, a: &[i64]) -> Result<Self> {
        let g = a.len().saturating_sub(1);
        Self::new(g, twist, a.iter().map(|&v| int(v)).collect())
    }

    pub fn expect_twist(&self, twist: &Rational) -> Result<()> {
        if &self.twist != twist {
            return Err(Error::TwistMismatch {
                expected: Box::new(twist.clone()),
                found: Box::new(self.twist.clone()),
            });
        }
        Ok(())
    }

    pub fn expect_untwisted(&self) -> Result<()> {
        self.expect_twist(&Rational::zero())
    }

    fn expect_same_dim(&self, other: &Self) -> Result<()> {
        if self.g != other.g {
            return Err(Error::Precondition(format!(
                "dimensions differ: {} vs {}",
                self.g, other.g
            )));
        }
        Ok(())
    }

    pub fn negate(&self) -> Self {
        Self {
            g: self.g,
            twist: self.twist.clone(),
            a: self.a.iter().map(|x| -x).collect(),
        }
    }
}

/// Numerical datum of a (scaled) Fourier-Mukai functor: the isometry matrix
/// and the integer factor by which the cohomological action is scaled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FmtDescriptor {
    pub matrix: SL2,
    #[serde(default = "default_scale")]
    pub scale: u64,
}

fn default_scale() -> u64 {
    1
}

impl FmtDescriptor {
    pub fn new(matrix: SL2, scale: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::Precondition(
                "scale must be a positive integer".into(),
            ));
        }
        Ok(Self { matrix, scale })
    }

    pub fn transform(matrix: SL2) -> Self {
        Self { matrix, scale: 1 }
    }

    /// Descriptor of the adjoint-type transform with matrix `[[−w, y], [z, −x]]`.
    pub fn adjoint(&self) -> Self {
        let m = &self.matrix;
        let matrix =
            SL2::new(-&m.w, m.y.clone(), m.z.clone(), -&m.x).expect("determinant preserved");
        Self {
            matrix,
            scale: self.scale,
        }
    }

    /// Descriptor with matrix `[[−x, y], [z, −w]]`, the transform whose kernel is the dual family.
    pub fn dual_kernel(&self) -> Self {
        let m = &self.matrix;
        let matrix =
            SL2::new(-&m.x, m.y.clone(), m.z.clone(), -&m.w).expect("determinant preserved");
        Self {
            matrix,
            scale: self.scale,
        }
    }

    /// `scale · ρ^(g)(matrix)`.
    pub fn cohomological_matrix(&self, g: usize) -> Result<RepMatrix> {
        let rho = rep_matrix_sl2(g, &self.matrix)?;
        Ok(rho.scale(&int(self.scale as i64).into()))
    }
}

/// Multiplies a vector in the `ℓ^k/k!` basis by `e^{cℓ}`, truncating above degree `g`.
///
/// Uses `(ℓ^i/i!)(ℓ^j/j!) = C(i+j, i) ℓ^{i+j}/(i+j)!`.
pub fn exp_multiply(a: &[Rational], c: &Rational) -> Vec<Rational> {
    (0..a.len())
        .map(|k| {
            (0..=k).fold(Rational::zero(), |acc, i| {
                let coeff = Rational::from_integer(binomial(k as i64, i as i64));
                acc + coeff * num_traits::pow(c.clone(), k - i) * &a[i]
            })
        })
        .collect()
}

/// Re-expresses `v` in twist `b_new`: `ch^{b_new} = e^{(b − b_new)ℓ} ch^b`,
/// i.e. multiplication by `ρ^(g)([[1, 0], [b_new − b, 1]])`.
pub fn twist_change(v: &ChernVector, b_new: &Rational) -> ChernVector {
    if &v.twist == b_new {
        return v.clone();
    }
    let shift = &v.twist - b_new;
    let rho = rep_matrix(v.g, &Mat2::lower_unipotent(&shift)).expect("g >= 1");
    let a = rho.apply_rational(&v.a).expect("rational unipotent matrix");
    ChernVector {
        g: v.g,
        twist: b_new.clone(),
        a,
    }
}

/// Cohomological transform of an untwisted vector: `scale · ρ^(g)(f_E) · a`.
pub fn apply_fmt(v: &ChernVector, f: &FmtDescriptor) -> Result<ChernVector> {
    v.expect_untwisted()?;
    let a = f.cohomological_matrix(v.g)?.apply_rational(&v.a)?;
    Ok(ChernVector {
        g: v.g,
        twist: Rational::zero(),
        a,
    })
}

/// `(x/y, −w/y)`: the source and target twists that make the action anti-diagonal.
pub fn antidiag_twists(m: &SL2) -> Result<(Rational, Rational)> {
    if m.y.is_zero() {
        return Err(Error::Domain(
            "trivial transform (y = 0) has no anti-diagonal form".into(),
        ));
    }
    let y = Rational::from_integer(m.y.clone());
    Ok((
        Rational::from_integer(m.x.clone()) / &y,
        -Rational::from_integer(m.w.clone()) / &y,
    ))
}

/// `(−1)^g y^g · adiag(1, −1/y², …, (−1)^g/y^{2g})`.
pub fn antidiag_normal_form(g: usize, y: &Rational) -> Result<RepMatrix> {
    if y.is_zero() {
        return Err(Error::Domain(
            "trivial transform (y = 0) has no anti-diagonal form".into(),
        ));
    }
    let lead = num_traits::pow(-y.clone(), g);
    let y2 = y * y;
    let values = (0..=g)
        .map(|i| {
            let term = &lead / num_traits::pow(y2.clone(), i);
            ExactScalar::from(if i % 2 == 1 { -term } else { term })
        })
        .collect();
    Ok(RepMatrix::anti_diagonal(values))
}

/// `ρ^(g)([[1,0],[−w/y,1]]) · ρ^(g)(M) · ρ^(g)([[1,0],[−x/y,1]])`: the action of `M`
/// from twist `x/y` to twist `−w/y`, obtained by conjugating with twist changes.
pub fn twist_conjugated_matrix(g: usize, m: &SL2) -> Result<RepMatrix> {
    let (source, target) = antidiag_twists(m)?;
    let into_untwisted = rep_matrix(g, &Mat2::lower_unipotent(&source))?;
    let out_of_untwisted = rep_matrix(g, &Mat2::lower_unipotent(&-target))?;
    let middle = rep_matrix_sl2(g, m)?;
    Ok(&(&out_of_untwisted * &middle) * &into_untwisted)
}

/// Transform of a vector given at twist `x/y`, landing at twist `−w/y`, using the
/// anti-diagonal normal form.
pub fn apply_fmt_antidiag(v: &ChernVector, f: &FmtDescriptor) -> Result<ChernVector> {
    let (source, target) = antidiag_twists(&f.matrix)?;
    v.expect_twist(&source)?;
    let y = Rational::from_integer(f.matrix.y.clone());
    let scale = Rational::from_integer(BigInt::from(f.scale));
    let a = antidiag_normal_form(v.g, &y)?
        .apply_rational(&v.a)?
        .into_iter()
        .map(|c| c * &scale)
        .collect();
    Ok(ChernVector {
        g: v.g,
        twist: target,
        a,
    })
}

/// Derived dual: `a_k ↦ (−1)^k a_k` with the twist negated.
pub fn dualize(v: &ChernVector) -> ChernVector {
    let a =
        v.a.iter()
            .enumerate()
            .map(|(k, x)| if k % 2 == 1 { -x } else { x.clone() })
            .collect();
    ChernVector {
        g: v.g,
        twist: -&v.twist,
        a,
    }
}

/// Mukai pairing `⟨v, w⟩ = −∫_X v^∨ · w` with `∫_X ℓ^g/g! = 1`.
///
/// The overall sign makes `⟨e^{uℓ}, ch(E)⟩` equal the central charge
/// `−∫ e^{−uℓ} ch(E)`.
pub fn mukai_pairing(v: &ChernVector, w: &ChernVector) -> Result<Rational> {
    v.expect_untwisted()?;
    w.expect_untwisted()?;
    v.expect_same_dim(w)?;
    let g = v.g;
    let integral = (0..=g).fold(Rational::zero(), |acc, i| {
        let term = Rational::from_integer(binomial(g as i64, i as i64)) * &v.a[i] * &w.a[g - i];
        if i % 2 == 1 {
            acc - term
        } else {
            acc + term
        }
    });
    Ok(-integral)
}

/// The same pairing on complex coefficient vectors.
pub fn mukai_pairing_complex(v: &[ExactComplex], w: &[ExactComplex]) -> Result<ExactComplex> {
    if v.len() != w.len() || v.is_empty() {
        return Err(Error::Precondition(
            "pairing needs vectors of equal positive length".into(),
        ));
    }
    let g = v.len() - 1;
    let integral = (0..=g).fold(ExactComplex::zero(), |acc, i| {
        let c = ExactScalar::from(Rational::from_integer(binomial(g as i64, i as i64)));
        let term = (&v[i] * &w[g - i]).scale(&c);
        if i % 2 == 1 {
            acc - term
        } else {
            acc + term
        }
    });
    Ok(-integral)
}

/// `e^{uℓ} = (1, u, u², …, u^g)` in the `ℓ^k/k!` basis.
pub fn exp_class(g: usize, u: &ExactComplex) -> Vec<ExactComplex> {
    let mut out = Vec::with_capacity(g + 1);
    let mut p = ExactComplex::one();
    for _ in 0..=g {
        out.push(p.clone());
        p = &p * u;
    }
    out
}

/// `F1 ∘ F2`: matrices multiply in the same order, scales multiply.
pub fn fmt_compose(f1: &FmtDescriptor, f2: &FmtDescriptor) -> FmtDescriptor {
    FmtDescriptor {
        matrix: &f1.matrix * &f2.matrix,
        scale: f1.scale * f2.scale,
    }
}

pub fn identity_fmt() -> FmtDescriptor {
    FmtDescriptor {
        matrix: SL2::identity(),
        scale: 1,
    }
}

pub fn poincare_fmt() -> FmtDescriptor {
    FmtDescriptor {
        matrix: SL2::poincare(),
        scale: 1,
    }
}

pub fn line_twist_fmt(k: i64) -> FmtDescriptor {
    FmtDescriptor {
        matrix: SL2::line_twist(&BigInt::from(k)),
        scale: 1,
    }
}

/// `(1, 0, …, 0)`: the class of the structure sheaf.
pub fn structure_sheaf(g: usize) -> ChernVector {
    let mut a = vec![Rational::zero(); g + 1];
    a[0] = Rational::one();
    ChernVector {
        g,
        twist: Rational::zero(),
        a,
    }
}

/// `(0, …, 0, 1)`: the class of a skyscraper sheaf.
pub fn skyscraper(g: usize) -> ChernVector {
    let mut a = vec![Rational::zero(); g + 1];
    a[g] = Rational::one();
    ChernVector {
        g,
        twist: Rational::zero(),
        a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn cv(twist: Rational, a: &[i64]) -> ChernVector {
        ChernVector::from_i64(twist, a).unwrap()
    }

    fn rats(a: &[i64]) -> Vec<Rational> {
        a.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn twist_examples() {
        let o = structure_sheaf(3);
        assert_eq!(twist_change(&o, &int(-1)).a, rats(&[1, 1, 1, 1]));
        let b = rat(2, 3);
        let expected = vec![int(1), -b.clone(), &b * &b, -(&b * &b * &b)];
        assert_eq!(twist_change(&o, &b).a, expected);
        let v = cv(rat(1, 5), &[2, -1, 4, 7]);
        assert_eq!(twist_change(&v, &rat(1, 5)), v);
    }

    #[test]
    fn twist_matches_truncated_exponential() {
        let v = cv(rat(-3, 4), &[3, -2, 5, 1]);
        for b in [int(0), rat(1, 2), int(-2), rat(7, 3)] {
            let moved = twist_change(&v, &b);
            assert_eq!(moved.a, exp_multiply(&v.a, &(&v.twist - &b)));
            assert_eq!(twist_change(&moved, &v.twist), v);
        }
    }

    #[test]
    fn poincare_examples() {
        let phi = poincare_fmt();
        assert_eq!(
            apply_fmt(&skyscraper(3), &phi).unwrap().a,
            rats(&[1, 0, 0, 0])
        );
        assert_eq!(
            apply_fmt(&structure_sheaf(3), &phi).unwrap().a,
            rats(&[0, 0, 0, -1])
        );
        assert_eq!(
            apply_fmt(&structure_sheaf(2), &phi).unwrap().a,
            rats(&[0, 0, 1])
        );
        // (a_g, −a_{g−1}, a_{g−2}, …, (−1)^g a_0)
        let v = cv(int(0), &[2, 3, 5, 7]);
        assert_eq!(apply_fmt(&v, &phi).unwrap().a, rats(&[7, -5, 3, -2]));
    }

    #[test]
    fn twisted_input_is_rejected() {
        let v = cv(rat(1, 2), &[1, 0, 0, 0]);
        assert!(matches!(
            apply_fmt(&v, &poincare_fmt()),
            Err(Error::TwistMismatch { .. })
        ));
        assert!(mukai_pairing(&v, &structure_sheaf(3)).is_err());
        let f = FmtDescriptor::transform(SL2::from_i64(1, -1, 0, 1).unwrap());
        assert!(matches!(
            apply_fmt_antidiag(&v, &f),
            Err(Error::TwistMismatch { .. })
        ));
    }

    #[test]
    fn antidiag_examples() {
        // x/y = −2/3 → w with xw − yz = 1: (x,y,z,w) = (2,−3,1,−1)
        let f = FmtDescriptor::transform(SL2::from_i64(2, -3, 1, -1).unwrap());
        let (src, dst) = antidiag_twists(&f.matrix).unwrap();
        assert_eq!((src.clone(), dst.clone()), (rat(-2, 3), rat(-1, 3)));
        let out = apply_fmt_antidiag(&cv(src.clone(), &[0, 0, 0, 1]), &f).unwrap();
        assert_eq!(out.a, rats(&[27, 0, 0, 0]));
        assert_eq!(out.twist, dst);

        let unit = FmtDescriptor::transform(SL2::from_i64(0, -1, 1, 0).unwrap());
        let v = cv(int(0), &[2, 3, 5, 7]);
        assert_eq!(
            apply_fmt_antidiag(&v, &unit).unwrap().a,
            rats(&[7, -5, 3, -2])
        );

        let trivial = FmtDescriptor::transform(SL2::from_i64(1, 0, 4, 1).unwrap());
        assert!(matches!(
            apply_fmt_antidiag(&v, &trivial),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn antidiag_on_zero_charge_slice() {
        // (a0, a1, λa1, a3) ↦ (−y³a3, yλa1, −a1/y, a0/y³); the shift [1] negates it
        let f = FmtDescriptor::transform(SL2::from_i64(1, -2, 1, -1).unwrap());
        let (src, _) = antidiag_twists(&f.matrix).unwrap();
        let (a0, a1, lambda, a3) = (rat(3, 2), rat(-5, 7), rat(4, 3), rat(2, 9));
        let v = ChernVector::new(
            3,
            src,
            vec![a0.clone(), a1.clone(), &lambda * &a1, a3.clone()],
        )
        .unwrap();
        let y = int(-2);
        let out = apply_fmt_antidiag(&v, &f).unwrap().negate();
        let y3 = &y * &y * &y;
        assert_eq!(
            out.a,
            vec![&y3 * &a3, -(&y * &lambda * &a1), &a1 / &y, -(&a0 / &y3)]
        );
    }

    #[test]
    fn antidiag_agrees_with_conjugated_route() {
        let f = FmtDescriptor::transform(SL2::from_i64(3, -2, -4, 3).unwrap());
        let (src, dst) = antidiag_twists(&f.matrix).unwrap();
        let v = ChernVector::new(3, src, vec![rat(1, 3), int(-2), rat(5, 2), int(4)]).unwrap();
        let direct = apply_fmt_antidiag(&v, &f).unwrap();
        let routed = twist_change(&apply_fmt(&twist_change(&v, &int(0)), &f).unwrap(), &dst);
        assert_eq!(direct, routed);
    }

    #[test]
    fn dual_examples() {
        let v = cv(rat(1, 3), &[1, 2, 3, 4]);
        let d = dualize(&v);
        assert_eq!(d.a, rats(&[1, -2, 3, -4]));
        assert_eq!(d.twist, rat(-1, 3));
        assert_eq!(dualize(&d), v);
        let even = cv(int(2), &[5, 0, 6, 0]);
        assert_eq!(dualize(&even).a, even.a);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(
            mukai_pairing(&skyscraper(3), &structure_sheaf(3)).unwrap(),
            int(1)
        );
        let v = cv(int(0), &[3, -1, 4, 2]);
        assert_eq!(mukai_pairing(&v, &v).unwrap(), int(0));
        assert!(mukai_pairing(&v, &structure_sheaf(2)).is_err());
    }

    #[test]
    fn pairing_with_exponential_is_cube() {
        let u = ExactComplex::new(rat(1, 2).into(), ExactScalar::sqrt3_multiple(rat(1, 2)));
        let o: Vec<ExactComplex> = structure_sheaf(3)
            .a
            .into_iter()
            .map(ExactComplex::from_rational)
            .collect();
        assert_eq!(
            mukai_pairing_complex(&exp_class(3, &u), &o).unwrap(),
            u.pow(3)
        );
    }

    #[test]
    fn composition_examples() {
        let phi = poincare_fmt();
        let sq = fmt_compose(&phi, &phi);
        assert_eq!(sq.matrix, SL2::minus_identity());
        assert_eq!(sq.scale, 1);
        assert_eq!(fmt_compose(&phi, &identity_fmt()), phi);
        let l_phi = fmt_compose(&line_twist_fmt(1), &phi);
        let cube = fmt_compose(&l_phi, &fmt_compose(&l_phi, &l_phi));
        assert_eq!(cube.matrix, SL2::minus_identity());
        let v = cv(int(0), &[2, 3, 5, 7]);
        assert_eq!(apply_fmt(&v, &cube).unwrap(), v.negate());
    }

    #[test]
    fn scaled_functor_multiplies_action() {
        let f = FmtDescriptor::new(SL2::from_i64(1, -1, 0, 1).unwrap(), 4).unwrap();
        let unscaled = FmtDescriptor::transform(f.matrix.clone());
        let v = cv(int(0), &[1, 2, -1, 3]);
        let a = apply_fmt(&v, &f).unwrap().a;
        let b = apply_fmt(&v, &unscaled).unwrap().a;
        assert_eq!(a, b.iter().map(|x| x * int(4)).collect::<Vec<_>>());
        assert!(FmtDescriptor::new(SL2::identity(), 0).is_err());
    }

    #[test]
    fn dual_kernel_maps_skyscraper_to_twisted_rank() {
        // the transform with matrix [[−x, y], [z, −w]] sends a point to (−y³, 0, 0, 0) at twist w/y
        let f = FmtDescriptor::transform(SL2::from_i64(2, -3, 1, -1).unwrap());
        let t = f.dual_kernel();
        let image = apply_fmt(&skyscraper(3), &t).unwrap();
        let w_over_y = rat(1, 3);
        assert_eq!(twist_change(&image, &w_over_y).a, rats(&[27, 0, 0, 0]));
    }

    #[test]
    fn json_shape() {
        let v = cv(rat(-1, 2), &[1, 0, 2, -3]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"g":3,"twist":"-1/2","a":["1","0","2","-3"]}"#);
        assert_eq!(serde_json::from_str::<ChernVector>(&text).unwrap(), v);
        assert!(serde_json::from_str::<ChernVector>(r#"{"g":3,"a":["1"]}"#).is_err());
        let f = poincare_fmt();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"matrix":{"x":0,"y":-1,"z":1,"w":0},"scale":1}"#);
    }
}
