//! Local arithmetic of elliptic curves: point counts over prime fields, Euler
//! factors at `s = 1`, local correction series and `mu_(p^infinity)`
//! valuations.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charel::CharElement;
use crate::error::{Error, Result};
use crate::padic::{is_prime, PadicInt, Zp};
use crate::series::LambdaSeries;

/// Default bound on primes for which points are counted by enumeration.
pub const DEFAULT_MAX_ENUM: u64 = 1_000_000;

/// Enumeration bound, overridable through `AKASHI_MAX_ENUM`.
pub fn enumeration_bound() -> u64 {
    std::env::var("AKASHI_MAX_ENUM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM)
}

/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6` over `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    pub a: [i64; 5],
}

impl CurveData {
    pub fn new(a: [i64; 5]) -> Result<CurveData> {
        let c = CurveData { a };
        if c.discriminant().is_zero() {
            return Err(Error::invalid("the curve is singular: discriminant 0"));
        }
        Ok(c)
    }

    fn coeffs(&self) -> [BigInt; 5] {
        self.a.map(BigInt::from)
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.coeffs();
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn j_invariant(&self) -> BigRational {
        let [b2, b4, _, _] = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        BigRational::new(&c4 * &c4 * &c4, self.discriminant())
    }

    /// Whether `j` is non-integral at `ell`, the criterion for potentially
    /// multiplicative reduction.
    pub fn has_nonintegral_j_at(&self, ell: u64) -> bool {
        let j = self.j_invariant();
        let ell = BigInt::from(ell);
        !j.is_zero() && j.denom().is_multiple_of(&ell)
    }

    /// Whether this model has good reduction at `ell`.
    pub fn has_good_reduction_at(&self, ell: u64) -> bool {
        !self.discriminant().is_multiple_of(&BigInt::from(ell))
    }
}

fn reduce_mod(x: &BigInt, ell: u64) -> u64 {
    let m = BigInt::from(ell);
    let r = x.mod_floor(&m);
    u64::try_from(r).expect("residue fits")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Quadratic character of `a` modulo an odd prime.
fn legendre(a: u64, ell: u64) -> i64 {
    if a % ell == 0 {
        return 0;
    }
    if pow_mod(a, (ell - 1) / 2, ell) == 1 {
        1
    } else {
        -1
    }
}

fn check_prime_for_counting(curve: &CurveData, ell: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::invalid(format!("{ell} is not prime")));
    }
    let bound = enumeration_bound();
    if ell > bound {
        return Err(Error::PrimeTooLarge { ell, bound });
    }
    if !curve.has_good_reduction_at(ell) {
        return Err(Error::BadReduction { ell });
    }
    Ok(())
}

/// `#E(F_ell)` including the point at infinity.
///
/// For odd `ell`, completing the square turns the curve into
/// `(2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`, and the count is
/// `ell + 1 + sum_x chi(rhs(x))`. For `ell = 2` all pairs are enumerated.
pub fn count_points(curve: &CurveData, ell: u64) -> Result<u64> {
    check_prime_for_counting(curve, ell)?;
    if ell == 2 {
        return Ok(count_points_by_pairs(curve, ell));
    }
    let [b2, b4, b6, _] = curve.b_invariants();
    let (b2, b4, b6) = (reduce_mod(&b2, ell), reduce_mod(&b4, ell), reduce_mod(&b6, ell));
    let mut sum: i64 = 0;
    for x in 0..ell {
        let x2 = mul_mod(x, x, ell);
        let x3 = mul_mod(x2, x, ell);
        let rhs = (mul_mod(4, x3, ell) + mul_mod(b2, x2, ell) + mul_mod(mul_mod(2, b4, ell), x, ell) + b6) % ell;
        sum += legendre(rhs, ell);
    }
    Ok((ell as i64 + 1 + sum) as u64)
}

/// `#E(F_ell)` by testing every pair `(x, y)`.
pub fn count_points_by_pairs(curve: &CurveData, ell: u64) -> u64 {
    let a = curve.coeffs().map(|c| reduce_mod(&c, ell));
    let [a1, a2, a3, a4, a6] = a;
    let mut count = 1;
    for x in 0..ell {
        let x2 = mul_mod(x, x, ell);
        let rhs = (mul_mod(x2, x, ell) + mul_mod(a2, x2, ell) + mul_mod(a4, x, ell) + a6) % ell;
        for y in 0..ell {
            let lhs = (mul_mod(y, y, ell) + mul_mod(mul_mod(a1, x, ell), y, ell) + mul_mod(a3, y, ell)) % ell;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    Good,
    SplitMult,
    NonsplitMult,
    Additive,
}

/// Which element `1 + T_x` is identified with in the local series.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrobeniusConvention {
    /// `1 + T_x` is the arithmetic Frobenius.
    #[default]
    Arithmetic,
    /// `1 + T_x` is the geometric Frobenius, so the series uses `(1 + T_x)^-1`.
    Geometric,
}

/// Local data of an elliptic curve at a place `v` not above `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPlaceData {
    pub ell: u64,
    pub f_deg: u32,
    pub reduction: Reduction,
    pub a_v: i64,
    /// `[Gamma : Gamma_x] = p^(c_v)`.
    pub c_v: u32,
}

impl LocalPlaceData {
    pub fn new(ell: u64, f_deg: u32, reduction: Reduction, a_v: i64, c_v: u32) -> Result<LocalPlaceData> {
        let place = LocalPlaceData {
            ell,
            f_deg,
            reduction,
            a_v,
            c_v,
        };
        place.validate()?;
        Ok(place)
    }

    /// A place of good reduction of a curve over `Q`, with `a_v` from the
    /// point count.
    pub fn good_from_curve(curve: &CurveData, ell: u64, c_v: u32) -> Result<LocalPlaceData> {
        let count = count_points(curve, ell)?;
        LocalPlaceData::new(ell, 1, Reduction::Good, ell as i64 + 1 - count as i64, c_v)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.ell) {
            return Err(Error::invalid(format!("{} is not prime", self.ell)));
        }
        if self.f_deg == 0 {
            return Err(Error::invalid("residue degree must be positive"));
        }
        let q = self.q_v()?;
        let expected = match self.reduction {
            Reduction::Good => {
                if i128::from(self.a_v).pow(2) > 4 * i128::from(q) {
                    return Err(Error::invalid(format!(
                        "a_v = {} violates the Hasse bound for q = {q}",
                        self.a_v
                    )));
                }
                return Ok(());
            }
            Reduction::SplitMult => 1,
            Reduction::NonsplitMult => -1,
            Reduction::Additive => 0,
        };
        if self.a_v != expected {
            return Err(Error::invalid(format!(
                "a_v must be {expected} for {:?} reduction, got {}",
                self.reduction, self.a_v
            )));
        }
        Ok(())
    }

    /// Size of the residue field.
    pub fn q_v(&self) -> Result<u64> {
        self.ell
            .checked_pow(self.f_deg)
            .ok_or_else(|| Error::invalid(format!("{}^{} overflows", self.ell, self.f_deg)))
    }

    /// Coefficients of `P_v(X)` in increasing degree.
    pub fn euler_polynomial(&self) -> Result<Vec<i64>> {
        Ok(match self.reduction {
            Reduction::Good => vec![
                1,
                -self.a_v,
                i64::try_from(self.q_v()?).map_err(|_| Error::invalid("q_v too large"))?,
            ],
            Reduction::SplitMult => vec![1, -1],
            Reduction::NonsplitMult => vec![1, 1],
            Reduction::Additive => vec![1],
        })
    }
}

/// `P_v(q_v^-1) = L_v(E, 1)^-1` as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerFactor {
    pub value: BigRational,
}

impl EulerFactor {
    /// `v_p` of the value (numerator minus denominator valuation).
    pub fn valuation(&self, p: u64) -> i64 {
        i64::from(int_valuation(self.value.numer(), p)) - i64::from(int_valuation(self.value.denom(), p))
    }

    pub fn numerator_valuation(&self, p: u64) -> u32 {
        int_valuation(self.value.numer(), p)
    }

    pub fn denominator_valuation(&self, p: u64) -> u32 {
        int_valuation(self.value.denom(), p)
    }
}

fn int_valuation(x: &BigInt, p: u64) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while x.is_multiple_of(&p) {
        x /= &p;
        v += 1;
    }
    v
}

pub fn euler_factor_at_one(place: &LocalPlaceData) -> Result<EulerFactor> {
    let q = BigInt::from(place.q_v()?);
    let x = BigRational::new(BigInt::one(), q);
    let mut value = BigRational::zero();
    let mut power = BigRational::one();
    for c in place.euler_polynomial()? {
        value += &power * BigRational::from_integer(BigInt::from(c));
        power *= &x;
    }
    Ok(EulerFactor { value })
}

/// Characteristic element of `J_v` over the cyclotomic tower: the series
/// `P_v(q_v^-1 (1 + T_x))` over `Z_p[[Gamma_x]]`, transported to
/// `Z_p[[Gamma]]` along `T_x -> (1+T)^(p^(c_v)) - 1`.
///
/// The reduction type is used as given along the tower: for `p >= 5` the
/// residue extensions in the cyclotomic tower have odd degree, which keeps
/// split and nonsplit reduction unchanged.
pub fn local_correction_series(
    place: &LocalPlaceData,
    ring: &Arc<Zp>,
    t_degree: usize,
    convention: FrobeniusConvention,
) -> Result<CharElement> {
    local_series_before_tower(place, ring, t_degree, convention)?
        .substitute_tower(place.c_v)
        .normalize()
}

/// `P_v(q_v^-1 (1 + T_x))` (or with `(1 + T_x)^-1`) over `Z_p[[Gamma_x]]`.
pub fn local_series_before_tower(
    place: &LocalPlaceData,
    ring: &Arc<Zp>,
    t_degree: usize,
    convention: FrobeniusConvention,
) -> Result<LambdaSeries> {
    place.validate()?;
    if place.ell == ring.prime() {
        return Err(Error::PlaceDividesP { ell: place.ell });
    }
    let q_inv = ring.element(place.q_v()?).unit_inverse()?;
    let one_plus_t = LambdaSeries::new(ring, t_degree, [1, 1])?;
    let base = match convention {
        FrobeniusConvention::Arithmetic => one_plus_t,
        FrobeniusConvention::Geometric => one_plus_t.unit_inverse()?,
    };
    let x = base.scale(&q_inv)?;
    let mut g = LambdaSeries::zero(ring, t_degree);
    let mut power = LambdaSeries::one(ring, t_degree);
    for c in place.euler_polynomial()? {
        g = g.checked_add(&power.scale(&ring.element(c))?)?;
        power = power.checked_mul(&x)?;
    }
    Ok(g)
}

/// `v_p(u - 1)` for a principal unit `u = chi(gamma_v)`: `log_p` of the number
/// of `p`-power roots of unity in the local field.
pub fn mu_valuation(u: &PadicInt) -> Result<u32> {
    let ring = u.ring();
    let diff = ring.sub(u.value(), &BigUint::one());
    match ring.val(&diff) {
        Some(0) => Err(Error::invalid(format!("{u} is not a principal unit"))),
        Some(v) => Ok(v),
        None => Err(Error::ValuationAtPrecisionCap {
            precision: ring.precision(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: [i64; 5]) -> CurveData {
        CurveData::new(a).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn point_counts() {
        assert_eq!(count_points(&curve([0, 0, 0, 0, 1]), 5).unwrap(), 6);
        assert_eq!(count_points(&curve([0, 0, 0, 1, 0]), 3).unwrap(), 4);
        assert!(matches!(
            count_points(&curve([0, 0, 0, 0, 1]), 3),
            Err(Error::BadReduction { ell: 3 })
        ));
        assert!(matches!(
            count_points(&curve([0, 0, 0, 0, 1]), 2),
            Err(Error::BadReduction { ell: 2 })
        ));
        assert!(count_points(&curve([0, 0, 0, 0, 1]), 9).is_err());
    }

    #[test]
    fn character_sum_matches_pairs() {
        let e = curve([0, -1, 1, -10, -20]);
        for ell in [3, 7, 13, 17, 19, 23] {
            assert_eq!(count_points(&e, ell).unwrap(), count_points_by_pairs(&e, ell));
        }
    }

    #[test]
    fn discriminant_and_j() {
        let e = curve([0, -1, 1, -10, -20]);
        assert_eq!(e.discriminant(), BigInt::from(-161051));
        assert!(e.has_nonintegral_j_at(11));
        assert!(!e.has_nonintegral_j_at(5));
        assert!(CurveData::new([0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn euler_factors() {
        let additive = LocalPlaceData::new(7, 1, Reduction::Additive, 0, 0).unwrap();
        assert_eq!(euler_factor_at_one(&additive).unwrap().value, rat(1, 1));
        let split = LocalPlaceData::new(11, 1, Reduction::SplitMult, 1, 0).unwrap();
        let f = euler_factor_at_one(&split).unwrap();
        assert_eq!(f.value, rat(10, 11));
        assert_eq!(f.valuation(5), 1);
        let good = LocalPlaceData::new(7, 1, Reduction::Good, -2, 0).unwrap();
        assert_eq!(euler_factor_at_one(&good).unwrap().value, rat(10, 7));
        assert!(LocalPlaceData::new(7, 1, Reduction::Good, 6, 0).is_err());
        assert!(LocalPlaceData::new(7, 1, Reduction::SplitMult, -1, 0).is_err());
    }

    #[test]
    fn local_series_examples() {
        let r = Zp::new(5, 4).unwrap();
        // q = 11: 1 - 11^-1 (1 + T) has constant term of valuation v_5(10) = 1.
        let split = LocalPlaceData::new(11, 1, Reduction::SplitMult, 1, 0).unwrap();
        let f = local_correction_series(&split, &r, 8, FrobeniusConvention::Arithmetic).unwrap();
        assert_eq!((f.mu(), f.lambda(), f.leading_term_valuation()), (0, 1, 1));
        let g = local_correction_series(&split, &r, 8, FrobeniusConvention::Geometric).unwrap();
        assert_eq!((g.mu(), g.lambda(), g.leading_term_valuation()), (0, 1, 1));
        // q = 7 is not 1 mod 5: the series is a unit.
        let unit = LocalPlaceData::new(7, 1, Reduction::SplitMult, 1, 0).unwrap();
        assert!(local_correction_series(&unit, &r, 8, FrobeniusConvention::Arithmetic)
            .unwrap()
            .is_one());
        let additive = LocalPlaceData::new(7, 1, Reduction::Additive, 0, 0).unwrap();
        assert!(
            local_correction_series(&additive, &r, 8, FrobeniusConvention::Arithmetic)
                .unwrap()
                .is_one()
        );
        let above_p = LocalPlaceData::new(5, 1, Reduction::Additive, 0, 0).unwrap();
        assert!(matches!(
            local_correction_series(&above_p, &r, 8, FrobeniusConvention::Arithmetic),
            Err(Error::PlaceDividesP { ell: 5 })
        ));
    }

    #[test]
    fn tower_transport_of_local_series() {
        let r = Zp::new(5, 4).unwrap();
        let base = LocalPlaceData::new(11, 1, Reduction::SplitMult, 1, 0).unwrap();
        let raised = LocalPlaceData { c_v: 1, ..base.clone() };
        let direct = local_correction_series(&raised, &r, 10, FrobeniusConvention::Arithmetic).unwrap();
        let g = local_series_before_tower(&base, &r, 10, FrobeniusConvention::Arithmetic).unwrap();
        assert_eq!(direct, g.substitute_tower(1).normalize().unwrap());
        assert_eq!(direct.lambda(), 5);
    }

    #[test]
    fn mu_valuations() {
        let r = Zp::new(5, 4).unwrap();
        assert_eq!(mu_valuation(&r.element(6)).unwrap(), 1);
        assert_eq!(mu_valuation(&r.element(26)).unwrap(), 2);
        assert!(matches!(
            mu_valuation(&r.one()),
            Err(Error::ValuationAtPrecisionCap { precision: 4 })
        ));
        assert!(mu_valuation(&r.element(2)).is_err());
        // 6^5 - 1 = 7775 = 5^2 * 311
        assert_eq!(mu_valuation(&r.element(6).power_tower(1).unwrap()).unwrap(), 2);
    }
}
