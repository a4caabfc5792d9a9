//! Finitely generated `Z_p[[T]]`-modules in presentation form and in finite
//! form, and their characteristic elements.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::charel::CharElement;
use crate::determinantal::determinantal_divisor;
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::padic::{PadicInt, Zp};
use crate::series::LambdaSeries;
use crate::zpn::{quotient_structure, ZpnMatrix};

/// Which character the rank-one twist presents.
///
/// The Pontryagin dual of a discrete module carries `(gamma f)(x) =
/// f(gamma^-1 x)`. With `Character`, the dual of `(Q_p/Z_p)(chi)` is
/// presented by `(1 + T) - chi(gamma)`; `InverseCharacter` uses
/// `(1 + T) - chi(gamma)^-1` instead.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistConvention {
    #[default]
    Character,
    InverseCharacter,
}

/// `Z_p[[T]]^k / P Z_p[[T]]^m` for a `k x m` relation matrix `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationModule {
    relations: SeriesMatrix,
}

impl PresentationModule {
    pub fn new(relations: SeriesMatrix) -> PresentationModule {
        PresentationModule { relations }
    }

    /// `Z_p[[T]]^k`.
    pub fn free(ring: &Arc<Zp>, t_degree: usize, k: usize) -> PresentationModule {
        PresentationModule::new(SeriesMatrix::zeros(ring, t_degree, k, 0))
    }

    /// `Z_p[[T]] / (f)`.
    pub fn cyclic(f: &LambdaSeries) -> PresentationModule {
        PresentationModule::new(SeriesMatrix::scalar(f, 1))
    }

    pub fn ring(&self) -> &Arc<Zp> {
        self.relations.ring()
    }

    pub fn prime(&self) -> u64 {
        self.ring().prime()
    }

    pub fn p_precision(&self) -> u32 {
        self.ring().precision()
    }

    pub fn t_degree(&self) -> usize {
        self.relations.t_degree()
    }

    /// Number of generators `k`.
    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    /// Number of relations `m`.
    pub fn relation_count(&self) -> usize {
        self.relations.cols()
    }

    pub fn relations(&self) -> &SeriesMatrix {
        &self.relations
    }

    /// Characteristic element: the gcd of the `k x k` minors of `P` (for
    /// square `P`, the class of `det P`).
    pub fn char_element(&self) -> Result<CharElement> {
        let k = self.generators();
        determinantal_divisor(&self.relations, k)?.ok_or_else(|| {
            Error::NotTorsionAtPrecision(format!(
                "every {k}x{k} minor of the relation matrix vanishes modulo (p^{}, T^{})",
                self.p_precision(),
                self.t_degree()
            ))
        })
    }

    pub fn direct_sum(&self, other: &PresentationModule) -> Result<PresentationModule> {
        Ok(PresentationModule::new(
            self.relations.block_diagonal(&other.relations)?,
        ))
    }

    /// Base change along `Z_p[[S]] -> Z_p[[T]]`, `S -> (1+T)^(p^c) - 1`, the
    /// inclusion of the Iwasawa algebra of the index-`p^c` subgroup.
    pub fn induce(&self, c: u32) -> PresentationModule {
        PresentationModule::new(self.relations.map(|f| f.substitute_tower(c)))
    }

    pub fn at_precision(&self, n: u32, d: usize) -> Result<PresentationModule> {
        Ok(PresentationModule::new(self.relations.at_precision(n, d)?))
    }

    /// `M / (p^N, T^D) M` as a finite `Z/p^N`-module with its `T`-action.
    pub fn flatten(&self) -> FlatModule {
        let ring = Arc::clone(self.ring());
        let d = self.t_degree();
        let k = self.generators();
        let t = SeriesMatrix::scalar(&LambdaSeries::t(&ring, d), k);
        FlatModule {
            relations: self.relations.flatten(),
            theta: t.flatten(),
        }
    }

    /// For a module that is free of finite rank over `Z_p` (square `P` whose
    /// determinant has `mu = 0`), the finite module `M / p^N M`. Fails when
    /// the truncation at `T^D` is too short to contain it.
    pub fn reduction_mod_p_n(&self) -> Result<FiniteFormModule> {
        if !self.relations.is_square() {
            return Err(Error::invalid("reduction mod p^N needs a square relation matrix"));
        }
        let f = self.char_element()?;
        if f.mu() > 0 {
            return Err(Error::invalid(format!(
                "the module has mu = {} and is not finitely generated over Z_p",
                f.mu()
            )));
        }
        let flat = self.flatten();
        let structure = flat.structure();
        let expected = u64::from(self.p_precision()) * f.lambda() as u64;
        if structure.log_order() != expected {
            return Err(Error::PrecisionInsufficient(format!(
                "T-degree {} does not capture M / p^N M (length {} instead of {expected})",
                self.t_degree(),
                structure.log_order()
            )));
        }
        Ok(structure)
    }
}

/// `sum_j Z/p^(n_j)` with `T` acting through an integer matrix `theta`.
///
/// Column `j` of `theta` is the image of the `j`-th generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFormModule {
    orders: Vec<u32>,
    theta: ZpnMatrix,
}

impl FiniteFormModule {
    pub fn new(ring: &Arc<Zp>, orders: Vec<u32>, theta: ZpnMatrix) -> Result<FiniteFormModule> {
        let k = orders.len();
        ring.check_same(theta.ring())?;
        if theta.rows() != k || theta.cols() != k {
            return Err(Error::invalid(format!("theta must be {k}x{k}")));
        }
        if let Some(&n) = orders.iter().find(|&&n| n == 0 || n > ring.precision()) {
            return Err(Error::invalid(format!(
                "cyclic order p^{n} outside 1..=p^{}",
                ring.precision()
            )));
        }
        let module = FiniteFormModule { orders, theta };
        if !module.respects_relations(&module.theta) {
            return Err(Error::invalid("theta does not preserve the relations p^(n_j) e_j"));
        }
        if !module.is_nilpotent() {
            return Err(Error::invalid("T does not act nilpotently"));
        }
        Ok(module)
    }

    /// The zero module.
    pub fn zero(ring: &Arc<Zp>) -> FiniteFormModule {
        FiniteFormModule {
            orders: Vec::new(),
            theta: ZpnMatrix::zeros(ring, 0, 0),
        }
    }

    pub(crate) fn from_parts(orders: Vec<u32>, theta: ZpnMatrix) -> FiniteFormModule {
        FiniteFormModule { orders, theta }
    }

    pub fn ring(&self) -> &Arc<Zp> {
        self.theta.ring()
    }

    pub fn prime(&self) -> u64 {
        self.ring().prime()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn theta(&self) -> &ZpnMatrix {
        &self.theta
    }

    pub fn generators(&self) -> usize {
        self.orders.len()
    }

    /// `log_p` of the number of elements.
    pub fn log_order(&self) -> u64 {
        self.orders.iter().map(|&n| u64::from(n)).sum()
    }

    /// Orders of the cyclic factors, sorted: the isomorphism type of the
    /// underlying abelian group.
    pub fn group_invariants(&self) -> Vec<u32> {
        let mut o = self.orders.clone();
        o.sort_unstable();
        o
    }

    /// Whether `m` (acting on generators, column `j` the image of `e_j`) maps
    /// every relation `p^(n_j) e_j` into the relation lattice.
    pub fn respects_relations(&self, m: &ZpnMatrix) -> bool {
        let ring = self.ring();
        (0..self.generators()).all(|j| {
            (0..self.generators()).all(|i| {
                let v = ring.mul(m.get(i, j), &ring.p_pow(self.orders[j]));
                self.vanishes_in_row(i, &v)
            })
        })
    }

    fn vanishes_in_row(&self, i: usize, v: &BigUint) -> bool {
        let ring = self.ring();
        if self.orders[i] >= ring.precision() {
            v.is_zero()
        } else {
            (v % ring.p_pow(self.orders[i])).is_zero()
        }
    }

    /// Whether `m` acts as zero on the module.
    pub fn acts_as_zero(&self, m: &ZpnMatrix) -> bool {
        (0..m.rows()).all(|i| (0..m.cols()).all(|j| self.vanishes_in_row(i, m.get(i, j))))
    }

    fn is_nilpotent(&self) -> bool {
        let k = self.generators();
        if k == 0 {
            return true;
        }
        let steps = k * self.ring().precision() as usize;
        let mut power = self.theta.clone();
        for _ in 1..steps {
            if self.acts_as_zero(&power) {
                return true;
            }
            power = power.mul(&self.theta);
        }
        self.acts_as_zero(&power)
    }

    /// The precision at which every relation `p^(n_j)` and every product of
    /// them stays nonzero.
    fn working_precision(&self) -> u32 {
        let total = u32::try_from(self.log_order()).unwrap_or(u32::MAX - 1);
        self.ring().precision().max(total + 1)
    }

    /// `[T I - theta | diag(p^(n_j))]` over `Z_p[[T]]` at the working
    /// precision, where every relation is visible.
    pub fn relation_matrix(&self, t_degree: usize) -> SeriesMatrix {
        let ring = self.ring().at_precision(self.working_precision());
        let k = self.generators();
        SeriesMatrix::from_fn(&ring, t_degree, k, 2 * k, |i, j| {
            if j < k {
                let mut c = vec![ring.neg(&ring.reduce(self.theta.get(i, j).clone()))];
                if i == j {
                    c.push(BigUint::from(1u32));
                }
                LambdaSeries::from_parts(&ring, c, t_degree, true)
            } else if j - k == i {
                LambdaSeries::constant(&ring, t_degree, &ring.p_pow(self.orders[i]))
            } else {
                LambdaSeries::zero(&ring, t_degree)
            }
        })
    }

    /// Characteristic element via the gcd of the maximal minors of the
    /// relation matrix. A finite module is pseudo-null, so this is `1`.
    pub fn char_element(&self) -> Result<CharElement> {
        let k = self.generators();
        let t_degree = k + 2;
        let f = determinantal_divisor(&self.relation_matrix(t_degree), k)?
            .ok_or_else(|| Error::PrecisionInsufficient("no nonzero maximal minor of a finite module".into()))?;
        let ring = self.ring();
        Ok(if f.lambda() == 0 {
            CharElement::p_power(ring, f.mu())
        } else {
            f.at_precision(f.precision().min(ring.precision()))?
        })
    }

    /// The same module presented over `Z_p[[T]]` at `(p^n, T^D)`; needs
    /// `n > max n_j`.
    pub fn to_presentation(&self, n: u32, t_degree: usize) -> Result<PresentationModule> {
        if let Some(&max) = self.orders.iter().max() {
            if n <= max {
                return Err(Error::PrecisionInsufficient(format!(
                    "a cyclic factor of order p^{max} needs p-precision above {max}, got {n}"
                )));
            }
        }
        let full = self.relation_matrix(t_degree);
        let ring = Zp::new(self.prime(), n)?;
        let m = full.try_map(&ring, t_degree, |e| {
            let coeffs = e.raw().iter().map(|c| ring.reduce(c.clone())).collect();
            Ok(LambdaSeries::from_parts(&ring, coeffs, t_degree, e.is_exact()))
        })?;
        Ok(PresentationModule::new(m))
    }

    pub fn direct_sum(&self, other: &FiniteFormModule) -> Result<FiniteFormModule> {
        self.ring().check_same(other.ring())?;
        let (a, b) = (self.generators(), other.generators());
        let theta = ZpnMatrix::from_fn(self.ring(), a + b, a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.theta.get(i, j).clone(),
            (false, false) => other.theta.get(i - a, j - a).clone(),
            _ => BigUint::zero(),
        });
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        Ok(FiniteFormModule { orders, theta })
    }

    pub fn flatten(&self) -> FlatModule {
        let ring = self.ring();
        let k = self.generators();
        let relations = ZpnMatrix::from_fn(ring, k, k, |i, j| {
            if i == j {
                ring.p_pow(self.orders[i])
            } else {
                BigUint::zero()
            }
        });
        FlatModule {
            relations,
            theta: self.theta.clone(),
        }
    }
}

/// `(Z/p^N)^n / span(relations)` with `T` acting by `theta` on the free
/// cover (preserving the relations).
#[derive(Debug, Clone)]
pub struct FlatModule {
    pub relations: ZpnMatrix,
    pub theta: ZpnMatrix,
}

impl FlatModule {
    pub fn ring(&self) -> &Arc<Zp> {
        self.theta.ring()
    }

    pub fn rank(&self) -> usize {
        self.theta.rows()
    }

    /// Decomposition into cyclic factors with the induced `T`-action.
    pub fn structure(&self) -> FiniteFormModule {
        let q = quotient_structure(&self.relations);
        FiniteFormModule::from_parts(q.orders.clone(), q.transport(&self.theta))
    }
}

/// The rank-one module attached to the character value `u = chi(gamma)`:
/// `Z_p[[T]] / ((1 + T) - u)` (or `u^-1`, per `convention`).
pub fn rank_one_twist(u: &PadicInt, t_degree: usize, convention: TwistConvention) -> Result<PresentationModule> {
    let inv = u.unit_inverse()?;
    let value = match convention {
        TwistConvention::Character => u.clone(),
        TwistConvention::InverseCharacter => inv,
    };
    let ring = u.ring();
    let one = BigUint::from(1u32);
    let c0 = ring.sub(&one, value.value());
    let f = LambdaSeries::from_parts(ring, vec![c0, one], t_degree, true);
    Ok(PresentationModule::cyclic(&f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> Arc<Zp> {
        Zp::new(p, n).unwrap()
    }

    fn s(r: &Arc<Zp>, d: usize, c: &[i64]) -> LambdaSeries {
        LambdaSeries::new(r, d, c.iter().copied()).unwrap()
    }

    fn ce(r: &Arc<Zp>, mu: u32, g: &[i64]) -> CharElement {
        CharElement::new(r, mu, g.iter().copied()).unwrap()
    }

    fn finite(r: &Arc<Zp>, orders: &[u32], theta: &[i64]) -> FiniteFormModule {
        let k = orders.len();
        let m = ZpnMatrix::from_fn(r, k, k, |i, j| r.element(theta[i * k + j]).value().clone());
        FiniteFormModule::new(r, orders.to_vec(), m).unwrap()
    }

    #[test]
    fn presentation_chars() {
        let r = ring(5, 4);
        let t = PresentationModule::cyclic(&LambdaSeries::t(&r, 6));
        assert_eq!(t.char_element().unwrap(), CharElement::t(&r));
        let p = PresentationModule::cyclic(&s(&r, 6, &[5]));
        assert_eq!(p.char_element().unwrap(), CharElement::p_power(&r, 1));
        let diag = SeriesMatrix::diagonal(&r, 6, &[s(&r, 6, &[-5, 1]), s(&r, 6, &[-25, 1])]).unwrap();
        // (T - 5)(T - 25) = T^2 - 30 T + 125
        assert_eq!(
            PresentationModule::new(diag).char_element().unwrap(),
            ce(&r, 0, &[125, -30, 1])
        );
    }

    #[test]
    fn zero_relation_is_not_torsion() {
        let r = ring(3, 2);
        let m = PresentationModule::cyclic(&s(&r, 4, &[9, 0, 18]));
        assert!(matches!(m.char_element(), Err(Error::NotTorsionAtPrecision(_))));
        assert!(matches!(
            PresentationModule::free(&r, 4, 1).char_element(),
            Err(Error::NotTorsionAtPrecision(_))
        ));
    }

    #[test]
    fn finite_forms_are_pseudo_null() {
        let r = ring(2, 2);
        assert!(finite(&r, &[1], &[0]).char_element().unwrap().is_one());
        assert!(finite(&r, &[2], &[0]).char_element().unwrap().is_one());
        assert!(finite(&r, &[1, 1], &[0, 1, 0, 0]).char_element().unwrap().is_one());
    }

    #[test]
    fn finite_form_validation() {
        let r = ring(3, 2);
        let bad_nil = ZpnMatrix::from_fn(&r, 1, 1, |_, _| BigUint::from(1u32));
        assert!(FiniteFormModule::new(&r, vec![1], bad_nil).is_err());
        // T e_1 = e_0 with |e_0| = 9 and |e_1| = 3 breaks 3 e_1 = 0.
        let m = ZpnMatrix::from_fn(&r, 2, 2, |i, j| BigUint::from(u32::from(i == 0 && j == 1)));
        assert!(FiniteFormModule::new(&r, vec![2, 1], m).is_err());
        assert!(FiniteFormModule::new(&r, vec![3], ZpnMatrix::zeros(&r, 1, 1)).is_err());
    }

    #[test]
    fn twists() {
        let r = ring(5, 4);
        let trivial = rank_one_twist(&r.one(), 6, TwistConvention::Character).unwrap();
        assert_eq!(trivial.char_element().unwrap(), CharElement::t(&r));
        let six = rank_one_twist(&r.element(6), 6, TwistConvention::Character).unwrap();
        assert_eq!(six.char_element().unwrap(), ce(&r, 0, &[-5, 1]));
        let tower = r.element(6).power_tower(1).unwrap();
        let m = rank_one_twist(&tower, 6, TwistConvention::Character).unwrap();
        assert_eq!(m.char_element().unwrap(), ce(&r, 0, &[1 - 7776, 1]));
        assert!(rank_one_twist(&r.element(5), 6, TwistConvention::Character).is_err());
        let inv = rank_one_twist(&r.element(6), 6, TwistConvention::InverseCharacter).unwrap();
        // 6^-1 = 1 - 5 + 25 - 125 mod 625 = 521, so 1 - 521 = -520.
        assert_eq!(inv.char_element().unwrap(), ce(&r, 0, &[-520, 1]));
    }

    #[test]
    fn induction_examples() {
        let r2 = ring(2, 4);
        let m = PresentationModule::cyclic(&LambdaSeries::t(&r2, 6)).induce(1);
        assert_eq!(m.char_element().unwrap(), ce(&r2, 0, &[0, 2, 1]));

        let r5 = ring(5, 4);
        let m = PresentationModule::cyclic(&s(&r5, 8, &[5])).induce(2);
        assert_eq!(m.char_element().unwrap(), CharElement::p_power(&r5, 1));

        // (1+T)^5 - 1 - 5 = T^5 + 5T^4 + 10T^3 + 10T^2 + 5T - 5
        let m = PresentationModule::cyclic(&s(&r5, 8, &[-5, 1])).induce(1);
        assert_eq!(m.char_element().unwrap(), ce(&r5, 0, &[-5, 5, 10, 10, 5, 1]));
    }

    #[test]
    fn direct_sums_multiply() {
        let r = ring(5, 3);
        let t = PresentationModule::cyclic(&LambdaSeries::t(&r, 6));
        let p = PresentationModule::cyclic(&s(&r, 6, &[5]));
        assert_eq!(t.direct_sum(&p).unwrap().char_element().unwrap(), ce(&r, 1, &[0, 1]));
        let zero = PresentationModule::free(&r, 6, 0);
        assert_eq!(t.direct_sum(&zero).unwrap().char_element().unwrap(), CharElement::t(&r));
        let a = PresentationModule::cyclic(&s(&r, 6, &[-5, 1]));
        assert_eq!(
            a.direct_sum(&a).unwrap().char_element().unwrap(),
            ce(&r, 0, &[25, -10, 1])
        );
    }

    #[test]
    fn flattening_of_cyclic_modules() {
        let r = ring(3, 2);
        // Z_p[[T]]/(T) truncated: Z/9 with T acting as 0.
        let m = PresentationModule::cyclic(&LambdaSeries::t(&r, 3))
            .flatten()
            .structure();
        assert_eq!(m.group_invariants(), vec![2]);
        assert!(m.acts_as_zero(m.theta()));
        // Z_p[[T]]/(3): (Z/3)^3 at T-degree 3.
        let m = PresentationModule::cyclic(&s(&r, 3, &[3])).flatten().structure();
        assert_eq!(m.group_invariants(), vec![1, 1, 1]);
    }

    #[test]
    fn reduction_of_zp_free_module() {
        let r = ring(5, 3);
        let m = PresentationModule::cyclic(&s(&r, 8, &[-5, 1]));
        let red = m.reduction_mod_p_n().unwrap();
        assert_eq!(red.group_invariants(), vec![3]);
        let short = PresentationModule::cyclic(&s(&r, 2, &[-5, 1]));
        assert!(matches!(
            short.reduction_mod_p_n(),
            Err(Error::PrecisionInsufficient(_))
        ));
    }

    #[test]
    fn finite_to_presentation_keeps_char() {
        let r = ring(2, 2);
        let m = finite(&r, &[2, 1], &[0, 2, 0, 0]);
        assert!(matches!(m.to_presentation(2, 4), Err(Error::PrecisionInsufficient(_))));
        let p = m.to_presentation(4, 6).unwrap();
        assert!(p.char_element().unwrap().is_one());
        let flat = p.flatten().structure();
        assert_eq!(flat.group_invariants(), vec![1, 2]);
    }
}
