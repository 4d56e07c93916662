//! Exact arithmetic in `A*((P¹)^N) = Q[h_1..h_N]/(h_f²)`.
//!
//! A monomial is a squarefree product of the `h_f`, indexed by the bitmask of
//! its factors, so the ring is stored densely as `2^N` rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fixed_loci::DivClass;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPoly {
    n: usize,
    coeffs: Vec<BigRational>,
}

impl TruncPoly {
    pub fn zero(n: usize) -> Self {
        assert!(n < usize::BITS as usize - 1, "too many factors: {n}");
        TruncPoly {
            n,
            coeffs: vec![BigRational::zero(); 1 << n],
        }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut p = TruncPoly::zero(n);
        p.coeffs[0] = c;
        p
    }

    pub fn one(n: usize) -> Self {
        TruncPoly::constant(n, BigRational::one())
    }

    /// `t + Σ c_f h_f`.
    pub fn linear(t: BigRational, class: &DivClass) -> Self {
        let mut p = TruncPoly::constant(class.len(), t);
        for (f, &c) in class.coords().iter().enumerate() {
            p.coeffs[1 << f] = BigRational::from_integer(c.into());
        }
        p
    }

    /// Builds from `(factor mask, coefficient)` pairs; repeated masks add up.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, BigRational)>,
    {
        let mut p = TruncPoly::zero(n);
        for (mask, c) in terms {
            assert!(
                mask < p.coeffs.len(),
                "monomial {mask:#b} out of range for N = {n}"
            );
            p.coeffs[mask] += c;
        }
        p
    }

    pub fn n_factors(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, mask: usize) -> &BigRational {
        &self.coeffs[mask]
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero terms as `(mask, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_same(other)?;
        Ok(TruncPoly {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> TruncPoly {
        TruncPoly {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check_same(other)?;
        let full = self.coeffs.len() - 1;
        let mut out = TruncPoly::zero(self.n);
        for (a, x) in self.terms() {
            let free = full & !a;
            // Enumerate every submask of the factors not already used by `a`.
            let mut b = free;
            loop {
                let y = &other.coeffs[b];
                if !y.is_zero() {
                    out.coeffs[a | b] += x * y;
                }
                if b == 0 {
                    break;
                }
                b = (b - 1) & free;
            }
        }
        Ok(out)
    }

    /// Multiplies in place by `t + Σ c_f h_f`.
    pub fn mul_linear(&mut self, t: &BigInt, class: &DivClass) -> Result<()> {
        if class.len() != self.n {
            return Err(Error::FactorMismatch(self.n, class.len()));
        }
        // Descending masks: every write to `mask` reads only smaller masks.
        for mask in (0..self.coeffs.len()).rev() {
            let mut acc = if t.is_zero() {
                BigRational::zero()
            } else {
                &self.coeffs[mask] * BigRational::from_integer(t.clone())
            };
            for (f, &c) in class.coords().iter().enumerate() {
                if c != 0 && mask & (1 << f) != 0 {
                    let below = &self.coeffs[mask ^ (1 << f)];
                    if !below.is_zero() {
                        acc += below * BigRational::from_integer(c.into());
                    }
                }
            }
            self.coeffs[mask] = acc;
        }
        Ok(())
    }

    /// Inverse of a unit via the finite Neumann series of its nilpotent part.
    pub fn invert_unit(&self) -> Result<TruncPoly> {
        let c = self.coeffs[0].clone();
        if c.is_zero() {
            return Err(Error::NonUnit);
        }
        let inv_c = c.recip();
        // p = c(1 - x) with x nilpotent, x^{N+1} = 0.
        let mut x = self.scale(&-&inv_c);
        x.coeffs[0] = BigRational::zero();
        let mut sum = TruncPoly::one(self.n);
        let mut term = TruncPoly::one(self.n);
        for _ in 0..self.n {
            term = term.mul(&x)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&inv_c))
    }

    pub fn pow(&self, m: i64) -> Result<TruncPoly> {
        let base = if m < 0 {
            self.invert_unit()?
        } else {
            self.clone()
        };
        let mut out = TruncPoly::one(self.n);
        for _ in 0..m.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// `∫_{(P¹)^N}`: the coefficient of `h_1⋯h_N`.
    pub fn integrate(&self) -> BigRational {
        self.coeffs[self.coeffs.len() - 1].clone()
    }

    fn check_same(&self, other: &TruncPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::FactorMismatch(self.n, other.n));
        }
        Ok(())
    }
}

/// `(t + Σ c_f h_f)^m`; negative `m` requires `t ≠ 0`, and so does `(t, c) = (0, 0)`.
pub fn euler_factor(t: &BigRational, class: &DivClass, m: i64) -> Result<TruncPoly> {
    if t.is_zero() && (m < 0 || (class.is_zero() && m != 0)) {
        return Err(Error::ZeroFactor(m));
    }
    TruncPoly::linear(t.clone(), class).pow(m)
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.terms() {
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let a = c.abs();
            let vars: Vec<String> = (0..self.n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| format!("h{}", i + 1))
                .collect();
            if vars.is_empty() || !a.is_one() {
                write!(f, "{a}")?;
            }
            f.write_str(&vars.join("*"))?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        q(n, 1)
    }

    fn poly(n: usize, terms: &[(usize, i64)]) -> TruncPoly {
        TruncPoly::from_terms(n, terms.iter().map(|&(m, c)| (m, int(c))))
    }

    #[test]
    fn squares_vanish() {
        let p = poly(1, &[(0, 1), (1, 1)]);
        assert_eq!(p.mul(&p).unwrap(), poly(1, &[(0, 1), (1, 2)]));
        let a = poly(2, &[(0, 1), (1, 1)]);
        let b = poly(2, &[(0, 1), (2, 1)]);
        assert_eq!(
            a.mul(&b).unwrap(),
            poly(2, &[(0, 1), (1, 1), (2, 1), (3, 1)])
        );
        assert_eq!(a.mul(&TruncPoly::one(2)).unwrap(), a);
    }

    #[test]
    fn factor_mismatch() {
        assert!(matches!(
            TruncPoly::one(1).mul(&TruncPoly::one(2)),
            Err(Error::FactorMismatch(1, 2))
        ));
    }

    #[test]
    fn inverses() {
        assert_eq!(
            TruncPoly::constant(0, int(2)).invert_unit().unwrap(),
            TruncPoly::constant(0, q(1, 2))
        );
        let p = poly(1, &[(0, 3), (1, 1)]);
        let expected = TruncPoly::from_terms(1, [(0, q(1, 3)), (1, q(-1, 9))]);
        assert_eq!(p.invert_unit().unwrap(), expected);
        let p = poly(2, &[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(
            p.invert_unit().unwrap(),
            poly(2, &[(0, 1), (1, -1), (2, -1), (3, 2)])
        );
        assert!(matches!(
            poly(1, &[(1, 1)]).invert_unit(),
            Err(Error::NonUnit)
        ));
    }

    #[test]
    fn euler_factors() {
        let z = DivClass::zero(0);
        assert_eq!(
            euler_factor(&int(5), &z, 3).unwrap(),
            TruncPoly::constant(0, int(125))
        );
        let e1 = DivClass::unit(2, 0);
        assert_eq!(
            euler_factor(&int(7), &e1, 1).unwrap(),
            poly(2, &[(0, 7), (1, 1)])
        );
        let d = DivClass::from_coords(vec![1, -1]);
        let t = int(4);
        let inv = euler_factor(&t, &d, -1).unwrap();
        let back = inv.mul(&euler_factor(&t, &d, 1).unwrap()).unwrap();
        assert_eq!(back, TruncPoly::one(2));
        assert!(euler_factor(&int(0), &DivClass::zero(1), 1).is_err());
        assert!(euler_factor(&int(0), &e1, -1).is_err());
        assert_eq!(euler_factor(&int(0), &e1, 2).unwrap(), TruncPoly::zero(2));
    }

    #[test]
    fn integration() {
        assert_eq!(TruncPoly::constant(0, int(13)).integrate(), int(13));
        assert_eq!(poly(2, &[(0, 1), (1, 1), (3, 3)]).integrate(), int(3));
        let c_top = euler_factor(&int(0), &DivClass::from_coords(vec![2, 0]), 1)
            .unwrap()
            .mul(&euler_factor(&int(0), &DivClass::from_coords(vec![0, 2]), 1).unwrap())
            .unwrap();
        assert_eq!(c_top.integrate(), int(4));
    }

    #[test]
    fn mul_linear_matches_mul() {
        let class = DivClass::from_coords(vec![1, -2, 0]);
        let p = poly(3, &[(0, 2), (1, -1), (5, 3), (6, 1)]);
        let mut q = p.clone();
        q.mul_linear(&BigInt::from(-3), &class).unwrap();
        assert_eq!(q, p.mul(&TruncPoly::linear(int(-3), &class)).unwrap());
    }

    #[test]
    fn display() {
        assert_eq!(
            poly(2, &[(0, 1), (1, -1), (3, 2)]).to_string(),
            "1 - h1 + 2h1*h2"
        );
        assert_eq!(TruncPoly::zero(1).to_string(), "0");
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = TruncPoly> {
        prop::collection::vec((-5i64..=5, 1i64..=4), 1 << n).prop_map(move |cs| {
            TruncPoly::from_terms(
                n,
                cs.into_iter().enumerate().map(|(m, (a, b))| (m, q(a, b))),
            )
        })
    }

    fn arb_triple() -> impl Strategy<Value = (TruncPoly, TruncPoly, TruncPoly)> {
        (0usize..=4).prop_flat_map(|n| (arb_poly(n), arb_poly(n), arb_poly(n)))
    }

    proptest! {
        #[test]
        fn ring_laws((a, b, c) in arb_triple()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            let lhs = a.add(&b).unwrap().integrate();
            prop_assert_eq!(lhs, a.integrate() + b.integrate());
        }

        #[test]
        fn top_monomial_extracts_constant((a, _, _) in arb_triple()) {
            let n = a.n_factors();
            let top = TruncPoly::from_terms(n, [((1 << n) - 1, int(1))]);
            prop_assert_eq!(a.mul(&top).unwrap().integrate(), a.constant_term().clone());
        }

        #[test]
        fn inverse_round_trip((mut a, _, _) in arb_triple()) {
            if a.constant_term().is_zero() {
                a = a.add(&TruncPoly::one(a.n_factors())).unwrap();
            }
            prop_assume!(!a.constant_term().is_zero());
            let inv = a.invert_unit().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), TruncPoly::one(a.n_factors()));
        }
    }
}
