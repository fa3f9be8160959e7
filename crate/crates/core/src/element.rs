//! General elements sum_x c_x u_x of a twisted group algebra.

use std::ops::Neg;

use num_traits::Num;

use crate::algebra::TwistingTable;
use crate::error::{Error, Result};

/// Scalars usable as coefficients.
pub trait Scalar: Num + Clone + Neg<Output = Self> {}

impl<T: Num + Clone + Neg<Output = T>> Scalar for T {}

#[derive(Clone, Debug, PartialEq)]
pub struct Element<T> {
    n: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> Element<T> {
    pub fn zero(n: usize) -> Self {
        Element {
            n,
            coeffs: vec![T::zero(); 1 << n],
        }
    }

    /// The basis element u_x.
    pub fn basis(n: usize, x: u32) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[x as usize] = T::one();
        e
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch(1 << n, coeffs.len()));
        }
        Ok(Element { n, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, x: u32) -> &T {
        &self.coeffs[x as usize]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Element { n: self.n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.clone() * c.clone()).collect();
        Element { n: self.n, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Product in the algebra defined by `f`, bilinear extension of
    /// u_x u_y = (-1)^f(x,y) u_{x+y}.
    pub fn mul(&self, other: &Self, f: &TwistingTable) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        assert_eq!(self.n, f.dim(), "table dimension mismatch");
        let mut out = Self::zero(self.n);
        for (x, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (y, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = a.clone() * b.clone();
                let slot = &mut out.coeffs[x ^ y];
                *slot = if f.get_bits(x as u32, y as u32) == 1 {
                    slot.clone() - term
                } else {
                    slot.clone() + term
                };
            }
        }
        out
    }

    /// Sum of squared coefficients.
    pub fn norm_squared(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }
}
