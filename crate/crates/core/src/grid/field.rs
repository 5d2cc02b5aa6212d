use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::GridPatch;
use crate::linalg::{Mat5, Vec5};
use crate::{Error, Result};

/// Values that can be sampled on a grid and differentiated.
pub trait FieldValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn is_finite(&self) -> bool;
}

impl FieldValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl FieldValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl FieldValue for Vec5 {
    fn zero() -> Self {
        Vec5::zeros()
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

impl FieldValue for Mat5 {
    fn zero() -> Self {
        Mat5::zeros()
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

/// Values of type `T` at every node of a [`GridPatch`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    patch: GridPatch,
    values: Vec<T>,
}

pub type ScalarField = Field<f64>;

impl<T: Copy> Field<T> {
    pub fn new(patch: GridPatch, values: Vec<T>) -> Result<Self> {
        if values.len() != patch.len() {
            return Err(Error::ShapeMismatch { expected: patch.len(), got: values.len() });
        }
        Ok(Self { patch, values })
    }

    pub fn from_fn(patch: GridPatch, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut values = Vec::with_capacity(patch.len());
        for i in 0..patch.nu() {
            for j in 0..patch.nv() {
                values.push(f(i, j));
            }
        }
        Self { patch, values }
    }

    pub fn constant(patch: GridPatch, value: T) -> Self {
        Self { patch, values: alloc::vec![value; patch.len()] }
    }

    pub fn patch(&self) -> &GridPatch {
        &self.patch
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.patch.idx(i, j)]
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field { patch: self.patch, values: self.values.iter().map(|&x| f(x)).collect() }
    }

    pub fn zip_map<U: Copy, W: Copy>(&self, other: &Field<U>, f: impl Fn(T, U) -> W) -> Field<W> {
        debug_assert_eq!(self.patch, other.patch);
        Field {
            patch: self.patch,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl<T: FieldValue> Field<T> {
    /// First non-finite node, if any.
    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(k) => Err(Error::NonFinite { index: self.patch.ij(k) }),
            None => Ok(()),
        }
    }
}

impl ScalarField {
    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.values)
    }

    pub fn max(&self) -> f64 {
        crate::linalg::max_of(&self.values)
    }

    pub fn min(&self) -> f64 {
        -crate::linalg::max_of(&self.values.iter().map(|v| -v).collect::<Vec<_>>())
    }

    /// `max |self - other|`.
    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.zip_map(other, |a, b| a - b).max_abs()
    }
}
