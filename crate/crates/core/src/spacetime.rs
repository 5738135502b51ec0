//! Minkowski four-vectors with signature (+, -, -, -) in natural units.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Flat metric `diag(+1, -1, -1, -1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metric;

impl Metric {
    pub const SIGNATURE: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

    #[inline]
    pub fn component(mu: usize) -> f64 {
        Self::SIGNATURE[mu]
    }
}

/// Spatial axis along which a boost acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// Component index of the axis in `(t, x, y, z)`.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

/// A spacetime point or momentum `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector {
        t: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Panics on non-finite components; use [`FourVector::try_new`] for
    /// untrusted input.
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self::try_new(t, x, y, z).expect("four-vector components must be finite")
    }

    pub fn try_new(t: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        if [t, x, y, z].iter().all(|c| c.is_finite()) {
            Ok(FourVector { t, x, y, z })
        } else {
            Err(Error::invalid("four-vector", "components must be finite"))
        }
    }

    pub fn from_components(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub fn components(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    #[inline]
    pub fn spatial(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(&self, other: &FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        let (a, b) = (self.components(), other.components());
        (0..4).fold(0.0, |m, i| f64::max(m, libm::fabs(a[i] - b[i])))
    }

    /// Euclidean norm of the components (not the Minkowski norm).
    pub fn euclidean_norm(&self) -> f64 {
        libm::sqrt(self.components().iter().map(|c| c * c).sum())
    }
}

/// `g_{mu nu} a^mu b^nu`.
#[inline]
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z
}

/// Maps covariant components to contravariant ones.
#[inline]
pub fn raise_index(covector: &FourVector) -> FourVector {
    FourVector {
        t: covector.t,
        x: -covector.x,
        y: -covector.y,
        z: -covector.z,
    }
}

/// Maps contravariant components to covariant ones. With a diagonal metric of
/// unit magnitude this is the same sign flip as [`raise_index`].
#[inline]
pub fn lower_index(vector: &FourVector) -> FourVector {
    raise_index(vector)
}

/// Hyperbolic rotation in the `(t, axis)` plane. A particle at rest ends up
/// moving in the `+axis` direction for positive rapidity.
pub fn boost(v: &FourVector, rapidity: f64, axis: Axis) -> FourVector {
    let (ch, sh) = (libm::cosh(rapidity), libm::sinh(rapidity));
    let mut c = v.components();
    let i = axis.index();
    let (t, s) = (c[0], c[i]);
    c[0] = ch * t + sh * s;
    c[i] = sh * t + ch * s;
    FourVector {
        t: c[0],
        x: c[1],
        y: c[2],
        z: c[3],
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, mu: usize) -> &f64 {
        match mu {
            0 => &self.t,
            1 => &self.x,
            2 => &self.y,
            3 => &self.z,
            _ => panic!("four-vector index {mu} out of range"),
        }
    }
}

impl IndexMut<usize> for FourVector {
    fn index_mut(&mut self, mu: usize) -> &mut f64 {
        match mu {
            0 => &mut self.t,
            1 => &mut self.x,
            2 => &mut self.y,
            3 => &mut self.z,
            _ => panic!("four-vector index {mu} out of range"),
        }
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector {
            t: self.t + o.t,
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, o: FourVector) {
        *self = *self + o;
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector {
            t: self.t - o.t,
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector {
            t: -self.t,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, k: f64) -> FourVector {
        FourVector {
            t: self.t * k,
            x: self.x * k,
            y: self.y * k,
            z: self.z * k,
        }
    }
}

/// Four components of a complex covariant object, e.g. `d_mu psi`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexFourVector(pub [Complex64; 4]);

impl ComplexFourVector {
    pub fn re(&self) -> FourVector {
        let c = &self.0;
        FourVector {
            t: c[0].re,
            x: c[1].re,
            y: c[2].re,
            z: c[3].re,
        }
    }

    pub fn im(&self) -> FourVector {
        let c = &self.0;
        FourVector {
            t: c[0].im,
            x: c[1].im,
            y: c[2].im,
            z: c[3].im,
        }
    }
}

impl Index<usize> for ComplexFourVector {
    type Output = Complex64;
    fn index(&self, mu: usize) -> &Complex64 {
        &self.0[mu]
    }
}
