use num_complex::Complex64;

/// A point of the plane in the complex coordinate convention
/// `(x0, x1) -> x1 + i*x0`.
///
/// All correlation kernels in this crate are written in terms of the complex
/// value; the real coordinates are kept so that finite-difference stencils in
/// `x0`/`x1` can be expressed without ambiguity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub x0: f64,
    pub x1: f64,
}

impl ComplexPoint {
    pub fn new(x0: f64, x1: f64) -> Self {
        Self { x0, x1 }
    }

    /// The complex value `x1 + i*x0`.
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x1, self.x0)
    }

    /// Inverse of [`ComplexPoint::z`].
    pub fn from_z(z: Complex64) -> Self {
        Self { x0: z.im, x1: z.re }
    }

    pub fn dist(&self, other: &ComplexPoint) -> f64 {
        (self.z() - other.z()).norm()
    }

    pub fn translate(&self, dz: Complex64) -> Self {
        Self::from_z(self.z() + dz)
    }

    /// Rotation by `angle` about the origin (multiplication by `e^{i angle}`).
    pub fn rotate(&self, angle: f64) -> Self {
        Self::from_z(self.z() * Complex64::from_polar(1.0, angle))
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self::from_z(z)
    }
}
