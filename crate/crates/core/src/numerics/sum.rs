//! Neumaier-compensated summation for real and complex terms.

use num_complex::Complex64;

/// Running sum with Neumaier compensation; the result is accurate to a few
/// ulps independently of the order in which terms arrive.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of complex terms (real and imaginary parts separately).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexCompensatedSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexCompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl Extend<Complex64> for ComplexCompensatedSum {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

/// Compensated sum of a slice of reals.
pub fn sum(xs: &[f64]) -> f64 {
    let mut s = CompensatedSum::new();
    s.extend(xs.iter().copied());
    s.value()
}

/// Compensated sum of a slice of complex numbers.
pub fn sum_complex(zs: &[Complex64]) -> Complex64 {
    let mut s = ComplexCompensatedSum::new();
    s.extend(zs.iter().copied());
    s.value()
}
