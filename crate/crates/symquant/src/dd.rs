//! Minimal double-double accumulation (Dekker/Knuth error-free transforms).
//!
//! Used by the high-precision nullspace path to accumulate Gram matrices and
//! residuals beyond plain f64 rounding.

/// Double-double value `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn add_f64(self, x: f64) -> Dd {
        self.add(Dd::from(x))
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        self.mul(Dd::from(x))
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Accumulate a dot product sum_i a_i * b_i in double-double precision.
pub fn dot_dd(a: &[f64], b: &[f64]) -> Dd {
    let mut acc = Dd::ZERO;
    for (&x, &y) in a.iter().zip(b.iter()) {
        let (p, e) = two_prod(x, y);
        acc = acc.add(Dd { hi: p, lo: e });
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catches_cancellation() {
        // 1 + 1e-17 - 1 vanishes in f64 but survives in dd
        let r = Dd::from(1.0).add_f64(1e-17).add_f64(-1.0);
        assert_eq!(r.to_f64(), 1e-17);
    }

    #[test]
    fn dot_is_exacter_than_naive() {
        let a = vec![1e8, 1.0, -1e8];
        let b = vec![1e8, 0.5, 1e8];
        let dd = dot_dd(&a, &b).to_f64();
        assert_eq!(dd, 0.5);
    }
}
