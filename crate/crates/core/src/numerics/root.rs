use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// The point `e^{2πi·numer/order}`, stored in lowest terms.
///
/// The identity is always `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    numer: u64,
    order: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple.
pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Builds the reduced root `e^{2πi a/N}`.
pub fn root_of_unity(a: i64, n: u64) -> Result<RootOfUnity> {
    if n == 0 {
        return Err(Error::Domain("root of unity with order 0".into()));
    }
    let r = a.rem_euclid(n as i64) as u64;
    Ok(RootOfUnity::reduced(r, n))
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { numer: 0, order: 1 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { numer: 1, order: 2 };

    fn reduced(numer: u64, order: u64) -> Self {
        let numer = numer % order;
        if numer == 0 {
            return Self::ONE;
        }
        let g = gcd(numer, order);
        RootOfUnity { numer: numer / g, order: order / g }
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_one(&self) -> bool {
        self.numer == 0
    }

    pub fn inverse(&self) -> Self {
        Self::reduced(self.order - self.numer, self.order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = lcm(self.order, other.order);
        let a = self.numer as u128 * (l / self.order) as u128;
        let b = other.numer as u128 * (l / other.order) as u128;
        Self::reduced(((a + b) % l as u128) as u64, l)
    }

    /// `self^k` for a signed exponent.
    pub fn pow(&self, k: i64) -> Self {
        let o = self.order as i128;
        let e = (self.numer as i128 * k as i128).rem_euclid(o);
        Self::reduced(e as u64, self.order)
    }

    /// Point on the unit circle; exact for orders 1, 2 and 4.
    pub fn complex_value(&self) -> Complex64 {
        unit_point(self.numer, self.order)
    }
}

/// `e^{2πi k/N}` with the angle folded into `(-π, π]` before evaluation.
pub(crate) fn unit_point(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    // Nearest quarter turn q, residual angle 2π(4k − qN)/(4N) in [−π/4, π/4].
    let (k, n) = (k as i128, n as i128);
    let q = (8 * k + n) / (2 * n);
    let resid = 4 * k - q * n;
    let phi = PI * resid as f64 / (2 * n) as f64;
    let (s, c) = phi.sin_cos();
    match q.rem_euclid(4) {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root:{}/{}", self.numer, self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        assert_eq!(root_of_unity(0, 5).unwrap(), RootOfUnity::ONE);
        let r = root_of_unity(2, 4).unwrap();
        assert_eq!((r.numer(), r.order()), (1, 2));
        assert_eq!(r.complex_value(), Complex64::new(-1.0, 0.0));
        let r = root_of_unity(3, 4).unwrap();
        assert_eq!((r.numer(), r.order()), (3, 4));
        assert_eq!(r.complex_value(), Complex64::new(0.0, -1.0));
        assert!(root_of_unity(1, 0).is_err());
        assert_eq!(root_of_unity(-1, 3).unwrap(), root_of_unity(2, 3).unwrap());
    }

    #[test]
    fn products_and_powers() {
        let a = root_of_unity(1, 3).unwrap();
        let b = root_of_unity(2, 3).unwrap();
        assert!(a.mul(&b).is_one());
        let i = root_of_unity(1, 4).unwrap();
        assert_eq!(i.mul(&i), RootOfUnity::MINUS_ONE);
        assert_eq!(i.pow(-1), root_of_unity(3, 4).unwrap());
        assert_eq!(i.pow(6), RootOfUnity::MINUS_ONE);
        let c = root_of_unity(1, 6).unwrap().mul(&root_of_unity(1, 4).unwrap());
        assert_eq!(c, root_of_unity(5, 12).unwrap());
    }

    #[test]
    fn value_precision() {
        for n in 1..40u64 {
            for k in 0..n {
                let z = unit_point(k, n);
                let t = k as f64 / n as f64;
                let reference = Complex64::from_polar(1.0, 2.0 * PI * (t - t.round()));
                assert!((z - reference).norm() < 2f64.powi(-49));
                assert!((z.norm() - 1.0).abs() < 2f64.powi(-51));
                assert!((z * unit_point(n - k, n) - 1.0).norm() < 2f64.powi(-50));
            }
        }
    }
}
