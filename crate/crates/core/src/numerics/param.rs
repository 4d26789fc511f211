use super::root::{root_of_unity, RootOfUnity};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Slack on `|z| ≤ 1` for floating inputs.
pub const DISK_TOL: f64 = 1.0 / (1u64 << 40) as f64;

/// Largest root order recognised when snapping a floating point onto the circle.
const SNAP_MAX_ORDER: u64 = 720;
const SNAP_TOL: f64 = 1e-13;

/// An argument on the closed unit disk: an exact root of unity or a floating complex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnitParam {
    Exact(RootOfUnity),
    Approx(Complex64),
}

/// A nonzero twist `x` in `xⁿ`, possibly outside the disk.
///
/// Euler sums with inverted interior arguments (`x_j⁻¹` with `|x_j| < 1`) need
/// factors outside the disk; convergence is then governed by products only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Twist {
    Exact(RootOfUnity),
    Approx(Complex64),
}

impl UnitParam {
    pub fn one() -> Self {
        UnitParam::Exact(RootOfUnity::ONE)
    }

    pub fn minus_one() -> Self {
        UnitParam::Exact(RootOfUnity::MINUS_ONE)
    }

    pub fn root(a: i64, n: u64) -> Result<Self> {
        Ok(UnitParam::Exact(root_of_unity(a, n)?))
    }

    /// Floating parameter; rejects points outside the disk.
    pub fn approx(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("non-finite parameter {z}")));
        }
        if z.norm() > 1.0 + DISK_TOL {
            return Err(Error::Domain(format!("|{z}| > 1 lies outside the closed unit disk")));
        }
        Ok(UnitParam::Approx(z))
    }

    pub fn value(&self) -> Complex64 {
        match self {
            UnitParam::Exact(r) => r.complex_value(),
            UnitParam::Approx(z) => *z,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            UnitParam::Exact(r) => r.is_one(),
            UnitParam::Approx(z) => (z - 1.0).norm() <= DISK_TOL,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnitParam::Exact(_))
    }

    pub fn as_root(&self) -> Option<RootOfUnity> {
        match self {
            UnitParam::Exact(r) => Some(*r),
            UnitParam::Approx(_) => None,
        }
    }

    pub fn on_circle(&self) -> bool {
        match self {
            UnitParam::Exact(_) => true,
            UnitParam::Approx(z) => (z.norm() - 1.0).abs() <= DISK_TOL,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            UnitParam::Exact(r) => UnitParam::Exact(r.inverse()),
            UnitParam::Approx(z) => UnitParam::Approx(z.conj()),
        }
    }

    pub fn to_twist(&self) -> Twist {
        match self {
            UnitParam::Exact(r) => Twist::Exact(*r),
            UnitParam::Approx(z) => Twist::Approx(*z),
        }
    }
}

/// `p⁻¹` for a point on the unit circle.
pub fn param_inverse(p: &UnitParam) -> Result<UnitParam> {
    match p {
        UnitParam::Exact(r) => Ok(UnitParam::Exact(r.inverse())),
        UnitParam::Approx(z) => {
            if (z.norm() - 1.0).abs() > DISK_TOL {
                return Err(Error::Domain(format!(
                    "inverse of {z} leaves the closed unit disk"
                )));
            }
            Ok(UnitParam::Approx(z.inv()))
        }
    }
}

/// Product of parameters; exact while every factor is exact.
pub fn param_product(ps: &[UnitParam]) -> UnitParam {
    let mut acc = UnitParam::one();
    for p in ps {
        acc = match (acc, p) {
            (UnitParam::Exact(a), UnitParam::Exact(b)) => UnitParam::Exact(a.mul(b)),
            (a, b) => UnitParam::Approx(a.value() * b.value()),
        };
    }
    acc
}

impl Twist {
    pub fn one() -> Self {
        Twist::Exact(RootOfUnity::ONE)
    }

    pub fn value(&self) -> Complex64 {
        match self {
            Twist::Exact(r) => r.complex_value(),
            Twist::Approx(z) => *z,
        }
    }

    pub fn modulus(&self) -> f64 {
        match self {
            Twist::Exact(_) => 1.0,
            Twist::Approx(z) => z.norm(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Twist::Exact(r) => r.is_one(),
            Twist::Approx(z) => (z - 1.0).norm() <= DISK_TOL,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Twist::Exact(_))
    }

    pub fn on_circle(&self) -> bool {
        (self.modulus() - 1.0).abs() <= DISK_TOL
    }

    pub fn inverse(&self) -> Twist {
        match self {
            Twist::Exact(r) => Twist::Exact(r.inverse()),
            Twist::Approx(z) => Twist::Approx(z.inv()),
        }
    }

    pub fn mul(&self, other: &Twist) -> Twist {
        match (self, other) {
            (Twist::Exact(a), Twist::Exact(b)) => Twist::Exact(a.mul(b)),
            (a, b) => Twist::Approx(a.value() * b.value()),
        }
    }

    pub fn product(ts: &[Twist]) -> Twist {
        ts.iter().fold(Twist::one(), |a, b| a.mul(b))
    }

    pub fn conj(&self) -> Twist {
        match self {
            Twist::Exact(r) => Twist::Exact(r.inverse()),
            Twist::Approx(z) => Twist::Approx(z.conj()),
        }
    }

    /// Replaces a floating point on the circle by the root of unity it
    /// represents, when one of order ≤ 720 lies within 1e-13.
    pub fn snapped(&self) -> Twist {
        match self {
            Twist::Exact(_) => *self,
            Twist::Approx(z) => snap(*z).map(Twist::Exact).unwrap_or(*self),
        }
    }

    /// Narrows to a disk parameter when `|x| ≤ 1`.
    pub fn to_unit(&self) -> Result<UnitParam> {
        match self {
            Twist::Exact(r) => Ok(UnitParam::Exact(*r)),
            Twist::Approx(z) => UnitParam::approx(*z),
        }
    }
}

fn snap(z: Complex64) -> Option<RootOfUnity> {
    if (z.norm() - 1.0).abs() > SNAP_TOL {
        return None;
    }
    let frac = z.arg() / (2.0 * std::f64::consts::PI);
    let frac = frac.rem_euclid(1.0);
    for n in 1..=SNAP_MAX_ORDER {
        let a = (frac * n as f64).round();
        if (frac * n as f64 - a).abs() <= SNAP_TOL * n as f64 {
            let r = root_of_unity(a as i64, n).ok()?;
            if (r.complex_value() - z).norm() <= SNAP_TOL {
                return Some(r);
            }
        }
    }
    None
}

impl From<UnitParam> for Twist {
    fn from(p: UnitParam) -> Self {
        p.to_twist()
    }
}

impl From<RootOfUnity> for Twist {
    fn from(r: RootOfUnity) -> Self {
        Twist::Exact(r)
    }
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("c:{}{}{}i", z.re, sign, z.im.abs())
}

fn parse_complex(body: &str) -> Result<Complex64> {
    let err = || Error::Parse(format!("malformed complex literal c:{body}"));
    let s = body.strip_suffix('i').ok_or_else(err)?;
    let bytes = s.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let i = split.ok_or_else(err)?;
    let re: f64 = s[..i].parse().map_err(|_| err())?;
    let im: f64 = s[i..].trim_start_matches('+').parse().map_err(|_| err())?;
    Ok(Complex64::new(re, im))
}

fn parse_twist_text(s: &str) -> Result<Twist> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("root:") {
        let (a, n) = body
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected root:a/N, got {s}")))?;
        let a: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s}")))?;
        let n: u64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad order in {s}")))?;
        if n == 0 {
            return Err(Error::Parse(format!("root order must be positive in {s}")));
        }
        Ok(Twist::Exact(root_of_unity(a, n)?))
    } else if let Some(body) = s.strip_prefix("c:") {
        Ok(Twist::Approx(parse_complex(body)?))
    } else {
        Err(Error::Parse(format!("expected root:a/N or c:RE+IMi, got {s}")))
    }
}

impl fmt::Display for UnitParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitParam::Exact(r) => write!(f, "{r}"),
            UnitParam::Approx(z) => write!(f, "{}", fmt_complex(*z)),
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twist::Exact(r) => write!(f, "{r}"),
            Twist::Approx(z) => write!(f, "{}", fmt_complex(*z)),
        }
    }
}

impl FromStr for UnitParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_twist_text(s)? {
            Twist::Exact(r) => Ok(UnitParam::Exact(r)),
            Twist::Approx(z) => UnitParam::approx(z),
        }
    }
}

impl FromStr for Twist {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = parse_twist_text(s)?;
        if t.value().norm() == 0.0 {
            return Err(Error::Domain("twist must be nonzero".into()));
        }
        Ok(t)
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(UnitParam);
string_serde!(Twist);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_examples() {
        let m1 = UnitParam::minus_one();
        assert_eq!(param_inverse(&m1).unwrap(), m1);
        let i = UnitParam::root(1, 4).unwrap();
        assert_eq!(param_inverse(&i).unwrap(), UnitParam::root(3, 4).unwrap());
        let z = UnitParam::approx(c(0.6, 0.8)).unwrap();
        let zi = param_inverse(&z).unwrap();
        assert!((zi.value() - c(0.6, -0.8)).norm() < 1e-15);
        assert!(param_inverse(&UnitParam::approx(c(0.5, 0.0)).unwrap()).is_err());
    }

    #[test]
    fn product_examples() {
        let i = UnitParam::root(1, 4).unwrap();
        assert_eq!(param_product(&[i, i]), UnitParam::minus_one());
        let p = param_product(&[UnitParam::minus_one(), UnitParam::approx(c(0.5, 0.0)).unwrap()]);
        assert_eq!(p, UnitParam::Approx(c(-0.5, 0.0)));
        let p = param_product(&[UnitParam::root(1, 3).unwrap(), UnitParam::root(2, 3).unwrap()]);
        assert!(p.is_one() && p.is_exact());
    }

    #[test]
    fn rejects_exterior() {
        assert!(UnitParam::approx(c(1.0, 1e-3)).is_err());
        assert!(UnitParam::approx(c(1.0 + 1e-13, 0.0)).is_ok());
    }

    #[test]
    fn text_round_trip() {
        for s in ["root:1/4", "root:0/1", "c:0.6-0.8i", "c:-1+0i", "c:1e-5+2.5e-3i"] {
            let p: UnitParam = s.parse().unwrap();
            let back: UnitParam = p.to_string().parse().unwrap();
            assert_eq!(p, back);
        }
        assert_eq!("root:2/4".parse::<UnitParam>().unwrap().to_string(), "root:1/2");
        assert!("root:1/0".parse::<UnitParam>().is_err());
        assert!("x:1".parse::<UnitParam>().is_err());
        assert!("c:2+0i".parse::<UnitParam>().is_err());
        assert!("c:2+0i".parse::<Twist>().is_ok());
    }

    #[test]
    fn snapping() {
        assert_eq!(Twist::Approx(c(-1.0, 0.0)).snapped(), Twist::Exact(RootOfUnity::MINUS_ONE));
        let w = root_of_unity(5, 12).unwrap();
        assert_eq!(Twist::Approx(w.complex_value()).snapped(), Twist::Exact(w));
        let irr = Complex64::from_polar(1.0, 1.0);
        assert!(!Twist::Approx(irr).snapped().is_exact());
    }
}
