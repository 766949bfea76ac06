//! Exact scalars over the rationals or a prime field `F_p`.
//!
//! Every value carries enough information to know which field it lives in,
//! so mixing fields is detected instead of silently producing garbage.
//! Residues keep their modulus inline; rationals are always reduced with a
//! positive denominator (guaranteed by `num_rational`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Deterministic random stream used for every "general choice".
pub type SeededRng = ChaCha8Rng;

/// Build the crate's RNG from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smallest admissible prime modulus.
pub const MIN_PRIME: u32 = 1 << 16;
/// Exclusive upper bound on the prime modulus.
pub const MAX_PRIME_EXCLUSIVE: u32 = 1 << 31;
/// Default working prime: the largest prime below 2^16.
pub const DEFAULT_PRIME: u32 = 65521;

/// Magnitude bound for numerators and denominators of random rationals.
const RANDOM_RATIONAL_BOUND: i64 = 1000;

/// The field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    /// `F_p`, checking primality and the allowed modulus range.
    ///
    /// The working default 65521 sits just below 2^16 and is accepted as a
    /// named exception to the lower bound.
    pub fn prime(p: u32) -> Result<Self> {
        if p != DEFAULT_PRIME && !(MIN_PRIME..MAX_PRIME_EXCLUSIVE).contains(&p) {
            return Err(Error::InvalidField(format!(
                "modulus {p} outside [2^16, 2^31)"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn default_prime() -> Self {
        FieldSpec::Prime(DEFAULT_PRIME)
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// Parse a scalar literal ("3/7", "-2", "12345") into this field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num =
            BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad scalar literal {s:?}")))?;
        let den =
            BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad scalar literal {s:?}")))?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = BigRational::new(num, den);
        match *self {
            FieldSpec::Rationals => Ok(Scalar::Rational(q)),
            FieldSpec::Prime(p) => Scalar::Rational(q).reduce_mod(p),
        }
    }

    /// Uniform residue for `F_p`; a ratio of bounded random integers for `Q`.
    pub fn random(&self, rng: &mut SeededRng) -> Scalar {
        match *self {
            FieldSpec::Rationals => {
                let n = rng.gen_range(-RANDOM_RATIONAL_BOUND..=RANDOM_RATIONAL_BOUND);
                let d = rng.gen_range(1..=RANDOM_RATIONAL_BOUND);
                Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldSpec::Prime(p) => Scalar::Residue {
                value: rng.gen_range(0..p),
                modulus: p,
            },
        }
    }

    /// A random nonzero element.
    pub fn random_nonzero(&self, rng: &mut SeededRng) -> Scalar {
        loop {
            let v = self.random(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "qq"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "qq" => Ok(FieldSpec::Rationals),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| Error::InvalidField(format!("unrecognised field {other:?}")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

impl serde::Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Trial division is plenty for moduli below 2^31.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut i = 3u32;
    while (i as u64) * (i as u64) <= p as u64 {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

/// Arithmetic operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

/// Apply `op` to `a` and `b`.
pub fn arith(a: &Scalar, b: &Scalar, op: Op) -> Result<Scalar> {
    match op {
        Op::Add => a.try_add(b),
        Op::Sub => a.try_sub(b),
        Op::Mul => a.try_mul(b),
        Op::Div => a.try_div(b),
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // a^(p-2) mod p
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Residue value, if this is an `F_p` element.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field().to_string(),
                right: other.field().to_string(),
            })
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u64 + *b as u64) % *modulus as u64) as u32,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u64 * *b as u64) % *modulus as u64) as u32,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: inv_mod(*value as u64, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Reduce a rational into `F_p`; fails when the denominator vanishes mod p.
    pub fn reduce_mod(&self, p: u32) -> Result<Scalar> {
        match self {
            Scalar::Residue { modulus, .. } => {
                if *modulus == p {
                    Ok(self.clone())
                } else {
                    Err(Error::FieldMismatch {
                        left: self.field().to_string(),
                        right: format!("fp:{p}"),
                    })
                }
            }
            Scalar::Rational(q) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor_big(&pb);
                let den = q.denom().mod_floor_big(&pb);
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                let value = num * inv_mod(den, p as u64) % p as u64;
                Ok(Scalar::Residue {
                    value: value as u32,
                    modulus: p,
                })
            }
        }
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> u64 {
        let mut r = self % m;
        if r.is_negative() {
            r += m;
        }
        r.to_u64().expect("residue fits in u64")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// Operator sugar for internal code paths where both operands are known to
// share a field. Mixing fields here is a programming error and panics.
macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar field mismatch")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}
